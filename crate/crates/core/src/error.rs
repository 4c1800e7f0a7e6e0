use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A character that is neither a declared generator nor its inverse.
    UnknownLetter(char),
    DuplicateGenerator(char),
    /// Generators must be lowercase ASCII letters (uppercase spells inverses).
    InvalidGenerator(char),
    /// A search or enumeration would exceed the configured node limit.
    BudgetExceeded {
        limit: usize,
    },
    TrivialGenerator,
    NotInSubgroup,
    /// Relators present but the presentation fails the C'(1/6) piece check.
    UnsupportedPresentation,
    /// The chosen subgroup backend cannot run over this context.
    BackendMismatch(&'static str),
    /// Non-free contexts need an explicit quasiconvexity constant.
    MuRequired,
    /// Membership held but no exponent in range reproduced the element.
    ExponentNotRecovered {
        max_exponent: u32,
    },
    /// Paper-bound mode asked for a search that cannot fit the node limit.
    PaperBoundsInfeasible {
        conjugator_bound: String,
    },
    InvalidArgument(&'static str),
}

impl Error {
    /// Errors caused by running out of budget rather than by bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::ExponentNotRecovered { .. }
                | Error::PaperBoundsInfeasible { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownLetter(c) => write!(f, "unknown letter '{c}'"),
            Error::DuplicateGenerator(c) => write!(f, "duplicate generator '{c}'"),
            Error::InvalidGenerator(c) => {
                write!(f, "invalid generator '{c}': generators are lowercase ASCII letters")
            }
            Error::BudgetExceeded { limit } => write!(f, "node limit of {limit} exceeded"),
            Error::TrivialGenerator => write!(f, "generator is trivial"),
            Error::NotInSubgroup => write!(f, "element is not in the subgroup"),
            Error::UnsupportedPresentation => write!(
                f,
                "presentation is neither free nor C'(1/6); no word-problem backend"
            ),
            Error::BackendMismatch(what) => write!(f, "backend mismatch: {what}"),
            Error::MuRequired => {
                write!(f, "a quasiconvexity constant mu is required for non-free groups")
            }
            Error::ExponentNotRecovered { max_exponent } => write!(
                f,
                "conjugate lies in the cyclic subgroup but no exponent |n| <= {max_exponent} matches"
            ),
            Error::PaperBoundsInfeasible { conjugator_bound } => write!(
                f,
                "paper bounds infeasible: conjugator search up to length {conjugator_bound} exceeds the node limit"
            ),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

impl core::error::Error for Error {}
