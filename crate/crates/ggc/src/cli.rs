//! The `ggc` command line.
//!
//! Exit codes: 0 when a question was answered (including "yes" and
//! "no-certified"), 2 when a search ended without an answer or ran out of
//! budget, 1 for usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ggc_core::{
    check_lemma3, decide_conjugate_into, decide_power_conjugacy, decide_subgroup_conjugacy,
    estimate_delta_capped, oracle_brute_force, oracle_free_conjugacy, Ball, BoundReport, Budget,
    Decision, GroupContext, Subgroup, Verdict, Word,
};

use crate::dot;
use crate::format::{FormatError, GroupFile, SubgroupFile};
use crate::report::{
    BallDoc, BoundsDoc, ConjugacyDoc, DecisionDoc, DeltaDoc, Lemma3Doc, MemberDoc,
};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "ggc",
    version,
    about = "Conjugacy of quasiconvex subgroups in torsion-free hyperbolic groups"
)]
pub struct Cli {
    /// Worker threads for searches (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub output: OutputMode,
    /// Add wall-clock time to decision documents.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group presentation file.
    #[arg(short = 'G', long = "group")]
    pub group: PathBuf,
    /// Override the file's hyperbolicity constant.
    #[arg(long)]
    pub delta: Option<u64>,
    /// Breadth-first search node limit.
    #[arg(long)]
    pub node_limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long = "max-conjugator", default_value_t = 4)]
    pub max_conjugator: usize,
    #[arg(long = "max-element", default_value_t = 4)]
    pub max_element: usize,
    /// Search up to the exact bounds; refused when that cannot fit the node limit.
    #[arg(long = "paper-bounds")]
    pub paper_bounds: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact length bounds for a given δ and μ.
    Bounds {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        mu: Option<u64>,
        #[arg(short = 'H')]
        h: Option<PathBuf>,
        #[arg(short = 'K')]
        k: Option<PathBuf>,
    },
    /// Is a conjugate of H meeting K nontrivially?
    Decide {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'H')]
        h: PathBuf,
        #[arg(short = 'K')]
        k: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Is a conjugate of u in K?
    ConjInto {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'u')]
        u: String,
        #[arg(short = 'K')]
        k: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Is u conjugate to a power of v?
    PowerConj {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'u')]
        u: String,
        #[arg(short = 'v')]
        v: String,
        #[arg(long = "max-exponent", default_value_t = 6)]
        max_exponent: u32,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Subgroup membership of a word.
    Member {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'K')]
        k: PathBuf,
        #[arg(short = 'w')]
        w: String,
    },
    /// Elements of the group ball, or of a subgroup with -K.
    Ball {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'K')]
        k: Option<PathBuf>,
        #[arg(long, short = 'r')]
        radius: usize,
        #[arg(long = "count-only")]
        count_only: bool,
    },
    /// Lower bound for δ from triangles in a ball.
    EstimateDelta {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, short = 'r')]
        radius: usize,
        #[arg(long = "sample-cap", default_value_t = ggc_core::cayley::TRIANGLE_SAMPLE_CAP)]
        sample_cap: usize,
    },
    /// Fellow-traveling check on one conjugacy configuration.
    CheckLemma3 {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'H')]
        h_sub: PathBuf,
        #[arg(short = 'K')]
        k_sub: PathBuf,
        #[arg(short = 'g')]
        g: String,
        #[arg(short = 'e', long = "element")]
        h: String,
        /// Write the quadrilateral as Graphviz.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Unpruned brute-force search, or free conjugacy with -u and -v.
    Oracle {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'H', required_unless_present = "u")]
        h: Option<PathBuf>,
        #[arg(short = 'K', required_unless_present = "u")]
        k: Option<PathBuf>,
        #[arg(long = "g-radius", default_value_t = 4)]
        g_radius: usize,
        #[arg(long = "h-radius", default_value_t = 4)]
        h_radius: usize,
        #[arg(short = 'u', requires = "v")]
        u: Option<String>,
        #[arg(short = 'v', requires = "u")]
        v: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(FormatError::Group(e)) if e.is_budget() => EXIT_UNDECIDED,
            _ => EXIT_INPUT,
        }
    }
}

impl From<ggc_core::Error> for CliError {
    fn from(e: ggc_core::Error) -> Self {
        CliError::Format(FormatError::Group(e))
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the result to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_DECIDED
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let result = pool.install(|| dispatch(&cli));
    match result {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Loaded {
    file: GroupFile,
    ctx: GroupContext,
}

impl Loaded {
    fn new(args: &GroupArgs) -> Result<Self, CliError> {
        let file = GroupFile::load(&args.group)?;
        let mut ctx = file.context(args.delta)?;
        if let Some(n) = args.node_limit {
            ctx = ctx.with_node_limit(n);
        }
        Ok(Loaded { file, ctx })
    }

    fn subgroup(&self, path: &Path, mu: Option<u64>) -> Result<Subgroup, CliError> {
        let sf = SubgroupFile::load(path, self.ctx.presentation().alphabet())?;
        Ok(sf.build(&self.ctx, mu)?)
    }

    fn word(&self, text: &str) -> Result<Word, CliError> {
        Ok(self.ctx.presentation().alphabet().parse_word(text)?)
    }

    fn render(&self, w: &Word) -> String {
        self.ctx.presentation().alphabet().render(w)
    }

    /// δ must come from the file or the command line outside free groups.
    fn require_delta(&self, args: &GroupArgs) -> Result<(), CliError> {
        if !self.ctx.is_free() && args.delta.is_none() && self.file.delta.is_none() {
            return Err(CliError::Usage(
                "this group has relators: give `delta:` in the group file or --delta".into(),
            ));
        }
        Ok(())
    }
}

fn budget(search: &SearchArgs, group: &GroupArgs, ctx: &GroupContext) -> Budget {
    Budget {
        max_conjugator_len: search.max_conjugator,
        max_element_len: search.max_element,
        node_limit: group.node_limit.unwrap_or(ctx.node_limit()),
        paper_mode: search.paper_bounds,
    }
}

fn emit<T: Serialize>(mode: OutputMode, doc: &T, human: &[(String, String)]) -> String {
    match mode {
        OutputMode::Machine => {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        }
        OutputMode::Human => table(human),
    }
}

fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn row(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn bounds_rows(b: &BoundReport) -> Vec<(String, String)> {
    vec![
        row("delta", b.delta),
        row("mu", b.mu),
        row("L", &b.l),
        row("L'", &b.l_prime),
        row(
            "m",
            if b.m_is_upper_bound {
                format!("{} (upper bound)", b.m)
            } else {
                b.m.to_string()
            },
        ),
        row("C", &b.c),
        row("C'", &b.c_prime),
    ]
}

fn decision_output(cli: &Cli, d: &Decision, loaded: &Loaded, started: Instant) -> (i32, String) {
    let mut doc = DecisionDoc::new(d, loaded.ctx.presentation().alphabet());
    if cli.timing {
        doc.runtime_ms = Some(started.elapsed().as_millis() as u64);
    }
    let mut rows = vec![row("verdict", &doc.verdict)];
    if let Some(w) = &doc.witness {
        let show = |s: &str| {
            if s.is_empty() {
                "1".to_string()
            } else {
                s.to_string()
            }
        };
        rows.push(row("g", show(&w.g)));
        rows.push(row("h", show(&w.h)));
        rows.push(row("k", show(&w.k)));
        if let Some(n) = w.exponent {
            rows.push(row("exponent", n));
        }
    }
    rows.push(row("max conjugator length", doc.budget.max_conjugator_len));
    rows.push(row("max element length", doc.budget.max_element_len));
    rows.push(row("paper bounds", doc.budget.paper_mode));
    if let Some(b) = &doc.bounds {
        rows.push(row("C", &b.c));
        rows.push(row("C'", &b.c_prime));
    }
    rows.push(row("candidates examined", doc.candidates_examined));
    rows.push(row("pruned", doc.pruned));
    for m in &doc.diagnostics {
        rows.push(row("note", m));
    }
    if let Some(ms) = doc.runtime_ms {
        rows.push(row("runtime ms", ms));
    }
    let code = match d.verdict {
        Verdict::Unknown => EXIT_UNDECIDED,
        _ => EXIT_DECIDED,
    };
    (code, emit(cli.output, &doc, &rows))
}

fn dispatch(cli: &Cli) -> Result<(i32, String), CliError> {
    let started = Instant::now();
    let mode = cli.output;
    match &cli.command {
        Command::Bounds { group, mu, h, k } => {
            let l = Loaded::new(group)?;
            l.require_delta(group)?;
            let mut m = mu.unwrap_or(1);
            if mu.is_none() {
                for path in [h, k].into_iter().flatten() {
                    m = m.max(l.subgroup(path, None)?.mu());
                }
            }
            let r = BoundReport::evaluate(&l.ctx, l.ctx.delta(), m);
            Ok((
                EXIT_DECIDED,
                emit(mode, &BoundsDoc::from(&r), &bounds_rows(&r)),
            ))
        }
        Command::Decide {
            group,
            h,
            k,
            search,
        } => {
            let l = Loaded::new(group)?;
            l.require_delta(group)?;
            let (hs, ks) = (l.subgroup(h, None)?, l.subgroup(k, None)?);
            let d = decide_subgroup_conjugacy(&l.ctx, &hs, &ks, budget(search, group, &l.ctx))?;
            Ok(decision_output(cli, &d, &l, started))
        }
        Command::ConjInto {
            group,
            u,
            k,
            search,
        } => {
            let l = Loaded::new(group)?;
            l.require_delta(group)?;
            let ks = l.subgroup(k, None)?;
            let d = decide_conjugate_into(&l.ctx, &l.word(u)?, &ks, budget(search, group, &l.ctx))?;
            Ok(decision_output(cli, &d, &l, started))
        }
        Command::PowerConj {
            group,
            u,
            v,
            max_exponent,
            search,
        } => {
            let l = Loaded::new(group)?;
            l.require_delta(group)?;
            let d = decide_power_conjugacy(
                &l.ctx,
                &l.word(u)?,
                &l.word(v)?,
                budget(search, group, &l.ctx),
                *max_exponent,
            )?;
            Ok(decision_output(cli, &d, &l, started))
        }
        Command::Member { group, k, w } => {
            let l = Loaded::new(group)?;
            let ks = l.subgroup(k, None)?;
            let word = l.word(w)?;
            let doc = MemberDoc {
                word: l.render(&word),
                member: ks.member(&l.ctx, &word)?,
            };
            let rows = [row("word", &doc.word), row("member", doc.member)];
            Ok((EXIT_DECIDED, emit(mode, &doc, &rows)))
        }
        Command::Ball {
            group,
            k,
            radius,
            count_only,
        } => {
            let l = Loaded::new(group)?;
            let elems: Vec<Word> = match k {
                Some(path) => l.subgroup(path, None)?.ball(&l.ctx, *radius)?,
                None => Ball::new(&l.ctx, *radius)?.elements().cloned().collect(),
            };
            let rendered: Vec<String> = elems.iter().map(|w| l.render(w)).collect();
            let doc = BallDoc {
                radius: *radius,
                count: elems.len(),
                elements: (!count_only).then(|| rendered.clone()),
            };
            let mut rows = vec![row("radius", radius), row("count", elems.len())];
            if !count_only {
                let shown: Vec<&str> = rendered
                    .iter()
                    .map(|s| if s.is_empty() { "1" } else { s.as_str() })
                    .collect();
                rows.push(row("elements", shown.join(" ")));
            }
            Ok((EXIT_DECIDED, emit(mode, &doc, &rows)))
        }
        Command::EstimateDelta {
            group,
            radius,
            sample_cap,
        } => {
            let l = Loaded::new(group)?;
            let e = estimate_delta_capped(&l.ctx, *radius, *sample_cap)?;
            let doc = DeltaDoc::from(&e);
            let rows = [
                row("radius", doc.radius),
                row("thinness lower bound", doc.thinness_lower_bound),
                row("triangles examined", doc.triangles_examined),
                row("sampled", doc.sampled),
            ];
            Ok((EXIT_DECIDED, emit(mode, &doc, &rows)))
        }
        Command::CheckLemma3 {
            group,
            h_sub,
            k_sub,
            g,
            h,
            dot: dot_path,
        } => {
            let l = Loaded::new(group)?;
            l.require_delta(group)?;
            let (hs, ks) = (l.subgroup(h_sub, None)?, l.subgroup(k_sub, None)?);
            let r = check_lemma3(&l.ctx, &hs, &ks, &l.word(g)?, &l.word(h)?)?;
            if let (Some(path), Some(t)) = (dot_path, &r.trace) {
                std::fs::write(path, dot::quadrilateral(t, l.ctx.presentation().alphabet()))?;
            }
            let doc = Lemma3Doc::from(&r);
            let mut rows = vec![
                row("applicable", doc.applicable),
                row("passed", doc.passed),
                row(
                    "checked range",
                    doc.checked_range
                        .map_or("empty".to_string(), |[a, b]| format!("{a}..={b}")),
                ),
                row("bound", doc.bound),
                row("max distance", doc.max_distance),
                row("mu", doc.mu),
            ];
            if !doc.violations.is_empty() {
                rows.push(row("violations", format!("{:?}", doc.violations)));
            }
            if let Some(d) = &doc.distances {
                rows.push(row("distances", format!("{d:?}")));
            }
            Ok((EXIT_DECIDED, emit(mode, &doc, &rows)))
        }
        Command::Oracle {
            group,
            h,
            k,
            g_radius,
            h_radius,
            u,
            v,
        } => {
            let l = Loaded::new(group)?;
            if let (Some(u), Some(v)) = (u, v) {
                if !l.ctx.is_free() {
                    return Err(CliError::Usage(
                        "the conjugacy oracle needs a free group".into(),
                    ));
                }
                let (uw, vw) = (l.word(u)?, l.word(v)?);
                let doc = ConjugacyDoc {
                    u: l.render(&uw),
                    v: l.render(&vw),
                    conjugate: oracle_free_conjugacy(&uw, &vw),
                };
                let rows = [
                    row("u", &doc.u),
                    row("v", &doc.v),
                    row("conjugate", doc.conjugate),
                ];
                return Ok((EXIT_DECIDED, emit(mode, &doc, &rows)));
            }
            let (Some(h), Some(k)) = (h, k) else {
                return Err(CliError::Usage(
                    "oracle needs -H and -K, or -u and -v".into(),
                ));
            };
            let (hs, ks) = (l.subgroup(h, None)?, l.subgroup(k, None)?);
            let d = oracle_brute_force(&l.ctx, &hs, &ks, *g_radius, *h_radius)?;
            Ok(decision_output(cli, &d, &l, started))
        }
    }
}
