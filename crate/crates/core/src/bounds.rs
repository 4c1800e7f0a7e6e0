//! Exact conjugator and element length bounds.
//!
//! With `δ` the hyperbolicity constant and `μ` the quasiconvexity constant:
//!
//! * `L`  = number of strings of length `< 8δ + μ`
//! * `L'` = number of strings of length `< 2δ + 2μ`
//! * `m`  = number of elements of length `<= 42δ + 12μ`
//! * `C`  = `4δ + 2μ + (m² + 1)·L`, a bound on the conjugator
//! * `C'` = `(L' + 2)·2μ + 8δ`, a bound on the conjugated element

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::cayley::Ball;
use crate::error::Result;
use crate::normalizer::GroupContext;
use crate::subgroup::Subgroup;

/// Node budget for counting elements by breadth-first search when building a
/// report; past it `m` is replaced by the string count.
pub const ELEMENT_COUNT_NODE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub delta: u64,
    pub mu: u64,
    pub l: BigUint,
    pub l_prime: BigUint,
    pub m: BigUint,
    /// `m` is the string count `count_words(2|X|, n + 1)`, not an exact
    /// element count, and `C` inherits the over-estimate.
    pub m_is_upper_bound: bool,
    pub c: BigUint,
    pub c_prime: BigUint,
}

/// `Σ_{i < max_len} sᶦ`: all strings, reduced or not, shorter than `max_len`.
pub fn count_words(alphabet_size: u64, max_len_exclusive: u64) -> BigUint {
    let s = BigUint::from(alphabet_size);
    let mut total = BigUint::zero();
    let mut term = BigUint::one();
    for _ in 0..max_len_exclusive {
        total += &term;
        term *= &s;
    }
    total
}

/// Size of the ball of radius `n` in the free group of rank `k`.
pub fn free_ball_size(k: u64, n: u64) -> BigUint {
    match k {
        0 => BigUint::one(),
        1 => BigUint::from(1 + 2 * n),
        _ => {
            let grow = BigUint::from(2 * k - 1).pow(n as u32);
            BigUint::one() + BigUint::from(2 * k) * (grow - 1u32) / BigUint::from(2 * k - 2)
        }
    }
}

/// Number of elements of length `<= n`: closed formula in free groups,
/// breadth-first search otherwise.
pub fn count_elements(ctx: &GroupContext, max_len_inclusive: u64) -> Result<BigUint> {
    if ctx.is_free() {
        return Ok(free_ball_size(ctx.rank() as u64, max_len_inclusive));
    }
    let ball = Ball::new(ctx, max_len_inclusive as usize)?;
    Ok(BigUint::from(ball.len()))
}

impl BoundReport {
    /// Evaluates every constant for the given `δ` and `μ` (clamped to `>= 1`).
    pub fn evaluate(ctx: &GroupContext, delta: u64, mu: u64) -> BoundReport {
        let mu = mu.max(1);
        let alphabet = 2 * ctx.rank() as u64;
        let l = count_words(alphabet, 8 * delta + mu);
        let l_prime = count_words(alphabet, 2 * delta + 2 * mu);
        let radius = 42 * delta + 12 * mu;
        let counted = if ctx.is_free() {
            count_elements(ctx, radius).ok()
        } else {
            let capped = ctx
                .clone()
                .with_node_limit(ctx.node_limit().min(ELEMENT_COUNT_NODE_LIMIT));
            count_elements(&capped, radius).ok()
        };
        let (m, m_is_upper_bound) = match counted {
            Some(m) => (m, false),
            None => (count_words(alphabet, radius + 1), true),
        };
        let c = BigUint::from(4 * delta + 2 * mu) + (&m * &m + 1u32) * &l;
        let c_prime = (&l_prime + 2u32) * BigUint::from(2 * mu) + BigUint::from(8 * delta);
        BoundReport {
            delta,
            mu,
            l,
            l_prime,
            m,
            m_is_upper_bound,
            c,
            c_prime,
        }
    }
}

/// Bounds for deciding conjugacy of `H` into `K`, using `δ` of the context
/// and `μ = max(μ_H, μ_K)`.
pub fn compute_bounds(ctx: &GroupContext, h_sub: &Subgroup, k_sub: &Subgroup) -> BoundReport {
    BoundReport::evaluate(ctx, ctx.delta(), h_sub.mu().max(k_sub.mu()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use alloc::string::ToString;

    fn f2(delta: u64) -> GroupContext {
        GroupContext::new(Presentation::free("ab").unwrap(), delta).unwrap()
    }

    #[test]
    fn count_words_examples() {
        assert_eq!(count_words(4, 9), BigUint::from(87381u32));
        assert_eq!(count_words(4, 1), BigUint::one());
        assert_eq!(count_words(4, 4), BigUint::from(85u32));
        assert_eq!(count_words(4, 0), BigUint::zero());
    }

    #[test]
    fn count_elements_examples() {
        let ctx = f2(0);
        assert_eq!(count_elements(&ctx, 2).unwrap(), BigUint::from(17u32));
        assert_eq!(count_elements(&ctx, 0).unwrap(), BigUint::one());
        let expected = BigUint::from(3u32).pow(54) * 2u32 - 1u32;
        assert_eq!(count_elements(&ctx, 54).unwrap(), expected);
        let z = GroupContext::new(Presentation::free("a").unwrap(), 0).unwrap();
        assert_eq!(count_elements(&z, 5).unwrap(), BigUint::from(11u32));
    }

    #[test]
    fn formula_matches_breadth_first_search() {
        for rank in ["a", "ab", "abc"] {
            let ctx = GroupContext::new(Presentation::free(rank).unwrap(), 0).unwrap();
            for n in 0..=5 {
                let ball = Ball::new(&ctx, n).unwrap();
                assert_eq!(
                    count_elements(&ctx, n as u64).unwrap(),
                    BigUint::from(ball.len())
                );
            }
        }
    }

    #[test]
    fn report_delta_one() {
        let r = BoundReport::evaluate(&f2(1), 1, 1);
        assert_eq!(r.l, BigUint::from(87381u32));
        assert_eq!(r.l_prime, BigUint::from(85u32));
        assert_eq!(r.c_prime, BigUint::from(182u32));
        let m = BigUint::from(3u32).pow(54) * 2u32 - 1u32;
        assert_eq!(r.c, BigUint::from(6u32) + (&m * &m + 1u32) * 87381u32);
        assert_eq!(r.m, m);
        assert!(!r.m_is_upper_bound);
    }

    #[test]
    fn report_delta_zero_and_clamp() {
        let r = BoundReport::evaluate(&f2(0), 0, 1);
        assert_eq!(r.l, BigUint::one());
        assert_eq!(r.l_prime, BigUint::from(5u32));
        assert_eq!(r.c_prime, BigUint::from(14u32));
        assert_eq!(r.m.to_string(), "1062881");
        let m = BigUint::from(1062881u32);
        assert_eq!(r.c, BigUint::from(2u32) + (&m * &m + 1u32));
        assert_eq!(BoundReport::evaluate(&f2(0), 0, 0), r);
    }

    #[test]
    fn non_free_report_falls_back_to_string_count() {
        let ctx =
            GroupContext::new(Presentation::from_strs("abcd", &["abABcdCD"]).unwrap(), 1).unwrap();
        let r = BoundReport::evaluate(&ctx, 1, 1);
        assert!(r.m_is_upper_bound);
        assert_eq!(r.m, count_words(8, 55));
    }
}
