//! Decision procedures for conjugacy into quasiconvex subgroups.
//!
//! Every search walks conjugators `g` in ShortLex order and, for each `g`,
//! the nontrivial candidates `h` in ShortLex order, so the first hit is the
//! least witness under `(|g|, g, |h|, h)`. Work inside a sphere is split into
//! fixed-size chunks; chunk results are merged in order, which keeps the
//! outcome independent of the thread count.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bounds::{compute_bounds, free_ball_size, BoundReport};
use crate::cayley::Ball;
use crate::error::{Error, Result};
use crate::normalizer::{GroupContext, DEFAULT_NODE_LIMIT};
use crate::par;
use crate::presentation::Word;
use crate::subgroup::{DoubleCosetReducer, Membership, Subgroup};

const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// `B_g`: longest conjugator tried.
    pub max_conjugator_len: usize,
    /// `B_h`: longest subgroup element tried.
    pub max_element_len: usize,
    pub node_limit: usize,
    /// Take `B_g`, `B_h` from the exact bounds `C - 1`, `C' - 1`.
    pub paper_mode: bool,
}

impl Budget {
    pub fn new(max_conjugator_len: usize, max_element_len: usize) -> Self {
        Budget {
            max_conjugator_len,
            max_element_len,
            node_limit: DEFAULT_NODE_LIMIT,
            paper_mode: false,
        }
    }

    pub fn paper() -> Self {
        Budget {
            paper_mode: true,
            ..Budget::new(0, 0)
        }
    }

    pub fn with_node_limit(mut self, node_limit: usize) -> Self {
        self.node_limit = node_limit;
        self
    }
}

/// `g h g⁻¹ = k`, all three as normal forms. `exponent` is set by power
/// conjugacy: `k = vⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub g: Word,
    pub h: Word,
    pub k: Word,
    pub exponent: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes(Witness),
    /// The search covered every conjugator shorter than `C` and every
    /// element shorter than `C'`.
    NoCertified,
    Unknown,
}

impl Verdict {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::NoCertified => "no-certified",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    /// The budget actually searched.
    pub budget: Budget,
    pub bounds: Option<BoundReport>,
    /// `(g, h)` pairs whose conjugate was tested for membership.
    pub candidates_examined: u64,
    /// Conjugators skipped as not double-coset minimal.
    pub pruned: u64,
    pub diagnostics: Vec<String>,
}

/// Resolves paper mode and caps the budget at `C - 1`, `C' - 1`. Returns the
/// searched budget and whether it covers the bounds.
fn effective_budget(
    ctx: &GroupContext,
    budget: Budget,
    bounds: &BoundReport,
) -> Result<(Budget, bool)> {
    let c1 = &bounds.c - 1u32;
    let cp1 = &bounds.c_prime - 1u32;
    let mut b = budget;
    if budget.paper_mode {
        let infeasible = || Error::PaperBoundsInfeasible {
            conjugator_bound: bounds.c.to_string(),
        };
        let bg = c1.to_u64().ok_or_else(infeasible)?;
        let bh = cp1.to_usize().ok_or_else(infeasible)?;
        if ball_exceeds(ctx.rank() as u64, bg, budget.node_limit) {
            return Err(infeasible());
        }
        b.max_conjugator_len = bg as usize;
        b.max_element_len = bh;
    }
    let cap = |x: usize, bound: &BigUint| bound.to_usize().map_or(x, |c| x.min(c));
    b.max_conjugator_len = cap(b.max_conjugator_len, &c1);
    b.max_element_len = cap(b.max_element_len, &cp1);
    let covered = BigUint::from(b.max_conjugator_len) >= c1
        && BigUint::from(b.max_element_len) >= cp1
        && !bounds.m_is_upper_bound;
    Ok((b, covered))
}

/// Whether the free ball of radius `n` has more than `limit` elements; stops
/// counting as soon as it does.
fn ball_exceeds(rank: u64, n: u64, limit: usize) -> bool {
    if rank <= 1 {
        return free_ball_size(rank, n) > BigUint::from(limit);
    }
    let (mut total, mut sphere) = (1u128, 2 * rank as u128);
    for _ in 0..n {
        total += sphere;
        if total > limit as u128 {
            return true;
        }
        sphere *= 2 * rank as u128 - 1;
    }
    false
}

struct Outcome {
    pruned: bool,
    tested: u64,
    hit: Option<(usize, Word)>,
}

struct Search<'a> {
    ctx: &'a GroupContext,
    candidates: Vec<Word>,
    membership: Membership<'a>,
    reducer: Option<DoubleCosetReducer<'a>>,
}

struct Found {
    witness: Option<Witness>,
    examined: u64,
    pruned: u64,
}

impl Search<'_> {
    fn test(&self, g: &Word) -> Result<Outcome> {
        if let Some(r) = &self.reducer {
            if !r.is_locally_minimal(g)? {
                return Ok(Outcome {
                    pruned: true,
                    tested: 0,
                    hit: None,
                });
            }
        }
        let gi = g.inverse();
        for (i, h) in self.candidates.iter().enumerate() {
            let x = Word::product(&[g, h, &gi]);
            if self.membership.contains(&x)? {
                return Ok(Outcome {
                    pruned: false,
                    tested: i as u64 + 1,
                    hit: Some((i, self.ctx.geodesic(&x)?)),
                });
            }
        }
        Ok(Outcome {
            pruned: false,
            tested: self.candidates.len() as u64,
            hit: None,
        })
    }

    fn run(&self, g_radius: usize) -> Result<Found> {
        let mut found = Found {
            witness: None,
            examined: 0,
            pruned: 0,
        };
        if self.candidates.is_empty() {
            return Ok(found);
        }
        let mut ball = Ball::new(self.ctx, 0)?;
        for r in 0..=g_radius {
            if r > 0 && !ball.grow(self.ctx)? {
                break;
            }
            let sphere = ball.sphere(r);
            for range in par::chunk_ranges(sphere.len(), CHUNK) {
                let chunk = &sphere[range];
                let outcomes = par::map(chunk, |g| self.test(g));
                for (g, o) in chunk.iter().zip(outcomes) {
                    let o = o?;
                    found.examined += o.tested;
                    found.pruned += o.pruned as u64;
                    if let Some((i, k)) = o.hit {
                        found.witness = Some(Witness {
                            g: g.clone(),
                            h: self.candidates[i].clone(),
                            k,
                            exponent: None,
                        });
                        return Ok(found);
                    }
                }
            }
        }
        Ok(found)
    }
}

fn finish(
    result: Result<Found>,
    budget: Budget,
    bounds: BoundReport,
    covered: bool,
) -> Result<Decision> {
    let mut diagnostics = Vec::new();
    let (verdict, examined, pruned) = match result {
        Ok(f) => match f.witness {
            Some(w) => (Verdict::Yes(w), f.examined, f.pruned),
            None if covered => (Verdict::NoCertified, f.examined, f.pruned),
            None => {
                diagnostics.push(String::from(
                    "search budget is below the certified bounds; no witness found",
                ));
                (Verdict::Unknown, f.examined, f.pruned)
            }
        },
        Err(e) if e.is_budget() => {
            diagnostics.push(format!("{e}"));
            (Verdict::Unknown, 0, 0)
        }
        Err(e) => return Err(e),
    };
    Ok(Decision {
        verdict,
        budget,
        bounds: Some(bounds),
        candidates_examined: examined,
        pruned,
        diagnostics,
    })
}

fn nontrivial(ws: Vec<Word>) -> Vec<Word> {
    ws.into_iter().filter(|w| !w.is_empty()).collect()
}

/// Is some conjugate `g H g⁻¹` meeting `K` nontrivially, with `|g| <= B_g`
/// and the element of `H` of length `<= B_h`?
pub fn decide_subgroup_conjugacy(
    ctx: &GroupContext,
    h_sub: &Subgroup,
    k_sub: &Subgroup,
    budget: Budget,
) -> Result<Decision> {
    let ctx = &ctx.clone().with_node_limit(budget.node_limit);
    let bounds = compute_bounds(ctx, h_sub, k_sub);
    let (b, covered) = effective_budget(ctx, budget, &bounds)?;
    let result = (|| {
        let search = Search {
            ctx,
            candidates: nontrivial(h_sub.ball(ctx, b.max_element_len)?),
            membership: k_sub.membership(ctx, 2 * b.max_conjugator_len + b.max_element_len)?,
            reducer: Some(DoubleCosetReducer::new(ctx, k_sub, h_sub)?),
        };
        search.run(b.max_conjugator_len)
    })();
    finish(result, b, bounds, covered)
}

/// Is `g u g⁻¹ ∈ K` for some `|g| <= B_g`?
pub fn decide_conjugate_into(
    ctx: &GroupContext,
    u: &Word,
    k_sub: &Subgroup,
    budget: Budget,
) -> Result<Decision> {
    let ctx = &ctx.clone().with_node_limit(budget.node_limit);
    if ctx.is_trivial(u) {
        return Err(Error::InvalidArgument("the element must be nontrivial"));
    }
    let u_sub = Subgroup::cyclic(ctx, u)?;
    let bounds = compute_bounds(ctx, &u_sub, k_sub);
    let (b, covered) = effective_budget(ctx, budget, &bounds)?;
    let result = (|| {
        let u_nf = ctx.geodesic(u)?;
        let search = Search {
            ctx,
            membership: k_sub.membership(ctx, 2 * b.max_conjugator_len + u_nf.len())?,
            candidates: alloc::vec![u_nf],
            reducer: Some(DoubleCosetReducer::new(ctx, k_sub, &u_sub)?),
        };
        search.run(b.max_conjugator_len)
    })();
    finish(result, b, bounds, covered)
}

/// Is `u` conjugate to a power of `v`? A `Yes` carries `n` with `g u g⁻¹ = vⁿ`,
/// recovered by scanning `1 <= |n| <= max_exponent`.
pub fn decide_power_conjugacy(
    ctx: &GroupContext,
    u: &Word,
    v: &Word,
    budget: Budget,
    max_exponent: u32,
) -> Result<Decision> {
    let k_sub = Subgroup::cyclic(ctx, v)?;
    let mut d = decide_conjugate_into(ctx, u, &k_sub, budget)?;
    if let Verdict::Yes(w) = &mut d.verdict {
        let n = (1..=max_exponent as i64)
            .flat_map(|n| [n, -n])
            .find(|&n| ctx.are_equal(&v.pow(n), &w.k))
            .ok_or(Error::ExponentNotRecovered { max_exponent })?;
        w.exponent = Some(n);
    }
    Ok(d)
}

/// Conjugacy in a free group: the cyclically reduced cores are rotations of
/// one another.
pub fn oracle_free_conjugacy(u: &Word, v: &Word) -> bool {
    let (a, _) = u.cyclic_reduce();
    let (b, _) = v.cyclic_reduce();
    a.len() == b.len() && (0..a.len().max(1)).any(|i| a.rotate(i) == b)
}

/// Unpruned exhaustive search over `ball(g_radius)` and the nontrivial
/// elements of `H` up to `h_radius`. Never certifies a negative.
pub fn oracle_brute_force(
    ctx: &GroupContext,
    h_sub: &Subgroup,
    k_sub: &Subgroup,
    g_radius: usize,
    h_radius: usize,
) -> Result<Decision> {
    let search = Search {
        ctx,
        candidates: nontrivial(h_sub.ball(ctx, h_radius)?),
        membership: k_sub.membership(ctx, 2 * g_radius + h_radius)?,
        reducer: None,
    };
    let f = search.run(g_radius)?;
    let budget = Budget {
        max_conjugator_len: g_radius,
        max_element_len: h_radius,
        node_limit: ctx.node_limit(),
        paper_mode: false,
    };
    Ok(Decision {
        verdict: f.witness.map_or(Verdict::Unknown, Verdict::Yes),
        budget,
        bounds: None,
        candidates_examined: f.examined,
        pruned: 0,
        diagnostics: Vec::new(),
    })
}

/// Independent re-check of a witness against `H` and `K`.
pub fn verify_witness(
    ctx: &GroupContext,
    h_sub: &Subgroup,
    k_sub: &Subgroup,
    w: &Witness,
) -> Result<bool> {
    let conj = Word::product(&[&w.g, &w.h, &w.g.inverse()]);
    Ok(!ctx.is_trivial(&w.h)
        && h_sub.member(ctx, &w.h)?
        && ctx.are_equal(&conj, &w.k)
        && k_sub.member(ctx, &w.k)?)
}
