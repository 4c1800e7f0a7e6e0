//! Bounded pieces of the Cayley graph.
//!
//! Vertices are named by ShortLex normal forms: the ShortLex-least geodesic
//! word for each element. In free groups that is the freely reduced word; in
//! Dehn contexts it is found by breadth-first search.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::normalizer::GroupContext;
use crate::par;
use crate::presentation::Word;
use crate::subgroup::{reduce_double_coset, Subgroup};

/// Triangle count above which [`estimate_delta`] switches to stride sampling.
pub const TRIANGLE_SAMPLE_CAP: usize = 1_000_000;

/// All elements of length at most `radius`, one ShortLex normal form each,
/// stored sphere by sphere in ShortLex order.
#[derive(Debug, Clone)]
pub struct Ball {
    spheres: Vec<Vec<Word>>,
    count: usize,
    /// The last sphere came out empty: the ball is the whole (finite) group.
    exhausted: bool,
    /// Dehn contexts only: invariant key -> normal forms with that key.
    buckets: BTreeMap<Vec<i64>, Vec<Word>>,
}

impl Ball {
    pub fn new(ctx: &GroupContext, radius: usize) -> Result<Ball> {
        let mut ball = Ball {
            spheres: alloc::vec![alloc::vec![Word::empty()]],
            count: 1,
            exhausted: false,
            buckets: BTreeMap::new(),
        };
        if !ctx.is_free() {
            ball.buckets.insert(
                ctx.invariant_key(&Word::empty()),
                alloc::vec![Word::empty()],
            );
        }
        while ball.radius() < radius {
            if !ball.grow(ctx)? {
                break;
            }
        }
        Ok(ball)
    }

    pub fn radius(&self) -> usize {
        self.spheres.len() - 1
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn sphere(&self, r: usize) -> &[Word] {
        self.spheres.get(r).map(|s| s.as_slice()).unwrap_or(&[])
    }

    /// Every element in ShortLex order.
    pub fn elements(&self) -> impl Iterator<Item = &Word> {
        self.spheres.iter().flatten()
    }

    /// Extends the ball by one sphere. Returns `false` (and leaves the ball
    /// unchanged) once the group has been exhausted.
    pub fn grow(&mut self, ctx: &GroupContext) -> Result<bool> {
        if self.exhausted {
            return Ok(false);
        }
        let last = self.spheres.last().expect("ball has a centre");
        let letters: Vec<_> = ctx.presentation().alphabet().letters().collect();
        let next: Vec<Word> = if ctx.is_free() {
            let mut out = Vec::new();
            for x in last {
                for &s in &letters {
                    if x.last() != Some(s.inverse()) {
                        out.push(x.concat(&Word::letter(s)));
                    }
                }
            }
            out
        } else {
            // Candidates in ShortLex order; the first representative of each
            // new element is its ShortLex-least geodesic.
            let buckets = &self.buckets;
            let fresh = par::map(last, |x| {
                let mut out = Vec::new();
                for &s in &letters {
                    if x.last() == Some(s.inverse()) {
                        continue;
                    }
                    let y = x.concat(&Word::letter(s));
                    if ctx.dehn_reduce(&y).len() < y.len() {
                        continue;
                    }
                    let key = ctx.invariant_key(&y);
                    let known = buckets
                        .get(&key)
                        .is_some_and(|b| b.iter().any(|z| ctx.are_equal(z, &y)));
                    if !known {
                        out.push((key, y));
                    }
                }
                out
            });
            let base = self.count;
            let mut out = Vec::new();
            for (key, y) in fresh.into_iter().flatten() {
                let bucket = self.buckets.entry(key).or_default();
                // only entries added during this round can collide now
                let dup = bucket
                    .iter()
                    .rev()
                    .take_while(|z| z.len() == y.len())
                    .any(|z| ctx.are_equal(z, &y));
                if !dup {
                    bucket.push(y.clone());
                    out.push(y);
                    if base + out.len() > ctx.node_limit() {
                        return Err(Error::BudgetExceeded {
                            limit: ctx.node_limit(),
                        });
                    }
                }
            }
            out
        };
        if next.is_empty() {
            self.exhausted = true;
            return Ok(false);
        }
        if self.count + next.len() > ctx.node_limit() {
            return Err(Error::BudgetExceeded {
                limit: ctx.node_limit(),
            });
        }
        self.count += next.len();
        self.spheres.push(next);
        Ok(true)
    }

    /// Normal form of `w` if its element lies in the ball.
    pub fn find(&self, ctx: &GroupContext, w: &Word) -> Option<Word> {
        if ctx.is_free() {
            let r = w.free_reduce();
            return (r.len() <= self.radius()).then_some(r);
        }
        let reduced = ctx.dehn_reduce(w);
        self.buckets
            .get(&ctx.invariant_key(&reduced))?
            .iter()
            .find(|z| z.len() <= reduced.len() && ctx.are_equal(z, &reduced))
            .cloned()
    }

    pub fn contains(&self, ctx: &GroupContext, w: &Word) -> bool {
        self.find(ctx, w).is_some()
    }
}

/// Normal forms for a batch of words, sharing one ball in Dehn contexts.
pub(crate) struct Normalizer<'a> {
    ctx: &'a GroupContext,
    ball: Option<Ball>,
}

impl<'a> Normalizer<'a> {
    /// Ready to normalize any word whose Dehn reduction has length `<= bound`.
    pub(crate) fn new(ctx: &'a GroupContext, bound: usize) -> Result<Self> {
        let ball = if ctx.is_free() {
            None
        } else {
            Some(Ball::new(ctx, bound)?)
        };
        Ok(Normalizer { ctx, ball })
    }

    pub(crate) fn nf(&self, w: &Word) -> Result<Word> {
        match &self.ball {
            None => Ok(w.free_reduce()),
            Some(ball) => match ball.find(self.ctx, w) {
                Some(x) => Ok(x),
                None => self.ctx.geodesic(w),
            },
        }
    }

    /// Normal form of `w` if it lies within the bound, `None` otherwise.
    pub(crate) fn find_in_ball(&self, w: &Word) -> Option<Word> {
        match &self.ball {
            None => Some(w.free_reduce()),
            Some(ball) => ball.find(self.ctx, w),
        }
    }

    pub(crate) fn distance(&self, x: &Word, y: &Word) -> Result<usize> {
        Ok(self.nf(&x.inverse().concat(y))?.len())
    }
}

/// The ShortLex-least geodesic word labelling a path from `from` to `to`.
pub fn a_geodesic(ctx: &GroupContext, from: &Word, to: &Word) -> Result<Word> {
    ctx.geodesic(&from.inverse().concat(to))
}

/// The geodesic 4-gon of the conjugacy configuration `g h g⁻¹ = k`:
///
/// * `p` from `1` to `g`, labelled by the geodesic of `g`;
/// * `p_prime` from `k` to `g h`, with the same label;
/// * `p_h` from `g` to `g h`, labelled by the geodesic of `h`;
/// * `p_k` from `1` to `k`, labelled by the geodesic of `k`.
///
/// Vertex lists hold reduced words in path order: normal forms in free
/// groups, Dehn-reduced words otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrilateralTrace {
    pub g: Word,
    pub h: Word,
    pub k: Word,
    pub p: Vec<Word>,
    pub p_prime: Vec<Word>,
    pub p_h: Vec<Word>,
    pub p_k: Vec<Word>,
    /// `d(v_i, v'_i)` for `i = 0..=n`.
    pub distances: Vec<usize>,
}

impl QuadrilateralTrace {
    /// `n`, the length of `g`.
    pub fn n(&self) -> usize {
        self.p.len() - 1
    }
}

pub fn build_quadrilateral(ctx: &GroupContext, g: &Word, h: &Word) -> Result<QuadrilateralTrace> {
    if ctx.is_trivial(h) {
        return Err(Error::InvalidArgument("h must be nontrivial"));
    }
    let g = ctx.geodesic(g)?;
    let h = ctx.geodesic(h)?;
    let k = ctx.geodesic(&Word::product(&[&g, &h, &g.inverse()]))?;
    let n = g.len();
    let p: Vec<Word> = (0..=n).map(|i| g.prefix(i)).collect();
    let p_prime: Vec<Word> = p.iter().map(|v| ctx.dehn_reduce(&k.concat(v))).collect();
    let p_h: Vec<Word> = (0..=h.len())
        .map(|j| ctx.dehn_reduce(&g.concat(&h.prefix(j))))
        .collect();
    let p_k: Vec<Word> = (0..=k.len()).map(|j| k.prefix(j)).collect();
    let gaps: Vec<Word> = p
        .iter()
        .zip(&p_prime)
        .map(|(v, w)| ctx.dehn_reduce(&v.inverse().concat(w)))
        .collect();
    let norm = Normalizer::new(ctx, gaps.iter().map(Word::len).max().unwrap_or(0))?;
    let distances = gaps
        .iter()
        .map(|x| norm.nf(x).map(|y| y.len()))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadrilateralTrace {
        g,
        h,
        k,
        p,
        p_prime,
        p_h,
        p_k,
        distances,
    })
}

/// Outcome of the fellow-traveling check on one conjugacy configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma3Report {
    /// `g h g⁻¹ ∈ K` and `g` is certified shortest in `K g H`.
    pub applicable: bool,
    /// Indices `i` with `2δ + μ <= i <= n - 2δ - μ`; may be empty.
    pub checked_range: RangeInclusive<usize>,
    pub max_distance: usize,
    /// `8δ + μ`; every checked distance must be strictly below it.
    pub bound: usize,
    pub violations: Vec<usize>,
    pub mu: u64,
    pub trace: Option<QuadrilateralTrace>,
}

impl Lemma3Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Double-coset reduction passes allowed inside [`check_lemma3`].
const LEMMA3_REDUCTION_PASSES: usize = 64;

/// Checks `d(v_i, v'_i) < 8δ + μ` along the canonical geodesics for
/// `2δ + μ <= i <= n - 2δ - μ`, with `μ = max(μ_H, μ_K)`.
pub fn check_lemma3(
    ctx: &GroupContext,
    h_sub: &Subgroup,
    k_sub: &Subgroup,
    g: &Word,
    h: &Word,
) -> Result<Lemma3Report> {
    if ctx.is_trivial(h) {
        return Err(Error::InvalidArgument("h must be nontrivial"));
    }
    if !h_sub.member(ctx, h)? {
        return Err(Error::NotInSubgroup);
    }
    let delta = ctx.delta() as usize;
    let mu = h_sub.mu().max(k_sub.mu());
    let g_nf = ctx.geodesic(g)?;
    let n = g_nf.len();
    let lo = 2 * delta + mu as usize;
    let hi = n as i64 - lo as i64;
    let checked_range = if hi >= lo as i64 {
        lo..=hi as usize
    } else {
        lo..=lo - 1
    };
    let bound = 8 * delta + mu as usize;

    let k = Word::product(&[&g_nf, h, &g_nf.inverse()]);
    let mut applicable = k_sub.member(ctx, &k)?;
    if applicable {
        let (rep, certified) =
            reduce_double_coset(ctx, k_sub, &g_nf, h_sub, LEMMA3_REDUCTION_PASSES)?;
        applicable = certified && rep.len() == n;
    }
    if !applicable {
        return Ok(Lemma3Report {
            applicable,
            checked_range,
            max_distance: 0,
            bound,
            violations: Vec::new(),
            mu,
            trace: None,
        });
    }
    let trace = build_quadrilateral(ctx, &g_nf, h)?;
    let mut max_distance = 0;
    let mut violations = Vec::new();
    for i in checked_range.clone() {
        let d = trace.distances[i];
        max_distance = max_distance.max(d);
        if d >= bound {
            violations.push(i);
        }
    }
    Ok(Lemma3Report {
        applicable,
        checked_range,
        max_distance,
        bound,
        violations,
        mu,
        trace: Some(trace),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaEstimate {
    pub radius: usize,
    /// Largest vertex-to-other-sides distance seen; no integer δ can be smaller.
    pub thinness_lower_bound: usize,
    pub triangles_examined: usize,
    /// Whether stride sampling was used instead of the full triangle set.
    pub sampled: bool,
}

/// Thinness defect over geodesic triangles `(1, y, z)` with `y, z` in the
/// ball of the given radius. Every triangle with vertices in the ball is a
/// translate of one of these up to a larger ball, so this is a lower bound
/// for δ.
pub fn estimate_delta(ctx: &GroupContext, radius: usize) -> Result<DeltaEstimate> {
    estimate_delta_capped(ctx, radius, TRIANGLE_SAMPLE_CAP)
}

pub fn estimate_delta_capped(
    ctx: &GroupContext,
    radius: usize,
    cap: usize,
) -> Result<DeltaEstimate> {
    let ball = Ball::new(ctx, radius)?;
    let elems: Vec<Word> = ball.elements().cloned().collect();
    // Any two points on a triangle of perimeter <= 4r are within 2r.
    let norm = Normalizer::new(ctx, 2 * radius)?;
    let n = elems.len();
    let total = n * (n - 1) / 2;
    let stride = total.div_ceil(cap.max(1)).max(1);

    let mut pairs = Vec::with_capacity(total.min(cap));
    let mut idx = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if idx.is_multiple_of(stride) {
                pairs.push((i, j));
            }
            idx += 1;
        }
    }
    let defects = par::map(&pairs, |&(i, j)| -> Result<usize> {
        let (y, z) = (&elems[i], &elems[j]);
        let side_a: Vec<Word> = (0..=y.len()).map(|t| y.prefix(t)).collect();
        let side_b: Vec<Word> = (0..=z.len()).map(|t| z.prefix(t)).collect();
        let yz = norm.nf(&y.inverse().concat(z))?;
        let side_c = (0..=yz.len())
            .map(|t| norm.nf(&y.concat(&yz.prefix(t))))
            .collect::<Result<Vec<_>>>()?;
        let sides = [&side_a, &side_b, &side_c];
        let mut worst = 0;
        for s in 0..3 {
            for v in sides[s] {
                let mut best = usize::MAX;
                for (t, other) in sides.iter().enumerate() {
                    if t == s {
                        continue;
                    }
                    for w in other.iter() {
                        best = best.min(norm.distance(v, w)?);
                        if best == 0 {
                            break;
                        }
                    }
                }
                worst = worst.max(best);
            }
        }
        Ok(worst)
    });
    let mut thinness = 0;
    for d in defects {
        thinness = thinness.max(d?);
    }
    Ok(DeltaEstimate {
        radius,
        thinness_lower_bound: thinness,
        triangles_examined: pairs.len(),
        sampled: stride > 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use alloc::string::String;

    fn f(k: &str) -> GroupContext {
        GroupContext::new(Presentation::free(k).unwrap(), 0).unwrap()
    }

    fn surface() -> GroupContext {
        GroupContext::new(Presentation::from_strs("abcd", &["abABcdCD"]).unwrap(), 1).unwrap()
    }

    fn w(ctx: &GroupContext, s: &str) -> Word {
        ctx.presentation().alphabet().parse_word(s).unwrap()
    }

    fn r(ctx: &GroupContext, x: &Word) -> String {
        ctx.presentation().alphabet().render(x)
    }

    #[test]
    fn free_ball_sizes() {
        let ctx = f("ab");
        assert_eq!(Ball::new(&ctx, 0).unwrap().len(), 1);
        assert_eq!(Ball::new(&ctx, 2).unwrap().len(), 17);
        assert_eq!(Ball::new(&ctx, 3).unwrap().len(), 53);
    }

    #[test]
    fn ball_is_shortlex_sorted_and_prefix_closed() {
        let ctx = surface();
        let ball = Ball::new(&ctx, 3).unwrap();
        let all: Vec<&Word> = ball.elements().collect();
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        for x in &all {
            for i in 0..x.len() {
                assert!(ball.sphere(i).contains(&x.prefix(i)));
            }
        }
        // sphere sizes of the genus-2 surface group: 1, 8, 56, 392
        let sizes: Vec<usize> = (0..=3).map(|i| ball.sphere(i).len()).collect();
        assert_eq!(sizes, [1, 8, 56, 392]);
    }

    #[test]
    fn node_limit_is_enforced() {
        let ctx = f("ab").with_node_limit(20);
        assert_eq!(
            Ball::new(&ctx, 3).unwrap_err(),
            Error::BudgetExceeded { limit: 20 }
        );
    }

    #[test]
    fn geodesic_examples() {
        let ctx = f("ab");
        assert_eq!(
            r(
                &ctx,
                &a_geodesic(&ctx, &Word::empty(), &w(&ctx, "abBa")).unwrap()
            ),
            "aa"
        );
        assert_eq!(
            r(
                &ctx,
                &a_geodesic(&ctx, &w(&ctx, "a"), &w(&ctx, "ab")).unwrap()
            ),
            "b"
        );
        let s = surface();
        assert_eq!(
            r(
                &s,
                &a_geodesic(&s, &Word::empty(), &w(&s, "abABcdC")).unwrap()
            ),
            "d"
        );
    }

    #[test]
    fn quadrilateral_examples() {
        let ctx = f("ab");
        let q = build_quadrilateral(&ctx, &w(&ctx, "b"), &w(&ctx, "a")).unwrap();
        assert_eq!(q.n(), 1);
        assert_eq!(r(&ctx, &q.k), "baB");
        assert_eq!(q.distances, [3, 1]);

        let q = build_quadrilateral(&ctx, &Word::empty(), &w(&ctx, "a")).unwrap();
        assert_eq!(q.n(), 0);
        assert_eq!(q.p.len(), 1);
        assert_eq!(q.p_prime.len(), 1);
        assert_eq!(r(&ctx, &q.k), "a");

        let q = build_quadrilateral(&ctx, &w(&ctx, "ba"), &w(&ctx, "a")).unwrap();
        assert_eq!(q.n(), 2);
        assert_eq!(r(&ctx, &q.k), "baB");
        assert_eq!(q.distances[0], 3);
        // endpoint identities of the configuration
        assert_eq!(q.distances[0], q.k.len());
        assert_eq!(q.distances[q.n()], q.h.len());
        assert_eq!(q.p_prime.last(), q.p_h.last());
    }

    #[test]
    fn lemma3_examples() {
        let ctx = f("ab");
        let h_sub = Subgroup::new(&ctx, alloc::vec![w(&ctx, "a")], None, None).unwrap();
        let k_sub = Subgroup::new(&ctx, alloc::vec![w(&ctx, "baB")], None, None).unwrap();

        let rep = check_lemma3(&ctx, &h_sub, &k_sub, &w(&ctx, "b"), &w(&ctx, "a")).unwrap();
        assert!(rep.applicable);
        assert!(rep.checked_range.is_empty());
        assert!(rep.passed());

        let rep = check_lemma3(&ctx, &h_sub, &k_sub, &w(&ctx, "ba"), &w(&ctx, "a")).unwrap();
        assert!(!rep.applicable);

        assert_eq!(
            check_lemma3(&ctx, &h_sub, &k_sub, &w(&ctx, "b"), &w(&ctx, "b")),
            Err(Error::NotInSubgroup)
        );
        assert!(check_lemma3(&ctx, &h_sub, &k_sub, &w(&ctx, "b"), &w(&ctx, "aA")).is_err());
    }

    #[test]
    fn quadrilateral_in_surface_group() {
        let s = surface();
        let q = build_quadrilateral(&s, &w(&s, "c"), &w(&s, "b")).unwrap();
        assert_eq!(q.distances[0], q.k.len());
        assert_eq!(q.distances[q.n()], q.h.len());
        assert_eq!(q.p_prime[0], q.k);
    }

    #[test]
    fn delta_estimates() {
        let ctx = f("ab");
        assert_eq!(estimate_delta(&ctx, 0).unwrap().thinness_lower_bound, 0);
        assert_eq!(estimate_delta(&ctx, 3).unwrap().thinness_lower_bound, 0);
    }
}
