//! Quasiconvex subgroups: Stallings graphs for free groups, generator
//! closure inside a ball for everything else, and double-coset reduction.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::cayley::{Ball, Normalizer};
use crate::error::{Error, Result};
use crate::normalizer::GroupContext;
use crate::par;
use crate::presentation::{Letter, Word};

/// A folded, cored Stallings graph with basepoint `0`.
///
/// Edges are stored per vertex and letter: an `x`-edge `u -> v` also appears
/// as the `x⁻¹`-edge `v -> u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreGraph {
    rank: usize,
    out: Vec<Option<u32>>,
}

impl CoreGraph {
    pub const BASEPOINT: usize = 0;

    pub fn vertex_count(&self) -> usize {
        self.out.len() / (2 * self.rank).max(1)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn target(&self, v: usize, x: Letter) -> Option<usize> {
        self.out[v * 2 * self.rank + x.code()].map(|t| t as usize)
    }

    /// Positive edges `(from, generator, to)`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::new();
        for v in 0..self.vertex_count() {
            for g in 0..self.rank {
                if let Some(t) = self.target(v, Letter::new(g, false)) {
                    e.push((v, g, t));
                }
            }
        }
        e
    }

    pub fn is_folded(&self) -> bool {
        // one slot per (vertex, letter) makes out-folds impossible; check that
        // every edge is mirrored, which rules out in-folds
        (0..self.vertex_count()).all(|v| {
            (0..2 * self.rank).all(|c| {
                let x = Letter::from_code(c);
                self.target(v, x)
                    .is_none_or(|t| self.target(t, x.inverse()) == Some(v))
            })
        })
    }

    /// End vertex of the walk reading `w` from `start`, if the walk exists.
    pub fn walk(&self, start: usize, w: &Word) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(start, |v, &x| self.target(v, x))
    }

    /// Does the freely reduced form of `w` label a loop at the basepoint?
    pub fn accepts(&self, w: &Word) -> bool {
        self.walk(Self::BASEPOINT, &w.free_reduce()) == Some(Self::BASEPOINT)
    }

    /// Distances from `v` in the underlying undirected graph.
    fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = alloc::vec![None; self.vertex_count()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for c in 0..2 * self.rank {
                if let Some(t) = self.target(u, Letter::from_code(c)) {
                    if dist[t].is_none() {
                        dist[t] = Some(d + 1);
                        queue.push_back(t);
                    }
                }
            }
        }
        dist
    }
}

/// Union-find folding of labelled graphs.
struct Folder {
    rank: usize,
    parent: Vec<usize>,
    out: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, Letter, usize)>,
}

impl Folder {
    fn new(rank: usize) -> Self {
        let mut f = Folder {
            rank,
            parent: Vec::new(),
            out: Vec::new(),
            pending: Vec::new(),
        };
        f.new_vertex();
        f
    }

    fn new_vertex(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.out.push(alloc::vec![None; 2 * self.rank]);
        v
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Adds a path labelled `w` from `from`, ending at `to` if given (else at
    /// a fresh vertex). Returns the end vertex.
    fn add_path(&mut self, from: usize, w: &Word, to: Option<usize>) -> usize {
        let n = w.len();
        if n == 0 {
            if let Some(t) = to {
                self.merge(from, t);
                self.drain();
            }
            return self.find(from);
        }
        let mut cur = from;
        for (i, &x) in w.letters().iter().enumerate() {
            let next = if i + 1 == n {
                to.unwrap_or_else(|| self.new_vertex())
            } else {
                self.new_vertex()
            };
            self.pending.push((cur, x, next));
            cur = next;
        }
        self.drain();
        self.find(cur)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (keep, gone) = (a.min(b), a.max(b));
        self.parent[gone] = keep;
        for c in 0..2 * self.rank {
            if let Some(t) = self.out[gone][c].take() {
                self.pending.push((keep, Letter::from_code(c), t));
            }
        }
    }

    fn drain(&mut self) {
        while let Some((u, x, v)) = self.pending.pop() {
            let (u, v) = (self.find(u), self.find(v));
            let (xc, yc) = (x.code(), x.inverse().code());
            if let Some(t) = self.out[u][xc] {
                let t = self.find(t);
                if t != v {
                    self.merge(t, v);
                    self.pending.push((u, x, v));
                    continue;
                }
            }
            if let Some(s) = self.out[v][yc] {
                let s = self.find(s);
                if s != u {
                    self.merge(s, u);
                    self.pending.push((u, x, v));
                    continue;
                }
            }
            self.out[u][xc] = Some(v);
            self.out[v][yc] = Some(u);
        }
    }

    /// Compacts to a graph over live vertices; `keep` lists vertices that
    /// survive pruning. Returns the graph and the new index of each `keep`.
    fn finish(mut self, keep: &[usize], prune: bool) -> (CoreGraph, Vec<usize>) {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|v| self.find(v)).collect();
        let rank2 = 2 * self.rank;
        let mut adj: Vec<Vec<Option<usize>>> = alloc::vec![alloc::vec![None; rank2]; n];
        let mut alive = alloc::vec![false; n];
        for v in 0..n {
            if roots[v] == v {
                alive[v] = true;
                for (slot, out) in adj[v].iter_mut().zip(&self.out[v]) {
                    *slot = out.map(|t| roots[t]);
                }
            }
        }
        let keep: Vec<usize> = keep.iter().map(|&v| roots[v]).collect();
        if prune {
            let mut changed = true;
            while changed {
                changed = false;
                for v in 0..n {
                    if !alive[v] || keep.contains(&v) {
                        continue;
                    }
                    let deg = adj[v].iter().filter(|t| t.is_some()).count();
                    if deg <= 1 {
                        alive[v] = false;
                        changed = true;
                        for c in 0..rank2 {
                            if let Some(t) = adj[v][c].take() {
                                adj[t][c ^ 1] = None;
                            }
                        }
                    }
                }
            }
        }
        // renumber in breadth-first order from the first kept vertex
        let mut index = alloc::vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &s in &keep {
            if index[s] == usize::MAX {
                index[s] = order.len();
                order.push(s);
                queue.push_back(s);
            }
            while let Some(u) = queue.pop_front() {
                for &t in adj[u].iter().flatten() {
                    if index[t] == usize::MAX {
                        index[t] = order.len();
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut out = alloc::vec![None; order.len() * rank2];
        for (i, &v) in order.iter().enumerate() {
            for c in 0..rank2 {
                out[i * rank2 + c] = adj[v][c].map(|t| index[t] as u32);
            }
        }
        let keep_idx = keep.iter().map(|&v| index[v]).collect();
        (
            CoreGraph {
                rank: self.rank,
                out,
            },
            keep_idx,
        )
    }
}

/// Folded core graph of the subgroup generated by `generators` in the free
/// group of the given rank: a wedge of generator loops, folded, with hanging
/// trees away from the basepoint pruned.
pub fn stallings_graph(rank: usize, generators: &[Word]) -> CoreGraph {
    let mut f = Folder::new(rank);
    for g in generators {
        f.add_path(0, &g.free_reduce(), Some(0));
    }
    f.finish(&[0], true).0
}

/// `max(1, eccentricity of the basepoint)` in the undirected core graph.
pub fn estimate_mu_free(core: &CoreGraph) -> u64 {
    let ecc = core
        .distances_from(CoreGraph::BASEPOINT)
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0);
    (ecc as u64).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Stallings,
    BallClosure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupBackend {
    Stallings(CoreGraph),
    /// Generator closure inside a ball of radius `|w| + 3μ + 1`.
    BallClosure,
}

/// A finitely generated subgroup with an explicit quasiconvexity constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    generators: Vec<Word>,
    mu: u64,
    backend: SubgroupBackend,
}

impl Subgroup {
    /// Free contexts default to a Stallings graph and compute `μ` when it is
    /// not given. Other contexts use ball closure and need `μ`. Any `μ` is
    /// raised to at least 1.
    pub fn new(
        ctx: &GroupContext,
        generators: Vec<Word>,
        mu: Option<u64>,
        backend: Option<BackendKind>,
    ) -> Result<Self> {
        let generators = generators
            .iter()
            .map(|g| {
                let r = ctx.dehn_reduce(g);
                if r.is_empty() {
                    Err(Error::TrivialGenerator)
                } else {
                    Ok(r)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let kind = backend.unwrap_or(if ctx.is_free() {
            BackendKind::Stallings
        } else {
            BackendKind::BallClosure
        });
        let (backend, computed_mu) = match kind {
            BackendKind::Stallings => {
                if !ctx.is_free() {
                    return Err(Error::BackendMismatch("Stallings graphs need a free group"));
                }
                let core = stallings_graph(ctx.rank(), &generators);
                let m = estimate_mu_free(&core);
                (SubgroupBackend::Stallings(core), Some(m))
            }
            BackendKind::BallClosure => {
                let m = ctx
                    .is_free()
                    .then(|| estimate_mu_free(&stallings_graph(ctx.rank(), &generators)));
                (SubgroupBackend::BallClosure, m)
            }
        };
        let mu = mu.or(computed_mu).ok_or(Error::MuRequired)?.max(1);
        Ok(Subgroup {
            generators,
            mu,
            backend,
        })
    }

    /// The cyclic subgroup `⟨u⟩`. In free groups `μ` comes from its core graph
    /// (a cycle with a tail); elsewhere it defaults to `|u| + 2δ`.
    pub fn cyclic(ctx: &GroupContext, u: &Word) -> Result<Self> {
        if ctx.is_free() {
            Subgroup::new(ctx, alloc::vec![u.clone()], None, None)
        } else {
            let mu = ctx.dehn_reduce(u).len() as u64 + 2 * ctx.delta();
            Subgroup::new(ctx, alloc::vec![u.clone()], Some(mu), None)
        }
    }

    pub fn cyclic_with_mu(ctx: &GroupContext, u: &Word, mu: u64) -> Result<Self> {
        Subgroup::new(ctx, alloc::vec![u.clone()], Some(mu), None)
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub fn backend(&self) -> &SubgroupBackend {
        &self.backend
    }

    pub fn core_graph(&self) -> Option<&CoreGraph> {
        match &self.backend {
            SubgroupBackend::Stallings(c) => Some(c),
            SubgroupBackend::BallClosure => None,
        }
    }

    /// Membership of the element represented by `w`.
    pub fn member(&self, ctx: &GroupContext, w: &Word) -> Result<bool> {
        match &self.backend {
            SubgroupBackend::Stallings(core) => Ok(core.accepts(w)),
            SubgroupBackend::BallClosure => {
                let r = ctx.dehn_reduce(w);
                let closure = self.closure(ctx, r.len() + 3 * self.mu as usize + 1)?;
                Ok(closure.contains(&r))
            }
        }
    }

    /// Subgroup elements of length `<= radius` in ShortLex order. Free groups
    /// give freely reduced words; Dehn contexts give one Dehn-reduced
    /// representative per element, measured by its own length.
    pub fn ball(&self, ctx: &GroupContext, radius: usize) -> Result<Vec<Word>> {
        match &self.backend {
            SubgroupBackend::Stallings(core) => Ok(stallings_ball(core, radius)),
            SubgroupBackend::BallClosure => {
                let c = self.closure(ctx, radius + 3 * self.mu as usize + 1)?;
                let mut out: Vec<Word> = c
                    .elements
                    .into_iter()
                    .filter(|x| x.len() <= radius)
                    .collect();
                out.sort();
                Ok(out)
            }
        }
    }

    /// Membership tester for many words whose reduced length is at most
    /// `max_len`; ball-closure subgroups compute their closure once.
    pub fn membership<'a>(
        &'a self,
        ctx: &'a GroupContext,
        max_len: usize,
    ) -> Result<Membership<'a>> {
        let closure = match self.backend {
            SubgroupBackend::Stallings(_) => None,
            SubgroupBackend::BallClosure => {
                Some(self.closure(ctx, max_len + 3 * self.mu as usize + 1)?)
            }
        };
        Ok(Membership {
            sub: self,
            ctx,
            closure,
        })
    }

    /// Subgroup elements whose reduced form has length `<= radius`, reached
    /// from `1` by steps that stay within that length. The steps are the
    /// generators, their inverses, and the product closure inside radius
    /// `3μ + 1`.
    fn closure<'a>(&self, ctx: &'a GroupContext, radius: usize) -> Result<Closure<'a>> {
        let local = self.product_closure(ctx, radius.min(3 * self.mu as usize + 1))?;
        let mut steps = local.elements;
        for g in &self.generators {
            for x in [g.clone(), g.inverse()] {
                steps.push(ctx.dehn_reduce(&x));
            }
        }
        steps.retain(|t| !t.is_empty());
        steps.sort();
        steps.dedup();

        let mut c = Closure::new(ctx);
        c.admit(Word::empty());
        let mut frontier = alloc::vec![Word::empty()];
        while !frontier.is_empty() {
            let c_ref = &c;
            let found = par::map(&frontier, |x| {
                steps
                    .iter()
                    .filter_map(|t| {
                        if ctx.is_free() && free_product_len(x, t) > radius {
                            return None;
                        }
                        let r = ctx.dehn_reduce(&x.concat(t));
                        (r.len() <= radius && !c_ref.contains(&r)).then_some(r)
                    })
                    .collect::<Vec<_>>()
            });
            frontier = c.admit_all(found.into_iter().flatten())?;
        }
        Ok(c)
    }

    /// Fixpoint of `S ↦ S·S ∪ S⁻¹ ∪ generators ∪ {1}` among elements whose
    /// reduced form has length `<= radius`; longer products are dropped.
    fn product_closure<'a>(&self, ctx: &'a GroupContext, radius: usize) -> Result<Closure<'a>> {
        let mut c = Closure::new(ctx);
        c.admit(Word::empty());
        let mut seeds = Vec::new();
        for g in &self.generators {
            for x in [g.clone(), g.inverse()] {
                let r = ctx.dehn_reduce(&x);
                if r.len() <= radius {
                    seeds.push(r);
                }
            }
        }
        let mut frontier = c.admit_all(seeds)?;
        while !frontier.is_empty() {
            let all = c.elements.clone();
            let c_ref = &c;
            let found = par::map(&frontier, |x| {
                let mut v = Vec::new();
                for y in &all {
                    for (l, r) in [(x, y), (y, x)] {
                        if ctx.is_free() && free_product_len(l, r) > radius {
                            continue;
                        }
                        let r = ctx.dehn_reduce(&l.concat(r));
                        if r.len() <= radius && !c_ref.contains(&r) {
                            v.push(r);
                        }
                    }
                }
                v
            });
            frontier = c.admit_all(found.into_iter().flatten())?;
        }
        Ok(c)
    }
}

/// Length of the free reduction of `x·y` for freely reduced `x` and `y`.
fn free_product_len(x: &Word, y: &Word) -> usize {
    let (xs, ys) = (x.letters(), y.letters());
    let cancel = xs
        .iter()
        .rev()
        .zip(ys)
        .take_while(|(a, b)| a.inverse() == **b)
        .count();
    xs.len() + ys.len() - 2 * cancel
}

pub struct Membership<'a> {
    sub: &'a Subgroup,
    ctx: &'a GroupContext,
    closure: Option<Closure<'a>>,
}

impl Membership<'_> {
    pub fn contains(&self, w: &Word) -> Result<bool> {
        match &self.closure {
            None => self.sub.member(self.ctx, w),
            Some(c) => Ok(c.contains(&self.ctx.dehn_reduce(w))),
        }
    }
}

/// One reduced representative per element found so far.
struct Closure<'a> {
    ctx: &'a GroupContext,
    elements: Vec<Word>,
    /// Free groups: reduced words are canonical.
    free: BTreeSet<Word>,
    /// Dehn contexts: invariant key -> indices into `elements`.
    buckets: BTreeMap<Vec<i64>, Vec<usize>>,
}

impl<'a> Closure<'a> {
    fn new(ctx: &'a GroupContext) -> Self {
        Closure {
            ctx,
            elements: Vec::new(),
            free: BTreeSet::new(),
            buckets: BTreeMap::new(),
        }
    }

    /// Admits reduced words in order; returns the newly added ones.
    fn admit_all(&mut self, words: impl IntoIterator<Item = Word>) -> Result<Vec<Word>> {
        let mut fresh = Vec::new();
        for r in words {
            if self.admit(r.clone()) {
                fresh.push(r);
            }
        }
        if self.elements.len() > self.ctx.node_limit() {
            return Err(Error::BudgetExceeded {
                limit: self.ctx.node_limit(),
            });
        }
        Ok(fresh)
    }

    /// `r` must be reduced.
    fn contains(&self, r: &Word) -> bool {
        if self.ctx.is_free() {
            return self.free.contains(r);
        }
        self.buckets
            .get(&self.ctx.invariant_key(r))
            .is_some_and(|b| b.iter().any(|&i| self.ctx.are_equal(&self.elements[i], r)))
    }

    /// Adds a reduced word; `false` if its element was already present.
    fn admit(&mut self, r: Word) -> bool {
        if self.contains(&r) {
            return false;
        }
        if self.ctx.is_free() {
            self.free.insert(r.clone());
        } else {
            self.buckets
                .entry(self.ctx.invariant_key(&r))
                .or_default()
                .push(self.elements.len());
        }
        self.elements.push(r);
        true
    }
}

/// Reduced loops at the basepoint of length `<= radius`, ShortLex order.
fn stallings_ball(core: &CoreGraph, radius: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<Letter>)> = alloc::vec![(CoreGraph::BASEPOINT, Vec::new())];
    while let Some((v, w)) = stack.pop() {
        if v == CoreGraph::BASEPOINT {
            out.push(Word::from_letters(w.clone()));
        }
        if w.len() == radius {
            continue;
        }
        for c in 0..2 * core.rank() {
            let x = Letter::from_code(c);
            if w.last() == Some(&x.inverse()) {
                continue;
            }
            if let Some(t) = core.target(v, x) {
                let mut next = w.clone();
                next.push(x);
                stack.push((t, next));
            }
        }
    }
    out.sort();
    out
}

/// Local double-coset descent: multiplies by subgroup elements of length at
/// most `2μ + 2δ + 1` on each side.
pub struct DoubleCosetReducer<'a> {
    ctx: &'a GroupContext,
    left: Vec<Word>,
    right: Vec<Word>,
}

impl<'a> DoubleCosetReducer<'a> {
    pub fn new(ctx: &'a GroupContext, k_sub: &Subgroup, h_sub: &Subgroup) -> Result<Self> {
        let delta = ctx.delta() as usize;
        let left = k_sub.ball(ctx, 2 * k_sub.mu() as usize + 2 * delta + 1)?;
        let right = h_sub.ball(ctx, 2 * h_sub.mu() as usize + 2 * delta + 1)?;
        Ok(DoubleCosetReducer { ctx, left, right })
    }

    /// ShortLex-least element `k g h` shorter than the geodesic `g`, if any.
    fn best_shorter(&self, g: &Word, first_only: bool) -> Result<Option<Word>> {
        if g.is_empty() {
            return Ok(None);
        }
        let norm = Normalizer::new(self.ctx, g.len() - 1)?;
        let mut best: Option<Word> = None;
        for k in &self.left {
            let kg = k.concat(g);
            for h in &self.right {
                let x = kg.concat(h);
                let nf = if self.ctx.is_free() {
                    let r = x.free_reduce();
                    (r.len() < g.len()).then_some(r)
                } else {
                    norm.find_in_ball(&x)
                };
                if let Some(nf) = nf {
                    if first_only {
                        return Ok(Some(nf));
                    }
                    if best.as_ref().is_none_or(|b| nf < *b) {
                        best = Some(nf);
                    }
                }
            }
        }
        Ok(best)
    }

    /// No local move shortens the geodesic `g`.
    pub fn is_locally_minimal(&self, g: &Word) -> Result<bool> {
        Ok(self.best_shorter(g, true)?.is_none())
    }

    pub fn reduce(&self, g: &Word, max_passes: usize) -> Result<(Word, bool)> {
        let mut g = self.ctx.geodesic(g)?;
        for _ in 0..max_passes {
            match self.best_shorter(&g, false)? {
                None => return Ok((g, true)),
                Some(b) => g = b,
            }
        }
        let done = g.is_empty();
        Ok((g, done))
    }
}

/// Hill-descent towards a shortest element of `K g H`.
///
/// Each pass replaces `g` by the ShortLex-least shorter product `k g h` with
/// `k`, `h` drawn from the subgroup balls of radius `2μ + 2δ + 1`. The result
/// is certified once a full pass finds nothing shorter within `max_passes`
/// passes; certification means locally shortest only.
pub fn reduce_double_coset(
    ctx: &GroupContext,
    k_sub: &Subgroup,
    g: &Word,
    h_sub: &Subgroup,
    max_passes: usize,
) -> Result<(Word, bool)> {
    if ctx.is_trivial(g) {
        return Ok((Word::empty(), true));
    }
    DoubleCosetReducer::new(ctx, k_sub, h_sub)?.reduce(g, max_passes)
}

/// Exact membership `x ∈ K g H` for Stallings-backed subgroups of a free
/// group: `K x` and `g H` meet iff the pullback of their coset graphs has a
/// path between the marked vertex pairs.
pub fn double_coset_contains(
    ctx: &GroupContext,
    k_sub: &Subgroup,
    g: &Word,
    h_sub: &Subgroup,
    x: &Word,
) -> Result<bool> {
    let (Some(kc), Some(hc)) = (k_sub.core_graph(), h_sub.core_graph()) else {
        return Err(Error::BackendMismatch(
            "exact double cosets need Stallings graphs",
        ));
    };
    let rank = ctx.rank();
    // paths kb -> e read K x
    let (a, a_marks) = coset_graph(rank, kc, &x.free_reduce());
    // paths f -> hb read g H
    let (b, b_marks) = coset_graph(rank, hc, &g.free_reduce().inverse());
    let start = (a_marks.0, b_marks.1);
    let goal = (a_marks.1, b_marks.0);
    let nb = b.vertex_count();
    let mut seen = alloc::vec![false; a.vertex_count() * nb];
    let mut queue = VecDeque::from([start]);
    seen[start.0 * nb + start.1] = true;
    while let Some((u, v)) = queue.pop_front() {
        if (u, v) == goal {
            return Ok(true);
        }
        for c in 0..2 * rank {
            let l = Letter::from_code(c);
            if let (Some(s), Some(t)) = (a.target(u, l), b.target(v, l)) {
                if !seen[s * nb + t] {
                    seen[s * nb + t] = true;
                    queue.push_back((s, t));
                }
            }
        }
    }
    Ok(false)
}

/// Core graph with a path reading `w` hung off the basepoint. Returns the
/// folded graph and `(basepoint, path end)`.
fn coset_graph(rank: usize, core: &CoreGraph, w: &Word) -> (CoreGraph, (usize, usize)) {
    let mut f = Folder::new(rank);
    let n = core.vertex_count();
    let ids: Vec<usize> = (0..n)
        .map(|v| if v == 0 { 0 } else { f.new_vertex() })
        .collect();
    for (u, g, v) in core.edges() {
        f.pending.push((ids[u], Letter::new(g, false), ids[v]));
    }
    f.drain();
    let end = f.add_path(0, w, None);
    let (graph, marks) = f.finish(&[0, end], false);
    (graph, (marks[0], marks[1]))
}

/// The ShortLex-least element of `K g H`, found by scanning the ball of
/// radius `|g|` with exact double-coset membership. Free groups only.
pub fn shortest_double_coset_rep(
    ctx: &GroupContext,
    k_sub: &Subgroup,
    g: &Word,
    h_sub: &Subgroup,
) -> Result<Word> {
    let g = g.free_reduce();
    let ball = Ball::new(ctx, g.len())?;
    for x in ball.elements() {
        if double_coset_contains(ctx, k_sub, &g, h_sub, x)? {
            return Ok(x.clone());
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use alloc::string::String;

    fn f2() -> GroupContext {
        GroupContext::new(Presentation::free("ab").unwrap(), 0).unwrap()
    }

    fn surface() -> GroupContext {
        GroupContext::new(Presentation::from_strs("abcd", &["abABcdCD"]).unwrap(), 1).unwrap()
    }

    fn w(ctx: &GroupContext, s: &str) -> Word {
        ctx.presentation().alphabet().parse_word(s).unwrap()
    }

    fn sub(ctx: &GroupContext, gens: &[&str]) -> Subgroup {
        Subgroup::new(ctx, gens.iter().map(|g| w(ctx, g)).collect(), None, None).unwrap()
    }

    fn render_all(ctx: &GroupContext, ws: &[Word]) -> Vec<String> {
        ws.iter()
            .map(|x| ctx.presentation().alphabet().render(x))
            .collect()
    }

    #[test]
    fn stallings_examples() {
        let ctx = f2();
        let core = stallings_graph(2, &[w(&ctx, "aa"), w(&ctx, "b")]);
        assert_eq!(core.vertex_count(), 2);
        assert!(core.is_folded());
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        assert_eq!(core.target(0, a), Some(1));
        assert_eq!(core.target(1, a), Some(0));
        assert_eq!(core.target(0, b), Some(0));

        let core = stallings_graph(2, &[w(&ctx, "a")]);
        assert_eq!(core.vertex_count(), 1);
        assert_eq!(core.edges(), [(0, 0, 0)]);

        let core = stallings_graph(2, &[w(&ctx, "a"), w(&ctx, "b")]);
        assert_eq!(core.vertex_count(), 1);
        assert_eq!(core.edges().len(), 2);
    }

    #[test]
    fn folding_merges_shared_prefixes() {
        let ctx = f2();
        // ⟨ab, aB⟩ folds the two initial a-edges together
        let core = stallings_graph(2, &[w(&ctx, "ab"), w(&ctx, "aB")]);
        assert_eq!(core.vertex_count(), 2);
        assert!(!core.accepts(&w(&ctx, "abAb")));
        // (aB)⁻¹·ab
        assert!(core.accepts(&w(&ctx, "bb")));
        assert!(core.accepts(&w(&ctx, "abbA")));
    }

    #[test]
    fn membership_examples() {
        let ctx = f2();
        let k = sub(&ctx, &["aa", "b"]);
        assert!(k.member(&ctx, &w(&ctx, "aab")).unwrap());
        assert!(!k.member(&ctx, &w(&ctx, "a")).unwrap());
        assert_eq!(k.core_graph().unwrap().walk(0, &w(&ctx, "a")), Some(1));
    }

    #[test]
    fn ball_closure_in_surface_group() {
        let ctx = surface();
        let k = Subgroup::cyclic_with_mu(&ctx, &w(&ctx, "a"), 1).unwrap();
        assert_eq!(*k.backend(), SubgroupBackend::BallClosure);
        assert!(!k.member(&ctx, &w(&ctx, "b")).unwrap());
        assert!(k.member(&ctx, &w(&ctx, "aa")).unwrap());
        assert!(k.member(&ctx, &w(&ctx, "abABcdCDa")).unwrap());
    }

    #[test]
    fn subgroup_ball_examples() {
        let ctx = f2();
        let h = sub(&ctx, &["aa", "b"]);
        assert_eq!(
            render_all(&ctx, &h.ball(&ctx, 2).unwrap()),
            ["", "b", "B", "aa", "AA", "bb", "BB"]
        );
        let c = sub(&ctx, &["a"]);
        assert_eq!(
            render_all(&ctx, &c.ball(&ctx, 3).unwrap()),
            ["", "a", "A", "aa", "AA", "aaa", "AAA"]
        );
        assert_eq!(h.ball(&ctx, 0).unwrap(), [Word::empty()]);
    }

    #[test]
    fn stallings_ball_matches_filtered_ball() {
        let ctx = f2();
        let h = sub(&ctx, &["aba", "bbA"]);
        let fast = h.ball(&ctx, 6).unwrap();
        let slow: Vec<Word> = Ball::new(&ctx, 6)
            .unwrap()
            .elements()
            .filter(|x| h.member(&ctx, x).unwrap())
            .cloned()
            .collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn mu_estimates() {
        let ctx = f2();
        let g = |gens: &[&str]| {
            stallings_graph(2, &gens.iter().map(|s| w(&ctx, s)).collect::<Vec<_>>())
        };
        assert_eq!(estimate_mu_free(&g(&["aa", "b"])), 1);
        assert_eq!(estimate_mu_free(&g(&["a"])), 1);
        assert_eq!(estimate_mu_free(&g(&["aaa"])), 1);
        assert_eq!(estimate_mu_free(&g(&["baaB"])), 2);
    }

    #[test]
    fn cyclic_subgroup_examples() {
        let ctx = f2();
        let c = Subgroup::cyclic(&ctx, &w(&ctx, "a")).unwrap();
        assert_eq!(c.mu(), 1);
        let c = Subgroup::cyclic(&ctx, &w(&ctx, "baaB")).unwrap();
        assert_eq!(c.mu(), 2);
        assert_eq!(c.core_graph().unwrap().vertex_count(), 3);
        assert_eq!(
            Subgroup::cyclic(&ctx, &w(&ctx, "aA")).unwrap_err(),
            Error::TrivialGenerator
        );
        let s = surface();
        let c = Subgroup::cyclic(&s, &w(&s, "ab")).unwrap();
        assert_eq!(c.mu(), 2 + 2);
        assert_eq!(
            Subgroup::new(&s, alloc::vec![w(&s, "a")], None, None).unwrap_err(),
            Error::MuRequired
        );
        assert!(matches!(
            Subgroup::new(
                &s,
                alloc::vec![w(&s, "a")],
                Some(1),
                Some(BackendKind::Stallings)
            ),
            Err(Error::BackendMismatch(_))
        ));
    }

    #[test]
    fn double_coset_examples() {
        let ctx = f2();
        let k = sub(&ctx, &["baB"]);
        let h = sub(&ctx, &["a"]);
        let (rep, cert) = reduce_double_coset(&ctx, &k, &w(&ctx, "ba"), &h, 8).unwrap();
        assert_eq!(ctx.presentation().alphabet().render(&rep), "b");
        assert!(cert);
        // b is not in K H, so no length-0 representative
        assert!(!double_coset_contains(&ctx, &k, &w(&ctx, "b"), &h, &Word::empty()).unwrap());

        let ka = sub(&ctx, &["a"]);
        let (rep, cert) = reduce_double_coset(&ctx, &ka, &w(&ctx, "b"), &h, 8).unwrap();
        assert_eq!(ctx.presentation().alphabet().render(&rep), "b");
        assert!(cert);

        let (rep, cert) = reduce_double_coset(&ctx, &k, &Word::empty(), &h, 0).unwrap();
        assert!(rep.is_empty() && cert);
    }

    #[test]
    fn exact_double_coset_membership() {
        let ctx = f2();
        let k = sub(&ctx, &["baB"]);
        let h = sub(&ctx, &["a"]);
        let g = w(&ctx, "ba");
        for x in ["ba", "b", "baa", "bA", "baBba", "ab"] {
            // brute force: x = k g h with small k, h
            let brute = (-4i64..=4).any(|i| {
                (-4i64..=4).any(|j| {
                    let kk = w(&ctx, "baB").pow(i);
                    let hh = w(&ctx, "a").pow(j);
                    Word::product(&[&kk, &g, &hh]) == w(&ctx, x).free_reduce()
                })
            });
            assert_eq!(
                double_coset_contains(&ctx, &k, &g, &h, &w(&ctx, x)).unwrap(),
                brute,
                "{x}"
            );
        }
        assert_eq!(
            shortest_double_coset_rep(&ctx, &k, &w(&ctx, "baaa"), &h).unwrap(),
            w(&ctx, "b")
        );
    }
}
