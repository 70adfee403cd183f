//! Polynomial betweenness engines over vertex appearances.
//!
//! The shortest/shortest-foremost engine runs one BFS per source over
//! vertex appearances, counting hop-minimal arrivals per appearance, then
//! accumulates dependencies backwards over the predecessor DAG. Summing
//! the per-appearance scores and removing each vertex's endpoint terms
//! (one per connected ordered pair, via the connectivity matrix) yields
//! plain per-vertex betweenness.
//!
//! The prefix-foremost engine processes transitions from a time-ordered
//! priority queue; predecessors live on vertices rather than appearances,
//! which keeps it near-linear per source.
//!
//! Both engines are generic over the arithmetic mode: fast doubles or
//! exact big rationals. Exact mode is what the oracle comparisons use.

use std::collections::{BinaryHeap, BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{ConnectivityMatrix, TemporalGraph, TimeLabel, VertexAppearance, VertexId};
use crate::numeric::{Float64, NumMode};
use crate::variant::Criterion;

/// Predecessor sentinel for the dummy source appearance `(s, 0)`.
const DUMMY: u32 = u32::MAX;

/// Per-vertex scores of one variant.
#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessVector {
    pub variant: Criterion,
    pub scores: Vec<f64>,
}

/// Everything one source's forward BFS discovers. Appearance tables are
/// sparse over realized arrival labels; `-1` marks unvisited entries.
#[derive(Debug, Clone)]
pub struct SourceState<M: NumMode = Float64> {
    source: VertexId,
    strict: bool,
    app_vertex: Vec<VertexId>,
    app_label: Vec<TimeLabel>,
    app_offsets: Vec<u32>,
    /// Hop count of t-shortest walks per appearance.
    dist_app: Vec<i64>,
    /// Count of t-shortest paths per appearance. At appearances that can
    /// seed or transport dependencies these walks are necessarily paths;
    /// see `accumulate_dependencies`.
    sigma_app: Vec<M::Count>,
    preds: Vec<Vec<u32>>,
    dist_v: Vec<i64>,
    sigma_v: Vec<M::Count>,
    t_min: Vec<i64>,
    visit_stack: Vec<u32>,
}

impl<M: NumMode> SourceState<M> {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn n(&self) -> usize {
        self.dist_v.len()
    }

    fn aid(&self, app: VertexAppearance) -> Option<usize> {
        let lo = self.app_offsets[app.vertex] as usize;
        let hi = self.app_offsets[app.vertex + 1] as usize;
        self.app_label[lo..hi].binary_search(&app.t).ok().map(|i| lo + i)
    }

    /// Hop distance of an appearance, `None` if it was never reached.
    /// The dummy `(s, 0)` has distance 0.
    pub fn dist_app(&self, app: VertexAppearance) -> Option<i64> {
        if app.t == 0 {
            return (app.vertex == self.source).then_some(0);
        }
        let i = self.aid(app)?;
        (self.dist_app[i] >= 0).then(|| self.dist_app[i])
    }

    /// t-shortest path count of an appearance (1 for the dummy source).
    pub fn sigma_app(&self, app: VertexAppearance) -> Option<M::Count> {
        if app.t == 0 {
            return (app.vertex == self.source).then(M::one_count);
        }
        let i = self.aid(app)?;
        (self.dist_app[i] >= 0).then(|| self.sigma_app[i].clone())
    }

    /// Predecessor appearances of one appearance; the dummy source shows
    /// up as `(s, 0)`.
    pub fn preds(&self, app: VertexAppearance) -> Vec<VertexAppearance> {
        let Some(i) = self.aid(app) else { return Vec::new() };
        self.preds[i]
            .iter()
            .map(|&p| {
                if p == DUMMY {
                    VertexAppearance { vertex: self.source, t: 0 }
                } else {
                    VertexAppearance {
                        vertex: self.app_vertex[p as usize],
                        t: self.app_label[p as usize],
                    }
                }
            })
            .collect()
    }

    /// Length of a shortest temporal path from the source, -1 unreachable.
    pub fn dist_v(&self, v: VertexId) -> i64 {
        self.dist_v[v]
    }

    /// Number of shortest temporal paths from the source.
    pub fn sigma_v(&self, v: VertexId) -> M::Count {
        self.sigma_v[v].clone()
    }

    /// Earliest arrival label from the source, -1 unreachable, 0 at the
    /// source itself.
    pub fn t_min(&self, v: VertexId) -> i64 {
        self.t_min[v]
    }

    /// Appearances in discovery order (the dummy source excluded).
    pub fn visit_stack(&self) -> Vec<VertexAppearance> {
        self.visit_stack
            .iter()
            .map(|&aid| VertexAppearance {
                vertex: self.app_vertex[aid as usize],
                t: self.app_label[aid as usize],
            })
            .collect()
    }
}

/// Forward pass: BFS over vertex appearances from the dummy `(s, 0)`,
/// recording hop distances, t-shortest counts, predecessors, per-vertex
/// shortest counts, and earliest arrivals.
///
/// `t_min[v]` is the earliest arrival among *all* appearances the BFS
/// touches, which is the true earliest temporal arrival: the BFS follows
/// every transition leaving every reached appearance, so each
/// walk-reachable appearance is reached, and earliest walk arrivals and
/// earliest path arrivals coincide (truncate a walk at the first visit of
/// its endpoint).
pub fn single_source_shortest<M: NumMode>(
    g: &TemporalGraph,
    s: VertexId,
    strict: bool,
) -> Result<SourceState<M>> {
    g.check_vertex(s)?;
    let n = g.n();
    let napp = g.app_count();
    let mut st: SourceState<M> = SourceState {
        source: s,
        strict,
        app_vertex: (0..napp as u32).map(|a| g.app_vertex(a)).collect(),
        app_label: (0..napp as u32).map(|a| g.app_label(a)).collect(),
        app_offsets: {
            let mut offs = Vec::with_capacity(n + 1);
            offs.push(0u32);
            offs.extend((0..n).map(|v| g.app_range(v).end as u32));
            offs
        },
        dist_app: vec![-1; napp],
        sigma_app: (0..napp).map(|_| M::zero_count()).collect(),
        preds: vec![Vec::new(); napp],
        dist_v: vec![-1; n],
        sigma_v: (0..n).map(|_| M::zero_count()).collect(),
        t_min: vec![-1; n],
        visit_stack: Vec::new(),
    };
    st.dist_v[s] = 0;
    st.sigma_v[s] = M::one_count();
    st.t_min[s] = 0;

    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(DUMMY);
    while let Some(item) = queue.pop_front() {
        // The popped appearance is settled: every predecessor sits at a
        // strictly smaller BFS level, so its sigma is final.
        let (v, t, d, sig) = if item == DUMMY {
            (s, 0, 0i64, M::one_count())
        } else {
            let i = item as usize;
            (st.app_vertex[i], st.app_label[i], st.dist_app[i], st.sigma_app[i].clone())
        };
        let nbs = g.neighbors(v);
        let start = if strict {
            nbs.partition_point(|nb| nb.t <= t)
        } else {
            nbs.partition_point(|nb| nb.t < t)
        };
        for nb in &nbs[start..] {
            let w = nb.peer;
            let wa = nb.peer_app as usize;
            if st.t_min[w] == -1 || (nb.t as i64) < st.t_min[w] {
                st.t_min[w] = nb.t as i64;
            }
            if st.dist_app[wa] == -1 {
                st.dist_app[wa] = d + 1;
                if st.dist_v[w] == -1 {
                    st.dist_v[w] = d + 1;
                }
                st.visit_stack.push(nb.peer_app);
                queue.push_back(nb.peer_app);
            }
            if st.dist_app[wa] == d + 1 {
                M::add_count(&mut st.sigma_app[wa], &sig);
                st.preds[wa].push(item);
                if st.dist_v[w] == d + 1 {
                    M::add_count(&mut st.sigma_v[w], &sig);
                }
            }
        }
    }
    Ok(st)
}

/// One source's dependency tables as dense per-appearance vectors, plus
/// the dummy appearance's totals.
struct DepVecs<M: NumMode> {
    d_sh: Vec<M::Score>,
    d_fm: Vec<M::Score>,
    dummy_sh: M::Score,
    dummy_fm: M::Score,
}

/// Backward pass over the predecessor DAG in reverse discovery order.
///
/// Seeds: an appearance at hop level `dist_v[w]` takes the shortest seed
/// `sigma_app/sigma_v`; the appearance at `t_min[w]` takes the
/// shortest-foremost seed 1. Seeded appearances are exactly the optimal
/// arrival events, where t-shortest walks cannot repeat a vertex (a
/// repeat could be shortcut into fewer hops or an equal-hop earlier
/// arrival), so the counts being propagated are genuine path counts. The
/// dummy totals start at 1: the diagonal pair contributes its whole
/// dependency to `(s, 0)`.
fn dependency_vectors<M: NumMode>(st: &SourceState<M>) -> DepVecs<M> {
    let napp = st.dist_app.len();
    let one = M::score_from_usize(1);
    let one_count = M::one_count();
    let mut dep: DepVecs<M> = DepVecs {
        d_sh: (0..napp).map(|_| M::zero_score()).collect(),
        d_fm: (0..napp).map(|_| M::zero_score()).collect(),
        dummy_sh: one.clone(),
        dummy_fm: one.clone(),
    };
    for &aid in st.visit_stack.iter().rev() {
        let i = aid as usize;
        let w = st.app_vertex[i];
        if st.dist_app[i] == st.dist_v[w] {
            let seed = M::ratio(&st.sigma_app[i], &st.sigma_v[w]);
            M::add_score(&mut dep.d_sh[i], &seed);
        }
        if st.app_label[i] as i64 == st.t_min[w] {
            M::add_score(&mut dep.d_fm[i], &one);
        }
        let coef_sh = dep.d_sh[i].clone();
        let coef_fm = dep.d_fm[i].clone();
        let sig_w = &st.sigma_app[i];
        for &p in &st.preds[i] {
            if p == DUMMY {
                M::add_score(&mut dep.dummy_sh, &M::mul_ratio(&coef_sh, &one_count, sig_w));
                M::add_score(&mut dep.dummy_fm, &M::mul_ratio(&coef_fm, &one_count, sig_w));
            } else {
                let pi = p as usize;
                let add_sh = M::mul_ratio(&coef_sh, &st.sigma_app[pi], sig_w);
                M::add_score(&mut dep.d_sh[pi], &add_sh);
                let add_fm = M::mul_ratio(&coef_fm, &st.sigma_app[pi], sig_w);
                M::add_score(&mut dep.d_fm[pi], &add_fm);
            }
        }
    }
    dep
}

/// Appearance-level betweenness: one score per vertex appearance, with
/// label 0 rows carrying the dummy-source terms.
#[derive(Debug, Clone)]
pub struct AppearanceBetweenness<M: NumMode = Float64> {
    n: usize,
    scores: BTreeMap<VertexAppearance, M::Score>,
}

impl<M: NumMode> AppearanceBetweenness<M> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, app: VertexAppearance) -> Option<&M::Score> {
        self.scores.get(&app)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexAppearance, &M::Score)> {
        self.scores.iter().map(|(app, score)| (*app, score))
    }
}

/// Dependency tables of one source as sparse appearance maps: the
/// shortest and shortest-foremost dependency of the source on every
/// reached appearance, the dummy `(s, 0)` included.
pub fn accumulate_dependencies<M: NumMode>(
    st: &SourceState<M>,
) -> (AppearanceBetweenness<M>, AppearanceBetweenness<M>) {
    let dep = dependency_vectors(st);
    let mut sh = BTreeMap::new();
    let mut fm = BTreeMap::new();
    for &aid in &st.visit_stack {
        let i = aid as usize;
        let app = VertexAppearance { vertex: st.app_vertex[i], t: st.app_label[i] };
        sh.insert(app, dep.d_sh[i].clone());
        fm.insert(app, dep.d_fm[i].clone());
    }
    let dummy = VertexAppearance { vertex: st.source, t: 0 };
    sh.insert(dummy, dep.dummy_sh);
    fm.insert(dummy, dep.dummy_fm);
    let n = st.n();
    (
        AppearanceBetweenness { n, scores: sh },
        AppearanceBetweenness { n, scores: fm },
    )
}

/// Applies the appearance-to-vertex conversion: summing a vertex's
/// appearance scores over all labels counts every connected ordered pair
/// it belongs to as an endpoint once, plus the diagonal; subtracting its
/// reachability row and column and adding 1 removes exactly those terms.
pub fn appearance_to_vertex_scores<M: NumMode>(
    scores: &AppearanceBetweenness<M>,
    matrix: &ConnectivityMatrix,
) -> Result<Vec<M::Score>> {
    if scores.n() != matrix.n() {
        return Err(Error::Domain(format!(
            "appearance scores cover {} vertices, connectivity matrix {}",
            scores.n(),
            matrix.n()
        )));
    }
    let mut out: Vec<M::Score> = (0..matrix.n()).map(|_| M::zero_score()).collect();
    for (app, score) in scores.iter() {
        M::add_score(&mut out[app.vertex], score);
    }
    for (v, score) in out.iter_mut().enumerate() {
        M::sub_score(score, &M::score_from_usize(matrix.row_count(v) + matrix.col_count(v)));
        M::add_score(score, &M::score_from_usize(1));
    }
    Ok(out)
}

/// Per-aid accumulation of appearance betweenness across sources.
struct Alg1Partial<M: NumMode> {
    app_sh: Vec<M::Score>,
    app_fm: Vec<M::Score>,
    dummy_sh: Vec<M::Score>,
    dummy_fm: Vec<M::Score>,
}

impl<M: NumMode> Alg1Partial<M> {
    fn new(n: usize, napp: usize) -> Alg1Partial<M> {
        Alg1Partial {
            app_sh: (0..napp).map(|_| M::zero_score()).collect(),
            app_fm: (0..napp).map(|_| M::zero_score()).collect(),
            dummy_sh: (0..n).map(|_| M::zero_score()).collect(),
            dummy_fm: (0..n).map(|_| M::zero_score()).collect(),
        }
    }

    fn absorb_source(&mut self, st: &SourceState<M>) {
        let dep = dependency_vectors(st);
        for &aid in &st.visit_stack {
            let i = aid as usize;
            M::add_score(&mut self.app_sh[i], &dep.d_sh[i]);
            M::add_score(&mut self.app_fm[i], &dep.d_fm[i]);
        }
        M::add_score(&mut self.dummy_sh[st.source], &dep.dummy_sh);
        M::add_score(&mut self.dummy_fm[st.source], &dep.dummy_fm);
    }

    fn merge(&mut self, other: Alg1Partial<M>) {
        for (dst, src) in self.app_sh.iter_mut().zip(&other.app_sh) {
            M::add_score(dst, src);
        }
        for (dst, src) in self.app_fm.iter_mut().zip(&other.app_fm) {
            M::add_score(dst, src);
        }
        for (dst, src) in self.dummy_sh.iter_mut().zip(&other.dummy_sh) {
            M::add_score(dst, src);
        }
        for (dst, src) in self.dummy_fm.iter_mut().zip(&other.dummy_fm) {
            M::add_score(dst, src);
        }
    }

    fn project(&self, g: &TemporalGraph, matrix: &ConnectivityMatrix, foremost: bool) -> Vec<M::Score> {
        let (apps, dummies) = if foremost {
            (&self.app_fm, &self.dummy_fm)
        } else {
            (&self.app_sh, &self.dummy_sh)
        };
        (0..g.n())
            .map(|v| {
                let mut total = dummies[v].clone();
                for i in g.app_range(v) {
                    M::add_score(&mut total, &apps[i]);
                }
                M::sub_score(
                    &mut total,
                    &M::score_from_usize(matrix.row_count(v) + matrix.col_count(v)),
                );
                M::add_score(&mut total, &M::score_from_usize(1));
                total
            })
            .collect()
    }
}

/// Splits `0..n` round-robin over worker threads and merges the partial
/// results in worker order. With `threads <= 1` everything runs inline,
/// which is the deterministic reference schedule.
pub(crate) fn run_sources<P: Send>(
    n: usize,
    threads: usize,
    work: impl Fn(usize, &mut P) + Sync,
    make: impl Fn() -> P,
    merge: impl Fn(&mut P, P),
) -> P {
    let threads = threads.max(1).min(n.max(1));
    if threads == 1 {
        let mut partial = make();
        for s in 0..n {
            work(s, &mut partial);
        }
        return partial;
    }
    let work = &work;
    let partials: Vec<P> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let mut partial = make();
                scope.spawn(move || {
                    let mut s = k;
                    while s < n {
                        work(s, &mut partial);
                        s += threads;
                    }
                    partial
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut iter = partials.into_iter();
    let mut total = iter.next().expect("at least one worker");
    for p in iter {
        merge(&mut total, p);
    }
    total
}

/// Shortest and shortest-foremost betweenness of every vertex, computed
/// together (one BFS per source serves both), in the chosen arithmetic
/// mode and with optional parallel sources.
pub fn betweenness_shortest_par_with<M: NumMode>(
    g: &TemporalGraph,
    strict: bool,
    threads: usize,
) -> (Vec<M::Score>, Vec<M::Score>) {
    let matrix = g.reachability_matrix(strict);
    let total = run_sources(
        g.n(),
        threads,
        |s, partial: &mut Alg1Partial<M>| {
            let st = single_source_shortest::<M>(g, s, strict).expect("source id in range");
            partial.absorb_source(&st);
        },
        || Alg1Partial::new(g.n(), g.app_count()),
        Alg1Partial::merge,
    );
    (total.project(g, &matrix, false), total.project(g, &matrix, true))
}

pub fn betweenness_shortest_with<M: NumMode>(
    g: &TemporalGraph,
    strict: bool,
) -> (Vec<M::Score>, Vec<M::Score>) {
    betweenness_shortest_par_with::<M>(g, strict, 1)
}

/// Double-precision shortest / shortest-foremost betweenness.
pub fn betweenness_shortest(
    g: &TemporalGraph,
    strict: bool,
) -> (BetweennessVector, BetweennessVector) {
    let (sh, fm) = betweenness_shortest_with::<Float64>(g, strict);
    (
        BetweennessVector { variant: Criterion::shortest(strict), scores: sh },
        BetweennessVector { variant: Criterion::shortest_foremost(strict), scores: fm },
    )
}

/// Global appearance betweenness tables (shortest, shortest-foremost):
/// per-source dependencies summed over all sources.
pub fn appearance_betweenness<M: NumMode>(
    g: &TemporalGraph,
    strict: bool,
) -> (AppearanceBetweenness<M>, AppearanceBetweenness<M>) {
    let mut partial = Alg1Partial::<M>::new(g.n(), g.app_count());
    for s in 0..g.n() {
        let st = single_source_shortest::<M>(g, s, strict).expect("source id in range");
        partial.absorb_source(&st);
    }
    let mut sh = BTreeMap::new();
    let mut fm = BTreeMap::new();
    for v in 0..g.n() {
        sh.insert(VertexAppearance { vertex: v, t: 0 }, partial.dummy_sh[v].clone());
        fm.insert(VertexAppearance { vertex: v, t: 0 }, partial.dummy_fm[v].clone());
        for i in g.app_range(v) {
            let app = VertexAppearance { vertex: v, t: g.app_label(i as u32) };
            sh.insert(app, partial.app_sh[i].clone());
            fm.insert(app, partial.app_fm[i].clone());
        }
    }
    let n = g.n();
    (
        AppearanceBetweenness { n, scores: sh },
        AppearanceBetweenness { n, scores: fm },
    )
}

/// One source of the prefix-foremost engine: transitions leave a
/// min-priority queue in label order, a vertex is settled at its first
/// pop, and every transition arriving at the settled label contributes
/// path counts. Backward accumulation runs over vertex-level
/// predecessors; the final line removes the source's own pair terms.
fn prefix_foremost_source<M: NumMode>(g: &TemporalGraph, s: VertexId, scores: &mut [M::Score]) {
    let n = g.n();
    let mut t_min = vec![-1i64; n];
    let mut sigma: Vec<M::Count> = (0..n).map(|_| M::zero_count()).collect();
    let mut preds: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut order: Vec<VertexId> = Vec::new();
    t_min[s] = 0;
    sigma[s] = M::one_count();

    let mut heap: BinaryHeap<std::cmp::Reverse<(TimeLabel, u64, VertexId, VertexId)>> =
        BinaryHeap::new();
    let mut seq = 0u64;
    for nb in g.neighbors(s) {
        heap.push(std::cmp::Reverse((nb.t, seq, s, nb.peer)));
        seq += 1;
    }
    while let Some(std::cmp::Reverse((t, _, v, w))) = heap.pop() {
        if t_min[w] == -1 {
            t_min[w] = t as i64;
            order.push(w);
            let nbs = g.neighbors(w);
            for nb in &nbs[nbs.partition_point(|nb| nb.t <= t)..] {
                heap.push(std::cmp::Reverse((nb.t, seq, w, nb.peer)));
                seq += 1;
            }
        }
        if t_min[w] == t as i64 {
            // sigma[v] is final: everything feeding v popped at an
            // earlier label than t.
            let sv = sigma[v].clone();
            M::add_count(&mut sigma[w], &sv);
            preds[w].push(v);
        }
    }

    let mut delta: Vec<M::Score> = (0..n).map(|_| M::score_from_usize(1)).collect();
    for &w in order.iter().rev() {
        let coef = delta[w].clone();
        let sig_w = sigma[w].clone();
        for &v in &preds[w] {
            let add = M::mul_ratio(&coef, &sigma[v], &sig_w);
            M::add_score(&mut delta[v], &add);
            M::add_score(&mut scores[v], &add);
        }
    }
    let reach = t_min.iter().filter(|&&x| x >= 0).count();
    M::sub_score(&mut scores[s], &M::score_from_usize(reach - 1));
}

pub fn betweenness_prefix_foremost_par_with<M: NumMode>(
    g: &TemporalGraph,
    threads: usize,
) -> Vec<M::Score> {
    run_sources(
        g.n(),
        threads,
        |s, partial: &mut Vec<M::Score>| prefix_foremost_source::<M>(g, s, partial),
        || (0..g.n()).map(|_| M::zero_score()).collect(),
        |total, part| {
            for (dst, src) in total.iter_mut().zip(&part) {
                M::add_score(dst, src);
            }
        },
    )
}

pub fn betweenness_prefix_foremost_with<M: NumMode>(g: &TemporalGraph) -> Vec<M::Score> {
    betweenness_prefix_foremost_par_with::<M>(g, 1)
}

/// Double-precision strict prefix-foremost betweenness.
pub fn betweenness_prefix_foremost(g: &TemporalGraph) -> BetweennessVector {
    BetweennessVector {
        variant: Criterion::prefix_foremost(),
        scores: betweenness_prefix_foremost_with::<Float64>(g),
    }
}
