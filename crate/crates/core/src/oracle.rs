//! Exact reference results by exhaustive path enumeration.
//!
//! Everything here works directly from the definitions: paths are
//! enumerated one by one, optimal ones are filtered by comparing criterion
//! values, and counts are aggregated in exact integer/rational arithmetic.
//! Nothing is shared with the polynomial engines, which makes this module
//! the ground truth they are validated against. Costs are exponential, so
//! every entry point takes explicit [`EnumLimits`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, TimeLabel, Transition, TemporalPath, VertexAppearance, VertexId};
use crate::variant::{Criterion, Optimality};

/// Hard caps for the enumeration. `max_paths` bounds the number of paths
/// visited per source, `max_vertices` the instance size.
#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    pub max_vertices: usize,
    pub max_paths: usize,
}

impl Default for EnumLimits {
    fn default() -> EnumLimits {
        EnumLimits { max_vertices: 16, max_paths: 5_000_000 }
    }
}

/// Exact per-pair counting results: the number of optimal paths and how
/// often each vertex (and each vertex appearance) lies on one. Source and
/// target are included; the source appears as the dummy appearance
/// `(s, 0)`. `opt_value` is the minimized quantity: hop count for
/// shortest and shortest-foremost, arrival label for foremost and
/// prefix-foremost, duration (raw when available) for fastest; `None`
/// when the pair is disconnected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCounts {
    pub sigma: BigInt,
    pub per_vertex: BTreeMap<VertexId, BigInt>,
    pub per_appearance: BTreeMap<VertexAppearance, BigInt>,
    pub opt_value: Option<u64>,
}

impl PathCounts {
    fn empty() -> PathCounts {
        PathCounts {
            sigma: BigInt::zero(),
            per_vertex: BTreeMap::new(),
            per_appearance: BTreeMap::new(),
            opt_value: None,
        }
    }

    fn trivial(s: VertexId) -> PathCounts {
        let one = BigInt::one();
        PathCounts {
            sigma: one.clone(),
            per_vertex: [(s, one.clone())].into(),
            per_appearance: [(VertexAppearance { vertex: s, t: 0 }, one)].into(),
            opt_value: Some(0),
        }
    }
}

/// Stop sequence of the path currently visited by the enumerator;
/// `stops[0]` is the dummy source appearance.
type Stops = [(VertexId, TimeLabel)];

fn check_size(g: &TemporalGraph, limits: EnumLimits) -> Result<()> {
    if g.n() > limits.max_vertices {
        return Err(Error::Resource(format!(
            "{} vertices exceeds the enumeration cap of {}",
            g.n(),
            limits.max_vertices
        )));
    }
    Ok(())
}

/// Visits every nonempty temporal path starting at `s` exactly once, in
/// lexicographic neighbor order. Paths are prefix-closed, so the visitor
/// fires at every recursion node.
fn for_each_path(
    g: &TemporalGraph,
    s: VertexId,
    strict: bool,
    limits: EnumLimits,
    visit: &mut dyn FnMut(&Stops) -> Result<()>,
) -> Result<()> {
    check_size(g, limits)?;
    g.check_vertex(s)?;
    let mut stops: Vec<(VertexId, TimeLabel)> = vec![(s, 0)];
    let mut on_path = vec![false; g.n()];
    on_path[s] = true;
    let mut visited = 0usize;
    dfs(g, strict, limits, &mut stops, &mut on_path, &mut visited, visit)
}

fn dfs(
    g: &TemporalGraph,
    strict: bool,
    limits: EnumLimits,
    stops: &mut Vec<(VertexId, TimeLabel)>,
    on_path: &mut [bool],
    visited: &mut usize,
    visit: &mut dyn FnMut(&Stops) -> Result<()>,
) -> Result<()> {
    let (v, t) = *stops.last().expect("stops never empty");
    let nbs = g.neighbors(v);
    let start = if strict {
        nbs.partition_point(|nb| nb.t <= t)
    } else {
        nbs.partition_point(|nb| nb.t < t)
    };
    for nb in &nbs[start..] {
        if on_path[nb.peer] {
            continue;
        }
        *visited += 1;
        if *visited > limits.max_paths {
            return Err(Error::Resource(format!(
                "more than {} paths from one source",
                limits.max_paths
            )));
        }
        stops.push((nb.peer, nb.t));
        on_path[nb.peer] = true;
        visit(stops)?;
        dfs(g, strict, limits, stops, on_path, visited, visit)?;
        on_path[nb.peer] = false;
        stops.pop();
    }
    Ok(())
}

fn path_from_stops(stops: &Stops) -> TemporalPath {
    let transitions = stops
        .windows(2)
        .map(|w| Transition { from: w[0].0, to: w[1].0, t: w[1].1 })
        .collect();
    TemporalPath::new(transitions).expect("enumerated stops form a path")
}

/// All temporal paths from `s` to `z` (the empty path when `s == z`).
pub fn enumerate_paths(
    g: &TemporalGraph,
    s: VertexId,
    z: VertexId,
    strict: bool,
    limits: EnumLimits,
) -> Result<Vec<TemporalPath>> {
    g.check_vertex(z)?;
    if s == z {
        check_size(g, limits)?;
        g.check_vertex(s)?;
        return Ok(vec![TemporalPath::empty()]);
    }
    let mut out = Vec::new();
    for_each_path(g, s, strict, limits, &mut |stops| {
        if stops.last().expect("nonempty").0 == z {
            out.push(path_from_stops(stops));
        }
        Ok(())
    })?;
    Ok(out)
}

/// All temporal walks from `s` to `z` with at most `max_hops` transitions.
/// Walks may repeat vertices, so a hop bound is required; the
/// `limits.max_paths` cap also applies to the number of walks explored.
pub fn enumerate_walks(
    g: &TemporalGraph,
    s: VertexId,
    z: VertexId,
    strict: bool,
    max_hops: usize,
    limits: EnumLimits,
) -> Result<Vec<Vec<Transition>>> {
    check_size(g, limits)?;
    g.check_vertex(s)?;
    g.check_vertex(z)?;
    let mut out = Vec::new();
    if s == z {
        out.push(Vec::new());
    }
    let mut current: Vec<Transition> = Vec::new();
    let mut visited = 0usize;
    walk_dfs(g, s, 0, z, strict, max_hops, limits, &mut current, &mut visited, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk_dfs(
    g: &TemporalGraph,
    v: VertexId,
    t: TimeLabel,
    z: VertexId,
    strict: bool,
    hops_left: usize,
    limits: EnumLimits,
    current: &mut Vec<Transition>,
    visited: &mut usize,
    out: &mut Vec<Vec<Transition>>,
) -> Result<()> {
    if hops_left == 0 {
        return Ok(());
    }
    let nbs = g.neighbors(v);
    let start = if strict {
        nbs.partition_point(|nb| nb.t <= t)
    } else {
        nbs.partition_point(|nb| nb.t < t)
    };
    for nb in &nbs[start..] {
        *visited += 1;
        if *visited > limits.max_paths {
            return Err(Error::Resource(format!(
                "more than {} walks explored",
                limits.max_paths
            )));
        }
        current.push(Transition { from: v, to: nb.peer, t: nb.t });
        if nb.peer == z {
            out.push(current.clone());
        }
        walk_dfs(g, nb.peer, nb.t, z, strict, hops_left - 1, limits, current, visited, out)?;
        current.pop();
    }
    Ok(())
}

/// Criterion value of a completed path, smaller is better. Two-component
/// keys make shortest-foremost a lexicographic minimum.
fn criterion_key(g: &TemporalGraph, crit: Criterion, stops: &Stops) -> (u64, u64) {
    let arrival = stops.last().expect("nonempty").1;
    let hops = (stops.len() - 1) as u64;
    match crit.optimality() {
        Optimality::Shortest => (hops, 0),
        Optimality::Foremost | Optimality::PrefixForemost => (arrival as u64, 0),
        Optimality::ShortestForemost => (arrival as u64, hops),
        Optimality::Fastest => {
            let departure = stops[1].1;
            (g.raw_time(arrival) - g.raw_time(departure), 0)
        }
    }
}

/// Running aggregation of the optimal paths seen so far for one
/// (criterion, target) cell: when a strictly better key arrives, the
/// counts reset.
#[derive(Debug, Clone)]
struct Agg {
    best: Option<(u64, u64)>,
    sigma: BigInt,
    per_vertex: BTreeMap<VertexId, BigInt>,
    per_appearance: BTreeMap<VertexAppearance, BigInt>,
}

impl Agg {
    fn new() -> Agg {
        Agg {
            best: None,
            sigma: BigInt::zero(),
            per_vertex: BTreeMap::new(),
            per_appearance: BTreeMap::new(),
        }
    }

    fn offer(&mut self, key: (u64, u64), stops: &Stops) {
        match self.best {
            Some(best) if best < key => return,
            Some(best) if best == key => {}
            _ => {
                self.best = Some(key);
                self.sigma = BigInt::zero();
                self.per_vertex.clear();
                self.per_appearance.clear();
            }
        }
        self.sigma += 1;
        for &(v, t) in stops {
            *self.per_vertex.entry(v).or_insert_with(BigInt::zero) += 1;
            *self
                .per_appearance
                .entry(VertexAppearance { vertex: v, t })
                .or_insert_with(BigInt::zero) += 1;
        }
    }

    fn into_counts(self, crit: Criterion) -> PathCounts {
        let opt_value = self.best.map(|key| match crit.optimality() {
            Optimality::ShortestForemost => key.1,
            _ => key.0,
        });
        PathCounts {
            sigma: self.sigma,
            per_vertex: self.per_vertex,
            per_appearance: self.per_appearance,
            opt_value,
        }
    }
}

/// Prefix-foremost test: every stop is reached at its earliest possible
/// arrival from the source.
fn prefix_foremost_ok(stops: &Stops, earliest: &[i64]) -> bool {
    stops.iter().all(|&(v, t)| earliest[v] == t as i64)
}

/// One enumeration pass from `s`, aggregating optimal-path counts for every
/// target and every requested criterion (all of one strictness).
fn aggregate_from_source(
    g: &TemporalGraph,
    s: VertexId,
    strict: bool,
    criteria: &[Criterion],
    limits: EnumLimits,
) -> Result<Vec<Vec<Agg>>> {
    debug_assert!(criteria.iter().all(|c| c.strict() == strict));
    let needs_prefix = criteria
        .iter()
        .any(|c| c.optimality() == Optimality::PrefixForemost);
    let earliest = if needs_prefix {
        g.earliest_arrivals(s, true)?
    } else {
        Vec::new()
    };
    let mut aggs: Vec<Vec<Agg>> = criteria
        .iter()
        .map(|_| (0..g.n()).map(|_| Agg::new()).collect())
        .collect();
    for_each_path(g, s, strict, limits, &mut |stops| {
        let z = stops.last().expect("nonempty").0;
        for (ci, crit) in criteria.iter().enumerate() {
            if crit.optimality() == Optimality::PrefixForemost
                && !prefix_foremost_ok(stops, &earliest)
            {
                continue;
            }
            aggs[ci][z].offer(criterion_key(g, *crit, stops), stops);
        }
        Ok(())
    })?;
    Ok(aggs)
}

/// Exact σ counting for one source-target pair. For `s == z` the single
/// empty path is counted by convention.
pub fn count_optimal(
    g: &TemporalGraph,
    s: VertexId,
    z: VertexId,
    criterion: Criterion,
    limits: EnumLimits,
) -> Result<PathCounts> {
    g.check_vertex(z)?;
    if s == z {
        check_size(g, limits)?;
        g.check_vertex(s)?;
        return Ok(PathCounts::trivial(s));
    }
    let mut aggs = aggregate_from_source(g, s, criterion.strict(), &[criterion], limits)?;
    let agg = std::mem::replace(&mut aggs[0][z], Agg::new());
    if agg.best.is_none() {
        return Ok(PathCounts::empty());
    }
    Ok(agg.into_counts(criterion))
}

/// The optimal paths themselves, in enumeration order.
pub fn optimal_paths(
    g: &TemporalGraph,
    s: VertexId,
    z: VertexId,
    criterion: Criterion,
    limits: EnumLimits,
) -> Result<Vec<TemporalPath>> {
    g.check_vertex(z)?;
    if s == z {
        check_size(g, limits)?;
        g.check_vertex(s)?;
        return Ok(vec![TemporalPath::empty()]);
    }
    let earliest = if criterion.optimality() == Optimality::PrefixForemost {
        g.earliest_arrivals(s, true)?
    } else {
        Vec::new()
    };
    let mut best: Option<(u64, u64)> = None;
    let mut found: Vec<((u64, u64), TemporalPath)> = Vec::new();
    for_each_path(g, s, criterion.strict(), limits, &mut |stops| {
        if stops.last().expect("nonempty").0 != z {
            return Ok(());
        }
        if criterion.optimality() == Optimality::PrefixForemost
            && !prefix_foremost_ok(stops, &earliest)
        {
            return Ok(());
        }
        let key = criterion_key(g, criterion, stops);
        if best.map_or(true, |b| key <= b) {
            best = Some(best.map_or(key, |b| b.min(key)));
            found.push((key, path_from_stops(stops)));
        }
        Ok(())
    })?;
    let best = match best {
        Some(b) => b,
        None => return Ok(Vec::new()),
    };
    Ok(found
        .into_iter()
        .filter(|(k, _)| *k == best)
        .map(|(_, p)| p)
        .collect())
}

/// Pair dependency of `v` for the pair `(s, z)`: the fraction of optimal
/// `s`-`z` paths through `v`, zero when the pair is disconnected.
pub fn pair_dependency(
    g: &TemporalGraph,
    s: VertexId,
    z: VertexId,
    v: VertexId,
    criterion: Criterion,
    limits: EnumLimits,
) -> Result<BigRational> {
    g.check_vertex(v)?;
    let counts = count_optimal(g, s, z, criterion, limits)?;
    if counts.sigma.is_zero() {
        return Ok(BigRational::zero());
    }
    let num = counts.per_vertex.get(&v).cloned().unwrap_or_else(BigInt::zero);
    Ok(BigRational::new(num, counts.sigma))
}

/// Exact temporal betweenness of every vertex under several criteria at
/// once, sharing one enumeration pass per source and strictness.
pub fn exact_betweenness_many(
    g: &TemporalGraph,
    criteria: &[Criterion],
    limits: EnumLimits,
) -> Result<Vec<Vec<BigRational>>> {
    check_size(g, limits)?;
    let n = g.n();
    let mut results = vec![vec![BigRational::zero(); n]; criteria.len()];
    for strict in [false, true] {
        let group: Vec<(usize, Criterion)> = criteria
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, c)| c.strict() == strict)
            .collect();
        if group.is_empty() {
            continue;
        }
        let plain: Vec<Criterion> = group.iter().map(|&(_, c)| c).collect();
        for s in 0..n {
            let aggs = aggregate_from_source(g, s, strict, &plain, limits)?;
            for ((out_idx, _), per_target) in group.iter().zip(aggs) {
                for (z, agg) in per_target.into_iter().enumerate() {
                    if z == s || agg.best.is_none() {
                        continue;
                    }
                    let sigma = agg.sigma.clone();
                    for (v, cnt) in agg.per_vertex {
                        if v != s && v != z {
                            results[*out_idx][v] += BigRational::new(cnt, sigma.clone());
                        }
                    }
                }
            }
        }
    }
    Ok(results)
}

/// Exact temporal betweenness under one criterion.
pub fn exact_betweenness(
    g: &TemporalGraph,
    criterion: Criterion,
    limits: EnumLimits,
) -> Result<Vec<BigRational>> {
    Ok(exact_betweenness_many(g, &[criterion], limits)?
        .pop()
        .expect("one result per criterion"))
}

/// Exact appearance-level betweenness: for every appearance `(v, t)` the
/// sum of `σ_sz(v,t)/σ_sz` over connected ordered pairs, diagonal pairs
/// included (each contributes 1 at its dummy appearance `(s, 0)`).
pub fn exact_appearance_betweenness(
    g: &TemporalGraph,
    criterion: Criterion,
    limits: EnumLimits,
) -> Result<BTreeMap<VertexAppearance, BigRational>> {
    check_size(g, limits)?;
    let n = g.n();
    let mut scores: BTreeMap<VertexAppearance, BigRational> = BTreeMap::new();
    for s in 0..n {
        let aggs = aggregate_from_source(g, s, criterion.strict(), &[criterion], limits)?;
        *scores
            .entry(VertexAppearance { vertex: s, t: 0 })
            .or_insert_with(BigRational::zero) += BigRational::one();
        for (z, agg) in aggs.into_iter().next().expect("one criterion").into_iter().enumerate() {
            if z == s || agg.best.is_none() {
                continue;
            }
            let sigma = agg.sigma.clone();
            for (app, cnt) in agg.per_appearance {
                *scores.entry(app).or_insert_with(BigRational::zero) +=
                    BigRational::new(cnt, sigma.clone());
            }
        }
    }
    Ok(scores)
}

/// Undirected bipartite graph on sides `{0..left}` and `{0..right}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(
        left: usize,
        right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<BipartiteGraph> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= left || j >= right {
                return Err(Error::Domain(format!(
                    "edge ({i}, {j}) out of range for sides {left} x {right}"
                )));
            }
            set.insert((i, j));
        }
        Ok(BipartiteGraph { left, right, edges: set })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

/// Number of matchings of any size, the empty matching included.
pub fn count_matchings(bg: &BipartiteGraph) -> Result<u128> {
    if bg.left > 16 || bg.right > 16 {
        return Err(Error::Resource(
            "matching count capped at 16 vertices per side".into(),
        ));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); bg.left];
    for (i, j) in bg.edges() {
        adj[i].push(j);
    }
    fn rec(
        i: usize,
        mask: u32,
        adj: &[Vec<usize>],
        memo: &mut HashMap<(usize, u32), u128>,
    ) -> u128 {
        if i == adj.len() {
            return 1;
        }
        if let Some(&hit) = memo.get(&(i, mask)) {
            return hit;
        }
        let mut total = rec(i + 1, mask, adj, memo);
        for &j in &adj[i] {
            if mask & (1 << j) == 0 {
                total += rec(i + 1, mask | (1 << j), adj, memo);
            }
        }
        memo.insert((i, mask), total);
        total
    }
    Ok(rec(0, 0, &adj, &mut HashMap::new()))
}

/// Temporal instance whose strict source-sink path count equals the number
/// of matchings of `bg` minus one.
///
/// Left vertices hang off the source at odd labels `2i-1`; the edges of
/// `bg` run forward at even labels `2i`; from the second left vertex on,
/// every right vertex can be revisited backwards at label `2i-1`; the sink
/// collects all right vertices at the final odd label.
pub fn matching_gadget(bg: &BipartiteGraph) -> Result<(TemporalGraph, VertexId, VertexId)> {
    let a = bg.left;
    let b = bg.right;
    let mut labels = Vec::with_capacity(a + b + 2);
    labels.push("a'".to_string());
    for i in 1..=a {
        labels.push(format!("a{i}"));
    }
    for j in 1..=b {
        labels.push(format!("b{j}"));
    }
    labels.push("b'".to_string());
    let source = 0;
    let sink = a + b + 1;
    let left = |i: usize| i; // 1-based left index
    let right = |j: usize| a + j; // 1-based right index
    let t_final = (2 * a + 1).max(1) as TimeLabel;
    let mut edges: Vec<(VertexId, VertexId, TimeLabel)> = Vec::new();
    for i in 1..=a {
        edges.push((source, left(i), (2 * i - 1) as TimeLabel));
        if i > 1 {
            for j in 1..=b {
                edges.push((left(i), right(j), (2 * i - 1) as TimeLabel));
            }
        }
    }
    for (i, j) in bg.edges() {
        edges.push((left(i + 1), right(j + 1), (2 * (i + 1)) as TimeLabel));
    }
    for j in 1..=b {
        edges.push((right(j), sink, t_final));
    }
    let graph = TemporalGraph::from_parts(labels, edges, None)?;
    Ok((graph, source, sink))
}

/// A graph extended so that one probe vertex's foremost pair dependency
/// encodes the number of source-sink paths in the original graph.
#[derive(Debug)]
pub struct GadgetInstance {
    pub graph: TemporalGraph,
    /// `a'`, attached to the original source at label 1.
    pub source: VertexId,
    /// `b'`, attached to the original sink at the final label.
    pub sink: VertexId,
    /// `v'`, the degree-two probe between source and sink.
    pub probe: VertexId,
}

/// Builds the probe construction around an `(a, b)` pair: all original
/// labels shift up by one, `a'` joins `a` and the probe at label 1, and
/// `b'` joins `b` and the probe at the new final label.
pub fn betweenness_gadget(
    g: &TemporalGraph,
    a: VertexId,
    b: VertexId,
) -> Result<GadgetInstance> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::Domain("gadget endpoints must differ".into()));
    }
    let mut labels: Vec<String> = g.labels().to_vec();
    for fresh in ["a'", "b'", "v'"] {
        if g.vertex_by_label(fresh).is_some() {
            return Err(Error::Domain(format!(
                "vertex label {fresh:?} already taken; rename it before building the gadget"
            )));
        }
        labels.push(fresh.to_string());
    }
    let source = g.n();
    let sink = g.n() + 1;
    let probe = g.n() + 2;
    let t_final = g.t_max() + 2;
    let mut edges: Vec<(VertexId, VertexId, TimeLabel)> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.t + 1))
        .collect();
    edges.push((source, a, 1));
    edges.push((source, probe, 1));
    edges.push((probe, sink, t_final));
    edges.push((b, sink, t_final));
    let graph = TemporalGraph::from_parts(labels, edges, None)?;
    Ok(GadgetInstance { graph, source, sink, probe })
}

/// Everything the probe construction yields for one `(a, b)` pair.
#[derive(Debug)]
pub struct GadgetReport {
    /// Four times the foremost pair dependency of the probe for the
    /// (source, sink) pair of the extended graph.
    pub statistic: BigRational,
    /// `4 / statistic - 1`; equals the number of `a`-`b` paths.
    pub recovered: BigInt,
    /// Ground truth by direct enumeration in the original graph.
    pub direct_count: BigInt,
}

/// Runs the probe construction end to end: the number of temporal `a`-`b`
/// paths in `g` is recovered from a single foremost pair dependency in the
/// extended graph, without enumerating anything there.
pub fn gadget_report(
    g: &TemporalGraph,
    a: VertexId,
    b: VertexId,
    strict: bool,
    limits: EnumLimits,
) -> Result<GadgetReport> {
    let direct = BigInt::from(enumerate_paths(g, a, b, strict, limits)?.len());
    let inst = betweenness_gadget(g, a, b)?;
    let dependency = pair_dependency(
        &inst.graph,
        inst.source,
        inst.sink,
        inst.probe,
        Criterion::foremost(strict),
        limits,
    )?;
    if dependency.is_zero() {
        return Err(Error::Domain(
            "probe dependency vanished; the construction guarantees it cannot".into(),
        ));
    }
    let statistic = BigRational::from_integer(BigInt::from(4)) * &dependency;
    let recovered = BigRational::from_integer(BigInt::from(4)) / &statistic
        - BigRational::one();
    if !recovered.is_integer() {
        return Err(Error::Domain(format!(
            "recovered count {recovered} is not an integer"
        )));
    }
    Ok(GadgetReport { statistic, recovered: recovered.to_integer(), direct_count: direct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::example_graph;

    fn limits() -> EnumLimits {
        EnumLimits::default()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(big(n), big(d))
    }

    #[test]
    fn example_has_three_disjoint_routes() {
        let g = example_graph();
        let s = g.vertex_by_label("s").unwrap();
        let z = g.vertex_by_label("z").unwrap();
        let paths = enumerate_paths(&g, s, z, true, limits()).unwrap();
        assert_eq!(paths.len(), 3);
        for p in &paths {
            assert!(p.is_valid_in(&g, true));
        }
        let lens: BTreeSet<usize> = paths.iter().map(|p| p.len()).collect();
        assert_eq!(lens, BTreeSet::from([2, 3, 4]));
    }

    #[test]
    fn criteria_pick_different_routes_on_example() {
        let g = example_graph();
        let s = g.vertex_by_label("s").unwrap();
        let z = g.vertex_by_label("z").unwrap();
        let a = g.vertex_by_label("a").unwrap();
        let b2 = g.vertex_by_label("b2").unwrap();
        let c2 = g.vertex_by_label("c2").unwrap();

        let sh = count_optimal(&g, s, z, Criterion::shortest(true), limits()).unwrap();
        assert_eq!(sh.sigma, big(1));
        assert_eq!(sh.opt_value, Some(2));
        assert_eq!(sh.per_vertex.get(&a), Some(&big(1)));

        let fm = count_optimal(&g, s, z, Criterion::foremost(true), limits()).unwrap();
        assert_eq!(fm.sigma, big(1));
        assert_eq!(fm.opt_value, Some(4));
        assert_eq!(fm.per_vertex.get(&b2), Some(&big(1)));
        let fm_paths = optimal_paths(&g, s, z, Criterion::foremost(true), limits()).unwrap();
        assert_eq!(fm_paths.len(), 1);
        assert_eq!(fm_paths[0].arrival(), Some(4));
        assert_eq!(fm_paths[0].len(), 4);

        let fa = count_optimal(&g, s, z, Criterion::fastest(true), limits()).unwrap();
        assert_eq!(fa.sigma, big(1));
        assert_eq!(fa.opt_value, Some(2));
        let fa_paths = optimal_paths(&g, s, z, Criterion::fastest(true), limits()).unwrap();
        assert_eq!(fa_paths.len(), 1);
        assert!(fa_paths[0].visits(c2));
        assert_eq!(fa_paths[0].departure(), Some(3));
        assert_eq!(fa_paths[0].arrival(), Some(5));

        let pfm = count_optimal(&g, s, z, Criterion::prefix_foremost(), limits()).unwrap();
        assert_eq!(pfm.sigma, big(1));
        assert_eq!(pfm.per_vertex.get(&b2), Some(&big(1)));
    }

    #[test]
    fn trivial_and_unreachable_pairs() {
        let g = example_graph();
        let s = g.vertex_by_label("s").unwrap();
        let z = g.vertex_by_label("z").unwrap();
        let own = count_optimal(&g, s, s, Criterion::shortest(true), limits()).unwrap();
        assert_eq!(own.sigma, big(1));
        assert_eq!(own.per_appearance.get(&VertexAppearance { vertex: s, t: 0 }), Some(&big(1)));
        // No temporal path leads from z back to s: every edge at s carries
        // a label at or below the labels at z.
        let back = count_optimal(&g, z, s, Criterion::shortest(true), limits()).unwrap();
        assert_eq!(back.sigma, big(0));
        assert!(back.per_vertex.is_empty());
    }

    #[test]
    fn hop_minimality_per_arrival_is_not_prefix_closed() {
        // A path with the fewest hops for its exact arrival label can have
        // a prefix that is beaten at its own arrival: the only shorter
        // rival runs through the path's final vertex, so splicing it in
        // would revisit that vertex and no shorter path results. Both
        // fixtures put z on the cheap route to c, making s-a-b-c-z
        // hop-minimal for its arrival while its three-hop prefix to c is
        // beaten by the two-hop s-z-c.
        use std::collections::HashMap;
        let labels: Vec<String> =
            ["s", "a", "b", "c", "z"].iter().map(|s| s.to_string()).collect();
        let cases: [(bool, Vec<(usize, usize, TimeLabel)>); 2] = [
            (false, vec![(0, 1, 1), (1, 2, 1), (2, 3, 3), (3, 4, 3), (0, 4, 1)]),
            (true, vec![(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 4, 4), (0, 4, 1), (3, 4, 3)]),
        ];
        for (strict, edges) in cases {
            let g = TemporalGraph::from_parts(labels.clone(), edges, None).unwrap();
            let mut best: HashMap<(VertexId, TimeLabel), usize> = HashMap::new();
            let mut fewest: HashMap<VertexId, usize> = HashMap::new();
            let mut earliest: HashMap<VertexId, TimeLabel> = HashMap::new();
            let mut all_paths = Vec::new();
            for z in 1..g.n() {
                for p in enumerate_paths(&g, 0, z, strict, limits()).unwrap() {
                    let arr = p.arrival().unwrap();
                    let hops = p.len();
                    best.entry((z, arr)).and_modify(|b| *b = (*b).min(hops)).or_insert(hops);
                    fewest.entry(z).and_modify(|b| *b = (*b).min(hops)).or_insert(hops);
                    earliest.entry(z).and_modify(|b| *b = (*b).min(arr)).or_insert(arr);
                    all_paths.push(p);
                }
            }
            let long = all_paths
                .iter()
                .find(|p| p.len() == 4 && p.transitions().last().unwrap().to == 4)
                .unwrap();
            let arr = long.arrival().unwrap();
            assert_eq!(best[&(4, arr)], 4, "no rival with that exact arrival, strict {strict}");
            let mid = long.transitions()[2];
            assert_eq!(mid.to, 3);
            assert_eq!(
                best[&(3, mid.t)],
                2,
                "the three-hop prefix to c is beaten through z, strict {strict}"
            );
            // The scored classes stay prefix-closed: the long path is in
            // neither (z is one hop away at label 1).
            for p in &all_paths {
                let trs = p.transitions();
                let z = trs[trs.len() - 1].to;
                let arr = p.arrival().unwrap();
                if best[&(z, arr)] != p.len() || (p.len() != fewest[&z] && arr != earliest[&z]) {
                    continue;
                }
                for cut in 1..trs.len() {
                    let key = (trs[cut - 1].to, trs[cut - 1].t);
                    assert_eq!(best[&key], cut, "scored class, strict {strict}");
                }
            }
        }
    }

    #[test]
    fn shortest_foremost_breaks_ties_lexicographically() {
        // Two arrival-3 routes of lengths 2 and 3, plus a shorter late one.
        let g = TemporalGraph::from_parts(
            vec!["s".into(), "x".into(), "y1".into(), "y2".into(), "z".into()],
            [
                (0, 1, 1),
                (1, 4, 3),
                (0, 2, 1),
                (2, 3, 2),
                (3, 4, 3),
                (0, 4, 9),
            ],
            None,
        )
        .unwrap();
        let counts = count_optimal(&g, 0, 4, Criterion::shortest_foremost(true), limits()).unwrap();
        assert_eq!(counts.sigma, big(1));
        assert_eq!(counts.per_vertex.get(&1), Some(&big(1)));
        assert_eq!(counts.per_vertex.get(&2), None);
        let sh = count_optimal(&g, 0, 4, Criterion::shortest(true), limits()).unwrap();
        assert_eq!(sh.sigma, big(1));
        assert!(sh.per_vertex.get(&1).is_none(), "plain shortest takes the direct label-9 edge");
    }

    #[test]
    fn fastest_uses_raw_timestamps_when_normalized() {
        // Raw gaps differ although label gaps agree: s-x-z spans labels 1..2
        // and 10..20 raw, s-y-z spans labels 2..3 and 20..21 raw.
        let text = "s x 10\nx z 20\ns y 20\ny z 21\n";
        let parsed = crate::io::parse_edge_list(
            text,
            crate::io::EdgeListFormat::Uvt,
            crate::io::ParseOptions::default(),
        )
        .unwrap();
        let g = parsed.graph;
        let s = g.vertex_by_label("s").unwrap();
        let z = g.vertex_by_label("z").unwrap();
        let y = g.vertex_by_label("y").unwrap();
        let fast = count_optimal(&g, s, z, Criterion::fastest(true), limits()).unwrap();
        assert_eq!(fast.sigma, big(1));
        assert_eq!(fast.per_vertex.get(&y), Some(&big(1)));
    }

    #[test]
    fn betweenness_zero_bound_and_symmetry_free_cases() {
        let g = example_graph();
        let scores = exact_betweenness(&g, Criterion::shortest(true), limits()).unwrap();
        let n = g.n();
        let cap = BigRational::from_integer(big(((n - 1) * (n - 2)) as i64));
        for c in &scores {
            assert!(*c >= BigRational::zero() && *c <= cap);
        }
        let a = g.vertex_by_label("a").unwrap();
        // a only ever relays the unique shortest s-z path.
        assert_eq!(scores[a], rat(1, 1));
    }

    #[test]
    fn appearance_scores_sum_to_vertex_scores_plus_corrections() {
        // Lemma check in miniature: summing appearance scores and removing
        // the per-pair endpoint contributions recovers plain betweenness.
        let g = example_graph();
        let crit = Criterion::shortest_foremost(true);
        let apps = exact_appearance_betweenness(&g, crit, limits()).unwrap();
        let plain = exact_betweenness(&g, crit, limits()).unwrap();
        let matrix = g.reachability_matrix(true);
        for v in 0..g.n() {
            let total: BigRational = apps
                .iter()
                .filter(|(app, _)| app.vertex == v)
                .map(|(_, c)| c.clone())
                .sum();
            let row = matrix.row_count(v);
            let col = matrix.col_count(v);
            let expect = plain[v].clone()
                + BigRational::from_integer(big((row + col) as i64))
                - BigRational::one();
            assert_eq!(total, expect, "vertex {v}");
        }
    }

    #[test]
    fn walks_extend_paths() {
        let g = example_graph();
        let s = g.vertex_by_label("s").unwrap();
        let z = g.vertex_by_label("z").unwrap();
        let paths = enumerate_paths(&g, s, z, true, limits()).unwrap();
        let walks = enumerate_walks(&g, s, z, true, g.n(), limits()).unwrap();
        assert!(walks.len() >= paths.len());
        for p in &paths {
            assert!(walks.iter().any(|w| w.as_slice() == p.transitions()));
        }
    }

    #[test]
    fn walk_enumeration_finds_vertex_revisits() {
        // s-a@1, a-b@2, b-a@3, a-z@4: one path s..z of length 2 plus a
        // detour walk of length 4 revisiting a.
        let g = TemporalGraph::from_parts(
            vec!["s".into(), "a".into(), "b".into(), "z".into()],
            [(0, 1, 1), (1, 2, 2), (1, 2, 3), (1, 3, 4)],
            None,
        )
        .unwrap();
        let walks = enumerate_walks(&g, 0, 3, true, 5, limits()).unwrap();
        assert_eq!(walks.len(), 2);
        let paths = enumerate_paths(&g, 0, 3, true, limits()).unwrap();
        assert_eq!(paths.len(), 1);
    }

    #[test]
    fn enumeration_limits_trigger() {
        let g = example_graph();
        let s = g.vertex_by_label("s").unwrap();
        let z = g.vertex_by_label("z").unwrap();
        let tight = EnumLimits { max_vertices: 4, max_paths: 10 };
        assert!(matches!(
            enumerate_paths(&g, s, z, true, tight),
            Err(Error::Resource(_))
        ));
        let tiny = EnumLimits { max_vertices: 16, max_paths: 2 };
        assert!(matches!(
            enumerate_paths(&g, s, z, true, tiny),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn matching_count_on_complete_two_by_two() {
        let bg = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(count_matchings(&bg).unwrap(), 7);
    }

    #[test]
    fn matching_gadget_path_count_is_matchings_minus_one() {
        let bg = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let (g, source, sink) = matching_gadget(&bg).unwrap();
        let paths = enumerate_paths(&g, source, sink, true, limits()).unwrap();
        assert_eq!(paths.len() as u128, count_matchings(&bg).unwrap() - 1);
    }

    #[test]
    fn matching_gadget_structure() {
        // Hand-checkable instance: left degrees 2, 1, 2.
        let bg = BipartiteGraph::new(3, 3, [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)]).unwrap();
        assert_eq!(count_matchings(&bg).unwrap(), 12);
        let (g, source, sink) = matching_gadget(&bg).unwrap();
        assert_eq!(g.t_max(), 7);
        let a2 = g.vertex_by_label("a2").unwrap();
        let nb = g.temporal_neighborhood(a2).unwrap();
        // a2 at label 3: a' plus all three b vertices backwards; at 4: b2.
        assert_eq!(nb.iter().filter(|&&(_, t)| t == 3).count(), 4);
        assert_eq!(nb.iter().filter(|&&(_, t)| t == 4).count(), 1);
        let paths = enumerate_paths(&g, source, sink, true, limits()).unwrap();
        assert_eq!(paths.len(), 11);
    }

    #[test]
    fn gadget_report_single_edge() {
        // One a-b edge means exactly one a-b path.
        let g = TemporalGraph::from_parts(vec!["a".into(), "b".into()], [(0, 1, 1)], None)
            .unwrap();
        for strict in [true, false] {
            let report = gadget_report(&g, 0, 1, strict, limits()).unwrap();
            assert_eq!(report.direct_count, big(1));
            assert_eq!(report.recovered, big(1));
            assert_eq!(report.statistic, rat(2, 1));
        }
    }

    #[test]
    fn gadget_report_disconnected_pair() {
        let g = TemporalGraph::from_parts(vec!["a".into(), "b".into()], [], None).unwrap();
        let report = gadget_report(&g, 0, 1, true, limits()).unwrap();
        assert_eq!(report.direct_count, big(0));
        assert_eq!(report.recovered, big(0));
        assert_eq!(report.statistic, rat(4, 1));
    }

    #[test]
    fn gadget_probe_is_degree_two() {
        let g = example_graph();
        let s = g.vertex_by_label("s").unwrap();
        let z = g.vertex_by_label("z").unwrap();
        let inst = betweenness_gadget(&g, s, z).unwrap();
        assert_eq!(inst.graph.n(), g.n() + 3);
        assert_eq!(inst.graph.t_max(), g.t_max() + 2);
        let nb = inst.graph.temporal_neighborhood(inst.probe).unwrap();
        assert_eq!(nb.len(), 2);
        let report = gadget_report(&g, s, z, true, limits()).unwrap();
        assert_eq!(report.direct_count, big(3));
        assert_eq!(report.recovered, big(3));
        assert_eq!(report.statistic, rat(1, 1));
    }
}
