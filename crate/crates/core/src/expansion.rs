//! Static-expansion engine.
//!
//! A temporal graph unrolls into a layered digraph with one node per
//! vertex and layer 0..=T+1. Layer 0 nodes are sources, layer T+1 nodes
//! are targets, and a time edge ({v,w},t) contributes arcs from every
//! eligible tail layer: internal arcs landing at the arrival layer and
//! terminal arcs landing at T+1 (one per generating edge, so parallel
//! final hops keep their multiplicity). Counting shortest static paths
//! source-to-target and projecting the middle layers back onto vertices
//! reproduces shortest and shortest-foremost temporal betweenness.
//!
//! Shortest-foremost runs on the same arc set with weighted terminal
//! arcs: internal hops cost 1, a terminal hop generated by a label-t
//! edge costs (n+1)*(t+1). Any path makes at most n-1 internal hops, so
//! weighted distances order first by arrival label, then by hop count,
//! and all comparisons stay in integers.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::brandes::{run_sources, BetweennessVector};
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, TimeLabel, VertexId};
use crate::numeric::{Float64, NumMode};
use crate::variant::{Criterion, Optimality};

/// One bundle of parallel arcs: every instance shares tail, head, and
/// weight; `mult` is how many generating edges produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StaticArc {
    pub head: u32,
    pub weight: u64,
    pub mult: u64,
}

/// Time-expanded digraph in CSR form, arcs sorted by (tail, head, weight).
#[derive(Debug, Clone)]
pub struct StaticExpansion {
    n: usize,
    t_max: TimeLabel,
    criterion: Criterion,
    labels: Vec<String>,
    arc_offsets: Vec<u32>,
    arcs: Vec<StaticArc>,
    terminal_arc_instances: u64,
    merged_internal_terminal: u64,
}

impl StaticExpansion {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> TimeLabel {
        self.t_max
    }

    pub fn criterion(&self) -> Criterion {
        self.criterion
    }

    fn layers(&self) -> usize {
        self.t_max as usize + 2
    }

    pub fn node_count(&self) -> usize {
        self.n * self.layers()
    }

    /// Distinct (tail, head, weight) arc bundles.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Total arc instances, parallel bundles expanded.
    pub fn arc_instances(&self) -> u64 {
        self.arcs.iter().map(|a| a.mult).sum()
    }

    /// Arc instances whose head is the target layer.
    pub fn terminal_arc_instances(&self) -> u64 {
        self.terminal_arc_instances
    }

    /// Strict-horizon internal arcs folded into their own terminal arcs
    /// (an internal arc landing at layer T+1 would duplicate the final
    /// hop its terminal twin already represents).
    pub fn merged_internal_terminal(&self) -> u64 {
        self.merged_internal_terminal
    }

    pub fn node_id(&self, v: VertexId, layer: usize) -> usize {
        debug_assert!(v < self.n && layer < self.layers());
        v * self.layers() + layer
    }

    pub fn node_vertex(&self, node: usize) -> VertexId {
        node / self.layers()
    }

    pub fn node_layer(&self, node: usize) -> usize {
        node % self.layers()
    }

    pub fn node_name(&self, node: usize) -> String {
        format!("{}@{}", self.labels[self.node_vertex(node)], self.node_layer(node))
    }

    pub fn arcs_from(&self, node: usize) -> &[StaticArc] {
        let lo = self.arc_offsets[node] as usize;
        let hi = self.arc_offsets[node + 1] as usize;
        &self.arcs[lo..hi]
    }

    /// Debug edge list, `tail head weight`, one line per arc instance.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for tail in 0..self.node_count() {
            for arc in self.arcs_from(tail) {
                for _ in 0..arc.mult {
                    out.push_str(&format!(
                        "{} {} {}\n",
                        self.node_name(tail),
                        self.node_name(arc.head as usize),
                        arc.weight
                    ));
                }
            }
        }
        out
    }
}

fn build(g: &TemporalGraph, criterion: Criterion) -> StaticExpansion {
    let n = g.n();
    let t_max = g.t_max();
    let layers = t_max as usize + 2;
    let terminal_layer = t_max as usize + 1;
    let strict = criterion.strict();
    let weighted = criterion.optimality() == Optimality::ShortestForemost;

    let mut keyed: BTreeMap<(u32, u32, u64), u64> = BTreeMap::new();
    let mut terminal_arc_instances = 0u64;
    let mut merged_internal_terminal = 0u64;
    for e in g.edges() {
        let label = e.t as usize;
        let internal_layer = if strict { label + 1 } else { label };
        let terminal_weight = if weighted { (n as u64 + 1) * (e.t as u64 + 1) } else { 1 };
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            for tail_layer in 0..=label {
                let tail = (a * layers + tail_layer) as u32;
                if internal_layer == terminal_layer {
                    merged_internal_terminal += 1;
                } else {
                    let head = (b * layers + internal_layer) as u32;
                    *keyed.entry((tail, head, 1)).or_insert(0) += 1;
                }
                let head = (b * layers + terminal_layer) as u32;
                *keyed.entry((tail, head, terminal_weight)).or_insert(0) += 1;
                terminal_arc_instances += 1;
            }
        }
    }

    let node_count = n * layers;
    let mut arc_offsets = vec![0u32; node_count + 1];
    for (&(tail, _, _), _) in &keyed {
        arc_offsets[tail as usize + 1] += 1;
    }
    for i in 0..node_count {
        arc_offsets[i + 1] += arc_offsets[i];
    }
    let arcs = keyed
        .into_iter()
        .map(|((_, head, weight), mult)| StaticArc { head, weight, mult })
        .collect();

    StaticExpansion {
        n,
        t_max,
        criterion,
        labels: g.labels().to_vec(),
        arc_offsets,
        arcs,
        terminal_arc_instances,
        merged_internal_terminal,
    }
}

/// Unit-weight expansion for shortest betweenness.
pub fn build_expansion_shortest(g: &TemporalGraph, strict: bool) -> StaticExpansion {
    build(g, Criterion::shortest(strict))
}

/// Weighted expansion for shortest-foremost betweenness.
pub fn build_expansion_shortest_foremost(g: &TemporalGraph, strict: bool) -> StaticExpansion {
    build(g, Criterion::shortest_foremost(strict))
}

/// One source of the source-to-targets Brandes pass: Dijkstra from the
/// layer-0 node of `v` (a tail settles before its sigma is read, and
/// positive integer weights make every distance comparison exact), then
/// dependency accumulation seeded at each reached target node.
fn sz_source<M: NumMode>(x: &StaticExpansion, v: VertexId, scores: &mut [M::Score]) {
    let node_count = x.node_count();
    let src = x.node_id(v, 0);
    let mut dist = vec![u64::MAX; node_count];
    let mut sigma: Vec<M::Count> = (0..node_count).map(|_| M::zero_count()).collect();
    let mut preds: Vec<Vec<(u32, u64)>> = vec![Vec::new(); node_count];
    let mut settled = vec![false; node_count];
    let mut settle_order: Vec<u32> = Vec::new();
    dist[src] = 0;
    sigma[src] = M::one_count();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, src as u32)));
    while let Some(Reverse((d, u))) = heap.pop() {
        let ui = u as usize;
        if settled[ui] {
            continue;
        }
        settled[ui] = true;
        settle_order.push(u);
        let sig_u = sigma[ui].clone();
        for arc in x.arcs_from(ui) {
            let h = arc.head as usize;
            let nd = d + arc.weight;
            if nd < dist[h] {
                dist[h] = nd;
                sigma[h] = M::zero_count();
                M::add_count_scaled(&mut sigma[h], &sig_u, arc.mult);
                preds[h].clear();
                preds[h].push((u, arc.mult));
                heap.push(Reverse((nd, arc.head)));
            } else if nd == dist[h] {
                M::add_count_scaled(&mut sigma[h], &sig_u, arc.mult);
                preds[h].push((u, arc.mult));
            }
        }
    }

    let terminal_layer = x.t_max() as usize + 1;
    let mut delta: Vec<M::Score> = (0..node_count).map(|_| M::zero_score()).collect();
    let one = M::score_from_usize(1);
    for w in 0..x.n() {
        if w == v {
            continue;
        }
        let tgt = x.node_id(w, terminal_layer);
        if settled[tgt] {
            M::add_score(&mut delta[tgt], &one);
        }
    }
    for &u in settle_order.iter().rev() {
        let ui = u as usize;
        let coef = delta[ui].clone();
        let sig_u = sigma[ui].clone();
        for &(p, mult) in &preds[ui] {
            let mut weighted_count = M::zero_count();
            M::add_count_scaled(&mut weighted_count, &sigma[p as usize], mult);
            let share = M::mul_ratio(&coef, &weighted_count, &sig_u);
            M::add_score(&mut delta[p as usize], &share);
        }
        if ui != src && x.node_layer(ui) <= x.t_max() as usize {
            M::add_score(&mut scores[ui], &delta[ui]);
        }
    }
}

/// Per-node source-to-targets betweenness: layer-0 nodes are the
/// sources, layer-(T+1) nodes the targets, and both keep score 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SZBetweennessResult {
    scores: Vec<f64>,
}

impl SZBetweennessResult {
    pub fn node_scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn score_at(&self, x: &StaticExpansion, v: VertexId, layer: usize) -> f64 {
        self.scores[x.node_id(v, layer)]
    }
}

pub fn sz_betweenness_par_with<M: NumMode>(x: &StaticExpansion, threads: usize) -> Vec<M::Score> {
    run_sources(
        x.n(),
        threads,
        |v, partial: &mut Vec<M::Score>| sz_source::<M>(x, v, partial),
        || (0..x.node_count()).map(|_| M::zero_score()).collect(),
        |total, part| {
            for (dst, src) in total.iter_mut().zip(&part) {
                M::add_score(dst, src);
            }
        },
    )
}

pub fn sz_betweenness_with<M: NumMode>(x: &StaticExpansion) -> Vec<M::Score> {
    sz_betweenness_par_with::<M>(x, 1)
}

/// Double-precision source-to-targets betweenness of every node.
pub fn sz_brandes(x: &StaticExpansion) -> SZBetweennessResult {
    SZBetweennessResult { scores: sz_betweenness_with::<Float64>(x) }
}

/// Sums each vertex's layer 1..=T node scores. Layers 0 and T+1 carry
/// only endpoint roles and stay out of the projection.
pub fn project_scores_with<M: NumMode>(
    x: &StaticExpansion,
    node_scores: &[M::Score],
) -> Result<Vec<M::Score>> {
    if node_scores.len() != x.node_count() {
        return Err(Error::Domain(format!(
            "{} node scores for an expansion with {} nodes",
            node_scores.len(),
            x.node_count()
        )));
    }
    Ok((0..x.n())
        .map(|v| {
            let mut total = M::zero_score();
            for layer in 1..=x.t_max() as usize {
                M::add_score(&mut total, &node_scores[x.node_id(v, layer)]);
            }
            total
        })
        .collect())
}

pub fn project_scores(x: &StaticExpansion, result: &SZBetweennessResult) -> Result<BetweennessVector> {
    Ok(BetweennessVector {
        variant: x.criterion(),
        scores: project_scores_with::<Float64>(x, result.node_scores())?,
    })
}

/// End-to-end expansion engine for one criterion (shortest and
/// shortest-foremost only).
pub fn betweenness_via_expansion_par_with<M: NumMode>(
    g: &TemporalGraph,
    criterion: Criterion,
    threads: usize,
) -> Result<Vec<M::Score>> {
    let x = match criterion.optimality() {
        Optimality::Shortest => build_expansion_shortest(g, criterion.strict()),
        Optimality::ShortestForemost => build_expansion_shortest_foremost(g, criterion.strict()),
        other => {
            return Err(Error::Domain(format!(
                "no static expansion for the {} criterion",
                other.token()
            )))
        }
    };
    let node_scores = sz_betweenness_par_with::<M>(&x, threads);
    project_scores_with::<M>(&x, &node_scores)
}

pub fn betweenness_via_expansion_with<M: NumMode>(
    g: &TemporalGraph,
    criterion: Criterion,
) -> Result<Vec<M::Score>> {
    betweenness_via_expansion_par_with::<M>(g, criterion, 1)
}

pub fn betweenness_via_expansion(g: &TemporalGraph, criterion: Criterion) -> Result<BetweennessVector> {
    Ok(BetweennessVector {
        variant: criterion,
        scores: betweenness_via_expansion_with::<Float64>(g, criterion)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brandes::{betweenness_shortest, betweenness_shortest_with};
    use crate::gen::example_graph;
    use crate::numeric::Exact;
    use crate::oracle::{self, EnumLimits};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    const TOL: f64 = 1e-9;

    fn single_edge() -> TemporalGraph {
        TemporalGraph::from_parts(vec!["u".into(), "v".into()], [(0, 1, 1)], None).unwrap()
    }

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn single_edge_non_strict_shape() {
        let x = build_expansion_shortest(&single_edge(), false);
        assert_eq!(x.node_count(), 6);
        assert_eq!(x.arc_count(), 8);
        assert_eq!(x.arc_instances(), 8);
        assert_eq!(x.terminal_arc_instances(), 4);
        assert_eq!(x.merged_internal_terminal(), 0);
        assert!(x.arcs_from(x.node_id(0, 0)).iter().any(|a| a.head as usize == x.node_id(1, 1)));
        assert!(x.arcs_from(x.node_id(0, 1)).iter().any(|a| a.head as usize == x.node_id(1, 2)));
    }

    #[test]
    fn single_edge_strict_folds_horizon_arcs() {
        // The only label equals T, so every internal arc would land in
        // the terminal layer and gets folded.
        let x = build_expansion_shortest(&single_edge(), true);
        assert_eq!(x.arc_count(), 4);
        assert_eq!(x.merged_internal_terminal(), 4);
        assert_eq!(x.terminal_arc_instances(), 4);
        assert!(x.arcs.iter().all(|a| a.mult == 1));
    }

    #[test]
    fn empty_graph_has_no_arcs() {
        let g = TemporalGraph::from_parts(
            vec!["a".into(), "b".into()],
            Vec::<(usize, usize, u32)>::new(),
            None,
        )
        .unwrap();
        let x = build_expansion_shortest(&g, true);
        assert_eq!(x.t_max(), 0);
        assert_eq!(x.node_count(), 4);
        assert_eq!(x.arc_count(), 0);
        let scores = project_scores(&x, &sz_brandes(&x)).unwrap();
        assert!(scores.scores.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn example_terminal_instance_count() {
        // Sum over directed edge copies of (label + 1) eligible tails.
        let g = example_graph();
        let expect: u64 = g.edges().iter().map(|e| 2 * (e.t as u64 + 1)).sum();
        assert_eq!(expect, 74);
        for strict in [true, false] {
            let x = build_expansion_shortest(&g, strict);
            assert_eq!(x.terminal_arc_instances(), 74);
        }
    }

    #[test]
    fn strict_expansion_is_a_dag() {
        for g in [example_graph(), single_edge()] {
            for x in [
                build_expansion_shortest(&g, true),
                build_expansion_shortest_foremost(&g, true),
            ] {
                for tail in 0..x.node_count() {
                    for arc in x.arcs_from(tail) {
                        assert!(
                            x.node_layer(arc.head as usize) > x.node_layer(tail),
                            "layer must increase along strict arcs"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn terminal_nodes_have_no_outgoing_arcs() {
        let g = example_graph();
        for strict in [true, false] {
            let x = build_expansion_shortest(&g, strict);
            let terminal_layer = x.t_max() as usize + 1;
            for v in 0..x.n() {
                assert!(x.arcs_from(x.node_id(v, terminal_layer)).is_empty());
            }
        }
    }

    #[test]
    fn shortest_foremost_terminal_weights() {
        // n = 2 and a label-1 edge price the terminal hop at 6.
        let x = build_expansion_shortest_foremost(&single_edge(), true);
        assert!(x.arcs.iter().all(|a| a.weight == 6));
        let loose = build_expansion_shortest_foremost(&single_edge(), false);
        let (internal, terminal): (Vec<&StaticArc>, Vec<&StaticArc>) = loose
            .arcs
            .iter()
            .partition(|a| loose.node_layer(a.head as usize) <= loose.t_max() as usize);
        assert_eq!(internal.len(), 4);
        assert!(internal.iter().all(|a| a.weight == 1));
        assert_eq!(terminal.len(), 4);
        assert!(terminal.iter().all(|a| a.weight == 6));
    }

    #[test]
    fn line_graph_middle_projects_to_one() {
        let g = TemporalGraph::from_parts(
            vec!["s".into(), "m".into(), "z".into()],
            [(0, 1, 1), (1, 2, 2)],
            None,
        )
        .unwrap();
        for strict in [true, false] {
            let x = build_expansion_shortest(&g, strict);
            let result = sz_brandes(&x);
            // The single optimal s-to-z route rides through exactly one
            // middle-layer node of m: the arrival layer, shifted by one
            // in strict mode.
            assert_eq!(result.score_at(&x, 1, if strict { 2 } else { 1 }), 1.0);
            let projected = project_scores(&x, &result).unwrap();
            assert_eq!(projected.scores, vec![0.0, 1.0, 0.0]);
            assert_eq!(projected.variant, Criterion::shortest(strict));
        }
    }

    #[test]
    fn parallel_final_hops_keep_multiplicity() {
        // Two labels on the same pair make two distinct final hops; the
        // bundle must count twice or the u share of the w-to-v paths
        // collapses from 2/3 to 1/2.
        let g = TemporalGraph::from_parts(
            vec!["w".into(), "u".into(), "v".into(), "x".into()],
            [(0, 1, 1), (1, 2, 2), (1, 2, 3), (0, 3, 1), (3, 2, 2)],
            None,
        )
        .unwrap();
        let x = build_expansion_shortest(&g, false);
        let terminal_layer = x.t_max() as usize + 1;
        let doubled: Vec<_> = x
            .arcs_from(x.node_id(1, 1))
            .iter()
            .filter(|a| a.head as usize == x.node_id(2, terminal_layer))
            .collect();
        assert_eq!(doubled.len(), 1);
        assert_eq!(doubled[0].mult, 2);

        let criterion = Criterion::shortest(false);
        let via_expansion = betweenness_via_expansion_with::<Exact>(&g, criterion).unwrap();
        let exact = oracle::exact_betweenness(&g, criterion, EnumLimits::default()).unwrap();
        assert_eq!(via_expansion, exact);
        assert_eq!(
            via_expansion,
            vec![ratio(5, 6), ratio(2, 3), ratio(7, 6), ratio(1, 3)]
        );
    }

    #[test]
    fn cross_engine_agreement_on_example() {
        let g = example_graph();
        for strict in [true, false] {
            let (sh, fm) = betweenness_shortest(&g, strict);
            let via_sh = betweenness_via_expansion(&g, Criterion::shortest(strict)).unwrap();
            let via_fm =
                betweenness_via_expansion(&g, Criterion::shortest_foremost(strict)).unwrap();
            for (a, b) in sh.scores.iter().zip(&via_sh.scores) {
                assert!((a - b).abs() <= TOL);
            }
            for (a, b) in fm.scores.iter().zip(&via_fm.scores) {
                assert!((a - b).abs() <= TOL);
            }

            let (sh_exact, fm_exact) = betweenness_shortest_with::<Exact>(&g, strict);
            let via_sh_exact =
                betweenness_via_expansion_with::<Exact>(&g, Criterion::shortest(strict)).unwrap();
            let via_fm_exact = betweenness_via_expansion_with::<Exact>(
                &g,
                Criterion::shortest_foremost(strict),
            )
            .unwrap();
            assert_eq!(sh_exact, via_sh_exact);
            assert_eq!(fm_exact, via_fm_exact);
        }
    }

    #[test]
    fn unsupported_criteria_are_rejected() {
        let g = single_edge();
        for criterion in [
            Criterion::foremost(true),
            Criterion::fastest(false),
            Criterion::prefix_foremost(),
        ] {
            assert!(betweenness_via_expansion(&g, criterion).is_err());
        }
    }

    #[test]
    fn parallel_sources_match_sequential() {
        let g = example_graph();
        let x = build_expansion_shortest_foremost(&g, false);
        let seq = sz_betweenness_with::<Exact>(&x);
        for threads in [2usize, 5] {
            assert_eq!(seq, sz_betweenness_par_with::<Exact>(&x, threads));
        }
    }

    #[test]
    fn dump_lists_arc_instances() {
        let g = TemporalGraph::from_parts(
            vec!["s".into(), "m".into(), "z".into()],
            [(0, 1, 1), (1, 2, 2)],
            None,
        )
        .unwrap();
        let x = build_expansion_shortest(&g, false);
        let dump = x.dump();
        assert!(dump.lines().any(|l| l == "s@0 m@1 1"));
        assert!(dump.lines().any(|l| l == "m@1 z@3 1"));
        assert_eq!(dump.lines().count() as u64, x.arc_instances());
    }
}
