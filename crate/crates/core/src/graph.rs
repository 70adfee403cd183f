//! Temporal graph model.
//!
//! A temporal graph is a set of vertices plus a set of undirected time
//! edges `({u,v}, t)` with integer labels `1..=T`. Walks traverse a time
//! edge in either direction; a strict walk must use strictly increasing
//! labels, a non-strict walk allows equal consecutive labels. Arrival
//! events are modeled as vertex appearances `(v, t)`, with `(s, 0)` as the
//! dummy appearance of a walk's source.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type TimeLabel = u32;

/// Undirected time edge with canonical endpoint order `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub t: TimeLabel,
}

/// One directed traversal of a time edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: VertexId,
    pub to: VertexId,
    pub t: TimeLabel,
}

/// A vertex together with an arrival label. Label 0 only occurs as the
/// dummy appearance of a source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexAppearance {
    pub vertex: VertexId,
    pub t: TimeLabel,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Neighbor {
    pub t: TimeLabel,
    pub peer: VertexId,
    /// Appearance id of `(peer, t)`.
    pub peer_app: u32,
}

/// Immutable temporal graph with interned vertex labels, deduplicated
/// canonical edges, and a precomputed appearance index.
#[derive(Debug, Clone)]
pub struct TemporalGraph {
    labels: Vec<String>,
    label_index: HashMap<String, VertexId>,
    edges: Vec<TimeEdge>,
    t_max: TimeLabel,
    /// For normalized graphs: original timestamp of each dense label,
    /// indexed by `label - 1`. Fastest durations are reported on these.
    raw_times: Option<Vec<u64>>,
    adj: Vec<Vec<Neighbor>>,
    /// Appearance index: per vertex the sorted labels of incident edges.
    app_offsets: Vec<u32>,
    app_labels: Vec<TimeLabel>,
    app_vertex: Vec<VertexId>,
}

impl TemporalGraph {
    /// Builds a graph from explicit labels and `(u, v, t)` triples given as
    /// label indices. Triples are canonicalized and deduplicated; self-loops
    /// and labels outside `1..` are rejected.
    pub fn from_parts(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (VertexId, VertexId, TimeLabel)>,
        raw_times: Option<Vec<u64>>,
    ) -> Result<TemporalGraph> {
        let n = labels.len();
        let mut label_index = HashMap::with_capacity(n);
        for (i, name) in labels.iter().enumerate() {
            if label_index.insert(name.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate vertex label {name:?}")));
            }
        }
        let mut set = std::collections::BTreeSet::new();
        for (u, v, t) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!(
                    "edge endpoint {} out of range for {} vertices",
                    u.max(v),
                    n
                )));
            }
            if u == v {
                return Err(Error::Value(format!(
                    "self-loop at vertex {:?} (time {})",
                    labels[u], t
                )));
            }
            if t == 0 {
                return Err(Error::Value(format!(
                    "time label 0 on edge {:?}-{:?}; labels start at 1",
                    labels[u], labels[v]
                )));
            }
            set.insert(TimeEdge { u: u.min(v), v: u.max(v), t });
        }
        let mut edges: Vec<TimeEdge> = set.into_iter().collect();
        edges.sort_by_key(|e| (e.t, e.u, e.v));
        let t_max = edges.iter().map(|e| e.t).max().unwrap_or(0);
        if let Some(raw) = &raw_times {
            if raw.len() != t_max as usize {
                return Err(Error::Domain(format!(
                    "raw time table has {} entries for T = {}",
                    raw.len(),
                    t_max
                )));
            }
        }

        // Appearance index: the arrival labels of v are the labels of its
        // incident edges.
        let mut per_vertex: Vec<Vec<TimeLabel>> = vec![Vec::new(); n];
        for e in &edges {
            per_vertex[e.u].push(e.t);
            per_vertex[e.v].push(e.t);
        }
        let mut app_offsets = Vec::with_capacity(n + 1);
        let mut app_labels = Vec::new();
        let mut app_vertex = Vec::new();
        app_offsets.push(0);
        for (v, list) in per_vertex.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            app_labels.extend_from_slice(list);
            app_vertex.extend(std::iter::repeat(v).take(list.len()));
            app_offsets.push(app_labels.len() as u32);
        }

        let mut graph = TemporalGraph {
            labels,
            label_index,
            edges,
            t_max,
            raw_times,
            adj: vec![Vec::new(); n],
            app_offsets,
            app_labels,
            app_vertex,
        };
        for i in 0..graph.edges.len() {
            let TimeEdge { u, v, t } = graph.edges[i];
            let ua = graph.appearance_of(u, t).unwrap();
            let va = graph.appearance_of(v, t).unwrap();
            graph.adj[u].push(Neighbor { t, peer: v, peer_app: va });
            graph.adj[v].push(Neighbor { t, peer: u, peer_app: ua });
        }
        for list in &mut graph.adj {
            list.sort_by_key(|nb| (nb.t, nb.peer));
        }
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The lifetime T: the largest time label, 0 for an edgeless graph.
    pub fn t_max(&self) -> TimeLabel {
        self.t_max
    }

    pub fn edges(&self) -> &[TimeEdge] {
        &self.edges
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, name: &str) -> Option<VertexId> {
        self.label_index.get(name).copied()
    }

    pub fn raw_times(&self) -> Option<&[u64]> {
        self.raw_times.as_deref()
    }

    /// Original timestamp behind a label, identity when not normalized.
    pub fn raw_time(&self, t: TimeLabel) -> u64 {
        match &self.raw_times {
            Some(raw) => raw[t as usize - 1],
            None => t as u64,
        }
    }

    /// All `(neighbor, label)` pairs of `v`, sorted by label then neighbor.
    pub fn temporal_neighborhood(&self, v: VertexId) -> Result<Vec<(VertexId, TimeLabel)>> {
        self.check_vertex(v)?;
        Ok(self.adj[v].iter().map(|nb| (nb.peer, nb.t)).collect())
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n() {
            return Err(Error::Domain(format!(
                "vertex {} out of range for {} vertices",
                v,
                self.n()
            )));
        }
        Ok(())
    }

    pub(crate) fn neighbors(&self, v: VertexId) -> &[Neighbor] {
        &self.adj[v]
    }

    pub(crate) fn app_count(&self) -> usize {
        self.app_labels.len()
    }

    pub(crate) fn appearance_of(&self, v: VertexId, t: TimeLabel) -> Option<u32> {
        let lo = self.app_offsets[v] as usize;
        let hi = self.app_offsets[v + 1] as usize;
        self.app_labels[lo..hi]
            .binary_search(&t)
            .ok()
            .map(|i| (lo + i) as u32)
    }

    pub(crate) fn app_vertex(&self, aid: u32) -> VertexId {
        self.app_vertex[aid as usize]
    }

    /// Appearance id range of one vertex's realized arrival labels.
    pub(crate) fn app_range(&self, v: VertexId) -> std::ops::Range<usize> {
        self.app_offsets[v] as usize..self.app_offsets[v + 1] as usize
    }

    pub(crate) fn app_label(&self, aid: u32) -> TimeLabel {
        self.app_labels[aid as usize]
    }

    /// Earliest arrival label of a temporal walk from `s` to each vertex,
    /// -1 when unreachable, 0 for `s` itself. Earliest walk arrivals equal
    /// earliest path arrivals: truncating a walk at the first visit of its
    /// endpoint never arrives later.
    pub fn earliest_arrivals(&self, s: VertexId, strict: bool) -> Result<Vec<i64>> {
        self.check_vertex(s)?;
        let mut arr = vec![-1i64; self.n()];
        arr[s] = 0;
        let mut i = 0;
        while i < self.edges.len() {
            let t = self.edges[i].t;
            let mut j = i;
            while j < self.edges.len() && self.edges[j].t == t {
                j += 1;
            }
            let step = &self.edges[i..j];
            // Within one label, non-strict walks can chain several hops, so
            // iterate to a fixpoint; strict walks take at most one hop here.
            loop {
                let mut changed = false;
                for e in step {
                    for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                        let ok = arr[x] >= 0
                            && if strict { arr[x] < t as i64 } else { arr[x] <= t as i64 };
                        if ok && arr[y] == -1 {
                            arr[y] = t as i64;
                            changed = true;
                        }
                    }
                }
                if !changed || strict {
                    break;
                }
            }
            i = j;
        }
        Ok(arr)
    }

    /// Pairwise temporal reachability; the diagonal is set by convention
    /// (the empty path connects every vertex to itself).
    pub fn reachability_matrix(&self, strict: bool) -> ConnectivityMatrix {
        let n = self.n();
        let mut bits = vec![false; n * n];
        for s in 0..n {
            let arr = self.earliest_arrivals(s, strict).expect("vertex in range");
            for z in 0..n {
                bits[s * n + z] = arr[z] >= 0;
            }
        }
        ConnectivityMatrix { n, strict, bits }
    }
}

/// Boolean temporal reachability with a fixed strictness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityMatrix {
    n: usize,
    strict: bool,
    bits: Vec<bool>,
}

impl ConnectivityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn get(&self, s: VertexId, z: VertexId) -> bool {
        self.bits[s * self.n + z]
    }

    /// Number of z with `get(v, z)`, diagonal included.
    pub fn row_count(&self, v: VertexId) -> usize {
        self.bits[v * self.n..(v + 1) * self.n]
            .iter()
            .filter(|b| **b)
            .count()
    }

    /// Number of s with `get(s, v)`, diagonal included.
    pub fn col_count(&self, v: VertexId) -> usize {
        (0..self.n).filter(|s| self.bits[s * self.n + v]).count()
    }
}

/// A temporal path: a walk with pairwise distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalPath {
    transitions: Vec<Transition>,
}

impl TemporalPath {
    /// Validates internal consistency only (consecutive endpoints chain,
    /// no vertex repeats); label discipline depends on strictness and is
    /// checked by `is_valid_in`.
    pub fn new(transitions: Vec<Transition>) -> Result<TemporalPath> {
        let mut seen = std::collections::BTreeSet::new();
        for w in transitions.windows(2) {
            if w[0].to != w[1].from {
                return Err(Error::Domain(
                    "transitions do not chain into a walk".into(),
                ));
            }
        }
        if let Some(first) = transitions.first() {
            seen.insert(first.from);
        }
        for tr in &transitions {
            if !seen.insert(tr.to) {
                return Err(Error::Domain("vertex repeated on a path".into()));
            }
        }
        Ok(TemporalPath { transitions })
    }

    pub fn empty() -> TemporalPath {
        TemporalPath { transitions: Vec::new() }
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Number of transitions.
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn arrival(&self) -> Option<TimeLabel> {
        self.transitions.last().map(|tr| tr.t)
    }

    pub fn departure(&self) -> Option<TimeLabel> {
        self.transitions.first().map(|tr| tr.t)
    }

    pub fn visits(&self, v: VertexId) -> bool {
        self.transitions
            .iter()
            .any(|tr| tr.from == v || tr.to == v)
    }

    /// Checks that every transition uses an existing time edge and that the
    /// label sequence obeys the given strictness.
    pub fn is_valid_in(&self, g: &TemporalGraph, strict: bool) -> bool {
        for w in self.transitions.windows(2) {
            if (strict && w[1].t <= w[0].t) || (!strict && w[1].t < w[0].t) {
                return false;
            }
        }
        self.transitions.iter().all(|tr| {
            g.neighbors(tr.from)
                .iter()
                .any(|nb| nb.peer == tr.to && nb.t == tr.t)
        })
    }
}
