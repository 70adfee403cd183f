//! Rank analytics for comparing betweenness variants: Kendall tau over
//! vertex rankings, top-k overlap, and score histograms.

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Vertices ordered by non-increasing score, ties by vertex id
/// ascending; the underlying scores stay around for tie detection.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    order: Vec<VertexId>,
    scores: Vec<f64>,
}

impl Ranking {
    pub fn new(scores: &[f64]) -> Ranking {
        let mut order: Vec<VertexId> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        Ranking { order, scores: scores.to_vec() }
    }

    pub fn n(&self) -> usize {
        self.scores.len()
    }

    /// Vertex ids from highest score to lowest.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Scores in vertex-id indexing (not ranking order).
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// The k best vertices; ties at the k-th score resolve by vertex id
    /// ascending, so the cut is deterministic.
    pub fn top_k(&self, k: usize) -> Result<Vec<VertexId>> {
        if k > self.n() {
            return Err(Error::Domain(format!(
                "top-{k} requested from a ranking of {} vertices",
                self.n()
            )));
        }
        Ok(self.order[..k].to_vec())
    }
}

/// Kendall tau-a outcome. Pairs tied in either score vector count as
/// neither concordant nor discordant but stay in the denominator, so a
/// heavily tied pair of rankings reports a small |tau|; `tie_fraction`
/// says how much of the scale the ties consumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauResult {
    pub tau: f64,
    pub tied_pairs: usize,
    pub total_pairs: usize,
}

impl TauResult {
    pub fn tie_fraction(&self) -> f64 {
        if self.total_pairs == 0 {
            0.0
        } else {
            self.tied_pairs as f64 / self.total_pairs as f64
        }
    }
}

/// Kendall tau-a between two rankings of the same vertex set:
/// (concordant - discordant) / (n(n-1)/2).
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<TauResult> {
    if a.n() != b.n() {
        return Err(Error::Domain(format!(
            "rankings cover {} and {} vertices",
            a.n(),
            b.n()
        )));
    }
    let n = a.n();
    let total_pairs = n * n.saturating_sub(1) / 2;
    if total_pairs == 0 {
        return Ok(TauResult { tau: 1.0, tied_pairs: 0, total_pairs: 0 });
    }
    let (sa, sb) = (a.scores(), b.scores());
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    let mut tied = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if sa[i] == sa[j] || sb[i] == sb[j] {
                tied += 1;
                continue;
            }
            if (sa[i] > sa[j]) == (sb[i] > sb[j]) {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    Ok(TauResult {
        tau: (concordant - discordant) as f64 / total_pairs as f64,
        tied_pairs: tied,
        total_pairs,
    })
}

/// Size of the intersection of the two top-k sets.
pub fn top_k_intersection(a: &Ranking, b: &Ranking, k: usize) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::Domain(format!(
            "rankings cover {} and {} vertices",
            a.n(),
            b.n()
        )));
    }
    let top_a = a.top_k(k)?;
    let mut in_b = vec![false; b.n()];
    for v in b.top_k(k)? {
        in_b[v] = true;
    }
    Ok(top_a.into_iter().filter(|&v| in_b[v]).count())
}

/// Evenly spaced buckets between 0 and the maximum score: bucket i is
/// [i*max/buckets, (i+1)*max/buckets), the last closed at max. An
/// all-zero vector lands entirely in bucket 0.
pub fn histogram(scores: &[f64], buckets: usize) -> Result<Vec<usize>> {
    if buckets == 0 {
        return Err(Error::Domain("histogram needs at least one bucket".into()));
    }
    if let Some(bad) = scores.iter().find(|s| !s.is_finite() || **s < 0.0) {
        return Err(Error::Value(format!("histogram score out of range: {bad}")));
    }
    let mut counts = vec![0usize; buckets];
    let max = scores.iter().cloned().fold(0.0f64, f64::max);
    for &s in scores {
        let i = if max == 0.0 {
            0
        } else {
            (((s / max) * buckets as f64) as usize).min(buckets - 1)
        };
        counts[i] += 1;
    }
    Ok(counts)
}
