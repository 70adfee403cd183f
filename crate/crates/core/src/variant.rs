//! Optimality criteria for temporal paths and the strict/non-strict axis.

use std::fmt;

use crate::error::{Error, Result};

/// What makes a temporal path optimal for a source-target pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Optimality {
    /// Fewest transitions.
    Shortest,
    /// Earliest arrival time.
    Foremost,
    /// Smallest difference between arrival and departure time.
    Fastest,
    /// Fewest transitions among the foremost paths.
    ShortestForemost,
    /// Every prefix arrives as early as possible.
    PrefixForemost,
}

impl Optimality {
    pub fn token(self) -> &'static str {
        match self {
            Optimality::Shortest => "sh",
            Optimality::Foremost => "fm",
            Optimality::Fastest => "fa",
            Optimality::ShortestForemost => "shfm",
            Optimality::PrefixForemost => "pfm",
        }
    }
}

/// An optimality criterion together with the label discipline along walks:
/// strict walks require strictly increasing labels, non-strict walks allow
/// equal consecutive labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Criterion {
    optimality: Optimality,
    strict: bool,
}

impl Criterion {
    /// Prefix-foremost counting is only tractable (and only defined here)
    /// for strict walks, so that combination is validated at construction.
    pub fn new(optimality: Optimality, strict: bool) -> Result<Self> {
        if optimality == Optimality::PrefixForemost && !strict {
            return Err(Error::Domain(
                "prefix-foremost betweenness requires strict paths".into(),
            ));
        }
        Ok(Criterion { optimality, strict })
    }

    pub fn optimality(self) -> Optimality {
        self.optimality
    }

    pub fn strict(self) -> bool {
        self.strict
    }

    /// The five variants the polynomial engines cover, in the canonical
    /// reporting order: non-strict shortest, non-strict shortest-foremost,
    /// strict shortest, strict shortest-foremost, strict prefix-foremost.
    pub fn canonical_five() -> [Criterion; 5] {
        [
            Criterion { optimality: Optimality::Shortest, strict: false },
            Criterion { optimality: Optimality::ShortestForemost, strict: false },
            Criterion { optimality: Optimality::Shortest, strict: true },
            Criterion { optimality: Optimality::ShortestForemost, strict: true },
            Criterion { optimality: Optimality::PrefixForemost, strict: true },
        ]
    }

    pub fn shortest(strict: bool) -> Criterion {
        Criterion { optimality: Optimality::Shortest, strict }
    }

    pub fn foremost(strict: bool) -> Criterion {
        Criterion { optimality: Optimality::Foremost, strict }
    }

    pub fn fastest(strict: bool) -> Criterion {
        Criterion { optimality: Optimality::Fastest, strict }
    }

    pub fn shortest_foremost(strict: bool) -> Criterion {
        Criterion { optimality: Optimality::ShortestForemost, strict }
    }

    pub fn prefix_foremost() -> Criterion {
        Criterion { optimality: Optimality::PrefixForemost, strict: true }
    }

    /// Short machine-friendly name, used for CSV columns.
    pub fn slug(self) -> String {
        format!(
            "{}_{}",
            if self.strict { "str" } else { "nstr" },
            self.optimality.token()
        )
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.slug())
    }
}
