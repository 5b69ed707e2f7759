use serde::{Deserialize, Serialize};

use super::space::ConfigSpace;
use crate::AgentSet;

/// A single coordinate of H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coord {
    Nature(usize),
    Decision(usize),
}

/// Which Ω_a and U_a coordinates are visible.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordinateMask {
    pub nature: AgentSet,
    pub decision: AgentSet,
}

impl CoordinateMask {
    pub fn new(nature: AgentSet, decision: AgentSet) -> Self {
        CoordinateMask { nature, decision }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(n: usize) -> Self {
        CoordinateMask { nature: AgentSet::full(n), decision: AgentSet::full(n) }
    }

    pub fn nature_only(nature: AgentSet) -> Self {
        CoordinateMask { nature, decision: AgentSet::empty() }
    }

    pub fn decisions(decision: AgentSet) -> Self {
        CoordinateMask { nature: AgentSet::empty(), decision }
    }

    /// ℱ ⊗ 𝒰_B: every nature coordinate plus the decisions of `b`.
    pub fn product_field(n: usize, b: AgentSet) -> Self {
        CoordinateMask { nature: AgentSet::full(n), decision: b }
    }

    /// ℱ_a ⊗ 𝒰_P: the private-noise form.
    pub fn local(a: usize, parents: AgentSet) -> Self {
        CoordinateMask { nature: AgentSet::singleton(a), decision: parents }
    }

    pub fn union(self, o: Self) -> Self {
        CoordinateMask { nature: self.nature.union(o.nature), decision: self.decision.union(o.decision) }
    }

    pub fn intersection(self, o: Self) -> Self {
        CoordinateMask {
            nature: self.nature.intersection(o.nature),
            decision: self.decision.intersection(o.decision),
        }
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.nature.is_subset(o.nature) && self.decision.is_subset(o.decision)
    }

    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        self.nature.iter().map(Coord::Nature).chain(self.decision.iter().map(Coord::Decision))
    }
}

/// Maps each configuration index to a key that is equal for two
/// configurations iff they agree on all masked coordinates.
///
/// Keys are either dense over the masked coordinates, or the index itself
/// with the hidden coordinates zeroed, whichever touches fewer coordinates.
#[derive(Clone, Debug)]
pub struct MaskKeyer {
    mode: Mode,
    parts: Vec<(usize, usize, usize)>,
    key_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Dense,
    Zeroed,
}

impl MaskKeyer {
    pub fn new(space: &ConfigSpace, mask: &CoordinateMask) -> Self {
        let n = space.agent_count();
        let hidden = CoordinateMask::full(n);
        let hidden = CoordinateMask::new(hidden.nature.difference(mask.nature), hidden.decision.difference(mask.decision));
        let shown = mask.coords().count();
        if hidden.coords().count() < shown {
            let parts = hidden.coords().map(|c| (space.stride(c), space.radix(c), 0)).collect();
            return MaskKeyer { mode: Mode::Zeroed, parts, key_count: space.size() };
        }
        let mut parts = Vec::with_capacity(shown);
        let mut acc = 1usize;
        for c in mask.coords() {
            let r = space.radix(c);
            parts.push((space.stride(c), r, acc));
            acc *= r;
        }
        MaskKeyer { mode: Mode::Dense, parts, key_count: acc }
    }

    /// Exclusive upper bound on keys.
    pub fn key_count(&self) -> usize {
        self.key_count
    }

    #[inline]
    pub fn key(&self, idx: usize) -> usize {
        match self.mode {
            Mode::Dense => {
                let mut k = 0;
                for &(stride, radix, mult) in &self.parts {
                    k += idx / stride % radix * mult;
                }
                k
            }
            Mode::Zeroed => {
                let mut k = idx;
                for &(stride, radix, _) in &self.parts {
                    k -= idx / stride % radix * stride;
                }
                k
            }
        }
    }
}
