use serde::{Deserialize, Serialize};

use crate::AgentSet;

/// A binary relation on agents stored by foresets: `preds[a] = {b : b ≺ a}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecedenceRelation {
    preds: Vec<AgentSet>,
}

impl PrecedenceRelation {
    pub fn from_preds(preds: Vec<AgentSet>) -> Self {
        PrecedenceRelation { preds }
    }

    pub fn empty(n: usize) -> Self {
        PrecedenceRelation { preds: vec![AgentSet::empty(); n] }
    }

    /// Δ_S: the identity restricted to S.
    pub fn diagonal(n: usize, s: AgentSet) -> Self {
        PrecedenceRelation {
            preds: (0..n).map(|a| if s.contains(a) { AgentSet::singleton(a) } else { AgentSet::empty() }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// `b ≺ a`.
    pub fn precedes(&self, b: usize, a: usize) -> bool {
        self.preds[a].contains(b)
    }

    pub fn preds(&self, a: usize) -> AgentSet {
        self.preds[a]
    }

    pub fn all_preds(&self) -> &[AgentSet] {
        &self.preds
    }

    /// Foreset of a set: ∪_{a ∈ B} preds(a).
    pub fn foreset(&self, b: AgentSet) -> AgentSet {
        b.iter().fold(AgentSet::empty(), |acc, a| acc.union(self.preds[a]))
    }

    /// (R R') with foresets (R R')(a) = R(R'(a)).
    pub fn compose(&self, other: &Self) -> Self {
        PrecedenceRelation { preds: other.preds.iter().map(|&s| self.foreset(s)).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        PrecedenceRelation { preds: self.preds.iter().zip(&other.preds).map(|(a, b)| a.union(*b)).collect() }
    }

    pub fn converse(&self) -> Self {
        let n = self.len();
        PrecedenceRelation {
            preds: (0..n).map(|b| (0..n).filter(|&a| self.preds[a].contains(b)).collect()).collect(),
        }
    }

    /// R⁺ = ∪_{k ≥ 1} R^k.
    pub fn transitive_closure(&self) -> Self {
        let mut cur = self.clone();
        loop {
            let next = cur.union(&self.compose(&cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// R* = Δ ∪ R⁺.
    pub fn reflexive_transitive_closure(&self) -> Self {
        Self::diagonal(self.len(), AgentSet::full(self.len())).union(&self.transitive_closure())
    }

    /// Least B' ⊇ B with preds(B') ⊆ B'.
    pub fn closure(&self, b: AgentSet) -> AgentSet {
        let mut cur = b;
        loop {
            let next = cur.union(self.foreset(cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_closed(&self, b: AgentSet) -> bool {
        self.foreset(b).is_subset(b)
    }

    /// Entry `(b, a)` is true iff `b ≺ a`.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n).map(|b| (0..n).map(|a| self.precedes(b, a)).collect()).collect()
    }
}
