use serde::{Deserialize, Serialize};
use std::fmt;

/// A subset of agents, stored as a bitmask over canonical agent indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AgentSet(u64);

impl AgentSet {
    pub const MAX_AGENTS: usize = 64;

    pub const fn empty() -> Self {
        AgentSet(0)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= Self::MAX_AGENTS);
        if n == 64 {
            AgentSet(u64::MAX)
        } else {
            AgentSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(a: usize) -> Self {
        AgentSet(1u64 << a)
    }

    pub const fn from_bits(bits: u64) -> Self {
        AgentSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, a: usize) -> bool {
        a < 64 && self.0 >> a & 1 == 1
    }

    pub fn insert(&mut self, a: usize) {
        self.0 |= 1u64 << a;
    }

    pub fn remove(&mut self, a: usize) {
        self.0 &= !(1u64 << a);
    }

    pub fn with(self, a: usize) -> Self {
        AgentSet(self.0 | 1u64 << a)
    }

    pub fn without(self, a: usize) -> Self {
        AgentSet(self.0 & !(1u64 << a))
    }

    pub fn union(self, other: Self) -> Self {
        AgentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        AgentSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        AgentSet(self.0 & !other.0)
    }

    /// Complement within the first `n` agents.
    pub fn complement(self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// The `index`-th subset of `self` in increasing binary order, where bit
    /// `i` of `index` selects the `i`-th smallest member.
    pub fn subset_by_index(self, index: u64) -> Self {
        let mut out = AgentSet::empty();
        for (i, a) in self.iter().enumerate() {
            if index >> i & 1 == 1 {
                out.insert(a);
            }
        }
        out
    }

    /// Out-of-range members relative to an agent count.
    pub fn check_within(self, n: usize) -> bool {
        self.is_subset(Self::full(n))
    }
}

impl FromIterator<usize> for AgentSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = AgentSet::empty();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
