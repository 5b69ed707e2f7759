use std::sync::Arc;

use super::mask::Coord;
use super::space::ConfigSpace;
use crate::{IdmError, Result};

/// An explicit subset of configurations, such as a conditioning context H.
#[derive(Clone, Debug)]
pub struct ConfigSet {
    space: Arc<ConfigSpace>,
    members: Vec<bool>,
    len: usize,
}

impl PartialEq for ConfigSet {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.members == other.members
    }
}

impl Eq for ConfigSet {}

pub(crate) fn same_space(a: &Arc<ConfigSpace>, b: &Arc<ConfigSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ConfigSet {
    pub fn full(space: &Arc<ConfigSpace>) -> Self {
        let n = space.size();
        ConfigSet { space: space.clone(), members: vec![true; n], len: n }
    }

    pub fn empty(space: &Arc<ConfigSpace>) -> Self {
        ConfigSet { space: space.clone(), members: vec![false; space.size()], len: 0 }
    }

    pub fn from_predicate(space: &Arc<ConfigSpace>, pred: impl Fn(usize) -> bool) -> Self {
        let members: Vec<bool> = (0..space.size()).map(pred).collect();
        let len = members.iter().filter(|&&b| b).count();
        ConfigSet { space: space.clone(), members, len }
    }

    pub fn from_indices(space: &Arc<ConfigSpace>, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(space);
        for i in indices {
            if i >= space.size() {
                return Err(IdmError::SpaceMismatch);
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Configurations whose listed coordinates take the given values.
    pub fn pinned(space: &Arc<ConfigSpace>, pins: &[(Coord, usize)]) -> Result<Self> {
        for &(c, v) in pins {
            let a = match c {
                Coord::Nature(a) | Coord::Decision(a) => a,
            };
            if a >= space.agent_count() {
                return Err(IdmError::AgentOutOfRange { index: a, count: space.agent_count() });
            }
            if v >= space.radix(c) {
                return Err(IdmError::UnknownElement {
                    space: space.coord_space(c).id().to_string(),
                    label: v.to_string(),
                });
            }
        }
        Ok(Self::from_predicate(space, |i| pins.iter().all(|&(c, v)| space.digit(i, c) == v)))
    }

    pub fn space(&self) -> &Arc<ConfigSpace> {
        &self.space
    }

    #[inline]
    pub fn contains(&self, idx: usize) -> bool {
        self.members[idx]
    }

    pub fn insert(&mut self, idx: usize) {
        if !self.members[idx] {
            self.members[idx] = true;
            self.len += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.members.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(IdmError::SpaceMismatch)
        }
    }

    pub fn complement(&self) -> Self {
        Self::from_predicate(&self.space, |i| !self.members[i])
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_predicate(&self.space, |i| self.members[i] && other.members[i]))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_predicate(&self.space, |i| self.members[i] || other.members[i]))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b))
    }
}
