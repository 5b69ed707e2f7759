use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use super::mask::{CoordinateMask, MaskKeyer};
use super::set::{same_space, ConfigSet};
use super::space::{ConfigSpace, Configuration};
use crate::{IdmError, Result};

const OUTSIDE: u32 = u32::MAX;

/// A finite σ-field given by its atoms.
///
/// The partition may live on a subset of the space (its domain), which is
/// how trace fields are represented. Atom ids are canonical: they are
/// numbered in order of first occurrence along the configuration index, so
/// two partitions are equal as fields iff they are equal as values.
#[derive(Clone, Debug)]
pub struct Partition {
    space: Arc<ConfigSpace>,
    atom_of: Vec<u32>,
    atom_count: usize,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.atom_of == other.atom_of
    }
}

impl Eq for Partition {}

impl Partition {
    /// Builds from arbitrary labels on a domain, relabeling canonically.
    fn from_keys<K: Hash + Eq>(space: &Arc<ConfigSpace>, key: impl Fn(usize) -> Option<K>) -> Self {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut atom_of = Vec::with_capacity(space.size());
        for idx in 0..space.size() {
            match key(idx) {
                Some(k) => {
                    let next = ids.len() as u32;
                    atom_of.push(*ids.entry(k).or_insert(next));
                }
                None => atom_of.push(OUTSIDE),
            }
        }
        Partition { space: space.clone(), atom_count: ids.len(), atom_of }
    }

    /// Same as `from_keys` for dense keys below `key_count`.
    fn from_dense_keys(space: &Arc<ConfigSpace>, key_count: usize, key: impl Fn(usize) -> Option<usize>) -> Self {
        let mut ids = vec![OUTSIDE; key_count];
        let mut next = 0u32;
        let mut atom_of = Vec::with_capacity(space.size());
        for idx in 0..space.size() {
            match key(idx) {
                Some(k) => {
                    if ids[k] == OUTSIDE {
                        ids[k] = next;
                        next += 1;
                    }
                    atom_of.push(ids[k]);
                }
                None => atom_of.push(OUTSIDE),
            }
        }
        Partition { space: space.clone(), atom_count: next as usize, atom_of }
    }

    /// H_B-style field: configurations agreeing on all masked coordinates share an atom.
    pub fn from_mask(space: &Arc<ConfigSpace>, mask: &CoordinateMask) -> Result<Self> {
        space.check_mask(mask)?;
        let k = MaskKeyer::new(space, mask);
        Ok(Self::from_dense_keys(space, k.key_count(), |i| Some(k.key(i))))
    }

    /// Level sets of an observation map.
    pub fn from_observation<L: Hash + Eq>(space: &Arc<ConfigSpace>, obs: impl Fn(&Configuration) -> L) -> Self {
        Self::from_keys(space, |i| Some(obs(&space.configuration(i))))
    }

    /// Level sets of a map on configuration indices.
    pub fn from_index_labels<L: Hash + Eq>(space: &Arc<ConfigSpace>, obs: impl Fn(usize) -> L) -> Self {
        Self::from_keys(space, |i| Some(obs(i)))
    }

    pub fn trivial(space: &Arc<ConfigSpace>) -> Self {
        Partition { space: space.clone(), atom_of: vec![0; space.size()], atom_count: 1 }
    }

    pub fn discrete(space: &Arc<ConfigSpace>) -> Self {
        Partition { space: space.clone(), atom_of: (0..space.size() as u32).collect(), atom_count: space.size() }
    }

    pub fn space(&self) -> &Arc<ConfigSpace> {
        &self.space
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// Atom of `idx`, or `None` outside the domain.
    #[inline]
    pub fn atom(&self, idx: usize) -> Option<usize> {
        let a = self.atom_of[idx];
        (a != OUTSIDE).then_some(a as usize)
    }

    pub fn domain(&self) -> ConfigSet {
        ConfigSet::from_predicate(&self.space, |i| self.atom_of[i] != OUTSIDE)
    }

    pub fn is_total(&self) -> bool {
        self.atom_of.iter().all(|&a| a != OUTSIDE)
    }

    /// First configuration of every atom, indexed by atom id.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.atom_count];
        for (i, &a) in self.atom_of.iter().enumerate() {
            if a != OUTSIDE && reps[a as usize] == usize::MAX {
                reps[a as usize] = i;
            }
        }
        reps
    }

    /// Members of every atom, indexed by atom id.
    pub fn atoms(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.atom_count];
        for (i, &a) in self.atom_of.iter().enumerate() {
            if a != OUTSIDE {
                out[a as usize].push(i);
            }
        }
        out
    }

    /// Common refinement (the σ-field generated by both) on the shared domain.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(IdmError::SpaceMismatch);
        }
        Ok(Self::from_keys(&self.space, |i| match (self.atom(i), other.atom(i)) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        }))
    }
}

/// True iff every atom of `p` lies inside one atom of `q`, i.e. σ(q) ⊆ σ(p).
pub fn refines(p: &Partition, q: &Partition) -> Result<bool> {
    if !same_space(&p.space, &q.space) {
        return Err(IdmError::SpaceMismatch);
    }
    if p.atom_of.iter().zip(&q.atom_of).any(|(&a, &b)| (a == OUTSIDE) != (b == OUTSIDE)) {
        return Err(IdmError::SpaceMismatch);
    }
    let mut image = vec![OUTSIDE; p.atom_count];
    for (&a, &b) in p.atom_of.iter().zip(&q.atom_of) {
        if a == OUTSIDE {
            continue;
        }
        let slot = &mut image[a as usize];
        if *slot == OUTSIDE {
            *slot = b;
        } else if *slot != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Trace of `p` on `h`: its atoms intersected with `h`, empty pieces dropped.
pub fn trace(p: &Partition, h: &ConfigSet) -> Result<Partition> {
    if !same_space(&p.space, h.space()) {
        return Err(IdmError::SpaceMismatch);
    }
    let out = Partition::from_dense_keys(&p.space, p.atom_count, |i| if h.contains(i) { p.atom(i) } else { None });
    if out.atom_count == 0 {
        return Err(IdmError::EmptyContext);
    }
    Ok(out)
}

/// Checks p ∩ H ⊆ σ(mask) ∩ H; on failure returns two configurations of H
/// that agree on the mask but lie in different atoms of `p`.
pub fn field_subset_witness(p: &Partition, mask: &CoordinateMask, h: &ConfigSet) -> Result<Option<(usize, usize)>> {
    if !same_space(&p.space, h.space()) {
        return Err(IdmError::SpaceMismatch);
    }
    if h.is_empty() {
        return Err(IdmError::EmptyContext);
    }
    p.space.check_mask(mask)?;
    let keyer = MaskKeyer::new(&p.space, mask);
    // first configuration seen for each key
    let mut first = vec![usize::MAX; keyer.key_count()];
    for i in h.iter() {
        let k = keyer.key(i);
        let f = first[k];
        if f == usize::MAX {
            first[k] = i;
        } else if p.atom_of[f] != p.atom_of[i] {
            return Ok(Some((f, i)));
        }
    }
    Ok(None)
}

pub fn field_subset_on(p: &Partition, mask: &CoordinateMask, h: &ConfigSet) -> Result<bool> {
    field_subset_witness(p, mask, h).map(|w| w.is_none())
}
