use std::collections::BTreeSet;

use crate::{AgentSet, IdmError, Result};

/// A directed graph over named nodes. Cycles are allowed; acyclicity is
/// checked on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    nodes: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl Dag {
    pub fn new(nodes: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if nodes.len() > AgentSet::MAX_AGENTS {
            return Err(IdmError::TooManyAgents(nodes.len()));
        }
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= nodes.len() || v >= nodes.len()) {
            return Err(IdmError::AgentOutOfRange { index: u.max(v), count: nodes.len() });
        }
        Ok(Dag { nodes, edges })
    }

    pub fn from_names(nodes: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let idx = |s: &str| nodes.iter().position(|n| *n == s).ok_or_else(|| IdmError::UnknownAgent(s.to_string()));
        let e = edges.iter().map(|(u, v)| Ok((idx(u)?, idx(v)?))).collect::<Result<Vec<_>>>()?;
        Self::new(nodes.iter().map(|s| s.to_string()).collect(), e)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.nodes.iter().position(|n| n == name).ok_or_else(|| IdmError::UnknownAgent(name.to_string()))
    }

    pub fn node_set(&self, names: &[&str]) -> Result<AgentSet> {
        names.iter().map(|n| self.node_index(n)).collect()
    }

    pub fn parents(&self, v: usize) -> AgentSet {
        self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    pub fn children(&self, v: usize) -> AgentSet {
        self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }

    pub fn self_loop(&self) -> Option<usize> {
        self.edges.iter().find(|e| e.0 == e.1).map(|e| e.0)
    }

    /// Kahn's algorithm, smallest available index first.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.len();
        let parents: Vec<AgentSet> = (0..n).map(|v| self.parents(v)).collect();
        let mut placed = AgentSet::empty();
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n).find(|&v| !placed.contains(v) && parents[v].is_subset(placed)).ok_or(IdmError::Cyclic)?;
            placed.insert(next);
            order.push(next);
        }
        Ok(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// All ancestors of `set`, including the set itself.
    pub fn ancestors(&self, set: AgentSet) -> AgentSet {
        let mut out = set;
        loop {
            let next = self.edges.iter().filter(|e| out.contains(e.1)).fold(out, |acc, e| acc.with(e.0));
            if next == out {
                return out;
            }
            out = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_cycles() {
        let g = Dag::from_names(&["a", "b", "c"], &[("c", "a"), ("a", "b")]).unwrap();
        assert_eq!(g.topological_order().unwrap(), vec![2, 0, 1]);
        assert_eq!(g.ancestors(AgentSet::singleton(1)), AgentSet::full(3));
        let cyc = Dag::from_names(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        assert!(!cyc.is_acyclic());
        assert!(Dag::from_names(&["a"], &[("a", "z")]).is_err());
    }
}
