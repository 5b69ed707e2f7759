use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::mask::{Coord, CoordinateMask};
use crate::{AgentSet, IdmError, Result};

/// Largest configuration space accepted unless a caller asks otherwise.
pub const DEFAULT_SIZE_CAP: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSpace {
    id: String,
    elements: Vec<String>,
}

impl FiniteSpace {
    pub fn new(id: impl Into<String>, elements: Vec<String>) -> Result<Self> {
        let id = id.into();
        if elements.is_empty() {
            return Err(IdmError::EmptySpace(id));
        }
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(IdmError::DuplicateLabel { space: id, label: e.clone() });
            }
        }
        Ok(FiniteSpace { id, elements })
    }

    /// Elements labelled `"0"`, `"1"`, ... `"k-1"`.
    pub fn range(id: impl Into<String>, k: usize) -> Self {
        assert!(k >= 1);
        FiniteSpace { id: id.into(), elements: (0..k).map(|i| i.to_string()).collect() }
    }

    pub fn binary(id: impl Into<String>) -> Self {
        Self::range(id, 2)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.elements.iter().position(|e| e == label).ok_or_else(|| IdmError::UnknownElement {
            space: self.id.clone(),
            label: label.to_string(),
        })
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }
}

/// A configuration as per-agent element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub nature: Vec<usize>,
    pub decision: Vec<usize>,
}

impl Configuration {
    pub fn value(&self, c: Coord) -> usize {
        match c {
            Coord::Nature(a) => self.nature[a],
            Coord::Decision(a) => self.decision[a],
        }
    }
}

/// H = Ω × ∏ U_a with Ω = ∏ Ω_a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigSpace {
    agents: Vec<String>,
    nature: Vec<FiniteSpace>,
    decisions: Vec<FiniteSpace>,
    /// Radix and stride per coordinate, nature coordinates first.
    radix: Vec<usize>,
    stride: Vec<usize>,
    nature_size: usize,
    decision_size: usize,
}

impl ConfigSpace {
    pub fn new(agents: Vec<String>, nature: Vec<FiniteSpace>, decisions: Vec<FiniteSpace>) -> Result<Arc<Self>> {
        Self::with_cap(agents, nature, decisions, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(
        agents: Vec<String>,
        nature: Vec<FiniteSpace>,
        decisions: Vec<FiniteSpace>,
        cap: usize,
    ) -> Result<Arc<Self>> {
        let n = agents.len();
        if n > AgentSet::MAX_AGENTS {
            return Err(IdmError::TooManyAgents(n));
        }
        if nature.len() != n || decisions.len() != n {
            return Err(IdmError::InvalidModel(format!(
                "{} agents but {} nature and {} decision spaces",
                n,
                nature.len(),
                decisions.len()
            )));
        }
        let mut seen = HashSet::new();
        for a in &agents {
            if !seen.insert(a.as_str()) {
                return Err(IdmError::DuplicateLabel { space: "agents".into(), label: a.clone() });
            }
        }
        let mut size: u128 = 1;
        for s in nature.iter().chain(&decisions) {
            size = size.saturating_mul(s.len() as u128);
        }
        if size > cap as u128 {
            return Err(IdmError::SpaceTooLarge { size, cap });
        }
        let radix: Vec<usize> = nature.iter().chain(&decisions).map(FiniteSpace::len).collect();
        let mut stride = Vec::with_capacity(2 * n);
        let mut acc = 1usize;
        for r in &radix {
            stride.push(acc);
            acc *= r;
        }
        let nature_size = nature.iter().map(FiniteSpace::len).product();
        let decision_size = decisions.iter().map(FiniteSpace::len).product();
        Ok(Arc::new(ConfigSpace { agents, nature, decisions, radix, stride, nature_size, decision_size }))
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_name(&self, a: usize) -> &str {
        &self.agents[a]
    }

    pub fn agent_index(&self, name: &str) -> Result<usize> {
        self.agents.iter().position(|x| x == name).ok_or_else(|| IdmError::UnknownAgent(name.to_string()))
    }

    pub fn agent_set(&self, names: &[&str]) -> Result<AgentSet> {
        names.iter().map(|n| self.agent_index(n)).collect()
    }

    pub fn all_agents(&self) -> AgentSet {
        AgentSet::full(self.agent_count())
    }

    pub fn nature_space(&self, a: usize) -> &FiniteSpace {
        &self.nature[a]
    }

    pub fn decision_space(&self, a: usize) -> &FiniteSpace {
        &self.decisions[a]
    }

    pub fn coord_space(&self, c: Coord) -> &FiniteSpace {
        match c {
            Coord::Nature(a) => &self.nature[a],
            Coord::Decision(a) => &self.decisions[a],
        }
    }

    /// |H|.
    pub fn size(&self) -> usize {
        self.nature_size * self.decision_size
    }

    /// |Ω|.
    pub fn nature_size(&self) -> usize {
        self.nature_size
    }

    /// |∏ U_a|.
    pub fn decision_size(&self) -> usize {
        self.decision_size
    }

    fn slot(&self, c: Coord) -> usize {
        match c {
            Coord::Nature(a) => a,
            Coord::Decision(a) => self.agents.len() + a,
        }
    }

    pub fn radix(&self, c: Coord) -> usize {
        self.radix[self.slot(c)]
    }

    pub fn stride(&self, c: Coord) -> usize {
        self.stride[self.slot(c)]
    }

    /// Value of coordinate `c` in configuration `idx`.
    #[inline]
    pub fn digit(&self, idx: usize, c: Coord) -> usize {
        let s = self.slot(c);
        idx / self.stride[s] % self.radix[s]
    }

    #[inline]
    pub fn nature_digit(&self, idx: usize, a: usize) -> usize {
        idx / self.stride[a] % self.radix[a]
    }

    #[inline]
    pub fn decision_digit(&self, idx: usize, a: usize) -> usize {
        let s = self.agents.len() + a;
        idx / self.stride[s] % self.radix[s]
    }

    /// Replace coordinate `c` of configuration `idx` by `v`.
    #[inline]
    pub fn with_digit(&self, idx: usize, c: Coord, v: usize) -> usize {
        let s = self.slot(c);
        let old = idx / self.stride[s] % self.radix[s];
        idx - old * self.stride[s] + v * self.stride[s]
    }

    #[inline]
    pub fn nature_index(&self, idx: usize) -> usize {
        idx % self.nature_size
    }

    #[inline]
    pub fn decision_index(&self, idx: usize) -> usize {
        idx / self.nature_size
    }

    #[inline]
    pub fn compose(&self, nature_idx: usize, decision_idx: usize) -> usize {
        nature_idx + self.nature_size * decision_idx
    }

    pub fn configuration(&self, idx: usize) -> Configuration {
        let n = self.agents.len();
        Configuration {
            nature: (0..n).map(|a| self.nature_digit(idx, a)).collect(),
            decision: (0..n).map(|a| self.decision_digit(idx, a)).collect(),
        }
    }

    pub fn index_of(&self, cfg: &Configuration) -> Result<usize> {
        let n = self.agents.len();
        if cfg.nature.len() != n || cfg.decision.len() != n {
            return Err(IdmError::SpaceMismatch);
        }
        let mut idx = 0;
        for a in 0..n {
            for (c, v) in [(Coord::Nature(a), cfg.nature[a]), (Coord::Decision(a), cfg.decision[a])] {
                if v >= self.radix(c) {
                    return Err(IdmError::UnknownElement {
                        space: self.coord_space(c).id().to_string(),
                        label: v.to_string(),
                    });
                }
                idx += v * self.stride(c);
            }
        }
        Ok(idx)
    }

    /// Human-readable rendering such as `ω(X0=0,X1=1) u(X0=1,X1=0)`.
    pub fn describe(&self, idx: usize) -> String {
        let n = self.agents.len();
        let nat: Vec<String> =
            (0..n).map(|a| format!("{}={}", self.agents[a], self.nature[a].label(self.nature_digit(idx, a)))).collect();
        let dec: Vec<String> = (0..n)
            .map(|a| format!("{}={}", self.agents[a], self.decisions[a].label(self.decision_digit(idx, a))))
            .collect();
        format!("ω({}) u({})", nat.join(","), dec.join(","))
    }

    pub fn check_mask(&self, mask: &CoordinateMask) -> Result<()> {
        let n = self.agent_count();
        for set in [mask.nature, mask.decision] {
            if let Some(a) = set.iter().find(|&a| a >= n) {
                return Err(IdmError::AgentOutOfRange { index: a, count: n });
            }
        }
        Ok(())
    }
}

/// Masked coordinates of `cfg`, nature coordinates first, each in agent order.
pub fn project(space: &ConfigSpace, cfg: &Configuration, mask: &CoordinateMask) -> Result<Vec<(Coord, usize)>> {
    space.check_mask(mask)?;
    Ok(mask.coords().map(|c| (c, cfg.value(c))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common_cause_space() -> Arc<ConfigSpace> {
        let names = ["Z", "T", "Y"];
        ConfigSpace::new(
            names.iter().map(|s| s.to_string()).collect(),
            names.iter().map(|s| FiniteSpace::binary(format!("Ω_{s}"))).collect(),
            names.iter().map(|s| FiniteSpace::binary(format!("U_{s}"))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn index_roundtrip_and_layout() {
        let sp = common_cause_space();
        assert_eq!(sp.size(), 64);
        for idx in 0..sp.size() {
            let cfg = sp.configuration(idx);
            assert_eq!(sp.index_of(&cfg).unwrap(), idx);
            assert_eq!(sp.compose(sp.nature_index(idx), sp.decision_index(idx)), idx);
        }
        // First nature coordinate varies fastest; decisions come after nature.
        assert_eq!(sp.configuration(1).nature, vec![1, 0, 0]);
        assert_eq!(sp.configuration(8).decision, vec![1, 0, 0]);
    }

    #[test]
    fn project_selects_coordinates() {
        let sp = common_cause_space();
        let cfg = Configuration { nature: vec![0, 1, 0], decision: vec![1, 0, 1] };
        let m = CoordinateMask::decisions(sp.agent_set(&["Z", "T"]).unwrap());
        assert_eq!(project(&sp, &cfg, &m).unwrap(), vec![(Coord::Decision(0), 1), (Coord::Decision(1), 0)]);
        let m = CoordinateMask::nature_only(AgentSet::singleton(1));
        assert_eq!(project(&sp, &cfg, &m).unwrap(), vec![(Coord::Nature(1), 1)]);
        let full = CoordinateMask::full(3);
        assert_eq!(project(&sp, &cfg, &full).unwrap().len(), 6);
        let bad = CoordinateMask::decisions(AgentSet::singleton(7));
        assert!(matches!(project(&sp, &cfg, &bad), Err(IdmError::AgentOutOfRange { .. })));
    }

    #[test]
    fn size_guard() {
        let names: Vec<String> = (0..13).map(|i| format!("a{i}")).collect();
        let spaces = || names.iter().map(|s| FiniteSpace::binary(s.clone())).collect();
        let err = ConfigSpace::new(names.clone(), spaces(), spaces()).unwrap_err();
        assert!(matches!(err, IdmError::SpaceTooLarge { size, .. } if size == 1 << 26));
        assert!(ConfigSpace::with_cap(names.clone(), spaces(), spaces(), 1 << 26).is_ok());
    }

    #[test]
    fn finite_space_validation() {
        assert!(FiniteSpace::new("s", vec![]).is_err());
        assert!(FiniteSpace::new("s", vec!["a".into(), "a".into()]).is_err());
        let s = FiniteSpace::new("s", vec!["-1".into(), "0".into(), "1".into()]).unwrap();
        assert_eq!(s.index_of("1").unwrap(), 2);
    }
}
