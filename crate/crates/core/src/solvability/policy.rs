use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::field::Partition;
use crate::model::WModel;
use crate::{IdmError, Result};

/// An I_a-measurable policy: one decision per atom of the owner's field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Policy {
    owner: usize,
    table: Vec<usize>,
}

impl Policy {
    pub fn new(m: &WModel, owner: usize, table: Vec<usize>) -> Result<Self> {
        m.check_agent(owner)?;
        let atoms = m.info(owner).partition().atom_count();
        let ulen = m.space().decision_space(owner).len();
        let err = |reason: String| IdmError::InvalidPolicy { agent: m.agent_name(owner).to_string(), reason };
        if table.len() != atoms {
            return Err(err(format!("table has {} entries for {} atoms", table.len(), atoms)));
        }
        if let Some(v) = table.iter().find(|&&v| v >= ulen) {
            return Err(err(format!("decision index {v} outside U (size {ulen})")));
        }
        Ok(Policy { owner, table })
    }

    /// Tabulates `f` over configurations; fails unless `f` is constant on every atom.
    pub fn from_fn(m: &WModel, owner: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        m.check_agent(owner)?;
        let field = m.info(owner).partition();
        let mut table = vec![usize::MAX; field.atom_count()];
        for idx in 0..m.space().size() {
            let atom = field.atom(idx).expect("information fields are total");
            let v = f(idx);
            if table[atom] == usize::MAX {
                table[atom] = v;
            } else if table[atom] != v {
                return Err(IdmError::InvalidPolicy {
                    agent: m.agent_name(owner).to_string(),
                    reason: format!("not measurable: differs inside the atom of {}", m.space().describe(idx)),
                });
            }
        }
        Self::new(m, owner, table)
    }

    pub fn random<R: Rng + ?Sized>(m: &WModel, owner: usize, rng: &mut R) -> Self {
        let atoms = m.info(owner).partition().atom_count();
        let ulen = m.space().decision_space(owner).len();
        Policy { owner, table: (0..atoms).map(|_| rng.gen_range(0..ulen)).collect() }
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn decide(&self, field: &Partition, idx: usize) -> usize {
        self.table[field.atom(idx).expect("information fields are total")]
    }
}

/// One policy per agent, in agent order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolicyProfile {
    policies: Vec<Policy>,
}

impl PolicyProfile {
    pub fn new(m: &WModel, policies: Vec<Policy>) -> Result<Self> {
        if policies.len() != m.agent_count() {
            return Err(IdmError::InvalidModel(format!(
                "profile has {} policies for {} agents",
                policies.len(),
                m.agent_count()
            )));
        }
        for (a, p) in policies.iter().enumerate() {
            if p.owner != a {
                return Err(IdmError::InvalidModel(format!("policy {a} is owned by agent {}", p.owner)));
            }
            Policy::new(m, a, p.table.clone())?;
        }
        Ok(PolicyProfile { policies })
    }

    pub fn from_fn(m: &WModel, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let policies = (0..m.agent_count()).map(|a| Policy::from_fn(m, a, |i| f(a, i))).collect::<Result<_>>()?;
        Ok(PolicyProfile { policies })
    }

    pub fn random<R: Rng + ?Sized>(m: &WModel, rng: &mut R) -> Self {
        PolicyProfile { policies: (0..m.agent_count()).map(|a| Policy::random(m, a, rng)).collect() }
    }

    pub fn policies(&self) -> &[Policy] {
        &self.policies
    }

    pub fn policy(&self, a: usize) -> &Policy {
        &self.policies[a]
    }

    /// λ_a(h).
    #[inline]
    pub fn decide(&self, m: &WModel, a: usize, idx: usize) -> usize {
        self.policies[a].decide(m.info(a).partition(), idx)
    }

    /// True iff u_a = λ_a(ω, u) for every agent at configuration `idx`.
    pub fn is_fixed_point(&self, m: &WModel, idx: usize) -> bool {
        let sp = m.space();
        (0..m.agent_count()).all(|a| sp.decision_digit(idx, a) == self.decide(m, a, idx))
    }
}
