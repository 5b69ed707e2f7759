//! W-models: agents, finite nature and decision spaces, information fields
//! and an optional product prior.

mod builtin;
mod graph;
mod intervention;
pub mod random;
mod scm;

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{field_subset_witness, ConfigSet, ConfigSpace, CoordinateMask, FiniteSpace, Partition};
use crate::probability::Rational;
use crate::solvability::PolicyProfile;
use crate::{AgentSet, IdmError, Result};

pub use builtin::{builtin, builtin_dag, builtin_names, BUILTIN_NAMES};
pub use graph::Dag;
pub use intervention::{intervene, lift_profile, to_base_index, InterventionSpec};
pub use scm::{dag_to_idm, scm_to_idm, Assignment, ScmSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    Paper,
    Reconstructed,
    User,
}

/// How an information field was specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Mask(CoordinateMask),
    Observation(Partition),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldRepr {
    Mask(CoordinateMask),
    Observation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InformationField {
    owner: usize,
    repr: FieldRepr,
    partition: Partition,
}

impl InformationField {
    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn repr(&self) -> &FieldRepr {
        &self.repr
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn mask(&self) -> Option<CoordinateMask> {
        match self.repr {
            FieldRepr::Mask(m) => Some(m),
            FieldRepr::Observation => None,
        }
    }
}

/// ℙ = ⊗_a ℙ_a, one exact mass function per Ω_a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prior {
    masses: Vec<Vec<Rational>>,
}

impl Prior {
    pub fn new(space: &ConfigSpace, masses: Vec<Vec<Rational>>) -> Result<Self> {
        if masses.len() != space.agent_count() {
            return Err(IdmError::InvalidProbability(format!(
                "{} mass functions for {} agents",
                masses.len(),
                space.agent_count()
            )));
        }
        for (a, row) in masses.iter().enumerate() {
            let name = space.agent_name(a);
            if row.len() != space.nature_space(a).len() {
                return Err(IdmError::InvalidProbability(format!(
                    "agent `{name}`: {} masses for {} nature values",
                    row.len(),
                    space.nature_space(a).len()
                )));
            }
            if row.iter().any(|p| *p < Rational::zero()) {
                return Err(IdmError::InvalidProbability(format!("agent `{name}`: negative mass")));
            }
            let total: Rational = row.iter().sum();
            if !total.is_one() {
                return Err(IdmError::InvalidProbability(format!("agent `{name}`: masses sum to {total}")));
            }
        }
        Ok(Prior { masses })
    }

    pub fn uniform(space: &ConfigSpace) -> Self {
        let masses = (0..space.agent_count())
            .map(|a| {
                let k = space.nature_space(a).len();
                vec![crate::probability::rat(1, k as i64); k]
            })
            .collect();
        Prior { masses }
    }

    /// Binary noises with the given mass on `1` (`|Ω_a| = 1` agents get mass 1).
    pub fn bernoulli(space: &ConfigSpace, p_one: &[Rational]) -> Result<Self> {
        let masses = (0..space.agent_count())
            .map(|a| match space.nature_space(a).len() {
                1 => vec![Rational::one()],
                2 => vec![Rational::one() - &p_one[a], p_one[a].clone()],
                _ => vec![],
            })
            .collect();
        Self::new(space, masses)
    }

    pub fn masses(&self) -> &[Vec<Rational>] {
        &self.masses
    }

    pub fn mass(&self, a: usize, v: usize) -> &Rational {
        &self.masses[a][v]
    }

    /// ℙ({ω}) for a nature index.
    pub fn nature_prob(&self, space: &ConfigSpace, omega: usize) -> Rational {
        let mut p = Rational::one();
        for (a, row) in self.masses.iter().enumerate() {
            p *= &row[space.nature_digit(omega, a)];
            if p.is_zero() {
                break;
            }
        }
        p
    }

    pub fn has_full_support(&self) -> bool {
        self.masses.iter().flatten().all(|p| !p.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct WModel {
    name: String,
    provenance: Provenance,
    space: Arc<ConfigSpace>,
    info: Vec<InformationField>,
    prior: Option<Prior>,
    policy: Option<PolicyProfile>,
}

impl PartialEq for WModel {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name
            && self.provenance == o.provenance
            && *self.space == *o.space
            && self.info.iter().map(|f| &f.partition).eq(o.info.iter().map(|f| &f.partition))
            && self.prior == o.prior
            && self.policy == o.policy
    }
}

impl WModel {
    pub fn new(space: Arc<ConfigSpace>, fields: Vec<FieldSpec>) -> Result<Self> {
        let n = space.agent_count();
        if n == 0 {
            return Err(IdmError::InvalidModel("no agents".into()));
        }
        if fields.len() != n {
            return Err(IdmError::InvalidModel(format!("{} information fields for {n} agents", fields.len())));
        }
        let info = fields
            .into_iter()
            .enumerate()
            .map(|(owner, spec)| {
                let (repr, partition) = match spec {
                    FieldSpec::Mask(mask) => (FieldRepr::Mask(mask), Partition::from_mask(&space, &mask)?),
                    FieldSpec::Observation(p) => {
                        if **p.space() != *space || !p.is_total() {
                            return Err(IdmError::SpaceMismatch);
                        }
                        (FieldRepr::Observation, p)
                    }
                };
                Ok(InformationField { owner, repr, partition })
            })
            .collect::<Result<_>>()?;
        Ok(WModel { name: String::new(), provenance: Provenance::User, space, info, prior: None, policy: None })
    }

    pub fn with_meta(mut self, name: impl Into<String>, provenance: Provenance) -> Self {
        self.name = name.into();
        self.provenance = provenance;
        self
    }

    pub fn with_prior(mut self, prior: Prior) -> Result<Self> {
        Prior::new(&self.space, prior.masses.clone())?;
        self.prior = Some(prior);
        Ok(self)
    }

    pub fn with_policy(mut self, profile: PolicyProfile) -> Result<Self> {
        PolicyProfile::new(&self, profile.policies().to_vec())?;
        self.policy = Some(profile);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn space(&self) -> &Arc<ConfigSpace> {
        &self.space
    }

    pub fn agent_count(&self) -> usize {
        self.space.agent_count()
    }

    pub fn all_agents(&self) -> AgentSet {
        self.space.all_agents()
    }

    pub fn agent_name(&self, a: usize) -> &str {
        self.space.agent_name(a)
    }

    pub fn agent_index(&self, name: &str) -> Result<usize> {
        self.space.agent_index(name)
    }

    pub fn agent_set(&self, names: &[&str]) -> Result<AgentSet> {
        self.space.agent_set(names)
    }

    pub fn agent_names(&self, set: AgentSet) -> Vec<String> {
        set.iter().map(|a| self.agent_name(a).to_string()).collect()
    }

    pub fn check_agent(&self, a: usize) -> Result<()> {
        if a < self.agent_count() {
            Ok(())
        } else {
            Err(IdmError::AgentOutOfRange { index: a, count: self.agent_count() })
        }
    }

    pub fn check_set(&self, s: AgentSet) -> Result<()> {
        match s.iter().find(|&a| a >= self.agent_count()) {
            Some(a) => Err(IdmError::AgentOutOfRange { index: a, count: self.agent_count() }),
            None => Ok(()),
        }
    }

    pub fn info(&self, a: usize) -> &InformationField {
        &self.info[a]
    }

    pub fn fields(&self) -> &[InformationField] {
        &self.info
    }

    pub fn prior(&self) -> Option<&Prior> {
        self.prior.as_ref()
    }

    /// The attached prior, or the uniform one.
    pub fn prior_or_uniform(&self) -> Prior {
        self.prior.clone().unwrap_or_else(|| Prior::uniform(&self.space))
    }

    pub fn policy(&self) -> Option<&PolicyProfile> {
        self.policy.as_ref()
    }

    pub fn full_set(&self) -> ConfigSet {
        ConfigSet::full(&self.space)
    }

    /// True when every field is determined by nature and the decisions of
    /// `parents` for some parent set excluding the owner, i.e. a DAG-like
    /// mask model; returns those parent sets.
    pub fn mask_parents(&self) -> Option<Vec<AgentSet>> {
        self.info.iter().map(|f| f.mask().map(|m| m.decision)).collect()
    }
}

/// Outcome of the two field-shape checks for one agent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentValidation {
    pub agent: String,
    /// I_a ⊆ ℱ ⊗ ⊗_b 𝒰_b: a total partition of H.
    pub product_ok: bool,
    /// I_a ⊆ ℱ_a ⊗ ⊗_c 𝒰_c, when requested.
    pub local_noise_ok: Option<bool>,
    /// Two configurations in different atoms that agree on ω_a and all decisions.
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub require_local_noise: bool,
    pub agents: Vec<AgentValidation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.agents.iter().all(|a| a.product_ok && a.local_noise_ok != Some(false))
    }
}

pub fn validate_model(m: &WModel, require_local_noise: bool) -> ValidationReport {
    let sp = m.space();
    let n = m.agent_count();
    let full = m.full_set();
    let agents = (0..n)
        .map(|a| {
            let p = m.info(a).partition();
            let product_ok = **p.space() == **sp && p.is_total();
            let (local_noise_ok, witness) = if require_local_noise && product_ok {
                let mask = CoordinateMask::new(AgentSet::singleton(a), AgentSet::full(n));
                match field_subset_witness(p, &mask, &full).expect("same space") {
                    None => (Some(true), None),
                    Some((x, y)) => (Some(false), Some((sp.describe(x), sp.describe(y)))),
                }
            } else {
                (None, None)
            };
            AgentValidation { agent: m.agent_name(a).to_string(), product_ok, local_noise_ok, witness }
        })
        .collect();
    ValidationReport { require_local_noise, agents }
}

/// A space where every agent has `k_nature` noise values and `k_decision` decisions.
pub fn uniform_space(names: &[&str], k_nature: usize, k_decision: usize) -> Result<Arc<ConfigSpace>> {
    ConfigSpace::new(
        names.iter().map(|s| s.to_string()).collect(),
        names.iter().map(|s| FiniteSpace::range(format!("Omega_{s}"), k_nature)).collect(),
        names.iter().map(|s| FiniteSpace::range(format!("U_{s}"), k_decision)).collect(),
    )
}
