use std::sync::Arc;

use super::{graph::Dag, FieldSpec, Prior, Provenance, WModel};
use crate::field::{ConfigSpace, CoordinateMask, FiniteSpace};
use crate::solvability::{Policy, PolicyProfile};
use crate::{AgentSet, IdmError, Result};

/// u_a = f_a(ω_a, u_{P(a)}), tabulated over ω_a (fastest) then the parents
/// in agent order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    table: Vec<usize>,
}

impl Assignment {
    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScmSpec {
    parents: Vec<AgentSet>,
    assignments: Vec<Assignment>,
}

impl ScmSpec {
    /// `f(a, ω_a, parent_values)` with parent values in agent order.
    pub fn new(space: &ConfigSpace, parents: Vec<AgentSet>, f: impl Fn(usize, usize, &[usize]) -> usize) -> Result<Self> {
        let n = space.agent_count();
        if parents.len() != n {
            return Err(IdmError::InvalidModel(format!("{} parent sets for {n} agents", parents.len())));
        }
        let mut assignments = Vec::with_capacity(n);
        for (a, &pa) in parents.iter().enumerate() {
            if let Some(b) = pa.iter().find(|&b| b >= n) {
                return Err(IdmError::AgentOutOfRange { index: b, count: n });
            }
            let radices: Vec<usize> = std::iter::once(space.nature_space(a).len())
                .chain(pa.iter().map(|b| space.decision_space(b).len()))
                .collect();
            let total: usize = radices.iter().product();
            let ulen = space.decision_space(a).len();
            let mut table = Vec::with_capacity(total);
            let mut digits = vec![0usize; radices.len()];
            for _ in 0..total {
                let v = f(a, digits[0], &digits[1..]);
                if v >= ulen {
                    return Err(IdmError::InvalidPolicy {
                        agent: space.agent_name(a).to_string(),
                        reason: format!("assignment value {v} outside U"),
                    });
                }
                table.push(v);
                for (d, &r) in digits.iter_mut().zip(&radices) {
                    *d += 1;
                    if *d < r {
                        break;
                    }
                    *d = 0;
                }
            }
            assignments.push(Assignment { table });
        }
        Ok(ScmSpec { parents, assignments })
    }

    pub fn parents(&self) -> &[AgentSet] {
        &self.parents
    }

    pub fn assignment(&self, a: usize) -> &Assignment {
        &self.assignments[a]
    }

    fn evaluate(&self, space: &ConfigSpace, a: usize, idx: usize) -> usize {
        let mut key = space.nature_digit(idx, a);
        let mut mult = space.nature_space(a).len();
        for b in self.parents[a].iter() {
            key += space.decision_digit(idx, b) * mult;
            mult *= space.decision_space(b).len();
        }
        self.assignments[a].table[key]
    }
}

/// I_a = ℱ_a ⊗ 𝒰_{P(a)}, with the assignments attached as the canonical profile.
pub fn scm_to_idm(space: Arc<ConfigSpace>, spec: &ScmSpec) -> Result<WModel> {
    let n = space.agent_count();
    if spec.parents.len() != n {
        return Err(IdmError::SpaceMismatch);
    }
    let fields = spec.parents.iter().enumerate().map(|(a, &p)| FieldSpec::Mask(CoordinateMask::local(a, p))).collect();
    let m = WModel::new(space.clone(), fields)?;
    let policies = (0..n)
        .map(|a| Policy::from_fn(&m, a, |idx| spec.evaluate(&space, a, idx)))
        .collect::<Result<Vec<_>>>()?;
    let profile = PolicyProfile::new(&m, policies)?;
    m.with_policy(profile)
}

/// Binary nature and decisions, I_a = ℱ_a ⊗ 𝒰_{parents(a)}, uniform prior.
pub fn dag_to_idm(g: &Dag) -> Result<WModel> {
    if let Some(v) = g.self_loop() {
        return Err(IdmError::SelfLoop(g.nodes()[v].clone()));
    }
    let space = ConfigSpace::new(
        g.nodes().to_vec(),
        g.nodes().iter().map(|s| FiniteSpace::binary(format!("Omega_{s}"))).collect(),
        g.nodes().iter().map(|s| FiniteSpace::binary(format!("U_{s}"))).collect(),
    )?;
    let fields = (0..g.len()).map(|a| FieldSpec::Mask(CoordinateMask::local(a, g.parents(a)))).collect();
    let prior = Prior::uniform(&space);
    Ok(WModel::new(space, fields)?.with_meta("dag", Provenance::User).with_prior(prior)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_space;

    #[test]
    fn scm_fields_follow_parents() {
        let sp = uniform_space(&["Z", "T", "Y"], 2, 2).unwrap();
        let parents = vec![AgentSet::empty(), AgentSet::singleton(0), [0, 1].into_iter().collect()];
        let spec = ScmSpec::new(&sp, parents.clone(), |_, w, p| p.iter().fold(w, |acc, x| acc ^ x)).unwrap();
        let m = scm_to_idm(sp.clone(), &spec).unwrap();
        for (a, p) in parents.iter().enumerate() {
            assert_eq!(m.info(a).mask(), Some(CoordinateMask::local(a, *p)));
        }
        let prof = m.policy().unwrap();
        // ω = (1,0,1), u = (1,1,1): Y = ω_Y ⊕ u_Z ⊕ u_T = 1
        let idx = sp.index_of(&crate::field::Configuration { nature: vec![1, 0, 1], decision: vec![1, 1, 1] }).unwrap();
        assert_eq!(prof.decide(&m, 2, idx), 1);
        assert_eq!(prof.decide(&m, 1, idx), 1);
    }

    #[test]
    fn dag_import() {
        let g = Dag::from_names(&["a", "b"], &[]).unwrap();
        let m = dag_to_idm(&g).unwrap();
        assert!(m.fields().iter().all(|f| f.mask().unwrap().decision.is_empty()));
        assert!(m.policy().is_none());
        let looped = Dag::from_names(&["a"], &[("a", "a")]).unwrap();
        assert!(matches!(dag_to_idm(&looped), Err(IdmError::SelfLoop(_))));
        let cyc = Dag::from_names(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        assert!(dag_to_idm(&cyc).is_ok());
    }
}
