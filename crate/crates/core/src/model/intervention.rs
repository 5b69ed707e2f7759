use num_traits::{One, Zero};

use super::{FieldSpec, Prior, WModel};
use crate::field::{ConfigSpace, CoordinateMask, FiniteSpace, Partition};
use crate::probability::{rat, Rational};
use crate::solvability::{Policy, PolicyProfile};
use crate::{AgentSet, IdmError, Result};

/// Replace the fields of `targets` by `replacements` whenever the new switch
/// agent decides `1`.
#[derive(Clone, Debug)]
pub struct InterventionSpec {
    pub targets: AgentSet,
    /// One field per target, over the base configuration space.
    pub replacements: Vec<(usize, FieldSpec)>,
    /// μ(1) for the switch's nature coordinate.
    pub switch_prob: Rational,
}

impl InterventionSpec {
    pub fn new(targets: AgentSet, replacements: Vec<(usize, FieldSpec)>) -> Self {
        InterventionSpec { targets, replacements, switch_prob: rat(1, 2) }
    }
}

fn switch_name(base: &ConfigSpace) -> String {
    std::iter::once("I".to_string())
        .chain((0..).map(|i| format!("I{i}")))
        .find(|c| base.agent_index(c).is_err())
        .expect("some name is free")
}

/// Configuration of the base model underlying a configuration of the
/// intervened one (the switch is the last agent).
pub fn to_base_index(base: &ConfigSpace, intervened: &ConfigSpace, idx: usize) -> usize {
    let nat = intervened.nature_index(idx) % base.nature_size();
    let dec = intervened.decision_index(idx) % base.decision_size();
    base.compose(nat, dec)
}

/// Adds a binary switch agent `I` (observing only ω_I) whose decision selects,
/// for each target, the original field (`u_I = 0`) or its replacement (`u_I = 1`).
pub fn intervene(m: &WModel, spec: &InterventionSpec) -> Result<WModel> {
    let base = m.space();
    let n = m.agent_count();
    m.check_set(spec.targets)?;
    if spec.switch_prob <= Rational::zero() || spec.switch_prob >= Rational::one() {
        return Err(IdmError::InvalidProbability(format!("switch probability {} lacks full support", spec.switch_prob)));
    }
    let mut repl: Vec<Option<Partition>> = vec![None; n];
    for (z, f) in &spec.replacements {
        if !spec.targets.contains(*z) {
            return Err(IdmError::InvalidModel(format!("replacement for non-target `{}`", m.agent_name(*z))));
        }
        let p = match f {
            FieldSpec::Mask(mask) => Partition::from_mask(base, mask)?,
            FieldSpec::Observation(p) => {
                if **p.space() != **base || !p.is_total() {
                    return Err(IdmError::SpaceMismatch);
                }
                p.clone()
            }
        };
        repl[*z] = Some(p);
    }
    if let Some(z) = spec.targets.iter().find(|&z| repl[z].is_none()) {
        return Err(IdmError::InvalidModel(format!("no replacement field for `{}`", m.agent_name(z))));
    }

    let name = switch_name(base);
    let mut agents = base.agents().to_vec();
    agents.push(name.clone());
    let mut nature: Vec<FiniteSpace> = (0..n).map(|a| base.nature_space(a).clone()).collect();
    nature.push(FiniteSpace::binary(format!("Omega_{name}")));
    let mut decisions: Vec<FiniteSpace> = (0..n).map(|a| base.decision_space(a).clone()).collect();
    decisions.push(FiniteSpace::binary(format!("U_{name}")));
    let space = ConfigSpace::new(agents, nature, decisions)?;

    let mut fields = Vec::with_capacity(n + 1);
    for (a, slot) in repl.iter().enumerate() {
        let orig = m.info(a).partition();
        let p = match slot {
            None => Partition::from_index_labels(&space, |i| orig.atom(to_base_index(base, &space, i))),
            Some(r) => Partition::from_index_labels(&space, |i| {
                let b = to_base_index(base, &space, i);
                match space.decision_digit(i, n) {
                    0 => (0, orig.atom(b)),
                    _ => (1, r.atom(b)),
                }
            }),
        };
        fields.push(FieldSpec::Observation(p));
    }
    fields.push(FieldSpec::Mask(CoordinateMask::nature_only(AgentSet::singleton(n))));

    let mut masses = m.prior_or_uniform().masses().to_vec();
    masses.push(vec![Rational::one() - &spec.switch_prob, spec.switch_prob.clone()]);
    let prior = Prior::new(&space, masses)?;

    let out = WModel::new(space, fields)?
        .with_meta(format!("{}+switch", m.name()), m.provenance())
        .with_prior(prior)?;
    match m.policy() {
        Some(base_profile) => {
            let lifted = lift_profile(m, &out, spec.targets, base_profile, |_, _| 0)?;
            out.with_policy(lifted)
        }
        None => Ok(out),
    }
}

/// Extends a base profile to the intervened model: targets play `replacement`
/// when switched on, every other agent keeps its base policy, and the switch
/// copies its own noise.
pub fn lift_profile(
    base: &WModel,
    intervened: &WModel,
    targets: AgentSet,
    profile: &PolicyProfile,
    replacement: impl Fn(usize, usize) -> usize,
) -> Result<PolicyProfile> {
    let n = base.agent_count();
    if intervened.agent_count() != n + 1 {
        return Err(IdmError::SpaceMismatch);
    }
    let (bs, is) = (base.space(), intervened.space());
    let mut policies = Vec::with_capacity(n + 1);
    for a in 0..n {
        policies.push(Policy::from_fn(intervened, a, |i| {
            let b = to_base_index(bs, is, i);
            if targets.contains(a) && is.decision_digit(i, n) == 1 {
                replacement(a, b)
            } else {
                profile.decide(base, a, b)
            }
        })?);
    }
    policies.push(Policy::from_fn(intervened, n, |i| is.nature_digit(i, n))?);
    PolicyProfile::new(intervened, policies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{refines, Coord};
    use crate::model::builtin;

    #[test]
    fn empty_targets_add_isolated_switch() {
        let m = builtin("common-cause").unwrap();
        let out = intervene(&m, &InterventionSpec::new(AgentSet::empty(), vec![])).unwrap();
        assert_eq!(out.agent_count(), 4);
        assert_eq!(out.agent_name(3), "I");
        for a in 0..3 {
            assert_eq!(out.info(a).partition().atom_count(), m.info(a).partition().atom_count());
        }
    }

    #[test]
    fn switch_splices_fields() {
        let m = builtin("common-cause").unwrap();
        let t = m.agent_index("T").unwrap();
        let spec = InterventionSpec::new(
            AgentSet::singleton(t),
            vec![(t, FieldSpec::Mask(CoordinateMask::local(t, AgentSet::empty())))],
        );
        let out = intervene(&m, &spec).unwrap();
        // T sees (ω_T, u_Z) when off and ω_T alone when on, always knowing u_I.
        assert_eq!(out.info(t).partition().atom_count(), 4 + 2);
        let u_i = Partition::from_mask(out.space(), &CoordinateMask::decisions(AgentSet::singleton(3))).unwrap();
        assert!(refines(out.info(t).partition(), &u_i).unwrap());
        assert!(out.policy().unwrap().is_fixed_point(&out, {
            let sp = out.space();
            // ω all zero, u_I = 0: base solution at ω = 0 is all zero
            sp.with_digit(0, Coord::Decision(3), 0)
        }));
        let bad = InterventionSpec { switch_prob: rat(1, 1), ..spec.clone() };
        assert!(intervene(&m, &bad).is_err());
        let outside = InterventionSpec::new(AgentSet::singleton(9), vec![]);
        assert!(intervene(&m, &outside).is_err());
    }
}
