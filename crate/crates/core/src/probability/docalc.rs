use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dist::{cond_independent, conditional_dropping, pushforward_with, CiWitness};
use crate::field::{ConfigSet, Coord, CoordinateMask, MaskKeyer};
use crate::model::random::random_prior;
use crate::model::WModel;
use crate::precedence::{check_disjoint, precedes, topologically_separated_with, SeparationCertificate};
use crate::solvability::{
    find_causal_ordering, sample_profile, solve_with, CausalityLimits, SampleStrategy,
};
use crate::{AgentSet, Exec, IdmError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DocalcOptions {
    pub policy_trials: usize,
    pub prior_trials: usize,
    pub seed: u64,
    /// How candidate profiles are drawn; `None` alternates between the
    /// reparametrized attached profile (when present) and uniform draws.
    pub strategy: Option<SampleStrategy>,
}

impl Default for DocalcOptions {
    fn default() -> Self {
        DocalcOptions { policy_trials: 50, prior_trials: 5, seed: 0, strategy: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocalcReport {
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub w: Vec<String>,
    pub context_size: usize,
    pub separated: bool,
    pub certificate: Option<SeparationCertificate>,
    /// (profile, prior) pairs on which both equalities were checked.
    pub trials: usize,
    pub failures: usize,
    pub skipped_unsolvable: usize,
    pub zero_mass_contexts: usize,
    pub failure_examples: Vec<String>,
    /// For non-separated queries: a dependence of u_Y and u_Z given u_W under
    /// the attached profile and prior, when one exists.
    pub corroboration: Option<CiWitness>,
    /// Some(true) when a causal ordering exists, so every profile is solvable.
    pub strongly_solvable: Option<bool>,
    /// See [`context_in_scope`].
    pub context_in_scope: Option<bool>,
}

/// True iff H is a product of one condition on u_{cl_y}, one on u_{cl_z} and
/// one on the decisions of agents whose own closure (W = ∅, full space)
/// misses both closures. Conditioning on anything else, such as a collider
/// fed by both sides, can couple the two closures.
pub fn context_in_scope(m: &WModel, h: &ConfigSet, cl_y: AgentSet, cl_z: AgentSet) -> bool {
    let sp = m.space();
    let sides = cl_y.union(cl_z);
    let Ok(rel) = precedes(m, AgentSet::empty(), &m.full_set()) else {
        return false;
    };
    let upstream: AgentSet = m
        .all_agents()
        .difference(sides)
        .iter()
        .filter(|&r| rel.closure(AgentSet::singleton(r)).is_disjoint(sides))
        .collect();
    let groups = [cl_y, cl_z, upstream];
    let all = MaskKeyer::new(sp, &CoordinateMask::decisions(sides.union(upstream)));
    let keyers: Vec<MaskKeyer> = groups.iter().map(|g| MaskKeyer::new(sp, &CoordinateMask::decisions(*g))).collect();
    let mut state = vec![0u8; all.key_count()];
    let mut members = BTreeSet::new();
    for i in 0..sp.size() {
        let bit = if h.contains(i) { 1 } else { 2 };
        let s = &mut state[all.key(i)];
        *s |= bit;
        if *s == 3 {
            return false;
        }
        if bit == 1 {
            members.insert([keyers[0].key(i), keyers[1].key(i), keyers[2].key(i)]);
        }
    }
    let sizes: usize = (0..3).map(|g| members.iter().map(|t| t[g]).collect::<BTreeSet<_>>().len()).product();
    members.len() == sizes
}

pub fn verify_docalculus(
    m: &WModel,
    y: AgentSet,
    z: AgentSet,
    w: AgentSet,
    h: &ConfigSet,
    opts: DocalcOptions,
) -> Result<DocalcReport> {
    verify_docalculus_with(m, y, z, w, h, opts, Exec::default())
}

/// When Y and Z are topologically separated given (W, H), checks on sampled
/// solvable profiles and rational priors that u_{cl(Y∪W_Y)} ⟂ u_{cl(Z∪W_Z)}
/// given (H, u_W), and that Q(u_Y | u_W, u_{cl(Z∪W_Z)}, H) = Q(u_Y | u_W, H).
pub fn verify_docalculus_with(
    m: &WModel,
    y: AgentSet,
    z: AgentSet,
    w: AgentSet,
    h: &ConfigSet,
    opts: DocalcOptions,
    exec: Exec,
) -> Result<DocalcReport> {
    m.check_set(y.union(z).union(w))?;
    check_disjoint(y, z, w)?;
    let cert = topologically_separated_with(m, y, z, w, h, exec)?;
    let strongly_solvable = match find_causal_ordering(m, CausalityLimits::default()) {
        Ok(found) => found.map(|_| true),
        Err(_) => None,
    };
    let mut report = DocalcReport {
        y: m.agent_names(y),
        z: m.agent_names(z),
        w: m.agent_names(w),
        context_size: h.len(),
        separated: cert.is_some(),
        certificate: cert,
        trials: 0,
        failures: 0,
        skipped_unsolvable: 0,
        zero_mass_contexts: 0,
        failure_examples: Vec::new(),
        corroboration: None,
        strongly_solvable,
        context_in_scope: cert.map(|c| context_in_scope(m, h, c.closure_y, c.closure_z)),
    };
    let dec = CoordinateMask::decisions;
    let Some(cert) = cert else {
        if let Some(profile) = m.policy() {
            if solve_with(m, profile, exec).solvable {
                let d = pushforward_with(m, profile, &m.prior_or_uniform(), exec)?;
                if d.mass_of(h) != num_traits::Zero::zero() {
                    report.corroboration = cond_independent(&d, &dec(y), &dec(z), &dec(w), h)?.witness;
                }
            }
        }
        return Ok(report);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in 0..opts.policy_trials {
        let strategy = opts.strategy.unwrap_or(if m.policy().is_some() && t % 2 == 0 {
            SampleStrategy::Reparametrized
        } else {
            SampleStrategy::Uniform
        });
        let profile = sample_profile(m, strategy, &mut rng)?;
        if !solve_with(m, &profile, exec).solvable {
            report.skipped_unsolvable += 1;
            continue;
        }
        for p in 0..opts.prior_trials {
            let prior = if p == 0 { m.prior_or_uniform() } else { random_prior(&mut rng, m) };
            let d = pushforward_with(m, &profile, &prior, exec)?;
            let ci = match cond_independent(&d, &dec(cert.closure_y), &dec(cert.closure_z), &dec(w), h) {
                Err(IdmError::EmptyContext) => {
                    report.zero_mass_contexts += 1;
                    continue;
                }
                r => r?,
            };
            let dropping = conditional_dropping(&d, &dec(y), &dec(cert.closure_z), &dec(w), h)?;
            report.trials += 1;
            if !ci.independent || !dropping.holds {
                report.failures += 1;
                if report.failure_examples.len() < 5 {
                    report.failure_examples.push(format!(
                        "profile trial {t}, prior trial {p}: independence {:?}, dropping {:?}",
                        ci.witness, dropping.witness
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Rule 1 with W = X and H = {h : h_X̃ = x̃}.
pub fn verify_rule1_tikka(
    m: &WModel,
    y: AgentSet,
    z: AgentSet,
    x: AgentSet,
    pinned: &[(Coord, usize)],
    opts: DocalcOptions,
) -> Result<DocalcReport> {
    let h = if pinned.is_empty() { m.full_set() } else { ConfigSet::pinned(m.space(), pinned)? };
    if h.is_empty() {
        return Err(IdmError::EmptyContext);
    }
    verify_docalculus(m, y, z, x, &h, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin;

    #[test]
    fn witsenhausen_theorem_run() {
        let m = builtin("witsenhausen-xor").unwrap();
        let s = |n: &[&str]| m.agent_set(n).unwrap();
        let opts = DocalcOptions { policy_trials: 10, prior_trials: 3, seed: 1, strategy: Some(SampleStrategy::Reparametrized) };
        let r = verify_docalculus(&m, s(&["X3"]), s(&["X4"]), s(&["X0", "X1", "X2"]), &m.full_set(), opts).unwrap();
        assert!(r.separated);
        assert_eq!(r.trials, 30);
        assert_eq!(r.failures, 0, "{:?}", r.failure_examples);
        assert_eq!(r.strongly_solvable, None);
        assert_eq!(r.context_in_scope, Some(true));
        let r = verify_docalculus(&m, s(&["X3"]), s(&["X4"]), s(&["X0", "X1"]), &m.full_set(), opts).unwrap();
        assert!(!r.separated);
        assert!(r.corroboration.is_some());
    }

    #[test]
    fn rule_one_on_context_model() {
        let m = builtin("tikka-context").unwrap();
        let (a, b) = (AgentSet::singleton(1), AgentSet::singleton(2));
        let opts = DocalcOptions { policy_trials: 8, prior_trials: 3, seed: 5, strategy: None };
        let r = verify_rule1_tikka(&m, b, a, AgentSet::empty(), &[(Coord::Decision(0), 0)], opts).unwrap();
        assert!(r.separated && r.trials > 0 && r.failures == 0, "{r:?}");
        assert_eq!(r.context_in_scope, Some(true));
        let r = verify_rule1_tikka(&m, b, a, AgentSet::empty(), &[(Coord::Decision(0), 1)], opts).unwrap();
        assert!(!r.separated);
        let empty = verify_rule1_tikka(&m, b, a, AgentSet::empty(), &[(Coord::Decision(0), 7)], opts);
        assert!(empty.is_err());
    }
}
