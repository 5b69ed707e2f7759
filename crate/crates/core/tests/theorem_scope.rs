//! Separation does not imply independence outside the supported hypotheses:
//! a context pinning a collider, and a profile that is solvable although
//! the model is not.

use idm_core::field::{ConfigSet, Coord, CoordinateMask};
use idm_core::model::{uniform_space, FieldSpec, WModel};
use idm_core::precedence::topologically_separated;
use idm_core::probability::{cond_independent, context_in_scope, pushforward, verify_docalculus, DocalcOptions};
use idm_core::solvability::{find_causal_ordering, solve, CausalityLimits, PolicyProfile, SampleStrategy};
use idm_core::AgentSet;

fn model(fields: Vec<CoordinateMask>) -> WModel {
    let space = uniform_space(&["y", "z", "c"], 2, 2).unwrap();
    WModel::new(space, fields.into_iter().map(FieldSpec::Mask).collect()).unwrap()
}

const Y: usize = 0;
const Z: usize = 1;
const C: usize = 2;

#[test]
fn pinned_collider_couples_separated_agents() {
    let m = model(vec![
        CoordinateMask::local(Y, AgentSet::empty()),
        CoordinateMask::local(Z, AgentSet::empty()),
        CoordinateMask::local(C, AgentSet::from_iter([Y, Z])),
    ]);
    let sp = m.space().clone();
    let profile = PolicyProfile::from_fn(&m, |a, i| match a {
        C => sp.decision_digit(i, Y) ^ sp.decision_digit(i, Z),
        _ => sp.nature_digit(i, a),
    })
    .unwrap();
    let h = ConfigSet::pinned(&sp, &[(Coord::Decision(C), 0)]).unwrap();
    let (y, z) = (AgentSet::singleton(Y), AgentSet::singleton(Z));
    let cert = topologically_separated(&m, y, z, AgentSet::empty(), &h).unwrap().expect("separated");
    assert_eq!((cert.closure_y, cert.closure_z), (y, z));
    assert!(find_causal_ordering(&m, CausalityLimits::default()).unwrap().is_some());
    assert!(!context_in_scope(&m, &h, cert.closure_y, cert.closure_z));

    let d = pushforward(&m, &profile, &m.prior_or_uniform()).unwrap();
    let dec = CoordinateMask::decisions;
    let ci = cond_independent(&d, &dec(y), &dec(z), &CoordinateMask::empty(), &h).unwrap();
    assert!(!ci.independent);
    let full = cond_independent(&d, &dec(y), &dec(z), &CoordinateMask::empty(), &m.full_set()).unwrap();
    assert!(full.independent);

    let m = m.with_policy(profile).unwrap();
    let opts = DocalcOptions { policy_trials: 4, prior_trials: 2, seed: 3, strategy: Some(SampleStrategy::Reparametrized) };
    let r = verify_docalculus(&m, y, z, AgentSet::empty(), &h, opts).unwrap();
    assert!(r.failures > 0);
    assert_eq!(r.context_in_scope, Some(false));
    assert_eq!(r.strongly_solvable, Some(true));
}

#[test]
fn solvable_profile_of_unsolvable_model_couples_separated_agents() {
    // y and z may keep either decision; c has a fixed point only when
    // u_y = u_z = ω_c, which selects a unique closed-loop solution.
    let m = model(vec![
        CoordinateMask::local(Y, AgentSet::singleton(Y)),
        CoordinateMask::local(Z, AgentSet::singleton(Z)),
        CoordinateMask::local(C, AgentSet::from_iter([Y, Z, C])),
    ]);
    let sp = m.space().clone();
    let profile = PolicyProfile::from_fn(&m, |a, i| match a {
        C => {
            let agree = sp.decision_digit(i, Y) == sp.nature_digit(i, C) && sp.decision_digit(i, Z) == sp.nature_digit(i, C);
            if agree {
                0
            } else {
                1 - sp.decision_digit(i, C)
            }
        }
        _ => sp.decision_digit(i, a),
    })
    .unwrap();
    assert!(solve(&m, &profile).solvable);
    assert!(find_causal_ordering(&m, CausalityLimits::default()).unwrap().is_none());

    let (y, z) = (AgentSet::singleton(Y), AgentSet::singleton(Z));
    let h = m.full_set();
    let cert = topologically_separated(&m, y, z, AgentSet::empty(), &h).unwrap().expect("separated");
    assert!(cert.closure_y.is_disjoint(cert.closure_z));
    assert!(context_in_scope(&m, &h, cert.closure_y, cert.closure_z));
    let d = pushforward(&m, &profile, &m.prior_or_uniform()).unwrap();
    let dec = CoordinateMask::decisions;
    let ci = cond_independent(&d, &dec(cert.closure_y), &dec(cert.closure_z), &CoordinateMask::empty(), &h).unwrap();
    assert!(!ci.independent);

    let m = m.with_policy(profile).unwrap();
    let opts = DocalcOptions { policy_trials: 2, prior_trials: 2, seed: 0, strategy: Some(SampleStrategy::Reparametrized) };
    let r = verify_docalculus(&m, y, z, AgentSet::empty(), &h, opts).unwrap();
    assert!(r.failures > 0);
    assert_eq!(r.strongly_solvable, None);
}
