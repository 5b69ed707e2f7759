//! Named example models.
//!
//! | name | shape |
//! |---|---|
//! | `common-cause` | Z → T, Z → Y, T → Y |
//! | `kuh` | seven-node DAG with a hidden-looking common parent W |
//! | `jpcbh` | ξ_i → X_i, ξ_i → Y_i, Y_1 ⇄ Y_2, Y_1 → X_2, Y_2 → X_1 |
//! | `witsenhausen-xor` | cyclic XOR system on X0..X4, noise mass 1/10 on 1 |
//! | `tikka-context` | s → a, and a → b live only when u_s = 1 |
//! | `spirtes-discrete` | Z = W·Y + R_Z, W = Z·X + R_W clamped to {-1,0,1} |
//! | `mutual-observation` | x = y, y = x with trivial noise |
//!
//! The acyclic and cyclic graph shapes are exposed through [`builtin_dag`].

use std::sync::Arc;

use super::graph::Dag;
use super::scm::{scm_to_idm, ScmSpec};
use super::{FieldSpec, Prior, Provenance, WModel};
use crate::field::{ConfigSpace, CoordinateMask, FiniteSpace, Partition};
use crate::probability::{rat, Rational};
use crate::solvability::PolicyProfile;
use crate::{AgentSet, IdmError, Result};

pub const BUILTIN_NAMES: [&str; 7] = [
    "common-cause",
    "kuh",
    "jpcbh",
    "witsenhausen-xor",
    "tikka-context",
    "spirtes-discrete",
    "mutual-observation",
];

pub fn builtin_names() -> &'static [&'static str] {
    &BUILTIN_NAMES
}

pub fn builtin(name: &str) -> Result<WModel> {
    match name {
        "common-cause" => common_cause(),
        "kuh" => parity_dag("kuh", Provenance::Reconstructed),
        "jpcbh" => jpcbh(),
        "witsenhausen-xor" => witsenhausen_xor(),
        "tikka-context" => tikka_context(),
        "spirtes-discrete" => spirtes_discrete(),
        "mutual-observation" => mutual_observation(),
        _ => Err(IdmError::UnknownBuiltin(name.to_string())),
    }
}

/// The directed graph behind a builtin (possibly cyclic).
pub fn builtin_dag(name: &str) -> Result<Dag> {
    match name {
        "common-cause" => Dag::from_names(&["Z", "T", "Y"], &[("Z", "T"), ("Z", "Y"), ("T", "Y")]),
        "kuh" => Dag::from_names(
            &["X1", "X2", "X3", "X4", "Y1", "Y2", "W"],
            &[
                ("X3", "Y1"),
                ("W", "Y1"),
                ("W", "Y2"),
                ("Y1", "X1"),
                ("Y2", "X1"),
                ("Y1", "X2"),
                ("Y2", "X2"),
                ("W", "X4"),
                ("X4", "X2"),
            ],
        ),
        "jpcbh" => Dag::from_names(
            &["xi1", "xi2", "X1", "X2", "Y1", "Y2"],
            &[
                ("xi1", "X1"),
                ("xi2", "X2"),
                ("xi1", "Y1"),
                ("xi2", "Y2"),
                ("Y2", "X1"),
                ("Y1", "X2"),
                ("Y2", "Y1"),
                ("Y1", "Y2"),
            ],
        ),
        "witsenhausen-xor" => Dag::from_names(
            &["X0", "X1", "X2", "X3", "X4"],
            &[
                ("X1", "X0"),
                ("X2", "X0"),
                ("X3", "X0"),
                ("X0", "X1"),
                ("X2", "X1"),
                ("X4", "X1"),
                ("X0", "X2"),
                ("X1", "X2"),
            ],
        ),
        "tikka-context" => Dag::from_names(&["s", "a", "b"], &[("s", "a"), ("s", "b"), ("a", "b")]),
        "spirtes-discrete" => {
            Dag::from_names(&["X", "Y", "Z", "W"], &[("Y", "Z"), ("W", "Z"), ("X", "W"), ("Z", "W")])
        }
        "mutual-observation" => Dag::from_names(&["x", "y"], &[("x", "y"), ("y", "x")]),
        _ => Err(IdmError::UnknownBuiltin(name.to_string())),
    }
}

fn binary_space(names: &[String]) -> Result<Arc<ConfigSpace>> {
    ConfigSpace::new(
        names.to_vec(),
        names.iter().map(|s| FiniteSpace::binary(format!("Omega_{s}"))).collect(),
        names.iter().map(|s| FiniteSpace::binary(format!("U_{s}"))).collect(),
    )
}

fn scm_from_dag(g: &Dag, f: impl Fn(usize, usize, &[usize]) -> usize) -> Result<WModel> {
    let space = binary_space(g.nodes())?;
    let parents = (0..g.len()).map(|a| g.parents(a)).collect();
    scm_to_idm(space.clone(), &ScmSpec::new(&space, parents, f)?)
}

fn xor_all(w: usize, parents: &[usize]) -> usize {
    parents.iter().fold(w, |acc, p| acc ^ p)
}

fn common_cause() -> Result<WModel> {
    let g = builtin_dag("common-cause")?;
    // Z = ω_Z, T = u_Z ⊕ ω_T, Y = (u_Z ∧ u_T) ⊕ ω_Y
    let m = scm_from_dag(&g, |a, w, p| match a {
        0 => w,
        1 => p[0] ^ w,
        _ => (p[0] & p[1]) ^ w,
    })?;
    let prior = Prior::bernoulli(m.space(), &[rat(1, 2), rat(1, 4), rat(1, 5)])?;
    Ok(m.with_prior(prior)?.with_meta("common-cause", Provenance::Paper))
}

/// u_a = ω_a ⊕ (parity of the parents' decisions), uniform noise.
fn parity_dag(name: &str, provenance: Provenance) -> Result<WModel> {
    let g = builtin_dag(name)?;
    let m = scm_from_dag(&g, |_, w, p| xor_all(w, p))?;
    let prior = Prior::uniform(m.space());
    Ok(m.with_prior(prior)?.with_meta(name, provenance))
}

fn jpcbh() -> Result<WModel> {
    let g = builtin_dag("jpcbh")?;
    // Parents in agent order: X1 [xi1, Y2], X2 [xi2, Y1], Y1 [xi1, Y2], Y2 [xi2, Y1].
    // Y1 ignores Y2 so that the canonical profile is solvable.
    let m = scm_from_dag(&g, |a, w, p| match a {
        4 => w ^ p[0],
        0 | 1 => w,
        _ => xor_all(w, p),
    })?;
    let prior = Prior::uniform(m.space());
    Ok(m.with_prior(prior)?.with_meta("jpcbh", Provenance::Paper))
}

fn witsenhausen_xor() -> Result<WModel> {
    let names: Vec<String> = (0..5).map(|i| format!("X{i}")).collect();
    let space = binary_space(&names)?;
    let set = |xs: &[usize]| xs.iter().copied().collect::<AgentSet>();
    let parents = vec![set(&[1, 2, 3]), set(&[0, 2, 4]), set(&[0, 1]), set(&[]), set(&[])];
    let spec = ScmSpec::new(&space, parents, |a, n, p| match a {
        // X0 = (X1 ∧ ¬X2) ⊕ N0 ⊕ X3
        0 => (p[0] & (1 - p[1])) ^ n ^ p[2],
        // X1 = (X2 ∧ ¬X0) ⊕ N1 ⊕ X4, parents ordered (X0, X2, X4)
        1 => (p[1] & (1 - p[0])) ^ n ^ p[2],
        // X2 = (X0 ∧ ¬X1) ⊕ N2
        2 => (p[0] & (1 - p[1])) ^ n,
        _ => n,
    })?;
    let m = scm_to_idm(space.clone(), &spec)?;
    let prior = Prior::bernoulli(&space, &[rat(1, 10), rat(1, 10), rat(1, 10), rat(1, 10), rat(1, 10)])?;
    Ok(m.with_prior(prior)?.with_meta("witsenhausen-xor", Provenance::Paper))
}

fn tikka_context() -> Result<WModel> {
    let names: Vec<String> = ["s", "a", "b"].iter().map(|s| s.to_string()).collect();
    let space = binary_space(&names)?;
    // b sees u_a only when u_s = 1
    let field_b = Partition::from_index_labels(&space, |i| {
        let us = space.decision_digit(i, 0);
        (space.nature_digit(i, 2), us, us * space.decision_digit(i, 1))
    });
    let m = WModel::new(
        space.clone(),
        vec![
            FieldSpec::Mask(CoordinateMask::local(0, AgentSet::empty())),
            FieldSpec::Mask(CoordinateMask::local(1, AgentSet::singleton(0))),
            FieldSpec::Observation(field_b),
        ],
    )?;
    let profile = PolicyProfile::from_fn(&m, |a, i| {
        let w = space.nature_digit(i, a);
        match a {
            0 => w,
            1 => w ^ space.decision_digit(i, 0),
            _ => w ^ (space.decision_digit(i, 0) & space.decision_digit(i, 1)),
        }
    })?;
    let prior = Prior::bernoulli(&space, &[rat(1, 2), rat(1, 3), rat(1, 4)])?;
    Ok(m.with_policy(profile)?.with_prior(prior)?.with_meta("tikka-context", Provenance::Paper))
}

fn spirtes_discrete() -> Result<WModel> {
    let names: Vec<String> = ["X", "Y", "Z", "W"].iter().map(|s| s.to_string()).collect();
    let tern = |id: String| FiniteSpace::new(id, vec!["-1".into(), "0".into(), "1".into()]);
    let space = ConfigSpace::new(
        names.clone(),
        names.iter().map(|s| tern(format!("Omega_{s}"))).collect::<Result<_>>()?,
        names.iter().map(|s| tern(format!("U_{s}"))).collect::<Result<_>>()?,
    )?;
    let g = builtin_dag("spirtes-discrete")?;
    let parents = (0..4).map(|a| g.parents(a)).collect();
    let val = |i: usize| i as i64 - 1;
    let idx = |v: i64| (v.clamp(-1, 1) + 1) as usize;
    // parents in agent order: Z [Y, W], W [X, Z]
    let spec = ScmSpec::new(&space, parents, |a, r, p| match a {
        2 | 3 => idx(val(p[0]) * val(p[1]) + val(r)),
        _ => r,
    })?;
    let m = scm_to_idm(space.clone(), &spec)?;
    let prior = Prior::uniform(&space);
    Ok(m.with_prior(prior)?.with_meta("spirtes-discrete", Provenance::Reconstructed))
}

fn mutual_observation() -> Result<WModel> {
    let names = vec!["x".to_string(), "y".to_string()];
    let space = ConfigSpace::new(
        names.clone(),
        names.iter().map(|s| FiniteSpace::range(format!("Omega_{s}"), 1)).collect(),
        names.iter().map(|s| FiniteSpace::binary(format!("U_{s}"))).collect(),
    )?;
    let spec = ScmSpec::new(&space, vec![AgentSet::singleton(1), AgentSet::singleton(0)], |_, _, p| p[0])?;
    let m = scm_to_idm(space.clone(), &spec)?;
    let prior = Prior::new(&space, vec![vec![Rational::from_integer(1.into())]; 2])?;
    Ok(m.with_prior(prior)?.with_meta("mutual-observation", Provenance::Paper))
}
