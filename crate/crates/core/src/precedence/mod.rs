//! Conditional precedence P_{W,H}, topological closures and topological
//! separation.
//!
//! `b ∈ P_{W,H} a` iff b belongs to every agent set B such that I_a traced on
//! H is contained in ℱ ⊗ 𝒰_{B∪W} traced on H. Validity of B is monotone in B,
//! so b is in the intersection iff B = A∖{b} alone is invalid; [`precedes`]
//! uses that single test per pair and [`precedes_oracle`] enumerates all B.

mod relation;

use serde::{Deserialize, Serialize};

pub use relation::PrecedenceRelation;

use crate::field::{field_subset_on, ConfigSet, CoordinateMask};
use crate::model::WModel;
use crate::{AgentSet, Exec, IdmError, Result};

/// Default agent cap for the subset-enumeration oracle.
pub const ORACLE_AGENT_CAP: usize = 12;

fn check_context(m: &WModel, w: AgentSet, h: &ConfigSet) -> Result<()> {
    m.check_set(w)?;
    if **h.space() != **m.space() {
        return Err(IdmError::SpaceMismatch);
    }
    if h.is_empty() {
        return Err(IdmError::EmptyContext);
    }
    Ok(())
}

/// I_a ∩ H ⊆ H_{B∪W} ∩ H.
fn valid(m: &WModel, a: usize, b: AgentSet, w: AgentSet, h: &ConfigSet) -> bool {
    let mask = CoordinateMask::product_field(m.agent_count(), b.union(w));
    field_subset_on(m.info(a).partition(), &mask, h).expect("checked context")
}

pub fn precedes(m: &WModel, w: AgentSet, h: &ConfigSet) -> Result<PrecedenceRelation> {
    precedes_with(m, w, h, Exec::default())
}

pub fn precedes_with(m: &WModel, w: AgentSet, h: &ConfigSet, exec: Exec) -> Result<PrecedenceRelation> {
    check_context(m, w, h)?;
    let n = m.agent_count();
    let all = m.all_agents();
    let cells = exec.map_range(n * n, |k| {
        let (a, b) = (k / n, k % n);
        !w.contains(b) && !valid(m, a, all.without(b), w, h)
    });
    let preds = (0..n).map(|a| (0..n).filter(|&b| cells[a * n + b]).collect()).collect();
    Ok(PrecedenceRelation::from_preds(preds))
}

/// Literal intersection over all valid B ⊆ A.
pub fn precedes_oracle(m: &WModel, w: AgentSet, h: &ConfigSet, cap: usize) -> Result<PrecedenceRelation> {
    check_context(m, w, h)?;
    let n = m.agent_count();
    if n > cap {
        return Err(IdmError::CapExceeded { what: "agents for the precedence oracle", value: n as u128, cap: cap as u128 });
    }
    let preds = (0..n)
        .map(|a| {
            (0..1u64 << n)
                .map(AgentSet::from_bits)
                .filter(|&b| valid(m, a, b, w, h))
                .fold(m.all_agents(), AgentSet::intersection)
        })
        .collect();
    Ok(PrecedenceRelation::from_preds(preds))
}

/// Agents whose own P_{W,H} a, taken as B, is not valid. Empty whenever the
/// valid sets of every agent are closed under intersection.
pub fn intersection_failures(m: &WModel, w: AgentSet, h: &ConfigSet) -> Result<AgentSet> {
    let rel = precedes(m, w, h)?;
    Ok((0..m.agent_count()).filter(|&a| !valid(m, a, rel.preds(a), w, h)).collect())
}

pub fn closure(m: &WModel, b: AgentSet, w: AgentSet, h: &ConfigSet) -> Result<AgentSet> {
    m.check_set(b)?;
    Ok(precedes(m, w, h)?.closure(b))
}

pub fn is_closed(m: &WModel, b: AgentSet, w: AgentSet, h: &ConfigSet) -> Result<bool> {
    m.check_set(b)?;
    Ok(precedes(m, w, h)?.is_closed(b))
}

pub fn is_open(m: &WModel, b: AgentSet, w: AgentSet, h: &ConfigSet) -> Result<bool> {
    is_closed(m, b.complement(m.agent_count()), w, h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Splitting {
    pub w_y: AgentSet,
    pub w_z: AgentSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub splitting: Splitting,
    /// cl(Y ∪ W_Y)
    pub closure_y: AgentSet,
    /// cl(Z ∪ W_Z)
    pub closure_z: AgentSet,
}

pub fn check_disjoint(y: AgentSet, z: AgentSet, w: AgentSet) -> Result<()> {
    for (s, t, what) in [(y, z, "Y and Z"), (y, w, "Y and W"), (z, w, "Z and W")] {
        if !s.is_disjoint(t) {
            return Err(IdmError::Overlap(what.to_string()));
        }
    }
    Ok(())
}

pub fn topologically_separated(
    m: &WModel,
    y: AgentSet,
    z: AgentSet,
    w: AgentSet,
    h: &ConfigSet,
) -> Result<Option<SeparationCertificate>> {
    topologically_separated_with(m, y, z, w, h, Exec::default())
}

pub fn topologically_separated_with(
    m: &WModel,
    y: AgentSet,
    z: AgentSet,
    w: AgentSet,
    h: &ConfigSet,
    exec: Exec,
) -> Result<Option<SeparationCertificate>> {
    m.check_set(y.union(z))?;
    check_disjoint(y, z, w)?;
    let rel = precedes_with(m, w, h, exec)?;
    Ok(separate_by_relation(&rel, y, z, w, exec))
}

/// Splitting search over a precomputed P_{W,H}: subsets W_Y of W in
/// increasing binary order over W's members; the first success is returned.
pub fn separate_by_relation(
    rel: &PrecedenceRelation,
    y: AgentSet,
    z: AgentSet,
    w: AgentSet,
    exec: Exec,
) -> Option<SeparationCertificate> {
    let count = 1usize << w.len();
    exec.find_first(count, |i| {
        let w_y = w.subset_by_index(i as u64);
        let w_z = w.difference(w_y);
        let closure_y = rel.closure(y.union(w_y));
        let closure_z = rel.closure(z.union(w_z));
        closure_y
            .is_disjoint(closure_z)
            .then_some(SeparationCertificate { splitting: Splitting { w_y, w_z }, closure_y, closure_z })
    })
    .map(|(_, c)| c)
}

/// Rejects certificates whose splitting or closures do not match the query.
pub fn check_certificate(
    m: &WModel,
    y: AgentSet,
    z: AgentSet,
    w: AgentSet,
    h: &ConfigSet,
    cert: &SeparationCertificate,
) -> Result<()> {
    check_disjoint(y, z, w)?;
    let s = cert.splitting;
    let bad = |why: &str| Err(IdmError::InvalidCertificate(why.to_string()));
    if !s.w_y.is_disjoint(s.w_z) || s.w_y.union(s.w_z) != w {
        return bad("splitting does not partition W");
    }
    if !cert.closure_y.is_disjoint(cert.closure_z) {
        return bad("closures overlap");
    }
    let rel = precedes(m, w, h)?;
    if rel.closure(y.union(s.w_y)) != cert.closure_y || rel.closure(z.union(s.w_z)) != cert.closure_z {
        return bad("closures do not match the model");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Coord;
    use crate::model::builtin;

    fn set(m: &WModel, names: &[&str]) -> AgentSet {
        m.agent_set(names).unwrap()
    }

    #[test]
    fn witsenhausen_precedence() {
        let m = builtin("witsenhausen-xor").unwrap();
        let h = m.full_set();
        let rel = precedes(&m, AgentSet::empty(), &h).unwrap();
        assert_eq!(rel.preds(0), set(&m, &["X1", "X2", "X3"]));
        assert_eq!(rel.preds(1), set(&m, &["X0", "X2", "X4"]));
        assert_eq!(rel.preds(2), set(&m, &["X0", "X1"]));
        assert!(rel.preds(3).is_empty() && rel.preds(4).is_empty());
        assert_eq!(rel, precedes_oracle(&m, AgentSet::empty(), &h, ORACLE_AGENT_CAP).unwrap());
        assert!(!is_closed(&m, set(&m, &["X2"]), AgentSet::empty(), &h).unwrap());
        assert!(is_closed(&m, m.all_agents(), AgentSet::empty(), &h).unwrap());
    }

    #[test]
    fn context_specific_precedence() {
        let m = builtin("tikka-context").unwrap();
        let (a, b) = (1, 2);
        let h0 = ConfigSet::pinned(m.space(), &[(Coord::Decision(0), 0)]).unwrap();
        let rel0 = precedes(&m, AgentSet::empty(), &h0).unwrap();
        assert!(!rel0.precedes(a, b));
        let rel1 = precedes(&m, AgentSet::empty(), &h0.complement()).unwrap();
        assert!(rel1.precedes(a, b));
        assert_eq!(rel0, precedes_oracle(&m, AgentSet::empty(), &h0, 12).unwrap());
        assert!(matches!(precedes(&m, AgentSet::empty(), &ConfigSet::empty(m.space())), Err(IdmError::EmptyContext)));
    }

    #[test]
    fn builtin_separations() {
        let m = builtin("jpcbh").unwrap();
        let h = m.full_set();
        let w = set(&m, &["Y1", "Y2"]);
        let cert = topologically_separated(&m, set(&m, &["X1"]), set(&m, &["X2"]), w, &h).unwrap().unwrap();
        assert_eq!(cert.splitting.w_y, set(&m, &["Y1"]));
        assert_eq!(cert.closure_y, set(&m, &["X1", "Y1", "xi1"]));
        assert_eq!(cert.closure_z, set(&m, &["X2", "Y2", "xi2"]));
        assert_eq!(closure(&m, set(&m, &["X1", "Y1"]), w, &h).unwrap(), cert.closure_y);

        let x = builtin("witsenhausen-xor").unwrap();
        let h = x.full_set();
        let (y, z) = (set(&x, &["X3"]), set(&x, &["X4"]));
        let cert = topologically_separated(&x, y, z, set(&x, &["X0", "X1", "X2"]), &h).unwrap().unwrap();
        assert_eq!(cert.splitting.w_y, set(&x, &["X0"]));
        assert_eq!(cert.splitting.w_z, set(&x, &["X1", "X2"]));
        assert!(topologically_separated(&x, y, z, set(&x, &["X0", "X1"]), &h).unwrap().is_none());
        assert!(matches!(topologically_separated(&x, y, y, AgentSet::empty(), &h), Err(IdmError::Overlap(_))));
    }

    #[test]
    fn kuh_closure() {
        let m = builtin("kuh").unwrap();
        let w = set(&m, &["W"]);
        let cl = closure(&m, set(&m, &["Y1"]).union(w), w, &m.full_set()).unwrap();
        assert_eq!(cl, set(&m, &["Y1", "W", "X3"]));
    }
}
