use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::policy::PolicyProfile;
use super::solve::solve_with;
use crate::field::{ConfigSet, CoordinateMask, MaskKeyer};
use crate::model::WModel;
use crate::precedence::{check_certificate, SeparationCertificate};
use crate::{AgentSet, Exec, IdmError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyCheck {
    /// e.g. `u[Ỹ] = f(ω[Ỹ], u[W_Z])`
    pub statement: String,
    pub holds: bool,
    /// Two nature points with equal inputs and different outputs.
    pub counterexample: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub y_tilde: AgentSet,
    pub z_tilde: AgentSet,
    pub rest: AgentSet,
    /// |{ω : S_λ(ω) ∈ H}|
    pub domain_size: usize,
    pub vacuous: bool,
    pub checks: Vec<DependencyCheck>,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Checks on S = {ω : S_λ(ω) ∈ H} that u_Ỹ is a function of (ω_Ỹ, u_{W_Z}),
/// u_Z̃ of (ω_Z̃, u_{W_Y}) and u_R of (ω_R, u_{Ỹ∪Z̃}).
#[allow(clippy::too_many_arguments)]
pub fn verify_factorization(
    m: &WModel,
    profile: &PolicyProfile,
    h: &ConfigSet,
    cert: &SeparationCertificate,
    y: AgentSet,
    z: AgentSet,
    w: AgentSet,
) -> Result<FactorizationReport> {
    let sol = solve_with(m, profile, Exec::default());
    if let Some((omega, multiplicity)) = sol.first_failure() {
        return Err(IdmError::Unsolvable { omega, multiplicity });
    }
    check_certificate(m, y, z, w, h, cert)?;
    let sp = m.space();
    let n = m.agent_count();
    let (yt, zt) = (cert.closure_y, cert.closure_z);
    let rest = AgentSet::full(n).difference(yt.union(zt));
    let domain: Vec<usize> = (0..sp.nature_size()).filter_map(|w| sol.config(w)).filter(|&i| h.contains(i)).collect();

    let names = |s: AgentSet| m.agent_names(s).join(",");
    let check = |out: AgentSet, noise: AgentSet, inputs: AgentSet| {
        let key = MaskKeyer::new(sp, &CoordinateMask::new(noise, inputs));
        let val = MaskKeyer::new(sp, &CoordinateMask::decisions(out));
        let mut seen: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut counterexample = None;
        for &i in &domain {
            let (k, v) = (key.key(i), val.key(i));
            match seen.get(&k) {
                Some(&(v0, i0)) if v0 != v => {
                    counterexample = Some((sp.describe(i0), sp.describe(i)));
                    break;
                }
                Some(_) => {}
                None => {
                    seen.insert(k, (v, i));
                }
            }
        }
        DependencyCheck {
            statement: format!("u[{}] = f(ω[{}], u[{}])", names(out), names(noise), names(inputs)),
            holds: counterexample.is_none(),
            counterexample,
        }
    };
    let checks = vec![
        check(yt, yt, cert.splitting.w_z),
        check(zt, zt, cert.splitting.w_y),
        check(rest, rest, yt.union(zt)),
    ];
    Ok(FactorizationReport {
        y_tilde: yt,
        z_tilde: zt,
        rest,
        domain_size: domain.len(),
        vacuous: domain.is_empty(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin;
    use crate::precedence::{topologically_separated, Splitting};

    #[test]
    fn witsenhausen_factorizes() {
        let m = builtin("witsenhausen-xor").unwrap();
        let h = m.full_set();
        let (y, z, w) = (m.agent_set(&["X3"]).unwrap(), m.agent_set(&["X4"]).unwrap(), m.agent_set(&["X0", "X1", "X2"]).unwrap());
        let cert = topologically_separated(&m, y, z, w, &h).unwrap().unwrap();
        let r = verify_factorization(&m, m.policy().unwrap(), &h, &cert, y, z, w).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.domain_size, 32);

        let bogus = SeparationCertificate {
            splitting: Splitting { w_y: w, w_z: AgentSet::empty() },
            closure_y: m.all_agents(),
            closure_z: z,
        };
        assert!(matches!(
            verify_factorization(&m, m.policy().unwrap(), &h, &bogus, y, z, w),
            Err(IdmError::InvalidCertificate(_))
        ));
    }
}
