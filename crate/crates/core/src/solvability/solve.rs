use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::policy::{Policy, PolicyProfile};
use crate::field::Coord;
use crate::model::WModel;
use crate::{Exec, IdmError, Result};

/// Exhaustive solvability checks enumerate at most this many profiles.
pub const DEFAULT_PROFILE_BUDGET: u128 = 1 << 16;

/// The closed-loop solution ω ↦ (ω, u), with per-ω solution counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionMap {
    /// Number of fixed points per nature index.
    pub multiplicity: Vec<u32>,
    /// Configuration index of the unique fixed point, when there is one.
    pub solution: Vec<Option<usize>>,
    pub solvable: bool,
}

impl SolutionMap {
    /// S_λ(ω), defined only where the solution is unique.
    pub fn config(&self, omega: usize) -> Option<usize> {
        self.solution[omega]
    }

    /// First ω whose solution count differs from one.
    pub fn first_failure(&self) -> Option<(usize, u32)> {
        self.multiplicity.iter().enumerate().find(|(_, &k)| k != 1).map(|(w, &k)| (w, k))
    }
}

pub fn solve(m: &WModel, profile: &PolicyProfile) -> SolutionMap {
    solve_with(m, profile, Exec::default())
}

/// Enumerates ∏ U_a for every ω.
pub fn solve_with(m: &WModel, profile: &PolicyProfile, exec: Exec) -> SolutionMap {
    let sp = m.space();
    let per_omega = exec.map_range(sp.nature_size(), |w| {
        let mut count = 0u32;
        let mut found = None;
        for u in 0..sp.decision_size() {
            let idx = sp.compose(w, u);
            if profile.is_fixed_point(m, idx) {
                count += 1;
                found = Some(idx);
            }
        }
        (count, if count == 1 { found } else { None })
    });
    let (multiplicity, solution): (Vec<_>, Vec<_>) = per_omega.into_iter().unzip();
    let solvable = multiplicity.iter().all(|&k| k == 1);
    SolutionMap { multiplicity, solution, solvable }
}

/// |U_a|^{#atoms(I_a)}, saturating.
pub fn policy_count(m: &WModel, a: usize) -> u128 {
    let u = m.space().decision_space(a).len() as u128;
    let atoms = m.info(a).partition().atom_count();
    let mut c: u128 = 1;
    for _ in 0..atoms {
        c = c.saturating_mul(u);
    }
    c
}

/// All policies of one agent, first atom varying fastest.
pub struct PolicyIter<'a> {
    m: &'a WModel,
    owner: usize,
    next: Option<Vec<usize>>,
    radix: usize,
}

impl Iterator for PolicyIter<'_> {
    type Item = Policy;

    fn next(&mut self) -> Option<Policy> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut carry = true;
        for d in succ.iter_mut() {
            *d += 1;
            if *d < self.radix {
                carry = false;
                break;
            }
            *d = 0;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(Policy::new(self.m, self.owner, cur).expect("in range"))
    }
}

pub fn enumerate_policies(m: &WModel, a: usize, cap: u128) -> Result<(u128, PolicyIter<'_>)> {
    m.check_agent(a)?;
    let count = policy_count(m, a);
    if count > cap {
        return Err(IdmError::CapExceeded { what: "policy count", value: count, cap });
    }
    let atoms = m.info(a).partition().atom_count();
    let radix = m.space().decision_space(a).len();
    Ok((count, PolicyIter { m, owner: a, next: Some(vec![0; atoms]), radix }))
}

/// `n` independent policies, each atom's decision uniform.
pub fn sample_policies(m: &WModel, a: usize, n: usize, seed: u64) -> Result<Vec<Policy>> {
    m.check_agent(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| Policy::random(m, a, &mut rng)).collect())
}

/// λ'_a(ω, u) = λ_a(ω with ω_a replaced by g_a(ω_a), u) for random maps g_a.
/// With local-noise fields this keeps every ω's closed-loop system that of
/// some other ω, so a solvable base stays solvable.
pub fn reparametrize<R: Rng + ?Sized>(m: &WModel, base: &PolicyProfile, rng: &mut R) -> Result<PolicyProfile> {
    let sp = m.space();
    let maps: Vec<Vec<usize>> = (0..m.agent_count())
        .map(|a| {
            let k = sp.nature_space(a).len();
            (0..k).map(|_| rng.gen_range(0..k)).collect()
        })
        .collect();
    let policies = (0..m.agent_count())
        .map(|a| {
            Policy::from_fn(m, a, |i| {
                let w = sp.nature_digit(i, a);
                base.decide(m, a, sp.with_digit(i, Coord::Nature(a), maps[a][w]))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PolicyProfile::new(m, policies)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleStrategy {
    /// Every atom's decision drawn uniformly.
    Uniform,
    /// Random noise reparametrization of the model's attached profile.
    Reparametrized,
}

pub fn sample_profile<R: Rng + ?Sized>(m: &WModel, strategy: SampleStrategy, rng: &mut R) -> Result<PolicyProfile> {
    match (strategy, m.policy()) {
        (SampleStrategy::Reparametrized, Some(base)) => reparametrize(m, base, rng),
        (SampleStrategy::Reparametrized, None) => {
            Err(IdmError::InvalidModel("reparametrized sampling needs an attached profile".into()))
        }
        (SampleStrategy::Uniform, _) => Ok(PolicyProfile::random(m, rng)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolvabilityVerdict {
    /// Every profile was enumerated and solved uniquely.
    SolvableProved { profiles: u128 },
    /// A profile with zero or several solutions at some ω.
    Unsolvable { witness: PolicyProfile, omega: usize, multiplicity: u32, exhaustive: bool },
    /// Too many profiles to enumerate; all sampled ones were solvable.
    Unknown { sampled: usize, profile_space: u128 },
}

pub fn is_model_solvable(m: &WModel, budget: u128, samples: usize, seed: u64) -> SolvabilityVerdict {
    is_model_solvable_with(m, budget, samples, seed, Exec::default())
}

pub fn is_model_solvable_with(m: &WModel, budget: u128, samples: usize, seed: u64, exec: Exec) -> SolvabilityVerdict {
    let counts: Vec<u128> = (0..m.agent_count()).map(|a| policy_count(m, a)).collect();
    let total = counts.iter().fold(1u128, |acc, &c| acc.saturating_mul(c));
    let check = |profile: PolicyProfile| {
        let sol = solve_with(m, &profile, Exec::Sequential);
        sol.first_failure().map(|(omega, multiplicity)| (profile, omega, multiplicity))
    };
    if total <= budget {
        let radices: Vec<usize> = (0..m.agent_count()).map(|a| m.space().decision_space(a).len()).collect();
        let profile_at = |mut k: u128| {
            let policies = (0..m.agent_count())
                .map(|a| {
                    let mut idx = k % counts[a];
                    k /= counts[a];
                    let atoms = m.info(a).partition().atom_count();
                    let table = (0..atoms)
                        .map(|_| {
                            let d = (idx % radices[a] as u128) as usize;
                            idx /= radices[a] as u128;
                            d
                        })
                        .collect();
                    Policy::new(m, a, table).expect("in range")
                })
                .collect();
            PolicyProfile::new(m, policies).expect("well formed")
        };
        match exec.find_first(total as usize, |k| check(profile_at(k as u128))) {
            Some((_, (witness, omega, multiplicity))) => {
                SolvabilityVerdict::Unsolvable { witness, omega, multiplicity, exhaustive: true }
            }
            None => SolvabilityVerdict::SolvableProved { profiles: total },
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let drawn: Vec<PolicyProfile> = (0..samples).map(|_| PolicyProfile::random(m, &mut rng)).collect();
        match exec.find_first(drawn.len(), |k| check(drawn[k].clone())) {
            Some((_, (witness, omega, multiplicity))) => {
                SolvabilityVerdict::Unsolvable { witness, omega, multiplicity, exhaustive: false }
            }
            None => SolvabilityVerdict::Unknown { sampled: samples, profile_space: total },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin, uniform_space, FieldSpec};
    use crate::field::CoordinateMask;
    use crate::AgentSet;

    #[test]
    fn witsenhausen_canonical_is_solvable() {
        let m = builtin("witsenhausen-xor").unwrap();
        let sol = solve(&m, m.policy().unwrap());
        assert!(sol.solvable);
        assert_eq!(sol.multiplicity.len(), 32);
    }

    #[test]
    fn mutual_observation_has_two_solutions() {
        let m = builtin("mutual-observation").unwrap();
        let sol = solve(&m, m.policy().unwrap());
        assert_eq!(sol.multiplicity, vec![2]);
        assert!(!sol.solvable);
        match is_model_solvable(&m, DEFAULT_PROFILE_BUDGET, 10, 0) {
            SolvabilityVerdict::Unsolvable { exhaustive, .. } => assert!(exhaustive),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn policy_counts() {
        let m = builtin("common-cause").unwrap();
        let (count, iter) = enumerate_policies(&m, 2, 1 << 20).unwrap();
        assert_eq!(count, 256);
        let all: Vec<Policy> = iter.collect();
        assert_eq!(all.len(), 256);
        assert_eq!(all.iter().collect::<std::collections::HashSet<_>>().len(), 256);
        let x = builtin("witsenhausen-xor").unwrap();
        assert_eq!(policy_count(&x, 2), 256);
        assert!(enumerate_policies(&x, 0, 1000).is_err());

        let sp = uniform_space(&["a"], 1, 3).unwrap();
        let single = crate::model::WModel::new(sp, vec![FieldSpec::Mask(CoordinateMask::nature_only(AgentSet::singleton(0)))]).unwrap();
        assert_eq!(enumerate_policies(&single, 0, 10).unwrap().0, 3);
        assert_eq!(is_model_solvable(&single, 10, 0, 0), SolvabilityVerdict::SolvableProved { profiles: 3 });
    }

    #[test]
    fn sampling_is_seeded() {
        let m = builtin("witsenhausen-xor").unwrap();
        assert_eq!(sample_policies(&m, 0, 5, 9).unwrap(), sample_policies(&m, 0, 5, 9).unwrap());
        assert!(sample_policies(&m, 0, 0, 9).unwrap().is_empty());
    }

    #[test]
    fn reparametrized_profiles_stay_solvable() {
        let m = builtin("witsenhausen-xor").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = sample_profile(&m, SampleStrategy::Reparametrized, &mut rng).unwrap();
            assert!(solve(&m, &p).solvable);
        }
    }
}
