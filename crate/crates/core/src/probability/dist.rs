use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::field::{ConfigSet, ConfigSpace, Coord, CoordinateMask};
use crate::model::{Prior, WModel};
use crate::solvability::{solve_with, PolicyProfile};
use crate::{Exec, IdmError, Result};

/// A probability mass function on configurations with exact rational masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDist {
    space: Arc<ConfigSpace>,
    masses: BTreeMap<usize, Rational>,
}

impl ExactDist {
    /// Drops zero masses; the total must be exactly one.
    pub fn new(space: Arc<ConfigSpace>, masses: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, p) in masses {
            if i >= space.size() {
                return Err(IdmError::SpaceMismatch);
            }
            if p < Rational::zero() {
                return Err(IdmError::InvalidProbability(format!("negative mass {p}")));
            }
            *out.entry(i).or_insert_with(Rational::zero) += p;
        }
        out.retain(|_, p| !p.is_zero());
        let total: Rational = out.values().sum();
        if total != Rational::from_integer(1.into()) {
            return Err(IdmError::InvalidProbability(format!("total mass {total}")));
        }
        Ok(ExactDist { space, masses: out })
    }

    pub fn space(&self) -> &Arc<ConfigSpace> {
        &self.space
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.masses.iter().map(|(&i, p)| (i, p))
    }

    pub fn mass(&self, idx: usize) -> Rational {
        self.masses.get(&idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mass_of(&self, h: &ConfigSet) -> Rational {
        self.support().filter(|(i, _)| h.contains(*i)).map(|(_, p)| p).sum()
    }

    fn key(&self, mask: &CoordinateMask, idx: usize) -> Vec<usize> {
        mask.coords().map(|c| self.space.digit(idx, c)).collect()
    }
}

/// Q_λ = ℙ ∘ S_λ⁻¹.
pub fn pushforward(m: &WModel, profile: &PolicyProfile, prior: &Prior) -> Result<ExactDist> {
    pushforward_with(m, profile, prior, Exec::default())
}

pub fn pushforward_with(m: &WModel, profile: &PolicyProfile, prior: &Prior, exec: Exec) -> Result<ExactDist> {
    let sp = m.space();
    Prior::new(sp, prior.masses().to_vec())?;
    let sol = solve_with(m, profile, exec);
    if let Some((omega, multiplicity)) = sol.first_failure() {
        return Err(IdmError::Unsolvable { omega, multiplicity });
    }
    let parts = exec.map_range(sp.nature_size(), |w| {
        let p = prior.nature_prob(sp, w);
        (sol.config(w).expect("solvable"), p)
    });
    ExactDist::new(sp.clone(), parts)
}

#[derive(Clone, Debug)]
pub struct CondQuery {
    pub target: CoordinateMask,
    pub given: CoordinateMask,
    pub context: ConfigSet,
}

/// Rows keyed by the given coordinates' values (in mask order), each a
/// distribution over the target coordinates' values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondTable {
    pub target: CoordinateMask,
    pub given: CoordinateMask,
    pub rows: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, Rational>>,
    /// The context had zero mass; no rows.
    pub empty_context: bool,
}

impl CondTable {
    /// P(target = t | given = g, H), or `None` when the row is undefined.
    pub fn prob(&self, given: &[usize], target: &[usize]) -> Option<Rational> {
        self.rows.get(given).map(|r| r.get(target).cloned().unwrap_or_else(Rational::zero))
    }
}

pub fn conditional(d: &ExactDist, q: &CondQuery) -> Result<CondTable> {
    if **q.context.space() != **d.space() {
        return Err(IdmError::SpaceMismatch);
    }
    d.space.check_mask(&q.target)?;
    d.space.check_mask(&q.given)?;
    let mut rows: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, Rational>> = BTreeMap::new();
    for (i, p) in d.support().filter(|(i, _)| q.context.contains(*i)) {
        *rows.entry(d.key(&q.given, i)).or_default().entry(d.key(&q.target, i)).or_insert_with(Rational::zero) += p;
    }
    for row in rows.values_mut() {
        let total: Rational = row.values().sum();
        for v in row.values_mut() {
            *v /= &total;
        }
    }
    Ok(CondTable { target: q.target, given: q.given, empty_context: rows.is_empty(), rows })
}

fn render(space: &ConfigSpace, mask: &CoordinateMask, vals: &[usize]) -> String {
    mask.coords()
        .zip(vals)
        .map(|(c, &v)| {
            let (prefix, a) = match c {
                Coord::Nature(a) => ("ω_", a),
                Coord::Decision(a) => ("", a),
            };
            format!("{prefix}{}={}", space.agent_name(a), space.coord_space(c).label(v))
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiWitness {
    pub given: String,
    pub a: String,
    pub b: String,
    /// P(a, b | given, H)
    pub joint: String,
    /// P(a | given, H) · P(b | given, H)
    pub product: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiOutcome {
    pub independent: bool,
    pub witness: Option<CiWitness>,
}

type Marginals = BTreeMap<Vec<usize>, Rational>;

/// Exact test of A ⟂ B | given within H.
pub fn cond_independent(
    d: &ExactDist,
    a: &CoordinateMask,
    b: &CoordinateMask,
    given: &CoordinateMask,
    h: &ConfigSet,
) -> Result<CiOutcome> {
    if **h.space() != **d.space() {
        return Err(IdmError::SpaceMismatch);
    }
    for m in [a, b, given] {
        d.space.check_mask(m)?;
    }
    let mut groups: BTreeMap<Vec<usize>, (Rational, Marginals, Marginals, BTreeMap<(Vec<usize>, Vec<usize>), Rational>)> =
        BTreeMap::new();
    for (i, p) in d.support().filter(|(i, _)| h.contains(*i)) {
        let g = groups.entry(d.key(given, i)).or_insert_with(|| (Rational::zero(), BTreeMap::new(), BTreeMap::new(), BTreeMap::new()));
        let (ka, kb) = (d.key(a, i), d.key(b, i));
        g.0 += p;
        *g.1.entry(ka.clone()).or_insert_with(Rational::zero) += p;
        *g.2.entry(kb.clone()).or_insert_with(Rational::zero) += p;
        *g.3.entry((ka, kb)).or_insert_with(Rational::zero) += p;
    }
    if groups.is_empty() {
        return Err(IdmError::EmptyContext);
    }
    for (gk, (total, ma, mb, joint)) in &groups {
        for (ka, pa) in ma {
            for (kb, pb) in mb {
                let j = joint.get(&(ka.clone(), kb.clone())).cloned().unwrap_or_else(Rational::zero);
                if &j * total != pa * pb {
                    let sp = &d.space;
                    let t2 = total * total;
                    return Ok(CiOutcome {
                        independent: false,
                        witness: Some(CiWitness {
                            given: render(sp, given, gk),
                            a: render(sp, a, ka),
                            b: render(sp, b, kb),
                            joint: super::format_rational(&(j / total)),
                            product: super::format_rational(&(pa * pb / t2)),
                        }),
                    });
                }
            }
        }
    }
    Ok(CiOutcome { independent: true, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropWitness {
    pub given: String,
    pub dropped: String,
    pub target: String,
    /// P(target | given, dropped, H)
    pub with: String,
    /// P(target | given, H)
    pub without: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropOutcome {
    pub holds: bool,
    /// Rows (given, dropped) with positive mass that were compared.
    pub rows_compared: usize,
    pub witness: Option<DropWitness>,
}

/// Checks Q(target | given, dropped, H) = Q(target | given, H) on every row
/// where the left side is defined.
pub fn conditional_dropping(
    d: &ExactDist,
    target: &CoordinateMask,
    dropped: &CoordinateMask,
    given: &CoordinateMask,
    h: &ConfigSet,
) -> Result<DropOutcome> {
    let wide = conditional(d, &CondQuery { target: *target, given: given.union(*dropped), context: h.clone() })?;
    let narrow = conditional(d, &CondQuery { target: *target, given: *given, context: h.clone() })?;
    if narrow.empty_context {
        return Err(IdmError::EmptyContext);
    }
    // positions of `given` coordinates inside the union mask
    let union: Vec<Coord> = given.union(*dropped).coords().collect();
    let pos: Vec<usize> = given.coords().map(|c| union.iter().position(|&u| u == c).expect("subset")).collect();
    let dpos: Vec<usize> = dropped.coords().map(|c| union.iter().position(|&u| u == c).expect("subset")).collect();
    for (wk, wrow) in &wide.rows {
        let gk: Vec<usize> = pos.iter().map(|&p| wk[p]).collect();
        let nrow = &narrow.rows[&gk];
        let targets: std::collections::BTreeSet<&Vec<usize>> = wrow.keys().chain(nrow.keys()).collect();
        for t in targets {
            let zero = Rational::zero();
            let (x, y) = (wrow.get(t).unwrap_or(&zero), nrow.get(t).unwrap_or(&zero));
            if x != y {
                let dk: Vec<usize> = dpos.iter().map(|&p| wk[p]).collect();
                let sp = &d.space;
                return Ok(DropOutcome {
                    holds: false,
                    rows_compared: wide.rows.len(),
                    witness: Some(DropWitness {
                        given: render(sp, given, &gk),
                        dropped: render(sp, dropped, &dk),
                        target: render(sp, target, t),
                        with: super::format_rational(x),
                        without: super::format_rational(y),
                    }),
                });
            }
        }
    }
    Ok(DropOutcome { holds: true, rows_compared: wide.rows.len(), witness: None })
}
