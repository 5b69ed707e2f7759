use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::field::{Coord, CoordinateMask, MaskKeyer};
use crate::model::WModel;
use crate::{AgentSet, IdmError, Result};

/// φ: a total agent ordering for every configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalOrdering {
    orders: Vec<Vec<usize>>,
    of: Vec<u32>,
}

fn check_permutation(n: usize, order: &[usize]) -> Result<()> {
    let set: AgentSet = order.iter().copied().filter(|&a| a < n).collect();
    if order.len() != n || set.len() != n {
        return Err(IdmError::InvalidOrdering(format!("{order:?} is not a permutation of {n} agents")));
    }
    Ok(())
}

impl CausalOrdering {
    pub fn constant(m: &WModel, order: Vec<usize>) -> Result<Self> {
        check_permutation(m.agent_count(), &order)?;
        Ok(CausalOrdering { orders: vec![order], of: vec![0; m.space().size()] })
    }

    pub fn from_fn(m: &WModel, f: impl Fn(usize) -> Vec<usize>) -> Result<Self> {
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut orders = Vec::new();
        let mut of = Vec::with_capacity(m.space().size());
        for idx in 0..m.space().size() {
            let o = f(idx);
            let id = match ids.get(&o) {
                Some(&id) => id,
                None => {
                    check_permutation(m.agent_count(), &o)?;
                    orders.push(o.clone());
                    ids.insert(o, orders.len() as u32 - 1);
                    orders.len() as u32 - 1
                }
            };
            of.push(id);
        }
        Ok(CausalOrdering { orders, of })
    }

    pub fn order_at(&self, idx: usize) -> &[usize] {
        &self.orders[self.of[idx] as usize]
    }

    /// Distinct orderings used somewhere.
    pub fn distinct_orders(&self) -> &[Vec<usize>] {
        &self.orders
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalityViolation {
    /// κ, as agent names.
    pub prefix: Vec<String>,
    /// Two configurations agreeing on nature and on the decisions of range(κ−)
    /// that φ or I_{last(κ)} separates.
    pub configs: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalityCheck {
    pub causal: bool,
    pub violation: Option<CausalityViolation>,
}

/// For every prefix κ of length k, H_κ ∩ G must lie in ℱ ⊗ 𝒰_{range(κ−)} for
/// every atom G of I_{last(κ)}. Cell by cell: every (ω, u_B) cell meeting H_κ
/// lies inside H_κ and inside a single atom of I_{last(κ)}.
pub fn check_causal_ordering(m: &WModel, phi: &CausalOrdering) -> Result<CausalityCheck> {
    let sp = m.space();
    let n = m.agent_count();
    if phi.of.len() != sp.size() {
        return Err(IdmError::SpaceMismatch);
    }
    for k in 1..=n {
        let mut prefix_ids: HashMap<&[usize], u32> = HashMap::new();
        let prefix_of: Vec<u32> = phi
            .orders
            .iter()
            .map(|o| {
                let next = prefix_ids.len() as u32;
                *prefix_ids.entry(&o[..k]).or_insert(next)
            })
            .collect();
        let pfx = |idx: usize| prefix_of[phi.of[idx] as usize];
        let b_of = |idx: usize| phi.order_at(idx)[..k - 1].iter().copied().collect::<AgentSet>();
        let bs: HashSet<AgentSet> = phi.orders.iter().map(|o| o[..k - 1].iter().copied().collect()).collect();
        let mut bs: Vec<AgentSet> = bs.into_iter().collect();
        bs.sort();
        for b in bs {
            let keyer = MaskKeyer::new(sp, &CoordinateMask::product_field(n, b));
            let mut first = vec![usize::MAX; keyer.key_count()];
            for idx in 0..sp.size() {
                let key = keyer.key(idx);
                let f = first[key];
                if f == usize::MAX {
                    first[key] = idx;
                    continue;
                }
                let (in_f, in_i) = (b_of(f) == b, b_of(idx) == b);
                if !in_f && !in_i {
                    continue;
                }
                let last = phi.order_at(if in_f { f } else { idx })[k - 1];
                let field = m.info(last).partition();
                if pfx(f) != pfx(idx) || field.atom(f) != field.atom(idx) {
                    let kappa = phi.order_at(if in_f { f } else { idx })[..k].to_vec();
                    return Ok(CausalityCheck {
                        causal: false,
                        violation: Some(CausalityViolation {
                            prefix: kappa.iter().map(|&a| m.agent_name(a).to_string()).collect(),
                            configs: (sp.describe(f), sp.describe(idx)),
                        }),
                    });
                }
            }
        }
    }
    Ok(CausalityCheck { causal: true, violation: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CausalityLimits {
    pub max_agents: usize,
    pub max_configs: usize,
}

impl Default for CausalityLimits {
    fn default() -> Self {
        CausalityLimits { max_agents: 5, max_configs: 1 << 16 }
    }
}

struct Search<'a> {
    m: &'a WModel,
    all: AgentSet,
    /// Offsets that enumerate the decisions outside B, per B.
    completions: HashMap<AgentSet, Vec<usize>>,
    memo: HashMap<(AgentSet, usize), Option<usize>>,
}

impl Search<'_> {
    fn offsets(&mut self, b: AgentSet) -> &[usize] {
        let sp = self.m.space();
        let free = self.all.difference(b);
        self.completions.entry(b).or_insert_with(|| {
            let mut offs = vec![0usize];
            for c in free.iter() {
                let stride = sp.stride(Coord::Decision(c));
                let r = sp.radix(Coord::Decision(c));
                offs = offs.iter().flat_map(|&o| (0..r).map(move |v| o + v * stride)).collect();
            }
            offs
        })
    }

    /// Representative of the (ω, u_B) cell: decisions outside B set to 0.
    fn rep(&self, b: AgentSet, idx: usize) -> usize {
        let sp = self.m.space();
        self.all.difference(b).iter().fold(idx, |acc, c| sp.with_digit(acc, Coord::Decision(c), 0))
    }

    fn feasible(&mut self, b: AgentSet, rep: usize) -> bool {
        if b == self.all {
            return true;
        }
        if let Some(r) = self.memo.get(&(b, rep)) {
            return r.is_some();
        }
        let mut choice = None;
        for a in self.all.difference(b).iter() {
            let field = self.m.info(a).partition();
            let atom0 = field.atom(rep);
            let constant = self.offsets(b).to_vec().iter().all(|&o| field.atom(rep + o) == atom0);
            if !constant {
                continue;
            }
            let sp = self.m.space();
            let (stride, r) = (sp.stride(Coord::Decision(a)), sp.radix(Coord::Decision(a)));
            if (0..r).all(|v| self.feasible(b.with(a), rep + v * stride)) {
                choice = Some(a);
                break;
            }
        }
        self.memo.insert((b, rep), choice);
        choice.is_some()
    }
}

/// Exhaustive search for a causal ordering. The next agent is chosen per
/// (ω, u_B) cell, trying agents in canonical order; `None` means no causal
/// ordering exists.
pub fn find_causal_ordering(m: &WModel, limits: CausalityLimits) -> Result<Option<CausalOrdering>> {
    let n = m.agent_count();
    let sp = m.space();
    if n > limits.max_agents {
        return Err(IdmError::CapExceeded { what: "agents for causal search", value: n as u128, cap: limits.max_agents as u128 });
    }
    if sp.size() > limits.max_configs {
        return Err(IdmError::CapExceeded {
            what: "configurations for causal search",
            value: sp.size() as u128,
            cap: limits.max_configs as u128,
        });
    }
    let mut s = Search { m, all: m.all_agents(), completions: HashMap::new(), memo: HashMap::new() };
    for w in 0..sp.nature_size() {
        let rep = sp.compose(w, 0);
        if !s.feasible(AgentSet::empty(), rep) {
            return Ok(None);
        }
    }
    let phi = CausalOrdering::from_fn(m, |idx| {
        let mut b = AgentSet::empty();
        let mut order = Vec::with_capacity(n);
        while b != s.all {
            let a = s.memo[&(b, s.rep(b, idx))].expect("feasible cells are recorded");
            order.push(a);
            b.insert(a);
        }
        order
    })?;
    Ok(Some(phi))
}
