//! d-separation on DAGs and the empirical d-separation / t-separation
//! equivalence harness.

mod harness;

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use harness::{equivalence_harness, equivalence_harness_with, Disagreement, HarnessOptions, HarnessReport};

use crate::model::Dag;
use crate::precedence::check_disjoint;
use crate::{AgentSet, IdmError, Result};

/// Node cap for the path-enumeration oracle.
pub const ORACLE_NODE_CAP: usize = 10;

fn check_query(g: &Dag, y: AgentSet, z: AgentSet, w: AgentSet) -> Result<()> {
    let n = g.len();
    if let Some(v) = y.union(z).union(w).iter().find(|&v| v >= n) {
        return Err(IdmError::AgentOutOfRange { index: v, count: n });
    }
    check_disjoint(y, z, w)?;
    if !g.is_acyclic() {
        return Err(IdmError::Cyclic);
    }
    Ok(())
}

/// Bayes-ball reachability: is every trail from Y to Z blocked by W?
pub fn d_separated(g: &Dag, y: AgentSet, z: AgentSet, w: AgentSet) -> Result<bool> {
    check_query(g, y, z, w)?;
    let n = g.len();
    let anc_w = g.ancestors(w);
    let parents: Vec<AgentSet> = (0..n).map(|v| g.parents(v)).collect();
    let children: Vec<AgentSet> = (0..n).map(|v| g.children(v)).collect();
    // visited[v][0]: reached from a child (moving up); [1]: from a parent (moving down)
    let mut visited = vec![[false; 2]; n];
    let mut queue: VecDeque<(usize, usize)> = y.iter().map(|v| (v, 0)).collect();
    while let Some((v, dir)) = queue.pop_front() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        if !w.contains(v) && z.contains(v) {
            return Ok(false);
        }
        let observed = w.contains(v);
        if dir == 0 && !observed {
            queue.extend(parents[v].iter().map(|p| (p, 0)));
            queue.extend(children[v].iter().map(|c| (c, 1)));
        } else if dir == 1 {
            if !observed {
                queue.extend(children[v].iter().map(|c| (c, 1)));
            }
            if anc_w.contains(v) {
                queue.extend(parents[v].iter().map(|p| (p, 0)));
            }
        }
    }
    Ok(true)
}

/// Literal definition: enumerate every simple path of the skeleton from Y to
/// Z; a path is blocked by a non-collider in W or by a collider with no
/// descendant (itself included) in W.
pub fn d_separated_oracle(g: &Dag, y: AgentSet, z: AgentSet, w: AgentSet) -> Result<bool> {
    check_query(g, y, z, w)?;
    let n = g.len();
    if n > ORACLE_NODE_CAP {
        return Err(IdmError::CapExceeded { what: "nodes for the path oracle", value: n as u128, cap: ORACLE_NODE_CAP as u128 });
    }
    let edge = |u: usize, v: usize| g.edges().contains(&(u, v));
    let anc_w = g.ancestors(w);
    let blocked = |path: &[usize]| {
        (1..path.len() - 1).any(|i| {
            let (prev, v, next) = (path[i - 1], path[i], path[i + 1]);
            let collider = edge(prev, v) && edge(next, v);
            if collider {
                !anc_w.contains(v)
            } else {
                w.contains(v)
            }
        })
    };
    fn walk(
        path: &mut Vec<usize>,
        on_path: &mut AgentSet,
        n: usize,
        adj: &dyn Fn(usize, usize) -> bool,
        z: AgentSet,
        open: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let last = *path.last().expect("nonempty");
        if z.contains(last) {
            return open(path);
        }
        for v in 0..n {
            if !on_path.contains(v) && adj(last, v) {
                path.push(v);
                on_path.insert(v);
                let found = walk(path, on_path, n, adj, z, open);
                path.pop();
                on_path.remove(v);
                if found {
                    return true;
                }
            }
        }
        false
    }
    let adj = |u: usize, v: usize| edge(u, v) || edge(v, u);
    for s in y.iter() {
        let mut path = vec![s];
        let mut on_path = AgentSet::singleton(s);
        let mut open = |p: &[usize]| !blocked(p);
        if walk(&mut path, &mut on_path, n, &adj, z, &mut open) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Edges i → j for i < j, each kept independently with `edge_prob`.
pub fn random_dag(n: usize, edge_prob: f64, seed: u64) -> Result<Dag> {
    if n == 0 || n > AgentSet::MAX_AGENTS {
        return Err(IdmError::InvalidModel(format!("cannot build a random DAG on {n} nodes")));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(IdmError::InvalidProbability(format!("edge probability {edge_prob}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((i, j));
            }
        }
    }
    Dag::new((0..n).map(|i| format!("V{i}")).collect(), edges)
}
