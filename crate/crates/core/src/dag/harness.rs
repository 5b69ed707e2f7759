use serde::{Deserialize, Serialize};

use super::{d_separated, random_dag};
use crate::model::dag_to_idm;
use crate::precedence::{precedes_with, separate_by_relation, SeparationCertificate};
use crate::{AgentSet, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarnessOptions {
    pub n_graphs: usize,
    pub n: usize,
    pub edge_prob: f64,
    pub seed: u64,
    /// Largest conditioning set enumerated.
    pub max_w: usize,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions { n_graphs: 200, n: 6, edge_prob: 0.3, seed: 0, max_w: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub graph: usize,
    pub edges: Vec<(String, String)>,
    pub y: String,
    pub z: String,
    pub w: Vec<String>,
    pub d_separated: bool,
    pub certificate: Option<SeparationCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub graphs: usize,
    pub queries: usize,
    pub agreements: usize,
    /// Queries where both criteria report separation.
    pub separated: usize,
    pub disagreements: Vec<Disagreement>,
}

impl HarnessReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty() && self.agreements == self.queries
    }
}

pub fn equivalence_harness(opts: HarnessOptions) -> Result<HarnessReport> {
    equivalence_harness_with(opts, Exec::default())
}

/// Graph `i` uses seed `opts.seed + i`. For every W with |W| ≤ `max_w` and
/// every ordered pair of distinct nodes y, z outside W, compares
/// d-separation with topological separation on the imported IDM (H = full).
pub fn equivalence_harness_with(opts: HarnessOptions, exec: Exec) -> Result<HarnessReport> {
    let per_graph = exec.map_range(opts.n_graphs, |i| -> Result<(usize, usize, usize, Vec<Disagreement>)> {
        let g = random_dag(opts.n, opts.edge_prob, opts.seed.wrapping_add(i as u64))?;
        let m = dag_to_idm(&g)?;
        let full = m.full_set();
        let (mut queries, mut agree, mut sep) = (0, 0, 0);
        let mut bad = Vec::new();
        for bits in 0..1u64 << opts.n {
            let w = AgentSet::from_bits(bits);
            if w.len() > opts.max_w {
                continue;
            }
            let rel = precedes_with(&m, w, &full, Exec::Sequential)?;
            for y in 0..opts.n {
                for z in 0..opts.n {
                    if y == z || w.contains(y) || w.contains(z) {
                        continue;
                    }
                    let (ys, zs) = (AgentSet::singleton(y), AgentSet::singleton(z));
                    let d = d_separated(&g, ys, zs, w)?;
                    let cert = separate_by_relation(&rel, ys, zs, w, Exec::Sequential);
                    queries += 1;
                    if d == cert.is_some() {
                        agree += 1;
                        sep += usize::from(d);
                    } else {
                        let name = |v: usize| g.nodes()[v].clone();
                        bad.push(Disagreement {
                            graph: i,
                            edges: g.edges().iter().map(|&(u, v)| (name(u), name(v))).collect(),
                            y: name(y),
                            z: name(z),
                            w: w.iter().map(name).collect(),
                            d_separated: d,
                            certificate: cert,
                        });
                    }
                }
            }
        }
        Ok((queries, agree, sep, bad))
    });
    let mut report =
        HarnessReport { graphs: opts.n_graphs, queries: 0, agreements: 0, separated: 0, disagreements: Vec::new() };
    for r in per_graph {
        let (q, a, s, bad) = r?;
        report.queries += q;
        report.agreements += a;
        report.separated += s;
        report.disagreements.extend(bad);
    }
    Ok(report)
}
