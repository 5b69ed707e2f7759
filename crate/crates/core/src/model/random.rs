//! Seeded random models for property tests and randomized suites.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{uniform_space, FieldSpec, Prior, Provenance, WModel};
use crate::field::{ConfigSet, Coord, CoordinateMask, Partition};
use crate::probability::rat;
use crate::{AgentSet, Result};

const NAMES: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

/// Binary model with `n ≤ 8` agents. Each field sees the owner's noise and a
/// random decision subset; with probability `context_prob` a field instead
/// sees one coordinate only when another decision equals 1.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, n: usize, edge_prob: f64, context_prob: f64) -> Result<WModel> {
    let space = uniform_space(&NAMES[..n], 2, 2)?;
    let mut fields = Vec::with_capacity(n);
    for a in 0..n {
        let others: Vec<usize> = (0..n).filter(|&b| b != a).collect();
        let parents: AgentSet = others.iter().copied().filter(|_| rng.gen_bool(edge_prob)).collect();
        if others.len() >= 2 && rng.gen_bool(context_prob) {
            let mut pick = others.clone();
            pick.shuffle(rng);
            let (gate, gated) = (pick[0], pick[1]);
            let plain = parents.without(gate).without(gated);
            let sp = space.clone();
            fields.push(FieldSpec::Observation(Partition::from_index_labels(&space, move |i| {
                let g = sp.decision_digit(i, gate);
                let visible: u64 = plain.iter().fold(0, |acc, b| acc << 1 | sp.decision_digit(i, b) as u64);
                (sp.nature_digit(i, a), g, g * sp.decision_digit(i, gated), visible)
            })));
        } else {
            fields.push(FieldSpec::Mask(CoordinateMask::local(a, parents)));
        }
    }
    Ok(WModel::new(space, fields)?.with_meta("random", Provenance::User))
}

/// Product prior with masses k/N, N ≤ 64, full support.
pub fn random_prior<R: Rng + ?Sized>(rng: &mut R, m: &WModel) -> Prior {
    let sp = m.space();
    let masses = (0..m.agent_count())
        .map(|a| {
            let k = sp.nature_space(a).len();
            let denom = rng.gen_range(k.max(2)..=64);
            // k-1 cut points among 1..denom give positive parts
            let mut cuts: Vec<usize> = (1..denom).collect();
            cuts.shuffle(rng);
            let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
            cuts.sort_unstable();
            let mut prev = 0;
            let mut row = Vec::with_capacity(k);
            for c in cuts.into_iter().chain(std::iter::once(denom)) {
                row.push(rat((c - prev) as i64, denom as i64));
                prev = c;
            }
            row
        })
        .collect();
    Prior::new(sp, masses).expect("masses sum to one")
}

/// Random nonempty context: full, a single decision pin, or a random subset.
pub fn random_context<R: Rng + ?Sized>(rng: &mut R, m: &WModel) -> ConfigSet {
    let sp = m.space();
    match rng.gen_range(0..3) {
        0 => ConfigSet::full(sp),
        1 => {
            let a = rng.gen_range(0..m.agent_count());
            let v = rng.gen_range(0..sp.decision_space(a).len());
            ConfigSet::pinned(sp, &[(Coord::Decision(a), v)]).expect("valid pin")
        }
        _ => loop {
            let keep = rng.gen_range(0.2..0.9);
            let picks: Vec<bool> = (0..sp.size()).map(|_| rng.gen_bool(keep)).collect();
            let h = ConfigSet::from_predicate(sp, |i| picks[i]);
            if !h.is_empty() {
                break h;
            }
        },
    }
}
