use std::collections::BTreeMap;

use idm_core::dag::{d_separated, d_separated_oracle, random_dag};
use idm_core::field::{
    field_subset_on, refines, trace, ConfigSet, Coord, CoordinateMask, FiniteSpace, Partition, ConfigSpace,
};
use idm_core::model::random::{random_context, random_model, random_prior};
use idm_core::model::{dag_to_idm, intervene, lift_profile, to_base_index, FieldSpec, InterventionSpec};
use idm_core::precedence::{
    closure, intersection_failures, is_open, precedes, precedes_oracle, topologically_separated, PrecedenceRelation, ORACLE_AGENT_CAP,
};
use idm_core::probability::{pushforward, Rational};
use idm_core::solvability::{
    find_causal_ordering, is_model_solvable, solve, CausalityLimits, PolicyProfile, SolvabilityVerdict,
};
use idm_core::AgentSet;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_space() -> Arc<ConfigSpace> {
    ConfigSpace::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![FiniteSpace::binary("Ω_a"), FiniteSpace::range("Ω_b", 3), FiniteSpace::binary("Ω_c")],
        vec![FiniteSpace::binary("U_a"), FiniteSpace::binary("U_b"), FiniteSpace::range("U_c", 3)],
    )
    .unwrap()
}

fn random_partition(sp: &Arc<ConfigSpace>, seed: u64, blocks: usize) -> Partition {
    let mut r = rng(seed);
    let labels: Vec<usize> = (0..sp.size()).map(|_| r.gen_range(0..blocks)).collect();
    Partition::from_index_labels(sp, |i| labels[i])
}

fn mask_from_bits(bits: u8) -> CoordinateMask {
    CoordinateMask::new(AgentSet::from_bits(u64::from(bits & 7)), AgentSet::from_bits(u64::from(bits >> 3 & 7)))
}

/// Same atoms up to relabeling.
fn same_partition(p: &Partition, q: &Partition) -> bool {
    refines(p, q).unwrap() && refines(q, p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_is_a_preorder(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), k in 1usize..6) {
        let sp = small_space();
        let (p, q, r) = (random_partition(&sp, s1, k), random_partition(&sp, s2, 3), random_partition(&sp, s3, 2));
        prop_assert!(refines(&p, &p).unwrap());
        let pq = p.join(&q).unwrap();
        let pqr = pq.join(&r).unwrap();
        prop_assert!(refines(&pq, &p).unwrap() && refines(&pqr, &pq).unwrap() && refines(&pqr, &p).unwrap());
        if refines(&p, &q).unwrap() && refines(&q, &p).unwrap() {
            prop_assert_eq!(p.atoms(), q.atoms());
        }
    }

    #[test]
    fn mask_refinement_matches_inclusion(b1 in 0u8..64, b2 in 0u8..64) {
        let sp = small_space();
        let (m1, m2) = (mask_from_bits(b1), mask_from_bits(b2));
        let (p1, p2) = (Partition::from_mask(&sp, &m1).unwrap(), Partition::from_mask(&sp, &m2).unwrap());
        prop_assert_eq!(refines(&p1, &p2).unwrap(), m2.is_subset(m1));
    }

    #[test]
    fn trace_laws(seed in any::<u64>(), k in 1usize..5) {
        let sp = small_space();
        let p = random_partition(&sp, seed, k);
        prop_assert!(same_partition(&trace(&p, &ConfigSet::full(&sp)).unwrap(), &p));
        let mut r = rng(seed ^ 0x5eed);
        let pick: Vec<bool> = (0..sp.size()).map(|_| r.gen_bool(0.7)).collect();
        let h = ConfigSet::from_predicate(&sp, |i| pick[i]);
        let keep: Vec<bool> = (0..sp.size()).map(|_| r.gen_bool(0.5)).collect();
        let h2 = ConfigSet::from_predicate(&sp, |i| h.contains(i) && keep[i]);
        prop_assume!(!h2.is_empty());
        let twice = trace(&trace(&p, &h).unwrap(), &h2).unwrap();
        prop_assert!(same_partition(&twice, &trace(&p, &h2).unwrap()));
    }

    #[test]
    fn subset_on_full_is_refinement(seed in any::<u64>(), k in 1usize..4, bits in 0u8..64) {
        let sp = small_space();
        let p = random_partition(&sp, seed, k);
        let mask = mask_from_bits(bits);
        let by_mask = Partition::from_mask(&sp, &mask).unwrap();
        prop_assert_eq!(field_subset_on(&p, &mask, &ConfigSet::full(&sp)).unwrap(), refines(&by_mask, &p).unwrap());
    }

    #[test]
    fn product_fields_intersect(b0 in 0u8..64, b1 in 0u8..64, b2 in 0u8..64) {
        let sp = small_space();
        let p = Partition::from_mask(&sp, &mask_from_bits(b0)).unwrap();
        let (m1, m2) = (mask_from_bits(b1), mask_from_bits(b2));
        let full = ConfigSet::full(&sp);
        if field_subset_on(&p, &m1, &full).unwrap() && field_subset_on(&p, &m2, &full).unwrap() {
            prop_assert!(field_subset_on(&p, &m1.intersection(m2), &full).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn precedence_matches_oracle(seed in any::<u64>(), n in 2usize..=4, wbits in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, n, 0.4, 0.3).unwrap();
        let h = random_context(&mut r, &m);
        let w = AgentSet::from_bits(wbits & m.all_agents().bits());
        prop_assert_eq!(precedes(&m, w, &h).unwrap(), precedes_oracle(&m, w, &h, ORACLE_AGENT_CAP).unwrap());
    }

    #[test]
    fn product_contexts_have_no_intersection_failures(
        seed in any::<u64>(),
        n in 2usize..=4,
        wbits in any::<u64>(),
        pin in any::<Option<(usize, bool)>>(),
    ) {
        let mut r = rng(seed);
        let m = random_model(&mut r, n, 0.5, 0.5).unwrap();
        let h = match pin {
            Some((a, v)) => ConfigSet::pinned(m.space(), &[(Coord::Decision(a % n), v as usize)]).unwrap(),
            None => ConfigSet::full(m.space()),
        };
        let w = AgentSet::from_bits(wbits & m.all_agents().bits());
        prop_assert!(intersection_failures(&m, w, &h).unwrap().is_empty());
    }

    #[test]
    fn conditioning_set_prunes_precedence(seed in any::<u64>(), n in 2usize..=5, wbits in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, n, 0.4, 0.3).unwrap();
        let h = random_context(&mut r, &m);
        let w = AgentSet::from_bits(wbits & m.all_agents().bits());
        let with_w = precedes(&m, w, &h).unwrap();
        let base = precedes(&m, AgentSet::empty(), &h).unwrap();
        let delta = PrecedenceRelation::diagonal(n, w.complement(n));
        prop_assert_eq!(&with_w, &delta.compose(&base));
        for a in 0..n {
            prop_assert!(with_w.preds(a).is_disjoint(w));
        }
    }

    #[test]
    fn closure_is_a_closure_operator(seed in any::<u64>(), n in 2usize..=5, wbits in any::<u64>(), b1 in any::<u64>(), b2 in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, n, 0.4, 0.3).unwrap();
        let h = random_context(&mut r, &m);
        let all = m.all_agents().bits();
        let w = AgentSet::from_bits(wbits & all);
        let (s1, s2) = (AgentSet::from_bits(b1 & all), AgentSet::from_bits(b2 & all));
        let s12 = s1.union(s2);
        let cl = |b| closure(&m, b, w, &h).unwrap();
        prop_assert!(s1.is_subset(cl(s1)));
        prop_assert!(cl(s1).is_subset(cl(s12)));
        prop_assert_eq!(cl(cl(s1)), cl(s1));
        prop_assert_eq!(cl(AgentSet::empty()), AgentSet::empty());
        prop_assert_eq!(cl(cl(s1).union(cl(s2))), cl(s1).union(cl(s2)));
        prop_assert!(is_open(&m, w, w, &h).unwrap());
        prop_assert_eq!(cl(w.complement(n)), w.complement(n));
    }

    #[test]
    fn separation_is_symmetric(seed in any::<u64>(), n in 3usize..=5) {
        let mut r = rng(seed);
        let m = random_model(&mut r, n, 0.35, 0.3).unwrap();
        let h = random_context(&mut r, &m);
        let y = r.gen_range(0..n);
        let z = (y + r.gen_range(1..n)) % n;
        let w: AgentSet = (0..n).filter(|&v| v != y && v != z && r.gen_bool(0.4)).collect();
        let (ys, zs) = (AgentSet::singleton(y), AgentSet::singleton(z));
        let fwd = topologically_separated(&m, ys, zs, w, &h).unwrap();
        let back = topologically_separated(&m, zs, ys, w, &h).unwrap();
        prop_assert_eq!(fwd.is_some(), back.is_some());
        if let Some(c) = back {
            let cl = |b| closure(&m, b, w, &h).unwrap();
            prop_assert!(cl(ys.union(c.splitting.w_z)).is_disjoint(cl(zs.union(c.splitting.w_y))));
        }
    }

    #[test]
    fn d_separation_matches_path_oracle(seed in any::<u64>(), n in 2usize..=7, p in 0.1f64..0.7) {
        let g = random_dag(n, p, seed).unwrap();
        let mut r = rng(seed);
        let y = r.gen_range(0..n);
        let z = (y + r.gen_range(1..n)) % n;
        let w: AgentSet = (0..n).filter(|&v| v != y && v != z && r.gen_bool(0.4)).collect();
        let (ys, zs) = (AgentSet::singleton(y), AgentSet::singleton(z));
        let fast = d_separated(&g, ys, zs, w).unwrap();
        prop_assert_eq!(fast, d_separated_oracle(&g, ys, zs, w).unwrap());
        prop_assert_eq!(fast, d_separated(&g, zs, ys, w).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dag_solutions_follow_sequential_evaluation(seed in any::<u64>(), n in 1usize..=5, p in 0.1f64..0.8) {
        let g = random_dag(n, p, seed).unwrap();
        let m = dag_to_idm(&g).unwrap();
        let sp = m.space();
        let profile = PolicyProfile::random(&m, &mut rng(seed));
        let sol = solve(&m, &profile);
        prop_assert!(sol.solvable);
        let order = g.topological_order().unwrap();
        for omega in 0..sp.nature_size() {
            let mut idx = sp.compose(omega, 0);
            for &a in &order {
                idx = sp.with_digit(idx, Coord::Decision(a), profile.decide(&m, a, idx));
            }
            prop_assert_eq!(sol.config(omega), Some(idx));
        }
    }

    #[test]
    fn causal_models_are_solvable(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let m = random_model(&mut r, n, 0.5, 0.3).unwrap();
        if find_causal_ordering(&m, CausalityLimits::default()).unwrap().is_some() {
            let verdict = is_model_solvable(&m, 1 << 16, 64, seed);
            prop_assert!(!matches!(verdict, SolvabilityVerdict::Unsolvable { .. }), "{:?}", verdict);
        }
    }

    #[test]
    fn switched_off_intervention_keeps_the_law(seed in any::<u64>(), n in 2usize..=4, p in 0.2f64..0.8) {
        let g = random_dag(n, p, seed).unwrap();
        let mut r = rng(seed);
        let m = dag_to_idm(&g).unwrap();
        let prior = random_prior(&mut r, &m);
        let m = m.with_prior(prior.clone()).unwrap();
        let t = r.gen_range(0..n);
        let spec = InterventionSpec::new(
            AgentSet::singleton(t),
            vec![(t, FieldSpec::Mask(CoordinateMask::local(t, AgentSet::empty())))],
        );
        let out = intervene(&m, &spec).unwrap();
        let profile = PolicyProfile::random(&m, &mut r);
        let lifted = lift_profile(&m, &out, spec.targets, &profile, |_, _| 1).unwrap();
        let base = pushforward(&m, &profile, &prior).unwrap();
        let big = pushforward(&out, &lifted, &out.prior_or_uniform()).unwrap();
        let off = ConfigSet::pinned(out.space(), &[(Coord::Decision(n), 0)]).unwrap();
        let total = big.mass_of(&off);
        prop_assert!(!total.is_zero());
        let mut cond: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, q) in big.support().filter(|(i, _)| off.contains(*i)) {
            *cond.entry(to_base_index(m.space(), out.space(), i)).or_insert_with(Rational::zero) += q / &total;
        }
        let expected: BTreeMap<usize, Rational> = base.support().map(|(i, q)| (i, q.clone())).collect();
        prop_assert_eq!(cond, expected);
    }
}
