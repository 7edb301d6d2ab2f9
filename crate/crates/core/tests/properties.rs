//! Property tests over seeded random instances.

use std::sync::Arc;

use proptest::prelude::*;
use rand::RngExt;

use arank::bridge::{logic_from_mu, mu_from_logic, valuation_names};
use arank::choice::{check_mu, MuCondition};
use arank::generate::{
    point_names, random_chain_case, random_general_case, random_layering, random_ranked_structure, rng_for,
};
use arank::instance::{choice_instance_json, parse_instance};
use arank::hierarchy::{extend_access, max_alternations, reachable, satisfies, satisfies_by_trigger};
use arank::logic::Vocabulary;
use arank::{ChoiceFunction, Domain, Error, PointSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trigger_reading_agrees(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let case = random_chain_case(&mut rng);
        let n = case.conditional.names().len();
        let cross = (0..case.graph.worlds().len())
            .map(|_| PointSet::from_bits(rng.random::<u64>()) & PointSet::full(n))
            .collect();
        let g = case.graph.with_cross(cross).unwrap();
        for m in 0..g.worlds().len() {
            prop_assert_eq!(satisfies(&case.conditional, &g, m), satisfies_by_trigger(&case.conditional, &g, m));
        }
    }

    #[test]
    fn reach_is_transitive_and_shrinks(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 1);
        let case = random_chain_case(&mut rng);
        let n = case.conditional.names().len();
        let cross = (0..case.graph.worlds().len())
            .map(|_| PointSet::from_bits(rng.random::<u64>()) & PointSet::full(n))
            .collect();
        let g = case.graph.with_cross(cross).unwrap();
        for m in 0..g.worlds().len() {
            let r = reachable(&g, m).unwrap();
            for &m2 in &r.worlds {
                let r2 = reachable(&g, m2).unwrap();
                prop_assert!(r2.points.is_subset(r.points));
                prop_assert!(r2.worlds.iter().all(|w| r.worlds.contains(w)));
            }
        }
    }

    #[test]
    fn extension_meets_target_or_runs_out(seed in any::<u64>()) {
        let case = random_chain_case(&mut rng_for(seed, 2));
        let c = &case.conditional;
        match extend_access(c, &case.graph, &case.target) {
            Ok(g) => {
                for m in 0..g.worlds().len() {
                    prop_assert_eq!(satisfies(c, &g, m), case.target.contains(&m));
                }
                prop_assert!(max_alternations(c, &g).count <= c.layer_count());
            }
            Err(Error::LayersExhausted { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn induced_tables_are_preferential(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = rng_for(seed, 3);
        let names = point_names(n);
        let l = random_layering(&mut rng, &names, n);
        let s = random_ranked_structure(&mut rng, &l, 2);
        let d = Arc::new(Domain::powerset(names, false).unwrap());
        let f = s.induced_choice(&d).unwrap();
        for c in [MuCondition::Subset, MuCondition::Pr] {
            prop_assert!(check_mu(c, &f, None).unwrap().holds);
        }
        prop_assert!(s.is_a_ranked(&l).unwrap().holds);
    }

    #[test]
    fn bridge_round_trip(bits in proptest::collection::vec(any::<u16>(), 16)) {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        let d = Arc::new(Domain::powerset(valuation_names(&v), true).unwrap());
        let table = d.family().iter().zip(&bits).map(|(&y, &b)| y & PointSet::from_bits(u64::from(b))).collect();
        let f = ChoiceFunction::new(d, table).unwrap();
        let back = mu_from_logic(&logic_from_mu(&f, &v).unwrap());
        prop_assert_eq!(back, f);
    }

    #[test]
    fn instances_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let case = random_general_case(&mut rng_for(seed, 4), n);
        let text = choice_instance_json(&case.choice, Some(&case.layering)).to_string();
        let back = parse_instance(&text, "case").unwrap();
        prop_assert_eq!(back.choice, Some(case.choice));
        prop_assert_eq!(back.layering, Some(case.layering));
    }
}
