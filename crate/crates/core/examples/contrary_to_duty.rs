//! A layered obligation evaluated along an accessibility relation.
//!
//! Layer 1 holds the ideal outcome, layer 2 the fallback once the ideal is
//! out of reach, layer 3 the last resort. A world that can still reach a bad
//! fallback violates the obligation.

use arank::hierarchy::{check_access_facts, gamma, is_vacuous, satisfies, AccessGraph, HierarchicalConditional};
use arank::smooth::rank_augment;
use arank::{Layering, PointSet, PreferentialStructure};

fn main() -> arank::Result<()> {
    let names: Vec<String> = ["keep", "break", "apologize", "ignore", "compensate"].map(String::from).to_vec();
    let set = |xs: &[usize]| xs.iter().copied().collect::<PointSet>();
    let l = Layering::new(&names, vec![set(&[0, 1]), set(&[2, 3]), set(&[4])])?;
    let s = PreferentialStructure::from_point_edges(names.clone(), &[(0, 1)])?;
    let good = set(&[0, 2, 4]);
    let c = HierarchicalConditional::new(rank_augment(&s, &l)?, l, good)?;

    let worlds: Vec<String> = ["promise", "late", "sorry", "rude"].map(String::from).to_vec();
    let g = AccessGraph::new(worlds.clone(), vec![(0, 1), (1, 2), (1, 3)], None)?.with_cross(vec![
        set(&[0, 2, 3, 4]),
        set(&[2, 3, 4]),
        set(&[2, 4]),
        set(&[3, 4]),
    ])?;

    for (m, w) in worlds.iter().enumerate() {
        println!(
            "{w:<8} satisfied {:<5} trigger layer {} vacuous {}",
            satisfies(&c, &g, m),
            gamma(&c, &g, m),
            is_vacuous(&c, &g, m)
        );
    }
    for r in check_access_facts(&c, &g) {
        println!("{r}");
    }
    Ok(())
}
