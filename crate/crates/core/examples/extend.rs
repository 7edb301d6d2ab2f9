//! Assign cross edges so a chosen set of worlds satisfies the conditional,
//! then show a chain that asks for more switches than there are layers.

use arank::hierarchy::{extend_access, max_alternations, satisfies, AccessGraph, HierarchicalConditional};
use arank::smooth::rank_augment;
use arank::{Layering, PointSet, PreferentialStructure};

fn main() -> arank::Result<()> {
    let names: Vec<String> = ["g1", "b1", "g2", "b2"].map(String::from).to_vec();
    let set = |xs: &[usize]| xs.iter().copied().collect::<PointSet>();
    let l = Layering::new(&names, vec![set(&[0, 1]), set(&[2, 3])])?;
    let s = rank_augment(&PreferentialStructure::injective(names.clone())?, &l)?;
    let c = HierarchicalConditional::new(s, l, set(&[0, 2]))?;

    let chain = |k: usize| {
        let ws: Vec<String> = (0..k).map(|i| format!("w{i}")).collect();
        AccessGraph::new(ws, (1..k).map(|i| (i - 1, i)).collect(), None)
    };

    let g = chain(3)?;
    let out = extend_access(&c, &g, &[0, 2])?;
    for m in 0..3 {
        println!("w{m} sees {:<12} satisfied {}", c.show(out.cross(m)), satisfies(&c, &out, m));
    }
    let alt = max_alternations(&c, &out);
    println!("switches {} over {} layers", alt.count, c.layer_count());

    // good, bad, good, bad needs a third layer for the second switch
    match extend_access(&c, &chain(4)?, &[0, 2]) {
        Err(e) => println!("{e}"),
        Ok(_) => println!("unexpectedly extended"),
    }
    Ok(())
}
