//! Smooth representations of a cumulative table, plain and transitive.

use std::sync::Arc;

use arank::smooth::{check_hull_lemmas, construct_smooth_transitive, hull, kernel, rank_augment, repair_smooth};
use arank::structure::verify_representation;
use arank::{ChoiceFunction, Domain, Layering, PointSet};

fn main() -> arank::Result<()> {
    let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let d = Arc::new(Domain::powerset(names.clone(), false)?);
    // the first point in a < b < c order survives
    let f = ChoiceFunction::from_fn(d.clone(), |y| y.first().map_or(PointSet::EMPTY, PointSet::singleton))?;
    let l = Layering::new(&names, (0..3).map(PointSet::singleton).collect())?;

    println!("kernel {}", d.show(kernel(&f)));
    for &u in d.family() {
        println!("  H({}) = {}", d.show(u), d.show(hull(&f, u)));
    }
    for r in check_hull_lemmas(&f) {
        println!("{r}");
    }

    let s = repair_smooth(&f)?;
    println!("\nsmooth: {} copies", s.copy_count());
    println!("{}\n{}", verify_representation(&s, &f), s.is_smooth(&d));
    let ranked = rank_augment(&s, &l)?;
    println!("{}", ranked.is_a_ranked(&l)?);

    let t = construct_smooth_transitive(&f, false)?;
    println!("\nsmooth transitive: {} copies", t.copy_count());
    for c in 0..t.copy_count() {
        println!("  {}", t.copy_name(c));
    }
    println!("{}\n{}\n{}", verify_representation(&t, &f), t.is_transitive(), t.is_cycle_free());
    Ok(())
}
