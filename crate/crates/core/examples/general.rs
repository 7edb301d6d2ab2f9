//! The general and transitive constructions on a table that is not cumulative.

use std::sync::Arc;

use arank::general::{construct_general, construct_transitive};
use arank::structure::verify_representation;
use arank::{ChoiceFunction, Domain, Layering};

fn main() -> arank::Result<()> {
    let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let d = Domain::new(
        names.clone(),
        vec![
            0b111.into_set(),
            0b011.into_set(),
            0b101.into_set(),
            0b110.into_set(),
        ],
    )?;
    let d = Arc::new(d);
    let f = ChoiceFunction::new(d.clone(), vec![0b010.into_set(), 0b011.into_set(), 0b001.into_set(), 0b010.into_set()])?;
    let l = Layering::new(&names, vec![0b011.into_set(), 0b100.into_set()])?;

    let s = construct_general(&f, &l)?;
    println!("general: {} copies", s.copy_count());
    for c in 0..s.copy_count() {
        println!("  {:<6} attacked by copies of {}", s.copy_name(c), d.show(s.attacker_points(c)));
    }
    println!("{}", verify_representation(&s, &f));
    println!("{}", s.is_a_ranked(&l)?);

    let t = construct_transitive(&f, &l, 4)?;
    println!("\ntransitive: {} copies, ranked mode {}", t.structure.copy_count(), t.a_ranked_mode);
    if let Some(ob) = &t.obstruction {
        println!("  no rank attacks because {ob}");
    }
    println!("{}", verify_representation(&t.structure, &f));
    println!("{}", t.structure.is_transitive());
    Ok(())
}

trait IntoSet {
    fn into_set(self) -> arank::PointSet;
}

impl IntoSet for u64 {
    fn into_set(self) -> arank::PointSet {
        arank::PointSet::from_bits(self)
    }
}
