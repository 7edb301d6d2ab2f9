//! Exhaustive small-scope runs: every table on two points, every one-copy
//! structure on three.

use std::sync::Arc;

use arank::choice::{require_conditions, MuCondition};
use arank::general::construct_general;
use arank::generate::{gen_choice_functions, point_names, GenMode};
use arank::structure::{enumerate_structures, verify_representation};
use arank::{Domain, Layering};

fn main() -> arank::Result<()> {
    let names = point_names(2);
    let d = Arc::new(Domain::powerset(names.clone(), false)?);
    let l = Layering::single(&names)?;
    let (mut built, mut refused) = (0, 0);
    for f in gen_choice_functions(d, true, GenMode::Exhaustive)? {
        match construct_general(&f, &l) {
            Ok(s) => {
                assert!(verify_representation(&s, &f).holds);
                built += 1;
            }
            Err(_) => refused += 1,
        }
    }
    println!("two points: {built} tables represented, {refused} refused");

    let names = point_names(3);
    let d = Arc::new(Domain::powerset(names.clone(), false)?);
    let mut passing = 0;
    let mut total = 0;
    for s in enumerate_structures(&names, 1)? {
        let f = s.induced_choice(&d)?;
        total += 1;
        if require_conditions(&f, None, &[MuCondition::Subset, MuCondition::Pr]).is_ok() {
            passing += 1;
        }
    }
    println!("three points: {passing} of {total} one-copy structures induce preferential tables");
    Ok(())
}
