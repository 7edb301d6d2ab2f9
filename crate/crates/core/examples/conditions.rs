//! Every algebraic condition on a small choice table, with witnesses.
//!
//! `cargo run --example conditions`

use std::sync::Arc;

use arank::choice::{check_mu, MuCondition};
use arank::{ChoiceFunction, Domain, Layering};

fn main() -> arank::Result<()> {
    let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let d = Arc::new(Domain::powerset(names.clone(), false)?);
    // a beats b beats c, except that c survives against a alone
    let f = ChoiceFunction::from_fn(d.clone(), |y| {
        let ac = d.set_of(&["a", "c"]).unwrap();
        if y == ac {
            y
        } else {
            let first = y.first().expect("nonempty members");
            arank::PointSet::singleton(first)
        }
    })?;
    let l = Layering::new(&names, vec![d.set_of(&["a", "b"])?, d.set_of(&["c"])?])?;

    for c in MuCondition::ALL {
        let r = check_mu(c, &f, Some(&l))?;
        println!("{r}\n{:>20}{}", "", c.statement());
    }
    Ok(())
}
