//! Preferential entailment over valuations and the rules it satisfies.

use arank::bridge::{check_logic, closure_table, entail, valuation_names, LogicCondition};
use arank::logic::{parse_formula, Theory, Vocabulary};
use arank::PreferentialStructure;

fn main() -> arank::Result<()> {
    let v = Vocabulary::new(&["bird", "penguin"])?;
    let names = valuation_names(&v);
    let at = |n: &str| names.iter().position(|x| x == n).unwrap();
    // normal birds are preferred to penguins
    let s = PreferentialStructure::from_point_edges(
        names.clone(),
        &[(at("bird&~penguin"), at("bird&penguin"))],
    )?;

    for (theory, phi) in [
        (vec!["bird"], "~penguin"),
        (vec!["bird", "penguin"], "~penguin"),
        (vec!["penguin"], "bird"),
    ] {
        let t = Theory::parse(&theory, &v)?;
        let f = parse_formula(phi, &v)?;
        println!("{{{}}} |~ {phi}: {}", theory.join(", "), entail(&s, &v, &t, &f)?);
    }

    let ct = closure_table(&s, &v)?;
    for c in LogicCondition::ALL.into_iter().filter(|&c| c != LogicCondition::AMin) {
        println!("{}", check_logic(c, &ct, None)?);
    }
    Ok(())
}
