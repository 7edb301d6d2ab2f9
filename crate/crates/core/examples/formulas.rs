//! Parsing, printing and model sets.

use arank::logic::{defining_formula, models_of, parse_formula, theory_of, valuation_name, Theory, Vocabulary};

fn main() -> arank::Result<()> {
    let v = Vocabulary::new(&["p", "q", "r"])?;
    for text in ["p -> q -> r", "~p & q | r", "(p <-> q) & ~r", "T", "p & ~p"] {
        let f = parse_formula(text, &v)?;
        let t = Theory::new(vec![f.clone()]);
        let m = models_of(&t, &v);
        let vals: Vec<String> = m.iter().map(|x| valuation_name(&v, x)).collect();
        println!("{text:<16} parsed {:<24} models {}", f.display(&v).to_string(), vals.len());
        println!("{:<16} back as {}", "", defining_formula(&m, &v).display(&v));
        let _ = theory_of(&m, &v);
    }
    match parse_formula("p & (q |", &v) {
        Err(e) => println!("{e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
