//! Loading an automaton, annotating runs and listing its language.

use treepump::{parse_dta, parse_tree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dta = parse_dta(include_str!("../data/parity.dta"))?;
    print!("{dta}");
    println!("pumping constant: {}", dta.pumping_constant());

    for text in ["f(a,g(a))", "f(a,f(a,a))", "g(g(a))"] {
        let (tree, _) = parse_tree(dta.alphabet(), text)?;
        let verdict = if dta.accepts(&tree)? { "accept" } else { "reject" };
        println!("{tree}: {verdict}");
        if let Some(run) = dta.annotate(&tree)? {
            for (u, q) in run.iter() {
                println!("  {u:<4} {}", dta.state_name(q));
            }
        }
    }

    let language = dta.enumerate_language(5);
    println!("{} accepted trees of size <= 5:", language.len());
    for t in &language {
        println!("  {t}");
    }
    Ok(())
}
