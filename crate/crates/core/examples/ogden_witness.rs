//! Extracting a pump witness from an accepting run and checking it.

use treepump::{ogden_decompose, parse_dta, parse_tree, pump, standard_decompose, verify_witness, Marking};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dta = parse_dta(include_str!("../data/parity.dta"))?;
    let (tree, _) = parse_tree(dta.alphabet(), "g(f(g(g(a)),g(g(g(g(g(g(g(a)))))))))")?;
    println!("tree: {tree}, p = {}", dta.pumping_constant());

    // Marks restricted to the right branch force the loop there.
    let marks = Marking::new(
        &tree,
        tree.addresses()
            .into_iter()
            .filter(|u| u.indices().starts_with(&[1, 2])),
    )?;
    let w = ogden_decompose(&dta, &tree, &marks)?;
    println!(
        "c' = {}, c = {}, t' = {}, loop state {}",
        w.cprime,
        w.c,
        w.tprime,
        dta.state_name(w.state)
    );
    println!("cut at ({}, {}), {} marks in c", w.outer, w.inner, w.marks_in_c);
    for n in 0..4 {
        println!("  n={n}: {}", pump(&w, n));
    }
    print!("{}", verify_witness(&dta, &w, 4));

    let plain = standard_decompose(&dta, &tree)?;
    println!(
        "unmarked variant loops on {} at ({}, {})",
        plain.c, plain.outer, plain.inner
    );
    Ok(())
}
