//! Pumping several contexts simultaneously with one shared loop state.

use treepump::{ogden_decompose_multi, parse_dta, pump_multi, verify_witness, Marking, Tree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Even number of g's above a.
    let dta = parse_dta(
        "alphabet: g/1 a/0\nstates: even odd\nfinal: even\n\
         trans: a -> even\ntrans: g(even) -> odd\ntrans: g(odd) -> even\n",
    )?;
    let tree = Tree::unary_chain("g", 14, Tree::leaf("a"));
    let marks = Marking::all(&tree);
    for mfold in [2, 3] {
        let w = ogden_decompose_multi(&dta, &tree, &marks, mfold)?;
        let chain: Vec<String> = w.chain.iter().map(ToString::to_string).collect();
        println!(
            "m={mfold}: p = {}, state {}, c' = {}, chain = [{}], t' = {}",
            w.p_used,
            dta.state_name(w.state),
            w.cprime,
            chain.join(", "),
            w.tprime
        );
        for n in 0..3 {
            let t = pump_multi(&w, n);
            println!("  n={n}: size {} accepted {}", t.size(), dta.accepts(&t)?);
        }
        println!("  verification passed: {}", verify_witness(&dta, &w, 3).passed());
    }
    Ok(())
}
