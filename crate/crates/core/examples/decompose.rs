//! Cutting a marked tree into a chain of contexts along interesting nodes.

use treepump::decompose::interesting_nodes;
use treepump::{decompose_k, g_sigma, parse_tree, RankedAlphabet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = RankedAlphabet::new([("f", 2), ("g", 1), ("a", 0)])?;
    let (tree, marks) = parse_tree(&alphabet, "f(g!(f(g!(a!),a!)),f(a!,g(g!(a!))))")?;
    let interesting = interesting_nodes(&tree, &marks);
    let shown: Vec<String> = interesting.iter().map(ToString::to_string).collect();
    println!("tree: {tree}");
    println!("{} marks, interesting: {}", marks.len(), shown.join(" "));

    for k in 1..=3 {
        let needed = g_sigma(alphabet.max_rank(), k)?;
        match decompose_k(&tree, &marks, k) {
            Ok(d) => {
                let chain: Vec<String> = d.chain.iter().map(ToString::to_string).collect();
                let cuts: Vec<String> = d.cuts.iter().map(ToString::to_string).collect();
                println!(
                    "k={k} (g = {needed}): c' = {}, chain = [{}], t' = {}",
                    d.cprime,
                    chain.join(", "),
                    d.tprime
                );
                println!(
                    "  cuts {} marks per link {:?}, inner marks {}",
                    cuts.join(" "),
                    d.chain_marks,
                    d.inner_marks
                );
                assert_eq!(d.recompose(), tree);
            }
            Err(e) => println!("k={k} (g = {needed}): {e}"),
        }
    }
    Ok(())
}
