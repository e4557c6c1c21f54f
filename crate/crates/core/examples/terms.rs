//! Parsing, splitting and pumping trees by hand.

use treepump::{parse_context, parse_tree, render, Address, RankedAlphabet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = RankedAlphabet::new([("f", 2), ("g", 1), ("a", 0)])?;
    let (tree, marks) = parse_tree(&alphabet, "f(g!(g(a)),g!(a))")?;
    println!("tree:   {tree}");
    println!("marked: {}", render(&tree, &marks));
    println!("size {} height {}", tree.size(), tree.height());
    for u in tree.addresses() {
        println!("  {u:<6} {}", tree.get(&u).unwrap().label());
    }

    let outer: Address = "1".parse()?;
    let inner: Address = "1.1".parse()?;
    let (cprime, c, tprime) = tree.split(&outer, &inner)?;
    println!("split at ({outer}, {inner}): c' = {cprime}, c = {c}, t' = {tprime}");
    println!("marks in c: {}", marks.count_between(&outer, &inner));
    for n in 0..4 {
        println!("  n={n}: {}", cprime.substitute(&c.power(n).substitute(&tprime)));
    }

    let (d, _) = parse_context(&alphabet, "f(@,a)")?;
    println!("{d} composed with {c}: {}", d.compose(&c));
    Ok(())
}
