//! The classic pumping game on f(g^n a, g^n a): every decomposition is refuted.

use treepump::{builtin_oracle, play, GameConstraint, Tree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = builtin_oracle("L1")?;
    for p in 2..=4 {
        let branch = Tree::unary_chain("g", p, Tree::leaf("a"));
        let tree = Tree::new("f", vec![branch.clone(), branch]);
        let report = play(&oracle, &tree, &GameConstraint::Classic { p }, 2);
        println!("p={p}: {} decompositions, {}", report.verdicts.len(), report.outcome());
    }
    let branch = Tree::unary_chain("g", 3, Tree::leaf("a"));
    let tree = Tree::new("f", vec![branch.clone(), branch]);
    print!("{}", play(&oracle, &tree, &GameConstraint::Classic { p: 3 }, 2));
    Ok(())
}
