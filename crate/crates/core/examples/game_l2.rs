//! f(g^n h^m1 a, g^n h^m2 a): the classic game is lost, marking the g's wins it.

use treepump::{builtin_oracle, play, GameConstraint, Marking, Tree};

fn l2(n: usize, h: usize) -> Tree {
    let branch = Tree::unary_chain("g", n, Tree::unary_chain("h", h, Tree::leaf("a")));
    Tree::new("f", vec![branch.clone(), branch])
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = builtin_oracle("L2")?;
    let p = 3;

    let classic = play(&oracle, &l2(p, 2), &GameConstraint::Classic { p }, 10);
    println!("classic on {}: {}", classic.tree, classic.outcome());
    for mv in classic.survivors() {
        println!(
            "  survivor: c = {}, t' = {} at ({}, {})",
            mv.c, mv.tprime, mv.outer, mv.inner
        );
    }

    let tree = l2(p, 1);
    let marks = Marking::by_label(&tree, |l| l == "g");
    let ogden = play(&oracle, &tree, &GameConstraint::Ogden { p, marks }, 2);
    println!("ogden on {}: {}", ogden.tree, ogden.outcome());
    print!("{ogden}");
    Ok(())
}
