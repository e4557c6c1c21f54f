//! Acceptance gate: one check per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p treepump --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use treepump::automata::Dta;
use treepump::decompose::{decompose_k, depth_d, g_sigma, interesting_nodes};
use treepump::game::{builtin_oracle, play, GameConstraint, Outcome};
use treepump::pump::{ogden_decompose, ogden_decompose_multi, pump_multi, verify_witness};
use treepump::terms::{Address, Context, Marking, Tree};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn l1_tree(n: usize) -> Tree {
    let branch = Tree::unary_chain("g", n, Tree::leaf("a"));
    Tree::new("f", vec![branch.clone(), branch])
}

fn l2_tree(n: usize, h: usize) -> Tree {
    let branch = Tree::unary_chain("g", n, Tree::unary_chain("h", h, Tree::leaf("a")));
    Tree::new("f", vec![branch.clone(), branch])
}

/// 1. Split then recompose is exact on 1,000 random trees.
fn recomposition() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let alphabet = alphabet_up_to(3);
    let mut pairs = 0;
    for _ in 0..1000 {
        let size = rng.random_range(2..=50);
        let t = random_tree(&mut rng, &alphabet, size);
        let nodes = t.addresses();
        for _ in 0..3 {
            let v = &nodes[rng.random_range(1..nodes.len())];
            let ancestors: Vec<Address> = v.ancestors().collect();
            let u = &ancestors[rng.random_range(0..ancestors.len())];
            let (cprime, c, tprime) = t.split(u, v).map_err(|e| e.to_string())?;
            ensure(c.size() >= 1, || format!("empty c for {t} at ({u},{v})"))?;
            ensure(cprime.substitute(&c.substitute(&tprime)) == t, || {
                format!("recomposition failed for {t} at ({u},{v})")
            })?;
            pairs += 1;
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("1000 trees, {pairs} pairs, {took:.2?}"))
}

/// 2. The k-context decomposition meets its guarantees once |marks| ≥ g_Σ(k).
fn decomposition_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..500 {
        let m = rng.random_range(1..=3);
        let k = rng.random_range(1..=4);
        let alphabet = alphabet_up_to(m);
        let p = g_sigma(m, k).unwrap() as usize;
        let size = rng.random_range(p..=p + 40);
        let t = random_tree(&mut rng, &alphabet, size);
        let count = rng.random_range(p..=size);
        let marks = random_marking(&mut rng, &t, count);
        let d = decompose_k(&t, &marks, k).map_err(|e| format!("instance {i} (m={m}, k={k}, |marks|={count}): {e}"))?;
        ensure(d.chain.len() == k && d.cuts.len() == k + 1, || {
            format!("instance {i}: wrong arity")
        })?;
        for (j, pair) in d.cuts.windows(2).enumerate() {
            let owned = marks_between(&marks, &pair[0], Some(&pair[1]));
            ensure(owned >= 1, || format!("instance {i}: c_{} owns no mark", j + 1))?;
            ensure(owned == d.chain_marks[j], || {
                format!("instance {i}: mark count mismatch")
            })?;
            ensure(d.chain[j].size() >= 1, || format!("instance {i}: empty c_{}", j + 1))?;
            ensure(pair[0].is_strict_prefix_of(&pair[1]), || {
                format!("instance {i}: cuts not a chain")
            })?;
        }
        let inner = marks_between(&marks, &d.cuts[0], None);
        ensure(inner <= p, || {
            format!("instance {i}: inner tree carries {inner} > {p} marks")
        })?;
        ensure(d.recompose() == t, || format!("instance {i}: recomposition differs"))?;
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("500 instances, {took:.2?}"))
}

/// 3. Counting properties of interesting nodes and the depth function.
fn counting_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..500 {
        let m = rng.random_range(1..=3);
        let alphabet = alphabet_up_to(m);
        let size = rng.random_range(1..=60);
        let t = random_tree(&mut rng, &alphabet, size);
        let count = rng.random_range(0..=size);
        let marks = random_marking(&mut rng, &t, count);
        let interesting = interesting_nodes(&t, &marks);
        ensure(interesting == interesting_by_fixpoint(&t, &marks), || {
            format!("instance {i}: interesting set differs from the fixpoint")
        })?;
        let depth: BTreeMap<&Address, usize> = interesting
            .iter()
            .map(|u| (u, depth_d(&t, &interesting, u).unwrap()))
            .collect();
        // Every interesting node has a mark below it.
        for u in &interesting {
            ensure(marks.iter().any(|w| u.is_prefix_of(w)), || {
                format!("instance {i}: no mark below interesting {u}")
            })?;
        }
        // A single topmost interesting node.
        if !marks.is_empty() {
            let roots = depth.values().filter(|&&d| d == 0).count();
            ensure(roots == 1, || {
                format!("instance {i}: {roots} interesting nodes with d = 0")
            })?;
        }
        // Branching is bounded by the max rank.
        for (u, &du) in &depth {
            let next = depth
                .iter()
                .filter(|(v, &dv)| dv == du + 1 && u.is_strict_prefix_of(v))
                .count();
            ensure(next <= m, || {
                format!("instance {i}: {u} has {next} > {m} next-level descendants")
            })?;
        }
        // Shallow interesting nodes are bounded by g.
        for k in 1..=4 {
            let shallow = depth.values().filter(|&&d| d < k).count() as u64;
            let bound = g_sigma(m, k - 1).unwrap();
            ensure(shallow <= bound, || {
                format!("instance {i}: {shallow} > g({}) = {bound}", k - 1)
            })?;
        }
    }
    Ok("500 instances, zero violations".into())
}

struct Instance {
    dta: Dta,
    tree: Tree,
    marks: Marking,
}

/// A random DTA over {f/2, g/1, a/0} with 1..=3 states together with an
/// accepted tree carrying at least `threshold(|Q|)` random marks. Trees come
/// from `enumerate_language` up to threshold 15 and from a feasibility-guided
/// sampler beyond it.
fn random_instance(rng: &mut ChaCha8Rng, threshold: impl Fn(usize) -> usize) -> Instance {
    loop {
        let states = rng.random_range(1..=3);
        let dta = random_dta(rng, &fga(), states, 0.8);
        let p = threshold(states);
        let tree = if p <= 15 {
            let bound = if p <= 9 { p + 2 } else { p };
            let pool: Vec<Tree> = dta
                .enumerate_language(bound)
                .into_iter()
                .filter(|t| t.size() >= p)
                .collect();
            if pool.is_empty() {
                continue;
            }
            pool[rng.random_range(0..pool.len())].clone()
        } else {
            let feasible = Feasibility::new(&dta, p + 12);
            let sizes = feasible.accepted_sizes(p..=p + 12);
            if sizes.is_empty() {
                continue;
            }
            let size = sizes[rng.random_range(0..sizes.len())];
            feasible.sample_accepted(rng, size)
        };
        let count = rng.random_range(p..=tree.size());
        let marks = random_marking(rng, &tree, count);
        return Instance { dta, tree, marks };
    }
}

/// 4. Pump witnesses on 100 random small automata.
fn pump_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let Instance { dta, tree, marks } = random_instance(&mut rng, |q| g_sigma(2, q).unwrap() as usize);
        ensure(dta.accepts(&tree).unwrap(), || {
            format!("instance {i}: sampled tree rejected")
        })?;
        let w = ogden_decompose(&dta, &tree, &marks).map_err(|e| format!("instance {i}: {e}\n{dta}{tree}"))?;
        let report = verify_witness(&dta, &w, 4);
        ensure(report.passed(), || {
            format!("instance {i}: verification failed\n{report}")
        })?;
        let in_c = marks_between(&marks, &w.outer, Some(&w.inner));
        let in_inner = marks_between(&marks, &w.outer, None);
        ensure(in_c >= 1, || format!("instance {i}: no mark in c"))?;
        ensure(in_inner as u64 <= w.p_used, || {
            format!("instance {i}: {in_inner} marks in c·t'")
        })?;
        ensure(w.p_used == dta.pumping_constant(), || {
            format!("instance {i}: p_used mismatch")
        })?;
        ensure(treepump::pump(&w, 1) == tree, || format!("instance {i}: n = 1 differs"))?;
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("100 automata, {took:.2?}"))
}

/// 5. Simultaneous m-fold pumping for m ∈ {2, 3}.
fn multi_pump_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    for mfold in [2, 3] {
        for i in 0..100 {
            let Instance { dta, tree, marks } = random_instance(&mut rng, |q| g_sigma(2, mfold * q).unwrap() as usize);
            let w = ogden_decompose_multi(&dta, &tree, &marks, mfold)
                .map_err(|e| format!("m={mfold} instance {i}: {e}"))?;
            ensure(w.chain.len() == mfold && w.cuts.len() == mfold + 1, || {
                format!("m={mfold} instance {i}: wrong shape")
            })?;
            let run = dta.annotate(&tree).unwrap().unwrap();
            let repeated = w.cuts.iter().filter(|u| run.get(u) == Some(w.state)).count();
            ensure(repeated > mfold, || {
                format!("m={mfold} instance {i}: state occurs {repeated} times")
            })?;
            for (j, pair) in w.cuts.windows(2).enumerate() {
                ensure(marks_between(&marks, &pair[0], Some(&pair[1])) >= 1, || {
                    format!("m={mfold} instance {i}: C_{} unmarked", j + 1)
                })?;
                ensure(w.chain[j].size() >= 1, || {
                    format!("m={mfold} instance {i}: C_{} empty", j + 1)
                })?;
            }
            let inner = marks_between(&marks, &w.cuts[0], None);
            ensure(inner as u64 <= w.p_used, || {
                format!("m={mfold} instance {i}: {inner} inner marks")
            })?;
            for n in 0..=3 {
                ensure(dta.accepts(&pump_multi(&w, n)).unwrap(), || {
                    format!("m={mfold} instance {i}: pumped n={n} rejected")
                })?;
            }
            ensure(verify_witness(&dta, &w, 0).certificate_holds(), || {
                format!("m={mfold} instance {i}: certificate fails")
            })?;
            count += 1;
        }
    }
    let took = start.elapsed();
    Ok(format!("{count} instances, {took:.2?}"))
}

/// 6. L1 is won in the classic game, and n = 2 refutes every move.
fn l1_reproduction() -> Verdict {
    let oracle = builtin_oracle("L1").unwrap();
    let mut moves = 0;
    for p in 2..=6 {
        let start = Instant::now();
        let t = l1_tree(p);
        let constraint = GameConstraint::Classic { p };
        let report = play(&oracle, &t, &constraint, 2);
        ensure(report.outcome() == Outcome::WeWin, || {
            format!("p={p}: adversary survives")
        })?;
        ensure(!report.verdicts.is_empty(), || format!("p={p}: no legal moves"))?;
        for (mv, _) in &report.verdicts {
            ensure(!oracle.contains(&mv.pump(2)), || {
                format!("p={p}: n=2 does not refute {}", mv.c)
            })?;
        }
        moves += report.verdicts.len();
        within(Duration::from_secs(1), start)?;
    }
    Ok(format!("p = 2..6, {moves} moves refuted"))
}

/// 7. The adversary survives the classic game on L2 via c = h(∘), t' = a.
fn l2_classic_survival() -> Verdict {
    let oracle = builtin_oracle("L2").unwrap();
    for p in 2..=5 {
        let t = l2_tree(p, 2);
        let report = play(&oracle, &t, &GameConstraint::Classic { p }, 10);
        ensure(report.outcome() == Outcome::AdversarySurvives, || {
            format!("p={p}: we win")
        })?;
        let h_loop = report
            .survivors()
            .any(|mv| mv.c == Context::unary("h") && mv.tprime == Tree::leaf("a"));
        ensure(h_loop, || format!("p={p}: c = h(∘), t' = a is not among the survivors"))?;
    }
    Ok("p = 2..5".into())
}

/// 8. Marking the g-nodes wins the Ogden game on L2.
fn l2_ogden_win() -> Verdict {
    let oracle = builtin_oracle("L2").unwrap();
    for p in 2..=5 {
        let start = Instant::now();
        let t = l2_tree(p, 1);
        let marks = Marking::by_label(&t, |l| l == "g");
        let report = play(&oracle, &t, &GameConstraint::Ogden { p, marks }, 2);
        ensure(report.outcome() == Outcome::WeWin, || {
            format!("p={p}: adversary survives")
        })?;
        ensure(!report.verdicts.is_empty(), || format!("p={p}: no legal moves"))?;
        for (mv, _) in &report.verdicts {
            let has_g =
                mv.c.skeleton()
                    .addresses()
                    .iter()
                    .any(|u| mv.c.skeleton().get(u).unwrap().label() == "g");
            ensure(has_g, || format!("p={p}: c = {} has no g", mv.c))?;
            ensure(!oracle.contains(&mv.pump(2)), || {
                format!("p={p}: n=2 does not refute {}", mv.c)
            })?;
        }
        within(Duration::from_secs(1), start)?;
    }
    Ok("p = 2..5".into())
}

/// 9. `enumerate_language` agrees with `accepts` on every tree of size ≤ 7.
fn oracle_coherence() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let universe = all_trees(&fga(), 7);
    for i in 0..20 {
        let states = rng.random_range(1..=3);
        let dta = random_dta(&mut rng, &fga(), states, 0.7);
        let listed = dta.enumerate_language(7);
        let set: BTreeSet<&Tree> = listed.iter().collect();
        ensure(set.len() == listed.len(), || format!("automaton {i}: duplicates"))?;
        for t in &universe {
            let accepted = dta.accepts(t).unwrap();
            ensure(accepted == set.contains(t), || {
                format!("automaton {i}: disagreement on {t}")
            })?;
        }
        let keys: Vec<(usize, String)> = listed.iter().map(|t| (t.size(), t.to_string())).collect();
        ensure(keys.windows(2).all(|w| w[0] < w[1]), || {
            format!("automaton {i}: not ordered")
        })?;
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("20 automata over {} trees, {took:.2?}", universe.len()))
}

fn cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_treepump"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

/// 10. The three documented CLI invocations match their golden outputs byte for byte.
fn cli_goldens() -> Verdict {
    let cases: [(&[&str], &[u8], i32); 3] = [
        (
            &["gsigma", "--max-rank", "2", "--k", "2"],
            include_bytes!("golden/gsigma.txt"),
            0,
        ),
        (
            &[
                "game",
                "--oracle",
                "L1",
                "--mode",
                "classic",
                "--p",
                "3",
                "--max-n",
                "2",
                "f(g(g(g(a))),g(g(g(a))))",
            ],
            include_bytes!("golden/game_l1.txt"),
            0,
        ),
        (
            &["member", "data/l3.dta", "g(g(a))"],
            include_bytes!("golden/member_l3.txt"),
            0,
        ),
    ];
    for (args, golden, code) in cases {
        let first = cli(args);
        let second = cli(args);
        ensure(first == second, || format!("`{}` is not deterministic", args.join(" ")))?;
        ensure(first.0 == golden, || {
            format!(
                "`{}` output differs:\n{}",
                args.join(" "),
                String::from_utf8_lossy(&first.0)
            )
        })?;
        ensure(first.1 == code, || format!("`{}` exited {}", args.join(" "), first.1))?;
    }
    let (game, _) = cli(cases[1].0);
    ensure(game.ends_with(b"overall: WE_WIN\n"), || {
        "game verdict is not WE_WIN".into()
    })?;
    Ok("3 invocations".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("recomposition", recomposition),
        ("decomposition guarantees", decomposition_suite),
        ("counting properties", counting_properties),
        ("pump witnesses", pump_suite),
        ("simultaneous pumping", multi_pump_suite),
        ("L1 classic win", l1_reproduction),
        ("L2 classic survival", l2_classic_survival),
        ("L2 ogden win", l2_ogden_win),
        ("enumeration coherence", oracle_coherence),
        ("cli goldens", cli_goldens),
    ];
    // Some sampled trees are deep chains; give the recursive helpers room.
    let failed = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || {
            let mut failed = 0;
            for (i, (name, check)) in criteria.iter().enumerate() {
                let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
                    let why = e
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                    Err(format!("panicked: {}", why.unwrap_or_default()))
                });
                // Written to the handle directly so the lines survive output capture.
                let line = match result {
                    Ok(detail) => format!("[PASS] {:>2} {name}: {detail}", i + 1),
                    Err(why) => {
                        failed += 1;
                        format!("[FAIL] {:>2} {name}: {why}", i + 1)
                    }
                };
                writeln!(std::io::stdout(), "{line}").unwrap();
            }
            failed
        })
        .unwrap()
        .join()
        .unwrap();
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
