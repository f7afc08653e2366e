//! Acceptance harness: one pass/fail line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqtop::fixtures::{self, FixtureDescriptor};
use seqtop::limit_ops::{order_of, OperatorOrder, TailLimitOperator};
use seqtop::predicate::{brute_force_horizon, Expr, Norm1, Norm2};
use seqtop::sweeps::{self, FiniteSweep};

struct Line {
    ok: bool,
    text: String,
}

fn line(ok: bool, n: usize, text: String) -> Line {
    Line {
        ok,
        text: format!(
            "[{}] criterion {n}: {text}",
            if ok { "PASS" } else { "FAIL" }
        ),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn examples(ex: &[String]) -> String {
    if ex.is_empty() {
        String::new()
    } else {
        format!(" first: {}", ex[0])
    }
}

fn refinement(s: &FiniteSweep, took: Duration) -> Line {
    let at4 =
        seqtop::enumerate::all_topologies(&seqtop::topology::GroundSet::anonymous(4).unwrap())
            .unwrap()
            .len();
    let r = &s.refinement;
    let ok = r.ok() && at4 == 355 && took <= Duration::from_secs(300);
    line(
        ok,
        1,
        format!(
            "refinement sweep n<=4: {} topologies ({at4} at n=4), {} designations, {} failures, {}{}",
            s.topologies,
            r.instances,
            r.failures,
            secs(took),
            examples(&r.examples)
        ),
    )
}

fn derived(s: &FiniteSweep) -> Line {
    let r = &s.derived;
    line(
        r.ok(),
        2,
        format!(
            "derived topology of starred operator equals refinement, chain holds: {} instances, {} failures{}",
            r.instances,
            r.failures,
            examples(&r.examples)
        ),
    )
}

fn theorem_suite() -> Line {
    let t0 = Instant::now();
    let ex = sweeps::exhaustive_theorem_sweep(3).expect("exhaustive sweep runs");
    let rnd = sweeps::random_theorem_sweep(10_000, 5, 1).expect("random sweep runs");
    let ok = ex.outcome.ok() && rnd.outcome.ok() && rnd.operators >= 10_000;
    let mut first = ex.outcome.examples.clone();
    first.extend(rnd.outcome.examples.iter().cloned());
    line(
        ok,
        3,
        format!(
            "theorem suite: exhaustive n<=3 {} operators / {} instances ({} pass, {} hypothesis not met, {} fail); \
             random n<=5 {} operators ({} pass, {} hypothesis not met, {} fail), {}{}",
            ex.operators,
            ex.instances,
            ex.passes,
            ex.hypothesis_not_met,
            ex.outcome.failures,
            rnd.operators,
            rnd.passes,
            rnd.hypothesis_not_met,
            rnd.outcome.failures,
            secs(t0.elapsed()),
            examples(&first)
        ),
    )
}

fn orders(s: &FiniteSweep) -> Line {
    let cascade =
        fixtures::generate(&FixtureDescriptor::new("cascade-order2")).expect("cascade fixture");
    let l = TailLimitOperator::from_json(&cascade.data.to_string()).expect("cascade parses");
    let c = order_of(&l).expect("order");
    let p = order_of(&fixtures::pruned_operator()).expect("order");
    let ok = c == OperatorOrder::KthOrder(2)
        && p == OperatorOrder::NotAnyOrder
        && s.associated_order.ok();
    line(
        ok,
        4,
        format!(
            "cascade {c}, pruned {p}, associated operators {} of {} first order",
            s.associated_order.instances - s.associated_order.failures,
            s.associated_order.instances
        ),
    )
}

fn causal_fixtures() -> Line {
    let t0 = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for id in [
        "removed-point",
        "example-A1",
        "example-A2",
        "example-A3",
        "example-A4",
    ] {
        match fixtures::generate(&FixtureDescriptor::new(id)) {
            Ok(f) => parts.push(format!("{id} {} claims", f.manifest.claims.len())),
            Err(e) => {
                ok = false;
                parts.push(format!("{id} FAILED ({e})"));
            }
        }
    }
    let took = t0.elapsed();
    ok &= took <= Duration::from_secs(60);
    line(
        ok,
        5,
        format!(
            "causal fixtures match manifests: {}; {}",
            parts.join(", "),
            secs(took)
        ),
    )
}

/// Brute force over `[0, 3TK)` for the joint bound of both predicates; the eventual
/// quantifiers read the window `[2TK, 3TK)`. The bound of a conjunction is not used,
/// because constructing it may fold a constant operand away.
fn window(e1: &Expr, e2: &Expr) -> (u64, u64, std::ops::Range<u64>) {
    let (h1, h2) = (brute_force_horizon(e1), brute_force_horizon(e2));
    let ((t1, k1), (t2, k2)) = (e1.bounds(), e2.bounds());
    let (t, k) = (t1.max(t2), lcm(k1, k2));
    let h = (3 * t * k).max(h1).max(h2);
    (t, h, (2 * h / 3)..h)
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn symbolic() -> Line {
    const COUNT: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut decisions = 0usize;
    let mut mismatches = Vec::new();
    let mut check = |ok: bool, what: String, decisions: &mut usize| {
        *decisions += 1;
        if !ok && mismatches.len() < 5 {
            mismatches.push(what);
        }
        ok
    };
    let mut bad = 0usize;
    for i in 0..COUNT {
        if i % 2 == 0 {
            let e1 = common::random_qf(&mut rng, 1, 3);
            let e2 = common::random_qf(&mut rng, 1, 3);
            let (n1, n2) = (Norm1::of(&e1, 0).unwrap(), Norm1::of(&e2, 0).unwrap());
            let (_, h, tail) = window(&e1, &e2);
            let at = |e: &Expr, n: u64| e.eval(&[n]);
            let show = |e: &Expr| e.show(&["n"]);
            let r = [
                check(
                    n1.is_empty() == !(0..h).any(|n| at(&e1, n)),
                    format!("empty {}", show(&e1)),
                    &mut decisions,
                ),
                check(
                    n1.is_subset(&n2) == (0..h).all(|n| !at(&e1, n) || at(&e2, n)),
                    format!("inclusion {} in {}", show(&e1), show(&e2)),
                    &mut decisions,
                ),
                check(
                    n1.almost_all() == tail.clone().all(|n| at(&e1, n)),
                    format!("almost all {}", show(&e1)),
                    &mut decisions,
                ),
                check(
                    n1.infinitely() == tail.clone().any(|n| at(&e1, n)),
                    format!("infinitely {}", show(&e1)),
                    &mut decisions,
                ),
            ];
            bad += r.iter().filter(|&&x| !x).count();
        } else {
            let e1 = common::random_qf(&mut rng, 2, 3);
            let e2 = common::random_qf(&mut rng, 2, 3);
            let n1 = Norm2::of(&e1, 0, 1).unwrap();
            let diff = Norm2::of(&Expr::and([e1.clone(), Expr::not(e2.clone())]), 0, 1).unwrap();
            let (t, h, tail) = window(&e1, &e2);
            let at = |e: &Expr, a: u64, b: u64| e.eval(&[a, b]);
            let show = |e: &Expr| e.show(&["m", "n"]);
            let grid = |f: &dyn Fn(u64, u64) -> bool| (0..h).any(|a| (0..h).any(|b| f(a, b)));
            let mut r = vec![
                check(
                    n1.is_empty() == !grid(&|a, b| at(&e1, a, b)),
                    format!("empty {}", show(&e1)),
                    &mut decisions,
                ),
                check(
                    diff.is_empty() == !grid(&|a, b| at(&e1, a, b) && !at(&e2, a, b)),
                    format!("inclusion {} in {}", show(&e1), show(&e2)),
                    &mut decisions,
                ),
            ];
            // A fixed first index below T keeps every threshold in the second under 2T.
            let a = rng.gen_range(0..t);
            let s = n1.slice_left(a);
            r.push(check(
                s.almost_all() == tail.clone().all(|b| at(&e1, a, b)),
                format!("almost all n at m={a}: {}", show(&e1)),
                &mut decisions,
            ));
            r.push(check(
                s.infinitely() == tail.clone().any(|b| at(&e1, a, b)),
                format!("infinitely n at m={a}: {}", show(&e1)),
                &mut decisions,
            ));
            bad += r.iter().filter(|&&x| !x).count();
        }
    }
    line(
        bad == 0,
        6,
        format!(
            "symbolic decisions vs brute force on [0, 3TK): {} predicates, {decisions} decisions, {bad} mismatches{}",
            2 * COUNT,
            examples(&mismatches)
        ),
    )
}

fn density(s: &FiniteSweep) -> Line {
    let d = &s.density;
    line(
        d.outcome.ok(),
        7,
        format!(
            "density over {} instances: dense before {}, after {}, lost {}; witnessed {} (all dense before); \
             witnessed with preserved limits {} (all dense after; only D = X qualifies on finite spaces){}",
            d.outcome.instances,
            d.dense_before,
            d.dense_after,
            d.lost,
            d.witnessed,
            d.witnessed_and_preserved,
            examples(&d.outcome.examples)
        ),
    )
}

fn main() {
    let t0 = Instant::now();
    let sweep = sweeps::finite_sweep(4).expect("finite sweep runs");
    let took = t0.elapsed();
    let lines = [
        refinement(&sweep, took),
        derived(&sweep),
        theorem_suite(),
        orders(&sweep),
        causal_fixtures(),
        symbolic(),
        density(&sweep),
    ];
    for l in &lines {
        println!("{}", l.text);
    }
    let failed = lines.iter().filter(|l| !l.ok).count();
    println!(
        "acceptance: {} of {} criteria pass",
        lines.len() - failed,
        lines.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
