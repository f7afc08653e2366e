#![allow(dead_code)]

use rand::Rng;
use seqtop::predicate::{Expr, Quantifier};

/// Random quantifier-free predicate over the first `vars` variables.
pub fn random_qf(rng: &mut impl Rng, vars: usize, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        let v = rng.gen_range(0..vars);
        let c = rng.gen_range(-2i64..=5);
        return match rng.gen_range(0..6) {
            0 => Expr::Ge(v, c),
            1 => Expr::Le(v, c),
            2 | 3 if vars > 1 => {
                let mut w = rng.gen_range(0..vars);
                if w == v {
                    w = (w + 1) % vars;
                }
                if rng.gen_bool(0.5) {
                    Expr::DiffGe(v, w, c.clamp(-4, 4))
                } else {
                    Expr::DiffLe(v, w, c.clamp(-4, 4))
                }
            }
            4 => {
                let k = rng.gen_range(1u64..=4);
                Expr::modulo(v, rng.gen_range(0..k as i64), k).unwrap()
            }
            _ => Expr::Const(rng.gen_bool(0.5)),
        };
    }
    match rng.gen_range(0..3) {
        0 => Expr::not(random_qf(rng, vars, depth - 1)),
        1 => Expr::and((0..rng.gen_range(2..=3)).map(|_| random_qf(rng, vars, depth - 1))),
        _ => Expr::or((0..rng.gen_range(2..=3)).map(|_| random_qf(rng, vars, depth - 1))),
    }
}

pub const QUANTIFIERS: [Quantifier; 4] = [
    Quantifier::Exists,
    Quantifier::Forall,
    Quantifier::AlmostAll,
    Quantifier::Infinitely,
];

/// Random predicate with free variables among `0..free` and up to `nest` quantifiers
/// binding variables `free..free + nest`.
pub fn random_quantified(rng: &mut impl Rng, free: usize, nest: usize) -> Expr {
    let total = free + nest;
    let mut e = random_qf(rng, total, 3);
    for v in (free..total).rev() {
        let q = QUANTIFIERS[rng.gen_range(0..4)];
        e = Expr::quant(q, v, e).unwrap();
        if v > free && rng.gen_bool(0.4) {
            e = Expr::and([e, random_qf(rng, v, 1)]);
        }
    }
    e
}

/// Reference semantics with no type bounds: with `M` the largest assigned value, `∃`/`∀`
/// range over `[0, M + horizon)` and `∀^∞`/`∃^∞` over `[M + horizon, M + 2·horizon)`.
pub fn eval_wide(e: &Expr, env: &mut Vec<u64>, horizon: u64) -> bool {
    match e {
        Expr::Not(x) => !eval_wide(x, env, horizon),
        Expr::And(xs) => xs.iter().all(|x| eval_wide(x, env, horizon)),
        Expr::Or(xs) => xs.iter().any(|x| eval_wide(x, env, horizon)),
        Expr::Quant(n) => {
            let saved = env[n.var];
            let far = env.iter().copied().max().unwrap_or(0) + horizon;
            let at = |x: u64, env: &mut Vec<u64>| {
                env[n.var] = x;
                eval_wide(&n.body, env, horizon)
            };
            let r = match n.q {
                Quantifier::Exists => (0..far).any(|x| at(x, env)),
                Quantifier::Forall => (0..far).all(|x| at(x, env)),
                Quantifier::AlmostAll => (far..far + horizon).all(|x| at(x, env)),
                Quantifier::Infinitely => (far..far + horizon).any(|x| at(x, env)),
            };
            env[n.var] = saved;
            r
        }
        e => e.eval(env),
    }
}
