//! Index predicates over natural-number variables: difference and congruence atoms,
//! boolean connectives, and the four index quantifiers `∃`, `∀`, `∀^∞`, `∃^∞`.
//!
//! Every expression carries a type bound `(T, K)`: its truth value depends only on
//! `min(x_i, T)`, `x_i mod K` and `clamp(x_i - x_j, -T, T)` over its free variables.
//! Quantifiers are decided on a finite window derived from that bound, and
//! normal forms are built by tabulating one type representative per class.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Var = usize;

/// Variables per expression, free and bound together.
pub const MAX_VARS: usize = 6;

/// Largest type threshold or modulus the engine agrees to tabulate.
pub const MAX_BOUND: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
    /// True for all but finitely many values.
    AlmostAll,
    /// True for infinitely many values.
    Infinitely,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    /// `x ≥ c`
    Ge(Var, i64),
    /// `x ≤ c`
    Le(Var, i64),
    /// `x - y ≥ c`
    DiffGe(Var, Var, i64),
    /// `x - y ≤ c`
    DiffLe(Var, Var, i64),
    /// `x ≡ r (mod k)` with `0 ≤ r < k`
    Mod(Var, u64, u64),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Quant(Box<QuantNode>),
    /// A normalized one-variable predicate applied to a variable.
    Table1(Var, Arc<Norm1>),
    /// A normalized two-variable predicate applied to `(x, y)`.
    Table2(Var, Var, Arc<Norm2>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantNode {
    pub q: Quantifier,
    pub var: Var,
    pub body: Expr,
    /// Type bound of `body`, cached at construction.
    body_t: u64,
    body_k: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn check_var(v: Var) -> Result<()> {
    if v >= MAX_VARS {
        return Err(Error::Capacity(format!(
            "variable index {v} exceeds {MAX_VARS}"
        )));
    }
    Ok(())
}

impl Expr {
    pub fn tt() -> Self {
        Expr::Const(true)
    }

    pub fn ff() -> Self {
        Expr::Const(false)
    }

    /// `x = c`
    pub fn eq(v: Var, c: i64) -> Self {
        Expr::And(vec![Expr::Ge(v, c), Expr::Le(v, c)])
    }

    #[allow(clippy::should_implement_trait)] // a smart constructor, like `and` and `or`
    pub fn not(e: Expr) -> Self {
        match e {
            Expr::Const(b) => Expr::Const(!b),
            Expr::Not(inner) => *inner,
            e => Expr::Not(Box::new(e)),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = Expr>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Expr::Const(true) => {}
                Expr::Const(false) => return Expr::Const(false),
                Expr::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Expr::Const(true),
            1 => out.pop().expect("one element"),
            _ => Expr::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Expr>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Expr::Const(false) => {}
                Expr::Const(true) => return Expr::Const(true),
                Expr::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Expr::Const(false),
            1 => out.pop().expect("one element"),
            _ => Expr::Or(out),
        }
    }

    pub fn modulo(v: Var, r: i64, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("modulus must be positive".into()));
        }
        if k > MAX_BOUND {
            return Err(Error::Capacity(format!("modulus {k} exceeds {MAX_BOUND}")));
        }
        Ok(Expr::Mod(v, r.rem_euclid(k as i64) as u64, k))
    }

    /// Quantifies `var` in `body`; fails if the resulting type bound is too large.
    pub fn quant(q: Quantifier, var: Var, body: Expr) -> Result<Self> {
        check_var(var)?;
        if body.free_vars() & (1 << var) == 0 {
            // The index domain is nonempty and infinite, so a vacuous quantifier is the identity.
            return Ok(body);
        }
        let (t, k) = body.bounds();
        if 2 * t + k > MAX_BOUND {
            return Err(Error::Capacity(format!(
                "quantifier type bound {} exceeds {MAX_BOUND}",
                2 * t + k
            )));
        }
        Ok(Expr::Quant(Box::new(QuantNode {
            q,
            var,
            body,
            body_t: t,
            body_k: k,
        })))
    }

    pub fn exists(var: Var, body: Expr) -> Result<Self> {
        Self::quant(Quantifier::Exists, var, body)
    }

    pub fn forall(var: Var, body: Expr) -> Result<Self> {
        Self::quant(Quantifier::Forall, var, body)
    }

    pub fn almost_all(var: Var, body: Expr) -> Result<Self> {
        Self::quant(Quantifier::AlmostAll, var, body)
    }

    pub fn infinitely(var: Var, body: Expr) -> Result<Self> {
        Self::quant(Quantifier::Infinitely, var, body)
    }

    /// Bit `i` set iff variable `i` occurs free.
    pub fn free_vars(&self) -> u32 {
        match self {
            Expr::Const(_) => 0,
            Expr::Ge(v, _) | Expr::Le(v, _) | Expr::Mod(v, _, _) | Expr::Table1(v, _) => 1 << v,
            Expr::DiffGe(a, b, _) | Expr::DiffLe(a, b, _) | Expr::Table2(a, b, _) => {
                (1 << a) | (1 << b)
            }
            Expr::Not(e) => e.free_vars(),
            Expr::And(es) | Expr::Or(es) => es.iter().fold(0, |acc, e| acc | e.free_vars()),
            Expr::Quant(n) => n.body.free_vars() & !(1 << n.var),
        }
    }

    /// Type bound `(T, K)`. A quantifier over a body with bound `(T, K)` has `(2T + K, K)`.
    pub fn bounds(&self) -> (u64, u64) {
        match self {
            Expr::Const(_) => (1, 1),
            Expr::Ge(_, c) | Expr::Le(_, c) | Expr::DiffGe(_, _, c) | Expr::DiffLe(_, _, c) => {
                (c.unsigned_abs() + 1, 1)
            }
            Expr::Mod(_, _, k) => (1, *k),
            Expr::Not(e) => e.bounds(),
            Expr::And(es) | Expr::Or(es) => es.iter().fold((1, 1), |(t, k), e| {
                let (t2, k2) = e.bounds();
                (t.max(t2), lcm(k, k2))
            }),
            Expr::Quant(n) => (2 * n.body_t + n.body_k, n.body_k),
            Expr::Table1(_, n) => (n.threshold().max(1) as u64, n.period() as u64),
            Expr::Table2(_, _, n) => (n.t, n.k),
        }
    }

    /// Truth value at `env`, indexed by variable. Missing variables read as 0.
    pub fn eval(&self, env: &[u64]) -> bool {
        let at = |v: Var| env.get(v).copied().unwrap_or(0) as i64;
        match self {
            Expr::Const(b) => *b,
            Expr::Ge(v, c) => at(*v) >= *c,
            Expr::Le(v, c) => at(*v) <= *c,
            Expr::DiffGe(a, b, c) => at(*a) - at(*b) >= *c,
            Expr::DiffLe(a, b, c) => at(*a) - at(*b) <= *c,
            Expr::Mod(v, r, k) => at(*v) as u64 % k == *r,
            Expr::Not(e) => !e.eval(env),
            Expr::And(es) => es.iter().all(|e| e.eval(env)),
            Expr::Or(es) => es.iter().any(|e| e.eval(env)),
            Expr::Table1(v, n) => n.eval(at(*v) as u64),
            Expr::Table2(a, b, n) => n.eval(at(*a) as u64, at(*b) as u64),
            Expr::Quant(n) => n.eval(env),
        }
    }

    /// Renames variables by `map[old] = new`, binders included.
    pub fn rename(&self, map: &[Var]) -> Expr {
        let r = |v: &Var| map.get(*v).copied().unwrap_or(*v);
        match self {
            Expr::Const(b) => Expr::Const(*b),
            Expr::Ge(v, c) => Expr::Ge(r(v), *c),
            Expr::Le(v, c) => Expr::Le(r(v), *c),
            Expr::DiffGe(a, b, c) => Expr::DiffGe(r(a), r(b), *c),
            Expr::DiffLe(a, b, c) => Expr::DiffLe(r(a), r(b), *c),
            Expr::Mod(v, x, k) => Expr::Mod(r(v), *x, *k),
            Expr::Not(e) => Expr::Not(Box::new(e.rename(map))),
            Expr::And(es) => Expr::And(es.iter().map(|e| e.rename(map)).collect()),
            Expr::Or(es) => Expr::Or(es.iter().map(|e| e.rename(map)).collect()),
            Expr::Table1(v, n) => Expr::Table1(r(v), n.clone()),
            Expr::Table2(a, b, n) => Expr::Table2(r(a), r(b), n.clone()),
            Expr::Quant(n) => Expr::Quant(Box::new(QuantNode {
                q: n.q,
                var: r(&n.var),
                body: n.body.rename(map),
                body_t: n.body_t,
                body_k: n.body_k,
            })),
        }
    }

    /// Substitutes the constant `value` for the free variable `var`.
    pub fn fix(&self, var: Var, value: u64) -> Expr {
        let c = value as i64;
        match self {
            Expr::Ge(v, x) if *v == var => Expr::Const(c >= *x),
            Expr::Le(v, x) if *v == var => Expr::Const(c <= *x),
            Expr::Mod(v, r, k) if *v == var => Expr::Const(value % k == *r),
            Expr::DiffGe(a, b, x) if *a == var && *b == var => Expr::Const(0 >= *x),
            Expr::DiffLe(a, b, x) if *a == var && *b == var => Expr::Const(0 <= *x),
            Expr::DiffGe(a, b, x) if *a == var => Expr::Le(*b, c - x),
            Expr::DiffGe(a, b, x) if *b == var => Expr::Ge(*a, x + c),
            Expr::DiffLe(a, b, x) if *a == var => Expr::Ge(*b, c - x),
            Expr::DiffLe(a, b, x) if *b == var => Expr::Le(*a, x + c),
            Expr::Table1(v, n) if *v == var => Expr::Const(n.eval(value)),
            Expr::Table2(a, b, n) if *a == var && *b == var => Expr::Const(n.eval(value, value)),
            Expr::Table2(a, b, n) if *a == var => Expr::Table1(*b, Arc::new(n.slice_left(value))),
            Expr::Table2(a, b, n) if *b == var => Expr::Table1(*a, Arc::new(n.slice_right(value))),
            Expr::Not(e) => Expr::not(e.fix(var, value)),
            Expr::And(es) => Expr::and(es.iter().map(|e| e.fix(var, value))),
            Expr::Or(es) => Expr::or(es.iter().map(|e| e.fix(var, value))),
            Expr::Quant(n) if n.var != var => {
                let body = n.body.fix(var, value);
                Expr::quant(n.q, n.var, body).expect("fixing a variable never raises the bound")
            }
            e => e.clone(),
        }
    }

    /// Renders the expression with `names[i]` for variable `i`.
    pub fn show(&self, names: &[&str]) -> String {
        let name = |v: &Var| {
            names
                .get(*v)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("x{v}"))
        };
        match self {
            Expr::Const(b) => b.to_string(),
            Expr::Ge(v, c) => format!("{}>={c}", name(v)),
            Expr::Le(v, c) => format!("{}<={c}", name(v)),
            Expr::DiffGe(a, b, c) => format!("{}-{}>={c}", name(a), name(b)),
            Expr::DiffLe(a, b, c) => format!("{}-{}<={c}", name(a), name(b)),
            Expr::Mod(v, r, k) => format!("{}%{k}=={r}", name(v)),
            Expr::Not(e) => format!("!({})", e.show(names)),
            Expr::And(es) => es
                .iter()
                .map(|e| wrap(e, names, true))
                .collect::<Vec<_>>()
                .join(" && "),
            Expr::Or(es) => es
                .iter()
                .map(|e| wrap(e, names, false))
                .collect::<Vec<_>>()
                .join(" || "),
            Expr::Table1(v, n) => format!("({})", n.show(&name(v))),
            Expr::Table2(a, b, n) => format!("table[{}x{}]({}, {})", n.t, n.k, name(a), name(b)),
            Expr::Quant(n) => {
                let q = match n.q {
                    Quantifier::Exists => "exists",
                    Quantifier::Forall => "forall",
                    Quantifier::AlmostAll => "almost_all",
                    Quantifier::Infinitely => "infinitely",
                };
                format!("{q} {}. ({})", name(&n.var), n.body.show(names))
            }
        }
    }
}

fn wrap(e: &Expr, names: &[&str], in_and: bool) -> String {
    match e {
        Expr::Or(_) if in_and => format!("({})", e.show(names)),
        Expr::And(_) if !in_and => e.show(names),
        _ => e.show(names),
    }
}

impl QuantNode {
    fn eval(&self, env: &[u64]) -> bool {
        let mut env: Vec<u64> = env.to_vec();
        env.resize(MAX_VARS.max(env.len()), 0);
        let others = self.body.free_vars() & !(1 << self.var);
        let m = (0..MAX_VARS)
            .filter(|i| others >> i & 1 == 1)
            .map(|i| env[i])
            .max()
            .unwrap_or(0);
        let (t, k) = (self.body_t, self.body_k);
        // Beyond M + T the body depends on the bound variable only modulo K.
        let range = match self.q {
            Quantifier::Exists | Quantifier::Forall => 0..m + t + k,
            Quantifier::AlmostAll | Quantifier::Infinitely => m + t..m + t + k,
        };
        let mut test = |x: u64| {
            env[self.var] = x;
            self.body.eval(&env)
        };
        match self.q {
            Quantifier::Exists | Quantifier::Infinitely => range.into_iter().any(&mut test),
            Quantifier::Forall | Quantifier::AlmostAll => range.into_iter().all(&mut test),
        }
    }
}

/// A one-variable predicate in canonical form: explicit values below the threshold,
/// then a repeating cycle. The cycle has least period and the threshold is least.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Norm1 {
    prefix: Vec<bool>,
    cycle: Vec<bool>,
}

impl Norm1 {
    pub fn new(mut prefix: Vec<bool>, mut cycle: Vec<bool>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Input("a cycle needs at least one value".into()));
        }
        let n = cycle.len();
        let p = (1..=n)
            .filter(|&d| n.is_multiple_of(d))
            .find(|&d| (d..n).all(|i| cycle[i] == cycle[i - d]))
            .expect("the full length is a period");
        cycle.truncate(p);
        while prefix.last().is_some_and(|&b| b == cycle[p - 1]) {
            prefix.pop();
            cycle.rotate_right(1);
        }
        Ok(Self { prefix, cycle })
    }

    pub fn constant(b: bool) -> Self {
        Self {
            prefix: vec![],
            cycle: vec![b],
        }
    }

    /// Tabulates `f` on `[0, t + k)`; `f` must be `k`-periodic from `t` on.
    pub fn tabulate(t: u64, k: u64, f: impl Fn(u64) -> bool) -> Result<Self> {
        if t + k > MAX_BOUND * 4 {
            return Err(Error::Capacity(format!(
                "one-variable table of size {} is too large",
                t + k
            )));
        }
        let prefix = (0..t).map(&f).collect();
        let cycle = (t..t + k).map(&f).collect();
        Self::new(prefix, cycle)
    }

    /// Normal form of `e`, whose only free variable may be `var`.
    pub fn of(e: &Expr, var: Var) -> Result<Self> {
        if e.free_vars() & !(1 << var) != 0 {
            return Err(Error::Input(format!(
                "expression has free variables besides {var}"
            )));
        }
        let (t, k) = e.bounds();
        Self::tabulate(t, k, |n| {
            let mut env = [0u64; MAX_VARS];
            env[var] = n;
            e.eval(&env)
        })
    }

    pub fn threshold(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn eval(&self, n: u64) -> bool {
        let t = self.prefix.len() as u64;
        if n < t {
            self.prefix[n as usize]
        } else {
            self.cycle[((n - t) % self.cycle.len() as u64) as usize]
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.prefix.iter().chain(&self.cycle).any(|&b| b)
    }

    pub fn is_all(&self) -> bool {
        self.prefix.iter().chain(&self.cycle).all(|&b| b)
    }

    /// Holds for all but finitely many indices.
    pub fn almost_all(&self) -> bool {
        self.cycle.iter().all(|&b| b)
    }

    /// Holds for infinitely many indices.
    pub fn infinitely(&self) -> bool {
        self.cycle.iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        !self.infinitely()
    }

    fn combine(&self, other: &Norm1, op: impl Fn(bool, bool) -> bool) -> Norm1 {
        let t = self.threshold().max(other.threshold()) as u64;
        let k = lcm(self.period() as u64, other.period() as u64);
        Norm1::tabulate(t, k, |n| op(self.eval(n), other.eval(n))).expect("bounded by the operands")
    }

    pub fn and(&self, other: &Norm1) -> Norm1 {
        self.combine(other, |a, b| a && b)
    }

    pub fn or(&self, other: &Norm1) -> Norm1 {
        self.combine(other, |a, b| a || b)
    }

    pub fn minus(&self, other: &Norm1) -> Norm1 {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Norm1 {
        Norm1 {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            cycle: self.cycle.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &Norm1) -> bool {
        self.minus(other).is_empty()
    }

    /// Satisfying indices below `bound`.
    pub fn members_below(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&n| self.eval(n)).collect()
    }

    pub fn to_expr(&self, var: Var) -> Expr {
        Expr::Table1(var, Arc::new(self.clone()))
    }

    /// Union of guarded boxes in the predicate grammar, e.g. `n==0 || n>=3 && n%2==1`.
    pub fn show(&self, v: &str) -> String {
        let t = self.threshold() as u64;
        let p = self.period() as u64;
        let mut parts = Vec::new();
        let mut i = 0;
        while i < t {
            if self.prefix[i as usize] {
                let mut j = i;
                while j + 1 < t && self.prefix[j as usize + 1] {
                    j += 1;
                }
                parts.push(if i == j {
                    format!("{v}=={i}")
                } else if i == 0 {
                    format!("{v}<={j}")
                } else {
                    format!("{v}>={i} && {v}<={j}")
                });
                i = j + 1;
            } else {
                i += 1;
            }
        }
        if p == 1 {
            if self.cycle[0] {
                parts.push(if t == 0 {
                    "true".to_string()
                } else {
                    format!("{v}>={t}")
                });
            }
        } else {
            for j in 0..p {
                if self.cycle[j as usize] {
                    let r = (t + j) % p;
                    parts.push(if t == 0 {
                        format!("{v}%{p}=={r}")
                    } else {
                        format!("{v}>={t} && {v}%{p}=={r}")
                    });
                }
            }
        }
        if parts.is_empty() {
            "false".into()
        } else {
            parts.join(" || ")
        }
    }
}

/// Equivalence class of an index pair at threshold `t` and modulus `k`.
type PairType = (u64, u64, i64, u64, u64);

fn pair_type(t: u64, k: u64, a: u64, b: u64) -> PairType {
    let ti = t as i64;
    (
        a.min(t),
        b.min(t),
        (a as i64 - b as i64).clamp(-ti, ti),
        a % k,
        b % k,
    )
}

/// Largest representative grid the engine tabulates for a two-variable predicate.
pub const MAX_GRID_SIDE: u64 = 512;

/// Side of the representative grid: every pair type at `(t, k)` has a member in it.
fn grid_side(t: u64, k: u64) -> u64 {
    3 * t + 2 * k
}

/// A two-variable predicate tabulated on pair types with the least modulus, then
/// the least threshold, under which it is type-invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Norm2 {
    t: u64,
    k: u64,
    table: HashMap<PairType, bool>,
}

impl std::hash::Hash for Norm2 {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.t.hash(state);
        self.k.hash(state);
        let mut rows: Vec<_> = self.table.iter().collect();
        rows.sort();
        rows.hash(state);
    }
}

impl Norm2 {
    /// Tabulates `f` on the representative grid of `(t, k)`; errors if `f` is not
    /// invariant under the pair types.
    pub fn tabulate(t: u64, k: u64, f: impl Fn(u64, u64) -> bool) -> Result<Self> {
        let t = t.max(1);
        let side = grid_side(t, k);
        if side > MAX_GRID_SIDE {
            return Err(Error::Capacity(format!(
                "two-variable table of side {side} is too large"
            )));
        }
        let mut values = Vec::with_capacity((side * side) as usize);
        for a in 0..side {
            for b in 0..side {
                values.push(f(a, b));
            }
        }
        let raw = Self::index_grid(t, k, side, &values).ok_or_else(|| {
            Error::Invariant(format!(
                "predicate is not invariant under pair types at ({t}, {k})"
            ))
        })?;
        let mut best = (t, k);
        let mut divisors: Vec<u64> = (1..=k).filter(|&d| k.is_multiple_of(d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            if Self::index_grid(t, d, side, &values).is_some() {
                best.1 = d;
                break;
            }
        }
        for t2 in 1..=t {
            if Self::index_grid(t2, best.1, side, &values).is_some() {
                best.0 = t2;
                break;
            }
        }
        let table = if best == (t, k) {
            raw
        } else {
            Self::index_grid(best.0, best.1, side, &values).expect("checked above")
        };
        Ok(Self {
            t: best.0,
            k: best.1,
            table,
        })
    }

    /// Maps each type at `(t, k)` to its value, or `None` if the grid disagrees inside a type.
    fn index_grid(t: u64, k: u64, side: u64, values: &[bool]) -> Option<HashMap<PairType, bool>> {
        let mut table = HashMap::new();
        for a in 0..side {
            for b in 0..side {
                let v = values[(a * side + b) as usize];
                match table.insert(pair_type(t, k, a, b), v) {
                    Some(old) if old != v => return None,
                    _ => {}
                }
            }
        }
        Some(table)
    }

    /// Normal form of `e` with `x` as the first argument and `y` as the second.
    pub fn of(e: &Expr, x: Var, y: Var) -> Result<Self> {
        if e.free_vars() & !((1 << x) | (1 << y)) != 0 {
            return Err(Error::Input(format!(
                "expression has free variables besides {x} and {y}"
            )));
        }
        let (t, k) = e.bounds();
        Self::tabulate(t, k, |a, b| {
            let mut env = [0u64; MAX_VARS];
            env[x] = a;
            env[y] = b;
            e.eval(&env)
        })
    }

    pub fn threshold(&self) -> u64 {
        self.t
    }

    pub fn modulus(&self) -> u64 {
        self.k
    }

    pub fn eval(&self, a: u64, b: u64) -> bool {
        self.table[&pair_type(self.t, self.k, a, b)]
    }

    /// `b ↦ f(a, b)` for fixed `a`.
    pub fn slice_left(&self, a: u64) -> Norm1 {
        Norm1::tabulate(a + self.t, self.k, |b| self.eval(a, b)).expect("slice of a bounded table")
    }

    /// `a ↦ f(a, b)` for fixed `b`.
    pub fn slice_right(&self, b: u64) -> Norm1 {
        Norm1::tabulate(b + self.t, self.k, |a| self.eval(a, b)).expect("slice of a bounded table")
    }

    pub fn is_empty(&self) -> bool {
        !self.table.values().any(|&v| v)
    }

    pub fn to_expr(&self, x: Var, y: Var) -> Expr {
        Expr::Table2(x, y, Arc::new(self.clone()))
    }

    /// Semantic equality: both tables agree on a grid fine enough for both.
    pub fn same_as(&self, other: &Norm2) -> bool {
        let t = self.t.max(other.t);
        let k = lcm(self.k, other.k);
        let side = grid_side(t, k);
        (0..side).all(|a| (0..side).all(|b| self.eval(a, b) == other.eval(a, b)))
    }
}

impl fmt::Display for Norm1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show("n"))
    }
}

/// Brute-force horizon for a quantifier-free predicate with constants bounded by
/// `c_max` and moduli with least common multiple `l`: `3 · (c_max + 1) · l`.
pub fn brute_force_horizon(e: &Expr) -> u64 {
    let (t, k) = e.bounds();
    3 * t * k
}

// ---------------------------------------------------------------------------
// Parser

/// Parses the predicate grammar with the given variable names, e.g. `["m", "n"]`.
///
/// ```text
/// expr  := and ('||' and)*
/// and   := unary ('&&' unary)*
/// unary := '!' unary | '(' expr ')' | 'true' | 'false' | atom
/// atom  := term cmp int | var cmp var | var '%' int '==' int
/// term  := var | var '-' var
/// cmp   := '>=' | '<=' | '>' | '<' | '==' | '!='
/// ```
pub fn parse(text: &str, vars: &[&str]) -> Result<Expr> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
        text,
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Op(&'static str),
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    const OPS: [&str; 14] = [
        "&&", "||", ">=", "<=", "==", "!=", ">", "<", "!", "(", ")", "-", "%", "+",
    ];
    let mut out = Vec::new();
    let b = text.as_bytes();
    let mut i = 0;
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let v = text[start..i]
                .parse()
                .map_err(|_| Error::Input(format!("integer out of range in `{text}`")))?;
            out.push(Tok::Int(v));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(text[start..i].to_string()));
            continue;
        }
        for op in OPS {
            if text[i..].starts_with(op) {
                out.push(Tok::Op(op));
                i += op.len();
                continue 'outer;
            }
        }
        return Err(Error::Input(format!(
            "unexpected character `{c}` in predicate `{text}`"
        )));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Input(format!(
            "{what} at token {} in predicate `{}`",
            self.pos, self.text
        ))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Op(o)) if *o == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut parts = vec![self.and()?];
        while self.eat("||") {
            parts.push(self.and()?);
        }
        Ok(Expr::or(parts))
    }

    fn and(&mut self) -> Result<Expr> {
        let mut parts = vec![self.unary()?];
        while self.eat("&&") {
            parts.push(self.unary()?);
        }
        Ok(Expr::and(parts))
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("!") {
            return Ok(Expr::not(self.unary()?));
        }
        if self.eat("(") {
            let e = self.expr()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "true" => {
                self.pos += 1;
                Ok(Expr::tt())
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.pos += 1;
                Ok(Expr::ff())
            }
            _ => self.atom(),
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                let v = self
                    .vars
                    .iter()
                    .position(|&n| n == s)
                    .ok_or_else(|| self.error(&format!("unknown variable `{s}`")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn cmp(&mut self) -> Result<&'static str> {
        for op in [">=", "<=", "==", "!=", ">", "<"] {
            if self.eat(op) {
                return Ok(op);
            }
        }
        Err(self.error("expected a comparison"))
    }

    fn atom(&mut self) -> Result<Expr> {
        let x = self.var()?;
        if self.eat("%") {
            let k = self.int()?;
            if !self.eat("==") {
                return Err(self.error("expected `==` after modulus"));
            }
            let r = self.int()?;
            if k <= 0 {
                return Err(self.error("modulus must be positive"));
            }
            return Expr::modulo(x, r, k as u64);
        }
        let y = if self.eat("-") {
            Some(self.var()?)
        } else {
            None
        };
        let op = self.cmp()?;
        // `x cmp y` compares two variables: rewrite as `x - y cmp 0`.
        let (y, c) = match (y, self.peek().cloned()) {
            (None, Some(Tok::Ident(_))) => (Some(self.var()?), 0),
            (y, _) => (y, self.int()?),
        };
        Ok(match y {
            None => match op {
                ">=" => Expr::Ge(x, c),
                "<=" => Expr::Le(x, c),
                ">" => Expr::Ge(x, c + 1),
                "<" => Expr::Le(x, c - 1),
                "==" => Expr::eq(x, c),
                _ => Expr::not(Expr::eq(x, c)),
            },
            Some(y) => {
                let eq = || Expr::and([Expr::DiffGe(x, y, c), Expr::DiffLe(x, y, c)]);
                match op {
                    ">=" => Expr::DiffGe(x, y, c),
                    "<=" => Expr::DiffLe(x, y, c),
                    ">" => Expr::DiffGe(x, y, c + 1),
                    "<" => Expr::DiffLe(x, y, c - 1),
                    "==" => eq(),
                    _ => Expr::not(eq()),
                }
            }
        })
    }
}

/// Parses a one-variable predicate in `n` and normalizes it.
pub fn parse_norm1(text: &str) -> Result<Norm1> {
    Norm1::of(&parse(text, &["n"])?, 0)
}

/// Parses a two-variable predicate in `m` (first) and `n` (second) and normalizes it.
pub fn parse_norm2(text: &str) -> Result<Norm2> {
    Norm2::of(&parse(text, &["m", "n"])?, 0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_normalize() {
        let n = parse_norm1("n>=2").unwrap();
        assert_eq!(n.threshold(), 2);
        assert_eq!(n.period(), 1);
        assert!(!n.eval(1) && n.eval(2) && n.eval(100));
        let n = parse_norm1("n%3==1 || n==0").unwrap();
        assert_eq!(n.period(), 3);
        assert_eq!(n.members_below(8), vec![0, 1, 4, 7]);
        assert!(parse_norm1("n>=3 && n<=2").unwrap().is_empty());
        assert!(parse_norm1("!(n<5)").unwrap().almost_all());
        assert!(parse_norm1("n<5").unwrap().is_finite());
    }

    #[test]
    fn display_roundtrip() {
        for s in [
            "n==0 || n>=3 && n%2==1",
            "true",
            "false",
            "n<=4",
            "n%4==2 || n%4==3",
            "n>=2 && n<=5",
        ] {
            let a = parse_norm1(s).unwrap();
            let b = parse_norm1(&a.show("n")).unwrap();
            assert_eq!(a, b, "{s} -> {}", a.show("n"));
        }
    }

    #[test]
    fn parse_errors_are_input_errors() {
        for s in ["n>=", "k>=1", "n%0==1", "(n>=1", "n>=1 &&", "n # 2"] {
            assert!(matches!(parse(s, &["n"]), Err(Error::Input(_))), "{s}");
        }
    }

    #[test]
    fn two_variable_forms() {
        let lt = parse_norm2("m<n").unwrap();
        assert!(lt.eval(3, 4) && !lt.eval(4, 4) && !lt.eval(9, 2));
        let same = parse_norm2("n-m>=1").unwrap();
        assert!(lt.same_as(&same));
        assert_eq!(lt.slice_left(5).members_below(8), vec![6, 7]);
        assert_eq!(lt.slice_right(3).members_below(8), vec![0, 1, 2]);
        assert!(parse_norm2("m-n>=2 && n-m>=0").unwrap().is_empty());
    }

    #[test]
    fn quantifiers() {
        // ∃m. m < n  is  n ≥ 1
        let e = Expr::exists(0, parse("m<n", &["m", "n"]).unwrap()).unwrap();
        assert_eq!(Norm1::of(&e, 1).unwrap(), parse_norm1("n>=1").unwrap());
        // ∀^∞ m. m ≥ n  holds for every n
        let e = Expr::almost_all(0, parse("m>=n", &["m", "n"]).unwrap()).unwrap();
        assert!(Norm1::of(&e, 1).unwrap().is_all());
        // ∃^∞ m. m ≤ n  holds for no n
        let e = Expr::infinitely(0, parse("m<=n", &["m", "n"]).unwrap()).unwrap();
        assert!(Norm1::of(&e, 1).unwrap().is_empty());
        // ∀m. (m ≡ n mod 2 → m ≥ n) holds only at n ∈ {0, 1}
        let body = parse(
            "!(m%2==0 && n%2==0 || m%2==1 && n%2==1) || m>=n",
            &["m", "n"],
        )
        .unwrap();
        let e = Expr::forall(0, body).unwrap();
        assert_eq!(Norm1::of(&e, 1).unwrap().members_below(10), vec![0, 1]);
    }

    #[test]
    fn fix_matches_evaluation() {
        let e = parse("m-n>=2 || n%3==1 && m<=4", &["m", "n"]).unwrap();
        for a in 0..10 {
            let f = e.fix(0, a);
            for b in 0..12 {
                assert_eq!(f.eval(&[0, b]), e.eval(&[a, b]));
            }
        }
    }

    #[test]
    fn norm2_is_idempotent() {
        let a = parse_norm2("m-n>=3 && n%2==0 || m==1").unwrap();
        let b = Norm2::of(&a.to_expr(0, 1), 0, 1).unwrap();
        assert_eq!(a, b);
    }
}
