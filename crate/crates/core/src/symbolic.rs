//! Subsets of a finitely presented ground set: finitely many core points plus
//! `ℕ`-indexed families. A [`SymbolicSet`] is one such subset; a [`ParamSet`] is a
//! sequence of them indexed by a parameter `n`.
//!
//! Variable convention for the expressions built here: `0` is the parameter,
//! `1` the member index, `2..` quantified helpers.

use std::sync::Arc;

use serde::Serialize;

use crate::bits::{self, Subset};
use crate::error::Result;
use crate::predicate::{Expr, Norm1, Norm2, Var};

pub const PARAM: Var = 0;
pub const MEMBER: Var = 1;

/// A core point or a whole family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    Core(usize),
    Fam(usize),
}

/// A single point: a core point or the `n`-th member of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Point {
    Core(usize),
    Member(usize, u64),
}

/// Shape of the ground set: number of core points and of families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub core: usize,
    pub fams: usize,
}

impl Shape {
    pub fn kinds(&self) -> impl Iterator<Item = Kind> {
        let (c, f) = (self.core, self.fams);
        (0..c).map(Kind::Core).chain((0..f).map(Kind::Fam))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicSet {
    pub core: Subset,
    pub fams: Vec<Norm1>,
}

impl SymbolicSet {
    pub fn empty(shape: Shape) -> Self {
        Self {
            core: 0,
            fams: vec![Norm1::constant(false); shape.fams],
        }
    }

    pub fn universe(shape: Shape) -> Self {
        Self {
            core: bits::full(shape.core),
            fams: vec![Norm1::constant(true); shape.fams],
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match p {
            Point::Core(a) => bits::contains(self.core, a),
            Point::Member(f, n) => self.fams[f].eval(n),
        }
    }

    /// Membership of a kind's member at variable `v` as an expression.
    pub fn member_expr(&self, k: Kind, v: Var) -> Expr {
        match k {
            Kind::Core(a) => Expr::Const(bits::contains(self.core, a)),
            Kind::Fam(f) => self.fams[f].to_expr(v),
        }
    }

    fn zip(
        &self,
        other: &Self,
        core: impl Fn(Subset, Subset) -> Subset,
        f: impl Fn(&Norm1, &Norm1) -> Norm1,
    ) -> Self {
        Self {
            core: core(self.core, other.core),
            fams: self
                .fams
                .iter()
                .zip(&other.fams)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b, Norm1::or)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b, Norm1::and)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b, Norm1::minus)
    }

    pub fn is_empty(&self) -> bool {
        self.core == 0 && self.fams.iter().all(Norm1::is_empty)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        bits::is_subset(self.core, other.core)
            && self
                .fams
                .iter()
                .zip(&other.fams)
                .all(|(a, b)| a.is_subset(b))
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    /// Human-readable rendering such as `{u, a(n): n>=1}`.
    pub fn show(&self, core_names: &[String], fam_names: &[String]) -> String {
        let mut parts: Vec<String> = bits::members(self.core)
            .map(|a| core_names[a].clone())
            .collect();
        for (f, n) in self.fams.iter().enumerate() {
            if n.is_all() {
                parts.push(format!("{}(*)", fam_names[f]));
            } else if !n.is_empty() {
                parts.push(format!("{}(n): {}", fam_names[f], n.show("n")));
            }
        }
        if parts.is_empty() {
            "∅".into()
        } else {
            format!("{{{}}}", parts.join(", "))
        }
    }
}

/// A sequence of subsets `X(n)`: per core point the parameters where it belongs,
/// per family the pairs `(n, m)` with member `m` in `X(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub core: Vec<Norm1>,
    pub fams: Vec<Norm2>,
}

impl ParamSet {
    /// The constant sequence `X(n) = s`.
    pub fn constant(s: &SymbolicSet, core_count: usize) -> Self {
        Self {
            core: (0..core_count)
                .map(|a| Norm1::constant(bits::contains(s.core, a)))
                .collect(),
            fams: s
                .fams
                .iter()
                .map(|n| {
                    Norm2::tabulate(n.threshold() as u64, n.period() as u64, |_, m| n.eval(m))
                        .expect("a member-only predicate is invariant at its own bound")
                })
                .collect(),
        }
    }

    /// Builds `X` from a membership expression per kind, with free variables among
    /// `PARAM` and (for families) `MEMBER`.
    pub fn build(shape: Shape, mut f: impl FnMut(Kind) -> Result<Expr>) -> Result<Self> {
        let mut core = Vec::with_capacity(shape.core);
        for a in 0..shape.core {
            core.push(Norm1::of(&f(Kind::Core(a))?, PARAM)?);
        }
        let mut fams = Vec::with_capacity(shape.fams);
        for g in 0..shape.fams {
            fams.push(Norm2::of(&f(Kind::Fam(g))?, PARAM, MEMBER)?);
        }
        Ok(Self { core, fams })
    }

    pub fn shape(&self) -> Shape {
        Shape {
            core: self.core.len(),
            fams: self.fams.len(),
        }
    }

    /// Membership of a kind's member (at `vm`) in `X(vp)`.
    pub fn member_expr(&self, k: Kind, vp: Var, vm: Var) -> Expr {
        match k {
            Kind::Core(a) => self.core[a].to_expr(vp),
            Kind::Fam(f) => Expr::Table2(vp, vm, Arc::new(self.fams[f].clone())),
        }
    }

    pub fn slice(&self, n: u64) -> SymbolicSet {
        let core = self
            .core
            .iter()
            .enumerate()
            .filter(|(_, c)| c.eval(n))
            .fold(0, |acc, (a, _)| acc | bits::single(a));
        SymbolicSet {
            core,
            fams: self.fams.iter().map(|t| t.slice_left(n)).collect(),
        }
    }

    fn quantified(&self, almost_all: bool) -> Result<SymbolicSet> {
        let mut core = 0;
        for (a, c) in self.core.iter().enumerate() {
            let hit = if almost_all {
                c.almost_all()
            } else {
                c.infinitely()
            };
            if hit {
                core |= bits::single(a);
            }
        }
        let mut fams = Vec::with_capacity(self.fams.len());
        for t in &self.fams {
            let body = Expr::Table2(PARAM, MEMBER, Arc::new(t.clone()));
            let e = if almost_all {
                Expr::almost_all(PARAM, body)?
            } else {
                Expr::infinitely(PARAM, body)?
            };
            fams.push(Norm1::of(&e, MEMBER)?);
        }
        Ok(SymbolicSet { core, fams })
    }

    /// Points in `X(n)` for all but finitely many `n`.
    pub fn liminf(&self) -> Result<SymbolicSet> {
        self.quantified(true)
    }

    /// Points in `X(n)` for infinitely many `n`.
    pub fn limsup(&self) -> Result<SymbolicSet> {
        self.quantified(false)
    }

    /// `X(i) ⊆ Y(j)` with `i` at `vx`, `j` at `vy`, quantifying members at `vm`.
    pub fn subset_expr(x: &ParamSet, vx: Var, y: &ParamSet, vy: Var, vm: Var) -> Result<Expr> {
        let mut parts = Vec::new();
        for (cx, cy) in x.core.iter().zip(&y.core) {
            parts.push(Expr::or([Expr::not(cx.to_expr(vx)), cy.to_expr(vy)]));
        }
        for (tx, ty) in x.fams.iter().zip(&y.fams) {
            let body = Expr::or([
                Expr::not(Expr::Table2(vx, vm, Arc::new(tx.clone()))),
                Expr::Table2(vy, vm, Arc::new(ty.clone())),
            ]);
            parts.push(Expr::forall(vm, body)?);
        }
        Ok(Expr::and(parts))
    }

    /// `{(i, j) : X(i) ⊆ Y(j)}`.
    pub fn subset_relation(x: &ParamSet, y: &ParamSet) -> Result<Norm2> {
        Norm2::of(&Self::subset_expr(x, 0, y, 1, 2)?, 0, 1)
    }

    /// `{n : X(n) ⊆ Y(n)}`.
    pub fn subset_pointwise(x: &ParamSet, y: &ParamSet) -> Result<Norm1> {
        Norm1::of(&Self::subset_expr(x, 0, y, 0, 1)?, 0)
    }

    /// `{n : X(n) ⊆ s}`.
    pub fn within(&self, s: &SymbolicSet) -> Result<Norm1> {
        let y = ParamSet::constant(s, self.core.len());
        Self::subset_pointwise(self, &y)
    }

    /// `{n : s ⊆ X(n)}`.
    pub fn contains_set(&self, s: &SymbolicSet) -> Result<Norm1> {
        let x = ParamSet::constant(s, self.core.len());
        Self::subset_pointwise(&x, self)
    }

    /// `{n : X(n) = s}`.
    pub fn equal_to(&self, s: &SymbolicSet) -> Result<Norm1> {
        Ok(self.within(s)?.and(&self.contains_set(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::{parse_norm1, parse_norm2};

    fn shape() -> Shape {
        Shape { core: 2, fams: 1 }
    }

    /// `X(n) = {c(m) : m < n}` plus core point 0 for even `n`.
    fn ladder() -> ParamSet {
        ParamSet {
            core: vec![parse_norm1("n%2==0").unwrap(), Norm1::constant(false)],
            fams: vec![parse_norm2("m>n").unwrap()],
        }
    }

    #[test]
    fn slices_and_limits() {
        let x = ladder();
        let s = x.slice(4);
        assert!(s.contains(Point::Core(0)) && !s.contains(Point::Core(1)));
        assert_eq!(s.fams[0].members_below(10), vec![0, 1, 2, 3]);
        let li = x.liminf().unwrap();
        assert_eq!(li.core, 0);
        assert!(li.fams[0].is_all());
        let ls = x.limsup().unwrap();
        assert_eq!(ls.core, 0b01);
    }

    #[test]
    fn set_algebra() {
        let a = SymbolicSet {
            core: 0b01,
            fams: vec![parse_norm1("n>=3").unwrap()],
        };
        let b = SymbolicSet {
            core: 0b11,
            fams: vec![parse_norm1("n>=1").unwrap()],
        };
        assert!(a.is_proper_subset(&b));
        assert_eq!(a.union(&b), b);
        assert_eq!(a.intersect(&b), a);
        assert_eq!(b.minus(&a).fams[0].members_below(9), vec![1, 2]);
        assert!(SymbolicSet::empty(shape()).is_empty());
        assert!(!SymbolicSet::universe(shape()).is_empty());
    }

    #[test]
    fn parametric_inclusions() {
        let x = ladder();
        let s = SymbolicSet {
            core: 0b01,
            fams: vec![parse_norm1("n<=5").unwrap()],
        };
        assert_eq!(
            x.within(&s).unwrap().members_below(10),
            vec![0, 1, 2, 3, 4, 5, 6]
        );
        let t = SymbolicSet {
            core: 0,
            fams: vec![parse_norm1("n<=2").unwrap()],
        };
        assert_eq!(x.contains_set(&t).unwrap().members_below(6), vec![3, 4, 5]);
        let r = ParamSet::subset_relation(&x, &x).unwrap();
        // X(i) ⊆ X(j) needs i ≤ j and, for even i, even j.
        assert!(r.eval(2, 4) && !r.eval(2, 5) && r.eval(3, 5) && !r.eval(5, 3));
        let e = x.equal_to(&x.slice(3)).unwrap();
        assert_eq!(e.members_below(10), vec![3]);
    }

    #[test]
    fn constant_roundtrip() {
        let s = SymbolicSet {
            core: 0b10,
            fams: vec![parse_norm1("n%3==1 || n==0").unwrap()],
        };
        let p = ParamSet::constant(&s, 2);
        assert_eq!(p.slice(0), s);
        assert_eq!(p.slice(17), s);
        assert_eq!(p.liminf().unwrap(), s);
    }
}
