//! The causal completion of a finitely presented chronological set, reduced to a
//! finite set of nodes on which limit operators and topologies are computed.
//!
//! Nodes are core points, families and boundary pairs. A family node stands for
//! its members `f(n)` with `n → ∞`: inside a profile it contributes the liminf and
//! limsup of its members' pasts and futures, and it is a limit when almost every
//! member is one. A profile is the set of nodes a sequence visits infinitely often.

use std::collections::HashMap;

use serde::Serialize;

use crate::bits::{self, Subset};
use crate::chrono::{ChronoModel, SVerdict, Side};
use crate::enumerate::all_topologies;
use crate::error::{Error, Result};
use crate::limit_ops::{
    associated_operator, derived_topology_unchecked, iterate_raw, star_unchecked,
    TailLimitOperator, MAX_OPERATOR_POINTS,
};
use crate::predicate::{Expr, Norm1, Norm2};
use crate::separation::{cross_t2_failures, separating_refinement_unchecked};
use crate::symbolic::{Kind, ParamSet, SymbolicSet};
use crate::topology::{density_check, FinTopology, GroundSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Point(usize),
    Family(usize),
    /// Indices into the designated TIPs and TIFs; `None` is the empty component.
    Boundary {
        tip: Option<usize>,
        tif: Option<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
    /// `n ↦ P` of the pair, constant unless the node is a family.
    pub past: ParamSet,
    pub future: ParamSet,
}

impl Node {
    pub fn is_manifold(&self) -> bool {
        !matches!(self.kind, NodeKind::Boundary { .. })
    }

    fn component(&self, side: usize) -> &ParamSet {
        if side == 0 {
            &self.past
        } else {
            &self.future
        }
    }
}

/// Strict inclusions of a node component into the IPs (or IFs) of the model.
struct Above {
    /// Per kind, `(m, j)` with `X(m) ⊊ I(y(j))`.
    kinds: Vec<Norm2>,
    /// Per designated set `d`, the `m` with `X(m) ⊊ d`.
    designated: Vec<Norm1>,
    /// The `m` with `X(m) = ∅`.
    empty: Norm1,
}

pub struct Completion {
    model: ChronoModel,
    nodes: Vec<Node>,
    ground: GroundSet,
    limit: TailLimitOperator,
    /// `chron[x]` holds the `y` with `x ≪ y`.
    chron: Vec<Subset>,
    notes: Vec<String>,
}

fn side_of(model: &ChronoModel, side: usize) -> Side<'_> {
    if side == 0 {
        model.past_side()
    } else {
        model.future_side()
    }
}

fn pair_name(p: Option<&str>, f: Option<&str>) -> String {
    format!("({},{})", p.unwrap_or("∅"), f.unwrap_or("∅"))
}

/// `{m : X(m) ∩ Y(j) ≠ ∅ for ...}` as an expression in `(vx, vy)`.
fn meets_expr(x: &ParamSet, y: &ParamSet) -> Result<Expr> {
    let shape = x.shape();
    let mut parts = Vec::new();
    for k in shape.kinds() {
        let both = Expr::and([x.member_expr(k, 0, 2), y.member_expr(k, 1, 2)]);
        parts.push(match k {
            Kind::Core(_) => both,
            Kind::Fam(_) => Expr::exists(2, both)?,
        });
    }
    Ok(Expr::or(parts))
}

/// Builds the node set, the chronology between nodes and the limit operator table.
pub fn build_completion(model: &ChronoModel) -> Result<Completion> {
    let report = model.validate()?;
    if !report.errors.is_empty() {
        return Err(Error::Precondition(format!(
            "invalid model: {}",
            report.errors.join("; ")
        )));
    }
    let shape = model.shape();
    let (fwd, bwd) = (model.past_side().order, model.future_side().order);
    let constant = |s: Option<&SymbolicSet>| {
        let empty = SymbolicSet::empty(shape);
        ParamSet::constant(s.unwrap_or(&empty), shape.core)
    };
    let mut nodes = Vec::new();
    let mut notes = Vec::new();
    for k in shape.kinds() {
        let kind = match k {
            Kind::Core(a) => NodeKind::Point(a),
            Kind::Fam(f) => NodeKind::Family(f),
        };
        nodes.push(Node {
            name: model.kind_name(k),
            kind,
            past: fwd.past_kind(k),
            future: bwd.past_kind(k),
        });
    }
    let (tips, tifs) = (model.tips(), model.tifs());
    let mut paired_tip = vec![false; tips.len()];
    let mut paired_tif = vec![false; tifs.len()];
    for (i, p) in tips.iter().enumerate() {
        for (j, f) in tifs.iter().enumerate() {
            match model.s_related(Some(&p.set), Some(&f.set))? {
                SVerdict::Related => {
                    paired_tip[i] = true;
                    paired_tif[j] = true;
                    nodes.push(Node {
                        name: pair_name(Some(&p.name), Some(&f.name)),
                        kind: NodeKind::Boundary {
                            tip: Some(i),
                            tif: Some(j),
                        },
                        past: constant(Some(&p.set)),
                        future: constant(Some(&f.set)),
                    });
                }
                SVerdict::Undecided(w) => notes.push(format!(
                    "S-relation of {} and {} undecided: {w}",
                    p.name, f.name
                )),
                SVerdict::NotRelated(_) => {}
            }
        }
    }
    for (i, p) in tips.iter().enumerate() {
        match model.s_related(Some(&p.set), None)? {
            SVerdict::Related => nodes.push(Node {
                name: pair_name(Some(&p.name), None),
                kind: NodeKind::Boundary {
                    tip: Some(i),
                    tif: None,
                },
                past: constant(Some(&p.set)),
                future: constant(None),
            }),
            SVerdict::Undecided(w) => {
                notes.push(format!("S-relation of {} and ∅ undecided: {w}", p.name))
            }
            SVerdict::NotRelated(_) if !paired_tip[i] => {
                notes.push(format!("TIP {} belongs to no boundary pair", p.name))
            }
            SVerdict::NotRelated(_) => {}
        }
    }
    for (j, f) in tifs.iter().enumerate() {
        match model.s_related(None, Some(&f.set))? {
            SVerdict::Related => nodes.push(Node {
                name: pair_name(None, Some(&f.name)),
                kind: NodeKind::Boundary {
                    tip: None,
                    tif: Some(j),
                },
                past: constant(None),
                future: constant(Some(&f.set)),
            }),
            SVerdict::Undecided(w) => {
                notes.push(format!("S-relation of ∅ and {} undecided: {w}", f.name))
            }
            SVerdict::NotRelated(_) if !paired_tif[j] => {
                notes.push(format!("TIF {} belongs to no boundary pair", f.name))
            }
            SVerdict::NotRelated(_) => {}
        }
    }
    for (i, p) in tips.iter().enumerate() {
        let partners = nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Boundary { tip: Some(t), .. } if t == i))
            .count();
        if partners > 1 {
            notes.push(format!(
                "TIP {} is a component of {partners} boundary pairs",
                p.name
            ));
        }
    }
    if nodes.is_empty() {
        return Err(Error::Precondition("the completion has no nodes".into()));
    }
    if nodes.len() > MAX_OPERATOR_POINTS {
        return Err(Error::Capacity(format!(
            "the completion has {} nodes; operator tables support at most {MAX_OPERATOR_POINTS}",
            nodes.len()
        )));
    }
    let ground = GroundSet::new(nodes.iter().map(|n| n.name.clone()))?;

    let mut chron = vec![0; nodes.len()];
    for (x, nx) in nodes.iter().enumerate() {
        for (y, ny) in nodes.iter().enumerate() {
            let body = meets_expr(&nx.future, &ny.past)?;
            let e = Expr::almost_all(0, Expr::almost_all(1, body)?)?;
            if e.eval(&[]) {
                chron[x] |= bits::single(y);
            }
        }
    }

    // The empty table is replaced right away; computing it needs the node data.
    let limit = TailLimitOperator::from_fn(ground.clone(), false, |_| 0)?;
    let mut c = Completion {
        model: model.clone(),
        nodes,
        ground,
        limit,
        chron,
        notes,
    };
    c.limit = c.compute_limit()?;
    Ok(c)
}

impl Completion {
    pub fn model(&self) -> &ChronoModel {
        &self.model
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// The limit operator `L_chr` on profiles of nodes.
    pub fn limit(&self) -> &TailLimitOperator {
        &self.limit
    }

    /// `chron()[x]` holds the nodes `y` with `x ≪ y`.
    pub fn chron(&self) -> &[Subset] {
        &self.chron
    }

    fn mask(&self, f: impl Fn(&Node) -> bool) -> Subset {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| f(n))
            .fold(0, |s, (i, _)| s | bits::single(i))
    }

    /// Core points and families.
    pub fn manifold(&self) -> Subset {
        self.mask(Node::is_manifold)
    }

    /// Core points only: the manifold nodes that are single points.
    pub fn points(&self) -> Subset {
        self.mask(|n| matches!(n.kind, NodeKind::Point(_)))
    }

    pub fn families(&self) -> Subset {
        self.mask(|n| matches!(n.kind, NodeKind::Family(_)))
    }

    pub fn boundary(&self) -> Subset {
        self.mask(|n| !n.is_manifold())
    }

    pub fn show(&self, s: Subset) -> String {
        self.ground.show(s)
    }

    /// Profile from node names.
    pub fn profile<S: AsRef<str>>(&self, names: &[S]) -> Result<Subset> {
        let a = self.ground.subset(names)?;
        if a == 0 {
            return Err(Error::Input("empty profile".into()));
        }
        Ok(a)
    }

    /// Named sequences of the model as profiles.
    pub fn sequences(&self) -> Result<Vec<(String, Subset)>> {
        self.model
            .json()
            .sequences
            .iter()
            .map(|s| Ok((s.name.clone(), self.profile(&s.nodes)?)))
            .collect()
    }

    fn above(&self, side: usize) -> Result<Vec<Above>> {
        let sd = side_of(&self.model, side);
        let shape = self.model.shape();
        let ips: Vec<ParamSet> = shape.kinds().map(|k| sd.order.past_kind(k)).collect();
        let empty = SymbolicSet::empty(shape);
        let mut out = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let x = n.component(side);
            let mut kinds = Vec::with_capacity(ips.len());
            for y in &ips {
                let up = ParamSet::subset_relation(x, y)?;
                let back = ParamSet::subset_relation(y, x)?;
                kinds.push(Norm2::of(
                    &Expr::and([up.to_expr(0, 1), Expr::not(back.to_expr(1, 0))]),
                    0,
                    1,
                )?);
            }
            let mut designated = Vec::new();
            for d in sd.designated {
                designated.push(x.within(&d.set)?.minus(&x.contains_set(&d.set)?));
            }
            out.push(Above {
                kinds,
                designated,
                empty: x.within(&empty)?,
            });
        }
        Ok(out)
    }

    /// Nodes whose `side` component is empty or lies in `li` and is maximal among
    /// the model's IPs (IFs) inside `ls`.
    fn half(
        &self,
        side: usize,
        above: &[Above],
        li: &SymbolicSet,
        ls: &SymbolicSet,
    ) -> Result<Subset> {
        let sd = side_of(&self.model, side);
        let shape = self.model.shape();
        let mut inside = Vec::new();
        for k in shape.kinds() {
            inside.push(sd.order.past_kind(k).within(ls)?);
        }
        let d_inside: Vec<bool> = sd.designated.iter().map(|d| d.set.is_subset(ls)).collect();
        let mut out = 0;
        for (i, n) in self.nodes.iter().enumerate() {
            let ab = &above[i];
            let mut parts = Vec::new();
            for (strict, ins) in ab.kinds.iter().zip(&inside) {
                if strict.is_empty() || ins.is_empty() {
                    continue;
                }
                parts.push(Expr::exists(
                    2,
                    Expr::and([strict.to_expr(0, 2), ins.to_expr(2)]),
                )?);
            }
            let mut not_max = Norm1::of(&Expr::or(parts), 0)?;
            for (strict, &ins) in ab.designated.iter().zip(&d_inside) {
                if ins {
                    not_max = not_max.or(strict);
                }
            }
            let good = ab.empty.or(&n.component(side).within(li)?.minus(&not_max));
            if good.almost_all() {
                out |= bits::single(i);
            }
        }
        Ok(out)
    }

    /// Per node `(liminf, limsup)` of each component.
    fn node_limits(&self, side: usize) -> Result<Vec<(SymbolicSet, SymbolicSet)>> {
        self.nodes
            .iter()
            .map(|n| Ok((n.component(side).liminf()?, n.component(side).limsup()?)))
            .collect()
    }

    /// `LI` and `LS` of a profile's `side` components.
    fn profile_limits(
        &self,
        lims: &[(SymbolicSet, SymbolicSet)],
        a: Subset,
    ) -> (SymbolicSet, SymbolicSet) {
        let mut it = bits::members(a);
        let first = it.next().expect("nonempty profile");
        let (mut li, mut ls) = lims[first].clone();
        for x in it {
            li = li.intersect(&lims[x].0);
            ls = ls.union(&lims[x].1);
        }
        (li, ls)
    }

    /// `LI` and `LS` of the past components (side 0) or future components (side 1).
    pub fn limits_of(&self, side: usize, a: Subset) -> Result<(SymbolicSet, SymbolicSet)> {
        Ok(self.profile_limits(&self.node_limits(side)?, a))
    }

    fn compute_limit(&self) -> Result<TailLimitOperator> {
        let full = self.ground.full();
        let mut table = vec![0; full as usize + 1];
        for side in 0..2 {
            let above = self.above(side)?;
            let lims = self.node_limits(side)?;
            let mut cache: HashMap<(SymbolicSet, SymbolicSet), Subset> = HashMap::new();
            for a in 1..=full {
                let key = self.profile_limits(&lims, a);
                let v = match cache.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = self.half(side, &above, &key.0, &key.1)?;
                        cache.insert(key, v);
                        v
                    }
                };
                table[a as usize] = if side == 0 { v } else { table[a as usize] & v };
            }
        }
        let l = TailLimitOperator::from_fn(self.ground.clone(), false, |a| table[a as usize])?;
        let c = l.is_coherent();
        Ok(l.with_coherent(c))
    }

    pub fn chron_limit(&self, a: Subset) -> Subset {
        self.limit.get(a)
    }

    /// `L*`: limits restricted to manifold nodes whenever some sub-profile has one.
    pub fn star_operator(&self) -> TailLimitOperator {
        star_unchecked(&self.limit, self.manifold())
    }

    pub fn chron_star(&self, a: Subset) -> Subset {
        self.star_operator().get(a)
    }

    /// `L**`: limits restricted to the boundary whenever they contain both kinds.
    pub fn double_star_operator(&self) -> TailLimitOperator {
        let (m, b) = (self.manifold(), self.boundary());
        TailLimitOperator::from_fn(self.ground.clone(), false, |a| {
            let v = self.limit.get(a);
            if v & m != 0 && v & b != 0 {
                v & b
            } else {
                v
            }
        })
        .expect("same ground set")
    }

    /// `L^1 .. L^k`, each step taking limits of profiles inside the previous limits.
    pub fn chron_iterate(&self, k: usize) -> Vec<TailLimitOperator> {
        iterate_raw(&self.limit, k)
    }

    /// Cumulative iteration until it stops growing.
    pub fn iteration_report(&self) -> IterationReport {
        let n = self.ground.len();
        let chain = iterate_raw(&self.limit, n + 2);
        let full = self.ground.full();
        let mut cum: Vec<Vec<Subset>> = Vec::new();
        let mut acc = vec![0; full as usize + 1];
        for li in &chain {
            for a in 1..=full {
                acc[a as usize] |= li.get(a);
            }
            cum.push(acc.clone());
        }
        let step = (0..cum.len() - 1)
            .find(|&i| cum[i] == cum[i + 1])
            .map(|i| i + 1);
        let tau = derived_topology_unchecked(&self.limit);
        let lt = associated_operator(&tau);
        let reaches_associated =
            step.map(|s| (1..=full).all(|a| cum[s - 1][a as usize] == lt.get(a)));
        let mut growth = Vec::new();
        for a in 1..=full {
            for i in 1..cum.len() {
                let new = cum[i][a as usize] & !cum[i - 1][a as usize];
                if new != 0 {
                    growth.push(Growth {
                        profile: self.show(a),
                        step: i + 1,
                        new: self.show(new),
                    });
                }
            }
        }
        IterationReport {
            stabilizes_at: step,
            reaches_associated,
            growth,
        }
    }

    /// Nodes `y` with `y ≪ x`.
    pub fn chron_past(&self, x: usize) -> Subset {
        (0..self.nodes.len())
            .filter(|&y| bits::contains(self.chron[y], x))
            .fold(0, |s, y| s | bits::single(y))
    }

    /// `I^±(x)` not open, for single nodes `x`. A family node has no single
    /// chronological past: each member's past holds the tail of the family.
    fn a1_failures(&self, tau: &FinTopology) -> Vec<String> {
        let mut out = Vec::new();
        for (x, n) in self.nodes.iter().enumerate() {
            if matches!(n.kind, NodeKind::Family(_)) {
                continue;
            }
            if !tau.is_open(self.chron[x]) {
                out.push(format!("I⁺({}) = {}", n.name, self.show(self.chron[x])));
            }
            let p = self.chron_past(x);
            if !tau.is_open(p) {
                out.push(format!("I⁻({}) = {}", n.name, self.show(p)));
            }
        }
        out
    }

    /// Per profile, the nodes with one empty component that would break
    /// compatibility with the empty set if the profile converged to them.
    fn a2_forbidden(&self) -> Result<Vec<Subset>> {
        let full = self.ground.full();
        let mut out = vec![0; full as usize + 1];
        for side in 0..2 {
            let other = 1 - side;
            let lims = self.node_limits(side)?;
            let candidates: Vec<usize> = (0..self.nodes.len())
                .filter(|&q| {
                    let n = &self.nodes[q];
                    !matches!(n.kind, NodeKind::Family(_))
                        && n.component(other).slice(0).is_empty()
                        && !n.component(side).slice(0).is_empty()
                })
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let mut cache: HashMap<SymbolicSet, Subset> = HashMap::new();
            for a in 1..=full {
                let li = self.profile_limits(&lims, a).0;
                if let Some(&v) = cache.get(&li) {
                    out[a as usize] |= v;
                    continue;
                }
                let mut bad = 0;
                for &q in &candidates {
                    let p = self.nodes[q].component(side).slice(0);
                    for (r, nr) in self.nodes.iter().enumerate() {
                        if r == q {
                            continue;
                        }
                        let x = nr.component(side);
                        if !x.contains_set(&p)?.and(&x.within(&li)?).is_empty() {
                            bad |= bits::single(q);
                            break;
                        }
                    }
                }
                cache.insert(li, bad);
                out[a as usize] |= bad;
            }
        }
        Ok(out)
    }

    fn a2_failures(&self, tau: &FinTopology, forbidden: &[Subset]) -> Vec<String> {
        let lt = associated_operator(tau);
        let mut out = Vec::new();
        for a in 1..=self.ground.full() {
            let bad = lt.get(a) & forbidden[a as usize];
            if bad != 0 {
                out.push(format!("{} → {}", self.show(a), self.show(bad)));
            }
        }
        out
    }

    /// Core points and boundary nodes not separated by a `τ_chr`-open set and a `τ`-open set.
    fn a_sep_failures(&self, tau_chr: &FinTopology, tau: &FinTopology) -> Vec<(usize, usize)> {
        let b = self.boundary();
        cross_t2_failures(tau_chr, tau, self.points())
            .into_iter()
            .filter(|&(_, q)| bits::contains(b, q))
            .collect()
    }

    fn show_pairs(&self, pairs: &[(usize, usize)]) -> String {
        let names = self.ground.labels();
        pairs
            .iter()
            .map(|&(p, q)| format!("{}|{}", names[p], names[q]))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Generating families of a designated set: families inside it whose past
    /// (future) union is the whole set.
    fn generators(&self, side: usize, set: &SymbolicSet) -> Result<Vec<usize>> {
        let shape = self.model.shape();
        let mut out = Vec::new();
        for f in 0..shape.fams {
            let mut all = SymbolicSet::empty(shape);
            all.fams[f] = Norm1::constant(true);
            if !all.is_subset(set) {
                continue;
            }
            let hull = if side == 0 {
                self.model.past_of_set(&all)?
            } else {
                self.model.future_of_set(&all)?
            };
            if &hull == set {
                out.push(f);
            }
        }
        Ok(out)
    }

    /// Admissibility and separation verdicts. Minimality is decided by exhaustive
    /// topology enumeration when the node count is at most `max_enum`, and against
    /// a fixed candidate list otherwise.
    pub fn admissibility_report(&self, max_enum: usize) -> Result<AdmissibilityReport> {
        let mut checks = Vec::new();
        let mut push = |name: &str, verdict: Verdict, detail: String| {
            checks.push(Check {
                name: name.into(),
                verdict,
                detail,
            });
        };
        let tau_chr = derived_topology_unchecked(&self.limit);
        let star = self.star_operator();
        let tau_star = derived_topology_unchecked(&star);
        let dstar = self.double_star_operator();
        let tau_dstar = derived_topology_unchecked(&dstar);
        let refined = separating_refinement_unchecked(&tau_chr, self.points())?;
        let forbidden = self.a2_forbidden()?;
        let (manifold, boundary, points) = (self.manifold(), self.boundary(), self.points());

        let a1 = |tau: &FinTopology| self.a1_failures(tau);
        let a2 = |tau: &FinTopology| self.a2_failures(tau, &forbidden);
        let sep = |tau: &FinTopology| self.a_sep_failures(&tau_chr, tau);
        let verdict = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
        let listed = |v: &[String]| {
            if v.is_empty() {
                "none".to_string()
            } else {
                v.join("; ")
            }
        };

        for (label, tau) in [("chr", &tau_chr), ("star", &tau_star)] {
            let f1 = a1(tau);
            push(&format!("a1-{label}"), verdict(f1.is_empty()), listed(&f1));
            let f2 = a2(tau);
            push(&format!("a2-{label}"), verdict(f2.is_empty()), listed(&f2));
        }
        for (label, tau) in [
            ("chr", &tau_chr),
            ("star", &tau_star),
            ("refined", &refined),
        ] {
            let f = sep(tau);
            push(
                &format!("a-sep-{label}"),
                verdict(f.is_empty()),
                self.show_pairs(&f),
            );
        }
        push(
            "refinement-identity",
            if refined == tau_chr {
                Verdict::Pass
            } else {
                Verdict::Info
            },
            format!("refined opens: {}", refined.show()),
        );

        // Limits of an admissible topology are chronological limits.
        for (label, tau) in [("chr", &tau_chr), ("star", &tau_star)] {
            let name = format!("limits-inside-chr-{label}");
            if !a1(tau).is_empty() || !a2(tau).is_empty() {
                push(&name, Verdict::NotApplicable, "A1 or A2 fails".into());
                continue;
            }
            // A family node is a limit of its own profile in any finite topology in
            // which it is open, so only single nodes are compared.
            let lt = associated_operator(tau);
            let singles = !self.families() & self.ground.full();
            let extra = |a: Subset| lt.get(a) & singles & !self.limit.get(a);
            let bad: Vec<String> = (1..=self.ground.full())
                .filter(|&a| extra(a) != 0)
                .map(|a| format!("{} → {}", self.show(a), self.show(extra(a))))
                .collect();
            push(&name, verdict(bad.is_empty()), listed(&bad));
        }

        let mixing: Vec<String> = (1..=self.ground.full())
            .filter(|&a| {
                let v = star.get(a);
                v & manifold != 0 && v & boundary != 0
            })
            .map(|a| self.show(a))
            .collect();
        push(
            "star-no-mixing",
            verdict(mixing.is_empty()),
            listed(&mixing),
        );

        let mut ends = Vec::new();
        let mut end_ok = true;
        for side in 0..2 {
            let sd = side_of(&self.model, side);
            for (i, d) in sd.designated.iter().enumerate() {
                let gens = self.generators(side, &d.set)?;
                if gens.is_empty() {
                    ends.push(format!("{}: no generating family", d.name));
                    continue;
                }
                for f in gens {
                    let fam_node = self
                        .nodes
                        .iter()
                        .position(|n| n.kind == NodeKind::Family(f))
                        .expect("family node");
                    let lim = self.limit.get(bits::single(fam_node));
                    let hit = bits::members(lim & boundary).any(|b| match self.nodes[b].kind {
                        NodeKind::Boundary { tip, tif } => {
                            (if side == 0 { tip } else { tif }) == Some(i)
                        }
                        _ => false,
                    });
                    end_ok &= hit;
                    ends.push(format!(
                        "{} generated by {}: {}",
                        d.name,
                        self.nodes[fam_node].name,
                        if hit { "endpoint" } else { "no endpoint" }
                    ));
                }
            }
        }
        push("endpoint", verdict(end_ok), listed(&ends));
        push(
            "boundary-closed",
            verdict(tau_chr.is_closed(boundary)),
            format!("boundary {}", self.show(boundary)),
        );
        let (dense, dense_refined) = density_check(&tau_chr, &refined, manifold)?;
        push(
            "dense-chr",
            verdict(dense),
            format!("closure {}", self.show(tau_chr.closure(manifold))),
        );
        push(
            "dense-refined",
            if dense_refined {
                Verdict::Pass
            } else {
                Verdict::Info
            },
            format!("closure {}", self.show(refined.closure(manifold))),
        );
        let singles = !self.families() & self.ground.full();
        let t1: Vec<(usize, usize)> = tau_chr
            .t1_failures()
            .into_iter()
            .filter(|&(x, y)| bits::contains(singles, x) && bits::contains(singles, y))
            .collect();
        push("t1-chr", verdict(t1.is_empty()), self.show_pairs(&t1));

        let mut disagree = Vec::new();
        for a in bits::members(points) {
            for b in bits::members(points) {
                let NodeKind::Point(ca) = self.nodes[a].kind else {
                    continue;
                };
                let NodeKind::Point(cb) = self.nodes[b].kind else {
                    continue;
                };
                let model_lt = self
                    .model
                    .past(crate::symbolic::Point::Core(cb))
                    .contains(crate::symbolic::Point::Core(ca));
                if model_lt != bits::contains(self.chron[a], b) {
                    disagree.push(format!(
                        "{}≪{}: model {model_lt}",
                        self.nodes[a].name, self.nodes[b].name
                    ));
                }
            }
        }
        push(
            "embedding",
            if disagree.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Info
            },
            format!(
                "pairs injective; chronology disagreements: {}",
                listed(&disagree)
            ),
        );

        let mut breaks = Vec::new();
        let named = self.sequences()?;
        let catalog: Vec<(String, Subset)> = named
            .into_iter()
            .chain((1..=self.ground.full()).map(|a| (self.show(a), a)))
            .collect();
        for (name, a) in &catalog {
            let lost = self.limit.get(*a) & points & !dstar.get(*a);
            if lost != 0 {
                breaks.push(format!("{name}: loses {}", self.show(lost)));
            }
        }
        breaks.dedup();
        push(
            "double-star-keeps-point-limits",
            verdict(breaks.is_empty()),
            listed(&breaks[..breaks.len().min(4)]),
        );

        let b2: Vec<(usize, usize)> = bits::members(boundary)
            .flat_map(|x| {
                bits::members(boundary)
                    .filter(move |&y| x < y)
                    .map(move |y| (x, y))
            })
            .filter(|&(x, y)| tau_star.min_neighbourhood(x) & tau_star.min_neighbourhood(y) != 0)
            .collect();
        push("boundary-non-t2", Verdict::Info, self.show_pairs(&b2));

        // Minimality among topologies satisfying A1, A2 (and A_Sep).
        let n = self.ground.len();
        let exhaustive = n <= max_enum;
        let candidates: Vec<FinTopology> = if exhaustive {
            all_topologies(&self.ground)?
        } else {
            vec![
                tau_chr.clone(),
                tau_star.clone(),
                refined.clone(),
                tau_dstar.clone(),
                FinTopology::discrete(self.ground.clone()),
                FinTopology::indiscrete(self.ground.clone()),
            ]
        };
        let scope = if exhaustive {
            "all topologies"
        } else {
            "candidate topologies"
        };
        let admissible: Vec<&FinTopology> = candidates
            .iter()
            .filter(|t| a1(t).is_empty() && a2(t).is_empty())
            .collect();
        let t2: Vec<&FinTopology> = admissible
            .iter()
            .copied()
            .filter(|t| sep(t).is_empty())
            .collect();
        let minimal_in = |tau: &FinTopology, pool: &[&FinTopology]| {
            pool.iter().all(|t| !(t.is_coarser_than(tau) && *t != tau))
        };
        let chr_ok = a1(&tau_chr).is_empty() && a2(&tau_chr).is_empty();
        push(
            "admissible-chr",
            verdict(chr_ok && minimal_in(&tau_chr, &admissible)),
            format!(
                "{} of {} {scope} satisfy A1 and A2",
                admissible.len(),
                candidates.len()
            ),
        );
        let star_ok =
            a1(&tau_star).is_empty() && a2(&tau_star).is_empty() && sep(&tau_star).is_empty();
        push(
            "t2-admissible-star",
            verdict(star_ok && minimal_in(&tau_star, &t2)),
            format!(
                "{} of {} {scope} satisfy A1, A2 and A_Sep",
                t2.len(),
                candidates.len()
            ),
        );
        let dstar_ok =
            a1(&tau_dstar).is_empty() && a2(&tau_dstar).is_empty() && sep(&tau_dstar).is_empty();
        push(
            "t2-admissible-double-star",
            if dstar_ok && minimal_in(&tau_dstar, &t2) {
                Verdict::Pass
            } else {
                Verdict::Info
            },
            format!("opens {}", tau_dstar.show()),
        );
        push(
            "ip-family",
            Verdict::Info,
            "maximality ranges over pasts (futures) of model points and designated sets only"
                .into(),
        );
        let points_open = tau_chr.is_open(points);
        push(
            "points-open",
            if points_open {
                Verdict::Pass
            } else {
                Verdict::Info
            },
            "core points form an open set of τ_chr".into(),
        );

        Ok(AdmissibilityReport {
            nodes: self.ground.labels().to_vec(),
            tau_chr: opens(&tau_chr),
            tau_star: opens(&tau_star),
            tau_refined: opens(&refined),
            iteration: self.iteration_report(),
            notes: self.notes.clone(),
            checks,
        })
    }

    /// Machine-readable summary: nodes with their components, node chronology and
    /// the limit table. Family components are given by their liminf and limsup.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let m = &self.model;
        let mut nodes = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let kind = match n.kind {
                NodeKind::Point(_) => "point",
                NodeKind::Family(_) => "family",
                NodeKind::Boundary { .. } => "boundary",
            };
            let mut v = serde_json::json!({
                "name": n.name,
                "kind": kind,
                "precedes": self.ground.names(self.chron[i]),
            });
            if matches!(n.kind, NodeKind::Family(_)) {
                v["past_liminf"] = m.show(&n.past.liminf()?).into();
                v["past_limsup"] = m.show(&n.past.limsup()?).into();
                v["future_liminf"] = m.show(&n.future.liminf()?).into();
                v["future_limsup"] = m.show(&n.future.limsup()?).into();
            } else {
                v["past"] = m.show(&n.past.slice(0)).into();
                v["future"] = m.show(&n.future.slice(0)).into();
            }
            nodes.push(v);
        }
        let sequences: Vec<serde_json::Value> = self
            .sequences()?
            .into_iter()
            .map(|(name, a)| {
                serde_json::json!({
                    "name": name,
                    "profile": self.ground.names(a),
                    "limits": self.ground.names(self.chron_limit(a)),
                    "star_limits": self.ground.names(self.chron_star(a)),
                })
            })
            .collect();
        Ok(serde_json::json!({
            "nodes": nodes,
            "limit_operator": self.limit.to_json(),
            "sequences": sequences,
            "notes": self.notes,
        }))
    }

    /// DOT rendering of the node chronology, boundary nodes drawn as boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph completion {\n  rankdir=BT;\n");
        for n in &self.nodes {
            let shape = match n.kind {
                NodeKind::Point(_) => "ellipse",
                NodeKind::Family(_) => "ellipse, style=dashed",
                NodeKind::Boundary { .. } => "box",
            };
            out.push_str(&format!("  \"{}\" [shape={shape}];\n", n.name));
        }
        for (x, nx) in self.nodes.iter().enumerate() {
            for y in bits::members(self.chron[x]) {
                // Skip edges implied by a two-step path.
                let implied = bits::members(self.chron[x])
                    .any(|z| z != y && bits::contains(self.chron[z], y));
                if !implied {
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\";\n",
                        nx.name, self.nodes[y].name
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn opens(t: &FinTopology) -> Vec<String> {
    t.opens().iter().map(|&o| t.ground().show(o)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Growth {
    pub profile: String,
    pub step: usize,
    pub new: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationReport {
    /// First `k` with `L^1 ∪ … ∪ L^k` equal to the next union.
    pub stabilizes_at: Option<usize>,
    /// Whether that union is the associated operator of the derived topology.
    pub reaches_associated: Option<bool>,
    /// Limits that appear only at a later step.
    pub growth: Vec<Growth>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub nodes: Vec<String>,
    pub tau_chr: Vec<String>,
    pub tau_star: Vec<String>,
    pub tau_refined: Vec<String>,
    pub iteration: IterationReport,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl AdmissibilityReport {
    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.verdict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chrono::tests::removed_point_json;

    #[test]
    fn removed_point_completion() {
        let m = ChronoModel::from_json(removed_point_json()).unwrap();
        let c = build_completion(&m).unwrap();
        assert_eq!(c.ground().labels(), &["c", "d", "(P,F)"]);
        let pf = c.profile(&["(P,F)"]).unwrap();
        assert_eq!(c.chron_limit(c.profile(&["d"]).unwrap()), pf);
        assert_eq!(c.chron_limit(c.profile(&["c"]).unwrap()), pf);
        assert_eq!(c.chron_limit(pf), pf);
        let r = c.admissibility_report(5).unwrap();
        for name in [
            "a1-chr",
            "a2-chr",
            "a-sep-chr",
            "refinement-identity",
            "limits-inside-chr-chr",
            "admissible-chr",
            "endpoint",
            "boundary-closed",
            "dense-chr",
            "t1-chr",
        ] {
            assert_eq!(
                r.verdict(name),
                Some(Verdict::Pass),
                "{name}: {:?}",
                r.checks
            );
        }
    }
}
