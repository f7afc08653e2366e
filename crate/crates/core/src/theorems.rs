//! Instance checker for the limit-operator results: every claim is evaluated on a
//! concrete `(L, D)` and reported as passed, not applicable, or failed.

use serde::Serialize;

use crate::bits::{self, Subset};
use crate::error::Result;
use crate::limit_ops::{
    associated_operator, derived_topology, derived_topology_unchecked, first_order_on, iterate_raw,
    order_of, restrict_unchecked, star_unchecked, validate_operator, OperatorOrder,
    TailLimitOperator,
};
use crate::separation::{cross_t2_failures, separating_refinement, DomainDesignation};
use crate::topology::{subspace, FinTopology};

/// Largest ground set on which the maximality claim enumerates every competitor.
pub const MAXIMALITY_ENUM_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    Pass,
    HypothesisNotMet,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: &'static str,
    pub status: ClaimStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub claims: Vec<Claim>,
}

impl TheoremReport {
    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.status == ClaimStatus::Fail)
    }

    pub fn all_pass_or_inapplicable(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn status(&self, name: &str) -> Option<ClaimStatus> {
        self.claims
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.status)
    }
}

pub const CLAIM_NAMES: &[&str] = &[
    "associated-roundtrip",
    "restriction",
    "iterates-bounded",
    "limits-converge",
    "star-is-limit-operator",
    "finer-iff-smaller",
    "separation-vs-no-mixing",
    "star-maximal",
    "star-keeps-limits",
    "topology-chain",
    "star-first-order",
    "iterates-agree",
    "star-of-associated",
];

struct Ctx<'a> {
    l: &'a TailLimitOperator,
    d: Subset,
    full: Subset,
    tau: FinTopology,
    lt: TailLimitOperator,
    ls: TailLimitOperator,
    lts: TailLimitOperator,
    tau_star: FinTopology,
    tau_ls: FinTopology,
}

fn claim(name: &'static str, status: ClaimStatus, detail: impl Into<String>) -> Claim {
    Claim {
        name,
        status,
        detail: detail.into(),
    }
}

fn verdict(name: &'static str, ok: bool, detail: impl Into<String>) -> Claim {
    let s = if ok {
        ClaimStatus::Pass
    } else {
        ClaimStatus::Fail
    };
    claim(name, s, detail)
}

fn na(name: &'static str, why: &str) -> Claim {
    claim(name, ClaimStatus::HypothesisNotMet, why)
}

fn is_first_order(l: &TailLimitOperator) -> bool {
    l.same_table(&associated_operator(&derived_topology_unchecked(l)))
}

fn antitone(l: &TailLimitOperator) -> bool {
    validate_operator(&l.clone().with_coherent(false)).is_valid()
}

/// `L'(A) ∩ D ≠ ∅ ⇒ L'(A) ⊆ D` for every profile.
fn no_mixing(l: &TailLimitOperator, d: Subset) -> bool {
    l.profiles().all(|a| {
        let v = l.get(a);
        v & d == 0 || bits::is_subset(v, d)
    })
}

/// `L'|_D = L|_D` on profiles inside `D`.
fn agrees_on(l: &TailLimitOperator, other: &TailLimitOperator, d: Subset) -> bool {
    bits::nonempty_submasks(d).all(|a| l.get(a) & d == other.get(a) & d)
}

fn separates(tau: &FinTopology, finer: &FinTopology, d: Subset) -> bool {
    cross_t2_failures(tau, finer, d).is_empty()
}

/// Evaluates every claim on `(L, D)`. `L` must be antitone and `D` valid for `τ_L`.
pub fn verify_section3(l: &TailLimitOperator, d: &DomainDesignation) -> Result<TheoremReport> {
    let tau = derived_topology(&l.clone().with_coherent(false))?;
    DomainDesignation::new(&tau, d.set())?;
    let lt = associated_operator(&tau);
    let ls = star_unchecked(l, d.set());
    let lts = star_unchecked(&lt, d.set());
    let tau_star = separating_refinement(&tau, d)?;
    let tau_ls = derived_topology_unchecked(&ls);
    let cx = Ctx {
        l,
        d: d.set(),
        full: l.ground().full(),
        tau,
        lt,
        ls,
        lts,
        tau_star,
        tau_ls,
    };
    let claims = vec![
        roundtrip(&cx),
        restriction(&cx)?,
        iterates_bounded(&cx),
        limits_converge(&cx),
        star_is_limit_operator(&cx),
        finer_iff_smaller(&cx),
        separation_vs_no_mixing(&cx),
        star_maximal(&cx),
        star_keeps_limits(&cx),
        topology_chain(&cx),
        star_first_order(&cx),
        iterates_agree(&cx),
        star_of_associated(&cx)?,
    ];
    Ok(TheoremReport { claims })
}

fn roundtrip(cx: &Ctx) -> Claim {
    let back = derived_topology_unchecked(&cx.lt);
    let ok = back == cx.tau && is_first_order(&cx.lt);
    verdict(
        "associated-roundtrip",
        ok,
        "τ_{L_τ} = τ and L_τ is first order",
    )
}

fn restriction(cx: &Ctx) -> Result<Claim> {
    let mut checked = 0;
    for &u in cx.tau.opens() {
        if u == 0 {
            continue;
        }
        checked += 1;
        let r = restrict_unchecked(cx.l, u)?;
        if subspace(&cx.tau, u)? != derived_topology_unchecked(&r) {
            let g = cx.l.ground();
            return Ok(verdict(
                "restriction",
                false,
                format!("open set {} breaks τ_L|_U = τ_{{L|_U}}", g.show(u)),
            ));
        }
    }
    Ok(verdict("restriction", true, format!("{checked} open sets")))
}

fn iterates_bounded(cx: &Ctx) -> Claim {
    if !cx.l.is_coherent() {
        return na("iterates-bounded", "operator is not coherent");
    }
    let n = cx.l.ground().len();
    let chain = iterate_raw(cx.l, n + 1);
    let monotone = chain.windows(2).all(|w| w[0].is_pointwise_subset(&w[1]));
    let bounded = chain.iter().all(|li| li.is_pointwise_subset(&cx.lt));
    let stable = chain[n - 1].same_table(&chain[n]);
    verdict(
        "iterates-bounded",
        monotone && bounded && stable,
        "L^i increasing, within L_τ, constant from step |X|",
    )
}

fn limits_converge(cx: &Ctx) -> Claim {
    let ok = cx.l.is_pointwise_subset(&cx.lt);
    verdict("limits-converge", ok, "p ∈ L(A) ⇒ A converges to p in τ_L")
}

fn star_is_limit_operator(cx: &Ctx) -> Claim {
    let ok = antitone(&cx.ls)
        && cx.ls.is_pointwise_subset(cx.l)
        && no_mixing(&cx.ls, cx.d)
        && agrees_on(&cx.ls, cx.l, cx.d);
    verdict(
        "star-is-limit-operator",
        ok,
        "L* antitone, L* ⊆ L, no mixed limits, L*|_D = L|_D",
    )
}

/// Competitors used by the two-operator claims.
fn partners(cx: &Ctx) -> Vec<(&'static str, TailLimitOperator)> {
    vec![
        ("L*", cx.ls.clone()),
        ("(L_τ)*", cx.lts.clone()),
        ("L_{τ*}", associated_operator(&cx.tau_star)),
        ("L_τ", cx.lt.clone()),
    ]
}

fn finer_iff_smaller(cx: &Ctx) -> Claim {
    let first = is_first_order(cx.l);
    let mut applied = 0;
    for (name, lp) in partners(cx) {
        let tau_p = derived_topology_unchecked(&lp);
        let smaller = lp.is_pointwise_subset(cx.l);
        let finer = cx.tau.is_coarser_than(&tau_p);
        if smaller {
            applied += 1;
            if !finer {
                return verdict(
                    "finer-iff-smaller",
                    false,
                    format!("{name} ⊆ L but τ_L ⊄ τ_{{{name}}}"),
                );
            }
        }
        if first && finer {
            applied += 1;
            if !smaller {
                return verdict(
                    "finer-iff-smaller",
                    false,
                    format!("L first order, τ_L ⊆ τ_{{{name}}} but {name} ⊄ L"),
                );
            }
        }
    }
    if applied == 0 {
        return na("finer-iff-smaller", "no partner satisfies either premise");
    }
    verdict(
        "finer-iff-smaller",
        true,
        format!("{applied} implications checked"),
    )
}

fn separation_vs_no_mixing(cx: &Ctx) -> Claim {
    let first_on_d = first_order_on(cx.l, cx.d);
    let mut applied = 0;
    for (name, lp) in partners(cx) {
        let tau_p = derived_topology_unchecked(&lp);
        if !cx.tau.is_coarser_than(&tau_p) {
            continue;
        }
        let sep = separates(&cx.tau, &tau_p, cx.d);
        let mix_free = no_mixing(&lp, cx.d);
        if sep {
            applied += 1;
            if !mix_free {
                return verdict(
                    "separation-vs-no-mixing",
                    false,
                    format!("τ_{{{name}}} separates but {name} mixes limits"),
                );
            }
        }
        if first_on_d && agrees_on(cx.l, &lp, cx.d) && mix_free {
            applied += 1;
            if !sep {
                return verdict(
                    "separation-vs-no-mixing",
                    false,
                    format!("{name} has no mixed limits but τ_{{{name}}} fails to separate"),
                );
            }
        }
    }
    if applied == 0 {
        return na(
            "separation-vs-no-mixing",
            "no partner refines τ_L with a met premise",
        );
    }
    verdict(
        "separation-vs-no-mixing",
        true,
        format!("{applied} implications checked"),
    )
}

/// Every antitone `L'` with `L' ⊆ L`, no mixed limits and `L'|_D = L|_D`, by depth-first search.
/// Calls `visit` on each; stops early when it returns `false`.
pub fn for_each_constrained(
    l: &TailLimitOperator,
    d: Subset,
    mut visit: impl FnMut(&[Subset]) -> bool,
) {
    let full = l.ground().full();
    let mut order: Vec<Subset> = (1..=full).collect();
    order.sort_by_key(|a| (a.count_ones(), *a));
    let mut table = vec![0 as Subset; full as usize + 1];
    fn go(
        l: &TailLimitOperator,
        d: Subset,
        full: Subset,
        order: &[Subset],
        k: usize,
        table: &mut Vec<Subset>,
        visit: &mut dyn FnMut(&[Subset]) -> bool,
    ) -> bool {
        if k == order.len() {
            return visit(table);
        }
        let a = order[k];
        let mut cap = l.get(a);
        for x in bits::members(a) {
            let b = a & !bits::single(x);
            if b != 0 {
                cap &= table[b as usize];
            }
        }
        let inside = bits::is_subset(a, d);
        let forced = if inside { l.get(a) & d } else { 0 };
        if !bits::is_subset(forced, cap) {
            return true;
        }
        let free = cap & !forced;
        let mut extra = free;
        loop {
            let v = forced | extra;
            let ok_mix = v & d == 0 || bits::is_subset(v, d);
            let ok_e5 = !inside || v & d == forced;
            if ok_mix && ok_e5 {
                table[a as usize] = v;
                if !go(l, d, full, order, k + 1, table, visit) {
                    return false;
                }
            }
            if extra == 0 {
                break;
            }
            extra = (extra - 1) & free;
        }
        let _ = full;
        true
    }
    go(l, d, full, &order, 0, &mut table, &mut visit);
}

fn star_maximal(cx: &Ctx) -> Claim {
    let n = cx.l.ground().len();
    if n <= MAXIMALITY_ENUM_POINTS {
        let mut count = 0u64;
        let mut bad: Option<Subset> = None;
        for_each_constrained(cx.l, cx.d, |t| {
            count += 1;
            if let Some(a) = (1..=cx.full).find(|&a| !bits::is_subset(t[a as usize], cx.ls.get(a)))
            {
                bad = Some(a);
                return false;
            }
            true
        });
        return match bad {
            Some(a) => verdict(
                "star-maximal",
                false,
                format!("competitor exceeds L* on {}", cx.l.ground().show(a)),
            ),
            None => verdict(
                "star-maximal",
                true,
                format!("{count} competitors enumerated"),
            ),
        };
    }
    let mut applied = 0;
    for (name, lp) in partners(cx) {
        if antitone(&lp)
            && lp.is_pointwise_subset(cx.l)
            && no_mixing(&lp, cx.d)
            && agrees_on(&lp, cx.l, cx.d)
        {
            applied += 1;
            if !lp.is_pointwise_subset(&cx.ls) {
                return verdict(
                    "star-maximal",
                    false,
                    format!("{name} meets the constraints but exceeds L*"),
                );
            }
        }
    }
    verdict(
        "star-maximal",
        true,
        format!("{applied} partner competitors"),
    )
}

fn star_keeps_limits(cx: &Ctx) -> Claim {
    if !separates(&cx.tau, &cx.tau_ls, cx.d) {
        return na("star-keeps-limits", "τ_{L*} does not separate D");
    }
    let lts_conv = associated_operator(&cx.tau_ls);
    for a in cx.l.profiles() {
        let must = lts_conv.get(a) & cx.l.get(a);
        if !bits::is_subset(must, cx.ls.get(a)) {
            return verdict(
                "star-keeps-limits",
                false,
                format!("profile {}", cx.l.ground().show(a)),
            );
        }
    }
    verdict(
        "star-keeps-limits",
        true,
        "τ_{L*}-limits inside L(A) stay in L*(A)",
    )
}

fn topology_chain(cx: &Ctx) -> Claim {
    if !first_order_on(cx.l, cx.d) {
        return na("topology-chain", "L is not first order on D");
    }
    let seq = derived_topology_unchecked(&associated_operator(&cx.tau_star));
    let ok = cx.tau.is_coarser_than(&cx.tau_star)
        && seq == cx.tau_star
        && cx.tau_star.is_coarser_than(&cx.tau_ls);
    verdict("topology-chain", ok, "τ ⊆ τ* = (τ*)_Seq ⊆ τ_{L*}")
}

fn star_first_order(cx: &Ctx) -> Claim {
    if !is_first_order(cx.l) {
        return na("star-first-order", "L is not first order");
    }
    let ok = is_first_order(&cx.ls) && cx.tau_ls == cx.tau_star;
    verdict("star-first-order", ok, "L* first order and τ_{L*} = τ*")
}

fn iterates_agree(cx: &Ctx) -> Claim {
    if !cx.l.is_coherent() {
        return na("iterates-agree", "operator is not coherent");
    }
    let outside = cx.full & !cx.d;
    let profiles: Vec<Subset> =
        cx.l.profiles()
            .filter(|&a| cx.lts.get(a) & outside != 0)
            .collect();
    if profiles.is_empty() {
        return na(
            "iterates-agree",
            "no profile has a limit outside D under (L_τ)*",
        );
    }
    let steps = cx.l.ground().len() + 1;
    let li = iterate_raw(cx.l, steps);
    let lsi = iterate_raw(&cx.ls, steps);
    for &a in &profiles {
        for (i, (x, y)) in li.iter().zip(&lsi).enumerate() {
            if x.get(a) != y.get(a) {
                return verdict(
                    "iterates-agree",
                    false,
                    format!("step {} differs on {}", i + 1, cx.l.ground().show(a)),
                );
            }
        }
    }
    verdict(
        "iterates-agree",
        true,
        format!("{} profiles", profiles.len()),
    )
}

fn star_of_associated(cx: &Ctx) -> Result<Claim> {
    if !cx.l.is_coherent() {
        return Ok(na("star-of-associated", "operator is not coherent"));
    }
    let ord = order_of(&cx.l.clone().with_coherent(true))?;
    if ord == OperatorOrder::NotAnyOrder {
        return Ok(na("star-of-associated", "L has no order"));
    }
    if !first_order_on(cx.l, cx.d) {
        return Ok(na("star-of-associated", "L is not first order on D"));
    }
    if !is_first_order(&cx.ls) {
        return Ok(na("star-of-associated", "L* is not first order"));
    }
    Ok(verdict(
        "star-of-associated",
        cx.ls.same_table(&cx.lts),
        format!("L of order {ord}: L* = (L_τ)*"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::GroundSet;

    fn cascade() -> TailLimitOperator {
        let s = [0b011u32, 0b110, 0b110];
        TailLimitOperator::from_fn(GroundSet::new(["a", "b", "c"]).unwrap(), true, |a| {
            bits::members(a).fold(0b111, |acc, x| acc & s[x])
        })
        .unwrap()
    }

    #[test]
    fn sierpinski_suite_passes() {
        let t = FinTopology::from_opens(GroundSet::new(["p", "q"]).unwrap(), [0, 1, 3]).unwrap();
        let l = associated_operator(&t);
        let d = DomainDesignation::new(&t, 1).unwrap();
        let r = verify_section3(&l, &d).unwrap();
        assert!(r.all_pass_or_inapplicable(), "{r:?}");
        assert_eq!(r.status("star-first-order"), Some(ClaimStatus::Pass));
        assert_eq!(r.status("topology-chain"), Some(ClaimStatus::Pass));
        assert_eq!(r.status("star-maximal"), Some(ClaimStatus::Pass));
    }

    #[test]
    fn cascade_reports_applicability() {
        let l = cascade();
        let tau = derived_topology(&l).unwrap();
        for d in DomainDesignation::all_valid(&tau) {
            let r = verify_section3(&l, &d).unwrap();
            assert!(r.all_pass_or_inapplicable(), "D = {:b}: {r:?}", d.set());
            assert_eq!(
                r.status("star-first-order"),
                Some(ClaimStatus::HypothesisNotMet)
            );
        }
    }

    #[test]
    fn second_order_with_first_order_star() {
        // Cascade with D = {a}: L is second order, first order on D, and L* is first order.
        let l = cascade();
        let tau = derived_topology(&l).unwrap();
        let d = DomainDesignation::new(&tau, 0b001).unwrap();
        let r = verify_section3(&l, &d).unwrap();
        assert_eq!(
            r.status("star-of-associated"),
            Some(ClaimStatus::Pass),
            "{r:?}"
        );
    }

    #[test]
    fn enumeration_includes_the_star() {
        let l = cascade();
        let mut found = false;
        let ls = star_unchecked(&l, 0b001);
        for_each_constrained(&l, 0b001, |t| {
            if (1..8u32).all(|a| t[a as usize] == ls.get(a)) {
                found = true;
            }
            true
        });
        assert!(found);
    }
}

/// Every antitone operator on `n` points, as tables indexed by profile mask.
/// The count is the number of up-sets of the nonempty-subset lattice raised to the `n`.
pub fn all_antitone_tables(n: usize) -> Vec<Vec<Subset>> {
    let full = bits::full(n);
    let profiles: Vec<Subset> = (1..=full).collect();
    // Indicator maps of a single output point: antitone 0/1 functions on profiles.
    let mut columns: Vec<Vec<bool>> = Vec::new();
    for code in 0u64..(1u64 << profiles.len()) {
        let on = |a: Subset| code >> (a - 1) & 1 == 1;
        let ok = profiles.iter().all(|&a| {
            bits::members(a).all(|x| {
                let b = a & !bits::single(x);
                b == 0 || !on(a) || on(b)
            })
        });
        if ok {
            columns.push(
                std::iter::once(false)
                    .chain(profiles.iter().map(|&a| on(a)))
                    .collect(),
            );
        }
    }
    let mut out = Vec::new();
    let k = columns.len();
    let total = k.pow(n as u32);
    for mut idx in 0..total {
        let mut t = vec![0 as Subset; full as usize + 1];
        for p in 0..n {
            let col = &columns[idx % k];
            idx /= k;
            for a in 1..=full as usize {
                if col[a] {
                    t[a] |= bits::single(p);
                }
            }
        }
        out.push(t);
    }
    out
}
#[cfg(test)]
mod sweep {
    use super::*;
    use crate::topology::GroundSet;

    #[test]
    fn antitone_counts() {
        assert_eq!(all_antitone_tables(1).len(), 2);
        assert_eq!(all_antitone_tables(2).len(), 25);
    }

    #[test]
    fn exhaustive_three_points() {
        let g = GroundSet::anonymous(3).unwrap();
        let mut fails = 0;
        let mut tally = std::collections::BTreeMap::new();
        for t in all_antitone_tables(3) {
            let l = TailLimitOperator::from_fn(g.clone(), false, |a| t[a as usize]).unwrap();
            let l = {
                let c = l.is_coherent();
                l.with_coherent(c)
            };
            let tau = derived_topology(&l.clone().with_coherent(false)).unwrap();
            for d in DomainDesignation::all_valid(&tau) {
                let r = verify_section3(&l, &d).unwrap();
                for c in &r.claims {
                    *tally
                        .entry((c.name, format!("{:?}", c.status)))
                        .or_insert(0usize) += 1;
                }
                for c in r.failures() {
                    if fails < 20 {
                        eprintln!("{} D={:b}: {} {}", l.show(), d.set(), c.name, c.detail);
                    }
                    fails += 1;
                }
            }
        }
        assert_eq!(fails, 0);
        for name in CLAIM_NAMES {
            assert!(
                tally.contains_key(&(*name, "Pass".to_string())),
                "{name} never applies"
            );
        }
    }
}
