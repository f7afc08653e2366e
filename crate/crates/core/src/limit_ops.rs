//! Limit operators in the tail model.
//!
//! On a finite space a sequence converges to `p` exactly when the set of points
//! it visits infinitely often lies in the minimal neighbourhood of `p`, so an
//! operator is a map from nonempty subsets (tail profiles) to subsets.
//! Subsequences of a profile `A` are the nonempty `B ⊆ A`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Subset};
use crate::error::{Error, Result};
use crate::separation::DomainDesignation;
use crate::topology::{subspace, FinTopology, GroundSet};

/// Largest ground set for which full operator tables are built.
pub const MAX_OPERATOR_POINTS: usize = 16;

/// `table[A]` is the limit set of profile `A`; `table[0]` is unused and kept empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TailLimitOperator {
    ground: GroundSet,
    table: Vec<Subset>,
    coherent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// `(B, A)` with `B ⊂ A`, `|A ∖ B| = 1` and `L(A) ⊄ L(B)`.
    pub antitone_violations: Vec<(Subset, Subset)>,
    /// Points `x` with `x ∉ L({x})`; only populated when coherence is claimed.
    pub coherence_violations: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.antitone_violations.is_empty() && self.coherence_violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorOrder {
    FirstOrder,
    KthOrder(usize),
    NotAnyOrder,
}

impl std::fmt::Display for OperatorOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OperatorOrder::FirstOrder => write!(f, "FirstOrder"),
            OperatorOrder::KthOrder(k) => write!(f, "KthOrder({k})"),
            OperatorOrder::NotAnyOrder => write!(f, "NotAnyOrder"),
        }
    }
}

impl TailLimitOperator {
    pub fn from_fn(
        ground: GroundSet,
        coherent: bool,
        f: impl Fn(Subset) -> Subset,
    ) -> Result<Self> {
        let n = ground.len();
        if n > MAX_OPERATOR_POINTS {
            return Err(Error::Capacity(format!(
                "operator tables support at most {MAX_OPERATOR_POINTS} points, got {n}"
            )));
        }
        let full = ground.full();
        let mut table = vec![0; 1usize << n];
        for a in 1..=full {
            let v = f(a);
            if !bits::is_subset(v, full) {
                return Err(Error::Input(format!(
                    "limit set of {} leaves the ground set",
                    ground.show(a)
                )));
            }
            table[a as usize] = v;
        }
        Ok(Self {
            ground,
            table,
            coherent,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn coherent(&self) -> bool {
        self.coherent
    }

    pub fn with_coherent(mut self, coherent: bool) -> Self {
        self.coherent = coherent;
        self
    }

    #[inline]
    pub fn get(&self, a: Subset) -> Subset {
        debug_assert!(a != 0);
        self.table[a as usize]
    }

    pub fn profiles(&self) -> impl Iterator<Item = Subset> {
        1..=self.ground.full()
    }

    /// `self(A) ⊆ other(A)` for every profile.
    pub fn is_pointwise_subset(&self, other: &TailLimitOperator) -> bool {
        self.profiles()
            .all(|a| bits::is_subset(self.get(a), other.get(a)))
    }

    /// Same limit sets on every profile, ignoring the coherence flag.
    pub fn same_table(&self, other: &TailLimitOperator) -> bool {
        self.table == other.table
    }

    /// Whether `x ∈ L({x})` holds for every point, regardless of the flag.
    pub fn is_coherent(&self) -> bool {
        (0..self.ground.len()).all(|x| bits::contains(self.get(bits::single(x)), x))
    }

    pub fn show(&self) -> String {
        let parts: Vec<String> = self
            .profiles()
            .map(|a| format!("{}→{}", self.ground.show(a), self.ground.show(self.get(a))))
            .collect();
        parts.join(" ")
    }
}

pub fn validate_operator(l: &TailLimitOperator) -> ValidationReport {
    let mut antitone = Vec::new();
    for a in l.profiles() {
        for x in bits::members(a) {
            let b = a & !bits::single(x);
            if b != 0 && !bits::is_subset(l.get(a), l.get(b)) {
                antitone.push((b, a));
            }
        }
    }
    let coherence = if l.coherent {
        (0..l.ground.len())
            .filter(|&x| !bits::contains(l.get(bits::single(x)), x))
            .collect()
    } else {
        Vec::new()
    };
    ValidationReport {
        antitone_violations: antitone,
        coherence_violations: coherence,
    }
}

fn require_valid(l: &TailLimitOperator) -> Result<()> {
    let r = validate_operator(l);
    if let Some(&(b, a)) = r.antitone_violations.first() {
        return Err(Error::Precondition(format!(
            "operator is not antitone: L({}) ⊄ L({})",
            l.ground.show(a),
            l.ground.show(b)
        )));
    }
    if let Some(&x) = r.coherence_violations.first() {
        return Err(Error::Precondition(format!(
            "operator claims coherence but {} ∉ L({{{}}})",
            l.ground.labels()[x],
            l.ground.labels()[x]
        )));
    }
    Ok(())
}

/// Closed sets are the `C` with `L(A) ⊆ C` for every nonempty `A ⊆ C`.
pub fn derived_topology(l: &TailLimitOperator) -> Result<FinTopology> {
    require_valid(l)?;
    Ok(derived_topology_unchecked(l))
}

/// [`derived_topology`] without the validity precondition.
pub(crate) fn derived_topology_unchecked(l: &TailLimitOperator) -> FinTopology {
    let full = l.ground.full();
    let mut opens: Vec<Subset> = (0..=full)
        .filter(|&c| bits::nonempty_submasks(c).all(|a| bits::is_subset(l.get(a), c)))
        .map(|c| full & !c)
        .collect();
    opens.sort_unstable();
    FinTopology::from_sorted_unchecked(l.ground.clone(), opens)
}

/// `L_τ(A) = {p : A ⊆ N(p)}` where `N(p)` is the minimal neighbourhood of `p`.
pub fn associated_operator(tau: &FinTopology) -> TailLimitOperator {
    let nb = tau.min_neighbourhoods();
    TailLimitOperator::from_fn(tau.ground().clone(), true, |a| {
        nb.iter()
            .enumerate()
            .filter(|(_, &n)| bits::is_subset(a, n))
            .fold(0, |acc, (p, _)| acc | bits::single(p))
    })
    .expect("ground set already validated")
}

/// `L|_D(A) = L(A) ∩ D` on the ground set `D`, reindexed to `0..|D|`.
pub fn restrict_operator(l: &TailLimitOperator, d: Subset) -> Result<TailLimitOperator> {
    let tau = derived_topology(l)?;
    if d == 0 || !tau.is_open(d) {
        return Err(Error::Precondition(format!(
            "{} is not a nonempty open set",
            l.ground.show(d)
        )));
    }
    let r = restrict_unchecked(l, d)?;
    if subspace(&tau, d)? != derived_topology_unchecked(&r) {
        return Err(Error::Invariant(
            "restricted operator derives a different subspace topology".into(),
        ));
    }
    Ok(r)
}

pub(crate) fn restrict_unchecked(l: &TailLimitOperator, d: Subset) -> Result<TailLimitOperator> {
    let ground = l.ground.restrict(d)?;
    TailLimitOperator::from_fn(ground, l.coherent, |a| {
        bits::compress(l.get(bits::expand(a, d)) & d, d)
    })
}

/// One step: `next(A) = ⋃ { L(B) : ∅ ≠ B ⊆ U(A) }` with `U(A)` the accumulated limits.
fn step(l: &TailLimitOperator, acc: &[Subset]) -> Vec<Subset> {
    let mut next = vec![0; acc.len()];
    for (a, &u) in acc.iter().enumerate().skip(1) {
        next[a] = bits::nonempty_submasks(u).fold(0, |s, b| s | l.get(b));
    }
    next
}

/// `L^1 .. L^up_to` with `L^i(A) = ⋃ { L(B) : ∅ ≠ B ⊆ ⋃_{j<i} L^j(A) }`.
pub fn iterate(l: &TailLimitOperator, up_to: usize) -> Result<Vec<TailLimitOperator>> {
    if !l.coherent {
        return Err(Error::Precondition(
            "iteration requires a coherent operator".into(),
        ));
    }
    require_valid(l)?;
    Ok(iterate_raw(l, up_to))
}

/// [`iterate`] without preconditions.
pub(crate) fn iterate_raw(l: &TailLimitOperator, up_to: usize) -> Vec<TailLimitOperator> {
    let mut out = Vec::with_capacity(up_to);
    if up_to == 0 {
        return out;
    }
    out.push(l.clone());
    let mut acc = l.table.clone();
    while out.len() < up_to {
        let next = step(l, &acc);
        for (a, v) in acc.iter_mut().enumerate() {
            *v |= next[a];
        }
        out.push(TailLimitOperator {
            ground: l.ground.clone(),
            table: next,
            coherent: l.coherent,
        });
    }
    out
}

/// Position of the first iterate equal to the associated operator of `τ_L`.
pub fn order_of(l: &TailLimitOperator) -> Result<OperatorOrder> {
    if !l.coherent {
        return Err(Error::Precondition(
            "order is defined for coherent operators".into(),
        ));
    }
    let tau = derived_topology(l)?;
    let lt = associated_operator(&tau);
    if l.same_table(&lt) {
        return Ok(OperatorOrder::FirstOrder);
    }
    // The chain of a coherent operator grows strictly until it stops, so it is
    // constant from step |X| on.
    let chain = iterate_raw(l, l.ground.len() + 1);
    Ok(chain
        .iter()
        .position(|li| li.same_table(&lt))
        .map(|i| OperatorOrder::KthOrder(i + 1))
        .unwrap_or(OperatorOrder::NotAnyOrder))
}

/// For `A ⊆ D`, `p ∈ D`: `p ∈ L(A)` iff `A` converges to `p` in `τ_L`.
pub fn first_order_on(l: &TailLimitOperator, d: Subset) -> bool {
    let tau = derived_topology_unchecked(l);
    let lt = associated_operator(&tau);
    bits::nonempty_submasks(d).all(|a| l.get(a) & d == lt.get(a) & d)
}

/// `L*(A) = L(A) ∩ D` if some nonempty `B ⊆ A` has `L(B) ∩ D ≠ ∅`, else `L(A)`.
pub fn star_operator(l: &TailLimitOperator, d: &DomainDesignation) -> Result<TailLimitOperator> {
    require_valid(l)?;
    let tau = derived_topology_unchecked(l);
    DomainDesignation::new(&tau, d.set())?;
    Ok(star_unchecked(l, d.set()))
}

/// The starred formula with no precondition on `D`.
pub fn star_unchecked(l: &TailLimitOperator, d: Subset) -> TailLimitOperator {
    TailLimitOperator::from_fn(l.ground.clone(), false, |a| {
        let hit = bits::nonempty_submasks(a).any(|b| l.get(b) & d != 0);
        if hit {
            l.get(a) & d
        } else {
            l.get(a)
        }
    })
    .map(|s| {
        let c = s.is_coherent();
        s.with_coherent(c)
    })
    .expect("ground set already validated")
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorJson {
    points: Vec<String>,
    table: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    coherent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    autofill: Option<String>,
}

/// Profile key: member labels in ground order, comma separated.
pub fn profile_key(ground: &GroundSet, a: Subset) -> String {
    ground.names(a).join(",")
}

fn parse_key(ground: &GroundSet, key: &str) -> Result<Subset> {
    let names: Vec<&str> = key
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let a = ground.subset(&names)?;
    if a == 0 {
        return Err(Error::Input(format!("empty profile key `{key}`")));
    }
    Ok(a)
}

impl TailLimitOperator {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: OperatorJson =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("operator JSON: {e}")))?;
        let ground = GroundSet::new(raw.points)?;
        if ground.len() > MAX_OPERATOR_POINTS {
            return Err(Error::Capacity(format!(
                "operator on {} points",
                ground.len()
            )));
        }
        let autofill = match raw.autofill.as_deref() {
            None => false,
            Some("antitone-max") => true,
            Some(other) => return Err(Error::Input(format!("unknown autofill mode `{other}`"))),
        };
        let mut entries: BTreeMap<Subset, Subset> = BTreeMap::new();
        for (k, v) in &raw.table {
            let a = parse_key(&ground, k)?;
            if entries.insert(a, ground.subset(v)?).is_some() {
                return Err(Error::Input(format!("duplicate table entry for `{k}`")));
            }
        }
        let full = ground.full();
        let mut missing = Vec::new();
        for a in 1..=full {
            if entries.contains_key(&a) {
                continue;
            }
            if autofill && a.count_ones() >= 2 {
                continue;
            }
            missing.push(ground.show(a));
        }
        if !missing.is_empty() {
            return Err(Error::Incomplete(format!(
                "missing profiles {}",
                missing.join(" ")
            )));
        }
        Self::from_fn(ground, raw.coherent, |a| {
            entries.get(&a).copied().unwrap_or_else(|| {
                bits::members(a).fold(full, |acc, x| acc & entries[&bits::single(x)])
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let table = self
            .profiles()
            .map(|a| (profile_key(&self.ground, a), self.ground.names(self.get(a))))
            .collect();
        serde_json::to_value(OperatorJson {
            points: self.ground.labels().to_vec(),
            table,
            coherent: self.coherent,
            autofill: None,
        })
        .expect("operator serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(names: &[&str]) -> GroundSet {
        GroundSet::new(names.iter().copied()).unwrap()
    }

    fn from_singletons(s: [Subset; 3]) -> TailLimitOperator {
        TailLimitOperator::from_fn(g(&["a", "b", "c"]), true, |a| {
            bits::members(a).fold(0b111, |acc, x| acc & s[x])
        })
        .unwrap()
    }

    /// a→{a,b}, b→{b,c}, c→{c}; larger profiles intersect singleton values.
    fn stalled_cascade() -> TailLimitOperator {
        from_singletons([0b011, 0b110, 0b100])
    }

    /// a→{a,b}, b→{b,c}, c→{b,c}; second order.
    pub(crate) fn cascade() -> TailLimitOperator {
        from_singletons([0b011, 0b110, 0b110])
    }

    fn sier() -> FinTopology {
        FinTopology::from_opens(g(&["p", "q"]), [0, 0b01, 0b11]).unwrap()
    }

    #[test]
    fn identity_profile_map_is_not_antitone() {
        let x = g(&["a", "b", "c"]);
        let id = TailLimitOperator::from_fn(x, true, |a| a).unwrap();
        assert!(!validate_operator(&id).is_valid());
    }

    #[test]
    fn discrete_and_constant_operators() {
        let x = g(&["a", "b", "c"]);
        let disc =
            TailLimitOperator::from_fn(
                x.clone(),
                true,
                |a| if a.count_ones() == 1 { a } else { 0 },
            )
            .unwrap();
        assert!(validate_operator(&disc).is_valid());
        assert_eq!(
            derived_topology(&disc).unwrap(),
            FinTopology::discrete(x.clone())
        );
        assert_eq!(order_of(&disc).unwrap(), OperatorOrder::FirstOrder);
        let chain = iterate(&disc, 3).unwrap();
        assert!(chain.iter().all(|li| li.same_table(&disc)));
        let all = TailLimitOperator::from_fn(x.clone(), true, |_| 0b111).unwrap();
        assert!(validate_operator(&all).is_valid());
        assert_eq!(derived_topology(&all).unwrap(), FinTopology::indiscrete(x));
        assert_eq!(order_of(&all).unwrap(), OperatorOrder::FirstOrder);
    }

    #[test]
    fn non_antitone_is_reported() {
        let l =
            TailLimitOperator::from_fn(
                g(&["a", "b"]),
                true,
                |a| if a == 0b01 { 0b01 } else { 0b11 },
            )
            .unwrap();
        let r = validate_operator(&l);
        assert_eq!(r.antitone_violations, vec![(0b01, 0b11)]);
        assert!(derived_topology(&l).is_err());
    }

    #[test]
    fn stalled_cascade_never_reaches_its_topology() {
        let l = stalled_cascade();
        assert_eq!(
            derived_topology(&l).unwrap().opens(),
            &[0b000, 0b001, 0b011, 0b111]
        );
        // L({a,c}) = ∅ while {a,c} converges to c, and iteration cannot leave ∅.
        assert_eq!(l.get(0b101), 0);
        assert_eq!(order_of(&l).unwrap(), OperatorOrder::NotAnyOrder);
        assert_eq!(restrict_operator(&l, 0b001).unwrap().get(0b1), 0b1);
    }

    #[test]
    fn cascade_operator() {
        let l = cascade();
        assert_eq!(
            derived_topology(&l).unwrap().opens(),
            &[0b000, 0b001, 0b111]
        );
        let chain = iterate(&l, 3).unwrap();
        assert_eq!(chain[0].get(0b001), 0b011);
        assert_eq!(chain[1].get(0b001), 0b111);
        assert_eq!(order_of(&l).unwrap(), OperatorOrder::KthOrder(2));
        let r = restrict_operator(&l, 0b001).unwrap();
        assert_eq!(r.get(0b1), 0b1);
    }

    #[test]
    fn sierpinski_associated_and_star() {
        let t = sier();
        let lt = associated_operator(&t);
        assert_eq!(
            (lt.get(0b01), lt.get(0b10), lt.get(0b11)),
            (0b11, 0b10, 0b10)
        );
        assert_eq!(order_of(&lt).unwrap(), OperatorOrder::FirstOrder);
        let d = DomainDesignation::new(&t, 0b01).unwrap();
        let s = star_operator(&lt, &d).unwrap();
        assert_eq!((s.get(0b01), s.get(0b10), s.get(0b11)), (0b01, 0b10, 0b00));
        assert_eq!(
            derived_topology(&s).unwrap(),
            FinTopology::discrete(t.ground().clone())
        );
        let r = restrict_operator(&lt, 0b01).unwrap();
        assert_eq!(r.get(0b1), 0b1);
    }

    #[test]
    fn star_with_empty_domain_is_identity() {
        let t = sier();
        let lt = associated_operator(&t);
        let d = DomainDesignation::new(&t, 0).unwrap();
        assert!(star_operator(&lt, &d).unwrap().same_table(&lt));
    }

    #[test]
    fn pruned_operator_has_no_order() {
        // Both constant sequences reach every point, so τ_L is indiscrete and the
        // mixed profile converges everywhere, yet its table entry is emptied.
        let l =
            TailLimitOperator::from_fn(g(&["a", "b"]), true, |a| if a == 0b11 { 0 } else { 0b11 })
                .unwrap();
        assert!(validate_operator(&l).is_valid());
        assert_eq!(derived_topology(&l).unwrap().opens(), &[0b00, 0b11]);
        assert_eq!(order_of(&l).unwrap(), OperatorOrder::NotAnyOrder);
    }

    #[test]
    fn associated_operators_of_basic_spaces() {
        let x = g(&["a", "b", "c"]);
        let ld = associated_operator(&FinTopology::discrete(x.clone()));
        for a in ld.profiles() {
            let want = if a.count_ones() == 1 { a } else { 0 };
            assert_eq!(ld.get(a), want);
        }
        let li = associated_operator(&FinTopology::indiscrete(x));
        assert!(li.profiles().all(|a| li.get(a) == 0b111));
    }

    #[test]
    fn json_roundtrip_and_autofill() {
        let text = r#"{"points":["a","b","c"],"table":{"a":["a","b"],"b":["b","c"],"c":["c"]},
            "coherent":true,"autofill":"antitone-max"}"#;
        let l = TailLimitOperator::from_json(text).unwrap();
        assert!(l.same_table(&stalled_cascade()));
        let again = TailLimitOperator::from_json(&l.to_json().to_string()).unwrap();
        assert_eq!(again, l);
        let missing = r#"{"points":["a","b"],"table":{"a":["a"],"b":["b"]},"coherent":true}"#;
        assert!(matches!(
            TailLimitOperator::from_json(missing),
            Err(Error::Incomplete(_))
        ));
    }
}
