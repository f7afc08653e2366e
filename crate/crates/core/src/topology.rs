use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Subset, MAX_POINTS};
use crate::error::{Error, Result};

/// Labelled finite ground set. Labels are distinct and at most [`MAX_POINTS`] long.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Input(
                "ground set must have at least one point".into(),
            ));
        }
        if labels.len() > MAX_POINTS {
            return Err(Error::Capacity(format!(
                "ground set has {} points, limit is {MAX_POINTS}",
                labels.len()
            )));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Input("ground set labels must be distinct".into()));
        }
        Ok(Self { labels })
    }

    /// Points named `x0, x1, ...`.
    pub fn anonymous(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full(&self) -> Subset {
        bits::full(self.len())
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<Subset> {
        let mut s = 0;
        for n in names {
            let i = self
                .index(n.as_ref())
                .ok_or_else(|| Error::Input(format!("unknown point `{}`", n.as_ref())))?;
            s |= bits::single(i);
        }
        Ok(s)
    }

    pub fn names(&self, s: Subset) -> Vec<String> {
        bits::members(s).map(|i| self.labels[i].clone()).collect()
    }

    /// Subset rendered as `{a,b}`.
    pub fn show(&self, s: Subset) -> String {
        format!("{{{}}}", self.names(s).join(","))
    }

    /// Ground set restricted to the points of `s`, in index order.
    pub fn restrict(&self, s: Subset) -> Result<Self> {
        Self::new(self.names(s))
    }
}

/// JSON form of a topology: labelled points, open sets as label lists, and an
/// optional designation `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyJson {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<String>>,
}

impl TopologyJson {
    pub fn of(tau: &FinTopology) -> Self {
        let g = tau.ground();
        Self {
            points: g.labels().to_vec(),
            opens: tau.opens().iter().map(|&u| g.names(u)).collect(),
            d: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Input(format!(
                "topology JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn from_value(v: serde_json::Value) -> Result<Self> {
        serde_json::from_value(v).map_err(|e| Error::Input(format!("topology JSON: {e}")))
    }

    pub fn build(&self) -> Result<FinTopology> {
        let g = GroundSet::new(self.points.clone())?;
        let opens = self
            .opens
            .iter()
            .map(|u| g.subset(u))
            .collect::<Result<Vec<_>>>()?;
        FinTopology::from_opens(g, opens)
    }
}

/// A topology on a finite ground set. `opens` is sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinTopology {
    ground: GroundSet,
    opens: Vec<Subset>,
}

impl FinTopology {
    /// Checks the topology axioms on an explicit open-set family.
    pub fn from_opens(ground: GroundSet, opens: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let full = ground.full();
        let set: BTreeSet<Subset> = opens.into_iter().collect();
        if let Some(u) = set.iter().find(|&&u| !bits::is_subset(u, full)) {
            return Err(Error::Input(format!(
                "open set {u:#b} leaves the ground set"
            )));
        }
        if !set.contains(&0) || !set.contains(&full) {
            return Err(Error::Input(
                "a topology must contain the empty set and the whole set".into(),
            ));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&(a | b)) || !set.contains(&(a & b)) {
                    return Err(Error::Input(format!(
                        "family not closed under union/intersection at {} and {}",
                        ground.show(a),
                        ground.show(b)
                    )));
                }
            }
        }
        Ok(Self {
            ground,
            opens: set.into_iter().collect(),
        })
    }

    /// Trusted constructor for families already known to be topologies.
    pub(crate) fn from_sorted_unchecked(ground: GroundSet, opens: Vec<Subset>) -> Self {
        debug_assert!(opens.windows(2).all(|w| w[0] < w[1]));
        Self { ground, opens }
    }

    pub fn discrete(ground: GroundSet) -> Self {
        let opens = (0..=ground.full()).collect();
        Self { ground, opens }
    }

    pub fn indiscrete(ground: GroundSet) -> Self {
        let full = ground.full();
        Self {
            ground,
            opens: vec![0, full],
        }
    }

    /// The topology whose minimal neighbourhood of point `i` is `nbhd[i]`.
    /// `nbhd` must describe a preorder: `i ∈ nbhd[i]` and `j ∈ nbhd[i] ⇒ nbhd[j] ⊆ nbhd[i]`.
    pub fn from_min_neighbourhoods(ground: GroundSet, nbhd: &[Subset]) -> Self {
        let opens = (0..=ground.full())
            .filter(|&u| bits::members(u).all(|i| bits::is_subset(nbhd[i], u)))
            .collect();
        Self { ground, opens }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_open(&self, s: Subset) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: Subset) -> bool {
        self.is_open(self.ground.full() & !s)
    }

    /// Smallest open set containing point `i`.
    pub fn min_neighbourhood(&self, i: usize) -> Subset {
        let mut n = self.ground.full();
        for &u in &self.opens {
            if bits::contains(u, i) {
                n &= u;
            }
        }
        n
    }

    pub fn min_neighbourhoods(&self) -> Vec<Subset> {
        (0..self.ground.len())
            .map(|i| self.min_neighbourhood(i))
            .collect()
    }

    pub fn closure(&self, s: Subset) -> Subset {
        let outside = self
            .opens
            .iter()
            .filter(|&&u| u & s == 0)
            .fold(0, |acc, &u| acc | u);
        self.ground.full() & !outside
    }

    pub fn interior(&self, s: Subset) -> Subset {
        self.opens
            .iter()
            .filter(|&&u| bits::is_subset(u, s))
            .fold(0, |acc, &u| acc | u)
    }

    /// `self ⊆ other` as open-set families on the same ground set.
    pub fn is_coarser_than(&self, other: &FinTopology) -> bool {
        self.opens.iter().all(|&u| other.is_open(u))
    }

    /// Ordered pairs `(x, y)`, `x ≠ y`, with `y` in every open set containing `x`.
    pub fn t1_failures(&self) -> Vec<(usize, usize)> {
        let nb = self.min_neighbourhoods();
        let n = self.ground.len();
        let mut out = Vec::new();
        for (x, &m) in nb.iter().enumerate() {
            for y in 0..n {
                if x != y && bits::contains(m, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn show(&self) -> String {
        let parts: Vec<String> = self.opens.iter().map(|&u| self.ground.show(u)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Smallest topology containing `subbasis`: close under finite intersections, then unions.
pub fn generate_topology(ground: &GroundSet, subbasis: &[Subset]) -> Result<FinTopology> {
    let full = ground.full();
    if let Some(s) = subbasis.iter().find(|&&s| !bits::is_subset(s, full)) {
        return Err(Error::Input(format!(
            "subbasis member {s:#b} leaves the ground set"
        )));
    }
    let mut basis: BTreeSet<Subset> = subbasis.iter().copied().collect();
    basis.insert(full);
    close_under(&mut basis, |a, b| a & b);
    basis.insert(0);
    close_under(&mut basis, |a, b| a | b);
    Ok(FinTopology::from_sorted_unchecked(
        ground.clone(),
        basis.into_iter().collect(),
    ))
}

fn close_under(set: &mut BTreeSet<Subset>, op: impl Fn(Subset, Subset) -> Subset) {
    let mut frontier: Vec<Subset> = set.iter().copied().collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        let current: Vec<Subset> = set.iter().copied().collect();
        for &a in &frontier {
            for &b in &current {
                let c = op(a, b);
                if set.insert(c) {
                    fresh.push(c);
                }
            }
        }
        frontier = fresh;
    }
}

/// Subspace topology `{U ∩ S}` on the points of `s`, reindexed to `0..|s|`.
pub fn subspace(tau: &FinTopology, s: Subset) -> Result<FinTopology> {
    if !bits::is_subset(s, tau.ground.full()) {
        return Err(Error::Input(
            "subspace is not contained in the ground set".into(),
        ));
    }
    if s == 0 {
        return Err(Error::Input("subspace must be nonempty".into()));
    }
    let ground = tau.ground.restrict(s)?;
    let opens: BTreeSet<Subset> = tau
        .opens
        .iter()
        .map(|&u| bits::compress(u & s, s))
        .collect();
    Ok(FinTopology::from_sorted_unchecked(
        ground,
        opens.into_iter().collect(),
    ))
}

/// `(dense in τ, dense in τ*)`: whether the closure of `d` is the whole set in each topology.
pub fn density_check(tau: &FinTopology, tau_star: &FinTopology, d: Subset) -> Result<(bool, bool)> {
    if !tau.is_coarser_than(tau_star) {
        return Err(Error::Precondition("density_check needs τ ⊆ τ*".into()));
    }
    let full = tau.ground.full();
    Ok((tau.closure(d) == full, tau_star.closure(d) == full))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(names: &[&str]) -> GroundSet {
        GroundSet::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn sierpinski_generation() {
        let x = g(&["p", "q"]);
        let t = generate_topology(&x, &[0b01]).unwrap();
        assert_eq!(t.opens(), &[0b00, 0b01, 0b11]);
        let t = generate_topology(&x, &[]).unwrap();
        assert_eq!(t.opens(), &[0b00, 0b11]);
    }

    #[test]
    fn overlapping_pair_generation() {
        let x = g(&["p", "q", "r"]);
        let t = generate_topology(&x, &[0b011, 0b110]).unwrap();
        assert_eq!(t.opens(), &[0b000, 0b010, 0b011, 0b110, 0b111]);
    }

    #[test]
    fn rejects_non_topology() {
        let x = g(&["p", "q", "r"]);
        assert!(FinTopology::from_opens(x, [0, 0b011, 0b110, 0b111]).is_err());
    }

    #[test]
    fn subspace_examples() {
        let x = g(&["p", "q", "r"]);
        let t = FinTopology::from_opens(x.clone(), [0, 0b001, 0b011, 0b111]).unwrap();
        let s = subspace(&t, 0b110).unwrap();
        assert_eq!(s.ground().labels(), &["q".to_string(), "r".to_string()]);
        assert_eq!(s.opens(), &[0b00, 0b01, 0b11]);
        let sier = FinTopology::from_opens(g(&["p", "q"]), [0, 0b01, 0b11]).unwrap();
        assert_eq!(subspace(&sier, 0b01).unwrap().opens(), &[0, 1]);
        let disc = FinTopology::discrete(x);
        let s = subspace(&disc, 0b101).unwrap();
        assert_eq!(s, FinTopology::discrete(s.ground().clone()));
    }

    #[test]
    fn closure_and_density() {
        let sier = FinTopology::from_opens(g(&["p", "q"]), [0, 0b01, 0b11]).unwrap();
        let disc = FinTopology::discrete(sier.ground().clone());
        assert_eq!(density_check(&sier, &disc, 0b01).unwrap(), (true, false));
        assert_eq!(density_check(&sier, &disc, 0b11).unwrap(), (true, true));
        assert!(density_check(&disc, &sier, 0b01).is_err());
    }

    #[test]
    fn capacity_limit() {
        assert!(matches!(GroundSet::anonymous(25), Err(Error::Capacity(_))));
        assert!(GroundSet::anonymous(24).is_ok());
    }
}
