//! Domain designations, cross separation and the minimally separating refinement.

use serde::Serialize;

use crate::bits::{self, Subset};
use crate::enumerate::all_topologies;
use crate::error::{Error, Result};
use crate::topology::{generate_topology, subspace, FinTopology};

/// Default enumeration cap for exhaustive topology oracles.
pub const DEFAULT_MAX_ENUM: usize = 5;

/// A subset `D` validated against a topology: open, with discrete relative topology.
/// Local compactness holds for every finite space and is not checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DomainDesignation {
    d: Subset,
}

impl DomainDesignation {
    pub fn new(tau: &FinTopology, d: Subset) -> Result<Self> {
        let x = tau.ground();
        if !bits::is_subset(d, x.full()) {
            return Err(Error::Input("D is not contained in the ground set".into()));
        }
        if !tau.is_open(d) {
            return Err(Error::Precondition(format!(
                "D = {} is not open",
                x.show(d)
            )));
        }
        for p in bits::members(d) {
            let trapped = tau.min_neighbourhood(p) & d & !bits::single(p);
            if let Some(q) = bits::members(trapped).next() {
                return Err(Error::Precondition(format!(
                    "D is not Hausdorff: every neighbourhood of {} contains {}",
                    x.labels()[p],
                    x.labels()[q]
                )));
            }
        }
        Ok(Self { d })
    }

    pub fn set(&self) -> Subset {
        self.d
    }

    pub fn is_valid_for(tau: &FinTopology, d: Subset) -> bool {
        Self::new(tau, d).is_ok()
    }

    /// Every valid designation for `tau`, in increasing mask order.
    pub fn all_valid(tau: &FinTopology) -> Vec<DomainDesignation> {
        tau.opens()
            .iter()
            .filter_map(|&u| Self::new(tau, u).ok())
            .collect()
    }
}

/// Pairs `(p ∈ D, q ∉ D)` with no disjoint `U ∈ τ ∋ p`, `V ∈ τ' ∋ q`.
pub fn cross_t2_failures(
    tau: &FinTopology,
    tau_prime: &FinTopology,
    d: Subset,
) -> Vec<(usize, usize)> {
    let full = tau.ground().full();
    let mut out = Vec::new();
    for p in bits::members(d) {
        let u = tau.min_neighbourhood(p);
        for q in bits::members(full & !d) {
            if u & tau_prime.min_neighbourhood(q) != 0 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Separation check on precomputed minimal neighbourhoods.
pub(crate) fn separates(nb_tau: &[Subset], nb_prime: &[Subset], d: Subset, full: Subset) -> bool {
    bits::members(d).all(|p| bits::members(full & !d).all(|q| nb_tau[p] & nb_prime[q] == 0))
}

/// The topology generated by `τ ∪ {X∖{p} : p ∈ D}` with no precondition on `D`.
pub fn separating_refinement_unchecked(tau: &FinTopology, d: Subset) -> Result<FinTopology> {
    let full = tau.ground().full();
    let mut sub: Vec<Subset> = tau.opens().to_vec();
    sub.extend(bits::members(d).map(|p| full & !bits::single(p)));
    generate_topology(tau.ground(), &sub)
}

/// Complements of all subsets of `D` alongside `τ`; equal to the singleton form.
fn refinement_from_all_complements(tau: &FinTopology, d: Subset) -> Result<FinTopology> {
    let full = tau.ground().full();
    let mut sub: Vec<Subset> = tau.opens().to_vec();
    sub.extend(bits::nonempty_submasks(d).map(|k| full & !k));
    generate_topology(tau.ground(), &sub)
}

/// `τ*`: the minimally `D`-separating topology, with its defining guarantees checked.
pub fn separating_refinement(tau: &FinTopology, d: &DomainDesignation) -> Result<FinTopology> {
    DomainDesignation::new(tau, d.set())?;
    let star = separating_refinement_unchecked(tau, d.set())?;
    if d.set().count_ones() <= 12 {
        let wide = refinement_from_all_complements(tau, d.set())?;
        if wide != star {
            return Err(Error::Invariant(
                "singleton and full complement subbases disagree".into(),
            ));
        }
    }
    if !tau.is_coarser_than(&star) {
        return Err(Error::Invariant("τ ⊄ τ*".into()));
    }
    if !cross_t2_failures(tau, &star, d.set()).is_empty() {
        return Err(Error::Invariant(
            "τ* does not separate D from its complement".into(),
        ));
    }
    if d.set() != 0 && subspace(tau, d.set())? != subspace(&star, d.set())? {
        return Err(Error::Invariant("τ* and τ differ on D".into()));
    }
    Ok(star)
}

/// Verdicts of the minimality oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    /// Pairs `(x, y)` of `τ*` with `y` in every open set containing `x`.
    pub t1_failures: Vec<(usize, usize)>,
    /// Pairs `(p ∈ D, q ∉ D)` that `(τ, τ*)` fails to separate.
    pub cross_t2_failures: Vec<(usize, usize)>,
    pub a_fin: bool,
    pub a_sep: bool,
    /// No topology strictly between `τ` and `τ*` satisfies both conditions.
    pub minimal: bool,
    /// Every topology satisfying both conditions contains `τ*`.
    pub unique_minimum: bool,
    /// Number of topologies that satisfy both conditions.
    pub admissible_count: usize,
}

/// Exhaustive minimality and uniqueness oracle over all topologies on the ground set.
pub fn verify_minimality(
    tau_star: &FinTopology,
    tau: &FinTopology,
    d: &DomainDesignation,
    max_enum: usize,
) -> Result<SeparationReport> {
    let n = tau.ground().len();
    if n > max_enum {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration supports at most {max_enum} points, got {n}"
        )));
    }
    let all = all_topologies(tau.ground())?;
    verify_minimality_among(tau_star, tau, d, &all)
}

/// Minimality oracle against a caller-supplied candidate list.
pub fn verify_minimality_among(
    tau_star: &FinTopology,
    tau: &FinTopology,
    d: &DomainDesignation,
    candidates: &[FinTopology],
) -> Result<SeparationReport> {
    if tau.ground() != tau_star.ground() {
        return Err(Error::Input(
            "τ and τ* live on different ground sets".into(),
        ));
    }
    let full = tau.ground().full();
    let nb_tau = tau.min_neighbourhoods();
    let cross = cross_t2_failures(tau, tau_star, d.set());
    let a_fin = tau.is_coarser_than(tau_star);
    let a_sep = cross.is_empty();
    let mut minimal = true;
    let mut unique = true;
    let mut count = 0;
    for cand in candidates {
        if !tau.is_coarser_than(cand) {
            continue;
        }
        if !separates(&nb_tau, &cand.min_neighbourhoods(), d.set(), full) {
            continue;
        }
        count += 1;
        if cand != tau_star && cand.is_coarser_than(tau_star) {
            minimal = false;
        }
        if !tau_star.is_coarser_than(cand) {
            unique = false;
        }
    }
    Ok(SeparationReport {
        t1_failures: tau_star.t1_failures(),
        cross_t2_failures: cross,
        a_fin,
        a_sep,
        minimal: minimal && a_fin && a_sep,
        unique_minimum: unique && a_fin && a_sep,
        admissible_count: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::GroundSet;

    fn sier() -> FinTopology {
        FinTopology::from_opens(GroundSet::new(["p", "q"]).unwrap(), [0, 0b01, 0b11]).unwrap()
    }

    #[test]
    fn sierpinski_refines_to_discrete() {
        let t = sier();
        let d = DomainDesignation::new(&t, 0b01).unwrap();
        let s = separating_refinement(&t, &d).unwrap();
        assert_eq!(s, FinTopology::discrete(t.ground().clone()));
        let r = verify_minimality(&s, &t, &d, DEFAULT_MAX_ENUM).unwrap();
        assert!(r.a_fin && r.a_sep && r.minimal && r.unique_minimum);
    }

    #[test]
    fn three_point_crust() {
        let x = GroundSet::new(["p", "q", "r"]).unwrap();
        let t = FinTopology::from_opens(x, [0, 0b001, 0b011, 0b111]).unwrap();
        let d = DomainDesignation::new(&t, 0b001).unwrap();
        let s = separating_refinement(&t, &d).unwrap();
        assert_eq!(s.opens(), &[0b000, 0b001, 0b010, 0b011, 0b110, 0b111]);
        let r = verify_minimality(&s, &t, &d, DEFAULT_MAX_ENUM).unwrap();
        assert!(r.minimal && r.unique_minimum);
        // q and r stay inseparable; both lie outside D.
        assert!(r.t1_failures.contains(&(2, 1)));
    }

    #[test]
    fn empty_domain_is_identity() {
        let t = sier();
        let d = DomainDesignation::new(&t, 0).unwrap();
        let s = separating_refinement(&t, &d).unwrap();
        assert_eq!(s, t);
        let r = verify_minimality(&s, &t, &d, DEFAULT_MAX_ENUM).unwrap();
        assert!(r.minimal && r.unique_minimum);
    }

    #[test]
    fn designation_errors_name_the_pair() {
        let x = GroundSet::new(["p", "q", "r"]).unwrap();
        let t = FinTopology::from_opens(x, [0, 0b011, 0b111]).unwrap();
        let e = DomainDesignation::new(&t, 0b011).unwrap_err();
        assert!(e.to_string().contains("p") && e.to_string().contains("q"));
        assert!(DomainDesignation::new(&t, 0b001).is_err());
    }

    #[test]
    fn discrete_vs_indiscrete_on_three_points() {
        let x = GroundSet::new(["p", "q", "r"]).unwrap();
        let ind = FinTopology::indiscrete(x.clone());
        // {p} is not open in the indiscrete topology, so D = {p} is rejected there.
        assert!(DomainDesignation::new(&ind, 0b001).is_err());
        let base = FinTopology::from_opens(x.clone(), [0, 0b001, 0b111]).unwrap();
        let d = DomainDesignation::new(&base, 0b001).unwrap();
        let disc = FinTopology::discrete(x);
        let r = verify_minimality(&disc, &base, &d, DEFAULT_MAX_ENUM).unwrap();
        assert!(r.a_fin && r.a_sep);
        assert!(!r.minimal);
        let s = separating_refinement(&base, &d).unwrap();
        assert_eq!(s.opens(), &[0b000, 0b001, 0b110, 0b111]);
    }

    #[test]
    fn capacity_error_without_candidates() {
        let x = GroundSet::anonymous(6).unwrap();
        let t = FinTopology::indiscrete(x);
        let d = DomainDesignation::new(&t, 0).unwrap();
        assert!(matches!(
            verify_minimality(&t, &t, &d, 5),
            Err(Error::Capacity(_))
        ));
    }
}
