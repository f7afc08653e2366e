//! Exhaustive and seeded-random sweeps shared by the `suite` command and the
//! acceptance harness. Each sweep returns counts and the first counterexamples.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{self, Subset};
use crate::enumerate::all_topologies;
use crate::error::Result;
use crate::limit_ops::{
    associated_operator, derived_topology, order_of, star_operator, OperatorOrder,
    TailLimitOperator,
};
use crate::separation::{separating_refinement, verify_minimality_among, DomainDesignation};
use crate::theorems::{all_antitone_tables, verify_section3, ClaimStatus};
use crate::topology::{density_check, subspace, FinTopology, GroundSet};

/// Counterexamples kept per sweep; the counts are always exact.
const KEEP: usize = 10;

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepOutcome {
    pub instances: usize,
    pub failures: usize,
    pub examples: Vec<String>,
}

impl SweepOutcome {
    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.examples.len() < KEEP {
            self.examples.push(what);
        }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

/// Results of one pass over every topology and valid designation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FiniteSweep {
    pub max_points: usize,
    pub topologies: usize,
    /// Refinement conditions, restriction and exhaustive minimality.
    pub refinement: SweepOutcome,
    /// Derived topology of the starred associated operator equals τ*, and the chain τ ⊆ τ* ⊆ τ_{L*}.
    pub derived: SweepOutcome,
    /// Associated operators are first order.
    pub associated_order: SweepOutcome,
    pub density: DensitySweep,
}

/// Density before and after refinement, split by which hypotheses hold.
#[derive(Debug, Clone, Default, Serialize)]
pub struct DensitySweep {
    pub outcome: SweepOutcome,
    /// Every point outside D is a limit of some profile inside D.
    pub witnessed: usize,
    /// Additionally, the witnessing profile has the same limits under the starred operator.
    pub witnessed_and_preserved: usize,
    pub dense_before: usize,
    pub dense_after: usize,
    /// Dense before refinement and not after.
    pub lost: usize,
}

fn label(tau: &FinTopology, d: Subset) -> String {
    format!("{} D={}", tau.show(), tau.ground().show(d))
}

/// Whether each point outside `d` is a limit of some profile inside `d`, and
/// whether it can be chosen with `star(A) = L(A)`.
fn density_hypotheses(
    lt: &TailLimitOperator,
    ls: &TailLimitOperator,
    d: Subset,
    full: Subset,
) -> (bool, bool) {
    let mut plain = true;
    let mut preserved = true;
    for x in bits::members(full & !d) {
        let mut found = false;
        let mut found_preserved = false;
        let mut a = d;
        while a != 0 {
            if lt.get(a) & bits::single(x) != 0 {
                found = true;
                if ls.get(a) == lt.get(a) {
                    found_preserved = true;
                }
            }
            a = (a - 1) & d;
        }
        plain &= found;
        preserved &= found_preserved;
    }
    (plain, preserved)
}

/// Sweeps every topology on `1..=max_points` labelled points with every valid designation.
pub fn finite_sweep(max_points: usize) -> Result<FiniteSweep> {
    let mut s = FiniteSweep {
        max_points,
        ..Default::default()
    };
    for n in 1..=max_points {
        let ground = GroundSet::anonymous(n)?;
        let full = ground.full();
        let all = all_topologies(&ground)?;
        s.topologies += all.len();
        for tau in &all {
            let lt = associated_operator(tau);
            s.associated_order.instances += 1;
            let ord = order_of(&lt)?;
            if ord != OperatorOrder::FirstOrder {
                s.associated_order.fail(format!("{}: {ord}", tau.show()));
            }
            for d in DomainDesignation::all_valid(tau) {
                let ds = d.set();
                let r = separating_refinement(tau, &d)?;

                s.refinement.instances += 1;
                let rep = verify_minimality_among(&r, tau, &d, &all)?;
                let restricted = ds == 0 || subspace(&r, ds)? == subspace(tau, ds)?;
                if !(rep.a_fin && rep.a_sep && rep.minimal && rep.unique_minimum && restricted) {
                    s.refinement.fail(format!(
                        "{}: {rep:?} restriction={restricted}",
                        label(tau, ds)
                    ));
                }

                s.derived.instances += 1;
                let ls = star_operator(&lt, &d)?;
                let tls = derived_topology(&ls)?;
                let chain = tau.is_coarser_than(&r) && r.is_coarser_than(&tls);
                if tls != r || !chain {
                    s.derived.fail(format!(
                        "{}: τ_L* = {} τ* = {}",
                        label(tau, ds),
                        tls.show(),
                        r.show()
                    ));
                }

                let dn = &mut s.density;
                dn.outcome.instances += 1;
                let (before, after) = density_check(tau, &r, ds)?;
                let (plain, preserved) = density_hypotheses(&lt, &ls, ds, full);
                dn.dense_before += before as usize;
                dn.dense_after += after as usize;
                dn.lost += (before && !after) as usize;
                dn.witnessed += plain as usize;
                dn.witnessed_and_preserved += preserved as usize;
                if (plain && !before) || (preserved && !after) {
                    dn.outcome
                        .fail(format!("{}: dense ({before}, {after})", label(tau, ds)));
                }
            }
        }
    }
    Ok(s)
}

/// Claim tallies over many operators: `(claim, status) → count`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct TheoremSweep {
    pub operators: usize,
    pub instances: usize,
    pub passes: usize,
    pub hypothesis_not_met: usize,
    pub outcome: SweepOutcome,
    pub tally: BTreeMap<String, [usize; 3]>,
}

impl TheoremSweep {
    fn run(&mut self, l: &TailLimitOperator, ds: &[DomainDesignation]) -> Result<()> {
        self.operators += 1;
        for d in ds {
            self.instances += 1;
            let r = verify_section3(l, d)?;
            for c in &r.claims {
                let slot = match c.status {
                    ClaimStatus::Pass => 0,
                    ClaimStatus::HypothesisNotMet => 1,
                    ClaimStatus::Fail => 2,
                };
                self.tally.entry(c.name.to_string()).or_default()[slot] += 1;
                match c.status {
                    ClaimStatus::Pass => self.passes += 1,
                    ClaimStatus::HypothesisNotMet => self.hypothesis_not_met += 1,
                    ClaimStatus::Fail => self.outcome.fail(format!(
                        "{} D={}: {} {}",
                        l.show(),
                        l.ground().show(d.set()),
                        c.name,
                        c.detail
                    )),
                }
            }
        }
        self.outcome.instances = self.instances;
        Ok(())
    }
}

/// Coherence is whatever the table satisfies, so the suite sees both kinds.
fn operator_of(g: &GroundSet, t: &[Subset]) -> Result<TailLimitOperator> {
    let l = TailLimitOperator::from_fn(g.clone(), false, |a| t[a as usize])?;
    let c = l.is_coherent();
    Ok(l.with_coherent(c))
}

/// Every antitone operator on at most `max_points` points with every valid designation.
pub fn exhaustive_theorem_sweep(max_points: usize) -> Result<TheoremSweep> {
    let mut s = TheoremSweep::default();
    for n in 1..=max_points {
        let g = GroundSet::anonymous(n)?;
        for t in all_antitone_tables(n) {
            let l = operator_of(&g, &t)?;
            let tau = derived_topology(&l.clone().with_coherent(false))?;
            s.run(&l, &DomainDesignation::all_valid(&tau))?;
        }
    }
    Ok(s)
}

/// A random antitone table: random values, then each profile keeps only what
/// all of its sub-profiles allow. Singletons lean towards containing themselves.
pub fn random_antitone_table(rng: &mut impl Rng, n: usize) -> Vec<Subset> {
    let full = bits::full(n);
    let mut t = vec![0 as Subset; full as usize + 1];
    for a in 1..=full {
        let density = if a.count_ones() == 1 { 0.55 } else { 0.75 };
        let mut v = 0;
        for x in 0..n {
            if rng.gen_bool(density) {
                v |= bits::single(x);
            }
        }
        if a.count_ones() == 1 && rng.gen_bool(0.8) {
            v |= a;
        }
        t[a as usize] = v;
    }
    // Profiles in increasing mask order see every proper sub-profile first.
    for a in 1..=full {
        for x in bits::members(a) {
            let b = a & !bits::single(x);
            if b != 0 {
                t[a as usize] &= t[b as usize];
            }
        }
    }
    t
}

/// `count` seeded random operators on 1 to `max_points` points, each with one random valid designation.
pub fn random_theorem_sweep(count: usize, max_points: usize, seed: u64) -> Result<TheoremSweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grounds: Vec<GroundSet> = (1..=max_points)
        .map(GroundSet::anonymous)
        .collect::<Result<_>>()?;
    let mut s = TheoremSweep::default();
    for _ in 0..count {
        let n = rng.gen_range(1..=max_points);
        let t = random_antitone_table(&mut rng, n);
        let l = operator_of(&grounds[n - 1], &t)?;
        let tau = derived_topology(&l.clone().with_coherent(false))?;
        let valid = DomainDesignation::all_valid(&tau);
        let d = valid[rng.gen_range(0..valid.len())];
        s.run(&l, &[d])?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit_ops::validate_operator;

    #[test]
    fn small_finite_sweep_is_clean() {
        let s = finite_sweep(3).unwrap();
        assert_eq!(s.topologies, 1 + 4 + 29);
        assert!(s.refinement.ok(), "{:?}", s.refinement.examples);
        assert!(s.derived.ok(), "{:?}", s.derived.examples);
        assert!(s.associated_order.ok());
        assert!(s.density.outcome.ok());
        assert!(
            s.density.lost > 0,
            "the two-point case already loses density"
        );
    }

    #[test]
    fn random_tables_are_antitone() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = GroundSet::anonymous(4).unwrap();
        for _ in 0..200 {
            let t = random_antitone_table(&mut rng, 4);
            let l = TailLimitOperator::from_fn(g.clone(), false, |a| t[a as usize]).unwrap();
            assert!(validate_operator(&l).antitone_violations.is_empty());
        }
    }
}
