//! Laws of the chronological limit operator and its starred form, checked on the
//! quotient completions of the causal fixtures.

use std::sync::OnceLock;

use proptest::prelude::*;
use seqtop::bits::{self, Subset};
use seqtop::chrono::ChronoModel;
use seqtop::completion::{build_completion, Completion};
use seqtop::fixtures::{self, FixtureDescriptor};
use seqtop::symbolic::Point;

/// The causal fixtures with distinct models (example-A4 reuses example-A2's).
const MODELS: [&str; 4] = ["removed-point", "example-A1", "example-A2", "example-A3"];

fn models() -> &'static Vec<(ChronoModel, Completion)> {
    static CELL: OnceLock<Vec<(ChronoModel, Completion)>> = OnceLock::new();
    CELL.get_or_init(|| {
        MODELS
            .iter()
            .map(|id| {
                let f = fixtures::describe(&FixtureDescriptor::new(id)).unwrap();
                let m = ChronoModel::from_json_str(&f.data.to_string()).unwrap();
                let c = build_completion(&m).unwrap();
                (m, c)
            })
            .collect()
    })
}

/// Every point's past and future are S-related to each other.
#[test]
fn point_pasts_and_futures_are_s_related() {
    for (m, _) in models() {
        let shape = m.shape();
        let points = (0..shape.core)
            .map(Point::Core)
            .chain((0..shape.fams).flat_map(|f| (0..6).map(move |n| Point::Member(f, n))));
        for p in points {
            let v = m.s_related(Some(&m.past(p)), Some(&m.future(p))).unwrap();
            assert!(v.holds(), "{}: {v:?}", m.point_name(p));
        }
    }
}

/// A constant sequence at a point converges to it.
#[test]
fn constant_sequences_converge_to_their_point() {
    for (_, c) in models() {
        for x in bits::members(c.points()) {
            assert!(
                bits::contains(c.chron_limit(bits::single(x)), x),
                "{}",
                c.ground().labels()[x]
            );
        }
    }
}

fn pick(which: usize, mask: u64) -> (&'static Completion, Subset) {
    let (_, c) = &models()[which % MODELS.len()];
    (c, mask as Subset & c.manifold())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Starred limits are all manifold or all boundary, and keep exactly the manifold limits.
    #[test]
    fn star_never_mixes(which in 0usize..4, mask in any::<u64>()) {
        let (c, a) = pick(which, mask);
        prop_assume!(a != 0);
        let m = c.manifold();
        let (l, s) = (c.chron_limit(a), c.chron_star(a));
        prop_assert!(s & m == 0 || s & !m == 0);
        prop_assert_eq!(s & !l, 0);
        prop_assert_eq!(s & m, l & m);
    }

    /// Boundary limits survive only when no sub-profile has a manifold limit.
    #[test]
    fn star_drops_boundary_after_manifold_subsequence(which in 0usize..4, mask in any::<u64>()) {
        let (c, a) = pick(which, mask);
        prop_assume!(a != 0);
        let m = c.manifold();
        let mut sub = a;
        let mut some_manifold = false;
        while sub != 0 {
            some_manifold |= c.chron_limit(sub) & m != 0;
            sub = (sub - 1) & a;
        }
        prop_assert_eq!(c.chron_star(a) & !m != 0, !some_manifold && c.chron_limit(a) & !m != 0);
    }

    /// Passing to a subsequence never loses a limit.
    #[test]
    fn limits_are_antitone(which in 0usize..4, mask in any::<u64>(), keep in any::<u64>()) {
        let (c, a) = pick(which, mask);
        let b = a & keep as Subset;
        prop_assume!(b != 0);
        prop_assert_eq!(c.chron_limit(a) & !c.chron_limit(b), 0);
        prop_assert_eq!(c.chron_star(a) & !c.chron_star(b), 0);
    }
}
