//! Deterministic fixtures with expected-verdict manifests.
//!
//! Causal fixtures are abstract family models: each named sequence, chain or
//! wanderer is a family, and the guarded relations reproduce the inclusion
//! skeleton the limit computations depend on. `generate` runs the engine on
//! every manifest claim and refuses to return a fixture whose claims fail.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chrono::{ChronoModel, ModelJson};
use crate::completion::{build_completion, Completion, Verdict};
use crate::error::{Error, Result};
use crate::limit_ops::{
    associated_operator, order_of, star_operator, OperatorOrder, TailLimitOperator,
};
use crate::separation::{
    separating_refinement, verify_minimality, DomainDesignation, DEFAULT_MAX_ENUM,
};
use crate::topology::{density_check, FinTopology, GroundSet, TopologyJson};

/// Bumped whenever a fixture or its manifest changes.
pub const MANIFEST_VERSION: u32 = 1;

pub const FIXTURE_IDS: [&str; 9] = [
    "sierpinski",
    "three-point-crust",
    "cascade-order2",
    "removed-point",
    "example-A1",
    "example-A2",
    "example-A3",
    "example-A4",
    "glw-placeholder",
];

/// Why the GLW example has no data.
pub const GLW_NOTE: &str =
    "The non-T1 pair formed by a spacetime point and a boundary point in this \
example is produced by geodesic and conformal machinery on a continuum metric. Family models carry \
only chronology, so the example is documented here and not generated.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureDescriptor {
    pub id: String,
    #[serde(default)]
    pub params: Vec<(String, String)>,
}

impl FixtureDescriptor {
    pub fn new(id: &str) -> Self {
        Self {
            id: id.to_string(),
            params: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: &str) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// One expected engine verdict. Each variant maps to exactly one engine call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "kebab-case")]
pub enum Claim {
    /// `refine` with designation `d`: the opens of τ*.
    RefinedOpens {
        d: Vec<String>,
        opens: Vec<Vec<String>>,
    },
    /// `verify_minimality` on τ* for designation `d`.
    RefinedMinimalUnique { d: Vec<String> },
    /// `density_check`: (dense in τ, dense in τ*).
    Density {
        d: Vec<String>,
        before: bool,
        after: bool,
    },
    /// `order_of` on the operator.
    Order { order: String },
    /// `star_operator` of the associated operator: profile to value.
    StarValue {
        d: Vec<String>,
        profile: Vec<String>,
        value: Vec<String>,
    },
    /// Completion node labels, in node order.
    Nodes { labels: Vec<String> },
    /// Number of boundary pairs in the completion.
    BoundaryCount { count: usize },
    /// `chron_limit(profile)` contains `includes` and avoids `excludes`.
    ChronLimit {
        profile: Vec<String>,
        includes: Vec<String>,
        excludes: Vec<String>,
    },
    /// `chron_limit(profile)` equals `value`.
    ChronLimitExact {
        profile: Vec<String>,
        value: Vec<String>,
    },
    /// `chron_star(profile)` equals `value`.
    ChronStarExact {
        profile: Vec<String>,
        value: Vec<String>,
    },
    /// The double-starred operator at `profile` equals `value`.
    DoubleStarExact {
        profile: Vec<String>,
        value: Vec<String>,
    },
    /// `node` lies in the `k`-th iterate at `profile` and not in the first.
    IterateGains {
        profile: Vec<String>,
        k: usize,
        node: String,
    },
    /// A named admissibility check has this verdict.
    Check { name: String, verdict: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub id: String,
    pub version: u32,
    pub kind: String,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    /// `topology`, `operator`, `chrono` or `placeholder`.
    pub kind: String,
    pub data: Value,
    pub manifest: Manifest,
    /// Human-readable remarks, including documented encoding deviations.
    pub notes: Vec<String>,
}

/// Claim-by-claim outcome of checking a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub claim: String,
    pub pass: bool,
    pub detail: String,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn ff(f: &str, g: &str, pred: &str) -> Value {
    json!({"f": f, "g": g, "pred": pred})
}

fn before(core: &str, fam: &str, pred: &str) -> Value {
    json!({"lhs": core, "fam": fam, "pred": pred})
}

fn after(fam: &str, core: &str, pred: &str) -> Value {
    json!({"rhs": core, "fam": fam, "pred": pred})
}

fn families(v: &[&str]) -> Value {
    Value::Array(v.iter().map(|f| json!({"name": f})).collect())
}

// ---------------------------------------------------------------------------
// Finite fixtures

fn sierpinski() -> Result<Fixture> {
    let tau = TopologyJson {
        points: names(&["p", "q"]),
        opens: vec![vec![], names(&["p"]), names(&["p", "q"])],
        d: Some(names(&["p"])),
    };
    let claims = vec![
        Claim::RefinedOpens {
            d: names(&["p"]),
            opens: vec![vec![], names(&["p"]), names(&["q"]), names(&["p", "q"])],
        },
        Claim::RefinedMinimalUnique { d: names(&["p"]) },
        Claim::Density {
            d: names(&["p"]),
            before: true,
            after: false,
        },
        Claim::StarValue {
            d: names(&["p"]),
            profile: names(&["p"]),
            value: names(&["p"]),
        },
        Claim::StarValue {
            d: names(&["p"]),
            profile: names(&["q"]),
            value: names(&["q"]),
        },
        Claim::StarValue {
            d: names(&["p"]),
            profile: names(&["p", "q"]),
            value: vec![],
        },
        Claim::Order {
            order: "FirstOrder".into(),
        },
    ];
    Ok(finite(
        "sierpinski",
        "topology",
        serde_json::to_value(tau).expect("serializes"),
        claims,
        vec![],
    ))
}

/// A point `p` with two boundary points `q` and `r`, each inseparable from
/// `p` but separable from each other. D = {p}.
fn three_point_crust() -> Result<Fixture> {
    let tau = TopologyJson {
        points: names(&["p", "q", "r"]),
        opens: vec![
            vec![],
            names(&["p"]),
            names(&["p", "q"]),
            names(&["p", "r"]),
            names(&["p", "q", "r"]),
        ],
        d: Some(names(&["p"])),
    };
    let claims = vec![
        Claim::RefinedOpens {
            d: names(&["p"]),
            opens: vec![
                vec![],
                names(&["p"]),
                names(&["q"]),
                names(&["r"]),
                names(&["p", "q"]),
                names(&["p", "r"]),
                names(&["q", "r"]),
                names(&["p", "q", "r"]),
            ],
        },
        Claim::RefinedMinimalUnique { d: names(&["p"]) },
        Claim::Density {
            d: names(&["p"]),
            before: true,
            after: false,
        },
        Claim::StarValue {
            d: names(&["p"]),
            profile: names(&["p"]),
            value: names(&["p"]),
        },
        Claim::StarValue {
            d: names(&["p"]),
            profile: names(&["q"]),
            value: names(&["q"]),
        },
        Claim::Order {
            order: "FirstOrder".into(),
        },
    ];
    Ok(finite(
        "three-point-crust",
        "topology",
        serde_json::to_value(tau).expect("serializes"),
        claims,
        vec![],
    ))
}

fn cascade_order2() -> Result<Fixture> {
    let data = json!({
        "points": ["a", "b", "c"],
        "table": {"a": ["a", "b"], "b": ["b", "c"], "c": ["b", "c"]},
        "coherent": true,
        "autofill": "antitone-max"
    });
    let claims = vec![Claim::Order {
        order: "KthOrder(2)".into(),
    }];
    let notes = vec![
        "profiles with two or more points take the intersection of their singleton values".into(),
    ];
    Ok(finite("cascade-order2", "operator", data, claims, notes))
}

/// X = {a, b}: both constant profiles reach every point, so τ_L is indiscrete,
/// but the mixed profile's entry is emptied and no iteration restores it.
pub fn pruned_operator() -> TailLimitOperator {
    let g = GroundSet::new(["a", "b"]).expect("two labels");
    TailLimitOperator::from_fn(g, true, |a| if a == 0b11 { 0 } else { 0b11 })
        .expect("same ground set")
}

fn finite(id: &str, kind: &str, data: Value, claims: Vec<Claim>, notes: Vec<String>) -> Fixture {
    Fixture {
        id: id.into(),
        kind: kind.into(),
        data,
        manifest: Manifest {
            id: id.into(),
            version: MANIFEST_VERSION,
            kind: kind.into(),
            claims,
        },
        notes,
    }
}

// ---------------------------------------------------------------------------
// Causal fixtures

fn removed_point() -> Value {
    json!({
        "core": [],
        "families": families(&["c", "d"]),
        "rel": {"family_family": [
            ff("c", "c", "n-m>=1"),
            ff("d", "d", "m-n>=1"),
            ff("c", "d", "true"),
        ]},
        "tips": [{"name": "P", "fams": {"c": "true"}}],
        "tifs": [{"name": "F", "fams": {"d": "true"}}],
        "sequences": [{"name": "toward-gap", "nodes": ["d"]}]
    })
}

/// `pn` approaches `p` while its pasts and futures also fill the TIP of `a` and
/// the TIF of `b`. `s` and `t` are antichains spanning the past and future of
/// `p`, so no single `pn(n)` contains them; `s0(k)` and `t0(k)` give each
/// `s(k)` and `t(k)` a private past and future. `w(n)` and `z(n)` pin the rest
/// of `I⁻(pn(n))` and `I⁺(pn(n))` so that every point passes the maximality test.
fn example_a1() -> Value {
    json!({
        "core": ["p"],
        "families": families(&["a", "b", "pn", "s", "s0", "t", "t0", "w", "z"]),
        "rel": {
            "core_family": [
                before("p", "t", "true"),
                before("p", "t0", "true"),
                after("s", "p", "true"),
                after("s0", "p", "true"),
            ],
            "family_family": [
                ff("a", "a", "n-m>=1"),
                ff("b", "b", "m-n>=1"),
                ff("a", "b", "true"),
                ff("s0", "s", "m==n"),
                ff("t", "t0", "m==n"),
                ff("a", "t", "true"),
                ff("a", "t0", "true"),
                ff("s", "t", "true"),
                ff("s", "t0", "true"),
                ff("s0", "t", "true"),
                ff("s0", "t0", "true"),
                ff("s", "b", "true"),
                ff("s0", "b", "true"),
                ff("s", "pn", "n-m>=0"),
                ff("s0", "pn", "n-m>=0"),
                ff("s", "z", "n-m>=0"),
                ff("s0", "z", "n-m>=0"),
                ff("a", "w", "n-m>=0"),
                ff("a", "pn", "n-m>=0"),
                ff("a", "z", "n-m>=0"),
                ff("w", "pn", "m==n"),
                ff("w", "z", "m==n"),
                ff("w", "b", "m-n>=0"),
                ff("w", "t", "m-n>=0"),
                ff("w", "t0", "m-n>=0"),
                ff("pn", "z", "m==n"),
                ff("pn", "b", "m-n>=0"),
                ff("pn", "t", "m-n>=0"),
                ff("pn", "t0", "m-n>=0"),
                ff("z", "b", "m-n>=0"),
            ]
        },
        "tips": [{"name": "P", "fams": {"a": "true"}}],
        "tifs": [{"name": "F", "fams": {"b": "true"}}],
        "sequences": [{"name": "pn", "nodes": ["pn"]}]
    })
}

/// As in the first example, but the pasts of `pn` only fill `a2`, whose TIP
/// `P'` sits strictly inside the TIP `P` generated by `a`. The chain `c` keeps
/// the pasts of `a` out of reach of later `a2` points. `P'` has no future
/// partner and becomes the boundary point `(P',∅)`.
fn example_a2() -> Value {
    json!({
        "core": ["p"],
        "families": families(&["a2", "c", "a", "b", "pn", "s", "s0", "t", "t0", "w", "z"]),
        "rel": {
            "core_family": [
                before("p", "t", "true"),
                before("p", "t0", "true"),
                after("s", "p", "true"),
                after("s0", "p", "true"),
            ],
            "family_family": [
                ff("a2", "a2", "n-m>=1"),
                ff("a", "a", "n-m>=1"),
                ff("b", "b", "m-n>=1"),
                ff("c", "c", "n-m>=1"),
                ff("a2", "a", "n-m>=0"),
                ff("c", "a", "n-m>=0"),
                ff("c", "b", "true"),
                ff("a", "b", "true"),
                ff("a2", "b", "true"),
                ff("s0", "s", "m==n"),
                ff("t", "t0", "m==n"),
                ff("a2", "t", "true"),
                ff("a2", "t0", "true"),
                ff("s", "t", "true"),
                ff("s", "t0", "true"),
                ff("s0", "t", "true"),
                ff("s0", "t0", "true"),
                ff("s", "pn", "n-m>=0"),
                ff("s0", "pn", "n-m>=0"),
                ff("s", "z", "n-m>=0"),
                ff("s0", "z", "n-m>=0"),
                ff("a2", "w", "n-m>=0"),
                ff("a2", "pn", "n-m>=0"),
                ff("a2", "z", "n-m>=0"),
                ff("w", "pn", "m==n"),
                ff("w", "z", "m==n"),
                ff("w", "t", "m-n>=0"),
                ff("w", "t0", "m-n>=0"),
                ff("pn", "z", "m==n"),
                ff("pn", "t", "m-n>=0"),
                ff("pn", "t0", "m-n>=0"),
                ff("z", "t", "m-n>=0"),
                ff("z", "t0", "m-n>=0"),
            ]
        },
        "tips": [{"name": "P", "fams": {"a2": "true", "c": "true", "a": "true"}}, {"name": "P'", "fams": {"a2": "true"}}],
        "tifs": [{"name": "F", "fams": {"b": "true"}}],
        "sequences": [{"name": "pn", "nodes": ["pn"]}]
    })
}

/// Second-order growth. The sequence `x` has the manifold family `y` and the
/// pair `(Pinf,F)` as limits; `y` in turn has `(P'inf,∅)` as its only limit,
/// which `x` reaches only after one more iteration.
fn example_a3(k: usize) -> Result<Value> {
    if k != 2 {
        return Err(Error::Input(format!(
            "example-A3 is encoded for k=2 only, got k={k}"
        )));
    }
    let mut rel = vec![
        ff("ai", "ai", "n-m>=1"),
        ff("ap", "ap", "n-m>=1"),
        ff("b", "b", "m-n>=1"),
        ff("ap", "ai", "n-m>=0"),
        ff("ap", "e", "n-m>=0"),
        ff("ap", "y", "true"),
        ff("e", "y", "m==n"),
        ff("t", "t0", "m==n"),
        ff("ai", "w", "n-m>=0"),
        ff("ap", "w", "n-m>=0"),
        ff("e", "w", "n-m>=0"),
        ff("ai", "x", "n-m>=0"),
        ff("ap", "x", "n-m>=0"),
        ff("e", "x", "n-m>=0"),
        ff("ai", "z", "n-m>=0"),
        ff("ap", "z", "n-m>=0"),
        ff("e", "z", "n-m>=0"),
        ff("w", "x", "m==n"),
        ff("w", "z", "m==n"),
        ff("x", "z", "m==n"),
    ];
    // Everything below the antichain `t` sits below its private futures `t0`.
    for g in ["t", "t0"] {
        for f in ["y", "ai", "ap", "e"] {
            rel.push(ff(f, g, "true"));
        }
        for f in ["w", "x", "z"] {
            rel.push(ff(f, g, "m-n>=0"));
        }
    }
    for f in ["ai", "ap", "e"] {
        rel.push(ff(f, "b", "true"));
    }
    for f in ["w", "x", "z"] {
        rel.push(ff(f, "b", "m-n>=0"));
    }
    Ok(json!({
        "core": [],
        "families": families(&["ai", "ap", "e", "y", "x", "w", "z", "b", "t", "t0"]),
        "rel": {"family_family": rel},
        "tips": [{"name": "Pinf", "fams": {"ai": "true", "ap": "true"}}, {"name": "P'inf", "fams": {"ap": "true"}}],
        "tifs": [{"name": "F", "fams": {"b": "true"}}],
        "sequences": [{"name": "x", "nodes": ["x"]}, {"name": "y", "nodes": ["y"]}]
    }))
}

fn causal(id: &str, model: Value, claims: Vec<Claim>, notes: Vec<String>) -> Fixture {
    finite(id, "chrono", model, claims, notes)
}

fn check(name: &str, verdict: &str) -> Claim {
    Claim::Check {
        name: name.into(),
        verdict: verdict.into(),
    }
}

/// Builds the fixture data and manifest without running the engine.
pub fn describe(desc: &FixtureDescriptor) -> Result<Fixture> {
    for (k, _) in &desc.params {
        if !(desc.id == "example-A3" && k == "k") {
            return Err(Error::Input(format!(
                "fixture `{}` takes no parameter `{k}`",
                desc.id
            )));
        }
    }
    match desc.id.as_str() {
        "sierpinski" => sierpinski(),
        "three-point-crust" => three_point_crust(),
        "cascade-order2" => cascade_order2(),
        "removed-point" => Ok(causal(
            "removed-point",
            removed_point(),
            vec![
                Claim::Nodes {
                    labels: names(&["c", "d", "(P,F)"]),
                },
                Claim::BoundaryCount { count: 1 },
                Claim::ChronLimitExact {
                    profile: names(&["d"]),
                    value: names(&["(P,F)"]),
                },
                check("a1-chr", "pass"),
                check("a2-chr", "pass"),
                check("a-sep-chr", "pass"),
                check("refinement-identity", "pass"),
                check("limits-inside-chr-chr", "pass"),
                check("endpoint", "pass"),
                check("boundary-closed", "pass"),
                check("dense-chr", "pass"),
                check("t1-chr", "pass"),
                check("embedding", "pass"),
            ],
            vec![],
        )),
        "example-A1" => Ok(causal(
            "example-A1",
            example_a1(),
            vec![
                Claim::BoundaryCount { count: 1 },
                Claim::ChronLimit {
                    profile: names(&["pn"]),
                    includes: names(&["p", "(P,F)"]),
                    excludes: vec![],
                },
                Claim::ChronLimitExact {
                    profile: names(&["pn"]),
                    value: names(&["p", "(P,F)"]),
                },
                Claim::ChronStarExact {
                    profile: names(&["pn"]),
                    value: names(&["p"]),
                },
                check("a-sep-chr", "fail"),
                check("a-sep-star", "pass"),
            ],
            vec![],
        )),
        "example-A2" => Ok(causal(
            "example-A2",
            example_a2(),
            vec![
                Claim::BoundaryCount { count: 2 },
                Claim::ChronLimit {
                    profile: names(&["pn"]),
                    includes: names(&["p", "(P',∅)"]),
                    excludes: names(&["(P,F)"]),
                },
                Claim::ChronLimitExact {
                    profile: names(&["pn"]),
                    value: names(&["p", "(P',∅)"]),
                },
                Claim::ChronStarExact {
                    profile: names(&["pn"]),
                    value: names(&["p"]),
                },
            ],
            vec![],
        )),
        "example-A3" => {
            let k = match desc.param("k") {
                None => 2,
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::Input(format!("k must be a number, got `{v}`")))?,
            };
            Ok(causal(
                "example-A3",
                example_a3(k)?,
                vec![
                    Claim::ChronLimit {
                        profile: names(&["x"]),
                        includes: names(&["y", "(Pinf,F)"]),
                        excludes: names(&["(P'inf,∅)"]),
                    },
                    Claim::ChronLimitExact { profile: names(&["y"]), value: names(&["(P'inf,∅)"]) },
                    Claim::IterateGains { profile: names(&["x"]), k: 2, node: "(P'inf,∅)".into() },
                ],
                vec![
                    "The boundary pairs approached by the sequence are replaced by one manifold family `y` \
                     whose members share the limit (P'inf,∅); only the two-step growth is encoded."
                        .into(),
                ],
            ))
        }
        "example-A4" => Ok(causal(
            "example-A4",
            example_a2(),
            vec![
                Claim::ChronLimit {
                    profile: names(&["pn"]),
                    includes: names(&["p"]),
                    excludes: vec![],
                },
                Claim::DoubleStarExact {
                    profile: names(&["pn"]),
                    value: names(&["(P',∅)"]),
                },
                check("double-star-keeps-point-limits", "fail"),
            ],
            vec![
                "Same model as example-A2; the claims concern the double-starred operator.".into(),
            ],
        )),
        "glw-placeholder" => Ok(Fixture {
            id: desc.id.clone(),
            kind: "placeholder".into(),
            data: json!({"note": GLW_NOTE}),
            manifest: Manifest {
                id: desc.id.clone(),
                version: MANIFEST_VERSION,
                kind: "placeholder".into(),
                claims: vec![],
            },
            notes: vec![GLW_NOTE.into()],
        }),
        other => Err(Error::Input(format!(
            "unknown fixture `{other}`; known: {}",
            FIXTURE_IDS.join(", ")
        ))),
    }
}

/// Builds a fixture and checks every manifest claim against the engine.
pub fn generate(desc: &FixtureDescriptor) -> Result<Fixture> {
    let fx = describe(desc)?;
    let outcomes = check_manifest(&fx.data, &fx.manifest)?;
    let bad: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| format!("{}: {}", o.claim, o.detail))
        .collect();
    if !bad.is_empty() {
        return Err(Error::Invariant(format!(
            "fixture `{}` manifest mismatch:\n  {}",
            fx.id,
            bad.join("\n  ")
        )));
    }
    Ok(fx)
}

fn labels_of(g: &GroundSet, s: crate::bits::Subset) -> Vec<String> {
    g.names(s)
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

/// Evaluates each claim of `manifest` against `data`.
pub fn check_manifest(data: &Value, manifest: &Manifest) -> Result<Vec<ClaimOutcome>> {
    let mut out = Vec::new();
    match manifest.kind.as_str() {
        "placeholder" => {}
        "topology" => {
            let tau = TopologyJson::from_value(data.clone())?.build()?;
            let g = tau.ground().clone();
            for c in &manifest.claims {
                out.push(topology_claim(&tau, &g, c)?);
            }
        }
        "operator" => {
            let l = TailLimitOperator::from_json(&data.to_string())?;
            for c in &manifest.claims {
                out.push(operator_claim(&l, c)?);
            }
        }
        "chrono" => {
            let mj: ModelJson =
                serde_json::from_value(data.clone()).map_err(|e| Error::Input(e.to_string()))?;
            let model = ChronoModel::from_json(mj)?;
            let comp = build_completion(&model)?;
            let needs_report = manifest
                .claims
                .iter()
                .any(|c| matches!(c, Claim::Check { .. }));
            let report = if needs_report {
                Some(comp.admissibility_report(DEFAULT_MAX_ENUM)?)
            } else {
                None
            };
            for c in &manifest.claims {
                out.push(chrono_claim(&comp, report.as_ref(), c)?);
            }
        }
        other => return Err(Error::Input(format!("unknown fixture kind `{other}`"))),
    }
    Ok(out)
}

fn outcome(claim: &Claim, pass: bool, detail: String) -> ClaimOutcome {
    ClaimOutcome {
        claim: serde_json::to_string(claim).expect("claim serializes"),
        pass,
        detail,
    }
}

fn designation(tau: &FinTopology, d: &[String]) -> Result<DomainDesignation> {
    DomainDesignation::new(tau, tau.ground().subset(d)?)
}

fn topology_claim(tau: &FinTopology, g: &GroundSet, c: &Claim) -> Result<ClaimOutcome> {
    Ok(match c {
        Claim::RefinedOpens { d, opens } => {
            let r = separating_refinement(tau, &designation(tau, d)?)?;
            let got: Vec<Vec<String>> =
                r.opens().iter().map(|&u| sorted(labels_of(g, u))).collect();
            let mut want: Vec<Vec<String>> = opens.iter().map(|u| sorted(u.clone())).collect();
            let mut got_sorted = got.clone();
            got_sorted.sort();
            want.sort();
            outcome(c, got_sorted == want, format!("got {}", r.show()))
        }
        Claim::RefinedMinimalUnique { d } => {
            let dd = designation(tau, d)?;
            let r = separating_refinement(tau, &dd)?;
            let rep = verify_minimality(&r, tau, &dd, DEFAULT_MAX_ENUM)?;
            outcome(c, rep.minimal && rep.unique_minimum, format!("{rep:?}"))
        }
        Claim::Density { d, before, after } => {
            let dd = designation(tau, d)?;
            let r = separating_refinement(tau, &dd)?;
            let got = density_check(tau, &r, dd.set())?;
            outcome(c, got == (*before, *after), format!("got {got:?}"))
        }
        Claim::StarValue { d, profile, value } => {
            let s = star_operator(&associated_operator(tau), &designation(tau, d)?)?;
            let got = s.get(g.subset(profile)?);
            outcome(c, got == g.subset(value)?, format!("got {}", g.show(got)))
        }
        Claim::Order { .. } => operator_claim(&associated_operator(tau), c)?,
        _ => {
            return Err(Error::Input(format!(
                "claim not applicable to a topology fixture: {c:?}"
            )))
        }
    })
}

fn operator_claim(l: &TailLimitOperator, c: &Claim) -> Result<ClaimOutcome> {
    Ok(match c {
        Claim::Order { order } => {
            let got: OperatorOrder = order_of(l)?;
            outcome(c, &got.to_string() == order, format!("got {got}"))
        }
        _ => {
            return Err(Error::Input(format!(
                "claim not applicable to an operator fixture: {c:?}"
            )))
        }
    })
}

fn chrono_claim(
    comp: &Completion,
    report: Option<&crate::completion::AdmissibilityReport>,
    c: &Claim,
) -> Result<ClaimOutcome> {
    let g = comp.ground();
    let set = |v: &[String]| if v.is_empty() { Ok(0) } else { comp.profile(v) };
    Ok(match c {
        Claim::Nodes { labels } => {
            let got = g.labels().to_vec();
            outcome(c, &got == labels, format!("got {got:?}"))
        }
        Claim::BoundaryCount { count } => {
            let got = comp.boundary().count_ones() as usize;
            outcome(
                c,
                got == *count,
                format!("got {got}: {}", comp.show(comp.boundary())),
            )
        }
        Claim::ChronLimit {
            profile,
            includes,
            excludes,
        } => {
            let got = comp.chron_limit(set(profile)?);
            let pass = crate::bits::is_subset(set(includes)?, got) && got & set(excludes)? == 0;
            outcome(c, pass, format!("got {}", comp.show(got)))
        }
        Claim::ChronLimitExact { profile, value } => {
            let got = comp.chron_limit(set(profile)?);
            outcome(c, got == set(value)?, format!("got {}", comp.show(got)))
        }
        Claim::ChronStarExact { profile, value } => {
            let got = comp.chron_star(set(profile)?);
            outcome(c, got == set(value)?, format!("got {}", comp.show(got)))
        }
        Claim::DoubleStarExact { profile, value } => {
            let got = comp.double_star_operator().get(set(profile)?);
            outcome(c, got == set(value)?, format!("got {}", comp.show(got)))
        }
        Claim::IterateGains { profile, k, node } => {
            let chain = comp.chron_iterate(*k);
            let a = set(profile)?;
            let x = set(std::slice::from_ref(node))?;
            let first = chain[0].get(a);
            let kth = chain.get(k - 1).map(|l| l.get(a)).unwrap_or(0);
            let pass = *k >= 2 && first & x == 0 && kth & x == x;
            outcome(
                c,
                pass,
                format!("L^1 = {}, L^{k} = {}", comp.show(first), comp.show(kth)),
            )
        }
        Claim::Check { name, verdict } => {
            let rep = report.ok_or_else(|| Error::Invariant("report not computed".into()))?;
            let got = rep.verdict(name);
            let want = match verdict.as_str() {
                "pass" => Verdict::Pass,
                "fail" => Verdict::Fail,
                "n/a" => Verdict::NotApplicable,
                "info" => Verdict::Info,
                other => return Err(Error::Input(format!("unknown verdict `{other}`"))),
            };
            outcome(c, got == Some(want), format!("got {got:?}"))
        }
        _ => {
            return Err(Error::Input(format!(
                "claim not applicable to a causal fixture: {c:?}"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_matches_its_manifest() {
        for id in FIXTURE_IDS {
            if let Err(e) = generate(&FixtureDescriptor::new(id)) {
                panic!("{id}: {e}");
            }
        }
    }

    #[test]
    fn unknown_ids_and_params_are_rejected() {
        assert!(matches!(
            describe(&FixtureDescriptor::new("nope")),
            Err(Error::Input(_))
        ));
        let bad = FixtureDescriptor::new("sierpinski").with_param("k", "2");
        assert!(matches!(describe(&bad), Err(Error::Input(_))));
        let k3 = FixtureDescriptor::new("example-A3").with_param("k", "3");
        assert!(matches!(describe(&k3), Err(Error::Input(_))));
    }

    #[test]
    fn regeneration_is_byte_identical() {
        for id in ["cascade-order2", "example-A2"] {
            let a = serde_json::to_string(&describe(&FixtureDescriptor::new(id)).unwrap()).unwrap();
            let b = serde_json::to_string(&describe(&FixtureDescriptor::new(id)).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn a_failing_claim_is_reported() {
        let mut fx = describe(&FixtureDescriptor::new("cascade-order2")).unwrap();
        fx.manifest.claims = vec![Claim::Order {
            order: "FirstOrder".into(),
        }];
        let out = check_manifest(&fx.data, &fx.manifest).unwrap();
        assert!(!out[0].pass);
        assert_eq!(out[0].detail, "got KthOrder(2)");
    }
}
