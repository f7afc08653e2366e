//! Finitely presented chronological sets: core points, `ℕ`-indexed families, and a
//! chronology `≪` given by guarded index predicates.
//!
//! Everything about futures is computed on the reversed order, so each past-side
//! routine serves both directions.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Subset};
use crate::error::{Error, Result};
use crate::predicate::{parse, Expr, Norm1, Norm2, Var};
use crate::symbolic::{Kind, ParamSet, Point, Shape, SymbolicSet, MEMBER, PARAM};

/// Search window for human-readable witnesses of a nonempty index predicate.
const WITNESS_WINDOW: u64 = 64;

// ---------------------------------------------------------------------------
// JSON schema

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub core: Vec<String>,
    #[serde(default)]
    pub families: Vec<FamilyJson>,
    #[serde(default)]
    pub rel: RelJson,
    #[serde(default)]
    pub tips: Vec<SetJson>,
    #[serde(default)]
    pub tifs: Vec<SetJson>,
    #[serde(default)]
    pub sequences: Vec<SequenceJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelJson {
    /// `[a, b]` means `a ≪ b`.
    #[serde(default)]
    pub core: Vec<(String, String)>,
    #[serde(default)]
    pub core_family: Vec<CoreFamilyJson>,
    #[serde(default)]
    pub family_family: Vec<FamilyFamilyJson>,
}

/// `lhs ≪ fam(n)` or `fam(n) ≪ rhs` for every `n` satisfying `pred`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoreFamilyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    pub fam: String,
    pub pred: String,
}

/// `f(m) ≪ g(n)` for every `(m, n)` satisfying `pred`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFamilyJson {
    pub f: String,
    pub g: String,
    pub pred: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetJson {
    pub name: String,
    #[serde(default)]
    pub core: Vec<String>,
    /// Family name to member predicate in `n`.
    #[serde(default)]
    pub fams: BTreeMap<String, String>,
}

/// A test sequence given by the completion nodes it visits infinitely often.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceJson {
    pub name: String,
    pub nodes: Vec<String>,
}

// ---------------------------------------------------------------------------
// Orders

fn transpose(t: &Norm2) -> Norm2 {
    Norm2::of(&Expr::Table2(1, 0, Arc::new(t.clone())), 0, 1).expect("transpose keeps the bound")
}

/// The chronology as tables. `cc[a]` holds the core points above `a`; `cf[a][f]`
/// the `n` with `a ≪ f(n)`; `fc[f][a]` the `n` with `f(n) ≪ a`; `ff[f][g]` the
/// `(m, n)` with `f(m) ≪ g(n)`.
#[derive(Debug, Clone)]
pub struct Order {
    shape: Shape,
    cc: Vec<Subset>,
    cf: Vec<Vec<Norm1>>,
    fc: Vec<Vec<Norm1>>,
    ff: Vec<Vec<Norm2>>,
}

impl Order {
    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// The same relation read backwards: `x ≪' y` iff `y ≪ x`.
    pub fn reversed(&self) -> Order {
        let Shape { core: nc, fams: nf } = self.shape;
        let cc = (0..nc)
            .map(|a| {
                (0..nc)
                    .filter(|&b| bits::contains(self.cc[b], a))
                    .fold(0, |s, b| s | bits::single(b))
            })
            .collect();
        let cf = (0..nc)
            .map(|a| (0..nf).map(|f| self.fc[f][a].clone()).collect())
            .collect();
        let fc = (0..nf)
            .map(|f| (0..nc).map(|a| self.cf[a][f].clone()).collect())
            .collect();
        let ff = (0..nf)
            .map(|f| (0..nf).map(|g| transpose(&self.ff[g][f])).collect())
            .collect();
        Order {
            shape: self.shape,
            cc,
            cf,
            fc,
            ff,
        }
    }

    /// `x ≪ y` with family indices of `x` at `vx` and of `y` at `vy`.
    pub fn lt(&self, x: Kind, vx: Var, y: Kind, vy: Var) -> Expr {
        match (x, y) {
            (Kind::Core(a), Kind::Core(b)) => Expr::Const(bits::contains(self.cc[a], b)),
            (Kind::Core(a), Kind::Fam(g)) => self.cf[a][g].to_expr(vy),
            (Kind::Fam(f), Kind::Core(b)) => self.fc[f][b].to_expr(vx),
            (Kind::Fam(f), Kind::Fam(g)) => Expr::Table2(vx, vy, Arc::new(self.ff[f][g].clone())),
        }
    }

    /// Whether `x ≪ y` holds for no members at all.
    fn never(&self, x: Kind, y: Kind) -> bool {
        match (x, y) {
            (Kind::Core(a), Kind::Core(b)) => !bits::contains(self.cc[a], b),
            (Kind::Core(a), Kind::Fam(g)) => self.cf[a][g].is_empty(),
            (Kind::Fam(f), Kind::Core(b)) => self.fc[f][b].is_empty(),
            (Kind::Fam(f), Kind::Fam(g)) => self.ff[f][g].is_empty(),
        }
    }

    pub fn holds(&self, x: Point, y: Point) -> bool {
        match (x, y) {
            (Point::Core(a), Point::Core(b)) => bits::contains(self.cc[a], b),
            (Point::Core(a), Point::Member(g, n)) => self.cf[a][g].eval(n),
            (Point::Member(f, m), Point::Core(b)) => self.fc[f][b].eval(m),
            (Point::Member(f, m), Point::Member(g, n)) => self.ff[f][g].eval(m, n),
        }
    }

    /// Strict past `I⁻(p)`.
    pub fn past_point(&self, p: Point) -> SymbolicSet {
        let Shape { core: nc, fams: nf } = self.shape;
        match p {
            Point::Core(a) => SymbolicSet {
                core: (0..nc)
                    .filter(|&b| bits::contains(self.cc[b], a))
                    .fold(0, |s, b| s | bits::single(b)),
                fams: (0..nf).map(|g| self.fc[g][a].clone()).collect(),
            },
            Point::Member(f, n) => SymbolicSet {
                core: (0..nc)
                    .filter(|&b| self.cf[b][f].eval(n))
                    .fold(0, |s, b| s | bits::single(b)),
                fams: (0..nf).map(|g| self.ff[g][f].slice_right(n)).collect(),
            },
        }
    }

    /// `n ↦ I⁻(f(n))`.
    pub fn past_family(&self, f: usize) -> ParamSet {
        let Shape { core: nc, fams: nf } = self.shape;
        ParamSet {
            core: (0..nc).map(|b| self.cf[b][f].clone()).collect(),
            fams: (0..nf).map(|g| transpose(&self.ff[g][f])).collect(),
        }
    }

    /// Past of a kind as a parametric set; constant for core points.
    pub fn past_kind(&self, k: Kind) -> ParamSet {
        match k {
            Kind::Core(a) => ParamSet::constant(&self.past_point(Point::Core(a)), self.shape.core),
            Kind::Fam(f) => self.past_family(f),
        }
    }

    /// `n ↦ I⁻(X(n))`, by existential elimination over member indices.
    pub fn past_of(&self, x: &ParamSet) -> Result<ParamSet> {
        ParamSet::build(self.shape, |k| {
            let mut parts = Vec::new();
            for y in self.shape.kinds() {
                if self.never(k, y) {
                    continue;
                }
                match y {
                    Kind::Core(_) => parts.push(Expr::and([
                        x.member_expr(y, PARAM, 2),
                        self.lt(k, MEMBER, y, 2),
                    ])),
                    Kind::Fam(_) => {
                        let body =
                            Expr::and([x.member_expr(y, PARAM, 2), self.lt(k, MEMBER, y, 2)]);
                        parts.push(Expr::exists(2, body)?);
                    }
                }
            }
            Ok(Expr::or(parts))
        })
    }

    /// `n ↦ {x : x ≪ y for every y ∈ X(n)}`.
    pub fn lower_bounds(&self, x: &ParamSet) -> Result<ParamSet> {
        ParamSet::build(self.shape, |k| {
            let mut parts = Vec::new();
            for y in self.shape.kinds() {
                let body = Expr::or([
                    Expr::not(x.member_expr(y, PARAM, 2)),
                    self.lt(k, MEMBER, y, 2),
                ]);
                parts.push(match y {
                    Kind::Core(_) => body,
                    Kind::Fam(_) => Expr::forall(2, body)?,
                });
            }
            Ok(Expr::and(parts))
        })
    }

    pub fn past_of_set(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        Ok(self
            .past_of(&ParamSet::constant(s, self.shape.core))?
            .slice(0))
    }

    /// `↓S = I⁻({x : x ≪ y for all y ∈ S})`.
    pub fn common_past_param(&self, x: &ParamSet) -> Result<ParamSet> {
        self.past_of(&self.lower_bounds(x)?)
    }

    pub fn common_past(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        Ok(self
            .common_past_param(&ParamSet::constant(s, self.shape.core))?
            .slice(0))
    }

    /// Every two members of `s` have a common strict future inside `s`.
    pub fn is_directed(&self, s: &SymbolicSet) -> Result<bool> {
        let present: Vec<Kind> = self
            .shape
            .kinds()
            .filter(|&k| match k {
                Kind::Core(a) => bits::contains(s.core, a),
                Kind::Fam(f) => !s.fams[f].is_empty(),
            })
            .collect();
        for &kx in &present {
            for &ky in &present {
                let mut ups = Vec::new();
                for &kz in &present {
                    if self.never(kx, kz) || self.never(ky, kz) {
                        continue;
                    }
                    let body = Expr::and([
                        s.member_expr(kz, 3),
                        self.lt(kx, 1, kz, 3),
                        self.lt(ky, 2, kz, 3),
                    ]);
                    ups.push(match kz {
                        Kind::Core(_) => body,
                        Kind::Fam(_) => Expr::exists(3, body)?,
                    });
                }
                let bad = Expr::and([
                    s.member_expr(kx, 1),
                    s.member_expr(ky, 2),
                    Expr::not(Expr::or(ups)),
                ]);
                if !Norm2::of(&bad, 1, 2)?.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IpVerdict {
    /// `P = I⁻(x)` for the named point.
    Proper(String),
    /// Not proper, and directed: every two members have a common future in `P`.
    Terminal,
    NotIp(String),
    Undecided(String),
}

impl IpVerdict {
    pub fn is_ip(&self) -> bool {
        matches!(self, IpVerdict::Proper(_) | IpVerdict::Terminal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SVerdict {
    Related,
    NotRelated(String),
    Undecided(String),
}

impl SVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SVerdict::Related)
    }
}

/// A designated terminal past or future set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Designated {
    pub name: String,
    pub set: SymbolicSet,
}

/// Findings of model validation. `errors` make the model invalid; `notes` are informational.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub errors: Vec<String>,
    pub notes: Vec<String>,
}

// ---------------------------------------------------------------------------
// Model

#[derive(Debug, Clone)]
pub struct ChronoModel {
    json: ModelJson,
    core_names: Vec<String>,
    fam_names: Vec<String>,
    fwd: Order,
    bwd: Order,
    tips: Vec<Designated>,
    tifs: Vec<Designated>,
}

/// One side of the chronology: pasts with TIPs, or futures (reversed order) with TIFs.
#[derive(Clone, Copy)]
pub struct Side<'a> {
    pub order: &'a Order,
    pub designated: &'a [Designated],
}

impl ChronoModel {
    /// Parses and validates; any validation error is returned as a precondition error.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: ModelJson = serde_json::from_str(text).map_err(|e| {
            Error::Input(format!(
                "model JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        Self::from_json(json)
    }

    pub fn from_json(json: ModelJson) -> Result<Self> {
        let m = Self::build(json)?;
        let report = m.validate()?;
        if !report.errors.is_empty() {
            return Err(Error::Precondition(format!(
                "invalid model: {}",
                report.errors.join("; ")
            )));
        }
        Ok(m)
    }

    /// Parses without the semantic checks of [`ChronoModel::validate`].
    pub fn build(json: ModelJson) -> Result<Self> {
        let core_names = json.core.clone();
        let fam_names: Vec<String> = json.families.iter().map(|f| f.name.clone()).collect();
        if core_names.len() > bits::MAX_POINTS {
            return Err(Error::Capacity(format!(
                "at most {} core points",
                bits::MAX_POINTS
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in core_names.iter().chain(&fam_names) {
            if n.is_empty() || n.contains(['(', ')', ',', '|']) {
                return Err(Error::Input(format!(
                    "name `{n}` must be nonempty and avoid ( ) , |"
                )));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::Input(format!("duplicate name `{n}`")));
            }
        }
        let shape = Shape {
            core: core_names.len(),
            fams: fam_names.len(),
        };
        let core_ix = |s: &str| {
            core_names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::Input(format!("unknown core point `{s}`")))
        };
        let fam_ix = |s: &str| {
            fam_names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::Input(format!("unknown family `{s}`")))
        };
        let (nc, nf) = (shape.core, shape.fams);
        let mut cc = vec![0 as Subset; nc];
        for (a, b) in &json.rel.core {
            cc[core_ix(a)?] |= bits::single(core_ix(b)?);
        }
        let mut cf = vec![vec![Norm1::constant(false); nf]; nc];
        let mut fc = vec![vec![Norm1::constant(false); nc]; nf];
        for e in &json.rel.core_family {
            let f = fam_ix(&e.fam)?;
            let pred = parse(&e.pred, &["n"])
                .map_err(|err| Error::Input(format!("core_family `{}`: {err}", e.pred)))?;
            let p = Norm1::of(&pred, 0)?;
            match (&e.lhs, &e.rhs) {
                (Some(a), None) => {
                    let a = core_ix(a)?;
                    cf[a][f] = cf[a][f].or(&p);
                }
                (None, Some(b)) => {
                    let b = core_ix(b)?;
                    fc[f][b] = fc[f][b].or(&p);
                }
                _ => {
                    return Err(Error::Input(
                        "core_family entries need exactly one of lhs, rhs".into(),
                    ))
                }
            }
        }
        let empty2 = Norm2::tabulate(1, 1, |_, _| false)?;
        let mut ff = vec![vec![empty2; nf]; nf];
        for e in &json.rel.family_family {
            let (f, g) = (fam_ix(&e.f)?, fam_ix(&e.g)?);
            let pred = parse(&e.pred, &["m", "n"])
                .map_err(|err| Error::Input(format!("family_family `{}`: {err}", e.pred)))?;
            let joined = Expr::or([ff[f][g].to_expr(0, 1), pred]);
            ff[f][g] = Norm2::of(&joined, 0, 1)?;
        }
        let fwd = Order {
            shape,
            cc,
            cf,
            fc,
            ff,
        };
        let bwd = fwd.reversed();
        let set = |s: &SetJson| -> Result<Designated> {
            let mut out = SymbolicSet::empty(shape);
            for c in &s.core {
                out.core |= bits::single(core_ix(c)?);
            }
            for (fname, pred) in &s.fams {
                let f = fam_ix(fname)?;
                let e = parse(pred, &["n"])
                    .map_err(|err| Error::Input(format!("set `{}`: {err}", s.name)))?;
                out.fams[f] = Norm1::of(&e, 0)?;
            }
            Ok(Designated {
                name: s.name.clone(),
                set: out,
            })
        };
        let tips = json.tips.iter().map(set).collect::<Result<Vec<_>>>()?;
        let tifs = json.tifs.iter().map(set).collect::<Result<Vec<_>>>()?;
        let mut names = std::collections::BTreeSet::new();
        for d in tips.iter().chain(&tifs) {
            if d.name.is_empty() || d.name.contains(['(', ')', ',', '|']) || d.name == "∅" {
                return Err(Error::Input(format!(
                    "designated set name `{}` is not allowed",
                    d.name
                )));
            }
            if !names.insert(d.name.clone()) {
                return Err(Error::Input(format!(
                    "duplicate designated set `{}`",
                    d.name
                )));
            }
        }
        Ok(Self {
            json,
            core_names,
            fam_names,
            fwd,
            bwd,
            tips,
            tifs,
        })
    }

    pub fn json(&self) -> &ModelJson {
        &self.json
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("model JSON serializes")
    }

    pub fn shape(&self) -> Shape {
        self.fwd.shape
    }

    pub fn core_names(&self) -> &[String] {
        &self.core_names
    }

    pub fn fam_names(&self) -> &[String] {
        &self.fam_names
    }

    pub fn tips(&self) -> &[Designated] {
        &self.tips
    }

    pub fn tifs(&self) -> &[Designated] {
        &self.tifs
    }

    pub fn past_side(&self) -> Side<'_> {
        Side {
            order: &self.fwd,
            designated: &self.tips,
        }
    }

    pub fn future_side(&self) -> Side<'_> {
        Side {
            order: &self.bwd,
            designated: &self.tifs,
        }
    }

    pub fn order(&self) -> &Order {
        &self.fwd
    }

    pub fn kind_name(&self, k: Kind) -> String {
        match k {
            Kind::Core(a) => self.core_names[a].clone(),
            Kind::Fam(f) => self.fam_names[f].clone(),
        }
    }

    pub fn point_name(&self, p: Point) -> String {
        match p {
            Point::Core(a) => self.core_names[a].clone(),
            Point::Member(f, n) => format!("{}({n})", self.fam_names[f]),
        }
    }

    pub fn show(&self, s: &SymbolicSet) -> String {
        s.show(&self.core_names, &self.fam_names)
    }

    pub fn universe(&self) -> SymbolicSet {
        SymbolicSet::universe(self.shape())
    }

    pub fn past(&self, p: Point) -> SymbolicSet {
        self.fwd.past_point(p)
    }

    pub fn future(&self, p: Point) -> SymbolicSet {
        self.bwd.past_point(p)
    }

    pub fn past_of_set(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        self.fwd.past_of_set(s)
    }

    pub fn future_of_set(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        self.bwd.past_of_set(s)
    }

    pub fn common_past(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        self.fwd.common_past(s)
    }

    pub fn common_future(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        self.bwd.common_past(s)
    }

    /// Indecomposable-past verdict for `p`.
    pub fn is_ip(&self, p: &SymbolicSet) -> Result<IpVerdict> {
        self.indecomposable(self.past_side(), p)
    }

    /// Indecomposable-future verdict for `f`.
    pub fn is_if(&self, f: &SymbolicSet) -> Result<IpVerdict> {
        self.indecomposable(self.future_side(), f)
    }

    fn indecomposable(&self, side: Side<'_>, p: &SymbolicSet) -> Result<IpVerdict> {
        let o = side.order;
        if p.is_empty() {
            return Ok(IpVerdict::NotIp(
                "the empty set is not indecomposable".into(),
            ));
        }
        for k in self.shape().kinds() {
            match k {
                Kind::Core(a) => {
                    if &o.past_point(Point::Core(a)) == p {
                        return Ok(IpVerdict::Proper(self.core_names[a].clone()));
                    }
                }
                Kind::Fam(f) => {
                    let hit = o.past_family(f).equal_to(p)?;
                    if let Some(n) = (0..WITNESS_WINDOW).find(|&n| hit.eval(n)) {
                        return Ok(IpVerdict::Proper(self.point_name(Point::Member(f, n))));
                    }
                }
            }
        }
        // Index families are discrete, so the past of a point need not equal its own
        // past; that case is settled above. Anything else must be a past set without
        // maximal elements.
        let inner = o.past_of_set(p)?;
        if !inner.is_subset(p) {
            return Ok(IpVerdict::NotIp(format!(
                "{} is not a past set",
                self.show(p)
            )));
        }
        if &inner != p {
            return Ok(IpVerdict::NotIp(format!(
                "{} has maximal elements but is not the past of a point",
                self.show(p)
            )));
        }
        if o.is_directed(p)? {
            return Ok(IpVerdict::Terminal);
        }
        // Two points whose pasts split `p` into proper past subsets.
        let pts: Vec<Point> = (0..self.shape().core).map(Point::Core).collect();
        for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i + 1..] {
                let (a, b) = (o.past_point(x), o.past_point(y));
                if a.union(&b) == *p && a.is_proper_subset(p) && b.is_proper_subset(p) {
                    return Ok(IpVerdict::NotIp(format!(
                        "union of the pasts of {} and {}",
                        self.point_name(x),
                        self.point_name(y)
                    )));
                }
            }
        }
        if p.fams.iter().all(Norm1::is_empty) {
            // Finite case: search all decompositions into proper past subsets.
            let pasts: Vec<Subset> = bits::nonempty_submasks(p.core)
                .filter(|&c| {
                    let s = SymbolicSet {
                        core: c,
                        fams: p.fams.clone(),
                    };
                    o.past_of_set(&s).map(|q| q.is_subset(&s)).unwrap_or(false)
                })
                .filter(|&c| c != p.core)
                .collect();
            for &a in &pasts {
                for &b in &pasts {
                    if a | b == p.core {
                        let names = |c| {
                            self.show(&SymbolicSet {
                                core: c,
                                fams: p.fams.clone(),
                            })
                        };
                        return Ok(IpVerdict::NotIp(format!(
                            "union of {} and {}",
                            names(a),
                            names(b)
                        )));
                    }
                }
            }
            return Ok(IpVerdict::Terminal);
        }
        Ok(IpVerdict::Undecided(format!(
            "no generating chain or decomposition found for {}",
            self.show(p)
        )))
    }

    /// IPs (or IFs) strictly containing `p` and contained in `bound`, from the
    /// designated family: proper ones of every point plus designated terminal ones.
    pub fn larger_ip_within(
        &self,
        side: Side<'_>,
        p: &SymbolicSet,
        bound: &SymbolicSet,
    ) -> Result<Option<String>> {
        let o = side.order;
        for k in self.shape().kinds() {
            match k {
                Kind::Core(a) => {
                    let c = o.past_point(Point::Core(a));
                    if p.is_proper_subset(&c) && c.is_subset(bound) {
                        return Ok(Some(self.core_names[a].clone()));
                    }
                }
                Kind::Fam(f) => {
                    let y = o.past_family(f);
                    let hit = y
                        .contains_set(p)?
                        .and(&y.within(bound)?)
                        .minus(&y.within(p)?);
                    if let Some(n) = (0..WITNESS_WINDOW).find(|&n| hit.eval(n)) {
                        return Ok(Some(self.point_name(Point::Member(f, n))));
                    }
                    if !hit.is_empty() {
                        return Ok(Some(format!("{}(n) for some n", self.fam_names[f])));
                    }
                }
            }
        }
        for d in side.designated {
            if p.is_proper_subset(&d.set) && d.set.is_subset(bound) {
                return Ok(Some(d.name.clone()));
            }
        }
        Ok(None)
    }

    /// One half of the S-relation: `p ⊆ ↓f` and `p` maximal among IPs inside `↓f`.
    fn half_related(
        &self,
        side: Side<'_>,
        p: &SymbolicSet,
        f: &SymbolicSet,
    ) -> Result<Option<String>> {
        let down = side.order.common_past(f)?;
        if !p.is_subset(&down) {
            return Ok(Some(format!(
                "{} is not inside the common past of {}",
                self.show(p),
                self.show(f)
            )));
        }
        if let Some(w) = self.larger_ip_within(side, p, &down)? {
            return Ok(Some(format!(
                "{} is not maximal: the one of {w} is larger",
                self.show(p)
            )));
        }
        Ok(None)
    }

    /// S-relation between an IP and an IF, either possibly empty.
    pub fn s_related(&self, p: Option<&SymbolicSet>, f: Option<&SymbolicSet>) -> Result<SVerdict> {
        match (p, f) {
            (None, None) => Ok(SVerdict::NotRelated(
                "∅ is never S-related to itself".into(),
            )),
            (Some(p), Some(f)) => {
                if let Some(why) = self.half_related(self.past_side(), p, f)? {
                    return Ok(SVerdict::NotRelated(why));
                }
                if let Some(why) = self.half_related(self.future_side(), f, p)? {
                    return Ok(SVerdict::NotRelated(why));
                }
                Ok(SVerdict::Related)
            }
            (Some(p), None) => self.related_to_empty(self.past_side(), self.future_side(), p),
            (None, Some(f)) => self.related_to_empty(self.future_side(), self.past_side(), f),
        }
    }

    /// `p ∼ ∅`: `p` is terminal and S-related to no designated terminal set of the
    /// other side. Proper sets of the other side pair only with their own point.
    fn related_to_empty(
        &self,
        mine: Side<'_>,
        other: Side<'_>,
        p: &SymbolicSet,
    ) -> Result<SVerdict> {
        let v = self.indecomposable(mine, p)?;
        match v {
            IpVerdict::Terminal => {}
            IpVerdict::Proper(x) => {
                return Ok(SVerdict::NotRelated(format!("proper, paired with {x}")))
            }
            IpVerdict::NotIp(w) => return Ok(SVerdict::NotRelated(w)),
            IpVerdict::Undecided(w) => return Ok(SVerdict::Undecided(w)),
        }
        for d in other.designated {
            if self.half_related(mine, p, &d.set)?.is_none()
                && self.half_related(other, &d.set, p)?.is_none()
            {
                return Ok(SVerdict::NotRelated(format!("S-related to {}", d.name)));
            }
        }
        Ok(SVerdict::Related)
    }

    /// Semantic checks. Errors: reflexive or intransitive `≪`, points with equal
    /// past and future, designated sets that are not terminal indecomposable sets,
    /// points whose past and future are not S-related. Notes: points sharing a
    /// past or sharing a future.
    pub fn validate(&self) -> Result<ModelReport> {
        let mut r = ModelReport::default();
        let o = &self.fwd;
        let kinds: Vec<Kind> = self.shape().kinds().collect();
        for &k in &kinds {
            let refl = match k {
                Kind::Core(a) => bits::contains(o.cc[a], a),
                Kind::Fam(f) => {
                    !Norm1::of(&Expr::Table2(0, 0, Arc::new(o.ff[f][f].clone())), 0)?.is_empty()
                }
            };
            if refl {
                r.errors
                    .push(format!("{} precedes itself", self.kind_name(k)));
            }
        }
        for &x in &kinds {
            for &y in &kinds {
                if o.never(x, y) {
                    continue;
                }
                for &z in &kinds {
                    if o.never(y, z) {
                        continue;
                    }
                    let chain = Expr::and([o.lt(x, 1, y, 2), o.lt(y, 2, z, 3)]);
                    let chain = match y {
                        Kind::Core(_) => chain,
                        Kind::Fam(_) => Expr::exists(2, chain)?,
                    };
                    let joined = Norm2::of(&chain, 1, 3)?;
                    let bad = Expr::and([joined.to_expr(1, 3), Expr::not(o.lt(x, 1, z, 3))]);
                    if !Norm2::of(&bad, 1, 3)?.is_empty() {
                        r.errors.push(format!(
                            "not transitive: {} ≪ {} ≪ {} without {} ≪ {}",
                            self.kind_name(x),
                            self.kind_name(y),
                            self.kind_name(z),
                            self.kind_name(x),
                            self.kind_name(z)
                        ));
                    }
                }
            }
        }
        if !r.errors.is_empty() {
            return Ok(r);
        }
        self.check_collisions(&mut r)?;
        for (side, label) in [(self.past_side(), "TIP"), (self.future_side(), "TIF")] {
            for d in side.designated {
                match self.indecomposable(side, &d.set)? {
                    IpVerdict::Terminal => {}
                    IpVerdict::Proper(x) => r
                        .errors
                        .push(format!("{label} {} is the proper set of {x}", d.name)),
                    IpVerdict::NotIp(w) => r
                        .errors
                        .push(format!("{label} {} is not indecomposable: {w}", d.name)),
                    IpVerdict::Undecided(w) => r
                        .errors
                        .push(format!("{label} {} is unverified: {w}", d.name)),
                }
            }
        }
        for &k in &kinds {
            let bad = self.point_pair_not_s_related(k)?;
            if let Some(n) = bad {
                r.errors
                    .push(format!("past and future of {} are not S-related", n));
            }
        }
        Ok(r)
    }

    /// Pairs of points with equal pasts, equal futures, or both.
    fn check_collisions(&self, r: &mut ModelReport) -> Result<()> {
        let kinds: Vec<Kind> = self.shape().kinds().collect();
        let pasts: Vec<ParamSet> = kinds.iter().map(|&k| self.fwd.past_kind(k)).collect();
        let futures: Vec<ParamSet> = kinds.iter().map(|&k| self.bwd.past_kind(k)).collect();
        let equal = |sets: &[ParamSet], i: usize, j: usize| -> Result<Norm2> {
            let a = ParamSet::subset_relation(&sets[i], &sets[j])?;
            let b = ParamSet::subset_relation(&sets[j], &sets[i])?;
            Norm2::of(&Expr::and([a.to_expr(0, 1), b.to_expr(1, 0)]), 0, 1)
        };
        for i in 0..kinds.len() {
            for j in i..kinds.len() {
                let same = i == j;
                if same && matches!(kinds[i], Kind::Core(_)) {
                    continue;
                }
                let distinct = if same {
                    Expr::not(Expr::and([Expr::DiffGe(0, 1, 0), Expr::DiffLe(0, 1, 0)]))
                } else {
                    Expr::tt()
                };
                let ep = equal(&pasts, i, j)?;
                let ef = equal(&futures, i, j)?;
                let witness = |rel: &Norm2| -> Option<String> {
                    let both =
                        Norm2::of(&Expr::and([rel.to_expr(0, 1), distinct.clone()]), 0, 1).ok()?;
                    if both.is_empty() {
                        return None;
                    }
                    let name = |k: Kind, n: u64| match k {
                        Kind::Core(a) => self.core_names[a].clone(),
                        Kind::Fam(f) => self.point_name(Point::Member(f, n)),
                    };
                    for s in 0..WITNESS_WINDOW {
                        for n in 0..=s {
                            if both.eval(n, s - n) {
                                return Some(format!(
                                    "{} and {}",
                                    name(kinds[i], n),
                                    name(kinds[j], s - n)
                                ));
                            }
                        }
                    }
                    Some(format!(
                        "{} and {}",
                        self.kind_name(kinds[i]),
                        self.kind_name(kinds[j])
                    ))
                };
                let both = Norm2::of(&Expr::and([ep.to_expr(0, 1), ef.to_expr(0, 1)]), 0, 1)?;
                if let Some(w) = witness(&both) {
                    r.errors
                        .push(format!("points {w} have the same past and future"));
                    continue;
                }
                if let Some(w) = witness(&ep) {
                    r.notes.push(format!("points {w} share a past"));
                }
                if let Some(w) = witness(&ef) {
                    r.notes.push(format!("points {w} share a future"));
                }
            }
        }
        Ok(())
    }

    /// First point of kind `k` whose past and future fail the S-relation, if any.
    fn point_pair_not_s_related(&self, k: Kind) -> Result<Option<String>> {
        let good_half = |side: Side<'_>, other: Side<'_>| -> Result<Norm1> {
            let p = side.order.past_kind(k);
            let f = other.order.past_kind(k);
            let down = side.order.common_past_param(&f)?;
            let mut good = ParamSet::subset_pointwise(&p, &down)?;
            // No proper set of a point, and no designated set, strictly between.
            for c in self.shape().kinds() {
                let y = side.order.past_kind(c);
                let up = ParamSet::subset_relation(&p, &y)?;
                let back = ParamSet::subset_relation(&y, &p)?;
                let inside = ParamSet::subset_relation(&y, &down)?;
                let between = Expr::and([
                    up.to_expr(0, 2),
                    Expr::not(back.to_expr(2, 0)),
                    inside.to_expr(2, 0),
                ]);
                let some = Norm1::of(&Expr::exists(2, between)?, 0)?;
                good = good.minus(&some);
            }
            for d in side.designated {
                let dp = ParamSet::constant(&d.set, self.shape().core);
                let up = ParamSet::subset_pointwise(&p, &dp)?;
                let back = ParamSet::subset_pointwise(&dp, &p)?;
                let inside = ParamSet::subset_pointwise(&dp, &down)?;
                good = good.minus(&up.minus(&back).and(&inside));
            }
            Ok(good)
        };
        let ok = good_half(self.past_side(), self.future_side())?
            .and(&good_half(self.future_side(), self.past_side())?);
        if ok.is_all() {
            return Ok(None);
        }
        let n = (0..WITNESS_WINDOW).find(|&n| !ok.eval(n)).unwrap_or(0);
        Ok(Some(match k {
            Kind::Core(a) => self.core_names[a].clone(),
            Kind::Fam(f) => self.point_name(Point::Member(f, n)),
        }))
    }

    /// DOT rendering of the core order (transitive reduction) with families as boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph chronology {\n  rankdir=BT;\n");
        for n in &self.core_names {
            out.push_str(&format!("  \"{n}\";\n"));
        }
        for n in &self.fam_names {
            out.push_str(&format!("  \"{n}(·)\" [shape=box];\n"));
        }
        let o = &self.fwd;
        for a in 0..self.shape().core {
            for b in bits::members(o.cc[a]) {
                let covered = bits::members(o.cc[a]).any(|c| bits::contains(o.cc[c], b));
                if !covered {
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\";\n",
                        self.core_names[a], self.core_names[b]
                    ));
                }
            }
        }
        for a in 0..self.shape().core {
            for f in 0..self.shape().fams {
                if !o.cf[a][f].is_empty() {
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}(·)\" [label=\"{}\"];\n",
                        self.core_names[a],
                        self.fam_names[f],
                        o.cf[a][f].show("n")
                    ));
                }
                if !o.fc[f][a].is_empty() {
                    out.push_str(&format!(
                        "  \"{}(·)\" -> \"{}\" [label=\"{}\"];\n",
                        self.fam_names[f],
                        self.core_names[a],
                        o.fc[f][a].show("n")
                    ));
                }
            }
        }
        for f in 0..self.shape().fams {
            for g in 0..self.shape().fams {
                if !o.ff[f][g].is_empty() {
                    out.push_str(&format!(
                        "  \"{}(·)\" -> \"{}(·)\" [style=dashed];\n",
                        self.fam_names[f], self.fam_names[g]
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::predicate::parse_norm1;

    /// Two chains around a removed point: `c` ascends below, `d` descends above.
    pub(crate) fn removed_point_json() -> ModelJson {
        serde_json::from_str(
            r#"{
              "core": [],
              "families": [{"name": "c"}, {"name": "d"}],
              "rel": {"family_family": [
                {"f": "c", "g": "c", "pred": "n-m>=1"},
                {"f": "d", "g": "d", "pred": "m-n>=1"},
                {"f": "c", "g": "d", "pred": "true"}
              ]},
              "tips": [{"name": "P", "fams": {"c": "true"}}],
              "tifs": [{"name": "F", "fams": {"d": "true"}}]
            }"#,
        )
        .unwrap()
    }

    fn fam_set(m: &ChronoModel, pairs: &[(&str, &str)]) -> SymbolicSet {
        let mut s = SymbolicSet::empty(m.shape());
        for (f, p) in pairs {
            let i = m.fam_names().iter().position(|n| n == f).unwrap();
            s.fams[i] = parse_norm1(p).unwrap();
        }
        s
    }

    #[test]
    fn removed_point_pasts() {
        let m = ChronoModel::from_json(removed_point_json()).unwrap();
        let p = m.past(Point::Member(1, 5));
        assert_eq!(p, fam_set(&m, &[("c", "true"), ("d", "n>5")]));
        let all_c = fam_set(&m, &[("c", "true")]);
        assert_eq!(m.past_of_set(&all_c).unwrap(), all_c);
        let all_d = fam_set(&m, &[("d", "true")]);
        assert_eq!(m.common_past(&all_d).unwrap(), all_c);
        assert_eq!(m.is_ip(&all_c).unwrap(), IpVerdict::Terminal);
        assert!(m.s_related(Some(&all_c), Some(&all_d)).unwrap().holds());
        assert_eq!(
            m.s_related(None, None).unwrap(),
            SVerdict::NotRelated("∅ is never S-related to itself".into())
        );
        assert!(!m.s_related(Some(&all_c), None).unwrap().holds());
    }

    #[test]
    fn proper_pasts_and_minimum() {
        let json: ModelJson = serde_json::from_str(
            r#"{"core": ["x", "y", "z"], "rel": {"core": [["x", "y"], ["x", "z"]]}}"#,
        )
        .unwrap();
        let m = ChronoModel::build(json).unwrap();
        assert!(m.past(Point::Core(0)).is_empty());
        let v = m.is_ip(&m.past(Point::Core(1))).unwrap();
        assert!(
            matches!(v, IpVerdict::Proper(ref x) if x == "y" || x == "z"),
            "{v:?}"
        );
        let dense = ChronoModel::from_json(removed_point_json()).unwrap();
        let v = dense.is_ip(&dense.past(Point::Member(1, 5))).unwrap();
        assert_eq!(v, IpVerdict::Proper(dense.point_name(Point::Member(1, 5))));
        let r = m.validate().unwrap();
        // y and z share their past {x} but differ in nothing else: both futures are empty.
        assert!(
            r.errors.iter().any(|e| e.contains("same past and future")),
            "{r:?}"
        );
    }

    #[test]
    fn union_of_incomparable_pasts_is_not_ip() {
        let json: ModelJson = serde_json::from_str(
            r#"{"core": ["a", "b", "x", "y"], "rel": {"core": [["a", "x"], ["b", "y"]]}}"#,
        )
        .unwrap();
        let m = ChronoModel::build(json).unwrap();
        let u = m.past(Point::Core(2)).union(&m.past(Point::Core(3)));
        assert!(matches!(m.is_ip(&u).unwrap(), IpVerdict::NotIp(_)));
    }

    #[test]
    fn future_ray_pairs_with_empty() {
        let json: ModelJson = serde_json::from_str(
            r#"{"core": [], "families": [{"name": "c"}],
               "rel": {"family_family": [{"f": "c", "g": "c", "pred": "n-m>=1"}]},
               "tips": [{"name": "P", "fams": {"c": "true"}}]}"#,
        )
        .unwrap();
        let m = ChronoModel::from_json(json).unwrap();
        let p = m.tips()[0].set.clone();
        assert!(m.s_related(Some(&p), None).unwrap().holds());
    }

    #[test]
    fn intransitive_model_is_rejected() {
        let json: ModelJson = serde_json::from_str(
            r#"{"core": ["a", "b", "c"], "rel": {"core": [["a", "b"], ["b", "c"]]}}"#,
        )
        .unwrap();
        let e = ChronoModel::from_json(json).unwrap_err();
        assert!(e.to_string().contains("not transitive"), "{e}");
    }

    #[test]
    fn json_errors_carry_positions() {
        let e = ChronoModel::from_json_str("{\"core\": [\"a\"], \"bogus\": 1}").unwrap_err();
        assert!(
            matches!(e, Error::Input(_)) && e.to_string().contains("line 1"),
            "{e}"
        );
    }
}
