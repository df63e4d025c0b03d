//! The Serre-property pipeline for Leavitt path algebras `L_k(E)`, computed
//! entirely in the graph monoid: every finitely generated projective module
//! is free iff each vertex equals a positive multiple of `1_E` in `M_E`.
//!
//! The algebras themselves are never built. A positive Serre verdict on a
//! graph that is not a rose forces the purely infinite simple case with
//! `K₀ ≅ Z/nZ` and unit `1`; the label `L_{n+1}` attached to that case is
//! conjectural and reported as such.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::element::MonoidElement;
use crate::error::ClassifyError;
use crate::graph::{Graph, VertexIndex, VertexSet};
use crate::k0::{int_json, uint_json, K0Data, Multiples};
use crate::monoid::{
    certificate_json, reachable, stats_json, support_closure_witness, MonoidCertificate,
    MonoidEngine, Verdict, Witness,
};
use crate::search::{SearchBudget, SearchStats};

/// Most multipliers `k` tried per vertex.
pub const MAX_SERRE_CANDIDATES: usize = 64;
/// Largest `n` tried for `n·1_E = (n+t)·1_E` in the IBN check.
pub const IBN_BOUND: u32 = 16;
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexSerre {
    /// `v = k·1_E`, with the rewrite certificate.
    Free {
        k: BigUint,
        certificate: MonoidCertificate,
    },
    /// No `k ≥ 1` has `[v] = k[1_E]` in K₀.
    NoK0Solution,
    /// Every admissible `k` is refuted in `M_E`. Each entry is a tested `k`
    /// with its witness; `size_bound` is set when larger `k` were excluded
    /// because the rewrite closure of `v` is finite with that maximal size.
    MonoidRefuted {
        refutations: Vec<(BigUint, Witness)>,
        size_bound: Option<u64>,
    },
    Unknown {
        refutations: Vec<(BigUint, Witness)>,
        undecided: Vec<(BigUint, SearchStats)>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailReason {
    NoK0Solution,
    MonoidRefuted,
}

impl FailReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailReason::NoK0Solution => "no_k0_solution",
            FailReason::MonoidRefuted => "monoid_refuted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SerreVerdict {
    /// `k` per vertex, in vertex order.
    Holds {
        multipliers: Vec<BigUint>,
    },
    Fails {
        vertex: VertexIndex,
        reason: FailReason,
    },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreReport {
    pub verdict: SerreVerdict,
    /// Outcomes of the vertices examined, in vertex order. A failure stops
    /// the scan, so later vertices may be absent.
    pub vertices: Vec<(VertexIndex, VertexSerre)>,
    pub budget: SearchBudget,
}

impl SerreReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, SerreVerdict::Holds { .. })
    }

    pub fn verdict_str(&self) -> &'static str {
        match self.verdict {
            SerreVerdict::Holds { .. } => "holds",
            SerreVerdict::Fails { .. } => "fails",
            SerreVerdict::Unknown => "unknown",
        }
    }

    pub fn certificates(
        &self,
    ) -> impl Iterator<Item = (VertexIndex, &BigUint, &MonoidCertificate)> {
        self.vertices.iter().filter_map(|(v, o)| match o {
            VertexSerre::Free { k, certificate } => Some((*v, k, certificate)),
            _ => None,
        })
    }

    /// Report body without certificates; those go to the top-level list.
    pub fn to_json(&self, g: &Graph) -> Value {
        let mut out = Map::new();
        out.insert("verdict".into(), json!(self.verdict_str()));
        match &self.verdict {
            SerreVerdict::Holds { multipliers } => {
                let m: Map<String, Value> = multipliers
                    .iter()
                    .enumerate()
                    .map(|(v, k)| (g.name(v).to_string(), uint_json(k)))
                    .collect();
                out.insert("multipliers".into(), Value::Object(m));
            }
            SerreVerdict::Fails { vertex, reason } => {
                out.insert("vertex".into(), json!(g.name(*vertex)));
                out.insert("reason".into(), json!(reason.as_str()));
            }
            SerreVerdict::Unknown => {}
        }
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|(v, o)| {
                let mut entry = json!({"vertex": g.name(*v)});
                let body = entry.as_object_mut().expect("object");
                match o {
                    VertexSerre::Free { k, certificate } => {
                        body.insert("status".into(), json!("free"));
                        body.insert("k".into(), uint_json(k));
                        body.insert("steps".into(), json!(certificate.steps()));
                    }
                    VertexSerre::NoK0Solution => {
                        body.insert("status".into(), json!("no_k0_solution"));
                    }
                    VertexSerre::MonoidRefuted {
                        refutations,
                        size_bound,
                    } => {
                        body.insert("status".into(), json!("monoid_refuted"));
                        body.insert("refutations".into(), refutations_json(refutations));
                        if let Some(b) = size_bound {
                            body.insert("closure_size_bound".into(), json!(b));
                        }
                    }
                    VertexSerre::Unknown {
                        refutations,
                        undecided,
                    } => {
                        body.insert("status".into(), json!("unknown"));
                        body.insert("refutations".into(), refutations_json(refutations));
                        let u: Vec<Value> = undecided
                            .iter()
                            .map(|(k, s)| json!({"k": uint_json(k), "budget_spent": stats_json(s)}))
                            .collect();
                        body.insert("undecided".into(), Value::Array(u));
                    }
                }
                entry
            })
            .collect();
        out.insert("vertices".into(), Value::Array(vertices));
        out.insert(
            "budget".into(),
            serde_json::to_value(self.budget).expect("budget serializes"),
        );
        Value::Object(out)
    }
}

fn refutations_json(r: &[(BigUint, Witness)]) -> Value {
    Value::Array(
        r.iter()
            .map(|(k, w)| json!({"k": uint_json(k), "witness": w.to_json()}))
            .collect(),
    )
}

/// Witness kinds that refute `v = k·1_E` for every `k ≥ 1` at once.
fn refutes_every_k(w: &Witness) -> bool {
    matches!(
        w,
        Witness::ZeroVersusNonzero | Witness::SupportClosures { .. } | Witness::Irreducible { .. }
    )
}

/// Smallest `k ≥ 1` with `k ≡ rep (mod modulus)`, then every `modulus`
/// after it while `k ≤ upto`, at most `cap` values.
fn residue_candidates(
    rep: &BigInt,
    modulus: &BigInt,
    from: &BigInt,
    upto: &BigInt,
    cap: usize,
) -> Vec<BigUint> {
    let mut k = from + (rep - from).mod_floor(modulus);
    let mut out = Vec::new();
    while &k <= upto && out.len() < cap {
        out.push(k.to_biguint().expect("positive"));
        k += modulus;
    }
    out
}

fn check_vertex(engine: &MonoidEngine, v: VertexIndex, budget: &SearchBudget) -> VertexSerre {
    let g = engine.graph();
    let k0 = engine.k0();
    let n = g.vertex_count();
    let one = BigInt::one();
    let (candidates, residue) = match k0.solve_multiple(&k0.vertex_classes[v]) {
        Multiples::None => return VertexSerre::NoK0Solution,
        Multiples::Exactly(k) => match k.to_biguint() {
            Some(k) if !k.is_zero() => (vec![k], None),
            _ => return VertexSerre::NoK0Solution,
        },
        Multiples::Residue { rep, modulus } => {
            let t = k0
                .unit_order()
                .expect("a residue answer means the unit has finite order");
            let list = residue_candidates(&rep, &modulus, &one, &t, MAX_SERRE_CANDIDATES);
            (list, Some((rep, modulus, t)))
        }
    };

    let vertex = MonoidElement::vertex(v);
    if let Some(w) = support_closure_witness(g, std::iter::once(v), 0..n) {
        return VertexSerre::MonoidRefuted {
            refutations: vec![(candidates[0].clone(), w)],
            size_bound: None,
        };
    }

    let unit = MonoidElement::unit(g);
    let mut refutations = Vec::new();
    let mut undecided = Vec::new();
    type Undecided = Vec<(BigUint, SearchStats)>;
    let try_k =
        |k: BigUint, refutations: &mut Vec<(BigUint, Witness)>, undecided: &mut Undecided| {
            match engine.decide_equal(&vertex, &unit.scale(&k), budget) {
                Verdict::Equal(certificate) => Some(VertexSerre::Free { k, certificate }),
                Verdict::Unequal(w) if refutes_every_k(&w) => Some(VertexSerre::MonoidRefuted {
                    refutations: vec![(k, w)],
                    size_bound: None,
                }),
                Verdict::Unequal(w) => {
                    refutations.push((k, w));
                    None
                }
                Verdict::Unknown(stats) => {
                    undecided.push((k, stats));
                    None
                }
            }
        };
    for k in candidates.iter().cloned() {
        if let Some(done) = try_k(k, &mut refutations, &mut undecided) {
            return done;
        }
    }
    if !undecided.is_empty() {
        return VertexSerre::Unknown {
            refutations,
            undecided,
        };
    }
    let Some((rep, modulus, t)) = residue else {
        // the K₀ equation had a single solution and it is refuted
        return VertexSerre::MonoidRefuted {
            refutations,
            size_bound: None,
        };
    };

    // Candidates above the unit's order: rewriting never shrinks, so
    // k·1_E can only meet v inside v's closure when k·|E⁰| is at most the
    // largest element there.
    let closure = match reachable(g, &vertex, budget) {
        Ok(r) if !r.truncated => r,
        _ => {
            return VertexSerre::Unknown {
                refutations,
                undecided,
            }
        }
    };
    let max_size = closure
        .elements
        .iter()
        .map(|e| e.size().to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(1);
    let upto = BigInt::from(max_size / n as u64);
    let room = MAX_SERRE_CANDIDATES.saturating_sub(candidates.len());
    let more = residue_candidates(&rep, &modulus, &(t + 1), &upto, room + 1);
    if more.len() > room {
        return VertexSerre::Unknown {
            refutations,
            undecided,
        };
    }
    for k in more {
        if let Some(done) = try_k(k, &mut refutations, &mut undecided) {
            return done;
        }
    }
    if undecided.is_empty() {
        VertexSerre::MonoidRefuted {
            refutations,
            size_bound: Some(max_size),
        }
    } else {
        VertexSerre::Unknown {
            refutations,
            undecided,
        }
    }
}

/// Decides, vertex by vertex, whether `v = k·1_E` for some `k ≥ 1`.
pub fn serre_check(g: &Graph, budget: &SearchBudget) -> SerreReport {
    serre_check_with(&MonoidEngine::new(g), budget)
}

pub fn serre_check_with(engine: &MonoidEngine, budget: &SearchBudget) -> SerreReport {
    let g = engine.graph();
    let k0 = engine.k0();
    let report = |verdict, vertices| SerreReport {
        verdict,
        vertices,
        budget: *budget,
    };
    // the K₀ test is cheap, so run it everywhere before any search
    for v in 0..g.vertex_count() {
        let solvable = match k0.solve_multiple(&k0.vertex_classes[v]) {
            Multiples::None => false,
            Multiples::Exactly(k) => k.is_positive(),
            Multiples::Residue { .. } => true,
        };
        if !solvable {
            return report(
                SerreVerdict::Fails {
                    vertex: v,
                    reason: FailReason::NoK0Solution,
                },
                vec![(v, VertexSerre::NoK0Solution)],
            );
        }
    }
    let mut vertices = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let outcome = check_vertex(engine, v, budget);
        let failed = match outcome {
            VertexSerre::NoK0Solution => Some(FailReason::NoK0Solution),
            VertexSerre::MonoidRefuted { .. } => Some(FailReason::MonoidRefuted),
            _ => None,
        };
        vertices.push((v, outcome));
        if let Some(reason) = failed {
            return report(SerreVerdict::Fails { vertex: v, reason }, vertices);
        }
    }
    let multipliers: Option<Vec<BigUint>> = vertices
        .iter()
        .map(|(_, o)| match o {
            VertexSerre::Free { k, .. } => Some(k.clone()),
            _ => None,
        })
        .collect();
    match multipliers {
        Some(multipliers) => report(SerreVerdict::Holds { multipliers }, vertices),
        None => report(SerreVerdict::Unknown, vertices),
    }
}

trait Positive {
    fn is_positive(&self) -> bool;
}

impl Positive for BigInt {
    fn is_positive(&self) -> bool {
        self.sign() == num_bigint::Sign::Plus
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PisFailure {
    EmptyGraph,
    /// A hereditary saturated set other than `∅` and `E⁰`.
    NontrivialIdeal(VertexSet),
    /// A cycle without exit, as its vertices in order.
    ExitlessCycle(Vec<VertexIndex>),
    NoCycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PisReport {
    pub failures: Vec<PisFailure>,
}

impl PisReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let reasons: Vec<Value> = self
            .failures
            .iter()
            .map(|f| match f {
                PisFailure::EmptyGraph => json!({"kind": "empty_graph"}),
                PisFailure::NontrivialIdeal(h) => json!({
                    "kind": "nontrivial_hereditary_saturated",
                    "set": h.names(g),
                }),
                PisFailure::ExitlessCycle(c) => json!({
                    "kind": "cycle_without_exit",
                    "cycle": c.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                }),
                PisFailure::NoCycle => json!({"kind": "no_cycle"}),
            })
            .collect();
        json!({"holds": self.holds(), "failures": reasons})
    }
}

/// `L_k(E)` is purely infinite simple iff the only hereditary saturated
/// sets are `∅` and `E⁰ ≠ ∅`, every cycle has an exit, and some cycle
/// exists. Every failing condition is listed.
pub fn purely_infinite_simple_check(g: &Graph) -> PisReport {
    let n = g.vertex_count();
    if n == 0 {
        return PisReport {
            failures: vec![PisFailure::EmptyGraph],
        };
    }
    let mut failures = Vec::new();
    // the lattice is trivial iff every single vertex generates all of E⁰;
    // report the smallest proper generated set
    let proper = (0..n)
        .map(|v| g.hereditary_saturated_closure(&[v]))
        .filter(|h| h.len() < n)
        .min_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.members().cmp(b.members()))
        });
    if let Some(h) = proper {
        failures.push(PisFailure::NontrivialIdeal(h));
    }
    if let Some(c) = g.exitless_cycle() {
        failures.push(PisFailure::ExitlessCycle(c));
    }
    if !g.has_cycle() {
        failures.push(PisFailure::NoCycle);
    }
    PisReport { failures }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IbnReport {
    /// `[1_E]` has infinite order in K₀, so the `n·1_E` are pairwise distinct.
    Ibn,
    /// `n·1_E = m·1_E` with `n ≠ m`.
    NotIbn {
        n: u32,
        m: BigUint,
        certificate: MonoidCertificate,
    },
    /// No witness within `n ≤ bound`, and IBN is not proven.
    Unknown { bound: u32, unit_order: BigInt },
}

impl IbnReport {
    pub fn to_json(&self, g: &Graph) -> Value {
        match self {
            IbnReport::Ibn => json!({"verdict": "ibn", "reason": "unit_has_infinite_order"}),
            IbnReport::NotIbn { n, m, certificate } => json!({
                "verdict": "not_ibn",
                "n": n,
                "m": uint_json(m),
                "certificate": certificate_json(certificate, |e| e.display(g), |&v| g.name(v).to_string()),
            }),
            IbnReport::Unknown { bound, unit_order } => json!({
                "verdict": "unknown",
                "bound": bound,
                "unit_order": int_json(unit_order),
            }),
        }
    }
}

/// IBN: `n·1_E = m·1_E` forces `n = m`. When `[1_E]` has finite order `t`,
/// tries `n·1_E = (n+t)·1_E` for `n = 1..=bound`.
pub fn ibn_check(g: &Graph, budget: &SearchBudget) -> IbnReport {
    ibn_check_bounded(g, budget, IBN_BOUND)
}

pub fn ibn_check_bounded(g: &Graph, budget: &SearchBudget, bound: u32) -> IbnReport {
    let engine = MonoidEngine::new(g);
    let Some(t) = engine.k0().unit_order() else {
        return IbnReport::Ibn;
    };
    let t_u = t.to_biguint().expect("orders are positive");
    let unit = MonoidElement::unit(g);
    for n in 1..=bound {
        let a = unit.scale(&BigUint::from(n));
        let m = BigUint::from(n) + &t_u;
        if let Verdict::Equal(certificate) = engine.decide_equal(&a, &unit.scale(&m), budget) {
            return IbnReport::NotIbn { n, m, certificate };
        }
    }
    IbnReport::Unknown {
        bound,
        unit_order: t,
    }
}

/// Every finitely generated projective is stably free iff `[1_E]`
/// generates K₀.
pub fn stably_free_check(g: &Graph) -> bool {
    K0Data::of_graph(g).unit_generation().generates
}

/// Which family of names to print: Leavitt path algebras or graph C*-algebras.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Dialect {
    #[default]
    Lpa,
    Cstar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    NotSerre(SerreReport),
    /// `rose(0)`: the base field.
    SerreTrivialField,
    /// `rose(1)`: Laurent polynomials.
    SerreLaurent,
    /// `rose(n)`, `n ≥ 2`: the Leavitt algebra `L_n`.
    SerreRose(usize),
    /// Purely infinite simple with `K₀ ≅ Z/nZ` and unit `1`; conjecturally
    /// isomorphic to `L_{n+1}`.
    SerrePis {
        n: BigUint,
    },
    SerreUnknown(SerreReport),
}

impl Classification {
    pub fn kind(&self) -> &'static str {
        match self {
            Classification::NotSerre(_) => "not_serre",
            Classification::SerreTrivialField => "serre_trivial_field",
            Classification::SerreLaurent => "serre_laurent",
            Classification::SerreRose(_) => "serre_rose",
            Classification::SerrePis { .. } => "serre_pis",
            Classification::SerreUnknown(_) => "serre_unknown",
        }
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, Classification::SerreUnknown(_))
    }

    pub fn label(&self, dialect: Dialect) -> String {
        let cstar = dialect == Dialect::Cstar;
        match self {
            Classification::NotSerre(_) => "not every finitely generated projective is free".into(),
            Classification::SerreTrivialField => if cstar { "ℂ" } else { "k" }.into(),
            Classification::SerreLaurent => if cstar { "C(𝕋)" } else { "k[x, x⁻¹]" }.into(),
            Classification::SerreRose(n) => {
                if cstar {
                    format!("𝒪_{n}")
                } else {
                    format!("L_{n}")
                }
            }
            Classification::SerrePis { n } => {
                let m = n + 1u32;
                if cstar {
                    format!("conjecturally 𝒪_{m}")
                } else {
                    format!("conjecturally L_{m}")
                }
            }
            Classification::SerreUnknown(_) => "undetermined within budget".into(),
        }
    }

    pub fn to_json(&self, dialect: Dialect) -> Value {
        let mut out = json!({"kind": self.kind(), "label": self.label(dialect)});
        let body = out.as_object_mut().expect("object");
        match self {
            Classification::SerreRose(n) => {
                body.insert("n".into(), json!(n));
            }
            Classification::SerrePis { n } => {
                body.insert("n".into(), uint_json(n));
                body.insert("conjectural".into(), json!(true));
            }
            _ => {}
        }
        out
    }
}

/// Everything the pipeline computed, for reporting.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub classification: Classification,
    pub serre: SerreReport,
    pub pis: PisReport,
    pub k0: K0Data,
}

impl ClassificationReport {
    pub fn to_json(&self, g: &Graph, dialect: Dialect) -> Value {
        let certificates: Vec<Value> = self
            .serre
            .certificates()
            .map(|(v, k, c)| {
                json!({
                    "vertex": g.name(v),
                    "k": uint_json(k),
                    "certificate": certificate_json(c, |e| e.display(g), |&u| g.name(u).to_string()),
                })
            })
            .collect();
        json!({
            "schema": REPORT_SCHEMA,
            "dialect": match dialect { Dialect::Lpa => "lpa", Dialect::Cstar => "cstar" },
            "graph": serde_json::to_value(g.to_file()).expect("graph serializes"),
            "serre": self.serre.to_json(g),
            "pis": self.pis.to_json(g),
            "k0": self.k0.to_json(),
            "classification": self.classification.to_json(dialect),
            "certificates": certificates,
        })
    }
}

pub fn classify(g: &Graph, budget: &SearchBudget) -> Result<Classification, ClassifyError> {
    classify_report(g, budget).map(|r| r.classification)
}

pub fn classify_report(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<ClassificationReport, ClassifyError> {
    if g.vertex_count() == 0 {
        return Err(ClassifyError::EmptyGraph);
    }
    let engine = MonoidEngine::new(g);
    let serre = serre_check_with(&engine, budget);
    let pis = purely_infinite_simple_check(g);
    let k0 = engine.k0().clone();
    let classification = conclude(g, &serre, &pis, &k0)?;
    Ok(ClassificationReport {
        classification,
        serre,
        pis,
        k0,
    })
}

/// The classification implied by a finished Serre report.
pub fn conclude(
    g: &Graph,
    serre: &SerreReport,
    pis: &PisReport,
    k0: &K0Data,
) -> Result<Classification, ClassifyError> {
    Ok(match &serre.verdict {
        SerreVerdict::Fails { .. } => Classification::NotSerre(serre.clone()),
        SerreVerdict::Unknown => Classification::SerreUnknown(serre.clone()),
        SerreVerdict::Holds { .. } => match g.rose_petals() {
            Some(0) => Classification::SerreTrivialField,
            Some(1) => Classification::SerreLaurent,
            Some(n) => Classification::SerreRose(n),
            None => {
                if !pis.holds() {
                    return Err(ClassifyError::TheoremViolation(format!(
                        "Serre holds but the algebra is not purely infinite simple: {}",
                        pis.to_json(g)
                    )));
                }
                match cyclic_with_unit_one(k0) {
                    Some(n) => Classification::SerrePis { n },
                    None => {
                        return Err(ClassifyError::TheoremViolation(format!(
                            "Serre holds but K0 = {} with unit {:?} is not (Z/nZ, 1)",
                            k0.group_description(),
                            k0.unit
                        )))
                    }
                }
            }
        },
    })
}

/// `n` when K₀ is `Z/nZ` (with `n = 1` for the trivial group) and the
/// unit sits at `1`.
pub fn cyclic_with_unit_one(k0: &K0Data) -> Option<BigUint> {
    if k0.free_rank != 0 {
        return None;
    }
    match k0.torsion.as_slice() {
        [] => Some(BigUint::one()),
        [d] if k0.unit[0].is_one() => d.to_biguint(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2_minus() -> Graph {
        Graph::rose(2).cuntz_splice("u").unwrap()
    }

    fn ex34_1() -> Graph {
        Graph::new(
            &["u", "v", "z"],
            &[
                ("u", "v"),
                ("u", "z"),
                ("v", "v"),
                ("v", "u"),
                ("z", "z"),
                ("z", "u"),
            ],
        )
        .unwrap()
    }

    fn ex34_2() -> Graph {
        Graph::new(
            &["v", "z"],
            &[("v", "v"), ("v", "z"), ("z", "z"), ("z", "z")],
        )
        .unwrap()
    }

    #[test]
    fn e2_minus_is_serre_with_k_one() {
        let g = e2_minus();
        let r = serre_check(&g, &SearchBudget::default());
        assert_eq!(
            r.verdict,
            SerreVerdict::Holds {
                multipliers: vec![BigUint::one(); 3]
            }
        );
        for (_, _, c) in r.certificates() {
            c.replay(&g).unwrap();
            assert!(c.steps() <= 10);
        }
    }

    #[test]
    fn ex34_2_fails_at_z() {
        let g = ex34_2();
        let r = serre_check(&g, &SearchBudget::default());
        assert_eq!(
            r.verdict,
            SerreVerdict::Fails {
                vertex: g.vertex("z").unwrap(),
                reason: FailReason::NoK0Solution
            }
        );
    }

    #[test]
    fn disjoint_roses_fail_by_support() {
        let g = Graph::new(
            &["u", "v"],
            &[("u", "u"), ("u", "u"), ("v", "v"), ("v", "v")],
        )
        .unwrap();
        let r = serre_check(&g, &SearchBudget::default());
        assert_eq!(
            r.verdict,
            SerreVerdict::Fails {
                vertex: 0,
                reason: FailReason::MonoidRefuted
            }
        );
    }

    #[test]
    fn pis_examples() {
        assert!(purely_infinite_simple_check(&Graph::rose(2)).holds());
        assert!(purely_infinite_simple_check(&ex34_1()).holds());
        let r = purely_infinite_simple_check(&ex34_2());
        assert_eq!(
            r.failures,
            vec![PisFailure::NontrivialIdeal(VertexSet::new(vec![1]))]
        );
        let r = purely_infinite_simple_check(&Graph::rose(0));
        assert_eq!(r.failures, vec![PisFailure::NoCycle]);
        let r = purely_infinite_simple_check(&Graph::rose(1));
        assert_eq!(r.failures, vec![PisFailure::ExitlessCycle(vec![0])]);
    }

    #[test]
    fn ibn_examples() {
        let b = SearchBudget::default();
        assert_eq!(ibn_check(&ex34_2(), &b), IbnReport::Ibn);
        assert_eq!(ibn_check(&Graph::rose(1), &b), IbnReport::Ibn);
        match ibn_check(&Graph::rose(2), &b) {
            IbnReport::NotIbn { n, m, certificate } => {
                assert_eq!((n, m), (1, BigUint::from(2u32)));
                certificate.replay(&Graph::rose(2)).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stably_free_examples() {
        assert!(!stably_free_check(&ex34_1()));
        assert!(stably_free_check(&ex34_2()));
        assert!(stably_free_check(&Graph::rose(2)));
    }

    #[test]
    fn classification_examples() {
        let b = SearchBudget::default();
        assert_eq!(
            classify(&Graph::rose(0), &b),
            Ok(Classification::SerreTrivialField)
        );
        assert_eq!(
            classify(&Graph::rose(1), &b),
            Ok(Classification::SerreLaurent)
        );
        assert_eq!(
            classify(&Graph::rose(2), &b),
            Ok(Classification::SerreRose(2))
        );
        assert_eq!(
            classify(&e2_minus(), &b),
            Ok(Classification::SerrePis { n: BigUint::one() })
        );
        assert!(matches!(
            classify(&ex34_1(), &b),
            Ok(Classification::NotSerre(_))
        ));
        let empty = Graph::new::<&str, &str>(&[], &[]).unwrap();
        assert_eq!(classify(&empty, &b), Err(ClassifyError::EmptyGraph));
    }

    #[test]
    fn labels_follow_dialect() {
        let c = Classification::SerrePis { n: BigUint::one() };
        assert_eq!(c.label(Dialect::Lpa), "conjecturally L_2");
        assert_eq!(c.label(Dialect::Cstar), "conjecturally 𝒪_2");
        assert_eq!(Classification::SerreRose(3).label(Dialect::Cstar), "𝒪_3");
    }

    #[test]
    fn residues() {
        let c = residue_candidates(
            &BigInt::from(0),
            &BigInt::from(3),
            &BigInt::one(),
            &BigInt::from(7),
            64,
        );
        assert_eq!(c, vec![BigUint::from(3u32), BigUint::from(6u32)]);
        let c = residue_candidates(
            &BigInt::from(5),
            &BigInt::from(3),
            &BigInt::one(),
            &BigInt::from(7),
            1,
        );
        assert_eq!(c, vec![BigUint::from(2u32)]);
    }

    #[test]
    fn report_json_has_schema() {
        let g = e2_minus();
        let r = classify_report(&g, &SearchBudget::default()).unwrap();
        let j = r.to_json(&g, Dialect::Lpa);
        assert_eq!(j["schema"], 1);
        assert_eq!(j["classification"]["kind"], "serre_pis");
        assert_eq!(j["certificates"].as_array().unwrap().len(), 3);
        for key in ["graph", "serre", "pis", "k0"] {
            assert!(j.get(key).is_some());
        }
    }
}
