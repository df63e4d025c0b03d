//! The graph monoid `M_E`: the one-step relation on the free abelian monoid,
//! bounded reachability, and equality decided by searching for a common
//! descendant (confluence), with K₀ classes as a refutation invariant.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::element::MonoidElement;
use crate::error::ElementError;
use crate::graph::{Graph, VertexIndex};
use crate::k0::{ints_json, K0Data};
use crate::search::{self, Outcome, RewriteSystem, SearchBudget, SearchStats};

/// One application of the relation: the generator that was rewritten and the
/// element it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep<E, L> {
    pub at: L,
    pub result: E,
}

/// Two rewrite chains `left → common` and `right → common`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<E, L> {
    pub left_start: E,
    pub right_start: E,
    pub left: Vec<RewriteStep<E, L>>,
    pub right: Vec<RewriteStep<E, L>>,
    pub common: E,
}

impl<E, L> Certificate<E, L> {
    pub fn steps(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub(crate) fn swap(self) -> Self {
        Certificate {
            left_start: self.right_start,
            right_start: self.left_start,
            left: self.right,
            right: self.left,
            common: self.common,
        }
    }
}

/// Evidence that two elements differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Zero is related only to itself.
    ZeroVersusNonzero,
    /// The elements have different classes in K₀.
    K0Classes {
        left: Vec<BigInt>,
        right: Vec<BigInt>,
    },
    /// One side admits no rewrite, so any common descendant is that side
    /// itself, but the other side is strictly larger and rewriting never
    /// shrinks an element.
    Irreducible {
        irreducible_size: BigUint,
        other_size: BigUint,
    },
    /// The supports generate different hereditary saturated sets. Rewriting
    /// preserves that set, so it is an invariant of equality.
    SupportClosures {
        left: Vec<VertexIndex>,
        right: Vec<VertexIndex>,
    },
    /// Both rewrite closures are finite, fully explored and disjoint.
    DisjointClosures { visited: usize },
    /// A shift character `χ(v(i)) = λ^i g(v) mod p` separates the elements.
    ShiftCharacter {
        prime: u64,
        lambda: u64,
        left: u64,
        right: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<E, L> {
    Equal(Certificate<E, L>),
    Unequal(Witness),
    Unknown(SearchStats),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Equal,
    Unequal,
    Unknown,
}

impl<E, L> Verdict<E, L> {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Equal(_) => VerdictKind::Equal,
            Verdict::Unequal(_) => VerdictKind::Unequal,
            Verdict::Unknown(_) => VerdictKind::Unknown,
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }

    pub fn certificate(&self) -> Option<&Certificate<E, L>> {
        match self {
            Verdict::Equal(c) => Some(c),
            _ => None,
        }
    }

    pub(crate) fn swap(self) -> Self {
        match self {
            Verdict::Equal(c) => Verdict::Equal(c.swap()),
            Verdict::Unequal(Witness::K0Classes { left, right }) => {
                Verdict::Unequal(Witness::K0Classes {
                    left: right,
                    right: left,
                })
            }
            Verdict::Unequal(Witness::ShiftCharacter {
                prime,
                lambda,
                left,
                right,
            }) => Verdict::Unequal(Witness::ShiftCharacter {
                prime,
                lambda,
                left: right,
                right: left,
            }),
            Verdict::Unequal(Witness::SupportClosures { left, right }) => {
                Verdict::Unequal(Witness::SupportClosures {
                    left: right,
                    right: left,
                })
            }
            Verdict::Unknown(mut s) => {
                std::mem::swap(&mut s.depth_left, &mut s.depth_right);
                Verdict::Unknown(s)
            }
            other => other,
        }
    }
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Equal => "equal",
            VerdictKind::Unequal => "unequal",
            VerdictKind::Unknown => "unknown",
        }
    }
}

pub type MonoidVerdict = Verdict<MonoidElement, VertexIndex>;
pub type MonoidCertificate = Certificate<MonoidElement, VertexIndex>;

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::ZeroVersusNonzero => json!({"kind": "zero_versus_nonzero"}),
            Witness::K0Classes { left, right } => json!({
                "kind": "k0_classes",
                "left": ints_json(left),
                "right": ints_json(right),
            }),
            Witness::Irreducible {
                irreducible_size,
                other_size,
            } => json!({
                "kind": "irreducible",
                "irreducible_size": irreducible_size.to_string(),
                "other_size": other_size.to_string(),
            }),
            Witness::SupportClosures { left, right } => json!({
                "kind": "support_closures",
                "left": left,
                "right": right,
            }),
            Witness::DisjointClosures { visited } => json!({
                "kind": "disjoint_closures",
                "visited": visited,
            }),
            Witness::ShiftCharacter {
                prime,
                lambda,
                left,
                right,
            } => json!({
                "kind": "shift_character",
                "prime": prime,
                "lambda": lambda,
                "left": left,
                "right": right,
            }),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Witness::ZeroVersusNonzero => "zero is related only to itself".into(),
            Witness::K0Classes { left, right } => {
                format!("K0 classes differ: {left:?} vs {right:?}")
            }
            Witness::Irreducible {
                irreducible_size,
                other_size,
            } => format!(
                "one side is irreducible of size {irreducible_size}, the other has size {other_size}"
            ),
            Witness::SupportClosures { left, right } => format!(
                "supports generate different hereditary saturated sets: {left:?} vs {right:?}"
            ),
            Witness::DisjointClosures { visited } => {
                format!("finite rewrite closures are disjoint ({visited} elements)")
            }
            Witness::ShiftCharacter {
                prime,
                lambda,
                left,
                right,
            } => format!("shift character mod {prime} at λ={lambda}: {left} vs {right}"),
        }
    }
}

pub(crate) fn support_closure_witness(
    g: &Graph,
    a: impl Iterator<Item = VertexIndex>,
    b: impl Iterator<Item = VertexIndex>,
) -> Option<Witness> {
    let (sa, sb): (Vec<_>, Vec<_>) = (a.collect(), b.collect());
    let (ha, hb) = (
        g.hereditary_saturated_closure(&sa),
        g.hereditary_saturated_closure(&sb),
    );
    (ha != hb).then(|| Witness::SupportClosures {
        left: ha.members().to_vec(),
        right: hb.members().to_vec(),
    })
}

pub(crate) fn stats_json(s: &SearchStats) -> Value {
    serde_json::to_value(s).expect("stats serialize")
}

impl MonoidVerdict {
    pub fn to_json(&self, g: &Graph) -> Value {
        match self {
            Verdict::Equal(c) => json!({
                "verdict": "equal",
                "certificate": certificate_json(c, |e| e.display(g), |&v| g.name(v).to_string()),
            }),
            Verdict::Unequal(w) => json!({"verdict": "unequal", "witness": w.to_json()}),
            Verdict::Unknown(s) => json!({"verdict": "unknown", "budget_spent": stats_json(s)}),
        }
    }
}

pub(crate) fn certificate_json<E, L>(
    c: &Certificate<E, L>,
    show: impl Fn(&E) -> String,
    label: impl Fn(&L) -> String,
) -> Value {
    let side = |steps: &[RewriteStep<E, L>]| -> Value {
        Value::Array(
            steps
                .iter()
                .map(|s| json!([label(&s.at), show(&s.result)]))
                .collect(),
        )
    };
    json!({
        "left_start": show(&c.left_start),
        "right_start": show(&c.right_start),
        "common": show(&c.common),
        "left": side(&c.left),
        "right": side(&c.right),
    })
}

/// Rewrites of a dense coefficient vector. Coefficients are `u32`; anything
/// larger is beyond every size budget.
pub(crate) struct DenseSystem<'g> {
    pub g: &'g Graph,
}

impl RewriteSystem for DenseSystem<'_> {
    type State = Box<[u32]>;
    type Label = VertexIndex;

    fn successors(&self, s: &Box<[u32]>, out: &mut Vec<(VertexIndex, Box<[u32]>)>) {
        let start = out.len();
        for v in 0..s.len() {
            if s[v] == 0 || self.g.is_sink(v) {
                continue;
            }
            let mut next = s.clone();
            next[v] -= 1;
            let mut overflow = false;
            for &r in self.g.out_ranges(v) {
                match next[r].checked_add(1) {
                    Some(x) => next[r] = x,
                    None => overflow = true,
                }
            }
            if overflow || out[start..].iter().any(|(_, e)| *e == next) {
                continue;
            }
            out.push((v, next));
        }
    }

    fn size(&self, s: &Box<[u32]>) -> u64 {
        s.iter().map(|&c| u64::from(c)).sum()
    }
}

/// All elements `b` with `a →₁ b`, one per non-sink vertex in the support of
/// `a`, in vertex order, duplicates dropped.
pub fn one_step_rewrites(g: &Graph, a: &MonoidElement) -> Result<Vec<MonoidElement>, ElementError> {
    Ok(labelled_rewrites(g, a)?
        .into_iter()
        .map(|s| s.result)
        .collect())
}

/// Like [`one_step_rewrites`], keeping the rewritten vertex.
pub fn labelled_rewrites(
    g: &Graph,
    a: &MonoidElement,
) -> Result<Vec<RewriteStep<MonoidElement, VertexIndex>>, ElementError> {
    if a.is_zero() {
        return Err(ElementError::ZeroElement);
    }
    a.check_vertices(g)?;
    let mut out: Vec<RewriteStep<MonoidElement, VertexIndex>> = Vec::new();
    for (v, _) in a.terms() {
        if g.is_sink(*v) {
            continue;
        }
        let result = apply_rewrite(g, a, *v);
        if out.iter().all(|s| s.result != result) {
            out.push(RewriteStep { at: *v, result });
        }
    }
    Ok(out)
}

/// `a - v + Σ_{e ∈ s⁻¹(v)} r(e)`. The caller guarantees `v` is in the
/// support of `a` and is not a sink.
fn apply_rewrite(g: &Graph, a: &MonoidElement, v: VertexIndex) -> MonoidElement {
    let terms = a.terms().iter().map(|(u, c)| {
        if *u == v {
            (*u, c - 1u32)
        } else {
            (*u, c.clone())
        }
    });
    let ranges = g.out_ranges(v).iter().map(|&r| (r, BigUint::from(1u32)));
    MonoidElement::from_terms(terms.chain(ranges))
}

/// Result of a bounded closure computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachable {
    /// Discovered elements in breadth-first order, starting with `a` itself.
    pub elements: Vec<MonoidElement>,
    /// Some element was cut off by a budget limit.
    pub truncated: bool,
}

pub fn reachable(
    g: &Graph,
    a: &MonoidElement,
    budget: &SearchBudget,
) -> Result<Reachable, ElementError> {
    if a.is_zero() {
        return Err(ElementError::ZeroElement);
    }
    a.check_vertices(g)?;
    let Some(dense) = a.to_dense(g.vertex_count()) else {
        return Ok(Reachable {
            elements: vec![a.clone()],
            truncated: true,
        });
    };
    let (states, truncated) = search::closure(&DenseSystem { g }, dense.into(), budget);
    Ok(Reachable {
        elements: states
            .iter()
            .map(|s| MonoidElement::from_dense(s))
            .collect(),
        truncated,
    })
}

/// Equality decisions in `M_E` for one graph, with its K₀ data cached.
pub struct MonoidEngine<'g> {
    g: &'g Graph,
    k0: K0Data,
}

impl<'g> MonoidEngine<'g> {
    pub fn new(g: &'g Graph) -> Self {
        MonoidEngine {
            g,
            k0: K0Data::of_graph(g),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn k0(&self) -> &K0Data {
        &self.k0
    }

    /// Decides `a = b` in `M_E`: zero is handled directly, K₀ and
    /// irreducibility refute, and a bounded bidirectional search looks for
    /// a common descendant. Budget exhaustion gives `Unknown`, never
    /// `Unequal`.
    pub fn decide_equal(
        &self,
        a: &MonoidElement,
        b: &MonoidElement,
        budget: &SearchBudget,
    ) -> MonoidVerdict {
        // canonical argument order makes the verdict symmetric
        if b < a {
            return self.decide_ordered(b, a, budget).swap();
        }
        self.decide_ordered(a, b, budget)
    }

    fn decide_ordered(
        &self,
        a: &MonoidElement,
        b: &MonoidElement,
        budget: &SearchBudget,
    ) -> MonoidVerdict {
        if a == b {
            return Verdict::Equal(Certificate {
                left_start: a.clone(),
                right_start: b.clone(),
                left: Vec::new(),
                right: Vec::new(),
                common: a.clone(),
            });
        }
        if a.is_zero() || b.is_zero() {
            return Verdict::Unequal(Witness::ZeroVersusNonzero);
        }
        let (ca, cb) = (self.k0.class_of(a), self.k0.class_of(b));
        if ca != cb {
            return Verdict::Unequal(Witness::K0Classes {
                left: ca,
                right: cb,
            });
        }
        if let Some(w) = support_closure_witness(
            self.g,
            a.terms().iter().map(|(v, _)| *v),
            b.terms().iter().map(|(v, _)| *v),
        ) {
            return Verdict::Unequal(w);
        }
        for (x, y) in [(a, b), (b, a)] {
            if self.is_irreducible(x) && y.size() > x.size() {
                return Verdict::Unequal(Witness::Irreducible {
                    irreducible_size: x.size(),
                    other_size: y.size(),
                });
            }
        }

        let n = self.g.vertex_count();
        let (Some(da), Some(db)) = (a.to_dense(n), b.to_dense(n)) else {
            return Verdict::Unknown(oversized(budget));
        };
        let sys = DenseSystem { g: self.g };
        match search::bidirectional(&sys, da.into(), db.into(), budget) {
            Outcome::Met {
                left,
                right,
                common,
            } => {
                let steps = |path: Vec<(VertexIndex, Box<[u32]>)>| {
                    path.into_iter()
                        .map(|(at, s)| RewriteStep {
                            at,
                            result: MonoidElement::from_dense(&s),
                        })
                        .collect()
                };
                Verdict::Equal(Certificate {
                    left_start: a.clone(),
                    right_start: b.clone(),
                    left: steps(left),
                    right: steps(right),
                    common: MonoidElement::from_dense(&common),
                })
            }
            Outcome::Disjoint { stats } => Verdict::Unequal(Witness::DisjointClosures {
                visited: stats.visited,
            }),
            Outcome::Exhausted { stats } => Verdict::Unknown(stats),
        }
    }

    fn is_irreducible(&self, a: &MonoidElement) -> bool {
        a.terms().iter().all(|(v, _)| self.g.is_sink(*v))
    }

    /// One representative per class of `M_E`, smallest first, when the
    /// monoid is finite and every comparison is decided within budget.
    pub fn enumerate(&self, budget: &SearchBudget, max_classes: usize) -> Enumeration {
        let mut reps = vec![MonoidElement::zero()];
        let mut next = 0;
        while next < reps.len() {
            let base = reps[next].clone();
            next += 1;
            for v in 0..self.g.vertex_count() {
                let candidate = base.add(&MonoidElement::vertex(v));
                let mut undecided = None;
                let mut known = false;
                for r in &reps {
                    match self.decide_equal(&candidate, r, budget) {
                        Verdict::Equal(_) => {
                            known = true;
                            break;
                        }
                        Verdict::Unequal(_) => {}
                        Verdict::Unknown(_) => undecided = Some(r.clone()),
                    }
                }
                if known {
                    continue;
                }
                if let Some(r) = undecided {
                    return Enumeration::Unknown {
                        classes_found: reps,
                        reason: format!(
                            "could not decide {} against {} within budget",
                            candidate.display(self.g),
                            r.display(self.g)
                        ),
                    };
                }
                reps.push(candidate);
                if reps.len() > max_classes {
                    return Enumeration::Unknown {
                        classes_found: reps,
                        reason: format!(
                            "more than {max_classes} classes; the monoid may be infinite"
                        ),
                    };
                }
            }
        }
        Enumeration::Complete(reps)
    }
}

fn oversized(budget: &SearchBudget) -> SearchStats {
    SearchStats {
        depth_left: 0,
        depth_right: 0,
        visited: 0,
        pruned_by_size: true,
        stop: Some(search::StopReason::SizeLimit),
        budget: *budget,
    }
}

/// Default cap on the number of classes [`enumerate_monoid`] will list.
pub const MAX_ENUMERATED_CLASSES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Complete(Vec<MonoidElement>),
    Unknown {
        classes_found: Vec<MonoidElement>,
        reason: String,
    },
}

pub fn decide_equal(
    g: &Graph,
    a: &MonoidElement,
    b: &MonoidElement,
    budget: &SearchBudget,
) -> MonoidVerdict {
    MonoidEngine::new(g).decide_equal(a, b, budget)
}

pub fn enumerate_monoid(g: &Graph, budget: &SearchBudget) -> Enumeration {
    MonoidEngine::new(g).enumerate(budget, MAX_ENUMERATED_CLASSES)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("certificate does not replay: {0}")]
pub struct ReplayError(pub String);

impl MonoidCertificate {
    /// Re-applies every step and checks both chains end at `common`.
    pub fn replay(&self, g: &Graph) -> Result<(), ReplayError> {
        for (start, steps, side) in [
            (&self.left_start, &self.left, "left"),
            (&self.right_start, &self.right, "right"),
        ] {
            let mut cur = start.clone();
            for (i, step) in steps.iter().enumerate() {
                if cur.coefficient(step.at).to_u32() == Some(0) || g.is_sink(step.at) {
                    return Err(ReplayError(format!(
                        "{side} step {i}: cannot rewrite {} in {}",
                        g.name(step.at),
                        cur.display(g)
                    )));
                }
                let next = apply_rewrite(g, &cur, step.at);
                if next != step.result {
                    return Err(ReplayError(format!(
                        "{side} step {i}: expected {}, got {}",
                        step.result.display(g),
                        next.display(g)
                    )));
                }
                cur = next;
            }
            if cur != self.common {
                return Err(ReplayError(format!(
                    "{side} chain ends at {}, not {}",
                    cur.display(g),
                    self.common.display(g)
                )));
            }
        }
        Ok(())
    }
}
