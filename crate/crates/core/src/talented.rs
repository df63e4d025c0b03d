//! The talented monoid `T_E`: generators `v(i)` for vertices `v` and shifts
//! `i ∈ Z`, relations `v(i) = Σ_{e ∈ s⁻¹(v)} r(e)(i+1)` at non-sinks, and the
//! `Z`-action that shifts every index.
//!
//! Equality is decided the same way as in the graph monoid: a bounded search
//! for a common descendant, after cheap refutations. The refutation
//! invariants are necessary conditions only:
//!
//! * the K₀ class of the shift-forgetting image;
//! * shift characters `χ(v(i)) = λ^i g(v) (mod p)`, where `g` solves
//!   `g(v) = λ Σ_{e ∈ s⁻¹(v)} g(r(e))` at every regular vertex. Each
//!   relation preserves `χ`, so different values prove inequality.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::element::{parse_terms, MonoidElement};
use crate::error::ElementError;
use crate::graph::{Graph, VertexIndex};
use crate::k0::{K0Data, Multiples};
use crate::monoid::{
    certificate_json, stats_json, support_closure_witness, Certificate, RewriteStep, Verdict,
    Witness,
};
use crate::search::{self, Outcome, RewriteSystem, SearchBudget};

pub type Shift = i64;

/// A generator `v(i)`, used as the rewrite label in graded certificates.
pub type GradedGenerator = (VertexIndex, Shift);

pub type GradedVerdict = Verdict<GradedElement, GradedGenerator>;
pub type GradedCertificate = Certificate<GradedElement, GradedGenerator>;

/// A finitely supported map `(vertex, shift) → N`, kept sorted by
/// `(shift, vertex order)` with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedElement {
    terms: Vec<((Shift, VertexIndex), BigUint)>,
}

impl GradedElement {
    pub fn zero() -> Self {
        GradedElement::default()
    }

    pub fn generator(v: VertexIndex, shift: Shift) -> Self {
        GradedElement {
            terms: vec![((shift, v), BigUint::one())],
        }
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (VertexIndex, Shift, C)>,
        C: Into<BigUint>,
    {
        let mut raw: Vec<((Shift, VertexIndex), BigUint)> = terms
            .into_iter()
            .map(|(v, i, c)| ((i, v), c.into()))
            .collect();
        raw.sort_by_key(|(k, _)| *k);
        let mut merged: Vec<((Shift, VertexIndex), BigUint)> = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            match merged.last_mut() {
                Some((last, acc)) if *last == k => *acc += c,
                _ => merged.push((k, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        GradedElement { terms: merged }
    }

    /// `1_E(shift)`.
    pub fn unit(g: &Graph, shift: Shift) -> Self {
        Self::from_terms((0..g.vertex_count()).map(|v| (v, shift, 1u32)))
    }

    /// `Σ_j 1_E(i_j)` over the given shifts.
    pub fn unit_sum(g: &Graph, shifts: &[Shift]) -> Self {
        Self::from_terms(
            shifts
                .iter()
                .flat_map(|&i| (0..g.vertex_count()).map(move |v| (v, i, 1u32))),
        )
    }

    /// Embeds an ungraded element at shift `shift`.
    pub fn from_ungraded(a: &MonoidElement, shift: Shift) -> Self {
        Self::from_terms(a.terms().iter().map(|(v, c)| (*v, shift, c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(vertex, shift, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (VertexIndex, Shift, &BigUint)> {
        self.terms.iter().map(|((i, v), c)| (*v, *i, c))
    }

    pub fn coefficient(&self, v: VertexIndex, shift: Shift) -> BigUint {
        self.terms
            .binary_search_by_key(&(shift, v), |(k, _)| *k)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    pub fn size(&self) -> BigUint {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn add(&self, other: &GradedElement) -> GradedElement {
        Self::from_terms(
            self.terms()
                .chain(other.terms())
                .map(|(v, i, c)| (v, i, c.clone())),
        )
    }

    /// The `Z`-action: every `v(i)` becomes `v(i + n)`.
    pub fn shift(&self, n: Shift) -> GradedElement {
        GradedElement {
            terms: self
                .terms
                .iter()
                .map(|((i, v), c)| ((i + n, *v), c.clone()))
                .collect(),
        }
    }

    /// Image under `v(i) ↦ v`.
    pub fn forget(&self) -> MonoidElement {
        MonoidElement::from_terms(self.terms().map(|(v, _, c)| (v, c.clone())))
    }

    /// Writes the element as `Σ_i m_i 1_E(i)` when every vertex carries the
    /// same coefficient at each occurring shift. Returns the shifts with
    /// multiplicity.
    pub fn as_unit_sum(&self, g: &Graph) -> Option<Vec<Shift>> {
        let n = g.vertex_count();
        if n == 0 || self.is_zero() {
            return None;
        }
        let mut shifts = Vec::new();
        for block in self.terms.chunk_by(|a, b| a.0 .0 == b.0 .0) {
            if block.len() != n || block.iter().any(|(_, c)| *c != block[0].1) {
                return None;
            }
            let m = block[0].1.to_usize()?;
            shifts.extend(std::iter::repeat(block[0].0 .0).take(m));
        }
        Some(shifts)
    }

    pub fn parse(g: &Graph, text: &str) -> Result<Self, ElementError> {
        let terms = parse_terms(g, text, true)?;
        Ok(Self::from_terms(terms.into_iter().map(|(c, name, i)| {
            (g.vertex(name).expect("parse_terms resolves names"), i, c)
        })))
    }

    /// `u(1) + 2v(-1)`; shift zero is written bare, as `u`.
    pub fn display(&self, g: &Graph) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (v, i, c)) in self.terms().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            if !c.is_one() {
                write!(out, "{c}").unwrap();
            }
            out.push_str(g.name(v));
            if i != 0 {
                write!(out, "({i})").unwrap();
            }
        }
        out
    }

    fn check_vertices(&self, g: &Graph) -> Result<(), ElementError> {
        match self.terms().find(|(v, _, _)| *v >= g.vertex_count()) {
            Some((v, _, _)) => Err(ElementError::UnknownVertex(format!("#{v}"))),
            None => Ok(()),
        }
    }

    fn to_state(&self) -> Option<GradedState> {
        self.terms()
            .map(|(v, i, c)| Some((i, u32::try_from(v).ok()?, c.to_u32()?)))
            .collect::<Option<Vec<_>>>()
            .map(Vec::into_boxed_slice)
    }

    fn from_state(s: &[(Shift, u32, u32)]) -> Self {
        GradedElement {
            terms: s
                .iter()
                .map(|&(i, v, c)| ((i, v as VertexIndex), BigUint::from(c)))
                .collect(),
        }
    }
}

/// `(shift, vertex, coefficient)` sorted by `(shift, vertex)`, no zeros.
type GradedState = Box<[(Shift, u32, u32)]>;

struct GradedSystem<'g> {
    g: &'g Graph,
}

impl GradedSystem<'_> {
    fn rewrite(&self, s: &[(Shift, u32, u32)], idx: usize) -> Option<GradedState> {
        let (i, v, _) = s[idx];
        let mut entries: Vec<(Shift, u32, u32)> =
            Vec::with_capacity(s.len() + self.g.out_degree(v as usize));
        entries.extend_from_slice(s);
        entries[idx].2 -= 1;
        for &r in self.g.out_ranges(v as usize) {
            entries.push((i + 1, r as u32, 1));
        }
        entries.sort_unstable_by_key(|&(i, v, _)| (i, v));
        let mut merged: Vec<(Shift, u32, u32)> = Vec::with_capacity(entries.len());
        for (i, v, c) in entries {
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (i, v) => last.2 = last.2.checked_add(c)?,
                _ => merged.push((i, v, c)),
            }
        }
        merged.retain(|e| e.2 > 0);
        Some(merged.into_boxed_slice())
    }
}

impl RewriteSystem for GradedSystem<'_> {
    type State = GradedState;
    type Label = GradedGenerator;

    fn successors(&self, s: &GradedState, out: &mut Vec<(GradedGenerator, GradedState)>) {
        let start = out.len();
        for idx in 0..s.len() {
            let (i, v, _) = s[idx];
            if self.g.is_sink(v as usize) {
                continue;
            }
            let Some(next) = self.rewrite(s, idx) else {
                continue;
            };
            if out[start..].iter().all(|(_, e)| *e != next) {
                out.push(((v as VertexIndex, i), next));
            }
        }
    }

    fn size(&self, s: &GradedState) -> u64 {
        s.iter().map(|e| u64::from(e.2)).sum()
    }
}

pub fn shift_action(n: Shift, a: &GradedElement) -> GradedElement {
    a.shift(n)
}

/// All one-step rewrites of `a`, one per non-sink generator in its support,
/// in canonical order.
pub fn graded_one_step(g: &Graph, a: &GradedElement) -> Result<Vec<GradedElement>, ElementError> {
    Ok(graded_labelled_rewrites(g, a)?
        .into_iter()
        .map(|s| s.result)
        .collect())
}

pub fn graded_labelled_rewrites(
    g: &Graph,
    a: &GradedElement,
) -> Result<Vec<RewriteStep<GradedElement, GradedGenerator>>, ElementError> {
    if a.is_zero() {
        return Err(ElementError::ZeroElement);
    }
    a.check_vertices(g)?;
    let mut out: Vec<RewriteStep<GradedElement, GradedGenerator>> = Vec::new();
    for (v, i, _) in a.terms() {
        if g.is_sink(v) {
            continue;
        }
        let result = apply_graded(g, a, v, i);
        if out.iter().all(|s| s.result != result) {
            out.push(RewriteStep { at: (v, i), result });
        }
    }
    Ok(out)
}

fn apply_graded(g: &Graph, a: &GradedElement, v: VertexIndex, i: Shift) -> GradedElement {
    let kept = a.terms().map(|(u, j, c)| {
        if (u, j) == (v, i) {
            (u, j, c - 1u32)
        } else {
            (u, j, c.clone())
        }
    });
    let added = g.out_ranges(v).iter().map(|&r| (r, i + 1, BigUint::one()));
    GradedElement::from_terms(kept.chain(added))
}

/// An additive invariant of `T_E` over `F_p`, see the module docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftCharacter {
    pub prime: u64,
    pub lambda: u64,
    pub weights: Vec<u64>,
}

const CHARACTER_PRIMES: [u64; 2] = [101, 1009];
const MAX_CHARACTERS: usize = 256;

impl ShiftCharacter {
    pub fn eval(&self, a: &GradedElement) -> u64 {
        let p = self.prime;
        let lambda_inv = pow_mod(self.lambda, p - 2, p);
        a.terms().fold(0, |acc, (v, i, c)| {
            let scale = if i >= 0 {
                pow_mod(self.lambda, i as u64, p)
            } else {
                pow_mod(lambda_inv, i.unsigned_abs(), p)
            };
            let c = (c % p).to_u64().expect("reduced mod p");
            (acc + mul_mod(mul_mod(c, scale, p), self.weights[v], p)) % p
        })
    }

    /// All characters for the built-in primes: for each `λ ∈ F_p^×`, a basis
    /// of the solutions `g` of `g(v) = λ (A g)(v)` at regular vertices.
    pub fn of_graph(g: &Graph) -> Vec<ShiftCharacter> {
        let n = g.vertex_count();
        let adj = g.adjacency();
        let regular = g.regular_vertices();
        let mut out = Vec::new();
        for p in CHARACTER_PRIMES {
            for lambda in 1..p {
                let rows: Vec<Vec<u64>> = regular
                    .members()
                    .iter()
                    .map(|&v| {
                        (0..n)
                            .map(|u| {
                                let a = mul_mod(lambda, adj[v][u] % p, p);
                                let delta = u64::from(u == v);
                                (delta + p - a) % p
                            })
                            .collect()
                    })
                    .collect();
                for weights in nullspace_mod(rows, n, p) {
                    out.push(ShiftCharacter {
                        prime: p,
                        lambda,
                        weights,
                    });
                    if out.len() >= MAX_CHARACTERS {
                        return out;
                    }
                }
            }
        }
        out
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Basis of `{x : M x = 0}` over `F_p` for an `m × n` matrix.
fn nullspace_mod(mut rows: Vec<Vec<u64>>, n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = pow_mod(rows[r][c], p - 2, p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..n {
                    let sub = mul_mod(f, rows[r][j], p);
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![0u64; n];
            x[free] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - rows[k][free]) % p;
            }
            x
        })
        .collect()
}

/// Equality decisions in `T_E` for one graph.
pub struct GradedEngine<'g> {
    g: &'g Graph,
    k0: K0Data,
    characters: Vec<ShiftCharacter>,
}

impl<'g> GradedEngine<'g> {
    pub fn new(g: &'g Graph) -> Self {
        GradedEngine {
            g,
            k0: K0Data::of_graph(g),
            characters: ShiftCharacter::of_graph(g),
        }
    }

    pub fn characters(&self) -> &[ShiftCharacter] {
        &self.characters
    }

    /// First invariant separating `a` and `b`, if any.
    pub fn refute(&self, a: &GradedElement, b: &GradedElement) -> Option<Witness> {
        if a.is_zero() != b.is_zero() {
            return Some(Witness::ZeroVersusNonzero);
        }
        let (ca, cb) = (self.k0.class_of(&a.forget()), self.k0.class_of(&b.forget()));
        if ca != cb {
            return Some(Witness::K0Classes {
                left: ca,
                right: cb,
            });
        }
        if let Some(w) =
            support_closure_witness(self.g, a.terms().map(|t| t.0), b.terms().map(|t| t.0))
        {
            return Some(w);
        }
        for chi in &self.characters {
            let (x, y) = (chi.eval(a), chi.eval(b));
            if x != y {
                return Some(Witness::ShiftCharacter {
                    prime: chi.prime,
                    lambda: chi.lambda,
                    left: x,
                    right: y,
                });
            }
        }
        for (x, y) in [(a, b), (b, a)] {
            if x.terms().all(|(v, _, _)| self.g.is_sink(v)) && y.size() > x.size() {
                return Some(Witness::Irreducible {
                    irreducible_size: x.size(),
                    other_size: y.size(),
                });
            }
        }
        None
    }

    pub fn decide_equal(
        &self,
        a: &GradedElement,
        b: &GradedElement,
        budget: &SearchBudget,
    ) -> GradedVerdict {
        if b < a {
            return self.decide_ordered(b, a, budget).swap();
        }
        self.decide_ordered(a, b, budget)
    }

    fn decide_ordered(
        &self,
        a: &GradedElement,
        b: &GradedElement,
        budget: &SearchBudget,
    ) -> GradedVerdict {
        if a == b {
            return Verdict::Equal(Certificate {
                left_start: a.clone(),
                right_start: b.clone(),
                left: Vec::new(),
                right: Vec::new(),
                common: a.clone(),
            });
        }
        if let Some(w) = self.refute(a, b) {
            return Verdict::Unequal(w);
        }
        let (Some(sa), Some(sb)) = (a.to_state(), b.to_state()) else {
            return Verdict::Unknown(search::SearchStats {
                depth_left: 0,
                depth_right: 0,
                visited: 0,
                pruned_by_size: true,
                stop: Some(search::StopReason::SizeLimit),
                budget: *budget,
            });
        };
        match search::bidirectional(&GradedSystem { g: self.g }, sa, sb, budget) {
            Outcome::Met {
                left,
                right,
                common,
            } => Verdict::Equal(Certificate {
                left_start: a.clone(),
                right_start: b.clone(),
                left: graded_steps(left),
                right: graded_steps(right),
                common: GradedElement::from_state(&common),
            }),
            Outcome::Disjoint { stats } => Verdict::Unequal(Witness::DisjointClosures {
                visited: stats.visited,
            }),
            Outcome::Exhausted { stats } => Verdict::Unknown(stats),
        }
    }

    /// Graded Serre check: is every `v(0)` a finite sum of shifted units
    /// `Σ_j 1_E(i_j)` with all `i_j` in `window`?
    pub fn serre_check(&self, budget: &SearchBudget, window: ShiftWindow) -> GradedSerreReport {
        let vertices: Vec<(VertexIndex, GradedVertexOutcome)> = (0..self.g.vertex_count())
            .map(|v| (v, self.vertex_outcome(v, budget, window)))
            .collect();
        let verdict = if vertices
            .iter()
            .all(|(_, o)| matches!(o, GradedVertexOutcome::Free { .. }))
        {
            GradedSerreVerdict::Holds
        } else if vertices
            .iter()
            .any(|(_, o)| matches!(o, GradedVertexOutcome::NotFree(_)))
        {
            GradedSerreVerdict::Fails
        } else if vertices
            .iter()
            .any(|(_, o)| matches!(o, GradedVertexOutcome::NoneInWindow { .. }))
        {
            GradedSerreVerdict::FailsWithinWindow
        } else {
            GradedSerreVerdict::Unknown
        };
        GradedSerreReport {
            window,
            budget: *budget,
            vertices,
            verdict,
        }
    }

    fn vertex_outcome(
        &self,
        v: VertexIndex,
        budget: &SearchBudget,
        window: ShiftWindow,
    ) -> GradedVertexOutcome {
        let start = GradedElement::generator(v, 0);
        let multiples = self.k0.solve_multiple(&self.k0.vertex_classes[v]);
        let unit_counts: Vec<usize> = match multiples {
            Multiples::None => return GradedVertexOutcome::NotFree(GradedRefutation::NoK0Multiple),
            Multiples::Exactly(k) => match k.to_usize() {
                Some(k) if k >= 1 => vec![k],
                _ => return GradedVertexOutcome::NotFree(GradedRefutation::NoK0Multiple),
            },
            Multiples::Residue { rep, modulus } => {
                let (rep, modulus) = (
                    rep.to_usize().unwrap_or(usize::MAX),
                    modulus.to_usize().unwrap_or(usize::MAX),
                );
                (1..=MAX_UNITS)
                    .filter(|&m| modulus != 0 && m % modulus == rep % modulus)
                    .collect()
            }
        };

        // a character vanishing on 1_E but not on v(0) rules out every shift multiset
        let unit0 = GradedElement::unit(self.g, 0);
        for chi in &self.characters {
            if chi.eval(&unit0) == 0 && chi.eval(&start) != 0 {
                return GradedVertexOutcome::NotFree(GradedRefutation::Character {
                    prime: chi.prime,
                    lambda: chi.lambda,
                });
            }
        }

        // rewrite v(0) forward until it is literally a sum of shifted units
        let in_window = |shifts: &[Shift]| shifts.iter().all(|i| window.contains(*i));
        let sys = GradedSystem { g: self.g };
        let found = start.to_state().and_then(|s| {
            search::first_match(&sys, s, budget, |st| {
                GradedElement::from_state(st)
                    .as_unit_sum(self.g)
                    .is_some_and(|sh| in_window(&sh))
            })
        });
        if let Some(path) = found {
            let common = path
                .last()
                .map_or_else(|| start.clone(), |(_, s)| GradedElement::from_state(s));
            let shifts = common
                .as_unit_sum(self.g)
                .expect("accepted state is a unit sum");
            return GradedVertexOutcome::Free {
                shifts,
                certificate: Certificate {
                    left_start: start,
                    right_start: common.clone(),
                    left: graded_steps(path),
                    right: Vec::new(),
                    common,
                },
            };
        }

        // otherwise try shift multisets one by one
        let mut tried = 0;
        let mut refuted = 0;
        let mut undecided = false;
        let width = usize::try_from(window.hi - window.lo + 1).unwrap_or(usize::MAX);
        'sizes: for &m in &unit_counts {
            if (m * self.g.vertex_count()) as u64 > budget.max_element_size {
                undecided = true;
                continue;
            }
            for combo in multisets(width, m) {
                let shifts: Vec<Shift> = combo.iter().map(|&k| window.lo + k as Shift).collect();
                let target = GradedElement::unit_sum(self.g, &shifts);
                if self.refute(&start, &target).is_some() {
                    refuted += 1;
                    continue;
                }
                if tried == MAX_GRADED_CANDIDATES {
                    undecided = true;
                    break 'sizes;
                }
                tried += 1;
                match self.decide_equal(&start, &target, budget) {
                    Verdict::Equal(certificate) => {
                        return GradedVertexOutcome::Free {
                            shifts,
                            certificate,
                        };
                    }
                    Verdict::Unequal(_) => refuted += 1,
                    Verdict::Unknown(_) => undecided = true,
                }
            }
        }
        if undecided || unit_counts.is_empty() {
            GradedVertexOutcome::Unknown {
                candidates_tried: tried,
            }
        } else {
            GradedVertexOutcome::NoneInWindow {
                candidates_refuted: refuted,
            }
        }
    }
}

/// Largest number of shifted units tried per vertex when K₀ leaves the count open.
pub const MAX_UNITS: usize = 4;
/// Largest number of candidate shift multisets sent to the search per vertex.
pub const MAX_GRADED_CANDIDATES: usize = 256;

/// Non-decreasing sequences of length `m` over `0..width`.
fn multisets(width: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(width: usize, m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in from..width {
            cur.push(k);
            go(width, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if width > 0 && width <= 64 {
        go(width, m, 0, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

fn graded_steps(
    path: Vec<(GradedGenerator, GradedState)>,
) -> Vec<RewriteStep<GradedElement, GradedGenerator>> {
    path.into_iter()
        .map(|(at, s)| RewriteStep {
            at,
            result: GradedElement::from_state(&s),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftWindow {
    pub lo: Shift,
    pub hi: Shift,
}

impl Default for ShiftWindow {
    fn default() -> Self {
        ShiftWindow { lo: -8, hi: 8 }
    }
}

impl ShiftWindow {
    pub fn new(lo: Shift, hi: Shift) -> Result<Self, String> {
        if lo > hi {
            return Err(format!("empty shift window [{lo}, {hi}]"));
        }
        Ok(ShiftWindow { lo, hi })
    }

    pub fn contains(&self, i: Shift) -> bool {
        (self.lo..=self.hi).contains(&i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedRefutation {
    /// No positive integer `m` has `[v] = m [1_E]` in K₀.
    NoK0Multiple,
    /// A shift character kills `1_E` but not `v`.
    Character { prime: u64, lambda: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedVertexOutcome {
    /// `v(0) = Σ 1_E(i)` over `shifts`, with a replayable certificate.
    Free {
        shifts: Vec<Shift>,
        certificate: GradedCertificate,
    },
    /// Not a sum of shifted units for any window.
    NotFree(GradedRefutation),
    /// Every candidate in the window (up to [`MAX_UNITS`] units) was refuted.
    NoneInWindow {
        candidates_refuted: usize,
    },
    Unknown {
        candidates_tried: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedSerreVerdict {
    Holds,
    Fails,
    FailsWithinWindow,
    Unknown,
}

impl GradedSerreVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            GradedSerreVerdict::Holds => "holds",
            GradedSerreVerdict::Fails => "fails",
            GradedSerreVerdict::FailsWithinWindow => "fails_within_window",
            GradedSerreVerdict::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSerreReport {
    pub window: ShiftWindow,
    pub budget: SearchBudget,
    pub vertices: Vec<(VertexIndex, GradedVertexOutcome)>,
    pub verdict: GradedSerreVerdict,
}

impl GradedSerreReport {
    pub fn outcome(&self, v: VertexIndex) -> &GradedVertexOutcome {
        &self.vertices[v].1
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|(v, o)| {
                let body = match o {
                    GradedVertexOutcome::Free {
                        shifts,
                        certificate,
                    } => json!({
                        "status": "free",
                        "shifts": shifts,
                        "certificate": graded_certificate_json(g, certificate),
                    }),
                    GradedVertexOutcome::NotFree(r) => json!({
                        "status": "not_free",
                        "reason": match r {
                            GradedRefutation::NoK0Multiple => json!({"kind": "no_k0_multiple"}),
                            GradedRefutation::Character { prime, lambda } => json!({
                                "kind": "shift_character", "prime": prime, "lambda": lambda,
                            }),
                        },
                    }),
                    GradedVertexOutcome::NoneInWindow { candidates_refuted } => json!({
                        "status": "none_in_window",
                        "candidates_refuted": candidates_refuted,
                    }),
                    GradedVertexOutcome::Unknown { candidates_tried } => json!({
                        "status": "unknown",
                        "candidates_tried": candidates_tried,
                    }),
                };
                json!({"vertex": g.name(*v), "outcome": body})
            })
            .collect();
        json!({
            "verdict": self.verdict.as_str(),
            "window": [self.window.lo, self.window.hi],
            "budget": serde_json::to_value(self.budget).expect("budget serializes"),
            "vertices": vertices,
        })
    }
}

pub fn graded_certificate_json(g: &Graph, c: &GradedCertificate) -> Value {
    certificate_json(
        c,
        |e| e.display(g),
        |&(v, i)| GradedElement::generator(v, i).display(g),
    )
}

impl GradedVerdict {
    pub fn to_json(&self, g: &Graph) -> Value {
        match self {
            Verdict::Equal(c) => {
                json!({"verdict": "equal", "certificate": graded_certificate_json(g, c)})
            }
            Verdict::Unequal(w) => json!({"verdict": "unequal", "witness": w.to_json()}),
            Verdict::Unknown(s) => json!({"verdict": "unknown", "budget_spent": stats_json(s)}),
        }
    }
}

impl GradedCertificate {
    pub fn replay(&self, g: &Graph) -> Result<(), crate::monoid::ReplayError> {
        use crate::monoid::ReplayError;
        for (start, steps, side) in [
            (&self.left_start, &self.left, "left"),
            (&self.right_start, &self.right, "right"),
        ] {
            let mut cur = start.clone();
            for (k, step) in steps.iter().enumerate() {
                let (v, i) = step.at;
                if cur.coefficient(v, i).is_zero() || g.is_sink(v) {
                    return Err(ReplayError(format!(
                        "{side} step {k}: cannot rewrite {}",
                        g.name(v)
                    )));
                }
                let next = apply_graded(g, &cur, v, i);
                if next != step.result {
                    return Err(ReplayError(format!("{side} step {k}: result mismatch")));
                }
                cur = next;
            }
            if cur != self.common {
                return Err(ReplayError(format!(
                    "{side} chain misses the common element"
                )));
            }
        }
        Ok(())
    }

    /// The same chains with every index moved by `n`.
    pub fn shifted(&self, n: Shift) -> GradedCertificate {
        let steps = |s: &[RewriteStep<GradedElement, GradedGenerator>]| {
            s.iter()
                .map(|st| RewriteStep {
                    at: (st.at.0, st.at.1 + n),
                    result: st.result.shift(n),
                })
                .collect()
        };
        Certificate {
            left_start: self.left_start.shift(n),
            right_start: self.right_start.shift(n),
            left: steps(&self.left),
            right: steps(&self.right),
            common: self.common.shift(n),
        }
    }
}

pub fn graded_decide_equal(
    g: &Graph,
    a: &GradedElement,
    b: &GradedElement,
    budget: &SearchBudget,
) -> GradedVerdict {
    GradedEngine::new(g).decide_equal(a, b, budget)
}

pub fn graded_serre_check(
    g: &Graph,
    budget: &SearchBudget,
    window: ShiftWindow,
) -> GradedSerreReport {
    GradedEngine::new(g).serre_check(budget, window)
}
