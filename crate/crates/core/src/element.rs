//! Elements of the free abelian monoid on the vertices, and their text syntax
//! (`2u + v + 3w`, `0` for the zero element).

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::ElementError;
use crate::graph::{Graph, VertexIndex};

/// A finitely supported vertex multiset. Terms are kept sorted by vertex
/// order with no zero coefficients, so structural equality is equality in
/// the free monoid. Equality in the graph monoid is decided separately.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoidElement {
    terms: Vec<(VertexIndex, BigUint)>,
}

impl MonoidElement {
    pub fn zero() -> Self {
        MonoidElement::default()
    }

    pub fn vertex(v: VertexIndex) -> Self {
        MonoidElement {
            terms: vec![(v, BigUint::from(1u32))],
        }
    }

    /// Builds from arbitrary (vertex, coefficient) pairs; repeated vertices add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (VertexIndex, C)>,
        C: Into<BigUint>,
    {
        let mut out: Vec<(VertexIndex, BigUint)> =
            terms.into_iter().map(|(v, c)| (v, c.into())).collect();
        out.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(VertexIndex, BigUint)> = Vec::with_capacity(out.len());
        for (v, c) in out {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        MonoidElement { terms: merged }
    }

    /// Dense coefficient vector indexed by vertex.
    pub fn from_dense(coeffs: &[u32]) -> Self {
        MonoidElement {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(v, &c)| (v, BigUint::from(c)))
                .collect(),
        }
    }

    /// `1_E`: every vertex with coefficient one.
    pub fn unit(g: &Graph) -> Self {
        Self::from_terms((0..g.vertex_count()).map(|v| (v, 1u32)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(VertexIndex, BigUint)] {
        &self.terms
    }

    pub fn coefficient(&self, v: VertexIndex) -> BigUint {
        self.terms
            .binary_search_by_key(&v, |(u, _)| *u)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Sum of all coefficients.
    pub fn size(&self) -> BigUint {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn add(&self, other: &MonoidElement) -> MonoidElement {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, k: &BigUint) -> MonoidElement {
        Self::from_terms(self.terms.iter().map(|(v, c)| (*v, c * k)))
    }

    /// Dense form with `u32` coefficients, or `None` if a coefficient or
    /// vertex does not fit.
    pub fn to_dense(&self, vertex_count: usize) -> Option<Vec<u32>> {
        let mut out = vec![0u32; vertex_count];
        for (v, c) in &self.terms {
            *out.get_mut(*v)? = c.to_u32()?;
        }
        Some(out)
    }

    pub fn check_vertices(&self, g: &Graph) -> Result<(), ElementError> {
        match self.terms.iter().find(|(v, _)| *v >= g.vertex_count()) {
            Some((v, _)) => Err(ElementError::UnknownVertex(format!("#{v}"))),
            None => Ok(()),
        }
    }

    pub fn parse(g: &Graph, text: &str) -> Result<Self, ElementError> {
        let mut terms = Vec::new();
        for (coeff, name, shift) in parse_terms(g, text, false)? {
            debug_assert!(shift == 0);
            terms.push((g.vertex(name).expect("parse_terms resolves names"), coeff));
        }
        Ok(Self::from_terms(terms))
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (v, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            if *c != BigUint::from(1u32) {
                write!(out, "{c}").unwrap();
            }
            out.push_str(g.name(*v));
        }
        out
    }
}

/// Splits `2u + v(1) + 3w(-2)` into (coefficient, vertex name, shift).
/// Shifts are only accepted when `graded` is set.
pub(crate) fn parse_terms<'a>(
    g: &Graph,
    text: &'a str,
    graded: bool,
) -> Result<Vec<(BigUint, &'a str, i64)>, ElementError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Vec::new());
    }
    let syntax = |term: &str, reason: &str| ElementError::Syntax {
        term: term.to_string(),
        reason: reason.to_string(),
    };
    let mut out = Vec::new();
    for raw in text.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(syntax(raw, "empty term"));
        }
        let (body, shift) = match term.strip_suffix(')') {
            Some(head) => {
                let open = head
                    .rfind('(')
                    .ok_or_else(|| syntax(term, "unbalanced `)`"))?;
                if !graded {
                    return Err(syntax(term, "shifts are only allowed for graded elements"));
                }
                let shift: i64 = head[open + 1..]
                    .trim()
                    .parse()
                    .map_err(|_| syntax(term, "shift is not an integer"))?;
                (head[..open].trim_end(), shift)
            }
            None => (term, 0),
        };
        // a name that is itself a vertex wins over a coefficient split
        if g.vertex(body).is_ok() {
            out.push((BigUint::from(1u32), body, shift));
            continue;
        }
        let digits = body.len() - body.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        let (coeff, name) = body.split_at(digits);
        let name = name.trim_start_matches('*').trim();
        if name.is_empty() {
            return Err(syntax(term, "missing vertex name"));
        }
        let coeff = if coeff.is_empty() {
            BigUint::from(1u32)
        } else {
            coeff.parse().map_err(|_| syntax(term, "bad coefficient"))?
        };
        if g.vertex(name).is_err() {
            return Err(ElementError::UnknownVertex(name.to_string()));
        }
        out.push((coeff, name, shift));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2_minus() -> Graph {
        Graph::rose(2).cuntz_splice("u").unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = MonoidElement::from_terms([(2, 1u32), (0, 2), (2, 0u32), (0, 1)]);
        assert_eq!(
            a.terms(),
            &[(0, BigUint::from(3u32)), (2, BigUint::from(1u32))]
        );
        assert_eq!(a.size(), BigUint::from(4u32));
        assert!(MonoidElement::from_terms([(1, 0u32)]).is_zero());
    }

    #[test]
    fn unit_elements() {
        assert_eq!(
            MonoidElement::unit(&Graph::rose(2)),
            MonoidElement::vertex(0)
        );
        let g = e2_minus();
        assert_eq!(MonoidElement::unit(&g).display(&g), "u + v + w");
        let empty = Graph::new(&[] as &[&str], &[] as &[(&str, &str)]).unwrap();
        assert!(MonoidElement::unit(&empty).is_zero());
    }

    #[test]
    fn parse_and_display() {
        let g = e2_minus();
        let a = MonoidElement::parse(&g, "2u + v + 3w").unwrap();
        assert_eq!(a.display(&g), "2u + v + 3w");
        assert_eq!(MonoidElement::parse(&g, "w + w").unwrap().display(&g), "2w");
        assert!(MonoidElement::parse(&g, "0").unwrap().is_zero());
        assert_eq!(MonoidElement::parse(&g, "3*u").unwrap().display(&g), "3u");
        assert!(matches!(
            MonoidElement::parse(&g, "2x"),
            Err(ElementError::UnknownVertex(_))
        ));
        assert!(matches!(
            MonoidElement::parse(&g, "u +"),
            Err(ElementError::Syntax { .. })
        ));
        assert!(matches!(
            MonoidElement::parse(&g, "u(1)"),
            Err(ElementError::Syntax { .. })
        ));
    }

    #[test]
    fn numeric_vertex_names() {
        let g = Graph::new(&["1", "x1"], &[("1", "x1")]).unwrap();
        assert_eq!(
            MonoidElement::parse(&g, "1 + 2*1").unwrap().display(&g),
            "31"
        );
        assert_eq!(
            MonoidElement::parse(&g, "x1").unwrap(),
            MonoidElement::vertex(1)
        );
    }

    #[test]
    fn arithmetic() {
        let a = MonoidElement::vertex(0);
        let b = MonoidElement::from_terms([(0, 1u32), (1, 2u32)]);
        assert_eq!(a.add(&b).coefficient(0), BigUint::from(2u32));
        assert_eq!(
            b.scale(&BigUint::from(3u32)).coefficient(1),
            BigUint::from(6u32)
        );
        assert_eq!(b.to_dense(3), Some(vec![1, 2, 0]));
        assert_eq!(b.to_dense(1), None);
        assert_eq!(MonoidElement::from_dense(&[1, 2, 0]), b);
    }
}
