//! The Grothendieck group of the graph monoid: `Z^{E⁰}` modulo the columns of
//! the vertex relation matrix, presented through its Smith normal form.
//!
//! Coordinates put the torsion summands first, in divisor order, followed by
//! the free summands. Each coordinate is normalised against the order unit
//! `[1_E]`: a torsion coordinate in which the unit is invertible is rescaled
//! so the unit reads `1`, and a free coordinate is signed so the unit (or,
//! when the unit vanishes there, the first vertex that does not) is positive.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::element::MonoidElement;
use crate::graph::Graph;
use crate::snf::{smith_normal_form, IntMatrix};

/// One row per vertex, one column per regular vertex `v`:
/// `e_v - Σ_{e ∈ s⁻¹(v)} e_{r(e)}`. Sinks contribute no relation.
pub fn relation_matrix(g: &Graph) -> IntMatrix {
    let n = g.vertex_count();
    let regular = g.regular_vertices();
    let cols = regular.len();
    let mut m = IntMatrix::with_shape(n, cols, vec![BigInt::zero(); n * cols]);
    for (j, &v) in regular.members().iter().enumerate() {
        m[(v, j)] += 1;
        for &r in g.out_ranges(v) {
            m[(r, j)] -= 1;
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Data {
    pub free_rank: usize,
    /// Invariant factors `≥ 2`, each dividing the next.
    pub torsion: Vec<BigInt>,
    /// Class of each vertex, indexed by vertex.
    pub vertex_classes: Vec<Vec<BigInt>>,
    /// Class of `1_E`.
    pub unit: Vec<BigInt>,
    // linear map Z^{E⁰} -> coordinates, one row per coordinate
    coordinate_rows: Vec<Vec<BigInt>>,
    vertex_names: Vec<String>,
}

/// Integers `k` with `k · [1_E] = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Multiples {
    None,
    /// The unit has infinite order and exactly one `k` works.
    Exactly(BigInt),
    /// All `k ≡ rep (mod modulus)`, with `0 ≤ rep < modulus`.
    Residue {
        rep: BigInt,
        modulus: BigInt,
    },
}

/// Whether `[1_E]` generates K₀, with `m_v` such that `[v] = m_v [1_E]` when it does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGeneration {
    pub generates: bool,
    pub multipliers: Option<Vec<BigInt>>,
}

pub fn k0_of_graph(g: &Graph) -> K0Data {
    K0Data::of_graph(g)
}

pub fn class_in_k0(g: &Graph, a: &MonoidElement) -> Vec<BigInt> {
    K0Data::of_graph(g).class_of(a)
}

pub fn unit_generates_k0(g: &Graph) -> UnitGeneration {
    K0Data::of_graph(g).unit_generation()
}

impl K0Data {
    pub fn of_graph(g: &Graph) -> Self {
        let n = g.vertex_count();
        let smith = smith_normal_form(&relation_matrix(g));
        let diag = smith.diagonal.diagonal();
        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut free_rows = Vec::new();
        for i in 0..n {
            let d = diag.get(i).cloned().unwrap_or_default();
            if d.is_zero() {
                free_rows.push(smith.left.row(i).to_vec());
            } else if d > BigInt::one() {
                torsion.push(d);
                torsion_rows.push(smith.left.row(i).to_vec());
            }
        }
        let free_rank = free_rows.len();
        let mut coordinate_rows = torsion_rows;
        coordinate_rows.extend(free_rows);

        let mut data = K0Data {
            free_rank,
            torsion,
            vertex_classes: Vec::new(),
            unit: Vec::new(),
            coordinate_rows,
            vertex_names: g.names().to_vec(),
        };
        data.normalise(n);
        data.vertex_classes = (0..n)
            .map(|v| data.class_of(&MonoidElement::vertex(v)))
            .collect();
        data.unit = data.class_of(&MonoidElement::unit(g));
        data
    }

    fn normalise(&mut self, n: usize) {
        let ones = vec![BigInt::one(); n];
        let t = self.torsion.len();
        for i in 0..self.coordinate_rows.len() {
            let row = &mut self.coordinate_rows[i];
            let unit_coord: BigInt = row.iter().zip(&ones).map(|(a, b)| a * b).sum();
            if i < t {
                let d = &self.torsion[i];
                let c = unit_coord.mod_floor(d);
                let scale = mod_inverse(&c, d).unwrap_or_else(BigInt::one);
                for x in row.iter_mut() {
                    *x = (&*x * &scale).mod_floor(d);
                }
            } else {
                let lead = if unit_coord.is_zero() {
                    row.iter()
                        .find(|x| !x.is_zero())
                        .cloned()
                        .unwrap_or_default()
                } else {
                    unit_coord
                };
                if lead.is_negative() {
                    for x in row.iter_mut() {
                        *x = -std::mem::take(x);
                    }
                }
            }
        }
    }

    /// Number of coordinates (torsion first, then free).
    pub fn dimension(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn class_of(&self, a: &MonoidElement) -> Vec<BigInt> {
        let mut coeffs = vec![BigInt::zero(); self.vertex_names.len()];
        for (v, c) in a.terms() {
            coeffs[*v] = BigInt::from(c.clone());
        }
        self.class_of_vector(&coeffs)
    }

    pub fn class_of_dense(&self, coeffs: &[u32]) -> Vec<BigInt> {
        let v: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        self.class_of_vector(&v)
    }

    /// Class of an integer combination of vertices (a formal difference).
    pub fn class_of_vector(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let raw: Vec<BigInt> = self
            .coordinate_rows
            .iter()
            .map(|row| row.iter().zip(coeffs).map(|(a, b)| a * b).sum())
            .collect();
        self.reduce(raw)
    }

    pub fn reduce(&self, mut class: Vec<BigInt>) -> Vec<BigInt> {
        for (x, d) in class.iter_mut().zip(&self.torsion) {
            *x = x.mod_floor(d);
        }
        class
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        self.reduce(a.iter().map(|x| k * x).collect())
    }

    pub fn is_trivial(&self) -> bool {
        self.dimension() == 0
    }

    /// `Some(n)` when the group is `Z/nZ` (n = 1 for the trivial group).
    pub fn cyclic_order(&self) -> Option<BigInt> {
        match (self.free_rank, self.torsion.as_slice()) {
            (0, []) => Some(BigInt::one()),
            (0, [d]) => Some(d.clone()),
            _ => None,
        }
    }

    /// Additive order of `[1_E]`, `None` when infinite.
    pub fn unit_order(&self) -> Option<BigInt> {
        let t = self.torsion.len();
        if self.unit[t..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.unit[..t]
                .iter()
                .zip(&self.torsion)
                .fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / x.gcd(d)))),
        )
    }

    /// Solves `k · [1_E] = target` over the integers.
    pub fn solve_multiple(&self, target: &[BigInt]) -> Multiples {
        let t = self.torsion.len();
        let (unit_tor, unit_free) = self.unit.split_at(t);
        let (target_tor, target_free) = target.split_at(t);

        if unit_free.iter().any(|x| !x.is_zero()) {
            let mut k: Option<BigInt> = None;
            for (u, c) in unit_free.iter().zip(target_free) {
                if u.is_zero() {
                    if !c.is_zero() {
                        return Multiples::None;
                    }
                    continue;
                }
                if !c.is_multiple_of(u) {
                    return Multiples::None;
                }
                let q = c / u;
                match &k {
                    Some(prev) if *prev != q => return Multiples::None,
                    _ => k = Some(q),
                }
            }
            let k = k.expect("some free unit coordinate is nonzero");
            let ok = unit_tor
                .iter()
                .zip(target_tor)
                .zip(&self.torsion)
                .all(|((u, c), d)| (&k * u - c).is_multiple_of(d));
            return if ok {
                Multiples::Exactly(k)
            } else {
                Multiples::None
            };
        }

        if target_free.iter().any(|x| !x.is_zero()) {
            return Multiples::None;
        }
        let mut rep = BigInt::zero();
        let mut modulus = BigInt::one();
        for ((u, c), d) in unit_tor.iter().zip(target_tor).zip(&self.torsion) {
            let Some((r, m)) = solve_linear_congruence(u, c, d) else {
                return Multiples::None;
            };
            let Some((r2, m2)) = crt(&rep, &modulus, &r, &m) else {
                return Multiples::None;
            };
            rep = r2;
            modulus = m2;
        }
        Multiples::Residue { rep, modulus }
    }

    pub fn unit_generation(&self) -> UnitGeneration {
        let generates = match (self.free_rank, self.torsion.as_slice()) {
            (0, []) => true,
            (0, [d]) => self.unit[0].gcd(d).is_one(),
            (1, []) => self.unit[0].abs().is_one(),
            _ => false,
        };
        let multipliers = generates.then(|| {
            self.vertex_classes
                .iter()
                .map(|c| match self.solve_multiple(c) {
                    Multiples::Exactly(k) => k,
                    Multiples::Residue { rep, .. } => rep,
                    Multiples::None => unreachable!("a generator reaches every class"),
                })
                .collect()
        });
        UnitGeneration {
            generates,
            multipliers,
        }
    }

    /// Human-readable group, e.g. `Z`, `Z/2Z`, `Z^2 ⊕ Z/3Z`, `0`.
    pub fn group_description(&self) -> String {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}Z")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.insert(0, "Z".into()),
            r => parts.insert(0, format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }

    pub fn to_json(&self) -> Value {
        let mut vertices = Map::new();
        for (name, class) in self.vertex_names.iter().zip(&self.vertex_classes) {
            vertices.insert(name.clone(), ints_json(class));
        }
        json!({
            "free_rank": self.free_rank,
            "torsion": ints_json(&self.torsion),
            "unit": ints_json(&self.unit),
            "vertices": vertices,
        })
    }
}

pub(crate) fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub(crate) fn uint_json(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub(crate) fn ints_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_json).collect())
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Solutions of `u·k ≡ c (mod d)` as `k ≡ r (mod m)`.
fn solve_linear_congruence(u: &BigInt, c: &BigInt, d: &BigInt) -> Option<(BigInt, BigInt)> {
    let g = u.gcd(d);
    if !c.is_multiple_of(&g) {
        return None;
    }
    let m = d / &g;
    if m.is_one() {
        return Some((BigInt::zero(), m));
    }
    let inv = mod_inverse(&(u / &g).mod_floor(&m), &m)?;
    Some((((c / &g) * inv).mod_floor(&m), m))
}

fn crt(a1: &BigInt, m1: &BigInt, a2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    let g = m1.gcd(m2);
    let diff = a2 - a1;
    if !diff.is_multiple_of(&g) {
        return None;
    }
    let l = m1.lcm(m2);
    let m2g = m2 / &g;
    let t = if m2g.is_one() {
        BigInt::zero()
    } else {
        ((&diff / &g) * mod_inverse(&(m1 / &g).mod_floor(&m2g), &m2g)?).mod_floor(&m2g)
    };
    Some(((a1 + m1 * t).mod_floor(&l), l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
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
    fn relation_matrices() {
        assert_eq!(
            relation_matrix(&Graph::rose(2)),
            IntMatrix::from_rows(&[vec![-1]])
        );
        for n in 0..5i64 {
            assert_eq!(
                relation_matrix(&Graph::rose(n as usize + 1)),
                IntMatrix::from_rows(&[vec![-n]])
            );
        }
        let sink = relation_matrix(&Graph::rose(0));
        assert_eq!((sink.rows(), sink.cols()), (1, 0));
        assert_eq!(
            relation_matrix(&ex34_2()),
            IntMatrix::from_rows(&[vec![0, 0], vec![-1, -1]])
        );
        assert_eq!(
            relation_matrix(&ex34_1()),
            IntMatrix::from_rows(&[vec![1, -1, -1], vec![-1, 0, 0], vec![-1, 0, 0]])
        );
    }

    #[test]
    fn roses_give_cyclic_groups_with_unit_one() {
        for n in 1..=8u32 {
            let k0 = k0_of_graph(&Graph::rose(n as usize + 1));
            if n == 1 {
                assert!(k0.is_trivial());
            } else {
                assert_eq!(k0.torsion, ints(&[n as i64]));
                assert_eq!(k0.free_rank, 0);
                assert_eq!(k0.unit, ints(&[1]));
            }
        }
    }

    #[test]
    fn stably_free_examples() {
        let k0 = k0_of_graph(&ex34_1());
        assert_eq!((k0.free_rank, k0.torsion.len()), (1, 0));
        assert_eq!(k0.unit, ints(&[0]));
        assert!(!k0.unit_generation().generates);

        let g = ex34_2();
        let k0 = k0_of_graph(&g);
        assert_eq!((k0.free_rank, k0.torsion.len()), (1, 0));
        assert_eq!(k0.unit, ints(&[1]));
        assert_eq!(k0.vertex_classes, vec![ints(&[1]), ints(&[0])]);
        let gen = k0.unit_generation();
        assert!(gen.generates);
        assert_eq!(gen.multipliers, Some(ints(&[1, 0])));
    }

    #[test]
    fn sink_keeps_a_free_summand() {
        let k0 = k0_of_graph(&Graph::rose(0));
        assert_eq!((k0.free_rank, k0.unit.clone()), (1, ints(&[1])));
        assert_eq!(k0.unit_order(), None);
        let k0 = k0_of_graph(&Graph::rose(1));
        assert_eq!((k0.free_rank, k0.unit.clone()), (1, ints(&[1])));
    }

    #[test]
    fn unit_generation_in_torsion() {
        let gen = unit_generates_k0(&Graph::rose(3));
        assert!(gen.generates);
        assert_eq!(gen.multipliers, Some(ints(&[1])));
        assert!(unit_generates_k0(&Graph::rose(2)).generates);
    }

    #[test]
    fn classes_add_and_sum_to_unit() {
        let g = Graph::rose(2).cuntz_splice("u").unwrap();
        let k0 = k0_of_graph(&g);
        assert!(k0.is_trivial());
        assert_eq!(class_in_k0(&g, &MonoidElement::vertex(0)), k0.unit);
        let g = ex34_1();
        let k0 = k0_of_graph(&g);
        let sum = k0
            .vertex_classes
            .iter()
            .fold(vec![BigInt::zero(); k0.dimension()], |acc, c| {
                k0.add(&acc, c)
            });
        assert_eq!(sum, k0.unit);
        assert!(k0
            .class_of(&MonoidElement::zero())
            .iter()
            .all(Zero::is_zero));
    }

    #[test]
    fn solving_for_multiples() {
        // matrix graph (d, n): Z/(n-1), unit = d·[v]
        let k0 = k0_of_graph(&Graph::matrix_graph(3, 4).unwrap());
        assert_eq!(k0.torsion, ints(&[3]));
        assert_eq!(k0.solve_multiple(&k0.vertex_classes[1]), Multiples::None);
        let k0 = k0_of_graph(&Graph::matrix_graph(2, 6).unwrap());
        assert_eq!(
            k0.solve_multiple(&k0.vertex_classes[1]),
            Multiples::Residue {
                rep: BigInt::from(3),
                modulus: BigInt::from(5)
            }
        );
        let k0 = k0_of_graph(&ex34_2());
        assert_eq!(
            k0.solve_multiple(&ints(&[1])),
            Multiples::Exactly(BigInt::one())
        );
        assert_eq!(
            k0.solve_multiple(&ints(&[0])),
            Multiples::Exactly(BigInt::zero())
        );
        let k0 = k0_of_graph(&ex34_1());
        assert_eq!(k0.unit_order(), Some(BigInt::one()));
        assert_eq!(k0.solve_multiple(&k0.vertex_classes[1]), Multiples::None);
    }

    #[test]
    fn crt_combination() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(crt(&b(2), &b(3), &b(3), &b(5)), Some((b(8), b(15))));
        assert_eq!(crt(&b(1), &b(4), &b(3), &b(6)), Some((b(9), b(12))));
        assert_eq!(crt(&b(1), &b(4), &b(2), &b(6)), None);
        assert_eq!(solve_linear_congruence(&b(2), &b(1), &b(4)), None);
        assert_eq!(
            solve_linear_congruence(&b(2), &b(2), &b(4)),
            Some((b(1), b(2)))
        );
    }

    #[test]
    fn json_shape() {
        let v = k0_of_graph(&ex34_1()).to_json();
        assert_eq!(v["free_rank"], json!(1));
        assert_eq!(v["torsion"], json!([]));
        assert_eq!(v["unit"], json!([0]));
        let keys: Vec<_> = v["vertices"].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["u", "v", "z"]);
    }
}
