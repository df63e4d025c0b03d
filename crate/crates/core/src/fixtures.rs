//! Named example graphs. `rose<N>` and `matrix-<d>-<n>` are templates; the
//! rest are fixed.

use crate::error::GraphError;
use crate::graph::Graph;

/// Fixed names plus the two templates, for help text.
pub const FIXTURE_NAMES: [&str; 9] = [
    "e2",
    "e2-minus",
    "rose0",
    "rose1",
    "roseN",
    "matrix-d-n",
    "ex34-1",
    "ex34-2",
    "ex36",
];

/// One vertex with two loops, so `u = 2u`. Its algebra is `L_2`.
pub fn e2() -> Graph {
    Graph::rose(2)
}

/// `E₂` spliced at `u`: relations `u = 2u + v`, `v = u + v + w`, `w = v + w`.
/// Its monoid collapses to the one of `E₂`.
pub fn e2_minus() -> Graph {
    Graph::new(
        &["u", "v", "w"],
        &[
            ("u", "u"),
            ("u", "u"),
            ("u", "v"),
            ("v", "u"),
            ("v", "v"),
            ("v", "w"),
            ("w", "v"),
            ("w", "w"),
        ],
    )
    .expect("fixture is well formed")
}

/// `K₀ = Z` with `[1_E] = 0`: projectives are not even stably free, yet the
/// algebra is purely infinite simple.
pub fn ex34_1() -> Graph {
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
    .expect("fixture is well formed")
}

/// `K₀ = Z` with `[1_E] = 1`: all projectives stably free, IBN holds, but
/// `z` is not free and `{z}` is a proper hereditary saturated set.
pub fn ex34_2() -> Graph {
    Graph::new(
        &["v", "z"],
        &[("v", "v"), ("v", "z"), ("z", "z"), ("z", "z")],
    )
    .expect("fixture is well formed")
}

/// A loop at `u` and the pair `u → v → u`. Graded free: `u = 1_E(1)` and
/// `v = 1_E(2)` in the talented monoid.
pub fn ex36() -> Graph {
    Graph::new(&["u", "v"], &[("u", "u"), ("u", "v"), ("v", "u")]).expect("fixture is well formed")
}

/// Resolves a fixture name, including `rose3` and `matrix-2-5` style
/// templates.
pub fn fixture(name: &str) -> Result<Graph, GraphError> {
    match name {
        "e2" => return Ok(e2()),
        "e2-minus" => return Ok(e2_minus()),
        "ex34-1" => return Ok(ex34_1()),
        "ex34-2" => return Ok(ex34_2()),
        "ex36" => return Ok(ex36()),
        _ => {}
    }
    if let Some(n) = name.strip_prefix("rose") {
        if let Ok(n) = n.parse::<usize>() {
            return Ok(Graph::rose(n));
        }
    }
    if let Some(rest) = name.strip_prefix("matrix-") {
        if let Some((d, n)) = rest.split_once('-') {
            if let (Ok(d), Ok(n)) = (d.parse(), n.parse()) {
                return Graph::matrix_graph(d, n);
            }
        }
    }
    Err(GraphError::InvalidParameter(format!(
        "unknown fixture `{name}`; known: {}",
        FIXTURE_NAMES.join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splice_of_e2_is_e2_minus() {
        assert!(e2()
            .cuntz_splice("u")
            .unwrap()
            .same_labeled_graph(&e2_minus()));
    }

    #[test]
    fn templates_resolve() {
        assert_eq!(fixture("rose5").unwrap().edge_count(), 5);
        assert_eq!(fixture("rose0").unwrap().edge_count(), 0);
        let m = fixture("matrix-3-4").unwrap();
        assert_eq!((m.vertex_count(), m.edge_count()), (2, 6));
        assert!(fixture("matrix-1-4").is_err());
        assert!(fixture("roseX").is_err());
        assert!(fixture("nope").is_err());
    }
}
