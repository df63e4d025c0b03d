//! Bounded bidirectional breadth-first search for a common descendant under a
//! one-step rewrite relation. Shared by the graph monoid and the talented
//! monoid engines.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

/// Limits that make an otherwise unbounded closure search terminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Bound on the combined depth of the two rewrite paths.
    pub max_steps: usize,
    /// Elements whose coefficient sum exceeds this are pruned.
    pub max_element_size: u64,
    /// Bound on the number of distinct elements visited across both sides.
    pub max_frontier: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_steps: 24,
            max_element_size: 512,
            max_frontier: 200_000,
        }
    }
}

impl SearchBudget {
    /// Rejects zero limits.
    pub fn new(
        max_steps: usize,
        max_element_size: u64,
        max_frontier: usize,
    ) -> Result<Self, String> {
        if max_steps == 0 || max_element_size == 0 || max_frontier == 0 {
            return Err("search budgets must be positive".into());
        }
        Ok(SearchBudget {
            max_steps,
            max_element_size,
            max_frontier,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The two paths reached the combined depth bound.
    StepLimit,
    /// Too many distinct elements were visited.
    FrontierLimit,
    /// Every unexplored element exceeds the size bound.
    SizeLimit,
}

/// What a search consumed before giving up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub depth_left: usize,
    pub depth_right: usize,
    pub visited: usize,
    pub pruned_by_size: bool,
    pub stop: Option<StopReason>,
    pub budget: SearchBudget,
}

pub(crate) trait RewriteSystem {
    type State: Clone + Eq + Hash + Ord;
    type Label: Clone;

    /// Appends every one-step rewrite of `s`, labelled by the rewritten generator.
    fn successors(&self, s: &Self::State, out: &mut Vec<(Self::Label, Self::State)>);

    fn size(&self, s: &Self::State) -> u64;
}

pub(crate) type Path<L, S> = Vec<(L, S)>;

pub(crate) enum Outcome<L, S> {
    Met {
        left: Path<L, S>,
        right: Path<L, S>,
        common: S,
    },
    /// Both closures are finite, fully explored and disjoint.
    Disjoint {
        stats: SearchStats,
    },
    Exhausted {
        stats: SearchStats,
    },
}

struct Side<L, S> {
    nodes: Vec<(S, Option<(usize, L)>)>,
    index: HashMap<S, usize>,
    frontier: Vec<usize>,
    depth: usize,
    pruned: bool,
}

impl<L: Clone, S: Clone + Eq + Hash + Ord> Side<L, S> {
    fn new(root: S) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side {
            nodes: vec![(root, None)],
            index,
            frontier: vec![0],
            depth: 0,
            pruned: false,
        }
    }

    fn path_to(&self, mut idx: usize) -> Path<L, S> {
        let mut out = Vec::new();
        while let Some((parent, label)) = &self.nodes[idx].1 {
            out.push((label.clone(), self.nodes[idx].0.clone()));
            idx = *parent;
        }
        out.reverse();
        out
    }
}

enum Expansion {
    Met(usize, usize),
    Overflow,
    Done,
}

/// Expands `side` by one level, checking each new element against `other`.
fn expand<R: RewriteSystem>(
    sys: &R,
    side: &mut Side<R::Label, R::State>,
    other: &Side<R::Label, R::State>,
    budget: &SearchBudget,
) -> Expansion {
    let mut next = Vec::new();
    let mut buf = Vec::new();
    let frontier = std::mem::take(&mut side.frontier);
    for parent in frontier {
        buf.clear();
        sys.successors(&side.nodes[parent].0, &mut buf);
        for (label, s) in buf.drain(..) {
            if sys.size(&s) > budget.max_element_size {
                side.pruned = true;
                continue;
            }
            if side.index.contains_key(&s) {
                continue;
            }
            let idx = side.nodes.len();
            side.index.insert(s.clone(), idx);
            let hit = other.index.get(&s).copied();
            side.nodes.push((s, Some((parent, label))));
            if let Some(j) = hit {
                return Expansion::Met(idx, j);
            }
            next.push(idx);
            if side.nodes.len() + other.nodes.len() > budget.max_frontier {
                return Expansion::Overflow;
            }
        }
    }
    // canonical order keeps certificates reproducible
    next.sort_by(|&x, &y| side.nodes[x].0.cmp(&side.nodes[y].0));
    side.frontier = next;
    side.depth += 1;
    Expansion::Done
}

pub(crate) fn bidirectional<R: RewriteSystem>(
    sys: &R,
    a: R::State,
    b: R::State,
    budget: &SearchBudget,
) -> Outcome<R::Label, R::State> {
    let mut left = Side::new(a);
    let mut right = Side::new(b);
    let stats = |l: &Side<_, _>, r: &Side<_, _>, stop| SearchStats {
        depth_left: l.depth,
        depth_right: r.depth,
        visited: l.nodes.len() + r.nodes.len(),
        pruned_by_size: l.pruned || r.pruned,
        stop,
        budget: *budget,
    };

    if left.nodes[0].0 == right.nodes[0].0 {
        let common = left.nodes[0].0.clone();
        return Outcome::Met {
            left: Vec::new(),
            right: Vec::new(),
            common,
        };
    }
    for side in [&mut left, &mut right] {
        if sys.size(&side.nodes[0].0) > budget.max_element_size {
            side.frontier.clear();
            side.pruned = true;
        }
    }

    loop {
        if left.frontier.is_empty() && right.frontier.is_empty() {
            return if left.pruned || right.pruned {
                Outcome::Exhausted {
                    stats: stats(&left, &right, Some(StopReason::SizeLimit)),
                }
            } else {
                Outcome::Disjoint {
                    stats: stats(&left, &right, None),
                }
            };
        }
        if left.depth + right.depth >= budget.max_steps {
            return Outcome::Exhausted {
                stats: stats(&left, &right, Some(StopReason::StepLimit)),
            };
        }
        // balance total work; a thin frontier must not starve the other side
        let expand_left = !left.frontier.is_empty()
            && (right.frontier.is_empty() || left.nodes.len() <= right.nodes.len());
        let result = if expand_left {
            expand(sys, &mut left, &right, budget)
        } else {
            expand(sys, &mut right, &left, budget)
        };
        match result {
            Expansion::Done => {}
            Expansion::Overflow => {
                return Outcome::Exhausted {
                    stats: stats(&left, &right, Some(StopReason::FrontierLimit)),
                }
            }
            Expansion::Met(mine, theirs) => {
                let (li, ri) = if expand_left {
                    (mine, theirs)
                } else {
                    (theirs, mine)
                };
                return Outcome::Met {
                    left: left.path_to(li),
                    right: right.path_to(ri),
                    common: left.nodes[li].0.clone(),
                };
            }
        }
    }
}

/// Breadth-first closure of `start` to depth `max_steps`, pruned by size and
/// element count. Returns the visited states in discovery order and whether
/// anything was cut off.
pub(crate) fn closure<R: RewriteSystem>(
    sys: &R,
    start: R::State,
    budget: &SearchBudget,
) -> (Vec<R::State>, bool) {
    if sys.size(&start) > budget.max_element_size {
        return (vec![start], true);
    }
    let mut side: Side<R::Label, R::State> = Side::new(start);
    let empty: Side<R::Label, R::State> = Side {
        nodes: Vec::new(),
        index: HashMap::new(),
        frontier: Vec::new(),
        depth: 0,
        pruned: false,
    };
    let mut truncated = false;
    while !side.frontier.is_empty() {
        if side.depth >= budget.max_steps {
            truncated = true;
            break;
        }
        if let Expansion::Overflow = expand(sys, &mut side, &empty, budget) {
            truncated = true;
            break;
        }
    }
    truncated |= side.pruned;
    (side.nodes.into_iter().map(|(s, _)| s).collect(), truncated)
}

/// Breadth-first search from `start` for the first state (in discovery
/// order) satisfying `accept`, returning the rewrite path to it.
pub(crate) fn first_match<R: RewriteSystem>(
    sys: &R,
    start: R::State,
    budget: &SearchBudget,
    accept: impl Fn(&R::State) -> bool,
) -> Option<Path<R::Label, R::State>> {
    if accept(&start) {
        return Some(Vec::new());
    }
    if sys.size(&start) > budget.max_element_size {
        return None;
    }
    let mut side: Side<R::Label, R::State> = Side::new(start);
    let mut buf = Vec::new();
    while !side.frontier.is_empty() && side.depth < budget.max_steps {
        let mut next = Vec::new();
        for parent in std::mem::take(&mut side.frontier) {
            buf.clear();
            sys.successors(&side.nodes[parent].0, &mut buf);
            for (label, s) in buf.drain(..) {
                if sys.size(&s) > budget.max_element_size || side.index.contains_key(&s) {
                    continue;
                }
                let idx = side.nodes.len();
                side.index.insert(s.clone(), idx);
                let hit = accept(&s);
                side.nodes.push((s, Some((parent, label))));
                if hit {
                    return Some(side.path_to(idx));
                }
                if side.nodes.len() > budget.max_frontier {
                    return None;
                }
                next.push(idx);
            }
        }
        next.sort_by(|&x, &y| side.nodes[x].0.cmp(&side.nodes[y].0));
        side.frontier = next;
        side.depth += 1;
    }
    None
}
