use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::canon::{canonical_form, CanonKey};
use super::ribbon::{StableRibbonGraph, VertexSurface};
use crate::error::{Error, Result};

/// Largest trivalent graph the enumerator will generate from.
pub const MAX_TRIVALENT_EDGES: usize = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumOptions {
    /// Include graphs with non-disk vertex surfaces.
    pub stable: bool,
    /// Include every black/white colouring.
    pub colored: bool,
}

/// One canonical representative per isomorphism class of type `(g, n)` with
/// at most `max_edges` edges, sorted by black edge count, then edge count,
/// then key.
pub fn enumerate(
    g: usize,
    n: usize,
    max_edges: usize,
    opts: EnumOptions,
) -> Result<Vec<StableRibbonGraph>> {
    if 2 * g + n <= 2 {
        return Err(Error::Unstable(g, n));
    }
    let top = 3 * (2 * g + n - 2);
    if top > MAX_TRIVALENT_EDGES {
        return Err(Error::ResourceBound(format!(
            "type ({g},{n}) needs trivalent graphs with {top} edges; limit is {MAX_TRIVALENT_EDGES}"
        )));
    }
    let mut classes: BTreeMap<CanonKey, StableRibbonGraph> = BTreeMap::new();
    for t in trivalent(top, g, n) {
        let c = canonical_form(&t);
        classes.entry(c.key).or_insert(c.graph);
    }
    let mut queue: VecDeque<StableRibbonGraph> = classes.values().cloned().collect();
    while let Some(gr) = queue.pop_front() {
        let or = gr.default_orientation();
        for e in 0..gr.num_edges() {
            if !opts.stable && gr.is_loop(e) {
                continue;
            }
            let face = gr.contract_edge(e, &or)?.graph;
            let c = canonical_form(&face);
            if let std::collections::btree_map::Entry::Vacant(slot) = classes.entry(c.key) {
                slot.insert(c.graph.clone());
                queue.push_back(c.graph);
            }
        }
    }
    let mut out: Vec<StableRibbonGraph> = classes
        .into_values()
        .filter(|gr| gr.num_edges() <= max_edges)
        .collect();
    if opts.colored {
        let mut colored: BTreeMap<CanonKey, StableRibbonGraph> = BTreeMap::new();
        for gr in &out {
            let m = gr.num_edges();
            for mask in 0u32..(1 << m) {
                let white: BTreeSet<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
                let c = canonical_form(&gr.with_white(white)?);
                colored.entry(c.key).or_insert(c.graph);
            }
        }
        out = colored.into_values().collect();
    }
    let mut keyed: Vec<(usize, usize, CanonKey, StableRibbonGraph)> = out
        .into_iter()
        .map(|gr| {
            (
                gr.black_edges().len(),
                gr.num_edges(),
                canonical_form(&gr).key,
                gr,
            )
        })
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    Ok(keyed.into_iter().map(|k| k.3).collect())
}

/// Connected trivalent ribbon graphs with `edges` edges and type `(g, n)`.
/// Vertex `k` carries half-edges `3k, 3k+1, 3k+2` in that cyclic order.
fn trivalent(edges: usize, g: usize, n: usize) -> Vec<StableRibbonGraph> {
    let h = 2 * edges;
    let cycles: Vec<Vec<usize>> = (0..h / 3)
        .map(|k| vec![3 * k, 3 * k + 1, 3 * k + 2])
        .collect();
    let mut out = Vec::new();
    let mut free: Vec<usize> = (0..h).collect();
    let mut pairs = Vec::new();
    matchings(&mut free, &mut pairs, &mut |m| {
        let vertices = cycles.iter().cloned().map(VertexSurface::disk).collect();
        if let Ok(gr) = StableRibbonGraph::new(h, m.to_vec(), vertices, BTreeSet::new()) {
            if gr.surface_invariants().ok() == Some((g, n)) {
                out.push(gr);
            }
        }
    });
    out
}

fn matchings(
    free: &mut Vec<usize>,
    pairs: &mut Vec<[usize; 2]>,
    visit: &mut dyn FnMut(&[[usize; 2]]),
) {
    if free.is_empty() {
        visit(pairs);
        return;
    }
    let a = free.remove(0);
    for i in 0..free.len() {
        let b = free.remove(i);
        pairs.push([a, b]);
        matchings(free, pairs, visit);
        pairs.pop();
        free.insert(i, b);
    }
    free.insert(0, a);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(g: usize, n: usize, stable: bool) -> usize {
        enumerate(
            g,
            n,
            6,
            EnumOptions {
                stable,
                colored: false,
            },
        )
        .unwrap()
        .len()
    }

    #[test]
    fn pure_counts_small_types() {
        assert_eq!(
            enumerate(0, 3, 3, EnumOptions::default())
                .unwrap()
                .iter()
                .filter(|g| g.num_edges() == 3)
                .count(),
            2
        );
        let torus = enumerate(1, 1, 3, EnumOptions::default()).unwrap();
        assert_eq!(torus.len(), 2);
        assert_eq!(
            torus.iter().map(|g| g.num_edges()).collect::<Vec<_>>(),
            vec![2, 3]
        );
    }

    #[test]
    fn stable_includes_fully_contracted_vertex() {
        let all = enumerate(
            1,
            1,
            3,
            EnumOptions {
                stable: true,
                colored: false,
            },
        )
        .unwrap();
        assert!(all.iter().any(|g| g.num_edges() == 0));
        assert!(count(1, 1, true) > count(1, 1, false));
    }

    #[test]
    fn every_class_has_the_requested_type() {
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
            for gr in enumerate(
                g,
                n,
                6,
                EnumOptions {
                    stable: true,
                    colored: false,
                },
            )
            .unwrap()
            {
                assert_eq!(gr.surface_invariants().unwrap(), (g, n));
                assert!(gr.is_stable());
            }
        }
    }

    #[test]
    fn bounds_are_reported() {
        assert_eq!(
            enumerate(0, 2, 3, EnumOptions::default()).unwrap_err(),
            Error::Unstable(0, 2)
        );
        assert!(matches!(
            enumerate(2, 1, 9, EnumOptions::default()),
            Err(Error::ResourceBound(_))
        ));
    }

    #[test]
    fn order_is_deterministic() {
        let a = enumerate(
            0,
            4,
            6,
            EnumOptions {
                stable: true,
                colored: false,
            },
        )
        .unwrap();
        let b = enumerate(
            0,
            4,
            6,
            EnumOptions {
                stable: true,
                colored: false,
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
