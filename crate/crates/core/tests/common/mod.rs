#![allow(dead_code)]

use std::collections::BTreeSet;

use ribbon_tcft::StableRibbonGraph;

/// Partner and next-in-cycle tables of a graph.
pub fn tables(g: &StableRibbonGraph) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let h = g.half_edges();
    let mut iota = vec![0; h];
    for p in g.edges() {
        iota[p[0]] = p[1];
        iota[p[1]] = p[0];
    }
    let mut sigma = vec![0; h];
    let mut vertex = vec![0; h];
    for (v, s) in g.vertices().iter().enumerate() {
        for c in &s.cycles {
            for (i, &x) in c.iter().enumerate() {
                sigma[x] = c[(i + 1) % c.len()];
                vertex[x] = v;
            }
        }
    }
    (iota, sigma, vertex)
}

fn edge_colour(g: &StableRibbonGraph) -> Vec<bool> {
    let mut out = vec![false; g.half_edges()];
    for (e, p) in g.edges().iter().enumerate() {
        out[p[0]] = g.is_white(e);
        out[p[1]] = g.is_white(e);
    }
    out
}

/// Maps from `a` to `b` commuting with partner and next-in-cycle, found by
/// propagation from the image of half-edge 0. Only valid for graphs whose
/// vertices are all disks.
pub fn isomorphisms(a: &StableRibbonGraph, b: &StableRibbonGraph) -> Vec<Vec<usize>> {
    let n = a.half_edges();
    if n != b.half_edges()
        || a.vertices().len() != b.vertices().len()
        || a.num_edges() != b.num_edges()
    {
        return vec![];
    }
    if n == 0 {
        return vec![vec![]];
    }
    let (ia, sa, _) = tables(a);
    let (ib, sb, _) = tables(b);
    let (wa, wb) = (edge_colour(a), edge_colour(b));
    let mut out = Vec::new();
    'target: for t in 0..n {
        let mut map = vec![usize::MAX; n];
        map[0] = t;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            let y = map[x];
            if wa[x] != wb[y] {
                continue 'target;
            }
            for (nx, ny) in [(ia[x], ib[y]), (sa[x], sb[y])] {
                if map[nx] == usize::MAX {
                    map[nx] = ny;
                    stack.push(nx);
                } else if map[nx] != ny {
                    continue 'target;
                }
            }
        }
        if map.contains(&usize::MAX) || map.iter().collect::<BTreeSet<_>>().len() != n {
            continue;
        }
        out.push(map);
    }
    out
}

/// Every composition of `total` into parts of size at least 3, as
/// non-increasing sequences.
fn degree_partitions(total: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if total == 0 {
        out.push(acc.clone());
        return;
    }
    for d in (3..=max.min(total)).rev() {
        acc.push(d);
        degree_partitions(total - d, d, acc, out);
        acc.pop();
    }
}

fn matchings(free: &mut Vec<usize>, pairs: &mut Vec<[usize; 2]>, out: &mut Vec<Vec<[usize; 2]>>) {
    if free.is_empty() {
        out.push(pairs.clone());
        return;
    }
    let a = free.remove(0);
    for i in 0..free.len() {
        let b = free.remove(i);
        pairs.push([a, b]);
        matchings(free, pairs, out);
        pairs.pop();
        free.insert(i, b);
    }
    free.insert(0, a);
}

/// Pure ribbon graphs of type `(g, n)` with exactly `edges` edges, one per
/// isomorphism class, found by exhaustive search.
pub fn brute_force_pure(g: usize, n: usize, edges: usize) -> Vec<StableRibbonGraph> {
    let h = 2 * edges;
    let mut parts = Vec::new();
    degree_partitions(h, h, &mut vec![], &mut parts);
    let mut reps: Vec<StableRibbonGraph> = Vec::new();
    for degrees in parts {
        let mut cycles = Vec::new();
        let mut next = 0;
        for d in &degrees {
            cycles.push((next..next + d).collect::<Vec<_>>());
            next += d;
        }
        let mut all = Vec::new();
        matchings(&mut (0..h).collect(), &mut vec![], &mut all);
        for m in all {
            let Ok(gr) = StableRibbonGraph::ribbon(cycles.clone(), m) else {
                continue;
            };
            if gr.surface_invariants().unwrap() != (g, n) {
                continue;
            }
            if reps.iter().all(|r| isomorphisms(r, &gr).is_empty()) {
                reps.push(gr);
            }
        }
    }
    reps
}

/// `End(Q^{1|2})` with `d = [D, -]`, `D` sending the first odd basis vector
/// to the even one. Its cohomology is one-dimensional and several cells
/// carry nonzero values.
pub fn rank_one_endomorphisms() -> ribbon_tcft::DgFrobeniusAlgebra {
    let mut op = ribbon_tcft::linalg::Matrix::zeros(3, 3);
    op[(0, 1)] = ribbon_tcft::scalar::one();
    ribbon_tcft::DgFrobeniusAlgebra::endomorphisms(1, 2, &op).unwrap()
}
