use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ribbon::{permutation_sign, Orientation, StableRibbonGraph, VertexSurface};

/// Isomorphism-class key: the lexicographically least traversal code.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(pub Vec<u8>);

impl fmt::Display for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl Serialize for CanonKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CanonKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() % 2 != 0 {
            return Err(serde::de::Error::custom("odd-length key"));
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16))
            .collect::<Result<Vec<_>, _>>()
            .map(CanonKey)
            .map_err(serde::de::Error::custom)
    }
}

/// A graph together with its canonical relabelling.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonKey,
    pub graph: StableRibbonGraph,
    /// `labeling[old half-edge] = canonical half-edge`.
    pub labeling: Vec<usize>,
    /// `edge_map[old edge] = canonical edge`.
    pub edge_map: Vec<usize>,
    /// Automorphisms of the input graph as half-edge permutations.
    pub automorphisms: Vec<Vec<usize>>,
}

impl Canonical {
    /// Canonical orientation (black edges ascending) and the sign relating
    /// it to the transported orientation `or`.
    pub fn transport(&self, or: &Orientation) -> (Orientation, i32) {
        let mapped = Orientation(or.0.iter().map(|&e| self.edge_map[e]).collect());
        let canonical = self.graph.default_orientation();
        let sign = mapped.relative_sign(&canonical);
        (canonical, sign)
    }

    pub fn aut_order(&self) -> usize {
        self.automorphisms.len()
    }

    /// Some automorphism acts by an odd permutation on the black edges.
    pub fn has_reversing_automorphism(&self, original: &StableRibbonGraph) -> bool {
        let edge_of = original.edge_of();
        let black = original.black_edges();
        let index: BTreeMap<usize, usize> =
            black.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        self.automorphisms.iter().any(|phi| {
            let perm: Vec<usize> = black
                .iter()
                .map(|&e| index[&edge_of[phi[original.edges()[e][0]]]])
                .collect();
            permutation_sign(&perm) < 0
        })
    }
}

struct Tables {
    iota: Vec<usize>,
    sigma: Vec<usize>,
    vertex: Vec<usize>,
    white: Vec<bool>,
    genus: Vec<usize>,
    empties: Vec<usize>,
    legs: Vec<Vec<usize>>,
}

impl Tables {
    fn new(g: &StableRibbonGraph) -> Self {
        let edge_of = g.edge_of();
        Tables {
            iota: g.partners(),
            sigma: g.next_in_cycle(),
            vertex: g.vertex_of(),
            white: (0..g.half_edges())
                .map(|h| g.is_white(edge_of[h]))
                .collect(),
            genus: g.vertices().iter().map(|v| v.genus).collect(),
            empties: g
                .vertices()
                .iter()
                .map(VertexSurface::empty_cycles)
                .collect(),
            legs: g.vertices().iter().map(|v| v.legs().collect()).collect(),
        }
    }

    fn code(&self, order: &[usize], label: &[usize]) -> Vec<u8> {
        let nv = self.genus.len();
        let mut rank = vec![usize::MAX; nv];
        let mut by_rank = Vec::with_capacity(nv);
        for &h in order {
            let v = self.vertex[h];
            if rank[v] == usize::MAX {
                rank[v] = by_rank.len();
                by_rank.push(v);
            }
        }
        if by_rank.is_empty() {
            by_rank.push(0);
        }
        let mut out = vec![order.len() as u8, nv as u8];
        for &h in order {
            out.push(label[self.iota[h]] as u8);
            out.push(label[self.sigma[h]] as u8);
            out.push(rank[self.vertex[h]] as u8);
            out.push(self.white[h] as u8);
        }
        for &v in &by_rank {
            out.push(self.genus[v] as u8);
            out.push(self.empties[v] as u8);
        }
        out
    }

    /// Every complete traversal labelling reachable from `order`.
    fn extend(
        &self,
        mut order: Vec<usize>,
        mut label: Vec<usize>,
        mut done: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        loop {
            while done < order.len() {
                let h = order[done];
                for nb in [self.iota[h], self.sigma[h]] {
                    if label[nb] == usize::MAX {
                        label[nb] = order.len();
                        order.push(nb);
                    }
                }
                done += 1;
            }
            if order.len() == label.len() {
                out.push(order);
                return;
            }
            // Other boundary cycles of an already visited vertex.
            let v = order
                .iter()
                .map(|&h| self.vertex[h])
                .find(|&v| self.legs[v].iter().any(|&h| label[h] == usize::MAX))
                .expect("connected graph");
            let free: Vec<usize> = self.legs[v]
                .iter()
                .copied()
                .filter(|&h| label[h] == usize::MAX)
                .collect();
            if free.len() == 1 {
                label[free[0]] = order.len();
                order.push(free[0]);
                continue;
            }
            for h in free {
                let mut o = order.clone();
                let mut l = label.clone();
                l[h] = o.len();
                o.push(h);
                self.extend(o, l, done, out);
            }
            return;
        }
    }
}

/// Canonical relabelling and automorphism group of `g`.
pub fn canonical_form(g: &StableRibbonGraph) -> Canonical {
    let t = Tables::new(g);
    let n = g.half_edges();
    let mut best: Option<Vec<u8>> = None;
    let mut winners: Vec<Vec<usize>> = Vec::new();
    let mut orders = Vec::new();
    if n == 0 {
        orders.push(Vec::new());
    }
    for start in 0..n {
        let mut label = vec![usize::MAX; n];
        label[start] = 0;
        t.extend(vec![start], label, 0, &mut orders);
    }
    for order in orders {
        let mut label = vec![0; n];
        for (i, &h) in order.iter().enumerate() {
            label[h] = i;
        }
        let code = t.code(&order, &label);
        match &best {
            Some(b) if code > *b => {}
            Some(b) if code == *b => winners.push(label),
            _ => {
                best = Some(code);
                winners = vec![label];
            }
        }
    }
    let labeling = winners[0].clone();
    let mut inverse = vec![0; n];
    for (h, &l) in labeling.iter().enumerate() {
        inverse[l] = h;
    }
    let automorphisms = winners
        .iter()
        .map(|w| w.iter().map(|&l| inverse[l]).collect())
        .collect();
    let (graph, edge_map) = relabel_canonically(g, &t, &labeling);
    Canonical {
        key: CanonKey(best.unwrap()),
        graph,
        labeling,
        edge_map,
        automorphisms,
    }
}

fn relabel_canonically(
    g: &StableRibbonGraph,
    t: &Tables,
    labeling: &[usize],
) -> (StableRibbonGraph, Vec<usize>) {
    let mut edges: Vec<(usize, [usize; 2])> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, p)| {
            let (a, b) = (labeling[p[0]], labeling[p[1]]);
            (e, [a.min(b), a.max(b)])
        })
        .collect();
    edges.sort_by_key(|&(_, p)| p[0]);
    let mut edge_map = vec![0; edges.len()];
    for (new, &(old, _)) in edges.iter().enumerate() {
        edge_map[old] = new;
    }
    let mut first_label = vec![usize::MAX; g.vertices().len()];
    for (h, &l) in labeling.iter().enumerate() {
        let v = t.vertex[h];
        first_label[v] = first_label[v].min(l);
    }
    let mut vorder: Vec<usize> = (0..g.vertices().len()).collect();
    vorder.sort_by_key(|&v| first_label[v]);
    let vertices = vorder
        .iter()
        .map(|&v| {
            let s = &g.vertices()[v];
            let mut cycles: Vec<Vec<usize>> = s
                .cycles
                .iter()
                .filter(|c| !c.is_empty())
                .map(|c| {
                    let mapped: Vec<usize> = c.iter().map(|&h| labeling[h]).collect();
                    let m = (0..mapped.len()).min_by_key(|&i| mapped[i]).unwrap();
                    (0..mapped.len())
                        .map(|i| mapped[(m + i) % mapped.len()])
                        .collect()
                })
                .collect();
            cycles.sort_by_key(|c| c[0]);
            cycles.extend(std::iter::repeat_n(Vec::new(), s.empty_cycles()));
            VertexSurface {
                genus: s.genus,
                cycles,
            }
        })
        .collect();
    let white = g.white().iter().map(|&e| edge_map[e]).collect();
    let graph = StableRibbonGraph::new(
        g.half_edges(),
        edges.into_iter().map(|(_, p)| p).collect(),
        vertices,
        white,
    )
    .expect("relabelling preserves structure");
    (graph, edge_map)
}

/// Automorphism group as half-edge permutations.
pub fn automorphisms(g: &StableRibbonGraph) -> Vec<Vec<usize>> {
    canonical_form(g).automorphisms
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn theta_and_figure_eight_symmetries() {
        assert_eq!(
            canonical_form(&StableRibbonGraph::theta_torus()).aut_order(),
            6
        );
        assert_eq!(
            canonical_form(&StableRibbonGraph::theta_planar()).aut_order(),
            6
        );
        assert_eq!(
            canonical_form(&StableRibbonGraph::figure_eight_interleaved()).aut_order(),
            4
        );
    }

    #[test]
    fn planar_and_torus_theta_differ() {
        let a = canonical_form(&StableRibbonGraph::theta_planar()).key;
        let b = canonical_form(&StableRibbonGraph::theta_torus()).key;
        assert_ne!(a, b);
    }

    #[test]
    fn canonical_graph_is_fixed() {
        for g in [
            StableRibbonGraph::theta_torus(),
            StableRibbonGraph::figure_eight_interleaved(),
        ] {
            let c = canonical_form(&g);
            let again = canonical_form(&c.graph);
            assert_eq!(again.key, c.key);
            assert_eq!(again.graph, c.graph);
        }
    }

    #[test]
    fn key_round_trips_through_json() {
        let k = canonical_form(&StableRibbonGraph::theta_planar()).key;
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(serde_json::from_str::<CanonKey>(&s).unwrap(), k);
    }

    #[test]
    fn automorphisms_are_structure_preserving() {
        let g = StableRibbonGraph::theta_planar();
        let iota = g.partners();
        let sigma = g.next_in_cycle();
        for phi in automorphisms(&g) {
            for h in 0..g.half_edges() {
                assert_eq!(phi[iota[h]], iota[phi[h]]);
                assert_eq!(phi[sigma[h]], sigma[phi[h]]);
            }
        }
    }

    proptest! {
        #[test]
        fn key_is_relabelling_invariant(perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(), torus in any::<bool>()) {
            let g = if torus { StableRibbonGraph::theta_torus() } else { StableRibbonGraph::theta_planar() };
            let r = g.relabel(&perm);
            prop_assert_eq!(canonical_form(&g).key, canonical_form(&r).key);
            prop_assert_eq!(canonical_form(&g).graph, canonical_form(&r).graph);
        }
    }
}
