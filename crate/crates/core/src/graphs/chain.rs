use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::canon::{canonical_form, CanonKey};
use super::ribbon::{Face, Orientation, StableRibbonGraph};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complex {
    /// Edge contractions only.
    Lcirc,
    /// Contractions plus whitenings of black edges.
    Linf,
    /// Pure ribbon graphs; only non-loop edges contract.
    Open,
}

/// Sign rule used for faces in the boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    /// `(-1)^k` for the edge at position `k` (counting from zero).
    #[default]
    Alternating,
    /// Every face with coefficient `+1`. Not a differential; useful as a
    /// negative control.
    Unsigned,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChainKey {
    Graph(CanonKey),
    /// The extra 0-cell for the point at infinity.
    Infinity,
    /// The extra 0-cell for surfaces of zero perimeter.
    ZeroPerimeter,
}

/// Finite rational combination of oriented graph classes. Each class is
/// stored with its canonical orientation (black edges ascending).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphChain {
    terms: BTreeMap<ChainKey, Scalar>,
    graphs: BTreeMap<CanonKey, StableRibbonGraph>,
}

impl GraphChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graph(g: &StableRibbonGraph) -> Self {
        let mut c = Self::new();
        c.add_oriented(g, &g.default_orientation(), Scalar::one());
        c
    }

    /// Adds `coeff * (g, or)`. Returns `false` when the class vanishes
    /// because of an orientation-reversing automorphism.
    pub fn add_oriented(&mut self, g: &StableRibbonGraph, or: &Orientation, coeff: Scalar) -> bool {
        let c = canonical_form(g);
        if c.has_reversing_automorphism(g) {
            return false;
        }
        let (_, sign) = c.transport(or);
        let coeff = if sign < 0 { -coeff } else { coeff };
        self.graphs.entry(c.key.clone()).or_insert(c.graph);
        self.add_term(ChainKey::Graph(c.key), coeff);
        true
    }

    pub fn add_atom(&mut self, key: ChainKey, coeff: Scalar) {
        assert!(
            !matches!(key, ChainKey::Graph(_)),
            "graph terms go through add_oriented"
        );
        self.add_term(key, coeff);
    }

    fn add_term(&mut self, key: ChainKey, coeff: Scalar) {
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_chain(&mut self, other: &GraphChain, scale: &Scalar) {
        for (k, v) in &other.terms {
            if let ChainKey::Graph(ck) = k {
                self.graphs
                    .entry(ck.clone())
                    .or_insert_with(|| other.graphs[ck].clone());
            }
            self.add_term(k.clone(), v * scale);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &ChainKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChainKey, &Scalar)> {
        self.terms.iter()
    }

    /// Graph terms with their canonical representative.
    pub fn graph_terms(&self) -> impl Iterator<Item = (&StableRibbonGraph, &Scalar)> {
        self.terms.iter().filter_map(|(k, v)| match k {
            ChainKey::Graph(ck) => Some((&self.graphs[ck], v)),
            _ => None,
        })
    }

    pub fn graph(&self, key: &CanonKey) -> Option<&StableRibbonGraph> {
        self.graphs.get(key)
    }
}

/// Signed faces of one oriented cell.
pub fn faces(g: &StableRibbonGraph, or: &Orientation, complex: Complex) -> Vec<Face> {
    let mut out = Vec::new();
    for &e in &or.0 {
        if complex == Complex::Open && g.is_loop(e) {
            continue;
        }
        out.push(g.contract_edge(e, or).expect("black edge"));
        if complex == Complex::Linf {
            out.push(g.whiten_edge(e, or).expect("black edge"));
        }
    }
    out
}

/// Cellular differential.
pub fn boundary(chain: &GraphChain, complex: Complex, convention: SignConvention) -> GraphChain {
    let mut out = GraphChain::new();
    for (g, coeff) in chain.graph_terms() {
        let or = g.default_orientation();
        for f in faces(g, &or, complex) {
            let sign = match convention {
                SignConvention::Alternating => f.sign,
                SignConvention::Unsigned => 1,
            };
            let c = if sign < 0 {
                -coeff.clone()
            } else {
                coeff.clone()
            };
            out.add_oriented(&f.graph, &f.orientation, c);
        }
    }
    out
}
