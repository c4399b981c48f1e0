//! Cocycle values of a graph, by integrating its assembled form and by
//! contracting propagators directly, and the batteries that check the two
//! agree, satisfy the cocycle condition and do not depend on the Hodge data.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{validate_hodge, DgFrobeniusAlgebra, HodgeDecomposition};
use crate::cell_forms::{Assembler, CellForm};
use crate::error::{Error, Result};
use crate::graphs::{
    boundary, canonical_form, enumerate, CanonKey, ChainKey, Complex, EnumOptions, GraphChain,
    Orientation, SignConvention, StableRibbonGraph,
};
use crate::io;
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

fn fingerprint(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn algebra_fingerprint(a: &DgFrobeniusAlgebra) -> String {
    fingerprint(&io::algebra_to_string(a))
}

pub fn hodge_fingerprint(h: &HodgeDecomposition) -> String {
    fingerprint(&io::hodge_to_string(h))
}

/// Evaluates cochains for one algebra and Hodge decomposition.
pub struct CochainEngine {
    alg: DgFrobeniusAlgebra,
    hodge: HodgeDecomposition,
    asm: Assembler,
}

impl CochainEngine {
    pub fn new(alg: &DgFrobeniusAlgebra, hodge: &HodgeDecomposition) -> Result<Self> {
        let report = validate_hodge(alg, hodge)?;
        if !report.is_ok() {
            return Err(Error::Precondition(format!(
                "Hodge data fails {:?}",
                report.axioms()
            )));
        }
        Ok(CochainEngine {
            alg: alg.clone(),
            hodge: hodge.clone(),
            asm: Assembler::new(alg, hodge)?,
        })
    }

    pub fn algebra(&self) -> &DgFrobeniusAlgebra {
        &self.alg
    }

    pub fn hodge(&self) -> &HodgeDecomposition {
        &self.hodge
    }

    pub fn assembler(&self) -> &Assembler {
        &self.asm
    }

    pub fn assemble(&self, g: &StableRibbonGraph, or: &Orientation) -> Result<CellForm> {
        self.asm.assemble(g, or)
    }

    /// Integral of the assembled form over the cell, in orientation order.
    pub fn costello_value(&self, g: &StableRibbonGraph, or: &Orientation) -> Result<Scalar> {
        Ok(self.asm.assemble(g, or)?.integrate())
    }

    /// Propagator contraction times `(-1)^{k(k-1)/2}` for `k` black edges,
    /// the sign of collecting the `dt`s to the right.
    pub fn kontsevich_value(&self, g: &StableRibbonGraph, or: &Orientation) -> Result<Scalar> {
        let k = or.0.len();
        let v = self.asm.propagator_contraction(g, or)?;
        Ok(if (k * k.saturating_sub(1) / 2) % 2 == 1 {
            -v
        } else {
            v
        })
    }

    /// Cochain on the cell complex: the integral times `(-1)^{#white}`, so
    /// that it vanishes on boundaries.
    pub fn cochain_value(&self, g: &StableRibbonGraph, or: &Orientation) -> Result<Scalar> {
        let v = self.costello_value(g, or)?;
        Ok(if g.white().len() % 2 == 1 { -v } else { v })
    }

    /// Pairing with a chain; the two extra 0-cells are assigned 0.
    pub fn evaluate_chain(&self, chain: &GraphChain) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (g, c) in chain.graph_terms() {
            total += c * self.cochain_value(g, &g.default_orientation())?;
        }
        Ok(total)
    }
}

pub fn costello_value(
    alg: &DgFrobeniusAlgebra,
    h: &HodgeDecomposition,
    g: &StableRibbonGraph,
) -> Result<Scalar> {
    CochainEngine::new(alg, h)?.costello_value(g, &g.default_orientation())
}

pub fn kontsevich_value(
    alg: &DgFrobeniusAlgebra,
    h: &HodgeDecomposition,
    g: &StableRibbonGraph,
) -> Result<Scalar> {
    CochainEngine::new(alg, h)?.kontsevich_value(g, &g.default_orientation())
}

/// Values on canonical graphs (canonical orientation) of one type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CochainValue {
    pub g: usize,
    pub n: usize,
    pub algebra: String,
    pub hodge: String,
    #[serde(serialize_with = "serialize_values")]
    pub values: BTreeMap<CanonKey, Scalar>,
}

fn serialize_values<S: serde::Serializer>(
    v: &BTreeMap<CanonKey, Scalar>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(v.len()))?;
    for (k, x) in v {
        m.serialize_entry(&k.to_string(), &scalar::format(x))?;
    }
    m.end()
}

/// Generators of the chosen complex: pure ribbon graphs for `Open`, stable
/// graphs otherwise, with white edges only for `Linf`.
pub fn generators(
    g: usize,
    n: usize,
    max_edges: usize,
    complex: Complex,
) -> Result<Vec<StableRibbonGraph>> {
    enumerate(
        g,
        n,
        max_edges,
        EnumOptions {
            stable: complex != Complex::Open,
            colored: complex == Complex::Linf,
        },
    )
}

pub fn cochain_values(
    engine: &CochainEngine,
    g: usize,
    n: usize,
    max_edges: usize,
    complex: Complex,
) -> Result<CochainValue> {
    let graphs = generators(g, n, max_edges, complex)?;
    let values = graphs
        .par_iter()
        .map(|gr| {
            Ok((
                canonical_form(gr).key,
                engine.cochain_value(gr, &gr.default_orientation())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CochainValue {
        g,
        n,
        algebra: algebra_fingerprint(engine.algebra()),
        hodge: hodge_fingerprint(engine.hodge()),
        values: values.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Canonical key of the offending graph, or a short label.
    pub at: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
}

impl Check {
    fn new(name: &str, checked: usize, witnesses: Vec<Witness>) -> Self {
        Check {
            name: name.into(),
            passed: witnesses.is_empty(),
            checked,
            witnesses,
        }
    }
}

/// Edge identity `s Delta C = s C` plus agreement of the two evaluations on
/// every graph of the type, white edges included.
pub fn verify_equivalence(
    engine: &CochainEngine,
    g: usize,
    n: usize,
    max_edges: usize,
) -> Result<Vec<Check>> {
    let h = engine.hodge();
    let c = engine.algebra().copairing()?;
    let lhs = h.s() * &(h.laplacian() * &c);
    let rhs = h.s() * &c;
    let mut edge = Vec::new();
    if lhs != rhs {
        edge.push(Witness {
            at: "edge".into(),
            detail: "s Delta C differs from s C".into(),
        });
    }
    let graphs = generators(g, n, max_edges, Complex::Linf)?;
    let witnesses = graphs
        .par_iter()
        .map(|gr| {
            let or = gr.default_orientation();
            let a = engine.costello_value(gr, &or)?;
            let b = engine.kontsevich_value(gr, &or)?;
            Ok((a != b).then(|| Witness {
                at: canonical_form(gr).key.to_string(),
                detail: format!(
                    "integral {} vs contraction {}",
                    scalar::format(&a),
                    scalar::format(&b)
                ),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        Check::new("edge_identity", 1, edge),
        Check::new(
            "equivalence",
            graphs.len(),
            witnesses.into_iter().flatten().collect(),
        ),
    ])
}

fn value_table(
    engine: &CochainEngine,
    graphs: &[StableRibbonGraph],
) -> Result<BTreeMap<CanonKey, Scalar>> {
    let pairs = graphs
        .par_iter()
        .map(|gr| {
            Ok((
                canonical_form(gr).key,
                engine.cochain_value(gr, &gr.default_orientation())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairs.into_iter().collect())
}

fn chain_value(
    engine: &CochainEngine,
    table: &BTreeMap<CanonKey, Scalar>,
    chain: &GraphChain,
) -> Result<Scalar> {
    let mut total = Scalar::zero();
    for (k, c) in chain.terms() {
        if let ChainKey::Graph(key) = k {
            let v = match table.get(key) {
                Some(v) => v.clone(),
                None => {
                    let gr = chain.graph(key).expect("graph term");
                    engine.cochain_value(gr, &gr.default_orientation())?
                }
            };
            total += c * v;
        }
    }
    Ok(total)
}

/// `c(boundary gamma) = 0` for every generator; in the contraction-only
/// complex this needs `pi = 0`. When `pi = 0`, also checks that every graph
/// with a white edge has value 0.
pub fn verify_cocycle(
    engine: &CochainEngine,
    g: usize,
    n: usize,
    max_edges: usize,
    complex: Complex,
) -> Result<Vec<Check>> {
    let pi_zero = engine.hodge().pi().is_zero();
    if complex == Complex::Lcirc && !pi_zero {
        return Err(Error::Precondition(
            "the contraction-only complex needs pi = 0".into(),
        ));
    }
    let graphs = generators(g, n, max_edges, complex)?;
    let table = value_table(engine, &graphs)?;
    let witnesses = graphs
        .par_iter()
        .map(|gr| {
            let d = boundary(
                &GraphChain::from_graph(gr),
                complex,
                SignConvention::Alternating,
            );
            let v = chain_value(engine, &table, &d)?;
            Ok((!v.is_zero()).then(|| Witness {
                at: canonical_form(gr).key.to_string(),
                detail: format!("c(boundary) = {}", scalar::format(&v)),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut checks = vec![Check::new(
        "cocycle",
        graphs.len(),
        witnesses.into_iter().flatten().collect(),
    )];
    if pi_zero && complex == Complex::Linf {
        let colored: Vec<&StableRibbonGraph> =
            graphs.iter().filter(|gr| !gr.white().is_empty()).collect();
        let bad = colored
            .iter()
            .filter_map(|gr| {
                let key = canonical_form(gr).key;
                let v = &table[&key];
                (!v.is_zero()).then(|| Witness {
                    at: key.to_string(),
                    detail: format!("value {}", scalar::format(v)),
                })
            })
            .collect();
        checks.push(Check::new("white_edges_vanish", colored.len(), bad));
    }
    Ok(checks)
}

/// Basis of cycles of the boundary operator among the generators of the
/// given type, as chains.
pub fn cycles(g: usize, n: usize, max_edges: usize, complex: Complex) -> Result<Vec<GraphChain>> {
    let graphs: Vec<StableRibbonGraph> = generators(g, n, max_edges, complex)?
        .into_iter()
        .filter(|gr| !GraphChain::from_graph(gr).is_zero())
        .collect();
    let mut by_dim: BTreeMap<usize, Vec<&StableRibbonGraph>> = BTreeMap::new();
    for gr in &graphs {
        by_dim.entry(gr.black_edges().len()).or_default().push(gr);
    }
    let mut out = Vec::new();
    for (&k, cols) in &by_dim {
        let rows: Vec<CanonKey> = if k == 0 {
            vec![]
        } else {
            by_dim
                .get(&(k - 1))
                .map(|v| v.iter().map(|gr| canonical_form(gr).key).collect())
                .unwrap_or_default()
        };
        let mut row_index: BTreeMap<CanonKey, usize> = rows
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let boundaries: Vec<GraphChain> = cols
            .iter()
            .map(|gr| {
                boundary(
                    &GraphChain::from_graph(gr),
                    complex,
                    SignConvention::Alternating,
                )
            })
            .collect();
        for b in &boundaries {
            for (key, _) in b.terms() {
                if let ChainKey::Graph(ck) = key {
                    let next = row_index.len();
                    row_index.entry(ck.clone()).or_insert(next);
                }
            }
        }
        let null = if row_index.is_empty() {
            (0..cols.len())
                .map(|i| {
                    (0..cols.len())
                        .map(|j| {
                            if i == j {
                                Scalar::one()
                            } else {
                                Scalar::zero()
                            }
                        })
                        .collect()
                })
                .collect()
        } else {
            let mut m = Matrix::zeros(row_index.len(), cols.len());
            for (j, b) in boundaries.iter().enumerate() {
                for (key, c) in b.terms() {
                    if let ChainKey::Graph(ck) = key {
                        m[(row_index[ck], j)] = c.clone();
                    }
                }
            }
            m.nullspace()
        };
        for z in null {
            let mut chain = GraphChain::new();
            for (gr, c) in cols.iter().zip(&z) {
                if !c.is_zero() {
                    chain.add_oriented(gr, &gr.default_orientation(), c.clone());
                }
            }
            out.push(chain);
        }
    }
    Ok(out)
}

/// Pairs the difference of the two cochains with every cycle.
pub fn hodge_independence(
    first: &CochainEngine,
    second: &CochainEngine,
    g: usize,
    n: usize,
    max_edges: usize,
    complex: Complex,
) -> Result<Check> {
    if first.algebra() != second.algebra() {
        return Err(Error::Precondition(
            "both decompositions must belong to one algebra".into(),
        ));
    }
    let zs = cycles(g, n, max_edges, complex)?;
    let graphs = generators(g, n, max_edges, complex)?;
    let (t1, t2) = (value_table(first, &graphs)?, value_table(second, &graphs)?);
    let mut witnesses = Vec::new();
    for (i, z) in zs.iter().enumerate() {
        let diff = chain_value(first, &t1, z)? - chain_value(second, &t2, z)?;
        if !diff.is_zero() {
            witnesses.push(Witness {
                at: format!("cycle {i}"),
                detail: format!("pairing difference {}", scalar::format(&diff)),
            });
        }
    }
    Ok(Check::new("hodge_independence", zs.len(), witnesses))
}
