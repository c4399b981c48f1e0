//! JSON formats for algebras, Hodge data, graphs and surfaces. Matrices are
//! sparse lists of `[row, col, "p/q"]`; a differential `d` has
//! `d(x_j) = sum_i d[i][j] x_i`.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{DgFrobeniusAlgebra, HodgeDecomposition};
use crate::error::{Error, Result};
use crate::graphs::{Orientation, StableRibbonGraph, VertexSurface};
use crate::linalg::Matrix;
use crate::scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    pub parity: Vec<u8>,
    pub mult: Vec<(usize, usize, usize, String)>,
    pub diff: Vec<(usize, usize, String)>,
    pub pairing: Vec<(usize, usize, String)>,
    #[serde(default)]
    pub unit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeJson {
    pub s: Vec<(usize, usize, String)>,
    pub pi: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringJson {
    pub white: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub half_edges: usize,
    pub edges: Vec<[usize; 2]>,
    pub vertices: Vec<VertexSurface>,
    #[serde(default)]
    pub coloring: ColoringJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<usize>>,
}

fn sparse(m: &Matrix) -> Vec<(usize, usize, String)> {
    m.nonzeros()
        .map(|(i, j, x)| (i, j, scalar::format(x)))
        .collect()
}

fn dense(dim: usize, entries: &[(usize, usize, String)], what: &str) -> Result<Matrix> {
    let mut m = Matrix::zeros(dim, dim);
    for (i, j, x) in entries {
        if *i >= dim || *j >= dim {
            return Err(Error::Parse(format!(
                "{what} entry ({i}, {j}) out of range"
            )));
        }
        m[(*i, *j)] += scalar::parse(x)?;
    }
    Ok(m)
}

impl AlgebraJson {
    pub fn from_algebra(a: &DgFrobeniusAlgebra) -> Self {
        let n = a.dim();
        let mut mult = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = a.mult_coeff(i, j, k);
                    if !c.is_zero() {
                        mult.push((i, j, k, scalar::format(c)));
                    }
                }
            }
        }
        AlgebraJson {
            dim: n,
            parity: a.parity().iter().map(|&p| p as u8).collect(),
            mult,
            diff: sparse(a.diff()),
            pairing: sparse(a.pairing()),
            unit: a.unit(),
        }
    }

    pub fn to_algebra(&self) -> Result<DgFrobeniusAlgebra> {
        let n = self.dim;
        if self.parity.len() != n {
            return Err(Error::Parse(format!(
                "parity has {} entries, expected {n}",
                self.parity.len()
            )));
        }
        let parity = self
            .parity
            .iter()
            .map(|&p| match p {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::Parse(format!("parity must be 0 or 1, got {p}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut mult = vec![scalar::zero(); n * n * n];
        for (i, j, k, x) in &self.mult {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Parse(format!(
                    "mult entry ({i}, {j}, {k}) out of range"
                )));
            }
            mult[(i * n + j) * n + k] += scalar::parse(x)?;
        }
        DgFrobeniusAlgebra::new(
            parity,
            mult,
            dense(n, &self.diff, "diff")?,
            dense(n, &self.pairing, "pairing")?,
            self.unit,
        )
    }
}

impl HodgeJson {
    pub fn from_hodge(h: &HodgeDecomposition) -> Self {
        HodgeJson {
            s: sparse(h.s()),
            pi: sparse(h.pi()),
        }
    }

    pub fn to_hodge(&self, alg: &DgFrobeniusAlgebra) -> Result<HodgeDecomposition> {
        HodgeDecomposition::new(
            alg,
            dense(alg.dim(), &self.s, "s")?,
            dense(alg.dim(), &self.pi, "pi")?,
        )
    }
}

impl GraphJson {
    pub fn from_graph(g: &StableRibbonGraph, or: Option<&Orientation>) -> Self {
        GraphJson {
            half_edges: g.half_edges(),
            edges: g.edges().to_vec(),
            vertices: g.vertices().to_vec(),
            coloring: ColoringJson {
                white: g.white().iter().copied().collect(),
            },
            orientation: or.map(|o| o.0.clone()),
        }
    }

    /// The graph and its orientation (black edges ascending if absent).
    pub fn to_graph(&self) -> Result<(StableRibbonGraph, Orientation)> {
        let white: BTreeSet<usize> = self.coloring.white.iter().copied().collect();
        let g = StableRibbonGraph::new(
            self.half_edges,
            self.edges.clone(),
            self.vertices.clone(),
            white,
        )?;
        let or = match &self.orientation {
            Some(o) => {
                let mut sorted = o.clone();
                sorted.sort_unstable();
                if sorted != g.black_edges() {
                    return Err(Error::Parse(
                        "orientation must list each black edge once".into(),
                    ));
                }
                Orientation(o.clone())
            }
            None => g.default_orientation(),
        };
        Ok((g, or))
    }
}

fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub fn parse_algebra(text: &str) -> Result<DgFrobeniusAlgebra> {
    from_str::<AlgebraJson>(text)?.to_algebra()
}

pub fn parse_hodge(text: &str, alg: &DgFrobeniusAlgebra) -> Result<HodgeDecomposition> {
    from_str::<HodgeJson>(text)?.to_hodge(alg)
}

pub fn parse_graph(text: &str) -> Result<(StableRibbonGraph, Orientation)> {
    from_str::<GraphJson>(text)?.to_graph()
}

pub fn parse_surface(text: &str) -> Result<VertexSurface> {
    from_str(text)
}

pub fn algebra_to_string(a: &DgFrobeniusAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraJson::from_algebra(a)).expect("serializable")
}

pub fn hodge_to_string(h: &HodgeDecomposition) -> String {
    serde_json::to_string_pretty(&HodgeJson::from_hodge(h)).expect("serializable")
}
