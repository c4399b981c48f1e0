//! Forms on a cell `[0, inf]^k` spanned by products of `1`, `u = e^{-t}` and
//! `u dt` in each coordinate, and the closed form attached to a graph.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    alpha_form, koszul_sign, DgFrobeniusAlgebra, GradedTensor, HodgeDecomposition,
};
use crate::error::{Error, Result};
use crate::graphs::{Orientation, StableRibbonGraph};
use crate::network::{EdgeChoice, NetEdge, NetVertex, Network};
use crate::otft::OtftEvaluator;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Factor {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "udt")]
    UDt,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::One => "1",
            Factor::U => "u",
            Factor::UDt => "udt",
        })
    }
}

/// `sum coeff * prod_k factor_k`, with the `dt`s multiplied in slot order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellForm {
    edges: Vec<usize>,
    terms: BTreeMap<Vec<Factor>, Scalar>,
}

fn dts_before(f: &[Factor], k: usize) -> usize {
    f[..k].iter().filter(|&&x| x == Factor::UDt).count()
}

impl CellForm {
    pub fn new(edges: Vec<usize>) -> Self {
        CellForm {
            edges,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(edges: Vec<usize>, c: Scalar) -> Self {
        let mut out = Self::new(edges);
        let k = out.edges.len();
        out.add(vec![Factor::One; k], c);
        out
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Factor>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, f: &[Factor]) -> Scalar {
        self.terms.get(f).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, factors: Vec<Factor>, c: Scalar) {
        assert_eq!(factors.len(), self.edges.len());
        let key = factors.clone();
        let slot = self.terms.entry(factors).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn slot(&self, e: usize) -> Result<usize> {
        self.edges
            .iter()
            .position(|&x| x == e)
            .ok_or(Error::UnknownEdge(e))
    }

    /// De Rham differential.
    pub fn d(&self) -> CellForm {
        let mut out = Self::new(self.edges.clone());
        for (f, c) in &self.terms {
            for k in 0..f.len() {
                if f[k] != Factor::U {
                    continue;
                }
                let mut g = f.clone();
                g[k] = Factor::UDt;
                let odd = dts_before(f, k) % 2 == 1;
                out.add(g, if odd { c.clone() } else { -c.clone() });
            }
        }
        out
    }

    fn restrict(&self, e: usize, value: impl Fn(Factor) -> Option<Scalar>) -> Result<CellForm> {
        let k = self.slot(e)?;
        let mut edges = self.edges.clone();
        edges.remove(k);
        let mut out = Self::new(edges);
        for (f, c) in &self.terms {
            if let Some(v) = value(f[k]) {
                let mut g = f.clone();
                g.remove(k);
                out.add(g, c * v);
            }
        }
        Ok(out)
    }

    /// Restriction to the face `t_e = 0`.
    pub fn pullback_zero(&self, e: usize) -> Result<CellForm> {
        self.restrict(e, |f| (f != Factor::UDt).then(Scalar::one))
    }

    /// Restriction to the face `t_e = infinity`.
    pub fn pullback_infinity(&self, e: usize) -> Result<CellForm> {
        self.restrict(e, |f| (f == Factor::One).then(Scalar::one))
    }

    /// Integral over the cell in slot order.
    pub fn integrate(&self) -> Scalar {
        self.coefficient(&vec![Factor::UDt; self.edges.len()])
    }

    /// The same form with slots listed in the order `edges`.
    pub fn reorder(&self, edges: &[usize]) -> Result<CellForm> {
        let pos = edges
            .iter()
            .map(|&e| self.slot(e))
            .collect::<Result<Vec<_>>>()?;
        if pos.len() != self.edges.len() {
            return Err(Error::Structural(
                "reorder must list every edge once".into(),
            ));
        }
        let mut target = vec![0; pos.len()];
        for (new, &old) in pos.iter().enumerate() {
            target[old] = new;
        }
        let mut out = Self::new(edges.to_vec());
        for (f, c) in &self.terms {
            let g: Vec<Factor> = pos.iter().map(|&old| f[old]).collect();
            let parities: Vec<bool> = f.iter().map(|&x| x == Factor::UDt).collect();
            out.add(
                g,
                if koszul_sign(&parities, &target) {
                    -c.clone()
                } else {
                    c.clone()
                },
            );
        }
        Ok(out)
    }

    /// Renames edge ids, keeping slot order.
    pub fn rename(&self, map: impl Fn(usize) -> usize) -> CellForm {
        CellForm {
            edges: self.edges.iter().map(|&e| map(e)).collect(),
            terms: self.terms.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    factors: Vec<Factor>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct CellFormJson {
    edges: Vec<usize>,
    terms: Vec<TermJson>,
}

impl Serialize for CellForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CellFormJson {
            edges: self.edges.clone(),
            terms: self
                .terms
                .iter()
                .map(|(f, c)| TermJson {
                    factors: f.clone(),
                    coeff: crate::scalar::format(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CellForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CellFormJson::deserialize(d)?;
        let mut out = CellForm::new(j.edges);
        for t in j.terms {
            if t.factors.len() != out.edges.len() {
                return Err(serde::de::Error::custom(
                    "term length differs from edge count",
                ));
            }
            let c = crate::scalar::parse(&t.coeff).map_err(serde::de::Error::custom)?;
            out.add(t.factors, c);
        }
        Ok(out)
    }
}

/// Places the edge form on black edges and its limit on white edges, then
/// contracts with the vertex tensors.
pub struct Assembler {
    ev: OtftEvaluator,
    c_pi: GradedTensor,
    c_delta: GradedTensor,
    c_s: GradedTensor,
    propagator: GradedTensor,
}

impl Assembler {
    pub fn new(alg: &DgFrobeniusAlgebra, h: &HodgeDecomposition) -> Result<Self> {
        let ev = OtftEvaluator::new(alg)?;
        let alpha = alpha_form(alg, h)?;
        let [c_pi, c_delta, c_s] = alpha.tensors();
        let propagator = GradedTensor::from_matrix(&(h.s() * &alg.copairing()?));
        Ok(Assembler {
            ev,
            c_pi,
            c_delta,
            c_s,
            propagator,
        })
    }

    pub fn evaluator(&self) -> &OtftEvaluator {
        &self.ev
    }

    /// `(s (x) id)` applied to the copairing.
    pub fn propagator(&self) -> &GradedTensor {
        &self.propagator
    }

    fn network<'a>(
        &'a self,
        g: &StableRibbonGraph,
        black: &[usize],
        tensors: &'a [std::sync::Arc<GradedTensor>],
        black_choices: &[EdgeChoice<'a>],
    ) -> Network<'a> {
        let mut edges: Vec<NetEdge> = black
            .iter()
            .map(|&e| NetEdge {
                ends: g.edges()[e],
                choices: black_choices.to_vec(),
            })
            .collect();
        for &e in g.white() {
            edges.push(NetEdge {
                ends: g.edges()[e],
                choices: vec![EdgeChoice {
                    tensor: &self.c_pi,
                    dt: false,
                }],
            });
        }
        Network {
            vertices: g
                .vertices()
                .iter()
                .zip(tensors)
                .map(|(v, t)| NetVertex {
                    legs: v.legs().collect(),
                    tensor: t.as_ref(),
                })
                .collect(),
            edges,
            externals: vec![],
        }
    }

    fn vertex_tensors(&self, g: &StableRibbonGraph) -> Result<Vec<std::sync::Arc<GradedTensor>>> {
        g.vertices()
            .iter()
            .map(|v| self.ev.vertex_tensor(v))
            .collect()
    }

    /// Form on the cell of `(g, or)`, slots in orientation order.
    pub fn assemble(&self, g: &StableRibbonGraph, or: &Orientation) -> Result<CellForm> {
        check_orientation(g, or)?;
        let tensors = self.vertex_tensors(g)?;
        let choices = [
            EdgeChoice {
                tensor: &self.c_pi,
                dt: false,
            },
            EdgeChoice {
                tensor: &self.c_delta,
                dt: false,
            },
            EdgeChoice {
                tensor: &self.c_s,
                dt: true,
            },
        ];
        let net = self.network(g, &or.0, &tensors, &choices);
        let mut out = CellForm::new(or.0.clone());
        let k = or.0.len();
        for ((_, choice), v) in net.contract(self.ev.algebra().parity()) {
            let f = choice[..k]
                .iter()
                .map(|&c| [Factor::One, Factor::U, Factor::UDt][c])
                .collect();
            out.add(f, v);
        }
        Ok(out)
    }

    /// Contraction with the propagator on every black edge and the limit
    /// tensor on every white edge.
    pub fn propagator_contraction(
        &self,
        g: &StableRibbonGraph,
        or: &Orientation,
    ) -> Result<Scalar> {
        check_orientation(g, or)?;
        let tensors = self.vertex_tensors(g)?;
        let choices = [EdgeChoice {
            tensor: &self.propagator,
            dt: false,
        }];
        let net = self.network(g, &or.0, &tensors, &choices);
        Ok(net
            .contract(self.ev.algebra().parity())
            .into_values()
            .fold(Scalar::zero(), |a, b| a + b))
    }
}

fn check_orientation(g: &StableRibbonGraph, or: &Orientation) -> Result<()> {
    let mut listed = or.0.clone();
    listed.sort_unstable();
    if listed != g.black_edges() {
        return Err(Error::Structural(
            "orientation must list each black edge once".into(),
        ));
    }
    Ok(())
}

/// Form of `g` with slots in increasing black-edge order.
pub fn assemble(
    alg: &DgFrobeniusAlgebra,
    h: &HodgeDecomposition,
    g: &StableRibbonGraph,
) -> Result<CellForm> {
    Assembler::new(alg, h)?.assemble(g, &g.default_orientation())
}
