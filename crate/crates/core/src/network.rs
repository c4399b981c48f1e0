//! Contraction of tensor networks: vertex tensors joined along edges by
//! 2-tensors, with an optional odd `dt` symbol riding on each edge term.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use crate::algebra::{koszul_sign, GradedTensor};
use crate::scalar::Scalar;

pub struct NetVertex<'a> {
    /// Half-edge ids in leg order.
    pub legs: Vec<usize>,
    pub tensor: &'a GradedTensor,
}

#[derive(Clone, Copy)]
pub struct EdgeChoice<'a> {
    pub tensor: &'a GradedTensor,
    /// Carries a `dt`.
    pub dt: bool,
}

pub struct NetEdge<'a> {
    pub ends: [usize; 2],
    pub choices: Vec<EdgeChoice<'a>>,
}

/// Every half-edge is either external or one end of exactly one edge, and
/// sits on exactly one vertex.
pub struct Network<'a> {
    pub vertices: Vec<NetVertex<'a>>,
    pub edges: Vec<NetEdge<'a>>,
    pub externals: Vec<usize>,
}

/// `(external basis indices, chosen term per edge) -> value`.
pub type Contraction = BTreeMap<(Vec<usize>, Vec<usize>), Scalar>;

/// Assigned legs of a vertex and the allowed index tuples on them.
type Projection = (Vec<usize>, HashSet<Vec<usize>>);

#[derive(Clone, Copy)]
enum Slot {
    External(usize),
    Edge(usize),
}

struct Walk<'n, 'a> {
    net: &'n Network<'a>,
    /// Assignment order; the sign bookkeeping does not depend on it.
    order: Vec<Slot>,
    parity: &'n [bool],
    dim: usize,
    /// Vertices whose last leg is assigned at each step.
    ready: Vec<Vec<usize>>,
    /// Per step, vertices still incomplete after it: their assigned legs
    /// and the projections of their nonzero entries onto those legs.
    partial: Vec<Vec<Projection>>,
    /// Position of each half-edge in the concatenated vertex legs.
    target: Vec<usize>,
    total_legs: usize,
    basis: Vec<usize>,
    choice: Vec<usize>,
    out: Contraction,
}

impl Network<'_> {
    pub fn contract(&self, parity: &[bool]) -> Contraction {
        let dim = parity.len();
        let h = self.vertices.iter().map(|v| v.legs.len()).sum::<usize>();
        let mut target = vec![0; h];
        let mut pos = 0;
        for v in &self.vertices {
            for &leg in &v.legs {
                target[leg] = pos;
                pos += 1;
            }
        }
        let order = self.schedule(h);
        let mut step = vec![0; h];
        for (s, slot) in order.iter().enumerate() {
            match *slot {
                Slot::External(i) => step[self.externals[i]] = s,
                Slot::Edge(k) => {
                    step[self.edges[k].ends[0]] = s;
                    step[self.edges[k].ends[1]] = s;
                }
            }
        }
        let steps = order.len();
        let mut ready = vec![Vec::new(); steps.max(1)];
        let mut constant = Scalar::one();
        for (vi, v) in self.vertices.iter().enumerate() {
            match v.legs.iter().map(|&l| step[l]).max() {
                Some(s) => ready[s].push(vi),
                None => constant *= v.tensor.get(&[]),
            }
        }
        let mut partial = vec![Vec::new(); steps.max(1)];
        for v in &self.vertices {
            let mut order: Vec<(usize, usize)> = v
                .legs
                .iter()
                .enumerate()
                .map(|(i, &l)| (step[l], i))
                .collect();
            order.sort_unstable();
            for k in 1..order.len() {
                let s = order[k - 1].0;
                if s == order[k].0 {
                    continue;
                }
                let positions: Vec<usize> = order[..k].iter().map(|&(_, i)| i).collect();
                let seen = v
                    .tensor
                    .iter()
                    .map(|(idx, _)| positions.iter().map(|&i| idx[i]).collect())
                    .collect();
                let legs = positions.iter().map(|&i| v.legs[i]).collect();
                partial[s].push((legs, seen));
            }
        }
        let mut w = Walk {
            net: self,
            order,
            parity,
            dim,
            ready,
            partial,
            target,
            total_legs: h,
            basis: vec![usize::MAX; h],
            choice: vec![0; self.edges.len()],
            out: BTreeMap::new(),
        };
        if !constant.is_zero() {
            w.descend(0, constant);
        }
        w.out
    }
}

impl Network<'_> {
    /// Visits vertices breadth first and schedules each unscheduled leg
    /// as it is met, so vertices fill up early and pruning bites.
    fn schedule(&self, h: usize) -> Vec<Slot> {
        let mut slot_of: Vec<Option<Slot>> = vec![None; h];
        let mut owner = vec![usize::MAX; h];
        for (vi, v) in self.vertices.iter().enumerate() {
            for &l in &v.legs {
                owner[l] = vi;
            }
        }
        for (i, &x) in self.externals.iter().enumerate() {
            slot_of[x] = Some(Slot::External(i));
        }
        for (k, e) in self.edges.iter().enumerate() {
            slot_of[e.ends[0]] = Some(Slot::Edge(k));
            slot_of[e.ends[1]] = Some(Slot::Edge(k));
        }
        let mut done_ext = vec![false; self.externals.len()];
        let mut done_edge = vec![false; self.edges.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut order = Vec::new();
        for root in 0..self.vertices.len() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &l in &self.vertices[v].legs {
                    match slot_of[l] {
                        Some(Slot::External(i)) if !done_ext[i] => {
                            done_ext[i] = true;
                            order.push(Slot::External(i));
                        }
                        Some(Slot::Edge(k)) if !done_edge[k] => {
                            done_edge[k] = true;
                            order.push(Slot::Edge(k));
                            for &end in &self.edges[k].ends {
                                let w = owner[end];
                                if !seen[w] {
                                    seen[w] = true;
                                    queue.push_back(w);
                                }
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        order
    }
}

impl Walk<'_, '_> {
    fn vertices_ok(&self, s: usize, mut acc: Scalar) -> Option<Scalar> {
        for (legs, seen) in self.partial.get(s).map(Vec::as_slice).unwrap_or(&[]) {
            let idx: Vec<usize> = legs.iter().map(|&l| self.basis[l]).collect();
            if !seen.contains(&idx) {
                return None;
            }
        }
        for &vi in self.ready.get(s).map(Vec::as_slice).unwrap_or(&[]) {
            let v = &self.net.vertices[vi];
            let idx: Vec<usize> = v.legs.iter().map(|&l| self.basis[l]).collect();
            acc *= v.tensor.get_ref(&idx)?;
        }
        Some(acc)
    }

    fn descend(&mut self, s: usize, acc: Scalar) {
        let Some(&slot) = self.order.get(s) else {
            self.finish(acc);
            return;
        };
        let k = match slot {
            Slot::Edge(k) => k,
            Slot::External(i) => {
                let leg = self.net.externals[i];
                for b in 0..self.dim {
                    self.basis[leg] = b;
                    if let Some(next) = self.vertices_ok(s, acc.clone()) {
                        self.descend(s + 1, next);
                    }
                }
                return;
            }
        };
        let edge = &self.net.edges[k];
        let [a, b] = edge.ends;
        for (c, choice) in edge.choices.iter().enumerate() {
            self.choice[k] = c;
            for (idx, x) in choice.tensor.iter() {
                self.basis[a] = idx[0];
                self.basis[b] = idx[1];
                if let Some(next) = self.vertices_ok(s, &acc * x) {
                    self.descend(s + 1, next);
                }
            }
        }
    }

    fn finish(&mut self, acc: Scalar) {
        let mut parities = Vec::new();
        let mut target = Vec::new();
        for &x in &self.net.externals {
            parities.push(self.parity[self.basis[x]]);
            target.push(self.target[x]);
        }
        let mut dts = 0;
        for (k, e) in self.net.edges.iter().enumerate() {
            for &h in &e.ends {
                parities.push(self.parity[self.basis[h]]);
                target.push(self.target[h]);
            }
            if e.choices[self.choice[k]].dt {
                parities.push(true);
                target.push(self.total_legs + dts);
                dts += 1;
            }
        }
        let value = if koszul_sign(&parities, &target) {
            -acc
        } else {
            acc
        };
        let ext: Vec<usize> = self.net.externals.iter().map(|&x| self.basis[x]).collect();
        let key = (ext, self.choice.clone());
        let slot = self.out.entry(key.clone()).or_insert_with(Scalar::zero);
        *slot += value;
        if slot.is_zero() {
            self.out.remove(&key);
        }
    }
}
