use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Combinatorial surface decorating a vertex: genus plus the boundary
/// cycles, each a cyclic sequence of incident half-edges (possibly empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSurface {
    pub genus: usize,
    pub cycles: Vec<Vec<usize>>,
}

impl VertexSurface {
    pub fn disk(cycle: Vec<usize>) -> Self {
        VertexSurface {
            genus: 0,
            cycles: vec![cycle],
        }
    }

    pub fn is_disk(&self) -> bool {
        self.genus == 0 && self.cycles.len() == 1
    }

    pub fn valency(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Incident half-edges, cycle by cycle.
    pub fn legs(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycles.iter().flatten().copied()
    }

    pub fn empty_cycles(&self) -> usize {
        self.cycles.iter().filter(|c| c.is_empty()).count()
    }
}

/// Ordering of the black edges, up to even permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation(pub Vec<usize>);

impl Orientation {
    pub fn position(&self, e: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == e)
    }

    /// `+1` or `-1`: parity of the permutation taking `other` to `self`.
    /// Both must list the same edges.
    pub fn relative_sign(&self, other: &Orientation) -> i32 {
        let pos: Vec<usize> = self
            .0
            .iter()
            .map(|e| other.position(*e).expect("same edge set"))
            .collect();
        permutation_sign(&pos)
    }
}

/// Sign of a permutation given as a list of images.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// A face of an oriented cell: the resulting graph, its induced orientation,
/// and the sign with which it enters the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub graph: StableRibbonGraph,
    pub orientation: Orientation,
    pub sign: i32,
    /// Position of each surviving edge of the original graph in the new one.
    pub edge_map: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableRibbonGraph {
    half_edges: usize,
    edges: Vec<[usize; 2]>,
    vertices: Vec<VertexSurface>,
    white: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Slot {
    pub vertex: usize,
    pub cycle: usize,
    pub pos: usize,
}

impl StableRibbonGraph {
    pub fn new(
        half_edges: usize,
        edges: Vec<[usize; 2]>,
        vertices: Vec<VertexSurface>,
        white: BTreeSet<usize>,
    ) -> Result<Self> {
        let g = StableRibbonGraph {
            half_edges,
            edges,
            vertices,
            white,
        };
        g.check_structure()?;
        Ok(g)
    }

    /// All-black graph with only disk vertices.
    pub fn ribbon(cycles: Vec<Vec<usize>>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let h = edges.len() * 2;
        Self::new(
            h,
            edges,
            cycles.into_iter().map(VertexSurface::disk).collect(),
            BTreeSet::new(),
        )
    }

    /// Single vertex carrying a surface and no edges.
    pub fn isolated(genus: usize, boundaries: usize) -> Result<Self> {
        Self::new(
            0,
            vec![],
            vec![VertexSurface {
                genus,
                cycles: vec![vec![]; boundaries],
            }],
            BTreeSet::new(),
        )
    }

    fn check_structure(&self) -> Result<()> {
        let mut in_edge = vec![0u8; self.half_edges];
        for e in &self.edges {
            for &h in e {
                if h >= self.half_edges {
                    return Err(Error::Structural(format!("half-edge {h} out of range")));
                }
                in_edge[h] += 1;
            }
        }
        let mut in_vertex = vec![0u8; self.half_edges];
        for v in &self.vertices {
            if v.cycles.is_empty() {
                return Err(Error::Structural(
                    "vertex surface needs at least one boundary cycle".into(),
                ));
            }
            for h in v.legs() {
                if h >= self.half_edges {
                    return Err(Error::Structural(format!("half-edge {h} out of range")));
                }
                in_vertex[h] += 1;
            }
        }
        if let Some(h) = (0..self.half_edges).find(|&h| in_edge[h] != 1 || in_vertex[h] != 1) {
            return Err(Error::Structural(format!(
                "half-edge {h} lies in {} edges and {} vertex cycles",
                in_edge[h], in_vertex[h]
            )));
        }
        if let Some(&e) = self.white.iter().find(|&&e| e >= self.edges.len()) {
            return Err(Error::UnknownEdge(e));
        }
        if self.vertices.is_empty() {
            return Err(Error::Structural("graph has no vertices".into()));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let owner = self.vertex_of();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for h in self.vertices[v].legs() {
                let w = owner[self.partner(h)];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn half_edges(&self) -> usize {
        self.half_edges
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexSurface] {
        &self.vertices
    }

    pub fn white(&self) -> &BTreeSet<usize> {
        &self.white
    }

    pub fn is_white(&self, e: usize) -> bool {
        self.white.contains(&e)
    }

    pub fn black_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|e| !self.white.contains(e))
            .collect()
    }

    /// Black edges in increasing order.
    pub fn default_orientation(&self) -> Orientation {
        Orientation(self.black_edges())
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let owner = self.vertex_of();
        owner[self.edges[e][0]] == owner[self.edges[e][1]]
    }

    pub(crate) fn edge_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.half_edges];
        for (e, pair) in self.edges.iter().enumerate() {
            out[pair[0]] = e;
            out[pair[1]] = e;
        }
        out
    }

    pub(crate) fn vertex_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.half_edges];
        for (v, s) in self.vertices.iter().enumerate() {
            for h in s.legs() {
                out[h] = v;
            }
        }
        out
    }

    pub fn partner(&self, h: usize) -> usize {
        let e = self
            .edges
            .iter()
            .find(|p| p[0] == h || p[1] == h)
            .expect("half-edge in an edge");
        if e[0] == h {
            e[1]
        } else {
            e[0]
        }
    }

    /// `sigma`: next half-edge along the same boundary cycle.
    pub(crate) fn next_in_cycle(&self) -> Vec<usize> {
        let mut out = vec![0; self.half_edges];
        for s in &self.vertices {
            for cyc in &s.cycles {
                for (p, &h) in cyc.iter().enumerate() {
                    out[h] = cyc[(p + 1) % cyc.len()];
                }
            }
        }
        out
    }

    pub(crate) fn partners(&self) -> Vec<usize> {
        let mut out = vec![0; self.half_edges];
        for pair in &self.edges {
            out[pair[0]] = pair[1];
            out[pair[1]] = pair[0];
        }
        out
    }

    /// Disk vertices have valency at least three.
    pub fn is_stable(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| !v.is_disk() || v.valency() >= 3)
    }

    pub fn is_pure_ribbon(&self) -> bool {
        self.vertices.iter().all(VertexSurface::is_disk)
    }

    /// Number of boundary components of the thickened surface.
    pub fn boundary_components(&self) -> usize {
        let iota = self.partners();
        let sigma = self.next_in_cycle();
        let mut seen = vec![false; self.half_edges];
        let mut faces = 0;
        for start in 0..self.half_edges {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = sigma[iota[h]];
            }
        }
        faces
            + self
                .vertices
                .iter()
                .map(VertexSurface::empty_cycles)
                .sum::<usize>()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices
            .iter()
            .map(|v| 2 - 2 * v.genus as i64 - v.cycles.len() as i64)
            .sum::<i64>()
            - self.edges.len() as i64
    }

    /// `(g, n)` of the thickened surface.
    pub fn surface_invariants(&self) -> Result<(usize, usize)> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.boundary_components() as i64;
        let twice_g = 2 - self.euler_characteristic() - n;
        debug_assert!(twice_g >= 0 && twice_g % 2 == 0);
        Ok(((twice_g / 2) as usize, n as usize))
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.edges.len() {
            return Err(Error::UnknownEdge(e));
        }
        Ok(())
    }

    /// Removes edge `e` (and its two half-edges), renumbering what is left.
    fn drop_edge(
        &self,
        e: usize,
        vertices: Vec<VertexSurface>,
    ) -> (StableRibbonGraph, Vec<Option<usize>>) {
        let [a, b] = self.edges[e];
        let new_h = |h: usize| h - usize::from(h > a) - usize::from(h > b);
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != e)
            .map(|(_, p)| [new_h(p[0]), new_h(p[1])])
            .collect();
        let vertices = vertices
            .into_iter()
            .map(|v| VertexSurface {
                genus: v.genus,
                cycles: v
                    .cycles
                    .into_iter()
                    .map(|c| c.into_iter().map(new_h).collect())
                    .collect(),
            })
            .collect();
        let edge_map: Vec<Option<usize>> = (0..self.edges.len())
            .map(|k| {
                if k == e {
                    None
                } else {
                    Some(k - usize::from(k > e))
                }
            })
            .collect();
        let white = self.white.iter().filter_map(|&w| edge_map[w]).collect();
        (
            StableRibbonGraph {
                half_edges: self.half_edges - 2,
                edges,
                vertices,
                white,
            },
            edge_map,
        )
    }

    fn face_orientation(
        &self,
        e: usize,
        or: &Orientation,
        edge_map: &[Option<usize>],
    ) -> Result<(Orientation, i32)> {
        let pos = or.position(e).ok_or(Error::UnknownEdge(e))?;
        let order =
            or.0.iter()
                .filter(|&&x| x != e)
                .map(|&x| edge_map[x].expect("surviving edge"))
                .collect();
        Ok((Orientation(order), if pos % 2 == 0 { 1 } else { -1 }))
    }

    /// `gamma / e`: glue the vertex surfaces along the ends of `e`.
    pub fn contract_edge(&self, e: usize, or: &Orientation) -> Result<Face> {
        self.check_edge(e)?;
        if self.is_white(e) {
            return Err(Error::WhiteEdge(e));
        }
        let [h, k] = self.edges[e];
        let vertices = glue_legs(&self.vertices, h, k);
        let (graph, edge_map) = self.drop_edge(e, vertices);
        let (orientation, sign) = self.face_orientation(e, or, &edge_map)?;
        Ok(Face {
            graph,
            orientation,
            sign,
            edge_map,
        })
    }

    /// `e \ gamma`: the same graph with `e` coloured white.
    pub fn whiten_edge(&self, e: usize, or: &Orientation) -> Result<Face> {
        self.check_edge(e)?;
        if self.is_white(e) {
            return Err(Error::AlreadyWhite(e));
        }
        let mut graph = self.clone();
        graph.white.insert(e);
        let edge_map: Vec<Option<usize>> = (0..self.edges.len()).map(Some).collect();
        let pos = or.position(e).ok_or(Error::UnknownEdge(e))?;
        let order = or.0.iter().copied().filter(|&x| x != e).collect();
        Ok(Face {
            graph,
            orientation: Orientation(order),
            sign: if pos % 2 == 0 { 1 } else { -1 },
            edge_map,
        })
    }

    /// Renames half-edges by `perm[old] = new`, keeping edge ids.
    pub fn relabel(&self, perm: &[usize]) -> StableRibbonGraph {
        StableRibbonGraph {
            half_edges: self.half_edges,
            edges: self
                .edges
                .iter()
                .map(|p| [perm[p[0]], perm[p[1]]])
                .collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSurface {
                    genus: v.genus,
                    cycles: v
                        .cycles
                        .iter()
                        .map(|c| c.iter().map(|&h| perm[h]).collect())
                        .collect(),
                })
                .collect(),
            white: self.white.clone(),
        }
    }

    /// Same graph with the listed edges recoloured white.
    pub fn with_white(&self, white: BTreeSet<usize>) -> Result<StableRibbonGraph> {
        Self::new(
            self.half_edges,
            self.edges.clone(),
            self.vertices.clone(),
            white,
        )
    }

    /// Standard small examples used throughout the tests and docs.
    pub fn theta_planar() -> Self {
        // v0 = (0 2 4), v1 = (1 5 3): three faces.
        Self::ribbon(
            vec![vec![0, 2, 4], vec![1, 5, 3]],
            vec![[0, 1], [2, 3], [4, 5]],
        )
        .unwrap()
    }

    pub fn theta_torus() -> Self {
        // v0 = (0 2 4), v1 = (1 3 5): one face.
        Self::ribbon(
            vec![vec![0, 2, 4], vec![1, 3, 5]],
            vec![[0, 1], [2, 3], [4, 5]],
        )
        .unwrap()
    }

    /// One vertex `(h1 h2 h1' h2')` with two interleaved loops.
    pub fn figure_eight_interleaved() -> Self {
        Self::ribbon(vec![vec![0, 2, 1, 3]], vec![[0, 1], [2, 3]]).unwrap()
    }
}

fn locate(vertices: &[VertexSurface], h: usize) -> Option<Slot> {
    for (v, s) in vertices.iter().enumerate() {
        for (c, cyc) in s.cycles.iter().enumerate() {
            if let Some(pos) = cyc.iter().position(|&x| x == h) {
                return Some(Slot {
                    vertex: v,
                    cycle: c,
                    pos,
                });
            }
        }
    }
    None
}

/// Joins legs `h` and `k` by a band and removes them. Distinct vertices
/// merge (genera add, the two cycles splice); two legs on one cycle split
/// it in two; two legs on different cycles of one vertex merge those cycles
/// and raise the genus. The merged vertex keeps the position of `h`'s.
pub(crate) fn glue_legs(vertices: &[VertexSurface], h: usize, k: usize) -> Vec<VertexSurface> {
    let sh = locate(vertices, h).expect("leg present");
    let sk = locate(vertices, k).expect("leg present");
    // Cycle read from just after the leg, excluding it.
    let after = |s: Slot| -> Vec<usize> {
        let cyc = &vertices[s.vertex].cycles[s.cycle];
        (1..cyc.len())
            .map(|i| cyc[(s.pos + i) % cyc.len()])
            .collect()
    };
    let mut out = vertices.to_vec();
    if sh.vertex != sk.vertex {
        let mut merged = after(sh);
        merged.extend(after(sk));
        let (v, w) = (&vertices[sh.vertex], &vertices[sk.vertex]);
        let mut cycles = vec![merged];
        cycles.extend(
            v.cycles
                .iter()
                .enumerate()
                .filter(|&(c, _)| c != sh.cycle)
                .map(|(_, c)| c.clone()),
        );
        cycles.extend(
            w.cycles
                .iter()
                .enumerate()
                .filter(|&(c, _)| c != sk.cycle)
                .map(|(_, c)| c.clone()),
        );
        out[sh.vertex] = VertexSurface {
            genus: v.genus + w.genus,
            cycles,
        };
        out.remove(sk.vertex);
    } else if sh.cycle == sk.cycle {
        let rest = after(sh);
        let split = rest
            .iter()
            .position(|&x| x == k)
            .expect("partner on same cycle");
        let v = &mut out[sh.vertex];
        v.cycles[sh.cycle] = rest[..split].to_vec();
        v.cycles.insert(sh.cycle + 1, rest[split + 1..].to_vec());
    } else {
        let mut merged = after(sh);
        merged.extend(after(sk));
        let v = &mut out[sh.vertex];
        let (lo, hi) = (sh.cycle.min(sk.cycle), sh.cycle.max(sk.cycle));
        v.cycles.remove(hi);
        v.cycles[lo] = merged;
        v.genus += 1;
    }
    out
}
