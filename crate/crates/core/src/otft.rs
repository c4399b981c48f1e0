//! Tensors assigned to decorated vertices by the open field theory of a
//! cyclic dg Frobenius algebra. A vertex surface of genus `g` whose boundary
//! cycles carry the incident half-edges is presented as a network of disks
//! joined by bands; the value is the contraction of the disk tensors along
//! the bands with the copairing.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{vertex_tensor_disk, DgFrobeniusAlgebra, GradedTensor};
use crate::error::{Error, Result};
use crate::graphs::{glue_legs, VertexSurface};
use crate::network::{EdgeChoice, NetEdge, NetVertex, Network};

/// Genus plus boundary cycles of leg labels; the evaluated tensor takes its
/// legs in the order of `legs()`.
pub type SurfaceSpec = VertexSurface;

/// Disk vertices (cyclic leg lists) joined by internal edges. Labels
/// `0..externals` are the legs of the surface being presented.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representative {
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
    pub externals: usize,
}

impl Representative {
    /// Surface obtained by contracting every internal edge.
    pub fn thicken(&self) -> VertexSurface {
        let mut vs: Vec<VertexSurface> = self
            .vertices
            .iter()
            .cloned()
            .map(VertexSurface::disk)
            .collect();
        for &[a, b] in &self.edges {
            vs = glue_legs(&vs, a, b);
        }
        assert_eq!(vs.len(), 1, "representative is connected");
        vs.pop().unwrap()
    }
}

fn check_spec(spec: &SurfaceSpec) -> Result<usize> {
    if spec.cycles.is_empty() {
        return Err(Error::Structural("surface needs a boundary cycle".into()));
    }
    let legs: BTreeSet<usize> = spec.legs().collect();
    if legs.len() != spec.valency() {
        return Err(Error::Structural("repeated leg label".into()));
    }
    let total = spec.valency() + 2 * (spec.cycles.len() - 1) + 4 * spec.genus;
    if total < 2 {
        return Err(Error::Arity(total));
    }
    Ok(total)
}

/// Every shape with genus at most `max_genus`, between one and `max_cycles`
/// boundary cycles and at most `max_legs` legs, the legs numbered in cycle
/// order. Shapes too small to evaluate are skipped.
pub fn surface_specs(max_genus: usize, max_cycles: usize, max_legs: usize) -> Vec<SurfaceSpec> {
    fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 1 {
            return vec![vec![n]];
        }
        (0..=n)
            .flat_map(|first| {
                compositions(n - first, parts - 1)
                    .into_iter()
                    .map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
            })
            .collect()
    }
    let mut out = Vec::new();
    for genus in 0..=max_genus {
        for cycles in 1..=max_cycles {
            for legs in 0..=max_legs {
                for sizes in compositions(legs, cycles) {
                    let mut next = 0..;
                    let spec = VertexSurface {
                        genus,
                        cycles: sizes
                            .iter()
                            .map(|&k| next.by_ref().take(k).collect())
                            .collect(),
                    };
                    if check_spec(&spec).is_ok() {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

/// One disk carrying the first cycle's legs, then a chord around each
/// further cycle's legs, then two interleaved chords per handle.
pub fn normal_form(spec: &SurfaceSpec) -> Result<Representative> {
    check_spec(spec)?;
    let n = spec.valency();
    let mut next = n;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut label = 0..;
    let mut cycle = Vec::new();
    let mut edges = Vec::new();
    for (j, c) in spec.cycles.iter().enumerate() {
        if j == 0 {
            cycle.extend(c.iter().map(|_| label.next().unwrap()));
            continue;
        }
        let (a, b) = (fresh(), fresh());
        cycle.push(a);
        cycle.extend(c.iter().map(|_| label.next().unwrap()));
        cycle.push(b);
        edges.push([a, b]);
    }
    for _ in 0..spec.genus {
        let (a, b, a2, b2) = (fresh(), fresh(), fresh(), fresh());
        cycle.extend([a, b, a2, b2]);
        edges.push([a, a2]);
        edges.push([b, b2]);
    }
    Ok(Representative {
        vertices: vec![cycle],
        edges,
        externals: n,
    })
}

fn rotated(c: &[usize], r: usize) -> Vec<usize> {
    (0..c.len()).map(|i| c[(r + i) % c.len()]).collect()
}

/// A random presentation of `spec`, built by undoing band contractions on
/// non-disk vertices until only disks remain, then splitting up to
/// `extra_splits` disks of valency at least four.
pub fn random_representative<R: Rng>(
    spec: &SurfaceSpec,
    rng: &mut R,
    extra_splits: usize,
) -> Result<Representative> {
    check_spec(spec)?;
    let n = spec.valency();
    let mut relabel = (0..n).collect::<Vec<_>>().into_iter();
    let start = VertexSurface {
        genus: spec.genus,
        cycles: spec
            .cycles
            .iter()
            .map(|c| c.iter().map(|_| relabel.next().unwrap()).collect())
            .collect(),
    };
    let mut vertices = vec![start];
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut next = n;
    let budget = 2 * spec.genus + spec.cycles.len() + 3;
    loop {
        let open: Vec<usize> = (0..vertices.len())
            .filter(|&v| !vertices[v].is_disk())
            .collect();
        let Some(&v) = open.choose(rng) else { break };
        let (h, k) = (next, next + 1);
        next += 2;
        edges.push([h, k]);
        let s = vertices[v].clone();
        let mut moves = Vec::new();
        if s.cycles.len() >= 2 {
            moves.push(0);
        }
        if s.genus >= 1 {
            moves.push(1);
        }
        if edges.len() <= budget {
            moves.push(2);
        }
        moves.shuffle(rng);
        for m in moves {
            match m {
                0 => {
                    let mut idx: Vec<usize> = (0..s.cycles.len()).collect();
                    idx.shuffle(rng);
                    let (i, j) = (idx[0], idx[1]);
                    let x = rotated(&s.cycles[i], rng.gen_range(0..s.cycles[i].len().max(1)));
                    let y = rotated(&s.cycles[j], rng.gen_range(0..s.cycles[j].len().max(1)));
                    let mut merged = vec![h];
                    merged.extend(x);
                    merged.push(k);
                    merged.extend(y);
                    let mut cycles: Vec<Vec<usize>> = s
                        .cycles
                        .iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i && c != j)
                        .map(|(_, c)| c.clone())
                        .collect();
                    cycles.insert(rng.gen_range(0..=cycles.len()), merged);
                    vertices[v] = VertexSurface {
                        genus: s.genus,
                        cycles,
                    };
                }
                1 => {
                    let c = rng.gen_range(0..s.cycles.len());
                    let z = rotated(&s.cycles[c], rng.gen_range(0..s.cycles[c].len().max(1)));
                    let m = rng.gen_range(0..=z.len());
                    let mut a = vec![h];
                    a.extend(&z[..m]);
                    let mut b = vec![k];
                    b.extend(&z[m..]);
                    let mut cycles = s.cycles.clone();
                    cycles[c] = a;
                    cycles.insert(c + 1, b);
                    vertices[v] = VertexSurface {
                        genus: s.genus - 1,
                        cycles,
                    };
                }
                _ => match split_vertex(&s, h, k, rng) {
                    Some((left, right)) => {
                        vertices[v] = left;
                        vertices.push(right);
                    }
                    None => continue,
                },
            }
            break;
        }
    }
    for _ in 0..extra_splits {
        let big: Vec<usize> = (0..vertices.len())
            .filter(|&v| vertices[v].valency() >= 4)
            .collect();
        let Some(&v) = big.choose(rng) else { break };
        let z = rotated(
            &vertices[v].cycles[0],
            rng.gen_range(0..vertices[v].valency()),
        );
        let m = rng.gen_range(1..z.len());
        let (h, k) = (next, next + 1);
        next += 2;
        edges.push([h, k]);
        let mut a = vec![h];
        a.extend(&z[..m]);
        let mut b = vec![k];
        b.extend(&z[m..]);
        vertices[v] = VertexSurface::disk(a);
        vertices.push(VertexSurface::disk(b));
    }
    Ok(Representative {
        vertices: vertices.into_iter().map(|v| v.cycles[0].clone()).collect(),
        edges,
        externals: n,
    })
}

/// Splits `s` along a new edge `(h, k)` so that contracting it restores
/// `s`. Neither side is a disk with a single leg.
fn split_vertex<R: Rng>(
    s: &VertexSurface,
    h: usize,
    k: usize,
    rng: &mut R,
) -> Option<(VertexSurface, VertexSurface)> {
    for _ in 0..32 {
        let c = rng.gen_range(0..s.cycles.len());
        let z = rotated(&s.cycles[c], rng.gen_range(0..s.cycles[c].len().max(1)));
        let m = rng.gen_range(0..=z.len());
        let g1 = rng.gen_range(0..=s.genus);
        let mut left = VertexSurface {
            genus: g1,
            cycles: vec![std::iter::once(h).chain(z[..m].iter().copied()).collect()],
        };
        let mut right = VertexSurface {
            genus: s.genus - g1,
            cycles: vec![std::iter::once(k).chain(z[m..].iter().copied()).collect()],
        };
        for (i, other) in s.cycles.iter().enumerate() {
            if i != c {
                if rng.gen_bool(0.5) {
                    &mut left
                } else {
                    &mut right
                }
                .cycles
                .push(other.clone());
            }
        }
        let degenerate = |v: &VertexSurface| v.is_disk() && v.valency() < 2;
        if !degenerate(&left) && !degenerate(&right) {
            return Some((left, right));
        }
    }
    None
}

/// Genus and cycle lengths.
type Shape = (usize, Vec<usize>);

/// Evaluates surfaces for one algebra, caching results by shape.
pub struct OtftEvaluator {
    alg: DgFrobeniusAlgebra,
    copairing: GradedTensor,
    disks: Mutex<HashMap<usize, Arc<GradedTensor>>>,
    surfaces: Mutex<HashMap<Shape, Arc<GradedTensor>>>,
}

impl OtftEvaluator {
    pub fn new(alg: &DgFrobeniusAlgebra) -> Result<Self> {
        let report = alg.validate();
        if !report.is_ok() {
            return Err(Error::Precondition(format!(
                "algebra fails {:?}",
                report.axioms()
            )));
        }
        Ok(OtftEvaluator {
            alg: alg.clone(),
            copairing: GradedTensor::from_matrix(&alg.copairing()?),
            disks: Mutex::new(HashMap::new()),
            surfaces: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &DgFrobeniusAlgebra {
        &self.alg
    }

    pub fn copairing(&self) -> &GradedTensor {
        &self.copairing
    }

    pub fn disk(&self, n: usize) -> Result<Arc<GradedTensor>> {
        if let Some(t) = self.disks.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let t = Arc::new(vertex_tensor_disk(&self.alg, n)?);
        self.disks.lock().unwrap().insert(n, t.clone());
        Ok(t)
    }

    /// Contraction of a representative; legs `0..externals` in order.
    pub fn evaluate(&self, rep: &Representative) -> Result<GradedTensor> {
        let tensors = rep
            .vertices
            .iter()
            .map(|c| self.disk(c.len()))
            .collect::<Result<Vec<_>>>()?;
        let net = Network {
            vertices: rep
                .vertices
                .iter()
                .zip(&tensors)
                .map(|(c, t)| NetVertex {
                    legs: c.clone(),
                    tensor: t.as_ref(),
                })
                .collect(),
            edges: rep
                .edges
                .iter()
                .map(|&ends| NetEdge {
                    ends,
                    choices: vec![EdgeChoice {
                        tensor: &self.copairing,
                        dt: false,
                    }],
                })
                .collect(),
            externals: (0..rep.externals).collect(),
        };
        let mut out = GradedTensor::zero(self.alg.dim(), rep.externals);
        for ((ext, _), v) in net.contract(self.alg.parity()) {
            out.add_to(ext, v);
        }
        Ok(out)
    }

    /// Tensor of a vertex surface, legs in the order of `spec.legs()`.
    pub fn vertex_tensor(&self, spec: &SurfaceSpec) -> Result<Arc<GradedTensor>> {
        let shape = (
            spec.genus,
            spec.cycles.iter().map(Vec::len).collect::<Vec<_>>(),
        );
        if let Some(t) = self.surfaces.lock().unwrap().get(&shape) {
            return Ok(t.clone());
        }
        let t = Arc::new(if spec.is_disk() {
            (*self.disk(spec.valency())?).clone()
        } else {
            self.evaluate(&normal_form(spec)?)?
        });
        self.surfaces.lock().unwrap().insert(shape, t.clone());
        Ok(t)
    }
}

pub fn vertex_tensor(alg: &DgFrobeniusAlgebra, spec: &SurfaceSpec) -> Result<GradedTensor> {
    Ok((*OtftEvaluator::new(alg)?.vertex_tensor(spec)?).clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueReport {
    pub glued: SurfaceSpec,
    pub equal: bool,
    /// Contraction of the separate tensors along the band.
    pub contracted: GradedTensor,
    /// Tensor of the glued surface.
    pub direct: GradedTensor,
}

/// Compares gluing before and after evaluation. With `second = None` both
/// slots are legs of `first`.
pub fn glue_check(
    alg: &DgFrobeniusAlgebra,
    first: &SurfaceSpec,
    second: Option<&SurfaceSpec>,
    slots: (usize, usize),
) -> Result<GlueReport> {
    let ev = OtftEvaluator::new(alg)?;
    let mut specs = vec![first.clone()];
    specs.extend(second.cloned());
    let legs: Vec<usize> = specs.iter().flat_map(|s| s.legs()).collect();
    if legs.iter().collect::<BTreeSet<_>>().len() != legs.len() {
        return Err(Error::SlotMismatch(
            "leg labels are shared between surfaces".into(),
        ));
    }
    let (a, b) = slots;
    let owner = |x: usize| specs.iter().position(|s| s.legs().any(|l| l == x));
    match (owner(a), owner(b)) {
        (Some(i), Some(j)) if a != b && (second.is_none() || i != j) => {}
        _ => {
            return Err(Error::SlotMismatch(format!(
                "cannot glue slots {a} and {b}"
            )))
        }
    }
    let glued = glue_legs(&specs, a, b).pop().unwrap();
    let dense: BTreeMap<usize, usize> = legs.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let tensors = specs
        .iter()
        .map(|s| ev.vertex_tensor(s))
        .collect::<Result<Vec<_>>>()?;
    let net = Network {
        vertices: specs
            .iter()
            .zip(&tensors)
            .map(|(s, t)| NetVertex {
                legs: s.legs().map(|l| dense[&l]).collect(),
                tensor: t.as_ref(),
            })
            .collect(),
        edges: vec![NetEdge {
            ends: [dense[&a], dense[&b]],
            choices: vec![EdgeChoice {
                tensor: ev.copairing(),
                dt: false,
            }],
        }],
        externals: glued.legs().map(|l| dense[&l]).collect(),
    };
    let mut contracted = GradedTensor::zero(alg.dim(), glued.valency());
    for ((ext, _), v) in net.contract(alg.parity()) {
        contracted.add_to(ext, v);
    }
    let direct = (*ev.vertex_tensor(&glued)?).clone();
    Ok(GlueReport {
        equal: contracted == direct,
        glued,
        contracted,
        direct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_specs_skip_small_disks() {
        let all = surface_specs(0, 1, 3);
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|s| s.valency() >= 2));
        assert_eq!(surface_specs(1, 2, 1).len(), 3 + 5);
    }
    use crate::scalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn algebras() -> [DgFrobeniusAlgebra; 2] {
        [
            DgFrobeniusAlgebra::dual_numbers(),
            DgFrobeniusAlgebra::contractible_endomorphisms(),
        ]
    }

    fn spec(genus: usize, cycles: Vec<Vec<usize>>) -> SurfaceSpec {
        VertexSurface { genus, cycles }
    }

    #[test]
    fn disk_matches_corolla() {
        for a in algebras() {
            assert_eq!(
                vertex_tensor(&a, &spec(0, vec![vec![0, 1, 2]])).unwrap(),
                vertex_tensor_disk(&a, 3).unwrap()
            );
        }
    }

    #[test]
    fn annulus_is_graded_dimension() {
        let a = DgFrobeniusAlgebra::dual_numbers();
        let t = vertex_tensor(&a, &spec(0, vec![vec![], vec![]])).unwrap();
        assert_eq!(t.get(&[]), scalar::int(2));
        let b = DgFrobeniusAlgebra::contractible_endomorphisms();
        assert!(vertex_tensor(&b, &spec(0, vec![vec![], vec![]]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn too_few_legs() {
        let a = DgFrobeniusAlgebra::dual_numbers();
        assert_eq!(
            vertex_tensor(&a, &spec(0, vec![vec![0]])).unwrap_err(),
            Error::Arity(1)
        );
    }

    #[test]
    fn normal_form_thickens_back() {
        for s in [
            spec(1, vec![vec![0, 1], vec![2]]),
            spec(2, vec![vec![]]),
            spec(0, vec![vec![], vec![5, 6], vec![]]),
        ] {
            let rep = normal_form(&s).unwrap();
            let t = rep.thicken();
            assert_eq!(t.genus, s.genus);
            let mut lens: Vec<usize> = t.cycles.iter().map(Vec::len).collect();
            let mut want: Vec<usize> = s.cycles.iter().map(Vec::len).collect();
            lens.sort();
            want.sort();
            assert_eq!(lens, want);
        }
    }

    #[test]
    fn random_representatives_thicken_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = spec(1, vec![vec![0, 1], vec![2]]);
        for _ in 0..20 {
            let rep = random_representative(&s, &mut rng, 2).unwrap();
            let t = rep.thicken();
            assert_eq!(t.genus, 1);
            assert_eq!(t.cycles.len(), 2);
            let c0 = t.cycles.iter().find(|c| c.len() == 2).unwrap();
            assert!(c0 == &vec![0, 1] || c0 == &vec![1, 0]);
            assert!(t.cycles.contains(&vec![2]));
        }
    }

    #[test]
    fn gluing_two_triangles() {
        for a in algebras() {
            let r = glue_check(
                &a,
                &spec(0, vec![vec![0, 1, 2]]),
                Some(&spec(0, vec![vec![3, 4, 5]])),
                (2, 3),
            )
            .unwrap();
            assert!(r.equal);
            assert_eq!(r.glued, spec(0, vec![vec![0, 1, 4, 5]]));
        }
    }

    #[test]
    fn self_gluing() {
        for a in algebras() {
            let same = glue_check(&a, &spec(0, vec![vec![0, 1, 2, 3]]), None, (0, 2)).unwrap();
            assert!(same.equal);
            assert_eq!((same.glued.genus, same.glued.cycles.len()), (0, 2));
            let crossed = glue_check(&a, &same.glued, None, (1, 3)).unwrap();
            assert!(crossed.equal);
            assert_eq!(crossed.glued, spec(1, vec![vec![]]));
        }
    }

    #[test]
    fn slot_errors() {
        let a = DgFrobeniusAlgebra::dual_numbers();
        let d = spec(0, vec![vec![0, 1, 2]]);
        assert!(matches!(
            glue_check(&a, &d, None, (0, 9)),
            Err(Error::SlotMismatch(_))
        ));
        assert!(matches!(
            glue_check(&a, &d, Some(&d), (0, 1)),
            Err(Error::SlotMismatch(_))
        ));
    }
}
