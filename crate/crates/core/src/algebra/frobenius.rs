use num_traits::{One, Zero};

use super::tensor::GradedTensor;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::ValidationReport;
use crate::scalar::{self, Scalar};

/// Finite-dimensional Z/2-graded algebra with differential and invariant
/// pairing, presented by structure constants in a homogeneous basis.
///
/// Construction only checks shapes; the algebraic axioms are checked by
/// [`DgFrobeniusAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgFrobeniusAlgebra {
    dim: usize,
    parity: Vec<bool>,
    /// `mult[(i * dim + j) * dim + k]`: coefficient of `x_k` in `x_i x_j`.
    mult: Vec<Scalar>,
    diff: Matrix,
    pairing: Matrix,
    unit: Option<usize>,
}

impl DgFrobeniusAlgebra {
    pub fn new(
        parity: Vec<bool>,
        mult: Vec<Scalar>,
        diff: Matrix,
        pairing: Matrix,
        unit: Option<usize>,
    ) -> Result<Self> {
        let dim = parity.len();
        if dim == 0 {
            return Err(Error::Structural("dimension must be positive".into()));
        }
        if mult.len() != dim * dim * dim {
            return Err(Error::Structural(format!(
                "multiplication has {} entries, expected {}",
                mult.len(),
                dim * dim * dim
            )));
        }
        for (name, m) in [("diff", &diff), ("pairing", &pairing)] {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Structural(format!(
                    "{name} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if let Some(u) = unit {
            if u >= dim {
                return Err(Error::Structural(format!("unit index {u} out of range")));
            }
        }
        Ok(DgFrobeniusAlgebra {
            dim,
            parity,
            mult,
            diff,
            pairing,
            unit,
        })
    }

    /// `Q[x]/(x^2)` with basis `{1, x}`, both even, `<1,x> = 1`, `d = 0`.
    pub fn dual_numbers() -> Self {
        let mut mult = vec![scalar::zero(); 8];
        let at = |i: usize, j: usize, k: usize| (i * 2 + j) * 2 + k;
        mult[at(0, 0, 0)] = scalar::one();
        mult[at(0, 1, 1)] = scalar::one();
        mult[at(1, 0, 1)] = scalar::one();
        let pairing = Matrix::from_fn(2, 2, |i, j| {
            if i != j {
                scalar::one()
            } else {
                scalar::zero()
            }
        });
        Self::new(
            vec![false, false],
            mult,
            Matrix::zeros(2, 2),
            pairing,
            Some(0),
        )
        .unwrap()
    }

    /// Endomorphisms of the (1|1)-dimensional graded space with supertrace
    /// pairing and `d = [D, -]`, where the odd square-zero `D` sends the odd
    /// basis vector to the even one. Basis `E_00, E_01, E_10, E_11`.
    pub fn contractible_endomorphisms() -> Self {
        let mut d = Matrix::zeros(2, 2);
        d[(0, 1)] = scalar::one();
        Self::endomorphisms(1, 1, &d).unwrap()
    }

    /// `End(V)` for `V` of dimension `(even|odd)`, with supertrace pairing
    /// and `d = [D, -]` for an odd operator `D` on `V` with `D^2 = 0`.
    /// Basis `E_ab` at index `a * dim V + b`; the first `even` basis vectors
    /// of `V` are even.
    pub fn endomorphisms(even: usize, odd: usize, op: &Matrix) -> Result<Self> {
        let m = even + odd;
        if op.rows() != m || op.cols() != m {
            return Err(Error::Structural(format!("operator must be {m}x{m}")));
        }
        let odd_v = |a: usize| a >= even;
        if op.nonzeros().any(|(i, j, _)| odd_v(i) == odd_v(j)) {
            return Err(Error::Structural("operator must be odd".into()));
        }
        if !(op * op).is_zero() {
            return Err(Error::Structural("operator must square to zero".into()));
        }
        let n = m * m;
        let idx = |a: usize, b: usize| a * m + b;
        let parity: Vec<bool> = (0..n).map(|k| odd_v(k / m) != odd_v(k % m)).collect();
        let mut mult = vec![scalar::zero(); n * n * n];
        for a in 0..m {
            for b in 0..m {
                for d in 0..m {
                    mult[(idx(a, b) * n + idx(b, d)) * n + idx(a, d)] = scalar::one();
                }
            }
        }
        let pairing = Matrix::from_fn(n, n, |p, q| {
            let (a, b, c, d) = (p / m, p % m, q / m, q % m);
            if b == c && a == d {
                scalar::sign(odd_v(a))
            } else {
                scalar::zero()
            }
        });
        // [D, E_ab] = sum_c D_ca E_cb - (-1)^{|E_ab|} sum_c D_bc E_ac
        let mut diff = Matrix::zeros(n, n);
        for a in 0..m {
            for b in 0..m {
                let col = idx(a, b);
                for c in 0..m {
                    diff[(idx(c, b), col)] += &op[(c, a)];
                    let x = &op[(b, c)];
                    if parity[col] {
                        diff[(idx(a, c), col)] += x;
                    } else {
                        diff[(idx(a, c), col)] -= x;
                    }
                }
            }
        }
        // The unit is a sum of basis vectors unless V is one-dimensional.
        let unit = (m == 1).then_some(0);
        Self::new(parity, mult, diff, pairing, unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self) -> &[bool] {
        &self.parity
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.parity[i]
    }

    pub fn diff(&self) -> &Matrix {
        &self.diff
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn mult_coeff(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.mult[(i * self.dim + j) * self.dim + k]
    }

    /// `x_i x_j` as a coefficient vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let start = (i * self.dim + j) * self.dim;
        &self.mult[start..start + self.dim]
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let c = ai * bj;
                for (k, m) in self.basis_product(i, j).iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn pair(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero();
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let g = &self.pairing[(i, j)];
                if !g.is_zero() {
                    s += ai * bj * g;
                }
            }
        }
        s
    }

    pub fn apply(&self, op: &Matrix, a: &[Scalar]) -> Vec<Scalar> {
        (0..self.dim)
            .map(|i| {
                let mut s = Scalar::zero();
                for (j, aj) in a.iter().enumerate() {
                    if !aj.is_zero() && !op[(i, j)].is_zero() {
                        s += &op[(i, j)] * aj;
                    }
                }
                s
            })
            .collect()
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    /// Graded dimension `sum_i (-1)^{|x_i|}`.
    pub fn graded_dimension(&self) -> Scalar {
        let even = self.parity.iter().filter(|p| !**p).count() as i64;
        scalar::int(even - (self.dim as i64 - even))
    }

    /// The inverse of the pairing as a two-legged tensor `C` with
    /// `sum_i g[k][i] C[i][j] = delta_kj`.
    pub fn copairing(&self) -> Result<Matrix> {
        self.pairing.inverse().ok_or(Error::SingularPairing)
    }

    /// Checks every axiom by brute force over basis tuples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let p = &self.parity;
        let mut rep = ValidationReport::default();
        let vecs: Vec<Vec<Scalar>> = (0..n).map(|i| self.basis(i)).collect();

        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.mult_coeff(i, j, k).is_zero() && p[k] != (p[i] ^ p[j]) {
                        rep.push(
                            "parity_mult",
                            vec![i, j, k],
                            "product does not respect parity",
                        );
                    }
                }
                if !self.diff[(i, j)].is_zero() && p[i] == p[j] {
                    rep.push("parity_diff", vec![i, j], "differential is not odd");
                }
                if !self.pairing[(i, j)].is_zero() && p[i] != p[j] {
                    rep.push(
                        "pairing_even",
                        vec![i, j],
                        "pairing of mixed parities is nonzero",
                    );
                }
                let swapped = if p[i] && p[j] {
                    -self.pairing[(j, i)].clone()
                } else {
                    self.pairing[(j, i)].clone()
                };
                if self.pairing[(i, j)] != swapped && i < j {
                    rep.push(
                        "pairing_graded_symmetric",
                        vec![i, j],
                        "<x_i,x_j> != (-1)^{|i||j|} <x_j,x_i>",
                    );
                }
            }
        }
        if self.pairing.inverse().is_none() {
            rep.push(
                "pairing_nondegenerate",
                vec![],
                format!("pairing has rank {} < {n}", self.pairing.rank()),
            );
        }

        let d = &self.diff;
        let dx: Vec<Vec<Scalar>> = vecs.iter().map(|v| self.apply(d, v)).collect();
        if !(d * d).is_zero() {
            let (i, j, _) = (d * d)
                .nonzeros()
                .next()
                .map(|(i, j, x)| (i, j, x.clone()))
                .unwrap();
            rep.push("d_square_zero", vec![j, i], "d^2 != 0");
        }
        for i in 0..n {
            for j in 0..n {
                let xy = self.basis_product(i, j).to_vec();
                // derivation: d(x_i x_j) = d(x_i) x_j + (-1)^{|i|} x_i d(x_j)
                let lhs = self.apply(d, &xy);
                let a = self.mul(&dx[i], &vecs[j]);
                let b = self.mul(&vecs[i], &dx[j]);
                let rhs: Vec<Scalar> = a
                    .iter()
                    .zip(&b)
                    .map(|(a, b)| if p[i] { a - b } else { a + b })
                    .collect();
                if lhs != rhs {
                    rep.push("d_derivation", vec![i, j], "Leibniz rule fails");
                }
                // skew self-adjointness: <d a, b> = -(-1)^{|a|} <a, d b>
                let l = self.pair(&dx[i], &vecs[j]);
                let r = self.pair(&vecs[i], &dx[j]);
                let expected = if p[i] { r } else { -r };
                if l != expected {
                    rep.push("d_skew_adjoint", vec![i, j], "<d a,b> != -(-1)^a <a,d b>");
                }
                for k in 0..n {
                    let left = self.mul(&xy, &vecs[k]);
                    let jk = self.basis_product(j, k).to_vec();
                    let right = self.mul(&vecs[i], &jk);
                    if left != right {
                        rep.push(
                            "associativity",
                            vec![i, j, k],
                            "(x_i x_j) x_k != x_i (x_j x_k)",
                        );
                    }
                    // invariance: <a, bc> = <ab, c>
                    if self.pair(&vecs[i], &jk) != self.pair(&xy, &vecs[k]) {
                        rep.push("pairing_invariant", vec![i, j, k], "<a,bc> != <ab,c>");
                    }
                }
            }
        }
        if let Some(u) = self.unit {
            if p[u] {
                rep.push("unit", vec![u], "unit is odd");
            }
            for (i, v) in vecs.iter().enumerate() {
                if self.basis_product(u, i) != v.as_slice()
                    || self.basis_product(i, u) != v.as_slice()
                {
                    rep.push("unit", vec![u, i], "unit does not act as identity");
                }
            }
        }
        rep
    }
}

/// `t_n(a_1, ..., a_n) = <a_1 ... a_{n-1}, a_n>` as a sparse tensor.
pub fn vertex_tensor_disk(alg: &DgFrobeniusAlgebra, n: usize) -> Result<GradedTensor> {
    if n < 2 {
        return Err(Error::Arity(n));
    }
    let dim = alg.dim();
    let mut out = GradedTensor::zero(dim, n);
    let mut idx = Vec::with_capacity(n);
    fn walk(
        alg: &DgFrobeniusAlgebra,
        n: usize,
        prod: Vec<Scalar>,
        idx: &mut Vec<usize>,
        out: &mut GradedTensor,
    ) {
        if idx.len() == n - 1 {
            for last in 0..alg.dim() {
                let mut s = Scalar::zero();
                for (k, c) in prod.iter().enumerate() {
                    if !c.is_zero() && !alg.pairing()[(k, last)].is_zero() {
                        s += c * &alg.pairing()[(k, last)];
                    }
                }
                if !s.is_zero() {
                    let mut full = idx.clone();
                    full.push(last);
                    out.add_to(full, s);
                }
            }
            return;
        }
        for i in 0..alg.dim() {
            let next = alg.mul(&prod, &alg.basis(i));
            if next.iter().all(Zero::is_zero) {
                continue;
            }
            idx.push(i);
            walk(alg, n, next, idx, out);
            idx.pop();
        }
    }
    for first in 0..dim {
        idx.push(first);
        walk(alg, n, alg.basis(first), &mut idx, &mut out);
        idx.pop();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn shipped_algebras_validate() {
        assert!(DgFrobeniusAlgebra::dual_numbers().validate().is_ok());
        let e = DgFrobeniusAlgebra::contractible_endomorphisms();
        let rep = e.validate();
        assert!(rep.is_ok(), "{:?}", rep);
    }

    #[test]
    fn singular_pairing_reported() {
        let a = DgFrobeniusAlgebra::dual_numbers();
        let g = Matrix::from_fn(2, 2, |i, j| if i == 0 && j == 0 { int(1) } else { int(0) });
        let bad =
            DgFrobeniusAlgebra::new(a.parity.clone(), a.mult.clone(), a.diff.clone(), g, None)
                .unwrap();
        let rep = bad.validate();
        assert!(rep.violates("pairing_nondegenerate"));
    }

    #[test]
    fn shape_mismatch_is_structural() {
        let err = DgFrobeniusAlgebra::new(
            vec![false],
            vec![],
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            None,
        );
        assert!(matches!(err, Err(Error::Structural(_))));
    }

    #[test]
    fn copairing_examples() {
        let c = DgFrobeniusAlgebra::dual_numbers().copairing().unwrap();
        // 1 (x) x + x (x) 1
        assert_eq!(
            c,
            Matrix::from_fn(2, 2, |i, j| if i != j { int(1) } else { int(0) })
        );
        let one_dim = DgFrobeniusAlgebra::new(
            vec![false],
            vec![int(1)],
            Matrix::zeros(1, 1),
            Matrix::from_fn(1, 1, |_, _| int(2)),
            None,
        )
        .unwrap();
        assert_eq!(one_dim.copairing().unwrap()[(0, 0)], ratio(1, 2));
    }

    #[test]
    fn copairing_inverts_in_both_slots() {
        let e = DgFrobeniusAlgebra::contractible_endomorphisms();
        let c = e.copairing().unwrap();
        assert_eq!(&e.pairing * &c, Matrix::identity(4));
        assert_eq!(&c * &e.pairing, Matrix::identity(4));
    }

    #[test]
    fn disk_tensor_values() {
        let a = DgFrobeniusAlgebra::dual_numbers();
        let t3 = vertex_tensor_disk(&a, 3).unwrap();
        assert_eq!(t3.get(&[0, 0, 1]), int(1));
        assert_eq!(t3.get(&[1, 1, 1]), int(0));
        assert!(vertex_tensor_disk(&a, 1).is_err());
    }

    #[test]
    fn graded_dimensions() {
        assert_eq!(
            DgFrobeniusAlgebra::dual_numbers().graded_dimension(),
            int(2)
        );
        assert_eq!(
            DgFrobeniusAlgebra::contractible_endomorphisms().graded_dimension(),
            int(0)
        );
    }
}
