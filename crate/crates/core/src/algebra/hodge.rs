use num_traits::Zero;

use super::frobenius::DgFrobeniusAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::ValidationReport;
use crate::scalar::{self, Scalar};

/// Operators `(s, pi)` with `ds + sd = id - pi` and the side conditions, plus
/// the derived Laplacian `ds + sd`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDecomposition {
    s: Matrix,
    pi: Matrix,
    laplacian: Matrix,
}

impl HodgeDecomposition {
    pub fn new(alg: &DgFrobeniusAlgebra, s: Matrix, pi: Matrix) -> Result<Self> {
        let n = alg.dim();
        for (name, m) in [("s", &s), ("pi", &pi)] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Structural(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let d = alg.diff();
        let laplacian = &(d * &s) + &(&s * d);
        Ok(HodgeDecomposition { s, pi, laplacian })
    }

    /// `s = 0, pi = id`, the only choice when `d = 0`.
    pub fn trivial(alg: &DgFrobeniusAlgebra) -> Self {
        let n = alg.dim();
        Self::new(alg, Matrix::zeros(n, n), Matrix::identity(n)).unwrap()
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn pi(&self) -> &Matrix {
        &self.pi
    }

    pub fn laplacian(&self) -> &Matrix {
        &self.laplacian
    }
}

fn first_nonzero(m: &Matrix) -> Vec<usize> {
    m.nonzeros()
        .next()
        .map(|(i, j, _)| vec![i, j])
        .unwrap_or_default()
}

fn check_zero(rep: &mut ValidationReport, axiom: &'static str, m: &Matrix, detail: &str) {
    if !m.is_zero() {
        rep.push(axiom, first_nonzero(m), detail);
    }
}

/// Checks the seven Hodge identities, the parities of `s` and `pi`, and the
/// derived `Delta^2 = Delta`, `d Delta = Delta d`.
pub fn validate_hodge(
    alg: &DgFrobeniusAlgebra,
    h: &HodgeDecomposition,
) -> Result<ValidationReport> {
    let n = alg.dim();
    if h.s.rows() != n || h.pi.rows() != n {
        return Err(Error::Structural(
            "Hodge operators do not match algebra dimension".into(),
        ));
    }
    let p = alg.parity();
    let (d, s, pi, lap) = (alg.diff(), &h.s, &h.pi, &h.laplacian);
    let g = alg.pairing();
    let id = Matrix::identity(n);
    let mut rep = ValidationReport::default();

    for (i, j, _) in s.nonzeros() {
        if p[i] == p[j] {
            rep.push("s_odd", vec![i, j], "s is not an odd operator");
        }
    }
    for (i, j, _) in pi.nonzeros() {
        if p[i] != p[j] {
            rep.push("pi_even", vec![i, j], "pi is not an even operator");
        }
    }
    check_zero(
        &mut rep,
        "ds_plus_sd",
        &(lap - &(&id - pi)),
        "ds + sd != id - pi",
    );
    check_zero(&mut rep, "s_square_zero", &(s * s), "s^2 != 0");
    check_zero(&mut rep, "pi_idempotent", &(&(pi * pi) - pi), "pi^2 != pi");
    check_zero(&mut rep, "d_pi_zero", &(d * pi), "d pi != 0");
    check_zero(&mut rep, "pi_d_zero", &(pi * d), "pi d != 0");
    check_zero(&mut rep, "pi_s_zero", &(pi * s), "pi s != 0");
    check_zero(&mut rep, "s_pi_zero", &(s * pi), "s pi != 0");
    // <s x_a, x_b> = (-1)^{|a|} <x_a, s x_b>
    let lhs = &s.transpose() * g;
    let rhs = g * s;
    let s_adj = Matrix::from_fn(n, n, |a, b| {
        let r = if p[a] {
            -rhs[(a, b)].clone()
        } else {
            rhs[(a, b)].clone()
        };
        &lhs[(a, b)] - &r
    });
    check_zero(
        &mut rep,
        "s_self_adjoint",
        &s_adj,
        "<s a,b> != (-1)^a <a,s b>",
    );
    check_zero(
        &mut rep,
        "pi_self_adjoint",
        &(&(&pi.transpose() * g) - &(g * pi)),
        "<pi a,b> != <a,pi b>",
    );
    check_zero(
        &mut rep,
        "laplacian_idempotent",
        &(&(lap * lap) - lap),
        "Delta^2 != Delta",
    );
    check_zero(
        &mut rep,
        "laplacian_commutes_d",
        &(&(d * lap) - &(lap * d)),
        "d Delta != Delta d",
    );
    Ok(rep)
}

/// Pairing-orthogonal projection onto a complement of `im d` inside `ker d`.
fn harmonic_projection(alg: &DgFrobeniusAlgebra) -> Result<Matrix> {
    let n = alg.dim();
    let d = alg.diff();
    let p = alg.parity();
    let split = |v: &[Scalar]| -> Vec<Vec<Scalar>> {
        [false, true]
            .iter()
            .map(|&par| {
                (0..n)
                    .map(|i| {
                        if p[i] == par {
                            v[i].clone()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .filter(|w| w.iter().any(|x| !x.is_zero()))
            .collect()
    };
    let mut spanning: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..n {
        let col: Vec<Scalar> = (0..n).map(|i| d[(i, j)].clone()).collect();
        spanning.extend(split(&col));
    }
    let rank_of = |vs: &[Vec<Scalar>]| -> usize {
        if vs.is_empty() {
            return 0;
        }
        Matrix::from_fn(vs.len(), n, |i, j| vs[i][j].clone()).rank()
    };
    let mut harmonic: Vec<Vec<Scalar>> = Vec::new();
    let mut current = rank_of(&spanning);
    for v in d.nullspace().iter().flat_map(|v| split(v)) {
        spanning.push(v.clone());
        let r = rank_of(&spanning);
        if r > current {
            current = r;
            harmonic.push(v);
        } else {
            spanning.pop();
        }
    }
    if harmonic.is_empty() {
        return Ok(Matrix::zeros(n, n));
    }
    let b = Matrix::from_fn(n, harmonic.len(), |i, k| harmonic[k][i].clone());
    let g = alg.pairing();
    let gram = &(&b.transpose() * g) * &b;
    let gram_inv = gram.inverse().ok_or_else(|| {
        Error::HodgeInfeasible("pairing degenerates on the harmonic subspace".into())
    })?;
    Ok(&(&(&b * &gram_inv) * &b.transpose()) * g)
}

/// Linear conditions on `s` given `pi`: `ds + sd = id - pi`, `pi s = s pi = 0`,
/// self-adjointness, oddness. Unknowns are the odd entries of `s`.
fn s_system(alg: &DgFrobeniusAlgebra, pi: &Matrix) -> (Vec<(usize, usize)>, Matrix, Vec<Scalar>) {
    let n = alg.dim();
    let p = alg.parity();
    let d = alg.diff();
    let g = alg.pairing();
    let vars: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] != p[j])
        .collect();
    let var_of = |i: usize, j: usize| vars.iter().position(|&v| v == (i, j));
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    let mut push = |row: Vec<Scalar>, b: Scalar| {
        if row.iter().any(|x| !x.is_zero()) || !b.is_zero() {
            rows.push(row);
            rhs.push(b);
        }
    };
    let m = vars.len();
    for a in 0..n {
        for b in 0..n {
            let mut row = vec![Scalar::zero(); m];
            for k in 0..n {
                if let Some(v) = var_of(k, b) {
                    row[v] += &d[(a, k)];
                }
                if let Some(v) = var_of(a, k) {
                    row[v] += &d[(k, b)];
                }
            }
            let target = if a == b {
                scalar::one()
            } else {
                Scalar::zero()
            } - &pi[(a, b)];
            push(row, target);

            let mut ps = vec![Scalar::zero(); m];
            let mut sp = vec![Scalar::zero(); m];
            let mut adj = vec![Scalar::zero(); m];
            for k in 0..n {
                if let Some(v) = var_of(k, b) {
                    ps[v] += &pi[(a, k)];
                    let t = &g[(a, k)];
                    if p[a] {
                        adj[v] += t;
                    } else {
                        adj[v] -= t;
                    }
                }
                if let Some(v) = var_of(a, k) {
                    sp[v] += &pi[(k, b)];
                }
                if let Some(v) = var_of(k, a) {
                    adj[v] += &g[(k, b)];
                }
            }
            push(ps, Scalar::zero());
            push(sp, Scalar::zero());
            push(adj, Scalar::zero());
        }
    }
    let mat = Matrix::from_fn(rows.len(), m, |i, j| rows[i][j].clone());
    (vars, mat, rhs)
}

fn s_from(vars: &[(usize, usize)], x: &[Scalar], n: usize) -> Matrix {
    let mut s = Matrix::zeros(n, n);
    for (&(i, j), v) in vars.iter().zip(x) {
        s[(i, j)] = v.clone();
    }
    s
}

/// Up to `max` distinct valid Hodge decompositions, obtained from the affine
/// solution space of the linear conditions followed by the `s -> s d s`
/// correction that enforces `s^2 = 0`.
pub fn hodge_candidates(alg: &DgFrobeniusAlgebra, max: usize) -> Result<Vec<HodgeDecomposition>> {
    let n = alg.dim();
    let pi = harmonic_projection(alg)?;
    let (vars, mat, rhs) = s_system(alg, &pi);
    let (x0, null) = if vars.is_empty() {
        if rhs.iter().any(|b| !b.is_zero()) {
            return Err(Error::HodgeInfeasible("no odd operators available".into()));
        }
        (Vec::new(), Vec::new())
    } else {
        mat.solve(&rhs).ok_or_else(|| {
            Error::HodgeInfeasible(format!(
                "{} linear conditions on {} unknowns are inconsistent",
                rhs.len(),
                vars.len()
            ))
        })?
    };
    let mut seeds = vec![x0.clone()];
    for v in &null {
        for c in [1i64, -1, 2] {
            seeds.push(
                x0.iter()
                    .zip(v)
                    .map(|(a, b)| a + b * scalar::int(c))
                    .collect(),
            );
        }
    }
    let d = alg.diff();
    let mut out: Vec<HodgeDecomposition> = Vec::new();
    let mut last_failure = None;
    for x in seeds {
        let s0 = s_from(&vars, &x, n);
        let s = &(&s0 * d) * &s0;
        let h = HodgeDecomposition::new(alg, s, pi.clone())?;
        let rep = validate_hodge(alg, &h)?;
        if rep.is_ok() {
            if !out.contains(&h) {
                out.push(h);
                if out.len() >= max {
                    break;
                }
            }
        } else {
            last_failure = Some(rep.axioms().join(", "));
        }
    }
    if out.is_empty() {
        return Err(Error::HodgeInfeasible(format!(
            "linear solutions found but none passes validation ({})",
            last_failure.unwrap_or_default()
        )));
    }
    Ok(out)
}

/// Builds one Hodge decomposition by exact elimination.
pub fn construct_hodge(alg: &DgFrobeniusAlgebra) -> Result<HodgeDecomposition> {
    let rep = alg.validate();
    if !rep.is_ok() {
        return Err(Error::Precondition(format!(
            "algebra fails axioms: {}",
            rep.axioms().join(", ")
        )));
    }
    Ok(hodge_candidates(alg, 1)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differential_forces_identity_projection() {
        let a = DgFrobeniusAlgebra::dual_numbers();
        let h = construct_hodge(&a).unwrap();
        assert!(h.s().is_zero());
        assert_eq!(h.pi(), &Matrix::identity(2));
        assert!(h.laplacian().is_zero());
        assert_eq!(h, HodgeDecomposition::trivial(&a));
    }

    #[test]
    fn contractible_example_has_zero_projection() {
        let a = DgFrobeniusAlgebra::contractible_endomorphisms();
        let h = construct_hodge(&a).unwrap();
        assert!(h.pi().is_zero());
        assert!(validate_hodge(&a, &h).unwrap().is_ok());
        assert_eq!(h.laplacian(), &Matrix::identity(4));
    }

    #[test]
    fn contractible_example_has_two_distinct_decompositions() {
        let a = DgFrobeniusAlgebra::contractible_endomorphisms();
        let hs = hodge_candidates(&a, 2).unwrap();
        assert_eq!(hs.len(), 2);
        assert_ne!(hs[0], hs[1]);
    }

    #[test]
    fn identity_projection_fails_on_acyclic_algebra() {
        let a = DgFrobeniusAlgebra::contractible_endomorphisms();
        let h = HodgeDecomposition::trivial(&a);
        let rep = validate_hodge(&a, &h).unwrap();
        assert!(rep.violates("d_pi_zero") && rep.violates("pi_d_zero"));
    }
}
