use super::frobenius::DgFrobeniusAlgebra;
use super::hodge::HodgeDecomposition;
use super::tensor::GradedTensor;
use crate::error::Result;
use crate::linalg::Matrix;

/// `K_t = constant + u * u_coeff` with `u = e^{-t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatKernel {
    pub constant: Matrix,
    pub u_coeff: Matrix,
}

impl HeatKernel {
    /// `K_0`, i.e. `u = 1`.
    pub fn at_zero(&self) -> Matrix {
        &self.constant + &self.u_coeff
    }

    /// `dK/dt + (Delta (x) id) K` as a polynomial in `u`, coefficients
    /// `[u^0, u^1]`. Uses `du/dt = -u`.
    pub fn ode_residual(&self, h: &HodgeDecomposition) -> [Matrix; 2] {
        let lap = h.laplacian();
        let lhs_u = -&self.u_coeff;
        let rhs_const = -&(lap * &self.constant);
        let rhs_u = -&(lap * &self.u_coeff);
        [
            &Matrix::zeros(lhs_u.rows(), lhs_u.cols()) - &rhs_const,
            &lhs_u - &rhs_u,
        ]
    }
}

/// `K_t = (e^{-t Delta} (x) id) C` with `e^{-t Delta} = pi + u Delta`.
pub fn heat_kernel(alg: &DgFrobeniusAlgebra, h: &HodgeDecomposition) -> Result<HeatKernel> {
    let c = alg.copairing()?;
    Ok(HeatKernel {
        constant: h.pi() * &c,
        u_coeff: h.laplacian() * &c,
    })
}

/// `alpha = c_pi + u c_delta + u c_s dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeForm {
    pub c_pi: Matrix,
    pub c_delta: Matrix,
    pub c_s: Matrix,
}

/// Components of an `A (x) A`-valued form spanned by `1, u, u dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormComponents {
    pub one: Matrix,
    pub u: Matrix,
    pub udt: Matrix,
}

impl FormComponents {
    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.u.is_zero() && self.udt.is_zero()
    }
}

impl EdgeForm {
    pub fn tensors(&self) -> [GradedTensor; 3] {
        [
            GradedTensor::from_matrix(&self.c_pi),
            GradedTensor::from_matrix(&self.c_delta),
            GradedTensor::from_matrix(&self.c_s),
        ]
    }

    /// Pullback to `t = 0`.
    pub fn at_zero(&self) -> Matrix {
        &self.c_pi + &self.c_delta
    }

    /// Limit `t -> infinity`.
    pub fn at_infinity(&self) -> Matrix {
        self.c_pi.clone()
    }

    /// The combined differential: `d` on the first leg, `(-1)^{|i|} d` on the
    /// second leg, and de Rham (`u -> -u dt`) past both legs with sign
    /// `(-1)^{|i|+|j|}`.
    pub fn total_differential(&self, alg: &DgFrobeniusAlgebra) -> FormComponents {
        let d = alg.diff();
        let p = alg.parity();
        let n = alg.dim();
        let alg_d = |m: &Matrix| -> Matrix {
            let first = d * m;
            let second = m * &d.transpose();
            Matrix::from_fn(n, n, |i, j| {
                if p[i] {
                    &first[(i, j)] - &second[(i, j)]
                } else {
                    &first[(i, j)] + &second[(i, j)]
                }
            })
        };
        let de_rham = Matrix::from_fn(n, n, |i, j| {
            let x = -self.c_delta[(i, j)].clone();
            if p[i] != p[j] {
                -x
            } else {
                x
            }
        });
        FormComponents {
            one: alg_d(&self.c_pi),
            u: alg_d(&self.c_delta),
            udt: &alg_d(&self.c_s) + &de_rham,
        }
    }
}

pub fn alpha_form(alg: &DgFrobeniusAlgebra, h: &HodgeDecomposition) -> Result<EdgeForm> {
    let c = alg.copairing()?;
    let lap_c = h.laplacian() * &c;
    Ok(EdgeForm {
        c_pi: h.pi() * &c,
        c_s: h.s() * &lap_c,
        c_delta: lap_c,
    })
}
