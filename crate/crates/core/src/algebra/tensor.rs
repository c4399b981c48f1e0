use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Parity of the Koszul sign picked up when the symbols listed in source
/// order (with the given parities) are moved to positions `target`.
/// Returns `true` for a `-1`.
pub fn koszul_sign(parities: &[bool], target: &[usize]) -> bool {
    debug_assert_eq!(parities.len(), target.len());
    let mut odd = false;
    for a in 0..target.len() {
        if !parities[a] {
            continue;
        }
        for b in a + 1..target.len() {
            if parities[b] && target[a] > target[b] {
                odd = !odd;
            }
        }
    }
    odd
}

/// An element of `A^{(x) n}` (or of its dual), indexed by basis multi-indices.
///
/// Logically a dense `dim^arity` array; only the nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTensor {
    dim: usize,
    arity: usize,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

impl GradedTensor {
    pub fn zero(dim: usize, arity: usize) -> Self {
        GradedTensor {
            dim,
            arity,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let mut t = Self::zero(m.rows(), 2);
        for (i, j, x) in m.nonzeros() {
            t.entries.insert(vec![i, j], x.clone());
        }
        t
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.arity != 2 {
            return Err(Error::Arity(self.arity));
        }
        Ok(Matrix::from_fn(self.dim, self.dim, |i, j| {
            self.get(&[i, j])
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of logical entries, `dim^arity`.
    pub fn len(&self) -> usize {
        self.dim.pow(self.arity as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        self.entries.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn get_ref(&self, idx: &[usize]) -> Option<&Scalar> {
        self.entries.get(idx)
    }

    pub fn add_to(&mut self, idx: Vec<usize>, x: Scalar) {
        debug_assert_eq!(idx.len(), self.arity);
        debug_assert!(idx.iter().all(|&i| i < self.dim));
        if x.is_zero() {
            return;
        }
        match self.entries.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(x);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += x;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.entries.iter()
    }

    /// Reorders legs: leg `k` of the result is leg `order[k]` of `self`,
    /// with the Koszul sign of the rearrangement for each entry.
    pub fn permute_legs(&self, order: &[usize], parity: &[bool]) -> GradedTensor {
        assert_eq!(order.len(), self.arity);
        let mut target = vec![0; self.arity];
        for (k, &o) in order.iter().enumerate() {
            target[o] = k;
        }
        let mut out = GradedTensor::zero(self.dim, self.arity);
        for (idx, x) in &self.entries {
            let par: Vec<bool> = idx.iter().map(|&i| parity[i]).collect();
            let new_idx: Vec<usize> = order.iter().map(|&o| idx[o]).collect();
            let v = if koszul_sign(&par, &target) {
                -x.clone()
            } else {
                x.clone()
            };
            out.add_to(new_idx, v);
        }
        out
    }
}
