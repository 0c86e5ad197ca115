//! Row-major dense tensors, used for coefficient tables indexed by a box of
//! multiindices `{γ : γ ≤ n}`.

use std::ops::{Add, Mul};

use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense<T> {
    pub shape: Vec<usize>,
    pub data: Vec<T>,
}

impl<T: Clone + Zero> Dense<T> {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Dense {
            shape,
            data: vec![T::zero(); len],
        }
    }
}

impl<T> Dense<T> {
    pub fn from_data(shape: Vec<usize>, data: Vec<T>) -> Self {
        assert_eq!(shape.iter().product::<usize>(), data.len());
        Dense { shape, data }
    }

    pub fn offset(&self, index: &[u32]) -> usize {
        index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i as usize)
    }

    pub fn index_of(&self, mut offset: usize) -> Vec<u32> {
        let mut idx = vec![0u32; self.shape.len()];
        for (slot, &n) in idx.iter_mut().zip(&self.shape).rev() {
            *slot = (offset % n) as u32;
            offset /= n;
        }
        idx
    }

    /// Applies the square matrix `m` along `axis`:
    /// `out[.., k, ..] = Σ_g m[k][g] · self[.., g, ..]`.
    pub fn apply_axis(&self, axis: usize, m: &[Vec<T>]) -> Dense<T>
    where
        T: Clone + Zero,
        for<'a> &'a T: Mul<&'a T, Output = T>,
        T: Add<T, Output = T>,
    {
        let n = self.shape[axis];
        assert_eq!(m.len(), n);
        let inner: usize = self.shape[axis + 1..].iter().product();
        let outer: usize = self.shape[..axis].iter().product();
        let mut out = Dense::zeros(self.shape.clone());
        for o in 0..outer {
            let base = o * n * inner;
            for (k, row) in m.iter().enumerate() {
                for (g, coef) in row.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    for i in 0..inner {
                        let src = &self.data[base + g * inner + i];
                        if src.is_zero() {
                            continue;
                        }
                        let dst = &mut out.data[base + k * inner + i];
                        *dst = std::mem::replace(dst, T::zero()) + coef * src;
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_round_trip() {
        let t: Dense<i64> = Dense::zeros(vec![3, 1, 4]);
        for off in 0..t.data.len() {
            assert_eq!(t.offset(&t.index_of(off)), off);
        }
    }

    #[test]
    fn apply_axis_matches_matrix_product() {
        // 2x3 tensor, transform axis 1 by a 3x3 matrix.
        let t = Dense::from_data(vec![2, 3], vec![1i64, 2, 3, 4, 5, 6]);
        let m = vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]];
        let out = t.apply_axis(1, &m);
        assert_eq!(out.data, vec![1, 3, 6, 4, 9, 15]);
        let m0 = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(t.apply_axis(0, &m0).data, vec![4, 5, 6, 1, 2, 3]);
    }
}
