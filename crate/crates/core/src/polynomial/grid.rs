//! Uniform grids on boxes and sup-norm estimation over them.
//!
//! Grid maxima are lower bounds for the true sup norm. They are reported as
//! estimates, never as certificates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::rational;

/// A tensor grid with `points_per_axis` equispaced points per axis,
/// endpoints included. Points are enumerated row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    bounds: Vec<(BigRational, BigRational)>,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(bounds: Vec<(BigRational, BigRational)>, points_per_axis: usize) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::precondition("grid needs at least 2 points per axis"));
        }
        if bounds.is_empty() {
            return Err(Error::precondition("grid dimension must be at least 1"));
        }
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::precondition(
                "grid interval with lower bound above upper bound",
            ));
        }
        Ok(Grid {
            bounds,
            points_per_axis,
        })
    }

    /// `[0,1]^dim`.
    pub fn unit_cube(dim: usize, points_per_axis: usize) -> Result<Self> {
        Grid::new(
            vec![(BigRational::zero(), BigRational::one()); dim],
            points_per_axis,
        )
    }

    /// `[−n,n]^dim`.
    pub fn centered_cube(n: u32, dim: usize, points_per_axis: usize) -> Result<Self> {
        let n = BigRational::from_integer(n.into());
        Grid::new(vec![(-n.clone(), n); dim], points_per_axis)
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim() as u32)
    }

    /// `lo + (hi − lo)·i/(g − 1)` for `i = 0..g`.
    pub fn axis_values(&self, axis: usize) -> Vec<BigRational> {
        let (lo, hi) = &self.bounds[axis];
        let steps = BigInt::from(self.points_per_axis - 1);
        (0..self.points_per_axis)
            .map(|i| lo + (hi - lo) * BigRational::new(BigInt::from(i), steps.clone()))
            .collect()
    }

    pub fn point(&self, mut flat: usize) -> Vec<BigRational> {
        let g = self.points_per_axis;
        let mut coords = vec![BigRational::zero(); self.dim()];
        for axis in (0..self.dim()).rev() {
            let i = flat % g;
            flat /= g;
            let (lo, hi) = &self.bounds[axis];
            coords[axis] = lo + (hi - lo) * BigRational::new(BigInt::from(i), BigInt::from(g - 1));
        }
        coords
    }

    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|a| self.axis_values(a).iter().map(rational::to_f64).collect())
            .collect();
        let g = self.points_per_axis;
        (0..self.len())
            .map(|mut flat| {
                let mut p = vec![0.0; self.dim()];
                for axis in (0..self.dim()).rev() {
                    p[axis] = axes[axis][flat % g];
                    flat /= g;
                }
                p
            })
            .collect()
    }
}

/// Exact polynomial values on a grid sharing one positive denominator.
#[derive(Debug, Clone)]
pub struct GridValues {
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

impl GridValues {
    pub fn value(&self, i: usize) -> BigRational {
        BigRational::new(self.numerators[i].clone(), self.denominator.clone())
    }

    /// Exact `max |value|` over the grid.
    pub fn sup_abs(&self) -> BigRational {
        let top = self
            .numerators
            .iter()
            .map(|n| n.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        BigRational::new(top, self.denominator.clone())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.numerators
            .par_iter()
            .map(|n| rational::to_f64(&BigRational::new_raw(n.clone(), self.denominator.clone())))
            .collect()
    }
}

impl Polynomial {
    /// Evaluates exactly at every grid point.
    ///
    /// Axis values are written as `u_i / w` with integer `u_i`, coefficients
    /// are scaled to integers, and the polynomial is contracted one axis at a
    /// time by integer Horner passes, so no gcd is taken inside the loop.
    pub fn eval_grid(&self, grid: &Grid) -> Result<GridValues> {
        Error::check_dim(self.dim, grid.dim())?;
        let dense = self.to_dense();
        let coef_den = rational::lcm_of_denominators(&dense.data);

        let axes: Vec<(Vec<BigInt>, BigInt)> = (0..self.dim)
            .map(|a| {
                let vals = grid.axis_values(a);
                let w = rational::lcm_of_denominators(&vals);
                let u = vals.iter().map(|v| (v * &w).to_integer()).collect();
                (u, w)
            })
            .collect();

        // S_γ = c_γ·D·∏ w_j^(n_j − γ_j)
        let mut scaled = Vec::with_capacity(dense.data.len());
        for (off, c) in dense.data.iter().enumerate() {
            let idx = dense.index_of(off);
            let mut s = (c * &coef_den).to_integer();
            if !s.is_zero() {
                for (j, &g) in idx.iter().enumerate() {
                    let n = dense.shape[j] - 1;
                    s *= num_traits::pow(axes[j].1.clone(), n - g as usize);
                }
            }
            scaled.push(s);
        }
        let mut denominator = coef_den;
        for (j, (_, w)) in axes.iter().enumerate() {
            denominator *= num_traits::pow(w.clone(), dense.shape[j] - 1);
        }

        let numerators = contract_grid(&scaled, &dense.shape, &axes);
        Ok(GridValues {
            numerators,
            denominator,
        })
    }
}

// Contracts the leading axis against every grid value on that axis, then
// recurses on the remaining axes. The top level runs in parallel; results
// are collected in grid order.
fn contract_grid(data: &[BigInt], shape: &[usize], axes: &[(Vec<BigInt>, BigInt)]) -> Vec<BigInt> {
    let n = shape[0];
    let inner: usize = shape[1..].iter().product();
    let contract_at = |u: &BigInt| -> Vec<BigInt> {
        let mut acc: Vec<BigInt> = data[(n - 1) * inner..n * inner].to_vec();
        for k in (0..n - 1).rev() {
            for (a, c) in acc.iter_mut().zip(&data[k * inner..(k + 1) * inner]) {
                *a *= u;
                *a += c;
            }
        }
        acc
    };
    let values = &axes[0].0;
    if shape.len() == 1 {
        return values
            .par_iter()
            .map(|u| contract_at(u).pop().unwrap())
            .collect();
    }
    let per_value = |u: &BigInt| contract_grid(&contract_at(u), &shape[1..], &axes[1..]);
    if values.len() * data.len() > 4096 {
        values.par_iter().flat_map_iter(per_value).collect()
    } else {
        values.iter().flat_map(per_value).collect()
    }
}

/// Anything that can be evaluated in double precision on a grid.
pub trait GridFunction {
    fn grid_values_f64(&self, grid: &Grid) -> Result<Vec<f64>>;
}

impl GridFunction for Polynomial {
    fn grid_values_f64(&self, grid: &Grid) -> Result<Vec<f64>> {
        Ok(self.eval_grid(grid)?.to_f64())
    }
}

impl GridFunction for Expression {
    fn grid_values_f64(&self, grid: &Grid) -> Result<Vec<f64>> {
        Error::check_dim(self.dim(), grid.dim())?;
        grid.points_f64()
            .par_iter()
            .map(|p| self.eval_f64(p))
            .collect()
    }
}

/// Largest `|value|` over the grid.
pub fn sup_norm_estimate<F: GridFunction + ?Sized>(f: &F, grid: &Grid) -> Result<f64> {
    Ok(f.grid_values_f64(grid)?
        .into_iter()
        .fold(0.0, |m, v| m.max(v.abs())))
}

/// Exact grid maximum of `|p|`.
pub fn sup_norm_exact(p: &Polynomial, grid: &Grid) -> Result<BigRational> {
    Ok(p.eval_grid(grid)?.sup_abs())
}
