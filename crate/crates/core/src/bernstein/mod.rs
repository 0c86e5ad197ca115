//! Bernstein operators on `[0,1]^d`.
//!
//! `B_α(f)(x) = Σ_{β≤α} C(α,β) f(β/α) x^β (1−x)^{α−β}` is expanded straight
//! into the monomial basis. Expansion is separable: along an axis of degree
//! `n` the sample at index `β` contributes `C(n,γ) C(γ,β) (−1)^{γ−β}` to the
//! coefficient of `x^γ`, so the whole expansion is one integer matrix pass
//! per axis over the sample table.

mod identities;
mod sampler;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::dense::Dense;
use crate::error::{Error, Result};
use crate::multiindex::{binomial_row, MultiIndex};
use crate::polynomial::Polynomial;
use crate::rational;

pub use identities::{
    derivative_bound_check, factorization_check, linearity_check, moment_identity_check,
    variance_identity_check, BoundCheck, IdentityCheck, LinearityCheck,
};
pub use sampler::{FnSampler, LinearCombination, SampledFunction, Sampler, ValueTable};

/// `B_n(f)` for a univariate `f`.
pub fn bernstein_1d<S: Sampler + ?Sized>(f: &S, n: u32) -> Result<Polynomial> {
    Error::check_dim(1, f.dim())?;
    bernstein_multi(f, &MultiIndex::new(vec![n])?)
}

/// `B_α(f)` for `α ≥ 1`.
pub fn bernstein_multi<S: Sampler + ?Sized>(f: &S, alpha: &MultiIndex) -> Result<Polynomial> {
    Error::check_dim(f.dim(), alpha.dim())?;
    if alpha.entries().contains(&0) {
        return Err(Error::precondition(
            "B_α needs α ≥ 1; use bernstein_partial for degenerate degrees",
        ));
    }
    let grid: Vec<MultiIndex> = alpha.below().collect();
    let samples = grid
        .par_iter()
        .map(|beta| f.sample_grid(beta, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(expand(alpha.entries(), &samples))
}

/// `B_α(f)` for `α ≠ 0` with some zero degrees: directions with `α_j = 0`
/// are not expanded but held at `frozen[j]`. The result is a polynomial in
/// the active variables only, in their original order.
pub fn bernstein_partial<S: Sampler + ?Sized>(
    f: &S,
    alpha: &MultiIndex,
    frozen: &[Option<BigRational>],
) -> Result<Polynomial> {
    Error::check_dim(f.dim(), alpha.dim())?;
    Error::check_dim(f.dim(), frozen.len())?;
    if alpha.is_zero() {
        return Err(Error::precondition("bernstein_partial needs α ≠ 0"));
    }
    let active: Vec<usize> = (0..alpha.dim()).filter(|&j| alpha.get(j) > 0).collect();
    for (j, v) in frozen.iter().enumerate() {
        if alpha.get(j) == 0 && v.is_none() {
            return Err(Error::precondition(format!(
                "missing frozen coordinate x{j}"
            )));
        }
    }
    let alpha_plus = MultiIndex::new(active.iter().map(|&j| alpha.get(j)).collect())?;
    let grid: Vec<MultiIndex> = alpha_plus.below().collect();
    let samples = grid
        .par_iter()
        .map(|beta| {
            let mut point: Vec<BigRational> = frozen
                .iter()
                .map(|v| v.clone().unwrap_or_default())
                .collect();
            for (slot, &j) in active.iter().enumerate() {
                point[j] = BigRational::new(beta.get(slot).into(), alpha.get(j).into());
            }
            f.sample(&point)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(expand(alpha_plus.entries(), &samples))
}

/// `m[γ][β] = C(n,γ) C(γ,β) (−1)^(γ−β)`: monomial coefficients of the
/// degree-`n` Bernstein basis, one column per basis polynomial.
fn basis_matrix(n: u32) -> Vec<Vec<BigInt>> {
    let top = binomial_row(n);
    (0..=n)
        .map(|g| {
            let row = binomial_row(g);
            (0..=n)
                .map(|b| {
                    if b > g {
                        BigInt::from(0)
                    } else {
                        let c = &top[g as usize] * &row[b as usize];
                        if (g - b) % 2 == 1 {
                            -c
                        } else {
                            c
                        }
                    }
                })
                .collect()
        })
        .collect()
}

// Samples are in lexicographic order over {β ≤ degrees}.
fn expand(degrees: &[u32], samples: &[BigRational]) -> Polynomial {
    let common = rational::lcm_of_denominators(samples);
    let numerators: Vec<BigInt> = samples
        .iter()
        .map(|s| (s * BigRational::from_integer(common.clone())).to_integer())
        .collect();
    let shape: Vec<usize> = degrees.iter().map(|&n| n as usize + 1).collect();
    let mut table = Dense::from_data(shape, numerators);
    for (axis, &n) in degrees.iter().enumerate() {
        table = table.apply_axis(axis, &basis_matrix(n));
    }
    let inv = BigRational::new(BigInt::one(), common);
    let coefs = Dense::from_data(
        table.shape.clone(),
        table
            .data
            .into_iter()
            .map(|c| BigRational::from_integer(c) * &inv)
            .collect(),
    );
    Polynomial::from_dense(&coefs)
}
