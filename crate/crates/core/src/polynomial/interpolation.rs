//! Univariate Lagrange interpolation and its remainder bound.

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::multiindex::{falling_factorial, MultiIndex};
use crate::rational;

fn check_distinct(nodes: &[BigRational]) -> Result<()> {
    let mut sorted: Vec<&BigRational> = nodes.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNodes);
    }
    Ok(())
}

fn linear(root: &BigRational) -> Polynomial {
    // x − root
    &Polynomial::variable(0, 1) - &Polynomial::constant(root.clone(), 1)
}

/// `L_j` for `1 ≤ j ≤ n`: one at the `j`-th node, zero at every other node.
pub fn lagrange_basis(nodes: &[BigRational], j: usize) -> Result<Polynomial> {
    check_distinct(nodes)?;
    if j == 0 || j > nodes.len() {
        return Err(Error::precondition("basis index must lie in 1..=n"));
    }
    let xj = &nodes[j - 1];
    let mut acc = Polynomial::constant(BigRational::one(), 1);
    for (k, xk) in nodes.iter().enumerate() {
        if k + 1 != j {
            let scale = (xj - xk).recip();
            acc = &acc * &linear(xk).scale(&scale);
        }
    }
    Ok(acc)
}

/// `π = Σ values[k]·L_k`, the unique polynomial of degree `< nodes.len()`
/// through the given samples.
pub fn interpolate(values: &[BigRational], nodes: &[BigRational]) -> Result<Polynomial> {
    if values.len() != nodes.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            found: values.len(),
        });
    }
    check_distinct(nodes)?;
    let mut acc = Polynomial::zero(1);
    for (k, v) in values.iter().enumerate() {
        acc = &acc + &lagrange_basis(nodes, k + 1)?.scale(v);
    }
    Ok(acc)
}

/// `ω(x) = ∏ (x − x_k)`, monic of degree `nodes.len()`.
pub fn nodal_polynomial(nodes: &[BigRational]) -> Result<Polynomial> {
    check_distinct(nodes)?;
    Ok(nodes
        .iter()
        .fold(Polynomial::constant(BigRational::one(), 1), |acc, x| {
            &acc * &linear(x)
        }))
}

/// `|ω(y)|·deriv_sup / n!` for a point `y` right of every node.
///
/// Bounds `|f(y) − π(y)|` whenever `deriv_sup` bounds `|f^(n)|` on
/// `[min node, y]`.
pub fn interp_error_bound(nodes: &[BigRational], y: &BigRational, deriv_sup: f64) -> Result<f64> {
    if nodes.is_empty() {
        return Err(Error::precondition("at least one node is required"));
    }
    if nodes.iter().any(|x| x >= y) {
        return Err(Error::precondition(
            "evaluation point must lie right of every node",
        ));
    }
    let omega = nodal_polynomial(nodes)?.eval_exact(std::slice::from_ref(y))?;
    let n = nodes.len() as u32;
    let scaled = omega.abs() / BigRational::from_integer(falling_factorial(n, n).into());
    Ok(rational::to_f64(&scaled) * deriv_sup)
}

/// Observed interpolation error of a univariate expression next to its
/// remainder bound.
#[derive(Debug, Clone)]
pub struct InterpolationCheck {
    pub interpolant: Polynomial,
    pub actual_error: f64,
    pub deriv_sup: f64,
    pub bound: f64,
}

impl InterpolationCheck {
    /// Samples `f` at the nodes (exactly where possible), interpolates, and
    /// compares `|f(y) − π(y)|` with the bound, estimating `sup |f^(n)|` on
    /// `[min node, y]` from the symbolic derivative on a uniform grid.
    pub fn run(
        f: &Expression,
        nodes: &[BigRational],
        y: &BigRational,
        grid: usize,
    ) -> Result<Self> {
        Error::check_dim(1, f.dim())?;
        let values = nodes
            .iter()
            .map(|x| sample_1d(f, x))
            .collect::<Result<Vec<_>>>()?;
        let interpolant = interpolate(&values, nodes)?;
        let fy = f.eval_f64(&[rational::to_f64(y)])?;
        let piy = rational::to_f64(&interpolant.eval_exact(std::slice::from_ref(y))?);
        let n = nodes.len() as u32;
        let deriv = f.diff(&MultiIndex::new(vec![n])?)?;
        let lo = nodes.iter().min().unwrap().clone();
        let window = super::Grid::new(vec![(lo, y.clone())], grid)?;
        let deriv_sup = super::sup_norm_estimate(&deriv, &window)?;
        Ok(InterpolationCheck {
            actual_error: (fy - piy).abs(),
            bound: interp_error_bound(nodes, y, deriv_sup)?,
            deriv_sup,
            interpolant,
        })
    }
}

fn sample_1d(f: &Expression, x: &BigRational) -> Result<BigRational> {
    if f.is_rational_function() {
        f.eval_exact(std::slice::from_ref(x))
    } else {
        rational::from_f64(f.eval_f64(&[rational::to_f64(x)])?)
    }
}
