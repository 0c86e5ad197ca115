//! Checks of the exact identities and norm bounds satisfied by the
//! Bernstein operators. Each returns both sides so callers can report
//! counterexamples verbatim.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{bernstein_multi, bernstein_partial, FnSampler, LinearCombination, Sampler};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::multiindex::{binomial, falling_factorial, MultiIndex};
use crate::polynomial::{sup_norm_estimate, sup_norm_exact, Grid, Polynomial};
use crate::rational;

/// Two exact values that should coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn check_unit_interval(x: &BigRational) -> Result<()> {
    if x < &BigRational::zero() || x > &BigRational::one() {
        return Err(Error::precondition("x must lie in [0,1]"));
    }
    Ok(())
}

// C(n,k) x^k (1−x)^(n−k)
fn basis_value(n: u32, k: u32, x: &BigRational) -> BigRational {
    let c = BigRational::from_integer(BigInt::from(binomial(n, k)));
    c * Pow::pow(x, k) * Pow::pow(BigRational::one() - x, n - k)
}

/// `Σ_k k^(N) C(n,k) x^k (1−x)^(n−k)` summed term by term, against `n^(N) x^N`
/// (falling factorials).
pub fn moment_identity_check(n: u32, order: u32, x: &BigRational) -> Result<IdentityCheck> {
    if order > n {
        return Err(Error::precondition("moment order must not exceed n"));
    }
    check_unit_interval(x)?;
    let lhs = (0..=n)
        .map(|k| {
            BigRational::from_integer(falling_factorial(k, order).into()) * basis_value(n, k, x)
        })
        .fold(BigRational::zero(), |a, b| a + b);
    let rhs = BigRational::from_integer(falling_factorial(n, order).into()) * Pow::pow(x, order);
    Ok(IdentityCheck { lhs, rhs })
}

/// `Σ_k (k − nx)² C(n,k) x^k (1−x)^(n−k)` against `n x (1−x)`.
pub fn variance_identity_check(n: u32, x: &BigRational) -> Result<IdentityCheck> {
    if n == 0 {
        return Err(Error::precondition("n must be at least 1"));
    }
    check_unit_interval(x)?;
    let nn = BigRational::from_integer(n.into());
    let lhs = (0..=n)
        .map(|k| {
            let dev = BigRational::from_integer(k.into()) - &nn * x;
            &dev * &dev * basis_value(n, k, x)
        })
        .fold(BigRational::zero(), |a, b| a + b);
    let rhs = &nn * x * (BigRational::one() - x);
    Ok(IdentityCheck { lhs, rhs })
}

/// Grid sup norms of `∂^b B_a(f)` and `∂^b f` on `[0,1]^d`.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Exact grid maxima, present when `f` is a polynomial.
    pub exact: Option<(BigRational, BigRational)>,
}

impl BoundCheck {
    /// Exact comparison when available, otherwise `lhs ≤ rhs + tol`.
    pub fn holds(&self, tol: f64) -> bool {
        match &self.exact {
            Some((l, r)) => l <= r,
            None => self.lhs <= self.rhs + tol,
        }
    }
}

/// Compares `‖∂^b B_a(f)‖` with `‖∂^b f‖` on a uniform grid over `[0,1]^d`;
/// requires `a > b` in every slot.
pub fn derivative_bound_check(
    f: &Expression,
    b: &MultiIndex,
    a: &MultiIndex,
    grid_points: usize,
) -> Result<BoundCheck> {
    if !b.is_lt(a)? {
        return Err(Error::precondition(
            "derivative bound needs a > b componentwise",
        ));
    }
    let grid = Grid::unit_cube(f.dim(), grid_points)?;
    let approx = bernstein_multi(f, a)?.derivative(b)?;
    let lhs_exact = sup_norm_exact(&approx, &grid)?;
    match f.to_polynomial() {
        Some(p) => {
            let rhs_exact = sup_norm_exact(&p.derivative(b)?, &grid)?;
            Ok(BoundCheck {
                lhs: rational::to_f64(&lhs_exact),
                rhs: rational::to_f64(&rhs_exact),
                exact: Some((lhs_exact, rhs_exact)),
            })
        }
        None => Ok(BoundCheck {
            lhs: rational::to_f64(&lhs_exact),
            rhs: sup_norm_estimate(&f.diff(b)?, &grid)?,
            exact: None,
        }),
    }
}

/// Evaluates `∂^b B_a(f)(x)` directly and through the split
/// `∂^{b′} B_{a′}(∂^{b₁e₁} B_{a₁e₁}(f))(x)`, where primes zero the first
/// slot. The inner operator expands only in `x₁`; the outer one only in
/// `x₂, …, x_d` with `x₁` held fixed.
pub fn factorization_check<S: Sampler + ?Sized>(
    f: &S,
    a: &MultiIndex,
    b: &MultiIndex,
    x: &[BigRational],
) -> Result<IdentityCheck> {
    let d = f.dim();
    if d < 2 {
        return Err(Error::precondition("factorization needs dimension ≥ 2"));
    }
    Error::check_dim(d, a.dim())?;
    Error::check_dim(d, b.dim())?;
    Error::check_dim(d, x.len())?;
    if a.entries().contains(&0) {
        return Err(Error::precondition("factorization needs a ≥ 1"));
    }

    let lhs = bernstein_multi(f, a)?.derivative(b)?.eval_exact(x)?;

    let a_first = MultiIndex::unit(0, a.get(0), d);
    let b_first = MultiIndex::new(vec![b.get(0)])?;
    // μ(x₁, y) = ∂^{b₁} B_{a₁e₁}(f)(x₁, y), built per frozen y.
    let inner = FnSampler::new(d, |point: &[BigRational]| {
        let frozen: Vec<Option<BigRational>> = std::iter::once(None)
            .chain(point[1..].iter().cloned().map(Some))
            .collect();
        bernstein_partial(f, &a_first, &frozen)?
            .derivative(&b_first)?
            .eval_exact(&point[..1])
    });

    let a_rest = MultiIndex::new(
        std::iter::once(0)
            .chain(a.entries()[1..].iter().copied())
            .collect(),
    )?;
    let b_rest = MultiIndex::new(b.entries()[1..].to_vec())?;
    let mut frozen = vec![None; d];
    frozen[0] = Some(x[0].clone());
    let rhs = bernstein_partial(&inner, &a_rest, &frozen)?
        .derivative(&b_rest)?
        .eval_exact(&x[1..])?;
    Ok(IdentityCheck { lhs, rhs })
}

#[derive(Debug, Clone)]
pub struct LinearityCheck {
    pub combined: Polynomial,
    pub separate: Polynomial,
}

impl LinearityCheck {
    pub fn holds(&self) -> bool {
        self.combined == self.separate
    }
}

/// `B_a(f + c·g)` against `B_a(f) + c·B_a(g)`.
pub fn linearity_check<F, G>(
    f: &F,
    g: &G,
    c: &BigRational,
    a: &MultiIndex,
) -> Result<LinearityCheck>
where
    F: Sampler + ?Sized,
    G: Sampler + ?Sized,
{
    Error::check_dim(f.dim(), g.dim())?;
    let sum = LinearCombination { f, c: c.clone(), g };
    let combined = bernstein_multi(&sum, a)?;
    let separate = &bernstein_multi(f, a)? + &bernstein_multi(g, a)?.scale(c);
    Ok(LinearityCheck { combined, separate })
}
