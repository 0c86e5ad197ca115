use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::multiindex::MultiIndex;
use crate::polynomial::Polynomial;
use crate::rational;

/// A function that can be sampled at rational points.
///
/// Samples are exact rationals. Functions that cannot be evaluated exactly
/// return the exact value of their double-precision approximation.
pub trait Sampler: Sync {
    fn dim(&self) -> usize;

    fn sample(&self, point: &[BigRational]) -> Result<BigRational>;

    /// The sample at the Bernstein grid node `β/α`.
    fn sample_grid(&self, beta: &MultiIndex, alpha: &MultiIndex) -> Result<BigRational> {
        self.sample(&beta.ratio_over(alpha)?)
    }
}

impl Sampler for Expression {
    fn dim(&self) -> usize {
        Expression::dim(self)
    }

    fn sample(&self, point: &[BigRational]) -> Result<BigRational> {
        if self.is_rational_function() {
            self.eval_exact(point)
        } else {
            let p: Vec<f64> = point.iter().map(rational::to_f64).collect();
            rational::from_f64(self.eval_f64(&p)?)
        }
    }
}

impl Sampler for Polynomial {
    fn dim(&self) -> usize {
        Polynomial::dim(self)
    }

    fn sample(&self, point: &[BigRational]) -> Result<BigRational> {
        self.eval_exact(point)
    }
}

/// Values on the Bernstein grid `{β/α : β ≤ α}`, stored in lexicographic
/// order of `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    alpha: MultiIndex,
    values: Vec<BigRational>,
}

impl ValueTable {
    pub fn new(alpha: MultiIndex, values: Vec<BigRational>) -> Result<Self> {
        if alpha.entries().contains(&0) {
            return Err(Error::precondition("value table needs α ≥ 1"));
        }
        if values.len() != alpha.box_len() {
            return Err(Error::precondition(format!(
                "value table for α = {alpha:?} needs {} entries, got {}",
                alpha.box_len(),
                values.len()
            )));
        }
        Ok(ValueTable { alpha, values })
    }

    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    fn offset(&self, beta: &MultiIndex) -> usize {
        beta.entries()
            .iter()
            .zip(self.alpha.entries())
            .fold(0, |acc, (&b, &a)| acc * (a as usize + 1) + b as usize)
    }

    fn grid_index(&self, point: &[BigRational]) -> Option<MultiIndex> {
        let entries = point
            .iter()
            .zip(self.alpha.entries())
            .map(|(x, &a)| {
                let scaled = x * BigRational::from_integer(BigInt::from(a));
                if !scaled.is_integer() {
                    return None;
                }
                let k = u32::try_from(scaled.to_integer()).ok()?;
                (k <= a).then_some(k)
            })
            .collect::<Option<Vec<_>>>()?;
        MultiIndex::new(entries).ok()
    }
}

impl Sampler for ValueTable {
    fn dim(&self) -> usize {
        self.alpha.dim()
    }

    fn sample(&self, point: &[BigRational]) -> Result<BigRational> {
        Error::check_dim(self.dim(), point.len())?;
        let beta = self
            .grid_index(point)
            .ok_or_else(|| Error::precondition("point is not on the value table's grid"))?;
        Ok(self.values[self.offset(&beta)].clone())
    }

    fn sample_grid(&self, beta: &MultiIndex, alpha: &MultiIndex) -> Result<BigRational> {
        if alpha != &self.alpha {
            return Err(Error::precondition(format!(
                "grid mismatch: table has α = {:?}, requested {alpha:?}",
                self.alpha
            )));
        }
        Ok(self.values[self.offset(beta)].clone())
    }
}

/// Either an expression or a raw table of grid values.
#[derive(Debug, Clone)]
pub enum SampledFunction {
    Expr(Expression),
    Table(ValueTable),
}

impl Sampler for SampledFunction {
    fn dim(&self) -> usize {
        match self {
            SampledFunction::Expr(e) => Sampler::dim(e),
            SampledFunction::Table(t) => t.dim(),
        }
    }

    fn sample(&self, point: &[BigRational]) -> Result<BigRational> {
        match self {
            SampledFunction::Expr(e) => e.sample(point),
            SampledFunction::Table(t) => t.sample(point),
        }
    }

    fn sample_grid(&self, beta: &MultiIndex, alpha: &MultiIndex) -> Result<BigRational> {
        match self {
            SampledFunction::Expr(e) => e.sample_grid(beta, alpha),
            SampledFunction::Table(t) => t.sample_grid(beta, alpha),
        }
    }
}

/// Adapts a closure.
pub struct FnSampler<F> {
    dim: usize,
    f: F,
}

impl<F> FnSampler<F>
where
    F: Fn(&[BigRational]) -> Result<BigRational> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnSampler { dim, f }
    }
}

impl<F> Sampler for FnSampler<F>
where
    F: Fn(&[BigRational]) -> Result<BigRational> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, point: &[BigRational]) -> Result<BigRational> {
        Error::check_dim(self.dim, point.len())?;
        (self.f)(point)
    }
}

/// `f + c·g`, sampled pointwise.
pub struct LinearCombination<'a, F: ?Sized, G: ?Sized> {
    pub f: &'a F,
    pub c: BigRational,
    pub g: &'a G,
}

impl<F: Sampler + ?Sized, G: Sampler + ?Sized> Sampler for LinearCombination<'_, F, G> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn sample(&self, point: &[BigRational]) -> Result<BigRational> {
        Ok(self.f.sample(point)? + &self.c * self.g.sample(point)?)
    }

    fn sample_grid(&self, beta: &MultiIndex, alpha: &MultiIndex) -> Result<BigRational> {
        Ok(self.f.sample_grid(beta, alpha)? + &self.c * self.g.sample_grid(beta, alpha)?)
    }
}
