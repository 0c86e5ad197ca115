//! Exact multivariate polynomials over ℚ in the monomial basis.
//!
//! A [`Polynomial`] is a map from exponent multiindices to nonzero
//! rational coefficients. Zero coefficients are never stored, so
//! structural equality is polynomial equality.

mod grid;
mod homothety;
mod interpolation;
mod serial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dense::Dense;
use crate::error::{Error, Result};
use crate::multiindex::{falling_factorial, MultiIndex};
use crate::rational;

pub use grid::{sup_norm_estimate, sup_norm_exact, Grid, GridFunction, GridValues};
pub use homothety::Homothety;
pub use interpolation::{
    interp_error_bound, interpolate, lagrange_basis, nodal_polynomial, InterpolationCheck,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "polynomial dimension must be at least 1");
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational, dim: usize) -> Self {
        Self::monomial(MultiIndex::zeros(dim), c)
    }

    /// The coordinate function `x_j`.
    pub fn variable(j: usize, dim: usize) -> Self {
        assert!(j < dim, "variable index out of range");
        Self::monomial(MultiIndex::unit(j, 1, dim), BigRational::one())
    }

    pub fn monomial(exp: MultiIndex, c: BigRational) -> Self {
        let mut p = Polynomial::zero(exp.dim());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (MultiIndex, BigRational)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(dim);
        for (exp, c) in terms {
            Error::check_dim(dim, exp.dim())?;
            p.add_term(exp, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &MultiIndex) -> BigRational {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (exp, c) = self.terms.iter().next().unwrap();
                exp.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Per-variable maximum exponent (all zeros for the zero polynomial).
    pub fn degree_bound(&self) -> MultiIndex {
        let mut deg = vec![0u32; self.dim];
        for exp in self.terms.keys() {
            for (d, &e) in deg.iter_mut().zip(exp.entries()) {
                *d = (*d).max(e);
            }
        }
        MultiIndex::new(deg).unwrap()
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(BigRational::one(), self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal `∂^b`; each exponent drops by `b` and picks up the falling factorial.
    pub fn derivative(&self, b: &MultiIndex) -> Result<Polynomial> {
        Error::check_dim(self.dim, b.dim())?;
        let mut out = Polynomial::zero(self.dim);
        for (exp, c) in &self.terms {
            let Some(rest) = exp.checked_sub(b) else {
                continue;
            };
            let factor: BigInt = exp
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(&e, &k)| BigInt::from(falling_factorial(e, k)))
                .product();
            out.terms
                .insert(rest, c * BigRational::from_integer(factor));
        }
        Ok(out)
    }

    pub fn eval_exact(&self, x: &[BigRational]) -> Result<BigRational> {
        Error::check_dim(self.dim, x.len())?;
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        Ok(horner(&self.to_dense(), x))
    }

    /// Horner's scheme, one variable at a time, in double precision.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        Error::check_dim(self.dim, x.len())?;
        if self.is_zero() {
            return Ok(0.0);
        }
        let dense = self.to_dense();
        let dense = Dense::from_data(
            dense.shape.clone(),
            dense.data.iter().map(rational::to_f64).collect(),
        );
        Ok(horner(&dense, x))
    }

    /// `p ∘ h`, expanding every `(λx_j + v_j)^k` by the binomial theorem.
    pub fn compose_homothety(&self, h: &Homothety) -> Result<Polynomial> {
        Error::check_dim(self.dim, h.dim())?;
        let mut dense = self.to_dense();
        for axis in 0..self.dim {
            let n = dense.shape[axis] as u32 - 1;
            let m = affine_power_matrix(n, h.scale(), &h.offset()[axis]);
            dense = dense.apply_axis(axis, &m);
        }
        Ok(Polynomial::from_dense(&dense))
    }

    /// Restricts `x_j` to the given value for every `Some` slot, returning a
    /// polynomial in the remaining (`None`) variables.
    pub fn partial_eval(&self, values: &[Option<BigRational>]) -> Result<Polynomial> {
        Error::check_dim(self.dim, values.len())?;
        let free: Vec<usize> = (0..self.dim).filter(|&j| values[j].is_none()).collect();
        if free.is_empty() {
            return Err(Error::precondition(
                "partial evaluation must leave a variable free",
            ));
        }
        let mut out = Polynomial::zero(free.len());
        for (exp, c) in &self.terms {
            let mut coef = c.clone();
            for (j, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    coef *= num_traits::Pow::pow(v, exp.get(j));
                }
            }
            let rest = MultiIndex::new(free.iter().map(|&j| exp.get(j)).collect()).unwrap();
            out.add_term(rest, coef);
        }
        Ok(out)
    }

    /// Lifts a polynomial in fewer variables into dimension `dim`, placing
    /// its variable `i` at slot `slots[i]`.
    pub fn embed(&self, dim: usize, slots: &[usize]) -> Result<Polynomial> {
        Error::check_dim(self.dim, slots.len())?;
        let mut out = Polynomial::zero(dim);
        for (exp, c) in &self.terms {
            let mut e = vec![0u32; dim];
            for (i, &s) in slots.iter().enumerate() {
                e[s] = exp.get(i);
            }
            out.add_term(MultiIndex::new(e).unwrap(), c.clone());
        }
        Ok(out)
    }

    pub(crate) fn to_dense(&self) -> Dense<BigRational> {
        let shape = self
            .degree_bound()
            .entries()
            .iter()
            .map(|&n| n as usize + 1)
            .collect();
        let mut dense = Dense::zeros(shape);
        for (exp, c) in &self.terms {
            let off = dense.offset(exp.entries());
            dense.data[off] = c.clone();
        }
        dense
    }

    pub(crate) fn from_dense(dense: &Dense<BigRational>) -> Polynomial {
        let mut p = Polynomial::zero(dense.shape.len());
        for (off, c) in dense.data.iter().enumerate() {
            if !c.is_zero() {
                p.terms
                    .insert(MultiIndex::new(dense.index_of(off)).unwrap(), c.clone());
            }
        }
        p
    }
}

// Row n of the matrix taking coefficients of p(x) to those of p(λx + v):
// m[k][g] = C(g, k) λ^k v^(g−k).
fn affine_power_matrix(n: u32, scale: &BigRational, offset: &BigRational) -> Vec<Vec<BigRational>> {
    let size = n as usize + 1;
    let scale_pows: Vec<BigRational> = powers(scale, size);
    let offset_pows: Vec<BigRational> = powers(offset, size);
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for g in 0..size {
        let row = crate::multiindex::binomial_row(g as u32);
        for k in 0..=g {
            m[k][g] =
                BigRational::from_integer(row[k].clone()) * &scale_pows[k] * &offset_pows[g - k];
        }
    }
    m
}

fn powers(x: &BigRational, count: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(count);
    let mut acc = BigRational::one();
    for _ in 0..count {
        out.push(acc.clone());
        acc *= x;
    }
    out
}

// Contracts the trailing axis first, one Horner pass per axis.
fn horner<T>(dense: &Dense<T>, x: &[T]) -> T
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T>,
    T: Add<T, Output = T>,
{
    let mut data = dense.data.clone();
    for axis in (0..dense.shape.len()).rev() {
        let n = dense.shape[axis];
        data = data
            .chunks(n)
            .map(|row| {
                row.iter()
                    .rev()
                    .fold(T::zero(), |acc, c| &acc * &x[axis] + c.clone())
            })
            .collect();
    }
    data.pop().unwrap_or_else(T::zero)
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}](", self.dim)?;
        fmt::Display::fmt(self, f)?;
        f.write_str(")")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (exp, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", rational::format(c))?;
            for (j, &k) in exp.entries().iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{j}")?,
                    _ => write!(f, "*x{j}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
