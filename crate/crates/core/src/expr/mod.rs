//! Smooth functions `ℝ^d → ℝ` as expression trees.
//!
//! The node set (rational constants, variables, `+ − · /`, non-negative
//! integer powers, `sin`, `cos`, `exp`) is closed under partial
//! differentiation, so every `∂^β f` needed for verification is again an
//! [`Expression`].

mod diff;
mod parse;
mod print;

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polynomial::{Homothety, Polynomial};
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    fn apply_f64(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
        }
    }
}

/// A node of the expression tree. Children are shared.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(BigRational),
    Var(usize),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Pow(Arc<Expr>, u32),
    Apply(Func, Arc<Expr>),
}

/// Constructors that fold constants and drop neutral elements.
pub mod build {
    use super::*;

    pub fn constant(c: BigRational) -> Arc<Expr> {
        Arc::new(Expr::Const(c))
    }

    pub fn int(n: i64) -> Arc<Expr> {
        constant(rational::int(n))
    }

    pub fn var(i: usize) -> Arc<Expr> {
        Arc::new(Expr::Var(i))
    }

    fn as_const(e: &Expr) -> Option<&BigRational> {
        match e {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn add(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) => constant(x + y),
            (Some(x), _) if x.is_zero() => b,
            (_, Some(y)) if y.is_zero() => a,
            _ => Arc::new(Expr::Add(a, b)),
        }
    }

    pub fn sub(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) => constant(x - y),
            (Some(x), _) if x.is_zero() => neg(b),
            (_, Some(y)) if y.is_zero() => a,
            _ => Arc::new(Expr::Sub(a, b)),
        }
    }

    pub fn mul(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) => constant(x * y),
            (Some(x), _) | (_, Some(x)) if x.is_zero() => int(0),
            (Some(x), _) if x.is_one() => b,
            (_, Some(y)) if y.is_one() => a,
            _ => Arc::new(Expr::Mul(a, b)),
        }
    }

    pub fn div(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) if !y.is_zero() => constant(x / y),
            (_, Some(y)) if y.is_one() => a,
            _ => Arc::new(Expr::Div(a, b)),
        }
    }

    pub fn neg(a: Arc<Expr>) -> Arc<Expr> {
        match &*a {
            Expr::Const(c) => constant(-c),
            Expr::Neg(inner) => inner.clone(),
            _ => Arc::new(Expr::Neg(a)),
        }
    }

    pub fn pow(a: Arc<Expr>, k: u32) -> Arc<Expr> {
        match (&*a, k) {
            (_, 0) => int(1),
            (_, 1) => a,
            (Expr::Const(c), _) => constant(Pow::pow(c, k)),
            _ => Arc::new(Expr::Pow(a, k)),
        }
    }

    pub fn apply(f: Func, a: Arc<Expr>) -> Arc<Expr> {
        if let Expr::Const(c) = &*a {
            if c.is_zero() {
                return match f {
                    Func::Sin => int(0),
                    Func::Cos | Func::Exp => int(1),
                };
            }
        }
        Arc::new(Expr::Apply(f, a))
    }
}

impl Expr {
    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Apply(_, a) => a.max_var(),
        }
    }

    fn first_transcendental(&self) -> Option<Func> {
        match self {
            Expr::Const(_) | Expr::Var(_) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a
                .first_transcendental()
                .or_else(|| b.first_transcendental()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.first_transcendental(),
            Expr::Apply(f, _) => Some(*f),
        }
    }

    fn eval_exact(&self, p: &[BigRational]) -> Result<BigRational> {
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(i) => p[*i].clone(),
            Expr::Add(a, b) => a.eval_exact(p)? + b.eval_exact(p)?,
            Expr::Sub(a, b) => a.eval_exact(p)? - b.eval_exact(p)?,
            Expr::Mul(a, b) => a.eval_exact(p)? * b.eval_exact(p)?,
            Expr::Div(a, b) => {
                let den = b.eval_exact(p)?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                a.eval_exact(p)? / den
            }
            Expr::Neg(a) => -a.eval_exact(p)?,
            Expr::Pow(a, k) => Pow::pow(a.eval_exact(p)?, *k),
            Expr::Apply(f, _) => return Err(Error::Transcendental(f.name())),
        })
    }

    fn eval_f64(&self, p: &[f64]) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => rational::to_f64(c),
            Expr::Var(i) => p[*i],
            Expr::Add(a, b) => a.eval_f64(p)? + b.eval_f64(p)?,
            Expr::Sub(a, b) => a.eval_f64(p)? - b.eval_f64(p)?,
            Expr::Mul(a, b) => a.eval_f64(p)? * b.eval_f64(p)?,
            Expr::Div(a, b) => {
                let den = b.eval_f64(p)?;
                if den == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                a.eval_f64(p)? / den
            }
            Expr::Neg(a) => -a.eval_f64(p)?,
            Expr::Pow(a, k) => {
                let base = a.eval_f64(p)?;
                match k.to_i32() {
                    Some(k) => base.powi(k),
                    None => base.powf(f64::from(*k)),
                }
            }
            Expr::Apply(f, a) => f.apply_f64(a.eval_f64(p)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn substitute(self: &Arc<Expr>, vars: &[Arc<Expr>]) -> Arc<Expr> {
        use build::*;
        match &**self {
            Expr::Const(_) => self.clone(),
            Expr::Var(i) => vars[*i].clone(),
            Expr::Add(a, b) => add(a.substitute(vars), b.substitute(vars)),
            Expr::Sub(a, b) => sub(a.substitute(vars), b.substitute(vars)),
            Expr::Mul(a, b) => mul(a.substitute(vars), b.substitute(vars)),
            Expr::Div(a, b) => div(a.substitute(vars), b.substitute(vars)),
            Expr::Neg(a) => neg(a.substitute(vars)),
            Expr::Pow(a, k) => pow(a.substitute(vars), *k),
            Expr::Apply(f, a) => apply(*f, a.substitute(vars)),
        }
    }

    fn to_polynomial(&self, dim: usize) -> Option<Polynomial> {
        Some(match self {
            Expr::Const(c) => Polynomial::constant(c.clone(), dim),
            Expr::Var(i) => Polynomial::variable(*i, dim),
            Expr::Add(a, b) => &a.to_polynomial(dim)? + &b.to_polynomial(dim)?,
            Expr::Sub(a, b) => &a.to_polynomial(dim)? - &b.to_polynomial(dim)?,
            Expr::Mul(a, b) => &a.to_polynomial(dim)? * &b.to_polynomial(dim)?,
            Expr::Div(a, b) => {
                let den = b.to_polynomial(dim)?.as_constant()?;
                if den.is_zero() {
                    return None;
                }
                a.to_polynomial(dim)?.scale(&den.recip())
            }
            Expr::Neg(a) => -&a.to_polynomial(dim)?,
            Expr::Pow(a, k) => a.to_polynomial(dim)?.pow(*k),
            Expr::Apply(..) => return None,
        })
    }
}

/// An expression tree together with the dimension of its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    dim: usize,
    root: Arc<Expr>,
}

impl Expression {
    /// Wraps a tree, checking that every variable index is below `dim`.
    pub fn new(dim: usize, root: Arc<Expr>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::precondition(
                "expression dimension must be at least 1",
            ));
        }
        if let Some(i) = root.max_var() {
            if i >= dim {
                return Err(Error::VariableOutOfRange { index: i, dim });
            }
        }
        Ok(Expression { dim, root })
    }

    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let root = parse::parse(text, dim)?;
        Expression::new(dim, root)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> &Arc<Expr> {
        &self.root
    }

    /// True when no `sin`/`cos`/`exp` node occurs.
    pub fn is_rational_function(&self) -> bool {
        self.root.first_transcendental().is_none()
    }

    pub fn eval_exact(&self, p: &[BigRational]) -> Result<BigRational> {
        Error::check_dim(self.dim, p.len())?;
        if let Some(f) = self.root.first_transcendental() {
            return Err(Error::Transcendental(f.name()));
        }
        self.root.eval_exact(p)
    }

    pub fn eval_f64(&self, p: &[f64]) -> Result<f64> {
        Error::check_dim(self.dim, p.len())?;
        self.root.eval_f64(p)
    }

    /// `∂/∂x_var`.
    pub fn diff_var(&self, var: usize) -> Expression {
        assert!(var < self.dim, "variable index out of range");
        Expression {
            dim: self.dim,
            root: diff::diff(&self.root, var),
        }
    }

    /// `∂^b`, applied one variable at a time.
    pub fn diff(&self, b: &MultiIndex) -> Result<Expression> {
        Error::check_dim(self.dim, b.dim())?;
        let mut root = self.root.clone();
        for (var, &k) in b.entries().iter().enumerate() {
            for _ in 0..k {
                root = diff::diff(&root, var);
            }
        }
        Ok(Expression {
            dim: self.dim,
            root,
        })
    }

    /// Replaces every `x_j` by the given expression (all of dimension `dim`).
    pub fn substitute(&self, dim: usize, vars: &[Arc<Expr>]) -> Result<Expression> {
        Error::check_dim(self.dim, vars.len())?;
        Expression::new(dim, self.root.substitute(vars))
    }

    /// `f ∘ h` for `h(x) = λx + v`.
    pub fn compose_homothety(&self, h: &Homothety) -> Result<Expression> {
        Error::check_dim(self.dim, h.dim())?;
        let vars: Vec<_> = (0..self.dim)
            .map(|j| {
                build::add(
                    build::mul(build::constant(h.scale().clone()), build::var(j)),
                    build::constant(h.offset()[j].clone()),
                )
            })
            .collect();
        self.substitute(self.dim, &vars)
    }

    /// The polynomial this expression denotes, if it contains no
    /// transcendental node and divides only by constants.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        self.root.to_polynomial(self.dim)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, &self.root)
    }
}

impl From<&Polynomial> for Expression {
    fn from(p: &Polynomial) -> Expression {
        use build::*;
        let mut acc = int(0);
        for (exp, c) in p.terms() {
            let mut term = constant(c.clone());
            for (j, &k) in exp.entries().iter().enumerate() {
                term = mul(term, pow(var(j), k));
            }
            acc = add(acc, term);
        }
        Expression {
            dim: p.dim(),
            root: acc,
        }
    }
}

impl Expression {
    pub fn constant(c: BigRational, dim: usize) -> Expression {
        Expression {
            dim,
            root: build::constant(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&*self.root, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&*self.root, Expr::Const(c) if c.is_one())
    }
}

#[cfg(test)]
mod tests;
