//! Rational polynomials approximating a smooth `f` on `[−n,n]^d` in every
//! derivative `∂^β` with `β ≤ min{n, γ}`.
//!
//! The pipeline for index `n`:
//!
//! 1. pull `f` back to the unit cube with `h(x) = 2n·x − n`, giving `g = f ∘ h`;
//! 2. pick a Bernstein approximant `p = B_(m,…,m)(g)` by doubling `m` until
//!    every grid-estimated derivative error meets its budget;
//! 3. round the coefficients of `p` to a fixed denominator, with the rounding
//!    step chosen so the certified derivative bound is at most `1/(2n)`;
//! 4. push forward, `q = r ∘ h⁻¹`;
//! 5. re-estimate every `‖∂^β q − ∂^β f‖` on a grid over `[−n,n]^d` and
//!    require each to be below `1/n`.
//!
//! All error figures are grid estimates (lower bounds of the true sup
//! norms), except the rounding bound, which is certified.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::Serialize;

use crate::bernstein::bernstein_multi;
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::multiindex::MultiIndex;
use crate::polynomial::{sup_norm_exact, Grid, GridFunction, Homothety, Polynomial};
use crate::rational;

/// Fraction of the Bernstein-stage budget the grid estimate may use.
pub const SAFETY_FACTOR: (i64, i64) = (9, 10);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Smoothness {
    /// `f ∈ C^γ`.
    Finite(MultiIndex),
    /// `f ∈ C^∞`; then `min{n, γ} = n`.
    Infinite,
}

#[derive(Debug, Clone)]
pub struct ApproxRequest {
    pub f: Expression,
    pub gamma: Smoothness,
    pub n: u32,
    pub grid_per_axis: usize,
    pub alpha_cap: u32,
}

impl ApproxRequest {
    pub fn new(
        f: Expression,
        gamma: Smoothness,
        n: u32,
        grid_per_axis: usize,
        alpha_cap: u32,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("sequence index n must be at least 1"));
        }
        if grid_per_axis < 3 || grid_per_axis.is_multiple_of(2) {
            return Err(Error::precondition(
                "grid_per_axis must be odd and at least 3",
            ));
        }
        if alpha_cap == 0 {
            return Err(Error::precondition("alpha_cap must be at least 1"));
        }
        if let Smoothness::Finite(g) = &gamma {
            Error::check_dim(f.dim(), g.dim())?;
        }
        Ok(ApproxRequest {
            f,
            gamma,
            n,
            grid_per_axis,
            alpha_cap,
        })
    }

    /// `min{n, γ}`.
    pub fn derivative_budget(&self) -> MultiIndex {
        let n = MultiIndex::constant(self.n, self.f.dim());
        match &self.gamma {
            Smoothness::Infinite => n,
            Smoothness::Finite(g) => n.meet(g).expect("dimension checked in new"),
        }
    }

    /// Every `β ≤ min{n, γ}`, lexicographically.
    pub fn betas(&self) -> Vec<MultiIndex> {
        self.derivative_budget().below().collect()
    }

    fn degree_candidates(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut m = 2;
        while m < self.alpha_cap {
            out.push(m);
            m *= 2;
        }
        out.push(self.alpha_cap);
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaError {
    pub beta: MultiIndex,
    /// Final `‖∂^β q − ∂^β f‖` estimate on `[−n,n]^d`.
    pub estimate: f64,
    /// `‖∂^β p − ∂^β g‖` estimate on `[0,1]^d` for the chosen Bernstein degree.
    pub bernstein_estimate: f64,
    #[serde(with = "rational::as_string")]
    pub bernstein_target: BigRational,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ledger {
    /// Bernstein-stage budget for `β = 0`; order `|β|` gets `(2n)^|β|` times this.
    #[serde(with = "rational::as_string")]
    pub bernstein_target: BigRational,
    #[serde(with = "rational::as_string")]
    pub rounding_eps: BigRational,
    pub rounding_denominator: String,
    /// `ε·|α|·α!`, reported for comparison only.
    #[serde(with = "rational::as_string")]
    pub paper_bound: BigRational,
    /// `ε·∏(αⱼ+1)·α!`, the bound actually relied on.
    #[serde(with = "rational::as_string")]
    pub safe_bound: BigRational,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxResult {
    pub n: u32,
    pub alpha: MultiIndex,
    pub q: Polynomial,
    pub errors: Vec<BetaError>,
    pub ledger: Ledger,
}

impl ApproxResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail")
    }

    pub fn max_error(&self) -> f64 {
        self.errors.iter().map(|e| e.estimate).fold(0.0, f64::max)
    }
}

/// Best Bernstein-stage estimates at one degree.
#[derive(Debug, Clone, Serialize)]
pub struct StageAttempt {
    pub m: u32,
    pub estimates: Vec<(MultiIndex, f64)>,
}

#[derive(Debug, thiserror::Error)]
pub enum ApproxError {
    #[error(transparent)]
    Invalid(#[from] Error),

    #[error("alpha_cap {cap} exhausted before the Bernstein stage met its budget")]
    AlphaCapExhausted {
        cap: u32,
        attempts: Vec<StageAttempt>,
    },

    #[error("final error estimate {worst} is not below 1/{n}")]
    FinalCheckFailed {
        n: u32,
        worst: f64,
        result: Box<ApproxResult>,
    },
}

/// Fixed rounding denominator `⌈1/ε⌉ + 1`.
pub fn rounding_denominator(eps: &BigRational) -> Result<BigInt> {
    if !eps.is_positive() {
        return Err(Error::precondition("eps must be positive"));
    }
    Ok(eps.recip().ceil().to_integer() + 1)
}

/// Rounds every coefficient to the nearest multiple of `1/D`,
/// `D = ⌈1/ε⌉ + 1`, so each moves by at most `1/(2D) < ε`.
pub fn round_to_rational(p: &Polynomial, eps: &BigRational) -> Result<Polynomial> {
    let den = rounding_denominator(eps)?;
    let scale = BigRational::from_integer(den.clone());
    Polynomial::from_terms(
        p.dim(),
        p.terms().map(|(e, c)| {
            let k = (c * &scale).round().to_integer();
            (e.clone(), BigRational::new(k, den.clone()))
        }),
    )
}

/// Certified `‖∂^β (p − q)‖` on `[0,1]^d` for every `β ≤ α`, when every
/// coefficient of `p − q` (degree `≤ α`) is below `ε` in absolute value:
/// `ε · ∏(αⱼ + 1) · α!`.
pub fn rounding_derivative_bound(alpha: &MultiIndex, eps: &BigRational) -> BigRational {
    let terms = BigInt::from(alpha.box_len());
    eps * BigRational::from_integer(terms * BigInt::from(alpha.factorial()))
}

/// The smaller figure `ε·|α|·α!`. It is not a valid bound in general; see
/// the `(1,1)` counterexample in the tests.
pub fn naive_rounding_bound(alpha: &MultiIndex, eps: &BigRational) -> BigRational {
    eps * BigRational::from_integer(BigInt::from(alpha.order()) * BigInt::from(alpha.factorial()))
}

/// `|λ|^|β| · bound`: a derivative error bound after composing both
/// functions with `h`.
pub fn transport_error(
    bound: &BigRational,
    beta: &MultiIndex,
    h: &Homothety,
) -> Result<BigRational> {
    if bound.is_negative() {
        return Err(Error::precondition("bound must be non-negative"));
    }
    let order = u32::try_from(beta.order()).map_err(|_| Error::precondition("order too large"))?;
    Ok(Pow::pow(h.scale().abs(), order) * bound)
}

// The target function, exact when possible.
enum Target {
    Exact(Polynomial),
    Float(Expression),
}

impl Target {
    fn new(e: Expression) -> Self {
        match e.to_polynomial() {
            Some(p) => Target::Exact(p),
            None => Target::Float(e),
        }
    }

    /// Grid estimate of `‖∂^β approx − ∂^β self‖`.
    fn derivative_error(&self, approx: &Polynomial, beta: &MultiIndex, grid: &Grid) -> Result<f64> {
        let d_approx = approx.derivative(beta)?;
        match self {
            Target::Exact(p) => {
                let diff = &d_approx - &p.derivative(beta)?;
                Ok(rational::to_f64(&sup_norm_exact(&diff, grid)?))
            }
            Target::Float(e) => {
                let lhs = d_approx.grid_values_f64(grid)?;
                let rhs = e.diff(beta)?.grid_values_f64(grid)?;
                Ok(lhs
                    .iter()
                    .zip(&rhs)
                    .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
            }
        }
    }
}

/// Bernstein-stage budget for `β`: `0.9 · (2n)^|β| / (2n)`.
///
/// Pulling back through `h⁻¹` multiplies a `∂^β` error by `(2n)^−|β|`, so
/// this still yields at most `0.9/(2n)` on `[−n,n]^d`.
pub fn bernstein_target(n: u32, beta: &MultiIndex) -> BigRational {
    let two_n = BigRational::from_integer(BigInt::from(2 * n));
    let base = rational::rat(SAFETY_FACTOR.0, SAFETY_FACTOR.1) / &two_n;
    base * Pow::pow(two_n, beta.order() as u32)
}

pub fn build_qn(req: &ApproxRequest) -> Result<ApproxResult, ApproxError> {
    let d = req.f.dim();
    let n = req.n;
    let betas = req.betas();
    let h = Homothety::unit_cube_to_box(n, d);
    let unit = Grid::unit_cube(d, req.grid_per_axis)?;

    // (1) g = f ∘ h on [0,1]^d
    let g = Target::new(req.f.compose_homothety(&h)?);

    // (2) doubling search over α = (m, …, m)
    let targets: Vec<BigRational> = betas.iter().map(|b| bernstein_target(n, b)).collect();
    let mut attempts = Vec::new();
    let mut chosen = None;
    for m in req.degree_candidates() {
        let alpha = MultiIndex::constant(m, d);
        let p = match &g {
            Target::Exact(poly) => bernstein_multi(poly, &alpha)?,
            Target::Float(e) => bernstein_multi(e, &alpha)?,
        };
        let estimates = betas
            .iter()
            .map(|b| g.derivative_error(&p, b, &unit))
            .collect::<Result<Vec<_>>>()?;
        let ok = estimates
            .iter()
            .zip(&targets)
            .all(|(e, t)| *e <= rational::to_f64(t));
        attempts.push(StageAttempt {
            m,
            estimates: betas
                .iter()
                .cloned()
                .zip(estimates.iter().copied())
                .collect(),
        });
        if ok {
            chosen = Some((alpha, p, estimates));
            break;
        }
    }
    let Some((alpha, p, stage_estimates)) = chosen else {
        return Err(ApproxError::AlphaCapExhausted {
            cap: req.alpha_cap,
            attempts,
        });
    };

    // (3) rounding with certified bound exactly 1/(2n)
    let degree = p.degree_bound().entries().iter().zip(alpha.entries()).fold(
        Vec::with_capacity(d),
        |mut acc, (&a, &b)| {
            acc.push(a.max(b));
            acc
        },
    );
    let degree = MultiIndex::new(degree)?;
    let unit_bound = rounding_derivative_bound(&degree, &BigRational::one());
    let eps = BigRational::new(BigInt::one(), BigInt::from(2 * n)) / unit_bound;
    let r = round_to_rational(&p, &eps)?;

    // (4) q = r ∘ h⁻¹
    let q = r.compose_homothety(&h.inverse())?;

    // (5) final estimates on [−n,n]^d
    let outer = Grid::centered_cube(n, d, req.grid_per_axis)?;
    let f = Target::new(req.f.clone());
    let finals = betas
        .iter()
        .map(|b| f.derivative_error(&q, b, &outer))
        .collect::<Result<Vec<_>>>()?;

    let errors = betas
        .iter()
        .zip(&finals)
        .zip(stage_estimates.iter().zip(&targets))
        .map(
            |((beta, &estimate), (&bernstein_estimate, target))| BetaError {
                beta: beta.clone(),
                estimate,
                bernstein_estimate,
                bernstein_target: target.clone(),
            },
        )
        .collect();
    let result = ApproxResult {
        n,
        alpha,
        q,
        errors,
        ledger: Ledger {
            bernstein_target: bernstein_target(n, &MultiIndex::zeros(d)),
            rounding_denominator: rounding_denominator(&eps)?.to_string(),
            paper_bound: naive_rounding_bound(&degree, &eps),
            safe_bound: rounding_derivative_bound(&degree, &eps),
            rounding_eps: eps,
        },
    };
    let limit = 1.0 / f64::from(n);
    let worst = result.max_error();
    if finals.iter().any(|&e| e >= limit) {
        return Err(ApproxError::FinalCheckFailed {
            n,
            worst,
            result: Box::new(result),
        });
    }
    Ok(result)
}

/// True when every coefficient denominator of `q` divides `D·(2n)^|α|`.
pub fn denominators_within_budget(result: &ApproxResult) -> bool {
    let Ok(den) = result.ledger.rounding_denominator.parse::<BigInt>() else {
        return false;
    };
    let scale = Pow::pow(BigInt::from(2 * result.n), result.alpha.order() as u32);
    let budget = den * scale;
    result
        .q
        .terms()
        .all(|(_, c)| budget.is_multiple_of(c.denom()))
}
