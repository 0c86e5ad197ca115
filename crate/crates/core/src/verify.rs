//! Independent oracles and the convergence experiment runner.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{
    bernstein_multi, factorization_check, linearity_check, moment_identity_check,
    variance_identity_check, IdentityCheck, Sampler, ValueTable,
};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::multiindex::{binomial, MultiIndex};
use crate::polynomial::{sup_norm_exact, Grid, GridFunction, Polynomial};
use crate::rational;

/// `Σ_{β≤a} C(a,β) f(β/a) x^β (1−x)^(a−β)`, summed literally.
pub fn bernstein_eval_direct<S: Sampler + ?Sized>(
    f: &S,
    a: &MultiIndex,
    x: &[BigRational],
) -> Result<BigRational> {
    Error::check_dim(f.dim(), a.dim())?;
    Error::check_dim(f.dim(), x.len())?;
    if a.entries().contains(&0) {
        return Err(Error::precondition("direct evaluation needs a ≥ 1"));
    }
    let mut total = BigRational::zero();
    for beta in a.below() {
        let mut term = f.sample_grid(&beta, a)?;
        for (j, xj) in x.iter().enumerate() {
            let (n, k) = (a.get(j), beta.get(j));
            term *= BigRational::from_integer(BigInt::from(binomial(n, k)));
            term *= Pow::pow(xj, k);
            term *= Pow::pow(BigRational::one() - xj, n - k);
        }
        total += term;
    }
    Ok(total)
}

/// Step used for a mixed derivative of total order `order`.
///
/// Float cancellation in a `k`-th difference grows like `ε/h^k`, so
/// higher orders need wider steps.
pub fn fd_step_for_order(order: u64) -> f64 {
    match order {
        0 | 1 => 1e-5,
        2 => 1e-4,
        _ => 1e-3,
    }
}

/// Central-difference approximation of `∂^b e(x)`, one stencil per axis:
/// `Σ_i (−1)^i C(k,i) e(x + (k/2 − i)h) / h^k`.
pub fn finite_difference(e: &Expression, b: &MultiIndex, x: &[f64], step: f64) -> Result<f64> {
    Error::check_dim(e.dim(), b.dim())?;
    Error::check_dim(e.dim(), x.len())?;
    if b.order() > 4 {
        return Err(Error::precondition("finite differences support |b| ≤ 4"));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Error::precondition("step must be positive"));
    }
    // tensor product of per-axis stencils: (offsets, weight)
    let mut stencil: Vec<(Vec<f64>, f64)> = vec![(vec![0.0; x.len()], 1.0)];
    for (j, &k) in b.entries().iter().enumerate() {
        if k == 0 {
            continue;
        }
        let scale = step.powi(k as i32);
        let mut next = Vec::with_capacity(stencil.len() * (k as usize + 1));
        for (offsets, w) in &stencil {
            for i in 0..=k {
                let c = binomial(k, i).to_f64().unwrap_or(f64::NAN);
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let mut o = offsets.clone();
                o[j] = (f64::from(k) / 2.0 - f64::from(i)) * step;
                next.push((o, w * sign * c / scale));
            }
        }
        stencil = next;
    }
    let mut total = 0.0;
    for (offsets, w) in stencil {
        let p: Vec<f64> = x.iter().zip(&offsets).map(|(a, o)| a + o).collect();
        total += w * e.eval_f64(&p)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub sup_error: f64,
    pub grid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedRow {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub reason: String,
}

/// Errors at or below this are indistinguishable from zero in double
/// precision sampling.
pub const HALVING_FLOOR: f64 = 1e-9;

/// Whether the error at the top of the ladder is below half the error at
/// the bottom. A top error at or below [`HALVING_FLOOR`] also counts: the
/// operator reproduced `f` up to sampling noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalvingVerdict {
    pub beta: MultiIndex,
    pub bottom: Option<f64>,
    pub top: Option<f64>,
    pub halved: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub function: String,
    pub dim: usize,
    pub grid: usize,
    pub rows: Vec<ConvergenceRow>,
    pub skipped: Vec<SkippedRow>,
    pub verdicts: Vec<HalvingVerdict>,
    /// Wall time per stage. Not serialized, so reports stay reproducible.
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl ConvergenceReport {
    pub fn all_halved(&self) -> bool {
        self.verdicts.iter().all(|v| v.halved)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha;beta;sup_error;grid\n");
        for r in &self.rows {
            let _ = writeln!(out, "{};{};{};{}", r.alpha, r.beta, r.sup_error, r.grid);
        }
        out
    }

    pub fn row(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Option<&ConvergenceRow> {
        self.rows
            .iter()
            .find(|r| &r.alpha == alpha && &r.beta == beta)
    }
}

enum Reference {
    Exact(Polynomial),
    Float(Expression),
}

fn row_error(
    f: &Expression,
    reference: &Reference,
    approx: &Polynomial,
    beta: &MultiIndex,
    grid: &Grid,
) -> Result<f64> {
    let d_approx = approx.derivative(beta)?;
    let err = match reference {
        Reference::Exact(p) => {
            rational::to_f64(&sup_norm_exact(&(&d_approx - &p.derivative(beta)?), grid)?)
        }
        Reference::Float(_) => {
            let lhs = d_approx.grid_values_f64(grid)?;
            let rhs = f.diff(beta)?.grid_values_f64(grid)?;
            lhs.iter()
                .zip(&rhs)
                .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()))
        }
    };
    if !err.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(err)
}

/// Grid estimates of `‖∂^β B_α(f) − ∂^β f‖` on `[0,1]^d` for every `α` in
/// the ladder and every `β`. Pairs where `α` does not dominate `β` strictly,
/// or whose evaluation fails, are listed as skipped.
pub fn run_convergence(
    f: &Expression,
    betas: &[MultiIndex],
    ladder: &[MultiIndex],
    grid_points: usize,
) -> Result<ConvergenceReport> {
    let d = f.dim();
    for m in betas.iter().chain(ladder) {
        Error::check_dim(d, m.dim())?;
    }
    let grid = Grid::unit_cube(d, grid_points)?;
    let reference = match f.to_polynomial() {
        Some(p) => Reference::Exact(p),
        None => Reference::Float(f.clone()),
    };

    let started = Instant::now();
    let approximants: Vec<Result<Polynomial>> = ladder
        .par_iter()
        .map(|alpha| match &reference {
            Reference::Exact(p) => bernstein_multi(p, alpha),
            Reference::Float(e) => bernstein_multi(e, alpha),
        })
        .collect();
    let bernstein_time = started.elapsed();

    let started = Instant::now();
    let pairs: Vec<(usize, &MultiIndex)> = (0..ladder.len())
        .flat_map(|i| betas.iter().map(move |b| (i, b)))
        .collect();
    let outcomes: Vec<std::result::Result<ConvergenceRow, SkippedRow>> = pairs
        .par_iter()
        .map(|&(i, beta)| {
            let alpha = &ladder[i];
            let skip = |reason: String| SkippedRow {
                alpha: alpha.clone(),
                beta: beta.clone(),
                reason,
            };
            if !beta.is_lt(alpha).unwrap_or(false) {
                return Err(skip("alpha does not strictly dominate beta".into()));
            }
            let approx = approximants[i].as_ref().map_err(|e| skip(e.to_string()))?;
            let sup_error =
                row_error(f, &reference, approx, beta, &grid).map_err(|e| skip(e.to_string()))?;
            Ok(ConvergenceRow {
                alpha: alpha.clone(),
                beta: beta.clone(),
                sup_error,
                grid: grid_points,
            })
        })
        .collect();
    let estimate_time = started.elapsed();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => rows.push(r),
            Err(s) => skipped.push(s),
        }
    }
    rows.sort_by(|a, b| {
        (a.alpha.order(), &a.beta, &a.alpha).cmp(&(b.alpha.order(), &b.beta, &b.alpha))
    });
    skipped.sort_by(|a, b| {
        (a.alpha.order(), &a.beta, &a.alpha).cmp(&(b.alpha.order(), &b.beta, &b.alpha))
    });

    let mut unique_betas: Vec<MultiIndex> = betas.to_vec();
    unique_betas.sort();
    unique_betas.dedup();
    let verdicts = unique_betas
        .into_iter()
        .map(|beta| {
            let mine: Vec<f64> = rows
                .iter()
                .filter(|r| r.beta == beta)
                .map(|r| r.sup_error)
                .collect();
            let bottom = mine.first().copied();
            let top = mine.last().copied();
            let halved = match (bottom, top) {
                (Some(b), Some(t)) => t <= HALVING_FLOOR || t < 0.5 * b,
                _ => false,
            };
            HalvingVerdict {
                beta,
                bottom,
                top,
                halved,
            }
        })
        .collect();

    Ok(ConvergenceReport {
        function: f.to_string(),
        dim: d,
        grid: grid_points,
        rows,
        skipped,
        verdicts,
        timings: vec![
            ("bernstein".into(), bernstein_time),
            ("estimate".into(), estimate_time),
        ],
    })
}

/// A random rational in `[0,1]` with denominator at most 1000.
pub fn random_unit_rational(rng: &mut impl Rng) -> BigRational {
    let den: i64 = rng.gen_range(1..=1000);
    let num: i64 = rng.gen_range(0..=den);
    rational::rat(num, den)
}

/// A random rational in `[−10,10]` with denominator at most 100.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let den: i64 = rng.gen_range(1..=100);
    let num: i64 = rng.gen_range(-10 * den..=10 * den);
    rational::rat(num, den)
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub first_counterexample: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checked: 0,
            failed: 0,
            first_counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn describe(check: &IdentityCheck, what: String) -> String {
    format!(
        "{what}: lhs = {}, rhs = {}",
        rational::format(&check.lhs),
        rational::format(&check.rhs)
    )
}

/// Moment identities (orders 0, 1, 2) for `n ≤ n_max`.
pub fn moment_suite(n_max: u32, trials: usize, rng: &mut impl Rng) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("moment");
    for n in 1..=n_max {
        for _ in 0..trials {
            let x = random_unit_rational(rng);
            for order in 0..=n.min(2) {
                let c = moment_identity_check(n, order, &x)?;
                report.record(c.holds(), || {
                    describe(
                        &c,
                        format!("n = {n}, order = {order}, x = {}", rational::format(&x)),
                    )
                });
            }
        }
    }
    Ok(report)
}

pub fn variance_suite(n_max: u32, trials: usize, rng: &mut impl Rng) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("variance");
    for n in 1..=n_max {
        for _ in 0..trials {
            let x = random_unit_rational(rng);
            let c = variance_identity_check(n, &x)?;
            report.record(c.holds(), || {
                describe(&c, format!("n = {n}, x = {}", rational::format(&x)))
            });
        }
    }
    Ok(report)
}

/// Linearity on random value tables with `a ≤ (4,3)`.
pub fn linearity_suite(trials: usize, rng: &mut impl Rng) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("linearity");
    for _ in 0..trials {
        let a = MultiIndex::new(vec![rng.gen_range(1..=4), rng.gen_range(1..=3)])?;
        let table = |rng: &mut _| {
            let values = (0..a.box_len()).map(|_| random_rational(rng)).collect();
            ValueTable::new(a.clone(), values)
        };
        let f = table(rng)?;
        let g = table(rng)?;
        let c = random_rational(rng);
        let check = linearity_check(&f, &g, &c, &a)?;
        report.record(check.holds(), || {
            format!(
                "a = ({a}), c = {}: combined = {}, separate = {}",
                rational::format(&c),
                check.combined,
                check.separate
            )
        });
    }
    Ok(report)
}

/// The polynomials used by the factorization suite.
pub fn factorization_corpus() -> Vec<Polynomial> {
    ["x0*x1", "x0^2*x1^2", "x0^3+x1"]
        .iter()
        .map(|s| {
            Expression::parse(s, 2)
                .ok()
                .and_then(|e| e.to_polynomial())
                .expect("corpus entries are polynomials")
        })
        .collect()
}

/// Factorization at random points for every corpus polynomial,
/// `a ∈ {(2,2),(3,3)}` and `b ≤ (1,1)`.
pub fn factorization_suite(trials: usize, rng: &mut impl Rng) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("factorization");
    let corpus = factorization_corpus();
    let degrees = [MultiIndex::constant(2, 2), MultiIndex::constant(3, 2)];
    let orders: Vec<MultiIndex> = MultiIndex::constant(1, 2).below().collect();
    for _ in 0..trials {
        let x = vec![random_unit_rational(rng), random_unit_rational(rng)];
        for f in &corpus {
            for a in &degrees {
                for b in &orders {
                    let c = factorization_check(f, a, b, &x)?;
                    report.record(c.holds(), || {
                        describe(
                            &c,
                            format!(
                                "f = {f}, a = ({a}), b = ({b}), x = ({}, {})",
                                rational::format(&x[0]),
                                rational::format(&x[1])
                            ),
                        )
                    });
                }
            }
        }
    }
    Ok(report)
}

/// All four exact suites, seeded.
pub fn identity_suites(n_max: u32, trials: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    if n_max == 0 {
        return Err(Error::precondition("n_max must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        moment_suite(n_max, trials, &mut rng)?,
        variance_suite(n_max, trials, &mut rng)?,
        linearity_suite(trials, &mut rng)?,
        factorization_suite(trials, &mut rng)?,
    ])
}
