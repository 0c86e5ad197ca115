//! Multiindices and the combinatorics built on them.
//!
//! A [`MultiIndex`] serves both as a monomial exponent and as a mixed
//! partial-derivative order. All combinatorial quantities are returned as
//! arbitrary-precision integers.

use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::precondition(
                "multiindex dimension must be at least 1",
            ));
        }
        Ok(MultiIndex(entries))
    }

    /// The all-zero multiindex of dimension `d`.
    pub fn zeros(d: usize) -> Self {
        Self::constant(0, d)
    }

    /// `(n, …, n)` of dimension `d`.
    pub fn constant(n: u32, d: usize) -> Self {
        assert!(d >= 1, "multiindex dimension must be at least 1");
        MultiIndex(vec![n; d])
    }

    /// `k · e_j`: zero everywhere except `k` in slot `j`.
    pub fn unit(j: usize, k: u32, d: usize) -> Self {
        let mut m = Self::zeros(d);
        m.0[j] = k;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `|α|`, the sum of the entries.
    pub fn order(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    /// `α!`, the product of the entry factorials.
    pub fn factorial(&self) -> BigUint {
        self.0.iter().map(|&e| falling_factorial(e, e)).product()
    }

    /// Product of the per-entry binomial coefficients.
    pub fn binomial(&self, lower: &MultiIndex) -> Result<BigUint> {
        Error::check_dim(self.dim(), lower.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&lower.0)
            .map(|(&n, &k)| binomial(n, k))
            .product())
    }

    /// Componentwise `≤`.
    pub fn is_le(&self, other: &MultiIndex) -> Result<bool> {
        Error::check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// Componentwise strict `<` in every slot.
    pub fn is_lt(&self, other: &MultiIndex) -> Result<bool> {
        Error::check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a < b))
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &MultiIndex) -> Result<MultiIndex> {
        Error::check_dim(self.dim(), other.dim())?;
        Ok(MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        ))
    }

    /// `self − other`, defined only when `other ≤ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// The grid point `self / denom` as exact rationals; every `denom` entry must be positive.
    pub fn ratio_over(&self, denom: &MultiIndex) -> Result<Vec<BigRational>> {
        Error::check_dim(self.dim(), denom.dim())?;
        if denom.0.contains(&0) {
            return Err(Error::precondition("denominator multiindex must be ≥ 1"));
        }
        Ok(self
            .0
            .iter()
            .zip(&denom.0)
            .map(|(&b, &a)| BigRational::new(BigInt::from(b), BigInt::from(a)))
            .collect())
    }

    /// All `β ≤ self` in lexicographic order (last slot varies fastest).
    pub fn below(&self) -> BelowIter {
        BelowIter {
            bound: self.0.clone(),
            next: Some(vec![0; self.dim()]),
        }
    }

    /// Number of multiindices `β ≤ self`, i.e. `∏(αⱼ + 1)`.
    pub fn box_len(&self) -> usize {
        self.0.iter().map(|&e| e as usize + 1).product()
    }

    /// Drops the slots where `mask` is zero.
    pub fn restrict_to_support(&self, mask: &MultiIndex) -> Vec<u32> {
        self.0
            .iter()
            .zip(&mask.0)
            .filter(|(_, &m)| m != 0)
            .map(|(&e, _)| e)
            .collect()
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), rhs.dim(), "multiindex dimension mismatch");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl TryFrom<Vec<u32>> for MultiIndex {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        MultiIndex::new(v)
    }
}

impl From<MultiIndex> for Vec<u32> {
    fn from(m: MultiIndex) -> Vec<u32> {
        m.0
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Comma-joined entries, e.g. `2,0,1`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

pub struct BelowIter {
    bound: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for BelowIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for j in (0..succ.len()).rev() {
            if succ[j] < self.bound[j] {
                succ[j] += 1;
                self.next = Some(succ);
                break;
            }
            succ[j] = 0;
        }
        Some(MultiIndex(current))
    }
}

/// `n choose k`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `a (a−1) ⋯ (a−b+1)`; one for `b = 0`, zero for `b > a`.
pub fn falling_factorial(a: u32, b: u32) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    (0..b).map(|i| BigUint::from(a - i)).product()
}

/// Row `n` of Pascal's triangle as signed integers.
pub(crate) fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(mi(&[2, 2]).binomial(&mi(&[1, 1])).unwrap(), 4u32.into());
        assert_eq!(mi(&[5, 3]).binomial(&mi(&[0, 0])).unwrap(), 1u32.into());
        assert_eq!(mi(&[3, 2]).binomial(&mi(&[4, 1])).unwrap(), 0u32.into());
        assert!(mi(&[3, 2]).binomial(&mi(&[1])).is_err());
    }

    #[test]
    fn partial_order_examples() {
        assert!(mi(&[1, 2]).is_le(&mi(&[2, 2])).unwrap());
        assert!(!mi(&[1, 3]).is_le(&mi(&[2, 2])).unwrap());
        assert!(mi(&[0, 0]).is_le(&mi(&[0, 0])).unwrap());
        assert!(!mi(&[0, 0]).is_lt(&mi(&[0, 0])).unwrap());
        assert!(mi(&[0, 1]).is_lt(&mi(&[1, 2])).unwrap());
        assert!(mi(&[0]).is_le(&mi(&[0, 0])).is_err());
    }

    #[test]
    fn factorial_order_min_const() {
        assert_eq!(mi(&[3, 2]).factorial(), 12u32.into());
        assert_eq!(mi(&[3, 2]).order(), 5);
        assert_eq!(mi(&[1, 4]).meet(&mi(&[2, 3])).unwrap(), mi(&[1, 3]));
        assert_eq!(MultiIndex::constant(4, 3), mi(&[4, 4, 4]));
        assert!(mi(&[1]).meet(&mi(&[1, 1])).is_err());
        assert!(MultiIndex::new(vec![]).is_err());
    }

    #[test]
    fn ratio_examples() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            mi(&[1, 2]).ratio_over(&mi(&[2, 4])).unwrap(),
            vec![half.clone(), half]
        );
        assert_eq!(
            mi(&[0, 0]).ratio_over(&mi(&[3, 7])).unwrap(),
            vec![BigRational::zero(), BigRational::zero()]
        );
        assert_eq!(
            mi(&[3, 5]).ratio_over(&mi(&[3, 5])).unwrap(),
            vec![BigRational::one(), BigRational::one()]
        );
        assert!(mi(&[1, 1]).ratio_over(&mi(&[0, 2])).is_err());
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(5, 2), 20u32.into());
        assert_eq!(falling_factorial(3, 0), 1u32.into());
        assert_eq!(falling_factorial(2, 4), 0u32.into());
    }

    #[test]
    fn wide_binomials_do_not_overflow() {
        let a = MultiIndex::constant(64, 3);
        let b = MultiIndex::constant(32, 3);
        let c = binomial(64, 32);
        assert_eq!(a.binomial(&b).unwrap(), &c * &c * &c);
        assert_eq!(c.to_string(), "1832624140942590534");
    }

    #[test]
    fn below_enumerates_box_in_lex_order() {
        let all: Vec<_> = mi(&[1, 2]).below().collect();
        assert_eq!(
            all,
            vec![
                mi(&[0, 0]),
                mi(&[0, 1]),
                mi(&[0, 2]),
                mi(&[1, 0]),
                mi(&[1, 1]),
                mi(&[1, 2])
            ]
        );
        assert_eq!(mi(&[3, 0, 2]).below().count(), mi(&[3, 0, 2]).box_len());
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn binomial_row_matches_binomial() {
        let row = binomial_row(9);
        for (k, c) in row.iter().enumerate() {
            assert_eq!(c, &BigInt::from(binomial(9, k as u32)));
        }
    }

    fn small_pair(d: usize) -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (
            prop::collection::vec(0u32..12, d),
            prop::collection::vec(0u32..12, d),
        )
    }

    proptest! {
        #[test]
        fn binomial_is_factorial_quotient((a, b) in small_pair(3)) {
            let (a, b) = (mi(&a), mi(&b));
            if let Some(diff) = a.checked_sub(&b) {
                let q = a.factorial() / (b.factorial() * diff.factorial());
                prop_assert_eq!(a.binomial(&b).unwrap(), q);
            } else {
                prop_assert!(!b.is_le(&a).unwrap());
                prop_assert!(a.binomial(&b).unwrap().is_zero());
            }
        }

        #[test]
        fn partial_order_laws(
            a in prop::collection::vec(0u32..4, 2),
            b in prop::collection::vec(0u32..4, 2),
            c in prop::collection::vec(0u32..4, 2),
        ) {
            let (a, b, c) = (mi(&a), mi(&b), mi(&c));
            prop_assert!(a.is_le(&a).unwrap());
            if a.is_le(&b).unwrap() && b.is_le(&a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if a.is_le(&b).unwrap() && b.is_le(&c).unwrap() {
                prop_assert!(a.is_le(&c).unwrap());
            }
        }

        #[test]
        fn falling_factorial_full_is_factorial(n in 0u32..40) {
            prop_assert_eq!(falling_factorial(n, n), mi(&[n]).factorial());
        }
    }
}
