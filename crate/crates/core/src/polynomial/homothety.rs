use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// The affine map `h(x) = λx + v` with `λ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homothety {
    scale: BigRational,
    offset: Vec<BigRational>,
}

impl Homothety {
    pub fn new(scale: BigRational, offset: Vec<BigRational>) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::precondition("homothety scale must be nonzero"));
        }
        if offset.is_empty() {
            return Err(Error::precondition(
                "homothety dimension must be at least 1",
            ));
        }
        Ok(Homothety { scale, offset })
    }

    /// `h(x) = 2n·x − (n, …, n)`, taking `[0,1]^d` onto `[−n,n]^d`.
    pub fn unit_cube_to_box(n: u32, dim: usize) -> Self {
        let n = BigRational::from_integer(n.into());
        Homothety::new(&n + &n, vec![-n; dim]).expect("n must be positive")
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn offset(&self) -> &[BigRational] {
        &self.offset
    }

    /// `h⁻¹(y) = y/λ − v/λ`.
    pub fn inverse(&self) -> Homothety {
        let inv = self.scale.recip();
        Homothety {
            offset: self.offset.iter().map(|v| -(v * &inv)).collect(),
            scale: inv,
        }
    }

    pub fn apply(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        Error::check_dim(self.dim(), x.len())?;
        Ok(x.iter()
            .zip(&self.offset)
            .map(|(xi, v)| &self.scale * xi + v)
            .collect())
    }
}
