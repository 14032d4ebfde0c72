use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{NumOps, One, Zero};

/// Coefficients for chain complexes.
pub trait Field: Clone + PartialEq + fmt::Debug + Zero + One + NumOps + Neg<Output = Self> {}

impl<T> Field for T where T: Clone + PartialEq + fmt::Debug + Zero + One + NumOps + Neg<Output = T> {}

/// The two-element field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2(pub bool);

impl Zero for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }

    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl One for Gf2 {
    fn one() -> Self {
        Gf2(true)
    }
}

impl Add for Gf2 {
    type Output = Gf2;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf2) -> Gf2 {
        Gf2(self.0 ^ rhs.0)
    }
}

impl Sub for Gf2 {
    type Output = Gf2;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Gf2) -> Gf2 {
        Gf2(self.0 ^ rhs.0)
    }
}

impl Mul for Gf2 {
    type Output = Gf2;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Gf2) -> Gf2 {
        Gf2(self.0 & rhs.0)
    }
}

impl Div for Gf2 {
    type Output = Gf2;

    fn div(self, rhs: Gf2) -> Gf2 {
        assert!(rhs.0, "division by zero in GF(2)");
        self
    }
}

impl Rem for Gf2 {
    type Output = Gf2;

    fn rem(self, rhs: Gf2) -> Gf2 {
        assert!(rhs.0, "division by zero in GF(2)");
        Gf2(false)
    }
}

impl Neg for Gf2 {
    type Output = Gf2;

    fn neg(self) -> Gf2 {
        self
    }
}

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}
