//! Exact ordered fields used by the abstract-game and cooling layers.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// An exact, totally ordered field.
///
/// Floating point types are deliberately not implementors: temperatures are
/// roots of piecewise-linear equations and every comparison must be exact.
pub trait Scalar: Clone + Ord + Hash + Debug + Display + FromStr + Num + Signed + Send + Sync + 'static {
    fn from_int(value: i64) -> Self;

    fn two() -> Self {
        Self::from_int(2)
    }
}

macro_rules! impl_scalar_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_int(value: i64) -> Self {
                Ratio::from_integer(<$int>::from(value))
            }
        }
    };
}

impl_scalar_ratio!(i64);
impl_scalar_ratio!(i128);
impl_scalar_ratio!(BigInt);
