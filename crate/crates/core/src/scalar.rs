//! Unsigned count scalars.
//!
//! Triangle counts and cohesion values are generic over [`Count`], so hot
//! search loops can run on machine integers while reduction instances, whose
//! gadget cliques hold astronomically many triangles, use [`BigUint`].

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, ToPrimitive, Unsigned};

/// An exact unsigned integer usable as a triangle count.
pub trait Count:
    Clone
    + Ord
    + Integer
    + Unsigned
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn to_biguint(&self) -> BigUint;

    /// Narrowing conversion; `None` when the value does not fit.
    fn from_biguint(value: &BigUint) -> Option<Self>;

    fn from_u64_exact(value: u64) -> Self {
        Self::from_u64(value).expect("count type narrower than u64")
    }
}

macro_rules! impl_count_prim {
    ($($t:ty),*) => {
        $(
            impl Count for $t {
                #[inline]
                fn to_biguint(&self) -> BigUint {
                    BigUint::from(*self)
                }

                #[inline]
                fn from_biguint(value: &BigUint) -> Option<Self> {
                    <$t>::try_from(value).ok()
                }
            }
        )*
    };
}

impl_count_prim!(u32, u64, u128);

impl Count for BigUint {
    #[inline]
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    #[inline]
    fn from_biguint(value: &BigUint) -> Option<Self> {
        Some(value.clone())
    }
}

/// `C(n, k)` computed exactly in `C`.
///
/// Uses the multiplicative form where every intermediate quotient is an
/// integer, so nothing larger than `C(n, k) * k` is ever formed.
pub fn binomial<C: Count>(n: &C, k: u32) -> C {
    let k_c = C::from_u32(k).expect("small constant");
    if *n < k_c {
        return C::zero();
    }
    let mut acc = C::one();
    let mut i = C::zero();
    let mut j = C::one();
    for _ in 0..k {
        // acc = C(n, j-1); C(n, j) = C(n, j-1) * (n - j + 1) / j
        acc = acc * (n.clone() - i.clone()) / j.clone();
        i = i + C::one();
        j = j + C::one();
    }
    acc
}

/// `C(n, 3)`, the number of vertex triples in an `n`-set.
#[inline]
pub fn choose3<C: Count>(n: &C) -> C {
    binomial(n, 3)
}

/// `C(n, 2)`, the number of vertex pairs in an `n`-set.
#[inline]
pub fn choose2<C: Count>(n: &C) -> C {
    binomial(n, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: u64, k: u64) -> u64 {
        if k == 0 || k == n {
            return 1;
        }
        if k > n {
            return 0;
        }
        pascal(n - 1, k - 1) + pascal(n - 1, k)
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..20u64 {
            for k in 0..6u32 {
                assert_eq!(binomial(&n, k), pascal(n, k as u64), "C({n},{k})");
                assert_eq!(binomial(&BigUint::from(n), k), BigUint::from(pascal(n, k as u64)));
            }
        }
    }

    #[test]
    fn choose3_large_values() {
        // C(4,3)^4 * 2 is the default gadget size for n = 4
        let c = choose3(&BigUint::from(4u32));
        assert_eq!(c.pow(4) * 2u32, BigUint::from(512u32));
        assert_eq!(choose3(&1_000_000u128), 166_666_166_667_000_000u128);
    }

    #[test]
    fn narrowing() {
        assert_eq!(u32::from_biguint(&BigUint::from(7u32)), Some(7));
        assert_eq!(u32::from_biguint(&(BigUint::from(u32::MAX) + 1u32)), None);
    }
}
