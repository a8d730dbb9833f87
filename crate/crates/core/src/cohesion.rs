//! Exact cohesion values.
//!
//! The cohesion of a vertex set `S` is `i(S)^2 / (C(|S|,3) * (i(S) + o(S)))`
//! where `i` counts triangles inside `S` and `o` counts triangles with exactly
//! two vertices in `S`. Values are kept as reduced fractions over a [`Count`]
//! type and compared by cross-multiplication; floating point is only used for
//! [`CohesionValue::approx`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::scalar::{choose2, choose3, Count};
use crate::triangles::{census, TriangleCensus};

/// A reduced non-negative fraction `numerator / denominator`, `denominator > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohesionValue<C> {
    numer: C,
    denom: C,
}

impl<C: Count> CohesionValue<C> {
    /// Reduces `numer / denom` to lowest terms.
    pub fn new(numer: C, denom: C) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        let g = numer.gcd(&denom);
        Ok(Self { numer: numer / g.clone(), denom: denom / g })
    }

    pub fn zero() -> Self {
        Self { numer: C::zero(), denom: C::one() }
    }

    pub fn one() -> Self {
        Self { numer: C::one(), denom: C::one() }
    }

    pub fn numer(&self) -> &C {
        &self.numer
    }

    pub fn denom(&self) -> &C {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    /// Exact comparison by cross-multiplication. Products that overflow `C`
    /// are redone in arbitrary precision.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (self.numer.checked_mul(&other.denom), other.numer.checked_mul(&self.denom)) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => {
                let l = self.numer.to_biguint() * other.denom.to_biguint();
                let r = other.numer.to_biguint() * self.denom.to_biguint();
                l.cmp(&r)
            }
        }
    }

    /// Converts to another count type.
    pub fn convert<D: Count>(&self) -> Option<CohesionValue<D>> {
        Some(CohesionValue {
            numer: D::from_biguint(&self.numer.to_biguint())?,
            denom: D::from_biguint(&self.denom.to_biguint())?,
        })
    }

    pub fn to_big(&self) -> CohesionValue<BigUint> {
        CohesionValue { numer: self.numer.to_biguint(), denom: self.denom.to_biguint() }
    }

    /// Nearest float, for display. Never use this to decide anything.
    pub fn approx<F: Float + FromPrimitive>(&self) -> F {
        if let (Some(n), Some(d)) = (self.numer.to_f64(), self.denom.to_f64()) {
            if n.is_finite() && d.is_finite() && n < 2f64.powi(53) && d < 2f64.powi(53) {
                return F::from_f64(n / d).unwrap_or_else(F::nan);
            }
        }
        // scale both down so the quotient keeps its leading bits
        let (n, d) = (self.numer.to_biguint(), self.denom.to_biguint());
        let shift = n.bits().max(d.bits()).saturating_sub(60);
        let n = (n >> shift).to_f64().unwrap_or(0.0);
        let d = (d >> shift).to_f64().unwrap_or(0.0);
        let q = if d == 0.0 { 0.0 } else { n / d };
        F::from_f64(q).unwrap_or_else(F::nan)
    }
}

impl<C: Count> PartialOrd for CohesionValue<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Count> Ord for CohesionValue<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl<C: Count> fmt::Display for CohesionValue<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

/// `{"num": "<decimal>", "den": "<decimal>", "approx": <f64>}`.
impl<C: Count> Serialize for CohesionValue<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CohesionValue", 3)?;
        st.serialize_field("num", &self.numer.to_string())?;
        st.serialize_field("den", &self.denom.to_string())?;
        st.serialize_field("approx", &self.approx::<f64>())?;
        st.end()
    }
}

impl<'de, C: Count> Deserialize<'de> for CohesionValue<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let parse = |s: &str| -> Result<C, D::Error> {
            let big: BigUint = s.parse().map_err(de::Error::custom)?;
            C::from_biguint(&big).ok_or_else(|| de::Error::custom("value out of range"))
        };
        CohesionValue::new(parse(&raw.num)?, parse(&raw.den)?).map_err(de::Error::custom)
    }
}

/// Cohesion from a set size and its inside/outbound triangle counts.
///
/// Sets with fewer than three vertices, and sets with no inside triangle
/// (including the `0/0` case `i + o = 0`), have cohesion 0.
pub fn cohesion<C: Count>(size: &C, inside: &C, outbound: &C) -> Result<CohesionValue<C>> {
    let triples = choose3(size);
    if *inside > triples {
        return Err(Error::Domain(format!("{inside} inside triangles cannot fit in {size} vertices")));
    }
    if inside.is_zero() {
        return Ok(CohesionValue::zero());
    }
    let numer = inside.clone() * inside.clone();
    let denom = triples * (inside.clone() + outbound.clone());
    CohesionValue::new(numer, denom)
}

/// Cohesion of `s` read off a precomputed census.
pub fn cohesion_from_census<C: Count>(size: usize, c: &TriangleCensus<C>) -> Result<CohesionValue<C>> {
    let size = C::from_usize(size).ok_or_else(|| Error::Domain("set size overflows".into()))?;
    cohesion(&size, &c.inside, &c.outbound)
}

pub fn cohesion_of_set<C: Count>(g: &Graph, s: &VertexSet) -> Result<CohesionValue<C>> {
    let c = census::<C>(g, s)?;
    cohesion_from_census(s.len(), &c)
}

/// Threshold `C(k,3) / (C(k,3) + C(k,2)(n-k))`, the cohesion of a `k`-clique
/// sitting in a `K_n` core with no other triangle through its edges.
pub fn lambda_threshold<C: Count>(k: u64, n: u64) -> Result<CohesionValue<C>> {
    if k < 3 || k > n {
        return Err(Error::Domain(format!("need 3 <= k <= n, got k={k}, n={n}")));
    }
    let kc = C::from_u64_exact(k);
    let triples = choose3(&kc);
    let outbound = choose2(&kc) * C::from_u64_exact(n - k);
    CohesionValue::new(triples.clone(), triples + outbound)
}
