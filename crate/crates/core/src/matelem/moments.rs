//! Exact diagonal moments `<y^p>` of half-line Airy states.
//!
//! For u'' = (y - lambda) u on y >= 0, the surface-term identity with f = y^q
//! and n = m gives
//!
//! ```text
//! 2q(2q-1) M[q-1] = 4 lambda q(q-1) M[q-2] + q(q-1)(q-2)(q-3) M[q-4] - S_q
//! ```
//!
//! where S_q collects the boundary terms at y = 0: -2 at q = 1 for both
//! parities, and an extra -6/lambda at q = 3 for even states (u(0)^2 = 1/lambda).
//! Coefficients are exact rationals; lambda stays symbolic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::num::{CompensatedSum, Real};
use crate::spectra::Parity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTerm {
    pub coef: BigRational,
    pub exp: i32,
}

/// `sum_i c_i lambda^(e_i)` with strictly decreasing exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentExpression {
    pub parity: Parity,
    pub p: u32,
    pub terms: Vec<MomentTerm>,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl MomentExpression {
    fn from_map(parity: Parity, p: u32, map: &BTreeMap<i32, BigRational>) -> Self {
        let terms = map
            .iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&exp, coef)| MomentTerm {
                coef: coef.clone(),
                exp,
            })
            .collect();
        Self { parity, p, terms }
    }

    /// Coefficient of `lambda^exp`, zero when absent.
    pub fn coefficient(&self, exp: i32) -> BigRational {
        self.terms
            .iter()
            .find(|t| t.exp == exp)
            .map(|t| t.coef.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// True when the expression equals `sum (num/den) lambda^exp` over the given triples.
    pub fn matches(&self, expected: &[(i64, i64, i32)]) -> bool {
        let other: Vec<MomentTerm> = expected
            .iter()
            .map(|&(n, d, e)| MomentTerm {
                coef: ratio(n, d),
                exp: e,
            })
            .collect();
        self.terms == other
    }

    pub fn eval<T: Real>(&self, lambda: T) -> T {
        let mut s = CompensatedSum::new();
        for t in &self.terms {
            let c = T::lit(t.coef.to_f64().unwrap_or(f64::NAN));
            s.add(c * lambda.powi(t.exp));
        }
        s.value()
    }

    /// Structural invariants: decreasing exponents, leading exponent p,
    /// all exponents congruent to p mod 3.
    pub fn is_well_formed(&self) -> bool {
        let decreasing = self.terms.windows(2).all(|w| w[0].exp > w[1].exp);
        let lead = self.terms.first().map(|t| t.exp) == Some(self.p as i32);
        let spacing = self
            .terms
            .iter()
            .all(|t| (self.p as i32 - t.exp).rem_euclid(3) == 0);
        decreasing && lead && spacing
    }
}

impl fmt::Display for MomentExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.parity {
            Parity::Odd => "zeta",
            _ => "eta",
        };
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coef.is_negative();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            write!(f, "{}", t.coef.abs())?;
            match t.exp {
                0 => {}
                1 => write!(f, " {sym}")?,
                e => write!(f, " {sym}^{e}")?,
            }
        }
        Ok(())
    }
}

struct BigJson<'a>(&'a BigInt);

impl Serialize for BigJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct TermJson<'a>(&'a MomentTerm);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("num", &BigJson(self.0.coef.numer()))?;
        m.serialize_entry("den", &BigJson(self.0.coef.denom()))?;
        m.serialize_entry("exp", &self.0.exp)?;
        m.end()
    }
}

impl Serialize for MomentExpression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson<'_>> = self.terms.iter().map(TermJson).collect();
        let mut st = s.serialize_struct("MomentExpression", 3)?;
        st.serialize_field("parity", &self.parity)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// `<y^p>` for p = 1..=max_p.
pub fn moment_recursion_airy(parity: Parity, max_p: u32) -> Result<Vec<MomentExpression>> {
    if max_p == 0 {
        return Err(Error::Argument("max_p must be at least 1".into()));
    }
    let all = moment_table(parity, max_p)?;
    Ok(all.into_iter().skip(1).collect())
}

/// `<y^p>` for p = 0..=max_p, the p = 0 entry being the normalization 1.
pub fn moment_table(parity: Parity, max_p: u32) -> Result<Vec<MomentExpression>> {
    if parity == Parity::None {
        return Err(Error::Argument(
            "Airy moments need an even or odd state".into(),
        ));
    }
    let mut maps: Vec<BTreeMap<i32, BigRational>> = Vec::with_capacity(max_p as usize + 1);
    maps.push(BTreeMap::from([(0, BigRational::one())]));
    for q in 2..=(max_p as i64 + 1) {
        let mut acc: BTreeMap<i32, BigRational> = BTreeMap::new();
        let mut add = |e: i32, c: BigRational| {
            let slot = acc.entry(e).or_insert_with(BigRational::zero);
            *slot += c;
        };
        let k = BigRational::from_integer(BigInt::from(4 * q * (q - 1)));
        for (e, c) in &maps[(q - 2) as usize] {
            add(e + 1, c * &k);
        }
        if q >= 4 {
            let k = BigRational::from_integer(BigInt::from(q * (q - 1) * (q - 2) * (q - 3)));
            for (e, c) in &maps[(q - 4) as usize] {
                add(*e, c * &k);
            }
        }
        if parity == Parity::Even && q == 3 {
            add(-1, BigRational::from_integer(BigInt::from(6)));
        }
        let den = BigRational::from_integer(BigInt::from(2 * q * (2 * q - 1)));
        let map = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c / &den))
            .collect();
        maps.push(map);
    }
    Ok(maps
        .iter()
        .enumerate()
        .map(|(p, m)| MomentExpression::from_map(parity, p as u32, m))
        .collect())
}
