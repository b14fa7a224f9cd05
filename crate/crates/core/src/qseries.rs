//! Truncated power series in `q` with rational exponents of a fixed
//! denominator.
//!
//! A [`ScaledSeries`] stores terms keyed by exponent numerator: the term at
//! key `k` has exponent `k / scale`. The series is a truncation, never an
//! exact object; it is known for all exponents strictly below `precision`
//! (measured in `q`-units), and every operation propagates the tightest
//! provable precision.

use std::cmp::min;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde_json::json;

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ScaledSeries {
    scale: u64,
    precision: u64,
    terms: BTreeMap<u64, BigInt>,
}

impl ScaledSeries {
    /// The zero series at the given scale and precision.
    pub fn zero(scale: u64, precision: u64) -> Self {
        assert!(scale > 0, "scale must be positive");
        ScaledSeries {
            scale,
            precision,
            terms: BTreeMap::new(),
        }
    }

    /// The constant series 1, at scale 1.
    pub fn one(precision: u64) -> Self {
        Self::from_terms(1, precision, [(0u64, BigInt::one())])
    }

    /// Builds a series from `(exponent_numerator, coefficient)` pairs,
    /// collecting like terms and dropping zeros and out-of-precision terms.
    pub fn from_terms<I>(scale: u64, precision: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigInt)>,
    {
        assert!(scale > 0, "scale must be positive");
        let cutoff = precision.saturating_mul(scale);
        let mut map: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (k, c) in terms {
            if k >= cutoff || c.is_zero() {
                continue;
            }
            *map.entry(k).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        ScaledSeries {
            scale,
            precision,
            terms: map,
        }
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(exponent_numerator, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `q^(num/den)`; zero if the exponent is not representable
    /// or absent.
    pub fn coeff(&self, num: u64, den: u64) -> BigInt {
        assert!(den > 0);
        let scaled = num as u128 * self.scale as u128;
        if scaled % den as u128 != 0 {
            return BigInt::zero();
        }
        let k = (scaled / den as u128) as u64;
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// Coefficient of the integer exponent `e`.
    pub fn coeff_int(&self, e: u64) -> BigInt {
        self.coeff(e, 1)
    }

    fn rescale_key(&self, target_scale: u64) -> impl Iterator<Item = (u64, BigInt)> + '_ {
        debug_assert!(target_scale % self.scale == 0);
        let factor = target_scale / self.scale;
        self.terms.iter().map(move |(k, c)| (k * factor, c.clone()))
    }

    /// Coefficient-wise sum. Scales are unified to their lcm; the result
    /// precision is the minimum of the input precisions.
    pub fn add(&self, other: &Self) -> Self {
        let scale = self.scale.lcm(&other.scale);
        let precision = min(self.precision, other.precision);
        Self::from_terms(
            scale,
            precision,
            self.rescale_key(scale).chain(other.rescale_key(scale)),
        )
    }

    /// Truncating convolution. Exponents are non-negative throughout this
    /// crate, so the result is correct below `min(P1, P2)`.
    pub fn mul(&self, other: &Self) -> Self {
        let scale = self.scale.lcm(&other.scale);
        let precision = min(self.precision, other.precision);
        let cutoff = precision.saturating_mul(scale);
        let fa = scale / self.scale;
        let fb = scale / other.scale;
        let mut map: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (k1, c1) in &self.terms {
            let k1 = k1 * fa;
            if k1 >= cutoff {
                continue;
            }
            for (k2, c2) in &other.terms {
                let k = k1 + k2 * fb;
                if k >= cutoff {
                    break;
                }
                *map.entry(k).or_default() += c1 * c2;
            }
        }
        map.retain(|_, c| !c.is_zero());
        ScaledSeries {
            scale,
            precision,
            terms: map,
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale_coeffs(&self, c: &BigInt) -> Self {
        Self::from_terms(
            self.scale,
            self.precision,
            self.terms.iter().map(|(k, v)| (*k, v * c)),
        )
    }

    /// Substitutes `q -> q^(num/den)`: every exponent `e` becomes `e*num/den`
    /// and the precision becomes `floor(P*num/den)`. The resulting scale is
    /// minimized.
    pub fn substitute_power(&self, num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidPower(
                "substitution power must be positive".into(),
            ));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        let scale = self.scale * den;
        let precision = self.precision * num / den;
        let mut out = Self::from_terms(
            scale,
            precision,
            self.terms.iter().map(|(k, c)| (k * num, c.clone())),
        );
        out.minimize_scale();
        Ok(out)
    }

    fn minimize_scale(&mut self) {
        let mut g = self.scale;
        for k in self.terms.keys() {
            g = g.gcd(k);
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            self.scale /= g;
            self.terms = self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect();
        }
    }

    /// Same series with the scale reduced as far as the support allows.
    pub fn reduced(&self) -> Self {
        let mut s = self.clone();
        s.minimize_scale();
        s
    }

    /// Converts to scale 1, failing if any exponent has a fractional part.
    pub fn integerize(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            if k % self.scale != 0 {
                return Err(Error::NonIntegerSupport);
            }
            terms.insert(k / self.scale, c.clone());
        }
        Ok(ScaledSeries {
            scale: 1,
            precision: self.precision,
            terms,
        })
    }

    /// Smallest exponent with a nonzero coefficient, `None` for the zero series.
    pub fn min_exponent(&self) -> Option<Ratio<u64>> {
        self.terms
            .keys()
            .next()
            .map(|k| Ratio::new(*k, self.scale))
    }

    /// Stable JSON form: `{"scale", "precision", "terms": [[k, "coeff"], ...]}`
    /// with terms sorted by exponent and coefficients as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "scale": self.scale,
            "precision": self.precision,
            "terms": self
                .terms
                .iter()
                .map(|(k, c)| json!([k, c.to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Two series are equal when, after rescaling to a common scale, their term
/// maps agree on all exponents below the smaller precision.
impl PartialEq for ScaledSeries {
    fn eq(&self, other: &Self) -> bool {
        let scale = self.scale.lcm(&other.scale);
        let cutoff = min(self.precision, other.precision).saturating_mul(scale);
        let a: BTreeMap<u64, &BigInt> = self
            .terms
            .iter()
            .map(|(k, c)| (k * (scale / self.scale), c))
            .filter(|(k, _)| *k < cutoff)
            .collect();
        let b: BTreeMap<u64, &BigInt> = other
            .terms
            .iter()
            .map(|(k, c)| (k * (scale / other.scale), c))
            .filter(|(k, _)| *k < cutoff)
            .collect();
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(scale: u64, precision: u64, terms: &[(u64, i64)]) -> ScaledSeries {
        ScaledSeries::from_terms(
            scale,
            precision,
            terms.iter().map(|(k, c)| (*k, BigInt::from(*c))),
        )
    }

    #[test]
    fn add_identity_and_like_terms() {
        let one_plus_q = s(1, 10, &[(0, 1), (1, 1)]);
        let zero = ScaledSeries::zero(1, 10);
        assert_eq!(one_plus_q.add(&zero), one_plus_q);

        let a = s(1, 10, &[(0, 1), (2, 2)]);
        let b = s(1, 10, &[(2, 3)]);
        assert_eq!(a.add(&b), s(1, 10, &[(0, 1), (2, 5)]));
    }

    #[test]
    fn mul_identity_and_binomial() {
        let one_plus_q = s(1, 10, &[(0, 1), (1, 1)]);
        assert_eq!(one_plus_q.mul(&ScaledSeries::one(10)), one_plus_q);
        assert_eq!(
            one_plus_q.mul(&one_plus_q),
            s(1, 10, &[(0, 1), (1, 2), (2, 1)])
        );
    }

    #[test]
    fn mul_truncates_at_min_precision() {
        let a = s(1, 3, &[(0, 1), (2, 1)]);
        let b = s(1, 5, &[(0, 1), (2, 1)]);
        let c = a.mul(&b);
        assert_eq!(c.precision(), 3);
        assert_eq!(c.coeff_int(2), BigInt::from(2));
        assert_eq!(c.coeff_int(4), BigInt::zero());
    }

    #[test]
    fn substitute_power_examples() {
        let one_plus_q = s(1, 2, &[(0, 1), (1, 1)]);
        let sq = one_plus_q.substitute_power(2, 1).unwrap();
        assert_eq!(sq, s(1, 4, &[(0, 1), (2, 1)]));
        assert_eq!(sq.precision(), 4);

        // 1 + q^{1/4} at scale 4: substituting q -> q^4 collapses the scale.
        let quarter = s(4, 1, &[(0, 1), (1, 1)]);
        let collapsed = quarter.substitute_power(4, 1).unwrap();
        assert_eq!(collapsed.scale(), 1);
        assert_eq!(collapsed, s(1, 4, &[(0, 1), (1, 1)]));

        assert!(quarter.substitute_power(0, 1).is_err());
    }

    #[test]
    fn substitute_power_composes() {
        let a = s(4, 5, &[(1, 1), (6, 2), (9, 3)]);
        let x = a
            .substitute_power(2, 3)
            .unwrap()
            .substitute_power(3, 1)
            .unwrap();
        let y = a.substitute_power(2, 1).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn integerize_examples() {
        let ok = s(4, 10, &[(0, 1), (8, 2)]);
        let out = ok.integerize().unwrap();
        assert_eq!(out.scale(), 1);
        assert_eq!(out, s(1, 10, &[(0, 1), (2, 2)]));

        let bad = s(4, 10, &[(1, 1)]);
        assert!(matches!(bad.integerize(), Err(Error::NonIntegerSupport)));
    }

    #[test]
    fn min_exponent_examples() {
        assert_eq!(
            s(1, 20, &[(0, 1), (9, 2)]).min_exponent(),
            Some(Ratio::new(0, 1))
        );
        assert_eq!(
            s(1, 20, &[(9, 2), (18, 2)]).min_exponent(),
            Some(Ratio::new(9, 1))
        );
        assert_eq!(ScaledSeries::zero(1, 20).min_exponent(), None);
        assert_eq!(
            s(36, 20, &[(9, 2)]).min_exponent(),
            Some(Ratio::new(1, 4))
        );
    }

    #[test]
    fn equality_across_scales() {
        assert_eq!(s(4, 10, &[(4, 1)]), s(1, 10, &[(1, 1)]));
        assert_ne!(s(4, 10, &[(1, 1)]), s(1, 10, &[(1, 1)]));
    }

    #[test]
    fn json_is_sorted_and_stringly() {
        let a = s(2, 5, &[(3, 7), (0, 1)]);
        let v = a.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"scale":2,"precision":5,"terms":[[0,"1"],[3,"7"]]}"#
        );
    }
}
