//! Theta series of the cosets `L_{a,b} = a - b*w + pO_K`, by closed form and
//! by direct enumeration, together with the Klein four-group orbit structure
//! on the pairs `(a, b)`.
//!
//! The closed form is the product identity
//! `th_{L_{a,b}}(q) = th_{p,b}(q^{p^2 l}) th_{p,2a+b}(q^{p^2})
//!                  + th_{p,b+p}(q^{p^2 l}) th_{p,2a+b+p}(q^{p^2})`,
//! assembled here at scale 4 (exponents `l(2pn+j)^2/4` and `(2pn+j)^2/4`),
//! which makes every coset theta land on integer exponents directly.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use crate::qseries::ScaledSeries;
use crate::quadring::Level;
use crate::Result;

/// One Klein four-group orbit of coset labels `(a, b)` mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetClass {
    pub p: u64,
    /// Orbit members, normalized to `{0,...,p-1}^2`, sorted.
    pub members: Vec<(u64, u64)>,
    /// Lexicographically least member.
    pub canonical: (u64, u64),
}

impl CosetClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "canonical": [self.canonical.0, self.canonical.1],
            "size": self.size(),
            "members": self.members.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        })
    }
}

/// The orbit of `(a, b)` under `(a,b) -> (-a-b,b), (-a,-b), (a+b,-b)` mod p.
pub fn klein_orbit(p: u64, a: i64, b: i64) -> CosetClass {
    let pi = p as i64;
    let norm = |x: i64, y: i64| (x.rem_euclid(pi) as u64, y.rem_euclid(pi) as u64);
    let mut members: Vec<(u64, u64)> = vec![
        norm(a, b),
        norm(-a - b, b),
        norm(-a, -b),
        norm(a + b, -b),
    ];
    members.sort_unstable();
    members.dedup();
    let canonical = members[0];
    CosetClass { p, members, canonical }
}

/// All orbits for an odd prime p, ordered by the index `a + p*b` of their
/// canonical representative; there are exactly `(p+1)^2/4` of them.
pub fn orbit_representatives(p: u64) -> Vec<CosetClass> {
    let mut seen = vec![false; (p * p) as usize];
    let mut classes = Vec::new();
    for i in 0..(p * p) as usize {
        if seen[i] {
            continue;
        }
        let (a, b) = (i as u64 % p, i as u64 / p);
        let class = klein_orbit(p, a as i64, b as i64);
        for &(x, y) in &class.members {
            seen[(x + p * y) as usize] = true;
        }
        classes.push(class);
    }
    classes
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// The one-dimensional theta series `th_{p,j}(q) = sum_n q^{(n + j/2p)^2}`,
/// truncated at `precision` and stored at scale `4p^2`.
pub fn theta_1d(p: u64, j: i64, precision: u64) -> ScaledSeries {
    let scale = 4 * p * p;
    series_over_progression(scale, 1, p, j, precision)
}

/// `sum_n q^{mult * (2pn+j)^2 / 4}` at scale 4: the building block of the
/// coset closed form (`mult` is `ell` or 1).
fn theta_factor(mult: u64, p: u64, j: i64, precision: u64) -> ScaledSeries {
    series_over_progression(4, mult, p, j, precision)
}

/// `sum_n q^{mult*(2pn+j)^2 / scale}` for `t = 2pn + j` over all integers n,
/// keeping terms below `precision`.
fn series_over_progression(scale: u64, mult: u64, p: u64, j: i64, precision: u64) -> ScaledSeries {
    let cutoff = precision.saturating_mul(scale) as u128;
    if cutoff == 0 {
        return ScaledSeries::zero(scale, precision);
    }
    // |t| <= sqrt(cutoff / mult); walk n across that window with slack.
    let bound = isqrt((cutoff / mult as u128).min(u64::MAX as u128) as u64) as i64;
    let step = 2 * p as i64;
    let n_min = (-bound - j).div_euclid(step) - 1;
    let n_max = (bound - j).div_euclid(step) + 1;
    let mut terms: BTreeMap<u64, BigInt> = BTreeMap::new();
    for n in n_min..=n_max {
        let t = step * n + j;
        let k = mult as u128 * (t as i128 * t as i128) as u128;
        if k < cutoff {
            *terms.entry(k as u64).or_default() += BigInt::one();
        }
    }
    ScaledSeries::from_terms(scale, precision, terms)
}

/// Coset theta series by the closed form; integer-supported, scale 1.
pub fn coset_theta_formula(level: &Level, a: i64, b: i64, precision: u64) -> Result<ScaledSeries> {
    let p = level.p as i64;
    let ell = level.ell;
    let f1 = theta_factor(ell, level.p, b, precision);
    let g1 = theta_factor(1, level.p, 2 * a + b, precision);
    let f2 = theta_factor(ell, level.p, b + p, precision);
    let g2 = theta_factor(1, level.p, 2 * a + b + p, precision);
    f1.mul(&g1).add(&f2.mul(&g2)).integerize()
}

/// Coset theta series by direct double summation over the lattice coset:
/// the independent oracle for the closed form.
pub fn coset_theta_enum(level: &Level, a: i64, b: i64, precision: u64) -> ScaledSeries {
    let mut counts: BTreeMap<u64, BigInt> = BTreeMap::new();
    if precision > 0 {
        let p = level.p as i64;
        let d = level.d as i128;
        // Q_d(x,y) = (x + y/2)^2 + ell*y^2/4, so ell*y^2 < 4P and (2x+y)^2 < 4P.
        let y_bound = isqrt(4 * precision / level.ell) as i64 + 1;
        let x_span = isqrt(4 * precision) as i64 + 1;
        let mut y = b.rem_euclid(p) - ((y_bound + p) / p + 1) * p;
        while y <= y_bound {
            if y.abs() <= y_bound {
                let lo = (-x_span - y).div_euclid(2);
                let hi = (x_span - y).div_euclid(2) + 1;
                let mut x = a.rem_euclid(p) + (lo - p).div_euclid(p) * p;
                while x <= hi {
                    if x >= lo {
                        let q = (x as i128) * (x as i128)
                            + (x as i128) * (y as i128)
                            + d * (y as i128) * (y as i128);
                        if (q as u128) < precision as u128 {
                            *counts.entry(q as u64).or_default() += BigInt::one();
                        }
                    }
                    x += p;
                }
            }
            y += p;
        }
    }
    ScaledSeries::from_terms(1, precision, counts)
}

/// All p^2 coset theta series in index order (`index = a + p*b` for the coset
/// `a - b*w + pO_K`), computed once per orbit via the closed form.
pub fn coset_theta_table(level: &Level, precision: u64) -> Result<Vec<ScaledSeries>> {
    let p = level.p;
    let mut table: Vec<Option<ScaledSeries>> = vec![None; (p * p) as usize];
    for class in orbit_representatives(p) {
        let (a, b) = class.canonical;
        let theta = coset_theta_formula(level, a as i64, b as i64, precision)?;
        for &(x, y) in &class.members {
            table[(x + p * y) as usize] = Some(theta.clone());
        }
    }
    Ok(table.into_iter().map(|s| s.unwrap()).collect())
}

/// The minimal exponent of `th_{L_{a,b}}` as the minimum of the four norm
/// values at the representatives nearest the origin.
pub fn min_exponent_closed_form(level: &Level, a: u64, b: u64) -> u64 {
    assert!(a < level.p && b < level.p);
    let p = level.p as i64;
    let (a, b) = (a as i64, b as i64);
    [(a, b), (a - p, b), (a, b - p), (a - p, b - p)]
        .iter()
        .map(|&(x, y)| level.norm_form(x, y))
        .min()
        .unwrap()
}

/// Number of distinct truncated series among all `th_{L_{a,b}}`,
/// `(a, b) in {0,...,p-1}^2`, at the given precision.
pub fn distinct_theta_count(level: &Level, precision: u64) -> Result<usize> {
    let p = level.p;
    let mut keys: HashSet<String> = HashSet::new();
    for class in orbit_representatives(p) {
        let (a, b) = class.canonical;
        let theta = coset_theta_formula(level, a as i64, b as i64, precision)?;
        keys.insert(theta.reduced().to_json().to_string());
    }
    Ok(keys.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn coeffs(s: &ScaledSeries, upto: u64) -> Vec<i64> {
        (0..upto)
            .map(|e| {
                let c = s.coeff_int(e);
                i64::try_from(&c).unwrap()
            })
            .collect()
    }

    #[test]
    fn theta_1d_j0_is_jacobi_theta3() {
        let t = theta_1d(3, 0, 17).integerize().unwrap();
        assert_eq!(
            coeffs(&t, 17),
            vec![1, 2, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 2]
        );
    }

    #[test]
    fn theta_1d_half_shift() {
        // th_{3,3}: exponents (n + 1/2)^2, minimal 1/4 with coefficient 2.
        let t = theta_1d(3, 3, 10);
        assert_eq!(t.min_exponent(), Some(Ratio::new(1, 4)));
        assert_eq!(t.coeff(1, 4), BigInt::from(2));
    }

    #[test]
    fn theta_1d_symmetry_in_j() {
        let p = 3;
        for (j, k) in [(1i64, 5i64), (1, 7), (2, 4), (0, 6)] {
            assert_eq!(theta_1d(p, j, 10), theta_1d(p, k, 10), "j={j} k={k}");
        }
        assert_ne!(theta_1d(p, 1, 10), theta_1d(p, 2, 10));
    }

    #[test]
    fn formula_matches_enumeration_small() {
        for (p, ell) in [(3u64, 7u64), (3, 11), (5, 19)] {
            let level = Level::make(p, ell).unwrap();
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    let f = coset_theta_formula(&level, a, b, 60).unwrap();
                    let e = coset_theta_enum(&level, a, b, 60);
                    assert_eq!(f, e, "p={p} ell={ell} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn coset_theta_frozen_values() {
        // Frozen from the enumeration oracle at p=3, ell=7.
        let level = Level::make(3, 7).unwrap();
        let t00 = coset_theta_enum(&level, 0, 0, 20);
        assert_eq!(
            coeffs(&t00, 20),
            vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0]
        );
        assert_eq!(t00, coset_theta_formula(&level, 0, 0, 20).unwrap());

        let t10 = coset_theta_enum(&level, 1, 0, 10);
        assert_eq!(coeffs(&t10, 10), vec![0, 1, 0, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(
            (t10.min_exponent(), t00.clone().min_exponent()),
            (Some(Ratio::new(1, 1)), Some(Ratio::new(0, 1)))
        );
    }

    #[test]
    fn constant_term_is_one_only_at_origin() {
        let level = Level::make(3, 11).unwrap();
        for a in 0..3i64 {
            for b in 0..3i64 {
                let t = coset_theta_formula(&level, a, b, 10).unwrap();
                let expect = if (a, b) == (0, 0) { 1 } else { 0 };
                assert_eq!(t.coeff_int(0), BigInt::from(expect));
            }
        }
    }

    #[test]
    fn enum_with_zero_precision_is_empty() {
        let level = Level::make(3, 7).unwrap();
        assert!(coset_theta_enum(&level, 1, 1, 0).is_zero());
    }

    #[test]
    fn klein_orbit_examples() {
        let o = klein_orbit(3, 0, 1);
        assert_eq!(o.members, vec![(0, 1), (0, 2), (1, 2), (2, 1)]);
        assert_eq!(o.canonical, (0, 1));
        assert_eq!(klein_orbit(3, 0, 0).members, vec![(0, 0)]);
        assert_eq!(klein_orbit(3, 1, 1).members, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn orbit_representatives_examples() {
        let reps3: Vec<_> = orbit_representatives(3)
            .iter()
            .map(|c| c.canonical)
            .collect();
        assert_eq!(reps3, vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(orbit_representatives(5).len(), 9);
        assert_eq!(orbit_representatives(7).len(), 16);
    }

    #[test]
    fn orbits_share_theta_series() {
        let level = Level::make(3, 7).unwrap();
        for class in orbit_representatives(3) {
            let (a, b) = class.canonical;
            let base = coset_theta_formula(&level, a as i64, b as i64, 40).unwrap();
            for &(x, y) in &class.members {
                let other = coset_theta_formula(&level, x as i64, y as i64, 40).unwrap();
                assert_eq!(base, other);
            }
        }
    }

    #[test]
    fn min_exponent_closed_form_examples() {
        let level = Level::make(3, 7).unwrap();
        assert_eq!(min_exponent_closed_form(&level, 1, 0), 1);
        assert_eq!(min_exponent_closed_form(&level, 0, 1), 2);
        assert_eq!(min_exponent_closed_form(&level, 1, 1), 4);
        // Closed form agrees with the enumerated series.
        for a in 0..3u64 {
            for b in 0..3u64 {
                let t = coset_theta_enum(&level, a as i64, b as i64, 60);
                assert_eq!(
                    t.min_exponent(),
                    Some(Ratio::new(min_exponent_closed_form(&level, a, b), 1))
                );
            }
        }
    }

    #[test]
    fn distinct_theta_counts() {
        let l7 = Level::make(3, 7).unwrap();
        assert_eq!(distinct_theta_count(&l7, 60).unwrap(), 4);
        let l115 = Level::make(3, 115).unwrap();
        assert_eq!(distinct_theta_count(&l115, 120).unwrap(), 4);
    }
}
