//! Theta series of Construction-A lattices: the cwe evaluated at the coset
//! theta series, an independent lattice-point enumeration oracle, and the
//! level-agreement check for the common prefix of two levels.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::One;

use crate::codes::LinearCode;
use crate::coset_theta::{coset_theta_table, isqrt};
use crate::qseries::ScaledSeries;
use crate::quadring::{Level, RingElem};
use crate::{Error, Result};

fn check_level(code: &LinearCode, level: &Level) -> Result<()> {
    let ring = code.ring();
    if ring.p != level.p {
        return Err(Error::LevelMismatch(format!(
            "code is over p = {}, level has p = {}",
            ring.p, level.p
        )));
    }
    if ring.split != level.split {
        return Err(Error::LevelMismatch(format!(
            "code ring is {:?}, level {} is {:?}",
            ring.split, level.ell, level.split
        )));
    }
    Ok(())
}

/// Theta series of the lattice of C at the given level: the complete weight
/// enumerator evaluated at the p^2 coset theta series in index order.
pub fn theta_via_cwe(code: &LinearCode, level: &Level, precision: u64) -> Result<ScaledSeries> {
    check_level(code, level)?;
    let table = coset_theta_table(level, precision)?;
    Ok(code.cwe().evaluate(&table, precision))
}

/// Independent oracle: depth-first enumeration of all vectors of O_K^n whose
/// componentwise reduction lies in C, accumulating `q^(sum of norms)`. Never
/// routes through the weight enumerator.
pub fn theta_via_enum(code: &LinearCode, level: &Level, precision: u64) -> Result<ScaledSeries> {
    check_level(code, level)?;
    let n = code.length();
    let ring = level.ring();

    // All (x, y) with Q_d(x, y) < precision, with their reductions.
    let mut candidates: Vec<(u64, RingElem)> = Vec::new();
    if precision > 0 {
        let y_bound = isqrt(4 * precision / level.ell) as i64 + 1;
        let x_span = isqrt(4 * precision) as i64 + 1;
        for y in -y_bound..=y_bound {
            let lo = (-x_span - y).div_euclid(2) - 1;
            let hi = (x_span - y).div_euclid(2) + 1;
            for x in lo..=hi {
                let q = level.norm_form(x, y);
                if q < precision {
                    candidates.push((q, ring.reduce(x, y)));
                }
            }
        }
    }
    candidates.sort_unstable_by_key(|&(q, _)| q);

    // Codeword prefixes of every length, for pruning.
    let prefixes: Vec<HashSet<&[RingElem]>> = (0..=n)
        .map(|k| code.codewords().iter().map(|w| &w[..k]).collect())
        .collect();

    let mut counts: BTreeMap<u64, BigInt> = BTreeMap::new();
    let mut word: Vec<RingElem> = Vec::with_capacity(n);
    dfs(
        &candidates,
        &prefixes,
        n,
        precision,
        0,
        &mut word,
        &mut counts,
    );
    Ok(ScaledSeries::from_terms(1, precision, counts))
}

fn dfs(
    candidates: &[(u64, RingElem)],
    prefixes: &[HashSet<&[RingElem]>],
    n: usize,
    precision: u64,
    partial_norm: u64,
    word: &mut Vec<RingElem>,
    counts: &mut BTreeMap<u64, BigInt>,
) {
    if word.len() == n {
        *counts.entry(partial_norm).or_default() += BigInt::one();
        return;
    }
    for &(q, elem) in candidates {
        let total = partial_norm + q;
        if total >= precision {
            break; // candidates are sorted by norm
        }
        word.push(elem);
        if prefixes[word.len()].contains(word.as_slice()) {
            dfs(candidates, prefixes, n, precision, total, word, counts);
        }
        word.pop();
    }
}

/// First exponent below `precision` where the theta series of C at `ell1`
/// and `ell2` differ, or `None` if the truncations agree. The contract from
/// the level-agreement theorem: any difference is at exponent
/// `>= (min(ell1, ell2) + 1) / 4`.
pub fn level_agreement_prefix(
    code: &LinearCode,
    ell1: u64,
    ell2: u64,
    precision: u64,
) -> Result<Option<u64>> {
    let l1 = Level::make(code.ring().p, ell1)?;
    let l2 = Level::make(code.ring().p, ell2)?;
    let t1 = theta_via_cwe(code, &l1, precision)?;
    let t2 = theta_via_cwe(code, &l2, precision)?;
    Ok(first_difference(&t1, &t2, precision))
}

/// Smallest integer exponent below `precision` with differing coefficients.
pub fn first_difference(t1: &ScaledSeries, t2: &ScaledSeries, precision: u64) -> Option<u64> {
    (0..precision).find(|&e| t1.coeff_int(e) != t2.coeff_int(e))
}
