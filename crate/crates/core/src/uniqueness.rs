//! The uniqueness experiment: build the matrix M_ell sending generic
//! symmetric-weight-enumerator coefficients to theta-series coefficients,
//! compute its exact rank and nullity over the rationals, and estimate the
//! number of leading coefficients needed for the rank to stabilize.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::coset_theta::{coset_theta_formula, orbit_representatives};
use crate::qseries::ScaledSeries;
use crate::quadring::{admissible_levels, Level};
use crate::Result;

/// Result record of one cell of the experiment.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RankReport {
    pub p: u64,
    pub n: usize,
    pub ell: u64,
    /// Number of generic coefficients (monomials).
    pub s: usize,
    pub rows_used: usize,
    pub rank: usize,
    pub nullity: usize,
    /// Smallest number of leading rows at which the rank reaches its
    /// stabilized value.
    pub b_estimate: usize,
}

impl RankReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "n": self.n,
            "ell": self.ell,
            "s": self.s,
            "rows_used": self.rows_used,
            "rank": self.rank,
            "nullity": self.nullity,
            "b_estimate": self.b_estimate,
        })
    }
}

/// Number of degree-n monomials in r variables: C(n+r-1, n).
pub fn monomial_count(n: usize, r: usize) -> usize {
    assert!(r >= 1);
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * (r + i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All exponent vectors of length r summing to n, in descending
/// lexicographic order (so the first monomial is `x1^n`). At fixed degree
/// this coincides with graded-lex.
pub fn monomial_basis(n: usize, r: usize) -> Vec<Vec<u64>> {
    assert!(r >= 1);
    let mut out = Vec::with_capacity(monomial_count(n, r));
    let mut current = vec![0u64; r];
    fill(n as u64, 0, &mut current, &mut out);
    out
}

fn fill(remaining: u64, pos: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(remaining - e, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// The `(p+1)^2/4` class theta series in orbit order, truncated at `precision`.
pub fn class_theta_series(level: &Level, precision: u64) -> Result<Vec<ScaledSeries>> {
    orbit_representatives(level.p)
        .iter()
        .map(|class| {
            let (a, b) = class.canonical;
            coset_theta_formula(level, a as i64, b as i64, precision)
        })
        .collect()
}

/// Matrix of the linear map from monomial coefficients to theta coefficients:
/// entry `(i, m)` is the coefficient of `q^i` in the m-th monomial evaluated
/// at the class theta series.
pub fn build_matrix(level: &Level, n: usize, rows: usize) -> Result<Vec<Vec<BigInt>>> {
    let precision = rows as u64;
    let thetas = class_theta_series(level, precision)?;
    let r = thetas.len();
    let basis = monomial_basis(n, r);

    // Powers of each class theta up to degree n.
    let powers: Vec<Vec<ScaledSeries>> = thetas
        .iter()
        .map(|t| {
            let mut ps = vec![ScaledSeries::one(precision)];
            for _ in 0..n {
                ps.push(ps.last().unwrap().mul(t));
            }
            ps
        })
        .collect();

    let mut matrix = vec![vec![BigInt::zero(); basis.len()]; rows];
    for (m, exps) in basis.iter().enumerate() {
        let mut series = ScaledSeries::one(precision);
        for (vi, &e) in exps.iter().enumerate() {
            if e > 0 {
                series = series.mul(&powers[vi][e as usize]);
            }
        }
        let series = series.integerize()?;
        for (k, c) in series.terms() {
            matrix[k as usize][m] = c.clone();
        }
    }
    Ok(matrix)
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination on
/// big integers. Pivots are chosen by minimal nonzero absolute value to
/// limit integer growth.
pub fn exact_rank(matrix: &[Vec<BigInt>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank >= rows {
            break;
        }
        let mut pivot: Option<usize> = None;
        for i in rank..rows {
            if m[i][col].is_zero() {
                continue;
            }
            match pivot {
                None => pivot = Some(i),
                Some(j) => {
                    if m[i][col].abs() < m[j][col].abs() {
                        pivot = Some(i);
                    }
                }
            }
        }
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let lead = std::mem::take(&mut row[col]);
            for k in (col + 1)..cols {
                let t = &row[k] * &pivot_row[col] - &lead * &pivot_row[k];
                debug_assert!((&t % &prev).is_zero());
                row[k] = t / &prev;
            }
        }
        prev = pivot_row[col].clone();
        rank += 1;
    }
    rank
}

/// Runs the rank/nullity experiment for one `(p, n, ell)` cell.
///
/// Uses `rows_used = max(2s, 120)` coefficient rows and requires the rank to
/// be constant over the final 20 rows; if not, the row count doubles and the
/// computation repeats. `b_estimate` is the smallest leading-row count that
/// already attains the stabilized rank.
pub fn nullity_experiment(p: u64, n: usize, ell: u64) -> Result<RankReport> {
    let level = Level::make(p, ell)?;
    let r = ((p + 1) * (p + 1) / 4) as usize;
    let s = monomial_count(n, r);
    let mut rows = (2 * s).max(120);
    loop {
        let matrix = build_matrix(&level, n, rows)?;
        let rank = exact_rank(&matrix);
        if exact_rank(&matrix[..rows - 20]) != rank {
            rows *= 2;
            continue;
        }
        // Rank of a leading-row prefix is monotone in the prefix length.
        let (mut lo, mut hi) = (1usize, rows);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if exact_rank(&matrix[..mid]) == rank {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        return Ok(RankReport {
            p,
            n,
            ell,
            s,
            rows_used: rows,
            rank,
            nullity: s - rank,
            b_estimate: lo,
        });
    }
}

/// One report per (n, admissible ell <= ell_max), sorted by (n, ell).
pub fn conjecture_sweep(p: u64, n_list: &[usize], ell_max: u64) -> Result<Vec<RankReport>> {
    let mut reports = Vec::new();
    for &n in n_list {
        for ell in admissible_levels(p, ell_max) {
            reports.push(nullity_experiment(p, n, ell)?);
        }
    }
    Ok(reports)
}

/// Conjectured uniqueness thresholds violated by a report with positive
/// nullity. The three published thresholds are checked separately.
pub fn conjecture_flags(report: &RankReport) -> Vec<String> {
    if report.nullity == 0 {
        return Vec::new();
    }
    let (p, n, ell) = (
        report.p as u128,
        report.n as u128,
        report.ell as u128,
    );
    let bound = p * (n + 1) * (n + 2);
    let mut flags = Vec::new();
    if ell * n >= bound - n {
        flags.push(format!(
            "nullity {} > 0 with ell >= p(n+1)(n+2)/n - 1 at (p={}, n={}, ell={})",
            report.nullity, report.p, report.n, report.ell
        ));
    }
    if ell * n >= bound {
        flags.push(format!(
            "nullity {} > 0 with ell >= p(n+1)(n+2)/n at (p={}, n={}, ell={})",
            report.nullity, report.p, report.n, report.ell
        ));
    }
    if 2 * ell > bound {
        flags.push(format!(
            "nullity {} > 0 with ell > p(n+1)(n+2)/2 at (p={}, n={}, ell={})",
            report.nullity, report.p, report.n, report.ell
        ));
    }
    flags
}
