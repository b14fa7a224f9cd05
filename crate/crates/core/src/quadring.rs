//! Level parameters of the imaginary quadratic field and the quotient ring
//! R = O_K / pO_K.
//!
//! A level is an admissible `ell`: square-free, congruent to 3 mod 4, and
//! coprime to `p`. It carries `d = (ell+1)/4`, so the ring of integers is
//! Z[w] with `w^2 + w + d = 0`, and the classification of R as a product of
//! fields or a field of order p^2.
//!
//! Sign convention: a pair `(a, b)` in coset/index position always denotes
//! `a - b*w` (label `a + p*b` enumerates `a - b*w`), while [`RingElem`] stores
//! `a + b*w` internally. [`RingCtx::reduce`] performs the flip at that single
//! boundary.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Split {
    /// O_K/pO_K = F_p x F_p (the Legendre symbol (-ell | p) is 1).
    Split,
    /// O_K/pO_K = F_{p^2} ((-ell | p) is -1).
    Inert,
    /// p | ell. Outside the admissible range; reachable only through
    /// [`Level::theta_only`] for theta-layer computations.
    Ramified,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub ell: u64,
    pub d: u64,
    pub p: u64,
    pub split: Split,
}

/// Element `a + b*w` of R, with canonical representatives `0 <= a, b < p`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    pub a: u64,
    pub b: u64,
}

impl RingElem {
    pub const ZERO: RingElem = RingElem { a: 0, b: 0 };

    /// Coset coordinates `(a, b)` such that the element equals `a - b*w`.
    pub fn coset_coords(&self, p: u64) -> (u64, u64) {
        (self.a, (p - self.b) % p)
    }

    /// Zero-based position in the enumeration r_1, ..., r_{p^2} of R
    /// (`r_{a+pb+1} = a - b*w`).
    pub fn index(&self, p: u64) -> usize {
        let (a, b) = self.coset_coords(p);
        (a + p * b) as usize
    }

    pub fn from_index(i: usize, p: u64) -> RingElem {
        let a = i as u64 % p;
        let b = i as u64 / p;
        debug_assert!(b < p);
        RingElem {
            a,
            b: (p - b) % p,
        }
    }
}

/// Arithmetic context for R: everything the ring operations need from a
/// level. Codes over R depend on `ell` only through `d mod p`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RingCtx {
    pub p: u64,
    pub d_mod_p: u64,
    pub split: Split,
}

impl RingCtx {
    pub fn add(&self, u: RingElem, v: RingElem) -> RingElem {
        RingElem {
            a: (u.a + v.a) % self.p,
            b: (u.b + v.b) % self.p,
        }
    }

    pub fn neg(&self, u: RingElem) -> RingElem {
        RingElem {
            a: (self.p - u.a) % self.p,
            b: (self.p - u.b) % self.p,
        }
    }

    pub fn sub(&self, u: RingElem, v: RingElem) -> RingElem {
        self.add(u, self.neg(v))
    }

    /// (a+bw)(c+ew) = (ac - bed) + (ae + bc - be)w, using w^2 = -w - d.
    pub fn mul(&self, u: RingElem, v: RingElem) -> RingElem {
        let p = self.p;
        let ac = u.a * v.a % p;
        let be = u.b * v.b % p;
        let cross = (u.a * v.b + u.b * v.a) % p;
        RingElem {
            a: (ac + p - be * self.d_mod_p % p) % p,
            b: (cross + p - be) % p,
        }
    }

    /// Complex conjugation: w-bar = -1 - w, so conj(a+bw) = (a-b) - bw.
    pub fn conj(&self, u: RingElem) -> RingElem {
        let p = self.p;
        RingElem {
            a: (u.a + p - u.b) % p,
            b: (p - u.b) % p,
        }
    }

    /// Class of `x - y*w` in R, canonical.
    pub fn reduce(&self, x: i64, y: i64) -> RingElem {
        let p = self.p as i64;
        RingElem {
            a: x.rem_euclid(p) as u64,
            b: (-y).rem_euclid(p) as u64,
        }
    }

    /// All p^2 ring elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        let p = self.p;
        (0..(p * p) as usize).map(move |i| RingElem::from_index(i, p))
    }
}

impl Level {
    /// Validates admissibility and computes the derived data.
    pub fn make(p: u64, ell: u64) -> Result<Level> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotAdmissible(format!("p = {p} is not an odd prime")));
        }
        Level::check_ell(p, ell)?;
        if !is_square_free(ell) {
            return Err(Error::NotAdmissible(format!("ell = {ell} is not square-free")));
        }
        if ell % p == 0 {
            return Err(Error::NotAdmissible(format!("p = {p} divides ell = {ell}")));
        }
        let split = match legendre((p - ell % p) % p, p) {
            1 => Split::Split,
            -1 => Split::Inert,
            _ => unreachable!("p does not divide ell"),
        };
        Ok(Level {
            ell,
            d: (ell + 1) / 4,
            p,
            split,
        })
    }

    /// Level parameters for theta computations only: requires `ell = 3 mod 4`
    /// (so that d is an integer) but skips square-freeness and the p-coprimality
    /// check. Needed to evaluate coset thetas at pairs like (p, ell) = (7, 7).
    pub fn theta_only(p: u64, ell: u64) -> Result<Level> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotAdmissible(format!("p = {p} is not an odd prime")));
        }
        Level::check_ell(p, ell)?;
        let split = if ell % p == 0 {
            Split::Ramified
        } else {
            match legendre((p - ell % p) % p, p) {
                1 => Split::Split,
                _ => Split::Inert,
            }
        };
        Ok(Level {
            ell,
            d: (ell + 1) / 4,
            p,
            split,
        })
    }

    fn check_ell(_p: u64, ell: u64) -> Result<()> {
        if ell == 0 || ell % 4 != 3 {
            return Err(Error::NotAdmissible(format!(
                "ell = {ell} is not a positive integer congruent to 3 mod 4"
            )));
        }
        Ok(())
    }

    pub fn ring(&self) -> RingCtx {
        RingCtx {
            p: self.p,
            d_mod_p: self.d % self.p,
            split: self.split,
        }
    }

    /// The principal norm form Q_d(x, y) = x^2 + xy + d*y^2 = |x - y*w|^2.
    pub fn norm_form(&self, x: i64, y: i64) -> u64 {
        let (x, y, d) = (x as i128, y as i128, self.d as i128);
        let q = x * x + x * y + d * y * y;
        debug_assert!(q >= 0);
        q as u64
    }
}

/// Ascending list of all admissible levels `ell <= bound` for `p`.
pub fn admissible_levels(p: u64, bound: u64) -> Vec<u64> {
    (3..=bound)
        .filter(|&ell| Level::make(p, ell).is_ok())
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol (a | p) for an odd prime p.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let r = pow_mod(a, (p - 1) / 2, p);
    if r == 1 {
        1
    } else {
        -1
    }
}
