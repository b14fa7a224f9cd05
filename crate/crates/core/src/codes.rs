//! Linear codes over R = O_K/pO_K: codeword enumeration, counting vectors,
//! complete and symmetric weight enumerators, and Hermitian duality.
//!
//! Codewords are materialized eagerly. The span is built by closing linear
//! combinations over all ring scalars rather than by row reduction, since R
//! has zero divisors in the split case.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coset_theta::orbit_representatives;
use crate::qseries::ScaledSeries;
use crate::quadring::{Level, RingCtx, RingElem};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LinearCode {
    ring: RingCtx,
    length: usize,
    generators: Vec<Vec<RingElem>>,
    codewords: Vec<Vec<RingElem>>,
}

impl LinearCode {
    /// Smallest R-submodule of R^n containing the generators, materialized.
    pub fn span(ring: RingCtx, generators: Vec<Vec<RingElem>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidCode("no generators given".into()));
        }
        let length = generators[0].len();
        if length == 0 || generators.iter().any(|g| g.len() != length) {
            return Err(Error::InvalidCode(
                "generators must be non-empty vectors of equal length".into(),
            ));
        }
        let scalars: Vec<RingElem> = ring.elements().collect();
        let mut words: BTreeSet<Vec<RingElem>> = BTreeSet::new();
        words.insert(vec![RingElem::ZERO; length]);
        for g in &generators {
            let mut next = BTreeSet::new();
            for w in &words {
                for &r in &scalars {
                    let combo: Vec<RingElem> = w
                        .iter()
                        .zip(g.iter())
                        .map(|(&wi, &gi)| ring.add(wi, ring.mul(r, gi)))
                        .collect();
                    next.insert(combo);
                }
            }
            words = next;
        }
        Ok(LinearCode {
            ring,
            length,
            generators,
            codewords: words.into_iter().collect(),
        })
    }

    pub fn ring(&self) -> RingCtx {
        self.ring
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn generators(&self) -> &[Vec<RingElem>] {
        &self.generators
    }

    /// Codewords in sorted order.
    pub fn codewords(&self) -> &[Vec<RingElem>] {
        &self.codewords
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn contains(&self, word: &[RingElem]) -> bool {
        self.codewords.binary_search_by(|w| w.as_slice().cmp(word)).is_ok()
    }

    /// Complete weight enumerator: one degree-n monomial per codeword, with
    /// the exponent of variable `i` counting positions holding `r_{i+1}`.
    pub fn cwe(&self) -> WeightEnumerator {
        let num_vars = (self.ring.p * self.ring.p) as usize;
        let mut terms: BTreeMap<Vec<u64>, BigInt> = BTreeMap::new();
        for word in &self.codewords {
            let exps = counting_vector(self.ring.p, word);
            *terms.entry(exps).or_default() += BigInt::one();
        }
        WeightEnumerator {
            num_vars,
            degree: self.length,
            terms,
        }
    }

    /// Symmetric weight enumerator: the cwe with each variable replaced by
    /// the variable of its Klein orbit class, classes ordered as in
    /// [`orbit_representatives`].
    pub fn swe(&self) -> WeightEnumerator {
        let p = self.ring.p;
        let classes = orbit_representatives(p);
        let mut class_of = vec![0usize; (p * p) as usize];
        for (pos, class) in classes.iter().enumerate() {
            for &(a, b) in &class.members {
                class_of[(a + p * b) as usize] = pos;
            }
        }
        let mut terms: BTreeMap<Vec<u64>, BigInt> = BTreeMap::new();
        for word in &self.codewords {
            let mut exps = vec![0u64; classes.len()];
            for &u in word {
                exps[class_of[u.index(p)]] += 1;
            }
            *terms.entry(exps).or_default() += BigInt::one();
        }
        WeightEnumerator {
            num_vars: classes.len(),
            degree: self.length,
            terms,
        }
    }

    /// Hermitian dual: all vectors of R^n orthogonal to every codeword under
    /// `u . conj(v)`. Enumerates all p^{2n} vectors; intended for small n.
    pub fn dual(&self) -> LinearCode {
        let ring = self.ring;
        let p2 = (ring.p * ring.p) as usize;
        let total = p2.pow(self.length as u32);
        let mut words: Vec<Vec<RingElem>> = Vec::new();
        for mut idx in 0..total {
            let mut cand = Vec::with_capacity(self.length);
            for _ in 0..self.length {
                cand.push(RingElem::from_index(idx % p2, ring.p));
                idx /= p2;
            }
            if self
                .codewords
                .iter()
                .all(|w| hermitian_inner(&ring, &cand, w) == RingElem::ZERO)
            {
                words.push(cand);
            }
        }
        words.sort_unstable();
        LinearCode {
            ring,
            length: self.length,
            generators: words.clone(),
            codewords: words,
        }
    }

    pub fn is_self_dual(&self) -> bool {
        self.codewords == self.dual().codewords
    }
}

/// Entry `i` counts positions of `u` holding the ring element `r_{i+1}`;
/// entries sum to the length of `u`.
pub fn counting_vector(p: u64, u: &[RingElem]) -> Vec<u64> {
    let mut counts = vec![0u64; (p * p) as usize];
    for elem in u {
        counts[elem.index(p)] += 1;
    }
    counts
}

/// `sum_i u_i * conj(v_i)`.
pub fn hermitian_inner(ring: &RingCtx, u: &[RingElem], v: &[RingElem]) -> RingElem {
    assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v.iter())
        .fold(RingElem::ZERO, |acc, (&ui, &vi)| {
            ring.add(acc, ring.mul(ui, ring.conj(vi)))
        })
}

/// Sparse homogeneous multivariate polynomial with big-integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    num_vars: usize,
    degree: usize,
    terms: BTreeMap<Vec<u64>, BigInt>,
}

impl WeightEnumerator {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Sum of all coefficients (the number of codewords for a cwe).
    pub fn coefficient_mass(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Evaluates the polynomial at the given series, one per variable.
    pub fn evaluate(&self, vars: &[ScaledSeries], precision: u64) -> ScaledSeries {
        assert_eq!(vars.len(), self.num_vars);
        // Power cache per variable, up to the largest exponent used.
        let mut powers: Vec<Vec<ScaledSeries>> = vars
            .iter()
            .map(|v| vec![ScaledSeries::one(precision), v.clone()])
            .collect();
        let mut acc = ScaledSeries::zero(1, precision);
        for (exps, coeff) in &self.terms {
            let mut monomial = ScaledSeries::one(precision);
            for (vi, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[vi].len() <= e as usize {
                    let next = powers[vi].last().unwrap().mul(&vars[vi]);
                    powers[vi].push(next);
                }
                monomial = monomial.mul(&powers[vi][e as usize]);
            }
            acc = acc.add(&monomial.scale_coeffs(coeff));
        }
        acc
    }

    /// `{"degree": n, "terms": [[exponent_vector, coeff_string], ...]}`,
    /// sorted lexicographically by exponent vector.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "degree": self.degree,
            "terms": self
                .terms
                .iter()
                .map(|(e, c)| json!([e, c.to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// On-disk description of a code:
/// `{"p": 3, "ell": 7, "length": 2, "generators": [[[a, b], ...], ...]}`
/// where each component `[a, b]` means `a + b*w`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub p: u64,
    pub ell: u64,
    pub length: usize,
    pub generators: Vec<Vec<[u64; 2]>>,
}

impl CodeFile {
    pub fn build(&self) -> Result<(Level, LinearCode)> {
        let level = Level::make(self.p, self.ell)?;
        let ring = level.ring();
        let generators: Vec<Vec<RingElem>> = self
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&[a, b]| RingElem {
                        a: a % self.p,
                        b: b % self.p,
                    })
                    .collect()
            })
            .collect();
        if generators.iter().any(|g| g.len() != self.length) {
            return Err(Error::InvalidCode(format!(
                "generator length does not match declared length {}",
                self.length
            )));
        }
        let code = LinearCode::span(ring, generators)?;
        Ok((level, code))
    }
}

/// The length-n repetition code {(x, ..., x) : x in R}.
pub fn repetition_code(ring: RingCtx, n: usize) -> LinearCode {
    LinearCode::span(ring, vec![vec![RingElem { a: 1, b: 0 }; n]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_theta::coset_theta_table;

    fn ring(p: u64, ell: u64) -> RingCtx {
        Level::make(p, ell).unwrap().ring()
    }

    #[test]
    fn repetition_code_has_nine_words() {
        let c = repetition_code(ring(3, 7), 2);
        assert_eq!(c.size(), 9);
        for w in c.codewords() {
            assert_eq!(w[0], w[1]);
        }
    }

    #[test]
    fn trivial_code_is_single_word() {
        let c = LinearCode::span(ring(3, 7), vec![vec![RingElem::ZERO; 3]]).unwrap();
        assert_eq!(c.size(), 1);
        assert!(c.contains(&vec![RingElem::ZERO; 3]));
    }

    #[test]
    fn zero_divisor_generator_in_split_ring() {
        // p=3, ell=11: d = 3 = 0 mod 3, so w*(w+1) = 0 and w generates a
        // submodule of size 3 in R^2, not 9.
        let r = ring(3, 11);
        let w = RingElem { a: 0, b: 1 };
        let c = LinearCode::span(r, vec![vec![w, RingElem::ZERO]]).unwrap();
        assert_eq!(c.size(), 3);
    }

    #[test]
    fn counting_vector_examples() {
        let zero2 = vec![RingElem::ZERO; 2];
        assert_eq!(counting_vector(3, &zero2), vec![2, 0, 0, 0, 0, 0, 0, 0, 0]);

        let ones = vec![RingElem { a: 1, b: 0 }; 2];
        assert_eq!(counting_vector(3, &ones), vec![0, 2, 0, 0, 0, 0, 0, 0, 0]);

        // (1 - w, 2): 1 - w has coset coords (1,1) hence index 4; 2 has index 2.
        let r = ring(3, 7);
        let u = vec![r.reduce(1, 1), RingElem { a: 2, b: 0 }];
        assert_eq!(counting_vector(3, &u), vec![0, 0, 1, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn cwe_of_repetition_is_sum_of_squares() {
        let c = repetition_code(ring(3, 7), 2);
        let we = c.cwe();
        assert_eq!(we.num_vars(), 9);
        assert_eq!(we.terms().count(), 9);
        for i in 0..9 {
            let mut exps = vec![0u64; 9];
            exps[i] = 2;
            assert_eq!(we.coefficient(&exps), BigInt::one());
        }
        assert_eq!(we.coefficient_mass(), BigInt::from(9));
    }

    #[test]
    fn cwe_of_trivial_code() {
        let c = LinearCode::span(ring(3, 7), vec![vec![RingElem::ZERO; 4]]).unwrap();
        let we = c.cwe();
        let mut exps = vec![0u64; 9];
        exps[0] = 4;
        assert_eq!(we.coefficient(&exps), BigInt::one());
        assert_eq!(we.terms().count(), 1);
    }

    #[test]
    fn swe_of_repetition_matches_orbit_sizes() {
        // Classes in order (0,0), (1,0), (0,1), (1,1) have sizes 1, 2, 4, 2.
        let c = repetition_code(ring(3, 7), 2);
        let we = c.swe();
        assert_eq!(we.num_vars(), 4);
        let coeff = |i: usize| {
            let mut exps = vec![0u64; 4];
            exps[i] = 2;
            we.coefficient(&exps)
        };
        assert_eq!(coeff(0), BigInt::from(1));
        assert_eq!(coeff(1), BigInt::from(2));
        assert_eq!(coeff(2), BigInt::from(4));
        assert_eq!(coeff(3), BigInt::from(2));
    }

    #[test]
    fn swe_at_class_thetas_equals_cwe_at_coset_thetas() {
        let level = Level::make(3, 7).unwrap();
        let table = coset_theta_table(&level, 40).unwrap();
        let classes = orbit_representatives(3);
        let class_thetas: Vec<ScaledSeries> = classes
            .iter()
            .map(|c| table[(c.canonical.0 + 3 * c.canonical.1) as usize].clone())
            .collect();
        for gens in [
            vec![vec![RingElem { a: 1, b: 0 }, RingElem { a: 1, b: 0 }]],
            vec![vec![RingElem { a: 1, b: 2 }, RingElem { a: 0, b: 1 }]],
            vec![
                vec![RingElem { a: 1, b: 0 }, RingElem { a: 2, b: 1 }],
                vec![RingElem { a: 0, b: 0 }, RingElem { a: 1, b: 1 }],
            ],
        ] {
            let c = LinearCode::span(level.ring(), gens).unwrap();
            assert_eq!(
                c.swe().evaluate(&class_thetas, 40),
                c.cwe().evaluate(&table, 40)
            );
        }
    }

    #[test]
    fn hermitian_inner_examples() {
        let r = ring(3, 7);
        let zero = vec![RingElem::ZERO; 3];
        assert_eq!(hermitian_inner(&r, &zero, &zero), RingElem::ZERO);
        let ones = vec![RingElem { a: 1, b: 0 }; 2];
        assert_eq!(hermitian_inner(&r, &ones, &ones), RingElem { a: 2, b: 0 });
    }

    #[test]
    fn dual_of_trivial_code_is_everything() {
        let c = LinearCode::span(ring(3, 7), vec![vec![RingElem::ZERO; 2]]).unwrap();
        assert_eq!(c.dual().size(), 81);
    }

    #[test]
    fn duality_order_and_involution() {
        let r = ring(3, 7);
        for gens in [
            vec![vec![RingElem { a: 1, b: 0 }, RingElem { a: 1, b: 0 }]],
            vec![vec![RingElem { a: 1, b: 1 }, RingElem { a: 0, b: 2 }]],
            vec![vec![RingElem { a: 0, b: 1 }, RingElem { a: 2, b: 0 }]],
        ] {
            let c = LinearCode::span(r, gens).unwrap();
            let d = c.dual();
            assert_eq!(c.size() * d.size(), 81);
            assert_eq!(d.dual().codewords(), c.codewords());
        }
    }

    #[test]
    fn code_file_round_trip() {
        let f = CodeFile {
            p: 3,
            ell: 7,
            length: 2,
            generators: vec![vec![[1, 0], [1, 0]]],
        };
        let (level, code) = f.build().unwrap();
        assert_eq!(level.ell, 7);
        assert_eq!(code.size(), 9);
        let text = serde_json::to_string(&f).unwrap();
        let back: CodeFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap().1.size(), 9);
    }
}
