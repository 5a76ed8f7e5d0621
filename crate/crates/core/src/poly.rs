//! Exact integer polynomials, face vectors, and the f/h/gamma transforms.
//!
//! Everything here is integer arithmetic with overflow checks; no floating
//! point enters any verification path. Real-root counting lives in
//! [`crate::roots`].

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("h-vector is not symmetric (h[{0}] != h[{1}]), Dehn-Sommerville fails")]
    AsymmetricH(usize, usize),
    #[error("tubing of {size} tubes exceeds polytope dimension {dim}")]
    TubingTooLarge { size: usize, dim: usize },
    #[error("expected exactly one empty tubing, found {0}")]
    BadTopFace(usize),
}

/// Integer polynomial with coefficients indexed by degree.
///
/// Trailing zero coefficients are trimmed; the zero polynomial has an empty
/// coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

fn checked(v: i128) -> i64 {
    i64::try_from(v).expect("polynomial coefficient overflow")
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> IntPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> IntPoly {
        IntPoly { coeffs: vec![1] }
    }

    /// The monomial `t`.
    pub fn x() -> IntPoly {
        IntPoly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: i64) -> IntPoly {
        IntPoly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn scale(&self, c: i64) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&a| checked(a as i128 * c as i128))
                .collect(),
        )
    }

    /// Multiply by the monomial `t^k`.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.coeffs);
        IntPoly { coeffs: c }
    }

    /// Exact expansion of `p(t + a)`.
    pub fn shift_eval(&self, a: i64) -> IntPoly {
        // Horner in the ring: result = (...(c_d (t+a) + c_{d-1})(t+a) + ...)
        let linear = IntPoly::new(vec![a, 1]);
        let mut result = IntPoly::zero();
        for &c in self.coeffs.iter().rev() {
            result = &(&result * &linear) + &IntPoly::constant(c);
        }
        result
    }

    pub fn eval(&self, x: i64) -> i64 {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x as i128)
                .and_then(|v| v.checked_add(c as i128))
                .expect("polynomial evaluation overflow");
        }
        checked(acc)
    }

    /// Sum of all coefficients, i.e. `p(1)`.
    pub fn coeff_sum(&self) -> i64 {
        self.eval(1)
    }

    /// `(1 + t)^k` as an integer polynomial.
    pub fn one_plus_t_pow(k: usize) -> IntPoly {
        let mut p = IntPoly::one();
        let lin = IntPoly::new(vec![1, 1]);
        for _ in 0..k {
            p = &p * &lin;
        }
        p
    }

    /// True when the coefficients read the same forwards and backwards over
    /// degrees `0..=d`.
    pub fn is_symmetric(&self, d: usize) -> bool {
        (0..=d).all(|i| self.coeff(i) == self.coeff(d - i))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(
            (0..len)
                .map(|i| checked(self.coeff(i) as i128 + rhs.coeff(i) as i128))
                .collect(),
        )
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(
            (0..len)
                .map(|i| checked(self.coeff(i) as i128 - rhs.coeff(i) as i128))
                .collect(),
        )
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut acc = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a as i128 * b as i128;
            }
        }
        IntPoly::new(acc.into_iter().map(checked).collect())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Face counts of a polytope: `counts[i]` = number of `i`-dimensional faces.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FaceVector {
    pub counts: Vec<i64>,
    pub dim: usize,
}

impl FaceVector {
    pub fn as_poly(&self) -> IntPoly {
        IntPoly::new(self.counts.clone())
    }
}

/// Build the face vector of a simple polytope of dimension `dim` from the
/// sizes of its tubings: a tubing with `t` tubes is a face of dimension
/// `dim - t`.
pub fn f_from_tubings(tubing_sizes: &[usize], dim: usize) -> Result<FaceVector, PolyError> {
    let mut counts = vec![0i64; dim + 1];
    for &t in tubing_sizes {
        if t > dim {
            return Err(PolyError::TubingTooLarge { size: t, dim });
        }
        counts[dim - t] += 1;
    }
    if counts[dim] != 1 {
        return Err(PolyError::BadTopFace(counts[dim] as usize));
    }
    Ok(FaceVector { counts, dim })
}

/// Result of the f -> h transform. `negative` flags non-polytopal input where
/// some h-entry came out negative; that signals an enumeration bug upstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HFromF {
    pub h: IntPoly,
    pub negative: bool,
}

/// The h-polynomial via `f(t) = h(t+1)`, i.e. `h(t) = f(t-1)`, expanded
/// exactly.
pub fn h_from_f(f: &FaceVector) -> HFromF {
    let h = f.as_poly().shift_eval(-1);
    let negative = h.coeffs().iter().any(|&c| c < 0);
    HFromF { h, negative }
}

/// Unique expansion of a symmetric `h` of degree at most `d` as
/// `sum_i gamma_i t^i (1+t)^(d-2i)`; rejects asymmetric input.
pub fn gamma_from_h(h: &IntPoly, d: usize) -> Result<IntPoly, PolyError> {
    for i in 0..=d {
        if h.coeff(i) != h.coeff(d - i) {
            return Err(PolyError::AsymmetricH(i, d - i));
        }
    }
    let mut work = h.clone();
    let mut gamma = vec![0i64; d / 2 + 1];
    for (i, g) in gamma.iter_mut().enumerate() {
        *g = work.coeff(i);
        let term = IntPoly::one_plus_t_pow(d - 2 * i).shift_up(i).scale(*g);
        work = &work - &term;
    }
    debug_assert!(work.is_zero(), "gamma expansion left a nonzero remainder");
    Ok(IntPoly::new(gamma))
}

/// Re-expand a gamma vector through `sum_i gamma_i t^i (1+t)^(d-2i)`.
pub fn h_from_gamma(gamma: &IntPoly, d: usize) -> IntPoly {
    let mut h = IntPoly::zero();
    for i in 0..=d / 2 {
        let term = IntPoly::one_plus_t_pow(d - 2 * i)
            .shift_up(i)
            .scale(gamma.coeff(i));
        h = &h + &term;
    }
    h
}

pub(crate) fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Descent generating polynomial of the stack-sorting preimages of the
/// identity permutation of size `n` (the Narayana polynomial), computed by
/// enumerating the preimages.
pub fn narayana(n: usize) -> IntPoly {
    assert!(n >= 1, "narayana is defined for n >= 1");
    let mut counts = vec![0i64; n];
    crate::stacksort::preimage_each(&crate::stacksort::Permutation::identity(n), |w| {
        counts[w.descents()] += 1;
    });
    IntPoly::new(counts)
}

/// Type-B Narayana polynomial: coefficients `binom(k-1, i)^2`.
pub fn type_b_narayana(k: usize) -> IntPoly {
    assert!(k >= 1, "type_b_narayana is defined for k >= 1");
    IntPoly::new(
        (0..k)
            .map(|i| i64::try_from(binom(k as u64 - 1, i as u64).pow(2)).expect("overflow"))
            .collect(),
    )
}

/// Exact test of `H_n = 2 N_(n+2) - (1+x) N_(n+1)` against a supplied `H_n`.
pub fn check_h_recurrence(n: usize, h_n: &IntPoly) -> bool {
    *h_n == h_recurrence_rhs(n)
}

/// The right-hand side `2 N_(n+2) - (1+x) N_(n+1)` of the recurrence.
pub fn h_recurrence_rhs(n: usize) -> IntPoly {
    let two_n2 = narayana(n + 2).scale(2);
    let lin = IntPoly::new(vec![1, 1]);
    &two_n2 - &(&lin * &narayana(n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::new(c.to_vec())
    }

    #[test]
    fn arithmetic_basics() {
        // (1+t)(1+t) = 1 + 2t + t^2
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1]), p(&[1, 2, 1]));
        // add with zero is the identity
        let q = p(&[3, 0, -2]);
        assert_eq!(&q + &IntPoly::zero(), q);
        // t^2 shifted by -1: t^2 - 2t + 1
        assert_eq!(p(&[0, 0, 1]).shift_eval(-1), p(&[1, -2, 1]));
    }

    #[test]
    fn shift_eval_composes() {
        let q = p(&[2, -1, 5, 3]);
        assert_eq!(q.shift_eval(2).shift_eval(-2), q);
        assert_eq!(q.shift_eval(0), q);
    }

    #[test]
    fn face_vector_from_tubing_sizes() {
        // segment: two vertices, one edge
        let f = f_from_tubings(&[0, 1, 1], 1).unwrap();
        assert_eq!(f.counts, vec![2, 1]);
        assert_eq!(h_from_f(&f).h, p(&[1, 1]));

        // hexagon
        let sizes: Vec<usize> = std::iter::once(0)
            .chain(std::iter::repeat_n(1, 6))
            .chain(std::iter::repeat_n(2, 6))
            .collect();
        let f = f_from_tubings(&sizes, 2).unwrap();
        assert_eq!(f.counts, vec![6, 6, 1]);
        assert_eq!(h_from_f(&f).h, p(&[1, 4, 1]));

        // a point
        let f = f_from_tubings(&[0], 0).unwrap();
        assert_eq!(f.counts, vec![1]);
        assert_eq!(h_from_f(&f).h, p(&[1]));
    }

    #[test]
    fn face_vector_rejects_oversized_tubing() {
        assert_eq!(
            f_from_tubings(&[0, 3], 2),
            Err(PolyError::TubingTooLarge { size: 3, dim: 2 })
        );
    }

    #[test]
    fn h_roundtrip_through_f() {
        let f = FaceVector {
            counts: vec![6, 6, 1],
            dim: 2,
        };
        let h = h_from_f(&f).h;
        // reconstruct f(t) = h(t+1)
        assert_eq!(h.shift_eval(1), f.as_poly());
    }

    #[test]
    fn gamma_hexagon() {
        assert_eq!(gamma_from_h(&p(&[1, 4, 1]), 2).unwrap(), p(&[1, 2]));
        assert_eq!(gamma_from_h(&p(&[1, 1]), 1).unwrap(), p(&[1]));
        assert_eq!(
            gamma_from_h(&p(&[1, 2]), 1),
            Err(PolyError::AsymmetricH(0, 1))
        );
    }

    #[test]
    fn gamma_reexpansion_is_identity() {
        for (h, d) in [
            (p(&[1, 4, 1]), 2),
            (p(&[1, 3, 1]), 2),
            (p(&[1, 8, 8, 1]), 3),
            (p(&[1, 11, 11, 1]), 3),
            (p(&[2, 5, 5, 2]), 3),
        ] {
            let g = gamma_from_h(&h, d).unwrap();
            assert_eq!(h_from_gamma(&g, d), h);
        }
    }

    #[test]
    fn narayana_small() {
        assert_eq!(narayana(1), p(&[1]));
        assert_eq!(narayana(2), p(&[1, 1]));
        assert_eq!(narayana(3), p(&[1, 3, 1]));
        assert_eq!(narayana(4), p(&[1, 6, 6, 1]));
    }

    #[test]
    fn narayana_closed_form_oracle() {
        // N(n, i) = binom(n,i) * binom(n,i+1) / n, frozen closed form.
        for n in 1..=8u64 {
            let got = narayana(n as usize);
            for i in 0..n {
                let expect = binom(n, i) * binom(n, i + 1) / n as u128;
                assert_eq!(got.coeff(i as usize) as u128, expect, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn narayana_coefficients_sum_to_catalan() {
        for n in 1..=9 {
            assert_eq!(
                narayana(n).coeff_sum() as u64,
                crate::dyck::catalan(n as u64)
            );
        }
    }

    #[test]
    fn type_b_small() {
        assert_eq!(type_b_narayana(1), p(&[1]));
        assert_eq!(type_b_narayana(2), p(&[1, 1]));
        assert_eq!(type_b_narayana(3), p(&[1, 4, 1]));
        // coefficient sum of B_{n+1} is the central binomial
        for n in 0..=8u64 {
            assert_eq!(
                type_b_narayana(n as usize + 1).coeff_sum() as u128,
                binom(2 * n, n)
            );
        }
    }

    #[test]
    fn recurrence_base_case() {
        // H_1 = 1 + 4x + x^2 and 2 N_3 - (1+x) N_2 expand to the same thing
        assert!(check_h_recurrence(1, &p(&[1, 4, 1])));
        // corrupted H fails
        assert!(!check_h_recurrence(1, &p(&[1, 5, 1])));
    }
}
