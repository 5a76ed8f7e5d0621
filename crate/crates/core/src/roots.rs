//! Exact real-root counting and root-order comparison via Sturm sequences
//! over rational arithmetic. No floating point: every count and every
//! inequality between roots is decided, not approximated.

use crate::poly::IntPoly;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootsError {
    #[error("the zero polynomial has no well-defined root count")]
    ZeroPolynomial,
    #[error("polynomial is not real-rooted")]
    NotRealRooted,
    #[error("leading coefficient must be positive")]
    NonPositiveLeading,
    #[error("degree gap must be 0 or 1, got deg f = {0}, deg g = {1}")]
    BadDegreeGap(usize, usize),
}

/// Polynomial over the rationals, coefficients indexed by degree, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
struct RatPoly {
    c: Vec<BigRational>,
}

impl RatPoly {
    fn new(mut c: Vec<BigRational>) -> RatPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly { c }
    }

    fn from_int(p: &IntPoly) -> RatPoly {
        RatPoly::new(
            p.coeffs()
                .iter()
                .map(|&a| BigRational::from_integer(BigInt::from(a)))
                .collect(),
        )
    }

    fn zero() -> RatPoly {
        RatPoly { c: vec![] }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lc(&self) -> &BigRational {
        self.c.last().expect("nonzero polynomial")
    }

    fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    fn neg(&self) -> RatPoly {
        RatPoly {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    /// Remainder of self divided by d.
    fn rem(&self, d: &RatPoly) -> RatPoly {
        assert!(!d.is_zero());
        let mut r = self.c.clone();
        while r.len() >= d.c.len() && !r.is_empty() {
            if r.last().unwrap().is_zero() {
                r.pop();
                continue;
            }
            let shift = r.len() - d.c.len();
            let q = r.last().unwrap() / d.lc();
            for (i, a) in d.c.iter().enumerate() {
                let t = &q * a;
                r[shift + i] -= t;
            }
            // leading term cancels exactly
            r.pop();
        }
        RatPoly::new(r)
    }

    /// Scale so the leading coefficient has absolute value 1, preserving
    /// sign.
    fn normalize_positive(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let s = self.lc().abs();
        RatPoly::new(self.c.iter().map(|a| a / &s).collect())
    }

    fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let s = self.lc().clone();
        RatPoly::new(self.c.iter().map(|a| a / &s).collect())
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self / gcd(self, self'): same distinct roots, all simple.
    fn squarefree_part(&self) -> RatPoly {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.div_exact(&g)
    }

    fn div_exact(&self, d: &RatPoly) -> RatPoly {
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); self.c.len() - d.c.len() + 1];
        while r.len() >= d.c.len() && !r.is_empty() {
            if r.last().unwrap().is_zero() {
                r.pop();
                continue;
            }
            let shift = r.len() - d.c.len();
            let coef = r.last().unwrap() / d.lc();
            q[shift] = coef.clone();
            for (i, a) in d.c.iter().enumerate() {
                let t = &coef * a;
                r[shift + i] -= t;
            }
            r.pop();
        }
        debug_assert!(RatPoly::new(r).is_zero(), "division was not exact");
        RatPoly::new(q)
    }

    /// An upper bound B so all real roots lie in (-B, B): Cauchy bound.
    fn root_bound(&self) -> BigRational {
        let lc = self.lc().abs();
        let mx = self
            .c
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        BigRational::one() + mx / lc
    }
}

/// Sturm chain of a squarefree polynomial.
struct Sturm {
    chain: Vec<RatPoly>,
}

impl Sturm {
    fn new(p: &RatPoly) -> Sturm {
        let mut chain = vec![p.normalize_positive()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d.normalize_positive());
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]).neg();
                if r.is_zero() {
                    break;
                }
                chain.push(r.normalize_positive());
            }
        }
        Sturm { chain }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn variations_at_neg_inf(&self) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| {
                let s = if p.lc().is_positive() { 1i8 } else { -1 };
                if p.degree() % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn variations_at_pos_inf(&self) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| if p.lc().is_positive() { 1i8 } else { -1 })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in the half-open interval (a, b]; requires
    /// p(a) != 0 and p(b) != 0.
    fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    fn count_all(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
}

/// An isolated real root of a squarefree polynomial: the half-open interval
/// `(lo, hi]` contains exactly this one root of `poly`.
#[derive(Clone, Debug)]
struct IsolatedRoot {
    poly: RatPoly,
    lo: BigRational,
    hi: BigRational,
}

impl IsolatedRoot {
    /// Shrink the interval, keeping the root inside and the endpoints off
    /// the roots of `poly`.
    fn refine(&mut self, sturm: &Sturm) {
        let two = BigRational::from_integer(BigInt::from(2));
        let mid = (&self.lo + &self.hi) / &two;
        if self.poly.eval(&mid).is_zero() {
            // the unique root in the interval is exactly mid; shrink to a
            // quarter-width window around it with interior (non-root)
            // endpoints
            let w = (&self.hi - &self.lo) / BigRational::from_integer(BigInt::from(8));
            self.lo = &mid - &w;
            self.hi = &mid + &w;
            return;
        }
        if sturm.count_in(&self.lo, &mid) == 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }
}

/// Isolate all distinct real roots of a squarefree polynomial into disjoint
/// intervals, sorted in increasing root order.
fn isolate_roots(p: &RatPoly) -> Vec<IsolatedRoot> {
    if p.degree() == 0 {
        return vec![];
    }
    let sturm = Sturm::new(p);
    let bound = p.root_bound();
    let mut out = vec![];
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let count = sturm.count_in(&lo, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(IsolatedRoot {
                poly: p.clone(),
                lo,
                hi,
            });
            continue;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let mut mid = (&lo + &hi) / &two;
        let mut offset = (&hi - &lo) / BigRational::from_integer(BigInt::from(4));
        while p.eval(&mid).is_zero() {
            mid += &offset;
            offset /= &two;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Exact comparison of two isolated roots, possibly of different
/// polynomials. Equality is decided through the gcd.
fn compare_roots(a: &mut IsolatedRoot, b: &mut IsolatedRoot) -> Ordering {
    let sturm_a = Sturm::new(&a.poly);
    let sturm_b = Sturm::new(&b.poly);
    let g = a.poly.gcd(&b.poly);
    let sturm_g = if g.degree() >= 1 {
        Some(Sturm::new(&g))
    } else {
        None
    };
    loop {
        if a.hi <= b.lo {
            return Ordering::Less;
        }
        if b.hi <= a.lo {
            return Ordering::Greater;
        }
        // overlapping: maybe the same algebraic number
        if let Some(sg) = &sturm_g {
            let lo = if a.lo >= b.lo { &a.lo } else { &b.lo };
            let hi = if a.hi <= b.hi { &a.hi } else { &b.hi };
            if lo < hi && sg.count_in(lo, hi) == 1 {
                // the shared root lies in both isolating intervals, so it is
                // both roots at once
                return Ordering::Equal;
            }
        }
        a.refine(&sturm_a);
        b.refine(&sturm_b);
    }
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &IntPoly) -> Result<usize, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let rp = RatPoly::from_int(p);
    if rp.degree() == 0 {
        return Ok(0);
    }
    Ok(Sturm::new(&rp.squarefree_part()).count_all())
}

/// True when every complex root of `p` is real, i.e. real-root
/// multiplicities sum to the degree; equivalently the squarefree part has as
/// many distinct real roots as its degree.
pub fn is_real_rooted(p: &IntPoly) -> Result<bool, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let rp = RatPoly::from_int(p);
    if rp.degree() == 0 {
        return Ok(true);
    }
    let sf = rp.squarefree_part();
    Ok(Sturm::new(&sf).count_all() == sf.degree())
}

/// Multiplicity of the isolated root within the original polynomial, via the
/// chain p, gcd(p, p'), gcd of that with its derivative, and so on.
fn multiplicity(original: &RatPoly, root: &IsolatedRoot) -> usize {
    let mut q = original.clone();
    let mut m = 0;
    loop {
        if q.degree() == 0 {
            break;
        }
        let sf = q.squarefree_part();
        let present = if sf.degree() >= 1 {
            Sturm::new(&sf).count_in(&root.lo, &root.hi) == 1
        } else {
            false
        };
        if !present {
            break;
        }
        m += 1;
        q = q.gcd(&q.derivative());
    }
    m
}

/// All real roots of a real-rooted polynomial, sorted, repeated according to
/// multiplicity. Indices into the returned isolation data.
fn roots_with_multiplicity(p: &RatPoly) -> Vec<IsolatedRoot> {
    let sf = p.squarefree_part();
    let distinct = isolate_roots(&sf);
    let mut out = vec![];
    for r in distinct {
        let m = multiplicity(p, &r);
        for _ in 0..m {
            out.push(r.clone());
        }
    }
    out
}

/// Decide `f` interleaves `g`: interlacing when `deg g = deg f + 1`
/// (`g_1 <= f_1 <= g_2 <= ... <= f_(d-1) <= g_d`), alternating left when the
/// degrees agree (`f_1 <= g_1 <= f_2 <= ... <= f_d <= g_d`). Inequalities
/// are non-strict, so shared roots pass. Both inputs must be real-rooted
/// with positive leading coefficients.
pub fn interleaves(f: &IntPoly, g: &IntPoly) -> Result<bool, RootsError> {
    if f.is_zero() || g.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
    if f.coeffs()[df] <= 0 || g.coeffs()[dg] <= 0 {
        return Err(RootsError::NonPositiveLeading);
    }
    if dg < df || dg - df > 1 {
        return Err(RootsError::BadDegreeGap(df, dg));
    }
    if !is_real_rooted(f)? || !is_real_rooted(g)? {
        return Err(RootsError::NotRealRooted);
    }
    let rf = RatPoly::from_int(f);
    let rg = RatPoly::from_int(g);
    let mut froots = roots_with_multiplicity(&rf);
    let mut groots = roots_with_multiplicity(&rg);
    debug_assert_eq!(froots.len(), df);
    debug_assert_eq!(groots.len(), dg);
    let le = |a: &mut IsolatedRoot, b: &mut IsolatedRoot| compare_roots(a, b) != Ordering::Greater;
    if dg == df + 1 {
        // g_i <= f_i <= g_(i+1), 1-based i up to deg f
        for i in 0..df {
            if !le(&mut groots[i], &mut froots[i]) {
                return Ok(false);
            }
            if !le(&mut froots[i], &mut groots[i + 1]) {
                return Ok(false);
            }
        }
        Ok(true)
    } else {
        // f_i <= g_i and g_i <= f_(i+1)
        for i in 0..df {
            if !le(&mut froots[i], &mut groots[i]) {
                return Ok(false);
            }
            if i + 1 < df && !le(&mut groots[i], &mut froots[i + 1]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::new(c.to_vec())
    }

    #[test]
    fn count_examples() {
        // x^2 + 1: none
        assert_eq!(count_real_roots(&p(&[1, 0, 1])).unwrap(), 0);
        // 1 + 4x + x^2: two
        assert_eq!(count_real_roots(&p(&[1, 4, 1])).unwrap(), 2);
        // (x-1)(x-2)(x-3) = -6 + 11x - 6x^2 + x^3
        assert_eq!(count_real_roots(&p(&[-6, 11, -6, 1])).unwrap(), 3);
        // zero polynomial rejected
        assert_eq!(
            count_real_roots(&IntPoly::zero()),
            Err(RootsError::ZeroPolynomial)
        );
        // constants have no roots
        assert_eq!(count_real_roots(&p(&[5])).unwrap(), 0);
    }

    #[test]
    fn count_is_of_distinct_roots() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let q = p(&[2, -3, 0, 1]);
        assert_eq!(count_real_roots(&q).unwrap(), 2);
        assert!(is_real_rooted(&q).unwrap());
    }

    #[test]
    fn real_rootedness() {
        assert!(is_real_rooted(&p(&[-1, 0, 1])).unwrap()); // x^2 - 1
        assert!(!is_real_rooted(&p(&[1, 0, 1])).unwrap()); // x^2 + 1
        assert!(!is_real_rooted(&p(&[1, 1, 1, 1])).unwrap()); // (x+1)(x^2+1)
        assert!(is_real_rooted(&p(&[7])).unwrap()); // constants vacuously
                                                    // products of linear factors have full counts
        let q = &(&p(&[1, 1]) * &p(&[2, 1])) * &p(&[-5, 1]);
        assert_eq!(count_real_roots(&q).unwrap(), 3);
        assert!(is_real_rooted(&q).unwrap());
    }

    #[test]
    fn count_agrees_with_grid_sign_changes() {
        // internal consistency on a batch of real-rooted products
        let polys = [
            p(&[-6, 11, -6, 1]),
            p(&[0, -1, 0, 1]), // x(x-1)(x+1)
            p(&[1, 4, 1]),
            p(&[2, -3, 0, 1]),
        ];
        for q in polys {
            let bound = 1 + q.coeffs().iter().map(|c| c.abs()).max().unwrap();
            let mut signs = vec![];
            let mut x = -bound * 2;
            while x <= bound * 2 {
                let v = q.eval(x);
                if v != 0 {
                    signs.push(v.signum());
                }
                x += 1;
            }
            let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
            assert!(count_real_roots(&q).unwrap() >= changes);
        }
    }

    #[test]
    fn interlacing_examples() {
        // equal degrees: alternating left wants f's roots weakly before g's;
        // roots -2 <= -1 put x+2 left of x+1 and not conversely
        assert!(interleaves(&p(&[2, 1]), &p(&[1, 1])).unwrap());
        assert!(!interleaves(&p(&[1, 1]), &p(&[2, 1])).unwrap());
        // f = x+2, g = (x+1)(x+3): interlaces (-3 <= -2 <= -1)
        assert!(interleaves(&p(&[2, 1]), &p(&[3, 4, 1])).unwrap());
        // failure: f = x+3 does not interlace (x+1)(x+2)
        assert!(!interleaves(&p(&[3, 1]), &p(&[2, 3, 1])).unwrap());
        // shared roots pass under the non-strict reading
        assert!(interleaves(&p(&[1, 1]), &p(&[1, 2, 1])).unwrap());
        assert!(interleaves(&p(&[2, 3, 1]), &p(&[2, 3, 1])).unwrap());
    }

    #[test]
    fn interlacing_rejections() {
        assert_eq!(
            interleaves(&p(&[1, 1]), &p(&[0, 0, 0, 1])),
            Err(RootsError::BadDegreeGap(1, 3))
        );
        assert_eq!(
            interleaves(&p(&[1, 0, 1]), &p(&[1, 0, 0, 1])),
            Err(RootsError::NotRealRooted)
        );
        assert_eq!(
            interleaves(&p(&[1, -1]), &p(&[1, 1])),
            Err(RootsError::NonPositiveLeading)
        );
    }

    #[test]
    fn narayana_interlacing_small() {
        for n in 2..=6 {
            let f = crate::poly::narayana(n - 1);
            let g = crate::poly::narayana(n);
            assert!(is_real_rooted(&g).unwrap(), "n={n}");
            assert!(interleaves(&f, &g).unwrap(), "n={n}");
        }
    }

    #[test]
    fn narayana_real_rooted_to_ten() {
        for n in 1..=10 {
            assert!(is_real_rooted(&crate::poly::narayana(n)).unwrap(), "n={n}");
        }
    }
}
