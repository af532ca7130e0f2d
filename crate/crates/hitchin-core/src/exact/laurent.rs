//! Sparse Laurent polynomials in one chart coordinate.
//!
//! `LaurentPoly` maps integer exponents to nonzero rational coefficients.
//! Canonical form: no explicit zeros are ever stored, so equality is
//! structural. Sections of line bundles, overlap cochains and transition
//! data are all values of this one type; the exponent window in use is a
//! property of the caller, not of the polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{is_zero, Rat};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, super::one())
    }

    /// `c * z^e`; the zero polynomial when `c` is zero.
    pub fn monomial(exp: i64, c: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !is_zero(&c) {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    /// Build from (exponent, coefficient) pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    /// Polynomial with integer coefficients `coeffs[i]` on `z^i`.
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_pairs(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64, super::rat(c))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(super::zero)
    }

    pub fn add_term(&mut self, exp: i64, c: Rat) {
        if is_zero(&c) {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(super::zero);
        *entry += c;
        if is_zero(entry) {
            self.coeffs.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// True when all exponents lie in `[lo, hi]`.
    pub fn exponents_within(&self, lo: i64, hi: i64) -> bool {
        self.coeffs.keys().all(|&e| lo <= e && e <= hi)
    }

    /// True for an honest polynomial (no negative exponents).
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    /// Degree as a polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.max_exp()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if is_zero(c) {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Substitute `z -> 1/z` and multiply by `z^d`: exponent `e` maps to `d - e`.
    ///
    /// This is the two-chart transition for sections of O(d) on the line.
    pub fn reverse(&self, d: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (d - e, v.clone())).collect(),
        }
    }

    /// The sub-polynomial of terms with exponents in `[lo, hi]`.
    pub fn slice(&self, lo: i64, hi: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .range(lo..=hi)
                .map(|(&e, v)| (e, v.clone()))
                .collect(),
        }
    }

    /// Terms with exponent `>= lo`.
    pub fn tail_from(&self, lo: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .range(lo..)
                .map(|(&e, v)| (e, v.clone()))
                .collect(),
        }
    }

    /// Terms with exponent `<= hi`.
    pub fn head_to(&self, hi: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .range(..=hi)
                .map(|(&e, v)| (e, v.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = super::zero();
        for (e, c) in self.terms() {
            let mut pw = super::one();
            let mut base = if e >= 0 { x.clone() } else { super::one() / x.clone() };
            let mut k = e.unsigned_abs();
            while k > 0 {
                if k & 1 == 1 {
                    pw = &pw * &base;
                }
                base = &base * &base;
                k >>= 1;
            }
            acc += c * pw;
        }
        acc
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, -v.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{e}")?,
            }
        }
        Ok(())
    }
}

/// Euclidean division of honest polynomials: `a = q*b + r` with
/// `deg r < deg b`. Panics if `b` is zero or either input has negative
/// exponents.
pub fn poly_divmod(a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    assert!(!b.is_zero(), "division by zero polynomial");
    assert!(a.is_polynomial() && b.is_polynomial());
    let db = b.degree().unwrap();
    let lb = b.coeff(db);
    let mut r = a.clone();
    let mut q = LaurentPoly::zero();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let c = r.coeff(dr) / lb.clone();
        let t = LaurentPoly::monomial(dr - db, c);
        q = &q + &t;
        r = &r - &(&t * b);
    }
    (q, r)
}

/// Monic gcd of honest polynomials over Q (gcd(0, 0) = 0).
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    match x.degree() {
        None => x,
        Some(d) => {
            let lead = x.coeff(d);
            x.scale(&(super::one() / lead))
        }
    }
}
