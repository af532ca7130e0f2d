//! Polynomials in an auxiliary fiber variable with Laurent coefficients.
//!
//! `BiPoly` is dense in the fiber variable `y` and sparse in the chart
//! coordinate: `coeffs[j]` is the Laurent coefficient of `y^j`. This is the
//! working type for characteristic polynomials and chart equations of
//! spectral curves.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{LaurentPoly, Rat};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    coeffs: Vec<LaurentPoly>, // coeffs[j] multiplies y^j; last entry nonzero
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        let mut b = BiPoly { coeffs: vec![p] };
        b.normalize();
        b
    }

    /// `c(z) * y^j`.
    pub fn term(c: LaurentPoly, j: usize) -> Self {
        let mut coeffs = vec![LaurentPoly::zero(); j + 1];
        coeffs[j] = c;
        let mut b = BiPoly { coeffs };
        b.normalize();
        b
    }

    pub fn y() -> Self {
        Self::term(LaurentPoly::one(), 1)
    }

    /// Build from `y`-coefficients in ascending order.
    pub fn from_y_coeffs(coeffs: Vec<LaurentPoly>) -> Self {
        let mut b = BiPoly { coeffs };
        b.normalize();
        b
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(LaurentPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in the fiber variable; `None` for zero.
    pub fn y_degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn y_coeff(&self, j: usize) -> LaurentPoly {
        self.coeffs.get(j).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn y_coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn is_monic_in_y(&self, deg: usize) -> bool {
        self.y_degree() == Some(deg) && self.coeffs[deg] == LaurentPoly::one()
    }

    /// Coefficient-wise map, used for chart transitions.
    pub fn map_coeffs(&self, f: impl Fn(usize, &LaurentPoly) -> LaurentPoly) -> Self {
        Self::from_y_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| f(j, c))
                .collect(),
        )
    }

    /// Formal partial derivative in the fiber variable.
    pub fn d_dy(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_y_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, c)| c.scale(&super::rat(j as i64 + 1)))
                .collect(),
        )
    }

    /// Formal partial derivative in the chart coordinate.
    pub fn d_dz(&self) -> Self {
        Self::from_y_coeffs(
            self.coeffs
                .iter()
                .map(|c| {
                    LaurentPoly::from_pairs(
                        c.terms().map(|(e, v)| (e - 1, v * super::rat(e))),
                    )
                })
                .collect(),
        )
    }

    /// Remainder of `self` modulo a monic (in `y`) polynomial.
    pub fn rem_monic(&self, f: &BiPoly) -> BiPoly {
        let df = f.y_degree().expect("modulus must be nonzero");
        assert!(f.is_monic_in_y(df), "modulus must be monic in y");
        let mut r = self.clone();
        while let Some(dr) = r.y_degree() {
            if dr < df {
                break;
            }
            let lead = r.y_coeff(dr);
            let sub = f.map_coeffs(|_, c| c * &lead);
            let shifted = BiPoly::from_y_coeffs(
                std::iter::repeat_with(LaurentPoly::zero)
                    .take(dr - df)
                    .chain(sub.coeffs.iter().cloned())
                    .collect(),
            );
            r = &r - &shifted;
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_y_coeffs(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn eval(&self, z: &Rat, y: &Rat) -> Rat {
        let mut acc = super::zero();
        let mut yp = super::one();
        for c in &self.coeffs {
            acc += c.eval(z) * &yp;
            yp *= y.clone();
        }
        acc
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_y_coeffs(
            (0..n)
                .map(|j| &self.y_coeff(j) + &rhs.y_coeff(j))
                .collect(),
        )
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_y_coeffs(
            (0..n)
                .map(|j| &self.y_coeff(j) - &rhs.y_coeff(j))
                .collect(),
        )
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::from_y_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut coeffs =
            vec![LaurentPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        BiPoly::from_y_coeffs(coeffs)
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*y")?,
                _ => write!(f, "({c})*y^{j}")?,
            }
        }
        Ok(())
    }
}

/// Determinant of a square matrix over the bivariate ring, by Laplace
/// expansion along the first column. Fine for the ranks in play here.
pub(crate) fn bipoly_det(m: &[Vec<BiPoly>]) -> BiPoly {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return BiPoly::from_laurent(LaurentPoly::one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = BiPoly::zero();
    for i in 0..n {
        if m[i][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BiPoly>> = m
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != i)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let cof = &m[i][0] * &bipoly_det(&minor);
        det = if i % 2 == 0 { &det + &cof } else { &det - &cof };
    }
    det
}

/// Adjugate matrix, from cofactors: `adj(M) * M = det(M) * I`.
pub(crate) fn bipoly_adjugate(m: &[Vec<BiPoly>]) -> Vec<Vec<BiPoly>> {
    let n = m.len();
    let mut adj = vec![vec![BiPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BiPoly>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let cof = bipoly_det(&minor);
            // adj[j][i] = (-1)^(i+j) * minor(i, j)
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -&cof };
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().map(|&(e, c)| (e, rat(c))))
    }

    #[test]
    fn rem_monic_reduces_powers() {
        // y^2 mod (y^2 - z) = z
        let f = &(&BiPoly::y() * &BiPoly::y()) - &BiPoly::from_laurent(lp(&[(1, 1)]));
        let y2 = &BiPoly::y() * &BiPoly::y();
        assert_eq!(y2.rem_monic(&f), BiPoly::from_laurent(lp(&[(1, 1)])));
    }

    #[test]
    fn derivative_in_both_variables() {
        // F = y^2 - z^3: F_y = 2y, F_z = -3z^2
        let f = &(&BiPoly::y() * &BiPoly::y()) - &BiPoly::from_laurent(lp(&[(3, 1)]));
        assert_eq!(f.d_dy(), BiPoly::term(lp(&[(0, 2)]), 1));
        assert_eq!(f.d_dz(), BiPoly::from_laurent(lp(&[(2, -3)])));
    }

    #[test]
    fn det_2x2() {
        // det [[y, 1], [z, y]] = y^2 - z
        let m = vec![
            vec![BiPoly::y(), BiPoly::from_laurent(lp(&[(0, 1)]))],
            vec![BiPoly::from_laurent(lp(&[(1, 1)])), BiPoly::y()],
        ];
        let expect =
            &(&BiPoly::y() * &BiPoly::y()) - &BiPoly::from_laurent(lp(&[(1, 1)]));
        assert_eq!(bipoly_det(&m), expect);
    }

    #[test]
    fn adjugate_identity() {
        let m = vec![
            vec![BiPoly::y(), BiPoly::from_laurent(lp(&[(0, 1)]))],
            vec![BiPoly::from_laurent(lp(&[(1, 1)])), BiPoly::y()],
        ];
        let adj = bipoly_adjugate(&m);
        let det = bipoly_det(&m);
        // adj * m = det * I
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = BiPoly::zero();
                for k in 0..2 {
                    acc = &acc + &(&adj[i][k] * &m[k][j]);
                }
                let expect = if i == j { det.clone() } else { BiPoly::zero() };
                assert_eq!(acc, expect);
            }
        }
    }
}
