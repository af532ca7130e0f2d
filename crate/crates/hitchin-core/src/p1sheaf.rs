//! Line bundles O(d) on the projective line in the standard two-chart model.
//!
//! Chart 0 has coordinate `z`, chart 1 has `w = 1/z`. A chart-0 section
//! `f(z)` of O(d) reads `w^d f(1/w)` on chart 1; on the overlap everything
//! is written as a Laurent polynomial in `z`. Throughout the crate, chart-1
//! sections are carried in this z-form: a w-polynomial of degree at most `m`
//! becomes a z-Laurent polynomial with exponents in `[d - m, d]`.
//!
//! Cohomology is the usual picture: H^0(O(d)) has monomial basis
//! `1, z, ..., z^d`; H^1(O(d)) is spanned by the overlap monomials
//! `z^{d+1}, ..., z^{-1}` (nonempty only for d <= -2). The Cech differential
//! of a 0-cochain `(c0, c1)` is `c1|_overlap - c0`, and Serre duality on the
//! line is realized as the residue: the coefficient of `z^{-1}` in the
//! product of sections.

use crate::exact::{LaurentPoly, Rat};
use crate::{Error, Result};

/// Dimension of H^0(O(d)).
pub fn h0_dim(d: i64) -> usize {
    (d + 1).max(0) as usize
}

/// Dimension of H^1(O(d)).
pub fn h1_dim(d: i64) -> usize {
    (-d - 1).max(0) as usize
}

/// Monomial basis of global sections: `{1, z, ..., z^d}`, empty for d < 0.
pub fn h0_basis(d: i64) -> Vec<LaurentPoly> {
    (0..=d)
        .map(|e| LaurentPoly::monomial(e, crate::exact::rat(1)))
        .collect()
}

/// Overlap monomial basis of H^1: `{z^{d+1}, ..., z^{-1}}`, empty for d >= -1.
pub fn h1_basis(d: i64) -> Vec<LaurentPoly> {
    (d + 1..=-1)
        .map(|e| LaurentPoly::monomial(e, crate::exact::rat(1)))
        .collect()
}

/// Exponent window `[d+1, -1]` of the H^1 monomials of O(d).
pub fn h1_window(d: i64) -> (i64, i64) {
    (d + 1, -1)
}

/// Chart transition into chart-1 coordinates: a z-form section of O(d)
/// becomes a polynomial in `w`. Valid input has exponents `<= d`.
pub fn to_chart1_poly(f_zform: &LaurentPoly, d: i64) -> LaurentPoly {
    debug_assert!(f_zform.max_exp().map_or(true, |e| e <= d));
    f_zform.reverse(d)
}

/// Chart transition out of chart-1 coordinates: a w-polynomial section of
/// O(d) in its z-form on the overlap.
pub fn from_chart1_poly(g_w: &LaurentPoly, d: i64) -> LaurentPoly {
    debug_assert!(g_w.is_polynomial());
    g_w.reverse(d)
}

/// Is `f` a valid chart-0 section (polynomial in z)?
pub fn valid_chart0(f: &LaurentPoly) -> bool {
    f.is_polynomial()
}

/// Is `f` (in z-form) a valid chart-1 section of O(d), i.e. exponents <= d?
pub fn valid_chart1(f: &LaurentPoly, d: i64) -> bool {
    f.max_exp().map_or(true, |e| e <= d)
}

/// Residue: the coefficient of `z^{-1}`.
pub fn residue(f: &LaurentPoly) -> Rat {
    f.coeff(-1)
}

/// Class of an overlap section in the H^1 monomial coordinates of O(d).
pub fn h1_class(f: &LaurentPoly, d: i64) -> Vec<Rat> {
    let (lo, hi) = h1_window(d);
    (lo..=hi).map(|e| f.coeff(e)).collect()
}

/// Split an overlap section with vanishing H^1 class as `c1 - c0`, where
/// `c0` is a chart-0 section (exponents >= 0) and `c1` a chart-1 section in
/// z-form (exponents <= d). Returns `None` when the class obstructs.
pub fn split_coboundary(f: &LaurentPoly, d: i64) -> Option<(LaurentPoly, LaurentPoly)> {
    if h1_class(f, d).iter().any(|c| !num_traits::Zero::is_zero(c)) {
        return None;
    }
    let c1 = f.head_to(-1);
    let c0 = -&f.tail_from(0);
    debug_assert!(valid_chart1(&c1, d));
    Some((c0, c1))
}

/// A Cech cochain for O(d) on the two-chart cover.
///
/// Degree 0 stores per-chart sections (chart 1 in z-form); degree 1 stores a
/// single overlap section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CechCochain {
    Zero {
        twist: i64,
        chart0: LaurentPoly,
        chart1: LaurentPoly, // z-form, exponents <= twist
    },
    One {
        twist: i64,
        overlap: LaurentPoly,
    },
}

impl CechCochain {
    pub fn degree_zero(twist: i64, chart0: LaurentPoly, chart1_zform: LaurentPoly) -> Result<Self> {
        if !valid_chart0(&chart0) {
            return Err(Error::Invalid(format!(
                "chart-0 component {chart0} has negative exponents"
            )));
        }
        if !valid_chart1(&chart1_zform, twist) {
            return Err(Error::Invalid(format!(
                "chart-1 component {chart1_zform} exceeds twist {twist} in z-form"
            )));
        }
        Ok(CechCochain::Zero {
            twist,
            chart0,
            chart1: chart1_zform,
        })
    }

    pub fn twist(&self) -> i64 {
        match self {
            CechCochain::Zero { twist, .. } | CechCochain::One { twist, .. } => *twist,
        }
    }
}

/// Cech differential of a degree-0 cochain: `(c0, c1) -> c1|_overlap - c0`.
pub fn cech_delta(c: &CechCochain) -> CechCochain {
    match c {
        CechCochain::Zero {
            twist,
            chart0,
            chart1,
        } => CechCochain::One {
            twist: *twist,
            overlap: chart1 - chart0,
        },
        CechCochain::One { .. } => panic!("cech_delta of a degree-1 cochain"),
    }
}

/// Serre pairing on the line: `H^0(O(d)) x H^1(O(-2-d)) -> Q` by the residue
/// of the product. Errors if the twists do not pair to O(-2).
pub fn residue_pair(a: &CechCochain, b: &CechCochain) -> Result<Rat> {
    let (CechCochain::Zero { twist: da, chart0, chart1 }, CechCochain::One { twist: db, overlap }) =
        (a, b)
    else {
        return Err(Error::Invalid(
            "residue_pair takes a global section (degree 0) and an overlap class (degree 1)".into(),
        ));
    };
    if da + db != -2 {
        return Err(Error::TwistMismatch {
            expected: -2 - da,
            got: *db,
        });
    }
    // the degree-0 cochain must be a global section: same z-form on both charts
    if chart0 != chart1 {
        return Err(Error::Invalid(
            "residue_pair needs a global section, got a genuine cochain".into(),
        ));
    }
    Ok(residue(&(chart0 * overlap)))
}
