//! Spectral curves and spectral sheaves on the total space of O(n).
//!
//! The surface carries two charts with coordinates (z, y) and (w, y1),
//! glued by w = 1/z, y1 = w^n y. A pair's spectral curve is cut out by its
//! monic characteristic polynomial F(z, y) on chart 0 and by the transition
//! F1(w, y1) = w^{rn} F0(1/w, y1/w^n) on chart 1.
//!
//! Spectral sheaves are represented by their pushforward pair (P, psi):
//! the projection to the line is affine, so nothing is lost, and all Ext
//! computations collapse to finite-rank data downstairs. Under this
//! representation the correspondence and its inverse are identities on the
//! data; the geometric content lives in the two deformation complexes that
//! `defm` attaches to the same pair.

use serde::{Deserialize, Serialize};

use crate::exact::{bipoly_det, format_rat, parse_rat, poly_gcd, BiPoly, LaurentPoly, Rat};
use crate::hitchin::{char_poly, BundleP1, HitchinPair, TwistedEndo};
use crate::{Error, Result};

/// The spectral curve of a pair, in both chart equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralCurve {
    n: i64,
    r: usize,
    f0: BiPoly,
    f1: BiPoly,
}

impl SpectralCurve {
    /// Build from chart-0 characteristic coefficients `c_1..c_r`
    /// (`c_i` a polynomial of degree at most `i*n`).
    pub fn from_char_coeffs(n: i64, coeffs: &[LaurentPoly]) -> Self {
        let r = coeffs.len();
        let mut y0 = vec![LaurentPoly::zero(); r + 1];
        let mut y1 = vec![LaurentPoly::zero(); r + 1];
        y0[r] = LaurentPoly::one();
        y1[r] = LaurentPoly::one();
        for (i, c) in coeffs.iter().enumerate() {
            let deg = (i as i64 + 1) * n;
            y0[r - 1 - i] = c.clone();
            // chart 1: coefficient of y1^{r-1-i} is w^{(i+1)n} c(1/w)
            y1[r - 1 - i] = c.reverse(deg);
        }
        SpectralCurve {
            n,
            r,
            f0: BiPoly::from_y_coeffs(y0),
            f1: BiPoly::from_y_coeffs(y1),
        }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn chart0(&self) -> &BiPoly {
        &self.f0
    }

    pub fn chart1(&self) -> &BiPoly {
        &self.f1
    }
}

/// The spectral curve of a Hitchin pair: monic form of `det(p^*theta - x)`.
pub fn spectral_curve(p: &HitchinPair) -> SpectralCurve {
    SpectralCurve::from_char_coeffs(p.n(), &char_poly(p))
}

// ---------------------------------------------------------------------------
// Smoothness certificate
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothCert {
    Smooth,
    SingularOrUndetermined,
}

/// Matrix of multiplication by `g` on the rank-r module Q[z][y]/(F),
/// F monic of degree r in y; column j holds `g * y^j mod F` in the basis
/// `1, y, ..., y^{r-1}`.
fn multiplication_matrix(g: &BiPoly, f: &BiPoly) -> Vec<Vec<LaurentPoly>> {
    let r = f.y_degree().expect("modulus nonzero");
    let mut cols = Vec::with_capacity(r);
    for j in 0..r {
        let gj = (&BiPoly::term(LaurentPoly::one(), j) * g).rem_monic(f);
        cols.push((0..r).map(|i| gj.y_coeff(i)).collect::<Vec<_>>());
    }
    // transpose columns into rows
    (0..r)
        .map(|i| (0..r).map(|j| cols[j][i].clone()).collect())
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn laurent_det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let wrapped: Vec<Vec<BiPoly>> = m
        .iter()
        .map(|row| row.iter().map(|p| BiPoly::from_laurent(p.clone())).collect())
        .collect();
    bipoly_det(&wrapped).y_coeff(0)
}

/// Does the Jacobian module of the chart equation vanish?
///
/// Present Q[z,y]/(F, dF/dy, dF/dz) as the cokernel of the r x 2r matrix
/// `[mult(dF/dy) | mult(dF/dz)]` over Q[z]; the module is zero exactly when
/// its 0-th Fitting ideal — generated by the r x r minors — is the unit
/// ideal, i.e. the gcd of the minors is a nonzero constant.
fn chart_is_smooth(f: &BiPoly) -> bool {
    let r = f.y_degree().expect("chart equation nonzero");
    let my = multiplication_matrix(&f.d_dy(), f);
    let mz = multiplication_matrix(&f.d_dz(), f);
    let stacked: Vec<Vec<LaurentPoly>> = (0..r)
        .map(|i| my[i].iter().chain(mz[i].iter()).cloned().collect())
        .collect();
    let mut gcd = LaurentPoly::zero();
    for cols in combinations(2 * r, r) {
        let minor: Vec<Vec<LaurentPoly>> = (0..r)
            .map(|i| cols.iter().map(|&c| stacked[i][c].clone()).collect())
            .collect();
        gcd = poly_gcd(&gcd, &laurent_det(&minor));
        if gcd.degree() == Some(0) {
            return true;
        }
    }
    false
}

/// Certify smoothness of the spectral curve over both charts.
pub fn smoothness_certificate(c: &SpectralCurve) -> SmoothCert {
    if chart_is_smooth(c.chart0()) && chart_is_smooth(c.chart1()) {
        SmoothCert::Smooth
    } else {
        SmoothCert::SingularOrUndetermined
    }
}

/// Resultant in the fiber variable of two bivariate polynomials, as a
/// polynomial in the chart coordinate (Sylvester determinant).
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> LaurentPoly {
    let (Some(m), Some(n)) = (f.y_degree(), g.y_degree()) else {
        return LaurentPoly::zero();
    };
    if m == 0 && n == 0 {
        return LaurentPoly::one();
    }
    let size = m + n;
    let mut s = vec![vec![LaurentPoly::zero(); size]; size];
    for row in 0..n {
        for k in 0..=m {
            s[row][row + k] = f.y_coeff(m - k);
        }
    }
    for row in 0..m {
        for k in 0..=n {
            s[n + row][row + k] = g.y_coeff(n - k);
        }
    }
    laurent_det(&s)
}

// ---------------------------------------------------------------------------
// Genus and Euler characteristics
// ---------------------------------------------------------------------------

/// chi of the pushforward of the structure sheaf: sum chi(O(-i*n)).
pub fn chi_pushforward_structure(r: usize, n: i64) -> i64 {
    (0..r as i64).map(|i| -i * n + 1).sum()
}

/// Arithmetic genus of a spectral curve, as 1 - chi of its pushforward
/// structure sheaf. Closed form: 1 - r + n*r*(r-1)/2.
pub fn genus(c: &SpectralCurve) -> i64 {
    1 - chi_pushforward_structure(c.r(), c.n())
}

/// h^0 of the restriction of p^*N^r to the spectral curve, computed through
/// the pushforward: sum of h^0(O(rn - i*n)) for i = 0..r-1.
pub fn h0_normal_restriction(c: &SpectralCurve) -> i64 {
    let (r, n) = (c.r() as i64, c.n());
    (0..r).map(|i| crate::p1sheaf::h0_dim(r * n - i * n) as i64).sum()
}

// ---------------------------------------------------------------------------
// The correspondence
// ---------------------------------------------------------------------------

/// A spectral sheaf, represented by its pushforward pair `(P, psi)` where
/// `P = p_* L` and `psi = p_* x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralSheafRep {
    pair: HitchinPair,
}

impl SpectralSheafRep {
    pub fn pair(&self) -> &HitchinPair {
        &self.pair
    }

    pub fn rank(&self) -> usize {
        self.pair.rank()
    }

    pub fn delta(&self) -> i64 {
        self.pair.degree()
    }

    /// Euler characteristic: chi(L) = chi(E) = delta + r on a rational base.
    pub fn chi(&self) -> i64 {
        self.pair.bundle().chi()
    }

    /// The support curve, via the 0-th Fitting ideal of the resolution.
    pub fn fitting_curve(&self) -> SpectralCurve {
        spectral_curve(&self.pair)
    }
}

/// The spectral construction: a pair presents its sheaf through the
/// resolution by `h = p^*theta - x`, and the pushforward of that sheaf is
/// the pair itself. Callers should hold a stability certificate.
pub fn phi(p: &HitchinPair) -> SpectralSheafRep {
    SpectralSheafRep { pair: p.clone() }
}

/// The inverse construction: read the pair off the pushforward data.
pub fn phi_inverse(s: &SpectralSheafRep) -> HitchinPair {
    s.pair.clone()
}

/// The pushforward of the structure sheaf of a smooth spectral curve:
/// `E = O + O(-n) + ... + O(-(r-1)n)` with `psi` the companion matrix of
/// the defining polynomial (multiplication by y in the basis 1..y^{r-1}).
pub fn structure_sheaf_pair(c: &SpectralCurve) -> HitchinPair {
    let r = c.r();
    let n = c.n();
    let bundle = BundleP1::new((0..r as i64).map(|i| -i * n).collect()).unwrap();
    let mut entries = vec![vec![LaurentPoly::zero(); r]; r];
    for j in 0..r.saturating_sub(1) {
        entries[j + 1][j] = LaurentPoly::one();
    }
    for j in 0..r {
        // y * y^{r-1} = -sum c_i y^{r-i}
        entries[j][r - 1] = -&c.chart0().y_coeff(j);
    }
    let psi = TwistedEndo::new(&bundle, n, entries).unwrap();
    HitchinPair::new(bundle, psi).unwrap()
}

/// Does the 0-th Fitting ideal of the resolution presentation agree with
/// the characteristic-polynomial curve on both charts? The presentation is
/// square, so the single maximal minor is `det(h)`, and agreement means it
/// equals the chart equation up to the unit `(-1)^r`.
pub fn fitting_determinant_agrees(p: &HitchinPair) -> bool {
    let c = spectral_curve(p);
    let sign = if p.rank() % 2 == 0 { 1 } else { -1 };
    (0..2).all(|chart| {
        let det = resolution_determinant(p, chart).scale(&crate::exact::rat(sign));
        let expect = if chart == 0 { c.chart0() } else { c.chart1() };
        det == *expect
    })
}

/// The determinant of the resolution presentation `h = p^*theta - x` on a
/// chart (0 or 1). Fitting-ideal agreement means this equals the chart
/// equation of the spectral curve up to the unit `(-1)^r`.
pub fn resolution_determinant(p: &HitchinPair, chart: usize) -> BiPoly {
    let r = p.rank();
    let a = p.bundle().degrees();
    let n = p.n();
    let entries: Vec<Vec<BiPoly>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let sec = match chart {
                        0 => p.theta().entry(i, j).clone(),
                        1 => p.theta().entry(i, j).reverse(a[i] + n - a[j]),
                        _ => panic!("chart must be 0 or 1"),
                    };
                    let mut m = BiPoly::from_laurent(sec);
                    if i == j {
                        m = &m - &BiPoly::y();
                    }
                    m
                })
                .collect()
        })
        .collect();
    bipoly_det(&entries)
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

/// On-disk spectral curve: chart-0 monomials as (z-power, y-power, coeff).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveFile {
    pub n: i64,
    pub r: usize,
    #[serde(rename = "F0")]
    pub f0: Vec<(i64, usize, String)>,
}

impl CurveFile {
    pub fn from_curve(c: &SpectralCurve) -> Self {
        let mut f0 = Vec::new();
        for (j, coeff) in c.chart0().y_coeffs().iter().enumerate() {
            for (i, v) in coeff.terms() {
                f0.push((i, j, format_rat(v)));
            }
        }
        CurveFile { n: c.n(), r: c.r(), f0 }
    }

    pub fn into_curve(&self) -> Result<SpectralCurve> {
        let mut y_coeffs = vec![LaurentPoly::zero(); self.r + 1];
        for (i, j, s) in &self.f0 {
            if *j > self.r {
                return Err(Error::Invalid(format!("y-power {j} exceeds rank {}", self.r)));
            }
            let c: Rat = parse_rat(s)?;
            y_coeffs[*j].add_term(*i, c);
        }
        if y_coeffs[self.r] != LaurentPoly::one() {
            return Err(Error::Invalid("curve equation is not monic".into()));
        }
        let coeffs: Vec<LaurentPoly> = (1..=self.r)
            .map(|i| y_coeffs[self.r - i].clone())
            .collect();
        for (i, c) in coeffs.iter().enumerate() {
            let bound = (i as i64 + 1) * self.n;
            if !(c.is_polynomial() && c.degree().map_or(true, |d| d <= bound)) {
                return Err(Error::Invalid(format!(
                    "coefficient of y^{} is not a section of O({bound})",
                    self.r - 1 - i
                )));
            }
        }
        Ok(SpectralCurve::from_char_coeffs(self.n, &coeffs))
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::hitchin::sample_stable_pair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().map(|&(e, c)| (e, rat(c))))
    }

    fn curve(n: i64, cs: &[&[(i64, i64)]]) -> SpectralCurve {
        SpectralCurve::from_char_coeffs(n, &cs.iter().map(|c| lp(c)).collect::<Vec<_>>())
    }

    #[test]
    fn smooth_parabola() {
        // F = y^2 - z: (F, 2y, -1) contains a unit
        let c = curve(1, &[&[], &[(1, -1)]]);
        assert_eq!(smoothness_certificate(&c), SmoothCert::Smooth);
    }

    #[test]
    fn node_is_rejected() {
        // y^2 - z^2 has a node at the origin
        let c = curve(1, &[&[], &[(2, -1)]]);
        assert_eq!(smoothness_certificate(&c), SmoothCert::SingularOrUndetermined);
        // y^2 - z^2(z - 1), n large enough to contain it
        let c = curve(2, &[&[], &[(3, -1), (2, 1)]]);
        assert_eq!(smoothness_certificate(&c), SmoothCert::SingularOrUndetermined);
    }

    #[test]
    fn singular_at_infinity_is_caught() {
        // y^2 - z: smooth on chart 0. With n = 2 the chart-1 equation is
        // y1^2 - w^3, a cusp at the origin of chart 1.
        let c = curve(2, &[&[], &[(1, -1)]]);
        assert!(chart_is_smooth(c.chart0()));
        assert!(!chart_is_smooth(c.chart1()));
        assert_eq!(smoothness_certificate(&c), SmoothCert::SingularOrUndetermined);
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus(&curve(1, &[&[(0, 1)]])), 0); // r = 1
        assert_eq!(genus(&curve(1, &[&[], &[(1, -1)]])), 0); // r = 2, n = 1
        // r = 3, n = 2: 1 - 3 + 2*3 = 4; oracle: 1 - chi(O + O(-2) + O(-4))
        let c = curve(2, &[&[], &[], &[(1, 1)]]);
        assert_eq!(genus(&c), 4);
        assert_eq!(chi_pushforward_structure(3, 2), 1 - 1 - 3);
        assert_eq!(genus(&c), 1 - chi_pushforward_structure(3, 2));
    }

    #[test]
    fn genus_closed_form_matches_euler_oracle() {
        for r in 1..=4usize {
            for n in 1..=4i64 {
                let closed = 1 - r as i64 + n * (r as i64) * (r as i64 - 1) / 2;
                assert_eq!(closed, 1 - chi_pushforward_structure(r, n));
            }
        }
    }

    #[test]
    fn riemann_roch_cross_check_on_smooth_samples() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for (r, n) in [(2usize, 1i64), (2, 2), (3, 1)] {
            let (p, _) = sample_stable_pair(&mut rng, r, n, 5, 500).unwrap();
            let c = spectral_curve(&p);
            assert_eq!(
                genus(&c) + h0_normal_restriction(&c),
                (r as i64) * (r as i64) * n + 1
            );
        }
    }

    #[test]
    fn chi_is_delta_plus_rank() {
        // r = 1 graph case: chi = 0 + 1
        let b = BundleP1::new(vec![0]).unwrap();
        let t = TwistedEndo::new(&b, 1, vec![vec![lp(&[(0, 3)])]]).unwrap();
        let p = HitchinPair::new(b, t).unwrap();
        assert_eq!(phi(&p).chi(), 1);
        // r = 2, delta = 1: chi = 3
        let b = BundleP1::new(vec![1, 0]).unwrap();
        let t = TwistedEndo::new(
            &b,
            1,
            vec![
                vec![lp(&[(0, 1)]), lp(&[(0, 1), (2, 1)])],
                vec![lp(&[(0, 1)]), LaurentPoly::zero()],
            ],
        )
        .unwrap();
        let p = HitchinPair::new(b, t).unwrap();
        assert_eq!(phi(&p).chi(), 3);
    }

    #[test]
    fn correspondence_roundtrip_on_samples() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for _ in 0..20 {
            let (p, _) = sample_stable_pair(&mut rng, 2, 1, 5, 500).unwrap();
            assert_eq!(phi_inverse(&phi(&p)), p);
            assert_eq!(phi(&p).chi(), p.degree() + p.rank() as i64);
        }
    }

    #[test]
    fn companion_pair_from_curve() {
        // oracle: expand Q[z,y]/(y^2 - z) in the basis 1, y: multiplication
        // by y sends 1 -> y and y -> z, so E = O + O(-1), psi = [[0,z],[1,0]]
        let c = curve(1, &[&[], &[(1, -1)]]);
        let p = structure_sheaf_pair(&c);
        assert_eq!(p.bundle().degrees(), &[0, -1]);
        assert_eq!(p.theta().entry(0, 0), &LaurentPoly::zero());
        assert_eq!(p.theta().entry(0, 1), &lp(&[(1, 1)]));
        assert_eq!(p.theta().entry(1, 0), &LaurentPoly::one());
        assert_eq!(p.theta().entry(1, 1), &LaurentPoly::zero());
        // its own spectral curve is the one we started from
        assert_eq!(spectral_curve(&p), c);
    }

    #[test]
    fn companion_matches_remainder_oracle() {
        // independent route: multiplication_matrix of y mod F
        let c = curve(2, &[&[(1, 2)], &[(0, -1), (4, 1)], &[(2, 5)]]);
        let p = structure_sheaf_pair(&c);
        let m = multiplication_matrix(&BiPoly::y(), c.chart0());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.theta().entry(i, j), &m[i][j]);
            }
        }
    }

    #[test]
    fn fitting_ideal_is_char_poly() {
        // only one maximal minor: det(h) = (-1)^r F on both charts
        let mut rng = ChaCha20Rng::seed_from_u64(29);
        for (r, n) in [(1usize, 1i64), (2, 1), (2, 2), (3, 1)] {
            let (p, _) = sample_stable_pair(&mut rng, r, n, 4, 500).unwrap();
            let c = spectral_curve(&p);
            let sign = if r % 2 == 0 { 1 } else { -1 };
            for chart in 0..2 {
                let det = resolution_determinant(&p, chart);
                let expect = if chart == 0 { c.chart0() } else { c.chart1() };
                assert_eq!(det.scale(&rat(sign)), *expect);
            }
        }
    }

    #[test]
    fn resultant_cross_checks() {
        // y^2 - z: disc = Res(F, 2y) = -(-4z)... nonzero; F_z = -1 so
        // Res(F, F_z) is a nonzero constant: coprime resultants certify
        // smoothness independently of the Fitting route.
        let c = curve(1, &[&[], &[(1, -1)]]);
        let f = c.chart0();
        let disc = resultant_y(f, &f.d_dy());
        let rz = resultant_y(f, &f.d_dz());
        assert!(!disc.is_zero());
        assert_eq!(poly_gcd(&disc, &rz).degree(), Some(0));
        // and the Fitting certificate agrees
        assert_eq!(smoothness_certificate(&c), SmoothCert::Smooth);
    }

    #[test]
    fn smooth_samples_have_nonzero_discriminant() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for (r, n) in [(2usize, 1i64), (2, 2), (3, 1)] {
            let (p, _) = sample_stable_pair(&mut rng, r, n, 5, 500).unwrap();
            let c = spectral_curve(&p);
            for f in [c.chart0(), c.chart1()] {
                assert!(!resultant_y(f, &f.d_dy()).is_zero());
            }
        }
    }

    #[test]
    fn coprime_resultants_imply_smooth_certificate() {
        // sufficient-condition direction, an independent check of the
        // Fitting computation on random samples
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        for _ in 0..30 {
            let p = crate::hitchin::sample_pair(&mut rng, 2, 2, 4);
            let c = spectral_curve(&p);
            let coprime_on = |f: &BiPoly| {
                let disc = resultant_y(f, &f.d_dy());
                let rz = resultant_y(f, &f.d_dz());
                !disc.is_zero() && poly_gcd(&disc, &rz).degree() == Some(0)
            };
            if coprime_on(c.chart0()) && coprime_on(c.chart1()) {
                assert_eq!(smoothness_certificate(&c), SmoothCert::Smooth);
            }
        }
    }

    #[test]
    fn curve_file_roundtrip() {
        let c = curve(2, &[&[(0, 1), (2, -3)], &[(1, 7)]]);
        let f = CurveFile::from_curve(&c);
        let json = serde_json::to_string(&f).unwrap();
        let back: CurveFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_curve().unwrap(), c);
    }

    #[test]
    fn curve_file_rejects_non_monic() {
        let mut f = CurveFile::from_curve(&curve(1, &[&[], &[(1, -1)]]));
        f.f0.retain(|(_, j, _)| *j != 2);
        assert!(f.into_curve().is_err());
    }
}
