//! Hitchin pairs on the projective line.
//!
//! A pair is a split bundle `E = O(a_1) + ... + O(a_r)` together with a
//! twisted endomorphism `theta : E -> E(n)`, stored as the matrix of its
//! chart-0 entries: `theta[i][j]` is a global section of `O(a_i + n - a_j)`.
//! The twist degree `n >= 1` keeps the anticanonical twist `O(n+2)` of
//! degree at least 3, which is the existence regime for stable pairs on a
//! rational base.
//!
//! The characteristic polynomial is stored monic in the fiber variable:
//! `x^r + c_1 x^{r-1} + ... + c_r = det(x - theta)`, which differs from
//! `det(theta - x)` by the sign `(-1)^r`.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{
    bipoly_adjugate, bipoly_det, format_rat, kernel_basis, parse_rat, rat, BiPoly, LaurentPoly,
    Rat, RatMatrix,
};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Bundles and twisted endomorphisms
// ---------------------------------------------------------------------------

/// A split vector bundle on the line, given by its splitting type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleP1 {
    degrees: Vec<i64>,
}

impl BundleP1 {
    pub fn new(degrees: Vec<i64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::Invalid("bundle must have rank >= 1".into()));
        }
        Ok(BundleP1 { degrees })
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn summand(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    /// Euler characteristic on the line: chi(O(d)) = d + 1 summed over summands.
    pub fn chi(&self) -> i64 {
        self.degrees.iter().map(|d| d + 1).sum()
    }

    pub fn twist(&self, t: i64) -> BundleP1 {
        BundleP1 {
            degrees: self.degrees.iter().map(|d| d + t).collect(),
        }
    }
}

/// A twisted endomorphism `E -> E(n)` as a matrix of chart-0 sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedEndo {
    n: i64,
    entries: Vec<Vec<LaurentPoly>>,
}

impl TwistedEndo {
    /// Validates that entry (i, j) is a polynomial of degree at most
    /// `a_i + n - a_j` (and zero when that bound is negative).
    pub fn new(bundle: &BundleP1, n: i64, entries: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = bundle.rank();
        if entries.len() != r || entries.iter().any(|row| row.len() != r) {
            return Err(Error::Invalid("endomorphism matrix has wrong shape".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                let bound = bundle.summand(i) + n - bundle.summand(j);
                let ok = if bound < 0 {
                    p.is_zero()
                } else {
                    p.is_polynomial() && p.degree().map_or(true, |d| d <= bound)
                };
                if !ok {
                    return Err(Error::Invalid(format!(
                        "entry ({i},{j}) = {p} is not a section of O({bound})"
                    )));
                }
            }
        }
        Ok(TwistedEndo { n, entries })
    }

    pub fn zero(bundle: &BundleP1, n: i64) -> Self {
        let r = bundle.rank();
        TwistedEndo {
            n,
            entries: vec![vec![LaurentPoly::zero(); r]; r],
        }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &Vec<Vec<LaurentPoly>> {
        &self.entries
    }

    pub fn trace(&self) -> LaurentPoly {
        let mut t = LaurentPoly::zero();
        for i in 0..self.entries.len() {
            t = &t + &self.entries[i][i];
        }
        t
    }
}

/// A Hitchin pair `(E, theta)` with twist `N = O(n)`, `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitchinPair {
    bundle: BundleP1,
    theta: TwistedEndo,
}

impl HitchinPair {
    pub fn new(bundle: BundleP1, theta: TwistedEndo) -> Result<Self> {
        if theta.n() < 1 {
            return Err(Error::Invalid(format!(
                "twist n = {} must be >= 1",
                theta.n()
            )));
        }
        // re-validate entry degrees against this bundle
        let theta = TwistedEndo::new(&bundle, theta.n(), theta.entries)?;
        Ok(HitchinPair { bundle, theta })
    }

    pub fn bundle(&self) -> &BundleP1 {
        &self.bundle
    }

    pub fn theta(&self) -> &TwistedEndo {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    pub fn degree(&self) -> i64 {
        self.bundle.degree()
    }

    pub fn n(&self) -> i64 {
        self.theta.n()
    }
}

/// The nonzero section of O(n+2) that induces both Poisson structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonSection {
    n: i64,
    poly: LaurentPoly,
}

impl PoissonSection {
    pub fn new(n: i64, poly: LaurentPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::Invalid("sigma0 must be nonzero".into()));
        }
        if !poly.is_polynomial() || poly.degree().unwrap() > n + 2 {
            return Err(Error::Invalid(format!(
                "sigma0 = {poly} is not a section of O({})",
                n + 2
            )));
        }
        Ok(PoissonSection { n, poly })
    }

    pub fn from_coeffs(n: i64, coeffs: &[Rat]) -> Result<Self> {
        Self::new(
            n,
            LaurentPoly::from_pairs(coeffs.iter().enumerate().map(|(i, c)| (i as i64, c.clone()))),
        )
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    /// Coefficient list of length n+3 (zero-padded), for serialization.
    pub fn coeffs(&self) -> Vec<Rat> {
        (0..=self.n + 2).map(|e| self.poly.coeff(e)).collect()
    }
}

// ---------------------------------------------------------------------------
// Characteristic data
// ---------------------------------------------------------------------------

/// Matrix `x*I - theta` over the bivariate ring (x plays the fiber variable).
fn char_matrix(p: &HitchinPair) -> Vec<Vec<BiPoly>> {
    let r = p.rank();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut m = -&BiPoly::from_laurent(p.theta().entry(i, j).clone());
                    if i == j {
                        m = &m + &BiPoly::y();
                    }
                    m
                })
                .collect()
        })
        .collect()
}

/// Coefficients `c_1, ..., c_r` of the monic characteristic polynomial
/// `x^r + c_1 x^{r-1} + ... + c_r`, with `c_i` a global section of O(i*n).
pub fn char_poly(p: &HitchinPair) -> Vec<LaurentPoly> {
    let r = p.rank();
    let n = p.n();
    let det = bipoly_det(&char_matrix(p));
    assert!(det.is_monic_in_y(r), "characteristic polynomial not monic");
    let coeffs: Vec<LaurentPoly> = (1..=r).map(|i| det.y_coeff(r - i)).collect();
    for (i, c) in coeffs.iter().enumerate() {
        let bound = (i as i64 + 1) * n;
        // global-section check via the chart-1 transition: a polynomial of
        // degree <= i*n in z transitions to a polynomial in w
        assert!(
            c.is_polynomial() && c.degree().map_or(true, |d| d <= bound),
            "char coefficient c_{} = {c} escapes H0(O({bound}))",
            i + 1
        );
    }
    coeffs
}

/// The Hitchin map: concatenated monomial coordinates of `c_1, ..., c_r`
/// (coefficients of z^0..z^{i*n} for each i), total length sum(i*n + 1).
pub fn hitchin_map(p: &HitchinPair) -> Vec<Rat> {
    let n = p.n();
    char_poly(p)
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            let bound = (i as i64 + 1) * n;
            (0..=bound).map(|e| c.coeff(e)).collect::<Vec<_>>()
        })
        .collect()
}

/// Directional derivative of the characteristic coefficients at `theta`
/// in the direction `eta` (an End(E)(n)-valued matrix on one chart):
/// `d/dt c_i(theta + t eta) |_{t=0}`, returned as `c_1', ..., c_r'`.
///
/// Computed from the adjugate: `d det(x - theta)[eta] = -tr(adj(x - theta) eta)`.
pub fn char_poly_derivative(p: &HitchinPair, eta: &[Vec<LaurentPoly>]) -> Vec<LaurentPoly> {
    let r = p.rank();
    assert!(eta.len() == r && eta.iter().all(|row| row.len() == r));
    let adj = bipoly_adjugate(&char_matrix(p));
    // trace of adj * eta
    let mut tr = BiPoly::zero();
    for i in 0..r {
        for k in 0..r {
            if eta[k][i].is_zero() {
                continue;
            }
            tr = &tr + &(&adj[i][k] * &BiPoly::from_laurent(eta[k][i].clone()));
        }
    }
    let deriv = -&tr;
    (1..=r).map(|i| deriv.y_coeff(r - i)).collect()
}

// ---------------------------------------------------------------------------
// Stability certificate
// ---------------------------------------------------------------------------

/// What the stability check could certify.
///
/// Either certificate implies the pair is stable: a rank-one torsion-free
/// sheaf on an integral curve has no destabilizing subsheaf, and for n >= 1
/// a smooth curve in the spectral divisor class is irreducible. `Unknown`
/// makes no claim either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityCert {
    SmoothSpectralCurve,
    IntegralSpectralCurve,
    Unknown,
}

impl StabilityCert {
    pub fn is_stable(self) -> bool {
        !matches!(self, StabilityCert::Unknown)
    }
}

/// Certify stability of a pair.
///
/// Rank one short-circuits: the spectral curve is the graph of a section,
/// hence integral. Higher rank goes through the Fitting-ideal smoothness
/// certificate of the spectral curve; degenerate or singular-but-integral
/// curves come back as `Unknown` rather than guessing.
pub fn is_stable(p: &HitchinPair) -> StabilityCert {
    if p.rank() == 1 {
        return StabilityCert::IntegralSpectralCurve;
    }
    match crate::spectral::smoothness_certificate(&crate::spectral::spectral_curve(p)) {
        crate::spectral::SmoothCert::Smooth => StabilityCert::SmoothSpectralCurve,
        crate::spectral::SmoothCert::SingularOrUndetermined => StabilityCert::Unknown,
    }
}

/// Dimension of the space of global endomorphisms commuting with theta,
/// solved as an exact linear system. Equals 1 for stable pairs.
pub fn endomorphism_check(p: &HitchinPair) -> usize {
    let r = p.rank();
    let n = p.n();
    let a = p.bundle().degrees();
    // unknowns: monomial coefficients of phi_{ij} in H0(O(a_i - a_j))
    let mut unknowns = Vec::new(); // (i, j, exponent)
    for i in 0..r {
        for j in 0..r {
            let d = a[i] - a[j];
            for e in 0..=d {
                unknowns.push((i, j, e));
            }
        }
    }
    if unknowns.is_empty() {
        return 0;
    }
    // equations: coefficients of [phi, theta]_{ij} over z^0..z^{a_i + n - a_j}
    let mut rows = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let bound = a[i] + n - a[j];
            for e in 0..=bound.max(-1) {
                let mut row = Vec::with_capacity(unknowns.len());
                for &(k, l, t) in &unknowns {
                    // coefficient of z^e in [phi, theta]_{ij} from phi_{kl} z^t:
                    //   phi_{ik} theta_{kj}: k == i contributes theta_{lj}
                    //   -theta_{ik} phi_{kj}: l == j contributes -theta_{ik}
                    let mut c = Rat::zero();
                    if k == i {
                        c += p.theta().entry(l, j).coeff(e - t);
                    }
                    if l == j {
                        c -= p.theta().entry(i, k).coeff(e - t);
                    }
                    row.push(c);
                }
                rows.push(row);
            }
        }
    }
    let m = RatMatrix::from_rows(rows);
    kernel_basis(&m).len()
}

// ---------------------------------------------------------------------------
// Seeded sampling
// ---------------------------------------------------------------------------

/// Draw a pair with integer coefficients in `[-bound, bound]`.
///
/// The splitting type takes values in {0, 1} (sorted descending) so that the
/// spread never exceeds the twist and mixed-degree samples occur. The draw
/// order is fixed: splitting, then theta entries row-major with ascending
/// exponent, then sigma0 — reports stay reproducible across platforms.
pub fn sample_pair<R: Rng>(rng: &mut R, r: usize, n: i64, bound: i64) -> HitchinPair {
    assert!(r >= 1 && n >= 1 && bound >= 0);
    let mut degrees: Vec<i64> = (0..r).map(|_| rng.gen_range(0..=1)).collect();
    degrees.sort_unstable_by(|x, y| y.cmp(x));
    let bundle = BundleP1::new(degrees).unwrap();
    let mut entries = vec![vec![LaurentPoly::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            let d = bundle.summand(i) + n - bundle.summand(j);
            if d < 0 {
                continue;
            }
            entries[i][j] = LaurentPoly::from_pairs(
                (0..=d).map(|e| (e, rat(rng.gen_range(-bound..=bound)))),
            );
        }
    }
    let theta = TwistedEndo::new(&bundle, n, entries).unwrap();
    HitchinPair::new(bundle, theta).unwrap()
}

/// Draw a nonzero section of O(n+2); `None` if the bound forces zero.
pub fn sample_sigma0<R: Rng>(rng: &mut R, n: i64, bound: i64) -> Option<PoissonSection> {
    if bound == 0 {
        return None;
    }
    for _ in 0..64 {
        let poly = LaurentPoly::from_pairs(
            (0..=n + 2).map(|e| (e, rat(rng.gen_range(-bound..=bound)))),
        );
        if let Ok(s) = PoissonSection::new(n, poly) {
            return Some(s);
        }
    }
    None
}

/// Rejection-sample until the stability certificate is positive.
pub fn sample_stable_pair<R: Rng>(
    rng: &mut R,
    r: usize,
    n: i64,
    bound: i64,
    max_tries: u64,
) -> Result<(HitchinPair, StabilityCert)> {
    for _ in 0..max_tries {
        let p = sample_pair(rng, r, n, bound);
        let cert = is_stable(&p);
        if cert.is_stable() {
            return Ok((p, cert));
        }
    }
    Err(Error::SamplingExhausted(max_tries))
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

/// On-disk form of a pair with its Poisson section. All coefficients are
/// decimal strings of exact rationals ("3/2"); theta\[i\]\[j\] lists the
/// coefficients of z^0, z^1, ... of entry (i, j).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairFile {
    pub splitting: Vec<i64>,
    pub n: i64,
    pub theta: Vec<Vec<Vec<String>>>,
    pub sigma0: Vec<String>,
}

impl PairFile {
    pub fn from_parts(pair: &HitchinPair, sigma0: &PoissonSection) -> Self {
        let r = pair.rank();
        let theta = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let e = pair.theta().entry(i, j);
                        let hi = e.degree().unwrap_or(-1);
                        (0..=hi).map(|k| format_rat(&e.coeff(k))).collect()
                    })
                    .collect()
            })
            .collect();
        PairFile {
            splitting: pair.bundle().degrees().to_vec(),
            n: pair.n(),
            theta,
            sigma0: sigma0.coeffs().iter().map(format_rat).collect(),
        }
    }

    pub fn into_parts(&self) -> Result<(HitchinPair, PoissonSection)> {
        let bundle = BundleP1::new(self.splitting.clone())?;
        let r = bundle.rank();
        if self.theta.len() != r || self.theta.iter().any(|row| row.len() != r) {
            return Err(Error::Invalid("theta matrix shape mismatch".into()));
        }
        let mut entries = vec![vec![LaurentPoly::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let coeffs: Result<Vec<Rat>> =
                    self.theta[i][j].iter().map(|s| parse_rat(s)).collect();
                entries[i][j] = LaurentPoly::from_pairs(
                    coeffs?
                        .into_iter()
                        .enumerate()
                        .map(|(e, c)| (e as i64, c)),
                );
            }
        }
        let theta = TwistedEndo::new(&bundle, self.n, entries)?;
        let pair = HitchinPair::new(bundle, theta)?;
        let sigma_coeffs: Result<Vec<Rat>> = self.sigma0.iter().map(|s| parse_rat(s)).collect();
        let sigma0 = PoissonSection::from_coeffs(self.n, &sigma_coeffs?)?;
        Ok((pair, sigma0))
    }
}

// ---------------------------------------------------------------------------
