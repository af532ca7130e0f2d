//! Two-term complexes of split bundles and their Cech hypercohomology.
//!
//! A complex `A0 -> A1` is stored as splitting types plus the chart-0
//! matrix of the differential. Chart-1 data never needs its own matrix:
//! transition is multiplicative, so applying the chart-0 entries to z-form
//! sections computes the chart-1 action as well.
//!
//! Degree-1 hypercochains are triples `(a, b0, b1)`: an overlap 1-cochain
//! valued in A0 and per-chart 0-cochains valued in A1 (chart 1 kept in
//! z-form, exponents bounded by the summand degree). The sign conventions,
//! fixed once and validated by the representative-independence tests:
//!
//! * Cech differential   delta(c) = c1|_overlap - c0,
//! * total differential  D(c) = (delta c, d c),
//! * cocycle condition   d(a) = delta(b).
//!
//! The degree-1 basis comes from the long exact sequence
//! `0 -> H^0(A0) -> H^0(A1) -> HH^1 -> H^1(A0) -> H^1(A1) -> 0` read off
//! cokernel and kernel pieces, each realized as a concrete cochain. Classes
//! of arbitrary cocycles are recovered by one exact linear solve against
//! the basis plus a window of coboundary generators; the window is a solve
//! parameter only — the basis itself never depends on it.

use num_traits::Zero;
use rand::Rng;

use crate::exact::{
    kernel_basis, quotient_basis, rat, solve_many, LaurentPoly, Rat, RatMatrix,
};
use crate::hitchin::{BundleP1, HitchinPair, TwistedEndo};
use crate::p1sheaf;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Complexes
// ---------------------------------------------------------------------------

/// A two-term complex of split bundles on the line, concentrated in
/// degrees 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    a0: Vec<i64>,
    a1: Vec<i64>,
    d: Vec<Vec<LaurentPoly>>, // |a1| x |a0|
}

impl TwoTermComplex {
    pub fn new(a0: Vec<i64>, a1: Vec<i64>, d: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        if d.len() != a1.len() || d.iter().any(|row| row.len() != a0.len()) {
            return Err(Error::Invalid("differential matrix shape mismatch".into()));
        }
        for (i, row) in d.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                let bound = a1[i] - a0[j];
                let ok = if bound < 0 {
                    p.is_zero()
                } else {
                    p.is_polynomial() && p.degree().map_or(true, |dg| dg <= bound)
                };
                if !ok {
                    return Err(Error::Invalid(format!(
                        "differential entry ({i},{j}) = {p} is not a section of O({bound})"
                    )));
                }
            }
        }
        Ok(TwoTermComplex { a0, a1, d })
    }

    pub fn a0_degrees(&self) -> &[i64] {
        &self.a0
    }

    pub fn a1_degrees(&self) -> &[i64] {
        &self.a1
    }

    pub fn differential(&self) -> &Vec<Vec<LaurentPoly>> {
        &self.d
    }

    pub fn chi(&self) -> i64 {
        let c0: i64 = self.a0.iter().map(|d| d + 1).sum();
        let c1: i64 = self.a1.iter().map(|d| d + 1).sum();
        c0 - c1
    }

    fn max_abs_degree(&self) -> i64 {
        self.a0
            .iter()
            .chain(self.a1.iter())
            .map(|d| d.abs())
            .max()
            .unwrap_or(0)
    }

    /// Apply the differential to an A0-valued component vector (any of the
    /// three cochain parts; transition commutes with the chart-0 matrix).
    pub fn apply(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        assert_eq!(v.len(), self.a0.len());
        self.d
            .iter()
            .map(|row| {
                let mut acc = LaurentPoly::zero();
                for (entry, comp) in row.iter().zip(v) {
                    if !entry.is_zero() && !comp.is_zero() {
                        acc = &acc + &(entry * comp);
                    }
                }
                acc
            })
            .collect()
    }
}

/// A degree-1 hypercochain: overlap part valued in A0, per-chart parts
/// valued in A1 (chart 1 in z-form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperCochain {
    pub overlap: Vec<LaurentPoly>,
    pub chart0: Vec<LaurentPoly>,
    pub chart1: Vec<LaurentPoly>,
}

impl HyperCochain {
    pub fn zero(c: &TwoTermComplex) -> Self {
        HyperCochain {
            overlap: vec![LaurentPoly::zero(); c.a0.len()],
            chart0: vec![LaurentPoly::zero(); c.a1.len()],
            chart1: vec![LaurentPoly::zero(); c.a1.len()],
        }
    }

    pub fn add(&self, rhs: &HyperCochain) -> HyperCochain {
        let zip = |x: &[LaurentPoly], y: &[LaurentPoly]| {
            x.iter().zip(y).map(|(a, b)| a + b).collect()
        };
        HyperCochain {
            overlap: zip(&self.overlap, &rhs.overlap),
            chart0: zip(&self.chart0, &rhs.chart0),
            chart1: zip(&self.chart1, &rhs.chart1),
        }
    }

    pub fn scale(&self, c: &Rat) -> HyperCochain {
        let s = |x: &[LaurentPoly]| x.iter().map(|p| p.scale(c)).collect();
        HyperCochain {
            overlap: s(&self.overlap),
            chart0: s(&self.chart0),
            chart1: s(&self.chart1),
        }
    }

    /// Multiply every component by a fixed global section (z-form).
    pub fn mul_section(&self, s: &LaurentPoly) -> HyperCochain {
        let m = |x: &[LaurentPoly]| x.iter().map(|p| p * s).collect();
        HyperCochain {
            overlap: m(&self.overlap),
            chart0: m(&self.chart0),
            chart1: m(&self.chart1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.overlap.iter().all(LaurentPoly::is_zero)
            && self.chart0.iter().all(LaurentPoly::is_zero)
            && self.chart1.iter().all(LaurentPoly::is_zero)
    }
}

/// A 0-cochain valued in A0: per-chart sections, chart 1 in z-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCochain {
    pub chart0: Vec<LaurentPoly>,
    pub chart1: Vec<LaurentPoly>,
}

impl TwoTermComplex {
    /// Is the triple a valid cochain for this complex (chart windows)?
    pub fn valid_cochain(&self, c: &HyperCochain) -> bool {
        c.overlap.len() == self.a0.len()
            && c.chart0.len() == self.a1.len()
            && c.chart1.len() == self.a1.len()
            && c.chart0.iter().all(p1sheaf::valid_chart0)
            && c
                .chart1
                .iter()
                .zip(&self.a1)
                .all(|(p, &d)| p1sheaf::valid_chart1(p, d))
    }

    /// Cocycle condition: d(a) = b1 - b0 on the overlap.
    pub fn is_cocycle(&self, c: &HyperCochain) -> bool {
        let da = self.apply(&c.overlap);
        da.iter()
            .zip(c.chart1.iter().zip(&c.chart0))
            .all(|(lhs, (b1, b0))| lhs == &(b1 - b0))
    }

    /// Total differential of a 0-cochain: (delta c, d c).
    pub fn coboundary(&self, c: &ZeroCochain) -> HyperCochain {
        let overlap: Vec<LaurentPoly> = c
            .chart1
            .iter()
            .zip(&c.chart0)
            .map(|(c1, c0)| c1 - c0)
            .collect();
        HyperCochain {
            overlap,
            chart0: self.apply(&c.chart0),
            chart1: self.apply(&c.chart1),
        }
    }
}

// ---------------------------------------------------------------------------
// Hypercohomology
// ---------------------------------------------------------------------------

/// The degree-(0..2) hypercohomology of a two-term complex, with a concrete
/// cochain basis in degree one.
///
/// Alongside the cochains, the basis keeps the long-exact-sequence data
/// that produced them: the monomial coordinates of the two segments and the
/// matrices of the induced maps on H^0 and H^1. Reduction of an arbitrary
/// cocycle runs through this description and needs no degree window.
#[derive(Clone, Debug)]
pub struct HyperBasis {
    complex: TwoTermComplex,
    h0_dim: usize,
    h2_dim: usize,
    coker_count: usize,
    classes: Vec<HyperCochain>,
    /// H^1(A0) coordinates of the kernel-segment classes, as columns.
    ker_matrix: RatMatrix,
    /// `[coker representatives | image of H^0(A0)]` in H^0(A1) coordinates.
    quot_matrix: RatMatrix,
}

/// Monomial coordinates of H^0 of a split bundle: (summand, exponent).
fn h0_coords(degs: &[i64]) -> Vec<(usize, i64)> {
    degs.iter()
        .enumerate()
        .flat_map(|(j, &d)| (0..=d).map(move |e| (j, e)))
        .collect()
}

/// Monomial coordinates of H^1 of a split bundle: (summand, exponent) over
/// the windows [d+1, -1].
fn h1_coords(degs: &[i64]) -> Vec<(usize, i64)> {
    degs.iter()
        .enumerate()
        .flat_map(|(j, &d)| (d + 1..=-1).map(move |e| (j, e)))
        .collect()
}

/// Compute the degree-1 basis through the long exact sequence. The basis
/// order is: cokernel segment first (global 0-cochains), then kernel-lift
/// segment (overlap cochains), each in (summand, exponent) order.
pub fn hyper_h1_basis(complex: &TwoTermComplex) -> HyperBasis {
    let a0 = complex.a0_degrees().to_vec();
    let a1 = complex.a1_degrees().to_vec();

    // H^0(A0) -> H^0(A1)
    let dom0 = h0_coords(&a0);
    let cod0 = h0_coords(&a1);
    let cod0_index: std::collections::BTreeMap<(usize, i64), usize> = cod0
        .iter()
        .enumerate()
        .map(|(k, &(j, e))| ((j, e), k))
        .collect();
    let mut m0 = RatMatrix::zero(cod0.len(), dom0.len());
    for (col, &(j, e)) in dom0.iter().enumerate() {
        for (i, row) in complex.d.iter().enumerate() {
            for (de, dc) in row[j].terms() {
                let key = (i, de + e);
                let k = cod0_index
                    .get(&key)
                    .copied()
                    .unwrap_or_else(|| panic!("image escapes H0(A1): summand {i} exp {}", de + e));
                let v = m0.get(k, col) + dc;
                m0.set(k, col, v);
            }
        }
    }
    let h0_dim = kernel_basis(&m0).len();
    let image_cols: Vec<Vec<Rat>> = (0..dom0.len()).map(|c| m0.col(c)).collect();
    let coker_reps = quotient_basis(cod0.len(), &image_cols);

    let mut classes = Vec::new();
    for rep in &coker_reps {
        // rep is a standard basis vector in H^0(A1) coordinates
        let mut b = vec![LaurentPoly::zero(); a1.len()];
        for (k, coeff) in rep.iter().enumerate() {
            if !coeff.is_zero() {
                let (i, e) = cod0[k];
                b[i].add_term(e, coeff.clone());
            }
        }
        classes.push(HyperCochain {
            overlap: vec![LaurentPoly::zero(); a0.len()],
            chart0: b.clone(),
            chart1: b,
        });
    }
    let coker_count = classes.len();

    // H^1(A0) -> H^1(A1)
    let dom1 = h1_coords(&a0);
    let cod1 = h1_coords(&a1);
    let cod1_index: std::collections::BTreeMap<(usize, i64), usize> = cod1
        .iter()
        .enumerate()
        .map(|(k, &(j, e))| ((j, e), k))
        .collect();
    let mut m1 = RatMatrix::zero(cod1.len(), dom1.len());
    for (col, &(j, e)) in dom1.iter().enumerate() {
        for (i, row) in complex.d.iter().enumerate() {
            for (de, dc) in row[j].terms() {
                // project onto the H^1 window of summand i
                if let Some(&k) = cod1_index.get(&(i, de + e)) {
                    let v = m1.get(k, col) + dc;
                    m1.set(k, col, v);
                }
            }
        }
    }
    let ker_vectors = kernel_basis(&m1);
    for kv in &ker_vectors {
        let mut a = vec![LaurentPoly::zero(); a0.len()];
        for (col, coeff) in kv.iter().enumerate() {
            if !coeff.is_zero() {
                let (j, e) = dom1[col];
                a[j].add_term(e, coeff.clone());
            }
        }
        let da = complex.apply(&a);
        let mut chart0 = Vec::with_capacity(a1.len());
        let mut chart1 = Vec::with_capacity(a1.len());
        for (i, t) in da.iter().enumerate() {
            let (c0, c1) = p1sheaf::split_coboundary(t, a1[i])
                .expect("kernel image must have vanishing class");
            chart0.push(c0);
            chart1.push(c1);
        }
        classes.push(HyperCochain {
            overlap: a,
            chart0,
            chart1,
        });
    }
    let h2_dim = cod1.len() - m1.rank();

    let mut ker_matrix = RatMatrix::zero(dom1.len(), ker_vectors.len());
    for (c, v) in ker_vectors.iter().enumerate() {
        for (r, val) in v.iter().enumerate() {
            ker_matrix.set(r, c, val.clone());
        }
    }
    let mut coker_block = RatMatrix::zero(cod0.len(), coker_reps.len());
    for (c, v) in coker_reps.iter().enumerate() {
        for (r, val) in v.iter().enumerate() {
            coker_block.set(r, c, val.clone());
        }
    }
    let quot_matrix = coker_block.hstack(&m0);

    let basis = HyperBasis {
        complex: complex.clone(),
        h0_dim,
        h2_dim,
        coker_count,
        classes,
        ker_matrix,
        quot_matrix,
    };
    // exactness audit: Euler characteristic and the cocycle condition
    debug_assert!(basis
        .classes
        .iter()
        .all(|c| complex.valid_cochain(c) && complex.is_cocycle(c)));
    assert_eq!(
        basis.h0_dim as i64 - basis.classes.len() as i64 + basis.h2_dim as i64,
        complex.chi(),
        "long exact sequence out of balance"
    );
    basis
}

/// Kernel of H^0(A0) -> H^0(A1).
pub fn hyper_h0_dim(complex: &TwoTermComplex) -> usize {
    hyper_h1_basis(complex).h0_dim
}

/// Cokernel of H^1(A0) -> H^1(A1).
pub fn hyper_h2_dim(complex: &TwoTermComplex) -> usize {
    hyper_h1_basis(complex).h2_dim
}

impl HyperBasis {
    pub fn complex(&self) -> &TwoTermComplex {
        &self.complex
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.h0_dim, self.classes.len(), self.h2_dim)
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// How many leading basis classes come from the cokernel segment.
    pub fn coker_count(&self) -> usize {
        self.coker_count
    }

    pub fn classes(&self) -> &[HyperCochain] {
        &self.classes
    }

    /// Linear combination of basis classes with the given coordinates.
    pub fn combination(&self, coords: &[Rat]) -> HyperCochain {
        assert_eq!(coords.len(), self.classes.len());
        let mut acc = HyperCochain::zero(&self.complex);
        for (c, class) in coords.iter().zip(&self.classes) {
            if !c.is_zero() {
                acc = acc.add(&class.scale(c));
            }
        }
        acc
    }

    /// Express cocycles in basis coordinates through the long-exact-sequence
    /// description; exact and window-free.
    ///
    /// The kernel-segment coordinates are the H^1(A0) class of the overlap
    /// part; the residual overlap then splits canonically as a Cech
    /// coboundary, and what remains of the chart parts is a global section
    /// of A1 reduced in the cokernel segment.
    pub fn reduce_many(&self, targets: &[HyperCochain]) -> Result<Vec<Vec<Rat>>> {
        for t in targets {
            if !self.complex.valid_cochain(t) || !self.complex.is_cocycle(t) {
                return Err(Error::NoSolution("target is not a cocycle"));
            }
        }
        let a0 = self.complex.a0_degrees();
        let a1 = self.complex.a1_degrees();
        let dom1 = h1_coords(a0);
        let cod0 = h0_coords(a1);
        let ker_count = self.classes.len() - self.coker_count;

        // kernel-segment coordinates from the H^1(A0) class
        let h1_proj: Vec<Vec<Rat>> = targets
            .iter()
            .map(|t| dom1.iter().map(|&(j, e)| t.overlap[j].coeff(e)).collect())
            .collect();
        let ker_sols = solve_many(&self.ker_matrix, &h1_proj);

        let mut quot_targets = Vec::with_capacity(targets.len());
        let mut ker_coords = Vec::with_capacity(targets.len());
        for (t, sol) in targets.iter().zip(ker_sols) {
            let x = sol.ok_or(Error::NoSolution(
                "overlap class escapes the kernel segment",
            ))?;
            // subtract the kernel-segment combination
            let mut residual = t.clone();
            for (l, coeff) in x.iter().enumerate() {
                if !coeff.is_zero() {
                    let class = &self.classes[self.coker_count + l];
                    residual = residual.add(&class.scale(&-coeff.clone()));
                }
            }
            // split the residual overlap part as a coboundary
            let mut c = ZeroCochain {
                chart0: Vec::with_capacity(a0.len()),
                chart1: Vec::with_capacity(a0.len()),
            };
            for (j, sec) in residual.overlap.iter().enumerate() {
                let (c0, c1) = p1sheaf::split_coboundary(sec, a0[j]).ok_or(
                    Error::NoSolution("residual overlap class does not vanish"),
                )?;
                c.chart0.push(c0);
                c.chart1.push(c1);
            }
            let boundary = self.complex.coboundary(&c);
            let rest = residual.add(&boundary.scale(&-rat(1)));
            // what remains is a global section of A1
            debug_assert!(rest.overlap.iter().all(LaurentPoly::is_zero));
            if rest.chart0 != rest.chart1 {
                return Err(Error::NoSolution("residual is not a global section"));
            }
            quot_targets.push(
                cod0.iter()
                    .map(|&(i, e)| rest.chart0[i].coeff(e))
                    .collect::<Vec<Rat>>(),
            );
            ker_coords.push(x);
        }

        let quot_sols = solve_many(&self.quot_matrix, &quot_targets);
        let mut out = Vec::with_capacity(targets.len());
        for (x, sol) in ker_coords.into_iter().zip(quot_sols) {
            let yw = sol.ok_or(Error::NoSolution(
                "global residual escapes the cokernel segment",
            ))?;
            let mut coords = yw[..self.coker_count].to_vec();
            coords.extend(x);
            debug_assert_eq!(coords.len(), self.coker_count + ker_count);
            out.push(coords);
        }
        Ok(out)
    }

    pub fn reduce(&self, target: &HyperCochain) -> Result<Vec<Rat>> {
        Ok(self.reduce_many(std::slice::from_ref(target))?.pop().unwrap())
    }

    /// Independent reduction route: solve `target = sum x_k class_k + D(c)`
    /// directly, with the 0-cochain `c` drawn from a bounded degree window.
    ///
    /// `margin` widens the window beyond the summand degrees; callers pass
    /// at least the degree shift of whatever map produced the targets (for
    /// the Poisson maps, n + 2) plus any extra stabilization margin under
    /// test. Used to cross-validate [`Self::reduce_many`], which needs no
    /// window at all.
    pub fn reduce_many_windowed(
        &self,
        targets: &[HyperCochain],
        margin: i64,
    ) -> Result<Vec<Vec<Rat>>> {
        for t in targets {
            if !self.complex.valid_cochain(t) || !self.complex.is_cocycle(t) {
                return Err(Error::NoSolution("target is not a cocycle"));
            }
        }
        let w = self.complex.max_abs_degree() + margin.max(0) + 2;
        let a0 = self.complex.a0_degrees();

        // coboundary generators: chart-0 monomials z^0..z^w and chart-1
        // monomials of w-degree 0..w per A0 summand
        let mut columns: Vec<HyperCochain> = Vec::new();
        for k in 0..self.classes.len() {
            columns.push(self.classes[k].clone());
        }
        let gen_count_start = columns.len();
        for (j, &dj) in a0.iter().enumerate() {
            for e in 0..=w {
                let mut c = ZeroCochain {
                    chart0: vec![LaurentPoly::zero(); a0.len()],
                    chart1: vec![LaurentPoly::zero(); a0.len()],
                };
                c.chart0[j] = LaurentPoly::monomial(e, rat(1));
                columns.push(self.complex.coboundary(&c));
                let mut c = ZeroCochain {
                    chart0: vec![LaurentPoly::zero(); a0.len()],
                    chart1: vec![LaurentPoly::zero(); a0.len()],
                };
                c.chart1[j] = LaurentPoly::monomial(dj - e, rat(1));
                columns.push(self.complex.coboundary(&c));
            }
        }
        let _ = gen_count_start;

        // dynamic coordinate collection over all columns and targets
        #[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
        enum Part {
            Ov(usize),
            C0(usize),
            C1(usize),
        }
        let mut coord_index: std::collections::BTreeMap<(Part, i64), usize> =
            std::collections::BTreeMap::new();
        {
            let mut collect = |c: &HyperCochain| {
                for (j, p) in c.overlap.iter().enumerate() {
                    for (e, _) in p.terms() {
                        let next = coord_index.len();
                        coord_index.entry((Part::Ov(j), e)).or_insert(next);
                    }
                }
                for (i, p) in c.chart0.iter().enumerate() {
                    for (e, _) in p.terms() {
                        let next = coord_index.len();
                        coord_index.entry((Part::C0(i), e)).or_insert(next);
                    }
                }
                for (i, p) in c.chart1.iter().enumerate() {
                    for (e, _) in p.terms() {
                        let next = coord_index.len();
                        coord_index.entry((Part::C1(i), e)).or_insert(next);
                    }
                }
            };
            for c in &columns {
                collect(c);
            }
            for t in targets {
                collect(t);
            }
        }
        let rows = coord_index.len();
        let embed = |c: &HyperCochain| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); rows];
            for (j, p) in c.overlap.iter().enumerate() {
                for (e, coeff) in p.terms() {
                    v[coord_index[&(Part::Ov(j), e)]] = coeff.clone();
                }
            }
            for (i, p) in c.chart0.iter().enumerate() {
                for (e, coeff) in p.terms() {
                    v[coord_index[&(Part::C0(i), e)]] = coeff.clone();
                }
            }
            for (i, p) in c.chart1.iter().enumerate() {
                for (e, coeff) in p.terms() {
                    v[coord_index[&(Part::C1(i), e)]] = coeff.clone();
                }
            }
            v
        };

        let mat = RatMatrix::from_cols(columns.iter().map(embed).collect());
        let rhs: Vec<Vec<Rat>> = targets.iter().map(embed).collect();
        let sols = solve_many(&mat, &rhs);
        let mut out = Vec::with_capacity(targets.len());
        for s in sols {
            let Some(x) = s else {
                return Err(Error::WindowInstability(format!(
                    "class does not reduce within coboundary window {w}"
                )));
            };
            out.push(x[..self.classes.len()].to_vec());
        }
        Ok(out)
    }
}

/// A random 0-cochain's coboundary, for perturbation tests.
pub fn random_coboundary<R: Rng>(
    complex: &TwoTermComplex,
    rng: &mut R,
    span: i64,
) -> HyperCochain {
    let a0 = complex.a0_degrees();
    let c = ZeroCochain {
        chart0: a0
            .iter()
            .map(|_| {
                LaurentPoly::from_pairs((0..=span).map(|e| (e, rat(rng.gen_range(-3..=3)))))
            })
            .collect(),
        chart1: a0
            .iter()
            .map(|&dj| {
                LaurentPoly::from_pairs(
                    (0..=span).map(|e| (dj - e, rat(rng.gen_range(-3..=3)))),
                )
            })
            .collect(),
    };
    complex.coboundary(&c)
}

// ---------------------------------------------------------------------------
// Hom-shaped complexes
// ---------------------------------------------------------------------------

/// How Hom(E, P) components are flattened into summand indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexOrder {
    /// (target, source) lexicographic — the endomorphism-complex layout.
    TargetSource,
    /// (source, target) lexicographic — the resolution-complex layout.
    SourceTarget,
}

/// A two-term complex whose terms are Hom(E, P(t)) and Hom(E, P(t)) x O(n),
/// remembering the bundle shape so cochains can be reshaped into matrices.
#[derive(Clone, Debug)]
pub struct HomComplex {
    source: BundleP1,
    target: BundleP1,
    twist: i64,
    n: i64,
    order: IndexOrder,
    complex: TwoTermComplex,
}

impl HomComplex {
    pub fn complex(&self) -> &TwoTermComplex {
        &self.complex
    }

    pub fn source(&self) -> &BundleP1 {
        &self.source
    }

    pub fn target(&self) -> &BundleP1 {
        &self.target
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn order(&self) -> IndexOrder {
        self.order
    }

    /// Flat index of the component mapping source summand `m` to target
    /// summand `u`.
    pub fn flat(&self, u: usize, m: usize) -> usize {
        match self.order {
            IndexOrder::TargetSource => u * self.source.rank() + m,
            IndexOrder::SourceTarget => m * self.target.rank() + u,
        }
    }

    /// Reshape a flat component vector into the (target x source) matrix.
    pub fn reshape(&self, flat: &[LaurentPoly]) -> Vec<Vec<LaurentPoly>> {
        let (tr, sr) = (self.target.rank(), self.source.rank());
        assert_eq!(flat.len(), tr * sr);
        (0..tr)
            .map(|u| (0..sr).map(|m| flat[self.flat(u, m)].clone()).collect())
            .collect()
    }

    fn hom_degrees(&self) -> (Vec<i64>, Vec<i64>) {
        let (tr, sr) = (self.target.rank(), self.source.rank());
        let size = tr * sr;
        let mut a0 = vec![0i64; size];
        let mut a1 = vec![0i64; size];
        for u in 0..tr {
            for m in 0..sr {
                let k = self.flat(u, m);
                a0[k] = self.target.summand(u) + self.twist - self.source.summand(m);
                a1[k] = a0[k] + self.n;
            }
        }
        (a0, a1)
    }
}

/// The endomorphism complex of a pair, twisted by O(t):
/// `End(E)(t) -> End(E)(t) x O(n)` with the commutator differential
/// `phi -> phi theta - theta phi`, in (target, source) layout.
///
/// Twist 0 is the tangent complex of the pair; twist -(n+2) is its Serre
/// dual, the cotangent complex.
pub fn end_complex(p: &HitchinPair, twist: i64) -> HomComplex {
    let r = p.rank();
    let mut hc = HomComplex {
        source: p.bundle().clone(),
        target: p.bundle().clone(),
        twist,
        n: p.n(),
        order: IndexOrder::TargetSource,
        complex: TwoTermComplex {
            a0: vec![],
            a1: vec![],
            d: vec![],
        },
    };
    let (a0, a1) = hc.hom_degrees();
    let size = r * r;
    let mut d = vec![vec![LaurentPoly::zero(); size]; size];
    for i in 0..r {
        for j in 0..r {
            let row = hc.flat(i, j);
            // [phi, theta]_{ij} = sum_l phi_{il} theta_{lj} - sum_k theta_{ik} phi_{kj}
            for l in 0..r {
                let col = hc.flat(i, l);
                d[row][col] = &d[row][col] + p.theta().entry(l, j);
            }
            for k in 0..r {
                let col = hc.flat(k, j);
                d[row][col] = &d[row][col] - p.theta().entry(i, k);
            }
        }
    }
    hc.complex = TwoTermComplex::new(a0, a1, d).expect("bracket differential is well-formed");
    hc
}

/// Pushforward data of a coefficient sheaf: bundle `P = p_* W`, twisted
/// endomorphism `psi = p_* x`, and a line-bundle twist O(t).
#[derive(Clone, Debug)]
pub struct PushforwardData {
    pub bundle: BundleP1,
    pub psi: TwistedEndo,
    pub twist: i64,
}

impl PushforwardData {
    /// W = L itself: the sheaf of the pair, no extra twist.
    pub fn sheaf(p: &HitchinPair) -> Self {
        PushforwardData {
            bundle: p.bundle().clone(),
            psi: p.theta().clone(),
            twist: 0,
        }
    }

    /// W = L x K_S: the canonical twist pulls back to O(-n-2).
    pub fn sheaf_canonical(p: &HitchinPair) -> Self {
        PushforwardData {
            bundle: p.bundle().clone(),
            psi: p.theta().clone(),
            twist: -p.n() - 2,
        }
    }
}

/// The resolution complex computing Ext^1(L, W) downstairs:
/// `Hom(E, P(t)) -> Hom(E, P(t)) x O(n)` with differential
/// `g -> (g pre theta) - (psi post g)`, in (source, target) layout.
///
/// For W = L this is the endomorphism complex again, up to the layout
/// permutation — which is exactly the content of the tangent-side
/// identification.
pub fn phi_w_complex(p: &HitchinPair, w: &PushforwardData) -> HomComplex {
    let sr = p.rank();
    let tr = w.bundle.rank();
    assert_eq!(w.psi.n(), p.n(), "coefficient data must share the twist degree");
    let mut hc = HomComplex {
        source: p.bundle().clone(),
        target: w.bundle.clone(),
        twist: w.twist,
        n: p.n(),
        order: IndexOrder::SourceTarget,
        complex: TwoTermComplex {
            a0: vec![],
            a1: vec![],
            d: vec![],
        },
    };
    let (a0, a1) = hc.hom_degrees();
    let size = sr * tr;
    let mut d = vec![vec![LaurentPoly::zero(); size]; size];
    // precomposition with theta: (g theta)_{um} = sum_k g_{uk} theta_{km}
    for u in 0..tr {
        for m in 0..sr {
            let row = hc.flat(u, m);
            for k in 0..sr {
                let col = hc.flat(u, k);
                d[row][col] = &d[row][col] + p.theta().entry(k, m);
            }
        }
    }
    // postcomposition with psi: (psi g)_{um} = sum_v psi_{uv} g_{vm}
    for u in 0..tr {
        for m in 0..sr {
            let row = hc.flat(u, m);
            for v in 0..tr {
                let col = hc.flat(v, m);
                d[row][col] = &d[row][col] - w.psi.entry(u, v);
            }
        }
    }
    hc.complex = TwoTermComplex::new(a0, a1, d).expect("resolution differential is well-formed");
    hc
}

// ---------------------------------------------------------------------------
// Serre pairing
// ---------------------------------------------------------------------------

/// Residue-trace Serre pairing between a class of the cotangent-type complex
/// (twist -(n+2)) and a class of the tangent-type complex (twist 0) with the
/// same bundle shape:
///
/// `<xi, v> = Res tr(a_xi . b_v|_1) - Res tr(b_xi|_0 . a_v)`
///
/// with all products taken in z-form on the overlap. The relative sign is
/// forced by representative independence; the chart choices match the
/// delta convention.
pub fn serre_pairing(
    cot: &HomComplex,
    tan: &HomComplex,
    xi: &HyperCochain,
    v: &HyperCochain,
) -> Rat {
    assert_eq!(cot.source(), tan.source(), "pairing needs matching shapes");
    assert_eq!(cot.target(), tan.target(), "pairing needs matching shapes");
    assert_eq!(cot.n(), tan.n());
    assert_eq!(tan.twist(), 0, "pairing is defined against the tangent complex");
    assert_eq!(cot.twist(), -tan.n() - 2, "cotangent twist must be -(n+2)");

    let trace_product = |x: &Vec<Vec<LaurentPoly>>, y: &Vec<Vec<LaurentPoly>>| {
        let tr_rank = x.len();
        let src_rank = x.first().map_or(0, Vec::len);
        let mut acc = LaurentPoly::zero();
        // tr(x y): x maps E -> E(s), y maps E -> E(t); sum over diagonal
        for u in 0..tr_rank {
            for k in 0..src_rank {
                if !x[u][k].is_zero() && !y[k][u].is_zero() {
                    acc = &acc + &(&x[u][k] * &y[k][u]);
                }
            }
        }
        acc
    };

    let t1 = trace_product(&cot.reshape(&xi.overlap), &tan.reshape(&v.chart1));
    let t2 = trace_product(&cot.reshape(&xi.chart0), &tan.reshape(&v.overlap));
    p1sheaf::residue(&(&t1 - &t2))
}

/// The full pairing matrix, rows indexed by the cotangent basis and columns
/// by the tangent basis.
pub fn serre_pairing_matrix(
    cot: &HomComplex,
    tan: &HomComplex,
    cot_basis: &HyperBasis,
    tan_basis: &HyperBasis,
) -> RatMatrix {
    let mut m = RatMatrix::zero(cot_basis.dim(), tan_basis.dim());
    for (i, xi) in cot_basis.classes().iter().enumerate() {
        for (j, v) in tan_basis.classes().iter().enumerate() {
            m.set(i, j, serre_pairing(cot, tan, xi, v));
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Induced maps on hypercohomology
// ---------------------------------------------------------------------------

/// Matrix of a cochain-level map between complexes, in the given bases.
/// The image of each basis class must be a cocycle of the target complex;
/// columns are its coordinates there.
pub fn induced_matrix(
    from: &HyperBasis,
    to: &HyperBasis,
    f: impl Fn(&HyperCochain) -> HyperCochain,
) -> Result<RatMatrix> {
    let images: Vec<HyperCochain> = from.classes().iter().map(f).collect();
    for img in &images {
        if !to.complex().valid_cochain(img) || !to.complex().is_cocycle(img) {
            return Err(Error::NoSolution("induced image is not a cocycle"));
        }
    }
    let coords = to.reduce_many(&images)?;
    if from.dim() == 0 {
        return Ok(RatMatrix::zero(to.dim(), 0));
    }
    Ok(RatMatrix::from_cols(coords))
}

/// Same matrix through the windowed coboundary solver; agreement with
/// [`induced_matrix`] certifies the window is wide enough.
pub fn induced_matrix_windowed(
    from: &HyperBasis,
    to: &HyperBasis,
    margin: i64,
    f: impl Fn(&HyperCochain) -> HyperCochain,
) -> Result<RatMatrix> {
    let images: Vec<HyperCochain> = from.classes().iter().map(f).collect();
    let coords = to.reduce_many_windowed(&images, margin)?;
    if from.dim() == 0 {
        return Ok(RatMatrix::zero(to.dim(), 0));
    }
    Ok(RatMatrix::from_cols(coords))
}

/// Matrix on HH^1 induced by a morphism of coefficient sheaves, given as a
/// matrix of sections `map : P -> P'` commuting with the two endomorphisms
/// (postcomposition on resolution complexes).
///
/// `map[u'][u]` is a section of `O(p'_{u'} + t' - p_u - t)`.
pub fn functoriality_map(
    from: &HomComplex,
    to: &HomComplex,
    from_basis: &HyperBasis,
    to_basis: &HyperBasis,
    map: &[Vec<LaurentPoly>],
    psi_from: &TwistedEndo,
    psi_to: &TwistedEndo,
) -> Result<RatMatrix> {
    assert_eq!(from.source(), to.source());
    let tr_from = from.target().rank();
    let tr_to = to.target().rank();
    if map.len() != tr_to || map.iter().any(|row| row.len() != tr_from) {
        return Err(Error::Invalid("coefficient morphism has wrong shape".into()));
    }
    // the morphism must intertwine the twisted endomorphisms: map psi = psi' map
    for u in 0..tr_to {
        for m in 0..tr_from {
            let mut lhs = LaurentPoly::zero();
            for k in 0..tr_from {
                lhs = &lhs + &(&map[u][k] * psi_from.entry(k, m));
            }
            let mut rhs = LaurentPoly::zero();
            for k in 0..tr_to {
                rhs = &rhs + &(psi_to.entry(u, k) * &map[k][m]);
            }
            if lhs != rhs {
                return Err(Error::NonCommutingMorphism);
            }
        }
    }
    let sr = from.source().rank();
    let post = |c: &HyperCochain| -> HyperCochain {
        let apply = |flat: &[LaurentPoly]| -> Vec<LaurentPoly> {
            let g = from.reshape(flat);
            let mut out = vec![LaurentPoly::zero(); tr_to * sr];
            for u in 0..tr_to {
                for m in 0..sr {
                    let mut acc = LaurentPoly::zero();
                    for k in 0..tr_from {
                        if !map[u][k].is_zero() && !g[k][m].is_zero() {
                            acc = &acc + &(&map[u][k] * &g[k][m]);
                        }
                    }
                    out[to.flat(u, m)] = acc;
                }
            }
            out
        };
        HyperCochain {
            overlap: apply(&c.overlap),
            chart0: apply(&c.chart0),
            chart1: apply(&c.chart1),
        }
    };
    induced_matrix(from_basis, to_basis, post)
}

/// Matrix of the layout identification between a resolution complex and an
/// endomorphism complex attached to the same data: the cochain map is the
/// component permutation `(source, target) -> (target, source)`.
pub fn reindex_map(
    from: &HomComplex,
    to: &HomComplex,
    from_basis: &HyperBasis,
    to_basis: &HyperBasis,
) -> Result<RatMatrix> {
    assert_eq!(from.source(), to.source());
    assert_eq!(from.target(), to.target());
    assert_eq!(from.twist(), to.twist());
    let (tr, sr) = (from.target().rank(), from.source().rank());
    let perm = |flat: &[LaurentPoly]| -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(); flat.len()];
        for u in 0..tr {
            for m in 0..sr {
                out[to.flat(u, m)] = flat[from.flat(u, m)].clone();
            }
        }
        out
    };
    induced_matrix(from_basis, to_basis, |c| HyperCochain {
        overlap: perm(&c.overlap),
        chart0: perm(&c.chart0),
        chart1: perm(&c.chart1),
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitchin::{sample_stable_pair, BundleP1, HitchinPair, TwistedEndo};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().map(|&(e, c)| (e, rat(c))))
    }

    fn pair(degs: &[i64], n: i64, entries: Vec<Vec<LaurentPoly>>) -> HitchinPair {
        let b = BundleP1::new(degs.to_vec()).unwrap();
        let t = TwistedEndo::new(&b, n, entries).unwrap();
        HitchinPair::new(b, t).unwrap()
    }

    /// The documented smooth sample: a = (0,0), n = 1, theta = [[0,1],[z,0]].
    fn sqrt_z_pair() -> HitchinPair {
        pair(
            &[0, 0],
            1,
            vec![
                vec![LaurentPoly::zero(), lp(&[(0, 1)])],
                vec![lp(&[(1, 1)]), LaurentPoly::zero()],
            ],
        )
    }

    #[test]
    fn rank_one_dims() {
        // C = [O -> O(n)] with zero differential: dim HH^1 = n + 1
        for n in 1..=3 {
            let c = TwoTermComplex::new(
                vec![0],
                vec![n],
                vec![vec![LaurentPoly::zero()]],
            )
            .unwrap();
            let b = hyper_h1_basis(&c);
            assert_eq!(b.dims(), (1, (n + 1) as usize, 0));
        }
    }

    #[test]
    fn end_complex_dims_of_stable_pair() {
        let p = sqrt_z_pair();
        let b = hyper_h1_basis(end_complex(&p, 0).complex());
        assert_eq!(b.dims(), (1, 5, 0)); // (1, r^2 n + 1, 0)
    }

    #[test]
    fn end_complex_dims_r3_n2() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let (p, _) = sample_stable_pair(&mut rng, 3, 2, 4, 500).unwrap();
        let b = hyper_h1_basis(end_complex(&p, 0).complex());
        assert_eq!(b.dims(), (1, 19, 0));
    }

    #[test]
    fn zero_theta_has_big_h0() {
        let b = BundleP1::new(vec![0, 0]).unwrap();
        let t = TwistedEndo::zero(&b, 1);
        let p = HitchinPair::new(b, t).unwrap();
        let c = end_complex(&p, 0);
        assert_eq!(hyper_h0_dim(c.complex()), 4);
    }

    #[test]
    fn euler_characteristic_identity() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for (r, n) in [(1usize, 2i64), (2, 1), (2, 2), (3, 1)] {
            let p = crate::hitchin::sample_pair(&mut rng, r, n, 4);
            for twist in [0, -n - 2] {
                let c = end_complex(&p, twist);
                let b = hyper_h1_basis(c.complex());
                let (h0, h1, h2) = b.dims();
                assert_eq!(
                    h0 as i64 - h1 as i64 + h2 as i64,
                    c.complex().chi(),
                    "Euler identity failed at r={r}, n={n}, twist={twist}"
                );
            }
        }
    }

    #[test]
    fn reduce_returns_identity_on_basis() {
        let p = sqrt_z_pair();
        let b = hyper_h1_basis(end_complex(&p, 0).complex());
        let coords = b.reduce_many(b.classes()).unwrap();
        for (k, x) in coords.iter().enumerate() {
            for (l, v) in x.iter().enumerate() {
                assert_eq!(*v, rat((k == l) as i64), "basis did not reduce to itself");
            }
        }
    }

    #[test]
    fn reduce_kills_coboundaries() {
        let p = sqrt_z_pair();
        let b = hyper_h1_basis(end_complex(&p, 0).complex());
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for _ in 0..10 {
            let cb = random_coboundary(b.complex(), &mut rng, 3);
            let coords = b.reduce(&cb).unwrap();
            assert!(coords.iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn window_stability_of_reduction() {
        // classes are window-independent; their coordinates must be too
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let (p, _) = sample_stable_pair(&mut rng, 2, 2, 4, 500).unwrap();
        let b = hyper_h1_basis(end_complex(&p, -4).complex());
        let base = b.reduce_many(b.classes()).unwrap();
        for extra in [0, 1, 2] {
            assert_eq!(base, b.reduce_many_windowed(b.classes(), 4 + extra).unwrap());
        }
    }

    #[test]
    fn serre_pairing_rank_one_antidiagonal() {
        // [O -> O(1)] against [O(-3) -> O(-2)], both zero differential:
        // reduces to the residue pairing on the line
        let b = BundleP1::new(vec![0]).unwrap();
        let t = TwistedEndo::zero(&b, 1);
        let p = HitchinPair::new(b, t).unwrap();
        let tan = end_complex(&p, 0);
        let cot = end_complex(&p, -3);
        let tb = hyper_h1_basis(tan.complex());
        let cb = hyper_h1_basis(cot.complex());
        assert_eq!(tb.dim(), 2);
        assert_eq!(cb.dim(), 2);
        let m = serre_pairing_matrix(&cot, &tan, &cb, &tb);
        // cotangent basis: z^{-2}, z^{-1} overlap classes; tangent: 1, z
        let expect = RatMatrix::from_rows(vec![
            vec![rat(0), rat(1)],
            vec![rat(1), rat(0)],
        ]);
        assert_eq!(m, expect);
    }

    #[test]
    fn serre_pairing_invertible_and_representative_independent() {
        let p = sqrt_z_pair();
        let tan = end_complex(&p, 0);
        let cot = end_complex(&p, -3);
        let tb = hyper_h1_basis(tan.complex());
        let cb = hyper_h1_basis(cot.complex());
        let m = serre_pairing_matrix(&cot, &tan, &cb, &tb);
        assert_eq!(cb.dim(), tb.dim());
        assert!(!m.det().is_zero(), "Serre pairing must be nondegenerate");

        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for _ in 0..20 {
            let xi = &cb.classes()[rng.gen_range(0..cb.dim())];
            let v = &tb.classes()[rng.gen_range(0..tb.dim())];
            let base = serre_pairing(&cot, &tan, xi, v);
            let xi2 = xi.add(&random_coboundary(cb.complex(), &mut rng, 3));
            let v2 = v.add(&random_coboundary(tb.complex(), &mut rng, 3));
            assert_eq!(base, serre_pairing(&cot, &tan, &xi2, v));
            assert_eq!(base, serre_pairing(&cot, &tan, xi, &v2));
            assert_eq!(base, serre_pairing(&cot, &tan, &xi2, &v2));
        }
    }

    #[test]
    fn coboundary_pairs_to_zero() {
        let p = sqrt_z_pair();
        let tan = end_complex(&p, 0);
        let cot = end_complex(&p, -3);
        let tb = hyper_h1_basis(tan.complex());
        let cb = hyper_h1_basis(cot.complex());
        let mut rng = ChaCha20Rng::seed_from_u64(27);
        for _ in 0..10 {
            let boundary = random_coboundary(cot.complex(), &mut rng, 3);
            for v in tb.classes() {
                assert!(serre_pairing(&cot, &tan, &boundary, v).is_zero());
            }
            let boundary = random_coboundary(tan.complex(), &mut rng, 3);
            for xi in cb.classes() {
                assert!(serre_pairing(&cot, &tan, xi, &boundary).is_zero());
            }
        }
    }

    #[test]
    fn resolution_complex_matches_end_complex_dims() {
        // phi_W for W = L: same hypercohomology, different layout
        let p = sqrt_z_pair();
        let end = end_complex(&p, 0);
        let res = phi_w_complex(&p, &PushforwardData::sheaf(&p));
        let eb = hyper_h1_basis(end.complex());
        let rb = hyper_h1_basis(res.complex());
        assert_eq!(eb.dims(), rb.dims());
        // the identification is invertible
        let m = reindex_map(&res, &end, &rb, &eb).unwrap();
        assert!(!m.det().is_zero());
    }

    #[test]
    fn rank_one_resolution_differential_vanishes() {
        // r = 1: f_W = theta - theta = 0 for W = L
        let p = pair(&[0], 2, vec![vec![lp(&[(0, 3), (1, 1)])]]);
        let res = phi_w_complex(&p, &PushforwardData::sheaf(&p));
        assert!(res
            .complex()
            .differential()
            .iter()
            .all(|row| row.iter().all(LaurentPoly::is_zero)));
    }

    #[test]
    fn functoriality_identity_and_zero() {
        let p = sqrt_z_pair();
        let res = phi_w_complex(&p, &PushforwardData::sheaf(&p));
        let rb = hyper_h1_basis(res.complex());
        let id_map = vec![
            vec![LaurentPoly::one(), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), LaurentPoly::one()],
        ];
        let m = functoriality_map(
            &res, &res, &rb, &rb, &id_map, p.theta(), p.theta(),
        )
        .unwrap();
        assert_eq!(m, RatMatrix::identity(rb.dim()));
        let zero_map = vec![
            vec![LaurentPoly::zero(), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), LaurentPoly::zero()],
        ];
        let m = functoriality_map(
            &res, &res, &rb, &rb, &zero_map, p.theta(), p.theta(),
        )
        .unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn functoriality_rejects_non_commuting() {
        let p = sqrt_z_pair();
        let res = phi_w_complex(&p, &PushforwardData::sheaf(&p));
        let rb = hyper_h1_basis(res.complex());
        // e11 projector does not commute with the off-diagonal theta
        let proj = vec![
            vec![LaurentPoly::one(), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), LaurentPoly::zero()],
        ];
        let err = functoriality_map(
            &res, &res, &rb, &rb, &proj, p.theta(), p.theta(),
        );
        assert!(matches!(err, Err(Error::NonCommutingMorphism)));
    }

    #[test]
    fn functoriality_is_multiplicative() {
        // scalar multiplications by f and g compose to fg
        let p = sqrt_z_pair();
        let w0 = PushforwardData {
            bundle: p.bundle().clone(),
            psi: p.theta().clone(),
            twist: -2,
        };
        let w1 = PushforwardData {
            bundle: p.bundle().clone(),
            psi: p.theta().clone(),
            twist: -1,
        };
        let w2 = PushforwardData::sheaf(&p);
        let c0 = phi_w_complex(&p, &w0);
        let c1 = phi_w_complex(&p, &w1);
        let c2 = phi_w_complex(&p, &w2);
        let b0 = hyper_h1_basis(c0.complex());
        let b1 = hyper_h1_basis(c1.complex());
        let b2 = hyper_h1_basis(c2.complex());
        let scalar = |f: &LaurentPoly| {
            vec![
                vec![f.clone(), LaurentPoly::zero()],
                vec![LaurentPoly::zero(), f.clone()],
            ]
        };
        let f = lp(&[(0, 1), (1, 2)]);
        let g = lp(&[(0, -1), (1, 1)]);
        let mf = functoriality_map(&c0, &c1, &b0, &b1, &scalar(&f), p.theta(), p.theta())
            .unwrap();
        let mg = functoriality_map(&c1, &c2, &b1, &b2, &scalar(&g), p.theta(), p.theta())
            .unwrap();
        let mfg = functoriality_map(
            &c0,
            &c2,
            &b0,
            &b2,
            &scalar(&(&f * &g)),
            p.theta(),
            p.theta(),
        )
        .unwrap();
        assert_eq!(mg.mul(&mf), mfg);
    }

    #[test]
    fn basis_survives_margin_membership() {
        // recompute with wider margins: same classes (byte-equal), and the
        // old classes reduce to the identity in the new reducer
        let p = sqrt_z_pair();
        let b = hyper_h1_basis(end_complex(&p, 0).complex());
        for margin in [4, 5] {
            let coords = b.reduce_many_windowed(b.classes(), margin).unwrap();
            let m = RatMatrix::from_cols(coords);
            assert_eq!(m, RatMatrix::identity(b.dim()));
        }
    }
}
