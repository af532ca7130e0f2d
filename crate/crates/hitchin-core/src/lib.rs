//! Exact-arithmetic spectral correspondence on the projective line.
//!
//! This crate takes a Hitchin pair `(E, theta)` on P^1 — a split vector
//! bundle together with a twisted endomorphism `theta : E -> E(n)` — and
//! computes, entirely over Q:
//!
//! * its characteristic data (Hitchin map, spectral curve, spectral sheaf),
//! * the degree-1 Cech hypercohomology of its deformation complexes, with
//!   explicit cochain representatives,
//! * the Serre-duality pairing between tangent and cotangent spaces,
//! * the two Poisson maps attached to a section of O(n+2) — one through the
//!   endomorphism complex, one through the sheaf-side resolution complex —
//!   and the change-of-basis identifications between them.
//!
//! The headline check, [`poisson::verify_theorem1`], recomputes the same
//! Poisson map along both routes and demands that the difference matrix be
//! identically zero. There are no tolerances anywhere: every assertion is
//! an exact test on arbitrary-precision rationals.

pub mod defm;
pub mod exact;
pub mod hitchin;
pub mod p1sheaf;
pub mod poisson;
pub mod spectral;

pub use exact::{LaurentPoly, Rat, RatMatrix};
pub use hitchin::{BundleP1, HitchinPair, PoissonSection, StabilityCert, TwistedEndo};
pub use poisson::TheoremReport;
pub use spectral::{SmoothCert, SpectralCurve, SpectralSheafRep};

/// Errors surfaced by the library. Internal invariant violations panic
/// instead; these are the conditions a caller can meaningfully handle.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("twist mismatch: expected O({expected}), got O({got})")]
    TwistMismatch { expected: i64, got: i64 },
    #[error("linear system has no solution ({0}); cocycle data is inconsistent")]
    NoSolution(&'static str),
    #[error("hypercohomology window too small: {0}; widen with window_extra")]
    WindowInstability(String),
    #[error("morphism does not commute with the twisted endomorphisms")]
    NonCommutingMorphism,
    #[error("pair is not certified stable; refusing to run moduli-space checks")]
    NotCertifiedStable,
    #[error("sampling exhausted after {0} attempts without a certified-stable pair")]
    SamplingExhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
