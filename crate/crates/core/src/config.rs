//! Numerical tolerances shared by every module.
//!
//! All thresholds live in one record so that the behaviour at boundary cases
//! (singular pivots, semidefinite exponents, the edge of the boundedness
//! region) can be audited in one place.

/// Tolerance record. `Tolerances::DEFAULT` is what every public entry point uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Pivot magnitude, relative to the largest entry, below which LU reports singularity.
    pub pivot: f64,
    /// Relative asymmetry accepted by the real symmetric eigensolver.
    pub symmetry: f64,
    /// Relative asymmetry accepted for complex symmetric Hessians and exponents.
    pub complex_symmetry: f64,
    /// Smallest eigenvalue, relative to the largest, for "positive definite".
    pub positive_definite: f64,
    /// Ellipticity threshold on `min eig(Re H) / max eig(Re H)`.
    pub ellipticity: f64,
    /// Relative tolerance for power iteration.
    pub power_iteration: f64,
    /// Iteration cap for power iteration.
    pub power_iteration_cap: usize,
    /// Width of the band around `a - b = 1` (relative to `a`) and around
    /// `|phi| + |theta| = pi/2` treated as the boundary of the region.
    pub region_band: f64,
    /// Distance to `(i pi / 2) Z` treated as an exact special time.
    pub special_time: f64,
    /// Magnitude of `cosh t` (or of a Mobius denominator) treated as zero.
    pub pole: f64,
    /// Steps for continuity tracking of square-root branches.
    pub branch_steps: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        pivot: 1e-13,
        symmetry: 1e-12,
        complex_symmetry: 1e-12,
        positive_definite: 1e-12,
        ellipticity: 1e-10,
        power_iteration: 1e-10,
        power_iteration_cap: 10_000,
        region_band: 1e-10,
        special_time: 1e-12,
        pole: 1e-13,
        branch_steps: 64,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Shorthand for the default record.
pub const TOL: Tolerances = Tolerances::DEFAULT;
