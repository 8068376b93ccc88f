//! The seven-variable perturbative hierarchy in the frame rotating with the
//! drive.
//!
//! Envelopes: `s1`, `s3`, `sdss`, `sdssp` carry `e^{-iωt}`, `ss` carries
//! `e^{-2iωt}`, and the populations `sds`, `sdsp` are carrier-free. With the
//! carriers removed every `−iΩ` becomes `iΔ` and the system is autonomous.

use num_complex::Complex64;

use crate::model::{gamma_combine, DampingRates, GammaTriple, SystemDrive};
use crate::error::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Expectation-value envelopes up to third order in the field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerturbativeState {
    /// first-order `⟨s⟩`
    pub s1: Complex64,
    /// `⟨s_i s_j⟩`, `i ≠ j`
    pub ss: Complex64,
    /// `⟨s_i† s_i⟩`
    pub sds: Complex64,
    /// `⟨s_i† s_j⟩`, `i ≠ j`
    pub sdsp: Complex64,
    /// third-order `⟨s⟩`
    pub s3: Complex64,
    /// `⟨s_i† s_i s_j⟩`, `i ≠ j`
    pub sdss: Complex64,
    /// `⟨s_i† s_j s_k⟩`, all distinct
    pub sdssp: Complex64,
}

impl PerturbativeState {
    pub const LEN: usize = 7;

    pub fn to_array(&self) -> [Complex64; 7] {
        [
            self.s1, self.ss, self.sds, self.sdsp, self.s3, self.sdss, self.sdssp,
        ]
    }

    pub fn from_slice(v: &[Complex64]) -> Self {
        Self {
            s1: v[0],
            ss: v[1],
            sds: v[2],
            sdsp: v[3],
            s3: v[4],
            sdss: v[5],
            sdssp: v[6],
        }
    }
}

/// Damping widths `Γ_{a,b,c}` appearing in the hierarchy at fixed `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyWidths {
    pub n_1_1: f64,
    pub twon2_2_2: f64,
    pub two_0_2: f64,
    pub twon2_0_0: f64,
    pub two_0_0: f64,
    pub n2_1_3: f64,
    pub twon4_0_0: f64,
    pub threen6_3_3: f64,
    pub four_0_0: f64,
}

impl HierarchyWidths {
    pub fn new(n_atoms: usize, rates: &DampingRates) -> Result<Self> {
        let n = n_atoms as f64;
        let g = |a: f64, b: f64, c: f64| gamma_combine(GammaTriple::new(a, b, c), rates);
        Ok(Self {
            n_1_1: g(n, 1.0, 1.0)?,
            twon2_2_2: g(2.0 * n - 2.0, 2.0, 2.0)?,
            two_0_2: g(2.0, 0.0, 2.0)?,
            twon2_0_0: g(2.0 * n - 2.0, 0.0, 0.0)?,
            two_0_0: g(2.0, 0.0, 0.0)?,
            n2_1_3: g(n + 2.0, 1.0, 3.0)?,
            twon4_0_0: g(2.0 * n - 4.0, 0.0, 0.0)?,
            threen6_3_3: g(3.0 * n - 6.0, 3.0, 3.0)?,
            four_0_0: g(4.0, 0.0, 0.0)?,
        })
    }
}

/// Individual right-hand-side terms of each equation, zero-padded.
pub(crate) fn equation_terms(
    y: &PerturbativeState,
    drive: &SystemDrive,
    w: &HierarchyWidths,
) -> [[Complex64; 4]; 7] {
    let e = drive.field;
    let ec = e.conj();
    let d = drive.detuning;
    let src = I * ec * y.s1;
    [
        [(I * d - w.n_1_1) * y.s1, -I * e, ZERO, ZERO],
        [(2.0 * I * d - w.twon2_2_2) * y.ss, -2.0 * I * e * y.s1, ZERO, ZERO],
        [src, src.conj(), -w.two_0_2 * y.sds, -w.twon2_0_0 * y.sdsp],
        [src, src.conj(), -w.two_0_0 * y.sds, -w.twon2_2_2 * y.sdsp],
        [
            (I * d - w.n_1_1) * y.s3,
            2.0 * I * e * y.sds,
            w.twon2_0_0 * y.sdss,
            ZERO,
        ],
        [
            (I * d - w.n2_1_3) * y.sdss - w.twon4_0_0 * y.sdssp,
            I * ec * y.ss,
            -I * e * y.sds,
            -I * e * y.sdsp,
        ],
        [
            (I * d - w.threen6_3_3) * y.sdssp,
            -w.four_0_0 * y.sdss,
            I * ec * y.ss,
            -2.0 * I * e * y.sdsp,
        ],
    ]
}

pub(crate) fn rhs_with_widths(
    y: &PerturbativeState,
    drive: &SystemDrive,
    w: &HierarchyWidths,
) -> PerturbativeState {
    let t = equation_terms(y, drive, w);
    let s = |k: usize| t[k].iter().sum::<Complex64>();
    PerturbativeState {
        s1: s(0),
        ss: s(1),
        sds: s(2),
        sdsp: s(3),
        s3: s(4),
        sdss: s(5),
        sdssp: s(6),
    }
}

/// Time derivative of the envelopes under a constant drive.
pub fn rotating_frame_rhs(
    state: &PerturbativeState,
    drive: &SystemDrive,
    rates: &DampingRates,
) -> Result<PerturbativeState> {
    drive.require_collective()?;
    let w = HierarchyWidths::new(drive.n_atoms, rates)?;
    Ok(rhs_with_widths(state, drive, &w))
}

/// Largest per-equation residual `|Σ terms| / Σ |terms|` (zero for equations
/// whose terms all vanish).
pub fn relative_residual(
    state: &PerturbativeState,
    drive: &SystemDrive,
    rates: &DampingRates,
) -> Result<f64> {
    drive.require_collective()?;
    let w = HierarchyWidths::new(drive.n_atoms, rates)?;
    let terms = equation_terms(state, drive, &w);
    Ok(terms
        .iter()
        .map(|eq| {
            let scale: f64 = eq.iter().map(|z| z.norm()).sum();
            if scale == 0.0 {
                0.0
            } else {
                eq.iter().sum::<Complex64>().norm() / scale
            }
        })
        .fold(0.0, f64::max))
}
