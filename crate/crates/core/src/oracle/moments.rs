//! Site-resolved moments `⟨s_i⟩`, `⟨s_i s_j⟩`, `⟨s_i† s_j⟩`, `⟨s_i† s_j s_k⟩`
//! collected into the site-symmetric classes used by the hierarchy.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::density::DensityMatrix;
use super::operators::{trace_with, Ladder};

/// Symmetry-class averages. Classes needing more atoms than available are
/// `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoments {
    pub s: Complex64,
    pub sds: Complex64,
    pub ss: Option<Complex64>,
    pub sdsp: Option<Complex64>,
    pub sdss: Option<Complex64>,
    pub sdssp: Option<Complex64>,
}

/// Tolerances of the permutation-symmetry check: members of a class may
/// differ from the class mean by `rtol · max|member| + atol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryTolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for SymmetryTolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
        }
    }
}

fn class_mean(
    class: &'static str,
    values: &[Complex64],
    tol: SymmetryTolerance,
) -> Result<Option<Complex64>> {
    if values.is_empty() {
        return Ok(None);
    }
    let mean = values.iter().sum::<Complex64>() / values.len() as f64;
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let spread = values.iter().map(|z| (z - mean).norm()).fold(0.0, f64::max);
    if spread > tol.rtol * scale + tol.atol {
        return Err(Error::SymmetryViolation { class, spread });
    }
    Ok(Some(mean))
}

pub fn expectations(rho: &DensityMatrix) -> Result<CollectiveMoments> {
    expectations_with(rho, SymmetryTolerance::default())
}

pub fn expectations_with(rho: &DensityMatrix, tol: SymmetryTolerance) -> Result<CollectiveMoments> {
    use Ladder::{Lower as L, Raise as R};
    let n = rho.n_atoms();
    let m = rho.matrix();
    let ev = |ops: &[Ladder]| trace_with(m, ops);

    let mut s = Vec::new();
    let mut sds = Vec::new();
    let mut ss = Vec::new();
    let mut sdsp = Vec::new();
    let mut sdss = Vec::new();
    let mut sdssp = Vec::new();
    for i in 0..n {
        s.push(ev(&[L(i)]));
        sds.push(ev(&[R(i), L(i)]));
        for j in (0..n).filter(|&j| j != i) {
            ss.push(ev(&[L(i), L(j)]));
            sdsp.push(ev(&[R(i), L(j)]));
            sdss.push(ev(&[R(i), L(i), L(j)]));
            sdss.push(ev(&[R(i), L(j), L(i)]));
            for k in (0..n).filter(|&k| k != i && k != j) {
                sdssp.push(ev(&[R(i), L(j), L(k)]));
            }
        }
    }
    Ok(CollectiveMoments {
        s: class_mean("s", &s, tol)?.expect("n >= 1"),
        sds: class_mean("sds", &sds, tol)?.expect("n >= 1"),
        ss: class_mean("ss", &ss, tol)?,
        sdsp: class_mean("sdsp", &sdsp, tol)?,
        sdss: class_mean("sdss", &sdss, tol)?,
        sdssp: class_mean("sdssp", &sdssp, tol)?,
    })
}
