//! The master-equation generator in the frame rotating at the drive frequency:
//!
//! `L ρ = −i[H, ρ] + γr D[S]ρ + Σ_j (γd D[n_j] + γn D[s_j]) ρ`,
//! `H = −Δ Σ_j n_j + E S† + E* S`, `D[C]ρ = CρC† − ½{C†C, ρ}`.
//!
//! The dephasing term `−(γd/2)[n, [n, ρ]]` equals `γd D[n]ρ` because
//! `n² = n`. All dissipators commute with the frame rotation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DampingRates, SystemDrive};

use super::operators::{collective_lowering, site_lowering, CMatrix};

/// Largest `N` for the matrix-free generator.
pub const MAX_ATOMS: usize = 8;
/// Largest `N` for which the `4^N × 4^N` superoperator is assembled.
pub const MAX_DENSE_ATOMS: usize = 5;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Rotating-frame Liouvillian. Applied matrix-free by default; the dense
/// vectorized form is available up to [`MAX_DENSE_ATOMS`].
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianOperator {
    n_atoms: usize,
    detuning: f64,
    field: Complex64,
    rates: DampingRates,
}

/// Builds the generator for `drive` and `rates`.
pub fn build_generator(drive: &SystemDrive, rates: &DampingRates) -> Result<LiouvillianOperator> {
    if drive.n_atoms > MAX_ATOMS {
        return Err(Error::SizeLimit {
            n: drive.n_atoms,
            limit: MAX_ATOMS,
            what: "master-equation oracle",
        });
    }
    Ok(LiouvillianOperator {
        n_atoms: drive.n_atoms,
        detuning: drive.detuning,
        field: drive.field,
        rates: *rates,
    })
}

impl LiouvillianOperator {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        1 << self.n_atoms
    }

    pub fn rates(&self) -> &DampingRates {
        &self.rates
    }

    pub fn field(&self) -> Complex64 {
        self.field
    }

    /// `out = L ρ` for a general (not necessarily Hermitian) `ρ`.
    pub fn apply(&self, rho: &CMatrix, out: &mut CMatrix) {
        self.apply_slice(rho.as_slice(), out.as_mut_slice());
    }

    /// Matrix-free action on column-major `vec(ρ)`.
    pub fn apply_slice(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let n = self.n_atoms;
        let dim = self.dim();
        let at = |a: usize, b: usize| rho[a + b * dim];
        let DampingRates {
            gamma_r: gr,
            gamma_d: gd,
            gamma_n: gn,
        } = self.rates;
        let e = self.field;
        let ec = e.conj();

        // X = Sρ and Y = ρS†, reused by the drive and the collective decay
        let mut x = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut y = vec![Complex64::new(0.0, 0.0); dim * dim];
        for b in 0..dim {
            for a in 0..dim {
                let mut sx = Complex64::new(0.0, 0.0);
                let mut sy = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let m = 1 << j;
                    if a & m == 0 {
                        sx += at(a | m, b);
                    }
                    if b & m == 0 {
                        sy += at(a, b | m);
                    }
                }
                x[a + b * dim] = sx;
                y[a + b * dim] = sy;
            }
        }

        for b in 0..dim {
            let pb = b.count_ones() as f64;
            for a in 0..dim {
                let pa = a.count_ones() as f64;
                let r = at(a, b);
                // diagonal parts: detuning, dephasing, local anticommutator
                let mut acc = I * self.detuning * (pa - pb) * r
                    - 0.5 * gd * ((a ^ b).count_ones() as f64) * r
                    - 0.5 * gn * (pa + pb) * r;

                // S†ρ, ρS, S†X, YS, XS† and the local jumps
                let mut sdr = Complex64::new(0.0, 0.0);
                let mut rs = Complex64::new(0.0, 0.0);
                let mut sdx = Complex64::new(0.0, 0.0);
                let mut ys = Complex64::new(0.0, 0.0);
                let mut xsd = Complex64::new(0.0, 0.0);
                let mut jump = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let m = 1 << j;
                    if a & m != 0 {
                        sdr += at(a & !m, b);
                        sdx += x[(a & !m) + b * dim];
                    }
                    if b & m != 0 {
                        rs += at(a, b & !m);
                        ys += y[a + (b & !m) * dim];
                    } else {
                        xsd += x[a + (b | m) * dim];
                        if a & m == 0 {
                            jump += at(a | m, b | m);
                        }
                    }
                }
                let sr = x[a + b * dim];
                let rsd = y[a + b * dim];
                // −i[E S† + E* S, ρ]
                acc += -I * (e * sdr + ec * sr - e * rsd - ec * rs);
                acc += gr * (xsd - 0.5 * sdx - 0.5 * ys);
                acc += gn * jump;
                out[a + b * dim] = acc;
            }
        }
    }

    /// Vectorized superoperator (column-major `vec`), assembled from
    /// Kronecker-lifted site operators.
    pub fn dense_superoperator(&self) -> Result<CMatrix> {
        if self.n_atoms > MAX_DENSE_ATOMS {
            return Err(Error::SizeLimit {
                n: self.n_atoms,
                limit: MAX_DENSE_ATOMS,
                what: "dense superoperator",
            });
        }
        let n = self.n_atoms;
        let dim = self.dim();
        let id = CMatrix::identity(dim, dim);
        let sites: Vec<CMatrix> = (0..n).map(|j| site_lowering(n, j)).collect();
        let s = collective_lowering(n);
        let sd = s.adjoint();

        let mut h = &sd * self.field + &s * self.field.conj();
        for sj in &sites {
            h -= sj.adjoint() * sj * Complex64::new(self.detuning, 0.0);
        }
        let mut l = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-I);

        let mut add_dissipator = |c: &CMatrix, rate: f64| {
            if rate == 0.0 {
                return;
            }
            let cdc = c.adjoint() * c;
            let term = c.map(|z| z.conj()).kronecker(c)
                - id.kronecker(&cdc) * Complex64::new(0.5, 0.0)
                - cdc.transpose().kronecker(&id) * Complex64::new(0.5, 0.0);
            l += term * Complex64::new(rate, 0.0);
        };
        add_dissipator(&s, self.rates.gamma_r);
        for sj in &sites {
            add_dissipator(&(sj.adjoint() * sj), self.rates.gamma_d);
            add_dissipator(sj, self.rates.gamma_n);
        }
        Ok(l)
    }
}
