//! Model parameters and the two algebraic primitives every closed form is
//! built from: the combined width `Γ_{a,b,c} = (a γr + b γd + c γn) / 2` and
//! the single-pole resonance `f_{a,b,c}(Δ) = 1 / (Δ + i Γ_{a,b,c})`.
//!
//! All rates and detunings are in units of the radiative rate `γr`. Only the
//! detuning `Δ = ω − Ω` enters any formula, so absolute frequencies are never
//! taken.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Single-atom damping constants `(γr, γd, γn)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingRates {
    pub gamma_r: f64,
    pub gamma_d: f64,
    pub gamma_n: f64,
}

impl DampingRates {
    pub fn new(gamma_r: f64, gamma_d: f64, gamma_n: f64) -> Result<Self> {
        for (name, v) in [
            ("gamma_r", gamma_r),
            ("gamma_d", gamma_d),
            ("gamma_n", gamma_n),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if gamma_r <= 0.0 {
            return Err(invalid("gamma_r", "radiative rate must be > 0"));
        }
        Ok(Self {
            gamma_r,
            gamma_d,
            gamma_n,
        })
    }

    /// Rates in units of `γr = 1`.
    pub fn unit_radiative(gamma_d: f64, gamma_n: f64) -> Result<Self> {
        Self::new(1.0, gamma_d, gamma_n)
    }

    /// Same rates with dephasing and nonradiative dissipation exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            gamma_r: self.gamma_r,
            gamma_d: self.gamma_n,
            gamma_n: self.gamma_d,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            gamma_r: self.gamma_r * k,
            gamma_d: self.gamma_d * k,
            gamma_n: self.gamma_n * k,
        }
    }

    /// The same rates with `γd` set to zero.
    pub fn without_dephasing(&self) -> Self {
        Self {
            gamma_d: 0.0,
            ..*self
        }
    }

    /// True when both non-radiative channels are off, the degenerate corner
    /// at which the stationary third-order response has no unique value.
    pub fn radiative_only(&self) -> bool {
        self.gamma_d == 0.0 && self.gamma_n == 0.0
    }
}

/// Atom count, drive detuning `Δ = ω − Ω` and complex field amplitude `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemDrive {
    pub n_atoms: usize,
    pub detuning: f64,
    pub field: Complex64,
}

impl SystemDrive {
    pub fn new(n_atoms: usize, detuning: f64, field: Complex64) -> Result<Self> {
        if n_atoms == 0 {
            return Err(invalid("n_atoms", "must be >= 1"));
        }
        if !detuning.is_finite() {
            return Err(invalid("detuning", format!("must be finite, got {detuning}")));
        }
        if !(field.re.is_finite() && field.im.is_finite()) {
            return Err(invalid("field_amplitude", "must be finite"));
        }
        Ok(Self {
            n_atoms,
            detuning,
            field,
        })
    }

    /// Drive with a real, positive amplitude.
    pub fn real(n_atoms: usize, detuning: f64, amplitude: f64) -> Result<Self> {
        Self::new(n_atoms, detuning, Complex64::new(amplitude, 0.0))
    }

    pub fn with_field(&self, field: Complex64) -> Self {
        Self { field, ..*self }
    }

    pub fn with_detuning(&self, detuning: f64) -> Self {
        Self { detuning, ..*self }
    }

    /// `N` as a float, for coefficient arithmetic.
    pub fn n(&self) -> f64 {
        self.n_atoms as f64
    }

    pub(crate) fn require_collective(&self) -> Result<()> {
        if self.n_atoms < 2 {
            Err(Error::TooFewAtoms(self.n_atoms))
        } else {
            Ok(())
        }
    }
}

/// Coefficients `(a, b, c)` multiplying `(γr, γd, γn)` in `Γ_{a,b,c}`.
///
/// Stored signed so that a triple such as `2N − 4` evaluated at `N = 1` is
/// caught by [`gamma_combine`] instead of producing a negative width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GammaTriple {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }
}

/// `Γ_{a,b,c} = (a γr + b γd + c γn) / 2`.
pub fn gamma_combine(triple: GammaTriple, rates: &DampingRates) -> Result<f64> {
    let GammaTriple { a, b, c } = triple;
    for v in [a, b, c] {
        if !v.is_finite() {
            return Err(invalid("gamma_triple", format!("non-finite coefficient {v}")));
        }
        if v < 0.0 {
            return Err(Error::NegativeCoefficient { a, b, c, value: v });
        }
    }
    // grouped so that b == c is exactly symmetric under γd ↔ γn
    Ok((a * rates.gamma_r + (b * rates.gamma_d + c * rates.gamma_n)) / 2.0)
}

/// `Δ + i Γ_{a,b,c}`, the inverse resonance `f⁻¹_{a,b,c}`.
pub fn inverse_resonance(triple: GammaTriple, rates: &DampingRates, detuning: f64) -> Result<Complex64> {
    Ok(Complex64::new(detuning, gamma_combine(triple, rates)?))
}

/// `f_{a,b,c}(Δ) = (Δ + i Γ_{a,b,c})⁻¹`.
pub fn resonance_fn(triple: GammaTriple, rates: &DampingRates, detuning: f64) -> Result<Complex64> {
    let z = inverse_resonance(triple, rates, detuning)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Pole);
    }
    Ok(z.inv())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn rates(r: f64, d: f64, n: f64) -> DampingRates {
        DampingRates::new(r, d, n).unwrap()
    }

    #[test]
    fn gamma_combine_examples() {
        let g = gamma_combine(GammaTriple::new(5.0, 1.0, 1.0), &rates(1.0, 0.0, 0.1)).unwrap();
        assert_relative_eq!(g, 2.55, epsilon = 1e-15);
        let g = gamma_combine(GammaTriple::new(8.0, 0.0, 0.0), &rates(1.0, 0.1, 0.0)).unwrap();
        assert_eq!(g, 4.0);
        let g = gamma_combine(GammaTriple::new(0.0, 0.0, 0.0), &rates(1.0, 0.3, 0.7)).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn negative_coefficient_rejected() {
        // 2N - 4 at N = 1
        let err = gamma_combine(GammaTriple::new(-2.0, 0.0, 0.0), &rates(1.0, 0.0, 0.0));
        assert!(matches!(err, Err(Error::NegativeCoefficient { .. })));
    }

    #[test]
    fn resonance_examples() {
        let r = rates(1.0, 0.0, 0.1);
        let f = resonance_fn(GammaTriple::new(5.0, 1.0, 1.0), &r, 0.0).unwrap();
        assert_relative_eq!(f.re, 0.0);
        assert_relative_eq!(f.im, -1.0 / 2.55, epsilon = 1e-15);

        let f = resonance_fn(GammaTriple::new(5.0, 1.0, 1.0), &r, 2.55).unwrap();
        assert_relative_eq!(f.re, 1.0 / 5.1, epsilon = 1e-15);
        assert_relative_eq!(f.im, -1.0 / 5.1, epsilon = 1e-15);

        let f = resonance_fn(GammaTriple::new(5.0, 0.0, 1.0), &r, 100.0).unwrap();
        let d = 100.0f64.powi(2) + 2.55f64.powi(2);
        assert_relative_eq!(f.re, 100.0 / d, epsilon = 1e-15);
        assert_relative_eq!(f.im, -2.55 / d, epsilon = 1e-15);
    }

    #[test]
    fn pole_detected() {
        let r = rates(1.0, 0.0, 0.0);
        assert_eq!(
            resonance_fn(GammaTriple::new(0.0, 0.0, 1.0), &r, 0.0),
            Err(Error::Pole)
        );
        assert!(resonance_fn(GammaTriple::new(0.0, 0.0, 1.0), &r, 1e-300).is_ok());
    }

    #[test]
    fn invalid_rates_rejected() {
        assert!(DampingRates::new(0.0, 0.1, 0.1).is_err());
        assert!(DampingRates::new(1.0, -0.1, 0.1).is_err());
        assert!(DampingRates::new(1.0, 0.1, f64::NAN).is_err());
        assert!(SystemDrive::real(0, 0.0, 1.0).is_err());
    }

    fn triple() -> impl Strategy<Value = GammaTriple> {
        (0.0..30.0f64, 0.0..5.0f64, 0.0..5.0f64).prop_map(|(a, b, c)| GammaTriple::new(a, b, c))
    }

    fn any_rates() -> impl Strategy<Value = DampingRates> {
        (0.1..3.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(r, d, n)| rates(r, d, n))
    }

    proptest! {
        #[test]
        fn combine_is_linear_in_rates(t in triple(), r in any_rates()) {
            let g1 = gamma_combine(t, &r).unwrap();
            let g2 = gamma_combine(t, &r.scaled(2.0)).unwrap();
            prop_assert_eq!(g2, 2.0 * g1);
        }

        #[test]
        fn resonance_inverts(t in triple(), r in any_rates(), d in -200.0..200.0f64) {
            prop_assume!(gamma_combine(t, &r).unwrap() > 0.0 || d != 0.0);
            let f = resonance_fn(t, &r, d).unwrap();
            let z = Complex64::new(d, gamma_combine(t, &r).unwrap());
            prop_assert!(((f * z) - 1.0).norm() < 1e-14);
        }

        #[test]
        fn passive_and_peaked_at_resonance(t in triple(), r in any_rates(), d in -200.0..200.0f64) {
            let g = gamma_combine(t, &r).unwrap();
            prop_assume!(g > 1e-6);
            let f = resonance_fn(t, &r, d).unwrap();
            prop_assert!(f.im < 0.0);
            let peak = resonance_fn(t, &r, 0.0).unwrap();
            prop_assert!((peak.norm() - 1.0 / g).abs() <= 1e-12 / g);
            prop_assert!(f.norm() <= peak.norm() * (1.0 + 1e-15));
        }
    }
}
