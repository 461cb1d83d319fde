//! The 2×2 effective Hamiltonian `[[ω, -m], [m, -ω]]`, its eigenmomenta and PT phase.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{re, Complex};

/// Default absolute tolerance on `||ω| - m|` for exceptional-point detection.
pub const DEFAULT_EP_TOLERANCE: f64 = 1e-12;

/// Energy `omega` and mass `mass` (ħ = c = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub omega: f64,
    pub mass: f64,
}

impl EffectiveParams {
    pub fn new(omega: f64, mass: f64) -> Result<Self> {
        if !omega.is_finite() || !mass.is_finite() || mass < 0.0 {
            return Err(Error::InvalidInput(format!(
                "effective parameters need finite omega and mass >= 0, got ({omega}, {mass})"
            )));
        }
        Ok(EffectiveParams { omega, mass })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PtPhase {
    Unbroken,
    ExceptionalPoint,
    Broken,
}

impl PtPhase {
    pub fn label(self) -> &'static str {
        match self {
            PtPhase::Unbroken => "Unbroken",
            PtPhase::ExceptionalPoint => "ExceptionalPoint",
            PtPhase::Broken => "Broken",
        }
    }
}

impl std::fmt::Display for PtPhase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtClassification {
    pub phase: PtPhase,
    /// `(k₊, k₋)`, ordered as in [`eigenmomenta`]; both zero at an exceptional point.
    pub eigenmomenta: (Complex, Complex),
}

/// Right eigenvectors of the effective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eigenvectors {
    /// Two independent (generally non-orthogonal) eigenvectors for `k₊` and `k₋`.
    Pair {
        plus: Vector2<Complex>,
        minus: Vector2<Complex>,
    },
    /// Exceptional point: a single eigenvector for the coalesced eigenvalue 0.
    Defective(Vector2<Complex>),
    /// `H = 0`; every vector is an eigenvector.
    Degenerate,
}

pub fn effective_hamiltonian(p: EffectiveParams) -> Matrix2<Complex> {
    Matrix2::new(re(p.omega), re(-p.mass), re(p.mass), re(-p.omega))
}

/// `k = ±√(ω² − m²)`; the first entry has non-negative real part, ties broken by
/// non-negative imaginary part.
pub fn eigenmomenta(p: EffectiveParams) -> (Complex, Complex) {
    // (ω − m)(ω + m) avoids cancellation near the exceptional point.
    let d = (p.omega - p.mass) * (p.omega + p.mass);
    let k = if d >= 0.0 {
        Complex::new(d.sqrt(), 0.0)
    } else {
        Complex::new(0.0, (-d).sqrt())
    };
    (k, -k)
}

pub fn classify_pt(p: EffectiveParams, tol: f64) -> PtClassification {
    let gap = p.omega.abs() - p.mass;
    let phase = if gap > tol {
        PtPhase::Unbroken
    } else if gap < -tol {
        PtPhase::Broken
    } else {
        PtPhase::ExceptionalPoint
    };
    let eigenmomenta = match phase {
        PtPhase::ExceptionalPoint => (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)),
        _ => eigenmomenta(p),
    };
    PtClassification { phase, eigenmomenta }
}

/// Unit-norm right eigenvectors with a real, positive first non-zero entry.
pub fn right_eigenvectors(p: EffectiveParams) -> Eigenvectors {
    if p.omega == 0.0 && p.mass == 0.0 {
        return Eigenvectors::Degenerate;
    }
    if classify_pt(p, DEFAULT_EP_TOLERANCE).phase == PtPhase::ExceptionalPoint {
        // Kernel of the rank-1 matrix: ω v₁ − m v₂ = 0.
        return Eigenvectors::Defective(fix_gauge(Vector2::new(re(p.mass), re(p.omega))));
    }
    let (kp, km) = eigenmomenta(p);
    Eigenvectors::Pair {
        plus: eigenvector_for(p, kp),
        minus: eigenvector_for(p, km),
    }
}

fn eigenvector_for(p: EffectiveParams, k: Complex) -> Vector2<Complex> {
    // Either row of (H − k) gives a null vector; take the better conditioned one.
    let from_row1 = Vector2::new(re(p.mass), re(p.omega) - k);
    let from_row2 = Vector2::new(re(p.omega) + k, re(p.mass));
    let v = if from_row1.norm() >= from_row2.norm() {
        from_row1
    } else {
        from_row2
    };
    fix_gauge(v)
}

fn fix_gauge(v: Vector2<Complex>) -> Vector2<Complex> {
    let lead = if v[0].norm() > 0.0 { v[0] } else { v[1] };
    let phase = lead.conj() / lead.norm();
    let v = v * phase;
    let v = v / re(v.norm());
    // Remove the rounding residue from the real-positive entry.
    let mut out = v;
    if out[0].norm() > 0.0 {
        out[0] = re(out[0].norm());
    } else {
        out[1] = re(out[1].norm());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(omega: f64, mass: f64) -> EffectiveParams {
        EffectiveParams::new(omega, mass).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(effective_hamiltonian(p(0.0, 0.0)), Matrix2::zeros());
        assert_eq!(
            effective_hamiltonian(p(2.0, 1.0)),
            Matrix2::new(re(2.0), re(-1.0), re(1.0), re(-2.0))
        );
        let ep = effective_hamiltonian(p(1.0, 1.0));
        assert_eq!(ep, Matrix2::new(re(1.0), re(-1.0), re(1.0), re(-1.0)));
        assert_eq!(ep.determinant(), re(0.0));
    }

    #[test]
    fn rejects_negative_mass() {
        assert!(EffectiveParams::new(1.0, -0.1).is_err());
        assert!(EffectiveParams::new(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn eigenmomenta_examples() {
        let (a, b) = eigenmomenta(p(2.0, 1.0));
        assert!((a - re(3f64.sqrt())).norm() < 1e-15 && (b + re(3f64.sqrt())).norm() < 1e-15);
        assert_eq!(eigenmomenta(p(1.0, 1.0)), (re(0.0), re(-0.0)));
        let (a, b) = eigenmomenta(p(0.5, 1.0));
        let s = 0.75f64.sqrt();
        assert!((a - Complex::new(0.0, s)).norm() < 1e-15);
        assert!((b - Complex::new(0.0, -s)).norm() < 1e-15);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_pt(p(2.0, 1.0), 1e-9).phase, PtPhase::Unbroken);
        assert_eq!(classify_pt(p(1.0, 1.0), 1e-9).phase, PtPhase::ExceptionalPoint);
        assert_eq!(classify_pt(p(0.5, 1.0), 1e-9).phase, PtPhase::Broken);
        assert_eq!(classify_pt(p(-2.0, 1.0), 1e-9).phase, PtPhase::Unbroken);
        let near = classify_pt(p(1.0 + 1e-11, 1.0), 1e-9);
        assert_eq!(near.phase, PtPhase::ExceptionalPoint);
        assert_eq!(near.eigenmomenta.0, re(0.0));
    }

    #[test]
    fn eigenvector_examples() {
        assert_eq!(right_eigenvectors(p(0.0, 0.0)), Eigenvectors::Degenerate);
        match right_eigenvectors(p(1.0, 1.0)) {
            Eigenvectors::Defective(v) => {
                let s = 0.5f64.sqrt();
                assert!((v[0] - re(s)).norm() < 1e-15 && (v[1] - re(s)).norm() < 1e-15);
            }
            other => panic!("expected defective, got {other:?}"),
        }
        let params = p(2.0, 1.0);
        let h = effective_hamiltonian(params);
        let (kp, km) = eigenmomenta(params);
        match right_eigenvectors(params) {
            Eigenvectors::Pair { plus, minus } => {
                assert!((h * plus - plus * kp).norm() < 1e-12);
                assert!((h * minus - minus * km).norm() < 1e-12);
                assert!(plus.dotc(&minus).norm() > 0.1);
                assert!((plus.norm() - 1.0).abs() < 1e-15);
                assert_eq!(plus[0].im, 0.0);
                assert!(plus[0].re > 0.0);
            }
            other => panic!("expected pair, got {other:?}"),
        }
    }

    #[test]
    fn phase_boundary_continuity() {
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let above = eigenmomenta(p(1.0 + eps, 1.0)).0;
            assert_eq!(above.im, 0.0);
            assert!(above.re > 0.0 && above.re < 2.0 * (2.0 * eps).sqrt());
            let below = eigenmomenta(p(1.0 - eps, 1.0)).0;
            assert_eq!(below.re, 0.0);
            assert!(below.im > 0.0 && below.im < 2.0 * (2.0 * eps).sqrt());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn eigenmomenta_square_to_discriminant(omega in -50.0..50.0f64, mass in 0.0..50.0f64) {
            let params = p(omega, mass);
            let (kp, km) = eigenmomenta(params);
            let d = omega * omega - mass * mass;
            let scale = d.abs().max(1e-300);
            prop_assert!(((kp * kp).re - d).abs() <= 1e-12 * scale.max(omega * omega));
            prop_assert!(((km * km).re - d).abs() <= 1e-12 * scale.max(omega * omega));
            prop_assert!(kp.re >= 0.0);
            prop_assert!(kp.re > 0.0 || kp.im >= 0.0);
        }

        #[test]
        fn eigenpair_residuals(omega in -10.0..10.0f64, mass in 0.0..10.0f64) {
            let params = p(omega, mass);
            let h = effective_hamiltonian(params);
            let (kp, km) = eigenmomenta(params);
            match right_eigenvectors(params) {
                Eigenvectors::Pair { plus, minus } => {
                    prop_assert!((h * plus - plus * kp).norm() <= 1e-10);
                    prop_assert!((h * minus - minus * km).norm() <= 1e-10);
                }
                Eigenvectors::Defective(v) => prop_assert!((h * v).norm() <= 1e-10),
                Eigenvectors::Degenerate => prop_assert!(h.norm() == 0.0),
            }
        }

        #[test]
        fn trace_and_determinant(omega in -10.0..10.0f64, mass in 0.0..10.0f64) {
            let h = effective_hamiltonian(p(omega, mass));
            prop_assert_eq!(h.trace(), re(0.0));
            let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
            prop_assert_eq!(det, re(mass * mass - omega * omega));
        }

        #[test]
        fn classification_invariants(omega in -5.0..5.0f64, mass in 0.0..5.0f64) {
            let c = classify_pt(p(omega, mass), 1e-9);
            let (kp, km) = c.eigenmomenta;
            match c.phase {
                PtPhase::Unbroken => {
                    prop_assert!(kp.im == 0.0 && km.im == 0.0 && kp.re != 0.0);
                    prop_assert_eq!(kp, -km);
                }
                PtPhase::Broken => {
                    prop_assert!(kp.re == 0.0 && km.re == 0.0 && kp.im != 0.0);
                    prop_assert_eq!(kp.im, -km.im);
                }
                PtPhase::ExceptionalPoint => prop_assert!(kp.norm() == 0.0 && km.norm() == 0.0),
            }
        }
    }
}
