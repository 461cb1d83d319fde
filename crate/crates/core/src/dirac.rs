//! 4×4 Dirac Hamiltonian, its z-axis hologram, and the parity / mirror / PT operator
//! identities.
//!
//! `T_eff = M_z` is the literal unitary matrix: no complex conjugation is involved. It is
//! therefore a unitary stand-in for time reversal rather than the usual anti-unitary
//! operator, and the PT identity maps `H(ω, kx, ky)` onto `H(ω, −kx, −ky)` rather than
//! onto itself.

use nalgebra::{Matrix2, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{re, Complex, I};

pub type Matrix4c = Matrix4<Complex>;
type Matrix2c = Matrix2<Complex>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracParams {
    pub omega: f64,
    pub kx: f64,
    pub ky: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryName {
    P,
    Mx,
    My,
    Mz,
    PEff,
    TEff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryOperator {
    pub name: SymmetryName,
    pub matrix: Matrix4c,
}

fn identity2() -> Matrix2c {
    Matrix2c::identity()
}

pub fn sigma_x() -> Matrix2c {
    Matrix2c::new(re(0.0), re(1.0), re(1.0), re(0.0))
}

pub fn sigma_y() -> Matrix2c {
    Matrix2c::new(re(0.0), -I, I, re(0.0))
}

pub fn sigma_z() -> Matrix2c {
    Matrix2c::new(re(1.0), re(0.0), re(0.0), re(-1.0))
}

/// Assembles `[[a, b], [c, d]]` from 2×2 blocks.
pub fn blocks(a: Matrix2c, b: Matrix2c, c: Matrix2c, d: Matrix2c) -> Matrix4c {
    let mut m = Matrix4c::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&d);
    m
}

fn sigma_dot(k: &Vector3<f64>) -> Matrix2c {
    sigma_x() * re(k.x) + sigma_y() * re(k.y) + sigma_z() * re(k.z)
}

/// `[[−σ·k, m], [m, σ·k]]`.
pub fn dirac_hamiltonian(k: Vector3<f64>, mass: f64) -> Matrix4c {
    let sk = sigma_dot(&k);
    let m = identity2() * re(mass);
    blocks(-sk, m, m, sk)
}

/// Mirror reflection `M_j = [[0, σ_j], [σ_j, 0]]`.
pub fn mirror(axis: usize) -> SymmetryOperator {
    let (name, s) = match axis {
        0 => (SymmetryName::Mx, sigma_x()),
        1 => (SymmetryName::My, sigma_y()),
        2 => (SymmetryName::Mz, sigma_z()),
        _ => panic!("mirror axis must be 0, 1 or 2"),
    };
    let z = Matrix2c::zeros();
    SymmetryOperator { name, matrix: blocks(z, s, s, z) }
}

/// Parity `P = i [[0, I], [I, 0]]`; the `i` prefactor makes `P² = −I`.
pub fn parity() -> SymmetryOperator {
    let z = Matrix2c::zeros();
    SymmetryOperator {
        name: SymmetryName::P,
        matrix: blocks(z, identity2(), identity2(), z) * I,
    }
}

/// `T_eff = M_z`.
pub fn t_eff() -> SymmetryOperator {
    SymmetryOperator { name: SymmetryName::TEff, matrix: mirror(2).matrix }
}

/// `P_eff = i diag(σz, σz)` (equal to `M_x M_y`).
pub fn p_eff() -> SymmetryOperator {
    let z = Matrix2c::zeros();
    SymmetryOperator {
        name: SymmetryName::PEff,
        matrix: blocks(sigma_z(), z, z, sigma_z()) * I,
    }
}

/// `‖P⁻¹ H(k) P − H(−k)‖_F`.
pub fn parity_check(k: Vector3<f64>, mass: f64) -> f64 {
    let p = parity().matrix;
    // P⁻¹ = −P.
    let lhs = -p * dirac_hamiltonian(k, mass) * p;
    (lhs - dirac_hamiltonian(-k, mass)).norm()
}

/// Largest of `‖P − MxMyMz‖_F`, `‖M_j² − I‖_F` and `‖P² + I‖_F`.
pub fn mirror_decomposition_check() -> f64 {
    let (mx, my, mz) = (mirror(0).matrix, mirror(1).matrix, mirror(2).matrix);
    let p = parity().matrix;
    let id = Matrix4c::identity();
    [
        (p - mx * my * mz).norm(),
        (mx * mx - id).norm(),
        (my * my - id).norm(),
        (mz * mz - id).norm(),
        (p * p + id).norm(),
        (p_eff().matrix - mx * my).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// `[[ωσz + i(kx σy − ky σx), −mσz], [mσz, −ωσz + i(kx σy − ky σx)]]`.
pub fn dirac_hologram_hamiltonian(p: DiracParams) -> Matrix4c {
    let transverse = (sigma_y() * re(p.kx) - sigma_x() * re(p.ky)) * I;
    let sz = sigma_z();
    blocks(
        sz * re(p.omega) + transverse,
        -sz * re(p.mass),
        sz * re(p.mass),
        -sz * re(p.omega) + transverse,
    )
}

/// `‖O H(ω, kx, ky) O − H(ω, −kx, −ky)‖_F` with `O = P_eff T_eff`.
pub fn pt_identity_check(p: DiracParams) -> f64 {
    let o = p_eff().matrix * t_eff().matrix;
    let flipped = DiracParams { kx: -p.kx, ky: -p.ky, ..p };
    (o * dirac_hologram_hamiltonian(p) * o - dirac_hologram_hamiltonian(flipped)).norm()
}

/// Eigenvalues of a 4×4 complex matrix (Schur/QR), ordered by [`sort_spectrum`].
pub fn eigenvalues4(m: &Matrix4c) -> Result<[Complex; 4]> {
    let ev = m
        .eigenvalues()
        .ok_or_else(|| Error::Domain("Schur decomposition did not converge".into()))?;
    let mut out = [ev[0], ev[1], ev[2], ev[3]];
    sort_spectrum(&mut out, 1e-12 * m.norm().max(1.0));
    Ok(out)
}

/// Zeroes real or imaginary parts below `tol`, then sorts by `(Re, Im)` treating real parts
/// within `tol` of each other as equal.
pub fn sort_spectrum(values: &mut [Complex], tol: f64) {
    for z in values.iter_mut() {
        if z.re.abs() <= tol {
            z.re = 0.0;
        }
        if z.im.abs() <= tol {
            z.im = 0.0;
        }
    }
    values.sort_by(|a, b| a.re.total_cmp(&b.re));
    // Insertion pass: within runs of nearly equal real parts, order by imaginary part.
    for i in 1..values.len() {
        let mut k = i;
        while k > 0 && (values[k].re - values[k - 1].re).abs() <= tol && values[k].im < values[k - 1].im {
            values.swap(k, k - 1);
            k -= 1;
        }
    }
}

/// Eigenmomenta of the hologram Hamiltonian, sorted by `(Re, Im)`.
pub fn hologram_eigenmomenta(p: DiracParams) -> Result<[Complex; 4]> {
    eigenvalues4(&dirac_hologram_hamiltonian(p))
}
