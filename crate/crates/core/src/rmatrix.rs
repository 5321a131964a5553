//! Two-body Type-II R-matrix, its braid limit, and the Yang-Baxter check.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use serde::Serialize;

use crate::qlinalg::{c, cis, embed, from_rows, r, ComplexMatrix, ComplexVector, ALGEBRAIC_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoBodyAngles {
    pub theta: f64,
    /// Literal phase carried by the corner entries of the 4x4 matrix.
    pub chi: f64,
}

/// The traceless part shared by `B` and `R`: corner entries `±e^{±i chi}`,
/// middle block `[[0, 1], [-1, 0]]`. Squares to `-I`.
fn twist(chi: f64) -> ComplexMatrix {
    let z = r(0.0);
    let one = r(1.0);
    from_rows(&[
        &[z, z, z, cis(chi)],
        &[z, z, one, z],
        &[z, -one, z, z],
        &[-cis(-chi), z, z, z],
    ])
}

/// `R(theta, chi) = cos(theta) I + sin(theta) M`.
pub fn rmat(theta: f64, chi: f64) -> ComplexMatrix {
    ComplexMatrix::identity(4, 4) * r(theta.cos()) + twist(chi) * r(theta.sin())
}

pub fn rmat_at(angles: TwoBodyAngles) -> ComplexMatrix {
    rmat(angles.theta, angles.chi)
}

/// Braid limit `(I + M) / sqrt(2)`.
pub fn braid_b(chi: f64) -> ComplexMatrix {
    (ComplexMatrix::identity(4, 4) + twist(chi)) * r(FRAC_1_SQRT_2)
}

/// `R|00>, R|01>, R|10>, R|11>`.
pub fn two_qubit_states(theta: f64, chi: f64) -> [ComplexVector; 4] {
    let m = rmat(theta, chi);
    std::array::from_fn(|k| m.column(k).into_owned())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YbeResidual {
    pub lhs_rhs_norm: f64,
    pub satisfied: bool,
}

/// `R12(t1) R23(t2) R12(t3)` on three qubits.
pub fn r12_r23_r12(theta1: f64, theta2: f64, theta3: f64, chi: f64) -> ComplexMatrix {
    let r12 = |t: f64| embed(&rmat(t, chi), 1, 3).expect("4x4 fits in 3 sites");
    let r23 = |t: f64| embed(&rmat(t, chi), 2, 3).expect("4x4 fits in 3 sites");
    r12(theta1) * r23(theta2) * r12(theta3)
}

/// `R23(t3) R12(t2) R23(t1)` on three qubits.
pub fn r23_r12_r23(theta1: f64, theta2: f64, theta3: f64, chi: f64) -> ComplexMatrix {
    let r12 = |t: f64| embed(&rmat(t, chi), 1, 3).expect("4x4 fits in 3 sites");
    let r23 = |t: f64| embed(&rmat(t, chi), 2, 3).expect("4x4 fits in 3 sites");
    r23(theta3) * r12(theta2) * r23(theta1)
}

pub fn ybe_residual_tol(theta1: f64, theta2: f64, theta3: f64, chi: f64, tol: f64) -> YbeResidual {
    let lhs = r12_r23_r12(theta1, theta2, theta3, chi);
    let rhs = r23_r12_r23(theta1, theta2, theta3, chi);
    let lhs_rhs_norm = (lhs - rhs).norm();
    YbeResidual { lhs_rhs_norm, satisfied: lhs_rhs_norm <= tol }
}

pub fn ybe_residual(theta1: f64, theta2: f64, theta3: f64, chi: f64) -> YbeResidual {
    ybe_residual_tol(theta1, theta2, theta3, chi, ALGEBRAIC_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzSum {
    pub theta2: f64,
    /// `cos(theta1 - theta3)` vanished, so `tan(theta2)` is infinite.
    pub pole: bool,
}

/// Middle angle making `R12 R23 R12 = R23 R12 R23`:
/// `tan(theta2) = (tan t1 + tan t3) / (1 + tan t1 tan t3)`.
pub fn lorentz_add(theta1: f64, theta3: f64) -> LorentzSum {
    let num = (theta1 + theta3).sin();
    let den = (theta1 - theta3).cos();
    if den.abs() <= 1e-15 && num.abs() > 1e-15 {
        return LorentzSum { theta2: FRAC_PI_2.copysign(num), pole: true };
    }
    LorentzSum { theta2: num.atan2(den), pole: false }
}

/// Generator `C` with `R(theta, 0) = exp(-i theta C)`.
pub fn charge_conjugation_generator() -> ComplexMatrix {
    twist(0.0) * c(0.0, 1.0)
}
