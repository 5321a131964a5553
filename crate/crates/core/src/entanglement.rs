//! Bipartite concurrences of three-qubit pure states, polytope coordinates,
//! and the two-qubit Wootters concurrence.
//!
//! Squared concurrences of a pure state use the scale on which a maximally
//! entangled cut gives `1/4`: `C^2 = det(rho_1) = (1 - tr rho_1^2) / 2`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::qlinalg::{from_rows, herm_eig, partial_trace, r, ComplexMatrix, ComplexVector, I};
use crate::rmatrix::lorentz_add;
use crate::threebody::EtaBeta;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceTriple {
    pub c1_23_sq: f64,
    pub c2_13_sq: f64,
    pub c3_12_sq: f64,
}

impl ConcurrenceTriple {
    pub fn as_array(&self) -> [f64; 3] {
        [self.c1_23_sq, self.c2_13_sq, self.c3_12_sq]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

const NORM_TOL: f64 = 1e-10;

fn check_state(state: &ComplexVector) -> Result<()> {
    if state.len() != 8 {
        return invalid(format!("expected an 8-dim state, got {}", state.len()));
    }
    let n = state.norm();
    if (n - 1.0).abs() > NORM_TOL {
        return invalid(format!("state norm {n} is not 1"));
    }
    Ok(())
}

/// `C^2` across the cut separating `site` (1-based) from the other two:
/// `|a0|^2 |a1|^2 - |<a1|a0>|^2` where `a_b` collects amplitudes with that
/// qubit equal to `b`.
fn cut_concurrence_sq(state: &ComplexVector, site: usize) -> f64 {
    let bit = 3 - site;
    let (mut n0, mut n1) = (0.0, 0.0);
    let mut overlap = r(0.0);
    for k in (0..8).filter(|k| (k >> bit) & 1 == 0) {
        let a0 = state[k];
        let a1 = state[k | (1 << bit)];
        n0 += a0.norm_sqr();
        n1 += a1.norm_sqr();
        overlap += a0 * a1.conj();
    }
    n0 * n1 - overlap.norm_sqr()
}

pub fn concurrence3(state: &ComplexVector) -> Result<ConcurrenceTriple> {
    check_state(state)?;
    let [c1, c2, c3] = [1, 2, 3].map(|s| cut_concurrence_sq(state, s));
    for (site, val) in [(1, c1), (2, c2), (3, c3)] {
        let rho = partial_trace(state, &[site])?;
        let purity = (&rho * &rho).trace().re;
        let by_trace = (1.0 - purity) / 2.0;
        if (by_trace - val).abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "cut {site}: determinant form {val} disagrees with purity form {by_trace}"
            )));
        }
    }
    Ok(ConcurrenceTriple { c1_23_sq: c1, c2_13_sq: c2, c3_12_sq: c3 })
}

/// Shared concurrences of every column of the three-body matrix.
pub fn concurrence_closed(eb: EtaBeta) -> ConcurrenceTriple {
    let (se2, ce2) = (eb.eta.sin().powi(2), eb.eta.cos().powi(2));
    let (sb2, cb2) = (eb.beta.sin().powi(2), eb.beta.cos().powi(2));
    let outer = (ce2 + 0.5 * cb2 * se2) * (0.5 * cb2 * se2 + sb2 * se2);
    let middle = (ce2 + sb2 * se2) * (cb2 * se2);
    ConcurrenceTriple { c1_23_sq: outer, c2_13_sq: middle, c3_12_sq: outer }
}

/// `sin(2 theta2)` as a function of the outer rapidities' `sin(2 theta)`.
pub fn sin2_middle(s1: f64, s3: f64) -> f64 {
    (s1 + s3) / (1.0 + s1 * s3)
}

/// The same triple expressed through the factorized rapidities.
pub fn concurrence_from_thetas(theta1: f64, theta3: f64) -> ConcurrenceTriple {
    let s2 = (2.0 * lorentz_add(theta1, theta3).theta2).sin();
    let outer = 0.25 * s2 * s2;
    let inner = s2 * ((2.0 * theta1).sin() + (2.0 * theta3).sin()) - 1.0;
    let middle = 0.25 - 0.25 * inner * inner;
    ConcurrenceTriple { c1_23_sq: outer, c2_13_sq: middle, c3_12_sq: outer }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolytopeCoords {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl PolytopeCoords {
    pub fn as_array(&self) -> [f64; 3] {
        [self.lambda1, self.lambda2, self.lambda3]
    }

    /// Each coordinate is bounded by the sum of the other two.
    pub fn in_polytope(&self, tol: f64) -> bool {
        let l = self.as_array();
        let total: f64 = l.iter().sum();
        l.iter().all(|&x| x <= total - x + tol)
    }
}

/// Smaller eigenvalue of each one-qubit marginal.
pub fn polytope_lambdas(state: &ComplexVector) -> Result<PolytopeCoords> {
    check_state(state)?;
    let mut l = [0.0; 3];
    for (k, slot) in l.iter_mut().enumerate() {
        let rho = partial_trace(state, &[k + 1])?;
        let rho = (&rho + rho.adjoint()) * r(0.5);
        *slot = herm_eig(&rho)?.eigenvalues[0].max(0.0);
    }
    let coords = PolytopeCoords { lambda1: l[0], lambda2: l[1], lambda3: l[2] };
    if !coords.in_polytope(1e-12) {
        return Err(Error::Numerical(format!("{coords:?} violates the polytope inequality")));
    }
    Ok(coords)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassTag {
    FullySeparable,
    Biseparable,
    Genuine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EntanglementClass {
    pub tag: ClassTag,
    pub zero_count: u8,
}

pub const CLASSIFY_TOL: f64 = 1e-9;

/// Counts vanishing cuts. A pure state with two product cuts is a full
/// product, so a zero count of two is reported as fully separable.
pub fn classify(triple: &ConcurrenceTriple, tol: f64) -> EntanglementClass {
    let zero_count = triple.as_array().iter().filter(|&&x| x <= tol).count() as u8;
    let tag = match zero_count {
        0 => ClassTag::Genuine,
        1 => ClassTag::Biseparable,
        _ => ClassTag::FullySeparable,
    };
    EntanglementClass { tag, zero_count }
}

fn sigma_y_y() -> ComplexMatrix {
    let z = r(0.0);
    let sy = from_rows(&[&[z, -I], &[I, z]]);
    sy.kronecker(&sy)
}

/// Wootters concurrence of a two-qubit density matrix (max 1).
pub fn wootters2(rho: &ComplexMatrix) -> Result<f64> {
    const TOL: f64 = 1e-10;
    if rho.shape() != (4, 4) {
        return invalid(format!("expected a 4x4 density matrix, got {:?}", rho.shape()));
    }
    if (rho - rho.adjoint()).norm() > TOL {
        return invalid("density matrix is not Hermitian");
    }
    if (rho.trace() - r(1.0)).norm() > TOL {
        return invalid("density matrix trace is not 1");
    }
    let rho = (rho + rho.adjoint()) * r(0.5);
    let eig = herm_eig(&rho)?;
    if eig.eigenvalues[0] < -TOL {
        return invalid("density matrix is not positive semidefinite");
    }
    // Eigenvalues of rho rho~ are the squared singular values of
    // sqrt(rho) Y sqrt(rho)*, with Y = sigma_y x sigma_y. Eigenvalue noise
    // below 1e-13 is dropped so rank-deficient states keep full accuracy.
    let v = &eig.eigenvectors;
    let sqrt_diag = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        4,
        eig.eigenvalues
            .iter()
            .map(|&x| r(if x > 1e-13 { x.sqrt() } else { 0.0 })),
    ));
    let sqrt_rho = v * sqrt_diag * v.adjoint();
    let a = &sqrt_rho * sigma_y_y() * sqrt_rho.conjugate();
    let mut lambdas: Vec<f64> = a.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}
