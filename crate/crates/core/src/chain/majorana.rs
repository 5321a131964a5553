//! Real antisymmetric Majorana matrix `A` with `H = (i/4) sum A_kl c_k c_l`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use super::fermion::{fermion_quadratic, FermionQuadratic};
use super::kitaev::kitaev_params;
use super::{Boundary, ChainSpec};
use crate::error::{invalid, Result};
use crate::qlinalg::{cis, ComplexMatrix, I};

const ASSUMPTION_TOL: f64 = 1e-10;

/// Majorana matrix of a fermion table, with
/// `c_{2j-1} = e^{i p} a+_j + e^{-i p} a_j`, `c_{2j} = i e^{i p} a+_j - i e^{-i p} a_j`.
pub(crate) fn majorana_form(table: &FermionQuadratic, phase: f64) -> DMatrix<f64> {
    let n = table.n_sites;
    let mut w = ComplexMatrix::zeros(2 * n, 2 * n);
    let (up, down) = (cis(phase) * 0.5, cis(-phase) * 0.5);
    for j in 0..n {
        w[(j, 2 * j)] = up;
        w[(j, 2 * j + 1)] = I * up;
        w[(n + j, 2 * j)] = down;
        w[(n + j, 2 * j + 1)] = -I * down;
    }
    let m = w.adjoint() * table.bdg() * w;
    let a = m.map(|z| 2.0 * z.im);
    (&a - a.transpose()) * 0.5
}

/// Majorana matrix of an open chain under `omega2 = delta2`.
///
/// The Majorana phase is locked to `phi + pi/2`, which removes the pairing
/// phase and gives the row layout of the standard end-mode analysis.
pub fn majorana_matrix(spec: &ChainSpec) -> Result<DMatrix<f64>> {
    if spec.boundary != Boundary::Open {
        return invalid("the Majorana matrix is defined for open chains");
    }
    let k = kitaev_params(spec.eta, spec.beta);
    if (k.omega2 - k.delta2).abs() > ASSUMPTION_TOL {
        return invalid(format!(
            "omega2 = {} differs from delta2 = {}; use fermion_quadratic for the general form",
            k.omega2, k.delta2
        ));
    }
    let table = fermion_quadratic(spec)?;
    Ok(majorana_form(&table, spec.phi + FRAC_PI_2))
}

/// `eta` solving `omega2 = delta2` for a given `beta`:
/// `tan(eta) = -2 sin(beta) / cos^2(beta)`.
pub fn eta_for_equal_nnn(beta: f64) -> f64 {
    let (sb, cb) = beta.sin_cos();
    (-2.0 * sb).atan2(cb * cb)
}

/// `A / omega2` for the chain with `omega2 = delta2`, depending on `beta`
/// only through `b = tan(beta)`.
pub fn appendix_matrix(beta: f64, n_sites: usize) -> Result<DMatrix<f64>> {
    let (sb, cb) = beta.sin_cos();
    if cb.abs() <= 1e-12 || sb.abs() <= 1e-12 {
        return invalid(format!("beta = {beta} makes tan(beta) zero or infinite"));
    }
    let eta = eta_for_equal_nnn(beta);
    let omega2 = kitaev_params(eta, beta).omega2;
    let a = majorana_matrix(&ChainSpec::open(n_sites, eta, beta, 0.0))?;
    Ok(a / omega2)
}
