use serde::Serialize;

use crate::error::{invalid, Result};

/// Chemical potentials, hoppings and pairings of the fermionized chain,
/// nearest (`1`) and next-nearest (`2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KitaevParams {
    pub mu1: f64,
    pub mu2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

pub fn kitaev_params(eta: f64, beta: f64) -> KitaevParams {
    let (se, ce) = eta.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let se2 = se * se;
    KitaevParams {
        mu1: se2 * (1.0 + sb * sb),
        mu2: 2.0 * se2 * cb * cb,
        omega1: -(2f64.sqrt()) * se2 * cb * sb,
        omega2: -se2 * cb * cb,
        delta1: -(2f64.sqrt()) * se * ce * cb,
        delta2: 2.0 * se * ce * sb,
    }
}

/// The three `2|omega| > |mu|`-type conditions with `sin^2(eta)` divided
/// out. At most one holds for any `beta`.
pub fn mf_inequalities(eta: f64, beta: f64) -> Result<[bool; 3]> {
    if eta.sin().abs() < 1e-12 {
        return invalid("conditions are undefined when sin(eta) = 0");
    }
    let (sb, cb) = beta.sin_cos();
    let hop1 = 2f64.sqrt() * (2.0 * beta).sin().abs();
    let mu1 = 1.0 + sb * sb;
    let mu2 = 2.0 * cb * cb;
    Ok([hop1 > mu1, hop1 > mu2, mu2 > mu1])
}
