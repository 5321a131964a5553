//! End-mode analysis under `omega2 = delta2`: bulk characteristic cubic and
//! the boundary conditions for a decaying zero mode.

use rayon::prelude::*;
use serde::Serialize;

use super::majorana::appendix_matrix;
use crate::error::{invalid, Error, Result};
use crate::format::sig12;
use crate::qlinalg::{r, ComplexMatrix, C64};

/// Coefficients `[a3, a2, a1, a0]` of the bulk characteristic cubic.
pub fn cubic_coefficients(beta: f64) -> Result<[f64; 4]> {
    if beta.cos().abs() <= 1e-12 {
        return invalid(format!("beta = {beta} sits on the tan(beta) pole"));
    }
    let b = beta.tan();
    let rt2 = 2f64.sqrt();
    Ok([
        2.0 * b * b + 1.0,
        -2.0 * rt2 * (b * b * b + b),
        2.0 * b * b - 1.0,
        rt2 * b,
    ])
}

fn horner(coef: &[f64], x: C64) -> C64 {
    coef.iter().fold(r(0.0), |acc, &a| acc * x + a)
}

fn derivative(coef: &[f64]) -> Vec<f64> {
    let deg = coef.len() - 1;
    coef[..deg]
        .iter()
        .enumerate()
        .map(|(k, a)| a * (deg - k) as f64)
        .collect()
}

fn newton(coef: &[f64], mut x: C64, iterations: usize) -> C64 {
    let d = derivative(coef);
    for _ in 0..iterations {
        let slope = horner(&d, x);
        if slope.norm() == 0.0 {
            break;
        }
        let step = horner(coef, x) / slope;
        x -= step;
        if step.norm() <= 1e-16 * x.norm().max(1.0) {
            break;
        }
    }
    x
}

/// Roots of a real cubic `[a3, a2, a1, a0]` from the companion matrix,
/// polished by Newton. A pair closer than `1e-6` is refined as a double
/// root through the derivative, which the companion eigenvalues alone only
/// resolve to about `sqrt(eps)`.
pub fn cubic_roots(coef: [f64; 4]) -> Result<[C64; 3]> {
    let [a3, a2, a1, a0] = coef;
    if a3 == 0.0 {
        return invalid("leading coefficient vanishes");
    }
    let companion = nalgebra::Matrix3::new(
        -a2 / a3, -a1 / a3, -a0 / a3,
        1.0, 0.0, 0.0,
        0.0, 1.0, 0.0,
    );
    let eig = companion.complex_eigenvalues();
    let mut roots: Vec<C64> = eig.iter().map(|&z| newton(&coef, z, 8)).collect();

    let pair = (0..3)
        .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
        .find(|&(i, j)| (roots[i] - roots[j]).norm() < 1e-6);
    if let Some((i, j)) = pair {
        let d = derivative(&coef);
        let centre = newton(&d, (roots[i] + roots[j]) * 0.5, 8);
        let curvature = horner(&derivative(&d), centre);
        let value = horner(&coef, centre);
        let scale = coef.iter().map(|a| a.abs()).fold(0.0, f64::max);
        let half_gap = if value.norm() <= 1e-14 * scale || curvature.norm() == 0.0 {
            r(0.0)
        } else {
            (-value * 2.0 / curvature).sqrt()
        };
        roots[i] = centre + half_gap;
        roots[j] = centre - half_gap;
    }
    if roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("cubic root finder produced non-finite roots".into()));
    }
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)));
    Ok([roots[0], roots[1], roots[2]])
}

/// Roots of the bulk cubic sorted by ascending modulus.
pub fn zero_mode_cubic(beta: f64) -> Result<[C64; 3]> {
    cubic_roots(cubic_coefficients(beta)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroModeReport {
    pub beta: f64,
    /// `(re, im)` pairs, ascending modulus.
    pub roots: [(f64, f64); 3],
    pub moduli: [f64; 3],
    pub inside_count: usize,
    /// Rank of the block-diagonal left/right boundary system.
    pub boundary_rank: usize,
    pub left_singular_values: [f64; 2],
    pub right_singular_values: [f64; 2],
    pub unpaired_mf: bool,
    pub gap_closed: bool,
}

/// Sites used to build the boundary rows; any length past the boundary
/// stencil gives the same rows.
const BOUNDARY_CHAIN: usize = 8;

fn singular_values(m: &ComplexMatrix) -> [f64; 2] {
    let sv = m.singular_values();
    let mut v = [sv[0], sv[1]];
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Boundary equations of the two decaying bulk solutions.
///
/// The left end uses Majorana rows 1 and 3 on the even-site ansatz
/// `v_{2j} = x^j`; the right end uses rows `2N-2` and `2N` on the odd-site
/// ansatz `v_{2j-1} = x^{N+1-j}`. A zero mode needs a nontrivial
/// combination of the two inside roots that satisfies both rows at one end.
pub fn boundary_nullspace(beta: f64, roots: &[C64; 3]) -> Result<ZeroModeReport> {
    let a = appendix_matrix(beta, BOUNDARY_CHAIN)?;
    let n = BOUNDARY_CHAIN;
    let moduli = roots.map(|z| z.norm());
    let inside: Vec<C64> = roots
        .iter()
        .copied()
        .filter(|z| z.norm() <= 1.0 + 1e-10)
        .collect();
    let gap_closed = moduli.iter().any(|m| (m - 1.0).abs() <= 1e-8);

    let mut report = ZeroModeReport {
        beta,
        roots: roots.map(|z| (z.re, z.im)),
        moduli,
        inside_count: inside.len(),
        boundary_rank: 0,
        left_singular_values: [0.0; 2],
        right_singular_values: [0.0; 2],
        unpaired_mf: false,
        gap_closed,
    };
    if inside.len() < 2 {
        return Ok(report);
    }
    let pair = [inside[0], inside[1]];

    let left = ComplexMatrix::from_fn(2, 2, |row, col| {
        let r_idx = [0, 2][row];
        (1..=n).fold(r(0.0), |acc, j| acc + pair[col].powu(j as u32) * a[(r_idx, 2 * j - 1)])
    });
    let right = ComplexMatrix::from_fn(2, 2, |row, col| {
        let r_idx = [2 * n - 3, 2 * n - 1][row];
        (1..=n).fold(r(0.0), |acc, j| {
            acc + pair[col].powu((n + 1 - j) as u32) * a[(r_idx, 2 * j - 2)]
        })
    });
    let ls = singular_values(&left);
    let rs = singular_values(&right);
    let scale = ls[0].max(rs[0]);
    let rank = ls.iter().chain(&rs).filter(|&&s| s > 1e-10 * scale).count();
    let singular = |s: [f64; 2]| s[1] <= 1e-10 * scale;

    report.boundary_rank = rank;
    report.left_singular_values = ls;
    report.right_singular_values = rs;
    report.unpaired_mf = (singular(ls) || singular(rs)) && !gap_closed;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1Row {
    pub beta: f64,
    pub moduli: [f64; 3],
}

/// Sorted root moduli over a `beta` grid, in grid order.
pub fn fig1_data(beta_grid: &[f64]) -> Result<Vec<Fig1Row>> {
    beta_grid
        .par_iter()
        .map(|&beta| {
            let roots = zero_mode_cubic(beta)?;
            Ok(Fig1Row { beta, moduli: roots.map(|z| z.norm()) })
        })
        .collect()
}

pub fn fig1_csv(rows: &[Fig1Row]) -> String {
    let mut out = String::from("beta,abs_x1,abs_x2,abs_x3\n");
    for row in rows {
        let [m1, m2, m3] = row.moduli;
        out.push_str(&format!("{},{},{},{}\n", sig12(row.beta), sig12(m1), sig12(m2), sig12(m3)));
    }
    out
}

/// Uniform interior grid `(k + 1/2) * (pi/2) / count`, avoiding both ends.
pub fn interior_beta_grid(count: usize) -> Vec<f64> {
    let step = std::f64::consts::FRAC_PI_2 / count as f64;
    (0..count).map(|k| (k as f64 + 0.5) * step).collect()
}
