//! One-magnon entanglement transfer on the `eta = pi/2` ring, with an
//! Aharonov-Casher phase `theta` on every bond.
//!
//! A single down-to-up flip on the all-down ring stays a single flip, so the
//! dynamics lives in the `N`-dimensional one-magnon block. The initial state
//! is the Bell pair `(S+_{m1} + S+_{m2})|down...down> / sqrt 2`.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::wootters2;
use crate::error::{invalid, Result};
use crate::format::sig12;
use crate::qlinalg::{cis, matexp_skew, partial_trace, r, ComplexMatrix, ComplexVector, C64, I};

/// Largest ring for which the full `2^N` state is built in checks.
pub const MAX_FULL_STATE_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferSpec {
    pub n_sites: usize,
    pub beta: f64,
    /// Phase per nearest-neighbour bond; next-nearest bonds carry twice it.
    pub theta_ac: f64,
    /// Initially entangled sites, 1-based.
    pub m1: usize,
    pub m2: usize,
    pub t_max: f64,
    pub n_t: usize,
}

impl TransferSpec {
    pub fn new(n_sites: usize, beta: f64, theta_ac: f64, m1: usize, m2: usize) -> Self {
        Self { n_sites, beta, theta_ac, m1, m2, t_max: 20.0, n_t: 5001 }
    }

    pub fn with_theta(self, theta_ac: f64) -> Self {
        Self { theta_ac, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 3 {
            return invalid(format!("ring needs at least 3 sites, got {}", self.n_sites));
        }
        if !(1 <= self.m1 && self.m1 < self.m2 && self.m2 <= self.n_sites) {
            return invalid(format!(
                "initial sites must satisfy 1 <= m1 < m2 <= {}, got ({}, {})",
                self.n_sites, self.m1, self.m2
            ));
        }
        if self.n_t < 2 {
            return invalid("time grid needs at least 2 points");
        }
        if ![self.beta, self.theta_ac, self.t_max].iter().all(|x| x.is_finite()) || self.t_max < 0.0 {
            return invalid("beta, theta and t_max must be finite with t_max >= 0");
        }
        Ok(())
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n_sites {
            return invalid(format!("site {site} outside 1..={}", self.n_sites));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let step = self.t_max / (self.n_t - 1) as f64;
        (0..self.n_t).map(|i| i as f64 * step).collect()
    }
}

/// Nearest- and next-nearest-neighbour amplitudes.
fn couplings(beta: f64) -> (f64, f64) {
    let cb = beta.cos();
    (SQRT_2 * (2.0 * beta).sin(), cb * cb)
}

/// One-magnon block of the ring with the constant `2N` removed.
///
/// `H[n, n+1] = sqrt2 sin(2 beta) e^{-i theta}`,
/// `H[n, n+2] = cos^2(beta) e^{-2 i theta}`, diagonal `-4`.
pub fn one_magnon_h(spec: &TransferSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n_sites;
    let (nn, nnn) = couplings(spec.beta);
    let mut h = ComplexMatrix::from_diagonal_element(n, n, r(-4.0));
    for site in 0..n {
        for (dist, amp) in [(1, nn), (2, nnn)] {
            let other = (site + dist) % n;
            let z = cis(-(dist as f64) * spec.theta_ac) * amp;
            h[(site, other)] += z;
            h[(other, site)] += z.conj();
        }
    }
    Ok(h)
}

/// Closed-form energies `E_j`, `j = 1..N`.
pub fn ej_spectrum(spec: &TransferSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let (nn, nnn) = couplings(spec.beta);
    let n = spec.n_sites as f64;
    Ok((1..=spec.n_sites)
        .map(|j| {
            let q = 2.0 * PI * j as f64 / n;
            -4.0 + 2.0 * nn * (spec.theta_ac - q).cos() + 2.0 * nnn * (2.0 * spec.theta_ac - 2.0 * q).cos()
        })
        .collect())
}

/// Fourier weights `w[k][j]` with `alpha_k(t) = sum_j w[k][j] e^{-i E_j t}`.
struct Propagator {
    energies: Vec<f64>,
    weights: Vec<Vec<C64>>,
}

impl Propagator {
    fn new(spec: &TransferSpec) -> Result<Self> {
        let energies = ej_spectrum(spec)?;
        let n = spec.n_sites;
        let norm = 1.0 / (SQRT_2 * n as f64);
        let weights = (1..=n)
            .map(|k| {
                (1..=n)
                    .map(|j| {
                        let phase = |m: usize| {
                            cis(2.0 * PI * (j * (k + n - m)) as f64 / n as f64)
                        };
                        (phase(spec.m1) + phase(spec.m2)) * norm
                    })
                    .collect()
            })
            .collect();
        Ok(Self { energies, weights })
    }

    fn phases(&self, t: f64) -> Vec<C64> {
        self.energies.iter().map(|&e| cis(-e * t)).collect()
    }

    fn amplitude(&self, k: usize, phases: &[C64]) -> C64 {
        self.weights[k - 1].iter().zip(phases).map(|(w, p)| w * p).sum()
    }

    fn concurrence(&self, l1: usize, l2: usize, t: f64) -> f64 {
        let p = self.phases(t);
        2.0 * self.amplitude(l1, &p).norm() * self.amplitude(l2, &p).norm()
    }
}

/// Closed-form one-magnon amplitudes `alpha_1..alpha_N` at time `t`.
pub fn alpha_t(spec: &TransferSpec, t: f64) -> Result<ComplexVector> {
    let prop = Propagator::new(spec)?;
    let p = prop.phases(t);
    Ok(ComplexVector::from_iterator(
        spec.n_sites,
        (1..=spec.n_sites).map(|k| prop.amplitude(k, &p)),
    ))
}

pub fn initial_state(spec: &TransferSpec) -> Result<ComplexVector> {
    spec.validate()?;
    let mut v = ComplexVector::zeros(spec.n_sites);
    v[spec.m1 - 1] = r(1.0 / SQRT_2);
    v[spec.m2 - 1] = r(1.0 / SQRT_2);
    Ok(v)
}

/// `exp(-i H t)` applied to the initial Bell pair.
pub fn alpha_t_direct(spec: &TransferSpec, t: f64) -> Result<ComplexVector> {
    let h = one_magnon_h(spec)?;
    let u = matexp_skew(&(h * -I), t)?;
    Ok(u * initial_state(spec)?)
}

#[derive(Debug, Clone)]
pub struct AmplitudeTimeline {
    pub times: Vec<f64>,
    /// `alphas[(k - 1, i)]` is `alpha_k(times[i])`.
    pub alphas: ComplexMatrix,
}

impl AmplitudeTimeline {
    pub fn max_norm_error(&self) -> f64 {
        self.alphas
            .column_iter()
            .map(|col| (col.norm_squared() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn amplitude_timeline(spec: &TransferSpec) -> Result<AmplitudeTimeline> {
    let prop = Propagator::new(spec)?;
    let times = spec.times();
    let n = spec.n_sites;
    let mut alphas = ComplexMatrix::zeros(n, times.len());
    for (i, &t) in times.iter().enumerate() {
        let p = prop.phases(t);
        for k in 1..=n {
            alphas[(k - 1, i)] = prop.amplitude(k, &p);
        }
    }
    Ok(AmplitudeTimeline { times, alphas })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcurrenceTimeline {
    pub l1: usize,
    pub l2: usize,
    pub times: Vec<f64>,
    pub c_values: Vec<f64>,
}

fn check_targets(spec: &TransferSpec, l1: usize, l2: usize) -> Result<()> {
    spec.validate()?;
    spec.check_site(l1)?;
    spec.check_site(l2)?;
    if l1 == l2 {
        return invalid(format!("target sites must differ, got l1 = l2 = {l1}"));
    }
    Ok(())
}

/// `C = 2 |alpha_l1| |alpha_l2|` at time `t`.
pub fn concurrence_t(spec: &TransferSpec, l1: usize, l2: usize, t: f64) -> Result<f64> {
    check_targets(spec, l1, l2)?;
    Ok(Propagator::new(spec)?.concurrence(l1, l2, t))
}

pub fn concurrence_timeline(spec: &TransferSpec, l1: usize, l2: usize) -> Result<ConcurrenceTimeline> {
    check_targets(spec, l1, l2)?;
    let prop = Propagator::new(spec)?;
    let times = spec.times();
    let c_values = times.iter().map(|&t| prop.concurrence(l1, l2, t)).collect();
    Ok(ConcurrenceTimeline { l1, l2, times, c_values })
}

/// Embeds one-magnon amplitudes into the full `2^N` register.
pub fn full_state(alphas: &ComplexVector) -> Result<ComplexVector> {
    let n = alphas.len();
    if !(1..=MAX_FULL_STATE_SITES).contains(&n) {
        return invalid(format!("full state limited to {MAX_FULL_STATE_SITES} sites, got {n}"));
    }
    let mut psi = ComplexVector::zeros(1 << n);
    for (k, &a) in alphas.iter().enumerate() {
        psi[crate::chain::one_magnon_index(n, k + 1)] = a;
    }
    Ok(psi)
}

/// Wootters concurrence of sites `l1, l2` from the full register state.
pub fn concurrence_full_state(spec: &TransferSpec, l1: usize, l2: usize, t: f64) -> Result<f64> {
    check_targets(spec, l1, l2)?;
    let psi = full_state(&alpha_t(spec, t)?)?;
    wootters2(&partial_trace(&psi, &[l1, l2])?)
}

/// Concurrence surface over `(theta, t)`, theta-major.
#[derive(Debug, Clone)]
pub struct Surface {
    pub thetas: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Surface {
    pub fn at(&self, theta_index: usize, t_index: usize) -> f64 {
        self.values[theta_index * self.times.len() + t_index]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(40 * self.values.len() + 32);
        out.push_str("theta,t,concurrence\n");
        for (i, &theta) in self.thetas.iter().enumerate() {
            let th = sig12(theta);
            for (j, &t) in self.times.iter().enumerate() {
                out.push_str(&format!("{th},{},{}\n", sig12(t), sig12(self.at(i, j))));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepReport {
    pub c_max: f64,
    pub theta_star: f64,
    pub t_star: f64,
    pub n: usize,
    pub beta: f64,
    pub m1: usize,
    pub m2: usize,
    pub l1: usize,
    pub l2: usize,
}

fn check_grids(thetas: &[f64], times: &[f64]) -> Result<()> {
    if thetas.is_empty() || times.is_empty() {
        return invalid("sweep grids must be nonempty");
    }
    if !thetas.iter().chain(times).all(|x| x.is_finite()) {
        return invalid("sweep grids must be finite");
    }
    Ok(())
}

/// Row of concurrences at one theta over the time grid.
fn theta_row(spec: &TransferSpec, theta: f64, l1: usize, l2: usize, times: &[f64]) -> Result<Vec<f64>> {
    let prop = Propagator::new(&spec.with_theta(theta))?;
    Ok(times.iter().map(|&t| prop.concurrence(l1, l2, t)).collect())
}

pub fn surface(spec: &TransferSpec, l1: usize, l2: usize, thetas: &[f64], times: &[f64]) -> Result<Surface> {
    check_targets(spec, l1, l2)?;
    check_grids(thetas, times)?;
    let rows: Vec<Vec<f64>> = thetas
        .par_iter()
        .map(|&th| theta_row(spec, th, l1, l2, times))
        .collect::<Result<_>>()?;
    Ok(Surface {
        thetas: thetas.to_vec(),
        times: times.to_vec(),
        values: rows.concat(),
    })
}

/// Golden-section maximum of `f` on `[lo, hi]`, to `tol` in the argument.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

fn grid_step(grid: &[f64], i: usize) -> (f64, f64) {
    let lo = if i > 0 { grid[i - 1] } else { grid[i] };
    let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
    (lo, hi)
}

/// Refines a grid maximum: alternating golden-section passes in theta
/// (when the theta grid has more than one point) and t, within one grid
/// cell on each side, finishing with t to `1e-6`.
fn refine(
    spec: &TransferSpec,
    l1: usize,
    l2: usize,
    thetas: &[f64],
    times: &[f64],
    best: (usize, usize),
) -> Result<(f64, f64, f64)> {
    let (ti, tj) = best;
    let (th_lo, th_hi) = grid_step(thetas, ti);
    let (t_lo, t_hi) = grid_step(times, tj);
    let mut theta = thetas[ti];
    let mut t = times[tj];
    let mut value = Propagator::new(&spec.with_theta(theta))?.concurrence(l1, l2, t);
    for _ in 0..4 {
        if th_hi > th_lo {
            let (th, v) = golden_max(
                |x| match Propagator::new(&spec.with_theta(x)) {
                    Ok(p) => p.concurrence(l1, l2, t),
                    Err(_) => f64::NEG_INFINITY,
                },
                th_lo,
                th_hi,
                1e-9,
            );
            if v >= value {
                theta = th;
                value = v;
            }
        }
        if t_hi > t_lo {
            let prop = Propagator::new(&spec.with_theta(theta))?;
            let (tt, v) = golden_max(|x| prop.concurrence(l1, l2, x), t_lo, t_hi, 1e-6);
            if v >= value {
                t = tt;
                value = v;
            }
        }
    }
    Ok((theta, t, value))
}

fn report(spec: &TransferSpec, l1: usize, l2: usize, (theta, t, c): (f64, f64, f64)) -> SweepReport {
    SweepReport {
        c_max: c,
        theta_star: theta,
        t_star: t,
        n: spec.n_sites,
        beta: spec.beta,
        m1: spec.m1,
        m2: spec.m2,
        l1,
        l2,
    }
}

/// First index of the largest value, so ties resolve in grid order.
fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}

/// Surface plus its refined maximum.
pub fn sweep(
    spec: &TransferSpec,
    l1: usize,
    l2: usize,
    thetas: &[f64],
    times: &[f64],
) -> Result<(Surface, SweepReport)> {
    let surf = surface(spec, l1, l2, thetas, times)?;
    let (idx, _) = argmax(surf.values.iter().copied());
    let best = (idx / times.len(), idx % times.len());
    let refined = refine(spec, l1, l2, thetas, times, best)?;
    Ok((surf, report(spec, l1, l2, refined)))
}

/// Refined maximum without keeping the surface in memory.
pub fn maximize(spec: &TransferSpec, l1: usize, l2: usize, thetas: &[f64], times: &[f64]) -> Result<SweepReport> {
    check_targets(spec, l1, l2)?;
    check_grids(thetas, times)?;
    let row_best: Vec<(usize, f64)> = thetas
        .par_iter()
        .map(|&th| theta_row(spec, th, l1, l2, times).map(|row| argmax(row.into_iter())))
        .collect::<Result<_>>()?;
    let (ti, _) = argmax(row_best.iter().map(|b| b.1));
    let refined = refine(spec, l1, l2, thetas, times, (ti, row_best[ti].0))?;
    Ok(report(spec, l1, l2, refined))
}

/// Uniform grid of `count` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count).map(|i| lo + i as f64 * step).collect()
        }
    }
}

/// Oscillation frequency of `C_{3,4}` on the four-site ring started from
/// the `(1, 2)` pair: `C = sin^2(omega t)`.
pub fn n4_frequency(beta: f64) -> f64 {
    let (nn, nnn) = couplings(beta);
    nn + 2.0 * nnn
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{one_magnon_block, spin_chain_matrix, ChainSpec};
    use crate::qlinalg::herm_eig;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn blockade_beta() -> f64 {
        (-(6f64.sqrt()) / 3.0).acos()
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn validation() {
        let ok = TransferSpec::new(6, 0.3, 0.0, 1, 2);
        assert!(ok.validate().is_ok());
        assert!(TransferSpec::new(2, 0.3, 0.0, 1, 2).validate().is_err());
        assert!(TransferSpec::new(6, 0.3, 0.0, 2, 2).validate().is_err());
        assert!(TransferSpec::new(6, 0.3, 0.0, 3, 2).validate().is_err());
        assert!(TransferSpec::new(6, 0.3, 0.0, 1, 7).validate().is_err());
        assert!(TransferSpec { n_t: 1, ..ok }.validate().is_err());
        assert!(concurrence_t(&ok, 3, 3, 1.0).is_err());
        assert!(concurrence_t(&ok, 0, 3, 1.0).is_err());
        assert!(surface(&ok, 1, 2, &[], &[0.0]).is_err());
    }

    #[test]
    fn hopping_free_point() {
        let h = one_magnon_h(&TransferSpec::new(5, FRAC_PI_2, 0.7, 1, 2)).unwrap();
        let off = h.clone() - ComplexMatrix::from_diagonal(&h.diagonal());
        assert!(off.norm() < 1e-15);
        assert!(h.diagonal().iter().all(|z| (z - r(-4.0)).norm() < 1e-15));
    }

    #[test]
    fn block_of_the_spin_ring() {
        for (n, beta) in [(4, 0.4), (6, 1.1), (7, -0.3)] {
            let spin = spin_chain_matrix(&ChainSpec::periodic(n, FRAC_PI_2, beta, 0.8)).unwrap();
            let block = one_magnon_block(&spin, n);
            let h = one_magnon_h(&TransferSpec::new(n, beta, 0.0, 1, 2)).unwrap();
            let shifted = h + ComplexMatrix::from_diagonal_element(n, n, r(2.0 * n as f64));
            assert!((block - shifted).norm() < 1e-12, "n {n} beta {beta}");
        }
    }

    #[test]
    fn n6_spectrum_values() {
        let spec = TransferSpec::new(6, 0.5f64.acos(), 0.0, 1, 2);
        let e = ej_spectrum(&spec).unwrap();
        // sqrt2 sin(2 beta) = sqrt(3/2), cos^2 beta = 1/4
        let a = 1.5f64.sqrt();
        let expect = [
            -4.0 + a - 0.25,
            -4.0 - a - 0.25,
            -4.0 - 2.0 * a + 0.5,
            -4.0 - a - 0.25,
            -4.0 + a - 0.25,
            -4.0 + 2.0 * a + 0.5,
        ];
        for (x, y) in e.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14, "{e:?}");
        }
    }

    #[test]
    fn n4_blockade_levels() {
        let e = ej_spectrum(&TransferSpec::new(4, blockade_beta(), 0.0, 1, 2)).unwrap();
        // j = 1 and j = 3 are the odd modes driving the transfer
        assert!((e[0] - e[2]).abs() < 1e-14);
        assert!((e[1] - e[3]).abs() > 1.0);
    }

    #[test]
    fn starts_on_the_pair() {
        let spec = TransferSpec::new(7, 0.9, 0.4, 2, 5);
        let a = alpha_t(&spec, 0.0).unwrap();
        assert!((a - initial_state(&spec).unwrap()).norm() < 1e-14);
        assert!((concurrence_t(&spec, 2, 5, 0.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn n4_amplitudes() {
        let beta = 0.35;
        let spec = TransferSpec::new(4, beta, 0.0, 1, 2);
        let w = n4_frequency(beta);
        for t in [0.3, 1.1, 2.9] {
            let a = alpha_t(&spec, t).unwrap();
            let (cs, sn) = ((w * t).cos().abs() / SQRT_2, (w * t).sin().abs() / SQRT_2);
            for (k, expect) in [cs, cs, sn, sn].into_iter().enumerate() {
                assert!((a[k].norm() - expect).abs() < 1e-12);
            }
            let c34 = concurrence_t(&spec, 3, 4, t).unwrap();
            assert!((c34 - (w * t).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn n4_blockade() {
        assert!(n4_frequency(blockade_beta()).abs() < 1e-15);
        let spec = TransferSpec::new(4, blockade_beta(), 0.0, 1, 2);
        let tl = concurrence_timeline(&TransferSpec { t_max: 30.0, n_t: 301, ..spec }, 3, 4).unwrap();
        assert!(tl.c_values.iter().all(|&c| c < 1e-14));
    }

    #[test]
    fn frequency_stationary_point() {
        let beta = (3f64.sqrt() / 3.0).acos() / 2.0;
        let h = 1e-5;
        let slope = (n4_frequency(beta + h) - n4_frequency(beta - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-10);
        // analytic derivative 2 sqrt2 cos(2b) - 2 sin(2b)
        let exact = 2.0 * SQRT_2 * (2.0 * beta).cos() - 2.0 * (2.0 * beta).sin();
        assert!(exact.abs() < 1e-14);
        assert!((n4_frequency(0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn no_field_maximum() {
        let spec = TransferSpec::new(6, 0.5f64.acos(), 0.0, 1, 2);
        let times = linspace(0.0, 20.0, 5001);
        let rep = maximize(&spec, 3, 4, &[0.0], &times).unwrap();
        // the largest value on [0, 20] lies before the reported peak near 14.7
        assert!((rep.c_max - 0.45896).abs() < 5e-5, "{rep:?}");
        let late = linspace(12.0, 20.0, 2001);
        let rep = maximize(&spec, 3, 4, &[0.0], &late).unwrap();
        assert!((rep.c_max - 0.455).abs() < 5e-3 && (rep.t_star - 14.704).abs() < 0.02, "{rep:?}");
    }

    #[test]
    fn sweep_and_maximize_agree() {
        let spec = TransferSpec::new(5, 0.7, 0.0, 1, 3);
        let thetas = linspace(-PI, PI, 41);
        let times = linspace(0.0, 6.0, 301);
        let (surf, rep) = sweep(&spec, 2, 4, &thetas, &times).unwrap();
        let rep2 = maximize(&spec, 2, 4, &thetas, &times).unwrap();
        assert_eq!(rep, rep2);
        let grid_max = surf.values.iter().copied().fold(0.0, f64::max);
        assert!(rep.c_max >= grid_max - 1e-15);
        let csv = surf.to_csv();
        assert!(csv.starts_with("theta,t,concurrence\n"));
        assert_eq!(csv.lines().count(), 1 + 41 * 301);
        assert_eq!(csv, surface(&spec, 2, 4, &thetas, &times).unwrap().to_csv());
    }

    #[test]
    fn golden_section_finds_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-8 && v.abs() < 1e-15);
    }

    #[test]
    fn full_state_oracle() {
        let spec = TransferSpec::new(6, 0.5f64.acos(), 2.13, 1, 2);
        for t in [0.0, 3.3, 19.2495] {
            let short = concurrence_t(&spec, 3, 4, t).unwrap();
            let full = concurrence_full_state(&spec, 3, 4, t).unwrap();
            assert!((short - full).abs() < 1e-10, "{short} {full}");
        }
    }

    fn reflect(spec: &TransferSpec, site: usize) -> usize {
        let n = spec.n_sites;
        (spec.m1 + spec.m2 + 2 * n - site - 1) % n + 1
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn norm_is_conserved(n in 3usize..11, beta in -3.0f64..3.0, theta in -3.2f64..3.2, t in 0.0f64..50.0) {
            let spec = TransferSpec { t_max: t, n_t: 7, ..TransferSpec::new(n, beta, theta, 1, n) };
            prop_assert!(amplitude_timeline(&spec).unwrap().max_norm_error() < 1e-10);
        }

        #[test]
        fn closed_form_is_evolution(n in 3usize..11, m in (1usize..10, 1usize..10), beta in -3.0f64..3.0,
                                    theta in -3.2f64..3.2, t in 0.0f64..30.0) {
            let (m1, m2) = (m.0.min(n), m.1.min(n));
            prop_assume!(m1 != m2);
            let spec = TransferSpec::new(n, beta, theta, m1.min(m2), m1.max(m2));
            let closed = alpha_t(&spec, t).unwrap();
            let direct = alpha_t_direct(&spec, t).unwrap();
            prop_assert!((closed - direct).norm() < 1e-10);
        }

        #[test]
        fn spectrum_matches_diagonalization(n in 3usize..11, beta in -3.0f64..3.0, theta in -3.2f64..3.2) {
            let spec = TransferSpec::new(n, beta, theta, 1, 2);
            let direct = herm_eig(&one_magnon_h(&spec).unwrap()).unwrap().eigenvalues;
            let closed = sorted(ej_spectrum(&spec).unwrap());
            for (a, b) in direct.iter().zip(&closed) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn shortcut_is_wootters(n in 3usize..9, beta in -3.0f64..3.0, theta in -3.2f64..3.2,
                                t in 0.0f64..20.0, l in (1usize..9, 1usize..9)) {
            let (l1, l2) = (l.0.min(n), l.1.min(n));
            prop_assume!(l1 != l2);
            let spec = TransferSpec::new(n, beta, theta, 1, 2);
            let short = concurrence_t(&spec, l1, l2, t).unwrap();
            let full = concurrence_full_state(&spec, l1, l2, t).unwrap();
            prop_assert!((short - full).abs() < 1e-10);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&short));
        }

        #[test]
        fn n4_period(beta in -3.0f64..3.0, t in 0.0f64..10.0) {
            let w = n4_frequency(beta);
            prop_assume!(w.abs() > 1e-3);
            let spec = TransferSpec::new(4, beta, 0.0, 1, 2);
            let a = concurrence_t(&spec, 3, 4, t).unwrap();
            let b = concurrence_t(&spec, 3, 4, t + PI / w.abs()).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
        }

        // the reflection fixing the initial pair reverses every bond, which
        // is the same as flipping the sign of theta
        #[test]
        fn reflection_symmetry(n in 3usize..10, beta in -3.0f64..3.0, theta in -3.2f64..3.2,
                               t in 0.0f64..20.0, m in (1usize..10, 1usize..10), l in (1usize..10, 1usize..10)) {
            let (m1, m2) = (m.0.min(n), m.1.min(n));
            let (l1, l2) = (l.0.min(n), l.1.min(n));
            prop_assume!(m1 < m2 && l1 != l2);
            let spec = TransferSpec::new(n, beta, theta, m1, m2);
            let mirrored = spec.with_theta(-theta);
            let a = concurrence_t(&spec, l1, l2, t).unwrap();
            let b = concurrence_t(&mirrored, reflect(&spec, l1), reflect(&spec, l2), t).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
