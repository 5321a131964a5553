//! Hamiltonians generated by driving the phase of the R-matrices in time,
//! their exact spectra, and Berry phases of the three-body eigenstates.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qlinalg::{
    cis, embed, herm_eig, identity, kron, kron_all, ops, orthonormalize, projector, r,
    ComplexMatrix, ComplexVector, I,
};
use crate::threebody::{r123_exponential, EtaBeta};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    pub eta: f64,
    pub beta: f64,
    /// Constant angular velocity of the phase.
    pub phi_rate: f64,
    pub hbar: f64,
}

impl DriveParams {
    pub fn new(eta: f64, beta: f64) -> Self {
        Self { eta, beta, phi_rate: 1.0, hbar: 1.0 }
    }

    fn scale(&self) -> f64 {
        self.hbar * self.phi_rate
    }

    pub fn e_plus(&self) -> f64 {
        2.0 * self.scale() * self.eta.sin()
    }
}

/// `i hbar (dU/dt) U^dagger` by central differences.
pub fn gauge_potential_fd<F>(path: F, t: f64, step: f64, hbar: f64) -> ComplexMatrix
where
    F: Fn(f64) -> ComplexMatrix,
{
    let du = (path(t + step) - path(t - step)) * r(0.5 / step);
    du * path(t).adjoint() * (I * hbar)
}

/// Two-body Hamiltonian for `chi(t)` rotating at `chi_rate`.
pub fn h2_local(theta: f64, chi: f64, chi_rate: f64, hbar: f64) -> ComplexMatrix {
    let (sp, sm, s3, id) = (ops::s_plus(), ops::s_minus(), ops::s3(), identity(2));
    let zeeman = (kron(&s3, &id) + kron(&id, &s3)) * r(0.5 * theta.sin());
    let pairing = (kron(&sp, &sp) * cis(chi) + kron(&sm, &sm) * cis(-chi)) * r(theta.cos());
    (zeeman + pairing) * r(-hbar * chi_rate * theta.sin())
}

/// Collective operators `(Sx, Sy, Sz)` on the `{|00>, |11>}` pseudo-spin.
pub fn bispin() -> [ComplexMatrix; 3] {
    let (sp, sm, s3, id) = (ops::s_plus(), ops::s_minus(), ops::s3(), identity(2));
    let pp = kron(&sp, &sp);
    let mm = kron(&sm, &sm);
    [
        &pp + &mm,
        (&pp - &mm) * I,
        (kron(&s3, &id) + kron(&id, &s3)) * r(0.5),
    ]
}

/// The two-body Hamiltonian written as a field along
/// `(cos t cos chi, cos t sin chi, sin t)` coupled to the pseudo-spin.
pub fn h2_nmr_form(theta: f64, chi: f64, chi_rate: f64, hbar: f64) -> ComplexMatrix {
    let n = [theta.cos() * chi.cos(), theta.cos() * chi.sin(), theta.sin()];
    let field = bispin()
        .iter()
        .zip(n)
        .fold(ComplexMatrix::zeros(4, 4), |acc, (s, k)| acc + s * r(k));
    field * r(-hbar * chi_rate * theta.sin())
}

/// Nonzero-energy eigenpairs of `h2_local`: `(E+, psi+)` then `(E-, psi-)`,
/// with `E± = ∓ hbar chi_rate sin(theta)`.
pub fn h2_eigenpairs(
    theta: f64,
    chi: f64,
    chi_rate: f64,
    hbar: f64,
) -> [(f64, ComplexVector); 2] {
    let half = FRAC_PI_4 - theta / 2.0;
    let (s, c) = half.sin_cos();
    let e = hbar * chi_rate * theta.sin();
    let mut plus = ComplexVector::zeros(4);
    plus[0] = r(c);
    plus[3] = cis(-chi) * s;
    let mut minus = ComplexVector::zeros(4);
    minus[0] = r(-s);
    minus[3] = cis(-chi) * c;
    [(-e, plus), (e, minus)]
}

/// Three-body Hamiltonian at phase `phi`.
pub fn h3_local(dp: DriveParams, phi: f64) -> ComplexMatrix {
    let (sp, sm, s3, id) = (ops::s_plus(), ops::s_minus(), ops::s3(), identity(2));
    let k = |a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix| {
        kron_all(&[a.clone(), b.clone(), c.clone()])
    };
    let herm = |m: ComplexMatrix| &m + m.adjoint();
    let (se, ce) = dp.eta.sin_cos();
    let (sb, cb) = dp.beta.sin_cos();
    let (se2, s2e) = (se * se, 2.0 * se * ce);
    let ph = cis(2.0 * phi);

    let onsite = (k(&s3, &id, &id) + k(&id, &id, &s3)) * r((1.0 + sb * sb) / 2.0)
        + k(&id, &s3, &id) * r(cb * cb);
    let pair_nn = herm((k(&sp, &sp, &id) + k(&id, &sp, &sp)) * ph);
    let hop_nn = herm(k(&sp, &sm, &id) + k(&id, &sp, &sm));
    let pair_nnn = herm(k(&sp, &s3, &sp) * ph);
    let hop_nnn = k(&sp, &s3, &sm) + k(&sm, &s3, &sp);

    let total = onsite * r(-se2)
        + pair_nn * r(-FRAC_1_SQRT_2 * s2e * cb)
        + hop_nn * r(FRAC_1_SQRT_2 * se2 * 2.0 * sb * cb)
        + pair_nnn * r(-s2e * sb)
        + hop_nnn * r(-se2 * cb * cb);
    total * r(dp.scale())
}

fn ket(entries: &[(&str, crate::qlinalg::C64)]) -> ComplexVector {
    let mut v = ComplexVector::zeros(8);
    for (bits, a) in entries {
        v[usize::from_str_radix(bits, 2).expect("binary label")] += a;
    }
    v
}

/// The eight closed-form instantaneous eigenstates, `|a1>..|a8>`.
///
/// `a1..a4` span the zero-energy level (not mutually orthogonal), `a5, a6`
/// have `E+ = 2 sin(eta)` and `a7, a8` have `E- = -2 sin(eta)` in units of
/// `hbar phi_rate`. Quotients like `cos(eta) / sqrt(1 - sin(eta))` are
/// rewritten as `sgn(cos eta) sqrt(1 + sin eta)` so the forms stay regular
/// where `cos(eta)` or `cos(beta)` vanish.
pub fn closed_form_eigenstates(eta: f64, beta: f64, phi: f64) -> [ComplexVector; 8] {
    let (se, ce) = eta.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let sgn = if ce < 0.0 { -1.0 } else { 1.0 };
    let e = cis(2.0 * phi);
    let s = FRAC_1_SQRT_2;
    let rt2 = 2f64.sqrt();
    let n = (1.0 + sb * sb).sqrt();
    let (lo, hi) = ((1.0 - se).max(0.0).sqrt(), (1.0 + se).sqrt());

    let a1 = ket(&[("011", r(-s)), ("110", r(s))]);
    let a2 = ket(&[("001", r(-s)), ("100", r(s))]);
    let a3 = ket(&[("011", r(-rt2 * sb / n)), ("101", r(cb / n))]);
    let a4 = ket(&[("001", r(rt2 * sb / n)), ("010", r(cb / n))]);

    let single = |weight: f64, sign: f64, top: f64| {
        let f = e * (sign * cb * weight / 2.0);
        ket(&[
            ("001", f),
            ("010", e * (-sign * rt2 * sb * weight / 2.0)),
            ("100", f),
            ("111", r(sgn * top * s)),
        ])
    };
    let triple = |weight: f64, top: f64| {
        let g = sgn * cb * weight / 2.0;
        ket(&[
            ("000", e * (top * s)),
            ("011", r(g)),
            ("101", r(sgn * rt2 * sb * weight / 2.0)),
            ("110", r(g)),
        ])
    };
    let a5 = single(lo, -1.0, hi);
    let a6 = triple(hi, -lo);
    let a7 = single(hi, 1.0, lo);
    let a8 = triple(lo, hi);
    [a1, a2, a3, a4, a5, a6, a7, a8]
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
    /// Frobenius distance between the numerical and closed-form projectors.
    pub projector_distance: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    /// Zero, plus and minus levels, in that order.
    pub levels: Vec<Level>,
    /// `sin(eta)` (or the drive) vanishes and the three levels merge.
    pub degenerate: bool,
}

impl SpectrumReport {
    pub fn max_projector_distance(&self) -> Option<f64> {
        self.levels
            .iter()
            .map(|l| l.projector_distance)
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}

const DEGENERATE_TOL: f64 = 1e-8;

/// Diagonalizes `h3_local` and compares each level's eigenprojector with the
/// one spanned by the closed-form eigenstates.
pub fn eigenbasis3(dp: DriveParams, phi: f64) -> Result<SpectrumReport> {
    if dp.hbar.is_nan() || dp.hbar <= 0.0 {
        return invalid("hbar must be positive");
    }
    let h = h3_local(dp, phi);
    let eig = herm_eig(&h)?;
    let ep = dp.e_plus();
    let targets = [0.0, ep, -ep];
    let degenerate = dp.eta.sin().abs() <= DEGENERATE_TOL || dp.phi_rate == 0.0;

    let mut members: [Vec<usize>; 3] = Default::default();
    for (j, &lam) in eig.eigenvalues.iter().enumerate() {
        let nearest = (0..3)
            .min_by(|&a, &b| (lam - targets[a]).abs().total_cmp(&(lam - targets[b]).abs()))
            .expect("three targets");
        members[nearest].push(j);
    }

    let closed = closed_form_eigenstates(dp.eta, dp.beta, phi);
    let groups: [&[ComplexVector]; 3] = [&closed[0..4], &closed[4..6], &closed[6..8]];
    let mut levels = Vec::with_capacity(3);
    for (level, (&energy, idx)) in targets.iter().zip(&members).enumerate() {
        let projector_distance = if degenerate {
            None
        } else {
            let numeric: Vec<ComplexVector> =
                idx.iter().map(|&j| eig.eigenvectors.column(j).into_owned()).collect();
            let p_num = projector(&numeric, 8);
            let p_ref = projector(&orthonormalize(groups[level], 1e-10), 8);
            Some((p_num - p_ref).norm())
        };
        levels.push(Level { energy, multiplicity: idx.len(), projector_distance });
    }
    if !degenerate && levels.iter().map(|l| l.multiplicity).ne([4, 2, 2]) {
        return Err(Error::Numerical(format!(
            "level multiplicities {:?} differ from (4, 2, 2)",
            levels.iter().map(|l| l.multiplicity).collect::<Vec<_>>()
        )));
    }
    Ok(SpectrumReport { eigenvalues: eig.eigenvalues, levels, degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Plus,
    Minus,
}

impl std::str::FromStr for Band {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Band::Plus),
            "minus" | "-" => Ok(Band::Minus),
            other => invalid(format!("unknown band {other:?}, expected plus or minus")),
        }
    }
}

/// Exact loop phase over `phi` in `[0, pi]`.
pub fn berry_closed(eta: f64, band: Band) -> f64 {
    match band {
        Band::Plus => -PI * (1.0 - eta.sin()),
        Band::Minus => -PI * (1.0 + eta.sin()),
    }
}

/// Discrete Wilson-loop phase of closed-form eigenstate `member` (5..=8)
/// around `phi: 0 -> pi`.
pub fn berry_phase_member(eta: f64, beta: f64, member: usize, steps: usize) -> Result<f64> {
    if !(5..=8).contains(&member) {
        return invalid(format!("member {member} has no Berry phase loop, use 5..=8"));
    }
    if steps < 100 {
        return invalid(format!("{steps} steps is too coarse, need at least 100"));
    }
    let state = |phi: f64| closed_form_eigenstates(eta, beta, phi)[member - 1].clone();
    let mut prev = state(0.0);
    let mut total = 0.0;
    for k in 1..=steps {
        let cur = state(PI * k as f64 / steps as f64);
        total += prev.dotc(&cur).arg();
        prev = cur;
    }
    Ok(-total)
}

/// Berry phase of a band, checked for agreement between both band members
/// and between `steps` and `steps / 2`.
pub fn berry_phase(dp: DriveParams, band: Band, steps: usize) -> Result<f64> {
    let pair = match band {
        Band::Plus => [5, 6],
        Band::Minus => [7, 8],
    };
    let fine = berry_phase_member(dp.eta, dp.beta, pair[0], steps)?;
    let coarse = berry_phase_member(dp.eta, dp.beta, pair[0], (steps / 2).max(100))?;
    if (fine - coarse).abs() > 1e-5 {
        return Err(Error::Numerical(format!(
            "Berry phase not converged: {fine} at {steps} steps vs {coarse} at half"
        )));
    }
    let partner = berry_phase_member(dp.eta, dp.beta, pair[1], steps)?;
    if (fine - partner).abs() > 1e-5 {
        return Err(Error::Numerical(format!(
            "band members disagree: {fine} vs {partner}"
        )));
    }
    Ok(fine)
}

/// Largest off-diagonal element of `<a_m| d/dphi |a_n>` within a degenerate
/// pair, by central differences.
pub fn connection_offdiag(eta: f64, beta: f64, phi: f64) -> f64 {
    let h = 1e-6;
    let at = |p: f64| closed_form_eigenstates(eta, beta, p);
    let (lo, mid, hi) = (at(phi - h), at(phi), at(phi + h));
    [(4, 5), (5, 4), (6, 7), (7, 6)]
        .iter()
        .map(|&(m, n)| {
            let d = (&hi[n] - &lo[n]) * r(0.5 / h);
            mid[m].dotc(&d).norm()
        })
        .fold(0.0, f64::max)
}

/// `R123` along the drive, as a function of time.
pub fn r123_path(dp: DriveParams) -> impl Fn(f64) -> ComplexMatrix {
    move |t| r123_exponential(EtaBeta::new(dp.eta, dp.beta, dp.phi_rate * t))
}

/// The three-body Hamiltonian's spin operators placed on sites `n..n+2` of
/// an `n_sites` chain.
pub fn h3_on_chain(dp: DriveParams, phi: f64, first_site: usize, n_sites: usize) -> Result<ComplexMatrix> {
    embed(&h3_local(dp, phi), first_site, n_sites)
}
