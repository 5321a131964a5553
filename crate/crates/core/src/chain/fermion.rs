//! Jordan-Wigner form of the open chain: a quadratic fermion Hamiltonian
//! with `a^dagger = S+` (vacuum = all spins down).

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::{Boundary, ChainSpec};
use crate::error::{invalid, Result};
use crate::qlinalg::{cis, herm_eig, r, ComplexMatrix, C64, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    /// `coef * n_i`
    Number,
    /// `coef * a+_i a_j + h.c.`
    Hopping,
    /// `coef * a+_i a+_j + h.c.`
    Pairing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticTerm {
    pub kind: TermKind,
    /// 1-based sites with `i < j` for the two-site kinds.
    pub i: usize,
    pub j: usize,
    pub coef: C64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FermionQuadratic {
    pub n_sites: usize,
    pub terms: Vec<QuadraticTerm>,
    pub constant: f64,
}

/// Coefficient table of the fermionized open chain.
pub fn fermion_quadratic(spec: &ChainSpec) -> Result<FermionQuadratic> {
    spec.validate()?;
    if spec.boundary == Boundary::Periodic {
        return invalid(
            "periodic chains do not fermionize to a single quadratic form; use an open chain",
        );
    }
    let (se, ce) = spec.eta.sin_cos();
    let (sb, cb) = spec.beta.sin_cos();
    let (se2, s2e) = (se * se, 2.0 * se * ce);
    let ph = cis(2.0 * spec.phi);

    let outer_mu = -se2 * (1.0 + sb * sb);
    let middle_mu = -2.0 * se2 * cb * cb;
    let nn_pair = ph * (-FRAC_1_SQRT_2 * s2e * cb);
    let nn_hop = r(FRAC_1_SQRT_2 * se2 * 2.0 * sb * cb);
    let nnn_pair = ph * (s2e * sb);
    let nnn_hop = r(se2 * cb * cb);

    let term = |kind, i, j, coef| QuadraticTerm { kind, i, j, coef };
    let mut terms = Vec::new();
    let mut constant = 0.0;
    for [a, b, c] in spec.triples() {
        // S3 = 2n - 1
        terms.push(term(TermKind::Number, a, a, r(outer_mu)));
        terms.push(term(TermKind::Number, b, b, r(middle_mu)));
        terms.push(term(TermKind::Number, c, c, r(outer_mu)));
        constant -= (2.0 * outer_mu + middle_mu) / 2.0;
        for (i, j) in [(a, b), (b, c)] {
            terms.push(term(TermKind::Pairing, i, j, nn_pair));
            terms.push(term(TermKind::Hopping, i, j, nn_hop));
        }
        // S3 on the middle site cancels the string, leaving a minus sign
        terms.push(term(TermKind::Pairing, a, c, nnn_pair));
        terms.push(term(TermKind::Hopping, a, c, nnn_hop));
    }
    Ok(FermionQuadratic { n_sites: spec.n_sites, terms, constant })
}

impl FermionQuadratic {
    /// Hermitian `h` in `sum h_ij a+_i a_j`.
    pub fn hopping_matrix(&self) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.n_sites, self.n_sites);
        for t in &self.terms {
            let (i, j) = (t.i - 1, t.j - 1);
            match t.kind {
                TermKind::Number => h[(i, i)] += t.coef,
                TermKind::Hopping => {
                    h[(i, j)] += t.coef;
                    h[(j, i)] += t.coef.conj();
                }
                TermKind::Pairing => {}
            }
        }
        h
    }

    /// Upper-triangular `D` in `sum_{i<j} D_ij a+_i a+_j + h.c.`.
    pub fn pairing_matrix(&self) -> ComplexMatrix {
        let mut d = ComplexMatrix::zeros(self.n_sites, self.n_sites);
        for t in self.terms.iter().filter(|t| t.kind == TermKind::Pairing) {
            d[(t.i - 1, t.j - 1)] += t.coef;
        }
        d
    }

    /// `[[h, D - D^T], [-(D - D^T)*, -h*]]` acting on `(a, a+)`.
    pub fn bdg(&self) -> ComplexMatrix {
        let n = self.n_sites;
        let h = self.hopping_matrix();
        let d = self.pairing_matrix();
        let delta = &d - d.transpose();
        let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&h);
        m.view_mut((0, n), (n, n)).copy_from(&delta);
        m.view_mut((n, 0), (n, n)).copy_from(&(-delta.conjugate()));
        m.view_mut((n, n), (n, n)).copy_from(&(-h.conjugate()));
        m
    }

    /// The `N` non-negative BdG energies, ascending.
    pub fn quasiparticle_energies(&self) -> Result<Vec<f64>> {
        let evs = herm_eig(&self.bdg())?.eigenvalues;
        Ok(evs[self.n_sites..].to_vec())
    }

    pub fn ground_energy(&self) -> Result<f64> {
        let tr: f64 = self.hopping_matrix().diagonal().iter().map(|z| z.re).sum();
        let e: f64 = self.quasiparticle_energies()?.iter().sum();
        Ok(self.constant + tr / 2.0 - e / 2.0)
    }

    /// Full many-body spectrum (ground energy plus every subset sum of
    /// quasiparticle energies), ascending. Exponential in `N`.
    pub fn many_body_spectrum(&self) -> Result<Vec<f64>> {
        let e0 = self.ground_energy()?;
        let eps = self.quasiparticle_energies()?;
        let mut out: Vec<f64> = (0..1usize << eps.len())
            .map(|mask| {
                e0 + eps
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, e)| e)
                    .sum::<f64>()
            })
            .collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// `<i| H |j>` on single-particle states: `h + constant`.
    pub fn one_particle_block(&self) -> ComplexMatrix {
        let n = self.n_sites;
        self.hopping_matrix() + ComplexMatrix::identity(n, n) * r(self.constant)
    }
}

/// Pseudo-spin block `[[X/2, Y], [Y*, -X/2]]` at momentum `k`, assembled
/// from the bulk couplings of a fermion table (the table must be long
/// enough to have a bulk site with two neighbours on each side).
pub fn momentum_block(table: &FermionQuadratic, k: f64) -> Result<ComplexMatrix> {
    let n = table.n_sites;
    if n < 7 {
        return invalid("momentum block needs at least 7 sites for a clean bulk");
    }
    let m = n / 2;
    let h = table.hopping_matrix();
    let d = table.pairing_matrix();
    let mut x = h[(m, m)];
    let mut y = r(0.0);
    for dist in 1..=2usize {
        let kd = k * dist as f64;
        x += h[(m, m + dist)] * cis(-kd) + h[(m, m - dist)] * cis(kd);
        y += d[(m, m + dist)] * (-I * kd.sin());
    }
    let mut b = ComplexMatrix::zeros(2, 2);
    b[(0, 0)] = x * 0.5;
    b[(1, 1)] = -x * 0.5;
    b[(0, 1)] = y;
    b[(1, 0)] = y.conj();
    Ok(b)
}

/// Band pair `(+eps, -eps)` with `eps = sqrt(X^2/4 + |Y|^2)`.
pub fn band_spectrum(eta: f64, beta: f64, k: f64) -> (f64, f64) {
    let (x, y) = band_xy(eta, beta, 0.0, k);
    let e = (x * x / 4.0 + y.norm_sqr()).sqrt();
    (e, -e)
}

/// `X_k` and `Y_k` of the bulk dispersion.
pub fn band_xy(eta: f64, beta: f64, phi: f64, k: f64) -> (f64, C64) {
    let (se, ce) = eta.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let lead = 2f64.sqrt() * sb + 2.0 * cb * k.cos();
    let x = -se * se * (6.0 - lead * lead);
    let y = I * cis(2.0 * phi)
        * (2.0 * se * ce * (2f64.sqrt() * cb * k.sin() - sb * (2.0 * k).sin()));
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::super::{one_magnon_block, spin_chain_matrix};
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, PI};

    #[test]
    fn zero_eta_table_is_zero() {
        let t = fermion_quadratic(&ChainSpec::open(5, 0.0, 0.4, 0.2)).unwrap();
        assert!(t.terms.iter().all(|x| x.coef.norm() == 0.0));
        assert_eq!(t.constant, 0.0);
    }

    #[test]
    fn periodic_is_rejected() {
        assert!(fermion_quadratic(&ChainSpec::periodic(5, 0.3, 0.4, 0.2)).is_err());
    }

    #[test]
    fn nn_pairing_coefficient() {
        let (eta, beta, phi) = (0.7, 0.3, 0.25);
        let t = fermion_quadratic(&ChainSpec::open(3, eta, beta, phi)).unwrap();
        let p = t
            .terms
            .iter()
            .find(|x| x.kind == TermKind::Pairing && (x.i, x.j) == (1, 2))
            .unwrap();
        let expect = cis(2.0 * phi) * (-(2f64.sqrt() / 2.0) * (2.0 * eta).sin() * beta.cos());
        assert!((p.coef - expect).norm() < 1e-15);
    }

    #[test]
    fn full_spectrum_matches_spin_chain() {
        let spec = ChainSpec::open(6, 0.8, 0.35, 0.2);
        let spin = herm_eig(&spin_chain_matrix(&spec).unwrap()).unwrap().eigenvalues;
        let ferm = fermion_quadratic(&spec).unwrap().many_body_spectrum().unwrap();
        let err = spin.iter().zip(&ferm).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn gap_closes_at_special_point() {
        let beta = (6f64.sqrt() / 3.0).acos();
        let (e, _) = band_spectrum(-FRAC_PI_3, beta, 0.0);
        assert!(e.abs() <= 1e-8);
        let (x, y) = band_xy(0.4, 0.9, 0.1, 0.0);
        assert_eq!(y.norm(), 0.0);
        assert!((band_spectrum(0.4, 0.9, 0.0).0 - x.abs() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn bulk_onsite_and_band_agree() {
        let t = fermion_quadratic(&ChainSpec::open(9, 0.6, -0.8, 0.3)).unwrap();
        for k in [0.0, 0.4, -2.0, PI] {
            let (x, y) = band_xy(0.6, -0.8, 0.3, k);
            let b = momentum_block(&t, k).unwrap();
            assert!((b[(0, 0)].re * 2.0 - x).abs() < 1e-13);
            assert!((b[(0, 1)] - y).norm() < 1e-13);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn one_magnon_blocks_agree(eta in -PI..PI, beta in -PI..PI, phi in -PI..PI, n in 4usize..=8) {
            let spec = ChainSpec::open(n, eta, beta, phi);
            let spin = one_magnon_block(&spin_chain_matrix(&spec).unwrap(), n);
            let ferm = fermion_quadratic(&spec).unwrap().one_particle_block();
            prop_assert!((&spin - &ferm).norm() <= 1e-12);
            let a = herm_eig(&spin).unwrap().eigenvalues;
            let b = herm_eig(&ferm).unwrap().eigenvalues;
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }

        #[test]
        fn band_matches_block_and_is_symmetric(eta in -PI..PI, beta in -PI..PI, k in -PI..PI) {
            let t = fermion_quadratic(&ChainSpec::open(9, eta, beta, 0.0)).unwrap();
            let evs = herm_eig(&momentum_block(&t, k).unwrap()).unwrap().eigenvalues;
            let (p, m) = band_spectrum(eta, beta, k);
            prop_assert!((evs[1] - p).abs() <= 1e-10 && (evs[0] - m).abs() <= 1e-10);
            prop_assert_eq!(p, -m);
        }
    }
}
