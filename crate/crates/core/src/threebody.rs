//! Three-body S-matrix in factorized and exponential form, and the states it
//! generates from the computational basis.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3};

use serde::{Deserialize, Serialize};

use crate::qlinalg::{
    cis, embed, from_rows, identity, kron, kron_all, ops, r, ComplexMatrix, ComplexVector, I,
};
use crate::rmatrix::{lorentz_add, rmat};

/// Factorized chart: the outer two-body rapidities and the phase. The middle
/// rapidity is fixed by the Yang-Baxter constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeBodyAngles {
    pub theta1: f64,
    pub theta3: f64,
    pub phi: f64,
}

impl ThreeBodyAngles {
    pub fn new(theta1: f64, theta3: f64, phi: f64) -> Self {
        Self { theta1, theta3, phi }
    }

    pub fn theta2(&self) -> f64 {
        lorentz_add(self.theta1, self.theta3).theta2
    }
}

/// Exponential chart `R = exp(i eta n.Sigma)` with `n = (cos b/sqrt2, cos b/sqrt2, sin b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaBeta {
    pub eta: f64,
    pub beta: f64,
    pub phi: f64,
}

impl EtaBeta {
    pub fn new(eta: f64, beta: f64, phi: f64) -> Self {
        Self { eta, beta, phi }
    }

    /// Maximally GHZ-like point: every bipartite `C^2` reaches 1/4.
    pub fn ghz() -> Self {
        Self::new(FRAC_PI_3, special_beta(), 0.0)
    }

    /// W-class point: every bipartite `C^2` equals 2/9.
    pub fn w() -> Self {
        Self::new(FRAC_PI_2, special_beta(), 0.0)
    }

    pub fn axis(&self) -> [f64; 3] {
        unit_axis(self.beta)
    }
}

/// `beta` with `cos = -sqrt6/3`, `sin = -sqrt3/3`.
pub fn special_beta() -> f64 {
    (-(3.0f64.sqrt()) / 3.0).atan2(-(6.0f64.sqrt()) / 3.0)
}

pub fn unit_axis(beta: f64) -> [f64; 3] {
    let (s, c) = beta.sin_cos();
    [c * FRAC_1_SQRT_2, c * FRAC_1_SQRT_2, s]
}

pub fn eta_beta_from(angles: ThreeBodyAngles) -> EtaBeta {
    let ThreeBodyAngles { theta1, theta3, phi } = angles;
    let theta2 = angles.theta2();
    let d = theta1 - theta3;
    let root = (1.0 + d.cos().powi(2)).sqrt();
    let cos_eta = theta2.cos() * (theta1 + theta3).cos();
    let sin_eta = theta2.sin() * root;
    let cos_beta = 2.0f64.sqrt() * d.cos() / root;
    let sin_beta = -d.sin() / root;
    debug_assert!((cos_eta.powi(2) + sin_eta.powi(2) - 1.0).abs() < 1e-12);
    EtaBeta {
        eta: sin_eta.atan2(cos_eta),
        beta: sin_beta.atan2(cos_beta),
        phi,
    }
}

/// Pauli matrices with the off-diagonal phase `e^{±i phi}`.
pub fn phased_paulis(phi: f64) -> [ComplexMatrix; 3] {
    let z = r(0.0);
    let s1 = from_rows(&[&[z, cis(phi)], &[cis(-phi), z]]);
    let s2 = from_rows(&[&[z, -I * cis(phi)], &[I * cis(-phi), z]]);
    [s1, s2, ops::s3()]
}

#[derive(Debug, Clone)]
pub struct SigmaTriple {
    pub sigmas: [ComplexMatrix; 3],
}

impl SigmaTriple {
    pub fn dot(&self, n: [f64; 3]) -> ComplexMatrix {
        self.sigmas
            .iter()
            .zip(n)
            .fold(ComplexMatrix::zeros(8, 8), |acc, (s, k)| acc + s * r(k))
    }
}

/// `sigma2 x sigma1 x I`, `I x sigma2 x sigma1`, `sigma2 x sigma3 x sigma1`.
pub fn sigma_algebra(phi: f64) -> SigmaTriple {
    let [s1, s2, s3] = phased_paulis(phi);
    let id = identity(2);
    SigmaTriple {
        sigmas: [
            kron_all(&[s2.clone(), s1.clone(), id.clone()]),
            kron_all(&[id, s2.clone(), s1.clone()]),
            kron_all(&[s2, s3, s1]),
        ],
    }
}

/// `R12(theta1) R23(theta2) R12(theta3)` with the two-body phase `2 phi`.
pub fn r123_factorized(angles: ThreeBodyAngles) -> ComplexMatrix {
    let chi = 2.0 * angles.phi;
    let r12 = |t: f64| embed(&rmat(t, chi), 1, 3).expect("4x4 fits in 3 sites");
    let r23 = |t: f64| embed(&rmat(t, chi), 2, 3).expect("4x4 fits in 3 sites");
    r12(angles.theta1) * r23(angles.theta2()) * r12(angles.theta3)
}

/// The other Yang-Baxter ordering, `R23(theta3) R12(theta2) R23(theta1)`.
pub fn r123_factorized_reversed(angles: ThreeBodyAngles) -> ComplexMatrix {
    let chi = 2.0 * angles.phi;
    let r12 = |t: f64| embed(&rmat(t, chi), 1, 3).expect("4x4 fits in 3 sites");
    let r23 = |t: f64| embed(&rmat(t, chi), 2, 3).expect("4x4 fits in 3 sites");
    r23(angles.theta3) * r12(angles.theta2()) * r23(angles.theta1)
}

pub fn r123_exponential(eb: EtaBeta) -> ComplexMatrix {
    let n_sigma = sigma_algebra(eb.phi).dot(eb.axis());
    identity(8) * r(eb.eta.cos()) + n_sigma * (I * eb.eta.sin())
}

/// The eight columns `R|klm>`.
pub fn generate_states(eb: EtaBeta) -> Vec<ComplexVector> {
    let m = r123_exponential(eb);
    (0..8).map(|k| m.column(k).into_owned()).collect()
}

pub fn hadamard3(state: &ComplexVector) -> ComplexVector {
    let h = from_rows(&[&[r(1.0), r(1.0)], &[r(1.0), r(-1.0)]]) * r(FRAC_1_SQRT_2);
    let hhh = kron(&kron(&h, &h), &h);
    hhh * state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{basis_ket, check_unitary, matexp_skew};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn same_up_to_phase(a: &ComplexVector, b: &ComplexVector, tol: f64) -> bool {
        (a.dotc(b).norm() - 1.0).abs() <= tol
    }

    #[test]
    fn chart_at_origin() {
        let eb = eta_beta_from(ThreeBodyAngles::new(0.0, 0.0, 0.0));
        assert!(eb.eta.abs() < 1e-15 && eb.beta.abs() < 1e-15);
        let eb = eta_beta_from(ThreeBodyAngles::new(0.4, 0.4, 0.0));
        assert!(eb.beta.abs() < 1e-15);
    }

    #[test]
    fn chart_pre_images_of_special_points() {
        let ghz = eta_beta_from(ThreeBodyAngles::new(3.0 * FRAC_PI_4, 0.0, 0.0));
        assert!((ghz.eta - FRAC_PI_3).abs() < 1e-12);
        assert!((ghz.beta - special_beta()).abs() < 1e-12);
        let w = eta_beta_from(ThreeBodyAngles::new(5.0 * FRAC_PI_8, -FRAC_PI_8, 0.0));
        assert!((w.eta - FRAC_PI_2).abs() < 1e-12);
        assert!((w.beta - special_beta()).abs() < 1e-12);
    }

    #[test]
    fn identity_limits() {
        assert!(close(&r123_factorized(ThreeBodyAngles::new(0.0, 0.0, 0.7)), &identity(8), 0.0));
        assert!(close(&r123_exponential(EtaBeta::new(0.0, 0.3, 0.2)), &identity(8), 1e-15));
        assert!(close(&r123_exponential(EtaBeta::new(PI, 0.3, 0.2)), &(-identity(8)), 1e-15));
    }

    #[test]
    fn ghz_point_first_column() {
        let m = r123_factorized(ThreeBodyAngles::new(3.0 * FRAC_PI_4, 0.0, 0.0));
        for k in 0..8 {
            let expect = if [0, 3, 5, 6].contains(&k) { 0.5 } else { 0.0 };
            assert!((m[(k, 0)].norm() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn first_column_formula() {
        let eb = EtaBeta::new(0.83, -0.41, 0.29);
        let col = &generate_states(eb)[0];
        let (se, ce) = eb.eta.sin_cos();
        let (sb, cb) = eb.beta.sin_cos();
        let ph = cis(-2.0 * eb.phi);
        let mut expect = ComplexVector::zeros(8);
        expect[0] = r(ce);
        expect[3] = -ph * (cb * se * FRAC_1_SQRT_2);
        expect[5] = -ph * (sb * se);
        expect[6] = -ph * (cb * se * FRAC_1_SQRT_2);
        assert!((col - expect).norm() < 1e-14);
    }

    #[test]
    fn ghz_states_map_to_ghz_basis() {
        let states = generate_states(EtaBeta::ghz());
        let s = FRAC_1_SQRT_2;
        for v in &states {
            assert!(v.iter().all(|a| a.norm() < 1e-14 || (a.norm() - 0.5).abs() < 1e-14));
            assert_eq!(v.iter().filter(|a| a.norm() > 0.1).count(), 4);
            let h = hadamard3(v);
            // two opposite basis kets with weight 1/2 each
            let support: Vec<usize> = (0..8).filter(|&k| h[k].norm() > 1e-9).collect();
            assert_eq!(support.len(), 2);
            assert_eq!(support[0] ^ support[1], 7);
            assert!(support.iter().all(|&k| (h[k].norm() - s).abs() < 1e-13));
        }
        let mut ghz = ComplexVector::zeros(8);
        ghz[0] = r(s);
        ghz[7] = r(s);
        assert!(same_up_to_phase(&hadamard3(&states[0]), &ghz, 1e-13));
    }

    #[test]
    fn w_point_states() {
        let t = (1.0f64 / 3.0).sqrt();
        for v in generate_states(EtaBeta::w()) {
            let support: Vec<usize> = (0..8).filter(|&k| v[k].norm() > 1e-9).collect();
            assert_eq!(support.len(), 3);
            assert!(support.iter().all(|&k| (v[k].norm() - t).abs() < 1e-13));
        }
    }

    #[test]
    fn natural_basis_at_zero() {
        for (k, v) in generate_states(EtaBeta::new(0.0, 1.0, 0.5)).iter().enumerate() {
            assert!((v - basis_ket(8, k)).norm() < 1e-15);
        }
    }

    #[test]
    fn hadamard_examples() {
        let u = hadamard3(&basis_ket(8, 0));
        assert!(u.iter().all(|a| (a - r(1.0 / 8f64.sqrt())).norm() < 1e-15));
        let v = ComplexVector::from_fn(8, |k, _| r(k as f64 - 2.5) + I * (0.1 * k as f64));
        assert!((hadamard3(&hadamard3(&v)) - &v).norm() < 1e-13);
    }

    #[test]
    fn sigma_commutators() {
        let s = sigma_algebra(0.37);
        let [a, b, c3] = &s.sigmas;
        let comm = |x: &ComplexMatrix, y: &ComplexMatrix| x * y - y * x;
        assert!(close(&comm(a, b), &(c3 * (I * 2.0)), 1e-13));
        assert!(close(&comm(b, c3), &(a * (I * 2.0)), 1e-13));
        assert!(close(&comm(c3, a), &(b * (I * 2.0)), 1e-13));
        for x in &s.sigmas {
            assert!(close(&(x * x), &identity(8), 1e-13));
        }
        let nd = s.dot(unit_axis(0.3));
        assert!(close(&(&nd * &nd), &identity(8), 1e-13));
    }

    #[test]
    fn exponential_is_matrix_exponential() {
        let eb = EtaBeta::new(1.1, 0.3, -0.6);
        let g = sigma_algebra(eb.phi).dot(eb.axis()) * I;
        let e = matexp_skew(&g, eb.eta).unwrap();
        assert!(close(&e, &r123_exponential(eb), 1e-12));
    }

    proptest! {
        #[test]
        fn charts_agree(t1 in -1.5f64..1.5, t3 in -1.5f64..1.5, phi in -PI..PI) {
            let a = ThreeBodyAngles::new(t1, t3, phi);
            let f = r123_factorized(a);
            let eb = eta_beta_from(a);
            prop_assert!(close(&f, &r123_exponential(eb), 1e-12));
            prop_assert!(close(&f, &r123_factorized_reversed(a), 1e-12));
            prop_assert!(check_unitary(&f, 1e-12).ok);
            let d = t1 - t3;
            let lhs = eb.beta.cos().powi(2) * (1.0 + d.cos().powi(2));
            prop_assert!((lhs - 2.0 * d.cos().powi(2)).abs() <= 1e-12);
        }
    }
}
