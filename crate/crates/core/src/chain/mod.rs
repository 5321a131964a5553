//! Homogeneous chain built from the three-body Hamiltonian: the spin matrix,
//! its Jordan-Wigner fermionization, Kitaev-like parameters, bands, the
//! Majorana form and the end-mode analysis.
//!
//! `hbar * phi_rate = 1` throughout.

pub mod fermion;
pub mod kitaev;
pub mod majorana;
pub mod zeromode;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hamiltonian::{h3_local, DriveParams};
use crate::qlinalg::{add_embedded, ComplexMatrix};

pub use fermion::{band_spectrum, fermion_quadratic, momentum_block, FermionQuadratic, QuadraticTerm, TermKind};
pub use kitaev::{kitaev_params, mf_inequalities, KitaevParams};
pub use majorana::{appendix_matrix, majorana_matrix};
pub use zeromode::{boundary_nullspace, fig1_csv, fig1_data, zero_mode_cubic, Fig1Row, ZeroModeReport};

/// Largest chain handled by dense exact diagonalization.
pub const MAX_DENSE_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub eta: f64,
    pub beta: f64,
    pub phi: f64,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn open(n_sites: usize, eta: f64, beta: f64, phi: f64) -> Self {
        Self { n_sites, eta, beta, phi, boundary: Boundary::Open }
    }

    pub fn periodic(n_sites: usize, eta: f64, beta: f64, phi: f64) -> Self {
        Self { n_sites, eta, beta, phi, boundary: Boundary::Periodic }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 3 {
            return invalid(format!("chain needs at least 3 sites, got {}", self.n_sites));
        }
        Ok(())
    }

    /// Site triples `(n, n+1, n+2)`, wrapping around when periodic.
    pub fn triples(&self) -> Vec<[usize; 3]> {
        let n = self.n_sites;
        let count = match self.boundary {
            Boundary::Open => n - 2,
            Boundary::Periodic => n,
        };
        (1..=count)
            .map(|s| [s, (s % n) + 1, ((s + 1) % n) + 1])
            .collect()
    }
}

/// Full `2^N x 2^N` chain Hamiltonian.
pub fn spin_chain_matrix(spec: &ChainSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    if spec.n_sites > MAX_DENSE_SITES {
        return invalid(format!(
            "{} sites exceeds the dense limit of {MAX_DENSE_SITES}",
            spec.n_sites
        ));
    }
    let local = h3_local(DriveParams::new(spec.eta, spec.beta), spec.phi);
    let dim = 1usize << spec.n_sites;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for t in spec.triples() {
        add_embedded(&mut h, &local, &t, spec.n_sites)?;
    }
    Ok(h)
}

/// Basis index of the state with only `site` (1-based) up.
pub fn one_magnon_index(n_sites: usize, site: usize) -> usize {
    ((1usize << n_sites) - 1) ^ (1 << (n_sites - site))
}

/// Compression of a chain operator onto the single-up-spin states, ordered
/// by site.
pub fn one_magnon_block(h: &ComplexMatrix, n_sites: usize) -> ComplexMatrix {
    let idx: Vec<usize> = (1..=n_sites).map(|s| one_magnon_index(n_sites, s)).collect();
    ComplexMatrix::from_fn(n_sites, n_sites, |i, j| h[(idx[i], idx[j])])
}
