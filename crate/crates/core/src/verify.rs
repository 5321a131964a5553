//! Invariant suites run by the command line `verify` command.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::zeromode::{boundary_nullspace, interior_beta_grid};
use crate::chain::{fermion_quadratic, one_magnon_block, spin_chain_matrix, zero_mode_cubic, ChainSpec};
use crate::entanglement::{concurrence3, concurrence_closed};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{berry_closed, berry_phase, eigenbasis3, Band, DriveParams};
use crate::qlinalg::{herm_eig, r};
use crate::rmatrix::{lorentz_add, ybe_residual};
use crate::threebody::{eta_beta_from, generate_states, r123_exponential, r123_factorized, ThreeBodyAngles};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self { name: name.into(), residual, tol, passed: residual <= tol }
    }

    /// Count of failed samples, required to be zero.
    fn count(name: impl Into<String>, failures: usize) -> Self {
        Self::new(name, failures as f64, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ybe,
    Chart,
    Spectrum,
    Berry,
    Jw,
    Zeromode,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Ybe, Suite::Chart, Suite::Spectrum, Suite::Berry, Suite::Jw, Suite::Zeromode];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ybe => "ybe",
            Suite::Chart => "chart",
            Suite::Spectrum => "spectrum",
            Suite::Berry => "berry",
            Suite::Jw => "jw",
            Suite::Zeromode => "zeromode",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .map_or_else(|| invalid(format!("unknown suite {s:?}")), Ok)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Random samples for the sampled suites.
    pub samples: usize,
    pub seed: u64,
    /// Replaces the default tolerance of every residual check.
    pub tol: Option<f64>,
    /// Berry suite angles; defaults to a fixed set when empty.
    pub etas: Vec<f64>,
    pub beta_grid: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { samples: 100, seed: 7, tol: None, etas: Vec::new(), beta_grid: 200 }
    }
}

impl VerifyConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn rng(&self, suite: Suite) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (suite as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.beta_grid == 0 {
            return invalid("samples and beta grid size must be positive");
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return invalid(format!("tolerance must be positive, got {t}"));
            }
        }
        if !self.etas.iter().all(|e| e.is_finite()) {
            return invalid("eta values must be finite");
        }
        Ok(())
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    match suite {
        Suite::Ybe => ybe(cfg),
        Suite::Chart => chart(cfg),
        Suite::Spectrum => spectrum(cfg),
        Suite::Berry => berry(cfg),
        Suite::Jw => jw(cfg),
        Suite::Zeromode => zeromode(cfg),
    }
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

fn ybe(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = cfg.rng(Suite::Ybe);
    let mut worst = 0.0f64;
    let mut missed = 0;
    for _ in 0..cfg.samples {
        let (t1, t3, phi) = (angle(&mut rng), angle(&mut rng), angle(&mut rng));
        let sum = lorentz_add(t1, t3);
        if sum.pole {
            continue;
        }
        worst = worst.max(ybe_residual(t1, sum.theta2, t3, 2.0 * phi).lhs_rhs_norm);

        let wrong = angle(&mut rng);
        let holds = (wrong - sum.theta2).sin().abs() <= 1e-8;
        if !holds && ybe_residual(t1, wrong, t3, 2.0 * phi).lhs_rhs_norm <= 1e-6 {
            missed += 1;
        }
    }
    Ok(vec![
        Check::new("ybe/lorentz-branch", worst, cfg.tol(1e-12)),
        Check::count("ybe/violations-detected", missed),
    ])
}

fn chart(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = cfg.rng(Suite::Chart);
    let (mut op, mut conc) = (0.0f64, 0.0f64);
    for _ in 0..cfg.samples {
        let angles = ThreeBodyAngles::new(angle(&mut rng), angle(&mut rng), angle(&mut rng));
        let eb = eta_beta_from(angles);
        op = op.max((r123_exponential(eb) - r123_factorized(angles)).norm());
        let closed = concurrence_closed(eb);
        for state in generate_states(eb) {
            conc = conc.max(concurrence3(&state)?.max_abs_diff(&closed));
        }
    }
    Ok(vec![
        Check::new("chart/exponential-vs-factorized", op, cfg.tol(1e-12)),
        Check::new("chart/concurrence-closed-form", conc, cfg.tol(1e-10)),
    ])
}

fn spectrum(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let (mut levels, mut proj) = (0.0f64, 0.0f64);
    let mut bad_mult = 0;
    for i in 0..12 {
        for j in 0..12 {
            let eta = -PI / 2.0 + PI * (i as f64 + 0.5) / 12.0;
            let beta = -PI + 2.0 * PI * (j as f64 + 0.5) / 12.0;
            let dp = DriveParams::new(eta, beta);
            let rep = match eigenbasis3(dp, 0.3 * j as f64) {
                Ok(rep) => rep,
                Err(Error::Numerical(_)) => {
                    bad_mult += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let ep = dp.e_plus();
            let mut expect = [0.0, 0.0, 0.0, 0.0, ep, ep, -ep, -ep];
            expect.sort_by(f64::total_cmp);
            for (a, b) in rep.eigenvalues.iter().zip(expect) {
                levels = levels.max((a - b).abs());
            }
            if let Some(d) = rep.max_projector_distance() {
                proj = proj.max(d);
            }
        }
    }
    Ok(vec![
        Check::new("spectrum/levels", levels, cfg.tol(1e-10)),
        Check::new("spectrum/projectors", proj, cfg.tol(1e-9)),
        Check::count("spectrum/multiplicities", bad_mult),
    ])
}

fn berry(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let etas = if cfg.etas.is_empty() {
        vec![PI / 6.0, -PI / 6.0, PI / 3.0, -PI / 3.0, 0.2, 1.0]
    } else {
        cfg.etas.clone()
    };
    let mut checks = Vec::new();
    for band in [Band::Plus, Band::Minus] {
        let mut err = 0.0f64;
        let mut spread = 0.0f64;
        for &eta in &etas {
            let exact = berry_closed(eta, band);
            let values = [0.2, 0.9, -1.3]
                .iter()
                .map(|&beta| berry_phase(DriveParams::new(eta, beta), band, 10_000))
                .collect::<Result<Vec<_>>>()?;
            for v in &values {
                err = err.max((v - exact).abs());
            }
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            spread = spread.max(hi - lo);
        }
        let tag = match band {
            Band::Plus => "plus",
            Band::Minus => "minus",
        };
        checks.push(Check::new(format!("berry/{tag}-closed-form"), err, cfg.tol(1e-6)));
        checks.push(Check::new(format!("berry/{tag}-beta-spread"), spread, cfg.tol(1e-6)));
    }
    Ok(checks)
}

fn jw(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = cfg.rng(Suite::Jw);
    let (mut block, mut one, mut full) = (0.0f64, 0.0f64, 0.0f64);
    let samples = cfg.samples.min(20);
    for n in [4, 6, 8] {
        for _ in 0..samples {
            let spec = ChainSpec::open(n, angle(&mut rng), angle(&mut rng), angle(&mut rng));
            let spin = spin_chain_matrix(&spec)?;
            let table = fermion_quadratic(&spec)?;
            let spin_block = one_magnon_block(&spin, n);
            let fermion_block = table.one_particle_block();
            block = block.max((&spin_block - &fermion_block).norm());
            let a = herm_eig(&spin_block)?.eigenvalues;
            let b = herm_eig(&fermion_block)?.eigenvalues;
            one = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(one, f64::max);
            if n <= 6 {
                let spin_all = herm_eig(&spin)?.eigenvalues;
                let fermion_all = table.many_body_spectrum()?;
                full = spin_all
                    .iter()
                    .zip(&fermion_all)
                    .map(|(x, y)| (x - y).abs())
                    .fold(full, f64::max);
            }
        }
    }
    Ok(vec![
        Check::new("jw/one-magnon-block", block, cfg.tol(1e-10)),
        Check::new("jw/one-magnon-spectrum", one, cfg.tol(1e-10)),
        Check::new("jw/many-body-spectrum", full, cfg.tol(1e-10)),
    ])
}

fn zeromode(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let special = (6f64.sqrt() / 3.0).acos();
    let roots = zero_mode_cubic(special)?;
    let expect = [-0.5, 1.0, 1.0];
    let special_err = roots
        .iter()
        .zip(expect)
        .map(|(z, e)| (z - r(e)).norm())
        .fold(0.0, f64::max);

    let (mut unpaired, mut wrong_count) = (0, 0);
    for beta in interior_beta_grid(cfg.beta_grid) {
        let rep = boundary_nullspace(beta, &zero_mode_cubic(beta)?)?;
        if rep.moduli.iter().filter(|&&m| m <= 1.0 + 1e-8).count() != 2 {
            wrong_count += 1;
        }
        if rep.unpaired_mf {
            unpaired += 1;
        }
    }
    Ok(vec![
        Check::new("zeromode/special-roots", special_err, cfg.tol(1e-8)),
        Check::count("zeromode/two-roots-inside", wrong_count),
        Check::count("zeromode/unpaired-modes", unpaired),
    ])
}
