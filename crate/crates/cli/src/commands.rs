use std::f64::consts::PI;
use std::fmt::Write as _;

use serde_json::{json, Value};
use ybe_entangle::chain::zeromode::{boundary_nullspace, interior_beta_grid};
use ybe_entangle::chain::{fig1_csv, fig1_data, zero_mode_cubic};
use ybe_entangle::entanglement::{
    classify, concurrence3, concurrence_closed, concurrence_from_thetas, polytope_lambdas, CLASSIFY_TOL,
};
use ybe_entangle::format::sig12;
use ybe_entangle::hamiltonian::{berry_closed, berry_phase, eigenbasis3, Band, DriveParams};
use ybe_entangle::threebody::{eta_beta_from, generate_states, EtaBeta, ThreeBodyAngles};
use ybe_entangle::transfer::{linspace, maximize, sweep, TransferSpec};
use ybe_entangle::verify::{self, Suite, VerifyConfig};

use crate::params::Params;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Verify,
    States,
    Concurrence,
    Spectrum,
    Berry,
    Fig1,
    Zeromode,
    Transfer,
}

pub struct Output {
    pub report: Value,
    pub summary: String,
    pub csv: Option<String>,
    /// False only when a verification check failed.
    pub passed: bool,
}

impl Output {
    fn data(report: Value, summary: String, csv: Option<String>) -> Self {
        Self { report, summary, csv, passed: true }
    }
}

pub fn execute(kind: Kind, p: &Params) -> Result<Output, CliError> {
    match kind {
        Kind::Verify => verify_cmd(p),
        Kind::States => states(p),
        Kind::Concurrence => concurrence(p),
        Kind::Spectrum => spectrum(p),
        Kind::Berry => berry(p),
        Kind::Fig1 => fig1(p),
        Kind::Zeromode => zeromode(p),
        Kind::Transfer => transfer(p),
    }
}

fn positive(value: usize, name: &str) -> Result<usize, CliError> {
    if value == 0 {
        return Err(CliError::Input(format!("--{name} must be positive")));
    }
    Ok(value)
}

fn chart(p: &Params) -> Result<EtaBeta, CliError> {
    Ok(EtaBeta::new(Params::require(p.eta, "eta")?, p.required_beta()?, p.phi.unwrap_or(0.0)))
}

fn verify_cmd(p: &Params) -> Result<Output, CliError> {
    let suites = match p.suite.as_deref().unwrap_or("all") {
        "all" => Suite::ALL.to_vec(),
        name => vec![name.parse::<Suite>()?],
    };
    let cfg = VerifyConfig {
        samples: p.samples.unwrap_or(100),
        seed: p.seed.unwrap_or(7),
        tol: p.tol,
        etas: p.etas.clone().unwrap_or_default(),
        beta_grid: p.beta_grid.unwrap_or(200),
    };
    let mut checks = Vec::new();
    for suite in suites {
        checks.extend(verify::run(suite, &cfg)?);
    }
    let passed = checks.iter().all(|c| c.passed);
    let mut summary = String::new();
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        writeln!(summary, "{:<36} residual {:.3e}  tol {:.1e}  {tag}", c.name, c.residual, c.tol).ok();
    }
    writeln!(summary, "{} of {} checks passed", checks.iter().filter(|c| c.passed).count(), checks.len()).ok();
    Ok(Output { report: json!({ "passed": passed, "checks": checks }), summary, csv: None, passed })
}

fn states(p: &Params) -> Result<Output, CliError> {
    let eb = chart(p)?;
    let states = generate_states(eb);
    let closed = concurrence_closed(eb);
    let class = classify(&closed, p.tol.unwrap_or(CLASSIFY_TOL));

    let mut csv = String::from("state,basis,re,im\n");
    let mut summary = String::new();
    let mut list = Vec::new();
    for (k, v) in states.iter().enumerate() {
        let mut line = format!("state {}:", k + 1);
        for (b, a) in v.iter().enumerate() {
            writeln!(csv, "{},{b:03b},{},{}", k + 1, sig12(a.re), sig12(a.im)).ok();
            let sign = if a.im.is_sign_negative() { '-' } else { '+' };
            write!(line, " {}{sign}{}i", sig12(a.re), sig12(a.im.abs())).ok();
        }
        summary.push_str(&line);
        summary.push('\n');
        list.push(json!({
            "index": k + 1,
            "amplitudes": v.iter().map(|a| [a.re, a.im]).collect::<Vec<_>>(),
            "concurrence": concurrence3(v)?,
        }));
    }
    let [a, b, c] = closed.as_array();
    writeln!(summary, "concurrence triple ({}, {}, {}), {:?}", sig12(a), sig12(b), sig12(c), class.tag).ok();
    let report = json!({ "chart": eb, "concurrence": closed, "class": class, "states": list });
    Ok(Output::data(report, summary, Some(csv)))
}

fn concurrence(p: &Params) -> Result<Output, CliError> {
    let phi = p.phi.unwrap_or(0.0);
    let (eb, from_thetas) = match (p.theta1, p.theta3) {
        (Some(t1), Some(t3)) => {
            if p.eta.is_some() || p.beta()?.is_some() {
                return Err(CliError::Input("give either --theta1/--theta3 or --eta/--beta, not both".into()));
            }
            let angles = ThreeBodyAngles::new(t1, t3, phi);
            let eb = eta_beta_from(angles);
            (eb, Some(json!({ "angles": angles, "theta2": angles.theta2(), "closed": concurrence_from_thetas(t1, t3) })))
        }
        (None, None) => (chart(p)?, None),
        _ => return Err(CliError::Input("--theta1 and --theta3 go together".into())),
    };
    let state = &generate_states(eb)[0];
    let numeric = concurrence3(state)?;
    let closed = concurrence_closed(eb);
    let class = classify(&numeric, p.tol.unwrap_or(CLASSIFY_TOL));
    let polytope = polytope_lambdas(state)?;
    let [a, b, c] = numeric.as_array();
    let summary = format!(
        "C^2 (1|23, 2|13, 3|12) = ({}, {}, {})\nclass {:?}, closed-form deviation {:.2e}\n",
        sig12(a),
        sig12(b),
        sig12(c),
        class.tag,
        numeric.max_abs_diff(&closed),
    );
    let report = json!({
        "chart": eb,
        "numeric": numeric,
        "closed": closed,
        "class": class,
        "polytope": polytope,
        "in_polytope": polytope.in_polytope(1e-12),
        "lorentz": from_thetas,
    });
    Ok(Output::data(report, summary, None))
}

fn spectrum(p: &Params) -> Result<Output, CliError> {
    let eb = chart(p)?;
    let dp = DriveParams { phi_rate: p.rate.unwrap_or(1.0), ..DriveParams::new(eb.eta, eb.beta) };
    let rep = eigenbasis3(dp, eb.phi)?;
    let mut summary = format!(
        "eigenvalues: {}\n",
        rep.eigenvalues.iter().map(|&e| sig12(e)).collect::<Vec<_>>().join(" ")
    );
    for level in &rep.levels {
        let dist = level.projector_distance.map_or("n/a".to_string(), |d| format!("{d:.2e}"));
        writeln!(summary, "level {} x{}  projector distance {dist}", sig12(level.energy), level.multiplicity).ok();
    }
    let report = json!({ "drive": dp, "phi": eb.phi, "spectrum": rep });
    Ok(Output::data(report, summary, None))
}

fn berry(p: &Params) -> Result<Output, CliError> {
    let eta = Params::require(p.eta, "eta")?;
    let beta = p.beta()?.unwrap_or(0.0);
    let steps = p.steps.unwrap_or(10_000);
    let bands = match p.band.as_deref().unwrap_or("both") {
        "both" => vec![Band::Plus, Band::Minus],
        name => vec![name.parse::<Band>()?],
    };
    let mut summary = String::new();
    let mut rows = Vec::new();
    for band in bands {
        let numeric = berry_phase(DriveParams::new(eta, beta), band, steps)?;
        let closed = berry_closed(eta, band);
        writeln!(summary, "{band:?}: {} (closed form {}, error {:.2e})", sig12(numeric), sig12(closed), (numeric - closed).abs()).ok();
        rows.push(json!({ "band": band, "numeric": numeric, "closed": closed, "error": (numeric - closed).abs() }));
    }
    let report = json!({ "eta": eta, "beta": beta, "steps": steps, "bands": rows });
    Ok(Output::data(report, summary, None))
}

/// Interior grid with the gap-closing point merged in.
fn fig1_grid(count: usize) -> Vec<f64> {
    let special = (6f64.sqrt() / 3.0).acos();
    let mut grid = interior_beta_grid(count);
    let at = grid.partition_point(|&b| b < special);
    if grid.get(at).is_none_or(|&b| (b - special).abs() > 1e-12) {
        grid.insert(at, special);
    }
    grid
}

fn fig1(p: &Params) -> Result<Output, CliError> {
    let count = positive(p.grid.unwrap_or(400), "grid")?;
    let rows = fig1_data(&fig1_grid(count))?;
    let csv = fig1_csv(&rows);
    let summary = format!("{} rows over beta in (0, pi/2)\n", rows.len());
    let report = json!({ "rows": rows });
    Ok(Output::data(report, summary, Some(csv)))
}

fn zeromode(p: &Params) -> Result<Output, CliError> {
    if let Some(beta) = p.beta()? {
        if p.beta_grid.is_some() {
            return Err(CliError::Input("give either --beta or --beta-grid".into()));
        }
        let rep = boundary_nullspace(beta, &zero_mode_cubic(beta)?)?;
        let summary = format!(
            "moduli ({}, {}, {}), inside {}, unpaired_mf {}, gap_closed {}\n",
            sig12(rep.moduli[0]),
            sig12(rep.moduli[1]),
            sig12(rep.moduli[2]),
            rep.inside_count,
            rep.unpaired_mf,
            rep.gap_closed
        );
        return Ok(Output::data(json!(rep), summary, None));
    }
    let count = positive(p.beta_grid.unwrap_or(200), "beta-grid")?;
    let mut csv = String::from("beta,abs_x1,abs_x2,abs_x3,inside_count,unpaired_mf,gap_closed\n");
    let (mut unpaired, mut closed) = (0, 0);
    for beta in interior_beta_grid(count) {
        let rep = boundary_nullspace(beta, &zero_mode_cubic(beta)?)?;
        let [a, b, c] = rep.moduli;
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            sig12(beta),
            sig12(a),
            sig12(b),
            sig12(c),
            rep.inside_count,
            rep.unpaired_mf,
            rep.gap_closed
        )
        .ok();
        unpaired += usize::from(rep.unpaired_mf);
        closed += usize::from(rep.gap_closed);
    }
    let summary = format!("{count} samples, unpaired_mf at {unpaired}, gap closed at {closed}\n");
    let report = json!({ "samples": count, "unpaired_count": unpaired, "gap_closed_count": closed });
    Ok(Output::data(report, summary, Some(csv)))
}

fn transfer(p: &Params) -> Result<Output, CliError> {
    let t_max = p.t_max.unwrap_or(20.0);
    let dt = p.dt.unwrap_or(0.004);
    if dt <= 0.0 || t_max < 0.0 {
        return Err(CliError::Input("--dt must be positive and --t-max non-negative".into()));
    }
    let n_t = (t_max / dt).round() as usize + 1;
    let spec = TransferSpec {
        n_sites: p.n.unwrap_or(6),
        beta: p.required_beta()?,
        theta_ac: p.theta.unwrap_or(0.0),
        m1: p.m1.unwrap_or(1),
        m2: p.m2.unwrap_or(2),
        t_max,
        n_t: n_t.max(2),
    };
    let (l1, l2) = (p.l1.unwrap_or(3), p.l2.unwrap_or(4));
    let thetas = match p.theta {
        Some(theta) => {
            if p.theta_min.is_some() || p.theta_max.is_some() || p.theta_steps.is_some() {
                return Err(CliError::Input("give either --theta or a theta range".into()));
            }
            vec![theta]
        }
        None => linspace(
            p.theta_min.unwrap_or(-PI),
            p.theta_max.unwrap_or(PI),
            positive(p.theta_steps.unwrap_or(629), "theta-steps")?,
        ),
    };
    let times = spec.times();
    let (report, csv) = if p.out.is_some() {
        let (surface, report) = sweep(&spec, l1, l2, &thetas, &times)?;
        (report, Some(surface.to_csv()))
    } else {
        (maximize(&spec, l1, l2, &thetas, &times)?, None)
    };
    let summary = format!(
        "max C_{{{l1},{l2}}} = {} at theta = {}, t = {}\n",
        sig12(report.c_max),
        sig12(report.theta_star),
        sig12(report.t_star)
    );
    Ok(Output::data(json!(report), summary, csv))
}
