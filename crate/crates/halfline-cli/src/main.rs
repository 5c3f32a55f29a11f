//! Batch front end for the half-line scattering toolkit: direct solves,
//! resonance reports, Darboux transforms, both inversions, and built-in
//! demonstration scenarios that emit plot-ready CSV and JSON reports.

use clap::{Parser, Subcommand, ValueEnum};
use halfline::darboux::{
    add_bound_state, remove_bound_state, support_preserving_norming_constant, Direction,
};
use halfline::direct::{bound_states, full_line_coefficients, h_function, jost_function, sample_direct};
use halfline::gelfand_levitan::{enumerate_solutions, GlOptions};
use halfline::marchenko::{invert, CaseTag, MarchenkoOptions};
use halfline::potential::{make_operator_spec, BoundaryParameter, OperatorSpec};
use halfline::resonance::{analyze, Eligibility};
use halfline::{Error, SampledFunction};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "halfline", about = "Half-line Schrödinger scattering toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the direct problem: write F, S and |F| on a k-grid as CSV.
    Direct {
        /// Operator-spec JSON file.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = halfline::KMAX_DEFAULT)]
        kmax: f64,
        #[arg(long, default_value_t = halfline::DK_DEFAULT)]
        dk: f64,
        /// Output directory for F.csv, S.csv, absF.csv.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Locate and classify imaginary resonances; write a JSON report.
    Resonances {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        beta_max: f64,
        /// Report path (JSON).
        #[arg(long, default_value = "resonances.json")]
        out: PathBuf,
        /// Optional CSV of H(β) samples for plotting.
        #[arg(long)]
        h_csv: Option<PathBuf>,
    },
    /// Add or remove a bound state by a support-preserving transformation.
    Darboux {
        #[arg(value_enum)]
        action: DarbouxAction,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        gamma: f64,
        /// Norming constant g (required for remove).
        #[arg(long)]
        g: Option<f64>,
        #[arg(long, default_value = "transformed.json")]
        out: PathBuf,
        /// Re-solve the transformed operator and check the rational update.
        #[arg(long)]
        verify: bool,
    },
    /// Recover the operator(s) from scattering-matrix samples.
    InvertS {
        /// CSV of S samples (columns k, re, im).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        bmax: f64,
        #[arg(long, default_value_t = halfline::CELLS_DEFAULT)]
        cells: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Recover the full solution family from |F| samples.
    InvertAbsf {
        /// CSV of |F| samples (columns k, value).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 1.0)]
        bmax: f64,
        #[arg(long, default_value_t = halfline::CELLS_DEFAULT)]
        cells: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a built-in demonstration scenario.
    Demo {
        #[arg(value_enum)]
        which: DemoId,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DarbouxAction {
    Add,
    Remove,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoId {
    Ex61,
    Ex62a,
    Ex62b,
    Ex62c,
    Ex63,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Rounds to 12 significant digits so reports are byte-identical across runs.
fn r12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let d = x.abs().log10().floor();
    let f = 10f64.powf(11.0 - d);
    (x * f).round() / f
}

fn jnum(x: f64) -> Value {
    json!(r12(x))
}

fn read_spec(path: &Path) -> Result<OperatorSpec, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    OperatorSpec::from_json(&text)
}

fn write_file(path: &Path, content: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn read_samples(path: &Path) -> Result<SampledFunction, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    SampledFunction::from_csv(&text)
}

fn boundary_json(b: &BoundaryParameter) -> Value {
    match b {
        BoundaryParameter::Dirichlet => json!({"kind": "dirichlet"}),
        BoundaryParameter::NonDirichlet { cot_theta } => {
            json!({"kind": "non_dirichlet", "cot_theta": jnum(*cot_theta)})
        }
    }
}

fn resonance_report_json(spec: &OperatorSpec, beta_max: f64) -> Result<Value, Error> {
    let report = analyze(spec, beta_max)?;
    let resonances: Vec<Value> = report
        .resonances
        .iter()
        .map(|r| {
            json!({
                "gamma": jnum(r.gamma),
                "eligible": r.eligibility == Eligibility::Eligible,
                "simple": r.simple,
            })
        })
        .collect();
    Ok(json!({
        "resonances": resonances,
        "M": report.maximal_eligible_count,
        "beta_max": jnum(beta_max),
        "bound_states": report.bound_state_count,
    }))
}

fn h_samples_csv(spec: &OperatorSpec, beta_max: f64) -> Result<String, Error> {
    let mut out = String::from("x_or_k,re,im\n");
    let n = (2.0 * beta_max / 0.01).round() as usize;
    for i in 0..=n {
        let beta = -beta_max + 0.01 * i as f64;
        let h = h_function(spec, beta)?;
        out.push_str(&format!("{},{},0\n", r12(beta), r12(h)));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Direct { spec, kmax, dk, out_dir } => {
            let spec = read_spec(&spec)?;
            let (f, s, absf) = sample_direct(&spec, kmax, dk)?;
            write_file(&out_dir.join("F.csv"), &f.to_csv())?;
            write_file(&out_dir.join("S.csv"), &s.to_csv())?;
            write_file(&out_dir.join("absF.csv"), &absf.to_csv())?;
            println!("wrote F.csv, S.csv, absF.csv to {}", out_dir.display());
            Ok(())
        }
        Command::Resonances { spec, beta_max, out, h_csv } => {
            let spec = read_spec(&spec)?;
            let report = resonance_report_json(&spec, beta_max)?;
            write_file(&out, &serde_json::to_string_pretty(&report).unwrap())?;
            if let Some(path) = h_csv {
                write_file(&path, &h_samples_csv(&spec, beta_max)?)?;
            }
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(())
        }
        Command::Darboux { action, spec, gamma, g, out, verify } => {
            let spec = read_spec(&spec)?;
            let outcome = match action {
                DarbouxAction::Add => add_bound_state(&spec, gamma)?,
                DarbouxAction::Remove => {
                    let g = g.ok_or_else(|| {
                        Error::InvalidInput("remove requires --g (norming constant)".into())
                    })?;
                    remove_bound_state(&spec, gamma, g)?
                }
            };
            if verify {
                let dir = match action {
                    DarbouxAction::Add => Direction::Add,
                    DarbouxAction::Remove => Direction::Remove,
                };
                let mut worst: f64 = 0.0;
                for i in 1..=50 {
                    let k = 0.17 * i as f64;
                    let kk = Complex64::new(k, 0.0);
                    let f_old = jost_function(&spec, kk);
                    let f_new = jost_function(&outcome.spec, kk);
                    let ig = Complex64::new(0.0, gamma);
                    let expect = match dir {
                        Direction::Add => f_old * (kk - ig) / (kk + ig),
                        Direction::Remove => f_old * (kk + ig) / (kk - ig),
                    };
                    worst = worst.max((f_new - expect).norm() / (1.0 + expect.norm()));
                }
                if worst > 1e-5 {
                    return Err(Error::Verification(format!(
                        "rational Jost update check failed: residual {worst:.3e}"
                    )));
                }
                println!("verify: rational Jost update residual {worst:.3e}");
            }
            write_file(&out, &outcome.spec.to_json())?;
            let info = json!({
                "gamma": jnum(outcome.step.gamma),
                "g_squared": jnum(outcome.step.g_squared),
                "boundary": boundary_json(&outcome.spec.boundary),
                "bound_state": outcome.bound_state.map(|bs| json!({
                    "gamma": jnum(bs.gamma), "g": jnum(bs.g), "m": jnum(bs.m)
                })),
            });
            println!("{}", serde_json::to_string(&info).unwrap());
            Ok(())
        }
        Command::InvertS { input, bmax, cells, out_dir } => {
            let s = read_samples(&input)?;
            let opts = MarchenkoOptions { b_est: bmax, cells, ..Default::default() };
            let res = invert(&s, &opts)?;
            for (i, sol) in res.solutions.iter().enumerate() {
                let path = out_dir.join(format!("solution_{}.json", i + 1));
                write_file(&path, &sol.spec.to_json())?;
            }
            let d = &res.diagnostics;
            let report = json!({
                "case": match res.case { CaseTag::I => "I", CaseTag::II => "II", CaseTag::III => "III" },
                "solutions": res.solutions.len(),
                "boundaries": res.solutions.iter().map(|s| boundary_json(&s.spec.boundary)).collect::<Vec<_>>(),
                "bound_states": res.solutions.iter().map(|s| s.bound_states.entries.iter().map(|e| json!({
                    "gamma": jnum(e.gamma), "g": jnum(e.g), "m": jnum(e.m)
                })).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "s_reproduction": d.s_reproduction.iter().map(|x| jnum(*x)).collect::<Vec<_>>(),
                "dirichlet_deviation": d.dirichlet_deviation.map(jnum),
                "cot_theta_spread": d.cot_theta_spread.map(jnum),
                "jost_identity_residual": d.jost_identity_residual.map(jnum),
                "potential_integrals": d.potential_integrals.map(|(a, b)| json!([jnum(a), jnum(b)])),
                "full_line_mismatch": d.full_line_mismatch.map(|(t, r)| json!([jnum(t), jnum(r)])),
            });
            write_file(&out_dir.join("report.json"), &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(())
        }
        Command::InvertAbsf { input, beta_max, bmax, cells, out_dir } => {
            let absf = read_samples(&input)?;
            let opts = GlOptions { b_est: bmax, cells, ..Default::default() };
            let family = enumerate_solutions(&absf, beta_max, &opts)?;
            let mut members = Vec::new();
            for m in &family.members {
                let path = out_dir.join(format!("member_{:02}.json", m.mask));
                write_file(&path, &m.spec.to_json())?;
                members.push(json!({
                    "mask": m.mask,
                    "boundary": boundary_json(&m.spec.boundary),
                    "gammas": m.bound_states.entries.iter().map(|e| jnum(e.gamma)).collect::<Vec<_>>(),
                    "gs": m.bound_states.entries.iter().map(|e| jnum(e.g)).collect::<Vec<_>>(),
                    "abs_f_error": jnum(m.abs_f_error),
                }));
            }
            let report = json!({
                "M": family.eligible.len(),
                "eligible_betas": family.eligible.iter().map(|(g, _)| jnum(-g)).collect::<Vec<_>>(),
                "eligible_g_squared": family.eligible.iter().map(|(_, g2)| jnum(*g2)).collect::<Vec<_>>(),
                "members": members,
                "beta_max": jnum(family.beta_max),
            });
            write_file(&out_dir.join("family.json"), &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(())
        }
        Command::Demo { which, out_dir } => demo(which, &out_dir),
    }
}

/// Depth parameter of the two-step demonstration potential: the root near 1
/// of `√a·tan(√a/2) = tanh(1/2)`, found by bisection.
fn depth_parameter() -> f64 {
    let f = |a: f64| a.sqrt() * (a.sqrt() / 2.0).tan() - 0.5_f64.tanh();
    let (mut lo, mut hi) = (0.5, 1.3);
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn demo(which: DemoId, out_dir: &Path) -> Result<(), Error> {
    match which {
        DemoId::Ex61 => {
            // free potential, cot θ = -1: one eligible resonance at γ = 1
            let spec = make_operator_spec(
                1.0,
                &[0.0],
                BoundaryParameter::NonDirichlet { cot_theta: -1.0 },
            )?;
            let report = resonance_report_json(&spec, 5.0)?;
            let g2 = support_preserving_norming_constant(&spec, 1.0)?;
            let added = add_bound_state(&spec, 1.0)?;
            let out = json!({
                "spec": {"b": 1.0, "cells": [0.0], "boundary": boundary_json(&spec.boundary)},
                "resonances": report,
                "g_squared_at_1": jnum(g2),
                "after_add": {
                    "boundary": boundary_json(&added.spec.boundary),
                    "max_abs_potential": jnum(added.spec.potential.max_abs()),
                },
            });
            write_file(&out_dir.join("demo_ex61.json"), &serde_json::to_string_pretty(&out).unwrap())?;
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(())
        }
        DemoId::Ex62a | DemoId::Ex62b | DemoId::Ex62c => {
            let (name, v, cot) = match which {
                DemoId::Ex62a => ("ex62a", -10.0, 1.0),
                DemoId::Ex62b => ("ex62b", -0.2, 6.0),
                _ => ("ex62c", 0.003521, -3.0),
            };
            let spec =
                make_operator_spec(1.0, &[v], BoundaryParameter::NonDirichlet { cot_theta: cot })?;
            let bs = bound_states(&spec, 10.0)?;
            let report = analyze(&spec, 8.0)?;
            let mut res_json = Vec::new();
            for r in &report.resonances {
                let g2 = if r.simple {
                    Some(support_preserving_norming_constant(&spec, r.gamma)?)
                } else {
                    None
                };
                res_json.push(json!({
                    "gamma": jnum(r.gamma),
                    "eligible": r.eligibility == Eligibility::Eligible,
                    "simple": r.simple,
                    "g_squared": g2.map(jnum),
                }));
            }
            let out = json!({
                "well_depth": jnum(v),
                "cot_theta": jnum(cot),
                "bound_states": bs.entries.iter().map(|e| json!({
                    "gamma": jnum(e.gamma), "g": jnum(e.g), "m": jnum(e.m)
                })).collect::<Vec<_>>(),
                "resonances": res_json,
                "M": report.maximal_eligible_count,
            });
            write_file(
                &out_dir.join(format!("demo_{name}.json")),
                &serde_json::to_string_pretty(&out).unwrap(),
            )?;
            write_file(&out_dir.join(format!("H_{name}.csv")), &h_samples_csv(&spec, 8.0)?)?;
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(())
        }
        DemoId::Ex63 => {
            let a = depth_parameter();
            let resid = a.sqrt() * (a.sqrt() / 2.0).tan() - 0.5_f64.tanh();
            if resid.abs() > 1e-10 {
                return Err(Error::Numerical(format!(
                    "depth-parameter residual {resid:.3e} exceeds 1e-10"
                )));
            }
            // two-step potential: +1 on (0, 1/2), -a on (1/2, 1), Dirichlet
            let spec = make_operator_spec(1.0, &[1.0, -a], BoundaryParameter::Dirichlet)?;
            let c0 = full_line_coefficients(&spec, Complex64::new(0.0, 0.0))?;
            let (_, s, _) = sample_direct(&spec, halfline::KMAX_DEFAULT, halfline::DK_DEFAULT)?;
            let opts = MarchenkoOptions { b_est: 1.0, ..Default::default() };
            let res = invert(&s, &opts)?;
            if res.case != CaseTag::III {
                return Err(Error::Verification(format!(
                    "expected the two-solution case, got {:?}",
                    res.case
                )));
            }
            for (i, sol) in res.solutions.iter().enumerate() {
                write_file(&out_dir.join(format!("ex63_solution_{}.json", i + 1)), &sol.spec.to_json())?;
            }
            let d = &res.diagnostics;
            let (i1, i2) = d.potential_integrals.unwrap_or((f64::NAN, f64::NAN));
            let out = json!({
                "depth_parameter": jnum(a),
                "equation_residual": jnum(resid),
                "t_at_zero": jnum(c0.t.re),
                "l_at_zero": jnum(c0.l.re),
                "r_at_zero": jnum(c0.r.re),
                "case": "III",
                "boundaries": res.solutions.iter().map(|s| boundary_json(&s.spec.boundary)).collect::<Vec<_>>(),
                "potential_integrals": [jnum(i1), jnum(i2)],
                "integral_match": jnum((i1 - i2).abs()),
                "s_reproduction": d.s_reproduction.iter().map(|x| jnum(*x)).collect::<Vec<_>>(),
                "jost_identity_residual": d.jost_identity_residual.map(jnum),
            });
            write_file(&out_dir.join("demo_ex63.json"), &serde_json::to_string_pretty(&out).unwrap())?;
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(())
        }
    }
}
