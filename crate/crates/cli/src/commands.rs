use std::path::PathBuf;
use std::time::Instant;

use af_core::io::config::ConfigError;
use af_core::io::csv::{write_convergence, write_eigenvalues, write_section, write_table};
use af_core::problems::{section_diagonal, section_horizontal, vortex_diagnostics};
use af_core::scheme::{run, SnapshotSpec};
use af_core::stability::{analyze, max_cfl, spectral_radius_at, Method};
use af_core::{AfState, Error, ProblemId};
use serde_json::json;

use crate::manifest::{RunManifest, Versions};
use crate::settings::{EigMethod, RawSettings, Settings};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    ConfigFile(PathBuf, std::io::Error),
    Core(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::ConfigFile(p, e) => write!(f, "cannot read config file {}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::ConfigFile(..) => 2,
            CliError::Core(e) => match e {
                Error::Config(_) | Error::InvalidParameter { .. } | Error::InvalidGrid(_) | Error::NoExactSolution(_) => 2,
                Error::BlowUp { .. } => 3,
                Error::Bracket { .. } => 4,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

struct Output {
    name: String,
    files: Vec<PathBuf>,
    summary: serde_json::Value,
}

/// Runs `command` and writes its manifest; returns the manifest path.
pub fn execute(command: &str, raw: &RawSettings) -> Result<PathBuf, CliError> {
    let settings = Settings::resolve(raw)?;
    std::fs::create_dir_all(&settings.out_dir)?;
    let start = Instant::now();
    let out = match command {
        "run" => cmd_run(&settings, raw)?,
        "converge" => cmd_converge(&settings, raw)?,
        "stability" => cmd_stability(&settings)?,
        "eigs" => cmd_eigs(&settings, raw)?,
        other => unreachable!("unknown command {other}"),
    };
    let manifest = RunManifest {
        command: command.to_string(),
        config: raw.echo(),
        versions: Versions::current(),
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs: out.files,
        summary: out.summary,
    };
    let path = settings.out_dir.join(format!("{}_manifest.json", out.name));
    manifest.write(&path)?;
    Ok(path)
}

fn default_name(s: &Settings) -> String {
    format!("{}_{}_{}", s.problem.id, s.recon.name(), s.evolution.kind)
}

fn ranges(state: &AfState) -> [[f64; 2]; 3] {
    [0, 1, 2].map(|v| {
        let a = state.averages(v).as_slice();
        [a.iter().copied().fold(f64::INFINITY, f64::min), a.iter().copied().fold(f64::NEG_INFINITY, f64::max)]
    })
}

fn cmd_run(s: &Settings, raw: &RawSettings) -> Result<Output, CliError> {
    let cfg = s.scheme(raw)?;
    let name = s.name.clone().unwrap_or_else(|| default_name(s));
    let grid = s.problem.grid(s.nx, s.ny)?;
    let initial = s.problem.initial_state(&grid);
    let initial_range = ranges(&initial);
    let spec = SnapshotSpec { dir: s.out_dir.clone(), name: name.clone(), count: s.snapshots };
    let outcome = run(initial, &grid, &cfg, s.tend, Some(&spec))?;
    let state = &outcome.state;
    let mut files = outcome.snapshots.clone();

    let diag = vortex_diagnostics(state, &grid);
    let mut summary = json!({
        "steps": outcome.steps,
        "final_time": state.time,
        "dt": cfg.dt(&grid),
        "initial_range": initial_range,
        "final_range": ranges(state),
        "max_speed": diag.max_speed,
    });
    if s.problem.has_exact() {
        summary["l1_error"] = json!(s.problem.l1_error(state, &grid)?);
    }
    match s.problem.id {
        ProblemId::StationaryVortex => {
            let path = s.out_dir.join(format!("{name}_radial.csv"));
            let rows: Vec<Vec<f64>> = diag.radial_profile.iter().map(|&(r, v)| vec![r, v]).collect();
            write_table(&path, &["r", "speed"], &rows)?;
            files.push(path);
        }
        ProblemId::DiagonalRiemann => {
            for (tag, section) in [("h", section_horizontal(state, &grid)), ("d", section_diagonal(state, &grid))] {
                if let Some(points) = section {
                    let path = s.out_dir.join(format!("{name}_section_{tag}.csv"));
                    write_section(&path, &points)?;
                    files.push(path);
                }
            }
        }
        _ => {}
    }
    println!("{name}: {} steps to t = {}, max speed {:.6}", outcome.steps, state.time, diag.max_speed);
    Ok(Output { name, files, summary })
}

fn fmt_eoc(e: Option<f64>) -> String {
    e.map_or_else(|| "---".to_string(), |v| format!("{v:.4}"))
}

fn cmd_converge(s: &Settings, raw: &RawSettings) -> Result<Output, CliError> {
    let cfg = s.scheme(raw)?;
    let name = s.name.clone().unwrap_or_else(|| format!("{}_convergence", default_name(s)));
    let report = s.problem.convergence_study(&cfg, &s.resolutions, s.tend)?;
    let path = s.out_dir.join(format!("{name}_convergence.csv"));
    write_convergence(&path, &report)?;

    println!("{} {} {} cfl {} t = {}", s.problem.id, s.recon.name(), s.evolution.label(), cfg.cfl, s.tend);
    println!("{:>10} {:>12} {:>12} {:>12} {:>8} {:>8} {:>8}", "res", "err p", "err u", "err v", "eoc p", "eoc u", "eoc v");
    let mut rows = Vec::new();
    for (k, (&(nx, ny), e)) in report.resolutions.iter().zip(&report.errors).enumerate() {
        let eoc = if k == 0 { [None; 3] } else { report.eoc[k - 1] };
        println!(
            "{:>10} {:>12.4e} {:>12.4e} {:>12.4e} {:>8} {:>8} {:>8}",
            format!("{nx}x{ny}"),
            e[0],
            e[1],
            e[2],
            fmt_eoc(eoc[0]),
            fmt_eoc(eoc[1]),
            fmt_eoc(eoc[2])
        );
        rows.push(json!({ "nx": nx, "ny": ny, "error": e, "eoc": eoc }));
    }
    Ok(Output { name, files: vec![path], summary: json!({ "rows": rows }) })
}

fn cmd_stability(s: &Settings) -> Result<Output, CliError> {
    let name = s.name.clone().unwrap_or_else(|| format!("stability_{}", s.evolution.kind));
    let nus = if s.evolution.kind.uses_nu() { s.nus.clone() } else { vec![s.evolution.nu] };
    let deltas = if s.evolution.kind.uses_delta() { s.deltas.clone() } else { vec![s.evolution.delta] };
    let mut table = Vec::new();
    let mut rho_rows = Vec::new();
    let mut entries = Vec::new();
    for &nu in &nus {
        for &delta in &deltas {
            let mut ev = s.evolution;
            ev.delta = delta;
            ev.nu = nu;
            ev.validate()?;
            let cfg = af_core::SchemeConfig { recon: s.recon, evolution: ev, cfl: s.cfl_lo, cweno: s.cweno };
            let cfl_max = max_cfl(&cfg, s.m, s.cfl_lo, s.cfl_hi, s.tol)?;
            println!("{}: max CFL {cfl_max:.4}", ev.label());
            table.push(vec![delta, nu, cfl_max]);
            let mut rhos = Vec::new();
            for &cfl in &s.cfls {
                let rho = spectral_radius_at(&cfg.with_cfl(cfl), s.m)?;
                println!("  cfl {cfl}: spectral radius {rho:.12}");
                rho_rows.push(vec![delta, nu, cfl, rho]);
                rhos.push(json!({ "cfl": cfl, "rho": rho }));
            }
            entries.push(json!({ "delta": delta, "nu": nu, "max_cfl": cfl_max, "spectral_radius": rhos }));
        }
    }
    let path = s.out_dir.join(format!("{name}_stability.csv"));
    write_table(&path, &["delta", "nu", "max_cfl"], &table)?;
    let mut files = vec![path];
    if !rho_rows.is_empty() {
        let path = s.out_dir.join(format!("{name}_rho.csv"));
        write_table(&path, &["delta", "nu", "cfl", "rho"], &rho_rows)?;
        files.push(path);
    }
    Ok(Output { name, files, summary: json!({ "m": s.m, "tol": s.tol, "entries": entries }) })
}

fn cmd_eigs(s: &Settings, raw: &RawSettings) -> Result<Output, CliError> {
    let cfg = s.scheme(raw)?;
    let name = s.name.clone().unwrap_or_else(|| format!("eigs_{}_{}_cfl{}", s.recon.name(), s.evolution.kind, cfg.cfl));
    let method = match s.method {
        EigMethod::Dense => Method::Dense,
        EigMethod::Fourier => Method::Fourier,
    };
    let report = analyze(&cfg, s.m, method)?;
    let path = s.out_dir.join(format!("{name}_eigs.csv"));
    write_eigenvalues(&path, &report.eigenvalues)?;
    let outside = report.eigenvalues.iter().filter(|(re, im)| re.hypot(*im) > 1.0 + 1e-6).count();
    println!(
        "{} cfl {}: spectral radius {:.12}, {} of {} eigenvalues outside the unit circle",
        s.evolution.label(),
        cfg.cfl,
        report.spectral_radius,
        outside,
        report.eigenvalues.len()
    );
    let summary = json!({
        "m": s.m,
        "cfl": cfg.cfl,
        "spectral_radius": report.spectral_radius,
        "stable": report.stable,
        "outside_unit_circle": outside,
        "count": report.eigenvalues.len(),
    });
    Ok(Output { name, files: vec![path], summary })
}
