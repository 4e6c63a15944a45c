//! Command-line front end: every module exposed as a subcommand, with JSON
//! for scalar results, CSV for trajectories and grids, and a reproducibility
//! manifest embedded in (or written beside) every output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use hydrogen_so42::algebra::GeneratorSet;
use hydrogen_so42::constants::ZALPHA_HYDROGEN;
use hydrogen_so42::kepler::{great_circle_residual, orbit_from, sample_uniform_time};
use hydrogen_so42::shift::{bethe_log, shift_integral, shift_mhz};
use hydrogen_so42::wavefunctions::{overlap, s3_quadrature_for, y4, Angles4D};
use hydrogen_so42::wavepacket::{spread_revolutions, width_phi, PacketSpec};

#[derive(Parser)]
#[command(
    name = "hso42",
    version,
    about = "Hydrogen-atom SO(4,2) symmetry toolkit: algebra verification, \
             Kepler orbits, 4D harmonics, Rydberg wavepackets, radiative shifts"
)]
struct Cli {
    /// TOML file of default parameter values; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the commutation table and Casimir constants of the generator set.
    AlgebraVerify(AlgebraArgs),
    /// Radiative shift integrals, MHz conversions, and Bethe logarithms.
    Shift(ShiftArgs),
    /// Sample a classical Kepler orbit and its projection onto the 3-sphere.
    Orbit(OrbitArgs),
    /// Rydberg wavepacket width curve and spreading-revolution summary.
    Wavepacket(WavepacketArgs),
    /// Evaluate 4D spherical harmonics and check their orthonormality.
    Wavefunction(WavefunctionArgs),
}

#[derive(Args)]
struct AlgebraArgs {
    /// Basis truncation (largest principal quantum number kept).
    #[arg(long)]
    nmax: Option<i64>,
    /// Residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Emit the full machine-readable report instead of a summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ShiftArgs {
    /// Level as "N L"; repeatable.
    #[arg(long = "level", num_args = 2, value_names = ["N", "L"], required = true)]
    levels: Vec<i64>,
    /// Coupling Z*alpha (defaults to hydrogen).
    #[arg(long)]
    zalpha: Option<f64>,
    /// Also convert each integral to a frequency shift in MHz.
    #[arg(long)]
    mhz: bool,
    /// Also compute the Bethe logarithm of each level.
    #[arg(long = "bethe-log")]
    bethe_log: bool,
}

#[derive(Args)]
struct OrbitArgs {
    /// RMS momentum sqrt(-2 m E).
    #[arg(long)]
    a: Option<f64>,
    /// Eccentricity in [0, 1).
    #[arg(long)]
    e: Option<f64>,
    /// Number of uniform-in-time samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Revolutions to cover.
    #[arg(long)]
    revolutions: Option<f64>,
    /// Output CSV path (a .manifest.json sidecar is written next to it).
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct WavepacketArgs {
    /// Central principal quantum number.
    #[arg(long = "n-central")]
    n_central: Option<i64>,
    /// Orbit eccentricity (0 = circular).
    #[arg(long)]
    e: Option<f64>,
    /// Revolutions covered by the width curve.
    #[arg(long)]
    revolutions: Option<f64>,
    /// Output CSV path for the width curve.
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct WavefunctionArgs {
    /// Quantum numbers as "n l m" for grid output.
    #[arg(long, num_args = 3, value_names = ["N", "L", "M"], allow_negative_numbers = true)]
    nlm: Option<Vec<i64>>,
    /// Grid points per angle for --nlm output.
    #[arg(long)]
    grid: Option<usize>,
    /// Output CSV path for --nlm output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Check pairwise orthonormality of all harmonics with n <= NMAX.
    #[arg(long = "check-orthonormality", value_name = "NMAX")]
    check_orthonormality: Option<i64>,
}

/// Reproducibility manifest attached to every output.
#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    parameters: serde_json::Value,
    version: &'static str,
    wall_time_s: f64,
}

fn manifest(subcommand: &str, parameters: serde_json::Value, t0: Instant) -> RunManifest {
    RunManifest {
        subcommand: subcommand.to_string(),
        parameters,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: t0.elapsed().as_secs_f64(),
    }
}

/// Flat key/value defaults loaded from --config; flags take precedence.
struct Config(toml::Table);

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self(toml::Table::new()));
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| format!("config {}: {e}", path.display()))?;
        Ok(Self(table))
    }

    fn f64(&self, key: &str) -> Option<f64> {
        match self.0.get(key) {
            Some(toml::Value::Float(v)) => Some(*v),
            Some(toml::Value::Integer(v)) => Some(*v as f64),
            _ => None,
        }
    }

    fn i64(&self, key: &str) -> Option<i64> {
        match self.0.get(key) {
            Some(toml::Value::Integer(v)) => Some(*v),
            _ => None,
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HSO42_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: HSO42_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let config = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::AlgebraVerify(a) => cmd_algebra_verify(a, &config),
        Command::Shift(a) => cmd_shift(a, &config),
        Command::Orbit(a) => cmd_orbit(a, &config),
        Command::Wavepacket(a) => cmd_wavepacket(a, &config),
        Command::Wavefunction(a) => cmd_wavefunction(a, &config),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_algebra_verify(args: &AlgebraArgs, config: &Config) -> Result<ExitCode, String> {
    let t0 = Instant::now();
    let nmax = args.nmax.or_else(|| config.i64("nmax")).unwrap_or(8);
    let tol = args.tol.or_else(|| config.f64("tol")).unwrap_or(1e-10);
    if nmax < 5 {
        return Err(format!(
            "--nmax must be at least 5 (the quartic Casimirs need interior \
             states n <= nmax - 4; at nmax = {nmax} that subspace is empty)"
        ));
    }
    let gens = GeneratorSet::new(nmax).map_err(|e| e.to_string())?;
    let table = gens
        .verify_commutation_table(nmax - 2, tol)
        .map_err(|e| e.to_string())?;
    let casimirs = gens.casimirs(nmax - 4).map_err(|e| e.to_string())?;

    let mut offenders = table.offenders.clone();
    for (name, check, expected) in [
        ("Q2", &casimirs.q2, 2.0),
        ("W2", &casimirs.w2, 3.0),
        ("W3", &casimirs.w3, 0.0),
        ("W4", &casimirs.w4, -18.0),
    ] {
        if check.max_diag_deviation > tol || check.max_offdiag > tol {
            offenders.push(format!(
                "Casimir {name} != {expected}: diagonal deviation {:.3e}, \
                 off-diagonal leakage {:.3e}",
                check.max_diag_deviation, check.max_offdiag
            ));
        }
    }
    if casimirs.so4_level_identity > tol {
        offenders.push(format!(
            "a^2 + L^2 - Gamma0^2 + 1 residual {:.3e}",
            casimirs.so4_level_identity
        ));
    }
    let pass = offenders.is_empty();

    let params = json!({ "nmax": nmax, "tol": tol });
    if args.json {
        let out = json!({
            "manifest": manifest("algebra-verify", params, t0),
            "pass": pass,
            "commutators": table,
            "casimirs": casimirs,
            "offenders": offenders,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "commutation table: {} relations, max residual {:.3e} (interior n <= {})",
            table.relations.len(),
            table.max_residual(),
            nmax - 2
        );
        println!(
            "Casimirs Q2/W2/W3/W4 on n <= {}: max diagonal deviation {:.3e}, \
             off-diagonal leakage {:.3e}",
            nmax - 4,
            [&casimirs.q2, &casimirs.w2, &casimirs.w3, &casimirs.w4]
                .iter()
                .map(|c| c.max_diag_deviation)
                .fold(0.0_f64, f64::max),
            [&casimirs.q2, &casimirs.w2, &casimirs.w3, &casimirs.w4]
                .iter()
                .map(|c| c.max_offdiag)
                .fold(0.0_f64, f64::max),
        );
        println!(
            "SO(4) level identity residual: {:.3e}",
            casimirs.so4_level_identity
        );
        if pass {
            println!("PASS (tolerance {tol:.1e})");
        } else {
            println!("FAIL (tolerance {tol:.1e}), offenders:");
            for o in &offenders {
                println!("  {o}");
            }
        }
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_shift(args: &ShiftArgs, config: &Config) -> Result<ExitCode, String> {
    let t0 = Instant::now();
    let zalpha = args
        .zalpha
        .or_else(|| config.f64("zalpha"))
        .unwrap_or(ZALPHA_HYDROGEN);
    let levels: Vec<(i64, i64)> = args.levels.chunks(2).map(|c| (c[0], c[1])).collect();

    use rayon::prelude::*;
    let results: Result<Vec<serde_json::Value>, String> = levels
        .par_iter()
        .map(|&(n, l)| {
            let integral = shift_integral(n, l, zalpha).map_err(|e| e.to_string())?;
            let mut entry = json!({ "n": n, "l": l, "integral": integral });
            if args.mhz {
                entry["shift_mhz"] = json!(shift_mhz(&integral));
            }
            if args.bethe_log {
                let b = bethe_log(n, l, zalpha).map_err(|e| e.to_string())?;
                entry["bethe_log"] = json!(b);
            }
            Ok(entry)
        })
        .collect();
    let results = results?;

    let mut out = json!({
        "manifest": manifest(
            "shift",
            json!({
                "levels": levels, "zalpha": zalpha,
                "mhz": args.mhz, "bethe_log": args.bethe_log,
            }),
            t0,
        ),
        "results": results,
    });
    if args.mhz {
        let find = |n: i64, l: i64| {
            out["results"]
                .as_array()
                .unwrap()
                .iter()
                .find(|r| r["n"] == n && r["l"] == l)
                .map(|r| r["shift_mhz"].as_f64().unwrap())
        };
        if let (Some(s), Some(p)) = (find(2, 0), find(2, 1)) {
            out["splitting_2s_2p_mhz"] = json!(s - p);
        }
    }
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(ExitCode::SUCCESS)
}

fn write_manifest_sidecar(csv_path: &Path, manifest: &RunManifest) -> Result<(), String> {
    let mut sidecar = csv_path.as_os_str().to_owned();
    sidecar.push(".manifest.json");
    std::fs::write(
        &sidecar,
        serde_json::to_string_pretty(manifest).unwrap() + "\n",
    )
    .map_err(|e| format!("cannot write manifest sidecar: {e}"))
}

fn cmd_orbit(args: &OrbitArgs, config: &Config) -> Result<ExitCode, String> {
    let t0 = Instant::now();
    let a = args.a.or_else(|| config.f64("a")).unwrap_or(1.0);
    let e = args.e.or_else(|| config.f64("e")).unwrap_or(0.0);
    let samples = args
        .samples
        .or_else(|| config.i64("samples").map(|v| v as usize))
        .unwrap_or(1000);
    let revolutions = args
        .revolutions
        .or_else(|| config.f64("revolutions"))
        .unwrap_or(1.0);
    let zalpha = config.f64("zalpha").unwrap_or(ZALPHA_HYDROGEN);

    let orbit = orbit_from(a, e, 1.0, zalpha).map_err(|e| e.to_string())?;
    let rows = sample_uniform_time(&orbit, samples, revolutions).map_err(|e| e.to_string())?;

    let mut w = csv::Writer::from_path(&args.csv)
        .map_err(|e| format!("cannot open {}: {e}", args.csv.display()))?;
    w.write_record([
        "t",
        "x",
        "y",
        "p1",
        "p2",
        "u1",
        "u2",
        "u3",
        "u4",
        "circle_residual",
    ])
    .map_err(|e| e.to_string())?;
    for s in &rows {
        let res = great_circle_residual(&orbit, &s.u);
        w.write_record(
            [
                s.t, s.x, s.y, s.p1, s.p2, s.u.0[0], s.u.0[1], s.u.0[2], s.u.0[3], res.circle,
            ]
            .map(|v| format!("{v:.17e}")),
        )
        .map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())?;

    let m = manifest(
        "orbit",
        json!({
            "a": a, "e": e, "samples": samples, "revolutions": revolutions,
            "zalpha": zalpha, "orbit": orbit, "csv": args.csv.display().to_string(),
        }),
        t0,
    );
    write_manifest_sidecar(&args.csv, &m)?;
    println!("{}", serde_json::to_string_pretty(&json!({"manifest": m})).unwrap());
    Ok(ExitCode::SUCCESS)
}

fn cmd_wavepacket(args: &WavepacketArgs, config: &Config) -> Result<ExitCode, String> {
    let t0 = Instant::now();
    let n_central = args
        .n_central
        .or_else(|| config.i64("n_central"))
        .unwrap_or(10_000);
    let e = args.e.or_else(|| config.f64("e")).unwrap_or(0.0);
    let revolutions = args
        .revolutions
        .or_else(|| config.f64("revolutions"))
        .unwrap_or(50.0);

    let spec = PacketSpec::new(n_central, e).map_err(|e| e.to_string())?;
    let crossing = spread_revolutions(&spec);

    let mut w = csv::Writer::from_path(&args.csv)
        .map_err(|e| format!("cannot open {}: {e}", args.csv.display()))?;
    w.write_record(["revolution", "t", "width_phi"])
        .map_err(|e| e.to_string())?;
    let steps = (revolutions * 10.0).ceil() as usize;
    for k in 0..=steps {
        let rev = revolutions * k as f64 / steps as f64;
        let t = rev * spec.period();
        w.write_record([rev, t, width_phi(&spec, t)].map(|v| format!("{v:.17e}")))
            .map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())?;

    let m = manifest(
        "wavepacket",
        json!({
            "n_central": n_central, "e": e, "revolutions": revolutions,
            "csv": args.csv.display().to_string(),
        }),
        t0,
    );
    write_manifest_sidecar(&args.csv, &m)?;
    let out = json!({
        "manifest": m,
        "period": spec.period(),
        "spread_crossing": crossing,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(ExitCode::SUCCESS)
}

fn cmd_wavefunction(args: &WavefunctionArgs, config: &Config) -> Result<ExitCode, String> {
    let t0 = Instant::now();
    if args.nlm.is_none() && args.check_orthonormality.is_none() {
        return Err("nothing to do: pass --nlm N L M (with --csv) and/or \
                    --check-orthonormality NMAX"
            .into());
    }

    let mut out = json!({});
    let mut pass = true;

    if let Some(nmax) = args.check_orthonormality {
        if !(1..=8).contains(&nmax) {
            return Err(format!(
                "--check-orthonormality expects 1 <= NMAX <= 8, got {nmax}"
            ));
        }
        let tol = config.f64("tol").unwrap_or(1e-8);
        let nodes = s3_quadrature_for(nmax);
        let mut states = Vec::new();
        for n in 1..=nmax {
            for l in 0..n {
                for m in -l..=l {
                    states.push((n, l, m));
                }
            }
        }
        let mut worst = 0.0_f64;
        for (i, &bra) in states.iter().enumerate() {
            for &ket in &states[i..] {
                let expected = if bra == ket { 1.0 } else { 0.0 };
                let ov = overlap(bra, ket, &nodes).map_err(|e| e.to_string())?;
                worst = worst.max((ov.re - expected).abs().max(ov.im.abs()));
            }
        }
        pass &= worst < tol;
        out["orthonormality"] = json!({
            "nmax": nmax, "states": states.len(),
            "max_deviation": worst, "tol": tol, "pass": worst < tol,
        });
    }

    if let Some(nlm) = &args.nlm {
        let (n, l, m) = (nlm[0], nlm[1], nlm[2]);
        let grid = args
            .grid
            .or_else(|| config.i64("grid").map(|v| v as usize))
            .unwrap_or(24);
        if grid < 2 {
            return Err("--grid must be at least 2".into());
        }
        let csv_path = args
            .csv
            .as_ref()
            .ok_or("--nlm output needs --csv PATH")?;
        let mut w = csv::Writer::from_path(csv_path)
            .map_err(|e| format!("cannot open {}: {e}", csv_path.display()))?;
        w.write_record(["theta4", "theta", "phi", "re", "im"])
            .map_err(|e| e.to_string())?;
        let pi = std::f64::consts::PI;
        for i in 0..grid {
            // open grids: polar angles away from the coordinate poles
            let theta4 = pi * (i as f64 + 0.5) / grid as f64;
            for j in 0..grid {
                let theta = pi * (j as f64 + 0.5) / grid as f64;
                for k in 0..grid {
                    let phi = 2.0 * pi * k as f64 / grid as f64;
                    let omega = Angles4D::new(theta4, theta, phi).map_err(|e| e.to_string())?;
                    let v = y4(n, l, m, &omega).map_err(|e| e.to_string())?;
                    w.write_record([theta4, theta, phi, v.re, v.im].map(|v| format!("{v:.17e}")))
                        .map_err(|e| e.to_string())?;
                }
            }
        }
        w.flush().map_err(|e| e.to_string())?;
        out["grid_csv"] = json!(csv_path.display().to_string());
    }

    let m = manifest(
        "wavefunction",
        json!({
            "nlm": args.nlm, "grid": args.grid,
            "check_orthonormality": args.check_orthonormality,
            "csv": args.csv.as_ref().map(|p| p.display().to_string()),
        }),
        t0,
    );
    out["manifest"] = json!(m);
    if let Some(p) = &args.csv {
        write_manifest_sidecar(p, &m)?;
    }
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
