mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use num_complex::Complex64;
use serde_json::json;
use spincm::eigen;
use spincm::elliptic::oracle;
use spincm::spectrum::{self, Level};
use spincm::spin::{label_name, DIM};
use spincm::verify::{self, Report};

use crate::config::{parse_complex, ConfigError, Format, GlobalArgs, RunConfig};
use crate::output::{complex_pair, emit, Table};

#[derive(Debug, Parser)]
#[command(name = "spincm", version, about = "Three-particle spin-1/2 elliptic Calogero-Moser toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the verification suites, or re-check a saved spectrum with --levels
    Verify {
        /// Spectrum output (JSON or CSV) whose levels are re-verified
        #[arg(long, value_name = "PATH")]
        levels: Option<PathBuf>,
    },
    /// Enumerate quantized levels on the circle of length 2*omega1
    Spectrum,
    /// Evaluate the a=1 eigenfunction and its eigenvalues at a point
    Eval {
        /// Coordinates as three comma-separated complex numbers
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda12: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda31: String,
        /// Total momentum k1 + k2 + k3
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        total_momentum: String,
        /// Overall amplitude b
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        amplitude: String,
    },
    /// Evaluate a Weierstrass function
    Special {
        function: Function,
        #[arg(allow_hyphen_values = true)]
        z: String,
        /// Also evaluate the lattice-sum reference
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    Wp,
    WpPrime,
    Zeta,
    Sigma,
}

enum Failure {
    Config(String),
    Verification,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<spincm::Error> for Failure {
    fn from(e: spincm::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.global.resolve()?;
    info!("lattice omega1 = {}, omega2 = {}", cfg.lattice.omega1(), cfg.lattice.omega2());
    match cli.command {
        Command::Verify { levels: None } => cmd_verify(&cfg),
        Command::Verify { levels: Some(path) } => cmd_verify_levels(&cfg, &path),
        Command::Spectrum => cmd_spectrum(&cfg),
        Command::Eval {
            x,
            lambda12,
            lambda31,
            total_momentum,
            amplitude,
        } => cmd_eval(&cfg, &x, &lambda12, &lambda31, &total_momentum, &amplitude),
        Command::Special { function, z, oracle } => cmd_special(&cfg, function, &z, oracle),
    }
}

fn finish_report(cfg: &RunConfig, report: &Report) -> Result<(), Failure> {
    for check in &report.checks {
        eprintln!("{check}");
    }
    let failures: Vec<_> = report.failures().map(|c| format!("{}/{}", c.suite, c.name)).collect();
    match cfg.format {
        Format::Json => emit(
            cfg,
            &serde_json::to_string_pretty(&json!({
                "passed": report.passed(),
                "failures": failures,
                "checks": report.checks,
            }))
            .expect("report serializes"),
        )?,
        Format::Csv => {
            let mut t = Table::new(&[
                "suite",
                "name",
                "residual",
                "threshold",
                "bound",
                "samples",
                "passed",
                "informational",
            ]);
            for c in &report.checks {
                t.row(vec![
                    c.suite.clone(),
                    c.name.clone(),
                    format!("{:e}", c.residual),
                    format!("{:e}", c.threshold),
                    format!("{:?}", c.bound).to_lowercase(),
                    c.samples.to_string(),
                    c.passed.to_string(),
                    c.informational.to_string(),
                ]);
            }
            emit(cfg, &t.finish())?;
        }
    }
    if report.passed() {
        eprintln!("all {} checks passed", report.checks.len());
        Ok(())
    } else {
        eprintln!("{} check(s) failed: {}", failures.len(), failures.join(", "));
        Err(Failure::Verification)
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<(), Failure> {
    let report = verify::run_all(&cfg.verify_config());
    finish_report(cfg, &report)
}

fn cmd_verify_levels(cfg: &RunConfig, path: &std::path::Path) -> Result<(), Failure> {
    let (lattice, rows) = output::read_levels(path, &cfg.lattice)?;
    let levels = rows
        .into_iter()
        .map(|r| Level::from_solution(r.l0, r.l1, r.l2, r.lambda12, r.lambda31, &lattice))
        .collect::<spincm::Result<Vec<_>>>()?;
    let mut report = Report::default();
    report.extend(verify::level_checks(&levels, &lattice, cfg.rng_seed, cfg.tol));
    finish_report(cfg, &report)
}

const SPECTRUM_COLUMNS: [&str; 15] = [
    "l0",
    "l1",
    "l2",
    "re_lambda12",
    "im_lambda12",
    "re_lambda31",
    "im_lambda31",
    "re_energy",
    "im_energy",
    "re_j1",
    "im_j1",
    "re_j2",
    "im_j2",
    "residual",
    "iterations",
];

fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<(), Failure> {
    let opts = cfg.spectrum_options();
    let sp = spectrum::enumerate_spectrum(&opts, &cfg.lattice)?;
    let d = &sp.diagnostics;
    eprintln!(
        "{} levels (|l1|,|l2| <= {}): {} seeds, {} converged, {} on vanishing fixed points, {} duplicates, {} out of range, {} failed, {} rejected",
        sp.levels.len(),
        cfg.lmax,
        d.seeds,
        d.converged,
        d.vanishing,
        d.duplicates,
        d.out_of_range,
        d.failed,
        d.rejected
    );
    for l in sp.levels.iter().take(10) {
        eprintln!("  ({:>2},{:>2},{:>2})  E = {:.10}", l.l0, l.l1, l.l2, l.data.energy);
    }
    match cfg.format {
        Format::Json => emit(
            cfg,
            &serde_json::to_string_pretty(&json!({
                "lattice": {
                    "omega1": cfg.lattice.omega1(),
                    "omega2": cfg.lattice.omega2(),
                },
                "l0_convention": "K = i*pi*l0/omega1 with l0 = l1 - l2 (mod 3), smallest |l0|",
                "options": opts,
                "diagnostics": sp.diagnostics,
                "levels": sp.levels,
            }))
            .expect("spectrum serializes"),
        )?,
        Format::Csv => {
            let mut t = Table::new(&SPECTRUM_COLUMNS);
            for l in &sp.levels {
                let mut row = vec![l.l0.to_string(), l.l1.to_string(), l.l2.to_string()];
                for z in [l.lambda12, l.lambda31] {
                    row.push(format!("{:e}", z.re));
                    row.push(format!("{:e}", z.im));
                }
                for z in [l.data.energy, l.data.j1, l.data.j2] {
                    row.push(sig12(z.re));
                    row.push(sig12(z.im));
                }
                row.push(format!("{:e}", l.residual));
                row.push(l.newton_iters.to_string());
                t.row(row);
            }
            emit(cfg, &t.finish())?;
        }
    }
    Ok(())
}

fn parse_coords(s: &str) -> Result<[Complex64; 3], ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(ConfigError::Value {
            key: "x".into(),
            value: s.into(),
            reason: "expected three comma-separated coordinates".into(),
        });
    }
    Ok([
        parse_complex("x", parts[0])?,
        parse_complex("x", parts[1])?,
        parse_complex("x", parts[2])?,
    ])
}

fn cmd_eval(cfg: &RunConfig, x: &str, l12: &str, l31: &str, total: &str, amp: &str) -> Result<(), Failure> {
    let lat = &cfg.lattice;
    let x = parse_coords(x)?;
    let l12 = parse_complex("lambda12", l12)?;
    let l31 = parse_complex("lambda31", l31)?;
    let total = parse_complex("total-momentum", total)?;
    let amp = parse_complex("amplitude", amp)?;
    let p = eigen::complete_params(l12, l31, total, amp, lat)?;
    let (y, z) = eigen::eval_yz(&p, x, lat)?;
    let (a, b, c) = eigen::abc_from_yz(y, z);
    let psi0 = eigen::psi0(&p, x, lat)?;
    let data = eigen::eigen_data(&p, lat)?;
    let sum_residual = (a + b + c).norm() / a.norm().max(b.norm()).max(c.norm());
    eprintln!("E = {:.12}, j1 = {:.12}, j2 = {:.12}", data.energy, data.j1, data.j2);
    eprintln!("|A + B + C| / max = {sum_residual:.3e}");
    let mut quantities: Vec<(String, Complex64)> = vec![
        ("k1".into(), p.k[0]),
        ("k2".into(), p.k[1]),
        ("k3".into(), p.k[2]),
        ("Y".into(), y),
        ("Z".into(), z),
        ("A".into(), a),
        ("B".into(), b),
        ("C".into(), c),
    ];
    for label in 0..DIM {
        quantities.push((format!("psi0{}", label_name(label)), psi0.components[label]));
    }
    quantities.extend([
        ("energy".into(), data.energy),
        ("j1".into(), data.j1),
        ("j2".into(), data.j2),
    ]);
    match cfg.format {
        Format::Json => {
            let values: serde_json::Map<String, serde_json::Value> =
                quantities.iter().map(|(k, v)| (k.clone(), complex_pair(*v))).collect();
            emit(
                cfg,
                &serde_json::to_string_pretty(&json!({
                    "x": x,
                    "lambda12": l12,
                    "lambda31": l31,
                    "values": values,
                    "abc_sum_residual": sum_residual,
                }))
                .expect("record serializes"),
            )?
        }
        Format::Csv => {
            let mut t = Table::new(&["quantity", "re", "im"]);
            for (k, v) in &quantities {
                t.row(vec![k.clone(), format!("{:e}", v.re), format!("{:e}", v.im)]);
            }
            t.row(vec!["abc_sum_residual".into(), format!("{sum_residual:e}"), "0".into()]);
            emit(cfg, &t.finish())?;
        }
    }
    Ok(())
}

fn cmd_special(cfg: &RunConfig, f: Function, z: &str, with_oracle: bool) -> Result<(), Failure> {
    let lat = &cfg.lattice;
    let z = parse_complex("z", z)?;
    let (name, value) = match f {
        Function::Wp => ("wp", lat.wp(z)?),
        Function::WpPrime => ("wp_prime", lat.wp_prime(z)?),
        Function::Zeta => ("zeta", lat.zeta(z)?),
        Function::Sigma => ("sigma", lat.sigma(z)),
    };
    let reference = with_oracle.then(|| {
        let rows = oracle::DEFAULT_ROWS;
        match f {
            Function::Wp => oracle::wp(lat, z, rows),
            Function::WpPrime => oracle::wp_prime(lat, z, rows),
            Function::Zeta => oracle::zeta(lat, z, rows),
            Function::Sigma => oracle::sigma(lat, z, rows),
        }
    });
    eprintln!("{name}({z}) = {value:.15e}");
    if let Some(r) = reference {
        eprintln!("lattice sum       = {r:.15e} (relative difference {:.3e})", (value - r).norm() / r.norm());
    }
    match cfg.format {
        Format::Json => {
            let mut rec = json!({ "function": name, "z": z, "value": value });
            if let Some(r) = reference {
                rec["oracle"] = json!(r);
                rec["relative_difference"] = json!((value - r).norm() / r.norm());
            }
            emit(cfg, &serde_json::to_string_pretty(&rec).expect("record serializes"))?
        }
        Format::Csv => {
            let mut header = vec!["function", "re_z", "im_z", "re_value", "im_value"];
            let mut row = vec![
                name.to_string(),
                format!("{:e}", z.re),
                format!("{:e}", z.im),
                format!("{:e}", value.re),
                format!("{:e}", value.im),
            ];
            if let Some(r) = reference {
                header.extend(["re_oracle", "im_oracle"]);
                row.extend([format!("{:e}", r.re), format!("{:e}", r.im)]);
            }
            let mut t = Table::new(&header);
            t.row(row);
            emit(cfg, &t.finish())?;
        }
    }
    Ok(())
}
