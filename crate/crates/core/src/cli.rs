use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::barycentric::build_map;
use crate::certify::{certify, CertifyOptions, Verdict, DEFAULT_PRECISION_BITS};
use crate::circuit::{circuit_nonnegative, recognize_circuit, Nonnegativity};
use crate::geometry::analyze;
use crate::oracle::{default_samples, radial_scan};
use crate::poly::{parse_polynomial, Polynomial, VarSpec};
use crate::rational::to_fraction_string;
use crate::scan::{region_scan, ParamRange};

pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "coercheck", version, about = "Coercivity certificates for sparse polynomials")]
pub struct Cli {
    /// Working precision of circuit-number enclosures, in fractional bits.
    #[arg(
        long,
        global = true,
        env = "COERCHECK_PRECISION",
        default_value_t = DEFAULT_PRECISION_BITS,
        value_parser = clap::value_parser!(u32).range(16..=8192)
    )]
    pub precision: u32,
    /// Number of seeded barycentric maps tried after the canonical one.
    #[arg(long, global = true, default_value_t = 4)]
    pub seeds: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the random directions of radial scans.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Polynomial text, e.g. "x^4 + x^3*y + y^4".
    pub polynomial: Option<String>,
    /// Read the polynomial from a file instead.
    #[arg(long, conflicts_with = "polynomial")]
    pub file: Option<PathBuf>,
    /// Comma-separated variable names; inferred from the text by default.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polytope at infinity, the exponent partition and a barycentric map.
    Analyze(Input),
    /// Run the decision cascade.
    Certify(Input),
    /// Global nonnegativity of a circuit polynomial.
    Nonneg(Input),
    /// Certify a two-parameter family over a grid; CSV output.
    RegionScan {
        /// Template with uppercase placeholders, e.g. "x^4 + A*x^3*y + B*x*y^3 + y^4".
        template: String,
        /// First parameter as NAME:MIN:MAX:STEPS.
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        /// Second parameter as NAME:MIN:MAX:STEPS.
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
        /// Put the outcome of both sufficiency tests in the theorem column.
        #[arg(long)]
        compare: bool,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sampled minima of f over spheres.
    RadialScan {
        #[command(flatten)]
        input: Input,
        /// Comma-separated, strictly increasing radii.
        #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000,10000")]
        radii: Vec<f64>,
        /// Directions per sphere (default depends on the dimension).
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn read_input(input: &Input) -> Result<Polynomial, String> {
    let text = match (&input.polynomial, &input.file) {
        (Some(t), None) => t.clone(),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map_err(|e| format!("cannot read {}: {e}", p.display()))?,
        _ => return Err("give the polynomial as an argument or with --file".into()),
    };
    let spec = match &input.vars {
        Some(v) => VarSpec::Explicit(v.clone()),
        None => VarSpec::Infer,
    };
    parse_polynomial(text.trim(), &spec).map_err(|e| format!("parse error: {e}"))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Coercive => 0,
        Verdict::NotCoercive => 1,
        Verdict::Unknown => 3,
        Verdict::Borderline => 4,
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, String> {
    let options = CertifyOptions::with_seed_count(cli.precision, cli.seeds);
    let io = |e: std::io::Error| e.to_string();
    match &cli.command {
        Command::Analyze(input) => {
            let f = read_input(input)?;
            let an = analyze(&f);
            let map = build_map(&f, &an, None).map_err(|e| e.to_string())?;
            let v = json!({
                "polynomial": f.render(),
                "variables": f.var_names(),
                "v0": an.v0,
                "v": an.v,
                "d": an.d,
                "r": an.r,
                "c1": an.c1,
                "c2": an.c2,
                "c3": an.c3,
                "v_ess": an.v_ess.iter().map(|(i, a)| json!({
                    "variable": f.var_names()[*i],
                    "exponent": a,
                })).collect::<Vec<_>>(),
                "gem_regular": an.gem_regular,
                "map": map.to_json(),
            });
            writeln!(out, "{}", pretty(&v)).map_err(io)?;
            Ok(0)
        }
        Command::Certify(input) => {
            let f = read_input(input)?;
            let cert = certify(&f, &options);
            if cli.json {
                writeln!(out, "{}", pretty(&cert.to_json())).map_err(io)?;
            } else {
                writeln!(out, "{}", cert.summary()).map_err(io)?;
            }
            Ok(verdict_exit_code(cert.verdict))
        }
        Command::Nonneg(input) => {
            let f = read_input(input)?;
            let cs = recognize_circuit(&f).map_err(|e| format!("not a circuit polynomial: {e}"))?;
            let d = circuit_nonnegative(&cs, cli.precision, options.margin_policy);
            let name = match d.verdict {
                Nonnegativity::Nonnegative => "Nonnegative",
                Nonnegativity::NotNonnegative => "NotNonnegative",
                Nonnegativity::Borderline => "Borderline",
            };
            if cli.json {
                let digits = (cli.precision as f64 * std::f64::consts::LOG10_2) as u32;
                let theta = d.log_theta.value_enclosure();
                let v = json!({
                    "verdict": name,
                    "comparison": d.route,
                    "alpha_star": cs.inner.0,
                    "f_alpha_star": to_fraction_string(&cs.inner.1),
                    "theta": {"lo": theta.lo_decimal(digits.clamp(12, 60)), "hi": theta.hi_decimal(digits.clamp(12, 60))},
                });
                writeln!(out, "{}", pretty(&v)).map_err(io)?;
            } else {
                writeln!(out, "{name}").map_err(io)?;
            }
            Ok(match d.verdict {
                Nonnegativity::Nonnegative => 0,
                Nonnegativity::NotNonnegative => 1,
                Nonnegativity::Borderline => 4,
            })
        }
        Command::RegionScan {
            template,
            p1,
            p2,
            compare,
            output,
        } => {
            let p1 = ParamRange::parse(p1).map_err(|e| e.to_string())?;
            let p2 = ParamRange::parse(p2).map_err(|e| e.to_string())?;
            let scan = region_scan(template, &p1, &p2, &options, *compare).map_err(|e| e.to_string())?;
            let csv = scan.to_csv();
            match output {
                Some(path) => std::fs::write(path, csv)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => out.write_all(csv.as_bytes()).map_err(io)?,
            }
            Ok(0)
        }
        Command::RadialScan {
            input,
            radii,
            samples,
        } => {
            let f = read_input(input)?;
            if radii.is_empty()
                || radii.iter().any(|r| !(*r > 0.0))
                || radii.windows(2).any(|w| w[0] >= w[1])
            {
                return Err("radii must be positive and strictly increasing".into());
            }
            let samples = samples.unwrap_or_else(|| default_samples(f.n_vars()));
            let p = radial_scan(&f, radii, samples, cli.seed);
            if cli.json {
                let v = json!({"radii": p.radii, "minima": p.minima, "diverges": p.diverges()});
                writeln!(out, "{}", pretty(&v)).map_err(io)?;
            } else {
                writeln!(out, "radius,minimum").map_err(io)?;
                for (r, m) in p.radii.iter().zip(&p.minima) {
                    writeln!(out, "{r},{m:e}").map_err(io)?;
                }
            }
            Ok(0)
        }
    }
}
