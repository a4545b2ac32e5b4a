//! Command-line front end: identity suites, regulator sweeps, index reports,
//! Darboux transformations and Green-function values.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use spectral_ep::boundary::BoundaryModel;
use spectral_ep::exact::ExpLaurent;
use spectral_ep::greens::{green, green_jump, indexes};
use spectral_ep::interior::InteriorModel;
use spectral_ep::report::{VerificationReport, SCHEMA_VERSION};
use spectral_ep::resolution::schemes::{sweep, Scheme, SchemeValue, SweepPlan};
use spectral_ep::resolution::testfn::{ChainRef, TestFunction};
use spectral_ep::suites::{run_suite, Suite};
use spectral_ep::susy::{darboux_potential, multiplicity_delta, potential_form, transform, wronskian, TransformationChain};
use spectral_ep::{Error, Model};

#[derive(Parser)]
#[command(name = "spectral-ep", version, about = "Spectral identities at exceptional points of non-Hermitian Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites and write a JSON report.
    Verify(VerifyArgs),
    /// Apply a resolution scheme over a grid of ε and write CSV.
    Sweep(SweepArgs),
    /// Report the multiplicity indexes (n1, n2, n3) as JSON.
    Indexes(IndexArgs),
    /// Apply a Darboux chain to the boundary family and report the result.
    Susy(SusyArgs),
    /// Evaluate the Green function at one point.
    Green(GreenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelChoice {
    Boundary,
    Interior,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "boundary")]
    model: ModelChoice,
    /// Index n of the boundary family.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Wavenumber α of the interior model.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Complex offset z as "re,im".
    #[arg(long, default_value = "0,1", value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
}

impl ModelArgs {
    fn build(&self) -> Result<Model, Error> {
        Ok(match self.model {
            ModelChoice::Boundary => Model::Boundary(BoundaryModel::new(self.n, self.z)?),
            ModelChoice::Interior => Model::Interior(InteriorModel::new(self.alpha, self.z)?),
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated suites: algebra, biortho, susy, greens or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Corrupt a coefficient so that the suites must fail.
    #[arg(long)]
    mutate: bool,
    /// Override every numeric tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// gaussian[:center,width], hermite:order,center,width, rational:power, psi:l, psi0 or psi1.
    #[arg(long, default_value = "gaussian", value_parser = parse_testfn)]
    testfn: TestFunction,
    /// Comma-separated ε values.
    #[arg(long, default_value = "0.4,0.2,0.1,0.05", value_delimiter = ',')]
    eps_grid: Vec<f64>,
    /// Cutoff coupling c in A = c/ε ("inf" for no cutoff).
    #[arg(long, default_value_t = 50.0)]
    coupling_c: f64,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    x_prime: f64,
    /// Fail (exit 1) when any row's error exceeds this.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ChainChoice {
    Growing,
    Normalizable,
}

#[derive(Args)]
struct SusyArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, value_enum, default_value = "growing")]
    chain: ChainChoice,
    /// Number of transformation functions, m + 1.
    #[arg(long, default_value_t = 1)]
    len: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GreenArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    x_prime: f64,
    /// Energy E as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    energy: Complex64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [re, im] = parts.as_slice() else {
        return Err(format!("expected \"re,im\", got {s:?}"));
    };
    let f = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Complex64::new(f(re)?, f(im)?))
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_testfn(s: &str) -> Result<TestFunction, String> {
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    let nums = || if tail.is_empty() { Ok(Vec::new()) } else { parse_list(tail) };
    let count = |v: &[f64], k: usize| {
        if v.len() == k {
            Ok(())
        } else {
            Err(format!("{head} takes {k} parameters, got {}", v.len()))
        }
    };
    let unsigned = |x: f64| {
        if x >= 0.0 && x.fract() == 0.0 {
            Ok(x as u32)
        } else {
            Err(format!("expected a nonnegative integer, got {x}"))
        }
    };
    match head.to_ascii_lowercase().as_str() {
        "gaussian" => {
            let v = nums()?;
            if v.is_empty() {
                return Ok(TestFunction::gaussian());
            }
            count(&v, 2)?;
            Ok(TestFunction::Gaussian { center: v[0], width: v[1] })
        }
        "hermite" => {
            let v = nums()?;
            count(&v, 3)?;
            Ok(TestFunction::HermiteGaussian { order: unsigned(v[0])?, center: v[1], width: v[2] })
        }
        "rational" => {
            let v = nums()?;
            count(&v, 1)?;
            Ok(TestFunction::RationalDecay { power: unsigned(v[0])? })
        }
        "psi" => {
            let v = nums()?;
            count(&v, 1)?;
            Ok(TestFunction::Chain(ChainRef::Assoc(unsigned(v[0])?)))
        }
        "psi0" => Ok(TestFunction::Chain(ChainRef::Psi0)),
        "psi1" => Ok(TestFunction::Chain(ChainRef::Psi1)),
        _ => Err(format!("unknown test function {s:?}")),
    }
}

/// Exit status plus a message for stderr.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidModel(_)
            | Error::Precondition(_)
            | Error::UnknownScheme(_)
            | Error::Unsupported(_)
            | Error::InvalidChain(_) => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Verification(format!("i/o error: {e}"))
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Verification(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema_version: u32,
    model: Model,
    suites: Vec<&'static str>,
    mutated: bool,
    pass: bool,
    reports: &'a [VerificationReport],
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool, Failure> {
    let model = a.model.build()?;
    let suites: Vec<Suite> = if a.suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        a.suite.split(',').map(|s| s.trim().parse()).collect::<Result<_, Error>>()?
    };
    let mut reports = Vec::new();
    for s in &suites {
        reports.extend(run_suite(*s, &model, a.mutate)?);
    }
    if let Some(tol) = a.tol {
        for r in reports.iter_mut().filter(|r| r.mode == spectral_ep::report::Mode::Numeric) {
            r.tolerance = tol;
            r.pass = r.residual <= tol;
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    write_json(
        &a.out,
        &VerifyOutput {
            schema_version: SCHEMA_VERSION,
            model,
            suites: suites.iter().map(|s| s.name()).collect(),
            mutated: a.mutate,
            pass,
            reports: &reports,
        },
    )?;
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {}: residual {:e} > tolerance {:e}", r.id, r.residual, r.tolerance);
    }
    Ok(pass)
}

fn write_sweep_csv(out: &Option<PathBuf>, rows: &[SchemeValue]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    let csv_err = |e: csv::Error| Failure::Verification(e.to_string());
    w.write_record([
        "scheme", "epsilon", "A", "x_prime", "value_re", "value_im", "target_re", "target_im", "abs_error",
    ])
    .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.scheme.to_string(),
            r.eps.to_string(),
            r.cutoff.to_string(),
            r.x_prime.to_string(),
            r.value.re.to_string(),
            r.value.im.to_string(),
            r.target.re.to_string(),
            r.target.im.to_string(),
            r.abs_error.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<bool, Failure> {
    let model = a.model.build()?;
    if a.eps_grid.is_empty() {
        return Err(Failure::Usage("empty ε grid".into()));
    }
    if !(a.coupling_c > 0.0) {
        return Err(Failure::Usage(format!("coupling must be positive, got {}", a.coupling_c)));
    }
    let plan = SweepPlan {
        scheme: a.scheme,
        eps: a.eps_grid.clone(),
        coupling: a.coupling_c.is_finite().then_some(a.coupling_c),
        x_prime: a.x_prime,
        test_function: a.testfn,
    };
    let rows = sweep(&model, &plan)?;
    write_sweep_csv(&a.out, &rows)?;
    Ok(a.tol.is_none_or(|tol| rows.iter().all(|r| r.abs_error <= tol)))
}

#[derive(Serialize)]
struct IndexOutput {
    schema_version: u32,
    n1: u32,
    n2: u32,
    n3: u32,
    k_plane_pole_order: Option<u32>,
    e_plane_pole_order: Option<u32>,
}

fn cmd_indexes(a: &IndexArgs) -> Result<bool, Failure> {
    let r = indexes(&a.model.build()?)?;
    write_json(
        &a.out,
        &IndexOutput {
            schema_version: SCHEMA_VERSION,
            n1: r.indexes.n1,
            n2: r.indexes.n2,
            n3: r.indexes.n3,
            k_plane_pole_order: r.k_plane_pole_order,
            e_plane_pole_order: r.e_plane_pole_order,
        },
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct SusyOutput {
    schema_version: u32,
    base_n: u32,
    chain: &'static str,
    length: u32,
    wronskian: String,
    potential: String,
    target_n: u32,
    predicted_target_n: u32,
    indexes_before: [u32; 3],
    indexes_after: [u32; 3],
    delta: [i64; 3],
    n1_unchanged: bool,
}

fn cmd_susy(a: &SusyArgs) -> Result<bool, Failure> {
    let base = BoundaryModel::new(a.n, Complex64::new(0.0, 1.0))?;
    let (chain, name) = match a.chain {
        ChainChoice::Growing => (TransformationChain::growing(&base, a.len)?, "growing"),
        ChainChoice::Normalizable => (TransformationChain::normalizable(&base, a.len)?, "normalizable"),
    };
    let w: ExpLaurent = wronskian(&chain)?;
    let v = darboux_potential(&potential_form(a.n), &chain)?;
    let target = transform(&chain)?;
    let d = multiplicity_delta(&chain);
    let triple = |t: spectral_ep::greens::IndexTriple| [t.n1, t.n2, t.n3];
    write_json(
        &a.out,
        &SusyOutput {
            schema_version: SCHEMA_VERSION,
            base_n: a.n,
            chain: name,
            length: a.len,
            wronskian: w.to_string(),
            potential: v.to_string(),
            target_n: target.n(),
            predicted_target_n: d.target_n,
            indexes_before: triple(d.before),
            indexes_after: triple(d.after),
            delta: d.delta,
            n1_unchanged: d.n1_unchanged,
        },
    )?;
    Ok(target.n() == d.target_n)
}

#[derive(Serialize)]
struct GreenOutput {
    schema_version: u32,
    x: f64,
    x_prime: f64,
    energy: Complex64,
    value: Complex64,
    derivative_jump: Complex64,
}

fn cmd_green(a: &GreenArgs) -> Result<bool, Failure> {
    let model = a.model.build()?;
    let value = green(&model, a.x, a.x_prime, a.energy)?;
    let derivative_jump = green_jump(&model, a.x_prime, a.energy)?;
    write_json(
        &a.out,
        &GreenOutput {
            schema_version: SCHEMA_VERSION,
            x: a.x,
            x_prime: a.x_prime,
            energy: a.energy,
            value,
            derivative_jump,
        },
    )?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Indexes(a) => cmd_indexes(a),
        Command::Susy(a) => cmd_susy(a),
        Command::Green(a) => cmd_green(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_test_functions() {
        assert_eq!(parse_testfn("gaussian").unwrap(), TestFunction::gaussian());
        assert_eq!(parse_testfn("gaussian:1,2").unwrap(), TestFunction::Gaussian { center: 1.0, width: 2.0 });
        assert_eq!(parse_testfn("psi:0").unwrap(), TestFunction::Chain(ChainRef::Assoc(0)));
        assert_eq!(parse_testfn("PSI1").unwrap(), TestFunction::Chain(ChainRef::Psi1));
        assert!(parse_testfn("hermite:1,2").is_err());
        assert!(parse_testfn("rational:1.5").is_err());
        assert!(parse_testfn("cosine").is_err());
    }

    #[test]
    fn parses_complex_pairs() {
        assert_eq!(parse_complex("0,1").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-0.5, 2").unwrap(), Complex64::new(-0.5, 2.0));
        assert!(parse_complex("1").is_err());
    }
}
