mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use klein_core::algnum::pow2_neg;
use klein_core::cf1d::{
    cf_expand, eigen_slopes, is_cyclic_palindrome, klein_polygon, prop1_witness_search, QuadraticSurd, Quadrant,
};
use klein_core::exactint::is_hyperbolic;
use klein_core::sail3d::{default_radius, export_patch, sail_patch, Cone, GeoCF, PatchFormat};
use klein_core::sym3d::{class_field, dirichlet_group, make_class_example, theorem_check, SearchStatus, DEFAULT_DEPTH};
use klein_core::verify;
use klein_core::{Error, IntMatrix};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "klein", version, about = "Klein sails, Dirichlet groups and palindromic symmetries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SailFormat {
    Off,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Continued fraction, palindrome axes and trace/norm witnesses of a quadratic surd
    Cf1d {
        /// Surd `(P+sqrt(D))/Q`
        surd: Option<String>,
        /// Surd as JSON `{"P":…,"Q":…,"D":…}`
        #[arg(long, conflicts_with = "surd")]
        json: Option<String>,
        /// Height bound of the witness search
        #[arg(long, default_value_t = 30)]
        height: u32,
    },
    /// Klein polygons of a hyperbolic 2×2 operator or of a surd and its conjugate, as SVG
    Sail2d {
        /// 2×2 matrix, JSON rows or `a b; c d`
        #[arg(long, required_unless_present = "surd")]
        matrix: Option<String>,
        #[arg(long, conflicts_with = "matrix")]
        surd: Option<String>,
        /// Single cone such as `+,-`; all four by default
        #[arg(long)]
        quadrant: Option<String>,
        /// Vertices per polygon
        #[arg(long, default_value_t = 15)]
        count: usize,
        /// Half-width of the drawing window
        #[arg(long, default_value_t = 12)]
        extent: i64,
        #[arg(long, short)]
        out: Option<String>,
    },
    /// Sail patch of one cone of a hyperbolic 3×3 operator
    Sail3d {
        #[arg(long)]
        matrix: String,
        /// Cone sign pattern such as `+,+,+`
        #[arg(long, default_value = "+,+,+")]
        cone: String,
        /// Eigencoordinate radius, a rational; found by doubling when absent
        #[arg(long)]
        radius: Option<String>,
        #[arg(long, value_enum, default_value_t = SailFormat::Off)]
        format: SailFormat,
        #[arg(long, short)]
        out: Option<String>,
    },
    /// Generators of the Dirichlet group of a hyperbolic 3×3 operator
    Dirichlet {
        #[arg(long)]
        matrix: String,
        /// Candidate budget
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Search for a palindromic symmetry; exit 0 found, 1 none, 5 inconclusive
    Symmetry {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Build an operator of a class, conjugate it at random and recover the class
    Theorem {
        /// Class 1..=4
        #[arg(long, required_unless_present = "matrix")]
        class: Option<usize>,
        /// Field polynomial, coefficients from the constant term up
        #[arg(long, requires = "class")]
        poly: Option<String>,
        /// Operator to analyse instead of a constructed one
        #[arg(long, conflicts_with = "class")]
        matrix: Option<String>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Run acceptance suites and print one JSON record per criterion
    Verify {
        /// Suite name or `all`
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::PerfectSquareD(_)
            | Error::DimensionMismatch(_)
            | Error::UnsupportedDimension(_)
            | Error::InvalidField(_)
            | Error::DegenerateCone
            | Error::OnBoundary => 2,
            Error::NotHyperbolic | Error::ReduciblePolynomial | Error::SingularMatrix => 3,
            Error::EmptyPatch => 4,
            _ => 6,
        };
        Fail(code, e.to_string())
    }
}

fn parse_err(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

/// Interval width `2^-k` from `KLEIN_PRECISION`, default 40.
fn precision() -> Result<u32, Fail> {
    match std::env::var("KLEIN_PRECISION") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&k| (1..=4096).contains(&k))
            .ok_or_else(|| parse_err(format!("KLEIN_PRECISION must be an integer in 1..=4096, got {v:?}"))),
        Err(_) => Ok(40),
    }
}

fn emit(out: Option<&str>, body: &str) -> Result<(), Fail> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Fail(6, format!("{path}: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn hyperbolic(a: &IntMatrix, dim: usize) -> Result<(), Fail> {
    if a.dim() != dim {
        return Err(parse_err(format!("expected a {dim}×{dim} matrix, got {0}×{0}", a.dim())));
    }
    if !is_hyperbolic(a)? {
        return Err(Error::NotHyperbolic.into());
    }
    Ok(())
}

/// Eigenvector intervals of every embedding at the configured width.
fn eigen_intervals(g: &GeoCF, bits: u32) -> Value {
    let w = pow2_neg(bits);
    Value::Array((0..g.dim()).map(|i| serde_json::to_value(g.eigenvector_intervals(i, &w)).expect("intervals")).collect())
}

fn cf1d(surd: Option<String>, json_arg: Option<String>, height: u32) -> Result<u8, Fail> {
    let s = match (surd, json_arg) {
        (Some(s), None) => input::surd(&s)?,
        (None, Some(j)) => input::surd(&j)?,
        _ => return Err(parse_err("give a surd or --json")),
    };
    let cf = cf_expand(&s)?;
    let axes = is_cyclic_palindrome(&cf.period);
    let prop1 = prop1_witness_search(&s, height)?;
    let report = json!({
        "surd": s,
        "value": s.to_string(),
        "expansion": cf,
        "palindrome": axes,
        "prop1": prop1,
    });
    emit(None, &pretty(&report))?;
    Ok(0)
}

fn slopes(a: &IntMatrix) -> Result<(QuadraticSurd, QuadraticSurd), Fail> {
    hyperbolic(a, 2)?;
    Ok(eigen_slopes(a)?)
}

fn sail2d(
    matrix: Option<String>,
    surd: Option<String>,
    quadrant: Option<String>,
    count: usize,
    extent: i64,
    out: Option<String>,
) -> Result<u8, Fail> {
    let (alpha, beta) = match (matrix, surd) {
        (Some(m), _) => slopes(&input::matrix(&m)?)?,
        (None, Some(s)) => {
            let s = input::surd(&s)?;
            let c = s.conjugate();
            (s, c)
        }
        (None, None) => return Err(parse_err("give --matrix or --surd")),
    };
    if extent < 1 || count < 2 {
        return Err(parse_err("--extent must be positive and --count at least 2"));
    }
    let quads: Vec<Quadrant> = match quadrant {
        Some(q) => vec![q.parse()?],
        None => Quadrant::ALL.to_vec(),
    };
    let polys = quads.iter().map(|&q| klein_polygon(&alpha, &beta, q, count)).collect::<Result<Vec<_>, _>>()?;
    emit(out.as_deref(), &klein_core::render::klein_svg(&alpha, &beta, &polys, extent))?;
    Ok(0)
}

fn sail3d(matrix: String, cone: String, radius: Option<String>, format: SailFormat, out: Option<String>) -> Result<u8, Fail> {
    let a = input::matrix(&matrix)?;
    hyperbolic(&a, 3)?;
    let cone: Cone = input::cone(&cone)?;
    if cone.signs().len() != 3 {
        return Err(parse_err("cone needs three signs"));
    }
    let bits = precision()?;
    let g = GeoCF::from_operator(&a)?;
    let radius = match radius {
        Some(r) => klein_core::json::parse_rat(&r).ok_or_else(|| parse_err(format!("bad radius {r:?}")))?,
        None => {
            // the square of a unit has positive eigenvalues and fixes every cone
            let unit = dirichlet_group(&a, DEFAULT_DEPTH).ok().map(|d| d.generators[0].pow(2));
            default_radius(&g, &cone, unit.as_ref(), 12)?
        }
    };
    let patch = sail_patch(&g, &cone, &radius)?;
    let body = match format {
        SailFormat::Off => export_patch(&patch, PatchFormat::Off),
        SailFormat::Json => {
            let mut v = serde_json::to_value(&patch).expect("patch serializes");
            v["eigenvectors"] = eigen_intervals(&g, bits);
            pretty(&v)
        }
    };
    emit(out.as_deref(), &body)?;
    Ok(0)
}

fn dirichlet(matrix: String, depth: usize) -> Result<u8, Fail> {
    let a = input::matrix(&matrix)?;
    hyperbolic(&a, 3)?;
    let bits = precision()?;
    let g = GeoCF::from_operator(&a)?;
    let group = dirichlet_group(&a, depth)?;
    let mut v = serde_json::to_value(&group).expect("group serializes");
    v["eigenvectors"] = eigen_intervals(&g, bits);
    emit(None, &pretty(&v))?;
    Ok(0)
}

fn status_code(s: SearchStatus) -> u8 {
    match s {
        SearchStatus::Found => 0,
        SearchStatus::NotFound => 1,
        SearchStatus::Inconclusive => 5,
    }
}

fn symmetry(matrix: String, depth: usize) -> Result<u8, Fail> {
    let a = input::matrix(&matrix)?;
    hyperbolic(&a, 3)?;
    let c = theorem_check(&a, depth)?;
    emit(None, &pretty(&c))?;
    Ok(status_code(c.status))
}

fn theorem(class: Option<usize>, poly: Option<String>, matrix: Option<String>, seed: u64, depth: usize) -> Result<u8, Fail> {
    let (operator, conjugator, a) = match (class, matrix) {
        (_, Some(m)) => {
            let a = input::matrix(&m)?;
            hyperbolic(&a, 3)?;
            (None, None, a)
        }
        (Some(i), None) => {
            if !(1..=4).contains(&i) {
                return Err(parse_err(format!("class {i} not in 1..=4")));
            }
            let f = match poly {
                Some(p) => input::poly(&p)?,
                None => class_field(i),
            };
            let base = make_class_example(i, &f, None)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = verify::random_unimodular(&mut rng, 3);
            let a = x.conjugate(&base).expect("unimodular");
            (Some(base), Some(x), a)
        }
        (None, None) => return Err(parse_err("give --class or --matrix")),
    };
    let c = theorem_check(&a, depth)?;
    let mut v = json!({ "operator": a });
    if let (Some(b), Some(x)) = (operator, conjugator) {
        v["class_operator"] = serde_json::to_value(b).expect("matrix");
        v["random_conjugator"] = serde_json::to_value(x).expect("matrix");
    }
    v["certificate"] = serde_json::to_value(&c).expect("certificate");
    emit(None, &pretty(&v))?;
    Ok(status_code(c.status))
}

fn run_verify(suite: String, seed: u64) -> Result<u8, Fail> {
    let ids: Vec<u8> = if suite == "all" {
        Vec::new()
    } else {
        vec![verify::suite_id(&suite)
            .ok_or_else(|| parse_err(format!("unknown suite {suite:?}; one of all, {}", verify::SUITES.join(", "))))?]
    };
    let results = verify::run(&ids, seed);
    let ok = results.iter().all(|r| r.passed);
    emit(None, &pretty(&results))?;
    Ok(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(Fail(code, msg)) = precision() {
        eprintln!("error: {msg}");
        return ExitCode::from(code);
    }
    let r = match cli.command {
        Command::Cf1d { surd, json, height } => cf1d(surd, json, height),
        Command::Sail2d { matrix, surd, quadrant, count, extent, out } => sail2d(matrix, surd, quadrant, count, extent, out),
        Command::Sail3d { matrix, cone, radius, format, out } => sail3d(matrix, cone, radius, format, out),
        Command::Dirichlet { matrix, depth } => dirichlet(matrix, depth),
        Command::Symmetry { matrix, depth } => symmetry(matrix, depth),
        Command::Theorem { class, poly, matrix, seed, depth } => theorem(class, poly, matrix, seed, depth),
        Command::Verify { suite, seed } => run_verify(suite, seed),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
