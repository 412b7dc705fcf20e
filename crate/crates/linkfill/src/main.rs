use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkfill::json::{CertificateJson, FingerMapJson, LinkSpecJson, LinkingMatrixJson};
use linkfill::parallel::{self, FingerParams};
use linkfill::render;
use linkfill::{exit_code, EXIT_FAILED, EXIT_OK, EXIT_STRUCTURE, EXIT_USAGE};
use linkfill_core::certify::{CertifyOptions, Mode};
use linkfill_core::finger::kernel_invariance_check;
use linkfill_core::link::{single_curve_link, standard_link};
use linkfill_core::modules::{basis_j, normal_form_j, plaquette_name, PlaquetteChain};
use linkfill_core::nilpotent::{lcs_depth, phi_k, FreeWord};
use linkfill_core::{Ambient, Error, Filtration, LaurentPoly, LinkSpec, MultiIndex};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "linkfill",
    version,
    about = "Linking matrices and filling certificates for T^2 x I and T^3"
)]
struct Cli {
    /// Print matrices and extra detail.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the linking matrix i_k.
    Matrix(MatrixArgs),
    /// Certify that the standard link is m-filling.
    Certify(CertifyArgs),
    /// Lower-central depth and phi image of a word in x, y, z.
    Word(WordArgs),
    /// Check that random finger moves leave i_k unchanged.
    Fingers(FingerArgs),
    /// Print a link.
    Link(LinkArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    ClosedForm,
    Geometric,
    Both,
}

#[derive(Args, Debug)]
struct LinkSource {
    /// Use the standard link for the degree (default).
    #[arg(long, conflicts_with = "link")]
    standard: bool,
    /// Read the link from a JSON file.
    #[arg(long, value_name = "FILE")]
    link: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    source: LinkSource,
    #[arg(long, value_enum, default_value = "closed-form")]
    mode: ModeArg,
    /// Write the matrix as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    #[arg(long)]
    m: usize,
    /// `closed-form` skips the oracle; `both` (or `geometric`) cross-checks
    /// it up to the geometric depth.
    #[arg(long, value_enum, default_value = "closed-form")]
    mode: ModeArg,
    /// Highest degree cross-checked against the oracle (default 4 in dim 2, 3 in dim 3).
    #[arg(long)]
    geometric_depth: Option<usize>,
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WordArgs {
    /// Word such as "[[x,y],z]" or "x y x' y'".
    word: String,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    /// Degree for phi_k (default: the word's depth).
    #[arg(long)]
    k: Option<usize>,
    /// Truncation degree of the Magnus expansion.
    #[arg(long, default_value_t = 8)]
    max_depth: usize,
}

#[derive(Args, Debug)]
struct FingerArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3), required_unless_present = "replay")]
    dim: Option<u8>,
    #[arg(long, required_unless_present = "replay")]
    k: Option<usize>,
    /// Number of seeds to run.
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_start: u64,
    /// Exponent range of the random edge images.
    #[arg(long, default_value_t = 2)]
    radius: i64,
    /// Maximum number of terms per image coordinate.
    #[arg(long, default_value_t = 3)]
    value_degree: usize,
    /// Re-run a saved finger map.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["dim", "k"])]
    replay: Option<PathBuf>,
    /// Save the first failing map (or the first map if none fail).
    #[arg(long, value_name = "PATH")]
    save: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LinkArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: Option<u8>,
    #[arg(long, required_unless_present = "single_curve")]
    k: Option<usize>,
    /// The single (1,-1) curve in T^2 x I.
    #[arg(long, conflicts_with_all = ["k", "dim"])]
    single_curve: bool,
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn ambient(dim: u8) -> Ambient {
    if dim == 2 {
        Ambient::Relative
    } else {
        Ambient::Torus
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_link(source: &LinkSource, k: usize, ambient: Ambient) -> Result<LinkSpec, Failure> {
    match &source.link {
        Some(path) => {
            let link = LinkSpec::try_from(&read_json::<LinkSpecJson>(path)?)?;
            if link.ambient() != ambient {
                return Err(usage(format!("link has dim {}, expected {}", link.dim, ambient.dim())));
            }
            Ok(link)
        }
        None => Ok(standard_link(k, ambient)),
    }
}

fn cmd_matrix(a: &MatrixArgs) -> Outcome {
    let amb = ambient(a.dim);
    let link = load_link(&a.source, a.k, amb)?;
    let modes: &[Mode] = match a.mode {
        ModeArg::ClosedForm => &[Mode::ClosedForm],
        ModeArg::Geometric => &[Mode::Geometric],
        ModeArg::Both => &[Mode::ClosedForm, Mode::Geometric],
    };
    let mats = modes
        .iter()
        .map(|&mode| parallel::build_matrix(a.k, &link, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let m = &mats[0];
    println!("i_{} ({} x {})", a.k, m.entries.rows(), m.entries.cols());
    print!("{}", render::matrix_table(m));
    let mut code = EXIT_OK;
    if mats.len() == 2 {
        if mats[0] == mats[1] {
            println!("geometric oracle: agrees");
        } else {
            println!("geometric oracle: DISAGREES");
            print!("{}", render::matrix_table(&mats[1]));
            code = EXIT_FAILED;
        }
    }
    if let Some(path) = &a.json {
        write_json(path, &LinkingMatrixJson::try_from(m)?)?;
    }
    Ok(code)
}

fn cmd_certify(a: &CertifyArgs, verbose: bool) -> Outcome {
    let amb = ambient(a.dim);
    if a.m < 2 {
        return Err(usage("m must be at least 2"));
    }
    let opts = match a.mode {
        ModeArg::ClosedForm if a.geometric_depth.is_some() => {
            return Err(usage("--geometric-depth needs --mode both"));
        }
        ModeArg::ClosedForm => CertifyOptions::closed_form_only(),
        ModeArg::Both | ModeArg::Geometric => match a.geometric_depth {
            Some(d) => CertifyOptions {
                geometric_depth: Some(d),
            },
            None => CertifyOptions::default_for(amb),
        },
    };
    let cert = parallel::certify(a.m, amb, opts)?;
    print!("{}", render::certificate_summary(&cert, verbose));
    if let Some(path) = &a.json {
        write_json(path, &CertificateJson::try_from(&cert)?)?;
    }
    Ok(if cert.verdict { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_word(a: &WordArgs) -> Outcome {
    let amb = ambient(a.dim);
    let w = FreeWord::parse(&a.word, 3)?;
    println!("word: {w}");
    let depth = lcs_depth(&w, a.max_depth);
    match depth {
        Filtration::Exact(d) => println!("lcs depth: {d}"),
        Filtration::AtLeast(d) => println!("lcs depth: >= {d}"),
    }
    if w.abelianization().iter().any(|&e| e != 0) {
        println!("phi: not applicable (not in the commutator subgroup)");
        return Ok(EXIT_OK);
    }
    let k = match (a.k, depth) {
        (Some(k), _) => k,
        (None, Filtration::Exact(d)) => d,
        (None, Filtration::AtLeast(_)) => {
            println!("phi: trivial up to the truncation degree; pass --k to evaluate");
            return Ok(EXIT_OK);
        }
    };
    let coords = phi_k(&w, k, amb)?;
    let labels = basis_j(k - 2, amb).labels;
    println!("phi_{k} = {}", render::combination(&coords, &labels));
    if let Some(single) = single_term(&coords, k - 2, amb)? {
        println!("        = {single}");
    }
    Ok(EXIT_OK)
}

/// A `±(1-x)^a(1-y)^b(1-z)^c P_i` with the given normal form, if one exists
/// outside the basis itself.
fn single_term(coords: &[BigInt], k: usize, amb: Ambient) -> Result<Option<String>, Failure> {
    if coords.iter().filter(|c| c.sign() != num_bigint::Sign::NoSign).count() <= 1 {
        return Ok(None);
    }
    let d = amb.dim();
    for generator in (0..d).rev() {
        for alpha in MultiIndex::all(d, k) {
            let chain = PlaquetteChain::generator(amb, generator, LaurentPoly::difference_power(d, &alpha));
            let nf = normal_form_j(&chain, k)?;
            let label = match k {
                0 => plaquette_name(generator),
                _ => format!("{} {}", alpha.factor_label(), plaquette_name(generator)),
            };
            if nf == coords {
                return Ok(Some(label));
            }
            if nf.iter().zip(coords.iter()).all(|(a, b)| *a == -b) {
                return Ok(Some(format!("-{label}")));
            }
        }
    }
    Ok(None)
}

fn cmd_fingers(a: &FingerArgs) -> Outcome {
    if let Some(path) = &a.replay {
        let saved: FingerMapJson = read_json(path)?;
        let (link, f) = saved.decode()?;
        let report = kernel_invariance_check(saved.k, &link, &f)?;
        println!("{}", render::invariance_line(saved.seed, &report));
        return Ok(if report.clean() { EXIT_OK } else { EXIT_FAILED });
    }
    let (Some(dim), Some(k)) = (a.dim, a.k) else {
        return Err(usage("--dim and --k are required"));
    };
    if a.radius < 0 {
        return Err(usage("--radius must be non-negative"));
    }
    let link = standard_link(k, ambient(dim));
    let params = FingerParams {
        radius: a.radius,
        value_degree: a.value_degree,
    };
    let end = a
        .seed_start
        .checked_add(a.seeds)
        .ok_or_else(|| usage("seed range overflows"))?;
    let runs = parallel::finger_sweep(k, &link, a.seed_start..end, params)?;
    let failing: Vec<_> = runs.iter().filter(|r| !r.report.clean()).collect();
    for r in failing.iter() {
        println!("{}", render::invariance_line(Some(r.seed), &r.report));
    }
    let checked: usize = runs.iter().map(|r| r.report.checked).sum();
    println!(
        "fingers dim={dim} k={k}: {} seed(s), {checked} basis checks, {} violating seed(s)",
        runs.len(),
        failing.len()
    );
    if let Some(path) = &a.save {
        if let Some(r) = failing.first().copied().or(runs.first()) {
            write_json(path, &FingerMapJson::new(k, Some(r.seed), &link, &r.map))?;
        }
    }
    Ok(if failing.is_empty() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_link(a: &LinkArgs) -> Outcome {
    let link = if a.single_curve {
        single_curve_link()
    } else {
        let dim = a.dim.ok_or_else(|| usage("--dim is required"))?;
        standard_link(a.k.unwrap_or(0), ambient(dim))
    };
    print!("{}", render::link_table(&link));
    if let Some(path) = &a.json {
        write_json(path, &LinkSpecJson::from(&link))?;
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Err(msg) = parallel::init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let outcome = match &cli.command {
        Command::Matrix(a) => cmd_matrix(a),
        Command::Certify(a) => cmd_certify(a, cli.verbose),
        Command::Word(a) => cmd_word(a),
        Command::Fingers(a) => cmd_fingers(a),
        Command::Link(a) => cmd_link(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            debug_assert!(f.code == EXIT_USAGE || f.code == EXIT_STRUCTURE);
            ExitCode::from(f.code)
        }
    }
}
