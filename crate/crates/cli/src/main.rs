use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jkron_core::constructions::{fixture, generate, Family, GeneratorSpec, Params, FIXTURE_IDS};
use jkron_core::exact::{certify_skew_extremal, parse_rational, RationalMatrix};
use jkron_core::interlacing::{check_interlacing, check_strong, check_weak};
use jkron_core::io::{format_matrix_json, format_matrix_text, load_matrix, load_rational_matrix};
use jkron_core::reproduce::{reproduce, ITEMS};
use jkron_core::search::{run_search, Property, SearchConfig, TrialRecord};
use jkron_core::spectra::{spectrum_report, spectrum_split, SymmetryClass, DEFAULT_PARITY_TOL};
use jkron_core::{DenseMatrix, Error};

/// Exit status: 0 when the checked claims hold, 1 when one fails, 2 on usage or input errors.
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "jkron", version, about = "Even/odd spectra and interlacing checks for Jordan-Kronecker products")]
struct Cli {
    /// Relative tolerance, scaled by ||A⊗B + B⊗A||_F.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Weak,
    Interlacing,
    Strong,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Symmetric,
    Skew,
}

#[derive(Subcommand)]
enum Command {
    /// Even and odd spectra of A⊗B + B⊗A.
    Spectrum { a: PathBuf, b: PathBuf },
    /// Check weak, full or strong interlacing.
    Check {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
    },
    /// Exact certificate that the minimal eigenvector is skew-symmetric.
    Certify {
        /// Built-in pair id.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        fixture: Option<String>,
        a: Option<PathBuf>,
        b: Option<PathBuf>,
        /// Skew-symmetric witness matrix file.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Rational shift, e.g. `19/2`.
        #[arg(long)]
        shift: Option<String>,
    },
    /// Seeded randomized search; JSONL records, summary JSON.
    Search(SearchArgs),
    /// Emit the matrices of a generator spec.
    Generate {
        /// Spec as inline JSON or a path to a JSON file.
        #[arg(long, required_unless_present = "ladder")]
        spec: Option<String>,
        /// Shorthand for the ladder family: K M N.
        #[arg(long, num_args = 3, value_names = ["K", "M", "N"], conflicts_with = "spec")]
        ladder: Option<Vec<usize>>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Replay a built-in item claim by claim.
    Reproduce {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(ITEMS))]
        item: String,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Base configuration as JSON; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    rank_min: Option<usize>,
    #[arg(long)]
    rank_max: Option<usize>,
    /// Separate rank range for B (defaults to the A range).
    #[arg(long, requires = "b_rank_max")]
    b_rank_min: Option<usize>,
    #[arg(long, requires = "b_rank_min")]
    b_rank_max: Option<usize>,
    #[arg(long, value_enum)]
    class: Option<ClassArg>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated subset of weak, interlacing, strong.
    #[arg(long, value_delimiter = ',')]
    properties: Option<Vec<String>>,
    /// Positive definite pairs; flags odd minimal eigenvectors.
    #[arg(long)]
    conjecture: bool,
    #[arg(long)]
    jobs: Option<usize>,
    /// Summary JSON path; stderr when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Zero the wall-time field so runs compare byte for byte.
    #[arg(long)]
    no_timing: bool,
}

/// The error type decides the exit status: input errors are usage errors.
struct Failure(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_USAGE, e.into())
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(anyhow!("--tol must be positive").into());
    }
    match &cli.command {
        Command::Spectrum { a, b } => cmd_spectrum(cli, a, b),
        Command::Check { a, b, property } => cmd_check(cli, a, b, *property),
        Command::Certify {
            fixture,
            a,
            b,
            witness,
            shift,
        } => cmd_certify(cli, fixture.as_deref(), a.as_deref(), b.as_deref(), witness.as_deref(), shift.as_deref()),
        Command::Search(args) => cmd_search(cli, args),
        Command::Generate { spec, ladder, out_dir } => cmd_generate(cli, spec.as_deref(), ladder.as_deref(), out_dir),
        Command::Reproduce { item } => cmd_reproduce(cli, item),
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load_pair(a: &Path, b: &Path) -> anyhow::Result<(DenseMatrix, DenseMatrix)> {
    let a = load_matrix(a).with_context(|| format!("reading {}", a.display()))?;
    let b = load_matrix(b).with_context(|| format!("reading {}", b.display()))?;
    Ok((a, b))
}

fn cmd_spectrum(cli: &Cli, a: &Path, b: &Path) -> Outcome {
    let (a, b) = load_pair(a, b)?;
    let report = spectrum_report(&a, &b, cli.tol)?;
    let text = match cli.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = String::from("parity,value\n");
            for v in &report.even_values {
                s.push_str(&format!("even,{v:e}\n"));
            }
            for v in &report.odd_values {
                s.push_str(&format!("odd,{v:e}\n"));
            }
            s
        }
    };
    emit(cli, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct CheckOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    weak: Option<jkron_core::interlacing::WeakVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    full: Option<jkron_core::interlacing::FullVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strong: Option<jkron_core::interlacing::StrongVerdict>,
    tol: f64,
    holds: bool,
}

fn cmd_check(cli: &Cli, a: &Path, b: &Path, property: PropertyArg) -> Outcome {
    let (a, b) = load_pair(a, b)?;
    let split = spectrum_split(&a, &b, DEFAULT_PARITY_TOL)?;
    let tol = cli.tol * split.c_norm();
    let want = |p: PropertyArg| property == p || property == PropertyArg::All;
    let out = CheckOutput {
        weak: want(PropertyArg::Weak).then(|| check_weak(&split, tol)),
        full: want(PropertyArg::Interlacing).then(|| check_interlacing(&split, tol)),
        strong: want(PropertyArg::Strong).then(|| check_strong(&split, tol)),
        tol,
        holds: false,
    };
    let holds = out.weak.as_ref().is_none_or(|v| v.holds)
        && out.full.as_ref().is_none_or(|v| v.holds)
        && out.strong.as_ref().is_none_or(|v| v.holds);
    let out = CheckOutput { holds, ..out };
    let text = match cli.format {
        Format::Json => json(&out)?,
        Format::Csv => {
            let mut s = String::from("property,holds\n");
            for (name, v) in [
                ("weak", out.weak.as_ref().map(|v| v.holds)),
                ("interlacing", out.full.as_ref().map(|v| v.holds)),
                ("strong", out.strong.as_ref().map(|v| v.holds)),
            ] {
                if let Some(v) = v {
                    s.push_str(&format!("{name},{v}\n"));
                }
            }
            s
        }
    };
    emit(cli, &text)?;
    Ok(if holds { 0 } else { EXIT_FAIL })
}

fn cmd_certify(
    cli: &Cli,
    fixture_id: Option<&str>,
    a: Option<&Path>,
    b: Option<&Path>,
    witness: Option<&Path>,
    shift: Option<&str>,
) -> Outcome {
    let (id, a, b, w) = match fixture_id {
        Some(id) => {
            let f = fixture(id).map_err(|e| anyhow!("{e} (known: {})", FIXTURE_IDS.join(", ")))?;
            let w = match witness {
                Some(p) => load_rational_matrix(p)?,
                None => RationalMatrix::from_dense(
                    f.witness.as_ref().ok_or_else(|| anyhow!("fixture {id} has no witness; pass --witness"))?,
                )?,
            };
            (id.to_string(), RationalMatrix::from_dense(&f.a)?, RationalMatrix::from_dense(&f.b)?, w)
        }
        None => {
            let (Some(a), Some(b)) = (a, b) else {
                return Err(anyhow!("pass --fixture ID or two matrix files").into());
            };
            let w = witness.ok_or_else(|| anyhow!("--witness is required with matrix files"))?;
            (
                format!("{}+{}", a.display(), b.display()),
                load_rational_matrix(a)?,
                load_rational_matrix(b)?,
                load_rational_matrix(w)?,
            )
        }
    };
    let shift = match (shift, fixture_id) {
        (Some(s), _) => parse_rational(s)?,
        (None, Some(_)) => parse_rational("19/2")?,
        (None, None) => return Err(anyhow!("--shift is required with matrix files").into()),
    };
    match certify_skew_extremal(&id, &a, &b, &w, &shift) {
        Ok(cert) => {
            let text = match cli.format {
                Format::Json => json(&cert)?,
                Format::Csv => format!(
                    "field,value\npair_id,{}\nskew_rayleigh,{}\nshift,{}\nconclusion,{:?}\n",
                    cert.pair_id, cert.skew_rayleigh, cert.shift, cert.conclusion
                ),
            };
            emit(cli, &text)?;
            Ok(0)
        }
        Err(Error::CertificateFails { stage, detail }) => {
            let text = match cli.format {
                Format::Json => json(&serde_json::json!({
                    "pair_id": id,
                    "conclusion": "fails",
                    "stage": stage,
                    "detail": detail,
                }))?,
                Format::Csv => format!("field,value\npair_id,{id}\nconclusion,fails\nstage,{stage}\n"),
            };
            emit(cli, &text)?;
            Ok(EXIT_FAIL)
        }
        Err(e) => Err(e.into()),
    }
}

fn search_config(cli: &Cli, args: &SearchArgs) -> anyhow::Result<SearchConfig> {
    let mut c = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SearchConfig::default(),
    };
    if let Some(v) = args.n_min {
        c.n_range.0 = v;
    }
    if let Some(v) = args.n_max {
        c.n_range.1 = v;
    }
    if let Some(v) = args.rank_min {
        c.rank_range.0 = v;
    }
    if let Some(v) = args.rank_max {
        c.rank_range.1 = v;
    }
    if let (Some(lo), Some(hi)) = (args.b_rank_min, args.b_rank_max) {
        c.b_rank_range = Some((lo, hi));
    }
    if let Some(v) = args.class {
        c.symmetry_class = match v {
            ClassArg::Symmetric => SymmetryClass::Symmetric,
            ClassArg::Skew => SymmetryClass::Skew,
        };
    }
    if let Some(v) = args.trials {
        c.trials = v;
    }
    if let Some(props) = &args.properties {
        c.properties = props.iter().map(|p| p.parse::<Property>()).collect::<Result<_, _>>()?;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if args.conjecture {
        c.conjecture_mode = true;
    }
    if args.jobs.is_some() {
        c.jobs = args.jobs;
    }
    c.tol = cli.tol;
    c.validate()?;
    Ok(c)
}

fn cmd_search(cli: &Cli, args: &SearchArgs) -> Outcome {
    let config = search_config(cli, args)?;
    let outcome = run_search(&config)?;
    let mut text = String::new();
    if cli.format == Format::Csv {
        text.push_str(TrialRecord::csv_header());
        text.push('\n');
    }
    for r in &outcome.records {
        match cli.format {
            Format::Json => text.push_str(&r.to_json_line(!args.no_timing)),
            Format::Csv => {
                let mut r = r.clone();
                if args.no_timing {
                    r.wall_time_us = 0;
                }
                text.push_str(&r.to_csv_row());
            }
        }
        text.push('\n');
    }
    emit(cli, &text)?;
    let summary = serde_json::to_string_pretty(&outcome.summary)? + "\n";
    match &args.summary {
        Some(path) => fs::write(path, summary).with_context(|| format!("writing {}", path.display()))?,
        None => eprint!("{summary}"),
    }
    Ok(0)
}

fn read_spec(spec: &str) -> anyhow::Result<GeneratorSpec> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    };
    serde_json::from_str(&text).context("parsing generator spec")
}

fn cmd_generate(cli: &Cli, spec: Option<&str>, ladder: Option<&[usize]>, out_dir: &Path) -> Outcome {
    let mut spec = match (spec, ladder) {
        (Some(s), _) => read_spec(s)?,
        (None, Some(&[k, m, n])) => GeneratorSpec::new(Family::Ladder, n, 0).with_params(Params {
            k: Some(k),
            m: Some(m),
            ..Params::default()
        }),
        _ => return Err(anyhow!("pass --spec or --ladder K M N").into()),
    };
    if let Some(s) = cli.seed {
        spec.seed = s;
    }
    let pair = generate(&spec)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let (ext, fmt): (&str, fn(&DenseMatrix) -> String) = match cli.format {
        Format::Json => ("json", format_matrix_json),
        Format::Csv => ("txt", format_matrix_text),
    };
    let mut files = Vec::new();
    for (name, m) in [("A", &pair.a), ("B", &pair.b)] {
        let path = out_dir.join(format!("{name}.{ext}"));
        fs::write(&path, fmt(m)).with_context(|| format!("writing {}", path.display()))?;
        files.push(path.display().to_string());
    }
    let manifest = serde_json::json!({ "spec": spec, "files": files, "mu": pair.mu });
    emit(cli, &json(&manifest)?)?;
    Ok(0)
}

fn cmd_reproduce(cli: &Cli, item: &str) -> Outcome {
    let report = reproduce(item)?;
    let text = match cli.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = String::from("claim,status,detail\n");
            for c in &report.claims {
                let status = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{},{status},\"{}\"\n", c.id, c.detail.replace('"', "'")));
            }
            s
        }
    };
    emit(cli, &text)?;
    if cli.format == Format::Json {
        eprint!("{}", report.to_text());
    }
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}
