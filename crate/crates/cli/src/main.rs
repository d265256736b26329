mod render;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use isoslope::bc::{admissibility_ledger, bc_of_isocrystal, invariants_of_e, invariants_of_m, slope_filtration};
use isoslope::document::{Problem, ProblemDocument};
use isoslope::{EnumerationMode, Error, FilteredIsocrystal};

use render::Plot;
use report::*;

#[derive(Parser)]
#[command(name = "isoslope", version, about = "Slopes, weak admissibility and HN filtrations of filtered isocrystals")]
struct Cli {
    /// Also write the polygon picture as SVG to this path.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, Newton number, slopes and Dieudonné-Manin type.
    Slopes { file: PathBuf },
    /// Weak admissibility verdict.
    Weakadm {
        file: PathBuf,
        #[command(flatten)]
        enumeration: EnumerationArgs,
    },
    /// Harder-Narasimhan filtration for deg = t_H - t_N.
    Hn { file: PathBuf },
    /// Banach-Colmez invariants, admissibility ledger and slope filtration.
    Bc {
        file: PathBuf,
        #[command(flatten)]
        enumeration: EnumerationArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Mc,
}

#[derive(clap::Args)]
struct EnumerationArgs {
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Random tuples for --mode mc.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

const DEFAULT_SAMPLES: usize = 64;

struct Failure {
    code: u8,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match &error {
            Error::Precision(_) => 3,
            Error::EnumerationUnavailable(_) => 4,
            Error::NotEffective | Error::NegativeFiltration(_) => 5,
            _ => 2,
        };
        Failure { code, error }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPrime(_) => "not_prime",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::Precision(_) => "precision",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::NotCoprime { .. } => "not_coprime",
        Error::NotEffective => "not_effective",
        Error::NegativeFiltration(_) => "negative_filtration",
        Error::NotStable => "not_stable",
        Error::EnumerationUnavailable(_) => "enumeration_unavailable",
        Error::ZeroObject => "zero_object",
        Error::Parse(_) => "parse",
    }
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn load(path: &Path) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let doc = ProblemDocument::from_json(&text)?;
    let precision = match std::env::var("ISOSLOPE_PRECISION") {
        Ok(v) => Some(
            v.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("ISOSLOPE_PRECISION={v:?} is not a precision")))?,
        ),
        Err(_) => None,
    };
    Ok(doc.build(precision)?)
}

fn mode_of(args: &EnumerationArgs, problem: &Problem) -> Result<EnumerationMode, Failure> {
    let doc_mode = match problem.options.mode.as_deref() {
        None => None,
        Some("exact") => Some(ModeArg::Exact),
        Some("mc") => Some(ModeArg::Mc),
        Some(other) => return Err(Error::Parse(format!("unknown mode {other:?}")).into()),
    };
    let samples = args.samples.or(problem.options.samples).unwrap_or(DEFAULT_SAMPLES);
    Ok(match args.mode.or(doc_mode).unwrap_or(ModeArg::Exact) {
        ModeArg::Exact => EnumerationMode::Exact,
        ModeArg::Mc => EnumerationMode::MonteCarlo {
            samples,
            seed: args.seed,
        },
    })
}

fn filtered_or_trivial(problem: &Problem) -> FilteredIsocrystal {
    problem
        .filtration
        .clone()
        .unwrap_or_else(|| FilteredIsocrystal::trivial(problem.isocrystal.clone()))
}

fn draw(svg: Option<&Path>, plots: &[Plot<'_>]) -> Result<(), Failure> {
    eprint!("{}", render::ascii(plots));
    if let Some(path) = svg {
        std::fs::write(path, render::svg(plots))
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let svg = cli.svg.as_deref();
    match &cli.command {
        Command::Slopes { file } => {
            let pr = load(file)?;
            let d = &pr.isocrystal;
            let np = d.newton_polygon()?;
            let rep = SlopesReport {
                command: "slopes".into(),
                p: pr.field.p(),
                f: pr.field.degree(),
                precision: pr.field.precision(),
                rank: d.rank(),
                newton_number: d.newton_number()?,
                slopes: d.slopes()?.into_iter().map(fraction).collect(),
                dm_type: d.dm_type()?.entries,
                effective: d.is_effective()?,
                newton_polygon: (&np).into(),
            };
            draw(svg, &[Plot { name: "Newton", marker: 'N', polygon: &np }])?;
            emit(&rep);
            Ok(0)
        }
        Command::Weakadm { file, enumeration } => {
            let pr = load(file)?;
            let Some(x) = pr.filtration.as_ref() else {
                return Err(Error::Parse("weakadm needs a filtration".into()).into());
            };
            let mode = mode_of(enumeration, &pr)?;
            let v = x.is_weakly_admissible(mode)?;
            let witness = match &v.witness {
                Some(w) => Some(WitnessReport {
                    subspace: w.into(),
                    hodge_number: x.hodge_number_of(w)?,
                    newton_number: x.isocrystal().restrict(w)?.newton_number()?,
                }),
                None => None,
            };
            let (hp, np) = (x.hodge_polygon(), x.isocrystal().newton_polygon()?);
            let rep = WeakadmReport {
                command: "weakadm".into(),
                weakly_admissible: v.weakly_admissible,
                mode: v.mode,
                hodge_number: x.hodge_number(),
                newton_number: x.newton_number()?,
                checked_count: v.checked_count,
                witness,
                hodge_polygon: (&hp).into(),
                newton_polygon: (&np).into(),
            };
            draw(
                svg,
                &[
                    Plot { name: "Newton", marker: 'N', polygon: &np },
                    Plot { name: "Hodge", marker: 'H', polygon: &hp },
                ],
            )?;
            emit(&rep);
            Ok(if v.weakly_admissible { 0 } else { 1 })
        }
        Command::Hn { file } => {
            let pr = load(file)?;
            let x = filtered_or_trivial(&pr);
            let hn = x.hn_filtration()?;
            let degree = x.hodge_number() - x.newton_number()?;
            let rep = HnReport::new(x.rank(), degree, &hn);
            let (hp, np) = (x.hodge_polygon(), x.isocrystal().newton_polygon()?);
            draw(
                svg,
                &[
                    Plot { name: "Newton", marker: 'N', polygon: &np },
                    Plot { name: "Hodge", marker: 'H', polygon: &hp },
                ],
            )?;
            emit(&rep);
            Ok(0)
        }
        Command::Bc { file, enumeration } => {
            let pr = load(file)?;
            let x = filtered_or_trivial(&pr);
            let mode = mode_of(enumeration, &pr)?;
            let e = invariants_of_e(x.isocrystal())?;
            let m = invariants_of_m(&x)?;
            let sym = bc_of_isocrystal(x.isocrystal())?;
            let ledger = admissibility_ledger(&x, mode)?;
            let admissible = matches!(ledger.verdict, isoslope::LedgerVerdict::Admissible { .. });
            let np = x.isocrystal().newton_polygon()?;
            let rep = BcReport {
                command: "bc".into(),
                e,
                m,
                decomposition: sym.to_string(),
                atoms: sym.to_records(),
                ledger: (&ledger).into(),
                slope_filtration: slope_filtration(&sym).iter().map(Into::into).collect(),
            };
            draw(svg, &[Plot { name: "Newton", marker: 'N', polygon: &np }])?;
            emit(&rep);
            Ok(if admissible { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("isoslope: {error}");
            emit(&ErrorReport {
                error: error_kind(&error).into(),
                message: error.to_string(),
                exit_code: code as i32,
            });
            ExitCode::from(code)
        }
    }
}
