//! `annotate`: influence analysis of a mini-language program or an `.aut` LTS.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use influence::analysis::{
    export_blk, influence_analysis_parallel, matching_table, report, Analyzer, BlkOptions, Format,
};
use influence::frontend::compile;
use influence::lts::{read_aut, write_aut};
use influence::pbes::global_solve;
use influence::{AnnotationMap, IaVariant, Lts, StateId, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Auto,
    Mc,
    Aut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "annotate",
    version,
    about = "Computes the variables that influence each state of a program's LTS"
)]
struct Args {
    /// `.mc` mini-language source or `.aut` LTS
    input: PathBuf,

    /// Input kind; `auto` decides by file extension
    #[arg(long, value_enum, default_value_t = Kind::Auto)]
    kind: Kind,

    /// Influence analysis variant
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    ia: u8,

    /// Variables used by the verified properties (IA4 only)
    #[arg(long, value_delimiter = ',', value_name = "VARS")]
    property_vars: Vec<String>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    /// Write the modal equation block to PATH
    #[arg(long, value_name = "PATH")]
    emit_blk: Option<PathBuf>,

    /// Variable of the `eval` clause in the emitted block
    #[arg(long, value_name = "VAR", requires = "emit_blk")]
    blk_eval: Option<String>,

    /// Emit the block even for very many variables
    #[arg(long, requires = "emit_blk")]
    blk_force: bool,

    /// Write the extracted LTS to PATH
    #[arg(long, value_name = "PATH")]
    emit_aut: Option<PathBuf>,

    /// Append the DOT diagnostic of one boolean variable
    #[arg(long, value_name = "STATE:VAR")]
    diagnose: Option<String>,

    /// Cross-check every annotation against the global fixed point
    #[arg(long)]
    oracle: bool,

    /// Worker threads for the analysis
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Mismatch(_) => 2,
            CliError::Usage(_) => 64,
        }
    }
}

fn var(name: &str) -> Result<VarId, CliError> {
    VarId::new(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn variant(args: &Args) -> Result<IaVariant, CliError> {
    if args.ia != 4 && !args.property_vars.is_empty() {
        return Err(CliError::Usage("--property-vars requires --ia 4".into()));
    }
    Ok(match args.ia {
        1 => IaVariant::Ia1,
        2 => IaVariant::Ia2,
        3 => IaVariant::Ia3,
        _ => IaVariant::Ia4(
            args.property_vars
                .iter()
                .map(|p| var(p.trim()))
                .collect::<Result<_, _>>()?,
        ),
    })
}

fn diagnose_target(spec: &str) -> Result<(StateId, VarId), CliError> {
    let bad = || CliError::Usage(format!("--diagnose expects STATE:VAR, got {spec:?}"));
    let (state, name) = spec.split_once(':').ok_or_else(bad)?;
    let state = state.trim().parse().map_err(|_| bad())?;
    Ok((state, var(name.trim())?))
}

fn load(path: &Path, kind: Kind) -> Result<Lts, CliError> {
    let kind = match kind {
        Kind::Auto => match path.extension().and_then(|e| e.to_str()) {
            Some("mc") => Kind::Mc,
            Some("aut") => Kind::Aut,
            _ => {
                return Err(CliError::Usage(format!(
                    "cannot tell the kind of {}; pass --kind mc or --kind aut",
                    path.display()
                )))
            }
        },
        k => k,
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let parsed = match kind {
        Kind::Aut => read_aut(&text).map_err(|e| e.to_string()),
        _ => compile(&text).map_err(|e| e.to_string()),
    };
    parsed.map_err(|e| CliError::Input(format!("{}:{e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn oracle_check(lts: &Lts, variant: &IaVariant, d: &AnnotationMap) -> Result<(), CliError> {
    let global = global_solve(lts, variant);
    let mut mismatches = Vec::new();
    for s in lts.reachable() {
        let mut want = global.true_vars(s);
        if let Some(props) = variant.property_vars() {
            want.extend(props.iter().cloned());
        }
        if d.get(s) != Some(&want) {
            mismatches.push(s.to_string());
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!(
            "oracle mismatch at states {}",
            mismatches.join(", ")
        )))
    }
}

fn run(args: &Args) -> Result<String, CliError> {
    let variant = variant(args)?;
    let target = args.diagnose.as_deref().map(diagnose_target).transpose()?;
    let blk_eval = args.blk_eval.as_deref().map(var).transpose()?;
    let lts = load(&args.input, args.kind)?;

    if let Some(path) = &args.emit_aut {
        write(path, &write_aut(&lts))?;
    }
    if let Some(path) = &args.emit_blk {
        let opts = BlkOptions {
            eval: blk_eval,
            force: args.blk_force,
            ..BlkOptions::default()
        };
        let text = export_blk(&lts, &variant, &opts).map_err(|e| CliError::Input(e.to_string()))?;
        write(path, &text)?;
    }

    let input_err = |e: influence::analysis::AnalysisError| CliError::Input(e.to_string());
    let mut analyzer = Analyzer::new(&lts, variant.clone()).map_err(input_err)?;
    let d = if args.jobs > 1 {
        influence_analysis_parallel(&lts, &variant, args.jobs as usize).map_err(input_err)?
    } else {
        analyzer.run().map_err(input_err)?
    };

    let universe = lts.var_universe();
    let format = match args.format {
        OutputFormat::Table => Format::Table,
        OutputFormat::Json => Format::Json,
    };
    let mut out = report(&variant, &universe, &matching_table(&d, &universe), format);
    if let Some((state, v)) = target {
        let diag = analyzer.diagnostic(state, &v).map_err(input_err)?;
        out.push_str(&diag.to_dot());
    }
    if args.oracle {
        // the report is printed either way; a mismatch only changes the exit status
        if let Err(e) = oracle_check(&lts, &variant, &d) {
            print!("{out}");
            return Err(e);
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("annotate: {e}");
            ExitCode::from(e.code())
        }
    }
}
