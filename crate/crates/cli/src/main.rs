//! Command-line front end over the m-polynomial library.
//!
//! Exit codes: 0 success / verification PASS, 1 verification FAIL,
//! 2 usage or parse error, 3 table budget refusal.

mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use input::{exit_code_for, load_grid_function, load_matrix, parse_composition, parse_exponents, LoadedMatrix};
use mpoly::{
    check_hadamard, expand, fit_univariate, mg_direct, mg_table_with_budget, verify_with,
    ExpansionVariant, FitSide, GridFunction, OrthVariant, Side,
};
use render::Format;

#[derive(Parser)]
#[command(name = "mpoly", version, about = "m-polynomial tables, structure checks, orthogonality verification, expansions, and univariate fits for a square matrix G")]
struct Cli {
    /// Matrix description file (JSON).
    #[arg(long, global = true)]
    matrix: Option<PathBuf>,

    /// Weight n of the compositions in play.
    #[arg(short, global = true)]
    n: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    /// Maximum number of table cells a command may materialize.
    #[arg(long, global = true, default_value_t = mpoly::DEFAULT_CELL_BUDGET)]
    budget: u64,

    /// Comparison tolerance override for float-mode matrices.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Run verifications even when the matrix fails the hypothesis check.
    #[arg(long, global = true)]
    force_hypothesis: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate MG(p;s) at a single pair of compositions.
    Eval {
        /// Composition p (comma-separated, column selector).
        #[arg(short, long)]
        p: String,
        /// Composition s (comma-separated, row selector).
        #[arg(short, long)]
        s: String,
    },
    /// Print the full MG table for weight n.
    Table {
        /// Print MG(s;p)-oriented values instead (rows s, columns p).
        #[arg(long)]
        transposed: bool,
    },
    /// Report the structural predicates of the matrix.
    Check {
        /// Predicates that must hold for exit code 0 (default: hadamard).
        #[arg(long = "require", value_enum)]
        require: Vec<Predicate>,
    },
    /// Verify an orthogonality relation exhaustively over V(n,q).
    Verify {
        #[arg(long, value_enum)]
        variant: VariantArg,
    },
    /// Expand a grid function in the m-polynomial basis.
    Expand {
        #[arg(long, value_enum)]
        side: SideArg,
        /// Monomial exponents e0,...,e{q-1}; gamma(x) = prod x_i^{e_i}.
        #[arg(long, conflicts_with = "values")]
        monomial: Option<String>,
        /// JSON file listing gamma on every point of V(n,q).
        #[arg(long)]
        values: Option<PathBuf>,
        /// Require a specific hypothesis variant instead of auto-detection.
        #[arg(long, value_enum, default_value_t = ExpandVariantArg::Auto)]
        variant: ExpandVariantArg,
    },
    /// Fit one m-polynomial as a univariate polynomial (q = 2 only).
    Fit {
        /// The fixed composition.
        #[arg(long)]
        fixed: String,
        /// Which argument varies: s (fit in s0-s1) or p (fit in p0-p1).
        #[arg(long, value_enum)]
        side: FitSideArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Predicate {
    Hadamard,
    Symmetric,
    Core,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Basic,
    Symmetric,
    Core,
}

impl From<VariantArg> for OrthVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Basic => OrthVariant::Basic,
            VariantArg::Symmetric => OrthVariant::Symmetric,
            VariantArg::Core => OrthVariant::Core,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ExpandVariantArg {
    Auto,
    Symmetric,
    Core,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FitSideArg {
    S,
    P,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err((message, code)) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}

type CommandResult = Result<i32, (String, i32)>;

fn usage(message: impl Into<String>) -> (String, i32) {
    (message.into(), 2)
}

fn run(cli: Cli) -> CommandResult {
    let matrix_path = cli.matrix.as_ref().ok_or_else(|| usage("--matrix <file> is required"))?;
    let loaded = load_matrix(matrix_path, cli.tol).map_err(usage)?;
    match &cli.command {
        Command::Eval { p, s } => cmd_eval(&cli, &loaded, p, s),
        Command::Table { transposed } => cmd_table(&cli, &loaded, *transposed),
        Command::Check { require } => cmd_check(&cli, &loaded, require),
        Command::Verify { variant } => cmd_verify(&cli, &loaded, (*variant).into()),
        Command::Expand { side, monomial, values, variant } => {
            cmd_expand(&cli, &loaded, *side, monomial.as_deref(), values.as_deref(), *variant)
        }
        Command::Fit { fixed, side } => cmd_fit(&cli, &loaded, fixed, *side),
    }
}

fn require_n(cli: &Cli) -> Result<usize, (String, i32)> {
    cli.n.ok_or_else(|| usage("-n <weight> is required for this command"))
}

fn cmd_eval(cli: &Cli, loaded: &LoadedMatrix, p_text: &str, s_text: &str) -> CommandResult {
    let n = require_n(cli)?;
    let q = loaded.matrix.q();
    let p = parse_composition(p_text, q, n).map_err(usage)?;
    let s = parse_composition(s_text, q, n).map_err(usage)?;
    let value = mg_direct(&loaded.matrix, &p, &s)
        .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "value": value.to_string() }))
                .expect("serializable")
        ),
        _ => println!("{value}"),
    }
    Ok(0)
}

fn cmd_table(cli: &Cli, loaded: &LoadedMatrix, transposed: bool) -> CommandResult {
    let n = require_n(cli)?;
    let table = mg_table_with_budget(&loaded.matrix, n, cli.budget)
        .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
    let view = render::TableView { table: &table, transposed };
    match cli.format {
        Format::Pretty => print!("{}", view.pretty()),
        Format::Csv => print!("{}", view.csv()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&view.json()).expect("serializable")
        ),
    }
    Ok(0)
}

fn cmd_check(cli: &Cli, loaded: &LoadedMatrix, require: &[Predicate]) -> CommandResult {
    let report = check_hadamard(&loaded.matrix);
    match cli.format {
        Format::Pretty => print!("{}", render::structure_pretty(loaded.name.as_deref(), &report)),
        Format::Csv => print!("{}", render::structure_csv(&report)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&render::structure_json(loaded.name.as_deref(), &report))
                .expect("serializable")
        ),
    }
    let required: &[Predicate] =
        if require.is_empty() { &[Predicate::Hadamard] } else { require };
    let all_hold = required.iter().all(|pred| match pred {
        Predicate::Hadamard => report.is_hadamard,
        Predicate::Symmetric => report.is_symmetric,
        Predicate::Core => report.is_core_pattern,
    });
    Ok(if all_hold { 0 } else { 1 })
}

fn cmd_verify(cli: &Cli, loaded: &LoadedMatrix, variant: OrthVariant) -> CommandResult {
    let n = require_n(cli)?;
    let report = verify_with(&loaded.matrix, n, variant, cli.force_hypothesis)
        .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
    match cli.format {
        Format::Pretty => print!("{}", render::orthogonality_pretty(&report)),
        Format::Csv => print!("{}", render::orthogonality_csv(&report)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&render::orthogonality_json(&report))
                .expect("serializable")
        ),
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_expand(
    cli: &Cli,
    loaded: &LoadedMatrix,
    side: SideArg,
    monomial: Option<&str>,
    values: Option<&std::path::Path>,
    variant: ExpandVariantArg,
) -> CommandResult {
    let n = require_n(cli)?;
    let q = loaded.matrix.q();
    let ctx = loaded.matrix.context();
    let grid = match (monomial, values) {
        (Some(text), None) => {
            let exponents = parse_exponents(text, q).map_err(usage)?;
            GridFunction::monomial(n, q, &exponents, ctx)
                .map_err(|e| (e.to_string(), exit_code_for(&e)))?
        }
        (None, Some(path)) => load_grid_function(path, n, q, ctx).map_err(usage)?,
        _ => return Err(usage("exactly one of --monomial or --values is required")),
    };
    let side = match side {
        SideArg::Alpha => Side::Alpha,
        SideArg::Beta => Side::Beta,
    };
    let result = expand(&loaded.matrix, &grid, side)
        .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
    let wanted = match variant {
        ExpandVariantArg::Auto => None,
        ExpandVariantArg::Symmetric => Some(ExpansionVariant::Symmetric),
        ExpandVariantArg::Core => Some(ExpansionVariant::Core),
    };
    if let Some(wanted) = wanted {
        if wanted != result.variant {
            return Err(usage(format!(
                "matrix calls for the {} variant, not {}",
                result.variant.name(),
                wanted.name()
            )));
        }
    }
    let order: Vec<_> = mpoly::compositions(n, q).collect();
    match cli.format {
        Format::Pretty => print!("{}", render::expansion_pretty(&order, &result)),
        Format::Csv => print!("{}", render::expansion_csv(&order, &result)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&render::expansion_json(&order, &result))
                .expect("serializable")
        ),
    }
    Ok(0)
}

fn cmd_fit(cli: &Cli, loaded: &LoadedMatrix, fixed_text: &str, side: FitSideArg) -> CommandResult {
    let n = require_n(cli)?;
    let q = loaded.matrix.q();
    let fixed = parse_composition(fixed_text, q, n).map_err(usage)?;
    let (fit_side, side_name) = match side {
        FitSideArg::S => (FitSide::S, "s"),
        FitSideArg::P => (FitSide::P, "p"),
    };
    let coefficients = fit_univariate(&loaded.matrix, n, &fixed, fit_side)
        .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
    match cli.format {
        Format::Pretty => print!("{}", render::fit_pretty(&coefficients)),
        Format::Csv => print!("{}", render::fit_csv(&coefficients)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&render::fit_json(&fixed, side_name, &coefficients))
                .expect("serializable")
        ),
    }
    Ok(0)
}
