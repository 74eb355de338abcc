//! Command-line front end: resolve a knot, run the pipeline, and print the
//! result as versioned JSON or an ASCII table.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 broken structural
//! guarantee (the library flagged an internal inconsistency).

mod output;
mod selfcheck;

use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use knotshift::oracle::DEFAULT_ORDER_CAP;
use knotshift::ring::RingParams;
use knotshift::shift::ShiftSystem;
use knotshift::spectra::{combine_abelian, period_set, period_tower, AbelianGroupSpec};
use knotshift::{builtin_names, builtin_knot, classify_coverings_abelian, Error, Knot};

use output::{
    AnalyzeReport, CombinedAnalyzeReport, CoveringFactor, CoveringsReport, FactorBlock,
    PeriodsReport,
};

const ORDER_CAP_ENV: &str = "KNOTSHIFT_ORDER_CAP";

#[derive(Parser)]
#[command(
    name = "knotshift",
    version,
    about = "Finite dynamical systems attached to knots over Z/p^r",
    after_help = "Knots: a built-in name (see `analyze --knot help`) or a path to a .wirt file."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Iteration cap for the order search (default 10^7, or KNOTSHIFT_ORDER_CAP)
    #[arg(long, global = true)]
    order_cap: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// State-space structure, transfer order, and exact orbit periods
    Analyze {
        /// Built-in knot name or path to a .wirt presentation file
        #[arg(long)]
        knot: String,
        /// Prime modulus; use with --r
        #[arg(long, requires = "r", conflicts_with = "sigma")]
        p: Option<u64>,
        /// Exponent: coefficients in Z/p^r
        #[arg(long, requires = "p")]
        r: Option<u32>,
        /// Finite abelian coefficient group, e.g. "6" or "4,3"
        #[arg(long, conflicts_with_all = ["p", "r"])]
        sigma: Option<String>,
    },
    /// Transfer orders for r = 1..=rmax and their growth pattern
    Periods {
        /// Built-in knot name or path to a .wirt presentation file
        #[arg(long)]
        knot: String,
        /// Prime modulus
        #[arg(long)]
        p: u64,
        /// Largest exponent in the tower
        #[arg(long)]
        rmax: u32,
    },
    /// Regular coverings of the d-fold cyclic cover with a given deck group
    Coverings {
        /// Built-in knot name or path to a .wirt presentation file
        #[arg(long)]
        knot: String,
        /// Deck group as comma-separated orders, e.g. "6" or "2,9"
        #[arg(long)]
        sigma: String,
        /// Degree of the base cyclic cover
        #[arg(long)]
        d: u64,
    },
    /// Cross-check the fast paths against the brute-force oracle
    Selfcheck,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_theorem_violation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cap = order_cap(cli)?;
    match &cli.command {
        Command::Analyze { knot, p, r, sigma } => {
            let knot = resolve_knot(knot)?;
            match (p, sigma) {
                (Some(p), None) => analyze_prime_power(cli, &knot, *p, r.unwrap(), cap),
                (None, Some(sigma)) => analyze_sigma(cli, &knot, sigma, cap),
                _ => Err(Error::InvalidInput(
                    "analyze needs either --p with --r, or --sigma".into(),
                )),
            }
        }
        Command::Periods { knot, p, rmax } => {
            let knot = resolve_knot(knot)?;
            periods(cli, &knot, *p, *rmax, cap)
        }
        Command::Coverings { knot, sigma, d } => {
            let knot = resolve_knot(knot)?;
            coverings(cli, &knot, sigma, *d, cap)
        }
        Command::Selfcheck => selfcheck::run(cli.format == Format::Json),
    }
}

fn order_cap(cli: &Cli) -> Result<u64, Error> {
    if let Some(cap) = cli.order_cap {
        return Ok(cap);
    }
    match std::env::var(ORDER_CAP_ENV) {
        Ok(text) => text.parse().map_err(|_| {
            Error::InvalidInput(format!("{ORDER_CAP_ENV}='{text}' is not a positive integer"))
        }),
        Err(_) => Ok(DEFAULT_ORDER_CAP),
    }
}

/// A built-in name if it matches one, otherwise a .wirt file path.
fn resolve_knot(spec: &str) -> Result<Knot, Error> {
    if spec == "help" {
        return Err(Error::InvalidInput(format!(
            "built-in knots: {}",
            builtin_names().join(", ")
        )));
    }
    if let Ok(knot) = builtin_knot(spec) {
        return Ok(knot);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {spec}: {e}")))?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("knot")
            .to_string();
        return Knot::from_wirtinger_text(&name, &text);
    }
    Err(Error::UnknownKnot(spec.to_string()))
}

fn analyze_prime_power(cli: &Cli, knot: &Knot, p: u64, r: u32, cap: u64) -> Result<(), Error> {
    let ring = RingParams::new(p, r)?;
    let pair = knot.pair_for_prime(p)?;
    let sys = ShiftSystem::new(pair, ring)?;
    let spectrum = period_set(sys.transfer(), cap)?;
    let report = AnalyzeReport {
        schema: output::SCHEMA,
        knot: knot.name.clone(),
        delta: knot.delta.coeffs().to_vec(),
        p,
        r,
        n: sys.rank(),
        hom_order: format!("{p}^{}", u64::from(r) * sys.rank() as u64),
        d: spectrum.d,
        q: spectrum.periods(),
        counts: spectrum
            .counts
            .iter()
            .map(|(&q, c)| (q, c.to_string()))
            .collect(),
    };
    match cli.format {
        Format::Json => output::print_json(&report),
        Format::Table => output::print_analyze_table(&report),
    }
    Ok(())
}

fn analyze_sigma(cli: &Cli, knot: &Knot, sigma: &str, cap: u64) -> Result<(), Error> {
    let spec = AbelianGroupSpec::parse(sigma)?;
    let mut factors = Vec::new();
    let mut spectra = Vec::new();
    let mut hom_order = num_bigint::BigUint::from(1u32);
    for &(p, r) in spec.factors() {
        let ring = RingParams::new(p, r)?;
        let pair = knot.pair_for_prime(p)?;
        let sys = ShiftSystem::new(pair, ring)?;
        let spectrum = period_set(sys.transfer(), cap)?;
        hom_order *= num_bigint::BigUint::from(p).pow(r * sys.rank() as u32);
        factors.push(FactorBlock {
            p,
            r,
            n: sys.rank(),
            hom_order: format!("{p}^{}", u64::from(r) * sys.rank() as u64),
            d: spectrum.d,
            q: spectrum.periods(),
        });
        spectra.push(spectrum);
    }
    let combined = combine_abelian(&spec, &spectra)?;
    let report = CombinedAnalyzeReport {
        schema: output::SCHEMA,
        knot: knot.name.clone(),
        delta: knot.delta.coeffs().to_vec(),
        sigma: spec.to_string(),
        factors,
        hom_order: hom_order.to_string(),
        d: combined.d,
        q: combined.periods(),
        counts: combined
            .counts
            .iter()
            .map(|(&q, c)| (q, c.to_string()))
            .collect(),
    };
    match cli.format {
        Format::Json => output::print_json(&report),
        Format::Table => output::print_combined_table(&report),
    }
    Ok(())
}

fn periods(cli: &Cli, knot: &Knot, p: u64, rmax: u32, cap: u64) -> Result<(), Error> {
    let pair = knot.pair_for_prime(p)?;
    let tower = period_tower(&pair, p, rmax, cap)?;
    let report = PeriodsReport {
        schema: output::SCHEMA,
        knot: knot.name.clone(),
        delta: knot.delta.coeffs().to_vec(),
        p,
        rmax,
        tower: tower.orders.clone(),
        pattern: output::pattern_text(tower.pattern),
    };
    match cli.format {
        Format::Json => output::print_json(&report),
        Format::Table => output::print_periods_table(&report),
    }
    if tower.pattern == knotshift::TowerPattern::Other {
        return Err(Error::TheoremViolation(format!(
            "tower {:?} fits no recognized growth pattern",
            tower.orders
        )));
    }
    Ok(())
}

fn coverings(cli: &Cli, knot: &Knot, sigma: &str, d: u64, cap: u64) -> Result<(), Error> {
    let spec = AbelianGroupSpec::parse(sigma)?;
    let reports = classify_coverings_abelian(knot, &spec, d, cap)?;
    let total_fixed: num_bigint::BigUint =
        reports.iter().map(|r| r.total_fixed.clone()).product();
    let surjective: num_bigint::BigUint =
        reports.iter().map(|r| r.surjective.clone()).product();
    let report = CoveringsReport {
        schema: output::SCHEMA,
        knot: knot.name.clone(),
        delta: knot.delta.coeffs().to_vec(),
        sigma: spec.to_string(),
        d,
        total_fixed: total_fixed.to_string(),
        surjective: surjective.to_string(),
        factors: reports
            .into_iter()
            .map(|r| CoveringFactor {
                p: r.p,
                r: r.r,
                order: r.order,
                total_fixed: r.total_fixed.to_string(),
                surjective: r.surjective.to_string(),
                representatives: r.representatives,
            })
            .collect(),
    };
    match cli.format {
        Format::Json => output::print_json(&report),
        Format::Table => output::print_coverings_table(&report),
    }
    Ok(())
}
