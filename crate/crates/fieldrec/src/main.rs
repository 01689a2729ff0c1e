use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use fieldrec::{
    density_row, density_tsv, generate_challenge, run_campaign, run_challenge, CampaignConfig, Challenge, EngineSettings,
    Family, HarnessError,
};
use fieldrec_core::dependence::{alg_dependent, relation};
use fieldrec_core::milnor::{residue, DivisorialValuation, MilnorSymbol};
use fieldrec_core::polyfield::{FieldDescriptor, Polynomial, RationalFunction};

#[derive(Parser)]
#[command(name = "fieldrec", version, about = "Function-field toolkit and field-reconstruction harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide algebraic dependence of two elements.
    Depend {
        x: String,
        y: String,
        #[arg(long, default_value = "Q(t1,t2)")]
        field: String,
    },
    /// Residue of a Milnor symbol along a divisorial valuation.
    Residue {
        /// Comma-separated entries, optionally wrapped in `<...>` or `{...}`.
        #[arg(long)]
        symbol: String,
        /// An irreducible polynomial, `inf` for the line at infinity, or
        /// `inf:<var>` for infinity in one variable.
        #[arg(long)]
        center: String,
        #[arg(long, default_value = "Q(t1,t2)")]
        field: String,
    },
    /// Exact share of degree-d monomials with e_2..e_r divisible by p.
    Density {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u64>,
        #[arg(long)]
        d: u64,
        /// Print a TSV table.
        #[arg(long)]
        table: bool,
    },
    /// Generate a reconstruction challenge.
    Challenge {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        family: Family,
        #[arg(long, default_value = "Q(t1,t2)")]
        field: String,
        /// Corrupt the oracle answer on one probe class.
        #[arg(long)]
        corrupt: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct the hidden map of a challenge file.
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a campaign of challenges in parallel.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), HarnessError> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn descriptor(s: &str) -> Result<Arc<FieldDescriptor>, HarnessError> {
    Ok(Arc::new(s.parse::<FieldDescriptor>()?))
}

fn valuation(center: &str, d: &Arc<FieldDescriptor>) -> Result<DivisorialValuation, HarnessError> {
    let c = center.trim();
    if c == "inf" {
        return Ok(DivisorialValuation::line_at_infinity(d));
    }
    if let Some(v) = c.strip_prefix("inf:") {
        let j = d.var_index(v.trim()).ok_or_else(|| HarnessError::Invalid(format!("unknown variable `{v}`")))?;
        return Ok(DivisorialValuation::infinity_along(d, j)?);
    }
    Ok(DivisorialValuation::at(&Polynomial::parse(c, d)?)?)
}

/// Exit code 0 on success, 1 on a failed reconstruction.
fn run(cli: Cli) -> Result<u8, HarnessError> {
    match cli.command {
        Command::Depend { x, y, field } => {
            let d = descriptor(&field)?;
            let (x, y) = (RationalFunction::parse(&x, &d)?, RationalFunction::parse(&y, &d)?);
            if alg_dependent(&x, &y)? {
                match relation(&x, &y) {
                    Some(h) => println!("dependent\nrelation: {h}"),
                    None => println!("dependent"),
                }
            } else {
                println!("independent");
            }
            Ok(0)
        }
        Command::Residue { symbol, center, field } => {
            let d = descriptor(&field)?;
            let inner = symbol.trim().trim_start_matches(['<', '{']).trim_end_matches(['>', '}']);
            let xs = inner.split(',').map(|s| RationalFunction::parse(s, &d)).collect::<Result<Vec<_>, _>>()?;
            let s = MilnorSymbol::new(&xs)?;
            println!("{}", residue(&s, &valuation(&center, &d)?)?);
            Ok(0)
        }
        Command::Density { p, r, d, table } => {
            let mut rows = Vec::new();
            for &pp in &p {
                for &rr in &r {
                    rows.push(density_row(pp, rr, d)?);
                }
            }
            if table {
                print!("{}", density_tsv(&rows));
            } else {
                for row in rows {
                    println!(
                        "density({}, {}, {}) = {} ≈ {:.6} (limit {:.6}, relative error {:.4})",
                        row.p, row.r, row.d, row.exact, row.value, row.limit, row.relative_error
                    );
                }
            }
            Ok(0)
        }
        Command::Challenge { seed, family, field, corrupt, out } => {
            let mut ch = generate_challenge(seed, family, &descriptor(&field)?)?;
            if corrupt {
                ch = ch.corrupted(seed)?;
            }
            emit(&serde_json::to_string_pretty(&ch)?, out.as_ref())?;
            Ok(0)
        }
        Command::Reconstruct { input, out } => {
            let ch: Challenge = serde_json::from_str(&fs::read_to_string(&input)?)?;
            ch.hidden_morphism()?;
            let report = run_challenge(&ch, &EngineSettings::default());
            emit(&serde_json::to_string_pretty(&report)?, out.as_ref())?;
            Ok(if report.success { 0 } else { 1 })
        }
        Command::Campaign { config, out } => {
            let cfg: CampaignConfig = serde_json::from_str(&fs::read_to_string(&config)?)?;
            let report = run_campaign(&cfg)?;
            emit(&serde_json::to_string_pretty(&report)?, out.as_ref())?;
            eprintln!(
                "{}/{} succeeded, {} false successes, {} diagnosed failures",
                report.summary.successes, report.summary.total, report.summary.false_successes, report.summary.diagnosed_failures
            );
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
