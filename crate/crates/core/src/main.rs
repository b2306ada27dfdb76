use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use kaprekar::base_digits::{to_digits, Base, DigitQuad, MAX_BASE};
use kaprekar::dynamics::{default_max_steps, distance_histogram, fixed_pairs, trajectory};
use kaprekar::output::{self, Metrics};
use kaprekar::theorems::{verify_base, Depth};
use kaprekar::Error;

#[derive(Parser)]
#[command(
    name = "kaprekar",
    version,
    about = "Four-digit Kaprekar dynamics in any base"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for per-base jobs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the map from one numeral.
    Trajectory {
        #[arg(long)]
        base: u32,
        /// Starting value as a decimal integer below b⁴.
        #[arg(long, conflicts_with = "digits", required_unless_present = "digits")]
        input: Option<u64>,
        /// Starting digits, most significant first: a3,a2,a1,a0.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        digits: Option<Vec<u32>>,
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// List the non-zero fixed numerals.
    FixedPoints {
        #[arg(long, conflicts_with = "bases", required_unless_present = "bases")]
        base: Option<u32>,
        #[arg(long)]
        bases: Option<BaseRange>,
    },
    /// Per-base statistics over a range of bases.
    Sweep {
        /// Inclusive range such as 2..200.
        #[arg(long)]
        bases: BaseRange,
        #[arg(long, value_delimiter = ',', value_enum, default_values_t = [Metric::Mb, Metric::Cb, Metric::Sbsize])]
        metrics: Vec<Metric>,
    },
    /// Distribution of distances to the fixed numeral.
    Histogram {
        #[arg(long)]
        base: u32,
        /// Add the fraction of S_b at each distance.
        #[arg(long)]
        normalize: bool,
    },
    /// Compare closed-form predictions with measurement.
    Verify {
        #[arg(long, conflicts_with = "base", required_unless_present = "base")]
        bases: Option<BaseRange>,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long, value_enum, default_value_t = DepthArg::Formulas)]
        depth: DepthArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Mb,
    Cb,
    Sbsize,
    Fixedpoints,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DepthArg {
    Formulas,
    Deep,
}

/// Inclusive range of bases, written `a..b` or `a`.
#[derive(Clone, Copy, Debug)]
struct BaseRange {
    lo: u32,
    hi: u32,
}

impl FromStr for BaseRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid base `{t}`"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo < 2 || hi > MAX_BASE || lo > hi {
            return Err(format!(
                "range must satisfy 2 ≤ a ≤ b ≤ {MAX_BASE}, got {s}"
            ));
        }
        Ok(BaseRange { lo, hi })
    }
}

impl BaseRange {
    fn bases(self) -> Vec<Base> {
        (self.lo..=self.hi)
            .map(|b| Base::new(b).expect("range validated"))
            .collect()
    }
}

enum Failure {
    Usage(String),
    Undetermined(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Undetermined { .. } => Failure::Undetermined(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

struct Rendered {
    body: String,
    mismatch: bool,
}

fn base(b: u32) -> Result<Base, Failure> {
    Ok(Base::new(b)?)
}

fn render(
    format: Format,
    text: String,
    json: serde_json::Value,
    csv: Option<String>,
) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(text),
        Format::Json => Ok(output::json_string(&json)),
        Format::Csv => csv.ok_or_else(|| {
            Failure::Usage("csv output is only available for tabular commands".into())
        }),
    }
}

fn run(cli: &Cli) -> Result<Rendered, Failure> {
    let mut mismatch = false;
    let body = match &cli.command {
        Command::Trajectory {
            base: b,
            input,
            digits,
            max_steps,
        } => {
            let b = base(*b)?;
            let start = match (input, digits) {
                (Some(x), _) => to_digits(*x, b)?,
                (None, Some(ds)) => {
                    let ds: [u32; 4] = ds.as_slice().try_into().map_err(|_| {
                        Failure::Usage(format!("--digits needs four values, got {}", ds.len()))
                    })?;
                    DigitQuad::new(b, ds)?
                }
                (None, None) => unreachable!("clap requires one of --input and --digits"),
            };
            let t = trajectory(start, max_steps.unwrap_or_else(|| default_max_steps(b)))?;
            if cli.format == Format::Csv {
                return Err(Failure::Usage(
                    "csv output is only available for tabular commands".into(),
                ));
            }
            render(
                cli.format,
                output::trajectory_text(&t),
                output::trajectory_json(&t),
                None,
            )?
        }
        Command::FixedPoints { base: b, bases } => {
            let list = match (b, bases) {
                (Some(b), _) => vec![base(*b)?],
                (None, Some(r)) => r.bases(),
                (None, None) => unreachable!("clap requires one of --base and --bases"),
            };
            let rows: Vec<(Base, Vec<DigitQuad>)> = list
                .par_iter()
                .map(|&b| (b, fixed_pairs(b).iter().map(|p| p.image()).collect()))
                .collect();
            render(
                cli.format,
                output::fixed_points_text(&rows),
                output::fixed_points_json(&rows),
                Some(output::fixed_points_csv(&rows)),
            )?
        }
        Command::Sweep { bases, metrics } => {
            let m = Metrics {
                mb: metrics.contains(&Metric::Mb),
                cb: metrics.contains(&Metric::Cb),
                sb_size: metrics.contains(&Metric::Sbsize),
                fixed_points: metrics.contains(&Metric::Fixedpoints),
            };
            let rows: Vec<output::SweepRow> = bases
                .bases()
                .par_iter()
                .map(|&b| output::sweep_row(b, m))
                .collect();
            render(
                cli.format,
                output::sweep_text(&rows),
                output::sweep_json(&rows),
                Some(output::sweep_csv(&rows)),
            )?
        }
        Command::Histogram { base: b, normalize } => {
            let b = base(*b)?;
            let histogram = distance_histogram(b)?;
            if histogram.is_empty() {
                return Err(Failure::Usage(format!(
                    "base {b} has no non-trivial fixed point"
                )));
            }
            let rows = output::histogram_rows(&histogram, *normalize);
            render(
                cli.format,
                output::histogram_text(b, &rows),
                output::histogram_json(b, &rows),
                Some(output::histogram_csv(&rows)),
            )?
        }
        Command::Verify {
            bases,
            base: b,
            depth,
        } => {
            let list = match (bases, b) {
                (Some(r), _) => r.bases(),
                (None, Some(b)) => vec![base(*b)?],
                (None, None) => unreachable!("clap requires one of --bases and --base"),
            };
            if cli.format == Format::Csv {
                return Err(Failure::Usage(
                    "csv output is only available for tabular commands".into(),
                ));
            }
            let depth = match depth {
                DepthArg::Formulas => Depth::Formulas,
                DepthArg::Deep => Depth::Deep,
            };
            let reports: Vec<_> = list.par_iter().map(|&b| verify_base(b, depth)).collect();
            mismatch = !reports.iter().all(|r| r.all_match());
            render(
                cli.format,
                output::verify_text(&reports),
                output::verify_json(&reports),
                None,
            )?
        }
    };
    Ok(Rendered { body, mismatch })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| run(&cli));
    let rendered = match result {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Undetermined(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, rendered.body.as_bytes()),
        None => std::io::stdout().lock().write_all(rendered.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if rendered.mismatch {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: BaseRange = "2..200".parse().unwrap();
        assert_eq!((r.lo, r.hi), (2, 200));
        let r: BaseRange = "5".parse().unwrap();
        assert_eq!((r.lo, r.hi), (5, 5));
        assert!("1..5".parse::<BaseRange>().is_err());
        assert!("9..5".parse::<BaseRange>().is_err());
        assert!("a..5".parse::<BaseRange>().is_err());
        assert!("2..70000".parse::<BaseRange>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
