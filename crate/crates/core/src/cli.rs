//! Command-line front end. [`run`] parses arguments, executes one command and
//! returns the process exit code: 0 on success, 1 on domain errors, 2 on
//! usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Deserialize;

use crate::effort::{effort_ratio, l_effort, security_bits, BitLength};
use crate::error::{Error, Result};
use crate::estimator::{
    break_time, min_bitlength, policy_recommendation, security_level_for_key,
    security_level_lookup, BaselineRecord, CryptoFamily, HorizonMode, SecurityQuery,
};
use crate::moore::{calibrate_doubling, project_hours, scale_factor, CalendarDate, DoublingModel};
use crate::records::{
    bundled_records, extrapolate_effort, find_record, fit_trend, load_records, FactoringRecord,
    EXTRAPOLATION_NOTES,
};
use crate::rsa_lab::bench::{benchmark_factoring, desk_scale_limit, BenchConfig};
use crate::rsa_lab::factor::FactorAlgorithm;
use crate::rsa_lab::rsa::{break_key_with, decrypt, encrypt, keygen, PublicKey, DEFAULT_BREAK_BUDGET};
use crate::tables::{reference_table, Cell, OutputFormat, Table};

#[derive(Debug, Parser)]
#[command(
    name = "keystrength",
    version,
    about = "Estimate RSA key strength over time from the NFS effort model and compute growth"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Seed for every randomized operation.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Factoring-record file; defaults to the bundled dataset.
    #[arg(long, global = true)]
    pub records_file: Option<PathBuf>,

    /// JSON file overriding the default baseline and doubling period.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => OutputFormat::Table,
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// NFS effort L[n] and equivalent security bits.
    Effort {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        bits: Vec<u32>,
    },
    /// How many times harder one bit length is to factor than another.
    Ratio {
        #[arg(long)]
        target: u32,
        #[arg(long, default_value_t = 512)]
        baseline: u32,
    },
    /// Doubling period implied by two timings of the same job.
    Calibrate {
        #[arg(long)]
        hours_early: f64,
        #[arg(long)]
        hours_late: f64,
        #[arg(long)]
        months: f64,
    },
    /// Hours a job would take after some months of compute growth.
    Project {
        #[arg(long)]
        hours: f64,
        #[arg(long)]
        months: f64,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Projected time to factor a bit length at a date.
    Estimate {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        bits: Vec<u32>,
        #[command(flatten)]
        when: WhenArgs,
        #[command(flatten)]
        baseline: BaselineArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Smallest bit length that stays unbroken for a protection lifespan.
    MinBits {
        /// Start of protection, YYYY or YYYY-MM.
        #[arg(long)]
        from: CalendarDate,
        #[arg(long)]
        lifespan: f64,
        #[arg(long, default_value_t = 1.0)]
        margin: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::EndOfLife)]
        mode: ModeArg,
        /// Report the next conventional modulus size instead of the raw minimum.
        #[arg(long)]
        round: bool,
        #[command(flatten)]
        baseline: BaselineArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Key sizes per security level; without flags prints the whole table.
    Levels {
        #[arg(long)]
        family: Option<CryptoFamily>,
        #[arg(long, conflicts_with = "key_bits", requires = "family")]
        level: Option<u32>,
        /// Inverse lookup: highest level this key size reaches.
        #[arg(long, requires = "family")]
        key_bits: Option<u32>,
    },
    /// Minimum modulus size under the 2030 policy rule.
    Policy {
        #[arg(long)]
        year: i32,
    },
    /// Regenerate a reference table.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        which: u8,
    },
    /// Historical factoring records.
    Records {
        #[command(subcommand)]
        action: RecordsAction,
    },
    /// Desk-scale RSA.
    Rsa {
        #[command(subcommand)]
        action: RsaAction,
    },
    /// Timing benchmarks.
    Bench {
        #[command(subcommand)]
        action: BenchAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum RecordsAction {
    /// Validate and print the records.
    Load,
    /// Exponential bit-length trend over the factoring dates.
    Fit,
    /// Scale a record's MIPS-years to another bit length.
    Extrapolate {
        #[arg(long)]
        from: String,
        #[arg(long)]
        bits: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum RsaAction {
    Keygen {
        #[arg(long)]
        bits: u32,
    },
    Encrypt {
        #[arg(long)]
        n: BigUint,
        #[arg(long)]
        e: BigUint,
        #[arg(long)]
        m: BigUint,
    },
    Decrypt {
        #[arg(long)]
        n: BigUint,
        #[arg(long)]
        d: BigUint,
        #[arg(long)]
        c: BigUint,
    },
    /// Recover the private exponent by factoring the modulus.
    Break {
        #[arg(long)]
        n: BigUint,
        #[arg(long)]
        e: BigUint,
        #[arg(long, default_value_t = DEFAULT_BREAK_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BenchAction {
    /// Time factorizations of random semiprimes.
    Factor {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        sizes: Vec<u32>,
        #[arg(long, default_value_t = 5)]
        trials: u32,
        #[arg(long, default_value = "pollard_rho")]
        algorithm: FactorAlgorithm,
        /// Iteration budget per factorization; exceeding it records a timeout.
        #[arg(long)]
        budget: Option<u64>,
        /// Also write the JSON summary to this path.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    EndOfLife,
    CumulativeWork,
}

impl From<ModeArg> for HorizonMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::EndOfLife => HorizonMode::EndOfLife,
            ModeArg::CumulativeWork => HorizonMode::CumulativeWork,
        }
    }
}

#[derive(Debug, Args)]
pub struct WhenArgs {
    /// Year of the estimate (January).
    #[arg(long, conflicts_with = "date")]
    year: Option<i32>,
    /// Date of the estimate, YYYY or YYYY-MM.
    #[arg(long)]
    date: Option<CalendarDate>,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    baseline_bits: Option<u32>,
    #[arg(long)]
    baseline_hours: Option<f64>,
    #[arg(long)]
    baseline_date: Option<CalendarDate>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Months per doubling of compute.
    #[arg(long)]
    doubling: Option<f64>,
}

/// Contents of the optional `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub baseline: Option<BaselineConfig>,
    pub doubling_months: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineConfig {
    pub bits: u32,
    pub wall_hours: f64,
    pub date: CalendarDate,
}

struct Context {
    config: ConfigFile,
    records_file: Option<PathBuf>,
    seed: u64,
}

impl Context {
    fn baseline(&self, args: &BaselineArgs) -> Result<BaselineRecord> {
        let default = match &self.config.baseline {
            Some(b) => BaselineRecord::new(BitLength::new(b.bits)?, b.wall_hours, b.date)?,
            None => BaselineRecord::rsa512_2015(),
        };
        BaselineRecord::new(
            args.baseline_bits.map(BitLength::new).transpose()?.unwrap_or(default.bits),
            args.baseline_hours.unwrap_or(default.wall_hours),
            args.baseline_date.unwrap_or(default.date),
        )
    }

    fn model(&self, args: &ModelArgs) -> Result<DoublingModel> {
        match args.doubling.or(self.config.doubling_months) {
            Some(p) => DoublingModel::new(p),
            None => Ok(DoublingModel::default()),
        }
    }

    fn records(&self) -> Result<Vec<FactoringRecord>> {
        match &self.records_file {
            Some(path) => load_records(&std::fs::read_to_string(path)?),
            None => Ok(bundled_records()),
        }
    }
}

fn effort_table(bits: &[u32]) -> Result<Table> {
    let mut t = Table::new(["bits", "ln_effort", "log10_effort", "effort", "security_bits"]);
    for &b in bits {
        let bl = BitLength::new(b)?;
        let e = l_effort(bl);
        t.push(vec![
            bl.into(),
            e.ln().into(),
            e.magnitude().log10().into(),
            e.magnitude().value().into(),
            security_bits(bl).into(),
        ]);
    }
    t.single = bits.len() == 1;
    Ok(t)
}

fn execute(cli: Cli) -> Result<Vec<Table>> {
    let config = match &cli.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| Error::input(format!("config {}: {e}", path.display())))?,
        None => ConfigFile::default(),
    };
    let ctx = Context {
        config,
        records_file: cli.records_file,
        seed: cli.seed,
    };

    let table = match cli.command {
        Command::Effort { bits } => effort_table(&bits)?,
        Command::Ratio { target, baseline } => {
            let r = effort_ratio(BitLength::new(target)?, BitLength::new(baseline)?);
            Table::record(
                &["target", "baseline", "ratio", "log10_ratio"],
                vec![target.into(), baseline.into(), r.value().into(), r.log10().into()],
            )
        }
        Command::Calibrate {
            hours_early,
            hours_late,
            months,
        } => {
            let m = calibrate_doubling(hours_early, hours_late, months)?;
            Table::record(
                &["hours_early", "hours_late", "months", "doubling_months"],
                vec![hours_early.into(), hours_late.into(), months.into(), m.period_months().into()],
            )
        }
        Command::Project { hours, months, model } => {
            let m = ctx.model(&model)?;
            Table::record(
                &["hours", "months", "doubling_months", "scale_factor", "doublings", "projected_hours"],
                vec![
                    hours.into(),
                    months.into(),
                    m.period_months().into(),
                    scale_factor(m, months).into(),
                    m.doublings(months).into(),
                    project_hours(hours, m, months).into(),
                ],
            )
        }
        Command::Estimate {
            bits,
            when,
            baseline,
            model,
        } => {
            let base = ctx.baseline(&baseline)?;
            let m = ctx.model(&model)?;
            let at = match (when.year, when.date) {
                (Some(y), _) => CalendarDate::year_start(y)?,
                (None, Some(d)) => d,
                (None, None) => base.date,
            };
            let mut t = Table::new(["bits", "date", "hours", "years", "log10_hours"]);
            for b in &bits {
                let e = break_time(BitLength::new(*b)?, at, &base, m);
                t.push(vec![
                    e.bits.into(),
                    at.to_string().into(),
                    e.hours_magnitude().value().into(),
                    e.years_magnitude().value().into(),
                    e.log10_hours().into(),
                ]);
            }
            t.single = bits.len() == 1;
            t
        }
        Command::MinBits {
            from,
            lifespan,
            margin,
            mode,
            round,
            baseline,
            model,
        } => {
            let base = ctx.baseline(&baseline)?;
            let m = ctx.model(&model)?;
            let q = SecurityQuery::new(from, lifespan)?
                .with_margin(margin)?
                .with_mode(mode.into());
            let out = min_bitlength(&q, &base, m)?;
            let recommended = if round {
                out.rounded.ok_or_else(|| {
                    Error::Unsatisfiable(format!("{} bits exceeds every conventional size", out.bits))
                })?
            } else {
                out.bits
            };
            Table::record(
                &[
                    "recommended_bits",
                    "minimum_bits",
                    "conventional_bits",
                    "mode",
                    "end_of_life",
                    "break_hours",
                    "break_years",
                    "log10_attacker_work",
                ],
                vec![
                    recommended.into(),
                    out.bits.into(),
                    out.rounded.into(),
                    q.mode.to_string().into(),
                    q.end_of_life()?.to_string().into(),
                    out.evidence.hours_magnitude().value().into(),
                    out.evidence.years_magnitude().value().into(),
                    out.attacker_work.map(|w| w.log10()).into(),
                ],
            )
        }
        Command::Levels {
            family,
            level,
            key_bits,
        } => match (family, level, key_bits) {
            (Some(f), Some(l), _) => Table::record(
                &["family", "level", "key_bits"],
                vec![f.name().into(), l.into(), security_level_lookup(f, l)?.into()],
            ),
            (Some(f), None, Some(k)) => Table::record(
                &["family", "key_bits", "level"],
                vec![f.name().into(), k.into(), security_level_for_key(f, k).into()],
            ),
            (Some(f), None, None) => {
                let mut t = Table::new(["family", "level", "key_bits"]);
                for l in crate::estimator::SECURITY_LEVELS {
                    t.push(vec![f.name().into(), l.into(), security_level_lookup(f, l)?.into()]);
                }
                t
            }
            _ => crate::tables::table1(),
        },
        Command::Policy { year } => Table::record(
            &["use_until_year", "minimum_bits"],
            vec![year.into(), policy_recommendation(year)?.into()],
        ),
        Command::Tables { which } => {
            let base = ctx.baseline(&BaselineArgs {
                baseline_bits: None,
                baseline_hours: None,
                baseline_date: None,
            })?;
            reference_table(which, &base, &ctx.records()?)?
        }
        Command::Records { action } => records_command(&ctx, action)?,
        Command::Rsa { action } => rsa_command(&ctx, action)?,
        Command::Bench { action } => return bench_command(&ctx, action),
    };
    Ok(vec![table])
}

fn records_command(ctx: &Context, action: RecordsAction) -> Result<Table> {
    let records = ctx.records()?;
    Ok(match action {
        RecordsAction::Load => {
            let mut t = Table::new(crate::records::HEADER);
            for r in &records {
                t.push(vec![
                    r.name.clone().into(),
                    r.bits.into(),
                    r.decimal_digits.into(),
                    r.date_factored.to_string().into(),
                    r.wall_hours.into(),
                    r.mips_years.into(),
                    r.algorithm.to_string().into(),
                ]);
            }
            t
        }
        RecordsAction::Fit => {
            let fit = fit_trend(&records)?;
            Table::record(
                &["a", "b", "t0", "r_squared", "points"],
                vec![
                    fit.a.into(),
                    fit.b.into(),
                    fit.t0.into(),
                    fit.r_squared.into(),
                    Cell::Int(fit.residuals.len() as i64),
                ],
            )
        }
        RecordsAction::Extrapolate { from, bits } => {
            let src = find_record(&records, &from)
                .ok_or_else(|| Error::input(format!("no record named {from:?}")))?;
            let target = BitLength::new(bits)?;
            let model = extrapolate_effort(src, target)?;
            let mut t = Table::new(["from", "target_bits", "model_mips_years", "published_target", "published_mips_years"]);
            let notes: Vec<_> = EXTRAPOLATION_NOTES
                .iter()
                .filter(|n| n.from.eq_ignore_ascii_case(&src.name))
                .filter(|n| {
                    find_record(&records, n.target).and_then(|r| r.bits) == Some(target)
                })
                .collect();
            if notes.is_empty() {
                t.push(vec![src.name.clone().into(), bits.into(), model.into(), Cell::Empty, Cell::Empty]);
                t.single = true;
            }
            for n in notes {
                t.push(vec![
                    src.name.clone().into(),
                    bits.into(),
                    model.into(),
                    n.target.into(),
                    n.mips_years.into(),
                ]);
            }
            t
        }
    })
}

fn big(v: &BigUint) -> Cell {
    Cell::Text(v.to_str_radix(10))
}

fn rsa_command(ctx: &Context, action: RsaAction) -> Result<Table> {
    Ok(match action {
        RsaAction::Keygen { bits } => {
            let k = keygen(bits, ctx.seed)?;
            Table::record(
                &["n", "e", "d", "p", "q"],
                vec![big(&k.n), big(&k.e), big(&k.d), big(&k.p), big(&k.q)],
            )
        }
        RsaAction::Encrypt { n, e, m } => {
            let c = encrypt(&PublicKey { n, e }, &m)?;
            Table::record(&["c"], vec![big(&c)])
        }
        RsaAction::Decrypt { n, d, c } => {
            let m = decrypt(&d, &n, &c)?;
            Table::record(&["m"], vec![big(&m)])
        }
        RsaAction::Break { n, e, budget } => {
            let r = break_key_with(&PublicKey { n, e }, ctx.seed, budget)?;
            Table::record(&["d", "p", "q"], vec![big(&r.d), big(&r.p), big(&r.q)])
        }
    })
}

fn bench_command(ctx: &Context, action: BenchAction) -> Result<Vec<Table>> {
    let BenchAction::Factor {
        sizes,
        trials,
        algorithm,
        budget,
        summary,
    } = action;
    let sizes = sizes
        .into_iter()
        .map(|b| {
            let limit = desk_scale_limit(algorithm);
            if b > limit {
                return Err(Error::input(format!("{b} bits exceeds the {algorithm} limit of {limit}")));
            }
            BitLength::new(b)
        })
        .collect::<Result<Vec<_>>>()?;
    let report = benchmark_factoring(
        &sizes,
        &BenchConfig {
            trials,
            algorithm,
            seed: ctx.seed,
            budget,
        },
    )?;
    let summary_json = serde_json::to_string_pretty(&report.summary()).expect("serializable");
    if let Some(path) = summary {
        std::fs::write(path, format!("{summary_json}\n"))?;
    }

    let mut samples = Table::new(["bits", "trial", "algorithm", "wall_seconds", "timeout"]);
    for s in &report.samples {
        samples.push(vec![
            s.bits.into(),
            s.trial.into(),
            s.algorithm.name().into(),
            s.wall_seconds.into(),
            s.timeout.to_string().into(),
        ]);
    }
    let mut fit = Table::record(
        &["slope", "r2", "sizes", "trials", "timeouts"],
        vec![
            report.fit.map(|f| f.slope).into(),
            report.fit.map(|f| f.r2).into(),
            report
                .medians
                .iter()
                .map(|m| m.bits.to_string())
                .collect::<Vec<_>>()
                .join(" ")
                .into(),
            trials.into(),
            Cell::Int(report.timeouts as i64),
        ],
    );
    fit.title = Some("Growth fit: ln(median seconds) against ln L(bits)".into());
    let mut medians = Table::new(["bits", "median_seconds", "completed"]);
    for m in &report.medians {
        medians.push(vec![m.bits.into(), m.median_seconds.into(), Cell::Int(m.completed as i64)]);
    }
    Ok(vec![samples, medians, fit])
}

fn render(tables: &[Table], format: OutputFormat) -> String {
    match format {
        // CSV carries the primary table only; JSON nests multi-table output.
        OutputFormat::Csv => tables[0].to_csv(),
        OutputFormat::Json if tables.len() > 1 => {
            let v = serde_json::json!({
                "samples": tables[0].to_json(),
                "medians": tables[1].to_json(),
                "summary": tables[2].to_json(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
        }
        _ => tables
            .iter()
            .map(|t| t.render(format))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

/// Runs one command; output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let format = OutputFormat::from(cli.format);
    match execute(cli) {
        Ok(tables) => {
            let _ = out.write_all(render(&tables, format).as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
