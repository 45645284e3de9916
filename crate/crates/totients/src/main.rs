use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use totients::density::{self, SetBitmap};
use totients::error::Error;
use totients::families::{gen_fermat, gen_k_max, gen_k_min, gen_r, CertifyOptions};
use totients::inverse_totient::{inverse_phi, n2, n3};
use totients::progressions::{erdos_scaling_test, longest_ap, longest_gp};
use totients::sparsely_totient::{n1_of, n1_set_up_to, safe_horizon, HorizonPolicy, PhiSieve};
use totients::{cache, verify};

#[derive(Parser)]
#[command(name = "totients", version, about = "Inverse totient sets, sparsely totient numbers, extremal families, and density/progression experiments", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Horizon policy for "nothing larger has small phi" certificates
    #[arg(long, global = true, value_enum, default_value_t = HorizonArg::Conservative)]
    horizon: HorizonArg,

    /// Sieve cache directory (falls back to TOTIENTS_CACHE_DIR, then the
    /// user cache directory)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Skip the sieve disk cache
    #[arg(long, global = true)]
    no_cache: bool,

    /// Memory budget for sieves and scans, in MiB
    #[arg(long, global = true, default_value_t = 1024)]
    memory_budget_mb: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum HorizonArg {
    Conservative,
    RosserSchoenfeld,
}

impl From<HorizonArg> for HorizonPolicy {
    fn from(a: HorizonArg) -> Self {
        match a {
            HorizonArg::Conservative => HorizonPolicy::Conservative,
            HorizonArg::RosserSchoenfeld => HorizonPolicy::RosserSchoenfeld,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    V,
    N1,
    N2,
    N3,
    Primes,
    Evens,
}

#[derive(Subcommand)]
enum Command {
    /// Euler's phi of N
    Phi { n: u64 },
    /// The complete solution set of phi(x) = M
    Invphi { m: u64 },
    /// N1(M): the largest x with phi(x) <= M
    N1 { m: u64 },
    /// N2(M): the largest solution of phi(x) = M
    N2 { m: u64 },
    /// N3(M): the smallest solution of phi(x) = M
    N3 { m: u64 },
    /// All sparsely totient numbers up to X
    N1set { x: u64 },
    /// Generate and certify a family element
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Window density report for a set over [1, range]
    Density {
        #[arg(value_enum)]
        set: SetKind,
        #[arg(long)]
        range: u64,
        #[arg(long)]
        window: u64,
    },
    /// Longest arithmetic progression in a set over [1, range]
    Ap {
        #[arg(value_enum)]
        set: SetKind,
        #[arg(long)]
        range: u64,
    },
    /// Longest geometric progression in a set over [1, range]
    Gp {
        #[arg(value_enum)]
        set: SetKind,
        #[arg(long)]
        range: u64,
        /// Also consider non-integer rational ratios
        #[arg(long)]
        rational_ratio: bool,
    },
    /// Run a named verification suite
    Verify {
        suite: String,
        /// Scale parameter; suite-specific default
        #[arg(long)]
        max: Option<u64>,
    },
    /// Scan (m, p) pairs for the preimage-scaling identity
    ErdosScan {
        #[arg(long)]
        mmax: u64,
        #[arg(long)]
        pmax: u64,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// K_{q,r} = 2q^(r+1), certified in N2
    Kmax { q: u64, r: u32 },
    /// k_{q,r}, certified in N3
    Kmin { q: u64, r: u32 },
    /// R(r1,r2) = 2 * 3^r1 * 5^r2, certified in N2
    R { r1: u32, r2: u32 },
    /// 2^a * F_1..F_k over the Fermat primes, certified in N2
    Fermat { k: u32, a: u32 },
}

struct TableData {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TableData {
    fn fields(pairs: Vec<(&str, String)>) -> Self {
        TableData {
            header: vec!["field".into(), "value".into()],
            rows: pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect(),
        }
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

// Quiet exit when the consumer (head, etc.) closes the pipe early.
fn print_line(line: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn emit(format: Format, json: String, table: TableData) {
    match format {
        Format::Json => print_line(&json),
        Format::Csv => {
            let line = |row: &[String]| row.iter().map(|f| csv_quote(f)).collect::<Vec<_>>().join(",");
            print_line(&line(&table.header));
            for row in &table.rows {
                print_line(&line(row));
            }
        }
        Format::Table => {
            let mut widths: Vec<usize> = table.header.iter().map(|h| h.len()).collect();
            for row in &table.rows {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let fmt_row = |row: &[String]| {
                row.iter()
                    .enumerate()
                    .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            print_line(&fmt_row(&table.header));
            for row in &table.rows {
                print_line(&fmt_row(row));
            }
        }
    }
}

fn json_of<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string(value).map_err(|e| Error::Domain(format!("serialization failed: {e}")))
}

fn build_set(kind: SetKind, range: u64, policy: HorizonPolicy) -> Result<SetBitmap, Error> {
    match kind {
        SetKind::V => SetBitmap::totients(range, policy),
        SetKind::N1 => SetBitmap::n1(range, policy),
        SetKind::N2 => SetBitmap::n2(range),
        SetKind::N3 => SetBitmap::n3(range),
        SetKind::Primes => SetBitmap::primes(range),
        SetKind::Evens => Ok(SetBitmap::evens(range)),
    }
}

fn sieve_for(m: u64, cli: &Cli) -> Result<PhiSieve, Error> {
    let policy: HorizonPolicy = cli.horizon.into();
    let horizon = safe_horizon(m, policy)?;
    let budget = cli.memory_budget_mb.saturating_mul(1 << 20);
    if cli.no_cache {
        PhiSieve::build_with_budget(horizon, budget)
    } else {
        cache::load_or_build(&cache::cache_dir(cli.cache_dir.as_deref()), horizon, budget)
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    if cli.memory_budget_mb == 0 {
        return Err(Error::Domain("memory budget must be positive".into()));
    }
    let policy: HorizonPolicy = cli.horizon.into();
    let format = cli.format;
    match &cli.command {
        Command::Phi { n } => {
            let phi = totients::arith::euler_phi(*n)?;
            emit(
                format,
                json_of(&json!({"n": n, "phi": phi}))?,
                TableData::fields(vec![("n", n.to_string()), ("phi", phi.to_string())]),
            );
        }
        Command::Invphi { m } => {
            let pre = inverse_phi(*m)?;
            let mut pairs = vec![
                ("m", m.to_string()),
                (
                    "solutions",
                    pre.solutions().iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
                ),
            ];
            if let (Some(hi), Some(lo)) = (pre.n2(), pre.n3()) {
                pairs.push(("n2", hi.to_string()));
                pairs.push(("n3", lo.to_string()));
            }
            emit(format, json_of(&pre)?, TableData::fields(pairs));
        }
        Command::N1 { m } => {
            let sieve = sieve_for(*m, cli)?;
            let n1 = n1_of(*m, &sieve, policy)?;
            emit(
                format,
                json_of(&json!({"m": m, "n1": n1}))?,
                TableData::fields(vec![("m", m.to_string()), ("n1", n1.to_string())]),
            );
        }
        Command::N2 { m } => {
            let v = n2(*m)?;
            emit(
                format,
                json_of(&json!({"m": m, "n2": v}))?,
                TableData::fields(vec![("m", m.to_string()), ("n2", v.to_string())]),
            );
        }
        Command::N3 { m } => {
            let v = n3(*m)?;
            emit(
                format,
                json_of(&json!({"m": m, "n3": v}))?,
                TableData::fields(vec![("m", m.to_string()), ("n3", v.to_string())]),
            );
        }
        Command::N1set { x } => {
            let records = n1_set_up_to(*x, policy)?;
            let table = TableData {
                header: vec!["n".into(), "m".into(), "certified_by".into()],
                rows: records
                    .iter()
                    .map(|r| vec![r.n.to_string(), r.m.to_string(), format!("{:?}", r.certified_by)])
                    .collect(),
            };
            emit(
                format,
                json_of(&json!({"x": x, "count": records.len(), "records": records}))?,
                table,
            );
        }
        Command::Family(fam) => {
            let opts = CertifyOptions {
                sieve_budget_bytes: cli.memory_budget_mb.saturating_mul(1 << 20),
                ..CertifyOptions::default()
            };
            let cert = match *fam {
                FamilyCommand::Kmax { q, r } => gen_k_max(q, r, &opts)?,
                FamilyCommand::Kmin { q, r } => gen_k_min(q, r, &opts)?,
                FamilyCommand::R { r1, r2 } => gen_r(r1, r2, &opts)?,
                FamilyCommand::Fermat { k, a } => gen_fermat(k, a, &opts)?,
            };
            let table = TableData::fields(vec![
                ("element", cert.element.to_string()),
                ("family", format!("{:?}", cert.family)),
                ("m", cert.m.to_string()),
                ("verdict", cert.verdict().to_string()),
                ("method", format!("{:?}", cert.method)),
                ("in_n1", format!("{:?}", cert.in_n1)),
                ("conditional", cert.conditional.to_string()),
            ]);
            emit(format, json_of(&cert)?, table);
        }
        Command::Density { set, range, window } => {
            let bitmap = build_set(*set, *range, policy)?;
            let report = density::density_report(&bitmap, *range, *window)?;
            let table = TableData {
                header: vec!["start".into(), "length".into(), "count".into(), "density".into()],
                rows: report
                    .windows
                    .iter()
                    .map(|w| {
                        vec![
                            w.window.start.to_string(),
                            w.window.length.to_string(),
                            w.count.to_string(),
                            w.density.to_string(),
                        ]
                    })
                    .collect(),
            };
            emit(format, json_of(&report)?, table);
        }
        Command::Ap { set, range } => {
            let bitmap = build_set(*set, *range, policy)?;
            let members: Vec<u64> = (1..=*range).filter(|&n| bitmap.contains(n)).collect();
            let rec = longest_ap(&members)?;
            let table = TableData::fields(vec![
                ("kind", "ap".into()),
                ("first", rec.first.to_string()),
                ("step", rec.step_or_ratio.to_string()),
                ("length", rec.length.to_string()),
                ("elements", rec.elements.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
            ]);
            emit(format, json_of(&rec)?, table);
        }
        Command::Gp { set, range, rational_ratio } => {
            let bitmap = build_set(*set, *range, policy)?;
            let members: Vec<u64> = (1..=*range).filter(|&n| bitmap.contains(n)).collect();
            let rec = longest_gp(&members, *rational_ratio)?;
            let table = TableData::fields(vec![
                ("kind", "gp".into()),
                ("first", rec.first.to_string()),
                ("ratio", rec.step_or_ratio.to_string()),
                ("length", rec.length.to_string()),
                ("elements", rec.elements.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
            ]);
            emit(format, json_of(&rec)?, table);
        }
        Command::Verify { suite, max } => {
            let report = verify::run_suite(suite, *max)?;
            match format {
                Format::Json => print_line(&json_of(&report)?),
                _ => {
                    for c in &report.checks {
                        let tag = if c.pass { "PASS" } else { "FAIL" };
                        print_line(&format!("[{tag}] {} - {}", c.name, c.detail));
                    }
                }
            }
            if !report.all_pass() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::ErdosScan { mmax, pmax } => {
            let primes: Vec<u64> = totients::arith::primes_up_to(*pmax)?;
            let mut rows = Vec::new();
            for m in 1..=*mmax {
                if inverse_phi(m)?.multiplicity() != 2 {
                    continue;
                }
                for &p in &primes {
                    match erdos_scaling_test(m, p) {
                        Ok(verdict) => rows.push((m, p, verdict)),
                        Err(Error::Budget { .. }) => continue,
                        Err(e) => return Err(e),
                    }
                }
            }
            let true_count = rows.iter().filter(|r| r.2).count();
            let json = json!({
                "mmax": mmax,
                "pmax": pmax,
                "pairs": rows.iter().map(|&(m, p, v)| json!({"m": m, "p": p, "verdict": v})).collect::<Vec<_>>(),
                "true_count": true_count,
                "false_count": rows.len() - true_count,
            });
            let table = TableData {
                header: vec!["m".into(), "p".into(), "verdict".into()],
                rows: rows
                    .iter()
                    .map(|&(m, p, v)| vec![m.to_string(), p.to_string(), v.to_string()])
                    .collect(),
            };
            emit(format, json_of(&json)?, table);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
