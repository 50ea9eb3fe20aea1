//! `hmf`: build, query, cross-check and summarize eigenform databases.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hmf::analysis::{detect_base_change, hecke_field_stats};
use hmf::db::query::{to_csv, to_table};
use hmf::db::{build_database, crosscheck_pnew, read_database, spot_check, write_database, FieldConfig, Query};
use hmf::Error;

#[derive(Parser)]
#[command(name = "hmf", version, about = "Hilbert modular forms by the definite method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every level in a norm range and write the database.
    Build {
        /// Field configuration file.
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_norm: i64,
        #[arg(long)]
        max_norm: i64,
        #[arg(long, default_value_t = 50)]
        prime_bound: i64,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the run report (stderr otherwise).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Rational database for heuristic base-change matching.
        #[arg(long)]
        rational_db: Option<PathBuf>,
    },
    /// Filter a database with key=value terms (field, norm, disc, dim, cm, bc).
    Query {
        #[arg(long)]
        db: PathBuf,
        filters: Vec<String>,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Compare the eigensystems of level N from the algebras ramified at p and at q.
    Crosscheck {
        #[arg(long)]
        level: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long, default_value_t = 50)]
        prime_bound: i64,
    },
    /// Hecke-field discriminant histogram.
    Stats {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        histogram_out: Option<PathBuf>,
    },
    /// Recompute random stored eigenvalues.
    Spotcheck {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(_) | Error::Enumeration(_) | Error::Linalg(_) | Error::NotMaximal { .. } => {
                Failure::Verification(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Build { field, min_norm, max_norm, prime_bound, out, report, rational_db } => {
            let cfg = FieldConfig::load(&field)?;
            let mut built = build_database(&cfg, min_norm, max_norm, prime_bound)?;
            if let Some(path) = rational_db {
                let rational = read_database(&read(&path)?)?;
                for r in &mut built.records {
                    r.base_change = detect_base_change(&cfg.field, r, Some(&rational))?;
                }
            }
            write(&out, &write_database(&built.records))?;
            match report {
                Some(p) => write(&p, &built.report)?,
                None => eprint!("{}", built.report),
            }
        }
        Command::Query { db, filters, count, csv } => {
            let q = Query::parse(&filters)?;
            let records = read_database(&read(&db)?)?;
            let hits = q.run(&records);
            if count {
                println!("{}", hits.len());
            } else if csv {
                print!("{}", to_csv(&hits));
            } else {
                print!("{}", to_table(&hits));
            }
        }
        Command::Crosscheck { level, p, q, prime_bound } => {
            let rep = crosscheck_pnew(level, p, q, prime_bound)?;
            print!("{}", rep.render());
            if !rep.passed() {
                return Err(Failure::Verification("eigensystems differ".into()));
            }
        }
        Command::Stats { db, histogram_out } => {
            let records = read_database(&read(&db)?)?;
            let stats = hecke_field_stats(&records);
            print!("{}", stats.report());
            match histogram_out {
                Some(p) => write(&p, &stats.to_csv())?,
                None => print!("{}", stats.to_csv()),
            }
        }
        Command::Spotcheck { db, field, samples, seed } => {
            let cfg = FieldConfig::load(&field)?;
            let records = read_database(&read(&db)?)?;
            let checks = spot_check(&cfg, &records, samples, seed)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                println!("{} {} {}", if c.passed { "ok" } else { "FAIL" }, c.record, c.prime);
            }
            println!("{} checked, {failed} failed", checks.len());
            if failed > 0 {
                return Err(Failure::Verification(format!("{failed} stored eigenvalues did not verify")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(2)
        }
    }
}
