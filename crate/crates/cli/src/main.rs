use clap::{Parser, Subcommand};
use cubic_torsion::curves::{discriminant_curve, square_factor, validate_map, Corpus};
use cubic_torsion::sieve::CertifyConfig;
use cubic_torsion::verdicts::scan_family;
use cubic_torsion_cli::{emit_reproduction_report, run_corpus, verify_file, RunConfig, OUT_DIR_ENV};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cubic-torsion", version, about = "Certified rational points on discriminant curves of degree-3 maps on X1(16) and X1(20)")]
struct Cli {
    /// Corpus file (TOML); the built-in corpus by default.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Output directory; overrides $CUBIC_TORSION_OUT (default: ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus checks.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Certify the rational points of one or all curves and write the certificates.
    Certify {
        #[arg(long)]
        curve: Option<String>,
        /// Certification parameters (TOML); the built-in configuration by default.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Re-verify a certificate from scratch.
    Verify { cert: PathBuf },
    /// Classify the fiber fields K_t of a map for t up to a height bound.
    Scan {
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 50)]
        height: u64,
    },
    /// Certify everything and print the reproduction table.
    Report {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Check every map and that each printed curve is its discriminant curve up to a square.
    Validate,
}

/// Failure of a requested check (exit 1) versus bad configuration (exit 2).
enum Failure {
    Check,
    Config(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.into())
    }
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out.clone().or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"))
}

fn load_corpus(cli: &Cli) -> anyhow::Result<Corpus> {
    Ok(match &cli.corpus {
        Some(p) => Corpus::load(p)?,
        None => Corpus::default_corpus()?,
    })
}

fn run_config(cli: &Cli, config: &Option<PathBuf>, curve: Option<String>, jobs: usize) -> anyhow::Result<RunConfig> {
    let certify = match config {
        Some(p) => CertifyConfig::load(p)?,
        None => CertifyConfig::default_config()?,
    };
    let mut rc = RunConfig::new(load_corpus(cli)?, certify);
    rc.curves = curve.into_iter().collect();
    rc.out_dir = Some(out_dir(cli));
    rc.jobs = jobs;
    Ok(rc)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Corpus { action: CorpusAction::Validate } => {
            let corpus = load_corpus(cli)?;
            let mut ok = true;
            for m in &corpus.maps {
                let valid = validate_map(m)?;
                println!("map {:<6} {}", m.id, if valid { "valid" } else { "INVALID" });
                ok &= valid;
            }
            for rec in &corpus.curves {
                let m = corpus.map(&rec.map).ok_or_else(|| anyhow::anyhow!("{}: map {} missing", rec.id, rec.map))?;
                let same = discriminant_curve(m).map(|h| square_factor(&rec.model.d, &h.d).is_some()).unwrap_or(false);
                println!("curve {:<6} {}", rec.id, if same { "matches its discriminant curve" } else { "DIFFERS from its discriminant curve" });
                ok &= same;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Certify { curve, config, jobs } => {
            let rc = run_config(cli, config, curve.clone(), *jobs)?;
            let out = run_corpus(&rc)?;
            for c in &out.curves {
                match (&c.certificate, &c.error) {
                    (Some(cert), None) if c.verification_failures.is_empty() => {
                        let pts: Vec<String> = cert.claimed_points.iter().map(|p| p.to_string()).collect();
                        println!("{}: {{{}}} ({:.1}s)", c.id, pts.join(", "), c.seconds);
                    }
                    _ => {
                        let mut why: Vec<String> = c.error.iter().cloned().collect();
                        why.extend(c.verification_failures.iter().cloned());
                        println!("{}: FAILED: {}", c.id, why.join("; "));
                    }
                }
            }
            if let Some(dir) = &rc.out_dir {
                println!("certificates written to {}", dir.display());
            }
            if out.all_passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Verify { cert } => {
            let failures = verify_file(cert)?;
            if failures.is_empty() {
                println!("{}: valid", cert.display());
                Ok(())
            } else {
                for f in &failures {
                    println!("{}: {f}", cert.display());
                }
                Err(Failure::Check)
            }
        }
        Command::Scan { map, height } => {
            let corpus = load_corpus(cli)?;
            let m = corpus.map(map).ok_or_else(|| anyhow::anyhow!("unknown map {map}"))?;
            let report = scan_family(m, *height)?;
            let dir = out_dir(cli);
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(format!("scan_{map}_h{height}.csv"));
            std::fs::write(&path, report.to_csv())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            println!("rows written to {}", path.display());
            if report.first_complex_witness.is_some() && report.first_real_nonsquare_witness.is_some() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Report { config, jobs } => {
            let mut rc = run_config(cli, config, None, *jobs)?;
            rc.out_dir = None;
            let out = run_corpus(&rc)?;
            print!("{}", emit_reproduction_report(&out));
            if out.all_passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
