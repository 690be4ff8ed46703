use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use pldpc::campaign::{run_campaign, Campaign};
use pldpc::formats::{alist, construction_log, shift_table};
use pldpc::Result;
use pldpc_core::analytics::{min_nodes, siso_rayleigh_ber, uncoded_dtb_ber};
use pldpc_core::optimizer::{construct, CgaParams, CodeSpec};
use pldpc_core::tanner::{self, TannerGraph};
use pldpc_core::Rate;

#[derive(Parser)]
#[command(name = "pldpc", version, about = "Protograph QC-LDPC codes for distributed beamforming links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write `<prefix>.shifts`, `<prefix>.alist` and `<prefix>.log.csv`
    Construct {
        /// Transmitted block length in bits
        #[arg(long)]
        n: usize,
        /// Code rate, as `p/q` or a decimal
        #[arg(long)]
        rate: Rate,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail unless this girth is reached
        #[arg(long)]
        girth_target: Option<u32>,
        #[arg(long)]
        out_prefix: PathBuf,
        #[arg(long, default_value_t = CgaParams::default().max_evaluations)]
        max_evaluations: usize,
        #[arg(long, default_value_t = CgaParams::default().restarts)]
        restarts: usize,
    },
    /// Girth and shortest-cycle count of an alist matrix
    Girth {
        #[arg(long)]
        alist: PathBuf,
        /// Longest cycle to look for; 0 searches without a cap
        #[arg(long, default_value_t = 0)]
        max_len: u32,
    },
    /// Run a Monte Carlo campaign file
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the campaign's worker count
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Asymptotic uncoded BER table
    Analytic {
        #[arg(long, value_delimiter = ',', required = true)]
        m_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        ebn0_list: Vec<f64>,
    },
    /// Fewest uncoded nodes that reach a target BER
    MinNodes {
        #[arg(long, allow_hyphen_values = true)]
        ebn0: f64,
        #[arg(long)]
        target_ber: f64,
    },
    /// Single-antenna Rayleigh BER table
    Siso {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        ebn0_list: Vec<f64>,
    },
}

fn with_suffix(prefix: &std::path::Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Construct {
            n,
            rate,
            seed,
            girth_target,
            out_prefix,
            max_evaluations,
            restarts,
        } => {
            let params = CgaParams {
                max_evaluations,
                restarts,
                ..CgaParams::default()
            };
            let spec = CodeSpec {
                n,
                rate,
                seed,
                girth_target,
            };
            let start = Instant::now();
            let c = construct(&spec, &params)?;
            shift_table::write(&with_suffix(&out_prefix, ".shifts"), &c.code)?;
            alist::write(&with_suffix(&out_prefix, ".alist"), c.code.matrix())?;
            construction_log::write(&with_suffix(&out_prefix, ".log.csv"), &c.log)?;
            println!("lifting {}", c.code.lifting());
            println!("n_tx {}", c.code.n_tx());
            println!("k {}", c.code.k());
            println!("rate {}", c.code.rate());
            println!("girth {}", c.fitness.girth);
            println!("multiplicity {}", c.fitness.multiplicity());
            println!("evaluations {}", c.log.len());
            log::info!("construction took {:.2?}", start.elapsed());
        }
        Command::Girth { alist: path, max_len } => {
            let g = TannerGraph::from_parity_check(&alist::read(&path)?);
            let start = Instant::now();
            let mut report = if max_len == 0 {
                tanner::girth(&g)
            } else {
                tanner::girth_capped(&g, max_len)?
            };
            report.elapsed = start.elapsed();
            println!("girth,multiplicity,elapsed");
            println!(
                "{},{},{:.6}",
                report.girth,
                report.multiplicity,
                report.elapsed.as_secs_f64()
            );
        }
        Command::Simulate { config, workers } => {
            let mut c = Campaign::load(&config)?;
            if let Some(w) = workers {
                c.workers = w;
            }
            let records = run_campaign(&c)?;
            for r in &records {
                let note = if r.upper_bound_only() { " (upper bound only)" } else { "" };
                eprintln!(
                    "{} M={} {} dB: ber {:.3e}, fer {:.3e}, {} frames{note}",
                    r.code_id, r.nodes, r.ebn0_db, r.ber, r.fer, r.frames
                );
            }
            if c.out.is_none() {
                println!("{}", pldpc::campaign::CSV_HEADER);
                for r in &records {
                    println!("{}", r.csv_row());
                }
            }
        }
        Command::Analytic { m_list, ebn0_list } => {
            if m_list.contains(&0) {
                return Err(pldpc_core::Error::InvalidInput("node counts must be positive".into()).into());
            }
            // Asymptotic in M; small M is only indicative.
            println!("M,ebn0_db,ber");
            for &m in &m_list {
                for &e in &ebn0_list {
                    println!("{m},{e},{:.6e}", uncoded_dtb_ber(m, e));
                }
            }
        }
        Command::MinNodes { ebn0, target_ber } => {
            if !(target_ber > 0.0 && target_ber < 0.5) || !ebn0.is_finite() {
                return Err(pldpc_core::Error::InvalidInput(
                    "target BER must lie in (0, 0.5) and Eb/N0 must be finite".into(),
                )
                .into());
            }
            println!("{}", min_nodes(ebn0, target_ber));
        }
        Command::Siso { ebn0_list } => {
            println!("ebn0_db,ber");
            for &e in &ebn0_list {
                println!("{e},{:.6e}", siso_rayleigh_ber(e));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
