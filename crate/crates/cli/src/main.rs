use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand};

use geomrec_core::driver::{classify, read_presentation, run_corpus, ClassifyOptions};
use geomrec_core::hyperbolic::{emit_repvar_polynomials, AlgebraicRep};
use geomrec_core::nilpotent::nq2;
use geomrec_core::{abelianization, low_index_subgroups, rs_presentation, OracleSpec, PromiseSet};

#[derive(Parser)]
#[command(name = "geomrec", version, about = "Recognize 3-manifold geometries from group presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all membership and non-membership searchers on a presentation.
    Classify {
        file: PathBuf,
        /// free, abelian[:rows], finite:N, self, pc:FILE or surface:G,E
        #[arg(long)]
        oracle: String,
        /// torsion-free or three-manifold; may be repeated
        #[arg(long = "promise")]
        promises: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// JSON list of SL(2) representations for the hyperbolic side
        #[arg(long)]
        reps: Option<PathBuf>,
        /// The supplied representations cover every candidate.
        #[arg(long, requires = "reps")]
        reps_complete: bool,
        #[arg(long)]
        json: bool,
    },
    /// Classify every row of a manifest and compare with the expected verdicts.
    Corpus { manifest: PathBuf },
    /// Decide whether a word is trivial.
    Wp {
        file: PathBuf,
        #[arg(long)]
        oracle: String,
        word: String,
    },
    /// Conjugacy classes of subgroups of index at most K.
    Subgroups {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        index: usize,
        /// Print the subgroup presentations.
        #[arg(long)]
        presentations: bool,
    },
    /// Abelian invariants of the group.
    Abelianize { file: PathBuf },
    /// Class-2 nilpotent quotient data.
    Nq2 { file: PathBuf },
    /// Polynomial system of the SL(2) representation variety.
    Repvar { file: PathBuf },
}

fn oracle_base(file: &Path) -> Option<&Path> {
    file.parent()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify {
            file,
            oracle,
            promises,
            budget,
            reps,
            reps_complete,
            json,
        } => {
            let p = read_presentation(&file)?;
            let spec = OracleSpec::parse(&oracle)?;
            let mut set = PromiseSet::sound();
            for name in &promises {
                set.add(name)?;
            }
            let reps = match reps {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let reps: Vec<AlgebraicRep> = serde_json::from_str(&text).context("parsing representations")?;
                    Some((reps, reps_complete))
                }
                None => None,
            };
            let options = ClassifyOptions {
                promises: set,
                budget,
                reps,
                base: oracle_base(&file).map(Path::to_path_buf),
            };
            let report = classify(&p, &spec, &options)?;
            if json {
                println!("{}", report.to_json());
            } else {
                println!("{report}");
            }
            Ok(ExitCode::from(report.overall.exit_code() as u8))
        }
        Command::Corpus { manifest } => {
            let outcome = run_corpus(&manifest)?;
            println!("{outcome}");
            Ok(ExitCode::from(outcome.exit_code() as u8))
        }
        Command::Wp { file, oracle, word } => {
            let p = read_presentation(&file)?;
            let o = OracleSpec::parse(&oracle)?.build(&p, oracle_base(&file))?;
            let w = p.parse_word(&word)?;
            println!("{}", if o.decide(&w)? == geomrec_core::Decision::Trivial { "trivial" } else { "nontrivial" });
            Ok(ExitCode::SUCCESS)
        }
        Command::Subgroups {
            file,
            index,
            presentations,
        } => {
            if index == 0 {
                bail!("index must be positive");
            }
            let p = read_presentation(&file)?;
            let tables = low_index_subgroups(&p, index)?;
            for k in 1..=index {
                let n = tables.iter().filter(|t| t.index() == k).count();
                println!("index {k}: {n} classes");
            }
            if presentations {
                for t in &tables {
                    let r = rs_presentation(&p, t)?;
                    println!("[{}] {}", t.index(), r.presentation);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Abelianize { file } => {
            println!("{}", abelianization(&read_presentation(&file)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Nq2 { file } => {
            let d = nq2(&read_presentation(&file)?);
            println!("H1:      {}", d.h1);
            println!("gamma2:  {}", d.gamma2);
            println!("hirsch:  {}", d.hirsch);
            for (i, row) in d.structure.iter().enumerate() {
                for (j, c) in row.iter().enumerate().skip(i + 1) {
                    if c.iter().any(|&x| x != 0) {
                        println!("[x{i},x{j}] = {c:?}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Repvar { file } => {
            print!("{}", emit_repvar_polynomials(&read_presentation(&file)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
