use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use embedkit::current::{parse_current_graph, write_current_graph, CurrentGraph};
use embedkit::derived::derive;
use embedkit::families::{build, Case, FamilyError};
use embedkit::pipelines::{sweep, verdict_line, PipelineError, RunOptions};
use embedkit::surface::{euler_genus, parse_rotations, write_faces, write_rotations, EmbeddedGraph};

#[derive(Parser)]
#[command(name = "embedkit", version, about = "Check current graphs and build minimum genus embeddings of complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the construction principles of a current graph
    Check { path: PathBuf },
    /// Print the log of an index-1 current graph
    Log { path: PathBuf },
    /// Write the derived embedding of a current graph as a rotation system
    Derive {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the current graph of a family member
    Construct {
        #[arg(long)]
        case: Case,
        #[arg(long)]
        s: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report vertex, edge and face counts and the genus of a rotation system
    Genus { path: PathBuf },
    /// List the faces of a rotation system
    Faces { path: PathBuf },
    /// Run the full construction for a range of s and print one verdict per s
    Sweep {
        #[arg(long)]
        case: Case,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        /// Write the final embedding and step trace of each run here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the embedding after every step (needs --out)
        #[arg(long, requires = "out")]
        emit_snapshots: bool,
    },
}

enum Failure {
    /// Bad input: unreadable file, parse error, parameter out of range.
    Input(String),
    /// Input was fine but failed a check.
    Verify(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Input(m) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
            Failure::Verify(m) => {
                if !m.is_empty() {
                    eprintln!("{m}");
                }
                ExitCode::from(1)
            }
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_current(path: &Path) -> Result<CurrentGraph, Failure> {
    parse_current_graph(&read(path)?).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

fn read_rotations(path: &Path) -> Result<EmbeddedGraph, Failure> {
    parse_rotations(&read(path)?).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn family_error(e: FamilyError) -> Failure {
    match e {
        FamilyError::Range { .. } => Failure::Input(e.to_string()),
        e => Failure::Verify(e.to_string()),
    }
}

fn check(path: &Path) -> Outcome {
    let report = read_current(path)?.check_principles();
    print!("{report}");
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Verify(String::new()))
    }
}

fn log(path: &Path) -> Outcome {
    let log = read_current(path)?.trace_log().map_err(|e| Failure::Verify(e.to_string()))?;
    println!("{log}");
    Ok(())
}

fn derive_cmd(path: &Path, output: Option<&Path>) -> Outcome {
    let d = derive(&read_current(path)?).map_err(|e| Failure::Verify(e.to_string()))?;
    emit(&write_rotations(&d.emb), output)?;
    if output.is_some() {
        let r = euler_genus(&d.emb).map_err(|e| Failure::Verify(e.to_string()))?;
        println!("{r}");
    }
    Ok(())
}

fn sweep_cmd(case: Case, from: u32, to: u32, out: Option<&Path>, snapshots: bool) -> Outcome {
    if from > to {
        return Err(Failure::Input(format!("empty range {from}..={to}")));
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    }
    let runs = sweep(case, from, to, RunOptions { snapshots }).map_err(family_error)?;
    let mut failed = 0;
    for (s, run) in runs {
        match run {
            Ok(r) => {
                println!("{}", r.verdict());
                if let Some(dir) = out {
                    let stem = dir.join(format!("case{case}_s{s}"));
                    let write = |ext: &str, text: &str| {
                        let p = stem.with_extension(ext);
                        fs::write(&p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
                    };
                    write("rot", &write_rotations(&r.final_graph))?;
                    write("trace", &r.trace())?;
                    for (k, snap) in r.snapshots.iter().enumerate() {
                        write(&format!("step{:02}.rot", k + 1), snap)?;
                    }
                }
            }
            Err(e) => {
                failed += 1;
                let genus = match &e {
                    PipelineError::Ledger { fin, .. } => Some(*fin),
                    _ => None,
                };
                let at = e.step().map(|k| format!(" at step {k}")).unwrap_or_default();
                println!("{}{at}: {e}", verdict_line(case, s, genus, false));
            }
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verify(format!("{failed} run(s) failed")))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { path } => check(&path),
        Command::Log { path } => log(&path),
        Command::Derive { path, output } => derive_cmd(&path, output.as_deref()),
        Command::Construct { case, s, output } => {
            let cg = build(case, s).map_err(family_error)?;
            emit(&write_current_graph(&cg), output.as_deref())
        }
        Command::Genus { path } => {
            let r = euler_genus(&read_rotations(&path)?).map_err(|e| Failure::Verify(e.to_string()))?;
            println!("{r}");
            Ok(())
        }
        Command::Faces { path } => {
            print!("{}", write_faces(&read_rotations(&path)?));
            Ok(())
        }
        Command::Sweep { case, from, to, out, emit_snapshots } => {
            sweep_cmd(case, from, to, out.as_deref(), emit_snapshots)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
