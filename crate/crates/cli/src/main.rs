//! `frm`: compute with finite frames, biframes, their assemblies and
//! Skula bispaces, and run the verification suites.
//!
//! Exit codes: 0 = success / all properties hold, 1 = invalid input or a
//! counterexample was found, 2 = usage error.

use clap::{Parser, Subcommand};
use frm_core::assembly::{assembly, AssemblyVariant};
use frm_core::axioms::{fit_verdict, pairwise_t1_verdict_of, subfit_verdict, AxiomVerdict};
use frm_core::biframe::finitary_assembly;
use frm_core::bispace::{bpt, skula_variant, SkulaVariant};
use frm_core::corpus::{enumerate_corpus, CorpusParams};
use frm_core::enumerate::enumerate_frames;
use frm_core::error::Error;
use frm_core::io::{
    biframe_from_doc, biframe_to_doc, bispace_from_doc, bispace_to_doc, congruence_from_doc,
    frame_from_doc, frame_to_doc, read_any, write_json, AnyDoc,
};
use frm_core::suite::{run_suite, SuiteParams, SUITES};
use frm_core::Caps;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "frm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a frame, congruence, biframe, or bispace file.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compute an assembly biframe of a biframe.
    Assembly {
        #[arg(long, default_value = "plain")]
        variant: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute the bispectrum of a biframe.
    Bpt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute a Skula bispace of a bispace.
    Skula {
        #[arg(long, default_value = "sk")]
        variant: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide the separation axioms of a biframe.
    Axioms {
        #[arg(long)]
        input: PathBuf,
        /// subfit, fit, or t1; all three when omitted.
        #[arg(long)]
        axiom: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite over the enumerated corpus.
    Verify {
        /// A suite name, or "all".
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_frame: Option<usize>,
        #[arg(long)]
        max_biframes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate corpus frames or biframes as JSON lines.
    Enumerate {
        /// "frames" or "biframes".
        #[arg(long, default_value = "frames")]
        kind: String,
        #[arg(long)]
        max_frame: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::UnknownSuite(_) | Error::BadInput(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let caps = Caps::from_env();
    match cli.command {
        Command::Check { input } => {
            let doc = read_any(&input)?;
            let verdict = match doc {
                AnyDoc::Frame(fd) => frame_from_doc(&fd).map(|f| {
                    format!("valid frame with {} elements", f.n())
                }),
                AnyDoc::Congruence(cd) => {
                    congruence_from_doc(&cd, input.parent()).map(|(f, c)| {
                        format!(
                            "valid congruence with {} classes on a frame with {} elements",
                            c.class_count(),
                            f.n()
                        )
                    })
                }
                AnyDoc::Biframe(bd) => biframe_from_doc(&bd).map(|b| {
                    format!(
                        "valid biframe (|plus|={}, |minus|={}, |main|={}{})",
                        b.plus().n(),
                        b.minus().n(),
                        b.main().n(),
                        if b.is_degenerate() { ", degenerate" } else { "" }
                    )
                }),
                AnyDoc::Bispace(xd) => bispace_from_doc(&xd).map(|x| {
                    format!("valid bispace with {} points", x.points())
                }),
            };
            match verdict {
                Ok(msg) => {
                    println!("{msg}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Assembly {
            variant,
            input,
            output,
        } => {
            let doc = match read_any(&input)? {
                AnyDoc::Biframe(bd) => bd,
                _ => return Err(Error::BadInput("assembly expects a biframe file".into())),
            };
            let b = biframe_from_doc(&doc)?;
            let v = AssemblyVariant::parse(&variant)?;
            let asm = assembly(&b, v, caps.assembly)?;
            let out = biframe_to_doc(&asm.biframe);
            emit(output.as_deref(), &out)?;
            eprintln!(
                "assembly ({}): main {} elements, plus side {}, minus side {}",
                v.name(),
                asm.afin.frame.n(),
                asm.plus_side.frame.n(),
                asm.minus_side.frame.n()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Bpt { input, output } => {
            let doc = match read_any(&input)? {
                AnyDoc::Biframe(bd) => bd,
                _ => return Err(Error::BadInput("bpt expects a biframe file".into())),
            };
            let b = biframe_from_doc(&doc)?;
            let spectrum = bpt(&b)?;
            emit(output.as_deref(), &bispace_to_doc(&spectrum.bispace))?;
            eprintln!("bispectrum has {} points", spectrum.points.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Skula {
            variant,
            input,
            output,
        } => {
            let doc = match read_any(&input)? {
                AnyDoc::Bispace(xd) => xd,
                _ => return Err(Error::BadInput("skula expects a bispace file".into())),
            };
            let x = bispace_from_doc(&doc)?;
            let v = SkulaVariant::parse(&variant)?;
            let out = skula_variant(&x, v);
            emit(output.as_deref(), &bispace_to_doc(&out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Axioms { input, axiom, json } => {
            let doc = match read_any(&input)? {
                AnyDoc::Biframe(bd) => bd,
                _ => return Err(Error::BadInput("axioms expects a biframe file".into())),
            };
            let b = biframe_from_doc(&doc)?;
            let afin = finitary_assembly(&b, caps.assembly)?;
            let which: Vec<&str> = match axiom.as_deref() {
                None => vec!["subfit", "fit", "t1"],
                Some("subfit") => vec!["subfit"],
                Some("fit") => vec!["fit"],
                Some("t1") => vec!["t1"],
                Some(other) => {
                    return Err(Error::BadInput(format!("unknown axiom: {other}")))
                }
            };
            let mut all_consistent = true;
            for w in which {
                let verdict: AxiomVerdict = match w {
                    "subfit" => subfit_verdict(&b, &afin),
                    "fit" => fit_verdict(&b, &afin)?,
                    "t1" => pairwise_t1_verdict_of(&b, caps.assembly)?,
                    _ => unreachable!(),
                };
                all_consistent &= verdict.consistent;
                if json {
                    println!("{}", serde_json::to_string(&verdict).unwrap());
                } else {
                    println!(
                        "{w}: {} (conditions {:?}{})",
                        if verdict.holds() { "holds" } else { "fails" },
                        verdict.condition_results,
                        if verdict.consistent {
                            ""
                        } else {
                            ", INCONSISTENT"
                        }
                    );
                }
            }
            Ok(if all_consistent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Verify {
            suite,
            max_frame,
            max_biframes,
            seed,
            jobs,
            json,
        } => {
            let mut params = SuiteParams {
                max_frame,
                jobs,
                caps,
                ..SuiteParams::default()
            };
            if let Some(m) = max_biframes {
                params.corpus.max_biframes = m;
            }
            if let Some(s) = seed {
                params.corpus.seed = s;
            }
            if let Some(mf) = max_frame {
                // Corpus sides above 6 make the coproduct sweep very
                // slow; larger bounds apply to the frame-level suites
                // only.
                params.corpus.max_side = mf.min(6);
            }
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut failed = false;
            for name in names {
                let start = Instant::now();
                let report = run_suite(name, &params)?;
                let elapsed = start.elapsed();
                if json {
                    println!("{}", serde_json::to_string(&report).unwrap());
                }
                eprintln!(
                    "suite {:<24} items {:>4} checks {:>7} failures {:>3} skipped {:>3}  ({:.2?})",
                    report.suite,
                    report.items,
                    report.checks,
                    report.failures.len(),
                    report.skipped.len(),
                    elapsed
                );
                for f in report.failures.iter().take(5) {
                    eprintln!("  counterexample: {} / {}: {}", f.item, f.property, f.witness);
                    eprintln!("  replay: {}", f.replay);
                }
                failed |= !report.passed();
            }
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Enumerate {
            kind,
            max_frame,
            seed,
        } => {
            match kind.as_str() {
                "frames" => {
                    for f in enumerate_frames(max_frame.unwrap_or(caps.frame))? {
                        println!("{}", serde_json::to_string(&frame_to_doc(&f)).unwrap());
                    }
                }
                "biframes" => {
                    let mut params = CorpusParams::default();
                    if let Some(mf) = max_frame {
                        params.max_side = mf;
                    }
                    if let Some(s) = seed {
                        params.seed = s;
                    }
                    for b in enumerate_corpus(&params, &caps)? {
                        println!("{}", serde_json::to_string(&biframe_to_doc(&b)).unwrap());
                    }
                }
                other => {
                    return Err(Error::BadInput(format!(
                        "unknown enumerate kind: {other} (expected frames or biframes)"
                    )))
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit<T: serde::Serialize>(path: Option<&std::path::Path>, value: &T) -> Result<(), Error> {
    match path {
        Some(p) => write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value).unwrap());
            Ok(())
        }
    }
}
