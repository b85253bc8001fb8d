use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pmod_core::coxeter::CoxeterSystem;
use pmod_core::garside;
use pmod_core::mcg::{gervais_presentation, ComputableGroup, McgError, SurfaceTriple};
use pmod_core::verify::{self, Certificate, DEFAULT_BOUND, MAX_BOUND};
use pmod_core::word::parse_word_sugared;

#[derive(Parser)]
#[command(name = "pmod", version, about = "Certificates for low-genus pure mapping class groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Copy)]
struct TripleArgs {
    #[arg(long = "g")]
    g: u32,
    #[arg(long = "b")]
    b: u32,
    #[arg(long = "n")]
    n: u32,
}

impl TripleArgs {
    fn triple(self) -> SurfaceTriple {
        SurfaceTriple::new(self.g, self.b, self.n)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run certificates.
    Verify {
        #[command(subcommand)]
        what: VerifyTarget,
    },
    /// Garside normal form of a braid word.
    Nf {
        /// b2..b6 (atoms s1..), b4g (atoms a1 b a2) or d4 (atoms a1 a2 a3 b).
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
    },
    /// Matrix representation of a table row.
    Rep {
        #[command(flatten)]
        triple: TripleArgs,
    },
    /// Abelian invariants of a row and of its target.
    Abelianize {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
    },
    /// Presentation of a row (Gervais form for genus one).
    PrintPresentation {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    All {
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
    },
    Row {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
    },
    Eq4,
    Eq5,
    Stars,
    Centers,
    Ht,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<McgError> for Failure {
    fn from(e: McgError) -> Self {
        match e {
            McgError::Unsupported(_) | McgError::Malformed(_) | McgError::Word(_) | McgError::NotCentral { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
    pass: bool,
}

fn check_bound(bound: u32) -> Result<(), Failure> {
    if !(2..=MAX_BOUND).contains(&bound) {
        return Err(Failure::Usage(format!("--bound must lie in 2..={MAX_BOUND}")));
    }
    Ok(())
}

fn certificates(certs: Vec<Certificate>) -> Output {
    let pass = certs.iter().all(Certificate::passed);
    let mut text: String = certs.iter().map(Certificate::render_text).collect();
    let passed = certs.iter().filter(|c| c.passed()).count();
    text.push_str(&format!("{passed}/{} certificates passed\n", certs.len()));
    let json = if certs.len() == 1 { json!(certs[0]) } else { json!(certs) };
    Output { text, json, pass }
}

fn nf_system(group: &str) -> Result<CoxeterSystem, Failure> {
    let sys = match group {
        "d4" => CoxeterSystem::d4(),
        "b4g" => CoxeterSystem::b4(),
        g => {
            let n = g
                .strip_prefix('b')
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Failure::Usage(format!("unknown group {g}")))?;
            CoxeterSystem::type_a(n).map_err(|e| Failure::Usage(e.to_string()))?
        }
    };
    Ok(sys)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Verify { what } => {
            let certs = match what {
                VerifyTarget::All { bound } => {
                    check_bound(*bound)?;
                    verify::verify_all(*bound)?
                }
                VerifyTarget::Row { triple, bound } => {
                    check_bound(*bound)?;
                    vec![verify::verify_row(triple.triple(), *bound)?]
                }
                VerifyTarget::Eq4 => vec![verify::verify_eq4()?],
                VerifyTarget::Eq5 => vec![verify::verify_eq5()?],
                VerifyTarget::Stars => vec![verify::verify_stars()?],
                VerifyTarget::Centers => vec![verify::verify_center_claims()?],
                VerifyTarget::Ht => vec![verify::hamidi_tehrani()?],
            };
            Ok(certificates(certs))
        }
        Command::Nf { group, word } => {
            let sys = nf_system(group)?;
            let w = parse_word_sugared(word, sys.atoms()).map_err(|e| Failure::Usage(e.to_string()))?;
            let nf = garside::normal_form(&sys, &w).map_err(|e| Failure::Usage(e.to_string()))?;
            let rendered = nf.render(&sys);
            Ok(Output {
                text: format!("{rendered}\n"),
                json: json!({"group": group, "word": w.render(), "normal_form": nf, "rendered": rendered}),
                pass: true,
            })
        }
        Command::Rep { triple } => {
            let rep = verify::build_matrix_rep(triple.triple())?;
            let mut text = format!(
                "PMod{} → {}\nconvention: {}\nmode: {:?}\ndim: {}\n",
                rep.triple, rep.target, rep.convention, rep.mode, rep.dim
            );
            for (g, m) in &rep.images {
                text.push_str(&format!("{g} ↦\n{m}\n"));
            }
            text.push_str(&format!(
                "relators checked: {} ({})\n",
                rep.relators_checked,
                if rep.relators_ok { "all trivial" } else { "FAILED" }
            ));
            Ok(Output { text, json: json!(rep), pass: rep.relators_ok })
        }
        Command::Abelianize { triple, bound } => {
            check_bound(*bound)?;
            let data = verify::row_data(triple.triple(), *bound)?;
            let source = data.source.abelianization();
            let target = ComputableGroup::new(data.counterpart.clone())?.presentation()?.abelianization();
            let pass = source == target;
            Ok(Output {
                text: format!("source: {source}\ntarget {}: {target}\n", data.counterpart),
                json: json!({"triple": data.triple, "source": source, "target": target, "target_expr": data.counterpart}),
                pass,
            })
        }
        Command::PrintPresentation { triple, bound } => {
            check_bound(*bound)?;
            let t = triple.triple();
            let p = match t.g {
                1 => match gervais_presentation(t) {
                    Ok(d) => d.presentation,
                    Err(_) => verify::row_data(t, *bound)?.source,
                },
                _ => verify::row_data(t, *bound)?.source,
            };
            let rel: Vec<String> = p.relators().iter().map(|r| r.render()).collect();
            Ok(Output {
                text: p.to_text(),
                json: json!({"triple": t, "generators": p.generators(), "relators": rel}),
                pass: true,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{body}"),
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
