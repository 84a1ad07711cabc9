use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use posets::census::{census, random_census};
use posets::gadgets::{decode_two_chain, decode_wpo, run_pipeline, Family, FnTable, GadgetInstance};
use posets::ideals::{essential_cover, et_decompose};
use posets::interval_tree::{count_intervals, enumerate_intervals_capped, DEFAULT_ENUM_CAP};
use posets::io::{cover_to_doc, intervals_to_text, poset_from_json, poset_to_dot, poset_to_json};
use posets::priority::{prio_run, prio_verify, PoolEvaluator};
use posets::separation::separate_down;
use posets::{Error, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Decoder {
    TwoChain,
    OmegaOmegastar,
}

#[derive(Parser)]
#[command(name = "posets", version, about = "Initial intervals, ideals and antichains of finite posets")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the partial-order axioms
    Validate { file: PathBuf },
    /// Count or list the initial intervals
    Intervals {
        file: PathBuf,
        #[arg(long, conflicts_with = "enumerate")]
        count: bool,
        #[arg(long)]
        enumerate: bool,
    },
    /// Cover by ideals indexed by the maximal elements
    Decompose {
        file: PathBuf,
        /// Reduce to an essential subfamily and decode as this gadget
        #[arg(long, value_enum)]
        decode: Option<Decoder>,
    },
    /// Initial interval containing A and missing B
    Separate {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        a: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<u64>,
    },
    /// Build a gadget poset from finite function tables
    Gadget {
        family: Family,
        #[arg(long, value_delimiter = ',')]
        f: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        g: Vec<u64>,
        #[arg(long)]
        n: usize,
        /// Run the matching algorithm and print the decoded set
        #[arg(long)]
        decode: bool,
    },
    /// Run the priority construction against an evaluator pool
    Priority {
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        stages: usize,
        #[arg(long)]
        ev: PathBuf,
        /// Slice size for --verify
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        verify: bool,
    },
    /// All posets up to isomorphism, checked against the cross-module identities
    Census {
        max_n: usize,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Json(_) | Error::Io(_) => 1,
        Error::Capped { .. } | Error::Overflow => 3,
        Error::Inconsistency(_) => 4,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn load(path: &Path) -> Result<Poset, Error> {
    poset_from_json(&read(path)?)
}

fn enum_cap() -> Result<usize, Error> {
    match std::env::var("POSETS_MAX_ENUM") {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Schema(format!("POSETS_MAX_ENUM={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn no_dot(cmd: &str) -> Error {
    Error::Schema(format!("{cmd} has no dot output"))
}

fn ids_line(ids: impl IntoIterator<Item = u64>) -> String {
    ids.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

fn run(cli: Cli) -> Result<String, Error> {
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Validate { file } => {
            let p = load(&file)?;
            Ok(match fmt {
                Format::Json => poset_to_json(&p),
                Format::Dot => poset_to_dot(&p),
                Format::Text => format!("ok: {} elements, {} covers", p.len(), p.covers().len()),
            })
        }
        Cmd::Intervals {
            file,
            count,
            enumerate,
        } => {
            let p = load(&file)?;
            if count || !enumerate {
                let c = count_intervals(&p)?;
                return match fmt {
                    Format::Json => Ok(json!({ "count": c.to_string() }).to_string()),
                    Format::Text => Ok(c.to_string()),
                    Format::Dot => Err(no_dot("intervals")),
                };
            }
            let all = enumerate_intervals_capped(&p, enum_cap()?)?;
            match fmt {
                Format::Json => {
                    let mut lists: Vec<Vec<u64>> = all.iter().map(|s| p.ids_of(s)).collect();
                    lists.sort();
                    Ok(serde_json::to_string(&lists)?)
                }
                Format::Text => Ok(intervals_to_text(&p, &all).trim_end_matches('\n').to_string()),
                Format::Dot => Err(no_dot("intervals")),
            }
        }
        Cmd::Decompose { file, decode } => {
            let p = load(&file)?;
            let Some(dec) = decode else {
                let c = et_decompose(&p)?;
                return match fmt {
                    Format::Json => Ok(serde_json::to_string_pretty(&cover_to_doc(&p, &c))?),
                    Format::Text => Ok(c
                        .parts
                        .iter()
                        .map(|a| ids_line(p.ids_of(a)))
                        .collect::<Vec<_>>()
                        .join("\n")),
                    Format::Dot => Err(no_dot("decompose")),
                };
            };
            let cover = essential_cover(&p)?;
            let decoded = match dec {
                Decoder::TwoChain => {
                    decode_two_chain(&GadgetInstance::from_poset(Family::TwoChain, p.clone())?, &cover)?
                }
                Decoder::OmegaOmegastar => decode_wpo(
                    &GadgetInstance::from_poset(Family::OmegaOmegaStar, p.clone())?,
                    &cover,
                )?,
            };
            decoded_output(fmt, "decompose", Some((&p, &cover)), &decoded)
        }
        Cmd::Separate { file, a, b } => {
            let p = load(&file)?;
            let i = separate_down(&p, &p.set_from_ids(a)?, &p.set_from_ids(b)?)?;
            match fmt {
                Format::Json => Ok(serde_json::to_string(&p.ids_of(&i))?),
                Format::Text => Ok(ids_line(p.ids_of(&i))),
                Format::Dot => Err(no_dot("separate")),
            }
        }
        Cmd::Gadget {
            family,
            f,
            g,
            n,
            decode,
        } => {
            let (f, g) = (FnTable::new(f)?, FnTable::new(g)?);
            let (inst, decoded) = run_pipeline(family, &f, &g, n)?;
            if decode {
                return decoded_output(fmt, "gadget --decode", None, &decoded);
            }
            match fmt {
                Format::Dot => Ok(poset_to_dot(&inst.poset)),
                _ => Ok(poset_to_json(&inst.poset)),
            }
        }
        Cmd::Priority {
            horizon,
            stages,
            ev,
            n,
            verify,
        } => {
            let pool = PoolEvaluator::from_json(&read(&ev)?)?;
            let log = prio_run(horizon, stages, &pool)?;
            if !verify {
                return match fmt {
                    Format::Dot => Err(no_dot("priority")),
                    _ => Ok(log.to_transcript().trim_end().to_string()),
                };
            }
            let rep = prio_verify(&log, &pool, n)?;
            match fmt {
                Format::Json => Ok(serde_json::to_string_pretty(&rep)?),
                Format::Text => Ok(rep
                    .checks
                    .iter()
                    .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect::<Vec<_>>()
                    .join("\n")),
                Format::Dot => Err(no_dot("priority")),
            }
        }
        Cmd::Census { max_n, random, seed } => {
            let rows = census(max_n)?;
            let rand = match random {
                Some(k) => Some(random_census(&mut ChaCha8Rng::seed_from_u64(seed), k, 7..=10)?),
                None => None,
            };
            let total: usize = rows.iter().map(|r| r.violations.total()).sum::<usize>()
                + rand.as_ref().map_or(0, |v| v.total());
            match fmt {
                Format::Json => Ok(pretty(&json!({
                    "rows": rows,
                    "random": rand,
                    "violations": total,
                }))),
                Format::Text => {
                    let mut out = String::from(" n  classes  decomposition  factorization  restriction\n");
                    for r in &rows {
                        out.push_str(&format!(
                            "{:>2}  {:>7}  {:>13}  {:>13}  {:>11}\n",
                            r.n, r.classes, r.violations.decomposition, r.violations.factorization,
                            r.violations.restriction
                        ));
                    }
                    if let (Some(v), Some(k)) = (&rand, random) {
                        out.push_str(&format!(
                            "random {k} posets on 7..=10 points (seed {seed}): {} decomposition, {} factorization\n",
                            v.decomposition, v.factorization
                        ));
                    }
                    out.push_str(&format!("{total} identity violations"));
                    Ok(out)
                }
                Format::Dot => Err(no_dot("census")),
            }
        }
    }
}

fn decoded_output(
    fmt: Format,
    cmd: &str,
    cover: Option<(&Poset, &posets::IdealCover)>,
    decoded: &BTreeSet<u64>,
) -> Result<String, Error> {
    match fmt {
        Format::Json => {
            let mut v = json!({ "decoded": decoded });
            if let Some((p, c)) = cover {
                v["cover"] = serde_json::to_value(cover_to_doc(p, c))?;
            }
            Ok(pretty(&v))
        }
        Format::Text => Ok(ids_line(decoded.iter().copied())),
        Format::Dot => Err(no_dot(cmd)),
    }
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
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
