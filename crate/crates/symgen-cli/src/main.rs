//! Command-line workbench for symmetric generation.
//!
//! Exit codes: 0 = all verified/succeeded, 1 = mismatch, 2 = overflow,
//! 3 = usage or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use symgen::catalog::{catalog, RunOptions, Scale, Status, VerificationReport};
use symgen::coset::{todd_coxeter, EnumerationLimits, Strategy};
use symgen::golay::GolayCode;
use symgen::progenitor::{
    double_coset_analysis, relation_search, CandidateSource, Progenitor, SymRelation,
    SymmetricPresentation,
};
use symgen::symrep::{element_to_text, parse_element, SymContext};
use symgen::text::{self, Resolved};

mod emit;

#[derive(Parser)]
#[command(
    name = "symgen",
    about = "Workbench for symmetric generation of groups",
    long_about = "Builds progenitors 2^*n:N from permutation actions, factors them by \
relations, enumerates cosets, analyses double cosets, and provides pi*w element \
arithmetic over the finished tables. See the repository README for the configuration \
grammar."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run catalog entries and compare with expected results.
    Verify {
        /// Scale class to run: desk or heavy (heavy includes desk).
        #[arg(long, default_value = "desk")]
        scale: String,
        /// Run a single entry by id.
        #[arg(long)]
        entry: Option<String>,
        /// Attempt definition-only entries too.
        #[arg(long)]
        force: bool,
        /// Emit the report as JSON records.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate a job configuration or a plain presentation file.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the Lemma candidates C_N(Stab_N(i,j)) for an entry.
    Suggest {
        #[arg(long)]
        entry: String,
        /// Comma-separated 1-based symmetric-generator indices.
        #[arg(long)]
        points: String,
    },
    /// Search a relation template for permutations giving a finite index.
    Search {
        #[arg(long)]
        entry: String,
        /// Template such as "(pi * t[1])^5".
        #[arg(long)]
        template: String,
        /// Restrict candidates to elements of this order.
        #[arg(long)]
        order: Option<u128>,
        /// Candidate source: "lemma" or "order-filter".
        #[arg(long, default_value = "lemma")]
        source: String,
        /// Coset cap per candidate enumeration.
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
    /// Golay code utilities.
    Golay {
        #[command(subcommand)]
        what: GolayCommand,
    },
    /// Write the double-coset Cayley diagram of an entry as DOT.
    Graph {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        dot: PathBuf,
    },
    /// pi*w element arithmetic over a desk-scale entry.
    Elt {
        #[arg(long)]
        entry: String,
        #[command(subcommand)]
        op: EltCommand,
    },
}

#[derive(Subcommand)]
enum GolayCommand {
    /// Print the octad/dodecad/trio counts.
    Counts,
    /// Print all 4096 codewords as bitstrings, octads first.
    Dump,
    /// Print the 3795 trios as octad triples.
    Trios,
    /// Print the 672 dodecads containing point A but not point B.
    Dodecads { a: usize, b: usize },
}

#[derive(Subcommand)]
enum EltCommand {
    /// Multiply two elements given as "pi = .. ; w = ..".
    Mul { left: String, right: String },
    /// Invert an element.
    Inv { element: String },
    /// Canonicalize an element.
    Canon { element: String },
    /// Print random canonical elements.
    Rand {
        #[arg(default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn heavy_budget_limit() -> Option<usize> {
    // Memory budget for heavy runs, in megabytes; translated to a coset
    // cap assuming ~100 bytes per coset row across typical tables.
    std::env::var("SYMGEN_HEAVY_BUDGET_MB")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|mb| mb * 10_000)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify {
            scale,
            entry,
            force,
            json,
        } => {
            let max_scale = match scale.as_str() {
                "desk" => Scale::Desk,
                "heavy" => Scale::Heavy,
                "definition-only" => Scale::DefinitionOnly,
                other => return Err(format!("unknown scale '{other}'")),
            };
            let mut options = RunOptions {
                force,
                ..Default::default()
            };
            if max_scale >= Scale::Heavy {
                options.max_cosets = heavy_budget_limit();
            }
            let reports = match entry {
                Some(id) => vec![catalog().run_entry(&id, &options)],
                None => catalog().run_all(max_scale, &options),
            };
            if json {
                for report in &reports {
                    println!("{}", emit::report_json(report));
                }
            } else {
                emit::print_report_table(&reports);
            }
            Ok(exit_code_for(&reports))
        }
        Command::Enumerate { file, json } => {
            let content =
                std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            if content.trim_start().starts_with("gens:") {
                let (presentation, subgroup) =
                    text::parse_raw_presentation(&content).map_err(|e| e.to_string())?;
                let table =
                    match todd_coxeter(&presentation, &subgroup, &EnumerationLimits::default()) {
                        Ok(t) => t,
                        Err(e) => {
                            eprintln!("{e}");
                            return Ok(ExitCode::from(2));
                        }
                    };
                println!("index {}", table.index());
                println!("image order {}", table.coset_action().order());
                return Ok(ExitCode::SUCCESS);
            }
            let report = enumerate_config(&content)?;
            if json {
                println!("{}", emit::report_json(&report));
            } else {
                emit::print_report_table(std::slice::from_ref(&report));
            }
            Ok(exit_code_for(std::slice::from_ref(&report)))
        }
        Command::Suggest { entry, points } => {
            let prepared = catalog().prepare(&entry).map_err(|e| e.to_string())?;
            let points: Vec<usize> = points
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .map(|v| v - 1)
                        .ok_or_else(|| format!("bad point '{p}'"))
                })
                .collect::<Result<_, _>>()?;
            let c = prepared
                .sp
                .progenitor
                .lemma_centralizer(&points)
                .map_err(|e| e.to_string())?;
            let shown: Vec<usize> = points.iter().map(|p| p + 1).collect();
            println!("C_N(Stab_N({shown:?})) has order {}", c.order());
            match c.elements(200) {
                Some(mut elements) => {
                    elements.retain(|e| !e.is_identity());
                    elements.sort_unstable();
                    println!("{} nontrivial candidates:", elements.len());
                    for e in elements {
                        println!("  order {:>3}  {}", e.order(), e);
                    }
                }
                None => {
                    println!("too many elements to list; generators:");
                    for g in c.generators() {
                        println!("  {g}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            entry,
            template,
            order,
            source,
            cap,
        } => {
            let prepared = catalog().prepare(&entry).map_err(|e| e.to_string())?;
            let expr = text::parse_relation(&template).map_err(|e| e.to_string())?;
            let action = prepared.sp.progenitor.action();
            let ctx = text::ResolveContext {
                n: action.degree(),
                labels: &action.labels,
                bindings: &prepared.entry.labels,
                action: Some(action),
            };
            let (word, exponent) =
                match text::resolve_relation(&expr, &ctx).map_err(|e| e.to_string())? {
                    Resolved::Template { word, exponent } => (word, exponent),
                    Resolved::Element { .. } => {
                        return Err("template must contain 'pi'".into());
                    }
                };
            let candidate_source = match source.as_str() {
                "lemma" => CandidateSource::LemmaCentralizer { order },
                "order-filter" => CandidateSource::OrderFilter {
                    order: order.ok_or("order-filter needs --order")?,
                    element_cap: 200_000,
                },
                other => return Err(format!("unknown source '{other}'")),
            };
            let base_sp = SymmetricPresentation::new(
                Progenitor::new_intransitive(prepared.sp.progenitor.action().clone()),
                vec![],
                prepared.sp.control_map.clone(),
            )
            .map_err(|e| e.to_string())?;
            let outcome = relation_search(
                &base_sp,
                &word,
                exponent,
                &candidate_source,
                &EnumerationLimits::with_max(cap),
            )
            .map_err(|e| e.to_string())?;
            println!(
                "{} candidates tested, {} survivors",
                outcome.candidates_tested,
                outcome.survivors.len()
            );
            for (pi, index) in &outcome.survivors {
                println!("index {index}  pi = {pi}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Golay { what } => {
            let code = GolayCode::build().map_err(|e| e.to_string())?;
            match what {
                GolayCommand::Counts => {
                    println!(
                        "octads {} / dodecads {} / trios {}",
                        code.octads().len(),
                        code.dodecads().len(),
                        code.trios().len()
                    );
                }
                GolayCommand::Dump => {
                    let mut out = String::new();
                    for line in code.dump_lines() {
                        out.push_str(&line);
                        out.push('\n');
                    }
                    print!("{out}");
                }
                GolayCommand::Trios => {
                    for t in code.trios() {
                        println!(
                            "{} {} {}",
                            symgen::golay::Block24(t[0]).bitstring(),
                            symgen::golay::Block24(t[1]).bitstring(),
                            symgen::golay::Block24(t[2]).bitstring()
                        );
                    }
                }
                GolayCommand::Dodecads { a, b } => {
                    if a == 0 || b == 0 || a > 24 || b > 24 || a == b {
                        return Err("need two distinct 1-based points".into());
                    }
                    let family = code.dodecads_672(a - 1, b - 1).map_err(|e| e.to_string())?;
                    if let symgen::action::Labels::Masks { items } = &family.labels {
                        for &m in items {
                            println!("{}", symgen::golay::Block24(m).bitstring());
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { entry, dot } => {
            let prepared = catalog().prepare(&entry).map_err(|e| e.to_string())?;
            if prepared.sp.relations.is_empty() {
                return Err(format!("entry '{entry}' has no runnable relations"));
            }
            let result = catalog()
                .enumeration_result(&entry)
                .map_err(|e| e.to_string())?;
            let table = double_coset_analysis(&result).map_err(|e| e.to_string())?;
            let text = emit::dot_graph(&entry, &table);
            std::fs::write(&dot, text).map_err(|e| format!("{}: {e}", dot.display()))?;
            println!(
                "{}: {} double cosets, index {}",
                dot.display(),
                table.cosets.len(),
                table.index
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Elt { entry, op } => {
            let prepared = catalog().prepare(&entry).map_err(|e| e.to_string())?;
            let result = catalog()
                .enumeration_result(&entry)
                .map_err(|e| e.to_string())?;
            let ctx = SymContext::build(&prepared.sp, &result, symgen::symrep::DEFAULT_INDEX_BOUND)
                .map_err(|e| e.to_string())?;
            let n = ctx.n();
            match op {
                EltCommand::Mul { left, right } => {
                    let a = parse_element(&left, n).map_err(|e| e.to_string())?;
                    let b = parse_element(&right, n).map_err(|e| e.to_string())?;
                    let ab = ctx.multiply(&a, &b).map_err(|e| e.to_string())?;
                    println!("{}", element_to_text(&ab));
                }
                EltCommand::Inv { element } => {
                    let a = parse_element(&element, n).map_err(|e| e.to_string())?;
                    let inv = ctx.invert(&a).map_err(|e| e.to_string())?;
                    println!("{}", element_to_text(&inv));
                }
                EltCommand::Canon { element } => {
                    let a = parse_element(&element, n).map_err(|e| e.to_string())?;
                    let canon = ctx.canonicalize(&a).map_err(|e| e.to_string())?;
                    println!("{}", element_to_text(&canon));
                }
                EltCommand::Rand { count, seed } => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    for _ in 0..count {
                        println!("{}", element_to_text(&ctx.random_element(&mut rng)));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_code_for(reports: &[VerificationReport]) -> ExitCode {
    let mut code = 0u8;
    for r in reports {
        match r.status {
            Status::Verified | Status::Skipped => {}
            Status::Mismatch => code = code.max(1),
            Status::Overflow => code = code.max(2),
        }
    }
    ExitCode::from(code)
}

/// Runs a parsed job configuration end to end.
fn enumerate_config(content: &str) -> Result<VerificationReport, String> {
    let config = text::parse_config(content).map_err(|e| e.to_string())?;
    let id = config.id.clone().unwrap_or_else(|| "job".to_string());
    let bundle = if let Some((degree, gens)) = &config.control_perms {
        build_perms_control(*degree, gens)?
    } else if !config.control.is_empty() {
        catalog()
            .build_control(&config.control)
            .map_err(|e| e.to_string())?
    } else {
        return Err("configuration needs a control".into());
    };
    let mut relations = Vec::new();
    for rel_text in &config.relations {
        let expr = text::parse_relation(rel_text).map_err(|e| e.to_string())?;
        let ctx = text::ResolveContext {
            n: bundle.action.degree(),
            labels: &bundle.action.labels,
            bindings: &config.labels,
            action: Some(&bundle.action),
        };
        match text::resolve_relation(&expr, &ctx).map_err(|e| e.to_string())? {
            Resolved::Element { element, exponent } => {
                relations.push(SymRelation::new(element.pi, element.word, exponent));
            }
            Resolved::Template { .. } => {
                return Err("templates belong to the search command".into());
            }
        }
    }
    let progenitor = if bundle.transitive {
        Progenitor::new(bundle.action).map_err(|e| e.to_string())?
    } else {
        Progenitor::new_intransitive(bundle.action)
    };
    let mut sp = SymmetricPresentation::new(progenitor, relations, bundle.control_map)
        .map_err(|e| e.to_string())?;
    sp.stabilizer_words = bundle.stabilizer_words;
    let limits = EnumerationLimits {
        max_cosets: config.max_cosets.unwrap_or(1_000_000),
        strategy: config.strategy.unwrap_or(Strategy::Felsch),
    };
    let started = std::time::Instant::now();
    match sp.enumerate(&limits) {
        Ok(result) => {
            let mut status = Status::Verified;
            let mut message = "ok".to_string();
            if let Some((expected, _)) = config.expected_index {
                if result.index as u64 != expected {
                    status = Status::Mismatch;
                    message = format!("index {} != expected {expected}", result.index);
                }
            }
            if let Some((expected, _)) = config.expected_order {
                if result.target_order != expected {
                    status = Status::Mismatch;
                    message = format!("order {} != expected {expected}", result.target_order);
                }
            }
            let dc = double_coset_analysis(&result).map_err(|e| e.to_string())?;
            Ok(VerificationReport {
                id,
                status,
                index: Some(result.index),
                order: Some(result.target_order),
                abelianization: Some(result.coset_action.abelianization_order()),
                control_embeds: Some(result.control_embeds),
                conjugation_law_ok: None,
                double_cosets: dc
                    .cosets
                    .iter()
                    .map(|c| symgen::catalog::DoubleCosetRow {
                        size: c.orbit_size,
                        stabilizer_order: c.stabilizer_order,
                        word: c
                            .word
                            .iter()
                            .map(|&i| format!("t{}", i + 1))
                            .collect::<Vec<_>>()
                            .join(" "),
                    })
                    .collect(),
                stats: Some(result.table.stats().clone()),
                seconds: started.elapsed().as_secs_f64(),
                message,
            })
        }
        Err(symgen::progenitor::ProgError::Enumeration(symgen::coset::EnumError::Overflow {
            stats,
            ..
        })) => Ok(VerificationReport {
            id,
            status: Status::Overflow,
            index: None,
            order: None,
            abelianization: None,
            control_embeds: None,
            conjugation_law_ok: None,
            double_cosets: Vec::new(),
            stats: Some(stats),
            seconds: started.elapsed().as_secs_f64(),
            message: format!("overflow at cap {}", limits.max_cosets),
        }),
        Err(e) => Err(e.to_string()),
    }
}

fn build_perms_control(
    degree: usize,
    gens: &[String],
) -> Result<symgen::catalog::ControlBundle, String> {
    use symgen::perm::Permutation;
    use symgen::words::presentation_from_chain;
    let perms: Vec<Permutation> = gens
        .iter()
        .map(|g| Permutation::parse_cycles(g, degree).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let group = symgen::group::PermutationGroup::new(degree, perms).map_err(|e| e.to_string())?;
    let map = presentation_from_chain(degree, group.generators(), "g");
    let action = symgen::action::induced_action(&group, &symgen::action::ActionRecipe::Natural)
        .map_err(|e| e.to_string())?;
    let transitive = action.group.is_transitive();
    Ok(symgen::catalog::ControlBundle {
        action,
        control_map: map,
        stabilizer_words: Vec::new(),
        transitive,
        builtin_relations: Vec::new(),
    })
}
