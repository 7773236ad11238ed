//! The ledger of symmetric presentations: construction recipes, expected
//! results with provenance tags, scale classes, and verification runs.
//!
//! Entries live as structured text files under `data/catalog/` and are
//! embedded at compile time. Expected values carry provenance:
//! `paper` values come straight from the source being verified (a
//! mismatch is a correctness alarm), `derived-oracle` values from an
//! independent computation such as the root-closure oracle, and
//! `derived-frozen` values are regressions frozen from the first verified
//! run.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::action::{self, InducedAction, Labels};
use crate::coset::{EnumError, EnumStats, EnumerationLimits, Strategy, Word};
use crate::golay::GolayCode;
use crate::group::PermutationGroup;
use crate::matchstick::{self, MatchstickError};
use crate::perm::Permutation;
use crate::progenitor::{
    double_coset_analysis, perfectness_report, DoubleCosetTable, EnumerationResult,
    PerfectnessReport, ProgError, Progenitor, SymRelation, SymmetricPresentation,
};
use crate::text::{self, Resolved, TextError};
use crate::weyl::{self, Family};
use crate::words::{coxeter_symmetric, presentation_from_chain, reduce_generators, GeneratorMap};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no catalog entry named '{0}'")]
    UnknownEntry(String),
    #[error("entry '{id}' control construction failed: {msg}")]
    Construction { id: String, msg: String },
    #[error("catalog data invalid: {0}")]
    Data(String),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Progenitor(#[from] ProgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scale {
    Desk,
    Heavy,
    DefinitionOnly,
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scale::Desk => write!(f, "desk"),
            Scale::Heavy => write!(f, "heavy"),
            Scale::DefinitionOnly => write!(f, "definition-only"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Paper,
    DerivedOracle,
    DerivedFrozen,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Paper => write!(f, "paper"),
            Provenance::DerivedOracle => write!(f, "derived-oracle"),
            Provenance::DerivedFrozen => write!(f, "derived-frozen"),
        }
    }
}

fn parse_provenance(tag: &str) -> Result<Provenance, CatalogError> {
    match tag {
        "paper" => Ok(Provenance::Paper),
        "derived-oracle" => Ok(Provenance::DerivedOracle),
        "derived-frozen" => Ok(Provenance::DerivedFrozen),
        other => Err(CatalogError::Data(format!("unknown provenance '{other}'"))),
    }
}

/// A presentation from the survey with its construction recipe and
/// expectations.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub scale: Scale,
    pub control_recipe: Vec<String>,
    pub relations: Vec<String>,
    pub labels: Vec<(String, usize)>,
    pub expected_index: Option<(u64, Provenance)>,
    pub expected_order: Option<(u128, Provenance)>,
    pub max_cosets: Option<usize>,
    pub strategy: Option<Strategy>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Verified,
    Mismatch,
    Overflow,
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Verified => write!(f, "verified"),
            Status::Mismatch => write!(f, "mismatch"),
            Status::Overflow => write!(f, "overflow"),
            Status::Skipped => write!(f, "skipped"),
        }
    }
}

/// One row of the double-coset profile in a report.
#[derive(Debug, Clone)]
pub struct DoubleCosetRow {
    pub size: usize,
    pub stabilizer_order: u128,
    pub word: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    pub index: Option<usize>,
    pub order: Option<u128>,
    pub abelianization: Option<u128>,
    pub control_embeds: Option<bool>,
    pub conjugation_law_ok: Option<bool>,
    pub double_cosets: Vec<DoubleCosetRow>,
    pub stats: Option<EnumStats>,
    pub seconds: f64,
    pub message: String,
}

impl VerificationReport {
    fn skipped(id: &str, message: impl Into<String>) -> Self {
        VerificationReport {
            id: id.to_string(),
            status: Status::Skipped,
            index: None,
            order: None,
            abelianization: None,
            control_embeds: None,
            conjugation_law_ok: None,
            double_cosets: Vec::new(),
            stats: None,
            seconds: 0.0,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Required to run definition-only entries.
    pub force: bool,
    pub max_cosets: Option<usize>,
    pub strategy: Option<Strategy>,
}

/// A built entry, ready to enumerate or hand to interactive commands.
pub struct PreparedEntry {
    pub entry: CatalogEntry,
    pub sp: SymmetricPresentation,
    pub limits: EnumerationLimits,
}

/// Everything a control recipe produces.
pub struct ControlBundle {
    pub action: InducedAction,
    pub control_map: GeneratorMap,
    pub stabilizer_words: Vec<(usize, Vec<Word>)>,
    pub transitive: bool,
    /// Relations supplied by the recipe itself, for entries whose data
    /// cannot be written as plain text (bootstrapped controls, Lemma
    /// resolutions).
    pub builtin_relations: Vec<SymRelation>,
}

struct Shared {
    golay: OnceLock<Result<Arc<GolayCode>, String>>,
    results: Mutex<HashMap<String, Arc<EnumerationResult>>>,
}

pub struct Catalog {
    entries: Vec<CatalogEntry>,
    shared: Shared,
}

static CATALOG: LazyLock<Catalog> = LazyLock::new(|| Catalog::load().expect("catalog data"));

/// The embedded catalog.
pub fn catalog() -> &'static Catalog {
    &CATALOG
}

static ENTRY_FILES: &[&str] = &[
    include_str!("../data/catalog/coxeter-a2.entry"),
    include_str!("../data/catalog/coxeter-a3.entry"),
    include_str!("../data/catalog/coxeter-a4.entry"),
    include_str!("../data/catalog/coxeter-a5.entry"),
    include_str!("../data/catalog/coxeter-a6.entry"),
    include_str!("../data/catalog/coxeter-d4.entry"),
    include_str!("../data/catalog/coxeter-d5.entry"),
    include_str!("../data/catalog/coxeter-d6.entry"),
    include_str!("../data/catalog/coxeter-e6.entry"),
    include_str!("../data/catalog/coxeter-e7.entry"),
    include_str!("../data/catalog/coxeter-e8.entry"),
    include_str!("../data/catalog/sp62-s7.entry"),
    include_str!("../data/catalog/mcl2-m22.entry"),
    include_str!("../data/catalog/j32-l216.entry"),
    include_str!("../data/catalog/sp82-s10.entry"),
    include_str!("../data/catalog/2f42-s4.entry"),
    include_str!("../data/catalog/fi23-sp82.entry"),
    include_str!("../data/catalog/dot0-m24.entry"),
    include_str!("../data/catalog/j4-trios.entry"),
    include_str!("../data/catalog/ru-matchsticks.entry"),
    include_str!("../data/catalog/ru-l32.entry"),
    include_str!("../data/catalog/o73-sp62.entry"),
    include_str!("../data/catalog/fi23-s12-tableau.entry"),
    include_str!("../data/catalog/fi22-cosets.entry"),
    include_str!("../data/catalog/fi24-cosets.entry"),
    include_str!("../data/catalog/m22-a7.entry"),
];

impl Catalog {
    fn load() -> Result<Catalog, CatalogError> {
        let mut entries = Vec::new();
        for file in ENTRY_FILES {
            let config = text::parse_config(file)?;
            let id = config
                .id
                .ok_or_else(|| CatalogError::Data("entry without id".into()))?;
            let scale = match config.scale.as_deref() {
                Some("desk") => Scale::Desk,
                Some("heavy") => Scale::Heavy,
                Some("definition-only") => Scale::DefinitionOnly,
                other => {
                    return Err(CatalogError::Data(format!(
                        "entry {id}: bad scale {other:?}"
                    )))
                }
            };
            let expected_index = config
                .expected_index
                .map(|(v, tag)| Ok::<_, CatalogError>((v, parse_provenance(&tag)?)))
                .transpose()?;
            let expected_order = config
                .expected_order
                .map(|(v, tag)| Ok::<_, CatalogError>((v, parse_provenance(&tag)?)))
                .transpose()?;
            if let Some((index, _)) = expected_index {
                let cap = match scale {
                    Scale::Desk => 20_000,
                    Scale::Heavy => 2_000_000,
                    Scale::DefinitionOnly => u64::MAX,
                };
                if index > cap {
                    return Err(CatalogError::Data(format!(
                        "entry {id}: expected index {index} exceeds the {scale} bound"
                    )));
                }
            }
            entries.push(CatalogEntry {
                id,
                scale,
                control_recipe: config.control,
                relations: config.relations,
                labels: config.labels,
                expected_index,
                expected_order,
                max_cosets: config.max_cosets,
                strategy: config.strategy,
                notes: config.notes,
            });
        }
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Catalog {
            entries,
            shared: Shared {
                golay: OnceLock::new(),
                results: Mutex::new(HashMap::new()),
            },
        })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entry(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// The shared Golay code, built once per process.
    pub fn golay(&self) -> Result<Arc<GolayCode>, CatalogError> {
        self.shared
            .golay
            .get_or_init(|| GolayCode::build().map(Arc::new).map_err(|e| e.to_string()))
            .clone()
            .map_err(CatalogError::Data)
    }

    /// Builds the control action and certified presentation for a recipe.
    pub fn build_control(&self, tokens: &[String]) -> Result<ControlBundle, CatalogError> {
        let recipe_text = tokens.join(" ");
        let err = |msg: String| CatalogError::Construction {
            id: recipe_text.clone(),
            msg,
        };
        let token = |i: usize| -> Result<&str, CatalogError> {
            tokens.get(i).map(|s| s.as_str()).ok_or_else(|| {
                CatalogError::Construction {
                    id: tokens.join(" "),
                    msg: "missing recipe token".into(),
                }
            })
        };
        match token(0)? {
            "sn" => {
                let n: usize = token(1)?
                    .parse()
                    .map_err(|_| err("sn needs a degree".into()))?;
                let map = coxeter_symmetric(n);
                let sn =
                    PermutationGroup::new(n, map.images.clone()).map_err(|e| err(e.to_string()))?;
                match token(2)? {
                    "natural" => {
                        let action = action::induced_action(&sn, &action::ActionRecipe::Natural)
                            .map_err(|e| err(e.to_string()))?;
                        Ok(ControlBundle {
                            action,
                            control_map: map,
                            stabilizer_words: Vec::new(),
                            transitive: true,
                            builtin_relations: Vec::new(),
                        })
                    }
                    "subsets" => {
                        let k: usize = token(3)?
                            .parse()
                            .map_err(|_| err("subsets needs a size".into()))?;
                        let action =
                            action::on_k_subsets(&sn, k).map_err(|e| err(e.to_string()))?;
                        let images = map
                            .images
                            .iter()
                            .map(|g| action.induce(g))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| err(e.to_string()))?;
                        Ok(ControlBundle {
                            control_map: GeneratorMap::new(map.presentation, images),
                            action,
                            stabilizer_words: Vec::new(),
                            transitive: true,
                            builtin_relations: Vec::new(),
                        })
                    }
                    "partitions" => {
                        let shape: Vec<usize> = tokens[3..]
                            .iter()
                            .map(|t| t.parse().map_err(|_| err("bad partition shape".into())))
                            .collect::<Result<_, _>>()?;
                        let action =
                            action::on_partitions(&sn, &shape).map_err(|e| err(e.to_string()))?;
                        let images = map
                            .images
                            .iter()
                            .map(|g| action.induce(g))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| err(e.to_string()))?;
                        Ok(ControlBundle {
                            control_map: GeneratorMap::new(map.presentation, images),
                            action,
                            stabilizer_words: Vec::new(),
                            transitive: true,
                            builtin_relations: Vec::new(),
                        })
                    }
                    "natural+subsets" => {
                        let k: usize = token(3)?
                            .parse()
                            .map_err(|_| err("subsets needs a size".into()))?;
                        let sub = action::on_k_subsets(&sn, k).map_err(|e| err(e.to_string()))?;
                        let combined_gens: Vec<Permutation> = sn
                            .generators()
                            .iter()
                            .zip(sub.group.generators())
                            .map(|(a, b)| a.direct_sum(b))
                            .collect();
                        let degree = n + sub.degree();
                        let group = PermutationGroup::new(degree, combined_gens)
                            .map_err(|e| err(e.to_string()))?;
                        let labels = Labels::Union {
                            parts: vec![(0, Labels::Points(n)), (n, sub.labels.clone())],
                        };
                        let action =
                            InducedAction::assemble(group, labels, n, sn.generators().to_vec());
                        let images = map
                            .images
                            .iter()
                            .map(|g| action.induce(g))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| err(e.to_string()))?;
                        Ok(ControlBundle {
                            control_map: GeneratorMap::new(map.presentation, images),
                            action,
                            stabilizer_words: Vec::new(),
                            transitive: false,
                            builtin_relations: Vec::new(),
                        })
                    }
                    other => Err(err(format!("unknown sn action '{other}'"))),
                }
            }
            "m22-dodecads" => {
                let a = token(1)?
                    .parse::<usize>()
                    .map_err(|_| err("needs two 1-based points".into()))?
                    - 1;
                let b = token(2)?
                    .parse::<usize>()
                    .map_err(|_| err("needs two 1-based points".into()))?
                    - 1;
                let golay = self.golay()?;
                let m22 = golay.m22(a, b).map_err(|e| err(e.to_string()))?;
                let family = golay.dodecads_672(a, b).map_err(|e| err(e.to_string()))?;
                let reduced = reduce_generators(24, m22.generators(), 443_520)
                    .map_err(|e| err(e.to_string()))?;
                // Short sampled relators enumerate far better than the
                // chain-derived presentation; both are exactness-proved.
                let map24 =
                    crate::words::discovered_presentation(24, &reduced, 443_520, "m", 0x3122)
                        .unwrap_or_else(|| presentation_from_chain(24, &reduced, "m"));
                let images = map24
                    .images
                    .iter()
                    .map(|g| family.induce(g))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| err(e.to_string()))?;
                Ok(ControlBundle {
                    control_map: GeneratorMap::new(map24.presentation, images),
                    action: family,
                    stabilizer_words: Vec::new(),
                    transitive: true,
                    builtin_relations: Vec::new(),
                })
            }
            "m24" => {
                let golay = self.golay()?;
                let m24 = golay.m24().map_err(|e| err(e.to_string()))?;
                let map24 = presentation_from_chain(24, m24.generators(), "m");
                let action = match token(1)? {
                    "natural" => action::induced_action(&m24, &action::ActionRecipe::Natural)
                        .map_err(|e| err(e.to_string()))?,
                    "tetrads" => action::on_k_subsets(&m24, 4).map_err(|e| err(e.to_string()))?,
                    "trios" => action::on_mask_triples(&m24, golay.trios())
                        .map_err(|e| err(e.to_string()))?,
                    other => return Err(err(format!("unknown m24 action '{other}'"))),
                };
                let images = map24
                    .images
                    .iter()
                    .map(|g| action.induce(g))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| err(e.to_string()))?;
                let builtin_relations = if token(1)? == "tetrads" {
                    dot0_relation(&golay, &action).map_err(err)?
                } else {
                    Vec::new()
                };
                Ok(ControlBundle {
                    control_map: GeneratorMap::new(map24.presentation, images),
                    action,
                    stabilizer_words: Vec::new(),
                    transitive: true,
                    builtin_relations,
                })
            }
            "l216x4-120" => l216x4_on_120().map_err(err),
            "gl42-matchsticks" => {
                let geo =
                    matchstick::matchsticks().map_err(|e: MatchstickError| err(e.to_string()))?;
                let map15 = presentation_from_chain(15, geo.vectors.generators(), "g");
                let images = map15
                    .images
                    .iter()
                    .map(|g| geo.action.induce(g))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| err(e.to_string()))?;
                Ok(ControlBundle {
                    control_map: GeneratorMap::new(map15.presentation, images),
                    action: geo.action,
                    stabilizer_words: Vec::new(),
                    transitive: true,
                    builtin_relations: Vec::new(),
                })
            }
            "l32-points" => l32_on_7().map_err(err),
            "coset-space" => {
                let source_id = token(1)?.to_string();
                let result = self.enumeration_result(&source_id)?;
                let ncontrol = result.expansion.ncontrol;
                let ngens = result.expansion.presentation.ngens();
                let columns: Vec<Permutation> = (0..ngens)
                    .map(|g| result.table.generator_action(g))
                    .collect();
                let group = PermutationGroup::new(result.index, columns.clone())
                    .map_err(|e| err(e.to_string()))?;
                let action = InducedAction::assemble(
                    group.clone(),
                    Labels::Points(result.index),
                    result.index,
                    columns.clone(),
                );
                let control_map =
                    GeneratorMap::new(result.expansion.presentation.clone(), columns);
                // Stab of coset 0 is the enumerated subgroup: its words
                // are exactly the control generator letters.
                let stab_words: Vec<Word> = (0..ncontrol).map(Word::generator).collect();
                // The bootstrapped symmetric generator (image of the t
                // letter) is the element the downstream relation names.
                let t_letter = result.expansion.t_letter[0];
                let builtin_relations = vec![SymRelation {
                    pi: result.table.generator_action(t_letter),
                    word: vec![0],
                    exponent: 3,
                    pi_word: Some(Word::generator(t_letter)),
                }];
                Ok(ControlBundle {
                    action,
                    control_map,
                    stabilizer_words: vec![(0, stab_words)],
                    transitive: true,
                    builtin_relations,
                })
            }
            "unresolved" => Err(err(format!(
                "control action out of scope: {}",
                tokens[1..].join(" ")
            ))),
            other => Err(err(format!("unknown control recipe '{other}'"))),
        }
    }

    /// Runs (and caches) the enumeration behind an entry, for coset-space
    /// recipes and interactive commands.
    pub fn enumeration_result(&self, id: &str) -> Result<Arc<EnumerationResult>, CatalogError> {
        if let Some(hit) = self.shared.results.lock().expect("lock").get(id) {
            return Ok(hit.clone());
        }
        let prepared = self.prepare(id)?;
        let result = prepared.sp.enumerate(&prepared.limits)?;
        if let Some((expected, _)) = prepared.entry.expected_index {
            if result.index as u64 != expected {
                return Err(CatalogError::Construction {
                    id: id.to_string(),
                    msg: format!(
                        "dependency index {} differs from expected {expected}",
                        result.index
                    ),
                });
            }
        }
        let arc = Arc::new(result);
        self.shared
            .results
            .lock()
            .expect("lock")
            .insert(id.to_string(), arc.clone());
        Ok(arc)
    }

    /// Builds the symmetric presentation of an entry.
    pub fn prepare(&self, id: &str) -> Result<PreparedEntry, CatalogError> {
        let entry = self
            .entry(id)
            .ok_or_else(|| CatalogError::UnknownEntry(id.to_string()))?
            .clone();
        let bundle = self.build_control(&entry.control_recipe)?;
        let mut relations: Vec<SymRelation> = Vec::new();
        for text_rel in &entry.relations {
            if text_rel == "builtin" {
                relations.extend(bundle.builtin_relations.iter().cloned());
                continue;
            }
            let expr = text::parse_relation(text_rel)?;
            let ctx = text::ResolveContext {
                n: bundle.action.degree(),
                labels: &bundle.action.labels,
                bindings: &entry.labels,
                action: Some(&bundle.action),
            };
            match text::resolve_relation(&expr, &ctx)? {
                Resolved::Element { element, exponent } => {
                    relations.push(SymRelation::new(element.pi, element.word, exponent));
                }
                Resolved::Template { .. } => {
                    return Err(CatalogError::Data(format!(
                        "entry {id}: templates cannot be run directly; use the search command"
                    )));
                }
            }
        }
        let progenitor = if bundle.transitive {
            Progenitor::new(bundle.action).map_err(CatalogError::Progenitor)?
        } else {
            Progenitor::new_intransitive(bundle.action)
        };
        let mut sp = SymmetricPresentation::new(progenitor, relations, bundle.control_map)?;
        sp.stabilizer_words = bundle.stabilizer_words;
        let limits = EnumerationLimits {
            max_cosets: entry.max_cosets.unwrap_or(5_000_000),
            strategy: entry.strategy.unwrap_or(Strategy::Felsch),
        };
        Ok(PreparedEntry { entry, sp, limits })
    }

    /// Runs one entry end to end and compares against expectations.
    pub fn run_entry(&self, id: &str, options: &RunOptions) -> VerificationReport {
        let started = Instant::now();
        let entry = match self.entry(id) {
            Some(e) => e.clone(),
            None => return VerificationReport::skipped(id, "unknown entry"),
        };
        if entry.scale == Scale::DefinitionOnly && !options.force {
            return VerificationReport::skipped(
                id,
                "definition-only entry; pass --force to attempt it",
            );
        }
        let prepared = match self.prepare(id) {
            Ok(p) => p,
            Err(e) => {
                let mut report = VerificationReport::skipped(id, format!("not runnable: {e}"));
                report.seconds = started.elapsed().as_secs_f64();
                return report;
            }
        };
        if prepared.sp.relations.is_empty() {
            let mut report = VerificationReport::skipped(
                id,
                "relation data not transcribable at desk scale (see notes)",
            );
            report.seconds = started.elapsed().as_secs_f64();
            return report;
        }
        let mut limits = prepared.limits.clone();
        if let Some(m) = options.max_cosets {
            limits.max_cosets = m;
        }
        if let Some(s) = options.strategy {
            limits.strategy = s;
        }
        let result = match prepared.sp.enumerate(&limits) {
            Ok(result) => result,
            Err(ProgError::Enumeration(EnumError::Overflow { stats, .. })) => {
                return VerificationReport {
                    id: id.to_string(),
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
                };
            }
            Err(e) => {
                let mut report =
                    VerificationReport::skipped(id, format!("enumeration failed: {e}"));
                report.seconds = started.elapsed().as_secs_f64();
                return report;
            }
        };
        self.finish_report(id, &entry, &prepared.sp, result, started)
    }

    fn finish_report(
        &self,
        id: &str,
        entry: &CatalogEntry,
        sp: &SymmetricPresentation,
        result: EnumerationResult,
        started: Instant,
    ) -> VerificationReport {
        use rand::SeedableRng;
        let mut problems: Vec<String> = Vec::new();
        if let Some((expected, provenance)) = entry.expected_index {
            if result.index as u64 != expected {
                let alarm = match provenance {
                    Provenance::Paper => "correctness alarm (paper value)",
                    _ => "regression (derived value)",
                };
                problems.push(format!(
                    "index {} != expected {expected} [{alarm}]",
                    result.index
                ));
            }
        }
        if !result.control_embeds {
            problems.push(format!(
                "control does not embed (image order {})",
                result.control_image_order
            ));
        }
        if let Some((expected, _)) = entry.expected_order {
            if result.target_order != expected {
                problems.push(format!(
                    "order {} != expected {expected}",
                    result.target_order
                ));
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xE911_7A11);
        let law_ok = result.check_conjugation_law(sp, 100, &mut rng);
        if !law_ok {
            problems.push("conjugation law violated in the image".into());
        }
        let dc = match double_coset_analysis(&result) {
            Ok(dc) => dc,
            Err(e) => {
                problems.push(format!("double-coset analysis failed: {e}"));
                DoubleCosetTable {
                    cosets: Vec::new(),
                    index: result.index,
                    control_image_order: result.control_image_order,
                }
            }
        };
        if !dc.cosets.is_empty() && !dc.partition_identity_holds() {
            problems.push("double-coset partition identity fails".into());
        }
        if let Some(problem) = self.weyl_cross_check(id, sp, &result) {
            problems.push(problem);
        }
        let perfectness = perfectness_report(sp, &result);
        if perfectness.lemma_consistent == Some(false) {
            problems.push(format!(
                "perfect-control abelianization {} inconsistent",
                perfectness.image_abelianization
            ));
        }
        let double_cosets = dc
            .cosets
            .iter()
            .map(|c| DoubleCosetRow {
                size: c.orbit_size,
                stabilizer_order: c.stabilizer_order,
                word: t_word_text(&c.word),
            })
            .collect();
        VerificationReport {
            id: id.to_string(),
            status: if problems.is_empty() {
                Status::Verified
            } else {
                Status::Mismatch
            },
            index: Some(result.index),
            order: Some(result.target_order),
            abelianization: Some(perfectness.image_abelianization),
            control_embeds: Some(result.control_embeds),
            conjugation_law_ok: Some(law_ok),
            double_cosets,
            stats: Some(result.table.stats().clone()),
            seconds: started.elapsed().as_secs_f64(),
            message: if problems.is_empty() {
                "ok".into()
            } else {
                problems.join("; ")
            },
        }
    }

    /// For the reflection-family entries: compare the enumerated image
    /// with the root-closure oracle (order equality plus the diagram's
    /// Coxeter relators on the expanded generators).
    fn weyl_cross_check(
        &self,
        id: &str,
        sp: &SymmetricPresentation,
        result: &EnumerationResult,
    ) -> Option<String> {
        let rest = id.strip_prefix("coxeter-")?;
        let family = match &rest[..1] {
            "a" => Family::A,
            "d" => Family::D,
            "e" => Family::E,
            _ => return Some(format!("unparseable reflection entry id '{id}'")),
        };
        let rank: usize = rest[1..].parse().ok()?;
        let oracle = match weyl::weyl_oracle(family, rank) {
            Ok(w) => w,
            Err(e) => return Some(format!("oracle failed: {e}")),
        };
        let oracle_order = oracle.group.order();
        if result.target_order != oracle_order {
            return Some(format!(
                "order {} differs from the root-closure oracle {}",
                result.target_order, oracle_order
            ));
        }
        // Generator correspondence: [t, s_1..s_{n-1}] must satisfy the
        // diagram's pairwise orders in the coset image.
        let n = sp.progenitor.control().degree();
        let source_n = match family {
            Family::A => rank,
            Family::D | Family::E => {
                // Control is S_rank acting on subsets; its natural degree
                // is the rank.
                rank
            }
        };
        let _ = n;
        let mut gens: Vec<Permutation> = Vec::with_capacity(source_n);
        gens.push(result.table.generator_action(result.expansion.t_letter[0]));
        for i in 0..result.expansion.ncontrol {
            gens.push(result.table.generator_action(i));
        }
        let diagram = weyl::diagram_with_t(family, source_n);
        for i in 0..gens.len() {
            if gens[i].order() != 2 {
                return Some(format!("generator {i} is not an involution"));
            }
            for j in (i + 1)..gens.len() {
                let order = gens[i].compose(&gens[j]).order();
                let expected = diagram[i][j] as u128;
                if order != expected {
                    return Some(format!(
                        "pair ({i},{j}) has product order {order}, diagram wants {expected}"
                    ));
                }
            }
        }
        None
    }

    /// Runs every entry at or below the scale class; definition-only
    /// entries report a skip reason unless forced. Entries run
    /// concurrently; the report is ordered by id.
    pub fn run_all(&self, max_scale: Scale, options: &RunOptions) -> Vec<VerificationReport> {
        // Dependencies of coset-space recipes are shared; warm them
        // sequentially so parallel workers reuse the cache.
        for e in &self.entries {
            if e.scale <= max_scale
                && e.control_recipe.first().map(|t| t.as_str()) == Some("coset-space")
            {
                if let Some(dep) = e.control_recipe.get(1) {
                    let _ = self.enumeration_result(dep);
                }
            }
        }
        let ids: Vec<&str> = self
            .entries
            .iter()
            .filter(|e| e.scale <= max_scale)
            .map(|e| e.id.as_str())
            .collect();
        let mut reports: Vec<VerificationReport> = ids
            .par_iter()
            .map(|id| self.run_entry(id, options))
            .collect();
        reports.sort_by(|a, b| a.id.cmp(&b.id));
        reports
    }
}

fn t_word_text(word: &[u32]) -> String {
    word.iter()
        .map(|&i| format!("t{}", i + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The tetrad relation of the rank-3 tetrad entry: pairs a, b, c, d split
/// the least octad, the three symmetric generators are the tetrads ab,
/// ac, ad, and pi is the least nontrivial Lemma candidate.
fn dot0_relation(
    golay: &GolayCode,
    action: &InducedAction,
) -> Result<Vec<SymRelation>, String> {
    let octad = crate::golay::Block24(golay.octads()[0]).points();
    let tetrad = |pts: [usize; 4]| -> Result<usize, String> {
        let mut set: Vec<u32> = pts.iter().map(|&p| p as u32).collect();
        set.sort_unstable();
        action
            .labels
            .resolve_set(&set)
            .ok_or_else(|| "tetrad is not an action object".to_string())
    };
    let ab = tetrad([octad[0], octad[1], octad[2], octad[3]])?;
    let ac = tetrad([octad[0], octad[1], octad[4], octad[5]])?;
    let ad = tetrad([octad[0], octad[1], octad[6], octad[7]])?;
    let progenitor = Progenitor::new(action.clone()).map_err(|e| e.to_string())?;
    let candidates = progenitor
        .lemma_centralizer(&[ab, ac, ad])
        .map_err(|e| e.to_string())?;
    let mut elements = candidates
        .elements(1000)
        .ok_or_else(|| "lemma candidate group unexpectedly large".to_string())?;
    elements.retain(|e| !e.is_identity());
    elements.sort_unstable();
    let pi = elements
        .first()
        .ok_or_else(|| "no nontrivial lemma candidate".to_string())?
        .clone();
    Ok(vec![SymRelation::new(
        pi,
        vec![ab as u32, ac as u32, ad as u32],
        1,
    )])
}

/// PGammaL_2(16) acting on its 120 Sylow-17 subgroups, from GF(16)
/// projective-line permutations.
fn l216x4_on_120() -> Result<ControlBundle, String> {
    // GF(16) with x^4 = x + 1; point 16 is infinity.
    let mut exp = [0u8; 15];
    let mut val = 1u8;
    for e in exp.iter_mut() {
        *e = val;
        val <<= 1;
        if val & 0x10 != 0 {
            val ^= 0x13;
        }
    }
    let mut log = [0u8; 16];
    for (i, &v) in exp.iter().enumerate() {
        log[v as usize] = i as u8;
    }
    const INF: usize = 16;
    let build = |f: &dyn Fn(usize) -> usize| -> Result<Permutation, String> {
        Permutation::from_images((0..17).map(|x| f(x) as u32).collect()).map_err(|e| e.to_string())
    };
    let translate = build(&|x| if x == INF { INF } else { x ^ 1 })?;
    let multiply = build(&|x| {
        if x == INF || x == 0 {
            x
        } else {
            exp[(log[x] as usize + 1) % 15] as usize
        }
    })?;
    let invert = build(&|x| match x {
        0 => INF,
        INF => 0,
        _ => exp[(15 - log[x] as usize) % 15] as usize,
    })?;
    let frobenius = build(&|x| {
        if x == INF || x == 0 {
            x
        } else {
            exp[(2 * log[x] as usize) % 15] as usize
        }
    })?;
    let gens = vec![translate, multiply, invert, frobenius];
    let group = PermutationGroup::new(17, gens).map_err(|e| e.to_string())?;
    group
        .chain_with_expected_order(16320)
        .map_err(|e| format!("PGammaL_2(16) order: {e}"))?;

    // One Sylow 17-subgroup, then the conjugation orbit.
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1717_1717);
    let seventeen = loop {
        let candidate = group.random_element(&mut rng);
        if candidate.order() == 17 {
            break candidate;
        }
    };
    let p0 = action::minimal_power(&seventeen, 17);
    let mut items = vec![p0];
    let mut head = 0;
    while head < items.len() {
        let current = items[head].clone();
        head += 1;
        for g in group.generators() {
            let conj = action::minimal_power(&current.conjugate_by(g), 17);
            if !items.contains(&conj) {
                items.push(conj);
            }
        }
    }
    if items.len() != 120 {
        return Err(format!("{} Sylow subgroups instead of 120", items.len()));
    }
    items.sort_unstable();
    let labels = Labels::CyclicSubgroups { items, order: 17 };
    let probe = InducedAction::assemble(
        PermutationGroup::trivial(120),
        labels,
        17,
        group.generators().to_vec(),
    );
    let induced_gens = group
        .generators()
        .iter()
        .map(|g| probe.induce(g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let sylow_group = PermutationGroup::new(120, induced_gens).map_err(|e| e.to_string())?;
    if !sylow_group.is_transitive() {
        return Err("Sylow action is not transitive".into());
    }
    sylow_group
        .chain_with_expected_order(16320)
        .map_err(|e| format!("Sylow action unfaithful: {e}"))?;
    let action = InducedAction::assemble(
        sylow_group,
        probe.labels.clone(),
        17,
        group.generators().to_vec(),
    );

    let reduced = reduce_generators(17, group.generators(), 16320).map_err(|e| e.to_string())?;
    let map17 = crate::words::discovered_presentation(17, &reduced, 16320, "g", 0x1632)
        .unwrap_or_else(|| presentation_from_chain(17, &reduced, "g"));
    let images = map17
        .images
        .iter()
        .map(|g| action.induce(g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(ControlBundle {
        control_map: GeneratorMap::new(map17.presentation, images),
        action,
        stabilizer_words: Vec::new(),
        transitive: true,
        builtin_relations: Vec::new(),
    })
}

/// L_3(2) = GL_3(2) on the 7 nonzero vectors of GF(2)^3.
fn l32_on_7() -> Result<ControlBundle, String> {
    let apply = |rows: [u8; 3], v: u8| -> u8 {
        let mut out = 0u8;
        for (i, row) in rows.iter().enumerate() {
            out |= (((row & v).count_ones() & 1) as u8) << i;
        }
        out
    };
    let to_perm = |rows: [u8; 3]| -> Result<Permutation, String> {
        Permutation::from_images((1..=7).map(|v| apply(rows, v) as u32 - 1).collect())
            .map_err(|e| e.to_string())
    };
    let transvection = to_perm([0b011, 0b010, 0b100])?;
    let cycle = to_perm([0b010, 0b100, 0b001])?;
    let group = PermutationGroup::new(7, vec![transvection, cycle]).map_err(|e| e.to_string())?;
    group
        .chain_with_expected_order(168)
        .map_err(|e| format!("GL_3(2) order: {e}"))?;
    let map = presentation_from_chain(7, group.generators(), "g");
    let action = action::induced_action(&group, &action::ActionRecipe::Natural)
        .map_err(|e| e.to_string())?;
    Ok(ControlBundle {
        control_map: map,
        action,
        stabilizer_words: Vec::new(),
        transitive: true,
        builtin_relations: Vec::new(),
    })
}

/// Carmichael's presentation of A_7 on the five 3-cycles (1 2 i): the
/// generators cube to the identity and pairwise products are involutions.
pub fn carmichael_a7() -> GeneratorMap {
    let ngens = 5;
    let names = (0..ngens).map(|i| format!("x{}", i + 3)).collect();
    let mut relators = Vec::new();
    for i in 0..ngens {
        relators.push(Word::generator(i).pow(3));
        for j in (i + 1)..ngens {
            relators.push(Word::generator(i).concat(&Word::generator(j)).pow(2));
        }
    }
    let images = (0..ngens)
        .map(|i| Permutation::from_cycles(7, &[vec![0, 1, i + 2]]).expect("3-cycle"))
        .collect();
    GeneratorMap::new(crate::coset::Presentation::new(names, relators), images)
}

/// Re-exported perfectness check over a prepared entry's run.
pub fn entry_perfectness(
    prepared: &PreparedEntry,
    result: &EnumerationResult,
) -> PerfectnessReport {
    perfectness_report(&prepared.sp, result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::todd_coxeter;

    #[test]
    fn catalog_loads_with_scale_invariants() {
        let cat = catalog();
        assert_eq!(cat.entries().len(), 26);
        for e in cat.entries() {
            if let Some((index, _)) = e.expected_index {
                match e.scale {
                    Scale::Desk => assert!(index <= 20_000, "{}", e.id),
                    Scale::Heavy => assert!(index <= 2_000_000, "{}", e.id),
                    Scale::DefinitionOnly => {}
                }
            }
        }
        assert!(cat.entry("coxeter-e6").is_some());
        assert!(cat.entry("missing").is_none());
    }

    #[test]
    fn run_smallest_reflection_entry() {
        let report = catalog().run_entry("coxeter-a2", &RunOptions::default());
        assert_eq!(report.status, Status::Verified, "{}", report.message);
        assert_eq!(report.index, Some(3));
        assert_eq!(report.order, Some(6));
        assert_eq!(report.control_embeds, Some(true));
    }

    #[test]
    fn run_a4_with_double_cosets() {
        let report = catalog().run_entry("coxeter-a4", &RunOptions::default());
        assert_eq!(report.status, Status::Verified, "{}", report.message);
        let sizes: Vec<usize> = report.double_cosets.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 4]);
        assert_eq!(report.double_cosets[0].stabilizer_order, 24);
    }

    #[test]
    fn definition_only_skipped_without_force() {
        let report = catalog().run_entry("j4-trios", &RunOptions::default());
        assert_eq!(report.status, Status::Skipped);
        assert!(report.message.contains("definition-only"));
    }

    #[test]
    fn unresolved_control_reports_skip_on_force() {
        let report = catalog().run_entry(
            "fi22-cosets",
            &RunOptions {
                force: true,
                ..Default::default()
            },
        );
        assert_eq!(report.status, Status::Skipped);
        assert!(report.message.contains("out of scope"));
    }

    #[test]
    fn empty_scale_filter_is_empty() {
        let ids: Vec<&CatalogEntry> = catalog()
            .entries()
            .iter()
            .filter(|e| e.scale < Scale::Desk)
            .collect();
        assert!(ids.is_empty());
    }

    #[test]
    fn carmichael_a7_is_exact() {
        let map = carmichael_a7();
        assert!(map.is_homomorphism());
        let g = PermutationGroup::new(7, map.images.clone()).unwrap();
        assert_eq!(g.order(), 2520);
        let t = todd_coxeter(&map.presentation, &[], &EnumerationLimits::with_max(50_000)).unwrap();
        assert_eq!(t.index(), 2520);
    }

    #[test]
    fn sp62_control_is_intransitive_union() {
        let bundle = catalog()
            .build_control(&[
                "sn".into(),
                "7".into(),
                "natural+subsets".into(),
                "4".into(),
            ])
            .unwrap();
        assert_eq!(bundle.action.degree(), 42);
        assert!(!bundle.transitive);
        assert_eq!(bundle.action.labels.resolve_set(&[0, 1, 2, 3]), Some(7));
        assert!(bundle.control_map.is_homomorphism());
    }
}
