//! Progenitors `2^*n : N` and their quotients by relations `pi * w`.
//!
//! The expansion to an ordinary presentation follows the standard split
//! extension shape: the control presentation's generators plus one
//! involution letter per orbit of N on the n points, with the letter
//! commuting with (words for) the stabilizer of the orbit's base point.
//! Symmetric generators at other points are conjugates of the orbit
//! letter by Schreier words, and each relation `(pi w)^d` becomes an
//! ordinary relator through those conjugates.
//!
//! Enumerating the expansion over the control generators counts the
//! cosets of N in the target group; the finished table feeds double-coset
//! analysis, the conjugation-law and lemma checks, and `pi * w` element
//! arithmetic.

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::action::{ActionError, InducedAction, Labels};
use crate::coset::{
    todd_coxeter, CosetTable, EnumError, EnumerationLimits, Presentation, Word,
};
use crate::group::{GroupError, PermutationGroup};
use crate::perm::Permutation;
use crate::words::{evaluate_word, schreier_words, GeneratorMap, WordedChain};

#[derive(Debug, Error)]
pub enum ProgError {
    #[error("control action must be transitive to form a progenitor")]
    Intransitive,
    #[error("permutation is not a member of the control group")]
    NotInControl,
    #[error("bad relation: {0}")]
    BadRelation(String),
    #[error("control presentation certification failed: {0}")]
    Certification(String),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// The free product of n involutions extended by a permutation action of
/// the control group.
pub struct Progenitor {
    action: InducedAction,
}

impl Progenitor {
    /// A progenitor proper: the control action must be transitive.
    pub fn new(action: InducedAction) -> Result<Self, ProgError> {
        if !action.group.is_transitive() {
            return Err(ProgError::Intransitive);
        }
        Ok(Progenitor { action })
    }

    /// The paper's S_7 case acts intransitively (7 points plus 35
    /// tetrads); everything downstream handles one symmetric-generator
    /// letter per orbit.
    pub fn new_intransitive(action: InducedAction) -> Self {
        Progenitor { action }
    }

    pub fn n(&self) -> usize {
        self.action.degree()
    }

    pub fn control(&self) -> &PermutationGroup {
        &self.action.group
    }

    pub fn action(&self) -> &InducedAction {
        &self.action
    }

    /// `C_N(Stab_N(points))`: the Lemma candidates for relations touching
    /// the given symmetric generators. Computed in the source action when
    /// one is available (the centralizer is the same subgroup and the
    /// backtrack is far cheaper at the source degree).
    pub fn lemma_centralizer(&self, points: &[usize]) -> Result<PermutationGroup, ProgError> {
        for &p in points {
            if p >= self.n() {
                return Err(ProgError::Group(GroupError::PointOutOfRange {
                    point: p,
                    degree: self.n(),
                }));
            }
        }
        let ds = self.action.source_degree();
        if ds != self.action.degree() || !matches!(self.action.labels, Labels::Points(_)) {
            let source =
                PermutationGroup::new(ds, self.action.source_generators().to_vec())?;
            if self.action.is_faithful(source.order()) {
                let stab_src = self.action.stabilizer_in_source(points)?;
                let c_src = source.centralizer(&stab_src)?;
                let gens = c_src
                    .generators()
                    .iter()
                    .map(|g| self.action.induce(g))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(PermutationGroup::new(self.n(), gens)?);
            }
        }
        let stab = self.control().point_stabilizer(points)?;
        Ok(self.control().centralizer(&stab)?)
    }
}

/// A relation `(pi * t_{i1} ... t_{ik})^exponent`.
#[derive(Debug, Clone)]
pub struct SymRelation {
    pub pi: Permutation,
    pub word: Vec<u32>,
    pub exponent: u32,
    /// Optional expression of `pi` in the control presentation's
    /// generators, for controls whose worded chain would be expensive or
    /// where the word is known exactly (e.g. a symmetric generator of a
    /// bootstrapped control presentation).
    pub pi_word: Option<Word>,
}

impl SymRelation {
    pub fn new(pi: Permutation, word: Vec<u32>, exponent: u32) -> Self {
        SymRelation {
            pi,
            word,
            exponent,
            pi_word: None,
        }
    }

    /// Number of symmetric generators in the full relator.
    pub fn t_length(&self) -> usize {
        self.word.len() * self.exponent as usize
    }
}

/// An element `pi * w` of the progenitor (or its image).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgElement {
    pub pi: Permutation,
    pub word: Vec<u32>,
}

impl ProgElement {
    pub fn identity(n: usize) -> Self {
        ProgElement {
            pi: Permutation::identity(n),
            word: Vec::new(),
        }
    }

    /// `self * other = (pi1 pi2) * (w1^pi2 ++ w2)`.
    pub fn multiply(&self, other: &ProgElement) -> ProgElement {
        let pi = self.pi.compose(&other.pi);
        let mut word: Vec<u32> = self
            .word
            .iter()
            .map(|&i| other.pi.apply(i as usize) as u32)
            .collect();
        word.extend_from_slice(&other.word);
        ProgElement { pi, word }
    }

    pub fn inverse(&self) -> ProgElement {
        let pi = self.pi.inverse();
        let word: Vec<u32> = self
            .word
            .iter()
            .rev()
            .map(|&i| pi.apply(i as usize) as u32)
            .collect();
        ProgElement { pi, word }
    }

    pub fn pow(&self, e: u32) -> ProgElement {
        let mut out = ProgElement::identity(self.pi.degree());
        for _ in 0..e {
            out = out.multiply(self);
        }
        out
    }
}

/// A symmetric presentation: progenitor, relations, and a certified
/// presentation of the control group.
pub struct SymmetricPresentation {
    pub progenitor: Progenitor,
    pub relations: Vec<SymRelation>,
    pub control_map: GeneratorMap,
    /// Per orbit-base override: known stabilizer words (certified at
    /// expansion). When absent they are computed from a worded chain.
    pub stabilizer_words: Vec<(usize, Vec<Word>)>,
}

impl SymmetricPresentation {
    pub fn new(
        progenitor: Progenitor,
        relations: Vec<SymRelation>,
        control_map: GeneratorMap,
    ) -> Result<Self, ProgError> {
        let sp = SymmetricPresentation {
            progenitor,
            relations,
            control_map,
            stabilizer_words: Vec::new(),
        };
        sp.validate()?;
        Ok(sp)
    }

    fn validate(&self) -> Result<(), ProgError> {
        let n = self.progenitor.n();
        if self.control_map.degree() != n {
            return Err(ProgError::Certification(format!(
                "control map degree {} != action degree {}",
                self.control_map.degree(),
                n
            )));
        }
        for r in &self.relations {
            if r.word.is_empty() {
                return Err(ProgError::BadRelation("empty symmetric word".into()));
            }
            if r.exponent == 0 {
                return Err(ProgError::BadRelation("exponent must be positive".into()));
            }
            if r.word.iter().any(|&i| i as usize >= n) {
                return Err(ProgError::BadRelation(format!(
                    "t-index out of range (n = {n})"
                )));
            }
            if !self.progenitor.control().is_member(&r.pi) {
                return Err(ProgError::NotInControl);
            }
        }
        Ok(())
    }

    /// Certifies the control presentation: relators hold on the images
    /// and the mapped image has the control group's order.
    fn certify_control(&self) -> Result<(), ProgError> {
        if !self.control_map.is_homomorphism() {
            return Err(ProgError::Certification(
                "a relator does not evaluate to the identity".into(),
            ));
        }
        let image = PermutationGroup::new(self.control_map.degree(), self.control_map.images.clone())?;
        let expected = self.progenitor.control().order();
        image.chain_with_expected_order(expected).map_err(|_| {
            ProgError::Certification(format!(
                "mapped image order differs from control order {expected}"
            ))
        })?;
        Ok(())
    }

    /// Expands to an ordinary presentation plus subgroup words.
    pub fn expand(&self) -> Result<Expansion, ProgError> {
        self.certify_control()?;
        let n = self.progenitor.n();
        let ncontrol = self.control_map.presentation.ngens();
        let orbits = orbit_partition(&self.control_map.images, n);
        let orbit_count = orbits.iter().copied().max().map(|m| m as usize + 1).unwrap_or(0);

        // Orbit bases: least point of each orbit, in orbit-id order (ids
        // are assigned by least point, so bases are increasing).
        let mut bases = vec![usize::MAX; orbit_count];
        for p in 0..n {
            let o = orbits[p] as usize;
            if bases[o] == usize::MAX {
                bases[o] = p;
            }
        }

        let mut names = self.control_map.presentation.generator_names.clone();
        for o in 0..orbit_count {
            names.push(if o == 0 {
                "t".to_string()
            } else {
                format!("t{}", o + 1)
            });
        }
        let t_letter: Vec<usize> = (0..orbit_count).map(|o| ncontrol + o).collect();

        // Schreier words from each orbit base.
        let mut sigma: Vec<Option<Word>> = vec![None; n];
        for (o, &base) in bases.iter().enumerate() {
            let words = schreier_words(&self.control_map.images, n, base);
            for p in 0..n {
                if orbits[p] as usize == o {
                    sigma[p] = words[p].clone();
                }
            }
        }
        let sigma: Vec<Word> = sigma
            .into_iter()
            .map(|w| w.ok_or_else(|| ProgError::Internal("point missed by orbit BFS".into())))
            .collect::<Result<_, _>>()?;

        let mut relators = self.control_map.presentation.relators.clone();
        for (o, &base) in bases.iter().enumerate() {
            let t = Word::generator(t_letter[o]);
            relators.push(t.pow(2));
            let stab_words = self.stabilizer_words_for(base)?;
            for s in stab_words {
                relators.push(Word::commutator(&t, &s));
            }
        }

        let worded_chain = {
            // Built lazily: only relations without explicit pi-words need
            // the chain.
            let needs = self.relations.iter().any(|r| r.pi_word.is_none());
            if needs {
                Some(WordedChain::build(&self.control_map, &[]))
            } else {
                None
            }
        };
        for r in &self.relations {
            let pi_word = match &r.pi_word {
                Some(w) => {
                    let eval = self.control_map.evaluate(w);
                    if eval != r.pi {
                        return Err(ProgError::BadRelation(
                            "explicit pi word does not evaluate to pi".into(),
                        ));
                    }
                    w.clone()
                }
                None => worded_chain
                    .as_ref()
                    .expect("chain built when needed")
                    .express(&r.pi)
                    .ok_or(ProgError::NotInControl)?,
            };
            let mut relator = pi_word;
            for &i in &r.word {
                let o = orbits[i as usize] as usize;
                let t = Word::generator(t_letter[o]);
                relator = relator.concat(&t.conjugate_by(&sigma[i as usize]));
            }
            relators.push(relator.pow(r.exponent).free_reduce());
        }

        let subgroup: Vec<Word> = (0..ncontrol).map(Word::generator).collect();
        Ok(Expansion {
            presentation: Presentation::new(names, relators),
            subgroup,
            ncontrol,
            t_letter,
            orbit_of_point: orbits,
            sigma,
        })
    }

    fn stabilizer_words_for(&self, base: usize) -> Result<Vec<Word>, ProgError> {
        if let Some((_, words)) = self
            .stabilizer_words
            .iter()
            .find(|(b, _)| *b == base)
        {
            // Certify the override: words fix the base point and generate
            // the full stabilizer.
            let n = self.progenitor.n();
            let evals: Vec<Permutation> = words
                .iter()
                .map(|w| self.control_map.evaluate(w))
                .collect();
            for e in &evals {
                if e.apply(base) != base {
                    return Err(ProgError::Certification(
                        "stabilizer word override moves the base point".into(),
                    ));
                }
            }
            let group = PermutationGroup::new(n, evals)?;
            let orbit_len = self.progenitor.control().orbit(base)?.len() as u128;
            let expected = self.progenitor.control().order() / orbit_len;
            group.chain_with_expected_order(expected).map_err(|_| {
                ProgError::Certification("stabilizer word override undergenerates".into())
            })?;
            return Ok(words.clone());
        }
        // Short sampled words keep the commutator relators small; the
        // worded chain is the guaranteed fallback.
        let orbit_len = self.progenitor.control().orbit(base)?.len() as u128;
        let expected = self.progenitor.control().order() / orbit_len;
        if let Some(found) =
            crate::words::short_stabilizer_words(&self.control_map, base, expected, 0x57AB_0000)
        {
            return Ok(found.into_iter().map(|(_, w)| w).collect());
        }
        let chain = WordedChain::build(&self.control_map, &[base]);
        Ok(chain
            .stabilizer_generators(1)
            .into_iter()
            .map(|(_, w)| w)
            .collect())
    }

    /// Expands and enumerates the cosets of the control image.
    pub fn enumerate(&self, limits: &EnumerationLimits) -> Result<EnumerationResult, ProgError> {
        let expansion = self.expand()?;
        let table = todd_coxeter(&expansion.presentation, &expansion.subgroup, limits)?;
        EnumerationResult::from_table(self, expansion, table)
    }
}

fn orbit_partition(images: &[Permutation], n: usize) -> Vec<u32> {
    let mut orbit = vec![u32::MAX; n];
    let mut next = 0u32;
    for start in 0..n {
        if orbit[start] != u32::MAX {
            continue;
        }
        let mut queue = vec![start];
        orbit[start] = next;
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            for g in images {
                let q = g.apply(p);
                if orbit[q] == u32::MAX {
                    orbit[q] = next;
                    queue.push(q);
                }
            }
        }
        next += 1;
    }
    orbit
}

/// The ordinary presentation produced by expansion, with the bookkeeping
/// needed to interpret coset tables.
pub struct Expansion {
    pub presentation: Presentation,
    pub subgroup: Vec<Word>,
    pub ncontrol: usize,
    /// Presentation generator index of the symmetric-generator letter of
    /// each orbit.
    pub t_letter: Vec<usize>,
    pub orbit_of_point: Vec<u32>,
    /// Per point: a word in control generators mapping the orbit base to
    /// the point.
    pub sigma: Vec<Word>,
}

impl Expansion {
    /// The word for the symmetric generator at a point: the orbit letter
    /// conjugated by the point's Schreier word.
    pub fn t_word(&self, point: usize) -> Word {
        let o = self.orbit_of_point[point] as usize;
        Word::generator(self.t_letter[o]).conjugate_by(&self.sigma[point])
    }
}

/// A completed enumeration of a symmetric presentation.
pub struct EnumerationResult {
    pub expansion: Expansion,
    pub table: CosetTable,
    pub index: usize,
    pub coset_action: PermutationGroup,
    pub control_image_order: u128,
    pub control_embeds: bool,
    pub target_order: u128,
}

impl EnumerationResult {
    fn from_table(
        sp: &SymmetricPresentation,
        expansion: Expansion,
        table: CosetTable,
    ) -> Result<EnumerationResult, ProgError> {
        let index = table.index();
        let coset_action = table.coset_action();
        let control_image = PermutationGroup::new(
            index,
            (0..expansion.ncontrol)
                .map(|g| table.generator_action(g))
                .collect(),
        )?;
        let expected = sp.progenitor.control().order();
        let (control_image_order, control_embeds) =
            match control_image.chain_with_expected_order(expected) {
                Ok(chain) => (chain.order(), true),
                Err(_) => (control_image.order(), false),
            };
        let target_order = index as u128 * control_image_order;
        Ok(EnumerationResult {
            expansion,
            table,
            index,
            coset_action,
            control_image_order,
            control_embeds,
            target_order,
        })
    }

    /// The control image on the coset space (first `ncontrol` columns).
    pub fn control_image(&self) -> PermutationGroup {
        PermutationGroup::new(
            self.index,
            (0..self.expansion.ncontrol)
                .map(|g| self.table.generator_action(g))
                .collect(),
        )
        .expect("uniform degree")
    }

    /// The coset-space permutation of the symmetric generator at a point.
    pub fn t_perm(&self, point: usize) -> Permutation {
        let o = self.expansion.orbit_of_point[point] as usize;
        let t_col = self.table.generator_action(self.expansion.t_letter[o]);
        let col_perms: Vec<Permutation> = (0..self.expansion.ncontrol)
            .map(|g| self.table.generator_action(g))
            .collect();
        let sigma = evaluate_word(&col_perms, self.index, &self.expansion.sigma[point]);
        t_col.conjugate_by(&sigma)
    }

    /// All symmetric-generator permutations, point by point.
    pub fn all_t_perms(&self) -> Vec<Permutation> {
        let col_perms: Vec<Permutation> = (0..self.expansion.ncontrol)
            .map(|g| self.table.generator_action(g))
            .collect();
        let t_cols: Vec<Permutation> = self
            .expansion
            .t_letter
            .iter()
            .map(|&l| self.table.generator_action(l))
            .collect();
        (0..self.expansion.orbit_of_point.len())
            .map(|p| {
                let o = self.expansion.orbit_of_point[p] as usize;
                let sigma = evaluate_word(&col_perms, self.index, &self.expansion.sigma[p]);
                t_cols[o].conjugate_by(&sigma)
            })
            .collect()
    }

    /// Coset-space image of a control element (expressed through the
    /// control presentation).
    pub fn control_element_on_cosets(
        &self,
        sp: &SymmetricPresentation,
        pi: &Permutation,
    ) -> Result<Permutation, ProgError> {
        let chain = WordedChain::build(&sp.control_map, &[]);
        let word = chain.express(pi).ok_or(ProgError::NotInControl)?;
        let col_perms: Vec<Permutation> = (0..self.expansion.ncontrol)
            .map(|g| self.table.generator_action(g))
            .collect();
        Ok(evaluate_word(&col_perms, self.index, &word))
    }

    /// Checks Eq.-style conjugation: `image(t_i)^image(g) = image(t_{g(i)})`
    /// for `samples` random pairs `(g, i)`.
    pub fn check_conjugation_law(
        &self,
        sp: &SymmetricPresentation,
        samples: usize,
        rng: &mut impl Rng,
    ) -> bool {
        let n = sp.progenitor.n();
        let col_perms: Vec<Permutation> = (0..self.expansion.ncontrol)
            .map(|g| self.table.generator_action(g))
            .collect();
        let t_perms = self.all_t_perms();
        for _ in 0..samples {
            let len = rng.gen_range(1..=10);
            let word = Word(
                (0..len)
                    .map(|_| rng.gen_range(1..=self.expansion.ncontrol as i32))
                    .collect(),
            );
            let g_points = sp.control_map.evaluate(&word);
            let g_cosets = evaluate_word(&col_perms, self.index, &word);
            let i = rng.gen_range(0..n);
            let conjugated = t_perms[i].conjugate_by(&g_cosets);
            if conjugated != t_perms[g_points.apply(i)] {
                return false;
            }
        }
        true
    }
}

/// One double coset `N w N`: its size in single cosets, representative
/// data, and the t-labelled edges out of it.
#[derive(Debug, Clone)]
pub struct DoubleCoset {
    pub representative: usize,
    pub word: Vec<u32>,
    pub orbit_size: usize,
    pub stabilizer_order: u128,
    /// Per target double coset: the symmetric generators (by point) that
    /// move the representative there.
    pub edges: Vec<(usize, Vec<u32>)>,
}

/// The orbits of N on the coset space with their coset-stabilizing data.
#[derive(Debug, Clone)]
pub struct DoubleCosetTable {
    pub cosets: Vec<DoubleCoset>,
    pub index: usize,
    pub control_image_order: u128,
}

impl DoubleCosetTable {
    pub fn partition_identity_holds(&self) -> bool {
        self.cosets.iter().map(|c| c.orbit_size).sum::<usize>() == self.index
    }
}

/// Computes the double cosets of an enumerated symmetric presentation:
/// N-orbits on the coset space, BFS-shortest t-words for representatives,
/// stabilizer orders by orbit-stabilizer, and the labelled edge structure.
pub fn double_coset_analysis(result: &EnumerationResult) -> Result<DoubleCosetTable, ProgError> {
    let index = result.index;
    let n = result.expansion.orbit_of_point.len();
    let t_perms = result.all_t_perms();
    let control_image = result.control_image();

    // N-orbits on cosets.
    let mut orbit_id = vec![u32::MAX; index];
    let mut orbit_sizes: Vec<usize> = Vec::new();
    for start in 0..index {
        if orbit_id[start] != u32::MAX {
            continue;
        }
        let id = orbit_sizes.len() as u32;
        let mut queue = vec![start];
        orbit_id[start] = id;
        let mut head = 0;
        while head < queue.len() {
            let c = queue[head];
            head += 1;
            for g in control_image.generators() {
                let d = g.apply(c);
                if orbit_id[d] == u32::MAX {
                    orbit_id[d] = id;
                    queue.push(d);
                }
            }
        }
        orbit_sizes.push(queue.len());
    }

    // BFS over t-edges from coset 0: canonical words and discovery order.
    let mut parent: Vec<Option<(u32, u32)>> = vec![None; index];
    let mut bfs_order: Vec<u32> = vec![0];
    parent[0] = Some((0, u32::MAX));
    let mut head = 0;
    while head < bfs_order.len() {
        let c = bfs_order[head] as usize;
        head += 1;
        for (i, t) in t_perms.iter().enumerate() {
            let d = t.apply(c);
            if parent[d].is_none() {
                parent[d] = Some((c as u32, i as u32));
                bfs_order.push(d as u32);
            }
        }
    }
    if bfs_order.len() != index {
        return Err(ProgError::Internal(
            "t-edge graph does not reach every coset".into(),
        ));
    }
    let word_of = |c: usize| -> Vec<u32> {
        let mut w = Vec::new();
        let mut p = c;
        while p != 0 {
            let (prev, label) = parent[p].expect("BFS tree");
            w.push(label);
            p = prev as usize;
        }
        w.reverse();
        w
    };

    // Representative of each N-orbit: the earliest coset in t-BFS order.
    let mut rep_of_orbit: Vec<Option<u32>> = vec![None; orbit_sizes.len()];
    let mut dc_order: Vec<u32> = Vec::new();
    for &c in &bfs_order {
        let o = orbit_id[c as usize] as usize;
        if rep_of_orbit[o].is_none() {
            rep_of_orbit[o] = Some(c);
            dc_order.push(o as u32);
        }
    }

    let image_order = result.control_image_order;
    let mut cosets = Vec::with_capacity(orbit_sizes.len());
    let mut dc_index_of_orbit = vec![usize::MAX; orbit_sizes.len()];
    for (k, &o) in dc_order.iter().enumerate() {
        dc_index_of_orbit[o as usize] = k;
    }
    for &o in &dc_order {
        let o = o as usize;
        let rep = rep_of_orbit[o].expect("orbit has a representative") as usize;
        let size = orbit_sizes[o];
        if image_order % size as u128 != 0 {
            return Err(ProgError::Internal(
                "orbit size does not divide the control image order".into(),
            ));
        }
        let mut edges: Vec<(usize, Vec<u32>)> = Vec::new();
        for i in 0..n {
            let target = orbit_id[t_perms[i].apply(rep)] as usize;
            let target_dc = dc_index_of_orbit[target];
            match edges.iter_mut().find(|(t, _)| *t == target_dc) {
                Some((_, labels)) => labels.push(i as u32),
                None => edges.push((target_dc, vec![i as u32])),
            }
        }
        edges.sort_by_key(|(t, _)| *t);
        cosets.push(DoubleCoset {
            representative: rep,
            word: word_of(rep),
            orbit_size: size,
            stabilizer_order: image_order / size as u128,
            edges,
        });
    }
    let table = DoubleCosetTable {
        cosets,
        index,
        control_image_order: image_order,
    };
    if !table.partition_identity_holds() {
        return Err(ProgError::Internal("orbit sizes do not sum to index".into()));
    }
    Ok(table)
}

/// Perfectness data per Lemma-style analysis: when the control is
/// perfect, the image's abelianization must have order 1 or 2, and must
/// be 1 when some relation has odd t-length.
#[derive(Debug, Clone)]
pub struct PerfectnessReport {
    pub control_perfect: bool,
    pub image_abelianization: u128,
    pub has_odd_length_relation: bool,
    pub lemma_consistent: Option<bool>,
}

pub fn perfectness_report(
    sp: &SymmetricPresentation,
    result: &EnumerationResult,
) -> PerfectnessReport {
    let control_perfect = sp.progenitor.control().is_perfect();
    let image_abelianization = result.coset_action.abelianization_order();
    let has_odd_length_relation = sp.relations.iter().any(|r| r.t_length() % 2 == 1);
    let lemma_consistent = if control_perfect {
        let bounded = image_abelianization == 1 || image_abelianization == 2;
        let odd_forces_one = !has_odd_length_relation || image_abelianization == 1;
        Some(bounded && odd_forces_one)
    } else {
        None
    };
    PerfectnessReport {
        control_perfect,
        image_abelianization,
        has_odd_length_relation,
        lemma_consistent,
    }
}

/// Counts violations of the two-generator Lemma on an enumerated image:
/// every word in `<t_i, t_j>` of length at most `max_len` whose image
/// lies in the control image must lie in the image of
/// `C_N(Stab_N(i, j))`.
pub fn lemma_violations(
    sp: &SymmetricPresentation,
    result: &EnumerationResult,
    pairs: &[(usize, usize)],
    max_len: usize,
) -> Result<usize, ProgError> {
    let control_image = result.control_image();
    let chain = WordedChain::build(&sp.control_map, &[]);
    let col_perms: Vec<Permutation> = (0..result.expansion.ncontrol)
        .map(|g| result.table.generator_action(g))
        .collect();
    let mut violations = 0;
    for &(i, j) in pairs {
        let c_group = sp.progenitor.lemma_centralizer(&[i, j])?;
        let c_image_gens = c_group
            .generators()
            .iter()
            .map(|g| {
                let w = chain.express(g).ok_or(ProgError::NotInControl)?;
                Ok(evaluate_word(&col_perms, result.index, &w))
            })
            .collect::<Result<Vec<_>, ProgError>>()?;
        let c_image = PermutationGroup::new(result.index, c_image_gens)?;
        let ti = result.t_perm(i);
        let tj = result.t_perm(j);
        for (first, second) in [(&ti, &tj), (&tj, &ti)] {
            let mut current = Permutation::identity(result.index);
            for step in 0..max_len {
                let factor = if step % 2 == 0 { first } else { second };
                current = current.compose(factor);
                if control_image.is_member(&current) && !c_image.is_member(&current) {
                    violations += 1;
                }
            }
        }
    }
    Ok(violations)
}

/// How relation-search candidates are drawn.
#[derive(Debug, Clone)]
pub enum CandidateSource {
    /// Elements of `C_N(Stab_N(points))` for the template's points.
    LemmaCentralizer { order: Option<u128> },
    /// All control elements of the given order (control must be small
    /// enough to enumerate).
    OrderFilter { order: u128, element_cap: usize },
}

#[derive(Debug)]
pub struct SearchOutcome {
    pub candidates_tested: usize,
    /// Surviving `(pi, index)` pairs in deterministic candidate order.
    pub survivors: Vec<(Permutation, usize)>,
}

/// Tries each candidate permutation in the relation template
/// `(pi * t_word)^exponent` (together with the presentation's existing
/// relations) and reports those that enumerate to a finite index > 1
/// within the cap. Candidates are reduced up to conjugacy under the
/// pointwise stabilizer of the template's points, which maps a relation
/// to an equivalent one.
pub fn relation_search(
    sp: &SymmetricPresentation,
    template_word: &[u32],
    exponent: u32,
    source: &CandidateSource,
    limits: &EnumerationLimits,
) -> Result<SearchOutcome, ProgError> {
    if template_word.is_empty() {
        return Err(ProgError::BadRelation("empty template word".into()));
    }
    let mut points: Vec<usize> = template_word.iter().map(|&i| i as usize).collect();
    points.sort_unstable();
    points.dedup();
    if points.len() > 3 {
        return Err(ProgError::BadRelation(
            "template references more than 3 distinct generators".into(),
        ));
    }

    let raw: Vec<Permutation> = match source {
        CandidateSource::LemmaCentralizer { order } => {
            let c = sp.progenitor.lemma_centralizer(&points)?;
            let elements = c.elements(100_000).ok_or_else(|| {
                ProgError::Internal("lemma centralizer unexpectedly large".into())
            })?;
            elements
                .into_iter()
                .filter(|e| !e.is_identity())
                .filter(|e| order.map_or(true, |o| e.order() == o))
                .collect()
        }
        CandidateSource::OrderFilter { order, element_cap } => {
            let elements = sp
                .progenitor
                .control()
                .elements(*element_cap)
                .ok_or(ProgError::Action(ActionError::CapExceeded(*element_cap)))?;
            elements
                .into_iter()
                .filter(|e| e.order() == *order)
                .collect()
        }
    };

    // Reduce up to conjugacy under the stabilizer of the template points.
    let stab = sp.progenitor.control().point_stabilizer(&points)?;
    let mut reps: Vec<Permutation> = Vec::new();
    let mut seen: std::collections::HashSet<Permutation> = std::collections::HashSet::new();
    for cand in raw {
        if seen.contains(&cand) {
            continue;
        }
        let mut orbit = vec![cand.clone()];
        let mut head = 0;
        let mut minimal = cand.clone();
        seen.insert(cand);
        while head < orbit.len() {
            let e = orbit[head].clone();
            head += 1;
            for g in stab.generators() {
                let c = e.conjugate_by(g);
                if seen.insert(c.clone()) {
                    if c < minimal {
                        minimal = c.clone();
                    }
                    orbit.push(c);
                }
            }
        }
        reps.push(minimal);
    }
    reps.sort_unstable();
    reps.dedup();

    let survivors: Vec<Option<(Permutation, usize)>> = reps
        .par_iter()
        .map(|pi| {
            let mut relations = sp.relations.clone();
            relations.push(SymRelation::new(
                pi.clone(),
                template_word.to_vec(),
                exponent,
            ));
            let candidate_sp = SymmetricPresentation {
                progenitor: Progenitor {
                    action: sp.progenitor.action.clone(),
                },
                relations,
                control_map: sp.control_map.clone(),
                stabilizer_words: sp.stabilizer_words.clone(),
            };
            match candidate_sp.enumerate(limits) {
                Ok(result) if result.index > 1 => Some((pi.clone(), result.index)),
                _ => None,
            }
        })
        .collect();

    Ok(SearchOutcome {
        candidates_tested: reps.len(),
        survivors: survivors.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{induced_action, ActionRecipe};
    use crate::words::coxeter_symmetric;
    use rand::SeedableRng;

    fn natural_progenitor(n: usize) -> (Progenitor, GeneratorMap) {
        let map = coxeter_symmetric(n);
        let group = PermutationGroup::new(n, map.images.clone()).unwrap();
        let action = induced_action(&group, &ActionRecipe::Natural).unwrap();
        (Progenitor::new(action).unwrap(), map)
    }

    fn theorem_a_presentation(n: usize) -> SymmetricPresentation {
        let (prog, map) = natural_progenitor(n);
        let pi = Permutation::parse_cycles("(1 2)", n).unwrap();
        let rel = SymRelation::new(pi, vec![0], 3);
        SymmetricPresentation::new(prog, vec![rel], map).unwrap()
    }

    #[test]
    fn smoke_case_s2() {
        // 2^*2 : S_2 with ((1 2) t_1)^3 has index 3 and order 6.
        let sp = theorem_a_presentation(2);
        let result = sp.enumerate(&EnumerationLimits::with_max(1000)).unwrap();
        assert_eq!(result.index, 3);
        assert!(result.control_embeds);
        assert_eq!(result.target_order, 6);
    }

    #[test]
    fn theorem_a4_index_5_order_120() {
        let sp = theorem_a_presentation(4);
        let result = sp.enumerate(&EnumerationLimits::with_max(10_000)).unwrap();
        assert_eq!(result.index, 5);
        assert_eq!(result.target_order, 120);
        assert!(result.control_embeds);
        assert_eq!(result.coset_action.order(), 120);
    }

    #[test]
    fn theorem_d4_index_8_order_192() {
        let map = coxeter_symmetric(4);
        let group = PermutationGroup::new(4, map.images.clone()).unwrap();
        let action = induced_action(&group, &ActionRecipe::OnKSubsets(2)).unwrap();
        let base = action.labels.resolve_set(&[0, 1]).unwrap();
        assert_eq!(base, 0);
        let pi_points = Permutation::parse_cycles("(2 3)", 4).unwrap();
        let pi = action.induce(&pi_points).unwrap();
        let prog = Progenitor::new(action).unwrap();
        let induced_map = GeneratorMap::new(
            map.presentation.clone(),
            map.images
                .iter()
                .map(|g| prog.action().induce(g).unwrap())
                .collect(),
        );
        let rel = SymRelation::new(pi, vec![0], 3);
        let sp = SymmetricPresentation::new(prog, vec![rel], induced_map).unwrap();
        let result = sp.enumerate(&EnumerationLimits::with_max(10_000)).unwrap();
        assert_eq!(result.index, 8);
        assert_eq!(result.target_order, 192);
    }

    #[test]
    fn double_cosets_of_a4() {
        let sp = theorem_a_presentation(4);
        let result = sp.enumerate(&EnumerationLimits::with_max(10_000)).unwrap();
        let dc = double_coset_analysis(&result).unwrap();
        assert!(dc.partition_identity_holds());
        // Brute-force oracle: orbits of the control image on the 5-coset
        // space are {N} and one orbit of size 4 at t-depth 1.
        assert_eq!(dc.cosets.len(), 2);
        assert_eq!(dc.cosets[0].orbit_size, 1);
        assert_eq!(dc.cosets[0].word, Vec::<u32>::new());
        assert_eq!(dc.cosets[0].stabilizer_order, 24);
        assert_eq!(dc.cosets[1].orbit_size, 4);
        assert_eq!(dc.cosets[1].word.len(), 1);
        // Edge labels out of each double coset partition the n points.
        for c in &dc.cosets {
            let total: usize = c.edges.iter().map(|(_, l)| l.len()).sum();
            assert_eq!(total, 4);
        }
    }

    #[test]
    fn eq1_conjugation_law_on_a4() {
        let sp = theorem_a_presentation(4);
        let result = sp.enumerate(&EnumerationLimits::with_max(10_000)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        assert!(result.check_conjugation_law(&sp, 100, &mut rng));
    }

    #[test]
    fn lemma_centralizer_natural_action() {
        // C_{S_5}(Stab(1,2)) = <(1 2)>, order 2.
        let (prog, _) = natural_progenitor(5);
        let c = prog.lemma_centralizer(&[0, 1]).unwrap();
        assert_eq!(c.order(), 2);
        // For S_4 the stabilizer of two points is <(3 4)> whose
        // centralizer is the Klein-type group of order 4.
        let (prog4, _) = natural_progenitor(4);
        let c4 = prog4.lemma_centralizer(&[0, 1]).unwrap();
        assert_eq!(c4.order(), 4);
        // Stabilizing every point leaves all of N.
        let c_all = prog4.lemma_centralizer(&[0, 1, 2, 3]).unwrap();
        assert_eq!(c_all.order(), 24);
    }

    #[test]
    fn lemma_centralizer_via_source_matches_direct() {
        let map = coxeter_symmetric(5);
        let group = PermutationGroup::new(5, map.images.clone()).unwrap();
        let action = induced_action(&group, &ActionRecipe::OnKSubsets(2)).unwrap();
        let prog = Progenitor::new(action).unwrap();
        let c = prog.lemma_centralizer(&[0]).unwrap();
        // Direct computation on the 10-point action.
        let stab = prog.control().point_stabilizer(&[0]).unwrap();
        let direct = prog.control().centralizer(&stab).unwrap();
        assert_eq!(c.order(), direct.order());
        for g in c.generators() {
            assert!(direct.is_member(g));
        }
    }

    #[test]
    fn relation_search_on_w_a3() {
        let (prog, map) = natural_progenitor(3);
        let sp = SymmetricPresentation::new(prog, vec![], map).unwrap();
        let outcome = relation_search(
            &sp,
            &[0],
            3,
            &CandidateSource::OrderFilter {
                order: 2,
                element_cap: 1000,
            },
            &EnumerationLimits::with_max(1000),
        )
        .unwrap();
        assert_eq!(outcome.survivors.len(), 1);
        let (pi, index) = &outcome.survivors[0];
        assert_eq!(*index, 4);
        assert_eq!(pi, &Permutation::parse_cycles("(1 2)", 3).unwrap());
    }

    #[test]
    fn relation_search_impossible_constraint() {
        let (prog, map) = natural_progenitor(4);
        let sp = SymmetricPresentation::new(prog, vec![], map).unwrap();
        let outcome = relation_search(
            &sp,
            &[0],
            3,
            &CandidateSource::OrderFilter {
                order: 7,
                element_cap: 1000,
            },
            &EnumerationLimits::with_max(1000),
        )
        .unwrap();
        assert_eq!(outcome.candidates_tested, 0);
        assert!(outcome.survivors.is_empty());
    }

    #[test]
    fn perfectness_gates() {
        // Control S_4 is not perfect: the lemma check must be skipped.
        let sp = theorem_a_presentation(4);
        let result = sp.enumerate(&EnumerationLimits::with_max(10_000)).unwrap();
        let report = perfectness_report(&sp, &result);
        assert!(!report.control_perfect);
        assert!(report.lemma_consistent.is_none());
        // W(A_4) = S_5 has abelianization of order 2.
        assert_eq!(report.image_abelianization, 2);
    }

    #[test]
    fn prog_element_arithmetic() {
        let pi = Permutation::parse_cycles("(1 2 3)", 4).unwrap();
        let e = ProgElement {
            pi: pi.clone(),
            word: vec![0, 2],
        };
        let inv = e.inverse();
        let prod = e.multiply(&inv);
        assert!(prod.pi.is_identity());
        // w * w^-1 is a palindrome that freely cancels in the image but
        // not as a raw index sequence; only pi cancellation is checked.
        assert_eq!(prod.word.len(), 4);
        // Conjugation moves indices: (1, t_0) * (pi, empty) = (pi, t_{pi(0)}).
        let t0 = ProgElement {
            pi: Permutation::identity(4),
            word: vec![0],
        };
        let p = ProgElement {
            pi: pi.clone(),
            word: vec![],
        };
        let conj = t0.multiply(&p);
        assert_eq!(conj.word, vec![pi.apply(0) as u32]);
    }

    #[test]
    fn invalid_relations_rejected() {
        let (prog, map) = natural_progenitor(4);
        let bad_pi = Permutation::parse_cycles("(1 2)", 5).unwrap();
        assert!(SymmetricPresentation::new(
            Progenitor {
                action: prog.action().clone()
            },
            vec![SymRelation::new(bad_pi, vec![0], 3)],
            map.clone()
        )
        .is_err());
        let out_of_range = SymRelation::new(Permutation::identity(4), vec![9], 2);
        assert!(SymmetricPresentation::new(
            Progenitor {
                action: prog.action().clone()
            },
            vec![out_of_range],
            map.clone()
        )
        .is_err());
        // Intransitive actions are rejected by the strict constructor.
        let sub = PermutationGroup::new(
            4,
            vec![Permutation::parse_cycles("(1 2)", 4).unwrap()],
        )
        .unwrap();
        let action = induced_action(&sub, &ActionRecipe::Natural).unwrap();
        assert!(Progenitor::new(action).is_err());
    }
}
