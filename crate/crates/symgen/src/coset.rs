//! Todd-Coxeter coset enumeration over a subgroup of a finitely presented
//! group.
//!
//! The default strategy is Felsch: definitions are made at the first gap in
//! the table and every new edge is propagated through relator tables via a
//! deduction stack, which keeps the table small on short relators. An
//! HLT-with-lookahead strategy is selectable. Coincidences go through a
//! merge queue with path-compressed representative lookup; dead rows are
//! reclaimed only by compaction at completion (or, for HLT, when a
//! lookahead pass demands it), so coset numbering stays reproducible.
//!
//! A finished table carries a completion certificate: every relator has
//! been traced to the identity from every live coset and every subgroup
//! word fixes coset 0.

use std::collections::VecDeque;
use std::sync::OnceLock;
use std::time::Instant;

use thiserror::Error;

use crate::group::PermutationGroup;
use crate::perm::Permutation;

/// A word over presentation generators: letter `+k` is generator `k-1`,
/// `-k` its inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The one-letter word for generator `index` (0-based).
    pub fn generator(index: usize) -> Self {
        Word(vec![index as i32 + 1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn pow(&self, e: u32) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() * e as usize);
        for _ in 0..e {
            letters.extend_from_slice(&self.0);
        }
        Word(letters)
    }

    /// `other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Word) -> Word {
        other.inverse().concat(self).concat(other)
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().concat(&b.inverse()).concat(a).concat(b)
    }

    /// Cancels adjacent inverse pairs.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free plus cyclic reduction.
    pub fn cyclically_reduce(&self) -> Word {
        let mut w = self.free_reduce().0;
        while w.len() >= 2 && w[0] == -*w.last().expect("nonempty") {
            w.pop();
            w.remove(0);
        }
        Word(w)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&l| l.unsigned_abs() as usize).max()
    }
}

/// Abstract generators plus relators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Self {
        Presentation {
            generator_names,
            relators,
        }
    }

    pub fn ngens(&self) -> usize {
        self.generator_names.len()
    }

    pub fn word_to_string(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for &l in &word.0 {
            let name = &self.generator_names[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^-1"));
            }
        }
        parts.join("*")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Felsch,
    HltLookahead,
}

#[derive(Debug, Clone)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    pub strategy: Strategy,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: 5_000_000,
            strategy: Strategy::Felsch,
        }
    }
}

impl EnumerationLimits {
    pub fn with_max(max_cosets: usize) -> Self {
        EnumerationLimits {
            max_cosets,
            ..Default::default()
        }
    }
}

/// High-water statistics of an enumeration.
#[derive(Debug, Clone, Default)]
pub struct EnumStats {
    pub live: usize,
    pub total_defined: u64,
    pub merges: u64,
    pub seconds: f64,
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("coset limit {max_cosets} reached: {} live, {} defined, {} merged",
        stats.live, stats.total_defined, stats.merges)]
    Overflow {
        max_cosets: usize,
        stats: EnumStats,
    },
    #[error("malformed word: letter {letter} outside 1..={ngens}")]
    MalformedWord { letter: i32, ngens: usize },
    #[error("coset {0} is dead or out of range")]
    BadCoset(usize),
}

const UNDEF: u32 = u32::MAX;

/// A complete, compacted coset table. Row 0 is the subgroup coset.
#[derive(Debug)]
pub struct CosetTable {
    presentation: Presentation,
    subgroup: Vec<Word>,
    ncols: usize,
    index: usize,
    table: Vec<u32>,
    stats: EnumStats,
    bfs_tree: OnceLock<Vec<(u32, u16)>>,
}

/// Runs the enumeration. On success the table is complete, collapsed and
/// certified; on overflow the error carries high-water statistics.
pub fn todd_coxeter(
    presentation: &Presentation,
    subgroup: &[Word],
    limits: &EnumerationLimits,
) -> Result<CosetTable, EnumError> {
    let ngens = presentation.ngens();
    for w in presentation.relators.iter().chain(subgroup.iter()) {
        if let Some(max) = w.max_generator() {
            if max > ngens {
                let letter = *w
                    .0
                    .iter()
                    .find(|l| l.unsigned_abs() as usize > ngens)
                    .expect("bad letter");
                return Err(EnumError::MalformedWord { letter, ngens });
            }
        }
    }
    let start = Instant::now();
    let mut engine = Engine::new(presentation, subgroup, limits);
    let result = match limits.strategy {
        Strategy::Felsch => engine.run_felsch(),
        Strategy::HltLookahead => engine.run_hlt(),
    };
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(()) => {
            engine.certify();
            Ok(engine.into_table(presentation, subgroup, seconds))
        }
        Err(()) => {
            let stats = EnumStats {
                live: engine.live_count(),
                total_defined: engine.total_defined,
                merges: engine.merges,
                seconds,
            };
            Err(EnumError::Overflow {
                max_cosets: limits.max_cosets,
                stats,
            })
        }
    }
}

struct Engine {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    dead_queue: VecDeque<u32>,
    deductions: Vec<(u32, u16)>,
    /// Cyclic rotations of relators and their inverses, grouped by first
    /// letter.
    rotations: Vec<Vec<u16>>,
    rotation_index: Vec<Vec<u32>>,
    relators: Vec<Vec<u16>>,
    subgroup_words: Vec<Vec<u16>>,
    max_cosets: usize,
    total_defined: u64,
    merges: u64,
}

#[inline]
fn col_inv(x: u16) -> u16 {
    x ^ 1
}

fn word_to_cols(w: &Word) -> Vec<u16> {
    w.0.iter()
        .map(|&l| {
            let g = (l.unsigned_abs() - 1) as u16;
            if l > 0 {
                2 * g
            } else {
                2 * g + 1
            }
        })
        .collect()
}

impl Engine {
    fn new(presentation: &Presentation, subgroup: &[Word], limits: &EnumerationLimits) -> Self {
        let ncols = presentation.ngens() * 2;
        let mut relators: Vec<Vec<u16>> = Vec::new();
        for r in &presentation.relators {
            let r = r.cyclically_reduce();
            if !r.is_empty() {
                relators.push(word_to_cols(&r));
            }
        }
        relators.sort();
        relators.dedup();

        let mut rotations: Vec<Vec<u16>> = Vec::new();
        for r in &relators {
            let inv: Vec<u16> = r.iter().rev().map(|&x| col_inv(x)).collect();
            for w in [r, &inv] {
                for s in 0..w.len() {
                    let mut rot = Vec::with_capacity(w.len());
                    rot.extend_from_slice(&w[s..]);
                    rot.extend_from_slice(&w[..s]);
                    rotations.push(rot);
                }
            }
        }
        rotations.sort();
        rotations.dedup();
        let mut rotation_index = vec![Vec::new(); ncols];
        for (i, rot) in rotations.iter().enumerate() {
            rotation_index[rot[0] as usize].push(i as u32);
        }

        Engine {
            ncols,
            table: vec![UNDEF; ncols],
            parent: vec![0],
            dead_queue: VecDeque::new(),
            deductions: Vec::new(),
            rotations,
            rotation_index,
            relators,
            subgroup_words: subgroup
                .iter()
                .map(|w| word_to_cols(&w.free_reduce()))
                .filter(|w| !w.is_empty())
                .collect(),
            max_cosets: limits.max_cosets.max(1),
            total_defined: 1,
            merges: 0,
        }
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn entry(&self, coset: u32, col: u16) -> u32 {
        self.table[coset as usize * self.ncols + col as usize]
    }

    #[inline]
    fn set_entry(&mut self, coset: u32, col: u16, value: u32) {
        self.table[coset as usize * self.ncols + col as usize] = value;
    }

    #[inline]
    fn is_live(&self, coset: u32) -> bool {
        self.parent[coset as usize] == coset
    }

    fn rep(&mut self, coset: u32) -> u32 {
        let mut root = coset;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut c = coset;
        while c != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn live_count(&self) -> usize {
        (0..self.rows()).filter(|&c| self.parent[c] == c as u32).count()
    }

    /// Records the edge in both directions and queues deductions.
    fn set_edge(&mut self, a: u32, col: u16, b: u32) {
        self.set_entry(a, col, b);
        self.set_entry(b, col_inv(col), a);
        self.deductions.push((a, col));
        self.deductions.push((b, col_inv(col)));
    }

    /// Defines a new coset at the gap `(a, col)`. Errors mean overflow.
    fn define(&mut self, a: u32, col: u16) -> Result<u32, ()> {
        if self.rows() >= self.max_cosets {
            return Err(());
        }
        let b = self.rows() as u32;
        self.parent.push(b);
        self.table.extend(std::iter::repeat(UNDEF).take(self.ncols));
        self.total_defined += 1;
        self.set_edge(a, col, b);
        Ok(b)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill as usize] = keep;
        self.merges += 1;
        self.dead_queue.push_back(kill);
    }

    fn process_coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(dead) = self.dead_queue.pop_front() {
            for col in 0..self.ncols as u16 {
                let target = self.entry(dead, col);
                if target == UNDEF {
                    continue;
                }
                self.set_entry(target, col_inv(col), UNDEF);
                let mu = self.rep(dead);
                let nu = self.rep(target);
                let mu_img = self.entry(mu, col);
                if mu_img != UNDEF {
                    self.merge(nu, mu_img);
                } else {
                    let nu_pre = self.entry(nu, col_inv(col));
                    if nu_pre != UNDEF {
                        self.merge(mu, nu_pre);
                    } else {
                        self.set_edge(mu, col, nu);
                    }
                }
            }
        }
    }

    /// Scans `word` as a relator from `base` without defining cosets;
    /// completes deductions and coincidences where forced.
    fn scan(&mut self, base: u32, word: &[u16]) {
        let mut f = base;
        let mut i = 0;
        let mut b = base;
        let mut j = word.len();
        while i < j {
            let next = self.entry(f, word[i]);
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == j {
            if f != b {
                self.process_coincidence(f, b);
            }
            return;
        }
        while j > i {
            let prev = self.entry(b, col_inv(word[j - 1]));
            if prev == UNDEF {
                break;
            }
            b = prev;
            j -= 1;
        }
        if j == i {
            self.process_coincidence(f, b);
        } else if j == i + 1 {
            self.set_edge(f, word[i], b);
        }
    }

    /// HLT scan: like `scan` but fills gaps by defining new cosets.
    fn scan_and_fill(&mut self, base: u32, word: &[u16]) -> Result<(), ()> {
        let mut f = base;
        let mut i = 0;
        let mut b = base;
        let mut j = word.len();
        loop {
            while i < j {
                let next = self.entry(f, word[i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.process_coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let prev = self.entry(b, col_inv(word[j - 1]));
                if prev == UNDEF {
                    break;
                }
                b = prev;
                j -= 1;
            }
            if j == i {
                self.process_coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set_edge(f, word[i], b);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    fn drain_deductions(&mut self) {
        while let Some((coset, col)) = self.deductions.pop() {
            if !self.is_live(coset) {
                continue;
            }
            if self.entry(coset, col) == UNDEF {
                continue;
            }
            let list = std::mem::take(&mut self.rotation_index[col as usize]);
            for &ri in &list {
                let rotation = self.rotations[ri as usize].clone();
                self.scan(coset, &rotation);
                if !self.is_live(coset) {
                    break;
                }
            }
            self.rotation_index[col as usize] = list;
        }
    }

    fn run_felsch(&mut self) -> Result<(), ()> {
        let words = self.subgroup_words.clone();
        for w in &words {
            let base = self.rep(0);
            self.scan_and_fill(base, w)?;
            self.drain_deductions();
        }
        let mut scan_row: u32 = 0;
        loop {
            self.drain_deductions();
            let mut gap = None;
            'find: while (scan_row as usize) < self.rows() {
                if self.is_live(scan_row) {
                    for col in 0..self.ncols as u16 {
                        if self.entry(scan_row, col) == UNDEF {
                            gap = Some((scan_row, col));
                            break 'find;
                        }
                    }
                }
                scan_row += 1;
            }
            match gap {
                None => return Ok(()),
                Some((row, col)) => {
                    self.define(row, col)?;
                }
            }
        }
    }

    fn run_hlt(&mut self) -> Result<(), ()> {
        let words = self.subgroup_words.clone();
        for w in &words {
            let base = self.rep(0);
            self.scan_and_fill(base, w)?;
        }
        self.deductions.clear();
        let relators = self.relators.clone();
        let mut alpha: u32 = 0;
        loop {
            if alpha as usize >= self.rows() {
                return Ok(());
            }
            if !self.is_live(alpha) {
                alpha += 1;
                continue;
            }
            for r in &relators {
                if self.scan_and_fill(alpha, r).is_err() {
                    // Cap pressure: lookahead over all live cosets, then
                    // compact (the one on-demand compaction) and retry.
                    self.deductions.clear();
                    for c in 0..self.rows() as u32 {
                        if !self.is_live(c) {
                            continue;
                        }
                        for r2 in &relators {
                            self.scan(c, r2);
                            if !self.is_live(c) {
                                break;
                            }
                        }
                        self.deductions.clear();
                    }
                    let live = self.live_count();
                    if live * 10 >= self.max_cosets * 9 {
                        return Err(());
                    }
                    alpha = self.rep(alpha);
                    let remap = self.compact();
                    alpha = remap[alpha as usize];
                    self.scan_and_fill(alpha, r)?;
                }
                alpha = self.rep(alpha);
                if !self.is_live(alpha) {
                    break;
                }
                self.deductions.clear();
            }
            if self.is_live(alpha) {
                for col in 0..self.ncols as u16 {
                    if self.entry(alpha, col) == UNDEF {
                        self.define(alpha, col)?;
                        self.deductions.clear();
                    }
                }
            }
            alpha += 1;
        }
    }

    /// Renumbers live cosets, preserving order. Returns old -> new.
    fn compact(&mut self) -> Vec<u32> {
        let rows = self.rows();
        let mut remap = vec![UNDEF; rows];
        let mut next = 0u32;
        for c in 0..rows as u32 {
            if self.is_live(c) {
                remap[c as usize] = next;
                next += 1;
            }
        }
        // Resolve every entry through union-find before renumbering.
        for c in 0..rows as u32 {
            if !self.is_live(c) {
                continue;
            }
            for col in 0..self.ncols {
                let v = self.table[c as usize * self.ncols + col];
                if v != UNDEF {
                    let r = self.rep(v);
                    self.table[c as usize * self.ncols + col] = r;
                }
            }
        }
        let ncols = self.ncols;
        for c in 0..rows as u32 {
            let new_c = remap[c as usize];
            if new_c == UNDEF {
                continue;
            }
            for col in 0..ncols {
                let v = self.table[c as usize * ncols + col];
                let nv = if v == UNDEF { UNDEF } else { remap[v as usize] };
                self.table[new_c as usize * ncols + col] = nv;
            }
        }
        self.table.truncate(next as usize * ncols);
        self.parent = (0..next).collect();
        remap
    }

    /// Completion certificate: total table, relators trace trivially from
    /// every coset, subgroup words fix coset 0.
    fn certify(&mut self) {
        self.compact();
        let rows = self.rows();
        for c in 0..rows as u32 {
            for col in 0..self.ncols {
                let v = self.table[c as usize * self.ncols + col];
                assert!(v != UNDEF, "incomplete table passed certification");
            }
        }
        for ri in 0..self.relators.len() {
            let r = self.relators[ri].clone();
            for c in 0..rows as u32 {
                let mut p = c;
                for &col in &r {
                    p = self.entry(p, col);
                }
                assert_eq!(p, c, "relator fails to trace to identity");
            }
        }
        for wi in 0..self.subgroup_words.len() {
            let w = self.subgroup_words[wi].clone();
            let mut p = 0u32;
            for &col in &w {
                p = self.entry(p, col);
            }
            assert_eq!(p, 0, "subgroup word leaves coset 0");
        }
    }

    fn into_table(
        self,
        presentation: &Presentation,
        subgroup: &[Word],
        seconds: f64,
    ) -> CosetTable {
        let index = self.rows();
        CosetTable {
            presentation: presentation.clone(),
            subgroup: subgroup.to_vec(),
            ncols: self.ncols,
            index,
            table: self.table,
            stats: EnumStats {
                live: index,
                total_defined: self.total_defined,
                merges: self.merges,
                seconds,
            },
            bfs_tree: OnceLock::new(),
        }
    }
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn subgroup_words(&self) -> &[Word] {
        &self.subgroup
    }

    pub fn stats(&self) -> &EnumStats {
        &self.stats
    }

    #[inline]
    fn entry(&self, coset: u32, col: u16) -> u32 {
        self.table[coset as usize * self.ncols + col as usize]
    }

    /// Traces a word from a coset.
    pub fn trace(&self, coset: usize, word: &Word) -> Result<usize, EnumError> {
        if coset >= self.index {
            return Err(EnumError::BadCoset(coset));
        }
        let mut p = coset as u32;
        for &l in &word.0 {
            let g = (l.unsigned_abs() - 1) as usize;
            if g >= self.presentation.ngens() {
                return Err(EnumError::MalformedWord {
                    letter: l,
                    ngens: self.presentation.ngens(),
                });
            }
            let col = if l > 0 { 2 * g } else { 2 * g + 1 } as u16;
            p = self.entry(p, col);
        }
        Ok(p as usize)
    }

    /// The permutation action of one generator on the coset space.
    pub fn generator_action(&self, gen: usize) -> Permutation {
        let images = (0..self.index as u32)
            .map(|c| self.entry(c, 2 * gen as u16))
            .collect();
        Permutation::from_images(images).expect("complete table column is a bijection")
    }

    /// The coset-space image: one generator per presentation generator.
    pub fn coset_action(&self) -> PermutationGroup {
        let gens = (0..self.presentation.ngens())
            .map(|g| self.generator_action(g))
            .collect();
        PermutationGroup::new(self.index, gens).expect("uniform degree")
    }

    fn bfs_parents(&self) -> &Vec<(u32, u16)> {
        self.bfs_tree.get_or_init(|| {
            let mut tree = vec![(UNDEF, 0u16); self.index];
            tree[0] = (0, u16::MAX);
            let mut queue = VecDeque::from([0u32]);
            while let Some(c) = queue.pop_front() {
                for col in 0..self.ncols as u16 {
                    let next = self.entry(c, col);
                    if next != 0 && tree[next as usize].0 == UNDEF {
                        tree[next as usize] = (c, col);
                        queue.push_back(next);
                    }
                }
            }
            tree
        })
    }

    /// A word tracing coset 0 to the coset, minimal in BFS discovery
    /// order.
    pub fn representative_word(&self, coset: usize) -> Result<Word, EnumError> {
        if coset >= self.index {
            return Err(EnumError::BadCoset(coset));
        }
        let tree = self.bfs_parents();
        let mut letters = Vec::new();
        let mut c = coset as u32;
        while c != 0 {
            let (parent, col) = tree[c as usize];
            let g = (col / 2) as i32 + 1;
            letters.push(if col % 2 == 0 { g } else { -g });
            c = parent;
        }
        letters.reverse();
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(ngens: usize, relators: &[Vec<i32>]) -> Presentation {
        let names = (0..ngens)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        Presentation::new(names, relators.iter().map(|r| Word(r.clone())).collect())
    }

    #[test]
    fn cyclic_five_over_trivial() {
        let p = pres(1, &[vec![1, 1, 1, 1, 1]]);
        let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index(), 5);
    }

    #[test]
    fn s3_over_a() {
        // <a,b | a^2, b^2, (ab)^3> over <a>: index 3.
        let p = pres(2, &[vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]]);
        let t = todd_coxeter(&p, &[Word(vec![1])], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index(), 3);
        let action = t.coset_action();
        assert_eq!(action.order(), 6);
    }

    #[test]
    fn index_one_table() {
        let p = pres(1, &[vec![1]]);
        let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index(), 1);
        assert!(t.coset_action().is_trivial());
    }

    fn l27_presentation() -> Presentation {
        // <a,b | a^2, b^3, (ab)^7, [a,b]^4>
        let comm = Word::commutator(&Word(vec![1]), &Word(vec![2]));
        Presentation::new(
            vec!["a".into(), "b".into()],
            vec![
                Word(vec![1, 1]),
                Word(vec![2, 2, 2]),
                Word(vec![1, 2]).pow(7),
                comm.pow(4),
            ],
        )
    }

    /// Independent oracle: L_2(7) as permutations of the projective line
    /// over GF(7), on 8 points {0..6, inf=7}.
    fn l27_by_permutations() -> PermutationGroup {
        let add = Permutation::from_cycles(8, &[vec![0, 1, 2, 3, 4, 5, 6]]).unwrap();
        // x -> -1/x: 0 <-> inf, 1 <-> 6, 2 <-> 3, 4 <-> 5.
        let inv = Permutation::from_cycles(8, &[vec![0, 7], vec![1, 6], vec![2, 3], vec![4, 5]])
            .unwrap();
        PermutationGroup::new(8, vec![add, inv]).unwrap()
    }

    #[test]
    fn l27_over_trivial_has_index_168() {
        let expected = l27_by_permutations().order();
        assert_eq!(expected, 168);
        let p = l27_presentation();
        let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index() as u128, expected);
        let action = t.coset_action();
        assert_eq!(action.order(), 168);
    }

    #[test]
    fn both_strategies_agree() {
        let p = l27_presentation();
        for strategy in [Strategy::Felsch, Strategy::HltLookahead] {
            let limits = EnumerationLimits {
                max_cosets: 100_000,
                strategy,
            };
            let t = todd_coxeter(&p, &[Word(vec![1])], &limits).unwrap();
            assert_eq!(t.index(), 84, "strategy {strategy:?}");
        }
    }

    #[test]
    fn relator_order_is_confluent() {
        let base = l27_presentation();
        let t = todd_coxeter(&base, &[], &EnumerationLimits::default()).unwrap();
        let expect = t.index();
        let mut rels = base.relators.clone();
        for _ in 0..10 {
            rels.rotate_left(1);
            rels.swap(0, 1);
            let p = Presentation::new(base.generator_names.clone(), rels.clone());
            let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
            assert_eq!(t.index(), expect);
        }
    }

    #[test]
    fn collapse_to_identity() {
        // a^2 = a^3 = 1 forces a = 1.
        let p = pres(1, &[vec![1, 1], vec![1, 1, 1]]);
        let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index(), 1);
    }

    #[test]
    fn klein_four() {
        let p = pres(2, &[vec![1, 1], vec![2, 2], vec![1, 2, -1, -2]]);
        let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index(), 4);
    }

    #[test]
    fn free_group_overflows() {
        let p = pres(2, &[]);
        let err = todd_coxeter(&p, &[], &EnumerationLimits::with_max(500)).unwrap_err();
        match err {
            EnumError::Overflow { max_cosets, stats } => {
                assert_eq!(max_cosets, 500);
                assert!(stats.total_defined >= 500);
            }
            other => panic!("expected overflow, got {other}"),
        }
    }

    #[test]
    fn malformed_word_rejected() {
        let p = pres(1, &[vec![2]]);
        assert!(matches!(
            todd_coxeter(&p, &[], &EnumerationLimits::default()),
            Err(EnumError::MalformedWord { .. })
        ));
    }

    #[test]
    fn representative_words_trace_back() {
        let p = l27_presentation();
        let t = todd_coxeter(&p, &[Word(vec![1])], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.representative_word(0).unwrap(), Word::empty());
        for c in 0..t.index() {
            let w = t.representative_word(c).unwrap();
            assert_eq!(t.trace(0, &w).unwrap(), c);
        }
        assert!(t.representative_word(t.index()).is_err());
    }

    #[test]
    fn s3_representative_of_b() {
        let p = pres(2, &[vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]]);
        let t = todd_coxeter(&p, &[Word(vec![1])], &EnumerationLimits::default()).unwrap();
        let coset_b = t.trace(0, &Word(vec![2])).unwrap();
        assert_eq!(t.representative_word(coset_b).unwrap(), Word(vec![2]));
    }

    #[test]
    fn image_order_identity() {
        // order(coset_action) = index * |stabilizer of coset 0 in image|.
        let p = pres(2, &[vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]]);
        let t = todd_coxeter(&p, &[Word(vec![1])], &EnumerationLimits::default()).unwrap();
        let action = t.coset_action();
        let stab = action.point_stabilizer(&[0]).unwrap();
        assert_eq!(action.order(), t.index() as u128 * stab.order());
    }

    #[test]
    fn hlt_on_larger_quotient() {
        // <a,b | a^2, b^3, (ab)^5> = A_5, over <>: index 60.
        let p = pres(2, &[vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2, 1, 2, 1, 2, 1, 2]]);
        for strategy in [Strategy::Felsch, Strategy::HltLookahead] {
            let limits = EnumerationLimits {
                max_cosets: 10_000,
                strategy,
            };
            let t = todd_coxeter(&p, &[], &limits).unwrap();
            assert_eq!(t.index(), 60);
        }
    }
}
