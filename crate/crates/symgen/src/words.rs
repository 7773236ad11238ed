//! Words in presentation generators tied to concrete permutations.
//!
//! A [`GeneratorMap`] couples an abstract presentation with the images of
//! its generators in a permutation group. The [`WordedChain`] is a
//! deterministic Schreier-Sims chain whose transversals carry words, so any
//! group element can be expressed as a (non-minimal) word in the
//! presentation generators by sifting.
//!
//! [`presentation_from_chain`] derives a presentation on the strong
//! generators of a fully processed chain: when every Schreier generator
//! sifts to the identity the resulting relators present the group exactly,
//! which is what lets control groups like the Mathieu groups ship without
//! hand-transcribed presentations.

use crate::coset::{Presentation, Word};
use crate::group::{GroupError, PermutationGroup};
use crate::perm::Permutation;

/// A presentation together with the images of its generators.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    pub presentation: Presentation,
    pub images: Vec<Permutation>,
}

impl GeneratorMap {
    pub fn new(presentation: Presentation, images: Vec<Permutation>) -> Self {
        assert_eq!(presentation.ngens(), images.len());
        GeneratorMap {
            presentation,
            images,
        }
    }

    pub fn degree(&self) -> usize {
        self.images.first().map(|p| p.degree()).unwrap_or(0)
    }

    pub fn evaluate(&self, word: &Word) -> Permutation {
        evaluate_word(&self.images, self.degree(), word)
    }

    /// Checks that every relator maps to the identity.
    pub fn is_homomorphism(&self) -> bool {
        self.presentation
            .relators
            .iter()
            .all(|r| self.evaluate(r).is_identity())
    }
}

/// Evaluates a word left to right on the given generator images.
pub fn evaluate_word(images: &[Permutation], degree: usize, word: &Word) -> Permutation {
    let mut acc = Permutation::identity(degree);
    for &l in &word.0 {
        let g = &images[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            acc = acc.compose(g);
        } else {
            acc = acc.compose(&g.inverse());
        }
    }
    acc
}

/// BFS words (over generators and inverses) from `from` to every point in
/// its orbit. Entry `i` is `None` when `i` is unreachable.
pub fn schreier_words(images: &[Permutation], degree: usize, from: usize) -> Vec<Option<Word>> {
    let inverses: Vec<Permutation> = images.iter().map(|g| g.inverse()).collect();
    let mut parent: Vec<Option<(u32, i32)>> = vec![None; degree];
    let mut order = vec![from];
    parent[from] = Some((from as u32, 0));
    let mut head = 0;
    while head < order.len() {
        let p = order[head];
        head += 1;
        for (gi, (g, ginv)) in images.iter().zip(&inverses).enumerate() {
            for (q, letter) in [(g.apply(p), gi as i32 + 1), (ginv.apply(p), -(gi as i32 + 1))] {
                if parent[q].is_none() {
                    parent[q] = Some((p as u32, letter));
                    order.push(q);
                }
            }
        }
    }
    (0..degree)
        .map(|i| {
            parent[i].map(|_| {
                let mut letters = Vec::new();
                let mut p = i;
                while p != from {
                    let (prev, letter) = parent[p].expect("reached point");
                    letters.push(letter);
                    p = prev as usize;
                }
                letters.reverse();
                Word(letters)
            })
        })
        .collect()
}

struct WordedGen {
    perm: Permutation,
    inv: Permutation,
    word: Word,
}

struct WLevel {
    base: usize,
    gens: Vec<WordedGen>,
    orbit: Vec<u32>,
    /// Per point: `(gen_index << 32) | parent`, -1 outside, -2 at base.
    sv: Vec<i64>,
}

const SV_NONE: i64 = -1;
const SV_BASE: i64 = -2;

impl WLevel {
    fn new(degree: usize, base: usize) -> Self {
        let mut level = WLevel {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            sv: vec![SV_NONE; degree],
        };
        level.rebuild();
        level
    }

    fn rebuild(&mut self) {
        self.sv.fill(SV_NONE);
        self.orbit.clear();
        self.orbit.push(self.base as u32);
        self.sv[self.base] = SV_BASE;
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head] as usize;
            head += 1;
            for (gi, g) in self.gens.iter().enumerate() {
                let q = g.perm.apply(p);
                if self.sv[q] == SV_NONE {
                    self.sv[q] = ((gi as i64) << 32) | p as i64;
                    self.orbit.push(q as u32);
                }
            }
        }
    }

    fn contains(&self, point: usize) -> bool {
        self.sv[point] != SV_NONE
    }

    /// Generator indices along the tree path, beta-side first.
    fn path(&self, beta: usize) -> Vec<u32> {
        let mut path = Vec::new();
        let mut p = beta;
        while self.sv[p] != SV_BASE {
            let entry = self.sv[p];
            path.push((entry >> 32) as u32);
            p = (entry & 0xffff_ffff) as usize;
        }
        path
    }

    fn transversal(&self, beta: usize) -> (Permutation, Word) {
        let mut path = self.path(beta);
        path.reverse();
        let mut perm = Permutation::identity(self.sv.len());
        let mut word = Word::empty();
        for gi in path {
            let g = &self.gens[gi as usize];
            perm = perm.compose(&g.perm);
            word = word.concat(&g.word);
        }
        (perm, word.free_reduce())
    }

    /// `(images, word) := (images * u_beta^-1, word ++ u_beta_word^-1)`.
    fn strip(&self, beta: usize, images: &mut [u32], word: &mut Word) {
        let path = self.path(beta);
        for x in images.iter_mut() {
            let mut y = *x as usize;
            for &gi in &path {
                y = self.gens[gi as usize].inv.apply(y);
            }
            *x = y as u32;
        }
        let mut suffix = Word::empty();
        for &gi in path.iter().rev() {
            suffix = suffix.concat(&self.gens[gi as usize].word);
        }
        *word = word.concat(&suffix.inverse());
    }
}

/// A deterministic, fully processed Schreier-Sims chain with word-labelled
/// transversals. Every Schreier generator has been checked to sift to the
/// identity, so the chain is provably complete.
pub struct WordedChain {
    degree: usize,
    levels: Vec<WLevel>,
}

impl WordedChain {
    /// Builds the chain from presentation generator images; generator `i`
    /// carries the single-letter word `i+1`.
    pub fn build(map: &GeneratorMap, base_hint: &[usize]) -> WordedChain {
        let gens = map
            .images
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), Word::generator(i)))
            .collect();
        Self::build_from(map.degree(), gens, base_hint)
    }

    pub fn build_from(
        degree: usize,
        gens: Vec<(Permutation, Word)>,
        base_hint: &[usize],
    ) -> WordedChain {
        let mut chain = WordedChain {
            degree,
            levels: base_hint.iter().map(|&b| WLevel::new(degree, b)).collect(),
        };
        for (perm, word) in gens {
            if !perm.is_identity() {
                chain.insert(perm, word);
            }
        }
        chain.complete_from(0);
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Strong generators with their words, deduplicated by permutation.
    pub fn strong_generators(&self) -> Vec<(Permutation, Word)> {
        let mut out: Vec<(Permutation, Word)> = Vec::new();
        if let Some(level) = self.levels.first() {
            for g in &level.gens {
                if !out.iter().any(|(p, _)| p == &g.perm) {
                    out.push((g.perm.clone(), g.word.clone()));
                }
            }
        }
        out
    }

    /// Generators (with words) of the stabilizer of the first `k` base
    /// points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<(Permutation, Word)> {
        if k >= self.levels.len() {
            return Vec::new();
        }
        let mut out: Vec<(Permutation, Word)> = Vec::new();
        for g in &self.levels[k].gens {
            if !out.iter().any(|(p, _)| p == &g.perm) {
                out.push((g.perm.clone(), g.word.clone()));
            }
        }
        out
    }

    /// Expresses a member as a word in the presentation generators;
    /// `None` when the permutation is not in the chain's group. Words are
    /// correct but not length-minimal.
    pub fn express(&self, g: &Permutation) -> Option<Word> {
        if g.degree() != self.degree {
            return None;
        }
        self.sift_expression(g, 0)
    }

    fn sift_from(
        &self,
        g: &Permutation,
        word: &Word,
        start: usize,
    ) -> Result<Word, (Permutation, Word, usize)> {
        let mut images: Vec<u32> = g.images().to_vec();
        let mut w = word.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let beta = images[level.base] as usize;
            if beta == level.base {
                continue;
            }
            if !level.contains(beta) {
                let residue = Permutation::from_images(images).expect("residue");
                return Err((residue, w.free_reduce(), i));
            }
            level.strip(beta, &mut images, &mut w);
        }
        let residue = Permutation::from_images(images).expect("residue");
        if residue.is_identity() {
            Ok(w.free_reduce())
        } else {
            Err((residue, w.free_reduce(), self.levels.len()))
        }
    }

    fn insert(&mut self, g: Permutation, word: Word) {
        let mut current = (g, word);
        loop {
            match self.sift_from(&current.0, &current.1, 0) {
                Ok(_) => return,
                Err((residue, rword, l)) => {
                    self.add_at(residue.clone(), rword.clone(), l);
                    current = (residue, rword);
                }
            }
        }
    }

    fn add_at(&mut self, g: Permutation, word: Word, level: usize) {
        if level == self.levels.len() {
            let moved = (0..self.degree)
                .find(|&p| g.apply(p) != p)
                .expect("non-identity residue");
            self.levels.push(WLevel::new(self.degree, moved));
        }
        let inv = g.inverse();
        for l in 0..=level {
            self.levels[l].gens.push(WordedGen {
                perm: g.clone(),
                inv: inv.clone(),
                word: word.clone(),
            });
        }
        for l in 0..=level {
            self.levels[l].rebuild();
        }
    }

    fn complete_from(&mut self, i: usize) {
        if i >= self.levels.len() {
            return;
        }
        self.complete_from(i + 1);
        'rescan: loop {
            let orbit = self.levels[i].orbit.clone();
            let ngens = self.levels[i].gens.len();
            for &beta in &orbit {
                let beta = beta as usize;
                let (u_beta, u_beta_word) = self.levels[i].transversal(beta);
                for gi in 0..ngens {
                    let (s, s_word) = {
                        let level = &self.levels[i];
                        let g = &level.gens[gi];
                        let prod = u_beta.compose(&g.perm);
                        let target = prod.apply(level.base);
                        let (u_t, u_t_word) = level.transversal(target);
                        (
                            prod.compose(&u_t.inverse()),
                            u_beta_word.concat(&g.word).concat(&u_t_word.inverse()),
                        )
                    };
                    if s.is_identity() {
                        continue;
                    }
                    if let Err((residue, rword, l)) = self.sift_from(&s, &s_word, i + 1) {
                        self.add_at(residue, rword, l);
                        self.complete_from(i + 1);
                        continue 'rescan;
                    }
                }
            }
            break;
        }
    }

    /// Collects the Schreier relators of the chain over its strong
    /// generators' words.
    fn schreier_relators(&self) -> Vec<Word> {
        let mut relators: Vec<Word> = Vec::new();
        for (i, level) in self.levels.iter().enumerate() {
            for &beta in &level.orbit {
                let beta = beta as usize;
                let (u_beta, u_beta_word) = level.transversal(beta);
                for g in &level.gens {
                    let prod = u_beta.compose(&g.perm);
                    let target = prod.apply(level.base);
                    let (u_t, u_t_word) = level.transversal(target);
                    let s = prod.compose(&u_t.inverse());
                    let s_word = u_beta_word.concat(&g.word).concat(&u_t_word.inverse());
                    let expr = if s.is_identity() {
                        Word::empty()
                    } else {
                        self.sift_expression(&s, i + 1).expect("chain is complete")
                    };
                    let relator = s_word.concat(&expr.inverse()).free_reduce();
                    if !relator.is_empty() {
                        relators.push(relator);
                    }
                }
            }
        }
        relators.sort();
        relators.dedup();
        relators
    }

    /// Expresses a member of the level-`start` stabilizer as a word,
    /// using only levels from `start` on.
    fn sift_expression(&self, g: &Permutation, start: usize) -> Option<Word> {
        let mut images: Vec<u32> = g.images().to_vec();
        let mut transversal_words: Vec<Word> = Vec::new();
        for level in self.levels.iter().skip(start) {
            let beta = images[level.base] as usize;
            if beta == level.base {
                continue;
            }
            if !level.contains(beta) {
                return None;
            }
            let (_, w) = level.transversal(beta);
            transversal_words.push(w);
            let mut dummy = Word::empty();
            level.strip(beta, &mut images, &mut dummy);
        }
        if !images.iter().enumerate().all(|(i, &p)| i as u32 == p) {
            return None;
        }
        // g = u_deepest * ... * u_shallowest reading left to right.
        let mut word = Word::empty();
        for w in transversal_words.iter().rev() {
            word = word.concat(w);
        }
        Some(word.free_reduce())
    }
}

/// Derives a presentation of the group generated by `gens` on the strong
/// generators of its chain. The relators present the group exactly by the
/// Schreier-generator argument, since the chain construction checks every
/// Schreier generator.
pub fn presentation_from_chain(
    degree: usize,
    gens: &[Permutation],
    name_prefix: &str,
) -> GeneratorMap {
    // First pass fixes a base and a strong generating set.
    let first = WordedChain::build_from(
        degree,
        gens.iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), Word::generator(i)))
            .collect(),
        &[],
    );
    let mut strong: Vec<Permutation> = first
        .strong_generators()
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let mut base = first.base();
    // Iterate until the strong set is closed under its own rebuild.
    let chain = loop {
        let chain = WordedChain::build_from(
            degree,
            strong
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), Word::generator(i)))
                .collect(),
            &base,
        );
        let next: Vec<Permutation> = chain
            .strong_generators()
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        if next.len() == strong.len() {
            break chain;
        }
        strong = next;
        base = chain.base();
    };
    let relators = chain.schreier_relators();
    let names = (0..strong.len())
        .map(|i| format!("{name_prefix}{i}"))
        .collect();
    GeneratorMap::new(Presentation::new(names, relators), strong)
}

/// Discovers a short-relator presentation of the group generated by
/// `gens`: random short words contribute relators `w^order(w)`, and a
/// candidate set is accepted only when enumerating it over the trivial
/// subgroup yields exactly `expected_order` cosets, which proves
/// exactness outright. Returns `None` when no candidate set within the
/// budget passes.
pub fn discovered_presentation(
    degree: usize,
    gens: &[Permutation],
    expected_order: u128,
    name_prefix: &str,
    seed: u64,
) -> Option<GeneratorMap> {
    use crate::coset::{todd_coxeter, EnumerationLimits};
    use rand::Rng;
    use rand::SeedableRng;
    if expected_order > 3_000_000 {
        return None;
    }
    let ngens = gens.len() as i32;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut relators: Vec<Word> = Vec::new();
    // Generator orders first.
    for (i, g) in gens.iter().enumerate() {
        relators.push(Word::generator(i).pow(g.order() as u32));
    }
    let names: Vec<String> = (0..gens.len())
        .map(|i| format!("{name_prefix}{i}"))
        .collect();
    for round in 0..24 {
        // Top up with sampled proper-power relators, shortest first.
        let target = 20 + 4 * round;
        let mut budget = 60_000;
        while relators.len() < target && budget > 0 {
            budget -= 1;
            let len = rng.gen_range(2..=7);
            let mut letters = Vec::with_capacity(len);
            for _ in 0..len {
                let mut l: i32 = rng.gen_range(1..=ngens);
                if rng.gen_bool(0.5) {
                    l = -l;
                }
                letters.push(l);
            }
            let word = Word(letters).cyclically_reduce();
            if word.len() < 2 {
                continue;
            }
            let image = evaluate_word(gens, degree, &word);
            let order = image.order() as u32;
            if order == 0 || order as usize * word.len() > 48 {
                continue;
            }
            let relator = word.pow(order);
            if !relators.contains(&relator) {
                relators.push(relator);
            }
        }
        let presentation = Presentation::new(names.clone(), relators.clone());
        let limits = EnumerationLimits::with_max((expected_order as usize * 3).max(500_000));
        if let Ok(table) = todd_coxeter(&presentation, &[], &limits) {
            if table.index() as u128 == expected_order {
                return Some(GeneratorMap::new(presentation, gens.to_vec()));
            }
            // A strictly smaller index is impossible (the image satisfies
            // every relator); equality can only fail by overflow.
        }
    }
    None
}

/// Searches for short words (in the map's generators) that evaluate into
/// the stabilizer of `base` and together generate it. Far shorter than
/// transversal-derived words, which matters because these words end up
/// inside relators. Deterministic; returns `None` when the sampling
/// budget runs out before the stabilizer is generated.
pub fn short_stabilizer_words(
    map: &GeneratorMap,
    base: usize,
    expected_order: u128,
    rng_seed: u64,
) -> Option<Vec<(Permutation, Word)>> {
    use rand::Rng;
    use rand::SeedableRng;
    let degree = map.degree();
    let ngens = map.presentation.ngens() as i32;
    if ngens == 0 || expected_order == 0 {
        return None;
    }
    if expected_order == 1 {
        return Some(Vec::new());
    }
    let inverses: Vec<Permutation> = map.images.iter().map(|g| g.inverse()).collect();
    let apply_letter = |point: usize, letter: i32| -> usize {
        if letter > 0 {
            map.images[(letter - 1) as usize].apply(point)
        } else {
            inverses[(-letter - 1) as usize].apply(point)
        }
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rng_seed);
    let mut found: Vec<(Permutation, Word)> = Vec::new();
    let mut current_order: u128 = 1;
    let mut budget: u32 = 3_000_000;
    while budget > 0 {
        budget -= 1;
        let len = rng.gen_range(3..=16);
        let mut letters = Vec::with_capacity(len);
        let mut point = base;
        for _ in 0..len {
            let mut l: i32 = rng.gen_range(1..=ngens);
            if rng.gen_bool(0.5) {
                l = -l;
            }
            letters.push(l);
            point = apply_letter(point, l);
        }
        if point != base {
            continue;
        }
        let word = Word(letters).free_reduce();
        if word.is_empty() {
            continue;
        }
        let perm = map.evaluate(&word);
        if perm.is_identity() || found.iter().any(|(p, _)| p == &perm) {
            continue;
        }
        let mut gens: Vec<Permutation> = found.iter().map(|(p, _)| p.clone()).collect();
        gens.push(perm.clone());
        let group = PermutationGroup::new(degree, gens).ok()?;
        let order = group.order();
        if order > current_order {
            current_order = order;
            found.push((perm, word));
            if current_order == expected_order {
                return Some(found);
            }
        }
        if found.len() > 12 {
            // Too many near-redundant generators; restart the collection.
            found.clear();
            current_order = 1;
        }
    }
    None
}

/// The Coxeter presentation of S_n on adjacent transpositions, with its
/// natural images: generators s_1..s_{n-1}, relators s_i^2, braid and
/// commuting relations.
pub fn coxeter_symmetric(n: usize) -> GeneratorMap {
    assert!(n >= 2);
    let names = (0..n - 1).map(|i| format!("s{}", i + 1)).collect();
    let mut relators = Vec::new();
    for i in 0..n - 1 {
        relators.push(Word::generator(i).pow(2));
        for j in (i + 1)..n - 1 {
            let braid = Word::generator(i).concat(&Word::generator(j));
            relators.push(if j == i + 1 { braid.pow(3) } else { braid.pow(2) });
        }
    }
    let images = (0..n - 1)
        .map(|i| Permutation::from_cycles(n, &[vec![i, i + 1]]).expect("adjacent swap"))
        .collect();
    GeneratorMap::new(Presentation::new(names, relators), images)
}

/// Looks for a small generating subset (pairs, then triples) reaching the
/// expected order. Falls back to the original generators.
pub fn reduce_generators(
    degree: usize,
    gens: &[Permutation],
    expected_order: u128,
) -> Result<Vec<Permutation>, GroupError> {
    use rand::SeedableRng;
    let mut pool: Vec<Permutation> = gens.to_vec();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x52454447);
    let full = PermutationGroup::new(degree, gens.to_vec())?;
    let full_order = full.order();
    if full_order != expected_order {
        return Err(GroupError::OrderShortfall {
            expected: expected_order,
            got: full_order,
        });
    }
    for _ in 0..24 {
        pool.push(full.random_element(&mut rng));
    }
    pool.retain(|p| !p.is_identity());
    let reaches = |cand: &[Permutation]| -> bool {
        PermutationGroup::new(degree, cand.to_vec())
            .map(|g| g.order() == expected_order)
            .unwrap_or(false)
    };
    for i in 0..pool.len() {
        for j in (i + 1)..pool.len().min(i + 9) {
            let cand = [pool[i].clone(), pool[j].clone()];
            if reaches(&cand) {
                return Ok(cand.to_vec());
            }
        }
    }
    for i in 0..pool.len().min(6) {
        for j in (i + 1)..pool.len().min(8) {
            for k in (j + 1)..pool.len().min(10) {
                let cand = [pool[i].clone(), pool[j].clone(), pool[k].clone()];
                if reaches(&cand) {
                    return Ok(cand.to_vec());
                }
            }
        }
    }
    Ok(gens.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{todd_coxeter, EnumerationLimits};
    use rand::SeedableRng;

    fn coxeter_s_n(n: usize) -> GeneratorMap {
        let names = (0..n - 1).map(|i| format!("s{}", i + 1)).collect();
        let mut relators = Vec::new();
        for i in 0..n - 1 {
            relators.push(Word::generator(i).pow(2));
            for j in (i + 1)..n - 1 {
                let braid = Word::generator(i).concat(&Word::generator(j));
                relators.push(if j == i + 1 { braid.pow(3) } else { braid.pow(2) });
            }
        }
        let images = (0..n - 1)
            .map(|i| Permutation::from_cycles(n, &[vec![i, i + 1]]).unwrap())
            .collect();
        GeneratorMap::new(Presentation::new(names, relators), images)
    }

    #[test]
    fn coxeter_map_is_homomorphism() {
        let map = coxeter_s_n(5);
        assert!(map.is_homomorphism());
        let g = PermutationGroup::new(5, map.images.clone()).unwrap();
        assert_eq!(g.order(), 120);
    }

    #[test]
    fn express_random_elements() {
        let map = coxeter_s_n(6);
        let chain = WordedChain::build(&map, &[]);
        assert_eq!(chain.order(), 720);
        let g = PermutationGroup::new(6, map.images.clone()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let x = g.random_element(&mut rng);
            let w = chain.express(&x).expect("member");
            assert_eq!(map.evaluate(&w), x);
        }
        let outsider = Permutation::parse_cycles("(1 2)", 7).unwrap();
        assert!(chain.express(&outsider).is_none());
    }

    #[test]
    fn stabilizer_generators_fix_base() {
        let map = coxeter_s_n(6);
        let chain = WordedChain::build(&map, &[0]);
        let stab = chain.stabilizer_generators(1);
        assert!(!stab.is_empty());
        for (p, w) in &stab {
            assert_eq!(p.apply(0), 0);
            assert_eq!(&map.evaluate(w), p);
        }
        let group = PermutationGroup::new(6, stab.into_iter().map(|(p, _)| p).collect()).unwrap();
        assert_eq!(group.order(), 120);
    }

    #[test]
    fn schreier_words_reach_orbit() {
        let map = coxeter_s_n(5);
        let words = schreier_words(&map.images, 5, 0);
        for (i, w) in words.iter().enumerate() {
            let w = w.as_ref().expect("transitive");
            assert_eq!(map.evaluate(w).apply(0), i);
        }
    }

    #[test]
    fn derived_presentation_is_exact_for_s5() {
        let gens: Vec<Permutation> = PermutationGroup::symmetric(5).generators().to_vec();
        let map = presentation_from_chain(5, &gens, "g");
        assert!(map.is_homomorphism());
        let t = todd_coxeter(&map.presentation, &[], &EnumerationLimits::with_max(10_000)).unwrap();
        assert_eq!(t.index(), 120);
    }

    #[test]
    fn derived_presentation_is_exact_for_l27() {
        let add = Permutation::from_cycles(8, &[vec![0, 1, 2, 3, 4, 5, 6]]).unwrap();
        let inv =
            Permutation::from_cycles(8, &[vec![0, 7], vec![1, 6], vec![2, 3], vec![4, 5]]).unwrap();
        let map = presentation_from_chain(8, &[add, inv], "g");
        assert!(map.is_homomorphism());
        let t = todd_coxeter(&map.presentation, &[], &EnumerationLimits::with_max(10_000)).unwrap();
        assert_eq!(t.index(), 168);
    }

    #[test]
    fn derived_presentation_is_exact_for_a7() {
        let gens = vec![
            Permutation::parse_cycles("(1 2 3)", 7).unwrap(),
            Permutation::parse_cycles("(1 2 3 4 5 6 7)", 7).unwrap(),
        ];
        let map = presentation_from_chain(7, &gens, "g");
        assert!(map.is_homomorphism());
        let t = todd_coxeter(&map.presentation, &[], &EnumerationLimits::with_max(50_000)).unwrap();
        assert_eq!(t.index(), 2520);
    }

    #[test]
    fn generator_reduction_finds_pair_for_s6() {
        let g = PermutationGroup::symmetric(6);
        let reduced = reduce_generators(6, g.generators(), 720).unwrap();
        assert!(reduced.len() <= 3);
        let rg = PermutationGroup::new(6, reduced).unwrap();
        assert_eq!(rg.order(), 720);
    }
}
