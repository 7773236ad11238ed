//! Permutation groups with stabilizer chains.
//!
//! Chains are built by randomized Schreier-Sims (seeded, so deterministic)
//! and then certified: small-degree chains get the full deterministic
//! Schreier-generator verification, large-degree chains are extended until
//! they reach a caller-supplied expected order, falling back to the full
//! verification pass when no expectation is available. The chain order is
//! always a lower bound on the true order, so hitting a trusted expected
//! value is a complete certificate.

use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator degree {0} does not match group degree {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("points passed to a stabilizer must be distinct")]
    DuplicatePoint,
    #[error("given group is not a subgroup")]
    NotSubgroup,
    #[error("chain did not reach the expected order {expected} (got {got})")]
    OrderShortfall { expected: u128, got: u128 },
}

const SIFT_THRESHOLD: usize = 20;
const FULL_VERIFY_DEGREE: usize = 700;
const CHAIN_SEED: u64 = 0x53594d47454e_u64; // fixed; chains must be reproducible

/// How much certification a chain build performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Full deterministic verification for small degrees, probabilistic
    /// plus expected-order checks otherwise.
    Auto,
    /// Always run the deterministic Schreier-generator verification.
    Full,
    /// Randomized build only.
    Probabilistic,
}

#[derive(Debug, Clone)]
pub struct ChainOptions {
    pub base_hint: Vec<usize>,
    pub expected_order: Option<u128>,
    pub verify: VerifyMode,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            base_hint: Vec::new(),
            expected_order: None,
            verify: VerifyMode::Auto,
        }
    }
}

struct Level {
    base: usize,
    /// All strong generators fixing the base points of earlier levels.
    gens: Vec<Permutation>,
    invs: Vec<Permutation>,
    /// Orbit of `base` under `gens`, in BFS discovery order.
    orbit: Vec<u32>,
    /// Schreier vector: per point, `(gen_index << 32) | parent`, -1 if not
    /// in the orbit, -2 at the base.
    sv: Vec<i64>,
}

const SV_NONE: i64 = -1;
const SV_BASE: i64 = -2;

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            invs: Vec::new(),
            orbit: Vec::new(),
            sv: vec![SV_NONE; degree],
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        self.sv.fill(SV_NONE);
        self.orbit.clear();
        self.orbit.push(self.base as u32);
        self.sv[self.base] = SV_BASE;
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head] as usize;
            head += 1;
            for (gi, g) in self.gens.iter().enumerate() {
                let q = g.apply(p);
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
            debug_assert!(entry >= 0);
            path.push((entry >> 32) as u32);
            p = (entry & 0xffff_ffff) as usize;
        }
        path
    }

    /// The transversal element mapping `base` to `beta`.
    fn transversal(&self, beta: usize) -> Permutation {
        let mut path = self.path(beta);
        path.reverse();
        let mut u = Permutation::identity(self.sv.len());
        for gi in path {
            u = u.compose(&self.gens[gi as usize]);
        }
        u
    }

    /// Replaces `images` with `images * u_beta^-1`.
    fn mul_inverse_transversal(&self, beta: usize, images: &mut [u32]) {
        let path = self.path(beta);
        if path.is_empty() {
            return;
        }
        for x in images.iter_mut() {
            let mut y = *x as usize;
            for &gi in &path {
                y = self.invs[gi as usize].apply(y);
            }
            *x = y as u32;
        }
    }
}

/// A base and strong generating set for a permutation group.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
    fully_verified: bool,
}

impl StabilizerChain {
    pub fn build(
        degree: usize,
        generators: &[Permutation],
        options: &ChainOptions,
    ) -> Result<StabilizerChain, GroupError> {
        for b in &options.base_hint {
            if *b >= degree {
                return Err(GroupError::PointOutOfRange {
                    point: *b,
                    degree,
                });
            }
        }
        let mut chain = StabilizerChain {
            degree,
            levels: options
                .base_hint
                .iter()
                .map(|&b| Level::new(degree, b))
                .collect(),
            fully_verified: false,
        };
        let gens: Vec<&Permutation> = generators.iter().filter(|g| !g.is_identity()).collect();
        if gens.is_empty() {
            chain.fully_verified = true;
            return Ok(chain);
        }
        for g in &gens {
            chain.insert((*g).clone());
        }

        // Randomized rounds: product replacement, stop after a run of
        // consecutive trivial sifts.
        let mut rng = StdRng::seed_from_u64(CHAIN_SEED ^ degree as u64);
        let mut pr = ProductReplacer::new(gens.iter().map(|g| (*g).clone()).collect(), degree);
        let mut consecutive = 0;
        while consecutive < SIFT_THRESHOLD {
            let r = pr.next_element(&mut rng);
            if chain.insert_if_new(r) {
                consecutive = 0;
            } else {
                consecutive += 1;
            }
        }

        if let Some(expected) = options.expected_order {
            let mut budget = 4000;
            while chain.order() < expected && budget > 0 {
                let r = pr.next_element(&mut rng);
                chain.insert_if_new(r);
                budget -= 1;
            }
            if chain.order() < expected {
                chain.verify_repair();
            }
            if chain.order() != expected {
                return Err(GroupError::OrderShortfall {
                    expected,
                    got: chain.order(),
                });
            }
        }

        match options.verify {
            VerifyMode::Full => chain.verify_repair(),
            VerifyMode::Auto => {
                if degree <= FULL_VERIFY_DEGREE && options.expected_order.is_none() {
                    chain.verify_repair();
                }
            }
            VerifyMode::Probabilistic => {}
        }
        Ok(chain)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.orbit.len() as u128)
            .product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn is_fully_verified(&self) -> bool {
        self.fully_verified
    }

    /// Generators of the stabilizer of the first `k` base points.
    pub fn level_generators(&self, k: usize) -> Vec<Permutation> {
        if k >= self.levels.len() {
            return Vec::new();
        }
        self.levels[k].gens.clone()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// All strong generators (the level-0 set).
    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.levels
            .first()
            .map(|l| l.gens.clone())
            .unwrap_or_default()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        self.sift(g).is_ok()
    }

    /// Strips `g` through the chain. `Ok(())` means membership; otherwise
    /// the residue and the level it got stuck at are returned.
    pub fn sift(&self, g: &Permutation) -> Result<(), (Permutation, usize)> {
        let mut images: Vec<u32> = g.images().to_vec();
        for (i, level) in self.levels.iter().enumerate() {
            let beta = images[level.base] as usize;
            if beta == level.base {
                continue;
            }
            if !level.contains(beta) {
                let residue = Permutation::from_images(images).expect("sift residue");
                return Err((residue, i));
            }
            level.mul_inverse_transversal(beta, &mut images);
        }
        let residue = Permutation::from_images(images).expect("sift residue");
        if residue.is_identity() {
            Ok(())
        } else {
            Err((residue, self.levels.len()))
        }
    }

    /// A uniformly random element, as a product of random transversals.
    pub fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let beta = level.orbit[rng.gen_range(0..level.orbit.len())] as usize;
            g = g.compose(&level.transversal(beta));
        }
        g
    }

    fn insert(&mut self, g: Permutation) {
        let mut current = g;
        loop {
            match self.sift(&current) {
                Ok(()) => return,
                Err((residue, l)) => {
                    self.add_generator_at(residue.clone(), l);
                    current = residue;
                }
            }
        }
    }

    fn insert_if_new(&mut self, g: Permutation) -> bool {
        match self.sift(&g) {
            Ok(()) => false,
            Err((residue, l)) => {
                self.add_generator_at(residue.clone(), l);
                self.insert(residue);
                true
            }
        }
    }

    fn add_generator_at(&mut self, g: Permutation, level: usize) {
        if level == self.levels.len() {
            let moved = (0..self.degree)
                .find(|&p| g.apply(p) != p)
                .expect("non-identity residue");
            self.levels.push(Level::new(self.degree, moved));
        }
        let inv = g.inverse();
        for l in 0..=level {
            self.levels[l].gens.push(g.clone());
            self.levels[l].invs.push(inv.clone());
        }
        for l in 0..=level {
            self.levels[l].rebuild_orbit();
        }
        self.fully_verified = false;
    }

    /// Deterministic Schreier-generator verification; repairs the chain in
    /// place if any Schreier generator fails to sift.
    pub fn verify_repair(&mut self) {
        self.complete_from(0);
        self.fully_verified = true;
    }

    fn complete_from(&mut self, i: usize) {
        if i >= self.levels.len() {
            return;
        }
        self.complete_from(i + 1);
        'rescan: loop {
            let orbit: Vec<u32> = self.levels[i].orbit.clone();
            let ngens = self.levels[i].gens.len();
            for &beta in &orbit {
                let beta = beta as usize;
                let u_beta = self.levels[i].transversal(beta);
                for gi in 0..ngens {
                    let mut images: Vec<u32> = u_beta
                        .images()
                        .iter()
                        .map(|&x| self.levels[i].gens[gi].apply(x as usize) as u32)
                        .collect();
                    let target = images[self.levels[i].base] as usize;
                    self.levels[i].mul_inverse_transversal(target, &mut images);
                    let schreier = Permutation::from_images(images).expect("schreier gen");
                    if schreier.is_identity() {
                        continue;
                    }
                    if let Err((residue, l)) = self.sift_from(&schreier, i + 1) {
                        self.add_generator_at(residue, l);
                        self.complete_from(i + 1);
                        continue 'rescan;
                    }
                }
            }
            break;
        }
    }

    fn sift_from(&self, g: &Permutation, start: usize) -> Result<(), (Permutation, usize)> {
        let mut images: Vec<u32> = g.images().to_vec();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let beta = images[level.base] as usize;
            if beta == level.base {
                continue;
            }
            if !level.contains(beta) {
                let residue = Permutation::from_images(images).expect("sift residue");
                return Err((residue, i));
            }
            level.mul_inverse_transversal(beta, &mut images);
        }
        let residue = Permutation::from_images(images).expect("sift residue");
        if residue.is_identity() {
            Ok(())
        } else {
            Err((residue, self.levels.len()))
        }
    }
}

/// Product-replacement random element generator.
struct ProductReplacer {
    slots: Vec<Permutation>,
    accumulator: Permutation,
}

impl ProductReplacer {
    fn new(mut gens: Vec<Permutation>, degree: usize) -> Self {
        let original = gens.clone();
        let mut i = 0;
        while gens.len() < 10 {
            gens.push(original[i % original.len()].clone());
            i += 1;
        }
        ProductReplacer {
            slots: gens,
            accumulator: Permutation::identity(degree),
        }
    }

    fn next_element(&mut self, rng: &mut impl Rng) -> Permutation {
        for _ in 0..4 {
            let i = rng.gen_range(0..self.slots.len());
            let mut j = rng.gen_range(0..self.slots.len() - 1);
            if j >= i {
                j += 1;
            }
            let product = if rng.gen_bool(0.5) {
                self.slots[i].compose(&self.slots[j])
            } else {
                self.slots[i].compose(&self.slots[j].inverse())
            };
            self.slots[i] = product;
            self.accumulator = if rng.gen_bool(0.5) {
                self.accumulator.compose(&self.slots[i])
            } else {
                self.slots[i].compose(&self.accumulator)
            };
        }
        self.accumulator.clone()
    }
}

/// A permutation group given by generators, with a lazily built chain.
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabilizerChain>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PermutationGroup(degree {}, {} generators)",
            self.degree,
            self.generators.len()
        )
    }
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch(g.degree(), degree));
            }
        }
        let generators: Vec<Permutation> =
            generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermutationGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    /// The symmetric group in its natural action.
    pub fn symmetric(n: usize) -> Self {
        let gens = (0..n.saturating_sub(1))
            .map(|i| Permutation::from_cycles(n, &[vec![i, i + 1]]).expect("adjacent swap"))
            .collect();
        PermutationGroup {
            degree: n,
            generators: gens,
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The chain, built on first use with default options.
    pub fn chain(&self) -> &StabilizerChain {
        self.chain.get_or_init(|| {
            StabilizerChain::build(self.degree, &self.generators, &ChainOptions::default())
                .expect("default chain build cannot fail")
        })
    }

    /// Builds the cached chain with an expected order, certifying
    /// completeness when the expectation is met.
    pub fn chain_with_expected_order(
        &self,
        expected: u128,
    ) -> Result<&StabilizerChain, GroupError> {
        if let Some(chain) = self.chain.get() {
            if chain.order() != expected {
                return Err(GroupError::OrderShortfall {
                    expected,
                    got: chain.order(),
                });
            }
            return Ok(chain);
        }
        let options = ChainOptions {
            expected_order: Some(expected),
            ..ChainOptions::default()
        };
        let chain = StabilizerChain::build(self.degree, &self.generators, &options)?;
        let _ = self.chain.set(chain);
        Ok(self.chain.get().expect("chain just set"))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn is_member(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, GroupError> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        Ok(orbit)
    }

    /// All orbits, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let mut orbit = self.orbit(p).expect("in range");
            for &q in &orbit {
                seen[q] = true;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0 && self.orbit(0).expect("point 0").len() == self.degree
    }

    /// Pointwise stabilizer of the given points, from a chain with the
    /// points as prescribed base prefix.
    pub fn point_stabilizer(&self, points: &[usize]) -> Result<PermutationGroup, GroupError> {
        for (i, &p) in points.iter().enumerate() {
            if p >= self.degree {
                return Err(GroupError::PointOutOfRange {
                    point: p,
                    degree: self.degree,
                });
            }
            if points[..i].contains(&p) {
                return Err(GroupError::DuplicatePoint);
            }
        }
        let order = self.order();
        let options = ChainOptions {
            base_hint: points.to_vec(),
            expected_order: Some(order),
            verify: VerifyMode::Auto,
        };
        let chain = StabilizerChain::build(self.degree, &self.generators, &options)?;
        let mut gens = chain.level_generators(points.len());
        gens.sort_unstable();
        gens.dedup();
        PermutationGroup::new(self.degree, gens)
    }

    /// Centralizer of `h` in `self`, by backtrack search over the chain
    /// pruned by commutation with `h`'s generators.
    pub fn centralizer(&self, h: &PermutationGroup) -> Result<PermutationGroup, GroupError> {
        if h.degree != self.degree {
            return Err(GroupError::DegreeMismatch(h.degree, self.degree));
        }
        for g in &h.generators {
            if !self.is_member(g) {
                return Err(GroupError::NotSubgroup);
            }
        }
        if h.generators.is_empty() {
            return Ok(self.clone());
        }

        // Base the search at points in large h-orbits so assignments
        // propagate far.
        let mut horbits = h.orbits();
        horbits.sort_by_key(|o| std::cmp::Reverse(o.len()));
        let base_hint: Vec<usize> = horbits.iter().take(24).map(|o| o[0]).collect();
        let options = ChainOptions {
            base_hint,
            expected_order: Some(self.order()),
            verify: VerifyMode::Auto,
        };
        let chain = StabilizerChain::build(self.degree, &self.generators, &options)?;

        let mut search = CentralizerSearch {
            degree: self.degree,
            chain: &chain,
            hgens: h
                .generators
                .iter()
                .flat_map(|g| [g.clone(), g.inverse()])
                .collect(),
            img: vec![u32::MAX; self.degree],
            pre: vec![u32::MAX; self.degree],
            trail: Vec::new(),
            found: Vec::new(),
            found_orbit0: vec![false; self.degree],
        };
        let identity = Permutation::identity(self.degree);
        search.run(0, &identity);
        PermutationGroup::new(self.degree, search.found)
    }

    /// Derived subgroup: commutators of generators closed under
    /// conjugation by the group's generators.
    pub fn derived_subgroup(&self) -> PermutationGroup {
        let mut gens: Vec<Permutation> = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in self.generators.iter().skip(i + 1) {
                let comm = a
                    .inverse()
                    .compose(&b.inverse())
                    .compose(a)
                    .compose(b);
                if !comm.is_identity() {
                    gens.push(comm);
                }
            }
        }
        gens.sort_unstable();
        gens.dedup();
        let mut derived = PermutationGroup::new(self.degree, gens).expect("degree checked");
        loop {
            let mut missing: Vec<Permutation> = Vec::new();
            for d in &derived.generators {
                for g in &self.generators {
                    let c = d.conjugate_by(g);
                    if !derived.is_member(&c) {
                        missing.push(c);
                    }
                }
            }
            if missing.is_empty() {
                return derived;
            }
            let mut gens = derived.generators.clone();
            gens.extend(missing);
            gens.sort_unstable();
            gens.dedup();
            derived = PermutationGroup::new(self.degree, gens).expect("degree checked");
        }
    }

    pub fn abelianization_order(&self) -> u128 {
        self.order() / self.derived_subgroup().order()
    }

    pub fn is_perfect(&self) -> bool {
        !self.is_trivial() && self.abelianization_order() == 1
    }

    /// A uniformly random element.
    pub fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        self.chain().random_element(rng)
    }

    /// Every element, if the order does not exceed `cap`.
    pub fn elements(&self, cap: usize) -> Option<Vec<Permutation>> {
        if self.order() > cap as u128 {
            return None;
        }
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![Permutation::identity(self.degree)];
        seen.insert(queue[0].clone());
        let mut head = 0;
        while head < queue.len() {
            let g = queue[head].clone();
            head += 1;
            for gen in &self.generators {
                let next = g.compose(gen);
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        Some(queue)
    }
}

struct CentralizerSearch<'a> {
    degree: usize,
    chain: &'a StabilizerChain,
    hgens: Vec<Permutation>,
    img: Vec<u32>,
    pre: Vec<u32>,
    trail: Vec<usize>,
    found: Vec<Permutation>,
    found_orbit0: Vec<bool>,
}

impl<'a> CentralizerSearch<'a> {
    fn run(&mut self, level: usize, t: &Permutation) {
        if level == self.chain.levels.len() {
            if !t.is_identity() && self.commutes(t) {
                self.found.push(t.clone());
                self.refresh_found_orbit();
            }
            return;
        }
        let lvl = &self.chain.levels[level];
        let base = lvl.base;
        let mut orbit: Vec<u32> = lvl.orbit.clone();
        orbit.sort_unstable();
        for &delta in &orbit {
            let delta = delta as usize;
            if level == 0 && delta != base && self.found_orbit0[delta] {
                continue;
            }
            let gamma = t.apply(delta);
            let mark = self.trail.len();
            if self.assign_and_propagate(base, gamma) {
                let t_next = lvl.transversal(delta).compose(t);
                self.run(level + 1, &t_next);
            }
            self.undo_to(mark);
        }
    }

    fn commutes(&self, c: &Permutation) -> bool {
        self.hgens.iter().step_by(2).all(|h| {
            (0..self.degree).all(|x| c.apply(h.apply(x)) == h.apply(c.apply(x)))
        })
    }

    fn refresh_found_orbit(&mut self) {
        let base0 = self.chain.levels[0].base;
        self.found_orbit0.fill(false);
        let mut queue = vec![base0];
        self.found_orbit0[base0] = true;
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            for f in &self.found {
                let q = f.apply(p);
                if !self.found_orbit0[q] {
                    self.found_orbit0[q] = true;
                    queue.push(q);
                }
            }
        }
    }

    fn assign_and_propagate(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if self.img[x] != u32::MAX {
                if self.img[x] != y as u32 {
                    return false;
                }
                continue;
            }
            if self.pre[y] != u32::MAX {
                return false;
            }
            self.img[x] = y as u32;
            self.pre[y] = x as u32;
            self.trail.push(x);
            for h in &self.hgens {
                queue.push((h.apply(x), h.apply(y)));
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail entry");
            let y = self.img[x];
            self.img[x] = u32::MAX;
            self.pre[y as usize] = u32::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(text: &str, degree: usize) -> Permutation {
        Permutation::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn symmetric_group_order() {
        assert_eq!(PermutationGroup::symmetric(4).order(), 24);
        assert_eq!(PermutationGroup::symmetric(8).order(), 40320);
    }

    #[test]
    fn s4_orbit_and_transitivity() {
        let g = PermutationGroup::symmetric(4);
        let mut orbit = g.orbit(0).unwrap();
        orbit.sort_unstable();
        assert_eq!(orbit, vec![0, 1, 2, 3]);
        assert!(g.is_transitive());
    }

    #[test]
    fn intransitive_orbit() {
        let g = PermutationGroup::new(3, vec![perm("(1 2)", 3)]).unwrap();
        assert_eq!(g.orbit(2).unwrap(), vec![2]);
        assert!(!g.is_transitive());
    }

    #[test]
    fn s4_point_stabilizer() {
        let g = PermutationGroup::symmetric(4);
        let stab = g.point_stabilizer(&[0]).unwrap();
        assert_eq!(stab.order(), 6);
        for gen in stab.generators() {
            assert_eq!(gen.apply(0), 0);
        }
        let all = g.point_stabilizer(&[0, 1, 2, 3]).unwrap();
        assert_eq!(all.order(), 1);
    }

    #[test]
    fn orbit_stabilizer_identity() {
        let g = PermutationGroup::symmetric(6);
        let stab = g.point_stabilizer(&[2]).unwrap();
        assert_eq!(stab.order() * g.orbit(2).unwrap().len() as u128, g.order());
    }

    #[test]
    fn membership_of_random_words() {
        let g = PermutationGroup::symmetric(7);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let w = g.random_element(&mut rng);
            assert!(g.is_member(&w));
        }
        let odd_degree = Permutation::identity(6);
        assert!(!g.is_member(&odd_degree));
    }

    #[test]
    fn centralizer_of_whole_s4_is_trivial() {
        let g = PermutationGroup::symmetric(4);
        let c = g.centralizer(&g).unwrap();
        assert_eq!(c.order(), 1);
    }

    #[test]
    fn centralizer_of_transposition_in_s4() {
        let g = PermutationGroup::symmetric(4);
        let h = PermutationGroup::new(4, vec![perm("(1 2)", 4)]).unwrap();
        let c = g.centralizer(&h).unwrap();
        assert_eq!(c.order(), 4);
        // Brute force over all 24 elements.
        let t = perm("(1 2)", 4);
        let brute: Vec<Permutation> = g
            .elements(24)
            .unwrap()
            .into_iter()
            .filter(|e| e.compose(&t) == t.compose(e))
            .collect();
        assert_eq!(brute.len() as u128, c.order());
        for e in brute {
            assert!(c.is_member(&e));
        }
    }

    #[test]
    fn centralizer_of_trivial_is_whole_group() {
        let g = PermutationGroup::symmetric(4);
        let c = g.centralizer(&PermutationGroup::trivial(4)).unwrap();
        assert_eq!(c.order(), 24);
    }

    #[test]
    fn centralizer_rejects_non_subgroup() {
        let g = PermutationGroup::new(4, vec![perm("(1 2 3)", 4)]).unwrap();
        let h = PermutationGroup::new(4, vec![perm("(1 2)", 4)]).unwrap();
        assert_eq!(g.centralizer(&h).unwrap_err(), GroupError::NotSubgroup);
    }

    #[test]
    fn a5_is_perfect() {
        let a5 = PermutationGroup::new(5, vec![perm("(1 2 3)", 5), perm("(3 4 5)", 5)]).unwrap();
        assert_eq!(a5.order(), 60);
        assert!(a5.is_perfect());
    }

    #[test]
    fn s4_abelianization() {
        let g = PermutationGroup::symmetric(4);
        assert_eq!(g.abelianization_order(), 2);
        // Brute force: derived subgroup of S4 is A4.
        assert_eq!(g.derived_subgroup().order(), 12);
    }

    #[test]
    fn cyclic_c6_abelianization() {
        let c6 = PermutationGroup::new(6, vec![perm("(1 2 3 4 5 6)", 6)]).unwrap();
        assert_eq!(c6.order(), 6);
        assert_eq!(c6.abelianization_order(), 6);
    }

    #[test]
    fn chain_transversal_consistency() {
        let g = PermutationGroup::symmetric(5);
        let chain = g.chain();
        assert_eq!(
            chain.orbit_sizes().iter().map(|&s| s as u128).product::<u128>(),
            120
        );
        for gen in g.generators() {
            assert!(chain.contains(gen));
        }
    }

    #[test]
    fn elements_enumeration() {
        let g = PermutationGroup::symmetric(4);
        let elems = g.elements(24).unwrap();
        assert_eq!(elems.len(), 24);
        assert!(g.elements(23).is_none());
    }
}
