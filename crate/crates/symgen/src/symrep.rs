//! Succinct `pi * w` arithmetic over a completed enumeration.
//!
//! Any element of the target group is `pi * w` for a control element `pi`
//! and a word `w` in the symmetric generators. A [`SymContext`] stores the
//! BFS-canonical t-word of every coset; canonicalization replaces `w` by
//! the stored word for the element's coset and recovers the unique control
//! element making up the difference, via permutation equality against the
//! control image on the coset space. Multiplication and inversion are the
//! progenitor arithmetic followed by canonicalization, checked against the
//! coset-action permutation oracle.

use rand::Rng;
use thiserror::Error;

use crate::group::PermutationGroup;
use crate::perm::Permutation;
use crate::progenitor::{EnumerationResult, ProgElement, SymmetricPresentation};
use crate::words::{evaluate_word, WordedChain};

/// An element `pi * w`; the progenitor arithmetic applies unchanged.
pub type SymElement = ProgElement;

#[derive(Debug, Error)]
pub enum SymrepError {
    #[error("context refused: {0}")]
    Refused(String),
    #[error("element does not belong to this context: {0}")]
    BadElement(String),
    #[error("context is corrupted: {0}")]
    Corrupted(String),
}

/// Arithmetic context built from a certified enumeration.
pub struct SymContext {
    n: usize,
    index: usize,
    control_group: PermutationGroup,
    /// Presentation generator images on the control points.
    control_images: Vec<Permutation>,
    /// Presentation generator images on the coset space.
    column_images: Vec<Permutation>,
    /// Symmetric generators on the coset space, per point.
    t_perms: Vec<Permutation>,
    /// BFS tree over t-edges: (parent, label), root at coset 0.
    parents: Vec<(u32, u32)>,
    diameter: usize,
    control_chain: WordedChain,
    image_chain: WordedChain,
}

/// Contexts refuse indices above this bound by default: full-scale
/// targets are out of reach by design.
pub const DEFAULT_INDEX_BOUND: usize = 20_000;

impl SymContext {
    /// Builds a context. Requires the faithfulness certificate (the
    /// control embeds, so the coset action is faithful) and refuses coset
    /// spaces larger than `index_bound`.
    pub fn build(
        sp: &SymmetricPresentation,
        result: &EnumerationResult,
        index_bound: usize,
    ) -> Result<SymContext, SymrepError> {
        if result.index > index_bound {
            return Err(SymrepError::Refused(format!(
                "index {} exceeds the context bound {index_bound}",
                result.index
            )));
        }
        if !result.control_embeds {
            return Err(SymrepError::Refused(
                "control does not embed; the coset action is not certified faithful".into(),
            ));
        }
        let n = sp.progenitor.n();
        let index = result.index;
        let control_images = sp.control_map.images.clone();
        let ncontrol = result.expansion.ncontrol;
        let column_images: Vec<Permutation> = (0..ncontrol)
            .map(|g| result.table.generator_action(g))
            .collect();
        let t_perms = result.all_t_perms();

        let mut parents = vec![(u32::MAX, 0u32); index];
        let mut depth = vec![0u32; index];
        parents[0] = (0, u32::MAX);
        let mut queue = std::collections::VecDeque::from([0u32]);
        let mut diameter = 0;
        while let Some(c) = queue.pop_front() {
            for (i, t) in t_perms.iter().enumerate() {
                let d = t.apply(c as usize);
                if d != 0 && parents[d].0 == u32::MAX {
                    parents[d] = (c, i as u32);
                    depth[d] = depth[c as usize] + 1;
                    diameter = diameter.max(depth[d] as usize);
                    queue.push_back(d as u32);
                }
            }
        }
        if parents.iter().skip(1).any(|&(p, _)| p == u32::MAX) {
            return Err(SymrepError::Corrupted(
                "t-edge graph does not reach every coset".into(),
            ));
        }

        // A small generating prefix keeps the worded chains lean.
        let control_order = sp.progenitor.control().order();
        let mut prefix = control_images.len();
        for k in 1..=control_images.len() {
            if let Ok(g) = PermutationGroup::new(n, control_images[..k].to_vec()) {
                if g.order() == control_order {
                    prefix = k;
                    break;
                }
            }
        }
        let worded = |images: &[Permutation]| {
            WordedChain::build_from(
                images[0].degree(),
                images
                    .iter()
                    .take(prefix)
                    .enumerate()
                    .map(|(i, p)| (p.clone(), crate::coset::Word::generator(i)))
                    .collect(),
                &[],
            )
        };
        Ok(SymContext {
            n,
            index,
            control_group: sp.progenitor.control().clone(),
            control_chain: worded(&control_images),
            image_chain: worded(&column_images),
            control_images,
            column_images,
            t_perms,
            parents,
            diameter,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Longest BFS-canonical word; every canonical word is at most this
    /// long.
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn identity(&self) -> SymElement {
        SymElement::identity(self.n)
    }

    /// The stored canonical t-word of a coset.
    pub fn canonical_word(&self, coset: usize) -> Vec<u32> {
        let mut word = Vec::new();
        let mut c = coset;
        while c != 0 {
            let (parent, label) = self.parents[c];
            word.push(label);
            c = parent as usize;
        }
        word.reverse();
        word
    }

    fn validate(&self, e: &SymElement) -> Result<(), SymrepError> {
        if e.pi.degree() != self.n {
            return Err(SymrepError::BadElement(format!(
                "pi degree {} vs n = {}",
                e.pi.degree(),
                self.n
            )));
        }
        if e.word.iter().any(|&i| i as usize >= self.n) {
            return Err(SymrepError::BadElement("t-index out of range".into()));
        }
        if !self.control_group.is_member(&e.pi) {
            return Err(SymrepError::BadElement(
                "pi is not a member of the control group".into(),
            ));
        }
        Ok(())
    }

    /// The element's coset: `N pi w = N w`, traced over the t-edges.
    pub fn coset_of(&self, e: &SymElement) -> usize {
        let mut c = 0usize;
        for &i in &e.word {
            c = self.t_perms[i as usize].apply(c);
        }
        c
    }

    /// The coset-action permutation of an element: the oracle every
    /// arithmetic result is compared against.
    pub fn to_coset_perm(&self, e: &SymElement) -> Result<Permutation, SymrepError> {
        self.validate(e)?;
        let word = self
            .control_chain
            .express(&e.pi)
            .ok_or_else(|| SymrepError::Corrupted("control chain lost a member".into()))?;
        let mut p = evaluate_word(&self.column_images, self.index, &word);
        for &i in &e.word {
            p = p.compose(&self.t_perms[i as usize]);
        }
        Ok(p)
    }

    /// Canonical form: the stored BFS word for the element's coset, with
    /// the control part recovered by permutation equality. Idempotent.
    pub fn canonicalize(&self, e: &SymElement) -> Result<SymElement, SymrepError> {
        self.validate(e)?;
        let coset = self.coset_of(e);
        let canonical = self.canonical_word(coset);
        let image = self.to_coset_perm(e)?;
        let mut canonical_image = Permutation::identity(self.index);
        for &i in &canonical {
            canonical_image = canonical_image.compose(&self.t_perms[i as usize]);
        }
        let residue = image.compose(&canonical_image.inverse());
        if residue.apply(0) != 0 {
            return Err(SymrepError::Corrupted(
                "pi recovery left the subgroup coset".into(),
            ));
        }
        let word = self
            .image_chain
            .express(&residue)
            .ok_or_else(|| SymrepError::Corrupted("recovered part is not in the control image".into()))?;
        let pi = evaluate_word(&self.control_images, self.n, &word);
        Ok(SymElement {
            pi,
            word: canonical,
        })
    }

    /// Canonical product, equal to `a * b` in the target group.
    pub fn multiply(&self, a: &SymElement, b: &SymElement) -> Result<SymElement, SymrepError> {
        self.validate(a)?;
        self.validate(b)?;
        self.canonicalize(&a.multiply(b))
    }

    /// Canonical inverse.
    pub fn invert(&self, a: &SymElement) -> Result<SymElement, SymrepError> {
        self.validate(a)?;
        self.canonicalize(&a.inverse())
    }

    /// A uniformly random canonical element: uniform coset times uniform
    /// control element.
    pub fn random_element(&self, rng: &mut impl Rng) -> SymElement {
        let coset = rng.gen_range(0..self.index);
        let pi = self.control_group.random_element(rng);
        let e = SymElement {
            pi,
            word: self.canonical_word(coset),
        };
        self.canonicalize(&e).expect("random element is valid")
    }
}

/// Text form: `pi = (1 2 3)(4 5) ; w = t3 t17 t3`.
pub fn element_to_text(e: &SymElement) -> String {
    let word = e
        .word
        .iter()
        .map(|&i| format!("t{}", i + 1))
        .collect::<Vec<_>>()
        .join(" ");
    format!("pi = {} ; w = {}", e.pi, word)
}

/// Parses the text form back; `n` is the control degree.
pub fn parse_element(text: &str, n: usize) -> Result<SymElement, SymrepError> {
    let (pi_part, w_part) = text
        .split_once(';')
        .ok_or_else(|| SymrepError::BadElement("expected 'pi = ... ; w = ...'".into()))?;
    let pi_text = pi_part
        .trim()
        .strip_prefix("pi")
        .and_then(|s| s.trim_start().strip_prefix('='))
        .ok_or_else(|| SymrepError::BadElement("missing 'pi ='".into()))?
        .trim();
    let w_text = w_part
        .trim()
        .strip_prefix('w')
        .and_then(|s| s.trim_start().strip_prefix('='))
        .ok_or_else(|| SymrepError::BadElement("missing 'w ='".into()))?
        .trim();
    let pi = Permutation::parse_cycles(pi_text, n)
        .map_err(|e| SymrepError::BadElement(e.to_string()))?;
    let mut word = Vec::new();
    for token in w_text.split_whitespace() {
        let idx: usize = token
            .strip_prefix('t')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| SymrepError::BadElement(format!("bad t-token '{token}'")))?;
        if idx == 0 || idx > n {
            return Err(SymrepError::BadElement(format!("t-index {idx} out of range")));
        }
        word.push(idx as u32 - 1);
    }
    Ok(SymElement { pi, word })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{induced_action, ActionRecipe};
    use crate::coset::EnumerationLimits;
    use crate::progenitor::{Progenitor, SymRelation};
    use crate::words::coxeter_symmetric;
    use rand::SeedableRng;

    fn w_a4_context() -> (SymmetricPresentation, EnumerationResult) {
        let map = coxeter_symmetric(4);
        let group = PermutationGroup::new(4, map.images.clone()).unwrap();
        let action = induced_action(&group, &ActionRecipe::Natural).unwrap();
        let prog = Progenitor::new(action).unwrap();
        let pi = Permutation::parse_cycles("(1 2)", 4).unwrap();
        let sp =
            SymmetricPresentation::new(prog, vec![SymRelation::new(pi, vec![0], 3)], map).unwrap();
        let result = sp.enumerate(&EnumerationLimits::with_max(10_000)).unwrap();
        (sp, result)
    }

    #[test]
    fn identity_canonicalizes_to_identity() {
        let (sp, result) = w_a4_context();
        let ctx = SymContext::build(&sp, &result, DEFAULT_INDEX_BOUND).unwrap();
        let id = ctx.identity();
        let canon = ctx.canonicalize(&id).unwrap();
        assert!(canon.pi.is_identity());
        assert!(canon.word.is_empty());
    }

    #[test]
    fn canonicalize_is_idempotent_and_oracle_sound() {
        let (sp, result) = w_a4_context();
        let ctx = SymContext::build(&sp, &result, DEFAULT_INDEX_BOUND).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let e = ctx.random_element(&mut rng);
            let once = ctx.canonicalize(&e).unwrap();
            let twice = ctx.canonicalize(&once).unwrap();
            assert_eq!(once, twice);
            assert_eq!(
                ctx.to_coset_perm(&e).unwrap(),
                ctx.to_coset_perm(&once).unwrap()
            );
            assert!(once.word.len() <= ctx.diameter());
        }
    }

    #[test]
    fn relator_padding_shrinks() {
        let (sp, result) = w_a4_context();
        let ctx = SymContext::build(&sp, &result, DEFAULT_INDEX_BOUND).unwrap();
        // (pi t_0)^3 is a relator: padding an element with it keeps the
        // value but the canonical word stays short.
        let pi = Permutation::parse_cycles("(1 2)", 4).unwrap();
        let relator = SymElement {
            pi,
            word: vec![0],
        }
        .pow(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let e = ctx.random_element(&mut rng);
            let padded = e.multiply(&relator);
            let canon = ctx.canonicalize(&padded).unwrap();
            assert!(canon.word.len() < padded.word.len());
            assert_eq!(
                ctx.to_coset_perm(&padded).unwrap(),
                ctx.to_coset_perm(&canon).unwrap()
            );
        }
    }

    #[test]
    fn multiply_and_invert_match_oracle() {
        let (sp, result) = w_a4_context();
        let ctx = SymContext::build(&sp, &result, DEFAULT_INDEX_BOUND).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let a = ctx.random_element(&mut rng);
            let b = ctx.random_element(&mut rng);
            let ab = ctx.multiply(&a, &b).unwrap();
            let oracle = ctx
                .to_coset_perm(&a)
                .unwrap()
                .compose(&ctx.to_coset_perm(&b).unwrap());
            assert_eq!(ctx.to_coset_perm(&ab).unwrap(), oracle);
            let ainv = ctx.invert(&a).unwrap();
            let prod = ctx.multiply(&a, &ainv).unwrap();
            assert!(prod.pi.is_identity());
            assert!(prod.word.is_empty());
        }
    }

    #[test]
    fn associativity_against_oracle() {
        let (sp, result) = w_a4_context();
        let ctx = SymContext::build(&sp, &result, DEFAULT_INDEX_BOUND).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let a = ctx.random_element(&mut rng);
            let b = ctx.random_element(&mut rng);
            let c = ctx.random_element(&mut rng);
            let left = ctx
                .multiply(&ctx.multiply(&a, &b).unwrap(), &c)
                .unwrap();
            let right = ctx
                .multiply(&a, &ctx.multiply(&b, &c).unwrap())
                .unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn conjugation_moves_t_indices() {
        // (1, empty) conjugation test: t_i^g = t_{g(i)} as elements.
        let (sp, result) = w_a4_context();
        let ctx = SymContext::build(&sp, &result, DEFAULT_INDEX_BOUND).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let g = sp.progenitor.control().random_element(&mut rng);
            let i = rng.gen_range(0..4u32);
            let t_i = SymElement {
                pi: Permutation::identity(4),
                word: vec![i],
            };
            let g_elt = SymElement {
                pi: g.clone(),
                word: vec![],
            };
            let conjugated = ctx
                .multiply(
                    &ctx.multiply(&ctx.invert(&g_elt).unwrap(), &t_i).unwrap(),
                    &g_elt,
                )
                .unwrap();
            let expected = ctx
                .canonicalize(&SymElement {
                    pi: Permutation::identity(4),
                    word: vec![g.apply(i as usize) as u32],
                })
                .unwrap();
            assert_eq!(conjugated, expected);
        }
    }

    #[test]
    fn coset_coverage_by_random_sampling() {
        let (sp, result) = w_a4_context();
        let ctx = SymContext::build(&sp, &result, DEFAULT_INDEX_BOUND).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let mut seen = vec![false; ctx.index()];
        for _ in 0..(10 * ctx.index()) {
            let e = ctx.random_element(&mut rng);
            seen[ctx.coset_of(&e)] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn context_refuses_oversized_index() {
        let (sp, result) = w_a4_context();
        assert!(matches!(
            SymContext::build(&sp, &result, 3),
            Err(SymrepError::Refused(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let e = SymElement {
            pi: Permutation::parse_cycles("(1 2 3)", 4).unwrap(),
            word: vec![2, 0, 2],
        };
        let text = element_to_text(&e);
        assert_eq!(text, "pi = (1 2 3) ; w = t3 t1 t3");
        let back = parse_element(&text, 4).unwrap();
        assert_eq!(back, e);
        let id = parse_element("pi = () ; w =", 4).unwrap();
        assert!(id.pi.is_identity());
        assert!(id.word.is_empty());
    }
}
