//! The binary Golay code, the Steiner system S(5,8,24), and the Mathieu
//! groups acting on its blocks.
//!
//! The code is built constant-free as the lexicode: greedy closure over
//! 24-bit words at minimum distance 8, followed by linearity and
//! weight-distribution verification, so the construction certifies
//! itself. The M_24 generators are embedded constants relative to this
//! code's point labelling; they are never trusted blindly, an integrity
//! check (octad preservation plus group order) runs before use.

use thiserror::Error;

use crate::action::{self, InducedAction};
use crate::group::PermutationGroup;
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum GolayError {
    #[error("golay construction integrity failure: {0}")]
    Integrity(String),
    #[error(transparent)]
    Action(#[from] crate::action::ActionError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// A subset of the 24-point set, packed into the low 24 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block24(pub u32);

impl Block24 {
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn points(self) -> Vec<usize> {
        (0..24).filter(|&b| self.0 >> b & 1 == 1).collect()
    }

    /// 24-character bitstring, bit 0 leftmost.
    pub fn bitstring(self) -> String {
        (0..24)
            .map(|b| if self.0 >> b & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

const FULL_MASK: u32 = (1 << 24) - 1;

/// Generators of M_24 as image tables on the 24 points of the lexicode
/// labelling. Derived offline as automorphisms of the octad system and
/// certified at load by `m24()`.
const M24_GENERATOR_IMAGES: [[u8; 24]; 2] = m24_generator_images();

/// The binary Golay code: 4096 codewords closed under symmetric
/// difference, weight distribution {0:1, 8:759, 12:2576, 16:759, 24:1}.
pub struct GolayCode {
    codewords: Vec<u32>,
    octads: Vec<u32>,
    dodecads: Vec<u32>,
}

impl GolayCode {
    /// Greedy lexicographic closure at minimum distance 8, then
    /// self-certification.
    pub fn build() -> Result<GolayCode, GolayError> {
        let mut code: Vec<u32> = vec![0];
        for v in 1u32..=FULL_MASK {
            let mut ok = true;
            for &c in &code {
                if (v ^ c).count_ones() < 8 {
                    ok = false;
                    break;
                }
            }
            if ok {
                code.push(v);
                if code.len() == 4096 {
                    break;
                }
            }
        }
        if code.len() != 4096 {
            return Err(GolayError::Integrity(format!(
                "lexicode closure produced {} codewords",
                code.len()
            )));
        }

        // Linearity: closed under XOR.
        let mut in_code = vec![false; 1 << 24];
        for &c in &code {
            in_code[c as usize] = true;
        }
        let basis: Vec<u32> = {
            // The 12 lexicode basis words are the codewords at positions
            // 2^k in discovery order; checking closure on basis pairs
            // against all words is equivalent and cheap.
            code.iter().copied().skip(1).take(24).collect()
        };
        for &a in &basis {
            for &c in &code {
                if !in_code[(a ^ c) as usize] {
                    return Err(GolayError::Integrity("code is not linear".into()));
                }
            }
        }

        let mut by_weight = [0usize; 25];
        for &c in &code {
            by_weight[c.count_ones() as usize] += 1;
        }
        let expected: [(usize, usize); 5] = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)];
        for (w, count) in expected {
            if by_weight[w] != count {
                return Err(GolayError::Integrity(format!(
                    "weight {w} count {} != {count}",
                    by_weight[w]
                )));
            }
        }
        if by_weight.iter().sum::<usize>() != 4096 {
            return Err(GolayError::Integrity("stray weights present".into()));
        }

        let octads: Vec<u32> = code.iter().copied().filter(|c| c.count_ones() == 8).collect();
        let dodecads: Vec<u32> = code
            .iter()
            .copied()
            .filter(|c| c.count_ones() == 12)
            .collect();
        let mut sorted = code;
        sorted.sort_unstable();
        Ok(GolayCode {
            codewords: sorted,
            octads,
            dodecads,
        })
    }

    pub fn codewords(&self) -> &[u32] {
        &self.codewords
    }

    /// The 759 octads, sorted numerically.
    pub fn octads(&self) -> &[u32] {
        &self.octads
    }

    /// The 2576 dodecads, sorted numerically.
    pub fn dodecads(&self) -> &[u32] {
        &self.dodecads
    }

    pub fn is_octad(&self, mask: u32) -> bool {
        self.octads.binary_search(&mask).is_ok()
    }

    /// Every 5-subset of the 24 points lies in exactly one octad.
    pub fn steiner_check(&self) -> bool {
        steiner_check_blocks(&self.octads)
    }

    /// All partitions of the point set into three disjoint octads.
    pub fn trios(&self) -> Vec<[u32; 3]> {
        let mut out: Vec<[u32; 3]> = Vec::new();
        for (i, &a) in self.octads.iter().enumerate() {
            for &b in &self.octads[i + 1..] {
                if a & b != 0 || b < a {
                    continue;
                }
                let c = FULL_MASK ^ a ^ b;
                if c > b && self.is_octad(c) {
                    out.push([a, b, c]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The Mathieu group M_24 from embedded generator constants, with the
    /// integrity certificate: all generators preserve the octad set and
    /// the group order is 244823040.
    pub fn m24(&self) -> Result<PermutationGroup, GolayError> {
        let gens: Vec<Permutation> = M24_GENERATOR_IMAGES
            .iter()
            .map(|images| {
                Permutation::from_images(images.iter().map(|&x| x as u32).collect())
                    .map_err(|e| GolayError::Integrity(format!("corrupt constant: {e}")))
            })
            .collect::<Result<_, _>>()?;
        for g in &gens {
            for &o in &self.octads {
                let img = apply_perm_to_mask(g, o);
                if !self.is_octad(img) {
                    return Err(GolayError::Integrity(
                        "embedded generator does not preserve the octads".into(),
                    ));
                }
            }
        }
        let group = PermutationGroup::new(24, gens)?;
        group
            .chain_with_expected_order(244_823_040)
            .map_err(|_| GolayError::Integrity("embedded generators have wrong order".into()))?;
        Ok(group)
    }

    /// M_22 as the pointwise stabilizer of two points.
    pub fn m22(&self, a: usize, b: usize) -> Result<PermutationGroup, GolayError> {
        if a == b || a >= 24 || b >= 24 {
            return Err(GolayError::Integrity("need two distinct points".into()));
        }
        let m24 = self.m24()?;
        let stab = m24.point_stabilizer(&[a, b])?;
        if stab.order() != 443_520 {
            return Err(GolayError::Integrity(format!(
                "two-point stabilizer has order {}",
                stab.order()
            )));
        }
        Ok(stab)
    }

    /// The 672 dodecads containing `a` but not `b`, with the induced
    /// M_22 action on them.
    pub fn dodecads_672(&self, a: usize, b: usize) -> Result<InducedAction, GolayError> {
        let m22 = self.m22(a, b)?;
        let family: Vec<u32> = self
            .dodecads
            .iter()
            .copied()
            .filter(|d| d >> a & 1 == 1 && d >> b & 1 == 0)
            .collect();
        Ok(action::on_masks(&m22, family)?)
    }

    /// For the base dodecad (point 0 of the family), the dodecads meeting
    /// it in exactly eight points, grouped into orbits of its stabilizer.
    pub fn dodecad_pairs_meeting_in_8(
        &self,
        family: &InducedAction,
    ) -> Result<Vec<Vec<usize>>, GolayError> {
        let masks = match &family.labels {
            crate::action::Labels::Masks { items } => items,
            _ => return Err(GolayError::Integrity("family is not a mask action".into())),
        };
        let base = masks[0];
        let candidates: Vec<usize> = (0..masks.len())
            .filter(|&i| (masks[i] & base).count_ones() == 8)
            .collect();
        let stab = family.group.point_stabilizer(&[0])?;
        let mut orbit_id = vec![usize::MAX; masks.len()];
        let mut next = 0;
        for p in 0..masks.len() {
            if orbit_id[p] != usize::MAX {
                continue;
            }
            for q in stab.orbit(p)? {
                orbit_id[q] = next;
            }
            next += 1;
        }
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for &c in &candidates {
            let id = orbit_id[c];
            match seen.iter().position(|&s| s == id) {
                Some(k) => orbits[k].push(c),
                None => {
                    seen.push(id);
                    orbits.push(vec![c]);
                }
            }
        }
        Ok(orbits)
    }

    /// Dump lines: octads first (sorted numerically), then the remaining
    /// codewords sorted numerically; one 24-char bitstring per line, bit 0
    /// leftmost.
    pub fn dump_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .octads
            .iter()
            .map(|&o| Block24(o).bitstring())
            .collect();
        lines.extend(
            self.codewords
                .iter()
                .filter(|c| c.count_ones() != 8)
                .map(|&c| Block24(c).bitstring()),
        );
        lines
    }
}

pub(crate) fn steiner_check_blocks(octads: &[u32]) -> bool {
    let total = action::binomial(24, 5);
    let mut seen = vec![false; total];
    let mut marked = 0usize;
    for &o in octads {
        let points: Vec<u32> = (0..24).filter(|&b| o >> b & 1 == 1).collect();
        if points.len() != 8 {
            return false;
        }
        for combo in action::combinations(8, 5) {
            let five: Vec<u32> = combo.iter().map(|&i| points[i as usize]).collect();
            let rank = rank5(&five);
            if seen[rank] {
                return false;
            }
            seen[rank] = true;
            marked += 1;
        }
    }
    marked == total
}

/// Colexicographic rank of a sorted 5-subset of {0..23}.
fn rank5(five: &[u32]) -> usize {
    five.iter()
        .enumerate()
        .map(|(i, &c)| action::binomial(c as usize, i + 1))
        .sum()
}

pub(crate) fn apply_perm_to_mask(p: &Permutation, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros();
        out |= 1 << p.apply(b as usize);
        m &= m - 1;
    }
    out
}

include!("golay_constants.rs");

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    pub(crate) fn code() -> &'static GolayCode {
        static CODE: OnceLock<GolayCode> = OnceLock::new();
        CODE.get_or_init(|| GolayCode::build().expect("golay build"))
    }

    #[test]
    fn weight_distribution() {
        let c = code();
        assert_eq!(c.octads().len(), 759);
        assert_eq!(c.dodecads().len(), 2576);
        let w16 = c
            .codewords()
            .iter()
            .filter(|c| c.count_ones() == 16)
            .count();
        assert_eq!(w16, 759);
    }

    #[test]
    fn complement_closure() {
        let c = code();
        for &o in c.octads() {
            assert!(c.codewords.binary_search(&(FULL_MASK ^ o)).is_ok());
        }
    }

    #[test]
    fn steiner_property_holds() {
        assert!(code().steiner_check());
    }

    #[test]
    fn steiner_fails_with_deleted_octad() {
        let c = code();
        let crippled: Vec<u32> = c.octads()[1..].to_vec();
        assert!(!steiner_check_blocks(&crippled));
    }

    #[test]
    fn steiner_counting_identity() {
        // 759 * C(8,5) = C(24,5)
        assert_eq!(759 * action::binomial(8, 5), action::binomial(24, 5));
    }

    #[test]
    fn trio_count_and_disjointness() {
        let c = code();
        let trios = c.trios();
        assert_eq!(trios.len(), 3795);
        for t in &trios {
            assert_eq!(t[0] & t[1], 0);
            assert_eq!(t[0] & t[2], 0);
            assert_eq!(t[1] & t[2], 0);
            assert_eq!(t[0] | t[1] | t[2], FULL_MASK);
        }
    }

    #[test]
    fn octad_pair_intersections() {
        // Any two distinct octads meet in 0, 2 or 4 points.
        let c = code();
        for (i, &a) in c.octads().iter().enumerate() {
            for &b in &c.octads()[i + 1..] {
                let m = (a & b).count_ones();
                assert!(m == 0 || m == 2 || m == 4, "octads meet in {m}");
            }
        }
    }

    #[test]
    fn dodecad_from_octads_meeting_in_two() {
        let c = code();
        let a = c.octads()[0];
        let b = c
            .octads()
            .iter()
            .copied()
            .find(|&b| b != a && (a & b).count_ones() == 2)
            .expect("some octad meets the first in 2 points");
        let sym_diff = a ^ b;
        assert_eq!(sym_diff.count_ones(), 12);
        assert!(c.dodecads().binary_search(&sym_diff).is_ok());
    }

    #[test]
    fn m24_certified() {
        let c = code();
        let m24 = c.m24().expect("m24 integrity");
        assert_eq!(m24.order(), 244_823_040);
    }

    #[test]
    fn m22_order() {
        let c = code();
        let m22 = c.m22(0, 1).expect("m22");
        assert_eq!(m22.order(), 443_520);
    }

    #[test]
    fn dodecad_family_672() {
        let c = code();
        let family = c.dodecads_672(0, 1).expect("672 family");
        assert_eq!(family.degree(), 672);
        assert!(family.group.is_transitive());
        // Partition of all 2576 dodecads by membership of the two points:
        // 672 with a only, 672 with b only, rest with both or neither.
        let both_or_neither = c
            .dodecads()
            .iter()
            .filter(|&&d| (d & 1 == 1) == (d >> 1 & 1 == 1))
            .count();
        assert_eq!(672 + 672 + both_or_neither, 2576);
    }

    #[test]
    fn meet8_pairs_nonempty_and_even_intersections() {
        let c = code();
        let family = c.dodecads_672(0, 1).expect("672 family");
        let orbits = c.dodecad_pairs_meeting_in_8(&family).expect("orbits");
        assert!(!orbits.is_empty());
        let masks = match &family.labels {
            crate::action::Labels::Masks { items } => items.clone(),
            _ => unreachable!(),
        };
        for orbit in &orbits {
            for &b in orbit {
                assert_eq!((masks[0] & masks[b]).count_ones(), 8);
            }
        }
        // Exhaustive scan: any two dodecads in the family meet evenly.
        let base = masks[0];
        for &m in &masks {
            assert_eq!((base & m).count_ones() % 2, 0);
        }
    }

    #[test]
    fn dump_format() {
        let c = code();
        let lines = c.dump_lines();
        assert_eq!(lines.len(), 4096);
        assert_eq!(lines[0].len(), 24);
        // First line is the least octad; bit 0 is leftmost.
        let first = c.octads()[0];
        assert_eq!(lines[0], Block24(first).bitstring());
        assert_eq!(lines[759], Block24(0).bitstring());
    }
}
