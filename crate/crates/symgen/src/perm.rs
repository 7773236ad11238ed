//! Permutations of a finite point set.
//!
//! Points are 0-based integers everywhere in the library. Products act left
//! to right: `(a * b)(x) = b(a(x))`, so conjugation `t^p = p^-1 t p` sends
//! the point `i` to `p(i)`. The text form is 1-based cycle notation,
//! `"(1 2 3)(4 5)"`, and the identity prints as `"()"`.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images are not a bijection on 0..{degree}")]
    NotBijective { degree: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("cycle notation error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
}

/// A permutation of `{0, .., degree-1}` stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image vector, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &img in &images {
            let i = img as usize;
            if i >= degree || seen[i] {
                return Err(PermError::NotBijective { degree });
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if touched[p] {
                    return Err(PermError::NotBijective { degree });
                }
                touched[p] = true;
                let q = cycle[(k + 1) % cycle.len()];
                if q >= degree {
                    return Err(PermError::PointOutOfRange { point: q, degree });
                }
                images[p] = q as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `self * other`, acting left to right: the result maps `x` to
    /// `other(self(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        let images = self
            .images
            .iter()
            .map(|&m| other.images[m as usize])
            .collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[other.images[i] as usize] = other.images[p as usize];
        }
        Permutation { images }
    }

    /// Multiplicative order, via cycle lengths.
    pub fn order(&self) -> u128 {
        let mut seen = vec![false; self.images.len()];
        let mut ord: u128 = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len: u128 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as u32 != p)
            .map(|(i, _)| i)
            .collect()
    }

    /// Disjoint cycles of length >= 2, each rotated to start at its least
    /// point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Acts on the other permutation's domain disjointly: the result has
    /// degree `self.degree() + other.degree()`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let d = self.degree() as u32;
        let images = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&p| p + d))
            .collect();
        Permutation { images }
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5)"`; `"()"` is the
    /// identity. Commas between points are accepted.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let bytes = text.as_bytes();
        let mut at = 0;
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let skip_ws = |at: &mut usize| {
            while *at < bytes.len() && (bytes[*at] as char).is_whitespace() {
                *at += 1;
            }
        };
        skip_ws(&mut at);
        while at < bytes.len() {
            if bytes[at] != b'(' {
                return Err(PermError::Parse {
                    at,
                    msg: "expected '('".into(),
                });
            }
            at += 1;
            let mut cycle = Vec::new();
            loop {
                skip_ws(&mut at);
                if at < bytes.len() && bytes[at] == b',' {
                    at += 1;
                    skip_ws(&mut at);
                }
                if at >= bytes.len() {
                    return Err(PermError::Parse {
                        at,
                        msg: "unterminated cycle".into(),
                    });
                }
                if bytes[at] == b')' {
                    at += 1;
                    break;
                }
                let start = at;
                while at < bytes.len() && bytes[at].is_ascii_digit() {
                    at += 1;
                }
                if at == start {
                    return Err(PermError::Parse {
                        at,
                        msg: "expected point number".into(),
                    });
                }
                let value: usize = text[start..at].parse().map_err(|_| PermError::Parse {
                    at: start,
                    msg: "bad number".into(),
                })?;
                if value == 0 {
                    return Err(PermError::Parse {
                        at: start,
                        msg: "points are 1-based".into(),
                    });
                }
                cycle.push(value - 1);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
            skip_ws(&mut at);
        }
        Self::from_cycles(degree, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}; {}]", self.degree(), self)
    }
}

pub(crate) fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn involution_squares_to_identity() {
        let a = p("(1 2)", 3);
        assert!(a.compose(&a).is_identity());
    }

    #[test]
    fn three_cycle_squared() {
        let a = p("(1 2 3)", 3);
        assert_eq!(a.compose(&a), p("(1 3 2)", 3));
    }

    #[test]
    fn left_to_right_composition() {
        // (1 2) then (2 3): 1 -> 2 -> 3, so the product is (1 3 2).
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        assert_eq!(a.compose(&b), p("(1 3 2)", 3));
    }

    #[test]
    fn conjugation_moves_points() {
        // t^(p) with p = (1 2) maps the transposition (1 3) to (2 3).
        let t = p("(1 3)", 3);
        let g = p("(1 2)", 3);
        assert_eq!(t.conjugate_by(&g), p("(2 3)", 3));
    }

    #[test]
    fn identity_round_trip() {
        let id = Permutation::identity(5);
        assert_eq!(id.to_string(), "()");
        assert_eq!(p("()", 5), id);
    }

    #[test]
    fn display_round_trip() {
        let a = p("(1 2 3)(4 5)", 6);
        assert_eq!(a.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Permutation::parse_cycles(&a.to_string(), 6).unwrap(), a);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Permutation::parse_cycles("(1 2", 4).is_err());
        assert!(Permutation::parse_cycles("(0 1)", 4).is_err());
        assert!(Permutation::parse_cycles("(1 5)", 4).is_err());
        assert!(Permutation::parse_cycles("(1 1)", 4).is_err());
        assert!(Permutation::parse_cycles("1 2)", 4).is_err());
    }

    #[test]
    fn order_of_cycles() {
        assert_eq!(p("(1 2 3)(4 5)", 6).order(), 6);
        assert_eq!(Permutation::identity(4).order(), 1);
    }

    proptest! {
        #[test]
        fn inverse_law(seed in 0u64..500) {
            use rand::SeedableRng;
            use rand::seq::SliceRandom;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut images: Vec<u32> = (0..24).collect();
            images.shuffle(&mut rng);
            let a = Permutation::from_images(images).unwrap();
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert!(a.inverse().compose(&a).is_identity());
        }

        #[test]
        fn display_parse_round_trip(seed in 0u64..200) {
            use rand::SeedableRng;
            use rand::seq::SliceRandom;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut images: Vec<u32> = (0..10).collect();
            images.shuffle(&mut rng);
            let a = Permutation::from_images(images).unwrap();
            let back = Permutation::parse_cycles(&a.to_string(), 10).unwrap();
            prop_assert_eq!(a, back);
        }
    }
}
