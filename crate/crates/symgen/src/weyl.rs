//! Root systems of the simply laced types A, D, E and their Weyl groups
//! as permutations of the roots.
//!
//! This is the independent ground truth for the reflection-group entries:
//! the root set is the closure of the simple roots under the simple
//! reflections, the group is generated by those reflections acting on the
//! root list, and its order comes from a stabilizer chain. Nothing here
//! touches coset enumeration.

use thiserror::Error;

use crate::group::PermutationGroup;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    D,
    E,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::D => write!(f, "D"),
            Family::E => write!(f, "E"),
        }
    }
}

#[derive(Debug, Error)]
pub enum WeylError {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: Family, rank: usize },
}

/// A Weyl group on its root set, with the simple reflections first among
/// the generators.
pub struct WeylGroup {
    pub family: Family,
    pub rank: usize,
    /// Roots as integer coordinate vectors (types E scaled by 2), sorted.
    pub roots: Vec<Vec<i32>>,
    /// The group generated by the simple reflections, acting on `roots`.
    pub group: PermutationGroup,
}

/// Simple roots in integer coordinates. Types E use the even coordinate
/// system scaled by 2, so all roots have squared length 8.
fn simple_roots(family: Family, rank: usize) -> Result<Vec<Vec<i32>>, WeylError> {
    match family {
        Family::A => {
            if rank < 1 {
                return Err(WeylError::InvalidRank { family, rank });
            }
            let dim = rank + 1;
            Ok((0..rank)
                .map(|i| {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    v[i + 1] = -1;
                    v
                })
                .collect())
        }
        Family::D => {
            if rank < 4 {
                return Err(WeylError::InvalidRank { family, rank });
            }
            let mut roots: Vec<Vec<i32>> = (0..rank - 1)
                .map(|i| {
                    let mut v = vec![0; rank];
                    v[i] = 1;
                    v[i + 1] = -1;
                    v
                })
                .collect();
            let mut last = vec![0; rank];
            last[rank - 2] = 1;
            last[rank - 1] = 1;
            roots.push(last);
            Ok(roots)
        }
        Family::E => {
            if !(6..=8).contains(&rank) {
                return Err(WeylError::InvalidRank { family, rank });
            }
            // Bourbaki numbering, scaled by 2.
            let mut roots = vec![
                vec![1, -1, -1, -1, -1, -1, -1, 1], // alpha_1 = (e1+e8-sum)/2
                vec![2, 2, 0, 0, 0, 0, 0, 0],       // alpha_2 = e1+e2
                vec![-2, 2, 0, 0, 0, 0, 0, 0],      // alpha_3 = e2-e1
                vec![0, -2, 2, 0, 0, 0, 0, 0],      // alpha_4 = e3-e2
                vec![0, 0, -2, 2, 0, 0, 0, 0],
                vec![0, 0, 0, -2, 2, 0, 0, 0],
                vec![0, 0, 0, 0, -2, 2, 0, 0],
                vec![0, 0, 0, 0, 0, -2, 2, 0],
            ];
            roots.truncate(rank);
            Ok(roots)
        }
    }
}

fn dot(a: &[i32], b: &[i32]) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reflects `beta` in the hyperplane of `alpha`.
fn reflect(alpha: &[i32], beta: &[i32]) -> Vec<i32> {
    let norm = dot(alpha, alpha);
    let coeff = 2 * dot(beta, alpha) / norm;
    beta.iter()
        .zip(alpha)
        .map(|(b, a)| b - coeff * a)
        .collect()
}

/// Builds the Weyl group of the given simply laced type: root closure
/// under the simple reflections, then the reflection permutations.
pub fn weyl_oracle(family: Family, rank: usize) -> Result<WeylGroup, WeylError> {
    let simple = simple_roots(family, rank)?;
    let mut roots: Vec<Vec<i32>> = simple.clone();
    roots.sort();
    roots.dedup();
    loop {
        let mut new_roots = Vec::new();
        for alpha in &simple {
            for beta in &roots {
                let r = reflect(alpha, beta);
                if roots.binary_search(&r).is_err() && !new_roots.contains(&r) {
                    new_roots.push(r);
                }
            }
        }
        if new_roots.is_empty() {
            break;
        }
        roots.extend(new_roots);
        roots.sort();
        roots.dedup();
    }
    let gens: Vec<Permutation> = simple
        .iter()
        .map(|alpha| {
            let images = roots
                .iter()
                .map(|beta| {
                    let r = reflect(alpha, beta);
                    roots.binary_search(&r).expect("closed root set") as u32
                })
                .collect();
            Permutation::from_images(images).expect("reflection permutes roots")
        })
        .collect();
    let group = PermutationGroup::new(roots.len(), gens).expect("uniform degree");
    Ok(WeylGroup {
        family,
        rank,
        roots,
        group,
    })
}

/// Closed-form orders: (n+1)! for A_n, 2^(n-1) n! for D_n, and the three
/// exceptional values for E_6/7/8.
pub fn closed_form_order(family: Family, rank: usize) -> Option<u128> {
    fn factorial(n: usize) -> u128 {
        (1..=n as u128).product()
    }
    match family {
        Family::A => Some(factorial(rank + 1)),
        Family::D if rank >= 4 => Some(factorial(rank) << (rank - 1)),
        Family::E => match rank {
            6 => Some(51_840),
            7 => Some(2_903_040),
            8 => Some(696_729_600),
            _ => None,
        },
        _ => None,
    }
}

/// Coxeter matrix of the Theorem diagram over the generator list
/// `[t, s_1, .., s_{n-1}]`: the s_i form a path, and t attaches to s_1
/// (type A), s_2 (type D) or s_3 (type E).
pub fn diagram_with_t(family: Family, n: usize) -> Vec<Vec<u32>> {
    let size = n; // t plus n-1 control generators
    let mut m = vec![vec![2u32; size]; size];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for i in 1..size - 1 {
        // s_i is index i; consecutive s's braid.
        m[i][i + 1] = 3;
        m[i + 1][i] = 3;
    }
    let partner = match family {
        Family::A => 1,
        Family::D => 2,
        Family::E => 3,
    };
    m[0][partner] = 3;
    m[partner][0] = 3;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a4_on_20_roots() {
        let w = weyl_oracle(Family::A, 4).unwrap();
        assert_eq!(w.roots.len(), 20);
        assert_eq!(w.group.order(), 120);
        assert_eq!(closed_form_order(Family::A, 4), Some(120));
    }

    #[test]
    fn d4_on_24_roots() {
        let w = weyl_oracle(Family::D, 4).unwrap();
        assert_eq!(w.roots.len(), 24);
        assert_eq!(w.group.order(), 192);
        assert_eq!(closed_form_order(Family::D, 4), Some(192));
    }

    #[test]
    fn d5_d6_orders() {
        assert_eq!(weyl_oracle(Family::D, 5).unwrap().group.order(), 1920);
        assert_eq!(weyl_oracle(Family::D, 6).unwrap().group.order(), 23040);
    }

    #[test]
    fn e6_on_72_roots() {
        let w = weyl_oracle(Family::E, 6).unwrap();
        assert_eq!(w.roots.len(), 72);
        assert_eq!(w.group.order(), 51840);
    }

    #[test]
    fn e7_on_126_roots() {
        let w = weyl_oracle(Family::E, 7).unwrap();
        assert_eq!(w.roots.len(), 126);
        assert_eq!(w.group.order(), 2_903_040);
    }

    #[test]
    fn e8_on_240_roots() {
        let w = weyl_oracle(Family::E, 8).unwrap();
        assert_eq!(w.roots.len(), 240);
        assert_eq!(w.group.order(), 696_729_600);
    }

    #[test]
    fn invalid_ranks_rejected() {
        assert!(weyl_oracle(Family::D, 3).is_err());
        assert!(weyl_oracle(Family::E, 5).is_err());
        assert!(weyl_oracle(Family::E, 9).is_err());
        assert!(weyl_oracle(Family::A, 0).is_err());
    }

    #[test]
    fn simple_reflections_satisfy_their_diagram() {
        let w = weyl_oracle(Family::E, 6).unwrap();
        let gens = w.group.generators();
        // Bourbaki E6: alpha_2 attaches to alpha_4; path 1-3-4-5-6.
        let adjacent = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
        for i in 0..6 {
            for j in (i + 1)..6 {
                let product_order = gens[i].compose(&gens[j]).order();
                let expected = if adjacent.contains(&(i, j)) { 3 } else { 2 };
                assert_eq!(product_order, expected, "pair ({i},{j})");
            }
        }
    }
}
