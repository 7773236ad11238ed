//! The GF(2)^4 matchstick geometry: 35 planes (2-dimensional subspaces),
//! 105 incident (plane, point) pairs, and the induced action of
//! L_4(2) = GL_4(2) on them.

use thiserror::Error;

use crate::action::{self, ActionError, InducedAction};
use crate::group::PermutationGroup;
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum MatchstickError {
    #[error("matchstick geometry integrity failure: {0}")]
    Integrity(String),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// Applies a GF(2) matrix (four row masks) to a vector.
fn apply_matrix(rows: [u8; 4], v: u8) -> u8 {
    let mut out = 0u8;
    for (i, row) in rows.iter().enumerate() {
        out |= (((row & v).count_ones() & 1) as u8) << i;
    }
    out
}

fn matrix_as_permutation(rows: [u8; 4]) -> Permutation {
    let images = (1..=15u8)
        .map(|v| apply_matrix(rows, v) as u32 - 1)
        .collect();
    Permutation::from_images(images).expect("invertible matrix permutes nonzero vectors")
}

pub struct MatchstickGeometry {
    /// GL_4(2) acting on the 15 nonzero vectors (point `i` = vector `i+1`).
    pub vectors: PermutationGroup,
    /// The 35 planes, each as three sorted nonzero vectors.
    pub planes: Vec<[u8; 3]>,
    /// The induced degree-105 action on incident (plane, point) pairs.
    pub action: InducedAction,
}

/// Builds the geometry and certifies it: 35 planes, 105 matchsticks, a
/// transitive action with faithful image of order 20160.
pub fn matchsticks() -> Result<MatchstickGeometry, MatchstickError> {
    // GL_4(2) = SL_4(2) is generated by a transvection and coordinate
    // permutations.
    let transvection = matrix_as_permutation([0b0011, 0b0010, 0b0100, 0b1000]);
    let cycle = matrix_as_permutation([0b0010, 0b0100, 0b1000, 0b0001]);
    let swap = matrix_as_permutation([0b0010, 0b0001, 0b0100, 0b1000]);
    let vectors = PermutationGroup::new(15, vec![transvection, cycle, swap])
        .map_err(|e| MatchstickError::Integrity(e.to_string()))?;
    vectors
        .chain_with_expected_order(20160)
        .map_err(|e| MatchstickError::Integrity(format!("GL_4(2) order: {e}")))?;

    let mut planes: Vec<[u8; 3]> = Vec::new();
    for a in 1..=15u8 {
        for b in (a + 1)..=15 {
            let c = a ^ b;
            let mut plane = [a, b, c];
            plane.sort_unstable();
            if !planes.contains(&plane) {
                planes.push(plane);
            }
        }
    }
    planes.sort_unstable();
    if planes.len() != 35 {
        return Err(MatchstickError::Integrity(format!(
            "{} planes instead of 35",
            planes.len()
        )));
    }

    let sticks: Vec<([u8; 3], u8)> = planes
        .iter()
        .flat_map(|&plane| plane.into_iter().map(move |point| (plane, point)))
        .collect();
    let action = action::on_sticks(&vectors, sticks)?;
    if action.degree() != 105 {
        return Err(MatchstickError::Integrity(format!(
            "{} matchsticks instead of 105",
            action.degree()
        )));
    }
    if !action.group.is_transitive() {
        return Err(MatchstickError::Integrity(
            "matchstick action is not transitive".into(),
        ));
    }
    Ok(MatchstickGeometry {
        vectors,
        planes,
        action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_counts() {
        let geo = matchsticks().expect("geometry");
        assert_eq!(geo.planes.len(), 35);
        assert_eq!(geo.action.degree(), 105);
    }

    #[test]
    fn induced_image_is_faithful_of_order_20160() {
        let geo = matchsticks().expect("geometry");
        assert!(geo.action.is_faithful(20160));
        assert!(geo.action.group.is_transitive());
    }

    #[test]
    fn planes_are_subspaces() {
        let geo = matchsticks().expect("geometry");
        for plane in &geo.planes {
            assert_eq!(plane[0] ^ plane[1], plane[2]);
        }
    }
}
