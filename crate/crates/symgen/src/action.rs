//! Induced actions: from a group on points to a group on combinatorial
//! objects (k-subsets, partitions, cosets, code words), with a stored
//! labelling so relations can name the objects.
//!
//! Every induced action keeps its source generators aligned index-wise
//! with the induced ones, which allows pulling stabilizers back to the
//! source action through a combined (direct-sum) chain and re-inducing
//! arbitrary source elements.

use std::collections::HashMap;

use thiserror::Error;

use crate::group::{GroupError, PermutationGroup};
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("recipe does not fit the source action: {0}")]
    RecipeMismatch(String),
    #[error("permutation does not preserve the object family")]
    NotPreserved,
    #[error("element enumeration exceeded the cap of {0}")]
    CapExceeded(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How to build an action from a permutation group.
#[derive(Debug, Clone)]
pub enum ActionRecipe {
    Natural,
    OnKSubsets(usize),
    OnPartitions(Vec<usize>),
    OnCosets {
        subgroup: Vec<Permutation>,
        cap: usize,
    },
    Relabeled(Vec<Permutation>),
}

/// The labelling of induced points by combinatorial objects.
#[derive(Debug, Clone)]
pub enum Labels {
    Points(usize),
    /// Sorted k-subsets of source points, in lexicographic order.
    Subsets { n: usize, items: Vec<Vec<u32>> },
    /// Partitions into blocks; blocks sorted internally and by least
    /// element, partitions in lexicographic order.
    Partitions { n: usize, items: Vec<Vec<Vec<u32>>> },
    /// Subsets of source points as bitmasks (bit `i` = point `i`),
    /// sorted numerically.
    Masks { items: Vec<u32> },
    /// Triples of point-set masks (for example trios of octads), each
    /// sorted ascending, triples sorted.
    MaskTriples { items: Vec<[u32; 3]> },
    /// Matchsticks: a plane (three nonzero GF(2)^4 vectors, sorted) plus
    /// an incident point.
    Sticks { items: Vec<([u8; 3], u8)> },
    /// Cosets of a subgroup: per coset its canonical (minimal) element.
    CosetReps {
        reps: Vec<Permutation>,
        element_coset: Vec<(Permutation, u32)>,
    },
    /// Cyclic subgroups of prime order of the source group, under
    /// conjugation; each is stored as its minimal generator.
    CyclicSubgroups { items: Vec<Permutation>, order: u32 },
    /// A disjoint union of actions of the same source (for the
    /// intransitive natural-plus-subsets case); parts carry offsets.
    Union { parts: Vec<(usize, Labels)> },
}

impl Labels {
    pub fn count(&self) -> usize {
        match self {
            Labels::Points(n) => *n,
            Labels::Subsets { items, .. } => items.len(),
            Labels::Partitions { items, .. } => items.len(),
            Labels::Masks { items } => items.len(),
            Labels::MaskTriples { items } => items.len(),
            Labels::Sticks { items } => items.len(),
            Labels::CosetReps { reps, .. } => reps.len(),
            Labels::CyclicSubgroups { items, .. } => items.len(),
            Labels::Union { parts } => parts.iter().map(|(_, l)| l.count()).sum(),
        }
    }

    /// 1-based display text for an induced point.
    pub fn text(&self, index: usize) -> String {
        match self {
            Labels::Points(_) => format!("{}", index + 1),
            Labels::Subsets { items, .. } => fmt_set(&items[index]),
            Labels::Partitions { items, .. } => {
                let blocks: Vec<String> = items[index]
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|p| (p + 1).to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("{{{}}}", blocks.join("|"))
            }
            Labels::Masks { items } => fmt_set(&mask_to_points(items[index])),
            Labels::MaskTriples { items } => {
                let blocks: Vec<String> = items[index]
                    .iter()
                    .map(|&m| {
                        mask_to_points(m)
                            .iter()
                            .map(|p| (p + 1).to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("{{{}}}", blocks.join("|"))
            }
            Labels::Sticks { items } => {
                let (plane, point) = items[index];
                format!("({} in {} {} {})", point, plane[0], plane[1], plane[2])
            }
            Labels::CosetReps { reps, .. } => format!("#{} [{}]", index + 1, reps[index]),
            Labels::CyclicSubgroups { items, .. } => format!("<{}>", items[index]),
            Labels::Union { parts } => {
                for (offset, labels) in parts {
                    if index >= *offset && index < offset + labels.count() {
                        return labels.text(index - offset);
                    }
                }
                format!("{}", index + 1)
            }
        }
    }

    /// Resolves a sorted 0-based point set to an induced point.
    pub fn resolve_set(&self, set: &[u32]) -> Option<usize> {
        match self {
            Labels::Subsets { items, .. } => {
                items.binary_search_by(|item| item.as_slice().cmp(set)).ok()
            }
            Labels::Masks { items } => {
                let mask = set.iter().fold(0u32, |m, &p| m | 1 << p);
                items.binary_search(&mask).ok()
            }
            Labels::Union { parts } => parts
                .iter()
                .find_map(|(offset, l)| l.resolve_set(set).map(|i| i + offset)),
            _ => None,
        }
    }

    /// Resolves a partition (blocks of 0-based points) to an induced point.
    pub fn resolve_partition(&self, blocks: &[Vec<u32>]) -> Option<usize> {
        match self {
            Labels::Partitions { items, .. } => {
                let canon = canonical_partition(blocks);
                items.binary_search_by(|item| item.cmp(&canon)).ok()
            }
            Labels::Union { parts } => parts
                .iter()
                .find_map(|(offset, l)| l.resolve_partition(blocks).map(|i| i + offset)),
            _ => None,
        }
    }
}

fn fmt_set(points: &[u32]) -> String {
    let inner: Vec<String> = points.iter().map(|p| (p + 1).to_string()).collect();
    format!("{{{}}}", inner.join(" "))
}

fn mask_to_points(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask >> b & 1 == 1).collect()
}

fn canonical_partition(blocks: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    out.sort();
    out
}

/// A group acting on labelled combinatorial objects, together with its
/// source action.
#[derive(Debug, Clone)]
pub struct InducedAction {
    pub group: PermutationGroup,
    pub labels: Labels,
    source_degree: usize,
    source_generators: Vec<Permutation>,
}

impl InducedAction {
    pub(crate) fn assemble(
        group: PermutationGroup,
        labels: Labels,
        source_degree: usize,
        source_generators: Vec<Permutation>,
    ) -> Self {
        InducedAction {
            group,
            labels,
            source_degree,
            source_generators,
        }
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn source_degree(&self) -> usize {
        self.source_degree
    }

    pub fn source_generators(&self) -> &[Permutation] {
        &self.source_generators
    }

    /// Maps one source permutation through the action.
    pub fn induce(&self, p: &Permutation) -> Result<Permutation, ActionError> {
        if p.degree() != self.source_degree {
            return Err(ActionError::RecipeMismatch(format!(
                "degree {} vs source degree {}",
                p.degree(),
                self.source_degree
            )));
        }
        let mut images = Vec::with_capacity(self.labels.count());
        induce_images(&self.labels, p, 0, &mut images)?;
        Permutation::from_images(images).map_err(|_| ActionError::NotPreserved)
    }

    /// The subgroup of the source group stabilizing the listed induced
    /// points (pointwise), as source-degree permutations. Computed from a
    /// chain on the combined source + induced action.
    pub fn stabilizer_in_source(&self, points: &[usize]) -> Result<PermutationGroup, ActionError> {
        let ds = self.source_degree;
        let combined: Vec<Permutation> = self
            .source_generators
            .iter()
            .zip(self.group.generators())
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        let cg = PermutationGroup::new(ds + self.degree(), combined)?;
        let offset: Vec<usize> = points.iter().map(|&p| ds + p).collect();
        let stab = cg.point_stabilizer(&offset)?;
        let gens: Vec<Permutation> = stab
            .generators()
            .iter()
            .map(|g| {
                Permutation::from_images(g.images()[..ds].to_vec())
                    .expect("block permutation restricts")
            })
            .collect();
        Ok(PermutationGroup::new(ds, gens)?)
    }

    /// Order-equality faithfulness certificate: the induced image reaches
    /// the given source order.
    pub fn is_faithful(&self, source_order: u128) -> bool {
        self.group.chain_with_expected_order(source_order).is_ok()
    }
}

fn apply_mask(p: &Permutation, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros();
        out |= 1 << p.apply(b as usize);
        m &= m - 1;
    }
    out
}

/// Appends, for each labelled object, the absolute index of its image
/// under `p`; `offset` is where this label block starts.
fn induce_images(
    labels: &Labels,
    p: &Permutation,
    offset: u32,
    out: &mut Vec<u32>,
) -> Result<(), ActionError> {
    match labels {
        Labels::Points(n) => {
            for i in 0..*n {
                out.push(offset + p.apply(i) as u32);
            }
        }
        Labels::Subsets { items, .. } => {
            for item in items {
                let mut img: Vec<u32> = item.iter().map(|&x| p.apply(x as usize) as u32).collect();
                img.sort_unstable();
                let idx = items
                    .binary_search_by(|probe| probe.as_slice().cmp(&img))
                    .map_err(|_| ActionError::NotPreserved)?;
                out.push(offset + idx as u32);
            }
        }
        Labels::Partitions { items, .. } => {
            for item in items {
                let img: Vec<Vec<u32>> = item
                    .iter()
                    .map(|b| b.iter().map(|&x| p.apply(x as usize) as u32).collect())
                    .collect();
                let canon = canonical_partition(&img);
                let idx = items
                    .binary_search_by(|probe| probe.cmp(&canon))
                    .map_err(|_| ActionError::NotPreserved)?;
                out.push(offset + idx as u32);
            }
        }
        Labels::Masks { items } => {
            for &mask in items {
                let img = apply_mask(p, mask);
                let idx = items
                    .binary_search(&img)
                    .map_err(|_| ActionError::NotPreserved)?;
                out.push(offset + idx as u32);
            }
        }
        Labels::MaskTriples { items } => {
            for item in items {
                let mut img = [
                    apply_mask(p, item[0]),
                    apply_mask(p, item[1]),
                    apply_mask(p, item[2]),
                ];
                img.sort_unstable();
                let idx = items
                    .binary_search(&img)
                    .map_err(|_| ActionError::NotPreserved)?;
                out.push(offset + idx as u32);
            }
        }
        Labels::Sticks { items } => {
            for (plane, point) in items {
                let mut pl = [
                    p.apply(plane[0] as usize - 1) as u8 + 1,
                    p.apply(plane[1] as usize - 1) as u8 + 1,
                    p.apply(plane[2] as usize - 1) as u8 + 1,
                ];
                pl.sort_unstable();
                let pt = p.apply(*point as usize - 1) as u8 + 1;
                let idx = items
                    .binary_search(&(pl, pt))
                    .map_err(|_| ActionError::NotPreserved)?;
                out.push(offset + idx as u32);
            }
        }
        Labels::CosetReps { reps, element_coset } => {
            for rep in reps {
                let moved = rep.compose(p);
                let idx = element_coset
                    .binary_search_by(|(e, _)| e.cmp(&moved))
                    .map_err(|_| ActionError::NotPreserved)?;
                out.push(offset + element_coset[idx].1);
            }
        }
        Labels::CyclicSubgroups { items, order } => {
            for item in items {
                let conj = item.conjugate_by(p);
                let canonical = minimal_power(&conj, *order);
                let idx = items
                    .binary_search(&canonical)
                    .map_err(|_| ActionError::NotPreserved)?;
                out.push(offset + idx as u32);
            }
        }
        Labels::Union { parts } => {
            for (part_offset, part) in parts {
                induce_images(part, p, offset + *part_offset as u32, out)?;
            }
        }
    }
    Ok(())
}

/// The least non-identity power of a generator of a cyclic group of prime
/// order: the canonical representative of the subgroup it generates.
pub(crate) fn minimal_power(g: &Permutation, order: u32) -> Permutation {
    let mut best = g.clone();
    let mut current = g.clone();
    for _ in 1..order.saturating_sub(1) {
        current = current.compose(g);
        if current < best {
            best = current.clone();
        }
    }
    best
}

/// Builds the action described by a recipe.
pub fn induced_action(
    source: &PermutationGroup,
    recipe: &ActionRecipe,
) -> Result<InducedAction, ActionError> {
    match recipe {
        ActionRecipe::Natural => Ok(InducedAction {
            group: source.clone(),
            labels: Labels::Points(source.degree()),
            source_degree: source.degree(),
            source_generators: source.generators().to_vec(),
        }),
        ActionRecipe::OnKSubsets(k) => on_k_subsets(source, *k),
        ActionRecipe::OnPartitions(shape) => on_partitions(source, shape),
        ActionRecipe::OnCosets { subgroup, cap } => on_cosets(source, subgroup, *cap),
        ActionRecipe::Relabeled(gens) => {
            if gens.len() != source.generators().len() {
                return Err(ActionError::RecipeMismatch(
                    "relabeled generators must align with source generators".into(),
                ));
            }
            let degree = gens.first().map(|g| g.degree()).unwrap_or(0);
            Ok(InducedAction {
                group: PermutationGroup::new(degree, gens.clone())?,
                labels: Labels::Points(degree),
                source_degree: source.degree(),
                source_generators: source.generators().to_vec(),
            })
        }
    }
}

pub fn on_k_subsets(source: &PermutationGroup, k: usize) -> Result<InducedAction, ActionError> {
    let n = source.degree();
    if k == 0 || k > n {
        return Err(ActionError::RecipeMismatch(format!(
            "subset size {k} out of range for degree {n}"
        )));
    }
    let items = combinations(n, k);
    debug_assert_eq!(items.len(), binomial(n, k));
    from_labels(source, Labels::Subsets { n, items })
}

pub fn on_partitions(
    source: &PermutationGroup,
    shape: &[usize],
) -> Result<InducedAction, ActionError> {
    let n = source.degree();
    if shape.iter().sum::<usize>() != n || shape.iter().any(|&s| s == 0) {
        return Err(ActionError::RecipeMismatch(format!(
            "shape {shape:?} does not partition {n} points"
        )));
    }
    let mut items = Vec::new();
    let mut shape = shape.to_vec();
    shape.sort_unstable();
    enumerate_partitions(
        &(0..n as u32).collect::<Vec<_>>(),
        &shape,
        &mut Vec::new(),
        &mut items,
    );
    for item in &mut items {
        *item = canonical_partition(item);
    }
    items.sort();
    items.dedup();
    from_labels(source, Labels::Partitions { n, items })
}

pub fn on_masks(
    source: &PermutationGroup,
    mut masks: Vec<u32>,
) -> Result<InducedAction, ActionError> {
    masks.sort_unstable();
    masks.dedup();
    from_labels(source, Labels::Masks { items: masks })
}

pub fn on_mask_triples(
    source: &PermutationGroup,
    mut triples: Vec<[u32; 3]>,
) -> Result<InducedAction, ActionError> {
    for t in &mut triples {
        t.sort_unstable();
    }
    triples.sort_unstable();
    triples.dedup();
    from_labels(source, Labels::MaskTriples { items: triples })
}

pub fn on_sticks(
    source: &PermutationGroup,
    mut items: Vec<([u8; 3], u8)>,
) -> Result<InducedAction, ActionError> {
    items.sort_unstable();
    items.dedup();
    from_labels(source, Labels::Sticks { items })
}

fn on_cosets(
    source: &PermutationGroup,
    subgroup: &[Permutation],
    cap: usize,
) -> Result<InducedAction, ActionError> {
    let h = PermutationGroup::new(source.degree(), subgroup.to_vec())?;
    for g in h.generators() {
        if !source.is_member(g) {
            return Err(ActionError::Group(GroupError::NotSubgroup));
        }
    }
    let elements = source.elements(cap).ok_or(ActionError::CapExceeded(cap))?;
    let h_elements = h.elements(cap).ok_or(ActionError::CapExceeded(cap))?;
    let mut sorted = elements;
    sorted.sort_unstable();
    let mut coset_of: HashMap<Permutation, u32> = HashMap::with_capacity(sorted.len());
    let mut reps: Vec<Permutation> = Vec::new();
    for e in &sorted {
        if coset_of.contains_key(e) {
            continue;
        }
        let id = reps.len() as u32;
        let mut members: Vec<Permutation> = h_elements.iter().map(|h| h.compose(e)).collect();
        members.sort_unstable();
        reps.push(members[0].clone());
        for m in members {
            coset_of.insert(m, id);
        }
    }
    // Coset 0 must be the subgroup itself.
    let h_id = coset_of[&Permutation::identity(source.degree())];
    let swap = move |c: u32| {
        if c == h_id {
            0
        } else if c == 0 {
            h_id
        } else {
            c
        }
    };
    let mut element_coset: Vec<(Permutation, u32)> =
        coset_of.into_iter().map(|(e, c)| (e, swap(c))).collect();
    element_coset.sort_unstable_by(|(a, _), (b, _)| a.cmp(b));
    reps.swap(0, h_id as usize);
    from_labels(
        source,
        Labels::CosetReps {
            reps,
            element_coset,
        },
    )
}

fn from_labels(source: &PermutationGroup, labels: Labels) -> Result<InducedAction, ActionError> {
    let mut action = InducedAction {
        group: PermutationGroup::trivial(labels.count()),
        labels,
        source_degree: source.degree(),
        source_generators: source.generators().to_vec(),
    };
    let gens = source
        .generators()
        .iter()
        .map(|g| action.induce(g))
        .collect::<Result<Vec<_>, _>>()?;
    action.group = PermutationGroup::new(action.labels.count(), gens)?;
    Ok(action)
}

fn enumerate_partitions(
    remaining: &[u32],
    shape: &[usize],
    acc: &mut Vec<Vec<u32>>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    if remaining.is_empty() {
        out.push(acc.clone());
        return;
    }
    let first = remaining[0];
    let rest = &remaining[1..];
    let mut sizes: Vec<usize> = shape.to_vec();
    sizes.dedup();
    for size in sizes {
        for combo in combinations(rest.len(), size - 1) {
            let mut block = vec![first];
            block.extend(combo.iter().map(|&i| rest[i as usize]));
            let remaining_next: Vec<u32> = rest
                .iter()
                .copied()
                .filter(|x| !block.contains(x))
                .collect();
            let mut shape_next = shape.to_vec();
            let pos = shape_next
                .iter()
                .position(|&s| s == size)
                .expect("size from shape");
            shape_next.remove(pos);
            acc.push(block);
            enumerate_partitions(&remaining_next, &shape_next, acc, out);
            acc.pop();
        }
    }
}

/// All k-subsets of `{0..n-1}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if k > n || k == 0 {
        return out;
    }
    let mut current: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(current.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < (n - k + i) as u32 {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(24, 4).len(), 10626);
        assert_eq!(binomial(10, 4), 210);
        assert_eq!(combinations(4, 4), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn s10_on_4_subsets_degree_210() {
        let s10 = PermutationGroup::symmetric(10);
        let action = on_k_subsets(&s10, 4).unwrap();
        assert_eq!(action.degree(), 210);
        assert!(action.group.is_transitive());
        assert!(action.is_faithful(s10.order()));
        assert_eq!(action.labels.text(0), "{1 2 3 4}");
        assert_eq!(action.labels.resolve_set(&[0, 1, 2, 3]), Some(0));
    }

    #[test]
    fn s12_on_partitions_degree_5775() {
        let s12 = PermutationGroup::symmetric(12);
        let action = on_partitions(&s12, &[4, 4, 4]).unwrap();
        assert_eq!(action.degree(), 5775);
        assert!(action.group.is_transitive());
        assert!(action.is_faithful(s12.order()));
        assert_eq!(
            action.labels.resolve_partition(&[
                vec![8, 9, 10, 11],
                vec![0, 1, 2, 3],
                vec![4, 5, 6, 7],
            ]),
            Some(0)
        );
    }

    #[test]
    fn induce_single_permutation() {
        let s5 = PermutationGroup::symmetric(5);
        let action = on_k_subsets(&s5, 2).unwrap();
        let g = Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap();
        let induced = action.induce(&g).unwrap();
        assert_eq!(induced.degree(), 10);
        // {1,2} -> {2,3}
        let from = action.labels.resolve_set(&[0, 1]).unwrap();
        let to = action.labels.resolve_set(&[1, 2]).unwrap();
        assert_eq!(induced.apply(from), to);
    }

    #[test]
    fn stabilizer_pullback_matches_direct() {
        let s6 = PermutationGroup::symmetric(6);
        let action = on_k_subsets(&s6, 2).unwrap();
        let base = action.labels.resolve_set(&[0, 1]).unwrap();
        let stab = action.stabilizer_in_source(&[base]).unwrap();
        // Setwise stabilizer of {0,1} in S_6 has order 2 * 24 = 48.
        assert_eq!(stab.order(), 48);
        for g in stab.generators() {
            let set = [g.apply(0), g.apply(1)];
            assert!(set == [0, 1] || set == [1, 0]);
        }
    }

    #[test]
    fn coset_action_of_s4_over_s3() {
        let s4 = PermutationGroup::symmetric(4);
        let h = s4.point_stabilizer(&[3]).unwrap();
        let action = induced_action(
            &s4,
            &ActionRecipe::OnCosets {
                subgroup: h.generators().to_vec(),
                cap: 100,
            },
        )
        .unwrap();
        assert_eq!(action.degree(), 4);
        assert!(action.group.is_transitive());
        assert_eq!(action.group.order(), 24);
        let stab = action.group.point_stabilizer(&[0]).unwrap();
        assert_eq!(stab.order(), 6);
    }

    #[test]
    fn masks_action_round_trip() {
        let s4 = PermutationGroup::symmetric(4);
        let masks = vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100];
        let action = on_masks(&s4, masks).unwrap();
        assert_eq!(action.degree(), 6);
        assert!(action.group.is_transitive());
    }

    #[test]
    fn bad_recipes_rejected() {
        let s4 = PermutationGroup::symmetric(4);
        assert!(on_k_subsets(&s4, 0).is_err());
        assert!(on_k_subsets(&s4, 5).is_err());
        assert!(on_partitions(&s4, &[3, 3]).is_err());
        let h = PermutationGroup::new(4, vec![Permutation::parse_cycles("(1 2)", 4).unwrap()])
            .unwrap();
        assert!(induced_action(
            &PermutationGroup::symmetric(3),
            &ActionRecipe::OnCosets {
                subgroup: h.generators().to_vec(),
                cap: 100
            }
        )
        .is_err());
    }
}
