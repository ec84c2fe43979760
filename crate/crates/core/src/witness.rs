//! Witness complexes, relaxed witness complexes and landmark insertion.
//!
//! A witness `w` witnesses the simplex formed by its `j + 1` nearest
//! landmarks, ties broken by label. It `rho`-witnesses `sigma` when every
//! vertex of `sigma` is at most `rho` farther from `w` than every landmark
//! outside `sigma`. The complexes keep the faces that are witnessed and
//! whose facets are all kept, dimension by dimension.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::{distance, knn_matrix, range_rows, Neighbor, NeighborMatrix, PointCloud};
use crate::simplex::{Simplex, VertexLabel};
use crate::tree::{NodeHandle, SimplexTree};

/// Landmarks, witnesses and their nearest-neighbor table.
#[derive(Debug, Clone)]
pub struct WitnessSetup {
    landmarks: PointCloud,
    witnesses: PointCloud,
    k: usize,
    nn: NeighborMatrix,
}

impl WitnessSetup {
    /// Setup for the standard complex up to dimension `k`.
    pub fn new(landmarks: PointCloud, witnesses: PointCloud, k: usize) -> Result<Self> {
        let nn = knn_matrix(&witnesses, &landmarks, k)?;
        Ok(WitnessSetup {
            landmarks,
            witnesses,
            k,
            nn,
        })
    }

    /// Setup for the relaxed complex: rows extend to `m_k + rho`.
    pub fn relaxed(
        landmarks: PointCloud,
        witnesses: PointCloud,
        k: usize,
        rho: f64,
    ) -> Result<Self> {
        let nn = range_rows(&witnesses, &landmarks, k, rho)?;
        Ok(WitnessSetup {
            landmarks,
            witnesses,
            k,
            nn,
        })
    }

    pub fn landmarks(&self) -> &PointCloud {
        &self.landmarks
    }

    pub fn witnesses(&self) -> &PointCloud {
        &self.witnesses
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn neighbors(&self) -> &NeighborMatrix {
        &self.nn
    }
}

/// A witness whose `j` nearest landmarks form the stored simplex at `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActiveWitness {
    pub witness: usize,
    pub node: NodeHandle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxedParams {
    pub rho: f64,
    pub k: usize,
}

impl RelaxedParams {
    pub fn new(rho: f64, k: usize) -> Result<Self> {
        if !rho.is_finite() || rho < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rho must be a finite value >= 0, got {rho}"
            )));
        }
        Ok(RelaxedParams { rho, k })
    }
}

/// Builds the witness complex up to dimension `setup.k()`.
///
/// With `counters`, every node records how many witnesses have it as the
/// simplex of their nearest landmarks; [`insert_landmark`] needs them.
pub fn build_witness(setup: &WitnessSetup, counters: bool) -> Result<SimplexTree> {
    build_witness_limited(setup, counters, None)
}

pub fn build_witness_limited(
    setup: &WitnessSetup,
    counters: bool,
    limit: Option<usize>,
) -> Result<SimplexTree> {
    let nn = &setup.nn;
    let mut tree = SimplexTree::new();
    tree.set_node_limit(limit);
    if counters {
        tree.enable_witness_counters();
    }
    let root = tree.root();
    let mut active = Vec::with_capacity(nn.num_witnesses());
    for w in 0..nn.num_witnesses() {
        let (node, _) = tree.get_or_add_child(root, nn.row(w)[0].label);
        if counters {
            tree.increment_witness(node);
        }
        active.push(ActiveWitness { witness: w, node });
    }

    let mut suffix = Vec::new();
    for j in 1..=setup.k {
        let mut still_active = Vec::with_capacity(active.len());
        for aw in active {
            let s = nn.row(aw.witness)[j].label;
            // Climb past the labels larger than s; they follow s in the word.
            suffix.clear();
            let mut anchor = aw.node;
            while anchor != root && tree.label(anchor) > s {
                suffix.push(tree.label(anchor));
                anchor = tree.parent(anchor).expect("non-root");
            }
            suffix.push(s);
            suffix.reverse();
            let (&last, inner) = suffix.split_last().expect("contains s");
            let Some(father) = tree.find_from(anchor, inner) else {
                continue;
            };
            let node = match tree.child(father, last) {
                Some(h) => h,
                None if tree.facets_present(father, last) => tree.add_child(father, last),
                None => continue,
            };
            if counters {
                tree.increment_witness(node);
            }
            still_active.push(ActiveWitness {
                witness: aw.witness,
                node,
            });
        }
        tree.check_node_limit()?;
        active = still_active;
    }
    Ok(tree)
}

/// All `j`-simplices `rho`-witnessed by a witness whose landmarks, sorted
/// by (distance, label), start with `row`.
///
/// A simplex is generated from the position `i` of the first row entry it
/// misses: it contains `z_0 .. z_{i-1}` and `j + 1 - i` of the later
/// entries within `d(w, z_i) + rho`. Every witnessed simplex is produced
/// exactly once. `row` must include every landmark that can take part,
/// which an extended row guarantees for `j <= k`.
pub fn candidate_simplices(row: &[Neighbor], j: usize, rho: f64) -> Vec<Simplex> {
    let mut out = Vec::new();
    for i in 0..=j + 1 {
        let need = j + 1 - i;
        if need == 0 {
            if i <= row.len() {
                out.push(sorted_simplex(row[..i].iter().map(|n| n.label)));
            }
            break;
        }
        if i >= row.len() {
            break;
        }
        let bound = row[i].distance + rho;
        let end = i + 1 + row[i + 1..].partition_point(|n| n.distance <= bound);
        if end - (i + 1) < need {
            continue;
        }
        let prefix = &row[..i];
        for subset in row[i + 1..end].iter().combinations(need) {
            out.push(sorted_simplex(prefix.iter().chain(subset).map(|n| n.label)));
        }
    }
    out
}

fn sorted_simplex(labels: impl Iterator<Item = VertexLabel>) -> Simplex {
    let mut v: Vec<VertexLabel> = labels.collect();
    v.sort_unstable();
    Simplex::from_sorted_unchecked(v)
}

/// Builds the relaxed witness complex up to dimension `params.k`.
pub fn build_relaxed_witness(setup: &WitnessSetup, params: RelaxedParams) -> Result<SimplexTree> {
    build_relaxed_witness_limited(setup, params, None)
}

pub fn build_relaxed_witness_limited(
    setup: &WitnessSetup,
    params: RelaxedParams,
    limit: Option<usize>,
) -> Result<SimplexTree> {
    let params = RelaxedParams::new(params.rho, params.k)?;
    let nn = &setup.nn;
    match nn.rho() {
        Some(rho) if rho >= params.rho && params.k <= setup.k => {}
        _ => {
            return Err(Error::Precondition(format!(
                "relaxed build with rho={} k={} needs rows extended at least that far",
                params.rho, params.k
            )))
        }
    }
    let mut tree = SimplexTree::new();
    tree.set_node_limit(limit);
    // A witness with no stored (j-1)-candidate has no stored j-candidate:
    // dropping the farthest vertex of a rho-witnessed simplex leaves a
    // rho-witnessed facet.
    let mut alive: Vec<usize> = (0..nn.num_witnesses()).collect();
    for j in 0..=params.k {
        alive.retain(|&w| {
            let row = nn.extended_row(w).expect("checked above");
            let mut any = false;
            for sigma in candidate_simplices(row, j, params.rho) {
                let (&last, prefix) = sigma.labels().split_last().expect("nonempty");
                let Some(father) = tree.find_from(tree.root(), prefix) else {
                    continue;
                };
                if tree.child(father, last).is_some() {
                    any = true;
                } else if tree.facets_present(father, last) {
                    tree.add_child(father, last);
                    any = true;
                }
            }
            any
        });
        tree.check_node_limit()?;
    }
    Ok(tree)
}

/// A new landmark and the witnesses whose nearest landmarks it changes.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkUpdate {
    pub point: Vec<f64>,
    /// Always `|L| + 1`.
    pub label: VertexLabel,
    /// `(witness, rank)`: `x` becomes entry `rank` of the witness's row.
    pub affected: Vec<(usize, usize)>,
}

/// Witnesses that get `x` among their `k + 1` nearest landmarks, by a
/// full scan. `x` takes the largest label, so it loses every tie.
pub fn reverse_nn(setup: &WitnessSetup, x: &[f64]) -> Result<LandmarkUpdate> {
    if x.len() != setup.landmarks.dim() || x.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "landmark must have {} finite coordinates",
            setup.landmarks.dim()
        )));
    }
    let k = setup.k;
    let affected = (0..setup.witnesses.len())
        .filter_map(|w| {
            let d = distance(setup.witnesses.point(w), x);
            let rank = setup.nn.row(w).partition_point(|n| n.distance <= d);
            (rank <= k).then_some((w, rank))
        })
        .collect();
    Ok(LandmarkUpdate {
        point: x.to_vec(),
        label: VertexLabel::from_index(setup.landmarks.len()),
        affected,
    })
}

/// Updates a tree built by [`build_witness`] with counters into the witness
/// complex of `L ∪ {x}`, and records `x` in `setup`.
///
/// Extended rows of a relaxed setup are discarded.
pub fn insert_landmark(
    tree: &mut SimplexTree,
    setup: &mut WitnessSetup,
    upd: &LandmarkUpdate,
) -> Result<()> {
    if !tree.has_witness_counters() {
        return Err(Error::Precondition(
            "landmark insertion needs witness counters".into(),
        ));
    }
    if upd.label != VertexLabel::from_index(setup.landmarks.len()) {
        return Err(Error::Precondition(format!(
            "new landmark must take label {}",
            setup.landmarks.len() + 1
        )));
    }
    let x = upd.label;
    let k = setup.k;
    let root = tree.root();
    let old_rows: Vec<(usize, usize, Vec<VertexLabel>)> = upd
        .affected
        .iter()
        .map(|&(w, rank)| (w, rank, setup.nn.row(w).iter().map(|n| n.label).collect()))
        .collect();

    let mut zeroed = Vec::new();
    for j in 0..=k {
        // Old j-simplices lose these witnesses.
        zeroed.clear();
        for (_, rank, row) in &old_rows {
            if *rank > j {
                continue;
            }
            let sigma = sorted_simplex(row[..=j].iter().copied());
            if let Some(h) = tree.search(&sigma) {
                if tree.decrement_witness(h) == 0 {
                    zeroed.push(sigma);
                }
            }
        }
        for sigma in &zeroed {
            if tree.contains(sigma) {
                tree.remove_simplex_and_cofaces(sigma)?;
            }
        }
        // New j-simplices: the old j nearest plus x.
        for (_, rank, row) in &old_rows {
            if *rank > j {
                continue;
            }
            let father = if j == 0 {
                Some(root)
            } else {
                tree.search(&sorted_simplex(row[..j].iter().copied()))
            };
            let Some(father) = father else {
                continue;
            };
            let node = match tree.child(father, x) {
                Some(h) => h,
                None if tree.facets_present(father, x) => tree.add_child(father, x),
                None => continue,
            };
            tree.increment_witness(node);
        }
        tree.check_node_limit()?;
    }

    setup.landmarks.push(&upd.point)?;
    setup.nn.drop_extended();
    let rows = setup.nn.rows_mut();
    for &(w, rank) in &upd.affected {
        let d = distance(setup.witnesses.point(w), &upd.point);
        let row = &mut rows[w];
        row.insert(
            rank,
            Neighbor {
                label: x,
                distance: d,
            },
        );
        row.truncate(k + 1);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(dim: usize, coords: &[f64]) -> PointCloud {
        PointCloud::new(dim, coords.to_vec()).unwrap()
    }

    fn words(t: &SimplexTree) -> Vec<Vec<u32>> {
        t.enumerate().iter().map(Simplex::to_u32).collect()
    }

    fn row(entries: &[(u32, f64)]) -> Vec<Neighbor> {
        entries
            .iter()
            .map(|&(l, d)| Neighbor {
                label: VertexLabel::new(l).unwrap(),
                distance: d,
            })
            .collect()
    }

    #[test]
    fn single_landmark() {
        let setup = WitnessSetup::new(cloud(1, &[0.0]), cloud(1, &[1.0, 2.0, 3.0]), 0).unwrap();
        let t = build_witness(&setup, true).unwrap();
        assert_eq!(words(&t), vec![vec![1]]);
        assert_eq!(t.witness_count(t.search(&crate::simplex![1]).unwrap()), 3);
    }

    #[test]
    fn dense_witnesses_fill_a_triangle() {
        let landmarks = cloud(2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let mut coords = Vec::new();
        for a in 0..=20 {
            for b in 0..=(20 - a) {
                coords.extend([a as f64 / 20.0 + 0.001, b as f64 / 20.0 + 0.0003]);
            }
        }
        let setup = WitnessSetup::new(landmarks, cloud(2, &coords), 2).unwrap();
        let t = build_witness(&setup, false).unwrap();
        assert_eq!(t.num_simplices(), 7);
        assert!(!t.has_witness_counters());
    }

    #[test]
    fn candidates_without_relaxation() {
        let r = row(&[(3, 1.0), (1, 2.0), (2, 3.0)]);
        let c: Vec<_> = candidate_simplices(&r, 1, 0.0)
            .iter()
            .map(Simplex::to_u32)
            .collect();
        assert_eq!(c, vec![vec![1, 3]]);
    }

    #[test]
    fn equidistant_landmarks_give_all_subsets() {
        let r = row(&[(1, 1.0), (2, 1.0), (3, 1.0), (4, 1.0)]);
        let c = candidate_simplices(&r, 1, 0.0);
        assert_eq!(c.len(), 6);
        let c = candidate_simplices(&r, 3, 0.0);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn relaxation_adds_candidates() {
        let r = row(&[(1, 1.0), (2, 2.0), (3, 2.5)]);
        let c: Vec<_> = candidate_simplices(&r, 0, 1.0)
            .iter()
            .map(Simplex::to_u32)
            .collect();
        assert_eq!(c, vec![vec![2], vec![1]]);
        let c: Vec<_> = candidate_simplices(&r, 1, 1.0)
            .iter()
            .map(Simplex::to_u32)
            .collect();
        assert_eq!(c, vec![vec![1, 3], vec![1, 2]]);
    }

    #[test]
    fn saturated_relaxation_gives_full_simplex() {
        let landmarks = cloud(2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let witnesses = cloud(2, &[0.2, 0.3]);
        let setup = WitnessSetup::relaxed(landmarks, witnesses, 3, 10.0).unwrap();
        let t = build_relaxed_witness(&setup, RelaxedParams::new(10.0, 3).unwrap()).unwrap();
        assert_eq!(t.num_simplices(), 15);
        assert!(build_relaxed_witness(&setup, RelaxedParams::new(11.0, 3).unwrap()).is_err());
    }

    #[test]
    fn closer_landmark_replaces_the_only_one() {
        let witnesses = cloud(1, &[0.0, 0.5]);
        let mut setup = WitnessSetup::new(cloud(1, &[5.0]), witnesses, 0).unwrap();
        let mut t = build_witness(&setup, true).unwrap();
        let upd = reverse_nn(&setup, &[1.0]).unwrap();
        assert_eq!(upd.affected, vec![(0, 0), (1, 0)]);
        insert_landmark(&mut t, &mut setup, &upd).unwrap();
        assert_eq!(words(&t), vec![vec![2]]);
        assert_eq!(setup.landmarks().len(), 2);
        t.check_integrity().unwrap();
    }

    #[test]
    fn far_landmark_changes_nothing() {
        let mut setup = WitnessSetup::new(cloud(1, &[0.0, 1.0]), cloud(1, &[0.2, 0.7]), 1).unwrap();
        let mut t = build_witness(&setup, true).unwrap();
        let before = words(&t);
        let upd = reverse_nn(&setup, &[100.0]).unwrap();
        assert!(upd.affected.is_empty());
        insert_landmark(&mut t, &mut setup, &upd).unwrap();
        assert_eq!(words(&t), before);
    }

    #[test]
    fn duplicate_landmark_loses_ties() {
        let setup = WitnessSetup::new(cloud(1, &[0.0, 3.0]), cloud(1, &[0.0, 1.0]), 0).unwrap();
        let upd = reverse_nn(&setup, &[0.0]).unwrap();
        assert!(upd.affected.is_empty());
    }

    #[test]
    fn insertion_needs_counters() {
        let mut setup = WitnessSetup::new(cloud(1, &[0.0]), cloud(1, &[0.0]), 0).unwrap();
        let mut t = build_witness(&setup, false).unwrap();
        let upd = reverse_nn(&setup, &[0.1]).unwrap();
        assert!(matches!(
            insert_landmark(&mut t, &mut setup, &upd),
            Err(Error::Precondition(_))
        ));
    }
}
