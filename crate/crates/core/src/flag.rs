//! Flag complexes: expansion of a graph into the cliques of bounded size,
//! and the Rips complex of a point cloud.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::{rips_graph, AdjacencyGraph, PointCloud};
use crate::simplex::VertexLabel;
use crate::tree::{NodeHandle, SimplexTree};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RipsParams {
    /// Distance threshold for edges.
    pub r: f64,
    /// Maximal dimension of the expansion.
    pub k: usize,
}

impl RipsParams {
    pub fn new(r: f64, k: usize) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "r must be a finite value >= 0, got {r}"
            )));
        }
        if k < 1 {
            return Err(Error::InvalidParameter(
                "expansion order must be at least 1".into(),
            ));
        }
        Ok(RipsParams { r, k })
    }
}

/// Stores the vertices `1..=n` and the edges of `g` in an empty tree.
pub fn insert_graph(tree: &mut SimplexTree, g: &AdjacencyGraph) -> Result<()> {
    if !tree.is_empty() {
        return Err(Error::Precondition(
            "insert_graph needs an empty tree".into(),
        ));
    }
    let root = tree.root();
    for i in 0..g.num_vertices() {
        let v = VertexLabel::from_index(i);
        let node = tree.add_child(root, v);
        for &w in g.upper_neighbors(v) {
            tree.add_child(node, w);
        }
    }
    tree.check_node_limit()
}

/// Sorted intersection of `a` and `b`.
fn intersect(a: &[VertexLabel], b: &[VertexLabel]) -> Vec<VertexLabel> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Grows the 1-skeleton stored by [`insert_graph`] into the `k`-skeleton of
/// the flag complex of `g`.
///
/// The children of a node `[l0 .. lj]` are the labels of its larger
/// siblings that are also upper neighbors of `lj`.
pub fn expand(tree: &mut SimplexTree, g: &AdjacencyGraph, k: usize) -> Result<()> {
    let max_depth = k + 1;
    if max_depth <= 2 {
        return Ok(());
    }
    // (node, labels of its children), depth-first.
    let mut stack: Vec<(NodeHandle, Vec<VertexLabel>)> = Vec::new();
    for i in (0..g.num_vertices()).rev() {
        let v = VertexLabel::from_index(i);
        let Some(h) = tree.child(tree.root(), v) else {
            continue;
        };
        let upper = g.upper_neighbors(v);
        if upper.len() >= 2 {
            stack.push((h, upper.to_vec()));
        }
    }
    let mut created = 0usize;
    while let Some((h, labels)) = stack.pop() {
        let child_depth = tree.depth(h) + 1;
        for (idx, &c) in labels.iter().enumerate() {
            let cand = intersect(&labels[idx + 1..], g.upper_neighbors(c));
            if cand.is_empty() {
                continue;
            }
            let node = tree.child(h, c).expect("child stored before expansion");
            for &l in &cand {
                tree.add_child(node, l);
            }
            created += cand.len();
            if created >= 4096 {
                tree.check_node_limit()?;
                created = 0;
            }
            if child_depth + 1 < max_depth && cand.len() >= 2 {
                stack.push((node, cand));
            }
        }
    }
    tree.check_node_limit()
}

/// Flag complex of `g` up to dimension `k` in a fresh tree.
pub fn flag_complex(g: &AdjacencyGraph, k: usize) -> Result<SimplexTree> {
    let mut tree = SimplexTree::new();
    insert_graph(&mut tree, g)?;
    expand(&mut tree, g, k)?;
    Ok(tree)
}

/// A Rips complex together with the cost of building it.
#[derive(Debug)]
pub struct RipsBuild {
    pub tree: SimplexTree,
    pub edges: usize,
    /// Time spent computing the neighborhood graph.
    pub graph_time: Duration,
    /// Time spent inserting the graph and expanding it.
    pub expansion_time: Duration,
}

/// Rips complex of `cloud` at scale `params.r`, up to dimension `params.k`.
pub fn build_rips(cloud: &PointCloud, params: RipsParams) -> Result<RipsBuild> {
    build_rips_limited(cloud, params, None)
}

/// As [`build_rips`], failing with [`Error::NodeLimit`] once more than
/// `limit` faces are stored.
pub fn build_rips_limited(
    cloud: &PointCloud,
    params: RipsParams,
    limit: Option<usize>,
) -> Result<RipsBuild> {
    let params = RipsParams::new(params.r, params.k)?;
    let start = Instant::now();
    let g = rips_graph(cloud, params.r);
    let graph_time = start.elapsed();

    let start = Instant::now();
    let mut tree = SimplexTree::new();
    tree.set_node_limit(limit);
    insert_graph(&mut tree, &g)?;
    expand(&mut tree, &g, params.k)?;
    let expansion_time = start.elapsed();
    Ok(RipsBuild {
        tree,
        edges: g.edge_count(),
        graph_time,
        expansion_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Simplex;

    fn words(t: &SimplexTree) -> Vec<Vec<u32>> {
        t.enumerate().iter().map(Simplex::to_u32).collect()
    }

    #[test]
    fn triangle_graph() {
        let g = AdjacencyGraph::from_edges(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        let mut t = SimplexTree::new();
        insert_graph(&mut t, &g).unwrap();
        assert_eq!(t.faces_per_dimension(), vec![3, 3]);
        expand(&mut t, &g, 2).unwrap();
        assert_eq!(t.num_simplices(), 7);
        assert!(insert_graph(&mut t, &g).is_err());
        t.check_integrity().unwrap();
    }

    #[test]
    fn path_has_no_triangle() {
        let g = AdjacencyGraph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let t = flag_complex(&g, 2).unwrap();
        assert_eq!(
            words(&t),
            vec![vec![1], vec![2], vec![3], vec![1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn empty_graph_gives_vertices() {
        let t = flag_complex(&AdjacencyGraph::new(5), 3).unwrap();
        assert_eq!(t.num_simplices(), 5);
    }

    #[test]
    fn octahedron() {
        let mut coords = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut p = [0.0; 3];
                p[i] = s;
                coords.extend(p);
            }
        }
        let cloud = PointCloud::new(3, coords).unwrap();
        let build = build_rips(&cloud, RipsParams::new(1.5, 3).unwrap()).unwrap();
        assert_eq!(build.edges, 12);
        assert_eq!(build.tree.faces_per_dimension(), vec![6, 12, 8]);
        assert_eq!(build.tree.euler_characteristic(), 2);
        build.tree.check_integrity().unwrap();
    }

    #[test]
    fn small_radius_gives_vertices_only() {
        let cloud = PointCloud::new(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let build = build_rips(&cloud, RipsParams::new(0.5, 2).unwrap()).unwrap();
        assert_eq!(build.tree.num_simplices(), 3);
        let build = build_rips(&cloud, RipsParams::new(2.0, 2).unwrap()).unwrap();
        assert_eq!(build.tree.num_simplices(), 7);
    }

    #[test]
    fn node_limit_aborts() {
        let cloud = PointCloud::new(1, (0..12).map(f64::from).collect()).unwrap();
        let err = build_rips_limited(&cloud, RipsParams::new(100.0, 11).unwrap(), Some(100));
        assert!(matches!(err, Err(Error::NodeLimit(100))));
    }

    #[test]
    fn params_validation() {
        assert!(RipsParams::new(-1.0, 2).is_err());
        assert!(RipsParams::new(f64::NAN, 2).is_err());
        assert!(RipsParams::new(1.0, 0).is_err());
    }
}
