//! Timing experiments: per-dimension operation costs and parameter grids.

use std::hint::black_box;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simplex_tree::flag::{build_rips_limited, RipsParams};
use simplex_tree::geometry::PointCloud;
use simplex_tree::witness::{build_relaxed_witness_limited, RelaxedParams, WitnessSetup};
use simplex_tree::{NodeHandle, Result, SimplexTree};

/// Mean cost of one operation on faces of a given dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DimTiming {
    pub dimension: usize,
    pub samples: usize,
    pub mean_seconds: f64,
}

/// Up to `max` nodes of the given depth, evenly spread over the ring order.
fn sample_nodes(tree: &SimplexTree, depth: usize, max: usize) -> Vec<NodeHandle> {
    let all: Vec<NodeHandle> = tree.nodes_at_depth(depth).collect();
    if all.len() <= max {
        return all;
    }
    let stride = all.len() as f64 / max as f64;
    (0..max)
        .map(|i| all[(i as f64 * stride) as usize])
        .collect()
}

/// Times `op` on up to `max_samples` faces of every dimension.
///
/// Samples of all dimensions are timed one call at a time in a shuffled
/// order, repeated over several passes, so every dimension sees the same
/// cache conditions. One untimed pass runs first.
fn per_dimension<F>(
    tree: &SimplexTree,
    max_samples: usize,
    passes: usize,
    mut op: F,
) -> Vec<DimTiming>
where
    F: FnMut(&SimplexTree, NodeHandle),
{
    let max_depth = tree.label_depth_index().max_depth();
    let mut order: Vec<(usize, NodeHandle)> = (1..=max_depth)
        .flat_map(|d| {
            sample_nodes(tree, d, max_samples)
                .into_iter()
                .map(move |h| (d, h))
        })
        .collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));

    let mut total = vec![Duration::ZERO; max_depth + 1];
    let mut calls = vec![0usize; max_depth + 1];
    for pass in 0..=passes {
        for &(d, h) in &order {
            let start = Instant::now();
            op(tree, h);
            let elapsed = start.elapsed();
            if pass > 0 {
                total[d] += elapsed;
                calls[d] += 1;
            }
        }
    }
    (1..=max_depth)
        .filter(|&d| calls[d] > 0)
        .map(|d| DimTiming {
            dimension: d - 1,
            samples: calls[d] / passes.max(1),
            mean_seconds: total[d].as_secs_f64() / calls[d] as f64,
        })
        .collect()
}

/// Mean time to locate the facets of a face, per dimension.
pub fn facet_timings(tree: &SimplexTree, max_samples: usize, passes: usize) -> Vec<DimTiming> {
    per_dimension(tree, max_samples, passes, |t, h| {
        black_box(t.facets_of(black_box(h)));
    })
}

/// Mean time to locate the cofaces of a face, per dimension.
pub fn coface_timings(tree: &SimplexTree, max_samples: usize, passes: usize) -> Vec<DimTiming> {
    per_dimension(tree, max_samples, passes, |t, h| {
        let sigma = t.simplex(h);
        black_box(t.coface_roots(black_box(&sigma)).expect("stored face"));
    })
}

/// One point of a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub param: f64,
    pub faces: usize,
    pub maximal: Option<usize>,
    pub edges: usize,
    /// Vertices plus edges.
    pub one_skeleton: usize,
    pub t_pre: f64,
    pub t_build: f64,
}

impl GridRow {
    pub fn t_total(&self) -> f64 {
        self.t_pre + self.t_build
    }

    pub fn t_per_face(&self) -> f64 {
        self.t_total() / self.faces.max(1) as f64
    }
}

fn skeleton_sizes(tree: &SimplexTree) -> (usize, usize) {
    let f = tree.faces_per_dimension();
    let v = f.first().copied().unwrap_or(0);
    let e = f.get(1).copied().unwrap_or(0);
    (e, v + e)
}

/// Rips complexes over a grid of radii; a warm-up build at the first radius
/// is discarded.
pub fn rips_grid(
    cloud: &PointCloud,
    radii: &[f64],
    k: usize,
    with_maximal: bool,
    limit: Option<usize>,
) -> Result<Vec<GridRow>> {
    if let Some(&r) = radii.first() {
        build_rips_limited(cloud, RipsParams::new(r, k)?, limit)?;
    }
    let mut rows = Vec::new();
    for &r in radii {
        let build = build_rips_limited(cloud, RipsParams::new(r, k)?, limit)?;
        let (edges, one_skeleton) = skeleton_sizes(&build.tree);
        rows.push(GridRow {
            param: r,
            faces: build.tree.num_simplices(),
            maximal: with_maximal.then(|| build.tree.count_maximal()),
            edges,
            one_skeleton,
            t_pre: build.graph_time.as_secs_f64(),
            t_build: build.expansion_time.as_secs_f64(),
        });
    }
    Ok(rows)
}

/// Relaxed witness complexes over a grid of relaxations; a warm-up build at
/// the first value is discarded.
pub fn rwitness_grid(
    landmarks: &PointCloud,
    witnesses: &PointCloud,
    k: usize,
    rhos: &[f64],
    limit: Option<usize>,
) -> Result<Vec<GridRow>> {
    let run = |rho: f64| -> Result<(SimplexTree, f64, f64)> {
        let start = Instant::now();
        let setup = WitnessSetup::relaxed(landmarks.clone(), witnesses.clone(), k, rho)?;
        let t_pre = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let tree = build_relaxed_witness_limited(&setup, RelaxedParams::new(rho, k)?, limit)?;
        Ok((tree, t_pre, start.elapsed().as_secs_f64()))
    };
    if let Some(&rho) = rhos.first() {
        run(rho)?;
    }
    let mut rows = Vec::new();
    for &rho in rhos {
        let (tree, t_pre, t_build) = run(rho)?;
        let (edges, one_skeleton) = skeleton_sizes(&tree);
        rows.push(GridRow {
            param: rho,
            faces: tree.num_simplices(),
            maximal: Some(tree.count_maximal()),
            edges,
            one_skeleton,
            t_pre,
            t_build,
        });
    }
    Ok(rows)
}

/// Least-squares fit `y ≈ a x² + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

pub fn quadratic_fit(xs: &[f64], ys: &[f64]) -> Option<QuadraticFit> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return None;
    }
    let n = xs.len();
    let design = DMatrix::from_fn(n, 3, |i, j| xs[i].powi(2 - j as i32));
    let y = DVector::from_column_slice(ys);
    let coef = design.clone().svd(true, true).solve(&y, 1e-14).ok()?;
    let fitted = &design * &coef;
    let mean = y.mean();
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = y
        .iter()
        .zip(fitted.iter())
        .map(|(v, f)| (v - f).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(QuadraticFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        r2,
    })
}

/// Standard deviation over mean (population form).
pub fn coefficient_of_variation(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean
}

pub fn dim_timings_csv(rows: &[DimTiming]) -> String {
    let mut s = String::from("dimension,samples,mean_seconds\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{:e}\n",
            r.dimension, r.samples, r.mean_seconds
        ));
    }
    s
}

pub fn grid_csv(param: &str, rows: &[GridRow]) -> String {
    let mut s =
        format!("{param},faces,maximal,one_skeleton,edges,t_pre,t_build,t_total,t_per_face\n");
    for r in rows {
        let maximal = r.maximal.map(|m| m.to_string()).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{},{:e},{:e},{:e},{:e}\n",
            r.param,
            r.faces,
            maximal,
            r.one_skeleton,
            r.edges,
            r.t_pre,
            r.t_build,
            r.t_total(),
            r.t_per_face()
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_quadratic_has_unit_r2() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x * x - 3.0 * x + 1.0).collect();
        let fit = quadratic_fit(&xs, &ys).unwrap();
        assert!(
            (fit.a - 2.0).abs() < 1e-9 && (fit.b + 3.0).abs() < 1e-9 && (fit.c - 1.0).abs() < 1e-9
        );
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert!(quadratic_fit(&xs[..2], &ys[..2]).is_none());
    }

    #[test]
    fn variation_of_constant_is_zero() {
        assert_eq!(coefficient_of_variation(&[2.0, 2.0, 2.0]), 0.0);
        assert!((coefficient_of_variation(&[1.0, 3.0]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn facet_timings_cover_every_dimension() {
        let mut t = SimplexTree::new();
        t.insert_full_simplex(&simplex_tree::simplex![1, 2, 3, 4, 5])
            .unwrap();
        let rows = facet_timings(&t, 10, 2);
        assert_eq!(
            rows.iter().map(|r| r.dimension).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4]
        );
        assert_eq!(rows[1].samples, 10);
        let csv = dim_timings_csv(&rows);
        assert_eq!(csv.lines().count(), 6);
    }
}
