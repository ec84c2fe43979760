//! Point clouds, Euclidean neighborhoods and nearest-neighbor tables.
//!
//! Distances are compared exactly; equal distances are broken by the
//! smaller label everywhere, which makes "the `j` nearest landmarks" of a
//! witness well defined without a general-position assumption.

use std::cmp::Ordering;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simplex::VertexLabel;

/// `n` points in `R^D`, stored row-major. Point `i` carries label `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "ambient dimension must be at least 1".into(),
            ));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(x) = coords.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coordinate {x}"
            )));
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::InvalidParameter(format!(
                "point {i} has dimension {} instead of {dim}",
                rows[i].len()
            )));
        }
        PointCloud::new(dim, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates of the point with 0-based index `i`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "point of dimension {} pushed into a cloud of dimension {}",
                p.len(),
                self.dim
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    /// Splits off the first `n` points into a separate cloud.
    pub fn split_at(&self, n: usize) -> (PointCloud, PointCloud) {
        let (a, b) = self.coords.split_at(n * self.dim);
        (
            PointCloud {
                dim: self.dim,
                coords: a.to_vec(),
            },
            PointCloud {
                dim: self.dim,
                coords: b.to_vec(),
            },
        )
    }
}

/// Euclidean distance. Every distance in the crate goes through here.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    /// Comma- or whitespace-separated decimals, `#` comment lines.
    Csv,
    Whitespace,
    /// `OFF` header; only vertex lines are read.
    Off,
}

impl FromStr for PointFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(PointFormat::Csv),
            "whitespace" | "txt" => Ok(PointFormat::Whitespace),
            "off" => Ok(PointFormat::Off),
            other => Err(Error::InvalidParameter(format!(
                "unknown point format {other:?}"
            ))),
        }
    }
}

impl PointFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("off") | Some("OFF") => PointFormat::Off,
            Some("txt") | Some("xyz") => PointFormat::Whitespace,
            _ => PointFormat::Csv,
        }
    }
}

pub fn load_points(path: &Path, format: PointFormat) -> Result<PointCloud> {
    let file = File::open(path)?;
    parse_points(BufReader::new(file), format)
}

fn parse_row(line: &str, lineno: usize, commas: bool) -> Result<Vec<f64>> {
    let split: Box<dyn Iterator<Item = &str>> = if commas {
        Box::new(
            line.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty()),
        )
    } else {
        Box::new(line.split_whitespace())
    };
    split
        .map(|tok| {
            tok.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: format!("not a finite number: {tok:?}"),
                })
        })
        .collect()
}

pub fn parse_points<R: BufRead>(input: R, format: PointFormat) -> Result<PointCloud> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)))
        .filter(|r| {
            r.as_ref()
                .map(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .unwrap_or(true)
        });

    let mut expected_rows = None;
    if format == PointFormat::Off {
        let (n, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty file".into(),
        })??;
        let rest = header.trim().strip_prefix("OFF").ok_or(Error::Parse {
            line: n,
            message: "missing OFF header".into(),
        })?;
        let (count_line, counts) = if rest.trim().is_empty() {
            lines.next().ok_or(Error::Parse {
                line: n + 1,
                message: "missing vertex count".into(),
            })??
        } else {
            (n, rest.to_string())
        };
        let count = counts
            .split_whitespace()
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or(Error::Parse {
                line: count_line,
                message: "bad vertex count".into(),
            })?;
        expected_rows = Some(count);
    }

    let mut dim = None;
    let mut coords = Vec::new();
    let mut rows = 0usize;
    for item in lines {
        if expected_rows == Some(rows) {
            break;
        }
        let (lineno, line) = item?;
        let row = parse_row(&line, lineno, format == PointFormat::Csv)?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("ragged row: {} coordinates, expected {d}", row.len()),
                })
            }
            _ => {}
        }
        coords.extend(row);
        rows += 1;
    }
    match (dim, expected_rows) {
        (None, _) | (Some(0), _) => Err(Error::Parse {
            line: 1,
            message: "no points".into(),
        }),
        (Some(_), Some(n)) if n != rows => Err(Error::Parse {
            line: 1,
            message: format!("OFF header announces {n} vertices, found {rows}"),
        }),
        (Some(d), _) => PointCloud::new(d, coords),
    }
}

/// Writes one point per line, comma separated, using the shortest decimal
/// representation that reads back to the same `f64`.
pub fn write_points<W: Write>(cloud: &PointCloud, mut out: W) -> Result<()> {
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Synthetic sample spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Uniform on the unit `d`-sphere in `R^(d+1)`.
    Sphere(usize),
    /// Figure-eight Klein bottle in `R^5`.
    KleinBottleR5,
    /// Uniform in the unit cube `[0,1]^d`.
    Cube(usize),
}

impl FromStr for SyntheticKind {
    type Err = Error;

    /// Accepts `sphere:D`, `cube:D` and `klein`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown synthetic kind {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (name, arg) {
            ("sphere", Some(d)) if d >= 1 => Ok(SyntheticKind::Sphere(d)),
            ("cube", Some(d)) if d >= 1 => Ok(SyntheticKind::Cube(d)),
            ("klein", None) => Ok(SyntheticKind::KleinBottleR5),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntheticKind::Sphere(d) => write!(f, "sphere:{d}"),
            SyntheticKind::KleinBottleR5 => write!(f, "klein"),
            SyntheticKind::Cube(d) => write!(f, "cube:{d}"),
        }
    }
}

/// Deterministic sample of `n` points.
pub fn sample_synthetic(kind: SyntheticKind, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "sample size must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (dim, coords) = match kind {
        SyntheticKind::Sphere(d) => {
            let dim = d + 1;
            let mut coords = Vec::with_capacity(n * dim);
            for _ in 0..n {
                loop {
                    let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 1e-12 {
                        coords.extend(v.iter().map(|x| x / norm));
                        break;
                    }
                }
            }
            (dim, coords)
        }
        SyntheticKind::Cube(d) => (d, (0..n * d).map(|_| rng.random::<f64>()).collect()),
        SyntheticKind::KleinBottleR5 => {
            use std::f64::consts::TAU;
            const R: f64 = 2.0;
            let mut coords = Vec::with_capacity(n * 5);
            for _ in 0..n {
                let theta = rng.random::<f64>() * TAU;
                let v = rng.random::<f64>() * TAU;
                let (s2, c2) = (theta / 2.0).sin_cos();
                let tube = R + c2 * v.sin() - s2 * (2.0 * v).sin();
                coords.extend([
                    tube * theta.cos(),
                    tube * theta.sin(),
                    s2 * v.sin() + c2 * (2.0 * v).sin(),
                    // Both extra coordinates are invariant under the Klein
                    // identification (theta + 2pi, v) ~ (theta, -v) and
                    // separate the sheets of the figure-eight immersion.
                    v.cos(),
                    c2 * v.sin(),
                ]);
            }
            (5, coords)
        }
    };
    PointCloud::new(dim, coords)
}

/// A graph on vertices `1..=n`, stored as sorted upper-neighbor lists
/// `N+(v) = { w : (v, w) ∈ E, w > v }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    upper: Vec<Vec<VertexLabel>>,
    edge_count: usize,
}

impl AdjacencyGraph {
    pub fn new(num_vertices: usize) -> Self {
        AdjacencyGraph {
            upper: vec![Vec::new(); num_vertices],
            edge_count: 0,
        }
    }

    /// Builds a graph from undirected edges given as label pairs.
    pub fn from_edges(num_vertices: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut upper = vec![Vec::new(); num_vertices];
        for &(a, b) in edges {
            let (lo, hi) = (a.min(b), a.max(b));
            if lo == 0 || hi as usize > num_vertices || lo == hi {
                return Err(Error::InvalidParameter(format!("invalid edge ({a}, {b})")));
            }
            upper[lo as usize - 1].push(VertexLabel::new(hi)?);
        }
        for list in &mut upper {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_upper(upper))
    }

    fn from_upper(upper: Vec<Vec<VertexLabel>>) -> Self {
        let edge_count = upper.iter().map(Vec::len).sum();
        AdjacencyGraph { upper, edge_count }
    }

    pub fn num_vertices(&self) -> usize {
        self.upper.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `N+(v)`, strictly increasing.
    pub fn upper_neighbors(&self, v: VertexLabel) -> &[VertexLabel] {
        &self.upper[v.index()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexLabel, VertexLabel)> + '_ {
        self.upper
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&w| (VertexLabel::from_index(i), w)))
    }
}

/// Rips graph: `{p, q}` is an edge iff `d(p, q) <= r`.
///
/// Buckets the points in a uniform grid of side slightly above `r`, so
/// that every edge joins points of neighboring cells. Falls back to the
/// exhaustive scan in high ambient dimension or when the grid would be too
/// large; both return identical graphs.
pub fn rips_graph(cloud: &PointCloud, r: f64) -> AdjacencyGraph {
    grid_rips_graph(cloud, r).unwrap_or_else(|| rips_graph_exhaustive(cloud, r))
}

fn grid_rips_graph(cloud: &PointCloud, r: f64) -> Option<AdjacencyGraph> {
    const MAX_GRID_DIM: usize = 6;
    const MAX_CELLS: usize = 1 << 24;
    let d = cloud.dim();
    if d > MAX_GRID_DIM || cloud.len() < 256 {
        return None;
    }
    // The margin absorbs rounding in x / side.
    let side = if r > 0.0 { r * (1.0 + 1e-9) } else { 1.0 };
    let coord = |x: f64| -> Option<i64> {
        let c = (x / side).floor();
        (c.abs() < 1e15).then_some(c as i64)
    };

    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for p in cloud.points() {
        for k in 0..d {
            let c = coord(p[k])?;
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    // One empty layer of padding on each side keeps neighbor ids in range.
    let mut strides = vec![0usize; d];
    let mut total = 1usize;
    for k in 0..d {
        strides[k] = total;
        let extent = usize::try_from(hi[k] - lo[k]).ok()?.checked_add(3)?;
        total = total.checked_mul(extent).filter(|&t| t <= MAX_CELLS)?;
    }
    let cell_of = |p: &[f64]| -> usize {
        (0..d)
            .map(|k| (coord(p[k]).expect("checked") - lo[k] + 1) as usize * strides[k])
            .sum()
    };
    let cells: Vec<usize> = cloud.points().map(cell_of).collect();

    // Points sorted by cell, with `start[c]..start[c + 1]` the members of c.
    let mut start = vec![0u32; total + 1];
    for &c in &cells {
        start[c + 1] += 1;
    }
    for c in 0..total {
        start[c + 1] += start[c];
    }
    let mut fill = start.clone();
    let mut members = vec![0u32; cloud.len()];
    for (i, &c) in cells.iter().enumerate() {
        members[fill[c] as usize] = i as u32;
        fill[c] += 1;
    }

    let offsets: Vec<isize> = (0..3usize.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|k| {
                    let o = (code % 3) as isize - 1;
                    code /= 3;
                    o * strides[k] as isize
                })
                .sum()
        })
        .collect();
    let upper = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let p = cloud.point(i);
            let mut list = Vec::new();
            for &off in &offsets {
                let c = (cells[i] as isize + off) as usize;
                for &j in &members[start[c] as usize..start[c + 1] as usize] {
                    if j as usize > i && distance(p, cloud.point(j as usize)) <= r {
                        list.push(VertexLabel::from_index(j as usize));
                    }
                }
            }
            list.sort_unstable();
            list
        })
        .collect();
    Some(AdjacencyGraph::from_upper(upper))
}

/// All-pairs Rips graph.
pub fn rips_graph_exhaustive(cloud: &PointCloud, r: f64) -> AdjacencyGraph {
    let n = cloud.len();
    let upper = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = cloud.point(i);
            (i + 1..n)
                .filter(|&j| distance(p, cloud.point(j)) <= r)
                .map(VertexLabel::from_index)
                .collect()
        })
        .collect();
    AdjacencyGraph::from_upper(upper)
}

/// A landmark together with its distance to some witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub label: VertexLabel,
    pub distance: f64,
}

impl Neighbor {
    /// The global order: by distance, then by label.
    pub fn cmp_key(&self, other: &Neighbor) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.label.cmp(&other.label))
    }
}

/// Per-witness nearest landmarks.
///
/// `rows[w]` holds the `k + 1` nearest landmarks of witness `w` (0-based)
/// sorted by (distance, label). In relaxed mode `extended[w]` additionally
/// lists every landmark within `m_k + rho`, where `m_k` is the distance of
/// the `(k+1)`-th nearest.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborMatrix {
    k: usize,
    rows: Vec<Vec<Neighbor>>,
    extended: Option<(f64, Vec<Vec<Neighbor>>)>,
}

impl NeighborMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_witnesses(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, w: usize) -> &[Neighbor] {
        &self.rows[w]
    }

    /// Relaxation the extended rows were computed for.
    pub fn rho(&self) -> Option<f64> {
        self.extended.as_ref().map(|(rho, _)| *rho)
    }

    pub fn extended_row(&self, w: usize) -> Option<&[Neighbor]> {
        self.extended.as_ref().map(|(_, rows)| rows[w].as_slice())
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<Vec<Neighbor>> {
        &mut self.rows
    }

    pub(crate) fn drop_extended(&mut self) {
        self.extended = None;
    }
}

fn sorted_distances(w: &[f64], landmarks: &PointCloud) -> Vec<Neighbor> {
    let mut row: Vec<Neighbor> = landmarks
        .points()
        .enumerate()
        .map(|(i, z)| Neighbor {
            label: VertexLabel::from_index(i),
            distance: distance(w, z),
        })
        .collect();
    row.sort_unstable_by(Neighbor::cmp_key);
    row
}

fn check_knn_input(witnesses: &PointCloud, landmarks: &PointCloud, k: usize) -> Result<()> {
    if k + 1 > landmarks.len() {
        return Err(Error::InvalidParameter(format!(
            "{} nearest neighbors requested among {} landmarks",
            k + 1,
            landmarks.len()
        )));
    }
    if !witnesses.is_empty() && witnesses.dim() != landmarks.dim() {
        return Err(Error::InvalidParameter(
            "witnesses and landmarks live in different dimensions".into(),
        ));
    }
    Ok(())
}

/// The `k + 1` nearest landmarks of every witness.
pub fn knn_matrix(
    witnesses: &PointCloud,
    landmarks: &PointCloud,
    k: usize,
) -> Result<NeighborMatrix> {
    check_knn_input(witnesses, landmarks, k)?;
    let rows = witnesses
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|w| {
            let mut row: Vec<Neighbor> = landmarks
                .points()
                .enumerate()
                .map(|(i, z)| Neighbor {
                    label: VertexLabel::from_index(i),
                    distance: distance(w, z),
                })
                .collect();
            if row.len() > k + 1 {
                row.select_nth_unstable_by(k, Neighbor::cmp_key);
                row.truncate(k + 1);
            }
            row.sort_unstable_by(Neighbor::cmp_key);
            row
        })
        .collect();
    Ok(NeighborMatrix {
        k,
        rows,
        extended: None,
    })
}

/// Nearest-neighbor rows extended to every landmark within `m_k + rho`.
pub fn range_rows(
    witnesses: &PointCloud,
    landmarks: &PointCloud,
    k: usize,
    rho: f64,
) -> Result<NeighborMatrix> {
    check_knn_input(witnesses, landmarks, k)?;
    if rho.is_nan() || rho < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "relaxation must be >= 0, got {rho}"
        )));
    }
    let (rows, extended): (Vec<_>, Vec<_>) = witnesses
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|w| {
            let mut all = sorted_distances(w, landmarks);
            let bound = all[k].distance + rho;
            let keep = all.partition_point(|n| n.distance <= bound);
            all.truncate(keep);
            (all[..=k].to_vec(), all)
        })
        .unzip();
    Ok(NeighborMatrix {
        k,
        rows,
        extended: Some((rho, extended)),
    })
}
