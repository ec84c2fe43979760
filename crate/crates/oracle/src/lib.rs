//! Brute-force reference implementations.
//!
//! Everything here works on plain sorted `Vec<u32>` words and evaluates the
//! textbook set definitions directly, with exponential cost. Nothing is
//! shared with the `simplex-tree` crate so the two can be checked against
//! each other.

use std::collections::BTreeSet;
use std::fmt;

pub type Word = Vec<u32>;

pub const MAX_FLAG_VERTICES: usize = 16;
pub const MAX_WITNESS_LANDMARKS: usize = 12;
pub const MAX_WITNESSES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooLarge(String),
    Absent(Word),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge(what) => write!(f, "instance too large for the oracle: {what}"),
            OracleError::Absent(w) => write!(f, "{w:?} is not in the complex"),
        }
    }
}

impl std::error::Error for OracleError {}

/// A complex as the set of its nonempty faces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleComplex {
    pub words: BTreeSet<Word>,
}

fn normalize(mut w: Word) -> Word {
    w.sort_unstable();
    w.dedup();
    w
}

fn subsets(w: &[u32]) -> impl Iterator<Item = Word> + '_ {
    (1u64..(1u64 << w.len())).map(move |mask| {
        w.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &l)| l)
            .collect()
    })
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.contains(x))
}

impl OracleComplex {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[u32]) -> bool {
        self.words.contains(w)
    }

    pub fn dimension(&self) -> isize {
        self.words
            .iter()
            .map(|w| w.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    /// Faces sorted by size, then lexicographically.
    pub fn sorted_words(&self) -> Vec<Word> {
        let mut v: Vec<Word> = self.words.iter().cloned().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    pub fn faces_per_dimension(&self) -> Vec<usize> {
        let mut counts = vec![0; (self.dimension() + 1) as usize];
        for w in &self.words {
            counts[w.len() - 1] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.words
            .iter()
            .map(|w| if w.len() % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    pub fn is_closed(&self) -> bool {
        self.words
            .iter()
            .all(|w| subsets(w).all(|s| self.words.contains(&s)))
    }

    fn require(&self, w: &[u32]) -> Result<(), OracleError> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(OracleError::Absent(w.to_vec()))
        }
    }
}

/// All nonempty subsets of the given words.
pub fn oracle_close_down<I: IntoIterator<Item = Word>>(words: I) -> OracleComplex {
    let mut out = BTreeSet::new();
    for w in words {
        let w = normalize(w);
        assert!(w.len() < 24, "word too long for subset enumeration");
        out.extend(subsets(&w));
    }
    OracleComplex { words: out }
}

/// Faces containing `sigma`, including `sigma`.
pub fn oracle_star(c: &OracleComplex, sigma: &[u32]) -> Result<BTreeSet<Word>, OracleError> {
    c.require(sigma)?;
    Ok(c.words
        .iter()
        .filter(|w| is_subset(sigma, w))
        .cloned()
        .collect())
}

/// Faces of `sigma` with exactly one vertex less.
pub fn oracle_facets(c: &OracleComplex, sigma: &[u32]) -> Result<BTreeSet<Word>, OracleError> {
    c.require(sigma)?;
    Ok(c.words
        .iter()
        .filter(|w| w.len() + 1 == sigma.len() && is_subset(w, sigma))
        .cloned()
        .collect())
}

/// Faces disjoint from `sigma` whose union with `sigma` is a face.
pub fn oracle_link(c: &OracleComplex, sigma: &[u32]) -> Result<BTreeSet<Word>, OracleError> {
    c.require(sigma)?;
    Ok(c.words
        .iter()
        .filter(|t| t.iter().all(|x| !sigma.contains(x)))
        .filter(|t| {
            let mut u = t.to_vec();
            u.extend_from_slice(sigma);
            c.contains(&normalize(u))
        })
        .cloned()
        .collect())
}

pub fn oracle_is_free_pair(
    c: &OracleComplex,
    tau: &[u32],
    sigma: &[u32],
) -> Result<bool, OracleError> {
    c.require(tau)?;
    c.require(sigma)?;
    let star = oracle_star(c, tau)?;
    Ok(sigma.len() == tau.len() + 1 && is_subset(tau, sigma) && star.len() == 2)
}

pub fn oracle_collapse(
    c: &OracleComplex,
    tau: &[u32],
    sigma: &[u32],
) -> Result<OracleComplex, OracleError> {
    let mut out = c.clone();
    out.words.remove(tau);
    out.words.remove(sigma);
    Ok(out)
}

pub fn oracle_link_condition(c: &OracleComplex, a: u32, b: u32) -> Result<bool, OracleError> {
    let ab = normalize(vec![a, b]);
    c.require(&ab)?;
    let la = oracle_link(c, &[a])?;
    let lb = oracle_link(c, &[b])?;
    let lab = oracle_link(c, &ab)?;
    Ok(la.intersection(&lb).cloned().collect::<BTreeSet<_>>() == lab)
}

/// Image of `c` under the map sending `max(a, b)` to `min(a, b)`.
pub fn oracle_contract(c: &OracleComplex, a: u32, b: u32) -> Result<OracleComplex, OracleError> {
    let (keep, gone) = (a.min(b), a.max(b));
    c.require(&[keep, gone])?;
    let words = c
        .words
        .iter()
        .map(|w| {
            normalize(
                w.iter()
                    .map(|&v| if v == gone { keep } else { v })
                    .collect(),
            )
        })
        .collect();
    Ok(OracleComplex { words })
}

/// Number of faces that are not a proper subset of another face.
pub fn oracle_maximal_count(c: &OracleComplex) -> usize {
    c.words
        .iter()
        .filter(|w| !c.words.iter().any(|v| v.len() > w.len() && is_subset(w, v)))
        .count()
}

fn adjacency(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n + 1]; n + 1];
    for &(a, b) in edges {
        adj[a as usize][b as usize] = true;
        adj[b as usize][a as usize] = true;
    }
    adj
}

/// Vertex subsets of size at most `k + 1` that are pairwise adjacent, on
/// vertices `1..=n`.
pub fn oracle_flag(n: usize, edges: &[(u32, u32)], k: usize) -> Result<OracleComplex, OracleError> {
    if n > MAX_FLAG_VERTICES {
        return Err(OracleError::TooLarge(format!("{n} vertices")));
    }
    let adj = adjacency(n, edges);
    let all: Word = (1..=n as u32).collect();
    let words = subsets(&all)
        .filter(|w| w.len() <= k + 1)
        .filter(|w| {
            w.iter()
                .enumerate()
                .all(|(i, &x)| w[i + 1..].iter().all(|&y| adj[x as usize][y as usize]))
        })
        .collect();
    Ok(OracleComplex { words })
}

/// Maximal cliques by Bron–Kerbosch, then their subsets of size at most
/// `k + 1`.
pub fn oracle_clique_complex(
    n: usize,
    edges: &[(u32, u32)],
    k: usize,
) -> Result<OracleComplex, OracleError> {
    if n > MAX_FLAG_VERTICES {
        return Err(OracleError::TooLarge(format!("{n} vertices")));
    }
    let adj = adjacency(n, edges);
    let mut cliques = Vec::new();
    bron_kerbosch(
        &adj,
        Vec::new(),
        (1..=n as u32).collect(),
        Vec::new(),
        &mut cliques,
    );
    let mut c = oracle_close_down(cliques);
    c.words.retain(|w| w.len() <= k + 1);
    Ok(c)
}

fn bron_kerbosch(adj: &[Vec<bool>], r: Word, mut p: Word, mut x: Word, out: &mut Vec<Word>) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            out.push(r);
        }
        return;
    }
    while let Some(v) = p.pop() {
        let nbr = |u: &u32| adj[v as usize][*u as usize];
        let mut r2 = r.clone();
        r2.push(v);
        bron_kerbosch(
            adj,
            r2,
            p.iter().copied().filter(nbr).collect(),
            x.iter().copied().filter(nbr).collect(),
            out,
        );
        x.push(v);
    }
}

pub fn oracle_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s.sqrt()
}

/// Pairs `(i, j)`, `i < j`, of 1-based labels within distance `r`.
pub fn oracle_rips_edges(points: &[Vec<f64>], r: f64) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if oracle_distance(&points[i], &points[j]) <= r {
                edges.push((i as u32 + 1, j as u32 + 1));
            }
        }
    }
    edges
}

/// Every landmark as `(label, distance)` for each witness, sorted by
/// distance then label.
pub fn oracle_sorted_rows(witnesses: &[Vec<f64>], landmarks: &[Vec<f64>]) -> Vec<Vec<(u32, f64)>> {
    witnesses
        .iter()
        .map(|w| {
            let mut row: Vec<(u32, f64)> = landmarks
                .iter()
                .enumerate()
                .map(|(i, z)| (i as u32 + 1, oracle_distance(w, z)))
                .collect();
            row.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
            row
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessMode {
    /// `w` witnesses the set of its `j + 1` nearest landmarks.
    Nearest,
    /// `w` witnesses `sigma` when `d(w,x) <= d(w,y) + rho` for all `x` in
    /// `sigma` and `y` outside.
    Relaxed(f64),
}

/// Faces of dimension at most `k`, kept dimension by dimension when some
/// witness witnesses them and all their facets are kept.
pub fn oracle_witness(
    landmarks: &[Vec<f64>],
    witnesses: &[Vec<f64>],
    k: usize,
    mode: WitnessMode,
) -> Result<OracleComplex, OracleError> {
    if landmarks.len() > MAX_WITNESS_LANDMARKS {
        return Err(OracleError::TooLarge(format!(
            "{} landmarks",
            landmarks.len()
        )));
    }
    if witnesses.len() > MAX_WITNESSES {
        return Err(OracleError::TooLarge(format!(
            "{} witnesses",
            witnesses.len()
        )));
    }
    let rows = oracle_sorted_rows(witnesses, landmarks);
    let dist: Vec<Vec<f64>> = witnesses
        .iter()
        .map(|w| landmarks.iter().map(|z| oracle_distance(w, z)).collect())
        .collect();
    let witnessed = |sigma: &[u32]| -> bool {
        match mode {
            WitnessMode::Nearest => rows.iter().any(|row| {
                let mut nearest: Word = row[..sigma.len()].iter().map(|e| e.0).collect();
                nearest.sort_unstable();
                nearest == sigma
            }),
            WitnessMode::Relaxed(rho) => dist.iter().any(|d| {
                sigma.iter().all(|&x| {
                    (1..=landmarks.len() as u32)
                        .filter(|y| !sigma.contains(y))
                        .all(|y| d[x as usize - 1] <= d[y as usize - 1] + rho)
                })
            }),
        }
    };
    let all: Word = (1..=landmarks.len() as u32).collect();
    let mut by_size: Vec<Word> = subsets(&all).filter(|w| w.len() <= k + 1).collect();
    by_size.sort_by_key(Vec::len);
    let mut c = OracleComplex::default();
    for sigma in by_size {
        let facets_kept = sigma.len() == 1
            || (0..sigma.len()).all(|i| {
                let mut f = sigma.clone();
                f.remove(i);
                c.contains(&f)
            });
        if facets_kept && witnessed(&sigma) {
            c.words.insert(sigma);
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_triangle() {
        let c = oracle_close_down([vec![1, 2, 3]]);
        assert_eq!(c.len(), 7);
        assert_eq!(oracle_close_down(c.words.clone()), c);
        assert!(c.is_closed());
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn star_facets_link() {
        let c = oracle_close_down([vec![1, 2, 3]]);
        assert_eq!(oracle_star(&c, &[1]).unwrap().len(), 4);
        assert_eq!(oracle_facets(&c, &[1, 2, 3]).unwrap().len(), 3);
        let hollow = oracle_close_down([vec![1, 2], vec![1, 3], vec![2, 3]]);
        let link: Vec<_> = oracle_link(&hollow, &[1]).unwrap().into_iter().collect();
        assert_eq!(link, vec![vec![2], vec![3]]);
        assert!(oracle_star(&c, &[4]).is_err());
    }

    #[test]
    fn flag_complexes() {
        let tri = [(1, 2), (1, 3), (2, 3)];
        assert_eq!(oracle_flag(3, &tri, 2).unwrap().len(), 7);
        assert_eq!(oracle_flag(4, &[], 3).unwrap().len(), 4);
        // Octahedron: vertices 2i-1, 2i antipodal.
        let mut edges = Vec::new();
        for a in 1..=6u32 {
            for b in a + 1..=6 {
                if a.div_ceil(2) != b.div_ceil(2) {
                    edges.push((a, b));
                }
            }
        }
        let oct = oracle_flag(6, &edges, 3).unwrap();
        assert_eq!(oct.faces_per_dimension(), vec![6, 12, 8]);
        assert_eq!(oracle_clique_complex(6, &edges, 3).unwrap(), oct);
        assert!(oracle_flag(17, &[], 1).is_err());
    }

    #[test]
    fn contraction_image() {
        let c = oracle_close_down([vec![1, 2, 3]]);
        let d = oracle_contract(&c, 1, 3).unwrap();
        assert_eq!(d.sorted_words(), vec![vec![1], vec![2], vec![1, 2]]);
        let e = oracle_close_down([vec![1, 2], vec![3]]);
        assert!(oracle_contract(&e, 1, 3).is_err());
    }

    #[test]
    fn witness_definitions() {
        let landmarks = vec![vec![0.0], vec![10.0]];
        let witnesses = vec![vec![1.0], vec![2.0]];
        let c = oracle_witness(&landmarks, &witnesses, 1, WitnessMode::Nearest).unwrap();
        assert_eq!(c.sorted_words(), vec![vec![1]]);
        let c = oracle_witness(&landmarks, &witnesses, 1, WitnessMode::Relaxed(100.0)).unwrap();
        assert_eq!(c.len(), 3);
        let many = vec![vec![0.0]; 13];
        assert!(oracle_witness(&many, &witnesses, 1, WitnessMode::Nearest).is_err());
    }
}
