//! Vertex labels and simplices encoded as sorted label words.

use std::fmt;

use crate::error::{Error, Result};

/// A vertex label. Labels are strictly positive and ordered as integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct VertexLabel(u32);

impl VertexLabel {
    pub fn new(value: u32) -> Result<Self> {
        if value == 0 {
            return Err(Error::MalformedSimplex(vec![0]));
        }
        Ok(VertexLabel(value))
    }

    /// Label from a 0-based point index (point `i` gets label `i + 1`).
    pub fn from_index(index: usize) -> Self {
        VertexLabel(index as u32 + 1)
    }

    pub(crate) const fn new_unchecked(value: u32) -> Self {
        VertexLabel(value)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based index of the point this label refers to.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A simplex, stored as the strictly increasing word of its vertex labels.
///
/// The empty word stands for the empty face (dimension −1). The derived
/// ordering is lexicographic on the word; use [`Simplex::filtration_key`]
/// for the dimension-major order used by enumeration and serialization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Simplex(Vec<VertexLabel>);

impl Simplex {
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        if labels.contains(&0) || labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSimplex(labels));
        }
        Ok(Simplex(labels.into_iter().map(VertexLabel).collect()))
    }

    /// Sorts and deduplicates arbitrary labels into a simplex.
    pub fn from_unsorted(mut labels: Vec<u32>) -> Result<Self> {
        labels.sort_unstable();
        labels.dedup();
        Simplex::new(labels)
    }

    pub fn from_labels(labels: Vec<VertexLabel>) -> Result<Self> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSimplex(
                labels.iter().map(|l| l.0).collect(),
            ));
        }
        Ok(Simplex(labels))
    }

    pub(crate) fn from_sorted_unchecked(labels: Vec<VertexLabel>) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        Simplex(labels)
    }

    pub fn vertex(label: VertexLabel) -> Self {
        Simplex(vec![label])
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.0
    }

    pub fn to_u32(&self) -> Vec<u32> {
        self.0.iter().map(|l| l.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension: number of vertices minus one (−1 for the empty face).
    pub fn dimension(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn last(&self) -> Option<VertexLabel> {
        self.0.last().copied()
    }

    pub fn contains(&self, label: VertexLabel) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    /// True when every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|l| it.any(|m| m == l))
    }

    /// The facet obtained by dropping the vertex at position `i`.
    pub fn facet(&self, i: usize) -> Simplex {
        let mut labels = self.0.clone();
        labels.remove(i);
        Simplex(labels)
    }

    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| self.facet(i))
    }

    /// Key for the enumeration order: dimension first, then lexicographic.
    pub fn filtration_key(&self) -> (usize, &[VertexLabel]) {
        (self.0.len(), &self.0)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl TryFrom<Vec<u32>> for Simplex {
    type Error = Error;

    fn try_from(labels: Vec<u32>) -> Result<Self> {
        Simplex::new(labels)
    }
}

impl<const N: usize> TryFrom<[u32; N]> for Simplex {
    type Error = Error;

    fn try_from(labels: [u32; N]) -> Result<Self> {
        Simplex::new(labels.to_vec())
    }
}

/// Builds a [`Simplex`] from literal labels, panicking on a malformed word.
#[macro_export]
macro_rules! simplex {
    ($($l:expr),* $(,)?) => {
        $crate::Simplex::new(vec![$($l),*]).expect("malformed simplex literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_duplicate_words() {
        assert!(Simplex::new(vec![2, 1]).is_err());
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert!(Simplex::new(vec![0, 3]).is_err());
        assert!(Simplex::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn dimension_and_last() {
        let s = simplex![1, 4, 9];
        assert_eq!(s.dimension(), 2);
        assert_eq!(s.last().map(VertexLabel::get), Some(9));
        assert_eq!(Simplex::default().dimension(), -1);
    }

    #[test]
    fn facets_drop_one_vertex_each() {
        let f: Vec<_> = simplex![1, 2, 3].facets().collect();
        assert_eq!(f, vec![simplex![2, 3], simplex![1, 3], simplex![1, 2]]);
        assert!(simplex![1, 3].is_face_of(&simplex![1, 2, 3]));
        assert!(!simplex![1, 4].is_face_of(&simplex![1, 2, 3]));
    }

    #[test]
    fn from_unsorted_normalizes() {
        assert_eq!(
            Simplex::from_unsorted(vec![3, 1, 3]).unwrap(),
            simplex![1, 3]
        );
    }
}
