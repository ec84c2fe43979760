//! Links, elementary collapses and edge contractions.

use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexLabel};
use crate::tree::SimplexTree;

impl SimplexTree {
    /// `Lk(sigma)`: the faces `tau` disjoint from `sigma` with `tau ∪ sigma`
    /// stored, in enumeration order.
    pub fn compute_link(&self, sigma: &Simplex) -> Result<Vec<Simplex>> {
        let star = self.locate_cofaces(sigma)?;
        let mut link: Vec<Simplex> = star
            .into_iter()
            .filter(|tau| tau.len() > sigma.len())
            .map(|tau| {
                let rest = tau
                    .labels()
                    .iter()
                    .copied()
                    .filter(|&l| !sigma.contains(l))
                    .collect();
                Simplex::from_labels(rest).expect("subword of a sorted word")
            })
            .collect();
        link.sort_by(|a, b| a.filtration_key().cmp(&b.filtration_key()));
        Ok(link)
    }

    /// Whether `sigma` is the only proper coface of `tau`.
    pub fn is_free_pair(&self, tau: &Simplex, sigma: &Simplex) -> Result<bool> {
        for s in [tau, sigma] {
            if !self.contains(s) {
                return Err(Error::NotFound(s.clone()));
            }
        }
        if sigma.len() != tau.len() + 1 || !tau.is_face_of(sigma) {
            return Ok(false);
        }
        Ok(self.coface_count(tau)? == 2)
    }

    /// Removes the free pair `(tau, sigma)`.
    pub fn elementary_collapse(&mut self, tau: &Simplex, sigma: &Simplex) -> Result<()> {
        if !self.is_free_pair(tau, sigma)? {
            return Err(Error::NotFreePair {
                tau: tau.clone(),
                sigma: sigma.clone(),
            });
        }
        // sigma has no coface, so it is a leaf; afterwards so is tau.
        let s = self.search(sigma).expect("checked");
        self.remove_leaf(s);
        let t = self.search(tau).expect("checked");
        self.remove_leaf(t);
        Ok(())
    }

    fn edge(&self, a: VertexLabel, b: VertexLabel) -> Result<Simplex> {
        let edge = Simplex::from_unsorted(vec![a.get(), b.get()])?;
        if edge.len() != 2 || !self.contains(&edge) {
            return Err(Error::NotFound(edge));
        }
        Ok(edge)
    }

    /// Whether `Lk({a,b}) = Lk({a}) ∩ Lk({b})`.
    pub fn check_link_condition(&self, a: VertexLabel, b: VertexLabel) -> Result<bool> {
        let edge = self.edge(a, b)?;
        let link_ab = self.compute_link(&edge)?;
        let link_a = self.compute_link(&Simplex::vertex(a))?;
        let link_b = self.compute_link(&Simplex::vertex(b))?;
        let mut inter = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < link_a.len() && j < link_b.len() {
            match link_a[i].filtration_key().cmp(&link_b[j].filtration_key()) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    inter.push(link_a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(inter == link_ab)
    }

    /// Contracts the edge `{a, b}`: the vertex with the larger label is
    /// merged into the one with the smaller label, so `contract_edge(1, 3)`
    /// and `contract_edge(3, 1)` both remove vertex 3. The result is the
    /// image of the complex under the map sending the removed vertex to
    /// the kept one.
    pub fn contract_edge(&mut self, a: VertexLabel, b: VertexLabel) -> Result<()> {
        self.edge(a, b)?;
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };

        // Deepest first; moved subtrees keep their depth, so the
        // collected handles stay valid until they are processed.
        let mut targets = Vec::new();
        for depth in (1..=self.label_depth_index().max_depth()).rev() {
            targets.extend(self.ring(depth, gone));
        }

        for h in targets {
            // Walk up collecting the labels between `keep` and `gone`.
            let mut between = Vec::new();
            let mut anchor = self.parent(h).expect("non-root");
            let mut has_keep = false;
            while anchor != self.root() {
                let l = self.label(anchor);
                if l == keep {
                    has_keep = true;
                    break;
                }
                if l < keep {
                    break;
                }
                between.push(l);
                anchor = self.parent(anchor).expect("non-root");
            }
            if has_keep {
                self.remove_subtree(h);
                continue;
            }
            // [σ'][σ''][gone] becomes [σ'][keep][σ''].
            let (mut target, _) = self.get_or_add_child(anchor, keep);
            for &l in between.iter().rev() {
                target = self.get_or_add_child(target, l).0;
            }
            self.merge_children(h, target);
            self.remove_leaf(h);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::simplex;
    use crate::{Simplex, SimplexTree, VertexLabel};

    fn full(words: &[&[u32]]) -> SimplexTree {
        let mut t = SimplexTree::new();
        for w in words {
            t.insert_full_simplex(&Simplex::new(w.to_vec()).unwrap())
                .unwrap();
        }
        t
    }

    fn v(l: u32) -> VertexLabel {
        VertexLabel::new(l).unwrap()
    }

    fn words(t: &SimplexTree) -> Vec<Vec<u32>> {
        t.enumerate().iter().map(Simplex::to_u32).collect()
    }

    #[test]
    fn link_of_vertex_in_triangle() {
        let t = full(&[&[1, 2, 3]]);
        let link: Vec<_> = t
            .compute_link(&simplex![1])
            .unwrap()
            .iter()
            .map(Simplex::to_u32)
            .collect();
        assert_eq!(link, vec![vec![2], vec![3], vec![2, 3]]);
        assert!(t.compute_link(&simplex![1, 2, 3]).unwrap().is_empty());
    }

    #[test]
    fn free_pairs() {
        let t = full(&[&[1, 2], &[3]]);
        assert!(t.is_free_pair(&simplex![1], &simplex![1, 2]).unwrap());
        let t = full(&[&[1, 2, 3]]);
        assert!(!t.is_free_pair(&simplex![1], &simplex![1, 2]).unwrap());
        assert!(t.is_free_pair(&simplex![1, 2], &simplex![1, 2, 3]).unwrap());
        assert!(t.is_free_pair(&simplex![4], &simplex![1, 4]).is_err());
    }

    #[test]
    fn collapse_removes_the_pair() {
        let mut t = full(&[&[1, 2], &[3]]);
        let chi = t.euler_characteristic();
        t.elementary_collapse(&simplex![1], &simplex![1, 2])
            .unwrap();
        assert_eq!(words(&t), vec![vec![2], vec![3]]);
        assert_eq!(t.euler_characteristic(), chi);
        t.check_integrity().unwrap();

        let mut t = full(&[&[1, 2, 3]]);
        assert!(t
            .elementary_collapse(&simplex![1], &simplex![1, 2])
            .is_err());
        assert_eq!(t.num_simplices(), 7);
    }

    #[test]
    fn link_condition_cases() {
        let mut hollow = SimplexTree::new();
        for w in [[1, 2], [1, 3], [2, 3]] {
            hollow
                .insert_full_simplex(&Simplex::new(w.to_vec()).unwrap())
                .unwrap();
        }
        assert!(!hollow.check_link_condition(v(1), v(2)).unwrap());
        assert!(full(&[&[1, 2, 3]])
            .check_link_condition(v(1), v(2))
            .unwrap());
        assert!(full(&[&[1, 2, 3], &[1, 2, 4]])
            .check_link_condition(v(2), v(1))
            .unwrap());
        assert!(full(&[&[1, 2], &[3]])
            .check_link_condition(v(1), v(3))
            .is_err());
    }

    #[test]
    fn contract_triangle_edge() {
        let mut t = full(&[&[1, 2, 3]]);
        t.contract_edge(v(1), v(3)).unwrap();
        assert_eq!(words(&t), vec![vec![1], vec![2], vec![1, 2]]);
        t.check_integrity().unwrap();
    }

    #[test]
    fn contract_two_triangles_sharing_the_edge() {
        let mut t = full(&[&[1, 2, 3], &[1, 3, 4]]);
        t.contract_edge(v(3), v(1)).unwrap();
        assert_eq!(
            words(&t),
            vec![vec![1], vec![2], vec![4], vec![1, 2], vec![1, 4]]
        );
        t.check_integrity().unwrap();
    }

    #[test]
    fn contraction_creates_missing_images() {
        // Path 1-3-2: {2,3} maps to {1,2}, which is not yet stored.
        let mut t = full(&[&[1, 3], &[2, 3], &[3, 4, 5]]);
        t.contract_edge(v(1), v(3)).unwrap();
        assert_eq!(
            words(&t),
            vec![
                vec![1],
                vec![2],
                vec![4],
                vec![5],
                vec![1, 2],
                vec![1, 4],
                vec![1, 5],
                vec![4, 5],
                vec![1, 4, 5]
            ]
        );
        t.check_integrity().unwrap();
    }
}
