//! The simplex tree: a trie over sorted label words whose nodes are in
//! bijection with the nonempty faces of a simplicial complex.
//!
//! Nodes live in an arena and are addressed by [`NodeHandle`]. Sibling sets
//! are ordered maps keyed by label, except for the top nodes which are kept
//! in an array indexed by label. Every node at depth `j` storing label `l`
//! is threaded on the circular doubly-linked ring `L_j(l)`, which is what
//! makes coface location and edge contraction output-sensitive.

use std::collections::btree_map;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexLabel};

const NIL: u32 = u32::MAX;
const ROOT: u32 = 0;

/// Opaque identifier of one node of a [`SimplexTree`].
///
/// A handle stays valid until its node is removed, either directly or
/// because it was merged away during an edge contraction. Holding a handle
/// across a mutation that may remove nodes is a logic error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct NodeHandle(u32);

#[derive(Debug, Clone)]
struct Node {
    /// 0 for the root and for released slots.
    label: u32,
    parent: u32,
    depth: u32,
    witness_count: u32,
    prev: u32,
    next: u32,
    children: BTreeMap<VertexLabel, NodeHandle>,
    /// Reserved payload slot; not consumed by any algorithm here.
    filtration: Option<f64>,
}

impl Node {
    fn new(label: u32, parent: u32, depth: u32) -> Self {
        Node {
            label,
            parent,
            depth,
            witness_count: 0,
            prev: NIL,
            next: NIL,
            children: BTreeMap::new(),
            filtration: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Ring {
    head: u32,
    len: u32,
}

const EMPTY_RING: Ring = Ring { head: NIL, len: 0 };

/// Heads and sizes of the label-depth rings `L_j(l)`.
///
/// The ring links themselves are stored on the nodes.
#[derive(Debug, Clone, Default)]
pub struct LabelDepthIndex {
    /// `rings[depth][label]`
    rings: Vec<Vec<Ring>>,
    /// number of nodes per depth
    per_depth: Vec<usize>,
}

impl LabelDepthIndex {
    fn ring(&self, depth: usize, label: u32) -> Ring {
        self.rings
            .get(depth)
            .and_then(|r| r.get(label as usize))
            .copied()
            .unwrap_or(EMPTY_RING)
    }

    fn ring_mut(&mut self, depth: usize, label: u32) -> &mut Ring {
        if self.rings.len() <= depth {
            self.rings.resize_with(depth + 1, Vec::new);
            self.per_depth.resize(depth + 1, 0);
        }
        let row = &mut self.rings[depth];
        if row.len() <= label as usize {
            row.resize(label as usize + 1, EMPTY_RING);
        }
        &mut row[label as usize]
    }

    /// Number of nodes at `depth` storing `label`.
    pub fn ring_len(&self, depth: usize, label: VertexLabel) -> usize {
        self.ring(depth, label.get()).len as usize
    }

    /// Number of nodes at depth strictly greater than `depth` storing `label`.
    pub fn count_deeper(&self, label: VertexLabel, depth: usize) -> usize {
        (depth + 1..self.rings.len())
            .map(|d| self.ring_len(d, label))
            .sum()
    }

    /// Largest depth holding at least one node (0 when empty).
    pub fn max_depth(&self) -> usize {
        self.per_depth.iter().rposition(|&c| c > 0).unwrap_or(0)
    }
}

/// Per-dimension statistics of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeStats {
    /// `faces_per_dimension[d]` is the number of `d`-simplices.
    pub faces_per_dimension: Vec<usize>,
    /// Maximal number of children of a non-root node.
    pub max_outdegree: usize,
    pub num_simplices: usize,
}

/// Outcome of [`SimplexTree::insert_simplex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    Inserted(NodeHandle),
    AlreadyPresent(NodeHandle),
}

impl Insertion {
    pub fn handle(self) -> NodeHandle {
        match self {
            Insertion::Inserted(h) | Insertion::AlreadyPresent(h) => h,
        }
    }
}

/// A simplicial complex stored as a simplex tree.
///
/// Mutation requires `&mut self`; read-only queries can run concurrently.
#[derive(Debug, Clone)]
pub struct SimplexTree {
    nodes: Vec<Node>,
    free: Vec<u32>,
    /// Top nodes indexed by label; `NIL` when the vertex is absent.
    top: Vec<u32>,
    index: LabelDepthIndex,
    node_count: usize,
    counters: bool,
    node_limit: Option<usize>,
}

impl Default for SimplexTree {
    fn default() -> Self {
        Self::new()
    }
}

impl SimplexTree {
    pub fn new() -> Self {
        SimplexTree {
            nodes: vec![Node::new(0, NIL, 0)],
            free: Vec::new(),
            top: Vec::new(),
            index: LabelDepthIndex::default(),
            node_count: 0,
            counters: false,
            node_limit: None,
        }
    }

    /// Number of nonempty faces stored.
    pub fn num_simplices(&self) -> usize {
        self.node_count
    }

    pub fn is_empty(&self) -> bool {
        self.node_count == 0
    }

    pub fn num_vertices(&self) -> usize {
        self.index.per_depth.get(1).copied().unwrap_or(0)
    }

    /// Dimension of the complex, −1 when empty.
    pub fn dimension(&self) -> isize {
        self.index.max_depth() as isize - 1
    }

    pub fn label_depth_index(&self) -> &LabelDepthIndex {
        &self.index
    }

    /// Aborts long-running builders once more than `limit` faces are stored.
    pub fn set_node_limit(&mut self, limit: Option<usize>) {
        self.node_limit = limit;
    }

    pub(crate) fn check_node_limit(&self) -> Result<()> {
        match self.node_limit {
            Some(limit) if self.node_count > limit => Err(Error::NodeLimit(limit)),
            _ => Ok(()),
        }
    }

    pub fn has_witness_counters(&self) -> bool {
        self.counters
    }

    pub(crate) fn enable_witness_counters(&mut self) {
        self.counters = true;
    }

    // ----------------------------------------------------------------
    // Node accessors
    // ----------------------------------------------------------------

    /// Handle of the root, which stands for the empty face.
    pub fn root(&self) -> NodeHandle {
        NodeHandle(ROOT)
    }

    fn node(&self, h: NodeHandle) -> &Node {
        let n = &self.nodes[h.0 as usize];
        debug_assert!(h.0 == ROOT || n.label != 0, "stale node handle");
        n
    }

    fn node_mut(&mut self, h: NodeHandle) -> &mut Node {
        &mut self.nodes[h.0 as usize]
    }

    pub fn label(&self, h: NodeHandle) -> VertexLabel {
        VertexLabel::new_unchecked(self.node(h).label)
    }

    /// Depth of the node: dimension of its simplex plus one (0 for the root).
    pub fn depth(&self, h: NodeHandle) -> usize {
        self.node(h).depth as usize
    }

    /// Parent node; `None` only for the root.
    pub fn parent(&self, h: NodeHandle) -> Option<NodeHandle> {
        let p = self.node(h).parent;
        (p != NIL).then_some(NodeHandle(p))
    }

    pub fn witness_count(&self, h: NodeHandle) -> u32 {
        self.node(h).witness_count
    }

    pub(crate) fn increment_witness(&mut self, h: NodeHandle) {
        self.node_mut(h).witness_count += 1;
    }

    pub(crate) fn decrement_witness(&mut self, h: NodeHandle) -> u32 {
        let n = self.node_mut(h);
        n.witness_count = n.witness_count.saturating_sub(1);
        n.witness_count
    }

    pub fn filtration(&self, h: NodeHandle) -> Option<f64> {
        self.node(h).filtration
    }

    pub fn set_filtration(&mut self, h: NodeHandle, value: Option<f64>) {
        self.node_mut(h).filtration = value;
    }

    pub fn num_children(&self, h: NodeHandle) -> usize {
        if h.0 == ROOT {
            self.num_vertices()
        } else {
            self.node(h).children.len()
        }
    }

    pub fn child(&self, h: NodeHandle, label: VertexLabel) -> Option<NodeHandle> {
        if h.0 == ROOT {
            match self.top.get(label.get() as usize) {
                Some(&t) if t != NIL => Some(NodeHandle(t)),
                _ => None,
            }
        } else {
            self.node(h).children.get(&label).copied()
        }
    }

    /// Children of `h` in increasing label order.
    pub fn children(&self, h: NodeHandle) -> Children<'_> {
        if h.0 == ROOT {
            Children::Top(self.top.iter().enumerate())
        } else {
            Children::Map(self.node(h).children.iter())
        }
    }

    /// Word of the simplex represented by `h`.
    pub fn simplex(&self, h: NodeHandle) -> Simplex {
        Simplex::from_sorted_unchecked(self.word(h))
    }

    fn word(&self, h: NodeHandle) -> Vec<VertexLabel> {
        let mut labels = Vec::with_capacity(self.depth(h));
        let mut cur = h.0;
        while cur != ROOT {
            let n = &self.nodes[cur as usize];
            labels.push(VertexLabel::new_unchecked(n.label));
            cur = n.parent;
        }
        labels.reverse();
        labels
    }

    /// Nodes on the path from the top node down to `h`, inclusive.
    fn path(&self, h: NodeHandle) -> Vec<NodeHandle> {
        let mut path = Vec::with_capacity(self.depth(h));
        let mut cur = h.0;
        while cur != ROOT {
            path.push(NodeHandle(cur));
            cur = self.nodes[cur as usize].parent;
        }
        path.reverse();
        path
    }

    /// Members of the ring `L_depth(label)`.
    pub fn ring(&self, depth: usize, label: VertexLabel) -> RingIter<'_> {
        let ring = self.index.ring(depth, label.get());
        RingIter {
            tree: self,
            cur: ring.head,
            remaining: ring.len,
        }
    }

    /// All nodes at `depth`, grouped by label.
    pub fn nodes_at_depth(&self, depth: usize) -> impl Iterator<Item = NodeHandle> + '_ {
        let labels = self.index.rings.get(depth).map_or(0, Vec::len) as u32;
        (1..labels).flat_map(move |l| self.ring(depth, VertexLabel::new_unchecked(l)))
    }

    // ----------------------------------------------------------------
    // Low-level structure edits
    // ----------------------------------------------------------------

    fn alloc(&mut self, label: u32, parent: u32, depth: u32) -> u32 {
        match self.free.pop() {
            Some(i) => {
                self.nodes[i as usize] = Node::new(label, parent, depth);
                i
            }
            None => {
                self.nodes.push(Node::new(label, parent, depth));
                (self.nodes.len() - 1) as u32
            }
        }
    }

    fn ring_link(&mut self, i: u32) {
        let (depth, label) = {
            let n = &self.nodes[i as usize];
            (n.depth as usize, n.label)
        };
        let ring = self.index.ring_mut(depth, label);
        let head = ring.head;
        ring.len += 1;
        if head == NIL {
            ring.head = i;
            let n = &mut self.nodes[i as usize];
            n.prev = i;
            n.next = i;
        } else {
            let tail = self.nodes[head as usize].prev;
            self.nodes[tail as usize].next = i;
            self.nodes[head as usize].prev = i;
            let n = &mut self.nodes[i as usize];
            n.prev = tail;
            n.next = head;
        }
        self.index.per_depth[depth] += 1;
    }

    fn ring_unlink(&mut self, i: u32) {
        let (depth, label, prev, next) = {
            let n = &self.nodes[i as usize];
            (n.depth as usize, n.label, n.prev, n.next)
        };
        let ring = self.index.ring_mut(depth, label);
        ring.len -= 1;
        if ring.len == 0 {
            ring.head = NIL;
        } else {
            if ring.head == i {
                ring.head = next;
            }
            self.nodes[prev as usize].next = next;
            self.nodes[next as usize].prev = prev;
        }
        self.index.per_depth[depth] -= 1;
        let n = &mut self.nodes[i as usize];
        n.prev = NIL;
        n.next = NIL;
    }

    /// Appends a new child; the caller guarantees `label` is absent among
    /// the children and larger than the parent's label.
    pub(crate) fn add_child(&mut self, parent: NodeHandle, label: VertexLabel) -> NodeHandle {
        debug_assert!(self.child(parent, label).is_none());
        debug_assert!(parent.0 == ROOT || self.node(parent).label < label.get());
        let depth = self.node(parent).depth + 1;
        let i = self.alloc(label.get(), parent.0, depth);
        if parent.0 == ROOT {
            let l = label.get() as usize;
            if self.top.len() <= l {
                self.top.resize(l + 1, NIL);
            }
            self.top[l] = i;
        } else {
            self.node_mut(parent).children.insert(label, NodeHandle(i));
        }
        self.ring_link(i);
        self.node_count += 1;
        NodeHandle(i)
    }

    pub(crate) fn get_or_add_child(
        &mut self,
        parent: NodeHandle,
        label: VertexLabel,
    ) -> (NodeHandle, bool) {
        match self.child(parent, label) {
            Some(h) => (h, false),
            None => (self.add_child(parent, label), true),
        }
    }

    /// Unlinks `i` from its ring and returns its slot to the free list.
    /// The node must already be detached from its parent and childless.
    fn release(&mut self, i: u32) {
        self.ring_unlink(i);
        let n = &mut self.nodes[i as usize];
        n.label = 0;
        n.parent = NIL;
        n.children = BTreeMap::new();
        self.free.push(i);
        self.node_count -= 1;
    }

    fn detach(&mut self, h: NodeHandle) {
        let (parent, label) = {
            let n = self.node(h);
            (n.parent, n.label)
        };
        if parent == ROOT {
            self.top[label as usize] = NIL;
        } else {
            self.nodes[parent as usize]
                .children
                .remove(&VertexLabel::new_unchecked(label));
        }
    }

    /// Removes a leaf node.
    pub(crate) fn remove_leaf(&mut self, h: NodeHandle) {
        debug_assert!(self.node(h).children.is_empty());
        self.detach(h);
        self.release(h.0);
    }

    /// Removes `h` and its whole subtree; returns the number of nodes removed.
    pub(crate) fn remove_subtree(&mut self, h: NodeHandle) -> usize {
        self.detach(h);
        let mut stack = vec![h.0];
        let mut removed = 0;
        while let Some(i) = stack.pop() {
            let children = std::mem::take(&mut self.nodes[i as usize].children);
            stack.extend(children.values().map(|c| c.0));
            self.release(i);
            removed += 1;
        }
        removed
    }

    /// Moves every child subtree of `src` under `dst`, merging node by node
    /// with subtrees already present. Both nodes must have the same depth.
    pub(crate) fn merge_children(&mut self, src: NodeHandle, dst: NodeHandle) {
        debug_assert_eq!(self.depth(src), self.depth(dst));
        let children = std::mem::take(&mut self.node_mut(src).children);
        for (label, child) in children {
            match self.child(dst, label) {
                Some(existing) => {
                    self.merge_children(child, existing);
                    self.release(child.0);
                }
                None => {
                    self.node_mut(child).parent = dst.0;
                    self.node_mut(dst).children.insert(label, child);
                }
            }
        }
    }

    // ----------------------------------------------------------------
    // Search and insertion
    // ----------------------------------------------------------------

    /// Follows `labels` downwards from `start`.
    pub fn find_from(&self, start: NodeHandle, labels: &[VertexLabel]) -> Option<NodeHandle> {
        labels.iter().try_fold(start, |cur, &l| self.child(cur, l))
    }

    /// Node representing `sigma`, if stored. The empty face is never stored.
    pub fn search(&self, sigma: &Simplex) -> Option<NodeHandle> {
        if sigma.is_empty() {
            return None;
        }
        self.find_from(self.root(), sigma.labels())
    }

    /// Like [`search`](Self::search) but validates a raw word first.
    pub fn search_word(&self, word: &[u32]) -> Result<Option<NodeHandle>> {
        let sigma = Simplex::new(word.to_vec())?;
        if sigma.is_empty() {
            return Err(Error::EmptySimplex);
        }
        Ok(self.search(&sigma))
    }

    pub fn contains(&self, sigma: &Simplex) -> bool {
        self.search(sigma).is_some()
    }

    /// Inserts a single simplex whose facets are all present.
    ///
    /// Insertions that would break closure under faces are rejected, so the
    /// tree always represents a simplicial complex.
    pub fn insert_simplex(&mut self, sigma: &Simplex) -> Result<Insertion> {
        let labels = sigma.labels();
        let Some((&last, prefix)) = labels.split_last() else {
            return Err(Error::EmptySimplex);
        };
        if let Some(h) = self.search(sigma) {
            return Ok(Insertion::AlreadyPresent(h));
        }
        for facet in sigma.facets().filter(|f| !f.is_empty()) {
            if !self.contains(&facet) {
                return Err(Error::ClosureViolation {
                    simplex: sigma.clone(),
                    missing: facet,
                });
            }
        }
        let parent = self
            .find_from(self.root(), prefix)
            .expect("prefix is a facet and was checked");
        Ok(Insertion::Inserted(self.add_child(parent, last)))
    }

    /// Inserts `sigma` together with all its faces; returns how many nodes
    /// were created.
    pub fn insert_full_simplex(&mut self, sigma: &Simplex) -> Result<usize> {
        if sigma.is_empty() {
            return Err(Error::EmptySimplex);
        }
        Ok(self.insert_full_at(self.root(), sigma.labels()))
    }

    fn insert_full_at(&mut self, parent: NodeHandle, suffix: &[VertexLabel]) -> usize {
        let mut created = 0;
        for (i, &l) in suffix.iter().enumerate() {
            let (child, new) = self.get_or_add_child(parent, l);
            created += usize::from(new);
            created += self.insert_full_at(child, &suffix[i + 1..]);
        }
        created
    }

    // ----------------------------------------------------------------
    // Cofaces and facets
    // ----------------------------------------------------------------

    /// Whether the path from `h` to the root spells a word of the form
    /// `[* l0 * l1 * ... * lj]`, where `lj` is the label stored at `h`.
    fn path_contains(&self, h: NodeHandle, tau: &[VertexLabel]) -> bool {
        let mut need = tau.len() - 1;
        let mut cur = self.node(h).parent;
        while need > 0 {
            if cur == ROOT {
                return false;
            }
            let n = &self.nodes[cur as usize];
            let target = tau[need - 1].get();
            if n.label == target {
                need -= 1;
            } else if n.label < target {
                return false;
            }
            cur = n.parent;
        }
        true
    }

    /// Roots of the disjoint subtrees whose nodes are exactly the cofaces of
    /// `tau` (including `tau` itself).
    pub fn coface_roots(&self, tau: &Simplex) -> Result<Vec<NodeHandle>> {
        if tau.is_empty() {
            return Err(Error::EmptySimplex);
        }
        if !self.contains(tau) {
            return Err(Error::NotFound(tau.clone()));
        }
        Ok(self.coface_roots_unchecked(tau.labels()))
    }

    fn coface_roots_unchecked(&self, tau: &[VertexLabel]) -> Vec<NodeHandle> {
        let last = *tau.last().expect("nonempty");
        let mut roots = Vec::new();
        for depth in tau.len()..=self.index.max_depth() {
            roots.extend(
                self.ring(depth, last)
                    .filter(|&h| self.path_contains(h, tau)),
            );
        }
        roots
    }

    /// All nodes of the subtree rooted at `h`, in preorder.
    pub fn subtree(&self, h: NodeHandle) -> Vec<NodeHandle> {
        let mut out = Vec::new();
        let mut stack = vec![h];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.node(n).children.values().rev().copied());
        }
        out
    }

    fn subtree_size(&self, h: NodeHandle) -> usize {
        1 + self
            .node(h)
            .children
            .values()
            .map(|&c| self.subtree_size(c))
            .sum::<usize>()
    }

    /// The star of `tau`: every stored simplex containing it, `tau` included,
    /// in enumeration order.
    pub fn locate_cofaces(&self, tau: &Simplex) -> Result<Vec<Simplex>> {
        let mut out: Vec<Simplex> = self
            .coface_roots(tau)?
            .into_iter()
            .flat_map(|r| self.subtree(r))
            .map(|h| self.simplex(h))
            .collect();
        out.sort_by(|a, b| a.filtration_key().cmp(&b.filtration_key()));
        Ok(out)
    }

    /// Number of cofaces of `tau`, itself included.
    pub fn coface_count(&self, tau: &Simplex) -> Result<usize> {
        Ok(self
            .coface_roots(tau)?
            .into_iter()
            .map(|r| self.subtree_size(r))
            .sum())
    }

    /// Locates facet `i` of the word spelled by `path` (node handles from the
    /// top node down) extended by `word[path.len()..]`: from the node of the
    /// prefix of length `i`, search down for the labels after position `i`.
    fn facet_lookup(
        &self,
        path: &[NodeHandle],
        word: &[VertexLabel],
        i: usize,
    ) -> Option<NodeHandle> {
        let start = if i == 0 { self.root() } else { path[i - 1] };
        self.find_from(start, &word[i + 1..])
    }

    /// Facets of the simplex stored at `h`, located by walking up to each
    /// ancestor and searching down for the remaining suffix. Vertices have
    /// no nonempty facet.
    pub fn facets_of(&self, h: NodeHandle) -> Vec<NodeHandle> {
        let path = self.path(h);
        if path.len() <= 1 {
            return Vec::new();
        }
        let word: Vec<VertexLabel> = path.iter().map(|&n| self.label(n)).collect();
        (0..word.len())
            .filter_map(|i| self.facet_lookup(&path, &word, i))
            .collect()
    }

    /// Whether every facet of the word `[father] · [last]` is stored, where
    /// `father` is a stored node and `last` exceeds its label. The word
    /// itself need not be stored.
    pub(crate) fn facets_present(&self, father: NodeHandle, last: VertexLabel) -> bool {
        if father.0 == ROOT {
            return true;
        }
        let path = self.path(father);
        let mut word: Vec<VertexLabel> = path.iter().map(|&n| self.label(n)).collect();
        word.push(last);
        // facet without `last` is `father` itself
        (0..path.len()).all(|i| self.facet_lookup(&path, &word, i).is_some())
    }

    /// Handles of the facets of `sigma`.
    pub fn locate_facets(&self, sigma: &Simplex) -> Result<Vec<NodeHandle>> {
        let h = self
            .search(sigma)
            .ok_or_else(|| Error::NotFound(sigma.clone()))?;
        Ok(self.facets_of(h))
    }

    /// Removes `sigma` and all its cofaces; returns how many were removed.
    pub fn remove_simplex_and_cofaces(&mut self, sigma: &Simplex) -> Result<usize> {
        let roots = self.coface_roots(sigma)?;
        Ok(roots.into_iter().map(|r| self.remove_subtree(r)).sum())
    }

    /// A simplex is maximal when it has no proper coface.
    pub fn is_maximal(&self, h: NodeHandle) -> bool {
        if !self.node(h).children.is_empty() {
            return false;
        }
        // A proper coface of one more dimension that is not a child of `h`
        // ends with the same label, one level deeper.
        let word = self.word(h);
        let last = *word.last().expect("non-root node");
        !self
            .ring(word.len() + 1, last)
            .any(|c| self.path_contains(c, &word))
    }

    /// Number of maximal simplices. Every non-maximal face is a facet of
    /// some stored face, so one pass marking facets finds them all.
    pub fn count_maximal(&self) -> usize {
        let mut covered = vec![false; self.nodes.len()];
        let mut total = 0;
        for d in 1..=self.index.max_depth() {
            for h in self.nodes_at_depth(d) {
                total += 1;
                for f in self.facets_of(h) {
                    covered[f.0 as usize] = true;
                }
            }
        }
        total - covered.iter().filter(|&&c| c).count()
    }

    // ----------------------------------------------------------------
    // Traversal and statistics
    // ----------------------------------------------------------------

    /// Visits every stored simplex in preorder (lexicographic word order).
    pub fn for_each_simplex<F: FnMut(&[VertexLabel], NodeHandle)>(&self, mut f: F) {
        let mut word = Vec::new();
        for (label, h) in self.children(self.root()) {
            word.push(label);
            self.visit(h, &mut word, &mut f);
            word.pop();
        }
    }

    fn visit<F: FnMut(&[VertexLabel], NodeHandle)>(
        &self,
        h: NodeHandle,
        word: &mut Vec<VertexLabel>,
        f: &mut F,
    ) {
        f(word, h);
        for (&label, &c) in &self.node(h).children {
            word.push(label);
            self.visit(c, word, f);
            word.pop();
        }
    }

    /// Every stored simplex exactly once, by increasing dimension and
    /// lexicographically within a dimension. Every prefix of the output is
    /// a subcomplex.
    pub fn enumerate(&self) -> Vec<Simplex> {
        let mut buckets: Vec<Vec<Simplex>> = vec![Vec::new(); self.index.max_depth() + 1];
        self.for_each_simplex(|word, _| {
            buckets[word.len()].push(Simplex::from_sorted_unchecked(word.to_vec()))
        });
        buckets.into_iter().flatten().collect()
    }

    pub fn faces_per_dimension(&self) -> Vec<usize> {
        let d = self.index.max_depth();
        self.index
            .per_depth
            .get(1..=d)
            .map(<[usize]>::to_vec)
            .unwrap_or_default()
    }

    pub fn stats(&self) -> TreeStats {
        let max_outdegree = self
            .nodes
            .iter()
            .skip(1)
            .filter(|n| n.label != 0)
            .map(|n| n.children.len())
            .max()
            .unwrap_or(0);
        TreeStats {
            faces_per_dimension: self.faces_per_dimension(),
            max_outdegree,
            num_simplices: self.node_count,
        }
    }

    /// Alternating sum of the per-dimension face counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces_per_dimension()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Checks every structural invariant by brute force and returns a
    /// description of each violation found.
    pub fn check_integrity(&self) -> std::result::Result<(), Vec<String>> {
        let mut errors = Vec::new();
        let mut live = 0usize;
        let mut by_ring: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for (i, n) in self.nodes.iter().enumerate().skip(1) {
            if n.label == 0 {
                continue;
            }
            live += 1;
            *by_ring.entry((n.depth, n.label)).or_default() += 1;
            let h = NodeHandle(i as u32);
            let p = &self.nodes[n.parent as usize];
            if n.parent != ROOT && (p.label == 0 || p.label >= n.label) {
                errors.push(format!("labels do not increase along the path at node {i}"));
            }
            if n.depth != p.depth + 1 {
                errors.push(format!("depth mismatch at node {i}"));
            }
            if self.child(NodeHandle(n.parent), VertexLabel::new_unchecked(n.label)) != Some(h) {
                errors.push(format!("node {i} is not registered with its parent"));
            }
            for (l, c) in &n.children {
                if self.nodes[c.0 as usize].label != l.get()
                    || self.nodes[c.0 as usize].parent != i as u32
                {
                    errors.push(format!("child map of node {i} is inconsistent"));
                }
            }
            if self.nodes[n.next as usize].prev != i as u32 {
                errors.push(format!("ring links broken at node {i}"));
            }
            let expected = n.depth as usize - 1;
            let found = self.facets_of(h).len();
            if n.depth > 1 && found != expected + 1 {
                errors.push(format!(
                    "closure violated: {} has {found} of {} facets",
                    self.simplex(h),
                    expected + 1
                ));
            }
        }
        if live != self.node_count {
            errors.push(format!(
                "node_count {} but {live} live nodes",
                self.node_count
            ));
        }
        for (&(d, l), &count) in &by_ring {
            let members: Vec<_> = self
                .ring(d as usize, VertexLabel::new_unchecked(l))
                .collect();
            if members.len() != count
                || members.iter().any(|&m| {
                    let n = self.node(m);
                    n.depth != d || n.label != l
                })
            {
                errors.push(format!("ring L_{d}({l}) does not match the tree"));
            }
        }
        let ring_total: usize = self
            .index
            .rings
            .iter()
            .flat_map(|row| row.iter())
            .map(|r| r.len as usize)
            .sum();
        if ring_total != live {
            errors.push(format!("rings hold {ring_total} nodes, tree holds {live}"));
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

/// Iterator over the children of a node, in increasing label order.
pub enum Children<'a> {
    Top(std::iter::Enumerate<std::slice::Iter<'a, u32>>),
    Map(btree_map::Iter<'a, VertexLabel, NodeHandle>),
}

impl Iterator for Children<'_> {
    type Item = (VertexLabel, NodeHandle);

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            Children::Top(it) => it
                .find(|(_, &h)| h != NIL)
                .map(|(l, &h)| (VertexLabel::new_unchecked(l as u32), NodeHandle(h))),
            Children::Map(it) => it.next().map(|(&l, &h)| (l, h)),
        }
    }
}

/// Iterator over the members of one label-depth ring.
pub struct RingIter<'a> {
    tree: &'a SimplexTree,
    cur: u32,
    remaining: u32,
}

impl Iterator for RingIter<'_> {
    type Item = NodeHandle;

    fn next(&mut self) -> Option<NodeHandle> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let h = self.cur;
        self.cur = self.tree.nodes[h as usize].next;
        Some(NodeHandle(h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    fn full(words: &[&[u32]]) -> SimplexTree {
        let mut t = SimplexTree::new();
        for w in words {
            t.insert_full_simplex(&Simplex::new(w.to_vec()).unwrap())
                .unwrap();
        }
        t
    }

    fn words(v: Vec<Simplex>) -> Vec<Vec<u32>> {
        v.iter().map(Simplex::to_u32).collect()
    }

    #[test]
    fn search_finds_inserted_words_only() {
        let t = full(&[&[1, 2, 3]]);
        assert!(t.search(&simplex![1, 2, 3]).is_some());
        assert!(t.search(&simplex![1, 4]).is_none());
        assert!(t.search_word(&[2, 1]).is_err());
        assert!(t.search_word(&[]).is_err());
    }

    #[test]
    fn insert_simplex_enforces_closure() {
        let mut t = SimplexTree::new();
        assert!(matches!(
            t.insert_simplex(&simplex![2]).unwrap(),
            Insertion::Inserted(_)
        ));
        assert_eq!(t.num_simplices(), 1);
        t.insert_simplex(&simplex![1]).unwrap();
        assert!(matches!(
            t.insert_simplex(&simplex![1, 2]).unwrap(),
            Insertion::Inserted(_)
        ));
        assert!(matches!(
            t.insert_simplex(&simplex![1, 2]).unwrap(),
            Insertion::AlreadyPresent(_)
        ));
        let err = t.insert_simplex(&simplex![1, 3]).unwrap_err();
        assert!(
            matches!(err, Error::ClosureViolation { ref missing, .. } if *missing == simplex![3])
        );
        assert_eq!(t.num_simplices(), 3);
    }

    #[test]
    fn insert_full_counts_new_nodes() {
        let mut t = SimplexTree::new();
        assert_eq!(t.insert_full_simplex(&simplex![1, 2, 3]).unwrap(), 7);
        assert_eq!(t.insert_full_simplex(&simplex![1, 2, 3, 4]).unwrap(), 8);
        assert_eq!(t.insert_full_simplex(&simplex![5]).unwrap(), 1);
        assert_eq!(t.num_simplices(), 16);
    }

    #[test]
    fn cofaces_of_edge_in_triangle() {
        let t = full(&[&[1, 2, 3]]);
        assert_eq!(
            words(t.locate_cofaces(&simplex![1, 2]).unwrap()),
            vec![vec![1, 2], vec![1, 2, 3]]
        );
        assert_eq!(
            words(t.locate_cofaces(&simplex![1, 2, 3]).unwrap()),
            vec![vec![1, 2, 3]]
        );
        assert_eq!(t.coface_count(&simplex![3]).unwrap(), 4);
        assert!(matches!(
            t.locate_cofaces(&simplex![4]),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn facets_of_tetrahedron_follow_the_figure() {
        // Complex on 10 vertices with tetrahedron {2,3,4,5}.
        let t = full(&[&[1, 6], &[2, 3, 4, 5], &[5, 7, 8], &[6, 8, 9], &[10]]);
        let facets: Vec<Vec<u32>> = t
            .locate_facets(&simplex![2, 3, 4, 5])
            .unwrap()
            .into_iter()
            .map(|h| t.simplex(h).to_u32())
            .collect();
        assert_eq!(
            facets,
            vec![vec![3, 4, 5], vec![2, 4, 5], vec![2, 3, 5], vec![2, 3, 4]]
        );
        assert!(t.locate_facets(&simplex![7]).unwrap().is_empty());
        assert!(t.locate_facets(&simplex![2, 9]).is_err());
    }

    #[test]
    fn remove_vertex_removes_star() {
        let mut t = full(&[&[1, 2, 3]]);
        assert_eq!(t.remove_simplex_and_cofaces(&simplex![1]).unwrap(), 4);
        assert_eq!(words(t.enumerate()), vec![vec![2], vec![3], vec![2, 3]]);
        assert_eq!(t.remove_simplex_and_cofaces(&simplex![2, 3]).unwrap(), 1);
        t.check_integrity().unwrap();
    }

    #[test]
    fn enumerate_is_dimension_major() {
        let t = full(&[&[1, 2, 3]]);
        assert_eq!(
            words(t.enumerate()),
            vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
        assert_eq!(
            words(full(&[&[1, 2]]).enumerate()),
            vec![vec![1], vec![2], vec![1, 2]]
        );
    }

    #[test]
    fn stats_of_triangle_and_empty() {
        let empty = SimplexTree::new();
        assert_eq!(empty.stats(), TreeStats::default());
        assert_eq!(empty.dimension(), -1);
        let t = full(&[&[1, 2, 3]]);
        let s = t.stats();
        assert_eq!(s.faces_per_dimension, vec![3, 3, 1]);
        assert_eq!(s.max_outdegree, 2);
        assert_eq!(s.num_simplices, 7);
        assert_eq!(t.euler_characteristic(), 1);
    }

    #[test]
    fn rings_track_label_depth() {
        let t = full(&[&[1, 2, 3], &[2, 3, 4]]);
        let l3 = VertexLabel::new(3).unwrap();
        assert_eq!(t.label_depth_index().ring_len(2, l3), 2);
        assert_eq!(t.label_depth_index().ring_len(3, l3), 1);
        assert_eq!(t.label_depth_index().count_deeper(l3, 0), 4);
        t.check_integrity().unwrap();
    }

    #[test]
    fn maximal_faces() {
        let t = full(&[&[1, 2, 3], &[2, 4], &[5]]);
        assert_eq!(t.count_maximal(), 3);
        let h = t.search(&simplex![2, 3]).unwrap();
        assert!(!t.is_maximal(h));
    }

    #[test]
    fn slots_are_reused_after_removal() {
        let mut t = full(&[&[1, 2, 3]]);
        t.remove_simplex_and_cofaces(&simplex![2]).unwrap();
        t.insert_full_simplex(&simplex![2, 3, 4]).unwrap();
        t.check_integrity().unwrap();
        assert_eq!(t.num_simplices(), 9);
    }
}
