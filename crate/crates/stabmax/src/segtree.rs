//! Max segment tree over the K slabs of one level: each node keeps the
//! highest segment seen so far that covers the node's whole slab interval.

use crate::object::StabAnswer;

const NIL: u32 = u32::MAX;

/// Static topology of a K-leaf tree (midpoint splits, exactly 2K-1 nodes).
/// Shared by every worker at one level; node indices double as the column
/// order of the parallel reduction matrix.
#[derive(Clone, Debug)]
pub struct TreeShape {
    k: usize,
    lo: Vec<u32>,
    hi: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    leaf_node: Vec<u32>,
}

impl TreeShape {
    pub fn new(k: usize) -> TreeShape {
        assert!(k >= 1);
        let mut shape = TreeShape {
            k,
            lo: Vec::with_capacity(2 * k - 1),
            hi: Vec::with_capacity(2 * k - 1),
            left: Vec::with_capacity(2 * k - 1),
            right: Vec::with_capacity(2 * k - 1),
            leaf_node: vec![0; k],
        };
        shape.build(0, k as u32);
        debug_assert_eq!(shape.node_count(), 2 * k - 1);
        shape
    }

    fn build(&mut self, lo: u32, hi: u32) -> u32 {
        let node = self.lo.len() as u32;
        self.lo.push(lo);
        self.hi.push(hi);
        self.left.push(NIL);
        self.right.push(NIL);
        if hi - lo == 1 {
            self.leaf_node[lo as usize] = node;
        } else {
            let mid = lo + (hi - lo) / 2;
            let l = self.build(lo, mid);
            let r = self.build(mid, hi);
            self.left[node as usize] = l;
            self.right[node as usize] = r;
        }
        node
    }

    pub fn leaves(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.lo.len()
    }

    /// Visits the nodes on the root-to-leaf path of `slab`, root first.
    pub fn walk_path(&self, slab: usize, mut visit: impl FnMut(usize)) {
        debug_assert!(slab < self.k);
        let slab = slab as u32;
        let mut cur = 0u32;
        loop {
            visit(cur as usize);
            let l = self.left[cur as usize];
            if l == NIL {
                return;
            }
            cur = if slab < self.hi[l as usize] {
                l
            } else {
                self.right[cur as usize]
            };
        }
    }
}

#[derive(Clone, Debug)]
pub struct MaxSegTree<'a> {
    shape: &'a TreeShape,
    nodes: Vec<StabAnswer>,
}

impl<'a> MaxSegTree<'a> {
    pub fn new(shape: &'a TreeShape) -> Self {
        MaxSegTree {
            shape,
            nodes: vec![StabAnswer::SENTINEL; shape.node_count()],
        }
    }

    /// Seeds every node, e.g. from a prefix-matrix row.
    pub fn seed(&mut self, values: &[StabAnswer]) {
        assert_eq!(values.len(), self.nodes.len());
        self.nodes.copy_from_slice(values);
    }

    /// MAX-updates the canonical decomposition of the inclusive slab run
    /// `[first, last]`. O(log K) nodes touched.
    pub fn update_span(&mut self, first: usize, last: usize, value: StabAnswer) {
        debug_assert!(first <= last && last < self.shape.k);
        self.update_rec(0, first as u32, last as u32, value);
    }

    fn update_rec(&mut self, node: u32, first: u32, last: u32, value: StabAnswer) {
        let n = node as usize;
        let (lo, hi) = (self.shape.lo[n], self.shape.hi[n]);
        if first <= lo && hi <= last + 1 {
            self.nodes[n] = self.nodes[n].max(value);
            return;
        }
        let l = self.shape.left[n];
        let r = self.shape.right[n];
        debug_assert!(l != NIL);
        if first < self.shape.hi[l as usize] {
            self.update_rec(l, first, last, value);
        }
        if last >= self.shape.lo[r as usize] {
            self.update_rec(r, first, last, value);
        }
    }

    /// MAX of the node values on the root-to-leaf path of `slab`.
    pub fn query_path(&self, slab: usize) -> StabAnswer {
        let mut best = StabAnswer::SENTINEL;
        self.shape.walk_path(slab, |n| best = best.max(self.nodes[n]));
        best
    }

    pub fn nodes(&self) -> &[StabAnswer] {
        &self.nodes
    }
}

/// Per-slab spanning-segment state: the tree, or a flat K-array that updates
/// every spanned slab individually (the deliberately naive mode).
pub(crate) enum SpanState<'a> {
    Tree(MaxSegTree<'a>),
    Array(Vec<StabAnswer>),
}

impl<'a> SpanState<'a> {
    pub fn tree(shape: &'a TreeShape) -> Self {
        SpanState::Tree(MaxSegTree::new(shape))
    }

    pub fn array(k: usize) -> Self {
        SpanState::Array(vec![StabAnswer::SENTINEL; k])
    }

    pub fn update_span(&mut self, first: usize, last: usize, value: StabAnswer) {
        match self {
            SpanState::Tree(t) => t.update_span(first, last, value),
            SpanState::Array(a) => {
                for slot in &mut a[first..=last] {
                    *slot = slot.max(value);
                }
            }
        }
    }

    pub fn query(&self, slab: usize) -> StabAnswer {
        match self {
            SpanState::Tree(t) => t.query_path(slab),
            SpanState::Array(a) => a[slab],
        }
    }

    pub fn tree_nodes(&self) -> Option<&[StabAnswer]> {
        match self {
            SpanState::Tree(t) => Some(t.nodes()),
            SpanState::Array(_) => None,
        }
    }
}
