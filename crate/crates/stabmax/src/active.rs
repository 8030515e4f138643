//! Ordered set of active segments for the plane sweep: an AVL tree keyed by
//! `(y, id)` with parent pointers and an id-to-node handle map.
//!
//! Inserts and predecessor queries descend the tree and cost one counted key
//! comparison per node visited. Removals go through the handle map and the
//! successor is found by pointer walking, so a delete costs zero key
//! comparisons; rotations never compare keys.

use std::collections::HashMap;

use crate::metrics;
use crate::object::StabAnswer;

const NIL: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    y: f64,
    id: u32,
    left: u32,
    right: u32,
    parent: u32,
    height: i8,
}

pub(crate) struct ActiveSet {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    len: usize,
    max_len: usize,
    handles: HashMap<u32, u32>,
}

impl ActiveSet {
    pub fn with_capacity(capacity: usize) -> Self {
        ActiveSet {
            nodes: Vec::with_capacity(capacity),
            free: Vec::new(),
            root: NIL,
            len: 0,
            max_len: 0,
            handles: HashMap::with_capacity(capacity),
        }
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn alloc(&mut self, y: f64, id: u32) -> u32 {
        let node = Node {
            y,
            id,
            left: NIL,
            right: NIL,
            parent: NIL,
            height: 1,
        };
        if let Some(slot) = self.free.pop() {
            self.nodes[slot as usize] = node;
            slot
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    #[inline]
    fn node(&self, n: u32) -> &Node {
        &self.nodes[n as usize]
    }

    #[inline]
    fn node_mut(&mut self, n: u32) -> &mut Node {
        &mut self.nodes[n as usize]
    }

    fn height(&self, n: u32) -> i8 {
        if n == NIL {
            0
        } else {
            self.node(n).height
        }
    }

    fn update_height(&mut self, n: u32) {
        let h = 1 + self.height(self.node(n).left).max(self.height(self.node(n).right));
        self.node_mut(n).height = h;
    }

    fn balance(&self, n: u32) -> i8 {
        self.height(self.node(n).left) - self.height(self.node(n).right)
    }

    // Replaces `old` with `new` as the child of `old`'s parent (or as root).
    fn replace_child(&mut self, old: u32, new: u32) {
        let p = self.node(old).parent;
        if new != NIL {
            self.node_mut(new).parent = p;
        }
        if p == NIL {
            self.root = new;
        } else if self.node(p).left == old {
            self.node_mut(p).left = new;
        } else {
            self.node_mut(p).right = new;
        }
    }

    fn rotate_left(&mut self, x: u32) -> u32 {
        let y = self.node(x).right;
        let t = self.node(y).left;
        self.replace_child(x, y);
        self.node_mut(y).left = x;
        self.node_mut(x).parent = y;
        self.node_mut(x).right = t;
        if t != NIL {
            self.node_mut(t).parent = x;
        }
        self.update_height(x);
        self.update_height(y);
        y
    }

    fn rotate_right(&mut self, x: u32) -> u32 {
        let y = self.node(x).left;
        let t = self.node(y).right;
        self.replace_child(x, y);
        self.node_mut(y).right = x;
        self.node_mut(x).parent = y;
        self.node_mut(x).left = t;
        if t != NIL {
            self.node_mut(t).parent = x;
        }
        self.update_height(x);
        self.update_height(y);
        y
    }

    fn rebalance_up(&mut self, mut n: u32) {
        while n != NIL {
            self.update_height(n);
            let bf = self.balance(n);
            if bf > 1 {
                if self.balance(self.node(n).left) < 0 {
                    self.rotate_left(self.node(n).left);
                }
                n = self.rotate_right(n);
            } else if bf < -1 {
                if self.balance(self.node(n).right) > 0 {
                    self.rotate_right(self.node(n).right);
                }
                n = self.rotate_left(n);
            }
            n = self.node(n).parent;
        }
    }

    pub fn insert(&mut self, y: f64, id: u32) {
        let new = self.alloc(y, id);
        self.handles.insert(id, new);
        self.len += 1;
        self.max_len = self.max_len.max(self.len);

        if self.root == NIL {
            self.root = new;
            return;
        }
        let mut cur = self.root;
        loop {
            metrics::count_comparisons(1);
            let node = *self.node(cur);
            let less = match y.total_cmp(&node.y) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => id < node.id,
            };
            let next = if less { node.left } else { node.right };
            if next == NIL {
                if less {
                    self.node_mut(cur).left = new;
                } else {
                    self.node_mut(cur).right = new;
                }
                self.node_mut(new).parent = cur;
                break;
            }
            cur = next;
        }
        self.rebalance_up(self.node(new).parent);
    }

    pub fn remove(&mut self, id: u32) {
        let n = self
            .handles
            .remove(&id)
            .expect("removing a segment that is not active");
        self.len -= 1;

        let (left, right) = (self.node(n).left, self.node(n).right);
        let doomed = if left != NIL && right != NIL {
            // Two children: move the successor's key into n, then unlink the
            // successor (which has no left child).
            let mut s = right;
            while self.node(s).left != NIL {
                s = self.node(s).left;
            }
            let (sy, sid) = (self.node(s).y, self.node(s).id);
            let node = self.node_mut(n);
            node.y = sy;
            node.id = sid;
            self.handles.insert(sid, n);
            s
        } else {
            n
        };

        let child = if self.node(doomed).left != NIL {
            self.node(doomed).left
        } else {
            self.node(doomed).right
        };
        let p = self.node(doomed).parent;
        self.replace_child(doomed, child);
        self.free.push(doomed);
        self.rebalance_up(p);
    }

    /// Highest segment strictly below `y`, with the usual larger-id tie rule.
    pub fn max_below(&self, y: f64) -> StabAnswer {
        let mut best = StabAnswer::SENTINEL;
        let mut cur = self.root;
        while cur != NIL {
            metrics::count_comparisons(1);
            let node = self.node(cur);
            if node.y < y {
                best = StabAnswer::new(node.y, node.id);
                cur = node.right;
            } else {
                cur = node.left;
            }
        }
        best
    }

    #[cfg(test)]
    fn check_invariants(&self) {
        fn walk(set: &ActiveSet, n: u32, out: &mut Vec<(f64, u32)>) -> i8 {
            if n == NIL {
                return 0;
            }
            let node = set.node(n);
            if node.left != NIL {
                assert_eq!(set.node(node.left).parent, n);
            }
            if node.right != NIL {
                assert_eq!(set.node(node.right).parent, n);
            }
            let hl = walk(set, node.left, out);
            out.push((node.y, node.id));
            let hr = walk(set, node.right, out);
            assert!((hl - hr).abs() <= 1, "unbalanced node");
            assert_eq!(node.height, 1 + hl.max(hr));
            1 + hl.max(hr)
        }
        let mut keys = Vec::new();
        walk(self, self.root, &mut keys);
        assert_eq!(keys.len(), self.len);
        for w in keys.windows(2) {
            assert!(
                w[0].0.total_cmp(&w[1].0).then(w[0].1.cmp(&w[1].1)) == std::cmp::Ordering::Less
            );
        }
    }
}
