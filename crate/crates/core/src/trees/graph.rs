use std::fmt::Write as _;

use super::{LeafLabel, Node, StableTree};

pub type NodeId = usize;

/// A set of leaves other than `a`, stored as a bit mask in label order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LeafSet(u128);

impl LeafSet {
    fn bit(label: LeafLabel) -> u32 {
        match label {
            LeafLabel::A => panic!("leaf a is never part of a leaf set"),
            LeafLabel::B => 0,
            LeafLabel::C => 1,
            LeafLabel::Num(i) => i + 1,
        }
    }

    fn label(bit: u32) -> LeafLabel {
        match bit {
            0 => LeafLabel::B,
            1 => LeafLabel::C,
            i => LeafLabel::Num(i - 1),
        }
    }

    pub fn single(label: LeafLabel) -> LeafSet {
        LeafSet(1u128 << Self::bit(label))
    }

    pub fn contains(self, label: LeafLabel) -> bool {
        label != LeafLabel::A && self.0 & (1u128 << Self::bit(label)) != 0
    }

    pub fn min(self) -> Option<LeafLabel> {
        (self.0 != 0).then(|| Self::label(self.0.trailing_zeros()))
    }

    /// The two smallest leaves.
    pub fn two_smallest(self) -> Option<(LeafLabel, LeafLabel)> {
        let first = self.min()?;
        let rest = self.minus(LeafSet::single(first));
        Some((first, rest.min()?))
    }

    pub fn union(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 | other.0)
    }

    pub fn minus(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 & !other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = LeafLabel> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Self::label(b))
        })
    }
}

#[derive(Clone, Debug)]
struct GraphNode {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    leaf: Option<LeafLabel>,
    leaves: LeafSet,
}

/// An indexed view of a [`StableTree`] with parent links and leaf sets.
///
/// Node ids follow the preorder of the tree as stored: `v_a` is
/// [`TreeGraph::ROOT`], then each child subtree in order. Every non-root
/// node stands for the edge joining it to its parent; non-root internal
/// nodes are exactly the internal edges.
#[derive(Clone, Debug)]
pub struct TreeGraph {
    nodes: Vec<GraphNode>,
    by_leaf: Vec<Option<NodeId>>,
}

impl TreeGraph {
    pub const ROOT: NodeId = 0;

    pub(super) fn new(tree: &StableTree) -> TreeGraph {
        let mut g = TreeGraph { nodes: Vec::new(), by_leaf: Vec::new() };
        g.nodes.push(GraphNode { parent: None, children: Vec::new(), leaf: None, leaves: LeafSet::default() });
        let mut leaves = LeafSet::default();
        for c in tree.children() {
            let id = g.push(c, Self::ROOT);
            g.nodes[Self::ROOT].children.push(id);
            leaves = leaves.union(g.nodes[id].leaves);
        }
        g.nodes[Self::ROOT].leaves = leaves;
        g
    }

    fn push(&mut self, node: &Node, parent: NodeId) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(GraphNode { parent: Some(parent), children: Vec::new(), leaf: None, leaves: LeafSet::default() });
        match node {
            Node::Leaf(l) => {
                self.nodes[id].leaf = Some(*l);
                self.nodes[id].leaves = LeafSet::single(*l);
                let b = LeafSet::bit(*l) as usize;
                if self.by_leaf.len() <= b {
                    self.by_leaf.resize(b + 1, None);
                }
                self.by_leaf[b] = Some(id);
            }
            Node::Internal(ch) => {
                let mut leaves = LeafSet::default();
                for c in ch {
                    let cid = self.push(c, id);
                    self.nodes[id].children.push(cid);
                    leaves = leaves.union(self.nodes[cid].leaves);
                }
                self.nodes[id].leaves = leaves;
            }
        }
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn leaf(&self, id: NodeId) -> Option<LeafLabel> {
        self.nodes[id].leaf
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].leaf.is_some()
    }

    /// A non-root internal node, i.e. an internal edge.
    pub fn is_internal_edge(&self, id: NodeId) -> bool {
        id != Self::ROOT && !self.is_leaf(id)
    }

    pub fn internal_edges(&self) -> impl Iterator<Item = NodeId> + '_ {
        (1..self.nodes.len()).filter(move |&id| !self.is_leaf(id))
    }

    /// Leaves below `id`; for the root, every leaf except `a`.
    pub fn leaves(&self, id: NodeId) -> LeafSet {
        self.nodes[id].leaves
    }

    pub fn min_leaf(&self, id: NodeId) -> LeafLabel {
        self.nodes[id].leaves.min().expect("every vertex has a leaf below it")
    }

    pub fn node_of(&self, label: LeafLabel) -> Option<NodeId> {
        if label == LeafLabel::A {
            return None;
        }
        self.by_leaf.get(LeafSet::bit(label) as usize).copied().flatten()
    }

    /// Internal children of `id`.
    pub fn internal_children(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes[id].children.iter().copied().filter(move |&c| !self.is_leaf(c))
    }

    /// Leaf children of `id`.
    pub fn leaf_children(&self, id: NodeId) -> impl Iterator<Item = LeafLabel> + '_ {
        self.nodes[id].children.iter().filter_map(move |&c| self.leaf(c))
    }

    /// Nodes from `id` up to, but excluding, the root.
    pub fn ancestors_inclusive(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = id;
        while cur != Self::ROOT {
            out.push(cur);
            cur = self.parent(cur).expect("non-root node has a parent");
        }
        out
    }

    /// Highest node containing `inside` but not `outside`, climbing from `inside`.
    pub fn largest_branch_without(&self, inside: LeafLabel, outside: LeafLabel) -> Option<NodeId> {
        let mut cur = self.node_of(inside)?;
        loop {
            let p = self.parent(cur)?;
            if p == Self::ROOT || self.leaves(p).contains(outside) {
                return Some(cur);
            }
            cur = p;
        }
    }

    /// The subtree at `id` as a [`Node`].
    pub fn subtree(&self, id: NodeId) -> Node {
        match self.leaf(id) {
            Some(l) => Node::Leaf(l),
            None => Node::Internal(self.children(id).iter().map(|&c| self.subtree(c)).collect()),
        }
    }

    /// Children sorted by minimal leaf, which is the canonical order.
    fn canonical_children(&self, id: NodeId) -> Vec<NodeId> {
        let mut ch = self.children(id).to_vec();
        ch.sort_by_key(|&c| self.min_leaf(c));
        ch
    }

    /// Canonical text, with `:label` after every internal edge that has one.
    pub fn labeled_string(&self, label: impl Fn(NodeId) -> Option<u32>) -> String {
        fn go(g: &TreeGraph, id: NodeId, label: &impl Fn(NodeId) -> Option<u32>, out: &mut String) {
            if let Some(l) = g.leaf(id) {
                let _ = write!(out, "{l}");
                return;
            }
            out.push('(');
            for (idx, c) in g.canonical_children(id).into_iter().enumerate() {
                if idx > 0 {
                    out.push(',');
                }
                go(g, c, label, out);
            }
            out.push(')');
            if let Some(l) = label(id) {
                let _ = write!(out, ":{l}");
            }
        }
        let mut out = String::from("(a");
        for c in self.canonical_children(Self::ROOT) {
            out.push(',');
            go(self, c, &label, &mut out);
        }
        out.push(')');
        out
    }

    /// Graphviz text. Vertex ids follow the canonical preorder; edge labels
    /// come from `label`.
    pub fn to_dot(&self, label: impl Fn(NodeId) -> Option<u32>) -> String {
        fn go(g: &TreeGraph, id: NodeId, name: usize, next: &mut usize, label: &impl Fn(NodeId) -> Option<u32>, out: &mut String) {
            for c in g.canonical_children(id) {
                let cname = *next;
                *next += 1;
                match g.leaf(c) {
                    Some(l) => {
                        let _ = writeln!(out, "  v{cname} [label=\"{l}\", shape=plaintext];");
                        let _ = writeln!(out, "  v{name} -- v{cname};");
                    }
                    None => {
                        let _ = writeln!(out, "  v{cname} [label=\"\", shape=point];");
                        match label(c) {
                            Some(l) => {
                                let _ = writeln!(out, "  v{name} -- v{cname} [label=\"{l}\"];");
                            }
                            None => {
                                let _ = writeln!(out, "  v{name} -- v{cname};");
                            }
                        }
                        go(g, c, cname, next, label, out);
                    }
                }
            }
        }
        let mut out = String::from("graph tree {\n");
        out.push_str("  v0 [label=\"\", shape=point];\n");
        out.push_str("  va [label=\"a\", shape=plaintext];\n");
        out.push_str("  v0 -- va;\n");
        let mut next = 1;
        go(self, Self::ROOT, 0, &mut next, &label, &mut out);
        out.push_str("}\n");
        out
    }
}

impl StableTree {
    /// Graphviz text without edge labels.
    pub fn to_dot(&self) -> String {
        self.graph().to_dot(|_| None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::parse_tree;

    #[test]
    fn branch_minimum() {
        // The branch {2,3,4} hanging below the (c,1) cherry.
        let t = parse_tree("(a,b,((c,1),(2,(3,4))))").unwrap();
        let g = t.graph();
        let two = g.node_of(LeafLabel::Num(2)).unwrap();
        let branch = g.parent(two).unwrap();
        assert_eq!(g.min_leaf(branch), LeafLabel::Num(2));
        assert_eq!(g.leaves(branch).len(), 3);
        let c = g.node_of(LeafLabel::C).unwrap();
        assert_eq!(g.min_leaf(c), LeafLabel::C);
        // The largest branch containing 3 but not 1 is the same branch.
        assert_eq!(g.largest_branch_without(LeafLabel::Num(3), LeafLabel::Num(1)), Some(branch));
    }

    #[test]
    fn root_child_minimum() {
        let t = parse_tree("(a,b,(2,(1,c)))").unwrap();
        let g = t.graph();
        let rc = g.internal_children(TreeGraph::ROOT).next().unwrap();
        assert_eq!(g.min_leaf(rc), LeafLabel::C);
        assert_eq!(g.min_leaf(TreeGraph::ROOT), LeafLabel::B);
    }

    #[test]
    fn leaf_set_ops() {
        let s = LeafSet::single(LeafLabel::Num(4)).union(LeafSet::single(LeafLabel::C)).union(LeafSet::single(LeafLabel::Num(2)));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![LeafLabel::C, LeafLabel::Num(2), LeafLabel::Num(4)]);
        assert_eq!(s.two_smallest(), Some((LeafLabel::C, LeafLabel::Num(2))));
        assert!(!s.contains(LeafLabel::A));
    }

    #[test]
    fn labeled_text_is_canonical() {
        let t = parse_tree("(a,(2,(c,1)),b)").unwrap();
        let g = t.graph();
        assert_eq!(g.labeled_string(|_| None), "(a,b,((c,1),2))");
    }
}
