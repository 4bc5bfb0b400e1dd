//! Leaf-labeled stable trees.
//!
//! A tree is stored hanging from the vertex `v_a` next to leaf `a`: the leaf
//! `a` itself is implicit and [`StableTree::children`] lists everything else
//! attached to `v_a`. In a slide tree those children are the leaf `b` and one
//! more subtree, which gives the text form `(a,b,<node>)`.
//!
//! Trees are plain values. Two trees are the same abstract tree iff their
//! [`canonical`](StableTree::canonicalize) forms are equal; every routine in
//! this crate that returns a set of trees returns canonical trees.

mod graph;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use graph::{LeafSet, NodeId, TreeGraph};
pub use parse::{parse_labeled_tree, parse_tree, LabeledText};

/// Largest numeric leaf a tree may carry (leaf sets are 128-bit masks).
pub const MAX_LEAF: u32 = 126;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("leaf {0} appears more than once")]
    DuplicateLeaf(LeafLabel),
    #[error("leaf {0} is missing")]
    MissingLeaf(LeafLabel),
    #[error("internal vertex with {children} children is not stable")]
    Unstable { children: usize },
    #[error("leaf label {0} exceeds the supported maximum {MAX_LEAF}")]
    LeafTooLarge(u32),
    #[error("edge labels do not fit the tree: {0}")]
    LabelMismatch(String),
}

/// A leaf label, ordered `a < b < c < 1 < 2 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafLabel {
    A,
    B,
    C,
    Num(u32),
}

impl LeafLabel {
    pub fn num(self) -> Option<u32> {
        match self {
            LeafLabel::Num(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for LeafLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeafLabel::A => f.write_str("a"),
            LeafLabel::B => f.write_str("b"),
            LeafLabel::C => f.write_str("c"),
            LeafLabel::Num(i) => write!(f, "{i}"),
        }
    }
}

/// A vertex below `v_a`: a leaf, or an internal vertex with its children.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf(LeafLabel),
    Internal(Vec<Node>),
}

impl Node {
    pub fn leaf(label: LeafLabel) -> Node {
        Node::Leaf(label)
    }

    pub fn num(i: u32) -> Node {
        Node::Leaf(LeafLabel::Num(i))
    }

    pub fn cherry(x: LeafLabel, y: LeafLabel) -> Node {
        Node::Internal(vec![Node::Leaf(x), Node::Leaf(y)])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf(_))
    }

    pub fn min_leaf(&self) -> LeafLabel {
        match self {
            Node::Leaf(l) => *l,
            Node::Internal(ch) => ch.iter().map(Node::min_leaf).min().expect("internal vertex has children"),
        }
    }

    pub fn leaves(&self) -> Vec<LeafLabel> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<LeafLabel>) {
        match self {
            Node::Leaf(l) => out.push(*l),
            Node::Internal(ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn contains(&self, label: LeafLabel) -> bool {
        match self {
            Node::Leaf(l) => *l == label,
            Node::Internal(ch) => ch.iter().any(|c| c.contains(label)),
        }
    }

    fn canon(&mut self) -> LeafLabel {
        match self {
            Node::Leaf(l) => *l,
            Node::Internal(ch) => sort_children(ch),
        }
    }

    fn map_leaves(&self, f: &impl Fn(LeafLabel) -> LeafLabel) -> Node {
        match self {
            Node::Leaf(l) => Node::Leaf(f(*l)),
            Node::Internal(ch) => Node::Internal(ch.iter().map(|c| c.map_leaves(f)).collect()),
        }
    }

    /// Replaces every subtree for which `f` returns `Some`, outermost first.
    fn rewrite(&self, f: &impl Fn(&Node) -> Option<Node>) -> Node {
        if let Some(n) = f(self) {
            return n;
        }
        match self {
            Node::Leaf(_) => self.clone(),
            Node::Internal(ch) => Node::Internal(ch.iter().map(|c| c.rewrite(f)).collect()),
        }
    }
}

fn sort_children(ch: &mut [Node]) -> LeafLabel {
    let mut keyed: Vec<(LeafLabel, Node)> = ch
        .iter_mut()
        .map(|c| {
            let m = c.canon();
            (m, std::mem::replace(c, Node::Leaf(LeafLabel::A)))
        })
        .collect();
    keyed.sort_by_key(|(m, _)| *m);
    let min = keyed[0].0;
    for (slot, (_, node)) in ch.iter_mut().zip(keyed) {
        *slot = node;
    }
    min
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(l) => write!(f, "{l}"),
            Node::Internal(ch) => {
                f.write_str("(")?;
                for (idx, c) in ch.iter().enumerate() {
                    if idx > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A stable tree on the leaves `a, b, c, 1, ..., n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableTree {
    children: Vec<Node>,
}

impl StableTree {
    /// Builds and validates a tree from the children of `v_a`.
    pub fn new(children: Vec<Node>) -> Result<StableTree, TreeError> {
        let t = StableTree { children };
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(children: Vec<Node>) -> StableTree {
        StableTree { children }
    }

    /// The star `(a,b,c)`.
    pub fn base() -> StableTree {
        StableTree { children: vec![Node::Leaf(LeafLabel::B), Node::Leaf(LeafLabel::C)] }
    }

    /// `(a,b,<node>)`.
    pub fn with_root_child(node: Node) -> Result<StableTree, TreeError> {
        StableTree::new(vec![Node::Leaf(LeafLabel::B), node])
    }

    pub fn children(&self) -> &[Node] {
        &self.children
    }

    /// The subtree opposite `b` when `v_a` holds exactly `b` and one more child.
    pub fn root_child(&self) -> Option<&Node> {
        match self.children.as_slice() {
            [Node::Leaf(LeafLabel::B), other] | [other, Node::Leaf(LeafLabel::B)] => Some(other),
            _ => None,
        }
    }

    /// Number of numeric leaves.
    pub fn n(&self) -> usize {
        self.leaves().iter().filter(|l| matches!(l, LeafLabel::Num(_))).count()
    }

    /// All leaves except the implicit `a`, in the stored order.
    pub fn leaves(&self) -> Vec<LeafLabel> {
        let mut out = Vec::new();
        self.children.iter().for_each(|c| c.collect_leaves(&mut out));
        out
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        fn stable(node: &Node) -> Result<(), TreeError> {
            if let Node::Internal(ch) = node {
                if ch.len() < 2 {
                    return Err(TreeError::Unstable { children: ch.len() });
                }
                ch.iter().try_for_each(stable)?;
            }
            Ok(())
        }
        if self.children.len() < 2 {
            return Err(TreeError::Unstable { children: self.children.len() });
        }
        self.children.iter().try_for_each(stable)?;
        let leaves = self.leaves();
        let mut seen = BTreeSet::new();
        for l in &leaves {
            if *l == LeafLabel::A || !seen.insert(*l) {
                return Err(TreeError::DuplicateLeaf(*l));
            }
            if let LeafLabel::Num(i) = l {
                if *i == 0 {
                    return Err(TreeError::Syntax { pos: 0, msg: "numeric leaves start at 1".into() });
                }
                if *i > MAX_LEAF {
                    return Err(TreeError::LeafTooLarge(*i));
                }
            }
        }
        let n = leaves.len().saturating_sub(2) as u32;
        let expected = [LeafLabel::B, LeafLabel::C].into_iter().chain((1..=n).map(LeafLabel::Num));
        for l in expected {
            if !seen.contains(&l) {
                return Err(TreeError::MissingLeaf(l));
            }
        }
        Ok(())
    }

    /// Children of every vertex sorted by their minimal leaf.
    pub fn canonicalize(&self) -> StableTree {
        let mut t = self.clone();
        sort_children(&mut t.children);
        t
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// Every internal vertex has degree exactly 3.
    pub fn is_trivalent(&self) -> bool {
        fn tri(node: &Node) -> bool {
            match node {
                Node::Leaf(_) => true,
                Node::Internal(ch) => ch.len() == 2 && ch.iter().all(tri),
            }
        }
        self.children.len() == 2 && self.children.iter().all(tri)
    }

    /// The internal edges form a path (vacuously true without internal edges).
    pub fn is_caterpillar(&self) -> bool {
        fn ok(node: &Node) -> bool {
            match node {
                Node::Leaf(_) => true,
                Node::Internal(ch) => ch.iter().filter(|c| !c.is_leaf()).count() <= 1 && ch.iter().all(ok),
            }
        }
        self.children.iter().filter(|c| !c.is_leaf()).count() <= 2 && self.children.iter().all(ok)
    }

    pub fn internal_edge_count(&self) -> usize {
        fn count(node: &Node) -> usize {
            match node {
                Node::Leaf(_) => 0,
                Node::Internal(ch) => 1 + ch.iter().map(count).sum::<usize>(),
            }
        }
        self.children.iter().map(count).sum()
    }

    /// Internal vertices including `v_a`.
    pub fn internal_vertex_count(&self) -> usize {
        self.internal_edge_count() + 1
    }

    pub fn graph(&self) -> TreeGraph {
        TreeGraph::new(self)
    }

    /// Applies `f` to every leaf label. The caller keeps the labels a valid set.
    pub fn map_leaves(&self, f: impl Fn(LeafLabel) -> LeafLabel) -> StableTree {
        StableTree { children: self.children.iter().map(|c| c.map_leaves(&f)).collect() }
    }

    /// Replaces subtrees matched by `f`, outermost first.
    pub(crate) fn rewrite(&self, f: impl Fn(&Node) -> Option<Node>) -> StableTree {
        StableTree { children: self.children.iter().map(|c| c.rewrite(&f)).collect() }
    }

    /// Replaces the leaf `target` by `replacement`.
    pub fn replace_leaf(&self, target: LeafLabel, replacement: &Node) -> StableTree {
        self.rewrite(|n| match n {
            Node::Leaf(l) if *l == target => Some(replacement.clone()),
            _ => None,
        })
    }

    /// Replaces the two-leaf vertex containing `leaf` by the single leaf `keep`.
    pub fn collapse_cherry(&self, leaf: LeafLabel, keep: LeafLabel) -> StableTree {
        self.rewrite(|n| match n {
            Node::Internal(ch) if ch.len() == 2 && ch.iter().all(Node::is_leaf) && ch.contains(&Node::Leaf(leaf)) => {
                Some(Node::Leaf(keep))
            }
            _ => None,
        })
    }

    /// Rebuilds the vertex whose children include `leaf`.
    ///
    /// `f` receives that vertex's children (excluding the direction of `a`)
    /// and returns any number of replacement child lists; each produces one
    /// output tree in which the vertex carries the new list. When the vertex
    /// is `v_a`, the new list becomes the children of `v_a`.
    pub(crate) fn rebuild_vertex_of(&self, leaf: LeafLabel, f: &impl Fn(&[Node]) -> Vec<Vec<Node>>) -> Vec<StableTree> {
        fn go(ch: &[Node], leaf: LeafLabel, f: &impl Fn(&[Node]) -> Vec<Vec<Node>>) -> Option<Vec<Vec<Node>>> {
            if ch.contains(&Node::Leaf(leaf)) {
                return Some(f(ch));
            }
            for (idx, c) in ch.iter().enumerate() {
                if let Node::Internal(sub) = c {
                    if c.contains(leaf) {
                        let rebuilt = go(sub, leaf, f)?;
                        return Some(
                            rebuilt
                                .into_iter()
                                .map(|new_sub| {
                                    let mut out = ch.to_vec();
                                    out[idx] = Node::Internal(new_sub);
                                    out
                                })
                                .collect(),
                        );
                    }
                }
            }
            None
        }
        go(&self.children, leaf, f)
            .unwrap_or_default()
            .into_iter()
            .map(|children| StableTree { children })
            .collect()
    }

    /// One tree per internal vertex, with `leaf` attached to it.
    pub(crate) fn attach_everywhere(&self, leaf: LeafLabel) -> Vec<StableTree> {
        fn go(ch: &[Node], leaf: LeafLabel, out: &mut Vec<Vec<Node>>) {
            let mut here = ch.to_vec();
            here.push(Node::Leaf(leaf));
            out.push(here);
            for (idx, c) in ch.iter().enumerate() {
                if let Node::Internal(sub) = c {
                    let mut inner = Vec::new();
                    go(sub, leaf, &mut inner);
                    for new_sub in inner {
                        let mut copy = ch.to_vec();
                        copy[idx] = Node::Internal(new_sub);
                        out.push(copy);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(&self.children, leaf, &mut out);
        out.into_iter().map(|children| StableTree { children }).collect()
    }

    /// One tree per edge, with `leaf` attached to a new vertex subdividing it.
    fn subdivide_everywhere(&self, leaf: LeafLabel) -> Vec<StableTree> {
        fn go(ch: &[Node], leaf: LeafLabel, out: &mut Vec<Vec<Node>>) {
            for (idx, c) in ch.iter().enumerate() {
                let mut copy = ch.to_vec();
                copy[idx] = Node::Internal(vec![c.clone(), Node::Leaf(leaf)]);
                out.push(copy);
                if let Node::Internal(sub) = c {
                    let mut inner = Vec::new();
                    go(sub, leaf, &mut inner);
                    for new_sub in inner {
                        let mut copy = ch.to_vec();
                        copy[idx] = Node::Internal(new_sub);
                        out.push(copy);
                    }
                }
            }
        }
        let mut out = vec![vec![Node::Leaf(leaf), Node::Internal(self.children.clone())]];
        go(&self.children, leaf, &mut out);
        out.into_iter().map(|children| StableTree { children }).collect()
    }
}

impl fmt::Display for StableTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(a")?;
        for c in &self.children {
            write!(f, ",{c}")?;
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for StableTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

/// All trivalent trees on `a, b, c, 1, ..., n`, canonical and sorted.
///
/// This includes trees where `a` and `b` are not adjacent; there are
/// `(2n+1)!!` of them.
pub fn enumerate_trivalent(n: u32) -> Vec<StableTree> {
    let mut level = vec![StableTree::base()];
    for i in 1..=n {
        let next: BTreeSet<StableTree> = level
            .iter()
            .flat_map(|t| t.subdivide_everywhere(LeafLabel::Num(i)))
            .map(|t| t.canonicalize())
            .collect();
        level = next.into_iter().collect();
    }
    level
}

/// An internal edge with its label and the internal edges below it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeNode {
    pub label: u32,
    pub children: Vec<EdgeNode>,
}

impl EdgeNode {
    pub fn min_label(&self) -> u32 {
        self.children.iter().map(EdgeNode::min_label).fold(self.label, u32::min)
    }

    fn canon(&mut self) {
        self.children.iter_mut().for_each(EdgeNode::canon);
        self.children.sort();
    }

    fn collect(&self, out: &mut Vec<u32>) {
        out.push(self.label);
        self.children.iter().for_each(|c| c.collect(out));
    }
}

impl fmt::Display for EdgeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            f.write_str("[")?;
            for (idx, c) in self.children.iter().enumerate() {
                if idx > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// The internal edges of a tree with their labels; leaves are dropped.
///
/// `roots` are the internal edges at `v_a` (one for a slide tree with
/// `n > 0`, none for the star).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabeledTree {
    pub roots: Vec<EdgeNode>,
}

impl EdgeLabeledTree {
    /// Reads the labels of `graph`'s internal edges through `label`.
    pub fn from_graph(graph: &TreeGraph, label: impl Fn(NodeId) -> Option<u32>) -> Result<EdgeLabeledTree, TreeError> {
        fn build(graph: &TreeGraph, id: NodeId, label: &impl Fn(NodeId) -> Option<u32>) -> Result<EdgeNode, TreeError> {
            let l = label(id).ok_or_else(|| TreeError::LabelMismatch(format!("internal edge {id} has no label")))?;
            let children = graph
                .children(id)
                .iter()
                .filter(|&&c| !graph.is_leaf(c))
                .map(|&c| build(graph, c, label))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(EdgeNode { label: l, children })
        }
        let roots = graph
            .children(TreeGraph::ROOT)
            .iter()
            .filter(|&&c| !graph.is_leaf(c))
            .map(|&c| build(graph, c, &label))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EdgeLabeledTree { roots })
    }

    /// A path of edges with the given labels, read from `v_a` outward.
    pub fn path(labels: &[u32]) -> EdgeLabeledTree {
        let mut node: Option<EdgeNode> = None;
        for &l in labels.iter().rev() {
            node = Some(EdgeNode { label: l, children: node.into_iter().collect() });
        }
        EdgeLabeledTree { roots: node.into_iter().collect() }
    }

    pub fn canonicalize(&self) -> EdgeLabeledTree {
        let mut t = self.clone();
        t.roots.iter_mut().for_each(EdgeNode::canon);
        t.roots.sort();
        t
    }

    /// All labels in preorder.
    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.roots.iter().for_each(|r| r.collect(&mut out));
        out
    }

    pub fn is_path(&self) -> bool {
        fn chain(node: &EdgeNode) -> bool {
            match node.children.as_slice() {
                [] => true,
                [only] => chain(only),
                _ => false,
            }
        }
        self.roots.len() <= 1 && self.roots.iter().all(chain)
    }
}

impl fmt::Display for EdgeLabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, r) in self.roots.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> StableTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn canonical_examples() {
        // Leaves are ordered too, so c comes before 1.
        assert_eq!(t("(a,b,((1,c),2))").canonicalize().to_string(), "(a,b,((c,1),2))");
        assert_eq!(t("(a,(2,(1,c)),b)").canonicalize().to_string(), "(a,b,((c,1),2))");
        let x = t("(a,b,((6,1),(5,(c,(4,(3,2))))))");
        assert_eq!(x.canonicalize(), x.canonicalize().canonicalize());
    }

    #[test]
    fn base_star() {
        assert_eq!(StableTree::base().to_string(), "(a,b,c)");
        assert_eq!(t("(a,b,c)"), StableTree::base());
        assert!(StableTree::base().is_caterpillar());
        assert!(StableTree::base().is_trivalent());
        assert_eq!(StableTree::base().n(), 0);
    }

    #[test]
    fn caterpillar_predicate() {
        assert!(t("(a,b,(2,(1,c)))").is_caterpillar());
        assert!(!t("(a,b,((6,1),(5,(c,(4,(3,2))))))").is_caterpillar());
    }

    #[test]
    fn degree_bookkeeping() {
        let x = t("(a,b,((6,1),(5,(c,(4,(3,2))))))");
        assert!(x.is_trivalent());
        assert_eq!(x.n(), 6);
        assert_eq!(x.internal_edge_count(), 6);
        assert_eq!(x.internal_vertex_count(), 7);
    }

    #[test]
    fn trivalent_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_trivalent(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 15, 105, 945]);
    }

    #[test]
    fn rejects_bad_trees() {
        assert_eq!(parse_tree("(a,b,(1,1))"), Err(TreeError::DuplicateLeaf(LeafLabel::Num(1))));
        assert!(matches!(parse_tree("(a,b,(1,c),3)"), Err(TreeError::MissingLeaf(LeafLabel::Num(2)))));
        assert!(matches!(parse_tree("(a,b,((1),c))"), Err(TreeError::Unstable { .. })));
        assert!(matches!(parse_tree("(a,b)"), Err(TreeError::Unstable { .. })));
    }

    #[test]
    fn edge_labeled_display() {
        let e = EdgeLabeledTree::path(&[3, 1, 2]);
        assert_eq!(e.to_string(), "3[1[2]]");
        assert!(e.is_path());
        assert_eq!(e.labels(), vec![3, 1, 2]);
    }
}
