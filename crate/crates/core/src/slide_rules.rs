//! The two slide rules: generating slide trees by repeated i-slides, and
//! recognising them with the greedy edge-labeling algorithm.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::compositions::{Composition, CompositionError};
use crate::trees::{LeafLabel, LeafSet, Node, NodeId, StableTree, TreeError, TreeGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlideError {
    #[error("tree is not trivalent")]
    NotTrivalent,
    #[error("tree has {leaves} numeric leaves but the composition has {parts} parts")]
    SizeMismatch { leaves: usize, parts: usize },
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{0} is not a leaf of the tree")]
    NotALeaf(LeafLabel),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlideRule {
    Psi,
    Omega,
}

impl fmt::Display for SlideRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlideRule::Psi => "psi",
            SlideRule::Omega => "omega",
        })
    }
}

impl FromStr for SlideRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "psi" => Ok(SlideRule::Psi),
            "omega" => Ok(SlideRule::Omega),
            other => Err(format!("unknown slide rule {other:?}")),
        }
    }
}

/// Labels on the internal edges of a tree, indexed by [`TreeGraph`] node id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlideLabeling {
    labels: Vec<Option<u32>>,
    order: Vec<NodeId>,
}

impl SlideLabeling {
    pub fn label(&self, id: NodeId) -> Option<u32> {
        self.labels.get(id).copied().flatten()
    }

    pub fn labels(&self) -> &[Option<u32>] {
        &self.labels
    }

    /// Edges in the order the algorithm labeled them.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Position of `id` in [`order`](Self::order).
    pub fn rank(&self, id: NodeId) -> Option<usize> {
        self.order.iter().position(|&e| e == id)
    }

    pub fn edges_with_label(&self, l: u32) -> Vec<NodeId> {
        self.order.iter().copied().filter(|&e| self.labels[e] == Some(l)).collect()
    }

    /// Canonical tree text with `:label` on every labeled edge.
    pub fn to_text(&self, graph: &TreeGraph) -> String {
        graph.labeled_string(|id| self.label(id))
    }

    pub fn to_dot(&self, graph: &TreeGraph) -> String {
        graph.to_dot(|id| self.label(id))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// Every internal edge between leaf `step` and `a` is already labeled.
    NoUnlabeledEdge,
    /// The comparison between the two minima failed.
    Rejected { m_leaf: LeafLabel, m_root: LeafLabel },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelingFailure {
    pub step: u32,
    pub reason: FailureReason,
    pub partial: SlideLabeling,
}

impl fmt::Display for LabelingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            FailureReason::NoUnlabeledEdge => {
                write!(f, "step {}: no unlabeled internal edge between leaf {} and a", self.step, self.step)
            }
            FailureReason::Rejected { m_leaf, m_root } => write!(
                f,
                "step {}: comparison failed with m_leaf = {m_leaf}, m_root = {m_root}",
                self.step
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelingOutcome {
    Labeled(SlideLabeling),
    Failed(LabelingFailure),
}

impl LabelingOutcome {
    pub fn is_labeled(&self) -> bool {
        matches!(self, LabelingOutcome::Labeled(_))
    }

    pub fn labeling(&self) -> Option<&SlideLabeling> {
        match self {
            LabelingOutcome::Labeled(l) => Some(l),
            LabelingOutcome::Failed(_) => None,
        }
    }

    pub fn into_labeling(self) -> Option<SlideLabeling> {
        match self {
            LabelingOutcome::Labeled(l) => Some(l),
            LabelingOutcome::Failed(_) => None,
        }
    }
}

pub(crate) fn check_shape(tree: &StableTree, k: &Composition) -> Result<(), SlideError> {
    if !tree.is_trivalent() {
        return Err(SlideError::NotTrivalent);
    }
    let n = tree.n();
    if n != k.len() {
        return Err(SlideError::SizeMismatch { leaves: n, parts: k.len() });
    }
    k.check_balanced()?;
    Ok(())
}

/// Runs the labeling algorithm for `k` under `rule`.
pub fn slide_labeling(tree: &StableTree, k: &Composition, rule: SlideRule) -> Result<LabelingOutcome, SlideError> {
    check_shape(tree, k)?;
    Ok(label_graph(&tree.graph(), k, rule, false))
}

/// Membership in `Slide^rule(k)`.
pub fn is_member(tree: &StableTree, k: &Composition, rule: SlideRule) -> Result<bool, SlideError> {
    Ok(slide_labeling(tree, k, rule)?.is_labeled())
}

/// The labeling algorithm on a pre-validated graph. `flip` reverses the
/// `m_leaf >= m_root` comparison and exists only for harness self-tests.
pub(crate) fn label_graph(g: &TreeGraph, k: &Composition, rule: SlideRule, flip: bool) -> LabelingOutcome {
    let mut labels = vec![None; g.len()];
    let mut order = Vec::new();
    let climb = |mut v: NodeId, labels: &[Option<u32>]| {
        while v != TreeGraph::ROOT && labels[v].is_some() {
            v = g.parent(v).expect("non-root node has a parent");
        }
        v
    };
    for l in (1..=k.len() as u32).rev() {
        let leaf_label = LeafLabel::Num(l);
        let leaf = g.node_of(leaf_label).expect("shape checked");
        for _ in 0..k.get(l as usize) {
            let x = climb(g.parent(leaf).expect("leaf has a parent"), &labels);
            if x == TreeGraph::ROOT {
                let partial = SlideLabeling { labels, order };
                return LabelingOutcome::Failed(LabelingFailure { step: l, reason: FailureReason::NoUnlabeledEdge, partial });
            }
            let y = climb(g.parent(x).expect("non-root node has a parent"), &labels);
            let m_leaf = g.leaves(x).minus(LeafSet::single(leaf_label)).min().expect("stable vertex");
            let m_root = g.leaves(y).minus(g.leaves(x)).min().expect("stable vertex");
            debug_assert_ne!(m_leaf, m_root);
            let ordered = if flip { m_leaf <= m_root } else { m_leaf >= m_root };
            let ok = match rule {
                SlideRule::Psi => ordered,
                SlideRule::Omega => leaf_label >= m_leaf && ordered,
            };
            if !ok {
                let partial = SlideLabeling { labels, order };
                let reason = FailureReason::Rejected { m_leaf, m_root };
                return LabelingOutcome::Failed(LabelingFailure { step: l, reason, partial });
            }
            labels[x] = Some(l);
            order.push(x);
        }
    }
    LabelingOutcome::Labeled(SlideLabeling { labels, order })
}

/// Every tree obtained from `tree` by one `i`-slide, canonical and sorted.
pub fn i_slides(tree: &StableTree, i: u32) -> Result<Vec<StableTree>, SlideError> {
    let leaf = LeafLabel::Num(i);
    if !tree.leaves().contains(&leaf) {
        return Err(SlideError::NotALeaf(leaf));
    }
    let mut out: Vec<StableTree> = slides_at(tree, leaf).into_iter().map(|t| t.canonicalize()).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn slides_at(tree: &StableTree, leaf: LeafLabel) -> Vec<StableTree> {
    tree.rebuild_vertex_of(leaf, &|children: &[Node]| {
        let others: Vec<&Node> = children.iter().filter(|c| **c != Node::Leaf(leaf)).collect();
        let (m_idx, _) = others.iter().enumerate().min_by_key(|(_, c)| c.min_leaf()).expect("stable vertex");
        let moving = others[m_idx];
        let rest: Vec<&Node> = others.iter().enumerate().filter(|&(idx, _)| idx != m_idx).map(|(_, c)| *c).collect();
        let r = rest.len();
        // Each proper subset of `rest` may follow the minimal branch to the new vertex.
        (0u64..(1u64 << r).saturating_sub(1))
            .map(|mask| {
                let mut new_vertex = vec![moving.clone()];
                let mut stays = vec![Node::Leaf(leaf)];
                for (bit, c) in rest.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        new_vertex.push((*c).clone());
                    } else {
                        stays.push((*c).clone());
                    }
                }
                new_vertex.push(Node::Internal(stays));
                new_vertex
            })
            .collect()
    })
}

/// `Slide^rule(k)`, generated by the staged slide process. Canonical, sorted.
pub fn enumerate_slide_set(k: &Composition, rule: SlideRule) -> Result<Vec<StableTree>, SlideError> {
    k.check_balanced()?;
    let n = k.len() as u32;
    let start = match rule {
        SlideRule::Psi => {
            let mut ch = vec![Node::Leaf(LeafLabel::B), Node::Leaf(LeafLabel::C)];
            ch.extend((1..=n).map(Node::num));
            StableTree::new_unchecked(ch)
        }
        SlideRule::Omega => StableTree::base(),
    };
    let mut level = vec![start];
    for i in 1..=n {
        let leaf = LeafLabel::Num(i);
        if rule == SlideRule::Omega {
            level = stage(&level, |t| t.attach_everywhere(leaf));
        }
        for _ in 0..k.get(i as usize) {
            level = stage(&level, |t| slides_at(t, leaf));
        }
    }
    Ok(level)
}

fn stage(level: &[StableTree], step: impl Fn(&StableTree) -> Vec<StableTree> + Sync) -> Vec<StableTree> {
    let mut next: Vec<StableTree> =
        level.par_iter().flat_map_iter(|t| step(t).into_iter().map(|x| x.canonicalize())).collect();
    next.par_sort_unstable();
    next.dedup();
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::parse_tree;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn worked_labeling() {
        let t = parse_tree("(a,b,((6,1),(5,(c,(4,(3,2))))))").unwrap();
        let out = slide_labeling(&t, &c("0,0,2,1,1,2"), SlideRule::Omega).unwrap();
        let lab = out.labeling().expect("member");
        let g = t.graph();
        // Spine from the root, then the edge above the (6,1) cherry.
        let mut spine = Vec::new();
        let mut v = g.internal_children(TreeGraph::ROOT).next().unwrap();
        loop {
            spine.push(lab.label(v).unwrap());
            let next: Vec<_> = g.internal_children(v).collect();
            match next.as_slice() {
                [] => break,
                [only] => v = *only,
                [x, y] => v = if g.leaves(*x).contains(LeafLabel::Num(6)) { *y } else { *x },
                _ => unreachable!(),
            }
        }
        assert_eq!(spine, vec![6, 5, 3, 4, 3]);
        let six = g.node_of(LeafLabel::Num(6)).unwrap();
        assert_eq!(lab.label(g.parent(six).unwrap()), Some(6));
        assert_eq!(lab.to_text(&g), "(a,b,(((c,((2,3):3,4):4):3,5):5,(1,6):6):6)");
    }

    #[test]
    fn base_star_is_member() {
        assert!(is_member(&StableTree::base(), &c(""), SlideRule::Omega).unwrap());
        assert!(is_member(&StableTree::base(), &c(""), SlideRule::Psi).unwrap());
    }

    #[test]
    fn generation_matches_recognition_for_three_leaves() {
        let all = crate::trees::enumerate_trivalent(3);
        for rule in [SlideRule::Psi, SlideRule::Omega] {
            for k in Composition::all(3) {
                let generated = enumerate_slide_set(&k, rule).unwrap();
                let recognised: Vec<_> = all.iter().filter(|t| is_member(t, &k, rule).unwrap()).cloned().collect();
                assert_eq!(generated, recognised, "{rule} {k}");
            }
        }
    }

    #[test]
    fn failure_reports_step() {
        // Leaf 3 hangs next to c: nothing smaller than c below the edge above them.
        let t = parse_tree("(a,b,((c,3),(1,2)))").unwrap();
        match slide_labeling(&t, &c("0,1,2"), SlideRule::Psi).unwrap() {
            LabelingOutcome::Failed(f) => assert_eq!(f.step, 3),
            LabelingOutcome::Labeled(l) => panic!("unexpected labeling {l:?}"),
        }
    }

    #[test]
    fn slide_with_root_vertex() {
        let t = StableTree::new(vec![Node::Leaf(LeafLabel::B), Node::Leaf(LeafLabel::C), Node::num(1)]).unwrap();
        let out = i_slides(&t, 1).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].to_string(), "(a,b,(c,1))");
    }

    #[test]
    fn degree_three_blocks_slides() {
        let t = parse_tree("(a,b,(2,(1,c)))").unwrap();
        assert!(i_slides(&t, 1).unwrap().is_empty());
        assert!(i_slides(&t, 4).is_err());
    }

    #[test]
    fn slide_subsets() {
        // v_1 carries 1 and four more branches: the minimal one always moves,
        // and any proper subset of the other three may follow.
        let t = parse_tree("(a,b,(1,c,2,3,4))").unwrap();
        assert_eq!(i_slides(&t, 1).unwrap().len(), 7);
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_slide_set(&c("1,0,2,1"), SlideRule::Omega).unwrap().len(), 8);
        assert_eq!(enumerate_slide_set(&c("1,0,2,1"), SlideRule::Psi).unwrap().len(), 12);
        assert_eq!(enumerate_slide_set(&c("0,0,0,4"), SlideRule::Omega).unwrap().len(), 1);
        assert_eq!(enumerate_slide_set(&c("1,1,1"), SlideRule::Omega).unwrap().len(), 6);
        assert_eq!(enumerate_slide_set(&c(""), SlideRule::Omega).unwrap(), vec![StableTree::base()]);
    }
}
