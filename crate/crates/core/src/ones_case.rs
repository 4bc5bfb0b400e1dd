//! A direct bijection between `Slide^ω(1,…,1)` and permutations.
//!
//! [`phi`] reads the slide labels of a tree into a permutation. [`rho`]
//! goes back: it splits a permutation at its earliest `23-1` occurrence,
//! builds the two halves recursively, and grafts them together.

use thiserror::Error;

use crate::caterpillar::{tree_of_caterpillar_word, CaterpillarError};
use crate::compositions::Composition;
use crate::patterns::{earliest_231, reduce};
use crate::slide_rules::{slide_labeling, SlideError, SlideRule};
use crate::trees::{EdgeLabeledTree, EdgeNode, LeafLabel, Node, StableTree, TreeError};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OnesError {
    #[error("{0} is not a permutation")]
    NotPermutation(Word),
    #[error("tree is not in the all-ones slide set")]
    NotMember,
    #[error(transparent)]
    Slide(#[from] SlideError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Caterpillar(#[from] CaterpillarError),
    #[error("grafting failed: {0}")]
    Graft(String),
}

fn check_permutation(p: &Word) -> Result<(), OnesError> {
    let mut seen = vec![false; p.len() + 1];
    for &x in p.letters() {
        let x = x as usize;
        if x == 0 || x > p.len() || seen[x] {
            return Err(OnesError::NotPermutation(p.clone()));
        }
        seen[x] = true;
    }
    Ok(())
}

/// The slide labels of `tree` as an edge tree, for `k = (1,…,1)`.
pub fn slide_edge_tree(tree: &StableTree) -> Result<EdgeLabeledTree, OnesError> {
    let k = Composition::ones(tree.n());
    let lab = slide_labeling(tree, &k, SlideRule::Omega)?.into_labeling().ok_or(OnesError::NotMember)?;
    Ok(EdgeLabeledTree::from_graph(&tree.graph(), |id| lab.label(id))?)
}

/// Reads edge labels from the root; at a fork, the branch with the larger
/// minimal label goes first.
pub fn phi(tree: &StableTree) -> Result<Word, OnesError> {
    fn read(node: &EdgeNode, out: &mut Vec<u32>) {
        out.push(node.label);
        let mut ch: Vec<&EdgeNode> = node.children.iter().collect();
        ch.sort_by_key(|c| std::cmp::Reverse(c.min_label()));
        ch.into_iter().for_each(|c| read(c, out));
    }
    let edges = slide_edge_tree(tree)?;
    let mut out = Vec::new();
    edges.roots.iter().for_each(|r| read(r, &mut out));
    Ok(Word::new(out))
}

fn hat(letters: &[u32]) -> Option<EdgeNode> {
    let w = Word::new(letters.to_vec());
    let Some(e) = earliest_231(&w) else {
        return EdgeLabeledTree::path(letters).roots.pop();
    };
    let mut spine = e.prefix.into_letters();
    spine.push(e.x);
    let mut upper = vec![e.y];
    upper.extend(e.middle.letters());
    let mut lower = vec![e.z];
    lower.extend(e.suffix.letters());
    let tail = [hat(&upper), hat(&lower)].into_iter().flatten().collect();
    Some(chain(&spine, tail))
}

fn chain(spine: &[u32], tail: Vec<EdgeNode>) -> EdgeNode {
    match spine {
        [last] => EdgeNode { label: *last, children: tail },
        [first, rest @ ..] => EdgeNode { label: *first, children: vec![chain(rest, tail)] },
        [] => unreachable!("spine holds at least x"),
    }
}

/// The edge-labeled shape that [`rho`] gives to `p`.
pub fn rho_hat(p: &Word) -> Result<EdgeLabeledTree, OnesError> {
    check_permutation(p)?;
    Ok(EdgeLabeledTree { roots: hat(p.letters()).into_iter().collect() })
}

/// Leaves `c` and the letters of `letters`; the tree of the reduced word
/// relabeled back.
fn rho_letters(letters: &[u32]) -> Result<StableTree, OnesError> {
    let w = Word::new(letters.to_vec());
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    let unreduce = |t: StableTree| {
        t.map_leaves(|l| match l {
            LeafLabel::Num(i) => LeafLabel::Num(sorted[i as usize - 1]),
            other => other,
        })
    };
    let Some(e) = earliest_231(&w) else {
        if w.is_empty() {
            return Ok(StableTree::base());
        }
        let red = reduce(&w).expect("nonempty");
        return Ok(unreduce(tree_of_caterpillar_word(&red)?));
    };
    let depth = e.prefix.len() + 1;
    let mut spine = e.prefix.into_letters();
    spine.push(e.x);
    let mut a_word = spine.clone();
    a_word.push(e.y);
    a_word.extend(e.middle.letters());
    let mut b_word = spine;
    b_word.push(e.z);
    b_word.extend(e.suffix.letters());
    let a = rho_letters(&a_word)?;
    let b = rho_letters(&b_word)?;
    let root = |t: &StableTree| t.root_child().cloned().ok_or_else(|| OnesError::Graft("empty tree".into()));
    let grafted = graft(&root(&a)?, &root(&b)?, depth)?;
    Ok(StableTree::new_unchecked(vec![Node::Leaf(LeafLabel::B), grafted]))
}

fn internal_child(node: &Node) -> Result<(usize, &Node), OnesError> {
    match node {
        Node::Internal(ch) => {
            let found: Vec<(usize, &Node)> = ch.iter().enumerate().filter(|(_, c)| !c.is_leaf()).collect();
            match found.as_slice() {
                [only] => Ok(*only),
                _ => Err(OnesError::Graft(format!("expected one internal child below {node}"))),
            }
        }
        Node::Leaf(_) => Err(OnesError::Graft("reached a leaf".into())),
    }
}

/// Walks `depth - 1` spine edges in both trees and joins `a`'s subtree with
/// `b`'s subtree at the vertex reached.
fn graft(a: &Node, b: &Node, depth: usize) -> Result<Node, OnesError> {
    let (ia, a_next) = internal_child(a)?;
    let (_, b_next) = internal_child(b)?;
    if depth == 1 {
        return Ok(Node::Internal(vec![a_next.clone(), b_next.clone()]));
    }
    let Node::Internal(ch) = a else { unreachable!("internal_child succeeded") };
    let mut ch = ch.clone();
    ch[ia] = graft(a_next, b_next, depth - 1)?;
    Ok(Node::Internal(ch))
}

/// The unique all-ones slide tree whose slide labels have the shape [`rho_hat`].
pub fn rho(p: &Word) -> Result<StableTree, OnesError> {
    let shape = rho_hat(p)?;
    let tree = StableTree::new(rho_letters(p.letters())?.children().to_vec())?.canonicalize();
    let got = slide_edge_tree(&tree)?;
    if got.canonicalize() != shape.canonicalize() {
        return Err(OnesError::Graft(format!("labels {got} differ from {shape}")));
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::parse_tree;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn worked_permutation() {
        let p = w("853769421");
        assert_eq!(rho_hat(&p).unwrap().to_string(), "8[5[3[7[6[9,4]],2[1]]]]");
        let t = rho(&p).unwrap();
        assert!(!t.is_caterpillar());
        assert_eq!(phi(&t).unwrap(), p);
    }

    #[test]
    fn decreasing_caterpillar() {
        let t = parse_tree("(a,b,(3,(2,(1,c))))").unwrap();
        assert_eq!(phi(&t).unwrap(), w("321"));
        assert_eq!(rho(&w("321")).unwrap(), t.canonicalize());
    }

    #[test]
    fn avoiders_are_caterpillars() {
        let t = rho(&w("132")).unwrap();
        assert!(t.is_caterpillar());
        assert_eq!(t, tree_of_caterpillar_word(&w("132")).unwrap());
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(matches!(rho(&w("112")), Err(OnesError::NotPermutation(_))));
    }
}
