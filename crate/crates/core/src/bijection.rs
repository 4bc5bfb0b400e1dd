//! The recursive bijection between ω slide trees and the disjoint union
//! `D(k)` of smaller slide sets, and the words it produces.
//!
//! Each slide tree is built from the one-leaf-less star `(a,b,c)` by a
//! sequence of insertions. [`sigma_ij`] and [`sigma_j`] add one internal
//! edge; [`pi_ij`] and [`pi_j`] remove it again. [`last`] reads off which
//! edge was added most recently.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::compositions::{derive, maxzero, Composition, CompositionError, Maxzero};
use crate::slide_rules::{check_shape, label_graph, LabelingFailure, LabelingOutcome, SlideError, SlideLabeling, SlideRule};
use crate::trees::{LeafLabel, Node, NodeId, StableTree, TreeGraph};
use crate::word::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error(transparent)]
    Slide(#[from] SlideError),
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("tree is not an omega slide tree: {0}")]
    NotMember(LabelingFailure),
    #[error("{0}")]
    Precondition(String),
    #[error("branch has a single leaf")]
    SingleLeaf,
    #[error("path from a to the target has no internal edge")]
    EmptyPath,
    #[error("tree is not in the image of {0}")]
    NotInImage(String),
    #[error("word {word} is not the word of any omega slide tree: {reason}")]
    InvalidWord { word: Word, reason: String },
}

/// Which insertion map was applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    SigmaIJ { i: usize, j: usize },
    SigmaJ { j: usize },
}

impl StepKind {
    pub fn j(self) -> usize {
        match self {
            StepKind::SigmaIJ { j, .. } | StepKind::SigmaJ { j } => j,
        }
    }

    /// The matching update on words: shift letters up, then append `j`.
    pub fn apply_to_word(self, w: &Word) -> Word {
        let (from, j) = match self {
            StepKind::SigmaIJ { i, j } => (i, j),
            StepKind::SigmaJ { j } => (j, j),
        };
        let mut out = w.map(|x| if x as usize >= from { x + 1 } else { x });
        out.push(j as u32);
        out
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::SigmaIJ { i, j } => write!(f, "sigma_{{{i},{j}}}"),
            StepKind::SigmaJ { j } => write!(f, "sigma_{j}"),
        }
    }
}

/// One insertion, from a tree of composition `before` to one of `after`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionStep {
    pub kind: StepKind,
    pub before: Composition,
    pub after: Composition,
}

fn omega_labeling(g: &TreeGraph, tree: &StableTree, k: &Composition) -> Result<SlideLabeling, BijectionError> {
    check_shape(tree, k)?;
    match label_graph(g, k, SlideRule::Omega, false) {
        LabelingOutcome::Labeled(l) => Ok(l),
        LabelingOutcome::Failed(f) => Err(BijectionError::NotMember(f)),
    }
}

/// The largest sub-branch of `b` holding its second smallest leaf but not its smallest.
pub fn min2(g: &TreeGraph, b: NodeId) -> Result<NodeId, BijectionError> {
    let (i, j) = g.leaves(b).two_smallest().ok_or(BijectionError::SingleLeaf)?;
    let mut x = g.node_of(j).expect("leaf of the branch");
    loop {
        let p = g.parent(x).expect("branch contains both leaves");
        if g.leaves(p).contains(i) {
            return Ok(x);
        }
        x = p;
    }
}

fn zero_leaf(k: &Composition) -> LeafLabel {
    match maxzero(k) {
        Maxzero::Sentinel => LeafLabel::C,
        Maxzero::At(i) => LeafLabel::Num(i as u32),
    }
}

pub(crate) fn last_in(g: &TreeGraph, k: &Composition) -> LeafLabel {
    let z = zero_leaf(k);
    let mut b = g.node_of(z).expect("maxzero leaf exists");
    while let Some(p) = g.parent(b).filter(|&p| p != TreeGraph::ROOT && g.min_leaf(p) == z) {
        b = p;
    }
    while !g.is_leaf(b) {
        b = min2(g, b).expect("branch with two leaves");
    }
    g.leaf(b).expect("loop ends at a leaf")
}

/// The leaf singled out by starting at the largest branch whose minimum is
/// `maxzero(k)` and applying [`min2`] until one leaf remains.
pub fn last(tree: &StableTree, k: &Composition) -> Result<LeafLabel, BijectionError> {
    let g = tree.graph();
    omega_labeling(&g, tree, k)?;
    Ok(last_in(&g, k))
}

/// The path from `a` to a target node cut into maximal strictly decreasing
/// runs of edge labels, with the branch hanging off the path after each run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub runs: Vec<Vec<u32>>,
    /// `branches[r]` hangs off the vertex ending run `r`; the last one sits
    /// next to the target.
    pub branches: Vec<NodeId>,
    pub minima: Vec<LeafLabel>,
}

impl PathDecomposition {
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }
}

/// Decomposes the path from `a` to `target` (a node of `g`) under `labeling`.
pub fn path_decomposition(g: &TreeGraph, labeling: &SlideLabeling, target: NodeId) -> Result<PathDecomposition, BijectionError> {
    let mut path = g.ancestors_inclusive(g.parent(target).ok_or(BijectionError::EmptyPath)?);
    path.reverse();
    if path.is_empty() {
        return Err(BijectionError::EmptyPath);
    }
    let labels: Vec<u32> = path
        .iter()
        .map(|&e| labeling.label(e).ok_or_else(|| BijectionError::Precondition("path edge is unlabeled".into())))
        .collect::<Result<_, _>>()?;
    let off_path = |v: NodeId, next: NodeId| -> Result<NodeId, BijectionError> {
        match g.children(v).iter().filter(|&&c| c != next).collect::<Vec<_>>().as_slice() {
            [only] => Ok(**only),
            _ => Err(SlideError::NotTrivalent.into()),
        }
    };
    let mut runs = vec![Vec::new()];
    let mut branches = Vec::new();
    for s in 0..path.len() {
        runs.last_mut().expect("nonempty").push(labels[s]);
        if s + 1 < path.len() && labels[s + 1] >= labels[s] {
            branches.push(off_path(path[s], path[s + 1])?);
            runs.push(Vec::new());
        }
    }
    branches.push(off_path(path[path.len() - 1], target)?);
    let minima = branches.iter().map(|&b| g.min_leaf(b)).collect();
    Ok(PathDecomposition { runs, branches, minima })
}

/// [`path_decomposition`] toward `leaf` in the ω labeling of `tree` for `k`.
pub fn decompose_to_leaf(tree: &StableTree, k: &Composition, leaf: LeafLabel) -> Result<PathDecomposition, BijectionError> {
    let g = tree.graph();
    let lab = omega_labeling(&g, tree, k)?;
    let node = g.node_of(leaf).ok_or(SlideError::NotALeaf(leaf))?;
    path_decomposition(&g, &lab, node)
}

fn shift_up(from: u32) -> impl Fn(LeafLabel) -> LeafLabel {
    move |l| match l {
        LeafLabel::Num(x) if x >= from => LeafLabel::Num(x + 1),
        other => other,
    }
}

fn shift_down_above(above: u32) -> impl Fn(LeafLabel) -> LeafLabel {
    move |l| match l {
        LeafLabel::Num(x) if x > above => LeafLabel::Num(x - 1),
        other => other,
    }
}

fn substitute(tree: &StableTree, map: &HashMap<LeafLabel, LeafLabel>) -> StableTree {
    tree.map_leaves(|l| map.get(&l).copied().unwrap_or(l))
}

fn bump(k: &Composition, j: usize, delta: i32) -> Composition {
    let mut parts = k.parts().to_vec();
    parts[j - 1] = (parts[j - 1] as i32 + delta) as u32;
    Composition::new(parts)
}

fn sibling_leaf(g: &TreeGraph, node: NodeId) -> Option<LeafLabel> {
    let p = g.parent(node)?;
    match g.children(p).iter().filter(|&&c| c != node).collect::<Vec<_>>().as_slice() {
        [only] if p != TreeGraph::ROOT => g.leaf(**only),
        _ => None,
    }
}

/// Inserts an edge `j` into `tree ∈ Slide(k)` and opens a new zero at
/// position `i`. Returns the new tree and its composition.
pub fn sigma_ij(tree: &StableTree, k: &Composition, i: usize, j: usize) -> Result<(StableTree, Composition), BijectionError> {
    let z = maxzero(k).index();
    if !(z < i && i < j && j <= k.len() + 1) {
        return Err(BijectionError::Precondition(format!("sigma_{{{i},{j}}} needs {z} < i < j <= {}", k.len() + 1)));
    }
    let g = tree.graph();
    let lab = omega_labeling(&g, tree, k)?;
    let target = g.node_of(LeafLabel::Num(j as u32 - 1)).expect("leaf present");
    let pd = path_decomposition(&g, &lab, target)?;
    let shift = shift_up(i as u32);
    let m: Vec<LeafLabel> = pd.minima.iter().map(|&x| shift(x)).collect();
    let (li, lj) = (LeafLabel::Num(i as u32), LeafLabel::Num(j as u32));
    let l = m.len();
    // Minima between i and j move one step down the path; i takes the first slot.
    let d = m.iter().position(|&x| x > li).unwrap_or(l);
    let end = if m[l - 1] < lj { l } else { l - 1 };
    let mut values = vec![li];
    let mut map = HashMap::new();
    for &x in &m[d..end.max(d)] {
        map.insert(x, *values.last().expect("nonempty"));
        values.push(x);
    }
    let hang = *values.last().expect("nonempty");
    let out = substitute(&tree.map_leaves(shift), &map).replace_leaf(lj, &Node::cherry(lj, hang));
    let k2 = bump(&k.inserted(i, 0), j, 1);
    Ok((out.canonicalize(), k2))
}

/// Inserts an edge `j` into `tree ∈ Slide(k)` with a new part `1` at position `j`.
pub fn sigma_j(tree: &StableTree, k: &Composition, j: usize) -> Result<(StableTree, Composition), BijectionError> {
    let z = maxzero(k).index();
    if !(z < j && j <= k.len() + 1) {
        return Err(BijectionError::Precondition(format!("sigma_{j} needs {z} < j <= {}", k.len() + 1)));
    }
    let g = tree.graph();
    let lab = omega_labeling(&g, tree, k)?;
    let v = last_in(&g, k);
    let shift = shift_up(j as u32);
    let lj = LeafLabel::Num(j as u32);
    let vnode = g.node_of(v).expect("leaf present");
    let attach = if v == LeafLabel::C || shift(v) < lj {
        shift(v)
    } else {
        let i = sibling_leaf(&g, vnode).ok_or_else(|| BijectionError::Precondition(format!("last leaf {v} has no leaf sibling")))?;
        if shift(i) < lj {
            shift(i)
        } else {
            let pd = path_decomposition(&g, &lab, vnode)?;
            pd.minima.iter().map(|&x| shift(x)).rfind(|&x| x < lj).expect("c is below every j")
        }
    };
    let out = tree.map_leaves(shift).replace_leaf(attach, &Node::cherry(lj, attach));
    Ok((out.canonicalize(), k.inserted(j, 1)))
}

fn check_last(g: &TreeGraph, k: &Composition, j: usize, what: &str) -> Result<(), BijectionError> {
    let found = last_in(g, k);
    if found != LeafLabel::Num(j as u32) {
        return Err(BijectionError::NotInImage(format!("{what}: last leaf is {found}, not {j}")));
    }
    Ok(())
}

/// Undoes [`sigma_ij`]; `k` is the composition of `tree` and `i` its maxzero.
pub fn pi_ij(tree: &StableTree, k: &Composition, j: usize) -> Result<(StableTree, Composition), BijectionError> {
    let what = format!("sigma_{{i,{j}}}");
    let i = match maxzero(k) {
        Maxzero::At(i) if i < j && j <= k.len() => i,
        _ => return Err(BijectionError::NotInImage(format!("{what}: maxzero is not left of {j}"))),
    };
    if k.get(j) < 2 {
        return Err(BijectionError::NotInImage(format!("{what}: part {j} is below 2")));
    }
    let g = tree.graph();
    let lab = omega_labeling(&g, tree, k)?;
    check_last(&g, k, j, &what)?;
    let (li, lj) = (LeafLabel::Num(i as u32), LeafLabel::Num(j as u32));
    let jnode = g.node_of(lj).expect("leaf present");
    let v = sibling_leaf(&g, jnode).ok_or_else(|| BijectionError::NotInImage(format!("{what}: leaf {j} is not in a cherry")))?;
    let collapsed = tree.collapse_cherry(lj, lj);
    let restored = if v == li {
        collapsed
    } else {
        let pd = path_decomposition(&g, &lab, g.parent(jnode).expect("cherry vertex"))?;
        let m = &pd.minima;
        let l = m.len();
        let d = m.iter().position(|&x| x == li).ok_or_else(|| BijectionError::NotInImage(format!("{what}: {i} is not a branch minimum")))?;
        let end = if m[l - 1] < lj { l } else { l - 1 };
        if d >= end {
            return Err(BijectionError::NotInImage(format!("{what}: branch minima out of order")));
        }
        let mut map = HashMap::new();
        for t in d..end - 1 {
            map.insert(m[t], m[t + 1]);
        }
        map.insert(m[end - 1], v);
        substitute(&collapsed, &map)
    };
    let out = restored.map_leaves(shift_down_above(i as u32));
    Ok((out.canonicalize(), bump(k, j, -1).removed(i)))
}

/// Undoes [`sigma_j`]; `k` is the composition of `tree`.
pub fn pi_j(tree: &StableTree, k: &Composition, j: usize) -> Result<(StableTree, Composition), BijectionError> {
    let what = format!("sigma_{j}");
    if j == 0 || j > k.len() || k.get(j) != 1 {
        return Err(BijectionError::NotInImage(format!("{what}: part {j} is not 1")));
    }
    let g = tree.graph();
    omega_labeling(&g, tree, k)?;
    check_last(&g, k, j, &what)?;
    let lj = LeafLabel::Num(j as u32);
    let keep = sibling_leaf(&g, g.node_of(lj).expect("leaf present"))
        .ok_or_else(|| BijectionError::NotInImage(format!("{what}: leaf {j} is not in a cherry")))?;
    let out = tree.collapse_cherry(lj, keep).map_leaves(shift_down_above(j as u32));
    Ok((out.canonicalize(), k.removed(j)))
}

/// Maps `tree ∈ Slide(k^(j))` into `Slide(k)`.
pub fn big_sigma(tree: &StableTree, k: &Composition, j: usize) -> Result<(StableTree, BijectionStep), BijectionError> {
    let before = derive(k, j)?;
    let kind = if k.get(j) > 1 { StepKind::SigmaIJ { i: maxzero(k).index(), j } } else { StepKind::SigmaJ { j } };
    let (out, after) = match kind {
        StepKind::SigmaIJ { i, j } => sigma_ij(tree, &before, i, j)?,
        StepKind::SigmaJ { j } => sigma_j(tree, &before, j)?,
    };
    debug_assert_eq!(&after, k);
    Ok((out, BijectionStep { kind, before, after }))
}

/// Inverse of [`big_sigma`]: finds the summand of `D(k)` that `tree` comes from.
pub fn big_pi(tree: &StableTree, k: &Composition) -> Result<(StableTree, BijectionStep), BijectionError> {
    let g = tree.graph();
    omega_labeling(&g, tree, k)?;
    let j = last_in(&g, k).num().ok_or_else(|| BijectionError::Precondition("empty tree has no preimage".into()))? as usize;
    let (kind, (out, before)) = if k.get(j) > 1 {
        (StepKind::SigmaIJ { i: maxzero(k).index(), j }, pi_ij(tree, k, j)?)
    } else {
        (StepKind::SigmaJ { j }, pi_j(tree, k, j)?)
    };
    Ok((out, BijectionStep { kind, before, after: k.clone() }))
}

/// The steps building `tree` from the base star, first step first.
pub fn steps_of(tree: &StableTree, k: &Composition) -> Result<Vec<BijectionStep>, BijectionError> {
    let mut steps = Vec::new();
    let (mut cur, mut kk) = (tree.clone(), k.clone());
    while !kk.is_empty() {
        let (prev, step) = big_pi(&cur, &kk)?;
        kk = step.before.clone();
        cur = prev;
        steps.push(step);
    }
    if cur != StableTree::base() {
        return Err(BijectionError::Precondition(format!("peeling ended at {cur}")));
    }
    steps.reverse();
    Ok(steps)
}

/// The word of an ω slide tree.
pub fn word_of(tree: &StableTree, k: &Composition) -> Result<Word, BijectionError> {
    Ok(steps_of(tree, k)?.iter().fold(Word::default(), |w, s| s.kind.apply_to_word(&w)))
}

/// One stage of reading a word back into a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub word: Word,
    /// The step that appended the final letter of `word`.
    pub step: StepKind,
    pub tree: StableTree,
    pub composition: Composition,
}

fn invalid(w: &Word, reason: impl Into<String>) -> BijectionError {
    BijectionError::InvalidWord { word: w.clone(), reason: reason.into() }
}

/// Peels a word into its insertion steps, longest word first.
pub fn decode_word(w: &Word) -> Result<Vec<(Word, StepKind)>, BijectionError> {
    let mut out = Vec::new();
    let mut cur = w.clone();
    while let Some(j) = cur.last() {
        let k = cur.content().map_err(|e| invalid(w, e.to_string()))?;
        let j = j as usize;
        let z = maxzero(&k).index();
        if j <= z {
            return Err(invalid(w, format!("letter {j} of {cur} is not right of the rightmost zero {z}")));
        }
        let prefix = Word::new(cur.letters()[..cur.len() - 1].to_vec());
        let (kind, above) = if k.get(j) > 1 { (StepKind::SigmaIJ { i: z, j }, z) } else { (StepKind::SigmaJ { j }, j) };
        let prev = prefix.map(|x| if x as usize > above { x - 1 } else { x });
        out.push((cur, kind));
        cur = prev;
    }
    Ok(out)
}

/// Every intermediate tree of [`tree_of_word`], longest word first.
pub fn insertion_chain(w: &Word) -> Result<Vec<ChainLink>, BijectionError> {
    let decoded = decode_word(w)?;
    let mut tree = StableTree::base();
    let mut k = Composition::new(Vec::new());
    let mut links = Vec::with_capacity(decoded.len());
    for (word, step) in decoded.into_iter().rev() {
        let res = match step {
            StepKind::SigmaIJ { i, j } => sigma_ij(&tree, &k, i, j),
            StepKind::SigmaJ { j } => sigma_j(&tree, &k, j),
        };
        (tree, k) = res.map_err(|e| invalid(w, format!("{step} on {word}: {e}")))?;
        links.push(ChainLink { word, step, tree: tree.clone(), composition: k.clone() });
    }
    links.reverse();
    Ok(links)
}

/// The ω slide tree with word `w`, checked for membership.
pub fn tree_of_word(w: &Word) -> Result<StableTree, BijectionError> {
    let chain = insertion_chain(w)?;
    let tree = chain.first().map_or_else(StableTree::base, |l| l.tree.clone());
    let k = w.content()?;
    let g = tree.graph();
    omega_labeling(&g, &tree, &k).map_err(|e| invalid(w, e.to_string()))?;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::parse_tree;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn last_matches_final_letter() {
        let t = parse_tree("(a,b,((6,1),(5,(c,(4,(3,2))))))").unwrap();
        let k = c("0,0,2,1,1,2");
        let word = word_of(&t, &k).unwrap();
        assert_eq!(last(&t, &k).unwrap(), LeafLabel::Num(word.last().unwrap()));
        assert_eq!(tree_of_word(&word).unwrap(), t.canonicalize());
    }

    #[test]
    fn last_of_base_is_c() {
        assert_eq!(last(&StableTree::base(), &c("")).unwrap(), LeafLabel::C);
    }

    #[test]
    fn min2_of_small_branch() {
        let t = parse_tree("(a,b,(2,(1,c)))").unwrap();
        let g = t.graph();
        let cherry = g.parent(g.node_of(LeafLabel::C).unwrap()).unwrap();
        assert_eq!(g.leaf(min2(&g, cherry).unwrap()), Some(LeafLabel::Num(1)));
        assert_eq!(min2(&g, g.node_of(LeafLabel::C).unwrap()), Err(BijectionError::SingleLeaf));
    }

    #[test]
    fn small_words() {
        let t = parse_tree("(a,b,(2,(1,c)))").unwrap();
        assert_eq!(word_of(&t, &c("1,1")).unwrap(), w("21"));
        assert_eq!(tree_of_word(&w("21")).unwrap(), t.canonicalize());
        assert_eq!(tree_of_word(&w("1")).unwrap().to_string(), "(a,b,(c,1))");
        assert_eq!(word_of(&StableTree::base(), &c("")).unwrap(), Word::default());
    }

    #[test]
    fn worked_chain() {
        let chain = insertion_chain(&w("73584757")).unwrap();
        let words: Vec<String> = chain.iter().map(|l| l.word.to_string()).collect();
        assert_eq!(words, ["73584757", "6357465", "524635", "41352", "3124", "312", "21", "1"]);
        let steps: Vec<String> = chain.iter().map(|l| l.step.to_string()).collect();
        assert_eq!(
            steps,
            ["sigma_{6,7}", "sigma_{2,5}", "sigma_{1,5}", "sigma_2", "sigma_4", "sigma_2", "sigma_1", "sigma_1"]
        );
        let k = c("0,0,1,1,2,0,3,1");
        assert_eq!(chain[0].composition, k);
        assert!(crate::slide_rules::is_member(&chain[0].tree, &k, SlideRule::Omega).unwrap());
        assert_eq!(word_of(&chain[0].tree, &k).unwrap(), w("73584757"));
    }

    #[test]
    fn sigma_two_attaches_at_leaf_one() {
        // last is 4 with sibling 2; both exceed 2 after shifting.
        let t = tree_of_word(&w("3124")).unwrap();
        let k = c("1,1,1,1");
        let pd = decompose_to_leaf(&t, &k, LeafLabel::Num(4)).unwrap();
        assert_eq!(pd.runs, vec![vec![3, 1], vec![2], vec![4]]);
        assert_eq!(pd.minima, vec![LeafLabel::C, LeafLabel::Num(1), LeafLabel::Num(2)]);
        let (t2, _) = sigma_j(&t, &k, 2).unwrap();
        let g = t2.graph();
        assert_eq!(sibling_leaf(&g, g.node_of(LeafLabel::Num(2)).unwrap()), Some(LeafLabel::Num(1)));
    }

    #[test]
    fn rejects_bad_words() {
        assert!(tree_of_word(&w("11")).is_err());
        assert!(tree_of_word(&w("12")).is_ok());
        assert!(tree_of_word(&w("3")).is_err());
    }
}
