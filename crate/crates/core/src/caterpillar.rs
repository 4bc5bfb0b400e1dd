//! Caterpillar slide trees and their edge words.
//!
//! A caterpillar's internal edges form a path, so its slide labels read from
//! the root form a word. [`tree_of_caterpillar_word`] builds the only
//! caterpillar that could carry a given word, and [`caterpillar_member`]
//! decides membership from the word alone.

use thiserror::Error;

use crate::compositions::{is_reverse_catalan, Composition};
use crate::patterns::{avoids_212, avoids_23bar2_1, words_of_content};
use crate::slide_rules::{is_member, slide_labeling, SlideRule};
use crate::trees::{LeafLabel, Node, StableTree, TreeGraph};
use crate::word::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaterpillarError {
    #[error("word {0} contains 2-1-2")]
    Contains212(Word),
    #[error("word {0} leaves no label for a nondescent leaf")]
    OutOfLabels(Word),
    #[error("letter {0} does not occur in the word")]
    AbsentLetter(u32),
    #[error("tree is not a caterpillar")]
    NotCaterpillar,
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafKind {
    Descent,
    Nondescent,
}

/// The leaves of a caterpillar read from the root.
///
/// `gaps[t]` is the leaf between edges `t` and `t + 1`; `end` holds the two
/// leaves past the last edge, descent leaf first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaterpillarLayout {
    pub edges: Word,
    pub gaps: Vec<(LeafKind, LeafLabel)>,
    pub end: [(LeafKind, LeafLabel); 2],
}

impl CaterpillarLayout {
    /// Leaf labels from the root outward, excluding `a` and `b`.
    pub fn leaf_order(&self) -> Vec<LeafLabel> {
        if self.edges.is_empty() {
            return vec![LeafLabel::C];
        }
        self.gaps.iter().chain(self.end.iter()).map(|&(_, l)| l).collect()
    }

    pub fn tree(&self) -> StableTree {
        if self.edges.is_empty() {
            return StableTree::base();
        }
        let mut node = Node::Internal(vec![Node::Leaf(self.end[0].1), Node::Leaf(self.end[1].1)]);
        for &(_, leaf) in self.gaps.iter().rev() {
            node = Node::Internal(vec![Node::Leaf(leaf), node]);
        }
        StableTree::new_unchecked(vec![Node::Leaf(LeafLabel::B), node]).canonicalize()
    }
}

/// Places the leaves of the candidate caterpillar for `w`.
///
/// A leaf after a strict descent takes the label of the edge on its left.
/// The rest take the smallest unused label, or the second smallest when the
/// smallest equals the edge on their right.
pub fn caterpillar_layout(w: &Word) -> Result<CaterpillarLayout, CaterpillarError> {
    if !avoids_212(w) {
        return Err(CaterpillarError::Contains212(w.clone()));
    }
    let l = w.letters();
    let n = l.len();
    if n == 0 {
        // No edges: the star (a,b,c). Only `c` is placed.
        let end = [(LeafKind::Nondescent, LeafLabel::C); 2];
        return Ok(CaterpillarLayout { edges: w.clone(), gaps: Vec::new(), end });
    }
    let mut kinds: Vec<LeafKind> = l.windows(2).map(|p| if p[0] > p[1] { LeafKind::Descent } else { LeafKind::Nondescent }).collect();
    kinds.push(LeafKind::Descent);
    kinds.push(LeafKind::Nondescent);
    let mut used = vec![false; n + 2];
    let slot = |leaf: LeafLabel| match leaf {
        LeafLabel::C => 0,
        LeafLabel::Num(x) => x as usize,
        _ => unreachable!("only c and numbers are placed"),
    };
    for (t, kind) in kinds.iter().enumerate() {
        if *kind == LeafKind::Descent {
            let x = l[t] as usize;
            if x > n || used[x] {
                return Err(CaterpillarError::Contains212(w.clone()));
            }
            used[x] = true;
        }
    }
    let mut labels = Vec::with_capacity(n + 1);
    for (t, kind) in kinds.iter().enumerate() {
        let label = match kind {
            LeafKind::Descent => LeafLabel::Num(l[t]),
            LeafKind::Nondescent => {
                let right_edge = l.get(t + 1).map(|&x| LeafLabel::Num(x));
                let mut free = (0..=n).filter(|&s| !used[s]).map(|s| if s == 0 { LeafLabel::C } else { LeafLabel::Num(s as u32) });
                let first = free.next().ok_or_else(|| CaterpillarError::OutOfLabels(w.clone()))?;
                let pick = if Some(first) == right_edge {
                    free.next().ok_or_else(|| CaterpillarError::OutOfLabels(w.clone()))?
                } else {
                    first
                };
                used[slot(pick)] = true;
                pick
            }
        };
        labels.push((*kind, label));
    }
    let end = [labels[n - 1], labels[n]];
    labels.truncate(n - 1);
    Ok(CaterpillarLayout { edges: w.clone(), gaps: labels, end })
}

/// The caterpillar tree `Tree(w)`.
pub fn tree_of_caterpillar_word(w: &Word) -> Result<StableTree, CaterpillarError> {
    Ok(caterpillar_layout(w)?.tree())
}

/// The spine labels of a labeled caterpillar, read from the root.
pub fn spine_word(tree: &StableTree, k: &Composition, rule: SlideRule) -> Option<Word> {
    if !tree.is_caterpillar() {
        return None;
    }
    let lab = slide_labeling(tree, k, rule).ok()?.into_labeling()?;
    let g = tree.graph();
    let mut out = Vec::new();
    let mut cur = g.internal_children(TreeGraph::ROOT).next();
    while let Some(v) = cur {
        out.push(lab.label(v)?);
        cur = g.internal_children(v).next();
    }
    Some(Word::new(out))
}

/// Statistics of a letter `i` in a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordStats {
    /// Length of the rightmost block of consecutive `i`s.
    pub ell: usize,
    /// Repeats right of the rightmost `i`: each other letter counts one less
    /// than its multiplicity there.
    pub total_rep: usize,
    /// As `total_rep`, counting only letters above `i`.
    pub big_rep: usize,
    /// Number of zero parts of the content right of position `i`.
    pub z: usize,
}

pub fn word_stats(w: &Word, i: u32) -> Result<WordStats, CaterpillarError> {
    let l = w.letters();
    let last = l.iter().rposition(|&x| x == i).ok_or(CaterpillarError::AbsentLetter(i))?;
    let ell = l[..=last].iter().rev().take_while(|&&x| x == i).count();
    let n = l.len();
    let mut counts = vec![0usize; n + 2];
    for &x in &l[last + 1..] {
        counts[(x as usize).min(n + 1)] += 1;
    }
    let repeats = |from: usize| counts[from..].iter().map(|&c| c.saturating_sub(1)).sum::<usize>();
    let total_rep = repeats(1);
    let big_rep = repeats(i as usize + 1);
    let k = w.content()?;
    let z = (i as usize + 1..=n).filter(|&j| k.get(j) == 0).count();
    Ok(WordStats { ell, total_rep, big_rep, z })
}

/// Whether `Tree(w)` lies in the slide set for the content of `w`, decided
/// from the word alone.
pub fn caterpillar_member(w: &Word, rule: SlideRule) -> bool {
    let Ok(k) = w.content() else { return false };
    if !is_reverse_catalan(&k) || !avoids_212(w) || !avoids_23bar2_1(w) {
        return false;
    }
    (1..=w.len() as u32).filter(|&i| k.get(i as usize) > 0).all(|i| {
        let s = word_stats(w, i).expect("letter occurs");
        match rule {
            SlideRule::Psi => s.total_rep + s.ell >= s.z,
            SlideRule::Omega => s.big_rep >= s.z,
        }
    })
}

/// Same question answered by running the labeling algorithm on `Tree(w)`.
pub fn caterpillar_member_by_labeling(w: &Word, rule: SlideRule) -> bool {
    let (Ok(k), Ok(t)) = (w.content(), tree_of_caterpillar_word(w)) else { return false };
    is_reverse_catalan(&k) && is_member(&t, &k, rule).unwrap_or(false) && spine_word(&t, &k, rule).as_ref() == Some(w)
}

/// Words of content `k` passing [`caterpillar_member`].
pub fn enumerate_caterpillar_words(k: &Composition, rule: SlideRule) -> Vec<Word> {
    if !is_reverse_catalan(k) {
        return Vec::new();
    }
    words_of_content(k).into_iter().filter(|w| caterpillar_member(w, rule)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::parse_tree;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn skip_rule_layout() {
        let layout = caterpillar_layout(&w("666224")).unwrap();
        let order: Vec<String> = layout.leaf_order().iter().map(|l| l.to_string()).collect();
        assert_eq!(order, ["c", "1", "6", "3", "2", "4", "5"]);
        assert_eq!(layout.gaps[2].0, LeafKind::Descent);
        assert_eq!(layout.end[0], (LeafKind::Descent, LeafLabel::Num(4)));
    }

    #[test]
    fn sentinel_example() {
        let word = w("666224");
        let t = tree_of_caterpillar_word(&word).unwrap();
        let k = word.content().unwrap();
        assert!(is_member(&t, &k, SlideRule::Psi).unwrap());
        assert!(!is_member(&t, &k, SlideRule::Omega).unwrap());
        assert!(caterpillar_member(&word, SlideRule::Psi));
        assert!(!caterpillar_member(&word, SlideRule::Omega));
        assert_eq!(word_stats(&word, 2).unwrap().big_rep, 0);
        assert_eq!(word_stats(&word, 2).unwrap().z, 2);
    }

    #[test]
    fn decreasing_caterpillar() {
        assert_eq!(tree_of_caterpillar_word(&w("21")).unwrap(), parse_tree("(a,b,(2,(1,c)))").unwrap().canonicalize());
        assert_eq!(tree_of_caterpillar_word(&Word::default()).unwrap(), StableTree::base());
    }

    #[test]
    fn pictured_member() {
        let word = w("546643");
        let t = tree_of_caterpillar_word(&word).unwrap();
        let k = word.content().unwrap();
        assert_eq!(k.to_string(), "0,0,1,2,1,2");
        assert_eq!(spine_word(&t, &k, SlideRule::Omega), Some(word));
    }

    #[test]
    fn stats() {
        assert_eq!(word_stats(&w("313321"), 3).unwrap().ell, 2);
        let s = word_stats(&w("73584757"), 3).unwrap();
        assert_eq!((s.total_rep, s.big_rep), (2, 2));
        let s = word_stats(&w("73584757"), 7).unwrap();
        assert_eq!((s.total_rep, s.big_rep, s.ell), (0, 0, 1));
        assert_eq!(word_stats(&w("31"), 2), Err(CaterpillarError::AbsentLetter(2)));
    }

    #[test]
    fn rejects_212() {
        assert_eq!(tree_of_caterpillar_word(&w("212")), Err(CaterpillarError::Contains212(w("212"))));
    }

    #[test]
    fn constant_word() {
        assert_eq!(enumerate_caterpillar_words(&"0,0,3".parse().unwrap(), SlideRule::Omega), vec![w("333")]);
    }
}
