//! Word reduction and pattern containment: classical, vincular, and the
//! barred predicate `23-~2-1`.
//!
//! Containment uses reduction semantics, so equal letters in the pattern
//! must match equal letters in the host.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::compositions::Composition;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("cannot reduce an empty word")]
    Empty,
    #[error("cannot parse pattern {0:?}")]
    Parse(String),
}

/// Replaces the i-th smallest distinct letter by `i`.
pub fn reduce(w: &Word) -> Result<Word, PatternError> {
    if w.is_empty() {
        return Err(PatternError::Empty);
    }
    let mut distinct = w.letters().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(w.map(|x| distinct.binary_search(&x).expect("letter present") as u32 + 1))
}

/// Pattern letters with adjacency flags between consecutive letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VincularPattern {
    letters: Vec<u32>,
    /// `adjacent[t]` forces letters `t` and `t + 1` to be adjacent in the host.
    adjacent: Vec<bool>,
}

impl VincularPattern {
    pub fn new(letters: Vec<u32>, adjacent: Vec<bool>) -> VincularPattern {
        assert_eq!(adjacent.len() + 1, letters.len().max(1), "one flag per gap");
        VincularPattern { letters, adjacent }
    }

    /// No adjacency requirements.
    pub fn classical(letters: Vec<u32>) -> VincularPattern {
        let gaps = letters.len().saturating_sub(1);
        VincularPattern { letters, adjacent: vec![false; gaps] }
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn adjacent(&self) -> &[bool] {
        &self.adjacent
    }
}

impl fmt::Display for VincularPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classical = self.adjacent.iter().all(|a| !a) && self.letters.len() > 1;
        for (t, l) in self.letters.iter().enumerate() {
            if t > 0 && (classical || !self.adjacent[t - 1]) {
                f.write_str("-")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A pattern as written on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Vincular(VincularPattern),
    /// `23-~2-1`: every `23-1` occurrence must have a copy of its `2`
    /// between the `3` and the `1`.
    Barred2321,
}

impl Pattern {
    pub fn is_avoided_by(&self, w: &Word) -> bool {
        match self {
            Pattern::Vincular(p) => !contains_vincular(w, p),
            Pattern::Barred2321 => avoids_23bar2_1(w),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Vincular(p) => p.fmt(f),
            Pattern::Barred2321 => f.write_str("23-~2-1"),
        }
    }
}

/// Digits with `-` between letters that may be apart. Without any dash the
/// pattern is classical; with dashes, undashed neighbours must be adjacent.
impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "23-~2-1" {
            return Ok(Pattern::Barred2321);
        }
        let err = || PatternError::Parse(s.to_string());
        if s.is_empty() || s.contains('~') {
            return Err(err());
        }
        let mut letters = Vec::new();
        let mut adjacent = Vec::new();
        let mut dash = false;
        for ch in s.chars() {
            match ch {
                '-' if !letters.is_empty() && !dash => dash = true,
                d if d.is_ascii_digit() && d != '0' => {
                    if !letters.is_empty() {
                        adjacent.push(!dash);
                    }
                    letters.push(d.to_digit(10).expect("digit"));
                    dash = false;
                }
                _ => return Err(err()),
            }
        }
        if dash {
            return Err(err());
        }
        if !s.contains('-') {
            adjacent.iter_mut().for_each(|a| *a = false);
        }
        Ok(Pattern::Vincular(VincularPattern { letters, adjacent }))
    }
}

/// Whether some subsequence of `w` is order-isomorphic to `p` and meets its
/// adjacency flags. Plain backtracking.
pub fn contains_vincular(w: &Word, p: &VincularPattern) -> bool {
    fn go(w: &[u32], p: &VincularPattern, chosen: &mut Vec<usize>) -> bool {
        let t = chosen.len();
        if t == p.letters.len() {
            return true;
        }
        let range = match chosen.last() {
            None => 0..w.len(),
            Some(&prev) if p.adjacent[t - 1] => prev + 1..(prev + 2).min(w.len()),
            Some(&prev) => prev + 1..w.len(),
        };
        for pos in range {
            let fits = chosen.iter().enumerate().all(|(s, &q)| p.letters[s].cmp(&p.letters[t]) == w[q].cmp(&w[pos]));
            if fits {
                chosen.push(pos);
                if go(w, p, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    p.letters.is_empty() || go(w.letters(), p, &mut Vec::new())
}

/// No `p < q < r` with `w_p = w_r > w_q`.
pub fn avoids_212(w: &Word) -> bool {
    let l = w.letters();
    // Between two equal letters nothing smaller may occur.
    for (p, &x) in l.iter().enumerate() {
        if let Some(r) = l[p + 1..].iter().position(|&y| y == x) {
            if l[p + 1..p + 1 + r].iter().any(|&y| y < x) {
                return false;
            }
        }
    }
    true
}

/// Every adjacent ascent `w_i < w_{i+1}` followed later by `w_j < w_i` has a
/// copy of `w_i` strictly between positions `i + 1` and `j`.
pub fn avoids_23bar2_1(w: &Word) -> bool {
    let l = w.letters();
    for i in 0..l.len().saturating_sub(1) {
        if l[i] >= l[i + 1] {
            continue;
        }
        let mut seen_copy = false;
        for &x in &l[i + 2..] {
            if x == l[i] {
                seen_copy = true;
            } else if x < l[i] && !seen_copy {
                return false;
            }
        }
    }
    true
}

/// A word split around its earliest `23-1` occurrence as
/// `prefix · x · y · middle · z · suffix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Earliest231 {
    pub prefix: Word,
    pub x: u32,
    pub y: u32,
    pub middle: Word,
    pub z: u32,
    pub suffix: Word,
}

/// The leftmost adjacent ascent `x y` with a later letter below `x`, and the
/// first such letter `z`.
pub fn earliest_231(w: &Word) -> Option<Earliest231> {
    let l = w.letters();
    for i in 0..l.len().saturating_sub(1) {
        if l[i] >= l[i + 1] {
            continue;
        }
        if let Some(off) = l[i + 2..].iter().position(|&z| z < l[i]) {
            let zpos = i + 2 + off;
            return Some(Earliest231 {
                prefix: Word::new(l[..i].to_vec()),
                x: l[i],
                y: l[i + 1],
                middle: Word::new(l[i + 2..zpos].to_vec()),
                z: l[zpos],
                suffix: Word::new(l[zpos + 1..].to_vec()),
            });
        }
    }
    None
}

/// All words with letter multiplicities `k`, in lexicographic order.
pub fn words_of_content(k: &Composition) -> Vec<Word> {
    let mut cur: Vec<u32> = k.parts().iter().enumerate().flat_map(|(i, &m)| std::iter::repeat_n(i as u32 + 1, m as usize)).collect();
    let mut out = vec![Word::new(cur.clone())];
    while next_permutation(&mut cur) {
        out.push(Word::new(cur.clone()));
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("ascent exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Words of content `k` avoiding every pattern in `patterns`.
pub fn enumerate_avoiders(k: &Composition, patterns: &[Pattern]) -> Vec<Word> {
    words_of_content(k).into_iter().filter(|w| patterns.iter().all(|p| p.is_avoided_by(w))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn p(s: &str) -> VincularPattern {
        match s.parse().unwrap() {
            Pattern::Vincular(v) => v,
            Pattern::Barred2321 => unreachable!(),
        }
    }

    #[test]
    fn reductions() {
        assert_eq!(reduce(&w("2574")).unwrap(), w("1342"));
        assert_eq!(reduce(&w("4664")).unwrap(), w("1221"));
        assert_eq!(reduce(&w("777")).unwrap(), w("111"));
        assert_eq!(reduce(&Word::default()), Err(PatternError::Empty));
    }

    #[test]
    fn parsing() {
        assert_eq!(p("23-1").adjacent(), &[true, false]);
        assert_eq!(p("231").adjacent(), &[false, false]);
        assert_eq!(p("2-1-2").to_string(), "2-1-2");
        assert_eq!(p("23-1").to_string(), "23-1");
        assert_eq!("23-~2-1".parse::<Pattern>().unwrap(), Pattern::Barred2321);
        for bad in ["", "2--1", "-21", "21-", "2a", "20", "~21"] {
            assert!(bad.parse::<Pattern>().is_err(), "{bad}");
        }
    }

    #[test]
    fn containment_examples() {
        assert!(contains_vincular(&w("32541"), &p("23-1")));
        assert!(!contains_vincular(&w("43152"), &p("23-1")));
        assert!(contains_vincular(&w("43152"), &p("231")));
        assert!(contains_vincular(&w("14352"), &p("123")));
        assert!(contains_vincular(&w("24665347"), &p("1221")));
    }

    #[test]
    fn repeated_letter_patterns() {
        assert!(avoids_212(&w("666224")));
        assert!(!avoids_212(&w("313321")));
        assert!(avoids_212(&w("12345")));
        assert!(avoids_23bar2_1(&w("35432")));
        assert!(!avoids_23bar2_1(&w("351")));
        assert!(avoids_23bar2_1(&w("546643")));
    }

    #[test]
    fn earliest_decomposition() {
        let e = earliest_231(&w("853769421")).unwrap();
        assert_eq!((e.prefix, e.x, e.y, e.middle, e.z, e.suffix), (w("85"), 3, 7, w("694"), 2, w("1")));
        let e = earliest_231(&w("231")).unwrap();
        assert!(e.prefix.is_empty() && e.middle.is_empty() && e.suffix.is_empty());
        assert_eq!(earliest_231(&w("43152")), None);
    }

    #[test]
    fn multiset_permutations() {
        let all = words_of_content(&"1,2".parse().unwrap());
        assert_eq!(all, vec![w("122"), w("212"), w("221")]);
        let av = enumerate_avoiders(&Composition::ones(3), &["23-1".parse().unwrap()]);
        assert_eq!(av.len(), 5);
        assert!(!av.contains(&w("231")));
        let both = enumerate_avoiders(&"0,1,2,1".parse().unwrap(), &["2-1-2".parse().unwrap(), Pattern::Barred2321]);
        // Seven of the twelve words; they match the caterpillars of the slide set.
        assert_eq!(both.len(), 7);
    }
}
