//! Parking functions on Dyck paths, dominance, and column-restricted
//! parking functions.
//!
//! A parking function is stored as its word: `columns[x - 1]` is the column
//! holding label `x`. Labels within a column increase from bottom to top, so
//! the word determines the drawing.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bijection::{tree_of_word, BijectionError};
use crate::compositions::Composition;
use crate::patterns::words_of_content;
use crate::trees::StableTree;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParkingError {
    #[error("cannot parse parking function entry {0:?}")]
    Parse(String),
    #[error("column {column} is outside 1..={n}")]
    ColumnOutOfRange { column: u32, n: usize },
    #[error("labels are not exactly 1..={0}")]
    Labels(usize),
    #[error("path drops below the diagonal after column {0}")]
    NotDyck(usize),
    #[error("label {label} dominates {dominated} columns")]
    NotColumnRestricted { label: u32, dominated: usize },
    #[error(transparent)]
    Bijection(#[from] BijectionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParkingFunction {
    columns: Vec<u32>,
}

/// Whether a path with `k_c` labels in column `c` stays weakly above the diagonal.
///
/// The path starts at the top left, steps right once per column and down once
/// per label; it may never be further down than it is right.
pub fn is_dyck(k: &Composition) -> bool {
    dyck_violation(k).is_none()
}

fn dyck_violation(k: &Composition) -> Option<usize> {
    let (mut right, mut down) = (0u64, 0u64);
    for (c, &kc) in k.parts().iter().enumerate() {
        right += 1;
        down += u64::from(kc);
        if down > right {
            return Some(c + 1);
        }
    }
    None
}

impl ParkingFunction {
    /// From the word `u` with `u_x` the column of label `x`.
    pub fn from_word(word: &Word) -> Result<ParkingFunction, ParkingError> {
        let n = word.len();
        if let Some(&column) = word.letters().iter().find(|&&c| c == 0 || c as usize > n) {
            return Err(ParkingError::ColumnOutOfRange { column, n });
        }
        let pf = ParkingFunction { columns: word.letters().to_vec() };
        if let Some(c) = dyck_violation(&pf.composition()) {
            return Err(ParkingError::NotDyck(c));
        }
        Ok(pf)
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn column_of(&self, x: u32) -> u32 {
        self.columns[x as usize - 1]
    }

    /// Column multiplicities.
    pub fn composition(&self) -> Composition {
        let mut parts = vec![0u32; self.columns.len()];
        for &c in &self.columns {
            parts[c as usize - 1] += 1;
        }
        Composition::new(parts)
    }

    /// Labels in column `c`, bottom to top.
    pub fn column(&self, c: u32) -> Vec<u32> {
        (1..=self.n() as u32).filter(|&x| self.column_of(x) == c).collect()
    }

    /// The word `w` with `w_x` the column of `x`.
    pub fn word(&self) -> Word {
        Word::new(self.columns.clone())
    }

    /// Number of columns right of `x` whose entries are all below `x`.
    pub fn dominance_index(&self, x: u32) -> usize {
        let mut max_in = vec![0u32; self.n() + 1];
        for (idx, &c) in self.columns.iter().enumerate() {
            max_in[c as usize] = max_in[c as usize].max(idx as u32 + 1);
        }
        let col = self.column_of(x) as usize;
        max_in[col + 1..].iter().filter(|&&m| m < x).count()
    }

    /// The first label breaking `d(x) < x`, if any.
    pub fn column_restriction_violation(&self) -> Option<(u32, usize)> {
        (1..=self.n() as u32).map(|x| (x, self.dominance_index(x))).find(|&(x, d)| d >= x as usize)
    }

    pub fn is_cpf(&self) -> bool {
        self.column_restriction_violation().is_none()
    }
}

/// The word of a parking function.
pub fn pf_word(p: &ParkingFunction) -> Word {
    p.word()
}

impl fmt::Display for ParkingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, c) in self.columns.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{c}", idx + 1)?;
        }
        Ok(())
    }
}

/// Parses `label:column` pairs in any order.
impl FromStr for ParkingFunction {
    type Err = ParkingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ParkingFunction { columns: Vec::new() });
        }
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let parsed = item.split_once(':').and_then(|(x, c)| Some((x.trim().parse::<usize>().ok()?, c.trim().parse::<u32>().ok()?)));
            pairs.push(parsed.ok_or_else(|| ParkingError::Parse(item.to_string()))?);
        }
        let n = pairs.len();
        let mut columns = vec![0u32; n];
        for (x, c) in pairs {
            if x == 0 || x > n || columns[x - 1] != 0 {
                return Err(ParkingError::Labels(n));
            }
            columns[x - 1] = c;
        }
        ParkingFunction::from_word(&Word::new(columns))
    }
}

/// All parking functions with column multiplicities `k`, ordered by word.
pub fn enumerate_pf(k: &Composition) -> Vec<ParkingFunction> {
    if !is_dyck(k) {
        return Vec::new();
    }
    words_of_content(k).into_iter().map(|w| ParkingFunction { columns: w.into_letters() }).collect()
}

/// The column-restricted members of [`enumerate_pf`].
pub fn enumerate_cpf(k: &Composition) -> Vec<ParkingFunction> {
    enumerate_pf(k).into_iter().filter(ParkingFunction::is_cpf).collect()
}

/// The ω slide tree whose word is the reverse of the word of `p`.
pub fn cpf_to_slide(p: &ParkingFunction) -> Result<StableTree, ParkingError> {
    if let Some((label, dominated)) = p.column_restriction_violation() {
        return Err(ParkingError::NotColumnRestricted { label, dominated });
    }
    Ok(tree_of_word(&p.word().reversed())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pictured() -> ParkingFunction {
        ParkingFunction::from_word(&"536266".parse().unwrap()).unwrap()
    }

    #[test]
    fn dominance_of_pictured_function() {
        let p = pictured();
        assert_eq!(p.composition().to_string(), "0,1,1,0,1,3");
        let d: Vec<usize> = (1..=6).map(|x| p.dominance_index(x)).collect();
        assert_eq!(d, vec![0, 2, 0, 3, 0, 0]);
        assert!(!p.is_cpf());
        assert!(enumerate_pf(&p.composition()).contains(&p));
    }

    #[test]
    fn worked_cpf() {
        let p: ParkingFunction = "1:7,2:5,3:7,4:4,5:8,6:5,7:3,8:7".parse().unwrap();
        assert!(p.is_cpf());
        assert_eq!(p.word().to_string(), "75748537");
        assert_eq!(p.composition().to_string(), "0,0,1,1,2,0,3,1");
        assert_eq!(p.column(7), vec![1, 3, 8]);
        assert_eq!(p.to_string(), "1:7,2:5,3:7,4:4,5:8,6:5,7:3,8:7");
        let t = cpf_to_slide(&p).unwrap();
        assert_eq!(crate::bijection::word_of(&t, &p.composition()).unwrap().to_string(), "73584757");
    }

    #[test]
    fn path_validity() {
        assert!(is_dyck(&"0,0,3".parse().unwrap()));
        assert!(!is_dyck(&"2,0,1".parse().unwrap()));
        assert_eq!(ParkingFunction::from_word(&"11".parse().unwrap()), Err(ParkingError::NotDyck(1)));
        assert!(enumerate_pf(&"2,0,1".parse().unwrap()).is_empty());
        assert_eq!(enumerate_pf(&"0,0,0,4".parse().unwrap()).len(), 1);
        assert_eq!(enumerate_pf(&Composition::ones(4)).len(), 24);
    }

    #[test]
    fn rejects_bad_text() {
        assert!("1:1,1:2".parse::<ParkingFunction>().is_err());
        assert!("1-2".parse::<ParkingFunction>().is_err());
        assert!(cpf_to_slide(&pictured()).is_err());
    }
}
