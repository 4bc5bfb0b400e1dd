//! Words over the positive integers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::compositions::Composition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("cannot parse word letter {0:?}")]
    Parse(String),
    #[error("letter {letter} does not fit a word of length {len}")]
    LetterOutOfRange { letter: u32, len: usize },
}

/// A finite sequence of positive integers.
///
/// Prints as a digit string when it has at most nine letters, all single
/// digits, and comma-separated otherwise. Both forms parse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn push(&mut self, letter: u32) {
        self.0.push(letter);
    }

    /// Letter multiplicities `k_1..k_n` with `n` the length of the word.
    pub fn content(&self) -> Result<Composition, WordError> {
        self.content_of_len(self.0.len())
    }

    /// Letter multiplicities `k_1..k_n` for a given `n`.
    pub fn content_of_len(&self, n: usize) -> Result<Composition, WordError> {
        let mut parts = vec![0u32; n];
        for &l in &self.0 {
            if l == 0 || l as usize > n {
                return Err(WordError::LetterOutOfRange { letter: l, len: n });
            }
            parts[l as usize - 1] += 1;
        }
        Ok(Composition::new(parts))
    }

    /// Applies `f` to every letter.
    pub fn map(&self, f: impl Fn(u32) -> u32) -> Word {
        Word(self.0.iter().map(|&l| f(l)).collect())
    }

    fn is_compact(&self) -> bool {
        self.0.len() <= 9 && self.0.iter().all(|&l| (1..=9).contains(&l))
    }
}

impl From<Vec<u32>> for Word {
    fn from(letters: Vec<u32>) -> Self {
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.is_compact() { "" } else { "," };
        for (idx, l) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::default());
        }
        let letter = |t: &str| match t.trim().parse::<u32>() {
            Ok(l) if l > 0 => Ok(l),
            _ => Err(WordError::Parse(t.to_string())),
        };
        if s.contains(',') {
            s.split(',').map(letter).collect::<Result<_, _>>().map(Word)
        } else {
            s.chars().map(|ch| letter(ch.encode_utf8(&mut [0; 4]))).collect::<Result<_, _>>().map(Word)
        }
    }
}
