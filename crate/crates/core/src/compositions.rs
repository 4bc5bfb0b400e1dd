//! Weak compositions, the reverse-Catalan condition, and the two
//! multinomial counts: the ordinary one and the asymmetric one defined by
//! the "remove the rightmost zero" recursion.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("cannot parse composition part {0:?}")]
    Parse(String),
    #[error("parts sum to {sum} but there are {len} of them")]
    Unbalanced { sum: u64, len: usize },
    #[error("index {index} is outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cannot derive at position {j}: {reason}")]
    NotDerivable { j: usize, reason: &'static str },
}

/// A finite sequence of nonnegative integers `k_1, ..., k_n`.
///
/// Positions are 1-based in every public method, matching the usual
/// notation. Most routines additionally want `sum = len`; see
/// [`Composition::is_balanced`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        Composition(parts)
    }

    /// `(1, 1, ..., 1)` of length `n`.
    pub fn ones(n: usize) -> Self {
        Composition(vec![1; n])
    }

    /// `(0, ..., 0, n)` of length `n`; empty for `n = 0`.
    pub fn concentrated(n: usize) -> Self {
        let mut parts = vec![0; n];
        if let Some(last) = parts.last_mut() {
            *last = n as u32;
        }
        Composition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&p| u64::from(p)).sum()
    }

    /// `k_i`, 1-based. Panics when `i` is out of range.
    pub fn get(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// Sum of parts equals the number of parts.
    pub fn is_balanced(&self) -> bool {
        self.total() == self.0.len() as u64
    }

    pub fn check_balanced(&self) -> Result<(), CompositionError> {
        if self.is_balanced() {
            Ok(())
        } else {
            Err(CompositionError::Unbalanced { sum: self.total(), len: self.len() })
        }
    }

    /// All zeros come before all nonzero parts.
    pub fn is_right_justified(&self) -> bool {
        let first_nonzero = self.0.iter().position(|&p| p != 0).unwrap_or(self.0.len());
        self.0[first_nonzero..].iter().all(|&p| p != 0)
    }

    /// Every balanced composition with `n` parts, in lexicographic order.
    pub fn all(n: usize) -> Vec<Composition> {
        fn go(rest: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if slots == 1 {
                cur.push(rest);
                out.push(Composition(cur.clone()));
                cur.pop();
                return;
            }
            for p in 0..=rest {
                cur.push(p);
                go(rest - p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push(Composition::default());
        } else {
            go(n as u32, n, &mut Vec::with_capacity(n), &mut out);
        }
        out
    }

    /// Copy with `value` inserted so that it becomes part `pos` (1-based).
    pub fn inserted(&self, pos: usize, value: u32) -> Composition {
        let mut parts = self.0.clone();
        parts.insert(pos - 1, value);
        Composition(parts)
    }

    /// Copy with part `pos` (1-based) removed.
    pub fn removed(&self, pos: usize) -> Composition {
        let mut parts = self.0.clone();
        parts.remove(pos - 1);
        Composition(parts)
    }
}

impl From<Vec<u32>> for Composition {
    fn from(parts: Vec<u32>) -> Self {
        Composition(parts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, p) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Composition {
    type Err = CompositionError;

    /// Comma-separated decimal parts; the empty string is the empty composition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Composition::default());
        }
        s.split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<u32>().map_err(|_| CompositionError::Parse(part.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Composition)
    }
}

/// Position of the rightmost zero part, or a sentinel below every position.
///
/// The derived order puts `Sentinel` before every `At(_)`, so comparisons
/// like `Maxzero::At(j) > maxzero(k)` behave as expected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Maxzero {
    Sentinel,
    At(usize),
}

impl Maxzero {
    /// The position, with the sentinel read as 0.
    pub fn index(self) -> usize {
        match self {
            Maxzero::Sentinel => 0,
            Maxzero::At(j) => j,
        }
    }
}

impl fmt::Display for Maxzero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Maxzero::Sentinel => f.write_str("c"),
            Maxzero::At(j) => write!(f, "{j}"),
        }
    }
}

/// True iff every suffix of length `i` sums to at least `i`.
pub fn is_reverse_catalan(k: &Composition) -> bool {
    let mut sum = 0u64;
    for (len, &p) in k.0.iter().rev().enumerate() {
        sum += u64::from(p);
        if sum < len as u64 + 1 {
            return false;
        }
    }
    true
}

pub fn maxzero(k: &Composition) -> Maxzero {
    match k.0.iter().rposition(|&p| p == 0) {
        Some(idx) => Maxzero::At(idx + 1),
        None => Maxzero::Sentinel,
    }
}

/// `z(i)`: the number of zero parts strictly to the right of position `i`.
pub fn zeros_right_of(k: &Composition, i: usize) -> Result<usize, CompositionError> {
    if i == 0 || i > k.len() {
        return Err(CompositionError::IndexOutOfRange { index: i, len: k.len() });
    }
    Ok(k.0[i..].iter().filter(|&&p| p == 0).count())
}

/// `k^{(j)}`: decrement `k_j`, then delete the rightmost zero.
pub fn derive(k: &Composition, j: usize) -> Result<Composition, CompositionError> {
    if j == 0 || j > k.len() {
        return Err(CompositionError::IndexOutOfRange { index: j, len: k.len() });
    }
    if j <= maxzero(k).index() {
        return Err(CompositionError::NotDerivable { j, reason: "position is not right of the rightmost zero" });
    }
    if k.get(j) == 0 {
        return Err(CompositionError::NotDerivable { j, reason: "part is zero" });
    }
    let mut parts = k.0.clone();
    parts[j - 1] -= 1;
    match parts.iter().rposition(|&p| p == 0) {
        Some(idx) => {
            parts.remove(idx);
        }
        None => {
            return Err(CompositionError::NotDerivable { j, reason: "no zero to remove" });
        }
    }
    Ok(Composition(parts))
}

/// Memo table for [`asym_multinomial`], reusable across calls.
#[derive(Debug, Default)]
pub struct AsymMemo {
    table: HashMap<Composition, BigUint>,
}

impl AsymMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, k: &Composition) -> Result<BigUint, CompositionError> {
        k.check_balanced()?;
        Ok(self.eval(k))
    }

    fn eval(&mut self, k: &Composition) -> BigUint {
        if k.is_empty() {
            return BigUint::one();
        }
        if let Some(v) = self.table.get(k) {
            return v.clone();
        }
        let start = maxzero(k).index() + 1;
        let mut total = BigUint::zero();
        for j in start..=k.len() {
            if k.get(j) == 0 {
                continue;
            }
            // Balanced input with a nonzero part right of every zero always derives.
            let child = derive(k, j).expect("balanced composition derives right of maxzero");
            total += self.eval(&child);
        }
        self.table.insert(k.clone(), total.clone());
        total
    }
}

/// The asymmetric multinomial coefficient, via the rightmost-zero recursion.
///
/// The empty composition counts 1. Non-reverse-Catalan input counts 0.
pub fn asym_multinomial(k: &Composition) -> Result<BigUint, CompositionError> {
    AsymMemo::new().get(k)
}

/// `(sum k)! / prod k_i!`.
pub fn multinomial(k: &Composition) -> BigUint {
    let mut result = BigUint::one();
    let mut seen = 0u64;
    for &p in &k.0 {
        // Multiply by C(seen + p, p) one factor at a time; every prefix stays integral.
        for t in 1..=u64::from(p) {
            result *= seen + t;
            result /= t;
        }
        seen += u64::from(p);
    }
    result
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, t| acc * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn reverse_catalan_examples() {
        assert!(is_reverse_catalan(&c("0,0,2,1,1,2")));
        assert!(is_reverse_catalan(&c("1,1,1,1")));
        assert!(!is_reverse_catalan(&c("2,0")));
        assert!(is_reverse_catalan(&c("")));
    }

    #[test]
    fn maxzero_examples() {
        assert_eq!(maxzero(&c("1,0,2,1")), Maxzero::At(2));
        assert_eq!(maxzero(&c("1,1,1")), Maxzero::Sentinel);
        assert_eq!(maxzero(&c("0,0,2,1,1,2")), Maxzero::At(2));
        assert!(Maxzero::Sentinel < Maxzero::At(1));
    }

    #[test]
    fn zeros_right_examples() {
        assert_eq!(zeros_right_of(&c("0,2,0,1,0,3"), 2), Ok(2));
        assert_eq!(zeros_right_of(&c("1,1,1"), 1), Ok(0));
        assert_eq!(zeros_right_of(&c("0,0,1,1,2,0,3,1"), 4), Ok(1));
        assert!(zeros_right_of(&c("1"), 2).is_err());
    }

    #[test]
    fn derive_examples() {
        assert_eq!(derive(&c("1,0,2,1"), 3).unwrap(), c("1,1,1"));
        assert_eq!(derive(&c("1,0,2,1"), 4).unwrap(), c("1,0,2"));
        assert_eq!(derive(&c("1,1"), 2).unwrap(), c("1"));
        assert!(derive(&c("1,0,2,1"), 2).is_err());
        assert!(derive(&c("1,0,2,1"), 1).is_err());
        assert!(derive(&c("0,2,0,1"), 3).is_err());
    }

    #[test]
    fn asym_examples() {
        let v = |s: &str| asym_multinomial(&c(s)).unwrap();
        assert_eq!(v("1,0,2,1"), BigUint::from(8u32));
        assert_eq!(v("0,1,2,1"), BigUint::from(12u32));
        assert_eq!(v("1,1,1,1"), BigUint::from(24u32));
        assert_eq!(v("0,0,0,4"), BigUint::from(1u32));
        assert_eq!(v("1,2,1,0"), BigUint::from(0u32));
        assert_eq!(v(""), BigUint::from(1u32));
        assert!(asym_multinomial(&c("1,2")).is_err());
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&c("1,0,2,1")), BigUint::from(12u32));
        assert_eq!(multinomial(&c("0,0,0,4")), BigUint::from(1u32));
        assert_eq!(multinomial(&c("1,1,1,1")), BigUint::from(24u32));
        assert_eq!(multinomial(&c("")), BigUint::from(1u32));
    }

    #[test]
    fn all_compositions_counts() {
        // C(2n-1, n) balanced compositions with n parts.
        let counts: Vec<usize> = (0..=6).map(|n| Composition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 10, 35, 126, 462]);
        assert!(Composition::all(4).iter().all(Composition::is_balanced));
    }

    #[test]
    fn right_justified() {
        assert!(c("0,1,2,1").is_right_justified());
        assert!(!c("1,0,2,1").is_right_justified());
        assert!(c("1,1").is_right_justified());
    }

    #[test]
    fn parse_and_print() {
        let k = c(" 0, 0,2,1,1,2 ");
        assert_eq!(k.to_string(), "0,0,2,1,1,2");
        assert!("1,x".parse::<Composition>().is_err());
    }
}
