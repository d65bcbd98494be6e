use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::word::{parse_integer, GroupWord};

/// Mal'cev coordinates `(α_1, …, α_m)` of a group element.
///
/// Values produced by [`crate::Group`] are normalized: `0 <= α_i < e_i` on
/// every torsion index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coords(pub Vec<BigInt>);

impl Coords {
    pub fn zero(m: usize) -> Self {
        Coords(vec![BigInt::zero(); m])
    }

    /// The tuple of `a_index^exponent`.
    pub fn unit(m: usize, index: usize, exponent: BigInt) -> Self {
        let mut c = Self::zero(m);
        c.0[index] = exponent;
        c
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Coords(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero entry.
    pub fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    /// The normal-form word `a_1^{α_1} ⋯ a_m^{α_m}`.
    pub fn to_word(&self) -> GroupWord {
        GroupWord::from_pairs(self.0.iter().cloned().enumerate())
    }

    pub fn check_len(&self, m: usize) -> Result<()> {
        if self.0.len() == m {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: m,
                found: self.0.len(),
            })
        }
    }

    /// Sum of bit lengths of the entries.
    pub fn bit_size(&self) -> u64 {
        self.0.iter().map(|x| x.bits()).sum()
    }
}

impl Index<usize> for Coords {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for Coords {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.0[i]
    }
}

impl From<Vec<BigInt>> for Coords {
    fn from(v: Vec<BigInt>) -> Self {
        Coords(v)
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Parses `(c1, c2, ..., cm)`. Whitespace is free; `()` is the empty tuple.
pub fn parse_coords(text: &str) -> Result<Coords> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::syntax(1, 1, "coordinates must be enclosed in parentheses"))?;
    if inner.trim().is_empty() {
        return Ok(Coords(Vec::new()));
    }
    let mut out = Vec::new();
    let mut column = text.find('(').unwrap_or(0) + 2;
    for part in inner.split(',') {
        let v = parse_integer(part.trim())
            .ok_or_else(|| Error::syntax(1, column, format!("bad integer `{}`", part.trim())))?;
        out.push(v);
        column += part.len() + 1;
    }
    Ok(Coords(out))
}
