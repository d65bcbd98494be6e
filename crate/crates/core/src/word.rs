//! Words over the Mal'cev generators and their text syntax.
//!
//! A word is written as whitespace-separated tokens `a<k>` or `a<k>^<e>`,
//! where `k` is a 1-based generator index and `e` a signed decimal exponent.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// One syllable `a_k^e` of a word. `generator` is 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub exponent: BigInt,
}

/// A finite word over the generators and their inverses, stored run-length
/// encoded. Exponents are never zero; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self::power_of(index, BigInt::one())
    }

    pub fn power_of(index: usize, exponent: BigInt) -> Self {
        let mut w = Self::default();
        w.push(index, exponent);
        w
    }

    /// Builds a word from `(generator, exponent)` pairs, merging adjacent
    /// syllables on the same generator and dropping zero exponents.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut w = Self::default();
        for (g, e) in pairs {
            w.push(g, e);
        }
        w
    }

    /// Appends `a_generator^exponent`, merging with the last syllable.
    pub fn push(&mut self, generator: usize, exponent: BigInt) {
        if exponent.is_zero() {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.generator == generator {
                last.exponent += exponent;
                if last.exponent.is_zero() {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter {
            generator,
            exponent,
        });
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word length: the sum of the absolute values of the exponents.
    pub fn length(&self) -> BigInt {
        self.letters.iter().map(|l| l.exponent.abs()).sum()
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.letters.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    generator: l.generator,
                    exponent: -&l.exponent,
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn append(&mut self, other: &Self) {
        for l in &other.letters {
            self.push(l.generator, l.exponent.clone());
        }
    }

    /// `self^n` for `n >= 0` by repetition; negative `n` uses the inverse.
    pub fn pow(&self, n: u64, invert: bool) -> Self {
        let base = if invert { self.inverse() } else { self.clone() };
        let mut w = Self::default();
        for _ in 0..n {
            w.append(&base);
        }
        w
    }

    /// The commutator `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &Self, v: &Self) -> Self {
        let mut w = u.inverse();
        w.append(&v.inverse());
        w.append(u);
        w.append(v);
        w
    }

    /// Checks every generator index is below `count`.
    pub fn check_range(&self, count: usize) -> Result<()> {
        match self.letters.iter().find(|l| l.generator >= count) {
            Some(l) => Err(Error::GeneratorOutOfRange {
                index: l.generator + 1,
                count,
            }),
            None => Ok(()),
        }
    }

    /// Expands the word into a sequence of signed unit letters. Only sensible
    /// for short words; used by tests and oracles.
    pub fn expand(&self) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for l in &self.letters {
            let n: u64 = l
                .exponent
                .abs()
                .try_into()
                .expect("exponent too large to expand");
            for _ in 0..n {
                out.push((l.generator, l.exponent.is_negative()));
            }
        }
        out
    }

    /// Formats with custom generator names (1-based `a<k>` otherwise).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedWord { word: self, names }
    }
}

struct NamedWord<'a> {
    word: &'a GroupWord,
    names: &'a [String],
}

impl fmt::Display for NamedWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.word.letters, |f, g| match self.names.get(g) {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "a{}", g + 1),
        })
    }
}

fn write_word(
    f: &mut fmt::Formatter<'_>,
    letters: &[Letter],
    mut name: impl FnMut(&mut fmt::Formatter<'_>, usize) -> fmt::Result,
) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        name(f, l.generator)?;
        if !l.exponent.is_one() {
            write!(f, "^{}", l.exponent)?;
        }
    }
    Ok(())
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.letters, |f, g| write!(f, "a{}", g + 1))
    }
}

/// Parses a word in `a<k>` / `a<k>^<e>` syntax over `count` generators.
/// The literal `1` (or the empty string) is the identity.
pub fn parse_word(text: &str, count: usize) -> Result<GroupWord> {
    parse_word_with(text, |tok| {
        let digits = tok.strip_prefix('a')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse::<usize>().ok().map(|k| k.wrapping_sub(1))
    })
    .and_then(|w| {
        w.check_range(count)?;
        Ok(w)
    })
}

/// Parses a word whose letters are the given names (e.g. `x y^-1 x^3`).
pub fn parse_named_word(text: &str, names: &[String]) -> Result<GroupWord> {
    parse_word_with(text, |tok| names.iter().position(|n| n == tok))
}

fn parse_word_with(text: &str, mut lookup: impl FnMut(&str) -> Option<usize>) -> Result<GroupWord> {
    let mut word = GroupWord::default();
    let mut offset = 0;
    for tok in text.split_inclusive(char::is_whitespace) {
        let column = offset + 1;
        offset += tok.len();
        let tok = tok.trim_end();
        if tok.is_empty() || (tok == "1" && text.trim() == "1") {
            continue;
        }
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => {
                let e: BigInt = parse_integer(e)
                    .ok_or_else(|| Error::syntax(1, column, format!("bad exponent in `{tok}`")))?;
                (b, e)
            }
            None => (tok, BigInt::one()),
        };
        let g = lookup(base)
            .filter(|&g| g != usize::MAX)
            .ok_or_else(|| Error::syntax(1, column, format!("unknown generator `{base}`")))?;
        word.push(g, exp);
    }
    Ok(word)
}

/// Signed decimal integer with optional leading `+`.
pub(crate) fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.trim_start_matches('+').parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tokens_and_exponents() {
        let w = parse_word("a2 a1^-3 a1 a3^+2", 3).unwrap();
        assert_eq!(w.to_string(), "a2 a1^-2 a3^2");
        assert_eq!(w.length(), BigInt::from(5));
    }

    #[test]
    fn identity_forms() {
        assert!(parse_word("", 3).unwrap().is_empty());
        assert!(parse_word("  1 ", 3).unwrap().is_empty());
        assert!(parse_word("a1 a1^-1", 3).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_tokens() {
        assert!(matches!(parse_word("a4", 3), Err(Error::GeneratorOutOfRange { .. })));
        assert!(matches!(parse_word("a0", 3), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("a1 b2", 3), Err(Error::Syntax { column: 4, .. })));
        assert!(matches!(parse_word("a1^", 3), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("a1^--2", 3), Err(Error::Syntax { .. })));
    }

    #[test]
    fn big_exponents_survive() {
        let w = parse_word("a1^123456789012345678901234567890", 1).unwrap();
        assert_eq!(w.to_string(), "a1^123456789012345678901234567890");
    }

    #[test]
    fn named_words() {
        let names = vec!["x".to_string(), "y".to_string()];
        let w = parse_named_word("x^-1 y^-1 x y", &names).unwrap();
        assert_eq!(w.display_with(&names).to_string(), "x^-1 y^-1 x y");
        assert_eq!(GroupWord::commutator(&GroupWord::generator(0), &GroupWord::generator(1)), w);
    }
}
