//! Presentations without large exponents.
//!
//! Every syllable `a^β` with `|β| >= 2` is replaced by the root of a doubling
//! program for `a^|β|`. Program nonterminals become new generators and each
//! production `t = b c` becomes the length-3 relator `t^-1 b c`. Programs are
//! shared between relators, so the presentation grows logarithmically in the
//! exponents.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::finite::FinitePresentation;
use crate::slp::{Production, SlpBuilder};
use crate::word::GroupWord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedPresentation {
    /// Original generators followed by the program generators.
    pub presentation: FinitePresentation,
    pub original_generators: usize,
    /// `definitions[k] = (b, c)`: generator `original_generators + k` is `b c`.
    pub definitions: Vec<(usize, usize)>,
    /// Index in `presentation.relators` of each original relator.
    pub roots: Vec<usize>,
}

pub fn compress_presentation(fp: &FinitePresentation) -> Result<CompressedPresentation> {
    let n = fp.generators.len();
    let mut b = SlpBuilder::new();
    let mut compressed_relators = Vec::new();
    for rel in &fp.relators {
        let mut nodes: Vec<(usize, bool)> = Vec::new();
        for l in rel.letters() {
            let node = if l.exponent.abs().is_one() {
                b.letter(l.generator, false)
            } else {
                let unit = b.letter(l.generator, false);
                b.power(unit, &l.exponent.abs())
            };
            nodes.push((node, l.exponent.is_negative()));
        }
        compressed_relators.push(nodes);
    }

    // Terminals map back to the original letters; pairs become new generators.
    let productions: Vec<Production> = (0..b.len()).map(|i| b.production(i)).collect();
    let mut gen_of = vec![usize::MAX; productions.len()];
    let mut definitions = Vec::new();
    for (i, p) in productions.iter().enumerate() {
        gen_of[i] = match *p {
            Production::Terminal(Some(l)) => l.generator,
            Production::Terminal(None) => return Err(Error::InvalidArgument("empty program terminal".into())),
            Production::Pair(x, y) => {
                definitions.push((gen_of[x], gen_of[y]));
                n + definitions.len() - 1
            }
        };
    }

    let mut names = fp.generators.clone();
    let prefix = fresh_prefix(&fp.generators);
    names.extend((1..=definitions.len()).map(|k| format!("{prefix}{k}")));

    let mut relators = Vec::new();
    for (k, &(x, y)) in definitions.iter().enumerate() {
        relators.push(GroupWord::from_pairs([
            (n + k, -BigInt::one()),
            (x, BigInt::one()),
            (y, BigInt::one()),
        ]));
    }
    let mut roots = Vec::new();
    for nodes in compressed_relators {
        roots.push(relators.len());
        relators.push(GroupWord::from_pairs(
            nodes
                .into_iter()
                .map(|(node, neg)| (gen_of[node], if neg { -BigInt::one() } else { BigInt::one() })),
        ));
    }
    Ok(CompressedPresentation {
        presentation: FinitePresentation::new(names, relators)?,
        original_generators: n,
        definitions,
        roots,
    })
}

fn fresh_prefix(names: &[String]) -> String {
    let mut prefix = String::from("t");
    while names.iter().any(|n| n.starts_with(&prefix)) {
        prefix.push('_');
    }
    prefix
}

impl CompressedPresentation {
    /// Substitutes the program generators back, greatest first, recovering
    /// the original relator. Fails if the expansion exceeds `limit` syllables.
    pub fn expand_relator(&self, i: usize, limit: usize) -> Result<GroupWord> {
        let n = self.original_generators;
        let mut w = self.presentation.relators[self.roots[i]].clone();
        for k in (0..self.definitions.len()).rev() {
            let g = n + k;
            if !w.letters().iter().any(|l| l.generator == g) {
                continue;
            }
            let (x, y) = self.definitions[k];
            let def = GroupWord::from_pairs([(x, BigInt::one()), (y, BigInt::one())]);
            let mut out = GroupWord::identity();
            for l in w.letters() {
                if l.generator != g {
                    out.push(l.generator, l.exponent.clone());
                    continue;
                }
                let reps: usize = l
                    .exponent
                    .magnitude()
                    .try_into()
                    .map_err(|_| Error::ResourceLimit("exponent too large to expand".into()))?;
                let piece = if l.exponent.is_negative() { def.inverse() } else { def.clone() };
                for _ in 0..reps {
                    out.append(&piece);
                }
            }
            if out.letters().len() > limit {
                return Err(Error::ResourceLimit(format!("expansion exceeds {limit} syllables")));
            }
            w = out;
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::parse_finite_presentation;

    #[test]
    fn doubling_chain() {
        let fp = parse_finite_presentation("gens a1\nrel a1^1024").unwrap();
        let cp = compress_presentation(&fp).unwrap();
        assert_eq!(cp.definitions.len(), 10);
        assert_eq!(cp.presentation.relators.len(), 11);
        assert!(cp.presentation.relators.iter().all(|r| r.length() <= 3.into()));
        assert_eq!(cp.expand_relator(0, 100).unwrap(), fp.relators[0]);
    }

    #[test]
    fn short_relators_unchanged() {
        let fp = parse_finite_presentation("gens x y\nrel x y^-1 x").unwrap();
        let cp = compress_presentation(&fp).unwrap();
        assert!(cp.definitions.is_empty());
        assert_eq!(cp.presentation.relators, fp.relators);
    }

    #[test]
    fn round_trip_mixed() {
        let fp = parse_finite_presentation("gens x y\nrel x^37 y^-5 x^-37\nrel y^1000 x^3\nrel x^37").unwrap();
        let cp = compress_presentation(&fp).unwrap();
        for i in 0..fp.relators.len() {
            assert_eq!(cp.expand_relator(i, 1000).unwrap(), fp.relators[i]);
        }
        // x^37 is built once and shared.
        let fresh: Vec<_> = cp.definitions.iter().collect();
        let unique: std::collections::HashSet<_> = fresh.iter().collect();
        assert_eq!(fresh.len(), unique.len());
    }
}
