//! Class-`c` quotients of finitely presented groups.
//!
//! `⟨X | R⟩` in the variety of class-`c` nilpotent groups is `F / N` with `F`
//! free nilpotent on `X` and `N` the normal closure of `R`. `N` is generated
//! by the iterated commutators `[r, x_1, …, x_j]` with `x_i ∈ X ∪ X^-1`; its
//! full form `T` gives a transversal of `N` in `F` and hence a nilpotent
//! presentation of the quotient.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::collection::Group;
use crate::consistency::{check_consistency, ConsistencyReport};
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::hall::{free_nilpotent, HallBasis};
use crate::presentation::{NilpotentPresentation, PresentationBuilder};
use crate::subgroup::{membership, reduce_tracked, TrackedFullForm};
use crate::word::{parse_named_word, GroupWord};

/// Named generators and relator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePresentation {
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
}

impl FinitePresentation {
    pub fn new(generators: Vec<String>, relators: Vec<GroupWord>) -> Result<Self> {
        for r in &relators {
            r.check_range(generators.len())?;
        }
        Ok(FinitePresentation { generators, relators })
    }

    /// The relators of a nilpotent presentation over its display names.
    pub fn from_nilpotent(p: &NilpotentPresentation) -> Self {
        FinitePresentation {
            generators: p.display_names(),
            relators: p.relators(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gens {}\n", self.generators.join(" "));
        for r in &self.relators {
            s.push_str(&format!("rel {}\n", r.display_with(&self.generators)));
        }
        s
    }
}

/// ```text
/// gens x y
/// rel x^-1 y^-1 x y
/// ```
pub fn parse_finite_presentation(text: &str) -> Result<FinitePresentation> {
    let mut generators: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "gens" => {
                if generators.is_some() {
                    return Err(Error::syntax(n + 1, col, "duplicate `gens` line"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                let mut seen = HashSet::new();
                for name in &names {
                    let ok = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        return Err(Error::syntax(n + 1, col, format!("bad generator name `{name}`")));
                    }
                    if !seen.insert(name.as_str()) {
                        return Err(Error::syntax(n + 1, col, format!("duplicate generator `{name}`")));
                    }
                }
                generators = Some(names);
            }
            "rel" => {
                let names = generators
                    .as_ref()
                    .ok_or_else(|| Error::syntax(n + 1, col, "`rel` before `gens`"))?;
                let w = parse_named_word(rest, names).map_err(|e| match e {
                    Error::Syntax { column, message, .. } => Error::syntax(n + 1, column + 4, message),
                    other => other,
                })?;
                relators.push(w);
            }
            other => return Err(Error::syntax(n + 1, col, format!("unknown directive `{other}`"))),
        }
    }
    let generators = generators.ok_or_else(|| Error::InvalidArgument("missing `gens` line".into()))?;
    FinitePresentation::new(generators, relators)
}

/// How a generator of `N` was built: `[r_relator, x_1, …, x_j]`, each `x`
/// a signed free generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorPath {
    pub relator: usize,
    pub letters: Vec<(usize, bool)>,
}

/// The quotient `F / N` with everything needed to map words and to write
/// trivial words as products of conjugates of relators.
#[derive(Debug, Clone)]
pub struct FiniteQuotient {
    pub source: FinitePresentation,
    pub class: u32,
    pub free: Group,
    pub basis: HallBasis,
    /// Full form of `N` in `F`, tracked over `normal_generators`.
    pub kernel: TrackedFullForm,
    pub normal_generators: Vec<Coords>,
    pub paths: Vec<CommutatorPath>,
    /// Indices of the Hall basis elements kept as generators of the quotient.
    pub kept: Vec<usize>,
    pub group: Group,
}

/// Builds the class-`class` quotient of `fp`.
pub fn from_finite_presentation(fp: &FinitePresentation, class: u32) -> Result<FiniteQuotient> {
    if class == 0 {
        return Err(Error::InvalidArgument("class must be at least 1".into()));
    }
    let r = fp.generators.len();
    let (fpres, basis) = free_nilpotent(class, r)?;
    let free = Group::new(fpres);

    let mut normal_generators = Vec::new();
    let mut paths = Vec::new();
    let mut seen: HashSet<Coords> = HashSet::new();
    for (ri, rel) in fp.relators.iter().enumerate() {
        let mut layer = vec![(free.word_to_coords(rel)?, Vec::new())];
        for depth in 0..class {
            let mut next = Vec::new();
            for (x, letters) in layer {
                if x.is_identity() || !seen.insert(x.clone()) {
                    continue;
                }
                if depth + 1 < class {
                    for g in 0..r {
                        for inverse in [false, true] {
                            let e = if inverse { -BigInt::one() } else { BigInt::one() };
                            let y = free.commutator(&x, &free.generator_power(g, e));
                            let mut l: Vec<(usize, bool)> = letters.clone();
                            l.push((g, inverse));
                            next.push((y, l));
                        }
                    }
                }
                normal_generators.push(x);
                paths.push(CommutatorPath {
                    relator: ri,
                    letters,
                });
            }
            layer = next;
        }
    }
    let kernel = reduce_tracked(&free, &normal_generators)?;

    let m = free.num_generators();
    let form = &kernel.form;
    let pivot_of: Vec<Option<usize>> = (0..m).map(|c| form.pivots().iter().position(|&p| p == c)).collect();
    let kept: Vec<usize> = (0..m)
        .filter(|&c| pivot_of[c].is_none_or(|i| !form.pivot_entry(i).is_one()))
        .collect();

    let reduce = |x: &Coords| -> Coords { reduce_mod(&free, &kernel, x) };
    let restrict = |x: &Coords| -> Vec<BigInt> { kept.iter().map(|&c| x[c].clone()).collect() };

    let k = kept.len();
    let mut b = PresentationBuilder::new(k);
    let weights: Vec<u32> = kept.iter().map(|&c| free.presentation().weight(c)).collect();
    b.weights(&weights)?;
    for (ni, &c) in kept.iter().enumerate() {
        if let Some(i) = pivot_of[c] {
            let e = form.pivot_entry(i).clone();
            let y = reduce(&free.generator_power(c, e.clone()));
            b.power(ni, e, restrict(&y))?;
        }
    }
    for (nj, &cj) in kept.iter().enumerate() {
        let aj = free.generator(cj);
        let aj_inv = free.invert(&aj);
        for (ni, &ci) in kept.iter().enumerate().take(nj) {
            let ai = free.generator(ci);
            let t = reduce(&free.commutator(&aj, &ai));
            b.conj(nj, ni, restrict(&t))?;
            let s = reduce(&free.multiply(&aj, &free.conjugate(&aj_inv, &ai)));
            b.conj_inv(nj, ni, Some(restrict(&s)))?;
        }
    }
    let presentation: NilpotentPresentation = b.build()?;
    if let ConsistencyReport::Inconsistent { overlap, .. } = check_consistency(&presentation) {
        return Err(Error::Verification(format!("quotient presentation fails overlap {overlap}")));
    }
    Ok(FiniteQuotient {
        source: fp.clone(),
        class,
        free,
        basis,
        kernel,
        normal_generators,
        paths,
        kept,
        group: Group::new(presentation),
    })
}

/// Canonical representative of `xN`: entries at pivot columns of `T` in
/// `[0, α)`, obtained by right multiplication with powers of the rows.
fn reduce_mod(free: &Group, kernel: &TrackedFullForm, x: &Coords) -> Coords {
    let form = &kernel.form;
    let mut x = x.clone();
    for (row, &p) in form.rows().iter().zip(form.pivots()) {
        let q = x[p].div_floor(&row[p]);
        if !q.is_zero() {
            x = free.multiply(&x, &free.power(row, &-q));
        }
    }
    x
}

/// A factor `c^-1 r^{±1} c` of a product of conjugates of relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateFactor {
    pub relator: usize,
    pub inverse: bool,
    pub conjugator: GroupWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordWitness {
    /// `w` equals the product of these factors in `F`.
    Trivial(Vec<ConjugateFactor>),
    /// `w` is nontrivial; its coordinates in the quotient.
    Nontrivial(Coords),
}

impl FiniteQuotient {
    /// Coordinates in the quotient of an element of `F`.
    pub fn project(&self, x: &Coords) -> Coords {
        let y = reduce_mod(&self.free, &self.kernel, x);
        Coords(self.kept.iter().map(|&c| y[c].clone()).collect())
    }

    /// Coordinates in the quotient of a word over `X`.
    pub fn word_to_coords(&self, w: &GroupWord) -> Result<Coords> {
        Ok(self.project(&self.free.word_to_coords(w)?))
    }

    /// Image of each generator of `X`.
    pub fn generator_images(&self) -> Vec<Coords> {
        (0..self.source.generators.len())
            .map(|g| self.project(&self.free.generator(g)))
            .collect()
    }

    /// Either a product of conjugates of relators equal to `w` in `F`
    /// (verified by collection), or the nonzero quotient coordinates of `w`.
    pub fn word_witness(&self, w: &GroupWord, limit: usize) -> Result<WordWitness> {
        let x = self.free.word_to_coords(w)?;
        let image = self.project(&x);
        if !image.is_identity() {
            return Ok(WordWitness::Nontrivial(image));
        }
        let gamma = membership(&self.free, &self.kernel.form, &x)?
            .ok_or_else(|| Error::Verification("trivial word outside the kernel full form".into()))?;
        let mut expr = crate::expr::Expr::identity();
        for (e, g) in self.kernel.expressions.iter().zip(&gamma) {
            expr = expr.mul(&e.pow(g));
        }
        let over_inputs = expr.to_word(limit)?;
        let mut factors = Vec::new();
        for l in over_inputs.letters() {
            let base = self.expand_path(&self.paths[l.generator]);
            let reps = l
                .exponent
                .magnitude()
                .try_into()
                .ok()
                .filter(|&n: &usize| n.saturating_mul(base.len()) <= limit)
                .ok_or_else(|| Error::ResourceLimit("witness has too many factors".into()))?;
            let unit = if l.exponent.sign() == num_bigint::Sign::Minus { invert_product(&base) } else { base };
            for _ in 0..reps {
                factors.extend(unit.iter().cloned());
            }
            if factors.len() > limit {
                return Err(Error::ResourceLimit("witness has too many factors".into()));
            }
        }
        if self.evaluate_factors(&factors)? != x {
            return Err(Error::Verification("witness does not collect to w".into()));
        }
        Ok(WordWitness::Trivial(factors))
    }

    /// `[r, x_1, …, x_j]` as a product of conjugates of `r^{±1}`, using
    /// `[u, x] = u^-1 · x^-1 u x`.
    fn expand_path(&self, path: &CommutatorPath) -> Vec<ConjugateFactor> {
        let mut u = vec![ConjugateFactor {
            relator: path.relator,
            inverse: false,
            conjugator: GroupWord::identity(),
        }];
        for &(g, inverse) in &path.letters {
            let e = if inverse { -BigInt::one() } else { BigInt::one() };
            let x = GroupWord::power_of(g, e);
            let mut next = invert_product(&u);
            next.extend(u.into_iter().map(|mut f| {
                f.conjugator.append(&x);
                f
            }));
            u = next;
        }
        u
    }

    /// Collects `∏ c^-1 r^{±1} c` in `F`.
    pub fn evaluate_factors(&self, factors: &[ConjugateFactor]) -> Result<Coords> {
        let rel: Vec<Coords> = self
            .source
            .relators
            .iter()
            .map(|r| self.free.word_to_coords(r))
            .collect::<Result<_>>()?;
        let mut acc = self.free.identity();
        for f in factors {
            let r = if f.inverse { self.free.invert(&rel[f.relator]) } else { rel[f.relator].clone() };
            let c = self.free.word_to_coords(&f.conjugator)?;
            acc = self.free.multiply(&acc, &self.free.conjugate(&r, &c));
        }
        Ok(acc)
    }
}

fn invert_product(u: &[ConjugateFactor]) -> Vec<ConjugateFactor> {
    u.iter()
        .rev()
        .map(|f| ConjugateFactor {
            relator: f.relator,
            inverse: !f.inverse,
            conjugator: f.conjugator.clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(text: &str) -> FinitePresentation {
        parse_finite_presentation(text).unwrap()
    }

    #[test]
    fn abelian_quotient() {
        let q = from_finite_presentation(&fp("gens x y\nrel x^-1 y^-1 x y\n"), 2).unwrap();
        assert_eq!(q.kernel.form.pivots(), &[2]);
        assert_eq!(q.kernel.form.pivot_entry(0), &BigInt::one());
        assert_eq!(q.group.num_generators(), 2);
        let a = q.word_to_coords(&parse_named_word("x^3 y x^-1 y^2", &q.source.generators).unwrap()).unwrap();
        assert_eq!(a, Coords::from_i64s(&[2, 3]));
    }

    #[test]
    fn cyclic_quotient() {
        let q = from_finite_presentation(&fp("gens x\nrel x^5"), 1).unwrap();
        let p = q.group.presentation();
        assert_eq!(p.num_generators(), 1);
        assert_eq!(p.torsion(0), Some(&BigInt::from(5)));
        assert!(p.power_tail(0).iter().all(Zero::is_zero));
    }

    #[test]
    fn empty_relators_give_free_group() {
        let q = from_finite_presentation(&fp("gens x y"), 2).unwrap();
        assert_eq!(q.group.presentation(), &free_nilpotent(2, 2).unwrap().0);
    }

    #[test]
    fn witnesses() {
        let q = from_finite_presentation(&fp("gens x\nrel x^5"), 1).unwrap();
        let x = |s: &str| parse_named_word(s, &q.source.generators).unwrap();
        let WordWitness::Trivial(f) = q.word_witness(&x("x^10"), 1000).unwrap() else { panic!() };
        let r = ConjugateFactor {
            relator: 0,
            inverse: false,
            conjugator: GroupWord::identity(),
        };
        assert_eq!(f, vec![r.clone(), r.clone()]);
        assert_eq!(q.word_witness(&x("x^3"), 1000).unwrap(), WordWitness::Nontrivial(Coords::from_i64s(&[3])));

        let q = from_finite_presentation(&fp("gens x y\nrel x^-1 y^-1 x y"), 2).unwrap();
        let w = parse_named_word("x^-1 y^-1 x y", &q.source.generators).unwrap();
        assert_eq!(q.word_witness(&w, 1000).unwrap(), WordWitness::Trivial(vec![r]));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_finite_presentation("rel x").is_err());
        assert!(parse_finite_presentation("gens x x").is_err());
        assert!(parse_finite_presentation("gens x\nrel y").is_err());
        assert!(parse_finite_presentation("").is_err());
    }
}
