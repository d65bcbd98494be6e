//! Straight-line programs over the generator alphabet.
//!
//! A program is a list of nonterminals, each with exactly one production:
//! either a terminal (a signed generator letter or the empty word) or a pair
//! of strictly earlier nonterminals. The text format is one directive per
//! line (or separated by `;`):
//!
//! ```text
//! term B1 a1
//! prod B2 B1 B1
//! prod B3 B2 B2
//! root B3
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::collection::Group;
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::word::GroupWord;

/// A terminal letter: generator index (0-based) and whether it is inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedLetter {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Production {
    /// `None` is the empty word.
    Terminal(Option<SignedLetter>),
    /// Concatenation of two strictly earlier nonterminals.
    Pair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    names: Vec<String>,
    productions: Vec<Production>,
    root: usize,
}

impl Slp {
    /// Validates children-precede-parents and the root index.
    pub fn new(names: Vec<String>, productions: Vec<Production>, root: usize) -> Result<Self> {
        if names.len() != productions.len() {
            return Err(Error::InvalidSlp("one name per production required".into()));
        }
        if root >= productions.len() {
            return Err(Error::InvalidSlp("missing root".into()));
        }
        for (i, p) in productions.iter().enumerate() {
            if let Production::Pair(b, c) = *p {
                if b >= i || c >= i {
                    return Err(Error::InvalidSlp(format!(
                        "production of {} refers to a nonterminal that is not smaller",
                        names[i]
                    )));
                }
            }
        }
        Ok(Slp {
            names,
            productions,
            root,
        })
    }

    /// Number of nonterminals.
    pub fn size(&self) -> usize {
        self.productions.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Length of the output word, computed without expanding it.
    pub fn output_length(&self) -> BigInt {
        let mut len: Vec<BigInt> = Vec::with_capacity(self.size());
        for p in &self.productions {
            let l = match *p {
                Production::Terminal(None) => BigInt::zero(),
                Production::Terminal(Some(_)) => BigInt::one(),
                Production::Pair(b, c) => &len[b] + &len[c],
            };
            len.push(l);
        }
        len.swap_remove(self.root)
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.productions
            .iter()
            .filter_map(|p| match p {
                Production::Terminal(Some(l)) => Some(l.generator + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Expands the output word; fails if it is longer than `limit` letters.
    pub fn expand(&self, limit: u64) -> Result<GroupWord> {
        let len = self.output_length();
        if len > BigInt::from(limit) {
            return Err(Error::ResourceLimit(format!("program output has {len} letters")));
        }
        let mut words: Vec<Option<GroupWord>> = vec![None; self.size()];
        Ok(self.expand_node(self.root, &mut words))
    }

    fn expand_node(&self, i: usize, memo: &mut Vec<Option<GroupWord>>) -> GroupWord {
        if let Some(w) = &memo[i] {
            return w.clone();
        }
        let w = match self.productions[i] {
            Production::Terminal(None) => GroupWord::identity(),
            Production::Terminal(Some(l)) => {
                GroupWord::power_of(l.generator, if l.inverse { -BigInt::one() } else { BigInt::one() })
            }
            Production::Pair(b, c) => {
                let mut w = self.expand_node(b, memo);
                w.append(&self.expand_node(c, memo));
                w
            }
        };
        memo[i] = Some(w.clone());
        w
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, p) in self.names.iter().zip(&self.productions) {
            match *p {
                Production::Terminal(None) => {
                    let _ = writeln!(s, "term {name} eps");
                }
                Production::Terminal(Some(l)) => {
                    let suffix = if l.inverse { "^-1" } else { "" };
                    let _ = writeln!(s, "term {name} a{}{suffix}", l.generator + 1);
                }
                Production::Pair(b, c) => {
                    let _ = writeln!(s, "prod {name} {} {}", self.names[b], self.names[c]);
                }
            }
        }
        let _ = writeln!(s, "root {}", self.names[self.root]);
        s
    }
}

/// Parses the program text format.
pub fn parse_slp(text: &str) -> Result<Slp> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut productions = Vec::new();
    let mut root: Option<usize> = None;

    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = line.split('#').next().unwrap_or("");
        let mut col_base = 0;
        for stmt in line.split(';') {
            let col = col_base + stmt.len() - stmt.trim_start().len() + 1;
            col_base += stmt.len() + 1;
            let toks: Vec<&str> = stmt.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let err = |msg: String| Error::syntax(line_no, col, msg);
            let lookup = |name: &str| -> Result<usize> {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::InvalidSlp(format!("line {line_no}: `{name}` is not defined before use")))
            };
            match toks[0] {
                "term" | "prod" => {
                    let want = if toks[0] == "term" { 3 } else { 4 };
                    if toks.len() != want {
                        return Err(err(format!("`{}` takes {} arguments", toks[0], want - 1)));
                    }
                    let name = toks[1];
                    if !is_identifier(name) {
                        return Err(err(format!("bad nonterminal name `{name}`")));
                    }
                    if index.contains_key(name) {
                        return Err(Error::InvalidSlp(format!(
                            "line {line_no}: nonterminal `{name}` has more than one production"
                        )));
                    }
                    let prod = if toks[0] == "term" {
                        Production::Terminal(parse_letter(toks[2]).ok_or_else(|| err(format!("bad letter `{}`", toks[2])))?)
                    } else {
                        if toks[2] == name || toks[3] == name {
                            return Err(Error::InvalidSlp(format!(
                                "line {line_no}: child of `{name}` is not smaller"
                            )));
                        }
                        Production::Pair(lookup(toks[2])?, lookup(toks[3])?)
                    };
                    index.insert(name.to_string(), names.len());
                    names.push(name.to_string());
                    productions.push(prod);
                }
                "root" => {
                    if toks.len() != 2 {
                        return Err(err("`root` takes one argument".into()));
                    }
                    if root.is_some() {
                        return Err(Error::InvalidSlp(format!("line {line_no}: duplicate root")));
                    }
                    root = Some(lookup(toks[1])?);
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
    }
    let root = root.ok_or_else(|| Error::InvalidSlp("missing root".into()))?;
    Slp::new(names, productions, root)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `eps`, `a<k>`, `a<k>^1`, `a<k>^-1`.
fn parse_letter(tok: &str) -> Option<Option<SignedLetter>> {
    if tok == "eps" {
        return Some(None);
    }
    let (base, inverse) = match tok.split_once('^') {
        Some((b, "-1")) => (b, true),
        Some((b, "1")) => (b, false),
        Some(_) => return None,
        None => (tok, false),
    };
    let digits = base.strip_prefix('a')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    if k == 0 {
        return None;
    }
    Some(Some(SignedLetter {
        generator: k - 1,
        inverse,
    }))
}

/// Coordinates of the program output, combining children bottom-up with the
/// group multiplication. The output word is never expanded.
pub fn slp_to_coords(group: &Group, slp: &Slp) -> Result<Coords> {
    let m = group.num_generators();
    if slp.generator_bound() > m {
        return Err(Error::GeneratorOutOfRange {
            index: slp.generator_bound(),
            count: m,
        });
    }
    let needed = reachable(slp);
    let mut values: Vec<Option<Coords>> = vec![None; slp.size()];
    for (i, p) in slp.productions.iter().enumerate() {
        if !needed[i] {
            continue;
        }
        let v = match *p {
            Production::Terminal(None) => group.identity(),
            Production::Terminal(Some(l)) => {
                group.generator_power(l.generator, if l.inverse { -BigInt::one() } else { BigInt::one() })
            }
            Production::Pair(b, c) => {
                let (vb, vc) = (values[b].as_ref().expect("child"), values[c].as_ref().expect("child"));
                group.multiply(vb, vc)
            }
        };
        values[i] = Some(v);
    }
    Ok(values.swap_remove(slp.root).expect("root"))
}

fn reachable(slp: &Slp) -> Vec<bool> {
    reachable_raw(&slp.productions, slp.root)
}

/// Incremental program construction with shared terminals and pairs.
#[derive(Debug, Default)]
pub struct SlpBuilder {
    productions: Vec<Production>,
    memo: HashMap<Production, usize>,
}

impl SlpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.productions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.productions.is_empty()
    }

    pub fn production(&self, i: usize) -> Production {
        self.productions[i]
    }

    fn add(&mut self, p: Production) -> usize {
        if let Some(&i) = self.memo.get(&p) {
            return i;
        }
        let i = self.productions.len();
        self.productions.push(p);
        self.memo.insert(p, i);
        i
    }

    pub fn epsilon(&mut self) -> usize {
        self.add(Production::Terminal(None))
    }

    pub fn letter(&mut self, generator: usize, inverse: bool) -> usize {
        self.add(Production::Terminal(Some(SignedLetter { generator, inverse })))
    }

    pub fn pair(&mut self, b: usize, c: usize) -> usize {
        self.add(Production::Pair(b, c))
    }

    /// `node^n` for `n >= 1` by square-and-multiply: at most `2 log2 n` new
    /// nonterminals.
    pub fn power(&mut self, node: usize, n: &BigInt) -> usize {
        assert!(n.is_positive(), "program powers need n >= 1");
        let bits = n.bits();
        let mut acc = node;
        for b in (0..bits - 1).rev() {
            acc = self.pair(acc, acc);
            if n.bit(b) {
                acc = self.pair(acc, node);
            }
        }
        acc
    }

    /// Balanced concatenation of the given nodes; `None` when empty.
    pub fn concat(&mut self, nodes: &[usize]) -> Option<usize> {
        match nodes.len() {
            0 => None,
            1 => Some(nodes[0]),
            n => {
                let mid = n.div_ceil(2);
                let l = self.concat(&nodes[..mid]).expect("nonempty");
                let r = self.concat(&nodes[mid..]).expect("nonempty");
                Some(self.pair(l, r))
            }
        }
    }

    /// Program for `a_generator^e`, `e != 0`.
    pub fn letter_power(&mut self, generator: usize, e: &BigInt) -> usize {
        let base = self.letter(generator, e.is_negative());
        self.power(base, &e.abs())
    }

    /// Program for a word: one power program per syllable, joined by a
    /// balanced tree.
    pub fn word(&mut self, w: &GroupWord) -> Option<usize> {
        let parts: Vec<usize> = w
            .letters()
            .iter()
            .map(|l| self.letter_power(l.generator, &l.exponent))
            .collect();
        self.concat(&parts)
    }

    /// Finishes with `root`, keeping only the nonterminals it reaches and
    /// naming them `B1, B2, …` in order.
    pub fn finish(self, root: Option<usize>) -> Slp {
        let (productions, root) = match root {
            Some(r) => (self.productions, r),
            None => (vec![Production::Terminal(None)], 0),
        };
        let full = Slp {
            names: Vec::new(),
            productions,
            root,
        };
        let keep = reachable_raw(&full.productions, full.root);
        let mut remap = vec![usize::MAX; full.productions.len()];
        let mut out = Vec::new();
        for (i, p) in full.productions.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            remap[i] = out.len();
            out.push(match *p {
                Production::Pair(b, c) => Production::Pair(remap[b], remap[c]),
                t => t,
            });
        }
        let names = (1..=out.len()).map(|i| format!("B{i}")).collect();
        Slp {
            names,
            root: remap[full.root],
            productions: out,
        }
    }
}

fn reachable_raw(productions: &[Production], root: usize) -> Vec<bool> {
    let mut seen = vec![false; productions.len()];
    seen[root] = true;
    for i in (0..productions.len()).rev() {
        if seen[i] {
            if let Production::Pair(b, c) = productions[i] {
                seen[b] = true;
                seen[c] = true;
            }
        }
    }
    seen
}

/// Program for `w^n` (`n >= 1`): the word by balanced subdivision, then
/// square-and-multiply on its root.
pub fn power_program(w: &GroupWord, n: &BigInt) -> Result<Slp> {
    if w.is_empty() || !n.is_positive() {
        return Err(Error::InvalidArgument("power_program needs a nonempty word and n >= 1".into()));
    }
    let mut b = SlpBuilder::new();
    let mut leaves = Vec::new();
    for l in w.letters() {
        let unit = b.letter(l.generator, l.exponent.is_negative());
        // Unit syllables are expanded, longer ones encoded by doubling.
        match l.exponent.abs().to_u32() {
            Some(k) if k <= 2 => leaves.extend(std::iter::repeat_n(unit, k as usize)),
            _ => leaves.push(b.power(unit, &l.exponent.abs())),
        }
    }
    let root = b.concat(&leaves).expect("nonempty word");
    let root = b.power(root, n);
    Ok(b.finish(Some(root)))
}

/// Program for the normal-form word `a_1^{α_1} ⋯ a_m^{α_m}`; size is linear
/// in the total bit length of the coordinates.
pub fn coords_to_slp(g: &Coords) -> Slp {
    let mut b = SlpBuilder::new();
    let root = b.word(&g.to_word());
    b.finish(root)
}
