//! Nilpotent presentations: storage, validation and the text file format.
//!
//! Generators are 0-based in the API and 1-based in text. For a pair
//! `i < j` the relations are
//!
//! ```text
//! a_j a_i      = a_i a_j      a_{j+1}^{t_{j+1}} ⋯ a_m^{t_m}     (conj j i)
//! a_j^-1 a_i   = a_i a_j^-1   a_{j+1}^{s_{j+1}} ⋯ a_m^{s_m}     (conjinv j i)
//! a_i^{e_i}    = a_{i+1}^{u_{i+1}} ⋯ a_m^{u_m}                  (pow i e_i)
//! ```

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::word::{parse_integer, GroupWord};

/// A nilpotent presentation with weights, torsion exponents and relation tails.
///
/// Tails are stored as full length-`m` exponent vectors. A missing inverse
/// conjugation tail means "derive it from the conjugation relations".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentPresentation {
    weights: Vec<u32>,
    torsion: Vec<Option<BigInt>>,
    power_tails: Vec<Vec<BigInt>>,
    conj: Vec<Vec<Vec<BigInt>>>,
    conj_inv: Vec<Vec<Option<Vec<BigInt>>>>,
    names: Vec<Option<String>>,
}

impl NilpotentPresentation {
    /// The presentation of the trivial group.
    pub fn trivial() -> Self {
        PresentationBuilder::new(0).build().expect("trivial group")
    }

    /// Free abelian group `Z^m` (all weights 1, no relations).
    pub fn free_abelian(m: usize) -> Self {
        PresentationBuilder::new(m).build().expect("free abelian group")
    }

    /// Finite cyclic group `Z/e`.
    pub fn cyclic(e: impl Into<BigInt>) -> Result<Self> {
        let mut b = PresentationBuilder::new(1);
        b.power(0, e.into(), vec![BigInt::zero()])?;
        b.build()
    }

    pub fn num_generators(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    /// Nilpotency class bound: the largest weight (0 for the trivial group).
    pub fn class(&self) -> u32 {
        self.weights.last().copied().unwrap_or(0)
    }

    pub fn torsion(&self, i: usize) -> Option<&BigInt> {
        self.torsion[i].as_ref()
    }

    pub fn torsion_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.weights.len()).filter(|&i| self.torsion[i].is_some())
    }

    /// Power tail of `a_i` (all zero if `i` is not a torsion index).
    pub fn power_tail(&self, i: usize) -> &[BigInt] {
        &self.power_tails[i]
    }

    /// Tail of `a_j a_i = a_i a_j · tail` for `i < j`.
    pub fn conj_tail(&self, j: usize, i: usize) -> &[BigInt] {
        assert!(i < j, "conjugation tails are indexed by i < j");
        &self.conj[j][i]
    }

    /// Tail of `a_j^-1 a_i = a_i a_j^-1 · tail` for `i < j`, if stored.
    pub fn conj_inv_tail(&self, j: usize, i: usize) -> Option<&[BigInt]> {
        assert!(i < j, "conjugation tails are indexed by i < j");
        self.conj_inv[j][i].as_deref()
    }

    pub fn name(&self, i: usize) -> Option<&str> {
        self.names[i].as_deref()
    }

    /// Display names, falling back to `a<k>`.
    pub fn display_names(&self) -> Vec<String> {
        (0..self.num_generators())
            .map(|i| self.names[i].clone().unwrap_or_else(|| format!("a{}", i + 1)))
            .collect()
    }

    /// Number of generators of each weight `1..=class`.
    pub fn weight_counts(&self) -> Vec<usize> {
        let c = self.class() as usize;
        let mut counts = vec![0; c];
        for &w in &self.weights {
            counts[w as usize - 1] += 1;
        }
        counts
    }

    /// True when every inverse conjugation tail is stored explicitly.
    pub fn has_explicit_inverse_tails(&self) -> bool {
        self.conj_inv.iter().all(|row| row.iter().all(Option::is_some))
    }

    pub(crate) fn set_conj_inv_unchecked(&mut self, j: usize, i: usize, tail: Vec<BigInt>) {
        self.conj_inv[j][i] = Some(tail);
    }

    /// Presentation of `G / ⟨a_k, …, a_m⟩` on the first `k` generators.
    /// Only meaningful when that suffix is normal, which holds for every `k`
    /// in a nilpotent presentation.
    pub fn truncate(&self, k: usize) -> NilpotentPresentation {
        let cut = |t: &Vec<BigInt>| t[..k].to_vec();
        NilpotentPresentation {
            weights: self.weights[..k].to_vec(),
            torsion: self.torsion[..k].to_vec(),
            power_tails: self.power_tails[..k].iter().map(cut).collect(),
            conj: self.conj[..k].iter().map(|row| row.iter().map(cut).collect()).collect(),
            conj_inv: self.conj_inv[..k]
                .iter()
                .map(|row| row.iter().map(|t| t.as_ref().map(cut)).collect())
                .collect(),
            names: self.names[..k].to_vec(),
        }
    }

    /// Presentation of the subgroup `⟨a_s, …, a_m⟩` on its own generators.
    pub fn suffix(&self, s: usize) -> NilpotentPresentation {
        let cut = |t: &Vec<BigInt>| t[s..].to_vec();
        NilpotentPresentation {
            weights: self.weights[s..].to_vec(),
            torsion: self.torsion[s..].to_vec(),
            power_tails: self.power_tails[s..].iter().map(cut).collect(),
            conj: self.conj[s..].iter().map(|row| row[s..].iter().map(cut).collect()).collect(),
            conj_inv: self.conj_inv[s..]
                .iter()
                .map(|row| row[s..].iter().map(|t| t.as_ref().map(cut)).collect())
                .collect(),
            names: self.names[s..].to_vec(),
        }
    }

    /// The defining relations as relator words: `a_i^{e_i} u^-1`,
    /// `a_i^-1 a_j a_i (a_j t)^-1` and, where stored, `a_i^-1 a_j^-1 a_i (a_j^-1 s)^-1`.
    pub fn relators(&self) -> Vec<GroupWord> {
        let m = self.num_generators();
        let tail_word = |t: &[BigInt]| GroupWord::from_pairs(t.iter().cloned().enumerate());
        let mut out = Vec::new();
        for i in 0..m {
            if let Some(e) = &self.torsion[i] {
                let mut r = GroupWord::power_of(i, e.clone());
                r.append(&tail_word(&self.power_tails[i]).inverse());
                out.push(r);
            }
        }
        for j in 0..m {
            for i in 0..j {
                let lhs = |sign: i64| GroupWord::from_pairs([(i, -BigInt::one()), (j, sign.into()), (i, BigInt::one())]);
                let mut rhs = GroupWord::generator(j);
                rhs.append(&tail_word(&self.conj[j][i]));
                out.push(lhs(1).concat(&rhs.inverse()));
                if let Some(s) = &self.conj_inv[j][i] {
                    let mut rhs = GroupWord::power_of(j, -BigInt::one());
                    rhs.append(&tail_word(s));
                    out.push(lhs(-1).concat(&rhs.inverse()));
                }
            }
        }
        out
    }

    /// Serializes to the presentation file format. Zero tails are omitted.
    pub fn to_text(&self) -> String {
        let m = self.num_generators();
        let mut s = String::new();
        let _ = writeln!(s, "gens {m}");
        for i in 0..m {
            let _ = writeln!(s, "weight {} {}", i + 1, self.weights[i]);
        }
        for i in 0..m {
            if let Some(name) = &self.names[i] {
                let _ = writeln!(s, "name {} {}", i + 1, name);
            }
        }
        for i in 0..m {
            if let Some(e) = &self.torsion[i] {
                let _ = writeln!(s, "pow {} {} :{}", i + 1, e, tail_text(&self.power_tails[i], i + 1));
            }
        }
        for j in 0..m {
            for i in 0..j {
                let t = &self.conj[j][i];
                if t.iter().any(|x| !x.is_zero()) {
                    let _ = writeln!(s, "conj {} {} :{}", j + 1, i + 1, tail_text(t, j + 1));
                }
                if let Some(t) = &self.conj_inv[j][i] {
                    if t.iter().any(|x| !x.is_zero()) {
                        let _ = writeln!(s, "conjinv {} {} :{}", j + 1, i + 1, tail_text(t, j + 1));
                    }
                }
            }
        }
        s
    }

    /// Checks the structural invariants; used by the builder and the parser.
    /// Weights are levels of a central series: commutator tails of `a_i, a_j`
    /// may only use generators of weight above both.
    fn validate(&self) -> Result<()> {
        let m = self.num_generators();
        let invalid = |msg: String| Err(Error::InvalidPresentation(msg));
        for i in 0..m {
            if self.weights[i] == 0 {
                return invalid(format!("generator a{} has weight 0", i + 1));
            }
            if i > 0 && self.weights[i] < self.weights[i - 1] {
                return invalid(format!("weights not nondecreasing at a{}", i + 1));
            }
            if let Some(e) = &self.torsion[i] {
                if *e < BigInt::from(2) {
                    return invalid(format!("torsion exponent of a{} is {e}, must be at least 2", i + 1));
                }
            }
            if let Some(k) = self.power_tails[i][..=i].iter().position(|x| !x.is_zero()) {
                return invalid(format!("power tail of a{} touches a{}", i + 1, k + 1));
            }
        }
        for j in 0..m {
            for i in 0..j {
                let min_weight = self.weights[i].max(self.weights[j]) + 1;
                let tails = std::iter::once(("conj", Some(&self.conj[j][i])))
                    .chain(std::iter::once(("conjinv", self.conj_inv[j][i].as_ref())));
                for (kind, tail) in tails {
                    let Some(tail) = tail else { continue };
                    if let Some(k) = tail[..=j].iter().position(|x| !x.is_zero()) {
                        return invalid(format!(
                            "{kind} tail for (a{}, a{}) touches index a{} <= j",
                            j + 1,
                            i + 1,
                            k + 1
                        ));
                    }
                    if let Some(k) = (j + 1..m).find(|&k| !tail[k].is_zero() && self.weights[k] < min_weight) {
                        return invalid(format!(
                            "{kind} tail for (a{}, a{}) uses a{} of weight {} < {}",
                            j + 1,
                            i + 1,
                            k + 1,
                            self.weights[k],
                            min_weight
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn tail_text(tail: &[BigInt], from: usize) -> String {
    let mut s = String::new();
    for x in &tail[from..] {
        let _ = write!(s, " {x}");
    }
    s
}

/// Incremental constructor for [`NilpotentPresentation`]; `build` validates.
#[derive(Debug, Clone)]
pub struct PresentationBuilder {
    p: NilpotentPresentation,
}

impl PresentationBuilder {
    /// `m` generators, all of weight 1, no torsion, zero tails, and explicit
    /// zero inverse tails.
    pub fn new(m: usize) -> Self {
        let zero = vec![BigInt::zero(); m];
        Self {
            p: NilpotentPresentation {
                weights: vec![1; m],
                torsion: vec![None; m],
                power_tails: vec![zero.clone(); m],
                conj: (0..m).map(|j| vec![zero.clone(); j]).collect(),
                conj_inv: (0..m).map(|j| vec![Some(zero.clone()); j]).collect(),
                names: vec![None; m],
            },
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        let count = self.p.num_generators();
        if i < count {
            Ok(())
        } else {
            Err(Error::GeneratorOutOfRange { index: i + 1, count })
        }
    }

    fn check_tail(&self, tail: &[BigInt]) -> Result<()> {
        let m = self.p.num_generators();
        if tail.len() == m {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: m,
                found: tail.len(),
            })
        }
    }

    pub fn weight(&mut self, i: usize, w: u32) -> Result<&mut Self> {
        self.check_index(i)?;
        self.p.weights[i] = w;
        Ok(self)
    }

    pub fn weights(&mut self, ws: &[u32]) -> Result<&mut Self> {
        if ws.len() != self.p.num_generators() {
            return Err(Error::LengthMismatch {
                expected: self.p.num_generators(),
                found: ws.len(),
            });
        }
        self.p.weights = ws.to_vec();
        Ok(self)
    }

    pub fn power(&mut self, i: usize, e: BigInt, tail: Vec<BigInt>) -> Result<&mut Self> {
        self.check_index(i)?;
        self.check_tail(&tail)?;
        self.p.torsion[i] = Some(e);
        self.p.power_tails[i] = tail;
        Ok(self)
    }

    pub fn conj(&mut self, j: usize, i: usize, tail: Vec<BigInt>) -> Result<&mut Self> {
        self.check_pair(j, i)?;
        self.check_tail(&tail)?;
        self.p.conj[j][i] = tail;
        Ok(self)
    }

    /// Sets an explicit inverse tail, or `None` to have it derived.
    pub fn conj_inv(&mut self, j: usize, i: usize, tail: Option<Vec<BigInt>>) -> Result<&mut Self> {
        self.check_pair(j, i)?;
        if let Some(t) = &tail {
            self.check_tail(t)?;
        }
        self.p.conj_inv[j][i] = tail;
        Ok(self)
    }

    pub fn name(&mut self, i: usize, name: impl Into<String>) -> Result<&mut Self> {
        self.check_index(i)?;
        self.p.names[i] = Some(name.into());
        Ok(self)
    }

    fn check_pair(&self, j: usize, i: usize) -> Result<()> {
        self.check_index(j)?;
        if i >= j {
            return Err(Error::InvalidPresentation(format!(
                "relation (a{}, a{}) needs i < j",
                j + 1,
                i + 1
            )));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<NilpotentPresentation> {
        self.p.validate()?;
        Ok(self.p.clone())
    }
}

/// Parses the presentation file format.
///
/// ```text
/// # Heisenberg group
/// gens 3
/// weight 1 1
/// weight 2 1
/// weight 3 2
/// conj 2 1 : 1
/// ```
///
/// Tails may be written positionally (`: t_{j+1} … t_m`, missing trailing
/// entries are zero) or as a normal-form word (`: a3^2 a4`). Omitted `conj`
/// and `pow` lines mean zero tails; omitted `conjinv` lines are derived from
/// the conjugation relations.
pub fn parse_presentation(text: &str) -> Result<NilpotentPresentation> {
    let mut builder: Option<PresentationBuilder> = None;
    let mut seen_weight: Vec<bool> = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let toks = tokens(line);
        let (col0, kw) = toks[0];
        let err = |col: usize, msg: String| Error::syntax(line_no, col, msg);

        if kw == "gens" {
            if builder.is_some() {
                return Err(err(col0, "duplicate `gens` directive".into()));
            }
            if toks.len() != 2 {
                return Err(err(col0, "expected `gens <m>`".into()));
            }
            let m: usize = toks[1]
                .1
                .parse()
                .map_err(|_| err(toks[1].0, format!("bad generator count `{}`", toks[1].1)))?;
            builder = Some(PresentationBuilder::new(m));
            seen_weight = vec![false; m];
            continue;
        }
        let b = builder
            .as_mut()
            .ok_or_else(|| err(col0, "`gens` must come first".into()))?;
        let m = b.p.num_generators();
        let index = |k: usize| -> Result<usize> {
            let (col, t) = *toks
                .get(k)
                .ok_or_else(|| err(line.len() + 1, "missing generator index".into()))?;
            match t.parse::<usize>() {
                Ok(i) if (1..=m).contains(&i) => Ok(i - 1),
                _ => Err(err(col, format!("bad generator index `{t}`"))),
            }
        };

        match kw {
            "weight" => {
                if toks.len() != 3 {
                    return Err(err(col0, "expected `weight <i> <w>`".into()));
                }
                let i = index(1)?;
                let w: u32 = toks[2]
                    .1
                    .parse()
                    .ok()
                    .filter(|&w| w >= 1)
                    .ok_or_else(|| err(toks[2].0, format!("bad weight `{}`", toks[2].1)))?;
                if std::mem::replace(&mut seen_weight[i], true) {
                    return Err(err(col0, format!("duplicate weight for a{}", i + 1)));
                }
                b.p.weights[i] = w;
            }
            "name" => {
                let i = index(1)?;
                let name = toks.get(2).map(|t| t.1).ok_or_else(|| err(col0, "expected `name <i> <string>`".into()))?;
                if toks.len() != 3 {
                    return Err(err(toks[3].0, "names must be a single token".into()));
                }
                b.p.names[i] = Some(name.to_string());
            }
            "pow" => {
                let i = index(1)?;
                let (ecol, etext) = *toks.get(2).ok_or_else(|| err(col0, "missing torsion exponent".into()))?;
                let e = parse_integer(etext).ok_or_else(|| err(ecol, format!("bad exponent `{etext}`")))?;
                if e < BigInt::from(2) {
                    return Err(Error::InvalidPresentation(format!(
                        "line {line_no}: torsion exponent {e} of a{} must be at least 2",
                        i + 1
                    )));
                }
                let tail = parse_tail(&toks[3..], m, i, line_no, line.len())?;
                if !seen.insert(("pow", i, 0)) {
                    return Err(err(col0, format!("duplicate pow line for a{}", i + 1)));
                }
                b.p.torsion[i] = Some(e);
                b.p.power_tails[i] = tail;
            }
            "conj" | "conjinv" => {
                let j = index(1)?;
                let i = index(2)?;
                if i >= j {
                    return Err(err(toks[2].0, format!("{kw} needs i < j, got j={} i={}", j + 1, i + 1)));
                }
                let tail = parse_tail(&toks[3..], m, j, line_no, line.len())?;
                if !seen.insert((if kw == "conj" { "conj" } else { "conjinv" }, j, i)) {
                    return Err(err(col0, format!("duplicate {kw} line for ({}, {})", j + 1, i + 1)));
                }
                if kw == "conj" {
                    b.p.conj[j][i] = tail;
                } else {
                    b.p.conj_inv[j][i] = Some(tail);
                }
            }
            other => return Err(err(col0, format!("unknown directive `{other}`"))),
        }
    }

    let mut b = builder.ok_or_else(|| Error::syntax(1, 1, "missing `gens` directive"))?;
    if let Some(i) = seen_weight.iter().position(|s| !s) {
        return Err(Error::InvalidPresentation(format!("missing weight for a{}", i + 1)));
    }
    // Inverse tails not given in the file are derived later.
    let m = b.p.num_generators();
    for j in 0..m {
        for i in 0..j {
            if !seen.contains(&("conjinv", j, i)) {
                b.p.conj_inv[j][i] = None;
            }
        }
    }
    b.build()
}

/// Whitespace tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..idx]));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parses `: t_{after+1} … t_m` or `: a<k>^<e> …` into a full tail vector.
/// Word-form tails must name indices greater than `after`, in increasing order.
fn parse_tail(toks: &[(usize, &str)], m: usize, after: usize, line_no: usize, eol: usize) -> Result<Vec<BigInt>> {
    let err = |col: usize, msg: String| Error::syntax(line_no, col, msg);
    let (col, first) = toks.first().copied().unwrap_or((eol + 1, ""));
    if first != ":" {
        return Err(err(col, "expected `:` before tail".into()));
    }
    let mut tail = vec![BigInt::zero(); m];
    let rest = &toks[1..];
    let word_form = rest.first().is_some_and(|(_, t)| t.starts_with('a'));
    if word_form {
        let mut last: Option<usize> = None;
        for &(col, t) in rest {
            let (base, exp) = match t.split_once('^') {
                Some((b, e)) => (b, parse_integer(e).ok_or_else(|| err(col, format!("bad exponent in `{t}`")))?),
                None => (t, BigInt::one()),
            };
            let k = base
                .strip_prefix('a')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|k| (1..=m).contains(k))
                .ok_or_else(|| err(col, format!("bad tail letter `{t}`")))?
                - 1;
            if k <= after {
                return Err(Error::InvalidPresentation(format!(
                    "line {line_no}: tail touches index a{} <= a{}",
                    k + 1,
                    after + 1
                )));
            }
            if last.is_some_and(|l| k <= l) {
                return Err(err(col, "tail letters must have increasing indices".into()));
            }
            last = Some(k);
            tail[k] = exp;
        }
    } else {
        if rest.len() > m - after - 1 {
            return Err(Error::InvalidPresentation(format!(
                "line {line_no}: tail has {} entries but only {} generators follow a{}",
                rest.len(),
                m - after - 1,
                after + 1
            )));
        }
        for (k, &(col, t)) in rest.iter().enumerate() {
            tail[after + 1 + k] = parse_integer(t).ok_or_else(|| err(col, format!("bad tail entry `{t}`")))?;
        }
    }
    Ok(tail)
}
