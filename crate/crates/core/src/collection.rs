//! Mal'cev normal forms and group operations on coordinate tuples.
//!
//! Products are formed by collection from the left. To multiply an element
//! `P · a_k^x · v` (with `P` on generators before `a_k` and `v` in
//! `N_{k+1} = ⟨a_{k+1}, …, a_m⟩`) on the right by `a_k^e`, the suffix `v` is
//! conjugated past the new letters,
//!
//! ```text
//! P a_k^x v a_k^e = P a_k^{x+e} (a_k^{-e} v a_k^e),
//! ```
//!
//! and the exponent of `a_k` is reduced with the power relation when `k` is a
//! torsion index. Conjugation by `a_k^{±1}` acts on `N_{k+1}` through the
//! images of its generators, which are tabulated once per group. Larger
//! powers of the automorphism are obtained by repeated squaring, or by a
//! binomial expansion when `N_{k+1}` is abelian.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::presentation::NilpotentPresentation;
use crate::word::GroupWord;

type Vector = Vec<BigInt>;

/// A nilpotent presentation together with the tables collection needs.
///
/// Immutable after construction; every operation is a pure function of its
/// arguments, so a `Group` may be shared freely across threads.
#[derive(Debug, Clone)]
pub struct Group {
    pres: NilpotentPresentation,
    m: usize,
    torsion: Vec<Option<BigInt>>,
    /// Normalized coordinates of `a_k^{e_k}` (torsion indices only).
    pow_elem: Vec<Option<Vector>>,
    /// `conj_pos[k][l]` = coordinates of `a_k^-1 a_l a_k` for `l > k`.
    conj_pos: Vec<Vec<Vector>>,
    /// `conj_neg[k][l]` = coordinates of `a_k a_l a_k^-1` for `l > k`.
    conj_neg: Vec<Vec<Vector>>,
    /// `a_k` commutes with every later generator.
    central: Vec<bool>,
    /// `N_k` is abelian and its torsion relations have empty tails, so its
    /// coordinates add entrywise (modulo the torsion exponents).
    linear_from: Vec<bool>,
}

impl Group {
    /// Builds the collection tables. Missing inverse conjugation tails in
    /// `pres` are filled in from the conjugation relations.
    pub fn new(pres: NilpotentPresentation) -> Self {
        let m = pres.num_generators();
        let torsion: Vec<Option<BigInt>> = (0..m).map(|i| pres.torsion(i).cloned()).collect();
        let mut g = Group {
            pres,
            m,
            torsion,
            pow_elem: vec![None; m],
            conj_pos: vec![Vec::new(); m],
            conj_neg: vec![Vec::new(); m],
            central: vec![true; m],
            linear_from: vec![true; m + 1],
        };
        // Tables for index k only use arithmetic in N_{k+1}, which is already
        // available when k runs downwards.
        for k in (0..m).rev() {
            if g.torsion[k].is_some() {
                let tail = g.pres.power_tail(k).to_vec();
                g.pow_elem[k] = Some(g.normalize_raw(&tail));
            }
            let mut pos = vec![Vec::new(); m];
            for (l, slot) in pos.iter_mut().enumerate().skip(k + 1) {
                let mut raw = g.pres.conj_tail(l, k).to_vec();
                raw[l] += 1;
                *slot = g.normalize_raw(&raw);
            }
            g.central[k] = (k + 1..m).all(|l| is_unit(&pos[l], l));
            g.conj_pos[k] = pos;

            let mut neg = vec![Vec::new(); m];
            for l in (k + 1..m).rev() {
                // a_l^{a_k} = a_l t, hence a_l^{a_k^-1} = a_l (t^{a_k^-1})^-1.
                let mut t = g.conj_pos[k][l].clone();
                t[l] = BigInt::zero();
                let t_back = g.apply_images(&neg, &t);
                let mut x = g.inv_vec(&t_back);
                x[l] = BigInt::one();
                neg[l] = x;
            }
            g.conj_neg[k] = neg;

            let carry_free = g.pow_elem[k].as_ref().is_none_or(|p| is_zero_vec(p));
            g.linear_from[k] = g.linear_from[k + 1] && g.central[k] && carry_free;
        }
        g.fill_inverse_tails();
        g
    }

    fn fill_inverse_tails(&mut self) {
        for j in 0..self.m {
            for i in 0..j {
                if self.pres.conj_inv_tail(j, i).is_some() {
                    continue;
                }
                // a_j^-1 a_i = a_i a_j^-1 s  with  s = a_j a_i^-1 a_j^-1 a_i.
                let mut s = self.unit_vec(j, BigInt::one());
                self.mul_gen(&mut s, i, &-BigInt::one());
                self.mul_gen(&mut s, j, &-BigInt::one());
                self.mul_gen(&mut s, i, &BigInt::one());
                if s[..=j].iter().all(Zero::is_zero) {
                    self.pres.set_conj_inv_unchecked(j, i, s);
                }
            }
        }
    }

    pub fn presentation(&self) -> &NilpotentPresentation {
        &self.pres
    }

    pub fn num_generators(&self) -> usize {
        self.m
    }

    pub fn class(&self) -> u32 {
        self.pres.class()
    }

    pub fn torsion(&self, i: usize) -> Option<&BigInt> {
        self.torsion[i].as_ref()
    }

    pub fn identity(&self) -> Coords {
        Coords::zero(self.m)
    }

    /// Coordinates of `a_i^e`, normalized.
    pub fn generator_power(&self, i: usize, e: BigInt) -> Coords {
        let mut v = vec![BigInt::zero(); self.m];
        self.mul_gen(&mut v, i, &e);
        Coords(v)
    }

    pub fn generator(&self, i: usize) -> Coords {
        self.generator_power(i, BigInt::one())
    }

    /// True when `g` has the right length and satisfies `0 <= g_i < e_i` on
    /// every torsion index.
    pub fn is_normalized(&self, g: &Coords) -> bool {
        g.len() == self.m
            && self
                .torsion
                .iter()
                .zip(g.iter())
                .all(|(e, x)| e.as_ref().is_none_or(|e| !x.is_negative() && x < e))
    }

    pub fn check(&self, g: &Coords) -> Result<()> {
        g.check_len(self.m)?;
        if self.is_normalized(g) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("coordinates {g} are not normalized")))
        }
    }

    /// Normal form of a word, collected one syllable at a time.
    pub fn word_to_coords(&self, w: &GroupWord) -> Result<Coords> {
        w.check_range(self.m)?;
        let mut acc = vec![BigInt::zero(); self.m];
        for letter in w.letters() {
            self.mul_gen(&mut acc, letter.generator, &letter.exponent);
        }
        Ok(Coords(acc))
    }

    /// Normal form of the word `a_1^{raw_1} ⋯ a_m^{raw_m}`. Torsion entries are
    /// reduced left to right; each carry multiplies the power tail into the
    /// suffix.
    pub fn normalize_torsion(&self, raw: &Coords) -> Coords {
        assert_eq!(raw.len(), self.m, "coordinate length");
        Coords(self.normalize_raw(&raw.0))
    }

    pub fn multiply(&self, g: &Coords, h: &Coords) -> Coords {
        assert_eq!(g.len(), self.m, "coordinate length");
        assert_eq!(h.len(), self.m, "coordinate length");
        Coords(self.mul_vec(&g.0, &h.0))
    }

    pub fn invert(&self, g: &Coords) -> Coords {
        assert_eq!(g.len(), self.m, "coordinate length");
        Coords(self.inv_vec(&g.0))
    }

    /// `g^n` for any integer `n` by binary powering.
    pub fn power(&self, g: &Coords, n: &BigInt) -> Coords {
        assert_eq!(g.len(), self.m, "coordinate length");
        Coords(self.pow_vec(&g.0, n))
    }

    /// `g · a_i^e` in place.
    pub fn multiply_by_generator_power(&self, g: &mut Coords, i: usize, e: &BigInt) {
        self.mul_gen(&mut g.0, i, e);
    }

    /// `u^-1 g u`.
    pub fn conjugate(&self, g: &Coords, u: &Coords) -> Coords {
        let ui = self.invert(u);
        self.multiply(&self.multiply(&ui, g), u)
    }

    /// `[g, h] = g^-1 h^-1 g h`.
    pub fn commutator(&self, g: &Coords, h: &Coords) -> Coords {
        let gh = self.multiply(g, h);
        let hg = self.multiply(h, g);
        self.multiply(&self.invert(&hg), &gh)
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a Coords>>(&self, items: I) -> Coords {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.multiply(&acc, x))
    }

    // ---- vector-level arithmetic -------------------------------------------------

    fn unit_vec(&self, i: usize, e: BigInt) -> Vector {
        let mut v = vec![BigInt::zero(); self.m];
        v[i] = e;
        v
    }

    fn normalize_raw(&self, raw: &[BigInt]) -> Vector {
        let mut acc = vec![BigInt::zero(); self.m];
        for (k, x) in raw.iter().enumerate() {
            if !x.is_zero() {
                self.mul_gen(&mut acc, k, x);
            }
        }
        acc
    }

    /// Reduces torsion entries entrywise; only valid inside a linear suffix.
    fn reduce_linear(&self, v: &mut [BigInt], from: usize) {
        for l in from..self.m {
            if let Some(e) = &self.torsion[l] {
                v[l] = v[l].mod_floor(e);
            }
        }
    }

    fn mul_gen(&self, g: &mut [BigInt], k: usize, e: &BigInt) {
        if e.is_zero() {
            return;
        }
        let m = self.m;
        let has_suffix = g[k + 1..].iter().any(|x| !x.is_zero());
        let mut suffix: Option<Vector> = None;
        if has_suffix && !self.central[k] {
            let mut v = vec![BigInt::zero(); m];
            for l in k + 1..m {
                v[l] = std::mem::take(&mut g[l]);
            }
            suffix = Some(self.conj_gen_power(v, k, e));
        }
        g[k] += e;
        if let Some(ek) = &self.torsion[k] {
            if g[k].is_negative() || &g[k] >= ek {
                let (q, r) = g[k].div_mod_floor(ek);
                g[k] = r;
                let w = self.pow_elem[k].as_ref().expect("torsion table");
                if !is_zero_vec(w) {
                    let t = self.pow_vec(w, &q);
                    let v = match suffix.take() {
                        Some(v) => v,
                        None => {
                            let mut v = vec![BigInt::zero(); m];
                            for l in k + 1..m {
                                v[l] = std::mem::take(&mut g[l]);
                            }
                            v
                        }
                    };
                    suffix = Some(self.mul_vec(&t, &v));
                }
            }
        }
        if let Some(v) = suffix {
            for (l, x) in v.into_iter().enumerate().skip(k + 1) {
                g[l] = x;
            }
        }
    }

    /// `a_k^-e v a_k^e` for `v` supported on indices `> k`.
    fn conj_gen_power(&self, v: Vector, k: usize, e: &BigInt) -> Vector {
        if self.linear_from[k + 1] {
            return self.conj_linear(v, k, e);
        }
        if e.is_one() {
            return self.apply_images(&self.conj_pos[k], &v);
        }
        if *e == -BigInt::one() {
            return self.apply_images(&self.conj_neg[k], &v);
        }
        let table = if e.is_positive() { &self.conj_pos[k] } else { &self.conj_neg[k] };
        let n = e.abs();
        if n <= BigInt::from(4) {
            let mut v = v;
            let reps: u32 = (&n).try_into().expect("small");
            for _ in 0..reps {
                v = self.apply_images(table, &v);
            }
            return v;
        }
        let images = self.power_images(table, k, &n);
        self.apply_images(&images, &v)
    }

    /// Binomial expansion `Σ_j C(e, j) U^j v` where `1 + U` is conjugation by
    /// `a_k` acting linearly on the abelian, carry-free `N_{k+1}`.
    fn conj_linear(&self, v: Vector, k: usize, e: &BigInt) -> Vector {
        let m = self.m;
        let mut out = v.clone();
        let mut term = v;
        let mut binom = BigInt::one();
        let mut j = 0u32;
        loop {
            // term <- U term
            let mut next = vec![BigInt::zero(); m];
            for l in k + 1..m {
                if term[l].is_zero() {
                    continue;
                }
                let img = &self.conj_pos[k][l];
                for r in l + 1..m {
                    if !img[r].is_zero() {
                        next[r] += &term[l] * &img[r];
                    }
                }
            }
            if is_zero_vec(&next) {
                break;
            }
            binom = binom * (e - BigInt::from(j)) / BigInt::from(j + 1);
            j += 1;
            if binom.is_zero() {
                break;
            }
            for r in k + 1..m {
                if !next[r].is_zero() {
                    out[r] += &binom * &next[r];
                }
            }
            term = next;
        }
        self.reduce_linear(&mut out, k + 1);
        out
    }

    /// Images of the generators under the `n`-th power of the automorphism
    /// given by `table`, by repeated squaring.
    fn power_images(&self, table: &[Vector], k: usize, n: &BigInt) -> Vec<Vector> {
        let m = self.m;
        let mut result: Vec<Vector> = (0..m)
            .map(|l| if l > k { self.unit_vec(l, BigInt::one()) } else { Vec::new() })
            .collect();
        let mut base: Vec<Vector> = table.to_vec();
        let mut n = n.clone();
        let two = BigInt::from(2);
        while !n.is_zero() {
            if n.is_odd() {
                result = (0..m)
                    .map(|l| if l > k { self.apply_images(&base, &result[l]) } else { Vec::new() })
                    .collect();
            }
            n /= &two;
            if !n.is_zero() {
                base = (0..m)
                    .map(|l| if l > k { self.apply_images(&base, &base[l]) } else { Vec::new() })
                    .collect();
            }
        }
        result
    }

    /// Applies the endomorphism `a_l ↦ images[l]` to `v`.
    fn apply_images(&self, images: &[Vector], v: &[BigInt]) -> Vector {
        let mut acc = vec![BigInt::zero(); self.m];
        for (l, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let p = self.pow_vec(&images[l], x);
            acc = self.mul_vec(&acc, &p);
        }
        acc
    }

    fn mul_vec(&self, g: &[BigInt], h: &[BigInt]) -> Vector {
        let Some(s) = h.iter().position(|x| !x.is_zero()) else {
            return g.to_vec();
        };
        let from = g.iter().position(|x| !x.is_zero()).map_or(s, |p| p.min(s));
        if self.linear_from[from] {
            let mut out: Vector = g.iter().zip(h).map(|(a, b)| a + b).collect();
            self.reduce_linear(&mut out, from);
            return out;
        }
        let mut out = g.to_vec();
        for (k, x) in h.iter().enumerate().skip(s) {
            if !x.is_zero() {
                self.mul_gen(&mut out, k, x);
            }
        }
        out
    }

    fn inv_vec(&self, g: &[BigInt]) -> Vector {
        let Some(s) = g.iter().position(|x| !x.is_zero()) else {
            return g.to_vec();
        };
        if self.linear_from[s] {
            let mut out: Vector = g.iter().map(|x| -x).collect();
            self.reduce_linear(&mut out, s);
            return out;
        }
        let mut out = vec![BigInt::zero(); self.m];
        for k in (s..self.m).rev() {
            if !g[k].is_zero() {
                self.mul_gen(&mut out, k, &-&g[k]);
            }
        }
        out
    }

    fn pow_vec(&self, g: &[BigInt], n: &BigInt) -> Vector {
        let mut nonzero = g.iter().enumerate().filter(|(_, x)| !x.is_zero());
        let Some((s, first)) = nonzero.next() else {
            return g.to_vec();
        };
        if n.is_zero() {
            return vec![BigInt::zero(); self.m];
        }
        if nonzero.next().is_none() {
            let mut out = vec![BigInt::zero(); self.m];
            self.mul_gen(&mut out, s, &(first * n));
            return out;
        }
        if self.linear_from[s] {
            let mut out: Vector = g.iter().map(|x| x * n).collect();
            self.reduce_linear(&mut out, s);
            return out;
        }
        let (mut base, mut e) = if n.is_negative() {
            (self.inv_vec(g), -n)
        } else {
            (g.to_vec(), n.clone())
        };
        let mut acc = vec![BigInt::zero(); self.m];
        let two = BigInt::from(2);
        loop {
            if e.is_odd() {
                acc = self.mul_vec(&acc, &base);
            }
            e /= &two;
            if e.is_zero() {
                break;
            }
            base = self.mul_vec(&base, &base);
        }
        acc
    }
}

fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn is_unit(v: &[BigInt], l: usize) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, x)| if i == l { x.is_one() } else { x.is_zero() })
}
