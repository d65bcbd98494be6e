//! Hall basic commutators and presentations of free nilpotent groups.
//!
//! The free nilpotent group `F(r, c)` is modelled faithfully inside the
//! truncated power series ring `Z⟨⟨X_1, …, X_r⟩⟩ / (degree > c)` by
//! `x_i ↦ 1 + X_i`. The leading homogeneous part of a basic commutator of
//! weight `w` is its Lie element, and these form a basis of the degree-`w`
//! part of the free Lie ring; reading coordinates off a series therefore
//! reduces to one exact linear solve per weight.
//!
//! The number of generators is `m = Σ_{w ≤ c} (1/w) Σ_{d | w} μ(d) r^{w/d}`
//! (Witt's formula): 3 for `F(2,2)`, 5 for `F(2,3)`, 14 for `F(3,3)`,
//! 32 for `F(3,4)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::presentation::{NilpotentPresentation, PresentationBuilder};

/// Upper bound on the number of monomials in the truncated series ring.
const MAX_MONOMIALS: usize = 1 << 20;
/// Upper bound on the size of the Hall basis.
const MAX_BASIS: usize = 400;

/// A Hall basic commutator. `Bracket(u, v)` is `[b_u, b_v]` with `u > v`
/// indexing earlier basis elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicCommutator {
    Generator(usize),
    Bracket(usize, usize),
}

/// The Hall basis of the free nilpotent group of class `c` on `r` generators,
/// ordered by weight and then by components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallBasis {
    rank: usize,
    class: u32,
    elements: Vec<BasicCommutator>,
    weights: Vec<u32>,
}

impl HallBasis {
    pub fn new(class: u32, rank: usize) -> Result<Self> {
        if class == 0 || rank == 0 {
            return Err(Error::InvalidArgument("class and rank must be at least 1".into()));
        }
        let mut elements: Vec<BasicCommutator> = (0..rank).map(BasicCommutator::Generator).collect();
        let mut weights = vec![1u32; rank];
        for w in 2..=class {
            let mut fresh = Vec::new();
            for u in 0..elements.len() {
                for v in 0..u {
                    if weights[u] + weights[v] != w {
                        continue;
                    }
                    if let BasicCommutator::Bracket(_, u2) = elements[u] {
                        if u2 > v {
                            continue;
                        }
                    }
                    fresh.push(BasicCommutator::Bracket(u, v));
                }
            }
            if elements.len() + fresh.len() > MAX_BASIS {
                return Err(Error::ResourceLimit(format!(
                    "Hall basis for class {class}, rank {rank} exceeds {MAX_BASIS} elements"
                )));
            }
            weights.extend(std::iter::repeat_n(w, fresh.len()));
            elements.extend(fresh);
        }
        Ok(HallBasis {
            rank,
            class,
            elements,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    pub fn elements(&self) -> &[BasicCommutator] {
        &self.elements
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Bracket notation with left-normed nesting, e.g. `[[x2,x1],x1]`.
    pub fn describe(&self, i: usize) -> String {
        match self.elements[i] {
            BasicCommutator::Generator(g) => format!("x{}", g + 1),
            BasicCommutator::Bracket(u, v) => format!("[{},{}]", self.describe(u), self.describe(v)),
        }
    }
}

impl fmt::Display for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            writeln!(f, "a{} = {} (weight {})", i + 1, self.describe(i), self.weights[i])?;
        }
        Ok(())
    }
}

/// Truncated noncommutative power series with integer coefficients, stored
/// densely by degree. Monomial `X_{i_1} ⋯ X_{i_d}` of degree `d` lives at
/// `offset[d] + Σ i_k r^{d-k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

/// The ambient ring of [`Series`]: rank, truncation degree, and layout.
#[derive(Debug, Clone)]
pub struct SeriesRing {
    rank: usize,
    degree: usize,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
}

impl SeriesRing {
    pub fn new(rank: usize, degree: usize) -> Result<Self> {
        let mut offsets = Vec::with_capacity(degree + 2);
        let mut sizes = Vec::with_capacity(degree + 1);
        let mut total = 0usize;
        let mut size = 1usize;
        for _ in 0..=degree {
            offsets.push(total);
            sizes.push(size);
            total = total
                .checked_add(size)
                .filter(|&t| t <= MAX_MONOMIALS)
                .ok_or_else(|| Error::ResourceLimit(format!("series ring of rank {rank}, degree {degree} too large")))?;
            size = size.saturating_mul(rank);
        }
        offsets.push(total);
        Ok(SeriesRing {
            rank,
            degree,
            offsets,
            sizes,
        })
    }

    fn total(&self) -> usize {
        self.offsets[self.degree + 1]
    }

    pub fn one(&self) -> Series {
        let mut coeffs = vec![BigInt::zero(); self.total()];
        coeffs[0] = BigInt::one();
        Series { coeffs }
    }

    /// `1 + X_i`.
    pub fn generator(&self, i: usize) -> Series {
        let mut s = self.one();
        if self.degree >= 1 {
            s.coeffs[self.offsets[1] + i] = BigInt::one();
        }
        s
    }

    /// `(1 + X_i)^-1 = Σ_k (-X_i)^k`.
    pub fn generator_inverse(&self, i: usize) -> Series {
        let mut s = self.one();
        let mut code = 0usize;
        for d in 1..=self.degree {
            code = code * self.rank + i;
            s.coeffs[self.offsets[d] + code] = if d % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        }
        s
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Series {
        let mut out = vec![BigInt::zero(); self.total()];
        for da in 0..=self.degree {
            for ia in 0..self.sizes[da] {
                let x = &a.coeffs[self.offsets[da] + ia];
                if x.is_zero() {
                    continue;
                }
                for db in 0..=self.degree - da {
                    let shift = self.sizes[db];
                    let base = self.offsets[da + db] + ia * shift;
                    for ib in 0..shift {
                        let y = &b.coeffs[self.offsets[db] + ib];
                        if !y.is_zero() {
                            out[base + ib] += x * y;
                        }
                    }
                }
            }
        }
        Series { coeffs: out }
    }

    /// Inverse of a series with constant term 1: `Σ_k (1 - s)^k`.
    pub fn inverse(&self, s: &Series) -> Series {
        debug_assert!(s.coeffs[0].is_one());
        let mut nil = s.clone();
        for x in nil.coeffs.iter_mut() {
            *x = -&*x;
        }
        nil.coeffs[0] = BigInt::zero();
        let mut acc = self.one();
        let mut term = self.one();
        for _ in 0..self.degree {
            term = self.mul(&term, &nil);
            for (a, t) in acc.coeffs.iter_mut().zip(&term.coeffs) {
                *a += t;
            }
        }
        acc
    }

    pub fn pow(&self, s: &Series, n: &BigInt) -> Series {
        let (mut base, mut e) = if n.is_negative() {
            (self.inverse(s), -n)
        } else {
            (s.clone(), n.clone())
        };
        let mut acc = self.one();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if (&e % &two).is_one() {
                acc = self.mul(&acc, &base);
            }
            e /= &two;
            if !e.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Group commutator `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &Series, b: &Series) -> Series {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inverse(&ba), &ab)
    }

    fn homogeneous(&self, s: &Series, d: usize) -> Vec<BigInt> {
        s.coeffs[self.offsets[d]..self.offsets[d + 1]].to_vec()
    }
}

/// The free nilpotent group on its Hall basis, realized in the Magnus ring.
/// Serves both to build the presentation and as an independent oracle for
/// collection in free nilpotent groups.
#[derive(Debug, Clone)]
pub struct MagnusModel {
    basis: HallBasis,
    ring: SeriesRing,
    series: Vec<Series>,
    /// Per weight `w`: basis indices, chosen monomial rows and the inverse of
    /// the square submatrix of leading terms on those rows.
    solvers: Vec<WeightSolver>,
}

#[derive(Debug, Clone)]
struct WeightSolver {
    indices: Vec<usize>,
    rows: Vec<usize>,
    inverse: Vec<Vec<BigRational>>,
}

impl MagnusModel {
    pub fn new(class: u32, rank: usize) -> Result<Self> {
        let basis = HallBasis::new(class, rank)?;
        let ring = SeriesRing::new(rank, class as usize)?;
        let mut series: Vec<Series> = Vec::with_capacity(basis.len());
        for b in &basis.elements {
            let s = match *b {
                BasicCommutator::Generator(i) => ring.generator(i),
                BasicCommutator::Bracket(u, v) => ring.commutator(&series[u], &series[v]),
            };
            series.push(s);
        }
        let mut solvers = Vec::new();
        for w in 1..=class {
            let indices: Vec<usize> = (0..basis.len()).filter(|&i| basis.weights[i] == w).collect();
            let columns: Vec<Vec<BigInt>> = indices
                .iter()
                .map(|&i| ring.homogeneous(&series[i], w as usize))
                .collect();
            solvers.push(WeightSolver::new(indices, &columns)?);
        }
        Ok(MagnusModel {
            basis,
            ring,
            series,
            solvers,
        })
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    /// Series of the element with the given Hall-basis coordinates.
    pub fn element(&self, coords: &Coords) -> Series {
        let mut acc = self.ring.one();
        for (i, x) in coords.iter().enumerate() {
            if !x.is_zero() {
                acc = self.ring.mul(&acc, &self.ring.pow(&self.series[i], x));
            }
        }
        acc
    }

    /// Series of a word in the free generators.
    pub fn word(&self, w: &crate::word::GroupWord) -> Series {
        let mut acc = self.ring.one();
        for l in w.letters() {
            let g = self.ring.generator(l.generator);
            acc = self.ring.mul(&acc, &self.ring.pow(&g, &l.exponent));
        }
        acc
    }

    /// Hall-basis coordinates of a series that represents a group element.
    pub fn coords(&self, s: &Series) -> Result<Coords> {
        let mut rest = s.clone();
        let mut out = Coords::zero(self.basis.len());
        for (w, solver) in self.solvers.iter().enumerate() {
            let target = self.ring.homogeneous(&rest, w + 1);
            let alphas = solver.solve(&target)?;
            let mut layer = self.ring.one();
            for (&i, a) in solver.indices.iter().zip(&alphas) {
                if !a.is_zero() {
                    layer = self.ring.mul(&layer, &self.ring.pow(&self.series[i], a));
                }
                out[i] = a.clone();
            }
            rest = self.ring.mul(&self.ring.inverse(&layer), &rest);
        }
        if rest != self.ring.one() {
            return Err(Error::Verification("series is not a group element".into()));
        }
        Ok(out)
    }

    /// The consistent presentation of the free nilpotent group on this basis.
    pub fn presentation(&self) -> Result<NilpotentPresentation> {
        let m = self.basis.len();
        let mut b = PresentationBuilder::new(m);
        b.weights(&self.basis.weights)?;
        let inverses: Vec<Series> = self.series.iter().map(|s| self.ring.inverse(s)).collect();
        for j in 0..m {
            for i in 0..j {
                // a_j a_i = a_i a_j [a_j, a_i]
                let c = self.ring.commutator(&self.series[j], &self.series[i]);
                b.conj(j, i, self.coords(&c)?.0)?;
                // a_j^-1 a_i = a_i a_j^-1 [a_j^-1, a_i]
                let c = self.ring.commutator(&inverses[j], &self.series[i]);
                b.conj_inv(j, i, Some(self.coords(&c)?.0))?;
            }
        }
        b.build()
    }
}

impl WeightSolver {
    fn new(indices: Vec<usize>, columns: &[Vec<BigInt>]) -> Result<Self> {
        let d = columns.len();
        let nrows = columns.first().map_or(0, Vec::len);
        // Greedy row selection by incremental elimination over Q.
        let mut rows = Vec::with_capacity(d);
        let mut reduced: Vec<(usize, Vec<BigRational>)> = Vec::new();
        for r in 0..nrows {
            if rows.len() == d {
                break;
            }
            let mut v: Vec<BigRational> = columns.iter().map(|c| BigRational::from(c[r].clone())).collect();
            for (p, basis_row) in &reduced {
                if !v[*p].is_zero() {
                    let f = v[*p].clone() / basis_row[*p].clone();
                    for (x, y) in v.iter_mut().zip(basis_row) {
                        *x -= &f * y;
                    }
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                reduced.push((p, v));
                rows.push(r);
            }
        }
        if rows.len() != d {
            return Err(Error::Verification("basic commutators are linearly dependent".into()));
        }
        let square: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|&r| columns.iter().map(|c| BigRational::from(c[r].clone())).collect())
            .collect();
        Ok(WeightSolver {
            indices,
            rows,
            inverse: invert_matrix(square),
        })
    }

    fn solve(&self, target: &[BigInt]) -> Result<Vec<BigInt>> {
        let rhs: Vec<BigRational> = self.rows.iter().map(|&r| BigRational::from(target[r].clone())).collect();
        let mut out = Vec::with_capacity(self.indices.len());
        for row in &self.inverse {
            let x: BigRational = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            if !x.is_integer() {
                return Err(Error::Verification("non-integral Hall coordinate".into()));
            }
            out.push(x.to_integer());
        }
        Ok(out)
    }
}

fn invert_matrix(mut a: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &piv;
        }
        for x in inv[col].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (src_a, src_i) = (a[col].clone(), inv[col].clone());
                for (x, y) in a[r].iter_mut().zip(&src_a) {
                    *x -= &f * y;
                }
                for (x, y) in inv[r].iter_mut().zip(&src_i) {
                    *x -= &f * y;
                }
            }
        }
    }
    inv
}

/// The free nilpotent group of class `c` on `r` generators, presented on its
/// Hall basis (the first `r` generators are the free generators).
pub fn free_nilpotent(class: u32, rank: usize) -> Result<(NilpotentPresentation, HallBasis)> {
    let model = MagnusModel::new(class, rank)?;
    let p = model.presentation()?;
    Ok((p, model.basis))
}
