#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nilpotent::{groups, Coords, Group, GroupWord};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn c(v: &[i64]) -> Coords {
    Coords::from_i64s(v)
}

pub fn heis() -> Group {
    Group::new(groups::heisenberg())
}

pub fn ut4() -> Group {
    Group::new(groups::unitriangular4())
}

pub fn q125() -> Group {
    Group::new(groups::heisenberg_mod(5))
}

pub fn random_word(rng: &mut StdRng, gens: usize, len: usize) -> GroupWord {
    let mut w = GroupWord::identity();
    for _ in 0..len {
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        w.push(rng.gen_range(0..gens), BigInt::from(e));
    }
    w
}

pub fn random_coords(rng: &mut StdRng, m: usize, bound: i64) -> Coords {
    Coords((0..m).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
}

/// A uniformly random normalized element of a finite group with all
/// exponents `e`.
pub fn random_finite(rng: &mut StdRng, m: usize, e: i64) -> Coords {
    Coords((0..m).map(|_| BigInt::from(rng.gen_range(0..e))).collect())
}

/// Square integer matrices, used as a faithful model of the unitriangular
/// groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat(pub Vec<Vec<BigInt>>);

impl Mat {
    pub fn identity(n: usize) -> Mat {
        Mat((0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect())
    }

    /// `I + s E_{ij}` with 1-based indices.
    pub fn elementary(n: usize, i: usize, j: usize, s: i64) -> Mat {
        let mut m = Mat::identity(n);
        m.0[i - 1][j - 1] = BigInt::from(s);
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.0.len();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in i..n {
                if self.0[i][k].is_zero() {
                    continue;
                }
                for j in k..n {
                    out[i][j] += &self.0[i][k] * &other.0[k][j];
                }
            }
        }
        Mat(out)
    }

    pub fn reduce(&self, p: i64) -> Mat {
        let p = BigInt::from(p);
        Mat(self
            .0
            .iter()
            .map(|row| row.iter().map(|x| ((x % &p) + &p) % &p).collect())
            .collect())
    }

    /// `I + x E_{ij}`-style power of a unitriangular elementary matrix.
    pub fn elementary_power(n: usize, i: usize, j: usize, s: i64, e: &BigInt) -> Mat {
        let mut m = Mat::identity(n);
        m.0[i - 1][j - 1] = BigInt::from(s) * e;
        m
    }
}

/// Matrix images of the Mal'cev generators: `(n, [(i, j, sign)])`.
pub struct MatrixModel {
    pub n: usize,
    pub gens: Vec<(usize, usize, i64)>,
    pub modulus: Option<i64>,
}

impl MatrixModel {
    /// `a1 = I+E12, a2 = I+E23, a3 = I-E13`.
    pub fn heis() -> Self {
        MatrixModel {
            n: 3,
            gens: vec![(1, 2, 1), (2, 3, 1), (1, 3, -1)],
            modulus: None,
        }
    }

    pub fn q125() -> Self {
        MatrixModel {
            modulus: Some(5),
            ..Self::heis()
        }
    }

    /// `E12, E23, E34, E13, E24, E14`.
    pub fn ut4() -> Self {
        MatrixModel {
            n: 4,
            gens: vec![(1, 2, 1), (2, 3, 1), (3, 4, 1), (1, 3, 1), (2, 4, 1), (1, 4, 1)],
            modulus: None,
        }
    }

    fn fix(&self, m: Mat) -> Mat {
        match self.modulus {
            Some(p) => m.reduce(p),
            None => m,
        }
    }

    pub fn generator_power(&self, g: usize, e: &BigInt) -> Mat {
        let (i, j, s) = self.gens[g];
        self.fix(Mat::elementary_power(self.n, i, j, s, e))
    }

    pub fn word(&self, w: &GroupWord) -> Mat {
        let mut acc = Mat::identity(self.n);
        for l in w.letters() {
            acc = self.fix(acc.mul(&self.generator_power(l.generator, &l.exponent)));
        }
        acc
    }

    pub fn coords(&self, x: &Coords) -> Mat {
        let mut acc = Mat::identity(self.n);
        for (g, e) in x.iter().enumerate() {
            acc = self.fix(acc.mul(&self.generator_power(g, e)));
        }
        acc
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        self.fix(a.mul(b))
    }
}

/// All 125 elements of the quotient with their matrices mod 5.
pub fn q125_elements() -> Vec<(Coords, Mat)> {
    let model = MatrixModel::q125();
    let mut out = Vec::new();
    for x in 0..5 {
        for y in 0..5 {
            for z in 0..5 {
                let g = c(&[x, y, z]);
                let m = model.coords(&g);
                out.push((g, m));
            }
        }
    }
    out
}

/// Inverse of a unitriangular matrix mod p, by brute force over the group.
pub fn q125_inverse(elements: &[(Coords, Mat)], m: &Mat) -> Mat {
    let model = MatrixModel::q125();
    let id = Mat::identity(3);
    elements
        .iter()
        .map(|(_, x)| x)
        .find(|x| model.mul(m, x) == id)
        .expect("group element")
        .clone()
}

/// Order of the subgroup generated by the given matrices, by closure.
pub fn q125_subgroup_order(gens: &[Mat]) -> usize {
    let model = MatrixModel::q125();
    let mut seen = std::collections::HashSet::new();
    let id = Mat::identity(3);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = model.mul(&x, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
