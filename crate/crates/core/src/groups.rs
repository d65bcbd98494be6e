//! A few standard presentations.

use num_bigint::BigInt;

use crate::presentation::{NilpotentPresentation, PresentationBuilder};

fn tail(m: usize, entries: &[(usize, i64)]) -> Vec<BigInt> {
    let mut t = vec![BigInt::from(0); m];
    for &(k, v) in entries {
        t[k] = v.into();
    }
    t
}

/// The integral Heisenberg group `⟨a1, a2, a3 | a2 a1 = a1 a2 a3, a3 central⟩`,
/// isomorphic to the 3×3 unitriangular integer matrices.
pub fn heisenberg() -> NilpotentPresentation {
    let mut b = PresentationBuilder::new(3);
    b.weights(&[1, 1, 2]).unwrap();
    b.conj(1, 0, tail(3, &[(2, 1)])).unwrap();
    b.conj_inv(1, 0, Some(tail(3, &[(2, -1)]))).unwrap();
    b.build().unwrap()
}

/// The Heisenberg group modulo `p`: every generator gets exponent `p` with an
/// empty power tail. For a prime `p` this is the group of order `p³`.
pub fn heisenberg_mod(p: u64) -> NilpotentPresentation {
    let mut b = PresentationBuilder::new(3);
    b.weights(&[1, 1, 2]).unwrap();
    b.conj(1, 0, tail(3, &[(2, 1)])).unwrap();
    b.conj_inv(1, 0, Some(tail(3, &[(2, p as i64 - 1)]))).unwrap();
    for i in 0..3 {
        b.power(i, p.into(), tail(3, &[])).unwrap();
    }
    b.build().unwrap()
}

/// Unitriangular 4×4 integer matrices on the basis
/// `E12, E23, E34, E13, E24, E14` (class 3, six generators).
pub fn unitriangular4() -> NilpotentPresentation {
    let m = 6;
    let mut b = PresentationBuilder::new(m);
    b.weights(&[1, 1, 1, 2, 2, 3]).unwrap();
    b.conj(1, 0, tail(m, &[(3, -1)])).unwrap();
    b.conj(2, 1, tail(m, &[(4, -1)])).unwrap();
    b.conj(3, 2, tail(m, &[(5, 1)])).unwrap();
    b.conj(4, 0, tail(m, &[(5, -1)])).unwrap();
    for j in 0..m {
        for i in 0..j {
            b.conj_inv(j, i, None).unwrap();
        }
    }
    let p = b.build().unwrap();
    // Resolve inverse tails once so the returned value is fully explicit.
    crate::collection::Group::new(p).presentation().clone()
}
