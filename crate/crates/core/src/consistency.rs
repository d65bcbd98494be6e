//! Consistency of nilpotent presentations via overlap testing.
//!
//! Each overlap evaluates one short word in two different bracketings with
//! the collector. In a consistent presentation both agree; otherwise the
//! quotient of the two results is a nontrivial normal form that the
//! relations force to be the identity.

use num_bigint::BigInt;
use num_traits::One;

use crate::collection::Group;
use crate::coords::Coords;
use crate::presentation::NilpotentPresentation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyReport {
    Consistent,
    /// `witness` is a nontrivial normal form equal to the identity in the
    /// presented group; `overlap` names the failing test.
    Inconsistent { witness: Coords, overlap: String },
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyReport::Consistent)
    }
}

pub fn check_consistency(p: &NilpotentPresentation) -> ConsistencyReport {
    check_group(&Group::new(p.clone()))
}

/// Runs the overlap tests on an already constructed collector.
pub fn check_group(g: &Group) -> ConsistencyReport {
    let m = g.num_generators();
    let one = BigInt::one();
    let gen = |i: usize| g.generator(i);
    let inv_gen = |i: usize| g.generator_power(i, -BigInt::one());
    let mul = |a: &Coords, b: &Coords| g.multiply(a, b);

    let compare = |left: Coords, right: Coords, overlap: String| -> Option<ConsistencyReport> {
        if left == right {
            return None;
        }
        let mut witness = g.multiply(&g.invert(&left), &right);
        // Report the orientation whose leading exponent is positive.
        if witness.pivot().is_some_and(|p| witness[p] < BigInt::from(0)) {
            witness = g.invert(&witness);
        }
        Some(ConsistencyReport::Inconsistent { witness, overlap })
    };

    // Explicit inverse tails must agree with the collector.
    for j in 0..m {
        for i in 0..j {
            let Some(tail) = g.presentation().conj_inv_tail(j, i) else {
                return ConsistencyReport::Inconsistent {
                    witness: g.identity(),
                    overlap: format!("inverse relation (a{}, a{}) cannot be derived", j + 1, i + 1),
                };
            };
            let left = mul(&inv_gen(j), &gen(i));
            let mut right = gen(i);
            g.multiply_by_generator_power(&mut right, j, &-&one);
            let right = mul(&right, &g.normalize_torsion(&Coords(tail.to_vec())));
            if let Some(r) = compare(left, right, format!("a{}^-1 a{} against its relation", j + 1, i + 1)) {
                return r;
            }
        }
    }

    for k in 0..m {
        for j in 0..k {
            for i in 0..j {
                let left = mul(&mul(&gen(k), &gen(j)), &gen(i));
                let right = mul(&gen(k), &mul(&gen(j), &gen(i)));
                let name = format!("(a{} a{}) a{}", k + 1, j + 1, i + 1);
                if let Some(r) = compare(left, right, name) {
                    return r;
                }
            }
        }
    }

    for j in 0..m {
        let ej = g.torsion(j).cloned();
        for i in 0..j {
            if let Some(e) = &ej {
                let left = mul(&g.generator_power(j, e.clone()), &gen(i));
                let right = mul(&g.generator_power(j, e - 1), &mul(&gen(j), &gen(i)));
                let name = format!("(a{}^{}) a{}", j + 1, e, i + 1);
                if let Some(r) = compare(left, right, name) {
                    return r;
                }
            } else {
                let left = mul(&inv_gen(j), &mul(&gen(j), &gen(i)));
                let name = format!("a{}^-1 (a{} a{})", j + 1, j + 1, i + 1);
                if let Some(r) = compare(left, gen(i), name) {
                    return r;
                }
            }
            if let Some(e) = g.torsion(i) {
                let left = mul(&gen(j), &g.generator_power(i, e.clone()));
                let right = mul(&mul(&gen(j), &gen(i)), &g.generator_power(i, e - 1));
                let name = format!("a{} (a{}^{})", j + 1, i + 1, e);
                if let Some(r) = compare(left, right, name) {
                    return r;
                }
            } else {
                let left = mul(&mul(&gen(j), &inv_gen(i)), &gen(i));
                let name = format!("(a{} a{}^-1) a{}", j + 1, i + 1, i + 1);
                if let Some(r) = compare(left, gen(j), name) {
                    return r;
                }
                if ej.is_none() {
                    let left = mul(&mul(&inv_gen(j), &inv_gen(i)), &gen(i));
                    let name = format!("(a{}^-1 a{}^-1) a{}", j + 1, i + 1, i + 1);
                    if let Some(r) = compare(left, inv_gen(j), name) {
                        return r;
                    }
                }
            }
        }
    }

    for i in 0..m {
        if let Some(e) = g.torsion(i) {
            let pw = g.generator_power(i, e.clone());
            let left = mul(&pw, &gen(i));
            let right = mul(&gen(i), &pw);
            if let Some(r) = compare(left, right, format!("(a{0}^{1}) a{0}", i + 1, e)) {
                return r;
            }
        }
    }
    ConsistencyReport::Consistent
}
