//! Bézout coefficients for many integers with small coefficients.
//!
//! The inputs sit at the leaves of a balanced binary tree. The bottom-up pass
//! records the gcd of every subtree; the top-down pass splits the multiple of
//! each node's gcd that its parent asks for between the two children,
//! choosing the left coefficient as the least absolute residue modulo
//! `d_right / d`. This keeps every coefficient within `max |a_i|`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

enum Node {
    Leaf(usize),
    Inner { gcd: BigInt, left: Box<Node>, right: Box<Node>, left_gcd: BigInt, right_gcd: BigInt },
}

fn build(a: &[BigInt], lo: usize, hi: usize) -> (Node, BigInt) {
    if hi - lo == 1 {
        return (Node::Leaf(lo), a[lo].abs());
    }
    let mid = lo + (hi - lo).div_ceil(2);
    let (left, dl) = build(a, lo, mid);
    let (right, dr) = build(a, mid, hi);
    let gcd = dl.gcd(&dr);
    (
        Node::Inner {
            gcd: gcd.clone(),
            left: Box::new(left),
            right: Box::new(right),
            left_gcd: dl,
            right_gcd: dr,
        },
        gcd,
    )
}

/// Least absolute residue of `x` modulo `n > 0`.
fn balanced_mod(x: &BigInt, n: &BigInt) -> BigInt {
    let r = x.mod_floor(n);
    if &r * 2 > *n {
        r - n
    } else {
        r
    }
}

/// Distributes `target` (a multiple of the node gcd) over the leaves.
fn descend(node: &Node, target: BigInt, a: &[BigInt], out: &mut [BigInt]) {
    match node {
        Node::Leaf(i) => {
            // Leaf gcd is |a_i|.
            out[*i] = if a[*i].is_zero() {
                BigInt::zero()
            } else {
                target / &a[*i]
            };
        }
        Node::Inner { gcd, left, right, left_gcd, right_gcd } => {
            if target.is_zero() || gcd.is_zero() {
                descend(left, BigInt::zero(), a, out);
                descend(right, BigInt::zero(), a, out);
                return;
            }
            if left_gcd.is_zero() {
                descend(left, BigInt::zero(), a, out);
                descend(right, target, a, out);
                return;
            }
            if right_gcd.is_zero() {
                descend(left, target, a, out);
                descend(right, BigInt::zero(), a, out);
                return;
            }
            // X * left_gcd + Y * right_gcd = target
            let ext = left_gcd.extended_gcd(right_gcd);
            let k = &target / gcd;
            let modulus = right_gcd / gcd;
            let x = balanced_mod(&(&ext.x * &k), &modulus);
            let y = (&target - &x * left_gcd) / right_gcd;
            descend(left, x * left_gcd, a, out);
            descend(right, y * right_gcd, a, out);
        }
    }
}

/// Returns `(d, x)` with `d = gcd(a) > 0`, `Σ x_i a_i = d` and
/// `|x_i| <= max |a_i|`.
pub fn gcd_combination(a: &[BigInt]) -> Result<(BigInt, Vec<BigInt>)> {
    if a.iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("gcd of an all-zero list".into()));
    }
    let (root, d) = build(a, 0, a.len());
    let mut x = vec![BigInt::zero(); a.len()];
    descend(&root, d.clone(), a, &mut x);
    debug_assert_eq!(x.iter().zip(a).map(|(x, a)| x * a).sum::<BigInt>(), d);
    Ok((d, x))
}

/// Whether some coefficient exceeds half the largest input magnitude (the
/// sharper bound achievable in principle; reported, never enforced).
pub fn exceeds_half_bound(a: &[BigInt], x: &[BigInt]) -> bool {
    let max = a.iter().map(Signed::abs).max().unwrap_or_default();
    x.iter().any(|x| x.abs() * 2 > max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn check(a: &[i64]) -> (BigInt, Vec<BigInt>) {
        let a = big(a);
        let (d, x) = gcd_combination(&a).unwrap();
        let max = a.iter().map(Signed::abs).max().unwrap();
        assert_eq!(x.iter().zip(&a).map(|(x, a)| x * a).sum::<BigInt>(), d);
        assert!(x.iter().all(|x| x.abs() <= max), "{a:?} -> {x:?}");
        (d, x)
    }

    #[test]
    fn small_cases() {
        assert_eq!(check(&[6, 10, 15]).0, 1.into());
        assert_eq!(check(&[0, 0, 7]), (7.into(), big(&[0, 0, 1])));
        assert_eq!(check(&[-4, 6]).0, 2.into());
        assert_eq!(check(&[-5]), (5.into(), big(&[-1])));
        assert_eq!(check(&[12, 18, 0, -30, 42]).0, 6.into());
    }

    #[test]
    fn all_zero_is_an_error() {
        assert!(gcd_combination(&big(&[0, 0])).is_err());
    }

    proptest! {
        #[test]
        fn coefficients_are_bounded(a in prop::collection::vec(-10_000i64..10_000, 1..12)) {
            prop_assume!(a.iter().any(|&x| x != 0));
            let (d, x) = check(&a);
            let expected = a.iter().fold(0i64, |g, &v| num_integer::gcd(g, v));
            prop_assert_eq!(d, BigInt::from(expected));
            prop_assert_eq!(x.len(), a.len());
        }
    }
}
