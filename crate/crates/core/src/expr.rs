//! Shared expression trees over a list of input elements.
//!
//! Row operations during reduction build products and powers of earlier rows;
//! keeping them as a DAG avoids the repeated copying a flat word would need.
//! The tree is evaluated in a group or flattened to a word on demand.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::collection::Group;
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::word::GroupWord;

#[derive(Debug)]
enum Node {
    Identity,
    Input(usize),
    Mul(Expr, Expr),
    Pow(Expr, BigInt),
}

/// A cheaply clonable expression in the inputs `h_1, …, h_n`.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_word(64) {
            Ok(w) => write!(f, "Expr({w})"),
            Err(_) => write!(f, "Expr(<large>)"),
        }
    }
}

impl Expr {
    pub fn identity() -> Self {
        Expr(Arc::new(Node::Identity))
    }

    pub fn input(i: usize) -> Self {
        Expr(Arc::new(Node::Input(i)))
    }

    pub fn is_identity(&self) -> bool {
        matches!(*self.0, Node::Identity)
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        Expr(Arc::new(Node::Mul(self.clone(), other.clone())))
    }

    pub fn pow(&self, n: &BigInt) -> Expr {
        if n.is_zero() || self.is_identity() {
            return Expr::identity();
        }
        if n.is_one() {
            return self.clone();
        }
        if let Node::Pow(base, k) = &*self.0 {
            return Expr(Arc::new(Node::Pow(base.clone(), k * n)));
        }
        Expr(Arc::new(Node::Pow(self.clone(), n.clone())))
    }

    pub fn inverse(&self) -> Expr {
        self.pow(&-BigInt::one())
    }

    /// `u^{-1} self u`.
    pub fn conjugate(&self, u: &Expr) -> Expr {
        u.inverse().mul(self).mul(u)
    }

    fn key(&self) -> *const Node {
        Arc::as_ptr(&self.0)
    }

    /// Value of the expression with `h_i ↦ inputs[i]`.
    pub fn evaluate(&self, group: &Group, inputs: &[Coords]) -> Coords {
        let mut memo = HashMap::new();
        self.eval_memo(group, inputs, &mut memo)
    }

    fn eval_memo(&self, group: &Group, inputs: &[Coords], memo: &mut HashMap<*const Node, Coords>) -> Coords {
        if let Some(c) = memo.get(&self.key()) {
            return c.clone();
        }
        let value = match &*self.0 {
            Node::Identity => group.identity(),
            Node::Input(i) => inputs[*i].clone(),
            Node::Mul(a, b) => {
                let x = a.eval_memo(group, inputs, memo);
                let y = b.eval_memo(group, inputs, memo);
                group.multiply(&x, &y)
            }
            Node::Pow(a, n) => {
                let x = a.eval_memo(group, inputs, memo);
                group.power(&x, n)
            }
        };
        memo.insert(self.key(), value.clone());
        value
    }

    /// Flattens to a word over the inputs (generator `i` stands for `h_{i+1}`),
    /// failing once more than `limit` syllables would be produced.
    pub fn to_word(&self, limit: usize) -> Result<GroupWord> {
        let mut memo = HashMap::new();
        self.flatten(limit, &mut memo)
    }

    fn flatten(&self, limit: usize, memo: &mut HashMap<*const Node, GroupWord>) -> Result<GroupWord> {
        if let Some(w) = memo.get(&self.key()) {
            return Ok(w.clone());
        }
        let too_big = || Error::ResourceLimit(format!("expression has more than {limit} syllables"));
        let w = match &*self.0 {
            Node::Identity => GroupWord::identity(),
            Node::Input(i) => GroupWord::generator(*i),
            Node::Mul(a, b) => {
                let mut w = a.flatten(limit, memo)?;
                w.append(&b.flatten(limit, memo)?);
                w
            }
            Node::Pow(a, n) => {
                let base = a.flatten(limit, memo)?;
                match base.letters() {
                    [] => GroupWord::identity(),
                    [l] => GroupWord::power_of(l.generator, &l.exponent * n),
                    letters => {
                        let reps = n.abs().to_usize().filter(|r| r.saturating_mul(letters.len()) <= limit);
                        let reps = reps.ok_or_else(too_big)?;
                        base.pow(reps as u64, n.is_negative())
                    }
                }
            }
        };
        if w.letters().len() > limit {
            return Err(too_big());
        }
        memo.insert(self.key(), w.clone());
        Ok(w)
    }
}
