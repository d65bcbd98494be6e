//! Full forms of subgroups and membership.
//!
//! A full form is the unique echelon matrix of coordinate rows generating a
//! subgroup: pivots strictly increase, pivot entries are positive (and divide
//! the relative order at torsion columns), entries above a pivot are reduced
//! modulo it, and the rows with pivot `>= i` generate the intersection of the
//! subgroup with `⟨a_i, …, a_m⟩`.
//!
//! Reduction works column by column (gcd row, clearing, torsion rows), then
//! certifies fullness by checking that the conjugates `h_j^{h_k^{±1}}` and the
//! torsion powers of every row lie in the span of the rows after it. Each
//! failed check adds the offending element and re-reduces; since the suffix
//! below a failing row has already been certified, membership there is exact
//! and every retry strictly enlarges a suffix span.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::collection::Group;
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::gcd::gcd_combination;

/// The canonical generating sequence of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullForm {
    rows: Vec<Coords>,
    pivots: Vec<usize>,
}

impl FullForm {
    pub fn trivial() -> Self {
        FullForm {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn from_rows(rows: Vec<Coords>) -> Self {
        let pivots = rows.iter().map(|r| r.pivot().expect("nonzero row")).collect();
        FullForm { rows, pivots }
    }

    pub fn rows(&self) -> &[Coords] {
        &self.rows
    }

    /// 0-based pivot columns.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The rows from index `from` on; itself a full form.
    pub fn suffix(&self, from: usize) -> FullForm {
        FullForm {
            rows: self.rows[from..].to_vec(),
            pivots: self.pivots[from..].to_vec(),
        }
    }

    pub fn pivot_entry(&self, i: usize) -> &BigInt {
        &self.rows[i][self.pivots[i]]
    }

    /// One tuple per line with its 1-based pivot column.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (row, p) in self.rows.iter().zip(&self.pivots) {
            let _ = writeln!(s, "{row}  pivot {}", p + 1);
        }
        s
    }

    /// Index of the subgroup in the group when both are finite-index
    /// comparable: the product over all columns of the relative index, or
    /// `None` if the subgroup has infinite index.
    pub fn index_in(&self, group: &Group) -> Option<BigInt> {
        let mut index = BigInt::one();
        let mut next = 0;
        for col in 0..group.num_generators() {
            if next < self.len() && self.pivots[next] == col {
                index *= self.pivot_entry(next);
                next += 1;
            } else {
                index *= group.torsion(col)?;
            }
        }
        Some(index)
    }

    /// Order of the subgroup, `None` if infinite.
    pub fn order(&self, group: &Group) -> Option<BigInt> {
        let mut order = BigInt::one();
        for i in 0..self.len() {
            let e = group.torsion(self.pivots[i])?;
            order *= e / self.pivot_entry(i);
        }
        Some(order)
    }

    /// Checks every defining condition, including fullness via the closure
    /// conditions on suffixes.
    pub fn verify(&self, group: &Group) -> Result<()> {
        let fail = |msg: String| Err(Error::Verification(msg));
        for (i, row) in self.rows.iter().enumerate() {
            group.check(row)?;
            if row.pivot() != Some(self.pivots[i]) {
                return fail(format!("row {} has the wrong pivot", i + 1));
            }
            if i > 0 && self.pivots[i] <= self.pivots[i - 1] {
                return fail("pivots are not increasing".into());
            }
            let alpha = self.pivot_entry(i);
            if !alpha.is_positive() {
                return fail(format!("pivot entry of row {} is not positive", i + 1));
            }
            if let Some(e) = group.torsion(self.pivots[i]) {
                if !e.is_multiple_of(alpha) {
                    return fail(format!("pivot entry of row {} does not divide {e}", i + 1));
                }
            }
            for k in 0..i {
                let above = &self.rows[k][self.pivots[i]];
                if above.is_negative() || above >= alpha {
                    return fail(format!("entry above pivot {} in row {} is not reduced", i + 1, k + 1));
                }
            }
        }
        if let Some(k) = closure_failures(group, &self.rows).first() {
            return fail(format!("closure fails below row {}", k.0 + 1));
        }
        Ok(())
    }
}

/// A full form whose rows carry expressions over the original generators.
#[derive(Debug, Clone)]
pub struct TrackedFullForm {
    pub form: FullForm,
    pub expressions: Vec<Expr>,
}

#[derive(Clone)]
struct Row {
    coords: Coords,
    expr: Option<Expr>,
}

struct Reducer<'a> {
    group: &'a Group,
    track: bool,
}

impl Reducer<'_> {
    fn mul(&self, a: &Row, b: &Row) -> Row {
        Row {
            coords: self.group.multiply(&a.coords, &b.coords),
            expr: match (&a.expr, &b.expr) {
                (Some(x), Some(y)) => Some(x.mul(y)),
                _ => None,
            },
        }
    }

    fn pow(&self, a: &Row, n: &BigInt) -> Row {
        Row {
            coords: self.group.power(&a.coords, n),
            expr: a.expr.as_ref().map(|x| x.pow(n)),
        }
    }

    fn conjugate(&self, a: &Row, u: &Row) -> Row {
        Row {
            coords: self.group.conjugate(&a.coords, &u.coords),
            expr: match (&a.expr, &u.expr) {
                (Some(x), Some(y)) => Some(x.conjugate(y)),
                _ => None,
            },
        }
    }

    fn identity(&self) -> Row {
        Row {
            coords: self.group.identity(),
            expr: self.track.then(Expr::identity),
        }
    }

    /// Steps 1 to 3 column by column, then reduction above the pivots.
    /// The result satisfies every condition except possibly fullness.
    fn echelonize(&self, mut pending: Vec<Row>) -> Vec<Row> {
        let m = self.group.num_generators();
        let mut out: Vec<Row> = Vec::new();
        pending.retain(|r| !r.coords.is_identity());
        for p in 0..m {
            if pending.is_empty() {
                break;
            }
            let (mut at_p, mut rest): (Vec<Row>, Vec<Row>) =
                pending.into_iter().partition(|r| !r.coords[p].is_zero());
            if at_p.is_empty() {
                pending = rest;
                continue;
            }
            let mut seen = std::collections::HashSet::new();
            at_p.retain(|r| seen.insert(r.coords.clone()));

            let entries: Vec<BigInt> = at_p.iter().map(|r| r.coords[p].clone()).collect();
            let (d, x) = gcd_combination(&entries).expect("nonzero column");
            let mut piv = if at_p.len() == 1 && x[0].is_one() {
                at_p[0].clone()
            } else {
                let mut acc = self.identity();
                for (r, xi) in at_p.iter().zip(&x) {
                    if !xi.is_zero() {
                        acc = self.mul(&acc, &self.pow(r, xi));
                    }
                }
                acc
            };
            debug_assert_eq!(piv.coords[p], d);
            for (r, a) in at_p.iter().zip(&entries) {
                let q = a / &d;
                let cleared = self.mul(r, &self.pow(&piv, &-q));
                if !cleared.coords.is_identity() {
                    rest.push(cleared);
                }
            }
            if let Some(e) = self.group.torsion(p) {
                let delta = d.gcd(e);
                if delta != d {
                    // piv^k has entry delta at p, and piv is a power of it
                    // modulo the suffix.
                    let modulus = e / &delta;
                    let k = (&d / &delta).extended_gcd(&modulus).x.mod_floor(&modulus);
                    let finer = self.pow(&piv, &k);
                    debug_assert_eq!(finer.coords[p], delta);
                    let left = self.mul(&piv, &self.pow(&finer, &-(&d / &delta)));
                    if !left.coords.is_identity() {
                        rest.push(left);
                    }
                    piv = finer;
                }
                let tor = self.pow(&piv, &(e / &delta));
                if !tor.coords.is_identity() {
                    rest.push(tor);
                }
            }
            out.push(piv);
            pending = rest;
        }
        debug_assert!(pending.is_empty());
        self.reduce_above(&mut out);
        out
    }

    /// Makes `0 <= row_k[π_i] < α_i` for all `k < i`, working upward so
    /// that rows used for reduction are already final.
    fn reduce_above(&self, rows: &mut [Row]) {
        let pivots: Vec<usize> = rows.iter().map(|r| r.coords.pivot().expect("nonzero")).collect();
        for k in (0..rows.len()).rev() {
            for i in k + 1..rows.len() {
                let alpha = &rows[i].coords[pivots[i]];
                let q = rows[k].coords[pivots[i]].div_floor(alpha);
                if !q.is_zero() {
                    rows[k] = self.mul(&rows[k], &self.pow(&rows[i], &-q));
                }
            }
        }
    }

    fn close(&self, rows: Vec<Row>) -> Vec<Row> {
        let mut form = self.echelonize(rows);
        loop {
            let coords: Vec<Coords> = form.iter().map(|r| r.coords.clone()).collect();
            let failures = closure_failures(self.group, &coords);
            if failures.is_empty() {
                return form;
            }
            let k = failures[0].0;
            let mut extra: Vec<Row> = Vec::new();
            for (kk, what) in failures.into_iter().take_while(|f| f.0 == k) {
                debug_assert_eq!(kk, k);
                extra.push(match what {
                    Witness::Conj(j, inverse) => {
                        let u = if inverse { self.pow(&form[k], &-BigInt::one()) } else { form[k].clone() };
                        self.conjugate(&form[j], &u)
                    }
                    Witness::Power(n) => self.pow(&form[k], &n),
                });
            }
            form.extend(extra);
            form = self.echelonize(form);
        }
    }

    fn run(&self, gens: Vec<Row>) -> Vec<Row> {
        // Ingest the first min(m, n) rows at once, then one at a time.
        let head = gens.len().min(self.group.num_generators()).max(1).min(gens.len());
        let mut iter = gens.into_iter();
        let mut form = self.close(iter.by_ref().take(head).collect());
        for g in iter {
            if self.group.num_generators() > 0 && decompose(self.group, &rows_coords(&form), &g.coords).is_some() {
                continue;
            }
            form.push(g);
            form = self.close(form);
        }
        form
    }
}

fn rows_coords(rows: &[Row]) -> Vec<Coords> {
    rows.iter().map(|r| r.coords.clone()).collect()
}

enum Witness {
    /// `h_j^{h_k}` or `h_j^{h_k^{-1}}`.
    Conj(usize, bool),
    /// `h_k^n`.
    Power(BigInt),
}

/// Closure checks from the bottom up; returns the failures at the lowest
/// failing row `k` (all tagged with `k`), or nothing if the rows are full.
fn closure_failures(group: &Group, rows: &[Coords]) -> Vec<(usize, Witness)> {
    for k in (0..rows.len()).rev() {
        let suffix = &rows[k + 1..];
        let mut failures = Vec::new();
        let p = rows[k].pivot().expect("nonzero");
        if let Some(e) = group.torsion(p) {
            let n = e / &rows[k][p];
            let y = group.power(&rows[k], &n);
            if decompose(group, suffix, &y).is_none() {
                failures.push((k, Witness::Power(n)));
            }
        }
        let inv = group.invert(&rows[k]);
        for j in k + 1..rows.len() {
            for (inverse, u) in [(false, &rows[k]), (true, &inv)] {
                let y = group.conjugate(&rows[j], u);
                if decompose(group, suffix, &y).is_none() {
                    failures.push((k, Witness::Conj(j, inverse)));
                }
            }
        }
        if !failures.is_empty() {
            return failures;
        }
    }
    Vec::new()
}

/// Sifts `h` through echelon rows: `h = g_1^{γ_1} ⋯ g_s^{γ_s}` or `None`.
fn decompose(group: &Group, rows: &[Coords], h: &Coords) -> Option<Vec<BigInt>> {
    let mut h = h.clone();
    let mut gamma = Vec::with_capacity(rows.len());
    let mut col = 0;
    for row in rows {
        let p = row.pivot().expect("nonzero");
        if (col..p).any(|c| !h[c].is_zero()) {
            return None;
        }
        let (q, r) = h[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            h = group.multiply(&group.power(row, &-&q), &h);
        }
        gamma.push(q);
        col = p + 1;
    }
    h.is_identity().then_some(gamma)
}

fn check_inputs(group: &Group, gens: &[Coords]) -> Result<()> {
    for g in gens {
        group.check(g)?;
    }
    Ok(())
}

/// The full form of `⟨gens⟩`.
pub fn reduce_to_full_form(group: &Group, gens: &[Coords]) -> Result<FullForm> {
    check_inputs(group, gens)?;
    let r = Reducer { group, track: false };
    let rows = gens
        .iter()
        .map(|g| Row {
            coords: g.clone(),
            expr: None,
        })
        .collect();
    Ok(FullForm::from_rows(rows_coords(&r.run(rows))))
}

/// The full form of `⟨gens⟩` with an expression for each row over the
/// inputs (input `i` is `gens[i]`).
pub fn reduce_tracked(group: &Group, gens: &[Coords]) -> Result<TrackedFullForm> {
    check_inputs(group, gens)?;
    let r = Reducer { group, track: true };
    let rows = gens
        .iter()
        .enumerate()
        .map(|(i, g)| Row {
            coords: g.clone(),
            expr: Some(Expr::input(i)),
        })
        .collect();
    let out = r.run(rows);
    let expressions = out.iter().map(|r| r.expr.clone().expect("tracked")).collect();
    Ok(TrackedFullForm {
        form: FullForm::from_rows(rows_coords(&out)),
        expressions,
    })
}

/// Decides `h ∈ ⟨F⟩`; on success returns `γ` with `h = g_1^{γ_1} ⋯ g_s^{γ_s}`.
pub fn membership(group: &Group, form: &FullForm, h: &Coords) -> Result<Option<Vec<BigInt>>> {
    group.check(h)?;
    Ok(decompose(group, &form.rows, h))
}

/// Writes `h` as an expression over the inputs, verified by evaluation.
pub fn express_in_input_generators(group: &Group, gens: &[Coords], h: &Coords) -> Result<Expr> {
    group.check(h)?;
    let tracked = reduce_tracked(group, gens)?;
    let gamma = decompose(group, &tracked.form.rows, h).ok_or(Error::NotMember)?;
    let mut expr = Expr::identity();
    for (e, g) in tracked.expressions.iter().zip(&gamma) {
        expr = expr.mul(&e.pow(g));
    }
    if &expr.evaluate(group, gens) != h {
        return Err(Error::Verification("input-generator expression does not evaluate to h".into()));
    }
    Ok(expr)
}
