//! Centralizers and conjugacy by induction on the class.
//!
//! The generators of top weight span a central abelian subgroup `A`. Working
//! in `G / A` first, an element `u` centralizing `g` modulo `A` gives
//! `[g, u] ∈ A`, and `u ↦ [g, u]` is a homomorphism on the preimage `J` of
//! that centralizer. Its kernel is `C(g)`; solving `[g', w] = g'^-1 h` in its
//! image settles conjugacy.

use num_traits::Zero;

use crate::collection::Group;
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::morphism::{kernel_and_image, preimage, Homomorphism};
use crate::subgroup::{membership, reduce_to_full_form, FullForm};

struct Level {
    group: Group,
    /// First generator of the top-weight block.
    top: usize,
    /// The top block as a group of its own.
    top_group: Group,
}

/// The quotients `G, G/Γ_c, G/Γ_{c-1}, …` down to an abelian group,
/// computed once and reused for every query.
pub struct ConjugacySolver {
    levels: Vec<Level>,
}

impl ConjugacySolver {
    pub fn new(group: &Group) -> Self {
        let mut levels = Vec::new();
        let mut current = group.clone();
        loop {
            let p = current.presentation();
            let m = p.num_generators();
            let c = p.class();
            let top = (0..m).find(|&i| p.weight(i) == c).unwrap_or(0);
            let top_group = Group::new(p.suffix(top));
            let next = (top > 0).then(|| Group::new(p.truncate(top)));
            levels.push(Level {
                group: current,
                top,
                top_group,
            });
            match next {
                Some(n) => current = n,
                None => break,
            }
        }
        ConjugacySolver { levels }
    }

    pub fn group(&self) -> &Group {
        &self.levels[0].group
    }

    /// Full form of the centralizer of `g`; every row is checked to commute
    /// with `g`.
    pub fn centralizer(&self, g: &Coords) -> Result<FullForm> {
        self.group().check(g)?;
        let c = self.centralizer_at(0, g)?;
        for x in c.rows() {
            if !self.group().commutator(g, x).is_identity() {
                return Err(Error::Verification("centralizer row does not commute with g".into()));
            }
        }
        Ok(c)
    }

    fn whole(&self, level: usize) -> Result<FullForm> {
        let grp = &self.levels[level].group;
        let gens: Vec<Coords> = (0..grp.num_generators()).map(|i| grp.generator(i)).collect();
        reduce_to_full_form(grp, &gens)
    }

    /// Generators of the preimage of `C_{G/A}(ḡ)`: lifted rows of the
    /// quotient centralizer and the top block.
    fn lifted_centralizer(&self, level: usize, g: &Coords) -> Result<Vec<Coords>> {
        let lv = &self.levels[level];
        let m = lv.group.num_generators();
        let quotient = self.centralizer_at(level + 1, &truncate(g, lv.top))?;
        let mut gens: Vec<Coords> = quotient.rows().iter().map(|k| pad(k, m)).collect();
        gens.extend((lv.top..m).map(|i| lv.group.generator(i)));
        Ok(gens)
    }

    fn commutator_map(&self, level: usize, g: &Coords, domain: &[Coords]) -> Vec<Coords> {
        let lv = &self.levels[level];
        domain
            .iter()
            .map(|u| {
                let c = lv.group.commutator(g, u);
                debug_assert!(c.iter().take(lv.top).all(Zero::is_zero));
                Coords(c.0[lv.top..].to_vec())
            })
            .collect()
    }

    fn centralizer_at(&self, level: usize, g: &Coords) -> Result<FullForm> {
        let lv = &self.levels[level];
        if lv.top == 0 {
            return self.whole(level);
        }
        let domain = self.lifted_centralizer(level, g)?;
        let images = self.commutator_map(level, g, &domain);
        let phi = Homomorphism::new(&lv.group, &lv.top_group, &domain, &images)?;
        Ok(kernel_and_image(&phi)?.kernel)
    }

    /// Some `u` with `u^-1 g u = h`, or `None` if `g` and `h` are not
    /// conjugate. A returned `u` has been verified.
    pub fn conjugate(&self, g: &Coords, h: &Coords) -> Result<Option<Coords>> {
        self.group().check(g)?;
        self.group().check(h)?;
        let u = self.conjugate_at(0, g, h)?;
        if let Some(u) = &u {
            if &self.group().conjugate(g, u) != h {
                return Err(Error::Verification("conjugator check u^-1 g u = h failed".into()));
            }
        }
        Ok(u)
    }

    fn conjugate_at(&self, level: usize, g: &Coords, h: &Coords) -> Result<Option<Coords>> {
        let lv = &self.levels[level];
        let grp = &lv.group;
        if lv.top == 0 {
            return Ok((g == h).then(|| grp.identity()));
        }
        let m = grp.num_generators();
        let Some(v) = self.conjugate_at(level + 1, &truncate(g, lv.top), &truncate(h, lv.top))? else {
            return Ok(None);
        };
        let v = pad(&v, m);
        let gv = grp.conjugate(g, &v);
        // gv ≡ h modulo A; w must centralize h modulo A and satisfy [gv, w] = gv^-1 h.
        let target = grp.multiply(&grp.invert(&gv), h);
        if !target.iter().take(lv.top).all(Zero::is_zero) {
            return Err(Error::Verification("lifted conjugator is wrong modulo the top block".into()));
        }
        let target = Coords(target.0[lv.top..].to_vec());
        let domain = self.lifted_centralizer(level, h)?;
        let images = self.commutator_map(level, &gv, &domain);
        let phi = Homomorphism::new(grp, &lv.top_group, &domain, &images)?;
        let ki = kernel_and_image(&phi)?;
        if membership(&lv.top_group, &ki.image, &target)?.is_none() {
            return Ok(None);
        }
        let w = preimage(&phi, &ki, &target)?;
        Ok(Some(grp.multiply(&v, &w)))
    }
}

fn truncate(g: &Coords, k: usize) -> Coords {
    Coords(g.0[..k].to_vec())
}

fn pad(g: &Coords, m: usize) -> Coords {
    let mut v = g.0.clone();
    v.resize(m, num_bigint::BigInt::default());
    Coords(v)
}

pub fn centralizer(group: &Group, g: &Coords) -> Result<FullForm> {
    ConjugacySolver::new(group).centralizer(g)
}

/// `u` with `u^-1 g u = h`, or `None`.
pub fn conjugacy(group: &Group, g: &Coords, h: &Coords) -> Result<Option<Coords>> {
    ConjugacySolver::new(group).conjugate(g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    fn c(v: &[i64]) -> Coords {
        Coords::from_i64s(v)
    }

    #[test]
    fn heis_centralizers() {
        let g = Group::new(groups::heisenberg());
        assert_eq!(centralizer(&g, &c(&[1, 0, 0])).unwrap().rows(), &[c(&[1, 0, 0]), c(&[0, 0, 1])]);
        assert_eq!(centralizer(&g, &c(&[0, 0, 0])).unwrap().len(), 3);
        assert_eq!(centralizer(&g, &c(&[0, 0, 5])).unwrap().len(), 3);
        let f = centralizer(&g, &c(&[2, 4, 1])).unwrap();
        assert_eq!(f.rows(), &[c(&[1, 2, 0]), c(&[0, 0, 1])]);
    }

    #[test]
    fn heis_conjugacy() {
        let g = Group::new(groups::heisenberg());
        assert_eq!(conjugacy(&g, &c(&[0, 1, 0]), &c(&[0, 1, 1])).unwrap(), Some(c(&[1, 0, 0])));
        assert_eq!(conjugacy(&g, &c(&[0, 1, 0]), &c(&[0, 2, 0])).unwrap(), None);
        assert_eq!(conjugacy(&g, &c(&[0, 0, 1]), &c(&[0, 0, 2])).unwrap(), None);
        // (2,4,*) is conjugate to (2,4,z) iff z ≡ * mod gcd(2,4).
        assert!(conjugacy(&g, &c(&[2, 4, 0]), &c(&[2, 4, 6])).unwrap().is_some());
        assert!(conjugacy(&g, &c(&[2, 4, 0]), &c(&[2, 4, 3])).unwrap().is_none());
    }

    #[test]
    fn unitriangular() {
        let g = Group::new(groups::unitriangular4());
        let x = c(&[1, 2, -1, 0, 3, 1]);
        let u = c(&[2, -1, 1, 1, 0, 2]);
        let y = g.conjugate(&x, &u);
        let found = conjugacy(&g, &x, &y).unwrap().unwrap();
        assert_eq!(g.conjugate(&x, &found), y);
        let cx = centralizer(&g, &x).unwrap();
        cx.verify(&g).unwrap();
        assert!(membership(&g, &cx, &x).unwrap().is_some());
    }
}
