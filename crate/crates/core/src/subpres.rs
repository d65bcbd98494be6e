//! Nilpotent presentations of subgroups.
//!
//! The full-form rows `g_1, …, g_s` are a Mal'cev basis of the subgroup they
//! generate. Relative orders, power tails and conjugation tails come from
//! membership against the rows after the relevant index.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::collection::Group;
use crate::consistency::{check_consistency, ConsistencyReport};
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::presentation::{NilpotentPresentation, PresentationBuilder};
use crate::subgroup::{membership, reduce_to_full_form, FullForm};

#[derive(Debug, Clone)]
pub struct SubgroupPresentation {
    pub presentation: NilpotentPresentation,
    /// Generator `i` of the presentation is `basis.rows()[i]`.
    pub basis: FullForm,
}

impl SubgroupPresentation {
    /// Maps subgroup coordinates to ambient coordinates.
    pub fn embed(&self, group: &Group, h: &Coords) -> Coords {
        let parts: Vec<Coords> = self
            .basis
            .rows()
            .iter()
            .zip(h.iter())
            .map(|(g, e)| group.power(g, e))
            .collect();
        group.product(&parts)
    }
}

/// Subgroup coordinates of `y`, which must lie in `⟨rows[from..]⟩`.
fn local_coords(group: &Group, form: &FullForm, from: usize, y: &Coords) -> Result<Vec<BigInt>> {
    let suffix = form.suffix(from);
    let gamma = membership(group, &suffix, y)?
        .ok_or_else(|| Error::Verification("relation element outside the expected suffix".into()))?;
    let mut full = vec![BigInt::zero(); from];
    full.extend(gamma);
    Ok(full)
}

/// Presentation of `⟨gens⟩` on its full-form basis.
pub fn subgroup_presentation(group: &Group, gens: &[Coords]) -> Result<SubgroupPresentation> {
    let form = reduce_to_full_form(group, gens)?;
    presentation_of_full_form(group, form)
}

/// Presentation on the rows of an existing full form.
pub fn presentation_of_full_form(group: &Group, form: FullForm) -> Result<SubgroupPresentation> {
    let s = form.len();
    let rows = form.rows();
    let piv = form.pivots();
    let mut b = PresentationBuilder::new(s);
    let weights: Vec<u32> = piv.iter().map(|&p| group.presentation().weight(p)).collect();
    b.weights(&weights)?;
    for i in 0..s {
        if let Some(e) = group.torsion(piv[i]) {
            let rel = e / form.pivot_entry(i);
            if rel > BigInt::one() {
                let y = group.power(&rows[i], &rel);
                b.power(i, rel, local_coords(group, &form, i + 1, &y)?)?;
            }
        }
    }
    for j in 0..s {
        let inv_j = group.invert(&rows[j]);
        for i in 0..j {
            // a_j^{a_i} = a_j t  and  (a_j^-1)^{a_i} = a_j^-1 t'
            let t = group.commutator(&rows[j], &rows[i]);
            b.conj(j, i, local_coords(group, &form, j + 1, &t)?)?;
            let t2 = group.multiply(&rows[j], &group.conjugate(&inv_j, &rows[i]));
            b.conj_inv(j, i, Some(local_coords(group, &form, j + 1, &t2)?))?;
        }
    }
    let presentation = b.build()?;
    if let ConsistencyReport::Inconsistent { overlap, .. } = check_consistency(&presentation) {
        return Err(Error::Verification(format!("subgroup presentation fails overlap {overlap}")));
    }
    Ok(SubgroupPresentation { presentation, basis: form })
}
