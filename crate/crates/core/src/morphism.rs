//! Homomorphisms between presented nilpotent groups: kernels, images and
//! preimages through the graph subgroup of the direct product.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::collection::Group;
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::presentation::{NilpotentPresentation, PresentationBuilder};
use crate::subgroup::{express_in_input_generators, membership, reduce_to_full_form, FullForm};

/// `φ: K → H` given by `φ(g_i) = h_i` on `K = ⟨g_1, …, g_n⟩ ≤ G`.
/// Well-definedness is not checked.
#[derive(Debug, Clone, Copy)]
pub struct Homomorphism<'a> {
    pub source: &'a Group,
    pub target: &'a Group,
    pub domain: &'a [Coords],
    pub images: &'a [Coords],
}

impl<'a> Homomorphism<'a> {
    pub fn new(source: &'a Group, target: &'a Group, domain: &'a [Coords], images: &'a [Coords]) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                found: images.len(),
            });
        }
        for g in domain {
            source.check(g)?;
        }
        for h in images {
            target.check(h)?;
        }
        Ok(Homomorphism {
            source,
            target,
            domain,
            images,
        })
    }

    /// `φ(g)`, by writing `g` over the domain generators.
    pub fn apply(&self, g: &Coords) -> Result<Coords> {
        let expr = express_in_input_generators(self.source, self.domain, g)?;
        Ok(expr.evaluate(self.target, self.images))
    }
}

/// `H × G` with the `H` generators first. `H` keeps its weights and the
/// weights of `G` are shifted by the class of `H`, so both blocks sit in
/// one central series; cross relations are trivial.
#[derive(Debug, Clone)]
pub struct ProductGroup {
    pub group: Group,
    pub left_len: usize,
    pub right_len: usize,
}

impl ProductGroup {
    pub fn pair(&self, h: &Coords, g: &Coords) -> Coords {
        Coords(h.iter().chain(g.iter()).cloned().collect())
    }

    pub fn left(&self, x: &Coords) -> Coords {
        Coords(x.0[..self.left_len].to_vec())
    }

    pub fn right(&self, x: &Coords) -> Coords {
        Coords(x.0[self.left_len..].to_vec())
    }
}

pub fn direct_product(left: &Group, right: &Group) -> Result<ProductGroup> {
    let (h, g) = (left.presentation(), right.presentation());
    let (m1, m2) = (h.num_generators(), g.num_generators());
    let m = m1 + m2;
    let shift = h.class();
    let mut b = PresentationBuilder::new(m);
    let weights: Vec<u32> = h.weights().iter().copied().chain(g.weights().iter().map(|w| w + shift)).collect();
    b.weights(&weights)?;
    let place = |tail: &[BigInt], offset: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); m];
        for (k, x) in tail.iter().enumerate() {
            v[k + offset] = x.clone();
        }
        v
    };
    for (p, offset) in [(h, 0), (g, m1)] {
        let n = p.num_generators();
        for i in 0..n {
            if let Some(e) = p.torsion(i) {
                b.power(i + offset, e.clone(), place(p.power_tail(i), offset))?;
            }
            if let Some(name) = p.name(i) {
                b.name(i + offset, name)?;
            }
        }
        for j in 0..n {
            for i in 0..j {
                b.conj(j + offset, i + offset, place(p.conj_tail(j, i), offset))?;
                let inv = p.conj_inv_tail(j, i).map(|t| place(t, offset));
                b.conj_inv(j + offset, i + offset, inv)?;
            }
        }
    }
    let presentation: NilpotentPresentation = b.build()?;
    Ok(ProductGroup {
        group: Group::new(presentation),
        left_len: m1,
        right_len: m2,
    })
}

/// Kernel and image of a homomorphism, plus lifts `u_i ∈ K` of the image
/// rows (`φ(u_i) = image.rows()[i]`).
#[derive(Debug, Clone)]
pub struct KernelImage {
    pub kernel: FullForm,
    pub image: FullForm,
    pub lifts: Vec<Coords>,
}

/// Reduces the graph `⟨(φ(g_i), g_i)⟩ ≤ H × G`; rows with a nonzero
/// `H`-part give the image and its lifts, the remaining rows the kernel.
pub fn kernel_and_image(phi: &Homomorphism<'_>) -> Result<KernelImage> {
    let prod = direct_product(phi.target, phi.source)?;
    let rows: Vec<Coords> = phi.images.iter().zip(phi.domain).map(|(h, g)| prod.pair(h, g)).collect();
    let w = reduce_to_full_form(&prod.group, &rows)?;
    let r = w.pivots().iter().take_while(|&&p| p < prod.left_len).count();
    let image = FullForm::from_rows(w.rows()[..r].iter().map(|x| prod.left(x)).collect());
    let lifts = w.rows()[..r].iter().map(|x| prod.right(x)).collect();
    let kernel = FullForm::from_rows(w.rows()[r..].iter().map(|x| prod.right(x)).collect());
    Ok(KernelImage { kernel, image, lifts })
}

/// Some `g ∈ K` with `φ(g) = h`, re-verified through the domain generators.
pub fn preimage(phi: &Homomorphism<'_>, ki: &KernelImage, h: &Coords) -> Result<Coords> {
    let beta = membership(phi.target, &ki.image, h)?.ok_or(Error::NotInImage)?;
    let parts: Vec<Coords> = ki.lifts.iter().zip(&beta).map(|(u, b)| phi.source.power(u, b)).collect();
    let g = phi.source.product(&parts);
    if &phi.apply(&g)? != h {
        return Err(Error::Verification("preimage does not map to h".into()));
    }
    Ok(g)
}

/// A parsed homomorphism file: two presentation paths and word pairs, kept
/// as text until the groups are loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismSpec {
    pub source: String,
    pub target: String,
    pub maps: Vec<(String, String)>,
}

/// ```text
/// source heis.ngp
/// target z.ngp
/// map a1 -> a1
/// map a2 -> a1
/// ```
pub fn parse_homomorphism(text: &str) -> Result<HomomorphismSpec> {
    let (mut source, mut target) = (None, None);
    let mut maps = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "source" | "target" => {
                if rest.is_empty() {
                    return Err(Error::syntax(n + 1, col, format!("`{kw}` needs a file name")));
                }
                let slot = if kw == "source" { &mut source } else { &mut target };
                if slot.replace(rest.to_string()).is_some() {
                    return Err(Error::syntax(n + 1, col, format!("duplicate `{kw}`")));
                }
            }
            "map" => {
                let (g, h) = rest
                    .split_once("->")
                    .ok_or_else(|| Error::syntax(n + 1, col, "expected `map <word> -> <word>`"))?;
                maps.push((g.trim().to_string(), h.trim().to_string()));
            }
            other => return Err(Error::syntax(n + 1, col, format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| Error::InvalidArgument(format!("homomorphism file has no `{what}` line"));
    Ok(HomomorphismSpec {
        source: source.ok_or_else(|| missing("source"))?,
        target: target.ok_or_else(|| missing("target"))?,
        maps,
    })
}
