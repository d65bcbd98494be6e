//! Exact computation in finitely generated nilpotent groups given by
//! consistent nilpotent presentations.
//!
//! Elements are handled through their Mal'cev coordinates ([`Coords`]).
//! Words, straight-line programs and coordinate tuples are all accepted as
//! input; subgroups are represented by their unique full form.

pub mod collection;
pub mod compress;
pub mod conjugacy;
pub mod consistency;
pub mod coords;
pub mod error;
pub mod expr;
pub mod finite;
pub mod gcd;
pub mod groups;
pub mod hall;
pub mod morphism;
pub mod presentation;
pub mod slp;
pub mod subgroup;
pub mod subpres;
pub mod word;

pub use collection::Group;
pub use compress::{compress_presentation, CompressedPresentation};
pub use conjugacy::{centralizer, conjugacy, ConjugacySolver};
pub use consistency::{check_consistency, ConsistencyReport};
pub use coords::{parse_coords, Coords};
pub use error::{Error, Result};
pub use expr::Expr;
pub use finite::{from_finite_presentation, parse_finite_presentation, FinitePresentation, FiniteQuotient, WordWitness};
pub use gcd::gcd_combination;
pub use hall::{free_nilpotent, HallBasis};
pub use morphism::{direct_product, kernel_and_image, parse_homomorphism, preimage, Homomorphism, KernelImage};
pub use presentation::{parse_presentation, NilpotentPresentation, PresentationBuilder};
pub use slp::{coords_to_slp, parse_slp, power_program, slp_to_coords, Slp};
pub use subgroup::{express_in_input_generators, membership, reduce_to_full_form, reduce_tracked, FullForm};
pub use subpres::{subgroup_presentation, SubgroupPresentation};
pub use word::{parse_named_word, parse_word, GroupWord, Letter};
