//! Fixed-precision p-adic arithmetic, local expansions in residue discs, tiny
//! integrals, Coleman integrals between rational points, annihilating
//! differentials and Strassmann bounds.

mod integrate;
mod local;
mod number;
mod series;

pub use integrate::{annihilator_space, combine, in_annihilator_span, integrate_between};
pub use local::{
    disc_point_bound, local_expansion, nonvanishing_at, rational_disc_bound, rational_valuation, reduce_on_model, strassmann_bound, terms_for,
    tiny_integral, DiscKind, LocalChart, ResidueDisc,
};
pub use number::{vp_int, vp_u64, PadicNumber};
pub use series::{taylor_shift, Modulus, PadicSeries};
