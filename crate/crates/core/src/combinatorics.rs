//! Young indices, conjugacy classes, irreducible dimensions and characters.

pub mod characters;
pub mod cycles;
pub mod dims;
pub mod kostka;
pub mod young;

pub use characters::{sn_character, CharacterCache, CharacterTable};
pub use cycles::{enumerate_cycle_types, CycleType};
pub use dims::{
    e_factor, ln_schur_dim_total, schur_dim_total, sn_dim, sn_dim_and_e, total_schur_dim, type_entropy_bounds,
    weyl_dim, zoi_dim_bound, DimensionRecord, SchurDimensions, TypeEntropyBounds,
};
pub use kostka::KostkaCache;
pub use young::{enumerate_weights, enumerate_young, YoungIndex};
