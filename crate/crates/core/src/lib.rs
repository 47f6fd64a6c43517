//! Desk-scale computations with marked groups: the Grigorchuk family `G_ω`
//! and its index-two subgroups `L_ω`, lamplighter groups and the extension
//! `L ⋊ ℤ₂`, Cayley balls and the ultrametric on marked groups, and circle
//! products certifying minimality of the lamplighter presentation.

pub mod circle_product;
pub mod error;
pub mod grigorchuk;
pub mod lamplighter;
pub mod marked_space;
pub mod words;

pub use error::{Error, Result};
