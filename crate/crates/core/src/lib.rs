//! Certified special parabolic points of real plane polynomials, and Viro
//! patchworking of their counts.

pub mod interval;
pub mod parabolic;
pub mod poly;
pub mod solver;
pub mod patchwork;
pub mod construction;
pub mod plot;
