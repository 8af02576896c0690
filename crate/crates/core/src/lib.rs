//! Presented Chow rings of moduli spaces of iterated point blowups of a
//! rational surface, with Gröbner-basis computation inside them and a
//! brute-force point-count cross-check.

pub mod poly;
pub mod groebner;
pub mod surface;
pub mod presentation;
pub mod pointcount;
pub mod cli;
