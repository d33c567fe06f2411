//! Exact arithmetic linking rational points on the Mordell curves
//! `y^2 = x^3 - m` to the 2-part of the class groups of the pure cubic
//! fields `K = Q(m^(1/3))`.
//!
//! The main family is `m = 8b^3 + 3`, for which the curve carries the
//! point `((2b^3+1)/b^2, (3b^3+1)/b^3)` and `K` carries the unit
//! `1 + 4b^2 w - 2b w^2`. Points `(r/t^2, s/t^3)` with even `t` give
//! elements `r - t^2 w` whose square roots generate quadratic unramified
//! extensions of `K`; [`hcf`] builds and certifies those extensions.
//!
//! Module map:
//!
//! * [`intarith`]: factorization, residue symbols, finite differences,
//!   Smith normal form.
//! * [`cubic`]: elements of `Q(w)`, `w^3 = m`, square roots, minimal
//!   polynomials of square roots.
//! * [`quad`]: `Q(sqrt(-m))`, binary quadratic forms, the point-to-form map.
//! * [`mordell`]: the group law on `y^2 = x^3 - m`, point search, root numbers.
//! * [`classgrp`]: prime ideals and class groups of `Z[w]`.
//! * [`hcf`]: unramified quadratic extensions and their certificates.
//! * [`scan`]: batch reports over ranges of `b`.

pub mod classgrp;
pub mod cubic;
mod error;
pub mod hcf;
pub mod intarith;
pub mod mordell;
pub mod poly;
pub mod quad;
pub mod scan;

pub use error::{Error, Result};
