//! Reduced L²-Burau maps of braids over computable coefficient groups.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! * [`braid`]: braid words, Markov moves and the induced strand permutation;
//! * [`freegroup`]: reduced free words, the Artin action in the `x`- and
//!   `g`-bases, and Fox derivatives;
//! * [`groupring`]: group-ring elements with Laurent-in-`t` coefficients and
//!   matrices of them, read as right-multiplication operators;
//! * [`epi`]: Markov-admissible families of epimorphisms out of free groups;
//! * [`fkdet`]: Fuglede–Kadison determinants over `ℤ`, `ℤᵈ` and free groups;
//! * [`torsion`]: Burau matrices, the function `F_Q`, Alexander polynomials
//!   and Markov-move experiments.
//!
//! # Conventions
//!
//! A braid word acts on the free group right-to-left: the automorphism of the
//! word `αβ` is `h_α ∘ h_β`. With this reading the crossed-homomorphism rule
//! for reduced Burau matrices is
//! `B_γ(αβ) = B_γ(α) ∘ B_{γ∘h_α}(β)`,
//! where `∘` is composition of right-multiplication operators.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod braid;
pub mod epi;
mod error;
pub mod fkdet;
pub mod freegroup;
pub mod groupring;
pub mod poly;
pub mod torsion;

pub use braid::{parse_braid, BraidWord, Permutation, Placement, Sign};
pub use epi::{EpiFamily, Epimorphism};
pub use error::{Error, Result};
pub use fkdet::{DetOptions, FkEstimate, Method};
pub use freegroup::{Basis, FreeWord};
pub use groupring::{CoefficientGroup, GroupElem, GroupRingElement, GroupRingMatrix};
pub use poly::{LaurentPoly, MultiLaurent, TPoly};

/// Exact rational numbers used for every symbolic coefficient.
pub type Rational = num_rational::BigRational;
