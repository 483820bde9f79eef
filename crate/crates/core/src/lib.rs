//! Synthesis of single generators for finite-dimensional semisimple complex
//! algebras equipped with an involutive anti-automorphism `S`: find `a`
//! such that `a` and `S(a)` generate the whole algebra, together with a
//! replayable certificate.

pub mod algebra;
pub mod linalg;
pub mod par;
pub mod certify;
pub mod normalize;
pub mod synth;
