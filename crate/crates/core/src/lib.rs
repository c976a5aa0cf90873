//! Difference Galois groups of linear difference equations of order at most three,
//! for the shift z ↦ z+h and the q-dilation z ↦ qz, with exact certificates.

pub mod classify;
pub mod cli;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod ore;
pub mod ratsolve;
pub mod riccati;
pub mod transcend;

#[cfg(test)]
mod testutil;
