//! Sumsets, product sets and polynomial images of linear recurrent value
//! sets modulo a prime, with the Newton polygon machinery used to certify
//! absolute irreducibility of the polynomials involved.

pub mod counting;
pub mod doubling;
pub mod ffield;
pub mod harness;
pub mod newton;
pub mod recurrence;
