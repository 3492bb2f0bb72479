//! Exact arithmetic for linearized polynomials and linear sets on the
//! projective line PG(1, q^n).

pub mod error;
pub mod gf;
pub mod linalg;
pub mod linpoly;
pub mod linset;
pub mod invariants;
pub mod equiv;
pub mod autgrp;
pub mod families;
pub mod parse;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Elem, FieldCtx};
pub use linpoly::QPoly;
pub use linset::{LinearSet, ProjPoint, SemilinearMap};
