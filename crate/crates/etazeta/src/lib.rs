//! Poly-Bernoulli numbers with permutation and offset parameters, the
//! Arakawa-Kaneko type eta function at integers, and the multiple zeta
//! relations that follow from its duality.

pub mod etareduce;
pub mod hyperlog;
pub mod linalg;
pub mod mzv;
pub mod mzv_numeric;
pub mod polybernoulli;
pub mod quad;
pub mod series;
