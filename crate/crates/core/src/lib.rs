//! Equipartition of two planar measures by a translated angle of a fan.
//!
//! Given a k-fan (k rays from a common point, splitting the plane into k
//! angles) and two probability measures, the solver looks for a translation
//! `t` and an index `j` such that the wedge `t + F_j` carries exactly half
//! of each measure. For fan families where such a wedge need not exist, the
//! [`certify`] module produces checkable certificates of non-existence.

pub mod geom;
pub mod measures;
pub mod halving;
pub mod roots;
pub mod solver;
pub mod certify;
pub mod cli;
