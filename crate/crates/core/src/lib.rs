//! Exact computations for Reeb dynamics on lens spaces `L_p(l_0, ..., l_n)`:
//! Chen-Ruan cohomology of the filling, Conley-Zehnder indices from the toric
//! model and from ellipsoids, and finite certificates for the multiplicity
//! argument.

pub mod arith;
pub mod certify;
pub mod chen_ruan;
pub mod ellipsoid;
pub mod lens;
pub mod table;
pub mod toric;

pub use arith::{ArithError, IntVector, Rational};
pub use certify::{CertifyError, MatchingVerdict, OrbitBudget, Verdict};
pub use ellipsoid::{EllipsoidError, EllipsoidModel};
pub use lens::{HomotopyClass, LensError, LensSpace};
pub use table::GradedTable;
pub use toric::{ToricError, ToricModel};
