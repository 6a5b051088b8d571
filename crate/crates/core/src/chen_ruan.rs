//! Chen-Ruan cohomology of the orbifold filling `W = C^{n+1}/Z_p`.
//!
//! The action fixes only the origin, so every nontrivial group element `k`
//! gives a twisted sector that is a single point. Its contribution is one copy
//! of `Q` shifted up by twice the age of `k`, where the age is the sum of the
//! fractional parts of the rotation numbers `k * l_i / p`. Dimensions are
//! bookkept over `Q`; the ring structure is not modeled.

use serde::Serialize;

use crate::arith::Rational;
use crate::lens::{HomotopyClass, LensSpace};
use crate::table::GradedTable;

/// Sector of the inertia orbifold indexed by the group element `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sector {
    pub k: HomotopyClass,
    /// Fractional rotation numbers `{k l_i / p}`, one per coordinate.
    pub rotations: Vec<Rational>,
    pub age: Rational,
}

pub fn sector(space: &LensSpace, k: HomotopyClass) -> Sector {
    let p = space.p();
    debug_assert!(k.value() < p);
    let rotations: Vec<Rational> = space
        .weights()
        .iter()
        .map(|&l| Rational::new(k.value() as i128 * l as i128, p).frac())
        .collect();
    let age = rotations.iter().sum();
    Sector { k, rotations, age }
}

/// `age(k) = sum_{i=0}^{n} {k l_i / p}`.
pub fn age(space: &LensSpace, k: HomotopyClass) -> Rational {
    sector(space, k).age
}

/// Degree of the unique nonzero group in class `k`: `2 age(k)`.
pub fn cr_degree(space: &LensSpace, k: HomotopyClass) -> Rational {
    Rational::from(2) * age(space, k)
}

pub fn cr_table(space: &LensSpace) -> GradedTable {
    let mut table = GradedTable::new();
    for k in space.classes() {
        table.add(k, cr_degree(space, k), 1);
    }
    table
}

pub fn cr_max_degree(space: &LensSpace) -> Rational {
    space
        .classes()
        .map(|k| cr_degree(space, k))
        .max()
        .expect("p >= 1 gives at least one class")
}

/// `2n + 2`: every CR group (hence positive symplectic cohomology) vanishes from here on.
pub fn vanishing_threshold(space: &LensSpace) -> Rational {
    Rational::from(2 * space.n() as u64 + 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub class: HomotopyClass,
    pub degree: Rational,
    pub dim: u64,
    pub min_orbits: u64,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceReport {
    pub space: LensSpace,
    pub max_degree: Rational,
    /// Degrees `>= vanishing_from` carry no Chen-Ruan (hence no SH_+) cohomology.
    pub vanishing_from: Rational,
    pub assumptions: Vec<String>,
    pub verdicts: Vec<ClassVerdict>,
}

pub const EXISTENCE_ASSUMPTIONS: [&str; 2] = [
    "SH^*(W) = 0 for W = C^{n+1}/Z_p with rational coefficients",
    "H^*_CR(W) is isomorphic to SH^*_+(W), respecting the splitting by Z_p",
];

/// Each class has a nonzero CR group, so the positive symplectic cohomology in
/// that class is nonzero and any invariant contact form has a closed Reeb orbit
/// in it.
pub fn existence_report(space: &LensSpace) -> ExistenceReport {
    let verdicts = space
        .classes()
        .map(|k| {
            let degree = cr_degree(space, k);
            let conclusion = if space.p() == 1 {
                format!(
                    "H_CR nonzero in degree {degree}: at least one closed Reeb orbit (every orbit is symmetric)"
                )
            } else {
                format!(
                    "H_CR,{k} nonzero in degree {degree}: at least one closed Reeb orbit in class {k} for every invariant contact form"
                )
            };
            ClassVerdict {
                class: k,
                degree,
                dim: 1,
                min_orbits: 1,
                conclusion,
            }
        })
        .collect();
    ExistenceReport {
        space: space.clone(),
        max_degree: cr_max_degree(space),
        vanishing_from: vanishing_threshold(space),
        assumptions: EXISTENCE_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        verdicts,
    }
}
