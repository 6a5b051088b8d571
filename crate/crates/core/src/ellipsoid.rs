//! `Z_p`-symmetric ellipsoids `E(a_0, ..., a_n)`.
//!
//! The axis circles are the only closed Reeb orbits of a nonresonant ellipsoid,
//! and each one is invariant under the lens action. Axis `j` has action `a_j`
//! upstairs and index `mu(gamma_j^N) = n + 2 sum_i floor(N a_j / a_i)`. In the
//! quotient the axis circle closes after a `1/p` arc; that primitive orbit has
//! action `a_j / p` and class `l_j^{-1} mod p`.
//!
//! Axes are exact rationals. An irrational ellipsoid is only ever probed at
//! finitely many iterates, so resonance (`N a_j / a_i` an integer) is detected
//! per evaluation instead of being excluded globally.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{serialize_bigint, Rational};
use crate::lens::{inverse_mod, HomotopyClass, LensSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipsoidError {
    #[error("expected {expected} axes for n = {}, got {got}", expected - 1)]
    AxisCount { expected: usize, got: usize },
    #[error("axis a_{0} must be positive")]
    NonpositiveAxis(usize),
    #[error("axis index {j} out of range")]
    AxisOutOfRange { j: usize },
    #[error("resonance: N a_{j} / a_{i} is an integer at N = {iterate}")]
    ResonantAxes { i: usize, j: usize, iterate: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipsoidModel {
    space: LensSpace,
    axes: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    #[serde(rename = "j")]
    pub axis: usize,
    #[serde(rename = "N")]
    pub iterate: u64,
    /// Downstairs action `N a_j / p`.
    pub action: Rational,
    /// Index of the upstairs orbit `gamma_j^N`, the lift of the `p`-th power of this iterate.
    #[serde(serialize_with = "serialize_bigint")]
    pub mu: BigInt,
    /// Downstairs mean index `N Delta_j / p`.
    pub mean_index: Rational,
    pub is_simple_in_class: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub passed: bool,
    pub threshold: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub min_index: BigInt,
    pub argmin: (usize, u64),
    pub iterates_checked: u64,
}

impl EllipsoidModel {
    pub fn new(space: LensSpace, axes: Vec<Rational>) -> Result<Self, EllipsoidError> {
        let expected = space.n() + 1;
        if axes.len() != expected {
            return Err(EllipsoidError::AxisCount {
                expected,
                got: axes.len(),
            });
        }
        if let Some(i) = axes.iter().position(|a| !a.is_positive()) {
            return Err(EllipsoidError::NonpositiveAxis(i));
        }
        Ok(EllipsoidModel { space, axes })
    }

    pub fn space(&self) -> &LensSpace {
        &self.space
    }

    pub fn axes(&self) -> &[Rational] {
        &self.axes
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    fn check_axis(&self, j: usize) -> Result<(), EllipsoidError> {
        if j >= self.axes.len() {
            return Err(EllipsoidError::AxisOutOfRange { j });
        }
        Ok(())
    }

    /// Class of the primitive quotient orbit on axis `j`: `g` with `g l_j = 1 (mod p)`.
    pub fn orbit_class(&self, j: usize) -> Result<HomotopyClass, EllipsoidError> {
        self.check_axis(j)?;
        let p = self.space.p();
        if p == 1 {
            return Ok(HomotopyClass::reduced(0, 1));
        }
        let g = inverse_mod(self.space.residues()[j], p);
        Ok(HomotopyClass::reduced(g as i64, p))
    }

    /// `n + 2 sum_i floor(N a_j / a_i)`; the `i = j` term is exactly `N`.
    pub fn ellipsoid_cz(&self, j: usize, iterate: u64) -> Result<BigInt, EllipsoidError> {
        self.check_axis(j)?;
        let nn = Rational::from(iterate);
        let mut total = BigInt::from(iterate);
        for (i, a_i) in self.axes.iter().enumerate() {
            if i == j {
                continue;
            }
            let x = &nn * &self.axes[j] / a_i;
            if x.is_integer() {
                return Err(EllipsoidError::ResonantAxes { i, j, iterate });
            }
            total += x.floor();
        }
        Ok(BigInt::from(self.n()) + 2 * total)
    }

    /// Index under the symbolic perturbation `a_i -> a_i (1 + i eps)`, `eps -> 0+`.
    ///
    /// At a resonant iterate the perturbed ratio sits just above the integer when
    /// `i < j` and just below it when `i > j`. Fails only when two axes coincide,
    /// where the orbits come in families and no small perturbation of this kind
    /// is meaningful.
    pub fn ellipsoid_cz_perturbed(&self, j: usize, iterate: u64) -> Result<BigInt, EllipsoidError> {
        self.check_axis(j)?;
        let nn = Rational::from(iterate);
        let mut total = BigInt::from(iterate);
        for (i, a_i) in self.axes.iter().enumerate() {
            if i == j {
                continue;
            }
            if *a_i == self.axes[j] {
                return Err(EllipsoidError::ResonantAxes { i, j, iterate });
            }
            let x = &nn * &self.axes[j] / a_i;
            let mut f = x.floor();
            if x.is_integer() && i > j {
                f -= 1;
            }
            total += f;
        }
        Ok(BigInt::from(self.n()) + 2 * total)
    }

    /// `Delta_j = 2 a_j sum_i 1/a_i`.
    pub fn ellipsoid_mean_index(&self, j: usize) -> Result<Rational, EllipsoidError> {
        self.check_axis(j)?;
        let inv_sum: Rational = self.axes.iter().map(Rational::recip).sum();
        Ok(Rational::from(2) * &self.axes[j] * inv_sum)
    }

    /// Quotient iterates `gamma_bar_j^N` in `class` with action `N a_j / p <= action_cap`.
    /// The first such iterate on each axis is flagged simple in the class.
    /// Indices use the perturbed convention, so resonant iterates are reported too.
    pub fn symmetric_spectrum(
        &self,
        class: HomotopyClass,
        action_cap: &Rational,
    ) -> Result<Vec<SpectrumRow>, EllipsoidError> {
        let p = self.space.p();
        let mut rows = Vec::new();
        for j in 0..self.axes.len() {
            let g = self.orbit_class(j)?.value();
            let delta = self.ellipsoid_mean_index(j)?;
            let step = &self.axes[j] / Rational::from(p);
            let mut seen = false;
            let mut iterate = 1u64;
            loop {
                let action = Rational::from(iterate) * &step;
                if &action > action_cap {
                    break;
                }
                if (iterate as u128 * g as u128) % p as u128 == class.value() as u128 {
                    rows.push(SpectrumRow {
                        axis: j,
                        iterate,
                        action,
                        mu: self.ellipsoid_cz_perturbed(j, iterate)?,
                        mean_index: Rational::from(iterate) * &delta / Rational::from(p),
                        is_simple_in_class: !seen,
                    });
                    seen = true;
                }
                iterate += 1;
            }
        }
        Ok(rows)
    }

    /// `mu(gamma_j^N) >= n + 2` for every axis and `N <= n_max`.
    pub fn check_dynamical_convexity(&self, n_max: u64) -> Result<ConvexityReport, EllipsoidError> {
        let threshold = self.n() as u64 + 2;
        let mut best: Option<(BigInt, (usize, u64))> = None;
        for j in 0..self.axes.len() {
            for iterate in 1..=n_max {
                let mu = self.ellipsoid_cz_perturbed(j, iterate)?;
                if best.as_ref().is_none_or(|(m, _)| mu < *m) {
                    best = Some((mu, (j, iterate)));
                }
            }
        }
        let (min_index, argmin) = best.unwrap_or((BigInt::from(threshold), (0, 0)));
        Ok(ConvexityReport {
            passed: min_index >= BigInt::from(threshold),
            threshold,
            min_index,
            argmin,
            iterates_checked: n_max * self.axes.len() as u64,
        })
    }
}
