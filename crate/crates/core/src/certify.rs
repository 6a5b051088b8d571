//! Finite certificates for the multiplicity argument.
//!
//! A dynamically convex form with finitely many simple orbits in class `a`
//! must carry an injective assignment of orbits to the degrees `k_0 + 2k`,
//! each orbit within `2n` of its degree. That sequence has density `1/2`; an
//! orbit with mean index `Delta` supplies iterates in its class with density
//! `1/(p Delta)`. Comparing the two gives `p/2 <= sum 1/Delta_j`, and a single
//! orbit with `Delta > 2/p` violates it.
//!
//! Verdicts are three-valued: a finite check can refute a budget but never
//! confirm an infinite statement.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Rational;
use crate::ellipsoid::{EllipsoidError, EllipsoidModel};
use crate::lens::HomotopyClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("mean index of {label} must be positive, got {value}")]
    NonpositiveMeanIndex { label: String, value: Rational },
    #[error("no orbit in the budget has an iterate in class {0}")]
    EmptyBudget(u64),
    #[error("class {class} is out of range for p = {p}")]
    ClassOutOfRange { class: u64, p: u64 },
    #[error("p must be at least 1")]
    ZeroOrder,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error(transparent)]
    Ellipsoid(#[from] EllipsoidError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetOrbit {
    pub label: String,
    pub class: u64,
    pub mean_index: Rational,
}

/// Hypothesized complete list of simple closed orbits relevant to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBudget")]
pub struct OrbitBudget {
    pub p: u64,
    #[serde(rename = "class")]
    pub target: u64,
    pub orbits: Vec<BudgetOrbit>,
}

#[derive(Deserialize)]
struct RawBudget {
    p: u64,
    class: u64,
    orbits: Vec<BudgetOrbit>,
}

impl TryFrom<RawBudget> for OrbitBudget {
    type Error = CertifyError;
    fn try_from(raw: RawBudget) -> Result<Self, Self::Error> {
        OrbitBudget::new(raw.p, raw.class, raw.orbits)
    }
}

/// Number of residues `N mod p` with `N g = a (mod p)`.
fn class_multiplicity(g: u64, a: u64, p: u64) -> u64 {
    (0..p).filter(|&nn| (nn as u128 * g as u128) % p as u128 == a as u128).count() as u64
}

impl OrbitBudget {
    pub fn new(p: u64, target: u64, orbits: Vec<BudgetOrbit>) -> Result<Self, CertifyError> {
        if p == 0 {
            return Err(CertifyError::ZeroOrder);
        }
        for c in std::iter::once(target).chain(orbits.iter().map(|o| o.class)) {
            if c >= p {
                return Err(CertifyError::ClassOutOfRange { class: c, p });
            }
        }
        if let Some(o) = orbits.iter().find(|o| !o.mean_index.is_positive()) {
            return Err(CertifyError::NonpositiveMeanIndex {
                label: o.label.clone(),
                value: o.mean_index.clone(),
            });
        }
        let budget = OrbitBudget { p, target, orbits };
        if budget.supplying().next().is_none() {
            return Err(CertifyError::EmptyBudget(target));
        }
        Ok(budget)
    }

    /// Budget formed by the primitive quotient orbits of an ellipsoid.
    ///
    /// Axis `j` enters with its own class `l_j^{-1}` and mean index `Delta_j / p`;
    /// its iterates reach `class` once per period `p`.
    pub fn from_ellipsoid(model: &EllipsoidModel, class: HomotopyClass) -> Result<Self, CertifyError> {
        let p = model.space().p();
        let orbits = (0..model.axes().len())
            .map(|j| {
                Ok(BudgetOrbit {
                    label: format!("axis {j}"),
                    class: model.orbit_class(j)?.value(),
                    mean_index: model.ellipsoid_mean_index(j)? / Rational::from(p),
                })
            })
            .collect::<Result<Vec<_>, CertifyError>>()?;
        OrbitBudget::new(p, class.value(), orbits)
    }

    /// Orbits with at least one iterate in the target class, with the number of
    /// residues mod `p` of such iterates.
    pub fn supplying(&self) -> impl Iterator<Item = (&BudgetOrbit, u64)> {
        self.orbits
            .iter()
            .map(|o| (o, class_multiplicity(o.class, self.target, self.p)))
            .filter(|&(_, s)| s > 0)
    }

    /// Classes of the iterate `N` of `orbit`.
    fn iterate_in_target(&self, orbit: &BudgetOrbit, iterate: u64) -> bool {
        (iterate as u128 * orbit.class as u128) % self.p as u128 == self.target as u128
    }
}

/// The degrees `k_0 + 2k`, `k >= 0`, each carried by an orbit within `2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CarrierSequence {
    pub k0: Rational,
    pub n: usize,
}

impl CarrierSequence {
    pub fn new(k0: Rational, n: usize) -> Self {
        CarrierSequence { k0, n }
    }

    pub fn window(&self) -> u64 {
        2 * self.n as u64
    }

    pub fn degree(&self, k: u64) -> Rational {
        &self.k0 + Rational::from(2 * k)
    }

    /// `#{i >= 0 : k_0 + 2i <= j}`.
    pub fn count_up_to(&self, j: &Rational) -> u64 {
        if j < &self.k0 {
            return 0;
        }
        let steps = ((j - &self.k0) / Rational::from(2)).floor();
        u64::try_from(steps).expect("non-negative") + 1
    }
}

/// Exact density of the carrier sequence.
pub fn carrier_density() -> Rational {
    Rational::new(1, 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityEstimate {
    pub horizon: u64,
    pub count: u64,
    pub estimate: Rational,
    pub limit: Rational,
    /// Present when the truncation error bound `(|k_0| + 2)/j` exceeds 1%.
    pub warning: Option<String>,
}

/// `#{i : x(i) <= j} / j` for the carrier sequence.
pub fn carrier_density_estimate(seq: &CarrierSequence, horizon: u64) -> Result<DensityEstimate, CertifyError> {
    if horizon == 0 {
        return Err(CertifyError::ZeroHorizon);
    }
    let j = Rational::from(horizon);
    let count = seq.count_up_to(&j);
    let estimate = Rational::from(count) / &j;
    let error_bound = (seq.k0.abs() + Rational::from(2)) / &j;
    let warning = (error_bound > Rational::new(1, 100)).then(|| {
        format!(
            "horizon {horizon} is short: truncation error may reach {:.4}",
            error_bound.to_f64()
        )
    });
    Ok(DensityEstimate {
        horizon,
        count,
        estimate,
        limit: carrier_density(),
        warning,
    })
}

/// Density `1/(p Delta)` of the class-preserving iterates of an orbit.
pub fn orbit_density(p: u64, delta: &Rational) -> Result<Rational, CertifyError> {
    if !delta.is_positive() {
        return Err(CertifyError::NonpositiveMeanIndex {
            label: "orbit".into(),
            value: delta.clone(),
        });
    }
    Ok((Rational::from(p) * delta).recip())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Consistent,
    Contradiction,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    /// `p / 2`
    pub lhs: Rational,
    /// `sum_j s_j / Delta_j`, `s_j` the number of residues of iterates landing in the class.
    pub rhs: Rational,
    pub carrier_density: Rational,
    pub supply_density: Rational,
    pub equality: bool,
    pub verdict: Verdict,
}

/// `p/2 <= sum 1/Delta_j` over the orbits whose iterates reach the target class.
pub fn check_final_inequality(budget: &OrbitBudget) -> InequalityReport {
    let p = Rational::from(budget.p);
    let lhs = &p / Rational::from(2);
    let rhs: Rational = budget
        .supplying()
        .map(|(o, s)| Rational::from(s) / &o.mean_index)
        .sum();
    let supply_density = &rhs / &p;
    let verdict = if lhs <= rhs {
        Verdict::Consistent
    } else {
        Verdict::Contradiction
    };
    InequalityReport {
        equality: lhs == rhs,
        lhs,
        rhs,
        carrier_density: carrier_density(),
        supply_density,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingleOrbitReport {
    pub p: u64,
    pub mean_index: Rational,
    /// `2 / p`
    pub threshold: Rational,
    pub verdict: Verdict,
}

/// A lone simple orbit with `Delta > 2/p` cannot supply density `1/2`.
pub fn single_orbit_contradiction(p: u64, delta: &Rational) -> Result<SingleOrbitReport, CertifyError> {
    if p == 0 {
        return Err(CertifyError::ZeroOrder);
    }
    if !delta.is_positive() {
        return Err(CertifyError::NonpositiveMeanIndex {
            label: "orbit".into(),
            value: delta.clone(),
        });
    }
    let threshold = Rational::new(2, p);
    let verdict = if delta > &threshold {
        Verdict::Contradiction
    } else {
        Verdict::Inconclusive
    };
    Ok(SingleOrbitReport {
        p,
        mean_index: delta.clone(),
        threshold,
        verdict,
    })
}

/// `Delta(gamma) = Delta(gamma^p) / p`.
pub fn iterate_mean_relation(delta_pth: &Rational, p: u64) -> Rational {
    assert!(p >= 1, "p must be positive");
    delta_pth / Rational::from(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum MatchingVerdict {
    FeasibleAtHorizon,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub orbit: usize,
    #[serde(rename = "N")]
    pub iterate: u64,
    /// `N Delta`
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub k0: Rational,
    pub horizon: u64,
    pub window: u64,
    pub carriers: u64,
    pub candidates: usize,
    pub edges: usize,
    pub matched: u64,
    /// Smallest carrier index left unmatched by the maximum matching found.
    pub first_unmatched: Option<u64>,
    pub verdict: MatchingVerdict,
}

/// Candidate iterates whose value `N Delta` can reach a carrier in `[lo, hi]`.
pub fn candidates(budget: &OrbitBudget, lo: &Rational, hi: &Rational) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (idx, orbit) in budget.orbits.iter().enumerate() {
        let mut iterate = 1u64;
        loop {
            let value = Rational::from(iterate) * &orbit.mean_index;
            if &value > hi {
                break;
            }
            if &value >= lo && budget.iterate_in_target(orbit, iterate) {
                out.push(Candidate {
                    orbit: idx,
                    iterate,
                    value,
                });
            }
            iterate += 1;
        }
    }
    out
}

/// Bipartite graph from carriers `k_0 + 2k` (`0 <= k <= horizon`) to candidate
/// iterates within `3n`, as left adjacency lists.
pub fn carrier_graph(
    budget: &OrbitBudget,
    k0: &Rational,
    horizon: u64,
    n: usize,
) -> (Vec<Vec<usize>>, Vec<Candidate>) {
    let window = Rational::from(3 * n as u64);
    let seq = CarrierSequence::new(k0.clone(), n);
    let lo = k0 - &window;
    let hi = seq.degree(horizon) + &window;
    let cands = candidates(budget, &lo, &hi);
    let mut adj = vec![Vec::new(); horizon as usize + 1];
    let two = Rational::from(2);
    for (ci, c) in cands.iter().enumerate() {
        // carriers k with |value - k0 - 2k| <= window
        let k_lo = -(-((&c.value - &window - k0) / &two)).floor();
        let k_hi = ((&c.value + &window - k0) / &two).floor();
        let start = k_lo.max(BigInt::zero());
        let end = k_hi.min(BigInt::from(horizon));
        let mut k = start;
        while k <= end {
            let idx = usize::try_from(&k).expect("bounded by horizon");
            adj[idx].push(ci);
            k += 1;
        }
    }
    (adj, cands)
}

/// Maximum bipartite matching (Hopcroft-Karp). Returns the partner of each left vertex.
pub fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    const FREE: usize = usize::MAX;
    let left = adj.len();
    let mut match_l = vec![FREE; left];
    let mut match_r = vec![FREE; right];
    let mut dist = vec![0usize; left];

    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut progress = false;
        for u in 0..left {
            if match_l[u] == FREE && augment(u, adj, &mut match_l, &mut match_r, &mut dist) {
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    match_l
        .into_iter()
        .map(|v| (v != FREE).then_some(v))
        .collect()
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let w = match_r[v];
        if w == usize::MAX || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist)) {
            match_l[u] = v;
            match_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

/// Checks whether every carrier degree up to the horizon can be assigned a
/// distinct iterate of a budget orbit in the target class.
pub fn matching_feasibility(
    budget: &OrbitBudget,
    k0: &Rational,
    horizon: u64,
    n: usize,
) -> Result<MatchingReport, CertifyError> {
    if horizon == 0 {
        return Err(CertifyError::ZeroHorizon);
    }
    if budget.supplying().next().is_none() {
        return Err(CertifyError::EmptyBudget(budget.target));
    }
    let (adj, cands) = carrier_graph(budget, k0, horizon, n);
    let matching = max_matching(&adj, cands.len());
    let matched = matching.iter().filter(|m| m.is_some()).count() as u64;
    let first_unmatched = matching.iter().position(Option::is_none).map(|i| i as u64);
    let carriers = horizon + 1;
    Ok(MatchingReport {
        k0: k0.clone(),
        horizon,
        window: 3 * n as u64,
        carriers,
        candidates: cands.len(),
        edges: adj.iter().map(Vec::len).sum(),
        matched,
        first_unmatched,
        verdict: if matched == carriers {
            MatchingVerdict::FeasibleAtHorizon
        } else {
            MatchingVerdict::Infeasible
        },
    })
}
