//! Lens spaces `L_p(l_0, ..., l_n)`: the free `Z_p`-action on `S^{2n+1}` that
//! rotates the coordinate `z_i` by `2*pi*l_i/p`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("group order p must be at least 1")]
    ZeroOrder,
    #[error("at least two weights are required, got {0}")]
    TooFewWeights(usize),
    #[error("weight l_{index} = {weight} is not coprime to p = {p}")]
    NonCoprimeWeight { index: usize, weight: i64, p: u64 },
    #[error("class {class} is out of range for p = {p}")]
    ClassOutOfRange { class: u64, p: u64 },
    #[error("rescaling factor {factor} is not a unit modulo {p}")]
    NonUnitFactor { factor: i64, p: u64 },
}

/// Free homotopy class of loops, `a` in `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomotopyClass(u64);

impl HomotopyClass {
    pub fn new(a: u64, p: u64) -> Result<Self, LensError> {
        if a >= p {
            return Err(LensError::ClassOutOfRange { class: a, p });
        }
        Ok(HomotopyClass(a))
    }

    /// Reduces any integer into `{0, ..., p-1}`.
    pub fn reduced(a: i64, p: u64) -> Self {
        HomotopyClass(a.mod_floor(&(p as i64)) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for HomotopyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LensSpace {
    p: u64,
    weights: Vec<i64>,
    #[serde(skip)]
    residues: Vec<u64>,
    n: usize,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Representative of `x mod p` in `{1, ..., p-1}` (units only), or 1 when `p = 1`.
fn residue(x: i64, p: u64) -> u64 {
    if p == 1 {
        1
    } else {
        x.mod_floor(&(p as i64)) as u64
    }
}

impl LensSpace {
    /// Validates `(p, weights)`; every weight must be coprime to `p` when `p >= 2`.
    pub fn new(p: u64, weights: Vec<i64>) -> Result<Self, LensError> {
        if p == 0 {
            return Err(LensError::ZeroOrder);
        }
        if weights.len() < 2 {
            return Err(LensError::TooFewWeights(weights.len()));
        }
        if p >= 2 {
            for (index, &w) in weights.iter().enumerate() {
                if gcd_u64(residue(w, p), p) != 1 {
                    return Err(LensError::NonCoprimeWeight { index, weight: w, p });
                }
            }
        }
        let residues = weights.iter().map(|&w| residue(w, p)).collect();
        let n = weights.len() - 1;
        Ok(LensSpace {
            p,
            weights,
            residues,
            n,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The manifold has dimension `2n + 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Weights reduced into `{1, ..., p-1}` (all 1 when `p = 1`).
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_normalized(&self) -> bool {
        *self.residues.last().expect("at least two weights") == 1
    }

    pub fn class(&self, a: u64) -> Result<HomotopyClass, LensError> {
        HomotopyClass::new(a, self.p)
    }

    /// Rescales every weight by a unit `c`; the quotient manifold is unchanged but
    /// the generator of the action becomes `psi^c`.
    pub fn scaled(&self, factor: i64) -> Result<LensSpace, LensError> {
        if self.p >= 2 && gcd_u64(residue(factor, self.p), self.p) != 1 {
            return Err(LensError::NonUnitFactor {
                factor,
                p: self.p,
            });
        }
        let weights = self
            .weights
            .iter()
            .map(|&w| (w as i128 * factor as i128).rem_euclid(self.p.max(1) as i128) as i64)
            .map(|w| if self.p == 1 { 1 } else { w })
            .collect();
        LensSpace::new(self.p, weights)
    }

    /// Rescales so that the last weight is 1, returning the factor `c = l_n^{-1} mod p`.
    pub fn normalize(&self) -> (LensSpace, u64) {
        if self.p == 1 {
            let space = LensSpace::new(1, vec![1; self.n + 1]).expect("p = 1 accepts any weights");
            return (space, 1);
        }
        let last = *self.residues.last().expect("at least two weights");
        let c = inverse_mod(last, self.p);
        let weights = self
            .residues
            .iter()
            .map(|&w| ((w as u128 * c as u128) % self.p as u128) as i64)
            .collect();
        let space = LensSpace::new(self.p, weights).expect("units stay units");
        (space, c)
    }

    /// Class label of `a` after [`normalize`](Self::normalize): a loop of class `a`
    /// for `psi` has class `l_n * a` for the normalized generator `psi^{l_n^{-1}}`.
    pub fn normalized_class(&self, a: HomotopyClass) -> HomotopyClass {
        let last = *self.residues.last().expect("at least two weights");
        HomotopyClass(((a.0 as u128 * last as u128) % self.p as u128) as u64)
    }

    /// `c_1 = l_0 + ... + l_n mod p`.
    pub fn first_chern_mod_p(&self) -> u64 {
        first_chern_mod_p(self)
    }

    pub fn generator_classes(&self) -> Vec<HomotopyClass> {
        generator_classes(self)
    }

    pub fn classes(&self) -> impl Iterator<Item = HomotopyClass> {
        (0..self.p).map(HomotopyClass)
    }
}

pub fn first_chern_mod_p(space: &LensSpace) -> u64 {
    let p = space.p as i128;
    space
        .weights
        .iter()
        .map(|&w| w as i128)
        .sum::<i128>()
        .rem_euclid(p) as u64
}

/// Classes that generate `pi_1 = Z_p`.
pub fn generator_classes(space: &LensSpace) -> Vec<HomotopyClass> {
    if space.p == 1 {
        return vec![HomotopyClass(0)];
    }
    (1..space.p)
        .filter(|&a| gcd_u64(a, space.p) == 1)
        .map(HomotopyClass)
        .collect()
}

/// `x^{-1} mod p` for a unit `x`, `p >= 2`.
pub(crate) fn inverse_mod(x: u64, p: u64) -> u64 {
    let inv = crate::arith::mod_inverse(&x.into(), &p.into()).expect("weights are units mod p");
    u64::try_from(inv).expect("residue fits in u64")
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "L_{}({})", self.p, w.join(","))
    }
}

#[derive(Deserialize)]
struct RawLens {
    p: u64,
    weights: Vec<i64>,
}

impl<'de> Deserialize<'de> for LensSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawLens::deserialize(deserializer)?;
        LensSpace::new(raw.p, raw.weights).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validate_examples() {
        let l = LensSpace::new(5, vec![1, 1, 1]).unwrap();
        assert_eq!(l.n(), 2);
        assert_eq!(l.p(), 5);
        let sphere = LensSpace::new(1, vec![3, 7]).unwrap();
        assert_eq!(sphere.n(), 1);
        assert_eq!(
            LensSpace::new(4, vec![2, 1, 1]),
            Err(LensError::NonCoprimeWeight {
                index: 0,
                weight: 2,
                p: 4
            })
        );
        assert_eq!(LensSpace::new(5, vec![1]), Err(LensError::TooFewWeights(1)));
        assert_eq!(LensSpace::new(0, vec![1, 1]), Err(LensError::ZeroOrder));
        assert!(matches!(
            LensSpace::new(6, vec![1, -3]),
            Err(LensError::NonCoprimeWeight { index: 1, .. })
        ));
    }

    #[test]
    fn residues_use_positive_representatives() {
        let l = LensSpace::new(5, vec![-1, 7, 11]).unwrap();
        assert_eq!(l.residues(), &[4, 2, 1]);
        assert_eq!(l.weights(), &[-1, 7, 11]);
    }

    #[test]
    fn normalize_examples() {
        let (l, c) = LensSpace::new(5, vec![2, 3, 3]).unwrap().normalize();
        assert_eq!(l.weights(), &[4, 1, 1]);
        assert_eq!(c, 2);
        let (l, c) = LensSpace::new(3, vec![1, 1, 1]).unwrap().normalize();
        assert_eq!(l.weights(), &[1, 1, 1]);
        assert_eq!(c, 1);
        let (l, c) = LensSpace::new(1, vec![3, 7]).unwrap().normalize();
        assert_eq!(l.weights(), &[1, 1]);
        assert_eq!(c, 1);
    }

    #[test]
    fn chern_examples() {
        assert_eq!(LensSpace::new(5, vec![1, 1, 1]).unwrap().first_chern_mod_p(), 3);
        assert_eq!(LensSpace::new(3, vec![1, 1, 1]).unwrap().first_chern_mod_p(), 0);
        assert_eq!(LensSpace::new(1, vec![4, 9, 2]).unwrap().first_chern_mod_p(), 0);
        assert_eq!(LensSpace::new(5, vec![-1, -1, 1]).unwrap().first_chern_mod_p(), 4);
    }

    #[test]
    fn generator_examples() {
        let classes = |p| {
            LensSpace::new(p, vec![1, 1])
                .unwrap()
                .generator_classes()
                .into_iter()
                .map(HomotopyClass::value)
                .collect::<Vec<_>>()
        };
        assert_eq!(classes(5), vec![1, 2, 3, 4]);
        assert_eq!(classes(6), vec![1, 5]);
        assert_eq!(classes(1), vec![0]);
    }

    #[test]
    fn class_range() {
        let l = LensSpace::new(5, vec![1, 1]).unwrap();
        assert!(l.class(4).is_ok());
        assert_eq!(l.class(5), Err(LensError::ClassOutOfRange { class: 5, p: 5 }));
    }

    #[test]
    fn json_shape() {
        let l = LensSpace::new(5, vec![1, 2, 3]).unwrap();
        let v = serde_json::to_value(&l).unwrap();
        assert_eq!(v, serde_json::json!({"p": 5, "weights": [1, 2, 3], "n": 2}));
        let back: LensSpace = serde_json::from_value(v).unwrap();
        assert_eq!(back, l);
        let bad: Result<LensSpace, _> = serde_json::from_value(serde_json::json!({"p": 4, "weights": [2, 1]}));
        assert!(bad.is_err());
    }

    fn unit_weights() -> impl Strategy<Value = (u64, Vec<i64>)> {
        (1u64..60, 2usize..5).prop_flat_map(|(p, len)| {
            let units: Vec<i64> = (1..=p.max(2) as i64 - 1)
                .filter(|&x| p == 1 || (x as u64).gcd(&p) == 1)
                .collect();
            let units = if p == 1 { vec![1, 2, 3] } else { units };
            (Just(p), prop::collection::vec(prop::sample::select(units), len))
        })
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent((p, w) in unit_weights()) {
            let (once, _) = LensSpace::new(p, w).unwrap().normalize();
            let (twice, c) = once.normalize();
            prop_assert_eq!(c, 1);
            prop_assert_eq!(twice.weights(), once.weights());
        }

        #[test]
        fn normalized_last_weight_is_one((p, w) in unit_weights()) {
            let (l, c) = LensSpace::new(p, w.clone()).unwrap().normalize();
            prop_assert_eq!(*l.weights().last().unwrap(), 1);
            prop_assert!(l.is_normalized());
            for (&orig, &norm) in w.iter().zip(l.weights()) {
                if p > 1 {
                    prop_assert_eq!(norm.gcd(&(p as i64)), 1);
                    prop_assert_eq!((orig * c as i64 - norm).rem_euclid(p as i64), 0);
                }
            }
        }

        #[test]
        fn chern_is_permutation_invariant((p, w) in unit_weights(), seed in any::<u64>()) {
            let mut shuffled = w.clone();
            let len = shuffled.len();
            shuffled.rotate_left((seed as usize) % len);
            shuffled.swap(0, (seed as usize / 7) % len);
            prop_assert_eq!(
                LensSpace::new(p, w).unwrap().first_chern_mod_p(),
                LensSpace::new(p, shuffled).unwrap().first_chern_mod_p()
            );
        }
    }
}
