//! Toric presentation of a lens space and the Conley-Zehnder indices of its
//! distinguished Reeb orbit.
//!
//! For a normalized lens space `L_p(l_0, ..., l_{n-1}, 1)` the moment cone has
//! facet normals
//!
//! ```text
//! nu_0 = (0, ..., 0, k, m)
//! nu_j = (e_j, 0, m)                       j = 1, ..., n-1
//! nu_n = (-l_1, ..., -l_{n-1}, q, m)
//! ```
//!
//! where `m` is the order of `c_1 = sum l_i` in `Z_p`, `k` is the least
//! non-negative solution of `k c_1 = p/m (mod p)` and `q = k (l_1 + ... + l_n) - p/m`.
//! Completing `nu_0, ..., nu_{n-1}` by `eta = (0, ..., 0, c, d)` with
//! `k d - m c = 1` gives `nu_n = a_0 nu_0 - sum l_j nu_j + p eta`, and for a
//! Reeb field close to `nu_n` the orbit on the edge cut out by `nu_0, ..., nu_{n-1}`
//! has
//!
//! ```text
//! mu(gamma^N) = 2 (floor(N a_0 / p) + sum_{j=1}^{n-1} floor(-N l_j / p) + N d / m) + n.
//! ```
//!
//! Iterate `N` of that orbit lies in class `N mod p` of the normalized space.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{det_int, ext_gcd, serialize_bigint, IntVector, Rational};
use crate::lens::{HomotopyClass, LensSpace};
use crate::table::GradedTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("lens space {0} is not normalized (last weight must be 1 mod p)")]
    NotNormalized(String),
    #[error("no Bezout pair for k = {k}, m = {m}")]
    BezoutFailure { k: BigInt, m: BigInt },
    #[error("identity `{identity}` violated: {lhs} != {rhs}")]
    IdentityViolation {
        identity: String,
        lhs: String,
        rhs: String,
    },
    #[error("horizon {n_max} is shorter than p + 1 = {needed}")]
    HorizonTooShort { n_max: u64, needed: u64 },
}

fn violation(identity: &str, lhs: impl ToString, rhs: impl ToString) -> ToricError {
    ToricError::IdentityViolation {
        identity: identity.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricModel {
    space: LensSpace,
    #[serde(serialize_with = "serialize_bigint")]
    m: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    k: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    q: BigInt,
    normals: Vec<IntVector>,
    #[serde(serialize_with = "serialize_bigint")]
    c: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    d: BigInt,
    eta: IntVector,
    #[serde(serialize_with = "serialize_bigint")]
    a0: BigInt,
}

fn big(x: impl Into<BigInt>) -> BigInt {
    x.into()
}

impl ToricModel {
    /// Builds the model of a normalized space and checks every structural identity.
    pub fn build(space: &LensSpace) -> Result<ToricModel, ToricError> {
        if !space.is_normalized() {
            return Err(ToricError::NotNormalized(space.to_string()));
        }
        let p = big(space.p());
        let w: Vec<BigInt> = space.residues().iter().map(|&x| big(x)).collect();
        let chern = w.iter().sum::<BigInt>().mod_floor(&p);
        let p_over_m = p.gcd(&chern);
        let m = &p / &p_over_m;

        // k c_1 = p/m (mod p)  <=>  k (c_1 / (p/m)) = 1 (mod m)
        let k = if m.is_one() {
            BigInt::zero()
        } else {
            let unit = &chern / &p_over_m;
            crate::arith::mod_inverse(&unit, &m).map_err(|_| ToricError::BezoutFailure {
                k: BigInt::zero(),
                m: m.clone(),
            })?
        };
        let tail_sum: BigInt = w[1..].iter().sum();
        let q = &k * &tail_sum - &p_over_m;

        let (g, u, _) = ext_gcd(&k, &m).map_err(|_| ToricError::BezoutFailure {
            k: k.clone(),
            m: m.clone(),
        })?;
        if !g.is_one() {
            return Err(ToricError::BezoutFailure { k, m });
        }
        // canonical pair: d = k^{-1} mod m in [0, m)
        let d = u.mod_floor(&m);
        let c = (&k * &d - BigInt::one()) / &m;

        let model = Self::assemble(space.clone(), m, k, q, c, d);
        model.check_invariants()?;
        Ok(model)
    }

    fn assemble(space: LensSpace, m: BigInt, k: BigInt, q: BigInt, c: BigInt, d: BigInt) -> Self {
        let n = space.n();
        let w: Vec<BigInt> = space.residues().iter().map(|&x| big(x)).collect();
        let p = big(space.p());
        let mut normals = Vec::with_capacity(n + 1);
        let mut nu0 = vec![BigInt::zero(); n + 1];
        nu0[n - 1] = k.clone();
        nu0[n] = m.clone();
        normals.push(IntVector::new(nu0));
        for j in 1..n {
            let mut nu = vec![BigInt::zero(); n + 1];
            nu[j - 1] = BigInt::one();
            nu[n] = m.clone();
            normals.push(IntVector::new(nu));
        }
        let mut nun: Vec<BigInt> = w[1..n].iter().map(|l| -l).collect();
        nun.push(q.clone());
        nun.push(m.clone());
        normals.push(IntVector::new(nun));

        let mut eta = vec![BigInt::zero(); n + 1];
        eta[n - 1] = c.clone();
        eta[n] = d.clone();
        let tail_sum: BigInt = w[1..].iter().sum();
        let a0 = tail_sum - &d * (&p / &m);
        ToricModel {
            space,
            m,
            k,
            q,
            normals,
            c,
            d,
            eta: IntVector::new(eta),
            a0,
        }
    }

    /// Same model with a different completion `(c, d)` of the basis.
    pub fn with_bezout(&self, c: BigInt, d: BigInt) -> Result<ToricModel, ToricError> {
        if &self.k * &d - &self.m * &c != BigInt::one() {
            return Err(ToricError::BezoutFailure {
                k: self.k.clone(),
                m: self.m.clone(),
            });
        }
        let model = Self::assemble(
            self.space.clone(),
            self.m.clone(),
            self.k.clone(),
            self.q.clone(),
            c,
            d,
        );
        model.check_invariants()?;
        Ok(model)
    }

    /// `count` distinct solutions `(c + t k, d + t m)` of `k d - m c = 1`, centered on the canonical one.
    pub fn bezout_pairs(&self, count: usize) -> Vec<(BigInt, BigInt)> {
        let half = (count / 2) as i64;
        (0..count as i64)
            .map(|i| {
                let t = big(i - half);
                (&self.c + &t * &self.k, &self.d + &t * &self.m)
            })
            .collect()
    }

    pub fn check_invariants(&self) -> Result<(), ToricError> {
        let p = self.p();
        let w = self.weights();
        if !(&p % &self.m).is_zero() {
            return Err(violation("m divides p", &self.m, &p));
        }
        let p_over_m = &p / &self.m;
        let chern: BigInt = w.iter().sum();
        if !(&self.k * &chern - &p_over_m).mod_floor(&p).is_zero() {
            return Err(violation("k c_1 = p/m mod p", (&self.k * &chern).mod_floor(&p), &p_over_m));
        }
        let mut smaller = BigInt::zero();
        while smaller < self.k {
            if (&smaller * &chern - &p_over_m).mod_floor(&p).is_zero() {
                return Err(violation("k minimal", &self.k, &smaller));
            }
            smaller += 1;
        }
        let tail_sum: BigInt = w[1..].iter().sum();
        let q = &self.k * &tail_sum - &p_over_m;
        if q != self.q {
            return Err(violation("q = k (l_1 + ... + l_n) - p/m", &self.q, q));
        }
        let bezout = &self.k * &self.d - &self.m * &self.c;
        if !bezout.is_one() {
            return Err(violation("k d - m c = 1", bezout, 1));
        }
        let a0 = &tail_sum - &self.d * &p_over_m;
        if a0 != self.a0 {
            return Err(violation("a_0 = sum l_j - d p/m", &self.a0, a0));
        }
        self.verify_basis_identity()?;
        self.verify_determinant()?;
        Ok(())
    }

    pub fn space(&self) -> &LensSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn p(&self) -> BigInt {
        big(self.space.p())
    }

    fn weights(&self) -> Vec<BigInt> {
        self.space.residues().iter().map(|&x| big(x)).collect()
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn normals(&self) -> &[IntVector] {
        &self.normals
    }

    pub fn eta(&self) -> &IntVector {
        &self.eta
    }

    /// `beta = [nu_0 | ... | nu_n]`, row-major.
    pub fn beta(&self) -> Vec<Vec<BigInt>> {
        let dim = self.n() + 1;
        (0..dim)
            .map(|row| self.normals.iter().map(|nu| nu[row].clone()).collect())
            .collect()
    }

    /// `nu_n = a_0 nu_0 + sum_{j=1}^{n-1} (-l_j) nu_j + p eta`.
    pub fn verify_basis_identity(&self) -> Result<(), ToricError> {
        let n = self.n();
        let w = self.weights();
        let mut rhs = self.normals[0].scaled(&self.a0);
        for (nu, l) in self.normals[1..n].iter().zip(&w[1..n]) {
            rhs = rhs.add(&nu.scaled(&-l));
        }
        rhs = rhs.add(&self.eta.scaled(&self.p()));
        if rhs != self.normals[n] {
            return Err(violation(
                "nu_n = a_0 nu_0 - sum l_j nu_j + p eta",
                format!("{:?}", self.normals[n].entries()),
                format!("{:?}", rhs.entries()),
            ));
        }
        Ok(())
    }

    /// Returns `det beta`, which must be `+p` or `-p`.
    pub fn verify_determinant(&self) -> Result<BigInt, ToricError> {
        let det = det_int(&self.beta()).expect("beta is square");
        let p = self.p();
        if det.abs() != p {
            return Err(violation("|det beta| = p", det, p));
        }
        // expanded form |k m (l_1 + ... + l_{n-1} + 1) - m q|
        let w = self.weights();
        let mid: BigInt = w[1..self.n()].iter().sum();
        let expanded: BigInt = &self.k * &self.m * (mid + BigInt::one()) - &self.m * &self.q;
        if expanded.abs() != p {
            return Err(violation("|k m (l_1 + ... + l_{n-1} + 1) - m q| = p", expanded, p));
        }
        Ok(det)
    }

    /// `v = (-q/p, k l_1/p, ..., k l_{n-1}/p, k/p)`.
    pub fn kernel_vector(&self) -> Vec<Rational> {
        let p = self.p();
        let w = self.weights();
        let mut v = vec![Rational::new(-&self.q, p.clone())];
        for l in &w[1..self.n()] {
            v.push(Rational::new(&self.k * l, p.clone()));
        }
        v.push(Rational::new(self.k.clone(), p));
        v
    }

    /// Checks that the displayed vector lies in `ker(beta: T^{n+1} -> T^{n+1})` and
    /// reports its order, and that the weight vector `l / p` generates the kernel.
    pub fn verify_kernel_generator(&self) -> Result<KernelReport, ToricError> {
        let p = self.p();
        let vector = self.kernel_vector();
        let beta = self.beta();
        let image: Vec<Rational> = beta
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&vector)
                    .map(|(b, v)| Rational::from(b.clone()) * v)
                    .sum()
            })
            .collect();
        if let Some(bad) = image.iter().find(|x| !x.is_integer()) {
            return Err(violation("beta v integral", bad, "an integer"));
        }
        let order = vector
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let expected = &p / p.gcd(&self.k).gcd(&self.q);
        if order != expected {
            return Err(violation("order(v) = p / gcd(p, k, q)", &order, expected));
        }

        // l/p has order p; it lies in the kernel iff beta l = 0 mod p, and then
        // generates it because |ker beta| = |det beta| = p.
        let w = self.weights();
        let weights_in_kernel = beta.iter().all(|row| {
            row.iter()
                .zip(&w)
                .map(|(b, l)| b * l)
                .sum::<BigInt>()
                .mod_floor(&p)
                .is_zero()
        });
        if !weights_in_kernel {
            return Err(violation("beta l = 0 mod p", "nonzero residue", 0));
        }

        let status = if order == p {
            KernelStatus::Generator
        } else if self.k.is_zero() {
            KernelStatus::Degenerate {
                reason: "k = 0: displayed vector is integral modulo the lattice".into(),
            }
        } else {
            KernelStatus::Degenerate {
                reason: format!("gcd(k, p) = {} > 1: displayed vector has order {}", self.k.gcd(&p), order),
            }
        };
        Ok(KernelReport {
            vector,
            image,
            order,
            status,
            weights_generate_kernel: true,
        })
    }

    /// Closed-form Conley-Zehnder index of the `N`-th iterate.
    pub fn cz_index(&self, iterate: u64) -> Rational {
        self.cz_index_small(iterate)
            .unwrap_or_else(|| self.cz_index_big(iterate))
    }

    fn cz_index_big(&self, iterate: u64) -> Rational {
        let p = self.p();
        let nn = big(iterate);
        let w = self.weights();
        let mut floors = (&nn * &self.a0).div_floor(&p);
        for l in &w[1..self.n()] {
            floors += (-(&nn * l)).div_floor(&p);
        }
        let frac = Rational::new(&nn * &self.d, self.m.clone());
        Rational::from(2) * (Rational::from(floors) + frac) + Rational::from(self.n() as u64)
    }

    /// The same formula in `i128`, or `None` if some product could overflow.
    fn cz_index_small(&self, iterate: u64) -> Option<Rational> {
        let nn = i128::from(iterate);
        let p = i128::from(self.space.p());
        let n = self.n();
        let a0 = i128::from(self.a0.to_i64()?);
        let m = i128::from(self.m.to_i64()?);
        let d = i128::from(self.d.to_i64()?);
        // p > 0, so Euclidean division is floor division
        let mut floors = nn.checked_mul(a0)?.div_euclid(p);
        for &l in &self.space.residues()[1..n] {
            floors = floors.checked_add((-nn.checked_mul(i128::from(l))?).div_euclid(p))?;
        }
        let twice = floors.checked_mul(2)?.checked_add(n as i128)?;
        let num = m.checked_mul(twice)?.checked_add(nn.checked_mul(d)?.checked_mul(2)?)?;
        Some(Rational::new(num, m))
    }

    /// `lim mu(gamma^N)/N = 2 (a_0/p - (l_1 + ... + l_{n-1})/p + d/m)`.
    pub fn mean_index(&self) -> Rational {
        let p = self.p();
        let w = self.weights();
        let mid: BigInt = w[1..self.n()].iter().sum();
        Rational::from(2)
            * (Rational::new(self.a0.clone() - mid, p) + Rational::new(self.d.clone(), self.m.clone()))
    }

    /// Iterates `N <= max_iter` with `N = a (mod p)` and their indices.
    pub fn cz_spectrum(&self, class: HomotopyClass, max_iter: u64) -> CzSpectrum {
        let p = self.space.p();
        let first = first_representative(class, p);
        let rows = (first..=max_iter)
            .step_by(p as usize)
            .map(|nn| CzRow {
                iterate: nn,
                mu: self.cz_index(nn),
            })
            .collect();
        CzSpectrum { class, rows }
    }

    /// Lowest nonzero degree of `HC_a`.
    pub fn min_degree(&self, class: HomotopyClass) -> Rational {
        let p = self.space.p();
        let first = first_representative(class, p);
        // mu is not monotone inside a period; past the second period the +2 recurrence takes over
        [first, first + p]
            .into_iter()
            .map(|nn| self.cz_index(nn))
            .min()
            .expect("two candidates")
    }

    /// `HC_a` has dimension 1 in degrees `k_a + 2k` (`k >= 0`) and vanishes elsewhere.
    pub fn hc_table(&self, class: HomotopyClass, degree_cap: &Rational) -> HcTable {
        let k_a = self.min_degree(class);
        let mut table = GradedTable::new();
        let mut deg = k_a.clone();
        while &deg <= degree_cap {
            table.add(class, deg.clone(), 1);
            deg = deg + Rational::from(2);
        }
        HcTable { class, k_a, table }
    }

    /// `mu(gamma^{N+p}) = mu(gamma^N) + 2` for `1 <= N <= n_max`.
    pub fn verify_periodicity(&self, n_max: u64) -> Result<u64, ToricError> {
        let p = self.space.p();
        if n_max < p + 1 {
            return Err(ToricError::HorizonTooShort {
                n_max,
                needed: p + 1,
            });
        }
        let mu: Vec<Rational> = (1..=n_max + p).map(|nn| self.cz_index(nn)).collect();
        let two = Rational::from(2);
        for nn in 1..=n_max {
            let lo = &mu[(nn - 1) as usize];
            let hi = &mu[(nn + p - 1) as usize];
            if hi - lo != two {
                return Err(violation(
                    &format!("mu(gamma^{}) = mu(gamma^{}) + 2", nn + p, nn),
                    hi,
                    lo + &two,
                ));
            }
        }
        Ok(n_max)
    }

    /// `k_0 = min { k_a + 2k >= 2n + 1 : k >= 0 }`.
    pub fn k0_threshold(&self, class: HomotopyClass) -> Rational {
        let k_a = self.min_degree(class);
        let floor = Rational::from(2 * self.n() as u64 + 1);
        if k_a >= floor {
            return k_a;
        }
        // smallest integer k with k_a + 2k >= floor
        let steps = -((k_a.clone() - floor) / Rational::from(2)).floor();
        k_a + Rational::from(2) * Rational::from(steps)
    }

    /// All `(N, mu)` with `mu(gamma^N) <= cap`, ascending in `N`.
    pub fn spectrum_up_to(&self, cap: &Rational) -> Vec<CzRow> {
        // mu(gamma^N) > N * 2/p - n, so N beyond (cap + n) p / 2 cannot qualify
        let bound = ((cap.clone() + Rational::from(self.n() as u64)) * Rational::from(self.space.p())
            / Rational::from(2))
        .floor();
        let bound = u64::try_from(bound.max(BigInt::zero())).unwrap_or(u64::MAX) + 1;
        (1..=bound)
            .map(|nn| CzRow {
                iterate: nn,
                mu: self.cz_index(nn),
            })
            .filter(|r| &r.mu <= cap)
            .collect()
    }
}

/// Least positive `N` with `N = a (mod p)`.
pub fn first_representative(class: HomotopyClass, p: u64) -> u64 {
    if class.value() == 0 {
        p
    } else {
        class.value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelStatus {
    Generator,
    Degenerate { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub vector: Vec<Rational>,
    pub image: Vec<Rational>,
    #[serde(serialize_with = "serialize_bigint")]
    pub order: BigInt,
    pub status: KernelStatus,
    pub weights_generate_kernel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CzRow {
    #[serde(rename = "N")]
    pub iterate: u64,
    pub mu: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CzSpectrum {
    pub class: HomotopyClass,
    pub rows: Vec<CzRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HcTable {
    pub class: HomotopyClass,
    pub k_a: Rational,
    pub table: GradedTable,
}

pub fn build_toric_model(space: &LensSpace) -> Result<ToricModel, ToricError> {
    ToricModel::build(space)
}

/// Normalizes `space`, builds its model and translates `class` into the model's labels.
pub fn model_for_space(
    space: &LensSpace,
    class: HomotopyClass,
) -> Result<(ToricModel, HomotopyClass), ToricError> {
    let (normalized, _) = space.normalize();
    let model = ToricModel::build(&normalized)?;
    Ok((model, space.normalized_class(class)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_big_index_paths_agree() {
        for (p, w) in [(3, vec![1, 1, 1]), (12, vec![1, 7, 1]), (59, vec![17, 4, 33, 1]), (1, vec![1, 1])] {
            let t = model(p, &w);
            for nn in (1..500).chain([u64::MAX / 7, u64::MAX - 1, u64::MAX]) {
                let big_path = t.cz_index_big(nn);
                assert_eq!(t.cz_index(nn), big_path, "{nn}");
                if let Some(small) = t.cz_index_small(nn) {
                    assert_eq!(small, big_path);
                }
            }
        }
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn model(p: u64, w: &[i64]) -> ToricModel {
        ToricModel::build(&LensSpace::new(p, w.to_vec()).unwrap()).unwrap()
    }

    fn cls(a: u64, p: u64) -> HomotopyClass {
        HomotopyClass::new(a, p).unwrap()
    }

    fn ints(v: &IntVector) -> Vec<i64> {
        v.entries().iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn l3_model() {
        let t = model(3, &[1, 1, 1]);
        assert_eq!(t.m(), &big(1));
        assert_eq!(t.k(), &big(0));
        assert_eq!(t.q(), &big(-3));
        assert_eq!(t.c(), &big(-1));
        assert_eq!(t.d(), &big(0));
        assert_eq!(t.a0(), &big(2));
        let normals: Vec<_> = t.normals().iter().map(ints).collect();
        assert_eq!(normals, vec![vec![0, 0, 1], vec![1, 0, 1], vec![-1, -3, 1]]);
        assert_eq!(t.verify_determinant().unwrap(), big(-3));
    }

    #[test]
    fn l5_model() {
        let t = model(5, &[1, 1, 1]);
        assert_eq!((t.m(), t.k(), t.q()), (&big(5), &big(2), &big(3)));
        assert_eq!((t.c(), t.d(), t.a0()), (&big(1), &big(3), &big(-1)));
        let normals: Vec<_> = t.normals().iter().map(ints).collect();
        assert_eq!(normals, vec![vec![0, 2, 5], vec![1, 0, 5], vec![-1, 3, 5]]);
        assert_eq!(ints(t.eta()), vec![0, 1, 3]);
        assert_eq!(t.verify_determinant().unwrap(), big(-5));
    }

    #[test]
    fn sphere_model() {
        let t = model(1, &[1, 1, 1]);
        assert_eq!((t.m(), t.k(), t.q()), (&big(1), &big(0), &big(-1)));
        assert_eq!((t.c(), t.d(), t.a0()), (&big(-1), &big(0), &big(2)));
        assert_eq!(t.verify_determinant().unwrap().abs(), big(1));
    }

    #[test]
    fn three_dimensional_layout() {
        // n = 1: no middle normals, empty floor sum
        let t = model(5, &[2, 1]);
        assert_eq!(t.normals().len(), 2);
        assert_eq!(t.verify_determinant().unwrap().abs(), big(5));
        t.verify_periodicity(50).unwrap();
        assert_eq!(t.mean_index(), q(2, 5));
    }

    #[test]
    fn rejects_unnormalized() {
        let space = LensSpace::new(5, vec![1, 1, 2]).unwrap();
        assert!(matches!(ToricModel::build(&space), Err(ToricError::NotNormalized(_))));
    }

    #[test]
    fn kernel_examples() {
        let r = model(5, &[1, 1, 1]).verify_kernel_generator().unwrap();
        assert_eq!(r.vector, vec![q(-3, 5), q(2, 5), q(2, 5)]);
        assert!(r.image.iter().all(Rational::is_integer));
        assert_eq!(r.order, big(5));
        assert_eq!(r.status, KernelStatus::Generator);

        let r = model(3, &[1, 1, 1]).verify_kernel_generator().unwrap();
        assert_eq!(r.vector, vec![q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(r.order, big(1));
        assert!(matches!(r.status, KernelStatus::Degenerate { .. }));
        assert!(r.weights_generate_kernel);

        let r = model(1, &[1, 1]).verify_kernel_generator().unwrap();
        assert_eq!(r.order, big(1));
    }

    #[test]
    fn kernel_degenerate_when_k_shares_factor_with_p() {
        let t = model(12, &[1, 7, 1]);
        assert_eq!((t.m(), t.k()), (&big(4), &big(3)));
        let r = t.verify_kernel_generator().unwrap();
        assert_eq!(r.order, big(4));
        assert!(matches!(r.status, KernelStatus::Degenerate { .. }));
        assert!(r.weights_generate_kernel);
    }

    #[test]
    fn cz_examples() {
        let t = model(3, &[1, 1, 1]);
        let mus: Vec<_> = (1..=5).map(|nn| t.cz_index(nn)).collect();
        assert_eq!(mus, vec![q(0, 1), q(2, 1), q(4, 1), q(2, 1), q(4, 1)]);
        assert_eq!(model(5, &[1, 1, 1]).cz_index(1), q(-4, 5));
        let s = model(1, &[1, 1, 1]);
        for nn in 1..50 {
            assert_eq!(s.cz_index(nn), Rational::from(2 + 2 * nn));
        }
    }

    #[test]
    fn mean_index_examples() {
        assert_eq!(model(3, &[1, 1, 1]).mean_index(), q(2, 3));
        assert_eq!(model(1, &[1, 1]).mean_index(), q(2, 1));
        let t = model(5, &[1, 1, 1]);
        assert_eq!(t.mean_index(), q(2, 5));
        let ratio = t.cz_index(1000) / Rational::from(1000);
        assert!((ratio - q(2, 5)).abs() <= q(2, 1000));
    }

    #[test]
    fn hc_examples() {
        let t = model(3, &[1, 1, 1]);
        assert_eq!(t.min_degree(cls(1, 3)), q(0, 1));
        assert_eq!(t.min_degree(cls(2, 3)), q(2, 1));
        assert_eq!(t.min_degree(cls(0, 3)), q(4, 1));
        let h = t.hc_table(cls(1, 3), &q(7, 1));
        assert_eq!(h.table.degrees(cls(1, 3)), vec![q(0, 1), q(2, 1), q(4, 1), q(6, 1)]);

        let s = model(1, &[1, 1]);
        let h = s.hc_table(cls(0, 1), &q(9, 1));
        assert_eq!(h.k_a, q(3, 1));
        assert_eq!(h.table.degrees(cls(0, 1)), vec![q(3, 1), q(5, 1), q(7, 1), q(9, 1)]);

        let t = model(5, &[1, 1, 1]);
        let k1 = t.min_degree(cls(1, 5));
        assert_eq!(k1, q(-4, 5));
        assert_eq!(k1 + q(2, 1), t.cz_index(6));
    }

    #[test]
    fn hc_below_cap_is_empty() {
        let t = model(3, &[1, 1, 1]);
        assert!(t.hc_table(cls(0, 3), &q(3, 1)).table.is_empty());
    }

    #[test]
    fn periodicity_examples() {
        model(3, &[1, 1, 1]).verify_periodicity(10_000).unwrap();
        model(5, &[1, 1, 1]).verify_periodicity(10_000).unwrap();
        model(1, &[1, 1]).verify_periodicity(1_000).unwrap();
        assert!(matches!(
            model(5, &[1, 1, 1]).verify_periodicity(5),
            Err(ToricError::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn k0_examples() {
        assert_eq!(model(3, &[1, 1, 1]).k0_threshold(cls(1, 3)), q(6, 1));
        assert_eq!(model(1, &[1, 1]).k0_threshold(cls(0, 1)), q(3, 1));
        assert_eq!(model(5, &[1, 1, 1]).k0_threshold(cls(1, 5)), q(26, 5));
    }

    #[test]
    fn cz_spectrum_rows() {
        let s = model(3, &[1, 1, 1]).cz_spectrum(cls(1, 3), 5);
        let rows: Vec<_> = s.rows.iter().map(|r| (r.iterate, r.mu.clone())).collect();
        assert_eq!(rows, vec![(1, q(0, 1)), (4, q(2, 1))]);
    }

    #[test]
    fn bezout_invariance_small() {
        let t = model(5, &[1, 1, 1]);
        let pairs = t.bezout_pairs(6);
        assert!(pairs.contains(&(big(-1), big(-2))));
        for (c, d) in pairs {
            let alt = t.with_bezout(c, d).unwrap();
            for nn in 1..200 {
                assert_eq!(alt.cz_index(nn), t.cz_index(nn));
            }
        }
        assert!(matches!(
            t.with_bezout(big(0), big(0)),
            Err(ToricError::BezoutFailure { .. })
        ));
    }

    #[test]
    fn json_fields() {
        let v = serde_json::to_value(model(5, &[1, 1, 1])).unwrap();
        assert_eq!(v["m"], 5);
        assert_eq!(v["a0"], -1);
        assert_eq!(v["normals"][2], serde_json::json!([-1, 3, 5]));
        assert_eq!(v["space"]["weights"], serde_json::json!([1, 1, 1]));
    }
}
