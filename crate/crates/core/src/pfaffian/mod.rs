//! Pfaffians and determinants.
//!
//! Sign convention: `Pf` of `[[0, a], [-a, 0]]` is `a`; in general the sum over
//! perfect matchings `{(i1,j1),…}` with `i_k < j_k` weighted by the sign of the
//! permutation `(i1 j1 i2 j2 …)`.

pub mod identities;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::rational::lcm_denominators;
use crate::exactalg::{Accumulator, Rational, RingElem};
use crate::report::{sha256_hex, VerificationReport};

pub use identities::{pfaffian_identity_residual, verify_pfaffian_identity, FormalSymbolSet, IdentityKind};

/// Largest size accepted by the matchings oracle.
pub const ORACLE_LIMIT: usize = 12;

/// Skew-symmetric matrix, upper triangle stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    n: usize,
    upper: Vec<RingElem>,
}

impl SkewMatrix {
    pub fn zeros(n: usize) -> Self {
        SkewMatrix { n, upper: vec![RingElem::zero(); n * n.saturating_sub(1) / 2] }
    }

    /// Builds from `entry(i, j)` for `i < j`.
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> RingElem) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, entry(i, j));
            }
        }
        m
    }

    pub fn from_rational(a: &[Vec<Rational>]) -> Self {
        Self::from_fn(a.len(), |i, j| RingElem::constant(a[i][j].clone()))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Sets entry `(i, j)`, `i < j`; `(j, i)` is its negation.
    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> RingElem {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[self.idx(i, j)].clone(),
            Equal => RingElem::zero(),
            Greater => self.upper[self.idx(j, i)].neg(),
        }
    }

    fn upper_ref(&self, i: usize, j: usize) -> &RingElem {
        &self.upper[self.idx(i, j)]
    }

    /// Full matrix of constants, if every entry is constant.
    pub fn to_rational(&self) -> Option<Vec<Vec<Rational>>> {
        let mut a = vec![vec![Rational::zero(); self.n]; self.n];
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = self.upper_ref(i, j).as_constant()?;
                a[j][i] = -&c;
                a[i][j] = c;
            }
        }
        Some(a)
    }
}

/// Pfaffian; constant matrices go through elimination, others through the
/// memoized expansion.
pub fn pfaffian(m: &SkewMatrix) -> Result<RingElem> {
    if m.n % 2 == 1 {
        return Err(Error::OddSize(m.n));
    }
    if let Some(a) = m.to_rational() {
        return Ok(RingElem::constant(pfaffian_elimination(&a)?));
    }
    pfaffian_expansion(m)
}

/// First-row expansion with sub-Pfaffians memoized by index subset.
pub fn pfaffian_expansion(m: &SkewMatrix) -> Result<RingElem> {
    if m.n % 2 == 1 {
        return Err(Error::OddSize(m.n));
    }
    if m.n > 64 {
        return Err(Error::SizeLimit { size: m.n, limit: 64 });
    }
    let full: u64 = if m.n == 64 { u64::MAX } else { (1u64 << m.n) - 1 };
    let mut memo: FxHashMap<u64, RingElem> = FxHashMap::default();
    Ok(expand(m, full, &mut memo))
}

fn expand(m: &SkewMatrix, set: u64, memo: &mut FxHashMap<u64, RingElem>) -> RingElem {
    if set == 0 {
        return RingElem::one();
    }
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    let first = set.trailing_zeros() as usize;
    let rest = set & !(1u64 << first);
    let mut acc = Accumulator::new();
    let mut bits = rest;
    let mut k = 0;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        k += 1;
        let a = m.upper_ref(first, j);
        if a.is_zero() {
            continue;
        }
        let sub = expand(m, rest & !(1u64 << j), memo);
        if sub.is_zero() {
            continue;
        }
        let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
        acc.add_product(a, &sub, &sign);
    }
    let v = acc.finish();
    memo.insert(set, v.clone());
    v
}

/// Brute-force signed sum over all perfect matchings.
pub fn pfaffian_matchings_oracle(m: &SkewMatrix) -> Result<RingElem> {
    if m.n % 2 == 1 {
        return Err(Error::OddSize(m.n));
    }
    if m.n > ORACLE_LIMIT {
        return Err(Error::SizeLimit { size: m.n, limit: ORACLE_LIMIT });
    }
    let mut acc = Accumulator::new();
    let mut used = vec![false; m.n];
    let mut perm = Vec::with_capacity(m.n);
    matchings(m, &mut used, &mut perm, &mut acc);
    Ok(acc.finish())
}

fn matchings(m: &SkewMatrix, used: &mut [bool], perm: &mut Vec<usize>, acc: &mut Accumulator) {
    let Some(i) = used.iter().position(|u| !u) else {
        let mut prod = RingElem::from_int(permutation_sign(perm));
        for pair in perm.chunks(2) {
            prod = prod.mul(m.upper_ref(pair[0], pair[1]));
        }
        acc.add_elem(&prod, &Rational::one());
        return;
    };
    used[i] = true;
    for j in i + 1..m.n {
        if used[j] {
            continue;
        }
        used[j] = true;
        perm.push(i);
        perm.push(j);
        matchings(m, used, perm, acc);
        perm.truncate(perm.len() - 2);
        used[j] = false;
    }
    used[i] = false;
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Scales row/column `i` by `λ_i` so that all entries are integers.
fn clear_skew_denominators(a: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let n = a.len();
    let lambdas: Vec<BigInt> = (0..n).map(|i| lcm_denominators(a[i].iter())).collect();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if a[i][j].is_zero() {
                continue;
            }
            let scaled = a[i][j].numer() * (&lambdas[i] / a[i][j].denom()) * &lambdas[j];
            out[i][j] = scaled;
        }
    }
    let prod = lambdas.iter().fold(BigInt::one(), |acc, l| acc * l);
    (out, prod)
}

/// Fraction-free skew elimination over the integers.
///
/// After eliminating the first `2k` indices `∗`, entry `(i, j)` holds
/// `Pf(∗, i, j)`; the update is the four-term Pfaffian identity divided
/// exactly by `Pf(∗)`.
pub fn pfaffian_elimination(a: &[Vec<Rational>]) -> Result<Rational> {
    let n = a.len();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut m, scale) = clear_skew_denominators(a);
    let mut negate = false;
    let mut prev = BigInt::one();
    let mut k = 0;
    while k + 2 <= n {
        let Some(p) = (k + 1..n).find(|&j| !m[k][j].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k + 1 {
            m.swap(p, k + 1);
            for row in m.iter_mut() {
                row.swap(p, k + 1);
            }
            negate = !negate;
        }
        if k + 2 == n {
            break;
        }
        let piv = m[k][k + 1].clone();
        for i in k + 2..n {
            for j in i + 1..n {
                let v = (&piv * &m[i][j] - &m[k][i] * &m[k + 1][j] + &m[k][j] * &m[k + 1][i]) / &prev;
                m[j][i] = -&v;
                m[i][j] = v;
            }
        }
        prev = piv;
        k += 2;
    }
    let mut pf = Rational::from_bigints(m[n - 2][n - 1].clone(), scale);
    if negate {
        pf = -pf;
    }
    Ok(pf)
}

/// Bareiss fraction-free determinant after clearing row denominators.
pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            let l = lcm_denominators(row.iter());
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Rational::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = Rational::from_bigints(m[n - 1][n - 1].clone(), scale);
    if negate {
        -det
    } else {
        det
    }
}

/// Seeded skew matrix with entries `p/q`, `|p| ≤ 9`, `1 ≤ q ≤ 5`.
pub fn random_skew_rational(n: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            a[j][i] = -&v;
            a[i][j] = v;
        }
    }
    a
}

/// `Pf² = det`, elimination against expansion, and (sizes ≤ 10) the matchings
/// oracle, on one seeded matrix of size `n`.
pub fn verify_pfaffian_core(n: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let a = random_skew_rational(n, seed);
    let hash = sha256_hex(format!("skew:{n}:{seed}").as_bytes());
    let mut out = Vec::new();
    let params = |check: &str| json!({"check": check, "size": n, "seed": seed});
    if n % 2 == 1 {
        // odd skew matrices are singular
        let det = RingElem::constant(determinant(&a));
        out.push(VerificationReport::from_residual("pfaffian-core", params("pf-squared"), &det, &hash));
        return Ok(out);
    }
    let pf = pfaffian_elimination(&a)?;
    let sq = RingElem::constant(&pf * &pf - determinant(&a));
    out.push(VerificationReport::from_residual("pfaffian-core", params("pf-squared"), &sq, &hash));
    let m = SkewMatrix::from_rational(&a);
    let exp = pfaffian_expansion(&m)?;
    out.push(VerificationReport::from_residual("pfaffian-core", params("elimination"), &exp.sub(&RingElem::constant(pf)), &hash));
    if n <= 10 {
        let oracle = pfaffian_matchings_oracle(&m)?;
        out.push(VerificationReport::from_residual("pfaffian-core", params("matchings"), &exp.sub(&oracle), &hash));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Generator;

    #[test]
    fn core_checks_pass() {
        for n in 2..=8 {
            for r in verify_pfaffian_core(n, n as u64).unwrap() {
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn base_cases() {
        assert_eq!(pfaffian(&SkewMatrix::zeros(0)).unwrap(), RingElem::one());
        let a = RingElem::generator(Generator::var(1));
        let m = SkewMatrix::from_fn(2, |_, _| a.clone());
        assert_eq!(pfaffian(&m).unwrap(), a);
        assert_eq!(pfaffian_matchings_oracle(&m).unwrap(), a);
        assert!(matches!(pfaffian(&SkewMatrix::zeros(3)), Err(Error::OddSize(3))));
    }

    #[test]
    fn generic_four() {
        let m = SkewMatrix::from_fn(4, |i, j| RingElem::generator(Generator::formal(i as u32 + 1, j as u32 + 1)));
        let p = |i, j| RingElem::generator(Generator::formal(i, j));
        let expect = p(1, 2).mul(&p(3, 4)).sub(&p(1, 3).mul(&p(2, 4))).add(&p(1, 4).mul(&p(2, 3)));
        assert_eq!(pfaffian(&m).unwrap(), expect);
        assert_eq!(pfaffian_matchings_oracle(&m).unwrap(), expect);
    }

    #[test]
    fn two_by_two_det() {
        let a = vec![vec![q(0, 1), q(2, 3)], vec![q(-2, 3), q(0, 1)]];
        assert_eq!(determinant(&a), q(4, 9));
        assert_eq!(pfaffian_elimination(&a).unwrap(), q(2, 3));
        let id: Vec<Vec<Rational>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { q(1, 1) } else { q(0, 1) }).collect()).collect();
        assert_eq!(determinant(&id), q(1, 1));
    }

    #[test]
    fn elimination_needs_pivoting() {
        // a12 = 0 forces a swap.
        let mut a = vec![vec![Rational::zero(); 4]; 4];
        let mut put = |i: usize, j: usize, v: Rational| {
            a[j][i] = -&v;
            a[i][j] = v;
        };
        put(0, 2, q(1, 2));
        put(1, 3, q(3, 1));
        put(2, 3, q(5, 7));
        put(1, 2, q(-1, 1));
        let by_expansion = pfaffian_expansion(&SkewMatrix::from_rational(&a)).unwrap();
        assert_eq!(RingElem::constant(pfaffian_elimination(&a).unwrap()), by_expansion);
    }
}
