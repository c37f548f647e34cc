//! Multiple orthogonal and bi-orthogonal polynomials on discrete weight
//! systems, built from their defining linear systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::linalg::{nullspace, solve, Matrix};
use crate::exactalg::{Rational, RingElem};
use crate::pfaffian::determinant;
use crate::report::{sha256_hex, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MopKind {
    #[serde(rename = "typeI")]
    TypeI,
    #[serde(rename = "typeII")]
    TypeII,
    Mixed,
    Mbop,
    Symmetric,
}

/// Point masses: `∫ f dx` is `Σ_n f(x_n)`, weights are their values at the nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MopSystem {
    pub nodes: Vec<Rational>,
    /// First weight family `ω_{1,i}`.
    pub first: Vec<Vec<Rational>>,
    /// Second weight family `ω_{2,j}`.
    pub second: Vec<Vec<Rational>>,
    /// Coupling `S(x_n, x_m)` for bi-moments.
    pub coupling: Vec<Vec<Rational>>,
    /// Symmetric coupling for the symmetric family.
    pub symmetric: Vec<Vec<Rational>>,
}

/// Coefficients per weight: `coeffs[i][j]` multiplies `x^j ω_i`.
pub type FormCoeffs = Vec<Vec<Rational>>;

fn nonzero(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let k = rng.gen_range(lo..=hi);
        if k != 0 {
            return k;
        }
    }
}

impl MopSystem {
    /// Deterministic system with `n` nodes, `p1`/`p2` weights per family.
    pub fn random(n: usize, p1: usize, p2: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<i64> = (-12..=12).collect();
        for i in (1..pool.len()).rev() {
            let j = rng.gen_range(0..=i);
            pool.swap(i, j);
        }
        let nodes: Vec<Rational> = pool.iter().take(n).map(|&k| Rational::new(k, 3)).collect();
        let mut weights = |p: usize| -> Vec<Vec<Rational>> {
            (0..p).map(|_| (0..n).map(|_| Rational::new(nonzero(&mut rng, -5, 5), nonzero(&mut rng, 1, 4))).collect()).collect()
        };
        let first = weights(p1);
        let second = weights(p2);
        let coupling = (0..n).map(|_| (0..n).map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect()).collect();
        let mut symmetric = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = Rational::from_int(rng.gen_range(-3..=3));
                symmetric[i][j] = v.clone();
                symmetric[j][i] = v;
            }
        }
        MopSystem { nodes, first, second, coupling, symmetric }
    }

    pub fn hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("serializes").as_bytes())
    }

    fn powers(&self, max: usize) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::one(); self.nodes.len()]];
        for k in 1..=max {
            let prev = &out[k - 1];
            let next = prev.iter().zip(&self.nodes).map(|(p, x)| p * x).collect();
            out.push(next);
        }
        out
    }

    /// `m_j^{(i)} = Σ_n x_n^j ω_{1,i}(n)`.
    pub fn moment(&self, i: usize, j: usize) -> Rational {
        let pw = self.powers(j);
        pw[j].iter().zip(&self.first[i]).map(|(a, b)| a * b).sum()
    }

    /// `m_j^{(l,k)} = Σ_n x_n^j ω_{1,l}(n) ω_{2,k}(n)`.
    pub fn mixed_moment(&self, l: usize, k: usize, j: usize) -> Rational {
        let pw = self.powers(j);
        (0..self.nodes.len()).map(|n| &(&pw[j][n] * &self.first[l][n]) * &self.second[k][n]).sum()
    }

    /// `Σ_{n,m} x_n^k x_m^l S(n,m) f(n) g(m)` for weight vectors `f`, `g`.
    fn bimoment(&self, s: &[Vec<Rational>], f: &[Rational], g: &[Rational], k: usize, l: usize) -> Rational {
        let pw = self.powers(k.max(l));
        let n = self.nodes.len();
        let mut total = Rational::zero();
        for a in 0..n {
            let fa = &pw[k][a] * &f[a];
            if fa.is_zero() {
                continue;
            }
            let row: Rational = (0..n).map(|b| &(&s[a][b] * &pw[l][b]) * &g[b]).sum();
            total += &(&fa * &row);
        }
        total
    }

    /// `m^{(a,b)}_{k,l}` against the coupling, first family on the left.
    pub fn coupled_moment(&self, a: usize, b: usize, k: usize, l: usize) -> Rational {
        self.bimoment(&self.coupling, &self.first[a], &self.second[b], k, l)
    }

    /// Symmetric bi-moment over the first family.
    pub fn symmetric_moment(&self, i: usize, j: usize, k: usize, l: usize) -> Rational {
        self.bimoment(&self.symmetric, &self.first[i], &self.first[j], k, l)
    }

    /// Values of `Σ_i A_i(x) ω_i(x)` at the nodes.
    fn eval(&self, weights: &[Vec<Rational>], coeffs: &FormCoeffs) -> Vec<Rational> {
        let deg = coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let pw = self.powers(deg);
        (0..self.nodes.len())
            .map(|n| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.iter().enumerate().map(|(j, cj)| &(cj * &pw[j][n]) * &weights[i][n]).sum::<Rational>())
                    .sum()
            })
            .collect()
    }
}

/// `(component, degree)` pairs of a multi-index basis, component-major.
fn basis(v: &[u32]) -> Vec<(usize, usize)> {
    v.iter().enumerate().flat_map(|(i, &n)| (0..n as usize).map(move |j| (i, j))).collect()
}

fn split(v: &[u32], flat: &[Rational]) -> FormCoeffs {
    let mut out = Vec::new();
    let mut it = flat.iter();
    for &n in v {
        out.push((0..n).map(|_| it.next().expect("length").clone()).collect());
    }
    out
}

fn total(v: &[u32]) -> u32 {
    v.iter().sum()
}

/// Type I: `∫ x^k Σ A_i ω_i = δ_{k,|v|−1}` for `k < |v|`.
pub fn type_i(sys: &MopSystem, v: &[u32]) -> Result<FormCoeffs> {
    let n = total(v) as usize;
    if n == 0 {
        return Err(Error::InvalidSpec("type I needs |v| ≥ 1".into()));
    }
    let cols = basis(v);
    let a: Matrix = (0..n).map(|k| cols.iter().map(|&(i, j)| sys.moment(i, j + k)).collect()).collect();
    let mut rhs = vec![Rational::zero(); n];
    rhs[n - 1] = Rational::one();
    let x = solve(&a, &rhs).ok_or(Error::NotNormal)?;
    Ok(split(v, &x))
}

/// Type II: monic `P_v` of degree `|v|` with `∫ P_v x^j ω_i = 0`, `j < v_i`.
/// Returns the `|v|+1` coefficients, lowest first.
pub fn type_ii(sys: &MopSystem, v: &[u32]) -> Result<Vec<Rational>> {
    let n = total(v) as usize;
    let rows = basis(v);
    let a: Matrix = rows.iter().map(|&(i, j)| (0..n).map(|l| sys.moment(i, l + j)).collect()).collect();
    let rhs: Vec<Rational> = rows.iter().map(|&(i, j)| -sys.moment(i, n + j)).collect();
    let mut x = if n == 0 { vec![] } else { solve(&a, &rhs).ok_or(Error::NotNormal)? };
    x.push(Rational::one());
    Ok(x)
}

/// Kernel vector of a system expected to have a one-dimensional kernel,
/// scaled so that entry `pin` (or the last nonzero entry) is 1.
fn kernel_vector(a: &Matrix, cols: usize, pin: Option<usize>) -> Result<Vec<Rational>> {
    let ker = nullspace(a, cols);
    if ker.len() != 1 {
        return Err(Error::NotNormal);
    }
    let v = &ker[0];
    let p = match pin {
        Some(p) => p,
        None => v.iter().rposition(|c| !c.is_zero()).ok_or(Error::NotNormal)?,
    };
    let inv = v[p].recip().ok_or(Error::NotNormal)?;
    Ok(v.iter().map(|c| c * &inv).collect())
}

/// Mixed type `P_{u,v} = Σ A_i ω_{1,i}` with `|u| = |v| + 1`, orthogonal to `x^k ω_{2,j}`, `k < v_j`.
pub fn mixed_p(sys: &MopSystem, u: &[u32], v: &[u32]) -> Result<FormCoeffs> {
    if total(u) != total(v) + 1 {
        return Err(Error::InvalidSpec("mixed P needs |u| = |v| + 1".into()));
    }
    let cols = basis(u);
    let a: Matrix = basis(v).iter().map(|&(k, j)| cols.iter().map(|&(i, l)| sys.mixed_moment(i, k, l + j)).collect()).collect();
    Ok(split(u, &kernel_vector(&a, cols.len(), None)?))
}

/// Mixed type `Q_{u,v} = Σ B_j ω_{2,j}` with `|v| = |u| + 1`, orthogonal to `x^k ω_{1,i}`, `k < u_i`.
pub fn mixed_q(sys: &MopSystem, u: &[u32], v: &[u32]) -> Result<FormCoeffs> {
    if total(v) != total(u) + 1 {
        return Err(Error::InvalidSpec("mixed Q needs |v| = |u| + 1".into()));
    }
    let cols = basis(v);
    let a: Matrix = basis(u).iter().map(|&(i, k)| cols.iter().map(|&(j, l)| sys.mixed_moment(i, j, l + k)).collect()).collect();
    Ok(split(v, &kernel_vector(&a, cols.len(), None)?))
}

fn bump(v: &[u32], a: usize) -> Vec<u32> {
    let mut w = v.to_vec();
    w[a] += 1;
    w
}

fn top_index(v: &[u32], a: usize) -> usize {
    v[..=a].iter().sum::<u32>() as usize - 1
}

/// Moment matrix `rows (j, k<v_j) × cols (i, l<u_i)` with entries `m^{(i,j)}_{l,k}`.
fn coupled_matrix(sys: &MopSystem, u: &[u32], v: &[u32]) -> Matrix {
    let cols = basis(u);
    basis(v).iter().map(|&(j, k)| cols.iter().map(|&(i, l)| sys.coupled_moment(i, j, l, k)).collect()).collect()
}

/// MBOP `P_{u+e_a,v}` with unit coefficient at `x^{u_a} ω_{1,a}`.
pub fn mbop_p(sys: &MopSystem, u: &[u32], v: &[u32], a: usize) -> Result<FormCoeffs> {
    if total(u) != total(v) {
        return Err(Error::InvalidSpec("MBOP needs |u| = |v|".into()));
    }
    let w = bump(u, a);
    let m = coupled_matrix(sys, &w, v);
    Ok(split(&w, &kernel_vector(&m, total(&w) as usize, Some(top_index(&w, a)))?))
}

/// MBOP `Q_{u,v+e_b}` with unit coefficient at `y^{v_b} ω_{2,b}`.
pub fn mbop_q(sys: &MopSystem, u: &[u32], v: &[u32], b: usize) -> Result<FormCoeffs> {
    if total(u) != total(v) {
        return Err(Error::InvalidSpec("MBOP needs |u| = |v|".into()));
    }
    let w = bump(v, b);
    let cols = basis(&w);
    let m: Matrix = basis(u).iter().map(|&(i, k)| cols.iter().map(|&(j, l)| sys.coupled_moment(i, j, k, l)).collect()).collect();
    Ok(split(&w, &kernel_vector(&m, cols.len(), Some(top_index(&w, b)))?))
}

/// `⟨P, Q⟩` with the coupling.
pub fn mbop_pair(sys: &MopSystem, p: &FormCoeffs, q: &FormCoeffs) -> Rational {
    let mut acc = Rational::zero();
    for (a, pa) in p.iter().enumerate() {
        for (k, ca) in pa.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, qb) in q.iter().enumerate() {
                for (l, cb) in qb.iter().enumerate() {
                    if !cb.is_zero() {
                        acc += &(&(ca * cb) * &sys.coupled_moment(a, b, k, l));
                    }
                }
            }
        }
    }
    acc
}

/// Symmetric MBOP `P_v`, degree `v_b` in component `b`, unit top coefficient.
pub fn symmetric_p(sys: &MopSystem, v: &[u32], b: usize) -> Result<FormCoeffs> {
    let w = bump(v, b);
    let cols = basis(&w);
    let m: Matrix = basis(v).iter().map(|&(j, k)| cols.iter().map(|&(i, l)| sys.symmetric_moment(i, j, l, k)).collect()).collect();
    Ok(split(&w, &kernel_vector(&m, cols.len(), Some(top_index(&w, b)))?))
}

pub fn symmetric_pair(sys: &MopSystem, p: &FormCoeffs, q: &FormCoeffs) -> Rational {
    let mut acc = Rational::zero();
    for (i, pi) in p.iter().enumerate() {
        for (k, ci) in pi.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, qj) in q.iter().enumerate() {
                for (l, cj) in qj.iter().enumerate() {
                    if !cj.is_zero() {
                        acc += &(&(ci * cj) * &sys.symmetric_moment(i, j, k, l));
                    }
                }
            }
        }
    }
    acc
}

/// Symmetric moment determinant over the basis of `v`.
pub fn symmetric_tau(sys: &MopSystem, v: &[u32]) -> Rational {
    let b = basis(v);
    let m: Matrix = b.iter().map(|&(j, k)| b.iter().map(|&(i, l)| sys.symmetric_moment(i, j, l, k)).collect()).collect();
    determinant(&m)
}

/// All multi-indices of length `p` with total at most `max`.
pub fn indices(p: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..p {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for k in 0..=max - used {
                let mut w = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn le(u: &[u32], v: &[u32]) -> bool {
    u.iter().zip(v).all(|(a, b)| a <= b)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn report(kind: MopKind, params: serde_json::Value, residual: Rational, hash: &str) -> VerificationReport {
    let mut params = params;
    params["kind"] = json!(kind);
    VerificationReport::from_residual("mops", params, &RingElem::constant(residual), hash)
}

/// Every claimed relation of one family over indices with total ≤ `max_total`.
/// Non-normal indices are skipped.
pub fn verify_mop_biorthogonality(kind: MopKind, sys: &MopSystem, max_total: u32) -> Result<Vec<VerificationReport>> {
    let hash = sys.hash();
    let mut out = Vec::new();
    match kind {
        MopKind::TypeI | MopKind::TypeII => {
            let p = sys.first.len();
            let idx = indices(p, max_total);
            let ones = vec![Rational::one(); sys.nodes.len()];
            let mut pvals = Vec::new();
            for v in &idx {
                if let Ok(c) = type_ii(sys, v) {
                    pvals.push((v.clone(), sys.eval(&[ones.clone()], &vec![c])));
                }
            }
            for u in idx.iter().filter(|u| total(u) > 0) {
                let Ok(q) = type_i(sys, u) else { continue };
                let qv = sys.eval(&sys.first, &q);
                for (v, pv) in &pvals {
                    let expected = if le(u, v) || total(v) + 2 <= total(u) {
                        Rational::zero()
                    } else if total(v) + 1 == total(u) {
                        Rational::one()
                    } else {
                        continue;
                    };
                    let residual = &dot(pv, &qv) - &expected;
                    out.push(report(kind, json!({"u": u, "v": v}), residual, &hash));
                }
            }
        }
        MopKind::Mixed => {
            let (p1, p2) = (sys.first.len(), sys.second.len());
            let us = indices(p1, max_total);
            let vs = indices(p2, max_total);
            let mut ps = Vec::new();
            let mut qs = Vec::new();
            for u in &us {
                for v in &vs {
                    if total(u) == total(v) + 1 {
                        if let Ok(c) = mixed_p(sys, u, v) {
                            ps.push((u.clone(), v.clone(), sys.eval(&sys.first, &c)));
                        }
                    }
                    if total(v) == total(u) + 1 {
                        if let Ok(c) = mixed_q(sys, u, v) {
                            qs.push((u.clone(), v.clone(), sys.eval(&sys.second, &c)));
                        }
                    }
                }
            }
            for (u, v, pv) in &ps {
                for (u2, v2, qv) in &qs {
                    if le(u, u2) || le(v2, v) {
                        out.push(report(kind, json!({"u": u, "v": v, "u'": u2, "v'": v2}), dot(pv, qv), &hash));
                    }
                }
            }
        }
        MopKind::Mbop => {
            let (p1, p2) = (sys.first.len(), sys.second.len());
            let mut pairs: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
            for u in indices(p1, max_total).into_iter().filter(|u| total(u) < max_total) {
                for v in indices(p2, max_total).into_iter().filter(|v| total(v) == total(&u)) {
                    pairs.push((u.clone(), v));
                }
            }
            for a in 0..p1 {
                for b in 0..p2 {
                    for (u, v) in &pairs {
                        let Ok(p) = mbop_p(sys, u, v, a) else { continue };
                        for (u2, v2) in &pairs {
                            let Ok(q) = mbop_q(sys, u2, v2, b) else { continue };
                            let pair = mbop_pair(sys, &p, &q);
                            let params = json!({"a": a + 1, "b": b + 1, "u": u, "v": v, "u'": u2, "v'": v2});
                            if u == u2 && v == v2 {
                                // monic pairing is the Schur complement of the bordered moment matrix
                                let base = coupled_matrix(sys, u, v);
                                let mut bordered = coupled_matrix(sys, &bump(u, a), &bump(v, b));
                                move_last(&mut bordered, top_index(&bump(v, b), b), top_index(&bump(u, a), a));
                                let residual = &(&pair * &determinant(&base)) - &determinant(&bordered);
                                out.push(report(kind, params, residual, &hash));
                            } else if le(&bump(u, a), u2) || le(&bump(v2, b), v) {
                                out.push(report(kind, params, pair, &hash));
                            }
                        }
                    }
                }
            }
        }
        MopKind::Symmetric => {
            let p = sys.first.len();
            let idx: Vec<Vec<u32>> = indices(p, max_total).into_iter().filter(|v| total(v) < max_total).collect();
            for b in 0..p {
                let forms: Vec<(Vec<u32>, FormCoeffs)> = idx.iter().filter_map(|v| symmetric_p(sys, v, b).ok().map(|f| (v.clone(), f))).collect();
                for (v, pv) in &forms {
                    for (w, pw) in &forms {
                        let pair = symmetric_pair(sys, pv, pw);
                        let params = json!({"b": b + 1, "v": v, "v'": w});
                        if v == w {
                            let residual = &(&pair * &symmetric_tau(sys, v)) - &symmetric_tau(sys, &bump(v, b));
                            out.push(report(kind, params, residual, &hash));
                        } else if le(&bump(v, b), w) || le(&bump(w, b), v) {
                            out.push(report(kind, params, pair, &hash));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Moves row `r` and column `c` to the end.
fn move_last(m: &mut Matrix, r: usize, c: usize) {
    let row = m.remove(r);
    m.push(row);
    for row in m.iter_mut() {
        let x = row.remove(c);
        row.push(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_type_ii() {
        let sys = MopSystem::random(6, 1, 1, 2);
        let p = type_ii(&sys, &[1]).unwrap();
        assert_eq!(p[0], -(&sys.moment(0, 1) / &sys.moment(0, 0)));
        assert_eq!(p[1], Rational::one());
    }

    #[test]
    fn type_i_rhs() {
        let sys = MopSystem::random(8, 2, 1, 3);
        let q = type_i(&sys, &[1, 1]).unwrap();
        let r0 = &(&q[0][0] * &sys.moment(0, 0)) + &(&q[1][0] * &sys.moment(1, 0));
        let r1 = &(&q[0][0] * &sys.moment(0, 1)) + &(&q[1][0] * &sys.moment(1, 1));
        assert!(r0.is_zero());
        assert!(r1.is_one());
    }

    #[test]
    fn all_families_small() {
        let sys = MopSystem::random(10, 2, 2, 11);
        for kind in [MopKind::TypeI, MopKind::Mixed, MopKind::Mbop, MopKind::Symmetric] {
            let reps = verify_mop_biorthogonality(kind, &sys, 3).unwrap();
            assert!(!reps.is_empty(), "{kind:?}");
            for r in &reps {
                assert!(r.passed(), "{kind:?}: {r:?}");
            }
        }
    }

    #[test]
    fn scalar_biorthogonal_pair() {
        let sys = MopSystem::random(8, 1, 1, 4);
        let p = mbop_p(&sys, &[2], &[2], 0).unwrap();
        let q = mbop_q(&sys, &[1], &[1], 0).unwrap();
        assert!(mbop_pair(&sys, &p, &q).is_zero());
    }
}
