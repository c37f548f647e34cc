//! Bilinear equations of the 2-component Pfaff lattice hierarchy, each
//! evaluated as left minus right side.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::hirota::{hirota_poly, TauRef};
use super::schur::{schur_operator, OpPoly};
use crate::error::{Error, Result};
use crate::exactalg::{Derivation, Rational, RingElem};
use crate::moments::{MultiIndex, TauEngine};
use crate::report::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqId {
    Pfafftoda1,
    Pfafftoda2,
    Mckp,
    Dkp,
    Isub1,
    Isub2,
    Isub3,
    Isub4,
    Lattice,
}

impl EqId {
    pub const ALL: [EqId; 9] = [
        EqId::Pfafftoda1,
        EqId::Pfafftoda2,
        EqId::Mckp,
        EqId::Dkp,
        EqId::Isub1,
        EqId::Isub2,
        EqId::Isub3,
        EqId::Isub4,
        EqId::Lattice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EqId::Pfafftoda1 => "pfafftoda1",
            EqId::Pfafftoda2 => "pfafftoda2",
            EqId::Mckp => "mckp",
            EqId::Dkp => "dkp",
            EqId::Isub1 => "isub1",
            EqId::Isub2 => "isub2",
            EqId::Isub3 => "isub3",
            EqId::Isub4 => "isub4",
            EqId::Lattice => "lattice",
        }
    }

    /// Human-readable statement with tau indices.
    pub fn explain(self) -> &'static str {
        match self {
            EqId::Pfafftoda1 => {
                "pfafftoda1  (Pfaff-Toda, first line)\n\
                 D_{t1} τ(v1,v2−1)·τ(v1,v2+1) = D_{s1} τ(v1+1,v2)·τ(v1−1,v2),   |v| odd"
            }
            EqId::Pfafftoda2 => {
                "pfafftoda2  (Pfaff-Toda, second line)\n\
                 D_{s1}D_{t1} τ(v1−1,v2)·τ(v1−1,v2) = 2(τ(v1,v2−1)τ(v1−2,v2+1) − τ(v1,v2+1)τ(v1−2,v2−1)),   |v| odd"
            }
            EqId::Mckp => {
                "mckp  (modified coupled KP)\n\
                 (D_{s2} + D_{s1}²) τ(v1,v2−1)·τ(v1+1,v2) = 2 τ(v1,v2+1)τ(v1+1,v2−2),   |v| odd"
            }
            EqId::Dkp => {
                "dkp  (DKP hierarchy, first member; one-component tower τ_{2n} = τ(2n,0))\n\
                 (D_{t1}⁴ − 4D_{t1}D_{t3} + 3D_{t2}²) τ_{2n}·τ_{2n} = 24 τ_{2n−2}τ_{2n+2}"
            }
            EqId::Isub1 => {
                "isub1  (neighbouring hierarchy, ω1 coefficients of the first recurrence)\n\
                 τ(v1,v2−1) p_j(−∂̃_t)τ(v1,v2+1) = −τ(v1+1,v2) ∂_{s1}p_{j−1}(−∂̃_t)τ(v1−1,v2)\n\
                 \u{20}   + ∂_{s1}τ(v1+1,v2) p_{j−1}(−∂̃_t)τ(v1−1,v2) + τ(v1,v2+1) p_j(−∂̃_t)τ(v1,v2−1)"
            }
            EqId::Isub2 => {
                "isub2  (neighbouring hierarchy, ω2 coefficients of the first recurrence)\n\
                 τ(v1,v2−1) p_j(−∂̃_s)τ(v1+1,v2) = τ(v1+1,v2) (∂_{s1}p_{j−1}(−∂̃_s) + p_j(−∂̃_s))τ(v1,v2−1)\n\
                 \u{20}   − ∂_{s1}τ(v1+1,v2) p_{j−1}(−∂̃_s)τ(v1,v2−1) + τ(v1,v2+1) p_{j−2}(−∂̃_s)τ(v1+1,v2−2)"
            }
            EqId::Isub3 => {
                "isub3  (neighbouring hierarchy, ω1 coefficients of the third recurrence)\n\
                 ∂_{t1}τ(v1,v2−1) p_{j−1}(−∂̃_t)τ(v1−1,v2) = τ(v1,v2−1) (∂_{t1}p_{j−1}(−∂̃_t) + p_j(−∂̃_t))τ(v1−1,v2)\n\
                 \u{20}   − τ(v1−1,v2) p_j(−∂̃_t)τ(v1,v2−1) + τ(v1+1,v2) p_{j−2}(−∂̃_t)τ(v1−2,v2−1)"
            }
            EqId::Isub4 => {
                "isub4  (neighbouring hierarchy, ω2 coefficients of the third recurrence)\n\
                 ∂_{t1}τ(v1,v2−1) p_{j−1}(−∂̃_s)τ(v1,v2−1) = τ(v1,v2−1) ∂_{t1}p_{j−1}(−∂̃_s)τ(v1,v2−1)\n\
                 \u{20}   + τ(v1−1,v2) p_{j−2}(−∂̃_s)τ(v1+1,v2−2) − τ(v1+1,v2) p_{j−2}(−∂̃_s)τ(v1−1,v2−2)"
            }
            EqId::Lattice => {
                "lattice  (coefficient of α1^m β1^n in the bilinear identity; σ = (−1)^{u1+v1+1})\n\
                 σ Σ_{k+l=m} (−2)^k/(k! l! n!) [p_{k+v1−u1−1}(D̃_t) D_{t1}^l D_{s1}^n] τ(u1+1,u2)·τ(v1−1,v2)\n\
                 + σ Σ_{k+l=m} 2^k/(k! l! n!) [p_{k+u1−v1−1}(−D̃_t) D_{t1}^l D_{s1}^n] τ(u1−1,u2)·τ(v1+1,v2)\n\
                 = Σ_{k+l=n} (−2)^k/(k! l! m!) [p_{k+v2−u2−1}(D̃_s) D_{s1}^l D_{t1}^m] τ(u1,u2+1)·τ(v1,v2−1)\n\
                 + Σ_{k+l=n} 2^k/(k! l! m!) [p_{k+u2−v2−1}(−D̃_s) D_{s1}^l D_{t1}^m] τ(u1,u2−1)·τ(v1,v2+1),   |u|, |v| odd"
            }
        }
    }
}

impl fmt::Display for EqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EqId {
    type Err = Error;

    fn from_str(s: &str) -> Result<EqId> {
        EqId::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| Error::UnknownEquation(s.to_string()))
    }
}

pub fn explain(eq_id: &str) -> Result<&'static str> {
    Ok(eq_id.parse::<EqId>()?.explain())
}

/// Parameters of one equation instance. `v` is the base index (for `dkp`,
/// `v = (2n, 0)`); `u`, `m`, `n` are used by `lattice`, `j` by the `isub` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EqParams {
    pub v: MultiIndex,
    pub u: MultiIndex,
    pub j: u32,
    pub m: u32,
    pub n: u32,
}

impl EqParams {
    pub fn at(v: MultiIndex) -> Self {
        EqParams { v, u: v, j: 0, m: 0, n: 0 }
    }

    pub fn dkp(two_n: u32) -> Self {
        Self::at(MultiIndex::new(two_n, 0))
    }

    pub fn isub(v: MultiIndex, j: u32) -> Self {
        EqParams { j, ..Self::at(v) }
    }

    pub fn lattice(u: MultiIndex, v: MultiIndex, m: u32, n: u32) -> Self {
        EqParams { v, u, j: 0, m, n }
    }

    pub fn to_json(&self, eq: EqId) -> serde_json::Value {
        let v = json!([self.v.v1, self.v.v2]);
        match eq {
            EqId::Dkp => json!({"eq": eq.name(), "2n": self.v.v1}),
            EqId::Isub1 | EqId::Isub2 | EqId::Isub3 | EqId::Isub4 => json!({"eq": eq.name(), "v": v, "j": self.j}),
            EqId::Lattice => json!({"eq": eq.name(), "v": v, "u": [self.u.v1, self.u.v2], "m": self.m, "n": self.n}),
            _ => json!({"eq": eq.name(), "v": v}),
        }
    }
}

fn require_odd(v: MultiIndex) -> Result<()> {
    if v.total() % 2 == 0 {
        return Err(Error::EvenParity(v.v1, v.v2));
    }
    Ok(())
}

fn tau(engine: &TauEngine, v1: i64, v2: i64) -> Result<RingElem> {
    engine.tau_at(v1, v2)
}

fn op_tau(engine: &TauEngine, op: &OpPoly, v1: i64, v2: i64) -> Result<RingElem> {
    op.apply_tau(engine, v1, v2)
}

/// `p_j(−∂̃)` along `comp`; zero for negative `j`.
fn pm(j: i64, comp: u8) -> OpPoly {
    schur_operator(j, comp, -1)
}

fn d1(comp: u8) -> OpPoly {
    OpPoly::letter(Derivation::of_component(comp, 1))
}

fn hirota(engine: &TauEngine, poly: &OpPoly, f: (i64, i64), g: (i64, i64)) -> Result<RingElem> {
    hirota_poly(engine, poly, TauRef(f.0, f.1), TauRef(g.0, g.1))
}

/// Conventions of the `lattice` coefficient family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeConvention {
    /// Overall sign of the `t` side is `(−1)^{u1+v1+1}` (otherwise `(−1)^{u1+v1}`).
    pub shifted_sign: bool,
    /// Coefficients carry `1/k!` from the expansion of `e^{∓2ξ(α,z)}`.
    pub factorial: bool,
}

impl LatticeConvention {
    pub const CORRECTED: LatticeConvention = LatticeConvention { shifted_sign: true, factorial: true };
    /// The coefficient family exactly as printed.
    pub const PRINTED: LatticeConvention = LatticeConvention { shifted_sign: false, factorial: false };
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// `Σ_{k+l=total} (±2)^k/(k!·l!·outer!) p_{k+shift}(sign·D̃_main) D_{main,1}^l D_{other,1}^outer`.
fn lattice_operator(main: u8, total: u32, outer: u32, shift: i64, schur_sign: i8, two: i64, conv: LatticeConvention) -> OpPoly {
    let other = 3 - main;
    let outer_op = OpPoly::power(Derivation::of_component(other, 1), outer);
    let mut sum = OpPoly::zero();
    for k in 0..=total {
        let l = total - k;
        let p = schur_operator(k as i64 + shift, main, schur_sign);
        if p.is_zero() {
            continue;
        }
        let mut den = factorial(l) * factorial(outer);
        if conv.factorial {
            den *= factorial(k);
        }
        let c = Rational::new(two.pow(k), den);
        let term = p.mul(&OpPoly::power(Derivation::of_component(main, 1), l)).mul(&outer_op);
        sum = sum.add(&term.scale(&c));
    }
    sum
}

/// Coefficient of `α1^m β1^n` in the bilinear identity, left minus right.
pub fn lattice_residual(engine: &TauEngine, u: MultiIndex, v: MultiIndex, m: u32, n: u32, conv: LatticeConvention) -> Result<RingElem> {
    require_odd(u)?;
    require_odd(v)?;
    let (u1, u2, v1, v2) = (u.v1 as i64, u.v2 as i64, v.v1 as i64, v.v2 as i64);
    let parity = (u1 + v1 + if conv.shifted_sign { 1 } else { 0 }) % 2;
    let sigma = Rational::from_int(if parity == 0 { 1 } else { -1 });

    let t_minus = lattice_operator(1, m, n, v1 - u1 - 1, 1, -2, conv);
    let t_plus = lattice_operator(1, m, n, u1 - v1 - 1, -1, 2, conv);
    let s_minus = lattice_operator(2, n, m, v2 - u2 - 1, 1, -2, conv);
    let s_plus = lattice_operator(2, n, m, u2 - v2 - 1, -1, 2, conv);

    let lhs = hirota(engine, &t_minus, (u1 + 1, u2), (v1 - 1, v2))?.add(&hirota(engine, &t_plus, (u1 - 1, u2), (v1 + 1, v2))?);
    let rhs = hirota(engine, &s_minus, (u1, u2 + 1), (v1, v2 - 1))?.add(&hirota(engine, &s_plus, (u1, u2 - 1), (v1, v2 + 1))?);
    Ok(lhs.scale(&sigma).sub(&rhs))
}

/// `[σ·t side, s side]` of the `(m,n) = (1,1)`, `u = v` lattice coefficient
/// followed by `[D_{s1}τ(v1+1,v2)·τ(v1−1,v2), D_{t1}τ(v1,v2−1)·τ(v1,v2+1)]`.
/// The first pair is four times the second, term for term.
pub fn lattice_toda_sides(engine: &TauEngine, v: MultiIndex) -> Result<[RingElem; 4]> {
    require_odd(v)?;
    let (a, b) = (v.v1 as i64, v.v2 as i64);
    let conv = LatticeConvention::CORRECTED;
    let t_minus = lattice_operator(1, 1, 1, -1, 1, -2, conv);
    let t_plus = lattice_operator(1, 1, 1, -1, -1, 2, conv);
    let s_minus = lattice_operator(2, 1, 1, -1, 1, -2, conv);
    let s_plus = lattice_operator(2, 1, 1, -1, -1, 2, conv);
    let t_side = hirota(engine, &t_minus, (a + 1, b), (a - 1, b))?.add(&hirota(engine, &t_plus, (a - 1, b), (a + 1, b))?).neg();
    let s_side = hirota(engine, &s_minus, (a, b + 1), (a, b - 1))?.add(&hirota(engine, &s_plus, (a, b - 1), (a, b + 1))?);
    let toda_s = hirota(engine, &d1(2), (a + 1, b), (a - 1, b))?;
    let toda_t = hirota(engine, &d1(1), (a, b - 1), (a, b + 1))?;
    Ok([t_side, s_side, toda_s, toda_t])
}

/// The first `isub` line with `τ(v1+1,v2)` in the leading product, as printed.
pub fn isub1_printed_residual(engine: &TauEngine, v: MultiIndex, j: u32) -> Result<RingElem> {
    isub1_with_lead(engine, v, j, (1, 0))
}

fn isub1_with_lead(engine: &TauEngine, v: MultiIndex, j: u32, lead: (i64, i64)) -> Result<RingElem> {
    require_odd(v)?;
    let (a, b) = (v.v1 as i64, v.v2 as i64);
    let j = j as i64;
    let lhs = tau(engine, a, b - 1)?.mul(&op_tau(engine, &pm(j, 1), a + lead.0, b + lead.1)?);
    let rhs = tau(engine, a + 1, b)?
        .mul(&op_tau(engine, &d1(2).mul(&pm(j - 1, 1)), a - 1, b)?)
        .neg()
        .add(&op_tau(engine, &d1(2), a + 1, b)?.mul(&op_tau(engine, &pm(j - 1, 1), a - 1, b)?))
        .add(&tau(engine, a, b + 1)?.mul(&op_tau(engine, &pm(j, 1), a, b - 1)?));
    Ok(lhs.sub(&rhs))
}

/// Left minus right side of one equation instance.
pub fn equation_residual(engine: &TauEngine, eq: EqId, p: &EqParams) -> Result<RingElem> {
    let v = p.v;
    let (a, b) = (v.v1 as i64, v.v2 as i64);
    let j = p.j as i64;
    match eq {
        EqId::Pfafftoda1 => {
            require_odd(v)?;
            let lhs = hirota(engine, &d1(1), (a, b - 1), (a, b + 1))?;
            let rhs = hirota(engine, &d1(2), (a + 1, b), (a - 1, b))?;
            Ok(lhs.sub(&rhs))
        }
        EqId::Pfafftoda2 => {
            require_odd(v)?;
            let lhs = hirota(engine, &d1(2).mul(&d1(1)), (a - 1, b), (a - 1, b))?;
            let rhs = tau(engine, a, b - 1)?
                .mul(&tau(engine, a - 2, b + 1)?)
                .sub(&tau(engine, a, b + 1)?.mul(&tau(engine, a - 2, b - 1)?))
                .scale(&Rational::from_int(2));
            Ok(lhs.sub(&rhs))
        }
        EqId::Mckp => {
            require_odd(v)?;
            let op = OpPoly::letter(Derivation::S(2)).add(&OpPoly::power(Derivation::S(1), 2));
            let lhs = hirota(engine, &op, (a, b - 1), (a + 1, b))?;
            let rhs = tau(engine, a, b + 1)?.mul(&tau(engine, a + 1, b - 2)?).scale(&Rational::from_int(2));
            Ok(lhs.sub(&rhs))
        }
        EqId::Dkp => {
            if v.v2 != 0 || v.v1 % 2 == 1 || v.v1 == 0 {
                return Err(Error::InvalidSpec(format!("dkp needs v = (2n, 0) with n ≥ 1, got {v}")));
            }
            let op = OpPoly::power(Derivation::T(1), 4)
                .add(&OpPoly::letter(Derivation::T(1)).mul(&OpPoly::letter(Derivation::T(3))).scale(&Rational::from_int(-4)))
                .add(&OpPoly::power(Derivation::T(2), 2).scale(&Rational::from_int(3)));
            let lhs = hirota(engine, &op, (a, 0), (a, 0))?;
            let rhs = tau(engine, a - 2, 0)?.mul(&tau(engine, a + 2, 0)?).scale(&Rational::from_int(24));
            Ok(lhs.sub(&rhs))
        }
        EqId::Isub1 => isub1_with_lead(engine, v, p.j, (0, 1)),
        EqId::Isub2 => {
            require_odd(v)?;
            let lhs = tau(engine, a, b - 1)?.mul(&op_tau(engine, &pm(j, 2), a + 1, b)?);
            let rhs = tau(engine, a + 1, b)?
                .mul(&op_tau(engine, &d1(2).mul(&pm(j - 1, 2)).add(&pm(j, 2)), a, b - 1)?)
                .sub(&op_tau(engine, &d1(2), a + 1, b)?.mul(&op_tau(engine, &pm(j - 1, 2), a, b - 1)?))
                .add(&tau(engine, a, b + 1)?.mul(&op_tau(engine, &pm(j - 2, 2), a + 1, b - 2)?));
            Ok(lhs.sub(&rhs))
        }
        EqId::Isub3 => {
            require_odd(v)?;
            let lhs = op_tau(engine, &d1(1), a, b - 1)?.mul(&op_tau(engine, &pm(j - 1, 1), a - 1, b)?);
            let rhs = tau(engine, a, b - 1)?
                .mul(&op_tau(engine, &d1(1).mul(&pm(j - 1, 1)).add(&pm(j, 1)), a - 1, b)?)
                .sub(&tau(engine, a - 1, b)?.mul(&op_tau(engine, &pm(j, 1), a, b - 1)?))
                .add(&tau(engine, a + 1, b)?.mul(&op_tau(engine, &pm(j - 2, 1), a - 2, b - 1)?));
            Ok(lhs.sub(&rhs))
        }
        EqId::Isub4 => {
            require_odd(v)?;
            let lhs = op_tau(engine, &d1(1), a, b - 1)?.mul(&op_tau(engine, &pm(j - 1, 2), a, b - 1)?);
            let rhs = tau(engine, a, b - 1)?
                .mul(&op_tau(engine, &d1(1).mul(&pm(j - 1, 2)), a, b - 1)?)
                .add(&tau(engine, a - 1, b)?.mul(&op_tau(engine, &pm(j - 2, 2), a + 1, b - 2)?))
                .sub(&tau(engine, a + 1, b)?.mul(&op_tau(engine, &pm(j - 2, 2), a - 1, b - 2)?));
            Ok(lhs.sub(&rhs))
        }
        EqId::Lattice => lattice_residual(engine, p.u, v, p.m, p.n, LatticeConvention::CORRECTED),
    }
}

pub fn verify_equation(engine: &TauEngine, eq: EqId, p: &EqParams) -> Result<VerificationReport> {
    let residual = equation_residual(engine, eq, p)?;
    Ok(VerificationReport::from_residual("hierarchy", p.to_json(eq), &residual, engine.algebra().instance_hash()))
}

/// Offsets `u − v` used for the `lattice` family.
pub const LATTICE_OFFSETS: [(i64, i64); 7] = [(0, 0), (2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (-1, -1)];

/// Every equation instance with `|v|`, `|u| ≤ max_total` (odd), `j ≤ max_j`
/// and `m, n ≤ max_mn`. `dkp` is excluded (it needs a one-component tower).
pub fn hierarchy_instances(max_total: u32, max_j: u32, max_mn: u32) -> Vec<(EqId, EqParams)> {
    let mut out = Vec::new();
    for total in (1..=max_total).step_by(2) {
        for v in MultiIndex::with_total(total) {
            for eq in [EqId::Pfafftoda1, EqId::Pfafftoda2, EqId::Mckp] {
                out.push((eq, EqParams::at(v)));
            }
            for eq in [EqId::Isub1, EqId::Isub2, EqId::Isub3, EqId::Isub4] {
                for j in 1..=max_j {
                    out.push((eq, EqParams::isub(v, j)));
                }
            }
            for (d1, d2) in LATTICE_OFFSETS {
                let Some(u) = v.offset(d1, d2) else { continue };
                if u.total() > max_total {
                    continue;
                }
                for m in 0..=max_mn {
                    for n in 0..=max_mn {
                        out.push((EqId::Lattice, EqParams::lattice(u, v, m, n)));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{make_instance, InstanceSpec, MomentAlgebra};

    fn generic() -> MomentAlgebra {
        make_instance(&InstanceSpec::generic([9, 9])).unwrap()
    }

    #[test]
    fn parse_and_explain() {
        assert_eq!("mckp".parse::<EqId>().unwrap(), EqId::Mckp);
        assert!(matches!(explain("nosuch"), Err(Error::UnknownEquation(_))));
        assert!(explain("pfafftoda1").unwrap().contains("D_{t1} τ(v1,v2−1)·τ(v1,v2+1)"));
        assert!(explain("dkp").unwrap().contains("24 τ_{2n−2}τ_{2n+2}"));
    }

    #[test]
    fn toda_small() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        for v in [(1, 2), (2, 1), (1, 0), (0, 1), (3, 2)] {
            let v = MultiIndex::new(v.0, v.1);
            for eq in [EqId::Pfafftoda1, EqId::Pfafftoda2, EqId::Mckp] {
                let r = equation_residual(&e, eq, &EqParams::at(v)).unwrap();
                assert!(r.is_zero(), "{eq} at {v}: {}", r.to_string_truncated(5));
            }
        }
    }

    #[test]
    fn dkp_small() {
        let alg = make_instance(&InstanceSpec::generic([9, 0])).unwrap();
        let e = TauEngine::new(&alg);
        for two_n in [2, 4] {
            assert!(equation_residual(&e, EqId::Dkp, &EqParams::dkp(two_n)).unwrap().is_zero());
        }
    }

    #[test]
    fn isub_small() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        for v in [(1, 2), (2, 1), (1, 0), (0, 1), (3, 0), (2, 3)] {
            let v = MultiIndex::new(v.0, v.1);
            for eq in [EqId::Isub1, EqId::Isub2, EqId::Isub3, EqId::Isub4] {
                for j in 1..=3 {
                    let r = equation_residual(&e, eq, &EqParams::isub(v, j)).unwrap();
                    assert!(r.is_zero(), "{eq} j={j} at {v}: {}", r.to_string_truncated(5));
                }
            }
        }
    }

    #[test]
    fn printed_isub1_fails() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        // smallest index where the printed leading product differs
        assert!(isub1_printed_residual(&e, MultiIndex::new(1, 0), 1).unwrap().is_zero());
        assert!(!isub1_printed_residual(&e, MultiIndex::new(0, 1), 1).unwrap().is_zero());
        assert!(equation_residual(&e, EqId::Isub1, &EqParams::isub(MultiIndex::new(0, 1), 1)).unwrap().is_zero());
    }

    #[test]
    fn lattice_reduces_to_toda() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        for v in [(1, 2), (2, 1), (1, 0)] {
            let v = MultiIndex::new(v.0, v.1);
            let lat = lattice_residual(&e, v, v, 1, 1, LatticeConvention::CORRECTED).unwrap();
            let toda = equation_residual(&e, EqId::Pfafftoda1, &EqParams::at(v)).unwrap();
            assert!(lat.is_zero() && toda.is_zero());
            // the coefficient is 4·(pfafftoda1 left − right) termwise
            let d_s = hirota(&e, &d1(2), (v.v1 as i64 + 1, v.v2 as i64), (v.v1 as i64 - 1, v.v2 as i64)).unwrap();
            let side = lattice_operator(1, 1, 1, -1, 1, -2, LatticeConvention::CORRECTED);
            let t_side = hirota(&e, &side, (v.v1 as i64 + 1, v.v2 as i64), (v.v1 as i64 - 1, v.v2 as i64)).unwrap();
            assert_eq!(t_side, d_s.scale(&Rational::from_int(-2)));
        }
    }

    #[test]
    fn lattice_sides_are_four_toda_sides() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        for v in [(1, 2), (2, 1), (2, 3), (3, 2)] {
            let [t, s, ds, dt] = lattice_toda_sides(&e, MultiIndex::new(v.0, v.1)).unwrap();
            assert!(!ds.is_zero());
            assert_eq!(t, ds.scale(&Rational::from_int(4)));
            assert_eq!(s, dt.scale(&Rational::from_int(4)));
        }
    }

    #[test]
    fn lattice_small() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        for v in [(1, 2), (2, 1)] {
            let v = MultiIndex::new(v.0, v.1);
            for (d1, d2) in LATTICE_OFFSETS {
                let Some(u) = v.offset(d1, d2) else { continue };
                for m in 0..=2 {
                    for n in 0..=2 {
                        let r = lattice_residual(&e, u, v, m, n, LatticeConvention::CORRECTED).unwrap();
                        assert!(r.is_zero(), "u={u} v={v} m={m} n={n}: {}", r.to_string_truncated(5));
                    }
                }
            }
        }
    }

    #[test]
    fn printed_lattice_conventions_fail() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        let printed_sign = LatticeConvention { shifted_sign: false, factorial: true };
        let no_factorial = LatticeConvention { shifted_sign: true, factorial: false };
        let w = MultiIndex::new(1, 2);
        assert!(!lattice_residual(&e, w, w, 1, 1, printed_sign).unwrap().is_zero());
        let w = MultiIndex::new(0, 1);
        assert!(!lattice_residual(&e, w, w, 0, 2, no_factorial).unwrap().is_zero());
        assert!(!lattice_residual(&e, w, w, 0, 2, LatticeConvention::PRINTED).unwrap().is_zero());
        assert!(lattice_residual(&e, w, w, 0, 2, LatticeConvention::CORRECTED).unwrap().is_zero());
        // below order 2 the factorial makes no difference
        for (m, n) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!(lattice_residual(&e, w, w, m, n, no_factorial).unwrap().is_zero());
        }
    }
}
