//! Formal Laurent coefficients of the Cauchy transforms of `d·R_v`.

use serde_json::json;

use super::schur::schur_operator;
use crate::error::{Error, Result};
use crate::exactalg::{Rational, RingElem};
use crate::moments::{MultiIndex, TauEngine};
use crate::msop::{linear_form_r, skew_pair, LinearForm};
use crate::report::VerificationReport;

pub struct CauchySeries {
    /// `coefficients[i]` multiplies `z^{−(i+1)}`.
    pub coefficients: Vec<RingElem>,
    pub reports: Vec<VerificationReport>,
}

/// Expected coefficient at `i = v_comp + k`: `(−1)^{v1+1} p_k(∂̃_t)τ(v1+1,v2)`
/// for component 1, `p_k(∂̃_s)τ(v1,v2+1)` for component 2.
pub fn cauchy_tower(engine: &TauEngine, v: MultiIndex, comp: u8, k: u32) -> Result<RingElem> {
    let (a, b) = (v.v1 as i64, v.v2 as i64);
    let op = schur_operator(k as i64, comp, 1);
    if comp == 1 {
        let sign = if v.v1 % 2 == 0 { -1 } else { 1 };
        Ok(op.apply_tau(engine, a + 1, b)?.scale(&Rational::from_int(sign)))
    } else {
        op.apply_tau(engine, a, b + 1)
    }
}

/// Coefficients `i = 0..v_comp+order` as `−⟨x^i ω_comp, d·R_v⟩`, with one
/// report per vanishing coefficient and one per tower coefficient.
pub fn cauchy_series(engine: &TauEngine, v: MultiIndex, comp: u8, order: u32) -> Result<CauchySeries> {
    if v.total() % 2 == 0 {
        return Err(Error::EvenParity(v.v1, v.v2));
    }
    let alg = engine.algebra();
    let hash = alg.instance_hash();
    let form = linear_form_r(engine, v)?;
    let vc = v.comp(comp);
    let mut coefficients = Vec::new();
    let mut reports = Vec::new();
    for i in 0..=vc + order {
        let c = skew_pair(alg, &LinearForm::monomial(comp, i), &form)?.neg();
        if i < vc {
            let params = json!({"check": "vanish", "v": [v.v1, v.v2], "comp": comp, "i": i});
            reports.push(VerificationReport::from_residual("cauchy", params, &c, hash));
        } else {
            let k = i - vc;
            let residual = c.sub(&cauchy_tower(engine, v, comp, k)?);
            let params = json!({"check": "tower", "v": [v.v1, v.v2], "comp": comp, "k": k});
            reports.push(VerificationReport::from_residual("cauchy", params, &residual, hash));
        }
        coefficients.push(c);
    }
    Ok(CauchySeries { coefficients, reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Derivation, DerivationWord};
    use crate::moments::{make_instance, InstanceSpec};

    #[test]
    fn small_series() {
        let alg = make_instance(&InstanceSpec::generic([9, 9])).unwrap();
        let e = TauEngine::new(&alg);
        for v in [(1, 0), (0, 1), (2, 1), (1, 2), (3, 0), (3, 2)] {
            for comp in 1..=2 {
                let s = cauchy_series(&e, MultiIndex::new(v.0, v.1), comp, 3).unwrap();
                for r in s.reports {
                    assert!(r.passed(), "{r:?}");
                }
            }
        }
    }

    #[test]
    fn leading_and_first_coefficients() {
        let alg = make_instance(&InstanceSpec::generic([8, 8])).unwrap();
        let e = TauEngine::new(&alg);
        // v = (1,0): −⟨x ω1, ω1⟩ = +τ(2,0)
        let s = cauchy_series(&e, MultiIndex::new(1, 0), 1, 1).unwrap();
        assert_eq!(s.coefficients[1], e.tau_at(2, 0).unwrap());
        // v = (1,2), k = 1: ∂_{t1}τ(2,2)
        let v = MultiIndex::new(1, 2);
        let s = cauchy_series(&e, v, 1, 1).unwrap();
        let d = e.tau_derivative(MultiIndex::new(2, 2), &DerivationWord::single(Derivation::T(1))).unwrap();
        assert_eq!(s.coefficients[2], *d);
    }
}
