//! One-component reduction: skew-orthogonal polynomials from component-1 data.

use serde_json::json;

use super::form::{derive_form, pf_form, skew_pair, LinearForm};
use crate::error::Result;
use crate::exactalg::{Derivation, DerivationWord, RingElem};
use crate::moments::tau::{Sym, SymList};
use crate::moments::{MultiIndex, TauEngine};
use crate::report::VerificationReport;

pub struct SopPair {
    /// `d_n p_{2n} = pf(0,…,2n,x)`
    pub even: LinearForm,
    /// `d_n p_{2n+1} = pf(0,…,2n−1,2n+1,x)`
    pub odd: LinearForm,
}

fn syms(degs: impl IntoIterator<Item = u32>) -> SymList {
    degs.into_iter().map(|d| Sym::new(1, d)).collect()
}

pub fn sop_pair(engine: &TauEngine, n: u32) -> Result<SopPair> {
    let even = pf_form(engine, &syms(0..=2 * n), 2 * n as usize + 1, 0)?;
    let odd = pf_form(engine, &syms((0..2 * n).chain([2 * n + 1])), 2 * n as usize + 2, 0)?;
    Ok(SopPair { even, odd })
}

fn tau1(engine: &TauEngine, n2: i64) -> Result<RingElem> {
    engine.tau_at(n2, 0)
}

/// The forms for `n` and the reports of every check at level `n`: skew
/// orthogonality against all lower levels, the diagonal pairing, the spectral
/// relation (generic only) and the auxiliary second-flow identity.
pub fn sop_reduce(engine: &TauEngine, n: u32) -> Result<(SopPair, Vec<VerificationReport>)> {
    let alg = engine.algebra();
    let hash = alg.instance_hash();
    let pair = sop_pair(engine, n)?;
    let mut reports = Vec::new();
    let mut push = |check: &str, extra: serde_json::Value, residual: &RingElem| {
        let mut params = json!({"check": check, "n": n});
        if let serde_json::Value::Object(m) = extra {
            for (k, v) in m {
                params[k] = v;
            }
        }
        reports.push(VerificationReport::from_residual("sop-dkp", params, residual, hash));
    };

    for m in 0..=n {
        let other = sop_pair(engine, m)?;
        push("even-even", json!({"m": m}), &skew_pair(alg, &pair.even, &other.even)?);
        push("odd-odd", json!({"m": m}), &skew_pair(alg, &pair.odd, &other.odd)?);
        let eo = skew_pair(alg, &pair.even, &other.odd)?;
        let oe = skew_pair(alg, &other.even, &pair.odd)?;
        if m == n {
            let diag = tau1(engine, 2 * n as i64)?.mul(&tau1(engine, 2 * n as i64 + 2)?);
            push("even-odd", json!({"m": m}), &eo.sub(&diag));
        } else {
            push("even-odd", json!({"m": m}), &eo);
            push("odd-even", json!({"m": m}), &oe);
        }
    }

    if alg.is_generic() {
        let lhs = derive_form(alg, &pair.even, Derivation::T(1))?;
        push("spectral", json!({}), &lhs.sub(&pair.odd).to_ring_elem());
    }

    if n >= 1 {
        // (∂_{t2} + ∂_{t1}²) τ_{2n} = 2 pf(0,…,2n−2,2n+1)
        let v = MultiIndex::new(2 * n, 0);
        let d2 = engine.tau_derivative(v, &DerivationWord::single(Derivation::T(2)))?;
        let d11 = engine.tau_derivative(v, &DerivationWord::power(Derivation::T(1), 2))?;
        let rhs = engine.pf(&syms((0..=2 * n - 2).chain([2 * n + 1])))?;
        push("auxiliary", json!({}), &d2.add(&d11).sub(&rhs.scale(&2.into())));
    }
    Ok((pair, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{make_instance, InstanceSpec};

    #[test]
    fn level_zero_is_weight() {
        let alg = make_instance(&InstanceSpec::generic([4, 0])).unwrap();
        let e = TauEngine::new(&alg);
        let p = sop_pair(&e, 0).unwrap();
        assert_eq!(p.even.c1, vec![RingElem::one()]);
    }

    #[test]
    fn levels_pass() {
        let alg = make_instance(&InstanceSpec::generic([8, 0])).unwrap();
        let e = TauEngine::new(&alg);
        for n in 0..=2 {
            let (_, reps) = sop_reduce(&e, n).unwrap();
            for r in reps {
                assert!(r.passed(), "{r:?}");
            }
        }
    }
}
