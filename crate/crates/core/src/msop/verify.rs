//! Skew orthogonality, derivative relations and the four recurrences, all
//! multiplied through by the normalization factors.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::form::{derive_form, linear_form_r, linear_form_rtilde, skew_pair, LinearForm};
use crate::error::{Error, Result};
use crate::exactalg::{Derivation, DerivationWord, RingElem};
use crate::moments::{MultiIndex, TauEngine};
use crate::report::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recurrence {
    Sub1,
    Sub2,
    Sub3,
    Sub4,
}

impl Recurrence {
    pub const ALL: [Recurrence; 4] = [Recurrence::Sub1, Recurrence::Sub2, Recurrence::Sub3, Recurrence::Sub4];

    pub fn name(self) -> &'static str {
        match self {
            Recurrence::Sub1 => "sub1",
            Recurrence::Sub2 => "sub2",
            Recurrence::Sub3 => "sub3",
            Recurrence::Sub4 => "sub4",
        }
    }
}

/// Which pairing a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingCase {
    /// `⟨R_v, R_u⟩`
    Plain,
    /// `⟨R_v, R̃^{(1)}_u⟩`
    Tilde1,
    /// `⟨R_v, R̃^{(2)}_u⟩`
    Tilde2,
}

fn idx(v: MultiIndex) -> serde_json::Value {
    json!([v.v1, v.v2])
}

/// Form `d·R` at a signed index; negative components give the zero form.
pub fn form_at(engine: &TauEngine, v1: i64, v2: i64) -> Result<LinearForm> {
    if v1 < 0 || v2 < 0 {
        return Ok(LinearForm::default());
    }
    linear_form_r(engine, MultiIndex::new(v1 as u32, v2 as u32))
}

/// `d·R̃^{(b)}` at a signed index; zero when the `b` component is not positive.
pub fn tilde_at(engine: &TauEngine, v1: i64, v2: i64, b: u8) -> Result<LinearForm> {
    let vb = if b == 1 { v1 } else { v2 };
    if v1 < 0 || v2 < 0 || vb == 0 {
        return Ok(LinearForm::default());
    }
    linear_form_rtilde(engine, MultiIndex::new(v1 as u32, v2 as u32), b)
}

fn tau_deriv_at(engine: &TauEngine, v1: i64, v2: i64, d: Derivation) -> Result<RingElem> {
    if v1 < 0 || v2 < 0 {
        return Ok(RingElem::zero());
    }
    Ok((*engine.tau_derivative(MultiIndex::new(v1 as u32, v2 as u32), &DerivationWord::single(d))?).clone())
}

/// Expected value of one pairing, or `None` where nothing is claimed.
///
/// Plain pairings vanish for comparable indices (for incomparable ones the
/// lower-degree form is not in the orthogonal span and the pairing is generally
/// nonzero). Tilde pairings vanish when every symbol of `R̃_u` lies in the index
/// set of `v`, and equal a tau product on the diagonal.
pub fn expected_pairing(engine: &TauEngine, v: MultiIndex, u: MultiIndex, case: PairingCase) -> Result<Option<RingElem>> {
    let (v1, v2) = (v.v1 as i64, v.v2 as i64);
    match case {
        PairingCase::Plain => Ok((u.le(v) || v.le(u)).then(RingElem::zero)),
        PairingCase::Tilde1 => {
            if u.v1 == 0 {
                return Ok(None);
            }
            if u == v {
                return Ok(Some(engine.tau_at(v1 - 1, v2)?.mul(&engine.tau_at(v1 + 1, v2)?)));
            }
            Ok((u.v1 < v.v1 && u.v2 <= v.v2).then(RingElem::zero))
        }
        PairingCase::Tilde2 => {
            if u.v2 == 0 {
                return Ok(None);
            }
            if u == v {
                return Ok(Some(engine.tau_at(v1, v2 - 1)?.mul(&engine.tau_at(v1, v2 + 1)?)));
            }
            Ok((u.v1 <= v.v1 && u.v2 < v.v2).then(RingElem::zero))
        }
    }
}

/// All claimed pairings between `v` and `u`, one report each.
pub fn verify_skew_orthogonality(engine: &TauEngine, v: MultiIndex, u: MultiIndex) -> Result<Vec<VerificationReport>> {
    for w in [v, u] {
        if w.total() % 2 == 0 {
            return Err(Error::EvenParity(w.v1, w.v2));
        }
    }
    let alg = engine.algebra();
    let rv = linear_form_r(engine, v)?;
    let mut out = Vec::new();
    for case in [PairingCase::Plain, PairingCase::Tilde1, PairingCase::Tilde2] {
        let Some(expected) = expected_pairing(engine, v, u, case)? else {
            continue;
        };
        let g = match case {
            PairingCase::Plain => linear_form_r(engine, u)?,
            PairingCase::Tilde1 => linear_form_rtilde(engine, u, 1)?,
            PairingCase::Tilde2 => linear_form_rtilde(engine, u, 2)?,
        };
        let residual = skew_pair(alg, &rv, &g)?.sub(&expected);
        let params = json!({"check": "pairing", "case": case, "v": idx(v), "u": idx(u)});
        out.push(VerificationReport::from_residual("orthogonality", params, &residual, alg.instance_hash()));
    }
    Ok(out)
}

/// `∂_{t1} d·R_v = d·R̃^{(1)}_v` (b = 1) or `∂_{s1} d·R_v = d·R̃^{(2)}_v` (b = 2).
pub fn derivative_relation_residual(engine: &TauEngine, v: MultiIndex, b: u8) -> Result<LinearForm> {
    let alg = engine.algebra();
    let r = linear_form_r(engine, v)?;
    let lhs = derive_form(alg, &r, Derivation::of_component(b, 1))?;
    let rhs = tilde_at(engine, v.v1 as i64, v.v2 as i64, b)?;
    Ok(lhs.sub(&rhs))
}

pub fn verify_derivative_relation(engine: &TauEngine, v: MultiIndex, b: u8) -> Result<VerificationReport> {
    let residual = derivative_relation_residual(engine, v, b)?;
    let params = json!({"check": "derive-form", "v": idx(v), "b": b});
    Ok(VerificationReport::from_residual("derivative-relations", params, &residual.to_ring_elem(), engine.algebra().instance_hash()))
}

/// Left minus right side of a recurrence, as a linear form.
pub fn recurrence_residual(engine: &TauEngine, v: MultiIndex, eq: Recurrence) -> Result<LinearForm> {
    if v.total() % 2 == 0 {
        return Err(Error::EvenParity(v.v1, v.v2));
    }
    let (a, b) = (v.v1 as i64, v.v2 as i64);
    let tau = |x: i64, y: i64| engine.tau_at(x, y);
    let form = |x: i64, y: i64| form_at(engine, x, y);
    let pv = linear_form_r(engine, v)?;
    let (lhs, rhs) = match eq {
        Recurrence::Sub1 => {
            let lhs = form(a + 1, b + 1)?.scale(&tau(a, b - 1)?);
            let rhs = tilde_at(engine, a, b, 2)?
                .scale(&tau(a + 1, b)?)
                .sub(&pv.scale(&tau_deriv_at(engine, a + 1, b, Derivation::S(1))?))
                .add(&form(a + 1, b - 1)?.scale(&tau(a, b + 1)?));
            (lhs, rhs)
        }
        Recurrence::Sub2 => {
            let lhs = form(a + 1, b + 1)?.scale(&tau(a - 1, b)?);
            let rhs = form(a - 1, b + 1)?
                .scale(&tau(a + 1, b)?)
                .sub(&tilde_at(engine, a, b, 1)?.scale(&tau(a, b + 1)?))
                .add(&pv.scale(&tau_deriv_at(engine, a, b + 1, Derivation::T(1))?));
            (lhs, rhs)
        }
        Recurrence::Sub3 => {
            let lhs = pv.scale(&tau_deriv_at(engine, a, b - 1, Derivation::T(1))?);
            let rhs = tilde_at(engine, a, b, 1)?
                .scale(&tau(a, b - 1)?)
                .add(&form(a + 1, b - 1)?.scale(&tau(a - 1, b)?))
                .sub(&form(a - 1, b - 1)?.scale(&tau(a + 1, b)?));
            (lhs, rhs)
        }
        Recurrence::Sub4 => {
            let lhs = pv.scale(&tau_deriv_at(engine, a - 1, b, Derivation::S(1))?);
            let rhs = tilde_at(engine, a, b, 2)?
                .scale(&tau(a - 1, b)?)
                .sub(&form(a - 1, b + 1)?.scale(&tau(a, b - 1)?))
                .add(&form(a - 1, b - 1)?.scale(&tau(a, b + 1)?));
            (lhs, rhs)
        }
    };
    Ok(lhs.sub(&rhs))
}

pub fn verify_recurrence(engine: &TauEngine, v: MultiIndex, eq: Recurrence) -> Result<VerificationReport> {
    let residual = recurrence_residual(engine, v, eq)?;
    let params = json!({"eq": eq.name(), "v": idx(v)});
    Ok(VerificationReport::from_residual("recurrences", params, &residual.to_ring_elem(), engine.algebra().instance_hash()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{make_instance, InstanceSpec, MomentAlgebra};

    fn generic() -> MomentAlgebra {
        make_instance(&InstanceSpec::generic([9, 9])).unwrap()
    }

    #[test]
    fn orthogonality_examples() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        let w = MultiIndex::new(1, 0);
        assert!(verify_skew_orthogonality(&e, w, w).unwrap().iter().all(|r| r.passed()));
        let reps = verify_skew_orthogonality(&e, MultiIndex::new(2, 3), MultiIndex::new(2, 1)).unwrap();
        assert!(reps.iter().all(|r| r.passed()));
        assert!(reps.iter().any(|r| r.params["case"] == "tilde2"));
        let reps = verify_skew_orthogonality(&e, MultiIndex::new(2, 1), MultiIndex::new(2, 1)).unwrap();
        assert_eq!(reps.len(), 3);
        assert!(reps.iter().all(|r| r.passed()));
    }

    #[test]
    fn incomparable_plain_pairing_is_nonzero() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        let a = linear_form_r(&e, MultiIndex::new(1, 0)).unwrap();
        let b = linear_form_r(&e, MultiIndex::new(0, 1)).unwrap();
        assert!(!skew_pair(&alg, &a, &b).unwrap().is_zero());
        assert!(expected_pairing(&e, MultiIndex::new(1, 0), MultiIndex::new(0, 1), PairingCase::Plain).unwrap().is_none());
    }

    #[test]
    fn recurrence_examples() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        for (v, eq) in [((1, 2), Recurrence::Sub1), ((2, 1), Recurrence::Sub3), ((1, 2), Recurrence::Sub4), ((0, 1), Recurrence::Sub2)] {
            let r = recurrence_residual(&e, MultiIndex::new(v.0, v.1), eq).unwrap();
            assert!(r.is_zero(), "{eq:?} at {v:?}: {r}");
        }
    }

    #[test]
    fn derivative_relations_small() {
        let alg = generic();
        let e = TauEngine::new(&alg);
        for v in [(1, 0), (0, 1), (2, 1), (1, 2), (3, 2)] {
            for b in 1..=2 {
                let r = derivative_relation_residual(&e, MultiIndex::new(v.0, v.1), b).unwrap();
                assert!(r.is_zero(), "{v:?} b={b}: {r}");
            }
        }
    }
}
