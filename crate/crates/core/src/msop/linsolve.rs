//! Linear-solve construction of MSOPs on concrete instances, used as an
//! oracle for the Pfaffian forms, and the bordered-determinant form.

use serde_json::json;

use super::form::{linear_form_r, linear_form_rtilde, tilde_list, LinearForm};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{nullspace, Matrix};
use crate::exactalg::{MomentKey, Rational, RingElem};
use crate::moments::tau::{index_list, Sym};
use crate::moments::{MomentAlgebra, MultiIndex, TauEngine};
use crate::pfaffian::determinant;
use crate::report::{Status, VerificationReport};

fn concrete(alg: &MomentAlgebra, s: Sym, t: Sym) -> Result<Rational> {
    alg.check_degree(s.comp(), s.deg())?;
    alg.check_degree(t.comp(), t.deg())?;
    Ok(alg.concrete_value(MomentKey::new(s.comp(), t.comp(), s.deg(), t.deg())).unwrap_or_else(Rational::zero))
}

fn require_concrete(alg: &MomentAlgebra) -> Result<()> {
    if alg.is_generic() {
        return Err(Error::InvalidSpec("linear-solve oracle needs a concrete instance".into()));
    }
    Ok(())
}

fn form_from(basis: &[Sym], coeffs: &[Rational]) -> LinearForm {
    let mut f = LinearForm::default();
    for (s, c) in basis.iter().zip(coeffs) {
        let slot = f.comp_mut(s.comp());
        if slot.len() <= s.deg() as usize {
            slot.resize(s.deg() as usize + 1, RingElem::zero());
        }
        slot[s.deg() as usize] = RingElem::constant(c.clone());
    }
    f
}

/// One-dimensional kernel of `rows × basis`, scaled so the coefficient at `pin` is 1.
fn solve_kernel(alg: &MomentAlgebra, rows: &[Sym], basis: &[Sym], extra: Option<Vec<Rational>>, pin: usize) -> Result<Vec<Rational>> {
    let mut a: Matrix = Vec::new();
    for &s in rows {
        // ⟨basis_t, y^j ω_k⟩ for the test function s = j^{(k)}
        a.push(basis.iter().map(|&t| concrete(alg, t, s)).collect::<Result<_>>()?);
    }
    if let Some(row) = extra {
        a.push(row);
    }
    let ker = nullspace(&a, basis.len());
    if ker.len() != 1 {
        return Err(Error::DegenerateInstance(format!("kernel dimension {} (expected 1)", ker.len())));
    }
    let v = &ker[0];
    let lead = v[pin].clone();
    let inv = lead.recip().ok_or_else(|| Error::DegenerateInstance("leading coefficient vanishes".into()))?;
    Ok(v.iter().map(|c| c * &inv).collect())
}

/// `R_v` normalized so that the coefficient of `x^{v_b−1} ω_b` is 1.
pub fn msop_via_linsolve(alg: &MomentAlgebra, v: MultiIndex, b: u8) -> Result<LinearForm> {
    require_concrete(alg)?;
    if v.total() % 2 == 0 {
        return Err(Error::EvenParity(v.v1, v.v2));
    }
    let vb = v.comp(b);
    if vb == 0 {
        return Err(Error::InvalidSpec(format!("component {b} of {v} is empty")));
    }
    let basis = index_list(v);
    let pin = basis.iter().position(|&s| s == Sym::new(b, vb - 1)).expect("top symbol");
    let coeffs = solve_kernel(alg, &basis, &basis, None, pin)?;
    Ok(form_from(&basis, &coeffs))
}

/// `R̃^{(b)}_v`: unknowns on `I ∪ {v_b^{(b)}}`, orthogonal to the shifted index
/// set, with the `x^{v_b−1} ω_b` coefficient pinned to zero and the top one to 1.
pub fn msop_tilde_via_linsolve(alg: &MomentAlgebra, v: MultiIndex, b: u8) -> Result<LinearForm> {
    require_concrete(alg)?;
    if v.total() % 2 == 0 {
        return Err(Error::EvenParity(v.v1, v.v2));
    }
    let rows = tilde_list(v, b)?;
    let vb = v.comp(b);
    let mut basis: Vec<Sym> = index_list(v).to_vec();
    let top = Sym::new(b, vb);
    let at = basis.iter().position(|&s| s > top).unwrap_or(basis.len());
    basis.insert(at, top);
    let drop = basis.iter().position(|&s| s == Sym::new(b, vb - 1)).expect("dropped symbol");
    let pin_row = (0..basis.len()).map(|i| if i == drop { Rational::one() } else { Rational::zero() }).collect();
    let coeffs = solve_kernel(alg, &rows, &basis, Some(pin_row), at)?;
    Ok(form_from(&basis, &coeffs))
}

/// Residual `P − λ·L` where `λ` is the Pfaffian form's coefficient at the
/// pinned slot; `Ok(None)` if that coefficient is zero.
fn proportional(pf: &LinearForm, ls: &LinearForm, comp: u8, deg: usize) -> Option<RingElem> {
    let lambda = pf.coef(comp, deg);
    if lambda.is_zero() {
        return None;
    }
    Some(pf.sub(&ls.scale(&lambda)).to_ring_elem())
}

/// Pfaffian forms against the oracle, for `R` (monic in each populated
/// component) and each `R̃^{(b)}`.
pub fn verify_linsolve_oracle(engine: &TauEngine, v: MultiIndex) -> Result<Vec<VerificationReport>> {
    let alg = engine.algebra();
    let hash = alg.instance_hash();
    let mut out = Vec::new();
    let pf = linear_form_r(engine, v)?;
    for b in 1..=2u8 {
        let vb = v.comp(b);
        if vb == 0 {
            continue;
        }
        let params = json!({"check": "linsolve", "form": "R", "v": [v.v1, v.v2], "b": b});
        out.push(oracle_report(msop_via_linsolve(alg, v, b), &pf, b, vb as usize - 1, params, hash));
        let pft = linear_form_rtilde(engine, v, b)?;
        let params = json!({"check": "linsolve", "form": "Rtilde", "v": [v.v1, v.v2], "b": b});
        out.push(oracle_report(msop_tilde_via_linsolve(alg, v, b), &pft, b, vb as usize, params, hash));
    }
    Ok(out)
}

fn oracle_report(ls: Result<LinearForm>, pf: &LinearForm, b: u8, deg: usize, params: serde_json::Value, hash: &str) -> VerificationReport {
    match ls {
        Ok(ls) => match proportional(pf, &ls, b, deg) {
            Some(res) => VerificationReport::from_residual("mops", params, &res, hash),
            None => VerificationReport::with_status("mops", params, Status::Degenerate, "zero leading coefficient", hash),
        },
        Err(e) => VerificationReport::with_status("mops", params, Status::Degenerate, &e.to_string(), hash),
    }
}

/// Bordered determinant of the defining system: rows are the test functions
/// with `(v_b−1)^{(b)}` removed, the last row the basis functions, times
/// `(−1)^{Σ_{i>b} v_i}`. Returns its coefficients over the basis.
pub fn determinant_form(alg: &MomentAlgebra, v: MultiIndex, b: u8) -> Result<LinearForm> {
    require_concrete(alg)?;
    let vb = v.comp(b);
    if vb == 0 {
        return Err(Error::InvalidSpec(format!("component {b} of {v} is empty")));
    }
    let basis = index_list(v);
    let rows: Vec<Sym> = basis.iter().copied().filter(|&s| s != Sym::new(b, vb - 1)).collect();
    let n = basis.len();
    let mut a: Matrix = Vec::new();
    for &s in &rows {
        a.push(basis.iter().map(|&t| concrete(alg, t, s)).collect::<Result<_>>()?);
    }
    let prefactor = if b == 1 && v.v2 % 2 == 1 { -1 } else { 1 };
    let mut coeffs = Vec::with_capacity(n);
    for col in 0..n {
        let minor: Matrix = a.iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, x)| x.clone()).collect()).collect();
        // cofactor of the last row
        let sign = if (n - 1 + col) % 2 == 0 { prefactor } else { -prefactor };
        coeffs.push(determinant(&minor) * Rational::from_int(sign));
    }
    Ok(form_from(&basis, &coeffs))
}

/// `ε` with `determinant_form(v, b) = ε · τ_{v−e_b} · d·R_v`, or `None` if
/// `τ_{v−e_b}` or `d·R_v` vanishes.
pub fn determinant_sign(engine: &TauEngine, v: MultiIndex, b: u8) -> Result<Option<i64>> {
    let alg = engine.algebra();
    let det = determinant_form(alg, v, b)?;
    let pf = linear_form_r(engine, v)?;
    let (d1, d2) = if b == 1 { (-1, 0) } else { (0, -1) };
    let t = engine.tau_at(v.v1 as i64 + d1, v.v2 as i64 + d2)?;
    let scaled = pf.scale(&t);
    if scaled.is_zero() {
        return Ok(None);
    }
    if det.sub(&scaled).is_zero() {
        Ok(Some(1))
    } else if det.add(&scaled).is_zero() {
        Ok(Some(-1))
    } else {
        Err(Error::DegenerateInstance(format!("determinant form not ±τ·Pf at {v}, b={b}")))
    }
}
