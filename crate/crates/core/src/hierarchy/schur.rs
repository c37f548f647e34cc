//! Generating-function coefficients `p_k` of `exp(Σ t_j z^j)`, operator
//! polynomials in the flows, and Miwa-shift expansions of tau.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::error::Result;
use crate::exactalg::{Derivation, DerivationWord, Generator, GeneratorKind, Rational, RingElem};
use crate::moments::tau::{Sym, SymList};
use crate::moments::{MultiIndex, TauEngine};
use crate::report::VerificationReport;

/// What the slots `(z_1, z_2, …)` of `p_k` stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurVariables {
    /// Free slots `z_j = Generator::var(j)`.
    Formal,
    /// `z_j = sign · ∂_j / j` along the flows of one component.
    Flow { comp: u8, sign: i8 },
}

/// `p_k` in the formal slots, by `k p_k = Σ_{j=1..k} j z_j p_{k−j}`.
pub fn schur_p_formal(k: i64) -> RingElem {
    if k < 0 {
        return RingElem::zero();
    }
    let mut p = vec![RingElem::one()];
    for n in 1..=k as usize {
        let mut acc = RingElem::zero();
        for j in 1..=n {
            let zj = RingElem::generator(Generator::var(j as u32));
            acc = acc.add(&zj.mul(&p[n - j]).scale(&Rational::from_int(j as i64)));
        }
        p.push(acc.scale(&Rational::new(1, n as i64)));
    }
    p.pop().unwrap()
}

/// `p_k(vars)`; the formal case is returned as an operator in `t` letters
/// with unit weights so both cases share one type. Use [`schur_p_formal`] for
/// the plain polynomial.
pub fn schur_p(k: i64, vars: SchurVariables) -> OpPoly {
    let (comp, sign, weighted) = match vars {
        SchurVariables::Formal => (1, 1, false),
        SchurVariables::Flow { comp, sign } => (comp, sign, true),
    };
    let poly = schur_p_formal(k);
    let mut out = OpPoly::zero();
    for (m, c) in poly.terms() {
        let mut letters = Vec::new();
        let mut coef = c.clone();
        for g in m.generators() {
            let GeneratorKind::Var(j) = g.kind() else { unreachable!("slot generator") };
            letters.push(Derivation::of_component(comp, j));
            if weighted {
                coef = coef * Rational::new(sign as i64, j as i64);
            }
        }
        out.add_term(DerivationWord::new(letters), &coef);
    }
    out
}

/// `p_k(sign · ∂̃)` along component `comp`.
pub fn schur_operator(k: i64, comp: u8, sign: i8) -> OpPoly {
    schur_p(k, SchurVariables::Flow { comp, sign })
}

/// Polynomial in commuting letters (flows or Hirota operators) with rational
/// coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OpPoly(BTreeMap<DerivationWord, Rational>);

impl OpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(DerivationWord::empty())
    }

    pub fn word(w: DerivationWord) -> Self {
        let mut p = Self::zero();
        p.add_term(w, &Rational::one());
        p
    }

    pub fn letter(d: Derivation) -> Self {
        Self::word(DerivationWord::single(d))
    }

    pub fn power(d: Derivation, e: u32) -> Self {
        Self::word(DerivationWord::power(d, e))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivationWord, &Rational)> {
        self.0.iter()
    }

    pub fn add_term(&mut self, w: DerivationWord, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &OpPoly) -> OpPoly {
        let mut out = self.clone();
        for (w, c) in &other.0 {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> OpPoly {
        let mut out = OpPoly::zero();
        for (w, d) in &self.0 {
            out.add_term(w.clone(), &(d * c));
        }
        out
    }

    pub fn mul(&self, other: &OpPoly) -> OpPoly {
        let mut out = OpPoly::zero();
        for (a, c) in &self.0 {
            for (b, d) in &other.0 {
                out.add_term(a.concat(b), &(c * d));
            }
        }
        out
    }

    /// Largest number of letters in a term.
    pub fn degree(&self) -> usize {
        self.0.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// `Σ c_w ∂^w τ` at a signed index (zero off the lattice).
    pub fn apply_tau(&self, engine: &TauEngine, v1: i64, v2: i64) -> Result<RingElem> {
        if v1 < 0 || v2 < 0 || self.is_zero() {
            return Ok(RingElem::zero());
        }
        let v = MultiIndex::new(v1 as u32, v2 as u32);
        let mut acc = crate::exactalg::Accumulator::new();
        for (w, c) in &self.0 {
            acc.add_elem(&*engine.tau_derivative(v, w)?, c);
        }
        Ok(acc.finish())
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if !w.is_empty() {
                write!(f, "*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `p_k(sign · ∂̃)` along `comp`, applied to `τ_v`.
pub fn apply_schur_derivation(engine: &TauEngine, v: MultiIndex, k: i64, comp: u8, sign: i8) -> Result<RingElem> {
    schur_operator(k, comp, sign).apply_tau(engine, v.v1 as i64, v.v2 as i64)
}

/// Symbols of `τ_w` with `(w_c − k)^{(c)}` removed and `w_c^{(c)}` appended,
/// or `None` for `k > w_c` (the minor vanishes).
pub fn miwa_minor_list(w: MultiIndex, comp: u8, k: u32) -> Option<SymList> {
    let top = w.comp(comp);
    if k > top {
        return None;
    }
    let hole = top - k;
    let mut out = SymList::new();
    for c in 1..=2u8 {
        let n = if c == comp { top + 1 } else { w.comp(c) };
        out.extend((0..n).filter(|&d| c != comp || d != hole).map(|d| Sym::new(c, d)));
    }
    Some(out)
}

/// Expected value of `p_k(−∂̃)τ_w`: `(−1)^k` times the hatted minor.
pub fn miwa_minor_value(engine: &TauEngine, w: MultiIndex, comp: u8, k: u32) -> Result<RingElem> {
    match miwa_minor_list(w, comp, k) {
        None => Ok(RingElem::zero()),
        Some(list) => {
            let v = engine.pf(&list)?;
            Ok(if k % 2 == 1 { v.neg() } else { v })
        }
    }
}

/// One report per `k = 0..=max_k` for `p_k(−∂̃)τ_w` against the hatted minor.
pub fn verify_miwa_minor(engine: &TauEngine, w: MultiIndex, comp: u8, max_k: u32) -> Result<Vec<VerificationReport>> {
    let hash = engine.algebra().instance_hash();
    let mut out = Vec::new();
    for k in 0..=max_k {
        let lhs = apply_schur_derivation(engine, w, k as i64, comp, -1)?;
        let residual = lhs.sub(&miwa_minor_value(engine, w, comp, k)?);
        let params = json!({"check": "minor", "v": [w.v1, w.v2], "comp": comp, "k": k});
        out.push(VerificationReport::from_residual("miwa", params, &residual, hash));
    }
    Ok(out)
}

/// Coefficients of `d·R_v` against the Miwa expansion:
/// `x^{v1−1−ℓ}ω1 ↦ (−1)^{v1−1} p_ℓ(−∂̃_t)τ_{(v1−1,v2)}` and
/// `x^{v2−1−ℓ}ω2 ↦ p_ℓ(−∂̃_s)τ_{(v1,v2−1)}`.
pub fn miwa_form_residual(engine: &TauEngine, v: MultiIndex) -> Result<RingElem> {
    let form = crate::msop::linear_form_r(engine, v)?;
    let mut residual = RingElem::zero();
    for comp in 1..=2u8 {
        let vc = v.comp(comp);
        if vc == 0 {
            continue;
        }
        let (base, sign) = if comp == 1 {
            (MultiIndex::new(v.v1 - 1, v.v2), if (v.v1 - 1) % 2 == 0 { 1 } else { -1 })
        } else {
            (MultiIndex::new(v.v1, v.v2 - 1), 1)
        };
        for l in 0..vc {
            let want = apply_schur_derivation(engine, base, l as i64, comp, -1)?.scale(&Rational::from_int(sign));
            let have = form.coef(comp, (vc - 1 - l) as usize);
            let diff = have.sub(&want);
            residual = residual.add(&diff.mul(&RingElem::generator(Generator::basis(comp, vc - 1 - l))));
        }
    }
    Ok(residual)
}

pub fn verify_miwa_form(engine: &TauEngine, v: MultiIndex) -> Result<VerificationReport> {
    let residual = miwa_form_residual(engine, v)?;
    let params = json!({"check": "form-expansion", "v": [v.v1, v.v2]});
    Ok(VerificationReport::from_residual("miwa", params, &residual, engine.algebra().instance_hash()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{make_instance, InstanceSpec};

    fn z(j: u32) -> RingElem {
        RingElem::generator(Generator::var(j))
    }

    #[test]
    fn low_orders() {
        assert_eq!(schur_p_formal(-1), RingElem::zero());
        assert_eq!(schur_p_formal(0), RingElem::one());
        assert_eq!(schur_p_formal(1), z(1));
        let p2 = z(1).mul(&z(1)).scale(&Rational::new(1, 2)).add(&z(2));
        assert_eq!(schur_p_formal(2), p2);
    }

    #[test]
    fn matches_exponential_series() {
        // coefficients of exp(Σ z_j x^j) truncated at x^5, via exp(y) = Σ y^n / n!
        let order = 5usize;
        let mut xi = vec![RingElem::zero(); order + 1];
        for j in 1..=order {
            xi[j] = z(j as u32);
        }
        let mut total = vec![RingElem::zero(); order + 1];
        total[0] = RingElem::one();
        let mut power = total.clone();
        let mut fact = 1i64;
        for n in 1..=order {
            let mut next = vec![RingElem::zero(); order + 1];
            for a in 0..=order {
                for b in 1..=order - a {
                    next[a + b] = next[a + b].add(&power[a].mul(&xi[b]));
                }
            }
            power = next;
            fact *= n as i64;
            for k in 0..=order {
                total[k] = total[k].add(&power[k].scale(&Rational::new(1, fact)));
            }
        }
        for k in 0..=order {
            assert_eq!(schur_p_formal(k as i64), total[k], "k={k}");
        }
    }

    #[test]
    fn schur_derivation_examples() {
        let alg = make_instance(&InstanceSpec::generic([6, 6])).unwrap();
        let e = TauEngine::new(&alg);
        let v = MultiIndex::new(1, 1);
        assert_eq!(apply_schur_derivation(&e, v, 0, 1, -1).unwrap(), e.tau(v).unwrap());
        let d1 = e.tau_derivative(v, &DerivationWord::single(Derivation::T(1))).unwrap();
        assert_eq!(apply_schur_derivation(&e, v, 1, 1, -1).unwrap(), d1.neg());
        let d11 = e.tau_derivative(v, &DerivationWord::power(Derivation::T(1), 2)).unwrap();
        let d2 = e.tau_derivative(v, &DerivationWord::single(Derivation::T(2))).unwrap();
        let half = Rational::new(1, 2);
        assert_eq!(apply_schur_derivation(&e, v, 2, 1, -1).unwrap(), d11.scale(&half).sub(&d2.scale(&half)));
    }

    #[test]
    fn minors_small() {
        let alg = make_instance(&InstanceSpec::generic([9, 9])).unwrap();
        let e = TauEngine::new(&alg);
        for w in [(0, 0), (2, 0), (1, 1), (2, 2), (0, 4), (3, 1)] {
            for comp in 1..=2 {
                let reps = verify_miwa_minor(&e, MultiIndex::new(w.0, w.1), comp, 4).unwrap();
                for r in reps {
                    assert!(r.passed(), "{r:?}");
                }
            }
        }
    }

    #[test]
    fn form_expansion_small() {
        let alg = make_instance(&InstanceSpec::generic([8, 8])).unwrap();
        let e = TauEngine::new(&alg);
        for v in [(1, 0), (0, 1), (2, 1), (1, 2), (3, 2), (2, 3), (5, 0)] {
            let r = miwa_form_residual(&e, MultiIndex::new(v.0, v.1)).unwrap();
            assert!(r.is_zero(), "{v:?}: {r}");
        }
    }
}
