//! Hirota bilinear derivatives of tau functions.

use std::collections::BTreeMap;
use std::fmt;

use super::schur::OpPoly;
use crate::error::Result;
use crate::exactalg::{Accumulator, DerivationWord, Rational, RingElem};
use crate::moments::{MultiIndex, TauEngine};

/// `D^α` with `α` an exponent map over `D_{t_n}`, `D_{s_n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HirotaMonomial(pub DerivationWord);

impl HirotaMonomial {
    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for HirotaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[{}]", self.0)
    }
}

impl fmt::Debug for HirotaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Tau at a signed lattice point; off-lattice points are the zero function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TauRef(pub i64, pub i64);

impl TauRef {
    fn deriv(self, engine: &TauEngine, w: &DerivationWord) -> Result<Option<std::rc::Rc<RingElem>>> {
        if self.0 < 0 || self.1 < 0 {
            return Ok(None);
        }
        Ok(Some(engine.tau_derivative(MultiIndex::new(self.0 as u32, self.1 as u32), w)?))
    }
}

/// `P(D) F·G` for an operator polynomial `P` in Hirota letters, from ordinary
/// derivatives supplied by `df`/`dg`. Terms are grouped by the derivative on
/// `F` so each one is multiplied once.
pub fn hirota_with<F, G>(poly: &OpPoly, mut df: F, mut dg: G) -> Result<RingElem>
where
    F: FnMut(&DerivationWord) -> Result<Option<RingElem>>,
    G: FnMut(&DerivationWord) -> Result<Option<RingElem>>,
{
    let mut grouped: BTreeMap<DerivationWord, BTreeMap<DerivationWord, Rational>> = BTreeMap::new();
    for (alpha, c) in poly.terms() {
        for (beta, gamma, binom) in alpha.splittings() {
            let sign = if gamma.len() % 2 == 0 { 1 } else { -1 };
            let e = grouped.entry(beta).or_default().entry(gamma).or_insert_with(Rational::zero);
            *e += &(c * &Rational::from_int(sign * binom as i64));
        }
    }
    let mut acc = Accumulator::new();
    for (beta, inner) in grouped {
        let mut gsum = Accumulator::new();
        for (gamma, c) in inner {
            if c.is_zero() {
                continue;
            }
            if let Some(g) = dg(&gamma)? {
                gsum.add_elem(&g, &c);
            }
        }
        let gsum = gsum.finish();
        if gsum.is_zero() {
            continue;
        }
        if let Some(f) = df(&beta)? {
            acc.add_product(&f, &gsum, &Rational::one());
        }
    }
    Ok(acc.finish())
}

/// `P(D) τ_F·τ_G`.
pub fn hirota_poly(engine: &TauEngine, poly: &OpPoly, f: TauRef, g: TauRef) -> Result<RingElem> {
    hirota_with(
        poly,
        |w| Ok(f.deriv(engine, w)?.map(|r| (*r).clone())),
        |w| Ok(g.deriv(engine, w)?.map(|r| (*r).clone())),
    )
}

/// `D^α τ_F·τ_G = Σ_{β≤α} (−1)^{|α−β|} C(α,β) ∂^β τ_F ∂^{α−β} τ_G`.
pub fn hirota_eval(engine: &TauEngine, mono: &HirotaMonomial, f: TauRef, g: TauRef) -> Result<RingElem> {
    hirota_poly(engine, &OpPoly::word(mono.0.clone()), f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{extend_word, Derivation, Generator, RuleTable};
    use crate::moments::{make_instance, InstanceSpec};

    fn var(i: u32) -> RingElem {
        RingElem::generator(Generator::var(i))
    }

    #[test]
    fn first_orders() {
        let alg = make_instance(&InstanceSpec::generic([6, 6])).unwrap();
        let e = TauEngine::new(&alg);
        let (f, g) = (TauRef(1, 1), TauRef(2, 0));
        let t1 = DerivationWord::single(Derivation::T(1));
        let d = |r: TauRef, w: &DerivationWord| (*r.deriv(&e, w).unwrap().unwrap()).clone();
        let empty = DerivationWord::empty();
        let expect = d(f, &t1).mul(&d(g, &empty)).sub(&d(f, &empty).mul(&d(g, &t1)));
        assert_eq!(hirota_eval(&e, &HirotaMonomial(t1.clone()), f, g).unwrap(), expect);
        assert!(hirota_eval(&e, &HirotaMonomial(t1.clone()), f, f).unwrap().is_zero());
        let t11 = DerivationWord::power(Derivation::T(1), 2);
        let expect = d(f, &t11).mul(&d(f, &empty)).sub(&d(f, &t1).mul(&d(f, &t1))).scale(&2.into());
        assert_eq!(hirota_eval(&e, &HirotaMonomial(t11), f, f).unwrap(), expect);
    }

    /// Shift definition: `D^α F·G = ∂_y^α F(x+y) G(x−y) |_{y=0}` on explicit
    /// polynomials, compared with the Leibniz expansion up to order 3.
    #[test]
    fn matches_two_point_expansion() {
        // x-variables 1..3 carry t1, t2, s1; offsets y are variables 11..13
        let letters = [Derivation::T(1), Derivation::T(2), Derivation::S(1)];
        let mut rules = RuleTable::new();
        for (i, &d) in letters.iter().enumerate() {
            for j in 0..3usize {
                let img = if i == j { RingElem::one() } else { RingElem::zero() };
                rules.set(Generator::var(j as u32 + 1), d, img);
            }
        }
        let x = |i: u32| var(i);
        let f = x(1).pow(3).add(&x(1).mul(&x(2)).scale(&3.into())).add(&x(3).mul(&x(1)).mul(&x(2))).add(&x(3).pow(2));
        let g = x(2).pow(2).sub(&x(1).mul(&x(3)).scale(&2.into())).add(&x(1).pow(2).mul(&x(3))).add(&RingElem::from_int(5));

        let shift = |p: &RingElem, s: i64| {
            p.substitute(&|gen| {
                let crate::exactalg::GeneratorKind::Var(i) = gen.kind() else { return None };
                (1..=3).contains(&i).then(|| var(i).add(&var(i + 10).scale(&s.into())))
            })
        };
        let product = shift(&f, 1).mul(&shift(&g, -1));
        let mut yrules = RuleTable::new();
        for (i, &d) in letters.iter().enumerate() {
            for j in 0..3u32 {
                let img = if i as u32 == j { RingElem::one() } else { RingElem::zero() };
                yrules.set(Generator::var(j + 11), d, img);
                yrules.set(Generator::var(j + 1), d, RingElem::zero());
            }
        }
        let at_zero = |p: &RingElem| {
            p.substitute(&|gen| {
                let crate::exactalg::GeneratorKind::Var(i) = gen.kind() else { return None };
                (11..=13).contains(&i).then(RingElem::zero)
            })
        };

        let mut words = vec![DerivationWord::empty()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &words {
                for &d in &letters {
                    next.push(w.push(d));
                }
            }
            next.sort();
            next.dedup();
            words.extend(next.iter().cloned());
            words.sort();
            words.dedup();
        }
        for w in words {
            let direct = at_zero(&extend_word(&yrules, &w, &product).unwrap());
            let via = hirota_with(
                &OpPoly::word(w.clone()),
                |b| Ok(Some(extend_word(&rules, b, &f)?)),
                |c| Ok(Some(extend_word(&rules, c, &g)?)),
            )
            .unwrap();
            assert_eq!(direct, via, "{w}");
        }
    }
}
