//! Unnormalized MSOP linear forms `d·R`, `d·R̃` and the skew pairing.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{extend_derivation, Accumulator, Derivation, Generator, MomentKey, Rational, RingElem};
use crate::moments::tau::{index_list, Sym, SymList};
use crate::moments::{MomentAlgebra, MultiIndex, TauEngine};

/// `Σ_j c1[j] x^j ω1 + Σ_j c2[j] x^j ω2`.
#[derive(Clone, PartialEq, Default)]
pub struct LinearForm {
    pub c1: Vec<RingElem>,
    pub c2: Vec<RingElem>,
}

impl LinearForm {
    pub fn zero(len1: usize, len2: usize) -> Self {
        LinearForm { c1: vec![RingElem::zero(); len1], c2: vec![RingElem::zero(); len2] }
    }

    /// `x^deg ω_comp`.
    pub fn monomial(comp: u8, deg: u32) -> Self {
        let mut f = LinearForm::default();
        let c = f.comp_mut(comp);
        c.resize(deg as usize + 1, RingElem::zero());
        c[deg as usize] = RingElem::one();
        f
    }

    pub fn comp(&self, c: u8) -> &[RingElem] {
        if c == 1 {
            &self.c1
        } else {
            &self.c2
        }
    }

    pub fn comp_mut(&mut self, c: u8) -> &mut Vec<RingElem> {
        if c == 1 {
            &mut self.c1
        } else {
            &mut self.c2
        }
    }

    /// Coefficient of `x^deg ω_comp`, zero past the stored length.
    pub fn coef(&self, comp: u8, deg: usize) -> RingElem {
        self.comp(comp).get(deg).cloned().unwrap_or_else(RingElem::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c1.iter().chain(&self.c2).all(RingElem::is_zero)
    }

    fn zip(&self, other: &LinearForm, f: impl Fn(&RingElem, &RingElem) -> RingElem) -> LinearForm {
        let mut out = LinearForm::default();
        for c in 1..=2u8 {
            let (a, b) = (self.comp(c), other.comp(c));
            let n = a.len().max(b.len());
            let z = RingElem::zero();
            *out.comp_mut(c) = (0..n).map(|j| f(a.get(j).unwrap_or(&z), b.get(j).unwrap_or(&z))).collect();
        }
        out
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.zip(other, |a, b| a.sub(b))
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale(&self, s: &RingElem) -> LinearForm {
        LinearForm {
            c1: self.c1.iter().map(|c| c.mul(s)).collect(),
            c2: self.c2.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&RingElem) -> RingElem) -> LinearForm {
        LinearForm { c1: self.c1.iter().map(&f).collect(), c2: self.c2.iter().map(&f).collect() }
    }

    /// The form as a single ring element over basis generators `w{c}x{j}`.
    pub fn to_ring_elem(&self) -> RingElem {
        let mut acc = Accumulator::new();
        for c in 1..=2u8 {
            for (j, e) in self.comp(c).iter().enumerate() {
                if !e.is_zero() {
                    acc.add_product(e, &RingElem::generator(Generator::basis(c, j as u32)), &Rational::one());
                }
            }
        }
        acc.finish()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ring_elem())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm({self})")
    }
}

/// `Pf(I, x)` for a sorted odd list `I`; the symbol at position `p` gets `(−1)^p Pf(I∖{s})`.
pub fn pf_form(engine: &TauEngine, list: &[Sym], len1: usize, len2: usize) -> Result<LinearForm> {
    if list.len() % 2 == 0 {
        return Err(Error::OddSize(list.len() + 1));
    }
    let mut f = LinearForm::zero(len1, len2);
    for (p, s) in list.iter().enumerate() {
        let rest: SymList = list.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &t)| t).collect();
        let v = engine.pf_sorted(&rest)?;
        let v = if p % 2 == 0 { (*v).clone() } else { v.neg() };
        let slot = f.comp_mut(s.comp());
        if slot.len() <= s.deg() as usize {
            slot.resize(s.deg() as usize + 1, RingElem::zero());
        }
        slot[s.deg() as usize] = v;
    }
    Ok(f)
}

fn check_odd(v: MultiIndex) -> Result<()> {
    if v.total() % 2 == 0 {
        return Err(Error::EvenParity(v.v1, v.v2));
    }
    Ok(())
}

/// `d·R_v = Pf(0^{(1)},…,(v1−1)^{(1)},0^{(2)},…,(v2−1)^{(2)},x)`.
pub fn linear_form_r(engine: &TauEngine, v: MultiIndex) -> Result<LinearForm> {
    check_odd(v)?;
    pf_form(engine, &index_list(v), v.v1 as usize, v.v2 as usize)
}

/// Symbol list of `R̃^{(b)}_v`: `(v_b−1)^{(b)}` replaced by `v_b^{(b)}`.
pub fn tilde_list(v: MultiIndex, b: u8) -> Result<SymList> {
    let vb = v.comp(b);
    if vb == 0 {
        return Err(Error::InvalidSpec(format!("R̃^({b}) needs a positive component at {v}")));
    }
    let mut list = index_list(v);
    let pos = list.iter().position(|s| *s == Sym::new(b, vb - 1)).expect("top symbol present");
    list[pos] = Sym::new(b, vb);
    Ok(list)
}

/// `d·R̃^{(b)}_v`; the coefficient of `x^{v_b−1} ω_b` is zero.
pub fn linear_form_rtilde(engine: &TauEngine, v: MultiIndex, b: u8) -> Result<LinearForm> {
    check_odd(v)?;
    let list = tilde_list(v, b)?;
    let (l1, l2) = if b == 1 { (v.v1 + 1, v.v2) } else { (v.v1, v.v2 + 1) };
    pf_form(engine, &list, l1 as usize, l2 as usize)
}

/// `⟨f, g⟩ = Σ f_k[i] g_l[j] m^{(k,l)}_{i,j}`.
pub fn skew_pair(alg: &MomentAlgebra, f: &LinearForm, g: &LinearForm) -> Result<RingElem> {
    let mut acc = Accumulator::new();
    let one = Rational::one();
    for k in 1..=2u8 {
        for (i, a) in f.comp(k).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // collect Σ_j g_l[j] m_{i,j} before multiplying by a
            let mut inner = Accumulator::new();
            for l in 1..=2u8 {
                for (j, b) in g.comp(l).iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let m = alg.value(MomentKey::new(k, l, i as u32, j as u32))?;
                    if !m.is_zero() {
                        inner.add_product(&m, b, &one);
                    }
                }
            }
            acc.add_product(a, &inner.finish(), &one);
        }
    }
    Ok(acc.finish())
}

/// Flow applied to a form: coefficients are differentiated and the weight
/// contributes `x^n ω_comp`. Concrete coefficients are constants of the
/// evaluation point, so only generic instances are accepted.
pub fn derive_form(alg: &MomentAlgebra, f: &LinearForm, d: Derivation) -> Result<LinearForm> {
    if !alg.is_generic() {
        return Err(Error::RequiresGeneric);
    }
    let n = d.order() as usize;
    let mut out = LinearForm::default();
    for c in 1..=2u8 {
        let src = f.comp(c);
        let mut dst: Vec<RingElem> = src.iter().map(|e| extend_derivation(alg, d, e)).collect::<Result<_>>()?;
        if c == d.component() && !src.is_empty() {
            dst.resize(src.len() + n, RingElem::zero());
            for (j, e) in src.iter().enumerate() {
                dst[j + n] = dst[j + n].add(e);
            }
        }
        *out.comp_mut(c) = dst;
    }
    Ok(out)
}
