//! Pfaffians over moment index symbols, tau functions and their derivatives.
//!
//! A symbol `i^{(k)}` stands for the weight monomial `x^i ω_k`; the entry
//! between two symbols is the moment `m^{(k,l)}_{i,j}`. Lists are kept sorted
//! (component 1 first, then component 2, each by degree) which is exactly the
//! order used by `τ_v = Pf(0^{(1)},…,(v1−1)^{(1)},0^{(2)},…,(v2−1)^{(2)})`.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{MomentAlgebra, MultiIndex};
use crate::error::{Error, Result};
use crate::exactalg::{extend_word, Accumulator, Derivation, DerivationWord, MomentKey, Rational, RingElem};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(u32);

impl Sym {
    pub fn new(comp: u8, deg: u32) -> Sym {
        debug_assert!(comp == 1 || comp == 2);
        Sym(((comp as u32) << 24) | deg)
    }

    pub fn comp(self) -> u8 {
        (self.0 >> 24) as u8
    }

    pub fn deg(self) -> u32 {
        self.0 & 0x00ff_ffff
    }

    fn shifted(self, n: u32) -> Sym {
        Sym::new(self.comp(), self.deg() + n)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.deg(), self.comp())
    }
}

pub type SymList = SmallVec<[Sym; 12]>;

/// Sorts a list, returning the permutation sign, or `None` on a repeated symbol.
pub fn canonicalize(list: &[Sym]) -> Option<(SymList, i64)> {
    let mut v: SymList = list.iter().copied().collect();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Index list of `τ_v` (or of the form `R_v` before appending `x`).
pub fn index_list(v: MultiIndex) -> SymList {
    (0..v.v1).map(|i| Sym::new(1, i)).chain((0..v.v2).map(|i| Sym::new(2, i))).collect()
}

/// Formal integer combination of Pfaffians over sorted symbol lists.
pub type PfExpr = Vec<(SymList, i64)>;

/// Per-computation evaluator with memoized Pfaffians and derivatives.
pub struct TauEngine<'a> {
    alg: &'a MomentAlgebra,
    pf_cache: RefCell<FxHashMap<SymList, Rc<RingElem>>>,
    expr_cache: RefCell<FxHashMap<(SymList, DerivationWord), Rc<PfExpr>>>,
    deriv_cache: RefCell<FxHashMap<(SymList, DerivationWord), Rc<RingElem>>>,
}

impl<'a> TauEngine<'a> {
    pub fn new(alg: &'a MomentAlgebra) -> Self {
        TauEngine {
            alg,
            pf_cache: RefCell::default(),
            expr_cache: RefCell::default(),
            deriv_cache: RefCell::default(),
        }
    }

    pub fn algebra(&self) -> &'a MomentAlgebra {
        self.alg
    }

    pub fn entry(&self, a: Sym, b: Sym) -> Result<RingElem> {
        self.alg.value(MomentKey::new(a.comp(), b.comp(), a.deg(), b.deg()))
    }

    fn check(&self, list: &[Sym]) -> Result<()> {
        for s in list {
            self.alg.check_degree(s.comp(), s.deg())?;
        }
        Ok(())
    }

    /// Pfaffian of a sorted, repetition-free list.
    pub fn pf_sorted(&self, list: &[Sym]) -> Result<Rc<RingElem>> {
        if list.len() % 2 == 1 {
            return Err(Error::OddSize(list.len()));
        }
        if let Some(v) = self.pf_cache.borrow().get(list) {
            return Ok(v.clone());
        }
        let v = if list.is_empty() {
            RingElem::one()
        } else {
            self.check(list)?;
            let first = list[0];
            let mut acc = Accumulator::new();
            for j in 1..list.len() {
                let a = self.entry(first, list[j])?;
                if a.is_zero() {
                    continue;
                }
                let rest: SymList = list[1..].iter().enumerate().filter(|&(k, _)| k + 1 != j).map(|(_, &s)| s).collect();
                let sub = self.pf_sorted(&rest)?;
                let sign = if j % 2 == 1 { Rational::one() } else { -Rational::one() };
                acc.add_product(&a, &sub, &sign);
            }
            acc.finish()
        };
        let v = Rc::new(v);
        self.pf_cache.borrow_mut().insert(list.iter().copied().collect(), v.clone());
        Ok(v)
    }

    /// Pfaffian of an arbitrary list, in the given order.
    pub fn pf(&self, list: &[Sym]) -> Result<RingElem> {
        if list.len() % 2 == 1 {
            return Err(Error::OddSize(list.len()));
        }
        match canonicalize(list) {
            None => Ok(RingElem::zero()),
            Some((sorted, sign)) => {
                let v = self.pf_sorted(&sorted)?;
                Ok(if sign < 0 { v.neg() } else { (*v).clone() })
            }
        }
    }

    pub fn tau(&self, v: MultiIndex) -> Result<RingElem> {
        if v.total() % 2 == 1 {
            return Err(Error::OddParity(v.v1, v.v2));
        }
        Ok((*self.pf_sorted(&index_list(v))?).clone())
    }

    /// `τ` at a signed index; negative components give zero.
    pub fn tau_at(&self, v1: i64, v2: i64) -> Result<RingElem> {
        if v1 < 0 || v2 < 0 {
            return Ok(RingElem::zero());
        }
        self.tau(MultiIndex::new(v1 as u32, v2 as u32))
    }

    /// Applies one flow to a Pfaffian combination by shifting indices.
    fn shift_expr(&self, expr: &PfExpr, d: Derivation) -> Result<PfExpr> {
        let comp = d.component();
        let n = d.order();
        let mut acc: FxHashMap<SymList, i64> = FxHashMap::default();
        for (list, c) in expr {
            for (p, s) in list.iter().enumerate() {
                if s.comp() != comp {
                    continue;
                }
                let t = s.shifted(n);
                self.alg.check_degree(comp, t.deg())?;
                let mut l = list.clone();
                l[p] = t;
                // only position p is out of order; bubble it right
                let mut sign = 1;
                let mut q = p;
                let mut repeated = false;
                while q + 1 < l.len() && l[q + 1] <= l[q] {
                    if l[q + 1] == l[q] {
                        repeated = true;
                        break;
                    }
                    l.swap(q, q + 1);
                    sign = -sign;
                    q += 1;
                }
                if repeated {
                    continue;
                }
                *acc.entry(l).or_insert(0) += sign * c;
            }
        }
        let mut out: PfExpr = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `∂^word Pf(base)` as a Pfaffian combination (index-shift route).
    pub fn derivative_expr(&self, base: &SymList, word: &DerivationWord) -> Result<Rc<PfExpr>> {
        let key = (base.clone(), word.clone());
        if let Some(e) = self.expr_cache.borrow().get(&key) {
            return Ok(e.clone());
        }
        let e = match word.split_last() {
            None => vec![(base.clone(), 1)],
            Some((rest, d)) => {
                let prev = self.derivative_expr(base, &rest)?;
                self.shift_expr(&prev, d)?
            }
        };
        let e = Rc::new(e);
        self.expr_cache.borrow_mut().insert(key, e.clone());
        Ok(e)
    }

    pub fn eval_expr(&self, expr: &PfExpr) -> Result<RingElem> {
        let mut acc = Accumulator::new();
        for (list, c) in expr {
            let v = self.pf_sorted(list)?;
            acc.add_elem(&v, &Rational::from_int(*c));
        }
        Ok(acc.finish())
    }

    /// `∂^word Pf(base)` for a sorted base list.
    pub fn derivative_of(&self, base: &SymList, word: &DerivationWord) -> Result<Rc<RingElem>> {
        let key = (base.clone(), word.clone());
        if let Some(v) = self.deriv_cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let expr = self.derivative_expr(base, word)?;
        let v = Rc::new(self.eval_expr(&expr)?);
        self.deriv_cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// `∂^word τ_v` by iterated index shifts.
    pub fn tau_derivative(&self, v: MultiIndex, word: &DerivationWord) -> Result<Rc<RingElem>> {
        if v.total() % 2 == 1 {
            return Err(Error::OddParity(v.v1, v.v2));
        }
        self.derivative_of(&index_list(v), word)
    }

    /// Same derivative via the Leibniz rule on the expanded polynomial.
    /// Concrete instances are differentiated generically, then evaluated.
    pub fn tau_derivative_leibniz(&self, v: MultiIndex, word: &DerivationWord) -> Result<RingElem> {
        if v.total() % 2 == 1 {
            return Err(Error::OddParity(v.v1, v.v2));
        }
        if self.alg.is_generic() {
            return extend_word(self.alg, word, &self.tau(v)?);
        }
        let twin = self.alg.generic_twin();
        let generic = TauEngine::new(&twin);
        let d = extend_word(&twin, word, &generic.tau(v)?)?;
        Ok(self.alg.substitute(&d))
    }

    /// Both routes; errors if they disagree.
    pub fn tau_derivative_checked(&self, v: MultiIndex, word: &DerivationWord) -> Result<RingElem> {
        let a = self.tau_derivative(v, word)?;
        let b = self.tau_derivative_leibniz(v, word)?;
        if *a != b {
            return Err(Error::DegenerateInstance(format!("derivative routes disagree for τ{v} under {word}")));
        }
        Ok(b)
    }
}
