//! Derivations on the polynomial ring, extended from generator rules by Leibniz.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::generator::Generator;
use super::rational::Rational;
use super::ring::{Accumulator, RingElem};
use crate::error::{Error, Result};

/// `∂_{t_n}` or `∂_{s_n}`, `n ≥ 1`. `t` flows act on component 1, `s` on component 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Derivation {
    T(u32),
    S(u32),
}

impl Derivation {
    /// Component whose weight the flow deforms.
    pub fn component(self) -> u8 {
        match self {
            Derivation::T(_) => 1,
            Derivation::S(_) => 2,
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Derivation::T(n) | Derivation::S(n) => n,
        }
    }

    pub fn of_component(comp: u8, n: u32) -> Derivation {
        if comp == 1 {
            Derivation::T(n)
        } else {
            Derivation::S(n)
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::T(n) => write!(f, "t{n}"),
            Derivation::S(n) => write!(f, "s{n}"),
        }
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multiset of commuting derivations, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DerivationWord(SmallVec<[Derivation; 6]>);

impl DerivationWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut ds: Vec<Derivation>) -> Self {
        ds.sort_unstable();
        DerivationWord(SmallVec::from_vec(ds))
    }

    pub fn single(d: Derivation) -> Self {
        Self::new(vec![d])
    }

    pub fn power(d: Derivation, e: u32) -> Self {
        Self::new(vec![d; e as usize])
    }

    pub fn letters(&self) -> &[Derivation] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &DerivationWord) -> DerivationWord {
        let mut v: Vec<Derivation> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        DerivationWord(SmallVec::from_vec(v))
    }

    pub fn push(&self, d: Derivation) -> DerivationWord {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&e| e <= d);
        v.insert(pos, d);
        DerivationWord(v)
    }

    /// Splits off the largest letter: `self = rest + last`.
    pub fn split_last(&self) -> Option<(DerivationWord, Derivation)> {
        let mut v = self.0.clone();
        let d = v.pop()?;
        Some((DerivationWord(v), d))
    }

    /// Total index shift applied to component `comp`.
    pub fn weight(&self, comp: u8) -> u32 {
        self.0.iter().filter(|d| d.component() == comp).map(|d| d.order()).sum()
    }

    /// `(letter, multiplicity)` pairs.
    pub fn powers(&self) -> Vec<(Derivation, u32)> {
        let mut out: Vec<(Derivation, u32)> = Vec::new();
        for &d in &self.0 {
            match out.last_mut() {
                Some((e, m)) if *e == d => *m += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }

    /// All sub-multisets `β ≤ self` with the complement and `∏ C(α_i, β_i)`.
    pub fn splittings(&self) -> Vec<(DerivationWord, DerivationWord, u64)> {
        let pw = self.powers();
        let mut out = vec![(Vec::new(), Vec::new(), 1u64)];
        for (d, m) in pw {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for (b, g, c) in &out {
                for j in 0..=m {
                    let mut b2: Vec<Derivation> = b.clone();
                    b2.extend(std::iter::repeat(d).take(j as usize));
                    let mut g2: Vec<Derivation> = g.clone();
                    g2.extend(std::iter::repeat(d).take((m - j) as usize));
                    next.push((b2, g2, c * binomial(m as u64, j as u64)));
                }
            }
            out = next;
        }
        out.into_iter().map(|(b, g, c)| (DerivationWord::new(b), DerivationWord::new(g), c)).collect()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl fmt::Display for DerivationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .powers()
            .into_iter()
            .map(|(d, m)| if m == 1 { format!("d{d}") } else { format!("d{d}^{m}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for DerivationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Image of each generator under each derivation.
pub trait GeneratorRule {
    fn image(&self, g: Generator, d: Derivation) -> Result<RingElem>;
}

/// Explicit table of generator images; absent entries are errors.
#[derive(Default, Clone)]
pub struct RuleTable {
    rules: FxHashMap<(Generator, Derivation), RingElem>,
}

impl RuleTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, g: Generator, d: Derivation, image: RingElem) {
        self.rules.insert((g, d), image);
    }
}

impl GeneratorRule for RuleTable {
    fn image(&self, g: Generator, d: Derivation) -> Result<RingElem> {
        self.rules.get(&(g, d)).cloned().ok_or_else(|| Error::MissingRule {
            generator: g.to_string(),
            derivation: d.to_string(),
        })
    }
}

/// Leibniz extension of `rule` to the polynomial `e`.
pub fn extend_derivation<R: GeneratorRule + ?Sized>(rule: &R, d: Derivation, e: &RingElem) -> Result<RingElem> {
    let mut images: FxHashMap<Generator, RingElem> = FxHashMap::default();
    let mut acc = Accumulator::new();
    for (m, c) in e.terms() {
        for (g, exp) in m.powers() {
            let img = match images.get(&g) {
                Some(i) => i,
                None => {
                    let i = rule.image(g, d)?;
                    images.entry(g).or_insert(i)
                }
            };
            if img.is_zero() {
                continue;
            }
            let rest = m.without_one(g);
            let coef = c * &Rational::from_int(exp as i64);
            acc.add_elem(&img.mul_term(&rest, &coef), &Rational::one());
        }
    }
    Ok(acc.finish())
}

/// Applies every letter of `word` in turn.
pub fn extend_word<R: GeneratorRule + ?Sized>(rule: &R, word: &DerivationWord, e: &RingElem) -> Result<RingElem> {
    let mut cur = e.clone();
    for &d in word.letters() {
        cur = extend_derivation(rule, d, &cur)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u32) -> Generator {
        Generator::var(i)
    }

    #[test]
    fn leibniz_on_product() {
        let mut rules = RuleTable::new();
        let d = Derivation::T(1);
        rules.set(g(1), d, RingElem::generator(g(9)));
        rules.set(g(2), d, RingElem::zero());
        let e = RingElem::generator(g(1)).mul(&RingElem::generator(g(2)));
        let de = extend_derivation(&rules, d, &e).unwrap();
        assert_eq!(de, RingElem::generator(g(9)).mul(&RingElem::generator(g(2))));
        assert!(extend_derivation(&rules, d, &RingElem::from_int(5)).unwrap().is_zero());
    }

    #[test]
    fn missing_rule() {
        let rules = RuleTable::new();
        let e = RingElem::generator(g(4));
        assert!(matches!(extend_derivation(&rules, Derivation::S(2), &e), Err(Error::MissingRule { .. })));
    }

    #[test]
    fn powers_use_exponent() {
        let mut rules = RuleTable::new();
        let d = Derivation::S(1);
        rules.set(g(1), d, RingElem::one());
        let e = RingElem::generator(g(1)).pow(3);
        let de = extend_derivation(&rules, d, &e).unwrap();
        assert_eq!(de, RingElem::generator(g(1)).pow(2).scale(&Rational::from_int(3)));
    }

    #[test]
    fn splittings_count() {
        let w = DerivationWord::new(vec![Derivation::T(1), Derivation::T(1), Derivation::S(2)]);
        let sp = w.splittings();
        assert_eq!(sp.len(), 6);
        let total: u64 = sp.iter().map(|x| x.2).sum();
        assert_eq!(total, 8);
    }
}
