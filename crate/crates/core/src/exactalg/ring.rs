//! Sparse multivariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::generator::Generator;
use super::rational::Rational;

/// Multiset of generators, stored sorted with repetition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[Generator; 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_generators(mut gens: Vec<Generator>) -> Self {
        gens.sort_unstable();
        Monomial(SmallVec::from_vec(gens))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    /// `(generator, exponent)` pairs in increasing generator order.
    pub fn powers(&self) -> Vec<(Generator, u32)> {
        let mut out: Vec<(Generator, u32)> = Vec::new();
        for &g in &self.0 {
            match out.last_mut() {
                Some((h, e)) if *h == g => *e += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return other.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn mul_generator(&self, g: Generator) -> Monomial {
        let pos = self.0.partition_point(|&h| h <= g);
        let mut out = self.0.clone();
        out.insert(pos, g);
        Monomial(out)
    }

    /// Removes one copy of `g`; caller guarantees presence.
    pub fn without_one(&self, g: Generator) -> Monomial {
        let pos = self.0.iter().position(|&h| h == g).expect("generator not in monomial");
        let mut out = self.0.clone();
        out.remove(pos);
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (g, e)) in self.powers().into_iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial with terms sorted by monomial, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    terms: Vec<(Monomial, Rational)>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            RingElem { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Monomial::from_generators(vec![g]), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            RingElem { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc = Accumulator::new();
        for (m, c) in terms {
            acc.add_term(m, &c);
        }
        acc.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this element is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn generators(&self) -> Vec<Generator> {
        let mut g: Vec<Generator> = self.terms.iter().flat_map(|(m, _)| m.generators().iter().copied()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn scale(&self, c: &Rational) -> RingElem {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        RingElem { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// `c · m · self`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> RingElem {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let mut terms: Vec<(Monomial, Rational)> = self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect();
        if !m.is_one() {
            terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        }
        RingElem { terms }
    }

    fn merge(&self, other: &RingElem, negate: bool) -> RingElem {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate { -c } else { c.clone() }));
        }
        RingElem { terms: out }
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.merge(other, true)
    }

    pub fn neg(&self) -> RingElem {
        RingElem { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_term(m, c);
        }
        let mut acc = Accumulator::with_capacity(small.len() * large.len());
        for (m, c) in &small.terms {
            for (n, d) in &large.terms {
                acc.add_term(m.mul(n), &(c * d));
            }
        }
        acc.finish()
    }

    pub fn pow(&self, e: u32) -> RingElem {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces generators by polynomials; unmapped generators are kept.
    pub fn substitute(&self, f: &dyn Fn(Generator) -> Option<RingElem>) -> RingElem {
        let mut acc = Accumulator::new();
        for (m, c) in &self.terms {
            let mut prod = RingElem::constant(c.clone());
            for (g, e) in m.powers() {
                let img = f(g).unwrap_or_else(|| RingElem::generator(g));
                prod = prod.mul(&img.pow(e));
                if prod.is_zero() {
                    break;
                }
            }
            acc.add_elem(&prod, &Rational::one());
        }
        acc.finish()
    }

    /// Canonical text form, keeping at most `max_terms` terms.
    pub fn to_string_truncated(&self, max_terms: usize) -> String {
        if self.terms.len() <= max_terms {
            return self.to_string();
        }
        let head = RingElem { terms: self.terms[..max_terms].to_vec() };
        format!("{head} + ... ({} more terms)", self.terms.len() - max_terms)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for RingElem {
    fn from(c: Rational) -> Self {
        RingElem::constant(c)
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        RingElem::add(self, rhs)
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        RingElem::sub(self, rhs)
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        RingElem::mul(self, rhs)
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

/// Hash-based sum of many terms; `finish` sorts once.
#[derive(Default)]
pub struct Accumulator {
    map: FxHashMap<Monomial, Rational>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Accumulator { map: FxHashMap::with_capacity_and_hasher(n.min(1 << 20), Default::default()) }
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&m) {
            Some(v) => *v += c,
            None => {
                self.map.insert(m, c.clone());
            }
        }
    }

    /// Adds `c · e`.
    pub fn add_elem(&mut self, e: &RingElem, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &e.terms {
            if c.is_one() {
                self.add_term(m.clone(), a);
            } else {
                self.add_term(m.clone(), &(a * c));
            }
        }
    }

    /// Adds `c · a · b`.
    pub fn add_product(&mut self, a: &RingElem, b: &RingElem, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &a.terms {
            let cx = x * c;
            for (n, y) in &b.terms {
                self.add_term(m.mul(n), &(&cx * y));
            }
        }
    }

    pub fn finish(self) -> RingElem {
        let mut terms: Vec<(Monomial, Rational)> = self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        RingElem { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u32) -> RingElem {
        RingElem::generator(Generator::var(i))
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (g(1), g(2));
        let lhs = (&a + &b).mul(&(&a - &b));
        let rhs = &a.mul(&a) - &b.mul(&b);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "g1^2 - g2^2");
    }

    #[test]
    fn zero_absorbs() {
        assert!(g(3).mul(&RingElem::zero()).is_zero());
        assert!((&g(3) - &g(3)).is_zero());
    }

    #[test]
    fn display_coefficients() {
        let e = g(7).mul(&g(3)).mul(&g(3)).scale(&Rational::new(-3, 2)).add(&RingElem::from_int(2));
        assert_eq!(e.to_string(), "2 - 3/2*g3^2*g7");
        assert_eq!(RingElem::zero().to_string(), "0");
    }

    #[test]
    fn substitution() {
        let e = g(1).mul(&g(1)).add(&g(2));
        let s = e.substitute(&|x| if x == Generator::var(1) { Some(RingElem::from_int(3)) } else { None });
        assert_eq!(s, RingElem::from_int(9).add(&g(2)));
    }
}
