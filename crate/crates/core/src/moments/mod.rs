//! The two-component skew moment lattice, its time flows, and tau functions.

pub mod instance;
pub mod tau;

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Derivation, Generator, GeneratorKind, GeneratorRule, MomentKey, Rational, RingElem};
use crate::report::sha256_hex;

pub use instance::{gen_instance, InstanceSpec, InstanceTemplate, KernelSpec, Mode};
pub use tau::{Sym, SymList, TauEngine};

/// Degree budget `(v1, v2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    pub v1: u32,
    pub v2: u32,
}

impl MultiIndex {
    pub const fn new(v1: u32, v2: u32) -> Self {
        MultiIndex { v1, v2 }
    }

    pub fn total(self) -> u32 {
        self.v1 + self.v2
    }

    pub fn comp(self, c: u8) -> u32 {
        if c == 1 {
            self.v1
        } else {
            self.v2
        }
    }

    /// Adds a signed offset; `None` if a component would go negative.
    pub fn offset(self, d1: i64, d2: i64) -> Option<MultiIndex> {
        let a = self.v1 as i64 + d1;
        let b = self.v2 as i64 + d2;
        (a >= 0 && b >= 0).then(|| MultiIndex::new(a as u32, b as u32))
    }

    /// All indices with the given total.
    pub fn with_total(n: u32) -> impl Iterator<Item = MultiIndex> {
        (0..=n).map(move |a| MultiIndex::new(a, n - a))
    }

    /// Componentwise `self ≤ other`.
    pub fn le(self, other: MultiIndex) -> bool {
        self.v1 <= other.v1 && self.v2 <= other.v2
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v1, self.v2)
    }
}

/// A moment realization with the flows `∂_{t_n}`, `∂_{s_n}`.
#[derive(Debug, Clone)]
pub struct MomentAlgebra {
    spec: InstanceSpec,
    bounds: [u32; 2],
    /// Concrete values on canonical keys; empty in generic mode.
    values: FxHashMap<MomentKey, Rational>,
    hash: String,
}

impl MomentAlgebra {
    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn is_generic(&self) -> bool {
        self.spec.mode == Mode::Generic
    }

    pub fn bounds(&self) -> [u32; 2] {
        self.bounds
    }

    pub fn bound(&self, comp: u8) -> u32 {
        self.bounds[(comp - 1) as usize]
    }

    pub fn instance_hash(&self) -> &str {
        &self.hash
    }

    pub fn check_degree(&self, comp: u8, degree: u32) -> Result<()> {
        let bound = self.bound(comp);
        if degree > bound {
            return Err(Error::BoundExceeded { comp, degree, bound });
        }
        Ok(())
    }

    /// `m^{(k,l)}_{a,b}` as a ring element.
    pub fn value(&self, key: MomentKey) -> Result<RingElem> {
        self.check_degree(key.k, key.a)?;
        self.check_degree(key.l, key.b)?;
        let Some((canon, sign)) = key.canonical() else {
            return Ok(RingElem::zero());
        };
        let v = if self.is_generic() {
            RingElem::generator(Generator::moment(canon))
        } else {
            RingElem::constant(self.values.get(&canon).cloned().unwrap_or_else(Rational::zero))
        };
        Ok(if sign < 0 { v.neg() } else { v })
    }

    /// Concrete value of a canonical key, if this is a concrete instance.
    pub fn concrete_value(&self, key: MomentKey) -> Option<Rational> {
        let (canon, sign) = key.canonical()?;
        let v = self.values.get(&canon)?.clone();
        Some(if sign < 0 { -v } else { v })
    }

    /// Flow rule: a `t_n` flow shifts every component-1 slot by `n`, an `s_n`
    /// flow every component-2 slot.
    pub fn derive_moment(&self, key: MomentKey, d: Derivation) -> Result<RingElem> {
        let comp = d.component();
        let n = d.order();
        let mut out = RingElem::zero();
        if key.k == comp {
            out = out.add(&self.value(MomentKey { a: key.a + n, ..key })?);
        }
        if key.l == comp {
            out = out.add(&self.value(MomentKey { b: key.b + n, ..key })?);
        }
        Ok(out)
    }

    /// Generic algebra with the same bounds.
    pub fn generic_twin(&self) -> MomentAlgebra {
        make_instance(&InstanceSpec::generic(self.bounds)).expect("generic spec is valid")
    }

    /// Evaluates moment generators at this instance's concrete values.
    pub fn substitute(&self, e: &RingElem) -> RingElem {
        if self.is_generic() {
            return e.clone();
        }
        e.substitute(&|g| match g.kind() {
            GeneratorKind::Moment(k) => Some(RingElem::constant(self.values.get(&k).cloned().unwrap_or_else(Rational::zero))),
            _ => None,
        })
    }
}

impl GeneratorRule for MomentAlgebra {
    fn image(&self, g: Generator, d: Derivation) -> Result<RingElem> {
        match g.kind() {
            GeneratorKind::Moment(key) => self.derive_moment(key, d),
            _ => Err(Error::MissingRule { generator: g.to_string(), derivation: d.to_string() }),
        }
    }
}

/// Validates `spec` and materializes every moment within its bounds.
pub fn make_instance(spec: &InstanceSpec) -> Result<MomentAlgebra> {
    spec.validate()?;
    let bounds = spec.bounds;
    let mut values = FxHashMap::default();
    if spec.mode == Mode::Concrete {
        let x = &spec.nodes;
        let s = spec.kernel_matrix()?;
        let n = x.len();
        let w = [&spec.w1, &spec.w2];
        // u[c][a][i] = x_i^a w_c(i), sv[c][b][i] = Σ_j S_ij u[c][b][j]
        let mut u: Vec<Vec<Vec<Rational>>> = Vec::new();
        let mut sv: Vec<Vec<Vec<Rational>>> = Vec::new();
        for c in 0..2 {
            let mut rows = Vec::new();
            let mut cur: Vec<Rational> = w[c].clone();
            for _ in 0..=bounds[c] {
                rows.push(cur.clone());
                cur = cur.iter().zip(x).map(|(p, xi)| p * xi).collect();
            }
            let srows = rows
                .iter()
                .map(|r| (0..n).map(|i| (0..n).map(|j| &s[i][j] * &r[j]).sum()).collect())
                .collect();
            u.push(rows);
            sv.push(srows);
        }
        for k in 1..=2u8 {
            for l in k..=2u8 {
                for a in 0..=bounds[(k - 1) as usize] {
                    for b in 0..=bounds[(l - 1) as usize] {
                        let key = MomentKey::new(k, l, a, b);
                        if !key.is_canonical() {
                            continue;
                        }
                        let ua = &u[(k - 1) as usize][a as usize];
                        let vb = &sv[(l - 1) as usize][b as usize];
                        let m: Rational = ua.iter().zip(vb).map(|(p, q)| p * q).sum();
                        if !m.is_zero() {
                            values.insert(key, m);
                        }
                    }
                }
            }
        }
    }
    let hash = sha256_hex(spec.canonical_json().as_bytes());
    Ok(MomentAlgebra { spec: spec.clone(), bounds, values, hash })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_node_example() {
        let spec = InstanceSpec::concrete(
            vec![Rational::zero(), Rational::one()],
            vec![Rational::one(); 2],
            vec![Rational::one(); 2],
            KernelSpec::Sign,
            [3, 3],
        );
        let alg = make_instance(&spec).unwrap();
        assert_eq!(alg.value(MomentKey::new(1, 1, 0, 1)).unwrap(), RingElem::one());
        assert!(alg.value(MomentKey::new(2, 2, 1, 1)).unwrap().is_zero());
    }

    #[test]
    fn generic_swap_negates() {
        let alg = make_instance(&InstanceSpec::generic([4, 4])).unwrap();
        let a = alg.value(MomentKey::new(1, 2, 0, 0)).unwrap();
        let b = alg.value(MomentKey::new(2, 1, 0, 0)).unwrap();
        assert_eq!(a, b.neg());
        assert_eq!(a.generators().len(), 1);
    }

    #[test]
    fn flow_rules() {
        let alg = make_instance(&InstanceSpec::generic([6, 6])).unwrap();
        let m = |k, l, a, b| alg.value(MomentKey::new(k, l, a, b)).unwrap();
        assert_eq!(alg.derive_moment(MomentKey::new(1, 1, 0, 1), Derivation::T(2)).unwrap(), m(1, 1, 2, 1).add(&m(1, 1, 0, 3)));
        assert!(alg.derive_moment(MomentKey::new(1, 1, 2, 3), Derivation::S(1)).unwrap().is_zero());
        assert_eq!(alg.derive_moment(MomentKey::new(1, 2, 0, 0), Derivation::T(1)).unwrap(), m(1, 2, 1, 0));
        assert_eq!(alg.derive_moment(MomentKey::new(1, 2, 0, 0), Derivation::S(1)).unwrap(), m(1, 2, 0, 1));
        assert!(alg.derive_moment(MomentKey::new(2, 2, 0, 1), Derivation::T(3)).unwrap().is_zero());
        assert!(matches!(alg.derive_moment(MomentKey::new(1, 1, 0, 5), Derivation::T(2)), Err(Error::BoundExceeded { .. })));
    }
}
