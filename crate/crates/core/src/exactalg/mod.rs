//! Exact scalars, polynomials and derivations.

pub mod derivation;
pub mod generator;
pub mod linalg;
pub mod rational;
pub mod ring;

pub use derivation::{extend_derivation, extend_word, Derivation, DerivationWord, GeneratorRule, RuleTable};
pub use generator::{Generator, GeneratorKind, MomentKey};
pub use rational::Rational;
pub use ring::{Accumulator, Monomial, RingElem};
