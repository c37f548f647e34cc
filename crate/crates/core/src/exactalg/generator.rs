//! Polynomial generators.
//!
//! Ids are a bijective packing of a structured key into a `u32`, so the
//! "registry" is a pure decode function: lookups are lock free, and ids (hence
//! monomial order and serialized output) do not depend on interning order.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A skew moment `m^{(k,l)}_{a,b}`, component labels `k, l ∈ {1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MomentKey {
    pub k: u8,
    pub l: u8,
    pub a: u32,
    pub b: u32,
}

impl MomentKey {
    pub fn new(k: u8, l: u8, a: u32, b: u32) -> Self {
        MomentKey { k, l, a, b }
    }

    /// Canonical representative and the sign relating it to `self`.
    /// Returns `None` when the key sits on the skew diagonal.
    pub fn canonical(self) -> Option<(MomentKey, i8)> {
        match (self.k, self.a).cmp(&(self.l, self.b)) {
            std::cmp::Ordering::Less => Some((self, 1)),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some((self.swapped(), -1)),
        }
    }

    pub fn swapped(self) -> MomentKey {
        MomentKey { k: self.l, l: self.k, a: self.b, b: self.a }
    }

    pub fn is_canonical(self) -> bool {
        (self.k, self.a) < (self.l, self.b)
    }
}

impl fmt::Display for MomentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}{}_{}_{}", self.k, self.l, self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Canonical skew moment.
    Moment(MomentKey),
    /// Formal Pfaffian entry `pf(i, j)`, `i < j`.
    Formal(u32, u32),
    /// Basis element `x^deg ω_comp` of a linear form.
    Basis(u8, u32),
    /// Free variable, also used for Schur slots.
    Var(u32),
}

const TAG_SHIFT: u32 = 30;
const FIELD: u32 = 12;
const FIELD_MASK: u32 = (1 << FIELD) - 1;
/// Largest degree (or formal symbol index) representable in a packed id.
pub const MAX_FIELD: u32 = FIELD_MASK;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator(pub u32);

impl Generator {
    pub fn moment(key: MomentKey) -> Generator {
        assert!(key.is_canonical(), "non-canonical moment key {key}");
        assert!(key.a <= MAX_FIELD && key.b <= MAX_FIELD, "moment degree out of range");
        let kl = (((key.k - 1) as u32) << 1) | (key.l - 1) as u32;
        Generator((kl << (2 * FIELD)) | (key.a << FIELD) | key.b)
    }

    pub fn formal(i: u32, j: u32) -> Generator {
        assert!(i < j && j <= MAX_FIELD, "formal entry must have i < j");
        Generator((1 << TAG_SHIFT) | (i << FIELD) | j)
    }

    pub fn basis(comp: u8, deg: u32) -> Generator {
        assert!(comp == 1 || comp == 2, "component must be 1 or 2");
        assert!(deg <= MAX_FIELD);
        Generator((2 << TAG_SHIFT) | (((comp - 1) as u32) << FIELD) | deg)
    }

    pub fn var(i: u32) -> Generator {
        assert!(i < (1 << TAG_SHIFT));
        Generator((3 << TAG_SHIFT) | i)
    }

    pub fn kind(self) -> GeneratorKind {
        let body = self.0 & ((1 << TAG_SHIFT) - 1);
        let lo = body & FIELD_MASK;
        let mid = (body >> FIELD) & FIELD_MASK;
        match self.0 >> TAG_SHIFT {
            0 => {
                let kl = body >> (2 * FIELD);
                GeneratorKind::Moment(MomentKey {
                    k: (kl >> 1) as u8 + 1,
                    l: (kl & 1) as u8 + 1,
                    a: mid,
                    b: lo,
                })
            }
            1 => GeneratorKind::Formal(mid, lo),
            2 => GeneratorKind::Basis(mid as u8 + 1, lo),
            _ => GeneratorKind::Var(body),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            GeneratorKind::Moment(k) => write!(f, "{k}"),
            GeneratorKind::Formal(i, j) => write!(f, "pf_{i}_{j}"),
            GeneratorKind::Basis(c, d) => write!(f, "w{c}x{d}"),
            GeneratorKind::Var(i) => write!(f, "g{i}"),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
