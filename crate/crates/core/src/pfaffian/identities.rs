//! Formal checks of the two quadratic Pfaffian identities.
//!
//! even: `pf(∗a1a2a3a4)pf(∗) = pf(∗a1a2)pf(∗a3a4) − pf(∗a1a3)pf(∗a2a4) + pf(∗a1a4)pf(∗a2a3)`, `|∗|` even.
//! odd:  `pf(⋆a1a2a3)pf(⋆a4) = pf(⋆a2a3a4)pf(⋆a1) − pf(⋆a1a3a4)pf(⋆a2) + pf(⋆a1a2a4)pf(⋆a3)`, `|⋆|` odd.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{pfaffian_expansion, SkewMatrix};
use crate::error::{Error, Result};
use crate::exactalg::{Generator, RingElem};
use crate::report::{sha256_hex, VerificationReport};

pub const MAX_STAR: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityKind {
    Even,
    Odd,
}

/// Abstract symbols `0..n` with independent entries `pf(i, j)`.
#[derive(Debug, Clone)]
pub struct FormalSymbolSet {
    n: usize,
}

impl FormalSymbolSet {
    pub fn new(n: usize) -> Self {
        FormalSymbolSet { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `pf(i, j)` with skew symmetry applied.
    pub fn entry(&self, i: usize, j: usize) -> RingElem {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => RingElem::generator(Generator::formal(i as u32, j as u32)),
            Equal => RingElem::zero(),
            Greater => RingElem::generator(Generator::formal(j as u32, i as u32)).neg(),
        }
    }

    /// Pfaffian over the listed symbols, in the given order.
    pub fn pf(&self, syms: &[usize]) -> RingElem {
        let m = SkewMatrix::from_fn(syms.len(), |a, b| self.entry(syms[a], syms[b]));
        pfaffian_expansion(&m).expect("even symbol list")
    }
}

/// Left minus right side of the chosen identity.
pub fn pfaffian_identity_residual(kind: IdentityKind, star_size: usize) -> Result<RingElem> {
    if star_size > MAX_STAR {
        return Err(Error::SizeLimit { size: star_size, limit: MAX_STAR });
    }
    let parity_ok = match kind {
        IdentityKind::Even => star_size % 2 == 0,
        IdentityKind::Odd => star_size % 2 == 1,
    };
    if !parity_ok {
        return Err(Error::Config(format!("star size {star_size} has the wrong parity for {kind:?}")));
    }
    let set = FormalSymbolSet::new(star_size + 4);
    let star: Vec<usize> = (0..star_size).collect();
    let a = [star_size, star_size + 1, star_size + 2, star_size + 3];
    let with = |extra: &[usize]| {
        let mut s = star.clone();
        s.extend_from_slice(extra);
        set.pf(&s)
    };
    let residual = match kind {
        IdentityKind::Even => {
            let lhs = with(&a).mul(&with(&[]));
            let rhs = with(&[a[0], a[1]])
                .mul(&with(&[a[2], a[3]]))
                .sub(&with(&[a[0], a[2]]).mul(&with(&[a[1], a[3]])))
                .add(&with(&[a[0], a[3]]).mul(&with(&[a[1], a[2]])));
            lhs.sub(&rhs)
        }
        IdentityKind::Odd => {
            let lhs = with(&[a[0], a[1], a[2]]).mul(&with(&[a[3]]));
            let rhs = with(&[a[1], a[2], a[3]])
                .mul(&with(&[a[0]]))
                .sub(&with(&[a[0], a[2], a[3]]).mul(&with(&[a[1]])))
                .add(&with(&[a[0], a[1], a[3]]).mul(&with(&[a[2]])));
            lhs.sub(&rhs)
        }
    };
    Ok(residual)
}

pub fn verify_pfaffian_identity(kind: IdentityKind, star_size: usize) -> Result<VerificationReport> {
    let residual = pfaffian_identity_residual(kind, star_size)?;
    let params = json!({"check": "pfaffian-identity", "kind": kind, "star_size": star_size});
    let hash = sha256_hex(format!("formal:{}", star_size + 4).as_bytes());
    Ok(VerificationReport::from_residual("pfaffian-core", params, &residual, &hash))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_stars() {
        assert!(pfaffian_identity_residual(IdentityKind::Even, 0).unwrap().is_zero());
        assert!(pfaffian_identity_residual(IdentityKind::Even, 2).unwrap().is_zero());
        assert!(pfaffian_identity_residual(IdentityKind::Odd, 1).unwrap().is_zero());
    }

    #[test]
    fn swap_and_repeat() {
        let s = FormalSymbolSet::new(4);
        assert_eq!(s.pf(&[1, 0, 2, 3]), s.pf(&[0, 1, 2, 3]).neg());
        assert!(s.pf(&[0, 0, 2, 3]).is_zero());
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(pfaffian_identity_residual(IdentityKind::Even, 8), Err(Error::SizeLimit { .. })));
        assert!(pfaffian_identity_residual(IdentityKind::Odd, 2).is_err());
    }
}
