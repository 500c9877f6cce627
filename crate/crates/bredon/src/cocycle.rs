//! Normalized 2-cocycles on a finite group with values in Z/n.
//!
//! A cocycle table alpha classifies a central extension of its group by
//! Z/n and hence a twisted representation theory. Everything here is exact
//! table arithmetic: validation of the cocycle identity, pullback along
//! homomorphisms, and shifts by coboundaries.

use crate::group::{FiniteGroup, GroupHom};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error("value table has {given} entries, expected {expected}")]
    SizeMismatch { given: usize, expected: usize },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("entry ({g},{h}) = {value} is not reduced modulo {modulus}")]
    ValueOutOfRange { g: usize, h: usize, value: u32, modulus: usize },
    #[error("not normalized: alpha({g},1) or alpha(1,{g}) is nonzero")]
    NotNormalized { g: usize },
    #[error("cocycle identity fails at ({g},{h},{k})")]
    IdentityFails { g: usize, h: usize, k: usize },
    #[error("one-cochain must vanish on the group identity")]
    CochainNotNormalized,
    #[error("the pairing cocycle requires a group of order 4 and exponent 2")]
    PairingNeedsKleinGroup,
}

/// A normalized Z/n-valued 2-cocycle, stored as a dense order x order table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub group: Arc<FiniteGroup>,
    pub modulus: usize,
    /// row-major: values[g * order + h] = alpha(g, h) in [0, modulus)
    values: Vec<u32>,
}

impl Cocycle {
    pub fn new(
        group: Arc<FiniteGroup>,
        modulus: usize,
        values: Vec<u32>,
    ) -> Result<Cocycle, CocycleError> {
        if modulus == 0 {
            return Err(CocycleError::ZeroModulus);
        }
        let n = group.order();
        if values.len() != n * n {
            return Err(CocycleError::SizeMismatch { given: values.len(), expected: n * n });
        }
        let c = Cocycle { group, modulus, values };
        c.validate()?;
        Ok(c)
    }

    /// The zero (trivial) cocycle.
    pub fn zero(group: Arc<FiniteGroup>, modulus: usize) -> Cocycle {
        let n = group.order();
        Cocycle { group, modulus, values: vec![0; n * n] }
    }

    /// The pairing cocycle alpha((a,b),(c,d)) = a*d on a group of order 4
    /// and exponent 2 whose elements are indexed as 2a + b. Its central
    /// extension is the dihedral group of order 8.
    pub fn pairing_on_klein(group: Arc<FiniteGroup>) -> Result<Cocycle, CocycleError> {
        if group.order() != 4 || group.exponent() != 2 {
            return Err(CocycleError::PairingNeedsKleinGroup);
        }
        let mut values = vec![0u32; 16];
        for g in 0..4usize {
            for h in 0..4usize {
                values[g * 4 + h] = ((g / 2) * (h % 2)) as u32 % 2;
            }
        }
        Cocycle::new(group, 2, values)
    }

    pub fn value(&self, g: u16, h: u16) -> u32 {
        self.values[g as usize * self.group.order() + h as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Check normalization and the full cocycle identity
    /// alpha(g,h) + alpha(gh,k) = alpha(h,k) + alpha(g,hk)  (mod n).
    pub fn validate(&self) -> Result<(), CocycleError> {
        let n = self.group.order();
        let m = self.modulus as u32;
        for (pos, &v) in self.values.iter().enumerate() {
            if v >= m {
                return Err(CocycleError::ValueOutOfRange {
                    g: pos / n,
                    h: pos % n,
                    value: v,
                    modulus: self.modulus,
                });
            }
        }
        let e = self.group.identity();
        for g in 0..n as u16 {
            if self.value(g, e) != 0 || self.value(e, g) != 0 {
                return Err(CocycleError::NotNormalized { g: g as usize });
            }
        }
        for g in 0..n as u16 {
            for h in 0..n as u16 {
                for k in 0..n as u16 {
                    let gh = self.group.mul(g, h);
                    let hk = self.group.mul(h, k);
                    let lhs = (self.value(g, h) + self.value(gh, k)) % m;
                    let rhs = (self.value(h, k) + self.value(g, hk)) % m;
                    if lhs != rhs {
                        return Err(CocycleError::IdentityFails {
                            g: g as usize,
                            h: h as usize,
                            k: k as usize,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Pull back along f: H -> G (this cocycle lives on G); the result is
    /// automatically a valid normalized cocycle on H.
    pub fn transport(&self, f: &GroupHom) -> Cocycle {
        debug_assert!(f.target == self.group);
        let n = f.source.order();
        let mut values = vec![0u32; n * n];
        for g in 0..n as u16 {
            for h in 0..n as u16 {
                values[g as usize * n + h as usize] = self.value(f.apply(g), f.apply(h));
            }
        }
        Cocycle { group: Arc::clone(&f.source), modulus: self.modulus, values }
    }

    /// Shift by the coboundary of a one-cochain b: G -> Z/n with b(1) = 0:
    /// the result is alpha + delta(b) with
    /// (delta b)(g,h) = b(g) + b(h) - b(gh).
    pub fn shift_by_coboundary(&self, b: &[u32]) -> Result<Cocycle, CocycleError> {
        let n = self.group.order();
        if b.len() != n {
            return Err(CocycleError::SizeMismatch { given: b.len(), expected: n });
        }
        if b[self.group.identity() as usize] % self.modulus as u32 != 0 {
            return Err(CocycleError::CochainNotNormalized);
        }
        let m = self.modulus as u32;
        let mut values = vec![0u32; n * n];
        for g in 0..n as u16 {
            for h in 0..n as u16 {
                let gh = self.group.mul(g, h);
                let delta =
                    (b[g as usize] % m + b[h as usize] % m + m - b[gh as usize] % m) % m;
                values[g as usize * n + h as usize] = (self.value(g, h) + delta) % m;
            }
        }
        Ok(Cocycle { group: Arc::clone(&self.group), modulus: self.modulus, values })
    }

    /// Exhaustive search for a one-cochain b with alpha = delta(b); `None`
    /// when the cocycle is not a coboundary. Cost is modulus^(order-1), so
    /// this is meant for small groups only.
    pub fn coboundary_witness(&self) -> Option<Vec<u32>> {
        let zero = Cocycle::zero(Arc::clone(&self.group), self.modulus);
        all_one_cochains(&self.group, self.modulus)
            .into_iter()
            .find(|b| zero.shift_by_coboundary(b).unwrap() == *self)
    }
}

/// Every one-cochain b: G -> Z/n with b(identity) = 0, in lexicographic
/// order. There are n^(order-1) of them.
pub fn all_one_cochains(group: &Arc<FiniteGroup>, modulus: usize) -> Vec<Vec<u32>> {
    let n = group.order();
    let id = group.identity() as usize;
    let free: Vec<usize> = (0..n).filter(|&i| i != id).collect();
    let total = (modulus as u64).pow(free.len() as u32);
    assert!(total <= 1 << 20, "one-cochain enumeration is exponential; group too large");
    let mut out = Vec::with_capacity(total as usize);
    let mut counter = vec![0u32; free.len()];
    loop {
        let mut b = vec![0u32; n];
        for (slot, &i) in free.iter().enumerate() {
            b[i] = counter[slot];
        }
        out.push(b);
        let mut pos = 0;
        loop {
            if pos == counter.len() {
                return out;
            }
            counter[pos] += 1;
            if (counter[pos] as usize) < modulus {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};

    fn klein() -> Arc<FiniteGroup> {
        build_group(&GroupSpec::klein()).unwrap()
    }

    #[test]
    fn zero_cocycle_valid() {
        let g = klein();
        let c = Cocycle::zero(g, 2);
        assert!(c.validate().is_ok());
        assert!(c.is_zero());
    }

    #[test]
    fn pairing_is_valid_and_not_a_coboundary() {
        let c = Cocycle::pairing_on_klein(klein()).unwrap();
        assert!(c.validate().is_ok());
        // alpha((1,0),(0,1)) = 1, alpha((0,1),(1,0)) = 0: asymmetric
        assert_eq!(c.value(2, 1), 1);
        assert_eq!(c.value(1, 2), 0);
        assert!(c.coboundary_witness().is_none());
    }

    #[test]
    fn pairing_rejects_wrong_group() {
        let c4 = build_group(&GroupSpec::Cyclic(4)).unwrap();
        assert!(Cocycle::pairing_on_klein(c4).is_err());
    }

    #[test]
    fn invalid_tables_detected() {
        let g = klein();
        // random asymmetric junk: break normalization
        let mut values = vec![0u32; 16];
        values[1] = 1; // alpha(identity, x) != 0
        assert!(matches!(
            Cocycle::new(Arc::clone(&g), 2, values),
            Err(CocycleError::NotNormalized { .. })
        ));
        // normalized but violating the cocycle identity
        let mut values = vec![0u32; 16];
        values[5] = 1; // alpha(g1, g1) = 1 only
        let r = Cocycle::new(g, 2, values);
        assert!(matches!(r, Err(CocycleError::IdentityFails { .. })));
    }

    #[test]
    fn transport_identities() {
        let g = klein();
        let c = Cocycle::pairing_on_klein(Arc::clone(&g)).unwrap();
        // pullback along the identity is the same table
        let id = GroupHom::identity(&g);
        assert_eq!(c.transport(&id), c);
        // pullback along the trivial hom is zero
        let c2 = build_group(&GroupSpec::Cyclic(2)).unwrap();
        let t = GroupHom::trivial(&c2, &g);
        assert!(c.transport(&t).is_zero());
        // pullback along the first-factor inclusion a -> (a, 0):
        // alpha((a,0),(c,0)) = a*0 = 0, so the transport is zero
        let incl1 = GroupHom::new(Arc::clone(&c2), Arc::clone(&g), vec![0, 2]).unwrap();
        assert!(c.transport(&incl1).is_zero());
        // pullback along the diagonal a -> (a, a): alpha((a,a),(c,c)) = a*c,
        // which is the nontrivial cocycle on Z/2
        let diag = GroupHom::new(Arc::clone(&c2), Arc::clone(&g), vec![0, 3]).unwrap();
        let restricted = c.transport(&diag);
        assert!(!restricted.is_zero());
        assert_eq!(restricted.value(1, 1), 1);
        // transport along a composite equals composite of transports
        let comp = diag.then(&id);
        assert_eq!(c.transport(&comp), c.transport(&id).transport(&diag));
    }

    #[test]
    fn coboundary_shifts() {
        let g = klein();
        let c = Cocycle::pairing_on_klein(Arc::clone(&g)).unwrap();
        // shifting by zero changes nothing
        assert_eq!(c.shift_by_coboundary(&[0, 0, 0, 0]).unwrap(), c);
        // every shift of a valid cocycle stays valid, and shifting the zero
        // cocycle yields exactly the coboundaries
        let zero = Cocycle::zero(Arc::clone(&g), 2);
        let cochains = all_one_cochains(&g, 2);
        assert_eq!(cochains.len(), 8);
        for b in &cochains {
            let shifted = c.shift_by_coboundary(b).unwrap();
            assert!(shifted.validate().is_ok());
            let cob = zero.shift_by_coboundary(b).unwrap();
            assert!(cob.validate().is_ok());
            assert!(cob.coboundary_witness().is_some());
        }
        // a cochain not vanishing at the identity is rejected
        assert!(c.shift_by_coboundary(&[1, 0, 0, 0]).is_err());
    }
}
