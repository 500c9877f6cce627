//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are stored in the canonical basis 1, zeta, ..., zeta^(phi(N)-1)
//! of Q[x]/(Phi_N(x)), with rational coefficients. All products are reduced
//! modulo the N-th cyclotomic polynomial, so equality of coefficient vectors
//! is equality of field elements; values at different levels are compared
//! after lifting both to the least common multiple level via x -> x^(M/N).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

/// Euler's totient.
pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Coefficients of the N-th cyclotomic polynomial, constant term first.
/// Computed by exact division of x^N - 1 by the product of Phi_d over the
/// proper divisors d of N.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    if n == 1 {
        return vec![BigInt::from(-1), BigInt::from(1)];
    }
    // x^n - 1
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = BigInt::from(-1);
    num[n] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = divide_monic(&num, &phi_d);
        }
    }
    num
}

/// Exact division of `num` by the monic polynomial `den` (panics on a
/// nonzero remainder, which would indicate a logic error upstream).
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len().saturating_sub(den.len());
    let mut quot = vec![BigInt::zero(); qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

thread_local! {
    /// Per-thread cache of Phi_N with rational coefficients. Reduction runs
    /// on every arithmetic operation, so recomputing the polynomial each
    /// time would dominate all field arithmetic at composite levels.
    static PHI_RATIONAL: RefCell<HashMap<usize, Rc<Vec<BigRational>>>> =
        RefCell::new(HashMap::new());
}

fn phi_rational(level: usize) -> Rc<Vec<BigRational>> {
    PHI_RATIONAL.with(|cache| {
        if let Some(v) = cache.borrow().get(&level) {
            return Rc::clone(v);
        }
        let v: Rc<Vec<BigRational>> = Rc::new(
            cyclotomic_polynomial(level)
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        );
        cache.borrow_mut().insert(level, Rc::clone(&v));
        v
    })
}

/// An element of Q(zeta_level), reduced modulo the cyclotomic polynomial.
#[derive(Clone)]
pub struct Cyclotomic {
    level: usize,
    /// length phi(level); coeffs[k] multiplies zeta^k
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Cyclotomic {
        Cyclotomic { level: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic { level: 1, coeffs: vec![BigRational::one()] }
    }

    pub fn from_rational(q: BigRational) -> Cyclotomic {
        Cyclotomic { level: 1, coeffs: vec![q] }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Cyclotomic {
        Cyclotomic::from_rational(BigRational::from_integer(n.into()))
    }

    /// zeta_level ^ power
    pub fn root_of_unity(level: usize, power: usize) -> Cyclotomic {
        assert!(level >= 1);
        let mut full = vec![BigRational::zero(); level];
        full[power % level] = BigRational::one();
        Cyclotomic::reduce_full(level, full)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Reduce a length-`level` coefficient vector (exponents mod level)
    /// modulo Phi_level.
    fn reduce_full(level: usize, mut full: Vec<BigRational>) -> Cyclotomic {
        debug_assert_eq!(full.len(), level);
        let phi = phi_rational(level);
        let deg = phi.len() - 1; // = euler_phi(level)
        for i in (deg..full.len()).rev() {
            if full[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut full[i], BigRational::zero());
            for (j, pc) in phi.iter().enumerate().take(deg) {
                let delta = &c * pc;
                full[i - deg + j] -= delta;
            }
        }
        full.truncate(deg.max(1));
        while full.len() < deg {
            full.push(BigRational::zero());
        }
        Cyclotomic { level, coeffs: full }
    }

    /// The same element expressed at a level that `new_level` divides into;
    /// requires level | new_level.
    pub fn lift_to(&self, new_level: usize) -> Cyclotomic {
        assert_eq!(new_level % self.level, 0, "can only lift to a multiple level");
        if new_level == self.level {
            return self.clone();
        }
        let step = new_level / self.level;
        let mut full = vec![BigRational::zero(); new_level];
        for (k, c) in self.coeffs.iter().enumerate() {
            full[k * step] += c;
        }
        Cyclotomic::reduce_full(new_level, full)
    }

    fn binop(&self, other: &Cyclotomic, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Cyclotomic {
        let level = num_integer::lcm(self.level, other.level);
        let a = self.lift_to(level);
        let b = other.lift_to(level);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| f(x, y))
            .collect();
        Cyclotomic { level, coeffs }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        self.binop(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.binop(other, |x, y| x - y)
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let level = num_integer::lcm(self.level, other.level);
        let a = self.lift_to(level);
        let b = other.lift_to(level);
        let mut full = vec![BigRational::zero(); level];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = (i + j) % level;
                full[k] += x * y;
            }
        }
        Cyclotomic::reduce_full(level, full)
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Galois action zeta -> zeta^k; k must be coprime to the level.
    pub fn galois(&self, k: usize) -> Cyclotomic {
        assert_eq!(num_integer::gcd(k, self.level), 1, "galois exponent must be a unit");
        let mut full = vec![BigRational::zero(); self.level];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i * k) % self.level] += c;
        }
        Cyclotomic::reduce_full(self.level, full)
    }

    /// Complex conjugation: zeta -> zeta^(level-1).
    pub fn conj(&self) -> Cyclotomic {
        if self.level == 1 {
            return self.clone();
        }
        self.galois(self.level - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let q = self.as_rational()?;
        if q.is_integer() {
            Some(q.to_integer())
        } else {
            None
        }
    }

    /// Canonical coefficient vector at a specified common level, for
    /// deterministic ordering of sets of values. Requires level | at.
    pub fn coeff_vector_at(&self, at: usize) -> Vec<BigRational> {
        self.lift_to(at).coeffs
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Cyclotomic) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = if c.abs().is_one() && k > 0 { String::new() } else { format!("{}", c.abs()) };
            let var = match k {
                0 => String::new(),
                1 => format!("z{}", self.level),
                _ => format!("z{}^{}", self.level, k),
            };
            let body = match (mag.is_empty(), var.is_empty()) {
                (true, _) => var.clone(),
                (false, true) => mag.clone(),
                (false, false) => format!("{}*{}", mag, var),
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{}", body) } else { body });
            } else {
                parts.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zr(level: usize, power: usize) -> Cyclotomic {
        Cyclotomic::root_of_unity(level, power)
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn cyclotomic_polys() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_4 = x^2 + 1,
        // Phi_6 = x^2 - x + 1, Phi_12 = x^4 - x^2 + 1
        let to_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(to_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let i = zr(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::from_integer(-1));
        assert_eq!(i.mul(&i).mul(&i).mul(&i), Cyclotomic::one());
    }

    #[test]
    fn primitive_root_sums() {
        // 1 + z3 + z3^2 = 0
        let s = Cyclotomic::one().add(&zr(3, 1)).add(&zr(3, 2));
        assert!(s.is_zero());
        // z5 + z5^2 + z5^3 + z5^4 = -1
        let s = zr(5, 1).add(&zr(5, 2)).add(&zr(5, 3)).add(&zr(5, 4));
        assert_eq!(s.as_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn cross_level_equality() {
        assert_eq!(zr(2, 1), zr(4, 2));
        assert_eq!(zr(2, 1), zr(6, 3));
        assert_eq!(zr(4, 2), Cyclotomic::from_integer(-1));
        assert_ne!(zr(4, 1), zr(8, 1));
    }

    #[test]
    fn conjugation() {
        let z8 = zr(8, 1);
        assert_eq!(z8.conj(), zr(8, 7));
        // z + conj(z) for z = z8 is sqrt(2): its square is 2
        let t = z8.add(&z8.conj());
        assert_eq!(t.mul(&t).as_integer(), Some(BigInt::from(2)));
        // conjugation fixes rationals
        let q = Cyclotomic::from_rational(BigRational::new(BigInt::from(3), BigInt::from(7)));
        assert_eq!(q.conj(), q);
    }

    #[test]
    fn norms_are_rational() {
        // (1 + z4)(1 - z4) = 1 - z4^2 = 2
        let p = Cyclotomic::one().add(&zr(4, 1));
        let q = Cyclotomic::one().sub(&zr(4, 1));
        assert_eq!(p.mul(&q).as_integer(), Some(BigInt::from(2)));
        // |1 + z3|^2 = (1 + z3)(1 + z3^2) = 1 + z3 + z3^2 + 1 = 1
        let p = Cyclotomic::one().add(&zr(3, 1));
        assert_eq!(p.mul(&p.conj()).as_integer(), Some(BigInt::from(1)));
    }

    #[test]
    fn galois_orbit_of_trace() {
        // trace of z5 over Q: sum of galois conjugates = -1
        let z = zr(5, 1);
        let tr = z.add(&z.galois(2)).add(&z.galois(3)).add(&z.galois(4));
        assert_eq!(tr.as_integer(), Some(BigInt::from(-1)));
    }
}
