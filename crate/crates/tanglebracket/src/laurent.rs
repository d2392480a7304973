//! Exact arithmetic in the Laurent ring Z[a, a^-1].
//!
//! Everything downstream (transfer matrices, state sums, invariant vectors)
//! is expressed over this ring. Coefficients are 128-bit integers with
//! checked arithmetic: every reachable computation at the supported crossing
//! bounds stays far below 2^127, and an overflow aborts loudly instead of
//! wrapping.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("degree bounds of the zero polynomial are undefined")]
    ZeroDegree,
}

/// A Laurent polynomial in the variable `a` with integer coefficients.
///
/// Stored sparsely as a list of `(exponent, coefficient)` terms, sorted by
/// ascending exponent, with no zero coefficients. Equal values always have
/// identical term lists, so derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, i128)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The single term `coeff * a^exp` (zero if `coeff == 0`).
    pub fn monomial(exp: i64, coeff: i128) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            LaurentPoly {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// The loop value delta = -a^2 - a^-2.
    pub fn delta() -> Self {
        LaurentPoly {
            terms: vec![(-2, -1), (2, -1)],
        }
    }

    /// delta^k for k >= 0.
    pub fn delta_pow(k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(&Self::delta());
        }
        acc
    }

    /// The unit (-a^-3)^k, for any integer k.
    pub fn unit_pow(k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::monomial(-3 * k, sign)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> &[(i64, i128)] {
        &self.terms
    }

    pub fn coeff(&self, exp: i64) -> i128 {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    /// Builds a polynomial from arbitrary (exp, coeff) pairs, combining and
    /// pruning as needed.
    pub fn from_terms<I: IntoIterator<Item = (i64, i128)>>(iter: I) -> Self {
        let mut terms: Vec<(i64, i128)> = iter.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i64, i128)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => {
                    last.1 = last.1.checked_add(c).expect("coefficient overflow")
                }
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        LaurentPoly { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = self.terms[i];
            let (eb, cb) = other.terms[j];
            if ea < eb {
                out.push((ea, ca));
                i += 1;
            } else if eb < ea {
                out.push((eb, cb));
                j += 1;
            } else {
                let c = ca.checked_add(cb).expect("coefficient overflow");
                if c != 0 {
                    out.push((ea, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        LaurentPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Both factors are sparse but their exponent ranges are narrow, so a
        // dense scratch buffer over the product range beats tree insertion.
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.terms[self.terms.len() - 1].0 + other.terms[other.terms.len() - 1].0;
        let mut buf = vec![0i128; (hi - lo + 1) as usize];
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                let idx = (ea + eb - lo) as usize;
                let prod = ca.checked_mul(cb).expect("coefficient overflow");
                buf[idx] = buf[idx].checked_add(prod).expect("coefficient overflow");
            }
        }
        let terms = buf
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (lo + i as i64, c))
            .collect();
        LaurentPoly { terms }
    }

    /// Multiplies by `coeff * a^exp` in place.
    pub fn scale(&self, exp: i64, coeff: i128) -> Self {
        if coeff == 0 {
            return Self::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| (e + exp, c.checked_mul(coeff).expect("coefficient overflow")))
                .collect(),
        }
    }

    /// `(M(p), m(p))`: maximal and minimal exponents. Errors on zero.
    pub fn degree_bounds(&self) -> Result<(i64, i64), LaurentError> {
        if self.terms.is_empty() {
            return Err(LaurentError::ZeroDegree);
        }
        Ok((self.terms[self.terms.len() - 1].0, self.terms[0].0))
    }

    /// `M(p) - m(p)`. Errors on zero.
    pub fn span(&self) -> Result<i64, LaurentError> {
        let (max, min) = self.degree_bounds()?;
        Ok(max - min)
    }

    /// Finds the unique k with `self = (-a^-3)^k * other`, if any.
    ///
    /// Both zero gives k = 0 by convention; exactly one zero gives `None`.
    pub fn unit_quotient(&self, other: &Self) -> Option<i64> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(0),
            (true, false) | (false, true) => return None,
            (false, false) => {}
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let shift = self.terms[0].0 - other.terms[0].0;
        if shift % 3 != 0 {
            return None;
        }
        let k = -shift / 3;
        if *self == other.mul(&Self::unit_pow(k)) {
            Some(k)
        } else {
            None
        }
    }

    /// Exact division: returns `self / divisor` when the remainder is zero.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let (lead_exp, lead_coeff) = *divisor.terms.last().unwrap();
        // In an exact Laurent quotient the minimal exponent is pinned by the
        // operands; dropping below it means the division does not come out.
        let min_quot_exp = self.terms[0].0 - divisor.terms[0].0;
        while !rem.is_zero() {
            let (re, rc) = *rem.terms.last().unwrap();
            if rc % lead_coeff != 0 || re - lead_exp < min_quot_exp {
                return None;
            }
            let q = Self::monomial(re - lead_exp, rc / lead_coeff);
            quot = quot.add(&q);
            rem = rem.sub(&divisor.mul(&q));
            if let Some(&(new_re, _)) = rem.terms.last() {
                if new_re >= re {
                    return None;
                }
            }
        }
        Some(quot)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest exponent first, the way brackets are usually read.
        for (i, &(e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{mag}")?,
                1 => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "a")?;
                }
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "a^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `p(exprs)` builds a polynomial from (exp, coeff) pairs.
    fn p(terms: &[(i64, i128)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn add_cancels() {
        // (a + a^-1) + (-a^-1) = a
        let lhs = p(&[(1, 1), (-1, 1)]).add(&p(&[(-1, -1)]));
        assert_eq!(lhs, p(&[(1, 1)]));
        // p + 0 = p
        let q = p(&[(4, -1), (0, 1)]);
        assert_eq!(q.add(&LaurentPoly::zero()), q);
        // (1 - a^8) + a^8 = 1
        assert_eq!(p(&[(0, 1), (8, -1)]).add(&p(&[(8, 1)])), LaurentPoly::one());
    }

    #[test]
    fn mul_basics() {
        // (a + a^-1)(a - a^-1) = a^2 - a^-2
        assert_eq!(
            p(&[(1, 1), (-1, 1)]).mul(&p(&[(1, 1), (-1, -1)])),
            p(&[(2, 1), (-2, -1)])
        );
        // delta^2 = a^4 + 2 + a^-4
        assert_eq!(
            LaurentPoly::delta().mul(&LaurentPoly::delta()),
            p(&[(4, 1), (0, 2), (-4, 1)])
        );
        assert!(p(&[(3, 7)]).mul(&LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn degree_bounds_and_span() {
        assert_eq!(LaurentPoly::delta().degree_bounds(), Ok((2, -2)));
        assert_eq!(LaurentPoly::delta().span(), Ok(4));
        assert_eq!(p(&[(-6, 1)]).degree_bounds(), Ok((-6, -6)));
        assert_eq!(p(&[(0, 1), (4, -1)]).degree_bounds(), Ok((4, 0)));
        assert_eq!(
            LaurentPoly::zero().degree_bounds(),
            Err(LaurentError::ZeroDegree)
        );
    }

    #[test]
    fn unit_quotient_cases() {
        // a^-6 = (-a^-3)^2 * 1
        assert_eq!(p(&[(-6, 1)]).unit_quotient(&LaurentPoly::one()), Some(2));
        // a^-3 has the wrong sign for (-a^-3)^1
        assert_eq!(p(&[(-3, 1)]).unit_quotient(&LaurentPoly::one()), None);
        // delta = (-a^-3)^-1 * (-a^-3 delta)
        let d = LaurentPoly::delta();
        let shifted = d.mul(&LaurentPoly::unit_pow(1));
        assert_eq!(d.unit_quotient(&shifted), Some(-1));
        assert_eq!(LaurentPoly::zero().unit_quotient(&LaurentPoly::zero()), Some(0));
        assert_eq!(LaurentPoly::zero().unit_quotient(&LaurentPoly::one()), None);
    }

    #[test]
    fn div_exact_works() {
        // (1 - a^8) / (1 + a^4) = 1 - a^4
        let num = p(&[(0, 1), (8, -1)]);
        let den = p(&[(0, 1), (4, 1)]);
        assert_eq!(num.div_exact(&den), Some(p(&[(0, 1), (4, -1)])));
        // a not divisible by 1 + a^4
        assert_eq!(p(&[(1, 1)]).div_exact(&den), None);
    }

    #[test]
    fn display_formatting() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::delta().to_string(), "-a^2 - a^-2");
        assert_eq!(p(&[(0, 1), (-2, 3)]).to_string(), "1 + 3a^-2");
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(((-8i64..8), (-5i128..5)), 0..6)
            .prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn unit_orbit_recovered(a in arb_poly(), k in -12i64..12) {
            prop_assume!(!a.is_zero());
            let shifted = a.mul(&LaurentPoly::unit_pow(k));
            prop_assert_eq!(shifted.unit_quotient(&a), Some(k));
        }

        #[test]
        fn degrees_add_under_mul(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let (ma, na) = a.degree_bounds().unwrap();
            let (mb, nb) = b.degree_bounds().unwrap();
            prop_assert_eq!(a.mul(&b).degree_bounds().unwrap(), (ma + mb, na + nb));
        }
    }
}
