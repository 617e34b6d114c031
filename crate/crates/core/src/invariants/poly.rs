use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer Laurent polynomial in `A`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    /// The loop value `-A^2 - A^-2`.
    pub fn loop_value() -> Self {
        Self::monomial(-1, 2) + Self::monomial(-1, -2)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// `max exponent - min exponent`, or `None` for the zero polynomial.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? as i64 - self.min_exp()? as i64)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitutes `A -> A^-1`.
    pub fn mirror(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn shift(&self, by: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e + by, c)))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (e, c) in rhs.terms {
            self.add_term(c, e);
        }
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(e, c)| format!("{c} A^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, i64> = self.terms().map(|(e, c)| (e.to_string(), c)).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map: BTreeMap<String, i64> = BTreeMap::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (e, c) in map {
            let e: i32 = e.parse().map_err(serde::de::Error::custom)?;
            p.add_term(c, e);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-8i32..8, -5i64..5), 0..6).prop_map(LaurentPoly::from_terms)
    }

    #[test]
    fn loop_value_squared() {
        let d = LaurentPoly::loop_value();
        assert_eq!(d.pow(2), LaurentPoly::from_terms([(4, 1), (0, 2), (-4, 1)]));
        assert_eq!(d.span(), Some(4));
        assert_eq!(d.to_string(), "-1 A^-2 + -1 A^2");
        assert_eq!(LaurentPoly::zero().span(), None);
    }

    #[test]
    fn json_is_an_exponent_map() {
        let p = LaurentPoly::from_terms([(-4, -1), (4, -1)]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"-4":-1,"4":-1}"#);
        assert_eq!(serde_json::from_str::<LaurentPoly>(&j).unwrap(), p);
    }

    proptest! {
        #[test]
        fn ring_laws(a in poly(), b in poly(), c in poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(b.clone() + c.clone()), &a * &b + &a * &c);
            prop_assert!((a.clone() - a.clone()).is_zero());
        }

        #[test]
        fn span_adds_under_products(a in poly(), b in poly()) {
            if let (Some(sa), Some(sb)) = (a.span(), b.span()) {
                prop_assert_eq!((&a * &b).span(), Some(sa + sb));
            }
        }
    }
}
