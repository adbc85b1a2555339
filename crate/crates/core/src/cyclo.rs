//! Formal products of `(t^m - 1)` factors.
//!
//! Every characteristic polynomial and zeta function in the crate lives in
//! this basis. Signs are ignored: `1 - t^m` and `t^m - 1` are the same factor.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, mobius};
use crate::error::{Error, Result};

/// `∏ (t^m - 1)^{e_m}` with nonzero integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawProduct", into = "RawProduct")]
pub struct CycloProduct {
    factors: BTreeMap<u64, i64>,
}

#[derive(Serialize, Deserialize)]
struct RawProduct {
    factors: BTreeMap<u64, i64>,
}

impl TryFrom<RawProduct> for CycloProduct {
    type Error = Error;
    fn try_from(raw: RawProduct) -> Result<Self> {
        if raw.factors.contains_key(&0) {
            return Err(Error::InvalidInput("cyclotomic factor key must be positive".into()));
        }
        Ok(CycloProduct::from_pairs(raw.factors))
    }
}

impl From<CycloProduct> for RawProduct {
    fn from(c: CycloProduct) -> Self {
        RawProduct { factors: c.factors }
    }
}

/// Multiplicities `c_n` of the cyclotomic polynomials `Φ_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycloDivisor {
    pub mult: BTreeMap<u64, i64>,
}

impl CycloProduct {
    pub fn one() -> Self {
        Self::default()
    }

    /// `(t^m - 1)^e`.
    pub fn factor(m: u64, e: i64) -> Self {
        Self::from_pairs([(m, e)])
    }

    /// Builds a product, summing repeated keys and dropping zero exponents.
    ///
    /// Panics on key 0.
    pub fn from_pairs<I: IntoIterator<Item = (u64, i64)>>(pairs: I) -> Self {
        let mut factors = BTreeMap::new();
        for (m, e) in pairs {
            assert!(m > 0, "cyclotomic factor key must be positive");
            *factors.entry(m).or_insert(0) += e;
        }
        factors.retain(|_, e| *e != 0);
        CycloProduct { factors }
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    pub fn exponent(&self, m: u64) -> i64 {
        self.factors.get(&m).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// `a · b^{sign}`.
    pub fn combine(&self, other: &Self, sign: i64) -> Self {
        assert!(sign == 1 || sign == -1);
        Self::from_pairs(
            self.factors.iter().map(|(&m, &e)| (m, e)).chain(other.factors.iter().map(|(&m, &e)| (m, sign * e))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    pub fn pow(&self, n: i64) -> Self {
        Self::from_pairs(self.factors.iter().map(|(&m, &e)| (m, e * n)))
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(&m, &e)| m as i64 * e).sum()
    }

    /// `t ↦ t^s`.
    pub fn substitute_power(&self, s: u64) -> Self {
        assert!(s > 0);
        Self::from_pairs(self.factors.iter().map(|(&m, &e)| (m * s, e)))
    }

    /// Characteristic polynomial of the `k`-th power of an endomorphism with
    /// characteristic polynomial `self`.
    pub fn power_char(&self, k: u64) -> Result<Self> {
        assert!(k > 0);
        self.check_polynomial()?;
        Ok(self.power_char_formal(k))
    }

    /// The same factor rule applied without the polynomial check.
    pub fn power_char_formal(&self, k: u64) -> Self {
        Self::from_pairs(self.factors.iter().map(|(&m, &e)| {
            let g = num_integer::gcd(m, k);
            (m / g, e * g as i64)
        }))
    }

    /// Multiplicity of a primitive `n`-th root of unity.
    pub fn root_multiplicity(&self, n: u64) -> i64 {
        self.factors.iter().filter(|(&m, _)| m % n == 0).map(|(_, &e)| e).sum()
    }

    pub fn to_divisor(&self) -> CycloDivisor {
        let mut ns: Vec<u64> = self.factors.keys().flat_map(|&m| divisors(m)).collect();
        ns.sort_unstable();
        ns.dedup();
        let mult = ns.into_iter().map(|n| (n, self.root_multiplicity(n))).filter(|(_, c)| *c != 0).collect();
        CycloDivisor { mult }
    }

    pub fn from_divisor(div: &CycloDivisor) -> Self {
        Self::from_pairs(
            div.mult.iter().flat_map(|(&n, &c)| divisors(n).into_iter().map(move |m| (m, c * mobius(n / m)))),
        )
    }

    /// Smallest `n` whose primitive roots have negative multiplicity.
    pub fn negative_witness(&self) -> Option<u64> {
        self.to_divisor().mult.into_iter().find(|(_, c)| *c < 0).map(|(n, _)| n)
    }

    pub fn is_polynomial(&self) -> bool {
        self.negative_witness().is_none()
    }

    pub fn check_polynomial(&self) -> Result<()> {
        match self.negative_witness() {
            Some(witness) => Err(Error::NotPolynomial { witness }),
            None => Ok(()),
        }
    }

    /// Expands into integer coefficients.
    pub fn expand(&self) -> Result<DensePoly> {
        self.check_polynomial()?;
        let mut p = DensePoly::one();
        for (&m, &e) in self.factors.iter().filter(|(_, e)| **e > 0) {
            for _ in 0..e {
                p = p.mul_binomial(m);
            }
        }
        for (&m, &e) in self.factors.iter().filter(|(_, e)| **e < 0) {
            for _ in 0..-e {
                p = p.div_binomial(m).ok_or_else(|| Error::Internal(format!("t^{m} - 1 does not divide")))?;
            }
        }
        Ok(p)
    }

    /// Greatest common divisor, computed in the cyclotomic basis.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_polynomial()?;
        other.check_polynomial()?;
        let a = self.to_divisor().mult;
        let b = other.to_divisor().mult;
        let mult = a.iter().filter_map(|(n, &c)| b.get(n).map(|&d| (*n, c.min(d)))).collect();
        Ok(Self::from_divisor(&CycloDivisor { mult }))
    }

    /// Whether `other` divides `self` as polynomials.
    pub fn divides_into(&self, other: &Self) -> bool {
        self.div(other).is_polynomial()
    }

    /// Recovers the factorization of a polynomial whose roots are roots of
    /// unity, up to sign.
    pub fn from_dense(p: &DensePoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        let mut rest = p.clone();
        let mut mult = BTreeMap::new();
        let deg = p.degree() as u64;
        let mut n = 1u64;
        while rest.degree() > 0 {
            // φ(n) ≥ sqrt(n/2), so n ≤ 2 deg² bounds the search.
            if n > 2 * deg * deg + 2 {
                return Err(Error::NotQuasiUnipotent(rest.to_string()));
            }
            if euler_phi(n) as usize <= rest.degree() {
                let phi = cyclotomic_poly(n);
                while let Some(q) = rest.div_exact(&phi) {
                    rest = q;
                    *mult.entry(n).or_insert(0) += 1;
                }
            }
            n += 1;
        }
        let c = &rest.coeffs[0];
        if !c.abs().is_one() {
            return Err(Error::NotQuasiUnipotent(rest.to_string()));
        }
        Ok(Self::from_divisor(&CycloDivisor { mult }))
    }
}

impl fmt::Display for CycloProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(&m, &e)| {
                let base = if m == 1 { "(t-1)".to_string() } else { format!("(t^{m}-1)") };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `Φ_n` expanded.
pub fn cyclotomic_poly(n: u64) -> DensePoly {
    let mut mult = BTreeMap::new();
    mult.insert(n, 1);
    CycloProduct::from_divisor(&CycloDivisor { mult }).expand().expect("cyclotomic polynomials are polynomials")
}

/// Integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensePoly {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawDense {
    coeffs: Vec<String>,
}

impl Serialize for DensePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawDense { coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDense::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| c.trim().parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(DensePoly::new(coeffs))
    }
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Multiplies by `t^m - 1`.
    pub fn mul_binomial(&self, m: u64) -> Self {
        let m = m as usize;
        let mut out = vec![BigInt::zero(); self.coeffs.len() + m];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + m] += c;
            out[i] -= c;
        }
        Self::new(out)
    }

    /// Exact division by `t^m - 1`.
    pub fn div_binomial(&self, m: u64) -> Option<Self> {
        let m = m as usize;
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.coeffs.len() <= m {
            return None;
        }
        // p_i = q_{i-m} - q_i
        let qlen = self.coeffs.len() - m;
        let mut q = vec![BigInt::zero(); qlen];
        for i in 0..qlen {
            let prev = if i >= m { q[i - m].clone() } else { BigInt::zero() };
            q[i] = prev - &self.coeffs[i];
        }
        let q = Self::new(q);
        (q.mul_binomial(m as u64) == *self).then_some(q)
    }

    /// Exact division by a monic divisor.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dl = divisor.coeffs.len();
        assert!(dl > 0 && divisor.coeffs[dl - 1].is_one());
        if self.coeffs.len() < dl {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); rem.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = rem[i + dl - 1].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            q[i] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    pub fn eval_f64(&self, z: (f64, f64)) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let mut acc = (0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            acc = (acc.0 * z.0 - acc.1 * z.1 + c, acc.0 * z.1 + acc.1 * z.0);
        }
        acc
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let q = crate::rational::Q::from_integer(c.clone());
            crate::rational::push_term(&mut out, &q, &mono);
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cp(pairs: &[(u64, i64)]) -> CycloProduct {
        CycloProduct::from_pairs(pairs.iter().copied())
    }

    fn cusp() -> CycloProduct {
        cp(&[(6, 1), (1, 1), (2, -1), (3, -1)])
    }

    #[test]
    fn combine_examples() {
        assert!(cp(&[(6, 1)]).mul(&cp(&[(6, -1)])).is_one());
        assert_eq!(cp(&[(2, 1)]).mul(&cp(&[(3, 1)])), cp(&[(2, 1), (3, 1)]));
        assert_eq!(cp(&[(6, 2)]).div(&cp(&[(6, 1)])), cp(&[(6, 1)]));
    }

    #[test]
    fn power_char_examples() {
        assert_eq!(cp(&[(6, 1)]).power_char(2).unwrap(), cp(&[(3, 2)]));
        assert_eq!(cp(&[(5, 3)]).power_char(1).unwrap(), cp(&[(5, 3)]));
        assert_eq!(cp(&[(2, 1)]).power_char(2).unwrap(), cp(&[(1, 2)]));
        assert!(cp(&[(1, 1), (2, -1)]).power_char(2).is_err());
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(cp(&[(2, 1)]).substitute_power(3), cp(&[(6, 1)]));
        assert_eq!(cp(&[(1, 1)]).substitute_power(7), cp(&[(7, 1)]));
        assert_eq!(cp(&[(2, 1), (3, -1)]).substitute_power(2), cp(&[(4, 1), (6, -1)]));
    }

    #[test]
    fn expand_examples() {
        assert_eq!(cp(&[(1, 1)]).expand().unwrap(), DensePoly::from_i64(&[-1, 1]));
        assert_eq!(cusp().expand().unwrap(), DensePoly::from_i64(&[1, -1, 1]));
        assert_eq!(cusp().expand().unwrap().to_string(), "t^2 - t + 1");
        assert_eq!(cp(&[(1, 1), (2, -1)]).expand(), Err(Error::NotPolynomial { witness: 2 }));
    }

    #[test]
    fn root_multiplicity_examples() {
        assert_eq!(cp(&[(6, 1)]).root_multiplicity(6), 1);
        assert_eq!(cp(&[(6, 1)]).root_multiplicity(4), 0);
        assert_eq!(cp(&[(6, 1), (2, 1)]).root_multiplicity(2), 2);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(cp(&[(1, 2)]).gcd(&cp(&[(2, 1)])).unwrap(), cp(&[(1, 1)]));
        assert_eq!(cp(&[(6, 1)]).gcd(&cp(&[(6, 1)])).unwrap(), cp(&[(6, 1)]));
        // (t^2-1)(t-1) = Φ1²Φ2, so the gcd with (t-1)^5 is (t-1)^2
        assert_eq!(cp(&[(1, 5)]).gcd(&cp(&[(2, 1), (1, 1)])).unwrap(), cp(&[(1, 2)]));
        assert_eq!(cp(&[(1, 5)]).gcd(&cp(&[(2, 1)])).unwrap(), cp(&[(1, 1)]));
    }

    #[test]
    fn cyclotomic_and_factoring() {
        assert_eq!(cyclotomic_poly(10), DensePoly::from_i64(&[1, -1, 1, -1, 1]));
        assert_eq!(CycloProduct::from_dense(&cyclotomic_poly(6)).unwrap(), cusp());
        let p = cp(&[(6, 9), (1, -1)]).expand().unwrap();
        assert_eq!(CycloProduct::from_dense(&p).unwrap(), cp(&[(6, 9), (1, -1)]));
        // t^2 - 3t + 1 has no root of unity
        assert!(matches!(
            CycloProduct::from_dense(&DensePoly::from_i64(&[1, -3, 1])),
            Err(Error::NotQuasiUnipotent(_))
        ));
    }

    #[test]
    fn serde_shapes() {
        let s = serde_json::to_string(&cusp()).unwrap();
        assert_eq!(s, r#"{"factors":{"1":1,"2":-1,"3":-1,"6":1}}"#);
        let back: CycloProduct = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cusp());
        let z: CycloProduct = serde_json::from_str(r#"{"factors":{"4":0}}"#).unwrap();
        assert!(z.is_one());
        assert!(serde_json::from_str::<CycloProduct>(r#"{"factors":{"0":1}}"#).is_err());
        let d = serde_json::to_string(&cusp().expand().unwrap()).unwrap();
        assert_eq!(d, r#"{"coeffs":["1","-1","1"]}"#);
    }

    fn polynomial_product() -> impl Strategy<Value = CycloProduct> {
        prop::collection::btree_map(1u64..=12, 0i64..=2, 0..4).prop_map(|mult| {
            CycloProduct::from_divisor(&CycloDivisor { mult: mult.into_iter().filter(|(_, c)| *c > 0).collect() })
        })
    }

    proptest! {
        #[test]
        fn power_char_preserves_degree(a in polynomial_product(), k in 1u64..=8) {
            prop_assert_eq!(a.power_char(k).unwrap().degree(), a.degree());
        }

        #[test]
        fn power_char_composes(a in polynomial_product(), j in 1u64..=6, k in 1u64..=6) {
            let lhs = a.power_char(j).unwrap().power_char(k).unwrap();
            prop_assert_eq!(lhs, a.power_char(j * k).unwrap());
        }

        #[test]
        fn divisor_round_trip(pairs in prop::collection::vec((1u64..=200, -3i64..=3), 0..6)) {
            let a = CycloProduct::from_pairs(pairs);
            prop_assert_eq!(CycloProduct::from_divisor(&a.to_divisor()), a);
        }

        #[test]
        fn expand_is_multiplicative(a in polynomial_product(), b in polynomial_product()) {
            let lhs = a.mul(&b).expand().unwrap();
            prop_assert_eq!(lhs, a.expand().unwrap().mul(&b.expand().unwrap()));
        }

        #[test]
        fn degree_is_phi_weighted(pairs in prop::collection::vec((1u64..=60, -3i64..=3), 0..6)) {
            let a = CycloProduct::from_pairs(pairs);
            let total: i64 = a.to_divisor().mult.iter().map(|(&n, &c)| euler_phi(n) as i64 * c).sum();
            prop_assert_eq!(total, a.degree());
        }
    }
}
