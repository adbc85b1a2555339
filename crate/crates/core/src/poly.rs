//! Sparse bivariate polynomials over ℚ and dense univariate helpers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, push_term, q_int, Q};

/// `Σ c_{ij} x^i y^j` with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Q>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    i: u32,
    j: u32,
    c: String,
}

impl Serialize for BivarPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<RawTerm> = self.terms.iter().map(|(&(i, j), c)| RawTerm { i, j, c: fmt_q(c) }).collect();
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<RawTerm>::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            terms.push(((t.i, t.j), parse_q(&t.c).map_err(serde::de::Error::custom)?));
        }
        Ok(BivarPoly::from_terms(terms))
    }
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Q)>>(terms: I) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            *out.entry(e).or_insert_with(Q::zero) += c;
        }
        out.retain(|_, c: &mut Q| !c.is_zero());
        BivarPoly { terms: out }
    }

    pub fn from_i64(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), q_int(c))))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant(&self) -> Q {
        self.coeff(0, 0)
    }

    /// Largest `(a,b)` with `x^a y^b` dividing the polynomial.
    pub fn monomial_content(&self) -> (u32, u32) {
        let a = self.terms.keys().map(|e| e.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|e| e.1).min().unwrap_or(0);
        (a, b)
    }

    pub fn divide_monomial(&self, a: u32, b: u32) -> Self {
        BivarPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i - a, j - b), c.clone())).collect() }
    }

    /// `(p,q)`-weighted order `min(p·i + q·j)`.
    pub fn weighted_order(&self, p: u64, q: u64) -> Option<u64> {
        self.terms.keys().map(|&(i, j)| p * i as u64 + q * j as u64).min()
    }

    /// Applies an exponent map; colliding exponents are summed.
    pub fn map_exponents<F: Fn(u32, u32) -> (u32, u32)>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| (f(i, j), c.clone())))
    }

    /// Vertices of the lower convex hull of the support, by increasing `i`.
    pub fn newton_vertices(&self) -> Vec<(u32, u32)> {
        // For each i keep the smallest j, then take the lower hull.
        let mut best: BTreeMap<u32, u32> = BTreeMap::new();
        for &(i, j) in self.terms.keys() {
            best.entry(i).and_modify(|b| *b = (*b).min(j)).or_insert(j);
        }
        let mut hull: Vec<(u32, u32)> = Vec::new();
        for (i, j) in best {
            if hull.last().is_some_and(|&(_, lj)| lj <= j) {
                continue;
            }
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                let cross =
                    (x2 as i64 - x1 as i64) * (j as i64 - y1 as i64) - (y2 as i64 - y1 as i64) * (i as i64 - x1 as i64);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((i, j));
        }
        hull
    }

    /// Primitive inner normals `(p,q)` and weighted orders of the compact
    /// faces of the Newton polygon.
    pub fn newton_faces(&self) -> Vec<(u64, u64, u64)> {
        self.newton_vertices()
            .windows(2)
            .map(|w| {
                let (i1, j1) = w[0];
                let (i2, j2) = w[1];
                let p = (j1 - j2) as u64;
                let q = (i2 - i1) as u64;
                let g = p.gcd(&q);
                let (p, q) = (p / g, q / g);
                (p, q, p * i1 as u64 + q * j1 as u64)
            })
            .collect()
    }

    /// The restriction `f(0, y)` as a dense polynomial in `y`.
    pub fn restrict_x0(&self) -> QPoly {
        let mut coeffs = Vec::new();
        for (&(i, j), c) in &self.terms {
            if i == 0 {
                let j = j as usize;
                if coeffs.len() <= j {
                    coeffs.resize(j + 1, Q::zero());
                }
                coeffs[j] = c.clone();
            }
        }
        QPoly::new(coeffs)
    }

    /// `f(x, c)` and `f(c, y)` specializations, used by the squarefree guard.
    pub fn specialize_x(&self, c: &Q) -> QPoly {
        let mut coeffs: Vec<Q> = Vec::new();
        for (&(i, j), a) in &self.terms {
            let j = j as usize;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, Q::zero());
            }
            coeffs[j] += a * pow_q(c, i);
        }
        QPoly::new(coeffs)
    }

    pub fn swap_xy(&self) -> Self {
        self.map_exponents(|i, j| (j, i))
    }

    /// Substitutes `y = y + c`.
    pub fn shift_y(&self, c: &Q) -> Self {
        let mut out = Vec::new();
        for (&(i, j), a) in &self.terms {
            let mut binom = BigInt::one();
            for k in 0..=j {
                // C(j,k) c^{j-k} y^k
                let coeff = a * Q::from_integer(binom.clone()) * pow_q(c, j - k);
                out.push(((i, k), coeff));
                binom = binom * BigInt::from(j - k) / BigInt::from(k + 1);
            }
        }
        Self::from_terms(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                out.push(((i1 + i2, j1 + j2), a * b));
            }
        }
        Self::from_terms(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::from_i64(&[(0, 0, 1)]);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).map(|(&e, c)| (e, c.clone())))
    }

    /// Exact-arithmetic evaluation.
    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.terms.iter().map(|(&(i, j), c)| c * pow_q(x, i) * pow_q(y, j)).fold(Q::zero(), |a, b| a + b)
    }

    /// Whether the polynomial is probably free of repeated factors.
    ///
    /// Exact in the negative direction: a polynomial with a repeated
    /// non-constant factor always fails. A squarefree polynomial passes
    /// unless every probed specialization is degenerate.
    pub fn looks_squarefree(&self) -> bool {
        let probes: Vec<Q> = (0..8).map(|k| Q::new(BigInt::from(2 * k + 3), BigInt::from(k + 2))).collect();
        let axis_ok = |p: &BivarPoly| {
            let ydeg = p.terms.keys().map(|e| e.1).max().unwrap_or(0);
            ydeg == 0 || probes.iter().any(|c| p.specialize_x(c).is_squarefree())
        };
        let (a, b) = self.monomial_content();
        a <= 1 && b <= 1 && axis_ok(self) && axis_ok(&self.swap_xy())
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (&(i, j), c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    _ => mono.push(format!("{v}^{e}")),
                }
            }
            push_term(&mut out, c, &mono.join("*"));
        }
        write!(f, "{out}")
    }
}

pub fn pow_q(c: &Q, e: u32) -> Q {
    num_traits::pow(c.clone(), e as usize)
}

/// Dense polynomial over ℚ, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Self {
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q_int(i as i64)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
                        - other.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (Self::new(Vec::new()), self.clone());
        }
        let dl = d.coeffs.len();
        let lead = d.lead();
        let mut quot = vec![Q::zero(); rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dl - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Yun's squarefree decomposition: monic factors with their multiplicity.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            if a.degree() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// All rational roots, each once, if the polynomial splits into
    /// rational linear factors; `None` otherwise.
    pub fn rational_split(&self) -> Result<Option<Vec<Q>>> {
        let mut rest = self.monic();
        let mut roots = Vec::new();
        while rest.degree() > 0 {
            if rest.degree() == 1 {
                roots.push(-rest.coeffs[0].clone() / rest.coeffs[1].clone());
                break;
            }
            match rest.find_rational_root()? {
                Some(r) => {
                    rest = rest.divrem(&QPoly::new(vec![-r.clone(), Q::one()])).0;
                    roots.push(r);
                }
                None => return Ok(None),
            }
        }
        roots.sort();
        roots.dedup();
        Ok(Some(roots))
    }

    fn find_rational_root(&self) -> Result<Option<Q>> {
        if self.coeffs[0].is_zero() {
            return Ok(Some(Q::zero()));
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
        let lead = small_divisors(ints.last().expect("nonzero"))?;
        let constant = small_divisors(&ints[0])?;
        for p in &constant {
            for q in &lead {
                for sign in [1i64, -1] {
                    let r = Q::new(BigInt::from(sign * p), BigInt::from(*q));
                    if self.eval(&r).is_zero() {
                        return Ok(Some(r));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }
}

fn small_divisors(n: &BigInt) -> Result<Vec<i64>> {
    let n = n
        .abs()
        .to_i64()
        .filter(|&n| n < 1_000_000_000_000)
        .ok_or_else(|| Error::Unsupported("coefficients too large for the rational root search".into()))?;
    Ok(crate::arith::divisors(n as u64).into_iter().map(|d| d as i64).collect())
}
