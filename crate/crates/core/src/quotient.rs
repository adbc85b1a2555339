//! Cyclic and abelian quotient singularity types, Hirzebruch-Jung chains and
//! weighted blow-up numerics.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::rational::{q_int, Q};

/// `X(d | A)`: the quotient of `ℂ^n` by `μ_{d_1} × … × μ_{d_r}` acting
/// diagonally with exponent rows `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientType {
    pub d: Vec<u64>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
}

impl QuotientType {
    pub fn new(d: Vec<u64>, a: Vec<Vec<i64>>) -> Result<Self> {
        if d.is_empty() || d.len() != a.len() {
            return Err(Error::InvalidInput("quotient type needs one action row per group order".into()));
        }
        let n = a[0].len();
        if !(1..=3).contains(&n) || a.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("quotient type must act on 1, 2 or 3 coordinates".into()));
        }
        if d.contains(&0) {
            return Err(Error::InvalidInput("group orders must be positive".into()));
        }
        let a = d.iter().zip(a).map(|(&di, row)| row.into_iter().map(|x| x.rem_euclid(di as i64)).collect()).collect();
        Ok(QuotientType { d, a })
    }

    /// `1/d(a_1, …, a_n)`.
    pub fn cyclic(d: u64, weights: &[i64]) -> Self {
        Self::new(vec![d], vec![weights.to_vec()]).expect("valid cyclic type")
    }

    pub fn smooth(dim: usize) -> Self {
        Self::cyclic(1, &vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.a[0].len()
    }

    pub fn is_smooth(&self) -> bool {
        self.d.iter().all(|&d| d == 1)
    }

    /// Order and exponents of a cyclic two-dimensional type, as stored.
    pub fn as_cyclic2(&self) -> Option<(u64, i64, i64)> {
        (self.d.len() == 1 && self.dim() == 2).then(|| (self.d[0], self.a[0][0], self.a[0][1]))
    }

    /// Order `d` and `β` of a normal form `1/d(1,β)`.
    pub fn normal_pair(&self) -> Option<(u64, i64)> {
        match self.as_cyclic2()? {
            (1, _, _) => Some((1, 0)),
            (d, 1, b) => Some((d, b)),
            _ => None,
        }
    }

    /// Unordered representative `1/d(1, min(β, β⁻¹))`, used to compare
    /// isomorphism classes without a coordinate order.
    pub fn canonical(&self) -> Self {
        let n = normalize_type(self);
        match n.normal_pair() {
            Some((d, b)) if d > 1 => {
                let inv = mod_inverse(b, d as i64).expect("normal form has unit β");
                Self::cyclic(d, &[1, b.min(inv)])
            }
            _ => n,
        }
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_smooth() {
            return write!(f, "smooth");
        }
        let row = |r: &Vec<i64>| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.d.len() == 1 {
            write!(f, "1/{}({})", self.d[0], row(&self.a[0]))
        } else {
            let ds = self.d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let rows = self.a.iter().map(row).collect::<Vec<_>>().join(";");
            write!(f, "X({ds}|{rows})")
        }
    }
}

/// Normal form of a quotient type.
///
/// In dimension 2 the result is `1/h(1,β)` with `gcd(h,β)=1` (the coordinate
/// order is kept), or the smooth type. In dimension 1 and 3 only rows are
/// reduced.
pub fn normalize_type(q: &QuotientType) -> QuotientType {
    match q.dim() {
        2 => normalize2(q),
        n => normalize_rows(q, n),
    }
}

fn normalize_rows(q: &QuotientType, n: usize) -> QuotientType {
    let mut d = Vec::new();
    let mut a = Vec::new();
    for (&di, row) in q.d.iter().zip(&q.a) {
        let g = row.iter().fold(di as i64, |g, &x| gcd(g, x));
        let dn = di / g as u64;
        if dn > 1 {
            d.push(dn);
            a.push(row.iter().map(|&x| (x / g).rem_euclid(dn as i64)).collect());
        }
    }
    if d.is_empty() {
        return QuotientType::smooth(n);
    }
    QuotientType { d, a }
}

fn normalize2(q: &QuotientType) -> QuotientType {
    // The group as a subgroup of (ℤ/L)² with L the lcm of the orders.
    let l = q.d.iter().fold(1u64, |l, &d| l.lcm(&d)) as i64;
    let gens: Vec<(i64, i64)> =
        q.d.iter()
            .zip(&q.a)
            .map(|(&d, row)| {
                let s = l / d as i64;
                (row[0] * s, row[1] * s)
            })
            .collect();
    reduce_diagonal(l, &gens).ty
}

/// A diagonal group on `ℂ²` split into its pseudo-reflection parts and the
/// small cyclic quotient acting on `(u^{e_u}, v^{e_v})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalReduction {
    pub e_u: u64,
    pub e_v: u64,
    pub ty: QuotientType,
}

/// Reduces the group generated by `gens` (exponents over `ℤ/l`).
pub fn reduce_diagonal(l: i64, gens: &[(i64, i64)]) -> DiagonalReduction {
    let gens: Vec<(i64, i64)> = gens.iter().map(|&(x, y)| (x.rem_euclid(l), y.rem_euclid(l))).collect();
    let mut seen = BTreeSet::from([(0i64, 0i64)]);
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    while let Some((x, y)) = queue.pop_front() {
        for &(gx, gy) in &gens {
            let next = ((x + gx) % l, (y + gy) % l);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let order = seen.len() as i64;
    let e_u = seen.iter().filter(|(_, y)| *y == 0).count() as i64;
    let e_v = seen.iter().filter(|(x, _)| *x == 0).count() as i64;
    let h = order / (e_u * e_v);
    let ty = if h == 1 {
        QuotientType::smooth(2)
    } else {
        // Image on (u^{e_u}, v^{e_v}); a small group here is cyclic of order h.
        let (alpha, beta) = seen
            .iter()
            .map(|&(x, y)| ((x * e_u).rem_euclid(l) * h / l, (y * e_v).rem_euclid(l) * h / l))
            .find(|&(ax, by)| gcd(ax, h) == 1 && gcd(by, h) == 1)
            .expect("small abelian group of a surface quotient is cyclic");
        let inv = mod_inverse(alpha, h).expect("unit");
        QuotientType::cyclic(h as u64, &[1, (beta * inv).rem_euclid(h)])
    };
    DiagonalReduction { e_u: e_u as u64, e_v: e_v as u64, ty }
}

/// Ceiling continued fraction `q = b_1 - 1/(b_2 - 1/(…))`, all `b_i ≥ 2`.
pub fn continued_fraction(q: &Q) -> Result<Vec<i64>> {
    if *q <= Q::one() {
        return Err(Error::InvalidInput(format!("continued fraction needs q > 1, got {q}")));
    }
    let mut out = Vec::new();
    let mut x = q.clone();
    loop {
        let b = x.ceil();
        out.push(i64::try_from(b.to_integer()).map_err(|_| Error::InvalidInput("entry too large".into()))?);
        if b == x {
            return Ok(out);
        }
        x = (b - x).recip();
    }
}

pub fn eval_continued_fraction(b: &[i64]) -> Q {
    let mut acc: Option<Q> = None;
    for &bi in b.iter().rev() {
        acc = Some(match acc {
            None => q_int(bi),
            Some(x) => q_int(bi) - x.recip(),
        });
    }
    acc.unwrap_or_else(Q::zero)
}

/// Linear chain of the minimal resolution of `1/d(1,β)`.
///
/// `E_1` meets the strict transform of `{x₂=0}`, whose self-intersection
/// drops by `β/d` (`correction`); `E_r` meets `{x₁=0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HJChain {
    pub b: Vec<i64>,
    #[serde(with = "crate::rational::q_string")]
    pub correction: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u64>>,
}

impl HJChain {
    pub fn self_intersections(&self) -> Vec<i64> {
        self.b.iter().map(|b| -b).collect()
    }

    /// Correction at the `{x₁=0}` end: `-β⁻¹/d`.
    pub fn far_correction(&self) -> Q {
        let d = self.order();
        let beta = (-self.correction.clone() * q_int(d)).to_integer();
        let beta = i64::try_from(beta).expect("small");
        let inv = if d == 1 { 0 } else { mod_inverse(beta, d).expect("unit") };
        -Q::new(inv.into(), d.into())
    }

    pub fn order(&self) -> i64 {
        tridiagonal_det(&self.b).abs()
    }
}

pub fn hj_resolve(d: u64, beta: u64) -> Result<HJChain> {
    if beta == 0 || beta >= d || gcd(d as i64, beta as i64) != 1 {
        return Err(Error::InvalidInput(format!("1/{d}(1,{beta}) is not a normalized cyclic type")));
    }
    let b = continued_fraction(&Q::new((d as i64).into(), (beta as i64).into()))?;
    Ok(HJChain { b, correction: -Q::new((beta as i64).into(), (d as i64).into()), multiplicities: None })
}

/// Determinant of the tridiagonal matrix with diagonal `-b_i` and unit
/// off-diagonal.
pub fn tridiagonal_det(b: &[i64]) -> i64 {
    let (mut prev, mut cur) = (0i64, 1i64);
    for &bi in b {
        (prev, cur) = (cur, -bi * cur - prev);
    }
    cur
}

/// Multiplicities `m_1..m_r` on a chain with `m_{i-1} - b_i m_i + m_{i+1} = 0`
/// and boundary values `m_0 = left`, `m_{r+1} = right`.
pub fn chain_multiplicities(b: &[i64], left: &Q, right: &Q) -> Result<Vec<u64>> {
    if b.is_empty() {
        return Ok(Vec::new());
    }
    // m_i = x_i·m_1 + y_i, propagate to m_{r+1}.
    let mut coeffs: Vec<(Q, Q)> = vec![(Q::zero(), left.clone()), (Q::one(), Q::zero())];
    for (i, &bi) in b.iter().enumerate() {
        let (x1, y1) = coeffs[i + 1].clone();
        let (x0, y0) = coeffs[i].clone();
        coeffs.push((x1 * q_int(bi) - x0, y1 * q_int(bi) - y0));
    }
    let (xr, yr) = coeffs[b.len() + 1].clone();
    let m1 = (right - yr) / xr;
    coeffs[1..=b.len()]
        .iter()
        .map(|(x, y)| {
            let m = x * &m1 + y;
            if !m.is_integer() || !m.is_positive() {
                return Err(Error::NonIntegralMultiplicity(format!(
                    "chain {b:?} with ends {left}, {right} yields {m}"
                )));
            }
            u64::try_from(m.to_integer()).map_err(|_| Error::NonIntegralMultiplicity(m.to_string()))
        })
        .collect()
}

/// Normalization of `{z^k = u^a v^b}`: one type per component.
pub fn suspension_normalize(k: u64, a: u64, b: u64) -> Vec<QuotientType> {
    let g = k.gcd(&a).gcd(&b);
    let (k, a, b) = (k / g, a / g, b / g);
    let ga = a.gcd(&k);
    let (k1, a1) = (k / ga, a / ga);
    let gb = b.gcd(&k1);
    let (k2, b2) = (k1 / gb, b / gb);
    let t = if k2 == 1 {
        QuotientType::smooth(2)
    } else {
        let inv = mod_inverse(a1 as i64, k2 as i64).expect("a1 is prime to k2");
        let c = (b2 as i64 * inv).rem_euclid(k2 as i64);
        normalize_type(&QuotientType::cyclic(k2, &[1, k2 as i64 - c]))
    };
    vec![t; g as usize]
}

/// Exceptional divisor data of a weighted blow-up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupData {
    #[serde(with = "crate::rational::q_string")]
    pub exc_self_int: Q,
    pub sing_points: Vec<(String, QuotientType)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exc_multiplicity: Option<u64>,
}

/// `(p,q)`-blow-up of `1/d(p,q)` (or of a smooth point when `d = 1`).
pub fn wblowup2(d: u64, p: u64, q: u64) -> Result<BlowupData> {
    let (di, pi, qi) = (d as i64, p as i64, q as i64);
    if p == 0 || q == 0 || d == 0 || gcd(di, pi) != 1 || gcd(di, qi) != 1 || gcd(pi, qi) != 1 {
        return Err(Error::InvalidInput(format!("weights ({p},{q}) with order {d} are not pairwise coprime")));
    }
    let mut sing_points = Vec::new();
    for (label, t) in
        [("origin-x", QuotientType::cyclic(p, &[-di, qi])), ("origin-y", QuotientType::cyclic(q, &[pi, -di]))]
    {
        let t = normalize_type(&t);
        if !t.is_smooth() {
            sing_points.push((label.to_string(), t));
        }
    }
    Ok(BlowupData { exc_self_int: -Q::new(di.into(), (pi * qi).into()), sing_points, exc_multiplicity: None })
}

/// Singular locus of the `(p,q,r)`-blow-up of a smooth 3-fold point.
///
/// Vertices carry their 3-dimensional cyclic type; singular edges carry the
/// transversal surface type.
pub fn wblowup3_smooth(p: u64, q: u64, r: u64) -> Result<Vec<(String, QuotientType)>> {
    if p == 0 || q == 0 || r == 0 || p.gcd(&q).gcd(&r) != 1 {
        return Err(Error::InvalidInput(format!("weight ({p},{q},{r}) must be positive with gcd 1")));
    }
    let (pi, qi, ri) = (p as i64, q as i64, r as i64);
    let mut out = Vec::new();
    for (label, w, row) in [("vertex-x", p, [-1, qi, ri]), ("vertex-y", q, [pi, -1, ri]), ("vertex-z", r, [pi, qi, -1])]
    {
        if w > 1 {
            out.push((label.to_string(), QuotientType::cyclic(w, &row)));
        }
    }
    for (label, g, other) in [("edge-x=0", q.gcd(&r), pi), ("edge-y=0", p.gcd(&r), qi), ("edge-z=0", p.gcd(&q), ri)] {
        if g > 1 {
            out.push((label.to_string(), normalize_type(&QuotientType::cyclic(g, &[-1, other]))));
        }
    }
    Ok(out)
}
