//! Weighted-homogeneous decomposition of germs in three variables and the
//! avoidance conditions defining weighted Lê-Yomdin singularities.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::pow_q;
use crate::rational::{fmt_q, parse_q, push_term, q_int, Q};

/// `Σ c x^i y^j z^l` with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrivarPoly {
    terms: BTreeMap<(u32, u32, u32), Q>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    i: u32,
    j: u32,
    l: u32,
    c: String,
}

impl Serialize for TrivarPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<RawTerm> = self.terms.iter().map(|(&(i, j, l), c)| RawTerm { i, j, l, c: fmt_q(c) }).collect();
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrivarPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<RawTerm>::deserialize(d)?;
        let terms = raw
            .into_iter()
            .map(|t| Ok(((t.i, t.j, t.l), parse_q(&t.c)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(TrivarPoly::from_terms(terms))
    }
}

impl TrivarPoly {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32, u32), Q)>>(terms: I) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            *out.entry(e).or_insert_with(Q::zero) += c;
        }
        out.retain(|_, c: &mut Q| !c.is_zero());
        TrivarPoly { terms: out }
    }

    pub fn from_i64(terms: &[(u32, u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(i, j, l, c)| ((i, j, l), q_int(c))))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).map(|(&e, c)| (e, c.clone())))
    }

    pub fn eval(&self, p: &[Q; 3]) -> Q {
        self.terms.iter().map(|(&(i, j, l), c)| c * pow_q(&p[0], i) * pow_q(&p[1], j) * pow_q(&p[2], l)).sum()
    }

    /// Order at the origin of the affine chart where `vertex` is set to 1.
    pub fn chart_multiplicity(&self, vertex: Vertex) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j, l)| match vertex {
                Vertex::X => j + l,
                Vertex::Y => i + l,
                Vertex::Z => i + j,
            })
            .min()
    }
}

impl fmt::Display for TrivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (&(i, j, l), c) in self.terms.iter().rev() {
            let mono: Vec<String> = [("x", i), ("y", j), ("z", l)]
                .into_iter()
                .filter(|&(_, e)| e > 0)
                .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            push_term(&mut out, c, &mono.join("*"));
        }
        write!(f, "{out}")
    }
}

/// `ω = (p, q, r)`, positive with `gcd = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[u64; 3]", into = "[u64; 3]")]
pub struct WeightVector([u64; 3]);

impl WeightVector {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::InvalidInput(format!("weights ({p},{q},{r}) must be positive")));
        }
        if p.gcd(&q).gcd(&r) != 1 {
            return Err(Error::InvalidInput(format!("weights ({p},{q},{r}) must have gcd 1")));
        }
        Ok(WeightVector([p, q, r]))
    }

    pub fn degree(&self, (i, j, l): (u32, u32, u32)) -> u64 {
        self.0[0] * i as u64 + self.0[1] * j as u64 + self.0[2] * l as u64
    }

    pub fn weight(&self, v: Vertex) -> u64 {
        self.0[v as usize]
    }

    pub fn as_array(&self) -> [u64; 3] {
        self.0
    }

    /// `λ · P = (λ^p x, λ^q y, λ^r z)`.
    fn act(&self, lambda: &Q, p: &[Q; 3]) -> [Q; 3] {
        std::array::from_fn(|i| pow_q(lambda, self.0[i] as u32) * &p[i])
    }
}

impl TryFrom<[u64; 3]> for WeightVector {
    type Error = Error;
    fn try_from(w: [u64; 3]) -> Result<Self> {
        Self::new(w[0], w[1], w[2])
    }
}

impl From<WeightVector> for [u64; 3] {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Coordinate vertices `[1:0:0]`, `[0:1:0]`, `[0:0:1]` of the weighted
/// projective plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vertex {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Vertex {
    fn others(self) -> (usize, usize) {
        match self {
            Vertex::X => (1, 2),
            Vertex::Y => (0, 2),
            Vertex::Z => (0, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WDecomposition {
    pub d: u64,
    /// Gap to the next nonzero form; `None` when `F` is ω-homogeneous.
    pub k: Option<u64>,
    pub parts: BTreeMap<u64, TrivarPoly>,
}

impl WDecomposition {
    pub fn initial(&self) -> &TrivarPoly {
        &self.parts[&self.d]
    }

    pub fn next_form(&self) -> Option<&TrivarPoly> {
        self.k.map(|k| &self.parts[&(self.d + k)])
    }
}

pub fn wdecompose(f: &TrivarPoly, w: WeightVector) -> Result<WDecomposition> {
    if f.is_zero() {
        return Err(Error::InvalidInput("F is zero".into()));
    }
    if f.terms.contains_key(&(0, 0, 0)) {
        return Err(Error::InvalidInput("F does not vanish at the origin".into()));
    }
    let mut parts: BTreeMap<u64, TrivarPoly> = BTreeMap::new();
    for (&e, c) in &f.terms {
        parts.entry(w.degree(e)).or_default().terms.insert(e, c.clone());
    }
    let mut degs = parts.keys().copied();
    let d = degs.next().expect("F is nonzero");
    let k = degs.next().map(|m| m - d);
    Ok(WDecomposition { d, k, parts })
}

/// Least `k ≥ 1` such that `d + k` is a multiple of the weight of each
/// listed vertex, so that `F_{d+k}` may contain a pure power of each of them.
pub fn smallest_admissible_k(w: WeightVector, d: u64, avoid: &[Vertex]) -> Result<u64> {
    if avoid.is_empty() {
        return Err(Error::InvalidInput("no vertices to avoid".into()));
    }
    let l = avoid.iter().fold(1u64, |acc, &v| acc.lcm(&w.weight(v)));
    let k = (l - d % l) % l;
    Ok(if k == 0 { l } else { k })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    /// A singular point of `C_d` where the blown-up space is smooth.
    I,
    /// A singular vertex where `C_d` is not smooth.
    Ii,
    /// A point of `C_d` on a singular axis where the meeting is not
    /// transversal.
    Iii,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredPoint {
    #[serde(with = "coords")]
    pub coords: [Q; 3],
    pub clause: Clause,
    /// Clause (iii) reads `"transversal"`; absent means not transversal.
    #[serde(default)]
    pub flags: BTreeMap<String, bool>,
}

mod coords {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &[Q; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
        c.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Q; 3], D::Error> {
        let raw = <[String; 3]>::deserialize(d)?;
        let q = raw.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>().map_err(serde::de::Error::custom)?;
        Ok([q[0].clone(), q[1].clone(), q[2].clone()])
    }
}

impl DeclaredPoint {
    pub fn new(coords: [i64; 3], clause: Clause) -> Self {
        DeclaredPoint { coords: coords.map(q_int), clause, flags: BTreeMap::new() }
    }

    pub fn label(&self) -> String {
        let c: Vec<String> = self.coords.iter().map(fmt_q).collect();
        format!("[{}]", c.join(":"))
    }

    fn vertex(&self) -> Option<Vertex> {
        let nz: Vec<usize> = (0..3).filter(|&i| !self.coords[i].is_zero()).collect();
        match nz.as_slice() {
            [0] => Some(Vertex::X),
            [1] => Some(Vertex::Y),
            [2] => Some(Vertex::Z),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub point: String,
    pub clause: Clause,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WlysReport {
    pub admissible: bool,
    pub d: u64,
    pub k: u64,
    pub failures: Vec<Failure>,
    /// Declared points whose clause turned out not to constrain `C_{d+k}`.
    pub notes: Vec<String>,
}

/// Vanishing of an ω-homogeneous form at a weighted projective point,
/// checked on two representatives.
fn vanishes(form: &TrivarPoly, m: u64, w: WeightVector, p: &[Q; 3]) -> Result<bool> {
    let v = form.eval(p);
    let lambda = q_int(2);
    let scaled = form.eval(&w.act(&lambda, p));
    if scaled != pow_q(&lambda, m as u32) * &v {
        return Err(Error::Internal(format!("form of degree {m} is not ω-homogeneous")));
    }
    Ok(v.is_zero())
}

/// Why a declared point does not fall under its clause, if it does not.
fn clause_exemption(p: &DeclaredPoint, w: WeightVector, fd: &TrivarPoly) -> Option<String> {
    match p.clause {
        Clause::I => None,
        Clause::Ii => {
            let Some(v) = p.vertex() else {
                return Some("clause (ii) concerns coordinate vertices".into());
            };
            if w.weight(v) == 1 {
                return Some("the weight of the vertex is 1".into());
            }
            match fd.chart_multiplicity(v) {
                Some(m) if m > 1 => None,
                m => Some(format!("C_d has multiplicity {} in the vertex chart", m.unwrap_or(0))),
            }
        }
        Clause::Iii => {
            let zeros: Vec<usize> = (0..3).filter(|&i| p.coords[i].is_zero()).collect();
            if zeros.is_empty() {
                return Some("clause (iii) concerns points on the coordinate axes".into());
            }
            // An axis {x_a = 0} with the other two weights sharing a factor.
            let singular_axis = zeros.iter().any(|&a| {
                let (b, c) = match a {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let g = w.0[b].gcd(&w.0[c]);
                if g == 1 {
                    return false;
                }
                match p.vertex() {
                    None => true,
                    // At a vertex the orbifold point is still of order g
                    // when the vertex's two other weights are coprime.
                    Some(v) => {
                        let (s, t) = v.others();
                        w.0[s].gcd(&w.0[t]) == 1
                    }
                }
            });
            if !singular_axis {
                return Some("no coordinate axis through the point has a singular generic point".into());
            }
            if p.flags.get("transversal").copied().unwrap_or(false) {
                return Some("C_d meets the axis transversally".into());
            }
            None
        }
    }
}

pub fn wlys_admissibility(f: &TrivarPoly, w: WeightVector, declared: &[DeclaredPoint]) -> Result<WlysReport> {
    let dec = wdecompose(f, w)?;
    let k = dec.k.ok_or_else(|| {
        Error::Indeterminate(format!("F is ω-homogeneous of degree {}; there is no form C_{{d+k}} to compare", dec.d))
    })?;
    let fd = dec.initial();
    let next = dec.next_form().expect("k is finite");
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for p in declared {
        if p.coords.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("the point [0:0:0] is not a weighted projective point".into()));
        }
        if !vanishes(fd, dec.d, w, &p.coords)? {
            return Err(Error::InvalidInput(format!("declared point {} is not on C_{}", p.label(), dec.d)));
        }
        if let Some(why) = clause_exemption(p, w, fd) {
            notes.push(format!("{}: {why}", p.label()));
            continue;
        }
        if vanishes(next, dec.d + k, w, &p.coords)? {
            failures.push(Failure {
                point: p.label(),
                clause: p.clause,
                reason: format!("{} lies on C_{} = {{{next} = 0}}", p.label(), dec.d + k),
            });
        }
    }
    Ok(WlysReport { admissible: failures.is_empty(), d: dec.d, k, failures, notes })
}
