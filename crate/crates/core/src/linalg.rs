//! Exact linear algebra over ℚ: square matrices, echelon forms and
//! subspaces given by canonical bases.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::{CycloProduct, DensePoly};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q_int, Q};

pub type Vector = Vec<Q>;

/// Square matrix with exact rational entries, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    rows: Vec<Vec<Q>>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "matrix is not square: row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Ok(RationalMatrix { n, rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect())
    }

    pub fn zero(n: usize) -> Self {
        RationalMatrix { n, rows: vec![vec![Q::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = Q::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.n).map(|j| (0..self.n).map(|i| self.rows[i][j].clone()).collect()).collect();
        RationalMatrix { n: self.n, rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = &self.rows[i][k] * &other.rows[k][j];
                    out.rows[i][j] += t;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let rows =
            self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        RationalMatrix { n: self.n, rows }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &[Q]) -> Vector {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self.rows.clone()).len()
    }

    /// Basis of `{v : Mv = 0}` in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vector> {
        null_space(&self.rows, self.n)
    }

    /// Column space, as a canonical basis.
    pub fn image(&self) -> Vec<Vector> {
        rref(self.transpose().rows)
    }

    /// `N^n = 0`, checked exactly.
    pub fn check_nilpotent(&self) -> Result<()> {
        if self.pow(self.n as u64).is_zero() {
            Ok(())
        } else {
            Err(Error::NotNilpotent)
        }
    }

    /// Characteristic polynomial `det(tI - M)`, coefficients from the
    /// constant term up, via reduction to upper Hessenberg form.
    pub fn charpoly(&self) -> Vec<Q> {
        let n = self.n;
        let mut h = self.rows.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else { continue };
            if piv != m {
                h.swap(piv, m);
                for row in h.iter_mut() {
                    row.swap(piv, m);
                }
            }
            for i in m + 1..n {
                if h[i][m - 1].is_zero() {
                    continue;
                }
                let f = &h[i][m - 1] / &h[m][m - 1];
                for j in 0..n {
                    let t = &f * &h[m][j];
                    h[i][j] -= t;
                }
                for row in h.iter_mut() {
                    let t = &f * &row[i];
                    row[m] += t;
                }
            }
        }
        // p_k = char poly of the leading k×k block.
        let mut p: Vec<Vec<Q>> = vec![vec![Q::one()]];
        for k in 1..=n {
            let mut next = vec![Q::zero(); k + 1];
            for (i, c) in p[k - 1].iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &h[k - 1][k - 1] * c;
            }
            let mut prod = Q::one();
            for i in (1..k).rev() {
                prod *= &h[i][i - 1];
                if prod.is_zero() {
                    break;
                }
                let coef = &prod * &h[i - 1][k - 1];
                for (j, c) in p[i - 1].iter().enumerate() {
                    next[j] -= &coef * c;
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// Characteristic polynomial as a product of cyclotomic factors; fails
    /// when it has a non-cyclotomic factor.
    pub fn cyclotomic_charpoly(&self) -> Result<CycloProduct> {
        let coeffs = self.charpoly();
        let ints = coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NotQuasiUnipotent(format!(
                        "characteristic polynomial has the non-integral coefficient {}",
                        fmt_q(c)
                    )))
                }
            })
            .collect::<Result<Vec<BigInt>>>()?;
        if self.n == 0 {
            return Ok(CycloProduct::one());
        }
        CycloProduct::from_dense(&DensePoly::new(ints))
    }

    /// Matrix of the restriction to an invariant subspace with basis
    /// `basis`, in that basis.
    pub fn restrict(&self, basis: &[Vector]) -> Result<Self> {
        let images: Vec<Vector> = basis.iter().map(|b| self.apply(b)).collect();
        let coords = images
            .iter()
            .map(|w| coordinates(basis, w).ok_or_else(|| Error::Internal("subspace is not invariant".into())))
            .collect::<Result<Vec<_>>>()?;
        // Column j holds the coordinates of the image of basis[j].
        let r = basis.len();
        let rows = (0..r).map(|i| (0..r).map(|j| coords[j][i].clone()).collect()).collect();
        Ok(RationalMatrix { n: r, rows })
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(fmt_q).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        raw.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Cell {
    Text(String),
    Int(i64),
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Vec<Cell>>::deserialize(d)?;
        let rows = raw
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|c| match c {
                        Cell::Text(s) => parse_q(&s),
                        Cell::Int(i) => Ok(q_int(i)),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RationalMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Reduced row echelon form, zero rows dropped.
pub fn rref(mut rows: Vec<Vector>) -> Vec<Vector> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                let t = &f * &rows[r][j];
                rows[i][j] -= t;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

fn pivot(row: &[Q]) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero")
}

/// Basis of the solutions of `A x = 0` for `A` with `ncols` columns.
pub fn null_space(a: &[Vector], ncols: usize) -> Vec<Vector> {
    let e = rref(a.to_vec());
    let pivots: Vec<usize> = e.iter().map(|r| pivot(r)).collect();
    let free = (0..ncols).filter(|c| !pivots.contains(c));
    let basis: Vec<Vector> = free
        .map(|f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in e.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    rref(basis)
}

/// Canonical basis of the span.
pub fn span(vectors: &[Vector]) -> Vec<Vector> {
    rref(vectors.to_vec())
}

pub fn sum(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    rref(a.iter().chain(b).cloned().collect())
}

/// `U ∩ W` through annihilators: `(U ∩ W)^⊥ = U^⊥ + W^⊥`.
pub fn intersect(u: &[Vector], w: &[Vector], n: usize) -> Vec<Vector> {
    let ann = sum(&null_space(u, n), &null_space(w, n));
    null_space(&ann, n)
}

pub fn contains(basis: &[Vector], v: &[Q]) -> bool {
    let mut rows = basis.to_vec();
    rows.push(v.to_vec());
    rref(rows).len() == basis.len()
}

/// Coordinates of `v` in the (linearly independent) vectors `basis`.
pub fn coordinates(basis: &[Vector], v: &[Q]) -> Option<Vector> {
    let n = v.len();
    let r = basis.len();
    // Solve Σ c_j basis[j] = v: augmented system with n rows.
    let aug: Vec<Vector> =
        (0..n).map(|i| basis.iter().map(|b| b[i].clone()).chain(std::iter::once(v[i].clone())).collect()).collect();
    let e = rref(aug);
    let mut c = vec![Q::zero(); r];
    for row in &e {
        let p = pivot(row);
        if p == r {
            return None;
        }
        c[p] = row[r].clone();
    }
    Some(c)
}

/// Vectors of `big` completing a basis of `small ⊆ big`.
pub fn complement(small: &[Vector], big: &[Vector]) -> Vec<Vector> {
    let mut acc = small.to_vec();
    let mut out = Vec::new();
    for v in big {
        if !contains(&acc, v) {
            acc = sum(&acc, std::slice::from_ref(v));
            out.push(v.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64(rows).unwrap()
    }

    fn qs(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn charpoly_small() {
        assert_eq!(m(&[&[0, -1], &[1, 1]]).charpoly(), qs(&[1, -1, 1]));
        assert_eq!(RationalMatrix::identity(3).charpoly(), qs(&[-1, 3, -3, 1]));
        assert_eq!(RationalMatrix::zero(0).charpoly(), qs(&[1]));
        // Zero subdiagonal entry forces a pivot search.
        assert_eq!(m(&[&[2, 0, 1], &[0, 3, 0], &[1, 5, 2]]).charpoly(), qs(&[-9, 15, -7, 1]));
    }

    #[test]
    fn cyclotomic_factoring() {
        let c = m(&[&[0, -1], &[1, 1]]).cyclotomic_charpoly().unwrap();
        assert_eq!(c, CycloProduct::from_pairs([(6, 1), (1, 1), (2, -1), (3, -1)]));
        assert!(matches!(m(&[&[2, 0], &[0, 1]]).cyclotomic_charpoly(), Err(Error::NotQuasiUnipotent(_))));
    }

    #[test]
    fn kernel_image_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.kernel(), vec![vec![q_int(1), Q::new((-1).into(), 2.into()), q_int(0)]]);
        assert_eq!(a.image().len(), 2);
        let u = vec![qs(&[1, 0, 0]), qs(&[0, 1, 0])];
        let w = vec![qs(&[0, 1, 0]), qs(&[0, 0, 1])];
        assert_eq!(intersect(&u, &w, 3), vec![qs(&[0, 1, 0])]);
        assert_eq!(coordinates(&u, &qs(&[3, 4, 0])), Some(qs(&[3, 4])));
        assert_eq!(coordinates(&u, &qs(&[3, 4, 1])), None);
    }

    #[test]
    fn json_round_trip() {
        let a: RationalMatrix = serde_json::from_str(r#"[["1/2", 1], ["0", "-3"]]"#).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"[["1/2","1"],["0","-3"]]"#);
        assert!(serde_json::from_str::<RationalMatrix>(r#"[["1"], ["0", "1"]]"#).is_err());
    }

    proptest! {
        #[test]
        fn charpoly_matches_determinant_at_integers(entries in prop::collection::vec(-4i64..5, 16), t in -3i64..4) {
            let rows: Vec<Vec<Q>> = entries.chunks(4).map(qs).collect();
            let a = RationalMatrix::from_rows(rows).unwrap();
            let p = a.charpoly();
            let at_t: Q = p.iter().rev().fold(Q::zero(), |acc, c| acc * q_int(t) + c);
            // det(tI - A) by elimination.
            let mut mrows = RationalMatrix::identity(4).rows;
            for i in 0..4 {
                for j in 0..4 {
                    mrows[i][j] = &mrows[i][j] * q_int(t) - a.get(i, j);
                }
            }
            prop_assert_eq!(at_t, det(mrows));
        }

        #[test]
        fn rank_nullity(entries in prop::collection::vec(-2i64..3, 25)) {
            let a = RationalMatrix::from_rows(entries.chunks(5).map(qs).collect()).unwrap();
            prop_assert_eq!(a.rank() + a.kernel().len(), 5);
            for v in a.kernel() {
                prop_assert!(a.apply(&v).iter().all(Zero::is_zero));
            }
        }
    }

    fn det(mut a: Vec<Vector>) -> Q {
        let n = a.len();
        let mut d = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
            if p != c {
                a.swap(p, c);
                d = -d;
            }
            d *= &a[c][c];
            for i in c + 1..n {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
        d
    }
}
