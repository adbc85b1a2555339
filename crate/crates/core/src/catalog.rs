//! Simple plane curve germs with known local invariants.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclo::CycloProduct;
use crate::poly::BivarPoly;
use crate::rational::Q;
use crate::zeta::PointData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogGerm {
    pub name: String,
    pub equation: BivarPoly,
    /// Weights of `x` and `y` making the equation homogeneous of degree 1.
    pub weights: (Q, Q),
    pub r: u64,
}

impl CatalogGerm {
    pub fn delta(&self) -> CycloProduct {
        milnor_orlik(&self.weights.0, &self.weights.1)
    }

    pub fn mu(&self) -> u64 {
        self.delta().degree() as u64
    }

    pub fn point_data(&self) -> PointData {
        PointData {
            id: Some(self.name.clone()),
            mu_p: self.mu(),
            r_p: self.r,
            delta_p_charpoly: self.delta(),
            jordan1_p: None,
        }
    }
}

/// Characteristic polynomial of a quasi-homogeneous curve germ with weights
/// `w_1, w_2`, from the divisor identity `(Λ_{v_1}/u_1 - 1)(Λ_{v_2}/u_2 - 1)`
/// where `w_i = u_i/v_i` and `Λ_a Λ_b = gcd(a,b) Λ_{lcm(a,b)}`.
pub fn milnor_orlik(w1: &Q, w2: &Q) -> CycloProduct {
    let factor = |w: &Q| -> BTreeMap<u64, Q> {
        let u = w.numer().clone();
        let v: u64 = w.denom().try_into().expect("small weight");
        BTreeMap::from([(v, Q::new(1.into(), u)), (1, -Q::one())])
    };
    let mut acc: BTreeMap<u64, Q> = BTreeMap::new();
    for (a, ca) in factor(w1) {
        for (b, cb) in factor(w2) {
            let g = a.gcd(&b);
            *acc.entry(a.lcm(&b)).or_insert_with(Q::zero) += ca.clone() * cb * Q::from_integer(g.into());
        }
    }
    CycloProduct::from_pairs(acc.into_iter().map(|(n, c)| {
        assert!(c.is_integer(), "weights do not define an isolated quasi-homogeneous germ");
        (n, i64::try_from(c.to_integer()).expect("small exponent"))
    }))
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn germ(name: String, terms: &[(u32, u32, i64)], w: (Q, Q), r: u64) -> CatalogGerm {
    CatalogGerm { name, equation: BivarPoly::from_i64(terms), weights: w, r }
}

/// `A_n` for `n ≤ 8`, `D_n` for `4 ≤ n ≤ 8`, `E_6`, `E_7`, `E_8` and a few
/// Brieskorn-Pham germs.
pub fn catalog() -> Vec<CatalogGerm> {
    let mut out = Vec::new();
    for n in 1..=8u32 {
        let k = n as i64 + 1;
        out.push(germ(
            format!("A{n}"),
            &[(0, 2, 1), (n + 1, 0, 1)],
            (q(1, k), q(1, 2)),
            if n % 2 == 1 { 2 } else { 1 },
        ));
    }
    for n in 4..=8u32 {
        // x²y + y^{n-1}
        let wy = q(1, n as i64 - 1);
        let wx = (Q::one() - wy.clone()) / q(2, 1);
        out.push(germ(format!("D{n}"), &[(2, 1, 1), (0, n - 1, 1)], (wx, wy), if n % 2 == 1 { 2 } else { 3 }));
    }
    out.push(germ("E6".into(), &[(3, 0, 1), (0, 4, 1)], (q(1, 3), q(1, 4)), 1));
    out.push(germ("E7".into(), &[(3, 0, 1), (1, 3, 1)], (q(1, 3), q(2, 9)), 2));
    out.push(germ("E8".into(), &[(3, 0, 1), (0, 5, 1)], (q(1, 3), q(1, 5)), 1));
    for (p, s, r) in [(3u32, 7u32, 1u64), (4, 5, 1), (4, 6, 2), (5, 6, 1), (3, 3, 3), (4, 4, 4)] {
        out.push(germ(format!("B{p},{s}"), &[(p, 0, 1), (0, s, 1)], (q(1, p as i64), q(1, s as i64)), r));
    }
    out
}

pub fn by_name(name: &str) -> Option<CatalogGerm> {
    catalog().into_iter().find(|g| g.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qres::local_invariants;

    #[test]
    fn closed_forms() {
        assert_eq!(by_name("A2").unwrap().delta(), CycloProduct::from_pairs([(6, 1), (1, 1), (2, -1), (3, -1)]));
        assert_eq!(by_name("E7").unwrap().delta(), CycloProduct::from_pairs([(9, 1), (3, -1), (1, 1)]));
        assert_eq!(by_name("E7").unwrap().mu(), 7);
        assert_eq!(by_name("E8").unwrap().mu(), 8);
        assert_eq!(by_name("D5").unwrap().mu(), 5);
    }

    #[test]
    fn pipeline_agrees_with_catalog() {
        for g in catalog() {
            let inv = local_invariants(&g.equation).unwrap_or_else(|e| panic!("{}: {e}", g.name));
            assert_eq!(inv.delta, g.delta(), "{}", g.name);
            assert_eq!(inv.r, g.r, "{}", g.name);
        }
    }
}
