//! Monodromy zeta functions, the characteristic polynomial and Milnor number
//! of superisolated and Lê-Yomdin singularities, and Jordan-block polynomials.

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloProduct;
use crate::error::{Error, Result};
use crate::qres::SmoothResolutionGraph;

/// `∏ (t^{N_j} - 1)^{χ(E̊_j)}` over the exceptional vertices.
pub fn acampo_zeta(g: &SmoothResolutionGraph) -> CycloProduct {
    CycloProduct::from_pairs(g.exceptional().map(|v| (v.multiplicity, v.chi_open)))
}

/// Characteristic polynomial on the middle cohomology from the zeta
/// function of an isolated hypersurface germ of dimension `n`:
/// `(1-t)/ζ` for curves, `ζ/(1-t)` for surfaces.
pub fn zeta_to_char(z: &CycloProduct, n: u32) -> Result<CycloProduct> {
    let t1 = CycloProduct::factor(1, 1);
    let out = match n {
        1 => t1.div(z),
        2 => z.div(&t1),
        _ => return Err(Error::InvalidInput(format!("zeta conversion is defined for n = 1 or 2, got {n}"))),
    };
    out.check_polynomial()?;
    Ok(out)
}

pub fn char_to_zeta(delta: &CycloProduct, n: u32) -> Result<CycloProduct> {
    let t1 = CycloProduct::factor(1, 1);
    match n {
        1 => Ok(t1.div(delta)),
        2 => Ok(delta.mul(&t1)),
        _ => Err(Error::InvalidInput(format!("zeta conversion is defined for n = 1 or 2, got {n}"))),
    }
}

/// `(d-1)³ + k·μ(C_d)`.
pub fn milnor_number(d: u64, k: u64, mu_cd: u64) -> u64 {
    (d - 1).pow(3) + k * mu_cd
}

/// Local data of one singular point of the tangent cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub mu_p: u64,
    pub r_p: u64,
    pub delta_p_charpoly: CycloProduct,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jordan1_p: Option<CycloProduct>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LYSInput {
    pub d: u64,
    pub k: u64,
    pub points: Vec<PointData>,
}

impl LYSInput {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidInput(format!("degree d = {} must be at least 2", self.d)));
        }
        if self.k < 1 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        for (i, p) in self.points.iter().enumerate() {
            p.delta_p_charpoly.check_polynomial()?;
            if p.delta_p_charpoly.degree() != p.mu_p as i64 {
                return Err(Error::InvalidInput(format!(
                    "point {i}: degree of the local characteristic polynomial is {} but mu_p = {}",
                    p.delta_p_charpoly.degree(),
                    p.mu_p
                )));
            }
        }
        Ok(())
    }

    pub fn mu_cd(&self) -> u64 {
        self.points.iter().map(|p| p.mu_p).sum()
    }

    pub fn milnor_number(&self) -> u64 {
        milnor_number(self.d, self.k, self.mu_cd())
    }
}

/// Characteristic polynomial of the monodromy of a `k`-LYS (a SIS for `k=1`).
pub fn char_poly_lys(input: &LYSInput) -> Result<CycloProduct> {
    input.validate()?;
    let (d, k) = (input.d as i64, input.k);
    let e0 = d * d - 3 * d + 3 - input.mu_cd() as i64;
    if e0 < 0 {
        return Err(Error::InvalidInput(format!(
            "d² - 3d + 3 - μ(C_d) = {e0} is negative; the tangent cone data is impossible for degree {d}"
        )));
    }
    let mut out = CycloProduct::factor(input.d, e0).div(&CycloProduct::factor(1, 1));
    for p in &input.points {
        out = out.mul(&p.delta_p_charpoly.power_char(k)?.substitute_power(input.d + k));
    }
    let mu = input.milnor_number();
    if out.degree() != mu as i64 {
        return Err(Error::Internal(format!("degree {} differs from μ = {mu}", out.degree())));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jordan2Report {
    pub m: u64,
    pub delta2: CycloProduct,
    /// Set when the result is a nontrivial power of `t-1`.
    pub eigenvalue_one_flag: bool,
}

/// `gcd((t-1)^m, ∏ Δ_P^{[1]})`; `m` defaults to `1 + Σ deg Δ_P^{[1]}`.
pub fn jordan2_sis(input: &LYSInput, m: Option<u64>) -> Result<Jordan2Report> {
    let mut prod = CycloProduct::one();
    for (i, p) in input.points.iter().enumerate() {
        let j = p.jordan1_p.as_ref().ok_or_else(|| Error::InvalidInput(format!("point {i} has no jordan1_p")))?;
        prod = prod.mul(j);
    }
    let m = m.unwrap_or(1 + prod.degree().max(0) as u64);
    let delta2 = CycloProduct::factor(1, m as i64).gcd(&prod)?;
    Ok(Jordan2Report { m, eigenvalue_one_flag: !delta2.is_one(), delta2 })
}

/// Characteristic polynomials of the monodromy on the cohomology of the
/// strata of a normal crossing model.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataCharData {
    #[serde(default)]
    pub h0_d0: CycloProduct,
    #[serde(default)]
    pub h0_d1: CycloProduct,
    #[serde(default)]
    pub h0_d2: CycloProduct,
    #[serde(default)]
    pub h1_d0: CycloProduct,
    #[serde(default)]
    pub h1_d1: CycloProduct,
    #[serde(default)]
    pub dim_e2_4m2: u64,
    #[serde(default)]
    pub dim_e2_02: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataJordan {
    pub delta1: CycloProduct,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2: Option<CycloProduct>,
}

pub fn jordan_from_strata(s: &StrataCharData, dim: u32) -> Result<StrataJordan> {
    let t1 = CycloProduct::factor(1, 1);
    let out = match dim {
        1 => StrataJordan { delta1: t1.mul(&s.h0_d1).div(&s.h0_d0), delta2: None },
        2 => StrataJordan {
            delta1: CycloProduct::factor(1, s.dim_e2_4m2 as i64 - s.dim_e2_02 as i64).mul(&s.h1_d1).div(&s.h1_d0),
            delta2: Some(s.h0_d2.mul(&s.h0_d0).div(&t1).div(&s.h0_d1)),
        },
        _ => return Err(Error::InvalidInput(format!("strata formulas exist for dimension 1 or 2, got {dim}"))),
    };
    out.delta1.check_polynomial()?;
    if let Some(d2) = &out.delta2 {
        d2.check_polynomial()?;
    }
    Ok(out)
}

/// `Δ^{cmb,k} / Δ_{C_d}`.
pub fn jordan1_quotient(delta_cmb_k: &CycloProduct, alexander: &CycloProduct) -> Result<CycloProduct> {
    let q = delta_cmb_k.div(alexander);
    match q.negative_witness() {
        None => Ok(q),
        Some(n) => Err(Error::NonDivisible(format!(
            "the Alexander polynomial does not divide the combinatorial polynomial (Φ_{n} is missing)"
        ))),
    }
}

/// One side of a Yau-type comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YauInput {
    #[serde(flatten)]
    pub lys: LYSInput,
    pub alexander: CycloProduct,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_cmb_k: Option<CycloProduct>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YauReport {
    pub mu: [u64; 2],
    pub same_mu: bool,
    pub charpoly: [CycloProduct; 2],
    pub same_charpoly: bool,
    pub alexander_differs: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jordan1: Option<[CycloProduct; 2]>,
    pub jordan_structure_differs: bool,
    pub conclusion: String,
}

fn point_signature(l: &LYSInput) -> Vec<(u64, u64, Vec<(u64, i64)>)> {
    let mut v: Vec<_> = l
        .points
        .iter()
        .map(|p| (p.mu_p, p.r_p, p.delta_p_charpoly.factors().iter().map(|(&a, &b)| (a, b)).collect()))
        .collect();
    v.sort();
    v
}

/// Compares two LYS with the same combinatorial data.
pub fn yau_pair_report(a: &YauInput, b: &YauInput) -> Result<YauReport> {
    if a.lys.d != b.lys.d || a.lys.k != b.lys.k {
        return Err(Error::InvalidInput(format!(
            "degrees or orders differ: (d,k) = ({},{}) vs ({},{})",
            a.lys.d, a.lys.k, b.lys.d, b.lys.k
        )));
    }
    if point_signature(&a.lys) != point_signature(&b.lys) {
        return Err(Error::InvalidInput("the singular points of the two tangent cones differ".into()));
    }
    let ca = char_poly_lys(&a.lys)?;
    let cb = char_poly_lys(&b.lys)?;
    let mu = [a.lys.milnor_number(), b.lys.milnor_number()];
    let alexander_differs = a.alexander != b.alexander;
    let jordan1 = match (&a.delta_cmb_k, &b.delta_cmb_k) {
        (Some(x), Some(y)) => Some([jordan1_quotient(x, &a.alexander)?, jordan1_quotient(y, &b.alexander)?]),
        _ => None,
    };
    let jordan_structure_differs = match &jordan1 {
        Some([x, y]) => x != y,
        None => alexander_differs,
    };
    let conclusion = if jordan_structure_differs {
        "Jordan structure differs => embedded topology differs".to_string()
    } else {
        "indistinguishable by these invariants".to_string()
    };
    Ok(YauReport {
        mu,
        same_mu: mu[0] == mu[1],
        same_charpoly: ca == cb,
        charpoly: [ca, cb],
        alexander_differs,
        jordan1,
        jordan_structure_differs,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cp(p: &[(u64, i64)]) -> CycloProduct {
        CycloProduct::from_pairs(p.iter().copied())
    }

    fn cusp() -> CycloProduct {
        cp(&[(6, 1), (1, 1), (2, -1), (3, -1)])
    }

    fn cusp_point() -> PointData {
        PointData { id: None, mu_p: 2, r_p: 1, delta_p_charpoly: cusp(), jordan1_p: Some(CycloProduct::one()) }
    }

    fn sextic(k: u64, n: usize) -> LYSInput {
        LYSInput { d: 6, k, points: vec![cusp_point(); n] }
    }

    #[test]
    fn zeta_conversion() {
        let z = cp(&[(2, 1), (3, 1), (6, -1)]);
        assert_eq!(zeta_to_char(&z, 1).unwrap(), cusp());
        assert_eq!(zeta_to_char(&CycloProduct::one(), 1).unwrap(), cp(&[(1, 1)]));
        let a = cp(&[(6, 9), (1, -1)]);
        assert_eq!(zeta_to_char(&char_to_zeta(&a, 2).unwrap(), 2).unwrap(), a);
        assert!(zeta_to_char(&cp(&[(1, 2)]), 1).is_err());
    }

    #[test]
    fn milnor_examples() {
        assert_eq!(milnor_number(6, 1, 19), 144);
        assert_eq!(milnor_number(4, 1, 0), 27);
        assert_eq!(milnor_number(6, 1, 12), 137);
    }

    #[test]
    fn char_poly_examples() {
        let c = char_poly_lys(&sextic(1, 6)).unwrap();
        let expected = cp(&[(6, 9), (1, -1)]).mul(&cp(&[(42, 1), (7, 1), (14, -1), (21, -1)]).pow(6));
        assert_eq!(c, expected);
        assert_eq!(c.degree(), 137);
        let cubic = LYSInput { d: 3, k: 1, points: vec![] };
        assert_eq!(char_poly_lys(&cubic).unwrap(), cp(&[(3, 3), (1, -1)]));
        let c = char_poly_lys(&sextic(2, 1)).unwrap();
        assert_eq!(c.degree(), 129);
        let too_many = LYSInput { d: 3, k: 1, points: vec![cusp_point(); 4] };
        assert!(char_poly_lys(&too_many).is_err());
    }

    #[test]
    fn jordan2_examples() {
        assert!(jordan2_sis(&sextic(1, 6), None).unwrap().delta2.is_one());
        let mut one = sextic(1, 1);
        one.points[0].jordan1_p = Some(cp(&[(2, 1)]));
        let r = jordan2_sis(&one, Some(5)).unwrap();
        assert_eq!(r.delta2, cp(&[(1, 1)]));
        assert!(r.eigenvalue_one_flag);
        let mut two = sextic(1, 2);
        for p in &mut two.points {
            p.jordan1_p = Some(cp(&[(1, 1)]));
        }
        assert_eq!(jordan2_sis(&two, Some(1)).unwrap().delta2, cp(&[(1, 1)]));
        let mut missing = sextic(1, 1);
        missing.points[0].jordan1_p = None;
        assert!(jordan2_sis(&missing, None).is_err());
    }

    #[test]
    fn strata_examples() {
        let s = StrataCharData { h0_d1: cp(&[(2, 1)]), h0_d0: cp(&[(1, 2)]), ..Default::default() };
        assert_eq!(jordan_from_strata(&s, 1).unwrap().delta1.expand().unwrap().to_string(), "t + 1");
        let t1 = cp(&[(1, 1)]);
        let s = StrataCharData { h0_d2: t1.clone(), h0_d1: t1.clone(), h0_d0: t1.clone(), ..Default::default() };
        assert!(jordan_from_strata(&s, 2).unwrap().delta2.unwrap().is_one());
        let s = StrataCharData { dim_e2_4m2: 1, h1_d1: cusp(), h0_d0: t1.clone(), ..Default::default() };
        assert_eq!(jordan_from_strata(&s, 2).unwrap().delta1, cusp().mul(&t1));
    }

    #[test]
    fn jordan1_examples() {
        assert_eq!(jordan1_quotient(&cusp().pow(2), &cusp()).unwrap(), cusp());
        assert!(jordan1_quotient(&cusp(), &cusp()).unwrap().is_one());
        assert!(matches!(jordan1_quotient(&cp(&[(1, 1)]), &cp(&[(2, 1)])), Err(Error::NonDivisible(_))));
    }

    #[test]
    fn yau_examples() {
        let a = YauInput { lys: sextic(1, 6), alexander: cusp(), delta_cmb_k: None };
        let b = YauInput { lys: sextic(1, 6), alexander: CycloProduct::one(), delta_cmb_k: None };
        let r = yau_pair_report(&a, &b).unwrap();
        assert_eq!(r.mu, [137, 137]);
        assert!(r.same_charpoly && r.jordan_structure_differs);
        let r = yau_pair_report(&a, &a).unwrap();
        assert!(!r.jordan_structure_differs);
        let c = YauInput { lys: LYSInput { d: 5, ..sextic(1, 6) }, ..a.clone() };
        assert!(yau_pair_report(&a, &c).is_err());
    }

    fn catalog_point() -> impl Strategy<Value = PointData> {
        prop::sample::select(crate::catalog::catalog()).prop_map(|g| g.point_data())
    }

    proptest! {
        #[test]
        fn degree_identity(d in 2u64..=12, k in 1u64..=4, pts in prop::collection::vec(catalog_point(), 0..4)) {
            let input = LYSInput { d, k, points: pts };
            prop_assume!(((d * d + 3) as i64) - 3 * d as i64 - input.mu_cd() as i64 >= 0);
            let c = char_poly_lys(&input).unwrap();
            prop_assert_eq!(c.degree(), input.milnor_number() as i64);
            prop_assert!(c.is_polynomial());
            let mut ones = (d * d + 2) as i64 - 3 * d as i64 - input.mu_cd() as i64;
            for p in &input.points {
                ones += p.delta_p_charpoly.power_char(k).unwrap().root_multiplicity(1);
            }
            prop_assert_eq!(c.root_multiplicity(1), ones);
        }
    }
}
