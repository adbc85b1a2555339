//! Weight filtrations of nilpotent endomorphisms and the graded
//! characteristic polynomials of quasi-unipotent automorphisms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::lcm;
use crate::cyclo::CycloProduct;
use crate::error::{Error, Result};
use crate::linalg::{complement, contains, intersect, sum, RationalMatrix, Vector};
use crate::rational::Q;

/// The `(α, β, γ)` weights of a nonzero vector; the zero vector has none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorWeights {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

/// `α` is the largest power not killing `v`, `β` minus the largest `b` with
/// `v ∈ N^b(V)`. Returns `None` for `v = 0`.
pub fn vector_weights(n: &RationalMatrix, v: &[Q]) -> Result<Option<VectorWeights>> {
    n.check_nilpotent()?;
    if v.len() != n.dim() {
        return Err(Error::InvalidInput(format!("vector of length {} for a {}-dimensional space", v.len(), n.dim())));
    }
    if v.iter().all(num_traits::Zero::is_zero) {
        return Ok(None);
    }
    let mut alpha = 0;
    let mut w = n.apply(v);
    while w.iter().any(|x| !num_traits::Zero::is_zero(x)) {
        alpha += 1;
        w = n.apply(&w);
    }
    let mut b = 0;
    while b < n.dim() as u64 && contains(&n.pow(b + 1).image(), v) {
        b += 1;
    }
    let beta = -(b as i64);
    Ok(Some(VectorWeights { alpha, beta, gamma: alpha + beta }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightStep {
    pub level: i64,
    /// Reduced echelon basis of `W_level`.
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    pub center: i64,
    dim: usize,
    /// `(level, basis)` for every level where something may change, increasing.
    levels: Vec<(i64, Vec<Vector>)>,
}

impl WeightFiltration {
    /// `W_k`; empty below the first level, everything above the last.
    pub fn w(&self, k: i64) -> Vec<Vector> {
        match self.levels.iter().rev().find(|(l, _)| *l <= k) {
            Some((_, b)) => b.clone(),
            None => Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> impl Iterator<Item = i64> + '_ {
        self.levels.iter().map(|(l, _)| *l)
    }

    /// Nonzero `dim gr_k`.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let mut prev = 0;
        for (l, b) in &self.levels {
            if b.len() > prev {
                out.insert(*l, b.len() - prev);
            }
            prev = b.len();
        }
        out
    }

    pub fn steps(&self) -> Vec<WeightStep> {
        self.levels
            .iter()
            .map(|(l, b)| WeightStep {
                level: *l,
                basis: b.iter().map(|v| v.iter().map(crate::rational::fmt_q).collect()).collect(),
            })
            .collect()
    }
}

/// Weight filtration of `N` centred at `center`.
///
/// `W_k` is spanned by the vectors of `γ`-weight at most `k`. Such a vector
/// lies in `ker N^{a+1} ∩ im N^b` with `a - b = γ`, so `W_k` is the sum of
/// these intersections over `a - b ≤ k`, which is how it is computed.
pub fn weight_filtration(n: &RationalMatrix, center: i64) -> Result<WeightFiltration> {
    n.check_nilpotent()?;
    let dim = n.dim();
    let top = dim as i64 - 1;
    let kers: Vec<Vec<Vector>> = (0..=dim).map(|a| n.pow(a as u64 + 1).kernel()).collect();
    let ims: Vec<Vec<Vector>> = (0..=dim).map(|b| n.pow(b as u64).image()).collect();
    let mut pieces: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    for a in 0..dim {
        for b in 0..dim {
            let piece = intersect(&kers[a], &ims[b], dim);
            if !piece.is_empty() {
                let g = a as i64 - b as i64;
                let acc = pieces.entry(g).or_default();
                *acc = sum(acc, &piece);
            }
        }
    }
    let mut levels = Vec::new();
    let mut acc: Vec<Vector> = Vec::new();
    for k in -top..=top.max(0) {
        if let Some(p) = pieces.get(&k) {
            acc = sum(&acc, p);
        }
        levels.push((k, acc.clone()));
    }
    let wf0 = WeightFiltration { center: 0, dim, levels };
    check_weight_properties(n, &wf0)?;
    Ok(WeightFiltration { center, dim, levels: wf0.levels.into_iter().map(|(k, b)| (k + center, b)).collect() })
}

/// `N(W_k) ⊆ W_{k-2}`, and `N^k : gr_k → gr_{-k}` is bijective for `k ≥ 0`.
/// Expects the filtration centred at 0.
pub fn check_weight_properties(n: &RationalMatrix, wf: &WeightFiltration) -> Result<()> {
    for k in wf.levels() {
        let target = wf.w(k - 2);
        if wf.w(k).iter().any(|v| !contains(&target, &n.apply(v))) {
            return Err(Error::Internal(format!("N(W_{k}) is not contained in W_{}", k - 2)));
        }
    }
    for k in wf.levels().filter(|&k| k >= 0) {
        let c = complement(&wf.w(k - 1), &wf.w(k));
        let below = wf.w(-k - 1);
        let nk = n.pow(k as u64);
        let images: Vec<Vector> = c.iter().map(|v| nk.apply(v)).collect();
        let gr_minus = wf.w(-k).len() - below.len();
        if sum(&below, &images).len() != below.len() + c.len() || c.len() != gr_minus {
            return Err(Error::Internal(format!("N^{k} does not induce an isomorphism gr_{k} → gr_-{k}")));
        }
    }
    Ok(())
}

/// Jordan block sizes of a nilpotent matrix, decreasing.
pub fn jordan_blocks(n: &RationalMatrix) -> Result<Vec<usize>> {
    n.check_nilpotent()?;
    let dim = n.dim();
    let ranks: Vec<usize> = (0..=dim + 1).map(|j| n.pow(j as u64).rank()).collect();
    let mut out = Vec::new();
    for s in (1..=dim).rev() {
        // blocks of size ≥ s minus blocks of size ≥ s+1
        let count = (ranks[s - 1] - ranks[s]) - (ranks[s] - ranks[s + 1]);
        out.extend(std::iter::repeat_n(s, count));
    }
    Ok(out)
}

/// Number of blocks of each size.
pub fn block_census(blocks: &[usize]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for &b in blocks {
        *out.entry(b).or_insert(0) += 1;
    }
    out
}

/// Everything derived from a quasi-unipotent automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedMonodromy {
    pub m: u64,
    pub charpoly: CycloProduct,
    /// `dim gr_k` for the nonzero pieces.
    pub graded_dims: BTreeMap<i64, usize>,
    /// Characteristic polynomial on `gr_k`, `k ≥ 0`.
    pub graded_charpoly: BTreeMap<i64, CycloProduct>,
    /// `Δ^[k]`: the part of `gr_k` not coming from `gr_{k+2}`, whose degree
    /// counts the Jordan blocks of size `k+1`.
    pub delta: BTreeMap<i64, CycloProduct>,
    pub jordan_blocks: Vec<usize>,
}

fn default_m(c: &CycloProduct) -> u64 {
    c.to_divisor().mult.keys().fold(1, |acc, &n| lcm(acc, n))
}

/// Weight filtration of `1 - h^m` and the characteristic polynomials of `h`
/// on its graded pieces.
pub fn graded_monodromy(h: &RationalMatrix, m: Option<u64>) -> Result<GradedMonodromy> {
    let charpoly = h.cyclotomic_charpoly()?;
    let m = match m {
        None => default_m(&charpoly),
        Some(0) => return Err(Error::InvalidInput("m must be positive".into())),
        Some(m) => {
            let c = charpoly.power_char(m)?;
            if c.factors().keys().any(|&k| k != 1) {
                return Err(Error::InvalidInput(format!(
                    "the characteristic polynomial of h^{m} is {c}, not a power of t-1"
                )));
            }
            m
        }
    };
    let dim = h.dim();
    let n = RationalMatrix::identity(dim).sub(&h.pow(m));
    n.check_nilpotent()
        .map_err(|_| Error::Internal(format!("1 - h^{m} is not nilpotent although h is quasi-unipotent")))?;
    let wf = weight_filtration(&n, 0)?;
    let mut on_w: BTreeMap<i64, CycloProduct> = BTreeMap::new();
    for k in wf.levels() {
        on_w.insert(k, h.restrict(&wf.w(k))?.cyclotomic_charpoly()?);
    }
    let gr = |k: i64| -> CycloProduct {
        let above = on_w.range(..=k).next_back().map(|(_, c)| c.clone()).unwrap_or_else(CycloProduct::one);
        let below = on_w.range(..k).next_back().map(|(_, c)| c.clone()).unwrap_or_else(CycloProduct::one);
        above.div(&below)
    };
    let top = dim as i64;
    let graded_charpoly: BTreeMap<i64, CycloProduct> =
        (0..=top).map(|k| (k, gr(k))).filter(|(_, c)| !c.is_one()).collect();
    let mut delta = BTreeMap::new();
    for k in 0..=top {
        let d = gr(k).div(&gr(k + 2));
        d.check_polynomial()?;
        if !d.is_one() {
            delta.insert(k, d);
        }
    }
    Ok(GradedMonodromy {
        m,
        charpoly,
        graded_dims: wf.graded_dims(),
        graded_charpoly,
        delta,
        jordan_blocks: jordan_blocks(&n)?,
    })
}

/// `Δ^[k]` of `h`.
pub fn delta_k(h: &RationalMatrix, k: u64, m: Option<u64>) -> Result<CycloProduct> {
    Ok(graded_monodromy(h, m)?.delta.remove(&(k as i64)).unwrap_or_else(CycloProduct::one))
}

/// Violations of the bound on Jordan blocks for the monodromy of an isolated
/// hypersurface singularity of dimension `n`: no block longer than `n+1`, and
/// none of length `n+1` for the eigenvalue 1.
pub fn monodromy_bound_violations(g: &GradedMonodromy, n: u64) -> Vec<String> {
    let mut out = Vec::new();
    for (&k, d) in &g.delta {
        if k as u64 > n {
            out.push(format!("Δ^[{k}] = {d} is nontrivial for {k} > {n}"));
        }
    }
    if let Some(d) = g.delta.get(&(n as i64)) {
        if d.root_multiplicity(1) > 0 {
            out.push(format!("1 is a root of Δ^[{n}] = {d}"));
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::q_int;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn jordan_nilpotent(blocks: &[usize]) -> RationalMatrix {
        let n: usize = blocks.iter().sum();
        let mut rows = vec![vec![q_int(0); n]; n];
        let mut off = 0;
        for &b in blocks {
            for i in 1..b {
                rows[off + i - 1][off + i] = q_int(1);
            }
            off += b;
        }
        RationalMatrix::from_rows(rows).unwrap()
    }

    /// Random invertible matrix as a product of elementary matrices.
    pub(crate) fn random_conjugator(n: usize, rng: &mut impl Rng) -> (RationalMatrix, RationalMatrix) {
        let mut p = RationalMatrix::identity(n);
        let mut pinv = RationalMatrix::identity(n);
        if n < 2 {
            return (p, pinv);
        }
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into());
            let mut e = RationalMatrix::identity(n).rows().to_vec();
            e[i][j] = c.clone();
            let mut einv = RationalMatrix::identity(n).rows().to_vec();
            einv[i][j] = -c;
            p = p.mul(&RationalMatrix::from_rows(e).unwrap());
            pinv = RationalMatrix::from_rows(einv).unwrap().mul(&pinv);
        }
        (p, pinv)
    }

    fn v(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn jordan_block_weights() {
        // N e1 = 0, N e_i = e_{i-1}.
        let n = jordan_nilpotent(&[3]);
        assert_eq!(vector_weights(&n, &v(&[0, 0, 1])).unwrap(), Some(VectorWeights { alpha: 2, beta: 0, gamma: 2 }));
        assert_eq!(vector_weights(&n, &v(&[1, 0, 0])).unwrap(), Some(VectorWeights { alpha: 0, beta: -2, gamma: -2 }));
        assert_eq!(vector_weights(&n, &v(&[0, 0, 0])).unwrap(), None);
        assert!(vector_weights(&RationalMatrix::identity(2), &v(&[1, 0])).is_err());
    }

    #[test]
    fn filtration_examples() {
        let wf = weight_filtration(&jordan_nilpotent(&[3]), 0).unwrap();
        assert_eq!(wf.graded_dims(), BTreeMap::from([(-2, 1), (0, 1), (2, 1)]));
        let wf = weight_filtration(&RationalMatrix::zero(2), 0).unwrap();
        assert_eq!(wf.graded_dims(), BTreeMap::from([(0, 2)]));
        let wf = weight_filtration(&jordan_nilpotent(&[2, 1]), 0).unwrap();
        assert_eq!(wf.graded_dims(), BTreeMap::from([(-1, 1), (0, 1), (1, 1)]));
        let shifted = weight_filtration(&jordan_nilpotent(&[2, 1]), 3).unwrap();
        assert_eq!(shifted.graded_dims(), BTreeMap::from([(2, 1), (3, 1), (4, 1)]));
    }

    #[test]
    fn gamma_sublevel_is_not_closed_under_sum() {
        // Blocks 3 and 1: v2 and w have γ = 0 but v2 + w has γ = 1, so the
        // filtration has to be the span.
        let n = jordan_nilpotent(&[3, 1]);
        let g = |c: &[i64]| vector_weights(&n, &v(c)).unwrap().unwrap().gamma;
        assert_eq!((g(&[0, 1, 0, 0]), g(&[0, 0, 0, 1]), g(&[0, 1, 0, 1])), (0, 0, 1));
        let wf = weight_filtration(&n, 0).unwrap();
        assert_eq!(wf.w(0).len(), 3);
        assert_eq!(wf.graded_dims(), BTreeMap::from([(-2, 1), (0, 2), (2, 1)]));
    }

    #[test]
    fn blocks() {
        assert_eq!(jordan_blocks(&jordan_nilpotent(&[3])).unwrap(), vec![3]);
        assert_eq!(jordan_blocks(&RationalMatrix::zero(4)).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(jordan_blocks(&jordan_nilpotent(&[1, 2])).unwrap(), vec![2, 1]);
    }

    #[test]
    fn delta_examples() {
        let h = RationalMatrix::from_i64(&[&[0, -1], &[1, 1]]).unwrap();
        assert!(h.pow(6) == RationalMatrix::identity(2));
        let g = graded_monodromy(&h, None).unwrap();
        assert_eq!(g.m, 6);
        assert_eq!(g.delta[&0], CycloProduct::from_pairs([(6, 1), (1, 1), (2, -1), (3, -1)]));
        assert!(delta_k(&h, 1, None).unwrap().is_one());

        let h = RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(delta_k(&h, 1, None).unwrap(), CycloProduct::factor(1, 1));
        assert!(delta_k(&h, 0, None).unwrap().is_one());

        let h = RationalMatrix::identity(3);
        assert_eq!(delta_k(&h, 0, None).unwrap(), CycloProduct::factor(1, 3));

        let bad = RationalMatrix::from_i64(&[&[2, 0], &[0, 1]]).unwrap();
        assert!(matches!(graded_monodromy(&bad, None), Err(Error::NotQuasiUnipotent(_))));
        let r = RationalMatrix::from_i64(&[&[-1, 0], &[0, 1]]).unwrap();
        assert!(graded_monodromy(&r, Some(1)).is_err());
        assert!(graded_monodromy(&r, Some(2)).is_ok());
    }

    #[test]
    fn monodromy_bound() {
        // A size-3 unipotent block breaks the bound for curves (n=1), and
        // for surfaces it is the forbidden eigenvalue-1 block of size n+1.
        let h = RationalMatrix::identity(3).sub(&jordan_nilpotent(&[3]));
        let g = graded_monodromy(&h, None).unwrap();
        assert_eq!(monodromy_bound_violations(&g, 1).len(), 1);
        assert_eq!(monodromy_bound_violations(&g, 2).len(), 1);
        assert!(monodromy_bound_violations(&g, 3).is_empty());
    }

    #[test]
    fn eigenvalue_minus_one_block() {
        // h = -(1 + J_2) has a size-2 block for eigenvalue -1.
        let h = RationalMatrix::zero(2).sub(&RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]).unwrap());
        let g = graded_monodromy(&h, None).unwrap();
        assert_eq!(g.m, 2);
        assert_eq!(g.delta, BTreeMap::from([(1, CycloProduct::from_pairs([(2, 1), (1, -1)]))]));
    }

    fn blocks_strategy() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(1usize..=4, 1..=4).prop_filter("dim ≤ 8", |b| b.iter().sum::<usize>() <= 8)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn filtration_matches_blocks(blocks in blocks_strategy(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let j = jordan_nilpotent(&blocks);
            let (p, pinv) = random_conjugator(j.dim(), &mut rng);
            let n = p.mul(&j).mul(&pinv);
            let wf = weight_filtration(&n, 0).unwrap();
            let dims = wf.graded_dims();
            let census = block_census(&jordan_blocks(&n).unwrap());
            let mut sorted = blocks.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            prop_assert_eq!(jordan_blocks(&n).unwrap(), sorted);
            for k in 0..=8i64 {
                let d = |k: i64| dims.get(&k).copied().unwrap_or(0);
                prop_assert_eq!(d(k), d(-k));
                prop_assert_eq!(d(k) - d(k + 2), census.get(&(k as usize + 1)).copied().unwrap_or(0));
            }
        }

        #[test]
        fn delta_degrees_account_for_dimension(blocks in blocks_strategy(), seed in any::<u64>(), sign in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let j = jordan_nilpotent(&blocks);
            let dim = j.dim();
            let base = RationalMatrix::identity(dim).sub(&j);
            let h = if sign { RationalMatrix::zero(dim).sub(&base) } else { base };
            let (p, pinv) = random_conjugator(dim, &mut rng);
            let g = graded_monodromy(&p.mul(&h).mul(&pinv), None).unwrap();
            let total: i64 = g.delta.iter().map(|(k, d)| (k + 1) * d.degree()).sum();
            prop_assert_eq!(total, dim as i64);
        }
    }
}
