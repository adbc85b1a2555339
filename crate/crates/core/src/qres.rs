//! Embedded Q-resolution of plane curve germs by weighted blow-ups, and the
//! passage to a smooth resolution graph.
//!
//! A chart is a neighbourhood of the origin of `ℂ²/μ_h` with a small action
//! `1/h(1,β)` on the upstairs coordinates `(u,v)`. The total transform of the
//! germ there is `u^{N_u} v^{N_v} f` where the axis factors belong to
//! components already created (exceptional divisors or strict branches).

use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::mod_inverse;
use crate::cyclo::CycloProduct;
use crate::error::{Error, Result};
use crate::poly::{BivarPoly, QPoly};
use crate::quotient::{chain_multiplicities, hj_resolve, reduce_diagonal, QuotientType};
use crate::rational::{q_int, Q};
use crate::zeta::{acampo_zeta, zeta_to_char};

const MAX_BLOWUPS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Component {
    Exceptional(usize),
    Strict(usize),
}

/// Working state at one point of the partial resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    /// `1/h(1,β)` on `(u,v)`, or smooth.
    pub ambient: QuotientType,
    /// Strict part of the total transform.
    pub equation: BivarPoly,
    /// Component along `{u=0}` and its multiplicity.
    pub u_axis: Option<(Component, u64)>,
    /// Component along `{v=0}` and its multiplicity.
    pub v_axis: Option<(Component, u64)>,
}

impl Chart {
    fn order_beta(&self) -> (i64, i64) {
        let (h, b) = self.ambient.normal_pair().expect("chart ambient in normal form");
        (h as i64, b)
    }

    /// The total transform must be invariant under the chart group.
    pub fn check_invariant(&self) -> Result<()> {
        let (h, beta) = self.order_beta();
        let nu = self.u_axis.map_or(0, |a| a.1) as i64;
        let nv = self.v_axis.map_or(0, |a| a.1) as i64;
        for (&(i, j), _) in self.equation.terms() {
            if (nu + i as i64 + beta * (nv + j as i64)).rem_euclid(h) != 0 {
                return Err(Error::Internal(format!(
                    "total transform not invariant under {} at monomial u^{i} v^{j}",
                    self.ambient
                )));
            }
        }
        Ok(())
    }
}

/// Weights `(p,q)` of the chosen Newton face and the weighted order `m`.
///
/// Among compact faces the largest weighted order wins, ties going to the
/// smaller `p`.
pub fn newton_weights(f: &BivarPoly) -> Result<(u64, u64, u64)> {
    f.newton_faces()
        .into_iter()
        .max_by(|a, b| a.2.cmp(&b.2).then(b.0.cmp(&a.0)))
        .ok_or_else(|| Error::NotReduced(format!("no compact Newton face for {f}")))
}

/// The exceptional divisor created by one weighted blow-up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRecord {
    pub id: usize,
    pub multiplicity: u64,
    pub weights: (u64, u64),
    pub ambient: QuotientType,
    /// Self-intersection right after this blow-up.
    #[serde(with = "crate::rational::q_string")]
    pub self_int_at_creation: Q,
    pub origin_points: Vec<(String, QuotientType)>,
}

#[derive(Clone, Debug)]
pub struct BlowupStep {
    pub exceptional: ExceptionalRecord,
    pub x_chart: Chart,
    pub y_chart: Chart,
}

fn axis_mult(a: &Option<(Component, u64)>) -> u64 {
    a.map_or(0, |a| a.1)
}

/// Number of elements of `μ_d` (acting by `(a,b)`) that act trivially on the
/// weighted projective line `P(p,q)`.
fn kernel_on_exceptional(d: u64, a: i64, b: i64, p: u64, q: u64) -> u64 {
    let (d, p, q) = (d as i64, p as i64, q as i64);
    (0..d).filter(|&t| (0..p).any(|n| (q * (t * a + n * d) - p * t * b).rem_euclid(p * d) == 0)).count() as u64
}

/// `(p,q)`-weighted blow-up of the chart origin.
pub fn qblowup_step(c: &Chart, p: u64, q: u64, id: usize) -> Result<BlowupStep> {
    if p == 0 || q == 0 || num_integer::gcd(p, q) != 1 {
        return Err(Error::InvalidInput(format!("blow-up weights ({p},{q}) must be coprime and positive")));
    }
    let (d, beta) = c.order_beta();
    let a = if d == 1 { 0 } else { 1 };
    let b = if d == 1 { 0 } else { beta };
    let m = c.equation.weighted_order(p, q).ok_or_else(|| Error::InvalidInput("zero equation".into()))?;
    let total = p * axis_mult(&c.u_axis) + q * axis_mult(&c.v_axis) + m;
    let (pi, qi) = (p as i64, q as i64);
    let exc = Component::Exceptional(id);

    // x-chart: U = u^p, V = u^q v.
    let rx = reduce_diagonal(pi * d, &[(-d, qi * d), (a, pi * b - qi * a)]);
    if rx.e_v != 1 || !total.is_multiple_of(rx.e_u) {
        return Err(Error::Internal("unexpected pseudo-reflection in the x-chart".into()));
    }
    let fx = divide_exponents(
        &c.equation.map_exponents(|i, j| (p as u32 * i + q as u32 * j - m as u32, j)),
        rx.e_u as u32,
        1,
    )?;
    let nx = total / rx.e_u;
    let x_chart = Chart { ambient: rx.ty, equation: fx, u_axis: Some((exc, nx)), v_axis: c.v_axis };

    // y-chart: U = u v^p, V = v^q.
    let ry = reduce_diagonal(qi * d, &[(pi * d, -d), (qi * a - pi * b, b)]);
    if ry.e_u != 1 || !total.is_multiple_of(ry.e_v) {
        return Err(Error::Internal("unexpected pseudo-reflection in the y-chart".into()));
    }
    let fy = divide_exponents(
        &c.equation.map_exponents(|i, j| (i, p as u32 * i + q as u32 * j - m as u32)),
        1,
        ry.e_v as u32,
    )?;
    let ny = total / ry.e_v;
    if nx != ny {
        return Err(Error::Internal(format!("exceptional multiplicity differs between charts: {nx} vs {ny}")));
    }
    let y_chart = Chart { ambient: ry.ty, equation: fy, u_axis: c.u_axis, v_axis: Some((exc, ny)) };
    x_chart.check_invariant()?;
    y_chart.check_invariant()?;

    let k = kernel_on_exceptional(d as u64, a, b, p, q) as i64;
    let self_int = -Q::new((k * k).into(), (d * pi * qi).into());
    let origin_points = [("origin-x", &x_chart.ambient), ("origin-y", &y_chart.ambient)]
        .into_iter()
        .filter(|(_, t)| !t.is_smooth())
        .map(|(l, t)| (l.to_string(), t.clone()))
        .collect();
    Ok(BlowupStep {
        exceptional: ExceptionalRecord {
            id,
            multiplicity: nx,
            weights: (p, q),
            ambient: c.ambient.clone(),
            self_int_at_creation: self_int,
            origin_points,
        },
        x_chart,
        y_chart,
    })
}

fn divide_exponents(f: &BivarPoly, eu: u32, ev: u32) -> Result<BivarPoly> {
    if f.terms().any(|(&(i, j), _)| i % eu != 0 || j % ev != 0) {
        return Err(Error::Internal("strict transform not invariant under pseudo-reflections".into()));
    }
    Ok(f.map_exponents(|i, j| (i / eu, j / ev)))
}

/// A point of the final Q-resolution: its cyclic type in the coordinates of
/// the chart and the components along the two axes.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PointRecord {
    ty: QuotientType,
    u: Option<Component>,
    v: Option<Component>,
}

enum Interior {
    Branch,
    Chart(Chart),
}

/// Points of the new exceptional divisor away from the two chart origins,
/// read off the x-chart.
fn interior_points(x: &Chart) -> Result<Vec<Interior>> {
    let (h, beta) = x.order_beta();
    let (comp, n_e) = x.u_axis.expect("x-chart carries the exceptional divisor");
    let restricted = x.equation.restrict_x0();
    if restricted.is_zero() {
        return Err(Error::Internal("strict transform contains the exceptional divisor".into()));
    }
    let coeffs = restricted.coeffs();
    let j0 = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
    let mut r = Vec::new();
    for (j, c) in coeffs.iter().enumerate().skip(j0) {
        if c.is_zero() {
            continue;
        }
        if (j - j0) as i64 % h != 0 {
            return Err(Error::Internal("restriction to the exceptional divisor is not semi-invariant".into()));
        }
        let k = (j - j0) / h as usize;
        if r.len() <= k {
            r.resize(k + 1, Q::zero());
        }
        r[k] = c.clone();
    }
    let r = QPoly::new(r);
    let mut out = Vec::new();
    for (factor, mult) in r.squarefree_decomposition() {
        if mult == 1 {
            out.extend((0..factor.degree()).map(|_| Interior::Branch));
            continue;
        }
        let roots = factor.rational_split()?.ok_or_else(|| {
            Error::Unsupported(format!(
                "singular point of the strict transform at an irrational point of E{} (factor of degree {})",
                match comp {
                    Component::Exceptional(i) | Component::Strict(i) => i,
                },
                factor.degree()
            ))
        })?;
        for w0 in roots {
            out.push(Interior::Chart(translate_to(x, h, beta, &w0, comp, n_e)?));
        }
    }
    Ok(out)
}

/// Chart centred at the point `v^h = w0` of `{u=0}`, in the invariant
/// coordinates `U' = u v^s`, `w = v^h - w0`.
fn translate_to(x: &Chart, h: i64, beta: i64, w0: &Q, comp: Component, n_e: u64) -> Result<Chart> {
    let s = if h == 1 { 0 } else { (-mod_inverse(beta, h).expect("unit")).rem_euclid(h) };
    let (&(i0, j0), _) = x.equation.terms().next().expect("nonzero");
    let chi = (i0 as i64 + beta * j0 as i64).rem_euclid(h);
    let t = if h == 1 { 0 } else { (-chi * mod_inverse(beta, h).expect("unit")).rem_euclid(h) };
    let mut exps = Vec::new();
    for (&(i, j), c) in x.equation.terms() {
        let num = j as i64 + t - s * i as i64;
        if num.rem_euclid(h) != 0 {
            return Err(Error::Internal("invariant coordinates do not cover the chart equation".into()));
        }
        exps.push((i, num / h, c.clone()));
    }
    let shift = exps.iter().map(|e| e.1).min().unwrap_or(0).min(0);
    let g = BivarPoly::from_terms(exps.into_iter().map(|(i, e, c)| ((i, (e - shift) as u32), c)));
    Ok(Chart { ambient: QuotientType::smooth(2), equation: g.shift_y(w0), u_axis: Some((comp, n_e)), v_axis: None })
}

/// A quotient point attached to a single vertex, written so that the vertex
/// is `{x₁=0}` of `1/d(1,β)`.
pub type Decoration = QuotientType;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Exceptional,
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QVertex {
    pub id: usize,
    pub kind: VertexKind,
    pub multiplicity: u64,
    /// Exceptional vertices only.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_q")]
    pub self_int: Option<Q>,
    pub genus: u64,
    pub quotient_points: Vec<Decoration>,
}

/// Intersection point of two components: `a = {x₁=0}`, `b = {x₂=0}` of
/// `point = 1/d(1,β)` (smooth for an ordinary crossing).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEdge {
    pub a: usize,
    pub b: usize,
    pub point: QuotientType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QResolutionGraph {
    pub vertices: Vec<QVertex>,
    pub edges: Vec<QEdge>,
    pub strict_vertices: Vec<usize>,
    pub blowups: usize,
    pub steps: Vec<ExceptionalRecord>,
}

mod opt_q {
    use crate::rational::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&fmt_q(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| parse_q(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

/// Q-resolution of the germ `f = 0` at the origin.
pub fn qresolve(f: &BivarPoly) -> Result<QResolutionGraph> {
    if f.is_empty() || !f.constant().is_zero() {
        return Err(Error::InvalidInput("the germ must vanish at the origin".into()));
    }
    let (a, b) = f.monomial_content();
    if a >= 2 || b >= 2 {
        return Err(Error::NotReduced(format!("{f} has a repeated coordinate factor")));
    }
    let g = f.divide_monomial(a, b);
    let mut strict = 0usize;
    let mut new_strict = || {
        strict += 1;
        Component::Strict(strict - 1)
    };
    let u_axis = (a == 1).then(|| (new_strict(), 1));
    let v_axis = (b == 1).then(|| (new_strict(), 1));
    let start = Chart { ambient: QuotientType::smooth(2), equation: g.clone(), u_axis, v_axis };

    let mut steps: Vec<ExceptionalRecord> = Vec::new();
    let mut points: Vec<PointRecord> = Vec::new();
    let mut work: Vec<(Chart, bool)> = vec![(start, true)];
    while let Some((c, forced)) = work.pop() {
        if !forced {
            if let Some(p) = terminal_point(&c, &mut new_strict) {
                points.push(p);
                continue;
            }
        }
        if steps.len() >= MAX_BLOWUPS {
            return Err(if f.looks_squarefree() {
                Error::Unsupported(format!("no Q-resolution within {MAX_BLOWUPS} weighted blow-ups"))
            } else {
                Error::NotReduced(format!("{f} has a repeated factor"))
            });
        }
        let (p, q, _) = if c.equation.constant().is_zero() { newton_weights(&c.equation)? } else { (1, 1, 0) };
        let step = qblowup_step(&c, p, q, steps.len())?;
        let comp = Component::Exceptional(step.exceptional.id);
        for pt in interior_points(&step.x_chart)? {
            match pt {
                Interior::Branch => {
                    points.push(PointRecord { ty: QuotientType::smooth(2), u: Some(comp), v: Some(new_strict()) })
                }
                Interior::Chart(t) => work.push((t, false)),
            }
        }
        work.push((step.y_chart, false));
        work.push((step.x_chart, false));
        steps.push(step.exceptional);
    }
    Ok(assemble(steps, points, strict))
}

fn terminal_point(c: &Chart, new_strict: &mut impl FnMut() -> Component) -> Option<PointRecord> {
    let u = c.u_axis.map(|a| a.0);
    let v = c.v_axis.map(|a| a.0);
    if !c.equation.constant().is_zero() {
        return Some(PointRecord { ty: c.ambient.clone(), u, v });
    }
    match (u, v) {
        (Some(u), None) if !c.equation.coeff(0, 1).is_zero() => {
            Some(PointRecord { ty: c.ambient.clone(), u: Some(u), v: Some(new_strict()) })
        }
        (None, Some(v)) if !c.equation.coeff(1, 0).is_zero() => {
            Some(PointRecord { ty: c.ambient.clone(), u: Some(new_strict()), v: Some(v) })
        }
        _ => None,
    }
}

/// `1/d(1,β)` read with the two coordinates exchanged.
fn swap_type(t: &QuotientType) -> QuotientType {
    match t.normal_pair() {
        Some((d, b)) if d > 1 => QuotientType::cyclic(d, &[1, mod_inverse(b, d as i64).expect("unit")]),
        _ => t.clone(),
    }
}

fn assemble(steps: Vec<ExceptionalRecord>, points: Vec<PointRecord>, strict: usize) -> QResolutionGraph {
    let ne = steps.len();
    let index = |c: Component| match c {
        Component::Exceptional(i) => i,
        Component::Strict(i) => ne + i,
    };
    let mut vertices: Vec<QVertex> = steps
        .iter()
        .map(|s| QVertex {
            id: s.id,
            kind: VertexKind::Exceptional,
            multiplicity: s.multiplicity,
            self_int: None,
            genus: 0,
            quotient_points: Vec::new(),
        })
        .chain((0..strict).map(|i| QVertex {
            id: ne + i,
            kind: VertexKind::Strict,
            multiplicity: 1,
            self_int: None,
            genus: 0,
            quotient_points: Vec::new(),
        }))
        .collect();
    let mut edges = Vec::new();
    for p in points {
        match (p.u, p.v) {
            (Some(u), Some(v)) => edges.push(QEdge { a: index(u), b: index(v), point: p.ty }),
            (Some(u), None) if !p.ty.is_smooth() => vertices[index(u)].quotient_points.push(p.ty),
            (None, Some(v)) if !p.ty.is_smooth() => vertices[index(v)].quotient_points.push(swap_type(&p.ty)),
            _ => {}
        }
    }
    edges.sort_by_key(|e| (e.a.min(e.b), e.a.max(e.b)));
    for v in vertices.iter_mut() {
        v.quotient_points.sort();
    }
    // Projection formula: N_j E_j² + Σ N_D (E_j·D) = 0.
    let mults: Vec<u64> = vertices.iter().map(|v| v.multiplicity).collect();
    for j in 0..ne {
        let mut acc = Q::zero();
        for e in &edges {
            let order = e.point.d[0] as i64;
            if e.a == j {
                acc += Q::new((mults[e.b] as i64).into(), order.into());
            }
            if e.b == j {
                acc += Q::new((mults[e.a] as i64).into(), order.into());
            }
        }
        vertices[j].self_int = Some(-acc / q_int(mults[j] as i64));
    }
    QResolutionGraph { vertices, edges, strict_vertices: (ne..ne + strict).collect(), blowups: ne, steps }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothVertex {
    pub id: usize,
    pub kind: VertexKind,
    pub multiplicity: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_int: Option<i64>,
    pub genus: u64,
    /// `χ` of the component minus its intersection points.
    #[serde(default)]
    pub chi_open: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothResolutionGraph {
    pub vertices: Vec<SmoothVertex>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub strict_vertices: Vec<usize>,
}

impl SmoothResolutionGraph {
    pub fn exceptional(&self) -> impl Iterator<Item = &SmoothVertex> {
        self.vertices.iter().filter(|v| v.kind == VertexKind::Exceptional)
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == id || b == id).count()
    }

    pub fn neighbours(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == id {
                Some(b)
            } else if b == id {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Checks a graph read from outside and fills in `χ` of the open
    /// components from genus and valence.
    pub fn with_derived_chi(mut self) -> Result<Self> {
        if self.vertices.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(Error::InvalidInput("vertex ids must be 0, 1, 2, ... in order".into()));
        }
        let n = self.vertices.len();
        if let Some(e) = self.edges.iter().find(|&&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::InvalidInput(format!("edge {e:?} is not between two distinct vertices")));
        }
        for i in 0..n {
            let deg = self.degree(i) as i64;
            let v = &mut self.vertices[i];
            v.chi_open = match v.kind {
                VertexKind::Exceptional => 2 - 2 * v.genus as i64 - deg,
                VertexKind::Strict => 0,
            };
        }
        self.strict_vertices = self.vertices.iter().filter(|v| v.kind == VertexKind::Strict).map(|v| v.id).collect();
        Ok(self)
    }

    /// `N_j E_j² + Σ_{neighbours} N = 0` at every exceptional vertex.
    pub fn check_projection_formula(&self) -> Result<()> {
        for v in self.exceptional() {
            let e = v.self_int.expect("exceptional vertices carry a self-intersection");
            let s: i64 = self.neighbours(v.id).map(|n| self.vertices[n].multiplicity as i64).sum();
            if v.multiplicity as i64 * e + s != 0 {
                return Err(Error::Internal(format!("projection formula fails at vertex {}", v.id)));
            }
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph resolution {\n");
        for v in &self.vertices {
            let label = match (&v.kind, v.self_int) {
                (VertexKind::Exceptional, Some(e)) => format!("E{} N={} e={}", v.id, v.multiplicity, e),
                _ => format!("strict {}", v.id),
            };
            let shape = if v.kind == VertexKind::Strict { "plaintext" } else { "circle" };
            let _ = writeln!(out, "  v{} [label=\"{}\", shape={}];", v.id, label, shape);
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -- v{b};");
        }
        out.push_str("}\n");
        out
    }
}

impl QResolutionGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph qresolution {\n");
        for v in &self.vertices {
            let label = match (&v.kind, &v.self_int) {
                (VertexKind::Exceptional, Some(e)) => {
                    let pts: Vec<String> = v.quotient_points.iter().map(|p| p.to_string()).collect();
                    let pts = if pts.is_empty() { String::new() } else { format!(" [{}]", pts.join(" ")) };
                    format!("E{} N={} e={}{}", v.id, v.multiplicity, crate::rational::fmt_q(e), pts)
                }
                _ => format!("strict {}", v.id),
            };
            let _ = writeln!(out, "  v{} [label=\"{}\"];", v.id, label);
        }
        for e in &self.edges {
            if e.point.is_smooth() {
                let _ = writeln!(out, "  v{} -- v{};", e.a, e.b);
            } else {
                let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.a, e.b, e.point);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Replaces every quotient point by its Hirzebruch-Jung chain.
pub fn smoothen(g: &QResolutionGraph) -> Result<SmoothResolutionGraph> {
    let mut vertices: Vec<SmoothVertex> = Vec::new();
    let mut self_int: Vec<Option<Q>> = Vec::new();
    for v in &g.vertices {
        vertices.push(SmoothVertex {
            id: v.id,
            kind: v.kind.clone(),
            multiplicity: v.multiplicity,
            self_int: None,
            genus: v.genus,
            chi_open: 0,
        });
        self_int.push(v.self_int.clone());
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mult = |vs: &Vec<SmoothVertex>, i: Option<usize>| i.map_or(Q::zero(), |i| q_int(vs[i].multiplicity as i64));

    // Chains: (point, vertex on {x₁=0}, vertex on {x₂=0}).
    let mut chains: Vec<(QuotientType, Option<usize>, Option<usize>)> = Vec::new();
    for v in &g.vertices {
        for p in &v.quotient_points {
            chains.push((p.clone(), Some(v.id), None));
        }
    }
    for e in &g.edges {
        if e.point.is_smooth() {
            edges.push((e.a, e.b));
        } else {
            chains.push((e.point.clone(), Some(e.a), Some(e.b)));
        }
    }
    for (point, a, b) in chains {
        let (d, beta) = point
            .normal_pair()
            .ok_or_else(|| Error::InvalidInput(format!("quotient point {point} is not in normal form")))?;
        let chain = hj_resolve(d, beta as u64)?;
        let ms = chain_multiplicities(&chain.b, &mult(&vertices, b), &mult(&vertices, a))?;
        let first = vertices.len();
        for (k, (&bk, &m)) in chain.b.iter().zip(&ms).enumerate() {
            let id = first + k;
            vertices.push(SmoothVertex {
                id,
                kind: VertexKind::Exceptional,
                multiplicity: m,
                self_int: Some(-bk),
                genus: 0,
                chi_open: 0,
            });
            self_int.push(Some(q_int(-bk)));
            if k > 0 {
                edges.push((id - 1, id));
            }
        }
        let last = vertices.len() - 1;
        if let Some(b) = b {
            edges.push((b, first));
            if let Some(s) = self_int[b].as_mut() {
                *s += &chain.correction;
            }
        }
        if let Some(a) = a {
            edges.push((a, last));
            if let Some(s) = self_int[a].as_mut() {
                *s += chain.far_correction();
            }
        }
    }
    for (v, s) in vertices.iter_mut().zip(&self_int) {
        if let Some(s) = s {
            if !s.is_integer() {
                return Err(Error::NonIntegralMultiplicity(format!(
                    "self-intersection {s} of vertex {} is not an integer after smoothing",
                    v.id
                )));
            }
            v.self_int = Some(i64::try_from(s.to_integer()).map_err(|_| Error::Internal("overflow".into()))?);
        }
    }
    let degrees: Vec<i64> =
        (0..vertices.len()).map(|i| edges.iter().filter(|&&(a, b)| a == i || b == i).count() as i64).collect();
    for v in vertices.iter_mut() {
        v.chi_open = match v.kind {
            VertexKind::Exceptional => 2 - 2 * v.genus as i64 - degrees[v.id],
            // A strict branch is a punctured disc.
            VertexKind::Strict => 0,
        };
    }
    let out = SmoothResolutionGraph { vertices, edges, strict_vertices: g.strict_vertices.clone() };
    out.check_projection_formula()?;
    Ok(out)
}

/// Local Milnor number, branch count and characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub mu: u64,
    pub r: u64,
    pub delta: CycloProduct,
}

#[derive(Clone, Debug)]
pub struct LocalPipeline {
    pub qgraph: QResolutionGraph,
    pub smooth: SmoothResolutionGraph,
    pub zeta: CycloProduct,
    pub invariants: LocalInvariants,
}

pub fn local_pipeline(f: &BivarPoly) -> Result<LocalPipeline> {
    let qgraph = qresolve(f)?;
    let smooth = smoothen(&qgraph)?;
    let zeta = acampo_zeta(&smooth);
    let delta = zeta_to_char(&zeta, 1)?;
    let mu = delta.degree();
    let r = smooth.strict_vertices.len() as u64;
    if mu < 0 || (mu - r as i64 + 1) % 2 != 0 {
        return Err(Error::Internal(format!("μ={mu} and r={r} are inconsistent")));
    }
    Ok(LocalPipeline { qgraph, smooth, zeta, invariants: LocalInvariants { mu: mu as u64, r, delta } })
}

pub fn local_invariants(f: &BivarPoly) -> Result<LocalInvariants> {
    local_pipeline(f).map(|p| p.invariants)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn cusp() -> BivarPoly {
        BivarPoly::from_i64(&[(0, 2, 1), (3, 0, -1)])
    }

    fn a4() -> BivarPoly {
        BivarPoly::from_i64(&[(0, 2, 1), (5, 0, -1)])
    }

    fn node() -> BivarPoly {
        BivarPoly::from_i64(&[(1, 1, 1)])
    }

    fn exc_mults(g: &SmoothResolutionGraph) -> Vec<u64> {
        g.exceptional().map(|v| v.multiplicity).collect()
    }

    #[test]
    fn newton_weight_examples() {
        assert_eq!(newton_weights(&cusp()).unwrap(), (2, 3, 6));
        assert_eq!(newton_weights(&BivarPoly::from_i64(&[(0, 1, 1), (1, 0, -1)])).unwrap(), (1, 1, 1));
        assert_eq!(newton_weights(&a4()).unwrap(), (2, 5, 10));
        assert!(matches!(newton_weights(&BivarPoly::from_i64(&[(2, 0, 1)])), Err(Error::NotReduced(_))));
    }

    #[test]
    fn cusp_step() {
        let c = Chart { ambient: QuotientType::smooth(2), equation: cusp(), u_axis: None, v_axis: None };
        let s = qblowup_step(&c, 2, 3, 0).unwrap();
        assert_eq!(s.exceptional.multiplicity, 6);
        assert_eq!(s.exceptional.self_int_at_creation, q(-1, 6));
        assert_eq!(s.x_chart.ambient, QuotientType::cyclic(2, &[1, 1]));
        assert_eq!(s.y_chart.ambient, QuotientType::cyclic(3, &[1, 1]));
        assert_eq!(s.x_chart.equation, BivarPoly::from_i64(&[(0, 2, 1), (0, 0, -1)]));
        assert_eq!(s.y_chart.equation, BivarPoly::from_i64(&[(0, 0, 1), (3, 0, -1)]));
    }

    #[test]
    fn step_on_quotient_matches_weighted_formula() {
        // (1,4)-blow-up of 1/5(1,4): E² = -5/4.
        let c = Chart {
            ambient: QuotientType::cyclic(5, &[1, 4]),
            equation: BivarPoly::from_i64(&[(5, 0, 1), (0, 5, 1)]),
            u_axis: None,
            v_axis: None,
        };
        let s = qblowup_step(&c, 1, 4, 0).unwrap();
        assert_eq!(s.exceptional.self_int_at_creation, q(-5, 4));
    }

    #[test]
    fn cusp_graphs() {
        let g = qresolve(&cusp()).unwrap();
        assert_eq!(g.blowups, 1);
        assert_eq!(g.vertices[0].multiplicity, 6);
        assert_eq!(g.vertices[0].self_int, Some(q(-1, 6)));
        assert_eq!(g.vertices[0].quotient_points.len(), 2);
        assert_eq!(g.strict_vertices.len(), 1);
        let s = smoothen(&g).unwrap();
        assert_eq!(exc_mults(&s), vec![6, 3, 2]);
        let e: Vec<i64> = s.exceptional().map(|v| v.self_int.unwrap()).collect();
        assert_eq!(e, vec![-1, -2, -3]);
        let chi: Vec<i64> = s.exceptional().map(|v| v.chi_open).collect();
        assert_eq!(chi, vec![-1, 1, 1]);
        assert!(crate::curve::tree_rational_test(&s));
    }

    #[test]
    fn a4_graphs() {
        let g = qresolve(&a4()).unwrap();
        assert_eq!(g.vertices[0].self_int, Some(q(-1, 10)));
        let s = smoothen(&g).unwrap();
        let mut m = exc_mults(&s);
        m.sort();
        assert_eq!(m, vec![2, 4, 5, 10]);
    }

    #[test]
    fn node_and_smooth() {
        let g = qresolve(&node()).unwrap();
        assert_eq!(g.vertices[0].multiplicity, 2);
        assert_eq!(g.vertices[0].self_int, Some(q(-1, 1)));
        assert_eq!(g.strict_vertices.len(), 2);
        let inv = local_invariants(&node()).unwrap();
        assert_eq!((inv.mu, inv.r), (1, 2));
        assert_eq!(inv.delta, CycloProduct::factor(1, 1));
        let inv = local_invariants(&BivarPoly::from_i64(&[(0, 1, 1), (1, 0, -1)])).unwrap();
        assert_eq!((inv.mu, inv.r), (0, 1));
        assert!(inv.delta.is_one());
    }

    #[test]
    fn pipeline_examples() {
        let inv = local_invariants(&cusp()).unwrap();
        assert_eq!((inv.mu, inv.r), (2, 1));
        assert_eq!(inv.delta, CycloProduct::from_pairs([(6, 1), (1, 1), (2, -1), (3, -1)]));
        let inv = local_invariants(&a4()).unwrap();
        assert_eq!(inv.mu, 4);
        assert_eq!(inv.delta.expand().unwrap(), crate::cyclo::cyclotomic_poly(10));
    }

    #[test]
    fn multi_step_germs() {
        // E7: x^3 + x y^3
        let inv = local_invariants(&BivarPoly::from_i64(&[(3, 0, 1), (1, 3, 1)])).unwrap();
        assert_eq!((inv.mu, inv.r), (7, 2));
        // E8: y^3 + x^5
        let inv = local_invariants(&BivarPoly::from_i64(&[(0, 3, 1), (5, 0, 1)])).unwrap();
        assert_eq!((inv.mu, inv.r), (8, 1));
        // D5: x^2 y + y^4
        let inv = local_invariants(&BivarPoly::from_i64(&[(2, 1, 1), (0, 4, 1)])).unwrap();
        assert_eq!((inv.mu, inv.r), (5, 2));
        // tacnode y^2 - x^4 = (y - x^2)(y + x^2)
        let inv = local_invariants(&BivarPoly::from_i64(&[(0, 2, 1), (4, 0, -1)])).unwrap();
        assert_eq!((inv.mu, inv.r), (3, 2));
        // ordinary triple point
        let inv = local_invariants(&BivarPoly::from_i64(&[(0, 3, 1), (3, 0, 1)])).unwrap();
        assert_eq!((inv.mu, inv.r), (4, 3));
    }

    #[test]
    fn two_puiseux_pairs() {
        // (y^2 - x^3)^2 - 4 x^5 y - x^7
        let base = BivarPoly::from_i64(&[(0, 2, 1), (3, 0, -1)]);
        let f = base.pow(2).add(&BivarPoly::from_i64(&[(5, 1, -4), (7, 0, -1)]));
        let p = local_pipeline(&f).unwrap();
        assert_eq!((p.invariants.mu, p.invariants.r), (16, 1));
        assert!(p.qgraph.blowups >= 2);
    }

    #[test]
    fn rejects_non_reduced() {
        assert!(matches!(qresolve(&BivarPoly::from_i64(&[(2, 0, 1)])), Err(Error::NotReduced(_))));
        let sq = cusp().pow(2);
        assert!(matches!(qresolve(&sq), Err(Error::NotReduced(_))));
        assert!(matches!(qresolve(&BivarPoly::from_i64(&[(0, 0, 1), (1, 0, 1)])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn euler_characteristic_additivity() {
        for f in [cusp(), a4(), node(), BivarPoly::from_i64(&[(3, 0, 1), (1, 3, 1)])] {
            let s = smoothen(&qresolve(&f).unwrap()).unwrap();
            let exc: Vec<_> = s.exceptional().map(|v| v.id).collect();
            let chi: i64 = s.exceptional().map(|v| v.chi_open).sum();
            let ee = s.edges.iter().filter(|(a, b)| exc.contains(a) && exc.contains(b)).count() as i64;
            let es = s.edges.len() as i64 - ee;
            assert_eq!(chi + ee + es, 2 * exc.len() as i64 - ee);
        }
    }
}
