//! Projective plane curves given by their combinatorial data, and the
//! topology of the link of a Lê-Yomdin surface built on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::cyclo::CycloProduct;
use crate::error::{Error, Result};
use crate::poly::BivarPoly;
use crate::qres::{local_invariants, SmoothResolutionGraph};
use crate::rational::Q;
use crate::zeta::{LYSInput, PointData};

const MAX_ISO_VERTICES: usize = 12;

/// `δ = (μ - r + 1)/2`.
pub fn delta_invariant(mu: u64, r: u64) -> Result<u64> {
    let s = mu as i64 - r as i64 + 1;
    if s < 0 || s % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "delta_invariant parity: μ - r + 1 = {s} must be even and nonnegative (μ={mu}, r={r})"
        )));
    }
    Ok(s as u64 / 2)
}

/// Geometric genus of an irreducible curve of degree `d` with the given
/// local δ-invariants.
pub fn genus_component(d: u64, deltas: &[u64]) -> Result<u64> {
    let arithmetic = (d as i64 - 1) * (d as i64 - 2) / 2;
    let g = arithmetic - deltas.iter().sum::<u64>() as i64;
    if g < 0 {
        return Err(Error::InvalidInput(format!(
            "negative genus {g} for a component of degree {d}: the δ-invariants sum to more than {arithmetic}"
        )));
    }
    Ok(g as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveComponent {
    pub id: String,
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub id: String,
    pub mu_p: u64,
    pub r_p: u64,
    /// Local branch count of each component through the point. May be
    /// omitted for irreducible curves.
    #[serde(default)]
    pub branches_on: BTreeMap<String, u64>,
    /// Milnor number of each component at the point, needed for the genus
    /// when several components pass through it.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mu_on: BTreeMap<String, u64>,
    /// Name of a germ from the built-in catalog, e.g. `"A2"` or `"E8"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_type: Option<String>,
    /// Local equation at the point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<BivarPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_p_charpoly: Option<CycloProduct>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jordan1_p: Option<CycloProduct>,
    /// Whether the link of `z^k + f_P` is a ℚ-homology sphere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suspension_qhs: Option<bool>,
    /// Resolution graph of that suspension, from which the flag is read.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suspension_graph: Option<Combinatorics>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub d: u64,
    pub components: Vec<CurveComponent>,
    #[serde(default)]
    pub singular_points: Vec<SingularPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alexander: Option<CycloProduct>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_cmb_k: Option<CycloProduct>,
    /// Dual graph of the minimal resolution of the curve in the plane.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combinatorics: Option<Combinatorics>,
}

impl CurveSpec {
    fn branches(&self, p: &SingularPoint) -> BTreeMap<String, u64> {
        if p.branches_on.is_empty() && self.components.len() == 1 {
            BTreeMap::from([(self.components[0].id.clone(), p.r_p)])
        } else {
            p.branches_on.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let total: u64 = self.components.iter().map(|c| c.degree).sum();
        if total != self.d {
            return Err(Error::InvalidInput(format!("component degrees sum to {total}, but d = {}", self.d)));
        }
        if self.components.iter().any(|c| c.degree == 0) {
            return Err(Error::InvalidInput("components must have positive degree".into()));
        }
        let ids: BTreeSet<&str> = self.components.iter().map(|c| c.id.as_str()).collect();
        if ids.len() != self.components.len() {
            return Err(Error::InvalidInput("component ids must be distinct".into()));
        }
        let mut seen = BTreeSet::new();
        for p in &self.singular_points {
            if !seen.insert(p.id.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate singular point id {}", p.id)));
            }
            delta_invariant(p.mu_p, p.r_p).map_err(|e| Error::InvalidInput(format!("point {}: {e}", p.id)))?;
            let br = self.branches(p);
            if br.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "point {}: branches_on is required for reducible curves",
                    p.id
                )));
            }
            if let Some(c) = br.keys().find(|c| !ids.contains(c.as_str())) {
                return Err(Error::InvalidInput(format!("point {}: unknown component {c}", p.id)));
            }
            let s: u64 = br.values().sum();
            if s != p.r_p {
                return Err(Error::InvalidInput(format!(
                    "point {}: branch counts sum to {s}, but r_p = {}",
                    p.id, p.r_p
                )));
            }
            if p.mu_p == 0 {
                return Err(Error::InvalidInput(format!("point {}: μ_p = 0 is not a singular point", p.id)));
            }
        }
        self.genera()?;
        Ok(())
    }

    /// `δ_p(C_i)` for a component through `p`.
    fn component_delta(&self, p: &SingularPoint, comp: &str) -> Result<u64> {
        let br = self.branches(p);
        let r = br[comp];
        let mu = if br.len() == 1 {
            p.mu_p
        } else {
            *p.mu_on.get(comp).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "point {}: mu_on[{comp}] is needed since several components pass through it",
                    p.id
                ))
            })?
        };
        delta_invariant(mu, r).map_err(|e| Error::InvalidInput(format!("point {} on {comp}: {e}", p.id)))
    }

    pub fn genera(&self) -> Result<BTreeMap<String, u64>> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            let mut deltas = Vec::new();
            for p in &self.singular_points {
                if self.branches(p).contains_key(&c.id) {
                    deltas.push(self.component_delta(p, &c.id)?);
                }
            }
            let g = genus_component(c.degree, &deltas)
                .map_err(|e| Error::InvalidInput(format!("component {}: {e}", c.id)))?;
            out.insert(c.id.clone(), g);
        }
        Ok(out)
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.degree).collect()
    }

    /// Local data of every singular point, with `Δ_P` taken from the
    /// explicit polynomial, the local equation or the catalog, in that order.
    pub fn point_data(&self) -> Result<Vec<PointData>> {
        self.singular_points.iter().map(resolve_point).collect()
    }

    pub fn to_lys(&self, k: u64) -> Result<LYSInput> {
        self.validate()?;
        Ok(LYSInput { d: self.d, k, points: self.point_data()? })
    }
}

fn resolve_point(p: &SingularPoint) -> Result<PointData> {
    let check = |what: &str, mu: u64, r: u64| -> Result<()> {
        if mu != p.mu_p || r != p.r_p {
            return Err(Error::InvalidInput(format!(
                "point {}: {what} has (μ, r) = ({mu}, {r}) but the spec says ({}, {})",
                p.id, p.mu_p, p.r_p
            )));
        }
        Ok(())
    };
    let delta = if let Some(c) = &p.delta_p_charpoly {
        c.clone()
    } else if let Some(f) = &p.germ {
        let inv = local_invariants(f)?;
        check("the local equation", inv.mu, inv.r)?;
        inv.delta
    } else if let Some(name) = &p.local_type {
        let g = catalog::by_name(name)
            .ok_or_else(|| Error::InvalidInput(format!("point {}: unknown local type {name}", p.id)))?;
        check(name, g.mu(), g.r)?;
        g.delta()
    } else {
        return Err(Error::InvalidInput(format!("point {}: needs one of delta_p_charpoly, germ or local_type", p.id)));
    };
    Ok(PointData {
        id: Some(p.id.clone()),
        mu_p: p.mu_p,
        r_p: p.r_p,
        delta_p_charpoly: delta,
        jordan1_p: p.jordan1_p.clone(),
    })
}

/// Intersection matrices of the strict transforms of the components on the
/// blown-up surface (rational) and on its `k`-fold quotient model (integral).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceIntersections {
    pub vhat: Vec<Vec<String>>,
    pub vhat_k: Vec<Vec<i64>>,
}

pub fn surface_intersections(d: u64, k: u64, degrees: &[u64]) -> Result<(Vec<Vec<Q>>, Vec<Vec<i64>>)> {
    if degrees.iter().sum::<u64>() != d {
        return Err(Error::InvalidInput(format!("degrees {degrees:?} do not sum to d = {d}")));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let (d, k) = (d as i64, k as i64);
    let vk: Vec<Vec<i64>> = degrees
        .iter()
        .enumerate()
        .map(|(i, &di)| {
            degrees
                .iter()
                .enumerate()
                .map(|(j, &dj)| {
                    let (di, dj) = (di as i64, dj as i64);
                    if i == j {
                        -di * (d - di + k)
                    } else {
                        di * dj
                    }
                })
                .collect()
        })
        .collect();
    let v = vk.iter().map(|r| r.iter().map(|&x| Q::new(x.into(), k.into())).collect()).collect();
    Ok((v, vk))
}

impl SurfaceIntersections {
    pub fn compute(d: u64, k: u64, degrees: &[u64]) -> Result<Self> {
        let (v, vk) = surface_intersections(d, k, degrees)?;
        Ok(SurfaceIntersections {
            vhat: v.iter().map(|r| r.iter().map(crate::rational::fmt_q).collect()).collect(),
            vhat_k: vk,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombVertex {
    pub id: usize,
    pub self_int: i64,
    pub marked: bool,
    #[serde(default)]
    pub genus: u64,
}

/// Decorated dual graph; marked vertices are the strict transforms of the
/// components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Combinatorics {
    pub vertices: Vec<CombVertex>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

impl Combinatorics {
    pub fn validate(&self) -> Result<()> {
        let ids: BTreeSet<usize> = self.vertices.iter().map(|v| v.id).collect();
        if ids.len() != self.vertices.len() {
            return Err(Error::InvalidInput("vertex ids must be distinct".into()));
        }
        if let Some(v) = self.vertices.iter().find(|v| !v.marked && v.genus != 0) {
            return Err(Error::InvalidInput(format!("unmarked vertex {} has genus {}", v.id, v.genus)));
        }
        if let Some(e) = self.edges.iter().find(|(a, b)| !ids.contains(a) || !ids.contains(b)) {
            return Err(Error::InvalidInput(format!("edge {e:?} refers to an unknown vertex")));
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph combinatorics {\n");
        for v in &self.vertices {
            let g = if v.genus > 0 { format!(" [g={}]", v.genus) } else { String::new() };
            let shape = if v.marked { "box" } else { "circle" };
            let _ = writeln!(out, "  v{} [label=\"{}{}\", shape={}];", v.id, v.self_int, g, shape);
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -- v{b};");
        }
        out.push_str("}\n");
        out
    }

    /// Isomorphism preserving decorations and edge multiplicities.
    pub fn is_isomorphic(&self, other: &Self) -> Result<bool> {
        let n = self.vertices.len();
        if n > MAX_ISO_VERTICES || other.vertices.len() > MAX_ISO_VERTICES {
            return Err(Error::Indeterminate(format!("isomorphism test is limited to {MAX_ISO_VERTICES} vertices")));
        }
        if n != other.vertices.len() || self.edges.len() != other.edges.len() {
            return Ok(false);
        }
        let a = Adjacency::new(self);
        let b = Adjacency::new(other);
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        Ok(extend(&a, &b, 0, &mut map, &mut used))
    }
}

struct Adjacency {
    labels: Vec<(i64, bool, u64, usize)>,
    m: Vec<Vec<usize>>,
}

impl Adjacency {
    fn new(c: &Combinatorics) -> Self {
        let idx: BTreeMap<usize, usize> = c.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect();
        let n = c.vertices.len();
        let mut m = vec![vec![0; n]; n];
        for (x, y) in &c.edges {
            let (i, j) = (idx[x], idx[y]);
            m[i][j] += 1;
            if i != j {
                m[j][i] += 1;
            }
        }
        let labels =
            c.vertices.iter().enumerate().map(|(i, v)| (v.self_int, v.marked, v.genus, m[i].iter().sum())).collect();
        Adjacency { labels, m }
    }
}

fn extend(a: &Adjacency, b: &Adjacency, i: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    let n = map.len();
    if i == n {
        return true;
    }
    for j in 0..n {
        if used[j] || a.labels[i] != b.labels[j] {
            continue;
        }
        if (0..i).any(|p| a.m[i][p] != b.m[j][map[p]]) || a.m[i][i] != b.m[j][j] {
            continue;
        }
        map[i] = j;
        used[j] = true;
        if extend(a, b, i + 1, map, used) {
            return true;
        }
        used[j] = false;
    }
    false
}

/// Decorations of the link graph from the dual graph of the curve: each
/// marked vertex loses `d_i(d+1)`. `degrees` lists `d_i` for the marked
/// vertices in increasing id order.
pub fn link_graph_adjust(c: &Combinatorics, d: u64, degrees: &[u64]) -> Result<Combinatorics> {
    c.validate()?;
    let mut marked: Vec<usize> = c.vertices.iter().filter(|v| v.marked).map(|v| v.id).collect();
    marked.sort_unstable();
    if marked.len() != degrees.len() {
        return Err(Error::InvalidInput(format!("{} marked vertices but {} degrees", marked.len(), degrees.len())));
    }
    let shift: BTreeMap<usize, i64> =
        marked.iter().zip(degrees).map(|(&id, &di)| (id, (di * (d + 1)) as i64)).collect();
    let mut out = c.clone();
    for v in &mut out.vertices {
        if let Some(s) = shift.get(&v.id) {
            v.self_int -= s;
        }
    }
    Ok(out)
}

/// Graphs whose vertices carry a genus.
pub trait DualGraph {
    fn vertex_genera(&self) -> Vec<(usize, u64)>;
    fn edge_list(&self) -> Vec<(usize, usize)>;
}

impl DualGraph for Combinatorics {
    fn vertex_genera(&self) -> Vec<(usize, u64)> {
        self.vertices.iter().map(|v| (v.id, v.genus)).collect()
    }
    fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges.clone()
    }
}

impl DualGraph for SmoothResolutionGraph {
    fn vertex_genera(&self) -> Vec<(usize, u64)> {
        self.vertices.iter().map(|v| (v.id, v.genus)).collect()
    }
    fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges.clone()
    }
}

/// A tree all of whose vertices have genus 0.
pub fn tree_rational_test<G: DualGraph>(g: &G) -> bool {
    let verts = g.vertex_genera();
    let edges = g.edge_list();
    if verts.iter().any(|&(_, genus)| genus != 0) || edges.len() + 1 != verts.len() {
        return false;
    }
    // n-1 edges and connected ⇔ tree
    let mut parent: BTreeMap<usize, usize> = verts.iter().map(|&(id, _)| (id, id)).collect();
    fn root(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(x, r);
        r
    }
    for (a, b) in edges {
        if !parent.contains_key(&a) || !parent.contains_key(&b) {
            return false;
        }
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent.insert(ra, rb);
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QhsReport {
    pub is_qhs: bool,
    pub reasons: Vec<String>,
}

/// Per-point suspension flags read from the spec: an explicit flag, or the
/// supplied suspension graph being a rational tree.
pub fn suspension_flags(spec: &CurveSpec) -> BTreeMap<String, bool> {
    spec.singular_points
        .iter()
        .filter_map(|p| {
            p.suspension_qhs.or_else(|| p.suspension_graph.as_ref().map(tree_rational_test)).map(|f| (p.id.clone(), f))
        })
        .collect()
}

/// Whether the link of a `k`-LYS with tangent cone `spec` is a ℚ-homology
/// sphere: rational cuspidal components through one common point, and for
/// `k > 1` every local suspension link a ℚ-homology sphere.
pub fn qhs_test(spec: &CurveSpec, k: u64, flags: &BTreeMap<String, bool>) -> Result<QhsReport> {
    spec.validate()?;
    let mut reasons = Vec::new();
    for (c, g) in spec.genera()? {
        if g != 0 {
            reasons.push(format!("component {c} has genus {g}"));
        }
    }
    for p in &spec.singular_points {
        for (c, &b) in &spec.branches(p) {
            if b != 1 {
                reasons.push(format!("component {c} has {b} branches at {}", p.id));
            }
        }
    }
    if spec.components.len() > 1 {
        let all: BTreeSet<&str> = spec.components.iter().map(|c| c.id.as_str()).collect();
        let meeting: Vec<&SingularPoint> = spec.singular_points.iter().filter(|p| spec.branches(p).len() > 1).collect();
        let common = meeting
            .iter()
            .filter(|p| spec.branches(p).keys().map(String::as_str).collect::<BTreeSet<_>>() == all)
            .count();
        if meeting.len() != 1 || common != 1 {
            reasons.push(format!(
                "components do not all meet at a single common point ({} meeting points)",
                meeting.len()
            ));
        }
    }
    if k > 1 && reasons.is_empty() {
        let missing: Vec<&str> =
            spec.singular_points.iter().filter(|p| !flags.contains_key(&p.id)).map(|p| p.id.as_str()).collect();
        if !missing.is_empty() {
            return Err(Error::Indeterminate(format!(
                "k = {k} needs suspension data for points {}",
                missing.join(", ")
            )));
        }
    }
    if k > 1 {
        for (p, &f) in flags {
            if !f {
                reasons.push(format!("the link of the {k}-suspension at {p} is not a ℚ-homology sphere"));
            }
        }
    }
    Ok(QhsReport { is_qhs: reasons.is_empty(), reasons })
}
