//! The `singcalc` command line: one subcommand per pipeline, reports as JSON,
//! plain text or Graphviz.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::curve::{
    link_graph_adjust, qhs_test, suspension_flags, Combinatorics, CurveSpec, QhsReport, SurfaceIntersections,
};
use crate::cyclo::CycloProduct;
use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::poly::BivarPoly;
use crate::qres::{local_pipeline, QResolutionGraph, SmoothResolutionGraph};
use crate::quotient::{
    continued_fraction, hj_resolve, normalize_type, suspension_normalize, tridiagonal_det, wblowup2, wblowup3_smooth,
    BlowupData, HJChain, QuotientType,
};
use crate::rational::{fmt_q, Q};
use crate::weight::{graded_monodromy, jordan_blocks, monodromy_bound_violations, weight_filtration};
use crate::wlys::{
    smallest_admissible_k, wdecompose, wlys_admissibility, DeclaredPoint, TrivarPoly, Vertex, WeightVector,
};
use crate::zeta::{
    acampo_zeta, char_poly_lys, jordan1_quotient, jordan2_sis, yau_pair_report, zeta_to_char, Jordan2Report, YauInput,
    YauReport,
};

#[derive(Parser, Debug)]
#[command(name = "singcalc", version, about = "Exact invariants of surface singularities and plane curve germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Order k of the Lê-Yomdin germ, or the graded level for `weightfilt`.
    #[arg(long, global = true)]
    pub k: Option<u64>,
    /// Centre of the weight filtration.
    #[arg(long, global = true)]
    pub center: Option<i64>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Resolution, Milnor number and monodromy of a plane curve germ.
    Local,
    /// Invariants of a Lê-Yomdin surface from its tangent cone.
    Lys,
    /// Normal form and resolution of a cyclic quotient singularity.
    Quotient {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        beta: Option<i64>,
    },
    /// Weight filtration and graded characteristic polynomials of a matrix.
    Weightfilt,
    /// Weighted Lê-Yomdin admissibility.
    Wlys,
    /// Zeta function of a resolution graph.
    Zeta,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Dot,
}

/// Rendered output of one run.
pub trait Report: Serialize {
    fn text(&self) -> String;
    fn dot(&self) -> Option<String> {
        None
    }
}

fn render<R: Report>(r: &R, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).map_err(|e| Error::Internal(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Text => Ok(r.text()),
        Format::Dot => {
            r.dot().ok_or_else(|| Error::InvalidInput("dot output is available for local, lys and zeta".into()))
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T> {
    let path = path.ok_or_else(|| Error::InvalidInput("--input FILE is required".into()))?;
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&raw)?)
}

/// Runs one invocation and returns what goes to stdout.
pub fn run(cli: &Cli) -> Result<String> {
    let input = cli.input.as_deref();
    match cli.command {
        Command::Local => render(&run_local(&read_json::<GermInput>(input)?.into_poly())?, cli.format),
        Command::Lys => {
            // Dispatch by hand: untagged enums lose the integer map keys of
            // cyclotomic products.
            let mut raw: serde_json::Value = read_json(input)?;
            let k = cli.k.unwrap_or(1);
            match raw.get_mut("compare").map(serde_json::Value::take) {
                Some(pair) => render(&run_compare(&serde_json::from_value(pair)?, k)?, cli.format),
                None => render(&run_lys(&serde_json::from_value(raw)?, k)?, cli.format),
            }
        }
        Command::Quotient { d, beta } => {
            let job = match (d, beta) {
                (Some(d), Some(beta)) => QuotientJob::Cyclic { d, beta },
                (None, None) => read_json(input)?,
                _ => return Err(Error::InvalidInput("--d and --beta go together".into())),
            };
            render(&run_quotient(&job)?, cli.format)
        }
        Command::Weightfilt => render(&run_weightfilt(&read_json(input)?, cli.k, cli.center.unwrap_or(0))?, cli.format),
        Command::Wlys => render(&run_wlys(&read_json(input)?)?, cli.format),
        Command::Zeta => render(&run_zeta(read_json(input)?)?, cli.format),
    }
}

/// Entry point of the binary: parses `args`, prints, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

// local

#[derive(Deserialize)]
#[serde(untagged)]
enum GermInput {
    Wrapped { germ: BivarPoly },
    Bare(BivarPoly),
}

impl GermInput {
    fn into_poly(self) -> BivarPoly {
        match self {
            GermInput::Wrapped { germ } | GermInput::Bare(germ) => germ,
        }
    }
}

#[derive(Serialize)]
pub struct LocalReport {
    pub germ: String,
    pub mu: u64,
    pub r: u64,
    pub delta: u64,
    pub charpoly: CycloProduct,
    pub charpoly_expanded: String,
    pub zeta: CycloProduct,
    pub qresolution: QResolutionGraph,
    pub smooth_graph: SmoothResolutionGraph,
}

pub fn run_local(f: &BivarPoly) -> Result<LocalReport> {
    let p = local_pipeline(f)?;
    let inv = p.invariants;
    Ok(LocalReport {
        germ: f.to_string(),
        mu: inv.mu,
        r: inv.r,
        delta: (inv.mu + 1 - inv.r) / 2,
        charpoly_expanded: inv.delta.expand()?.to_string(),
        charpoly: inv.delta,
        zeta: p.zeta,
        qresolution: p.qgraph,
        smooth_graph: p.smooth,
    })
}

impl Report for LocalReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "germ: {}", self.germ);
        let _ = writeln!(s, "mu = {}, r = {}, delta = {}", self.mu, self.r, self.delta);
        let _ = writeln!(s, "characteristic polynomial: {} = {}", self.charpoly, self.charpoly_expanded);
        let _ = writeln!(s, "zeta: {}", self.zeta);
        let _ = writeln!(s, "weighted blow-ups: {}", self.qresolution.blowups);
        for v in self.smooth_graph.exceptional() {
            let _ = writeln!(
                s,
                "  E{}: N = {}, E^2 = {}, chi = {}",
                v.id,
                v.multiplicity,
                v.self_int.unwrap_or(0),
                v.chi_open
            );
        }
        s
    }

    fn dot(&self) -> Option<String> {
        Some(format!("{}{}", self.qresolution.to_dot(), self.smooth_graph.to_dot()))
    }
}

// lys

#[derive(Serialize)]
#[serde(untagged)]
pub enum QhsVerdict {
    Decided(QhsReport),
    Indeterminate { indeterminate: String },
}

#[derive(Serialize)]
pub struct LysReport {
    pub d: u64,
    pub k: u64,
    pub mu_cd: u64,
    pub mu: u64,
    pub charpoly: CycloProduct,
    pub charpoly_degree: i64,
    /// Multiplicity of the eigenvalue 1.
    pub eigenvalue_one: i64,
    pub genera: BTreeMap<String, u64>,
    pub intersections: SurfaceIntersections,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link_graph: Option<Combinatorics>,
    pub qhs: QhsVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan1: Option<CycloProduct>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan2: Option<Jordan2Report>,
}

pub fn run_lys(spec: &CurveSpec, k: u64) -> Result<LysReport> {
    let lys = spec.to_lys(k)?;
    let charpoly = char_poly_lys(&lys)?;
    let link_graph = spec.combinatorics.as_ref().map(|c| link_graph_adjust(c, spec.d, &spec.degrees())).transpose()?;
    let qhs = match qhs_test(spec, k, &suspension_flags(spec)) {
        Ok(r) => QhsVerdict::Decided(r),
        Err(Error::Indeterminate(m)) => QhsVerdict::Indeterminate { indeterminate: m },
        Err(e) => return Err(e),
    };
    let jordan1 = match (&spec.delta_cmb_k, &spec.alexander) {
        (Some(c), Some(a)) => Some(jordan1_quotient(c, a)?),
        _ => None,
    };
    let jordan2 = if k == 1 && !lys.points.is_empty() && lys.points.iter().all(|p| p.jordan1_p.is_some()) {
        Some(jordan2_sis(&lys, None)?)
    } else {
        None
    };
    Ok(LysReport {
        d: spec.d,
        k,
        mu_cd: lys.mu_cd(),
        mu: lys.milnor_number(),
        charpoly_degree: charpoly.degree(),
        eigenvalue_one: charpoly.root_multiplicity(1),
        charpoly,
        genera: spec.genera()?,
        intersections: SurfaceIntersections::compute(spec.d, k, &spec.degrees())?,
        link_graph,
        qhs,
        jordan1,
        jordan2,
    })
}

impl Report for LysReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "d = {}, k = {}, mu(C_d) = {}", self.d, self.k, self.mu_cd);
        let _ = writeln!(s, "Milnor number: {}", self.mu);
        let _ = writeln!(s, "characteristic polynomial (degree {}): {}", self.charpoly_degree, self.charpoly);
        let _ = writeln!(s, "eigenvalue 1 multiplicity: {}", self.eigenvalue_one);
        for (c, g) in &self.genera {
            let _ = writeln!(s, "genus of {c}: {g}");
        }
        let _ = writeln!(s, "intersections on the quotient model: {:?}", self.intersections.vhat_k);
        match &self.qhs {
            QhsVerdict::Decided(r) if r.is_qhs => {
                let _ = writeln!(s, "link is a rational homology sphere");
            }
            QhsVerdict::Decided(r) => {
                let _ = writeln!(s, "link is not a rational homology sphere: {}", r.reasons.join("; "));
            }
            QhsVerdict::Indeterminate { indeterminate } => {
                let _ = writeln!(s, "rational homology sphere: indeterminate ({indeterminate})");
            }
        }
        if let Some(j) = &self.jordan1 {
            let _ = writeln!(s, "Delta^[1] = {j}");
        }
        if let Some(j) = &self.jordan2 {
            let _ = writeln!(s, "Delta^[2] = {} (m = {})", j.delta2, j.m);
        }
        s
    }

    fn dot(&self) -> Option<String> {
        self.link_graph.as_ref().map(Combinatorics::to_dot)
    }
}

fn yau_side(spec: &CurveSpec, k: u64) -> Result<YauInput> {
    let alexander =
        spec.alexander.clone().ok_or_else(|| Error::InvalidInput("both curves need an alexander polynomial".into()))?;
    Ok(YauInput { lys: spec.to_lys(k)?, alexander, delta_cmb_k: spec.delta_cmb_k.clone() })
}

impl Report for YauReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Milnor numbers: {} and {} (same: {})", self.mu[0], self.mu[1], self.same_mu);
        let _ = writeln!(s, "same characteristic polynomial: {}", self.same_charpoly);
        let _ = writeln!(s, "Alexander polynomials differ: {}", self.alexander_differs);
        let _ = writeln!(s, "{}", self.conclusion);
        s
    }
}

pub fn run_compare(specs: &[CurveSpec; 2], k: u64) -> Result<YauReport> {
    yau_pair_report(&yau_side(&specs[0], k)?, &yau_side(&specs[1], k)?)
}

// quotient

#[derive(Deserialize, Debug, Clone)]
#[serde(rename_all = "lowercase")]
pub enum QuotientJob {
    Cyclic { d: u64, beta: i64 },
    Type(QuotientType),
    Suspension { k: u64, a: u64, b: u64 },
    Wblowup { d: u64, p: u64, q: u64 },
    Wblowup3 { p: u64, q: u64, r: u64 },
}

#[derive(Serialize, Default)]
pub struct QuotientReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<QuotientType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<HJChain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continued_fraction: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<QuotientType>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_locus: Option<Vec<(String, QuotientType)>>,
}

fn cyclic_report(t: QuotientType) -> Result<QuotientReport> {
    let mut out = QuotientReport::default();
    if let Some((d, beta)) = t.normal_pair() {
        if d > 1 {
            let chain = hj_resolve(d, beta as u64)?;
            out.continued_fraction = Some(continued_fraction(&Q::new((d as i64).into(), beta.into()))?);
            out.determinant = Some(tridiagonal_det(&chain.b));
            out.chain = Some(chain);
        }
    }
    out.normal_form = Some(t);
    Ok(out)
}

pub fn run_quotient(job: &QuotientJob) -> Result<QuotientReport> {
    match job {
        &QuotientJob::Cyclic { d, beta } => {
            if d == 0 {
                return Err(Error::InvalidInput("d must be positive".into()));
            }
            cyclic_report(normalize_type(&QuotientType::new(vec![d], vec![vec![1, beta]])?))
        }
        QuotientJob::Type(t) => cyclic_report(normalize_type(t)),
        &QuotientJob::Suspension { k, a, b } => {
            if k == 0 {
                return Err(Error::InvalidInput("k must be positive".into()));
            }
            Ok(QuotientReport { components: Some(suspension_normalize(k, a, b)), ..Default::default() })
        }
        &QuotientJob::Wblowup { d, p, q } => {
            Ok(QuotientReport { blowup: Some(wblowup2(d, p, q)?), ..Default::default() })
        }
        &QuotientJob::Wblowup3 { p, q, r } => {
            Ok(QuotientReport { singular_locus: Some(wblowup3_smooth(p, q, r)?), ..Default::default() })
        }
    }
}

impl Report for QuotientReport {
    fn text(&self) -> String {
        let mut s = String::new();
        if let Some(t) = &self.normal_form {
            let _ = writeln!(s, "normal form: {t}");
        }
        if let Some(c) = &self.chain {
            let e: Vec<String> = c.self_intersections().iter().map(i64::to_string).collect();
            let _ = writeln!(s, "Hirzebruch-Jung chain: ({})", e.join(", "));
        }
        if let Some(d) = self.determinant {
            let _ = writeln!(s, "determinant: {d}");
        }
        if let Some(cs) = &self.components {
            let c: Vec<String> = cs.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "components: {}", c.join(", "));
        }
        if let Some(b) = &self.blowup {
            let _ = writeln!(s, "E^2 = {}", fmt_q(&b.exc_self_int));
            for (l, t) in &b.sing_points {
                let _ = writeln!(s, "  {l}: {t}");
            }
        }
        if let Some(pts) = &self.singular_locus {
            for (l, t) in pts {
                let _ = writeln!(s, "{l}: {t}");
            }
        }
        s
    }
}

// weightfilt

#[derive(Deserialize)]
#[serde(untagged)]
pub enum WeightInput {
    Automorphism {
        h: RationalMatrix,
        #[serde(default)]
        m: Option<u64>,
        /// Dimension of the singularity, for the Jordan block bound.
        #[serde(default)]
        n: Option<u64>,
    },
    Nilpotent {
        nilpotent: RationalMatrix,
    },
    Bare(RationalMatrix),
}

#[derive(Serialize)]
pub struct WeightReport {
    pub center: i64,
    pub graded_dims: BTreeMap<i64, usize>,
    pub jordan_blocks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub charpoly: Option<CycloProduct>,
    /// `Δ^[k]` for the nontrivial levels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<BTreeMap<i64, CycloProduct>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_violations: Option<Vec<String>>,
}

pub fn run_weightfilt(input: &WeightInput, k: Option<u64>, center: i64) -> Result<WeightReport> {
    let shift = |dims: BTreeMap<i64, usize>| dims.into_iter().map(|(l, d)| (l + center, d)).collect();
    match input {
        WeightInput::Nilpotent { nilpotent } => {
            let wf = weight_filtration(nilpotent, center)?;
            Ok(WeightReport {
                center,
                graded_dims: wf.graded_dims(),
                jordan_blocks: jordan_blocks(nilpotent)?,
                m: None,
                charpoly: None,
                delta: None,
                bound_violations: None,
            })
        }
        WeightInput::Automorphism { h, m, n } => weight_report(h, *m, *n, k, center, shift),
        WeightInput::Bare(h) => weight_report(h, None, None, k, center, shift),
    }
}

fn weight_report(
    h: &RationalMatrix,
    m: Option<u64>,
    n: Option<u64>,
    k: Option<u64>,
    center: i64,
    shift: impl Fn(BTreeMap<i64, usize>) -> BTreeMap<i64, usize>,
) -> Result<WeightReport> {
    let g = graded_monodromy(h, m)?;
    let mut delta = g.delta.clone();
    if let Some(k) = k {
        let level = k as i64;
        let one = delta.remove(&level).unwrap_or_else(CycloProduct::one);
        delta = BTreeMap::from([(level, one)]);
    }
    Ok(WeightReport {
        center,
        graded_dims: shift(g.graded_dims.clone()),
        jordan_blocks: g.jordan_blocks.clone(),
        m: Some(g.m),
        bound_violations: n.map(|n| monodromy_bound_violations(&g, n)),
        charpoly: Some(g.charpoly),
        delta: Some(delta),
    })
}

impl Report for WeightReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let dims: Vec<String> = self.graded_dims.iter().map(|(l, d)| format!("{l}:{d}")).collect();
        let _ = writeln!(s, "graded dimensions (centre {}): {}", self.center, dims.join(" "));
        let _ = writeln!(s, "Jordan blocks: {:?}", self.jordan_blocks);
        if let Some(d) = &self.delta {
            for (k, c) in d {
                let _ = writeln!(s, "Delta^[{k}] = {c}");
            }
        }
        if let Some(v) = &self.bound_violations {
            for x in v {
                let _ = writeln!(s, "violation: {x}");
            }
        }
        s
    }
}

// wlys

#[derive(Deserialize)]
pub struct WlysInput {
    #[serde(rename = "F")]
    pub f: TrivarPoly,
    pub omega: WeightVector,
    #[serde(default)]
    pub points: Vec<DeclaredPoint>,
    /// Vertices that the next form must avoid, for the smallest `k`.
    #[serde(default)]
    pub avoid: Vec<Vertex>,
}

#[derive(Serialize)]
pub struct WlysCliReport {
    pub omega: [u64; 3],
    pub d: u64,
    /// `null` when `F` is ω-homogeneous.
    pub k: Option<u64>,
    pub parts: BTreeMap<u64, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissible: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<crate::wlys::Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smallest_k: Option<u64>,
}

pub fn run_wlys(input: &WlysInput) -> Result<WlysCliReport> {
    let dec = wdecompose(&input.f, input.omega)?;
    let smallest_k =
        if input.avoid.is_empty() { None } else { Some(smallest_admissible_k(input.omega, dec.d, &input.avoid)?) };
    let mut out = WlysCliReport {
        omega: input.omega.as_array(),
        d: dec.d,
        k: dec.k,
        parts: dec.parts.iter().map(|(m, p)| (*m, p.to_string())).collect(),
        admissible: None,
        failures: Vec::new(),
        notes: Vec::new(),
        smallest_k,
    };
    if dec.k.is_some() {
        let r = wlys_admissibility(&input.f, input.omega, &input.points)?;
        out.admissible = Some(r.admissible);
        out.failures = r.failures;
        out.notes = r.notes;
    } else {
        out.notes.push("F is ω-homogeneous: k is infinite and admissibility is not defined".into());
    }
    Ok(out)
}

impl Report for WlysCliReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let w = self.omega;
        let k = self.k.map_or("infinite".to_string(), |k| k.to_string());
        let _ = writeln!(s, "omega = ({},{},{}), d = {}, k = {k}", w[0], w[1], w[2], self.d);
        for (m, p) in &self.parts {
            let _ = writeln!(s, "  F_{m} = {p}");
        }
        if let Some(a) = self.admissible {
            let _ = writeln!(s, "admissible: {a}");
        }
        for f in &self.failures {
            let _ = writeln!(s, "  failure: {}", f.reason);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        if let Some(k) = self.smallest_k {
            let _ = writeln!(s, "smallest k avoiding the listed vertices: {k}");
        }
        s
    }
}

// zeta

#[derive(Serialize)]
pub struct ZetaReport {
    pub zeta: CycloProduct,
    pub charpoly: CycloProduct,
    pub mu: i64,
    pub graph: SmoothResolutionGraph,
}

pub fn run_zeta(g: SmoothResolutionGraph) -> Result<ZetaReport> {
    let graph = g.with_derived_chi()?;
    let zeta = acampo_zeta(&graph);
    let charpoly = zeta_to_char(&zeta, 1)?;
    Ok(ZetaReport { mu: charpoly.degree(), zeta, charpoly, graph })
}

impl Report for ZetaReport {
    fn text(&self) -> String {
        format!("zeta: {}\ncharacteristic polynomial: {}\nmu = {}\n", self.zeta, self.charpoly, self.mu)
    }

    fn dot(&self) -> Option<String> {
        Some(self.graph.to_dot())
    }
}
