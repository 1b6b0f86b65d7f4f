//! Primal and dual certificates: data model, text format, exact verification.
//!
//! Text format: a header line `primal|dual H=<tree> T=<tree>` followed by one
//! entry per line, `w (a,b,...) = p/q` for primal weights (vector indexed by
//! the vertices of `H`, 1-based images in `T`) and `y (v) = p/q` or
//! `y (a-b) = p/q` for dual weights. For `T` on at most nine vertices a
//! two-digit token `(ab)` also denotes the edge `{a,b}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

use crate::domination::{self, Mode, Relation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::{self, CostVector, Homomorphism, DEFAULT_HOM_CAP};
use crate::tree_catalog::{self, Forest};
use crate::{parse_rational, Q};

/// The source graph of a dual certificate. Refutations hold for arbitrary
/// `H`, so it need not be a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Forest(Forest),
    Graph { graph: Graph, name: String },
}

impl Pattern {
    pub fn name(&self) -> String {
        match self {
            Pattern::Forest(f) => f.display_name(),
            Pattern::Graph { name, .. } => name.clone(),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Pattern::Forest(f) => f.edge_count(),
            Pattern::Graph { graph, .. } => graph.edge_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalCertificate {
    pub h: Forest,
    pub t: Forest,
    /// Homomorphisms with positive weight; everything unlisted weighs 0.
    pub entries: Vec<(Homomorphism, Q)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub h: Pattern,
    pub t: Forest,
    pub vertex_weights: Vec<Q>,
    /// Indexed like `t.edges()`.
    pub edge_weights: Vec<Q>,
}

impl DualCertificate {
    pub fn objective(&self) -> Q {
        self.vertex_weights.iter().chain(&self.edge_weights).sum()
    }

    pub fn costs(&self) -> CostVector {
        CostVector { vertex: self.vertex_weights.clone(), edge: self.edge_weights.clone() }
    }

    /// Forest `H` (panics for a cyclic pattern).
    pub fn h_forest(&self) -> &Forest {
        match &self.h {
            Pattern::Forest(f) => f,
            Pattern::Graph { .. } => panic!("pattern is not a forest"),
        }
    }

    /// Least common denominator of all weights.
    pub fn common_denominator(&self) -> BigUint {
        use num_integer::Integer;
        self.vertex_weights
            .iter()
            .chain(&self.edge_weights)
            .fold(num_bigint::BigInt::from(1), |acc, w| acc.lcm(w.denom()))
            .to_biguint()
            .expect("positive")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Primal(PrimalCertificate),
    Dual(DualCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub constraint: String,
    pub lhs: Q,
    pub rhs: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub checked_constraints: usize,
    pub failures: Vec<Failure>,
    pub objective: Q,
}

impl VerificationReport {
    fn finish(checked: usize, failures: Vec<Failure>, objective: Q) -> Self {
        VerificationReport { ok: failures.is_empty(), checked_constraints: checked, failures, objective }
    }
}

fn resolve_pattern(name: &str) -> Result<Pattern> {
    match tree_catalog::resolve(name) {
        Ok(f) => Ok(Pattern::Forest(f)),
        Err(Error::CycleDetected(..)) => {
            let mut edges = Vec::new();
            for tok in name.split(',') {
                let (a, b) = tok.split_once('-').ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
                let a: usize = a.trim().parse().map_err(|_| Error::UnknownLabel(name.to_string()))?;
                let b: usize = b.trim().parse().map_err(|_| Error::UnknownLabel(name.to_string()))?;
                if a == 0 || b == 0 {
                    return Err(Error::UnknownLabel(name.to_string()));
                }
                edges.push((a - 1, b - 1));
            }
            let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
            Ok(Pattern::Graph { graph: Graph::from_edges(n, &edges)?, name: name.to_string() })
        }
        Err(e) => Err(e),
    }
}

/// Splits `tag (token) = weight`; returns the token without parentheses.
fn split_entry(line: &str, lineno: usize, tag: char) -> Result<(String, Q)> {
    let bad = |tok: &str| Error::MalformedEntry { line: lineno, token: tok.to_string() };
    let (left, right) = line.split_once('=').ok_or_else(|| bad(line))?;
    let weight = parse_rational(right).ok_or_else(|| bad(right.trim()))?;
    let left = left.trim();
    let rest = left.strip_prefix(tag).ok_or_else(|| bad(left))?.trim();
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad(rest))?;
    if weight.is_negative() {
        return Err(bad(right.trim()));
    }
    Ok((inner.trim().to_string(), weight))
}

enum Slot {
    Vertex(usize),
    Edge(usize),
}

fn parse_dual_token(tok: &str, t: &Forest, lineno: usize) -> Result<Slot> {
    let bad = || Error::MalformedEntry { line: lineno, token: tok.to_string() };
    let vertex = |x: usize| if x >= 1 && x <= t.vertex_count() { Ok(x - 1) } else { Err(bad()) };
    let edge = |a: usize, b: usize| {
        let (a, b) = (vertex(a)?, vertex(b)?);
        t.edge_index(a, b).ok_or_else(bad)
    };
    if let Some((a, b)) = tok.split_once('-') {
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        return Ok(Slot::Edge(edge(a, b)?));
    }
    if tok.is_empty() || !tok.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if t.vertex_count() >= 10 {
        return Ok(Slot::Vertex(vertex(tok.parse().map_err(|_| bad())?)?));
    }
    let d: Vec<usize> = tok.bytes().map(|c| (c - b'0') as usize).collect();
    match d.as_slice() {
        [v] => Ok(Slot::Vertex(vertex(*v)?)),
        [a, b] => Ok(Slot::Edge(edge(*a, *b)?)),
        _ => Err(Error::AmbiguousEdgeToken { line: lineno, token: tok.to_string() }),
    }
}

/// Parses a certificate file.
pub fn parse(text: &str) -> Result<Certificate> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::MalformedEntry { line: 1, token: String::new() })?;
    let mut fields = header.split_whitespace();
    let kind = fields.next().unwrap_or("");
    let mut h_name = None;
    let mut t_name = None;
    for f in fields {
        if let Some(v) = f.strip_prefix("H=") {
            h_name = Some(v);
        } else if let Some(v) = f.strip_prefix("T=") {
            t_name = Some(v);
        } else {
            return Err(Error::MalformedEntry { line: hl, token: f.to_string() });
        }
    }
    let missing = |what: &str| Error::MalformedEntry { line: hl, token: format!("missing {what}") };
    let h_name = h_name.ok_or_else(|| missing("H="))?;
    let t = tree_catalog::resolve(t_name.ok_or_else(|| missing("T="))?)?;
    match kind {
        "primal" => {
            let h = tree_catalog::resolve(h_name)?;
            let mut entries = Vec::new();
            for (no, line) in lines {
                let (tok, w) = split_entry(line, no, 'w')?;
                let img: Vec<usize> = tok
                    .split(',')
                    .map(|x| x.trim().parse::<usize>().ok().filter(|&x| x >= 1 && x <= t.vertex_count()))
                    .collect::<Option<_>>()
                    .ok_or(Error::MalformedEntry { line: no, token: tok.clone() })?;
                if img.len() != h.vertex_count() {
                    return Err(Error::MalformedEntry { line: no, token: tok });
                }
                entries.push((Homomorphism::from_one_based(&img), w));
            }
            Ok(Certificate::Primal(PrimalCertificate { h, t, entries }))
        }
        "dual" => {
            let h = resolve_pattern(h_name)?;
            let mut vw = vec![Q::zero(); t.vertex_count()];
            let mut ew = vec![Q::zero(); t.edge_count()];
            let mut seen = std::collections::HashSet::new();
            for (no, line) in lines {
                let (tok, w) = split_entry(line, no, 'y')?;
                let slot = parse_dual_token(&tok, &t, no)?;
                let key = match slot {
                    Slot::Vertex(v) => (0, v),
                    Slot::Edge(e) => (1, e),
                };
                if !seen.insert(key) {
                    return Err(Error::MalformedEntry { line: no, token: format!("repeated ({tok})") });
                }
                match slot {
                    Slot::Vertex(v) => vw[v] = w,
                    Slot::Edge(e) => ew[e] = w,
                }
            }
            Ok(Certificate::Dual(DualCertificate { h, t, vertex_weights: vw, edge_weights: ew }))
        }
        other => Err(Error::MalformedEntry { line: hl, token: other.to_string() }),
    }
}

fn header_name(f: &Forest) -> String {
    f.display_name()
}

pub fn serialize_primal(c: &PrimalCertificate) -> String {
    let mut s = format!("primal H={} T={}\n", header_name(&c.h), header_name(&c.t));
    for (phi, w) in &c.entries {
        let _ = writeln!(s, "w {phi} = {w}");
    }
    s
}

pub fn serialize_dual(c: &DualCertificate) -> String {
    let mut s = format!("dual H={} T={}\n", c.h.name(), header_name(&c.t));
    for (e, w) in c.edge_weights.iter().enumerate() {
        if !w.is_zero() {
            let (a, b) = c.t.edges()[e];
            let _ = writeln!(s, "y ({}-{}) = {w}", a + 1, b + 1);
        }
    }
    for (v, w) in c.vertex_weights.iter().enumerate() {
        if !w.is_zero() {
            let _ = writeln!(s, "y ({}) = {w}", v + 1);
        }
    }
    s
}

pub fn serialize(c: &Certificate) -> String {
    match c {
        Certificate::Primal(p) => serialize_primal(p),
        Certificate::Dual(d) => serialize_dual(d),
    }
}

/// Checks a primal weighting: homomorphisms, non-negativity, the ≤ 1 rows
/// for every edge and vertex of `T`, and objective exactly `e(T)`.
pub fn verify_primal(c: &PrimalCertificate) -> VerificationReport {
    let (h, t) = (&c.h, &c.t);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut edge_load = vec![Q::zero(); t.edge_count()];
    let mut vertex_load = vec![Q::zero(); t.vertex_count()];
    for (k, (phi, w)) in c.entries.iter().enumerate() {
        checked += 2;
        if w.is_negative() {
            failures.push(Failure { constraint: format!("w{} >= 0", k + 1), lhs: w.clone(), rhs: Q::zero() });
        }
        match hom::footprint(phi, h, t) {
            Ok(fp) => {
                for (e, &m) in fp.edge.iter().enumerate() {
                    if m > 0 {
                        edge_load[e] += w * Q::from_integer(m.into());
                    }
                }
                for (v, &m) in fp.vertex.iter().enumerate() {
                    if m > 0 {
                        vertex_load[v] += w * Q::from_integer(m.into());
                    }
                }
            }
            Err(_) => failures.push(Failure {
                constraint: format!("{phi} is not a homomorphism"),
                lhs: Q::zero(),
                rhs: Q::zero(),
            }),
        }
    }
    let one = Q::from_integer(1.into());
    for (e, load) in edge_load.iter().enumerate() {
        checked += 1;
        if *load > one {
            let (a, b) = t.edges()[e];
            failures.push(Failure { constraint: format!("edge {}-{}", a + 1, b + 1), lhs: load.clone(), rhs: one.clone() });
        }
    }
    for (v, load) in vertex_load.iter().enumerate() {
        checked += 1;
        if *load > one {
            failures.push(Failure { constraint: format!("vertex {}", v + 1), lhs: load.clone(), rhs: one.clone() });
        }
    }
    let objective: Q = edge_load.iter().sum();
    checked += 1;
    let target = Q::from_integer(t.edge_count().into());
    if objective != target {
        failures.push(Failure { constraint: "objective = e(T)".into(), lhs: objective.clone(), rhs: target });
    }
    VerificationReport::finish(checked, failures, objective)
}

/// Checks a dual weighting: non-negativity, objective strictly below
/// `e(T)`, and `Σ μ_φ·y ≥ e(H)` for every homomorphism (via the min-cost
/// oracle for forests, by enumeration otherwise).
pub fn verify_dual(c: &DualCertificate) -> VerificationReport {
    let t = &c.t;
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, w) in c.vertex_weights.iter().chain(&c.edge_weights).enumerate() {
        checked += 1;
        if w.is_negative() {
            failures.push(Failure { constraint: format!("y[{i}] >= 0"), lhs: w.clone(), rhs: Q::zero() });
        }
    }
    let objective = c.objective();
    let target = Q::from_integer(t.edge_count().into());
    checked += 1;
    if objective >= target {
        failures.push(Failure { constraint: "objective < e(T)".into(), lhs: objective.clone(), rhs: target });
    }
    let eh = Q::from_integer(c.h.edge_count().into());
    let costs = c.costs();
    match &c.h {
        Pattern::Forest(h) => {
            let count = hom::count_homomorphisms(h, &t.to_graph());
            checked += num_traits::ToPrimitive::to_usize(&count).unwrap_or(usize::MAX);
            if let Some((min, phi)) = hom::min_cost_homomorphism(h, t, &costs) {
                if min < eh {
                    failures.push(Failure { constraint: format!("hom {phi}"), lhs: min, rhs: eh });
                }
            }
        }
        Pattern::Graph { graph, .. } => match hom::enumerate_graph_homomorphisms(graph, t, DEFAULT_HOM_CAP) {
            Ok(homs) => {
                checked += homs.len();
                let mut worst: Option<(Q, &Homomorphism)> = None;
                for phi in &homs {
                    let fp = hom::graph_footprint(phi, graph, t).expect("enumerated map is a homomorphism");
                    let cost = costs.cost_of(&fp);
                    if worst.as_ref().is_none_or(|(m, _)| cost < *m) {
                        worst = Some((cost, phi));
                    }
                }
                if let Some((min, phi)) = worst {
                    if min < eh {
                        failures.push(Failure { constraint: format!("hom {phi}"), lhs: min, rhs: eh });
                    }
                }
            }
            Err(e) => failures.push(Failure { constraint: e.to_string(), lhs: Q::zero(), rhs: Q::zero() }),
        },
    }
    VerificationReport::finish(checked, failures, objective)
}

pub fn verify(c: &Certificate) -> VerificationReport {
    match c {
        Certificate::Primal(p) => verify_primal(p),
        Certificate::Dual(d) => verify_dual(d),
    }
}

/// Directory holding the bundled `appendix_a/` and `appendix_b/` fixtures.
pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Outcome for one certificate file.
#[derive(Debug, Clone)]
pub struct ConstructionResult {
    /// `primal:5-9` style name: `T` index then `H` index.
    pub name: String,
    pub h: Option<Forest>,
    pub t: Option<Forest>,
    pub parsed: std::result::Result<Certificate, Error>,
    pub report: Option<VerificationReport>,
    /// LP re-decision of the pair, when requested or when verification failed.
    pub redecided: Option<(Relation, Q)>,
}

impl ConstructionResult {
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.ok)
    }
}

#[derive(Debug, Clone)]
pub struct AppendixReport {
    pub results: Vec<ConstructionResult>,
}

impl AppendixReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed()).count()
    }

    pub fn failed(&self) -> impl Iterator<Item = &ConstructionResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

fn pair_from_header(text: &str) -> (Option<Forest>, Option<Forest>) {
    let header = text.lines().find(|l| !l.trim().is_empty() && !l.trim().starts_with('#')).unwrap_or("");
    let get = |p: &str| {
        header.split_whitespace().find_map(|f| f.strip_prefix(p)).and_then(|n| tree_catalog::resolve(n).ok())
    };
    (get("H="), get("T="))
}

/// Parses and verifies every `*.txt` certificate in `dir`, sorted by
/// `(T index, H index)` when file stems are `t-h`. Failing pairs, and all
/// pairs if `cross_check`, are re-decided by the LP.
pub fn verify_directory(dir: &Path, cross_check: bool) -> Result<AppendixReport> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    let key = |p: &PathBuf| {
        let stem = p.file_stem().unwrap_or_default().to_string_lossy().to_string();
        let nums: Vec<usize> = stem.split('-').filter_map(|x| x.parse().ok()).collect();
        (nums, stem)
    };
    files.sort_by_key(key);
    let mut work = Vec::new();
    for path in files {
        let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        work.push((path, text));
    }
    use rayon::prelude::*;
    let results = work
        .par_iter()
        .map(|(path, text)| {
            let stem = path.file_stem().unwrap_or_default().to_string_lossy().to_string();
            let parsed = parse(text);
            let kind = match &parsed {
                Ok(Certificate::Primal(_)) => "primal",
                Ok(Certificate::Dual(_)) => "dual",
                Err(_) => text.split_whitespace().next().unwrap_or("?"),
            };
            let (h, t) = pair_from_header(text);
            let report = parsed.as_ref().ok().map(verify);
            let needs = cross_check || !report.as_ref().is_some_and(|r| r.ok);
            let redecided = match (&h, &t, needs) {
                (Some(h), Some(t), true) => {
                    domination::decide(h, t, Mode::Auto).ok().map(|v| (v.relation, v.lp_value))
                }
                _ => None,
            };
            ConstructionResult { name: format!("{kind}:{stem}"), h, t, parsed, report, redecided }
        })
        .collect();
    Ok(AppendixReport { results })
}

/// Verifies both bundled appendices: `(primal report, dual report)`.
pub fn verify_appendices(cross_check: bool) -> Result<(AppendixReport, AppendixReport)> {
    let root = fixture_dir();
    Ok((verify_directory(&root.join("appendix_a"), cross_check)?, verify_directory(&root.join("appendix_b"), cross_check)?))
}

/// Per-pair summary lines used by the CLI.
pub fn summarize(report: &AppendixReport) -> Vec<String> {
    let mut out = Vec::new();
    for r in &report.results {
        let status = match (&r.parsed, &r.report) {
            (Err(e), _) => format!("MALFORMED ({e})"),
            (Ok(_), Some(rep)) if rep.ok => "ok".to_string(),
            (Ok(_), Some(rep)) => {
                let f = &rep.failures[0];
                format!("FAIL {} (lhs {} vs rhs {}; {} failing checks)", f.constraint, f.lhs, f.rhs, rep.failures.len())
            }
            _ => "?".into(),
        };
        let mut line = format!("{} {}", r.name, status);
        if let Some((rel, v)) = &r.redecided {
            let _ = write!(line, " | lp: {rel} value={v}");
        }
        out.push(line);
    }
    out
}

/// Map from `(T index, H index)` to the file stem convention.
pub fn pair_key(name: &str) -> Option<(usize, usize)> {
    let stem = name.split(':').nth(1)?;
    let (t, h) = stem.split_once('-')?;
    Some((t.parse().ok()?, h.parse().ok()?))
}

#[allow(dead_code)]
fn index_by_pair(report: &AppendixReport) -> BTreeMap<(usize, usize), &ConstructionResult> {
    report.results.iter().filter_map(|r| pair_key(&r.name).map(|k| (k, r))).collect()
}
