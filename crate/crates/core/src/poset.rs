//! The relation `⪰` on a tree catalog: computation, poset axioms, Hasse
//! diagram, and comparison with the reference tables.
//!
//! Orientation follows the tables: `rel(i, j)` is true when `T_j ⪰ T_i`
//! (row `i`, column `j`, 0-based catalog positions).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::certificates::{self, Certificate, PrimalCertificate};
use crate::conditions::{self, Kind, Witness};
use crate::domination::{self, Method, Mode, Relation};
use crate::error::{Error, Result};
use crate::hom::Homomorphism;
use crate::tree_catalog::{self, Forest};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub relation: Relation,
    pub method: Method,
    /// Set whenever the LP ran.
    pub lp_value: Option<Q>,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone)]
pub struct RelationMatrix {
    pub catalog: Vec<Forest>,
    /// `cells[i][j]` describes `T_j ⪰ T_i`; `None` when `v(T_j) < v(T_i)`.
    pub cells: Vec<Vec<Option<Cell>>>,
}

impl RelationMatrix {
    pub fn len(&self) -> usize {
        self.catalog.len()
    }

    pub fn is_empty(&self) -> bool {
        self.catalog.is_empty()
    }

    /// `T_j ⪰ T_i`.
    pub fn rel(&self, i: usize, j: usize) -> bool {
        self.cells[i][j].as_ref().is_some_and(|c| c.relation == Relation::Dominates)
    }

    pub fn bools(&self) -> Vec<Vec<bool>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.rel(i, j)).collect()).collect()
    }

    pub fn name(&self, i: usize) -> String {
        self.catalog[i].display_name()
    }

    /// Maximal and minimal elements among trees on exactly `k` vertices.
    pub fn extremes(&self, k: usize) -> (Vec<usize>, Vec<usize>) {
        let level: Vec<usize> = (0..self.len()).filter(|&i| self.catalog[i].vertex_count() == k).collect();
        let strictly_above = |a: usize| level.iter().any(|&b| b != a && self.rel(a, b));
        let strictly_below = |a: usize| level.iter().any(|&b| b != a && self.rel(b, a));
        (
            level.iter().copied().filter(|&a| !strictly_above(a)).collect(),
            level.iter().copied().filter(|&a| !strictly_below(a)).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PosetConfig {
    pub max_n: usize,
    pub mode: Mode,
    /// Try closed-form conditions before the LP.
    pub use_conditions: bool,
    /// Run the LP even where a condition decided, so every cell has a certificate.
    pub certify_all: bool,
}

impl Default for PosetConfig {
    fn default() -> Self {
        PosetConfig { max_n: 8, mode: Mode::Lazy, use_conditions: true, certify_all: false }
    }
}

fn identity_certificate(t: &Forest) -> Certificate {
    let id = Homomorphism::new((0..t.vertex_count() as u32).collect());
    Certificate::Primal(PrimalCertificate { h: t.clone(), t: t.clone(), entries: vec![(id, Q::from_integer(1.into()))] })
}

fn decide_cell(h: &Forest, t: &Forest, cfg: &PosetConfig) -> Result<Cell> {
    let shortcut = if cfg.use_conditions { conditions::shortcut(h, t) } else { None };
    let lp = |cell: &mut Cell| -> Result<()> {
        let v = domination::decide(h, t, cfg.mode)?;
        cell.lp_value = Some(v.lp_value);
        cell.certificate = Some(v.certificate);
        Ok(())
    };
    match shortcut {
        Some(c) => {
            let relation = if c.kind == Kind::Sufficient { Relation::Dominates } else { Relation::NotDominates };
            let certificate = match &c.witness {
                Some(Witness::Orientation(f)) => Some(Certificate::Primal(f.induced_primal(h))),
                _ => None,
            };
            let mut cell = Cell { relation, method: Method::ConditionShortcut(c.name.to_string()), lp_value: None, certificate };
            if cfg.certify_all {
                lp(&mut cell)?;
            }
            Ok(cell)
        }
        None => {
            let v = domination::decide(h, t, cfg.mode)?;
            Ok(Cell { relation: v.relation, method: v.method, lp_value: Some(v.lp_value), certificate: Some(v.certificate) })
        }
    }
}

/// Computes the relation on the catalog of trees with at most `cfg.max_n` vertices.
pub fn compute_relation(cfg: &PosetConfig) -> Result<RelationMatrix> {
    compute_relation_on(tree_catalog::catalog_up_to(cfg.max_n), cfg)
}

pub fn compute_relation_on(catalog: Vec<Forest>, cfg: &PosetConfig) -> Result<RelationMatrix> {
    let n = catalog.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| catalog[j].vertex_count() >= catalog[i].vertex_count())
        .collect();
    let decided: Vec<((usize, usize), Cell)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let cell = if i == j {
                Cell {
                    relation: Relation::Dominates,
                    method: Method::ConditionShortcut("reflexive".into()),
                    lp_value: Some(Q::from_integer(catalog[i].edge_count().into())),
                    certificate: Some(identity_certificate(&catalog[i])),
                }
            } else {
                decide_cell(&catalog[j], &catalog[i], cfg)?
            };
            Ok(((i, j), cell))
        })
        .collect::<Result<_>>()?;
    let mut cells = vec![vec![None; n]; n];
    for ((i, j), c) in decided {
        cells[i][j] = Some(c);
    }
    Ok(RelationMatrix { catalog, cells })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub reflexivity: Vec<usize>,
    /// Distinct `(i, j)` with `T_j ⪰ T_i` and `T_i ⪰ T_j`.
    pub antisymmetry: Vec<(usize, usize)>,
    /// `(a, b, c)` with `T_a ⪰ T_b ⪰ T_c` but not `T_a ⪰ T_c`.
    pub transitivity: Vec<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.reflexivity.is_empty() && self.antisymmetry.is_empty() && self.transitivity.is_empty()
    }
}

/// Checks the partial-order axioms on `rel[i][j] = (T_j ⪰ T_i)`.
pub fn check_relation_axioms(rel: &[Vec<bool>]) -> AxiomReport {
    let n = rel.len();
    let mut r = AxiomReport::default();
    for i in 0..n {
        if !rel[i][i] {
            r.reflexivity.push(i);
        }
        for j in i + 1..n {
            if rel[i][j] && rel[j][i] {
                r.antisymmetry.push((i, j));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b || !rel[b][a] {
                continue;
            }
            for c in 0..n {
                if c != b && rel[c][b] && !rel[c][a] {
                    r.transitivity.push((a, b, c));
                }
            }
        }
    }
    r
}

pub fn check_poset_axioms(m: &RelationMatrix) -> AxiomReport {
    check_relation_axioms(&m.bools())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDag {
    pub nodes: Vec<usize>,
    /// `(u, v)`: `T_u` covers `T_v`.
    pub arcs: Vec<(usize, usize)>,
}

/// Transitive reduction of the strict relation.
pub fn hasse_of(rel: &[Vec<bool>]) -> Result<HasseDag> {
    let report = check_relation_axioms(rel);
    if !report.ok() {
        return Err(Error::NotAPartialOrder(format!("{report:?}")));
    }
    let n = rel.len();
    let above = |u: usize, v: usize| u != v && rel[v][u];
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if above(u, v) && !(0..n).any(|w| w != u && w != v && above(u, w) && above(w, v)) {
                arcs.push((u, v));
            }
        }
    }
    Ok(HasseDag { nodes: (0..n).collect(), arcs })
}

pub fn hasse(m: &RelationMatrix) -> Result<HasseDag> {
    hasse_of(&m.bools())
}

impl HasseDag {
    pub fn to_dot(&self, names: &[String]) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n");
        for &v in &self.nodes {
            let _ = writeln!(s, "  n{v} [label=\"{}\"];", names[v]);
        }
        for &(u, v) in &self.arcs {
            let _ = writeln!(s, "  n{v} -> n{u};");
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceTable {
    pub id: usize,
    /// 1-based catalog indices.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub gray: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    pub tables: Vec<ReferenceTable>,
}

/// A single claim of a reference table: does `T_col ⪰ T_row`? Indices 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Claim {
    pub table: usize,
    pub row: usize,
    pub col: usize,
    pub dominates: bool,
}

impl Reference {
    pub fn bundled() -> Reference {
        Self::parse(include_str!("../data/reference_tables.txt")).expect("bundled reference parses")
    }

    pub fn parse(text: &str) -> Result<Reference> {
        let mut tables: Vec<ReferenceTable> = Vec::new();
        let list = |s: &str| -> Result<Vec<usize>> {
            s.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad index {x}")))).collect()
        };
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            if key == "table" {
                let id = rest.trim().parse().map_err(|_| Error::Parse(line.to_string()))?;
                tables.push(ReferenceTable { id, rows: vec![], cols: vec![], gray: BTreeSet::new() });
                continue;
            }
            let t = tables.last_mut().ok_or_else(|| Error::Parse(format!("entry before table: {line}")))?;
            match key {
                "rows" => t.rows = list(rest)?,
                "cols" => t.cols = list(rest)?,
                "gray" => {
                    for p in rest.split(',').filter(|x| !x.trim().is_empty()) {
                        let (r, c) = p.trim().split_once('-').ok_or_else(|| Error::Parse(p.to_string()))?;
                        let r = r.parse().map_err(|_| Error::Parse(p.to_string()))?;
                        let c = c.parse().map_err(|_| Error::Parse(p.to_string()))?;
                        t.gray.insert((r, c));
                    }
                }
                _ => return Err(Error::Parse(line.to_string())),
            }
        }
        Ok(Reference { tables })
    }

    /// Every comparable cell (`v(T_col) ≥ v(T_row)`) of every table.
    pub fn claims(&self) -> Vec<Claim> {
        let cat = tree_catalog::catalog();
        let size = |i: usize| cat.get(i - 1).map_or(usize::MAX, Forest::vertex_count);
        let mut out = Vec::new();
        for t in &self.tables {
            for &row in &t.rows {
                for &col in &t.cols {
                    if size(col) >= size(row) {
                        out.push(Claim { table: t.id, row, col, dominates: t.gray.contains(&(row, col)) });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub claim: Claim,
    pub computed: Relation,
    pub method: Method,
    pub certificate: Option<String>,
}

/// Reference claims that disagree with `m`. Claims about trees outside `m` are skipped.
pub fn diff_against_reference(m: &RelationMatrix, reference: &Reference) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for c in reference.claims() {
        let (i, j) = (c.row - 1, c.col - 1);
        if i >= m.len() || j >= m.len() {
            continue;
        }
        let Some(cell) = &m.cells[i][j] else { continue };
        if (cell.relation == Relation::Dominates) != c.dominates {
            out.push(Discrepancy {
                claim: c,
                computed: cell.relation,
                method: cell.method.clone(),
                certificate: cell.certificate.as_ref().map(certificates::serialize),
            });
        }
    }
    out
}

/// Tables whose every cell lies inside `m`.
pub fn covered_tables(m: &RelationMatrix, reference: &Reference) -> Vec<usize> {
    reference
        .tables
        .iter()
        .filter(|t| t.rows.iter().chain(&t.cols).all(|&x| x <= m.len()))
        .map(|t| t.id)
        .collect()
}

/// `i,j,verdict,method` with 1-based indices; the verdict answers `T_j ⪰ T_i`.
pub fn to_csv(m: &RelationMatrix) -> String {
    let mut s = String::from("i,j,verdict,method\n");
    for i in 0..m.len() {
        for j in 0..m.len() {
            let (v, meth) = match &m.cells[i][j] {
                Some(c) => (c.relation.to_string(), c.method.to_string()),
                None => (Relation::NotDominates.to_string(), "order".to_string()),
            };
            let _ = writeln!(s, "{},{},{v},{meth}", i + 1, j + 1);
        }
    }
    s
}

/// Writes one certificate per decided off-diagonal cell as `<i>-<j>.txt`
/// (`T = T_i`, `H = T_j`). Returns the number written.
pub fn write_bundle(m: &RelationMatrix, dir: &Path) -> Result<usize> {
    fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut count = 0;
    for i in 0..m.len() {
        for j in 0..m.len() {
            if i == j {
                continue;
            }
            if let Some(Cell { certificate: Some(c), .. }) = &m.cells[i][j] {
                let path = dir.join(format!("{}-{}.txt", i + 1, j + 1));
                fs::write(&path, certificates::serialize(c)).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Per-method counts, for reporting.
pub fn provenance_summary(m: &RelationMatrix) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for c in m.cells.iter().flatten().flatten() {
        *out.entry(c.method.to_string()).or_insert(0) += 1;
    }
    out
}
