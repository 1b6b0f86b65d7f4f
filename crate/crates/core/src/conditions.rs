//! Closed-form necessary and sufficient conditions for `H ⪰ T` on trees.
//!
//! A necessary condition that fails proves `H ⋡ T`; a sufficient condition
//! that passes proves `H ⪰ T`. Both are used as a filter in front of the LP
//! and as an independent cross-check of its verdicts.

use std::fmt;

use num_traits::{One, Zero};

use crate::certificates::PrimalCertificate;
use crate::error::{Error, Result};
use crate::exactlp::{self, Cmp, Constraint, LinearProgram, Sense, Status};
use crate::hom::Homomorphism;
use crate::tree_catalog::{invariants, Forest, Lambda, TreeInvariants};
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Necessary,
    Sufficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The two sides of a compared ratio, `H` side first.
    Ratio(Q, Q),
    Lambda(Lambda, Lambda),
    Orientation(FractionalOrientation),
    Note(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub name: &'static str,
    pub kind: Kind,
    pub verdict: Outcome,
    pub witness: Option<Witness>,
}

impl ConditionResult {
    fn new(name: &'static str, kind: Kind, verdict: Outcome, witness: Option<Witness>) -> Self {
        ConditionResult { name, kind, verdict, witness }
    }

    fn na(name: &'static str, kind: Kind) -> Self {
        Self::new(name, kind, Outcome::NotApplicable, None)
    }

    /// Whether this result settles the pair on its own.
    pub fn decisive(&self) -> bool {
        matches!((self.kind, self.verdict), (Kind::Necessary, Outcome::Fail) | (Kind::Sufficient, Outcome::Pass))
    }
}

impl fmt::Display for ConditionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.verdict {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::NotApplicable => "n/a",
        };
        write!(f, "{} {v}", self.name)?;
        match &self.witness {
            Some(Witness::Ratio(a, b)) => write!(f, " ({a} vs {b})"),
            Some(Witness::Lambda(a, b)) => write!(f, " ({a} vs {b})"),
            Some(Witness::Note(s)) => write!(f, " ({s})"),
            Some(Witness::Orientation(_)) | None => Ok(()),
        }
    }
}

/// `f(u,v)` per edge of `T`, stored for the orientation `u → v` with `u < v`
/// as listed in `t.edges()`; the reverse direction carries `1 − f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalOrientation {
    pub t: Forest,
    pub forward: Vec<Q>,
}

impl FractionalOrientation {
    /// `f(u,v)`; zero when `uv` is not an edge.
    pub fn value(&self, u: usize, v: usize) -> Q {
        match self.t.edge_index(u, v) {
            None => Q::zero(),
            Some(e) if self.t.edges()[e].0 == u => self.forward[e].clone(),
            Some(e) => Q::one() - &self.forward[e],
        }
    }

    pub fn out_degree(&self, v: usize) -> Q {
        self.t.neighbors(v).iter().map(|&u| self.value(v, u)).sum()
    }

    pub fn in_degree(&self, v: usize) -> Q {
        self.t.neighbors(v).iter().map(|&u| self.value(u, v)).sum()
    }

    /// The weighting `w(φ_{u,v}) = f(u,v)/e(H)` where `φ_{u,v}` sends the
    /// smaller colour class of `H` to `u` and the other to `v`.
    pub fn induced_primal(&self, h: &Forest) -> PrimalCertificate {
        let colour = h.bipartition();
        let zeros = colour.iter().filter(|&&c| c == 0).count();
        let small: u8 = if zeros <= h.vertex_count() - zeros { 0 } else { 1 };
        let eh = Q::from_integer(h.edge_count().into());
        let mut entries = Vec::new();
        for &(a, b) in self.t.edges() {
            for (u, v) in [(a, b), (b, a)] {
                let w = self.value(u, v) / &eh;
                if w.is_zero() {
                    continue;
                }
                let img = colour.iter().map(|&c| if c == small { u as u32 } else { v as u32 }).collect();
                entries.push((Homomorphism::new(img), w));
            }
        }
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        PrimalCertificate { h: h.clone(), t: self.t.clone(), entries }
    }
}

/// True iff every prefix sum of `a` is at least that of `b`.
pub fn majorizes(a: &[usize], b: &[usize]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let (mut sa, mut sb) = (0, 0);
    for (x, y) in a.iter().zip(b) {
        sa += x;
        sb += y;
        if sa < sb {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ratio(num: usize, den: usize) -> Q {
    Q::new(num.into(), den.into())
}

fn ratio_check(name: &'static str, h: (usize, usize), t: (usize, usize)) -> ConditionResult {
    let (a, b) = (ratio(h.0, h.1), ratio(t.0, t.1));
    let v = if a >= b { Outcome::Pass } else { Outcome::Fail };
    ConditionResult::new(name, Kind::Necessary, v, Some(Witness::Ratio(a, b)))
}

fn is_path(t: &Forest) -> bool {
    t.is_tree() && t.canonical_code() == Forest::path(t.vertex_count()).canonical_code()
}

fn is_star(t: &Forest) -> bool {
    t.is_tree() && t.canonical_code() == Forest::star(t.vertex_count()).canonical_code()
}

/// Whether `T` has a path `abc` with `a` a leaf and `b`, `c` of degree two.
fn has_leaf_tail(t: &Forest) -> bool {
    (0..t.vertex_count()).any(|a| {
        t.is_leaf(a)
            && t.neighbors(a).iter().any(|&b| t.degree(b) == 2 && t.neighbors(b).iter().any(|&c| c != a && t.degree(c) == 2))
    })
}

fn near_star_window(k: usize, l: usize) -> bool {
    k + 1 <= 2 * l && l + 3 <= k
}

fn both_invariants(h: &Forest, t: &Forest) -> Option<(TreeInvariants, TreeInvariants)> {
    Some((invariants(h).ok()?, invariants(t).ok()?))
}

const NECESSARY: [&str; 9] =
    ["e/sigma", "e/v", "e/rad", "majorization", "edgeDegree", "alpha", "lambda", "pathsNotUnique", "nearStar"];

/// Necessary conditions. Any `Fail` means `H ⋡ T`.
pub fn necessary_suite(h: &Forest, t: &Forest) -> Vec<ConditionResult> {
    let Some((ih, it)) = both_invariants(h, t) else {
        return NECESSARY.iter().map(|n| ConditionResult::na(n, Kind::Necessary)).collect();
    };
    let (vh, vt, eh, et) = (h.vertex_count(), t.vertex_count(), h.edge_count(), t.edge_count());
    let same = vh == vt;
    let mut out = vec![
        ratio_check("e/sigma", (eh, ih.sigma), (et, it.sigma)),
        ratio_check("e/v", (eh, vh), (et, vt)),
        ratio_check("e/rad", (eh, ih.radius), (et, it.radius)),
    ];
    out.push(if same {
        let ok = majorizes(&ih.degree_sequence, &it.degree_sequence).expect("equal lengths");
        let v = if ok { Outcome::Pass } else { Outcome::Fail };
        ConditionResult::new("majorization", Kind::Necessary, v, None)
    } else {
        ConditionResult::na("majorization", Kind::Necessary)
    });
    out.push(if ih.degree_sequence == it.degree_sequence {
        let v = if h.edge_degree_multiset() == t.edge_degree_multiset() { Outcome::Pass } else { Outcome::Fail };
        ConditionResult::new("edgeDegree", Kind::Necessary, v, None)
    } else {
        ConditionResult::na("edgeDegree", Kind::Necessary)
    });
    out.push(ratio_check("alpha", (eh, vh - ih.alpha), (et, vt - it.alpha)));
    out.push(if same && vh >= 2 {
        let v = if ih.lambda >= it.lambda { Outcome::Pass } else { Outcome::Fail };
        ConditionResult::new("lambda", Kind::Necessary, v, Some(Witness::Lambda(ih.lambda.clone(), it.lambda.clone())))
    } else {
        ConditionResult::na("lambda", Kind::Necessary)
    });
    let window = ih.near_star.filter(|&(_, l)| near_star_window(vh, l));
    let note = |l: usize| Some(Witness::Note(format!("near-star k={vh} leaves={l}")));
    out.push(match window {
        Some((_, l)) if is_path(t) && vt == vh => ConditionResult::new("pathsNotUnique", Kind::Necessary, Outcome::Fail, note(l)),
        _ => ConditionResult::na("pathsNotUnique", Kind::Necessary),
    });
    out.push(match window {
        Some((_, l)) if vt == vh && has_leaf_tail(t) => ConditionResult::new("nearStar", Kind::Necessary, Outcome::Fail, note(l)),
        _ => ConditionResult::na("nearStar", Kind::Necessary),
    });
    out
}

const SUFFICIENT: [&str; 4] = ["star", "pathBalance", "P4", "orientation"];

/// Sufficient conditions. Any `Pass` means `H ⪰ T`.
pub fn sufficient_suite(h: &Forest, t: &Forest) -> Vec<ConditionResult> {
    let Some((ih, _)) = both_invariants(h, t) else {
        return SUFFICIENT.iter().map(|n| ConditionResult::na(n, Kind::Sufficient)).collect();
    };
    let (vh, vt, eh) = (h.vertex_count(), t.vertex_count(), h.edge_count());
    let verdict = |b: bool| if b { Outcome::Pass } else { Outcome::Fail };
    let mut out = Vec::new();
    out.push(if vt >= 3 && is_star(t) {
        let (a, b) = (Q::from_integer(eh.into()), Q::from_integer(((vt - 1) * ih.sigma).into()));
        ConditionResult::new("star", Kind::Sufficient, verdict(a >= b), Some(Witness::Ratio(a, b)))
    } else {
        ConditionResult::na("star", Kind::Sufficient)
    });
    out.push(if vt >= 2 && is_path(t) {
        // σ(H) ≤ (v(H) − k + 2)/2
        let ok = 2 * ih.sigma + vt <= vh + 2;
        ConditionResult::new("pathBalance", Kind::Sufficient, verdict(ok), None)
    } else {
        ConditionResult::na("pathBalance", Kind::Sufficient)
    });
    out.push(if vt == 4 && is_path(t) {
        ConditionResult::new("P4", Kind::Sufficient, verdict(vh >= 4), None)
    } else {
        ConditionResult::na("P4", Kind::Sufficient)
    });
    out.push(match orientation_feasible(h, t) {
        Some(f) => ConditionResult::new("orientation", Kind::Sufficient, Outcome::Pass, Some(Witness::Orientation(f))),
        None => ConditionResult::new("orientation", Kind::Sufficient, Outcome::Fail, None),
    });
    out
}

/// A fractional orientation of `T` with
/// `d⁻(v)·(v(H) − σ(H)) + d⁺(v)·σ(H) ≤ e(H)` at every vertex, if one exists.
pub fn orientation_feasible(h: &Forest, t: &Forest) -> Option<FractionalOrientation> {
    if !h.is_tree() || !t.is_tree() || h.edge_count() == 0 || t.edge_count() == 0 {
        return None;
    }
    let (n, s) = (h.vertex_count(), h.sigma());
    let eh = Q::from_integer(h.edge_count().into());
    let big = Q::from_integer((n - s).into());
    let small = Q::from_integer(s.into());
    let m = t.edge_count();
    let mut lp = LinearProgram::new(Sense::Max, vec![Q::zero(); m]);
    for e in 0..m {
        let mut row = vec![Q::zero(); m];
        row[e] = Q::one();
        lp.add(Constraint::new(row, Cmp::Le, Q::one()));
    }
    // x_e = f(a,b) for edge (a,b), a < b. At v: out = Σ_{v=a} x_e + Σ_{v=b} (1 − x_e), in = deg − out.
    for v in 0..t.vertex_count() {
        let mut row = vec![Q::zero(); m];
        let mut constant = Q::from_integer(t.degree(v).into()) * &big;
        for (e, &(a, b)) in t.edges().iter().enumerate() {
            if a == v {
                row[e] = &small - &big;
            } else if b == v {
                row[e] = &big - &small;
                constant += &small - &big;
            }
        }
        lp.add(Constraint::new(row, Cmp::Le, &eh - constant));
    }
    let sol = exactlp::solve(&lp);
    (sol.status == Status::Optimal).then(|| FractionalOrientation { t: t.clone(), forward: sol.primal })
}

/// First decisive condition, necessary before sufficient.
pub fn shortcut(h: &Forest, t: &Forest) -> Option<ConditionResult> {
    necessary_suite(h, t)
        .into_iter()
        .find(ConditionResult::decisive)
        .or_else(|| sufficient_suite(h, t).into_iter().find(ConditionResult::decisive))
}
