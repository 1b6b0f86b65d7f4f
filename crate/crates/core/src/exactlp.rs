//! Dense-tableau two-phase simplex over exact rationals with Bland's rule,
//! plus lazy row generation driven by a separation oracle.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub cmp: Cmp,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, cmp: Cmp, rhs: Q) -> Self {
        Constraint { coeffs, cmp, rhs }
    }

    pub fn lhs(&self, x: &[Q]) -> Q {
        self.coeffs.iter().zip(x).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()
    }

    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        let l = self.lhs(x);
        match self.cmp {
            Cmp::Le => l <= self.rhs,
            Cmp::Ge => l >= self.rhs,
            Cmp::Eq => l == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
    /// `true` marks a variable with no lower bound; all others are `≥ 0`.
    pub free: Vec<bool>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Q>) -> Self {
        let n = objective.len();
        LinearProgram { sense, objective, constraints: Vec::new(), free: vec![false; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, c: Constraint) {
        assert_eq!(c.coeffs.len(), self.num_vars(), "constraint width");
        self.constraints.push(c);
    }

    pub fn objective_at(&self, x: &[Q]) -> Q {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: Status,
    pub value: Q,
    pub primal: Vec<Q>,
    /// Shadow price of each constraint: the rate of change of the optimum
    /// per unit increase of its right-hand side.
    pub dual: Vec<Q>,
    pub pivots: usize,
    /// Oracle rounds for lazy solves; 0 otherwise.
    pub rounds: usize,
}

impl LpSolution {
    fn non_optimal(status: Status, n: usize, m: usize, pivots: usize) -> Self {
        LpSolution { status, value: Q::zero(), primal: vec![Q::zero(); n], dual: vec![Q::zero(); m], pivots, rounds: 0 }
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            let inv = p.recip();
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.rows[i][j] -= d;
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Maximises `cost · x` from the current basic feasible solution.
    /// Columns with `allowed[j] == false` never enter. Returns `false` if unbounded.
    fn optimise(&mut self, cost: &[Q], allowed: &[bool]) -> bool {
        let ncols = cost.len();
        loop {
            // reduced cost d_j = c_j - Σ_i c_{B_i} a_ij; Bland: first improving column.
            let cb: Vec<&Q> = self.basis.iter().map(|&b| &cost[b]).collect();
            let mut entering = None;
            for j in 0..ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() && !cb[i].is_zero() {
                        d -= cb[i] * &row[j];
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Solves `lp` exactly. Bland's rule guarantees termination.
pub fn solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars();
    let m = lp.constraints.len();
    // column map: each original variable → (plus column, optional minus column)
    let mut colmap = Vec::with_capacity(n);
    let mut ncols = 0;
    for j in 0..n {
        if lp.free[j] {
            colmap.push((ncols, Some(ncols + 1)));
            ncols += 2;
        } else {
            colmap.push((ncols, None));
            ncols += 1;
        }
    }
    let mut flip = vec![false; m];
    let mut kinds = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut cmp = c.cmp;
        if c.rhs.is_negative() {
            flip[i] = true;
            cmp = match cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Ge => Cmp::Le,
                Cmp::Eq => Cmp::Eq,
            };
        }
        kinds.push(cmp);
    }
    let mut slack_col = vec![None; m];
    let mut art_col = vec![None; m];
    for i in 0..m {
        if kinds[i] != Cmp::Eq {
            slack_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let first_art = ncols;
    for i in 0..m {
        if kinds[i] != Cmp::Le {
            art_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let mut rows = vec![vec![Q::zero(); ncols]; m];
    let mut rhs = vec![Q::zero(); m];
    let mut basis = vec![0; m];
    for (i, c) in lp.constraints.iter().enumerate() {
        let s = if flip[i] { -Q::one() } else { Q::one() };
        for j in 0..n {
            if c.coeffs[j].is_zero() {
                continue;
            }
            let a = &c.coeffs[j] * &s;
            let (p, minus) = colmap[j];
            if let Some(mc) = minus {
                rows[i][mc] = -a.clone();
            }
            rows[i][p] = a;
        }
        rhs[i] = &c.rhs * &s;
        if let Some(sc) = slack_col[i] {
            rows[i][sc] = if kinds[i] == Cmp::Le { Q::one() } else { -Q::one() };
        }
        basis[i] = match (kinds[i], art_col[i]) {
            (Cmp::Le, _) => slack_col[i].unwrap(),
            (_, Some(a)) => {
                rows[i][a] = Q::one();
                a
            }
            _ => unreachable!(),
        };
    }
    let mut tab = Tableau { rows, rhs, basis, pivots: 0 };
    let initial_basis = tab.basis.clone();

    if first_art < ncols {
        let mut cost1 = vec![Q::zero(); ncols];
        for c in cost1.iter_mut().skip(first_art) {
            *c = -Q::one();
        }
        let all = vec![true; ncols];
        tab.optimise(&cost1, &all);
        let infeas: Q = (0..m).filter(|&i| tab.basis[i] >= first_art).map(|i| tab.rhs[i].clone()).sum();
        if infeas.is_positive() {
            return LpSolution::non_optimal(Status::Infeasible, n, m, tab.pivots);
        }
        // drive zero-level artificials out where possible
        for i in 0..m {
            if tab.basis[i] >= first_art {
                if let Some(j) = (0..first_art).find(|&j| !tab.rows[i][j].is_zero() && !tab.basis.contains(&j)) {
                    tab.pivot(i, j);
                }
            }
        }
    }

    let mut cost = vec![Q::zero(); ncols];
    for j in 0..n {
        let c = if lp.sense == Sense::Max { lp.objective[j].clone() } else { -lp.objective[j].clone() };
        let (p, minus) = colmap[j];
        if let Some(mc) = minus {
            cost[mc] = -c.clone();
        }
        cost[p] = c;
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < first_art).collect();
    if !tab.optimise(&cost, &allowed) {
        return LpSolution::non_optimal(Status::Unbounded, n, m, tab.pivots);
    }

    let mut xcol = vec![Q::zero(); ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        xcol[b] = tab.rhs[i].clone();
    }
    let primal: Vec<Q> = colmap
        .iter()
        .map(|&(p, minus)| match minus {
            Some(mc) => &xcol[p] - &xcol[mc],
            None => xcol[p].clone(),
        })
        .collect();
    // y_i = c_B · (B^{-1})_{:, i}; column of the initial identity gives B^{-1} e_i.
    let mut dual = Vec::with_capacity(m);
    for i in 0..m {
        let col = initial_basis[i];
        let mut y = Q::zero();
        for (k, &b) in tab.basis.iter().enumerate() {
            if !cost[b].is_zero() && !tab.rows[k][col].is_zero() {
                y += &cost[b] * &tab.rows[k][col];
            }
        }
        if flip[i] {
            y = -y;
        }
        if lp.sense == Sense::Min {
            y = -y;
        }
        dual.push(y);
    }
    let value = lp.objective_at(&primal);
    LpSolution { status: Status::Optimal, value, primal, dual, pivots: tab.pivots, rounds: 0 }
}

/// Solves the LP made of `base` plus every row the oracle can produce.
///
/// The oracle receives the current optimum and returns a violated row, or
/// `None` when the point satisfies every implicit constraint.
pub fn solve_lazy(
    base: &LinearProgram,
    mut separate: impl FnMut(&[Q]) -> Option<Constraint>,
) -> Result<LpSolution> {
    let mut lp = base.clone();
    let mut rounds = 0;
    let mut pivots = 0;
    loop {
        let mut sol = solve(&lp);
        pivots += sol.pivots;
        if sol.status != Status::Optimal {
            sol.rounds = rounds;
            sol.pivots = pivots;
            return Ok(sol);
        }
        match separate(&sol.primal) {
            None => {
                sol.rounds = rounds;
                sol.pivots = pivots;
                return Ok(sol);
            }
            Some(row) => {
                if row.satisfied_by(&sol.primal) {
                    return Err(Error::OracleInconsistency);
                }
                lp.add(row);
                rounds += 1;
            }
        }
    }
}
