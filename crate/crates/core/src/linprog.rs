//! Exact linear programming and linear-system solving over the rationals.
//!
//! A small dense two-phase simplex with Bland's rule (termination is
//! guaranteed, no numerical tolerance anywhere) plus Gaussian elimination.
//! Problem sizes in this crate are desk-scale, so density is fine.

use crate::num::{q0, q1, Q};
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, rel: Rel, rhs: Q) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

/// Maximization problem over variables `x >= 0`.
#[derive(Clone, Debug)]
pub struct Lp {
    pub num_vars: usize,
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows x cols; col layout: [vars..][extras..], last col = rhs
    a: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize, // number of structural+extra columns (excluding rhs)
    artificial: Vec<bool>,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Q {
        &self.a[r][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..self.a.len() {
            if r != row && !self.a[r][col].is_zero() {
                let f = self.a[r][col].clone();
                for c in 0..=self.ncols {
                    let delta = &f * &self.a[row][c];
                    self.a[r][c] = &self.a[r][c] - delta;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Simplex with Bland's rule on the given objective (maximize).
    /// `allowed` marks columns eligible to enter the basis.
    fn maximize(&mut self, obj: &[Q], allowed: &[bool]) -> Result<(), ()> {
        // reduced costs: z_j - c_j computed on demand
        loop {
            // price out: compute c_B * B^-1 A_j - c_j for each allowed column
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut zj = q0();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !obj[b].is_zero() {
                        zj += &obj[b] * &self.a[r][j];
                    }
                }
                let reduced = zj - &obj[j];
                if reduced.is_negative() {
                    entering = Some(j);
                    break; // Bland: smallest index
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };
            // ratio test, Bland's tie-break by smallest basis index
            let mut best: Option<(usize, Q)> = None;
            for r in 0..self.a.len() {
                if self.a[r][j].is_positive() {
                    let ratio = self.rhs(r) / &self.a[r][j];
                    match &best {
                        None => best = Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < *bratio
                                || (ratio == *bratio && self.basis[r] < self.basis[*br])
                            {
                                best = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return Err(()), // unbounded
            }
        }
    }
}

/// Solves the LP exactly.
pub fn solve_lp(lp: &Lp) -> LpOutcome {
    let n = lp.num_vars;
    let mut rows: Vec<(Vec<Q>, Rel, Q)> = Vec::new();
    for c in &lp.constraints {
        assert_eq!(c.coeffs.len(), n, "constraint arity mismatch");
        let (mut coeffs, mut rel, mut rhs) = (c.coeffs.clone(), c.rel, c.rhs.clone());
        if rhs.is_negative() {
            for v in coeffs.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
        rows.push((coeffs, rel, rhs));
    }
    let m = rows.len();
    // column layout: n structural, then one slack/surplus per inequality,
    // then one artificial per Ge/Eq row
    let mut ncols = n;
    let mut slack_col = vec![usize::MAX; m];
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        if matches!(rel, Rel::Le | Rel::Ge) {
            slack_col[i] = ncols;
            ncols += 1;
        }
    }
    let mut art_col = vec![usize::MAX; m];
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        if matches!(rel, Rel::Ge | Rel::Eq) {
            art_col[i] = ncols;
            ncols += 1;
        }
    }
    let mut a = vec![vec![q0(); ncols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut artificial = vec![false; ncols];
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        for (j, v) in coeffs.iter().enumerate() {
            a[i][j] = v.clone();
        }
        a[i][ncols] = rhs.clone();
        match rel {
            Rel::Le => {
                a[i][slack_col[i]] = q1();
                basis[i] = slack_col[i];
            }
            Rel::Ge => {
                a[i][slack_col[i]] = -q1();
                a[i][art_col[i]] = q1();
                artificial[art_col[i]] = true;
                basis[i] = art_col[i];
            }
            Rel::Eq => {
                a[i][art_col[i]] = q1();
                artificial[art_col[i]] = true;
                basis[i] = art_col[i];
            }
        }
    }
    let mut t = Tableau {
        a,
        basis,
        ncols,
        artificial: artificial.clone(),
    };
    // Phase 1: maximize -(sum of artificials)
    if artificial.iter().any(|&b| b) {
        let mut obj1 = vec![q0(); ncols];
        for (j, &is_art) in artificial.iter().enumerate() {
            if is_art {
                obj1[j] = -q1();
            }
        }
        let allowed = vec![true; ncols];
        t.maximize(&obj1, &allowed).expect("phase 1 is bounded");
        let mut infeas = q0();
        for (r, &b) in t.basis.iter().enumerate() {
            if t.artificial[b] {
                infeas += t.rhs(r);
            }
        }
        if !infeas.is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive remaining basic artificials out where possible
        for r in 0..t.a.len() {
            if t.artificial[t.basis[r]] {
                if let Some(j) = (0..ncols).find(|&j| !t.artificial[j] && !t.a[r][j].is_zero()) {
                    t.pivot(r, j);
                }
            }
        }
    }
    // Phase 2
    let mut obj2 = vec![q0(); ncols];
    obj2[..n].clone_from_slice(&lp.objective);
    let allowed: Vec<bool> = (0..ncols).map(|j| !t.artificial[j]).collect();
    if t.maximize(&obj2, &allowed).is_err() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![q0(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(r).clone();
        }
    }
    let value = x
        .iter()
        .zip(&lp.objective)
        .fold(q0(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { x, value }
}

/// Maximizes the variables lexicographically (`order` lists variable indices
/// by priority) over the feasible region of `lp` (the `objective` field is
/// ignored). Returns the lexicographically largest feasible point, or `None`
/// when infeasible.
pub fn lexicographic_max(lp: &Lp, order: &[usize]) -> Option<Vec<Q>> {
    let mut work = lp.clone();
    let mut x = None;
    for &v in order {
        work.objective = vec![q0(); work.num_vars];
        work.objective[v] = q1();
        match solve_lp(&work) {
            LpOutcome::Optimal { x: sol, value } => {
                work.constraints.push(Constraint::new(
                    work.objective.clone(),
                    Rel::Eq,
                    value,
                ));
                x = Some(sol);
            }
            LpOutcome::Infeasible => return None,
            LpOutcome::Unbounded => panic!("lexicographic_max on unbounded region"),
        }
    }
    x
}

/// Result of an exact linear solve.
#[derive(Clone, Debug)]
pub enum LinearSolution {
    /// The unique solution.
    Unique(Vec<Q>),
    /// A particular solution of an underdetermined consistent system.
    Underdetermined(Vec<Q>),
    Inconsistent,
}

/// Solves `A x = b` by Gauss-Jordan elimination (free variables set to 0).
pub fn solve_linear(a: &[Vec<Q>], b: &[Q]) -> LinearSolution {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut mat: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pr);
        let piv = mat[rank][col].clone();
        for v in mat[rank].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..m {
            if r != rank && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in 0..=n {
                    let delta = &f * &mat[rank][c];
                    mat[r][c] = &mat[r][c] - delta;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
        if rank == m {
            break;
        }
    }
    for r in rank..m {
        if !mat[r][n].is_zero() {
            return LinearSolution::Inconsistent;
        }
    }
    let mut x = vec![q0(); n];
    for (col, &pr) in pivot_of_col.iter().enumerate() {
        if pr != usize::MAX {
            x[col] = mat[pr][n].clone();
        }
    }
    if rank == n {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Underdetermined(x)
    }
}
