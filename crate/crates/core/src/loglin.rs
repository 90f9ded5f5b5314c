//! Exact solving of multiplicative (monomial) constraint systems over the
//! positive rationals: find `x_1..x_n > 0` with
//!
//! - `prod x_j^(a_kj) = c_k` for given integer exponents and rational `c_k`,
//! - `x_j <= 1` for a designated subset of variables,
//!
//! deciding feasibility exactly and producing a rational witness when one
//! exists. Everything happens in "log space": the log of a positive rational
//! is represented by its prime factorization with rational exponents, which
//! keeps ordering decidable (compare monomials by clearing denominators).

use crate::num::{q0, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// The logarithm of a positive rational, stored as prime -> exponent.
/// Exponents are rationals so that Gaussian elimination stays closed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogRat {
    exps: BTreeMap<u64, Q>,
}

fn factorize(mut n: u64) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    let mut d = 2u64;
    while d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

impl LogRat {
    pub fn zero() -> Self {
        LogRat::default()
    }

    /// log of a positive rational.
    pub fn of(x: &Q) -> Self {
        assert!(x.is_positive(), "log of a non-positive rational");
        let mut exps: BTreeMap<u64, Q> = BTreeMap::new();
        let num: u64 = x.numer().try_into().expect("numerator fits in u64");
        let den: u64 = x.denom().try_into().expect("denominator fits in u64");
        for (p, e) in factorize(num) {
            *exps.entry(p).or_insert_with(q0) += Q::from_integer(e.into());
        }
        for (p, e) in factorize(den) {
            *exps.entry(p).or_insert_with(q0) -= Q::from_integer(e.into());
        }
        exps.retain(|_, e| !e.is_zero());
        LogRat { exps }
    }

    pub fn add(&self, other: &LogRat) -> LogRat {
        let mut exps = self.exps.clone();
        for (p, e) in &other.exps {
            let entry = exps.entry(*p).or_insert_with(q0);
            *entry += e;
            if entry.is_zero() {
                exps.remove(p);
            }
        }
        LogRat { exps }
    }

    pub fn scale(&self, k: &Q) -> LogRat {
        if k.is_zero() {
            return LogRat::zero();
        }
        LogRat {
            exps: self.exps.iter().map(|(p, e)| (*p, e * k)).collect(),
        }
    }

    pub fn neg(&self) -> LogRat {
        self.scale(&-Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// Sign of the represented real number (negative, zero, positive).
    pub fn sign(&self) -> std::cmp::Ordering {
        if self.exps.is_empty() {
            return std::cmp::Ordering::Equal;
        }
        // clear denominators: compare prod p^(d*e) with 1 in BigInt space
        let lcd: BigInt = self
            .exps
            .values()
            .fold(BigInt::one(), |acc, e| num_integer::lcm(acc, e.denom().clone()));
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.exps {
            let scaled = e * Q::from_integer(lcd.clone());
            debug_assert!(scaled.denom().is_one());
            let k = scaled.numer().clone();
            let mag: u32 = k.magnitude().try_into().expect("exponent fits in u32");
            let pw = BigInt::from(*p).pow(mag);
            if k.is_negative() {
                den *= pw;
            } else {
                num *= pw;
            }
        }
        num.cmp(&den)
    }

    /// The exact rational this log represents, when all exponents are
    /// integers; `None` otherwise (the underlying real is irrational).
    pub fn to_rational(&self) -> Option<Q> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.exps {
            if !e.denom().is_one() {
                return None;
            }
            let k = e.numer();
            let mag: u32 = k.magnitude().try_into().ok()?;
            let pw = BigInt::from(*p).pow(mag);
            if k.is_negative() {
                den *= pw;
            } else {
                num *= pw;
            }
        }
        Some(Q::new(num, den))
    }
}

/// An affine expression `constant + sum coeff_j * t_j` over free real
/// variables `t_j`, with a `LogRat` constant term.
#[derive(Clone, Debug)]
pub struct Affine {
    pub constant: LogRat,
    pub coeffs: BTreeMap<usize, Q>,
}

impl Affine {
    pub fn constant(c: LogRat) -> Self {
        Affine {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(j: usize) -> Self {
        Affine {
            constant: LogRat::zero(),
            coeffs: [(j, Q::one())].into_iter().collect(),
        }
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut coeffs = self.coeffs.clone();
        for (j, c) in &other.coeffs {
            let entry = coeffs.entry(*j).or_insert_with(q0);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(j);
            }
        }
        Affine {
            constant: self.constant.add(&other.constant),
            coeffs,
        }
    }

    pub fn scale(&self, k: &Q) -> Affine {
        if k.is_zero() {
            return Affine::constant(LogRat::zero());
        }
        Affine {
            constant: self.constant.scale(k),
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, c * k)).collect(),
        }
    }

    fn eval(&self, assignment: &BTreeMap<usize, LogRat>) -> LogRat {
        let mut out = self.constant.clone();
        for (j, c) in &self.coeffs {
            out = out.add(&assignment[j].scale(c));
        }
        out
    }
}

/// One equation of a multiplicative system: `prod x_j^(a_j) = c`.
#[derive(Clone, Debug)]
pub struct MonomialEquation {
    pub exponents: BTreeMap<usize, Q>,
    pub rhs: Q, // positive rational
}

/// Outcome of solving a multiplicative system.
#[derive(Clone, Debug)]
pub enum MonomialSolution {
    Infeasible,
    /// Feasible; the witness maps each variable to a positive rational when
    /// a rational witness exists (it may not, if the system forces a
    /// fractional prime exponent with no slack to round it away).
    Feasible(Option<Vec<Q>>),
}

/// Solves for `x_0..x_{n-1} > 0` subject to the monomial equations and to
/// `x_j <= 1` for every `j` in `bounded`.
pub fn solve_monomial_system(
    num_vars: usize,
    equations: &[MonomialEquation],
    bounded: &[bool],
) -> MonomialSolution {
    assert_eq!(bounded.len(), num_vars);
    // Gaussian elimination in log space over expressions in the variables:
    // each row: sum a_j * y_j = log(c), with y_j = log x_j.
    #[derive(Clone)]
    struct Row {
        coeffs: Vec<Q>,
        rhs: LogRat,
    }
    let mut rows: Vec<Row> = equations
        .iter()
        .map(|eq| {
            let mut coeffs = vec![q0(); num_vars];
            for (j, a) in &eq.exponents {
                coeffs[*j] = a.clone();
            }
            Row {
                coeffs,
                rhs: LogRat::of(&eq.rhs),
            }
        })
        .collect();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..num_vars {
        let Some(r) = (rank..rows.len()).find(|&r| !rows[r].coeffs[col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let piv = rows[rank].coeffs[col].clone();
        let inv = Q::one() / piv;
        rows[rank] = Row {
            coeffs: rows[rank].coeffs.iter().map(|c| c * &inv).collect(),
            rhs: rows[rank].rhs.scale(&inv),
        };
        for r in 0..rows.len() {
            if r != rank && !rows[r].coeffs[col].is_zero() {
                let f = rows[r].coeffs[col].clone();
                let new_coeffs: Vec<Q> = rows[r]
                    .coeffs
                    .iter()
                    .zip(&rows[rank].coeffs)
                    .map(|(a, b)| a - &f * b)
                    .collect();
                let new_rhs = rows[r].rhs.add(&rows[rank].rhs.scale(&f).neg());
                rows[r] = Row {
                    coeffs: new_coeffs,
                    rhs: new_rhs,
                };
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
    }
    // consistency of zero rows
    for row in rows.iter().skip(rank) {
        if !row.rhs.is_zero() {
            return MonomialSolution::Infeasible;
        }
    }
    // express each variable as an affine form over the free variables
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let free_vars: Vec<usize> = (0..num_vars).filter(|&c| !is_pivot(c)).collect();
    let mut expr: Vec<Affine> = Vec::with_capacity(num_vars);
    for v in 0..num_vars {
        if let Some(r) = pivot_cols.iter().position(|&c| c == v) {
            // y_v = rhs_r - sum_{free f} coeff_f * t_f
            let mut e = Affine::constant(rows[r].rhs.clone());
            for &f in &free_vars {
                let c = rows[r].coeffs[f].clone();
                if !c.is_zero() {
                    e = e.add(&Affine::var(f).scale(&-c));
                }
            }
            expr.push(e);
        } else {
            expr.push(Affine::var(v));
        }
    }
    // feasibility of `y_v <= 0` for bounded v, over the free variables,
    // by Fourier-Motzkin elimination (constants live in log space)
    let mut constraints: Vec<Affine> = (0..num_vars)
        .filter(|&v| bounded[v])
        .map(|v| expr[v].clone())
        .collect(); // each constraint: affine <= 0
    let mut assignment: BTreeMap<usize, LogRat> = BTreeMap::new();
    let mut elim_order: Vec<usize> = free_vars.clone();
    // eliminate one variable at a time, remembering the bounds for
    // back-substitution
    let mut stages: Vec<(usize, Vec<Affine>, Vec<Affine>)> = Vec::new();
    while let Some(&t) = elim_order.last() {
        elim_order.pop();
        let mut lowers: Vec<Affine> = Vec::new(); // lower bounds: expr <= t
        let mut uppers: Vec<Affine> = Vec::new(); // upper bounds: t <= expr
        let mut rest: Vec<Affine> = Vec::new();
        for c in &constraints {
            match c.coeffs.get(&t).cloned() {
                None => rest.push(c.clone()),
                Some(a) if a.is_positive() => {
                    // a*t + rest <= 0  =>  t <= -(rest)/a
                    let mut r = c.clone();
                    r.coeffs.remove(&t);
                    uppers.push(r.scale(&(-Q::one() / &a)));
                }
                Some(a) => {
                    // a < 0: t >= -(rest)/a ... careful with sign
                    let mut r = c.clone();
                    r.coeffs.remove(&t);
                    lowers.push(r.scale(&(-Q::one() / &a)));
                }
            }
        }
        for lo in &lowers {
            for up in &uppers {
                // lo <= t <= up  =>  lo - up <= 0
                rest.push(lo.add(&up.scale(&-Q::one())));
            }
        }
        stages.push((t, lowers, uppers));
        constraints = rest;
    }
    // remaining constraints are constant
    for c in &constraints {
        debug_assert!(c.coeffs.is_empty());
        if c.constant.sign() == std::cmp::Ordering::Greater {
            return MonomialSolution::Infeasible;
        }
    }
    // back-substitute: pick values for the free variables innermost-first
    let mut rational_ok = true;
    for (t, lowers, uppers) in stages.iter().rev() {
        let lo: Option<LogRat> = lowers
            .iter()
            .map(|e| e.eval(&assignment))
            .max_by(|a, b| a.add(&b.neg()).sign());
        let up: Option<LogRat> = uppers
            .iter()
            .map(|e| e.eval(&assignment))
            .min_by(|a, b| a.add(&b.neg()).sign());
        let value = pick_in_interval(lo.as_ref(), up.as_ref());
        match value {
            Some(v) => {
                assignment.insert(*t, v);
            }
            None => {
                // interval nonempty (FM guarantees) but forced to a single
                // irrational point
                rational_ok = false;
                // fall back to the forced endpoint for downstream evals
                assignment.insert(*t, lo.or(up).unwrap_or_else(LogRat::zero));
            }
        }
    }
    if !rational_ok {
        return MonomialSolution::Feasible(None);
    }
    // assemble the witness
    let mut witness = Vec::with_capacity(num_vars);
    for v in 0..num_vars {
        let val = expr[v].eval(&assignment);
        match val.to_rational() {
            Some(x) => witness.push(x),
            None => return MonomialSolution::Feasible(None),
        }
    }
    MonomialSolution::Feasible(Some(witness))
}

/// Picks the log of a rational inside `[lo, up]` (either bound may be
/// absent). Prefers 0 and the rational endpoints, then searches the open
/// interior with exact Stern-Brocot mediants.
fn pick_in_interval(lo: Option<&LogRat>, up: Option<&LogRat>) -> Option<LogRat> {
    let ge = |a: &LogRat, b: &LogRat| a.add(&b.neg()).sign() != std::cmp::Ordering::Less;
    // try zero (x = 1)
    let zero = LogRat::zero();
    let zero_ok = lo.map_or(true, |l| ge(&zero, l)) && up.map_or(true, |u| ge(u, &zero));
    if zero_ok {
        return Some(zero);
    }
    for cand in [lo, up].into_iter().flatten() {
        let ok = lo.map_or(true, |l| ge(cand, l)) && up.map_or(true, |u| ge(u, cand));
        if ok && cand.to_rational().is_some() {
            return Some(cand.clone());
        }
    }
    if let (Some(l), Some(u)) = (lo, up) {
        if l.add(&u.neg()).sign() == std::cmp::Ordering::Equal {
            return None; // forced to a single irrational point
        }
    }
    // search the open interior: walk the Stern-Brocot tree over positive
    // rationals x, comparing log x against the bounds exactly
    let below = |cand: &LogRat| lo.is_some_and(|l| !ge(cand, l));
    let above = |cand: &LogRat| up.is_some_and(|u| !ge(u, cand));
    let (mut ln, mut ld) = (BigInt::zero(), BigInt::one()); // 0/1
    let (mut hn, mut hd) = (BigInt::one(), BigInt::zero()); // 1/0
    for _ in 0..10_000 {
        let mn = &ln + &hn;
        let md = &ld + &hd;
        let cand = LogRat::of(&Q::new(mn.clone(), md.clone()));
        if below(&cand) {
            ln = mn;
            ld = md;
        } else if above(&cand) {
            hn = mn;
            hd = md;
        } else {
            return Some(cand);
        }
    }
    None
}
