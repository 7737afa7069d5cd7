//! Exact rational simplex for small dense LPs, with certificates for every
//! outcome, and the Delsarte program for `ϑ′`.
//!
//! Problems have the form `max c·a + c₀` subject to `g_i·a ≥ h_i` and `a ≥ 0`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{cap, domain, Error, Result};
use crate::krawtchouk::kraw_table;
use crate::numerics::{binom, int_to_rat, rat, Rational};

pub const MAX_VARS: usize = 200;
pub const MAX_ROWS: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub constant: Rational,
    pub rows: Vec<(Vec<Rational>, Rational)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

/// Outcome of [`solve`]. Exactly one certificate is present:
/// `dual` when optimal, `ray` when unbounded, `farkas` when infeasible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// A feasible point (optimal, or the base of the ray); empty if infeasible.
    #[serde(serialize_with = "crate::numerics::serde_big::ser_rat_vec")]
    pub assignment: Vec<Rational>,
    /// Objective at `assignment`, including the constant.
    #[serde(serialize_with = "crate::numerics::serde_big::ser_rat")]
    pub value: Rational,
    /// `y ≥ 0` with `Σ_i y_i g_ij ≤ −c_j` and `c·a = −y·h`.
    #[serde(serialize_with = "crate::numerics::serde_big::ser_opt_rat_vec")]
    pub dual: Option<Vec<Rational>>,
    /// `r ≥ 0` with `g_i·r ≥ 0` and `c·r > 0`.
    #[serde(serialize_with = "crate::numerics::serde_big::ser_opt_rat_vec")]
    pub ray: Option<Vec<Rational>>,
    /// `y ≥ 0` with `Σ_i y_i g_ij ≤ 0` and `y·h > 0`.
    #[serde(serialize_with = "crate::numerics::serde_big::ser_opt_rat_vec")]
    pub farkas: Option<Vec<Rational>>,
    pub pivots: usize,
}

impl LpProblem {
    pub fn new(objective: Vec<Rational>, constant: Rational, rows: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        let k = objective.len();
        if let Some((i, _)) = rows.iter().enumerate().find(|(_, r)| r.0.len() != k) {
            return Err(Error::Dimension(format!("row {i} has {} coefficients, expected {k}", rows[i].0.len())));
        }
        Ok(Self { objective, constant, rows })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective_at(&self, a: &[Rational]) -> Rational {
        dot(&self.objective, a) + &self.constant
    }

    /// Index of the first violated constraint, if any.
    pub fn first_violation(&self, a: &[Rational]) -> Option<usize> {
        if a.iter().any(|v| v.is_negative()) {
            return Some(usize::MAX);
        }
        self.rows.iter().position(|(g, h)| &dot(g, a) < h)
    }

    /// `max c1 … ck + c0` then one `g1 … gk >= h` line per row.
    pub fn to_text(&self) -> String {
        let join = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = format!("max {} + {}\n", join(&self.objective), self.constant);
        for (g, h) in &self.rows {
            writeln!(s, "{} >= {}", join(g), h).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse = |t: &str| Rational::from_str(t).map_err(|e| Error::Domain(format!("bad rational {t:?}: {e}")));
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| Error::Domain("empty LP file".into()))?;
        let body = head.strip_prefix("max").ok_or_else(|| Error::Domain("first line must start with `max`".into()))?;
        let (c, c0) = body.rsplit_once('+').ok_or_else(|| Error::Domain("objective needs `+ constant`".into()))?;
        let objective = c.split_whitespace().map(parse).collect::<Result<Vec<_>>>()?;
        let constant = parse(c0.trim())?;
        let mut rows = Vec::new();
        for line in lines {
            let (g, h) = line.split_once(">=").ok_or_else(|| Error::Domain(format!("row without `>=`: {line:?}")))?;
            rows.push((g.split_whitespace().map(parse).collect::<Result<Vec<_>>>()?, parse(h.trim())?));
        }
        Self::new(objective, constant, rows)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    pivots: usize,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut z = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                z -= &cost[b] * &self.rows[i][j];
            }
        }
        z
    }

    /// Maximises `cost·w` over columns with `allowed[j]`, Bland's rule.
    fn run(&mut self, cost: &[Rational], allowed: &[bool]) -> Phase {
        loop {
            let entering = (0..cost.len())
                .filter(|&j| allowed[j] && !self.basis.contains(&j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(c) = entering else { return Phase::Optimal };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][c];
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return Phase::Unbounded(c),
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn column_values(&self, ncols: usize) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            w[b] = self.rhs[i].clone();
        }
        w
    }
}

/// Solves `u^T B = c_B` for the basis columns of the original matrix `a`.
fn basis_duals(a: &[Vec<Rational>], row_ids: &[usize], basis: &[usize], cost: &[Rational]) -> Vec<Rational> {
    let m = row_ids.len();
    // Augmented system B^T u = c_B, i.e. M[j][i] = a[row_i][basis_j].
    let mut mat: Vec<Vec<Rational>> = (0..m)
        .map(|j| {
            let mut row: Vec<Rational> = row_ids.iter().map(|&r| a[r][basis[j]].clone()).collect();
            row.push(cost[basis[j]].clone());
            row
        })
        .collect();
    for col in 0..m {
        let p = (col..m).find(|&r| !mat[r][col].is_zero()).expect("basis matrix is singular");
        mat.swap(col, p);
        let pv = mat[col][col].clone();
        for v in mat[col].iter_mut() {
            *v /= &pv;
        }
        let prow = mat[col].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
    }
    mat.into_iter().map(|row| row[m].clone()).collect()
}

pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    let k = p.num_vars();
    let m = p.rows.len();
    cap("LP variables", k, MAX_VARS)?;
    cap("LP constraints", m, MAX_ROWS)?;

    // Columns: a (k), slacks s (m), artificials (one per row with h > 0).
    let sigma: Vec<bool> = p.rows.iter().map(|(_, h)| h.is_positive()).collect();
    let art_rows: Vec<usize> = (0..m).filter(|&i| sigma[i]).collect();
    let ncols = k + m + art_rows.len();
    let mut a = vec![vec![Rational::zero(); ncols]; m];
    let mut b = vec![Rational::zero(); m];
    let mut basis = vec![0; m];
    for (i, (g, h)) in p.rows.iter().enumerate() {
        // Row scaled by +1 when h > 0 (artificial basic), −1 otherwise (slack basic).
        let s = if sigma[i] { Rational::one() } else { -Rational::one() };
        for j in 0..k {
            a[i][j] = &s * &g[j];
        }
        a[i][k + i] = -&s;
        b[i] = &s * h;
        if !sigma[i] {
            basis[i] = k + i;
        }
    }
    for (t, &i) in art_rows.iter().enumerate() {
        a[i][k + m + t] = Rational::one();
        basis[i] = k + m + t;
    }
    let original = a.clone();
    let is_art = |j: usize| j >= k + m;
    let mut tab = Tableau { rows: a, rhs: b, basis, pivots: 0 };
    let mut row_ids: Vec<usize> = (0..m).collect();

    if !art_rows.is_empty() {
        let mut cost1 = vec![Rational::zero(); ncols];
        for c in cost1.iter_mut().skip(k + m) {
            *c = -Rational::one();
        }
        let all = vec![true; ncols];
        match tab.run(&cost1, &all) {
            Phase::Optimal => {}
            Phase::Unbounded(_) => unreachable!("phase one objective is bounded by zero"),
        }
        let w = tab.column_values(ncols);
        let infeas: Rational = w[k + m..].iter().sum();
        if infeas.is_positive() {
            let u = basis_duals(&original, &row_ids, &tab.basis, &cost1);
            let farkas: Vec<Rational> = (0..m).map(|i| if sigma[i] { -&u[i] } else { u[i].clone() }).collect();
            let sol = LpSolution {
                status: LpStatus::Infeasible,
                assignment: Vec::new(),
                value: Rational::zero(),
                dual: None,
                ray: None,
                farkas: Some(farkas),
                pivots: tab.pivots,
            };
            verify(p, &sol)?;
            return Ok(sol);
        }
        // Drive zero-level artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if is_art(tab.basis[i]) {
                match (0..k + m).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                        row_ids.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![Rational::zero(); ncols];
    cost[..k].clone_from_slice(&p.objective);
    let allowed: Vec<bool> = (0..ncols).map(|j| !is_art(j)).collect();
    let phase = tab.run(&cost, &allowed);
    let w = tab.column_values(ncols);
    let assignment = w[..k].to_vec();
    let value = p.objective_at(&assignment);
    let sol = match phase {
        Phase::Optimal => {
            let u = basis_duals(&original, &row_ids, &tab.basis, &cost);
            let mut dual = vec![Rational::zero(); m];
            for (t, &r) in row_ids.iter().enumerate() {
                dual[r] = if sigma[r] { -&u[t] } else { u[t].clone() };
            }
            LpSolution { status: LpStatus::Optimal, assignment, value, dual: Some(dual), ray: None, farkas: None, pivots: tab.pivots }
        }
        Phase::Unbounded(c) => {
            let mut ray = vec![Rational::zero(); ncols];
            ray[c] = Rational::one();
            for (i, &bv) in tab.basis.iter().enumerate() {
                ray[bv] = -&tab.rows[i][c];
            }
            ray.truncate(k);
            LpSolution { status: LpStatus::Unbounded, assignment, value, dual: None, ray: Some(ray), farkas: None, pivots: tab.pivots }
        }
    };
    verify(p, &sol)?;
    Ok(sol)
}

/// Re-checks a solution and its certificate in exact arithmetic, independently
/// of the tableau that produced it.
pub fn verify(p: &LpProblem, sol: &LpSolution) -> Result<()> {
    let fail = |msg: String| Err(Error::Assertion(msg));
    let k = p.num_vars();
    let col_sum = |y: &[Rational], j: usize| -> Rational { p.rows.iter().zip(y).map(|((g, _), yi)| &g[j] * yi).sum() };
    match sol.status {
        LpStatus::Infeasible => {
            let y = sol.farkas.as_ref().ok_or_else(|| Error::Assertion("infeasible without witness".into()))?;
            if y.iter().any(|v| v.is_negative()) {
                return fail("Farkas witness has a negative entry".into());
            }
            if let Some(j) = (0..k).find(|&j| col_sum(y, j).is_positive()) {
                return fail(format!("Farkas witness has y^T G > 0 in column {j}"));
            }
            let yh: Rational = p.rows.iter().zip(y).map(|((_, h), yi)| h * yi).sum();
            if !yh.is_positive() {
                return fail(format!("Farkas witness has y·h = {yh} ≤ 0"));
            }
        }
        LpStatus::Optimal | LpStatus::Unbounded => {
            if let Some(i) = p.first_violation(&sol.assignment) {
                return fail(format!("assignment violates constraint {i}"));
            }
            if sol.value != p.objective_at(&sol.assignment) {
                return fail("reported value differs from objective".into());
            }
        }
    }
    if sol.status == LpStatus::Unbounded {
        let r = sol.ray.as_ref().ok_or_else(|| Error::Assertion("unbounded without ray".into()))?;
        if r.iter().any(|v| v.is_negative()) {
            return fail("ray has a negative entry".into());
        }
        if let Some(i) = p.rows.iter().position(|(g, _)| dot(g, r).is_negative()) {
            return fail(format!("ray leaves constraint {i}"));
        }
        if !dot(&p.objective, r).is_positive() {
            return fail("ray does not improve the objective".into());
        }
    }
    if sol.status == LpStatus::Optimal {
        let y = sol.dual.as_ref().ok_or_else(|| Error::Assertion("optimal without dual".into()))?;
        if y.iter().any(|v| v.is_negative()) {
            return fail("dual has a negative entry".into());
        }
        for j in 0..k {
            let reduced = col_sum(y, j) + &p.objective[j];
            if reduced.is_positive() {
                return fail(format!("dual infeasible in column {j}"));
            }
            if !sol.assignment[j].is_zero() && !reduced.is_zero() {
                return fail(format!("complementary slackness fails on variable {j}"));
            }
        }
        for (i, ((g, h), yi)) in p.rows.iter().zip(y).enumerate() {
            if !yi.is_zero() && dot(g, &sol.assignment) != *h {
                return fail(format!("complementary slackness fails on row {i}"));
            }
        }
        let yh: Rational = p.rows.iter().zip(y).map(|((_, h), yi)| h * yi).sum();
        if dot(&p.objective, &sol.assignment) != -yh {
            return fail("primal and dual objectives differ".into());
        }
    }
    Ok(())
}

/// `max 1 + Σ_{k=n/2}^{n} a_k` subject to `C(n,d) + Σ_k a_k K_d^n(k) ≥ 0`
/// for each `d` in `degrees`, `a ≥ 0`.
pub fn delsarte_relaxation(n: u64, degrees: &[u64]) -> Result<LpProblem> {
    if n == 0 || !n.is_multiple_of(2) || n > 64 {
        return domain(format!("Delsarte LP needs even 0 < n ≤ 64, got {n}"));
    }
    if let Some(&d) = degrees.iter().find(|&&d| d > n) {
        return domain(format!("degree {d} exceeds n = {n}"));
    }
    let table = kraw_table(n);
    let ks: Vec<usize> = (n as usize / 2..=n as usize).collect();
    let rows = degrees
        .iter()
        .map(|&d| {
            let g = ks.iter().map(|&k| int_to_rat(table[d as usize][k].clone())).collect();
            (g, -int_to_rat(binom(n, d as i64)))
        })
        .collect();
    LpProblem::new(vec![Rational::one(); ks.len()], Rational::one(), rows)
}

pub fn delsarte_lp(n: u64) -> Result<LpProblem> {
    delsarte_relaxation(n, &(0..=n).collect::<Vec<_>>())
}

/// Exact `ϑ′` of the complement of `G_K(n)` via the Delsarte program,
/// asserting the optimum is at most `2n`.
pub fn delsarte_theta_prime(n: u64) -> Result<LpSolution> {
    let sol = solve(&delsarte_lp(n)?)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Assertion(format!("Delsarte LP for n={n} is {:?}", sol.status)));
    }
    if sol.value > rat(2 * n as i64) {
        return Err(Error::Assertion(format!("Delsarte optimum {} exceeds 2n = {}", sol.value, 2 * n)));
    }
    Ok(sol)
}
