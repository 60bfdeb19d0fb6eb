//! Dense two-phase revised simplex on the bounded-variable form.
//!
//! Pivot selection is Bland's rule (lowest eligible index for both entering
//! and leaving variables), which guarantees termination and makes every run
//! deterministic. Dual values are read from the final basis: equality duals
//! from the basis inverse row prices, bound duals from reduced costs.

use super::{LinearProgram, LpSolution, LpStatus, Sense};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau<S> {
    m: usize,
    n_total: usize,
    /// Column-major coefficients, rows scaled so the shifted rhs is >= 0.
    cols: Vec<Vec<S>>,
    rhs: Vec<S>,
    /// -1 where the original row was negated.
    row_sign: Vec<S>,
    /// Spans of shifted variables (upper - lower); may be infinite.
    span: Vec<S>,
    state: Vec<VarState>,
    /// Current value of every variable in shifted coordinates.
    value: Vec<S>,
    basis: Vec<usize>,
    binv: Vec<Vec<S>>,
    pivot_tol: S,
}

enum StepOutcome {
    Optimal,
    Unbounded(usize),
}

impl<S: Scalar> Tableau<S> {
    /// w = B^-1 * column j.
    fn ftran(&self, j: usize) -> Vec<S> {
        let mut w = vec![S::zero(); self.m];
        for (r, wr) in w.iter_mut().enumerate() {
            let mut acc = S::zero();
            for k in 0..self.m {
                acc = acc + self.binv[r][k] * self.cols[j][k];
            }
            *wr = acc;
        }
        w
    }

    /// pi = c_B' * B^-1 for the given objective.
    fn prices(&self, c: &[S]) -> Vec<S> {
        let mut pi = vec![S::zero(); self.m];
        for (i, pii) in pi.iter_mut().enumerate() {
            let mut acc = S::zero();
            for (r, &b) in self.basis.iter().enumerate() {
                acc = acc + c[b] * self.binv[r][i];
            }
            *pii = acc;
        }
        pi
    }

    fn reduced_cost(&self, c: &[S], pi: &[S], j: usize) -> S {
        let mut acc = c[j];
        for r in 0..self.m {
            acc = acc - pi[r] * self.cols[j][r];
        }
        acc
    }

    /// Rebuild the basis inverse from scratch (numerical hygiene) and
    /// recompute basic values.
    fn refactorize(&mut self) {
        let m = self.m;
        if m == 0 {
            return;
        }
        let mut a = vec![vec![S::zero(); 2 * m]; m];
        for (r, row) in a.iter_mut().enumerate() {
            for (k, &b) in self.basis.iter().enumerate() {
                row[k] = self.cols[b][r];
            }
            row[m + r] = S::one();
        }
        for col in 0..m {
            let mut piv = col;
            for r in col + 1..m {
                if a[r][col].abs() > a[piv][col].abs() {
                    piv = r;
                }
            }
            a.swap(col, piv);
            let p = a[col][col];
            if p.abs() <= S::epsilon() {
                continue;
            }
            for k in 0..2 * m {
                a[col][k] = a[col][k] / p;
            }
            for r in 0..m {
                if r != col {
                    let f = a[r][col];
                    if f != S::zero() {
                        for k in 0..2 * m {
                            a[r][k] = a[r][k] - f * a[col][k];
                        }
                    }
                }
            }
        }
        for r in 0..m {
            for k in 0..m {
                self.binv[r][k] = a[r][m + k];
            }
        }
        self.recompute_basic_values();
    }

    fn recompute_basic_values(&mut self) {
        let m = self.m;
        let mut b = self.rhs.clone();
        for j in 0..self.n_total {
            if self.state[j] == VarState::AtUpper {
                for (r, bv) in b.iter_mut().enumerate() {
                    *bv = *bv - self.cols[j][r] * self.span[j];
                }
            }
        }
        for r in 0..m {
            let mut acc = S::zero();
            for k in 0..m {
                acc = acc + self.binv[r][k] * b[k];
            }
            self.value[self.basis[r]] = acc;
        }
        for j in 0..self.n_total {
            match self.state[j] {
                VarState::AtLower => self.value[j] = S::zero(),
                VarState::AtUpper => self.value[j] = self.span[j],
                VarState::Basic => {}
            }
        }
    }

    /// Run simplex iterations on objective `c` until optimal or unbounded.
    fn iterate(&mut self, c: &[S], iterations: &mut usize) -> StepOutcome {
        let cnorm = c
            .iter()
            .fold(S::one(), |acc, &v| if v.abs() > acc { v.abs() } else { acc });
        let dtol = self.pivot_tol * cnorm;
        loop {
            *iterations += 1;
            if *iterations % 64 == 0 {
                self.refactorize();
            }
            let pi = self.prices(c);

            // Entering: lowest eligible index (Bland).
            let mut entering = None;
            for j in 0..self.n_total {
                if self.state[j] == VarState::Basic || self.span[j] <= S::zero() {
                    continue;
                }
                let d = self.reduced_cost(c, &pi, j);
                let eligible = match self.state[j] {
                    VarState::AtLower => d > dtol,
                    VarState::AtUpper => d < -dtol,
                    VarState::Basic => false,
                };
                if eligible {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return StepOutcome::Optimal;
            };
            let dir = if self.state[j] == VarState::AtLower {
                S::one()
            } else {
                -S::one()
            };
            let w = self.ftran(j);

            // Ratio test: smallest step; among ties the smallest basic
            // variable index leaves. A step equal to the entering span with
            // no blocking row is a bound flip.
            let mut best_t = self.span[j];
            let mut leaving: Option<(usize, bool)> = None;
            for r in 0..self.m {
                let delta = dir * w[r];
                let bvar = self.basis[r];
                let (cand, to_upper) = if delta > self.pivot_tol {
                    (self.value[bvar] / delta, false)
                } else if delta < -self.pivot_tol && self.span[bvar].is_finite() {
                    ((self.span[bvar] - self.value[bvar]) / (-delta), true)
                } else {
                    continue;
                };
                let cand = if cand < S::zero() { S::zero() } else { cand };
                let tie = self.pivot_tol * (S::one() + if best_t.is_finite() { best_t } else { S::zero() });
                let take = match leaving {
                    None => cand <= best_t + tie,
                    Some((lr, _)) => {
                        cand < best_t - tie || (cand < best_t + tie && bvar < self.basis[lr])
                    }
                };
                if take {
                    if cand < best_t {
                        best_t = cand;
                    }
                    leaving = Some((r, to_upper));
                }
            }
            if best_t.is_infinite() {
                return StepOutcome::Unbounded(j);
            }
            let t = best_t;

            for r in 0..self.m {
                let bvar = self.basis[r];
                self.value[bvar] = self.value[bvar] - dir * w[r] * t;
            }
            match leaving {
                None => {
                    self.state[j] = if self.state[j] == VarState::AtLower {
                        self.value[j] = self.span[j];
                        VarState::AtUpper
                    } else {
                        self.value[j] = S::zero();
                        VarState::AtLower
                    };
                }
                Some((r, to_upper)) => {
                    let out = self.basis[r];
                    self.state[out] = if to_upper {
                        self.value[out] = self.span[out];
                        VarState::AtUpper
                    } else {
                        self.value[out] = S::zero();
                        VarState::AtLower
                    };
                    let entering_value = if dir > S::zero() {
                        t
                    } else {
                        self.span[j] - t
                    };
                    self.basis[r] = j;
                    self.state[j] = VarState::Basic;
                    self.value[j] = entering_value;
                    self.pivot_binv(r, &w);
                }
            }
        }
    }

    fn pivot_binv(&mut self, r: usize, w: &[S]) {
        let piv = w[r];
        for k in 0..self.m {
            self.binv[r][k] = self.binv[r][k] / piv;
        }
        for rr in 0..self.m {
            if rr != r && w[rr] != S::zero() {
                let f = w[rr];
                for k in 0..self.m {
                    self.binv[rr][k] = self.binv[rr][k] - f * self.binv[r][k];
                }
            }
        }
    }
}

pub fn solve<S: Scalar>(lp: &LinearProgram<S>) -> LpSolution<S> {
    let n = lp.variables.len();
    let m = lp.constraints.len();
    let maximize = lp.sense == Sense::Maximize;

    let mut out = LpSolution {
        status: LpStatus::Infeasible,
        objective: S::zero(),
        primal: vec![S::zero(); n],
        row_duals: vec![S::zero(); m],
        upper_duals: vec![S::zero(); n],
        lower_duals: vec![S::zero(); n],
        duality_gap: S::zero(),
        cs_residual: S::zero(),
        infeasible_rows: Vec::new(),
        unbounded_ray: Vec::new(),
        iterations: 0,
    };

    for v in &lp.variables {
        if v.lower > v.upper {
            out.infeasible_rows.push(format!("bounds:{}", v.name));
            return out;
        }
    }

    let obj_sign = if maximize { S::one() } else { -S::one() };
    let n_total = n + m;
    let mut c_real = vec![S::zero(); n_total];
    for (j, v) in lp.variables.iter().enumerate() {
        c_real[j] = obj_sign * v.objective;
    }

    // Shift x = y + lower, negate rows so rhs >= 0, append artificials.
    let mut rhs = vec![S::zero(); m];
    let mut row_sign = vec![S::one(); m];
    for (r, con) in lp.constraints.iter().enumerate() {
        let mut b = con.rhs;
        for &(j, a) in &con.coeffs {
            b = b - a * lp.variables[j].lower;
        }
        if b < S::zero() {
            row_sign[r] = -S::one();
            b = -b;
        }
        rhs[r] = b;
    }
    let mut cols = vec![vec![S::zero(); m]; n_total];
    for (r, con) in lp.constraints.iter().enumerate() {
        for &(j, a) in &con.coeffs {
            cols[j][r] = row_sign[r] * a;
        }
    }
    for r in 0..m {
        cols[n + r][r] = S::one();
    }

    let mut span = Vec::with_capacity(n_total);
    for v in &lp.variables {
        span.push(v.upper - v.lower);
    }
    span.extend(std::iter::repeat(S::infinity()).take(m));

    let scale = rhs
        .iter()
        .fold(S::one(), |acc, &v| if v > acc { v } else { acc });
    let base_tol = S::c(1e-9).max(S::epsilon() * S::c(1024.0));
    let feas_tol = base_tol * scale;

    let mut t = Tableau {
        m,
        n_total,
        cols,
        rhs: rhs.clone(),
        row_sign,
        span,
        state: vec![VarState::AtLower; n_total],
        value: vec![S::zero(); n_total],
        basis: (n..n_total).collect(),
        binv: (0..m)
            .map(|r| {
                let mut row = vec![S::zero(); m];
                row[r] = S::one();
                row
            })
            .collect(),
        pivot_tol: base_tol,
    };
    for r in 0..m {
        t.state[n + r] = VarState::Basic;
        t.value[n + r] = rhs[r];
    }

    let mut iterations = 0usize;

    if m > 0 {
        let mut c1 = vec![S::zero(); n_total];
        for cj in c1.iter_mut().skip(n) {
            *cj = -S::one();
        }
        if let StepOutcome::Unbounded(_) = t.iterate(&c1, &mut iterations) {
            // Cannot happen: the phase-1 objective is bounded above by zero.
            out.iterations = iterations;
            return out;
        }
        let infeasibility = (n..n_total)
            .map(|j| t.value[j])
            .fold(S::zero(), |a, b| a + b.max(S::zero()));
        if infeasibility > feas_tol {
            for r in 0..m {
                let b = t.basis[r];
                if b >= n && t.value[b] > feas_tol / S::c((m as f64).max(1.0)) {
                    out.infeasible_rows.push(lp.constraints[r].label.clone());
                }
            }
            if out.infeasible_rows.is_empty() {
                out.infeasible_rows.push("(aggregate residual)".to_string());
            }
            out.iterations = iterations;
            return out;
        }
        // Pivot lingering zero-valued artificials out of the basis where a
        // structural column can replace them; rows with no replacement are
        // redundant and keep a frozen artificial.
        for r in 0..m {
            if t.basis[r] < n {
                continue;
            }
            let mut replacement = None;
            for j in 0..n {
                if t.state[j] == VarState::Basic {
                    continue;
                }
                let w = t.ftran(j);
                if w[r].abs() > t.pivot_tol {
                    replacement = Some((j, w));
                    break;
                }
            }
            if let Some((j, w)) = replacement {
                let out_var = t.basis[r];
                let from_upper = t.state[j] == VarState::AtUpper;
                t.basis[r] = j;
                t.state[j] = VarState::Basic;
                t.state[out_var] = VarState::AtLower;
                t.value[out_var] = S::zero();
                t.value[j] = if from_upper { t.span[j] } else { S::zero() };
                t.pivot_binv(r, &w);
                t.refactorize();
            }
        }
        for j in n..n_total {
            t.span[j] = S::zero();
        }
        t.recompute_basic_values();
    }

    match t.iterate(&c_real, &mut iterations) {
        StepOutcome::Optimal => {}
        StepOutcome::Unbounded(entering) => {
            let mut ray = vec![lp.variables[entering].name.clone()];
            let w = t.ftran(entering);
            for r in 0..m {
                if w[r].abs() > t.pivot_tol && t.basis[r] < n {
                    ray.push(lp.variables[t.basis[r]].name.clone());
                }
            }
            out.status = LpStatus::Unbounded;
            out.unbounded_ray = ray;
            out.iterations = iterations;
            return out;
        }
    }

    let mut primal = vec![S::zero(); n];
    for j in 0..n {
        primal[j] = t.value[j] + lp.variables[j].lower;
    }
    let mut objective = S::zero();
    for (j, v) in lp.variables.iter().enumerate() {
        objective = objective + v.objective * primal[j];
    }

    let pi_internal = t.prices(&c_real);
    let mut row_duals = vec![S::zero(); m];
    for r in 0..m {
        row_duals[r] = obj_sign * t.row_sign[r] * pi_internal[r];
    }
    let mut upper_duals = vec![S::zero(); n];
    let mut lower_duals = vec![S::zero(); n];
    for j in 0..n {
        if t.state[j] == VarState::Basic {
            continue;
        }
        let d = t.reduced_cost(&c_real, &pi_internal, j);
        match t.state[j] {
            VarState::AtLower if t.span[j] <= S::zero() => {
                if d > S::zero() {
                    upper_duals[j] = d;
                } else {
                    lower_duals[j] = -d;
                }
            }
            VarState::AtLower => {
                if d < S::zero() {
                    lower_duals[j] = -d;
                }
            }
            VarState::AtUpper => {
                if d > S::zero() {
                    upper_duals[j] = d;
                }
            }
            VarState::Basic => {}
        }
    }

    // Strong-duality certificate, evaluated in the internal (maximize) space.
    let mut dual_internal = S::zero();
    for r in 0..m {
        dual_internal = dual_internal + t.row_sign[r] * pi_internal[r] * lp.constraints[r].rhs;
    }
    for j in 0..n {
        if lp.variables[j].upper.is_finite() && upper_duals[j] > S::zero() {
            dual_internal = dual_internal + upper_duals[j] * lp.variables[j].upper;
        }
        if lower_duals[j] > S::zero() {
            dual_internal = dual_internal - lower_duals[j] * lp.variables[j].lower;
        }
    }
    let gap = (obj_sign * objective - dual_internal).abs();

    let mut cs = S::zero();
    for j in 0..n {
        let v = &lp.variables[j];
        if v.upper.is_finite() {
            let r = (upper_duals[j] * (v.upper - primal[j])).abs();
            if r > cs {
                cs = r;
            }
        }
        let r = (lower_duals[j] * (primal[j] - v.lower)).abs();
        if r > cs {
            cs = r;
        }
    }

    out.status = LpStatus::Optimal;
    out.objective = objective;
    out.primal = primal;
    out.row_duals = row_duals;
    out.upper_duals = upper_duals;
    out.lower_duals = lower_duals;
    out.duality_gap = gap;
    out.cs_residual = cs;
    out.iterations = iterations;
    out
}
