use super::build::dual_program;
use super::*;

/// Independent oracle: enumerate every basic solution (choose m basic
/// columns, pin the rest at a finite bound), keep the feasible ones, and
/// return the best objective. Exponential, test-only.
pub fn enumerate_optimum(lp: &LinearProgram<f64>) -> Option<f64> {
    let n = lp.variables.len();
    let m = lp.constraints.len();
    let mut a = vec![vec![0.0f64; n]; m];
    let mut b = vec![0.0f64; m];
    for (r, c) in lp.constraints.iter().enumerate() {
        b[r] = c.rhs;
        for &(j, v) in &c.coeffs {
            a[r][j] = v;
        }
    }
    let sign = if lp.sense == Sense::Maximize { 1.0 } else { -1.0 };
    let mut best: Option<f64> = None;
    let masks = 1usize << n;
    for mask in 0..masks {
        if (mask as u32).count_ones() as usize != m {
            continue;
        }
        let basic: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let nonbasic: Vec<usize> = (0..n).filter(|j| mask & (1 << j) == 0).collect();
        // Upper-bound assignments only make sense for finite uppers.
        let choices = 1usize << nonbasic.len();
        'assign: for pick in 0..choices {
            let mut x = vec![0.0f64; n];
            for (k, &j) in nonbasic.iter().enumerate() {
                if pick & (1 << k) != 0 {
                    if !lp.variables[j].upper.is_finite() {
                        continue 'assign;
                    }
                    x[j] = lp.variables[j].upper;
                } else {
                    x[j] = lp.variables[j].lower;
                }
            }
            // Solve for basic values.
            let mut mat = vec![vec![0.0f64; m + 1]; m];
            for r in 0..m {
                for (k, &j) in basic.iter().enumerate() {
                    mat[r][k] = a[r][j];
                }
                let mut rhs = b[r];
                for &j in &nonbasic {
                    rhs -= a[r][j] * x[j];
                }
                mat[r][m] = rhs;
            }
            if !gauss(&mut mat) {
                continue;
            }
            for (k, &j) in basic.iter().enumerate() {
                x[j] = mat[k][m];
            }
            for (j, v) in lp.variables.iter().enumerate() {
                if x[j] < v.lower - 1e-9 || x[j] > v.upper + 1e-9 {
                    continue 'assign;
                }
            }
            let obj: f64 = lp
                .variables
                .iter()
                .enumerate()
                .map(|(j, v)| v.objective * x[j])
                .sum();
            best = Some(match best {
                None => obj,
                Some(cur) => {
                    if sign * obj > sign * cur {
                        obj
                    } else {
                        cur
                    }
                }
            });
        }
    }
    best
}

fn gauss(mat: &mut [Vec<f64>]) -> bool {
    let m = mat.len();
    for col in 0..m {
        let mut piv = col;
        for r in col + 1..m {
            if mat[r][col].abs() > mat[piv][col].abs() {
                piv = r;
            }
        }
        mat.swap(col, piv);
        if mat[col][col].abs() < 1e-10 {
            return false;
        }
        let p = mat[col][col];
        for k in col..=m {
            mat[col][k] /= p;
        }
        for r in 0..m {
            if r != col && mat[r][col] != 0.0 {
                let f = mat[r][col];
                for k in col..=m {
                    mat[r][k] -= f * mat[col][k];
                }
            }
        }
    }
    true
}

fn two_bid_market() -> LinearProgram<f64> {
    // max 2d - s  s.t.  d - s = 0,  0 <= s,d <= 10
    let mut lp = LinearProgram::new(Sense::Maximize);
    let s = lp.add_variable("s", 0.0, 10.0, -1.0);
    let d = lp.add_variable("d", 0.0, 10.0, 2.0);
    lp.add_constraint("bal", vec![(d, 1.0), (s, -1.0)], 0.0);
    lp
}

#[test]
fn two_bid_market_matches_vertex_enumeration() {
    let lp = two_bid_market();
    let oracle = enumerate_optimum(&lp).unwrap();
    assert!((oracle - 10.0).abs() < 1e-12);
    let sol = lp.solve();
    assert!(sol.is_optimal());
    assert!((sol.objective - oracle).abs() <= 1e-8);
    let pi = sol.dual_for(&lp, "bal").unwrap();
    assert!(
        (1.0 - 1e-9..=2.0 + 1e-9).contains(&pi),
        "clearing price {pi} outside [1,2]"
    );
    assert!(sol.duality_gap <= 1e-6 * (1.0 + sol.objective.abs()));
    assert!(sol.cs_residual <= 1e-6);
}

#[test]
fn infeasible_bounds_report_infeasible() {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let d = lp.add_variable("d", 5.0, 3.0, 1.0);
    lp.add_constraint("row", vec![(d, 1.0)], 1.0);
    let sol = lp.solve();
    assert_eq!(sol.status, LpStatus::Infeasible);
}

#[test]
fn infeasible_forcing_names_the_binding_row() {
    // Demand forced to 2 but supply capped at 1.
    let mut lp = LinearProgram::new(Sense::Maximize);
    let s = lp.add_variable("s", 0.0, 1.0, -1.0);
    let d = lp.add_variable("d", 2.0, 3.0, 2.0);
    lp.add_constraint("bal:n:p", vec![(d, 1.0), (s, -1.0)], 0.0);
    let sol = lp.solve();
    assert_eq!(sol.status, LpStatus::Infeasible);
    assert!(sol.infeasible_rows.iter().any(|l| l == "bal:n:p"));
}

#[test]
fn degenerate_multiple_optima_agree_on_objective() {
    // Two identical consumers split 10 units arbitrarily; the objective is
    // unique even though the split is not.
    let mut lp = LinearProgram::new(Sense::Maximize);
    let s = lp.add_variable("s", 0.0, 10.0, -1.0);
    let d1 = lp.add_variable("d1", 0.0, 10.0, 2.0);
    let d2 = lp.add_variable("d2", 0.0, 10.0, 2.0);
    lp.add_constraint("bal", vec![(d1, 1.0), (d2, 1.0), (s, -1.0)], 0.0);
    let oracle = enumerate_optimum(&lp).unwrap();
    let sol = lp.solve();
    assert!(sol.is_optimal());
    assert!((sol.objective - oracle).abs() <= 1e-8);
    assert!((sol.objective - 10.0).abs() <= 1e-8);
    // Determinism: repeated solves give identical allocations.
    let again = lp.solve();
    assert_eq!(sol.primal, again.primal);
}

#[test]
fn unbounded_reports_ray() {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let x = lp.add_variable("x", 0.0, f64::INFINITY, 1.0);
    let y = lp.add_variable("y", 0.0, f64::INFINITY, 0.0);
    lp.add_constraint("tie", vec![(x, 1.0), (y, -1.0)], 0.0);
    let sol = lp.solve();
    assert_eq!(sol.status, LpStatus::Unbounded);
    assert!(!sol.unbounded_ray.is_empty());
}

#[test]
fn minimize_sense_and_dual_signs() {
    let mut lp: LinearProgram<f64> = LinearProgram::new(Sense::Minimize);
    let x = lp.add_variable("x", 0.0, 10.0, 1.0);
    let y = lp.add_variable("y", 0.0, 10.0, 1.0);
    lp.add_constraint("req", vec![(x, 1.0), (y, 1.0)], 3.0);
    let sol = lp.solve();
    assert!(sol.is_optimal());
    assert!((sol.objective - 3.0).abs() < 1e-9);
    // Marginal cost of one more required unit is 1.
    assert!((sol.dual_for(&lp, "req").unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn redundant_rows_are_tolerated() {
    let mut lp: LinearProgram<f64> = LinearProgram::new(Sense::Maximize);
    let s = lp.add_variable("s", 0.0, 4.0, -1.0);
    let d = lp.add_variable("d", 0.0, 4.0, 3.0);
    lp.add_constraint("bal", vec![(d, 1.0), (s, -1.0)], 0.0);
    lp.add_constraint("bal_dup", vec![(d, 2.0), (s, -2.0)], 0.0);
    let sol = lp.solve();
    assert!(sol.is_optimal());
    assert!((sol.objective - 8.0).abs() < 1e-9);
}

#[test]
fn explicit_dual_reproduces_primal_optimum() {
    let lp = two_bid_market();
    let primal = lp.solve();
    let (dual, _) = dual_program(&lp);
    let dsol = dual.solve();
    assert!(dsol.is_optimal());
    assert!((dsol.objective - primal.objective).abs() <= 1e-6 * (1.0 + primal.objective.abs()));
}

#[test]
fn solves_under_f32_scalar() {
    let mut lp: LinearProgram<f32> = LinearProgram::new(Sense::Maximize);
    let s = lp.add_variable("s", 0.0, 10.0, -1.0);
    let d = lp.add_variable("d", 0.0, 10.0, 2.0);
    lp.add_constraint("bal", vec![(d, 1.0), (s, -1.0)], 0.0);
    let sol = lp.solve();
    assert!(sol.is_optimal());
    assert!((sol.objective - 10.0).abs() < 1e-3);
}

#[test]
fn forced_lower_bound_dual_is_reported() {
    // Consumer forced to buy above the supplier's price.
    let mut lp: LinearProgram<f64> = LinearProgram::new(Sense::Maximize);
    let s = lp.add_variable("s", 0.0, 10.0, -3.0);
    let d = lp.add_variable("d", 5.0, 10.0, 1.0);
    lp.add_constraint("bal", vec![(d, 1.0), (s, -1.0)], 0.0);
    let sol = lp.solve();
    assert!(sol.is_optimal());
    assert!((sol.primal[d] - 5.0).abs() < 1e-9);
    // Relaxing the forced floor would gain 2 per unit.
    assert!((sol.lower_duals[d] - 2.0).abs() < 1e-9);
    assert!(sol.duality_gap <= 1e-6 * (1.0 + sol.objective.abs()));
}

#[test]
fn mps_export_has_fixed_sections() {
    let lp = two_bid_market();
    let mps = lp.to_mps("TWOBID");
    for section in ["NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"] {
        assert!(mps.contains(section), "missing section {section}");
    }
    assert!(mps.contains("bal"));
}

#[test]
fn validate_catches_structural_errors() {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let x = lp.add_variable("x", 0.0, 1.0, 0.0);
    lp.add_constraint("r", vec![(x, 1.0)], 0.0);
    lp.add_constraint("r", vec![(x, 1.0)], 0.0);
    assert!(matches!(lp.validate(), Err(LpError::DuplicateLabel(_))));

    let mut lp2: LinearProgram<f64> = LinearProgram::new(Sense::Maximize);
    lp2.add_variable("dead", 0.0, 1.0, 0.0);
    assert!(matches!(lp2.validate(), Err(LpError::UnusedVariable(_))));
}
