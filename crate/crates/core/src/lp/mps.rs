//! Fixed-layout MPS export for cross-checking with external solvers.

use super::{LinearProgram, Sense};
use crate::scalar::Scalar;

pub fn to_mps<S: Scalar>(lp: &LinearProgram<S>, name: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!("NAME          {}\n", name));
    if lp.sense == Sense::Maximize {
        s.push_str("OBJSENSE\n    MAX\n");
    }
    s.push_str("ROWS\n");
    s.push_str(" N  OBJ\n");
    for c in &lp.constraints {
        s.push_str(&format!(" E  {}\n", sanitize(&c.label)));
    }
    s.push_str("COLUMNS\n");
    for (j, v) in lp.variables.iter().enumerate() {
        let col = sanitize(&v.name);
        if v.objective != S::zero() {
            s.push_str(&format!(
                "    {:<10}{:<10}{:.12}\n",
                col,
                "OBJ",
                v.objective.to_f64()
            ));
        }
        for c in &lp.constraints {
            for &(i, a) in &c.coeffs {
                if i == j {
                    s.push_str(&format!(
                        "    {:<10}{:<10}{:.12}\n",
                        col,
                        sanitize(&c.label),
                        a.to_f64()
                    ));
                }
            }
        }
    }
    s.push_str("RHS\n");
    for c in &lp.constraints {
        if c.rhs != S::zero() {
            s.push_str(&format!(
                "    {:<10}{:<10}{:.12}\n",
                "RHS",
                sanitize(&c.label),
                c.rhs.to_f64()
            ));
        }
    }
    s.push_str("BOUNDS\n");
    for v in &lp.variables {
        let col = sanitize(&v.name);
        if v.lower != S::zero() {
            s.push_str(&format!(
                " LO {:<10}{:<10}{:.12}\n",
                "BND",
                col,
                v.lower.to_f64()
            ));
        }
        if v.upper.is_finite() {
            s.push_str(&format!(
                " UP {:<10}{:<10}{:.12}\n",
                "BND",
                col,
                v.upper.to_f64()
            ));
        }
    }
    s.push_str("ENDATA\n");
    s
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect()
}
