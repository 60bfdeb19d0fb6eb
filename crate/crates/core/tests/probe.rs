use clearchain::casestudy::{self, load_msw};

#[test]
fn probe_cases() {
    let model = load_msw();
    for n in 1..=9u8 {
        let run = casestudy::run_case(&model, n).expect("case runs");
        let sol = &run.solution;
        let m = &run.model;
        let n1 = m.node_index("N1").unwrap();
        let price = |pid: &str| {
            m.product_index(pid)
                .and_then(|p| sol.prices.nodal_price(n1, p))
                .unwrap_or(f64::NAN)
        };
        let alloc = |cid: &str| {
            m.consumers
                .iter()
                .position(|c| c.id == cid)
                .map(|j| sol.allocations.demand[j])
                .unwrap_or(f64::NAN)
        };
        println!(
            "case{} W={:.1} div={:.2}% | P0={:.4} P1={:.4} P2={:.4} P3={:.4} P4={:.4} P5={:.4} PE={:.6}",
            n, sol.welfare, run.diversion_percent,
            price("P0"), price("P1"), price("P2"), price("P3"), price("P4"), price("P5"), price("PE")
        );
        println!(
            "   alloc: D0={:.2} D06={:.2} D1={:.2} D2={:.2} D3={:.2} D4={:.2} D5={:.2} DE={:.1}",
            alloc("D0"), alloc("D06"), alloc("D1"), alloc("D2"), alloc("D3"), alloc("D4"), alloc("D5"), alloc("DE")
        );
        let profs: Vec<String> = m
            .suppliers
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{}={:.2}", s.id, sol.profits.supplier[i]))
            .chain(
                m.technologies
                    .iter()
                    .enumerate()
                    .map(|(k, t)| format!("{}={:.2}", t.id, sol.profits.technology[k])),
            )
            .chain(
                m.consumers
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.id.starts_with('D') && !c.id.starts_with("D0"))
                    .map(|(j, c)| format!("{}={:.2}", c.id, sol.profits.consumer[j])),
            )
            .collect();
        println!("   profits: {}", profs.join(" "));
        println!("   theorems: {}", sol.theorems.checks.iter().map(|c| format!("{}:{}", c.name, if c.passed {"PASS"} else {"fail"})).collect::<Vec<_>>().join(" | "));
        println!("   iters={} gap={:.3e}", sol.lp_solution.iterations, sol.lp_solution.duality_gap);
    }
}
