//! Maximum-entropy random graph of a type and the entropy bound on its class size.

use edgetype::maxent::{barvinok_bounds, solve_maxent, SolverOptions};
use edgetype::types::EdgeType;

fn main() -> edgetype::Result<()> {
    for (r, c) in [
        (vec![1, 1], vec![1, 1]),
        (vec![2, 1, 0], vec![1, 1, 1]),
        (vec![3, 2, 2, 1], vec![2, 2, 2, 2]),
    ] {
        let t = EdgeType::unrestricted(r, c)?;
        let opts = SolverOptions::for_n(t.n());
        let sol = solve_maxent(&t, opts)?;
        println!("r={:?} c={:?}", t.r, t.c);
        for row in sol.graph.to_matrix() {
            let cells: Vec<String> = row.iter().map(|p| format!("{p:.4}")).collect();
            println!("  {}", cells.join(" "));
        }
        let b = barvinok_bounds(&t, opts)?;
        println!(
            "  H = {:.6} nats, alpha = {:.3}, count = {:?}, gap = {:?}, Newton steps = {}",
            sol.report.entropy_nats, b.alpha, b.count, b.gap, sol.report.iterations
        );
    }
    Ok(())
}
