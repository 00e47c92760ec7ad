//! Graphs whose degrees stay close to a target type.

use edgetype::enumerate::{delta_admissible_types, enumerate_delta_class, DEFAULT_LIMIT};
use edgetype::maxent::{solve_maxent, SolverOptions};
use edgetype::probability::{delta_class_prob_exact, delta_class_prob_lower};
use edgetype::rd::delta_class_cardinality_bounds;
use edgetype::types::EdgeType;

fn main() -> edgetype::Result<()> {
    let t = EdgeType::unrestricted(vec![2, 2, 1], vec![2, 1, 2])?;
    let opts = SolverOptions::for_n(3);
    let sol = solve_maxent(&t, opts)?;
    for delta in [0.25, 0.5, 1.0, 1.5] {
        let dens = t.density();
        let size = enumerate_delta_class(&t, delta, dens, DEFAULT_LIMIT)?.len();
        let types = delta_admissible_types(&t, delta, dens).len();
        let b = delta_class_cardinality_bounds(&t, delta, dens, opts)?;
        let p = delta_class_prob_exact(&sol.graph, &t, delta, dens, DEFAULT_LIMIT)?;
        println!(
            "delta={delta}: {size} graphs over {types} degree pairs, normalized log-size {:.4} <= {:.4}, prob {:.4} >= {:.4}",
            b.exact_normalized.unwrap(),
            b.upper,
            p,
            delta_class_prob_lower(3, delta, dens)
        );
    }
    Ok(())
}
