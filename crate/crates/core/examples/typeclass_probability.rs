use edgetype::probability::{
    decompose_single_edge, family_d_graph, graph_prob, mixture_lower_bound, sanov_bounds,
    typeclass_point_prob, typeclass_prob_bounds, verify_mixture, FamilyDParams,
    MixtureDecomposition,
};
use edgetype::maxent::{ProductRandomGraph, SolverOptions};
use edgetype::enumerate::enumerate_class;
use edgetype::types::EdgeType;
use edgetype::DiGraph;

fn main() -> edgetype::Result<()> {
    let n = 3;
    let opts = SolverOptions::for_n(n);
    let params = FamilyDParams::new(vec![0.5, -0.2, 1.0], vec![0.0, 0.3, -0.7], DiGraph::complete(n))?;
    let f = family_d_graph(&params)?;
    let t = EdgeType::unrestricted(vec![2, 1, 1], vec![1, 2, 1])?;

    let pp = typeclass_point_prob(&params, &t, opts)?;
    println!("every member has probability {:.6e} (H = {:.4}, KL = {:.4})", pp.prob, pp.entropy, pp.kl);
    for g in enumerate_class(&t, opts.limit)?.iter().take(3) {
        println!("  direct product: {:.6e}", graph_prob(&f, g));
    }

    let b = typeclass_prob_bounds(&params, &t, opts)?;
    println!("class probability {:.6e} in [{:.3e}, {:.3e}]", b.exact.unwrap(), b.lower.unwrap(), b.upper);

    let others = [t.clone(), EdgeType::unrestricted(vec![1, 1, 1], vec![1, 1, 1])?];
    let s = sanov_bounds(&params, &others, opts)?;
    println!("union of {} classes: {:.4e} in [{:.3e}, {:.3e}]", s.types_used, s.exact.unwrap(), s.lower.unwrap(), s.upper);

    let p = ProductRandomGraph::from_probs(2, vec![0.05, 0.1, 0.2, 0.15])?;
    let single = decompose_single_edge(&p)?;
    println!("{} single-cell atoms reproduce p: {}", single.atoms.len(), verify_mixture(&p, &single, 1e-12));

    let atoms = vec![
        FamilyDParams::new(vec![0.0, 1.0], vec![0.5, -0.5], DiGraph::complete(2))?,
        FamilyDParams::new(vec![-1.0, 2.0], vec![0.0, 0.0], DiGraph::complete(2))?,
    ];
    let mix = MixtureDecomposition { lambda: vec![0.3, 0.7], atoms };
    let mixed = mix.mixed_graph()?;
    let t2 = EdgeType::unrestricted(vec![1, 1], vec![1, 1])?;
    for g in enumerate_class(&t2, 6)? {
        println!(
            "mixture bound {:.4e} <= {:.4e}",
            mixture_lower_bound(&mix, &t2, SolverOptions::for_n(2))?,
            graph_prob(&mixed, &g)
        );
    }
    Ok(())
}
