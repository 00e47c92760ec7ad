use edgetype::maxent::ProductRandomGraph;
use edgetype::rd::exact_rn_prob;
use edgetype::Distortion;

fn main() -> edgetype::Result<()> {
    let f = ProductRandomGraph::from_probs(2, vec![0.9, 0.2, 0.3, 0.6])?;
    for d in 0..=2 {
        for eps in [0.0, 0.1, 0.5] {
            let r = exact_rn_prob(&f, Distortion::new(d, 2), eps, 3)?;
            println!("d={d}/2 eps={eps}: {} codewords, {:.4} bits/edge", r.codewords, r.rate_bits);
        }
    }
    Ok(())
}
