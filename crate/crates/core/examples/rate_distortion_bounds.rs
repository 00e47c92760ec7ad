use edgetype::maxent::SolverOptions;
use edgetype::rd::{class_members, exact_rn, rd_lower, rd_upper, TypeCache};
use edgetype::types::EdgeType;
use edgetype::Distortion;

fn main() -> edgetype::Result<()> {
    let t = EdgeType::unrestricted(vec![2, 1, 1], vec![1, 2, 1])?;
    let n = t.n();
    let (delta, delta_hat) = (0.5, 0.25);
    let dens = t.density();
    let mut cache = TypeCache::new(t.w.clone(), SolverOptions::for_n(n));
    let members = class_members(&t, 6)?;
    for k in 0..=n {
        let xi = k as f64 / n as f64;
        let up = rd_upper(&t, xi, delta, dens, &mut cache)?;
        let lo = rd_lower(&t, xi, delta, delta_hat, dens, &mut cache)?;
        let ex = exact_rn(&members, Distortion::from_budget(xi, delta, n), 3)?;
        println!(
            "xi={k}/{n}: {:.4} <= {:.4} <= {:.4} bits/edge (upper applicable {}, lower applicable {})",
            lo.bound_bits, ex.rate_bits, up.bound_bits, up.applicable, lo.applicable
        );
        for (name, v) in &up.slack {
            println!("    upper slack {name}: {v:.4}");
        }
    }
    Ok(())
}
