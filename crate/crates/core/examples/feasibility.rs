use edgetype::types::{gale_ryser_feasible, normalize, EdgeType};
use edgetype::DiGraph;

fn main() -> edgetype::Result<()> {
    let pairs = [
        (vec![2, 1, 0], vec![1, 1, 1]),
        (vec![3, 0, 0], vec![2, 1, 0]),
        (vec![0, 2, 1], vec![1, 0, 2]),
    ];
    for (r, c) in pairs {
        let t = EdgeType::unrestricted(r.clone(), c.clone())?;
        println!("r={r:?} c={c:?} feasible={}", gale_ryser_feasible(&r, &c));
        if let Some(g) = t.realize() {
            println!("{g}");
        }
        let nz = normalize(&t);
        println!("normalized r={:?} c={:?} row order {:?}", nz.ty.r, nz.ty.c, nz.row_perm);
    }

    // A restriction graph can make an otherwise feasible type empty.
    let mut w = DiGraph::complete(2);
    w.set_edge(0, 0, false);
    w.set_edge(0, 1, false);
    let t = EdgeType::new(vec![1, 1], vec![1, 1], w)?;
    println!("with row 0 forbidden: feasible={}", t.is_feasible());
    Ok(())
}
