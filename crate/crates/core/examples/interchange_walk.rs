use edgetype::enumerate::{interchange_connected, interchange_neighbors, DEFAULT_LIMIT};
use edgetype::types::EdgeType;

fn main() -> edgetype::Result<()> {
    let t = EdgeType::unrestricted(vec![2, 2, 1, 1], vec![2, 1, 2, 1])?;
    let start = t.realize().expect("feasible");
    println!("start:\n{start}");
    for h in interchange_neighbors(&start, &t.w).iter().take(3) {
        println!("one interchange away:\n{h}");
    }
    let rep = interchange_connected(&t, DEFAULT_LIMIT)?;
    println!("reached {} of {} members, connected={}", rep.reached, rep.count, rep.connected);
    Ok(())
}
