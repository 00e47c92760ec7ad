//! Counting and listing the members of small classes.

use edgetype::enumerate::{count_class, enumerate_class, DEFAULT_LIMIT};
use edgetype::types::EdgeType;
use edgetype::verify::feasible_types;

fn main() -> edgetype::Result<()> {
    let t = EdgeType::unrestricted(vec![2, 1, 1], vec![1, 2, 1])?;
    let members = enumerate_class(&t, DEFAULT_LIMIT)?;
    println!("{} members of r={:?} c={:?}", members.len(), t.r, t.c);
    for g in &members {
        println!("{g}");
    }

    let regular = EdgeType::unrestricted(vec![3; 6], vec![3; 6])?;
    println!("3-regular on 6 vertices: {}", count_class(&regular, DEFAULT_LIMIT)?);

    for n in 1..=4 {
        let total: u128 = feasible_types(n)
            .iter()
            .map(|t| count_class(t, DEFAULT_LIMIT))
            .sum::<edgetype::Result<u128>>()?;
        println!("n={n}: classes sum to {total} = 2^{}", n * n);
    }
    Ok(())
}
