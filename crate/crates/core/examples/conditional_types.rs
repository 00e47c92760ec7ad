use edgetype::enumerate::{enumerate_conditional, DEFAULT_LIMIT};
use edgetype::types::EdgeType;
use edgetype::DiGraph;

fn main() -> edgetype::Result<()> {
    let g = DiGraph::from_matrix(&[[1u8, 1, 0], [0, 1, 0], [1, 0, 0]])?;
    let d = EdgeType::unrestricted(vec![1, 0, 0], vec![0, 0, 1])?;
    let hs = enumerate_conditional(&d, &g, None, DEFAULT_LIMIT)?;
    println!("G =\n{g}");
    for h in &hs {
        println!("H with distortion {:?}:\n{h}", g.distortion(h)?);
    }
    let near = enumerate_conditional(&d, &g, Some((1.0, 1)), DEFAULT_LIMIT)?;
    println!("{} graphs within the delta = 1 neighborhood", near.len());
    Ok(())
}
