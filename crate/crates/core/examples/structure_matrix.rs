//! Structure matrix, invariant cells and components of an 11-vertex type.

use edgetype::types::{components_from_structure, invariant_positions, structure_matrix, EdgeType};
use edgetype::verify::{REFERENCE_C, REFERENCE_R};

fn main() -> edgetype::Result<()> {
    let t = EdgeType::unrestricted(REFERENCE_R.to_vec(), REFERENCE_C.to_vec())?;
    let s = structure_matrix(&t.r, &t.c)?;
    println!("structure matrix:");
    for row in &s.t {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        println!("{}", cells.join(""));
    }
    println!("zero cells: {:?}", s.zeros());

    let masks = invariant_positions(&t)?;
    println!("cells fixed to 1, fixed to 0, free:");
    for i in 0..t.n() {
        let line: String = (0..t.n())
            .map(|j| {
                if masks.inv1.has_edge(i, j) {
                    '1'
                } else if masks.inv0.has_edge(i, j) {
                    '0'
                } else {
                    '.'
                }
            })
            .collect();
        println!("  {line}");
    }

    let parts = components_from_structure(&t)?;
    for b in parts.nontrivial() {
        let rows: Vec<usize> = b.rows.iter().map(|i| i + 1).collect();
        let cols: Vec<usize> = b.cols.iter().map(|j| j + 1).collect();
        println!("non-trivial component rows {rows:?} x cols {cols:?}");
    }
    Ok(())
}
