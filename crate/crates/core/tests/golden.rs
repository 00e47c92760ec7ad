use edgetype::types::{components_from_structure, invariant_positions, structure_matrix, EdgeType};

const R: [usize; 11] = [10, 10, 9, 7, 6, 6, 5, 5, 2, 2, 1];
const C: [usize; 11] = [11, 9, 9, 8, 8, 5, 5, 3, 3, 1, 1];

const EXPECTED: [[i64; 12]; 12] = [
    [63, 52, 43, 34, 26, 18, 13, 8, 5, 2, 1, 0],
    [53, 43, 35, 27, 20, 13, 9, 5, 3, 1, 1, 1],
    [43, 34, 27, 20, 14, 8, 5, 2, 1, 0, 1, 2],
    [34, 26, 20, 14, 9, 4, 2, 0, 0, 0, 2, 4],
    [27, 20, 15, 10, 6, 2, 1, 0, 1, 2, 5, 8],
    [21, 15, 11, 7, 4, 1, 1, 1, 3, 5, 9, 13],
    [15, 10, 7, 4, 2, 0, 1, 2, 5, 8, 13, 18],
    [10, 6, 4, 2, 1, 0, 2, 4, 8, 12, 18, 24],
    [5, 2, 1, 0, 0, 0, 3, 6, 11, 16, 23, 30],
    [3, 1, 1, 1, 2, 3, 7, 11, 17, 23, 31, 39],
    [1, 0, 1, 2, 4, 6, 11, 16, 23, 30, 39, 48],
    [0, 0, 2, 4, 7, 10, 16, 22, 30, 38, 48, 58],
];

#[test]
fn eleven_vertex_structure_matrix() {
    let s = structure_matrix(&R, &C).unwrap();
    for (e, row) in EXPECTED.iter().enumerate() {
        for (f, &v) in row.iter().enumerate() {
            assert_eq!(s.get(e, f), v, "cell ({e}, {f})");
        }
    }
}

#[test]
fn eleven_vertex_components() {
    let t = EdgeType::unrestricted(R.to_vec(), C.to_vec()).unwrap();
    let p = components_from_structure(&t).unwrap();
    let mut got: Vec<(Vec<usize>, Vec<usize>)> =
        p.nontrivial().iter().map(|b| (b.rows.clone(), b.cols.clone())).collect();
    got.sort();
    assert_eq!(
        got,
        vec![
            (vec![0, 1], vec![9, 10]),
            (vec![4, 5], vec![5, 6]),
            (vec![8, 9], vec![1, 2]),
        ]
    );
}

#[test]
fn eleven_vertex_free_cells_are_the_components() {
    let t = EdgeType::unrestricted(R.to_vec(), C.to_vec()).unwrap();
    let m = invariant_positions(&t).unwrap();
    let mut free = vec![];
    for i in 0..11 {
        for j in 0..11 {
            if !m.is_invariant(i, j) {
                free.push((i, j));
            }
        }
    }
    let mut expected = vec![];
    for (rows, cols) in [([0, 1], [9, 10]), ([4, 5], [5, 6]), ([8, 9], [1, 2])] {
        for i in rows {
            for j in cols {
                expected.push((i, j));
            }
        }
    }
    expected.sort();
    assert_eq!(free, expected);
}
