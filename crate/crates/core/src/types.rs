//! Edge-types, Gale-Ryser feasibility, the structure matrix and its invariants.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{density, DiGraph};

/// Out-degree vector `r`, in-degree vector `c` and restriction graph `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeType {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
    pub w: DiGraph,
}

impl EdgeType {
    pub fn new(r: Vec<usize>, c: Vec<usize>, w: DiGraph) -> Result<Self> {
        let n = r.len();
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: c.len() });
        }
        if w.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.n() });
        }
        if let Some(&bad) = r.iter().chain(&c).find(|&&d| d > n) {
            return Err(Error::InvalidInput(format!("degree {bad} exceeds n = {n}")));
        }
        Ok(EdgeType { r, c, w })
    }

    pub fn unrestricted(r: Vec<usize>, c: Vec<usize>) -> Result<Self> {
        let n = r.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty degree vector".into()));
        }
        EdgeType::new(r, c, DiGraph::complete(n))
    }

    /// Type of an existing graph under restriction `w`.
    pub fn of_graph(g: &DiGraph, w: &DiGraph) -> Result<Self> {
        let d = g.degrees();
        EdgeType::new(d.r, d.c, w.clone())
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn is_unrestricted(&self) -> bool {
        self.w == DiGraph::complete(self.n())
    }

    pub fn edges(&self) -> usize {
        self.r.iter().sum()
    }

    pub fn density(&self) -> usize {
        density(&self.r, &self.c)
    }

    pub fn is_normalized(&self) -> bool {
        is_non_increasing(&self.r) && is_non_increasing(&self.c)
    }

    /// Whether the class is nonempty (Gale-Ryser when unrestricted, a flow otherwise).
    pub fn is_feasible(&self) -> bool {
        if self.is_unrestricted() {
            gale_ryser_feasible(&self.r, &self.c)
        } else {
            self.realize().is_some()
        }
    }

    /// Some member of the class, if one exists.
    pub fn realize(&self) -> Option<DiGraph> {
        realize(&self.r, &self.c, &self.w)
    }

    pub fn to_json(&self) -> Value {
        let w = if self.is_unrestricted() {
            Value::String("complete".into())
        } else {
            self.w.to_json()
        };
        serde_json::json!({ "r": self.r, "c": self.c, "w": w })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Repr {
            r: Vec<usize>,
            c: Vec<usize>,
            #[serde(default)]
            w: Value,
        }
        let repr: Repr = serde_json::from_value(v.clone())?;
        let n = repr.r.len();
        let w = DiGraph::restriction_from_json(&repr.w, n)?;
        EdgeType::new(repr.r, repr.c, w)
    }
}

impl Serialize for EdgeType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn is_non_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// Gale-Ryser test for an `r.len() x c.len()` binary matrix with the given margins.
pub fn gale_ryser_rect(r: &[usize], c: &[usize]) -> bool {
    let (m, k) = (r.len(), c.len());
    if r.iter().any(|&x| x > k) || c.iter().any(|&x| x > m) {
        return false;
    }
    if r.iter().sum::<usize>() != c.iter().sum::<usize>() {
        return false;
    }
    // Column sums of the maximal matrix are the conjugate of r.
    let mut conj = vec![0usize; k + 1];
    for &x in r {
        conj[x] += 1;
    }
    for j in (0..k).rev() {
        conj[j] += conj[j + 1];
    }
    let mut cs = c.to_vec();
    cs.sort_unstable_by(|a, b| b.cmp(a));
    let (mut lhs, mut rhs) = (0usize, 0usize);
    for (j, &cj) in cs.iter().enumerate() {
        lhs += cj;
        rhs += conj[j + 1];
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Gale-Ryser feasibility of the unrestricted square class `(r, c)`.
pub fn gale_ryser_feasible(r: &[usize], c: &[usize]) -> bool {
    r.len() == c.len() && gale_ryser_rect(r, c)
}

/// Builds a member of `T(r, c, w)` by augmenting paths, or `None` if the class is empty.
pub fn realize(r: &[usize], c: &[usize], w: &DiGraph) -> Option<DiGraph> {
    let n = r.len();
    if c.len() != n || w.n() != n || r.iter().sum::<usize>() != c.iter().sum::<usize>() {
        return None;
    }
    let mut g = DiGraph::empty(n);
    let mut out_left: Vec<usize> = r.to_vec();
    let mut in_left: Vec<usize> = c.to_vec();
    loop {
        let Some(src) = (0..n).find(|&i| out_left[i] > 0) else {
            break;
        };
        // BFS over rows: row -> column via an unused allowed cell, column -> row via a used cell.
        let mut prev_row_of_col = vec![usize::MAX; n];
        let mut prev_col_of_row = vec![usize::MAX; n];
        let mut seen_row = vec![false; n];
        seen_row[src] = true;
        let mut queue = std::collections::VecDeque::from([src]);
        let mut sink = None;
        'bfs: while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if w.has_edge(i, j) && !g.has_edge(i, j) && prev_row_of_col[j] == usize::MAX {
                    prev_row_of_col[j] = i;
                    if in_left[j] > 0 {
                        sink = Some(j);
                        break 'bfs;
                    }
                    for i2 in 0..n {
                        if !seen_row[i2] && g.has_edge(i2, j) {
                            seen_row[i2] = true;
                            prev_col_of_row[i2] = j;
                            queue.push_back(i2);
                        }
                    }
                }
            }
        }
        let sink = sink?;
        let mut j = sink;
        loop {
            let i = prev_row_of_col[j];
            g.set_edge(i, j, true);
            if i == src {
                break;
            }
            let j_prev = prev_col_of_row[i];
            g.set_edge(i, j_prev, false);
            j = j_prev;
        }
        out_left[src] -= 1;
        in_left[sink] -= 1;
    }
    (g.in_degrees() == c).then_some(g)
}

/// A normalized type together with the maps from sorted positions to original vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub ty: EdgeType,
    /// `row_perm[k]` is the original vertex at sorted row position `k`.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

impl Normalized {
    /// Maps a graph over sorted positions back to original vertex labels.
    pub fn to_original(&self, g: &DiGraph) -> DiGraph {
        g.permuted(&self.row_perm, &self.col_perm)
    }

    /// Maps a graph over original labels to sorted positions.
    pub fn to_sorted(&self, g: &DiGraph) -> DiGraph {
        g.permuted(&inverse(&self.row_perm), &inverse(&self.col_perm))
    }
}

pub(crate) fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (k, &v) in p.iter().enumerate() {
        inv[v] = k;
    }
    inv
}

/// Sorts `r` and `c` non-increasing; ties keep the original vertex order.
pub fn normalize(t: &EdgeType) -> Normalized {
    let n = t.n();
    let mut row_perm: Vec<usize> = (0..n).collect();
    row_perm.sort_by(|&a, &b| t.r[b].cmp(&t.r[a]));
    let mut col_perm: Vec<usize> = (0..n).collect();
    col_perm.sort_by(|&a, &b| t.c[b].cmp(&t.c[a]));
    let r = row_perm.iter().map(|&i| t.r[i]).collect();
    let c = col_perm.iter().map(|&j| t.c[j]).collect();
    let w = t.w.permuted(&inverse(&row_perm), &inverse(&col_perm));
    Normalized {
        ty: EdgeType { r, c, w },
        row_perm,
        col_perm,
    }
}

/// The `(n+1) x (n+1)` structure matrix of a normalized type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StructureMatrix {
    pub t: Vec<Vec<i64>>,
}

impl StructureMatrix {
    pub fn n(&self) -> usize {
        self.t.len() - 1
    }

    pub fn get(&self, e: usize, f: usize) -> i64 {
        self.t[e][f]
    }

    pub fn all_nonnegative(&self) -> bool {
        self.t.iter().flatten().all(|&x| x >= 0)
    }

    /// Zero cells sorted by `e` ascending then `f` descending.
    pub fn zeros(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut z = Vec::new();
        for e in 0..=n {
            for f in (0..=n).rev() {
                if self.t[e][f] == 0 {
                    z.push((e, f));
                }
            }
        }
        z
    }
}

/// Closed-form structure matrix `ef + sum_{i>e} r_i - sum_{j<=f} c_j`.
pub fn structure_matrix(r: &[usize], c: &[usize]) -> Result<StructureMatrix> {
    let n = r.len();
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c.len() });
    }
    if !is_non_increasing(r) || !is_non_increasing(c) {
        return Err(Error::NotNormalized);
    }
    let mut suffix_r = vec![0i64; n + 1];
    for e in (0..n).rev() {
        suffix_r[e] = suffix_r[e + 1] + r[e] as i64;
    }
    let mut prefix_c = vec![0i64; n + 1];
    for f in 0..n {
        prefix_c[f + 1] = prefix_c[f] + c[f] as i64;
    }
    let t = (0..=n)
        .map(|e| {
            (0..=n)
                .map(|f| (e * f) as i64 + suffix_r[e] - prefix_c[f])
                .collect()
        })
        .collect();
    Ok(StructureMatrix { t })
}

/// Zeros in the top-left `e x f` block plus ones in the bottom-right block of `g`.
pub fn block_count(g: &DiGraph, e: usize, f: usize) -> i64 {
    let n = g.n();
    let mut total = 0i64;
    for i in 0..n {
        for j in 0..n {
            let bit = g.has_edge(i, j);
            if i < e && j < f && !bit {
                total += 1;
            } else if i >= e && j >= f && bit {
                total += 1;
            }
        }
    }
    total
}

/// Cells that take the same value in every member of a class, and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantMasks {
    pub inv1: DiGraph,
    pub inv0: DiGraph,
    pub free: DiGraph,
}

impl InvariantMasks {
    pub fn from_parts(inv1: DiGraph, inv0: DiGraph) -> Self {
        let free = inv1.or(&inv0).expect("same size").complement();
        InvariantMasks { inv1, inv0, free }
    }

    pub fn is_invariant(&self, i: usize, j: usize) -> bool {
        !self.free.has_edge(i, j)
    }

    pub fn permuted(&self, row_of: &[usize], col_of: &[usize]) -> Self {
        InvariantMasks {
            inv1: self.inv1.permuted(row_of, col_of),
            inv0: self.inv0.permuted(row_of, col_of),
            free: self.free.permuted(row_of, col_of),
        }
    }
}

fn require_unrestricted_feasible(t: &EdgeType) -> Result<()> {
    if !t.is_unrestricted() {
        return Err(Error::InvalidInput(
            "structure-matrix invariants need an unrestricted type; use the enumeration oracle".into(),
        ));
    }
    if !gale_ryser_feasible(&t.r, &t.c) {
        return Err(Error::EmptyClass);
    }
    Ok(())
}

fn sorted_masks(sm: &StructureMatrix) -> InvariantMasks {
    let n = sm.n();
    let mut inv1 = DiGraph::empty(n);
    let mut inv0 = DiGraph::empty(n);
    for (e, f) in sm.zeros() {
        for i in 0..e {
            for j in 0..f {
                inv1.set_edge(i, j, true);
            }
        }
        for i in e..n {
            for j in f..n {
                inv0.set_edge(i, j, true);
            }
        }
    }
    InvariantMasks::from_parts(inv1, inv0)
}

/// Invariant positions from the zero cells of the structure matrix, in original labels.
pub fn invariant_positions(t: &EdgeType) -> Result<InvariantMasks> {
    require_unrestricted_feasible(t)?;
    let norm = normalize(t);
    let sm = structure_matrix(&norm.ty.r, &norm.ty.c)?;
    Ok(sorted_masks(&sm).permuted(&norm.row_perm, &norm.col_perm))
}

/// A block `rows x cols` of the cell grid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub trivial: bool,
}

/// Row and column partitions whose products tile the cell grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentPartition {
    pub row_blocks: Vec<Vec<usize>>,
    pub col_blocks: Vec<Vec<usize>>,
    pub blocks: Vec<Block>,
}

impl ComponentPartition {
    /// Builds the partition in canonical order and marks all-invariant blocks trivial.
    pub fn new(
        mut row_blocks: Vec<Vec<usize>>,
        mut col_blocks: Vec<Vec<usize>>,
        masks: &InvariantMasks,
    ) -> Self {
        for b in row_blocks.iter_mut().chain(col_blocks.iter_mut()) {
            b.sort_unstable();
        }
        row_blocks.sort();
        col_blocks.sort();
        let mut blocks = Vec::new();
        for rb in &row_blocks {
            for cb in &col_blocks {
                let trivial = rb
                    .iter()
                    .all(|&i| cb.iter().all(|&j| masks.is_invariant(i, j)));
                blocks.push(Block {
                    rows: rb.clone(),
                    cols: cb.clone(),
                    trivial,
                });
            }
        }
        ComponentPartition {
            row_blocks,
            col_blocks,
            blocks,
        }
    }

    pub fn nontrivial(&self) -> Vec<&Block> {
        self.blocks.iter().filter(|b| !b.trivial).collect()
    }
}

/// Components read off the staircase of zero cells of the structure matrix.
pub fn components_from_structure(t: &EdgeType) -> Result<ComponentPartition> {
    require_unrestricted_feasible(t)?;
    let n = t.n();
    let norm = normalize(t);
    let sm = structure_matrix(&norm.ty.r, &norm.ty.c)?;
    let masks = sorted_masks(&sm);
    let mut row_group: Vec<Option<usize>> = vec![None; n];
    let mut col_group: Vec<Option<usize>> = vec![None; n];
    let mut row_blocks = Vec::new();
    let mut col_blocks = Vec::new();
    for pair in sm.zeros().windows(2) {
        let ((e, f), (e2, f2)) = (pair[0], pair[1]);
        if e2 > e && f2 < f {
            let rows: Vec<usize> = (e..e2).collect();
            let cols: Vec<usize> = (f2..f).collect();
            for &i in &rows {
                row_group[i] = Some(row_blocks.len());
            }
            for &j in &cols {
                col_group[j] = Some(col_blocks.len());
            }
            row_blocks.push(rows);
            col_blocks.push(cols);
        }
    }
    for i in 0..n {
        if row_group[i].is_none() {
            row_blocks.push(vec![i]);
        }
        if col_group[i].is_none() {
            col_blocks.push(vec![i]);
        }
    }
    let map = |blocks: Vec<Vec<usize>>, perm: &[usize]| -> Vec<Vec<usize>> {
        blocks
            .into_iter()
            .map(|b| b.into_iter().map(|k| perm[k]).collect())
            .collect()
    };
    let masks = masks.permuted(&norm.row_perm, &norm.col_perm);
    Ok(ComponentPartition::new(
        map(row_blocks, &norm.row_perm),
        map(col_blocks, &norm.col_perm),
        &masks,
    ))
}

/// Necessary condition for `T(r, c, w)` to be nonempty: `w` keeps every invariant-1 cell.
pub fn restriction_necessary(t: &EdgeType) -> bool {
    let Ok(unrestricted) = EdgeType::unrestricted(t.r.clone(), t.c.clone()) else {
        return false;
    };
    match invariant_positions(&unrestricted) {
        Ok(m) => m.inv1.respects_restriction(&t.w),
        Err(_) => false,
    }
}

/// Removes invariant cells from `w` and subtracts invariant-1 cells from the degrees.
pub fn reduce_by_invariants(t: &EdgeType, masks: &InvariantMasks) -> Result<EdgeType> {
    let n = t.n();
    let mut r = t.r.clone();
    let mut c = t.c.clone();
    for i in 0..n {
        for j in 0..n {
            if masks.inv1.has_edge(i, j) {
                r[i] = r[i]
                    .checked_sub(1)
                    .ok_or_else(|| Error::NegativeDegree(format!("row {i}")))?;
                c[j] = c[j]
                    .checked_sub(1)
                    .ok_or_else(|| Error::NegativeDegree(format!("column {j}")))?;
            }
        }
    }
    let w = t.w.and(&masks.free)?;
    EdgeType::new(r, c, w)
}
