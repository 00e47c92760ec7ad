//! Exact enumeration of edge-type classes, delta classes, conditional classes
//! and interchange walks.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{full_mask, DiGraph};
use crate::types::{
    gale_ryser_feasible, gale_ryser_rect, invariant_positions, ComponentPartition, EdgeType,
    InvariantMasks,
};

pub const DEFAULT_LIMIT: usize = 6;

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "vertex count".into(),
            size: n,
            limit,
        });
    }
    Ok(())
}

#[inline]
fn lex_key(mask: u64, n: usize) -> u64 {
    mask.reverse_bits() >> (64 - n as u32)
}

/// Subsets of `allowed` whose size lies in `lo..=hi`, in lexicographic order.
fn row_patterns(allowed: u64, n: usize, lo: usize, hi: usize) -> Vec<u64> {
    let cols: Vec<usize> = (0..n).filter(|&j| allowed >> j & 1 == 1).collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64, 0usize)];
    while let Some((pos, mask, k)) = stack.pop() {
        if pos == cols.len() {
            if k >= lo {
                out.push(mask);
            }
            continue;
        }
        if k + (cols.len() - pos) < lo {
            continue;
        }
        stack.push((pos + 1, mask, k));
        if k < hi {
            stack.push((pos + 1, mask | 1 << cols[pos], k + 1));
        }
    }
    out.sort_unstable_by_key(|&m| lex_key(m, n));
    out
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Upper bound on search leaves: the product of per-row pattern counts.
pub fn estimated_work(t: &EdgeType) -> f64 {
    (0..t.n())
        .map(|i| binom(t.w.row(i).count_ones() as usize, t.r[i]) as f64)
        .product()
}

struct ClassSearch<'a> {
    t: &'a EdgeType,
    patterns: Vec<Vec<u64>>,
    /// `allow_below[i][j]`: rows `i..n` whose restriction allows column `j`.
    allow_below: Vec<Vec<usize>>,
}

impl<'a> ClassSearch<'a> {
    fn new(t: &'a EdgeType) -> Self {
        let n = t.n();
        let patterns = (0..n)
            .map(|i| row_patterns(t.w.row(i), n, t.r[i], t.r[i]))
            .collect();
        let mut allow_below = vec![vec![0usize; n]; n + 1];
        for i in (0..n).rev() {
            for j in 0..n {
                allow_below[i][j] = allow_below[i + 1][j] + t.w.has_edge(i, j) as usize;
            }
        }
        ClassSearch {
            t,
            patterns,
            allow_below,
        }
    }

    fn residual_ok(&self, next_row: usize, rem: &[usize]) -> bool {
        let n = self.t.n();
        if (0..n).any(|j| rem[j] > self.allow_below[next_row][j]) {
            return false;
        }
        gale_ryser_rect(&self.t.r[next_row..], rem)
    }

    fn run(&self, f: &mut dyn FnMut(&[u64])) {
        let n = self.t.n();
        if self.t.c.len() != n || !self.residual_ok(0, &self.t.c) {
            return;
        }
        let mut rows = vec![0u64; n];
        let mut rem = self.t.c.clone();
        self.dfs(0, &mut rows, &mut rem, f);
    }

    fn dfs(&self, i: usize, rows: &mut [u64], rem: &mut [usize], f: &mut dyn FnMut(&[u64])) {
        let n = self.t.n();
        if i == n {
            f(rows);
            return;
        }
        for &p in &self.patterns[i] {
            if (0..n).any(|j| p >> j & 1 == 1 && rem[j] == 0) {
                continue;
            }
            for j in 0..n {
                if p >> j & 1 == 1 {
                    rem[j] -= 1;
                }
            }
            if self.residual_ok(i + 1, rem) {
                rows[i] = p;
                self.dfs(i + 1, rows, rem, f);
            }
            for j in 0..n {
                if p >> j & 1 == 1 {
                    rem[j] += 1;
                }
            }
        }
    }
}

/// Calls `f` on every member of the class in lexicographic order.
pub fn for_each_member(t: &EdgeType, limit: usize, mut f: impl FnMut(&DiGraph)) -> Result<()> {
    check_limit(t.n(), limit)?;
    let n = t.n();
    ClassSearch::new(t).run(&mut |rows| {
        let g = DiGraph::from_rows(n, rows.to_vec()).expect("valid rows");
        f(&g)
    });
    Ok(())
}

pub fn enumerate_class(t: &EdgeType, limit: usize) -> Result<Vec<DiGraph>> {
    let mut out = Vec::new();
    for_each_member(t, limit, |g| out.push(g.clone()))?;
    Ok(out)
}

/// Class size; unrestricted classes are counted by memoizing on the sorted residual columns.
pub fn count_class(t: &EdgeType, limit: usize) -> Result<u128> {
    check_limit(t.n(), limit)?;
    if t.is_unrestricted() {
        if !gale_ryser_feasible(&t.r, &t.c) {
            return Ok(0);
        }
        let mut memo = HashMap::new();
        let mut c = t.c.clone();
        c.sort_unstable();
        return Ok(count_unrestricted(&t.r, &c, &mut memo));
    }
    let mut count = 0u128;
    ClassSearch::new(t).run(&mut |_| count += 1);
    Ok(count)
}

fn count_unrestricted(
    r: &[usize],
    c_sorted: &[usize],
    memo: &mut HashMap<(usize, Vec<usize>), u128>,
) -> u128 {
    let Some((&k, rest)) = r.split_first() else {
        return c_sorted.iter().all(|&x| x == 0) as u128;
    };
    let key = (r.len(), c_sorted.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    // Groups of equal residual demand: (value, multiplicity).
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &x in c_sorted {
        match groups.last_mut() {
            Some((v, m)) if *v == x => *m += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut total = 0u128;
    let mut take = vec![0usize; groups.len()];
    split_row(k, 0, &groups, &mut take, 1, rest, memo, &mut total);
    memo.insert(key, total);
    total
}

#[allow(clippy::too_many_arguments)]
fn split_row(
    left: usize,
    g: usize,
    groups: &[(usize, usize)],
    take: &mut [usize],
    weight: u128,
    rest: &[usize],
    memo: &mut HashMap<(usize, Vec<usize>), u128>,
    total: &mut u128,
) {
    if g == groups.len() {
        if left > 0 {
            return;
        }
        let mut next = Vec::with_capacity(groups.iter().map(|x| x.1).sum());
        for (idx, &(v, m)) in groups.iter().enumerate() {
            next.extend(std::iter::repeat_n(v.saturating_sub(1), take[idx]));
            next.extend(std::iter::repeat_n(v, m - take[idx]));
        }
        next.sort_unstable();
        if gale_ryser_rect(rest, &next) {
            *total += weight * count_unrestricted(rest, &next, memo);
        }
        return;
    }
    let (v, m) = groups[g];
    let max_take = if v == 0 { 0 } else { m.min(left) };
    for x in 0..=max_take {
        take[g] = x;
        split_row(left - x, g + 1, groups, take, weight * binom(m, x), rest, memo, total);
    }
    take[g] = 0;
}

/// All graphs one interchange away from `g` that still respect `w`.
pub fn interchange_neighbors(g: &DiGraph, w: &DiGraph) -> Vec<DiGraph> {
    let n = g.n();
    let mut out = Vec::new();
    for i in 0..n {
        for i2 in i + 1..n {
            for j in 0..n {
                for j2 in j + 1..n {
                    let a = g.has_edge(i, j);
                    let b = g.has_edge(i, j2);
                    let c = g.has_edge(i2, j);
                    let d = g.has_edge(i2, j2);
                    if a == d && b == c && a != b {
                        let mut h = g.clone();
                        h.set_edge(i, j, !a);
                        h.set_edge(i, j2, !b);
                        h.set_edge(i2, j, !c);
                        h.set_edge(i2, j2, !d);
                        if h.respects_restriction(w) {
                            out.push(h);
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct InterchangeReport {
    pub connected: bool,
    pub reached: u128,
    pub count: u128,
}

/// Breadth-first search over interchanges from the first member of the class.
pub fn interchange_connected(t: &EdgeType, limit: usize) -> Result<InterchangeReport> {
    let members = enumerate_class(t, limit)?;
    let first = members.first().ok_or(Error::EmptyClass)?;
    let mut seen: HashSet<DiGraph> = HashSet::from([first.clone()]);
    let mut queue = VecDeque::from([first.clone()]);
    while let Some(g) = queue.pop_front() {
        for h in interchange_neighbors(&g, &t.w) {
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    let reached = seen.len() as u128;
    let count = members.len() as u128;
    Ok(InterchangeReport {
        connected: reached == count,
        reached,
        count,
    })
}

/// Whether a degree deviation `dev` is allowed: `dev == 0` or `dev < delta * dens`.
pub fn delta_admissible(dev: usize, delta: f64, dens: usize) -> bool {
    dev == 0 || (dev as f64) < delta * dens as f64
}

/// Inclusive range of degrees admissible around `target`.
pub fn delta_range(target: usize, n: usize, delta: f64, dens: usize) -> (usize, usize) {
    let lo = (0..=target)
        .find(|&v| delta_admissible(target - v, delta, dens))
        .unwrap_or(target);
    let hi = (target..=n)
        .rev()
        .find(|&v| delta_admissible(v - target, delta, dens))
        .unwrap_or(target);
    (lo, hi)
}

/// Members of the delta class of `t`, in lexicographic order.
pub fn enumerate_delta_class(
    t: &EdgeType,
    delta: f64,
    dens: usize,
    limit: usize,
) -> Result<Vec<DiGraph>> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidInput("delta must be nonnegative".into()));
    }
    let n = t.n();
    check_limit(n, limit)?;
    let row_range: Vec<_> = t.r.iter().map(|&d| delta_range(d, n, delta, dens)).collect();
    let col_range: Vec<_> = t.c.iter().map(|&d| delta_range(d, n, delta, dens)).collect();
    let patterns: Vec<Vec<u64>> = (0..n)
        .map(|i| row_patterns(t.w.row(i), n, row_range[i].0, row_range[i].1))
        .collect();
    let mut allow_below = vec![vec![0usize; n]; n + 1];
    for i in (0..n).rev() {
        for j in 0..n {
            allow_below[i][j] = allow_below[i + 1][j] + t.w.has_edge(i, j) as usize;
        }
    }
    let mut out = Vec::new();
    let mut rows = vec![0u64; n];
    let mut col = vec![0usize; n];
    delta_dfs(0, &patterns, &col_range, &allow_below, &mut rows, &mut col, &mut out);
    Ok(out)
}

fn delta_dfs(
    i: usize,
    patterns: &[Vec<u64>],
    col_range: &[(usize, usize)],
    allow_below: &[Vec<usize>],
    rows: &mut [u64],
    col: &mut [usize],
    out: &mut Vec<DiGraph>,
) {
    let n = rows.len();
    if i == n {
        out.push(DiGraph::from_rows(n, rows.to_vec()).expect("valid rows"));
        return;
    }
    for &p in &patterns[i] {
        for j in 0..n {
            col[j] += (p >> j & 1) as usize;
        }
        let ok = (0..n).all(|j| col[j] <= col_range[j].1 && col[j] + allow_below[i + 1][j] >= col_range[j].0);
        if ok {
            rows[i] = p;
            delta_dfs(i + 1, patterns, col_range, allow_below, rows, col, out);
        }
        for j in 0..n {
            col[j] -= (p >> j & 1) as usize;
        }
    }
}

/// Degree pairs admissible around `t`, with equal totals.
pub fn delta_admissible_types(t: &EdgeType, delta: f64, dens: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = t.n();
    let rows = product_ranges(&t.r.iter().map(|&d| delta_range(d, n, delta, dens)).collect::<Vec<_>>());
    let cols = product_ranges(&t.c.iter().map(|&d| delta_range(d, n, delta, dens)).collect::<Vec<_>>());
    let mut out = Vec::new();
    for r in &rows {
        let sr: usize = r.iter().sum();
        for c in &cols {
            if c.iter().sum::<usize>() == sr {
                out.push((r.clone(), c.clone()));
            }
        }
    }
    out
}

pub(crate) fn product_ranges(ranges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(ranges.len())];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Graphs `H` with `H ^ g` in the (delta) class of `t`, sorted.
pub fn enumerate_conditional(
    t: &EdgeType,
    g: &DiGraph,
    delta: Option<(f64, usize)>,
    limit: usize,
) -> Result<Vec<DiGraph>> {
    if g.n() != t.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), got: g.n() });
    }
    if !g.respects_restriction(&t.w) {
        return Err(Error::RestrictionViolated);
    }
    let ds = match delta {
        Some((d, dens)) => enumerate_delta_class(t, d, dens, limit)?,
        None => enumerate_class(t, limit)?,
    };
    let mut out: Vec<DiGraph> = ds
        .iter()
        .map(|d| g.xor(d).expect("same size"))
        .filter(|h| h.respects_restriction(&t.w))
        .collect();
    out.sort();
    Ok(out)
}

/// Invariant cells found by intersecting all members.
pub fn invariants_by_enumeration(t: &EdgeType, limit: usize) -> Result<InvariantMasks> {
    let n = t.n();
    let mut inv1 = DiGraph::complete(n);
    let mut inv0 = DiGraph::complete(n);
    let mut any = false;
    for_each_member(t, limit, |g| {
        any = true;
        inv1 = inv1.and(g).expect("same size");
        inv0 = inv0.and(&g.complement()).expect("same size");
    })?;
    if !any {
        return Err(Error::EmptyClass);
    }
    Ok(InvariantMasks::from_parts(inv1, inv0))
}

/// Minimal nonempty subsets whose block margins are constant over all members.
pub fn components_by_enumeration(t: &EdgeType, limit: usize) -> Result<ComponentPartition> {
    let n = t.n();
    check_limit(n, limit.min(16))?;
    let members = enumerate_class(t, limit)?;
    if members.is_empty() {
        return Err(Error::EmptyClass);
    }
    let masks = invariants_by_enumeration(t, limit)?;
    let transposed: Vec<DiGraph> = members.iter().map(transpose).collect();
    let row_blocks = minimal_balanced(&members, n)?;
    let col_blocks = minimal_balanced(&transposed, n)?;
    Ok(ComponentPartition::new(row_blocks, col_blocks, &masks))
}

pub(crate) fn transpose(g: &DiGraph) -> DiGraph {
    let n = g.n();
    let mut t = DiGraph::empty(n);
    for i in 0..n {
        for j in 0..n {
            if g.has_edge(i, j) {
                t.set_edge(j, i, true);
            }
        }
    }
    t
}

fn minimal_balanced(members: &[DiGraph], n: usize) -> Result<Vec<Vec<usize>>> {
    let subsets = 1u64 << n;
    let balanced: Vec<bool> = (0..subsets)
        .map(|set| {
            let sig = |g: &DiGraph| -> Vec<u32> {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .filter(|&i| set >> i & 1 == 1 && g.has_edge(i, j))
                            .count() as u32
                    })
                    .collect()
            };
            let first = sig(&members[0]);
            members[1..].iter().all(|g| sig(g) == first)
        })
        .collect();
    let mut blocks = Vec::new();
    let mut covered = 0u64;
    for set in 1..subsets {
        if !balanced[set as usize] {
            continue;
        }
        // Minimal: no nonempty proper subset is balanced.
        let mut sub = (set - 1) & set;
        let mut minimal = true;
        while sub != 0 {
            if balanced[sub as usize] {
                minimal = false;
                break;
            }
            sub = (sub - 1) & set;
        }
        if minimal {
            if covered & set != 0 {
                return Err(Error::InvalidInput("minimal balanced sets overlap".into()));
            }
            covered |= set;
            blocks.push((0..n).filter(|&i| set >> i & 1 == 1).collect());
        }
    }
    if covered != full_mask(n) {
        return Err(Error::InvalidInput("minimal balanced sets do not cover".into()));
    }
    Ok(blocks)
}

/// Invariant masks for any type: structure matrix when unrestricted, the oracle when
/// enumerable, otherwise the unrestricted masks plus the forbidden cells.
pub fn invariant_masks(t: &EdgeType, limit: usize) -> Result<InvariantMasks> {
    if t.is_unrestricted() {
        return invariant_positions(t);
    }
    if t.n() <= limit {
        return invariants_by_enumeration(t, limit);
    }
    let base = EdgeType::unrestricted(t.r.clone(), t.c.clone())?;
    let m = invariant_positions(&base)?;
    if !m.inv1.respects_restriction(&t.w) {
        return Err(Error::EmptyClass);
    }
    let inv0 = m.inv0.or(&t.w.complement())?;
    Ok(InvariantMasks::from_parts(m.inv1, inv0))
}
