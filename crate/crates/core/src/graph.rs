//! Directed graphs on `[n]` stored as row bitmasks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count (one `u64` word per row).
pub const MAX_VERTICES: usize = 64;

/// A directed graph on `n` vertices with self-loops allowed.
///
/// Bit `j` of `rows[i]` is set iff the edge `i -> j` is present.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiGraph {
    n: usize,
    rows: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePair {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
}

/// Exact distortion value `num / den` with `den = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Distortion {
    pub num: usize,
    pub den: usize,
}

impl Distortion {
    pub fn new(num: usize, den: usize) -> Self {
        Distortion { num, den }
    }

    /// Largest `k / n` not exceeding `xi + delta / n`.
    pub fn from_budget(xi: f64, delta: f64, n: usize) -> Self {
        let k = (xi * n as f64 + delta + 1e-9).floor().max(0.0) as usize;
        Distortion { num: k, den: n }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Distortion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distortion {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Distortion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::InvalidInput(format!(
            "vertex count must be in 1..={MAX_VERTICES}, got {n}"
        )));
    }
    Ok(())
}

impl DiGraph {
    pub fn empty(n: usize) -> Self {
        assert!((1..=MAX_VERTICES).contains(&n), "vertex count out of range");
        DiGraph { n, rows: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        assert!((1..=MAX_VERTICES).contains(&n), "vertex count out of range");
        DiGraph {
            n,
            rows: vec![full_mask(n); n],
        }
    }

    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_n(n)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        if rows.iter().any(|&r| r & !full_mask(n) != 0) {
            return Err(Error::InvalidInput("row mask has bits beyond n".into()));
        }
        Ok(DiGraph { n, rows })
    }

    pub fn from_matrix<M: AsRef<[u8]>>(adj: &[M]) -> Result<Self> {
        let n = adj.len();
        check_n(n)?;
        let mut rows = vec![0u64; n];
        for (i, row) in adj.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => rows[i] |= 1 << j,
                    _ => return Err(Error::InvalidInput(format!("entry {v} is not 0 or 1"))),
                }
            }
        }
        Ok(DiGraph { n, rows })
    }

    /// Graph whose `n * n` cells are the low bits of `code`, row-major.
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n * n <= 64, "code form needs n <= 8");
        let mut rows = vec![0u64; n];
        for (i, row) in rows.iter_mut().enumerate() {
            *row = (code >> (i * n)) & full_mask(n);
        }
        DiGraph { n, rows }
    }

    pub fn to_code(&self) -> u64 {
        assert!(self.n * self.n <= 64, "code form needs n <= 8");
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (r << (i * self.n)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        if present {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_edge(i, j) as u8).collect())
            .collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for &row in &self.rows {
            let mut bits = row;
            while bits != 0 {
                c[bits.trailing_zeros() as usize] += 1;
                bits &= bits - 1;
            }
        }
        c
    }

    pub fn degrees(&self) -> DegreePair {
        DegreePair {
            r: self.out_degrees(),
            c: self.in_degrees(),
        }
    }

    fn same_size(&self, other: &DiGraph) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    pub fn xor(&self, other: &DiGraph) -> Result<DiGraph> {
        self.same_size(other)?;
        Ok(self.zip_rows(other, |a, b| a ^ b))
    }

    pub fn and(&self, other: &DiGraph) -> Result<DiGraph> {
        self.same_size(other)?;
        Ok(self.zip_rows(other, |a, b| a & b))
    }

    pub fn or(&self, other: &DiGraph) -> Result<DiGraph> {
        self.same_size(other)?;
        Ok(self.zip_rows(other, |a, b| a | b))
    }

    pub fn complement(&self) -> DiGraph {
        let mask = full_mask(self.n);
        DiGraph {
            n: self.n,
            rows: self.rows.iter().map(|r| !r & mask).collect(),
        }
    }

    fn zip_rows(&self, other: &DiGraph, f: impl Fn(u64, u64) -> u64) -> DiGraph {
        DiGraph {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Local-structure distortion: the largest degree of `self ^ other`, over `n`.
    pub fn distortion(&self, other: &DiGraph) -> Result<Distortion> {
        self.same_size(other)?;
        Ok(Distortion::new(self.distortion_num(other), self.n))
    }

    /// Numerator of [`DiGraph::distortion`] without the size check.
    pub(crate) fn distortion_num(&self, other: &DiGraph) -> usize {
        let d = self.zip_rows(other, |a, b| a ^ b);
        let rmax = d.out_degrees().into_iter().max().unwrap_or(0);
        let cmax = d.in_degrees().into_iter().max().unwrap_or(0);
        rmax.max(cmax)
    }

    pub fn respects_restriction(&self, w: &DiGraph) -> bool {
        self.n == w.n && self.rows.iter().zip(&w.rows).all(|(&g, &w)| g & !w == 0)
    }

    /// Relabels vertices: vertex `i` of `self` becomes row `row_of[i]` and column `col_of[i]`.
    pub fn permuted(&self, row_of: &[usize], col_of: &[usize]) -> DiGraph {
        let mut out = DiGraph::empty(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    out.set_edge(row_of[i], col_of[j], true);
                }
            }
        }
        out
    }

    fn lex_key(&self) -> impl Iterator<Item = u64> + '_ {
        let shift = 64 - self.n as u32;
        self.rows.iter().map(move |r| r.reverse_bits() >> shift)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "adj": self.to_matrix() })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let repr: GraphRepr = serde_json::from_value(v.clone())?;
        let g = DiGraph::from_matrix(&repr.adj)?;
        if g.n != repr.n {
            return Err(Error::DimensionMismatch {
                expected: repr.n,
                got: g.n,
            });
        }
        Ok(g)
    }

    /// Parses a restriction graph, accepting the string `"complete"`.
    pub fn restriction_from_json(v: &serde_json::Value, n: usize) -> Result<Self> {
        match v {
            serde_json::Value::String(s) if s == "complete" => {
                check_n(n)?;
                Ok(DiGraph::complete(n))
            }
            serde_json::Value::Null => {
                check_n(n)?;
                Ok(DiGraph::complete(n))
            }
            other => {
                let g = DiGraph::from_json(other)?;
                if g.n != n {
                    return Err(Error::DimensionMismatch { expected: n, got: g.n });
                }
                Ok(g)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    adj: Vec<Vec<u8>>,
}

impl Serialize for DiGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            adj: self.to_matrix(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        let g = DiGraph::from_matrix(&repr.adj).map_err(serde::de::Error::custom)?;
        if g.n != repr.n {
            return Err(serde::de::Error::custom("n does not match adjacency size"));
        }
        Ok(g)
    }
}

/// Row-major lexicographic order on the adjacency bits, `0 < 1`.
impl Ord for DiGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.lex_key().cmp(other.lex_key()))
    }
}

impl PartialOrd for DiGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiGraph{:?}", self.to_matrix())
    }
}

impl fmt::Display for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                f.write_str(if self.has_edge(i, j) { "1" } else { "0" })?;
            }
            if i + 1 < self.n {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// Degree density: the largest degree, floored at 1.
pub fn density(r: &[usize], c: &[usize]) -> usize {
    r.iter().chain(c).copied().max().unwrap_or(0).max(1)
}

/// Iterates every graph on `n <= 7` vertices in code order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = DiGraph> {
    assert!(n * n < 64, "exhaustive iteration needs n <= 7");
    (0..(1u64 << (n * n))).map(move |code| DiGraph::from_code(n, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: &[[u8; 2]]) -> DiGraph {
        DiGraph::from_matrix(m).unwrap()
    }

    #[test]
    fn degrees_examples() {
        let a = g(&[[1, 1], [1, 0]]);
        assert_eq!(a.degrees(), DegreePair { r: vec![2, 1], c: vec![2, 1] });
        assert_eq!(DiGraph::empty(4).degrees().r, vec![0; 4]);
        let k = DiGraph::complete(3).degrees();
        assert_eq!((k.r, k.c), (vec![3; 3], vec![3; 3]));
    }

    #[test]
    fn boolean_algebra() {
        let a = g(&[[1, 1], [1, 0]]);
        let b = g(&[[0, 1], [1, 1]]);
        assert_eq!(a.xor(&a).unwrap(), DiGraph::empty(2));
        assert_eq!(a.and(&DiGraph::complete(2)).unwrap(), a);
        assert_eq!(a.xor(&b).unwrap(), g(&[[1, 0], [0, 1]]));
        assert_eq!(a.complement(), g(&[[0, 0], [0, 1]]));
        assert!(a.xor(&DiGraph::empty(3)).is_err());
    }

    #[test]
    fn distortion_examples() {
        let a = g(&[[1, 1], [1, 0]]);
        let b = g(&[[0, 1], [1, 1]]);
        assert_eq!(a.distortion(&a).unwrap().num, 0);
        assert_eq!(a.distortion(&b).unwrap(), Distortion::new(1, 2));
        let c = g(&[[1, 1], [1, 1]]);
        assert_eq!(a.distortion(&c).unwrap().value(), 0.5);
    }

    #[test]
    fn restriction_examples() {
        let a = g(&[[1, 0], [0, 0]]);
        let w = g(&[[0, 1], [1, 1]]);
        assert!(!a.respects_restriction(&w));
        assert!(a.respects_restriction(&DiGraph::complete(2)));
        assert!(w.respects_restriction(&w));
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(&[1, 1, 1], &[1, 1, 1]), 1);
        assert_eq!(density(&[2, 1], &[2, 1]), 2);
        assert_eq!(density(&[0, 0], &[0, 0]), 1);
    }

    #[test]
    fn lex_order_is_row_major() {
        let a = g(&[[0, 1], [1, 0]]);
        let b = g(&[[1, 0], [0, 1]]);
        assert!(a < b);
        let c = g(&[[0, 1], [1, 1]]);
        assert!(a < c && c < b);
    }

    #[test]
    fn json_round_trip() {
        let a = g(&[[1, 1], [1, 0]]);
        let v = a.to_json();
        assert_eq!(DiGraph::from_json(&v).unwrap(), a);
        let w = DiGraph::restriction_from_json(&serde_json::json!("complete"), 3).unwrap();
        assert_eq!(w, DiGraph::complete(3));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<DiGraph>(&s).unwrap(), a);
    }

    #[test]
    fn distortion_budget_rounding() {
        assert_eq!(Distortion::from_budget(1.0 / 3.0, 0.5, 3).num, 1);
        assert_eq!(Distortion::from_budget(0.0, 0.0, 3).num, 0);
        assert_eq!(Distortion::from_budget(2.0 / 3.0, 0.0, 3).num, 2);
    }

    #[test]
    fn pseudometric_exhaustive_n2() {
        let gs: Vec<_> = all_graphs(2).collect();
        for a in &gs {
            for b in &gs {
                let ab = a.distortion(b).unwrap();
                assert_eq!(ab, b.distortion(a).unwrap());
                assert_eq!(ab.num == 0, a == b);
                for c in &gs {
                    let ac = a.distortion(c).unwrap().num;
                    let bc = b.distortion(c).unwrap().num;
                    assert!(ac <= ab.num + bc);
                }
            }
        }
    }
}
