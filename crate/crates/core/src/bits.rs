//! Boolean matrices with the relational operations used throughout the crate.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// A row-major boolean matrix; row `i` is the image `R[i]` as a bitset over columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FixedBitSet>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        BitMatrix { rows, cols, data: vec![FixedBitSet::with_capacity(cols); rows] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::new(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.data[i].insert(j);
                }
            }
        }
        m
    }

    /// Builds a matrix from its rows. Every row must have `cols` bits.
    pub fn from_rows(cols: usize, rows: Vec<FixedBitSet>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix::from_fn(n, n, |i, j| i == j)
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        BitMatrix::from_fn(rows, cols, |_, _| true)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].contains(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        self.data[i].toggle(j);
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.data[i]
    }

    pub fn row_sets(&self) -> &[FixedBitSet] {
        &self.data
    }

    /// The column set `{i : R(i, j)}`.
    pub fn col(&self, j: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.rows);
        for i in 0..self.rows {
            if self.data[i].contains(j) {
                s.insert(i);
            }
        }
        s
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row.ones() {
                t.data[j].insert(i);
            }
        }
        t
    }

    /// Relational composition `self ; other`.
    pub fn compose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "composition shape mismatch");
        let data = self.data.iter().map(|row| other.image(row)).collect();
        BitMatrix { rows: self.rows, cols: other.cols, data }
    }

    /// The image `R[X]` of a row set.
    pub fn image(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.cols);
        for i in set.ones() {
            out.union_with(&self.data[i]);
        }
        out
    }

    pub fn union(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.shape(), other.shape());
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.union_with(b);
                r
            })
            .collect();
        BitMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_subset(&self, other: &BitMatrix) -> bool {
        self.shape() == other.shape() && self.data.iter().zip(&other.data).all(|(a, b)| a.is_subset(b))
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.data.iter().all(|r| r.is_clear())
    }

    /// All set positions in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, r)| r.ones().map(move |j| (i, j)))
    }

    /// Selects the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        BitMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Builds a bitset of the given length from indices.
pub fn bitset(len: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    for i in items {
        s.insert(i);
    }
    s
}

pub fn full_set(len: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    s.insert_range(..);
    s
}

pub fn complement(s: &FixedBitSet) -> FixedBitSet {
    let mut c = s.clone();
    c.toggle_range(..);
    c
}

/// Canonical order on sets: by size, then lexicographically on the ascending element lists.
pub fn set_cmp(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.ones().cmp(b.ones()))
}

/// Renders a set as `{0,2}` using the given labels.
pub fn set_label(s: &FixedBitSet, labels: &[String]) -> String {
    let parts: Vec<&str> = s.ones().map(|i| labels[i].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Closes a family of sets under binary union; the empty set is always included.
/// The result is sorted by [`set_cmp`].
pub fn union_closure(len: usize, generators: impl IntoIterator<Item = FixedBitSet>) -> Vec<FixedBitSet> {
    let mut seen = std::collections::HashSet::new();
    let mut out: Vec<FixedBitSet> = Vec::new();
    let empty = FixedBitSet::with_capacity(len);
    seen.insert(empty.clone());
    out.push(empty);
    for g in generators {
        if seen.contains(&g) {
            continue;
        }
        let existing = out.len();
        for i in 0..existing {
            let mut u = out[i].clone();
            u.union_with(&g);
            if seen.insert(u.clone()) {
                out.push(u);
            }
        }
    }
    out.sort_by(set_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_transpose() {
        let r = BitMatrix::from_fn(2, 2, |i, j| i <= j);
        let t = r.transpose();
        assert!(t.get(1, 0) && !t.get(0, 1));
        assert_eq!(r.compose(&BitMatrix::identity(2)), r);
        assert_eq!(r.compose(&r), r);
    }

    #[test]
    fn closure_contains_unions() {
        let c = union_closure(3, [bitset(3, [0]), bitset(3, [1]), bitset(3, [2])]);
        assert_eq!(c.len(), 8);
        assert!(c[0].is_clear());
        assert_eq!(c[7], full_set(3));
    }

    #[test]
    fn set_order_is_size_then_lex() {
        let a = bitset(3, [0, 2]);
        let b = bitset(3, [1, 2]);
        let c = bitset(3, [2]);
        assert_eq!(set_cmp(&a, &b), Ordering::Less);
        assert_eq!(set_cmp(&c, &a), Ordering::Less);
    }
}
