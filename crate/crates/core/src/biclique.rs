//! Biclique covers and the bipartite dimension of a relation.

use fixedbitset::FixedBitSet;

use crate::bits::{set_cmp, BitMatrix};
use crate::dep::Rel;
use crate::error::{Error, Result};

pub const DEFAULT_DIM_BUDGET: u64 = 1 << 24;

/// A list of bicliques `rows × cols`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BicliqueCover {
    pub bicliques: Vec<(FixedBitSet, FixedBitSet)>,
}

impl BicliqueCover {
    pub fn len(&self) -> usize {
        self.bicliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bicliques.is_empty()
    }

    /// The union of the bicliques as a relation of the given shape.
    pub fn union(&self, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::new(rows, cols);
        for (r, c) in &self.bicliques {
            for i in r.ones() {
                for j in c.ones() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }
}

/// Every biclique lies inside `r` and together they cover `r`.
pub fn verify_cover(r: &Rel, c: &BicliqueCover) -> bool {
    let fits = c.bicliques.iter().all(|(rows, cols)| {
        rows.len() == r.rows() && cols.len() == r.cols() && rows.ones().all(|i| cols.is_subset(r.image_of(i)))
    });
    fits && c.union(r.rows(), r.cols()) == *r.bits()
}

/// The maximal bicliques (formal concepts with nonempty extent and intent),
/// sorted by extent and then intent in canonical set order.
pub fn maximal_bicliques(r: &Rel) -> Vec<(FixedBitSet, FixedBitSet)> {
    let mut intents: Vec<FixedBitSet> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for row in r.bits().row_sets() {
        if row.is_clear() {
            continue;
        }
        let mut fresh = vec![row.clone()];
        for b in &intents {
            let mut c = b.clone();
            c.intersect_with(row);
            if !c.is_clear() {
                fresh.push(c);
            }
        }
        for c in fresh {
            if seen.insert(c.clone()) {
                intents.push(c);
            }
        }
    }
    let mut out: Vec<(FixedBitSet, FixedBitSet)> = intents
        .into_iter()
        .map(|b| {
            let mut a = FixedBitSet::with_capacity(r.rows());
            for x in 0..r.rows() {
                if b.is_subset(r.image_of(x)) {
                    a.insert(x);
                }
            }
            (a, b)
        })
        .collect();
    out.sort_by(|x, y| set_cmp(&x.0, &y.0).then_with(|| set_cmp(&x.1, &y.1)));
    out
}

/// Greedy cover by maximal bicliques, each step taking the one covering most new cells.
pub fn greedy_cover(r: &Rel) -> BicliqueCover {
    let (edges, bic) = edge_sets(r);
    let mut uncovered = FixedBitSet::with_capacity(edges.len());
    uncovered.insert_range(..);
    let mut chosen = Vec::new();
    while !uncovered.is_clear() {
        let best = (0..bic.len())
            .max_by_key(|&i| (bic[i].1.intersection(&uncovered).count(), std::cmp::Reverse(i)))
            .expect("a nonempty relation has a maximal biclique");
        uncovered.difference_with(&bic[best].1);
        chosen.push(bic[best].0.clone());
    }
    BicliqueCover { bicliques: chosen }
}

type Biclique = (FixedBitSet, FixedBitSet);
type Cell = (usize, usize);

/// The cells of `r` and each maximal biclique as a set of cells.
fn edge_sets(r: &Rel) -> (Vec<Cell>, Vec<(Biclique, FixedBitSet)>) {
    let edges: Vec<Cell> = r.bits().ones().collect();
    let bic = maximal_bicliques(r)
        .into_iter()
        .map(|(a, b)| {
            let mut cells = FixedBitSet::with_capacity(edges.len());
            for (e, &(i, j)) in edges.iter().enumerate() {
                if a.contains(i) && b.contains(j) {
                    cells.insert(e);
                }
            }
            ((a, b), cells)
        })
        .collect();
    (edges, bic)
}

/// The least `k ≤ kmax` with a biclique cover of size `k`, together with a cover.
pub fn exact_dim(r: &Rel, kmax: usize) -> Result<Option<BicliqueCover>> {
    exact_dim_with_budget(r, kmax, DEFAULT_DIM_BUDGET)
}

/// Branch and bound over maximal bicliques. Each node branches on the uncovered cell
/// with the fewest covering bicliques; a greedy fooling set bounds the remaining work.
pub fn exact_dim_with_budget(r: &Rel, kmax: usize, budget: u64) -> Result<Option<BicliqueCover>> {
    let (edges, bic) = edge_sets(r);
    if edges.is_empty() {
        return Ok(Some(BicliqueCover::default()));
    }
    let covering: Vec<Vec<usize>> =
        (0..edges.len()).map(|e| (0..bic.len()).filter(|&b| bic[b].1.contains(e)).collect()).collect();
    let greedy = greedy_cover(r);
    let mut search = Search {
        r,
        edges: &edges,
        bic: &bic,
        covering: &covering,
        best: greedy.len(),
        best_cover: Some(greedy.bicliques.clone()),
        nodes: 0,
        budget,
    };
    if greedy.len() > kmax {
        search.best = kmax + 1;
        search.best_cover = None;
    }
    let mut all = FixedBitSet::with_capacity(edges.len());
    all.insert_range(..);
    let root_bound = search.fooling_bound(&all);
    let mut chosen = Vec::new();
    if search.run(&all, &mut chosen).is_err() {
        let upper = search.best_cover.as_ref().map(Vec::len);
        return Err(Error::BudgetExceeded { lower: root_bound, upper });
    }
    Ok(search.best_cover.map(|bicliques| BicliqueCover { bicliques }))
}

struct Search<'a> {
    r: &'a Rel,
    edges: &'a [(usize, usize)],
    bic: &'a [(Biclique, FixedBitSet)],
    covering: &'a [Vec<usize>],
    best: usize,
    best_cover: Option<Vec<Biclique>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Size of a greedily built set of cells no two of which share a biclique.
    fn fooling_bound(&self, uncovered: &FixedBitSet) -> usize {
        let mut picked: Vec<(usize, usize)> = Vec::new();
        for e in uncovered.ones() {
            let (x1, y1) = self.edges[e];
            if picked.iter().all(|&(x2, y2)| !self.r.get(x1, y2) || !self.r.get(x2, y1)) {
                picked.push((x1, y1));
            }
        }
        picked.len()
    }

    fn run(&mut self, uncovered: &FixedBitSet, chosen: &mut Vec<usize>) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        if uncovered.is_clear() {
            if chosen.len() < self.best {
                self.best = chosen.len();
                self.best_cover = Some(chosen.iter().map(|&b| self.bic[b].0.clone()).collect());
            }
            return Ok(());
        }
        if chosen.len() + self.fooling_bound(uncovered) >= self.best {
            return Ok(());
        }
        let e = uncovered.ones().min_by_key(|&e| (self.covering[e].len(), e)).expect("nonempty");
        for &b in self.covering[e].iter() {
            let mut rest = uncovered.clone();
            rest.difference_with(&self.bic[b].1);
            chosen.push(b);
            self.run(&rest, chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}
