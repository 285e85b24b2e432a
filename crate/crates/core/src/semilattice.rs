//! Explicit finite join-semilattices and join-preserving maps.
//!
//! A [`FinLattice`] is given by its order table. Finite join-semilattices are lattices,
//! so meets, tops and both kinds of irreducibles are available.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::bits::{set_cmp, BitMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FinLattice {
    /// `up[i]` = `{j : i ≤ j}`.
    up: Vec<FixedBitSet>,
    /// `down[i]` = `{j : j ≤ i}`.
    down: Vec<FixedBitSet>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
    labels: Vec<String>,
}

/// Order tables are compared; labels are not.
impl PartialEq for FinLattice {
    fn eq(&self, other: &Self) -> bool {
        self.up == other.up
    }
}

impl Eq for FinLattice {}

impl FinLattice {
    /// Builds and validates a lattice from `leq[i][j] = (i ≤ j)`.
    pub fn from_leq(leq: &BitMatrix) -> Result<Self> {
        let n = leq.rows();
        if n == 0 || leq.cols() != n {
            return Err(Error::InvalidLattice("order table must be square and nonempty".into()));
        }
        for i in 0..n {
            if !leq.get(i, i) {
                return Err(Error::InvalidLattice(format!("not reflexive at {i}")));
            }
            for j in leq.row(i).ones() {
                if j != i && leq.get(j, i) {
                    return Err(Error::InvalidLattice(format!("not antisymmetric at ({i},{j})")));
                }
                if !leq.row(j).is_subset(leq.row(i)) {
                    return Err(Error::InvalidLattice(format!("not transitive at ({i},{j})")));
                }
            }
        }
        let up: Vec<FixedBitSet> = leq.row_sets().to_vec();
        let down: Vec<FixedBitSet> = leq.transpose().row_sets().to_vec();
        let bottom = (0..n)
            .find(|&i| up[i].count_ones(..) == n)
            .ok_or_else(|| Error::InvalidLattice("no least element".into()))?;
        let join = bound_table(&up, "join")?;
        let meet = bound_table(&down, "meet")?;
        let top = (0..n).find(|&i| down[i].count_ones(..) == n).expect("joins exist, so a top exists");
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FinLattice { up, down, join, meet, bottom, top, labels })
    }

    pub fn from_leq_fn(n: usize, f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        FinLattice::from_leq(&BitMatrix::from_fn(n, n, f))
    }

    /// The family of sets ordered by inclusion. The family must be closed under unions
    /// (or at least have least upper bounds); it is kept in the given order.
    pub fn from_sets(sets: &[FixedBitSet]) -> Result<Self> {
        FinLattice::from_leq_fn(sets.len(), |i, j| sets[i].is_subset(&sets[j]))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::InvalidLattice("label count differs from size".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// The two-element lattice `2 = {0 < 1}`.
    pub fn two() -> Self {
        FinLattice::from_leq_fn(2, |i, j| i <= j).unwrap()
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        FinLattice::from_leq_fn(n, |i, j| i <= j).unwrap()
    }

    /// The powerset of an `n`-element set, elements encoded as bitmasks.
    pub fn powerset(n: usize) -> Self {
        FinLattice::from_leq_fn(1 << n, |i, j| i & !j == 0).unwrap()
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn up(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    pub fn down(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.size() + j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.size() + j]
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.size(), self.up.clone())
    }

    /// The order dual, on the same element indices.
    pub fn op(&self) -> FinLattice {
        FinLattice {
            up: self.down.clone(),
            down: self.up.clone(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
            labels: self.labels.clone(),
        }
    }

    /// Join-irreducibles in ascending element order (⊥ excluded).
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| x != self.bottom && self.join_all(self.down[x].ones().filter(|&y| y != x)) != x)
            .collect()
    }

    /// Meet-irreducibles in ascending element order (⊤ excluded).
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        self.op().join_irreducibles()
    }

    pub fn irreducibles(&self) -> (Vec<usize>, Vec<usize>) {
        (self.join_irreducibles(), self.meet_irreducibles())
    }

    /// Checks `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` on all triples.
    pub fn is_distributive(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    /// An order isomorphism `self → other` as an index table, if one exists.
    pub fn find_isomorphism(&self, other: &FinLattice) -> Option<Vec<usize>> {
        let n = self.size();
        if n != other.size() {
            return None;
        }
        let sig = |l: &FinLattice, i: usize| (l.down[i].count_ones(..), l.up[i].count_ones(..));
        let mut sigs_a: Vec<_> = (0..n).map(|i| sig(self, i)).collect();
        let mut sigs_b: Vec<_> = (0..n).map(|i| sig(other, i)).collect();
        let (order_a, order_b) = (sigs_a.clone(), sigs_b.clone());
        sigs_a.sort_unstable();
        sigs_b.sort_unstable();
        if sigs_a != sigs_b {
            return None;
        }
        // assign elements in a linear extension so that everything below is placed first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.down[i].count_ones(..));
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        #[allow(clippy::too_many_arguments)]
        fn go(
            a: &FinLattice,
            b: &FinLattice,
            order: &[usize],
            pos: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            sa: &[(usize, usize)],
            sb: &[(usize, usize)],
        ) -> bool {
            if pos == order.len() {
                return true;
            }
            let x = order[pos];
            for y in 0..b.size() {
                if used[y] || sa[x] != sb[y] {
                    continue;
                }
                let ok = order[..pos].iter().all(|&z| a.leq(z, x) == b.leq(map[z], y) && a.leq(x, z) == b.leq(y, map[z]));
                if ok {
                    map[x] = y;
                    used[y] = true;
                    if go(a, b, order, pos + 1, map, used, sa, sb) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            map[x] = usize::MAX;
            false
        }
        if go(self, other, &order, 0, &mut map, &mut used, &order_a, &order_b) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &FinLattice) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

/// Least upper bounds for all pairs, where `up[i]` lists the elements above `i`.
fn bound_table(up: &[FixedBitSet], what: &str) -> Result<Vec<usize>> {
    let n = up.len();
    let sizes: Vec<usize> = up.iter().map(|s| s.count_ones(..)).collect();
    let mut table = vec![0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut common = up[i].clone();
            common.intersect_with(&up[j]);
            let target = common.count_ones(..);
            let b = common
                .ones()
                .find(|&u| sizes[u] == target)
                .ok_or_else(|| Error::InvalidLattice(format!("no {what} for ({i},{j})")))?;
            table[i * n + j] = b;
            table[j * n + i] = b;
        }
    }
    Ok(table)
}

/// A join-preserving map between finite lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JslMorphism {
    dom: Arc<FinLattice>,
    cod: Arc<FinLattice>,
    map: Vec<usize>,
}

impl JslMorphism {
    pub fn new(dom: Arc<FinLattice>, cod: Arc<FinLattice>, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.size() {
            return Err(Error::NotJoinMorphism("value table has wrong length".into()));
        }
        if map.iter().any(|&y| y >= cod.size()) {
            return Err(Error::NotJoinMorphism("value out of range".into()));
        }
        if map[dom.bottom()] != cod.bottom() {
            return Err(Error::NotJoinMorphism("bottom is not preserved".into()));
        }
        let n = dom.size();
        for x in 0..n {
            for y in x + 1..n {
                if map[dom.join(x, y)] != cod.join(map[x], map[y]) {
                    return Err(Error::NotJoinMorphism(format!("join of {x} and {y} is not preserved")));
                }
            }
        }
        Ok(JslMorphism { dom, cod, map })
    }

    pub fn identity(s: Arc<FinLattice>) -> Self {
        let map = (0..s.size()).collect();
        JslMorphism { dom: s.clone(), cod: s, map }
    }

    pub fn dom(&self) -> &Arc<FinLattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinLattice> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &JslMorphism) -> Result<JslMorphism> {
        if *self.cod != *g.dom {
            return Err(Error::ObjectMismatch("codomain differs from the next domain".into()));
        }
        let map = self.map.iter().map(|&y| g.map[y]).collect();
        Ok(JslMorphism { dom: self.dom.clone(), cod: g.cod.clone(), map })
    }

    /// Pointwise join of two parallel morphisms.
    pub fn join_with(&self, other: &JslMorphism) -> JslMorphism {
        assert!(*self.dom == *other.dom && *self.cod == *other.cod);
        let map = self.map.iter().zip(&other.map).map(|(&a, &b)| self.cod.join(a, b)).collect();
        JslMorphism { dom: self.dom.clone(), cod: self.cod.clone(), map }
    }

    /// Pointwise order.
    pub fn leq(&self, other: &JslMorphism) -> bool {
        self.map.iter().zip(&other.map).all(|(&a, &b)| self.cod.leq(a, b))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// The constant-⊥ morphism.
    pub fn zero(dom: Arc<FinLattice>, cod: Arc<FinLattice>) -> Self {
        let map = vec![cod.bottom(); dom.size()];
        JslMorphism { dom, cod, map }
    }
}

/// The adjoint `f_* : T^op → S^op`, `t ↦ ⋁{s : f(s) ≤ t}`.
pub fn adjoint(f: &JslMorphism) -> JslMorphism {
    let (s, t) = (&f.dom, &f.cod);
    let map = (0..t.size()).map(|y| s.join_all((0..s.size()).filter(|&x| t.leq(f.map[x], y)))).collect();
    JslMorphism { dom: Arc::new(t.op()), cod: Arc::new(s.op()), map }
}

/// The morphism `s0 ⊘ t0 : S → T`, sending `x` to `t0` if `x ≰ s0` and to `⊥` otherwise.
pub fn ostar(s0: usize, t0: usize, s: &Arc<FinLattice>, t: &Arc<FinLattice>) -> JslMorphism {
    let map = (0..s.size()).map(|x| if s.leq(x, s0) { t.bottom() } else { t0 }).collect();
    JslMorphism { dom: s.clone(), cod: t.clone(), map }
}

/// True iff `f` is the join of the morphisms `m ⊘ j` (`m ∈ M(dom)`, `j ∈ J(cod)`) below it.
pub fn is_nuclear_morphism(f: &JslMorphism) -> bool {
    nuclear_part(f) == f.map
}

/// Pointwise join of all `m ⊘ j ≤ f`.
pub(crate) fn nuclear_part(f: &JslMorphism) -> Vec<usize> {
    let (s, t) = (&f.dom, &f.cod);
    let ms = s.meet_irreducibles();
    let js = t.join_irreducibles();
    let mut acc = vec![t.bottom(); s.size()];
    for &m in &ms {
        let outside: Vec<usize> = (0..s.size()).filter(|&x| !s.leq(x, m)).collect();
        for &j in &js {
            if outside.iter().all(|&x| t.leq(j, f.map[x])) {
                for &x in &outside {
                    acc[x] = t.join(acc[x], j);
                }
            }
        }
    }
    acc
}

/// Every join-preserving map `dom → cod`, in lexicographic order of the images of `J(dom)`.
pub fn all_morphisms(dom: &Arc<FinLattice>, cod: &Arc<FinLattice>) -> Vec<JslMorphism> {
    let js = dom.join_irreducibles();
    let below: Vec<Vec<usize>> =
        (0..dom.size()).map(|x| js.iter().enumerate().filter(|&(_, &j)| dom.leq(j, x)).map(|(i, _)| i).collect()).collect();
    let mut out = Vec::new();
    let mut values = vec![0usize; js.len()];
    loop {
        let map: Vec<usize> = below.iter().map(|b| cod.join_all(b.iter().map(|&i| values[i]))).collect();
        if let Ok(f) = JslMorphism::new(dom.clone(), cod.clone(), map) {
            out.push(f);
        }
        let mut pos = js.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < cod.size() {
                break;
            }
            values[pos] = 0;
        }
    }
}

/// All lattices with at most `max_size` elements, one per isomorphism class,
/// ordered by size. Element 0 is ⊥ and element `n-1` is ⊤.
pub fn enumerate_lattices(max_size: usize) -> Vec<FinLattice> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        if n <= 2 {
            out.push(FinLattice::chain(n));
            continue;
        }
        let inner = n - 2;
        let pairs: Vec<(usize, usize)> = (0..inner).flat_map(|i| (i + 1..inner).map(move |j| (i, j))).collect();
        let mut classes: HashMap<Vec<(usize, usize)>, Vec<FinLattice>> = HashMap::new();
        let mut found: Vec<FinLattice> = Vec::new();
        for code in 0u64..(1u64 << pairs.len()) {
            // strict order among inner elements, naturally labelled (i < j whenever i below j)
            let mut lt = vec![vec![false; inner]; inner];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if code >> b & 1 == 1 {
                    lt[i][j] = true;
                }
            }
            let transitive = (0..inner).all(|i| {
                (0..inner).all(|j| !lt[i][j] || (0..inner).all(|k| !lt[j][k] || lt[i][k]))
            });
            if !transitive {
                continue;
            }
            let leq = |a: usize, b: usize| {
                a == b || a == 0 || b == n - 1 || (a > 0 && b > 0 && a < n - 1 && b < n - 1 && lt[a - 1][b - 1])
            };
            let Ok(l) = FinLattice::from_leq_fn(n, leq) else { continue };
            let mut key: Vec<(usize, usize)> =
                (0..n).map(|i| (l.down[i].count_ones(..), l.up[i].count_ones(..))).collect();
            key.sort_unstable();
            let bucket = classes.entry(key).or_default();
            if bucket.iter().any(|m| m.is_isomorphic(&l)) {
                continue;
            }
            bucket.push(l.clone());
            found.push(l);
        }
        out.extend(found);
    }
    out
}

/// Sorts a union-closed family canonically and returns it as a lattice labelled by its sets.
pub fn lattice_of_sets(mut sets: Vec<FixedBitSet>, labels: &[String]) -> (FinLattice, Vec<FixedBitSet>) {
    sets.sort_by(set_cmp);
    let l = FinLattice::from_sets(&sets).expect("union-closed family with ∅ is a lattice");
    let names = sets.iter().map(|s| crate::bits::set_label(s, labels)).collect();
    (l.with_labels(names).expect("one label per set"), sets)
}
