//! The category Dep: relations as objects, witnessed relations as morphisms,
//! and the equivalence with finite join-semilattices.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::bits::{full_set, set_label, union_closure, BitMatrix};
use crate::error::{Error, Result};
use crate::semilattice::{lattice_of_sets, FinLattice, JslMorphism};

/// A relation between two labelled finite carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rel {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    bits: BitMatrix,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn check_unique(labels: &[String]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::ShapeMismatch(format!("duplicate label `{l}`")));
        }
    }
    Ok(())
}

impl Rel {
    /// A relation with labels `0..n`.
    pub fn new(bits: BitMatrix) -> Self {
        Rel { row_labels: default_labels(bits.rows()), col_labels: default_labels(bits.cols()), bits }
    }

    pub fn with_labels(row_labels: Vec<String>, col_labels: Vec<String>, bits: BitMatrix) -> Result<Self> {
        if row_labels.len() != bits.rows() || col_labels.len() != bits.cols() {
            return Err(Error::ShapeMismatch("label count differs from carrier size".into()));
        }
        check_unique(&row_labels)?;
        check_unique(&col_labels)?;
        Ok(Rel { row_labels, col_labels, bits })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> bool) -> Self {
        Rel::new(BitMatrix::from_fn(rows, cols, f))
    }

    /// The identity relation `id_n`.
    pub fn identity(n: usize) -> Self {
        Rel::new(BitMatrix::identity(n))
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn rows(&self) -> usize {
        self.bits.rows()
    }

    pub fn cols(&self) -> usize {
        self.bits.cols()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    /// `R[x]`.
    pub fn image_of(&self, x: usize) -> &FixedBitSet {
        self.bits.row(x)
    }

    pub fn converse(&self) -> Rel {
        Rel { row_labels: self.col_labels.clone(), col_labels: self.row_labels.clone(), bits: self.bits.transpose() }
    }

    /// Permutes rows and columns: row `i` of the result is row `row_perm[i]` of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Rel {
        Rel {
            row_labels: row_perm.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: col_perm.iter().map(|&j| self.col_labels[j].clone()).collect(),
            bits: self.bits.submatrix(row_perm, col_perm),
        }
    }
}

/// The maximal lower and upper witnesses of `p ⊆ R_s × S_t`:
/// `lower(x,y) ⇔ S[y] ⊆ P[x]` and `upper(y,x) ⇔ R˘[x] ⊆ P˘[y]`.
pub fn maximal_witnesses(p: &BitMatrix, r: &Rel, s: &Rel) -> Result<(BitMatrix, BitMatrix)> {
    if p.shape() != (r.rows(), s.cols()) {
        return Err(Error::ShapeMismatch(format!(
            "morphism is {}x{}, expected {}x{}",
            p.rows(),
            p.cols(),
            r.rows(),
            s.cols()
        )));
    }
    let lower = BitMatrix::from_fn(r.rows(), s.rows(), |x, y| s.bits.row(y).is_subset(p.row(x)));
    let pt = p.transpose();
    let rt = r.bits.transpose();
    let upper = BitMatrix::from_fn(s.cols(), r.cols(), |y, x| rt.row(x).is_subset(pt.row(y)));
    Ok((lower, upper))
}

/// True iff `P_- ; S = P = R ; P_+˘` for the maximal witnesses.
pub fn is_dep_morphism(p: &BitMatrix, r: &Rel, s: &Rel) -> Result<bool> {
    let (lower, upper) = maximal_witnesses(p, r, s)?;
    Ok(lower.compose(&s.bits) == *p && r.bits.compose(&upper.transpose()) == *p)
}

/// A validated Dep-morphism together with its maximal witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepMorphism {
    src: Rel,
    dst: Rel,
    bits: BitMatrix,
    lower: BitMatrix,
    upper: BitMatrix,
}

impl DepMorphism {
    pub fn new(src: Rel, dst: Rel, bits: BitMatrix) -> Result<Self> {
        let (lower, upper) = maximal_witnesses(&bits, &src, &dst)?;
        if lower.compose(&dst.bits) != bits || src.bits.compose(&upper.transpose()) != bits {
            return Err(Error::InvalidMorphism);
        }
        Ok(DepMorphism { src, dst, bits, lower, upper })
    }

    /// `id_R`, whose relation is `R` itself.
    pub fn identity(r: &Rel) -> Self {
        DepMorphism::new(r.clone(), r.clone(), r.bits.clone()).expect("R is a Dep-endomorphism of itself")
    }

    pub fn src(&self) -> &Rel {
        &self.src
    }

    pub fn dst(&self) -> &Rel {
        &self.dst
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    /// The maximal lower witness `P_- ⊆ R_s × S_s`.
    pub fn lower(&self) -> &BitMatrix {
        &self.lower
    }

    /// The maximal upper witness `P_+ ⊆ S_t × R_t`.
    pub fn upper(&self) -> &BitMatrix {
        &self.upper
    }
}

/// `p ⨟ q = P ; Q_+˘`.
pub fn dep_compose(p: &DepMorphism, q: &DepMorphism) -> Result<DepMorphism> {
    if p.dst.bits != q.src.bits {
        return Err(Error::ObjectMismatch("target of the first morphism is not the source of the second".into()));
    }
    let bits = p.bits.compose(&q.upper.transpose());
    DepMorphism::new(p.src.clone(), q.dst.clone(), bits)
}

/// The open sets `R[X]` in canonical order (by size, then lexicographically).
pub fn open_sets(r: &Rel) -> Vec<FixedBitSet> {
    union_closure(r.cols(), r.bits.row_sets().iter().cloned())
}

/// `Open(R)`: the open sets ordered by inclusion, labelled by their column subsets.
pub fn open_of(r: &Rel) -> FinLattice {
    lattice_of_sets(open_sets(r), &r.col_labels).0
}

fn index_of(sets: &[FixedBitSet], s: &FixedBitSet) -> usize {
    sets.iter().position(|x| x == s).expect("set is open")
}

/// `Open(P)(O) = P_+˘[O]`.
pub fn open_morphism(p: &DepMorphism) -> JslMorphism {
    let src_sets = open_sets(&p.src);
    let dst_sets = open_sets(&p.dst);
    let up_t = p.upper.transpose();
    let map = src_sets.iter().map(|o| index_of(&dst_sets, &up_t.image(o))).collect();
    JslMorphism::new(Arc::new(open_of(&p.src)), Arc::new(open_of(&p.dst)), map)
        .expect("Open of a Dep-morphism preserves joins")
}

/// `Pirr(S) = ≰ ∩ J(S) × M(S)`, carriers labelled by element labels.
pub fn pirr_of(s: &FinLattice) -> Rel {
    let (js, ms) = s.irreducibles();
    let bits = BitMatrix::from_fn(js.len(), ms.len(), |i, k| !s.leq(js[i], ms[k]));
    let rows = js.iter().map(|&j| s.label(j).to_string()).collect();
    let cols = ms.iter().map(|&m| s.label(m).to_string()).collect();
    Rel::with_labels(rows, cols, bits).unwrap_or_else(|_| {
        Rel::with_labels(
            js.iter().map(|j| j.to_string()).collect(),
            ms.iter().map(|m| m.to_string()).collect(),
            BitMatrix::from_fn(js.len(), ms.len(), |i, k| !s.leq(js[i], ms[k])),
        )
        .expect("indices are unique")
    })
}

/// `Pirr(f)(j, m) ⇔ f(j) ≰ m`.
pub fn pirr_morphism(f: &JslMorphism) -> DepMorphism {
    let (s, t) = (f.dom(), f.cod());
    let js = s.join_irreducibles();
    let mt = t.meet_irreducibles();
    let bits = BitMatrix::from_fn(js.len(), mt.len(), |i, k| !t.leq(f.apply(js[i]), mt[k]));
    DepMorphism::new(pirr_of(s), pirr_of(t), bits).expect("Pirr of a join-morphism is a Dep-morphism")
}

/// `Int_R(Y) = ⋃{R[X] : R[X] ⊆ Y}`.
pub fn interior(r: &Rel, y: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(r.cols());
    for row in r.bits.row_sets() {
        if row.is_subset(y) {
            out.union_with(row);
        }
    }
    out
}

/// `J(Open(R))` and `M(Open(R))` as column subsets in canonical order:
/// the images `R[x]` that are not unions of strictly smaller images, and the interiors
/// `Int_R(R_t ∖ {y})` for columns `y` whose converse image is join-irreducible in `Open(R˘)`.
pub fn open_irreducibles(r: &Rel) -> (Vec<FixedBitSet>, Vec<FixedBitSet>) {
    let js = irreducible_images(r);
    let rc = r.converse();
    let jc = irreducible_images(&rc);
    let mut ms: Vec<FixedBitSet> = Vec::new();
    for y in 0..r.cols() {
        if jc.contains(rc.image_of(y)) {
            let mut rest = full_set(r.cols());
            rest.set(y, false);
            let m = interior(r, &rest);
            if !ms.contains(&m) {
                ms.push(m);
            }
        }
    }
    ms.sort_by(crate::bits::set_cmp);
    (js, ms)
}

fn irreducible_images(r: &Rel) -> Vec<FixedBitSet> {
    let mut out: Vec<FixedBitSet> = Vec::new();
    for x in r.bits.row_sets() {
        if x.is_clear() || out.contains(x) {
            continue;
        }
        let mut below = FixedBitSet::with_capacity(r.cols());
        for y in r.bits.row_sets() {
            if y.is_subset(x) && y != x {
                below.union_with(y);
            }
        }
        if below != *x {
            out.push(x.clone());
        }
    }
    out.sort_by(crate::bits::set_cmp);
    out
}

/// Renders an open set with the column labels of `r`.
pub fn open_set_label(r: &Rel, s: &FixedBitSet) -> String {
    set_label(s, &r.col_labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitset;

    fn r0() -> Rel {
        Rel::from_fn(2, 2, |i, j| (i, j) != (1, 0))
    }

    #[test]
    fn witnesses_of_r0() {
        let id = Rel::identity(2);
        let (lower, upper) = maximal_witnesses(r0().bits(), &id, &id).unwrap();
        assert_eq!(lower, *r0().bits());
        assert_eq!(upper, r0().bits().transpose());
        assert!(is_dep_morphism(r0().bits(), &id, &id).unwrap());
    }

    #[test]
    fn nothing_maps_into_the_empty_relation() {
        let e = Rel::from_fn(2, 2, |_, _| false);
        let id = Rel::identity(2);
        assert!(!is_dep_morphism(&BitMatrix::identity(2), &id, &e).unwrap());
        assert!(is_dep_morphism(&BitMatrix::new(2, 2), &id, &e).unwrap());
    }

    #[test]
    fn open_of_examples() {
        assert_eq!(open_of(&Rel::identity(2)).size(), 4);
        assert_eq!(open_of(&Rel::from_fn(2, 2, |_, _| false)).size(), 1);
        let c = open_of(&r0());
        assert_eq!(c.size(), 3);
        assert_eq!(c.labels(), &["{}", "{1}", "{0,1}"]);
    }

    #[test]
    fn interior_examples() {
        assert!(interior(&r0(), &bitset(2, [0])).is_clear());
        assert_eq!(interior(&r0(), &full_set(2)), full_set(2));
    }

    #[test]
    fn open_irreducibles_of_r0() {
        let (j, m) = open_irreducibles(&r0());
        assert_eq!(j, vec![bitset(2, [1]), bitset(2, [0, 1])]);
        assert_eq!(m, vec![bitset(2, []), bitset(2, [1])]);
    }

    #[test]
    fn pirr_of_chain() {
        let p = pirr_of(&FinLattice::chain(3));
        assert_eq!(p.bits(), &BitMatrix::from_fn(2, 2, |i, j| !(i == 0 && j == 1)));
    }
}
