//! Certificates for small atomic and subatomic NFAs, and the exhaustive
//! `nα` / `nμ` oracles.
//!
//! A certificate is a relation `S` with Dep-morphisms `P : D_L → S`, `Q : S → U`
//! and `T_a : S → S`, where `U` is the identity on Nerode classes (atomic) or on
//! the syntactic monoid (subatomic). It is valid when
//! `I ⨟ P ⨟ Q = I'`, `D_{L,a} ⨟ P = P ⨟ T_a`, `T_a ⨟ Q = Q ⨟ D'_a` and `P ⨟ Q ⨟ F' = F`.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::automata::{equivalent, is_atomic, is_subatomic, Dfa, Nfa};
use crate::bits::{bitset, set_cmp, BitMatrix};
use crate::dep::{dep_compose, DepMorphism, Rel};
use crate::error::{Error, Result};
use crate::langalg::{
    derivative_system, id_one, lower_path, nerode_upper_path, nfa_of_join_irreducibles, syntactic_monoid,
    syntactic_upper_path, DepPath, DerivativeAction, DerivativeSystem, JslDfa, MonoidRecognizer,
};
use crate::semilattice::lattice_of_sets;

pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    Atomic,
    Subatomic,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Atomic => "atomic",
            CertificateKind::Subatomic => "subatomic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub s: Rel,
    /// `LD(L) × S_t`.
    pub p: BitMatrix,
    /// `S_s × U`.
    pub q: BitMatrix,
    /// `S_s × S_t`, one per letter.
    pub t: Vec<BitMatrix>,
}

pub type AtomicCertificate = Certificate;
pub type SubatomicCertificate = Certificate;

/// The lower and upper paths a certificate of the given kind is checked against.
pub fn instance_paths(ds: &DerivativeSystem, kind: CertificateKind) -> (DepPath, DepPath) {
    let upper = match kind {
        CertificateKind::Atomic => nerode_upper_path(ds),
        CertificateKind::Subatomic => syntactic_upper_path(&syntactic_monoid(ds.lang_dfa())),
    };
    (lower_path(ds), upper)
}

fn check_shapes(lower: &DepPath, upper: &DepPath, c: &Certificate) -> Result<()> {
    let (ss, st) = (c.s.rows(), c.s.cols());
    let expect = |what: &str, m: &BitMatrix, shape: (usize, usize)| {
        if m.shape() == shape {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{what} is {}x{}, expected {}x{}", m.rows(), m.cols(), shape.0, shape.1)))
        }
    };
    expect("P", &c.p, (lower.object.rows(), st))?;
    expect("Q", &c.q, (ss, upper.object.cols()))?;
    if c.t.len() != lower.alphabet.len() {
        return Err(Error::ShapeMismatch(format!("{} T blocks for {} letters", c.t.len(), lower.alphabet.len())));
    }
    for (a, t) in c.t.iter().enumerate() {
        expect(&format!("T {}", lower.alphabet.name(a)), t, (ss, st))?;
    }
    Ok(())
}

struct Morphisms {
    p: DepMorphism,
    q: DepMorphism,
    t: Vec<DepMorphism>,
}

fn morphisms(lower: &DepPath, upper: &DepPath, c: &Certificate) -> Option<Morphisms> {
    let p = DepMorphism::new(lower.object.clone(), c.s.clone(), c.p.clone()).ok()?;
    let q = DepMorphism::new(c.s.clone(), upper.object.clone(), c.q.clone()).ok()?;
    let t = c.t.iter().map(|t| DepMorphism::new(c.s.clone(), c.s.clone(), t.clone()).ok()).collect::<Option<_>>()?;
    Some(Morphisms { p, q, t })
}

/// Checks the certificate against explicit lower and upper paths.
pub fn verify_diagram(lower: &DepPath, upper: &DepPath, c: &Certificate, k: usize) -> Result<bool> {
    check_shapes(lower, upper, c)?;
    if c.s.rows() > k || (k == 0 && !lower.fin.is_empty()) {
        return Ok(false);
    }
    let Some(m) = morphisms(lower, upper, c) else { return Ok(false) };
    let i = lower.init_morphism()?;
    let f = lower.fin_morphism()?;
    let i2 = upper.init_morphism()?;
    let f2 = upper.fin_morphism()?;
    let pq = dep_compose(&m.p, &m.q)?;
    if dep_compose(&i, &pq)?.bits() != i2.bits() {
        return Ok(false);
    }
    if dep_compose(&pq, &f2)?.bits() != f.bits() {
        return Ok(false);
    }
    for a in 0..lower.alphabet.len() {
        let d = lower.trans_morphism(a)?;
        let d2 = upper.trans_morphism(a)?;
        if dep_compose(&d, &m.p)?.bits() != dep_compose(&m.p, &m.t[a])?.bits() {
            return Ok(false);
        }
        if dep_compose(&m.t[a], &m.q)?.bits() != dep_compose(&m.q, &d2)?.bits() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies an atomic certificate for the language of the reverse pair `(a, b)`.
pub fn verify_atomic_certificate(a: &Dfa, b: &Dfa, c: &Certificate, k: usize) -> Result<bool> {
    let ds = derivative_system(a, b)?;
    if c.kind != CertificateKind::Atomic {
        return Err(Error::InvalidCertificate("expected an atomic certificate".into()));
    }
    let (lower, upper) = instance_paths(&ds, CertificateKind::Atomic);
    verify_diagram(&lower, &upper, c, k)
}

/// Verifies a subatomic certificate for the language recognized by `m`.
/// The lower path comes from `m` as a DFA and its opposite as the reverse DFA.
pub fn verify_subatomic_certificate(m: &MonoidRecognizer, c: &Certificate, k: usize) -> Result<bool> {
    if c.kind != CertificateKind::Subatomic {
        return Err(Error::InvalidCertificate("expected a subatomic certificate".into()));
    }
    if c.s.cols() > m.size() {
        return Ok(false);
    }
    let ds = m.derivative_system();
    let (lower, upper) = instance_paths(&ds, CertificateKind::Subatomic);
    verify_diagram(&lower, &upper, c, k)
}

/// The NFA on `S_s` read off a certificate: transitions `(T_a)_-`, initial states
/// `(I ⨟ P)_-[*]` and final states `(Q ⨟ F')_-˘[*]`.
pub fn certificate_to_nfa(c: &Certificate, lower: &DepPath, upper: &DepPath) -> Result<Nfa> {
    check_shapes(lower, upper, c)?;
    let m = morphisms(lower, upper, c).ok_or_else(|| Error::InvalidCertificate("not a Dep-morphism".into()))?;
    let ip = dep_compose(&lower.init_morphism()?, &m.p)?;
    let qf = dep_compose(&m.q, &upper.fin_morphism()?)?;
    let n = c.s.rows();
    let inits = ip.lower().row(0).ones().collect::<Vec<_>>();
    let finals = (0..n).filter(|&x| qf.lower().get(x, 0)).collect::<Vec<_>>();
    let edges = m.t.iter().enumerate().flat_map(|(a, t)| t.lower().ones().map(move |(x, y)| (x, a, y))).collect::<Vec<_>>();
    Nfa::new(lower.alphabet.clone(), n, inits, finals, edges)
}

/// The certificate presenting the union-closed, derivative-closed family `family`
/// (bitsets over the action's points), with `P`, `Q`, `T_a` the images of the
/// inclusions and derivative maps.
pub fn certificate_from_family(
    kind: CertificateKind,
    ds: &DerivativeSystem,
    action: &DerivativeAction,
    family: Vec<FixedBitSet>,
) -> Certificate {
    let (lattice, family) = lattice_of_sets(family, &action.labels);
    let (js, ms) = lattice.irreducibles();
    let not_sub = |x: &FixedBitSet, y: &FixedBitSet| !x.is_subset(y);
    let s_bits = BitMatrix::from_fn(js.len(), ms.len(), |i, k| not_sub(&family[js[i]], &family[ms[k]]));
    let row_labels = js.iter().map(|&j| lattice.label(j).to_string()).collect();
    let col_labels = ms.iter().map(|&m| lattice.label(m).to_string()).collect();
    let s = Rel::with_labels(row_labels, col_labels, s_bits).expect("family members are distinct");
    let lds = action.left_derivatives(ds.reps_left());
    let p = BitMatrix::from_fn(lds.len(), ms.len(), |r, k| not_sub(&lds[r], &family[ms[k]]));
    let q = BitMatrix::from_fn(js.len(), action.size(), |i, x| family[js[i]].contains(x));
    let t = (0..action.alphabet.len())
        .map(|a| {
            let images: Vec<FixedBitSet> = js.iter().map(|&j| action.derive(a, &family[j])).collect();
            BitMatrix::from_fn(js.len(), ms.len(), |i, k| not_sub(&images[i], &family[ms[k]]))
        })
        .collect();
    Certificate { kind, s, p, q, t }
}

/// State languages of `n` as bitsets over the action's points, where point `x`
/// is represented by the word `words[x]`.
fn state_languages(n: &Nfa, words: &[Vec<usize>]) -> Vec<FixedBitSet> {
    (0..n.state_count()).map(|q| bitset(words.len(), (0..words.len()).filter(|&x| n.accepts_from(q, &words[x])))).collect()
}

/// Builds the certificate of an atomic NFA from the family `Langs(N)` of languages
/// it accepts from subsets of its states.
pub fn extract_certificate(n: &Nfa, a: &Dfa, b: &Dfa) -> Result<Certificate> {
    let ds = derivative_system(a, b)?;
    if !equivalent(n, ds.lang_dfa())? {
        return Err(Error::LanguageMismatch);
    }
    if !is_atomic(n) {
        return Err(Error::NotAtomic);
    }
    let action = ds.nerode_action();
    let words: Vec<Vec<usize>> = (0..ds.class_count()).map(|q| ds.class_word(q)).collect();
    let family = crate::bits::union_closure(action.size(), state_languages(n, &words));
    Ok(certificate_from_family(CertificateKind::Atomic, &ds, &action, family))
}

/// The subatomic counterpart of [`extract_certificate`], over the syntactic monoid.
pub fn extract_subatomic_certificate(n: &Nfa, m: &MonoidRecognizer) -> Result<Certificate> {
    let ds = m.derivative_system();
    if n.alphabet() != ds.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !is_subatomic(n, ds.lang_dfa())? {
        return Err(Error::NotSubatomic);
    }
    let syn = syntactic_monoid(ds.lang_dfa());
    let action = syn.syntactic_action();
    let words: Vec<Vec<usize>> =
        syn.element_words().into_iter().map(|w| w.expect("syntactic monoid is generated by letters")).collect();
    let family = crate::bits::union_closure(action.size(), state_languages(n, &words));
    Ok(certificate_from_family(CertificateKind::Subatomic, &ds, &action, family))
}

/// An optimal family found by an oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleWitness {
    /// `|J(S)|`.
    pub value: usize,
    /// The family `S`, canonically sorted.
    pub family: Vec<FixedBitSet>,
}

impl OracleWitness {
    /// The NFA of join-irreducibles of the JSL-dfa on the family.
    pub fn nfa(&self, action: &DerivativeAction) -> Nfa {
        let m = JslDfa::from_family(action, self.family.clone()).expect("oracle families are closed");
        nfa_of_join_irreducibles(&m)
    }
}

/// `nα(L)`: the least `|J(S)| ≤ kmax` over union-closed families `SLD(L) ⊆ S ⊆ BLD(L)`
/// closed under left derivatives.
pub fn na_oracle(a: &Dfa, b: &Dfa, kmax: usize, budget: u64) -> Result<Option<usize>> {
    Ok(na_oracle_witness(a, b, kmax, budget)?.map(|w| w.value))
}

pub fn na_oracle_witness(a: &Dfa, b: &Dfa, kmax: usize, budget: u64) -> Result<Option<OracleWitness>> {
    let ds = derivative_system(a, b)?;
    let action = ds.nerode_action();
    least_family(&action, &action.left_derivatives(ds.reps_left()), kmax, budget)
}

/// `nμ(L)`: as [`na_oracle`] with `BLRD(L)` (unions of syntactic classes) in place of `BLD(L)`.
pub fn nmu_oracle(m: &MonoidRecognizer, kmax: usize, budget: u64) -> Result<Option<usize>> {
    Ok(nmu_oracle_witness(m, kmax, budget)?.map(|w| w.value))
}

pub fn nmu_oracle_witness(m: &MonoidRecognizer, kmax: usize, budget: u64) -> Result<Option<OracleWitness>> {
    let ds = m.derivative_system();
    let action = syntactic_monoid(ds.lang_dfa()).syntactic_action();
    least_family(&action, &action.left_derivatives(ds.reps_left()), kmax, budget)
}

/// Families are stored as bitmasks; points beyond this are refused.
pub const ORACLE_MAX_POINTS: usize = 64;

struct Space {
    /// `pre[a][x]` = `act[a][x]`; `a⁻¹K` has bit `x` iff `K` has bit `pre[a][x]`.
    pre: Vec<Vec<usize>>,
}

impl Space {
    fn derive(&self, a: usize, k: u64) -> u64 {
        let mut out = 0;
        for (x, &y) in self.pre[a].iter().enumerate() {
            out |= (k >> y & 1) << x;
        }
        out
    }
}

#[derive(Clone)]
struct Family {
    members: Vec<u64>,
    index: HashSet<u64>,
}

impl Family {
    fn contains(&self, k: u64) -> bool {
        self.index.contains(&k)
    }

    /// Adds `k` and closes under unions and derivatives; false if the size exceeds `limit`.
    fn close_with(&mut self, space: &Space, k: u64, limit: usize) -> bool {
        let mut work = vec![k];
        while let Some(x) = work.pop() {
            if !self.index.insert(x) {
                continue;
            }
            self.members.push(x);
            if self.members.len() > limit {
                return false;
            }
            for a in 0..space.pre.len() {
                let d = space.derive(a, x);
                if !self.index.contains(&d) {
                    work.push(d);
                }
            }
            for i in 0..self.members.len() - 1 {
                let u = self.members[i] | x;
                if !self.index.contains(&u) {
                    work.push(u);
                }
            }
        }
        true
    }

    /// Number of members that are not the union of the members strictly below them.
    fn join_irreducibles(&self) -> usize {
        self.members
            .iter()
            .filter(|&&x| {
                x != 0 && self.members.iter().filter(|&&y| y != x && y & !x == 0).fold(0, |acc, &y| acc | y) != x
            })
            .count()
    }

    fn to_sets(&self, n: usize) -> Vec<FixedBitSet> {
        let mut sets: Vec<FixedBitSet> = self.members.iter().map(|&m| bitset(n, (0..n).filter(|&x| m >> x & 1 == 1))).collect();
        sets.sort_by(set_cmp);
        sets
    }
}

/// The least `|J(S)|` over families containing the given derivatives, closed under
/// unions and the action's derivatives.
///
/// Some optimal family is generated by the derivatives together with at most `k`
/// sets outside their union closure, each contained in one of the derivatives (a
/// trimmed NFA state accepts a subset of every derivative leading to it). Since
/// `|S| ≤ 2^|J(S)|`, levels below `log2 |SLD|` are skipped and candidates whose
/// derivative orbit would overflow `2^k` members are discarded.
pub fn least_family(action: &DerivativeAction, lds: &[FixedBitSet], kmax: usize, budget: u64) -> Result<Option<OracleWitness>> {
    let n = action.size();
    let to_mask = |s: &FixedBitSet| s.ones().fold(0u64, |m, x| m | 1 << x);
    let mut sld = Family { members: Vec::new(), index: HashSet::new() };
    let space = Space { pre: action.act.clone() };
    let closure = crate::bits::union_closure(n, lds.iter().cloned());
    let mut lower = 0;
    while (1usize << lower) < closure.len() {
        lower += 1;
    }
    if n > ORACLE_MAX_POINTS {
        let j = lattice_of_sets(closure, &action.labels).0.join_irreducibles().len();
        return Err(Error::BudgetExceeded { lower, upper: Some(j) });
    }
    for s in &closure {
        let m = to_mask(s);
        sld.index.insert(m);
        sld.members.push(m);
    }
    let sld_j = sld.join_irreducibles();
    let witness = |f: &Family, value| OracleWitness { value, family: f.to_sets(n) };
    let mut spent = 0u64;
    let ld_masks: Vec<u64> = {
        let mut v: Vec<u64> = lds.iter().map(to_mask).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    for k in lower..=kmax.min(sld_j) {
        if k == sld_j {
            return Ok(Some(witness(&sld, k)));
        }
        let limit = 1usize << k;
        let room = limit - sld.members.len();
        // candidate generators for this level
        let mut seen = HashSet::new();
        let mut cands: Vec<u64> = Vec::new();
        for &d in &ld_masks {
            let mut sub = d;
            loop {
                spent += 1;
                if spent > budget {
                    return Err(Error::BudgetExceeded { lower: k, upper: Some(sld_j) });
                }
                if sub != 0 && !sld.contains(sub) && seen.insert(sub) && orbit_fits(&space, &sld, sub, room) {
                    cands.push(sub);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & d;
            }
        }
        cands.sort_unstable();
        if let Some(f) = search_level(&space, &sld, &cands, 0, k, limit, &mut spent, budget)
            .map_err(|_| Error::BudgetExceeded { lower: k, upper: Some(sld_j) })?
        {
            return Ok(Some(witness(&f, f.join_irreducibles())));
        }
    }
    Ok(None)
}

fn orbit_fits(space: &Space, sld: &Family, k: u64, room: usize) -> bool {
    let mut orbit = HashSet::from([k]);
    let mut work = vec![k];
    let mut fresh = 1;
    if fresh > room {
        return false;
    }
    while let Some(x) = work.pop() {
        for a in 0..space.pre.len() {
            let d = space.derive(a, x);
            if orbit.insert(d) {
                if !sld.contains(d) {
                    fresh += 1;
                    if fresh > room {
                        return false;
                    }
                }
                work.push(d);
            }
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn search_level(
    space: &Space,
    fam: &Family,
    cands: &[u64],
    start: usize,
    depth_left: usize,
    limit: usize,
    spent: &mut u64,
    budget: u64,
) -> std::result::Result<Option<Family>, ()> {
    if depth_left == 0 {
        return Ok(None);
    }
    let k = limit.trailing_zeros() as usize;
    for i in start..cands.len() {
        let c = cands[i];
        if fam.contains(c) {
            continue;
        }
        *spent += 1;
        if *spent > budget {
            return Err(());
        }
        let mut next = fam.clone();
        if !next.close_with(space, c, limit) {
            continue;
        }
        if next.join_irreducibles() <= k {
            return Ok(Some(next));
        }
        if let Some(f) = search_level(space, &next, cands, i + 1, depth_left - 1, limit, spent, budget)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Helper for callers holding a derivative system: the `id_1` object.
pub fn unit_object() -> Rel {
    id_one()
}
