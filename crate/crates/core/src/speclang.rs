//! Special classes of languages: nuclear, lattice, group, unary and
//! bideterministic languages, the lattice-language reduction and the `L_n` family.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::automata::{equivalent, minimize_dfa, Alphabet, Dfa, Nfa};
use crate::biclique::{exact_dim, BicliqueCover};
use crate::bits::{union_closure, BitMatrix};
use crate::dep::{open_of, Rel};
use crate::error::{Error, Result};
use crate::langalg::{
    lower_path, nfa_of_join_irreducibles, sld_family, syntactic_monoid, DerivativeSystem, JslDfa, MonoidRecognizer,
};
use crate::semilattice::{lattice_of_sets, FinLattice, JslMorphism};

/// True iff every `D_{L,a}` is the union of the rectangles `D_L˘[q] × D_L[p]` it contains.
pub fn is_nuclear(ds: &DerivativeSystem) -> bool {
    let lp = lower_path(ds);
    let d = lp.object.bits();
    let cols: Vec<FixedBitSet> = (0..d.cols()).map(|q| d.col(q)).collect();
    lp.trans.iter().all(|da| {
        let mut union = BitMatrix::new(d.rows(), d.cols());
        for rows in &cols {
            for p in 0..d.rows() {
                let row = d.row(p);
                if rows.ones().all(|x| row.is_subset(da.row(x))) {
                    for x in rows.ones() {
                        for y in row.ones() {
                            union.set(x, y, true);
                        }
                    }
                }
            }
        }
        union == *da
    })
}

/// `ns(L) = dim D_L` for a nuclear language, with an NFA of that many states.
///
/// The cover's column sets generate a union-closed family `S ⊇ SLD(L)`; each
/// transition of `SLD(L)` is a join of `m ⊘ j` maps, which extend to `S`. The NFA of
/// join-irreducibles of the resulting JSL-dfa has at most `dim D_L` states.
pub fn nuclear_ns(ds: &DerivativeSystem, kmax: usize) -> Result<Option<(usize, Nfa)>> {
    if !is_nuclear(ds) {
        return Err(Error::NotNuclear);
    }
    let lp = lower_path(ds);
    let Some(cover) = exact_dim(&lp.object, kmax)? else { return Ok(None) };
    let nfa = nuclear_nfa(ds, &cover)?;
    if nfa.state_count() > cover.len() || !equivalent(&nfa, ds.lang_dfa())? {
        return Err(Error::LanguageMismatch);
    }
    Ok(Some((cover.len(), nfa)))
}

fn nuclear_nfa(ds: &DerivativeSystem, cover: &BicliqueCover) -> Result<Nfa> {
    let action = ds.nerode_action();
    let n = action.size();
    let sld = sld_family(ds);
    let (sld_lat, sld) = lattice_of_sets(sld, &action.labels);
    let (js, ms) = sld_lat.irreducibles();
    let family = union_closure(n, cover.bicliques.iter().map(|(_, cols)| cols.clone()));
    let (lattice, family) = lattice_of_sets(family, &action.labels);
    let lattice = Arc::new(lattice);
    let index: HashMap<&FixedBitSet, usize> = family.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let find = |s: &FixedBitSet| index.get(s).copied().ok_or(Error::NotNuclear);
    let mut trans = Vec::new();
    for a in 0..action.alphabet.len() {
        // pairs (m, j) with m ⊘ j ≤ δ_a on SLD
        let images: Vec<FixedBitSet> = sld.iter().map(|x| action.derive(a, x)).collect();
        let pairs: Vec<(usize, usize)> = ms
            .iter()
            .flat_map(|&m| js.iter().map(move |&j| (m, j)))
            .filter(|&(m, j)| (0..sld.len()).all(|x| sld[x].is_subset(&sld[m]) || sld[j].is_subset(&images[x])))
            .collect();
        let map = family
            .iter()
            .map(|y| {
                let mut out = FixedBitSet::with_capacity(n);
                for &(m, j) in &pairs {
                    if !y.is_subset(&sld[m]) {
                        out.union_with(&sld[j]);
                    }
                }
                find(&out)
            })
            .collect::<Result<Vec<_>>>()?;
        trans.push(JslMorphism::new(lattice.clone(), lattice.clone(), map)?);
    }
    let init = find(&action.lang)?;
    let mut s0 = FixedBitSet::with_capacity(n);
    for k in family.iter().filter(|k| !k.contains(action.eps)) {
        s0.union_with(k);
    }
    let s0 = find(&s0)?;
    let m = JslDfa::new(action.alphabet.clone(), lattice, trans, init, s0)?;
    Ok(nfa_of_join_irreducibles(&m))
}

/// The lattice-language instance built from a relation.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    /// The automaton for `L(S)`: states `L`, `⟨j_i|⁻¹L` in order of `J(S)`, then the sink.
    pub dfa_l: Dfa,
    /// The automaton for `r(L(S))`: states `r(L)`, one per `m ∈ M(S)`, then the sink.
    pub dfa_rl: Dfa,
    /// Transition monoid of the minimal DFA of `L(S)`.
    pub monoid: MonoidRecognizer,
    pub k: usize,
    pub source_rel: Rel,
    /// `S = Open(r)`.
    pub lattice: FinLattice,
}

/// `L(S)` for `S = Open(r)`: the words over `J(S) ⊎ M(S)` (symbols `J#i`, `M#i`)
/// avoiding every factor `J#i M#k` with `j_i ≤ m_k`.
pub fn lattice_language_instance(r: &Rel, k: usize) -> Result<ReductionInstance> {
    let s = open_of(r);
    let (js, ms) = s.irreducibles();
    if js.is_empty() || ms.is_empty() {
        return Err(Error::EmptyIrreducibles);
    }
    let (nj, nm) = (js.len(), ms.len());
    let symbols = (0..nj).map(|i| format!("J#{i}")).chain((0..nm).map(|i| format!("M#{i}")));
    let sigma = Alphabet::new(symbols)?;
    let forbidden = |i: usize, m: usize| s.leq(js[i], ms[m]);

    let sink = nj + 1;
    let mut trans_l = vec![vec![sink; nj + nm]; nj + 2];
    for (q, row) in trans_l.iter_mut().enumerate().take(nj + 1) {
        for (i, t) in row[..nj].iter_mut().enumerate() {
            *t = i + 1;
        }
        for (m, t) in row[nj..].iter_mut().enumerate() {
            *t = if q > 0 && forbidden(q - 1, m) { sink } else { 0 };
        }
    }
    let dfa_l = Dfa::new(sigma.clone(), 0, 0..=nj, trans_l)?;

    let sink = nm + 1;
    let mut trans_rl = vec![vec![sink; nj + nm]; nm + 2];
    for (q, row) in trans_rl.iter_mut().enumerate().take(nm + 1) {
        for (m, t) in row[nj..].iter_mut().enumerate() {
            *t = m + 1;
        }
        for (i, t) in row[..nj].iter_mut().enumerate() {
            *t = if q > 0 && forbidden(i, q - 1) { sink } else { 0 };
        }
    }
    let dfa_rl = Dfa::new(sigma, 0, 0..=nm, trans_rl)?;

    check_transition_monoid(&s, &js, &ms, &dfa_l)?;
    let monoid = syntactic_monoid(&dfa_l);
    Ok(ReductionInstance { dfa_l, dfa_rl, monoid, k, source_rel: r.clone(), lattice: s })
}

/// Compares the transition monoid of `dfa_l` with the maps `id`, `m ⊘ ⊤`, `⊥ ⊘ j`,
/// `m ⊘ j`, `⊥ ⊘ ⊤` and `⊤ ⊘ ⊥` of `S`, all restricted to `{⊤} ∪ J(S) ∪ {⊥}`. The last two
/// occur exactly when some `j ≰ m`, respectively some `j ≤ m`.
fn check_transition_monoid(s: &FinLattice, js: &[usize], ms: &[usize], dfa_l: &Dfa) -> Result<()> {
    let (bot, top) = (s.bottom(), s.top());
    let element = |q: usize| match q {
        0 => top,
        q if q <= js.len() => js[q - 1],
        _ => bot,
    };
    let mut points: Vec<usize> = (0..dfa_l.state_count()).map(element).collect();
    points.sort_unstable();
    points.dedup();
    let state_of: HashMap<usize, usize> = (0..dfa_l.state_count()).rev().map(|q| (element(q), q)).collect();
    let restrict = |f: &dyn Fn(usize) -> usize| points.iter().map(|&x| f(x)).collect::<Vec<usize>>();
    let oslash = |m: usize, j: usize| move |x: usize| if s.leq(x, m) { bot } else { j };

    let mut expected: HashSet<Vec<usize>> = HashSet::new();
    expected.insert(restrict(&|x| x));
    for &m in ms {
        expected.insert(restrict(&oslash(m, top)));
        for &j in js {
            expected.insert(restrict(&oslash(m, j)));
        }
    }
    for &j in js {
        expected.insert(restrict(&oslash(bot, j)));
    }
    let pairs = js.iter().flat_map(|&j| ms.iter().map(move |&m| s.leq(j, m)));
    let (mut some_leq, mut some_nleq) = (false, false);
    for leq in pairs {
        some_leq |= leq;
        some_nleq |= !leq;
    }
    if some_nleq {
        expected.insert(restrict(&oslash(bot, top)));
    }
    if some_leq {
        expected.insert(restrict(&oslash(top, bot)));
    }

    let n = dfa_l.state_count();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut work = vec![(0..n).collect::<Vec<usize>>()];
    let mut actual: HashSet<Vec<usize>> = HashSet::new();
    while let Some(t) = work.pop() {
        if !seen.insert(t.clone()) {
            continue;
        }
        actual.insert(points.iter().map(|x| element(t[state_of[x]])).collect());
        for a in 0..dfa_l.alphabet().len() {
            work.push(t.iter().map(|&q| dfa_l.next(q, a)).collect());
        }
    }
    if actual == expected {
        Ok(())
    } else {
        Err(Error::InvalidMonoid("transition monoid differs from the expected maps".into()))
    }
}

/// True iff the monoid is a group.
pub fn is_group_language(m: &MonoidRecognizer) -> bool {
    m.is_group()
}

/// Checks that `cl : BLRD(L) → BLD(L)` commutes with derivatives. Both sides
/// preserve unions, so it suffices to test singletons `{m}`, whose closure is the
/// Nerode class of `m`.
pub fn group_cl_check(ds: &DerivativeSystem) -> Result<bool> {
    let syn = syntactic_monoid(ds.lang_dfa());
    if !syn.is_group() {
        return Err(Error::NotGroupLanguage);
    }
    let words = syn.element_words();
    let cl_of: Vec<usize> = words.iter().map(|w| ds.class_of(w.as_deref().unwrap_or(&[]))).collect();
    let nerode = ds.nerode_action();
    let monoid = syn.syntactic_action();
    let cl = |k: &FixedBitSet| {
        let mut out = FixedBitSet::with_capacity(nerode.size());
        for m in k.ones() {
            out.insert(cl_of[m]);
        }
        out
    };
    for a in 0..nerode.alphabet.len() {
        for m in 0..syn.size() {
            let single = crate::bits::bitset(syn.size(), [m]);
            if nerode.derive(a, &cl(&single)) != cl(&monoid.derive(a, &single)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_unary(a: &Dfa) -> bool {
    a.alphabet().len() == 1
}

/// The reverse of the complete minimal DFA is deterministic: at most one final
/// state and every letter permutes the states.
pub fn is_bideterministic(a: &Dfa) -> bool {
    let d = minimize_dfa(a);
    let n = d.state_count();
    d.finals().count_ones(..) <= 1
        && (0..d.alphabet().len()).all(|s| {
            let mut hit = vec![false; n];
            (0..n).all(|q| !std::mem::replace(&mut hit[d.next(q, s)], true))
        })
}

/// `A_n` over `{pi, tau}`: `pi` is the cycle `i ↦ i+1 mod n`, `tau` swaps 0 and 1;
/// initial and only final state 1.
pub fn ln_family(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("L_n needs n >= 2, got {n}")));
    }
    let sigma = Alphabet::new(["pi", "tau"])?;
    let trans = (0..n)
        .map(|i| {
            let tau = match i {
                0 => 1,
                1 => 0,
                i => i,
            };
            vec![(i + 1) % n, tau]
        })
        .collect();
    Dfa::new(sigma, 1, [1], trans)
}
