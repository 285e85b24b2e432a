//! From a regular language to its algebraic presentations.
//!
//! A language is given by a pair of minimal DFAs `(A, B)` with `L(B) = r(L(A))`.
//! Nerode classes are the states of `B` (the class of `u` is the state `B` reaches on
//! `r(u)`); syntactic classes are monoid elements. Languages in `BLD(L)` are bitsets
//! over Nerode classes and languages in `BLRD(L)` are bitsets over monoid elements.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::automata::{
    check_reverse_pair, minimize_dfa, reverse_dfa, state_equivalence, Alphabet, Dfa, Nfa, StateId, Symbol,
};
use crate::bits::{bitset, set_label, union_closure, BitMatrix};
use crate::dep::{dep_compose, DepMorphism, Rel};
use crate::error::{Error, Result};
use crate::semilattice::{lattice_of_sets, FinLattice, JslMorphism};

/// The minimal DFAs of `L` and `r(L)` with shortlex access words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSystem {
    lang_dfa: Dfa,
    rev_dfa: Dfa,
    reps_left: Vec<Vec<Symbol>>,
    reps_right: Vec<Vec<Symbol>>,
}

/// Checks that `b` accepts the reverse of `L(a)` and minimizes both.
pub fn derivative_system(a: &Dfa, b: &Dfa) -> Result<DerivativeSystem> {
    if !check_reverse_pair(a, b)? {
        return Err(Error::NotReversePair);
    }
    let lang_dfa = minimize_dfa(a);
    let rev_dfa = minimize_dfa(b);
    let reps = |d: &Dfa| d.access_words().into_iter().map(|w| w.expect("minimal DFAs are reachable")).collect();
    Ok(DerivativeSystem { reps_left: reps(&lang_dfa), reps_right: reps(&rev_dfa), lang_dfa, rev_dfa })
}

impl DerivativeSystem {
    /// Builds the reverse DFA itself.
    pub fn from_dfa(a: &Dfa) -> DerivativeSystem {
        derivative_system(a, &reverse_dfa(a)).expect("reverse_dfa accepts the reverse language")
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.lang_dfa.alphabet()
    }

    pub fn lang_dfa(&self) -> &Dfa {
        &self.lang_dfa
    }

    pub fn rev_dfa(&self) -> &Dfa {
        &self.rev_dfa
    }

    /// `w_A(p)` for each state `p` of the language DFA.
    pub fn reps_left(&self) -> &[Vec<Symbol>] {
        &self.reps_left
    }

    /// `w_B(q)` for each state `q` of the reverse DFA.
    pub fn reps_right(&self) -> &[Vec<Symbol>] {
        &self.reps_right
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.lang_dfa.accepts(word)
    }

    /// Number of Nerode classes (= states of the reverse DFA).
    pub fn class_count(&self) -> usize {
        self.rev_dfa.state_count()
    }

    /// The Nerode class of `u`.
    pub fn class_of(&self, word: &[Symbol]) -> usize {
        let mut q = self.rev_dfa.init();
        for &a in word.iter().rev() {
            q = self.rev_dfa.next(q, a);
        }
        q
    }

    /// The shortlex-least word of Nerode class `q`, namely `r(w_B(q))`.
    pub fn class_word(&self, q: usize) -> Vec<Symbol> {
        self.reps_right[q].iter().rev().copied().collect()
    }

    pub fn is_empty_language(&self) -> bool {
        self.lang_dfa.is_empty_language()
    }

    /// The action of letters on Nerode classes.
    pub fn nerode_action(&self) -> DerivativeAction {
        let b = &self.rev_dfa;
        let k = self.alphabet().len();
        let act = (0..k).map(|a| (0..b.state_count()).map(|q| b.next(q, a)).collect()).collect();
        let labels = (0..b.state_count()).map(|q| self.alphabet().render(&self.class_word(q))).collect();
        DerivativeAction {
            alphabet: self.alphabet().clone(),
            act,
            eps: b.init(),
            lang: b.finals().clone(),
            labels,
        }
    }

    /// Rows of `D_L` and the three other pieces of the lower path `id_1 → D_L → D_L → id_1`.
    pub fn lower_path(&self) -> DepPath {
        lower_path(self)
    }
}

/// A left action of letters on a finite set `X` presenting derivatives of languages
/// `K ⊆ X`: `a⁻¹K = {x : act[a][x] ∈ K}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeAction {
    pub alphabet: Alphabet,
    /// `act[a][x]`.
    pub act: Vec<Vec<usize>>,
    /// The point holding the empty word.
    pub eps: usize,
    /// The language itself.
    pub lang: FixedBitSet,
    pub labels: Vec<String>,
}

impl DerivativeAction {
    pub fn size(&self) -> usize {
        self.lang.len()
    }

    pub fn derive(&self, a: Symbol, k: &FixedBitSet) -> FixedBitSet {
        let act = &self.act[a];
        bitset(self.size(), (0..self.size()).filter(|&x| k.contains(act[x])))
    }

    /// `u⁻¹K`.
    pub fn derive_word(&self, word: &[Symbol], k: &FixedBitSet) -> FixedBitSet {
        word.iter().fold(k.clone(), |acc, &a| self.derive(a, &acc))
    }

    /// Left derivatives `u⁻¹L` for the given words.
    pub fn left_derivatives(&self, words: &[Vec<Symbol>]) -> Vec<FixedBitSet> {
        words.iter().map(|w| self.derive_word(w, &self.lang)).collect()
    }

    pub fn label(&self, k: &FixedBitSet) -> String {
        set_label(k, &self.labels)
    }
}

/// Dep-morphisms `id_1 → X → X → id_1` (one endomorphism per letter).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepPath {
    pub alphabet: Alphabet,
    pub object: Rel,
    /// `1 × X_t`.
    pub init: BitMatrix,
    /// `X_s × X_t` per letter.
    pub trans: Vec<BitMatrix>,
    /// `X_s × 1`.
    pub fin: BitMatrix,
}

pub type LowerPath = DepPath;
pub type UpperPathAtomic = DepPath;

/// The object `id_1`.
pub fn id_one() -> Rel {
    Rel::with_labels(vec!["*".into()], vec!["*".into()], BitMatrix::full(1, 1)).unwrap()
}

impl DepPath {
    pub fn init_morphism(&self) -> Result<DepMorphism> {
        DepMorphism::new(id_one(), self.object.clone(), self.init.clone())
    }

    pub fn trans_morphism(&self, a: Symbol) -> Result<DepMorphism> {
        DepMorphism::new(self.object.clone(), self.object.clone(), self.trans[a].clone())
    }

    pub fn fin_morphism(&self) -> Result<DepMorphism> {
        DepMorphism::new(self.object.clone(), id_one(), self.fin.clone())
    }

    /// Evaluates `I ⨟ D_{a1} ⨟ … ⨟ D_{an} ⨟ F`.
    pub fn accepts(&self, word: &[Symbol]) -> Result<bool> {
        let mut m = self.init_morphism()?;
        for &a in word {
            m = dep_compose(&m, &self.trans_morphism(a)?)?;
        }
        let out = dep_compose(&m, &self.fin_morphism()?)?;
        Ok(out.bits().get(0, 0))
    }
}

/// `D_L(p, q) ⇔ w_A(p)·r(w_B(q)) ∈ L`, with `D_{L,a}`, `I` and `F` alongside.
pub fn lower_path(ds: &DerivativeSystem) -> LowerPath {
    let a = &ds.lang_dfa;
    let sigma = ds.alphabet();
    let rows = ds.reps_left.len();
    let cols = ds.reps_right.len();
    let tails: Vec<Vec<Symbol>> = (0..cols).map(|q| ds.class_word(q)).collect();
    let test = |p: usize, mid: &[Symbol], q: usize| {
        let s = a.run_from(a.run_from(a.run_from(a.init(), &ds.reps_left[p]), mid), &tails[q]);
        a.is_final(s)
    };
    let dr = BitMatrix::from_fn(rows, cols, |p, q| test(p, &[], q));
    let trans = (0..sigma.len()).map(|s| BitMatrix::from_fn(rows, cols, |p, q| test(p, &[s], q))).collect();
    let init = BitMatrix::from_fn(1, cols, |_, q| ds.rev_dfa.accepts(&ds.reps_right[q]));
    let fin = BitMatrix::from_fn(rows, 1, |p, _| a.accepts(&ds.reps_left[p]));
    let row_labels = ds.reps_left.iter().map(|w| sigma.render(w)).collect();
    let col_labels = ds.reps_right.iter().map(|w| sigma.render(w)).collect();
    let object = Rel::with_labels(row_labels, col_labels, dr).expect("access words are distinct");
    DepPath { alphabet: sigma.clone(), object, init, trans, fin }
}

/// The upper path over `id` of the Nerode classes:
/// `I'(*,[u]) ⇔ u ∈ L`, `D'_a([u],[v]) ⇔ av ~ u`, `F'([u],*) ⇔ u ~ ε`.
pub fn nerode_upper_path(ds: &DerivativeSystem) -> UpperPathAtomic {
    upper_path_of(&ds.nerode_action())
}

/// The upper path over the identity on the points of a derivative action.
pub fn upper_path_of(action: &DerivativeAction) -> DepPath {
    let n = action.size();
    let labels = action.labels.clone();
    let object = Rel::with_labels(labels.clone(), labels, BitMatrix::identity(n))
        .unwrap_or_else(|_| Rel::identity(n));
    let init = BitMatrix::from_fn(1, n, |_, x| action.lang.contains(x));
    let trans = action.act.iter().map(|act| BitMatrix::from_fn(n, n, |u, v| act[v] == u)).collect();
    let fin = BitMatrix::from_fn(n, 1, |x, _| x == action.eps);
    DepPath { alphabet: action.alphabet.clone(), object, init, trans, fin }
}

/// For each column `q` of `D_L`, the index in [`sld_family`] of
/// `dr_L(w_B(q)⁻¹ r(L)) = ⋃{u⁻¹L : u·r(w_B(q)) ∉ L}`.
pub fn drl_iso(ds: &DerivativeSystem) -> Vec<usize> {
    let lp = lower_path(ds);
    let lds = ds.nerode_action().left_derivatives(&ds.reps_left);
    let family = sld_family(ds);
    (0..ds.class_count())
        .map(|q| {
            let mut k = FixedBitSet::with_capacity(ds.class_count());
            for (p, d) in lds.iter().enumerate() {
                if !lp.object.get(p, q) {
                    k.union_with(d);
                }
            }
            family.iter().position(|s| *s == k).expect("unions of derivatives lie in SLD")
        })
        .collect()
}

/// `SLD(L)` as sets of Nerode classes in canonical order.
pub fn sld_family(ds: &DerivativeSystem) -> Vec<FixedBitSet> {
    let action = ds.nerode_action();
    union_closure(action.size(), action.left_derivatives(&ds.reps_left))
}

/// The minimal JSL-dfa `SLD(L)`.
pub fn sld_lattice(ds: &DerivativeSystem) -> JslDfa {
    JslDfa::from_family(&ds.nerode_action(), sld_family(ds)).expect("SLD is closed under derivatives")
}

/// The átomaton: states are Nerode classes, `[u] →a [v]` iff `av ~ u`,
/// initial iff `u ∈ L`, final iff `u ~ ε`.
pub fn atomaton(ds: &DerivativeSystem) -> Nfa {
    let b = &ds.rev_dfa;
    let n = b.state_count();
    let k = ds.alphabet().len();
    let edges = (0..n).flat_map(|v| (0..k).map(move |a| (b.next(v, a), a, v)));
    Nfa::new(ds.alphabet().clone(), n, b.finals().ones(), [b.init()], edges).expect("átomaton is well formed")
}

/// A monoid recognizer `(M, h, F)`; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidRecognizer {
    alphabet: Alphabet,
    size: usize,
    table: Vec<usize>,
    letters: Vec<usize>,
    finals: FixedBitSet,
}

impl MonoidRecognizer {
    pub fn new(
        alphabet: Alphabet,
        table: Vec<Vec<usize>>,
        letters: Vec<usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidMonoid("empty monoid".into()));
        }
        if table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMonoid("multiplication table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidMonoid("product out of range".into()));
        }
        if letters.len() != alphabet.len() || letters.iter().any(|&x| x >= n) {
            return Err(Error::InvalidMonoid("letter map does not cover the alphabet".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |i: usize, j: usize| flat[i * n + j];
        for x in 0..n {
            if mul(0, x) != x || mul(x, 0) != x {
                return Err(Error::InvalidMonoid("element 0 is not an identity".into()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if mul(mul(x, y), z) != mul(x, mul(y, z)) {
                        return Err(Error::InvalidMonoid(format!("not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        let mut f = FixedBitSet::with_capacity(n);
        for x in finals {
            if x >= n {
                return Err(Error::InvalidMonoid(format!("final element {x} out of range")));
            }
            f.insert(x);
        }
        Ok(MonoidRecognizer { alphabet, size: n, table: flat, letters, finals: f })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    /// `h(a)`.
    pub fn letter(&self, a: Symbol) -> usize {
        self.letters[a]
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn finals(&self) -> &FixedBitSet {
        &self.finals
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    /// `h(w)`.
    pub fn eval(&self, word: &[Symbol]) -> usize {
        word.iter().fold(0, |m, &a| self.mul(m, self.letters[a]))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.finals.contains(self.eval(word))
    }

    /// The DFA `m →a m·h(a)` from the identity; accepts the recognized language.
    pub fn as_dfa(&self) -> Dfa {
        let trans = (0..self.size).map(|m| self.letters.iter().map(|&h| self.mul(m, h)).collect()).collect();
        Dfa::new(self.alphabet.clone(), 0, self.finals.ones(), trans).expect("monoid DFA is well formed")
    }

    /// The DFA of the opposite monoid, `m →a h(a)·m`; accepts the reverse language.
    pub fn opposite_dfa(&self) -> Dfa {
        let trans = (0..self.size).map(|m| self.letters.iter().map(|&h| self.mul(h, m)).collect()).collect();
        Dfa::new(self.alphabet.clone(), 0, self.finals.ones(), trans).expect("monoid DFA is well formed")
    }

    /// The derivative system of the recognized language, built from the monoid's two DFAs.
    pub fn derivative_system(&self) -> DerivativeSystem {
        derivative_system(&self.as_dfa(), &self.opposite_dfa()).expect("the opposite monoid recognizes the reverse")
    }

    /// Shortlex-least words for the elements reachable from the identity.
    pub fn element_words(&self) -> Vec<Option<Vec<Symbol>>> {
        self.as_dfa().access_words()
    }

    /// True iff every element has a two-sided inverse.
    pub fn is_group(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).any(|y| self.mul(x, y) == 0 && self.mul(y, x) == 0))
    }

    /// The left-multiplication action `x ↦ h(a)·x`, presenting `BLRD(L)`.
    pub fn syntactic_action(&self) -> DerivativeAction {
        let words = self.element_words();
        let labels = (0..self.size)
            .map(|m| match &words[m] {
                Some(w) => self.alphabet.render(w),
                None => format!("#{m}"),
            })
            .collect();
        let act = self.letters.iter().map(|&h| (0..self.size).map(|x| self.mul(h, x)).collect()).collect();
        DerivativeAction { alphabet: self.alphabet.clone(), act, eps: 0, lang: self.finals.clone(), labels }
    }
}

/// The transition monoid of the minimal DFA, elements in shortlex order of their
/// least words (the identity first).
pub fn syntactic_monoid(a: &Dfa) -> MonoidRecognizer {
    let d = minimize_dfa(a);
    let n = d.state_count();
    let k = d.alphabet().len();
    let identity: Vec<StateId> = (0..n).collect();
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<StateId>, usize> = HashMap::from([(identity, 0)]);
    let mut i = 0;
    while i < elements.len() {
        for s in 0..k {
            let next: Vec<StateId> = elements[i].iter().map(|&q| d.next(q, s)).collect();
            if !index.contains_key(&next) {
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
        i += 1;
    }
    let size = elements.len();
    let table = (0..size)
        .map(|x| {
            (0..size)
                .map(|y| {
                    let prod: Vec<StateId> = elements[x].iter().map(|&q| elements[y][q]).collect();
                    index[&prod]
                })
                .collect()
        })
        .collect();
    let letters = (0..k).map(|s| index[&(0..n).map(|q| d.next(q, s)).collect::<Vec<_>>()]).collect();
    let finals: Vec<usize> = (0..size).filter(|&x| d.is_final(elements[x][d.init()])).collect();
    MonoidRecognizer::new(d.alphabet().clone(), table, letters, finals).expect("transition monoid is a monoid")
}

/// The upper path over `id_{Syn L}`:
/// `I''(*,m) ⇔ m ∈ F`, `D''_a(u,v) ⇔ h(a)·v = u`, `F''(m,*) ⇔ m = 1`.
pub fn syntactic_upper_path(m: &MonoidRecognizer) -> DepPath {
    upper_path_of(&m.syntactic_action())
}

/// A DFA whose states form a finite lattice, with join-preserving transitions
/// and final states `{s : s ≰ s0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JslDfa {
    alphabet: Alphabet,
    lattice: Arc<FinLattice>,
    trans: Vec<JslMorphism>,
    init: usize,
    s0: usize,
}

impl JslDfa {
    pub fn new(alphabet: Alphabet, lattice: Arc<FinLattice>, trans: Vec<JslMorphism>, init: usize, s0: usize) -> Result<Self> {
        if trans.len() != alphabet.len() {
            return Err(Error::InvalidAutomaton("one transition morphism per letter is required".into()));
        }
        if trans.iter().any(|t| **t.dom() != *lattice || **t.cod() != *lattice) {
            return Err(Error::ObjectMismatch("transitions must be endomorphisms of the state lattice".into()));
        }
        if init >= lattice.size() || s0 >= lattice.size() {
            return Err(Error::InvalidAutomaton("state out of range".into()));
        }
        Ok(JslDfa { alphabet, lattice, trans, init, s0 })
    }

    /// The JSL-dfa on a family of languages (bitsets over the action's points),
    /// with `K →a a⁻¹K`, initial state `L` and finals `{K : ε ∈ K}`.
    /// The family must be closed under unions and derivatives and contain `L`.
    pub fn from_family(action: &DerivativeAction, family: Vec<FixedBitSet>) -> Result<Self> {
        let (lattice, family) = lattice_of_sets(family, &action.labels);
        let lattice = Arc::new(lattice);
        let index: HashMap<&FixedBitSet, usize> = family.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let find = |s: &FixedBitSet| {
            index.get(s).copied().ok_or_else(|| Error::InvalidArgument("family is not closed under derivatives".into()))
        };
        let mut trans = Vec::new();
        for a in 0..action.alphabet.len() {
            let map = family.iter().map(|k| find(&action.derive(a, k))).collect::<Result<Vec<_>>>()?;
            trans.push(JslMorphism::new(lattice.clone(), lattice.clone(), map)?);
        }
        let init = find(&action.lang)?;
        let mut s0 = FixedBitSet::with_capacity(action.size());
        for k in family.iter().filter(|k| !k.contains(action.eps)) {
            s0.union_with(k);
        }
        let s0 = find(&s0)?;
        JslDfa::new(action.alphabet.clone(), lattice, trans, init, s0)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn lattice(&self) -> &Arc<FinLattice> {
        &self.lattice
    }

    pub fn trans(&self) -> &[JslMorphism] {
        &self.trans
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn s0(&self) -> usize {
        self.s0
    }

    pub fn is_final(&self, s: usize) -> bool {
        !self.lattice.leq(s, self.s0)
    }

    /// The underlying DFA on all lattice elements.
    pub fn as_dfa(&self) -> Dfa {
        let n = self.lattice.size();
        let trans = (0..n).map(|s| self.trans.iter().map(|t| t.apply(s)).collect()).collect();
        let finals: Vec<usize> = (0..n).filter(|&s| self.is_final(s)).collect();
        Dfa::new(self.alphabet.clone(), self.init, finals, trans).expect("JSL-dfa is a complete DFA")
    }

    /// Every state is a join of reachable states.
    pub fn is_reachable(&self) -> bool {
        let d = self.as_dfa();
        let reach = d.reachable_order();
        let l = &self.lattice;
        let mut closed: Vec<bool> = vec![false; l.size()];
        closed[l.bottom()] = true;
        let mut members = vec![l.bottom()];
        for &r in &reach {
            let existing = members.clone();
            for m in existing {
                let j = l.join(m, r);
                if !closed[j] {
                    closed[j] = true;
                    members.push(j);
                }
            }
        }
        closed.into_iter().all(|b| b)
    }

    /// Distinct states accept distinct languages.
    pub fn is_simple(&self) -> bool {
        let classes = state_equivalence(&self.as_dfa());
        let mut seen = vec![false; classes.len()];
        classes.into_iter().all(|c| !std::mem::replace(&mut seen[c], true))
    }
}

/// The NFA of join-irreducibles: states `J(Q)` in ascending order,
/// `q1 →a q2` iff `q2 ≤ δ_a(q1)`, initial iff `q ≤ q0`, final iff `q ∈ F`.
pub fn nfa_of_join_irreducibles(m: &JslDfa) -> Nfa {
    let l = &m.lattice;
    let js = l.join_irreducibles();
    let mut edges = Vec::new();
    for (i, &q1) in js.iter().enumerate() {
        for (a, t) in m.trans.iter().enumerate() {
            for (k, &q2) in js.iter().enumerate() {
                if l.leq(q2, t.apply(q1)) {
                    edges.push((i, a, k));
                }
            }
        }
    }
    let inits: Vec<usize> = (0..js.len()).filter(|&i| l.leq(js[i], m.init)).collect();
    let finals: Vec<usize> = (0..js.len()).filter(|&i| m.is_final(js[i])).collect();
    Nfa::new(m.alphabet.clone(), js.len(), inits, finals, edges).expect("J(A) is well formed")
}

/// The canonical residual automaton `J(SLD(L))`.
pub fn canonical_rfsa(ds: &DerivativeSystem) -> Nfa {
    nfa_of_join_irreducibles(&sld_lattice(ds))
}
