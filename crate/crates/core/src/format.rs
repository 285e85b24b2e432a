//! Text formats for automata, lattices, morphisms, relations, monoids,
//! certificates and biclique covers. Every format is line oriented, blank lines
//! are ignored and `#` after whitespace starts a comment.

use fixedbitset::FixedBitSet;
use sha2::{Digest, Sha256};

use crate::automata::{minimize_dfa, Alphabet, Dfa, Nfa};
use crate::biclique::BicliqueCover;
use crate::bits::{bitset, BitMatrix};
use crate::certify::{Certificate, CertificateKind};
use crate::dep::Rel;
use crate::error::{Error, Result};
use crate::langalg::{syntactic_monoid, MonoidRecognizer};
use crate::semilattice::FinLattice;

/// A `#` at the start of a line or after whitespace starts a comment, so symbols
/// such as `J#0` survive.
fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_space {
            return &line[..i];
        }
        prev_space = c.is_whitespace();
    }
    line
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = strip_comment(l).trim();
                (!l.is_empty()).then_some((i + 1, l))
            })
            .collect();
        Lines { items, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.peek();
        self.pos += usize::from(item.is_some());
        item
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(1, |&(l, _)| l)
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let end = self.last_line();
        self.next().ok_or_else(|| Error::parse(end, format!("unexpected end of input, expected {what}")))
    }

    /// The next line split into a keyword and its arguments.
    fn keyword(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, text) = self.expect(&format!("`{keyword}`"))?;
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some(k) if k == keyword => Ok((line, tokens.collect())),
            _ => Err(Error::parse(line, format!("expected `{keyword}`"))),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some((line, _)) => Err(Error::parse(line, "unexpected trailing content")),
        }
    }
}

fn number(line: usize, token: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::parse(line, format!("expected a number, found `{token}`")))
}

fn numbers(line: usize, tokens: &[&str]) -> Result<Vec<usize>> {
    tokens.iter().map(|t| number(line, t)).collect()
}

fn single(line: usize, tokens: &[&str]) -> Result<usize> {
    match tokens {
        [t] => number(line, t),
        _ => Err(Error::parse(line, "expected exactly one number")),
    }
}

fn bit_row(line: usize, text: &str, cols: usize) -> Result<FixedBitSet> {
    if text.chars().count() != cols {
        return Err(Error::parse(line, format!("expected {cols} characters of 0/1")));
    }
    let mut row = FixedBitSet::with_capacity(cols);
    for (j, c) in text.chars().enumerate() {
        match c {
            '0' => {}
            '1' => row.insert(j),
            _ => return Err(Error::parse(line, format!("unexpected character `{c}`"))),
        }
    }
    Ok(row)
}

fn bit_rows(lines: &mut Lines, rows: usize, cols: usize) -> Result<BitMatrix> {
    let mut out = Vec::with_capacity(rows);
    if cols == 0 {
        return Ok(BitMatrix::new(rows, 0));
    }
    for _ in 0..rows {
        let (line, text) = lines.expect("a matrix row")?;
        out.push(bit_row(line, text, cols)?);
    }
    Ok(BitMatrix::from_rows(cols, out))
}

fn emit_bits(out: &mut String, m: &BitMatrix) {
    if m.cols() == 0 {
        return;
    }
    for i in 0..m.rows() {
        out.extend((0..m.cols()).map(|j| if m.get(i, j) { '1' } else { '0' }));
        out.push('\n');
    }
}

fn with_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    })
}

/// A parsed automaton file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Dfa(Dfa),
    Nfa(Nfa),
}

impl Automaton {
    pub fn into_nfa(self) -> Nfa {
        match self {
            Automaton::Dfa(d) => d.to_nfa(),
            Automaton::Nfa(n) => n,
        }
    }
}

pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut lines = Lines::new(text);
    let (line, kind) = lines.keyword("type")?;
    let deterministic = match kind.as_slice() {
        ["dfa"] => true,
        ["nfa"] => false,
        _ => return Err(Error::parse(line, "expected `type dfa` or `type nfa`")),
    };
    let (line, symbols) = lines.keyword("alphabet")?;
    let sigma = with_line(line, Alphabet::new(symbols.iter().copied()))?;
    let (line, n) = lines.keyword("states")?;
    let n = single(line, &n)?;
    let (init_line, inits) = lines.keyword("init")?;
    let inits = numbers(init_line, &inits)?;
    let mut finals = Vec::new();
    if matches!(lines.peek(), Some((_, t)) if t.split_whitespace().next() == Some("final")) {
        let (line, f) = lines.keyword("final")?;
        finals = numbers(line, &f)?;
        if let Some(&q) = finals.iter().find(|&&q| q >= n) {
            return Err(Error::parse(line, format!("state {q} out of range")));
        }
    }
    let mut edges = Vec::new();
    while lines.peek().is_some() {
        let (line, t) = lines.keyword("trans")?;
        let [src, sym, dst] = t.as_slice() else {
            return Err(Error::parse(line, "expected `trans <src> <sym> <dst>`"));
        };
        let (src, dst) = (number(line, src)?, number(line, dst)?);
        let a = sigma.index_of(sym).ok_or_else(|| Error::parse(line, format!("unknown symbol `{sym}`")))?;
        if src >= n || dst >= n {
            return Err(Error::parse(line, "state out of range"));
        }
        edges.push((line, src, a, dst));
    }
    if deterministic {
        let [init] = inits.as_slice() else {
            return Err(Error::parse(init_line, "a DFA has exactly one initial state"));
        };
        let mut trans = vec![vec![None; sigma.len()]; n];
        for &(line, p, a, q) in &edges {
            if trans[p][a].replace(q).is_some() {
                return Err(Error::parse(line, "duplicate transition"));
            }
        }
        let mut full = Vec::with_capacity(n);
        for (p, row) in trans.into_iter().enumerate() {
            let row: Option<Vec<usize>> = row.into_iter().collect();
            full.push(row.ok_or_else(|| Error::parse(lines.last_line(), format!("state {p} lacks a transition")))?);
        }
        Ok(Automaton::Dfa(with_line(init_line, Dfa::new(sigma, *init, finals, full))?))
    } else {
        let edges = edges.into_iter().map(|(_, p, a, q)| (p, a, q));
        Ok(Automaton::Nfa(with_line(init_line, Nfa::new(sigma, n, inits, finals, edges))?))
    }
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    match parse_automaton(text)? {
        Automaton::Dfa(d) => Ok(d),
        Automaton::Nfa(_) => Err(Error::parse(1, "expected a DFA")),
    }
}

/// Parses either kind of automaton as an NFA.
pub fn parse_nfa(text: &str) -> Result<Nfa> {
    Ok(parse_automaton(text)?.into_nfa())
}

fn join(items: impl IntoIterator<Item = impl ToString>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn header(out: &mut String, kind: &str, sigma: &Alphabet, n: usize, inits: &[usize], finals: &[usize]) {
    out.push_str(&format!("type {kind}\nalphabet {}\nstates {n}\n", sigma.symbols().join(" ")));
    out.push_str(&format!("init {}\n", join(inits)).replace(" \n", "\n"));
    out.push_str(&format!("final {}\n", join(finals)).replace(" \n", "\n"));
}

pub fn emit_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    let finals: Vec<usize> = d.finals().ones().collect();
    header(&mut out, "dfa", d.alphabet(), d.state_count(), &[d.init()], &finals);
    for q in 0..d.state_count() {
        for a in 0..d.alphabet().len() {
            out.push_str(&format!("trans {q} {} {}\n", d.alphabet().name(a), d.next(q, a)));
        }
    }
    out
}

pub fn emit_nfa(n: &Nfa) -> String {
    let mut out = String::new();
    let inits: Vec<usize> = n.inits().ones().collect();
    let finals: Vec<usize> = n.finals().ones().collect();
    header(&mut out, "nfa", n.alphabet(), n.state_count(), &inits, &finals);
    for (p, a, q) in n.edges() {
        out.push_str(&format!("trans {p} {} {q}\n", n.alphabet().name(a)));
    }
    out
}

/// `lattice <n>`, an optional `labels ...` line, then the order table.
pub fn parse_lattice(text: &str) -> Result<FinLattice> {
    let mut lines = Lines::new(text);
    let (line, n) = lines.keyword("lattice")?;
    let n = single(line, &n)?;
    let mut labels = None;
    if matches!(lines.peek(), Some((_, t)) if t.starts_with("labels")) {
        let (line, l) = lines.keyword("labels")?;
        if l.len() != n {
            return Err(Error::parse(line, format!("expected {n} labels")));
        }
        labels = Some((line, l.into_iter().map(String::from).collect::<Vec<_>>()));
    }
    let table = bit_rows(&mut lines, n, n)?;
    lines.finish()?;
    let lattice = with_line(line, FinLattice::from_leq(&table))?;
    match labels {
        Some((line, l)) => with_line(line, lattice.with_labels(l)),
        None => Ok(lattice),
    }
}

pub fn emit_lattice(s: &FinLattice) -> String {
    let mut out = format!("lattice {}\n", s.size());
    let default = s.labels().iter().enumerate().all(|(i, l)| *l == i.to_string());
    if !default && s.labels().iter().all(|l| !l.is_empty() && !l.contains(char::is_whitespace)) {
        out.push_str(&format!("labels {}\n", s.labels().join(" ")));
    }
    emit_bits(&mut out, &s.leq_matrix());
    out
}

/// A morphism file: the paths of its domain and codomain lattice files and the image of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFile {
    pub dom: String,
    pub cod: String,
    pub map: Vec<usize>,
}

pub fn parse_morphism(text: &str) -> Result<MorphismFile> {
    let mut lines = Lines::new(text);
    let (line, files) = lines.keyword("mor")?;
    let [dom, cod] = files.as_slice() else {
        return Err(Error::parse(line, "expected `mor <dom-file> <cod-file>`"));
    };
    let mut map = Vec::new();
    while let Some((line, t)) = lines.next() {
        map.extend(numbers(line, &t.split_whitespace().collect::<Vec<_>>())?);
    }
    Ok(MorphismFile { dom: dom.to_string(), cod: cod.to_string(), map })
}

pub fn emit_morphism(m: &MorphismFile) -> String {
    format!("mor {} {}\n{}\n", m.dom, m.cod, join(&m.map))
}

fn parse_rel_block(lines: &mut Lines) -> Result<Rel> {
    let (line, shape) = lines.keyword("rel")?;
    let [r, c] = shape.as_slice() else {
        return Err(Error::parse(line, "expected `rel <rows> <cols>`"));
    };
    let (rows, cols) = (number(line, r)?, number(line, c)?);
    let mut labels = |key: &str, n: usize| -> Result<Option<Vec<String>>> {
        match lines.peek() {
            Some((_, t)) if t.split_whitespace().next() == Some(key) => {
                let (line, l) = lines.keyword(key)?;
                if l.len() != n {
                    return Err(Error::parse(line, format!("expected {n} labels")));
                }
                Ok(Some(l.into_iter().map(String::from).collect()))
            }
            _ => Ok(None),
        }
    };
    let row_labels = labels("rows", rows)?;
    let col_labels = labels("cols", cols)?;
    let bits = bit_rows(lines, rows, cols)?;
    let default = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
    with_line(
        line,
        Rel::with_labels(row_labels.unwrap_or_else(|| default(rows)), col_labels.unwrap_or_else(|| default(cols)), bits),
    )
}

fn emit_rel_block(out: &mut String, r: &Rel) {
    out.push_str(&format!("rel {} {}\n", r.rows(), r.cols()));
    let plain = |l: &[String]| l.iter().enumerate().all(|(i, s)| *s == i.to_string());
    if !plain(r.row_labels()) {
        out.push_str(&format!("rows {}\n", r.row_labels().join(" ")));
    }
    if !plain(r.col_labels()) {
        out.push_str(&format!("cols {}\n", r.col_labels().join(" ")));
    }
    emit_bits(out, r.bits());
}

/// `rel <rows> <cols>`, optional `rows ...` and `cols ...` label lines, then the matrix.
/// Labels must not contain whitespace or `#`.
pub fn parse_relation(text: &str) -> Result<Rel> {
    let mut lines = Lines::new(text);
    let r = parse_rel_block(&mut lines)?;
    lines.finish()?;
    Ok(r)
}

pub fn emit_relation(r: &Rel) -> String {
    let mut out = String::new();
    emit_rel_block(&mut out, r);
    out
}

/// `monoid <n>`, the multiplication table, one `h <sym> <idx>` per letter and a `final` line.
pub fn parse_monoid(text: &str) -> Result<MonoidRecognizer> {
    let mut lines = Lines::new(text);
    let (line, n) = lines.keyword("monoid")?;
    let n = single(line, &n)?;
    let mut table = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, t) = lines.expect("a table row")?;
        let row = numbers(line, &t.split_whitespace().collect::<Vec<_>>())?;
        if row.len() != n {
            return Err(Error::parse(line, format!("expected {n} entries")));
        }
        table.push(row);
    }
    let mut symbols = Vec::new();
    let mut letters = Vec::new();
    while matches!(lines.peek(), Some((_, t)) if t.starts_with("h ")) {
        let (line, h) = lines.keyword("h")?;
        let [sym, idx] = h.as_slice() else {
            return Err(Error::parse(line, "expected `h <sym> <idx>`"));
        };
        symbols.push(sym.to_string());
        letters.push(number(line, idx)?);
    }
    let (fline, f) = lines.keyword("final")?;
    let finals = numbers(fline, &f)?;
    lines.finish()?;
    let sigma = with_line(fline, Alphabet::new(symbols))?;
    with_line(fline, MonoidRecognizer::new(sigma, table, letters, finals))
}

pub fn emit_monoid(m: &MonoidRecognizer) -> String {
    let mut out = format!("monoid {}\n", m.size());
    for row in m.table() {
        out.push_str(&join(row));
        out.push('\n');
    }
    for a in 0..m.alphabet().len() {
        out.push_str(&format!("h {} {}\n", m.alphabet().name(a), m.letter(a)));
    }
    out.push_str(&format!("final {}\n", join(m.finals().ones())).replace(" \n", "\n"));
    out
}

/// A certificate with its bound and the digest of the instance it refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFile {
    pub certificate: Certificate,
    pub k: usize,
    pub instance: String,
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile> {
    let mut lines = Lines::new(text);
    let (line, kind) = lines.expect("`atomic` or `subatomic`")?;
    let kind = match kind {
        "atomic" => CertificateKind::Atomic,
        "subatomic" => CertificateKind::Subatomic,
        _ => return Err(Error::parse(line, "expected `atomic` or `subatomic`")),
    };
    let (line, k) = lines.keyword("k")?;
    let k = single(line, &k)?;
    let (line, inst) = lines.keyword("instance")?;
    let [instance] = inst.as_slice() else {
        return Err(Error::parse(line, "expected `instance <digest>`"));
    };
    lines.keyword("S")?;
    let s = parse_rel_block(&mut lines)?;
    lines.keyword("P")?;
    let p = parse_rel_block(&mut lines)?.bits().clone();
    lines.keyword("Q")?;
    let q = parse_rel_block(&mut lines)?.bits().clone();
    let mut t = Vec::new();
    let mut symbols = Vec::new();
    while lines.peek().is_some() {
        let (line, sym) = lines.keyword("T")?;
        let [sym] = sym.as_slice() else {
            return Err(Error::parse(line, "expected `T <sym>`"));
        };
        symbols.push((line, sym.to_string()));
        t.push(parse_rel_block(&mut lines)?.bits().clone());
    }
    if let Some((line, _)) = symbols.first() {
        with_line(*line, Alphabet::new(symbols.iter().map(|(_, s)| s.clone())))?;
    }
    Ok(CertificateFile { certificate: Certificate { kind, s, p, q, t }, k, instance: instance.to_string() })
}

/// Emits a certificate; `alphabet` names the `T` blocks.
pub fn emit_certificate(c: &CertificateFile, alphabet: &Alphabet) -> String {
    let cert = &c.certificate;
    let mut out = format!("{}\nk {}\ninstance {}\nS\n", cert.kind.name(), c.k, c.instance);
    emit_rel_block(&mut out, &cert.s);
    out.push_str("P\n");
    emit_rel_block(&mut out, &Rel::new(cert.p.clone()));
    out.push_str("Q\n");
    emit_rel_block(&mut out, &Rel::new(cert.q.clone()));
    for (a, t) in cert.t.iter().enumerate() {
        out.push_str(&format!("T {}\n", alphabet.name(a)));
        emit_rel_block(&mut out, &Rel::new(t.clone()));
    }
    out
}

/// The symbols named by the `T` blocks of a certificate file.
pub fn certificate_symbols(text: &str) -> Vec<String> {
    Lines::new(text)
        .items
        .iter()
        .filter_map(|(_, l)| l.strip_prefix("T ").map(|s| s.trim().to_string()))
        .collect()
}

/// Hex SHA-256 of a file's text.
pub fn text_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Digest of the minimal DFAs of a reverse pair, fixing the index order a certificate refers to.
pub fn dfa_pair_digest(a: &Dfa, b: &Dfa) -> String {
    text_digest(&(emit_dfa(&minimize_dfa(a)) + &emit_dfa(&minimize_dfa(b))))
}

/// Digest of the syntactic monoid of the recognized language.
pub fn monoid_digest(m: &MonoidRecognizer) -> String {
    text_digest(&emit_monoid(&syntactic_monoid(&m.as_dfa())))
}

/// One `rows: i j … | cols: p q …` line per biclique.
pub fn parse_cover(text: &str, rows: usize, cols: usize) -> Result<BicliqueCover> {
    let mut bicliques = Vec::new();
    for (line, l) in Lines::new(text).items {
        let parse_side = |part: &str, key: &str, n: usize| -> Result<FixedBitSet> {
            let rest = part
                .trim()
                .strip_prefix(key)
                .ok_or_else(|| Error::parse(line, format!("expected `{key}`")))?;
            let items = numbers(line, &rest.split_whitespace().collect::<Vec<_>>())?;
            if let Some(x) = items.iter().find(|&&x| x >= n) {
                return Err(Error::parse(line, format!("index {x} out of range")));
            }
            Ok(bitset(n, items))
        };
        let (r, c) = l.split_once('|').ok_or_else(|| Error::parse(line, "expected `rows: … | cols: …`"))?;
        bicliques.push((parse_side(r, "rows:", rows)?, parse_side(c, "cols:", cols)?));
    }
    Ok(BicliqueCover { bicliques })
}

pub fn emit_cover(c: &BicliqueCover) -> String {
    c.bicliques
        .iter()
        .map(|(r, c)| format!("rows: {} | cols: {}\n", join(r.ones()), join(c.ones())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfa_round_trip() {
        let text = "# a*b\ntype dfa\nalphabet a b\nstates 3\ninit 0\nfinal 1\ntrans 0 a 0\ntrans 0 b 1\ntrans 1 a 2\ntrans 1 b 2\ntrans 2 a 2\ntrans 2 b 2\n";
        let d = parse_dfa(text).unwrap();
        assert_eq!(emit_dfa(&d), text.trim_start_matches("# a*b\n"));
        assert_eq!(parse_dfa(&emit_dfa(&d)).unwrap(), d);
    }

    #[test]
    fn errors_carry_lines() {
        let err = parse_dfa("type dfa\nalphabet a\nstates 1\ninit 0\nfinal\ntrans 0 c 0\n").unwrap_err();
        assert_eq!(err, Error::parse(6, "unknown symbol `c`"));
        assert!(matches!(parse_dfa("type dfa\nalphabet\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_relation("rel 1 2\n02\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn relation_and_cover_round_trip() {
        let r = parse_relation("rel 2 2\nrows x y\n11\n01\n").unwrap();
        assert_eq!(r.row_labels(), ["x", "y"]);
        assert_eq!(parse_relation(&emit_relation(&r)).unwrap(), r);
        let c = parse_cover("rows: 0 | cols: 0 1\nrows: 0 1 | cols: 1\n", 2, 2).unwrap();
        assert_eq!(parse_cover(&emit_cover(&c), 2, 2).unwrap(), c);
    }
}
