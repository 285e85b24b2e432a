//! `atomata`: analyses, certificates, reductions and oracles on small regular languages.
//!
//! Reports are `key: value` lines on stdout. Exit status: 0 success, 1 a negative
//! answer, 2 bad input, 3 budget exhausted.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atomata::biclique::{exact_dim_with_budget, DEFAULT_DIM_BUDGET};
use atomata::certify::{
    certificate_to_nfa, extract_certificate, extract_subatomic_certificate, instance_paths, na_oracle, nmu_oracle,
    verify_diagram, CertificateKind, DEFAULT_ORACLE_BUDGET,
};
use atomata::format::{
    dfa_pair_digest, emit_certificate, emit_cover, emit_dfa, emit_monoid, emit_relation, monoid_digest,
    parse_automaton, parse_certificate, parse_dfa, parse_monoid, parse_relation, text_digest, CertificateFile,
};
use atomata::langalg::{derivative_system, lower_path, sld_lattice, syntactic_monoid, DerivativeSystem};
use atomata::ns::{ns_bruteforce, DEFAULT_NS_BUDGET};
use atomata::speclang::{is_bideterministic, is_group_language, is_nuclear, is_unary, lattice_language_instance, nuclear_ns};
use atomata::{Dfa, Error};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "atomata", version, about = "Atomic and subatomic NFA tools for small regular languages")]
struct Cli {
    /// Upper bound for exact searches.
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized work; every current verb is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for written files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural report on the language of a reverse pair of DFAs.
    Analyze { a: PathBuf, b: PathBuf },
    /// Build or check certificates.
    Certify {
        #[command(subcommand)]
        action: CertifyAction,
    },
    /// Lattice-language reduction of a relation.
    Reduce { rel: PathBuf, k: usize },
    /// Bipartite dimension of a relation with a witness cover.
    Dim { rel: PathBuf, kmax: Option<usize> },
    /// Exact nondeterministic state complexities.
    Oracle {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        kind: OracleKind,
    },
}

#[derive(Subcommand, Debug)]
enum CertifyAction {
    /// Verify a certificate: `A B CERT` for atomic, `MONOID CERT` for subatomic.
    Verify {
        #[arg(num_args = 2..=3, required = true)]
        files: Vec<PathBuf>,
    },
    /// Extract a certificate from an NFA for the language of `A`.
    Build {
        nfa: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Atomic)]
        kind: Kind,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Atomic,
    Subatomic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Ns,
    Na,
    Nmu,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: Error },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Lib(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::BudgetExceeded { .. }) => 3,
            CliError::Lib(Error::NotAtomic | Error::NotSubatomic | Error::LanguageMismatch | Error::NotNuclear) => 1,
            _ => 2,
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

/// A finished run: the report and whether the answer was positive.
struct Outcome {
    report: String,
    positive: bool,
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> atomata::Result<T>) -> Res<T> {
    parse(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn write(dir: &Path, name: &str, text: &str) -> Res<PathBuf> {
    let path = dir.join(name);
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(&path, text))
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(path)
}

fn pair(a: &Path, b: &Path) -> Res<(Dfa, Dfa, DerivativeSystem)> {
    let (da, db) = (load(a, parse_dfa)?, load(b, parse_dfa)?);
    let ds = derivative_system(&da, &db)?;
    Ok((da, db, ds))
}

/// Renders an optional search result, turning budget exhaustion into bounds.
fn bounded(r: atomata::Result<Option<usize>>, kmax: usize) -> String {
    match r {
        Ok(Some(v)) => v.to_string(),
        Ok(None) => format!("> {kmax}"),
        Err(Error::BudgetExceeded { lower, upper }) => match upper {
            Some(u) => format!("budget exceeded (between {lower} and {u})"),
            None => format!("budget exceeded (at least {lower})"),
        },
        Err(e) => format!("error ({e})"),
    }
}

fn analyze(cli: &Cli, a: &Path, b: &Path) -> Res<Outcome> {
    let (da, _, ds) = pair(a, b)?;
    let lp = lower_path(&ds);
    let syn = syntactic_monoid(ds.lang_dfa());
    let sld = sld_lattice(&ds);
    let kmax = cli.kmax.unwrap_or(ds.class_count());
    let dim = exact_dim_with_budget(&lp.object, kmax, cli.budget.unwrap_or(DEFAULT_DIM_BUDGET)).map(|c| c.map(|c| c.len()));
    let budget = cli.budget.unwrap_or(DEFAULT_ORACLE_BUDGET);
    let mut r = String::new();
    let _ = writeln!(r, "states: {}", ds.lang_dfa().state_count());
    let _ = writeln!(r, "reverse_states: {}", ds.rev_dfa().state_count());
    let _ = writeln!(r, "syn_size: {}", syn.size());
    let _ = writeln!(r, "sld_size: {}", sld.lattice().size());
    let _ = writeln!(r, "sld_distributive: {}", sld.lattice().is_distributive());
    let _ = writeln!(r, "dim: {}", bounded(dim, kmax));
    let _ = writeln!(r, "nuclear: {}", is_nuclear(&ds));
    let _ = writeln!(r, "group: {}", is_group_language(&syn));
    let _ = writeln!(r, "unary: {}", is_unary(&da));
    let _ = writeln!(r, "bideterministic: {}", is_bideterministic(&da));
    let _ = writeln!(r, "na: {}", bounded(na_oracle(ds.lang_dfa(), ds.rev_dfa(), kmax, budget), kmax));
    let _ = writeln!(r, "nmu: {}", bounded(nmu_oracle(&syn, kmax, budget), kmax));
    Ok(Outcome { report: r, positive: true })
}

fn certify_verify(files: &[PathBuf]) -> Res<Outcome> {
    let (cert_path, instance) = files.split_last().expect("clap requires at least two files");
    let file = load(cert_path, parse_certificate)?;
    let kind = file.certificate.kind;
    let (ds, digest) = match (kind, instance) {
        (CertificateKind::Atomic, [a, b]) => {
            let (da, db, ds) = pair(a, b)?;
            (ds, dfa_pair_digest(&da, &db))
        }
        (CertificateKind::Subatomic, [m]) => {
            let m = load(m, parse_monoid)?;
            (m.derivative_system(), monoid_digest(&m))
        }
        (CertificateKind::Atomic, _) => return Err(CliError::Input("an atomic certificate needs two DFA files".into())),
        (CertificateKind::Subatomic, _) => {
            return Err(CliError::Input("a subatomic certificate needs one monoid file".into()))
        }
    };
    if digest != file.instance {
        return Err(CliError::Input(format!("certificate refers to instance {}, got {digest}", file.instance)));
    }
    let (lower, upper) = instance_paths(&ds, kind);
    let valid = verify_diagram(&lower, &upper, &file.certificate, file.k)?;
    let mut r = format!("kind: {}\nk: {}\nvalid: {valid}\n", kind.name(), file.k);
    if valid {
        let n = certificate_to_nfa(&file.certificate, &lower, &upper)?;
        let _ = writeln!(r, "nfa_states: {}", n.state_count());
    }
    Ok(Outcome { report: r, positive: valid })
}

fn certify_build(cli: &Cli, nfa: &Path, a: &Path, b: &Path, kind: Kind) -> Res<Outcome> {
    let n = load(nfa, parse_automaton)?.into_nfa();
    let (da, db, ds) = pair(a, b)?;
    let alphabet = ds.alphabet().clone();
    let mut monoid = None;
    let (certificate, instance) = match kind {
        Kind::Atomic => (extract_certificate(&n, &da, &db)?, dfa_pair_digest(&da, &db)),
        Kind::Subatomic => {
            let m = syntactic_monoid(&da);
            let c = extract_subatomic_certificate(&n, &m)?;
            let digest = monoid_digest(&m);
            monoid = Some(m);
            (c, digest)
        }
    };
    let file = CertificateFile { certificate, k: n.state_count(), instance };
    let text = emit_certificate(&file, &alphabet);
    let mut r = format!("kind: {}\nk: {}\n", file.certificate.kind.name(), file.k);
    match &cli.out {
        Some(dir) => {
            let path = write(dir, "certificate.cert", &text)?;
            let _ = writeln!(r, "written: {}", path.display());
            // a subatomic certificate is checked against the monoid it refers to
            if let Some(m) = &monoid {
                let path = write(dir, "instance.mon", &emit_monoid(m))?;
                let _ = writeln!(r, "monoid: {}", path.display());
            }
        }
        None => r.push_str(&text),
    }
    Ok(Outcome { report: r, positive: true })
}

fn reduce(cli: &Cli, rel: &Path, k: usize) -> Res<Outcome> {
    let r = load(rel, parse_relation)?;
    let inst = lattice_language_instance(&r, k)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let files = [
        ("dfa_l", "dfa_l.dfa", emit_dfa(&inst.dfa_l)),
        ("dfa_rl", "dfa_rl.dfa", emit_dfa(&inst.dfa_rl)),
        ("monoid", "monoid.mon", emit_monoid(&inst.monoid)),
        ("relation", "source.rel", emit_relation(&inst.source_rel)),
    ];
    let mut manifest = format!("k {k}\n");
    let mut report = format!("k: {k}\nlattice_size: {}\n", inst.lattice.size());
    for (key, name, text) in &files {
        write(&dir, name, text)?;
        let _ = writeln!(manifest, "{key} {name} {}", text_digest(text));
        let _ = writeln!(report, "{key}: {}", dir.join(name).display());
    }
    let _ = writeln!(manifest, "atomic_instance {}", dfa_pair_digest(&inst.dfa_l, &inst.dfa_rl));
    let _ = writeln!(manifest, "subatomic_instance {}", monoid_digest(&inst.monoid));
    let path = write(&dir, "manifest", &manifest)?;
    let _ = writeln!(report, "manifest: {}", path.display());
    Ok(Outcome { report, positive: true })
}

fn dim(cli: &Cli, rel: &Path, kmax: Option<usize>) -> Res<Outcome> {
    let r = load(rel, parse_relation)?;
    let kmax = kmax.or(cli.kmax).unwrap_or(r.rows().min(r.cols()));
    match exact_dim_with_budget(&r, kmax, cli.budget.unwrap_or(DEFAULT_DIM_BUDGET))? {
        Some(c) => {
            let mut report = format!("dim: {}\n", c.len());
            for line in emit_cover(&c).lines() {
                let _ = writeln!(report, "biclique: {line}");
            }
            if let Some(dir) = &cli.out {
                let path = write(dir, "cover.txt", &emit_cover(&c))?;
                let _ = writeln!(report, "written: {}", path.display());
            }
            Ok(Outcome { report, positive: true })
        }
        None => Ok(Outcome { report: format!("dim: > {kmax}\n"), positive: false }),
    }
}

fn oracle(cli: &Cli, a: &Path, b: &Path, kind: OracleKind) -> Res<Outcome> {
    let (_, _, ds) = pair(a, b)?;
    let value = match kind {
        OracleKind::Ns => {
            // the minimal DFA is itself an NFA
            let states = ds.lang_dfa().state_count();
            let kmax = cli.kmax.unwrap_or(states);
            let v = if is_nuclear(&ds) {
                nuclear_ns(&ds, kmax)?.map(|(k, _)| k)
            } else {
                ns_bruteforce(ds.lang_dfa(), kmax, cli.budget.unwrap_or(DEFAULT_NS_BUDGET)).map_err(|e| match e {
                    Error::BudgetExceeded { lower, upper: None } => {
                        Error::BudgetExceeded { lower, upper: (states <= kmax).then_some(states) }
                    }
                    e => e,
                })?
            };
            (v, kmax)
        }
        OracleKind::Na | OracleKind::Nmu => {
            // the atomaton bounds both from above
            let kmax = cli.kmax.unwrap_or(ds.class_count());
            let budget = cli.budget.unwrap_or(DEFAULT_ORACLE_BUDGET);
            let v = if kind == OracleKind::Na {
                na_oracle(ds.lang_dfa(), ds.rev_dfa(), kmax, budget)?
            } else {
                nmu_oracle(&syntactic_monoid(ds.lang_dfa()), kmax, budget)?
            };
            (v, kmax)
        }
    };
    let name = format!("{kind:?}").to_lowercase();
    Ok(match value {
        (Some(v), _) => Outcome { report: format!("kind: {name}\nvalue: {v}\n"), positive: true },
        (None, kmax) => Outcome { report: format!("kind: {name}\nvalue: > {kmax}\n"), positive: false },
    })
}

fn run(cli: &Cli) -> Res<Outcome> {
    match &cli.command {
        Command::Analyze { a, b } => analyze(cli, a, b),
        Command::Certify { action: CertifyAction::Verify { files } } => certify_verify(files),
        Command::Certify { action: CertifyAction::Build { nfa, a, b, kind } } => certify_build(cli, nfa, a, b, *kind),
        Command::Reduce { rel, k } => reduce(cli, rel, *k),
        Command::Dim { rel, kmax } => dim(cli, rel, *kmax),
        Command::Oracle { a, b, kind } => oracle(cli, a, b, *kind),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.report);
            ExitCode::from(if o.positive { 0 } else { 1 })
        }
        Err(e) => {
            if let CliError::Lib(Error::BudgetExceeded { lower, upper }) = &e {
                println!("budget_exceeded: true\nlower: {lower}");
                if let Some(u) = upper {
                    println!("upper: {u}");
                }
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
