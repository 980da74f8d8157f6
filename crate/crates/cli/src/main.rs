//! Batch front end: net files in, analyses out.
//!
//! Exit codes: 0 on success, 1 when a computation fails on valid input (a
//! disabled transition, a blown cap, a refuted check), 2 on usage and file
//! errors.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polynet::circuit::parse_circuit;
use polynet::dot::render_dot;
use polynet::netfile::{parse_net, FileError, NetFile};
use polynet_core::net::{equiv_class, equivalent, reach, NetError, ReachLimits};
use polynet_core::poly2::{
    lift_path, pi_path, relation_instances, relations_sound, sigma2, sigma2_extended, Poly2Error,
};
use polynet_core::poly3::{
    eckmann_hilton_probe, nr, sigma3, to_step, to_triple, Composite, Poly3Error, TriplePath,
};
use polynet_core::rewrite::{
    bar_polygraph, complete_rules, normalize, RewriteError, WINDOW_SLICES, WINDOW_WIRES,
};
use polynet_core::rws::{iso_check, phi, psi};
use polynet_core::slice::{exchange_class, CellBounds};
use polynet_core::{Multiset, NetPath, ReductionStep, RuleTable, Symbol};

#[derive(Parser)]
#[command(
    name = "polynet",
    version,
    about = "Place/transition nets and their word- and wire-level presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a net file and print it back in canonical form
    Show { file: PathBuf },
    /// Fire a transition sequence from a named marking
    Fire {
        file: PathBuf,
        /// Marking to start from
        #[arg(long)]
        marking: String,
        /// Comma-separated transition names
        #[arg(long)]
        seq: String,
    },
    /// Explore the reduction graph from a named marking
    Reach {
        file: PathBuf,
        #[arg(long)]
        marking: String,
        /// Stop expanding past this many firings from the start
        #[arg(long, default_value_t = 64)]
        max_depth: usize,
        /// Keep at most this many distinct markings
        #[arg(long, default_value_t = 65536)]
        max_states: usize,
        /// Also write the graph as a DOT file
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide whether two firing sequences are congruent
    Equiv {
        file: PathBuf,
        #[arg(long)]
        marking: String,
        #[arg(long)]
        seq1: String,
        #[arg(long)]
        seq2: String,
        /// Abandon the class search past this many paths
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// List the congruence class of a firing sequence
    Class {
        file: PathBuf,
        #[arg(long)]
        marking: String,
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Print an equivalent presentation of the net
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Presentation,
    },
    /// Lift a firing sequence to a wire diagram
    Lift {
        file: PathBuf,
        #[arg(long)]
        marking: String,
        #[arg(long)]
        seq: String,
    },
    /// Project a wire diagram back to a firing sequence
    Pi {
        file: PathBuf,
        /// Circuit file: a start word, then one 'LEFT | CELL | RIGHT' per line
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Rewrite a duplication-calculus circuit to its normal form
    Normalize {
        file: PathBuf,
        #[arg(long)]
        circuit: PathBuf,
        /// Rewrite-step budget
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
    /// Run one of the built-in verification suites over the net
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        thm: Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Presentation {
    /// Commutative word rewriting system
    Comm,
    /// Crossing calculus with explicit permutations
    Poly2,
    /// Single-object wire calculus
    Poly3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Net/rewriting translations invert each other
    Comm,
    /// Word-level lifts, projections, and relation soundness
    #[value(name = "2d")]
    TwoD,
    /// Multiset-level collapse and class transport
    #[value(name = "3d")]
    ThreeD,
    /// Interchange forces one commutative operation
    Eh,
}

enum CliError {
    File(PathBuf, FileError),
    Io(PathBuf, std::io::Error),
    Net(NetError),
    Poly2(Poly2Error),
    Poly3(Poly3Error),
    Rewrite(RewriteError),
    NoMarking(String),
    NoTransition(String),
    /// A verification suite found a counterexample.
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::File(_, _) | CliError::Io(_, _) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::File(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Net(e) => write!(f, "{e}"),
            CliError::Poly2(e) => write!(f, "{e}"),
            CliError::Poly3(e) => write!(f, "{e}"),
            CliError::Rewrite(e) => write!(f, "{e}"),
            CliError::NoMarking(name) => write!(f, "no marking named '{name}'"),
            CliError::NoTransition(name) => write!(f, "no transition named '{name}'"),
            CliError::Failed(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<NetError> for CliError {
    fn from(e: NetError) -> Self {
        CliError::Net(e)
    }
}

impl From<Poly2Error> for CliError {
    fn from(e: Poly2Error) -> Self {
        CliError::Poly2(e)
    }
}

impl From<Poly3Error> for CliError {
    fn from(e: Poly3Error) -> Self {
        CliError::Poly3(e)
    }
}

impl From<RewriteError> for CliError {
    fn from(e: RewriteError) -> Self {
        CliError::Rewrite(e)
    }
}

fn main() -> ExitCode {
    // Restore the default SIGPIPE disposition so `polynet reach ... | head`
    // ends quietly instead of panicking when the reader goes away.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Show { file } => {
            let file = load(&file)?;
            print!("{}", file.render());
            Ok(())
        }
        Command::Fire { file, marking, seq } => {
            let file = load(&file)?;
            let path = replay(&file, &marking, &seq)?;
            print_path(&file.net, &path);
            Ok(())
        }
        Command::Reach {
            file,
            marking,
            max_depth,
            max_states,
            dot,
        } => {
            let file = load(&file)?;
            let start = marking_of(&file, &marking)?;
            let limits = ReachLimits {
                max_depth,
                max_states,
            };
            let graph = reach(&file.net, &start, limits);
            let suffix = if graph.truncated { " (truncated)" } else { "" };
            println!(
                "{} markings, {} arrows{}",
                graph.node_count(),
                graph.arc_count(),
                suffix
            );
            for node in &graph.nodes {
                println!("{}", node.render(file.net.places()));
            }
            if let Some(path) = dot {
                fs::write(&path, render_dot(&file.net, &graph))
                    .map_err(|e| CliError::Io(path.clone(), e))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Equiv {
            file,
            marking,
            seq1,
            seq2,
            cap,
        } => {
            let file = load(&file)?;
            let p = replay(&file, &marking, &seq1)?;
            let q = replay(&file, &marking, &seq2)?;
            if equivalent(&file.net, &p, &q, cap)? {
                println!("equivalent");
            } else {
                println!("not equivalent");
            }
            Ok(())
        }
        Command::Class {
            file,
            marking,
            seq,
            cap,
        } => {
            let file = load(&file)?;
            let path = replay(&file, &marking, &seq)?;
            let class = equiv_class(&file.net, &path, cap)?;
            println!("class size {}", class.len());
            let mut lines: Vec<String> = class
                .iter()
                .map(|p| {
                    let names: Vec<&str> = p
                        .labels()
                        .into_iter()
                        .map(|t| file.net.rules().name(t))
                        .collect();
                    names.join(",")
                })
                .collect();
            lines.sort();
            for line in lines {
                println!("  {line}");
            }
            Ok(())
        }
        Command::Translate { file, to } => {
            let file = load(&file)?;
            print!("{}", translate(&file, to)?);
            Ok(())
        }
        Command::Lift { file, marking, seq } => {
            let file = load(&file)?;
            let path = replay(&file, &marking, &seq)?;
            let rws = phi(&file.net);
            let poly = sigma2(&rws);
            let arrow = lift_path(&poly, &path)?;
            println!("{}", arrow.render(&poly, poly.one_cells()));
            if pi_path(&poly, &arrow)? == path {
                // A comment line, so the output is still a loadable circuit.
                println!("# pi round-trip: ok");
                Ok(())
            } else {
                Err(CliError::Failed(String::from(
                    "projection does not return the lifted sequence",
                )))
            }
        }
        Command::Pi { file, circuit } => {
            let file = load(&file)?;
            let text = read(&circuit)?;
            let rws = phi(&file.net);
            let poly = sigma2_extended(&rws);
            let arrow = parse_circuit(&poly, poly.one_cells(), poly.cells(), &text)
                .map_err(|e| CliError::File(circuit.clone(), e))?;
            let path = pi_path(&poly, &arrow)?;
            print_path(&rws, &path);
            Ok(())
        }
        Command::Normalize {
            file,
            circuit,
            fuel,
        } => {
            let file = load(&file)?;
            let text = read(&circuit)?;
            let rws = phi(&file.net);
            let poly = bar_polygraph(&rws)?;
            let arrow = parse_circuit(&poly, poly.one_cells(), poly.cells(), &text)
                .map_err(|e| CliError::File(circuit.clone(), e))?;
            let rules = complete_rules(&poly, WINDOW_SLICES, WINDOW_WIRES, fuel)?;
            let nf = normalize(&poly, &rules, &arrow, fuel)?;
            println!("# {} slices -> {} slices", arrow.len(), nf.len());
            println!("{}", nf.render(&poly, poly.one_cells()));
            Ok(())
        }
        Command::Check { file, thm } => {
            let file = load(&file)?;
            match thm {
                Suite::Comm => check_comm(&file),
                Suite::TwoD => check_2d(&file),
                Suite::ThreeD => check_3d(&file),
                Suite::Eh => check_eh(&file),
            }
        }
    }
}

fn load(path: &Path) -> Result<NetFile, CliError> {
    let text = read(path)?;
    parse_net(&text).map_err(|e| CliError::File(path.to_owned(), e))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn marking_of(file: &NetFile, name: &str) -> Result<Multiset, CliError> {
    file.marking(name)
        .cloned()
        .ok_or_else(|| CliError::NoMarking(String::from(name)))
}

/// Replay a comma-separated transition sequence from a named marking;
/// contexts are inferred step by step.
fn replay(file: &NetFile, marking: &str, seq: &str) -> Result<NetPath, CliError> {
    let start = marking_of(file, marking)?;
    let mut rules: Vec<Symbol> = Vec::new();
    for part in seq.split(',') {
        let name = part.trim();
        if name.is_empty() {
            continue;
        }
        let rule = file
            .net
            .rules()
            .lookup(name)
            .ok_or_else(|| CliError::NoTransition(String::from(name)))?;
        rules.push(rule);
    }
    NetPath::replay(&file.net, start, &rules).map_err(|e| match e {
        NetError::NotEnabled { rule, missing } => CliError::Failed(format!(
            "transition '{}' is not enabled: missing {}",
            file.net.rules().name(rule),
            missing.render(file.net.places()),
        )),
        other => CliError::Net(other),
    })
}

fn print_path<T: RuleTable>(table: &T, path: &NetPath) {
    let places = table.places();
    let markings = path.markings(table);
    println!("{}", markings[0].render(places));
    for (i, step) in path.steps.iter().enumerate() {
        println!(
            "  {} @ {} -> {}",
            table.rules().name(step.rule),
            step.context.render(places),
            markings[i + 1].render(places),
        );
    }
}

fn translate(file: &NetFile, to: Presentation) -> Result<String, CliError> {
    let rws = phi(&file.net);
    let places = rws.places();
    let mut out = String::new();
    match to {
        Presentation::Comm => {
            for name in places.names() {
                out.push_str(&format!("letter {name}\n"));
            }
            for r in rws.rules().symbols() {
                out.push_str(&format!(
                    "rule {} : {} -> {}\n",
                    rws.rules().name(r),
                    rws.rule_source(r).render(places),
                    rws.rule_target(r).render(places),
                ));
            }
        }
        Presentation::Poly2 => {
            let poly = sigma2(&rws);
            for name in places.names() {
                out.push_str(&format!("wire {name}\n"));
            }
            for cell in poly.cells() {
                out.push_str(&format!(
                    "cell {} : {} -> {}\n",
                    poly.cell_name(&cell),
                    poly.cell_source(&cell).render(places),
                    poly.cell_target(&cell).render(places),
                ));
            }
        }
        Presentation::Poly3 => {
            let tp = sigma3(&rws);
            out.push_str("# one 0-cell, no 1-cells\n");
            for name in tp.two_cells().names() {
                out.push_str(&format!("2-cell {name}\n"));
            }
            for r in tp.three_cells().symbols() {
                out.push_str(&format!(
                    "3-cell {} : {} -> {}\n",
                    tp.three_cells().name(r),
                    tp.rule_source(r).render(tp.two_cells()),
                    tp.rule_target(r).render(tp.two_cells()),
                ));
            }
        }
    }
    Ok(out)
}

/// The markings the check suites run from: the file's own, or the empty
/// marking when none are declared.
fn suite_markings(file: &NetFile) -> Vec<(String, Multiset)> {
    if file.markings.is_empty() {
        vec![(String::from("0"), Multiset::zero())]
    } else {
        file.markings.clone()
    }
}

/// All paths from `start` of length at most `depth`, capped.
fn enumerate_paths<T: RuleTable>(
    table: &T,
    start: &Multiset,
    depth: usize,
    cap: usize,
) -> Vec<NetPath> {
    let mut out = vec![NetPath::empty(start.clone())];
    let mut frontier = out.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            let end = p.end(table);
            for rule in table.rules().symbols() {
                if table.rule_source(rule).leq(&end) {
                    let context = end
                        .sub(table.rule_source(rule))
                        .expect("source fits, so the difference exists");
                    let mut q = p.clone();
                    q.steps.push(ReductionStep { context, rule });
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if out.len() >= cap {
            out.truncate(cap);
            break;
        }
    }
    out
}

fn check_comm(file: &NetFile) -> Result<(), CliError> {
    let rws = phi(&file.net);
    if psi(&rws) != file.net {
        return Err(CliError::Failed(String::from(
            "net -> system -> net is not the identity",
        )));
    }
    if phi(&psi(&rws)) != rws {
        return Err(CliError::Failed(String::from(
            "system -> net -> system is not the identity",
        )));
    }
    println!("ok: the two translations invert each other");
    let limits = ReachLimits {
        max_depth: 4,
        max_states: 4096,
    };
    for (name, m) in suite_markings(file) {
        let report = iso_check(&file.net, &m, limits);
        if !report.is_clean() {
            return Err(CliError::Failed(format!(
                "reduction graphs diverge from {name}: {}",
                report.mismatches[0]
            )));
        }
        println!(
            "ok: graphs from {name} agree ({} markings, {} arrows, {} squares)",
            report.nodes, report.arcs, report.squares
        );
    }
    Ok(())
}

fn check_2d(file: &NetFile) -> Result<(), CliError> {
    let rws = phi(&file.net);
    let base = sigma2(&rws);
    let extended = sigma2_extended(&rws);

    let instances = relation_instances(&extended);
    for instance in &instances {
        if !relations_sound(&extended, instance, 100_000)? {
            return Err(CliError::Failed(format!(
                "a {:?} instance projects to non-congruent paths",
                instance.family
            )));
        }
    }
    println!(
        "ok: {} relation instances project to congruent paths",
        instances.len()
    );

    let mut lifted = 0usize;
    let mut exchanged = 0usize;
    for (name, m) in suite_markings(file) {
        let paths = enumerate_paths(&rws, &m, 3, 200);
        for path in &paths {
            let arrow = lift_path(&base, path)?;
            if &pi_path(&base, &arrow)? != path {
                return Err(CliError::Failed(format!(
                    "a lift from {name} does not project back"
                )));
            }
            lifted += 1;
        }
        // Interchange soundness: slicings of one class project to
        // congruent firing sequences.
        for path in paths.iter().take(25) {
            let arrow = lift_path(&base, path)?;
            let class = exchange_class(&base, &arrow, 10_000).map_err(Poly2Error::from)?;
            for member in class.iter().take(25) {
                if !equivalent(&rws, &pi_path(&base, member)?, path, 100_000)? {
                    return Err(CliError::Failed(format!(
                        "an interchange move from {name} broke congruence"
                    )));
                }
                exchanged += 1;
            }
        }
    }
    println!("ok: {lifted} firing sequences lift and project back");
    println!("ok: {exchanged} interchanged slicings stay congruent");
    Ok(())
}

fn check_3d(file: &NetFile) -> Result<(), CliError> {
    let rws = phi(&file.net);
    let tp = sigma3(&rws);
    if nr(&tp)? != rws || sigma3(&nr(&tp)?) != tp {
        return Err(CliError::Failed(String::from(
            "the multiset collapse is not exact",
        )));
    }
    println!("ok: the collapse and its inverse are exact");

    let limits = ReachLimits {
        max_depth: 4,
        max_states: 4096,
    };
    let mut arcs = 0usize;
    let mut classes = 0usize;
    for (name, m) in suite_markings(file) {
        let graph = reach(&rws, &m, limits);
        for arc in &graph.arcs {
            let triple = to_triple(&tp, &arc.step)?;
            if to_step(&tp, &triple)? != arc.step {
                return Err(CliError::Failed(format!(
                    "a step from {name} does not survive the triple form"
                )));
            }
            arcs += 1;
        }
        for path in enumerate_paths(&rws, &m, 3, 200) {
            let back = TriplePath::from_net_path(&tp, &path)?.to_net_path(&tp)?;
            if back != path {
                return Err(CliError::Failed(format!(
                    "a path from {name} does not survive the triple form"
                )));
            }
            let a = equiv_class(&rws, &path, 10_000)?.len();
            let b = equiv_class(&tp, &path, 10_000)?.len();
            if a != b {
                return Err(CliError::Failed(format!(
                    "a congruence class from {name} changed size in the collapse"
                )));
            }
            classes += 1;
        }
    }
    println!("ok: {arcs} arrows round-trip through triples");
    println!("ok: {classes} congruence classes transport with equal size");
    Ok(())
}

fn check_eh(file: &NetFile) -> Result<(), CliError> {
    let rws = phi(&file.net);
    let mut pool: Vec<Multiset> = vec![Multiset::zero()];
    for p in rws.places().symbols() {
        pool.push(Multiset::singleton(p, 1));
        pool.push(Multiset::singleton(p, 2));
    }
    for r in rws.rules().symbols() {
        pool.push(rws.rule_source(r).clone());
        pool.push(rws.rule_target(r).clone());
    }

    let mut probes = 0usize;
    for a in &pool {
        for b in &pool {
            let left = Composite::gen(a.clone());
            let right = Composite::gen(b.clone());
            if !eckmann_hilton_probe(&left, &right) {
                return Err(CliError::Failed(String::from(
                    "the two compositions disagree on a pair of generators",
                )));
            }
            // Nesting does not help either composition stay distinct.
            let nested = Composite::seq(
                Composite::tensor(left.clone(), right.clone()),
                Composite::gen(Multiset::zero()),
            );
            if nested.value() != a.add(b) {
                return Err(CliError::Failed(String::from(
                    "a nested composite missed the multiset sum",
                )));
            }
            probes += 1;
        }
    }
    println!("ok: {probes} interchange probes collapse to one sum");

    for (i, a) in pool.iter().enumerate() {
        for b in pool.iter().skip(i + 1) {
            if a != b && Composite::gen(a.clone()).value() == Composite::gen(b.clone()).value() {
                return Err(CliError::Failed(String::from(
                    "two distinct sums compare equal as arrows",
                )));
            }
        }
    }
    println!("ok: distinct sums stay distinct");
    Ok(())
}
