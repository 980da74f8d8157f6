//! Line-oriented net files.
//!
//! ```text
//! # three places, two transitions
//! place x
//! place y
//! place z
//! trans alpha : x -> y+z
//! trans beta : 2*y -> z
//! marking init : 2*x+2*y
//! ```
//!
//! Declaration order is significant: it fixes the total order on place
//! symbols that every word-level construction downstream depends on. `#`
//! starts a comment, blank lines are skipped, and a multiset literal is
//! either `0` or `+`-joined `k*sym` terms with the `k*` part optional.

use std::error::Error;
use std::fmt;

use polynet_core::algebra::Alphabet;
use polynet_core::net::NetError;
use polynet_core::{Multiset, PetriNet, RuleTable};

/// Errors from net and circuit files, with 1-based line numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileError {
    /// The line does not match the grammar.
    Parse { line: usize, message: String },
    /// A referenced name was never declared.
    Undeclared { line: usize, name: String },
    /// A name was declared twice.
    Duplicate { line: usize, name: String },
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Parse { line, message } => write!(f, "line {line}: {message}"),
            FileError::Undeclared { line, name } => {
                write!(f, "line {line}: '{name}' is not declared")
            }
            FileError::Duplicate { line, name } => {
                write!(f, "line {line}: '{name}' is declared twice")
            }
        }
    }
}

impl Error for FileError {}

/// A parsed net file: the net plus its named markings, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetFile {
    pub net: PetriNet,
    pub markings: Vec<(String, Multiset)>,
}

impl NetFile {
    /// Look up a marking by name.
    pub fn marking(&self, name: &str) -> Option<&Multiset> {
        self.markings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    /// The canonical text form: places, transitions, and markings, one per
    /// line in declaration order. Parsing the result reproduces `self`.
    pub fn render(&self) -> String {
        let places = self.net.places();
        let mut out = String::new();
        for name in places.names() {
            out.push_str("place ");
            out.push_str(name);
            out.push('\n');
        }
        for t in self.net.rules().symbols() {
            out.push_str(&format!(
                "trans {} : {} -> {}\n",
                self.net.rules().name(t),
                self.net.rule_source(t).render(places),
                self.net.rule_target(t).render(places),
            ));
        }
        for (name, m) in &self.markings {
            out.push_str(&format!("marking {} : {}\n", name, m.render(places)));
        }
        out
    }
}

/// Parse a net file.
pub fn parse_net(text: &str) -> Result<NetFile, FileError> {
    let mut net = PetriNet::new();
    let mut markings: Vec<(String, Multiset)> = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        let body = raw.split('#').next().unwrap_or(raw).trim();
        if body.is_empty() {
            continue;
        }
        let (keyword, rest) = match body.split_once(char::is_whitespace) {
            Some(pair) => pair,
            None => (body, ""),
        };
        match keyword {
            "place" => {
                let name = ident(rest.trim(), line)?;
                net.add_place(name).map_err(|e| name_error(e, name, line))?;
            }
            "trans" => {
                let (name, body) = rest.split_once(':').ok_or_else(|| FileError::Parse {
                    line,
                    message: String::from("expected 'trans NAME : PRE -> POST'"),
                })?;
                let (src, tgt) = body.split_once("->").ok_or_else(|| FileError::Parse {
                    line,
                    message: String::from("expected 'trans NAME : PRE -> POST'"),
                })?;
                let name = ident(name.trim(), line)?;
                let pre = parse_multiset(src, net.places(), line)?;
                let post = parse_multiset(tgt, net.places(), line)?;
                net.add_transition(name, pre, post)
                    .map_err(|e| name_error(e, name, line))?;
            }
            "marking" => {
                let (name, body) = rest.split_once(':').ok_or_else(|| FileError::Parse {
                    line,
                    message: String::from("expected 'marking NAME : MULTISET'"),
                })?;
                let name = ident(name.trim(), line)?;
                if markings.iter().any(|(n, _)| n == name) {
                    return Err(FileError::Duplicate {
                        line,
                        name: String::from(name),
                    });
                }
                let m = parse_multiset(body, net.places(), line)?;
                markings.push((String::from(name), m));
            }
            other => {
                return Err(FileError::Parse {
                    line,
                    message: format!("unknown directive '{other}'"),
                })
            }
        }
    }
    Ok(NetFile { net, markings })
}

/// Parse `0` or `+`-joined `k*sym` terms over `letters`. Repeated symbols
/// accumulate, so `x+x` means `2*x`.
pub fn parse_multiset(
    text: &str,
    letters: &Alphabet,
    line: usize,
) -> Result<Multiset, FileError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Multiset::zero());
    }
    let mut out = Multiset::zero();
    for term in text.split('+') {
        let term = term.trim();
        let (count, name) = match term.split_once('*') {
            Some((k, n)) => {
                let count = k.trim().parse::<u64>().map_err(|_| FileError::Parse {
                    line,
                    message: format!("bad count '{}'", k.trim()),
                })?;
                (count, n.trim())
            }
            None => (1, term),
        };
        if name.is_empty() {
            return Err(FileError::Parse {
                line,
                message: String::from("empty term in multiset"),
            });
        }
        let sym = letters.lookup(name).ok_or_else(|| FileError::Undeclared {
            line,
            name: String::from(name),
        })?;
        out.insert(sym, count);
    }
    Ok(out)
}

fn ident(name: &str, line: usize) -> Result<&str, FileError> {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if head_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(name)
    } else {
        Err(FileError::Parse {
            line,
            message: format!("bad name '{name}'"),
        })
    }
}

/// Core-level name clashes become duplicate-name errors; nothing else can
/// escape construction because multiset terms resolve their symbols first.
fn name_error(e: NetError, name: &str, line: usize) -> FileError {
    match e {
        NetError::Name(_) => FileError::Duplicate {
            line,
            name: String::from(name),
        },
        other => FileError::Parse {
            line,
            message: format!("{other}"),
        },
    }
}
