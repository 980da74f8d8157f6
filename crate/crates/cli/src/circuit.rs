//! Circuit files: a start word on the first non-comment line, then one
//! whiskered cell per line as `left | cell | right`, where `~` is the empty
//! word. This is exactly the text the library's own renderer produces, so
//! command output can be fed back in.
//!
//! ```text
//! x.y
//! ~ | tau(x,y) | ~
//! y | alpha | ~
//! ```

use std::collections::BTreeMap;

use polynet_core::algebra::Alphabet;
use polynet_core::slice::{CellBounds, Slice, SlicedArrow};
use polynet_core::Word;

use crate::netfile::FileError;

/// Parse a word: `~` for the empty word, otherwise `.`-joined letters.
pub fn parse_word(text: &str, letters: &Alphabet, line: usize) -> Result<Word, FileError> {
    let text = text.trim();
    if text == "~" {
        return Ok(Word::empty());
    }
    let mut out = Vec::new();
    for part in text.split('.') {
        let name = part.trim();
        if name.is_empty() {
            return Err(FileError::Parse {
                line,
                message: String::from("empty letter in word"),
            });
        }
        let sym = letters.lookup(name).ok_or_else(|| FileError::Undeclared {
            line,
            name: String::from(name),
        })?;
        out.push(sym);
    }
    Ok(Word::from_letters(out))
}

/// Parse a circuit over the given cell inventory. Each slice is checked to
/// apply to the word reached before it, so the result always validates.
pub fn parse_circuit<B: CellBounds>(
    ctx: &B,
    letters: &Alphabet,
    cells: Vec<B::Cell>,
    text: &str,
) -> Result<SlicedArrow<B::Cell>, FileError>
where
    B::Cell: Clone,
{
    let mut by_name: BTreeMap<String, B::Cell> = BTreeMap::new();
    for cell in cells {
        by_name.insert(ctx.cell_name(&cell), cell);
    }

    let mut start: Option<Word> = None;
    let mut current = Word::empty();
    let mut slices = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        let body = raw.split('#').next().unwrap_or(raw).trim();
        if body.is_empty() {
            continue;
        }
        if start.is_none() {
            let word = parse_word(body, letters, line)?;
            current = word.clone();
            start = Some(word);
            continue;
        }
        let mut parts = body.split('|');
        let (left, cell, right) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(c), Some(r), None) => (l, c, r),
            _ => {
                return Err(FileError::Parse {
                    line,
                    message: String::from("expected 'LEFT | CELL | RIGHT'"),
                })
            }
        };
        let name = cell.trim();
        let cell = by_name
            .get(name)
            .cloned()
            .ok_or_else(|| FileError::Undeclared {
                line,
                name: String::from(name),
            })?;
        let slice = Slice {
            left: parse_word(left, letters, line)?,
            cell,
            right: parse_word(right, letters, line)?,
        };
        current = slice.apply(ctx, &current).ok_or_else(|| FileError::Parse {
            line,
            message: String::from("slice does not fit the word reached here"),
        })?;
        slices.push(slice);
    }

    match start {
        Some(start) => Ok(SlicedArrow { start, slices }),
        None => Err(FileError::Parse {
            line: 1,
            message: String::from("empty circuit: expected a start word"),
        }),
    }
}
