//! Text formats: diagram files, generator subsets, words and reflection
//! factorizations.
//!
//! A diagram file has one `rank <n>` line (the first line that is not a
//! comment or blank) followed by any number of `m <i> <j> <k|inf>` lines
//! with `1 <= i < j <= n` and `k >= 2`. Unlisted pairs commute. Lines
//! starting with `#` are comments.

use std::collections::BTreeSet;

use coxkit_core::{CoxeterSystem, DiagramError, GenSet, Label, Word};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing rank line")]
    MissingRank,
    #[error("invalid diagram: {0}")]
    Diagram(#[from] DiagramError),
    #[error("{0}")]
    Value(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

pub fn parse_system(text: &str) -> Result<CoxeterSystem, FormatError> {
    let mut rank: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fields[0] {
            "rank" => {
                if rank.is_some() {
                    return Err(syntax(line, "duplicate rank line"));
                }
                if fields.len() != 2 {
                    return Err(syntax(line, "expected 'rank <n>'"));
                }
                let n = fields[1].parse().map_err(|_| syntax(line, format!("bad rank '{}'", fields[1])))?;
                rank = Some(n);
            }
            "m" => {
                let n = rank.ok_or_else(|| syntax(line, "the rank line must come first"))?;
                if fields.len() != 4 {
                    return Err(syntax(line, "expected 'm <i> <j> <k|inf>'"));
                }
                let index = |s: &str| -> Result<usize, FormatError> {
                    match s.parse::<usize>() {
                        Ok(i) if (1..=n).contains(&i) => Ok(i),
                        _ => Err(syntax(line, format!("generator '{s}' out of range 1..{n}"))),
                    }
                };
                let (i, j) = (index(fields[1])?, index(fields[2])?);
                if i >= j {
                    return Err(syntax(line, format!("expected i < j, found {i} {j}")));
                }
                let label = match fields[3] {
                    "inf" => Label::Infinite,
                    s => match s.parse::<u32>() {
                        Ok(m) if m >= 2 => Label::Finite(m),
                        _ => return Err(syntax(line, format!("label '{s}' must be an integer >= 2 or 'inf'"))),
                    },
                };
                if !seen.insert((i, j)) {
                    return Err(syntax(line, format!("pair {i} {j} declared twice")));
                }
                edges.push((i - 1, j - 1, label));
            }
            other => {
                let msg = if rank.is_none() {
                    format!("expected 'rank <n>', found '{other}'")
                } else {
                    format!("unknown directive '{other}'")
                };
                return Err(syntax(line, msg));
            }
        }
    }
    let n = rank.ok_or(FormatError::MissingRank)?;
    Ok(CoxeterSystem::new(n, &edges)?)
}

/// Inverse of [`parse_system`], listing only labels other than 2.
pub fn serialize_system(sys: &CoxeterSystem) -> String {
    let mut out = format!("rank {}\n", sys.rank());
    for i in 0..sys.rank() {
        for j in i + 1..sys.rank() {
            let l = sys.label(i, j);
            if l != Label::Finite(2) {
                out.push_str(&format!("m {} {} {}\n", i + 1, j + 1, l));
            }
        }
    }
    out
}

/// Parses a word (`e`, or 1-based indices separated by spaces or commas)
/// and checks its letters against the rank.
pub fn parse_word(s: &str, rank: usize) -> Result<Word, FormatError> {
    let w: Word = s.parse().map_err(|e: coxkit_core::GroupError| FormatError::Value(e.to_string()))?;
    if let Some(&g) = w.letters().iter().find(|&&g| g >= rank) {
        return Err(FormatError::Value(format!("generator {} out of range 1..{rank}", g + 1)));
    }
    Ok(w)
}

/// Parses `{1,2,4}`, `1,2,4` or `{}`.
pub fn parse_subset(s: &str, rank: usize) -> Result<GenSet, FormatError> {
    let t = s.trim();
    let inner = t.strip_prefix('{').and_then(|u| u.strip_suffix('}')).unwrap_or(t);
    let mut set = GenSet::EMPTY;
    for part in inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()) {
        match part.parse::<usize>() {
            Ok(i) if (1..=rank).contains(&i) => set = set.with(i - 1),
            _ => return Err(FormatError::Value(format!("'{part}' is not a generator in 1..{rank}"))),
        }
    }
    Ok(set)
}

/// Parses a permutation of `1..=rank` given as in [`parse_word`].
pub fn parse_permutation(s: &str, rank: usize) -> Result<Vec<usize>, FormatError> {
    let w = parse_word(s, rank)?;
    let mut sorted = w.letters().to_vec();
    sorted.sort_unstable();
    if sorted != (0..rank).collect::<Vec<_>>() {
        return Err(FormatError::Value(format!("'{s}' is not a permutation of 1..{rank}")));
    }
    Ok(w.letters().to_vec())
}

/// Parses reflection words separated by `;`.
pub fn parse_factorization(s: &str, rank: usize) -> Result<Vec<Word>, FormatError> {
    s.split(';').map(|p| parse_word(p, rank)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxkit_core::{catalog, Classification};

    #[test]
    fn parses_a2_and_affine_a1() {
        let a2 = parse_system("rank 2\nm 1 2 3\n").unwrap();
        assert_eq!(a2.id(), catalog::a(2).id());
        let a1t = parse_system("# infinite dihedral\nrank 2\nm 1 2 inf\n").unwrap();
        assert_eq!(a1t.classification(), Classification::Affine);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_system("rank 3\nm 1 2 3\nm 2 4 3\n").unwrap_err();
        assert_eq!(err, syntax(3, "generator '4' out of range 1..3"));
        assert!(matches!(parse_system("m 1 2 3\nrank 2\n").unwrap_err(), FormatError::Syntax { line: 1, .. }));
        assert!(matches!(parse_system("rank 2\nm 1 2 3\nm 1 2 4\n").unwrap_err(), FormatError::Syntax { line: 3, .. }));
        assert!(matches!(parse_system("rank 2\nm 1 2 1\n").unwrap_err(), FormatError::Syntax { line: 2, .. }));
        assert!(matches!(parse_system("rank 2\nm 2 1 3\n").unwrap_err(), FormatError::Syntax { line: 2, .. }));
        assert!(matches!(parse_system("rank 2\nrank 2\n").unwrap_err(), FormatError::Syntax { line: 2, .. }));
        assert_eq!(parse_system("# nothing\n").unwrap_err(), FormatError::MissingRank);
    }

    #[test]
    fn round_trip() {
        let d = catalog::affine_d4();
        let text = serialize_system(&d);
        assert_eq!(parse_system(&text).unwrap().id(), d.id());
        assert_eq!(serialize_system(&parse_system(&text).unwrap()), text);
    }

    #[test]
    fn subsets_words_and_factorizations() {
        assert_eq!(parse_subset("{1,3}", 3).unwrap(), GenSet::from_indices([0, 2]));
        assert_eq!(parse_subset("{}", 3).unwrap(), GenSet::EMPTY);
        assert!(parse_subset("{4}", 3).is_err());
        assert_eq!(parse_word("1 2", 2).unwrap(), Word::from_one_based(&[1, 2]));
        assert!(parse_word("3", 2).is_err());
        assert_eq!(parse_permutation("2,1", 2).unwrap(), vec![1, 0]);
        assert!(parse_permutation("1 1", 2).is_err());
        assert_eq!(parse_factorization("1 2 1; 1", 2).unwrap().len(), 2);
    }
}
