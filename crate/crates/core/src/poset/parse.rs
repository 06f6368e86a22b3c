use crate::error::{Error, Result};

use super::{Poset, MAX_ELEMENTS};

/// Parses the poset file format.
///
/// The first non-comment line is `n <int>`; each later line `<a> <b>` states
/// `a < b`. `#` starts a comment and blank lines are skipped.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut n: Option<usize> = None;
    let mut rels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        match n {
            None => {
                if tokens.len() != 2 || tokens[0] != "n" {
                    return Err(syntax(format!("expected `n <int>`, found `{line}`")));
                }
                let count: usize = tokens[1]
                    .parse()
                    .map_err(|_| syntax(format!("bad element count `{}`", tokens[1])))?;
                if count == 0 || count > MAX_ELEMENTS {
                    return Err(Error::Range(format!(
                        "element count {count} outside 1..={MAX_ELEMENTS}"
                    )));
                }
                n = Some(count);
            }
            Some(count) => {
                if tokens.len() != 2 {
                    return Err(syntax(format!("expected `<a> <b>`, found `{line}`")));
                }
                let mut pair = [0usize; 2];
                for (slot, tok) in pair.iter_mut().zip(&tokens) {
                    *slot = tok
                        .parse()
                        .map_err(|_| syntax(format!("bad label `{tok}`")))?;
                    if *slot == 0 || *slot > count {
                        return Err(Error::Range(format!(
                            "label {} on line {line_no} outside 1..={count}",
                            *slot
                        )));
                    }
                }
                rels.push((pair[0], pair[1]));
            }
        }
    }
    let n = n.ok_or(Error::Syntax {
        line: 0,
        message: "missing `n <int>` header".into(),
    })?;
    Poset::new(n, &rels)
}
