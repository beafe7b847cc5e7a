//! Text descriptions of matrix groups.
//!
//! ```text
//! # Borel subgroup over F_5
//! mod 5^1
//! [[2,0],[0,1]]
//! [[1,1],[0,1]]
//! ```
//!
//! The header `mod p^n` (or `mod m` with `m = p^n`) comes first; each further
//! non-blank line is one generator, optionally repeating the `mod m` suffix.
//! `#` starts a comment.

use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::matrix::{parse_rows, RingMatrix};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescription {
    pub ring: Ring,
    pub generators: Vec<Gl2>,
}

fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    }
}

/// Parses `p^n` or a plain modulus `m`.
pub fn parse_modulus(text: &str) -> Result<Ring> {
    let t = text.trim();
    let bad = || Error::Parse {
        line: 1,
        msg: format!("bad modulus `{t}`"),
    };
    match t.split_once('^') {
        Some((p, n)) => {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            Ring::new(p, n)
        }
        None => Ring::from_modulus(t.parse().map_err(|_| bad())?),
    }
}

/// One generator in `ring`. A trailing `mod m` must name the same modulus.
pub fn parse_generator(ring: Ring, text: &str) -> Result<Gl2> {
    let (body, suffix) = match text.find("mod") {
        Some(i) => (&text[..i], Some(&text[i + 3..])),
        None => (text, None),
    };
    if let Some(s) = suffix {
        let r = parse_modulus(s)?;
        if r != ring {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "generator is mod {}, group is mod {}",
                    r.modulus(),
                    ring.modulus()
                ),
            });
        }
    }
    let rows = parse_rows(body, Some(ring.modulus()))?;
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected a 2x2 matrix, found `{}`", body.trim()),
        });
    }
    let data = rows.concat();
    Gl2::from_matrix(&RingMatrix::from_data(ring, 2, 2, data)).map_err(|e| Error::Parse {
        line: 1,
        msg: format!("`{}`: {e}", body.trim()),
    })
}

pub fn parse_group_file(text: &str) -> Result<GroupDescription> {
    let mut ring = None;
    let mut generators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match ring {
            None => {
                let rest = content.strip_prefix("mod").ok_or(Error::Parse {
                    line,
                    msg: format!("expected header `mod p^n`, found `{content}`"),
                })?;
                ring = Some(parse_modulus(rest).map_err(|e| at(line, e))?);
            }
            Some(r) => generators.push(parse_generator(r, content).map_err(|e| at(line, e))?),
        }
    }
    let ring = ring.ok_or(Error::Parse {
        line: 1,
        msg: "missing header `mod p^n`".into(),
    })?;
    Ok(GroupDescription { ring, generators })
}
