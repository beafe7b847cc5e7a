//! Dense matrices over `Z/p^n Z` and the `[[a,b],[c,d]] mod m` literal format.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl RingMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: Ring, size: usize) -> RingMatrix {
        let mut m = RingMatrix::zeros(ring, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed entries, reducing each into `[0, m)`.
    pub fn from_rows<R: AsRef<[i64]>>(ring: Ring, rows: &[R]) -> Result<RingMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            data.extend(r.iter().map(|&x| ring.from_i64(x)));
        }
        Ok(RingMatrix {
            ring,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_data(ring: Ring, rows: usize, cols: usize, data: Vec<u32>) -> RingMatrix {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|x| x % ring.modulus()).collect();
        RingMatrix {
            ring,
            rows,
            cols,
            data,
        }
    }

    pub fn from_row_vecs(ring: Ring, cols: usize, rows: &[Vec<u32>]) -> RingMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        RingMatrix {
            ring,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.ring.modulus();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut t = RingMatrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    fn same_ring(&self, other: &RingMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ModulusMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.same_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RingMatrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += (self.get(i, k) * other.get(k, j)) as u64;
                }
                out.data[i * other.cols + j] = self.ring.reduce(acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.same_ring(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("add".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.ring.add(a, b))
            .collect();
        Ok(RingMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.same_ring(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("sub".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.ring.sub(a, b))
            .collect();
        Ok(RingMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let acc: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| (a * b) as u64)
                    .sum();
                self.ring.reduce(acc)
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.same_ring(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RingMatrix {
            ring: self.ring,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Parses `[[a,b],[c,d]] mod m`. Entries must already lie in `[0, m)`.
    pub fn parse_literal(text: &str) -> Result<RingMatrix> {
        let (body, modulus) = match text.find("mod") {
            Some(i) => (&text[..i], Some(&text[i + 3..])),
            None => (text, None),
        };
        let modulus = modulus.ok_or_else(|| parse_err("missing `mod m` suffix"))?;
        let m: u32 = modulus
            .trim()
            .parse()
            .map_err(|_| parse_err(&format!("bad modulus `{}`", modulus.trim())))?;
        let ring = Ring::from_modulus(m)?;
        let rows = parse_rows(body, Some(m))?;
        let signed: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        RingMatrix::from_rows(ring, &signed)
    }

    /// Literal form without the modulus suffix, e.g. `[[1,1],[0,1]]`.
    pub fn literal_body(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

fn parse_err(msg: &str) -> Error {
    Error::Parse {
        line: 1,
        msg: msg.to_string(),
    }
}

/// Parses `[[a,b],[c,d]]` into integer rows. When `bound` is given every
/// entry must be below it.
pub fn parse_rows(text: &str, bound: Option<u32>) -> Result<Vec<Vec<u32>>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(|| parse_err(&format!("expected `[[..],[..]]`, found `{compact}`")))?;
    let mut rows = Vec::new();
    for row in inner.split("],[") {
        let mut entries = Vec::new();
        for tok in row.split(',') {
            let v: u32 = tok
                .parse()
                .map_err(|_| parse_err(&format!("bad entry `{tok}`")))?;
            if let Some(b) = bound {
                if v >= b {
                    return Err(parse_err(&format!("entry `{tok}` not below modulus {b}")));
                }
            }
            entries.push(v);
        }
        rows.push(entries);
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(parse_err("ragged rows"));
    }
    Ok(rows)
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.literal_body(), self.ring.modulus())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        let m = RingMatrix::parse_literal("[[1, 2],[0,24]] mod 25").unwrap();
        assert_eq!(m.to_string(), "[[1,2],[0,24]] mod 25");
        assert_eq!(m.ring().p(), 5);
    }

    #[test]
    fn literal_errors() {
        assert!(RingMatrix::parse_literal("[[1,2],[0,1]]").is_err());
        assert!(RingMatrix::parse_literal("[[1,2],[0,25]] mod 25").is_err());
        assert!(RingMatrix::parse_literal("[[1,x],[0,1]] mod 5").is_err());
        assert!(RingMatrix::parse_literal("[[1,2],[0]] mod 5").is_err());
        assert!(RingMatrix::parse_literal("[[1,2],[0,1]] mod 6").is_err());
    }

    #[test]
    fn product() {
        let r = Ring::new(5, 1).unwrap();
        let a = RingMatrix::from_rows(r, &[[1, 1], [0, 1]]).unwrap();
        let b = a.mul(&a).unwrap();
        assert_eq!(b, RingMatrix::from_rows(r, &[[1, 2], [0, 1]]).unwrap());
        assert_eq!(a.apply(&[0, 1]), vec![1, 1]);
    }
}
