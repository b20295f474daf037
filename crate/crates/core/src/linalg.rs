//! Linear algebra over Z/2 and Z used by degreewise computations.

use crate::error::{AlgebraError, Result};

/// Row-reduced spanning set of a subspace of `(Z/2)^dim`.
#[derive(Debug, Clone, Default)]
pub struct Gf2Span {
    /// Reduced rows, each with a distinct pivot column.
    rows: Vec<(usize, Vec<u64>)>,
    dim: usize,
}

fn words(dim: usize) -> usize {
    dim.div_ceil(64)
}

/// Packs a 0/1 vector into bit words.
pub fn pack(bits: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; words(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

impl Gf2Span {
    pub fn new(dim: usize) -> Self {
        Gf2Span { rows: Vec::new(), dim }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (pivot, row) in &self.rows {
            if bit(v, *pivot) {
                xor_into(v, row);
            }
        }
    }

    /// Adds a vector; returns whether the span grew.
    pub fn insert(&mut self, bits: &[bool]) -> bool {
        assert_eq!(bits.len(), self.dim);
        let mut v = pack(bits);
        self.reduce(&mut v);
        match first_bit(&v) {
            None => false,
            Some(p) => {
                for (_, row) in self.rows.iter_mut() {
                    if bit(row, p) {
                        xor_into(row, &v);
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }

    pub fn contains(&self, bits: &[bool]) -> bool {
        assert_eq!(bits.len(), self.dim);
        let mut v = pack(bits);
        self.reduce(&mut v);
        first_bit(&v).is_none()
    }
}

/// Rank over Z/2 of a list of 0/1 row vectors of equal length.
pub fn rank_gf2(rows: &[Vec<bool>], dim: usize) -> usize {
    let mut span = Gf2Span::new(dim);
    for r in rows {
        span.insert(r);
    }
    span.dim()
}

/// Abelian group `Z^free_rank + sum Z/t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Torsion orders, each > 1, in divisibility order.
    pub torsion: Vec<u64>,
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

fn overflow() -> AlgebraError {
    AlgebraError::ResourceBound("integer overflow during Smith normal form".into())
}

/// Nonzero invariant factors of an integer matrix (Smith normal form
/// diagonal), in divisibility order.
pub fn smith_invariants(matrix: &[Vec<i64>], cols: usize) -> Result<Vec<u64>> {
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| {
            assert_eq!(r.len(), cols);
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        let v = a[t][j].checked_mul(q).ok_or_else(overflow)?;
                        a[i][j] = a[i][j].checked_sub(v).ok_or_else(overflow)?;
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        let v = row[t].checked_mul(q).ok_or_else(overflow)?;
                        row[j] = row[j].checked_sub(v).ok_or_else(overflow)?;
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Enforce divisibility of the remaining block by the pivot.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] = a[t][j].checked_add(a[i][j]).ok_or_else(overflow)?;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
        t += 1;
    }
    diag.sort_unstable();
    Ok(diag)
}

/// Cokernel `Z^cols / rowspan(matrix)`.
pub fn cokernel(matrix: &[Vec<i64>], cols: usize) -> Result<AbelianGroup> {
    let inv = smith_invariants(matrix, cols)?;
    Ok(AbelianGroup {
        free_rank: cols - inv.len(),
        torsion: inv.into_iter().filter(|&d| d > 1).collect(),
    })
}
