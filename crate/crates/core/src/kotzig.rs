//! Kotzig arrays: `s x k` arrays whose rows are permutations of `0..k` and
//! whose columns all share the sum `s(k-1)/2`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KotzigArray {
    k: usize,
    rows: Vec<Vec<usize>>,
}

impl KotzigArray {
    /// Wraps `rows`, checking both invariants.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || k == 0 {
            return Err(Error::shape(
                "a Kotzig array needs at least one row and column",
            ));
        }
        let array = KotzigArray { k, rows };
        array.check()?;
        Ok(array)
    }

    pub fn s(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.rows[row][col]
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.k)
            .map(|j| self.rows.iter().map(|r| r[j]).sum())
            .collect()
    }

    fn check(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.k {
                return Err(Error::shape(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; self.k];
            for &v in row {
                if v >= self.k || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::shape(format!(
                        "row {i} is not a permutation of 0..{}",
                        self.k
                    )));
                }
            }
        }
        let twice_target = self.s() * (self.k - 1);
        if self.column_sums().iter().any(|&c| 2 * c != twice_target) {
            return Err(Error::shape("column sums are not constant"));
        }
        Ok(())
    }

    fn stack(blocks: &[Vec<Vec<usize>>], k: usize) -> Self {
        KotzigArray {
            k,
            rows: blocks.iter().flatten().cloned().collect(),
        }
    }
}

impl fmt::Display for KotzigArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn pair_rows(k: usize) -> Vec<Vec<usize>> {
    vec![(0..k).collect(), (0..k).rev().collect()]
}

fn triple_rows(k: usize) -> Vec<Vec<usize>> {
    let half = (k - 1) / 2;
    let row0 = (0..k).collect();
    let row1 = (0..k)
        .map(|j| if j <= half { half + j } else { j - (k + 1) / 2 })
        .collect();
    let row2 = (0..k)
        .map(|j| {
            if j <= half {
                k - 1 - 2 * j
            } else {
                2 * k - 1 - 2 * j
            }
        })
        .collect();
    vec![row0, row1, row2]
}

/// Identity row over its reversal; columns sum to `k - 1`.
pub fn base_pair(k: usize) -> Result<KotzigArray> {
    if k == 0 {
        return Err(Error::shape("k must be positive"));
    }
    Ok(KotzigArray {
        k,
        rows: pair_rows(k),
    })
}

/// The three-row block for odd `k`; columns sum to `3(k-1)/2`.
pub fn base_triple(k: usize) -> Result<KotzigArray> {
    if k == 0 {
        return Err(Error::shape("k must be positive"));
    }
    if k % 2 == 0 {
        return Err(Error::Parity(format!(
            "three-row block needs odd k, got {k}"
        )));
    }
    Ok(KotzigArray {
        k,
        rows: triple_rows(k),
    })
}

/// Canonical `s x k` Kotzig array: stacked pairs for even `s`, a triple
/// on top of `(s-3)/2` pairs for odd `s` and odd `k`.
pub fn kotzig(s: usize, k: usize) -> Result<KotzigArray> {
    if s == 0 || k == 0 {
        return Err(Error::shape(format!(
            "s and k must be positive, got s={s} k={k}"
        )));
    }
    if s % 2 == 1 && k % 2 == 0 {
        return Err(Error::Parity(format!("s={s} is odd and k={k} is even")));
    }
    if k == 1 {
        return Ok(KotzigArray {
            k,
            rows: vec![vec![0]; s],
        });
    }
    if s == 1 {
        return Err(Error::Parity(format!(
            "a single permutation row of length {k} has distinct column sums"
        )));
    }
    let mut blocks = Vec::with_capacity(s / 2);
    if s % 2 == 1 {
        blocks.push(triple_rows(k));
    }
    let pairs = if s % 2 == 1 { (s - 3) / 2 } else { s / 2 };
    blocks.extend(std::iter::repeat_with(|| pair_rows(k)).take(pairs));
    Ok(KotzigArray::stack(&blocks, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_examples() {
        assert_eq!(
            base_pair(3).unwrap().rows(),
            &[vec![0, 1, 2], vec![2, 1, 0]]
        );
        assert_eq!(base_pair(1).unwrap().rows(), &[vec![0], vec![0]]);
        let p9 = base_pair(9).unwrap();
        assert_eq!(p9.rows()[1], (0..9).rev().collect::<Vec<_>>());
        assert!(p9.column_sums().iter().all(|&c| c == 8));
    }

    #[test]
    fn triple_matches_golden() {
        let t = base_triple(9).unwrap();
        assert_eq!(
            t.rows(),
            &[
                vec![0, 1, 2, 3, 4, 5, 6, 7, 8],
                vec![4, 5, 6, 7, 8, 0, 1, 2, 3],
                vec![8, 6, 4, 2, 0, 7, 5, 3, 1],
            ]
        );
        assert!(t.column_sums().iter().all(|&c| c == 12));
        assert_eq!(kotzig(3, 9).unwrap(), t);
    }

    #[test]
    fn triple_small_cases() {
        assert_eq!(base_triple(1).unwrap().rows(), &[vec![0], vec![0], vec![0]]);
        assert_eq!(
            base_triple(5).unwrap().rows(),
            &[
                vec![0, 1, 2, 3, 4],
                vec![2, 3, 4, 0, 1],
                vec![4, 2, 0, 3, 1]
            ]
        );
        assert!(matches!(base_triple(4), Err(Error::Parity(_))));
    }

    #[test]
    fn stacked_pairs() {
        let a = kotzig(4, 3).unwrap();
        assert_eq!(
            a.rows(),
            &[vec![0, 1, 2], vec![2, 1, 0], vec![0, 1, 2], vec![2, 1, 0]]
        );
        assert_eq!(a.column_sums(), vec![4, 4, 4]);
    }

    #[test]
    fn odd_stack_puts_triple_first() {
        let a = kotzig(5, 3).unwrap();
        assert_eq!(&a.rows()[..3], base_triple(3).unwrap().rows());
        assert_eq!(&a.rows()[3..], base_pair(3).unwrap().rows());
    }

    #[test]
    fn parity_and_degenerate_cases() {
        assert!(matches!(kotzig(3, 4), Err(Error::Parity(_))));
        assert_eq!(kotzig(1, 1).unwrap().rows(), &[vec![0]]);
        assert_eq!(kotzig(3, 1).unwrap().rows(), &[vec![0], vec![0], vec![0]]);
        assert!(matches!(kotzig(1, 3), Err(Error::Parity(_))));
    }

    #[test]
    fn invariants_exhaustive() {
        for s in 1..=10 {
            for k in 1..=11 {
                let accepted = (s % 2 == 0 || k % 2 == 1) && (s > 1 || k == 1);
                match kotzig(s, k) {
                    Ok(a) => {
                        assert!(accepted, "s={s} k={k} should be rejected");
                        assert_eq!((a.s(), a.k()), (s, k));
                        KotzigArray::from_rows(a.rows().to_vec()).unwrap();
                        assert!(a.column_sums().iter().all(|&c| 2 * c == s * (k - 1)));
                    }
                    Err(_) => assert!(!accepted, "s={s} k={k} should be accepted"),
                }
            }
        }
    }

    #[test]
    fn from_rows_rejects_bad_arrays() {
        assert!(KotzigArray::from_rows(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(KotzigArray::from_rows(vec![vec![0, 0], vec![1, 1]]).is_err());
        assert!(KotzigArray::from_rows(vec![vec![0, 1], vec![1, 0]]).is_ok());
    }
}
