//! Partitions (Young diagrams in French notation) and Schubert indices.
//!
//! A box is a pair `(x, y)` with `1 <= x <= rows[y-1]`, `1 <= y <= #rows`:
//! column `x`, row `y` counted from the bottom.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    /// Weakly decreasing row lengths, bottom row first. No trailing zeros.
    rows: Vec<usize>,
}

impl Partition {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "partition rows must be weakly decreasing, got {rows:?}"
            )));
        }
        let mut rows = rows;
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Ok(Partition { rows })
    }

    pub fn empty() -> Self {
        Partition { rows: Vec::new() }
    }

    /// The `rows x cols` rectangle.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if rows == 0 || cols == 0 {
            return Partition::empty();
        }
        Partition { rows: vec![cols; rows] }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Length of 1-based row `y`, 0 if out of range.
    pub fn row_len(&self, y: usize) -> usize {
        self.rows.get(y - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= 1 && y >= 1 && x <= self.row_len(y)
    }

    /// Boxes in reading order: bottom row left to right, then upward.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |x| (x, i + 1)))
    }

    /// Is `self` a Young subdiagram of `other`?
    pub fn subdiagram_of(&self, other: &Partition) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, &len)| len <= other.row_len(i + 1))
    }

    /// Box-set union; always again a partition when both are.
    pub fn union(&self, other: &Partition) -> Partition {
        let n = self.rows.len().max(other.rows.len());
        let rows = (1..=n)
            .map(|y| self.row_len(y).max(other.row_len(y)))
            .collect();
        Partition { rows }
    }

    /// Box-set intersection.
    pub fn intersection(&self, other: &Partition) -> Partition {
        let n = self.rows.len().min(other.rows.len());
        let mut rows: Vec<usize> = (1..=n)
            .map(|y| self.row_len(y).min(other.row_len(y)))
            .collect();
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Partition { rows }
    }

    /// Hook length of the box `(x, y)`.
    fn hook(&self, x: usize, y: usize) -> usize {
        let arm = self.row_len(y) - x;
        let leg = self
            .rows
            .iter()
            .skip(y)
            .take_while(|&&len| len >= x)
            .count();
        arm + leg + 1
    }

    /// Number of standard Young tableaux of this shape, by the hook length
    /// formula.
    pub fn standard_tableaux_count(&self) -> BigInt {
        let mut numerator = BigInt::one();
        for k in 1..=self.size() {
            numerator *= k;
        }
        let mut denominator = BigInt::one();
        for (x, y) in self.boxes() {
            denominator *= self.hook(x, y);
        }
        numerator / denominator
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Ramification data: a non-decreasing sequence `alpha_0 <= ... <= alpha_r`
/// of nonnegative integers bounded by `d - r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertIndex {
    pub r: usize,
    pub d: i64,
    pub alpha: Vec<u64>,
}

impl SchubertIndex {
    pub fn new(r: usize, d: i64, alpha: Vec<u64>) -> Result<Self> {
        if alpha.len() != r + 1 {
            return Err(Error::InvalidInput(format!(
                "alpha must have r+1 = {} entries, got {}",
                r + 1,
                alpha.len()
            )));
        }
        if alpha.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput(format!(
                "alpha must be non-decreasing, got {alpha:?}"
            )));
        }
        if d < r as i64 {
            return Err(Error::InvalidInput(format!("need d >= r, got d={d}, r={r}")));
        }
        if let Some(&last) = alpha.last() {
            if last as i64 > d - r as i64 {
                return Err(Error::InvalidInput(format!(
                    "alpha_r = {last} exceeds d - r = {}",
                    d - r as i64
                )));
            }
        }
        Ok(SchubertIndex { r, d, alpha })
    }
}

/// The partition induced by a Schubert index: `lambda_i = (g-d+r) + alpha_{r-i}`.
pub fn schubert_to_partition(g: usize, idx: &SchubertIndex) -> Result<Partition> {
    let base = g as i64 - idx.d + idx.r as i64;
    if base < 0 {
        return Err(Error::Unsupported(format!(
            "g - d + r = {base} is negative; only the special-divisor regime is modeled"
        )));
    }
    let rows: Vec<usize> = (0..=idx.r)
        .map(|i| (base as u64 + idx.alpha[idx.r - i]) as usize)
        .collect();
    Partition::new(rows)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut result = BigInt::one();
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// The Brill-Noether number `rho(g, r, d) = g - (r+1)(g-d+r)`.
pub fn brill_noether_number(g: usize, r: usize, d: i64) -> i64 {
    g as i64 - (r as i64 + 1) * (g as i64 - d + r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn schubert_to_partition_examples() {
        let idx = SchubertIndex::new(3, 6, vec![0, 2, 2, 3]).unwrap();
        assert_eq!(schubert_to_partition(9, &idx).unwrap(), part(&[9, 8, 8, 6]));

        let idx = SchubertIndex::new(1, 3, vec![0, 0]).unwrap();
        assert_eq!(schubert_to_partition(4, &idx).unwrap(), part(&[2, 2]));

        let idx = SchubertIndex::new(1, 2, vec![0, 0]).unwrap();
        assert_eq!(schubert_to_partition(2, &idx).unwrap(), part(&[1, 1]));
    }

    #[test]
    fn schubert_size_identity() {
        // |lambda| = (r+1)(g-d+r) + sum(alpha)
        let cases = [
            (9usize, 3usize, 6i64, vec![0u64, 2, 2, 3]),
            (4, 1, 3, vec![0, 0]),
            (12, 2, 11, vec![0, 1, 2]),
            (6, 2, 6, vec![0, 0, 0]),
            (8, 1, 5, vec![1, 3]),
        ];
        for (g, r, d, alpha) in cases {
            let sum: u64 = alpha.iter().sum();
            let idx = SchubertIndex::new(r, d, alpha).unwrap();
            let lambda = schubert_to_partition(g, &idx).unwrap();
            let expected = (r as i64 + 1) * (g as i64 - d + r as i64) + sum as i64;
            assert_eq!(lambda.size() as i64, expected);
        }
    }

    #[test]
    fn negative_regime_rejected() {
        let idx = SchubertIndex::new(1, 5, vec![0, 0]).unwrap();
        assert!(matches!(
            schubert_to_partition(3, &idx),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn invalid_schubert_index() {
        assert!(SchubertIndex::new(1, 3, vec![2, 1]).is_err());
        assert!(SchubertIndex::new(1, 3, vec![0, 3]).is_err());
        assert!(SchubertIndex::new(1, 3, vec![0]).is_err());
    }

    /// Independent oracle: count standard Young tableaux by adding the
    /// entries 1..n one at a time to outer corners.
    fn syt_count_brute(rows: &[usize]) -> u64 {
        fn go(filled: &mut Vec<usize>, target: &[usize]) -> u64 {
            if filled.iter().zip(target).all(|(a, b)| a == b) {
                return 1;
            }
            let mut total = 0;
            for i in 0..target.len() {
                let can_grow = filled[i] < target[i]
                    && (i == 0 || filled[i] < filled[i - 1]);
                if can_grow {
                    filled[i] += 1;
                    total += go(filled, target);
                    filled[i] -= 1;
                }
            }
            total
        }
        go(&mut vec![0; rows.len()], rows)
    }

    #[test]
    fn hook_length_matches_brute_force() {
        let shapes: &[&[usize]] = &[
            &[],
            &[1, 1],
            &[2, 2],
            &[3, 1],
            &[3, 3],
            &[4, 4, 3],
            &[5, 4, 3],
            &[2, 2, 1, 1],
        ];
        for rows in shapes {
            let p = part(rows);
            assert_eq!(
                p.standard_tableaux_count(),
                BigInt::from(syt_count_brute(rows)),
                "shape {rows:?}"
            );
        }
    }

    #[test]
    fn union_intersection() {
        let a = part(&[3, 3, 3]); // 3x3
        let b = part(&[4, 4]); // 2x4
        assert_eq!(a.union(&b), part(&[4, 4, 3]));
        assert_eq!(a.intersection(&b), part(&[3, 3]));
        assert!(a.intersection(&b).subdiagram_of(&a));
        assert!(a.subdiagram_of(&a.union(&b)));
    }

    #[test]
    fn reading_order() {
        let boxes: Vec<_> = part(&[2, 1]).boxes().collect();
        assert_eq!(boxes, vec![(1, 1), (2, 1), (1, 2)]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(12, 5), BigInt::from(792));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
