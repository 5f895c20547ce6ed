//! Displacement tableaux: fillings of a Young diagram by loop indices that
//! are strictly increasing along rows and columns, with repeated labels
//! confined to diagonals congruent modulo the label's torsion (modulus 0
//! meaning exact equality).

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chain::ChainOfLoops;
use crate::error::{Error, Result};
use crate::partition::{binomial, Partition};

/// A filling of `shape` by labels in `1..=g`, stored row-major bottom-up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DisplacementTableau {
    shape: Partition,
    /// `labels[y-1][x-1]` is the label of box `(x, y)`.
    labels: Vec<Vec<usize>>,
}

impl DisplacementTableau {
    pub fn new(shape: Partition, labels: Vec<Vec<usize>>) -> Result<Self> {
        if labels.len() != shape.num_rows()
            || labels
                .iter()
                .enumerate()
                .any(|(i, row)| row.len() != shape.row_len(i + 1))
        {
            return Err(Error::InvalidInput(
                "tableau labels do not cover exactly the shape's boxes".into(),
            ));
        }
        Ok(DisplacementTableau { shape, labels })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Label of box `(x, y)`, 1-based.
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.labels[y - 1][x - 1]
    }

    /// Labels in reading order, handy as a sort/compare key.
    pub fn reading_word(&self) -> Vec<usize> {
        self.shape.boxes().map(|(x, y)| self.get(x, y)).collect()
    }

    pub fn label_set(&self) -> std::collections::BTreeSet<usize> {
        self.reading_word().into_iter().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.label_set().len() == self.shape.size()
    }

    /// Restriction to a Young subdiagram of the shape.
    pub fn restrict(&self, sub: &Partition) -> Result<DisplacementTableau> {
        if !sub.subdiagram_of(&self.shape) {
            return Err(Error::InvalidInput(format!(
                "{sub} is not a subdiagram of {}",
                self.shape
            )));
        }
        let labels = (1..=sub.num_rows())
            .map(|y| (1..=sub.row_len(y)).map(|x| self.get(x, y)).collect())
            .collect();
        Ok(DisplacementTableau { shape: sub.clone(), labels })
    }
}

impl std::fmt::Display for DisplacementTableau {
    /// Row-major matrix, top row (of the French diagram) first.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in self.labels.iter().rev() {
            for (i, label) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{label}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// First violation found when checking a filling, in reading order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotIncreasing {
        at: (usize, usize),
        neighbor: (usize, usize),
    },
    DiagonalMismatch {
        label: usize,
        modulus: u64,
        first: (usize, usize),
        second: (usize, usize),
    },
}

/// Checks both displacement conditions under the chain's torsion profile.
/// `Ok(None)` means the filling is a valid displacement tableau.
pub fn check_displacement(
    t: &DisplacementTableau,
    chain: &ChainOfLoops,
) -> Result<Option<Violation>> {
    let g = chain.g();
    let boxes: Vec<(usize, usize)> = t.shape().boxes().collect();
    for &(x, y) in &boxes {
        let label = t.get(x, y);
        if label < 1 || label > g {
            return Err(Error::InvalidInput(format!(
                "label {label} at ({x},{y}) is outside 1..={g}"
            )));
        }
    }
    for &(x, y) in &boxes {
        let label = t.get(x, y);
        if x > 1 && t.get(x - 1, y) >= label {
            return Ok(Some(Violation::NotIncreasing {
                at: (x, y),
                neighbor: (x - 1, y),
            }));
        }
        if y > 1 && t.shape().contains(x, y - 1) && t.get(x, y - 1) >= label {
            return Ok(Some(Violation::NotIncreasing {
                at: (x, y),
                neighbor: (x, y - 1),
            }));
        }
    }
    for (i, &(x, y)) in boxes.iter().enumerate() {
        let label = t.get(x, y);
        let m = chain.torsion_of_label(label);
        for &(x2, y2) in &boxes[i + 1..] {
            if t.get(x2, y2) != label {
                continue;
            }
            let d1 = x as i64 - y as i64;
            let d2 = x2 as i64 - y2 as i64;
            let congruent = if m == 0 { d1 == d2 } else { (d1 - d2).rem_euclid(m as i64) == 0 };
            if !congruent {
                return Ok(Some(Violation::DiagonalMismatch {
                    label,
                    modulus: m,
                    first: (x, y),
                    second: (x2, y2),
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_displacement_tableau(t: &DisplacementTableau, chain: &ChainOfLoops) -> Result<bool> {
    Ok(check_displacement(t, chain)?.is_none())
}

/// All displacement tableaux on `shape` for the chain's torsion profile,
/// each exactly once, ordered lexicographically by reading word (which is
/// what filling boxes in reading order with ascending candidate labels
/// produces).
pub fn enumerate_tableaux(
    shape: &Partition,
    chain: &ChainOfLoops,
) -> Vec<DisplacementTableau> {
    let g = chain.g();
    let boxes: Vec<(usize, usize)> = shape.boxes().collect();
    let mut labels: Vec<Vec<usize>> =
        (1..=shape.num_rows()).map(|y| vec![0; shape.row_len(y)]).collect();
    // Per label: representative diagonal of its first placed box, and how
    // many boxes currently carry it.
    let mut diag_rep: Vec<i64> = vec![0; g + 1];
    let mut uses: Vec<usize> = vec![0; g + 1];
    let mut out = Vec::new();

    // The recursion threads the full search state; splitting it into a
    // struct would only rename the arguments.
    #[allow(clippy::too_many_arguments)]
    fn fill(
        idx: usize,
        boxes: &[(usize, usize)],
        shape: &Partition,
        chain: &ChainOfLoops,
        labels: &mut Vec<Vec<usize>>,
        diag_rep: &mut Vec<i64>,
        uses: &mut Vec<usize>,
        out: &mut Vec<DisplacementTableau>,
    ) {
        let g = chain.g();
        if idx == boxes.len() {
            out.push(DisplacementTableau {
                shape: shape.clone(),
                labels: labels.clone(),
            });
            return;
        }
        let (x, y) = boxes[idx];
        let mut min = 1;
        if x > 1 {
            min = min.max(labels[y - 1][x - 2] + 1);
        }
        if y > 1 && shape.contains(x, y - 1) {
            min = min.max(labels[y - 2][x - 1] + 1);
        }
        let diag = x as i64 - y as i64;
        for label in min..=g {
            let m = chain.torsion_of_label(label);
            if uses[label] > 0 {
                let ok = if m == 0 {
                    diag == diag_rep[label]
                } else {
                    (diag - diag_rep[label]).rem_euclid(m as i64) == 0
                };
                if !ok {
                    continue;
                }
            }
            labels[y - 1][x - 1] = label;
            if uses[label] == 0 {
                diag_rep[label] = diag;
            }
            uses[label] += 1;
            fill(idx + 1, boxes, shape, chain, labels, diag_rep, uses, out);
            uses[label] -= 1;
            labels[y - 1][x - 1] = 0;
        }
    }

    fill(
        0, &boxes, shape, chain, &mut labels, &mut diag_rep, &mut uses, &mut out,
    );
    out
}

/// `C(g, |lambda|) * f^lambda`: the tableau count on a generic chain, where
/// injectivity reduces everything to increasing fillings by a `|lambda|`-subset
/// of the labels.
pub fn count_tableaux_closed_form(shape: &Partition, g: usize) -> BigInt {
    if shape.size() > g {
        return BigInt::zero();
    }
    binomial(g, shape.size()) * shape.standard_tableaux_count()
}

/// Closed-form count guarded by genericity; non-generic profiles are refused
/// since repeated labels break the counting argument.
pub fn count_tableaux_generic(shape: &Partition, chain: &ChainOfLoops) -> Result<BigInt> {
    if !chain.is_generic() {
        return Err(Error::Unsupported(
            "closed-form tableau counting requires a generic chain".into(),
        ));
    }
    Ok(count_tableaux_closed_form(shape, chain.g()))
}

/// The transversal-intersection count `g! * prod_{i=0}^{r} i! / (g-d+r+i)!`,
/// enumerative when `rho(g, r, d) = 0`.
pub fn castelnuovo_number(g: usize, r: usize, d: i64) -> Result<BigInt> {
    let base = g as i64 - d + r as i64;
    if base < 0 {
        return Err(Error::Unsupported(format!(
            "g - d + r = {base} is negative"
        )));
    }
    let factorial = |n: i64| -> BigInt {
        let mut acc = BigInt::from(1);
        for k in 2..=n {
            acc *= k;
        }
        acc
    };
    let mut numerator = factorial(g as i64);
    let mut denominator = BigInt::from(1);
    for i in 0..=r as i64 {
        numerator *= factorial(i);
        denominator *= factorial(base + i);
    }
    let (quotient, remainder) = num_integer::Integer::div_rem(&numerator, &denominator);
    if !remainder.is_zero() {
        return Err(Error::Internal(format!(
            "Castelnuovo count {numerator}/{denominator} is not an integer"
        )));
    }
    Ok(quotient)
}
