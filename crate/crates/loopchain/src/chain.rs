//! The marked metric graph: a chain of `g` loops with bridges.
//!
//! Loop `i` (1-based) has a top edge of length `l_i` from `v_i` to `w_i` and a
//! bottom edge of length `n_i`; consecutive loops are joined by a bridge from
//! `w_i` to `v_{i+1}`, which may have length zero (the vertices coincide).
//! The marked point is `w_g`, the rightmost vertex.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// One loop of the chain: either two rational edge lengths, or a marker for
/// an irrational length ratio (which kills all torsion on that loop).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopSpec {
    Rational { top: Rat, bottom: Rat },
    TorsionFree,
}

impl LoopSpec {
    pub fn rational(top: Rat, bottom: Rat) -> Self {
        LoopSpec::Rational { top, bottom }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, LoopSpec::Rational { .. })
    }
}

/// The torsion of a single loop: the minimum positive integer `m` such that
/// `m * l` is an integer multiple of `l + n`, or 0 for a torsion-free loop.
///
/// For rational lengths this is the lowest-terms denominator of `l / (l + n)`.
pub fn loop_torsion(spec: &LoopSpec) -> Result<u64> {
    match spec {
        LoopSpec::TorsionFree => Ok(0),
        LoopSpec::Rational { top, bottom } => {
            if !top.is_positive() || !bottom.is_positive() {
                return Err(Error::InvalidInput(format!(
                    "loop lengths must be positive, got l={top}, n={bottom}"
                )));
            }
            let ratio = top.clone() / (top.clone() + bottom.clone());
            let m: u64 = ratio.denom().try_into().map_err(|_| {
                Error::InvalidInput("loop torsion exceeds u64 range".into())
            })?;
            Ok(m)
        }
    }
}

/// Derived torsion for each loop in order.
pub fn torsion_profile(loops: &[LoopSpec]) -> Result<Vec<u64>> {
    loops.iter().map(loop_torsion).collect()
}

/// Per-loop genericity report; `ok` is vacuously true for loop 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopGenericity {
    /// 1-based loop index.
    pub index: usize,
    pub torsion: u64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub generic: bool,
    pub per_loop: Vec<LoopGenericity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainOfLoops {
    loops: Vec<LoopSpec>,
    /// g - 1 bridge lengths; 0 means `w_i = v_{i+1}`.
    bridges: Vec<Rat>,
    /// m_1..m_g. m_1 defaults to 0 (it never constrains anything the strict
    /// row/column increase does not already force); the rest are derived from
    /// the lengths unless explicitly overridden.
    torsion: Vec<u64>,
}

impl ChainOfLoops {
    pub fn new(loops: Vec<LoopSpec>, bridges: Vec<Rat>) -> Result<Self> {
        if loops.is_empty() {
            return Err(Error::InvalidInput("chain must have at least one loop".into()));
        }
        if bridges.len() + 1 != loops.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} bridges for {} loops, got {}",
                loops.len() - 1,
                loops.len(),
                bridges.len()
            )));
        }
        if bridges.iter().any(|b| b.is_negative()) {
            return Err(Error::InvalidInput("bridge lengths must be nonnegative".into()));
        }
        let mut torsion = torsion_profile(&loops)?;
        torsion[0] = 0;
        Ok(ChainOfLoops { loops, bridges, torsion })
    }

    /// Replaces the torsion profile wholesale, e.g. to force `m_1` or to model
    /// a profile without committing to lengths. Entries for rational loops may
    /// disagree with the derived values only at position 1.
    pub fn with_torsion_override(mut self, torsion: Vec<u64>) -> Result<Self> {
        if torsion.len() != self.loops.len() {
            return Err(Error::InvalidInput(format!(
                "torsion override has length {}, expected {}",
                torsion.len(),
                self.loops.len()
            )));
        }
        self.torsion = torsion;
        Ok(self)
    }

    /// A generic chain with all loops torsion-free, the common test fixture.
    pub fn generic_torsion_free(g: usize) -> Self {
        let loops = vec![LoopSpec::TorsionFree; g];
        let bridges = vec![Rat::zero(); g - 1];
        let torsion = vec![0; g];
        ChainOfLoops { loops, bridges, torsion }
    }

    pub fn g(&self) -> usize {
        self.loops.len()
    }

    pub fn loops(&self) -> &[LoopSpec] {
        &self.loops
    }

    pub fn bridges(&self) -> &[Rat] {
        &self.bridges
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Torsion of the loop carrying `label` (1-based tableau label).
    pub fn torsion_of_label(&self, label: usize) -> u64 {
        self.torsion[label - 1]
    }

    pub fn is_rational(&self) -> bool {
        self.loops.iter().all(LoopSpec::is_rational)
    }

    /// Top and bottom lengths of loop `i` (0-based); error on torsion-free.
    pub fn lengths(&self, i: usize) -> Result<(Rat, Rat)> {
        match &self.loops[i] {
            LoopSpec::Rational { top, bottom } => Ok((top.clone(), bottom.clone())),
            LoopSpec::TorsionFree => Err(Error::Unsupported(format!(
                "loop {} is torsion-free and has no rational lengths",
                i + 1
            ))),
        }
    }

    /// The xi-coordinate period of loop `i` (0-based): `(l_i + n_i) / l_i`.
    /// None for torsion-free loops (the period is irrational).
    pub fn period(&self, i: usize) -> Option<Rat> {
        match &self.loops[i] {
            LoopSpec::Rational { top, bottom } => {
                Some((top.clone() + bottom.clone()) / top.clone())
            }
            LoopSpec::TorsionFree => None,
        }
    }

    /// Definition of genericity: every `m_i` with `i >= 2` is 0 or exceeds
    /// `2g - 2`.
    pub fn genericity(&self) -> GenericityReport {
        let g = self.g();
        let bound = if g >= 1 { 2 * (g as u64) - 2 } else { 0 };
        let per_loop: Vec<LoopGenericity> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(idx, &m)| LoopGenericity {
                index: idx + 1,
                torsion: m,
                ok: idx == 0 || m == 0 || m > bound,
            })
            .collect();
        GenericityReport {
            generic: per_loop.iter().all(|l| l.ok),
            per_loop,
        }
    }

    pub fn is_generic(&self) -> bool {
        self.genericity().generic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn rational_loop(l: i64, n: i64) -> LoopSpec {
        LoopSpec::rational(rat(l, 1), rat(n, 1))
    }

    /// Independent oracle for loop torsion: scan k = 1, 2, ... for the first
    /// k with k*l an integer multiple of l+n.
    fn torsion_by_scan(l: Rat, n: Rat) -> u64 {
        let period = l.clone() + n;
        for k in 1..10_000u64 {
            let multiple = l.clone() * Rat::from_integer(k.into()) / period.clone();
            if multiple.is_integer() {
                return k;
            }
        }
        panic!("no torsion found below 10000");
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(loop_torsion(&rational_loop(1, 1)).unwrap(), 2);
        assert_eq!(loop_torsion(&rational_loop(2, 5)).unwrap(), 7);
        assert_eq!(loop_torsion(&LoopSpec::TorsionFree).unwrap(), 0);
    }

    #[test]
    fn torsion_matches_minimal_scan() {
        let cases = [(1, 1), (2, 5), (1, 2), (3, 4), (5, 3), (7, 11), (6, 4)];
        for (l, n) in cases {
            let spec = rational_loop(l, n);
            assert_eq!(
                loop_torsion(&spec).unwrap(),
                torsion_by_scan(rat(l, 1), rat(n, 1)),
                "l={l}, n={n}"
            );
        }
        // Non-integer lengths too.
        let spec = LoopSpec::rational(rat(1, 2), rat(1, 3));
        assert_eq!(loop_torsion(&spec).unwrap(), torsion_by_scan(rat(1, 2), rat(1, 3)));
    }

    #[test]
    fn nonpositive_length_rejected() {
        assert!(loop_torsion(&rational_loop(0, 1)).is_err());
        assert!(loop_torsion(&rational_loop(1, -2)).is_err());
    }

    #[test]
    fn genericity_threshold() {
        // g = 3, bound 2g-2 = 4.
        let mk = |m2: u64, m3: u64| {
            ChainOfLoops::generic_torsion_free(3)
                .with_torsion_override(vec![0, m2, m3])
                .unwrap()
        };
        assert!(mk(5, 5).is_generic());
        assert!(!mk(4, 5).is_generic());
        assert!(mk(0, 0).is_generic());
        let report = mk(4, 5).genericity();
        assert!(!report.per_loop[1].ok);
        assert!(report.per_loop[2].ok);
    }

    #[test]
    fn m1_defaults_to_zero() {
        let chain = ChainOfLoops::new(
            vec![rational_loop(1, 1), rational_loop(1, 2)],
            vec![rat(0, 1)],
        )
        .unwrap();
        assert_eq!(chain.torsion(), &[0, 3]);
    }

    #[test]
    fn bridge_count_checked() {
        assert!(ChainOfLoops::new(vec![rational_loop(1, 1)], vec![rat(1, 1)]).is_err());
    }

    #[test]
    fn periods() {
        let chain = ChainOfLoops::new(
            vec![rational_loop(1, 2), LoopSpec::TorsionFree],
            vec![rat(0, 1)],
        )
        .unwrap();
        assert_eq!(chain.period(0), Some(rat(3, 1)));
        assert_eq!(chain.period(1), None);
    }
}
