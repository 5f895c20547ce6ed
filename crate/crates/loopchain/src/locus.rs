//! Brill-Noether loci on the chain, assembled as unions of
//! congruence-constrained coordinate subtori of `Pic^0`, with two independent
//! membership tests: through the torus description and through the rank
//! oracle.

use num_integer::Integer;
use num_traits::Zero;

use crate::chain::ChainOfLoops;
use crate::coords::{reduce_mod, ClassCoords};
use crate::error::{Error, Result};
use crate::oracle::rank_class;
use crate::partition::Partition;
use crate::tableaux::{enumerate_tableaux, DisplacementTableau};
use crate::Rat;

/// A congruence constraint on one coordinate: `xi = value (mod modulus)`,
/// with modulus 0 meaning exact equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    pub value: i64,
    pub modulus: u64,
}

impl Residue {
    fn canonical(value: i64, modulus: u64) -> Residue {
        let value = if modulus == 0 { value } else { value.rem_euclid(modulus as i64) };
        Residue { value, modulus }
    }

    /// Solution set of both congruences, if nonempty (CRT with a gcd test).
    fn merge(&self, other: &Residue) -> Option<Residue> {
        match (self.modulus, other.modulus) {
            (0, 0) => (self.value == other.value).then(|| self.clone()),
            (0, m) | (m, 0) => {
                let (exact, modular) = if self.modulus == 0 { (self, other) } else { (other, self) };
                ((exact.value - modular.value).rem_euclid(m as i64) == 0)
                    .then(|| exact.clone())
            }
            (m1, m2) => {
                let g = m1.gcd(&m2) as i64;
                let diff = other.value - self.value;
                if diff.rem_euclid(g) != 0 {
                    return None;
                }
                let lcm = (m1 as i64 / g) * m2 as i64;
                // Walk self's class to a common solution; moduli here are the
                // chain's torsion numbers, far too small for overflow games.
                let step = m1 as i64;
                let mut x = self.value;
                while (x - other.value).rem_euclid(m2 as i64) != 0 {
                    x += step;
                }
                Some(Residue::canonical(x, lcm as u64))
            }
        }
    }

    /// Does every solution of `self` satisfy `other`?
    fn implies(&self, other: &Residue) -> bool {
        match (self.modulus, other.modulus) {
            (_, 0) => self.modulus == 0 && self.value == other.value,
            (0, m) => (self.value - other.value).rem_euclid(m as i64) == 0,
            (m1, m2) => {
                m1 % m2 == 0 && (self.value - other.value).rem_euclid(m2 as i64) == 0
            }
        }
    }
}

/// A translate of a coordinate subtorus of `Pic^0`: some coordinates pinned
/// by residues, the rest free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Torus {
    /// One slot per coordinate (loop), `None` = free.
    fixed: Vec<Option<Residue>>,
}

impl Torus {
    pub fn full(g: usize) -> Torus {
        Torus { fixed: vec![None; g] }
    }

    pub fn g(&self) -> usize {
        self.fixed.len()
    }

    pub fn dim(&self) -> usize {
        self.fixed.iter().filter(|c| c.is_none()).count()
    }

    pub fn fixed(&self) -> &[Option<Residue>] {
        &self.fixed
    }

    /// Intersection as a constraint union; `None` when some coordinate's
    /// congruences are incompatible.
    pub fn intersect(&self, other: &Torus) -> Option<Torus> {
        assert_eq!(self.g(), other.g(), "tori live on chains of the same genus");
        let mut fixed = Vec::with_capacity(self.g());
        for (a, b) in self.fixed.iter().zip(&other.fixed) {
            fixed.push(match (a, b) {
                (None, None) => None,
                (Some(r), None) | (None, Some(r)) => Some(r.clone()),
                (Some(ra), Some(rb)) => Some(ra.merge(rb)?),
            });
        }
        Some(Torus { fixed })
    }

    /// Fast compatibility test: is the intersection nonempty?
    pub fn compatible(&self, other: &Torus) -> bool {
        self.fixed.iter().zip(&other.fixed).all(|(a, b)| match (a, b) {
            (Some(ra), Some(rb)) => ra.merge(rb).is_some(),
            _ => true,
        })
    }

    /// Does `self` contain `other` as a subset of `Pic^0`? Decided by
    /// constraint implication, valid because both are coordinate-plane
    /// translates.
    pub fn contains_torus(&self, other: &Torus) -> bool {
        self.fixed.iter().zip(&other.fixed).all(|(a, b)| match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(ra), Some(rb)) => rb.implies(ra),
        })
    }

    /// Class membership: each pinned coordinate must match modulo the loop's
    /// coordinate period (exactly, for torsion-free loops).
    pub fn contains_point(&self, xi: &ClassCoords, chain: &ChainOfLoops) -> Result<bool> {
        if xi.len() != self.g() || chain.g() != self.g() {
            return Err(Error::InvalidInput("genus mismatch".into()));
        }
        for (i, constraint) in self.fixed.iter().enumerate() {
            let Some(residue) = constraint else { continue };
            let target = Rat::from_integer(residue.value.into());
            let matches = match chain.period(i) {
                Some(q) => reduce_mod(&(&xi.xi()[i] - target), &q).is_zero(),
                None => xi.xi()[i] == target,
            };
            if !matches {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The torus cut out by a tableau: coordinate `t(x,y)` is pinned to the
/// diagonal `x - y` modulo that loop's torsion. `None` when the filling pins
/// one coordinate to incompatible residues (never happens for a valid
/// tableau).
pub fn torus_of_tableau(t: &DisplacementTableau, chain: &ChainOfLoops) -> Option<Torus> {
    let mut fixed: Vec<Option<Residue>> = vec![None; chain.g()];
    for (x, y) in t.shape().boxes() {
        let label = t.get(x, y);
        let m = chain.torsion_of_label(label);
        let residue = Residue::canonical(x as i64 - y as i64, m);
        let slot = &mut fixed[label - 1];
        *slot = Some(match slot.take() {
            None => residue,
            Some(existing) => existing.merge(&residue)?,
        });
    }
    Some(Torus { fixed })
}

/// A Brill-Noether locus as a union of tori.
#[derive(Debug, Clone)]
pub struct BNLocus {
    pub shape: Partition,
    pub chain: ChainOfLoops,
    /// Pairwise distinct, in tableau enumeration order.
    pub tori: Vec<Torus>,
    /// The tableaux the tori came from (parallel to `tori` before
    /// deduplication; kept in full for reports).
    pub tableaux: Vec<DisplacementTableau>,
}

/// Assembles the locus of `shape` from all displacement tableaux. Works on
/// any chain; the purity statements only hold on generic ones.
pub fn bn_locus(shape: &Partition, chain: &ChainOfLoops) -> BNLocus {
    let tableaux = enumerate_tableaux(shape, chain);
    let mut tori = Vec::new();
    for t in &tableaux {
        if let Some(torus) = torus_of_tableau(t, chain) {
            if !tori.contains(&torus) {
                tori.push(torus);
            }
        }
    }
    BNLocus {
        shape: shape.clone(),
        chain: chain.clone(),
        tori,
        tableaux,
    }
}

/// Deterministic rational point on a torus: pinned coordinates take their
/// residue value; the `j`-th free coordinate takes `j / B` with `B` the
/// smallest prime above `4g^2`, so sampled values never collide with integer
/// residues after period reduction.
pub fn sample_point(torus: &Torus, chain: &ChainOfLoops) -> Result<ClassCoords> {
    let g = torus.g();
    let b = smallest_prime_above(4 * (g as u64) * (g as u64));
    let mut free_seen = 0i64;
    let xi = torus
        .fixed()
        .iter()
        .map(|slot| match slot {
            Some(residue) => Rat::from_integer(residue.value.into()),
            None => {
                free_seen += 1;
                Rat::new(free_seen.into(), (b as i64).into())
            }
        })
        .collect();
    ClassCoords::new(xi).canonicalize(chain)
}

fn smallest_prime_above(n: u64) -> u64 {
    let mut candidate = n + 1;
    loop {
        let mut is_prime = candidate >= 2;
        let mut f = 2;
        while f * f <= candidate {
            if candidate.is_multiple_of(f) {
                is_prime = false;
                break;
            }
            f += 1;
        }
        if is_prime {
            return candidate;
        }
        candidate += 1;
    }
}

/// Rank conditions encoded by the row-end boxes of `shape`: for row `y` of
/// length `x`, the class shifted to degree `d' = g + y - 1 - x` must have
/// rank at least `y - 1`. Row ends suffice because adding an effective point
/// never lowers rank.
pub fn membership_by_rank(
    xi: &ClassCoords,
    shape: &Partition,
    chain: &ChainOfLoops,
) -> Result<bool> {
    membership_by_rank_boxes(xi, shape, chain, false)
}

/// Debug variant checking the condition of every box, not just row ends;
/// guards the row-end optimization.
pub fn membership_by_rank_all_boxes(
    xi: &ClassCoords,
    shape: &Partition,
    chain: &ChainOfLoops,
) -> Result<bool> {
    membership_by_rank_boxes(xi, shape, chain, true)
}

fn membership_by_rank_boxes(
    xi: &ClassCoords,
    shape: &Partition,
    chain: &ChainOfLoops,
    all_boxes: bool,
) -> Result<bool> {
    let g = chain.g() as i64;
    for y in 1..=shape.num_rows() {
        let row_len = shape.row_len(y);
        let columns: Vec<usize> = if all_boxes { (1..=row_len).collect() } else { vec![row_len] };
        for x in columns {
            let required_rank = y as i64 - 1;
            let shifted_degree = g + y as i64 - 1 - x as i64;
            let rank = if shifted_degree < 0 {
                -1
            } else {
                rank_class(xi, shifted_degree, chain)?
            };
            if rank < required_rank {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership through the torus description.
pub fn membership_by_tableaux(xi: &ClassCoords, locus: &BNLocus) -> Result<bool> {
    if locus.shape.is_empty() {
        return Ok(true);
    }
    for torus in &locus.tori {
        if torus.contains_point(xi, &locus.chain)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of sweeping a full coordinate grid with both membership tests.
#[derive(Debug, Clone)]
pub struct GridReport {
    pub points: u64,
    pub members: u64,
    pub disagreements: Vec<ClassCoords>,
}

impl GridReport {
    pub fn pass(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Sweeps the product grid of `step`-multiples inside one fundamental domain
/// `[0, q_i)` per coordinate and compares the two membership tests at every
/// point. `cap` refuses oversized grids unless lifted.
pub fn cross_validate_grid(
    shape: &Partition,
    chain: &ChainOfLoops,
    step: &Rat,
    cap: Option<u64>,
) -> Result<GridReport> {
    if !chain.is_rational() {
        return Err(Error::Unsupported(
            "grid cross-validation requires a rational chain".into(),
        ));
    }
    let g = chain.g();
    let mut counts = Vec::with_capacity(g);
    for i in 0..g {
        let q = chain.period(i).unwrap();
        let ratio = q / step;
        if !ratio.is_integer() {
            return Err(Error::InvalidInput(format!(
                "step {step} does not divide the period of loop {}",
                i + 1
            )));
        }
        let count: u64 = ratio
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidInput("grid axis too large".into()))?;
        counts.push(count);
    }
    let total = counts
        .iter()
        .try_fold(1u64, |acc, &c| acc.checked_mul(c))
        .ok_or_else(|| Error::Refused("grid size overflows u64".into()))?;
    if let Some(cap) = cap {
        if total > cap {
            return Err(Error::Refused(format!(
                "grid has {total} points, exceeding the cap of {cap}"
            )));
        }
    }

    let locus = bn_locus(shape, chain);
    let mut indices = vec![0u64; g];
    let mut report = GridReport { points: 0, members: 0, disagreements: Vec::new() };
    loop {
        let xi = ClassCoords::new(
            indices
                .iter()
                .map(|&k| Rat::from_integer(k.into()) * step)
                .collect(),
        );
        let by_rank = membership_by_rank(&xi, shape, chain)?;
        let by_tableaux = membership_by_tableaux(&xi, &locus)?;
        report.points += 1;
        if by_tableaux {
            report.members += 1;
        }
        if by_rank != by_tableaux {
            report.disagreements.push(xi);
        }
        // Mixed-radix increment, first coordinate fastest.
        let mut axis = 0;
        loop {
            if axis == g {
                return Ok(report);
            }
            indices[axis] += 1;
            if indices[axis] < counts[axis] {
                break;
            }
            indices[axis] = 0;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::LoopSpec;
    use crate::rat;
    use crate::tableaux::is_displacement_tableau;

    fn part(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    fn tab(rows: &[&[usize]]) -> DisplacementTableau {
        let labels: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        let shape = Partition::new(labels.iter().map(Vec::len).collect()).unwrap();
        DisplacementTableau::new(shape, labels).unwrap()
    }

    fn chain_g2() -> ChainOfLoops {
        ChainOfLoops::new(
            vec![
                LoopSpec::rational(rat(1, 1), rat(2, 1)),
                LoopSpec::rational(rat(1, 1), rat(2, 1)),
            ],
            vec![rat(0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn torus_of_tableau_examples() {
        let chain = ChainOfLoops::generic_torsion_free(2);
        let torus = torus_of_tableau(&tab(&[&[1], &[2]]), &chain).unwrap();
        assert_eq!(torus.dim(), 0);
        assert_eq!(torus.fixed()[0], Some(Residue { value: 0, modulus: 0 }));
        assert_eq!(torus.fixed()[1], Some(Residue { value: -1, modulus: 0 }));

        let chain3 = ChainOfLoops::generic_torsion_free(3);
        let torus = torus_of_tableau(&tab(&[&[2]]), &chain3).unwrap();
        assert_eq!(torus.dim(), 2);
        assert_eq!(torus.fixed()[1], Some(Residue { value: 0, modulus: 0 }));

        let empty = torus_of_tableau(
            &DisplacementTableau::new(Partition::empty(), vec![]).unwrap(),
            &chain3,
        )
        .unwrap();
        assert_eq!(empty.dim(), 3);
    }

    #[test]
    fn intersect_examples() {
        let a = Torus {
            fixed: vec![Some(Residue { value: 0, modulus: 0 }), None],
        };
        let b = Torus {
            fixed: vec![None, Some(Residue { value: -1, modulus: 0 })],
        };
        let both = a.intersect(&b).unwrap();
        assert_eq!(both.dim(), 0);
        assert_eq!(a.intersect(&a).unwrap(), a);

        let c = Torus {
            fixed: vec![Some(Residue::canonical(0, 7)), None],
        };
        let d = Torus {
            fixed: vec![Some(Residue::canonical(-1, 7)), None],
        };
        assert!(c.intersect(&d).is_none());
        assert!(!c.compatible(&d));
    }

    #[test]
    fn intersect_commutative_and_containment_order() {
        let tori = [
            Torus { fixed: vec![Some(Residue::canonical(0, 5)), None, None] },
            Torus { fixed: vec![Some(Residue::canonical(0, 5)), Some(Residue::canonical(1, 0)), None] },
            Torus { fixed: vec![None, None, None] },
        ];
        for a in &tori {
            for b in &tori {
                assert_eq!(a.intersect(b), b.intersect(a));
            }
        }
        // containment via intersect: a contains b iff a ∩ b = b.
        assert!(tori[0].contains_torus(&tori[1]));
        assert_eq!(tori[0].intersect(&tori[1]), Some(tori[1].clone()));
        assert!(tori[2].contains_torus(&tori[0]));
        assert!(!tori[1].contains_torus(&tori[0]));
    }

    #[test]
    fn sample_point_examples() {
        let chain2 = ChainOfLoops::generic_torsion_free(2);
        let torus = Torus {
            fixed: vec![
                Some(Residue { value: 0, modulus: 0 }),
                Some(Residue { value: -1, modulus: 0 }),
            ],
        };
        let xi = sample_point(&torus, &chain2).unwrap();
        assert_eq!(xi.xi(), &[rat(0, 1), rat(-1, 1)]);

        let torus = Torus {
            fixed: vec![Some(Residue { value: 0, modulus: 0 }), None],
        };
        let xi = sample_point(&torus, &chain2).unwrap();
        assert_eq!(xi.xi(), &[rat(0, 1), rat(1, 17)]);

        let chain3 = ChainOfLoops::generic_torsion_free(3);
        let xi = sample_point(&Torus::full(3), &chain3).unwrap();
        assert_eq!(xi.xi(), &[rat(1, 37), rat(2, 37), rat(3, 37)]);
    }

    #[test]
    fn bn_locus_counts() {
        let locus = bn_locus(&part(&[1, 1]), &ChainOfLoops::generic_torsion_free(2));
        assert_eq!(locus.tori.len(), 1);
        assert_eq!(locus.tori[0].dim(), 0);

        let locus = bn_locus(&part(&[1, 1]), &ChainOfLoops::generic_torsion_free(3));
        assert_eq!(locus.tori.len(), 3);
        assert!(locus.tori.iter().all(|t| t.dim() == 1));

        let locus = bn_locus(&part(&[2, 2]), &ChainOfLoops::generic_torsion_free(4));
        assert_eq!(locus.tori.len(), 2);
        assert!(locus.tori.iter().all(|t| t.dim() == 0));

        let locus = bn_locus(&part(&[3]), &ChainOfLoops::generic_torsion_free(2));
        assert!(locus.tori.is_empty());
    }

    #[test]
    fn membership_examples() {
        let chain = chain_g2();
        let shape = part(&[1, 1]);
        let locus = bn_locus(&shape, &chain);

        let hyperelliptic = ClassCoords::from_i64(&[0, -1]);
        assert!(membership_by_rank(&hyperelliptic, &shape, &chain).unwrap());
        assert!(membership_by_tableaux(&hyperelliptic, &locus).unwrap());

        let generic_point = ClassCoords::new(vec![rat(1, 2), rat(1, 2)]);
        assert!(!membership_by_rank(&generic_point, &shape, &chain).unwrap());
        assert!(!membership_by_tableaux(&generic_point, &locus).unwrap());

        let origin = ClassCoords::from_i64(&[0, 0]);
        assert!(!membership_by_tableaux(&origin, &locus).unwrap());

        let empty_locus = bn_locus(&Partition::empty(), &chain);
        assert!(membership_by_tableaux(&origin, &empty_locus).unwrap());
        assert!(membership_by_rank(&origin, &Partition::empty(), &chain).unwrap());
    }

    #[test]
    fn row_end_optimization_guarded() {
        let chain = chain_g2();
        let shapes = [part(&[1, 1]), part(&[2, 1]), part(&[2])];
        let points = [
            ClassCoords::from_i64(&[0, -1]),
            ClassCoords::from_i64(&[0, 0]),
            ClassCoords::new(vec![rat(1, 2), rat(1, 2)]),
        ];
        for shape in &shapes {
            for xi in &points {
                assert_eq!(
                    membership_by_rank(xi, shape, &chain).unwrap(),
                    membership_by_rank_all_boxes(xi, shape, &chain).unwrap(),
                    "shape {shape}"
                );
            }
        }
    }

    #[test]
    fn grid_cross_validation_g2() {
        let chain = chain_g2();
        let report = cross_validate_grid(&part(&[1, 1]), &chain, &rat(1, 2), None).unwrap();
        assert_eq!(report.points, 36);
        assert_eq!(report.members, 1);
        assert!(report.pass());
    }

    #[test]
    fn grid_cap_refusal() {
        let chain = chain_g2();
        let err = cross_validate_grid(&part(&[1, 1]), &chain, &rat(1, 2), Some(10));
        assert!(matches!(err, Err(Error::Refused(_))));
    }

    #[test]
    fn sampled_points_pass_rank_membership() {
        // Soundness on small generic rational chains: every torus sample is a
        // member by the oracle.
        let chain = chain_g2();
        for shape in [part(&[1, 1]), part(&[1]), part(&[2])] {
            let locus = bn_locus(&shape, &chain);
            for torus in &locus.tori {
                let xi = sample_point(torus, &chain).unwrap();
                assert!(
                    membership_by_rank(&xi, &shape, &chain).unwrap(),
                    "shape {shape}, torus {torus:?}"
                );
            }
        }
    }

    #[test]
    fn restriction_tableaux_stay_valid_under_tori() {
        // torus of a tableau is contained in the torus of its restriction.
        let chain = ChainOfLoops::generic_torsion_free(4);
        let shape = part(&[2, 2]);
        let sub = part(&[2]);
        for t in enumerate_tableaux(&shape, &chain) {
            assert!(is_displacement_tableau(&t, &chain).unwrap());
            let restricted = t.restrict(&sub).unwrap();
            let big = torus_of_tableau(&t, &chain).unwrap();
            let small = torus_of_tableau(&restricted, &chain).unwrap();
            assert!(small.contains_torus(&big));
        }
    }
}
