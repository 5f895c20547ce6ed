//! The rectangle ladder behind the lifting argument, and machine checks of
//! its combinatorial engine: every torus of the combined locus lies in
//! exactly one torus of the intermediate rectangle locus (namely the one cut
//! out by restriction), the intersections are proper and of pure dimension,
//! and the restriction identity propagates diagonal by diagonal.

use crate::chain::ChainOfLoops;
use crate::error::{Error, Result};
use crate::locus::{torus_of_tableau, Torus};
use crate::partition::{schubert_to_partition, Partition, SchubertIndex};
use crate::tableaux::{enumerate_tableaux, DisplacementTableau};

/// The shapes driving the induction for `(g, r, d, alpha)`:
/// rectangles `lambda_j`, their running unions `lambda^j`, the overlaps
/// `mu_j`, and the critical diagonals `k_j`.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub g: usize,
    pub index: SchubertIndex,
    /// `lambda_j`: the `(r+1-j) x (g-d+r+alpha_j)` rectangle, `j = 0..=r`.
    pub rectangles: Vec<Partition>,
    /// `lambda^j = lambda_0 ∪ ... ∪ lambda_j`.
    pub unions: Vec<Partition>,
    /// `mu_j = lambda^j ∩ lambda_{j+1}`, `j = 0..r`.
    pub overlaps: Vec<Partition>,
    /// `k_j = g - d + alpha_j + j`.
    pub diagonals: Vec<i64>,
}

/// Builds the ladder and eagerly verifies its box-set identities; a failure
/// here is a construction bug, not bad input.
pub fn build_ladder(g: usize, index: &SchubertIndex) -> Result<Ladder> {
    let r = index.r;
    let d = index.d;
    let base = g as i64 - d + r as i64;
    if base < 0 {
        return Err(Error::Unsupported(format!("g - d + r = {base} is negative")));
    }
    let rectangles: Vec<Partition> = (0..=r)
        .map(|j| Partition::rectangle(r + 1 - j, (base as u64 + index.alpha[j]) as usize))
        .collect();
    let mut unions = Vec::with_capacity(r + 1);
    unions.push(rectangles[0].clone());
    for j in 1..=r {
        let next = unions[j - 1].union(&rectangles[j]);
        unions.push(next);
    }
    let overlaps: Vec<Partition> = (0..r)
        .map(|j| Partition::rectangle(r - j, (base as u64 + index.alpha[j]) as usize))
        .collect();
    let diagonals: Vec<i64> = (0..r)
        .map(|j| g as i64 - d + index.alpha[j] as i64 + j as i64)
        .collect();

    for j in 0..r {
        let expected = unions[j].intersection(&rectangles[j + 1]);
        if overlaps[j] != expected {
            return Err(Error::Internal(format!(
                "mu_{j} = {} differs from lambda^{j} ∩ lambda_{} = {expected}",
                overlaps[j],
                j + 1
            )));
        }
        let size_ok = unions[j + 1].size()
            == unions[j].size() + rectangles[j + 1].size() - overlaps[j].size();
        if !size_ok {
            return Err(Error::Internal(format!(
                "size identity fails at step {j}: |{}| vs |{}| + |{}| - |{}|",
                unions[j + 1],
                unions[j],
                rectangles[j + 1],
                overlaps[j]
            )));
        }
    }
    let full = schubert_to_partition(g, index)?;
    if unions[r] != full {
        return Err(Error::Internal(format!(
            "lambda^r = {} differs from the induced partition {full}",
            unions[r]
        )));
    }
    Ok(Ladder {
        g,
        index: index.clone(),
        rectangles,
        unions,
        overlaps,
        diagonals,
    })
}

/// A failed containment case: the tableau, whichever overlap tableaux were
/// found to contain its torus, and the expected restriction.
#[derive(Debug, Clone)]
pub struct ContainmentCounterexample {
    pub tableau: DisplacementTableau,
    pub tableau_torus: Torus,
    pub containers: Vec<(DisplacementTableau, Torus)>,
    pub expected_restriction: DisplacementTableau,
}

#[derive(Debug, Clone)]
pub struct UniqueContainmentReport {
    pub j: usize,
    /// True when `|lambda^{j+1}| > g` (no tableaux to check) or the chain is
    /// not generic (results would be advisory only).
    pub vacuous: bool,
    pub checked: usize,
    pub counterexamples: Vec<ContainmentCounterexample>,
}

impl UniqueContainmentReport {
    pub fn pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// For every tableau `t` on `lambda^{j+1}`: its torus lies in exactly one
/// torus of the `mu_j` locus, and that one is cut out by `t` restricted to
/// `mu_j`.
pub fn check_unique_containment(
    ladder: &Ladder,
    j: usize,
    chain: &ChainOfLoops,
) -> Result<UniqueContainmentReport> {
    if j >= ladder.index.r {
        return Err(Error::InvalidInput(format!(
            "step j = {j} out of range for r = {}",
            ladder.index.r
        )));
    }
    let big = &ladder.unions[j + 1];
    let mu = &ladder.overlaps[j];
    if big.size() > ladder.g {
        return Ok(UniqueContainmentReport {
            j,
            vacuous: true,
            checked: 0,
            counterexamples: Vec::new(),
        });
    }
    let big_tableaux = enumerate_tableaux(big, chain);
    let mu_tableaux = enumerate_tableaux(mu, chain);
    let mu_tori: Vec<Torus> = mu_tableaux
        .iter()
        .map(|t| torus_of_tableau(t, chain).expect("valid tableau"))
        .collect();

    let mut counterexamples = Vec::new();
    for t in &big_tableaux {
        let torus = torus_of_tableau(t, chain).expect("valid tableau");
        let containers: Vec<usize> = mu_tori
            .iter()
            .enumerate()
            .filter(|(_, candidate)| candidate.contains_torus(&torus))
            .map(|(i, _)| i)
            .collect();
        let expected = t.restrict(mu)?;
        let unique_and_restriction =
            containers.len() == 1 && mu_tableaux[containers[0]] == expected;
        if !unique_and_restriction {
            counterexamples.push(ContainmentCounterexample {
                tableau: t.clone(),
                tableau_torus: torus,
                containers: containers
                    .iter()
                    .map(|&i| (mu_tableaux[i].clone(), mu_tori[i].clone()))
                    .collect(),
                expected_restriction: expected,
            });
        }
    }
    Ok(UniqueContainmentReport {
        j,
        vacuous: false,
        checked: big_tableaux.len(),
        counterexamples,
    })
}

#[derive(Debug, Clone)]
pub struct ProperIntersectionReport {
    pub j: usize,
    pub vacuous: bool,
    /// |lambda^{j+1}| = |lambda^j| + |lambda_{j+1}| - |mu_j|.
    pub codimension_additive: bool,
    pub pairs_checked: usize,
    pub compatible_pairs: usize,
    /// Pairs whose intersection torus is too large or lies in no torus of the
    /// combined locus.
    pub excess_pairs: Vec<(DisplacementTableau, DisplacementTableau)>,
    /// Combined-locus tableaux whose torus is not the intersection of its two
    /// restrictions' tori.
    pub unrealized: Vec<DisplacementTableau>,
    /// Combined-locus tori failing dim = g - |lambda^{j+1}|.
    pub impure: Vec<DisplacementTableau>,
}

impl ProperIntersectionReport {
    pub fn pass(&self) -> bool {
        self.codimension_additive
            && self.excess_pairs.is_empty()
            && self.unrealized.is_empty()
            && self.impure.is_empty()
    }
}

/// Properness of `W^{lambda^j} ∩ W^{lambda_{j+1}}`: codimensions add, every
/// nonempty pairwise torus intersection has at most the expected dimension
/// and lands inside the combined locus, and every combined-locus torus is
/// realized as such an intersection.
pub fn check_proper_intersection(
    ladder: &Ladder,
    j: usize,
    chain: &ChainOfLoops,
) -> Result<ProperIntersectionReport> {
    if j >= ladder.index.r {
        return Err(Error::InvalidInput(format!(
            "step j = {j} out of range for r = {}",
            ladder.index.r
        )));
    }
    let union_prev = &ladder.unions[j];
    let rect_next = &ladder.rectangles[j + 1];
    let combined = &ladder.unions[j + 1];
    let codimension_additive =
        combined.size() == union_prev.size() + rect_next.size() - ladder.overlaps[j].size();

    if combined.size() > ladder.g {
        return Ok(ProperIntersectionReport {
            j,
            vacuous: true,
            codimension_additive,
            pairs_checked: 0,
            compatible_pairs: 0,
            excess_pairs: Vec::new(),
            unrealized: Vec::new(),
            impure: Vec::new(),
        });
    }
    let expected_dim = ladder.g - combined.size();

    let prev_tableaux = enumerate_tableaux(union_prev, chain);
    let next_tableaux = enumerate_tableaux(rect_next, chain);
    let combined_tableaux = enumerate_tableaux(combined, chain);
    let prev_tori: Vec<Torus> = prev_tableaux
        .iter()
        .map(|t| torus_of_tableau(t, chain).expect("valid tableau"))
        .collect();
    let next_tori: Vec<Torus> = next_tableaux
        .iter()
        .map(|t| torus_of_tableau(t, chain).expect("valid tableau"))
        .collect();
    let combined_tori: Vec<Torus> = combined_tableaux
        .iter()
        .map(|t| torus_of_tableau(t, chain).expect("valid tableau"))
        .collect();

    let mut excess_pairs = Vec::new();
    let mut compatible_pairs = 0;
    let mut pairs_checked = 0;
    for (ta, torus_a) in prev_tableaux.iter().zip(&prev_tori) {
        for (tb, torus_b) in next_tableaux.iter().zip(&next_tori) {
            pairs_checked += 1;
            if !torus_a.compatible(torus_b) {
                continue;
            }
            compatible_pairs += 1;
            let meet = torus_a.intersect(torus_b).expect("compatible");
            let in_combined = combined_tori.iter().any(|t| t.contains_torus(&meet));
            if meet.dim() > expected_dim || !in_combined {
                excess_pairs.push((ta.clone(), tb.clone()));
            }
        }
    }

    let mut unrealized = Vec::new();
    let mut impure = Vec::new();
    for (t, torus) in combined_tableaux.iter().zip(&combined_tori) {
        if torus.dim() != expected_dim {
            impure.push(t.clone());
        }
        let ra = torus_of_tableau(&t.restrict(union_prev)?, chain).expect("valid tableau");
        let rb = torus_of_tableau(&t.restrict(rect_next)?, chain).expect("valid tableau");
        if ra.intersect(&rb).as_ref() != Some(torus) {
            unrealized.push(t.clone());
        }
    }

    Ok(ProperIntersectionReport {
        j,
        vacuous: false,
        codimension_additive,
        pairs_checked,
        compatible_pairs,
        excess_pairs,
        unrealized,
        impure,
    })
}

#[derive(Debug, Clone)]
pub struct DiagonalReport {
    pub j: usize,
    /// Diagonals of `mu_j` in the order they were verified: the critical one
    /// first, then downward, then upward.
    pub verified: Vec<i64>,
    /// Diagonals on which the two tableaux disagree.
    pub mismatches: Vec<i64>,
    /// The overall conclusion `t' = t|_{mu_j}`.
    pub restriction_equal: bool,
}

impl DiagonalReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty() && self.restriction_equal
    }
}

/// Replays the diagonal induction for a pair `t` on `lambda^{j+1}`, `t'` on
/// `mu_j` with `T(t) ⊆ T(t')`: agreement on the critical diagonal `S_{k_j}`
/// first, then outward in both directions, concluding `t' = t|_{mu_j}`.
pub fn diagonal_restriction_check(
    t: &DisplacementTableau,
    t_mu: &DisplacementTableau,
    ladder: &Ladder,
    j: usize,
    chain: &ChainOfLoops,
) -> Result<DiagonalReport> {
    if j >= ladder.index.r {
        return Err(Error::InvalidInput(format!(
            "step j = {j} out of range for r = {}",
            ladder.index.r
        )));
    }
    let mu = &ladder.overlaps[j];
    if t.shape() != &ladder.unions[j + 1] || t_mu.shape() != mu {
        return Err(Error::InvalidInput(
            "tableaux do not match the ladder shapes at this step".into(),
        ));
    }
    let torus_t = torus_of_tableau(t, chain)
        .ok_or_else(|| Error::InvalidInput("inconsistent tableau".into()))?;
    let torus_mu = torus_of_tableau(t_mu, chain)
        .ok_or_else(|| Error::InvalidInput("inconsistent tableau".into()))?;
    if !torus_mu.contains_torus(&torus_t) {
        return Err(Error::InvalidInput(
            "precondition T(t) ⊆ T(t') does not hold".into(),
        ));
    }

    if mu.is_empty() {
        return Ok(DiagonalReport {
            j,
            verified: Vec::new(),
            mismatches: Vec::new(),
            restriction_equal: true,
        });
    }

    let agree_on = |k: i64| -> bool {
        mu.boxes()
            .filter(|&(x, y)| x as i64 - y as i64 == k)
            .all(|(x, y)| t.get(x, y) == t_mu.get(x, y))
    };
    let min_diag = 1 - mu.num_rows() as i64;
    let max_diag = mu.row_len(1) as i64 - 1;
    let critical = ladder.diagonals[j];
    let mut schedule = Vec::new();
    if (min_diag..=max_diag).contains(&critical) {
        schedule.push(critical);
    }
    let mut k = critical - 1;
    while k >= min_diag {
        schedule.push(k);
        k -= 1;
    }
    k = critical + 1;
    while k <= max_diag {
        schedule.push(k);
        k += 1;
    }

    let mut verified = Vec::new();
    let mut mismatches = Vec::new();
    for k in schedule {
        if agree_on(k) {
            verified.push(k);
        } else {
            mismatches.push(k);
        }
    }
    let restriction_equal = &t.restrict(mu)? == t_mu;
    Ok(DiagonalReport {
        j,
        verified,
        mismatches,
        restriction_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainOfLoops;

    fn part(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    fn ladder_g12() -> Ladder {
        let index = SchubertIndex::new(2, 11, vec![0, 1, 2]).unwrap();
        build_ladder(12, &index).unwrap()
    }

    fn ladder_g4() -> Ladder {
        let index = SchubertIndex::new(1, 3, vec![0, 0]).unwrap();
        build_ladder(4, &index).unwrap()
    }

    #[test]
    fn ladder_shapes_g12() {
        let ladder = ladder_g12();
        assert_eq!(ladder.rectangles[0], part(&[3, 3, 3]));
        assert_eq!(ladder.rectangles[1], part(&[4, 4]));
        assert_eq!(ladder.rectangles[2], part(&[5]));
        assert_eq!(ladder.unions[1], part(&[4, 4, 3]));
        assert_eq!(ladder.unions[2], part(&[5, 4, 3]));
        assert_eq!(ladder.overlaps[0], part(&[3, 3]));
        assert_eq!(ladder.overlaps[1], part(&[4]));
        // k_j = g - d + alpha_j + j
        assert_eq!(ladder.diagonals, vec![1, 3]);
    }

    #[test]
    fn ladder_shapes_g4() {
        let ladder = ladder_g4();
        assert_eq!(ladder.rectangles[0], part(&[2, 2]));
        assert_eq!(ladder.rectangles[1], part(&[2]));
        assert_eq!(ladder.overlaps[0], part(&[2]));
        assert_eq!(ladder.unions[1], part(&[2, 2]));
        assert_eq!(ladder.diagonals, vec![1]);
    }

    #[test]
    fn degenerate_ladder_nests() {
        // alpha constant: every next rectangle is inside the running union.
        let index = SchubertIndex::new(2, 6, vec![1, 1, 1]).unwrap();
        let ladder = build_ladder(8, &index).unwrap();
        for j in 0..2 {
            assert!(ladder.rectangles[j + 1].subdiagram_of(&ladder.unions[j]));
            assert_eq!(ladder.unions[j + 1], ladder.unions[j]);
        }
    }

    #[test]
    fn unique_containment_g4() {
        let chain = ChainOfLoops::generic_torsion_free(4);
        let ladder = ladder_g4();
        let report = check_unique_containment(&ladder, 0, &chain).unwrap();
        assert!(!report.vacuous);
        assert_eq!(report.checked, 2);
        assert!(report.pass());
    }

    #[test]
    fn diagonal_example_g4() {
        let chain = ChainOfLoops::generic_torsion_free(4);
        let ladder = ladder_g4();
        let t = DisplacementTableau::new(part(&[2, 2]), vec![vec![1, 2], vec![3, 4]]).unwrap();
        let t_mu = DisplacementTableau::new(part(&[2]), vec![vec![1, 2]]).unwrap();
        let report = diagonal_restriction_check(&t, &t_mu, &ladder, 0, &chain).unwrap();
        assert_eq!(report.verified, vec![1, 0]);
        assert!(report.pass());
    }

    #[test]
    fn diagonal_requires_containment() {
        let chain = ChainOfLoops::generic_torsion_free(4);
        let ladder = ladder_g4();
        let t = DisplacementTableau::new(part(&[2, 2]), vec![vec![1, 2], vec![3, 4]]).unwrap();
        let wrong = DisplacementTableau::new(part(&[2]), vec![vec![1, 3]]).unwrap();
        assert!(diagonal_restriction_check(&t, &wrong, &ladder, 0, &chain).is_err());
    }

    #[test]
    fn proper_intersection_g4() {
        let chain = ChainOfLoops::generic_torsion_free(4);
        let ladder = ladder_g4();
        let report = check_proper_intersection(&ladder, 0, &chain).unwrap();
        assert!(report.codimension_additive);
        assert!(report.pass());
    }

    #[test]
    fn monotone_filtration_g4() {
        // Every combined-locus torus lies in some torus of the previous
        // union's locus (restriction gives a witness).
        let chain = ChainOfLoops::generic_torsion_free(4);
        let ladder = ladder_g4();
        for t in enumerate_tableaux(&ladder.unions[1], &chain) {
            let torus = torus_of_tableau(&t, &chain).unwrap();
            let prev = torus_of_tableau(&t.restrict(&ladder.unions[0]).unwrap(), &chain).unwrap();
            assert!(prev.contains_torus(&torus));
        }
    }

    #[test]
    fn containment_implies_diagonal_pass() {
        let chain = ChainOfLoops::generic_torsion_free(6);
        let index = SchubertIndex::new(1, 5, vec![0, 1]).unwrap();
        let ladder = build_ladder(6, &index).unwrap();
        let mu = &ladder.overlaps[0];
        let mu_tableaux = enumerate_tableaux(mu, &chain);
        for t in enumerate_tableaux(&ladder.unions[1], &chain) {
            let torus = torus_of_tableau(&t, &chain).unwrap();
            for t_mu in &mu_tableaux {
                let candidate = torus_of_tableau(t_mu, &chain).unwrap();
                if candidate.contains_torus(&torus) {
                    let report =
                        diagonal_restriction_check(&t, t_mu, &ladder, 0, &chain).unwrap();
                    assert!(report.pass());
                }
            }
        }
    }
}
