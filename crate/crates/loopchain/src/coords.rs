//! Divisor-class coordinates on `Pic^0` of a chain of loops, and their
//! concrete divisor avatars.
//!
//! A class is recorded as `g` rationals `xi_1..xi_g`; it stands for the class
//! of `sum_i <xi_i>_i - g*w_g`, where `<z>_i` is the point on loop `i` located
//! `z * l_i` units clockwise from `w_i`. Clockwise means leaving `w_i` along
//! the bottom edge (with the loops drawn in the usual way, `w_i` rightmost
//! and the top edge arcing over the top, clockwise motion from `w_i` starts
//! downward). This is the orientation under which the tableau congruences
//! `xi = x - y` pick out the classes the rank oracle confirms; the opposite
//! choice is the `xi -> -xi` automorphism and fails those checks. In these
//! units the coordinate period of loop `i` is `q_i = (l_i + n_i) / l_i`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::chain::ChainOfLoops;
use crate::error::{Error, Result};
use crate::Rat;

/// `x` reduced into `[0, q)`.
pub fn reduce_mod(x: &Rat, q: &Rat) -> Rat {
    x - (x / q).floor() * q
}

/// A point of the metric graph. Interior offsets are strictly inside their
/// edge; vertices have dedicated variants so equality is unambiguous.
/// Loop and bridge indices are 0-based; bridge `i` joins `w_i` to `v_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointOnChain {
    V(usize),
    W(usize),
    /// Offset from `w_i` along the top edge, `0 < off < l_i`.
    TopInterior(usize, Rat),
    /// Offset from `v_i` continuing clockwise along the bottom edge,
    /// `0 < off < n_i`.
    BottomInterior(usize, Rat),
    /// Offset from `w_i` toward `v_{i+1}`, `0 < off < bridge length`.
    BridgeInterior(usize, Rat),
}

/// A divisor with rational positions: finitely many points with integer
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricDivisor {
    points: BTreeMap<PointOnChain, i64>,
}

impl MetricDivisor {
    pub fn new() -> Self {
        MetricDivisor { points: BTreeMap::new() }
    }

    pub fn add(&mut self, point: PointOnChain, multiplicity: i64) {
        if multiplicity == 0 {
            return;
        }
        match self.points.get_mut(&point) {
            Some(m) => {
                *m += multiplicity;
                if *m == 0 {
                    self.points.remove(&point);
                }
            }
            None => {
                self.points.insert(point, multiplicity);
            }
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (&PointOnChain, i64)> {
        self.points.iter().map(|(p, &m)| (p, m))
    }

    pub fn degree(&self) -> i64 {
        self.points.values().sum()
    }
}

impl Default for MetricDivisor {
    fn default() -> Self {
        Self::new()
    }
}

/// A point of `Pic^0(Gamma)` in xi-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCoords {
    xi: Vec<Rat>,
}

impl ClassCoords {
    pub fn new(xi: Vec<Rat>) -> Self {
        ClassCoords { xi }
    }

    pub fn from_i64(xi: &[i64]) -> Self {
        ClassCoords {
            xi: xi.iter().map(|&v| Rat::from_integer(v.into())).collect(),
        }
    }

    pub fn xi(&self) -> &[Rat] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Canonical representative: each rational-loop coordinate reduced into
    /// `[0, q_i)`. Torsion-free coordinates are left untouched (their period
    /// is irrational, so no rational reduction applies).
    pub fn canonicalize(&self, chain: &ChainOfLoops) -> Result<ClassCoords> {
        self.check_len(chain)?;
        let xi = self
            .xi
            .iter()
            .enumerate()
            .map(|(i, v)| match chain.period(i) {
                Some(q) => reduce_mod(v, &q),
                None => v.clone(),
            })
            .collect();
        Ok(ClassCoords { xi })
    }

    fn check_len(&self, chain: &ChainOfLoops) -> Result<()> {
        if self.xi.len() != chain.g() {
            return Err(Error::InvalidInput(format!(
                "coordinate vector has length {}, chain has g = {}",
                self.xi.len(),
                chain.g()
            )));
        }
        Ok(())
    }
}

/// Equality in `Pic^0`: coordinatewise congruence modulo the periods.
pub fn class_equal(a: &ClassCoords, b: &ClassCoords, chain: &ChainOfLoops) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "coordinate vectors have different lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let ca = a.canonicalize(chain)?;
    let cb = b.canonicalize(chain)?;
    Ok(ca == cb)
}

/// The point `<z>_i` on loop `i` (0-based): arc distance `z * l_i` clockwise
/// from `w_i` (bottom edge first), wrapped around the loop of circumference
/// `l_i + n_i`. Internally we measure `s = -z * l_i` in the top-first
/// direction, matching how edge offsets are stored.
pub fn loop_point(chain: &ChainOfLoops, i: usize, z: &Rat) -> Result<PointOnChain> {
    let (l, n) = chain.lengths(i)?;
    let circumference = l.clone() + n;
    let s = reduce_mod(&-(z * l.clone()), &circumference);
    Ok(if s.is_zero() {
        PointOnChain::W(i)
    } else if s < l {
        PointOnChain::TopInterior(i, s)
    } else if s == l {
        PointOnChain::V(i)
    } else {
        PointOnChain::BottomInterior(i, s - l)
    })
}

/// The divisor `sum_i <xi_i>_i + (degree - g) * w_g` representing the class
/// `xi` shifted to the requested degree.
pub fn coords_to_divisor(
    xi: &ClassCoords,
    degree: i64,
    chain: &ChainOfLoops,
) -> Result<MetricDivisor> {
    xi.check_len(chain)?;
    let g = chain.g();
    let mut divisor = MetricDivisor::new();
    for i in 0..g {
        divisor.add(loop_point(chain, i, &xi.xi[i])?, 1);
    }
    divisor.add(PointOnChain::W(g - 1), degree - g as i64);
    Ok(divisor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::LoopSpec;
    use crate::rat;
    use num_traits::Signed;

    fn chain_g2() -> ChainOfLoops {
        // l = (1,1), n = (2,2), zero bridge; periods q_i = 3.
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
    fn class_equal_periods() {
        let chain = chain_g2();
        let a = ClassCoords::from_i64(&[0, 1]);
        let b = ClassCoords::from_i64(&[3, 4]);
        assert!(class_equal(&a, &b, &chain).unwrap());
        let c = ClassCoords::from_i64(&[0, 0]);
        assert!(!class_equal(&a, &c, &chain).unwrap());
        assert!(class_equal(&a, &a, &chain).unwrap());
    }

    #[test]
    fn class_equal_length_mismatch() {
        let chain = chain_g2();
        let a = ClassCoords::from_i64(&[0]);
        let b = ClassCoords::from_i64(&[0, 0]);
        assert!(class_equal(&a, &b, &chain).is_err());
    }

    #[test]
    fn canonicalize_idempotent() {
        let chain = chain_g2();
        let a = ClassCoords::new(vec![rat(-7, 2), rat(22, 3)]);
        let once = a.canonicalize(&chain).unwrap();
        let twice = once.canonicalize(&chain).unwrap();
        assert_eq!(once, twice);
        for (i, v) in once.xi().iter().enumerate() {
            let q = chain.period(i).unwrap();
            assert!(!v.is_negative() && *v < q);
        }
    }

    #[test]
    fn divisor_examples() {
        let chain = chain_g2();

        let d = coords_to_divisor(&ClassCoords::from_i64(&[0, 0]), 2, &chain).unwrap();
        let pts: Vec<_> = d.points().map(|(p, m)| (p.clone(), m)).collect();
        assert_eq!(pts, vec![(PointOnChain::W(0), 1), (PointOnChain::W(1), 1)]);

        // xi_2 = -1: one unit counterclockwise from w_2 is one unit up the
        // top edge, i.e. v_2. With the zero bridge, w_1 + v_2 = 2 w_1 = K,
        // so (0,-1) is the hyperelliptic (canonical) class.
        let d = coords_to_divisor(&ClassCoords::from_i64(&[0, -1]), 2, &chain).unwrap();
        let pts: Vec<_> = d.points().map(|(p, m)| (p.clone(), m)).collect();
        assert_eq!(pts, vec![(PointOnChain::V(1), 1), (PointOnChain::W(0), 1)]);

        // xi_1 = 1/2: half a unit clockwise from w_1 is half a unit down the
        // bottom edge, at offset n - 1/2 = 3/2 from v_1.
        let xi = ClassCoords::new(vec![rat(1, 2), rat(0, 1)]);
        let d = coords_to_divisor(&xi, 3, &chain).unwrap();
        let pts: Vec<_> = d.points().map(|(p, m)| (p.clone(), m)).collect();
        assert_eq!(
            pts,
            vec![
                (PointOnChain::W(1), 2),
                (PointOnChain::BottomInterior(0, rat(3, 2)), 1),
            ]
        );
    }

    #[test]
    fn divisor_degree_is_requested_degree() {
        let chain = chain_g2();
        for degree in -2..5 {
            let xi = ClassCoords::new(vec![rat(5, 3), rat(-1, 2)]);
            let d = coords_to_divisor(&xi, degree, &chain).unwrap();
            assert_eq!(d.degree(), degree);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rat() -> impl Strategy<Value = Rat> {
            (-60i64..60, 1i64..8).prop_map(|(num, den)| rat(num, den))
        }

        proptest! {
            #[test]
            fn reduce_mod_lands_in_range(
                x in arb_rat(),
                q in (1i64..10, 1i64..4).prop_map(|(num, den)| rat(num, den)),
            ) {
                let r = reduce_mod(&x, &q);
                prop_assert!(!r.is_negative() && r < q);
                prop_assert!(((x - r) / q).is_integer());
            }

            #[test]
            fn canonicalize_idempotent_and_preserves_class(
                coords in prop::collection::vec(arb_rat(), 2),
            ) {
                let chain = chain_g2();
                let xi = ClassCoords::new(coords);
                let once = xi.canonicalize(&chain).unwrap();
                let twice = once.canonicalize(&chain).unwrap();
                prop_assert_eq!(&once, &twice);
                prop_assert!(class_equal(&xi, &once, &chain).unwrap());
            }
        }
    }
}
