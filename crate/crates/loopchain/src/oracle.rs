//! Independent ground truth for divisor ranks: unit subdivision of the chain
//! to a finite multigraph, q-reduced divisors via Dhar's burning algorithm,
//! and the Baker-Norine rank computed from them.
//!
//! Nothing in here knows about tableaux or tori; the point of this module is
//! that it verifies the combinatorial theory from the outside.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::chain::ChainOfLoops;
use crate::coords::{coords_to_divisor, ClassCoords, MetricDivisor, PointOnChain};
use crate::error::{Error, Result};
use crate::Rat;

/// A connected multigraph with a marked basepoint, remembering how its
/// vertices sit on the metric chain.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    /// Per vertex: (neighbor, edge multiplicity), neighbors distinct.
    adjacency: Vec<Vec<(usize, usize)>>,
    degrees: Vec<usize>,
    edge_count: usize,
    /// Basepoint: the vertex realizing `w_g`.
    q: usize,
    /// Scaling factor: metric length 1 corresponds to `scale` unit edges.
    scale: u64,
    /// `top_path[i][k]` is the vertex at `k` unit steps from `w_i` along the
    /// top edge of loop `i`; index 0 is `w_i`, the last index is `v_i`.
    top_path: Vec<Vec<usize>>,
    /// `bottom_path[i][k]`: `k` unit steps from `v_i` along the bottom edge;
    /// last index is `w_i`.
    bottom_path: Vec<Vec<usize>>,
    /// `bridge_path[i][k]`: `k` unit steps from `w_i` toward `v_{i+1}`;
    /// empty vector for zero-length bridges.
    bridge_path: Vec<Vec<usize>>,
    /// Adjugate and determinant of the reduced Laplacian (basepoint row and
    /// column deleted), in basepoint-skipping vertex order; computed on first
    /// use. The determinant is the number of spanning trees, the adjugate
    /// entries are forest counts, so both stay small at the scales the
    /// oracle is meant for.
    reduced_adjugate: OnceLock<(Vec<Vec<i64>>, i64)>,
}

/// Chip counts per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGraphDivisor {
    pub chips: Vec<i64>,
}

impl FiniteGraphDivisor {
    pub fn zero(n: usize) -> Self {
        FiniteGraphDivisor { chips: vec![0; n] }
    }

    pub fn degree(&self) -> i64 {
        self.chips.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.chips.iter().all(|&c| c >= 0)
    }
}

struct GraphBuilder {
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_count: usize,
}

impl GraphBuilder {
    fn new() -> Self {
        GraphBuilder { adjacency: Vec::new(), edge_count: 0 }
    }

    fn vertex(&mut self) -> usize {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "unit subdivision never produces self-loops");
        self.edge_count += 1;
        for (from, to) in [(a, b), (b, a)] {
            match self.adjacency[from].iter_mut().find(|(v, _)| *v == to) {
                Some((_, m)) => *m += 1,
                None => self.adjacency[from].push((to, 1)),
            }
        }
    }

    /// A path of `len` unit edges from `a` to `b`; returns all `len + 1`
    /// vertices including the endpoints.
    fn path(&mut self, a: usize, b: usize, len: u64) -> Vec<usize> {
        assert!(len >= 1);
        let mut vertices = vec![a];
        for _ in 1..len {
            let v = self.vertex();
            vertices.push(v);
        }
        vertices.push(b);
        for pair in vertices.windows(2) {
            self.edge(pair[0], pair[1]);
        }
        vertices
    }
}

fn scaled_integer_length(value: &Rat, scale: u64, what: &str) -> Result<u64> {
    let scaled = value * Rat::from_integer(scale.into());
    if !scaled.is_integer() {
        return Err(Error::InvalidInput(format!(
            "{what} = {value} does not become an integer at denominator {scale}"
        )));
    }
    scaled.to_integer().to_u64().ok_or_else(|| {
        Error::InvalidInput(format!("scaled length for {what} out of range"))
    })
}

/// The unit-length subdivision of the chain at the given scale: every metric
/// edge of scaled length `L` becomes a path of `L` unit edges. Zero bridges
/// identify `w_i` with `v_{i+1}`.
pub fn subdivide_chain(chain: &ChainOfLoops, extra_denominator: u64) -> Result<FiniteGraph> {
    if extra_denominator == 0 {
        return Err(Error::InvalidInput("denominator must be positive".into()));
    }
    if !chain.is_rational() {
        return Err(Error::Unsupported(
            "cannot subdivide a chain with torsion-free loops".into(),
        ));
    }
    let g = chain.g();
    let scale = extra_denominator;
    let mut builder = GraphBuilder::new();
    let mut top_path = Vec::with_capacity(g);
    let mut bottom_path = Vec::with_capacity(g);
    let mut bridge_path = Vec::with_capacity(g.saturating_sub(1));

    let mut v_current = builder.vertex();
    for i in 0..g {
        let (l, n) = chain.lengths(i)?;
        let top_len = scaled_integer_length(&l, scale, "top length")?;
        let bottom_len = scaled_integer_length(&n, scale, "bottom length")?;
        let w = builder.vertex();
        // Stored from w_i to v_i to match the clockwise offset convention.
        let top = builder.path(w, v_current, top_len);
        let bottom = builder.path(v_current, w, bottom_len);
        top_path.push(top);
        bottom_path.push(bottom);
        if i + 1 < g {
            let bridge_len = scaled_integer_length(&chain.bridges()[i], scale, "bridge length")?;
            if bridge_len == 0 {
                v_current = w;
                bridge_path.push(Vec::new());
            } else {
                let v_next = builder.vertex();
                bridge_path.push(builder.path(w, v_next, bridge_len));
                v_current = v_next;
            }
        } else {
            v_current = w;
        }
    }
    let q = v_current; // w_g

    let degrees = builder
        .adjacency
        .iter()
        .map(|adj| adj.iter().map(|&(_, m)| m).sum())
        .collect();
    Ok(FiniteGraph {
        adjacency: builder.adjacency,
        degrees,
        edge_count: builder.edge_count,
        q,
        scale,
        top_path,
        bottom_path,
        bridge_path,
        reduced_adjugate: OnceLock::new(),
    })
}

impl FiniteGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn basepoint(&self) -> usize {
        self.q
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    /// The canonical divisor `K = sum (deg(v) - 2) v`.
    pub fn canonical_divisor(&self) -> FiniteGraphDivisor {
        FiniteGraphDivisor {
            chips: self.degrees.iter().map(|&d| d as i64 - 2).collect(),
        }
    }

    /// First Betti number `E - V + 1`; equals the genus of the chain.
    pub fn genus(&self) -> usize {
        self.edge_count + 1 - self.vertex_count()
    }

    /// The graph vertex realizing a metric point; errors when the point does
    /// not land on the unit lattice at this scale.
    pub fn vertex_of_point(&self, point: &PointOnChain) -> Result<usize> {
        let step_of = |offset: &Rat, what: &str| -> Result<usize> {
            let scaled = offset * Rat::from_integer(self.scale.into());
            if !scaled.is_integer() {
                return Err(Error::InvalidInput(format!(
                    "{what} offset {offset} is not on the subdivision lattice (scale {})",
                    self.scale
                )));
            }
            scaled.to_integer().to_usize().ok_or_else(|| {
                Error::InvalidInput(format!("{what} offset {offset} out of range"))
            })
        };
        match point {
            PointOnChain::W(i) => Ok(self.top_path[*i][0]),
            PointOnChain::V(i) => Ok(*self.top_path[*i].last().unwrap()),
            PointOnChain::TopInterior(i, off) => {
                let step = step_of(off, "top edge")?;
                self.top_path[*i]
                    .get(step)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput("top offset beyond edge".into()))
            }
            PointOnChain::BottomInterior(i, off) => {
                let step = step_of(off, "bottom edge")?;
                self.bottom_path[*i]
                    .get(step)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput("bottom offset beyond edge".into()))
            }
            PointOnChain::BridgeInterior(i, off) => {
                let step = step_of(off, "bridge")?;
                self.bridge_path[*i]
                    .get(step)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput("bridge offset beyond edge".into()))
            }
        }
    }

    /// Chips of a metric divisor placed on graph vertices.
    pub fn divisor_from_metric(&self, divisor: &MetricDivisor) -> Result<FiniteGraphDivisor> {
        let mut chips = vec![0i64; self.vertex_count()];
        for (point, multiplicity) in divisor.points() {
            chips[self.vertex_of_point(point)?] += multiplicity;
        }
        Ok(FiniteGraphDivisor { chips })
    }

    /// Vertices other than the basepoint, in index order; the row/column
    /// order of the reduced Laplacian.
    fn non_basepoint_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| v != self.q).collect()
    }

    /// Adjugate and determinant of the reduced Laplacian, via exact rational
    /// Gauss-Jordan elimination. By the matrix-tree theorem the determinant
    /// counts spanning trees and the adjugate entries count certain spanning
    /// forests, so everything is a (small) nonnegative integer.
    fn reduced_adjugate(&self) -> &(Vec<Vec<i64>>, i64) {
        self.reduced_adjugate.get_or_init(|| {
            let others = self.non_basepoint_vertices();
            let m = others.len();
            let col_of = {
                let mut map = vec![usize::MAX; self.vertex_count()];
                for (c, &v) in others.iter().enumerate() {
                    map[v] = c;
                }
                map
            };
            // [ L~ | I ], eliminated in place.
            let mut a: Vec<Vec<Rat>> = others
                .iter()
                .map(|&v| {
                    let mut row = vec![Rat::zero(); 2 * m];
                    row[col_of[v]] = Rat::from_integer(self.degrees[v].into());
                    for &(u, mult) in &self.adjacency[v] {
                        if u != self.q {
                            row[col_of[u]] -= Rat::from_integer(mult.into());
                        }
                    }
                    row
                })
                .collect();
            for (r, row) in a.iter_mut().enumerate() {
                row[m + r] = Rat::one();
            }
            let mut det = Rat::one();
            for col in 0..m {
                let pivot_row = (col..m)
                    .find(|&r| !a[r][col].is_zero())
                    .expect("reduced Laplacian is invertible");
                if pivot_row != col {
                    a.swap(pivot_row, col);
                    det = -det;
                }
                let pivot = a[col][col].clone();
                det *= &pivot;
                for entry in &mut a[col] {
                    *entry /= &pivot;
                }
                let pivot_row_vals = a[col].clone();
                for (r, row) in a.iter_mut().enumerate() {
                    if r != col && !row[col].is_zero() {
                        let factor = row[col].clone();
                        for (entry, p) in row.iter_mut().zip(&pivot_row_vals) {
                            *entry -= &factor * p;
                        }
                    }
                }
            }
            let det_int = det.to_integer();
            let det_i64 = det_int
                .to_i64()
                .expect("spanning tree count exceeds i64; graph too large for the oracle");
            let adjugate = a
                .iter()
                .map(|row| {
                    row[m..]
                        .iter()
                        .map(|entry| {
                            let scaled = entry * Rat::from_integer(det_int.clone());
                            debug_assert!(scaled.is_integer());
                            scaled
                                .to_integer()
                                .to_i64()
                                .expect("adjugate entry exceeds i64; graph too large for the oracle")
                        })
                        .collect()
                })
                .collect();
            (adjugate, det_i64)
        })
    }

    /// Dhar's burning algorithm from `q`: returns the maximal legal firing
    /// set (the unburnt vertices), empty iff the divisor is q-reduced.
    fn dhar_unburnt(&self, chips: &[i64], q: usize) -> Vec<usize> {
        let n = self.vertex_count();
        let mut burnt = vec![false; n];
        let mut incoming = vec![0i64; n];
        burnt[q] = true;
        let mut stack = vec![q];
        while let Some(u) = stack.pop() {
            for &(v, mult) in &self.adjacency[u] {
                if burnt[v] {
                    continue;
                }
                incoming[v] += mult as i64;
                if incoming[v] > chips[v] {
                    burnt[v] = true;
                    stack.push(v);
                }
            }
        }
        (0..n).filter(|&v| !burnt[v]).collect()
    }

    /// Number of edges from `v` into the complement of `set`.
    fn out_degree(&self, v: usize, in_set: &[bool]) -> i64 {
        self.adjacency[v]
            .iter()
            .filter(|&&(u, _)| !in_set[u])
            .map(|&(_, m)| m as i64)
            .sum()
    }

    /// The unique q-reduced divisor linearly equivalent to `d`, together with
    /// the net firing count of every vertex (the script certifying linear
    /// equivalence through the Laplacian).
    pub fn q_reduce_with_script(
        &self,
        d: &FiniteGraphDivisor,
        q: usize,
    ) -> (FiniteGraphDivisor, Vec<i64>) {
        let n = self.vertex_count();
        let mut chips = d.chips.clone();
        let mut script = vec![0i64; n];

        // Phase 1: make the divisor effective away from q in one exact step.
        // Linear equivalence allows an arbitrary integer firing script x, so
        // solve L~ x = chips - t over Q for the target t(v) = deg(v) and
        // round down. The rounding error costs each vertex at most deg(v)
        // chips, which the deg(v) buffer in the target absorbs: the result
        // is nonnegative away from q.
        assert_eq!(q, self.q, "the adjugate cache is built for the basepoint");
        let others = self.non_basepoint_vertices();
        let (adjugate, det) = self.reduced_adjugate();
        let b: Vec<i128> = others
            .iter()
            .map(|&v| (chips[v] - self.degrees[v] as i64) as i128)
            .collect();
        let mut x = vec![0i64; n];
        for (row, &v) in others.iter().enumerate() {
            let y: i128 = adjugate[row]
                .iter()
                .zip(&b)
                .map(|(&a, &bv)| a as i128 * bv)
                .sum();
            x[v] = i64::try_from(y.div_euclid(*det as i128))
                .expect("firing script exceeds i64; divisor too large for the oracle");
        }
        for v in 0..n {
            if x[v] == 0 {
                continue;
            }
            chips[v] -= x[v] * self.degrees[v] as i64;
            script[v] += x[v];
            for &(u, m) in &self.adjacency[v] {
                chips[u] += x[v] * m as i64;
            }
        }
        debug_assert!((0..n).all(|v| v == q || chips[v] >= 0));

        // Phase 2: repeatedly fire the maximal legal set found by burning.
        loop {
            let unburnt = self.dhar_unburnt(&chips, q);
            if unburnt.is_empty() {
                break;
            }
            let mut in_set = vec![false; n];
            for &v in &unburnt {
                in_set[v] = true;
            }
            for &v in &unburnt {
                let out = self.out_degree(v, &in_set);
                chips[v] -= out;
                script[v] += 1;
            }
            for &v in &unburnt {
                for &(u, m) in &self.adjacency[v] {
                    if !in_set[u] {
                        chips[u] += m as i64;
                    }
                }
            }
        }

        (FiniteGraphDivisor { chips }, script)
    }

    pub fn q_reduce(&self, d: &FiniteGraphDivisor, q: usize) -> FiniteGraphDivisor {
        self.q_reduce_with_script(d, q).0
    }

    /// Linear equivalence via uniqueness of the q-reduced representative.
    pub fn linearly_equivalent(&self, a: &FiniteGraphDivisor, b: &FiniteGraphDivisor) -> bool {
        self.q_reduce(a, self.q) == self.q_reduce(b, self.q)
    }

    /// Baker-Norine rank. Uses `r(D) = 1 + min_v r(D - v)` over the vertex
    /// set (rank-determining for the unit subdivision), memoized on q-reduced
    /// representatives.
    pub fn rank(&self, d: &FiniteGraphDivisor) -> i64 {
        let mut memo: HashMap<Vec<i64>, i64> = HashMap::new();
        self.rank_inner(d, &mut memo)
    }

    fn rank_inner(&self, d: &FiniteGraphDivisor, memo: &mut HashMap<Vec<i64>, i64>) -> i64 {
        if d.degree() < 0 {
            return -1;
        }
        let reduced = self.q_reduce(d, self.q);
        if let Some(&r) = memo.get(&reduced.chips) {
            return r;
        }
        let rank = if reduced.chips[self.q] < 0 {
            -1
        } else {
            let mut min_sub = i64::MAX;
            for v in 0..self.vertex_count() {
                let mut next = reduced.clone();
                next.chips[v] -= 1;
                min_sub = min_sub.min(self.rank_inner(&next, memo));
                if min_sub == -1 {
                    break;
                }
            }
            1 + min_sub
        };
        memo.insert(reduced.chips, rank);
        rank
    }
}

/// Least common multiple of the denominators appearing in the chain's edge
/// lengths, its bridges, and any extra rationals (e.g. divisor positions).
pub fn common_denominator<'a>(
    chain: &ChainOfLoops,
    extra: impl IntoIterator<Item = &'a Rat>,
) -> Result<u64> {
    let mut acc = BigInt::one();
    let mut fold = |r: &Rat| {
        acc = acc.lcm(r.denom());
    };
    for i in 0..chain.g() {
        let (l, n) = chain.lengths(i)?;
        fold(&l);
        fold(&n);
    }
    for b in chain.bridges() {
        fold(b);
    }
    for r in extra {
        fold(r);
    }
    acc.to_u64()
        .ok_or_else(|| Error::InvalidInput("common denominator out of u64 range".into()))
}

fn divisor_position_rationals(divisor: &MetricDivisor) -> Vec<Rat> {
    divisor
        .points()
        .filter_map(|(p, _)| match p {
            PointOnChain::TopInterior(_, off)
            | PointOnChain::BottomInterior(_, off)
            | PointOnChain::BridgeInterior(_, off) => Some(off.clone()),
            _ => None,
        })
        .collect()
}

/// Rank of the class `xi` shifted to the given degree, through the finite
/// oracle on a sufficiently fine subdivision.
pub fn rank_class(xi: &ClassCoords, degree: i64, chain: &ChainOfLoops) -> Result<i64> {
    rank_class_at_scale(xi, degree, chain, 1)
}

/// Same as [`rank_class`] but with the subdivision refined by an extra
/// factor; rank must not depend on it (subdivision invariance).
pub fn rank_class_at_scale(
    xi: &ClassCoords,
    degree: i64,
    chain: &ChainOfLoops,
    extra_factor: u64,
) -> Result<i64> {
    if !chain.is_rational() {
        return Err(Error::Unsupported(
            "rank oracle requires a chain with rational lengths".into(),
        ));
    }
    if degree < 0 {
        return Ok(-1);
    }
    let divisor = coords_to_divisor(xi, degree, chain)?;
    let positions = divisor_position_rationals(&divisor);
    let scale = common_denominator(chain, positions.iter())?
        .checked_mul(extra_factor)
        .ok_or_else(|| Error::InvalidInput("subdivision scale overflow".into()))?;
    let graph = subdivide_chain(chain, scale)?;
    let chips = graph.divisor_from_metric(&divisor)?;
    Ok(graph.rank(&chips))
}

/// Linear equivalence of two classes tested through q-reduced forms, fully
/// independent of the coordinate-period convention.
pub fn classes_equivalent_by_oracle(
    a: &ClassCoords,
    b: &ClassCoords,
    chain: &ChainOfLoops,
) -> Result<bool> {
    let g = chain.g() as i64;
    let da = coords_to_divisor(a, g, chain)?;
    let db = coords_to_divisor(b, g, chain)?;
    let mut positions = divisor_position_rationals(&da);
    positions.extend(divisor_position_rationals(&db));
    let scale = common_denominator(chain, positions.iter())?;
    let graph = subdivide_chain(chain, scale)?;
    let ca = graph.divisor_from_metric(&da)?;
    let cb = graph.divisor_from_metric(&db)?;
    Ok(graph.linearly_equivalent(&ca, &cb))
}
