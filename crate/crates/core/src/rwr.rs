//! Local graphs around a target and random walk with restart on them.

use std::collections::HashMap;

use crate::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::features::{affinity, feature_vector_unchecked, FeatureWeights};
use crate::graph::{Snapshot, UserId};
use crate::scalar::Real;

/// Subgraph induced by the target, its friends and its candidates.
///
/// Adjacency is stored row-wise: row `i` lists `(column, strength)` for every
/// friendship of `vertices[i]` whose other endpoint is also in the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGraph<F> {
    vertices: Vec<UserId>,
    index_of: HashMap<UserId, usize>,
    offsets: Vec<usize>,
    columns: Vec<usize>,
    strengths: Vec<F>,
}

impl<F: Real> LocalGraph<F> {
    /// Builds a graph from explicit undirected weighted edges. Each edge is
    /// stored in both directions with the same strength.
    pub fn from_edges(
        vertices: Vec<UserId>,
        edges: impl IntoIterator<Item = (UserId, UserId, F)>,
    ) -> Result<Self> {
        let index_of = index_vertices(&vertices)?;
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); vertices.len()];
        for (a, b, w) in edges {
            let ia = *index_of.get(&a).ok_or(Error::UnknownUser(a))?;
            let ib = *index_of.get(&b).ok_or(Error::UnknownUser(b))?;
            if ia == ib {
                return Err(Error::SelfPair(a));
            }
            if !(w.is_finite() && w > F::zero()) {
                return Err(Error::InvalidParams(format!(
                    "edge strength must be positive, got {w}"
                )));
            }
            rows[ia].push((ib, w));
            rows[ib].push((ia, w));
        }
        Ok(Self::from_rows(vertices, index_of, rows))
    }

    fn from_rows(
        vertices: Vec<UserId>,
        index_of: HashMap<UserId, usize>,
        rows: Vec<Vec<(usize, F)>>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut columns = Vec::new();
        let mut strengths = Vec::new();
        offsets.push(0);
        for row in rows {
            for (j, w) in row {
                columns.push(j);
                strengths.push(w);
            }
            offsets.push(columns.len());
        }
        LocalGraph {
            vertices,
            index_of,
            offsets,
            columns,
            strengths,
        }
    }

    pub fn vertices(&self) -> &[UserId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: UserId) -> Option<usize> {
        self.index_of.get(&v).copied()
    }

    /// Number of stored directed entries (twice the undirected edge count).
    pub fn entry_count(&self) -> usize {
        self.columns.len()
    }

    /// Strength of the entry from `a` to `b`, if they are adjacent.
    pub fn strength(&self, a: UserId, b: UserId) -> Option<F> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        self.row(ia).find(|&(j, _)| j == ib).map(|(_, w)| w)
    }

    pub(crate) fn row(&self, i: usize) -> impl Iterator<Item = (usize, F)> + '_ {
        let span = self.offsets[i]..self.offsets[i + 1];
        self.columns[span.clone()]
            .iter()
            .copied()
            .zip(self.strengths[span].iter().copied())
    }

    /// Multiplies every strength by `c`.
    pub fn scaled(&self, c: F) -> Self {
        let mut g = self.clone();
        for w in &mut g.strengths {
            *w = *w * c;
        }
        g
    }
}

fn index_vertices(vertices: &[UserId]) -> Result<HashMap<UserId, usize>> {
    let mut index_of = HashMap::with_capacity(vertices.len());
    for (i, &v) in vertices.iter().enumerate() {
        if index_of.insert(v, i).is_some() {
            return Err(Error::InvalidParams(format!("vertex {v} listed twice")));
        }
    }
    Ok(index_of)
}

/// Vertex order: the target, its friends ascending, then candidates in
/// candidate order. `strength(v, w)` is queried once per directed entry.
fn build_with<F: Real>(
    snapshot: &Snapshot,
    u: UserId,
    cands: &CandidateSet,
    strength: impl Fn(UserId, UserId) -> F,
) -> Result<LocalGraph<F>> {
    if cands.target != u {
        return Err(Error::InvalidParams(format!(
            "candidate set targets {} but local graph requested for {u}",
            cands.target
        )));
    }
    let friends = snapshot.neighborhood(u)?;
    let mut vertices = Vec::with_capacity(1 + friends.len() + cands.len());
    vertices.push(u);
    vertices.extend_from_slice(friends);
    vertices.extend(cands.members.iter().copied());
    let index_of = index_vertices(&vertices)?;

    let rows = vertices
        .iter()
        .map(|&v| {
            snapshot
                .neighbors(v)
                .iter()
                .filter_map(|&w| index_of.get(&w).map(|&j| (j, strength(v, w))))
                .collect()
        })
        .collect();
    Ok(LocalGraph::from_rows(vertices, index_of, rows))
}

/// Local graph whose friendship strengths are `1 + affinity(v, w)`.
pub fn build_local_graph<F: Real>(
    snapshot: &Snapshot,
    u: UserId,
    cands: &CandidateSet,
    weights: &FeatureWeights<F>,
) -> Result<LocalGraph<F>> {
    build_with(snapshot, u, cands, |v, w| {
        F::one() + affinity(&feature_vector_unchecked(snapshot, v, w), weights)
    })
}

/// Local graph with every strength set to 1.
pub fn build_unit_local_graph<F: Real>(
    snapshot: &Snapshot,
    u: UserId,
    cands: &CandidateSet,
) -> Result<LocalGraph<F>> {
    build_with(snapshot, u, cands, |_, _| F::one())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwrParams<F> {
    /// Restart probability, in (0, 1).
    pub alpha: F,
    /// Stop once the L1 change between iterations drops below this.
    pub epsilon: F,
    pub max_iters: usize,
}

impl<F: Real> Default for RwrParams<F> {
    fn default() -> Self {
        RwrParams {
            alpha: F::lit(0.4),
            epsilon: F::lit(1e-4),
            max_iters: 50,
        }
    }
}

impl<F: Real> RwrParams<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > F::zero() && self.alpha < F::one()) {
            return Err(Error::InvalidParams(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.epsilon.is_nan() || self.epsilon <= F::zero() {
            return Err(Error::InvalidParams(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParams("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Visit probabilities of the restart walk, aligned with the local graph's
/// vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct RwrDistribution<F> {
    vertices: Vec<UserId>,
    index_of: HashMap<UserId, usize>,
    probabilities: Vec<F>,
    pub iterations: usize,
    pub converged: bool,
}

impl<F: Real> RwrDistribution<F> {
    /// Probability of `v`; zero for vertices outside the local graph.
    pub fn get(&self, v: UserId) -> F {
        self.index_of
            .get(&v)
            .map(|&i| self.probabilities[i])
            .unwrap_or_else(F::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (UserId, F)> + '_ {
        self.vertices
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
    }

    pub fn probabilities(&self) -> &[F] {
        &self.probabilities
    }

    pub fn total(&self) -> F {
        self.probabilities.iter().copied().sum()
    }
}

/// Random walk with restart at `u`.
pub fn rwr_distribution<F: Real>(
    g: &LocalGraph<F>,
    u: UserId,
    params: &RwrParams<F>,
) -> Result<RwrDistribution<F>> {
    rwr_distribution_observed(g, u, params, |_, _| {})
}

/// Same as [`rwr_distribution`], calling `observe(iteration, r)` after every
/// update (iterations count from 1).
///
/// Rows are normalized to transition probabilities; a vertex without edges
/// sends all its mass back to `u`. Iterates
/// `r ← (1 − α)·r·A + α·e_u` from `r = e_u`.
pub fn rwr_distribution_observed<F: Real>(
    g: &LocalGraph<F>,
    u: UserId,
    params: &RwrParams<F>,
    mut observe: impl FnMut(usize, &[F]),
) -> Result<RwrDistribution<F>> {
    params.validate()?;
    let src = g.index_of(u).ok_or(Error::UnknownUser(u))?;
    let n = g.len();

    let mut probs = g.strengths.clone();
    for i in 0..n {
        let span = g.offsets[i]..g.offsets[i + 1];
        let total: F = g.strengths[span.clone()].iter().copied().sum();
        for p in &mut probs[span] {
            *p = *p / total;
        }
    }

    let walk = F::one() - params.alpha;
    let mut r = vec![F::zero(); n];
    r[src] = F::one();
    let mut next = vec![F::zero(); n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iters {
        next.iter_mut().for_each(|x| *x = F::zero());
        next[src] = params.alpha;
        for (i, &ri) in r.iter().enumerate() {
            if ri == F::zero() {
                continue;
            }
            let mass = walk * ri;
            let span = g.offsets[i]..g.offsets[i + 1];
            if span.is_empty() {
                next[src] = next[src] + mass;
            } else {
                for (&j, &p) in g.columns[span.clone()].iter().zip(&probs[span]) {
                    next[j] = next[j] + mass * p;
                }
            }
        }
        let change: F = r.iter().zip(&next).map(|(a, b)| (*a - *b).abs()).sum();
        std::mem::swap(&mut r, &mut next);
        iterations += 1;
        observe(iterations, &r);
        if change < params.epsilon {
            converged = true;
            break;
        }
    }

    Ok(RwrDistribution {
        vertices: g.vertices.clone(),
        index_of: g.index_of.clone(),
        probabilities: r,
        iterations,
        converged,
    })
}
