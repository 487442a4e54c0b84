//! Seeded planted-partition datasets in the snapshot file formats.
//!
//! Users `0..n_users` are split into contiguous, near-equal communities. Each
//! unordered pair becomes a friendship with probability `p_in` inside a
//! community and `p_out` across communities. Schools, groups and IPs are drawn
//! from per-community pools, and interaction counts are drawn only for
//! friendships formed before the split boundary.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::ops::RangeInclusive;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::dataset::{ATTRIBUTES_FILE, EDGES_FILE, INTERACTIONS_FILE, META_FILE};
use crate::error::{Error, Result};
use crate::graph::{
    write_attributes, write_edge_records, write_interactions, AttrKind, AttrRecord, EdgeRecord,
    InteractionRecord, Timestamp, UserId,
};

/// Timestamps are drawn uniformly from `0..TIME_SPAN`.
pub const TIME_SPAN: Timestamp = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_users: u32,
    pub n_communities: u32,
    pub p_in: f64,
    pub p_out: f64,
    pub schools_per_community: u32,
    pub groups_per_community: u32,
    pub ip_pool_per_community: u32,
    /// Mean of the Poisson interaction count per pre-boundary friendship.
    pub interaction_rate: f64,
    /// Share of the time span after the split boundary.
    pub future_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    /// The reference benchmark configuration.
    fn default() -> Self {
        SynthConfig {
            n_users: 10_000,
            n_communities: 50,
            p_in: 0.02,
            p_out: 0.0002,
            schools_per_community: 4,
            groups_per_community: 8,
            ip_pool_per_community: 12,
            interaction_rate: 3.0,
            future_fraction: 0.3,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        let err = |m: String| Err(Error::InvalidParams(m));
        if !prob(self.p_in) || !prob(self.p_out) {
            return err(format!("probabilities must be in [0, 1]: p_in={} p_out={}", self.p_in, self.p_out));
        }
        if self.p_in <= self.p_out {
            return err(format!("p_in ({}) must exceed p_out ({})", self.p_in, self.p_out));
        }
        if !(self.future_fraction > 0.0 && self.future_fraction < 1.0) {
            return err(format!("future_fraction must be in (0, 1), got {}", self.future_fraction));
        }
        if !(self.interaction_rate.is_finite() && self.interaction_rate >= 0.0) {
            return err(format!("interaction_rate must be non-negative, got {}", self.interaction_rate));
        }
        if self.n_users > 0 && self.n_communities == 0 {
            return err("at least one community is required".into());
        }
        Ok(())
    }

    /// Edges with `t <= boundary` form the training snapshot.
    pub fn split_boundary(&self) -> Timestamp {
        (TIME_SPAN as f64 * (1.0 - self.future_fraction)).round() as Timestamp - 1
    }

    /// Community of a user: contiguous blocks of near-equal size.
    pub fn community_of(&self, u: UserId) -> u32 {
        ((u.0 as u64 * self.n_communities as u64) / self.n_users as u64) as u32
    }

    fn community_members(&self, c: u32) -> std::ops::Range<u32> {
        let n = self.n_users as u64;
        let k = self.n_communities as u64;
        let start = (c as u64 * n).div_ceil(k) as u32;
        let end = ((c as u64 + 1) * n).div_ceil(k) as u32;
        start..end
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub config: SynthConfig,
    pub edges: Vec<EdgeRecord>,
    pub attributes: Vec<AttrRecord>,
    pub interactions: Vec<InteractionRecord>,
    pub boundary: Timestamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthSummary {
    pub users: usize,
    pub edges: usize,
    pub future_edges: usize,
    pub attributes: usize,
    pub interactions: usize,
}

impl SynthDataset {
    pub fn summary(&self) -> SynthSummary {
        SynthSummary {
            users: self.config.n_users as usize,
            edges: self.edges.len(),
            future_edges: self.edges.iter().filter(|e| e.t > self.boundary).count(),
            attributes: self.attributes.len(),
            interactions: self.interactions.len(),
        }
    }

    /// Writes the three record files plus `meta`.
    pub fn write_to(&self, dir: &Path) -> Result<SynthSummary> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let open = |name: &str| {
            let path = dir.join(name);
            File::create(&path)
                .map(BufWriter::new)
                .map_err(|e| Error::io(path, e))
        };
        let io_err = |name: &str| {
            let path = dir.join(name);
            move |e| Error::io(path, e)
        };
        write_edge_records(open(EDGES_FILE)?, &self.edges).map_err(io_err(EDGES_FILE))?;
        write_attributes(open(ATTRIBUTES_FILE)?, &self.attributes).map_err(io_err(ATTRIBUTES_FILE))?;
        write_interactions(open(INTERACTIONS_FILE)?, &self.interactions)
            .map_err(io_err(INTERACTIONS_FILE))?;
        fs::write(dir.join(META_FILE), self.meta_text()).map_err(io_err(META_FILE))?;
        Ok(self.summary())
    }

    fn meta_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "# synthetic planted-partition dataset");
        let _ = writeln!(s, "n_users = {}", c.n_users);
        let _ = writeln!(s, "n_communities = {}", c.n_communities);
        let _ = writeln!(s, "p_in = {}", c.p_in);
        let _ = writeln!(s, "p_out = {}", c.p_out);
        let _ = writeln!(s, "schools_per_community = {}", c.schools_per_community);
        let _ = writeln!(s, "groups_per_community = {}", c.groups_per_community);
        let _ = writeln!(s, "ip_pool_per_community = {}", c.ip_pool_per_community);
        let _ = writeln!(s, "interaction_rate = {}", c.interaction_rate);
        let _ = writeln!(s, "future_fraction = {}", c.future_fraction);
        let _ = writeln!(s, "seed = {}", c.seed);
        let _ = writeln!(s, "time_span = {}", TIME_SPAN);
        let _ = writeln!(s, "split_boundary = {}", self.boundary);
        s
    }
}

/// Indices in `0..count` kept independently with probability `p`, using
/// geometric gaps so sparse blocks cost time proportional to their edges.
fn bernoulli_indices(rng: &mut ChaCha8Rng, count: u64, p: f64) -> Vec<u64> {
    if p <= 0.0 || count == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..count).collect();
    }
    let log_q = (1.0 - p).ln();
    let mut out = Vec::new();
    let mut idx: u64 = 0;
    loop {
        let r: f64 = rng.gen();
        let gap = ((1.0 - r).ln() / log_q).floor();
        if !gap.is_finite() || gap >= (count - idx) as f64 {
            break;
        }
        idx += gap as u64;
        out.push(idx);
        idx += 1;
        if idx >= count {
            break;
        }
    }
    out
}

/// Maps a linear index over the pairs `i < j` of `0..size` to `(i, j)`,
/// walking rows forward from a cursor since indices arrive ascending.
struct TriangleCursor {
    size: u64,
    row: u64,
    row_start: u64,
}

impl TriangleCursor {
    fn new(size: u64) -> Self {
        TriangleCursor {
            size,
            row: 0,
            row_start: 0,
        }
    }

    fn pair(&mut self, k: u64) -> (u64, u64) {
        loop {
            let row_len = self.size - self.row - 1;
            if k < self.row_start + row_len {
                return (self.row, self.row + 1 + (k - self.row_start));
            }
            self.row_start += row_len;
            self.row += 1;
        }
    }
}

/// Draws a `per_user`-sized set of distinct values from the community pool
/// `offset..offset + pool`.
fn draw_values(
    rng: &mut ChaCha8Rng,
    pool: u32,
    offset: u32,
    per_user: RangeInclusive<usize>,
    user: UserId,
    kind: AttrKind,
    out: &mut Vec<AttrRecord>,
) {
    if pool == 0 {
        return;
    }
    let k = rng.gen_range(per_user).min(pool as usize);
    let mut picked: Vec<usize> = sample(rng, pool as usize, k).into_vec();
    picked.sort_unstable();
    out.extend(picked.into_iter().map(|i| AttrRecord {
        user,
        kind,
        value: offset + i as u32,
    }));
}

/// Generates a dataset in memory. Deterministic in `cfg`.
pub fn generate(cfg: &SynthConfig) -> Result<SynthDataset> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let boundary = cfg.split_boundary();
    if cfg.n_users == 0 {
        return Ok(SynthDataset {
            config: cfg.clone(),
            edges: Vec::new(),
            attributes: Vec::new(),
            interactions: Vec::new(),
            boundary,
        });
    }

    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for a in 0..cfg.n_communities {
        let ma = cfg.community_members(a);
        let size = ma.len() as u64;
        let mut cursor = TriangleCursor::new(size);
        for k in bernoulli_indices(&mut rng, size * size.saturating_sub(1) / 2, cfg.p_in) {
            let (i, j) = cursor.pair(k);
            pairs.push((ma.start + i as u32, ma.start + j as u32));
        }
        for b in a + 1..cfg.n_communities {
            let mb = cfg.community_members(b);
            let width = mb.len() as u64;
            for k in bernoulli_indices(&mut rng, size * width, cfg.p_out) {
                pairs.push((ma.start + (k / width) as u32, mb.start + (k % width) as u32));
            }
        }
    }
    let edges: Vec<EdgeRecord> = pairs
        .into_iter()
        .map(|(u, v)| EdgeRecord::new(u, v, rng.gen_range(0..TIME_SPAN)))
        .collect();

    let mut attributes = Vec::new();
    for u in 0..cfg.n_users {
        let user = UserId(u);
        let c = cfg.community_of(user);
        draw_values(&mut rng, cfg.schools_per_community, c * cfg.schools_per_community, 1..=1, user, AttrKind::School, &mut attributes);
        draw_values(&mut rng, cfg.groups_per_community, c * cfg.groups_per_community, 1..=3, user, AttrKind::Group, &mut attributes);
        draw_values(&mut rng, cfg.ip_pool_per_community, c * cfg.ip_pool_per_community, 1..=2, user, AttrKind::Ip, &mut attributes);
    }

    let mut interactions = Vec::new();
    if cfg.interaction_rate > 0.0 {
        let poisson = Poisson::new(cfg.interaction_rate)
            .map_err(|e| Error::InvalidParams(format!("interaction_rate: {e}")))?;
        for e in edges.iter().filter(|e| e.t <= boundary) {
            let count = poisson.sample(&mut rng) as u64;
            if count > 0 {
                interactions.push(InteractionRecord { u: e.u, v: e.v, count });
            }
        }
    }

    Ok(SynthDataset {
        config: cfg.clone(),
        edges,
        attributes,
        interactions,
        boundary,
    })
}

/// Generates and writes a dataset to `out_dir`.
pub fn generate_dataset(cfg: &SynthConfig, out_dir: &Path) -> Result<SynthSummary> {
    generate(cfg)?.write_to(out_dir)
}
