//! Stage one: randomized greedy packing of monochromatic tiles with the
//! conflict predicates checked directly on the partial coloring.

mod bipartite;
mod complete;
mod hyper;

pub use bipartite::{max_tile_overlap, pack_bipartite};
pub use complete::pack_complete;
pub use hyper::{check_class_structure, check_repeat_isolation, pack_hyper, tile_palette};

use rand::Rng;

use crate::coloring::{Color, Coloring};
use crate::enumerate::CopyKind;
use crate::error::{Error, Result};
use crate::host::{binom, HostSpec, Vertex};

/// Which construction a stage-1 state belongs to, with its target family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `K_n` avoiding 2-colored cycles of every length in `k..=ell`.
    Cycles { k: u32, ell: u32 },
    /// `K_{n,n}` avoiding 2-colored `C_{2k}`.
    BipartiteCycles { k: u32 },
    /// `K_n^k` where every `K_{k+2}^k` gets at least `C(k+2,k) - 1` colors.
    HyperCliques { k: u32 },
}

impl Family {
    pub fn host(&self, n: u32) -> Result<HostSpec> {
        match *self {
            Family::Cycles { .. } => Ok(HostSpec::complete(n)),
            Family::BipartiteCycles { .. } => Ok(HostSpec::bipartite(n)),
            Family::HyperCliques { k: 2 } => Ok(HostSpec::complete(n)),
            Family::HyperCliques { k } => HostSpec::uniform(n, k),
        }
    }

    /// Pattern kinds and color thresholds a valid coloring must satisfy.
    pub fn targets(&self) -> Vec<(CopyKind, u32)> {
        match *self {
            Family::Cycles { k, ell } => (k..=ell).map(|m| (CopyKind::Cycle(m), 3)).collect(),
            Family::BipartiteCycles { k } => vec![(CopyKind::Cycle(2 * k), 3)],
            Family::HyperCliques { k } => {
                vec![(CopyKind::CliqueSet(k + 2), binom(u64::from(k) + 2, u64::from(k)) as u32 - 1)]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tile {
    /// A monochromatic `K_{k-1}`.
    Clique { verts: Vec<Vertex>, color: Color },
    /// A monochromatic `K_{|a|,|b|}` between the vertex sets `a_side` and
    /// `b_side`; `|a_side| = a(k)`, `|b_side| = k - 1`. Either set may lie on
    /// the left.
    Bip { a_side: Vec<Vertex>, b_side: Vec<Vertex>, color: Color },
    /// A `K_{k+1}^k` on `verts`. `edge_colors[j]` colors the `k`-subset that
    /// omits `verts[j]`; exactly one color occurs twice.
    Hyper { verts: Vec<Vertex>, edge_colors: Vec<Color> },
}

impl Tile {
    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            Tile::Clique { verts, .. } | Tile::Hyper { verts, .. } => verts.clone(),
            Tile::Bip { a_side, b_side, .. } => {
                let mut v: Vec<Vertex> = a_side.iter().chain(b_side).copied().collect();
                v.sort_unstable();
                v
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PackConfig {
    pub seed: u64,
    /// Longest forbidden cycle for [`pack_complete`]; `None` means `k`.
    pub ell: Option<u32>,
    pub delta: f64,
    /// Consecutive rejections before stopping; `None` means `50 n`.
    pub stall_limit: Option<u64>,
    /// Hard cap on candidates; `None` means `5000 n`.
    pub max_candidates: Option<u64>,
    pub sampling: Sampling,
}

/// How candidate tiles are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Uniform over vertex sets and colors.
    Uniform,
    /// Uniform phase, then candidates grown from a uniformly chosen uncolored
    /// edge until the same stall rule fires again.
    Anchored,
}

impl Sampling {
    pub fn as_str(self) -> &'static str {
        match self {
            Sampling::Uniform => "uniform",
            Sampling::Anchored => "anchored",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "uniform" => Some(Sampling::Uniform),
            "anchored" => Some(Sampling::Anchored),
            _ => None,
        }
    }
}

impl PackConfig {
    pub fn new(seed: u64) -> Self {
        PackConfig {
            seed,
            ell: None,
            delta: 0.15,
            stall_limit: None,
            max_candidates: None,
            sampling: Sampling::Anchored,
        }
    }

    pub fn with_ell(mut self, ell: u32) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub(crate) fn limits(&self, n: u32) -> Result<(u64, u64)> {
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::Config(format!("delta must lie in (0, 1/2), got {}", self.delta)));
        }
        let stall = self.stall_limit.unwrap_or(50 * u64::from(n));
        let cap = self.max_candidates.unwrap_or(5000 * u64::from(n));
        if stall == 0 {
            return Err(Error::Config("stall_limit must be at least 1".into()));
        }
        Ok((stall, cap))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackStats {
    pub candidates: u64,
    pub accepted: u64,
    /// A tile edge was already colored.
    pub rejected_colored: u64,
    /// A (vertex, color) or `(k-1)`-set slot was unavailable.
    pub rejected_slot: u64,
    /// A same-side pair was missing from, or already consumed in, the sampled pair set.
    pub rejected_pair: u64,
    /// Tile-structure constraint between repeated pairs and other colors.
    pub rejected_repeat: u64,
    /// A forbidden few-colored pattern would appear.
    pub rejected_conflict: u64,
    /// Candidates drawn in the anchored phase.
    pub anchored_candidates: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PackState {
    pub family: Family,
    pub coloring: Coloring,
    pub tiles: Vec<Tile>,
    /// Stage-1 palette; stage-1 ids are `0..palette`.
    pub palette: u32,
    pub stats: PackStats,
}

impl PackState {
    pub fn coverage(&self) -> (u64, u64) {
        (self.coloring.colored_count(), self.coloring.host().edge_count())
    }
}

/// `size` distinct values from `0..n`, sorted.
pub(crate) fn sample_distinct<R: Rng + ?Sized>(rng: &mut R, n: u32, size: usize, out: &mut Vec<Vertex>) {
    out.clear();
    while out.len() < size {
        let v = rng.gen_range(0..n);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_unstable();
}

/// Searches for a path `start -> target` whose closing edge `target-start`
/// yields a cycle with length in `min_len..=max_len`. Neighbours come from
/// `nbrs`. `visited` must be all false on entry and is restored.
pub(crate) fn closes_cycle(
    start: Vertex,
    target: Vertex,
    min_len: u32,
    max_len: u32,
    visited: &mut [bool],
    nbrs: &mut dyn FnMut(Vertex, &mut Vec<Vertex>),
) -> bool {
    fn rec(
        w: Vertex,
        edges: u32,
        target: Vertex,
        min_len: u32,
        max_len: u32,
        visited: &mut [bool],
        nbrs: &mut dyn FnMut(Vertex, &mut Vec<Vertex>),
    ) -> bool {
        let mut list = Vec::new();
        nbrs(w, &mut list);
        for x in list {
            if x == target {
                let len = edges + 2;
                if len >= min_len && len <= max_len && edges >= 1 {
                    return true;
                }
            } else if !visited[x as usize] && edges + 2 < max_len {
                visited[x as usize] = true;
                let hit = rec(x, edges + 1, target, min_len, max_len, visited, nbrs);
                visited[x as usize] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    visited[start as usize] = true;
    visited[target as usize] = true;
    let hit = rec(start, 0, target, min_len, max_len, visited, nbrs);
    visited[start as usize] = false;
    visited[target as usize] = false;
    hit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closes_cycle_on_small_graphs() {
        // 5-cycle 0-1-2-3-4-0; ask for a cycle through edge {0,4}.
        let adj: Vec<Vec<Vertex>> = vec![vec![1, 4], vec![0, 2], vec![1, 3], vec![2, 4], vec![3, 0]];
        let mut visited = vec![false; 5];
        let mut nb = |w: Vertex, out: &mut Vec<Vertex>| out.extend_from_slice(&adj[w as usize]);
        assert!(closes_cycle(0, 4, 5, 5, &mut visited, &mut nb));
        assert!(closes_cycle(0, 4, 3, 6, &mut visited, &mut nb));
        assert!(!closes_cycle(0, 4, 3, 4, &mut visited, &mut nb));
        assert!(!closes_cycle(0, 4, 6, 8, &mut visited, &mut nb));
        assert!(visited.iter().all(|&v| !v));
    }
}
