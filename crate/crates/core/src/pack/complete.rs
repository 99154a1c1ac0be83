use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{closes_cycle, sample_distinct, Family, PackConfig, PackState, PackStats, Sampling, Tile};
use crate::coloring::{Color, Coloring, UNCOLORED};
use crate::error::{Error, Result};
use crate::host::{EdgeId, HostSpec, Vertex};

/// Uncolored edges with O(1) removal.
pub(crate) struct EdgePool {
    list: Vec<EdgeId>,
    pos: Vec<u32>,
}

impl EdgePool {
    pub(crate) fn full(m: u64) -> Self {
        EdgePool { list: (0..m).map(EdgeId).collect(), pos: (0..m as u32).collect() }
    }

    pub(crate) fn remove(&mut self, e: EdgeId) {
        let p = self.pos[e.index()];
        if p == u32::MAX {
            return;
        }
        let last = *self.list.last().unwrap();
        self.list.swap_remove(p as usize);
        if last != e {
            self.pos[last.index()] = p;
        }
        self.pos[e.index()] = u32::MAX;
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub(crate) fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> EdgeId {
        self.list[rng.gen_range(0..self.list.len() as u32) as usize]
    }
}

struct Packer {
    host: HostSpec,
    n: u32,
    k: u32,
    ell: u32,
    palette: u32,
    coloring: Coloring,
    /// `slot[v * palette + c]` = 1 + index of the color-`c` tile at `v`, or 0.
    slot: Vec<u32>,
    members: Vec<Vec<Vertex>>,
    tiles: Vec<Tile>,
    pool: EdgePool,
    stats: PackStats,
    visited: Vec<bool>,
    seen_stamp: Vec<u32>,
    seen_count: Vec<u8>,
    stamp: u32,
}

impl Packer {
    fn tile_at(&self, v: Vertex, c: Color) -> Option<usize> {
        match self.slot[v as usize * self.palette as usize + c as usize] {
            0 => None,
            t => Some(t as usize - 1),
        }
    }

    fn try_tile(&mut self, verts: &[Vertex], color: Color) -> bool {
        self.stats.candidates += 1;
        if verts.iter().any(|&v| self.tile_at(v, color).is_some()) {
            self.stats.rejected_slot += 1;
            return false;
        }
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if self.coloring.pair(u, v) != UNCOLORED {
                    self.stats.rejected_colored += 1;
                    return false;
                }
            }
        }
        if self.creates_two_colored_cycle(verts, color) {
            self.stats.rejected_conflict += 1;
            return false;
        }
        let idx = self.tiles.len() as u32;
        for (i, &u) in verts.iter().enumerate() {
            self.slot[u as usize * self.palette as usize + color as usize] = idx + 1;
            for &v in &verts[i + 1..] {
                let e = self.host.pair_rank(u, v);
                self.coloring.set(e, color);
                self.pool.remove(e);
            }
        }
        self.members.push(verts.to_vec());
        self.tiles.push(Tile::Clique { verts: verts.to_vec(), color });
        self.stats.accepted += 1;
        true
    }

    /// Picks a color free at both ends of the uncolored edge `pair`, then adds
    /// uniformly chosen vertices that keep every pair uncolored and the color
    /// free. Returns `None` when no extension exists.
    fn grow_anchored<R: Rng>(&self, rng: &mut R, pair: [Vertex; 2], size: usize, verts: &mut Vec<Vertex>) -> Option<Color> {
        let free: Vec<Color> = (0..self.palette)
            .filter(|&c| pair.iter().all(|&v| self.tile_at(v, c).is_none()))
            .collect();
        if free.is_empty() {
            return None;
        }
        let color = free[rng.gen_range(0..free.len() as u32) as usize];
        verts.clear();
        verts.extend_from_slice(&pair);
        let mut options = Vec::new();
        while verts.len() < size {
            options.clear();
            options.extend((0..self.n).filter(|&x| {
                !verts.contains(&x)
                    && self.tile_at(x, color).is_none()
                    && verts.iter().all(|&v| self.coloring.pair(v, x) == UNCOLORED)
            }));
            if options.is_empty() {
                return None;
            }
            verts.push(options[rng.gen_range(0..options.len() as u32) as usize]);
        }
        verts.sort_unstable();
        Some(color)
    }

    /// Would adding the tile close a cycle of length in `k..=ell` that uses
    /// only its color and one other?
    fn creates_two_colored_cycle(&mut self, verts: &[Vertex], color: Color) -> bool {
        // A cycle through the new tile leaves it at two distinct tile vertices
        // by edges of the other color, so that color must meet the tile twice.
        self.stamp += 1;
        let mut partners = Vec::new();
        for &v in verts {
            for c in 0..self.palette {
                if c != color && self.tile_at(v, c).is_some() {
                    let ci = c as usize;
                    if self.seen_stamp[ci] != self.stamp {
                        self.seen_stamp[ci] = self.stamp;
                        self.seen_count[ci] = 0;
                    }
                    self.seen_count[ci] += 1;
                    if self.seen_count[ci] == 2 {
                        partners.push(c);
                    }
                }
            }
        }
        if partners.is_empty() {
            return false;
        }
        let palette = self.palette as usize;
        for j in partners {
            let slot = &self.slot;
            let members = &self.members;
            let mut nbrs = |w: Vertex, out: &mut Vec<Vertex>| {
                for c in [color, j] {
                    let t = slot[w as usize * palette + c as usize];
                    if t != 0 {
                        out.extend(members[t as usize - 1].iter().copied().filter(|&x| x != w));
                    } else if c == color && verts.contains(&w) {
                        out.extend(verts.iter().copied().filter(|&x| x != w));
                    }
                }
            };
            for (i, &u) in verts.iter().enumerate() {
                for &v in &verts[i + 1..] {
                    if closes_cycle(v, u, self.k, self.ell, &mut self.visited, &mut nbrs) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Packs monochromatic `K_{k-1}` tiles into `K_n` with `ceil(n/(k-2))` colors.
///
/// Same-color tiles are vertex-disjoint and no cycle of length in `k..=ell`
/// inside the colored subgraph uses at most two colors.
pub fn pack_complete(n: u32, k: u32, cfg: &PackConfig) -> Result<PackState> {
    if k < 3 {
        return Err(Error::Config(format!("k must be at least 3, got {k}")));
    }
    let ell = cfg.ell.unwrap_or(k);
    if ell < k {
        return Err(Error::Config(format!("ell = {ell} is below k = {k}")));
    }
    if n < 2 * (k - 1) {
        return Err(Error::Config(format!("need n >= 2(k-1) = {}, got {n}", 2 * (k - 1))));
    }
    let (stall_limit, cap) = cfg.limits(n)?;
    let palette = n.div_ceil(k - 2);
    let host = HostSpec::complete(n);
    let mut p = Packer {
        host,
        n,
        k,
        ell,
        palette,
        coloring: Coloring::uncolored(host),
        slot: vec![0; n as usize * palette as usize],
        members: Vec::new(),
        tiles: Vec::new(),
        pool: EdgePool::full(host.edge_count()),
        stats: PackStats::default(),
        visited: vec![false; n as usize],
        seen_stamp: vec![0; palette as usize],
        seen_count: vec![0; palette as usize],
        stamp: 0,
    };
    p.coloring.set_palette_size(palette);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut verts = Vec::with_capacity(k as usize - 1);
    let size = k as usize - 1;

    let mut stall = 0;
    while p.stats.candidates < cap && stall < stall_limit {
        sample_distinct(&mut rng, n, size, &mut verts);
        let color = rng.gen_range(0..palette);
        if p.try_tile(&verts, color) {
            stall = 0;
        } else {
            stall += 1;
        }
    }
    if cfg.sampling == Sampling::Anchored {
        stall = 0;
        let mut pair = [0; 2];
        while p.stats.candidates < cap && stall < stall_limit && !p.pool.is_empty() {
            p.stats.anchored_candidates += 1;
            let e = p.pool.pick(&mut rng);
            host.unrank_into(e, &mut pair);
            let Some(color) = p.grow_anchored(&mut rng, pair, size, &mut verts) else {
                p.stats.candidates += 1;
                p.stats.rejected_slot += 1;
                stall += 1;
                continue;
            };
            if p.try_tile(&verts, color) {
                stall = 0;
            } else {
                stall += 1;
            }
        }
    }
    Ok(PackState { family: Family::Cycles { k, ell }, coloring: p.coloring, tiles: p.tiles, palette, stats: p.stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check, CheckSpec};

    fn assert_vertex_disjoint_classes(s: &PackState) {
        let k = match s.family {
            Family::Cycles { k, .. } => k,
            _ => unreachable!(),
        };
        let mut owner = std::collections::HashMap::new();
        for (t, tile) in s.tiles.iter().enumerate() {
            let Tile::Clique { verts, color } = tile else { panic!() };
            assert_eq!(verts.len() as u32, k - 1);
            for &v in verts {
                assert!(owner.insert((v, *color), t).is_none(), "vertex {v} twice in color {color}");
            }
        }
        let colored: u64 = s.tiles.len() as u64 * u64::from((k - 1) * (k - 2) / 2);
        assert_eq!(colored, s.coloring.colored_count());
    }

    #[test]
    fn n40_k4_valid() {
        let s = pack_complete(40, 4, &PackConfig::new(1).with_ell(4)).unwrap();
        assert_vertex_disjoint_classes(&s);
        let r = check(&s.coloring, &CheckSpec::exhaustive(vec![(crate::CopyKind::Cycle(4), 3)])).unwrap();
        assert!(r.ok, "{:?}", r.first_violation());
        let (c, m) = s.coverage();
        assert!(c * 2 > m, "coverage {c}/{m}");
    }

    #[test]
    fn longer_cycles_and_k5() {
        for (n, k, ell) in [(24, 4, 6), (24, 5, 6), (20, 3, 5)] {
            let s = pack_complete(n, k, &PackConfig::new(9).with_ell(ell)).unwrap();
            assert_vertex_disjoint_classes(&s);
            let kinds = (k..=ell).map(|m| (crate::CopyKind::Cycle(m), 3)).collect();
            let r = check(&s.coloring, &CheckSpec::exhaustive(kinds)).unwrap();
            assert!(r.ok, "n={n} k={k}: {:?}", r.first_violation());
        }
    }

    #[test]
    fn smallest_host_accepts_two_tiles() {
        for k in 3..7 {
            let s = pack_complete(2 * (k - 1), k, &PackConfig::new(3)).unwrap();
            assert!(s.tiles.len() >= 2, "k={k}");
        }
    }

    #[test]
    fn deterministic() {
        let a = pack_complete(30, 4, &PackConfig::new(5)).unwrap();
        let b = pack_complete(30, 4, &PackConfig::new(5)).unwrap();
        assert_eq!(a, b);
        let c = pack_complete(30, 4, &PackConfig::new(6)).unwrap();
        assert_ne!(a.coloring, c.coloring);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(pack_complete(5, 4, &PackConfig::new(1)).is_err());
        assert!(pack_complete(20, 4, &PackConfig::new(1).with_ell(3)).is_err());
        assert!(pack_complete(20, 4, &PackConfig::new(1).with_delta(0.7)).is_err());
    }
}
