use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complete::EdgePool;
use super::{closes_cycle, Family, PackConfig, PackState, PackStats, Sampling, Tile};
use crate::bounds::{a_of_k, bipartite_bounds, ceil_rational};
use crate::coloring::{Color, Coloring, UNCOLORED};
use crate::error::{Error, Result};
use crate::host::{colex_rank, HostSpec, Vertex};

const ABSENT: u8 = 0;
const PRESENT: u8 = 1;
const CONSUMED: u8 = 2;

struct Packer {
    host: HostSpec,
    n: u32,
    k: u32,
    a: u32,
    palette: u32,
    coloring: Coloring,
    slot: Vec<u32>,
    /// `(left members, right members)` per tile.
    sides: Vec<(Vec<Vertex>, Vec<Vertex>)>,
    tiles: Vec<Tile>,
    /// Same-side pair states, indexed by colex rank over all `2n` vertices.
    pairs: Vec<u8>,
    pool: EdgePool,
    stats: PackStats,
    visited: Vec<bool>,
}

impl Packer {
    fn tile_at(&self, v: Vertex, c: Color) -> Option<usize> {
        match self.slot[v as usize * self.palette as usize + c as usize] {
            0 => None,
            t => Some(t as usize - 1),
        }
    }

    fn pair_state(&self, u: Vertex, v: Vertex) -> u8 {
        let (x, y) = if u < v { (u, v) } else { (v, u) };
        self.pairs[colex_rank(&[x, y]) as usize]
    }

    fn side_pairs_ok(&self, set: &[Vertex]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.pair_state(u, v) == PRESENT))
    }

    fn try_tile(&mut self, left: &[Vertex], right: &[Vertex], color: Color) -> bool {
        self.stats.candidates += 1;
        if left.iter().chain(right).any(|&v| self.tile_at(v, color).is_some()) {
            self.stats.rejected_slot += 1;
            return false;
        }
        if left.iter().any(|&u| right.iter().any(|&v| self.coloring.pair(u, v) != UNCOLORED)) {
            self.stats.rejected_colored += 1;
            return false;
        }
        if !self.side_pairs_ok(left) || !self.side_pairs_ok(right) {
            self.stats.rejected_pair += 1;
            return false;
        }
        if self.creates_two_colored_cycle(left, right, color) {
            self.stats.rejected_conflict += 1;
            return false;
        }
        let idx = self.tiles.len() as u32 + 1;
        for &v in left.iter().chain(right) {
            self.slot[v as usize * self.palette as usize + color as usize] = idx;
        }
        for set in [left, right] {
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    self.pairs[colex_rank(&[u, v]) as usize] = CONSUMED;
                }
            }
        }
        for &u in left {
            for &v in right {
                let e = self.host.pair_rank(u, v);
                self.coloring.set(e, color);
                self.pool.remove(e);
            }
        }
        self.sides.push((left.to_vec(), right.to_vec()));
        let (a_side, b_side) =
            if left.len() as u32 == self.a { (left.to_vec(), right.to_vec()) } else { (right.to_vec(), left.to_vec()) };
        self.tiles.push(Tile::Bip { a_side, b_side, color });
        self.stats.accepted += 1;
        true
    }

    fn creates_two_colored_cycle(&mut self, left: &[Vertex], right: &[Vertex], color: Color) -> bool {
        let palette = self.palette as usize;
        let mut count = vec![0u8; palette];
        let mut partners = Vec::new();
        for &v in left.iter().chain(right) {
            for c in 0..self.palette {
                if c != color && self.tile_at(v, c).is_some() {
                    count[c as usize] += 1;
                    if count[c as usize] == 2 {
                        partners.push(c);
                    }
                }
            }
        }
        let len = 2 * self.k;
        let n = self.n;
        for j in partners {
            let slot = &self.slot;
            let sides = &self.sides;
            let mut nbrs = |w: Vertex, out: &mut Vec<Vertex>| {
                for c in [color, j] {
                    let t = slot[w as usize * palette + c as usize];
                    if t != 0 {
                        let (l, r) = &sides[t as usize - 1];
                        out.extend_from_slice(if w < n { r } else { l });
                    } else if c == color {
                        if left.contains(&w) {
                            out.extend_from_slice(right);
                        } else if right.contains(&w) {
                            out.extend_from_slice(left);
                        }
                    }
                }
            };
            for &u in left {
                for &v in right {
                    if closes_cycle(v, u, len, len, &mut self.visited, &mut nbrs) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn sizes<R: Rng>(&self, rng: &mut R) -> (usize, usize) {
        if rng.gen_bool(0.5) {
            (self.a as usize, self.k as usize - 1)
        } else {
            (self.k as usize - 1, self.a as usize)
        }
    }

    /// Grows a tile around the uncolored edge `(u, v)` using only vertices
    /// that pass the slot, pair-set and uncolored checks.
    fn grow_anchored<R: Rng>(
        &self,
        rng: &mut R,
        u: Vertex,
        v: Vertex,
        left: &mut Vec<Vertex>,
        right: &mut Vec<Vertex>,
    ) -> Option<Color> {
        let (nl, nr) = self.sizes(rng);
        let free: Vec<Color> =
            (0..self.palette).filter(|&c| self.tile_at(u, c).is_none() && self.tile_at(v, c).is_none()).collect();
        if free.is_empty() {
            return None;
        }
        let color = free[rng.gen_range(0..free.len() as u32) as usize];
        left.clear();
        right.clear();
        left.push(u);
        right.push(v);
        let mut options = Vec::new();
        while left.len() < nl || right.len() < nr {
            let grow_left = left.len() < nl;
            let (mine, other, range) =
                if grow_left { (&*left, &*right, 0..self.n) } else { (&*right, &*left, self.n..2 * self.n) };
            options.clear();
            options.extend(range.filter(|&x| {
                !mine.contains(&x)
                    && self.tile_at(x, color).is_none()
                    && mine.iter().all(|&y| self.pair_state(x, y) == PRESENT)
                    && other.iter().all(|&y| self.coloring.pair(x, y) == UNCOLORED)
            }));
            if options.is_empty() {
                return None;
            }
            let x = options[rng.gen_range(0..options.len() as u32) as usize];
            if grow_left {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        Some(color)
    }
}

fn sample_side<R: Rng>(rng: &mut R, lo: u32, n: u32, size: usize, out: &mut Vec<Vertex>) {
    out.clear();
    while out.len() < size {
        let v = lo + rng.gen_range(0..n);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_unstable();
}

/// Same-side pair states over `K_{n,n}`'s `2n` vertices, indexed by colex
/// rank; each same-side pair is present with probability `p(k)`.
fn sample_pair_set<R: Rng>(n: u32, k: u32, rng: &mut R) -> Vec<u8> {
    let p = crate::bounds::p_of_k(u64::from(k));
    let pn = u64::try_from(p.numer()).expect("small numerator");
    let pd = u64::try_from(p.denom()).expect("small denominator");
    let nv = 2 * n;
    let mut pairs = vec![ABSENT; (nv as usize) * (nv as usize - 1) / 2];
    for y in 1..nv {
        for x in 0..y {
            if (x < n) == (y < n) && (pn == pd || rng.gen_range(0..pd) < pn) {
                pairs[colex_rank(&[x, y]) as usize] = PRESENT;
            }
        }
    }
    pairs
}

/// Packs monochromatic `K_{a,k-1}` tiles into `K_{n,n}` with
/// `ceil((1/(2(k-1)) + 1/(2a)) n)` colors.
///
/// Same-side pairs inside a tile must belong to a random pair set (each pair
/// kept with probability `p(k)`) and are consumed by the tile, so two tiles
/// share at most one vertex. No `C_{2k}` in the colored subgraph uses at most
/// two colors.
pub fn pack_bipartite(n: u32, k: u32, cfg: &PackConfig) -> Result<PackState> {
    if k < 3 {
        return Err(Error::Config(format!("k must be at least 3, got {k}")));
    }
    let a = a_of_k(u64::from(k)) as u32;
    if n < a.max(k - 1) {
        return Err(Error::Config(format!("need n >= a(k) = {a}, got {n}")));
    }
    let (stall_limit, cap) = cfg.limits(n)?;
    let (_, upper) = bipartite_bounds(u64::from(n), u64::from(k));
    let palette = u32::try_from(ceil_rational(&upper)).expect("palette fits in u32");
    let host = HostSpec::bipartite(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let nv = 2 * n;
    let pairs = sample_pair_set(n, k, &mut rng);

    let mut pk = Packer {
        host,
        n,
        k,
        a,
        palette,
        coloring: Coloring::uncolored(host),
        slot: vec![0; nv as usize * palette as usize],
        sides: Vec::new(),
        tiles: Vec::new(),
        pairs,
        pool: EdgePool::full(host.edge_count()),
        stats: PackStats::default(),
        visited: vec![false; nv as usize],
    };
    pk.coloring.set_palette_size(palette);
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let mut stall = 0;
    while pk.stats.candidates < cap && stall < stall_limit {
        let (nl, nr) = pk.sizes(&mut rng);
        sample_side(&mut rng, 0, n, nl, &mut left);
        sample_side(&mut rng, n, n, nr, &mut right);
        let color = rng.gen_range(0..palette);
        if pk.try_tile(&left, &right, color) {
            stall = 0;
        } else {
            stall += 1;
        }
    }
    if cfg.sampling == Sampling::Anchored {
        stall = 0;
        let mut pair = [0; 2];
        while pk.stats.candidates < cap && stall < stall_limit && !pk.pool.is_empty() {
            pk.stats.anchored_candidates += 1;
            let e = pk.pool.pick(&mut rng);
            host.unrank_into(e, &mut pair);
            let Some(color) = pk.grow_anchored(&mut rng, pair[0], pair[1], &mut left, &mut right) else {
                pk.stats.candidates += 1;
                pk.stats.rejected_slot += 1;
                stall += 1;
                continue;
            };
            if pk.try_tile(&left, &right, color) {
                stall = 0;
            } else {
                stall += 1;
            }
        }
    }
    Ok(PackState {
        family: Family::BipartiteCycles { k },
        coloring: pk.coloring,
        tiles: pk.tiles,
        palette,
        stats: pk.stats,
    })
}

/// Largest number of vertices shared by two distinct tiles.
pub fn max_tile_overlap(tiles: &[Tile]) -> usize {
    let sets: Vec<Vec<Vertex>> = tiles.iter().map(Tile::vertices).collect();
    let mut best = 0;
    for (i, s) in sets.iter().enumerate() {
        for t in &sets[i + 1..] {
            best = best.max(s.iter().filter(|v| t.binary_search(v).is_ok()).count());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check, CheckSpec};
    use crate::CopyKind;

    #[test]
    fn n24_k3_valid() {
        let s = pack_bipartite(24, 3, &PackConfig::new(1)).unwrap();
        assert_eq!(s.palette, 9);
        assert!(max_tile_overlap(&s.tiles) <= 1);
        let r = check(&s.coloring, &CheckSpec::exhaustive(vec![(CopyKind::Cycle(6), 3)])).unwrap();
        assert!(r.ok, "{:?}", r.first_violation());
        for t in &s.tiles {
            let Tile::Bip { a_side, b_side, .. } = t else { panic!() };
            assert_eq!((a_side.len(), b_side.len()), (4, 2));
            assert!(a_side.iter().all(|&x| x < 24) != b_side.iter().all(|&x| x < 24));
        }
        let (c, m) = s.coverage();
        assert!(c * 4 > m, "coverage {c}/{m}");
    }

    #[test]
    fn k4_pair_set_is_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pairs = sample_pair_set(16, 4, &mut rng);
        assert_eq!(pairs.iter().filter(|&&s| s == PRESENT).count(), 2 * 120);
        let pairs = sample_pair_set(16, 3, &mut rng);
        let kept = pairs.iter().filter(|&&s| s == PRESENT).count();
        assert!(kept < 240 && kept > 180, "{kept}");
        let s = pack_bipartite(16, 4, &PackConfig::new(2)).unwrap();
        assert!(max_tile_overlap(&s.tiles) <= 1);
        let r = check(&s.coloring, &CheckSpec::exhaustive(vec![(CopyKind::Cycle(8), 3)])).unwrap();
        assert!(r.ok);
    }

    #[test]
    fn deterministic() {
        assert_eq!(pack_bipartite(12, 3, &PackConfig::new(4)).unwrap(), pack_bipartite(12, 3, &PackConfig::new(4)).unwrap());
    }
}
