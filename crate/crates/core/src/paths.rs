//! Explicit colorings for long paths built from edge-disjoint clique blocks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::host::{EdgeId, HostSpec, Vertex};

/// Edge-disjoint `K_s` blocks in `K_n` plus the edges they miss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquePacking {
    pub n: u32,
    pub s: u32,
    /// Sorted vertex sets.
    pub blocks: Vec<Vec<Vertex>>,
    /// Uncovered edges, ascending.
    pub leftover: Vec<EdgeId>,
    /// A decomposition was asked for and the search ran out of budget.
    pub fell_back: bool,
}

impl CliquePacking {
    pub fn is_decomposition(&self) -> bool {
        self.leftover.is_empty()
    }
}

/// Node budget per backtracking attempt, and the number of attempts.
pub const DEFAULT_BUDGET: u64 = 2_000_000;
const ATTEMPTS: u64 = 8;

/// Whether `K_n` may decompose into `K_s`: the divisibility conditions plus
/// Fisher's inequality (at least `n` blocks unless `n = s`).
pub fn decomposition_admissible(n: u32, s: u32) -> bool {
    let (n, s) = (u64::from(n), u64::from(s));
    if n == s {
        return true;
    }
    if n < s || (n - 1) % (s - 1) != 0 || (n * (n - 1)) % (s * (s - 1)) != 0 {
        return false;
    }
    n * (n - 1) / (s * (s - 1)) >= n
}

struct Board {
    n: usize,
    s: usize,
    /// `free[u * n + v]`: edge `uv` is not yet in a block.
    free: Vec<bool>,
    remaining: usize,
    blocks: Vec<Vec<Vertex>>,
}

impl Board {
    fn new(n: u32, s: u32) -> Self {
        let n = n as usize;
        let mut free = vec![true; n * n];
        for v in 0..n {
            free[v * n + v] = false;
        }
        Board { n, s: s as usize, free, remaining: n * (n - 1) / 2, blocks: Vec::new() }
    }

    fn is_free(&self, u: Vertex, v: Vertex) -> bool {
        self.free[u as usize * self.n + v as usize]
    }

    fn toggle(&mut self, block: &[Vertex], to: bool) {
        for (i, &u) in block.iter().enumerate() {
            for &v in &block[i + 1..] {
                self.free[u as usize * self.n + v as usize] = to;
                self.free[v as usize * self.n + u as usize] = to;
            }
        }
        let m = self.s * (self.s - 1) / 2;
        if to {
            self.remaining += m;
        } else {
            self.remaining -= m;
        }
    }

    fn place(&mut self, block: &[Vertex]) {
        self.toggle(block, false);
        let mut b = block.to_vec();
        b.sort_unstable();
        self.blocks.push(b);
    }

    fn unplace(&mut self) {
        let b = self.blocks.pop().expect("placed block");
        self.toggle(&b, true);
    }

    /// Vertices joined to every member of `base` by free edges.
    fn common(&self, base: &[Vertex]) -> Vec<Vertex> {
        (0..self.n as Vertex).filter(|&w| !base.contains(&w) && base.iter().all(|&b| self.is_free(b, w))).collect()
    }

    /// Calls `f` on each extension of `base` to a free `K_s` using vertices of
    /// `cands` in order; stops when `f` returns true.
    fn extensions(&self, base: &mut Vec<Vertex>, cands: &[Vertex], f: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if base.len() == self.s {
            return f(base);
        }
        for (i, &w) in cands.iter().enumerate() {
            if base.iter().all(|&b| self.is_free(b, w)) {
                base.push(w);
                let hit = self.extensions(base, &cands[i + 1..], f);
                base.pop();
                if hit {
                    return true;
                }
            }
        }
        false
    }

    fn leftover(&self) -> Vec<EdgeId> {
        let host = HostSpec::complete(self.n as u32);
        let mut out = Vec::new();
        for v in 0..self.n as Vertex {
            for u in 0..v {
                if self.is_free(u, v) {
                    out.push(host.pair_rank(u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Backtracking through the first free edge in `order`; true on a full
/// decomposition, false when impossible or over budget.
fn decompose<R: Rng>(b: &mut Board, order: &[(Vertex, Vertex)], rng: &mut R, nodes: &mut u64, budget: u64) -> bool {
    if b.remaining == 0 {
        return true;
    }
    if *nodes >= budget {
        return false;
    }
    *nodes += 1;
    let &(u, v) = order.iter().find(|&&(u, v)| b.is_free(u, v)).expect("a free edge remains");
    let mut cands = b.common(&[u, v]);
    cands.shuffle(rng);
    let mut options = Vec::new();
    b.extensions(&mut vec![u, v], &cands, &mut |blk| {
        options.push(blk.to_vec());
        false
    });
    for blk in options {
        b.place(&blk);
        if decompose(b, order, rng, nodes, budget) {
            return true;
        }
        b.unplace();
        if *nodes >= budget {
            return false;
        }
    }
    false
}

/// Randomized greedy pass followed by a sweep that makes the packing maximal.
fn greedy<R: Rng>(b: &mut Board, rng: &mut R) {
    let n = b.n as Vertex;
    let mut edges: Vec<(Vertex, Vertex)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    edges.shuffle(rng);
    for &(u, v) in &edges {
        if !b.is_free(u, v) {
            continue;
        }
        let mut cands = b.common(&[u, v]);
        cands.shuffle(rng);
        let mut found = None;
        b.extensions(&mut vec![u, v], &cands, &mut |blk| {
            found = Some(blk.to_vec());
            true
        });
        if let Some(blk) = found {
            b.place(&blk);
        }
    }
}

/// Packs edge-disjoint `K_s` (`s` in {4, 6}) into `K_n`.
///
/// With `exact_when_possible` and an admissible `(n, s)`, seeded backtracking
/// looks for a decomposition; otherwise, or when the budget runs out, the best
/// of several maximal randomized greedy packings is returned.
pub fn pack_cliques(n: u32, s: u32, seed: u64, exact_when_possible: bool) -> Result<CliquePacking> {
    pack_cliques_with_budget(n, s, seed, exact_when_possible, DEFAULT_BUDGET)
}

pub fn pack_cliques_with_budget(n: u32, s: u32, seed: u64, exact_when_possible: bool, budget: u64) -> Result<CliquePacking> {
    if s != 4 && s != 6 {
        return Err(Error::Config(format!("block size must be 4 or 6, got {s}")));
    }
    if n < s {
        return Err(Error::Config(format!("need n >= {s}, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let try_exact = exact_when_possible && decomposition_admissible(n, s);
    if try_exact {
        for _ in 0..ATTEMPTS {
            let mut b = Board::new(n, s);
            let mut perm: Vec<Vertex> = (0..n).collect();
            perm.shuffle(&mut rng);
            let order: Vec<(Vertex, Vertex)> =
                (0..n as usize).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| (perm[i], perm[j])).collect();
            let mut nodes = 0;
            if decompose(&mut b, &order, &mut rng, &mut nodes, budget) {
                let mut blocks = b.blocks;
                blocks.sort();
                return Ok(CliquePacking { n, s, blocks, leftover: Vec::new(), fell_back: false });
            }
        }
    }
    let mut best: Option<Board> = None;
    for _ in 0..ATTEMPTS {
        let mut b = Board::new(n, s);
        greedy(&mut b, &mut rng);
        if best.as_ref().is_none_or(|x| b.blocks.len() > x.blocks.len()) {
            best = Some(b);
        }
    }
    let b = best.expect("at least one attempt");
    let leftover = b.leftover();
    let mut blocks = b.blocks;
    blocks.sort();
    Ok(CliquePacking { n, s, blocks, leftover, fell_back: try_exact })
}

/// Three colors per `K_4` block (its perfect matchings) and a singleton color
/// per leftover edge.
pub fn p6_from_packing(p: &CliquePacking) -> Coloring {
    assert_eq!(p.s, 4);
    let host = HostSpec::complete(p.n);
    let mut c = Coloring::uncolored(host);
    let mut next: Color = 0;
    for blk in &p.blocks {
        let [w, x, y, z] = [blk[0], blk[1], blk[2], blk[3]];
        for pairs in [[(w, x), (y, z)], [(w, y), (x, z)], [(w, z), (x, y)]] {
            for (a, b) in pairs {
                c.set(host.pair_rank(a, b), next);
            }
            next += 1;
        }
    }
    singletons(&mut c, &p.leftover, next);
    c
}

/// Seven colors per `K_6` block: with the block sorted and paired as
/// `(a1,b1),(a2,b2),(a3,b3)`, one color on the three pairs and, for each
/// `i < j`, one color on `{ai aj, bi bj}` and one on `{ai bj, bi aj}`.
pub fn p8_from_packing(p: &CliquePacking) -> Coloring {
    assert_eq!(p.s, 6);
    let host = HostSpec::complete(p.n);
    let mut c = Coloring::uncolored(host);
    let mut next: Color = 0;
    for blk in &p.blocks {
        let a = [blk[0], blk[2], blk[4]];
        let b = [blk[1], blk[3], blk[5]];
        for i in 0..3 {
            c.set(host.pair_rank(a[i], b[i]), next);
        }
        next += 1;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            c.set(host.pair_rank(a[i], a[j]), next);
            c.set(host.pair_rank(b[i], b[j]), next);
            c.set(host.pair_rank(a[i], b[j]), next + 1);
            c.set(host.pair_rank(b[i], a[j]), next + 1);
            next += 2;
        }
    }
    singletons(&mut c, &p.leftover, next);
    c
}

fn singletons(c: &mut Coloring, leftover: &[EdgeId], mut next: Color) {
    for &e in leftover {
        c.set(e, next);
        next += 1;
    }
    c.set_palette_size(next);
}

/// `(P_6, 4)`-coloring of `K_n` from a `K_4` packing.
pub fn color_p6(n: u32, seed: u64) -> Result<Coloring> {
    if n < 2 {
        return Err(Error::Config(format!("need n >= 2, got {n}")));
    }
    if n < 4 {
        return Ok(Coloring::rainbow(HostSpec::complete(n)));
    }
    Ok(p6_from_packing(&pack_cliques(n, 4, seed, true)?))
}

/// Proper `(P_8, 5)`-coloring of `K_n` from a `K_6` packing.
pub fn color_p8_proper(n: u32, seed: u64) -> Result<Coloring> {
    if n < 2 {
        return Err(Error::Config(format!("need n >= 2, got {n}")));
    }
    if n < 6 {
        return Ok(Coloring::rainbow(HostSpec::complete(n)));
    }
    Ok(p8_from_packing(&pack_cliques(n, 6, seed, true)?))
}

/// Rainbow `(P_7, 5)`-coloring.
pub fn color_p7(n: u32) -> Coloring {
    Coloring::rainbow(HostSpec::complete(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_packing(p: &CliquePacking) {
        let host = HostSpec::complete(p.n);
        let mut covered = vec![0u8; host.edge_count() as usize];
        for blk in &p.blocks {
            assert_eq!(blk.len(), p.s as usize);
            for (i, &u) in blk.iter().enumerate() {
                for &v in &blk[i + 1..] {
                    covered[host.pair_rank(u, v).index()] += 1;
                }
            }
        }
        for &e in &p.leftover {
            covered[e.index()] += 1;
        }
        assert!(covered.iter().all(|&c| c == 1));
    }

    #[test]
    fn admissibility() {
        assert!(decomposition_admissible(13, 4));
        assert!(decomposition_admissible(16, 4));
        assert!(!decomposition_admissible(12, 4));
        assert!(decomposition_admissible(6, 6));
        assert!(decomposition_admissible(31, 6));
        // Divisible, but 8 blocks on 16 points break Fisher's inequality.
        assert!(!decomposition_admissible(16, 6));
    }

    #[test]
    fn k4_decompositions() {
        for n in [4, 13, 16] {
            let p = pack_cliques(n, 4, 1, true).unwrap();
            assert_packing(&p);
            assert!(p.is_decomposition(), "n={n}");
            assert_eq!(p.blocks.len() as u32, n * (n - 1) / 12);
        }
    }

    #[test]
    fn k6_whole_graph_and_fallback() {
        let p = pack_cliques(6, 6, 1, true).unwrap();
        assert_eq!(p.blocks, vec![vec![0, 1, 2, 3, 4, 5]]);
        let p = pack_cliques(16, 6, 1, true).unwrap();
        assert_packing(&p);
        assert!(!p.is_decomposition());
        assert!(!p.fell_back);
    }

    #[test]
    fn greedy_is_maximal() {
        let p = pack_cliques(11, 4, 3, true).unwrap();
        assert_packing(&p);
        let host = HostSpec::complete(11);
        let free: std::collections::HashSet<EdgeId> = p.leftover.iter().copied().collect();
        let f = |u: u32, v: u32| free.contains(&host.pair_rank(u, v));
        for a in 0..11 {
            for b in a + 1..11 {
                for c in b + 1..11 {
                    for d in c + 1..11 {
                        assert!(!(f(a, b) && f(a, c) && f(a, d) && f(b, c) && f(b, d) && f(c, d)));
                    }
                }
            }
        }
    }

    #[test]
    fn p6_palette_and_classes() {
        let c = color_p6(13, 1).unwrap();
        assert_eq!(c.palette_size(), 39);
        assert!(c.color_class_sizes().iter().all(|&s| s == 2));
        assert_eq!(color_p6(4, 1).unwrap().palette_size(), 3);
        let p = pack_cliques(10, 4, 2, true).unwrap();
        let c = p6_from_packing(&p);
        assert_eq!(c.palette_size() as usize, 3 * p.blocks.len() + p.leftover.len());
        assert!(c.is_total());
    }

    #[test]
    fn p8_block_is_proper() {
        let c = color_p8_proper(6, 1).unwrap();
        assert_eq!(c.palette_size(), 7);
        let host = *c.host();
        for v in 0..6 {
            let mut seen: Vec<Color> = (0..6).filter(|&u| u != v).map(|u| c.get(host.pair_rank(u, v))).collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), 5);
        }
    }

    #[test]
    fn p7_rainbow() {
        assert_eq!(color_p7(7).palette_size(), 21);
        assert_eq!(color_p7(3).palette_size(), 3);
    }

    #[test]
    fn deterministic() {
        assert_eq!(pack_cliques(14, 4, 9, true).unwrap(), pack_cliques(14, 4, 9, true).unwrap());
    }
}
