use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complete::EdgePool;
use super::{sample_distinct, Family, PackConfig, PackState, PackStats, Sampling, Tile};
use crate::coloring::{Color, Coloring, UNCOLORED};
use crate::enumerate::for_each_subset;
use crate::error::{Error, Result};
use crate::host::{binom, colex_rank, EdgeId, HostSpec, Vertex};

const DEAD: u8 = 0;
const ALIVE: u8 = 1;
const CONSUMED: u8 = 2;

/// Stage-1 palette `ceil((1 + n^-delta) (k^2+k-1)/(k^2+k) n)`.
pub fn tile_palette(n: u32, k: u32, delta: f64) -> u32 {
    let rho = f64::from(n).powf(-delta);
    let kk = f64::from(k * k + k);
    ((1.0 + rho) * (kk - 1.0) / kk * f64::from(n)).ceil() as u32
}

struct Packer {
    host: HostSpec,
    n: u32,
    k: usize,
    palette: u32,
    coloring: Coloring,
    /// `(k-1)`-set slot states, `[S rank * palette + color]`.
    slots: Vec<u8>,
    /// `(S, c)` pairs where `S` is the shared set of a tile's repeated edges and
    /// `c` one of that tile's other colors.
    forbidden: Vec<bool>,
    tiles: Vec<Tile>,
    pool: EdgePool,
    stats: PackStats,
    max_colors_bad: usize,
}

impl Packer {
    fn slot_index(&self, s: &[Vertex], c: Color) -> usize {
        colex_rank(s) as usize * self.palette as usize + c as usize
    }

    /// Edge `j` of the tile on `verts` omits `verts[j]`.
    fn tile_edge(verts: &[Vertex], j: usize, out: &mut Vec<Vertex>) {
        out.clear();
        out.extend(verts.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v));
    }

    /// Vertices of the component holding edge `j`: all of `verts` for the
    /// repeated edge `r`, otherwise the edge itself.
    fn span(verts: &[Vertex], j: usize, r: usize, out: &mut Vec<Vertex>) {
        if j == r {
            out.clear();
            out.extend_from_slice(verts);
        } else {
            Self::tile_edge(verts, j, out);
        }
    }

    fn try_tile(&mut self, verts: &[Vertex], colors: &[Color]) -> bool {
        self.stats.candidates += 1;
        let k = self.k;
        let mut edge = Vec::with_capacity(k);
        let mut ids = Vec::with_capacity(k + 1);
        for j in 0..=k {
            Self::tile_edge(verts, j, &mut edge);
            let id = self.host.rank_unchecked(&edge);
            if self.coloring.get(id) != UNCOLORED {
                self.stats.rejected_colored += 1;
                return false;
            }
            ids.push(id);
        }
        let (r1, r2) = repeated_positions(colors);
        let mut sub = vec![0; k - 1];
        for j in 0..=k {
            if j == r2 {
                continue;
            }
            // The repeated pair spans all of `verts`; a component sharing
            // k-1 vertices with it would share one of its (k-1)-sets.
            Self::span(verts, j, r1, &mut edge);
            let mut ok = true;
            for_each_subset(&edge, k - 1, &mut sub, &mut |s| {
                if self.slots[self.slot_index(s, colors[j])] != ALIVE {
                    ok = false;
                }
            });
            if !ok {
                self.stats.rejected_slot += 1;
                return false;
            }
        }
        let shared: Vec<Vertex> =
            verts.iter().enumerate().filter(|&(i, _)| i != r1 && i != r2).map(|(_, &v)| v).collect();
        for (j, &c) in colors.iter().enumerate() {
            if j == r1 || j == r2 {
                continue;
            }
            // Some edge of color c already contains the shared set.
            if self.slots[self.slot_index(&shared, c)] == CONSUMED {
                self.stats.rejected_repeat += 1;
                return false;
            }
        }
        for j in 0..=k {
            Self::span(verts, j, r1, &mut edge);
            let mut hit = false;
            for_each_subset(&edge, k - 1, &mut sub, &mut |s| {
                if self.forbidden[self.slot_index(s, colors[j])] {
                    hit = true;
                }
            });
            if hit {
                self.stats.rejected_repeat += 1;
                return false;
            }
        }
        for (j, &id) in ids.iter().enumerate() {
            self.coloring.set(id, colors[j]);
        }
        if self.creates_poor_clique(verts) {
            for &id in &ids {
                self.coloring.set(id, UNCOLORED);
            }
            self.stats.rejected_conflict += 1;
            return false;
        }
        for &id in &ids {
            self.pool.remove(id);
        }
        for j in 0..=k {
            if j == r2 {
                continue;
            }
            Self::span(verts, j, r1, &mut edge);
            let c = colors[j];
            let palette = self.palette as usize;
            let slots = &mut self.slots;
            for_each_subset(&edge, k - 1, &mut sub, &mut |s| {
                slots[colex_rank(s) as usize * palette + c as usize] = CONSUMED;
            });
        }
        for (j, &c) in colors.iter().enumerate() {
            if j != r1 && j != r2 {
                let idx = self.slot_index(&shared, c);
                self.forbidden[idx] = true;
            }
        }
        self.tiles.push(Tile::Hyper { verts: verts.to_vec(), edge_colors: colors.to_vec() });
        self.stats.accepted += 1;
        true
    }

    /// Whether some `(k+2)`-set containing a tile edge is bound to end with
    /// too few colors. The tile's colors must already be written.
    fn creates_poor_clique(&self, verts: &[Vertex]) -> bool {
        let k = self.k;
        let mut x = Vec::with_capacity(k + 2);
        let outside: Vec<Vertex> = (0..self.n).filter(|v| !verts.contains(v)).collect();
        for &z in &outside {
            x.clear();
            x.extend_from_slice(verts);
            x.push(z);
            x.sort_unstable();
            if self.is_poor(&x) {
                return true;
            }
        }
        let mut edge = Vec::with_capacity(k);
        for j in 0..=k {
            Self::tile_edge(verts, j, &mut edge);
            for (a, &z1) in outside.iter().enumerate() {
                for &z2 in &outside[a + 1..] {
                    x.clear();
                    x.extend_from_slice(&edge);
                    x.push(z1);
                    x.push(z2);
                    x.sort_unstable();
                    if self.is_poor(&x) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn is_poor(&self, x: &[Vertex]) -> bool {
        poor_clique(&self.coloring, x, self.max_colors_bad)
    }

    fn grow_anchored<R: Rng>(&self, rng: &mut R, e: EdgeId, verts: &mut Vec<Vertex>, colors: &mut Vec<Color>) -> bool {
        let k = self.k;
        let mut base = vec![0; k];
        self.host.unrank_into(e, &mut base);
        let mut edge = Vec::with_capacity(k);
        let mut options: Vec<Vertex> = Vec::new();
        for z in 0..self.n {
            if base.contains(&z) {
                continue;
            }
            let mut b = base.clone();
            b.push(z);
            b.sort_unstable();
            if (0..=k).all(|j| {
                Self::tile_edge(&b, j, &mut edge);
                self.coloring.get(self.host.rank_unchecked(&edge)) == UNCOLORED
            }) {
                options.push(z);
            }
        }
        if options.is_empty() {
            return false;
        }
        let z = options[rng.gen_range(0..options.len() as u32) as usize];
        verts.clear();
        verts.extend_from_slice(&base);
        verts.push(z);
        verts.sort_unstable();
        let r1 = rng.gen_range(0..=k as u32) as usize;
        let mut r2 = rng.gen_range(0..k as u32) as usize;
        if r2 >= r1 {
            r2 += 1;
        }
        colors.clear();
        colors.resize(k + 1, UNCOLORED);
        let mut sub = vec![0; k - 1];
        let mut usable = |edge_pos: &[usize], taken: &[Color], rng: &mut R| -> Option<Color> {
            let mut opts = Vec::new();
            for c in 0..self.palette {
                if taken.contains(&c) {
                    continue;
                }
                let ok = edge_pos.iter().all(|&j| {
                    if edge_pos.len() == 2 {
                        edge.clear();
                        edge.extend_from_slice(verts);
                    } else {
                        Self::tile_edge(verts, j, &mut edge);
                    }
                    let mut fine = true;
                    for_each_subset(&edge, k - 1, &mut sub, &mut |s| {
                        let i = self.slot_index(s, c);
                        if self.slots[i] != ALIVE || self.forbidden[i] {
                            fine = false;
                        }
                    });
                    fine
                });
                if ok {
                    opts.push(c);
                }
            }
            if opts.is_empty() {
                None
            } else {
                Some(opts[rng.gen_range(0..opts.len() as u32) as usize])
            }
        };
        let mut taken = Vec::with_capacity(k);
        let Some(c) = usable(&[r1, r2], &taken, rng) else { return false };
        colors[r1] = c;
        colors[r2] = c;
        taken.push(c);
        for j in 0..=k {
            if j == r1 || j == r2 {
                continue;
            }
            let Some(c) = usable(&[j], &taken, rng) else { return false };
            colors[j] = c;
            taken.push(c);
        }
        true
    }
}

/// Positions of the two edges sharing a color.
fn repeated_positions(colors: &[Color]) -> (usize, usize) {
    for i in 0..colors.len() {
        for j in i + 1..colors.len() {
            if colors[i] == colors[j] {
                return (i, j);
            }
        }
    }
    panic!("tile without a repeated color");
}

/// Whether the clique on `x` ends with at most `max_colors` colors even if
/// every uncolored edge later gets its own new color.
fn poor_clique(coloring: &Coloring, x: &[Vertex], max_colors: usize) -> bool {
    let host = coloring.host();
    let k = host.k() as usize;
    let mut sub = vec![0; k];
    let mut seen: Vec<Color> = Vec::with_capacity(binom(x.len() as u64, k as u64) as usize);
    let mut open = 0;
    for_each_subset(x, k, &mut sub, &mut |s| {
        let c = coloring.get(host.rank_unchecked(s));
        if c == UNCOLORED {
            open += 1;
        } else if !seen.contains(&c) {
            seen.push(c);
        }
    });
    seen.len() + open <= max_colors
}

/// Packs tiles (colored `K_{k+1}^k` with one repeated color) into `K_n^k`.
///
/// Each color/`(k-1)`-set slot is alive with probability `1/(1+rho)`,
/// `rho = n^-delta`; a tile needs every slot of its edges alive and consumes
/// them. The repeated pair's shared `(k-1)`-set never lies in an edge of the
/// tile's other colors, checked against earlier and later tiles. No `(k+2)`-set
/// gets two color repeats among its colored edges.
pub fn pack_hyper(n: u32, k: u32, cfg: &PackConfig) -> Result<PackState> {
    if k < 2 || n < k + 2 {
        return Err(Error::Config(format!("need k >= 2 and n >= k + 2, got n = {n}, k = {k}")));
    }
    let (stall_limit, cap) = cfg.limits(n)?;
    let palette = tile_palette(n, k, cfg.delta);
    if palette < k {
        return Err(Error::Config(format!("palette {palette} smaller than k = {k}")));
    }
    let host = Family::HyperCliques { k }.host(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rho = f64::from(n).powf(-cfg.delta);
    let keep = 1.0 / (1.0 + rho);
    let num_sets = binom(u64::from(n), u64::from(k) - 1) as usize;
    let slots: Vec<u8> =
        (0..num_sets * palette as usize).map(|_| if rng.gen_bool(keep) { ALIVE } else { DEAD }).collect();
    let ku = k as usize;
    let mut p = Packer {
        host,
        n,
        k: ku,
        palette,
        coloring: Coloring::uncolored(host),
        forbidden: vec![false; slots.len()],
        slots,
        tiles: Vec::new(),
        pool: EdgePool::full(host.edge_count()),
        stats: PackStats::default(),
        max_colors_bad: binom(u64::from(k) + 2, u64::from(k)) as usize - 2,
    };
    p.coloring.set_palette_size(palette);

    let mut verts = Vec::with_capacity(ku + 1);
    let mut colors = Vec::with_capacity(ku + 1);
    let mut picked = Vec::with_capacity(ku);
    let mut stall = 0;
    while p.stats.candidates < cap && stall < stall_limit {
        sample_distinct(&mut rng, n, ku + 1, &mut verts);
        sample_distinct(&mut rng, palette, ku, &mut picked);
        // picked[0] is the repeated color; shuffle the assignment to edges.
        let r1 = rng.gen_range(0..=k) as usize;
        let mut r2 = rng.gen_range(0..k) as usize;
        if r2 >= r1 {
            r2 += 1;
        }
        let mut rest = picked[1..].to_vec();
        for i in (1..rest.len()).rev() {
            let j = rng.gen_range(0..=i as u32) as usize;
            rest.swap(i, j);
        }
        colors.clear();
        let mut it = rest.into_iter();
        for j in 0..=ku {
            colors.push(if j == r1 || j == r2 { picked[0] } else { it.next().unwrap() });
        }
        if p.try_tile(&verts, &colors) {
            stall = 0;
        } else {
            stall += 1;
        }
    }
    if cfg.sampling == Sampling::Anchored {
        stall = 0;
        while p.stats.candidates < cap && stall < stall_limit && !p.pool.is_empty() {
            p.stats.anchored_candidates += 1;
            let e = p.pool.pick(&mut rng);
            if !p.grow_anchored(&mut rng, e, &mut verts, &mut colors) {
                p.stats.candidates += 1;
                p.stats.rejected_slot += 1;
                stall += 1;
                continue;
            }
            if p.try_tile(&verts, &colors) {
                stall = 0;
            } else {
                stall += 1;
            }
        }
    }
    Ok(PackState { family: Family::HyperCliques { k }, coloring: p.coloring, tiles: p.tiles, palette, stats: p.stats })
}

/// Checks that every color class is a union of single edges and pairs of
/// edges sharing `k-1` vertices, any two such components meeting in at most
/// `k-2` vertices. Returns a description of the first failure.
pub fn check_class_structure(coloring: &Coloring) -> std::result::Result<(), String> {
    let host = *coloring.host();
    let k = host.k() as usize;
    let mut by_color: HashMap<Color, Vec<Vec<Vertex>>> = HashMap::new();
    for (e, verts) in host.edges() {
        let c = coloring.get(e);
        if c != UNCOLORED {
            by_color.entry(c).or_default().push(verts);
        }
    }
    let mut colors: Vec<_> = by_color.keys().copied().collect();
    colors.sort_unstable();
    for c in colors {
        let edges = &by_color[&c];
        // Components under sharing k-1 vertices.
        let mut comp: Vec<usize> = (0..edges.len()).collect();
        fn find(comp: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while comp[r] != r {
                r = comp[r];
            }
            comp[i] = r;
            r
        }
        let shared = |a: &[Vertex], b: &[Vertex]| a.iter().filter(|v| b.contains(v)).count();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if shared(&edges[i], &edges[j]) == k - 1 {
                    let (ri, rj) = (find(&mut comp, i), find(&mut comp, j));
                    comp[ri] = rj;
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..edges.len() {
            let r = find(&mut comp, i);
            groups.entry(r).or_default().push(i);
        }
        let mut unions = Vec::new();
        for members in groups.values() {
            if members.len() > 2 {
                return Err(format!("color {c} has a component with {} edges", members.len()));
            }
            let mut u: Vec<Vertex> = members.iter().flat_map(|&i| edges[i].iter().copied()).collect();
            u.sort_unstable();
            u.dedup();
            unions.push(u);
        }
        for i in 0..unions.len() {
            for j in i + 1..unions.len() {
                let s = shared(&unions[i], &unions[j]);
                if s > k - 2 {
                    return Err(format!("color {c} has components sharing {s} vertices"));
                }
            }
        }
    }
    Ok(())
}

/// Checks that in every fully colored `K_{k+1}^k` whose edges use exactly `k`
/// colors with one repeated pair, the pair's shared `(k-1)`-set lies in no edge
/// of the other colors present there.
pub fn check_repeat_isolation(coloring: &Coloring) -> std::result::Result<(), String> {
    let host = *coloring.host();
    let k = host.k() as usize;
    let n = host.n();
    let mut containing: std::collections::HashSet<(u64, Color)> = std::collections::HashSet::new();
    let mut sub = vec![0; k - 1];
    for (e, verts) in host.edges() {
        let c = coloring.get(e);
        if c != UNCOLORED {
            for_each_subset(&verts, k - 1, &mut sub, &mut |s| {
                containing.insert((colex_rank(s), c));
            });
        }
    }
    let all: Vec<Vertex> = (0..n).collect();
    let mut b = vec![0; k + 1];
    let mut failure = None;
    let mut edge = Vec::with_capacity(k);
    for_each_subset(&all, k + 1, &mut b, &mut |b| {
        if failure.is_some() {
            return;
        }
        let mut colors = Vec::with_capacity(k + 1);
        for j in 0..=k {
            Packer::tile_edge(b, j, &mut edge);
            colors.push(coloring.get(host.rank_unchecked(&edge)));
        }
        if colors.contains(&UNCOLORED) {
            return;
        }
        let mut distinct = colors.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != k {
            return;
        }
        let (r1, r2) = repeated_positions(&colors);
        let shared: Vec<Vertex> = b.iter().enumerate().filter(|&(i, _)| i != r1 && i != r2).map(|(_, &v)| v).collect();
        let s = colex_rank(&shared);
        for (j, &c) in colors.iter().enumerate() {
            if j != r1 && j != r2 && containing.contains(&(s, c)) {
                failure = Some(format!("tile on {b:?}: shared set {shared:?} lies in an edge of color {c}"));
            }
        }
    });
    failure.map_or(Ok(()), Err)
}
