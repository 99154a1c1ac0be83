//! Stage two: color the leftover edges from a fresh palette by Moser–Tardos
//! resampling until no bad event fires.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Color, Coloring, UNCOLORED};
use crate::enumerate::{canonicalize, for_each_subset, CopyKind};
use crate::error::{Error, Result};
use crate::host::{binom, EdgeId, HostMode, HostSpec, Vertex};
use crate::pack::{Family, PackState};

/// A local event whose firing blocks a valid completion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BadEvent {
    /// Two leftover edges sharing a vertex got the same color (`e < f`).
    A { e: EdgeId, f: EdgeId },
    /// An all-leftover cycle, properly colored with two fresh colors.
    B { cycle: Vec<Vertex> },
    /// A cycle mixing leftover and stage-1 edges that uses two colors.
    C { cycle: Vec<Vertex> },
    /// A `(k+2)`-set whose clique has at most `C(k+2,k) - 2` colors.
    HK { set: Vec<Vertex> },
}

impl BadEvent {
    pub fn type_name(&self) -> &'static str {
        match self {
            BadEvent::A { .. } => "A",
            BadEvent::B { .. } => "B",
            BadEvent::C { .. } => "C",
            BadEvent::HK { .. } => "HK",
        }
    }

    /// All host edges of the event.
    pub fn edges(&self, host: &HostSpec) -> Vec<EdgeId> {
        match self {
            BadEvent::A { e, f } => vec![*e, *f],
            BadEvent::B { cycle } | BadEvent::C { cycle } => {
                (0..cycle.len()).map(|i| host.pair_rank(cycle[i], cycle[(i + 1) % cycle.len()])).collect()
            }
            BadEvent::HK { set } => {
                let mut out = Vec::new();
                let mut buf = vec![0; host.k() as usize];
                for_each_subset(set, host.k() as usize, &mut buf, &mut |s| out.push(host.rank_unchecked(s)));
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinishConfig {
    pub seed: u64,
    /// Fresh palette size; `None` picks one from the leftover structure, see
    /// [`FinishConfig::fresh_palette`].
    pub c2: Option<u32>,
    pub max_resamples: u64,
    pub delta: f64,
}

impl FinishConfig {
    pub fn new(seed: u64) -> Self {
        FinishConfig { seed, c2: None, max_resamples: 1_000_000, delta: 0.15 }
    }

    pub fn with_c2(mut self, c2: u32) -> Self {
        self.c2 = Some(c2);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// `ceil(n^(1-delta))`, at least 2.
    pub fn asymptotic_palette(&self, n: u32) -> Result<u32> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok((f64::from(n).powf(1.0 - self.delta).ceil() as u32).max(2))
    }

    /// Fresh palette for `stage1`: the configured `c2`, or else the larger of
    /// `ceil(n^(1-delta))` and `ceil(lambda * D)` with `D` the
    /// [`conflict_degree`] and `lambda` 3/2 on graphs, 4 on hypergraphs.
    pub fn fresh_palette(&self, stage1: &PackState) -> Result<u32> {
        if self.max_resamples == 0 {
            return Err(Error::Config("max_resamples must be at least 1".into()));
        }
        let c2 = match self.c2 {
            Some(c) => c,
            None => {
                let host = stage1.coloring.host();
                let d = u64::from(conflict_degree(stage1)?);
                let floor = if host.k() == 2 { (3 * d).div_ceil(2) } else { 4 * d };
                self.asymptotic_palette(host.n())?.max(floor as u32)
            }
        };
        if c2 < 2 {
            return Err(Error::Config(format!("c2 must be at least 2, got {c2}")));
        }
        Ok(c2)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub hk: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinishOutcome {
    pub coloring: Coloring,
    pub resamples: u64,
    pub c2: u32,
    /// First fresh id; fresh ids are `fresh_base..fresh_base + c2`.
    pub fresh_base: u32,
    /// Resamples broken down by event type.
    pub events: EventCounts,
}

/// What the events are measured against.
#[derive(Clone, Debug)]
enum Target {
    Cycles { lens: Vec<u32> },
    Cliques { k: usize, max_bad: usize },
}

impl Target {
    fn of(family: Family) -> Self {
        match family {
            Family::Cycles { k, ell } => Target::Cycles { lens: (k..=ell).collect() },
            Family::BipartiteCycles { k } => Target::Cycles { lens: vec![2 * k] },
            Family::HyperCliques { k } => Target::Cliques {
                k: k as usize,
                max_bad: binom(u64::from(k) + 2, u64::from(k)) as usize - 2,
            },
        }
    }
}

/// Mutable search state over a total assignment.
struct Search<'a> {
    host: HostSpec,
    target: Target,
    coloring: Coloring,
    leftover: &'a [bool],
    /// Graph hosts: `adj[w][c]` = neighbours of `w` along color-`c` edges.
    adj: Vec<BTreeMap<Color, Vec<Vertex>>>,
    /// Graph hosts: leftover neighbours of each vertex.
    left_adj: Vec<Vec<Vertex>>,
    visited: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(host: HostSpec, target: Target, coloring: Coloring, leftover: &'a [bool]) -> Self {
        let nv = host.num_vertices() as usize;
        let mut adj = vec![BTreeMap::new(); nv];
        let mut left_adj = vec![Vec::new(); nv];
        if host.k() == 2 {
            let mut buf = [0; 2];
            for (i, &c) in coloring.colors().iter().enumerate() {
                host.unrank_into(EdgeId(i as u64), &mut buf);
                let [u, v] = buf;
                if c != UNCOLORED {
                    adj[u as usize].entry(c).or_insert_with(Vec::new).push(v);
                    adj[v as usize].entry(c).or_insert_with(Vec::new).push(u);
                }
                if leftover[i] {
                    left_adj[u as usize].push(v);
                    left_adj[v as usize].push(u);
                }
            }
        }
        Search { host, target, coloring, leftover, adj, left_adj, visited: vec![false; nv] }
    }

    fn recolor(&mut self, e: EdgeId, c: Color) {
        let old = self.coloring.get(e);
        self.coloring.set(e, c);
        if self.host.k() != 2 || old == c {
            return;
        }
        let mut buf = [0; 2];
        self.host.unrank_into(e, &mut buf);
        for (a, b) in [(buf[0], buf[1]), (buf[1], buf[0])] {
            let map = &mut self.adj[a as usize];
            if old != UNCOLORED {
                let list = map.get_mut(&old).expect("indexed edge");
                let p = list.iter().position(|&x| x == b).expect("indexed edge");
                list.swap_remove(p);
                if list.is_empty() {
                    map.remove(&old);
                }
            }
            map.entry(c).or_default().push(b);
        }
    }

    /// Calls `f` on each firing event containing the leftover edge `e` until it
    /// returns true. Events may repeat.
    fn events_through(&mut self, e: EdgeId, f: &mut dyn FnMut(BadEvent) -> bool) -> bool {
        match self.target.clone() {
            Target::Cycles { lens } => self.graph_events(e, &lens, f),
            Target::Cliques { k, max_bad } => self.clique_events(e, k, max_bad, f),
        }
    }

    fn graph_events(&mut self, e: EdgeId, lens: &[u32], f: &mut dyn FnMut(BadEvent) -> bool) -> bool {
        let mut buf = [0; 2];
        self.host.unrank_into(e, &mut buf);
        let [u, v] = buf;
        let c = self.coloring.get(e);
        for w in [u, v] {
            for &x in &self.left_adj[w as usize] {
                let g = self.host.pair_rank(w, x);
                if g != e && self.coloring.get(g) == c && f(BadEvent::A { e: e.min(g), f: e.max(g) }) {
                    return true;
                }
            }
        }
        let (min_len, max_len) = (lens[0], *lens.last().unwrap());
        let mut visited = std::mem::take(&mut self.visited);
        visited[u as usize] = true;
        visited[v as usize] = true;
        let mut path = vec![v];
        let hit = walk(u, v, c, None, min_len, max_len, &self.adj, &mut visited, &mut path, &mut |p| {
            let mut cycle = Vec::with_capacity(p.len() + 1);
            cycle.push(u);
            cycle.extend_from_slice(p);
            lens.contains(&(cycle.len() as u32)) && self.classify_cycle(&cycle).is_some_and(|ev| f(ev))
        });
        visited[u as usize] = false;
        visited[v as usize] = false;
        self.visited = visited;
        hit
    }

    /// Classifies a cycle with at most two colors; `None` when it is not an event
    /// of type B or C (an all-leftover cycle that is not proper contains an A pair).
    fn classify_cycle(&self, cycle: &[Vertex]) -> Option<BadEvent> {
        let l = cycle.len();
        let edges: Vec<EdgeId> = (0..l).map(|i| self.host.pair_rank(cycle[i], cycle[(i + 1) % l])).collect();
        let mut canon = cycle.to_vec();
        canonicalize(CopyKind::Cycle(l as u32), &mut canon);
        if edges.iter().all(|e| self.leftover[e.index()]) {
            let proper = (0..l).all(|i| self.coloring.get(edges[i]) != self.coloring.get(edges[(i + 1) % l]));
            proper.then_some(BadEvent::B { cycle: canon })
        } else {
            Some(BadEvent::C { cycle: canon })
        }
    }

    fn clique_events(&mut self, e: EdgeId, k: usize, max_bad: usize, f: &mut dyn FnMut(BadEvent) -> bool) -> bool {
        let mut base = vec![0; k];
        self.host.unrank_into(e, &mut base);
        let outside: Vec<Vertex> = (0..self.host.n()).filter(|v| !base.contains(v)).collect();
        let mut x = Vec::with_capacity(k + 2);
        let mut sub = vec![0; k];
        let mut seen: Vec<Color> = Vec::new();
        for (a, &z1) in outside.iter().enumerate() {
            for &z2 in &outside[a + 1..] {
                x.clear();
                x.extend_from_slice(&base);
                x.push(z1);
                x.push(z2);
                x.sort_unstable();
                seen.clear();
                let host = self.host;
                let coloring = &self.coloring;
                for_each_subset(&x, k, &mut sub, &mut |s| {
                    let c = coloring.get(host.rank_unchecked(s));
                    if !seen.contains(&c) {
                        seen.push(c);
                    }
                });
                if seen.len() <= max_bad && f(BadEvent::HK { set: x.clone() }) {
                    return true;
                }
            }
        }
        false
    }
}

/// Depth-first walk from `w` back to `u` along edges of color `c` and at most
/// one other color, fixed by the first edge that is not `c`. Calls `f` with
/// each path whose closing edge to `u` yields a cycle of length in
/// `min_len..=max_len`; stops when `f` returns true.
#[allow(clippy::too_many_arguments)]
fn walk(
    u: Vertex,
    w: Vertex,
    c: Color,
    other: Option<Color>,
    min_len: u32,
    max_len: u32,
    adj: &[BTreeMap<Color, Vec<Vertex>>],
    visited: &mut [bool],
    path: &mut Vec<Vertex>,
    f: &mut dyn FnMut(&[Vertex]) -> bool,
) -> bool {
    // `path` is the cycle minus `u`.
    let edges = path.len() as u32 - 1;
    let map = &adj[w as usize];
    let lists: Vec<(Color, &Vec<Vertex>)> = match other {
        Some(j) => [c, j].into_iter().filter_map(|col| map.get(&col).map(|l| (col, l))).collect(),
        None => map.iter().map(|(&col, l)| (col, l)).collect(),
    };
    for (col, list) in lists {
        let next = if col == c { other } else { Some(col) };
        for &x in list {
            if x == u {
                let len = edges + 2;
                if edges >= 1 && len >= min_len && len <= max_len && f(path) {
                    return true;
                }
            } else if !visited[x as usize] && edges + 2 < max_len {
                visited[x as usize] = true;
                path.push(x);
                let hit = walk(u, x, c, next, min_len, max_len, adj, visited, path, f);
                path.pop();
                visited[x as usize] = false;
                if hit {
                    return true;
                }
            }
        }
    }
    false
}

fn target_for(coloring: &Coloring, family: Family) -> Result<Target> {
    let host = coloring.host();
    let ok = match family {
        Family::Cycles { .. } => host.mode() == HostMode::Complete,
        Family::BipartiteCycles { .. } => host.mode() == HostMode::Bipartite,
        Family::HyperCliques { k } => host.k() == k,
    };
    if !ok {
        return Err(Error::Config(format!("host {host:?} does not match family {family:?}")));
    }
    Ok(Target::of(family))
}

/// Largest number of leftover edges that can form a two-edge event with one
/// leftover edge: adjacent leftover edges plus, for cycles, those closing a
/// cycle whose other edges share one stage-1 color, and for cliques, those
/// sharing a `(k+2)`-set that already repeats a stage-1 color.
pub fn conflict_degree(stage1: &PackState) -> Result<u32> {
    let coloring = &stage1.coloring;
    let host = *coloring.host();
    let leftover: Vec<bool> = coloring.colors().iter().map(|&c| c == UNCOLORED).collect();
    let search = Search::new(host, target_for(coloring, stage1.family)?, coloring.clone(), &leftover);
    let mut best = 0;
    let mut partners: BTreeSet<EdgeId> = BTreeSet::new();
    let mut buf = vec![0; host.k() as usize];
    for e in coloring.uncolored_edges() {
        partners.clear();
        host.unrank_into(e, &mut buf);
        match &search.target {
            Target::Cycles { lens } => {
                let (u, v) = (buf[0], buf[1]);
                for w in [u, v] {
                    for &x in &search.left_adj[w as usize] {
                        partners.insert(host.pair_rank(w, x));
                    }
                }
                let max_len = *lens.last().unwrap() as usize;
                let colors: BTreeSet<Color> =
                    search.adj[u as usize].keys().chain(search.adj[v as usize].keys()).copied().collect();
                for j in colors {
                    let from_v = reach(&search.adj, v, j, max_len);
                    let from_u = reach(&search.adj, u, j, max_len);
                    for (a, xs) in from_v.iter().enumerate().skip(1) {
                        for (b, ys) in from_u.iter().enumerate().skip(1) {
                            if !lens.contains(&(a as u32 + b as u32 + 2)) {
                                continue;
                            }
                            for &x in xs {
                                for &y in ys {
                                    if x != y && x != u && y != v && host.adjacent(x, y) {
                                        let f = host.pair_rank(x, y);
                                        if leftover[f.index()] {
                                            partners.insert(f);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Target::Cliques { k, .. } => {
                let k = *k;
                let outside: Vec<Vertex> = (0..host.n()).filter(|v| !buf.contains(v)).collect();
                let mut x = Vec::with_capacity(k + 2);
                let mut sub = vec![0; k];
                for (a, &z1) in outside.iter().enumerate() {
                    for &z2 in &outside[a + 1..] {
                        x.clear();
                        x.extend_from_slice(&buf);
                        x.extend([z1, z2]);
                        x.sort_unstable();
                        let mut seen = Vec::new();
                        let mut colored = 0;
                        let mut open = Vec::new();
                        for_each_subset(&x, k, &mut sub, &mut |s| {
                            let f = host.rank_unchecked(s);
                            match coloring.get(f) {
                                UNCOLORED => open.push(f),
                                c => {
                                    colored += 1;
                                    if !seen.contains(&c) {
                                        seen.push(c);
                                    }
                                }
                            }
                        });
                        if colored > seen.len() {
                            partners.extend(open.into_iter().filter(|&f| f != e));
                        }
                    }
                }
            }
        }
        partners.remove(&e);
        best = best.max(partners.len() as u32);
    }
    Ok(best)
}

/// `out[d]`: vertices at the end of a color-`j` walk of `d` edges from `w`.
fn reach(adj: &[BTreeMap<Color, Vec<Vertex>>], w: Vertex, j: Color, max_len: usize) -> Vec<BTreeSet<Vertex>> {
    let mut out = vec![BTreeSet::from([w])];
    for d in 1..max_len.saturating_sub(2) {
        let next: BTreeSet<Vertex> = out[d - 1]
            .iter()
            .flat_map(|&x| adj[x as usize].get(&j).into_iter().flatten().copied())
            .filter(|&x| x != w)
            .collect();
        out.push(next);
    }
    out
}

/// All firing bad events of a total coloring, where `leftover[e]` marks the
/// edges colored in stage two. Sorted and free of duplicates.
pub fn enumerate_bad_events(coloring: &Coloring, leftover: &[bool], family: Family) -> Result<Vec<BadEvent>> {
    if !coloring.is_total() {
        return Err(Error::PartialColoring { uncolored: coloring.uncolored_count() });
    }
    let target = target_for(coloring, family)?;
    let mut search = Search::new(*coloring.host(), target, coloring.clone(), leftover);
    let mut found = BTreeSet::new();
    for (i, _) in leftover.iter().enumerate().filter(|&(_, &l)| l) {
        search.events_through(EdgeId(i as u64), &mut |ev| {
            found.insert(ev);
            false
        });
    }
    Ok(found.into_iter().collect())
}

/// Colors every edge left uncolored by stage one with fresh ids
/// `stage1.palette..stage1.palette + c2`, resampling the leftover edges of a
/// firing event until none remains.
pub fn finish(stage1: &PackState, cfg: &FinishConfig) -> Result<FinishOutcome> {
    let host = *stage1.coloring.host();
    let c2 = cfg.fresh_palette(stage1)?;
    let target = target_for(&stage1.coloring, stage1.family)?;
    let base = stage1.palette;
    let leftover: Vec<bool> = stage1.coloring.colors().iter().map(|&c| c == UNCOLORED).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut coloring = stage1.coloring.clone();
    let left_ids: Vec<EdgeId> = coloring.uncolored_edges().collect();
    for &e in &left_ids {
        coloring.set(e, base + rng.gen_range(0..c2));
    }
    coloring.set_palette_size(base + c2);

    let mut search = Search::new(host, target, coloring, &leftover);
    let mut queue: VecDeque<EdgeId> = left_ids.iter().copied().collect();
    let mut queued = leftover.clone();
    let mut resamples = 0u64;
    let mut events = EventCounts::default();
    while let Some(e) = queue.pop_front() {
        queued[e.index()] = false;
        let mut hit = None;
        search.events_through(e, &mut |ev| {
            hit = Some(ev);
            true
        });
        let Some(ev) = hit else { continue };
        if resamples == cfg.max_resamples {
            let remaining_events = enumerate_bad_events(&search.coloring, &leftover, stage1.family)?.len();
            return Err(Error::NotFinished { resamples, remaining_events });
        }
        resamples += 1;
        match ev {
            BadEvent::A { .. } => events.a += 1,
            BadEvent::B { .. } => events.b += 1,
            BadEvent::C { .. } => events.c += 1,
            BadEvent::HK { .. } => events.hk += 1,
        }
        for g in ev.edges(&host) {
            if leftover[g.index()] {
                search.recolor(g, base + rng.gen_range(0..c2));
                if !queued[g.index()] {
                    queued[g.index()] = true;
                    queue.push_back(g);
                }
            }
        }
        if !queued[e.index()] {
            queued[e.index()] = true;
            queue.push_back(e);
        }
    }
    Ok(FinishOutcome { coloring: search.coloring, resamples, c2, fresh_base: base, events })
}
