//! Deciding whether a coloring gives every pattern copy enough colors, plus
//! the structural statistics used to judge stage-1 packings.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Color, Coloring, UNCOLORED};
use crate::enumerate::{
    copy_edges, count_copies, for_each_subset, sample_copy, CopyKind, CopyStream, SubgraphCopy,
};
use crate::error::{Error, Result};
use crate::host::{binom, colex_rank, EdgeId, HostMode, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    /// `count` copies drawn uniformly with replacement.
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSpec {
    /// Pattern kinds paired with the minimum number of colors each copy needs.
    pub kinds: Vec<(CopyKind, u32)>,
    pub mode: CheckMode,
    pub require_proper: bool,
    /// Worker threads for exhaustive checks; 1 runs inline.
    pub threads: usize,
}

impl CheckSpec {
    pub fn exhaustive(kinds: Vec<(CopyKind, u32)>) -> Self {
        CheckSpec { kinds, mode: CheckMode::Exhaustive, require_proper: false, threads: 1 }
    }

    pub fn sampled(kinds: Vec<(CopyKind, u32)>, count: u64, seed: u64) -> Self {
        CheckSpec { kinds, mode: CheckMode::Sample { count, seed }, require_proper: false, threads: 1 }
    }

    pub fn proper(mut self) -> Self {
        self.require_proper = true;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

/// A fully colored copy with fewer than `q` colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: CopyKind,
    pub copy: SubgraphCopy,
    pub distinct_colors: u32,
    /// Edge colors in the copy's edge order.
    pub colors_seen: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KindReport {
    pub kind: CopyKind,
    pub q: u32,
    /// Copies whose status was decided: every copy in exhaustive mode, the
    /// number of draws in sampled mode.
    pub copies_checked: u128,
    pub violations: u128,
    pub first_witness: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub ok: bool,
    pub kinds: Vec<KindReport>,
    /// First pair of incident edges sharing a color, when properness was required.
    pub improper_pair: Option<(EdgeId, EdgeId)>,
}

impl CheckReport {
    pub fn first_violation(&self) -> Option<&Violation> {
        self.kinds.iter().find_map(|k| k.first_witness.as_ref())
    }
}

fn distinct(colors: &[Color]) -> u32 {
    let mut n = 0;
    for (i, c) in colors.iter().enumerate() {
        if !colors[..i].contains(c) {
            n += 1;
        }
    }
    n
}

pub fn check(coloring: &Coloring, spec: &CheckSpec) -> Result<CheckReport> {
    let host = coloring.host();
    let mut kinds = Vec::with_capacity(spec.kinds.len());
    let mut sample_rng = match spec.mode {
        CheckMode::Sample { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        CheckMode::Exhaustive => None,
    };
    for &(kind, q) in &spec.kinds {
        kind.validate(host)?;
        if q == 0 {
            return Err(Error::Config("q must be at least 1".into()));
        }
        let report = match (spec.mode, sample_rng.as_mut()) {
            (CheckMode::Sample { count, .. }, Some(rng)) => check_sampled(coloring, kind, q, count, rng),
            _ => check_exhaustive(coloring, kind, q, spec.threads)?,
        };
        kinds.push(report);
    }
    let improper_pair = if spec.require_proper { first_improper_pair(coloring) } else { None };
    let ok = improper_pair.is_none() && kinds.iter().all(|k| k.violations == 0);
    Ok(CheckReport { ok, kinds, improper_pair })
}

fn check_sampled(coloring: &Coloring, kind: CopyKind, q: u32, count: u64, rng: &mut ChaCha8Rng) -> KindReport {
    let host = coloring.host();
    let mut report = KindReport { kind, q, copies_checked: 0, violations: 0, first_witness: None };
    let mut edges = Vec::new();
    let mut colors = Vec::new();
    for _ in 0..count {
        let Some(copy) = sample_copy(host, kind, rng) else { break };
        report.copies_checked += 1;
        edges.clear();
        copy_edges(host, kind, copy.vertices(), &mut edges);
        colors.clear();
        colors.extend(edges.iter().map(|&e| coloring.get(e)));
        if colors.contains(&UNCOLORED) {
            continue;
        }
        let d = distinct(&colors);
        if d < q {
            report.violations += 1;
            if report.first_witness.is_none() {
                report.first_witness = Some(Violation { kind, copy, distinct_colors: d, colors_seen: colors.clone() });
            }
        }
    }
    report
}

/// Incremental color bookkeeping along a DFS prefix.
struct PrefixColors<'a> {
    coloring: &'a Coloring,
    kind: CopyKind,
    q: u32,
    len: usize,
    k: usize,
    colors: Vec<Color>,
    /// `marks[d]` = length of `colors` before vertex `d` was added.
    marks: Vec<usize>,
    distinct_at: Vec<u32>,
    sub: Vec<Vertex>,
    win: Vec<Vertex>,
}

impl<'a> PrefixColors<'a> {
    fn new(coloring: &'a Coloring, kind: CopyKind, q: u32) -> Self {
        let k = coloring.host().k() as usize;
        PrefixColors {
            coloring,
            kind,
            q,
            len: kind.order(),
            k,
            colors: Vec::new(),
            marks: Vec::new(),
            distinct_at: Vec::new(),
            sub: vec![0; k],
            win: vec![0; k],
        }
    }

    /// Returns true when no extension of `prefix` can be a violation.
    fn prune(&mut self, prefix: &[Vertex]) -> bool {
        let d = prefix.len() - 1;
        if self.marks.len() > d {
            self.colors.truncate(self.marks[d]);
            self.marks.truncate(d);
            self.distinct_at.truncate(d);
        }
        self.marks.push(self.colors.len());
        let mut distinct = self.distinct_at.last().copied().unwrap_or(0);
        let host = *self.coloring.host();
        let v = prefix[d];
        let mut exempt = false;
        let mut add = |this: &mut Self, c: Color| {
            if c == UNCOLORED {
                exempt = true;
            } else {
                if !this.colors.contains(&c) {
                    distinct += 1;
                }
                this.colors.push(c);
            }
        };
        match self.kind {
            CopyKind::Cycle(_) | CopyKind::Path(_) => {
                if d > 0 {
                    let c = self.coloring.pair(prefix[d - 1], v);
                    add(self, c);
                }
                if matches!(self.kind, CopyKind::Cycle(_)) && d == self.len - 1 {
                    let c = self.coloring.pair(v, prefix[0]);
                    add(self, c);
                }
            }
            CopyKind::CliqueSet(_) => {
                if d + 1 >= self.k {
                    // New edges: k-subsets of the prefix containing v.
                    let earlier = prefix[..d].to_vec();
                    let mut sub = std::mem::take(&mut self.sub);
                    let mut found = Vec::new();
                    for_each_subset(&earlier, self.k - 1, &mut sub, &mut |s| {
                        let mut e: Vec<Vertex> = s.to_vec();
                        e.push(v);
                        found.push(self.coloring.get(host.rank_unchecked(&e)));
                    });
                    self.sub = sub;
                    for c in found {
                        add(self, c);
                    }
                }
            }
            CopyKind::TightCycle(_) => {
                let k = self.k;
                let mut win = std::mem::take(&mut self.win);
                let mut found = Vec::new();
                if d + 1 >= k {
                    win.copy_from_slice(&prefix[d + 1 - k..=d]);
                    win.sort_unstable();
                    found.push(self.coloring.get(host.rank_unchecked(&win)));
                }
                if d == self.len - 1 {
                    let l = self.len;
                    for start in l + 1 - k..l {
                        for j in 0..k {
                            win[j] = prefix[(start + j) % l];
                        }
                        win.sort_unstable();
                        found.push(self.coloring.get(host.rank_unchecked(&win)));
                    }
                }
                self.win = win;
                for c in found {
                    add(self, c);
                }
            }
        }
        self.distinct_at.push(distinct);
        exempt || distinct >= self.q
    }
}

fn check_exhaustive(coloring: &Coloring, kind: CopyKind, q: u32, threads: usize) -> Result<KindReport> {
    let host = coloring.host();
    let total = count_copies(host, kind)?;
    let nv = host.num_vertices();
    let run_part = |lo: Vertex, hi: Vertex| -> Result<(u128, Option<Violation>)> {
        let mut stream = CopyStream::with_first_in(host, kind, lo, hi)?;
        let mut prefix = PrefixColors::new(coloring, kind, q);
        let mut violations = 0u128;
        let mut first = None;
        while let Some(seq) = stream.next_pruned(|p| prefix.prune(p)) {
            violations += 1;
            if first.is_none() {
                let copy = SubgraphCopy(seq.to_vec());
                let mut edges = Vec::new();
                copy_edges(host, kind, seq, &mut edges);
                let colors_seen: Vec<Color> = edges.iter().map(|&e| coloring.get(e)).collect();
                first = Some(Violation { kind, copy, distinct_colors: distinct(&colors_seen), colors_seen });
            }
        }
        Ok((violations, first))
    };

    let (violations, first_witness) = if threads <= 1 || nv < 2 {
        run_part(0, nv)?
    } else {
        let next = AtomicU32::new(0);
        let results: Mutex<Vec<(Vertex, (u128, Option<Violation>))>> = Mutex::new(Vec::new());
        let error: Mutex<Option<Error>> = Mutex::new(None);
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(|| loop {
                    let v = next.fetch_add(1, Ordering::Relaxed);
                    if v >= nv {
                        break;
                    }
                    match run_part(v, v + 1) {
                        Ok(r) => results.lock().unwrap().push((v, r)),
                        Err(e) => {
                            *error.lock().unwrap() = Some(e);
                            break;
                        }
                    }
                });
            }
        });
        if let Some(e) = error.into_inner().unwrap() {
            return Err(e);
        }
        let mut parts = results.into_inner().unwrap();
        parts.sort_by_key(|(v, _)| *v);
        let mut violations = 0;
        let mut first = None;
        for (_, (cnt, w)) in parts {
            violations += cnt;
            if first.is_none() {
                first = w;
            }
        }
        (violations, first)
    };
    Ok(KindReport { kind, q, copies_checked: total, violations, first_witness })
}

fn first_improper_pair(coloring: &Coloring) -> Option<(EdgeId, EdgeId)> {
    let host = coloring.host();
    let mut seen: HashMap<(Vertex, Color), EdgeId> = HashMap::new();
    let mut best: Option<(EdgeId, EdgeId)> = None;
    let mut buf = vec![0; host.k() as usize];
    for (i, &c) in coloring.colors().iter().enumerate() {
        if c == UNCOLORED {
            continue;
        }
        let e = EdgeId(i as u64);
        host.unrank_into(e, &mut buf);
        for &v in &buf {
            if let Some(&prev) = seen.get(&(v, c)) {
                let pair = (prev, e);
                if best.is_none_or(|b| pair < b) {
                    best = Some(pair);
                }
            } else {
                seen.insert((v, c), e);
            }
        }
        if best.is_some_and(|(_, later)| later == e) {
            // Edges are scanned in rank order, so the first conflict found is minimal.
            return best;
        }
    }
    best
}

/// Whether some color class of a graph coloring contains a path on `t`
/// vertices; returns the first such path found (colors scanned in id order).
pub fn max_mono_path(coloring: &Coloring, t: u32) -> Option<Vec<Vertex>> {
    let host = coloring.host();
    assert!(t >= 2, "paths need at least 2 vertices");
    assert!(host.mode() != HostMode::UniformComplete, "graph hosts only");
    let nv = host.num_vertices() as usize;
    let mut classes: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); coloring.palette_size() as usize];
    let mut buf = [0; 2];
    for (i, &c) in coloring.colors().iter().enumerate() {
        if c != UNCOLORED {
            host.unrank_into(EdgeId(i as u64), &mut buf);
            classes[c as usize].push((buf[0], buf[1]));
        }
    }
    let t = t as usize;
    for class in classes {
        if class.len() + 1 < t {
            continue;
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); nv];
        for &(u, v) in &class {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut path = Vec::with_capacity(t);
        let mut on_path = vec![false; nv];
        fn dfs(adj: &[Vec<Vertex>], path: &mut Vec<Vertex>, on: &mut [bool], t: usize) -> bool {
            if path.len() == t {
                return true;
            }
            let last = *path.last().unwrap() as usize;
            for &w in &adj[last] {
                if !on[w as usize] {
                    on[w as usize] = true;
                    path.push(w);
                    if dfs(adj, path, on, t) {
                        return true;
                    }
                    path.pop();
                    on[w as usize] = false;
                }
            }
            false
        }
        for start in 0..nv {
            if adj[start].is_empty() {
                continue;
            }
            path.clear();
            path.push(start as Vertex);
            on_path[start] = true;
            let found = dfs(&adj, &mut path, &mut on_path, t);
            on_path[start] = false;
            if found {
                return Some(path);
            }
        }
    }
    None
}

/// Pair counts over `(k-1)`-sets, edges and colors of a total hypergraph coloring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct XCounts {
    /// `((k-1)`-set `S`, color `c)` with no `c`-edge containing `S`.
    pub x0: u64,
    /// `(e, c(e))` with no other `c(e)`-edge meeting `e` in `k-1` vertices.
    pub x1: u64,
    /// Unordered same-color edge pairs meeting in `k-1` vertices.
    pub x2: u64,
}

pub fn xcounts(coloring: &Coloring) -> Result<XCounts> {
    let host = *coloring.host();
    if !coloring.is_total() {
        return Err(Error::PartialColoring { uncolored: coloring.uncolored_count() });
    }
    let k = host.k() as usize;
    // (S rank, color) -> number of same-color edges containing S.
    let mut holders: HashMap<(u64, Color), u32> = HashMap::new();
    let mut buf = vec![0; k];
    let mut sub = vec![0; k - 1];
    for (i, &c) in coloring.colors().iter().enumerate() {
        host.unrank_into(EdgeId(i as u64), &mut buf);
        for_each_subset(&buf, k - 1, &mut sub, &mut |s| {
            *holders.entry((colex_rank(s), c)).or_insert(0) += 1;
        });
    }
    let mut x1 = 0;
    for (i, &c) in coloring.colors().iter().enumerate() {
        host.unrank_into(EdgeId(i as u64), &mut buf);
        let mut alone = true;
        for_each_subset(&buf, k - 1, &mut sub, &mut |s| {
            if holders[&(colex_rank(s), c)] > 1 {
                alone = false;
            }
        });
        if alone {
            x1 += 1;
        }
    }
    // Two distinct k-sets share at most one (k-1)-subset, so pairs are counted once.
    let x2 = holders.values().map(|&m| u64::from(m) * u64::from(m.saturating_sub(1)) / 2).sum();
    let total_pairs = binom(u64::from(host.n()), k as u64 - 1) * u64::from(coloring.palette_size());
    let x0 = total_pairs - holders.len() as u64;
    Ok(XCounts { x0, x1, x2 })
}

/// Leftover (uncolored) structure of a partial coloring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LeftoverStats {
    /// Max over vertices of incident uncolored edges.
    pub max_uncolored_degree: u64,
    /// Max over `(k-1)`-sets of uncolored edges containing them (equals the
    /// degree for graphs).
    pub max_uncolored_codegree: u64,
    /// Max over edges of the number of uncolored edges closing a same-color
    /// "crossing" with it (see [`leftover_stats`]).
    pub max_dangerous_pairs: u64,
}

/// Leftover statistics.
///
/// Dangerous pairs, per host:
/// * `K_n`: for `xy`, uncolored `x'y'` (all four distinct) with `c(xy') = c(yx')`;
/// * `K_{n,n}`: for `xy`, uncolored `x'y'` with `x, x'` in one tile of color `c`
///   and `y, y'` in a different tile of the same color;
/// * `K_n^k`: for `e = {x,y} ∪ S`, uncolored `e' = {x',y'} ∪ S` with
///   `c({x,x'} ∪ S) = c({y,y'} ∪ S)`.
pub fn leftover_stats(coloring: &Coloring) -> LeftoverStats {
    let host = *coloring.host();
    let nv = host.num_vertices() as usize;
    let k = host.k() as usize;
    let mut degree = vec![0u64; nv];
    let mut codegree: HashMap<u64, u64> = HashMap::new();
    let mut leftover: Vec<Vec<Vertex>> = Vec::new();
    let mut buf = vec![0; k];
    let mut sub = vec![0; k - 1];
    for e in coloring.uncolored_edges() {
        host.unrank_into(e, &mut buf);
        for &v in &buf {
            degree[v as usize] += 1;
        }
        if k > 2 {
            for_each_subset(&buf, k - 1, &mut sub, &mut |s| *codegree.entry(colex_rank(s)).or_insert(0) += 1);
        }
        leftover.push(buf.clone());
    }
    let max_uncolored_degree = degree.iter().copied().max().unwrap_or(0);
    let max_uncolored_codegree = if k > 2 { codegree.values().copied().max().unwrap_or(0) } else { max_uncolored_degree };
    if leftover.is_empty() {
        return LeftoverStats { max_uncolored_degree, max_uncolored_codegree, max_dangerous_pairs: 0 };
    }

    let mut max_dangerous_pairs = 0;
    match host.mode() {
        HostMode::Complete => {
            let n = host.n();
            for x in 0..n {
                for y in x + 1..n {
                    let mut count = 0;
                    for l in &leftover {
                        for (xp, yp) in [(l[0], l[1]), (l[1], l[0])] {
                            if xp == x || xp == y || yp == x || yp == y {
                                continue;
                            }
                            let a = coloring.pair(x, yp);
                            if a != UNCOLORED && a == coloring.pair(y, xp) {
                                count += 1;
                            }
                        }
                    }
                    max_dangerous_pairs = max_dangerous_pairs.max(count);
                }
            }
        }
        HostMode::Bipartite => {
            // Same-color same-side vertices share a tile iff they have a common
            // neighbour in that color.
            let palette = coloring.palette_size() as usize;
            let mut comp = vec![u32::MAX; nv * palette];
            let mut next = 0u32;
            for (i, &c) in coloring.colors().iter().enumerate() {
                if c == UNCOLORED {
                    continue;
                }
                host.unrank_into(EdgeId(i as u64), &mut buf);
                let (a, b) = (buf[0] as usize * palette + c as usize, buf[1] as usize * palette + c as usize);
                match (comp[a], comp[b]) {
                    (u32::MAX, u32::MAX) => {
                        comp[a] = next;
                        comp[b] = next;
                        next += 1;
                    }
                    (ca, u32::MAX) => comp[b] = ca,
                    (u32::MAX, cb) => comp[a] = cb,
                    (ca, cb) if ca != cb => {
                        for slot in comp.iter_mut() {
                            if *slot == cb {
                                *slot = ca;
                            }
                        }
                    }
                    _ => {}
                }
            }
            let n = host.n();
            for x in 0..n {
                for y in n..2 * n {
                    let mut count = 0;
                    for l in &leftover {
                        let (xp, yp) = (l[0], l[1]);
                        if xp == x || yp == y {
                            continue;
                        }
                        for c in 0..palette {
                            let cx = comp[x as usize * palette + c];
                            let cy = comp[y as usize * palette + c];
                            if cx != u32::MAX
                                && cy != u32::MAX
                                && cx != cy
                                && comp[xp as usize * palette + c] == cx
                                && comp[yp as usize * palette + c] == cy
                            {
                                count += 1;
                                break;
                            }
                        }
                    }
                    max_dangerous_pairs = max_dangerous_pairs.max(count);
                }
            }
        }
        HostMode::UniformComplete => {
            let is_left: std::collections::HashSet<Vec<Vertex>> = leftover.iter().cloned().collect();
            let n = host.n();
            let mut edge = vec![0; k];
            let mut tmp = Vec::with_capacity(k);
            let color_of = |tmp: &mut Vec<Vertex>, s: &[Vertex], a: Vertex, b: Vertex| -> Color {
                tmp.clear();
                tmp.extend_from_slice(s);
                tmp.push(a);
                tmp.push(b);
                tmp.sort_unstable();
                coloring.get(host.rank_unchecked(tmp))
            };
            for r in 0..host.edge_count() {
                host.unrank_into(EdgeId(r), &mut edge);
                for i in 0..k {
                    for j in 0..k {
                        if i == j {
                            continue;
                        }
                        let (x, y) = (edge[i], edge[j]);
                        let s: Vec<Vertex> = edge.iter().copied().filter(|&v| v != x && v != y).collect();
                        let mut count = 0;
                        for xp in 0..n {
                            if edge.contains(&xp) {
                                continue;
                            }
                            let cx = color_of(&mut tmp, &s, x, xp);
                            if cx == UNCOLORED {
                                continue;
                            }
                            for yp in 0..n {
                                if yp == xp || edge.contains(&yp) {
                                    continue;
                                }
                                let mut ep = s.clone();
                                ep.push(xp);
                                ep.push(yp);
                                ep.sort_unstable();
                                if !is_left.contains(&ep) {
                                    continue;
                                }
                                if color_of(&mut tmp, &s, y, yp) == cx {
                                    count += 1;
                                }
                            }
                        }
                        max_dangerous_pairs = max_dangerous_pairs.max(count);
                    }
                }
            }
        }
    }
    LeftoverStats { max_uncolored_degree, max_uncolored_codegree, max_dangerous_pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::HostSpec;

    #[test]
    fn rainbow_and_mono_k5() {
        let h = HostSpec::complete(5);
        let spec = CheckSpec::exhaustive(vec![(CopyKind::Cycle(4), 3)]);
        assert!(check(&Coloring::rainbow(h), &spec).unwrap().ok);
        let r = check(&Coloring::monochromatic(h), &spec).unwrap();
        assert!(!r.ok);
        let v = r.first_violation().unwrap();
        assert_eq!(v.distinct_colors, 1);
        assert_eq!(v.copy.0, vec![0, 1, 2, 3]);
        assert_eq!(r.kinds[0].violations, 15);
        assert_eq!(r.kinds[0].copies_checked, 15);
    }

    #[test]
    fn uncolored_copies_are_exempt() {
        let h = HostSpec::complete(5);
        let mut c = Coloring::monochromatic(h);
        for v in 1..5 {
            c.set(h.pair_rank(0, v), UNCOLORED);
        }
        let r = check(&c, &CheckSpec::exhaustive(vec![(CopyKind::Cycle(4), 3)])).unwrap();
        // Only the 3 four-cycles on {1,2,3,4} are fully colored.
        assert_eq!(r.kinds[0].violations, 3);
        assert!(check(&Coloring::uncolored(h), &CheckSpec::exhaustive(vec![(CopyKind::Cycle(3), 2)]))
            .unwrap()
            .ok);
    }

    #[test]
    fn threads_agree() {
        let h = HostSpec::complete(9);
        let mut c = Coloring::uncolored(h);
        for r in 0..h.edge_count() {
            c.set(EdgeId(r), (r % 5) as Color);
        }
        let base = check(&c, &CheckSpec::exhaustive(vec![(CopyKind::Path(5), 4), (CopyKind::Cycle(5), 4)])).unwrap();
        let par =
            check(&c, &CheckSpec::exhaustive(vec![(CopyKind::Path(5), 4), (CopyKind::Cycle(5), 4)]).with_threads(4))
                .unwrap();
        assert_eq!(base, par);
        assert!(!base.ok);
    }

    #[test]
    fn proper_check() {
        let h = HostSpec::complete(4);
        assert!(check(&Coloring::rainbow(h), &CheckSpec::exhaustive(vec![]).proper()).unwrap().ok);
        let r = check(&Coloring::monochromatic(h), &CheckSpec::exhaustive(vec![]).proper()).unwrap();
        assert_eq!(r.improper_pair, Some((EdgeId(0), EdgeId(1))));
    }

    #[test]
    fn sampled_is_deterministic() {
        let h = HostSpec::complete(10);
        let mut c = Coloring::uncolored(h);
        for r in 0..h.edge_count() {
            c.set(EdgeId(r), (r * 7 % 11) as Color);
        }
        let spec = CheckSpec::sampled(vec![(CopyKind::Path(6), 5)], 5000, 42);
        let a = check(&c, &spec).unwrap();
        let b = check(&c, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.kinds[0].copies_checked, 5000);
    }

    #[test]
    fn mono_paths() {
        let h = HostSpec::complete(9);
        // Vertex-disjoint monochromatic triangles, color i on {3i,3i+1,3i+2}; rest rainbow.
        let mut c = Coloring::uncolored(h);
        let mut next = 3;
        for (e, verts) in h.edges() {
            let same = verts[0] / 3 == verts[1] / 3;
            c.set(e, if same { verts[0] / 3 } else { next });
            if !same {
                next += 1;
            }
        }
        assert!(max_mono_path(&c, 4).is_none());
        assert_eq!(max_mono_path(&c, 3).unwrap(), vec![0, 1, 2]);
        assert!(max_mono_path(&Coloring::uncolored(h), 2).is_none());
    }

    #[test]
    fn xcounts_rainbow_k4_3() {
        let h = HostSpec::uniform(4, 3).unwrap();
        let x = xcounts(&Coloring::rainbow(h)).unwrap();
        assert_eq!(x, XCounts { x0: 12, x1: 4, x2: 0 });
    }

    #[test]
    fn xcounts_tile() {
        // Edges of K_4^3 in rank order: 012, 013, 023, 123. Repeat color on 012 and 013.
        let h = HostSpec::uniform(4, 3).unwrap();
        let c = Coloring::from_colors(h, vec![0, 0, 1, 2]);
        let x = xcounts(&c).unwrap();
        assert_eq!((x.x1, x.x2), (2, 1));
        assert_eq!(x.x1 + 2 * x.x2, 4);
        // x0 + 3 x1 + 5 x2 = C(4,2) * 3
        assert_eq!(x.x0 + 3 * x.x1 + 5 * x.x2, 18);
        assert!(matches!(xcounts(&Coloring::uncolored(h)), Err(Error::PartialColoring { .. })));
    }

    #[test]
    fn leftover_trivial_cases() {
        let h = HostSpec::complete(7);
        assert_eq!(leftover_stats(&Coloring::rainbow(h)), LeftoverStats::default());
        let s = leftover_stats(&Coloring::uncolored(h));
        assert_eq!(s.max_uncolored_degree, 6);
        assert_eq!(s.max_dangerous_pairs, 0);
    }

    #[test]
    fn dangerous_pair_complete() {
        // xy = 01; x'y' = 23 uncolored; c(0,3) = c(1,2) = 5.
        let h = HostSpec::complete(4);
        let mut c = Coloring::rainbow(h);
        c.set(h.pair_rank(2, 3), UNCOLORED);
        c.set(h.pair_rank(0, 3), 5);
        c.set(h.pair_rank(1, 2), 5);
        assert_eq!(leftover_stats(&c).max_dangerous_pairs, 1);
    }
}
