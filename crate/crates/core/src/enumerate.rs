//! Canonical, lazy enumeration of pattern copies in complete hosts.
//!
//! Every copy is emitted exactly once, as a canonical vertex sequence:
//!
//! * cycles and tight cycles: smallest vertex first, then the smaller of its
//!   two cycle neighbours;
//! * paths: smaller endpoint first;
//! * clique sets: ascending.
//!
//! Streams are generated depth-first with vertices tried in increasing order,
//! so the stream order is the lexicographic order of the canonical sequences.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::host::{binom, colex_unrank, EdgeId, HostMode, HostSpec, Vertex};

/// A pattern family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CopyKind {
    /// Cycle on `m` vertices.
    Cycle(u32),
    /// Path on `t` vertices.
    Path(u32),
    /// All `k`-subsets of a `p`-set (a clique of the host).
    CliqueSet(u32),
    /// Tight cycle on `l` vertices: the `l` cyclic windows of `k` consecutive vertices.
    TightCycle(u32),
}

impl CopyKind {
    pub fn name(&self) -> &'static str {
        match self {
            CopyKind::Cycle(_) => "cycle",
            CopyKind::Path(_) => "path",
            CopyKind::CliqueSet(_) => "clique",
            CopyKind::TightCycle(_) => "tight-cycle",
        }
    }

    pub fn param(&self) -> u32 {
        match *self {
            CopyKind::Cycle(m) | CopyKind::Path(m) | CopyKind::CliqueSet(m) | CopyKind::TightCycle(m) => m,
        }
    }

    pub fn from_name(name: &str, param: u32) -> Option<Self> {
        match name {
            "cycle" => Some(CopyKind::Cycle(param)),
            "path" => Some(CopyKind::Path(param)),
            "clique" => Some(CopyKind::CliqueSet(param)),
            "tight-cycle" => Some(CopyKind::TightCycle(param)),
            _ => None,
        }
    }

    /// Number of vertices of the pattern.
    pub fn order(&self) -> usize {
        self.param() as usize
    }

    /// Number of edges of the pattern in `host`.
    pub fn size(&self, host: &HostSpec) -> usize {
        match *self {
            CopyKind::Cycle(m) => m as usize,
            CopyKind::Path(t) => t as usize - 1,
            CopyKind::CliqueSet(p) => binom(u64::from(p), u64::from(host.k())) as usize,
            CopyKind::TightCycle(l) => l as usize,
        }
    }

    pub fn validate(&self, host: &HostSpec) -> Result<()> {
        let unsupported = |why: &str| Err(Error::Unsupported(format!("{self} on {host}: {why}")));
        match (*self, host.mode()) {
            (CopyKind::Cycle(m), HostMode::Complete) if m < 3 => unsupported("cycles need m >= 3"),
            (CopyKind::Cycle(m), HostMode::Bipartite) if m < 4 || m % 2 == 1 => {
                unsupported("bipartite cycles need even m >= 4")
            }
            (CopyKind::Cycle(_), HostMode::UniformComplete) => unsupported("use tight cycles"),
            (CopyKind::Path(t), HostMode::Complete | HostMode::Bipartite) if t < 2 => {
                unsupported("paths need t >= 2")
            }
            (CopyKind::Path(_), HostMode::UniformComplete) => unsupported("graph hosts only"),
            (CopyKind::CliqueSet(_), HostMode::Bipartite) => unsupported("no cliques in bipartite hosts"),
            (CopyKind::CliqueSet(p), _) if p < host.k() => unsupported("clique sets need p >= k"),
            (CopyKind::TightCycle(_), HostMode::Complete | HostMode::Bipartite) => {
                unsupported("uniform hosts only")
            }
            (CopyKind::TightCycle(l), HostMode::UniformComplete) if l <= host.k() => {
                unsupported("tight cycles need l >= k + 1")
            }
            _ => Ok(()),
        }
    }

    fn shape(&self) -> Shape {
        match self {
            CopyKind::Cycle(_) | CopyKind::TightCycle(_) => Shape::Cyclic,
            CopyKind::Path(_) => Shape::Linear,
            CopyKind::CliqueSet(_) => Shape::Set,
        }
    }
}

impl fmt::Display for CopyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopyKind::Cycle(m) => write!(f, "C_{m}"),
            CopyKind::Path(t) => write!(f, "P_{t}"),
            CopyKind::CliqueSet(p) => write!(f, "K_{p}"),
            CopyKind::TightCycle(l) => write!(f, "TC_{l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Cyclic,
    Linear,
    Set,
}

/// One placement of a pattern, as its canonical vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgraphCopy(pub Vec<Vertex>);

impl SubgraphCopy {
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn edges(&self, host: &HostSpec, kind: CopyKind) -> Vec<EdgeId> {
        let mut out = Vec::new();
        copy_edges(host, kind, &self.0, &mut out);
        out
    }
}

impl fmt::Display for SubgraphCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Appends the edge ids of the copy `seq` to `out`.
pub fn copy_edges(host: &HostSpec, kind: CopyKind, seq: &[Vertex], out: &mut Vec<EdgeId>) {
    match kind {
        CopyKind::Cycle(_) => {
            let m = seq.len();
            for i in 0..m {
                out.push(host.pair_rank(seq[i], seq[(i + 1) % m]));
            }
        }
        CopyKind::Path(_) => {
            for w in seq.windows(2) {
                out.push(host.pair_rank(w[0], w[1]));
            }
        }
        CopyKind::CliqueSet(_) => {
            let k = host.k() as usize;
            let mut sub = vec![0; k];
            for_each_subset(seq, k, &mut sub, &mut |s| out.push(host.rank_unchecked(s)));
        }
        CopyKind::TightCycle(_) => {
            let l = seq.len();
            let k = host.k() as usize;
            let mut win = vec![0; k];
            for i in 0..l {
                for j in 0..k {
                    win[j] = seq[(i + j) % l];
                }
                win.sort_unstable();
                out.push(host.rank_unchecked(&win));
            }
        }
    }
}

/// Calls `f` on every `size`-subset of the ascending slice `set`, in lex order.
pub fn for_each_subset(set: &[Vertex], size: usize, buf: &mut [Vertex], f: &mut impl FnMut(&[Vertex])) {
    fn rec(set: &[Vertex], start: usize, depth: usize, buf: &mut [Vertex], f: &mut impl FnMut(&[Vertex])) {
        if depth == buf.len() {
            f(buf);
            return;
        }
        let remaining = buf.len() - depth;
        for i in start..=set.len() - remaining {
            buf[depth] = set[i];
            rec(set, i + 1, depth + 1, buf, f);
        }
    }
    if size > set.len() {
        return;
    }
    rec(set, 0, 0, &mut buf[..size], f);
}

/// Rewrites an arbitrary placement into canonical form.
pub fn canonicalize(kind: CopyKind, seq: &mut [Vertex]) {
    match kind.shape() {
        Shape::Set => seq.sort_unstable(),
        Shape::Linear => {
            if seq[0] > seq[seq.len() - 1] {
                seq.reverse();
            }
        }
        Shape::Cyclic => {
            let (min_pos, _) = seq.iter().enumerate().min_by_key(|(_, &v)| v).unwrap();
            seq.rotate_left(min_pos);
            let l = seq.len();
            if l > 2 && seq[1] > seq[l - 1] {
                seq[1..].reverse();
            }
        }
    }
}

/// Closed-form number of copies of `kind` in `host`.
pub fn count_copies(host: &HostSpec, kind: CopyKind) -> Result<u128> {
    kind.validate(host)?;
    let n = u128::from(host.n());
    let falling = |n: u128, r: u128| -> u128 {
        if r > n {
            0
        } else {
            (0..r).map(|i| n - i).product()
        }
    };
    let choose = |n: u128, r: u128| -> u128 {
        if r > n {
            0
        } else {
            falling(n, r) / (1..=r).product::<u128>()
        }
    };
    let fact = |r: u128| -> u128 { (1..=r).product() };
    Ok(match (kind, host.mode()) {
        (CopyKind::Cycle(m), HostMode::Complete) | (CopyKind::TightCycle(m), HostMode::UniformComplete) => {
            let m = u128::from(m);
            choose(n, m) * fact(m - 1) / 2
        }
        (CopyKind::Path(t), HostMode::Complete) => falling(n, u128::from(t)) / 2,
        (CopyKind::CliqueSet(p), _) => choose(u128::from(host.num_vertices()), u128::from(p)),
        (CopyKind::Cycle(m), HostMode::Bipartite) => {
            let j = u128::from(m / 2);
            choose(n, j) * choose(n, j) * fact(j) * fact(j - 1) / 2
        }
        (CopyKind::Path(t), HostMode::Bipartite) => {
            let t = u128::from(t);
            // One reading per path starts on each side when t is even; when t is
            // odd both readings start on the same side.
            falling(n, t.div_ceil(2)) * falling(n, t / 2)
        }
        _ => unreachable!("validated"),
    })
}

/// How the walker constrains a full sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Canon {
    /// Emit only canonical forms of `shape`.
    Canonical,
    /// Emit every placement satisfying the fixed positions.
    Rooted,
}

/// Depth-first walker over vertex sequences satisfying a kind's structure.
#[derive(Clone, Debug)]
struct Walker {
    host: HostSpec,
    shape: Shape,
    len: usize,
    /// Consecutive vertices (and first/last for cyclic shapes) must be adjacent.
    graph: bool,
    canon: Canon,
    fixed: Vec<Option<Vertex>>,
    first_range: (Vertex, Vertex),
    seq: Vec<Vertex>,
    cursor: Vec<Vertex>,
    used: Vec<bool>,
    done: bool,
}

impl Walker {
    fn new(host: HostSpec, kind: CopyKind, canon: Canon, fixed: Vec<Option<Vertex>>, pre_used: &[Vertex]) -> Self {
        let len = kind.order();
        let nv = host.num_vertices();
        let mut used = vec![false; nv as usize];
        for &v in pre_used {
            used[v as usize] = true;
        }
        let graph = matches!(kind, CopyKind::Cycle(_) | CopyKind::Path(_));
        let done = len == 0 || len > nv as usize;
        Walker {
            host,
            shape: kind.shape(),
            len,
            graph,
            canon,
            fixed,
            first_range: (0, nv),
            seq: Vec::with_capacity(len),
            cursor: vec![0; len + 1],
            used,
            done,
        }
    }

    fn restrict_first(&mut self, lo: Vertex, hi: Vertex) {
        self.first_range = (lo, hi.min(self.host.num_vertices()));
        self.cursor[0] = self.first_range.0;
    }

    /// Candidate range `[lo, hi)` for position `pos` given the current prefix.
    fn range(&self, pos: usize) -> (Vertex, Vertex) {
        let nv = self.host.num_vertices();
        let (mut lo, mut hi) = if pos == 0 { self.first_range } else { (0, nv) };
        if self.graph && pos > 0 && self.host.mode() == HostMode::Bipartite {
            let n = self.host.n();
            if self.seq[pos - 1] < n {
                lo = lo.max(n);
            } else {
                hi = hi.min(n);
            }
        }
        if self.canon == Canon::Canonical {
            match self.shape {
                Shape::Cyclic if pos > 0 => {
                    lo = lo.max(self.seq[0] + 1);
                    if pos == self.len - 1 && pos >= 2 {
                        lo = lo.max(self.seq[1] + 1);
                    }
                }
                Shape::Linear if pos == self.len - 1 && pos > 0 => lo = lo.max(self.seq[0] + 1),
                Shape::Set => {
                    if pos > 0 {
                        lo = lo.max(self.seq[pos - 1] + 1);
                    }
                    hi = hi.min(nv + 1 - (self.len - pos) as Vertex);
                }
                _ => {}
            }
        }
        (lo, hi)
    }

    fn accepts(&self, pos: usize, v: Vertex) -> bool {
        if self.used[v as usize] {
            return false;
        }
        if let Some(f) = self.fixed.get(pos).copied().flatten() {
            if f != v {
                return false;
            }
        }
        if self.graph && pos > 0 && !self.host.adjacent(self.seq[pos - 1], v) {
            return false;
        }
        if self.graph && self.shape == Shape::Cyclic && pos == self.len - 1 && !self.host.adjacent(v, self.seq[0]) {
            return false;
        }
        true
    }

    fn push(&mut self, v: Vertex) {
        self.used[v as usize] = true;
        self.seq.push(v);
        let pos = self.seq.len();
        if pos < self.len {
            self.cursor[pos] = self.range(pos).0;
        }
    }

    fn pop(&mut self) {
        let v = self.seq.pop().expect("nonempty");
        self.used[v as usize] = false;
    }

    /// Advances to the next full sequence. `prune(prefix)` returning true
    /// skips every extension of `prefix` (including the prefix itself when full).
    fn advance(&mut self, prune: &mut impl FnMut(&[Vertex]) -> bool) -> bool {
        if self.done {
            return false;
        }
        loop {
            let pos = self.seq.len();
            if pos == self.len {
                self.pop();
                continue;
            }
            let (lo, hi) = self.range(pos);
            let mut c = self.cursor[pos].max(lo);
            if let Some(f) = self.fixed.get(pos).copied().flatten() {
                c = if c <= f { f } else { hi };
            }
            let mut found = None;
            while c < hi {
                if self.accepts(pos, c) {
                    found = Some(c);
                    break;
                }
                if self.fixed.get(pos).copied().flatten().is_some() {
                    break;
                }
                c += 1;
            }
            match found {
                None => {
                    if pos == 0 {
                        self.done = true;
                        return false;
                    }
                    self.pop();
                }
                Some(v) => {
                    self.cursor[pos] = v + 1;
                    self.push(v);
                    if prune(&self.seq) {
                        self.pop();
                        continue;
                    }
                    if self.seq.len() == self.len {
                        return true;
                    }
                }
            }
        }
    }
}

/// Lazy canonical stream of every copy of a kind in a host.
#[derive(Clone, Debug)]
pub struct CopyStream {
    walker: Walker,
}

impl CopyStream {
    pub fn new(host: &HostSpec, kind: CopyKind) -> Result<Self> {
        kind.validate(host)?;
        let walker = Walker::new(*host, kind, Canon::Canonical, Vec::new(), &[]);
        Ok(CopyStream { walker })
    }

    /// Only copies whose first canonical vertex lies in `lo..hi`.
    pub fn with_first_in(host: &HostSpec, kind: CopyKind, lo: Vertex, hi: Vertex) -> Result<Self> {
        let mut s = Self::new(host, kind)?;
        s.walker.restrict_first(lo, hi);
        Ok(s)
    }

    /// Next canonical copy, borrowed.
    pub fn next_copy(&mut self) -> Option<&[Vertex]> {
        if self.walker.advance(&mut |_| false) {
            Some(&self.walker.seq)
        } else {
            None
        }
    }

    /// Next canonical copy, skipping every subtree whose prefix `prune` rejects.
    pub fn next_pruned(&mut self, mut prune: impl FnMut(&[Vertex]) -> bool) -> Option<&[Vertex]> {
        if self.walker.advance(&mut prune) {
            Some(&self.walker.seq)
        } else {
            None
        }
    }
}

impl Iterator for CopyStream {
    type Item = SubgraphCopy;

    fn next(&mut self) -> Option<SubgraphCopy> {
        self.next_copy().map(|s| SubgraphCopy(s.to_vec()))
    }
}

/// Every copy of `kind` in `host`, in canonical stream order.
pub fn stream_copies(host: &HostSpec, kind: CopyKind) -> Result<CopyStream> {
    CopyStream::new(host, kind)
}

/// Copies whose edge set contains `edge`, each exactly once, in canonical form.
///
/// The order is deterministic but is not the order of [`stream_copies`].
pub fn stream_copies_through(host: &HostSpec, kind: CopyKind, edge: EdgeId) -> Result<impl Iterator<Item = SubgraphCopy>> {
    kind.validate(host)?;
    let verts = host.unrank_edge(edge)?;
    let len = kind.order();
    let mut walkers: Vec<Walker> = Vec::new();
    let fixed_at = |pairs: &[(usize, Vertex)]| {
        let mut f = vec![None; len];
        for &(p, v) in pairs {
            f[p] = Some(v);
        }
        f
    };
    if len <= host.num_vertices() as usize {
        match kind {
            CopyKind::Cycle(_) => {
                // Traverse starting at the smaller endpoint towards the larger one.
                walkers.push(Walker::new(*host, kind, Canon::Rooted, fixed_at(&[(0, verts[0]), (1, verts[1])]), &[]));
            }
            CopyKind::Path(_) => {
                for i in 0..len - 1 {
                    walkers.push(Walker::new(
                        *host,
                        kind,
                        Canon::Rooted,
                        fixed_at(&[(i, verts[0]), (i + 1, verts[1])]),
                        &[],
                    ));
                }
            }
            CopyKind::TightCycle(_) => {
                // The edge is a window; enumerate its orderings with first < last
                // (the other orientation is the same cycle read backwards).
                let k = verts.len();
                let mut perm = verts.clone();
                permutations(&mut perm, 0, &mut |p| {
                    if p[0] < p[k - 1] {
                        let pairs: Vec<(usize, Vertex)> = p.iter().copied().enumerate().collect();
                        walkers.push(Walker::new(*host, kind, Canon::Rooted, fixed_at(&pairs), &[]));
                    }
                });
            }
            CopyKind::CliqueSet(p) => {
                let extra = p as usize - verts.len();
                let mut w = Walker::new(*host, CopyKind::CliqueSet(extra as u32), Canon::Canonical, Vec::new(), &verts);
                if extra == 0 {
                    w.done = true;
                }
                let mut emitted_self = extra != 0;
                let verts2 = verts.clone();
                let iter = std::iter::from_fn(move || {
                    if !emitted_self {
                        emitted_self = true;
                        return Some(SubgraphCopy(verts2.clone()));
                    }
                    if w.advance(&mut |_| false) {
                        let mut all = w.seq.clone();
                        all.extend_from_slice(&verts2);
                        all.sort_unstable();
                        Some(SubgraphCopy(all))
                    } else {
                        None
                    }
                });
                return Ok(Box::new(iter) as Box<dyn Iterator<Item = SubgraphCopy>>);
            }
        }
    }
    let mut idx = 0;
    let iter = std::iter::from_fn(move || {
        while idx < walkers.len() {
            if walkers[idx].advance(&mut |_| false) {
                let mut seq = walkers[idx].seq.clone();
                canonicalize(kind, &mut seq);
                return Some(SubgraphCopy(seq));
            }
            idx += 1;
        }
        None
    });
    Ok(Box::new(iter) as Box<dyn Iterator<Item = SubgraphCopy>>)
}

fn permutations(v: &mut Vec<Vertex>, i: usize, f: &mut impl FnMut(&[Vertex])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v, i + 1, f);
        v.swap(i, j);
    }
}

/// Draws one copy uniformly at random by unranking a uniform index into the
/// space of labelled placements, then canonicalizing.
///
/// Every copy has the same number of labelled placements, so the result is
/// uniform over copies. Returns `None` when the host has no copy.
pub fn sample_copy<R: Rng + ?Sized>(host: &HostSpec, kind: CopyKind, rng: &mut R) -> Option<SubgraphCopy> {
    let len = kind.order();
    let nv = host.num_vertices() as usize;
    if len > nv {
        return None;
    }
    if kind.shape() == Shape::Set {
        let total = binom(nv as u64, len as u64);
        let rank = rng.gen_range(0..total);
        let mut out = vec![0; len];
        colex_unrank(rank, &mut out);
        return Some(SubgraphCopy(out));
    }
    let mut seq = match host.mode() {
        HostMode::Bipartite => {
            let n = host.n() as usize;
            if len.div_ceil(2) > n {
                return None;
            }
            // index = side + 2 * (left-sequence index + ...), decoded in mixed radix
            let radices: Vec<u128> = (0..len)
                .map(|i| (n - i / 2) as u128)
                .chain(std::iter::once(2))
                .collect();
            let total: u128 = radices.iter().product();
            let mut idx = rng.gen_range(0..total);
            let side = (idx % 2) as u32;
            idx /= 2;
            let mut pools: [Vec<Vertex>; 2] = [(0..host.n()).collect(), (host.n()..2 * host.n()).collect()];
            let mut seq = Vec::with_capacity(len);
            for i in 0..len {
                let s = ((side + i as u32) % 2) as usize;
                let r = radices[i];
                let pick = (idx % r) as usize;
                idx /= r;
                seq.push(pools[s].remove(pick));
            }
            seq
        }
        _ => {
            let total: u128 = (0..len).map(|i| (nv - i) as u128).product();
            let mut idx = rng.gen_range(0..total);
            let mut pool: Vec<Vertex> = (0..nv as Vertex).collect();
            let mut seq = Vec::with_capacity(len);
            for i in 0..len {
                let r = (nv - i) as u128;
                seq.push(pool.remove((idx % r) as usize));
                idx /= r;
            }
            seq
        }
    };
    canonicalize(kind, &mut seq);
    Some(SubgraphCopy(seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn count(host: HostSpec, kind: CopyKind) -> usize {
        stream_copies(&host, kind).unwrap().count()
    }

    #[test]
    fn spec_counts() {
        assert_eq!(count(HostSpec::complete(4), CopyKind::Cycle(4)), 3);
        assert_eq!(count(HostSpec::complete(5), CopyKind::Cycle(5)), 12);
        assert_eq!(count(HostSpec::complete(6), CopyKind::Path(6)), 360);
        assert_eq!(count(HostSpec::uniform(4, 3).unwrap(), CopyKind::TightCycle(4)), 3);
        assert_eq!(count(HostSpec::bipartite(3), CopyKind::Cycle(6)), 6);
        assert_eq!(count(HostSpec::complete(7), CopyKind::Cycle(4)), 105);
        assert_eq!(count(HostSpec::uniform(5, 3).unwrap(), CopyKind::CliqueSet(5)), 1);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(count_copies(&HostSpec::complete(7), CopyKind::Cycle(4)).unwrap(), 105);
        assert_eq!(count_copies(&HostSpec::complete(13), CopyKind::Path(6)).unwrap(), 617_760);
        assert_eq!(count_copies(&HostSpec::uniform(5, 3).unwrap(), CopyKind::CliqueSet(5)).unwrap(), 1);
        assert_eq!(count_copies(&HostSpec::complete(16), CopyKind::Path(8)).unwrap(), 259_459_200);
    }

    #[test]
    fn closed_forms_match_streams() {
        let mut cases = Vec::new();
        for n in 2..=7u32 {
            for m in 3..=n {
                cases.push((HostSpec::complete(n), CopyKind::Cycle(m)));
            }
            for t in 2..=n {
                cases.push((HostSpec::complete(n), CopyKind::Path(t)));
            }
            for p in 2..=n {
                cases.push((HostSpec::complete(n), CopyKind::CliqueSet(p)));
            }
        }
        for n in 1..=4u32 {
            for m in (4..=2 * n).step_by(2) {
                cases.push((HostSpec::bipartite(n), CopyKind::Cycle(m)));
            }
            for t in 2..=2 * n {
                cases.push((HostSpec::bipartite(n), CopyKind::Path(t)));
            }
        }
        for n in 3..=7u32 {
            for k in 3..=n.min(4) {
                let h = HostSpec::uniform(n, k).unwrap();
                for l in k + 1..=n {
                    cases.push((h, CopyKind::TightCycle(l)));
                }
                for p in k..=n {
                    cases.push((h, CopyKind::CliqueSet(p)));
                }
            }
        }
        for (h, kind) in cases {
            assert_eq!(count(h, kind) as u128, count_copies(&h, kind).unwrap(), "{h} {kind}");
        }
    }

    #[test]
    fn stream_is_lexicographic_and_canonical() {
        for (h, kind) in [
            (HostSpec::complete(7), CopyKind::Cycle(5)),
            (HostSpec::complete(6), CopyKind::Path(4)),
            (HostSpec::bipartite(3), CopyKind::Path(5)),
            (HostSpec::uniform(6, 3).unwrap(), CopyKind::TightCycle(5)),
        ] {
            let copies: Vec<SubgraphCopy> = stream_copies(&h, kind).unwrap().collect();
            for w in copies.windows(2) {
                assert!(w[0] < w[1]);
            }
            for c in &copies {
                let mut again = c.0.clone();
                canonicalize(kind, &mut again);
                assert_eq!(again, c.0);
            }
        }
    }

    #[test]
    fn through_examples() {
        let h4 = HostSpec::complete(4);
        let e01 = h4.rank_edge(&[0, 1]).unwrap();
        assert_eq!(stream_copies_through(&h4, CopyKind::Cycle(4), e01).unwrap().count(), 2);
        let h5 = HostSpec::complete(5);
        let e01 = h5.rank_edge(&[0, 1]).unwrap();
        // Brute force: sequences a-b-c with {0,1} as an edge; 3 choices of c, 2 attachment ends.
        let brute = stream_copies(&h5, CopyKind::Path(3))
            .unwrap()
            .filter(|c| c.edges(&h5, CopyKind::Path(3)).contains(&e01))
            .count();
        assert_eq!(brute, 6);
        assert_eq!(stream_copies_through(&h5, CopyKind::Path(3), e01).unwrap().count(), brute);
        // Host too small for the pattern.
        let h3 = HostSpec::complete(3);
        assert_eq!(stream_copies_through(&h3, CopyKind::Cycle(4), EdgeId(0)).unwrap().count(), 0);
    }

    #[test]
    fn through_equals_filter() {
        let mut cases = Vec::new();
        for n in 3..=7u32 {
            let h = HostSpec::complete(n);
            for m in 3..=n.min(6) {
                cases.push((h, CopyKind::Cycle(m)));
                cases.push((h, CopyKind::Path(m)));
            }
            cases.push((h, CopyKind::Path(2)));
            cases.push((h, CopyKind::CliqueSet(3.min(n))));
            cases.push((h, CopyKind::CliqueSet(2)));
        }
        for n in 2..=4u32 {
            let h = HostSpec::bipartite(n);
            cases.push((h, CopyKind::Cycle(4)));
            cases.push((h, CopyKind::Cycle(6)));
            cases.push((h, CopyKind::Path(4)));
            cases.push((h, CopyKind::Path(5)));
        }
        for n in 4..=7u32 {
            let h = HostSpec::uniform(n, 3).unwrap();
            cases.push((h, CopyKind::TightCycle(4)));
            cases.push((h, CopyKind::TightCycle(5)));
            cases.push((h, CopyKind::CliqueSet(4)));
            cases.push((h, CopyKind::CliqueSet(3)));
        }
        for (h, kind) in cases {
            let all: Vec<SubgraphCopy> = stream_copies(&h, kind).unwrap().collect();
            for r in 0..h.edge_count() {
                let e = EdgeId(r);
                let expected: BTreeSet<SubgraphCopy> = all
                    .iter()
                    .filter(|c| c.edges(&h, kind).contains(&e))
                    .cloned()
                    .collect();
                let got: Vec<SubgraphCopy> = stream_copies_through(&h, kind, e).unwrap().collect();
                let got_set: BTreeSet<SubgraphCopy> = got.iter().cloned().collect();
                assert_eq!(got.len(), got_set.len(), "duplicates {h} {kind} {e}");
                assert_eq!(got_set, expected, "{h} {kind} {e}");
            }
        }
    }

    #[test]
    fn bipartite_cycles_alternate() {
        let h = HostSpec::bipartite(4);
        for kind in [CopyKind::Cycle(4), CopyKind::Cycle(6), CopyKind::Cycle(8)] {
            for c in stream_copies(&h, kind).unwrap() {
                let m = c.0.len();
                for i in 0..m {
                    assert_ne!(h.side(c.0[i]), h.side(c.0[(i + 1) % m]));
                }
            }
        }
    }

    #[test]
    fn partitions_cover_stream() {
        let h = HostSpec::complete(8);
        let kind = CopyKind::Cycle(5);
        let all: Vec<SubgraphCopy> = stream_copies(&h, kind).unwrap().collect();
        let mut parts = Vec::new();
        for v in 0..8 {
            parts.extend(CopyStream::with_first_in(&h, kind, v, v + 1).unwrap());
        }
        assert_eq!(all, parts);
    }

    #[test]
    fn unsupported_kinds() {
        let b = HostSpec::bipartite(4);
        assert!(matches!(count_copies(&b, CopyKind::Cycle(5)), Err(Error::Unsupported(_))));
        assert!(matches!(count_copies(&b, CopyKind::CliqueSet(3)), Err(Error::Unsupported(_))));
        let u = HostSpec::uniform(6, 3).unwrap();
        assert!(matches!(count_copies(&u, CopyKind::Cycle(4)), Err(Error::Unsupported(_))));
        assert!(matches!(count_copies(&u, CopyKind::TightCycle(3)), Err(Error::Unsupported(_))));
        assert!(matches!(count_copies(&u, CopyKind::CliqueSet(2)), Err(Error::Unsupported(_))));
        let c = HostSpec::complete(6);
        assert!(matches!(count_copies(&c, CopyKind::TightCycle(4)), Err(Error::Unsupported(_))));
        assert!(matches!(count_copies(&c, CopyKind::Path(1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tight_cycle_edges_are_windows() {
        let h = HostSpec::uniform(6, 3).unwrap();
        let c = SubgraphCopy(vec![0, 1, 2, 3, 4]);
        let edges = c.edges(&h, CopyKind::TightCycle(5));
        let expect: Vec<EdgeId> = [[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 3, 4], [0, 1, 4]]
            .iter()
            .map(|w| h.rank_edge(w).unwrap())
            .collect();
        assert_eq!(edges, expect);
        let k5 = SubgraphCopy(vec![0, 1, 2, 3, 4]);
        assert_eq!(k5.edges(&h, CopyKind::CliqueSet(5)).len(), 10);
    }

    #[test]
    fn sampling_is_canonical_and_covers() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for (h, kind) in [
            (HostSpec::complete(5), CopyKind::Cycle(4)),
            (HostSpec::complete(5), CopyKind::Path(4)),
            (HostSpec::bipartite(3), CopyKind::Cycle(4)),
            (HostSpec::bipartite(3), CopyKind::Path(4)),
            (HostSpec::bipartite(3), CopyKind::Path(3)),
            (HostSpec::uniform(5, 3).unwrap(), CopyKind::TightCycle(4)),
            (HostSpec::uniform(6, 3).unwrap(), CopyKind::CliqueSet(4)),
        ] {
            let all: BTreeSet<SubgraphCopy> = stream_copies(&h, kind).unwrap().collect();
            let mut hits = std::collections::BTreeMap::new();
            let draws = 400 * all.len();
            for _ in 0..draws {
                let c = sample_copy(&h, kind, &mut rng).unwrap();
                assert!(all.contains(&c), "{h} {kind} {c}");
                *hits.entry(c).or_insert(0usize) += 1;
            }
            assert_eq!(hits.len(), all.len(), "{h} {kind}");
            // Loose uniformity check: every copy within 40% of the mean.
            for (&_, &n) in &hits {
                assert!((n as f64 - 400.0).abs() < 160.0, "{h} {kind} {n}");
            }
        }
    }
}
