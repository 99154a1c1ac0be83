//! Complete host graphs and hypergraphs, and colexicographic edge ranking.
//!
//! Three hosts are supported: `K_n`, `K_{n,n}` and the complete `k`-uniform
//! hypergraph `K_n^k`. Edges are identified by the colex rank of their sorted
//! vertex set inside the host's edge set, so the edge ids of `K_n` are a prefix
//! of the edge ids of `K_{n+1}`.

use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Colexicographic rank of an edge inside its host.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u64);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HostMode {
    Complete,
    Bipartite,
    UniformComplete,
}

impl HostMode {
    pub fn as_str(self) -> &'static str {
        match self {
            HostMode::Complete => "complete",
            HostMode::Bipartite => "bipartite",
            HostMode::UniformComplete => "uniform",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "complete" => Some(HostMode::Complete),
            "bipartite" => Some(HostMode::Bipartite),
            "uniform" => Some(HostMode::UniformComplete),
            _ => None,
        }
    }
}

impl fmt::Display for HostMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `C(n, k)` in 64 bits. Saturates instead of overflowing.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colex rank of a strictly increasing vertex sequence among all subsets of
/// the same size: `sum_i C(v_i, i + 1)`.
#[inline]
pub fn colex_rank(sorted: &[Vertex]) -> u64 {
    sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| binom(u64::from(v), i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for subsets of size `out.len()`.
pub fn colex_unrank(mut rank: u64, out: &mut [Vertex]) {
    let size = out.len();
    for i in (0..size).rev() {
        let slot = i as u64 + 1;
        // Largest v with C(v, slot) <= rank; v >= i.
        let mut v = i as u64;
        while binom(v + 1, slot) <= rank {
            v += 1;
        }
        rank -= binom(v, slot);
        out[i] = v as Vertex;
    }
}

/// Which complete host, and its size.
///
/// For `Bipartite`, `n` is the size of each side; the left side is
/// `0..n` and the right side is `n..2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HostSpec {
    mode: HostMode,
    n: u32,
    k: u32,
}

impl HostSpec {
    pub fn new(mode: HostMode, n: u32, k: u32) -> Result<Self> {
        match mode {
            HostMode::Complete | HostMode::Bipartite if k != 2 => Err(Error::Config(format!(
                "{mode} hosts have edge uniformity 2, got k={k}"
            ))),
            HostMode::UniformComplete if k < 3 || k > n => Err(Error::Config(format!(
                "uniform hosts need 3 <= k <= n, got n={n}, k={k}"
            ))),
            _ => Ok(HostSpec { mode, n, k }),
        }
    }

    pub fn complete(n: u32) -> Self {
        HostSpec { mode: HostMode::Complete, n, k: 2 }
    }

    pub fn bipartite(n: u32) -> Self {
        HostSpec { mode: HostMode::Bipartite, n, k: 2 }
    }

    pub fn uniform(n: u32, k: u32) -> Result<Self> {
        Self::new(HostMode::UniformComplete, n, k)
    }

    #[inline]
    pub fn mode(&self) -> HostMode {
        self.mode
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn num_vertices(&self) -> u32 {
        match self.mode {
            HostMode::Bipartite => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn edge_count(&self) -> u64 {
        let n = u64::from(self.n);
        match self.mode {
            HostMode::Complete => binom(n, 2),
            HostMode::Bipartite => n * n,
            HostMode::UniformComplete => binom(n, u64::from(self.k)),
        }
    }

    /// 0 for the left side, 1 for the right side. Only meaningful for bipartite hosts.
    #[inline]
    pub fn side(&self, v: Vertex) -> u32 {
        u32::from(v >= self.n)
    }

    /// Whether `{u, v}` is an edge. Graph hosts only.
    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        match self.mode {
            HostMode::Complete => u != v,
            HostMode::Bipartite => self.side(u) != self.side(v),
            HostMode::UniformComplete => false,
        }
    }

    /// Rank of the pair `{u, v}` with no validation. Graph hosts only.
    #[inline]
    pub fn pair_rank(&self, u: Vertex, v: Vertex) -> EdgeId {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        match self.mode {
            HostMode::Bipartite => {
                EdgeId(u64::from(hi - self.n) * u64::from(self.n) + u64::from(lo))
            }
            _ => EdgeId(u64::from(hi) * u64::from(hi.wrapping_sub(1)) / 2 + u64::from(lo)),
        }
    }

    /// Rank of a sorted edge with no validation.
    #[inline]
    pub fn rank_unchecked(&self, sorted: &[Vertex]) -> EdgeId {
        match self.mode {
            HostMode::UniformComplete => EdgeId(colex_rank(sorted)),
            _ => self.pair_rank(sorted[0], sorted[1]),
        }
    }

    /// Whether `verts` (ascending) is an edge of this host.
    pub fn is_edge(&self, verts: &[Vertex]) -> bool {
        if verts.len() != self.k as usize {
            return false;
        }
        if verts.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if verts.iter().any(|&v| v >= self.num_vertices()) {
            return false;
        }
        match self.mode {
            HostMode::Bipartite => self.side(verts[0]) == 0 && self.side(verts[1]) == 1,
            _ => true,
        }
    }

    pub fn rank_edge(&self, verts: &[Vertex]) -> Result<EdgeId> {
        if !self.is_edge(verts) {
            return Err(Error::InvalidEdge(format!(
                "{verts:?} is not an edge of {}",
                self
            )));
        }
        Ok(self.rank_unchecked(verts))
    }

    pub fn unrank_edge(&self, id: EdgeId) -> Result<Vec<Vertex>> {
        if id.0 >= self.edge_count() {
            return Err(Error::InvalidEdge(format!(
                "edge id {} out of range for {} ({} edges)",
                id.0,
                self,
                self.edge_count()
            )));
        }
        let mut out = vec![0; self.k as usize];
        self.unrank_into(id, &mut out);
        Ok(out)
    }

    /// Unchecked unrank into a buffer of length `k`.
    pub fn unrank_into(&self, id: EdgeId, out: &mut [Vertex]) {
        match self.mode {
            HostMode::Bipartite => {
                let n = u64::from(self.n);
                out[0] = (id.0 % n) as Vertex;
                out[1] = (id.0 / n + n) as Vertex;
            }
            _ => colex_unrank(id.0, out),
        }
    }

    /// Iterator over every edge in rank order, with its vertex set.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Vec<Vertex>)> + '_ {
        (0..self.edge_count()).map(move |r| {
            let mut buf = vec![0; self.k as usize];
            self.unrank_into(EdgeId(r), &mut buf);
            (EdgeId(r), buf)
        })
    }
}

impl fmt::Display for HostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            HostMode::Complete => write!(f, "K_{}", self.n),
            HostMode::Bipartite => write!(f, "K_{{{0},{0}}}", self.n),
            HostMode::UniformComplete => write!(f, "K_{}^{}", self.n, self.k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let h = HostSpec::complete(6);
        assert_eq!(h.rank_edge(&[0, 1]).unwrap(), EdgeId(0));
        assert_eq!(h.rank_edge(&[1, 3]).unwrap(), EdgeId(4));
        let h3 = HostSpec::uniform(5, 3).unwrap();
        assert_eq!(h3.rank_edge(&[0, 1, 2]).unwrap(), EdgeId(0));
    }

    #[test]
    fn unrank_examples() {
        let h = HostSpec::complete(6);
        assert_eq!(h.unrank_edge(EdgeId(0)).unwrap(), vec![0, 1]);
        assert_eq!(h.unrank_edge(EdgeId(4)).unwrap(), vec![1, 3]);
        let b = HostSpec::bipartite(3);
        assert_eq!(b.unrank_edge(EdgeId(0)).unwrap(), vec![0, 3]);
    }

    #[test]
    fn colex_order_matches_enumeration() {
        // Pairs in colex order: sort by max element, then min.
        let mut pairs = Vec::new();
        for v in 0..6u32 {
            for u in 0..v {
                pairs.push([u, v]);
            }
        }
        let h = HostSpec::complete(6);
        for (i, p) in pairs.iter().enumerate() {
            assert_eq!(h.rank_edge(p).unwrap(), EdgeId(i as u64));
        }
    }

    #[test]
    fn rank_unrank_bijection_exhaustive() {
        for n in 1..=12u32 {
            let hosts: Vec<HostSpec> = std::iter::once(HostSpec::complete(n))
                .chain(std::iter::once(HostSpec::bipartite(n)))
                .chain((3..=n.min(6)).map(|k| HostSpec::uniform(n, k).unwrap()))
                .collect();
            for h in hosts {
                let mut seen = 0u64;
                for r in 0..h.edge_count() {
                    let verts = h.unrank_edge(EdgeId(r)).unwrap();
                    assert!(h.is_edge(&verts), "{h}: {verts:?}");
                    assert_eq!(h.rank_edge(&verts).unwrap(), EdgeId(r));
                    seen += 1;
                }
                assert_eq!(seen, h.edge_count());
            }
        }
    }

    #[test]
    fn invalid_edges_rejected() {
        let h = HostSpec::complete(5);
        assert!(matches!(h.rank_edge(&[1, 1]), Err(Error::InvalidEdge(_))));
        assert!(matches!(h.rank_edge(&[3, 1]), Err(Error::InvalidEdge(_))));
        assert!(matches!(h.rank_edge(&[0, 5]), Err(Error::InvalidEdge(_))));
        assert!(matches!(h.rank_edge(&[0, 1, 2]), Err(Error::InvalidEdge(_))));
        assert!(matches!(h.unrank_edge(EdgeId(10)), Err(Error::InvalidEdge(_))));
        let b = HostSpec::bipartite(3);
        assert!(matches!(b.rank_edge(&[0, 1]), Err(Error::InvalidEdge(_))));
        assert!(matches!(b.rank_edge(&[3, 4]), Err(Error::InvalidEdge(_))));
    }

    #[test]
    fn host_invariants() {
        assert!(HostSpec::new(HostMode::Complete, 5, 3).is_err());
        assert!(HostSpec::uniform(5, 2).is_err());
        assert!(HostSpec::uniform(3, 4).is_err());
        assert_eq!(HostSpec::uniform(20, 3).unwrap().edge_count(), 1140);
        assert_eq!(HostSpec::bipartite(24).num_vertices(), 48);
    }

    #[test]
    fn complete_ranks_extend_with_n() {
        let small = HostSpec::complete(7);
        let big = HostSpec::complete(12);
        for (id, verts) in small.edges() {
            assert_eq!(big.rank_edge(&verts).unwrap(), id);
        }
    }
}
