//! Exact minimum palette size on tiny hosts by branch and bound.

use crate::coloring::{Color, Coloring};
use crate::enumerate::{copy_edges, stream_copies, CopyKind};
use crate::error::{Error, Result};
use crate::host::{EdgeId, HostSpec};

/// Largest host the solver accepts, in edges.
pub const MAX_EDGES: u64 = 36;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactProblem {
    pub host: HostSpec,
    pub kinds: Vec<(CopyKind, u32)>,
    pub require_proper: bool,
}

impl ExactProblem {
    pub fn new(host: HostSpec, kinds: Vec<(CopyKind, u32)>) -> Self {
        ExactProblem { host, kinds, require_proper: false }
    }

    pub fn proper(mut self) -> Self {
        self.require_proper = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    pub value: u32,
    pub witness: Coloring,
    pub nodes: u64,
}

struct Solver {
    /// Edge ids in assignment order.
    order: Vec<EdgeId>,
    /// Per copy: its edges as positions in `order`, and its threshold.
    copies: Vec<(Vec<usize>, u32)>,
    /// Copies through each position.
    through: Vec<Vec<usize>>,
    /// Earlier positions whose edges meet the edge at each position.
    touching: Vec<Vec<usize>>,
    assign: Vec<Color>,
    best: u32,
    best_assign: Option<Vec<Color>>,
    lower: u32,
    nodes: u64,
    budget: u64,
    out_of_budget: bool,
}

const NONE: Color = Color::MAX;

impl Solver {
    /// Whether every copy through `pos` can still reach its threshold.
    fn feasible(&self, pos: usize) -> bool {
        let mut seen: Vec<Color> = Vec::new();
        for &ci in &self.through[pos] {
            let (edges, q) = &self.copies[ci];
            seen.clear();
            let mut open = 0;
            for &p in edges {
                match self.assign[p] {
                    NONE => open += 1,
                    c if !seen.contains(&c) => seen.push(c),
                    _ => {}
                }
            }
            if (seen.len() + open) < *q as usize {
                return false;
            }
        }
        self.touching[pos].iter().all(|&p| self.assign[p] != self.assign[pos])
    }

    fn search(&mut self, pos: usize, used: u32) {
        if self.best <= self.lower || self.out_of_budget {
            return;
        }
        if pos == self.order.len() {
            self.best = used;
            self.best_assign = Some(self.assign.clone());
            return;
        }
        if self.nodes >= self.budget {
            self.out_of_budget = true;
            return;
        }
        self.nodes += 1;
        // A new color is only worth opening while it beats the incumbent.
        let top = if used + 1 < self.best { used + 1 } else { used };
        for c in 0..top {
            if used.max(c + 1) >= self.best {
                break;
            }
            self.assign[pos] = c;
            if self.feasible(pos) {
                self.search(pos + 1, used.max(c + 1));
                if self.best <= self.lower || self.out_of_budget {
                    break;
                }
            }
        }
        self.assign[pos] = NONE;
    }
}

/// Exact minimum number of colors over colorings of `problem.host` meeting
/// every `(kind, q)`, with edges taken by decreasing number of copies through
/// them.
pub fn min_colors(problem: &ExactProblem, budget: u64) -> Result<ExactSolution> {
    let host = problem.host;
    let mut through = vec![0u64; host.edge_count() as usize];
    let mut buf = Vec::new();
    for &(kind, _) in &problem.kinds {
        kind.validate(&host)?;
        let mut s = stream_copies(&host, kind)?;
        while let Some(seq) = s.next_copy() {
            buf.clear();
            copy_edges(&host, kind, seq, &mut buf);
            for e in &buf {
                through[e.index()] += 1;
            }
        }
    }
    let mut order: Vec<EdgeId> = (0..host.edge_count()).map(EdgeId).collect();
    order.sort_by_key(|e| (std::cmp::Reverse(through[e.index()]), *e));
    min_colors_ordered(problem, budget, &order)
}

/// As [`min_colors`], assigning edges in the given order.
pub fn min_colors_ordered(problem: &ExactProblem, budget: u64, order: &[EdgeId]) -> Result<ExactSolution> {
    let host = problem.host;
    let m = host.edge_count();
    if m > MAX_EDGES {
        return Err(Error::Unsupported(format!("exact search is limited to {MAX_EDGES} edges, host has {m}")));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..m).map(EdgeId).collect::<Vec<_>>() {
        return Err(Error::Config("edge order must list every edge exactly once".into()));
    }
    let mut pos_of = vec![0; m as usize];
    for (p, e) in order.iter().enumerate() {
        pos_of[e.index()] = p;
    }
    let mut copies = Vec::new();
    let mut through = vec![Vec::new(); m as usize];
    let mut buf = Vec::new();
    let mut lower = u32::from(m > 0);
    for &(kind, q) in &problem.kinds {
        kind.validate(&host)?;
        let mut s = stream_copies(&host, kind)?;
        while let Some(seq) = s.next_copy() {
            buf.clear();
            copy_edges(&host, kind, seq, &mut buf);
            if q as usize > buf.len() {
                return Err(Error::Config(format!("{} has only {} edges, q = {q} is unreachable", kind.name(), buf.len())));
            }
            lower = lower.max(q);
            let positions: Vec<usize> = buf.iter().map(|e| pos_of[e.index()]).collect();
            for &p in &positions {
                through[p].push(copies.len());
            }
            copies.push((positions, q));
        }
    }
    let verts: Vec<Vec<u32>> = order.iter().map(|&e| host.unrank_edge(e)).collect::<Result<_>>()?;
    let touching: Vec<Vec<usize>> = (0..m as usize)
        .map(|p| {
            if !problem.require_proper {
                return Vec::new();
            }
            (0..p).filter(|&r| verts[r].iter().any(|v| verts[p].contains(v))).collect()
        })
        .collect();
    let mut solver = Solver {
        order: order.to_vec(),
        copies,
        through,
        touching,
        assign: vec![NONE; m as usize],
        best: m as u32 + 1,
        best_assign: None,
        lower,
        nodes: 0,
        budget,
        out_of_budget: false,
    };
    solver.search(0, 0);
    let found = solver.best_assign.take();
    if solver.out_of_budget && solver.best > solver.lower {
        return Err(Error::BudgetExceeded { budget, lower: solver.lower, upper: found.map(|_| solver.best) });
    }
    let assign = found.ok_or_else(|| Error::Config("no coloring meets the constraints".into()))?;
    let mut colors = vec![0; m as usize];
    for (p, e) in order.iter().enumerate() {
        colors[e.index()] = assign[p];
    }
    let witness = Coloring::from_colors(host, colors);
    Ok(ExactSolution { value: solver.best, witness, nodes: solver.nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check, CheckSpec};

    fn solve(n: u32, kind: CopyKind, q: u32) -> u32 {
        let p = ExactProblem::new(HostSpec::complete(n), vec![(kind, q)]);
        let s = min_colors(&p, 50_000_000).unwrap();
        assert!(check(&s.witness, &CheckSpec::exhaustive(p.kinds.clone())).unwrap().ok);
        assert_eq!(s.witness.distinct_colors(), s.value);
        s.value
    }

    #[test]
    fn small_values() {
        assert_eq!(solve(4, CopyKind::Path(4), 3), 6);
        assert_eq!(solve(3, CopyKind::Path(4), 3), 1);
        assert_eq!(solve(4, CopyKind::CliqueSet(3), 2), 2);
        // A 2-colored C_4 is avoided by 3 colors on K_4 (one per perfect matching).
        assert_eq!(solve(4, CopyKind::Cycle(4), 3), 3);
    }

    #[test]
    fn proper_needs_class_index() {
        let p = ExactProblem::new(HostSpec::complete(4), vec![]).proper();
        assert_eq!(min_colors(&p, 1_000_000).unwrap().value, 3);
        let p = ExactProblem::new(HostSpec::complete(5), vec![]).proper();
        assert_eq!(min_colors(&p, 1_000_000).unwrap().value, 5);
    }

    #[test]
    fn budget_and_caps() {
        let p = ExactProblem::new(HostSpec::complete(5), vec![(CopyKind::Path(4), 3)]);
        assert!(matches!(min_colors(&p, 5), Err(Error::BudgetExceeded { budget: 5, .. })));
        let p = ExactProblem::new(HostSpec::complete(10), vec![]);
        assert!(matches!(min_colors(&p, 10), Err(Error::Unsupported(_))));
        let p = ExactProblem::new(HostSpec::complete(5), vec![(CopyKind::Path(3), 3)]);
        assert!(min_colors(&p, 10).is_err());
    }

    #[test]
    fn paths_need_every_pair_on_k5() {
        assert_eq!(solve(5, CopyKind::Path(4), 3), 10);
        assert_eq!(solve(5, CopyKind::Path(5), 4), 10);
    }

    #[test]
    fn value_ignores_edge_order() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let cases = [
            ExactProblem::new(HostSpec::complete(5), vec![(CopyKind::Cycle(4), 3)]),
            ExactProblem::new(HostSpec::complete(5), vec![(CopyKind::CliqueSet(4), 4)]),
            ExactProblem::new(HostSpec::complete(5), vec![]).proper(),
            ExactProblem::new(HostSpec::bipartite(3), vec![(CopyKind::Cycle(4), 3)]),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in &cases {
            let want = min_colors(p, 50_000_000).unwrap().value;
            let mut order: Vec<EdgeId> = (0..p.host.edge_count()).map(EdgeId).collect();
            for _ in 0..10 {
                order.shuffle(&mut rng);
                let s = min_colors_ordered(p, 50_000_000, &order).unwrap();
                assert_eq!(s.value, want);
                assert!(check(&s.witness, &CheckSpec::exhaustive(p.kinds.clone())).unwrap().ok);
            }
        }
    }
}
