//! Dense edge colorings over a host, with an explicit "uncolored" sentinel.

use std::collections::{BTreeMap, BTreeSet};

use crate::host::{EdgeId, HostSpec, Vertex};

pub type Color = u32;

/// Marks an edge that has no color. Never a valid color id.
pub const UNCOLORED: Color = u32::MAX;

/// Edge -> color map over a complete host.
///
/// Every colored entry is `< palette_size`. After [`Coloring::normalize`]
/// the palette is exactly the set of ids in use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    host: HostSpec,
    colors: Vec<Color>,
    palette_size: u32,
}

impl Coloring {
    pub fn uncolored(host: HostSpec) -> Self {
        Coloring {
            host,
            colors: vec![UNCOLORED; host.edge_count() as usize],
            palette_size: 0,
        }
    }

    /// Builds a coloring from a full color vector; palette is `max + 1`.
    pub fn from_colors(host: HostSpec, colors: Vec<Color>) -> Self {
        assert_eq!(colors.len() as u64, host.edge_count());
        let palette_size = colors
            .iter()
            .filter(|&&c| c != UNCOLORED)
            .map(|&c| c + 1)
            .max()
            .unwrap_or(0);
        Coloring { host, colors, palette_size }
    }

    /// Rainbow coloring: edge `i` gets color `i`.
    pub fn rainbow(host: HostSpec) -> Self {
        let colors = (0..host.edge_count() as Color).collect();
        Self::from_colors(host, colors)
    }

    pub fn monochromatic(host: HostSpec) -> Self {
        Self::from_colors(host, vec![0; host.edge_count() as usize])
    }

    #[inline]
    pub fn host(&self) -> &HostSpec {
        &self.host
    }

    #[inline]
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    #[inline]
    pub fn palette_size(&self) -> u32 {
        self.palette_size
    }

    /// Declares a palette larger than the ids in use (e.g. when loading a file).
    pub fn set_palette_size(&mut self, palette_size: u32) {
        debug_assert!(self
            .colors
            .iter()
            .all(|&c| c == UNCOLORED || c < palette_size));
        self.palette_size = palette_size;
    }

    #[inline]
    pub fn get(&self, e: EdgeId) -> Color {
        self.colors[e.index()]
    }

    /// Color of the pair `{u, v}` in a graph host.
    #[inline]
    pub fn pair(&self, u: Vertex, v: Vertex) -> Color {
        self.colors[self.host.pair_rank(u, v).index()]
    }

    #[inline]
    pub fn set(&mut self, e: EdgeId, c: Color) {
        if c != UNCOLORED && c >= self.palette_size {
            self.palette_size = c + 1;
        }
        self.colors[e.index()] = c;
    }

    #[inline]
    pub fn is_colored(&self, e: EdgeId) -> bool {
        self.colors[e.index()] != UNCOLORED
    }

    pub fn colored_count(&self) -> u64 {
        self.colors.iter().filter(|&&c| c != UNCOLORED).count() as u64
    }

    pub fn uncolored_count(&self) -> u64 {
        self.colors.len() as u64 - self.colored_count()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|&c| c != UNCOLORED)
    }

    pub fn uncolored_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == UNCOLORED)
            .map(|(i, _)| EdgeId(i as u64))
    }

    /// Number of distinct color ids actually used.
    pub fn distinct_colors(&self) -> u32 {
        let mut used = vec![false; self.palette_size as usize];
        let mut count = 0;
        for &c in &self.colors {
            if c != UNCOLORED && !used[c as usize] {
                used[c as usize] = true;
                count += 1;
            }
        }
        count
    }

    /// Compacts color ids to `0..distinct`, preserving their relative order.
    /// Returns the old -> new map (`UNCOLORED` for unused ids).
    pub fn normalize(&mut self) -> Vec<Color> {
        let mut used = vec![false; self.palette_size as usize];
        for &c in &self.colors {
            if c != UNCOLORED {
                used[c as usize] = true;
            }
        }
        let mut map = vec![UNCOLORED; used.len()];
        let mut next = 0;
        for (old, &u) in used.iter().enumerate() {
            if u {
                map[old] = next;
                next += 1;
            }
        }
        for c in &mut self.colors {
            if *c != UNCOLORED {
                *c = map[*c as usize];
            }
        }
        self.palette_size = next;
        map
    }

    /// Sizes of the nonempty color classes, largest first.
    pub fn color_class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.palette_size as usize];
        for &c in &self.colors {
            if c != UNCOLORED {
                sizes[c as usize] += 1;
            }
        }
        sizes.retain(|&s| s > 0);
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Per-color edge lists and per-(vertex, color) incidence counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColorClassIndex {
    classes: BTreeMap<Color, BTreeSet<EdgeId>>,
    incidence: BTreeMap<(Vertex, Color), u32>,
}

impl ColorClassIndex {
    pub fn build(coloring: &Coloring) -> Self {
        let mut index = ColorClassIndex::default();
        let host = *coloring.host();
        let mut buf = vec![0; host.k() as usize];
        for (i, &c) in coloring.colors().iter().enumerate() {
            if c != UNCOLORED {
                host.unrank_into(EdgeId(i as u64), &mut buf);
                index.insert(EdgeId(i as u64), &buf, c);
            }
        }
        index
    }

    fn insert(&mut self, e: EdgeId, verts: &[Vertex], c: Color) {
        self.classes.entry(c).or_default().insert(e);
        for &v in verts {
            *self.incidence.entry((v, c)).or_insert(0) += 1;
        }
    }

    fn remove(&mut self, e: EdgeId, verts: &[Vertex], c: Color) {
        if let Some(class) = self.classes.get_mut(&c) {
            class.remove(&e);
            if class.is_empty() {
                self.classes.remove(&c);
            }
        }
        for &v in verts {
            if let Some(cnt) = self.incidence.get_mut(&(v, c)) {
                *cnt -= 1;
                if *cnt == 0 {
                    self.incidence.remove(&(v, c));
                }
            }
        }
    }

    /// Recolors `e` in both the coloring and the index.
    pub fn set_color(&mut self, coloring: &mut Coloring, e: EdgeId, c: Color) {
        let host = *coloring.host();
        let verts = host.unrank_edge(e).expect("edge in range");
        let old = coloring.get(e);
        if old == c {
            return;
        }
        if old != UNCOLORED {
            self.remove(e, &verts, old);
        }
        if c != UNCOLORED {
            self.insert(e, &verts, c);
        }
        coloring.set(e, c);
    }

    pub fn class(&self, c: Color) -> impl Iterator<Item = EdgeId> + '_ {
        self.classes.get(&c).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn class_size(&self, c: Color) -> usize {
        self.classes.get(&c).map_or(0, |s| s.len())
    }

    pub fn incidence(&self, v: Vertex, c: Color) -> u32 {
        self.incidence.get(&(v, c)).copied().unwrap_or(0)
    }

    pub fn colors_in_use(&self) -> impl Iterator<Item = Color> + '_ {
        self.classes.keys().copied()
    }
}
