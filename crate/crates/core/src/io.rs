//! The `grc` coloring file format.
//!
//! ```text
//! grc 1 <mode> <n> <k> <palette_size>
//! # comment
//! e v1 v2 ... vk c
//! ```
//!
//! One line per colored edge, vertices ascending, in edge-rank order when
//! written by this crate. Uncolored edges are omitted.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::coloring::{Coloring, UNCOLORED};
use crate::error::{Error, Result};
use crate::host::{EdgeId, HostMode, HostSpec, Vertex};

pub const FORMAT_VERSION: u32 = 1;

pub fn write_coloring<W: Write>(coloring: &Coloring, mut out: W) -> Result<()> {
    let host = coloring.host();
    writeln!(
        out,
        "grc {} {} {} {} {}",
        FORMAT_VERSION,
        host.mode(),
        host.n(),
        host.k(),
        coloring.palette_size()
    )?;
    let mut buf = vec![0; host.k() as usize];
    let mut line = String::new();
    for (i, &c) in coloring.colors().iter().enumerate() {
        if c == UNCOLORED {
            continue;
        }
        host.unrank_into(EdgeId(i as u64), &mut buf);
        line.clear();
        line.push('e');
        for v in &buf {
            line.push(' ');
            line.push_str(&v.to_string());
        }
        line.push(' ');
        line.push_str(&c.to_string());
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn read_coloring<R: Read>(input: R) -> Result<Coloring> {
    let reader = BufReader::new(input);
    let mut coloring: Option<Coloring> = None;
    let mut palette = 0u32;
    let mut verts: Vec<Vertex> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        let Some(c) = coloring.as_mut() else {
            if toks.len() != 6 || toks[0] != "grc" {
                return Err(parse_err(lineno, "expected header `grc 1 <mode> <n> <k> <palette>`"));
            }
            let version: u32 = parse_num(toks[1], lineno, "version")?;
            if version != FORMAT_VERSION {
                return Err(parse_err(lineno, format!("unsupported version {version}")));
            }
            let mode = HostMode::parse(toks[2])
                .ok_or_else(|| parse_err(lineno, format!("unknown mode `{}`", toks[2])))?;
            let n: u32 = parse_num(toks[3], lineno, "n")?;
            let k: u32 = parse_num(toks[4], lineno, "k")?;
            palette = parse_num(toks[5], lineno, "palette size")?;
            let host = HostSpec::new(mode, n, k).map_err(|e| parse_err(lineno, e.to_string()))?;
            let mut fresh = Coloring::uncolored(host);
            fresh.set_palette_size(palette);
            coloring = Some(fresh);
            continue;
        };
        let host = *c.host();
        let k = host.k() as usize;
        if toks[0] != "e" || toks.len() != k + 2 {
            return Err(parse_err(lineno, format!("expected `e` followed by {k} vertices and a color")));
        }
        verts.clear();
        for tok in &toks[1..=k] {
            let v: Vertex = parse_num(tok, lineno, "vertex")?;
            if v >= host.num_vertices() {
                return Err(parse_err(lineno, format!("vertex {v} out of range")));
            }
            verts.push(v);
        }
        let color: u32 = parse_num(toks[k + 1], lineno, "color")?;
        if color >= palette {
            return Err(parse_err(lineno, format!("color {color} >= palette size {palette}")));
        }
        let id = host
            .rank_edge(&verts)
            .map_err(|e| parse_err(lineno, e.to_string()))?;
        if c.is_colored(id) {
            return Err(parse_err(lineno, format!("duplicate edge {verts:?}")));
        }
        c.set(id, color);
    }
    coloring.ok_or_else(|| parse_err(0, "missing header"))
}

pub fn save_coloring(coloring: &Coloring, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_coloring(coloring, BufWriter::new(file))
}

pub fn load_coloring(path: impl AsRef<Path>) -> Result<Coloring> {
    read_coloring(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn to_string(c: &Coloring) -> String {
        let mut buf = Vec::new();
        write_coloring(c, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn round_trip_k5() {
        let host = HostSpec::complete(5);
        let colors = (0..10).map(|i| i % 4).collect();
        let c = Coloring::from_colors(host, colors);
        let text = to_string(&c);
        assert!(text.starts_with("grc 1 complete 5 2 4\ne 0 1 0\n"));
        assert_eq!(read_coloring(text.as_bytes()).unwrap(), c);
    }

    #[test]
    fn comments_and_partial() {
        let text = "# hello\ngrc 1 uniform 5 3 3\n# edge\ne 0 1 2 2\n\ne 2 3 4 0\n";
        let c = read_coloring(text.as_bytes()).unwrap();
        assert_eq!(c.colored_count(), 2);
        assert_eq!(c.palette_size(), 3);
        assert_eq!(c.get(EdgeId(0)), 2);
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rejects_duplicates() {
        let text = "grc 1 complete 4 2 2\ne 0 1 0\ne 0 1 1\n";
        assert_eq!(line_of(read_coloring(text.as_bytes()).unwrap_err()), 3);
    }

    #[test]
    fn rejects_color_out_of_palette() {
        let text = "grc 1 complete 4 2 2\ne 0 1 2\n";
        assert_eq!(line_of(read_coloring(text.as_bytes()).unwrap_err()), 2);
    }

    #[test]
    fn rejects_bad_vertices_and_headers() {
        for (text, line) in [
            ("grc 1 complete 4 2 2\ne 0 4 0\n", 2),
            ("grc 1 complete 4 2 2\ne 2 1 0\n", 2),
            ("grc 1 bipartite 3 2 2\ne 0 1 0\n", 2),
            ("grc 2 complete 4 2 2\n", 1),
            ("grc 1 torus 4 2 2\n", 1),
            ("grc 1 complete 4\n", 1),
            ("e 0 1 0\n", 1),
            ("grc 1 complete 4 2 2\ne 0 1\n", 2),
            ("grc 1 complete 4 2 2\nx 0 1 0\n", 2),
        ] {
            assert_eq!(line_of(read_coloring(text.as_bytes()).unwrap_err()), line, "{text}");
        }
        assert!(read_coloring("".as_bytes()).is_err());
    }

    fn any_coloring() -> impl Strategy<Value = Coloring> {
        (0usize..3, 3u32..9).prop_flat_map(|(mode, n)| {
            let host = match mode {
                0 => HostSpec::complete(n),
                1 => HostSpec::bipartite(n),
                _ => HostSpec::uniform(n, 3).unwrap(),
            };
            let m = host.edge_count() as usize;
            proptest::collection::vec(prop_oneof![Just(UNCOLORED), 0u32..12], m)
                .prop_map(move |colors| Coloring::from_colors(host, colors))
        })
    }

    proptest! {
        #[test]
        fn file_round_trip_is_identity(c in any_coloring()) {
            let text = to_string(&c);
            prop_assert_eq!(read_coloring(text.as_bytes()).unwrap(), c);
        }
    }
}
