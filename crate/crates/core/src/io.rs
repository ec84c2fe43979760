//! The `stl-words v1` text format.
//!
//! ```text
//! # simplices=7 dim=2 vertices=3
//! 1
//! 2
//! 3
//! 1 2
//! 1 3
//! 2 3
//! 1 2 3
//! ```
//!
//! One simplex per line, labels separated by single spaces, lines in
//! [`SimplexTree::enumerate`] order.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::tree::SimplexTree;

pub fn write_words<W: Write>(tree: &SimplexTree, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# simplices={} dim={} vertices={}",
        tree.num_simplices(),
        tree.dimension(),
        tree.num_vertices()
    )?;
    let mut line = String::new();
    for sigma in tree.enumerate() {
        line.clear();
        for (i, l) in sigma.labels().iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&l.get().to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn to_words_string(tree: &SimplexTree) -> String {
    let mut buf = Vec::new();
    write_words(tree, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

struct Header {
    simplices: usize,
    dim: isize,
    vertices: usize,
}

fn parse_header(line: &str) -> Option<Header> {
    let rest = line.strip_prefix("# ")?;
    let mut fields = rest.split(' ');
    let mut take = |key: &str| fields.next()?.strip_prefix(key)?.strip_prefix('=');
    let simplices = take("simplices")?.parse().ok()?;
    let dim = take("dim")?.parse().ok()?;
    let vertices = take("vertices")?.parse().ok()?;
    if fields.next().is_some() {
        return None;
    }
    Some(Header {
        simplices,
        dim,
        vertices,
    })
}

/// Reads a complex. Every face must appear before its cofaces.
pub fn read_words<R: BufRead>(input: R) -> Result<SimplexTree> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = input.lines();
    let first = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input".into()))??;
    let header =
        parse_header(&first).ok_or_else(|| parse_err(1, format!("bad header {first:?}")))?;

    let mut tree = SimplexTree::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        let labels = line
            .split(' ')
            .map(|tok| tok.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(lineno, format!("{e}: {line:?}")))?;
        let sigma = Simplex::new(labels).map_err(|e| parse_err(lineno, e.to_string()))?;
        tree.insert_simplex(&sigma)
            .map_err(|e| parse_err(lineno, e.to_string()))?;
    }
    if tree.num_simplices() != header.simplices
        || tree.dimension() != header.dim
        || tree.num_vertices() != header.vertices
    {
        return Err(parse_err(
            1,
            format!(
                "header announces simplices={} dim={} vertices={}, body has {} {} {}",
                header.simplices,
                header.dim,
                header.vertices,
                tree.num_simplices(),
                tree.dimension(),
                tree.num_vertices()
            ),
        ));
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    #[test]
    fn triangle_text() {
        let mut t = SimplexTree::new();
        t.insert_full_simplex(&simplex![1, 2, 3]).unwrap();
        let text = to_words_string(&t);
        assert_eq!(
            text,
            "# simplices=7 dim=2 vertices=3\n1\n2\n3\n1 2\n1 3\n2 3\n1 2 3\n"
        );
        let back = read_words(text.as_bytes()).unwrap();
        assert_eq!(to_words_string(&back), text);
    }

    #[test]
    fn empty_complex() {
        let text = to_words_string(&SimplexTree::new());
        assert_eq!(text, "# simplices=0 dim=-1 vertices=0\n");
        assert!(read_words(text.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_words("".as_bytes()).is_err());
        assert!(read_words("simplices=1\n1\n".as_bytes()).is_err());
        let missing_face = "# simplices=2 dim=1 vertices=1\n1\n1 2\n";
        assert!(matches!(
            read_words(missing_face.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        let wrong_count = "# simplices=2 dim=0 vertices=1\n1\n";
        assert!(read_words(wrong_count.as_bytes()).is_err());
        let unsorted = "# simplices=3 dim=1 vertices=2\n1\n2\n2 1\n";
        assert!(matches!(
            read_words(unsorted.as_bytes()),
            Err(Error::Parse { line: 4, .. })
        ));
    }
}
