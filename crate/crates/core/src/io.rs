//! Text edge lists: one edge per line, two whitespace-separated
//! non-negative integers. Lines starting with `#` or `%` and blank lines
//! are skipped; extra columns are ignored. Gzip input is detected from its
//! magic bytes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};
use crate::graph::RawEdgeList;

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<RawEdgeList> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            content: String::new(),
            reason: if e.kind() == std::io::ErrorKind::InvalidData {
                "invalid UTF-8"
            } else {
                "read failure"
            },
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let bad = |reason| Error::Parse {
            line: line_no,
            content: line.clone(),
            reason,
        };
        let mut fields = trimmed.split_whitespace();
        let mut label = || -> Result<u64> {
            let tok = fields
                .next()
                .ok_or_else(|| bad("expected two vertex labels"))?;
            if tok.starts_with('-') {
                return Err(bad("negative vertex label"));
            }
            tok.parse::<u64>()
                .map_err(|_| bad("vertex label is not a non-negative integer"))
        };
        let u = label()?;
        let v = label()?;
        edges.push((u, v));
    }
    Ok(RawEdgeList { edges })
}

/// Reads a plain or gzip-compressed edge list.
pub fn read_edge_list(path: impl AsRef<Path>) -> Result<RawEdgeList> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut magic = [0u8; 2];
    let got = file.read(&mut magic).map_err(|e| Error::io(path, e))?;
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    if got == 2 && magic == GZIP_MAGIC {
        parse_edge_list(BufReader::new(MultiGzDecoder::new(file)))
    } else {
        parse_edge_list(BufReader::new(file))
    }
}

pub fn write_edge_list<W: Write>(out: W, raw: &RawEdgeList) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    for &(u, v) in &raw.edges {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn write_edge_list_file(path: impl AsRef<Path>, raw: &RawEdgeList) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(file, raw).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use flate2::write::GzEncoder;
    use flate2::Compression;

    #[test]
    fn parses_comments_and_extra_columns() {
        let text = "# header\n% mm\n\n0 1\n1\t2 3.5\n  4   5  \n";
        let raw = parse_edge_list(text.as_bytes()).unwrap();
        assert_eq!(raw.edges, vec![(0, 1), (1, 2), (4, 5)]);
    }

    #[test]
    fn reports_offending_line() {
        let err = parse_edge_list("0 1\n2 x\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, content, .. } => {
                assert_eq!(line, 2);
                assert_eq!(content, "2 x");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_edge_list("3 -1\n".as_bytes()),
            Err(Error::Parse {
                line: 1,
                reason: "negative vertex label",
                ..
            })
        ));
        assert!(parse_edge_list("7\n".as_bytes()).is_err());
    }

    #[test]
    fn reads_gzip_transparently() {
        let dir = tempfile::tempdir().unwrap();
        let plain = dir.path().join("g.txt");
        let gz = dir.path().join("g.txt.gz");
        let raw = RawEdgeList::new(vec![(3, 4), (4, 5), (5, 3)]);
        write_edge_list_file(&plain, &raw).unwrap();
        let mut enc = GzEncoder::new(File::create(&gz).unwrap(), Compression::default());
        enc.write_all(&std::fs::read(&plain).unwrap()).unwrap();
        enc.finish().unwrap();
        assert_eq!(read_edge_list(&plain).unwrap(), raw);
        assert_eq!(read_edge_list(&gz).unwrap(), raw);
    }
}
