//! Line-oriented network file reader.
//!
//! ```text
//! # comment
//! state V1
//! driver U1
//! edge U1 V1 drive
//! edge V1 V2            # kind inferred: drive from a driver, else intrinsic
//! ```
//!
//! Vertices must be declared before an edge names them.

use thiserror::Error;

use super::{EdgeKind, GraphBuilder, GraphError, QDigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown directive \"{0}\"")]
    UnknownDirective(String),
    #[error("unknown edge kind \"{0}\"")]
    UnknownEdgeKind(String),
    #[error("malformed line: {0}")]
    Malformed(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn parse_network(text: &str) -> Result<QDigraph, ParseError> {
    let mut b = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |kind: ParseErrorKind| ParseError { line, kind };
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&directive, args)) = tokens.split_first() else {
            continue;
        };
        match directive {
            "state" | "driver" => {
                let [label] = args else {
                    return Err(err(ParseErrorKind::Malformed("expected exactly one label")));
                };
                let res = if directive == "state" {
                    b.add_state(label)
                } else {
                    b.add_driver(label)
                };
                res.map_err(|e| err(e.into()))?;
            }
            "edge" => {
                let (src, dst, kind) = match args {
                    [s, d] => (*s, *d, None),
                    [s, d, k] => (*s, *d, Some(*k)),
                    _ => {
                        return Err(err(ParseErrorKind::Malformed(
                            "expected `edge <src> <dst> [kind]`",
                        )))
                    }
                };
                let resolve = |l: &str| {
                    b.id(l)
                        .ok_or_else(|| err(GraphError::UnknownVertex(l.to_string()).into()))
                };
                let s = resolve(src)?;
                let d = resolve(dst)?;
                let res = match kind {
                    None => b.add_edge(s, d),
                    Some(k) => {
                        let k = EdgeKind::parse(k)
                            .ok_or_else(|| err(ParseErrorKind::UnknownEdgeKind(k.to_string())))?;
                        b.add_edge_kind(s, d, k)
                    }
                };
                res.map_err(|e| err(e.into()))?;
            }
            other => return Err(err(ParseErrorKind::UnknownDirective(other.to_string()))),
        }
    }
    Ok(b.build())
}
