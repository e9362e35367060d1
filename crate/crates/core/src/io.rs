//! Text formats for graphs: a compact edge list and a JSON document.
//!
//! Edge list grammar (whitespace is insignificant):
//!
//! ```text
//! document := [ header ';' ] [ edge { ',' edge } ]
//! header   := COUNT | '[' [ LABEL { ',' LABEL } ] ']'
//! edge     := LABEL '-' LABEL
//! ```
//!
//! A numeric header `n` declares labels `1..=n`; a bracketed header lists the
//! labels explicitly. Without a header the vertex set is the set of edge
//! endpoints. `"4; 1-2,2-3,3-4,4-1"` is the four-ring.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, MAX_LABELS};

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Edgelist,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "edgelist" | "edges" => Ok(Format::Edgelist),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("at byte {position}: {source}")]
    Invalid { position: usize, source: GraphError },
    #[error("malformed JSON graph document: {0}")]
    Json(String),
    #[error("invalid graph document: {0}")]
    Document(GraphError),
}

/// Serialized form of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default = "default_version")]
    pub version: u32,
    /// Vertex labels.
    pub v: Vec<u64>,
    /// Edges as label pairs.
    #[serde(default)]
    pub e: Vec<[u64; 2]>,
}

fn default_version() -> u32 {
    DOCUMENT_VERSION
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDocument {
            version: DOCUMENT_VERSION,
            v: g.vertices().map(u64::from).collect(),
            e: g.edges().map(|(a, b)| [a as u64, b as u64]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        let mut g = Graph::empty();
        for &v in &self.v {
            g.add_vertex(label(v)?)?;
        }
        for &[a, b] in &self.e {
            g.add_edge(label(a)?, label(b)?)?;
        }
        Ok(g)
    }
}

impl From<&Graph> for GraphDocument {
    fn from(g: &Graph) -> Self {
        GraphDocument::from_graph(g)
    }
}

fn label(x: u64) -> Result<Vertex, GraphError> {
    if x < MAX_LABELS as u64 {
        Ok(x as Vertex)
    } else {
        Err(GraphError::LabelOutOfRange(x))
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::Json => parse_json(text),
        Format::Edgelist => parse_edgelist(text),
    }
}

/// JSON if the text starts with `{`, edge list otherwise.
pub fn parse_graph_auto(text: &str) -> Result<Graph, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edgelist(text)
    }
}

pub fn parse_json(text: &str) -> Result<Graph, ParseError> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    doc.to_graph().map_err(ParseError::Document)
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphDocument::from_graph(g)).expect("graph documents always serialize")
}

/// Canonical edge-list text: a count header when the labels are exactly
/// `1..=n`, a bracketed label list otherwise; edges in lexicographic order.
pub fn to_edgelist(g: &Graph) -> String {
    let n = g.len() as u64;
    let contiguous = n > 0 && g.vertex_mask() == ((1u64 << n) - 1) << 1 && n < MAX_LABELS as u64;
    let header = if contiguous || g.is_empty() {
        n.to_string()
    } else {
        let labels: Vec<String> = g.vertices().map(|v| v.to_string()).collect();
        format!("[{}]", labels.join(","))
    };
    let edges: Vec<String> = g.edges().map(|(a, b)| format!("{a}-{b}")).collect();
    if edges.is_empty() {
        format!("{header};")
    } else {
        format!("{header}; {}", edges.join(","))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn error(&self, message: String) -> ParseError {
        let found = match self.bytes.get(self.pos) {
            Some(&b) => format!(", found `{}`", b as char),
            None => ", found end of input".to_string(),
        };
        ParseError::Syntax { position: self.pos, message: message + &found }
    }

    fn number(&mut self) -> Result<(usize, u64), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos).filter(|b| b.is_ascii_digit()) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(b - b'0')))
                .ok_or_else(|| ParseError::Syntax { position: start, message: "number too large".into() })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a number".into()));
        }
        Ok((start, value))
    }

    fn label(&mut self) -> Result<(usize, Vertex), ParseError> {
        let (at, x) = self.number()?;
        label(x).map(|v| (at, v)).map_err(|source| ParseError::Invalid { position: at, source })
    }
}

pub fn parse_edgelist(text: &str) -> Result<Graph, ParseError> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    let has_header = text.contains(';');
    let mut g = Graph::empty();
    let mut explicit = false;

    if has_header {
        explicit = true;
        if cur.eat(b'[') {
            if !cur.eat(b']') {
                loop {
                    let (at, v) = cur.label()?;
                    g.add_vertex(v).map_err(|source| ParseError::Invalid { position: at, source })?;
                    if cur.eat(b']') {
                        break;
                    }
                    cur.expect(b',')?;
                }
            }
        } else {
            let (at, n) = cur.number()?;
            if n >= MAX_LABELS as u64 {
                return Err(ParseError::Invalid { position: at, source: GraphError::LabelOutOfRange(n) });
            }
            g = Graph::from_mask(if n == 0 { 0 } else { ((1u64 << n) - 1) << 1 });
        }
        cur.expect(b';')?;
    }

    if cur.peek().is_some() {
        loop {
            let (at, u) = cur.label()?;
            cur.expect(b'-')?;
            let (at_v, v) = cur.label()?;
            if !explicit {
                for (p, x) in [(at, u), (at_v, v)] {
                    if !g.contains(x) {
                        g.add_vertex(x).map_err(|source| ParseError::Invalid { position: p, source })?;
                    }
                }
            }
            g.add_edge(u, v).map_err(|source| ParseError::Invalid { position: at, source })?;
            if cur.peek().is_none() {
                break;
            }
            cur.expect(b',')?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgelist_examples() {
        assert_eq!(parse_edgelist("4; 1-2,2-3,3-4,4-1").unwrap(), Graph::ring(4).unwrap());
        assert_eq!(parse_edgelist("[2,3,5]; 2-5").unwrap(), Graph::from_edges([2, 3, 5], [(2, 5)]).unwrap());
        assert_eq!(parse_edgelist("0;").unwrap(), Graph::empty());
        assert_eq!(parse_edgelist("3;").unwrap(), Graph::with_vertices([1, 2, 3]).unwrap());
        assert_eq!(parse_edgelist("1-2, 2-3").unwrap(), Graph::line(3).unwrap());
        assert_eq!(parse_edgelist("").unwrap(), Graph::empty());
    }

    #[test]
    fn edgelist_errors() {
        assert_eq!(
            parse_edgelist("1-1"),
            Err(ParseError::Invalid { position: 0, source: GraphError::SelfLoop(1) })
        );
        assert_eq!(
            parse_edgelist("3; 1-2,2-1"),
            Err(ParseError::Invalid { position: 7, source: GraphError::DuplicateEdge(1, 2) })
        );
        assert_eq!(
            parse_edgelist("1-64"),
            Err(ParseError::Invalid { position: 2, source: GraphError::LabelOutOfRange(64) })
        );
        assert_eq!(
            parse_edgelist("3; 1-4"),
            Err(ParseError::Invalid { position: 3, source: GraphError::VertexAbsent(4) })
        );
        assert!(matches!(parse_edgelist("3; 1-2 2-3"), Err(ParseError::Syntax { position: 7, .. })));
        assert!(matches!(parse_edgelist("3; 1+2"), Err(ParseError::Syntax { position: 4, .. })));
        assert!(matches!(parse_edgelist("64;"), Err(ParseError::Invalid { .. })));
    }

    #[test]
    fn json_examples() {
        assert_eq!(parse_json(r#"{"v":[1,2],"e":[[1,2]]}"#).unwrap(), Graph::complete(2).unwrap());
        assert_eq!(parse_json(r#"{"v":[1,1],"e":[]}"#), Err(ParseError::Document(GraphError::DuplicateVertex(1))));
        assert_eq!(parse_json(r#"{"v":[1],"e":[[1,1]]}"#), Err(ParseError::Document(GraphError::SelfLoop(1))));
        assert_eq!(
            parse_json(r#"{"v":[1,2],"e":[[1,2],[2,1]]}"#),
            Err(ParseError::Document(GraphError::DuplicateEdge(1, 2)))
        );
        assert_eq!(parse_json(r#"{"v":[99]}"#), Err(ParseError::Document(GraphError::LabelOutOfRange(99))));
        assert!(matches!(parse_json(r#"{"v":[1,"#), Err(ParseError::Json(_))));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(to_edgelist(&Graph::ring(4).unwrap()), "4; 1-2,1-4,2-3,3-4");
        let r5 = Graph::ring(6).unwrap().measure(1, crate::graph::PauliBasis::Y).unwrap();
        assert_eq!(to_edgelist(&r5), "[2,3,4,5,6]; 2-3,2-6,3-4,4-5,5-6");
        assert_eq!(to_edgelist(&Graph::empty()), "0;");
        assert_eq!(to_json(&Graph::complete(2).unwrap()), r#"{"version":1,"v":[1,2],"e":[[1,2]]}"#);
    }

    #[test]
    fn auto_detection() {
        assert_eq!(parse_graph_auto(" {\"v\":[1]}").unwrap(), Graph::with_vertices([1]).unwrap());
        assert_eq!(parse_graph_auto("2; 1-2").unwrap(), Graph::complete(2).unwrap());
    }
}
