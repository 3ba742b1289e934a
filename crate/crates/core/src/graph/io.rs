use serde::{Deserialize, Serialize};

use super::multigraph::{Multigraph, TwoTerminal};
use super::GraphError;

/// On-disk graph: `{"n": 3, "s": 0, "t": 2, "edges": [[0,1],[1,2]]}`.
/// Terminals are optional for plain multigraphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn multigraph(&self) -> Result<Multigraph, GraphError> {
        Multigraph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])).collect())
    }

    pub fn two_terminal(&self) -> Result<TwoTerminal, GraphError> {
        let g = self.multigraph()?;
        match (self.s, self.t) {
            (Some(s), Some(t)) => TwoTerminal::new(g, s, t),
            _ => Err(GraphError::MissingTerminals),
        }
    }

    pub fn from_multigraph(g: &Multigraph) -> Self {
        GraphFile { n: g.n, s: None, t: None, edges: g.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }

    pub fn from_two_terminal(g: &TwoTerminal) -> Self {
        GraphFile { s: Some(g.s), t: Some(g.t), ..Self::from_multigraph(&g.graph) }
    }
}

pub fn read_json(text: &str) -> Result<GraphFile, GraphError> {
    serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))
}

pub fn to_json(g: &GraphFile) -> String {
    serde_json::to_string(g).expect("graph serialization")
}

/// Parses a whitespace-separated square matrix of edge multiplicities, one
/// row per line. Diagonal entries count loops. The matrix must be
/// symmetric.
pub fn parse_adjacency(text: &str) -> Result<Multigraph, GraphError> {
    let rows: Vec<Vec<usize>> = text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|w| !w.is_empty())
                .map(|w| w.parse::<usize>().map_err(|_| GraphError::Format(format!("row {}: bad entry {:?}", i, w))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    let mut edges = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(GraphError::Format(format!("row {} has {} entries, expected {}", i, r.len(), n)));
        }
        for j in 0..n {
            if rows[j].len() == n && rows[j][i] != r[j] {
                return Err(GraphError::Format(format!("matrix not symmetric at ({}, {})", i, j)));
            }
            if j >= i {
                edges.extend(std::iter::repeat_n((i, j), r[j]));
            }
        }
    }
    Multigraph::new(n, edges)
}

/// Inverse of [`parse_adjacency`].
pub fn format_adjacency(g: &Multigraph) -> String {
    g.adjacency()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let g = TwoTerminal::path(2);
        let f = GraphFile::from_two_terminal(&g);
        let text = to_json(&f);
        assert_eq!(text, r#"{"n":3,"s":0,"t":2,"edges":[[0,1],[1,2]]}"#);
        assert_eq!(read_json(&text).unwrap().two_terminal().unwrap(), g);
        assert!(read_json(r#"{"n":2,"edges":[[0,5]]}"#).unwrap().multigraph().is_err());
    }

    #[test]
    fn adjacency_text() {
        let g = parse_adjacency("0 2 1\n2 0 0\n1 0 1\n").unwrap();
        assert_eq!(g.normalized().edges, vec![(0, 1), (0, 1), (0, 2), (2, 2)]);
        assert_eq!(parse_adjacency(&format_adjacency(&g)).unwrap().normalized(), g.normalized());
        assert!(parse_adjacency("0 1\n0 0").is_err());
    }
}
