use std::fmt;
use std::str::FromStr;

use super::multigraph::TwoTerminal;
use super::GraphError;

/// Series–parallel expression over a base gadget `e`. Composite nodes
/// always hold at least two children and never a child of their own kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SPExpr {
    Leaf,
    LeafTransposed,
    Series(Vec<SPExpr>),
    Parallel(Vec<SPExpr>),
}

impl SPExpr {
    pub fn leaf() -> Self {
        SPExpr::Leaf
    }

    /// Series composition, flattening nested series children.
    pub fn series(parts: Vec<SPExpr>) -> Self {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                SPExpr::Series(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        assert!(!out.is_empty(), "empty series");
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            SPExpr::Series(out)
        }
    }

    /// Parallel composition, flattening nested parallel children.
    pub fn parallel(parts: Vec<SPExpr>) -> Self {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                SPExpr::Parallel(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        assert!(!out.is_empty(), "empty parallel");
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            SPExpr::Parallel(out)
        }
    }

    /// `n` copies of `x` in series.
    pub fn series_pow(x: &SPExpr, n: usize) -> Self {
        Self::series(vec![x.clone(); n])
    }

    /// `n` copies of `x` in parallel.
    pub fn parallel_pow(x: &SPExpr, n: usize) -> Self {
        Self::parallel(vec![x.clone(); n])
    }

    /// Terminal swap, pushed down to the leaves.
    pub fn transpose(&self) -> Self {
        match self {
            SPExpr::Leaf => SPExpr::LeafTransposed,
            SPExpr::LeafTransposed => SPExpr::Leaf,
            SPExpr::Series(cs) => SPExpr::Series(cs.iter().rev().map(|c| c.transpose()).collect()),
            SPExpr::Parallel(cs) => SPExpr::Parallel(cs.iter().map(|c| c.transpose()).collect()),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            SPExpr::Leaf | SPExpr::LeafTransposed => 1,
            SPExpr::Series(cs) | SPExpr::Parallel(cs) => cs.iter().map(|c| c.leaves()).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SPExpr::Leaf | SPExpr::LeafTransposed => 0,
            SPExpr::Series(cs) | SPExpr::Parallel(cs) => 1 + cs.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    /// Explicit graph generated over `base`.
    pub fn realize(&self, base: &TwoTerminal) -> TwoTerminal {
        match self {
            SPExpr::Leaf => base.clone(),
            SPExpr::LeafTransposed => base.transpose(),
            SPExpr::Series(cs) => TwoTerminal::series(&cs.iter().map(|c| c.realize(base)).collect::<Vec<_>>()),
            SPExpr::Parallel(cs) => TwoTerminal::parallel(&cs.iter().map(|c| c.realize(base)).collect::<Vec<_>>()),
        }
    }

    /// Expected vertex count of `realize` for a base with `n0` vertices.
    pub fn vertex_count(&self, n0: usize) -> usize {
        match self {
            SPExpr::Leaf | SPExpr::LeafTransposed => n0,
            SPExpr::Series(cs) => cs.iter().map(|c| c.vertex_count(n0)).sum::<usize>() - (cs.len() - 1),
            SPExpr::Parallel(cs) => cs.iter().map(|c| c.vertex_count(n0)).sum::<usize>() - 2 * (cs.len() - 1),
        }
    }
}

impl fmt::Display for SPExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SPExpr::Leaf => write!(f, "e"),
            SPExpr::LeafTransposed => write!(f, "e^T"),
            SPExpr::Parallel(cs) => {
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{}", c)?;
                }
                Ok(())
            }
            SPExpr::Series(cs) => {
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    match c {
                        SPExpr::Parallel(_) => write!(f, "({})", c)?,
                        _ => write!(f, "{}", c)?,
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> GraphError {
        GraphError::Syntax { offset: self.pos, msg: msg.to_string() }
    }

    fn expr(&mut self) -> Result<SPExpr, GraphError> {
        let mut parts = vec![self.term()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            parts.push(self.term()?);
        }
        Ok(SPExpr::parallel(parts))
    }

    fn term(&mut self) -> Result<SPExpr, GraphError> {
        let mut parts = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            parts.push(self.factor()?);
        }
        Ok(SPExpr::series(parts))
    }

    fn factor(&mut self) -> Result<SPExpr, GraphError> {
        let mut x = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() != Some(b'T') {
                return Err(self.err("expected 'T' after '^'"));
            }
            self.pos += 1;
            x = x.transpose();
        }
        Ok(x)
    }

    fn atom(&mut self) -> Result<SPExpr, GraphError> {
        match self.peek() {
            Some(b'e') => {
                self.pos += 1;
                Ok(SPExpr::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(x)
            }
            Some(_) => Err(self.err("expected 'e' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses the series–parallel language: atom `e`, postfix `^T`, series
/// `*` (binds tighter) and parallel `|`, with parentheses.
pub fn parse_sp(text: &str) -> Result<SPExpr, GraphError> {
    if text.trim().is_empty() {
        return Err(GraphError::EmptyExpression);
    }
    let mut p = Parser { src: text, pos: 0 };
    let x = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(x)
}

impl FromStr for SPExpr {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, GraphError> {
        parse_sp(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SPExpr::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_sp("e|e").unwrap(), Parallel(vec![Leaf, Leaf]));
        assert_eq!(parse_sp("(e*e)|e").unwrap(), Parallel(vec![Series(vec![Leaf, Leaf]), Leaf]));
        assert_eq!(parse_sp("e^T*e").unwrap(), Series(vec![LeafTransposed, Leaf]));
        assert_eq!(parse_sp("(e*e^T)^T").unwrap(), Series(vec![Leaf, LeafTransposed]));
        assert_eq!(parse_sp("e^T^T").unwrap(), Leaf);
        assert_eq!(parse_sp(" ( e | e ) * e ").unwrap().to_string(), "(e|e)*e");
        assert_eq!(parse_sp("(e*e)|e").unwrap().to_string(), "e*e|e");
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_sp(""), Err(GraphError::EmptyExpression)));
        assert!(matches!(parse_sp("e|"), Err(GraphError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_sp("e*x"), Err(GraphError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_sp("(e|e"), Err(GraphError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_sp("e^S"), Err(GraphError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_sp("e e"), Err(GraphError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn realize_counts() {
        let k2 = TwoTerminal::k2();
        assert_eq!(parse_sp("e").unwrap().realize(&k2), k2);
        let tri = parse_sp("(e*e)|e").unwrap().realize(&k2);
        assert_eq!((tri.n(), tri.edge_count()), (3, 3));
        assert_eq!(tri.graph.adjacency()[tri.s][tri.t], 1);
        let theta = parse_sp("e|e|e").unwrap().realize(&k2);
        assert_eq!((theta.n(), theta.edge_count()), (2, 3));
    }
}
