//! Newick reading and writing.
//!
//! Grammar: `tree := subtree [";"]`, `subtree := leaf | "(" subtree ("," subtree)+ ")" [":" number]`
//! with positive integer leaf labels. Several `;`-terminated trees form one
//! forest, and a bare label is an isolated leaf. Numbers are edge lengths by
//! default; `inf` is an infinite length (weight 1).

use super::graph::Forest;
use super::params::{len, Param};
use super::split::LeafSet;
use super::wald::Wald;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct NewickOptions {
    pub param: Param,
    /// Expected number of leaves; inferred from the label count when `None`.
    pub n_leaves: Option<usize>,
}

enum Node {
    Leaf {
        label: usize,
        offset: usize,
        weight: Option<f64>,
    },
    Inner {
        children: Vec<Node>,
        weight: Option<f64>,
    },
}

impl Node {
    fn weight(&self) -> Option<f64> {
        match self {
            Node::Leaf { weight, .. } | Node::Inner { weight, .. } => *weight,
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    param: Param,
}

impl Parser<'_> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Newick {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn token(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c.is_ascii_whitespace() || b"(),:;".contains(&c) {
                break;
            }
            self.pos += 1;
        }
        (
            start,
            std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("").to_string(),
        )
    }

    fn subtree(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut children = vec![self.subtree()?];
                loop {
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.subtree()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) => return self.err(self.pos, format!("expected ',' or ')', found '{}'", c as char)),
                        None => return self.err(self.pos, "unbalanced parenthesis"),
                    }
                }
                if children.len() < 2 {
                    return self.err(self.pos - 1, "a parenthesised group needs at least two members");
                }
                let weight = self.annotation()?;
                Ok(Node::Inner { children, weight })
            }
            None => self.err(self.pos, "unexpected end of input"),
            Some(_) => {
                let (offset, tok) = self.token();
                if tok.is_empty() {
                    return self.err(
                        offset,
                        format!("expected a leaf label, found '{}'", self.s[offset] as char),
                    );
                }
                let label: usize = match tok.parse() {
                    Ok(l) if l > 0 => l,
                    _ => return self.err(offset, format!("leaf label '{tok}' is not a positive integer")),
                };
                let weight = self.annotation()?;
                Ok(Node::Leaf { label, offset, weight })
            }
        }
    }

    fn annotation(&mut self) -> Result<Option<f64>> {
        if self.peek() != Some(b':') {
            return Ok(None);
        }
        self.pos += 1;
        let (offset, tok) = self.token();
        let value = if tok.eq_ignore_ascii_case("inf") || tok.eq_ignore_ascii_case("infinity") {
            f64::INFINITY
        } else {
            match tok.parse::<f64>() {
                Ok(v) if !v.is_nan() => v,
                _ => return self.err(offset, format!("'{tok}' is not a number")),
            }
        };
        if value < 0.0 {
            return self.err(offset, format!("negative length {tok}"));
        }
        match self.param {
            Param::Length => Ok(Some(-(-value).exp_m1())),
            Param::Lambda if value <= 1.0 => Ok(Some(value)),
            Param::Lambda => self.err(offset, format!("weight {tok} exceeds 1")),
        }
    }
}

/// Parses a forest with lengths on the branches.
pub fn parse_newick(text: &str) -> Result<Forest> {
    parse_newick_with(text, NewickOptions::default())
}

pub fn parse_newick_with(text: &str, opts: NewickOptions) -> Result<Forest> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        param: opts.param,
    };
    let mut trees = Vec::new();
    while p.peek().is_some() {
        trees.push(p.subtree()?);
        match p.peek() {
            Some(b';') => p.pos += 1,
            None => {}
            Some(c) => return p.err(p.pos, format!("unexpected '{}'", c as char)),
        }
    }
    if trees.is_empty() {
        return p.err(0, "empty input");
    }

    let mut labels = Vec::new();
    fn collect(node: &Node, out: &mut Vec<(usize, usize)>) {
        match node {
            Node::Leaf { label, offset, .. } => out.push((*label, *offset)),
            Node::Inner { children, .. } => children.iter().for_each(|c| collect(c, out)),
        }
    }
    trees.iter().for_each(|t| collect(t, &mut labels));
    let n = opts.n_leaves.unwrap_or(labels.len());
    if n > super::split::MAX_LEAVES {
        return p.err(0, format!("{n} leaves exceeds the supported maximum"));
    }
    let mut seen = vec![false; n];
    for &(label, offset) in &labels {
        if label > n {
            return p.err(offset, format!("leaf label {label} outside 1..={n}"));
        }
        if seen[label - 1] {
            return p.err(offset, format!("duplicate leaf label {label}"));
        }
        seen[label - 1] = true;
    }

    fn build(node: &Node, f: &mut Forest) -> usize {
        match node {
            Node::Leaf { label, .. } => label - 1,
            Node::Inner { children, .. } => {
                let v = f.add_vertex();
                for c in children {
                    let cv = build(c, f);
                    f.add_edge(cv, v, c.weight().unwrap_or(0.0));
                }
                v
            }
        }
    }
    let mut f = Forest::new(n);
    for t in &trees {
        build(t, &mut f);
    }
    Ok(f)
}

/// Writes a wald as `;`-terminated trees, one per component in order of the
/// lowest leaf. Trees with three or more leaves are rooted at the vertex next
/// to their lowest leaf; a two-leaf component is written as `(a:0,b:ℓ)`.
pub fn to_newick(w: &Wald, param: Param) -> String {
    let fmt = |lambda: f64| -> String {
        match param {
            Param::Lambda => format!("{lambda}"),
            Param::Length => {
                let l = len(lambda);
                if l.is_infinite() {
                    "inf".into()
                } else {
                    format!("{l}")
                }
            }
        }
    };
    let splits = w.splits();
    let weight_of = |clade: LeafSet| -> f64 {
        let i = splits.iter().position(|s| s.inner() == clade).unwrap();
        w.lambda()[i]
    };
    let mut out = String::new();
    for c in w.components() {
        let r = c.trailing_zeros() as usize;
        match c.count_ones() {
            1 => out.push_str(&format!("{};", r + 1)),
            2 => {
                let other = (c & !(1 << r)).trailing_zeros() as usize;
                out.push_str(&format!(
                    "({}:0,{}:{});",
                    r + 1,
                    other + 1,
                    fmt(w.lambda()[w.splits().iter().position(|s| s.component() == c).unwrap()])
                ));
            }
            _ => {
                let clades: Vec<LeafSet> = splits
                    .iter()
                    .filter(|s| s.component() == c)
                    .map(|s| s.inner())
                    .collect();
                let children = |cl: LeafSet| -> Vec<LeafSet> {
                    let inside: Vec<LeafSet> = clades.iter().copied().filter(|&d| d != cl && d & cl == d).collect();
                    let mut maximal: Vec<LeafSet> = inside
                        .iter()
                        .copied()
                        .filter(|&d| !inside.iter().any(|&e| e != d && e & d == d))
                        .collect();
                    maximal.sort_by_key(|d| d.trailing_zeros());
                    maximal
                };
                fn rec(
                    cl: LeafSet,
                    out: &mut String,
                    children: &dyn Fn(LeafSet) -> Vec<LeafSet>,
                    label: &dyn Fn(LeafSet) -> String,
                ) {
                    if cl.count_ones() == 1 {
                        out.push_str(&format!("{}:{}", cl.trailing_zeros() + 1, label(cl)));
                        return;
                    }
                    out.push('(');
                    for (i, d) in children(cl).into_iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        rec(d, out, children, label);
                    }
                    out.push_str(&format!("):{}", label(cl)));
                }
                let label = |cl: LeafSet| fmt(weight_of(cl));
                let top = c & !(1 << r);
                out.push_str(&format!("({}:{}", r + 1, label(top)));
                for d in children(top) {
                    out.push(',');
                    rec(d, &mut out, &children, &label);
                }
                out.push_str(");");
            }
        }
    }
    out
}
