//! Colored graphs and cliquewidth decompositions.
//!
//! A decomposition is a rooted tree whose leaves introduce single colored
//! vertices and whose inner nodes take disjoint unions, recolor a color
//! class, or join two color classes completely. Colors are 1-based; the
//! width of a decomposition is the largest color it mentions unless set
//! explicitly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::vertex_set::VertexSet;

pub type Color = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}, col {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: duplicate introduction of vertex `{vertex}`")]
    DuplicateIntro { line: usize, vertex: String },
    #[error("line {line}: duplicate node id `{node}`")]
    DuplicateNode { line: usize, node: String },
    #[error("line {line}: node `{node}` references undefined child `{child}`")]
    DanglingChild { line: usize, node: String, child: String },
    #[error("line {line}: multiple roots declared")]
    MultipleRoots { line: usize },
    #[error("no root directive")]
    MissingRoot,
    #[error("root `{0}` is not a defined node")]
    UnknownRoot(String),
    #[error("invalid decomposition: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("line {line}: unknown vertex `{vertex}`")]
    UnknownVertex { line: usize, vertex: String },
    #[error("line {line}: duplicate vertex `{vertex}`")]
    DuplicateVertex { line: usize, vertex: String },
    #[error("line {line}: duplicate edge {{{a}, {b}}}")]
    DuplicateEdge { line: usize, a: String, b: String },
    #[error("line {line}: self-loop on `{vertex}`")]
    SelfLoop { line: usize, vertex: String },
}

/// Index of a node inside a [`CwDecomposition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Intro { vertex: String, color: Color },
    Union(NodeId, NodeId),
    Recolor { child: NodeId, from: Color, to: Color },
    AddEdges { child: NodeId, a: Color, b: Color },
}

impl Node {
    pub fn children(&self) -> Vec<NodeId> {
        match self {
            Node::Intro { .. } => vec![],
            Node::Union(l, r) => vec![*l, *r],
            Node::Recolor { child, .. } | Node::AddEdges { child, .. } => vec![*child],
        }
    }

    fn colors(&self) -> Vec<Color> {
        match self {
            Node::Intro { color, .. } => vec![*color],
            Node::Union(..) => vec![],
            Node::Recolor { from, to, .. } => vec![*from, *to],
            Node::AddEdges { a, b, .. } => vec![*a, *b],
        }
    }
}

/// A cliquewidth decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwDecomposition {
    labels: Vec<String>,
    nodes: Vec<Node>,
    root: NodeId,
    width: Color,
}

impl CwDecomposition {
    /// Assembles a decomposition without checking it; see [`Self::validate`].
    /// The width is the largest color mentioned.
    pub fn from_parts(labels: Vec<String>, nodes: Vec<Node>, root: NodeId) -> Self {
        assert_eq!(labels.len(), nodes.len());
        let width = nodes.iter().flat_map(Node::colors).max().unwrap_or(0);
        Self {
            labels,
            nodes,
            root,
            width,
        }
    }

    pub fn with_width(mut self, width: Color) -> Self {
        self.width = width;
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn width(&self) -> Color {
        self.width
    }

    pub fn node(&self, t: NodeId) -> &Node {
        &self.nodes[t.0]
    }

    pub fn label(&self, t: NodeId) -> &str {
        &self.labels[t.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn children(&self, t: NodeId) -> Vec<NodeId> {
        self.nodes[t.0].children()
    }

    /// Number of introduced vertices, i.e. `|V(G)|` of the root graph.
    pub fn vertex_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Intro { .. }))
            .count()
    }

    /// Vertex names in lexicographic order. Index `i` of this list is the
    /// vertex index used by [`ColoredGraph`] and [`VertexSet`].
    pub fn vertex_names(&self) -> Vec<String> {
        let names: BTreeSet<&str> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Intro { vertex, .. } => Some(vertex.as_str()),
                _ => None,
            })
            .collect();
        names.into_iter().map(str::to_owned).collect()
    }

    /// For every node, the index of the vertex it introduces (leaves only).
    pub fn leaf_vertices(&self) -> Vec<Option<usize>> {
        let names = self.vertex_names();
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        self.nodes
            .iter()
            .map(|n| match n {
                Node::Intro { vertex, .. } => Some(index[vertex.as_str()]),
                _ => None,
            })
            .collect()
    }

    /// Nodes in post-order (children before parents, left child first).
    /// Only nodes reachable from the root are listed.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
                continue;
            }
            if std::mem::replace(&mut seen[t.0], true) {
                continue;
            }
            stack.push((t, true));
            for c in self.children(t).into_iter().rev() {
                if c.0 < self.nodes.len() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Lists every violated structural invariant; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.nodes.len();
        if self.root.0 >= n {
            out.push(format!("root index {} out of range", self.root.0));
            return out;
        }
        let mut parents = vec![0usize; n];
        for (i, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                if c.0 >= n {
                    out.push(format!(
                        "node {} references dangling child index {}",
                        self.labels[i], c.0
                    ));
                } else {
                    parents[c.0] += 1;
                }
            }
        }
        for (i, &p) in parents.iter().enumerate() {
            let label = &self.labels[i];
            if i == self.root.0 {
                if p > 0 {
                    out.push(format!("root {label} has a parent"));
                }
            } else if p == 0 {
                out.push(format!("node {label} has no parent (multiple roots)"));
            } else if p > 1 {
                out.push(format!("node {label} has multiple parents"));
            }
        }
        let reachable: BTreeSet<NodeId> = self.post_order().into_iter().collect();
        for (i, &p) in parents.iter().enumerate() {
            if p > 0 && !reachable.contains(&NodeId(i)) {
                out.push(format!("node {} is not reachable from the root", self.labels[i]));
            }
        }
        let mut introduced: BTreeMap<&str, usize> = BTreeMap::new();
        for node in &self.nodes {
            if let Node::Intro { vertex, .. } = node {
                *introduced.entry(vertex.as_str()).or_default() += 1;
            }
        }
        for (v, count) in introduced {
            if count > 1 {
                out.push(format!("vertex {v} introduced {count} times"));
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for c in node.colors() {
                if c == 0 || c > self.width {
                    out.push(format!(
                        "color out of range at node {}: {} (width {})",
                        self.labels[i], c, self.width
                    ));
                }
            }
            if let Node::AddEdges { a, b, .. } = node {
                if a == b {
                    out.push(format!("addedges with equal colors at node {}: {}", self.labels[i], a));
                }
            }
        }
        out
    }

    /// Builds the colored graph of the root.
    ///
    /// Panics if the decomposition is invalid, in particular if a union
    /// node joins graphs that share a vertex.
    pub fn evaluate(&self) -> ColoredGraph {
        let names = self.vertex_names();
        let leaf = self.leaf_vertices();
        let mut colors = vec![0; names.len()];
        let mut adj = vec![VertexSet::new(); names.len()];
        let mut members: Vec<Option<VertexSet>> = vec![None; self.nodes.len()];
        for t in self.post_order() {
            let set = match &self.nodes[t.0] {
                Node::Intro { color, .. } => {
                    let v = leaf[t.0].expect("intro node has a vertex");
                    colors[v] = *color;
                    VertexSet::singleton(v)
                }
                Node::Union(l, r) => {
                    let a = members[l.0].take().expect("child evaluated");
                    let b = members[r.0].take().expect("child evaluated");
                    assert!(a.is_disjoint(&b), "union of overlapping graphs at {}", self.label(t));
                    a.union(&b)
                }
                Node::Recolor { child, from, to } => {
                    let s = members[child.0].take().expect("child evaluated");
                    for v in s.iter() {
                        if colors[v] == *from {
                            colors[v] = *to;
                        }
                    }
                    s
                }
                Node::AddEdges { child, a, b } => {
                    let s = members[child.0].take().expect("child evaluated");
                    let xs: Vec<usize> = s.iter().filter(|&v| colors[v] == *a).collect();
                    let ys: Vec<usize> = s.iter().filter(|&v| colors[v] == *b).collect();
                    for &x in &xs {
                        for &y in &ys {
                            if x != y {
                                adj[x].insert(y);
                                adj[y].insert(x);
                            }
                        }
                    }
                    s
                }
            };
            members[t.0] = Some(set);
        }
        ColoredGraph { names, colors, adj }
    }

    /// Number of vertices of every color in `G_t`, per node. Entry `[t][c]`
    /// counts color `c` (index 0 unused).
    pub fn color_counts(&self) -> Vec<Vec<usize>> {
        let w = self.width as usize;
        let mut counts = vec![vec![0usize; w + 1]; self.nodes.len()];
        for t in self.post_order() {
            let row = match &self.nodes[t.0] {
                Node::Intro { color, .. } => {
                    let mut row = vec![0; w + 1];
                    row[*color as usize] = 1;
                    row
                }
                Node::Union(l, r) => counts[l.0]
                    .iter()
                    .zip(&counts[r.0])
                    .map(|(x, y)| x + y)
                    .collect(),
                Node::Recolor { child, from, to } => {
                    let mut row = counts[child.0].clone();
                    if from != to {
                        row[*to as usize] += row[*from as usize];
                        row[*from as usize] = 0;
                    }
                    row
                }
                Node::AddEdges { child, .. } => counts[child.0].clone(),
            };
            counts[t.0] = row;
        }
        counts
    }
}

impl fmt::Display for CwDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, node) in self.labels.iter().zip(&self.nodes) {
            match node {
                Node::Intro { vertex, color } => writeln!(f, "intro {label} {vertex} {color}")?,
                Node::Union(l, r) => {
                    writeln!(f, "union {label} {} {}", self.labels[l.0], self.labels[r.0])?
                }
                Node::Recolor { child, from, to } => {
                    writeln!(f, "recolor {label} {} {from} {to}", self.labels[child.0])?
                }
                Node::AddEdges { child, a, b } => {
                    writeln!(f, "addedges {label} {} {a} {b}", self.labels[child.0])?
                }
            }
        }
        writeln!(f, "root {}", self.labels[self.root.0])
    }
}

/// Incremental construction of decompositions with generated node labels.
#[derive(Default)]
pub struct DecompositionBuilder {
    labels: Vec<String>,
    nodes: Vec<Node>,
}

impl DecompositionBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.labels.push(format!("n{}", self.nodes.len()));
        NodeId(self.nodes.len() - 1)
    }

    pub fn intro(&mut self, vertex: impl Into<String>, color: Color) -> NodeId {
        self.push(Node::Intro {
            vertex: vertex.into(),
            color,
        })
    }

    pub fn union(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.push(Node::Union(l, r))
    }

    pub fn recolor(&mut self, child: NodeId, from: Color, to: Color) -> NodeId {
        self.push(Node::Recolor { child, from, to })
    }

    pub fn add_edges(&mut self, child: NodeId, a: Color, b: Color) -> NodeId {
        self.push(Node::AddEdges { child, a, b })
    }

    pub fn finish(self, root: NodeId) -> CwDecomposition {
        CwDecomposition::from_parts(self.labels, self.nodes, root)
    }
}

/// An undirected simple graph with one color per vertex.
///
/// Vertices are indexed in lexicographic order of their names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    names: Vec<String>,
    colors: Vec<Color>,
    adj: Vec<VertexSet>,
}

impl ColoredGraph {
    /// Builds a graph from names, per-vertex colors and edges over indices
    /// into `names`. Names are re-sorted.
    pub fn new(names: Vec<String>, colors: Vec<Color>, edges: &[(usize, usize)]) -> Self {
        assert_eq!(names.len(), colors.len());
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut pos = vec![0; names.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut adj = vec![VertexSet::new(); names.len()];
        for &(a, b) in edges {
            assert_ne!(a, b, "self-loop");
            adj[pos[a]].insert(pos[b]);
            adj[pos[b]].insert(pos[a]);
        }
        Self {
            names: order.iter().map(|&i| names[i].clone()).collect(),
            colors: order.iter().map(|&i| colors[i]).collect(),
            adj,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn width(&self) -> Color {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    /// Edges as index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.names.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&b| a < b).map(move |b| (a, b)))
            .collect()
    }

    /// Edges as name pairs, each pair and the list sorted.
    pub fn named_edges(&self) -> BTreeSet<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (self.names[a].clone(), self.names[b].clone());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        (0..self.names.len()).collect()
    }

    /// Vertex names of a set, in index order.
    pub fn set_names(&self, s: &VertexSet) -> Vec<&str> {
        s.iter().map(|v| self.names[v].as_str()).collect()
    }

    /// Parses a set of vertex names.
    pub fn set_from_names<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Option<VertexSet> {
        names.into_iter().map(|n| self.index_of(n)).collect()
    }

    /// Same vertex names and edges, ignoring colors.
    pub fn same_shape(&self, other: &ColoredGraph) -> bool {
        self.names == other.names && self.adj == other.adj
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_color(line: usize, (col, tok): (usize, &str)) -> Result<Color, GraphError> {
    tok.parse::<Color>().map_err(|_| GraphError::Syntax {
        line,
        col,
        msg: format!("expected a color, found `{tok}`"),
    })
}

enum RawNode<'a> {
    Intro(&'a str, Color),
    Union(&'a str, &'a str),
    Recolor(&'a str, Color, Color),
    AddEdges(&'a str, Color, Color),
}

/// Parses the line-oriented decomposition format and validates the result.
pub fn parse_decomposition(text: &str) -> Result<CwDecomposition, GraphError> {
    let mut raw: Vec<(usize, &str, RawNode)> = Vec::new();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut vertices: HashMap<&str, usize> = HashMap::new();
    let mut root: Option<(usize, &str)> = None;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokens(strip_comment(line));
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        let arity = match keyword {
            "recolor" | "addedges" => 4,
            "intro" | "union" => 3,
            "root" => 1,
            _ => {
                return Err(GraphError::Syntax {
                    line: lineno,
                    col,
                    msg: format!("unknown directive `{keyword}`"),
                })
            }
        };
        if toks.len() != arity + 1 {
            let col = toks.get(arity + 1).map_or(line.chars().count() + 1, |t| t.0);
            return Err(GraphError::Syntax {
                line: lineno,
                col,
                msg: format!("`{keyword}` takes {arity} arguments, found {}", toks.len() - 1),
            });
        }
        if keyword == "root" {
            if root.is_some() {
                return Err(GraphError::MultipleRoots { line: lineno });
            }
            root = Some((lineno, toks[1].1));
            continue;
        }
        let id = toks[1].1;
        let node = match keyword {
            "intro" => {
                let vertex = toks[2].1;
                if vertices.insert(vertex, lineno).is_some() {
                    return Err(GraphError::DuplicateIntro {
                        line: lineno,
                        vertex: vertex.to_owned(),
                    });
                }
                RawNode::Intro(vertex, parse_color(lineno, toks[3])?)
            }
            "union" => RawNode::Union(toks[2].1, toks[3].1),
            "recolor" => RawNode::Recolor(
                toks[2].1,
                parse_color(lineno, toks[3])?,
                parse_color(lineno, toks[4])?,
            ),
            _ => RawNode::AddEdges(
                toks[2].1,
                parse_color(lineno, toks[3])?,
                parse_color(lineno, toks[4])?,
            ),
        };
        if ids.insert(id, raw.len()).is_some() {
            return Err(GraphError::DuplicateNode {
                line: lineno,
                node: id.to_owned(),
            });
        }
        raw.push((lineno, id, node));
    }

    let (_, root_label) = root.ok_or(GraphError::MissingRoot)?;
    let root = *ids
        .get(root_label)
        .ok_or_else(|| GraphError::UnknownRoot(root_label.to_owned()))?;

    let resolve = |line: usize, node: &str, child: &str| {
        ids.get(child).map(|&i| NodeId(i)).ok_or_else(|| GraphError::DanglingChild {
            line,
            node: node.to_owned(),
            child: child.to_owned(),
        })
    };
    let mut labels = Vec::with_capacity(raw.len());
    let mut nodes = Vec::with_capacity(raw.len());
    for (line, id, node) in &raw {
        let node = match *node {
            RawNode::Intro(v, color) => Node::Intro {
                vertex: v.to_owned(),
                color,
            },
            RawNode::Union(l, r) => Node::Union(resolve(*line, id, l)?, resolve(*line, id, r)?),
            RawNode::Recolor(c, from, to) => Node::Recolor {
                child: resolve(*line, id, c)?,
                from,
                to,
            },
            RawNode::AddEdges(c, a, b) => Node::AddEdges {
                child: resolve(*line, id, c)?,
                a,
                b,
            },
        };
        labels.push((*id).to_owned());
        nodes.push(node);
    }
    let d = CwDecomposition::from_parts(labels, nodes, NodeId(root));
    let violations = d.validate();
    if violations.is_empty() {
        Ok(d)
    } else {
        Err(GraphError::Invalid(violations))
    }
}

/// Parses an edge-list graph (`v <name>` / `e <a> <b>` lines); all vertices
/// get color 1.
pub fn parse_graph(text: &str) -> Result<ColoredGraph, GraphError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokens(strip_comment(line));
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        let want = match keyword {
            "v" => 1,
            "e" => 2,
            _ => {
                return Err(GraphError::Syntax {
                    line: lineno,
                    col,
                    msg: format!("unknown directive `{keyword}`"),
                })
            }
        };
        if toks.len() != want + 1 {
            return Err(GraphError::Syntax {
                line: lineno,
                col,
                msg: format!("`{keyword}` takes {want} arguments"),
            });
        }
        if keyword == "v" {
            let name = toks[1].1;
            if index.insert(name.to_owned(), names.len()).is_some() {
                return Err(GraphError::DuplicateVertex {
                    line: lineno,
                    vertex: name.to_owned(),
                });
            }
            names.push(name.to_owned());
            continue;
        }
        let (a, b) = (toks[1].1, toks[2].1);
        let lookup = |v: &str| {
            index.get(v).copied().ok_or_else(|| GraphError::UnknownVertex {
                line: lineno,
                vertex: v.to_owned(),
            })
        };
        let (ia, ib) = (lookup(a)?, lookup(b)?);
        if ia == ib {
            return Err(GraphError::SelfLoop {
                line: lineno,
                vertex: a.to_owned(),
            });
        }
        if !edges.insert((ia.min(ib), ia.max(ib))) {
            return Err(GraphError::DuplicateEdge {
                line: lineno,
                a: a.to_owned(),
                b: b.to_owned(),
            });
        }
    }
    let colors = vec![1; names.len()];
    let edges: Vec<_> = edges.into_iter().collect();
    Ok(ColoredGraph::new(names, colors, &edges))
}

/// Writes a graph in the edge-list format.
pub fn write_graph(g: &ColoredGraph) -> String {
    let mut out = String::new();
    for n in g.names() {
        out.push_str(&format!("v {n}\n"));
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("e {} {}\n", g.name(a), g.name(b)));
    }
    out
}

/// Path `v1 - v2 - ... - vn`, width at most 3.
pub fn gen_path(n: usize) -> CwDecomposition {
    assert!(n >= 1);
    // Color 2 marks the current end of the path, color 3 the finished part.
    let mut b = DecompositionBuilder::new();
    let mut cur = b.intro("v1", 2);
    for i in 2..=n {
        let leaf = b.intro(format!("v{i}"), 1);
        let u = b.union(cur, leaf);
        let e = b.add_edges(u, 1, 2);
        let r = b.recolor(e, 2, 3);
        cur = b.recolor(r, 1, 2);
    }
    b.finish(cur)
}

/// Complete graph on `v1..vn`, width at most 2.
pub fn gen_clique(n: usize) -> CwDecomposition {
    assert!(n >= 1);
    let mut b = DecompositionBuilder::new();
    let mut cur = b.intro("v1", 1);
    for i in 2..=n {
        let leaf = b.intro(format!("v{i}"), 2);
        let u = b.union(cur, leaf);
        let e = b.add_edges(u, 1, 2);
        cur = b.recolor(e, 2, 1);
    }
    b.finish(cur)
}

/// Complete bipartite graph between `a1..ap` and `b1..bq`, width 2.
pub fn gen_complete_bipartite(p: usize, q: usize) -> CwDecomposition {
    assert!(p >= 1 && q >= 1);
    let mut b = DecompositionBuilder::new();
    let side = |b: &mut DecompositionBuilder, prefix: &str, count: usize, color: Color| {
        let mut cur = b.intro(format!("{prefix}1"), color);
        for i in 2..=count {
            let leaf = b.intro(format!("{prefix}{i}"), color);
            cur = b.union(cur, leaf);
        }
        cur
    };
    let left = side(&mut b, "a", p, 1);
    let right = side(&mut b, "b", q, 2);
    let u = b.union(left, right);
    let root = b.add_edges(u, 1, 2);
    b.finish(root)
}
