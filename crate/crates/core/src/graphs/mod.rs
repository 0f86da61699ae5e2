//! Precolored graphs, free products, Laplacians, symmetry groups and the
//! quantum spectral measure pipeline.

mod quantum;
mod symmetry;
mod witness;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{format_rational, int, Rational};

pub use quantum::{quantum_measure, MeasureStatus, QuantumMeasure};
pub use symmetry::{
    automorphism_group, classical_spectral_measure, find_isomorphism, is_homogeneous, magic_biunitary_check,
    MagicMatrix, Permutation, PermutationGroup, MAX_AUT_VERTICES,
};
pub use witness::{connectivity_witness, ConnectivityWitness, Letter, WitnessWord};

/// A named set of ordered vertex pairs, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorClass {
    pub name: String,
    pub pairs: BTreeSet<(usize, usize)>,
}

/// Vertices `0..n` (shown 1-based) with pairwise-disjoint color classes.
/// Empty classes are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrecoloredGraph {
    n: usize,
    classes: Vec<ColorClass>,
}

impl PrecoloredGraph {
    /// Validates loops, range and overlap; drops empty classes.
    pub fn new(n: usize, classes: Vec<ColorClass>) -> Result<Self> {
        if n == 0 {
            return Err(Error::SchemaError("graph needs at least one vertex".into()));
        }
        let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut names = BTreeSet::new();
        for (c, class) in classes.iter().enumerate() {
            if !names.insert(class.name.as_str()) {
                return Err(Error::SchemaError(format!("duplicate class name `{}`", class.name)));
            }
            for &(i, j) in &class.pairs {
                if i >= n || j >= n {
                    return Err(Error::SchemaError(format!(
                        "pair ({}, {}) out of range 1..{n}",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j {
                    return Err(Error::LoopEdge(i + 1));
                }
                if let Some(&other) = owner.get(&(i, j)) {
                    if other != c {
                        return Err(Error::OverlappingColorClasses(i + 1, j + 1));
                    }
                }
                owner.insert((i, j), c);
            }
        }
        let classes = classes.into_iter().filter(|c| !c.pairs.is_empty()).collect();
        Ok(Self { n, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[ColorClass] {
        &self.classes
    }

    /// `color[i*n + j]` is the class index of `(i, j)`, if any.
    pub fn color_matrix(&self) -> Vec<Option<usize>> {
        let mut m = vec![None; self.n * self.n];
        for (c, class) in self.classes.iter().enumerate() {
            for &(i, j) in &class.pairs {
                m[i * self.n + j] = Some(c);
            }
        }
        m
    }

    /// Every off-diagonal pair lies in some class.
    pub fn is_colored(&self) -> bool {
        let covered: usize = self.classes.iter().map(|c| c.pairs.len()).sum();
        covered == self.n * (self.n - 1)
    }

    /// Same vertex set and the same collection of pair sets, ignoring class names.
    pub fn same_coloring(&self, other: &Self) -> bool {
        let sets = |g: &Self| g.classes.iter().map(|c| c.pairs.clone()).collect::<BTreeSet<_>>();
        self.n == other.n && sets(self) == sets(other)
    }

    /// Induced subgraph on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let classes = self
            .classes
            .iter()
            .map(|c| ColorClass {
                name: c.name.clone(),
                pairs: c
                    .pairs
                    .iter()
                    .filter_map(|(i, j)| Some((*pos.get(i)?, *pos.get(j)?)))
                    .collect(),
            })
            .collect();
        Self::new(vertices.len(), classes).expect("induced subgraph of a valid graph")
    }

    /// Undirected connected components over the union of all classes, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.undirected_adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut k = 0;
            while k < comp.len() {
                for &w in &adj[comp[k]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub(crate) fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![BTreeSet::new(); self.n];
        for c in &self.classes {
            for &(i, j) in &c.pairs {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    fn to_document(&self) -> GraphDocument {
        let symmetric = self
            .classes
            .iter()
            .all(|c| c.pairs.iter().all(|&(i, j)| c.pairs.contains(&(j, i))));
        let classes = self
            .classes
            .iter()
            .map(|c| ClassDocument {
                name: c.name.clone(),
                pairs: c
                    .pairs
                    .iter()
                    .filter(|(i, j)| !symmetric || i < j)
                    .map(|&(i, j)| [i + 1, j + 1])
                    .collect(),
            })
            .collect();
        GraphDocument { n: self.n, oriented: !symmetric, classes }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph serializes")
    }
}

impl fmt::Display for PrecoloredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph on {} vertices", self.n)?;
        for c in &self.classes {
            write!(f, "; {} ({} pairs)", c.name, c.pairs.len())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    n: usize,
    #[serde(default)]
    oriented: bool,
    classes: Vec<ClassDocument>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDocument {
    name: String,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for PrecoloredGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document().serialize(s)
    }
}

/// Parses the JSON graph document; unoriented pairs are expanded to both orientations.
pub fn parse_graph(document: &str) -> Result<PrecoloredGraph> {
    let doc: GraphDocument = serde_json::from_str(document).map_err(|e| Error::SchemaError(e.to_string()))?;
    let mut classes = Vec::with_capacity(doc.classes.len());
    for c in doc.classes {
        let mut pairs = BTreeSet::new();
        for [i, j] in c.pairs {
            if i == 0 || j == 0 || i > doc.n || j > doc.n {
                return Err(Error::SchemaError(format!("pair [{i}, {j}] out of range 1..{}", doc.n)));
            }
            if i == j {
                return Err(Error::LoopEdge(i));
            }
            pairs.insert((i - 1, j - 1));
            if !doc.oriented {
                pairs.insert((j - 1, i - 1));
            }
        }
        classes.push(ColorClass { name: c.name, pairs });
    }
    PrecoloredGraph::new(doc.n, classes)
}

fn symmetric_class(name: &str, edges: impl IntoIterator<Item = (usize, usize)>) -> ColorClass {
    let mut pairs = BTreeSet::new();
    for (i, j) in edges {
        pairs.insert((i, j));
        pairs.insert((j, i));
    }
    ColorClass { name: name.into(), pairs }
}

/// `X_n`: one class holding every off-diagonal pair.
pub fn simplex(n: usize) -> PrecoloredGraph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    PrecoloredGraph::new(n, vec![symmetric_class("edge", edges)]).expect("simplex is valid")
}

/// `n` vertices and no classes.
pub fn edgeless(n: usize) -> PrecoloredGraph {
    PrecoloredGraph::new(n, Vec::new()).expect("edgeless graph is valid")
}

/// The `m`-cycle with its adjacency as the only class.
pub fn ngon(m: usize) -> Result<PrecoloredGraph> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("ngon needs m >= 3, got {m}")));
    }
    PrecoloredGraph::new(m, vec![symmetric_class("side", (0..m).map(|i| (i, (i + 1) % m)))])
}

/// The 3-cube skeleton: vertices are bit strings, adjacency differs in one bit.
pub fn cube() -> PrecoloredGraph {
    let edges = (0..8usize).flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b)))).filter(|(v, w)| v < w);
    PrecoloredGraph::new(8, vec![symmetric_class("edge", edges)]).expect("cube is valid")
}

/// Vertices in cyclic order 1-2-3-4; short sides, long sides and diagonals each form a class.
pub fn rectangle() -> PrecoloredGraph {
    rectangles(1)
}

/// Two disjoint rectangles on vertices 1..4 and 5..8, rectangle classes only.
pub fn two_rectangles() -> PrecoloredGraph {
    rectangles(2)
}

fn rectangles(copies: usize) -> PrecoloredGraph {
    let shape = |edges: [(usize, usize); 2]| {
        (0..copies).flat_map(move |c| edges.into_iter().map(move |(i, j)| (4 * c + i, 4 * c + j)))
    };
    PrecoloredGraph::new(
        4 * copies,
        vec![
            symmetric_class("short", shape([(0, 1), (2, 3)])),
            symmetric_class("long", shape([(1, 2), (3, 0)])),
            symmetric_class("diagonal", shape([(0, 2), (1, 3)])),
        ],
    )
    .expect("rectangles are valid")
}

/// Built-in names: `simplex:n`, `ngon:m`, `cube`, `rectangle`, `two_rectangles`, `edgeless:n`.
pub fn named_graph(spec: &str) -> Result<PrecoloredGraph> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (spec.trim(), None),
    };
    let size = || -> Result<usize> {
        let a = arg.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs a size, e.g. {name}:4")))?;
        match a.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(Error::InvalidParameter(format!("bad size `{a}` for `{name}`"))),
        }
    };
    let no_arg = |g: PrecoloredGraph| match arg {
        None => Ok(g),
        Some(_) => Err(Error::InvalidParameter(format!("`{name}` takes no size"))),
    };
    match name {
        "simplex" => Ok(simplex(size()?)),
        "edgeless" => Ok(edgeless(size()?)),
        "ngon" => ngon(size()?),
        "cube" => no_arg(cube()),
        "rectangle" => no_arg(rectangle()),
        "two_rectangles" => no_arg(two_rectangles()),
        _ => Err(Error::UnsupportedGraph(format!("unknown built-in graph `{spec}`"))),
    }
}

impl FromStr for PrecoloredGraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            parse_graph(s)
        } else {
            named_graph(s)
        }
    }
}

/// Adds one class with every uncovered off-diagonal pair (the missing edges).
pub fn complete_to_colored(x: &PrecoloredGraph) -> PrecoloredGraph {
    let color = x.color_matrix();
    let n = x.n;
    let missing: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && color[i * n + j].is_none())
        .collect();
    let mut classes = x.classes.clone();
    if !missing.is_empty() {
        let mut name = String::from("missing");
        while classes.iter().any(|c| c.name == name) {
            name.push('\'');
        }
        classes.push(ColorClass { name, pairs: missing });
    }
    PrecoloredGraph::new(n, classes).expect("completion keeps classes disjoint")
}

/// Matrix with `d_ij = values[k]` when `(i, j)` lies in class `k`, zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laplacian {
    pub values: Vec<Rational>,
    pub matrix: Vec<Vec<Rational>>,
}

impl Laplacian {
    pub fn is_symmetric(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }
}

impl fmt::Display for Laplacian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn laplacian(x: &PrecoloredGraph, values: &[Rational]) -> Result<Laplacian> {
    if values.len() != x.classes.len() {
        return Err(Error::ColorValueCount { expected: x.classes.len(), found: values.len() });
    }
    for (k, v) in values.iter().enumerate() {
        if values[..k].contains(v) {
            return Err(Error::DuplicateColorValue(format_rational(v)));
        }
    }
    let mut matrix = vec![vec![Rational::zero(); x.n]; x.n];
    for (c, class) in x.classes.iter().enumerate() {
        for &(i, j) in &class.pairs {
            matrix[i][j] = values[c].clone();
        }
    }
    Ok(Laplacian { values: values.to_vec(), matrix })
}

/// [`laplacian`] with values `1, 2, ..., p`.
pub fn default_laplacian(x: &PrecoloredGraph) -> Laplacian {
    let values: Vec<Rational> = (1..=x.classes.len() as i64).map(int).collect();
    laplacian(x, &values).expect("default values are distinct")
}

/// `X * Y`: a copy of `X` at each vertex of `Y`. Vertex `(i, α)` has index
/// `α·|X| + i` (0-based), so `X` varies fastest.
pub fn free_product(x: &PrecoloredGraph, y: &PrecoloredGraph) -> PrecoloredGraph {
    let t = x.n;
    let z = y.n;
    let mut classes = Vec::with_capacity(x.classes.len() + y.classes.len());
    for c in &x.classes {
        let pairs = (0..z)
            .flat_map(|a| c.pairs.iter().map(move |&(i, j)| (a * t + i, a * t + j)))
            .collect();
        classes.push(ColorClass { name: format!("x.{}", c.name), pairs });
    }
    for c in &y.classes {
        let pairs = c
            .pairs
            .iter()
            .flat_map(|&(a, b)| (0..t).flat_map(move |i| (0..t).map(move |j| (a * t + i, b * t + j))))
            .collect();
        classes.push(ColorClass { name: format!("y.{}", c.name), pairs });
    }
    PrecoloredGraph::new(t * z, classes).expect("free product of valid graphs is valid")
}

/// `n` disjoint copies of `x`, i.e. `x * edgeless(n)`.
pub fn disjoint_union(x: &PrecoloredGraph, n: usize) -> Result<PrecoloredGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("disjoint union needs n >= 1".into()));
    }
    Ok(free_product(x, &edgeless(n)))
}

/// Undirected reachability over the union of all classes.
pub fn is_connected(x: &PrecoloredGraph) -> bool {
    x.components().len() == 1
}
