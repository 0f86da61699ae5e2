//! Structural recognition of graphs whose quantum spectral measure is known
//! (or conjectured) in closed form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{complete_to_colored, cube, find_isomorphism, is_homogeneous, ngon, rectangle, PrecoloredGraph, MAX_AUT_VERTICES};
use crate::error::{Error, Result};
use crate::freeconv::free_mul_conv;
use crate::measures::{moments_of, CatalogMeasure, MomentSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureStatus {
    Proven,
    Conjectural,
    Unsupported,
}

impl fmt::Display for MeasureStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureStatus::Proven => "proven",
            MeasureStatus::Conjectural => "conjectural",
            MeasureStatus::Unsupported => "unsupported",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuantumMeasure {
    pub moments: MomentSequence,
    pub status: MeasureStatus,
    /// How the measure was assembled, e.g. `eta:4 ⊠ eta:4`.
    pub derivation: String,
}

#[derive(Clone, Debug)]
enum Shape {
    /// Free product of simplices, innermost factor first.
    Simplices(Vec<usize>),
    /// A catalog leaf, possibly wrapped in disjoint unions.
    Other { homogeneous: Option<bool> },
}

struct Node {
    moments: MomentSequence,
    status: MeasureStatus,
    derivation: String,
    shape: Shape,
}

/// Recursive evaluation: simplices give `eta`, free products with an outer
/// simplex and disjoint unions of copies give `⊠ eta(k)`, and a few leaves
/// (m-gons with m != 4, the rectangle, the cube) come from the catalog.
/// Anything else is reported as `UnsupportedGraph`.
pub fn quantum_measure(x: &PrecoloredGraph, order: usize) -> Result<QuantumMeasure> {
    let node = evaluate(x, order)?;
    Ok(QuantumMeasure { moments: node.moments, status: node.status, derivation: node.derivation })
}

fn eta(k: usize, order: usize) -> Result<MomentSequence> {
    moments_of(&CatalogMeasure::Eta(k as u32), order)
}

fn evaluate(x: &PrecoloredGraph, order: usize) -> Result<Node> {
    let n = x.n();
    if x.classes().is_empty() || (x.classes().len() == 1 && x.is_colored()) {
        return Ok(Node {
            moments: eta(n, order)?,
            status: MeasureStatus::Proven,
            derivation: format!("eta:{n}"),
            shape: Shape::Simplices(vec![n]),
        });
    }
    let comps = x.components();
    if comps.len() > 1 {
        return copies(x, &comps, order).and_then(|inner| combine(inner, comps.len(), order));
    }
    if x.is_colored() {
        for c in 0..x.classes().len() {
            if let Some(blocks) = outer_simplex_blocks(x, c) {
                let inner = copies(x, &blocks, order)?;
                return combine(inner, blocks.len(), order);
            }
        }
    }
    leaf(x, order)
}

/// Evaluates the first block after checking all blocks are name-preserving copies of it.
fn copies(x: &PrecoloredGraph, blocks: &[Vec<usize>], order: usize) -> Result<Node> {
    let first = x.induced(&blocks[0]);
    for b in &blocks[1..] {
        if b.len() != first.n() || find_isomorphism(&x.induced(b), &first, false).is_none() {
            return Err(Error::UnsupportedGraph(
                "components are not copies of a single colored graph".into(),
            ));
        }
    }
    evaluate(&first, order)
}

/// If removing class `c` splits `x` into equal blocks and `c` is exactly the
/// set of pairs between distinct blocks, returns the blocks.
fn outer_simplex_blocks(x: &PrecoloredGraph, c: usize) -> Option<Vec<Vec<usize>>> {
    let mut rest = x.classes().to_vec();
    let outer = rest.remove(c);
    let blocks = PrecoloredGraph::new(x.n(), rest).ok()?.components();
    let size = blocks[0].len();
    if blocks.len() < 2 || blocks.iter().any(|b| b.len() != size) {
        return None;
    }
    let mut block_of = vec![0; x.n()];
    for (k, b) in blocks.iter().enumerate() {
        for &v in b {
            block_of[v] = k;
        }
    }
    let cross = x.n() * x.n() - blocks.len() * size * size;
    let all_cross = outer.pairs.iter().all(|&(i, j)| block_of[i] != block_of[j]);
    (all_cross && outer.pairs.len() == cross).then_some(blocks)
}

fn combine(inner: Node, k: usize, order: usize) -> Result<Node> {
    let moments = free_mul_conv(&inner.moments, &eta(k, order)?, order)?;
    let derivation = format!("{} ⊠ eta:{k}", inner.derivation);
    let (status, shape) = match inner.shape {
        Shape::Simplices(mut factors) => {
            factors.push(k);
            let generic = factors.iter().all(|&f| f >= 4);
            let status = if generic || (k <= 2 && inner.status == MeasureStatus::Proven) {
                MeasureStatus::Proven
            } else {
                MeasureStatus::Conjectural
            };
            (status, Shape::Simplices(factors))
        }
        Shape::Other { homogeneous } => {
            if k == 2 {
                (inner.status, Shape::Other { homogeneous })
            } else if homogeneous == Some(true) {
                (MeasureStatus::Conjectural, Shape::Other { homogeneous })
            } else {
                return Err(Error::UnsupportedGraph(format!(
                    "{k} copies of a component that is not known to be homogeneous"
                )));
            }
        }
    };
    Ok(Node { moments, status, derivation, shape })
}

fn leaf(x: &PrecoloredGraph, order: usize) -> Result<Node> {
    let n = x.n();
    let mut candidates: Vec<(PrecoloredGraph, CatalogMeasure)> = Vec::new();
    if n >= 3 && n != 4 {
        candidates.push((ngon(n)?, CatalogMeasure::Dihedral(n as u32)));
    }
    if n == 4 {
        candidates.push((rectangle(), CatalogMeasure::UniformGroup(4)));
    }
    if n == 8 {
        candidates.push((cube(), CatalogMeasure::Cube));
    }
    let completed = complete_to_colored(x);
    for (g, measure) in candidates {
        if find_isomorphism(&completed, &complete_to_colored(&g), true).is_some() {
            let homogeneous = if n <= MAX_AUT_VERTICES { Some(is_homogeneous(x)?) } else { None };
            return Ok(Node {
                moments: moments_of(&measure, order)?,
                status: MeasureStatus::Proven,
                derivation: measure.name(),
                shape: Shape::Other { homogeneous },
            });
        }
    }
    let reason = if n == 4 && x.classes().len() == 1 {
        "the monochrome square has no closed-form quantum measure here".to_string()
    } else {
        format!("no structural rule matches this {n}-vertex graph")
    };
    Err(Error::UnsupportedGraph(reason))
}
