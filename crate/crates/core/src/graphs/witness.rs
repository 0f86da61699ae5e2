//! Words in `d`, `d*` whose summed products have no zero entry.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use super::PrecoloredGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    D,
    DStar,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::D => "d",
            Letter::DStar => "d*",
        })
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A word for the pair `(from, to)` and the vertex path it follows (both 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessWord {
    pub from: usize,
    pub to: usize,
    pub word: Vec<Letter>,
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityWitness {
    pub words: Vec<WitnessWord>,
    pub max_length: usize,
    /// Every entry of the summed word products is at least 1.
    pub verified: bool,
}

type Matrix = Vec<Vec<u64>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(0u64, |acc, k| acc.saturating_add(a[i][k].saturating_mul(b[k][j]))))
                .collect()
        })
        .collect()
}

/// For each ordered pair, a shortest undirected path in the merged classes,
/// read as `d` along an edge's orientation and `d*` against it. Diagonal pairs
/// step to a neighbour and back.
pub fn connectivity_witness(x: &PrecoloredGraph) -> Result<ConnectivityWitness> {
    let n = x.n();
    if x.components().len() != 1 {
        return Err(Error::NotConnected);
    }
    let mut d = vec![vec![0u64; n]; n];
    for c in x.classes() {
        for &(i, j) in &c.pairs {
            d[i][j] = 1;
        }
    }
    let adj = x.undirected_adjacency();
    let letter = |a: usize, b: usize| if d[a][b] == 1 { Letter::D } else { Letter::DStar };

    let mut words = Vec::with_capacity(n * n);
    for i in 0..n {
        let parent = bfs_parents(&adj, i);
        for j in 0..n {
            let path = if i == j {
                match adj[i].first() {
                    Some(&w) => vec![i, w, i],
                    None => vec![i],
                }
            } else {
                let mut p = vec![j];
                let mut v = j;
                while v != i {
                    v = parent[v].expect("connected graph");
                    p.push(v);
                }
                p.reverse();
                p
            };
            let word = path.windows(2).map(|w| letter(w[0], w[1])).collect();
            words.push(WitnessWord { from: i + 1, to: j + 1, word, path: path.iter().map(|v| v + 1).collect() });
        }
    }

    let dt: Matrix = (0..n).map(|i| (0..n).map(|j| d[j][i]).collect()).collect();
    let identity: Matrix = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    let mut total = vec![vec![0u64; n]; n];
    for w in &words {
        let mut prod = identity.clone();
        for l in &w.word {
            prod = mat_mul(&prod, if *l == Letter::D { &d } else { &dt });
        }
        for (row, prow) in total.iter_mut().zip(&prod) {
            for (t, p) in row.iter_mut().zip(prow) {
                *t = t.saturating_add(*p);
            }
        }
    }
    let verified = total.iter().flatten().all(|&v| v >= 1);
    let max_length = words.iter().map(|w| w.word.len()).max().unwrap_or(0);
    Ok(ConnectivityWitness { words, max_length, verified })
}

fn bfs_parents(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    parent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cube, edgeless, parse_graph, simplex, two_rectangles};

    #[test]
    fn single_edge() {
        let g = parse_graph(r#"{"n":2,"classes":[{"name":"e","pairs":[[1,2]]}]}"#).unwrap();
        let w = connectivity_witness(&g).unwrap();
        assert!(w.verified);
        assert_eq!(w.max_length, 2);
        let off: Vec<_> = w.words.iter().filter(|x| x.from != x.to).collect();
        assert!(off.iter().all(|x| x.word.len() == 1));
    }

    #[test]
    fn orientation_reversal() {
        let g = parse_graph(r#"{"n":2,"oriented":true,"classes":[{"name":"e","pairs":[[1,2]]}]}"#).unwrap();
        let w = connectivity_witness(&g).unwrap();
        assert!(w.verified);
        let back = w.words.iter().find(|x| x.from == 2 && x.to == 1).unwrap();
        assert_eq!(back.word, vec![Letter::DStar]);
        let fwd = w.words.iter().find(|x| x.from == 1 && x.to == 2).unwrap();
        assert_eq!(fwd.word, vec![Letter::D]);
    }

    #[test]
    fn path_and_others() {
        let g = parse_graph(r#"{"n":3,"classes":[{"name":"e","pairs":[[1,2],[2,3]]}]}"#).unwrap();
        let w = connectivity_witness(&g).unwrap();
        assert!(w.verified);
        assert_eq!(w.max_length, 2);
        assert_eq!(connectivity_witness(&cube()).unwrap().max_length, 3);
        let one = connectivity_witness(&simplex(1)).unwrap();
        assert!(one.verified && one.max_length == 0);
        assert_eq!(connectivity_witness(&edgeless(2)), Err(Error::NotConnected));
        assert_eq!(connectivity_witness(&two_rectangles()), Err(Error::NotConnected));
    }
}
