//! Non-crossing partitions and the Kreweras complement.

use std::fmt;

/// A non-crossing partition of `{1..n}`; blocks are sorted and listed by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NonCrossingPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NonCrossingPartition {
    /// Validates coverage, disjointness and the non-crossing condition.
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; n + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return None;
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n || seen[x] {
                    return None;
                }
                seen[x] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) || !is_non_crossing(&blocks) {
            return None;
        }
        blocks.sort_by_key(|b| b[0]);
        Some(Self { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(Vec::len)
    }

    /// Kreweras complement: the cycles of `σ^{-1} ∘ γ`, where `σ` cycles each
    /// block in increasing order and `γ = (1 2 ... n)`.
    pub fn kreweras(&self) -> NonCrossingPartition {
        let n = self.n;
        let mut sigma_inv = vec![0usize; n + 1];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                let next = b[(i + 1) % b.len()];
                sigma_inv[next] = x;
            }
        }
        let perm: Vec<usize> = (0..=n)
            .map(|i| if i == 0 { 0 } else { sigma_inv[i % n + 1] })
            .collect();
        let mut visited = vec![false; n + 1];
        let mut blocks = Vec::new();
        for start in 1..=n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                cycle.push(x);
                x = perm[x];
            }
            blocks.push(cycle);
        }
        NonCrossingPartition::new(n, blocks).expect("Kreweras complement is non-crossing")
    }
}

impl fmt::Display for NonCrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let xs: Vec<String> = b.iter().map(usize::to_string).collect();
                format!("{{{}}}", xs.join(","))
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn is_non_crossing(blocks: &[Vec<usize>]) -> bool {
    for (i, p) in blocks.iter().enumerate() {
        for q in blocks.iter().skip(i + 1) {
            for w in p.windows(2) {
                let (lo, hi) = (w[0].min(w[1]), w[0].max(w[1]));
                let inside = q.iter().any(|&x| lo < x && x < hi);
                let outside = q.iter().any(|&x| x < lo || x > hi);
                if inside && outside {
                    return false;
                }
            }
        }
    }
    true
}

/// All of `NC(n)`, built by choosing the block of the smallest element and
/// filling each gap independently.
pub fn enumerate(n: usize) -> Vec<NonCrossingPartition> {
    let elems: Vec<usize> = (1..=n).collect();
    partitions_of(&elems)
        .into_iter()
        .map(|blocks| NonCrossingPartition::new(n, blocks).expect("construction is non-crossing"))
        .collect()
}

fn partitions_of(elems: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = elems.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    let m = rest.len();
    for mask in 0u32..(1u32 << m) {
        let mut block = vec![first];
        let mut gaps: Vec<Vec<usize>> = vec![Vec::new()];
        for (i, &x) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(x);
                gaps.push(Vec::new());
            } else {
                gaps.last_mut().unwrap().push(x);
            }
        }
        let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for gap in &gaps {
            let sub = partitions_of(gap);
            let mut next = Vec::with_capacity(acc.len() * sub.len());
            for a in &acc {
                for s in &sub {
                    let mut c = a.clone();
                    c.extend(s.iter().cloned());
                    next.push(c);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    out
}
