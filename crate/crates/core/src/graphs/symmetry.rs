//! Permutations, automorphism search, isomorphism up to class relabeling and
//! the magic biunitary of a permutation group.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::PrecoloredGraph;
use crate::error::{Error, Result};
use crate::measures::SignedAtomicMeasure;
use crate::series::{int, Rational};

/// Hard limit for automorphism enumeration.
pub const MAX_AUT_VERTICES: usize = 10;

/// A bijection of `0..n`, shown 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// `images[i]` is the image of `i` (0-based); `None` unless a bijection.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v >= images.len() || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self { images: inv }
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, v)| i == *v).count()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.images.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "[{}]", xs.join(" "))
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.images.iter().map(|v| v + 1).collect();
        one_based.serialize(s)
    }
}

/// A set of permutations of `0..n`, stored flat and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    n: usize,
    data: Vec<u8>,
}

impl PermutationGroup {
    /// Sorts and deduplicates; closure is not checked (see [`Self::is_closed`]).
    pub fn from_elements(n: usize, mut elements: Vec<Permutation>) -> Self {
        assert!(n <= u8::MAX as usize, "permutation degree too large");
        elements.sort();
        elements.dedup();
        let mut data = Vec::with_capacity(n * elements.len());
        for p in &elements {
            assert_eq!(p.n(), n, "permutation degree mismatch");
            data.extend(p.images.iter().map(|&v| v as u8));
        }
        Self { n, data }
    }

    /// Closure of `generators` under composition.
    pub fn generated_by(n: usize, generators: &[Permutation]) -> Self {
        let mut elems = std::collections::BTreeSet::from([Permutation::identity(n)]);
        let mut frontier = vec![Permutation::identity(n)];
        while let Some(p) = frontier.pop() {
            for g in generators {
                let q = g.compose(&p);
                if elems.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        Self::from_elements(n, elems.into_iter().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        if self.n == 0 {
            1
        } else {
            self.data.len() / self.n
        }
    }

    fn raw(&self, k: usize) -> &[u8] {
        &self.data[k * self.n..(k + 1) * self.n]
    }

    pub fn get(&self, k: usize) -> Permutation {
        Permutation { images: self.raw(k).iter().map(|&v| v as usize).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = Permutation> + '_ {
        (0..self.order()).map(|k| self.get(k))
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        let key: Vec<u8> = p.images.iter().map(|&v| v as u8).collect();
        let mut lo = 0;
        let mut hi = self.order();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.raw(mid).cmp(&key[..]) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Identity present and closed under composition (hence under inverse, being finite).
    pub fn is_closed(&self) -> bool {
        if !self.contains(&Permutation::identity(self.n)) {
            return false;
        }
        let elems: Vec<Permutation> = self.iter().collect();
        elems.iter().all(|g| elems.iter().all(|h| self.contains(&g.compose(h))))
    }

    /// Orbits of the natural action, each sorted, listed by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.order()).map(|k| self.raw(k)[s] as usize).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &v in &orbit {
                label[v] = out.len();
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() <= 1
    }

    /// `(1/|G|) sum_g δ_{fix(g)}`.
    pub fn fixed_point_measure(&self) -> SignedAtomicMeasure {
        let mut counts = vec![0usize; self.n + 1];
        for k in 0..self.order() {
            let fix = self.raw(k).iter().enumerate().filter(|(i, &v)| *i == v as usize).count();
            counts[fix] += 1;
        }
        let total = int(self.order() as i64);
        SignedAtomicMeasure::from_atoms(
            counts
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c > 0)
                .map(|(s, c)| (int(s as i64), int(c as i64) / &total)),
        )
    }
}

/// Bijection of class indices built up during a search.
#[derive(Clone)]
struct ClassMap {
    fwd: Vec<Option<usize>>,
    bwd: Vec<Option<usize>>,
    frozen: bool,
}

impl ClassMap {
    /// Tries to match colors `p` (in a) and `q` (in b); returns the new link if one was made.
    fn link(&mut self, p: Option<usize>, q: Option<usize>) -> std::result::Result<Option<usize>, ()> {
        match (p, q) {
            (None, None) => Ok(None),
            (Some(p), Some(q)) => match self.fwd[p] {
                Some(r) if r == q => Ok(None),
                Some(_) => Err(()),
                None if self.frozen || self.bwd[q].is_some() => Err(()),
                None => {
                    self.fwd[p] = Some(q);
                    self.bwd[q] = Some(p);
                    Ok(Some(p))
                }
            },
            _ => Err(()),
        }
    }

    fn unlink(&mut self, p: usize) {
        if let Some(q) = self.fwd[p].take() {
            self.bwd[q] = None;
        }
    }
}

struct Search<'a> {
    n: usize,
    ca: Vec<Option<usize>>,
    cb: Vec<Option<usize>>,
    sig_a: Vec<Vec<(usize, usize)>>,
    sig_b: Vec<Vec<(usize, usize)>>,
    map: ClassMap,
    img: Vec<usize>,
    used: Vec<bool>,
    visit: &'a mut dyn FnMut(&[usize]) -> bool,
}

impl Search<'_> {
    /// Returns `true` when the visitor asked to stop.
    fn run(&mut self, k: usize) -> bool {
        if k == self.n {
            return (self.visit)(&self.img);
        }
        let n = self.n;
        for v in 0..n {
            if self.used[v] || self.sig_a[k] != self.sig_b[v] {
                continue;
            }
            let mut links = Vec::new();
            let mut ok = true;
            for i in 0..k {
                let w = self.img[i];
                for (p, q) in [(self.ca[i * n + k], self.cb[w * n + v]), (self.ca[k * n + i], self.cb[v * n + w])] {
                    match self.map.link(p, q) {
                        Ok(Some(l)) => links.push(l),
                        Ok(None) => {}
                        Err(()) => ok = false,
                    }
                    if !ok {
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                self.img[k] = v;
                self.used[v] = true;
                if self.run(k + 1) {
                    return true;
                }
                self.used[v] = false;
            }
            for l in links {
                self.map.unlink(l);
            }
        }
        false
    }
}

/// Per-vertex `(out, in)` degree in each class; sorted when classes may be relabeled.
fn signatures(g: &PrecoloredGraph, class_order: &[usize], sorted: bool) -> Vec<Vec<(usize, usize)>> {
    let mut sig = vec![vec![(0usize, 0usize); g.classes().len()]; g.n()];
    for (c, class) in g.classes().iter().enumerate() {
        for &(i, j) in &class.pairs {
            sig[i][class_order[c]].0 += 1;
            sig[j][class_order[c]].1 += 1;
        }
    }
    if sorted {
        for s in &mut sig {
            s.sort_unstable();
        }
    }
    sig
}

/// Backtracking over vertex maps `a -> b` that carry colors to colors. Without
/// `relabel`, classes correspond by name; with it, any class bijection is allowed.
fn search(a: &PrecoloredGraph, b: &PrecoloredGraph, relabel: bool, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let k = a.classes().len();
    if a.n() != b.n() || k != b.classes().len() {
        return;
    }
    let mut map = ClassMap { fwd: vec![None; k], bwd: vec![None; k], frozen: !relabel };
    let identity: Vec<usize> = (0..k).collect();
    let order_a = if relabel {
        let mut sa: Vec<usize> = a.classes().iter().map(|c| c.pairs.len()).collect();
        let mut sb: Vec<usize> = b.classes().iter().map(|c| c.pairs.len()).collect();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return;
        }
        identity.clone()
    } else {
        let mut order = Vec::with_capacity(k);
        for (p, c) in a.classes().iter().enumerate() {
            let Some(q) = b.classes().iter().position(|d| d.name == c.name) else {
                return;
            };
            map.fwd[p] = Some(q);
            map.bwd[q] = Some(p);
            order.push(q);
        }
        order
    };
    let mut s = Search {
        n: a.n(),
        ca: a.color_matrix(),
        cb: b.color_matrix(),
        sig_a: signatures(a, &order_a, relabel),
        sig_b: signatures(b, &identity, relabel),
        map,
        img: vec![0; a.n()],
        used: vec![false; a.n()],
        visit,
    };
    s.run(0);
}

/// A vertex bijection `a -> b` (0-based images) carrying color classes onto
/// color classes.
pub fn find_isomorphism(a: &PrecoloredGraph, b: &PrecoloredGraph, relabel: bool) -> Option<Vec<usize>> {
    let mut found = None;
    search(a, b, relabel, &mut |img| {
        found = Some(img.to_vec());
        true
    });
    found
}

/// All permutations preserving each color class and the uncolored pairs.
pub fn automorphism_group(x: &PrecoloredGraph) -> Result<PermutationGroup> {
    if x.n() > MAX_AUT_VERTICES {
        return Err(Error::TooManyVertices { n: x.n(), max: MAX_AUT_VERTICES });
    }
    let mut data = Vec::new();
    search(x, x, false, &mut |img| {
        data.extend(img.iter().map(|&v| v as u8));
        false
    });
    Ok(PermutationGroup { n: x.n(), data })
}

/// Vertex-transitivity of the automorphism group.
pub fn is_homogeneous(x: &PrecoloredGraph) -> Result<bool> {
    Ok(automorphism_group(x)?.is_transitive())
}

/// `(1/|G|) sum_s #{g : g has s fixed points} δ_s` for `G = Aut(x)`.
pub fn classical_spectral_measure(x: &PrecoloredGraph) -> Result<SignedAtomicMeasure> {
    Ok(automorphism_group(x)?.fixed_point_measure())
}

/// `n × n` matrix whose entries are functions on a finite set, stored as value vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagicMatrix {
    n: usize,
    len: usize,
    entries: Vec<Vec<Rational>>,
}

impl MagicMatrix {
    /// `s_ij(g) = 1` when `g(j) = i`.
    pub fn from_group(g: &PermutationGroup) -> Self {
        let n = g.n();
        let len = g.order();
        let mut entries = vec![vec![Rational::zero(); len]; n * n];
        for k in 0..len {
            for (j, &i) in g.raw(k).iter().enumerate() {
                entries[i as usize * n + j][k] = Rational::one();
            }
        }
        Self { n, len, entries }
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Rational] {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Vec<Rational>) {
        assert_eq!(v.len(), self.len, "entry length mismatch");
        self.entries[i * self.n + j] = v;
    }

    /// Idempotent entries; each row and column is a partition of the unit.
    pub fn is_magic_biunitary(&self) -> bool {
        let n = self.n;
        let idempotent = self.entries.iter().all(|e| e.iter().all(|x| x * x == *x));
        if !idempotent {
            return false;
        }
        let line_ok = |cells: Vec<&[Rational]>| {
            let sums_to_one = (0..self.len).all(|k| cells.iter().map(|c| &c[k]).sum::<Rational>().is_one());
            let orthogonal = cells.iter().enumerate().all(|(a, ca)| {
                cells[a + 1..].iter().all(|cb| ca.iter().zip(cb.iter()).all(|(x, y)| (x * y).is_zero()))
            });
            sums_to_one && orthogonal
        };
        (0..n).all(|i| line_ok((0..n).map(|j| self.entry(i, j)).collect()))
            && (0..n).all(|j| line_ok((0..n).map(|i| self.entry(i, j)).collect()))
    }
}

pub fn magic_biunitary_check(g: &PermutationGroup) -> bool {
    MagicMatrix::from_group(g).is_magic_biunitary()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_to_colored, cube, edgeless, ngon, parse_graph, rectangle, simplex, two_rectangles};
    use crate::measures::dihedral;
    use crate::series::rat;

    fn path3() -> PrecoloredGraph {
        parse_graph(r#"{"n":3,"classes":[{"name":"e","pairs":[[1,2],[2,3]]}]}"#).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(automorphism_group(&rectangle()).unwrap().order(), 4);
        assert_eq!(automorphism_group(&ngon(5).unwrap()).unwrap().order(), 10);
        assert_eq!(automorphism_group(&cube()).unwrap().order(), 48);
        assert_eq!(automorphism_group(&simplex(4)).unwrap().order(), 24);
        assert_eq!(automorphism_group(&two_rectangles()).unwrap().order(), 32);
        assert_eq!(
            automorphism_group(&simplex(11)),
            Err(Error::TooManyVertices { n: 11, max: 10 })
        );
    }

    #[test]
    fn groups_are_closed_and_sorted() {
        for g in [rectangle(), ngon(6).unwrap(), path3(), two_rectangles()] {
            let grp = automorphism_group(&g).unwrap();
            assert!(grp.is_closed());
            let elems: Vec<_> = grp.iter().collect();
            assert!(elems.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(grp.get(0), Permutation::identity(g.n()));
        }
    }

    #[test]
    fn homogeneity() {
        assert!(is_homogeneous(&ngon(7).unwrap()).unwrap());
        assert!(!is_homogeneous(&path3()).unwrap());
        assert!(is_homogeneous(&two_rectangles()).unwrap());
    }

    #[test]
    fn classical_measures() {
        let s3 = SignedAtomicMeasure::from_atoms([(int(0), rat(1, 3)), (int(1), rat(1, 2)), (int(3), rat(1, 6))]);
        assert_eq!(classical_spectral_measure(&simplex(3)).unwrap(), s3);
        let r = SignedAtomicMeasure::from_atoms([(int(0), rat(3, 4)), (int(4), rat(1, 4))]);
        assert_eq!(classical_spectral_measure(&rectangle()).unwrap(), r);
        let p5 = SignedAtomicMeasure::from_atoms([(int(0), rat(2, 5)), (int(1), rat(1, 2)), (int(5), rat(1, 10))]);
        assert_eq!(classical_spectral_measure(&ngon(5).unwrap()).unwrap(), p5);
        for m in [3u32, 5, 6, 7, 8] {
            let g = ngon(m as usize).unwrap();
            assert_eq!(classical_spectral_measure(&g).unwrap(), dihedral(m), "m = {m}");
        }
        let two = SignedAtomicMeasure::from_atoms([(int(0), rat(25, 32)), (int(4), rat(6, 32)), (int(8), rat(1, 32))]);
        assert_eq!(classical_spectral_measure(&two_rectangles()).unwrap(), two);
    }

    #[test]
    fn completion_preserves_automorphisms() {
        for g in [path3(), two_rectangles(), ngon(4).unwrap(), edgeless(3), cube()] {
            assert_eq!(
                automorphism_group(&g).unwrap(),
                automorphism_group(&complete_to_colored(&g)).unwrap()
            );
        }
    }

    #[test]
    fn magic() {
        for g in [rectangle(), ngon(5).unwrap(), simplex(4), cube()] {
            assert!(magic_biunitary_check(&automorphism_group(&g).unwrap()));
        }
        assert!(magic_biunitary_check(&automorphism_group(&simplex(1)).unwrap()));
        let cyc = Permutation::new(vec![1, 2, 3, 4, 0]).unwrap();
        let c5 = PermutationGroup::generated_by(5, &[cyc]);
        assert_eq!(c5.order(), 5);
        assert!(magic_biunitary_check(&c5));
        let mut m = MagicMatrix::from_group(&automorphism_group(&rectangle()).unwrap());
        m.set_entry(0, 0, vec![rat(1, 2); 4]);
        assert!(!m.is_magic_biunitary());
    }

    #[test]
    fn isomorphism_with_relabeling() {
        let renamed = parse_graph(
            r#"{"n":4,"classes":[{"name":"a","pairs":[[1,3],[2,4]]},{"name":"b","pairs":[[1,2],[3,4]]},{"name":"c","pairs":[[2,3],[1,4]]}]}"#,
        )
        .unwrap();
        assert!(find_isomorphism(&renamed, &rectangle(), false).is_none());
        let img = find_isomorphism(&renamed, &rectangle(), true).unwrap();
        assert_eq!(img.len(), 4);
        assert!(find_isomorphism(&ngon(4).unwrap(), &rectangle(), true).is_none());
        assert!(find_isomorphism(&path3(), &ngon(3).unwrap(), true).is_none());
    }

    #[test]
    fn permutation_basics() {
        assert!(Permutation::new(vec![0, 0]).is_none());
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
        assert_eq!(p.to_string(), "[2 3 1]");
        assert_eq!(p.fixed_points(), 0);
    }
}
