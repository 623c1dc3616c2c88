//! Tight r-tree recognition, enumeration up to isomorphism, and embedding
//! into the grid constructions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{enumerate_edges, ConstructionSpec, GridPoint, GridTables};

/// An r-uniform hypergraph on vertices `0..m`, edges stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct AbstractHypergraph {
    pub m: usize,
    pub edges: Vec<Vec<usize>>,
}

impl AbstractHypergraph {
    pub fn new(m: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        let mut r = None;
        for e in edges {
            let mut e: Vec<usize> = e;
            e.sort_unstable();
            e.dedup();
            if e.iter().any(|&v| v >= m) {
                return Err(Error::Parameter(format!("vertex out of range in {e:?}")));
            }
            match r {
                None => r = Some(e.len()),
                Some(r0) if r0 != e.len() => {
                    return Err(Error::Parameter("edges of mixed uniformity".into()))
                }
                _ => {}
            }
            norm.push(e);
        }
        norm.sort();
        norm.dedup();
        Ok(AbstractHypergraph { m, edges: norm })
    }

    pub fn r(&self) -> usize {
        self.edges.first().map_or(0, |e| e.len())
    }

    /// True iff no vertex lies in every edge.
    pub fn is_nontrivial(&self) -> bool {
        let Some(first) = self.edges.first() else {
            return false;
        };
        first
            .iter()
            .all(|v| !self.edges.iter().all(|e| e.contains(v)))
    }

    /// Minimal edge list over all relabelings of the vertices. Exact
    /// (brute force over permutations); the graphs here never exceed a
    /// handful of vertices.
    pub fn canonical_form(&self) -> Vec<Vec<usize>> {
        let mut best: Option<Vec<Vec<usize>>> = None;
        let mut perm: Vec<usize> = (0..self.m).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut mapped: Vec<Vec<usize>> = self
                .edges
                .iter()
                .map(|e| {
                    let mut img: Vec<usize> = e.iter().map(|&v| p[v]).collect();
                    img.sort_unstable();
                    img
                })
                .collect();
            mapped.sort();
            if best.as_ref().is_none_or(|b| mapped < *b) {
                best = Some(mapped);
            }
        });
        best.unwrap_or_default()
    }
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

impl fmt::Display for AbstractHypergraph {
    /// One edge per line, integer vertices separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            for (k, v) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Attachment {
    /// The vertex new to edge `ordering[i]`.
    pub new_vertex: usize,
    /// Position (into `ordering`) of the earlier edge containing the rest.
    pub host: usize,
}

/// An edge ordering certifying tight-tree-ness: each edge after the first is
/// one brand-new vertex plus an (r-1)-subset of an earlier edge.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TightTreeWitness {
    /// Indices into the hypergraph's edge list.
    pub ordering: Vec<usize>,
    /// One entry per edge from the second onward.
    pub attachments: Vec<Attachment>,
}

impl TightTreeWitness {
    pub fn verify(&self, h: &AbstractHypergraph) -> bool {
        if self.ordering.len() != h.edges.len()
            || self.attachments.len() + 1 != self.ordering.len()
        {
            return false;
        }
        let mut sorted = self.ordering.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != h.edges.len() || sorted.iter().any(|&e| e >= h.edges.len()) {
            return false;
        }
        let mut covered: Vec<usize> = h.edges[self.ordering[0]].clone();
        for (i, att) in self.attachments.iter().enumerate() {
            let e = &h.edges[self.ordering[i + 1]];
            if !e.contains(&att.new_vertex) || covered.contains(&att.new_vertex) {
                return false;
            }
            if att.host > i {
                return false;
            }
            let host = &h.edges[self.ordering[att.host]];
            if !e
                .iter()
                .all(|v| *v == att.new_vertex || host.contains(v))
            {
                return false;
            }
            // the recorded host shares exactly r-1 vertices with the edge
            debug_assert_eq!(
                e.iter().filter(|v| host.contains(v)).count(),
                e.len() - 1
            );
            covered.push(att.new_vertex);
        }
        true
    }
}

/// Finds a tight-tree edge ordering by backtracking over candidate next
/// edges, or None when the hypergraph is not a tight r-tree.
pub fn tight_order(h: &AbstractHypergraph) -> Option<TightTreeWitness> {
    let t = h.edges.len();
    if t == 0 {
        return None;
    }
    fn extend(
        h: &AbstractHypergraph,
        ordering: &mut Vec<usize>,
        attachments: &mut Vec<Attachment>,
        used: &mut Vec<bool>,
        covered: &mut Vec<bool>,
    ) -> bool {
        if ordering.len() == h.edges.len() {
            return true;
        }
        for (ei, e) in h.edges.iter().enumerate() {
            if used[ei] {
                continue;
            }
            let new: Vec<usize> = e.iter().copied().filter(|&v| !covered[v]).collect();
            let [v] = new[..] else { continue };
            let host = ordering.iter().position(|&s| {
                e.iter().all(|&w| w == v || h.edges[s].contains(&w))
            });
            let Some(host) = host else { continue };
            used[ei] = true;
            covered[v] = true;
            ordering.push(ei);
            attachments.push(Attachment { new_vertex: v, host });
            if extend(h, ordering, attachments, used, covered) {
                return true;
            }
            attachments.pop();
            ordering.pop();
            covered[v] = false;
            used[ei] = false;
        }
        false
    }
    for first in 0..t {
        let mut ordering = vec![first];
        let mut attachments = Vec::new();
        let mut used = vec![false; t];
        used[first] = true;
        let mut covered = vec![false; h.m];
        for &v in &h.edges[first] {
            covered[v] = true;
        }
        if extend(h, &mut ordering, &mut attachments, &mut used, &mut covered) {
            let w = TightTreeWitness { ordering, attachments };
            debug_assert!(w.verify(h));
            return Some(w);
        }
    }
    None
}

/// All tight r-trees with at most `t_max` edges, up to isomorphism, generated
/// by attaching a fresh vertex to each (r-1)-subset of each existing edge and
/// deduplicating by exact canonical form. Ordered by edge count, then by
/// canonical edge list.
pub fn enumerate_tight_trees(r: usize, t_max: usize) -> Result<Vec<AbstractHypergraph>> {
    if r < 2 {
        return Err(Error::Parameter(format!("uniformity r={r} must be >= 2")));
    }
    if t_max < 1 {
        return Err(Error::Parameter("t_max must be >= 1".into()));
    }
    let root = AbstractHypergraph::new(r, vec![(0..r).collect()])?;
    let mut all = Vec::new();
    let mut level: BTreeMap<Vec<Vec<usize>>, AbstractHypergraph> = BTreeMap::new();
    level.insert(root.canonical_form(), root);
    for _t in 1..=t_max {
        all.extend(level.values().cloned());
        if _t == t_max {
            break;
        }
        let mut next: BTreeMap<Vec<Vec<usize>>, AbstractHypergraph> = BTreeMap::new();
        for h in level.values() {
            let fresh = h.m;
            for e in &h.edges {
                for drop in 0..r {
                    let mut ne: Vec<usize> = e
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    ne.push(fresh);
                    let mut edges = h.edges.clone();
                    edges.push(ne);
                    let grown = AbstractHypergraph::new(fresh + 1, edges)?;
                    next.entry(grown.canonical_form()).or_insert(grown);
                }
            }
        }
        level = next;
    }
    Ok(all)
}

/// Attempts to embed a tight tree into the spec's hypergraph on `[n]^d`.
/// Follows the tight ordering so each step extends a known edge image by one
/// vertex; candidates come from precomputed codegree neighborhoods. Returns
/// the images of tree vertices `0..m`, or None.
pub fn embed(
    tree: &AbstractHypergraph,
    witness: &TightTreeWitness,
    spec: &ConstructionSpec,
    n: usize,
) -> Result<Option<Vec<GridPoint>>> {
    if tree.r() != spec.r() {
        return Err(Error::UniformityMismatch {
            tree_r: tree.r(),
            spec_r: spec.r(),
        });
    }
    if !witness.verify(tree) {
        return Err(Error::Parameter("witness does not certify the tree".into()));
    }
    let tables = GridTables::build(spec, n);
    let host_edges: Vec<Vec<u32>> = enumerate_edges(spec, n)
        .iter()
        .map(|e| e.vertices.iter().map(|v| tables.index(v)).collect())
        .collect();
    // (r-1)-subset of a host edge -> points completing it to a host edge
    let mut completions: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
    for e in &host_edges {
        for drop in 0..e.len() {
            let mut s = e.clone();
            let v = s.remove(drop);
            completions.entry(s).or_default().push(v);
        }
    }
    for c in completions.values_mut() {
        c.sort_unstable();
        c.dedup();
    }

    let r = spec.r();
    let mut image: Vec<Option<u32>> = vec![None; tree.m];
    let mut used: HashMap<u32, usize> = HashMap::new();

    fn place(
        tree: &AbstractHypergraph,
        witness: &TightTreeWitness,
        completions: &HashMap<Vec<u32>, Vec<u32>>,
        image: &mut Vec<Option<u32>>,
        used: &mut HashMap<u32, usize>,
        step: usize,
    ) -> bool {
        if step == witness.attachments.len() {
            return true;
        }
        let att = &witness.attachments[step];
        let e = &tree.edges[witness.ordering[step + 1]];
        let mut s: Vec<u32> = e
            .iter()
            .filter(|&&v| v != att.new_vertex)
            .map(|&v| image[v].expect("old vertices are mapped"))
            .collect();
        s.sort_unstable();
        if let Some(cands) = completions.get(&s) {
            for &q in cands {
                if used.contains_key(&q) {
                    continue;
                }
                image[att.new_vertex] = Some(q);
                used.insert(q, att.new_vertex);
                if place(tree, witness, completions, image, used, step + 1) {
                    return true;
                }
                used.remove(&q);
                image[att.new_vertex] = None;
            }
        }
        false
    }

    // root edge: every host edge, every assignment of its r vertices
    let root = &tree.edges[witness.ordering[0]];
    let mut perm: Vec<usize> = (0..r).collect();
    for host in &host_edges {
        let mut found = false;
        permute(&mut perm, 0, &mut |p| {
            if found {
                return;
            }
            for (k, &v) in root.iter().enumerate() {
                image[v] = Some(host[p[k]]);
                used.insert(host[p[k]], v);
            }
            if place(tree, witness, &completions, &mut image, &mut used, 0) {
                found = true;
                return;
            }
            for &v in root.iter() {
                let q = image[v].take().unwrap();
                used.remove(&q);
            }
        });
        if found {
            let result = image
                .iter()
                .map(|o| tables.point(o.expect("tight tree covers all vertices")))
                .collect();
            return Ok(Some(result));
        }
    }
    Ok(None)
}

/// Outcome of attempting to embed every non-trivial tight tree with at most
/// `t_max` edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeScanReport {
    pub spec: String,
    pub n: usize,
    pub t_max: usize,
    pub trees_total: usize,
    pub nontrivial_total: usize,
    /// Non-trivial trees that embed, with the vertex images. Expected empty
    /// for the paper's constructions.
    pub embeddings: Vec<(AbstractHypergraph, Vec<GridPoint>)>,
}

impl TreeScanReport {
    pub fn tree_free(&self) -> bool {
        self.embeddings.is_empty()
    }
}

pub fn scan_tree_freeness(
    spec: &ConstructionSpec,
    n: usize,
    t_max: usize,
) -> Result<TreeScanReport> {
    let trees = enumerate_tight_trees(spec.r(), t_max)?;
    let trees_total = trees.len();
    let nontrivial: Vec<&AbstractHypergraph> =
        trees.iter().filter(|t| t.is_nontrivial()).collect();
    let mut embeddings = Vec::new();
    for t in &nontrivial {
        let witness = tight_order(t).ok_or_else(|| {
            Error::Internal("enumerated tree rejected by tight_order".into())
        })?;
        if let Some(map) = embed(t, &witness, spec, n)? {
            embeddings.push(((*t).clone(), map));
        }
    }
    Ok(TreeScanReport {
        spec: spec.id(),
        n,
        t_max,
        trees_total,
        nontrivial_total: nontrivial.len(),
        embeddings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{h3_spec, h4_spec, is_edge, symmetric4_spec};

    fn hg(m: usize, edges: &[&[usize]]) -> AbstractHypergraph {
        AbstractHypergraph::new(m, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_edge_is_a_tight_tree() {
        let h = hg(3, &[&[0, 1, 2]]);
        let w = tight_order(&h).expect("single edge");
        assert_eq!(w.ordering.len(), 1);
        assert!(!h.is_nontrivial());
    }

    #[test]
    fn two_overlapping_edges_form_a_tight_tree() {
        let h = hg(4, &[&[0, 1, 2], &[0, 1, 3]]);
        let w = tight_order(&h).expect("two edges sharing r-1 vertices");
        assert!(w.verify(&h));
    }

    #[test]
    fn triangle_is_not_a_tight_tree() {
        // 2-uniform: 3 edges on 3 vertices, one vertex short of a tree
        let h = hg(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(tight_order(&h).is_none());
    }

    #[test]
    fn trivial_and_nontrivial_examples() {
        assert!(!hg(5, &[&[0, 1, 2], &[0, 1, 3], &[1, 2, 4]]).is_nontrivial());
        let h = hg(6, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 4], &[1, 2, 5]]);
        assert!(h.is_nontrivial());
        assert!(tight_order(&h).is_some());
    }

    #[test]
    fn enumeration_counts_r3() {
        // frozen from a brute-force generate-and-canonicalize oracle
        assert_eq!(enumerate_tight_trees(3, 1).unwrap().len(), 1);
        assert_eq!(enumerate_tight_trees(3, 2).unwrap().len(), 2); // t=1 and t=2
        let by_t = |t: usize| {
            enumerate_tight_trees(3, t)
                .unwrap()
                .into_iter()
                .filter(|h| h.edges.len() == t)
                .collect::<Vec<_>>()
        };
        assert_eq!(by_t(2).len(), 1);
        assert_eq!(by_t(3).len(), 2);
        assert_eq!(by_t(4).len(), 5);
        // the minimal non-trivial tight 3-tree has exactly 4 edges
        assert!(by_t(2).iter().chain(&by_t(3)).all(|h| !h.is_nontrivial()));
        assert_eq!(by_t(4).iter().filter(|h| h.is_nontrivial()).count(), 2);
    }

    #[test]
    fn enumeration_counts_r4() {
        let trees = enumerate_tight_trees(4, 4).unwrap();
        let counts: Vec<usize> = (1..=4)
            .map(|t| trees.iter().filter(|h| h.edges.len() == t).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5]);
        // no non-trivial tight 4-tree exists with 4 or fewer edges
        assert!(trees.iter().all(|h| !h.is_nontrivial()));
    }

    #[test]
    fn enumerated_trees_round_trip_through_tight_order() {
        for r in [3, 4] {
            for h in enumerate_tight_trees(r, 4).unwrap() {
                let w = tight_order(&h).expect("enumerated tree must be a tight tree");
                assert!(w.verify(&h));
                // t edges, r + t - 1 vertices
                assert_eq!(h.m, r + h.edges.len() - 1);
            }
        }
    }

    #[test]
    fn dedup_cross_check_small() {
        // without dedup, growing one step from the single 3-edge yields 3
        // attachments, all isomorphic to the unique 2-edge tree
        let trees = enumerate_tight_trees(3, 2).unwrap();
        assert_eq!(trees.iter().filter(|h| h.edges.len() == 2).count(), 1);
    }

    #[test]
    fn embed_two_edge_tree_into_h3() {
        let h = hg(4, &[&[0, 1, 2], &[0, 1, 3]]);
        let w = tight_order(&h).unwrap();
        let img = embed(&h, &w, &h3_spec(), 3)
            .unwrap()
            .expect("two Ls sharing a pair embed");
        // image edges are edges of the host, injectively
        let mut distinct = img.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 4);
        for e in &h.edges {
            let pts: Vec<_> = e.iter().map(|&v| img[v].clone()).collect();
            assert!(is_edge(&h3_spec(), &pts).unwrap().is_some());
        }
    }

    #[test]
    fn embedded_trivial_trees_share_a_center() {
        // cross-validates the shared-center fact against embeddability
        for (spec, n) in [(h3_spec(), 3), (h4_spec(), 3)] {
            for tree in enumerate_tight_trees(spec.r(), 3).unwrap() {
                if tree.is_nontrivial() {
                    continue;
                }
                let w = tight_order(&tree).unwrap();
                if let Some(img) = embed(&tree, &w, &spec, n).unwrap() {
                    let mut shared: Option<Vec<GridPoint>> = None;
                    for e in &tree.edges {
                        let pts: Vec<_> = e.iter().map(|&v| img[v].clone()).collect();
                        let he = is_edge(&spec, &pts).unwrap().unwrap();
                        shared = Some(match shared {
                            None => he.centers,
                            Some(prev) => prev
                                .into_iter()
                                .filter(|c| he.centers.contains(c))
                                .collect(),
                        });
                    }
                    assert!(!shared.unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn nontrivial_tight_3_trees_do_not_embed_into_h3() {
        let report = scan_tree_freeness(&h3_spec(), 5, 4).unwrap();
        assert_eq!(report.nontrivial_total, 2);
        assert!(report.tree_free());
    }

    #[test]
    fn h4_scan_is_vacuous_up_to_four_edges() {
        let report = scan_tree_freeness(&h4_spec(), 3, 4).unwrap();
        assert_eq!(report.nontrivial_total, 0);
        assert!(report.tree_free());
    }

    #[test]
    fn symmetric_variant_two_edge_trees_are_trivial() {
        let report = scan_tree_freeness(&symmetric4_spec(), 3, 2).unwrap();
        assert_eq!(report.nontrivial_total, 0);
        assert!(report.tree_free());
        // yet 2-edge trees do embed (shared-center pairs exist)
        let trees = enumerate_tight_trees(4, 2).unwrap();
        let two = trees.iter().find(|h| h.edges.len() == 2).unwrap();
        let w = tight_order(two).unwrap();
        assert!(embed(two, &w, &symmetric4_spec(), 3).unwrap().is_some());
    }

    #[test]
    fn embed_rejects_mismatched_uniformity() {
        let h = hg(3, &[&[0, 1, 2]]);
        let w = tight_order(&h).unwrap();
        assert!(matches!(
            embed(&h, &w, &h4_spec(), 2),
            Err(Error::UniformityMismatch { .. })
        ));
    }
}
