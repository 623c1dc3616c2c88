//! Grid points, signed lexicographic orders, fixed-coordinate digraphs and the
//! generic center-based edge rule that instantiates the 3- and 4-uniform grid
//! constructions (and their generalizations).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Coord = u8;

/// A point of `[n]^d`, coordinates 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint(SmallVec<[Coord; 4]>);

impl GridPoint {
    pub fn new(coords: &[Coord]) -> Self {
        GridPoint(SmallVec::from_slice(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The i-th coordinate, 1-based.
    pub fn coord(&self, i: usize) -> Coord {
        self.0[i - 1]
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GridPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected point like (1,2), got `{s}`")))?;
        let coords = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Coord>()
                    .map_err(|e| Error::Parse(format!("bad coordinate `{t}`: {e}")))
            })
            .collect::<Result<SmallVec<[Coord; 4]>>>()?;
        if coords.is_empty() {
            return Err(Error::Parse(format!("empty point `{s}`")));
        }
        Ok(GridPoint(coords))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Asc,
    Desc,
}

/// A permutation of coordinate indices with a direction per index; compares
/// tuples restricted to those indices as a strict total order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SignedLexOrder {
    /// 1-based coordinate indices, each appearing exactly once.
    pub perm: Vec<u8>,
    pub signs: Vec<Sign>,
}

impl SignedLexOrder {
    pub fn new(perm: Vec<u8>, signs: Vec<Sign>) -> Result<Self> {
        if perm.len() != signs.len() {
            return Err(Error::MalformedOrder(format!(
                "perm has {} indices but {} signs",
                perm.len(),
                signs.len()
            )));
        }
        let mut seen = perm.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != perm.len() {
            return Err(Error::MalformedOrder("repeated index in perm".into()));
        }
        if perm.contains(&0) {
            return Err(Error::MalformedOrder("indices are 1-based".into()));
        }
        Ok(SignedLexOrder { perm, signs })
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        for &i in &self.perm {
            if i as usize > dim {
                return Err(Error::IndexOutOfRange {
                    index: i as usize,
                    dim,
                });
            }
        }
        Ok(())
    }

    /// Compact text form, e.g. `+2-3` for perm [2,3], signs [asc,desc].
    pub fn encode(&self) -> String {
        let mut s = String::new();
        for (i, sg) in self.perm.iter().zip(&self.signs) {
            s.push(match sg {
                Sign::Asc => '+',
                Sign::Desc => '-',
            });
            s.push_str(&i.to_string());
        }
        s
    }

    pub fn decode(s: &str) -> Result<Self> {
        let mut perm = Vec::new();
        let mut signs = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let sign = match c {
                '+' => Sign::Asc,
                '-' => Sign::Desc,
                _ => return Err(Error::MalformedOrder(format!("expected sign in `{s}`"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let idx: u8 = digits
                .parse()
                .map_err(|_| Error::MalformedOrder(format!("missing index in `{s}`")))?;
            perm.push(idx);
            signs.push(sign);
        }
        SignedLexOrder::new(perm, signs)
    }
}

/// The first non-tied comparison along the order's permutation; descending
/// indices compare reversed (larger coordinate precedes).
pub fn signed_lex_compare(a: &GridPoint, b: &GridPoint, order: &SignedLexOrder) -> Result<Ordering> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    order.check_dim(a.dim())?;
    for (&i, &sign) in order.perm.iter().zip(&order.signs) {
        let (x, y) = (a.coord(i as usize), b.coord(i as usize));
        let cmp = match sign {
            Sign::Asc => x.cmp(&y),
            Sign::Desc => y.cmp(&x),
        };
        if cmp != Ordering::Equal {
            return Ok(cmp);
        }
    }
    Ok(Ordering::Equal)
}

/// One fixed-coordinate digraph: arcs between points agreeing in
/// `fixed_index`, oriented by a signed lexicographic order on the rest.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinkDigraphSpec {
    /// 1-based coordinate index held fixed.
    pub fixed_index: u8,
    pub order: SignedLexOrder,
}

impl LinkDigraphSpec {
    pub fn new(fixed_index: u8, order: SignedLexOrder) -> Result<Self> {
        if order.perm.contains(&fixed_index) {
            return Err(Error::MalformedOrder(format!(
                "fixed index {fixed_index} appears in the order"
            )));
        }
        Ok(LinkDigraphSpec { fixed_index, order })
    }
}

/// Uniformity r, dimension d = r-1, and one link digraph per coordinate;
/// fully determines a hypergraph family over all grid sizes n.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConstructionSpec {
    r: usize,
    links: Vec<LinkDigraphSpec>,
}

impl ConstructionSpec {
    pub fn new(r: usize, links: Vec<LinkDigraphSpec>) -> Result<Self> {
        if r < 3 {
            return Err(Error::Parameter(format!("uniformity r={r} must be >= 3")));
        }
        if links.len() != r - 1 {
            return Err(Error::MalformedTuple(format!(
                "expected {} links for r={r}, got {}",
                r - 1,
                links.len()
            )));
        }
        for (i, link) in links.iter().enumerate() {
            if link.fixed_index as usize != i + 1 {
                return Err(Error::MalformedTuple(format!(
                    "link {} must fix coordinate {}, fixes {}",
                    i + 1,
                    i + 1,
                    link.fixed_index
                )));
            }
            link.order.check_dim(r - 1)?;
            let mut idx: Vec<u8> = link.order.perm.clone();
            idx.push(link.fixed_index);
            idx.sort_unstable();
            let expected: Vec<u8> = (1..r as u8).collect();
            if idx != expected {
                return Err(Error::MalformedTuple(format!(
                    "link {} order must cover all indices except {}",
                    i + 1,
                    link.fixed_index
                )));
            }
        }
        Ok(ConstructionSpec { r, links })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Dimension of the ambient grid, d = r - 1.
    pub fn dim(&self) -> usize {
        self.r - 1
    }

    pub fn links(&self) -> &[LinkDigraphSpec] {
        &self.links
    }

    /// Stable textual id: `h3`, `h4`, `sym4`, or `general:<r>:<orders>`.
    pub fn id(&self) -> String {
        if *self == h3_spec() {
            "h3".into()
        } else if *self == h4_spec() {
            "h4".into()
        } else if *self == symmetric4_spec() {
            "sym4".into()
        } else {
            let orders: Vec<String> = self.links.iter().map(|l| l.order.encode()).collect();
            format!("general:{}:{}", self.r, orders.join(";"))
        }
    }

    pub fn parse_id(s: &str) -> Result<ConstructionSpec> {
        match s {
            "h3" => return Ok(h3_spec()),
            "h4" => return Ok(h4_spec()),
            "sym4" => return Ok(symmetric4_spec()),
            _ => {}
        }
        let rest = s
            .strip_prefix("general:")
            .ok_or_else(|| Error::UnknownSpec(s.into()))?;
        let (r_str, orders_str) = rest
            .split_once(':')
            .ok_or_else(|| Error::UnknownSpec(s.into()))?;
        let r: usize = r_str
            .parse()
            .map_err(|_| Error::UnknownSpec(s.into()))?;
        let orders = orders_str
            .split(';')
            .map(SignedLexOrder::decode)
            .collect::<Result<Vec<_>>>()?;
        let links = orders
            .into_iter()
            .enumerate()
            .map(|(i, o)| LinkDigraphSpec::new(i as u8 + 1, o))
            .collect::<Result<Vec<_>>>()?;
        ConstructionSpec::new(r, links)
    }
}

fn order(perm: &[u8], signs: &[Sign]) -> SignedLexOrder {
    SignedLexOrder::new(perm.to_vec(), signs.to_vec()).unwrap()
}

fn link(fixed: u8, perm: &[u8], signs: &[Sign]) -> LinkDigraphSpec {
    LinkDigraphSpec::new(fixed, order(perm, signs)).unwrap()
}

use Sign::{Asc, Desc};

/// The 3-uniform L-shape construction on `[n]^2`: the center's column-mate
/// lies above it and its row-mate to the right.
pub fn h3_spec() -> ConstructionSpec {
    ConstructionSpec::new(3, vec![link(1, &[2], &[Asc]), link(2, &[1], &[Asc])]).unwrap()
}

/// The 4-uniform construction on `[n]^3`.
pub fn h4_spec() -> ConstructionSpec {
    ConstructionSpec::new(
        4,
        vec![
            link(1, &[2, 3], &[Asc, Desc]),
            link(2, &[1, 3], &[Asc, Asc]),
            link(3, &[2, 1], &[Desc, Desc]),
        ],
    )
    .unwrap()
}

/// The symmetric 4-uniform variant whose center-uniqueness fails.
pub fn symmetric4_spec() -> ConstructionSpec {
    ConstructionSpec::new(
        4,
        vec![
            link(1, &[2, 3], &[Asc, Desc]),
            link(2, &[3, 1], &[Asc, Desc]),
            link(3, &[1, 2], &[Asc, Desc]),
        ],
    )
    .unwrap()
}

/// True iff p != q, p and q agree in coordinate `link_index`, and p precedes q
/// under that link's order. `link_index` is 1-based.
pub fn t_edge(link_index: usize, p: &GridPoint, q: &GridPoint, spec: &ConstructionSpec) -> Result<bool> {
    if link_index == 0 || link_index > spec.dim() {
        return Err(Error::InvalidLink {
            index: link_index,
            r: spec.r,
        });
    }
    if p.dim() != spec.dim() || q.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: if p.dim() != spec.dim() { p.dim() } else { q.dim() },
        });
    }
    let l = &spec.links[link_index - 1];
    if p.coord(l.fixed_index as usize) != q.coord(l.fixed_index as usize) {
        return Ok(false);
    }
    Ok(signed_lex_compare(p, q, &l.order)? == Ordering::Less)
}

/// A set of r grid points together with every vertex that admits a valid
/// center labeling. Vertices and centers are kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct HyperEdge {
    pub vertices: Vec<GridPoint>,
    pub centers: Vec<GridPoint>,
}

impl fmt::Display for HyperEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if self.centers.contains(v) {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Decides edge membership for an explicit r-set of points, returning the full
/// set of valid centers. A center is valid when the remaining points can be
/// matched one-to-one to the links (each point an out-neighbor through its
/// assigned link).
pub fn is_edge(spec: &ConstructionSpec, pts: &[GridPoint]) -> Result<Option<HyperEdge>> {
    let mut vertices: Vec<GridPoint> = pts.to_vec();
    vertices.sort();
    vertices.dedup();
    if vertices.len() != spec.r {
        return Err(Error::WrongCardinality {
            expected: spec.r,
            got: vertices.len(),
        });
    }
    for v in &vertices {
        if v.dim() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                got: v.dim(),
            });
        }
    }
    let d = spec.dim();
    let mut centers = Vec::new();
    for c in &vertices {
        let rest: Vec<&GridPoint> = vertices.iter().filter(|v| *v != c).collect();
        // adjacency[point][link]
        let mut adj = vec![[false; 8]; d];
        for (pi, p) in rest.iter().enumerate() {
            for li in 1..=d {
                adj[pi][li - 1] = t_edge(li, c, p, spec)?;
            }
        }
        if perfect_matching(&adj, d) {
            centers.push(c.clone());
        }
    }
    if centers.is_empty() {
        Ok(None)
    } else {
        Ok(Some(HyperEdge { vertices, centers }))
    }
}

/// Backtracking perfect matching between d points and d links (d is tiny).
fn perfect_matching(adj: &[[bool; 8]], d: usize) -> bool {
    fn go(adj: &[[bool; 8]], d: usize, pi: usize, used: &mut [bool; 8]) -> bool {
        if pi == d {
            return true;
        }
        for li in 0..d {
            if adj[pi][li] && !used[li] {
                used[li] = true;
                if go(adj, d, pi + 1, used) {
                    return true;
                }
                used[li] = false;
            }
        }
        false
    }
    let mut used = [false; 8];
    go(adj, d, 0, &mut used)
}

/// Precomputed out-neighbor tables for one spec on one grid size, indexing
/// points by their lexicographic rank. Drives all center-first enumeration.
pub struct GridTables {
    pub n: usize,
    pub d: usize,
    pub num_points: usize,
    /// out[link][point] = out-neighbor indices, ascending.
    out: Vec<Vec<Vec<u32>>>,
}

impl GridTables {
    pub fn build(spec: &ConstructionSpec, n: usize) -> GridTables {
        let d = spec.dim();
        let num_points = n.pow(d as u32);
        // Signed lex keys: within a fixed-coordinate class, p precedes q iff
        // key(p) < key(q).
        let mut keys = vec![vec![0u64; num_points]; d];
        let mut coords = vec![0u8; d];
        #[allow(clippy::needless_range_loop)]
        for idx in 0..num_points {
            decode_point(idx, n, d, &mut coords);
            for (li, l) in spec.links().iter().enumerate() {
                let mut key = 0u64;
                for (&i, &sign) in l.order.perm.iter().zip(&l.order.signs) {
                    let c = coords[i as usize - 1] as u64;
                    let v = match sign {
                        Sign::Asc => c,
                        Sign::Desc => n as u64 + 1 - c,
                    };
                    key = key * (n as u64 + 1) + v;
                }
                keys[li][idx] = key;
            }
        }
        let mut out = vec![vec![Vec::new(); num_points]; d];
        for (li, l) in spec.links().iter().enumerate() {
            let fixed = l.fixed_index as usize;
            // group points by the fixed coordinate
            let mut classes: BTreeMap<u8, Vec<u32>> = BTreeMap::new();
            for idx in 0..num_points {
                decode_point(idx, n, d, &mut coords);
                classes.entry(coords[fixed - 1]).or_default().push(idx as u32);
            }
            for class in classes.values() {
                for &p in class {
                    let kp = keys[li][p as usize];
                    let nbrs: Vec<u32> = class
                        .iter()
                        .copied()
                        .filter(|&q| keys[li][q as usize] > kp)
                        .collect();
                    out[li][p as usize] = nbrs;
                }
            }
        }
        GridTables { n, d, num_points, out }
    }

    pub fn point(&self, idx: u32) -> GridPoint {
        let mut coords = vec![0u8; self.d];
        decode_point(idx as usize, self.n, self.d, &mut coords);
        GridPoint::new(&coords)
    }

    pub fn index(&self, p: &GridPoint) -> u32 {
        let mut idx = 0usize;
        for &c in p.coords() {
            idx = idx * self.n + (c as usize - 1);
        }
        idx as u32
    }

    pub fn out_neighbors(&self, link_index: usize, point: u32) -> &[u32] {
        &self.out[link_index - 1][point as usize]
    }

    /// Visits every center labeling (center, one distinct out-neighbor per
    /// link) in deterministic order: centers ascending, neighbor tuples in
    /// lexicographic index order. The same vertex set may be visited more
    /// than once (different centers or different matchings).
    pub fn for_each_labeling<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(u32, &[u32]) -> ControlFlow<()>,
    {
        let mut chosen = vec![0u32; self.d];
        for c in 0..self.num_points as u32 {
            self.labelings_from(c, 0, &mut chosen, &mut f)?;
        }
        ControlFlow::Continue(())
    }

    /// As `for_each_labeling` but with every vertex restricted to `allowed`.
    pub fn for_each_labeling_within<F>(&self, allowed: &[bool], mut f: F) -> ControlFlow<()>
    where
        F: FnMut(u32, &[u32]) -> ControlFlow<()>,
    {
        debug_assert_eq!(allowed.len(), self.num_points);
        let mut chosen = vec![0u32; self.d];
        for c in 0..self.num_points as u32 {
            if !allowed[c as usize] {
                continue;
            }
            self.labelings_within_from(c, 0, allowed, &mut chosen, &mut f)?;
        }
        ControlFlow::Continue(())
    }

    fn labelings_from<F>(&self, c: u32, li: usize, chosen: &mut [u32], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(u32, &[u32]) -> ControlFlow<()>,
    {
        if li == self.d {
            return f(c, chosen);
        }
        for &q in &self.out[li][c as usize] {
            if chosen[..li].contains(&q) {
                continue;
            }
            chosen[li] = q;
            self.labelings_from(c, li + 1, chosen, f)?;
        }
        ControlFlow::Continue(())
    }

    fn labelings_within_from<F>(
        &self,
        c: u32,
        li: usize,
        allowed: &[bool],
        chosen: &mut [u32],
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(u32, &[u32]) -> ControlFlow<()>,
    {
        if li == self.d {
            return f(c, chosen);
        }
        for &q in &self.out[li][c as usize] {
            if !allowed[q as usize] || chosen[..li].contains(&q) {
                continue;
            }
            chosen[li] = q;
            self.labelings_within_from(c, li + 1, allowed, chosen, f)?;
        }
        ControlFlow::Continue(())
    }
}

fn decode_point(mut idx: usize, n: usize, d: usize, coords: &mut [u8]) {
    for k in (0..d).rev() {
        coords[k] = (idx % n) as u8 + 1;
        idx /= n;
    }
}

/// All edges of the spec's hypergraph on `[n]^d`, deduplicated by vertex set
/// and ordered lexicographically by sorted vertex list, centers populated.
pub fn enumerate_edges(spec: &ConstructionSpec, n: usize) -> Vec<HyperEdge> {
    let tables = GridTables::build(spec, n);
    enumerate_edges_from_tables(&tables)
}

pub fn enumerate_edges_from_tables(tables: &GridTables) -> Vec<HyperEdge> {
    let mut map: BTreeMap<Vec<u32>, BTreeSet<u32>> = BTreeMap::new();
    let _ = tables.for_each_labeling(|c, qs| {
        let mut vs: Vec<u32> = Vec::with_capacity(tables.d + 1);
        vs.push(c);
        vs.extend_from_slice(qs);
        vs.sort_unstable();
        map.entry(vs).or_default().insert(c);
        ControlFlow::Continue(())
    });
    map.into_iter()
        .map(|(vs, cs)| HyperEdge {
            vertices: vs.iter().map(|&i| tables.point(i)).collect(),
            centers: cs.iter().map(|&i| tables.point(i)).collect(),
        })
        .collect()
}

// --- edge-list text format -------------------------------------------------

/// One edge per line, vertices sorted, centers marked with a leading `*`.
pub fn write_edge_list<W: std::io::Write>(edges: &[HyperEdge], mut w: W) -> Result<()> {
    for e in edges {
        writeln!(w, "{e}")?;
    }
    Ok(())
}

pub fn parse_edge_list(text: &str) -> Result<Vec<HyperEdge>> {
    let mut edges = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut vertices = Vec::new();
        let mut centers = Vec::new();
        for tok in line.split_whitespace() {
            let (is_center, rest) = match tok.strip_prefix('*') {
                Some(r) => (true, r),
                None => (false, tok),
            };
            let p: GridPoint = rest.parse()?;
            if is_center {
                centers.push(p.clone());
            }
            vertices.push(p);
        }
        vertices.sort();
        centers.sort();
        edges.push(HyperEdge { vertices, centers });
    }
    Ok(edges)
}
