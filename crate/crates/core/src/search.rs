//! Exhaustive search over the generalized construction family: every tuple of
//! signed lexicographic orders defines a candidate construction, which is
//! tested for the center-uniqueness property on an escalating grid schedule.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{find_center_violation, ViolationCertificate};
use crate::error::{Error, Result};
use crate::grid::{ConstructionSpec, GridPoint, LinkDigraphSpec, Sign, SignedLexOrder};

/// All `2^k * k!` signed lexicographic orders over the given (distinct)
/// indices: permutations in lexicographic order, signs as a binary counter
/// (all-ascending first, last position flipping fastest).
pub fn all_signed_lex_orders(indices: &[u8]) -> Result<Vec<SignedLexOrder>> {
    if indices.is_empty() {
        return Err(Error::Parameter("empty index set".into()));
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != indices.len() {
        return Err(Error::Parameter("repeated coordinate index".into()));
    }
    let k = sorted.len();
    let mut perms = Vec::new();
    lex_permutations(&sorted, &mut vec![], &mut vec![false; k], &mut perms);
    let mut orders = Vec::with_capacity(perms.len() << k);
    for perm in &perms {
        for mask in 0..(1u32 << k) {
            let signs: Vec<Sign> = (0..k)
                .map(|j| {
                    if mask >> (k - 1 - j) & 1 == 0 {
                        Sign::Asc
                    } else {
                        Sign::Desc
                    }
                })
                .collect();
            orders.push(SignedLexOrder::new(perm.clone(), signs)?);
        }
    }
    Ok(orders)
}

fn lex_permutations(items: &[u8], cur: &mut Vec<u8>, used: &mut [bool], acc: &mut Vec<Vec<u8>>) {
    if cur.len() == items.len() {
        acc.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            lex_permutations(items, cur, used, acc);
            cur.pop();
            used[i] = false;
        }
    }
}

/// The per-link order menus for uniformity r, plus tuple indexing: link 1 is
/// the most significant digit.
pub struct OrderFamily {
    pub r: usize,
    pub per_link: Vec<Vec<SignedLexOrder>>,
    lookup: Vec<HashMap<String, usize>>,
}

impl OrderFamily {
    pub fn new(r: usize) -> Result<OrderFamily> {
        if r < 3 {
            return Err(Error::Parameter(format!("uniformity r={r} must be >= 3")));
        }
        let d = r - 1;
        let mut per_link = Vec::with_capacity(d);
        for i in 1..=d as u8 {
            let rest: Vec<u8> = (1..=d as u8).filter(|&j| j != i).collect();
            per_link.push(all_signed_lex_orders(&rest)?);
        }
        let lookup = per_link
            .iter()
            .map(|orders| {
                orders
                    .iter()
                    .enumerate()
                    .map(|(k, o)| (o.encode(), k))
                    .collect()
            })
            .collect();
        Ok(OrderFamily { r, per_link, lookup })
    }

    pub fn options_per_link(&self) -> u64 {
        self.per_link[0].len() as u64
    }

    pub fn tuple_count(&self) -> u64 {
        self.options_per_link().pow((self.r - 1) as u32)
    }

    pub fn decode(&self, mut index: u64) -> Result<Vec<SignedLexOrder>> {
        if index >= self.tuple_count() {
            return Err(Error::Parameter(format!("tuple index {index} out of range")));
        }
        let d = self.r - 1;
        let base = self.options_per_link();
        let mut digits = vec![0u64; d];
        for k in (0..d).rev() {
            digits[k] = index % base;
            index /= base;
        }
        Ok(digits
            .iter()
            .enumerate()
            .map(|(i, &k)| self.per_link[i][k as usize].clone())
            .collect())
    }

    pub fn encode(&self, orders: &[SignedLexOrder]) -> Result<u64> {
        if orders.len() != self.r - 1 {
            return Err(Error::MalformedTuple(format!(
                "expected {} orders, got {}",
                self.r - 1,
                orders.len()
            )));
        }
        let base = self.options_per_link();
        let mut index = 0u64;
        for (i, o) in orders.iter().enumerate() {
            let k = self.lookup[i]
                .get(&o.encode())
                .ok_or_else(|| Error::MalformedTuple(format!("order {} not in link {} menu", o.encode(), i + 1)))?;
            index = index * base + *k as u64;
        }
        Ok(index)
    }

    /// Orbit of a tuple under simultaneous coordinate relabeling: permuting
    /// the coordinates by sigma renames link i to sigma(i) and relabels the
    /// indices inside every order.
    pub fn orbit(&self, index: u64) -> Result<Vec<u64>> {
        let d = self.r - 1;
        let orders = self.decode(index)?;
        let mut sigmas = Vec::new();
        let ids: Vec<u8> = (1..=d as u8).collect();
        lex_permutations(&ids, &mut vec![], &mut vec![false; d], &mut sigmas);
        let mut orbit = Vec::with_capacity(sigmas.len());
        for sigma in &sigmas {
            let map = |i: u8| sigma[i as usize - 1];
            let mut new_orders: Vec<Option<SignedLexOrder>> = vec![None; d];
            for (i, o) in orders.iter().enumerate() {
                let new_link = map(i as u8 + 1) as usize;
                let perm: Vec<u8> = o.perm.iter().map(|&j| map(j)).collect();
                new_orders[new_link - 1] = Some(SignedLexOrder::new(perm, o.signs.clone())?);
            }
            let new_orders: Vec<SignedLexOrder> = new_orders.into_iter().map(|o| o.unwrap()).collect();
            orbit.push(self.encode(&new_orders)?);
        }
        orbit.sort_unstable();
        orbit.dedup();
        Ok(orbit)
    }
}

/// Apply the coordinate relabeling sigma (1-based, sigma[i-1] = image of i)
/// to a point: coordinate sigma(i) of the image equals coordinate i.
fn relabel_point(p: &GridPoint, sigma: &[u8]) -> GridPoint {
    let mut coords = vec![0u8; p.dim()];
    for i in 1..=p.dim() {
        coords[sigma[i - 1] as usize - 1] = p.coord(i);
    }
    GridPoint::new(&coords)
}

/// Builds the construction whose link i fixes coordinate i with the i-th
/// order of the tuple.
pub fn build_general_spec(r: usize, orders: Vec<SignedLexOrder>) -> Result<ConstructionSpec> {
    if orders.len() != r.saturating_sub(1) {
        return Err(Error::MalformedTuple(format!(
            "expected {} orders for r={r}, got {}",
            r - 1,
            orders.len()
        )));
    }
    let links = orders
        .into_iter()
        .enumerate()
        .map(|(i, o)| LinkDigraphSpec::new(i as u8 + 1, o))
        .collect::<Result<Vec<_>>>()?;
    ConstructionSpec::new(r, links)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Fail,
    /// No violation up to n_max; no finite grid proves the property for
    /// all n, so this is never reported as a definite pass.
    InconclusivePass,
}

/// One line of the search output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchRecord {
    pub tuple_index: u64,
    pub orders: Vec<String>,
    pub result: SearchStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ViolationCertificate>,
}

/// Tests one tuple on grids n = 2, 3, ..., n_max with early exit on the
/// first violation (pairwise distinct centers or a multi-center edge).
pub fn check_tuple(family: &OrderFamily, index: u64, n_max: usize) -> Result<SearchRecord> {
    let orders = family.decode(index)?;
    let spec = build_general_spec(family.r, orders.clone())?;
    let order_strs: Vec<String> = orders.iter().map(|o| o.encode()).collect();
    for n in 2..=n_max {
        if let Some(cert) = find_center_violation(&spec, n) {
            return Ok(SearchRecord {
                tuple_index: index,
                orders: order_strs,
                result: SearchStatus::Fail,
                violating_n: Some(n),
                certificate: Some(cert),
            });
        }
    }
    Ok(SearchRecord {
        tuple_index: index,
        orders: order_strs,
        result: SearchStatus::InconclusivePass,
        violating_n: None,
        certificate: None,
    })
}

/// Checks the listed tuples, in parallel when the `parallel` feature is on.
/// Results are returned in input order regardless of thread count.
pub fn run_tuples(family: &OrderFamily, indices: &[u64], n_max: usize) -> Result<Vec<SearchRecord>> {
    crate::map_indexed(indices.len(), |k| check_tuple(family, indices[k], n_max))
        .into_iter()
        .collect()
}

/// Sequential twin of [`run_tuples`], for benchmarking.
pub fn run_tuples_seq(
    family: &OrderFamily,
    indices: &[u64],
    n_max: usize,
) -> Result<Vec<SearchRecord>> {
    crate::map_indexed_seq(indices.len(), |k| check_tuple(family, indices[k], n_max))
        .into_iter()
        .collect()
}

/// Seeded uniform sample of `k` distinct tuple indices, ascending.
pub fn sample_indices(total: u64, k: usize, seed: u64) -> Vec<u64> {
    if k as u64 >= total {
        return (0..total).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = std::collections::BTreeSet::new();
    while chosen.len() < k {
        chosen.insert(rng.gen_range(0..total));
    }
    chosen.into_iter().collect()
}

pub const CHECKPOINT_INTERVAL: usize = 1 << 16;

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    r: usize,
    n_max: usize,
    total: usize,
    completed: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchSummary {
    pub total: usize,
    pub fails: usize,
    pub inconclusive: usize,
    /// histogram: smallest violating n -> tuple count
    pub fails_by_n: std::collections::BTreeMap<usize, usize>,
}

/// Runs the search over an explicit index list, streaming JSON lines to
/// `out`. With a checkpoint path, progress is saved every
/// [`CHECKPOINT_INTERVAL`] tuples and a matching prior run resumes where it
/// stopped (the caller appends to the same output file). With
/// `symmetry_reduction`, only orbit minima under simultaneous coordinate
/// relabeling are computed; other orbit members get the representative's
/// result with the certificate relabeled accordingly.
pub fn search_center_property<W: Write>(
    family: &OrderFamily,
    indices: &[u64],
    n_max: usize,
    out: &mut W,
    checkpoint: Option<&Path>,
    symmetry_reduction: bool,
) -> Result<SearchSummary> {
    if n_max < 2 {
        return Err(Error::Parameter("n_max must be >= 2".into()));
    }
    let mut start = 0usize;
    if let Some(cp) = checkpoint {
        if cp.exists() {
            let prev: Checkpoint = serde_json::from_str(&std::fs::read_to_string(cp)?)?;
            if prev.r != family.r || prev.n_max != n_max || prev.total != indices.len() {
                return Err(Error::Parameter(
                    "checkpoint does not match this search configuration".into(),
                ));
            }
            start = prev.completed;
        }
    }
    let mut summary = SearchSummary::default();
    let mut done = start;
    let mut cache: HashMap<u64, SearchRecord> = HashMap::new();
    while done < indices.len() {
        let end = (done + CHECKPOINT_INTERVAL).min(indices.len());
        let chunk = &indices[done..end];
        let records: Vec<SearchRecord> = if symmetry_reduction {
            let mut recs = Vec::with_capacity(chunk.len());
            for &idx in chunk {
                recs.push(check_tuple_reduced(family, idx, n_max, &mut cache)?);
            }
            recs
        } else {
            run_tuples(family, chunk, n_max)?
        };
        for rec in &records {
            if rec.result == SearchStatus::Fail {
                summary.fails += 1;
                *summary
                    .fails_by_n
                    .entry(rec.violating_n.unwrap_or_default())
                    .or_insert(0) += 1;
            } else {
                summary.inconclusive += 1;
            }
            serde_json::to_writer(&mut *out, rec)?;
            writeln!(out)?;
        }
        done = end;
        if let Some(cp) = checkpoint {
            let tmp = Checkpoint {
                r: family.r,
                n_max,
                total: indices.len(),
                completed: done,
            };
            std::fs::write(cp, serde_json::to_string(&tmp)?)?;
        }
    }
    summary.total = done - start;
    Ok(summary)
}

fn check_tuple_reduced(
    family: &OrderFamily,
    index: u64,
    n_max: usize,
    cache: &mut HashMap<u64, SearchRecord>,
) -> Result<SearchRecord> {
    let orbit = family.orbit(index)?;
    let rep = orbit[0];
    if rep == index || !cache.contains_key(&rep) {
        let rec = check_tuple(family, rep, n_max)?;
        cache.insert(rep, rec);
    }
    let rep_rec = cache[&rep].clone();
    if rep == index {
        return Ok(rep_rec);
    }
    // find the relabeling carrying the representative to this tuple
    let d = family.r - 1;
    let ids: Vec<u8> = (1..=d as u8).collect();
    let mut sigmas = Vec::new();
    lex_permutations(&ids, &mut vec![], &mut vec![false; d], &mut sigmas);
    let rep_orders = family.decode(rep)?;
    for sigma in &sigmas {
        let mut new_orders: Vec<Option<SignedLexOrder>> = vec![None; d];
        for (i, o) in rep_orders.iter().enumerate() {
            let new_link = sigma[i] as usize;
            let perm: Vec<u8> = o.perm.iter().map(|&j| sigma[j as usize - 1]).collect();
            new_orders[new_link - 1] = Some(SignedLexOrder::new(perm, o.signs.clone())?);
        }
        let new_orders: Vec<SignedLexOrder> = new_orders.into_iter().map(|o| o.unwrap()).collect();
        if family.encode(&new_orders)? == index {
            let certificate = rep_rec.certificate.as_ref().map(|c| ViolationCertificate {
                edge_a: relabel_edge(&c.edge_a, sigma),
                edge_b: relabel_edge(&c.edge_b, sigma),
                shared: {
                    let mut s: Vec<GridPoint> =
                        c.shared.iter().map(|p| relabel_point(p, sigma)).collect();
                    s.sort();
                    s
                },
                note: c.note,
            });
            return Ok(SearchRecord {
                tuple_index: index,
                orders: new_orders.iter().map(|o| o.encode()).collect(),
                result: rep_rec.result,
                violating_n: rep_rec.violating_n,
                certificate,
            });
        }
    }
    Err(Error::Internal("orbit member without a relabeling".into()))
}

fn relabel_edge(e: &crate::grid::HyperEdge, sigma: &[u8]) -> crate::grid::HyperEdge {
    let mut vertices: Vec<GridPoint> = e.vertices.iter().map(|p| relabel_point(p, sigma)).collect();
    vertices.sort();
    let mut centers: Vec<GridPoint> = e.centers.iter().map(|p| relabel_point(p, sigma)).collect();
    centers.sort();
    crate::grid::HyperEdge { vertices, centers }
}
