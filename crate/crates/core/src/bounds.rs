//! Turán-type edge bound and the random-deletion upper-bound machinery, as
//! executable demonstrations on the grid constructions.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::IndependentSetWitness;
use crate::error::{Error, Result};
use crate::grid::{ConstructionSpec, GridTables};

/// Binomial coefficient with arbitrary-size arithmetic.
pub fn binomial(n: &BigUint, k: usize) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Maximum edge count of a T-free r-graph on n vertices when T is a tight
/// r-tree with k edges: (k-1) * C(n, r-1).
pub fn turan_bound(k: usize, r: usize, n: usize) -> Result<BigUint> {
    if k < 1 || r < 2 || n < r {
        return Err(Error::Parameter(format!(
            "need k >= 1, r >= 2, n >= r; got k={k}, r={r}, n={n}"
        )));
    }
    Ok(BigUint::from(k - 1) * binomial(&BigUint::from(n), r - 1))
}

/// Euler's number as a fixed rational: floor(e * 2^62) / 2^62.
pub const E_NUMERATOR: u64 = 12_535_862_302_449_814_170;
pub const E_DENOM_LOG2: u32 = 62;

fn e_rational() -> BigRational {
    BigRational::new(
        BigInt::from(E_NUMERATOR),
        BigInt::from(1u64) << E_DENOM_LOG2,
    )
}

/// The vertex bound N and sampling probability p of the deletion-method
/// upper bound for a tight r-tree with k edges and target independent-set
/// size n.
#[derive(Clone, Debug, PartialEq)]
pub struct RamseyEstimate {
    pub k: usize,
    pub r: usize,
    pub n: usize,
    /// ceil( 2(k-1) * (2en/(r-1))^(r-1) ), with e truncated at 2^-62.
    pub vertex_bound: BigUint,
    /// ( N / (2(k-1) C(N, r-1)) )^(1/(r-1)), as a float in (0, 1].
    pub p: f64,
}

pub fn ramsey_upper_estimate(k: usize, r: usize, n: usize) -> Result<RamseyEstimate> {
    if k < 2 || r < 3 || n < 1 {
        return Err(Error::Parameter(format!(
            "need k >= 2, r >= 3, n >= 1; got k={k}, r={r}, n={n}"
        )));
    }
    let base = e_rational() * BigRational::from(BigInt::from(2 * n))
        / BigRational::from(BigInt::from(r - 1));
    let mut pow = BigRational::one();
    for _ in 0..r - 1 {
        pow *= &base;
    }
    let exact = BigRational::from(BigInt::from(2 * (k - 1))) * pow;
    let vertex_bound = ceil_rational(&exact);
    let denom = BigUint::from(2 * (k - 1)) * binomial(&vertex_bound, r - 1);
    let ratio = big_ratio_to_f64(&vertex_bound, &denom);
    let p = ratio.powf(1.0 / (r - 1) as f64);
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Internal(format!("p = {p} escaped (0, 1]")));
    }
    Ok(RamseyEstimate {
        k,
        r,
        n,
        vertex_bound,
        p,
    })
}

fn ceil_rational(x: &BigRational) -> BigUint {
    let c = x.ceil();
    c.numer()
        .abs()
        .to_biguint()
        .expect("non-negative by construction")
}

fn big_ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    // exact when both fit in f64; otherwise scale down together
    let bits = num.bits().max(den.bits());
    if bits <= 52 {
        num.to_f64().unwrap() / den.to_f64().unwrap()
    } else {
        let shift = bits - 52;
        (num >> shift).to_f64().unwrap() / (den >> shift).to_f64().unwrap()
    }
}

/// Samples each grid point independently with probability p, then deletes
/// the lexicographically largest vertex of every edge still alive inside the
/// sample (edges processed in sorted order; already-broken ones skipped).
/// The result is verified independent before returning.
pub fn random_delete_independent_set(
    spec: &ConstructionSpec,
    n: usize,
    p: f64,
    seed: u64,
) -> Result<IndependentSetWitness> {
    let tables = GridTables::build(spec, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_delete_with_rng(spec, &tables, p, &mut rng)
}

fn random_delete_with_rng(
    spec: &ConstructionSpec,
    tables: &GridTables,
    p: f64,
    rng: &mut impl Rng,
) -> Result<IndependentSetWitness> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("p = {p} outside [0, 1]")));
    }
    let mut present: Vec<bool> = (0..tables.num_points)
        .map(|_| rng.gen::<f64>() < p)
        .collect();
    // edges inside the sample, deduplicated and sorted by vertex set
    let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
    let _ = tables.for_each_labeling_within(&present, |c, qs| {
        let mut vs = Vec::with_capacity(qs.len() + 1);
        vs.push(c);
        vs.extend_from_slice(qs);
        vs.sort_unstable();
        edges.insert(vs);
        ControlFlow::Continue(())
    });
    for e in &edges {
        if e.iter().all(|&v| present[v as usize]) {
            let victim = *e.last().expect("edges are non-empty");
            present[victim as usize] = false;
        }
    }
    let witness = IndependentSetWitness {
        vertices: (0..tables.num_points as u32)
            .filter(|&v| present[v as usize])
            .map(|v| tables.point(v))
            .collect(),
        n: tables.n,
        spec: spec.id(),
    };
    if !witness.verify()? {
        return Err(Error::Internal("deletion left a complete edge".into()));
    }
    Ok(witness)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeletionTrialSummary {
    pub spec: String,
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub stddev: f64,
    /// pN - m p^r with m the exact enumerated edge count.
    pub expectation_bound: f64,
    /// mean >= expectation_bound - 3 * stddev
    pub pass: bool,
}

/// Runs seeded deletion trials (stream t of the master seed drives trial t)
/// and compares the empirical mean against the deletion-method expectation.
/// Parallel when the `parallel` feature is enabled; aggregation is
/// order-independent.
pub fn deletion_trials(
    spec: &ConstructionSpec,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<DeletionTrialSummary> {
    let sizes: Result<Vec<usize>> = crate::map_indexed(trials, |t| {
        let tables = GridTables::build(spec, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        random_delete_with_rng(spec, &tables, p, &mut rng).map(|w| w.vertices.len())
    })
    .into_iter()
    .collect();
    summarize(spec, n, p, trials, seed, &sizes?)
}

/// Sequential twin of [`deletion_trials`], for benchmarking.
pub fn deletion_trials_seq(
    spec: &ConstructionSpec,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<DeletionTrialSummary> {
    let tables = GridTables::build(spec, n);
    let sizes: Result<Vec<usize>> = crate::map_indexed_seq(trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        random_delete_with_rng(spec, &tables, p, &mut rng).map(|w| w.vertices.len())
    })
    .into_iter()
    .collect();
    summarize(spec, n, p, trials, seed, &sizes?)
}

fn summarize(
    spec: &ConstructionSpec,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
    sizes: &[usize],
) -> Result<DeletionTrialSummary> {
    if sizes.is_empty() {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let total_points = (n as f64).powi(spec.dim() as i32);
    let edge_count = crate::grid::enumerate_edges(spec, n).len() as f64;
    let mean = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
    let var = sizes
        .iter()
        .map(|&s| (s as f64 - mean).powi(2))
        .sum::<f64>()
        / sizes.len() as f64;
    let stddev = var.sqrt();
    let expectation_bound = p * total_points - edge_count * p.powi(spec.r() as i32);
    Ok(DeletionTrialSummary {
        spec: spec.id(),
        n,
        p,
        trials,
        seed,
        mean,
        stddev,
        expectation_bound,
        pass: mean >= expectation_bound - 3.0 * stddev,
    })
}
