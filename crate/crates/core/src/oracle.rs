//! Exact `D(k, s, n)` for small parameters.
//!
//! Two independent routes:
//! - branch and bound over subfamilies of `C([n], s)`, branching on the members
//!   that cover the canonically first uncovered k-set and pruning any partial
//!   family that already shatters a `(d+1)`-set;
//! - plain enumeration of every subfamily, scored with [`is_k_covering`] and
//!   [`vc_dimension`].

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use serde::Serialize;

use crate::binom::{binomial, binomial_u64};
use crate::constructions::full_family;
use crate::covering::is_k_covering;
use crate::error::{Error, Result};
use crate::family::{Parameters, SetFamily};
use crate::mask::{enumerate_subsets, SubsetMask};
use crate::vc::vc_dimension;

/// Default bound on `C(n, s)`, the number of candidate members.
pub const DEFAULT_CAP: usize = 24;

/// The enumeration route visits `2^C(n,s)` subfamilies; never go beyond this.
pub const ENUMERATION_LIMIT: usize = 20;

/// Largest number of k-sets the search will index.
const KSET_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub cap: usize,
    pub workers: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cap: DEFAULT_CAP,
            workers: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    BranchAndBound,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::BranchAndBound => "branch-and-bound",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub params: Parameters,
    pub value: usize,
    pub witness: SetFamily,
    /// Search nodes visited. With several workers this depends on scheduling.
    pub nodes_explored: u64,
    pub method: Method,
}

fn check_cap(params: &Parameters, cap: usize) -> Result<usize> {
    let size = binomial(params.n, params.s);
    if size > BigUint::from(cap) {
        return Err(Error::FeasibilityCapExceeded {
            members: size.to_string(),
            cap,
        });
    }
    Ok(binomial_u64(params.n, params.s).expect("below cap") as usize)
}

/// Largest meaningful VC bound: `C([n], s)` itself reaches `min(s, n - s)`.
pub fn max_relevant_vc(params: &Parameters) -> usize {
    params.s.min(params.n - params.s)
}

pub fn exists_covering_with_vc_at_most(
    params: &Parameters,
    d: usize,
    config: &OracleConfig,
) -> Result<Option<SetFamily>> {
    Ok(search(params, d, config)?.0)
}

/// Branch-and-bound decision procedure; also returns the node count.
pub fn search(params: &Parameters, d: usize, config: &OracleConfig) -> Result<(Option<SetFamily>, u64)> {
    check_cap(params, config.cap)?;
    if d > max_relevant_vc(params) {
        return Err(Error::InvalidParameters(format!(
            "vc bound {d} exceeds min(s, n - s) = {}",
            max_relevant_vc(params)
        )));
    }
    let universe = Universe::new(params, d)?;
    let nodes = AtomicU64::new(0);
    let found = if config.workers <= 1 {
        let mut state = State::new(&universe);
        let ok = state.dfs(0);
        nodes.fetch_add(state.nodes, Ordering::Relaxed);
        ok.then(|| state.chosen.clone())
    } else {
        search_parallel(&universe, config.workers, &nodes)
    };
    let witness = found
        .map(|chosen| SetFamily::from_masks(params.n, chosen.iter().map(|&i| universe.members[i])))
        .transpose()?;
    Ok((witness, nodes.into_inner()))
}

/// The root's branches run concurrently; the lowest-index branch that succeeds
/// wins, which is exactly the branch the sequential search would return.
fn search_parallel(universe: &Universe, workers: usize, nodes: &AtomicU64) -> Option<Vec<usize>> {
    use rayon::prelude::*;
    nodes.fetch_add(1, Ordering::Relaxed);
    let root = universe.covering_members(0);
    crate::parallel::install(workers, || {
        root.par_iter()
            .enumerate()
            .find_map_first(|(i, &m)| {
                let mut state = State::new(universe);
                for &earlier in &root[..i] {
                    state.forbidden[earlier] = true;
                }
                state.add(m);
                let ok = state.shattered == 0 && state.dfs(1);
                nodes.fetch_add(state.nodes, Ordering::Relaxed);
                ok.then(|| state.chosen.clone())
            })
    })
}

struct Universe {
    members: Vec<SubsetMask>,
    /// All k-sets in canonical order; the index is the colex rank.
    ksets: Vec<SubsetMask>,
    /// Ranks of the k-sets inside each member.
    member_ksets: Vec<Vec<u32>>,
    probe_count: usize,
    /// `2^(d+1)`; all patterns of one probe.
    pattern_space: usize,
    /// `patterns[m * probe_count + p]`: trace of member `m` on probe `p`, packed.
    patterns: Vec<u32>,
}

impl Universe {
    fn new(params: &Parameters, d: usize) -> Result<Universe> {
        let Parameters { k, s, n } = *params;
        let kset_total = binomial_u64(n, k).filter(|&c| c <= KSET_LIMIT).ok_or_else(|| {
            Error::FeasibilityCapExceeded {
                members: binomial(n, k).to_string(),
                cap: KSET_LIMIT as usize,
            }
        })?;
        let members = full_family(n, s)?.members().to_vec();
        let ksets: Vec<SubsetMask> = enumerate_subsets(n, k)?.collect();
        debug_assert_eq!(ksets.len() as u64, kset_total);

        let rank_table: Vec<Vec<u64>> = (0..=n)
            .map(|a| (0..=k).map(|b| binomial_u64(a, b).unwrap_or(0)).collect())
            .collect();
        let member_ksets = members
            .iter()
            .map(|m| {
                let pool: Vec<usize> = m.positions().collect();
                crate::mask::Combinations::new(n, pool, k)
                    .map(|t| {
                        t.positions()
                            .enumerate()
                            .map(|(i, c)| rank_table[c][i + 1])
                            .sum::<u64>() as u32
                    })
                    .collect()
            })
            .collect();

        // Only probes that could possibly be shattered are tracked.
        let width = d + 1;
        let (probe_count, pattern_space, patterns) = if width <= n && width <= 20 && (1usize << width) <= members.len() {
            let probes: Vec<Vec<usize>> = enumerate_subsets(n, width)?
                .map(|p| p.positions().collect())
                .collect();
            let mut patterns = Vec::with_capacity(members.len() * probes.len());
            for m in &members {
                for probe in &probes {
                    let mut pat = 0u32;
                    for (j, &pos) in probe.iter().enumerate() {
                        pat |= (m.bit(pos) as u32) << j;
                    }
                    patterns.push(pat);
                }
            }
            (probes.len(), 1usize << width, patterns)
        } else {
            (0, 0, Vec::new())
        };
        Ok(Universe {
            members,
            ksets,
            member_ksets,
            probe_count,
            pattern_space,
            patterns,
        })
    }

    fn covering_members(&self, kset: usize) -> Vec<usize> {
        let t = &self.ksets[kset];
        (0..self.members.len()).filter(|&m| t.is_subset(&self.members[m])).collect()
    }
}

struct State<'u> {
    u: &'u Universe,
    cover: Vec<u16>,
    counts: Vec<u16>,
    distinct: Vec<u32>,
    /// Number of tracked probes with every pattern present.
    shattered: usize,
    chosen: Vec<usize>,
    forbidden: Vec<bool>,
    nodes: u64,
}

impl<'u> State<'u> {
    fn new(u: &'u Universe) -> State<'u> {
        State {
            u,
            cover: vec![0; u.ksets.len()],
            counts: vec![0; u.probe_count * u.pattern_space],
            distinct: vec![0; u.probe_count],
            shattered: 0,
            chosen: Vec::new(),
            forbidden: vec![false; u.members.len()],
            nodes: 0,
        }
    }

    fn add(&mut self, m: usize) {
        for &r in &self.u.member_ksets[m] {
            self.cover[r as usize] += 1;
        }
        let pc = self.u.probe_count;
        for p in 0..pc {
            let idx = p * self.u.pattern_space + self.u.patterns[m * pc + p] as usize;
            if self.counts[idx] == 0 {
                self.distinct[p] += 1;
                if self.distinct[p] as usize == self.u.pattern_space {
                    self.shattered += 1;
                }
            }
            self.counts[idx] += 1;
        }
        self.chosen.push(m);
    }

    fn remove(&mut self, m: usize) {
        debug_assert_eq!(self.chosen.last(), Some(&m));
        self.chosen.pop();
        for &r in &self.u.member_ksets[m] {
            self.cover[r as usize] -= 1;
        }
        let pc = self.u.probe_count;
        for p in 0..pc {
            let idx = p * self.u.pattern_space + self.u.patterns[m * pc + p] as usize;
            self.counts[idx] -= 1;
            if self.counts[idx] == 0 {
                if self.distinct[p] as usize == self.u.pattern_space {
                    self.shattered -= 1;
                }
                self.distinct[p] -= 1;
            }
        }
    }

    /// Every k-set before `from` is covered on entry.
    fn dfs(&mut self, from: usize) -> bool {
        self.nodes += 1;
        let Some(target) = (from..self.cover.len()).find(|&r| self.cover[r] == 0) else {
            return true;
        };
        let t = self.u.ksets[target];
        let mut tried = Vec::new();
        for m in 0..self.u.members.len() {
            if self.forbidden[m] || !t.is_subset(&self.u.members[m]) {
                continue;
            }
            self.add(m);
            if self.shattered == 0 && self.dfs(target + 1) {
                return true;
            }
            self.remove(m);
            // Later siblings search families without m.
            self.forbidden[m] = true;
            tried.push(m);
        }
        for m in tried {
            self.forbidden[m] = false;
        }
        false
    }
}

/// `D(k, s, n)` by ascending scan of the VC bound.
pub fn oracle_d(params: &Parameters, config: &OracleConfig) -> Result<OracleResult> {
    check_cap(params, config.cap)?;
    let mut nodes_explored = 0;
    for d in 0..=max_relevant_vc(params) {
        let (found, nodes) = search(params, d, config)?;
        nodes_explored += nodes;
        if let Some(witness) = found {
            return Ok(OracleResult {
                params: *params,
                value: d,
                witness,
                nodes_explored,
                method: Method::BranchAndBound,
            });
        }
    }
    unreachable!("C([n], s) itself has VC-dimension min(s, n - s)")
}

/// `D(k, s, n)` by scoring every nonempty subfamily of `C([n], s)`.
///
/// The witness is the first optimal subfamily in subset-index order.
pub fn oracle_d_enumeration(params: &Parameters, config: &OracleConfig) -> Result<OracleResult> {
    let size = check_cap(params, config.cap.min(ENUMERATION_LIMIT))?;
    let universe = full_family(params.n, params.s)?;
    let mut best: Option<(usize, SetFamily)> = None;
    let mut nodes_explored = 0;
    for bits in 1u64..1u64 << size {
        nodes_explored += 1;
        let chosen = (0..size)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| universe.members()[i]);
        let f = SetFamily::from_masks(params.n, chosen)?;
        if !is_k_covering(&f, params.k)?.holds {
            continue;
        }
        let v = vc_dimension(&f)?.dimension;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, f));
        }
    }
    let (value, witness) = best.expect("the full family is k-covering");
    Ok(OracleResult {
        params: *params,
        value,
        witness,
        nodes_explored,
        method: Method::Exhaustive,
    })
}
