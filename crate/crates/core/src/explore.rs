//! Tables of what is known about `D(k, s, n)` along a range of `n`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::binom::binomial;
use crate::constructions::covering_witness_family;
use crate::error::Result;
use crate::family::Parameters;
use crate::oracle::{oracle_d, OracleConfig};
use crate::vc::vc_dimension;
use crate::verify::lower_bound_certificate;

/// Witness VC-dimensions are only computed up to this ground size.
const WITNESS_VC_MAX_GROUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowMethod {
    /// The exact search ran.
    Oracle,
    /// `k = s` or `s = n`, where the value is known in closed form.
    ClosedForm,
    /// Lower and upper certificates meet.
    Certificate,
    /// Bounds do not meet and the search was out of reach.
    Unknown,
}

impl RowMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowMethod::Oracle => "oracle",
            RowMethod::ClosedForm => "closed-form",
            RowMethod::Certificate => "certificate",
            RowMethod::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorationRow {
    pub k: usize,
    pub s: usize,
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
    pub method: RowMethod,
    /// Lower and upper both equal `k`.
    pub stab_upper_hint: bool,
}

impl ExplorationRow {
    /// The value of `D` when this row pins it down.
    pub fn determined(&self) -> Option<usize> {
        self.exact.or((self.lower == self.upper).then_some(self.lower))
    }

    pub fn consistent(&self) -> bool {
        self.lower <= self.upper
            && self.exact.is_none_or(|e| self.lower <= e && e <= self.upper)
    }
}

/// Best certified bounds on `D(k, s, n)`, without running the exact search.
///
/// Lower: 0; 1 when `s < n` (every point is covered and no member is all of
/// `[n]`, so some singleton is shattered); 2 under `2 <= k <= s < 2k`, `s + k < n`;
/// `k` when the Sauer–Shelah certificate holds. Upper: `min(s, n - s)` and the
/// VC-dimension of the witness construction. `k = s` is `min(k, n - k)` exactly.
pub fn certified_bounds(params: &Parameters) -> Result<(usize, usize)> {
    let Parameters { k, s, n } = *params;
    if k == s {
        let v = k.min(n - k);
        return Ok((v, v));
    }
    if s == n {
        return Ok((0, 0));
    }
    let mut lower = 1;
    if 2 <= k && s < 2 * k && s + k < n {
        lower = 2;
    }
    if lower_bound_certificate(k, s, n)?.holds {
        lower = lower.max(k);
    }
    let mut upper = s.min(n - s);
    if n <= WITNESS_VC_MAX_GROUND {
        upper = upper.min(vc_dimension(&covering_witness_family(k, s, n)?)?.dimension);
    } else {
        upper = upper.min(k);
    }
    Ok((lower, upper))
}

pub fn exploration_row(params: &Parameters, config: &OracleConfig) -> Result<ExplorationRow> {
    let (lower, upper) = certified_bounds(params)?;
    let Parameters { k, s, n } = *params;
    let exact = if binomial(n, s) <= config.cap.into() {
        Some(oracle_d(params, &OracleConfig { workers: 1, ..*config })?.value)
    } else {
        None
    };
    let method = if exact.is_some() {
        RowMethod::Oracle
    } else if k == s || s == n {
        RowMethod::ClosedForm
    } else if lower == upper {
        RowMethod::Certificate
    } else {
        RowMethod::Unknown
    };
    Ok(ExplorationRow {
        k,
        s,
        n,
        lower,
        upper,
        exact,
        method,
        stab_upper_hint: lower == k && upper == k,
    })
}

/// One row per `n` in the range with `s <= n`, sorted by `n`.
///
/// Rows are computed concurrently over `config.workers` threads.
pub fn explore(k: usize, s: usize, ns: impl IntoIterator<Item = usize>, config: &OracleConfig) -> Result<Vec<ExplorationRow>> {
    use rayon::prelude::*;
    let mut params: Vec<Parameters> = ns
        .into_iter()
        .filter(|&n| n >= s)
        .map(|n| Parameters::new(k, s, n))
        .collect::<Result<_>>()?;
    params.sort();
    params.dedup();
    crate::parallel::install(config.workers, || {
        params.par_iter().map(|p| exploration_row(p, config)).collect()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorationSummary {
    /// Least `n` in range from which every later row is determined and equals `k`.
    /// Only an upper-bound hint for the true stabilization point.
    pub stab_upper: Option<usize>,
    pub monotone: bool,
    /// Adjacent determined rows `(n, n + 1)` that step against an earlier step.
    pub non_monotone_pairs: Vec<(usize, usize)>,
    pub attained: Vec<usize>,
    /// Values below `k` not attained by any determined row.
    pub missing_below_k: Vec<usize>,
}

pub fn stab_upper(rows: &[ExplorationRow]) -> Option<usize> {
    let k = rows.first()?.k;
    let mut from = None;
    for row in rows.iter().rev() {
        if row.determined() == Some(k) {
            from = Some(row.n);
        } else {
            break;
        }
    }
    from
}

pub fn monotonicity_scan(rows: &[ExplorationRow]) -> (bool, Vec<(usize, usize)>) {
    let mut direction: Option<std::cmp::Ordering> = None;
    let mut flagged = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (Some(va), Some(vb)) = (a.determined(), b.determined()) else {
            continue;
        };
        if b.n != a.n + 1 {
            continue;
        }
        let step = vb.cmp(&va);
        if step == std::cmp::Ordering::Equal {
            continue;
        }
        match direction {
            None => direction = Some(step),
            Some(d) if d != step => flagged.push((a.n, b.n)),
            Some(_) => {}
        }
    }
    (flagged.is_empty(), flagged)
}

pub fn surjectivity_scan(rows: &[ExplorationRow]) -> (Vec<usize>, Vec<usize>) {
    let attained: BTreeSet<usize> = rows.iter().filter_map(ExplorationRow::determined).collect();
    let k = rows.first().map_or(0, |r| r.k);
    let missing = (0..k).filter(|v| !attained.contains(v)).collect();
    (attained.into_iter().collect(), missing)
}

pub fn summarize(rows: &[ExplorationRow]) -> ExplorationSummary {
    let (monotone, non_monotone_pairs) = monotonicity_scan(rows);
    let (attained, missing_below_k) = surjectivity_scan(rows);
    ExplorationSummary {
        stab_upper: stab_upper(rows),
        monotone,
        non_monotone_pairs,
        attained,
        missing_below_k,
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    k: usize,
    s: usize,
    n: usize,
    lower: usize,
    upper: usize,
    exact: Option<usize>,
    method: &'a str,
}

/// CSV with the fixed columns `k,s,n,lower,upper,exact,method`; `exact` is empty
/// when the search did not run.
pub fn rows_to_csv(rows: &[ExplorationRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            k: r.k,
            s: r.s,
            n: r.n,
            lower: r.lower,
            upper: r.upper,
            exact: r.exact,
            method: r.method.as_str(),
        })
        .expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}
