//! Bound certificates for `D(k, s, n)` and exhaustive checks of the `F_k` family.
//!
//! All inequalities are evaluated over exact integers and rationals.

use std::fmt;
use std::path::PathBuf;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::binom::{binomial, ceil_div};
use crate::constructions::{build_fk, covering_witness_family};
use crate::covering::{is_k_covering, unique_face};
use crate::error::{Error, Result};
use crate::family::{Parameters, SetFamily};
use crate::io::read_family;
use crate::mask::SubsetMask;
use crate::vc::{sauer_shelah_sum, shatters, vc_dimension};

/// Exact rational, serialized as `"p"` or `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn integer(v: BigUint) -> Exact {
        Exact(BigRational::from_integer(v.into()))
    }

    pub fn ratio(num: BigUint, den: BigUint) -> Exact {
        Exact(BigRational::new(num.into(), den.into()))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Every k-covering family is too large to avoid shattering a k-set.
    LowerVcGeK,
    /// An explicit k-covering family with VC-dimension at most k.
    UpperVcLeK,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::LowerVcGeK => "lower-vc-ge-k",
            CertificateKind::UpperVcLeK => "upper-vc-le-k",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub lhs: Exact,
    pub rhs: Exact,
    pub holds: bool,
}

impl Inequality {
    fn less_than(lhs: Exact, rhs: Exact) -> Inequality {
        let holds = lhs < rhs;
        Inequality { lhs, rhs, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub params: Parameters,
    pub kind: CertificateKind,
    /// Strict inequality `lhs < rhs` (lower) or `lhs <= rhs` (upper).
    pub inequality_lhs: Exact,
    pub inequality_rhs: Exact,
    pub witness_file: Option<PathBuf>,
    pub holds: bool,
    /// Lower certificates only: `k·C(n, k-1) < C(n, k) / C(s, k)`, the stronger
    /// closed-form condition that implies the sum comparison when `2k <= n`.
    pub sufficient: Option<Inequality>,
}

/// `ceil(C(n, k) / C(s, k))`: each s-set contains `C(s, k)` of the `C(n, k)` k-sets.
pub fn min_cover_size_lower_bound(k: usize, s: usize, n: usize) -> Result<BigUint> {
    Parameters::new(k, s, n)?;
    Ok(ceil_div(&binomial(n, k), &binomial(s, k)))
}

/// Sauer–Shelah against the counting bound: when `sum_{i<k} C(n, i)` is below the
/// least possible size of a k-covering family, every such family shatters a k-set.
pub fn lower_bound_certificate(k: usize, s: usize, n: usize) -> Result<Certificate> {
    let params = Parameters::new(k, s, n)?;
    let main = Inequality::less_than(
        Exact::integer(sauer_shelah_sum(n, k)),
        Exact::integer(min_cover_size_lower_bound(k, s, n)?),
    );
    let sufficient = Inequality::less_than(
        Exact::integer(BigUint::from(k) * binomial(n, k - 1)),
        Exact::ratio(binomial(n, k), binomial(s, k)),
    );
    Ok(Certificate {
        params,
        kind: CertificateKind::LowerVcGeK,
        inequality_lhs: main.lhs,
        inequality_rhs: main.rhs,
        witness_file: None,
        holds: main.holds,
        sufficient: Some(sufficient),
    })
}

fn upper_from_family(params: Parameters, f: &SetFamily, witness_file: Option<PathBuf>) -> Result<Certificate> {
    let shape_ok = f.n() == params.n && f.uniform_size() == Some(params.s) && !f.is_empty();
    let covering = shape_ok && is_k_covering(f, params.k)?.holds;
    let vc = if f.is_empty() { 0 } else { vc_dimension(f)?.dimension };
    Ok(Certificate {
        params,
        kind: CertificateKind::UpperVcLeK,
        inequality_lhs: Exact::integer(BigUint::from(vc)),
        inequality_rhs: Exact::integer(BigUint::from(params.k)),
        witness_file,
        holds: covering && vc <= params.k,
        sufficient: None,
    })
}

/// Builds the witness family and checks it is k-covering with VC-dimension at most k.
pub fn upper_bound_certificate(k: usize, s: usize, n: usize) -> Result<(Certificate, SetFamily)> {
    let params = Parameters::new(k, s, n)?;
    let f = covering_witness_family(k, s, n)?;
    Ok((upper_from_family(params, &f, None)?, f))
}

/// Re-checks an upper certificate from the serialized witness alone.
pub fn verify_upper_witness(
    params: Parameters,
    family_text: &str,
    witness_file: Option<PathBuf>,
) -> Result<Certificate> {
    let f = read_family(family_text)?;
    upper_from_family(params, &f, witness_file)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemCheck {
    pub item: u8,
    pub passed: bool,
    /// Nothing to check at these parameters.
    pub vacuous: bool,
    pub detail: String,
    pub witness: Vec<SubsetMask>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropConstReport {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub items: Vec<ItemCheck>,
}

impl PropConstReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

pub const PROP_CONST_MAX_GROUND: usize = 16;

/// Checks the four structural facts about `F_k` on `[m + k - 1]`:
/// 1. k-covering;
/// 2. unique-face;
/// 3. for a member `t_1 < ... < t_{k+1}` and `t_k < t < t_{k+1}`, the set
///    `{t_1, ..., t_k, t}` is a member too;
/// 4. when `2k < n`, the tail `{n-k+1, ..., n}` is shattered.
pub fn verify_prop_const(m: usize, k: usize) -> Result<PropConstReport> {
    if m < 2 || k == 0 || m + k - 1 > PROP_CONST_MAX_GROUND {
        return Err(Error::InvalidParameters(format!(
            "need m >= 2, k >= 1, m + k - 1 <= {PROP_CONST_MAX_GROUND}; got m={m} k={k}"
        )));
    }
    let f = build_fk(m, k)?;
    let n = f.n();
    let mut items = Vec::with_capacity(4);

    let cover = is_k_covering(&f, k)?;
    items.push(ItemCheck {
        item: 1,
        passed: cover.holds,
        vacuous: false,
        detail: match cover.uncovered {
            None => format!("every {k}-subset of [{n}] is covered"),
            Some(u) => format!("{u} is in no member"),
        },
        witness: cover.uncovered.into_iter().collect(),
    });

    let faces = unique_face(&f);
    items.push(ItemCheck {
        item: 2,
        passed: faces.holds,
        vacuous: false,
        detail: match faces.violator {
            None => format!("all {} members have a unique face", f.len()),
            Some(v) => format!("{v} has no unique face"),
        },
        witness: faces.violator.into_iter().collect(),
    });

    let mut checked = 0usize;
    let mut failure: Option<(SubsetMask, SubsetMask)> = None;
    'members: for member in f.members() {
        let elems = member.to_vec();
        let (t_k, t_last) = (elems[k - 1], elems[k]);
        let head = SubsetMask::from_elements(n, elems[..k].iter().copied())?;
        for t_hat in t_k + 1..t_last {
            checked += 1;
            let swapped = head.with(t_hat)?;
            if !f.contains(&swapped) {
                failure = Some((*member, swapped));
                break 'members;
            }
        }
    }
    items.push(ItemCheck {
        item: 3,
        passed: failure.is_none(),
        vacuous: checked == 0,
        detail: match failure {
            None => format!("{checked} replacements of the top element stay in the family"),
            Some((member, swapped)) => format!("{member} is a member but {swapped} is not"),
        },
        witness: failure.map(|(a, b)| vec![a, b]).unwrap_or_default(),
    });

    if 2 * k < n {
        let tail = SubsetMask::from_elements(n, n - k + 1..=n)?;
        let ok = shatters(&f, &tail)?;
        items.push(ItemCheck {
            item: 4,
            passed: ok,
            vacuous: false,
            detail: format!("{tail} {} shattered", if ok { "is" } else { "is not" }),
            witness: vec![tail],
        });
    } else {
        items.push(ItemCheck {
            item: 4,
            passed: true,
            vacuous: true,
            detail: format!("2k = {} >= n = {n}", 2 * k),
            witness: Vec::new(),
        });
    }

    Ok(PropConstReport { m, k, n, items })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    pub k: usize,
    pub s: usize,
    pub n: usize,
    pub lower: Certificate,
    pub upper: Certificate,
    pub witness_vc: usize,
    /// `D(k, s, n) = k` is established.
    pub holds: bool,
}

/// Largest ground set for which the desk check computes the witness's VC-dimension.
pub const MAIN_THEOREM_MAX_GROUND: usize = 64;

/// `k²·C(s, k) + k`, the threshold from which `D(k, s, n) = k`.
pub fn main_theorem_threshold(k: usize, s: usize) -> BigUint {
    BigUint::from(k * k) * binomial(s, k) + BigUint::from(k)
}

/// Checks `D(k, s, n) = k` at `n = k²·C(s, k) + k`: the lower certificate must hold
/// and the witness family must be k-covering with VC-dimension exactly k.
pub fn verify_main_theorem(k: usize, s: usize) -> Result<MainTheoremReport> {
    if k == 0 || k > s {
        return Err(Error::InvalidParameters(format!("need 1 <= k <= s, got k={k} s={s}")));
    }
    let threshold = main_theorem_threshold(k, s);
    let n = threshold
        .to_usize()
        .filter(|&n| n <= MAIN_THEOREM_MAX_GROUND)
        .ok_or_else(|| {
            Error::InvalidParameters(format!(
                "n = {threshold} is beyond the tractable ground size {MAIN_THEOREM_MAX_GROUND}"
            ))
        })?;
    let lower = lower_bound_certificate(k, s, n)?;
    let (upper, witness) = upper_bound_certificate(k, s, n)?;
    let witness_vc = vc_dimension(&witness)?.dimension;
    let holds = lower.holds && upper.holds && witness_vc == k;
    Ok(MainTheoremReport {
        k,
        s,
        n,
        lower,
        upper,
        witness_vc,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_family;

    fn int(v: u64) -> Exact {
        Exact::integer(BigUint::from(v))
    }

    #[test]
    fn cover_size_bounds() {
        assert_eq!(min_cover_size_lower_bound(2, 3, 14).unwrap(), BigUint::from(31u32));
        assert_eq!(min_cover_size_lower_bound(1, 2, 5).unwrap(), BigUint::from(3u32));
        for n in 1..=12 {
            for k in 1..=n {
                assert_eq!(min_cover_size_lower_bound(k, k, n).unwrap(), binomial(n, k));
            }
        }
        assert!(min_cover_size_lower_bound(3, 2, 5).is_err());
    }

    #[test]
    fn lower_certificate_at_threshold() {
        let c = lower_bound_certificate(2, 3, 14).unwrap();
        assert!(c.holds);
        assert_eq!((c.inequality_lhs.clone(), c.inequality_rhs.clone()), (int(15), int(31)));
        let suff = c.sufficient.unwrap();
        assert!(suff.holds);
        assert_eq!(suff.lhs, int(28));
        assert_eq!(suff.rhs.to_string(), "91/3");
    }

    #[test]
    fn lower_certificate_below_threshold() {
        let c = lower_bound_certificate(2, 3, 13).unwrap();
        assert!(c.holds);
        assert_eq!((c.inequality_lhs.clone(), c.inequality_rhs.clone()), (int(14), int(26)));
        let suff = c.sufficient.unwrap();
        assert!(!suff.holds);
        assert_eq!((suff.lhs, suff.rhs), (int(26), int(26)));
    }

    #[test]
    fn lower_certificate_small() {
        // C(4,2)/C(2,2) = 6 and 1 + 4 = 5.
        let c = lower_bound_certificate(2, 2, 4).unwrap();
        assert_eq!((c.inequality_lhs.clone(), c.inequality_rhs.clone()), (int(5), int(6)));
        assert!(c.holds);
    }

    #[test]
    fn prop_const_small() {
        let r = verify_prop_const(4, 1).unwrap();
        assert!(r.passed());
        assert!(r.items[2].vacuous);
        assert!(!r.items[3].vacuous);
        let r = verify_prop_const(4, 2).unwrap();
        assert_eq!(r.n, 5);
        assert!(r.passed(), "{r:?}");
        assert!(verify_prop_const(1, 1).is_err());
        assert!(verify_prop_const(10, 8).is_err());
    }

    #[test]
    fn upper_witness_round_trip() {
        let (c, f) = upper_bound_certificate(2, 4, 9).unwrap();
        assert!(c.holds);
        let again = verify_upper_witness(c.params, &write_family(&f), None).unwrap();
        assert_eq!(again, c);
        let wrong = Parameters::new(2, 3, 9).unwrap();
        assert!(!verify_upper_witness(wrong, &write_family(&f), None).unwrap().holds);
    }

    #[test]
    fn main_theorem_small() {
        let r = verify_main_theorem(1, 2).unwrap();
        assert_eq!(r.n, 3);
        assert!(r.holds);
        let r = verify_main_theorem(2, 2).unwrap();
        assert_eq!((r.n, r.witness_vc), (6, 2));
        assert!(r.holds);
        assert!(verify_main_theorem(3, 5).is_err());
        assert!(verify_main_theorem(2, 1).is_err());
    }

    #[test]
    fn sufficient_condition_implies_sum_comparison() {
        for k in 1..=5 {
            for s in k..=5 {
                for n in s.max(2 * k)..=200 {
                    let c = lower_bound_certificate(k, s, n).unwrap();
                    if c.sufficient.as_ref().unwrap().holds {
                        assert!(c.holds, "({k},{s},{n})");
                    }
                }
            }
        }
    }
}
