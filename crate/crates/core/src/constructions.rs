//! Family constructions.
//!
//! Structured ground sets are relabelled into `[n]`:
//! - product: `(v, x) ∈ [n] × [ℓ]` becomes `(v - 1)·ℓ + x`;
//! - hypercube: `(a_1, ..., a_m) ∈ {0..k}^m` becomes `1 + Σ a_i·(k+1)^(i-1)`.

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::{check_ground, enumerate_subsets, SubsetMask};

/// `C([n], s)`: every `s`-subset of `[n]`.
pub fn full_family(n: usize, s: usize) -> Result<SetFamily> {
    let members: Vec<SubsetMask> = enumerate_subsets(n, s)?.collect();
    Ok(SetFamily::from_canonical(n, members))
}

/// Proper initial segments `∅, {1}, {1,2}, ..., [n-1]` of `[n]`.
pub fn initial_segment_family(n: usize) -> Result<SetFamily> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("initial segments need n >= 2, got {n}")));
    }
    check_ground(n)?;
    let positions: Vec<usize> = (0..n).collect();
    let members = (0..n).map(|len| SubsetMask::from_positions(n, &positions[..len])).collect();
    Ok(SetFamily::from_canonical(n, members))
}

/// Adjoins the fresh point `n + 1` to every member.
pub fn cone(f: &SetFamily) -> Result<SetFamily> {
    let n = f.n() + 1;
    check_ground(n)?;
    let members = f
        .members()
        .iter()
        .map(|m| m.widen(n)?.with(n))
        .collect::<Result<Vec<_>>>()?;
    // Adding a common top element preserves the relative order.
    Ok(SetFamily::from_canonical(n, members))
}

/// Blows each point `v` up into the block `{(v-1)·ℓ + 1, ..., v·ℓ}`.
pub fn product(f: &SetFamily, l: usize) -> Result<SetFamily> {
    if l == 0 {
        return Err(Error::InvalidParameters("product factor must be >= 1".into()));
    }
    let n = f.n() * l;
    check_ground(n)?;
    let members = f.members().iter().map(|m| {
        let mut out = SubsetMask::empty_unchecked(n);
        for v in m.positions() {
            for x in 0..l {
                out.set_bit(v * l + x);
            }
        }
        out
    });
    SetFamily::from_masks(n, members)
}

/// Layout of the hypercube family over `(Z/(k+1))^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypercubeSpec {
    pub k: usize,
    pub m: usize,
}

impl HypercubeSpec {
    pub fn new(k: usize, m: usize) -> Result<HypercubeSpec> {
        if k == 0 || m == 0 {
            return Err(Error::InvalidParameters(format!("hypercube needs k, m >= 1, got k={k} m={m}")));
        }
        let side = k + 1;
        let ground = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(side));
        match ground {
            Some(g) => check_ground(g)?,
            None => return Err(Error::GroundTooLarge(usize::MAX)),
        }
        Ok(HypercubeSpec { k, m })
    }

    pub fn ground_size(&self) -> usize {
        (self.k + 1).pow(self.m as u32)
    }

    /// 1-based label of a coordinate vector.
    pub fn label(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.m);
        1 + coords.iter().rev().fold(0, |acc, &a| acc * (self.k + 1) + a)
    }

    pub fn coords(&self, label: usize) -> Vec<usize> {
        let mut rest = label - 1;
        (0..self.m)
            .map(|_| {
                let a = rest % (self.k + 1);
                rest /= self.k + 1;
                a
            })
            .collect()
    }
}

/// Products `X_1 × ... × X_m` with each `X_i` a `k`-subset of `{0..k}`.
///
/// A `k`-subset of `{0..k}` omits exactly one value, so members are indexed by the
/// omitted vector `t`; the member is every point with `a_i ≠ t_i` for all `i`.
pub fn hypercube_family(k: usize, m: usize) -> Result<SetFamily> {
    let spec = HypercubeSpec::new(k, m)?;
    let n = spec.ground_size();
    let members = (1..=n).map(|t_label| {
        let t = spec.coords(t_label);
        let mut out = SubsetMask::empty_unchecked(n);
        for label in 1..=n {
            if spec.coords(label).iter().zip(&t).all(|(a, b)| a != b) {
                out.set_bit(label - 1);
            }
        }
        out
    });
    SetFamily::from_masks(n, members)
}

/// The base family `F_1`: pairs `{2t-1, 2t}` for `t <= m/2` plus `{m-1, m}`.
pub fn base_pairs_family(m: usize) -> Result<SetFamily> {
    if m < 2 {
        return Err(Error::InvalidParameters(format!("base pairs need m >= 2, got {m}")));
    }
    check_ground(m)?;
    let pairs = (1..=m / 2)
        .map(|t| [2 * t - 1, 2 * t])
        .chain(std::iter::once([m - 1, m]))
        .map(|p| SubsetMask::from_elements(m, p))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::from_masks(m, pairs)
}

/// `F_k → F_{k+1}`: for each member `S` and each `i` with `max S < i <= n + 1`,
/// the set `S ∪ {i}`, over `[n + 1]`.
pub fn recursive_step(f: &SetFamily) -> Result<SetFamily> {
    f.require_uniform()?;
    let n = f.n() + 1;
    check_ground(n)?;
    let mut members = Vec::new();
    for s in f.members() {
        let widened = s.widen(n)?;
        for i in s.max_element().unwrap_or(0) + 1..=n {
            members.push(widened.with(i)?);
        }
    }
    SetFamily::from_masks(n, members)
}

/// Shape of `F_k` built from a base ground set of size `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecursiveSpec {
    pub m: usize,
    pub k: usize,
}

impl RecursiveSpec {
    pub fn new(m: usize, k: usize) -> Result<RecursiveSpec> {
        if m < 2 || k == 0 {
            return Err(Error::InvalidParameters(format!("F_k needs m >= 2 and k >= 1, got m={m} k={k}")));
        }
        check_ground(m + k - 1)?;
        Ok(RecursiveSpec { m, k })
    }

    pub fn ground_size(&self) -> usize {
        self.m + self.k - 1
    }

    pub fn member_size(&self) -> usize {
        self.k + 1
    }
}

/// `F_k` over `[m + k - 1]`, uniform of size `k + 1`.
pub fn build_fk(m: usize, k: usize) -> Result<SetFamily> {
    let spec = RecursiveSpec::new(m, k)?;
    let mut f = base_pairs_family(spec.m)?;
    for _ in 1..spec.k {
        f = recursive_step(&f)?;
    }
    debug_assert_eq!(f.n(), spec.ground_size());
    debug_assert_eq!(f.uniform_size(), Some(spec.member_size()));
    Ok(f)
}

/// A `k`-covering `s`-uniform family on `[n]` with VC-dimension at most `k`.
///
/// `s = k` gives `C([n], k)`; otherwise `F_k` on `[n - s + k + 1]` (base size
/// `m = n - s + 2`) is coned `s - k - 1` times.
pub fn covering_witness_family(k: usize, s: usize, n: usize) -> Result<SetFamily> {
    if k == 0 || k > s || s > n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= s <= n, got k={k} s={s} n={n}"
        )));
    }
    check_ground(n)?;
    if s == k {
        return full_family(n, k);
    }
    let mut f = build_fk(n - s + 2, k)?;
    for _ in 0..s - k - 1 {
        f = cone(&f)?;
    }
    debug_assert_eq!(f.n(), n);
    Ok(f)
}
