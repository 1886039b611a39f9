//! The k-covering property and the unique-face property.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::{find_first_subset, Combinations, SubsetMask};
use crate::vc::vc_dimension;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub k: usize,
    pub holds: bool,
    /// Canonically smallest k-set contained in no member.
    pub uncovered: Option<SubsetMask>,
}

pub fn is_k_covering(f: &SetFamily, k: usize) -> Result<CoverReport> {
    is_k_covering_with(f, k, 1)
}

pub fn is_k_covering_with(f: &SetFamily, k: usize, workers: usize) -> Result<CoverReport> {
    let n = f.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!(
            "covering arity must satisfy 1 <= k <= n, got k={k} n={n}"
        )));
    }
    // `[n]` itself sorts last and covers every k-set.
    if f.members().last().is_some_and(|m| m.len() == n) {
        return Ok(CoverReport {
            k,
            holds: true,
            uncovered: None,
        });
    }
    let pool: Vec<usize> = (0..n).collect();
    let uncovered = find_first_subset(n, &pool, k, workers, |probe| {
        !f.members().iter().any(|s| probe.is_subset(s))
    });
    Ok(CoverReport {
        k,
        holds: uncovered.is_none(),
        uncovered,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub member: SubsetMask,
    pub face: SubsetMask,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    pub holds: bool,
    /// One entry per member that has a unique face, in canonical member order.
    pub faces: Vec<Face>,
    /// First member, in canonical order, without a unique face.
    pub violator: Option<SubsetMask>,
}

impl FaceReport {
    pub fn face_of(&self, member: &SubsetMask) -> Option<SubsetMask> {
        self.faces.iter().find(|f| f.member == *member).map(|f| f.face)
    }
}

/// For every member `S`, the smallest (then canonically first) `K ⊊ S` that no
/// other member contains.
pub fn unique_face(f: &SetFamily) -> FaceReport {
    let mut faces = Vec::with_capacity(f.len());
    let mut violator = None;
    for (i, s) in f.members().iter().enumerate() {
        let others = || f.members().iter().enumerate().filter(move |(j, _)| *j != i).map(|(_, t)| t);
        let pool: Vec<usize> = s.positions().collect();
        let face = (0..s.len()).find_map(|r| {
            Combinations::new(f.n(), pool.clone(), r).find(|k| !others().any(|t| k.is_subset(t)))
        });
        match face {
            Some(face) => faces.push(Face { member: *s, face }),
            None => {
                if violator.is_none() {
                    violator = Some(*s);
                }
            }
        }
    }
    FaceReport {
        holds: violator.is_none(),
        faces,
        violator,
    }
}

/// True when the family lacks the unique-face property or has VC-dimension below
/// its member size.
pub fn ufp_implies_vc_bound_check(f: &SetFamily) -> Result<bool> {
    let s = f.require_uniform()?;
    if !unique_face(f).holds {
        return Ok(true);
    }
    Ok(vc_dimension(f)?.dimension < s)
}
