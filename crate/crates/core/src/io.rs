//! Canonical family files.
//!
//! ```text
//! vcfam 1
//! n=4 s=2
//! 1 2
//! 3 4
//! ```
//!
//! Member lines list elements ascending and appear in canonical mask order; the
//! empty member is written `-`. The header's `s` is the common member size or
//! `mixed`. A JSON mirror `{"n":4,"members":[[1,2],[3,4]]}` follows the same
//! ordering rules.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::{check_ground, SubsetMask};

const MAGIC: &str = "vcfam 1";

pub fn write_family(f: &SetFamily) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    match f.uniform_size() {
        Some(s) => writeln!(out, "n={} s={}", f.n(), s),
        None => writeln!(out, "n={} s=mixed", f.n()),
    }
    .expect("writing to a String cannot fail");
    for m in f.members() {
        if m.is_empty() {
            out.push('-');
        } else {
            let line: Vec<String> = m.elements().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
        }
        out.push('\n');
    }
    out
}

pub fn read_family(text: &str) -> Result<SetFamily> {
    let mut body: Vec<(usize, &str)> = text.split('\n').enumerate().map(|(i, l)| (i + 1, l)).collect();
    // A trailing newline leaves one empty piece at the end.
    if body.last().is_some_and(|(_, l)| l.is_empty()) {
        body.pop();
    }
    let mut it = body.into_iter();

    if it.next().map(|(_, l)| l) != Some(MAGIC) {
        return Err(Error::MalformedHeader {
            line: 1,
            reason: format!("expected `{MAGIC}`"),
        });
    }
    let (n, declared_s) = match it.next() {
        Some((_, l)) => parse_params_line(l)?,
        None => {
            return Err(Error::MalformedHeader {
                line: 2,
                reason: "missing `n=.. s=..` line".into(),
            })
        }
    };

    let mut members: Vec<SubsetMask> = Vec::new();
    for (line, l) in it {
        let m = parse_member(n, line, l)?;
        if let Some(prev) = members.last() {
            match prev.cmp(&m) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => return Err(Error::DuplicateMember { line }),
                std::cmp::Ordering::Greater => return Err(Error::UnsortedLine { line }),
            }
        }
        members.push(m);
    }
    let f = SetFamily::from_canonical(n, members);
    if f.uniform_size() != declared_s {
        return Err(Error::MalformedHeader {
            line: 2,
            reason: format!(
                "declared s={} but members give s={}",
                fmt_s(declared_s),
                fmt_s(f.uniform_size())
            ),
        });
    }
    Ok(f)
}

fn fmt_s(s: Option<usize>) -> String {
    s.map_or_else(|| "mixed".to_string(), |s| s.to_string())
}

fn parse_params_line(l: &str) -> Result<(usize, Option<usize>)> {
    let bad = |reason: &str| Error::MalformedHeader {
        line: 2,
        reason: reason.to_string(),
    };
    let mut parts = l.split(' ');
    let n = parts
        .next()
        .and_then(|p| p.strip_prefix("n="))
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| bad("expected `n=<int>`"))?;
    let s = match parts.next().and_then(|p| p.strip_prefix("s=")) {
        Some("mixed") => None,
        Some(v) => Some(v.parse::<usize>().map_err(|_| bad("expected `s=<int|mixed>`"))?),
        None => return Err(bad("expected `s=<int|mixed>`")),
    };
    if parts.next().is_some() {
        return Err(bad("trailing fields"));
    }
    check_ground(n).map_err(|e| bad(&e.to_string()))?;
    Ok((n, s))
}

fn parse_member(n: usize, line: usize, l: &str) -> Result<SubsetMask> {
    if l == "-" {
        return Ok(SubsetMask::empty_unchecked(n));
    }
    let mut prev = 0usize;
    let mut elems = Vec::new();
    for tok in l.split(' ') {
        let e: usize = tok.parse().map_err(|_| Error::MalformedMember {
            line,
            reason: format!("bad element `{tok}`"),
        })?;
        if e == 0 || e > n {
            return Err(Error::ElementOutOfRange { element: e, n });
        }
        if e <= prev {
            return Err(Error::UnsortedLine { line });
        }
        prev = e;
        elems.push(e);
    }
    SubsetMask::from_elements(n, elems)
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    members: Vec<Vec<usize>>,
}

pub fn family_to_json(f: &SetFamily) -> String {
    serde_json::to_string(&FamilyJson {
        n: f.n(),
        members: f.to_vecs(),
    })
    .expect("family serializes")
}

/// Parses the JSON mirror, enforcing the same ordering rules as the text form.
pub fn family_from_json(text: &str) -> Result<SetFamily> {
    let raw: FamilyJson = serde_json::from_str(text).map_err(|e| Error::MalformedHeader {
        line: e.line(),
        reason: e.to_string(),
    })?;
    check_ground(raw.n)?;
    let mut members: Vec<SubsetMask> = Vec::with_capacity(raw.members.len());
    for (i, elems) in raw.members.iter().enumerate() {
        let line = i + 1;
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedLine { line });
        }
        let m = SubsetMask::from_elements(raw.n, elems.iter().copied())?;
        if let Some(prev) = members.last() {
            if *prev == m {
                return Err(Error::DuplicateMember { line });
            }
            if *prev > m {
                return Err(Error::UnsortedLine { line });
            }
        }
        members.push(m);
    }
    Ok(SetFamily::from_canonical(raw.n, members))
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson {
            n: self.n(),
            members: self.to_vecs(),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_family;
    use proptest::prelude::*;

    const PAIRS: &str = "vcfam 1\nn=4 s=2\n1 2\n3 4\n";

    #[test]
    fn reads_pairs() {
        let f = read_family(PAIRS).unwrap();
        assert_eq!(f, make_family(4, [vec![1, 2], vec![3, 4]]).unwrap());
    }

    #[test]
    fn writes_pairs_exactly() {
        let f = make_family(4, [vec![3, 4], vec![1, 2]]).unwrap();
        assert_eq!(write_family(&f), PAIRS);
    }

    #[test]
    fn unsorted_elements_rejected() {
        assert_eq!(
            read_family("vcfam 1\nn=4 s=2\n2 1\n").unwrap_err(),
            Error::UnsortedLine { line: 3 }
        );
    }

    #[test]
    fn unsorted_and_duplicate_members_rejected() {
        assert_eq!(
            read_family("vcfam 1\nn=4 s=2\n3 4\n1 2\n").unwrap_err(),
            Error::UnsortedLine { line: 4 }
        );
        assert_eq!(
            read_family("vcfam 1\nn=4 s=2\n1 2\n1 2\n").unwrap_err(),
            Error::DuplicateMember { line: 4 }
        );
    }

    #[test]
    fn header_errors() {
        assert!(matches!(read_family("vcfam 2\nn=4 s=2\n"), Err(Error::MalformedHeader { .. })));
        assert!(matches!(read_family(""), Err(Error::MalformedHeader { .. })));
        assert!(matches!(read_family("vcfam 1\n"), Err(Error::MalformedHeader { line: 2, .. })));
        assert!(matches!(read_family("vcfam 1\nn=0 s=0\n"), Err(Error::MalformedHeader { .. })));
        assert!(matches!(read_family("vcfam 1\nn=4 s=3\n1 2\n"), Err(Error::MalformedHeader { .. })));
        assert!(matches!(read_family("vcfam 1\nn=4\n"), Err(Error::MalformedHeader { .. })));
    }

    #[test]
    fn empty_member_and_mixed() {
        let text = "vcfam 1\nn=3 s=mixed\n-\n1 3\n";
        let f = read_family(text).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.members()[0].is_empty());
        assert_eq!(write_family(&f), text);
    }

    #[test]
    fn json_mirror() {
        let f = read_family(PAIRS).unwrap();
        let j = family_to_json(&f);
        assert_eq!(j, r#"{"n":4,"members":[[1,2],[3,4]]}"#);
        assert_eq!(family_from_json(&j).unwrap(), f);
        assert!(matches!(
            family_from_json(r#"{"n":4,"members":[[3,4],[1,2]]}"#),
            Err(Error::UnsortedLine { line: 2 })
        ));
        assert!(matches!(
            family_from_json(r#"{"n":4,"members":[[2,1]]}"#),
            Err(Error::UnsortedLine { line: 1 })
        ));
    }

    proptest! {
        #[test]
        fn text_round_trip(
            n in 1usize..=20,
            members in proptest::collection::vec(proptest::collection::btree_set(1usize..=20, 0..=6), 0..10),
        ) {
            let members: Vec<Vec<usize>> = members
                .into_iter()
                .map(|m| m.into_iter().filter(|&e| e <= n).collect())
                .collect();
            let f = make_family(n, members).unwrap();
            let text = write_family(&f);
            let back = read_family(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(write_family(&back), text);
        }
    }
}
