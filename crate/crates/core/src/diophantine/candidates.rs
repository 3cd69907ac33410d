use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cf::{convergents, expand_surd};
use crate::error::{Error, Result};
use crate::exec;
use crate::precision::isqrt_exact;

/// Convergent indices `index_lo..=index_hi` of `sqrt(l + 1) / k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRange {
    pub k: u64,
    pub index_lo: usize,
    pub index_hi: usize,
}

impl DivisorRange {
    pub fn new(k: u64, index_lo: usize, index_hi: usize) -> Self {
        DivisorRange { k, index_lo, index_hi }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub l: u32,
    pub ranges: Vec<DivisorRange>,
    pub include_zero: bool,
    /// Upper end of the plain enumeration `0..=enumeration_max` used when
    /// `sqrt(l + 1)` is an integer and no Diophantine approximation exists.
    pub enumeration_max: u64,
}

impl CandidateSpec {
    /// The index windows that produce the published candidate sets for
    /// `l = 1..=4`.
    pub fn published(l: u32) -> Option<Self> {
        let uniform = |ks: std::ops::RangeInclusive<u64>, lo, hi| {
            ks.map(|k| DivisorRange::new(k, lo, hi)).collect::<Vec<_>>()
        };
        let ranges = match l {
            1 => uniform(1..=4, 12, 39),
            2 => uniform(1..=7, 12, 59),
            3 => Vec::new(),
            4 => {
                let mut r = uniform(1..=8, 8, 59);
                r.push(DivisorRange::new(9, 8, 58));
                r
            }
            _ => return None,
        };
        Some(CandidateSpec {
            l,
            ranges,
            include_zero: true,
            enumeration_max: 2000,
        })
    }

    pub fn radicand(&self) -> u64 {
        self.l as u64 + 1
    }

    /// `sqrt(l + 1)` is an integer, so every `sqrt(l + 1) / k` is rational.
    pub fn is_rational(&self) -> bool {
        isqrt_exact(&BigUint::from(self.radicand())).is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::invalid("l", "photon multiplicity must be >= 1"));
        }
        if self.is_rational() {
            return Ok(());
        }
        if self.ranges.is_empty() {
            return Err(Error::invalid("ranges", "at least one divisor range is required"));
        }
        for r in &self.ranges {
            if r.k == 0 {
                return Err(Error::invalid("ranges.k", "divisor must be >= 1"));
            }
            if r.index_lo > r.index_hi {
                return Err(Error::invalid(
                    "ranges",
                    format!("empty index range {}..={} for k = {}", r.index_lo, r.index_hi, r.k),
                ));
            }
        }
        Ok(())
    }
}

/// Where a candidate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Zero,
    Enumerated,
    Convergent { k: u64, index: usize },
}

/// Sorted, deduplicated candidate denominators with provenance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateSet {
    members: BTreeMap<BigUint, Vec<Source>>,
}

#[derive(Serialize, Deserialize)]
struct ProvenanceRecord {
    q: String,
    sources: Vec<Source>,
}

impl CandidateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, q: BigUint, source: Source) {
        let sources = self.members.entry(q).or_default();
        if !sources.contains(&source) {
            sources.push(source);
            sources.sort();
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, q: &BigUint) -> bool {
        self.members.contains_key(q)
    }

    /// Members in ascending order.
    pub fn members(&self) -> impl Iterator<Item = &BigUint> {
        self.members.keys()
    }

    pub fn provenance(&self, q: &BigUint) -> Option<&[Source]> {
        self.members.get(q).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, &[Source])> {
        self.members.iter().map(|(q, s)| (q, s.as_slice()))
    }

    /// Keeps members accepted by `keep`, with their provenance.
    pub fn retain_from(&self, keep: impl Fn(&BigUint) -> bool) -> CandidateSet {
        CandidateSet {
            members: self
                .members
                .iter()
                .filter(|(q, _)| keep(q))
                .map(|(q, s)| (q.clone(), s.clone()))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &CandidateSet) -> bool {
        self.members().all(|q| other.contains(q))
    }

    /// One decimal integer per line, ascending.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for q in self.members() {
            s.push_str(&q.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses [`CandidateSet::to_lines`] output; provenance is not recovered.
    pub fn from_lines(text: &str) -> Result<CandidateSet> {
        let mut set = CandidateSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let q = line
                .parse::<BigUint>()
                .map_err(|e| Error::invalid("candidates", format!("line {}: {e}", i + 1)))?;
            set.insert(q, Source::Enumerated);
        }
        Ok(set)
    }

    /// JSON sidecar: `[{"q": "2131", "sources": [{"kind": "convergent", "k": 1, "index": 12}]}, ...]`.
    pub fn provenance_json(&self) -> String {
        let records: Vec<ProvenanceRecord> = self
            .iter()
            .map(|(q, s)| ProvenanceRecord {
                q: q.to_string(),
                sources: s.to_vec(),
            })
            .collect();
        serde_json::to_string_pretty(&records).expect("provenance records serialize")
    }

    pub fn from_provenance_json(text: &str) -> Result<CandidateSet> {
        let records: Vec<ProvenanceRecord> =
            serde_json::from_str(text).map_err(|e| Error::invalid("provenance", e.to_string()))?;
        let mut set = CandidateSet::new();
        for r in records {
            let q = r
                .q
                .parse::<BigUint>()
                .map_err(|e| Error::invalid("provenance.q", e.to_string()))?;
            for s in r.sources {
                set.insert(q.clone(), s);
            }
        }
        Ok(set)
    }
}

/// Union over divisors `k` of the convergent denominators of `sqrt(l + 1) / k`
/// in each index window, plus `{0}` if requested. When `sqrt(l + 1)` is an
/// integer the set is the enumeration `0..=enumeration_max` instead.
pub fn build_candidate_set(spec: &CandidateSpec) -> Result<CandidateSet> {
    spec.validate()?;
    let mut set = CandidateSet::new();
    if spec.include_zero {
        set.insert(BigUint::zero(), Source::Zero);
    }
    if spec.is_rational() {
        for q in 0..=spec.enumeration_max {
            set.insert(BigUint::from(q), Source::Enumerated);
        }
        return Ok(set);
    }
    let m = spec.radicand();
    let per_range = exec::try_map_slice(&spec.ranges, |r| -> Result<Vec<(BigUint, Source)>> {
        let cf = expand_surd(m, r.k, r.index_hi)?;
        Ok(convergents(&cf)
            .into_iter()
            .filter(|c| (r.index_lo..=r.index_hi).contains(&c.index))
            .map(|c| {
                (
                    c.q,
                    Source::Convergent {
                        k: r.k,
                        index: c.index,
                    },
                )
            })
            .collect())
    })?;
    for (q, src) in per_range.into_iter().flatten() {
        set.insert(q, src);
    }
    Ok(set)
}
