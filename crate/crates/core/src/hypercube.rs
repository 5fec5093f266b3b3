//! Vertices, layers and subsets of the Boolean cube `{0,1}^n`.
//!
//! Coordinate `x_1` lives in bit 0 of [`CubePoint::bits`], `x_2` in bit 1 and
//! so on. Every textual form writes the coordinates left to right as
//! `x_1 x_2 ... x_n`, so the point with only `x_1 = 1` in dimension 3 prints
//! as `100`. Ordering of points is lexicographic on that string.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{out_of_range, Error, Result};

/// Largest dimension accepted by pointwise operations.
pub const MAX_POINT_DIM: usize = 63;

/// Default cap for operations that enumerate all `2^n` points.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Enumeration cap, overridable through `HYPERCOVER_MAX_N`.
pub fn enumeration_cap() -> usize {
    std::env::var("HYPERCOVER_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(MAX_POINT_DIM))
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

pub(crate) fn check_enumerable(n: usize) -> Result<()> {
    let cap = enumeration_cap();
    if n > cap {
        return Err(Error::DimensionCap { n, cap });
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_POINT_DIM {
        return Err(out_of_range("n", n, format!("1..={MAX_POINT_DIM}")));
    }
    Ok(())
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A vertex of `{0,1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubePoint {
    n: usize,
    bits: u64,
}

impl CubePoint {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_dim(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(Error::Invalid(format!(
                "bit pattern {bits:#x} has bits beyond dimension {n}"
            )));
        }
        Ok(CubePoint { n, bits })
    }

    /// Internal constructor for callers that already hold a valid pattern.
    pub(crate) fn from_bits_unchecked(n: usize, bits: u64) -> Self {
        debug_assert!(bits & !low_mask(n) == 0);
        CubePoint { n, bits }
    }

    pub fn origin(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn all_ones(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(CubePoint { n, bits: low_mask(n) })
    }

    /// Builds a point from its coordinates `x_1, ..., x_n`.
    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        check_dim(coords.len())?;
        let mut bits = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                other => {
                    return Err(Error::Invalid(format!("coordinate value {other} is not 0 or 1")))
                }
            }
        }
        Ok(CubePoint { n: coords.len(), bits })
    }

    /// Parses a bitstring such as `"0110"` (first character is `x_1`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let coords: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid character {c:?} in bitstring {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::from_coords(&coords)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Coordinate `x_{i+1}` (zero-based index).
    pub fn coord(&self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn coords(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// The point `x -> 1 - x`.
    pub fn complement(&self) -> Self {
        CubePoint {
            n: self.n,
            bits: !self.bits & low_mask(self.n),
        }
    }

    fn lex_key(&self) -> u64 {
        self.bits.reverse_bits()
    }
}

impl Ord for CubePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for CubePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.coord(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for CubePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Number of coordinates equal to one.
pub fn weight(p: &CubePoint) -> u32 {
    p.weight()
}

/// A deduplicated set of cube points of a common dimension, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    members: Vec<CubePoint>,
}

impl PointSet {
    pub fn empty(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(PointSet { n, members: Vec::new() })
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = CubePoint>) -> Result<Self> {
        check_dim(n)?;
        let mut members: Vec<CubePoint> = Vec::new();
        for p in points {
            if p.n != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.n });
            }
            members.push(p);
        }
        members.sort_unstable();
        members.dedup();
        Ok(PointSet { n, members })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, members: Vec<CubePoint>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        PointSet { n, members }
    }

    /// All `2^n` points.
    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        check_enumerable(n)?;
        Self::from_predicate(n, |_| true)
    }

    /// All points satisfying `keep`, by full enumeration.
    pub fn from_predicate(n: usize, keep: impl Fn(&CubePoint) -> bool) -> Result<Self> {
        check_dim(n)?;
        check_enumerable(n)?;
        let members = (0..1u64 << n)
            .map(|b| CubePoint::from_bits_unchecked(n, b))
            .filter(|p| keep(p));
        Self::from_points(n, members)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &CubePoint) -> bool {
        p.n == self.n && self.members.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CubePoint> {
        self.members.iter()
    }

    pub fn points(&self) -> &[CubePoint] {
        &self.members
    }

    /// Dense membership table indexed by bit pattern.
    pub fn indicator(&self) -> Result<Vec<bool>> {
        check_enumerable(self.n)?;
        let mut table = vec![false; 1usize << self.n];
        for p in &self.members {
            table[p.bits as usize] = true;
        }
        Ok(table)
    }

    /// `{0,1}^n` minus this set.
    pub fn complement(&self) -> Result<Self> {
        let table = self.indicator()?;
        Self::from_predicate(self.n, |p| !table[p.bits as usize])
    }

    pub fn union(&self, other: &PointSet) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Self::from_points(self.n, self.members.iter().chain(other.members.iter()).copied())
    }

    /// Parses either the line format (`n=<dim>` header, one bitstring per
    /// line) or a JSON array of bitstrings.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('[') {
            Self::from_json(text, None)
        } else {
            Self::from_text(text)
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `n=<dim>` header".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header line {header:?}")))?;
        let points = lines.map(CubePoint::parse).collect::<Result<Vec<_>>>()?;
        Self::from_points(n, points)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for p in &self.members {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    /// JSON array of bitstrings. An empty array needs `n_hint`.
    pub fn from_json(text: &str, n_hint: Option<usize>) -> Result<Self> {
        let strings: Vec<String> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let points = strings
            .iter()
            .map(|s| CubePoint::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let n = match (points.first(), n_hint) {
            (Some(p), _) => p.n,
            (None, Some(n)) => n,
            (None, None) => {
                return Err(Error::Parse("cannot infer dimension of an empty JSON point set".into()))
            }
        };
        Self::from_points(n, points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point sets always serialize")
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.members.len()))?;
        for p in &self.members {
            seq.serialize_element(p)?;
        }
        seq.end()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a CubePoint;
    type IntoIter = std::slice::Iter<'a, CubePoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Next bit pattern with the same popcount (Gosper's hack).
fn next_same_weight(x: u64) -> Option<u64> {
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// The layer `Q^n_k` of points with exactly `k` ones.
pub fn layer(n: usize, k: usize) -> Result<PointSet> {
    check_dim(n)?;
    if k > n {
        return Err(out_of_range("k", k, format!("0..={n}")));
    }
    let mut members = Vec::new();
    if k == 0 {
        members.push(CubePoint::from_bits_unchecked(n, 0));
    } else {
        let limit = low_mask(n);
        let mut x = low_mask(k);
        loop {
            members.push(CubePoint::from_bits_unchecked(n, x));
            match next_same_weight(x) {
                Some(next) if next <= limit => x = next,
                _ => break,
            }
        }
    }
    members.sort_unstable();
    Ok(PointSet::from_sorted_unchecked(n, members))
}

/// `T(l)`: points of weight `< l` or `> n - l`, for `1 <= l <= floor(n/2)`.
pub fn tail_set(n: usize, l: usize) -> Result<PointSet> {
    check_dim(n)?;
    if l == 0 || l > n / 2 {
        return Err(out_of_range("l", l, format!("1..={}", n / 2)));
    }
    let mut members = Vec::new();
    for k in (0..l).chain(n - l + 1..=n) {
        members.extend(layer(n, k)?.members);
    }
    PointSet::from_points(n, members)
}

/// `{ weight(u) : u in S }`.
pub fn weight_set(s: &PointSet) -> BTreeSet<u32> {
    s.iter().map(CubePoint::weight).collect()
}

/// `|weight_set(S)|`, the cardinality reading of `W(S)`.
pub fn weight_count(s: &PointSet) -> usize {
    weight_set(s).len()
}
