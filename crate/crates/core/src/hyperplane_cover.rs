//! Integer hyperplanes, cover families and `(t, l)`-cover verification on
//! `{0,1}^n`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercube::{check_enumerable, CubePoint, PointSet, MAX_POINT_DIM};

/// The affine form `<a, x> - b` with integer coefficients; the hyperplane is
/// its zero set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPlane", into = "RawPlane")]
pub struct Hyperplane {
    a: Vec<i64>,
    b: i64,
}

#[derive(Serialize, Deserialize)]
struct RawPlane {
    a: Vec<i64>,
    b: i64,
}

impl TryFrom<RawPlane> for Hyperplane {
    type Error = Error;
    fn try_from(raw: RawPlane) -> Result<Self> {
        Hyperplane::new(raw.a, raw.b)
    }
}

impl From<Hyperplane> for RawPlane {
    fn from(h: Hyperplane) -> Self {
        RawPlane { a: h.a, b: h.b }
    }
}

impl Hyperplane {
    pub fn new(a: Vec<i64>, b: i64) -> Result<Self> {
        if a.is_empty() || a.len() > MAX_POINT_DIM {
            return Err(Error::Invalid(format!(
                "hyperplane dimension {} outside 1..={MAX_POINT_DIM}",
                a.len()
            )));
        }
        if a.iter().all(|&c| c == 0) {
            return Err(Error::Invalid("hyperplane normal vector is zero".into()));
        }
        Ok(Hyperplane { a, b })
    }

    /// `x_{i+1} - value = 0` (zero-based `i`).
    pub fn coordinate(n: usize, i: usize, value: i64) -> Result<Self> {
        if i >= n {
            return Err(Error::Invalid(format!("coordinate index {i} out of range for n = {n}")));
        }
        let mut a = vec![0; n];
        a[i] = 1;
        Hyperplane::new(a, value)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn normal(&self) -> &[i64] {
        &self.a
    }

    pub fn offset(&self) -> i64 {
        self.b
    }

    /// `<a, p> - b`. With `n <= 63` and 64-bit coefficients the sum cannot
    /// leave the `i128` range.
    pub fn eval(&self, p: &CubePoint) -> Result<i128> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        Ok(self.eval_bits(p.bits()))
    }

    pub(crate) fn eval_bits(&self, bits: u64) -> i128 {
        let mut acc = -(self.b as i128);
        let mut rest = bits;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            acc += self.a[i] as i128;
            rest &= rest - 1;
        }
        acc
    }

    pub fn contains(&self, p: &CubePoint) -> Result<bool> {
        Ok(self.eval(p)? == 0)
    }

    /// Multiplies `(a, b)` by a nonzero integer; overflow is an error.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("scaling factor must be nonzero".into()));
        }
        let a = self
            .a
            .iter()
            .map(|&c| c.checked_mul(k).ok_or(Error::Overflow("hyperplane scaling")))
            .collect::<Result<Vec<_>>>()?;
        let b = self.b.checked_mul(k).ok_or(Error::Overflow("hyperplane scaling"))?;
        Hyperplane::new(a, b)
    }

    /// Points of the cube lying on the hyperplane.
    pub fn trace(&self) -> Result<PointSet> {
        PointSet::from_predicate(self.dim(), |p| self.eval_bits(p.bits()) == 0)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        match self.b {
            0 => {}
            b if b > 0 => write!(f, " - {b}")?,
            b => write!(f, " + {}", b.unsigned_abs())?,
        }
        f.write_str(" = 0")
    }
}

/// One hyperplane together with how many copies of it the family holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneEntry {
    pub plane: Hyperplane,
    pub mult: u32,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    a: Vec<i64>,
    b: i64,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    n: usize,
    planes: Vec<RawEntry>,
}

/// A multiset of hyperplanes in a common dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct CoverFamily {
    n: usize,
    entries: Vec<PlaneEntry>,
}

impl TryFrom<RawFamily> for CoverFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        let mut fam = CoverFamily::new(raw.n)?;
        for e in raw.planes {
            fam.push(Hyperplane::new(e.a, e.b)?, e.mult)?;
        }
        Ok(fam)
    }
}

impl From<CoverFamily> for RawFamily {
    fn from(f: CoverFamily) -> Self {
        RawFamily {
            n: f.n,
            planes: f
                .entries
                .into_iter()
                .map(|e| RawEntry { a: e.plane.a, b: e.plane.b, mult: e.mult })
                .collect(),
        }
    }
}

impl CoverFamily {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_POINT_DIM {
            return Err(Error::Invalid(format!("family dimension {n} outside 1..={MAX_POINT_DIM}")));
        }
        Ok(CoverFamily { n, entries: Vec::new() })
    }

    pub fn from_planes(n: usize, planes: impl IntoIterator<Item = Hyperplane>) -> Result<Self> {
        let mut fam = CoverFamily::new(n)?;
        for h in planes {
            fam.push(h, 1)?;
        }
        Ok(fam)
    }

    /// Appends `mult` copies of `plane` as one entry.
    pub fn push(&mut self, plane: Hyperplane, mult: u32) -> Result<()> {
        if plane.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: plane.dim() });
        }
        if mult == 0 {
            return Err(Error::Invalid("plane multiplicity must be positive".into()));
        }
        self.entries.push(PlaneEntry { plane, mult });
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Total number of planes counted with multiplicity.
    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.mult as usize).sum()
    }

    pub fn entries(&self) -> &[PlaneEntry] {
        &self.entries
    }

    /// Every plane, repeated according to its multiplicity.
    pub fn planes(&self) -> impl Iterator<Item = &Hyperplane> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat(&e.plane).take(e.mult as usize))
    }

    /// Multiset union.
    pub fn union(&self, other: &CoverFamily) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut fam = self.clone();
        fam.entries.extend(other.entries.iter().cloned());
        Ok(fam)
    }

    /// The family with one copy of the `index`-th plane (in [`Self::planes`]
    /// order) removed.
    pub fn without_one(&self, index: usize) -> Result<Self> {
        let mut seen = 0usize;
        let mut fam = self.clone();
        for (ei, e) in self.entries.iter().enumerate() {
            if index < seen + e.mult as usize {
                if e.mult == 1 {
                    fam.entries.remove(ei);
                } else {
                    fam.entries[ei].mult -= 1;
                }
                return Ok(fam);
            }
            seen += e.mult as usize;
        }
        Err(Error::Invalid(format!("plane index {index} out of range for a family of size {seen}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("families always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Per-point cover counts over the whole cube, indexed by bit pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile {
    n: usize,
    counts: Vec<u32>,
}

impl MultiplicityProfile {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn count(&self, p: &CubePoint) -> u32 {
        self.counts[p.bits() as usize]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Points with a positive count.
    pub fn covered(&self) -> PointSet {
        let members = (0..self.counts.len() as u64)
            .filter(|&x| self.counts[x as usize] > 0)
            .map(|x| CubePoint::from_bits_unchecked(self.n, x));
        PointSet::from_points(self.n, members).expect("profile dimension is valid")
    }
}

const LOW_BITS: usize = 12;

/// Cover counts of every point of `{0,1}^n`. Deterministic regardless of
/// thread scheduling: each point's count is a plain sum.
pub fn profile(family: &CoverFamily) -> Result<MultiplicityProfile> {
    let n = family.n;
    check_enumerable(n)?;
    let total = 1usize << n;
    let lo = n.min(LOW_BITS);
    let block = 1usize << lo;
    let mut counts = vec![0u32; total];
    for entry in &family.entries {
        let h = &entry.plane;
        // value(x) = low_sum[x mod 2^lo] + high part of x
        let low_sum: Vec<i128> = (0..block as u64).map(|x| h.eval_bits(x)).collect();
        let high_coeffs = &h.a[lo..];
        counts
            .par_chunks_mut(block)
            .enumerate()
            .for_each(|(hi, chunk)| {
                let mut high: i128 = 0;
                let mut rest = hi as u64;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    high += high_coeffs[i] as i128;
                    rest &= rest - 1;
                }
                for (c, &low) in chunk.iter_mut().zip(&low_sum) {
                    if low + high == 0 {
                        *c += entry.mult;
                    }
                }
            });
    }
    Ok(MultiplicityProfile { n, counts })
}

/// The requirement a point failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "count", rename_all = "snake_case")]
pub enum Rule {
    Exactly(u32),
    AtLeast(u32),
}

impl Rule {
    pub fn holds(&self, count: u32) -> bool {
        match *self {
            Rule::Exactly(l) => count == l,
            Rule::AtLeast(t) => count >= t,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Exactly(l) => write!(f, "exactly {l}"),
            Rule::AtLeast(t) => write!(f, "at least {t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(with = "point_string")]
    pub point: CubePoint,
    pub expected: Rule,
    pub actual: u32,
}

/// Outcome of a cover check. `m` is the family size, or the polynomial degree
/// for polynomial covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub m: usize,
}

impl CoverReport {
    pub(crate) fn from_violations(violations: Vec<Violation>, m: usize) -> Self {
        CoverReport { ok: violations.is_empty(), violations, m }
    }
}

pub(crate) mod point_string {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::hypercube::CubePoint;

    pub fn serialize<S: Serializer>(p: &CubePoint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(p)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CubePoint, D::Error> {
        let s = String::deserialize(d)?;
        CubePoint::parse(&s).map_err(de::Error::custom)
    }
}

pub(crate) fn check_cover_params(t: u32, l: u32) -> Result<()> {
    if t == 0 {
        return Err(crate::error::out_of_range("t", t, ">= 1"));
    }
    if l >= t {
        return Err(crate::error::out_of_range("l", l, format!("0..{t}")));
    }
    Ok(())
}

/// Checks that `family` covers every point of `s` exactly `l` times and every
/// other point at least `t` times.
pub fn verify_cover(family: &CoverFamily, s: &PointSet, t: u32, l: u32) -> Result<CoverReport> {
    check_cover_params(t, l)?;
    if s.dim() != family.n {
        return Err(Error::DimensionMismatch { expected: family.n, found: s.dim() });
    }
    let prof = profile(family)?;
    let in_s = s.indicator()?;
    let n = family.n;
    let mut violations: Vec<Violation> = prof
        .counts
        .iter()
        .enumerate()
        .filter_map(|(x, &count)| {
            let rule = if in_s[x] { Rule::Exactly(l) } else { Rule::AtLeast(t) };
            (!rule.holds(count)).then(|| Violation {
                point: CubePoint::from_bits_unchecked(n, x as u64),
                expected: rule,
                actual: count,
            })
        })
        .collect();
    violations.sort_by_key(|v| v.point);
    Ok(CoverReport::from_violations(violations, family.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::layer;

    fn pt(s: &str) -> CubePoint {
        CubePoint::parse(s).unwrap()
    }

    fn level(n: usize, j: i64) -> Hyperplane {
        Hyperplane::new(vec![1; n], j).unwrap()
    }

    #[test]
    fn eval_examples() {
        let h = Hyperplane::coordinate(3, 0, 1).unwrap();
        assert_eq!(h.eval(&pt("100")).unwrap(), 0);
        assert_eq!(level(3, 2).eval(&pt("110")).unwrap(), 0);
        let mut a = vec![1; 7];
        a[0] = 7;
        let h = Hyperplane::new(a, 3).unwrap();
        assert_eq!(h.eval(&pt("0000111")).unwrap(), 0);
        assert_eq!(h.eval(&pt("1000000")).unwrap(), 4);
        assert!(h.eval(&pt("000")).is_err());
    }

    #[test]
    fn extreme_coefficients_do_not_overflow() {
        let h = Hyperplane::new(vec![i64::MAX; 63], i64::MIN).unwrap();
        let p = CubePoint::all_ones(63).unwrap();
        assert_eq!(h.eval(&p).unwrap(), 63 * i64::MAX as i128 - i64::MIN as i128);
        assert_eq!(h.scaled(2), Err(Error::Overflow("hyperplane scaling")));
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(Hyperplane::new(vec![0, 0], 1).is_err());
        assert!(Hyperplane::new(vec![], 0).is_err());
    }

    #[test]
    fn profile_examples() {
        let f = CoverFamily::from_planes(
            2,
            [Hyperplane::coordinate(2, 0, 0).unwrap(), Hyperplane::coordinate(2, 0, 1).unwrap()],
        )
        .unwrap();
        assert!(profile(&f).unwrap().counts().iter().all(|&c| c == 1));

        let n = 4;
        let g = CoverFamily::from_planes(n, (1..=n as i64).map(|j| level(n, j))).unwrap();
        let prof = profile(&g).unwrap();
        assert_eq!(prof.count(&pt("0000")), 0);
        assert!(prof.counts()[1..].iter().all(|&c| c == 1));

        let mut twice = CoverFamily::new(3).unwrap();
        twice.push(Hyperplane::coordinate(3, 0, 0).unwrap(), 2).unwrap();
        assert_eq!(profile(&twice).unwrap().count(&pt("000")), 2);
        assert_eq!(twice.size(), 2);
    }

    #[test]
    fn profile_blocks_match_direct_evaluation() {
        // n above LOW_BITS exercises the blocked path.
        let n = 14;
        let a: Vec<i64> = (0..n as i64).map(|i| (i % 5) - 2).collect();
        let h = Hyperplane::new(a, 1).unwrap();
        let prof = profile(&CoverFamily::from_planes(n, [h.clone()]).unwrap()).unwrap();
        for x in 0..1u64 << n {
            assert_eq!(prof.counts()[x as usize] == 1, h.eval_bits(x) == 0, "point {x}");
        }
    }

    #[test]
    fn verify_origin_cover() {
        let n = 5;
        let g = CoverFamily::from_planes(n, (1..=n as i64).map(|j| level(n, j))).unwrap();
        let origin = PointSet::from_points(n, [CubePoint::origin(n).unwrap()]).unwrap();
        let rep = verify_cover(&g, &origin, 1, 0).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.m, n);
        let broken = g.without_one(2).unwrap();
        let rep = verify_cover(&broken, &origin, 1, 0).unwrap();
        assert!(!rep.ok);
        // Exactly the weight-3 layer loses coverage.
        assert_eq!(rep.violations.len(), layer(n, 3).unwrap().len());
        assert!(rep.violations.iter().all(|v| v.point.weight() == 3 && v.actual == 0));
    }

    #[test]
    fn verify_parameter_errors() {
        let g = CoverFamily::from_planes(2, [level(2, 1)]).unwrap();
        let s = PointSet::empty(2).unwrap();
        assert!(verify_cover(&g, &s, 1, 1).is_err());
        assert!(verify_cover(&g, &s, 0, 0).is_err());
        assert!(verify_cover(&g, &PointSet::empty(3).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn family_json_round_trip() {
        let mut f = CoverFamily::new(3).unwrap();
        f.push(level(3, 1), 1).unwrap();
        f.push(Hyperplane::coordinate(3, 0, 0).unwrap(), 2).unwrap();
        let json = f.to_json();
        assert_eq!(
            json,
            r#"{"n":3,"planes":[{"a":[1,1,1],"b":1,"mult":1},{"a":[1,0,0],"b":0,"mult":2}]}"#
        );
        assert_eq!(CoverFamily::from_json(&json).unwrap(), f);
        assert!(CoverFamily::from_json(r#"{"n":2,"planes":[{"a":[1,1,1],"b":0,"mult":1}]}"#).is_err());
        assert!(CoverFamily::from_json(r#"{"n":2,"planes":[{"a":[0,0],"b":0,"mult":1}]}"#).is_err());
        assert!(CoverFamily::from_json(r#"{"n":2,"planes":[{"a":[1,0],"b":0,"mult":0}]}"#).is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let g = CoverFamily::from_planes(2, [level(2, 1)]).unwrap();
        let rep = verify_cover(&g, &PointSet::empty(2).unwrap(), 1, 0).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(
            json,
            r#"{"ok":false,"violations":[{"point":"00","expected":{"kind":"at_least","count":1},"actual":0},{"point":"11","expected":{"kind":"at_least","count":1},"actual":0}],"m":1}"#
        );
        let back: CoverReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn display_plane() {
        let h = Hyperplane::new(vec![1, 1, -3, 0], 0).unwrap();
        assert_eq!(h.to_string(), "x1 + x2 - 3x3 = 0");
        assert_eq!(level(2, 2).to_string(), "x1 + x2 - 2 = 0");
        assert_eq!(Hyperplane::new(vec![-2, 0], -1).unwrap().to_string(), "-2x1 + 1 = 0");
    }
}
