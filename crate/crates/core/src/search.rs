//! Minimal `(t, l)`-cover search over the hyperplane traces realizable with
//! bounded integer coefficients.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complexity::index_complexity_exact;
use crate::error::{out_of_range, Error, Result};
use crate::hypercube::PointSet;
use crate::hyperplane_cover::{check_cover_params, verify_cover, CoverFamily, Hyperplane};

pub const MAX_SEARCH_DIM: usize = 5;
pub const MAX_SEARCH_T: u32 = 3;

/// Distinct nonempty proper traces `{x in Q^n : <a,x> = b}` for
/// `a in [-B, B]^n \ {0}`, each with a representative of minimal magnitude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCatalog {
    n: usize,
    coeff_bound: i64,
    /// Bit `x` of the key is set when the point with bit pattern `x` lies on the trace.
    entries: BTreeMap<u64, Hyperplane>,
}

/// Ordering key for representatives: smaller is preferred.
fn magnitude(a: &[i64], b: i64) -> (i64, i64, i64, Vec<i64>, i64) {
    let max = a.iter().map(|c| c.abs()).max().unwrap_or(0);
    let sum = a.iter().map(|c| c.abs()).sum();
    (max, sum, b.abs(), a.to_vec(), b)
}

fn merge_min(into: &mut BTreeMap<u64, (Vec<i64>, i64)>, mask: u64, a: Vec<i64>, b: i64) {
    match into.get(&mask) {
        Some((a0, b0)) if magnitude(a0, *b0) <= magnitude(&a, b) => {}
        _ => {
            into.insert(mask, (a, b));
        }
    }
}

/// Builds the catalog for `n <= 5` and `B <= n + 1`.
pub fn enumerate_traces(n: usize, coeff_bound: i64) -> Result<TraceCatalog> {
    if n == 0 || n > MAX_SEARCH_DIM {
        return Err(out_of_range("n", n, format!("1..={MAX_SEARCH_DIM}")));
    }
    if coeff_bound < 1 || coeff_bound > n as i64 + 1 {
        return Err(out_of_range("coeff_bound", coeff_bound, format!("1..={}", n + 1)));
    }
    let width = (2 * coeff_bound + 1) as u64;
    let total = width.pow(n as u32);
    let full = (1u64 << (1 << n)) - 1;
    let found = (0..total)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<u64, (Vec<i64>, i64)>, code| {
            let mut a = vec![0i64; n];
            let mut c = code;
            for slot in a.iter_mut() {
                *slot = (c % width) as i64 - coeff_bound;
                c /= width;
            }
            if a.iter().all(|&x| x == 0) {
                return acc;
            }
            let mut by_value: BTreeMap<i64, u64> = BTreeMap::new();
            for x in 0u64..1 << n {
                let v: i64 = (0..n).filter(|i| (x >> i) & 1 == 1).map(|i| a[i]).sum();
                *by_value.entry(v).or_insert(0) |= 1 << x;
            }
            for (b, mask) in by_value {
                if mask != full {
                    merge_min(&mut acc, mask, a.clone(), b);
                }
            }
            acc
        })
        .reduce(BTreeMap::new, |mut left, right| {
            for (mask, (a, b)) in right {
                merge_min(&mut left, mask, a, b);
            }
            left
        });
    let entries = found
        .into_iter()
        .map(|(mask, (a, b))| Ok((mask, Hyperplane::new(a, b)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(TraceCatalog { n, coeff_bound, entries })
}

impl TraceCatalog {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff_bound(&self) -> i64 {
        self.coeff_bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_trace(&self, trace: &PointSet) -> bool {
        self.entries.contains_key(&mask_of(trace))
    }

    pub fn representative(&self, trace: &PointSet) -> Option<&Hyperplane> {
        self.entries.get(&mask_of(trace))
    }

    pub fn iter(&self) -> impl Iterator<Item = (PointSet, &Hyperplane)> {
        let n = self.n;
        self.entries.iter().map(move |(&mask, h)| (set_of(n, mask), h))
    }
}

fn mask_of(s: &PointSet) -> u64 {
    s.iter().fold(0u64, |m, p| m | 1 << p.bits())
}

fn set_of(n: usize, mask: u64) -> PointSet {
    PointSet::from_predicate(n, |p| (mask >> p.bits()) & 1 == 1).expect("n is small")
}

/// Where the size sweep starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchStart {
    /// The applicable degree lower bound (only meaningful for `l = t - 1`).
    #[default]
    LowerBound,
    /// Size zero, so minimality within the catalog is established by search alone.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    pub start: SearchStart,
    /// Largest size tried; defaults to `lower_bound + n + 2t`.
    pub max_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub t: u32,
    pub l: u32,
    pub coeff_bound: i64,
    /// Smallest size with a feasible family among the sizes tried.
    pub size: Option<usize>,
    pub family: Option<CoverFamily>,
    /// Unconditional lower bound on the family size.
    pub lower_bound: usize,
    /// First size tried.
    pub searched_from: usize,
    /// Every size below `size` (or up to the cap when nothing was found)
    /// starting at `searched_from` was explored completely.
    pub exhausted: bool,
}

fn layer_weight(s: &PointSet) -> Option<usize> {
    let n = s.dim();
    let k = s.iter().next()?.weight() as usize;
    let binom = (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
    (s.iter().all(|p| p.weight() as usize == k) && s.len() as u64 == binom).then_some(k)
}

/// Lower bound on the size of a `(t, l)`-cover of `Q^n \ S`.
pub fn cover_lower_bound(s: &PointSet, t: u32, l: u32) -> Result<usize> {
    let n = s.dim();
    let mut lb = 0;
    if s.len() < 1 << n {
        lb = t as usize;
    }
    if !s.is_empty() {
        lb = lb.max(l as usize);
    }
    if l + 1 == t && !s.is_empty() {
        let pad = 2 * t as usize - 2;
        if let Some(k) = layer_weight(s) {
            lb = lb.max(k.max(n - k) + pad);
        }
        if t == 1 || n + 3 >= 2 * t as usize {
            let (r, _) = index_complexity_exact(s)?;
            lb = lb.max(n - r + pad);
        }
    }
    Ok(lb)
}

struct Problem {
    npoints: usize,
    need: Vec<u32>,
    exact: Vec<bool>,
    planes: Vec<u64>,
    through: Vec<Vec<usize>>,
}

struct State {
    counts: Vec<u32>,
    banned: Vec<bool>,
    chosen: Vec<usize>,
}

impl Problem {
    fn allowed(&self, st: &State, plane: usize) -> bool {
        if st.banned[plane] {
            return false;
        }
        let mask = self.planes[plane];
        (0..self.npoints)
            .all(|x| (mask >> x) & 1 == 0 || !self.exact[x] || st.counts[x] < self.need[x])
    }

    fn deficit(&self, st: &State, x: usize) -> u32 {
        self.need[x].saturating_sub(st.counts[x])
    }

    /// Most constrained deficient point and its branch list, or `None` when
    /// every requirement is met.
    fn pick(&self, st: &State) -> Option<(usize, Vec<usize>)> {
        (0..self.npoints)
            .filter(|&x| self.deficit(st, x) > 0)
            .map(|x| {
                let opts: Vec<usize> =
                    self.through[x].iter().copied().filter(|&h| self.allowed(st, h)).collect();
                (x, opts)
            })
            .min_by_key(|(x, opts)| (opts.len(), *x))
    }

    fn hopeless(&self, st: &State, remaining: usize) -> bool {
        let mut deficit_mask = 0u64;
        let mut total = 0u64;
        for x in 0..self.npoints {
            let d = self.deficit(st, x);
            if d as usize > remaining {
                return true;
            }
            if d > 0 {
                deficit_mask |= 1 << x;
                total += d as u64;
            }
        }
        if total == 0 {
            return false;
        }
        let best = (0..self.planes.len())
            .filter(|&h| self.planes[h] & deficit_mask != 0 && self.allowed(st, h))
            .map(|h| (self.planes[h] & deficit_mask).count_ones() as u64)
            .max()
            .unwrap_or(0);
        total > best * remaining as u64
    }

    fn apply(&self, st: &mut State, plane: usize, delta: i32) {
        let mask = self.planes[plane];
        for x in 0..self.npoints {
            if (mask >> x) & 1 == 1 {
                st.counts[x] = (st.counts[x] as i32 + delta) as u32;
            }
        }
        if delta > 0 {
            st.chosen.push(plane);
        } else {
            st.chosen.pop();
        }
    }

    fn dfs(&self, st: &mut State, remaining: usize) -> bool {
        let Some((_, options)) = self.pick(st) else {
            return true;
        };
        if remaining == 0 || self.hopeless(st, remaining) {
            return false;
        }
        let mut newly_banned = Vec::new();
        let mut found = false;
        for h in options {
            self.apply(st, h, 1);
            if self.dfs(st, remaining - 1) {
                found = true;
                break;
            }
            self.apply(st, h, -1);
            st.banned[h] = true;
            newly_banned.push(h);
        }
        for h in newly_banned {
            st.banned[h] = false;
        }
        found
    }

    fn fresh_state(&self) -> State {
        State {
            counts: vec![0; self.npoints],
            banned: vec![false; self.planes.len()],
            chosen: Vec::new(),
        }
    }

    /// Feasible family of at most `size` planes, found deterministically.
    fn solve(&self, size: usize) -> Option<Vec<usize>> {
        let root = self.fresh_state();
        let Some((_, options)) = self.pick(&root) else {
            return Some(Vec::new());
        };
        if size == 0 || self.hopeless(&root, size) {
            return None;
        }
        options.par_iter().enumerate().find_map_first(|(i, &h)| {
            let mut st = self.fresh_state();
            for &earlier in &options[..i] {
                st.banned[earlier] = true;
            }
            self.apply(&mut st, h, 1);
            self.dfs(&mut st, size - 1).then(|| st.chosen.clone())
        })
    }
}

/// Ascending-size branch and bound for a `(t, l)`-cover of `Q^n \ S` using
/// catalog representatives, duplicates allowed.
pub fn min_cover_search(
    catalog: &TraceCatalog,
    s: &PointSet,
    t: u32,
    l: u32,
    options: SearchOptions,
) -> Result<SearchResult> {
    let n = catalog.n;
    if s.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
    }
    check_cover_params(t, l)?;
    if t > MAX_SEARCH_T {
        return Err(out_of_range("t", t, format!("1..={MAX_SEARCH_T}")));
    }
    let npoints = 1usize << n;
    let in_s = s.indicator()?;
    let need: Vec<u32> = (0..npoints).map(|x| if in_s[x] { l } else { t }).collect();
    let mut planes: Vec<u64> = catalog
        .entries
        .keys()
        .copied()
        .filter(|&mask| l > 0 || (0..npoints).all(|x| (mask >> x) & 1 == 0 || !in_s[x]))
        .collect();
    planes.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
    let through: Vec<Vec<usize>> = (0..npoints)
        .map(|x| (0..planes.len()).filter(|&h| (planes[h] >> x) & 1 == 1).collect())
        .collect();
    let problem = Problem { npoints, need, exact: in_s, planes, through };

    let lower_bound = cover_lower_bound(s, t, l)?;
    let searched_from = match options.start {
        SearchStart::LowerBound => lower_bound,
        SearchStart::Zero => 0,
    };
    let max_size = options.max_size.unwrap_or(lower_bound + n + 2 * t as usize);
    let mut result = SearchResult {
        n,
        t,
        l,
        coeff_bound: catalog.coeff_bound,
        size: None,
        family: None,
        lower_bound,
        searched_from,
        exhausted: true,
    };
    for size in searched_from..=max_size {
        let Some(chosen) = problem.solve(size) else {
            continue;
        };
        let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
        for h in &chosen {
            *counts.entry(problem.planes[*h]).or_insert(0) += 1;
        }
        let mut family = CoverFamily::new(n)?;
        for (mask, mult) in counts {
            family.push(catalog.entries[&mask].clone(), mult)?;
        }
        let report = verify_cover(&family, s, t, l)?;
        if !report.ok {
            return Err(Error::BoundViolated("search produced a family that fails verification".into()));
        }
        if l + 1 == t && family.size() < lower_bound {
            return Err(Error::BoundViolated(format!(
                "family of size {} beats the lower bound {lower_bound}",
                family.size()
            )));
        }
        result.size = Some(family.size());
        result.family = Some(family);
        return Ok(result);
    }
    Ok(result)
}
