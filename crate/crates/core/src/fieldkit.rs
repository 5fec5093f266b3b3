//! Prime-field procedures: Nullstellensatz witnesses, restricted sumsets,
//! the sumset coefficient test, and a Chevalley-Warning style search.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::complexity::algebraic_complexity;
use crate::error::{out_of_range, Error, Result};
use crate::field::{PrimeField, Ring};
use crate::polynomial::{grid_size, Degree, SparsePoly};

pub type FpPoly = SparsePoly<PrimeField>;

/// Largest product set scanned exhaustively.
pub const MAX_SCAN_POINTS: u128 = 10_000_000;

fn reduce_distinct(field: PrimeField, set: &[u64], what: &'static str) -> Result<Vec<u64>> {
    let p = field.modulus();
    let mut out: Vec<u64> = set.iter().map(|a| a % p).collect();
    out.sort_unstable();
    let before = out.len();
    out.dedup();
    if out.len() != before {
        return Err(Error::Invalid(format!("{what} has repeated elements mod {p}")));
    }
    if out.is_empty() {
        return Err(Error::EmptySet(what));
    }
    Ok(out)
}

/// `S_1 x ... x S_n` with a per-coordinate degree vector `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub p: u64,
    /// Sorted, reduced, distinct.
    pub sets: Vec<Vec<u64>>,
    pub degrees: Vec<u32>,
}

impl GridSpec {
    pub fn new(field: PrimeField, sets: Vec<Vec<u64>>, degrees: Vec<u32>) -> Result<Self> {
        if sets.len() != degrees.len() {
            return Err(Error::DimensionMismatch { expected: sets.len(), found: degrees.len() });
        }
        let sets = sets
            .iter()
            .map(|s| reduce_distinct(field, s, "grid set"))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridSpec { p: field.modulus(), sets, degrees })
    }

    pub fn dim(&self) -> usize {
        self.sets.len()
    }
}

/// Point of a product set with the given linear index; coordinate 0 is the
/// most significant digit, so index order is lexicographic order.
fn decode(sets: &[Vec<u64>], mut index: u128, out: &mut [u64]) {
    for i in (0..sets.len()).rev() {
        let radix = sets[i].len() as u128;
        out[i] = sets[i][(index % radix) as usize];
        index /= radix;
    }
}

/// Lexicographically first point of the product set satisfying `hit`.
fn first_hit(sets: &[Vec<u64>], hit: impl Fn(&[u64]) -> bool + Sync) -> Option<Vec<u64>> {
    let total = grid_size(sets) as u64;
    let n = sets.len();
    (0..total).into_par_iter().find_map_first(|i| {
        let mut pt = vec![0u64; n];
        decode(sets, i as u128, &mut pt);
        hit(&pt).then_some(pt)
    })
}

/// First grid point where `f` does not vanish, after checking the
/// Nullstellensatz hypotheses.
pub fn cn_witness(f: &FpPoly, grid: &GridSpec) -> Result<Vec<u64>> {
    let n = grid.dim();
    if f.nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.nvars() });
    }
    if f.ring().modulus() != grid.p {
        return Err(Error::Invalid("polynomial and grid use different primes".into()));
    }
    let total: u32 = grid.degrees.iter().sum();
    if f.degree() != Degree::Finite(total) {
        return Err(Error::Hypothesis(format!(
            "deg f = {} but the degree vector sums to {total}",
            f.degree()
        )));
    }
    if f.coefficient_of(&grid.degrees)? == 0 {
        return Err(Error::Hypothesis(format!(
            "coefficient of x^{:?} in f is zero",
            grid.degrees
        )));
    }
    if let Some(i) = (0..n).find(|&i| grid.sets[i].len() as u64 <= grid.degrees[i] as u64) {
        return Err(Error::Hypothesis(format!(
            "|S_{}| = {} is not larger than t_{} = {}",
            i + 1,
            grid.sets[i].len(),
            i + 1,
            grid.degrees[i]
        )));
    }
    if grid_size(&grid.sets) > MAX_SCAN_POINTS {
        return Err(Error::SizeCap(format!("grid has more than {MAX_SCAN_POINTS} points")));
    }
    first_hit(&grid.sets, |pt| f.evaluate(pt).expect("dimension checked") != 0)
        .ok_or_else(|| Error::Exhausted("f vanishes on the whole grid".into()))
}

/// `h = prod_{j=1}^{n-1} h_j` over `Z_p` with `h_j = n x_1 + sum_{i>=2} x_i - j`
/// for `j <= n-2` and `h_{n-1} = sum_{i>=2} x_i - (n-1)`.
pub fn claim_polynomial(n: usize, field: PrimeField) -> Result<FpPoly> {
    let mut h = FpPoly::one(field, n);
    for j in 1..n {
        let mut coeffs = vec![1u64; n];
        coeffs[0] = if j + 1 < n { field.from_i64(n as i64) } else { 0 };
        let lin = FpPoly::affine(field, &coeffs, field.from_i64(-(j as i64)));
        h = h.mul(&lin)?;
    }
    Ok(h)
}

/// Coefficient of `x_1 ... x_n` in `(sum x_i) h(x)` by full expansion,
/// checked against `(n-1)^3 (n-2)! mod p`.
pub fn claim_coeff(n: usize, p: u64) -> Result<u64> {
    if n < 3 {
        return Err(out_of_range("n", n, ">= 3"));
    }
    let field = PrimeField::new(p)?;
    if p <= n as u64 {
        return Err(Error::Hypothesis(format!("need p > n (p = {p}, n = {n})")));
    }
    let h = claim_polynomial(n, field)?;
    let sum = FpPoly::affine(field, &vec![1; n], 0);
    let coeff = sum.mul(&h)?.coefficient_of(&vec![1; n])?;
    let closed = (1..=(n as u64 - 2)).fold(field.pow(&((n as u64 - 1) % p), 3), |acc, i| {
        field.mul(&acc, &(i % p))
    });
    if coeff != closed {
        return Err(Error::BoundViolated(format!(
            "expanded coefficient {coeff} differs from closed form {closed}"
        )));
    }
    Ok(coeff)
}

/// Sums `a_1 + ... + a_n` over the product set with the tuples of
/// `forbidden` removed.
pub fn restricted_sumset(p: u64, sets: &[Vec<u64>], forbidden: &[Vec<u64>]) -> Result<BTreeSet<u64>> {
    let field = PrimeField::new(p)?;
    let sets = sets
        .iter()
        .map(|s| reduce_distinct(field, s, "A_i"))
        .collect::<Result<Vec<_>>>()?;
    if grid_size(&sets) > MAX_SCAN_POINTS {
        return Err(Error::SizeCap(format!("product set has more than {MAX_SCAN_POINTS} points")));
    }
    let banned: HashSet<Vec<u64>> =
        forbidden.iter().map(|x| x.iter().map(|c| c % p).collect()).collect();
    let mut sums = BTreeSet::new();
    crate::polynomial::for_each_grid_point(&sets, |pt| {
        if !banned.contains(pt) {
            sums.insert(pt.iter().fold(0, |acc, a| (acc + a) % p));
        }
        true
    });
    Ok(sums)
}

/// Inputs of the forbidden-set sumset bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SumsetInstance {
    pub field: PrimeField,
    /// Sorted, reduced, distinct.
    pub sets: Vec<Vec<u64>>,
    pub forbidden: Vec<Vec<u64>>,
    pub g: FpPoly,
    /// Zero-based index of the variable `x_k` multiplying `g`.
    pub pivot: usize,
    /// `sum_i (|A_i| - 1) - deg g - 1`.
    pub m: u32,
}

impl SumsetInstance {
    /// Validates `S` inside the product set and `|S ∩ Z(g)| = |S| - 1`.
    pub fn new(
        field: PrimeField,
        sets: Vec<Vec<u64>>,
        forbidden: Vec<Vec<u64>>,
        g: FpPoly,
        pivot: usize,
    ) -> Result<Self> {
        let n = sets.len();
        if n == 0 {
            return Err(Error::EmptySet("A"));
        }
        let sets = sets
            .iter()
            .map(|s| reduce_distinct(field, s, "A_i"))
            .collect::<Result<Vec<_>>>()?;
        if g.nvars() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.nvars() });
        }
        if *g.ring() != field {
            return Err(Error::Invalid("g is over a different field".into()));
        }
        if pivot >= n {
            return Err(out_of_range("k", pivot as i64 + 1, format!("1..={n}")));
        }
        let p = field.modulus();
        let mut s: Vec<Vec<u64>> =
            forbidden.iter().map(|x| x.iter().map(|c| c % p).collect()).collect();
        s.sort();
        s.dedup();
        for x in &s {
            if x.len() != n || x.iter().zip(&sets).any(|(c, a)| a.binary_search(c).is_err()) {
                return Err(Error::Invalid(format!("forbidden tuple {x:?} is not in the product set")));
            }
        }
        let zeros = s.iter().filter(|x| g.evaluate(x).expect("length checked") == 0).count();
        if s.is_empty() || zeros + 1 != s.len() {
            return Err(Error::Hypothesis(format!(
                "g must vanish on all but one forbidden tuple ({zeros} of {} vanish)",
                s.len()
            )));
        }
        let deg_g = g.degree().finite().expect("g is nonzero at one tuple") as i64;
        let m = sets.iter().map(|a| a.len() as i64 - 1).sum::<i64>() - deg_g - 1;
        if m < 0 {
            return Err(Error::Invalid(format!("m = {m} is negative")));
        }
        Ok(SumsetInstance { field, sets, forbidden: s, g, pivot, m: m as u32 })
    }

    pub fn dim(&self) -> usize {
        self.sets.len()
    }

    /// Exponents `c_i = |A_i| - 1`.
    pub fn target(&self) -> Vec<u32> {
        self.sets.iter().map(|a| a.len() as u32 - 1).collect()
    }
}

fn multinomial_mod(m: u32, parts: &[u32], p: u64) -> u64 {
    let fact = |k: u32| (1..=k).fold(BigUint::from(1u32), |acc, i| acc * i);
    let denom = parts.iter().fold(BigUint::from(1u32), |acc, &k| acc * fact(k));
    let value = fact(m) / denom;
    (value % p).to_u64().expect("residue fits")
}

/// Coefficient of `prod x_i^{c_i}` in `x_k g(x) (sum x_i)^m`, assembled from
/// multinomials against the terms of `g`.
pub fn res_sum_coefficient(inst: &SumsetInstance) -> u64 {
    let field = inst.field;
    let target = inst.target();
    let mut acc = 0u64;
    for (e, c) in inst.g.terms() {
        let mut delta = Vec::with_capacity(target.len());
        let mut fits = true;
        for (i, (&ci, &ei)) in target.iter().zip(e).enumerate() {
            let used = ei + u32::from(i == inst.pivot);
            if used > ci {
                fits = false;
                break;
            }
            delta.push(ci - used);
        }
        if !fits || delta.iter().sum::<u32>() != inst.m {
            continue;
        }
        let mult = multinomial_mod(inst.m, &delta, field.modulus());
        acc = field.add(&acc, &field.mul(c, &mult));
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResSumReport {
    pub m: u32,
    pub coefficient: u64,
    /// False when the coefficient vanishes; the bound then says nothing.
    pub hypothesis_holds: bool,
    pub sumset_size: usize,
    pub bound: u32,
}

/// Computes the hypothesis coefficient and the sumset; a nonzero
/// coefficient with `|sumset| < m + 1` is reported as
/// [`Error::BoundViolated`].
pub fn check_res_sum_theorem(inst: &SumsetInstance) -> Result<ResSumReport> {
    let coefficient = res_sum_coefficient(inst);
    let sums = restricted_sumset(inst.field.modulus(), &inst.sets, &inst.forbidden)?;
    let report = ResSumReport {
        m: inst.m,
        coefficient,
        hypothesis_holds: coefficient != 0,
        sumset_size: sums.len(),
        bound: inst.m + 1,
    };
    if report.hypothesis_holds && report.sumset_size < report.bound as usize {
        return Err(Error::BoundViolated(format!(
            "restricted sumset has {} elements, below {}",
            report.sumset_size, report.bound
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErdosHeilbronnReport {
    pub p: u64,
    pub set_size: usize,
    pub distinct_sums: usize,
    /// `min{p, 2|A| - 3}`.
    pub bound: i64,
    pub ok: bool,
    /// The forbidden-set route, when `2 <= |A|` and `2|A| - 3 < p`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub res_sum: Option<ResSumReport>,
}

pub const MAX_EH_PRIME: u64 = 101;

/// `|{a + a' : a != a'}| >= min{p, 2|A| - 3}` by brute force, cross-checked
/// through the diagonal-plus-one-pair forbidden set with `g = x_1 - x_2`.
pub fn erdos_heilbronn_check(p: u64, a: &[u64]) -> Result<ErdosHeilbronnReport> {
    if p > MAX_EH_PRIME {
        return Err(out_of_range("p", p as i64, format!("prime <= {MAX_EH_PRIME}")));
    }
    let field = PrimeField::new(p)?;
    let a = reduce_distinct(field, a, "A")?;
    let mut sums = BTreeSet::new();
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            sums.insert((x + y) % p);
        }
    }
    let size = a.len() as i64;
    let bound = (p as i64).min(2 * size - 3);
    let mut report = ErdosHeilbronnReport {
        p,
        set_size: a.len(),
        distinct_sums: sums.len(),
        bound,
        ok: sums.len() as i64 >= bound,
        res_sum: None,
    };
    if a.len() >= 2 && 2 * size - 3 < p as i64 {
        let mut forbidden: Vec<Vec<u64>> = a.iter().map(|&x| vec![x, x]).collect();
        forbidden.push(vec![a[0], a[1]]);
        let g = FpPoly::affine(field, &[1, p - 1], 0);
        let inst = SumsetInstance::new(field, vec![a.clone(), a.clone()], forbidden, g, 1)?;
        let rs = check_res_sum_theorem(&inst)?;
        if rs.sumset_size != sums.len() || !rs.hypothesis_holds {
            report.ok = false;
        }
        report.res_sum = Some(rs);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CwReport {
    /// `a(T)`.
    pub r: usize,
    pub degree_sum: u64,
    /// `(q - 1) sum deg P_i < n (q - 1) - r`.
    pub hypothesis_holds: bool,
    /// Lexicographically first common zero outside `T`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero: Option<Vec<u64>>,
}

/// Checks `T` against the common zeros, computes `a(T)` and, when the
/// degree hypothesis holds, scans `Z_p^n \ T` for a common zero.
pub fn cw_generalized_search(polys: &[FpPoly], t_set: &[Vec<u64>]) -> Result<CwReport> {
    let first = polys.first().ok_or(Error::EmptySet("polynomial system"))?;
    let field = *first.ring();
    let n = first.nvars();
    let p = field.modulus();
    if polys.iter().any(|q| q.nvars() != n || *q.ring() != field) {
        return Err(Error::Invalid("polynomials differ in variables or field".into()));
    }
    if (p as u128).checked_pow(n as u32).map_or(true, |size| size > MAX_SCAN_POINTS) {
        return Err(Error::SizeCap(format!("{p}^{n} exceeds {MAX_SCAN_POINTS}")));
    }
    if t_set.is_empty() {
        return Err(Error::EmptySet("T"));
    }
    let t_reduced: HashSet<Vec<u64>> =
        t_set.iter().map(|x| x.iter().map(|c| c % p).collect()).collect();
    for x in &t_reduced {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        if polys.iter().any(|q| q.evaluate(x).expect("length checked") != 0) {
            return Err(Error::Hypothesis(format!("{x:?} in T is not a common zero")));
        }
    }
    let t_points: Vec<Vec<u64>> = t_reduced.iter().cloned().collect();
    let (r, _) = algebraic_complexity(&t_points, p)?;
    let degree_sum: u64 = polys.iter().map(|q| q.degree().finite().unwrap_or(0) as u64).sum();
    let hypothesis_holds = (p - 1) as i128 * (degree_sum as i128) < (n as i128) * (p - 1) as i128 - r as i128;
    if !hypothesis_holds {
        return Ok(CwReport { r, degree_sum, hypothesis_holds, zero: None });
    }
    let sets: Vec<Vec<u64>> = vec![(0..p).collect(); n];
    let zero = first_hit(&sets, |pt| {
        !t_reduced.contains(pt) && polys.iter().all(|q| q.evaluate(pt).expect("length checked") == 0)
    })
    .ok_or_else(|| Error::Exhausted("no common zero outside T".into()))?;
    Ok(CwReport { r, degree_sum, hypothesis_holds, zero: Some(zero) })
}
