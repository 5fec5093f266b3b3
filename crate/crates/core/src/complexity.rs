//! Index complexity of cube subsets and algebraic complexity of point sets
//! over prime fields, each with an independently checkable witness.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::field::{Echelon, PrimeField, Ring};
use crate::hypercube::{CubePoint, PointSet};
use crate::polynomial::{Degree, SparsePoly};

pub const MAX_INDEX_SET: usize = 1 << 20;
pub const MAX_INDEX_DIM: usize = 24;

/// `v` together with coordinates `indices` (zero-based) on which `v`
/// differs from every other member of the set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexWitness {
    #[serde(with = "crate::hyperplane_cover::point_string")]
    pub v: CubePoint,
    pub indices: Vec<usize>,
}

impl IndexWitness {
    pub fn verify(&self, s: &PointSet) -> bool {
        if !s.contains(&self.v) {
            return false;
        }
        let mask = self.indices.iter().fold(0u64, |m, &i| m | 1 << i);
        s.iter().all(|u| *u == self.v || (u.bits() ^ self.v.bits()) & mask != 0)
    }
}

fn check_index_input(s: &PointSet) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptySet("S"));
    }
    if s.dim() > MAX_INDEX_DIM {
        return Err(Error::DimensionCap { n: s.dim(), cap: MAX_INDEX_DIM });
    }
    if s.len() > MAX_INDEX_SET {
        return Err(Error::SizeCap(format!("|S| = {} exceeds {MAX_INDEX_SET}", s.len())));
    }
    Ok(())
}

/// Halving procedure: split on the lowest non-constant coordinate and keep
/// the strictly smaller side (the 0-side on ties) until one point remains.
pub fn index_complexity_greedy(s: &PointSet) -> Result<(usize, IndexWitness)> {
    check_index_input(s)?;
    let mut current: Vec<CubePoint> = s.points().to_vec();
    let mut indices = Vec::new();
    while current.len() > 1 {
        let first = current[0].bits();
        let differing = current.iter().fold(0u64, |acc, p| acc | (p.bits() ^ first));
        let i = differing.trailing_zeros() as usize;
        let (ones, zeros): (Vec<CubePoint>, Vec<CubePoint>) =
            current.into_iter().partition(|p| p.coord(i) == 1);
        current = if ones.len() < zeros.len() { ones } else { zeros };
        indices.push(i);
    }
    indices.sort_unstable();
    Ok((indices.len(), IndexWitness { v: current[0], indices }))
}

/// Index sets of size `k` from `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[pos] += 1;
        for j in pos + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn witness_for(s: &PointSet, indices: &[usize]) -> Option<CubePoint> {
    let mask = indices.iter().fold(0u64, |m, &i| m | 1 << i);
    let mut counts: HashMap<u64, u32> = HashMap::with_capacity(s.len());
    for p in s {
        *counts.entry(p.bits() & mask).or_insert(0) += 1;
    }
    s.iter().find(|p| counts[&(p.bits() & mask)] == 1).copied()
}

/// Exact `r(S)`: the first hit in the order `|I|` ascending, then `I`
/// lexicographically, then `v` in point order.
pub fn index_complexity_exact(s: &PointSet) -> Result<(usize, IndexWitness)> {
    let (upper, greedy) = index_complexity_greedy(s)?;
    for size in 0..upper {
        let hit = combinations(s.dim(), size)
            .into_par_iter()
            .find_map_first(|indices| witness_for(s, &indices).map(|v| IndexWitness { v, indices }));
        if let Some(w) = hit {
            return Ok((size, w));
        }
    }
    // Nothing smaller exists; report the lexicographically first witness of
    // the greedy size so the search order contract still holds.
    let w = combinations(s.dim(), upper)
        .into_par_iter()
        .find_map_first(|indices| witness_for(s, &indices).map(|v| IndexWitness { v, indices }))
        .unwrap_or(greedy);
    Ok((upper, w))
}

pub const MAX_ALG_PRIME: u64 = 101;
pub const MAX_ALG_POINTS: usize = 2000;
pub const MAX_ALG_DIM: usize = 8;

/// A reduced polynomial `g` over `Z_p` vanishing on `S \ {v}` with
/// `g(v) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgWitness {
    pub g: SparsePoly<PrimeField>,
    pub v: Vec<u64>,
    pub degree: usize,
}

impl AlgWitness {
    pub fn verify(&self, points: &[Vec<u64>]) -> bool {
        let ring = self.g.ring();
        if self.g.degree() != Degree::Finite(self.degree as u32) {
            return false;
        }
        let mut saw_v = false;
        for x in points {
            let val = match self.g.evaluate(x) {
                Ok(val) => val,
                Err(_) => return false,
            };
            if *x == self.v {
                saw_v = true;
                if ring.is_zero(&val) {
                    return false;
                }
            } else if !ring.is_zero(&val) {
                return false;
            }
        }
        saw_v
    }
}

/// Exponent vectors of total degree exactly `d` with each entry `< p`,
/// in lexicographic order.
fn reduced_monomials(n: usize, d: usize, p: u64) -> Vec<Vec<u32>> {
    fn rec(n: usize, i: usize, left: usize, top: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if left > top * (n - i) {
            return;
        }
        for e in 0..=left.min(top) {
            cur.push(e as u32);
            rec(n, i + 1, left - e, top, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, d, (p - 1) as usize, &mut Vec::with_capacity(n), &mut out);
    out
}

fn monomial_values(field: &PrimeField, exps: &[u32], points: &[Vec<u64>]) -> Vec<u64> {
    points
        .iter()
        .map(|x| {
            x.iter()
                .zip(exps)
                .fold(1u64, |acc, (xi, &e)| field.mul(&acc, &field.pow(xi, e)))
        })
        .collect()
}

/// Minimum degree of a reduced polynomial over `Z_p` vanishing on all of
/// `points` except exactly one. Duplicate points are merged. Points are
/// reduced mod `p`.
pub fn algebraic_complexity(points: &[Vec<u64>], p: u64) -> Result<(usize, AlgWitness)> {
    if p > MAX_ALG_PRIME {
        return Err(out_of_range("p", p as i64, format!("prime <= {MAX_ALG_PRIME}")));
    }
    let field = PrimeField::new(p)?;
    let n = points.first().ok_or(Error::EmptySet("S"))?.len();
    if n == 0 || n > MAX_ALG_DIM {
        return Err(out_of_range("n", n, format!("1..={MAX_ALG_DIM}")));
    }
    if points.iter().any(|x| x.len() != n) {
        return Err(Error::Invalid("points have different lengths".into()));
    }
    let mut pts: Vec<Vec<u64>> =
        points.iter().map(|x| x.iter().map(|c| c % p).collect()).collect();
    pts.sort();
    pts.dedup();
    if pts.len() > MAX_ALG_POINTS {
        return Err(Error::SizeCap(format!("|S| = {} exceeds {MAX_ALG_POINTS}", pts.len())));
    }

    let mut echelon = Echelon::new(field, pts.len());
    let mut basis: Vec<(Vec<u32>, Vec<u64>)> = Vec::new();
    let max_degree = n * (p as usize - 1);
    for d in 0..=max_degree {
        for exps in reduced_monomials(n, d, p) {
            if echelon.is_full() {
                break;
            }
            let row = monomial_values(&field, &exps, &pts);
            if echelon.insert(row.clone()) {
                basis.push((exps, row));
            }
        }
        let Some(col) = (0..pts.len()).find(|&c| echelon.contains_unit(c)) else {
            continue;
        };
        let a: Vec<Vec<u64>> =
            (0..pts.len()).map(|r| basis.iter().map(|(_, vals)| vals[r]).collect()).collect();
        let mut b = vec![0u64; pts.len()];
        b[col] = 1;
        let coeffs = solve_unit(&field, &a, &b)?;
        let g = SparsePoly::from_terms(
            field,
            n,
            basis.iter().zip(coeffs).map(|((e, _), c)| (e.clone(), c)),
        )?;
        return Ok((d, AlgWitness { g, v: pts[col].clone(), degree: d }));
    }
    Err(Error::Exhausted("reduced polynomials span every function; unreachable".into()))
}

fn solve_unit(field: &PrimeField, a: &[Vec<u64>], b: &[u64]) -> Result<Vec<u64>> {
    crate::field::solve_mod_p(*field, a, b)
        .ok_or_else(|| Error::Exhausted("unit vector left the row space".into()))
}
