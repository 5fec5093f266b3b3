//! Explicit hyperplane families.
//!
//! All families use integer coefficients. Padding copies for multiplicity
//! `t > 1` are always `x_1 = 0` and `x_1 = 1`, which together pass through
//! every vertex exactly once.

use crate::error::{out_of_range, Result};
use crate::hypercube::{layer, CubePoint, PointSet};
use crate::hyperplane_cover::{CoverFamily, Hyperplane};

/// `G_j`: `x_1 + ... + x_n - j = 0`, whose trace is the layer of weight `j`.
pub fn level_plane(n: usize, j: usize) -> Result<Hyperplane> {
    if j > n {
        return Err(out_of_range("j", j, format!("0..={n}")));
    }
    Hyperplane::new(vec![1; n], j as i64)
}

/// `l` planes whose joint trace is exactly the tail set `T(l)` (weights
/// below `l` or above `n - l`).
///
/// Plane `j` (1-based) is `sum_{i <= n-j} x_i - (n - 2l + j) x_{n-j+1} - (l - j) = 0`:
/// with `x_{n-j+1} = 0` it picks weight `l - j` among the first `n - j`
/// coordinates, with `x_{n-j+1} = 1` it picks weight `n - l` there.
pub fn tail_cover(n: usize, l: usize) -> Result<CoverFamily> {
    if n == 0 || l == 0 || l > n / 2 {
        return Err(out_of_range("l", l, format!("1..={}", n / 2)));
    }
    let mut fam = CoverFamily::new(n)?;
    for j in 1..=l {
        let mut a = vec![0i64; n];
        for c in a.iter_mut().take(n - j) {
            *c = 1;
        }
        a[n - j] = -((n - 2 * l + j) as i64);
        fam.push(Hyperplane::new(a, (l - j) as i64)?, 1)?;
    }
    Ok(fam)
}

fn pad_multiplicity(fam: &mut CoverFamily, t: u32) -> Result<()> {
    if t > 1 {
        let n = fam.dim();
        fam.push(Hyperplane::coordinate(n, 0, 0)?, t - 1)?;
        fam.push(Hyperplane::coordinate(n, 0, 1)?, t - 1)?;
    }
    Ok(())
}

/// A `(t, t-1)`-cover of `Q^n` minus the layer `Q^n_k` with
/// `max{k, n-k} + 2t - 2` planes.
///
/// For `0 < k < n`, with `r = min{k, n-k}`: the tail cover for `T(r)`, the
/// level planes `G_j` for `j` in `r+1..=n-r` (when `r = k`) or `r..=n-r-1`
/// (otherwise), then the padding copies. For `k` in `{0, n}` all level planes
/// except `G_k`.
pub fn layer_complement_cover(n: usize, k: usize, t: u32) -> Result<CoverFamily> {
    if n == 0 {
        return Err(out_of_range("n", n, ">= 1"));
    }
    if k > n {
        return Err(out_of_range("k", k, format!("0..={n}")));
    }
    if t == 0 {
        return Err(out_of_range("t", t, ">= 1"));
    }
    let mut fam = CoverFamily::new(n)?;
    if k == 0 || k == n {
        for j in (0..=n).filter(|&j| j != k) {
            fam.push(level_plane(n, j)?, 1)?;
        }
    } else {
        let r = k.min(n - k);
        fam = tail_cover(n, r)?;
        let window = if r == k { r + 1..=n - r } else { r..=n - r - 1 };
        for j in window {
            fam.push(level_plane(n, j)?, 1)?;
        }
    }
    pad_multiplicity(&mut fam, t)?;
    Ok(fam)
}

/// `min{k, n-k}` planes covering every point of the layer `Q^n_k` except one
/// vertex `v`, which is returned alongside.
///
/// For `k <= n-k`, `v` has ones exactly in the first `k` coordinates and plane
/// `j` is `n x_j + sum_{i != j} x_i - k = 0`; on the layer it vanishes iff
/// `x_j = 0`. For `k > n-k` the same construction for `n-k` is mapped
/// through `x -> 1 - x`.
pub fn layer_minus_point_cover(n: usize, k: usize) -> Result<(CoverFamily, CubePoint)> {
    if n == 0 {
        return Err(out_of_range("n", n, ">= 1"));
    }
    if k > n {
        return Err(out_of_range("k", k, format!("0..={n}")));
    }
    let small = k.min(n - k);
    let mut fam = CoverFamily::new(n)?;
    let ones_prefix = if small == 64 { u64::MAX } else { (1u64 << small) - 1 };
    let v_small = CubePoint::new(n, ones_prefix)?;
    for j in 0..small {
        let mut a = vec![1i64; n];
        a[j] = n as i64;
        let plane = if k <= n - k {
            Hyperplane::new(a, small as i64)?
        } else {
            // <a, 1 - x> - b = 0  <=>  <a, x> - (sum(a) - b) = 0
            let sum: i64 = a.iter().sum();
            Hyperplane::new(a, sum - small as i64)?
        };
        fam.push(plane, 1)?;
    }
    let v = if k <= n - k { v_small } else { v_small.complement() };
    Ok((fam, v))
}

/// The half-cube set `S' = {u : u_1 = 1, u_2 + ... + u_n < n-1} ∪ {0}`.
pub fn halfcube_set(n: usize) -> Result<PointSet> {
    if n < 3 {
        return Err(out_of_range("n", n, ">= 3"));
    }
    PointSet::from_predicate(n, |p| {
        p.bits() == 0 || (p.coord(0) == 1 && (p.weight() as usize - 1) < n - 1)
    })
}

/// `n - 1 + 2(t - 1)` planes forming a `(t, t-1)`-cover of `Q^n` minus the
/// half-cube set, returned with that set.
///
/// Planes `n x_1 + sum_{i>=2} x_i - j = 0` for `j = 1..=n-2` and
/// `sum_{i>=2} x_i - (n - 1) = 0`.
pub fn halfcube_example_cover(n: usize, t: u32) -> Result<(CoverFamily, PointSet)> {
    if n < 3 {
        return Err(out_of_range("n", n, ">= 3"));
    }
    if t == 0 {
        return Err(out_of_range("t", t, ">= 1"));
    }
    let mut fam = CoverFamily::new(n)?;
    for j in 1..=(n - 2) as i64 {
        let mut a = vec![1i64; n];
        a[0] = n as i64;
        fam.push(Hyperplane::new(a, j)?, 1)?;
    }
    let mut a = vec![1i64; n];
    a[0] = 0;
    fam.push(Hyperplane::new(a, (n - 1) as i64)?, 1)?;
    pad_multiplicity(&mut fam, t)?;
    Ok((fam, halfcube_set(n)?))
}

/// The symmetric set `S = Q^7 \ Q^7_3` together with the 4-plane family
/// covering exactly `S`.
///
/// `S` has seven distinct weights, so the conjectured formula
/// "number of weights minus 2" predicts 5 planes; 4 suffice.
#[derive(Debug, Clone)]
pub struct SymmetricCounterexample {
    pub family: CoverFamily,
    /// The covered set.
    pub covered: PointSet,
    /// The left-out layer.
    pub uncovered: PointSet,
    /// `|W(S)| - 2`.
    pub conjectured_size: usize,
}

pub fn venkitesh_counterexample() -> Result<SymmetricCounterexample> {
    let (n, k) = (7, 3);
    let family = layer_complement_cover(n, k, 1)?;
    let uncovered = layer(n, k)?;
    let covered = uncovered.complement()?;
    let conjectured_size = crate::hypercube::weight_count(&covered) - 2;
    Ok(SymmetricCounterexample { family, covered, uncovered, conjectured_size })
}
