//! Exact sparse multivariate polynomials, zero multiplicities at cube points,
//! polynomial cover checks and degree-certificate checkers.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexity::index_complexity_exact;
use crate::error::{out_of_range, Error, Result};
use crate::field::{Rationals, Ring};
use crate::hypercube::{check_enumerable, CubePoint, PointSet};
use crate::hyperplane_cover::{CoverFamily, CoverReport, Rule, Violation};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`,
/// which compares below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::NegInfinity => f.write_str("-inf"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(d) => s.serialize_u32(*d),
            Degree::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

/// A polynomial in `x_1, ..., x_n` stored as exponent vector -> nonzero
/// coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly<R: Ring> {
    ring: R,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, R::Elem>,
}

impl<R: Ring> SparsePoly<R> {
    pub fn zero(ring: R, nvars: usize) -> Self {
        SparsePoly { ring, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: R, nvars: usize, c: R::Elem) -> Self {
        Self::monomial(ring, nvars, vec![0; nvars], c).expect("zero exponent has the right length")
    }

    pub fn one(ring: R, nvars: usize) -> Self {
        let c = ring.one();
        Self::constant(ring, nvars, c)
    }

    pub fn monomial(ring: R, nvars: usize, exps: Vec<u32>, c: R::Elem) -> Result<Self> {
        let mut p = Self::zero(ring, nvars);
        p.add_term(exps, c)?;
        Ok(p)
    }

    /// The variable `x_{i+1}` (zero-based `i`).
    pub fn var(ring: R, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(out_of_range("variable index", i, format!("0..{nvars}")));
        }
        let mut e = vec![0; nvars];
        e[i] = 1;
        let c = ring.one();
        Self::monomial(ring, nvars, e, c)
    }

    /// `sum_i coeffs[i] x_{i+1} + constant`.
    pub fn affine(ring: R, coeffs: &[R::Elem], constant: R::Elem) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::constant(ring, nvars, constant);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.add_term(e, c.clone()).expect("exponent length matches");
        }
        p
    }

    pub fn from_terms(
        ring: R,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, R::Elem)>,
    ) -> Result<Self> {
        let mut p = Self::zero(ring, nvars);
        for (e, c) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    /// Adds `c * x^exps` in place.
    pub fn add_term(&mut self, exps: Vec<u32>, c: R::Elem) -> Result<()> {
        if exps.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: exps.len() });
        }
        if self.ring.is_zero(&c) {
            return Ok(());
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.ring.add(o.get(), &c);
                if self.ring.is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R::Elem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Largest exponent of `x_{i+1}` over all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn coefficient_of(&self, exps: &[u32]) -> Result<R::Elem> {
        if exps.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: exps.len() });
        }
        Ok(self.terms.get(exps).cloned().unwrap_or_else(|| self.ring.zero()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        if self.ring != other.ring {
            return Err(Error::Invalid("coefficient domains differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), self.ring.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &R::Elem) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), self.ring.mul(c, k)).expect("same shape");
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: HashMap<Vec<u32>, R::Elem> =
            HashMap::with_capacity(self.terms.len().saturating_mul(other.terms.len()).min(1 << 20));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let prod = self.ring.mul(c1, c2);
                match acc.get_mut(&e) {
                    Some(slot) => self.ring.add_assign(slot, &prod),
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let ring = &self.ring;
        Ok(SparsePoly {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect(),
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }

    /// Formal derivative with respect to `x_{i+1}`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(out_of_range("variable index", i, format!("0..{}", self.nvars)));
        }
        let mut out = Self::zero(self.ring.clone(), self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            let k = self.ring.from_i64(e[i] as i64);
            out.add_term(d, self.ring.mul(c, &k))?;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let ring = &self.ring;
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = ring.mul(&term, &ring.pow(x, k));
                }
            }
            ring.add_assign(&mut acc, &term);
        }
        Ok(acc)
    }

    /// Text form: `c * x1^a1*x3^a3 + ...`, highest degree first; `0` for the
    /// zero polynomial.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Vec<u32>, &R::Elem)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, k)| format!("x{}^{}", i + 1, k))
                    .collect();
                let coeff = self.ring.format(c);
                if vars.is_empty() {
                    coeff
                } else {
                    format!("{coeff} * {}", vars.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses the text form. Accepts `+`/`-` between terms, optional
    /// coefficients, and `xi` without an exponent.
    pub fn parse_text(ring: R, nvars: usize, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let splits = (ch == '+' || ch == '-')
                && !cur.is_empty()
                && !matches!(prev, Some('*') | Some('^') | Some('/') | Some('+') | Some('-'));
            if splits {
                pieces.push(std::mem::take(&mut cur));
            }
            if ch != '+' || !splits {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        pieces.push(cur);

        let mut poly = Self::zero(ring.clone(), nvars);
        for piece in pieces {
            let (negative, body) = strip_signs(&piece);
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {text:?}")));
            }
            let mut coeff = ring.one();
            let mut exps = vec![0u32; nvars];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {text:?}")));
                }
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, exp) = match var.split_once('^') {
                        Some((i, k)) => (i, k),
                        None => (var, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                    let exp: u32 = exp
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    if idx == 0 || idx > nvars {
                        return Err(Error::Parse(format!(
                            "variable {factor:?} outside x1..x{nvars}"
                        )));
                    }
                    exps[idx - 1] += exp;
                } else {
                    coeff = ring.mul(&coeff, &ring.parse(factor)?);
                }
            }
            if negative {
                coeff = ring.neg(&coeff);
            }
            poly.add_term(exps, coeff)?;
        }
        Ok(poly)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| serde_json::json!({ "e": e, "c": self.ring.format(c) }))
            .collect();
        serde_json::json!({ "n": self.nvars, "terms": terms })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json_value(ring: R, value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct RawTerm {
            e: Vec<u32>,
            c: serde_json::Value,
        }
        #[derive(Deserialize)]
        struct RawPoly {
            n: usize,
            terms: Vec<RawTerm>,
        }
        let raw: RawPoly =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut p = Self::zero(ring.clone(), raw.n);
        for t in raw.terms {
            let c = match &t.c {
                serde_json::Value::String(s) => ring.parse(s)?,
                serde_json::Value::Number(num) => ring.parse(&num.to_string())?,
                other => return Err(Error::Parse(format!("bad coefficient {other}"))),
            };
            p.add_term(t.e, c)?;
        }
        Ok(p)
    }

    pub fn from_json(ring: R, text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(ring, &v)
    }

    /// Either a JSON object or a JSON string holding the text form (which
    /// then needs `nvars`).
    pub fn from_value(ring: R, value: &serde_json::Value, nvars: Option<usize>) -> Result<Self> {
        match value {
            serde_json::Value::String(s) => {
                let n = nvars.ok_or_else(|| {
                    Error::Parse("text polynomial needs a known number of variables".into())
                })?;
                Self::parse_text(ring, n, s)
            }
            other => {
                let p = Self::from_json_value(ring, other)?;
                if let Some(n) = nvars {
                    if p.nvars != n {
                        return Err(Error::DimensionMismatch { expected: n, found: p.nvars });
                    }
                }
                Ok(p)
            }
        }
    }
}

fn strip_signs(piece: &str) -> (bool, &str) {
    let mut negative = false;
    let mut rest = piece;
    loop {
        if let Some(r) = rest.strip_prefix('-') {
            negative = !negative;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else {
            return (negative, rest);
        }
    }
}

impl<R: Ring> fmt::Display for SparsePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub type RationalPoly = SparsePoly<Rationals>;

fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `prod_H (<a, x> - b)` over the family, with multiplicity.
pub fn from_family(family: &CoverFamily) -> RationalPoly {
    let n = family.dim();
    let mut acc = RationalPoly::one(Rationals, n);
    for h in family.planes() {
        let coeffs: Vec<BigRational> = h.normal().iter().map(|&c| rational(c)).collect();
        let lin = RationalPoly::affine(Rationals, &coeffs, rational(-h.offset()));
        acc = acc.mul(&lin).expect("same shape");
    }
    acc
}

/// Largest cap accepted by [`zero_multiplicity`].
pub const MAX_MULTIPLICITY_CAP: u32 = 8;

/// Order of vanishing at a cube point, truncated at a cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityCert {
    #[serde(with = "crate::hyperplane_cover::point_string")]
    pub point: CubePoint,
    pub order: u32,
    /// Multi-index `alpha` with `|alpha| = order` and `d^alpha P(point) != 0`;
    /// `None` when `order` reached the cap.
    pub witness: Option<Vec<u32>>,
}

/// Taylor coefficients of `P(y + point)` for all `|alpha| < cap`, keyed by
/// `alpha`; zero entries are dropped. The coefficient at `alpha` equals
/// `d^alpha P(point) / alpha!`.
fn low_order_taylor(p: &RationalPoly, point: u64, cap: u32) -> HashMap<Vec<u32>, BigRational> {
    let n = p.nvars;
    let mut acc: HashMap<Vec<u32>, BigRational> = HashMap::new();
    let mut ones: Vec<usize> = Vec::with_capacity(n);
    let mut alpha = vec![0u32; n];
    for (beta, c) in &p.terms {
        let mut fixed_degree = 0u32;
        ones.clear();
        for (i, &b) in beta.iter().enumerate() {
            if (point >> i) & 1 == 1 {
                if b > 0 {
                    ones.push(i);
                }
            } else {
                fixed_degree += b;
            }
        }
        if fixed_degree >= cap {
            continue;
        }
        for (i, &b) in beta.iter().enumerate() {
            alpha[i] = if (point >> i) & 1 == 1 { 0 } else { b };
        }
        let budget = cap - 1 - fixed_degree;
        spread(&ones, 0, budget, beta, &mut alpha, 1, &mut |alpha, mult| {
            let contribution = c * BigRational::from_integer(BigInt::from(mult));
            match acc.get_mut(alpha) {
                Some(slot) => *slot += contribution,
                None => {
                    acc.insert(alpha.to_vec(), contribution);
                }
            }
        });
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

/// Enumerates `alpha` on the coordinates `ones[pos..]` with
/// `alpha_i <= beta_i` and total at most `budget`, carrying `prod C(beta_i, alpha_i)`.
fn spread(
    ones: &[usize],
    pos: usize,
    budget: u32,
    beta: &[u32],
    alpha: &mut [u32],
    mult: u128,
    emit: &mut impl FnMut(&[u32], u128),
) {
    if pos == ones.len() {
        emit(alpha, mult);
        return;
    }
    let i = ones[pos];
    let top = beta[i].min(budget);
    let mut binom: u128 = 1;
    for a in 0..=top {
        if a > 0 {
            binom = binom * (beta[i] - a + 1) as u128 / a as u128;
        }
        alpha[i] = a;
        spread(ones, pos + 1, budget - a, beta, alpha, mult * binom, emit);
    }
    alpha[i] = 0;
}

fn multiplicity_of_bits(p: &RationalPoly, point: u64, cap: u32) -> (u32, Option<Vec<u32>>) {
    let (order, alpha) = lowest_order(low_order_taylor(p, point, cap).into_keys());
    (order.min(cap), alpha)
}

fn lowest_order(keys: impl Iterator<Item = Vec<u32>>) -> (u32, Option<Vec<u32>>) {
    keys.map(|alpha| (alpha.iter().sum::<u32>(), alpha))
        .min()
        .map_or((u32::MAX, None), |(order, alpha)| (order, Some(alpha)))
}

/// Integer copy of the terms, when every coefficient is an integer that fits
/// comfortably in `i64`. Products of affine forms with small coefficients
/// nearly always qualify and avoid big-number arithmetic.
fn integer_terms(p: &RationalPoly) -> Option<Vec<(Vec<u32>, i128)>> {
    p.terms
        .iter()
        .map(|(e, c)| {
            if !c.is_integer() {
                return None;
            }
            c.to_integer().to_i64().map(|v| (e.clone(), v as i128))
        })
        .collect()
}

/// Same as [`low_order_taylor`] over `i128`; `None` on overflow.
fn low_order_taylor_int(
    terms: &[(Vec<u32>, i128)],
    n: usize,
    point: u64,
    cap: u32,
) -> Option<HashMap<Vec<u32>, i128>> {
    let mut acc: HashMap<Vec<u32>, i128> = HashMap::new();
    let mut ones: Vec<usize> = Vec::with_capacity(n);
    let mut alpha = vec![0u32; n];
    let mut overflow = false;
    for (beta, c) in terms {
        let mut fixed_degree = 0u32;
        ones.clear();
        for (i, &b) in beta.iter().enumerate() {
            if (point >> i) & 1 == 1 {
                if b > 0 {
                    ones.push(i);
                }
            } else {
                fixed_degree += b;
            }
        }
        if fixed_degree >= cap {
            continue;
        }
        for (i, &b) in beta.iter().enumerate() {
            alpha[i] = if (point >> i) & 1 == 1 { 0 } else { b };
        }
        let budget = cap - 1 - fixed_degree;
        spread(&ones, 0, budget, beta, &mut alpha, 1, &mut |alpha, mult| {
            let contribution = i128::try_from(mult).ok().and_then(|m| m.checked_mul(*c));
            let Some(contribution) = contribution else {
                overflow = true;
                return;
            };
            match acc.get_mut(alpha) {
                Some(slot) => match slot.checked_add(contribution) {
                    Some(v) => *slot = v,
                    None => overflow = true,
                },
                None => {
                    acc.insert(alpha.to_vec(), contribution);
                }
            }
        });
        if overflow {
            return None;
        }
    }
    acc.retain(|_, v| *v != 0);
    Some(acc)
}

/// The largest `s <= cap` such that every partial derivative of total order
/// `< s` vanishes at `point`.
pub fn zero_multiplicity(p: &RationalPoly, point: &CubePoint, cap: u32) -> Result<MultiplicityCert> {
    if cap > MAX_MULTIPLICITY_CAP {
        return Err(out_of_range("cap", cap, format!("0..={MAX_MULTIPLICITY_CAP}")));
    }
    if point.dim() != p.nvars {
        return Err(Error::DimensionMismatch { expected: p.nvars, found: point.dim() });
    }
    let (order, witness) = multiplicity_of_bits(p, point.bits(), cap);
    Ok(MultiplicityCert { point: *point, order, witness })
}

pub const MAX_POLY_COVER_DIM: usize = 20;
pub const MAX_POLY_COVER_T: u32 = 6;

fn degree_as_usize(p: &RationalPoly) -> usize {
    p.degree().finite().unwrap_or(0) as usize
}

/// Checks that `P` vanishes to order at least `t` off `S` and to order
/// exactly `t - 1` on `S`.
pub fn verify_poly_cover(p: &RationalPoly, s: &PointSet, t: u32) -> Result<CoverReport> {
    let n = p.nvars;
    if t == 0 || t > MAX_POLY_COVER_T {
        return Err(out_of_range("t", t, format!("1..={MAX_POLY_COVER_T}")));
    }
    if n == 0 || n > MAX_POLY_COVER_DIM {
        return Err(out_of_range("n", n, format!("1..={MAX_POLY_COVER_DIM}")));
    }
    check_enumerable(n)?;
    if s.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
    }
    let in_s = s.indicator()?;
    let int_terms = integer_terms(p);
    let mut violations: Vec<Violation> = (0..1u64 << n)
        .into_par_iter()
        .filter_map(|x| {
            let fast = int_terms
                .as_deref()
                .and_then(|terms| low_order_taylor_int(terms, n, x, t))
                .map(|taylor| lowest_order(taylor.into_keys()));
            let (order, _) = fast.unwrap_or_else(|| multiplicity_of_bits(p, x, t));
            let order = order.min(t);
            let rule = if in_s[x as usize] { Rule::Exactly(t - 1) } else { Rule::AtLeast(t) };
            (!rule.holds(order)).then(|| Violation {
                point: CubePoint::from_bits_unchecked(n, x),
                expected: rule,
                actual: order,
            })
        })
        .collect();
    violations.sort_by_key(|v| v.point);
    Ok(CoverReport::from_violations(violations, degree_as_usize(p)))
}

/// Which lower bound to certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    /// `S` is a layer `Q^n_k`: `max{k, n-k} + 2t - 2`.
    Layer,
    /// `n - r(S) + 2t - 2` with the exact index complexity.
    Index,
    /// `n - floor(log2 |S|) + 2t - 2`.
    Size,
    /// `S` is a single point: `n + 2t - 2`.
    Sw,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub mode: BoundMode,
    pub bound: i64,
    pub degree: i64,
    pub slack: i64,
    /// Index complexity used by [`BoundMode::Index`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_complexity: Option<usize>,
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn layer_index(s: &PointSet) -> Option<usize> {
    let n = s.dim();
    let k = s.iter().next()?.weight();
    if s.iter().any(|p| p.weight() != k) {
        return None;
    }
    (s.len() as u128 == binomial_u128(n as u64, k as u64)).then_some(k as usize)
}

fn check_punctured_range(n: usize, t: u32) -> Result<()> {
    if t >= 2 && (n as i64) < 2 * t as i64 - 3 {
        return Err(Error::Hypothesis(format!(
            "the multiplicity bound needs n >= 2t - 3 (n = {n}, t = {t})"
        )));
    }
    Ok(())
}

/// Asserts `deg(P)` against the selected lower bound for a verified
/// `(t, t-1)`-cover. A violated bound is reported as
/// [`Error::BoundViolated`].
pub fn check_degree_certificates(
    p: &RationalPoly,
    s: &PointSet,
    t: u32,
    mode: BoundMode,
) -> Result<DegreeReport> {
    let cover = verify_poly_cover(p, s, t)?;
    if !cover.ok {
        return Err(Error::Hypothesis(format!(
            "polynomial is not a ({t}, {})-cover: {} violating points",
            t - 1,
            cover.violations.len()
        )));
    }
    let n = p.nvars as i64;
    let pad = 2 * t as i64 - 2;
    let mut index_complexity = None;
    let bound = match mode {
        BoundMode::Layer => {
            let k = layer_index(s)
                .ok_or_else(|| Error::Hypothesis("the set is not a full layer".into()))?
                as i64;
            k.max(n - k) + pad
        }
        BoundMode::Index => {
            if s.len() < 2 {
                return Err(Error::Hypothesis("index bound needs |S| >= 2".into()));
            }
            check_punctured_range(p.nvars, t)?;
            let (r, _) = index_complexity_exact(s)?;
            index_complexity = Some(r);
            n - r as i64 + pad
        }
        BoundMode::Size => {
            if s.len() < 2 {
                return Err(Error::Hypothesis("size bound needs |S| >= 2".into()));
            }
            check_punctured_range(p.nvars, t)?;
            n - s.len().ilog2() as i64 + pad
        }
        BoundMode::Sw => {
            if s.len() != 1 {
                return Err(Error::Hypothesis("single-point bound needs |S| = 1".into()));
            }
            check_punctured_range(p.nvars, t)?;
            n + pad
        }
    };
    let degree = p.degree().finite().map_or(i64::MIN, i64::from);
    if degree < bound {
        return Err(Error::BoundViolated(format!(
            "deg(P) = {degree} below the {mode:?} bound {bound}"
        )));
    }
    Ok(DegreeReport { mode, bound, degree, slack: degree - bound, index_complexity })
}

pub const MAX_GRID_POINTS: u128 = 1_000_000;

/// The failing hypothesis of the grid degree inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridClause {
    /// `f` vanishes on the grid outside `T`.
    VanishesOffT,
    /// `f` has no zero on `T`.
    NonzeroOnT,
    /// `g` vanishes on all of `T` but one point.
    GMissesOnePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub failed: Option<GridClause>,
    pub deg_f: Degree,
    pub deg_g: Degree,
    /// `sum_i (|S_i| - 1)`.
    pub bound: u64,
    /// `deg f + deg g - bound`, when the hypotheses hold.
    pub slack: Option<i64>,
}

/// Visits every point of `S_1 x ... x S_n` in lexicographic order of the
/// index tuple.
pub(crate) fn for_each_grid_point<E: Clone>(grid: &[Vec<E>], mut visit: impl FnMut(&[E]) -> bool) {
    if grid.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; grid.len()];
    let mut point: Vec<E> = grid.iter().map(|s| s[0].clone()).collect();
    loop {
        if !visit(&point) {
            return;
        }
        let mut i = grid.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < grid[i].len() {
                point[i] = grid[i][idx[i]].clone();
                break;
            }
            idx[i] = 0;
            point[i] = grid[i][0].clone();
        }
    }
}

pub(crate) fn grid_size<E>(grid: &[Vec<E>]) -> u128 {
    grid.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
}

/// Checks the three hypotheses on `f`, `g`, `T` inside the grid by
/// exhaustive evaluation and, when they hold, the inequality
/// `deg f + deg g >= sum_i (|S_i| - 1)`.
pub fn check_grid_theorem<R: Ring>(
    f: &SparsePoly<R>,
    g: &SparsePoly<R>,
    t_set: &[Vec<R::Elem>],
    grid: &[Vec<R::Elem>],
) -> Result<GridReport> {
    let n = grid.len();
    if f.nvars != n || g.nvars != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.nvars.max(g.nvars) });
    }
    f.check_compatible(g)?;
    if grid.iter().any(Vec::is_empty) {
        return Err(Error::EmptySet("grid coordinate set"));
    }
    for s in grid {
        let distinct: HashSet<&R::Elem> = s.iter().collect();
        if distinct.len() != s.len() {
            return Err(Error::Invalid("grid coordinate sets must have distinct elements".into()));
        }
    }
    if grid_size(grid) > MAX_GRID_POINTS {
        return Err(Error::SizeCap(format!("grid has more than {MAX_GRID_POINTS} points")));
    }
    let t_members: HashSet<&Vec<R::Elem>> = t_set.iter().collect();
    for v in t_set {
        if v.len() != n || v.iter().zip(grid).any(|(x, s)| !s.contains(x)) {
            return Err(Error::Invalid("T must be a subset of the grid".into()));
        }
    }

    let mut off_t_ok = true;
    for_each_grid_point(grid, |pt| {
        if !t_members.contains(&pt.to_vec()) {
            let v = f.evaluate(pt).expect("dimension checked");
            if !f.ring.is_zero(&v) {
                off_t_ok = false;
                return false;
            }
        }
        true
    });
    let on_t_ok = t_members
        .iter()
        .all(|v| !f.ring.is_zero(&f.evaluate(v).expect("dimension checked")));
    let g_zeros = t_members
        .iter()
        .filter(|v| g.ring.is_zero(&g.evaluate(v).expect("dimension checked")))
        .count();
    let failed = if !off_t_ok {
        Some(GridClause::VanishesOffT)
    } else if !on_t_ok {
        Some(GridClause::NonzeroOnT)
    } else if t_members.is_empty() || g_zeros != t_members.len() - 1 {
        Some(GridClause::GMissesOnePoint)
    } else {
        None
    };

    let bound: u64 = grid.iter().map(|s| s.len() as u64 - 1).sum();
    let (deg_f, deg_g) = (f.degree(), g.degree());
    let slack = match (failed, deg_f.finite(), deg_g.finite()) {
        (Some(_), _, _) => None,
        (None, Some(df), Some(dg)) => {
            let slack = df as i64 + dg as i64 - bound as i64;
            if slack < 0 {
                return Err(Error::BoundViolated(format!(
                    "deg f + deg g = {} below {bound}",
                    df + dg
                )));
            }
            Some(slack)
        }
        // f nonzero on T and g nonzero at one point of T, so neither is zero.
        (None, _, _) => unreachable!("verified hypotheses imply nonzero f and g"),
    };
    Ok(GridReport { failed, deg_f, deg_g, bound, slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::layer_complement_cover;
    use crate::field::PrimeField;
    use crate::hypercube::layer;
    use crate::hyperplane_cover::Hyperplane;

    fn q(v: i64) -> BigRational {
        rational(v)
    }

    fn parse(n: usize, s: &str) -> RationalPoly {
        RationalPoly::parse_text(Rationals, n, s).unwrap()
    }

    fn pt(s: &str) -> CubePoint {
        CubePoint::parse(s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let x1x2 = parse(2, "x1*x2");
        assert_eq!(x1x2.coefficient_of(&[1, 1]).unwrap(), q(1));
        assert_eq!(x1x2.coefficient_of(&[1, 0]).unwrap(), q(0));

        let p = parse(2, "x1^2*x2");
        assert_eq!(p.partial_derivative(0).unwrap(), parse(2, "2*x1*x2"));

        let prod = parse(2, "x1 + x2").mul(&parse(2, "x1 - x2")).unwrap();
        assert_eq!(prod, parse(2, "x1^2 - x2^2"));
        assert_eq!(prod.degree(), Degree::Finite(2));
    }

    #[test]
    fn zero_polynomial_degree_is_sentinel() {
        let z = RationalPoly::zero(Rationals, 3);
        assert_eq!(z.degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let x = parse(3, "x1");
        assert!(x.sub(&x).unwrap().is_zero());
    }

    #[test]
    fn mismatched_shapes_rejected() {
        assert!(parse(2, "x1").add(&parse(3, "x1")).is_err());
        let f5 = SparsePoly::one(PrimeField::new(5).unwrap(), 2);
        let f7 = SparsePoly::one(PrimeField::new(7).unwrap(), 2);
        assert!(f5.mul(&f7).is_err());
        assert!(parse(2, "x1").partial_derivative(2).is_err());
        assert!(parse(2, "x1").evaluate(&[q(1)]).is_err());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p = parse(3, "1/2 * x1^2*x3 - 3*x2 + 5 - x1^2*x3");
        assert_eq!(p.to_text(), "-1/2 * x1^2*x3^1 + -3 * x2^1 + 5");
        assert_eq!(parse(3, &p.to_text()), p);
        assert_eq!(RationalPoly::zero(Rationals, 2).to_text(), "0");
        assert!(parse(2, "0").is_zero());
        assert!(RationalPoly::parse_text(Rationals, 2, "x3").is_err());
        assert!(RationalPoly::parse_text(Rationals, 2, "x1 + ").is_err());
        assert!(RationalPoly::parse_text(Rationals, 2, "y1").is_err());
        assert!(RationalPoly::parse_text(Rationals, 2, "").is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = parse(2, "3/4 * x1 - 2 * x2^3");
        let json = p.to_json();
        assert_eq!(json, r#"{"n":2,"terms":[{"c":"-2","e":[0,3]},{"c":"3/4","e":[1,0]}]}"#);
        assert_eq!(RationalPoly::from_json(Rationals, &json).unwrap(), p);
        let fp = PrimeField::new(5).unwrap();
        let g = SparsePoly::from_json(fp, r#"{"n":1,"terms":[{"e":[1],"c":7}]}"#).unwrap();
        assert_eq!(g.coefficient_of(&[1]).unwrap(), 2);
    }

    #[test]
    fn from_family_examples() {
        let f = CoverFamily::from_planes(
            1,
            [Hyperplane::coordinate(1, 0, 0).unwrap(), Hyperplane::coordinate(1, 0, 1).unwrap()],
        )
        .unwrap();
        assert_eq!(from_family(&f), parse(1, "x1^2 - x1"));
        assert_eq!(from_family(&layer_complement_cover(4, 2, 1).unwrap()).degree(), Degree::Finite(2));
        assert_eq!(from_family(&layer_complement_cover(4, 2, 2).unwrap()).degree(), Degree::Finite(4));
    }

    #[test]
    fn multiplicity_examples() {
        let p = parse(2, "x1^2*x2^3");
        let cert = zero_multiplicity(&p, &pt("00"), 8).unwrap();
        assert_eq!(cert.order, 5);
        assert_eq!(cert.witness, Some(vec![2, 3]));

        let p = from_family(&layer_complement_cover(4, 2, 2).unwrap());
        assert_eq!(zero_multiplicity(&p, &pt("1100"), 8).unwrap().order, 1);

        let one = RationalPoly::one(Rationals, 3);
        let cert = zero_multiplicity(&one, &pt("101"), 8).unwrap();
        assert_eq!(cert.order, 0);
        assert_eq!(cert.witness, Some(vec![0, 0, 0]));

        let zero = RationalPoly::zero(Rationals, 2);
        let cert = zero_multiplicity(&zero, &pt("10"), 4).unwrap();
        assert_eq!((cert.order, cert.witness), (4, None));

        assert!(zero_multiplicity(&one, &pt("101"), 9).is_err());
        assert!(zero_multiplicity(&one, &pt("10"), 3).is_err());
    }

    #[test]
    fn multiplicity_witness_is_a_nonvanishing_derivative() {
        let p = parse(3, "x1^2*x2 - 2*x1*x2 + x2 + x3^3 - 3*x3^2 + 3*x3 - 1");
        for x in 0..8 {
            let point = CubePoint::new(3, x).unwrap();
            let cert = zero_multiplicity(&p, &point, 6).unwrap();
            let vals: Vec<BigRational> = point.coords().iter().map(|&c| q(c as i64)).collect();
            if let Some(alpha) = &cert.witness {
                let mut d = p.clone();
                for (i, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        d = d.partial_derivative(i).unwrap();
                    }
                }
                assert!(!d.evaluate(&vals).unwrap().is_zero(), "point {point}");
            }
        }
    }

    #[test]
    fn poly_cover_examples() {
        let p = from_family(&layer_complement_cover(7, 3, 1).unwrap());
        assert!(verify_poly_cover(&p, &layer(7, 3).unwrap(), 1).unwrap().ok);

        let p = from_family(&layer_complement_cover(4, 1, 2).unwrap());
        let rep = verify_poly_cover(&p, &layer(4, 1).unwrap(), 2).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.m, 5);

        let rep = verify_poly_cover(&parse(2, "x1"), &layer(2, 1).unwrap(), 1).unwrap();
        assert!(!rep.ok);
        let bad: Vec<(String, Rule, u32)> = rep
            .violations
            .iter()
            .map(|v| (v.point.to_string(), v.expected, v.actual))
            .collect();
        assert_eq!(
            bad,
            [("01".to_string(), Rule::Exactly(0), 1), ("11".to_string(), Rule::AtLeast(1), 0)]
        );
    }

    #[test]
    fn poly_cover_caps() {
        let p = parse(2, "x1");
        assert!(verify_poly_cover(&p, &layer(2, 1).unwrap(), 7).is_err());
        assert!(verify_poly_cover(&p, &layer(2, 1).unwrap(), 0).is_err());
        let wide = RationalPoly::one(Rationals, 21);
        assert!(verify_poly_cover(&wide, &PointSet::empty(21).unwrap(), 1).is_err());
    }

    #[test]
    fn degree_certificate_examples() {
        let p = from_family(&layer_complement_cover(7, 3, 1).unwrap());
        let rep = check_degree_certificates(&p, &layer(7, 3).unwrap(), 1, BoundMode::Layer).unwrap();
        assert_eq!((rep.bound, rep.degree, rep.slack), (4, 4, 0));

        let (fam, s) = crate::constructions::halfcube_example_cover(5, 1).unwrap();
        let p = from_family(&fam);
        let rep = check_degree_certificates(&p, &s, 1, BoundMode::Index).unwrap();
        assert_eq!((rep.bound, rep.degree, rep.index_complexity), (4, 4, Some(1)));
        let rep = check_degree_certificates(&p, &s, 1, BoundMode::Size).unwrap();
        assert_eq!((rep.bound, rep.degree), (1, 4));

        let n = 5;
        let g = CoverFamily::from_planes(
            n,
            (1..=n).map(|j| crate::constructions::level_plane(n, j).unwrap()),
        )
        .unwrap();
        let origin = PointSet::from_points(n, [CubePoint::origin(n).unwrap()]).unwrap();
        let rep = check_degree_certificates(&from_family(&g), &origin, 1, BoundMode::Sw).unwrap();
        assert_eq!((rep.bound, rep.degree, rep.slack), (5, 5, 0));
    }

    #[test]
    fn degree_certificate_preconditions() {
        let p = parse(2, "x1");
        assert!(matches!(
            check_degree_certificates(&p, &layer(2, 1).unwrap(), 1, BoundMode::Layer),
            Err(Error::Hypothesis(_))
        ));
        let p = from_family(&layer_complement_cover(4, 1, 1).unwrap());
        assert!(matches!(
            check_degree_certificates(&p, &layer(4, 1).unwrap(), 1, BoundMode::Sw),
            Err(Error::Hypothesis(_))
        ));
    }

    fn cube_grid(n: usize) -> Vec<Vec<BigRational>> {
        vec![vec![q(0), q(1)]; n]
    }

    fn rat_point(s: &str) -> Vec<BigRational> {
        pt(s).coords().iter().map(|&c| q(c as i64)).collect()
    }

    #[test]
    fn grid_theorem_examples() {
        // f = x1 - x2 does not vanish on (0,1), which lies outside T.
        let t_set = vec![rat_point("00"), rat_point("11")];
        let rep = check_grid_theorem(&parse(2, "x1 - x2"), &parse(2, "x1"), &t_set, &cube_grid(2))
            .unwrap();
        assert_eq!(rep.failed, Some(GridClause::VanishesOffT));

        // Single point T = {v}: f is the indicator of v, g = 1.
        let n = 4;
        let f = parse(n, "x1*x2*x3*x4");
        let rep = check_grid_theorem(&f, &parse(n, "1"), &[rat_point("1111")], &cube_grid(n)).unwrap();
        assert_eq!(rep.failed, None);
        assert_eq!((rep.deg_f, rep.bound, rep.slack), (Degree::Finite(4), 4, Some(0)));

        let f = from_family(&layer_complement_cover(3, 1, 1).unwrap());
        let t_set: Vec<_> = layer(3, 1).unwrap().iter().map(|p| rat_point(&p.to_string())).collect();
        let rep = check_grid_theorem(&f, &parse(3, "x1"), &t_set, &cube_grid(3)).unwrap();
        assert_eq!(rep.failed, None);
        assert_eq!((rep.deg_f, rep.deg_g, rep.bound, rep.slack), (Degree::Finite(2), Degree::Finite(1), 3, Some(0)));
    }

    #[test]
    fn grid_theorem_clause_ordering() {
        let n = 2;
        let f = parse(n, "x1*x2");
        let t_set = vec![rat_point("11")];
        let rep = check_grid_theorem(&f, &parse(n, "x1"), &t_set, &cube_grid(n)).unwrap();
        assert_eq!(rep.failed, None);
        let rep = check_grid_theorem(&f, &parse(n, "x1 - 1"), &t_set, &cube_grid(n)).unwrap();
        assert_eq!(rep.failed, Some(GridClause::GMissesOnePoint));
        let rep = check_grid_theorem(&f, &parse(n, "1"), &[rat_point("11"), rat_point("00")], &cube_grid(n))
            .unwrap();
        assert_eq!(rep.failed, Some(GridClause::NonzeroOnT));
        assert!(check_grid_theorem(&f, &parse(n, "1"), &[vec![q(2), q(0)]], &cube_grid(n)).is_err());
    }
}
