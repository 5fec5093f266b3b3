//! Coefficient rings (exact rationals and prime fields) and linear algebra
//! over `Z_p`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField`].
pub const MAX_PRIME: u64 = 10_000;

/// A commutative coefficient ring, passed by value alongside its elements.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + std::hash::Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        match s.split_once('/') {
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(BigRational::new(num, den))
            }
            None => {
                let num: BigInt = s.parse().map_err(|_| bad())?;
                Ok(BigRational::from_integer(num))
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Z_p` for a prime `2 <= p <= 10^4`. Elements are canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(&a, (self.p - 2) as u32))
        }
    }

    /// All elements `0, 1, ..., p-1`.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce(v)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num = self.parse(num)?;
            let den = self.parse(den)?;
            let inv = self
                .inv(den)
                .ok_or_else(|| Error::Parse(format!("denominator of {s:?} vanishes mod {}", self.p)))?;
            return Ok(self.mul(&num, &inv));
        }
        let v: BigInt = s
            .parse()
            .map_err(|_| Error::Parse(format!("invalid residue {s:?}")))?;
        let r = (v % BigInt::from(self.p) + BigInt::from(self.p)) % BigInt::from(self.p);
        Ok(r.to_string().parse().expect("residue fits in u64"))
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace of
/// `Z_p^width`.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    /// Rows with a leading one at `pivots[i]`, zero in every other pivot column.
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: vec![None; width],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    fn reduce(&self, v: &mut [u64]) {
        let p = self.field.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let f = p - c;
                for (x, r) in v.iter_mut().zip(row) {
                    if *r != 0 {
                        *x = (*x + f * r) % p;
                    }
                }
            }
        }
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let p = self.field.p;
        for x in v.iter_mut() {
            *x %= p;
        }
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[pc]).expect("nonzero residue");
        for x in v.iter_mut() {
            *x = (*x * inv) % p;
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                let f = p - c;
                for (x, r) in row.iter_mut().zip(&v) {
                    if *r != 0 {
                        *x = (*x + f * r) % p;
                    }
                }
            }
        }
        self.pivot_of_col[pc] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    /// Whether the unit vector `e_col` lies in the span.
    pub fn contains_unit(&self, col: usize) -> bool {
        let Some(ri) = self.pivot_of_col[col] else {
            return false;
        };
        // e_col reduces to -(row - e_col); it vanishes iff the row has no
        // entries outside pivot columns.
        self.rows[ri]
            .iter()
            .enumerate()
            .all(|(j, &x)| x == 0 || self.pivot_of_col[j].is_some())
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut v: Vec<u64> = v.iter().map(|x| x % self.field.p).collect();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }
}

/// Rank of a matrix over `Z_p` given as rows.
pub fn rank_mod_p(field: PrimeField, rows: &[Vec<u64>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut ech = Echelon::new(field, width);
    for r in rows {
        ech.insert(r.clone());
        if ech.is_full() {
            break;
        }
    }
    ech.rank()
}

/// Solves `A x = b` over `Z_p` (A given as rows); returns one solution with
/// free variables set to zero, or `None` if inconsistent.
pub fn solve_mod_p(field: PrimeField, a: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let p = field.p;
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut r: Vec<u64> = r.iter().map(|x| x % p).collect();
            r.push(bi % p);
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = field.inv(m[rank][c]).expect("nonzero pivot");
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % p;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = p - row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + f * y) % p;
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    if m[rank..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r][cols];
    }
    Some(x)
}
