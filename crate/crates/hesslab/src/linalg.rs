//! Exact linear algebra over F_p and Q.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
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

/// Prime field F_p for an odd prime p, with a memoized quadratic-character table.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u64,
    chi: Arc<Vec<i8>>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest prime for which the character table is tabulated.
const CHI_TABLE_LIMIT: u64 = 1 << 20;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotOddPrime(p));
        }
        let chi = if p <= CHI_TABLE_LIMIT {
            (0..p).map(|a| euler_criterion(a, p)).collect()
        } else {
            Vec::new()
        };
        Ok(Self { p, chi: Arc::new(chi) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Quadratic character: 0 at 0, 1 on nonzero squares, -1 otherwise.
    pub fn eta(&self, a: u64) -> i8 {
        let a = a % self.p;
        if self.chi.is_empty() {
            euler_criterion(a, self.p)
        } else {
            self.chi[a as usize]
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn euler_criterion(a: u64, p: u64) -> i8 {
    if a.is_multiple_of(p) {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        a.is_multiple_of(self.p)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
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
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

pub type FqMatrix = Mat<u64>;

impl<E: Clone> Mat<E> {
    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Self { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<E> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Self { rows: r, cols: c, data }
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    let mut m = Mat::filled(n, n, f.zero());
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn mat_mul<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.cols, b.rows);
    let mut out = Mat::filled(a.rows, b.cols, f.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let v = f.add(out.get(i, j), &f.mul(aik, b.get(k, j)));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn mat_vec<F: Field>(f: &F, a: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    (0..a.rows)
        .map(|i| {
            a.row(i).iter().zip(v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat<F: Field>(f: &F, v: &[F::Elem], a: &Mat<F::Elem>) -> Vec<F::Elem> {
    (0..a.cols)
        .map(|j| (0..a.rows).fold(f.zero(), |acc, i| f.add(&acc, &f.mul(&v[i], a.get(i, j)))))
        .collect()
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Mat<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
        if pr != r {
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
        for j in 0..m.cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in 0..m.cols {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Mat<F::Elem>) -> usize {
    let mut m = m.clone();
    rref(f, &mut m).len()
}

/// Basis of {v : m v = 0}.
pub fn nullspace<F: Field>(f: &F, m: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut r = m.clone();
    let pivots = rref(f, &mut r);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); m.cols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, fc));
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, m: &Mat<F::Elem>) -> Result<Mat<F::Elem>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = Mat::filled(n, 2 * n, f.zero());
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, f.one());
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular(format!("{n}x{n} matrix")));
    }
    let mut out = Mat::filled(n, n, f.zero());
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Ok(out)
}

/// Rank of a sparse system given as rows of (column, coefficient) pairs.
/// Rows are reduced one at a time against an echelon basis keyed by leading column,
/// which keeps the structured constraint systems used here sparse.
pub fn sparse_rank<F: Field>(f: &F, rows: &[Vec<(usize, F::Elem)>]) -> usize {
    let mut basis: BTreeMap<usize, BTreeMap<usize, F::Elem>> = BTreeMap::new();
    for row in rows {
        let mut r: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for (c, v) in row {
            let cur = r.remove(c).unwrap_or_else(|| f.zero());
            let nv = f.add(&cur, v);
            if !f.is_zero(&nv) {
                r.insert(*c, nv);
            }
        }
        while let Some((&lead, lv)) = r.iter().next() {
            let Some(b) = basis.get(&lead) else {
                let inv = f.inv(lv).expect("nonzero lead");
                let normalized = r.into_iter().map(|(c, v)| (c, f.mul(&v, &inv))).collect();
                basis.insert(lead, normalized);
                break;
            };
            let factor = lv.clone();
            for (c, bv) in b {
                let cur = r.remove(c).unwrap_or_else(|| f.zero());
                let nv = f.sub(&cur, &f.mul(&factor, bv));
                if !f.is_zero(&nv) {
                    r.insert(*c, nv);
                }
            }
        }
    }
    basis.len()
}
