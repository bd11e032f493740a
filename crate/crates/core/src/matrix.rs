//! Exact square matrices over integral domains, and the linear-independence
//! bound for non-commuting representations of `V_n`.
//!
//! A [`Ring`] is a context object (a prime modulus has to live somewhere)
//! and elements are plain values. Rank and determinant use fraction-free
//! (Bareiss) elimination, so every division is exact in the ring and the
//! rank is the rank over the fraction field.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::marker::PhantomData;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncgraph::{Graph, Label, NCRep};
use crate::perm::Perm;

/// Largest group [`exhaustive_max_vn`] enumerates.
pub const MAX_VN_ORDER: u64 = 10_000;

pub trait Ring: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// `a / b`, where `b` is known to divide `a`.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Text tag, e.g. `int`, `fp 7`, `fpx 7`.
    fn tag(&self) -> String;
    fn from_tag(tag: &str) -> Result<Self>;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;
}

/// The integers, over any signed integer type (use an arbitrary-precision one
/// unless entries are known to stay small).
pub struct Integers<T = BigInt>(PhantomData<T>);

impl<T> Integers<T> {
    pub fn new() -> Self {
        Integers(PhantomData)
    }
}

impl<T> Default for Integers<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for Integers<T> {
    fn clone(&self) -> Self {
        Self::new()
    }
}

impl<T> PartialEq for Integers<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<T> Debug for Integers<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Integers")
    }
}

impl<T> Ring for Integers<T>
where
    T: Clone + Debug + Display + FromStr + Integer + Signed + FromPrimitive,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn from_i64(&self, n: i64) -> T {
        T::from_i64(n).expect("representable")
    }
    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }
    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &T) -> bool {
        a.abs().is_one()
    }
    fn exact_div(&self, a: &T, b: &T) -> T {
        let (q, r) = a.div_rem(b);
        debug_assert!(r.is_zero());
        q
    }
    fn tag(&self) -> String {
        "int".into()
    }
    fn from_tag(tag: &str) -> Result<Self> {
        match tag.trim() {
            "int" => Ok(Self::new()),
            t => Err(Error::Parse(format!("expected ring `int`, got `{t}`"))),
        }
    }
    fn parse_elem(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| Error::Parse(format!("bad integer `{s}`")))
    }
    fn format_elem(&self, a: &T) -> String {
        a.to_string()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_modulus(p: u64) -> Result<u64> {
    if p >= 1 << 32 {
        return Err(Error::Definition(format!("modulus {p} too large")));
    }
    if !is_prime(p) {
        return Err(Error::Definition(format!("modulus {p} is not prime")));
    }
    Ok(p)
}

fn parse_modulus(tag: &str, prefix: &str) -> Result<u64> {
    let mut parts = tag.split_whitespace();
    if parts.next() != Some(prefix) {
        return Err(Error::Parse(format!("expected ring `{prefix} p`, got `{tag}`")));
    }
    let p = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("missing modulus in `{tag}`")))?;
    if parts.next().is_some() {
        return Err(Error::Parse(format!("trailing text in `{tag}`")));
    }
    check_modulus(p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Integers modulo a prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        Ok(PrimeField { p: check_modulus(p)? })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
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
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn exact_div(&self, a: &u64, b: &u64) -> u64 {
        a * inv_mod(*b, self.p) % self.p
    }
    fn tag(&self) -> String {
        format!("fp {}", self.p)
    }
    fn from_tag(tag: &str) -> Result<Self> {
        Ok(PrimeField {
            p: parse_modulus(tag, "fp")?,
        })
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        let n: i64 = s.parse().map_err(|_| Error::Parse(format!("bad residue `{s}`")))?;
        Ok(self.from_i64(n))
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Polynomials in one variable over the integers modulo a prime.
/// Elements are coefficient vectors, low degree first, without trailing zeros.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PolyRing {
    p: u64,
}

impl PolyRing {
    pub fn new(p: u64) -> Result<Self> {
        Ok(PolyRing { p: check_modulus(p)? })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }
}

impl Ring for PolyRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![]
    }
    fn one(&self) -> Vec<u64> {
        vec![1]
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        Self::trim(vec![n.rem_euclid(self.p as i64) as u64])
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let n = a.len().max(b.len());
        Self::trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let n = a.len().max(b.len());
        Self::trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + self.p - b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        Self::trim(out)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.is_empty()
    }
    fn is_unit(&self, a: &Vec<u64>) -> bool {
        a.len() == 1
    }
    fn exact_div(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.p;
        let mut rem = a.clone();
        if rem.len() < b.len() {
            debug_assert!(rem.is_empty());
            return vec![];
        }
        let lead = inv_mod(*b.last().expect("nonzero divisor"), p);
        let mut q = vec![0; rem.len() - b.len() + 1];
        for i in (0..q.len()).rev() {
            let c = rem[i + b.len() - 1] * lead % p;
            q[i] = c;
            for (j, y) in b.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - c * y % p) % p;
            }
        }
        debug_assert!(rem.iter().all(|&r| r == 0));
        Self::trim(q)
    }
    fn tag(&self) -> String {
        format!("fpx {}", self.p)
    }
    fn from_tag(tag: &str) -> Result<Self> {
        Ok(PolyRing {
            p: parse_modulus(tag, "fpx")?,
        })
    }
    /// Comma-separated coefficients, low degree first: `1,0,2` is `1 + 2x²`.
    fn parse_elem(&self, s: &str) -> Result<Vec<u64>> {
        let coeffs = s
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i64>()
                    .map(|n| n.rem_euclid(self.p as i64) as u64)
                    .map_err(|_| Error::Parse(format!("bad coefficient in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::trim(coeffs))
    }
    fn format_elem(&self, a: &Vec<u64>) -> String {
        if a.is_empty() {
            return "0".into();
        }
        a.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

/// A `k × k` matrix with exact entries, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<R: Ring> {
    ring: R,
    k: usize,
    entries: Vec<R::Elem>,
}

impl<R: Ring> ExactMatrix<R> {
    pub fn new(ring: R, k: usize, entries: Vec<R::Elem>) -> Result<Self> {
        if k == 0 || entries.len() != k * k {
            return Err(Error::Incompatible(format!(
                "{} entries for degree {k}",
                entries.len()
            )));
        }
        Ok(ExactMatrix { ring, k, entries })
    }

    pub fn from_i64_rows(ring: R, rows: &[&[i64]]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Incompatible("matrix is not square".into()));
        }
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| ring.from_i64(x))).collect();
        Self::new(ring, k, entries)
    }

    pub fn identity(ring: R, k: usize) -> Self {
        let entries = (0..k * k)
            .map(|i| if i / k == i % k { ring.one() } else { ring.zero() })
            .collect();
        ExactMatrix { ring, k, entries }
    }

    /// Permutation matrix of `p` (row `x` has its one in column `x^p`), so
    /// that products follow the right action: `P(p) P(q) = P(p then q)`.
    pub fn permutation(ring: R, p: &Perm) -> Self {
        let k = p.degree();
        let mut m = Self::identity(ring, k);
        for x in 0..k {
            m.entries[x * k + x] = m.ring.zero();
        }
        for x in 0..k {
            m.entries[x * k + p.apply(x)] = m.ring.one();
        }
        m
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.entries[i * self.k + j]
    }

    pub fn entries(&self) -> &[R::Elem] {
        &self.entries
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.k == other.k && self.ring == other.ring
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::Incompatible("matrix ring or degree".into()));
        }
        let (k, r) = (self.k, &self.ring);
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let mut acc = r.zero();
                for l in 0..k {
                    acc = r.add(&acc, &r.mul(self.get(i, l), other.get(l, j)));
                }
                entries.push(acc);
            }
        }
        Ok(ExactMatrix {
            ring: r.clone(),
            k,
            entries,
        })
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    pub fn det(&self) -> R::Elem {
        let rows: Vec<Vec<R::Elem>> = self.entries.chunks(self.k).map(<[_]>::to_vec).collect();
        let (rank, last, swaps) = bareiss(&self.ring, rows);
        if rank < self.k {
            return self.ring.zero();
        }
        if swaps % 2 == 1 {
            self.ring.sub(&self.ring.zero(), &last)
        } else {
            last
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.ring.is_unit(&self.det())
    }
}

/// Fraction-free row echelon elimination. Returns the rank, the last pivot
/// (the determinant up to sign for a full-rank square input) and the number
/// of row swaps.
fn bareiss<R: Ring>(ring: &R, mut a: Vec<Vec<R::Elem>>) -> (usize, R::Elem, usize) {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = ring.one();
    let mut rank = 0;
    let mut swaps = 0;
    for col in 0..cols {
        if rank == m {
            break;
        }
        let Some(piv) = (rank..m).find(|&r| !ring.is_zero(&a[r][col])) else {
            continue;
        };
        if piv != rank {
            a.swap(piv, rank);
            swaps += 1;
        }
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            for j in col + 1..cols {
                let t = ring.sub(
                    &ring.mul(&pivot_row[col], &row[j]),
                    &ring.mul(&row[col], &pivot_row[j]),
                );
                row[j] = ring.exact_div(&t, &prev);
            }
            row[col] = ring.zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    (rank, prev, swaps)
}

/// Rank of the matrices as vectors of length `k²`, over the fraction field.
pub fn independence_rank<R: Ring>(mats: &[ExactMatrix<R>]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Ok(0);
    };
    if mats.iter().any(|m| !m.compatible(first)) {
        return Err(Error::Incompatible("matrix ring or degree".into()));
    }
    let rows = mats.iter().map(|m| m.entries.clone()).collect();
    Ok(bareiss(&first.ring, rows).0)
}

impl<R: Ring> Label for ExactMatrix<R> {
    const TARGET: &'static str = "matrix";

    fn compatible(&self, other: &Self) -> bool {
        ExactMatrix::compatible(self, other)
    }

    fn commutes(&self, other: &Self) -> bool {
        ExactMatrix::commutes(self, other).expect("compatible")
    }

    fn header(&self) -> Vec<(String, String)> {
        vec![
            ("ring".into(), self.ring.tag()),
            ("degree".into(), self.k.to_string()),
        ]
    }

    fn write(&self) -> String {
        let mut out = String::new();
        for row in self.entries.chunks(self.k) {
            let cells: Vec<String> = row.iter().map(|x| self.ring.format_elem(x)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    fn read(header: &BTreeMap<String, String>, payload: &str) -> Result<Self> {
        let get = |k: &str| {
            header
                .get(k)
                .ok_or_else(|| Error::Parse(format!("missing header `{k}`")))
        };
        let ring = R::from_tag(get("ring")?)?;
        let k: usize = get("degree")?
            .parse()
            .map_err(|_| Error::Parse("bad degree".into()))?;
        let rows: Vec<&str> = payload.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.len() != k {
            return Err(Error::Parse(format!("expected {k} rows, got {}", rows.len())));
        }
        let mut entries = vec![];
        for row in rows {
            let cells: Vec<&str> = row.split_whitespace().collect();
            if cells.len() != k {
                return Err(Error::Parse(format!("expected {k} entries in `{row}`")));
            }
            for c in cells {
                entries.push(ring.parse_elem(c)?);
            }
        }
        ExactMatrix::new(ring, k, entries)
    }
}

fn vn_size<R: Ring>(rep: &NCRep<ExactMatrix<R>>) -> Result<usize> {
    rep.graph
        .as_vn()
        .ok_or_else(|| Error::Incompatible("graph is not V_n in the standard numbering".into()))
}

/// Exact check of the `V_n` commutation pattern by invertible matrices.
pub fn verify_pattern<R: Ring>(rep: &NCRep<ExactMatrix<R>>) -> Result<bool> {
    vn_size(rep)?;
    if let Some(i) = rep.labels.iter().position(|m| !m.is_invertible()) {
        return Err(Error::NotUnit(format!(
            "label {i} has determinant {}",
            rep.labels[i].ring.format_elem(&rep.labels[i].det())
        )));
    }
    Ok(rep.verify().holds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SqrtBound {
    pub n: usize,
    pub degree: usize,
    /// Rank of `a_1, ..., a_n` over the fraction field.
    pub rank: usize,
    /// `rank == n` and `n ≤ degree²`.
    pub holds: bool,
}

/// The `a_i` of a verified `V_n` labelling are linearly independent, so
/// `n ≤ k²`.
pub fn assert_sqrt_bound<R: Ring>(rep: &NCRep<ExactMatrix<R>>) -> Result<SqrtBound> {
    if !verify_pattern(rep)? {
        return Err(Error::Hypothesis("labelling does not realise V_n".into()));
    }
    let n = vn_size(rep)?;
    let a: Vec<ExactMatrix<R>> = rep.labels.iter().step_by(2).cloned().collect();
    let rank = independence_rank(&a)?;
    let degree = rep.labels[0].k;
    Ok(SqrtBound {
        n,
        degree,
        rank,
        holds: rank == n && n <= degree * degree,
    })
}

/// `a_i`, `b_i` are the upper and lower unipotent matrices in the `i`-th
/// diagonal `2 × 2` block of the identity of degree `2n`.
pub fn block_construction(n: usize) -> Result<NCRep<IntMatrix>> {
    if n == 0 {
        return Err(Error::Hypothesis("n must be positive".into()));
    }
    let ring = Integers::new();
    let k = 2 * n;
    let mut labels = vec![];
    for i in 0..n {
        for (r, c) in [(2 * i, 2 * i + 1), (2 * i + 1, 2 * i)] {
            let mut m = ExactMatrix::identity(ring.clone(), k);
            m.entries[r * k + c] = BigInt::one();
            labels.push(m);
        }
    }
    NCRep::new(Graph::vn(n), labels)
}

/// Order of `GL_k(F_p)`, saturating.
pub fn gl_order(k: usize, p: u64) -> u64 {
    let pk = (p as u128).pow(k as u32);
    let mut order: u128 = 1;
    let mut pi: u128 = 1;
    for _ in 0..k {
        order = order.saturating_mul(pk - pi);
        pi *= p as u128;
    }
    order.min(u64::MAX as u128) as u64
}

#[derive(Clone, Debug)]
pub struct MaxVn {
    pub p: u64,
    pub degree: usize,
    pub order: u64,
    pub max_n: usize,
    /// A labelling realising `max_n`, if positive.
    pub witness: Option<NCRep<FpMatrix>>,
}

/// Largest `n` such that `GL_k(F_p)` contains a `V_n` labelling, by
/// exhaustive search: pairs are added in increasing order, each drawn from
/// the common centralizer of everything chosen so far.
pub fn exhaustive_max_vn(p: u64, k: usize) -> Result<MaxVn> {
    let field = PrimeField::new(p)?;
    if k == 0 {
        return Err(Error::Incompatible("degree must be positive".into()));
    }
    let order = gl_order(k, p);
    if order > MAX_VN_ORDER {
        return Err(Error::Budget(format!(
            "|GL_{k}(F_{p})| = {order} exceeds {MAX_VN_ORDER}"
        )));
    }
    let elements = gl_elements(&field, k);
    debug_assert_eq!(elements.len() as u64, order);
    let n = elements.len();
    let words = n.div_ceil(64);
    let mut commute = vec![0u64; n * words];
    let product = |a: &[u64], b: &[u64], out: &mut Vec<u64>| {
        out.clear();
        for r in 0..k {
            for c in 0..k {
                out.push((0..k).map(|l| a[r * k + l] * b[l * k + c]).sum::<u64>() % p);
            }
        }
    };
    let (mut ab, mut ba) = (vec![], vec![]);
    for i in 0..n {
        for j in i..n {
            let (x, y) = (elements[i].entries(), elements[j].entries());
            product(x, y, &mut ab);
            product(y, x, &mut ba);
            if ab == ba {
                commute[i * words + j / 64] |= 1 << (j % 64);
                commute[j * words + i / 64] |= 1 << (i % 64);
            }
        }
    }
    let table = Commuting { words, rows: commute };
    let mut best: Vec<(usize, usize)> = vec![];
    let mut chosen: Vec<(usize, usize)> = vec![];
    let mut all = vec![u64::MAX; words];
    if n % 64 != 0 {
        all[words - 1] = (1 << (n % 64)) - 1;
    }
    search(&table, &all, &mut chosen, &mut best, (0, 0));
    let witness = if best.is_empty() {
        None
    } else {
        let labels = best
            .iter()
            .flat_map(|&(a, b)| [elements[a].clone(), elements[b].clone()])
            .collect();
        Some(NCRep::new(Graph::vn(best.len()), labels)?)
    };
    Ok(MaxVn {
        p,
        degree: k,
        order,
        max_n: best.len(),
        witness,
    })
}

/// Commutation table as one bitset row per element.
struct Commuting {
    words: usize,
    rows: Vec<u64>,
}

impl Commuting {
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn commutes(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &bits)| {
        let mut rest = bits;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                w * 64 + b
            })
        })
    })
}

/// Extends `chosen` by pairs `(a, b) > after` from `pool`, the common
/// centralizer of everything chosen so far.
fn search(
    table: &Commuting,
    pool: &[u64],
    chosen: &mut Vec<(usize, usize)>,
    best: &mut Vec<(usize, usize)>,
    after: (usize, usize),
) {
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    let elems: Vec<usize> = members(pool).collect();
    for (x, &a) in elems.iter().enumerate() {
        for &b in &elems[x + 1..] {
            if (a, b) <= after || table.commutes(a, b) {
                continue;
            }
            // a and b do not commute, so neither lies in the other's row.
            let next: Vec<u64> = pool
                .iter()
                .zip(table.row(a))
                .zip(table.row(b))
                .map(|((p, r), s)| p & r & s)
                .collect();
            chosen.push((a, b));
            if next.iter().map(|w| w.count_ones()).sum::<u32>() >= 2 {
                search(table, &next, chosen, best, (a, b));
            } else if chosen.len() > best.len() {
                *best = chosen.clone();
            }
            chosen.pop();
        }
    }
}

fn gl_elements(field: &PrimeField, k: usize) -> Vec<FpMatrix> {
    let p = field.modulus();
    let cells = k * k;
    let total = p.pow(cells as u32);
    (0..total)
        .filter_map(|mut code| {
            let entries: Vec<u64> = (0..cells)
                .map(|_| {
                    let d = code % p;
                    code /= p;
                    d
                })
                .collect();
            let m = ExactMatrix::new(*field, k, entries).expect("square");
            m.is_invertible().then_some(m)
        })
        .collect()
}

pub type IntMatrix = ExactMatrix<Integers>;
pub type FpMatrix = ExactMatrix<PrimeField>;
pub type PolyMatrix = ExactMatrix<PolyRing>;

/// A matrix labelling read from a file, whatever its ring.
#[derive(Clone, Debug)]
pub enum AnyMatrixRep {
    Int(NCRep<IntMatrix>),
    Fp(NCRep<FpMatrix>),
    Poly(NCRep<PolyMatrix>),
}

impl AnyMatrixRep {
    pub fn parse_text(text: &str) -> Result<Self> {
        let tag = text
            .lines()
            .map(str::trim)
            .find_map(|l| l.strip_prefix("ring "))
            .ok_or_else(|| Error::Parse("missing header `ring`".into()))?
            .trim();
        match tag.split_whitespace().next() {
            Some("int") => Ok(AnyMatrixRep::Int(NCRep::parse_text(text)?)),
            Some("fp") => Ok(AnyMatrixRep::Fp(NCRep::parse_text(text)?)),
            Some("fpx") => Ok(AnyMatrixRep::Poly(NCRep::parse_text(text)?)),
            _ => Err(Error::Parse(format!("unknown ring `{tag}`"))),
        }
    }

    pub fn ring_tag(&self) -> String {
        match self {
            AnyMatrixRep::Int(r) => r.labels[0].ring.tag(),
            AnyMatrixRep::Fp(r) => r.labels[0].ring.tag(),
            AnyMatrixRep::Poly(r) => r.labels[0].ring.tag(),
        }
    }

    pub fn verify_pattern(&self) -> Result<bool> {
        match self {
            AnyMatrixRep::Int(r) => verify_pattern(r),
            AnyMatrixRep::Fp(r) => verify_pattern(r),
            AnyMatrixRep::Poly(r) => verify_pattern(r),
        }
    }

    pub fn assert_sqrt_bound(&self) -> Result<SqrtBound> {
        match self {
            AnyMatrixRep::Int(r) => assert_sqrt_bound(r),
            AnyMatrixRep::Fp(r) => assert_sqrt_bound(r),
            AnyMatrixRep::Poly(r) => assert_sqrt_bound(r),
        }
    }
}
