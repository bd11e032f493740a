//! Logarithmic indices and finite-depth dimension profiles.
//!
//! Every index that appears here is a product of factorials of branching
//! degrees, so its logarithm is kept exactly as an exponent vector over the
//! primes up to the largest degree. Ratios of two such logarithms are exact
//! rationals when the exponent vectors are proportional (always the case when
//! every degree is the same prime); otherwise they are 128-bit reals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use dashu_float::FBig;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::catalog::TreeGroup;
use crate::engine::{is_level_transitive, projection, rigid_level_stabilizer};
use crate::error::{Error, Result};
use crate::tree::{TreeShape, Vertex, MAX_DEGREE};

/// Working precision of the real fallback, in bits.
pub const PRECISION_BITS: usize = 128;
/// Comparison tolerance for real-valued ratios.
pub const TOLERANCE: f64 = 1e-20;

pub type Real = FBig;

/// The logarithm of a positive integer, as its prime exponent vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogInt {
    exps: BTreeMap<u64, u64>,
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2..=MAX_DEGREE as u64).filter(|&p| (2..p).all(|d| p % d != 0))
}

impl LogInt {
    pub fn zero() -> Self {
        LogInt::default()
    }

    /// Factors `n` over the primes up to [`MAX_DEGREE`]. Every group order
    /// met here divides a product of factorials of tree degrees.
    pub fn of(n: &BigUint) -> Result<LogInt> {
        if n.is_zero() {
            return Err(Error::Inapplicable("logarithm of zero".into()));
        }
        let mut rest = n.clone();
        let mut exps = BTreeMap::new();
        for p in small_primes() {
            let e = if p == 2 {
                let e = rest.trailing_zeros().unwrap_or(0);
                rest >>= e;
                e
            } else {
                let p = BigUint::from(p);
                let mut e = 0;
                loop {
                    let (q, r) = rest.div_rem(&p);
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    e += 1;
                }
                e
            };
            if e > 0 {
                exps.insert(p, e);
            }
        }
        if !rest.is_one() {
            return Err(Error::Inapplicable(format!(
                "{n} has a prime factor above the degree bound {MAX_DEGREE}"
            )));
        }
        Ok(LogInt { exps })
    }

    /// `log(m!)`.
    pub fn factorial(m: usize) -> LogInt {
        let mut f = BigUint::one();
        for i in 2..=m {
            f *= BigUint::from(i);
        }
        LogInt::of(&f).expect("factorial of a bounded degree")
    }

    pub fn exponent(&self, p: u64) -> u64 {
        self.exps.get(&p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn scaled(&self, k: u64) -> LogInt {
        if k == 0 {
            return LogInt::zero();
        }
        LogInt {
            exps: self.exps.iter().map(|(&p, &e)| (p, e * k)).collect(),
        }
    }

    pub fn plus(&self, other: &LogInt) -> LogInt {
        let mut exps = self.exps.clone();
        for (&p, &e) in &other.exps {
            *exps.entry(p).or_insert(0) += e;
        }
        LogInt { exps }
    }

    /// The integer itself.
    pub fn value(&self) -> BigUint {
        self.exps
            .iter()
            .fold(BigUint::one(), |acc, (&p, &e)| acc * BigUint::from(p).pow(e as u32))
    }

    /// `self / other` exactly, when the exponent vectors are proportional.
    pub fn exact_ratio(&self, other: &LogInt) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let (&p, &d) = other.exps.iter().next()?;
        let q = BigRational::new(self.exponent(p).into(), d.into());
        let primes = self.exps.keys().chain(other.exps.keys());
        for &r in primes {
            let lhs = BigRational::from_integer(self.exponent(r).into());
            let rhs = &q * BigRational::from_integer(other.exponent(r).into());
            if lhs != rhs {
                return None;
            }
        }
        Some(q)
    }

    /// Natural logarithm at [`PRECISION_BITS`].
    pub fn ln(&self) -> Real {
        let mut acc = real(0);
        for (&p, &e) in &self.exps {
            acc += real(p).ln() * real(e);
        }
        acc
    }
}

fn real(x: u64) -> Real {
    Real::from(x).with_precision(PRECISION_BITS).value()
}

fn ubig(n: &BigUint) -> dashu_int::UBig {
    dashu_int::UBig::from_le_bytes(&n.to_bytes_le())
}

fn real_ratio(q: &BigRational) -> Real {
    let num = Real::from(ubig(&q.numer().abs().to_biguint().expect("non-negative")));
    let den = Real::from(ubig(&q.denom().to_biguint().expect("positive")));
    num.with_precision(PRECISION_BITS).value() / den.with_precision(PRECISION_BITS).value()
}

impl fmt::Display for LogInt {
    /// `3*ln2+2*ln3`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exps
            .iter()
            .map(|(p, e)| if *e == 1 { format!("ln{p}") } else { format!("{e}*ln{p}") })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// `log|Aut T : St(n)| = sum_{k<n} N_k log(m_k!)`.
pub fn ambient_log_index(shape: &TreeShape, n: usize) -> Result<LogInt> {
    shape.check_depth(n)?;
    Ok((0..n).fold(LogInt::zero(), |acc, k| {
        acc.plus(&LogInt::factorial(shape.degree(k)).scaled(shape.level_size(k) as u64))
    }))
}

/// The same index as `(m, c)` terms of `sum c * log(m!)`, merged by degree.
pub fn ambient_factorial_terms(shape: &TreeShape, n: usize) -> Result<Vec<(usize, u64)>> {
    shape.check_depth(n)?;
    let mut terms: BTreeMap<usize, u64> = BTreeMap::new();
    for k in 0..n {
        *terms.entry(shape.degree(k)).or_insert(0) += shape.level_size(k) as u64;
    }
    Ok(terms.into_iter().collect())
}

/// A dimension ratio, exact when possible.
#[derive(Clone, Debug)]
pub enum Ratio {
    Exact(BigRational),
    Real(Real),
}

impl Ratio {
    pub fn of(num: &LogInt, den: &LogInt) -> Result<Ratio> {
        if den.is_zero() {
            return Err(Error::Inapplicable("ratio with zero denominator".into()));
        }
        Ok(match num.exact_ratio(den) {
            Some(q) => Ratio::Exact(q),
            None => Ratio::Real(num.ln() / den.ln()),
        })
    }

    pub fn to_real(&self) -> Real {
        match self {
            Ratio::Exact(q) => real_ratio(q),
            Ratio::Real(x) => x.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Ratio::Exact(q) => q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN),
            Ratio::Real(x) => x.to_f64().value(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Ratio::Exact(_))
    }

    /// Exact comparison of exact ratios; reals compare equal within [`TOLERANCE`].
    pub fn compare(&self, other: &Ratio) -> Ordering {
        if let (Ratio::Exact(a), Ratio::Exact(b)) = (self, other) {
            return a.cmp(b);
        }
        compare_reals(&self.to_real(), &other.to_real())
    }
}

fn compare_reals(a: &Real, b: &Real) -> Ordering {
    let diff = (a.clone() - b.clone()).to_f64().value();
    if diff.abs() <= TOLERANCE {
        Ordering::Equal
    } else if diff < 0.0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl fmt::Display for Ratio {
    /// Exact values as `p/q`; reals with 30 significant digits and their
    /// precision tag.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Ratio::Real(x) => {
                let dec = x.to_decimal().value().with_precision(30).value();
                write!(f, "{dec}[{PRECISION_BITS}b]")
            }
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for LogInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRecord {
    pub n: usize,
    pub log_num: LogInt,
    pub log_den: LogInt,
    pub ratio: Ratio,
}

/// Descriptive statistics over the trailing window of levels `from..=to`.
/// They are not limit estimates.
#[derive(Clone, Debug, Serialize)]
pub struct WindowStats {
    pub from: usize,
    pub to: usize,
    pub min: Ratio,
    pub max: Ratio,
    pub last: Ratio,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionProfile {
    pub group: String,
    pub shape: String,
    pub depth: usize,
    pub n_max: usize,
    pub records: Vec<LevelRecord>,
    pub window: WindowStats,
}

impl DimensionProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,log_num,log_den,ratio\n");
        for r in &self.records {
            out.push_str(&format!("{},{},{},{}\n", r.n, r.log_num, r.log_den, r.ratio));
        }
        out
    }

    pub fn ratio(&self, n: usize) -> Option<&Ratio> {
        self.records.iter().find(|r| r.n == n).map(|r| &r.ratio)
    }
}

/// Number of trailing levels summarized by a profile up to `n_max`.
pub fn window_len(n_max: usize) -> usize {
    n_max.div_ceil(3)
}

pub fn dimension_profile(g: &TreeGroup, n_max: usize) -> Result<DimensionProfile> {
    if n_max == 0 {
        return Err(Error::Inapplicable("a profile needs at least one level".into()));
    }
    if n_max > g.depth() {
        return Err(Error::DepthExceeded {
            requested: n_max,
            available: g.depth(),
        });
    }
    let mut records = vec![];
    for n in 1..=n_max {
        let log_num = LogInt::of(&g.level_order(n)?)?;
        let log_den = ambient_log_index(g.shape(), n)?;
        let ratio = Ratio::of(&log_num, &log_den)?;
        records.push(LevelRecord {
            n,
            log_num,
            log_den,
            ratio,
        });
    }
    let from = n_max + 1 - window_len(n_max);
    let tail = &records[from - 1..];
    let pick = |want: Ordering| {
        tail.iter()
            .map(|r| &r.ratio)
            .fold(None::<&Ratio>, |best, r| match best {
                Some(b) if r.compare(b) != want => Some(b),
                _ => Some(r),
            })
            .cloned()
            .expect("non-empty window")
    };
    let window = WindowStats {
        from,
        to: n_max,
        min: pick(Ordering::Less),
        max: pick(Ordering::Greater),
        last: tail.last().expect("non-empty window").ratio.clone(),
    };
    Ok(DimensionProfile {
        group: g.name().to_string(),
        shape: g.shape().to_header(),
        depth: g.depth(),
        n_max,
        records,
        window,
    })
}

/// One instance of `log|St_G(k):St_G(k+n)| <= sum_{v in L_k} log|G_v:St_{G_v}(n)|`.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    pub k: usize,
    pub n: usize,
    pub depth: usize,
    pub lhs: LogInt,
    pub rhs: LogInt,
    pub holds: bool,
}

/// Level orders `|G_v : St(n)|` for `n = 0..=n_max`, one entry per orbit of
/// `G` on level `k` with the orbit size. Projections at vertices in one orbit
/// are conjugate, so one representative per orbit suffices.
fn projection_orders(g: &TreeGroup, k: usize, n_max: usize) -> Result<Vec<(usize, Vec<BigUint>)>> {
    let shape = g.shape();
    let mut seen = vec![false; shape.level_size(k)];
    let mut out = vec![];
    for idx in 0..shape.level_size(k) {
        if seen[idx] {
            continue;
        }
        let v = Vertex::from_index(shape, k, idx);
        let orbit_size = match v.point(shape) {
            None => 1,
            Some(p) => {
                let offset = shape.level_offset(k);
                let orbit = g.vertex_group().orbit(p);
                for &q in &orbit {
                    seen[q - offset] = true;
                }
                orbit.len()
            }
        };
        let gv = if k == 0 { g.clone() } else { projection(g, &v)? };
        let orders = (0..=n_max).map(|n| gv.level_order(n)).collect::<Result<Vec<_>>>()?;
        out.push((orbit_size, orders));
    }
    Ok(out)
}

fn inequality_from(g: &TreeGroup, k: usize, n: usize, orders: &[(usize, Vec<BigUint>)]) -> Result<InequalityCheck> {
    let quotient = g.level_order(k + n)? / g.level_order(k)?;
    let rhs_value = orders
        .iter()
        .fold(BigUint::one(), |acc, (size, o)| acc * o[n].pow(*size as u32));
    Ok(InequalityCheck {
        k,
        n,
        depth: g.depth(),
        lhs: LogInt::of(&quotient)?,
        rhs: LogInt::of(&rhs_value)?,
        holds: quotient <= rhs_value,
    })
}

fn check_total(g: &TreeGroup, total: usize) -> Result<()> {
    if total > g.depth() {
        return Err(Error::DepthExceeded {
            requested: total,
            available: g.depth(),
        });
    }
    Ok(())
}

pub fn check_level_index_inequality(g: &TreeGroup, k: usize, n: usize) -> Result<InequalityCheck> {
    check_total(g, k + n)?;
    let orders = projection_orders(g, k, n)?;
    inequality_from(g, k, n, &orders)
}

/// All checks with `n >= 1` and `k + n <= max_total`.
pub fn inequality_sweep(g: &TreeGroup, max_total: usize) -> Result<Vec<InequalityCheck>> {
    check_total(g, max_total)?;
    let mut out = vec![];
    for k in 0..max_total {
        let orders = projection_orders(g, k, max_total - k)?;
        for n in 1..=max_total - k {
            out.push(inequality_from(g, k, n, &orders)?);
        }
    }
    Ok(out)
}

/// `log|St_{G_v}(1):St_{G_v}(1+n)| <= sum_{x < m-1} log|G_{vx}:St(n)|`, valid
/// when the level-1 rigid stabilizers of `G_v` are trivial.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub vertex: String,
    pub n: usize,
    pub depth: usize,
    pub lhs: LogInt,
    pub rhs: LogInt,
    pub holds: bool,
}

fn project(g: &TreeGroup, v: &Vertex) -> Result<TreeGroup> {
    if v.level() == 0 {
        Ok(g.clone())
    } else {
        projection(g, v)
    }
}

fn level_one_rist_trivial(gv: &TreeGroup) -> Result<bool> {
    Ok(rigid_level_stabilizer(gv, 1)?.iter().all(|r| r.is_trivial()))
}

pub fn trivial_rist_projection_bound(g: &TreeGroup, v: &Vertex, n: usize) -> Result<BoundCheck> {
    check_total(g, v.level() + 1 + n)?;
    let gv = project(g, v)?;
    if !level_one_rist_trivial(&gv)? {
        return Err(Error::Inapplicable(format!(
            "the level-1 rigid stabilizers of the projection at {v} are nontrivial"
        )));
    }
    let quotient = gv.level_order(1 + n)? / gv.level_order(1)?;
    let m = gv.shape().degree(0);
    let mut rhs_value = BigUint::one();
    for x in 0..m - 1 {
        let child = Vertex::root().child(x);
        rhs_value *= projection(&gv, &child)?.level_order(n)?;
    }
    Ok(BoundCheck {
        vertex: v.to_string(),
        n,
        depth: g.depth(),
        lhs: LogInt::of(&quotient)?,
        rhs: LogInt::of(&rhs_value)?,
        holds: quotient <= rhs_value,
    })
}

/// Finite-depth form of the dimension decay along a path.
///
/// Write `L_v(h) = log|G_v : St(h)|`, `a_v = L_v(1)` and `c_v = m - 1` when
/// the level-1 rigid stabilizers of `G_v` are trivial (else `c_v = m`). For a
/// projection transitive on its first level, the two inequalities above give
/// `L_v(h) <= a_v + c_v L_{vx}(h - 1)` for the child `vx` on the path; each
/// step is checked exactly. Unrolled along the first `n_levels` prefixes this
/// yields `r_root <= product * r_end + correction`, where `correction`
/// collects the `a_v` terms and vanishes as the depth grows.
#[derive(Clone, Debug, Serialize)]
pub struct DecayCertificate {
    pub path: String,
    pub n_levels: usize,
    pub depth: usize,
    /// Prefixes of the path (by length) whose projection has trivial
    /// level-1 rigid stabilizers.
    pub trivial_rist_prefixes: Vec<usize>,
    pub product: Ratio,
    pub r_root: Ratio,
    pub r_end: Ratio,
    pub correction: Ratio,
    pub steps_hold: Vec<bool>,
    pub holds: bool,
}

pub fn decay_certificate(g: &TreeGroup, path: &Vertex, n_levels: usize) -> Result<DecayCertificate> {
    if path.level() < n_levels {
        return Err(Error::InvalidVertex(format!(
            "path {path} is shorter than {n_levels} levels"
        )));
    }
    if n_levels >= g.depth() {
        return Err(Error::DepthExceeded {
            requested: n_levels + 1,
            available: g.depth(),
        });
    }
    let d = g.depth();
    let mut gv = g.clone();
    let mut trivial = vec![];
    let mut steps_hold = vec![];
    let mut product = BigRational::one();
    // sum_j (prod_{i<j} c_i) a_j, and prod_j c_j, as exact logs.
    let mut correction = LogInt::zero();
    let mut c_prod: u64 = 1;
    for j in 0..n_levels {
        if !is_level_transitive(&gv, 1)? {
            return Err(Error::Hypothesis(format!(
                "the projection at {} is not transitive on its first level",
                path.prefix(j)
            )));
        }
        let m = gv.shape().degree(0);
        let rist_trivial = level_one_rist_trivial(&gv)?;
        let c = if rist_trivial { m - 1 } else { m };
        if rist_trivial {
            trivial.push(j);
            product *= BigRational::new((m as u64 - 1).into(), (m as u64).into());
        }
        let a = gv.level_order(1)?;
        correction = correction.plus(&LogInt::of(&a)?.scaled(c_prod));
        c_prod *= c as u64;
        let next = projection(&gv, &Vertex::root().child(path.digit(j)))?;
        let h = d - j;
        let bound = &a * next.level_order(h - 1)?.pow(c as u32);
        steps_hold.push(gv.level_order(h)? <= bound);
        gv = next;
    }
    let den_root = ambient_log_index(g.shape(), d)?;
    let r_root = Ratio::of(&LogInt::of(&g.level_order(d)?)?, &den_root)?;
    let h = d - n_levels;
    let r_end = Ratio::of(&LogInt::of(&gv.level_order(h)?)?, &ambient_log_index(gv.shape(), h)?)?;
    let correction = Ratio::of(&correction, &den_root)?;
    let bound = real_ratio(&product) * r_end.to_real() + correction.to_real();
    let chain = compare_reals(&r_root.to_real(), &bound) != Ordering::Greater;
    let holds = chain && steps_hold.iter().all(|&b| b);
    Ok(DecayCertificate {
        path: path.prefix(n_levels).to_string(),
        n_levels,
        depth: d,
        trivial_rist_prefixes: trivial,
        product: Ratio::Exact(product),
        r_root,
        r_end,
        correction,
        steps_hold,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn group(name: &str, depth: usize) -> TreeGroup {
        catalog(name).unwrap().unfold(depth).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn exact(r: &Ratio) -> BigRational {
        match r {
            Ratio::Exact(q) => q.clone(),
            Ratio::Real(_) => panic!("expected an exact ratio"),
        }
    }

    #[test]
    fn ambient_examples() {
        let binary = TreeShape::constant(2, 5).unwrap();
        assert_eq!(ambient_log_index(&binary, 3).unwrap().to_string(), "7*ln2");
        let ternary = TreeShape::constant(3, 3).unwrap();
        assert_eq!(ambient_log_index(&ternary, 2).unwrap(), LogInt::factorial(3).scaled(4));
        assert_eq!(ambient_factorial_terms(&ternary, 2).unwrap(), vec![(3, 4)]);
        let mixed = TreeShape::new(vec![2, 3]).unwrap();
        assert_eq!(ambient_factorial_terms(&mixed, 2).unwrap(), vec![(2, 1), (3, 2)]);
        assert_eq!(ambient_log_index(&mixed, 2).unwrap().to_string(), "3*ln2+2*ln3");
    }

    #[test]
    fn log_int_factoring() {
        let x = LogInt::of(&BigUint::from(720u32)).unwrap();
        assert_eq!(x.to_string(), "4*ln2+2*ln3+ln5");
        assert_eq!(x.value(), BigUint::from(720u32));
        assert!(LogInt::of(&BigUint::from(37u32)).is_err());
    }

    #[test]
    fn ratios() {
        let a = LogInt::of(&BigUint::from(36u32)).unwrap();
        let b = LogInt::of(&BigUint::from(6u32)).unwrap();
        assert_eq!(exact(&Ratio::of(&a, &b).unwrap()), q(2, 1));
        let c = LogInt::of(&BigUint::from(2u32)).unwrap();
        let r = Ratio::of(&c, &b).unwrap();
        assert!(!r.is_exact());
        assert!((r.to_f64() - 2f64.ln() / 6f64.ln()).abs() < 1e-15);
        assert!(r.to_string().ends_with("[128b]"));
    }

    #[test]
    fn profiles() {
        let full = dimension_profile(&group("full", 6), 6).unwrap();
        assert!(full.records.iter().all(|r| exact(&r.ratio) == q(1, 1)));

        let odo = dimension_profile(&group("odometer", 8), 8).unwrap();
        assert_eq!(exact(odo.ratio(3).unwrap()), q(3, 7));
        assert!(odo.to_csv().contains("\n3,3*ln2,7*ln2,3/7\n"));

        let grig = dimension_profile(&group("grigorchuk", 5), 5).unwrap();
        assert_eq!(exact(grig.ratio(3).unwrap()), q(1, 1));
        assert_eq!(exact(grig.ratio(4).unwrap()), q(12, 15));
        assert_eq!(exact(grig.ratio(5).unwrap()), q(22, 31));
        assert_eq!((grig.window.from, grig.window.to), (4, 5));
        assert_eq!(exact(&grig.window.min), q(22, 31));
        assert_eq!(exact(&grig.window.max), q(4, 5));
    }

    #[test]
    fn level_index_inequality() {
        let full = group("full", 4);
        let c = check_level_index_inequality(&full, 1, 3).unwrap();
        assert!(c.holds && c.lhs == c.rhs);

        let odo = group("odometer", 3);
        let c = check_level_index_inequality(&odo, 1, 2).unwrap();
        assert_eq!(c.lhs.to_string(), "2*ln2");
        assert_eq!(c.rhs.to_string(), "4*ln2");
        assert!(c.holds);

        assert!(check_level_index_inequality(&group("grigorchuk", 4), 1, 3).unwrap().holds);
        assert!(check_level_index_inequality(&odo, 2, 2).is_err());
    }

    #[test]
    fn projection_bound() {
        let odo = group("odometer", 4);
        let b = trivial_rist_projection_bound(&odo, &Vertex::root(), 2).unwrap();
        assert!(b.holds);
        assert_eq!(b.lhs, b.rhs);
        assert_eq!(b.lhs.to_string(), "2*ln2");

        let diag = group("abelian_diagonal", 4);
        assert!(trivial_rist_projection_bound(&diag, &Vertex::root(), 2).unwrap().holds);

        let grig = group("grigorchuk", 5);
        assert!(matches!(
            trivial_rist_projection_bound(&grig, &Vertex::root(), 2),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn decay() {
        let odo = group("odometer", 8);
        let path = Vertex::leftmost(3);
        let c = decay_certificate(&odo, &path, 3).unwrap();
        assert_eq!(exact(&c.product), q(1, 8));
        assert_eq!(c.trivial_rist_prefixes, vec![0, 1, 2]);
        assert!(c.holds);

        let full = group("full", 5);
        let c = decay_certificate(&full, &Vertex::leftmost(2), 2).unwrap();
        assert_eq!(exact(&c.product), q(1, 1));
        assert!(c.trivial_rist_prefixes.is_empty());
        assert!(c.holds);
    }
}
