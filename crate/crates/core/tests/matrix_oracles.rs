use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use treedim::matrix::{independence_rank, ExactMatrix, Integers, PolyRing, PrimeField, Ring};
use treedim::{FpMatrix, IntMatrix, Perm, PolyMatrix};

const PRIMES: [u64; 3] = [2, 3, 1_000_003];

/// Rank of the rows by Gaussian elimination over the rationals.
fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in 0..cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the rows over F_p, by plain elimination with inverses.
fn modular_rank(rows: &[Vec<i64>], p: u64) -> usize {
    let p = p as i128;
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p)).collect()).collect();
    let inv = |x: i128| {
        let (mut r, mut b, mut e) = (1i128, x, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let f = inv(a[rank][c]);
        for j in 0..cols {
            a[rank][j] = a[rank][j] * f % p;
        }
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let m = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] - m * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &[Vec<i64>]) -> BigInt {
    let k = m.len();
    let mut total = BigInt::zero();
    let mut idx: Vec<usize> = (0..k).collect();
    permutations(&mut idx, 0, &mut |perm| {
        let sign = Perm::from_images(perm.to_vec()).unwrap().is_odd();
        let term: BigInt = (0..k).map(|i| BigInt::from(m[i][perm[i]])).product();
        total += if sign { -term } else { term };
    });
    total
}

fn permutations(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v, i + 1, f);
        v.swap(i, j);
    }
}

trait Parity {
    /// True for odd permutations.
    fn is_odd(&self) -> bool;
}

impl Parity for Perm {
    fn is_odd(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for s in 0..n {
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 1
    }
}

fn int_matrix(k: usize, flat: &[i64]) -> IntMatrix {
    let rows: Vec<&[i64]> = flat.chunks(k).collect();
    ExactMatrix::from_i64_rows(Integers::new(), &rows).unwrap()
}

fn matrices() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=3, 1usize..=6).prop_flat_map(|(k, count)| {
        (Just(k), prop::collection::vec(prop::collection::vec(-3i64..=3, k * k), count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bareiss_rank_matches_rational_elimination((k, flat) in matrices()) {
        let mats: Vec<IntMatrix> = flat.iter().map(|f| int_matrix(k, f)).collect();
        let rank = independence_rank(&mats).unwrap();
        prop_assert_eq!(rank, rational_rank(&flat));
        for p in PRIMES {
            let field = PrimeField::new(p).unwrap();
            let fp: Vec<FpMatrix> = flat
                .iter()
                .map(|f| {
                    let rows: Vec<&[i64]> = f.chunks(k).collect();
                    ExactMatrix::from_i64_rows(field, &rows).unwrap()
                })
                .collect();
            let r = independence_rank(&fp).unwrap();
            prop_assert_eq!(r, modular_rank(&flat, p));
            prop_assert!(r <= rank);
        }
    }

    #[test]
    fn determinants_match_leibniz(k in 1usize..=4, flat in prop::collection::vec(-4i64..=4, 16)) {
        let entries = &flat[..k * k];
        let rows: Vec<Vec<i64>> = entries.chunks(k).map(<[i64]>::to_vec).collect();
        let expect = leibniz(&rows);
        let m = int_matrix(k, entries);
        prop_assert_eq!(m.det(), expect.clone());
        prop_assert_eq!(m.is_invertible(), expect.abs().is_one());
        for p in PRIMES {
            let field = PrimeField::new(p).unwrap();
            let rows: Vec<&[i64]> = entries.chunks(k).collect();
            let fm = ExactMatrix::from_i64_rows(field, &rows).unwrap();
            let residue = (expect.clone() % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
            prop_assert_eq!(BigInt::from(fm.det()), residue);
        }
    }

    #[test]
    fn polynomial_determinant_commutes_with_evaluation(
        k in 1usize..=3,
        coeffs in prop::collection::vec(prop::collection::vec(0u64..5, 0..=2), 9),
        t in 0u64..5,
    ) {
        let ring = PolyRing::new(5).unwrap();
        let field = PrimeField::new(5).unwrap();
        let eval = |c: &[u64]| c.iter().rev().fold(0, |acc, &x| (acc * t + x) % 5);
        let entries: Vec<Vec<u64>> = coeffs[..k * k]
            .iter()
            .map(|c| ring.parse_elem(&c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")).unwrap_or_default())
            .collect();
        let m: PolyMatrix = ExactMatrix::new(ring, k, entries.clone()).unwrap();
        let at: FpMatrix = ExactMatrix::new(field, k, entries.iter().map(|c| eval(c)).collect()).unwrap();
        prop_assert_eq!(eval(&m.det()), at.det());
    }

    #[test]
    fn products_are_associative((k, flat) in matrices()) {
        prop_assume!(flat.len() >= 3);
        let m: Vec<IntMatrix> = flat.iter().take(3).map(|f| int_matrix(k, f)).collect();
        let left = m[0].mul(&m[1]).unwrap().mul(&m[2]).unwrap();
        let right = m[0].mul(&m[1].mul(&m[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(m[0].commutes(&m[1]).unwrap(), m[0].mul(&m[1]).unwrap() == m[1].mul(&m[0]).unwrap());
    }
}
