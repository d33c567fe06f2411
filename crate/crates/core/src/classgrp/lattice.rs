use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::{mul_coords, IdealFactorization, PrimeIdeal};
use crate::cubic::{CubicElement, Field};
use crate::intarith::hermite_rows;

/// An integral ideal as a rank-3 sublattice of `Z[w] = Z^3`, in Hermite form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLattice {
    field: Field,
    rows: Vec<[BigInt; 3]>,
}

fn basis_times(m: &BigInt, g: &[BigInt; 3]) -> [[BigInt; 3]; 3] {
    let one = [BigInt::from(1), BigInt::zero(), BigInt::zero()];
    let w = [BigInt::zero(), BigInt::from(1), BigInt::zero()];
    let w2 = [BigInt::zero(), BigInt::zero(), BigInt::from(1)];
    [mul_coords(m, g, &one), mul_coords(m, g, &w), mul_coords(m, g, &w2)]
}

impl IdealLattice {
    fn from_generators(field: &Field, gens: Vec<[BigInt; 3]>) -> Self {
        let rows = hermite_rows(&gens.into_iter().map(|g| g.to_vec()).collect::<Vec<_>>());
        let rows = rows.into_iter().map(|r| [r[0].clone(), r[1].clone(), r[2].clone()]).collect::<Vec<_>>();
        debug_assert_eq!(rows.len(), 3, "ideal lattices have full rank");
        IdealLattice { field: field.clone(), rows }
    }

    pub fn unit(field: &Field) -> Self {
        Self::from_generators(field, basis_times(field.m(), &[BigInt::from(1), BigInt::zero(), BigInt::zero()]).to_vec())
    }

    /// `(p, g(w))` as a Z-module.
    pub fn prime(field: &Field, q: &PrimeIdeal) -> Self {
        let m = field.m();
        let mut gens = basis_times(m, &[BigInt::from(q.p), BigInt::zero(), BigInt::zero()]).to_vec();
        gens.extend(basis_times(m, &q.generator_poly()));
        gens.retain(|g| g.iter().any(|c| !c.is_zero()));
        Self::from_generators(field, gens)
    }

    pub fn from_factorization(field: &Field, f: &IdealFactorization) -> Self {
        let mut acc = Self::unit(field);
        for (q, e) in &f.factors {
            let p = Self::prime(field, q);
            for _ in 0..*e {
                acc = acc.mul(&p);
            }
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.field.m();
        let gens = self.rows.iter().flat_map(|a| other.rows.iter().map(move |b| mul_coords(m, a, b))).collect();
        Self::from_generators(&self.field, gens)
    }

    /// Index in `Z[w]`, which is the ideal norm.
    pub fn norm(&self) -> BigInt {
        self.rows.iter().enumerate().map(|(i, r)| r[i].abs()).product()
    }

    pub fn rows(&self) -> &[[BigInt; 3]] {
        &self.rows
    }

    /// Basis reduced for `x^2 + theta^2 y^2 + theta^4 z^2`.
    pub fn reduced_basis(&self) -> Vec<[BigInt; 3]> {
        let mut b = self.rows.clone();
        lll(&mut b, self.field.theta_f64());
        b
    }

    /// Nonzero elements `sum c_i b_i` over the reduced basis with
    /// `|c_i| <= radius`, one per sign pair, smallest first.
    pub fn small_elements(&self, radius: i64) -> Vec<CubicElement> {
        let b = self.reduced_basis();
        let mut out: Vec<(f64, CubicElement)> = Vec::new();
        for c0 in 0..=radius {
            for c1 in -radius..=radius {
                for c2 in -radius..=radius {
                    if c0 == 0 && (c1 < 0 || c1 == 0 && c2 <= 0) {
                        continue;
                    }
                    let c = [c0, c1, c2].map(BigInt::from);
                    let v: [BigInt; 3] =
                        std::array::from_fn(|j| (0..3).map(|i| &c[i] * &b[i][j]).sum::<BigInt>());
                    let e = CubicElement::from_ints(&self.field, v[0].clone(), v[1].clone(), v[2].clone());
                    out.push((e.t2_f64(), e));
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.into_iter().map(|(_, e)| e).collect()
    }
}

fn embed(v: &[BigInt; 3], theta: f64) -> [f64; 3] {
    let f = |x: &BigInt| x.to_f64().unwrap_or(f64::INFINITY);
    [f(&v[0]), theta * f(&v[1]), theta * theta * f(&v[2])]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram-Schmidt vectors' squared lengths and coefficients.
fn gso(b: &[[BigInt; 3]], theta: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = b.len();
    let v: Vec<[f64; 3]> = b.iter().map(|x| embed(x, theta)).collect();
    let mut star: Vec<[f64; 3]> = Vec::with_capacity(n);
    let mut len = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut s = v[i];
        for j in 0..i {
            mu[i][j] = dot(&v[i], &star[j]) / len[j];
            for (sk, tk) in s.iter_mut().zip(&star[j]) {
                *sk -= mu[i][j] * tk;
            }
        }
        len[i] = dot(&s, &s);
        star.push(s);
    }
    (len, mu)
}

/// LLL with `delta = 0.99`; decisions in double precision, basis updates exact.
fn lll(b: &mut [[BigInt; 3]], theta: f64) {
    let n = b.len();
    let mut k = 1;
    let mut rounds = 0;
    while k < n && rounds < 10_000 {
        rounds += 1;
        for j in (0..k).rev() {
            let (_, mu) = gso(b, theta);
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = BigInt::from_f64(q).expect("finite coefficient");
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let (len, mu) = gso(b, theta);
        if len[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * len[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}
