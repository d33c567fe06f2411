//! Relation lattices `L` in `Z^n` and the finite abelian groups `Z^n / L`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{smith_normal_form, IntMatrix};

/// Upper-triangular Hermite basis grown one relation at a time. Once the
/// rank is full, entries are kept modulo the current index `[Z^n : L]`.
#[derive(Debug, Clone)]
pub struct IncrementalHnf {
    n: usize,
    pivots: Vec<Option<Vec<BigInt>>>,
    modulus: Option<BigInt>,
}

impl IncrementalHnf {
    pub fn new(n: usize) -> Self {
        IncrementalHnf { n, pivots: vec![None; n], modulus: None }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.n
    }

    /// `[Z^n : L]` once the rank is full.
    pub fn index(&self) -> Option<BigInt> {
        self.is_full_rank().then(|| {
            self.pivots.iter().flatten().enumerate().map(|(i, p)| p[i].clone()).product()
        })
    }

    /// Adds a relation; returns whether the lattice grew.
    pub fn insert(&mut self, relation: &[BigInt]) -> bool {
        assert_eq!(relation.len(), self.n, "relation length");
        let mut v = relation.to_vec();
        self.reduce_vec(&mut v);
        let mut grew = false;
        for col in 0..self.n {
            if v[col].is_zero() {
                continue;
            }
            match self.pivots[col].take() {
                None => {
                    if v[col].is_negative() {
                        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.pivots[col] = Some(v);
                    grew = true;
                    break;
                }
                Some(p) => {
                    let (a, b) = (&p[col], &v[col]);
                    if b.is_multiple_of(a) {
                        let q = b / a;
                        for (x, y) in v.iter_mut().zip(&p) {
                            *x -= &q * y;
                        }
                        self.pivots[col] = Some(p);
                    } else {
                        let eg = a.extended_gcd(b);
                        let (pa, vb) = (a / &eg.gcd, b / &eg.gcd);
                        let mut new_p: Vec<BigInt> =
                            p.iter().zip(&v).map(|(x, y)| &eg.x * x + &eg.y * y).collect();
                        let new_v: Vec<BigInt> = p.iter().zip(&v).map(|(x, y)| &pa * y - &vb * x).collect();
                        if new_p[col].is_negative() {
                            new_p.iter_mut().for_each(|x| *x = -std::mem::take(x));
                        }
                        self.reduce_tail(&mut new_p, col);
                        self.pivots[col] = Some(new_p);
                        v = new_v;
                        grew = true;
                    }
                    self.reduce_vec(&mut v);
                }
            }
        }
        if grew && self.is_full_rank() {
            self.modulus = self.index();
            let mut pivots = std::mem::take(&mut self.pivots);
            for (i, p) in pivots.iter_mut().enumerate() {
                if let Some(p) = p {
                    self.reduce_tail(p, i);
                }
            }
            self.pivots = pivots;
        }
        grew
    }

    fn reduce_vec(&self, v: &mut [BigInt]) {
        if let Some(d) = &self.modulus {
            for x in v.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
    }

    /// Reduces the entries right of the pivot; the pivot itself divides the
    /// modulus and must stay nonzero.
    fn reduce_tail(&self, v: &mut [BigInt], col: usize) {
        if let Some(d) = &self.modulus {
            for x in v[col + 1..].iter_mut() {
                *x = x.mod_floor(d);
            }
        }
    }

    /// Pivot rows; `None` where the rank is still deficient.
    pub fn rows(&self) -> &[Option<Vec<BigInt>>] {
        &self.pivots
    }

    /// Structure of `Z^n / L`; needs full rank.
    pub fn quotient(&self) -> Option<FiniteAbelianGroup> {
        if !self.is_full_rank() {
            return None;
        }
        let rows: Vec<Vec<BigInt>> = self.pivots.iter().flatten().cloned().collect();
        Some(quotient_of_triangular(rows))
    }
}

/// `Z^n / L` written as `Z/d_1 x ... x Z/d_k` with `1 < d_1 | d_2 | ...`,
/// together with the coordinates of each standard generator `e_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    #[serde(with = "super::serde_bigint_vec")]
    pub invariants: Vec<BigInt>,
    /// `classes[j][i]` in `Z/d_i`.
    #[serde(with = "classes_serde")]
    pub classes: Vec<Vec<BigInt>>,
}

impl FiniteAbelianGroup {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    /// Number of even invariants.
    pub fn two_rank(&self) -> usize {
        self.invariants.iter().filter(|d| d.is_even()).count()
    }

    pub fn is_trivial_class(&self, v: &[BigInt]) -> bool {
        v.iter().all(Zero::is_zero)
    }

    /// Coordinates of `sum c_j e_j`.
    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.invariants.len()];
        for (c, class) in coeffs.iter().zip(&self.classes) {
            for (o, x) in out.iter_mut().zip(class) {
                *o += c * x;
            }
        }
        out.iter().zip(&self.invariants).map(|(x, d)| x.mod_floor(d)).collect()
    }
}

/// `rows` is a full-rank upper-triangular basis with positive diagonal.
fn quotient_of_triangular(mut rows: Vec<Vec<BigInt>>) -> FiniteAbelianGroup {
    let n = rows.len();
    let modulus: BigInt = (0..n).map(|i| rows[i][i].clone()).product();
    // eliminate unit pivots: e_i = -sum_{j > i} H[i][j] e_j
    let mut expr: Vec<Option<Vec<BigInt>>> = vec![None; n];
    let mut keep: Vec<usize> = Vec::new();
    for i in (0..n).rev() {
        if rows[i][i].is_one() {
            let row = rows[i].clone();
            for rk in rows.iter_mut().take(i) {
                let c = rk[i].clone();
                if !c.is_zero() {
                    for j in i..n {
                        rk[j] = (&rk[j] - &c * &row[j]).mod_floor(&modulus);
                    }
                }
            }
            expr[i] = Some(row);
        } else {
            keep.push(i);
        }
    }
    keep.reverse();
    let k = keep.len();
    let pos: Vec<Option<usize>> = (0..n).map(|i| keep.iter().position(|&x| x == i)).collect();
    let m = IntMatrix::from_rows(
        &keep.iter().map(|&i| keep.iter().map(|&j| rows[i][j].clone()).collect()).collect::<Vec<Vec<BigInt>>>(),
    )
    .expect("square block");
    // coordinates of every e_i over the kept generators
    let mut over_kept: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        let mut v = vec![BigInt::zero(); k];
        match (&expr[i], pos[i]) {
            (None, Some(p)) => v[p] = BigInt::one(),
            (Some(row), _) => {
                for j in i + 1..n {
                    if row[j].is_zero() {
                        continue;
                    }
                    for (a, b) in v.iter_mut().zip(&over_kept[j]) {
                        *a -= &row[j] * b;
                    }
                }
            }
            (None, None) => unreachable!("every index is kept or eliminated"),
        }
        over_kept[i] = v;
    }
    if k == 0 {
        return FiniteAbelianGroup { invariants: Vec::new(), classes: vec![Vec::new(); n] };
    }
    let snf = smith_normal_form(&m);
    let diag = snf.s.diagonal();
    let live: Vec<usize> = (0..k).filter(|&i| !diag[i].is_one()).collect();
    let invariants: Vec<BigInt> = live.iter().map(|&i| diag[i].clone()).collect();
    let classes = over_kept
        .iter()
        .map(|v| {
            live.iter()
                .map(|&c| {
                    let x: BigInt = v.iter().enumerate().map(|(r, a)| a * &snf.v[(r, c)]).sum();
                    x.mod_floor(&diag[c])
                })
                .collect()
        })
        .collect();
    FiniteAbelianGroup { invariants, classes }
}

mod classes_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|row| row.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}
