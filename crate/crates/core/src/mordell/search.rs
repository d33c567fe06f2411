use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::{Curve, CurvePoint};
use crate::intarith::exact_sqrt;

/// Box for the naive search: `1 <= t <= t_max`, `|r| <= r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub t_max: u64,
    pub r_max: u64,
}

/// Every affine point with `t <= t_max` and `|r| <= r_max`, one of each
/// `+-P` pair (the one with `s >= 0`), ordered by `t` then `r`.
pub fn search_points(curve: &Curve, bounds: SearchBounds) -> Vec<CurvePoint> {
    let m = curve.m();
    let per_t: Vec<Vec<CurvePoint>> = (1..=bounds.t_max)
        .into_par_iter()
        .map(|t| scan_t(curve, m, t, bounds.r_max))
        .collect();
    per_t.into_iter().flatten().collect()
}

fn scan_t(curve: &Curve, m: &BigInt, t: u64, r_max: u64) -> Vec<CurvePoint> {
    let tb = BigInt::from(t);
    let mt6 = m * tb.pow(6);
    // r^3 >= m t^6 > 0
    let r_min = mt6.cbrt();
    let Some(start) = r_min.to_u64() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let small = mt6.to_i128().filter(|_| r_max <= 5_000_000);
    for r in start.max(1)..=r_max {
        if t > 1 && !r.gcd(&t).is_one() {
            continue;
        }
        let s = match small {
            Some(c) => {
                let v = (r as i128).pow(3) - c;
                if v < 0 || !plausible_square(v as u128) {
                    continue;
                }
                exact_sqrt(&BigInt::from(v))
            }
            None => exact_sqrt(&(BigInt::from(r).pow(3) - &mt6)),
        };
        if let Some(s) = s {
            if let Ok(p) = curve.point(r, s, t) {
                out.push(p);
            }
        }
    }
    out
}

/// Quadratic-residue filter mod 64, 63 and 65.
fn plausible_square(v: u128) -> bool {
    const fn table<const N: usize>() -> [bool; N] {
        let mut t = [false; N];
        let mut i = 0;
        while i < N {
            t[(i * i) % N] = true;
            i += 1;
        }
        t
    }
    static Q64: [bool; 64] = table::<64>();
    static Q63: [bool; 63] = table::<63>();
    static Q65: [bool; 65] = table::<65>();
    Q64[(v % 64) as usize] && Q63[(v % 63) as usize] && Q65[(v % 65) as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn xs(points: &[CurvePoint]) -> Vec<String> {
        points.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn m11() {
        let e = Curve::new(11).unwrap();
        let pts = search_points(&e, SearchBounds { t_max: 4, r_max: 10_000 });
        let shown = xs(&pts);
        for want in ["(3, 4)", "(15, 58)", "(9/4, 5/8)"] {
            assert!(shown.contains(&want.to_string()), "{want} missing from {shown:?}");
        }
        assert!(pts.windows(2).all(|w| {
            let (a, b) = (w[0].affine().unwrap(), w[1].affine().unwrap());
            (&a.t, &a.r) < (&b.t, &b.r)
        }));
        assert!(search_points(&e, SearchBounds { t_max: 1, r_max: 2 }).is_empty());
    }

    #[test]
    fn m219() {
        let e = Curve::new(219).unwrap();
        let pts = search_points(&e, SearchBounds { t_max: 3, r_max: 1000 });
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        for (x, y) in [(q(55, 9), q(82, 27)), (q(283, 9), q(4744, 27))] {
            assert!(pts.iter().any(|p| p.x() == Some(x.clone()) && p.y() == Some(y.clone())));
        }
    }

    #[test]
    fn square_filter_is_sound() {
        for k in 0u128..5000 {
            assert!(plausible_square(k * k));
        }
    }
}
