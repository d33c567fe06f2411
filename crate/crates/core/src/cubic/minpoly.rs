use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{is_square, CubicElement, SquareTest};
use crate::poly::IntPoly;
use crate::Result;

/// `charpoly_e(x^2)` with content removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtMinpoly {
    pub poly: IntPoly,
    /// Set when `e` is a square in `K`, so the sextic factors.
    pub reducible: bool,
}

pub fn minpoly_sqrt(e: &CubicElement) -> Result<SqrtMinpoly> {
    let charpoly = e.charpoly();
    let den = charpoly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut coeffs = vec![BigInt::zero(); 7];
    for (i, c) in charpoly.iter().enumerate() {
        coeffs[2 * i] = (c * den.clone()).to_integer();
    }
    let poly = IntPoly::new(coeffs).primitive_part();
    let reducible = !e.is_zero() && matches!(is_square(e)?, SquareTest::Square(_));
    Ok(SqrtMinpoly { poly, reducible: reducible || e.is_zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::CubicField;

    #[test]
    fn worked_examples() {
        let f = CubicField::new(11).unwrap();
        let got = minpoly_sqrt(&CubicElement::from_ints(&f, 9, -4, 0)).unwrap();
        assert_eq!(got.poly.to_string(), "x^6 - 27x^4 + 243x^2 - 25");
        assert!(!got.reducible);

        let f = CubicField::new(219).unwrap();
        let got = minpoly_sqrt(&CubicElement::from_ints(&f, 115657, -12996, 0)).unwrap();
        assert_eq!(
            got.poly.to_string(),
            "x^6 - 346971x^4 + 40129624947x^2 - 1066391672856409"
        );
    }

    #[test]
    fn square_flagged() {
        let f = CubicField::new(11).unwrap();
        let got = minpoly_sqrt(&CubicElement::from_integer(&f, 4)).unwrap();
        assert_eq!(got.poly, IntPoly::from_i64(&[-64, 0, 48, 0, -12, 0, 1]));
        assert!(got.reducible);
    }
}
