//! The quintic smoothstep, the exponent profile built from it, and the
//! piecewise-linear ceiling it has to stay under.
//!
//! All three are evaluated over any [`Field`], so the same code serves `f64`
//! grid scans, high-precision bound evaluation and exact rational checks.
//! Derivatives are analytic; the `x >= 1` branches invert the argument and
//! apply the chain rule.

use crate::error::{Error, Result};
use crate::field::{Field, Real};

/// A function value together with its first two derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivs<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Field> Derivs<T> {
    fn zero(like: &T) -> Self {
        Derivs {
            value: like.zero_like(),
            d1: like.zero_like(),
            d2: like.zero_like(),
        }
    }

    fn scale(self, c: &T) -> Self {
        Derivs {
            value: self.value * c.clone(),
            d1: self.d1 * c.clone(),
            d2: self.d2 * c.clone(),
        }
    }
}

/// `6z^5 - 15z^4 + 10z^3` on `[0, 1]`.
///
/// The profile is the same for every clique order, so unlike the other
/// functions here it takes no `r`.
pub fn beta<T: Field>(z: &T) -> Result<Derivs<T>> {
    if *z < z.zero_like() || *z > z.int(1) {
        return Err(Error::Domain("smoothstep argument must lie in [0, 1]".into()));
    }
    Ok(beta_unchecked(z))
}

fn beta_unchecked<T: Field>(z: &T) -> Derivs<T> {
    let one = z.int(1);
    let z2 = z.clone() * z.clone();
    let z3 = z2.clone() * z.clone();
    let zm1 = z.clone() - one.clone();
    // z^3 (6z^2 - 15z + 10)
    let value = z3 * (z.int(6) * z2.clone() - z.int(15) * z.clone() + z.int(10));
    // 30 z^2 (z - 1)^2
    let d1 = z.int(30) * z2 * zm1.clone() * zm1.clone();
    // 60 z (2z - 1)(z - 1)
    let d2 = z.int(60) * z.clone() * (z.int(2) * z.clone() - one) * zm1;
    Derivs { value, d1, d2 }
}

fn check_order(r: u32) -> Result<()> {
    if r < 4 {
        return Err(Error::Domain(format!("clique order r must be >= 4 (got {r})")));
    }
    Ok(())
}

fn check_nonneg<T: Field>(x: &T, what: &str) -> Result<()> {
    if *x < x.zero_like() {
        return Err(Error::Domain(format!("{what} requires x >= 0")));
    }
    Ok(())
}

/// The twice-differentiable exponent profile `alpha_r`.
pub fn alpha<T: Field>(r: u32, x: &T) -> Result<Derivs<T>> {
    check_order(r)?;
    check_nonneg(x, "alpha")?;
    let piece = if *x <= x.int(1) {
        if *x <= ramp_start(r, x) {
            Piece::Flat
        } else {
            Piece::Ramp
        }
    } else if x.int(1) / x.clone() <= ramp_start(r, x) {
        Piece::MirroredFlat
    } else {
        Piece::MirroredRamp
    };
    Ok(alpha_piece(r, piece, x))
}

/// The four analytic pieces of `alpha_r` on `[0, inf)`, left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    Flat,
    Ramp,
    MirroredRamp,
    MirroredFlat,
}

fn ramp_start<T: Field>(r: u32, like: &T) -> T {
    let r = r as i64;
    like.ratio(2 * r - 1, 2 * r)
}

/// Evaluates one piece's formula at `x` regardless of which piece `x` falls
/// in, so one-sided limits at the knots can be compared.
pub fn alpha_piece<T: Field>(r: u32, piece: Piece, x: &T) -> Derivs<T> {
    match piece {
        Piece::Flat | Piece::MirroredFlat => Derivs::zero(x),
        Piece::Ramp => ramp(r, x),
        Piece::MirroredRamp => {
            let y = x.int(1) / x.clone();
            let inner = ramp(r, &y);
            // alpha(x) = a(1/x):
            //   alpha'  = -a'(1/x) / x^2
            //   alpha'' = a''(1/x) / x^4 + 2 a'(1/x) / x^3
            let y2 = y.clone() * y.clone();
            let y3 = y2.clone() * y.clone();
            let y4 = y2.clone() * y2.clone();
            Derivs {
                value: inner.value,
                d1: -(inner.d1.clone() * y2),
                d2: inner.d2 * y4 + x.int(2) * inner.d1 * y3,
            }
        }
    }
}

fn ramp<T: Field>(r: u32, x: &T) -> Derivs<T> {
    let r = r as i64;
    if r == 4 {
        return Derivs::zero(x);
    }
    let z = x.int(2 * r) * x.clone() - x.int(2 * r - 1);
    let b = beta_unchecked(&z);
    let c = x.ratio(r - 4, 4);
    let slope = x.int(2 * r);
    Derivs {
        value: b.value,
        d1: b.d1 * slope.clone(),
        d2: b.d2 * slope.clone() * slope,
    }
    .scale(&c)
}

/// The ceiling `kappa_r`: zero below `1 - 1/r`, then `(r-3)/2 * x` up to 1,
/// mirrored through `x -> 1/x` above 1.
pub fn kappa<T: Field>(r: u32, x: &T) -> Result<T> {
    check_order(r)?;
    check_nonneg(x, "kappa")?;
    let one = x.int(1);
    let y = if *x > one { one / x.clone() } else { x.clone() };
    let r = r as i64;
    if y < x.ratio(r - 1, r) {
        Ok(x.zero_like())
    } else {
        Ok(x.ratio(r - 3, 2) * y)
    }
}

/// `phi_r(k, l) = alpha_r(l/k) * ln(k + l)`.
pub fn phi<T: Real>(r: u32, k: &T, l: &T) -> Result<T> {
    if *k <= k.zero_like() || *l <= l.zero_like() {
        return Err(Error::Domain("phi requires k, l > 0".into()));
    }
    let a = alpha(r, &(l.clone() / k.clone()))?;
    Ok(a.value * (k.clone() + l.clone()).ln())
}

/// Knots of `alpha_r` on `[0, 2]`: `1 - 1/(2r)`, `1`, and the mirror image
/// `2r/(2r-1)` of the first.
pub fn alpha_knots(r: u32) -> [f64; 3] {
    let r = r as f64;
    [1.0 - 1.0 / (2.0 * r), 1.0, 2.0 * r / (2.0 * r - 1.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::HpFloat;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn beta_endpoints_and_midpoint() {
        let b0 = beta(&q(0, 1)).unwrap();
        assert_eq!(b0, Derivs { value: q(0, 1), d1: q(0, 1), d2: q(0, 1) });
        let b1 = beta(&q(1, 1)).unwrap();
        assert_eq!(b1, Derivs { value: q(1, 1), d1: q(0, 1), d2: q(0, 1) });
        // 30 z^2 (z-1)^2 at 1/2 = 30/16
        let bh = beta(&q(1, 2)).unwrap();
        assert_eq!(bh, Derivs { value: q(1, 2), d1: q(15, 8), d2: q(0, 1) });
        // 60 z (2z-1)(z-1) at 1/4
        assert_eq!(beta(&q(1, 4)).unwrap().d2, q(45, 8));
    }

    #[test]
    fn beta_rejects_outside_unit_interval() {
        assert!(matches!(beta(&1.5f64), Err(Error::Domain(_))));
        assert!(matches!(beta(&-0.1f64), Err(Error::Domain(_))));
    }

    #[test]
    fn alpha_examples() {
        for x in [0.0, 0.5, 0.99, 1.0, 1.7] {
            let a = alpha(4, &x).unwrap();
            assert_eq!((a.value, a.d1, a.d2), (0.0, 0.0, 0.0));
        }
        let a = alpha(5, &0.3).unwrap();
        assert_eq!((a.value, a.d1, a.d2), (0.0, 0.0, 0.0));
        let a = alpha(5, &q(1, 1)).unwrap();
        assert_eq!(a, Derivs { value: q(1, 4), d1: q(0, 1), d2: q(0, 1) });
        let at2 = alpha(5, &q(2, 1)).unwrap();
        let at_half = alpha(5, &q(1, 2)).unwrap();
        assert_eq!(at2.value, at_half.value);
    }

    #[test]
    fn alpha_inverse_branch_is_symmetric() {
        for r in 5..=9 {
            for i in 0..50 {
                let x = q(1000 + i * 3, 1000);
                let a = alpha(r, &x).unwrap().value;
                let b = alpha(r, &(q(1, 1) / x)).unwrap().value;
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(5, &q(1, 10)).unwrap(), q(0, 1));
        assert_eq!(kappa(5, &q(9, 10)).unwrap(), q(9, 10));
        assert_eq!(kappa(6, &q(1, 1)).unwrap(), q(3, 2));
        assert_eq!(kappa(6, &q(2, 1)).unwrap(), kappa(6, &q(1, 2)).unwrap());
        // the ramp starts exactly at 1 - 1/r
        assert_eq!(kappa(5, &q(4, 5)).unwrap(), q(4, 5));
        assert!(kappa(5, &q(79, 100)).unwrap().is_zero());
    }

    #[test]
    fn phi_examples() {
        let p = 256;
        let k = HpFloat::from_i64(1000, p);
        let l = HpFloat::from_i64(700, p);
        assert!(phi(4, &k, &l).unwrap().is_zero());
        let got = phi(5, &k, &k).unwrap();
        let want = HpFloat::from_i64(2000, p).ln() / HpFloat::from_i64(4, p);
        assert!((got - want).abs() < HpFloat::from_f64(1e-70, p));
        let m = HpFloat::from_i64(997, p);
        let a = phi(7, &k, &m).unwrap();
        let b = phi(7, &m, &k).unwrap();
        assert!((a - b).abs() < HpFloat::from_f64(1e-70, p));
    }

    #[test]
    fn order_and_sign_guards() {
        assert!(alpha(3, &0.5).is_err());
        assert!(alpha(5, &-0.5).is_err());
        assert!(kappa(5, &-1.0).is_err());
        assert!(phi(5, &0.0, &1.0).is_err());
    }
}
