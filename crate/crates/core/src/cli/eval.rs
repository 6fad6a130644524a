use crate::coeff::{CoeffRing, LaurentPoly};
use crate::error::{Error, Result};
use crate::rewrite::{Algebra, Element};

use super::parse::Expr;

/// Evaluates `e` in `alg`; the result is in normal form.
pub fn eval<R: CoeffRing>(alg: &Algebra<R>, e: &Expr) -> Result<Element<R::Elem>> {
    Ok(match e {
        Expr::Int(v) => alg.scalar(alg.ring().from_laurent(&LaurentPoly::constant(v.clone()))),
        Expr::Q => alg.scalar(alg.ring().q_pow(1)),
        Expr::D => alg.det_power(1)?,
        Expr::Gen(g) => alg.generator(*g)?,
        Expr::Neg(a) => alg.neg(&eval(alg, a)?),
        Expr::Add(a, b) => alg.add(&eval(alg, a)?, &eval(alg, b)?),
        Expr::Sub(a, b) => alg.sub(&eval(alg, a)?, &eval(alg, b)?),
        Expr::Mul(a, b) => alg.multiply(&eval(alg, a)?, &eval(alg, b)?)?,
        Expr::Pow(base, k) => match (base.as_ref(), *k) {
            (Expr::Q, k) => alg.scalar(alg.ring().q_pow(k)),
            (Expr::D, k) => alg.det_power(k)?,
            (_, k) if k < 0 => {
                return Err(Error::Unsupported(
                    "negative powers are allowed only on q and D".into(),
                ))
            }
            (b, k) => alg.pow(&eval(alg, b)?, k as u32)?,
        },
    })
}
