use crate::algebra::{AlgebraicNumber, GroupIndex};
use crate::error::{Error, Result};
use crate::expansion::{Alpha, Params};

/// L_alpha = min{lambda / (lambda + 2), lambda (2 - alpha lambda^2) / (4 - lambda^2)}, even q only.
pub fn lenstra_constant(q: GroupIndex, alpha: &Alpha) -> Result<AlgebraicNumber> {
    if !q.is_even() {
        return Err(Error::Unsupported(format!("no closed-form Lenstra constant for odd q = {}", q.q())));
    }
    let p = Params::exact(q, alpha)?;
    let f = p.lambda.field().clone();
    let n = |k: i64| AlgebraicNumber::from_int(&f, k);
    let l2 = &p.lambda * &p.lambda;
    let first = &p.lambda / (&p.lambda + n(2));
    let second = &p.lambda * (n(2) - &p.alpha * &l2) / (n(4) - l2);
    Ok(first.min(second))
}
