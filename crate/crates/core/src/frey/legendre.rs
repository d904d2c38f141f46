use crate::error::{Error, Result};
use crate::quad_field::Element;

/// `(e3 - e1) / (e2 - e1)`.
pub fn legendre_lambda(e1: &Element, e2: &Element, e3: &Element) -> Result<Element> {
    if e1 == e2 || e2 == e3 || e1 == e3 {
        return Err(Error::DegenerateRoots);
    }
    (e3 - e1).checked_div(&(e2 - e1))
}

/// `2^8 (λ^2 - λ + 1)^3 / (λ^2 (1 - λ)^2)`.
pub fn j_of_lambda(lambda: &Element) -> Result<Element> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::DegenerateLambda);
    }
    let f = lambda.field();
    let num = &(&(lambda * lambda) - lambda) + &f.one();
    let den = lambda * &lambda.one_minus();
    (&f.int(256) * &num.pow(3)).checked_div(&(&den * &den))
}

/// `2^8 (1 - λμ)^3 / (λμ)^2`; equals [`j_of_lambda`] when `μ = 1 - λ`.
pub fn j_of_lambda_mu(lambda: &Element, mu: &Element) -> Result<Element> {
    let lm = lambda * mu;
    if lm.is_zero() {
        return Err(Error::DegenerateLambda);
    }
    let f = lambda.field();
    (&f.int(256) * &lm.one_minus().pow(3)).checked_div(&(&lm * &lm))
}
