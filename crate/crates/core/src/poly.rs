//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use crate::error::{AlgebraError, Result};
use crate::scalar::{Field, Scalar};

/// An element of `k[x]`, coefficients lowest degree first.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient
/// is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::monomial(c, 0)
    }

    /// `c * x^degree`.
    pub fn monomial(c: Scalar, degree: usize) -> Poly {
        let field = c.field();
        if c.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![field.zero(); degree];
        coeffs.push(c);
        Poly { field, coeffs }
    }

    /// `x^degree`.
    pub fn x_pow(field: Field, degree: usize) -> Poly {
        Poly::monomial(field.one(), degree)
    }

    pub fn from_coeffs(field: Field, coeffs: Vec<Scalar>) -> Result<Poly> {
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(AlgebraError::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        let mut p = Poly { field, coeffs };
        p.trim();
        Ok(p)
    }

    /// Convenience constructor from small integers, lowest degree first.
    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Poly {
        let mut p = Poly {
            field,
            coeffs: coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other).expect("poly field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        let mut p = Poly {
            field: self.field,
            coeffs,
        };
        p.trim();
        p
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut p = Poly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_field(other).expect("poly field mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut p = Poly {
            field: self.field,
            coeffs,
        };
        p.trim();
        p
    }

    pub fn pow(&self, exp: usize) -> Poly {
        (0..exp).fold(Poly::one(self.field), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        let d_deg = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(d_deg)];
        while let Some(r_deg) = rem.degree() {
            if r_deg < d_deg {
                break;
            }
            let c = rem.leading().unwrap() * &lead_inv;
            let shift = r_deg - d_deg;
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem.coeffs[i + shift] = &rem.coeffs[i + shift] - &(&c * b);
            }
            quot[shift] = c;
            rem.trim();
        }
        Ok((Poly::from_coeffs(self.field, quot)?, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Whether `self` divides `other`. Zero divides only zero.
    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scaled to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * at) + c)
    }

    /// Extended gcd: monic `d = gcd(f, g)` with `u*f + v*g = d`.
    pub fn xgcd(f: &Poly, g: &Poly) -> Result<(Poly, Poly, Poly)> {
        f.check_field(g)?;
        if f.is_zero() && g.is_zero() {
            return Err(AlgebraError::InvalidInput(
                "gcd of two zero polynomials".into(),
            ));
        }
        let field = f.field;
        let (mut r0, mut r1) = (f.clone(), g.clone());
        let (mut s0, mut s1) = (Poly::one(field), Poly::zero(field));
        let (mut t0, mut t1) = (Poly::zero(field), Poly::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let lc_inv = r0.leading().unwrap().inv()?;
        Ok((r0.scale(&lc_inv), s0.scale(&lc_inv), t0.scale(&lc_inv)))
    }

    /// Splits `f = x^a * g` with `g(0) != 0`.
    pub fn x_adic_valuation(&self) -> Result<(usize, Poly)> {
        let a = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| AlgebraError::InvalidInput("x-adic valuation of zero".into()))?;
        Ok((
            a,
            Poly {
                field: self.field,
                coeffs: self.coeffs[a..].to_vec(),
            },
        ))
    }

    /// Parses `c0 + c1*x + c2*x^2 ...` (any term order, repeated powers are
    /// summed). Coefficients are scalar literals `a` or `a/b`; `x`, `-x^3`,
    /// `2x` and `1/2*x^4` are all accepted.
    pub fn parse(text: &str, field: Field) -> Result<Poly> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| AlgebraError::InvalidInput(format!("bad polynomial `{text}`: {why}"));
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && !matches!(bytes[i - 1], b'^' | b'*' | b'/' | b'+' | b'-')
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut acc = Poly::zero(field);
        for term in terms {
            let (negative, body) = match term.as_bytes().first() {
                Some(b'+') => (false, &term[1..]),
                Some(b'-') => (true, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (coef_text, degree) = match body.find('x') {
                None => (body, 0),
                Some(pos) => {
                    let coef = body[..pos].strip_suffix('*').unwrap_or(&body[..pos]);
                    let rest = &body[pos + 1..];
                    let degree = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| bad("bad exponent"))?
                    };
                    (coef, degree)
                }
            };
            let coef = if coef_text.is_empty() {
                field.one()
            } else {
                Scalar::parse(coef_text, field)?
            };
            let coef = if negative { -coef } else { coef };
            acc = acc.add(&Poly::monomial(coef, degree));
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    /// Canonical rendering, lowest degree first: `-1 + x - 1/2*x^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative_literal();
            let magnitude = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}*")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(Q, c)
    }

    #[test]
    fn xgcd_coprime_example() {
        // x^2 - (x - 1)(x + 1) = 1
        let (d, u, v) = Poly::xgcd(&p(&[0, 0, 1]), &p(&[1, 1])).unwrap();
        assert_eq!(d, p(&[1]));
        assert_eq!(u, p(&[1]));
        assert_eq!(v, p(&[1, -1]));
    }

    #[test]
    fn xgcd_with_zero() {
        let f = p(&[2, 0, 4]);
        let (d, u, v) = Poly::xgcd(&f, &Poly::zero(Q)).unwrap();
        assert_eq!(d, Poly::parse("1/2 + x^2", Q).unwrap());
        assert_eq!(u, Poly::parse("1/4", Q).unwrap());
        assert!(v.is_zero());
        assert!(Poly::xgcd(&Poly::zero(Q), &Poly::zero(Q)).is_err());
    }

    #[test]
    fn xgcd_divisible_case() {
        let (d, u, v) = Poly::xgcd(&p(&[0, 0, 0, 1]), &p(&[0, 1])).unwrap();
        assert_eq!((d, u, v), (p(&[0, 1]), Poly::zero(Q), p(&[1])));
    }

    #[test]
    fn x_adic_examples() {
        assert_eq!(
            p(&[0, 0, 0, 1, 0, 2]).x_adic_valuation().unwrap(),
            (3, p(&[1, 0, 2]))
        );
        assert_eq!(p(&[1, 1]).x_adic_valuation().unwrap(), (0, p(&[1, 1])));
        assert_eq!(
            p(&[0, 0, 0, 0, 1]).x_adic_valuation().unwrap(),
            (4, p(&[1]))
        );
        assert!(Poly::zero(Q).x_adic_valuation().is_err());
    }

    #[test]
    fn division() {
        let (q, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_zero());
        assert!(p(&[1]).div_rem(&Poly::zero(Q)).is_err());
    }

    #[test]
    fn parse_and_render() {
        let f = Poly::parse("1 - x + -1/2*x^3 + 2x", Q).unwrap();
        assert_eq!(f.to_string(), "1 + x - 1/2*x^3");
        assert_eq!(Poly::parse(&f.to_string(), Q).unwrap(), f);
        assert_eq!(Poly::parse("x^2 - x^2", Q).unwrap().to_string(), "0");
        assert!(Poly::parse("x^", Q).is_err());
        assert!(Poly::parse("", Q).is_err());
        let f7 = Field::prime(7).unwrap();
        assert_eq!(Poly::parse("-x", f7).unwrap().to_string(), "6*x");
    }
}
