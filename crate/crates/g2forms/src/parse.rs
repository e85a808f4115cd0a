//! Text format for forms: `3/2 e^{12} - e^{157} + 2.5e^{345}`.
//!
//! Coefficients are integers, fractions (`3/2`), or decimals with an
//! optional exponent (`2.5e-3`); they parse exactly into rationals before
//! conversion to the requested flavor. Blades are `e^{indices}` with single
//! digit 1-based indices. A bare number is a 0-form, and `0` is accepted in
//! any position without affecting the inferred degree.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::blade::Blade;
use crate::form::{ExteriorError, KForm};
use crate::scalar::{Rat, Scalar};

/// Parses `text` as a form on `ℝ^dim`. The degree is inferred from the first
/// term with a nonzero coefficient; an empty sum parses as the zero 0-form.
pub fn parse_form<S: Scalar>(text: &str, dim: u8) -> Result<KForm<S>, ExteriorError> {
    if dim == 0 || dim > 8 {
        return Err(ExteriorError::BadDimension { dim });
    }
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        dim,
    };
    let terms = parser.terms()?;

    let mut degree: Option<(u8, usize)> = None;
    for (pos, coeff, blade) in &terms {
        if coeff.is_zero() {
            continue;
        }
        let d = blade.map_or(0, |b| b.degree());
        match degree {
            None => degree = Some((d, *pos)),
            Some((expected, _)) if expected != d => {
                return Err(err(
                    *pos,
                    format!("mixed degrees: expected {expected}, found {d}"),
                ));
            }
            _ => {}
        }
    }
    let degree = degree.map_or(0, |(d, _)| d);

    let mut form = KForm::zero(dim, degree);
    for (_, coeff, blade) in terms {
        if coeff.is_zero() {
            continue;
        }
        let blade = blade.unwrap_or(Blade::SCALAR);
        let term = KForm::from_terms(dim, degree, [(blade, S::from_rational(&coeff))])
            .expect("validated during scanning");
        form = form.add(&term).expect("degrees checked above");
    }
    Ok(form)
}

fn err(pos: usize, msg: impl Into<String>) -> ExteriorError {
    ExteriorError::Parse {
        pos,
        msg: msg.into(),
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    dim: u8,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    /// Scans the whole input into `(position, signed coefficient, blade)`
    /// triples; a missing blade marks a scalar term.
    fn terms(&mut self) -> Result<Vec<(usize, Rat, Option<Blade>)>, ExteriorError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let term_pos = self.pos;
            let Some(first) = self.peek() else {
                if out.is_empty() {
                    return Err(err(term_pos, "empty form"));
                }
                return Ok(out);
            };

            let mut negative = false;
            if first == b'+' || first == b'-' {
                negative = first == b'-';
                self.pos += 1;
                self.skip_ws();
            } else if !out.is_empty() {
                return Err(err(term_pos, "expected '+' or '-' between terms"));
            }

            let mut coeff = match self.peek() {
                Some(b) if b.is_ascii_digit() || b == b'.' => {
                    let c = self.number()?;
                    self.skip_ws();
                    if self.peek() == Some(b'*') {
                        self.pos += 1;
                        self.skip_ws();
                    }
                    Some(c)
                }
                _ => None,
            };

            let blade = if self.peek() == Some(b'e') && self.bytes.get(self.pos + 1) == Some(&b'^')
            {
                Some(self.blade()?)
            } else {
                None
            };

            if coeff.is_none() && blade.is_none() {
                return Err(err(self.pos, "expected a coefficient or a blade like e^{12}"));
            }
            let mut c = coeff.take().unwrap_or_else(Rat::one);
            if negative {
                c = -c;
            }
            let blade = blade.map(|(b, sign)| {
                if sign < 0 {
                    c = -c.clone();
                }
                b
            });
            out.push((term_pos, c, blade));
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Rat, ExteriorError> {
        let start = self.pos;
        let int_part = self.digits();

        let mut frac_part = String::new();
        let mut has_dot = false;
        if self.peek() == Some(b'.') {
            has_dot = true;
            self.pos += 1;
            frac_part = self.digits();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err(start, "malformed number"));
        }

        let mantissa: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .expect("digit string");
        let mut value = Rat::new(mantissa, BigInt::from(10u8).pow(frac_part.len() as u32));

        // A '/' introduces an exact fraction; incompatible with a decimal dot.
        if !has_dot && self.peek() == Some(b'/') {
            self.pos += 1;
            let den_pos = self.pos;
            let den = self.digits();
            if den.is_empty() {
                return Err(err(den_pos, "missing denominator"));
            }
            let den: BigInt = den.parse().expect("digit string");
            if den.is_zero() {
                return Err(err(den_pos, "zero denominator"));
            }
            value /= Rat::from_integer(den);
            return Ok(value);
        }

        // Exponent: 'e' or 'E' followed by digits or a signed digit. A bare
        // 'e' starts a blade instead and is left untouched.
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let after = self.bytes.get(self.pos + 1).copied();
            let after2 = self.bytes.get(self.pos + 2).copied();
            let exp_follows = match after {
                Some(b) if b.is_ascii_digit() => true,
                Some(b'+' | b'-') => matches!(after2, Some(b) if b.is_ascii_digit()),
                _ => false,
            };
            if exp_follows {
                self.pos += 1;
                let mut exp_negative = false;
                if let Some(s @ (b'+' | b'-')) = self.peek() {
                    exp_negative = s == b'-';
                    self.pos += 1;
                }
                let exp: u32 = self
                    .digits()
                    .parse()
                    .map_err(|_| err(self.pos, "exponent out of range"))?;
                let pow = Rat::from_integer(BigInt::from(10u8).pow(exp));
                if exp_negative {
                    value /= pow;
                } else {
                    value *= pow;
                }
            }
        }
        Ok(value)
    }

    /// Parses `e^{indices}`, canonicalizing out-of-order indices into the
    /// ascending blade and the sign of the sorting permutation.
    fn blade(&mut self) -> Result<(Blade, i8), ExteriorError> {
        self.pos += 2; // consume "e^"
        if self.peek() != Some(b'{') {
            return Err(err(self.pos, "expected '{' after e^"));
        }
        self.pos += 1;
        let mut indices = Vec::new();
        loop {
            match self.peek() {
                Some(b'}') => {
                    self.pos += 1;
                    break;
                }
                Some(b) if b.is_ascii_digit() => {
                    if b == b'0' {
                        return Err(err(self.pos, "blade index 0 is invalid"));
                    }
                    let i = b - b'0';
                    if i > self.dim {
                        return Err(err(
                            self.pos,
                            format!("index {i} out of range for dimension {}", self.dim),
                        ));
                    }
                    if indices.contains(&i) {
                        return Err(err(self.pos, format!("repeated index {i}")));
                    }
                    indices.push(i);
                    self.pos += 1;
                }
                _ => return Err(err(self.pos, "expected blade index or '}'")),
            }
        }
        if indices.is_empty() {
            return Err(err(self.pos, "empty blade"));
        }
        Ok(Blade::from_unsorted(&indices, self.dim).expect("validated above"))
    }
}
