//! Text formats for matrices, module presentations, operators and vector
//! lists.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.
//!
//! ```text
//! matrix 3 3 over Q          module over Fp 7        operator banded 1 over Q
//! 0 1 0                      free 1                  e0 -> 0
//! 0 0 0                      x^3                     e1 -> e0 + 1/2*e1
//! 0 0 2                      x^2 + 3                 e2 -> e1
//! ```
//!
//! Built-in operators are declared as `operator <name> [param] [over F]`
//! with `name` one of `left_shift`, `homothecy_hx` (optional parameter:
//! largest summand `N`), `poly_derivative`, `even_odd`. The field defaults
//! to `Q`.

use std::collections::BTreeMap;

use crate::error::{AlgebraError, Result};
use crate::kxmodule::ModulePresentation;
use crate::matrix::Matrix;
use crate::operator::{BasisIndex, BasisOperator, OperatorKind, SparseVector};
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        AlgebraError::Parse { .. } => e,
        other => AlgebraError::parse(line, other.to_string()),
    })
}

/// Reconciles a header field with an optional command-line override.
pub fn resolve_field(header: Field, override_field: Option<Field>, line: usize) -> Result<Field> {
    match override_field {
        Some(f) if f != header => Err(AlgebraError::parse(
            line,
            format!(
                "field override {} conflicts with header {}",
                f.header(),
                header.header()
            ),
        )),
        _ => Ok(header),
    }
}

fn parse_over(tokens: &[&str], line: usize) -> Result<Field> {
    at_line(line, Field::parse_tokens(tokens))
}

pub fn parse_matrix(text: &str, override_field: Option<Field>) -> Result<Matrix> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| AlgebraError::parse(1, "empty matrix file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (rows, cols, field) = match tokens.as_slice() {
        ["matrix", r, c, "over", rest @ ..] => {
            let r: usize = r
                .parse()
                .map_err(|_| AlgebraError::parse(hline, format!("bad row count `{r}`")))?;
            let c: usize = c
                .parse()
                .map_err(|_| AlgebraError::parse(hline, format!("bad column count `{c}`")))?;
            (r, c, parse_over(rest, hline)?)
        }
        _ => {
            return Err(AlgebraError::parse(
                hline,
                "expected `matrix <rows> <cols> over <Q|Fp p>`",
            ))
        }
    };
    let field = resolve_field(field, override_field, hline)?;
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line, text) in lines {
        seen += 1;
        if seen > rows {
            return Err(AlgebraError::parse(line, format!("more than {rows} rows")));
        }
        let entries: Vec<&str> = text.split_whitespace().collect();
        if entries.len() != cols {
            return Err(AlgebraError::parse(
                line,
                format!("expected {cols} entries, found {}", entries.len()),
            ));
        }
        for e in entries {
            data.push(at_line(line, Scalar::parse(e, field))?);
        }
    }
    if seen != rows {
        return Err(AlgebraError::parse(
            hline,
            format!("expected {rows} rows, found {seen}"),
        ));
    }
    Matrix::new(field, rows, cols, data)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!(
        "matrix {} {} over {}\n",
        m.rows(),
        m.cols(),
        m.field().header()
    );
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(Scalar::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_module(text: &str, override_field: Option<Field>) -> Result<ModulePresentation> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| AlgebraError::parse(1, "empty module file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let field = match tokens.as_slice() {
        ["module", "over", rest @ ..] => parse_over(rest, hline)?,
        _ => {
            return Err(AlgebraError::parse(
                hline,
                "expected `module over <Q|Fp p>`",
            ))
        }
    };
    let field = resolve_field(field, override_field, hline)?;
    let (fline, free) = lines
        .next()
        .ok_or_else(|| AlgebraError::parse(hline + 1, "missing `free <r>` line"))?;
    let free_rank = match free.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["free", r] => r
            .parse()
            .map_err(|_| AlgebraError::parse(fline, format!("bad free rank `{r}`")))?,
        _ => return Err(AlgebraError::parse(fline, "expected `free <r>`")),
    };
    let mut torsion = Vec::new();
    for (line, text) in lines {
        let f = at_line(line, Poly::parse(text, field))?;
        if !f.is_monic() || f.degree() == Some(0) {
            return Err(AlgebraError::parse(
                line,
                format!("torsion factor `{f}` must be monic of positive degree"),
            ));
        }
        torsion.push(f);
    }
    ModulePresentation::new(field, free_rank, torsion)
}

pub fn write_module(m: &ModulePresentation) -> String {
    let mut out = format!(
        "module over {}\nfree {}\n",
        m.field().header(),
        m.free_rank()
    );
    for f in m.torsion() {
        out.push_str(&f.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_operator(text: &str, override_field: Option<Field>) -> Result<BasisOperator> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| AlgebraError::parse(1, "empty operator file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (head, field_tokens) = match tokens.iter().position(|t| *t == "over") {
        Some(i) => (&tokens[..i], &tokens[i + 1..]),
        None => (&tokens[..], &[][..]),
    };
    let field = if field_tokens.is_empty() {
        override_field.unwrap_or(Field::Rational)
    } else {
        resolve_field(parse_over(field_tokens, hline)?, override_field, hline)?
    };
    let bad_param = |p: &str| AlgebraError::parse(hline, format!("bad parameter `{p}`"));
    let op = match head {
        ["operator", "left_shift"] => BasisOperator::left_shift(field),
        ["operator", "poly_derivative"] => BasisOperator::poly_derivative(field),
        ["operator", "even_odd"] => BasisOperator::even_odd(field),
        ["operator", "homothecy_hx"] => BasisOperator::homothecy_hx(field),
        ["operator", "homothecy_hx", n] => {
            let n = n.parse().map_err(|_| bad_param(n))?;
            at_line(hline, BasisOperator::homothecy_hx_truncated(field, n))?
        }
        ["operator", "banded", b] => {
            let band = b.parse().map_err(|_| bad_param(b))?;
            let mut rules = BTreeMap::new();
            for (line, text) in lines.by_ref() {
                let (lhs, rhs) = text
                    .split_once("->")
                    .ok_or_else(|| AlgebraError::parse(line, "expected `e<i> -> <vector>`"))?;
                let BasisIndex::Linear(src) = at_line(line, BasisIndex::parse(lhs))? else {
                    return Err(AlgebraError::parse(line, "banded rules use labels `e<i>`"));
                };
                let img = at_line(line, SparseVector::parse(rhs, field))?;
                if rules.insert(src, img).is_some() {
                    return Err(AlgebraError::parse(
                        line,
                        format!("duplicate rule for e{src}"),
                    ));
                }
            }
            at_line(hline, BasisOperator::banded(field, band, rules))?
        }
        _ => {
            return Err(AlgebraError::parse(
                hline,
                format!("unknown operator declaration `{header}`"),
            ))
        }
    };
    if let Some((line, _)) = lines.next() {
        return Err(AlgebraError::parse(
            line,
            "unexpected rule line for a built-in operator",
        ));
    }
    Ok(op)
}

pub fn write_operator(op: &BasisOperator) -> String {
    let over = format!("over {}", op.field().header());
    match op.kind() {
        OperatorKind::HomothecyHx {
            max_summand: Some(n),
        } => format!("operator homothecy_hx {n} {over}\n"),
        OperatorKind::Banded { band, rules } => {
            let mut out = format!("operator banded {band} {over}\n");
            for (src, img) in rules {
                out.push_str(&format!("e{src} -> {img}\n"));
            }
            out
        }
        _ => format!("operator {} {over}\n", op.name()),
    }
}

/// One vector literal per line. A line that is a polynomial in `x` is read
/// with `x^k` standing for `e<k>`.
pub fn parse_vectors(text: &str, field: Field) -> Result<Vec<SparseVector>> {
    content_lines(text)
        .map(|(line, t)| {
            let labelled = SparseVector::parse(t, field);
            if labelled.is_err() && t.contains('x') && !t.contains('e') {
                if let Ok(p) = Poly::parse(t, field) {
                    return Ok(SparseVector::from_poly(&p));
                }
            }
            at_line(line, labelled)
        })
        .collect()
}

pub fn write_vectors(vs: &[SparseVector]) -> String {
    vs.iter().map(|v| format!("{v}\n")).collect()
}
