//! Rule-based endomorphisms of spaces with a countable basis.
//!
//! An operator is given by the image of each basis vector, always a finite
//! combination. Vectors are finitely supported, so every query below is
//! a per-vector computation. Questions that quantify over all powers
//! (nilpotency, surjectivity of the localization map) are answered by
//! bounded search: an absent answer means "nothing found within the
//! budget", never a proof of the negative, unless the operator carries a
//! registered kernel predicate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

/// Largest number of basis vectors a truncated preimage solve may use.
pub const MAX_WINDOW: usize = 4096;

/// A basis label: `e<i>` or, for graded bases, `e(n,j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    Linear(u64),
    Graded(u64, u64),
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Linear(i) => write!(f, "e{i}"),
            BasisIndex::Graded(n, j) => write!(f, "e({n},{j})"),
        }
    }
}

impl BasisIndex {
    pub fn parse(text: &str) -> Result<BasisIndex> {
        let bad = || AlgebraError::InvalidInput(format!("bad basis label `{text}`"));
        let body = text.trim().strip_prefix('e').ok_or_else(bad)?;
        if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            let (n, j) = inner.split_once(',').ok_or_else(bad)?;
            let n = n.trim().parse().map_err(|_| bad())?;
            let j = j.trim().parse().map_err(|_| bad())?;
            Ok(BasisIndex::Graded(n, j))
        } else {
            Ok(BasisIndex::Linear(body.parse().map_err(|_| bad())?))
        }
    }
}

/// Finitely supported vector; only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVector {
    field: Field,
    coeffs: BTreeMap<BasisIndex, Scalar>,
}

impl SparseVector {
    pub fn zero(field: Field) -> SparseVector {
        SparseVector {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(field: Field, index: BasisIndex) -> SparseVector {
        SparseVector::zero(field).with_term(index, field.one())
    }

    /// Sum of `c * e_index` over the given terms.
    pub fn from_terms(
        field: Field,
        terms: impl IntoIterator<Item = (BasisIndex, Scalar)>,
    ) -> Result<SparseVector> {
        let mut v = SparseVector::zero(field);
        for (idx, c) in terms {
            if c.field() != field {
                return Err(AlgebraError::FieldMismatch {
                    left: field,
                    right: c.field(),
                });
            }
            v.add_term(idx, &c);
        }
        Ok(v)
    }

    /// A polynomial read in the monomial basis `e<i> = x^i`.
    pub fn from_poly(p: &Poly) -> SparseVector {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (BasisIndex::Linear(i as u64), c.clone()));
        SparseVector::from_terms(p.field(), terms).expect("single field")
    }

    /// Inverse of [`SparseVector::from_poly`]; `None` if a graded label occurs.
    pub fn to_poly(&self) -> Option<Poly> {
        let mut coeffs = Vec::new();
        for (idx, c) in &self.coeffs {
            let BasisIndex::Linear(i) = idx else {
                return None;
            };
            let i = *i as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, self.field.zero());
            }
            coeffs[i] = c.clone();
        }
        Poly::from_coeffs(self.field, coeffs).ok()
    }

    fn with_term(mut self, idx: BasisIndex, c: Scalar) -> SparseVector {
        self.add_term(idx, &c);
        self
    }

    fn add_term(&mut self, idx: BasisIndex, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&idx) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, sum);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: &BasisIndex) -> Scalar {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisIndex> {
        self.coeffs.keys()
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(*idx, c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SparseVector {
        if c.is_zero() {
            return SparseVector::zero(self.field);
        }
        SparseVector {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(i, a)| (*i, a * c)).collect(),
        }
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        self.add(&other.scale(&-self.field.one()))
    }

    /// Parses `c1*e<i1> + c2*e<i2> - e(n,j) ...`; `0` is the zero vector.
    pub fn parse(text: &str, field: Field) -> Result<SparseVector> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| AlgebraError::InvalidInput(format!("bad vector `{text}`: {why}"));
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        if compact == "0" {
            return Ok(SparseVector::zero(field));
        }
        let bytes = compact.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && !matches!(bytes[i - 1], b'*' | b'/' | b'+' | b'-')
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut v = SparseVector::zero(field);
        for term in terms {
            let (negative, body) = match term.as_bytes().first() {
                Some(b'+') => (false, &term[1..]),
                Some(b'-') => (true, &term[1..]),
                _ => (false, term),
            };
            let pos = body
                .find('e')
                .ok_or_else(|| bad("term without basis label"))?;
            let coef_text = body[..pos].strip_suffix('*').unwrap_or(&body[..pos]);
            let coef = if coef_text.is_empty() {
                field.one()
            } else {
                Scalar::parse(coef_text, field)?
            };
            let coef = if negative { -coef } else { coef };
            v.add_term(BasisIndex::parse(&body[pos..])?, &coef);
        }
        Ok(v)
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            let negative = c.is_negative_literal();
            let magnitude = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if magnitude.is_one() {
                write!(f, "{idx}")?;
            } else {
                write!(f, "{magnitude}*{idx}")?;
            }
        }
        Ok(())
    }
}

/// A linear map given by the images of basis vectors.
pub trait LinearRule: Send + Sync {
    fn field(&self) -> Field;

    fn image(&self, idx: BasisIndex) -> Result<SparseVector>;

    /// Linear extension of [`LinearRule::image`].
    fn apply(&self, v: &SparseVector) -> Result<SparseVector> {
        if v.field() != self.field() {
            return Err(AlgebraError::FieldMismatch {
                left: self.field(),
                right: v.field(),
            });
        }
        let mut out = SparseVector::zero(self.field());
        for (idx, c) in v.terms() {
            let img = self.image(*idx)?;
            for (j, d) in img.terms() {
                out.add_term(*j, &(c * d));
            }
        }
        Ok(out)
    }
}

type RuleFn = dyn Fn(BasisIndex) -> Result<SparseVector> + Send + Sync;

/// A [`LinearRule`] backed by a closure.
#[derive(Clone)]
pub struct FnRule {
    field: Field,
    rule: Arc<RuleFn>,
}

impl FnRule {
    pub fn new(
        field: Field,
        rule: impl Fn(BasisIndex) -> Result<SparseVector> + Send + Sync + 'static,
    ) -> FnRule {
        FnRule {
            field,
            rule: Arc::new(rule),
        }
    }

    /// The zero map.
    pub fn zero(field: Field) -> FnRule {
        FnRule::new(field, move |_| Ok(SparseVector::zero(field)))
    }

    /// Pointwise sum of two rules.
    pub fn sum(a: FnRule, b: FnRule) -> FnRule {
        let field = a.field;
        FnRule::new(field, move |idx| Ok(a.image(idx)?.add(&b.image(idx)?)))
    }
}

impl fmt::Debug for FnRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnRule({})", self.field)
    }
}

impl LinearRule for FnRule {
    fn field(&self) -> Field {
        self.field
    }

    fn image(&self, idx: BasisIndex) -> Result<SparseVector> {
        (self.rule)(idx)
    }
}

/// The built-in operators and user-defined banded rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `e1 ↦ 0`, `e_i ↦ e_{i-1}` on the basis `e1, e2, ...`.
    LeftShift,
    /// Multiplication by `x` on `⨁_{n≥1} k[x]/x^n`, basis `e(n,j) = x^j` in
    /// the `n`-th summand; optionally restricted to summands `n ≤ N`.
    HomothecyHx { max_summand: Option<u64> },
    /// `p ↦ p'` on `k[x]`, basis `e<i> = x^i`.
    PolyDerivative,
    /// `Σ a_i x^i ↦ Σ (a_{2i+2} x^{2i} + (2i+2) a_{2i+1} x^{2i+1})` on `k[x]`.
    EvenOdd,
    /// Explicit images on a finite declared index set, with
    /// `|image index - source index| ≤ band`.
    Banded {
        band: u64,
        rules: BTreeMap<u64, SparseVector>,
    },
}

/// An endomorphism of a countable-basis space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisOperator {
    name: String,
    field: Field,
    kind: OperatorKind,
}

/// Result of a bounded search for `φ^{m+s}(w) = φ^m(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurjectivityOutcome {
    Witness {
        m: usize,
        preimage: SparseVector,
    },
    /// Every `m ≤ budget` was tried inside its truncation window.
    NoWitness {
        budget: usize,
    },
    /// The truncation window outgrew [`MAX_WINDOW`] before a witness was found.
    BudgetExhausted {
        m: usize,
        window: usize,
    },
}

impl BasisOperator {
    fn builtin(name: &str, field: Field, kind: OperatorKind) -> BasisOperator {
        BasisOperator {
            name: name.to_string(),
            field,
            kind,
        }
    }

    pub fn left_shift(field: Field) -> BasisOperator {
        Self::builtin("left_shift", field, OperatorKind::LeftShift)
    }

    pub fn homothecy_hx(field: Field) -> BasisOperator {
        Self::builtin(
            "homothecy_hx",
            field,
            OperatorKind::HomothecyHx { max_summand: None },
        )
    }

    /// `h_x` restricted to `⨁_{n=1}^{N} k[x]/x^n`.
    pub fn homothecy_hx_truncated(field: Field, max_summand: u64) -> Result<BasisOperator> {
        if max_summand == 0 {
            return Err(AlgebraError::InvalidInput(
                "truncation needs at least one summand".into(),
            ));
        }
        Ok(Self::builtin(
            "homothecy_hx",
            field,
            OperatorKind::HomothecyHx {
                max_summand: Some(max_summand),
            },
        ))
    }

    pub fn poly_derivative(field: Field) -> BasisOperator {
        Self::builtin("poly_derivative", field, OperatorKind::PolyDerivative)
    }

    pub fn even_odd(field: Field) -> BasisOperator {
        Self::builtin("even_odd", field, OperatorKind::EvenOdd)
    }

    /// User-defined operator on the declared indices `rules.keys()`.
    pub fn banded(
        field: Field,
        band: u64,
        rules: BTreeMap<u64, SparseVector>,
    ) -> Result<BasisOperator> {
        for (src, img) in &rules {
            if img.field() != field {
                return Err(AlgebraError::FieldMismatch {
                    left: field,
                    right: img.field(),
                });
            }
            for idx in img.support() {
                let BasisIndex::Linear(dst) = idx else {
                    return Err(AlgebraError::InvalidInput(format!(
                        "banded operators use linear labels, found {idx}"
                    )));
                };
                if !rules.contains_key(dst) {
                    return Err(AlgebraError::InvalidInput(format!(
                        "image of e{src} mentions undeclared {idx}"
                    )));
                }
                if src.abs_diff(*dst) > band {
                    return Err(AlgebraError::InvalidInput(format!(
                        "image of e{src} mentions {idx}, outside band {band}"
                    )));
                }
            }
        }
        Ok(Self::builtin(
            "banded",
            field,
            OperatorKind::Banded { band, rules },
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// Images never carry a larger label than their source.
    pub fn is_degree_lowering(&self) -> bool {
        match &self.kind {
            OperatorKind::LeftShift | OperatorKind::PolyDerivative | OperatorKind::EvenOdd => true,
            OperatorKind::HomothecyHx { .. } => false,
            OperatorKind::Banded { rules, .. } => rules.iter().all(|(src, img)| {
                img.support()
                    .all(|idx| matches!(idx, BasisIndex::Linear(d) if d <= src))
            }),
        }
    }

    /// Whether `idx` is a label of this operator's basis.
    pub fn contains(&self, idx: &BasisIndex) -> bool {
        match (&self.kind, idx) {
            (OperatorKind::LeftShift, BasisIndex::Linear(i)) => *i >= 1,
            (OperatorKind::PolyDerivative | OperatorKind::EvenOdd, BasisIndex::Linear(_)) => true,
            (OperatorKind::HomothecyHx { max_summand }, BasisIndex::Graded(n, j)) => {
                *n >= 1 && j < n && max_summand.is_none_or(|max| *n <= max)
            }
            (OperatorKind::Banded { rules, .. }, BasisIndex::Linear(i)) => rules.contains_key(i),
            _ => false,
        }
    }

    fn check_vector(&self, v: &SparseVector) -> Result<()> {
        if v.field() != self.field {
            return Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: v.field(),
            });
        }
        match v.support().find(|idx| !self.contains(idx)) {
            Some(idx) => Err(AlgebraError::IndexOutOfDomain(idx.to_string())),
            None => Ok(()),
        }
    }

    pub fn apply_power(&self, v: &SparseVector, n: usize) -> Result<SparseVector> {
        self.check_vector(v)?;
        let mut out = v.clone();
        for _ in 0..n {
            if out.is_zero() {
                break;
            }
            out = self.apply(&out)?;
        }
        Ok(out)
    }

    /// Smallest `n ≤ budget` with `φ^n(v) = 0`.
    pub fn pointwise_nilpotency_witness(
        &self,
        v: &SparseVector,
        budget: usize,
    ) -> Result<Option<usize>> {
        self.check_vector(v)?;
        let mut cur = v.clone();
        for n in 0..=budget {
            if cur.is_zero() {
                return Ok(Some(n));
            }
            if n < budget {
                cur = self.apply(&cur)?;
            }
        }
        Ok(None)
    }

    /// Certified answer to "is `v` killed by some power of `φ`", when the
    /// operator's kernel is known in closed form.
    pub fn kernel_predicate(&self, v: &SparseVector) -> Option<bool> {
        match &self.kind {
            OperatorKind::LeftShift
            | OperatorKind::HomothecyHx { .. }
            | OperatorKind::PolyDerivative => Some(true),
            // Even monomials walk down to zero; φ scales x^k (k odd) by k + 1.
            OperatorKind::EvenOdd => Some(v.support().all(|idx| match idx {
                BasisIndex::Linear(k) if k % 2 == 1 => self.field.from_i64(*k as i64 + 1).is_zero(),
                _ => true,
            })),
            OperatorKind::Banded { .. } => None,
        }
    }

    /// Membership in `⋃ Ker(φ^n)`: a witness within `budget`, else the
    /// registered kernel predicate, else unknown.
    pub fn kernel_membership(&self, v: &SparseVector, budget: usize) -> Result<Option<bool>> {
        if self.pointwise_nilpotency_witness(v, budget)?.is_some() {
            return Ok(Some(true));
        }
        Ok(self.kernel_predicate(v))
    }

    /// The closed-form pointwise Drazin inverse, where one is registered.
    pub fn pointwise_drazin_rule(&self) -> Result<FnRule> {
        match (&self.kind, self.field) {
            (OperatorKind::EvenOdd, Field::Rational) => {
                let field = self.field;
                Ok(FnRule::new(field, move |idx| match idx {
                    BasisIndex::Linear(k) if k % 2 == 1 => {
                        let c = field.from_i64(k as i64 + 1).inv()?;
                        Ok(SparseVector::basis(field, idx).scale(&c))
                    }
                    BasisIndex::Linear(_) => Ok(SparseVector::zero(field)),
                    other => Err(AlgebraError::IndexOutOfDomain(other.to_string())),
                }))
            }
            (OperatorKind::EvenOdd, _) => Err(AlgebraError::Unsupported(
                "even_odd Drazin rule divides by 2i+2 and needs characteristic 0".into(),
            )),
            _ => Err(AlgebraError::Unsupported(format!(
                "{} has no registered pointwise Drazin rule",
                self.name
            ))),
        }
    }

    pub fn pointwise_drazin_apply(&self, v: &SparseVector) -> Result<SparseVector> {
        self.check_vector(v)?;
        self.pointwise_drazin_rule()?.apply(v)
    }

    /// Basis labels from which `steps` applications of `φ` can reach `target`.
    pub fn preimage_window(&self, target: &BTreeSet<BasisIndex>, steps: usize) -> Vec<BasisIndex> {
        let linear = |band: u64, lowest: u64| -> Vec<BasisIndex> {
            let lo = target.iter().filter_map(|i| match i {
                BasisIndex::Linear(k) => Some(*k),
                _ => None,
            });
            let (Some(min), Some(max)) = (lo.clone().min(), lo.max()) else {
                return Vec::new();
            };
            let reach = band.saturating_mul(steps as u64);
            let start = min.saturating_sub(reach).max(lowest);
            let end = max.saturating_add(reach);
            // Saturate rather than allocate absurd windows.
            let end = end.min(start.saturating_add(MAX_WINDOW as u64));
            (start..=end).map(BasisIndex::Linear).collect()
        };
        match &self.kind {
            OperatorKind::LeftShift => linear(1, 1),
            OperatorKind::PolyDerivative => linear(1, 0),
            OperatorKind::EvenOdd => linear(2, 0),
            OperatorKind::Banded { band, rules } => linear(*band, 0)
                .into_iter()
                .filter(|idx| matches!(idx, BasisIndex::Linear(i) if rules.contains_key(i)))
                .collect(),
            OperatorKind::HomothecyHx { .. } => {
                let summands: BTreeSet<u64> = target
                    .iter()
                    .filter_map(|i| match i {
                        BasisIndex::Graded(n, _) => Some(*n),
                        _ => None,
                    })
                    .collect();
                summands
                    .into_iter()
                    .flat_map(|n| (0..n).map(move |j| BasisIndex::Graded(n, j)))
                    .collect()
            }
        }
    }

    /// Searches for the smallest `m ≤ budget` and a `w` in the truncation
    /// window with `φ^{m+s}(w) = φ^m(v)`.
    pub fn surjectivity_witness_s(
        &self,
        v: &SparseVector,
        s: usize,
        budget: usize,
    ) -> Result<SurjectivityOutcome> {
        self.check_vector(v)?;
        let mut target = v.clone();
        for m in 0..=budget {
            if target.is_zero() {
                return Ok(SurjectivityOutcome::Witness {
                    m,
                    preimage: SparseVector::zero(self.field),
                });
            }
            let support: BTreeSet<BasisIndex> = target.support().copied().collect();
            let window = self.preimage_window(&support, m + s);
            if window.len() > MAX_WINDOW {
                return Ok(SurjectivityOutcome::BudgetExhausted {
                    m,
                    window: window.len(),
                });
            }
            if let Some(w) = self.solve_preimage(&target, &window, m + s)? {
                return Ok(SurjectivityOutcome::Witness { m, preimage: w });
            }
            if m < budget {
                target = self.apply(&target)?;
            }
        }
        Ok(SurjectivityOutcome::NoWitness { budget })
    }

    /// The `s = 1` instance of [`BasisOperator::surjectivity_witness_s`].
    pub fn surjectivity_witness(
        &self,
        v: &SparseVector,
        budget: usize,
    ) -> Result<SurjectivityOutcome> {
        self.surjectivity_witness_s(v, 1, budget)
    }

    /// Witnesses for `s = 1, ..., s_max`, each searched independently.
    pub fn surjectivity_chain(
        &self,
        v: &SparseVector,
        s_max: usize,
        budget: usize,
    ) -> Result<Vec<SurjectivityOutcome>> {
        (1..=s_max)
            .map(|s| self.surjectivity_witness_s(v, s, budget))
            .collect()
    }

    /// Exact solve of `φ^steps(w) = target` with `w` spanned by `window`.
    fn solve_preimage(
        &self,
        target: &SparseVector,
        window: &[BasisIndex],
        steps: usize,
    ) -> Result<Option<SparseVector>> {
        let images = window
            .iter()
            .map(|idx| self.apply_power(&SparseVector::basis(self.field, *idx), steps))
            .collect::<Result<Vec<_>>>()?;
        let mut rows: BTreeSet<BasisIndex> = target.support().copied().collect();
        for img in &images {
            rows.extend(img.support().copied());
        }
        let rows: Vec<BasisIndex> = rows.into_iter().collect();
        let columns: Vec<Vec<Scalar>> = images
            .iter()
            .map(|img| rows.iter().map(|r| img.coeff(r)).collect())
            .collect();
        let rhs: Vec<Scalar> = rows.iter().map(|r| target.coeff(r)).collect();
        let system = Matrix::from_columns(self.field, rows.len(), &columns)?;
        Ok(system.solve(&rhs)?.map(|x| {
            SparseVector::from_terms(self.field, window.iter().copied().zip(x))
                .expect("solution lives in the operator field")
        }))
    }

    /// All basis labels, when the space is finite-dimensional.
    pub fn finite_basis(&self) -> Option<Vec<BasisIndex>> {
        match &self.kind {
            OperatorKind::HomothecyHx {
                max_summand: Some(max),
            } => Some(
                (1..=*max)
                    .flat_map(|n| (0..n).map(move |j| BasisIndex::Graded(n, j)))
                    .collect(),
            ),
            OperatorKind::Banded { rules, .. } => {
                Some(rules.keys().map(|i| BasisIndex::Linear(*i)).collect())
            }
            _ => None,
        }
    }

    /// Smallest `n` killing every vector of `spanning`, if found within `budget`.
    pub fn nilpotency_index_on(
        &self,
        spanning: &[SparseVector],
        budget: usize,
    ) -> Result<Option<usize>> {
        let mut worst = 0;
        for v in spanning {
            match self.pointwise_nilpotency_witness(v, budget)? {
                Some(n) => worst = worst.max(n),
                None => return Ok(None),
            }
        }
        Ok(Some(worst))
    }
}

impl LinearRule for BasisOperator {
    fn field(&self) -> Field {
        self.field
    }

    fn image(&self, idx: BasisIndex) -> Result<SparseVector> {
        if !self.contains(&idx) {
            return Err(AlgebraError::IndexOutOfDomain(idx.to_string()));
        }
        let f = self.field;
        let single = |i: BasisIndex, c: Scalar| SparseVector::basis(f, i).scale(&c);
        Ok(match (&self.kind, idx) {
            (OperatorKind::LeftShift, BasisIndex::Linear(i)) => match i {
                1 => SparseVector::zero(f),
                _ => SparseVector::basis(f, BasisIndex::Linear(i - 1)),
            },
            (OperatorKind::HomothecyHx { .. }, BasisIndex::Graded(n, j)) => {
                if j + 1 < n {
                    SparseVector::basis(f, BasisIndex::Graded(n, j + 1))
                } else {
                    SparseVector::zero(f)
                }
            }
            (OperatorKind::PolyDerivative, BasisIndex::Linear(i)) => match i {
                0 => SparseVector::zero(f),
                _ => single(BasisIndex::Linear(i - 1), f.from_i64(i as i64)),
            },
            (OperatorKind::EvenOdd, BasisIndex::Linear(i)) => match i {
                0 => SparseVector::zero(f),
                _ if i % 2 == 1 => single(BasisIndex::Linear(i), f.from_i64(i as i64 + 1)),
                _ => SparseVector::basis(f, BasisIndex::Linear(i - 2)),
            },
            (OperatorKind::Banded { rules, .. }, BasisIndex::Linear(i)) => rules[&i].clone(),
            _ => unreachable!("contains() rejected the label"),
        })
    }
}

/// Per-vector outcome of [`verify_pointwise_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseAxiomEntry {
    pub vector: SparseVector,
    /// `(α∘φ∘α)(v) = α(v)`
    pub reflexive: bool,
    /// `(α∘φ)(v) = (φ∘α)(v)`
    pub commutes: bool,
    /// Smallest `m ≤ budget` with `α(φ^{m+1}(v)) = φ^m(v)`.
    pub power_identity: Option<usize>,
}

impl PointwiseAxiomEntry {
    pub fn passed(&self) -> bool {
        self.reflexive && self.commutes && self.power_identity.is_some()
    }
}

/// Checks the pointwise Drazin identities for a candidate `alpha` on each
/// sample vector.
pub fn verify_pointwise_axioms(
    op: &BasisOperator,
    alpha: &dyn LinearRule,
    sample: &[SparseVector],
    budget: usize,
) -> Result<Vec<PointwiseAxiomEntry>> {
    sample
        .iter()
        .map(|v| {
            op.check_vector(v)?;
            let av = alpha.apply(v)?;
            let reflexive = alpha.apply(&op.apply(&av)?)? == av;
            let commutes = alpha.apply(&op.apply(v)?)? == op.apply(&av)?;
            let mut power_identity = None;
            let mut phi_m = v.clone();
            for m in 0..=budget {
                let phi_next = op.apply(&phi_m)?;
                if alpha.apply(&phi_next)? == phi_m {
                    power_identity = Some(m);
                    break;
                }
                phi_m = phi_next;
            }
            Ok(PointwiseAxiomEntry {
                vector: v.clone(),
                reflexive,
                commutes,
                power_identity,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn e(i: u64) -> SparseVector {
        SparseVector::basis(Q, BasisIndex::Linear(i))
    }

    fn poly(s: &str) -> SparseVector {
        SparseVector::from_poly(&Poly::parse(s, Q).unwrap())
    }

    #[test]
    fn apply_examples() {
        assert_eq!(BasisOperator::left_shift(Q).apply(&e(3)).unwrap(), e(2));
        assert_eq!(
            BasisOperator::poly_derivative(Q)
                .apply(&poly("x^2"))
                .unwrap(),
            poly("2*x")
        );
        assert_eq!(
            BasisOperator::even_odd(Q).apply(&poly("x")).unwrap(),
            poly("2*x")
        );
        let op = BasisOperator::even_odd(Q);
        assert_eq!(
            op.apply_power(&poly("x^4 + x^3"), 0).unwrap(),
            poly("x^4 + x^3")
        );
        assert_eq!(
            op.apply_power(&poly("x^4 + x^3"), 2).unwrap(),
            poly("1 + 16*x^3")
        );
    }

    #[test]
    fn out_of_domain_labels() {
        let op = BasisOperator::left_shift(Q);
        assert!(matches!(
            op.apply_power(&e(0), 1),
            Err(AlgebraError::IndexOutOfDomain(_))
        ));
        let h = BasisOperator::homothecy_hx(Q);
        assert!(h
            .apply_power(&SparseVector::basis(Q, BasisIndex::Graded(2, 2)), 1)
            .is_err());
        assert!(h.apply_power(&e(1), 1).is_err());
    }

    #[test]
    fn nilpotency_witnesses() {
        let d = BasisOperator::poly_derivative(Q);
        assert_eq!(
            d.pointwise_nilpotency_witness(&poly("1 + x^4"), 64)
                .unwrap(),
            Some(5)
        );
        assert_eq!(
            d.pointwise_nilpotency_witness(&poly("0"), 64).unwrap(),
            Some(0)
        );
        let s = BasisOperator::left_shift(Q);
        assert_eq!(s.pointwise_nilpotency_witness(&e(5), 64).unwrap(), Some(5));
        assert_eq!(s.pointwise_nilpotency_witness(&e(5), 4).unwrap(), None);
        let eo = BasisOperator::even_odd(Q);
        assert_eq!(
            eo.pointwise_nilpotency_witness(&poly("x"), 100).unwrap(),
            None
        );
    }

    #[test]
    fn surjectivity_examples() {
        let s = BasisOperator::left_shift(Q);
        // φ(e2) = e1 already, so m = 0.
        assert_eq!(
            s.surjectivity_witness(&e(1), 8).unwrap(),
            SurjectivityOutcome::Witness {
                m: 0,
                preimage: e(2)
            }
        );
        let h = BasisOperator::homothecy_hx(Q);
        let v = SparseVector::basis(Q, BasisIndex::Graded(2, 0));
        assert_eq!(
            h.surjectivity_witness(&v, 8).unwrap(),
            SurjectivityOutcome::Witness {
                m: 2,
                preimage: SparseVector::zero(Q)
            }
        );
        let eo = BasisOperator::even_odd(Q);
        let v = poly("1 + x + x^2 + x^5");
        match eo.surjectivity_witness(&v, 8).unwrap() {
            SurjectivityOutcome::Witness { m, preimage } => {
                assert!(m <= 5);
                assert_eq!(
                    eo.apply_power(&preimage, m + 1).unwrap(),
                    eo.apply_power(&v, m).unwrap()
                );
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn banded_no_witness_is_not_exhaustion() {
        // e0 -> 0, e1 -> e0 on {e0, e1}: nilpotent, e1 is not in the image.
        let mut rules = BTreeMap::new();
        rules.insert(0, SparseVector::zero(Q));
        rules.insert(1, e(0));
        let op = BasisOperator::banded(Q, 1, rules).unwrap();
        assert_eq!(
            op.surjectivity_witness(&e(1), 1).unwrap(),
            SurjectivityOutcome::NoWitness { budget: 1 }
        );
        assert!(matches!(
            op.surjectivity_witness(&e(1), 2).unwrap(),
            SurjectivityOutcome::Witness { m: 2, .. }
        ));
        assert_eq!(op.kernel_membership(&e(1), 1).unwrap(), None);
        assert_eq!(op.kernel_membership(&e(1), 2).unwrap(), Some(true));
    }

    #[test]
    fn banded_rules_are_validated() {
        let mut rules = BTreeMap::new();
        rules.insert(0, e(3));
        rules.insert(3, e(0));
        assert!(BasisOperator::banded(Q, 1, rules.clone()).is_err());
        assert!(BasisOperator::banded(Q, 3, rules.clone()).is_ok());
        rules.insert(0, e(4));
        assert!(BasisOperator::banded(Q, 9, rules).is_err());
    }

    #[test]
    fn drazin_rule_examples() {
        let eo = BasisOperator::even_odd(Q);
        assert_eq!(
            eo.pointwise_drazin_apply(&poly("x")).unwrap(),
            poly("1/2*x")
        );
        assert_eq!(eo.pointwise_drazin_apply(&poly("x^2")).unwrap(), poly("0"));
        assert_eq!(eo.pointwise_drazin_apply(&poly("0")).unwrap(), poly("0"));
        assert!(matches!(
            BasisOperator::left_shift(Q).pointwise_drazin_apply(&e(1)),
            Err(AlgebraError::Unsupported(_))
        ));
        let f7 = Field::prime(7).unwrap();
        assert!(matches!(
            BasisOperator::even_odd(f7).pointwise_drazin_rule(),
            Err(AlgebraError::Unsupported(_))
        ));
    }

    #[test]
    fn axioms_for_zero_map_on_left_shift() {
        let op = BasisOperator::left_shift(Q);
        let report = verify_pointwise_axioms(&op, &FnRule::zero(Q), &[e(1)], 8).unwrap();
        assert!(report[0].reflexive && report[0].commutes);
        // α(φ(e1)) = 0 ≠ e1, α(φ²(e1)) = 0 = φ(e1).
        assert_eq!(report[0].power_identity, Some(1));
    }

    #[test]
    fn perturbed_rule_fails_first_axiom() {
        let op = BasisOperator::even_odd(Q);
        let bump = FnRule::new(Q, |idx| {
            Ok(match idx {
                BasisIndex::Linear(1) => SparseVector::basis(Q, idx),
                _ => SparseVector::zero(Q),
            })
        });
        let perturbed = FnRule::sum(op.pointwise_drazin_rule().unwrap(), bump);
        let report = verify_pointwise_axioms(&op, &perturbed, &[poly("x")], 64).unwrap();
        assert!(!report[0].reflexive);
    }

    #[test]
    fn kernel_membership_examples() {
        let eo = BasisOperator::even_odd(Q);
        assert_eq!(
            eo.kernel_membership(&poly("1 + x^2"), 64).unwrap(),
            Some(true)
        );
        assert_eq!(eo.kernel_membership(&poly("x"), 64).unwrap(), Some(false));
        let d = BasisOperator::poly_derivative(Q);
        assert_eq!(d.kernel_membership(&poly("x^200"), 4).unwrap(), Some(true));
    }

    #[test]
    fn vector_text_round_trip() {
        let v = SparseVector::parse("2*e3 - 1/2*e1 + e(2,1) - e3", Q).unwrap();
        assert_eq!(v.to_string(), "-1/2*e1 + e3 + e(2,1)");
        assert_eq!(SparseVector::parse(&v.to_string(), Q).unwrap(), v);
        assert!(SparseVector::parse("3", Q).is_err());
        assert!(SparseVector::parse("e(2)", Q).is_err());
    }
}
