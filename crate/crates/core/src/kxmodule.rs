//! Finitely presented `k[x]`-modules `k[x]^r ⊕ ⨁ k[x]/(f_i)` and their
//! localization at the multiplicative set `{1, x, x^2, ...}`.
//!
//! Localization is computed factor by factor. Writing `f = x^a g` with
//! `g(0) != 0`, the summand `k[x]/(f)` splits as `k[x]/(x^a) ⊕ k[x]/(g)`:
//! the first piece is killed by localization (it is the kernel of `V → V_x`)
//! and `x` already acts invertibly on the second. A free summand `k[x]`
//! injects into `k[x]_x` but never onto it, so for these modules the
//! localization map is surjective exactly when the free rank is zero, and
//! then the CRT idempotents give the (unique) section.

use std::fmt;

use crate::error::{AlgebraError, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::Field;

/// `k[x]^free_rank ⊕ ⨁ k[x]/(torsion[i])`, each torsion factor monic of
/// positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModulePresentation {
    field: Field,
    free_rank: usize,
    torsion: Vec<Poly>,
}

impl ModulePresentation {
    pub fn new(field: Field, free_rank: usize, torsion: Vec<Poly>) -> Result<ModulePresentation> {
        for f in &torsion {
            if f.field() != field {
                return Err(AlgebraError::FieldMismatch {
                    left: field,
                    right: f.field(),
                });
            }
            if !f.is_monic() || f.degree() == Some(0) {
                return Err(AlgebraError::InvalidInput(format!(
                    "torsion factor `{f}` must be monic of positive degree"
                )));
            }
        }
        Ok(ModulePresentation {
            field,
            free_rank,
            torsion,
        })
    }

    pub fn zero(field: Field) -> ModulePresentation {
        ModulePresentation {
            field,
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Poly] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Dimension over `k`, if finite.
    pub fn k_dimension(&self) -> Option<usize> {
        (self.free_rank == 0).then(|| self.torsion.iter().filter_map(Poly::degree).sum())
    }

    /// Splits each torsion factor into its `x`-primary part `x^a` and its
    /// `x`-regular part `g`; returns `(⨁ k[x]/x^a, k[x]^r ⊕ ⨁ k[x]/g)`.
    pub fn x_split(&self) -> (ModulePresentation, ModulePresentation) {
        let mut primary = Vec::new();
        let mut regular = Vec::new();
        for f in &self.torsion {
            let (a, g) = f.x_adic_valuation().expect("torsion factors are nonzero");
            if a > 0 {
                primary.push(Poly::x_pow(self.field, a));
            }
            if g.degree() > Some(0) {
                regular.push(g);
            }
        }
        (
            ModulePresentation {
                field: self.field,
                free_rank: 0,
                torsion: primary,
            },
            ModulePresentation {
                field: self.field,
                free_rank: self.free_rank,
                torsion: regular,
            },
        )
    }

    /// The same module in invariant-factor form `f_1 | f_2 | ...`.
    pub fn normalize(&self) -> ModulePresentation {
        let n = self.torsion.len();
        let mut diag = vec![vec![Poly::zero(self.field); n]; n];
        for (i, f) in self.torsion.iter().enumerate() {
            diag[i][i] = f.clone();
        }
        ModulePresentation {
            field: self.field,
            free_rank: self.free_rank,
            torsion: nonunit_invariant_factors(diag),
        }
    }
}

impl fmt::Display for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("k[x]".to_string()),
            r => parts.push(format!("k[x]^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("k[x]/({t})")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// The localized module `(k[x]_x)^r ⊕ ⨁ k[x]/(g_i)` with every `g_i(0) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedModule {
    pub free_rank: usize,
    pub torsion: Vec<Poly>,
}

/// CRT data for one torsion factor `f = x^a g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionFactor {
    pub factor: Poly,
    pub valuation: usize,
    pub cofactor: Poly,
    /// `e ≡ 0 (mod x^a)`, `e ≡ 1 (mod g)`, reduced modulo `f`.
    pub idempotent: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationReport {
    /// `Ker(V → V_x)`, the `x`-primary torsion.
    pub kernel: ModulePresentation,
    pub localized: LocalizedModule,
    pub surjective: bool,
    pub splits: bool,
    /// Present iff `splits`.
    pub section_data: Option<Vec<SectionFactor>>,
}

fn section_factor(f: &Poly) -> Result<SectionFactor> {
    let field = f.field();
    let (a, g) = f.x_adic_valuation()?;
    let xa = Poly::x_pow(field, a);
    let (_, u, _) = Poly::xgcd(&xa, &g)?;
    Ok(SectionFactor {
        factor: f.clone(),
        valuation: a,
        cofactor: g,
        idempotent: u.mul(&xa).rem(f)?,
    })
}

/// Localization of `M` at the powers of `x`.
pub fn localize(m: &ModulePresentation) -> Result<LocalizationReport> {
    let (kernel, regular) = m.x_split();
    let surjective = m.free_rank == 0;
    let section_data = if surjective {
        Some(
            m.torsion
                .iter()
                .map(section_factor)
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };
    Ok(LocalizationReport {
        kernel,
        localized: LocalizedModule {
            free_rank: regular.free_rank,
            torsion: regular.torsion,
        },
        surjective,
        splits: surjective,
        section_data,
    })
}

/// `V = U ⊕ W` with `U` the `x`-primary part and `x` invertible on `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseCn {
    pub nilpotent_part: ModulePresentation,
    pub core_part: ModulePresentation,
    /// Largest exponent of `x` among the primary factors; `0` if there are none.
    pub uniform_index: Option<usize>,
}

/// Pointwise core-nilpotent splitting; `None` when `V → V_x` is not onto.
pub fn pointwise_cn(m: &ModulePresentation) -> Option<PointwiseCn> {
    if m.free_rank > 0 {
        return None;
    }
    let (nilpotent_part, core_part) = m.x_split();
    let uniform_index = nilpotent_part
        .torsion
        .iter()
        .filter_map(Poly::degree)
        .max()
        .unwrap_or(0);
    Some(PointwiseCn {
        nilpotent_part,
        core_part,
        uniform_index: Some(uniform_index),
    })
}

/// The `k[x]`-module `k^n` with `x` acting as `A`, in invariant-factor form
/// (Smith normal form of `xI - A`).
pub fn matrix_to_module(a: &Matrix) -> Result<ModulePresentation> {
    let factors = invariant_factors(a)?;
    ModulePresentation::new(a.field(), 0, factors)
}

/// Nonconstant invariant factors of `xI - A`, each dividing the next.
pub fn invariant_factors(a: &Matrix) -> Result<Vec<Poly>> {
    if !a.is_square() {
        return Err(AlgebraError::InvalidInput(format!(
            "module structure needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let field = a.field();
    let n = a.rows();
    let x = Poly::x_pow(field, 1);
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Poly::constant(-a.get(i, j));
                    if i == j {
                        x.add(&c)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    Ok(nonunit_invariant_factors(entries))
}

fn nonunit_invariant_factors(entries: Vec<Vec<Poly>>) -> Vec<Poly> {
    smith_diagonal(entries)
        .into_iter()
        .filter(|f| f.degree().is_some_and(|d| d > 0))
        .collect()
}

/// Diagonal of the Smith normal form of a polynomial matrix, monic, with
/// `d_1 | d_2 | ...`; trailing zero diagonal entries are included as zero.
pub fn smith_diagonal(mut a: Vec<Vec<Poly>>) -> Vec<Poly> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // Lowest-degree nonzero entry of the trailing block.
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].degree());
            let Some((pi, pj)) = pivot else {
                diag.extend((t..rows.min(cols)).map(|_| Poly::zero(a[0][0].field())));
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let mut reduced_all = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t]).expect("nonzero pivot");
                for j in t..cols {
                    a[i][j] = a[i][j].sub(&q.mul(&a[t][j]));
                }
                reduced_all &= r.is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t]).expect("nonzero pivot");
                for i in t..rows {
                    a[i][j] = a[i][j].sub(&q.mul(&a[i][t]));
                }
                reduced_all &= r.is_zero();
            }
            if !reduced_all {
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[t][t].divides(&a[i][j])));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = a[t][j].add(&a[i][j]);
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].monic());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn p(s: &str) -> Poly {
        Poly::parse(s, Q).unwrap()
    }

    fn module(r: usize, t: &[&str]) -> ModulePresentation {
        ModulePresentation::new(Q, r, t.iter().map(|s| p(s)).collect()).unwrap()
    }

    #[test]
    fn rejects_malformed_presentations() {
        assert!(ModulePresentation::new(Q, 0, vec![p("2*x")]).is_err());
        assert!(ModulePresentation::new(Q, 0, vec![p("1")]).is_err());
        let f7 = Field::prime(7).unwrap();
        assert!(ModulePresentation::new(f7, 0, vec![p("x")]).is_err());
    }

    #[test]
    fn localize_free_plus_nilpotent() {
        for n in 1..=4 {
            let m = ModulePresentation::new(Q, 1, vec![Poly::x_pow(Q, n)]).unwrap();
            let rep = localize(&m).unwrap();
            assert_eq!(
                rep.kernel,
                ModulePresentation::new(Q, 0, vec![Poly::x_pow(Q, n)]).unwrap()
            );
            assert_eq!(
                rep.localized,
                LocalizedModule {
                    free_rank: 1,
                    torsion: vec![]
                }
            );
            assert!(!rep.surjective && !rep.splits);
            assert!(rep.section_data.is_none());
        }
    }

    #[test]
    fn localize_unit_factor() {
        let rep = localize(&module(0, &["x - 1"])).unwrap();
        assert!(rep.kernel.is_zero());
        assert!(rep.surjective && rep.splits);
        assert_eq!(rep.section_data.unwrap()[0].idempotent, p("1"));
    }

    #[test]
    fn localize_mixed_factor() {
        // 1 = 1*x^2 - (x + 1)(x - 1), so e = x^2 mod x^2 (x - 1).
        let rep = localize(&module(0, &["-x^2 + x^3"])).unwrap();
        assert_eq!(rep.kernel, module(0, &["x^2"]));
        assert_eq!(rep.localized.torsion, vec![p("x - 1")]);
        let s = &rep.section_data.unwrap()[0];
        assert_eq!(s.idempotent, p("x^2"));
        assert!(p("x^2").divides(&s.idempotent));
        assert!(p("x - 1").divides(&s.idempotent.sub(&p("1"))));
    }

    #[test]
    fn pointwise_cn_examples() {
        let pw = pointwise_cn(&module(0, &["x^3", "x - 2"])).unwrap();
        assert_eq!(pw.nilpotent_part, module(0, &["x^3"]));
        assert_eq!(pw.core_part, module(0, &["x - 2"]));
        assert_eq!(pw.uniform_index, Some(3));

        assert!(pointwise_cn(&module(1, &["x"])).is_none());

        let pw = pointwise_cn(&module(0, &["x - 1", "x - 2"])).unwrap();
        assert!(pw.nilpotent_part.is_zero());
        assert_eq!(pw.core_part, module(0, &["x - 1", "x - 2"]));
        assert_eq!(pw.uniform_index, Some(0));
    }

    #[test]
    fn matrix_to_module_examples() {
        assert_eq!(
            matrix_to_module(&Matrix::jordan_zero(Q, 2)).unwrap(),
            module(0, &["x^2"])
        );
        assert_eq!(
            matrix_to_module(&Matrix::identity(Q, 2)).unwrap(),
            module(0, &["x - 1", "x - 1"])
        );
        let a = Matrix::block_diag(
            Q,
            &[Matrix::jordan_zero(Q, 2), Matrix::from_i64_rows(Q, &[&[2]])],
        );
        assert_eq!(matrix_to_module(&a).unwrap(), module(0, &["-2*x^2 + x^3"]));
        assert!(matrix_to_module(&Matrix::zeros(Q, 1, 2)).is_err());
    }

    #[test]
    fn normalize_merges_coprime_factors() {
        let m = module(0, &["x^2", "x - 1", "x"]);
        assert_eq!(m.normalize(), module(0, &["x", "-x^2 + x^3"]));
        assert_eq!(module(2, &[]).normalize(), module(2, &[]));
    }

    #[test]
    fn display() {
        assert_eq!(module(1, &["x^2"]).to_string(), "k[x] ⊕ k[x]/(x^2)");
        assert_eq!(ModulePresentation::zero(Q).to_string(), "0");
    }
}
