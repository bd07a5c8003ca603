//! Index, core-nilpotent decomposition and Drazin inverse of a square matrix.
//!
//! Two independent constructions are provided:
//!
//! * [`cn_decompose_split`] works in an adapted basis of
//!   `V = Ker(A^m) ⊕ Im(A^m)` and inverts the core block explicitly;
//! * [`cn_decompose_poly`] works inside `k[A]`: with `μ_A = x^a g`,
//!   `g(0) != 0`, a Bézout identity `1 = u x^a + v g` gives the core projector
//!   `E = (u x^a)(A)`, and `x` is inverted modulo `g`.
//!
//! [`drazin`] runs both and refuses to answer if they disagree.

use rayon::prelude::*;

use crate::error::{AlgebraError, Result};
use crate::matrix::{direct_sum_check, Matrix, Subspace};
use crate::poly::Poly;
use crate::scalar::Field;

/// Core-nilpotent decomposition `A = A₁ + A₂` together with the Drazin
/// inverse and the splitting `V = Ker(A^m) ⊕ Im(A^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnDecomposition {
    pub index: usize,
    pub core: Matrix,
    pub nilpotent: Matrix,
    /// Projector onto `Im(A^m)` along `Ker(A^m)`.
    pub core_projector: Matrix,
    pub drazin: Matrix,
    pub kernel_part: Subspace,
    pub image_part: Subspace,
}

/// A named boolean check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, passed: bool) -> Check {
        Check { name, passed }
    }
}

fn require_square(a: &Matrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(AlgebraError::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )))
    }
}

/// Smallest `m >= 0` with `rank(A^m) = rank(A^{m+1})`; zero exactly when `A`
/// is invertible.
pub fn index(a: &Matrix) -> Result<usize> {
    require_square(a)?;
    let mut power = Matrix::identity(a.field(), a.rows());
    let mut prev_rank = a.rows();
    let mut m = 0;
    loop {
        power = power.mul(a)?;
        let r = power.rank();
        if r == prev_rank {
            return Ok(m);
        }
        prev_rank = r;
        m += 1;
    }
}

/// Decomposition through the adapted basis of `Ker(A^m) ⊕ Im(A^m)`.
pub fn cn_decompose_split(a: &Matrix) -> Result<CnDecomposition> {
    require_square(a)?;
    let field = a.field();
    let n = a.rows();
    let m = index(a)?;
    let am = a.pow(m)?;
    let kernel_part = am.kernel_basis();
    let image_part = am.image_basis();
    let r = image_part.dim();

    // Columns: image basis first, then kernel basis.
    let p = image_part.basis().hstack(kernel_part.basis())?;
    let p_inv = p.inverse()?.ok_or_else(|| {
        AlgebraError::InternalInconsistency("Ker(A^m) and Im(A^m) do not span V".into())
    })?;
    let adapted = p_inv.mul(a)?.mul(&p)?;

    let mut core_block = Matrix::zeros(field, r, r);
    for i in 0..r {
        for j in 0..r {
            core_block.set(i, j, adapted.get(i, j).clone());
        }
    }
    let core_inv = core_block.inverse()?.ok_or_else(|| {
        AlgebraError::InternalInconsistency("A restricted to Im(A^m) is not invertible".into())
    })?;

    let zero_tail = Matrix::zeros(field, n - r, n - r);
    let drazin = p
        .mul(&Matrix::block_diag(field, &[core_inv, zero_tail.clone()]))?
        .mul(&p_inv)?;
    let core_projector = p
        .mul(&Matrix::block_diag(
            field,
            &[Matrix::identity(field, r), zero_tail],
        ))?
        .mul(&p_inv)?;
    let core = a.mul(&core_projector)?;
    let nilpotent = a.sub(&core)?;
    Ok(CnDecomposition {
        index: m,
        core,
        nilpotent,
        core_projector,
        drazin,
        kernel_part,
        image_part,
    })
}

/// Polynomial data behind [`cn_decompose_poly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRoute {
    pub minimal_polynomial: Poly,
    /// `x`-adic valuation `a` of the minimal polynomial.
    pub valuation: usize,
    /// Unit-at-zero cofactor `g`.
    pub cofactor: Poly,
    /// CRT idempotent `e = u x^a mod μ`: `e ≡ 0 (mod x^a)`, `e ≡ 1 (mod g)`.
    pub idempotent: Poly,
    /// `h e mod μ` where `h x ≡ 1 (mod g)`; evaluates to the Drazin inverse.
    pub drazin_poly: Poly,
}

/// Builds the idempotent and Drazin polynomials from a minimal polynomial.
pub fn poly_route(mu: &Poly) -> Result<PolyRoute> {
    let field = mu.field();
    let (a, g) = mu.x_adic_valuation()?;
    let xa = Poly::x_pow(field, a);
    let (d, u, _v) = Poly::xgcd(&xa, &g)?;
    if d != Poly::one(field) {
        return Err(AlgebraError::InternalInconsistency(
            "x^a and the unit-at-zero cofactor are not coprime".into(),
        ));
    }
    let idempotent = u.mul(&xa).rem(mu)?;
    // g = g(0) + x q  =>  x * (-q / g(0)) ≡ 1 (mod g)
    let g0 = g.coeff(0);
    let q = Poly::from_coeffs(field, g.coeffs().iter().skip(1).cloned().collect())?;
    let h = q.scale(&(-g0.inv()?));
    let drazin_poly = h.mul(&idempotent).rem(mu)?;
    Ok(PolyRoute {
        minimal_polynomial: mu.clone(),
        valuation: a,
        cofactor: g,
        idempotent,
        drazin_poly,
    })
}

/// Decomposition through the minimal polynomial; the Drazin inverse comes
/// out as a polynomial in `A`.
pub fn cn_decompose_poly(a: &Matrix) -> Result<CnDecomposition> {
    require_square(a)?;
    let route = poly_route(&a.minimal_polynomial()?)?;
    let core_projector = a.poly_at(&route.idempotent)?;
    let drazin = a.poly_at(&route.drazin_poly)?;
    let core = a.mul(&core_projector)?;
    let nilpotent = a.sub(&core)?;
    let complement = Matrix::identity(a.field(), a.rows()).sub(&core_projector)?;
    Ok(CnDecomposition {
        index: route.valuation,
        core,
        nilpotent,
        kernel_part: complement.image_basis(),
        image_part: core_projector.image_basis(),
        core_projector,
        drazin,
    })
}

/// Both decompositions, checked for exact agreement.
pub fn cn_decompose(a: &Matrix) -> Result<CnDecomposition> {
    let split = cn_decompose_split(a)?;
    let poly = cn_decompose_poly(a)?;
    if let Some(what) = first_disagreement(&split, &poly) {
        return Err(AlgebraError::InternalInconsistency(format!(
            "split and polynomial routes disagree on {what}"
        )));
    }
    Ok(split)
}

/// Name of the first component on which two decompositions differ.
pub fn first_disagreement(x: &CnDecomposition, y: &CnDecomposition) -> Option<&'static str> {
    if x.index != y.index {
        Some("index")
    } else if x.core_projector != y.core_projector {
        Some("core projector")
    } else if x.core != y.core {
        Some("core part")
    } else if x.nilpotent != y.nilpotent {
        Some("nilpotent part")
    } else if x.drazin != y.drazin {
        Some("Drazin inverse")
    } else if x.kernel_part != y.kernel_part {
        Some("kernel part")
    } else if x.image_part != y.image_part {
        Some("image part")
    } else {
        None
    }
}

/// Drazin inverse, computed by both routes and cross-checked.
pub fn drazin(a: &Matrix) -> Result<Matrix> {
    Ok(cn_decompose(a)?.drazin)
}

/// Outcome of checking the three Drazin identities for a candidate `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrazinReport {
    /// `XAX = X`
    pub reflexive: bool,
    /// `XA = AX`
    pub commutes: bool,
    /// `A^{m+1} X = A^m`
    pub power_identity: bool,
}

impl DrazinReport {
    pub fn all(&self) -> bool {
        self.reflexive && self.commutes && self.power_identity
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::new("XAX = X", self.reflexive),
            Check::new("XA = AX", self.commutes),
            Check::new("A^(m+1) X = A^m", self.power_identity),
        ]
    }
}

pub fn verify_drazin(a: &Matrix, x: &Matrix, m: usize) -> Result<DrazinReport> {
    require_square(a)?;
    if (x.rows(), x.cols()) != (a.rows(), a.cols()) {
        return Err(AlgebraError::DimensionMismatch(format!(
            "candidate is {}x{}, matrix is {}x{}",
            x.rows(),
            x.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let xa = x.mul(a)?;
    let am = a.pow(m)?;
    Ok(DrazinReport {
        reflexive: xa.mul(x)? == *x,
        commutes: xa == a.mul(x)?,
        power_identity: am.mul(a)?.mul(x)? == am,
    })
}

impl CnDecomposition {
    /// Re-checks every structural identity of the decomposition against `a`.
    pub fn verify(&self, a: &Matrix) -> Result<Vec<Check>> {
        let field = a.field();
        let n = a.rows();
        let (a1, a2, e, ad) = (
            &self.core,
            &self.nilpotent,
            &self.core_projector,
            &self.drazin,
        );
        let zero = Matrix::zeros(field, n, n);
        let id = Matrix::identity(field, n);
        let drazin = verify_drazin(a, ad, self.index)?;
        let mut checks = vec![
            Check::new("A1 + A2 = A", a1.add(a2)? == *a),
            Check::new("A1 A2 = 0", a1.mul(a2)? == zero),
            Check::new("A2 A1 = 0", a2.mul(a1)? == zero),
            Check::new(
                "A2^m = 0 (A2 = 0 when m = 0)",
                a2.pow(self.index.max(1))? == zero,
            ),
            Check::new("index(A1) <= 1", index(a1)? <= 1),
            Check::new("E^2 = E", e.mul(e)? == *e),
            Check::new("EA = AE", e.mul(a)? == a.mul(e)?),
            Check::new("A1 = AE", *a1 == a.mul(e)?),
            Check::new("A2 = A(I - E)", *a2 == a.mul(&id.sub(e)?)?),
            Check::new("index = index(A)", self.index == index(a)?),
            Check::new(
                "kernel part = Ker(A^m)",
                self.kernel_part == a.pow(self.index)?.kernel_basis(),
            ),
            Check::new(
                "image part = Im(A^m)",
                self.image_part == a.pow(self.index)?.image_basis(),
            ),
            Check::new(
                "Ker(A^m) ⊕ Im(A^m) = V",
                direct_sum_check(&self.kernel_part, &self.image_part)?,
            ),
        ];
        checks.extend(drazin.checks());
        Ok(checks)
    }
}

/// Per-matrix summary produced by [`verify_corpus`].
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub index: usize,
    pub failed_checks: Vec<&'static str>,
    pub route_disagreement: Option<&'static str>,
}

/// Runs both routes and every invariant on each matrix, in parallel.
pub fn verify_corpus(matrices: &[Matrix]) -> Vec<Result<CorpusEntry>> {
    matrices
        .par_iter()
        .map(|a| {
            let split = cn_decompose_split(a)?;
            let poly = cn_decompose_poly(a)?;
            let failed_checks = split
                .verify(a)?
                .into_iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            Ok(CorpusEntry {
                index: split.index,
                failed_checks,
                route_disagreement: first_disagreement(&split, &poly),
            })
        })
        .collect()
}

/// The literal definition of the index: smallest `m` with both
/// `Ker(A^m) = Ker(A^{m+1})` and `Im(A^m) = Im(A^{m+1})`.
pub fn index_by_subspace_chains(a: &Matrix) -> Result<usize> {
    require_square(a)?;
    let mut power = Matrix::identity(a.field(), a.rows());
    let mut m = 0;
    loop {
        let next = power.mul(a)?;
        if power.kernel_basis() == next.kernel_basis() && power.image_basis() == next.image_basis()
        {
            return Ok(m);
        }
        power = next;
        m += 1;
    }
}

/// The decomposition of the `0x0` matrix.
pub fn empty_decomposition(field: Field) -> CnDecomposition {
    let z = Matrix::zeros(field, 0, 0);
    CnDecomposition {
        index: 0,
        core: z.clone(),
        nilpotent: z.clone(),
        core_projector: z.clone(),
        drazin: z,
        kernel_part: Subspace::zero(field, 0),
        image_part: Subspace::zero(field, 0),
    }
}
