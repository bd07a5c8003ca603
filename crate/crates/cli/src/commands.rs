use std::fmt;
use std::path::Path;

use kxcore::cn::{cn_decompose, index_by_subspace_chains};
use kxcore::format::{
    parse_matrix, parse_module, parse_operator, parse_vectors, write_matrix, write_module,
    write_operator, write_vectors,
};
use kxcore::kxmodule::{localize, pointwise_cn};
use kxcore::operator::{verify_pointwise_axioms, LinearRule, SurjectivityOutcome};
use kxcore::{index, verify_drazin, AlgebraError, Field, Matrix, Poly};
use serde_json::{json, Value};

use crate::cert::{matrix_json, poly_json, polys_json, subspace_json, Certificate};

#[derive(Debug)]
pub enum CliError {
    Algebra(AlgebraError),
    Io {
        path: String,
        reason: String,
    },
    /// A self-check failed outside `verify` mode.
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Algebra(AlgebraError::InternalInconsistency(_))
            | CliError::Inconsistent(_) => 5,
            CliError::Algebra(_) | CliError::Io { .. } => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Algebra(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Inconsistent(_) => "internal-inconsistency",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Algebra(e) => write!(f, "{e}"),
            CliError::Io { path, reason } => write!(f, "{path}: {reason}"),
            CliError::Inconsistent(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Algebra(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// `verify` found a false identity.
    VerifyFailed,
    /// Some query was left undecided; the reason lists which.
    BudgetExhausted(String),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerifyFailed => 3,
            Status::BudgetExhausted(_) => 4,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub cert: Certificate,
    pub status: Status,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn certified(cert: Certificate, status: Status) -> CliResult<Outcome> {
    let failed = cert.failed_checks();
    if !failed.is_empty() {
        return Err(CliError::Inconsistent(format!(
            "failed checks: {}",
            failed.join("; ")
        )));
    }
    Ok(Outcome { cert, status })
}

fn load_matrix(path: &Path, field: Option<Field>) -> CliResult<Matrix> {
    Ok(parse_matrix(&read(path)?, field)?)
}

pub fn cmd_index(path: &Path, field: Option<Field>) -> CliResult<Outcome> {
    let a = load_matrix(path, field)?;
    let m = index(&a)?;
    let ranks = (0..=m + 1)
        .map(|k| Ok(a.pow(k)?.rank()))
        .collect::<CliResult<Vec<usize>>>()?;
    let results = json!({
        "field": a.field().header(),
        "dimension": a.rows(),
        "index": m,
        "rank_chain": ranks,
    });
    let mut cert = Certificate::new("index", &[&write_matrix(&a)], results);
    cert.check("rank(A^m) = rank(A^(m+1))", ranks[m] == ranks[m + 1]);
    cert.check("m is minimal", m == 0 || ranks[m - 1] > ranks[m]);
    cert.check(
        "kernel and image chains stabilize at m",
        index_by_subspace_chains(&a)? == m,
    );
    certified(cert, Status::Ok)
}

pub fn cmd_cn(path: &Path, field: Option<Field>) -> CliResult<Outcome> {
    let a = load_matrix(path, field)?;
    let d = cn_decompose(&a)?;
    let results = json!({
        "field": a.field().header(),
        "index": d.index,
        "core": matrix_json(&d.core),
        "nilpotent": matrix_json(&d.nilpotent),
        "core_projector": matrix_json(&d.core_projector),
        "drazin": matrix_json(&d.drazin),
        "kernel_basis": subspace_json(&d.kernel_part),
        "image_basis": subspace_json(&d.image_part),
        "minimal_polynomial": poly_json(&a.minimal_polynomial()?),
    });
    let mut cert = Certificate::new("cn", &[&write_matrix(&a)], results);
    // Reaching here means the split and polynomial routes agreed.
    cert.check("split and polynomial routes agree", true);
    for c in d.verify(&a)? {
        cert.check(c.name, c.passed);
    }
    certified(cert, Status::Ok)
}

pub fn cmd_drazin(path: &Path, field: Option<Field>) -> CliResult<Outcome> {
    let a = load_matrix(path, field)?;
    let d = cn_decompose(&a)?;
    let results = json!({
        "field": a.field().header(),
        "index": d.index,
        "drazin": matrix_json(&d.drazin),
    });
    let mut cert = Certificate::new("drazin", &[&write_matrix(&a)], results);
    for c in verify_drazin(&a, &d.drazin, d.index)?.checks() {
        cert.check(c.name, c.passed);
    }
    certified(cert, Status::Ok)
}

pub fn cmd_verify(
    path: &Path,
    candidate: &Path,
    m: Option<usize>,
    field: Option<Field>,
) -> CliResult<Outcome> {
    let a = load_matrix(path, field)?;
    let x = load_matrix(candidate, Some(field.unwrap_or(a.field())))?;
    let (m, source) = match m {
        Some(m) => (m, "given"),
        None => (index(&a)?, "computed"),
    };
    let report = verify_drazin(&a, &x, m)?;
    let results = json!({
        "field": a.field().header(),
        "index": m,
        "index_source": source,
        "reflexive": report.reflexive,
        "commutes": report.commutes,
        "power_identity": report.power_identity,
    });
    let mut cert = Certificate::new("verify", &[&write_matrix(&a), &write_matrix(&x)], results);
    for c in report.checks() {
        cert.check(c.name, c.passed);
    }
    let status = if report.all() {
        Status::Ok
    } else {
        Status::VerifyFailed
    };
    Ok(Outcome { cert, status })
}

pub fn cmd_module_analyze(path: &Path, field: Option<Field>) -> CliResult<Outcome> {
    let module = parse_module(&read(path)?, field)?;
    let f = module.field();
    let rep = localize(&module)?;
    let sections = rep.section_data.as_ref().map(|s| {
        s.iter()
            .map(|sf| {
                json!({
                    "factor": poly_json(&sf.factor),
                    "valuation": sf.valuation,
                    "cofactor": poly_json(&sf.cofactor),
                    "idempotent": poly_json(&sf.idempotent),
                })
            })
            .collect::<Vec<_>>()
    });
    let pw = pointwise_cn(&module).map(|p| {
        json!({
            "nilpotent_part": polys_json(p.nilpotent_part.torsion()),
            "core_part": polys_json(p.core_part.torsion()),
            "uniform_index": p.uniform_index,
        })
    });
    let results = json!({
        "field": f.header(),
        "module": module.to_string(),
        "free_rank": module.free_rank(),
        "torsion": polys_json(module.torsion()),
        "invariant_factors": polys_json(module.normalize().torsion()),
        "k_dimension": module.k_dimension(),
        "kernel": polys_json(rep.kernel.torsion()),
        "localized": {
            "free_rank": rep.localized.free_rank,
            "torsion": polys_json(&rep.localized.torsion),
        },
        "surjective": rep.surjective,
        "splits": rep.splits,
        "sections": sections,
        "pointwise_cn": pw,
    });
    let mut cert = Certificate::new("module", &[&write_module(&module)], results);
    let is_x_power = |p: &Poly| p.degree().is_some_and(|d| *p == Poly::x_pow(f, d));
    cert.check(
        "kernel factors are powers of x",
        rep.kernel.torsion().iter().all(is_x_power),
    );
    cert.check(
        "localized factors are prime to x",
        rep.localized.torsion.iter().all(|g| !g.coeff(0).is_zero()),
    );
    cert.check(
        "free rank survives localization",
        rep.localized.free_rank == module.free_rank(),
    );
    cert.check(
        "surjective iff free rank is 0",
        rep.surjective == (module.free_rank() == 0),
    );
    cert.check("splits iff surjective", rep.splits == rep.surjective);
    let kernel_dim = rep.kernel.k_dimension().unwrap_or(0);
    let local_dim: usize = rep.localized.torsion.iter().filter_map(Poly::degree).sum();
    let torsion_dim: usize = module.torsion().iter().filter_map(Poly::degree).sum();
    cert.check(
        "torsion dimension splits as kernel + localized",
        kernel_dim + local_dim == torsion_dim,
    );
    if let Some(sections) = &rep.section_data {
        let one = Poly::one(f);
        let mut idempotent = true;
        let mut congruences = true;
        for s in sections {
            let e = &s.idempotent;
            idempotent &= s.factor.divides(&e.mul(e).sub(e));
            congruences &=
                Poly::x_pow(f, s.valuation).divides(e) && s.cofactor.divides(&e.sub(&one));
        }
        cert.check("section idempotents satisfy e^2 = e", idempotent);
        cert.check("e = 0 mod x^a and e = 1 mod g", congruences);
    }
    certified(cert, Status::Ok)
}

fn outcome_json(o: &SurjectivityOutcome) -> Value {
    match o {
        SurjectivityOutcome::Witness { m, preimage } => {
            json!({ "outcome": "witness", "m": m, "preimage": preimage.to_string() })
        }
        SurjectivityOutcome::NoWitness { budget } => {
            json!({ "outcome": "no-witness", "budget": budget })
        }
        SurjectivityOutcome::BudgetExhausted { m, window } => {
            json!({ "outcome": "budget-exhausted", "m": m, "window": window })
        }
    }
}

pub fn cmd_op_check(
    operator: &Path,
    vectors: &Path,
    budget: usize,
    field: Option<Field>,
) -> CliResult<Outcome> {
    let op = parse_operator(&read(operator)?, field)?;
    let sample = parse_vectors(&read(vectors)?, op.field())?;
    let rule = op.pointwise_drazin_rule().ok();
    let axioms = match &rule {
        Some(r) => Some(verify_pointwise_axioms(&op, r, &sample, budget)?),
        None => None,
    };

    let mut entries = Vec::new();
    let mut undecided = Vec::new();
    let mut minimal = true;
    let mut witnesses_hold = true;
    let mut predicate_agrees = true;
    for (i, v) in sample.iter().enumerate() {
        let nil = op.pointwise_nilpotency_witness(v, budget)?;
        if let Some(n) = nil {
            minimal &= n == 0 || !op.apply_power(v, n - 1)?.is_zero();
            predicate_agrees &= op.kernel_predicate(v) != Some(false);
        }
        let in_kernel = op.kernel_membership(v, budget)?;
        if in_kernel.is_none() {
            undecided.push(format!("vector {}: kernel membership", i + 1));
        }
        let surj = op.surjectivity_witness(v, budget)?;
        match &surj {
            SurjectivityOutcome::Witness { m, preimage } => {
                witnesses_hold &= op.apply_power(preimage, m + 1)? == op.apply_power(v, *m)?;
            }
            SurjectivityOutcome::BudgetExhausted { .. } => {
                undecided.push(format!("vector {}: surjectivity window", i + 1));
            }
            SurjectivityOutcome::NoWitness { .. } => {}
        }
        let mut entry = json!({
            "vector": v.to_string(),
            "nilpotency_witness": nil,
            "in_kernel": in_kernel,
            "surjectivity": outcome_json(&surj),
        });
        if let (Some(r), Some(ax)) = (&rule, &axioms) {
            let a = &ax[i];
            if a.power_identity.is_none() {
                undecided.push(format!("vector {}: power identity", i + 1));
            }
            entry["drazin"] = json!({
                "image": r.apply(v)?.to_string(),
                "reflexive": a.reflexive,
                "commutes": a.commutes,
                "power_identity": a.power_identity,
            });
        }
        entries.push(entry);
    }

    let mut additive = true;
    for pair in sample.windows(2) {
        additive &=
            op.apply(&pair[0].add(&pair[1]))? == op.apply(&pair[0])?.add(&op.apply(&pair[1])?);
    }

    let results = json!({
        "field": op.field().header(),
        "operator": op.name(),
        "budget": budget,
        "drazin_rule": rule.is_some(),
        "vectors": entries,
    });
    let inputs = [write_operator(&op), write_vectors(&sample)];
    let mut cert = Certificate::new("op", &[&inputs[0], &inputs[1]], results);
    cert.check("operator is additive on the sample", additive);
    cert.check("nilpotency witnesses are minimal", minimal);
    cert.check("kernel predicate agrees with witnesses", predicate_agrees);
    cert.check(
        "surjectivity witnesses satisfy φ^(m+1)(w) = φ^m(v)",
        witnesses_hold,
    );
    if let Some(ax) = &axioms {
        cert.check("(αφα)(v) = α(v)", ax.iter().all(|a| a.reflexive));
        cert.check("(αφ)(v) = (φα)(v)", ax.iter().all(|a| a.commutes));
    }
    let status = if undecided.is_empty() {
        Status::Ok
    } else {
        Status::BudgetExhausted(format!(
            "undecided within budget {budget}: {}",
            undecided.join(", ")
        ))
    };
    certified(cert, status)
}
