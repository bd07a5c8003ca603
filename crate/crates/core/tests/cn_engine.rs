use kxcore::cn::{
    cn_decompose_poly, cn_decompose_split, first_disagreement, index_by_subspace_chains,
    verify_corpus,
};
use kxcore::random;
use kxcore::{drazin, index, verify_drazin, Field, Matrix};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn corpus(seed: u64, field: Field, count: usize, max_dim: usize) -> Vec<Matrix> {
    random::corpus(&mut StdRng::seed_from_u64(seed), field, count, max_dim)
}

#[test]
fn decomposition_invariants_hold_on_random_corpus() {
    for field in [Field::Rational, Field::Prime(7)] {
        let matrices = corpus(11, field, 80, 6);
        for (a, entry) in matrices.iter().zip(verify_corpus(&matrices)) {
            let entry = entry.unwrap();
            assert!(
                entry.failed_checks.is_empty(),
                "{a}: {:?}",
                entry.failed_checks
            );
            assert_eq!(entry.route_disagreement, None, "{a}");
        }
    }
}

#[test]
fn corpus_covers_nontrivial_indices() {
    let matrices = corpus(11, Field::Rational, 80, 6);
    let indices: Vec<usize> = matrices.iter().map(|a| index(a).unwrap()).collect();
    assert!(indices.contains(&0));
    assert!(indices.iter().any(|&m| m >= 2));
}

#[test]
fn index_equals_subspace_chain_definition() {
    for field in [Field::Rational, Field::Prime(7)] {
        for a in corpus(5, field, 60, 6) {
            assert_eq!(
                index(&a).unwrap(),
                index_by_subspace_chains(&a).unwrap(),
                "{a}"
            );
        }
    }
}

#[test]
fn index_of_jordan_blocks_follows_rank_chain() {
    let q = Field::Rational;
    for n in 1..=7 {
        let j = Matrix::jordan_zero(q, n);
        for k in 0..=n {
            assert_eq!(j.pow(k).unwrap().rank(), n - k);
        }
        assert_eq!(index(&j).unwrap(), n);
    }
}

#[test]
fn index_is_the_valuation_of_the_minimal_polynomial() {
    for a in corpus(17, Field::Rational, 60, 6) {
        let (v, _) = a.minimal_polynomial().unwrap().x_adic_valuation().unwrap();
        assert_eq!(v, index(&a).unwrap());
    }
}

#[test]
fn drazin_is_unique_under_perturbation() {
    let mut rng = StdRng::seed_from_u64(23);
    for a in corpus(23, Field::Rational, 60, 5) {
        let ad = drazin(&a).unwrap();
        let m = index(&a).unwrap();
        let p = random::nonzero_matrix(&mut rng, Field::Rational, a.rows());
        let report = verify_drazin(&a, &ad.add(&p).unwrap(), m).unwrap();
        assert!(!report.all(), "perturbation of {a} still passes");
    }
}

#[test]
fn drazin_is_a_polynomial_in_a() {
    // Poly route output commutes with everything that commutes with A; a
    // cheap witness: it commutes with A and with A^2 + A.
    for a in corpus(29, Field::Prime(7), 40, 6) {
        let d = cn_decompose_poly(&a).unwrap();
        let b = a.mul(&a).unwrap().add(&a).unwrap();
        assert_eq!(d.drazin.mul(&b).unwrap(), b.mul(&d.drazin).unwrap());
    }
}

#[test]
fn routes_agree_on_hand_built_cases() {
    let q = Field::Rational;
    let cases = [
        Matrix::from_i64_rows(q, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 3]]),
        Matrix::from_i64_rows(q, &[&[1, 1], &[1, 1]]),
        Matrix::from_i64_rows(q, &[&[0, 0], &[1, 0]]),
        Matrix::from_i64_rows(
            q,
            &[&[2, 0, 0, 0], &[1, 2, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]],
        ),
        Matrix::zeros(q, 3, 3),
    ];
    for a in &cases {
        let s = cn_decompose_split(a).unwrap();
        let p = cn_decompose_poly(a).unwrap();
        assert_eq!(first_disagreement(&s, &p), None, "{a}");
    }
    // [[1,1],[1,1]] has index 1 and Drazin inverse A/4.
    let a = &cases[1];
    assert_eq!(
        drazin(a).unwrap(),
        a.scale(&kxcore::Scalar::parse("1/4", q).unwrap())
    );
}
