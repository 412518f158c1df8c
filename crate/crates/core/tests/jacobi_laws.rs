mod oracle;

use cfree::cumulants::{moments_to_twostate_cumulants, VariableSpec};
use cfree::jacobi::{
    continued_fraction_series, jacobi_from_moments, moments_from_jacobi, scale_jacobi, shift_jacobi,
    tridiagonal_moments, JacobiParams,
};
use cfree::laws::{
    catalog_law, cfree_convolve, cfree_power, classify_meixner, free_convolve, normal_power_law, two_state_normal,
    LawError, LawFile, MeixnerType, TwoStateLaw, CATALOG,
};
use cfree::rational::q;
use cfree::Rational;
use oracle::{motzkin_moments, phi_power, positive_rational, small_rational, Filter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_jacobi(rng: &mut impl Rng, levels: usize) -> (Vec<Rational>, Vec<Rational>) {
    let alpha = (0..levels).map(|_| small_rational(rng)).collect();
    let beta = (0..levels).map(|_| positive_rational(rng)).collect();
    (alpha, beta)
}

#[test]
fn both_moment_routes_match_path_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..25 {
        let (a, b) = random_jacobi(&mut rng, 6);
        let j = JacobiParams::new(a.clone(), b.clone()).unwrap();
        let expect = motzkin_moments(&a, &b, 12);
        assert_eq!(moments_from_jacobi(&j, 12).unwrap(), expect);
        assert_eq!(tridiagonal_moments(&j, 12).unwrap(), expect);
        assert_eq!(continued_fraction_series(&j, 12).unwrap().coeffs(), &expect[..]);
    }
}

#[test]
fn stieltjes_inverse_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..25 {
        let (a, b) = random_jacobi(&mut rng, 5);
        let m = motzkin_moments(&a, &b, 10);
        let fit = jacobi_from_moments(&m).unwrap();
        assert_eq!(fit.params.alphas(), &a[..]);
        assert_eq!(fit.params.betas(), &b[..]);
        assert_eq!(fit.negative_pivot, None);
    }
}

#[test]
fn finite_support_terminates() {
    // Two atoms: β_1 = 0, later levels carry nothing.
    let j = JacobiParams::new(vec![q(0, 1), q(0, 1), q(5, 1)], vec![q(1, 1), q(0, 1), q(7, 1)]).unwrap();
    assert_eq!(j.terminated(), Some(1));
    assert_eq!(j.alpha(2), q(0, 1));
    let m = moments_from_jacobi(&j, 8).unwrap();
    assert_eq!(m, motzkin_moments(&[q(0, 1)], &[q(1, 1)], 8));
    let back: JacobiParams = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
    assert_eq!(back, j);
}

#[test]
fn first_last_moments_shift_the_jacobi_data() {
    // φ_∥(X^{n+2}) = β_0 · m_n(α_1, α_2, ...; β_1, β_2, ...)
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let order = 10;
    for _ in 0..25 {
        let (a, b) = random_jacobi(&mut rng, order / 2 + 1);
        let (na, nb) = random_jacobi(&mut rng, order / 2 + 1);
        let mphi = motzkin_moments(&a, &b, order);
        let mpsi = motzkin_moments(&na, &nb, order);
        let (big_r, r) = moments_to_twostate_cumulants(&mphi, &mpsi).unwrap();
        let v = VariableSpec::new("X", r, big_r);
        let shifted = motzkin_moments(&a[1..], &b[1..], order - 2);
        let lib_shift = shift_jacobi(&JacobiParams::new(a.clone(), b.clone()).unwrap()).unwrap();
        assert_eq!(lib_shift.alphas(), &a[1..]);
        for n in 0..=order - 2 {
            assert_eq!(phi_power(&v, n + 2, Filter::FirstLast), &b[0] * &shifted[n], "n = {n}");
        }
    }
}

#[test]
fn meixner_types_cover_the_catalog() {
    let expect = [
        MeixnerType::Wigner,
        MeixnerType::FreePoisson,
        MeixnerType::FreePascal,
        MeixnerType::FreeGamma,
        MeixnerType::PureFreeMeixner,
        MeixnerType::FreeBinomial,
    ];
    for (&(name, an, ad, bn, bd), kind) in CATALOG.iter().zip(expect) {
        let t = classify_meixner(&q(an, ad), &q(bn, bd)).unwrap();
        assert_eq!(t, kind);
        assert_eq!(t.label(), name);
        let law = catalog_law(name, 8).unwrap();
        assert_eq!(law.mu().alpha(0), q(an, ad));
        assert_eq!(law.mu().beta(0), q(bn, bd));
    }
    assert!(classify_meixner(&q(1, 1), &q(0, 1)).is_err());
    assert!(matches!(catalog_law("nope", 8), Err(LawError::UnknownLaw(_))));
}

#[test]
fn two_state_normal_jacobi_and_cumulants() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..10 {
        let (a, b) = (small_rational(&mut rng), positive_rational(&mut rng));
        let law = two_state_normal(a.clone(), b.clone(), 10).unwrap();
        let mut beta = vec![b.clone()];
        beta.extend(vec![q(1, 1); 5]);
        let mut alpha = vec![a.clone()];
        alpha.extend(vec![q(0, 1); 5]);
        assert_eq!(law.phi_moments(), &motzkin_moments(&alpha, &beta, 10)[..]);
        assert_eq!(law.psi_moments(), &motzkin_moments(&[], &vec![q(1, 1); 6], 10)[..]);
        let c = law.cumulants();
        assert_eq!((c.big_r(1), c.big_r(2), c.r(1), c.r(2)), (a, b, q(0, 1), q(1, 1)));
        assert!((3..=10).all(|k| c.big_r(k).is_zero() && c.r(k).is_zero()));
        law.check_consistency().unwrap();
    }
}

#[test]
fn convolution_powers_scale_the_jacobi_data() {
    // (a; b, 1, 1, ...)^{⊞_c t} has Jacobi data (at; bt, t, t, ...) and (0; t, t, ...).
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let order = 10;
    for _ in 0..10 {
        let (a, b, t) = (small_rational(&mut rng), positive_rational(&mut rng), positive_rational(&mut rng));
        let law = two_state_normal(a.clone(), b.clone(), order).unwrap();
        let power = cfree_power(&law, &t).unwrap();
        let mut mu_b = vec![&b * &t];
        mu_b.extend(vec![t.clone(); order / 2]);
        assert_eq!(power.phi_moments(), &motzkin_moments(&[&a * &t], &mu_b, order)[..]);
        assert_eq!(power.psi_moments(), &motzkin_moments(&[], &vec![t.clone(); order / 2 + 1], order)[..]);
        let direct = normal_power_law(&a, &b, &t, order).unwrap();
        assert_eq!(direct.phi_moments(), power.phi_moments());
        // s + t additivity
        let s = positive_rational(&mut rng);
        let left = cfree_convolve(&cfree_power(&law, &s).unwrap(), &power).unwrap();
        let right = cfree_power(&law, &(&s + &t)).unwrap();
        assert_eq!(left.phi_moments(), right.phi_moments());
        assert_eq!(left.psi_moments(), right.psi_moments());
    }
    let higher = TwoStateLaw::from_cumulants(None, &VariableSpec::new("X", vec![q(0, 1), q(1, 1), q(1, 1), q(0, 1)], vec![q(0, 1); 4])).unwrap();
    assert!(matches!(cfree_power(&higher, &q(2, 1)), Err(LawError::Scope(_))));
    assert!(cfree_power(&higher, &q(-1, 1)).is_err());
}

#[test]
fn fragments_recombine_into_the_normal_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..10 {
        let (a, b) = (small_rational(&mut rng), positive_rational(&mut rng));
        let alpha = Rational::new(rng.gen_range(1..=9), 10);
        let beta = Rational::one() - &alpha;
        let x = normal_power_law(&a, &b, &alpha, 10).unwrap();
        let y = normal_power_law(&a, &b, &beta, 10).unwrap();
        let sum = cfree_convolve(&x, &y).unwrap();
        let mut mu_b = vec![b.clone()];
        mu_b.extend(vec![q(1, 1); 5]);
        assert_eq!(sum.phi_moments(), &motzkin_moments(std::slice::from_ref(&a), &mu_b, 10)[..]);
        assert_eq!(sum.mu().alphas()[0], a);
        assert_eq!(sum.mu().betas(), &mu_b[..5]);
    }
}

#[test]
fn dilation_scales_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..10 {
        let (a, b) = random_jacobi(&mut rng, 5);
        let gamma = small_rational(&mut rng);
        let j = JacobiParams::new(a.clone(), b.clone()).unwrap();
        let m = motzkin_moments(&a, &b, 10);
        let scaled = moments_from_jacobi(&scale_jacobi(&j, &gamma), 10).unwrap();
        for n in 0..=10 {
            assert_eq!(scaled[n], gamma.pow(n as u32) * &m[n]);
        }
    }
}

#[test]
fn free_convolution_of_semicircles() {
    let wigner = JacobiParams::constant(q(0, 1), q(1, 1), 5);
    let sum = free_convolve(&wigner, &wigner, 10).unwrap();
    assert_eq!(sum.betas(), &vec![q(2, 1); 5][..]);
    assert!(sum.alphas().iter().all(Rational::is_zero));
}

#[test]
fn law_files_round_trip() {
    let law = catalog_law("free-pascal", 8).unwrap();
    let text = serde_json::to_string(&law.to_file()).unwrap();
    let file: LawFile = serde_json::from_str(&text).unwrap();
    let back = TwoStateLaw::from_file(file, 8).unwrap();
    assert_eq!(back.phi_moments(), law.phi_moments());
    assert_eq!(back.cumulants(), law.cumulants());
}
