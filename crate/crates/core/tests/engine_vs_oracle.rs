mod oracle;

use cfree::cumulants::{
    moments_to_free_cumulants, moments_to_twostate_cumulants, phi_k_partial, phi_moment, phi_moments,
    phi_parallel, psi_moment, psi_moments, CumulantTable, Letter, VariableSpec, Word,
};
use cfree::rational::q;
use cfree::Rational;
use oracle::{phi_power, phi_word, psi_power, psi_word, random_variable, small_rational, Filter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 3] = ["X", "Y", "Z"];

fn random_letter(rng: &mut impl Rng, vars: usize) -> (Letter, oracle::Letter) {
    let mut lib = Letter::zero();
    let mut orc = Vec::new();
    for (i, name) in NAMES.iter().enumerate().take(vars) {
        if rng.gen_bool(0.6) {
            let c = small_rational(rng);
            lib = lib.plus(*name, c.clone());
            orc.push((i, c));
        }
    }
    (lib, orc)
}

fn random_word(rng: &mut impl Rng, vars: usize, len: usize) -> (Word, Vec<oracle::Letter>) {
    let (lib, orc): (Vec<_>, Vec<_>) = (0..len).map(|_| random_letter(rng, vars)).unzip();
    (Word::new(lib), orc)
}

fn random_table(rng: &mut impl Rng, vars: usize, order: usize) -> (CumulantTable, Vec<VariableSpec>) {
    let specs: Vec<VariableSpec> = NAMES[..vars]
        .iter()
        .map(|n| random_variable(rng, n, order))
        .collect();
    (CumulantTable::new(specs.clone()).unwrap(), specs)
}

#[test]
fn mixed_words_match_partition_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..60 {
        let vars = 1 + trial % 3;
        let len = rng.gen_range(1..=7);
        let (t, specs) = random_table(&mut rng, vars, len);
        let (w, ow) = random_word(&mut rng, vars, len);
        assert_eq!(phi_moment(&w, &t).unwrap(), phi_word(&ow, &specs, Filter::All), "phi, trial {trial}");
        assert_eq!(psi_moment(&w, &t).unwrap(), psi_word(&ow, &specs), "psi, trial {trial}");
        if len >= 2 {
            assert_eq!(
                phi_parallel(&w, &t).unwrap(),
                phi_word(&ow, &specs, Filter::FirstLast),
                "first-last, trial {trial}"
            );
        }
        let k = rng.gen_range(1..=len);
        assert_eq!(
            phi_k_partial(k, &w, &t).unwrap(),
            phi_word(&ow, &specs, Filter::FirstK(k)),
            "phi_{k}, trial {trial}"
        );
    }
}

#[test]
fn single_variable_moments_match_census() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let v = random_variable(&mut rng, "X", 10);
        let phi = phi_moments(&v, 10).unwrap();
        let psi = psi_moments(&v, 10).unwrap();
        for n in 0..=10 {
            assert_eq!(phi[n], phi_power(&v, n, Filter::All));
            assert_eq!(psi[n], psi_power(&v, n));
        }
    }
}

#[test]
fn moments_are_multilinear_in_each_slot() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..25 {
        let (t, _) = random_table(&mut rng, 2, 6);
        let len = rng.gen_range(2..=6);
        let (w, _) = random_word(&mut rng, 2, len);
        let slot = rng.gen_range(0..len);
        let (extra, _) = random_letter(&mut rng, 2);
        let (s, c) = (small_rational(&mut rng), small_rational(&mut rng));
        let replace = |l: Letter| {
            let mut letters = w.letters().to_vec();
            letters[slot] = l;
            Word::new(letters)
        };
        let old = &w.letters()[slot];
        let mut combo = Letter::zero();
        for name in ["X", "Y"] {
            let value = &(&s * &old.coefficient(name)) + &(&c * &extra.coefficient(name));
            combo = combo.plus(name, value);
        }
        for f in [phi_moment, psi_moment] {
            let lhs = f(&replace(combo.clone()), &t).unwrap();
            let rhs = &s * &f(&w, &t).unwrap() + &c * &f(&replace(extra.clone()), &t).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn mixed_cumulants_vanish_across_variables() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let (t, specs) = random_table(&mut rng, 2, 4);
        let (x, y) = (Letter::var("X"), Letter::var("Y"));
        let xy = Word::new(vec![x.clone(), y.clone()]);
        assert_eq!(psi_moment(&xy, &t).unwrap(), specs[0].r(1) * specs[1].r(1));
        assert_eq!(phi_moment(&xy, &t).unwrap(), specs[0].big_r(1) * specs[1].big_r(1));
        // φ(XYX): the Y between the X's is inner when the X's pair up.
        let xyx = Word::new(vec![x.clone(), y, x]);
        let expect = specs[0].big_r(1).pow(2) * specs[1].big_r(1) + specs[0].big_r(2) * specs[1].r(1);
        assert_eq!(phi_moment(&xyx, &t).unwrap(), expect);
    }
}

#[test]
fn third_partial_of_fifth_power() {
    // φ_3(X⁵) = R_3 φ(X²) + R_4 φ(X) + R_4 ψ(X) + R_5
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let v = random_variable(&mut rng, "X", 5);
        let t = CumulantTable::single(v.clone());
        let x5 = Word::power(&Letter::var("X"), 5);
        let expect = v.big_r(3) * phi_power(&v, 2, Filter::All)
            + v.big_r(4) * phi_power(&v, 1, Filter::All)
            + v.big_r(4) * psi_power(&v, 1)
            + v.big_r(5);
        assert_eq!(phi_k_partial(3, &x5, &t).unwrap(), expect);
        assert_eq!(phi_power(&v, 5, Filter::FirstK(3)), expect);
    }
}

#[test]
fn first_last_of_fifth_power() {
    // φ_∥(X⁵) = R_2ψ(X³) + 2R_3ψ(X²) + R_3ψ(X)² + 3R_4ψ(X) + R_5
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let v = random_variable(&mut rng, "X", 5);
        let t = CumulantTable::single(v.clone());
        let x5 = Word::power(&Letter::var("X"), 5);
        let p = |n| psi_power(&v, n);
        let expect = v.big_r(2) * p(3)
            + q(2, 1) * v.big_r(3) * p(2)
            + v.big_r(3) * p(1).pow(2)
            + q(3, 1) * v.big_r(4) * p(1)
            + v.big_r(5);
        assert_eq!(phi_parallel(&x5, &t).unwrap(), expect);
        assert_eq!(phi_power(&v, 5, Filter::FirstLast), expect);
    }
}

#[test]
fn proportional_pair_word_identities() {
    // With βR_k(X) = αR_k(Y), βr_k(X) = αr_k(Y), D = βX - αY, S = X + Y:
    // φ(D²Sⁿ) = αβ φ_2(S^{n+2}) and φ(D Sⁿ D) = αβ φ_∥(S^{n+2}).
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..12 {
        let alpha = Rational::new(rng.gen_range(1..=5), 6);
        let beta = Rational::one() - &alpha;
        let s = random_variable(&mut rng, "S", 9);
        let x = s.scaled_cumulants(&alpha).renamed("X");
        let y = s.scaled_cumulants(&beta).renamed("Y");
        let specs = vec![x, y];
        let d: oracle::Letter = vec![(0, beta.clone()), (1, -alpha.clone())];
        let sum: oracle::Letter = vec![(0, Rational::one()), (1, Rational::one())];
        let ab = &alpha * &beta;
        for n in 0..=5 {
            let mut square = vec![d.clone(), d.clone()];
            square.extend(std::iter::repeat_n(sum.clone(), n));
            let mut sandwich = vec![d.clone()];
            sandwich.extend(std::iter::repeat_n(sum.clone(), n));
            sandwich.push(d.clone());
            assert_eq!(phi_word(&square, &specs, Filter::All), &ab * &phi_power(&s, n + 2, Filter::FirstK(2)));
            assert_eq!(
                phi_word(&sandwich, &specs, Filter::All),
                &ab * &phi_power(&s, n + 2, Filter::FirstLast)
            );
        }
    }
}

#[test]
fn moment_inversion_recovers_cumulants() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..20 {
        let v = random_variable(&mut rng, "X", 8);
        let phi: Vec<Rational> = (0..=8).map(|n| phi_power(&v, n, Filter::All)).collect();
        let psi: Vec<Rational> = (0..=8).map(|n| psi_power(&v, n)).collect();
        assert_eq!(moments_to_free_cumulants(&psi).unwrap(), v.free);
        let (big_r, r) = moments_to_twostate_cumulants(&phi, &psi).unwrap();
        assert_eq!(big_r, v.two_state);
        assert_eq!(r, v.free);
    }
}

#[test]
fn semicircle_and_free_poisson_moments() {
    let mut second = vec![q(0, 1); 12];
    second[1] = q(1, 1);
    let wigner = VariableSpec::new("X", second.clone(), second);
    let m = psi_moments(&wigner, 12).unwrap();
    for (n, x) in m.iter().enumerate() {
        let expect = if n % 2 == 0 { oracle::catalan(n / 2) } else { Rational::zero() };
        assert_eq!(*x, expect);
    }
    // All free cumulants 1: ψ(X^n) counts NC(n).
    let poisson = VariableSpec::new("X", vec![q(1, 1); 9], vec![q(1, 1); 9]);
    let m = psi_moments(&poisson, 9).unwrap();
    for (n, x) in m.iter().enumerate() {
        assert_eq!(*x, oracle::catalan(n));
    }
}
