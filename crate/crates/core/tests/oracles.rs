//! Independent recomputations in f64 or by brute force, compared against
//! the exact library results.

use proptest::prelude::*;

use spectral_sumrules::exactnum::{int, rat, to_f64, Rational};
use spectral_sumrules::frames::{frame_check, sum_rule_sides};
use spectral_sumrules::riesz::{riesz_mean, weyl_constant_sq};
use spectral_sumrules::spectrum::{cross_multiplicity, cross_spectrum, CrossFamily, CrossSpace};
use spectral_sumrules::sumrule::{check_identity, p_poly};
use spectral_sumrules::torus::{torus_spectrum, DualVector, TorusModuli};

const REL_TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * (1.0 + a.abs().max(b.abs()))
}

fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Dimension of degree-l harmonic polynomials in d + 1 variables.
fn harmonic_dim(d: u64, l: u64) -> u128 {
    let top = choose(l + d, d);
    if l < 2 {
        top
    } else {
        top - choose(l + d - 2, d)
    }
}

#[test]
fn sphere_multiplicities_match_harmonic_polynomials() {
    for d in 2..=12u32 {
        let space = CrossSpace::new(CrossFamily::Sphere, d).unwrap();
        for l in 0..=25u64 {
            let m = cross_multiplicity(&space, l).unwrap();
            assert_eq!(m.to_string(), harmonic_dim(d as u64, l).to_string(), "d={d} l={l}");
        }
    }
}

#[test]
fn projective_space_keeps_even_harmonics() {
    for d in 2..=8u32 {
        let rp = CrossSpace::new(CrossFamily::RealProjective, d).unwrap();
        for l in 0..=12u64 {
            let m = cross_multiplicity(&rp, l).unwrap();
            assert_eq!(m.to_string(), harmonic_dim(d as u64, 2 * l).to_string());
        }
    }
}

/// r_2(n) = 4 (d_1(n) - d_3(n)).
fn two_squares(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let (mut d1, mut d3) = (0i64, 0i64);
    for k in (1..=n).filter(|k| n.is_multiple_of(*k)) {
        match k % 4 {
            1 => d1 += 1,
            3 => d3 += 1,
            _ => {}
        }
    }
    (4 * (d1 - d3)) as u64
}

#[test]
fn square_torus_shells_match_jacobi() {
    let ts = torus_spectrum(&TorusModuli::square(), &int(200)).unwrap();
    for level in ts.spectrum.levels() {
        let n: u64 = level.value.to_integer().try_into().unwrap();
        assert_eq!(level.mult, two_squares(n), "nu = {n}");
    }
    let represented = (0..=200).filter(|&n| two_squares(n) > 0).count();
    assert_eq!(ts.spectrum.levels().len(), represented);
}

/// f64 norm of n e1* + m e2* for the dual basis of (1, 0), (a, b).
fn dual_norm_sq(a: f64, b: f64, v: (i64, i64)) -> f64 {
    let x = v.0 as f64;
    let y = (v.1 as f64 - v.0 as f64 * a) / b;
    x * x + y * y
}

fn moduli_f64(m: &TorusModuli) -> (f64, f64) {
    (to_f64(m.a()), to_f64(m.b_sq()).sqrt())
}

fn brute_levels(m: &TorusModuli, nu_max: f64, box_r: i64) -> Vec<(f64, u64)> {
    let (a, b) = moduli_f64(m);
    let mut norms: Vec<f64> = Vec::new();
    for n in -box_r..=box_r {
        for k in -box_r..=box_r {
            let v = dual_norm_sq(a, b, (n, k));
            if v <= nu_max + 1e-9 {
                norms.push(v);
            }
        }
    }
    norms.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, u64)> = Vec::new();
    for v in norms {
        match out.last_mut() {
            Some((last, c)) if (v - *last).abs() < 1e-9 => *c += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

#[test]
fn torus_spectra_match_box_enumeration() {
    let tori = [
        TorusModuli::square(),
        TorusModuli::equilateral(),
        TorusModuli::rectangular(rat(9, 4)).unwrap(),
        TorusModuli::new(rat(1, 3), rat(5, 4)).unwrap(),
    ];
    for m in &tori {
        let exact = torus_spectrum(m, &int(12)).unwrap().spectrum;
        let brute = brute_levels(m, 12.0, 40);
        assert_eq!(exact.levels().len(), brute.len(), "{m}");
        for (lv, (v, c)) in exact.levels().iter().zip(&brute) {
            assert!(close(to_f64(&lv.value), *v), "{m}: {} vs {v}", lv.value);
            assert_eq!(lv.mult, *c, "{m} at {v}");
        }
    }
}

#[test]
fn p_poly_matches_direct_product_sum() {
    let s = cross_spectrum(&CrossSpace::new(CrossFamily::ComplexProjective, 4).unwrap(), 6).unwrap();
    let lambdas = s.flatten(40).unwrap();
    let lambda1 = to_f64(s.first_positive_level().unwrap());
    let d = 4.0;
    let p = p_poly(&lambdas, 4, s.first_positive_level().unwrap()).unwrap();
    for z in [-3.0, 0.5, 7.0, 31.25] {
        let direct: f64 = lambdas
            .iter()
            .map(to_f64)
            .map(|l| (z - l) * (z - (1.0 + 4.0 / d) * l - lambda1))
            .sum();
        let zr = Rational::from_float(z).unwrap();
        assert!(close(to_f64(&p.eval(&zr)), direct), "z = {z}");
    }
}

#[test]
fn identity_residual_matches_float_evaluation() {
    // P_N and Q_N rebuilt from scratch at a CROSS gap.
    let s = cross_spectrum(&CrossSpace::new(CrossFamily::Sphere, 5).unwrap(), 8).unwrap();
    let eig: Vec<f64> = s.flatten(s.total()).unwrap().iter().map(to_f64).collect();
    let lambda1 = eig.iter().copied().find(|&x| x > 0.0).unwrap();
    let n = s.cumulative_counts()[4] as usize;
    let (ln, ln1) = (eig[n - 1], eig[n]);
    let r = check_identity(&s, 5, n as u64).unwrap();
    assert!(r.holds);
    for z in [0.0, 1.0, 50.0] {
        let p: f64 = eig[..n].iter().map(|l| (z - l) * (z - 1.8 * l - lambda1)).sum();
        let q = n as f64 * (z - ln) * (z - ln1);
        assert!(close(p, q), "z = {z}: {p} vs {q}");
    }
}

#[test]
fn frame_operator_matches_float_matrix() {
    let tori = [
        TorusModuli::square(),
        TorusModuli::equilateral(),
        TorusModuli::rectangular(int(3)).unwrap(),
        TorusModuli::new(rat(1, 5), rat(6, 5)).unwrap(),
    ];
    for m in &tori {
        let (a, b) = moduli_f64(m);
        for (nu, count) in brute_levels(m, 6.0, 10).into_iter().skip(1) {
            let nu_exact = torus_spectrum(m, &int(6))
                .unwrap()
                .spectrum
                .levels()
                .iter()
                .map(|l| l.value.clone())
                .find(|v| close(to_f64(v), nu))
                .unwrap();
            let r = frame_check(m, &nu_exact).unwrap();
            assert_eq!(r.multiplicity, count);
            let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
            for n in -10i64..=10 {
                for k in -10i64..=10 {
                    if (dual_norm_sq(a, b, (n, k)) - nu).abs() > 1e-9 {
                        continue;
                    }
                    let x = n as f64;
                    let y = (k as f64 - n as f64 * a) / b;
                    sxx += x * x;
                    syy += y * y;
                    sxy += x * y;
                }
            }
            assert!(close(to_f64(&r.s_xx), sxx), "{m} nu={nu}");
            assert!(close(to_f64(&r.s_yy), syy), "{m} nu={nu}");
            let tight_f = sxy.abs() < 1e-9 && (sxx - syy).abs() < 1e-9;
            assert_eq!(r.tight, tight_f, "{m} nu={nu}");
            // trace equals M ν
            assert!(close(sxx + syy, count as f64 * nu));
        }
    }
}

#[test]
fn sum_rule_sides_match_brute_double_loop() {
    let cases = [
        (TorusModuli::square(), DualVector::new(1, 1), 2usize),
        (TorusModuli::equilateral(), DualVector::new(1, 0), 3),
        (TorusModuli::rectangular(int(2)).unwrap(), DualVector::new(0, 1), 2),
    ];
    for (m, q, levels) in cases {
        let sides = sum_rule_sides(&m, q, levels, None).unwrap();
        let (a, b) = moduli_f64(&m);
        let coords = |v: (i64, i64)| (v.0 as f64, (v.1 as f64 - v.0 as f64 * a) / b);
        let top = to_f64(&sides.lambda_n);
        let all: Vec<(i64, i64)> = (-12i64..=12).flat_map(|n| (-12i64..=12).map(move |k| (n, k))).collect();
        let inside: Vec<(i64, i64)> = all.iter().copied().filter(|&v| dual_norm_sq(a, b, v) <= top + 1e-9).collect();
        assert_eq!(inside.len() as u64, sides.n);
        let qc = coords((q.n, q.m));
        let nu_q = qc.0 * qc.0 + qc.1 * qc.1;
        for z in [-1.0, 0.75, 4.0, 10.0] {
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            for &j in &inside {
                let pj = coords(j);
                let lj = dual_norm_sq(a, b, j);
                let ip = pj.0 * qc.0 + pj.1 * qc.1;
                lhs += nu_q * (z - lj).powi(2) - (z - lj) * (nu_q * nu_q + 4.0 * ip * ip);
                // |⟨e^{iq·x} e_j, e_k⟩|² = 1 exactly when p_k = p_j ± q
                for &k in &all {
                    let lk = dual_norm_sq(a, b, k);
                    if lk <= top + 1e-9 {
                        continue;
                    }
                    let hits = [(j.0 + q.n, j.1 + q.m), (j.0 - q.n, j.1 - q.m)]
                        .iter()
                        .filter(|&&s| s == k)
                        .count();
                    rhs += hits as f64 * (lk - lj) * (z - lj) * (z - lk);
                }
            }
            let zr = Rational::from_float(z).unwrap();
            assert!(close(to_f64(&sides.lhs.eval(&zr)), lhs), "{m} z={z}");
            assert!(close(to_f64(&sides.rhs_symmetrized.eval(&zr)), rhs), "{m} z={z}");
            assert!(close(lhs, rhs / 2.0), "{m} z={z}: {lhs} vs {rhs}");
        }
    }
}

fn gamma_half_integer(x2: u32) -> f64 {
    // Γ(x2 / 2) by recurrence from Γ(1) or Γ(1/2)
    let (mut g, mut x) = if x2.is_multiple_of(2) { (1.0, 1.0) } else { (std::f64::consts::PI.sqrt(), 0.5) };
    while 2.0 * x < x2 as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

#[test]
fn weyl_constant_matches_gamma() {
    let pi = std::f64::consts::PI;
    for d in 1..=12u32 {
        let g = gamma_half_integer(6 + d);
        let expected = 4.0 / ((4.0 * pi).powi(d as i32) * g * g);
        let got = weyl_constant_sq(d).to_f64();
        assert!(close(got, expected), "d={d}: {got} vs {expected}");
    }
}

proptest! {
    #[test]
    fn riesz_mean_matches_eigenvalue_sum(num in 0i64..400, sigma in 0u32..4) {
        let s = cross_spectrum(&CrossSpace::new(CrossFamily::Sphere, 3).unwrap(), 16).unwrap();
        let z = rat(num, 2).min(s.top().clone());
        let direct: f64 = s
            .flatten(s.total())
            .unwrap()
            .iter()
            .map(to_f64)
            .filter(|&x| x < to_f64(&z))
            .map(|x| (to_f64(&z) - x).powi(sigma as i32))
            .sum();
        let got = to_f64(&riesz_mean(&s, sigma, &z).unwrap());
        prop_assert!(close(got, direct), "{} vs {}", got, direct);
    }
}
