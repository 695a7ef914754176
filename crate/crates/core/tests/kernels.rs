//! Truncated-kernel transforms against direct radial quadrature.

use num_complex::Complex64;
use proptest::prelude::*;
use volpot::kernels::*;
use volpot::quadrature::Tolerance;

fn specs() -> Vec<KernelSpec> {
    let mut v = Vec::new();
    for dim in [2, 3] {
        v.push(KernelSpec::laplace(dim));
        v.push(KernelSpec::helmholtz(dim, 2.0));
        v.push(KernelSpec::biharmonic(dim));
        v.push(KernelSpec::laplace_helmholtz(dim, 2.0));
        let h = if dim == 2 { [1.2, 0.5, 0.0] } else { [1.2, 0.5, -0.3] };
        v.push(KernelSpec::convected(dim, h));
    }
    v
}

fn along(spec: &KernelSpec, s: f64) -> Vec<f64> {
    // Direction chosen so that the convected shift is exercised off-axis.
    let d = if spec.dim == 2 { vec![0.6, 0.8] } else { vec![0.48, 0.6, 0.64] };
    d.into_iter().map(|c| c * s).collect()
}

fn agrees(got: Complex64, want: Complex64) -> bool {
    (got - want).norm() <= 1e-10 * want.norm() || (got - want).norm() <= 1e-12
}

fn oracle(spec: &KernelSpec, s_vec: &[f64]) -> Complex64 {
    radial_transform_oracle(spec, s_vec, Tolerance::default()).unwrap()
}

#[test]
fn transforms_match_quadrature_on_sample_frequencies() {
    for spec in specs() {
        for &s in &[0.0, 1e-9, 0.3, 1.1, 2.0 - 1e-8, 2.0 + 1e-8, 2.7, 9.0, 41.0, 150.0] {
            let mut s_vec = along(&spec, s);
            if spec.family == Family::ConvectedHelmholtz {
                // Measure |s - h| instead, so s = k means the shifted pole.
                let h = spec.h_vec.unwrap();
                for (a, b) in s_vec.iter_mut().zip(h) {
                    *a += b;
                }
            }
            let got = eval_spectral(&spec, &s_vec).unwrap();
            let want = oracle(&spec, &s_vec);
            assert!(agrees(got, want), "{} {}D s={s}: {got} vs {want}", spec.family, spec.dim);
        }
    }
}

#[test]
fn series_branches_match_quadrature_near_poles() {
    for spec in specs() {
        // Frequencies are measured from h for the convected kernel.
        let shift = |mut v: Vec<f64>| {
            if let Some(h) = spec.h_vec {
                for (a, b) in v.iter_mut().zip(h) {
                    *a += b;
                }
            }
            v
        };
        let s_vec = shift(along(&spec, 1e-7));
        let got = near_singularity_eval(&spec, &s_vec, Pole::Origin).unwrap();
        assert!(agrees(got, oracle(&spec, &s_vec)), "{} {}D origin", spec.family, spec.dim);
        if spec.family.needs_wavenumber() || spec.family == Family::ConvectedHelmholtz {
            for ds in [-1e-9, 0.0, 1e-9, 0.05] {
                let s_vec = shift(along(&spec, spec.k + ds));
                let got = near_singularity_eval(&spec, &s_vec, Pole::Wavenumber).unwrap();
                assert!(agrees(got, oracle(&spec, &s_vec)), "{} {}D k+{ds}", spec.family, spec.dim);
            }
        } else {
            assert!(near_singularity_eval(&spec, &s_vec, Pole::Wavenumber).is_err());
        }
    }
}

#[test]
fn physical_kernel_values() {
    let r = [0.3, 0.4];
    let g = eval_physical(&KernelSpec::laplace(2), &r).unwrap();
    assert!((g.re + 0.5f64.ln() / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert!(eval_physical(&KernelSpec::laplace(3), &[0.0; 3]).is_err());
    assert!(eval_physical(&KernelSpec::helmholtz(2, 1.0), &[0.0; 2]).is_err());
    assert_eq!(eval_physical(&KernelSpec::biharmonic(3), &[0.0; 3]).unwrap(), Complex64::default());
    // gk - g0 is smooth through the origin.
    for dim in [2, 3] {
        let spec = KernelSpec::laplace_helmholtz(dim, 3.0);
        let at0 = eval_physical(&spec, &vec![0.0; dim]).unwrap();
        let mut near = vec![0.0; dim];
        near[0] = 1e-7;
        let g = eval_physical(&spec, &near).unwrap();
        assert!((g - at0).norm() < 1e-6, "{dim}D: {g} vs {at0}");
    }
}

#[test]
fn truncation_boundary() {
    let spec = KernelSpec::helmholtz(3, 2.0);
    let l = spec.truncation;
    let inside = eval_physical(&spec, &[l, 0.0, 0.0]).unwrap();
    assert_eq!(eval_truncated(&spec, &[l, 0.0, 0.0]).unwrap(), 0.5 * inside);
    assert_eq!(eval_truncated(&spec, &[l + 1e-12, 0.0, 0.0]).unwrap(), Complex64::default());
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(eval_spectral(&KernelSpec::helmholtz(2, 0.0), &[1.0, 0.0]).is_err());
    assert!(eval_spectral(&KernelSpec::laplace(3).with_truncation(1.5), &[1.0, 0.0, 0.0]).is_err());
    assert!(eval_spectral(&KernelSpec::laplace(3), &[1.0, 0.0]).is_err());
    assert!(eval_spectral(&KernelSpec::new(Family::ConvectedHelmholtz, 2), &[1.0, 0.0]).is_err());
    assert!("convected".parse::<Family>().is_ok());
    assert!("poisson".parse::<Family>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convected_is_shifted_helmholtz(sx in -30.0f64..30.0, sy in -30.0f64..30.0, sz in -30.0f64..30.0) {
        let h = [1.3, -0.4, 2.2];
        let conv = KernelSpec::convected(3, h);
        let helm = KernelSpec::helmholtz(3, (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt());
        let s = [sx, sy, sz];
        let d = [sx - h[0], sy - h[1], sz - h[2]];
        let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        prop_assert_eq!(
            eval_spectral(&conv, &s).unwrap(),
            eval_spectral(&helm, &[dn, 0.0, 0.0]).unwrap()
        );
    }

    #[test]
    fn radial_kernels_depend_on_norm_only(a in 0.0f64..6.283, s in 0.0f64..80.0, k in 0.5f64..40.0) {
        for spec in [KernelSpec::helmholtz(2, k), KernelSpec::laplace_helmholtz(3, k)] {
            let v1: Vec<f64> = if spec.dim == 2 { vec![s * a.cos(), s * a.sin()] } else { vec![s * a.cos(), 0.0, s * a.sin()] };
            let mut v2 = vec![0.0; spec.dim];
            v2[0] = s;
            let g1 = eval_spectral(&spec, &v1).unwrap();
            let g2 = eval_spectral(&spec, &v2).unwrap();
            prop_assert!((g1 - g2).norm() <= 1e-12 * g2.norm().max(1e-300));
        }
    }

    #[test]
    fn wavenumber_branch_is_continuous(k in 0.8f64..60.0, side in prop::bool::ANY, dim in 2usize..4) {
        let spec = KernelSpec::helmholtz(dim, k);
        let edge = 0.25 / spec.truncation;
        let s = if side { k + edge } else { k - edge };
        let mut a = vec![0.0; dim];
        let mut b = vec![0.0; dim];
        a[0] = s * (1.0 - 1e-14);
        b[0] = s * (1.0 + 1e-14);
        let ga = eval_spectral(&spec, &a).unwrap();
        let gb = eval_spectral(&spec, &b).unwrap();
        prop_assert!((ga - gb).norm() <= 1e-11 * ga.norm(), "{} vs {}", ga, gb);
    }

    #[test]
    fn origin_branch_is_continuous(dim in 2usize..4, fam in 0usize..2) {
        let spec = if fam == 0 { KernelSpec::laplace(dim) } else { KernelSpec::biharmonic(dim) };
        let l = spec.truncation;
        let edge = match (fam, dim) { (0, 3) => 0.5, (1, 3) => 1.5, (0, _) => 1.0, _ => 3.0 } / l;
        let mut a = vec![0.0; dim];
        let mut b = vec![0.0; dim];
        a[0] = edge * (1.0 - 1e-14);
        b[0] = edge * (1.0 + 1e-14);
        let ga = eval_spectral(&spec, &a).unwrap();
        let gb = eval_spectral(&spec, &b).unwrap();
        prop_assert!((ga - gb).norm() <= 1e-12 * ga.norm());
    }
}
