//! Convolution paths against a straightforward padded-DFT reference.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use volpot::grid::*;
use volpot::kernels::KernelSpec;
use volpot::potential::*;

fn random_field(grid: GridSpec, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Field::new(grid, data).unwrap()
}

// Materialises the padded array and multiplier: the textbook route.
fn reference(spec: &KernelSpec, source: &Field, pad: usize, axis: Option<usize>) -> Field {
    let grid = source.grid();
    let lat = FreqLattice::new(grid, pad).unwrap();
    let mult = SpectralMultiplier::with_pad(spec, grid, pad).unwrap();
    let mut data = embed(source, &lat).unwrap();
    let shape = lat.shape();
    forward_dft(&mut data, &shape).unwrap();
    let values = mult.values();
    let p = lat.size();
    let deriv = axis.map(|a| (a, spectral_derivative_multiplier(&lat, a).unwrap()));
    for (flat, v) in data.iter_mut().enumerate() {
        *v *= values[flat];
        if let Some((a, ref m)) = deriv {
            let stride = p.pow((grid.dim() - 1 - a) as u32);
            *v *= m[(flat / stride) % p];
        }
    }
    inverse_dft(&mut data, &shape).unwrap();
    extract(&data, &lat).unwrap()
}

fn rel(a: &Field, b: &Field) -> f64 {
    relative_errors(a, b).unwrap().einf
}

fn specs(dim: usize) -> Vec<KernelSpec> {
    let h = if dim == 2 { [3.0, -1.0, 0.0] } else { [3.0, -1.0, 0.5] };
    vec![
        KernelSpec::laplace(dim),
        KernelSpec::helmholtz(dim, 5.0),
        KernelSpec::biharmonic(dim),
        KernelSpec::laplace_helmholtz(dim, 5.0),
        KernelSpec::convected(dim, h),
    ]
}

#[test]
fn pruned_engine_matches_padded_reference() {
    for (dim, n) in [(2, 16), (3, 8)] {
        let grid = GridSpec::new(dim, n).unwrap();
        let src = random_field(grid, 7);
        for spec in specs(dim) {
            let mut mult = SpectralMultiplier::new(&spec, grid).unwrap();
            let want = reference(&spec, &src, 4, None);
            let lazy = convolve_direct(&mult, &src).unwrap();
            assert!(rel(&lazy, &want) < 1e-13, "{} {dim}D", spec.family);
            assert!(mult.materialize());
            let cached = convolve_direct(&mult, &src).unwrap();
            assert!(rel(&cached, &lazy) < 1e-15);
            let grads = convolve_gradient(&mult, &src).unwrap();
            for (a, g) in grads.iter().enumerate() {
                let want = reference(&spec, &src, 4, Some(a));
                assert!(rel(g, &want) < 1e-13, "{} {dim}D axis {a}", spec.family);
            }
        }
    }
}

#[test]
fn table_is_the_impulse_response() {
    for (dim, n) in [(2, 16), (3, 8)] {
        let grid = GridSpec::new(dim, n).unwrap();
        for spec in specs(dim) {
            let table = precompute_table(&spec, grid).unwrap();
            let mult = SpectralMultiplier::new(&spec, grid).unwrap();
            let response = convolve_direct(&mult, &delta(grid)).unwrap();
            let scale = response.max_abs();
            for flat in 0..grid.len() {
                let l = grid.labels(flat);
                let t = table.t_value(&l[..dim]).unwrap();
                assert!((t - response.values()[flat]).norm() < 1e-13 * scale, "{}", spec.family);
            }
        }
    }
}

#[test]
fn precomputed_matches_direct() {
    for (dim, n) in [(2, 32), (3, 12)] {
        let grid = GridSpec::new(dim, n).unwrap();
        let src = random_field(grid, 11);
        for spec in specs(dim) {
            let table = precompute_table(&spec, grid).unwrap();
            let mult = SpectralMultiplier::new(&spec, grid).unwrap();
            let a = convolve_precomputed(&table, &src).unwrap();
            let b = convolve_direct(&mult, &src).unwrap();
            assert!(rel(&a, &b) < 1e-12, "{} {dim}D: {}", spec.family, rel(&a, &b));
            for axis in 0..dim {
                let gt = precompute_gradient_table(&spec, grid, axis).unwrap();
                let ga = convolve_precomputed(&gt, &src).unwrap();
                let gb = &convolve_gradient(&mult, &src).unwrap()[axis];
                assert!(rel(&ga, gb) < 1e-12, "{} {dim}D axis {axis}: {}", spec.family, rel(&ga, gb));
            }
        }
    }
}

#[test]
fn nystrom_matrix_reproduces_the_convolution() {
    let grid = GridSpec::new(2, 8).unwrap();
    let spec = KernelSpec::helmholtz(2, 3.0);
    let table = precompute_table(&spec, grid).unwrap();
    let src = random_field(grid, 3);
    let fast = convolve_precomputed(&table, &src).unwrap();
    for i in 0..grid.len() {
        let li = grid.labels(i);
        let mut acc = Complex64::default();
        for j in 0..grid.len() {
            let lj = grid.labels(j);
            acc += table.nystrom_entry(&li[..2], &lj[..2]).unwrap() * src.values()[j];
        }
        assert!((acc - fast.values()[i]).norm() < 1e-13 * fast.max_abs());
    }
    assert!(table.nystrom_entry(&[9, 0], &[0, 0]).is_err());
}

#[test]
fn tables_survive_export_and_import() {
    let dir = std::env::temp_dir().join(format!("volpot-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (i, (spec, axis)) in [
        (KernelSpec::laplace(3), None),
        (KernelSpec::helmholtz(3, 2.0), Some(1)),
        (KernelSpec::convected(3, [1.0, 2.0, 0.0]), None),
    ]
    .into_iter()
    .enumerate()
    {
        let grid = GridSpec::new(3, 6).unwrap();
        let table = match axis {
            Some(a) => precompute_gradient_table(&spec, grid, a).unwrap(),
            None => precompute_table(&spec, grid).unwrap(),
        };
        let path = dir.join(format!("t{i}.bin"));
        export_table(&table, &path).unwrap();
        let back = import_table(&path).unwrap();
        assert_eq!(back.t_values(), table.t_values());
        let src = random_field(grid, 5);
        let a = convolve_precomputed(&table, &src).unwrap();
        let b = convolve_precomputed(&back, &src).unwrap();
        assert!(rel(&a, &b) < 1e-14);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn derivative_multiplier_differentiates_periodic_samples() {
    let grid = GridSpec::new(2, 16).unwrap();
    let lat = FreqLattice::new(grid, 2).unwrap();
    let p = lat.size();
    // exp(2 pi i x) sampled over the whole periodic padded domain of length 2.
    let x = |k: usize| lat.grid().h() * (k as i64 - (p / 2) as i64) as f64;
    let mut data: Vec<Complex64> = (0..p * p)
        .map(|flat| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x(flat / p)))
        .collect();
    let want: Vec<Complex64> = data.iter().map(|v| v * Complex64::new(0.0, 2.0 * std::f64::consts::PI)).collect();
    forward_dft(&mut data, &[p, p]).unwrap();
    let m = spectral_derivative_multiplier(&lat, 0).unwrap();
    for (flat, v) in data.iter_mut().enumerate() {
        *v *= m[flat / p];
    }
    inverse_dft(&mut data, &[p, p]).unwrap();
    for (a, b) in data.iter().zip(&want) {
        assert!((a - b).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn convolution_is_linear(seed in 0u64..1000, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let grid = GridSpec::new(2, 12).unwrap();
        let mult = SpectralMultiplier::new(&KernelSpec::helmholtz(2, 4.0), grid).unwrap();
        let f = random_field(grid, seed);
        let g = random_field(grid, seed + 1);
        let combo = f.zip_map(&g, |x, y| a * x + b * y).unwrap();
        let lhs = convolve_direct(&mult, &combo).unwrap();
        let cf = convolve_direct(&mult, &f).unwrap();
        let cg = convolve_direct(&mult, &g).unwrap();
        let rhs = cf.zip_map(&cg, |x, y| a * x + b * y).unwrap();
        prop_assert!((relative_errors(&lhs, &rhs).unwrap().einf) < 1e-13);
    }

    #[test]
    fn radial_tables_are_even(jx in -8i64..=8, jy in -8i64..=8) {
        let grid = GridSpec::new(2, 8).unwrap();
        let t = precompute_table(&KernelSpec::laplace(2), grid).unwrap();
        let g = precompute_gradient_table(&KernelSpec::laplace(2), grid, 0).unwrap();
        prop_assert_eq!(t.t_value(&[jx, jy]), t.t_value(&[-jx, -jy]));
        prop_assert_eq!(g.t_value(&[jx, jy]).map(|v| -v), g.t_value(&[-jx, jy]));
    }
}

// Band-limited lattice Green's function (2π)^-3 ∫_{[-π,π]^3} e^{i s_1 j} / |s|^2 ds,
// computed independently by nested adaptive quadrature, scaled by 4πj.
#[test]
fn laplace_table_is_the_band_limited_green_function() {
    let frozen = [(5, 1.0220672691957366), (6, 0.9815137050767304), (7, 1.0158963570986534), (32, 0.9964925013196303)];
    let grid = GridSpec::new(3, 64).unwrap();
    let h = grid.h();
    let table = precompute_table(&KernelSpec::laplace(3), grid).unwrap();
    for (j, want) in frozen {
        let got = table.t_value(&[j, 0, 0]).unwrap().re * 4.0 * std::f64::consts::PI * j as f64 / (h * h);
        assert!((got - want).abs() < 5e-4, "j={j}: {got} vs {want}");
    }
}
