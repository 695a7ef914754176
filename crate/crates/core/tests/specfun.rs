//! Special functions against high-precision reference values.

use num_complex::Complex64;
use proptest::prelude::*;
use volpot::specfun::*;

/// x, J0, J1, Y0, Y1
const REAL_BESSEL: &[[f64; 5]] = &[
    [0.001, 0.9999997500000156, 0.0004999999375000026, -4.471416611375923, -636.6221672311394],
    [0.1, 0.99750156206604, 0.049937526036242, -1.5342386513503667, -6.4589510947020266],
    [0.5, 0.9384698072408129, 0.2422684576748739, -0.44451873350670656, -1.471472392670243],
    [1.0, 0.7651976865579666, 0.4400505857449335, 0.08825696421567696, -0.7812128213002887],
    [1.9999, 0.22394845194430277, 0.5767312529177935, 0.510364966587098, -0.10708882173811195],
    [2.0, 0.22389077914123567, 0.5767248077568734, 0.5103756726497451, -0.10703243154093754],
    [2.5, -0.048383776468198, 0.49709410246427405, 0.4980703596152319, 0.1459181379667858],
    [5.0, -0.1775967713143383, -0.32757913759146523, -0.30851762524903376, 0.14786314339122683],
    [7.5, 0.2663396578803784, 0.1352484275797055, 0.11731328614820863, -0.25912851048611624],
    [8.0, 0.1716508071375539, 0.23463634685391463, 0.22352148938756622, -0.1580604617312475],
    [10.0, -0.24593576445134835, 0.04347274616886144, 0.055671167283599395, 0.24901542420695388],
    [15.0, -0.014224472826780772, 0.20510403861352275, 0.20546429603891828, 0.02107362803687351],
    [20.0, 0.16702466434058316, 0.06683312417585005, 0.06264059680938383, -0.1655116143625213],
    [24.99, 0.09500823696754812, -0.1263569850078052, -0.12823154988645105, -0.09759184210201896],
    [25.0, 0.09626678327595811, -0.1253502495802899, -0.12724943226800614, -0.09882996478323741],
    [25.01, 0.09751520159319571, -0.12433140440396809, -0.1262549851251684, -0.10005772718567968],
    [30.0, -0.08636798358104021, -0.11875106261662294, -0.11729573168666403, 0.08442557066174723],
    [50.0, 0.055812327669251816, -0.09751182812517514, -0.09806499547007708, -0.05679566856201477],
    [100.0, 0.019985850304223122, -0.07714535201411216, -0.07724431336508315, -0.020372312002759792],
    [188.5, 0.04124801552519959, -0.04082827818420367, -0.040937544587115744, -0.04135674751397456],
    [1000.0, 0.024786686152420176, 0.004728311907089524, 0.0047159179776228135, -0.024784331292351778],
];

/// re, im, Re H0, Im H0
const COMPLEX_HANKEL: &[[f64; 4]] = &[
    [0.5, 0.3, 0.5520952660421328, -0.42190526516640875],
    [3.0, -0.5, -0.4778175234871061, 0.5839591884203303],
    [3.0, 0.5, -0.13725451247049944, 0.23746229686471723],
    [10.0, 1.4, -0.05916702631378195, 0.017769917939458944],
    [10.0, 1.6, -0.04821719342480433, 0.014992100949838003],
    [16.9, 2.0, -0.02464646082656823, -0.008732471870030683],
    [5.0, 5.0, -0.0015664696039715765, -0.0012383292724065576],
    [20.0, -3.0, 3.2367214329467084, 1.4975369309211946],
    [-5.0, 0.0, 0.1775967713143383, -0.30851762524903376],
    [0.3, -2.0, 4.400438879783023, 0.8758746302024419],
    [2.0, 10.0, 9.699309551357827e-06, 5.627104661393733e-06],
    [1.0, 16.0, 1.908938334705139e-08, -1.1443926074669671e-08],
    [-6.2, 3.1, -0.005951524234578192, -0.012155600989035493],
    [-6.2, -3.1, 5.389565290683489, 4.0965505584555135],
    [12.0, -0.9, 0.13785609374917393, -0.5488738467079896],
    [0.0, 3.0, 0.0, -0.02211585537455569],
    [18.0, 8.0, -1.6561087343939044e-05, -5.782201035662469e-05],
    [-0.06, -3.1, 10.576310244062158, -0.538549179175882],
];

/// re, im, Re erf, Im erf
const COMPLEX_ERF: &[[f64; 4]] = &[
    [0.3, 0.2, 0.34123748147213856, 0.20852883788276888],
    [1.5, 1.5, 0.8817385339112497, -0.23124007509130207],
    [3.0, 0.5, 1.0000280653614764, -2.6284897222588233e-07],
    [-4.0, 2.0, -1.0000005652170028, -5.131005296081877e-07],
    [0.1, 5.0, 6817477771.513837, 4581362884.052351],
    [2.0, -7.0, 1.4447679985378688e+18, 2.315600827015349e+18],
    [-12.3, 0.22, -1.0, 1.1391317553998925e-46],
    [-12.3, 3.5, -1.0, -3.91851696895693e-46],
    [0.0, 3.0, 0.0, 1629.9946226015657],
    [10.0, 20.0, -2.5769367545026e+128, -4.172289184686091e+128],
    [0.5, -25.0, -7.270643102112193e+268, -4.722105509990288e+269],
    [1.9, 0.1, 0.9933663169275709, 0.002989306694909931],
    [2.1, 0.1, 0.9973057695999356, 0.0013359405166391604],
];

/// x, Ei, E1, Ein
const EXPINT: &[[f64; 4]] = &[
    [1e-06, -13.238293893062492, 13.23829589306249, 9.999997500000556e-07],
    [0.1, -1.6228128139692766, 1.8229239584193906, 0.09755453032687784],
    [0.5, 0.4542199048631736, 0.5597735947761608, 0.44384207911774837],
    [1.0, 1.8951178163559368, 0.21938393439552029, 0.7965995992970532],
    [1.5, 3.301285449129798, 0.10001958240663265, 1.08270035541633],
    [2.0, 4.95423435600189, 0.04890051070806112, 1.3192633561695393],
    [5.0, 40.18527535580318, 0.0011482955912753257, 2.1878018729269084],
    [10.0, 2492.2289762418777, 4.156968929685325e-06, 2.879804914864508],
    [39.0, 2280446200301902.5, 2.888779301522701e-19, 4.240777311031179],
    [41.0, 1.6006649143245042e+16, 3.723166776459978e-20, 4.290787731605841],
    [100.0, 2.71555274485388e+41, 3.683597761682032e-46, 5.182385850889625],
];

fn close(got: f64, want: f64, rel: f64, abs: f64) -> bool {
    (got - want).abs() <= rel * want.abs() + abs
}

#[test]
fn real_bessel_reference_values() {
    for row in REAL_BESSEL {
        let [x, j0, j1, y0, y1] = *row;
        let b = bessel01(x).unwrap();
        // Absolute floor relative to the envelope sqrt(2/(pi x)) near zeros.
        let floor = 2e-15 * (2.0 / (std::f64::consts::PI * x)).sqrt().min(1.0);
        assert!(close(b.j0, j0, 1e-13, floor), "J0({x}) = {} vs {j0}", b.j0);
        assert!(close(b.j1, j1, 1e-13, floor), "J1({x}) = {} vs {j1}", b.j1);
        assert!(close(b.y0, y0, 1e-13, floor), "Y0({x}) = {} vs {y0}", b.y0);
        assert!(close(b.y1, y1, 1e-13, floor), "Y1({x}) = {} vs {y1}", b.y1);
        assert!(close(bessel_j0(x), j0, 1e-13, floor));
        assert!(close(bessel_j1(-x), -j1, 1e-13, floor));
    }
}

#[test]
fn complex_hankel_reference_values() {
    for row in COMPLEX_HANKEL {
        let [re, im, hr, hi] = *row;
        let want = Complex64::new(hr, hi);
        let got = hankel1_0_complex(Complex64::new(re, im)).unwrap();
        assert!(
            (got - want).norm() <= 1e-12 * want.norm(),
            "H0({re}+{im}i) = {got} vs {want}"
        );
    }
}

#[test]
fn complex_erf_reference_values() {
    for row in COMPLEX_ERF {
        let [re, im, wr, wi] = *row;
        let want = Complex64::new(wr, wi);
        let got = erf_complex(Complex64::new(re, im)).unwrap();
        assert!(
            (got - want).norm() <= 1e-13 * want.norm(),
            "erf({re}+{im}i) = {got} vs {want}"
        );
    }
}

#[test]
fn exponential_integral_reference_values() {
    for row in EXPINT {
        let [x, ei_v, e1_v, ein_v] = *row;
        assert!(close(ei(x).unwrap(), ei_v, 1e-13, 0.0), "Ei({x})");
        assert!(close(e1(x).unwrap(), e1_v, 1e-13, 0.0), "E1({x})");
        assert!(close(ein(x), ein_v, 1e-13, 0.0), "Ein({x})");
    }
}

#[test]
fn regularised_exponential_integrals() {
    // Positive-coefficient series: sum x^n / (n n!) at 1/2.
    assert!((ei_regular(0.5) - 0.570_151_420_521_586).abs() < 1e-15);
    assert!((ei_regular(0.5) - (ei(0.5).unwrap() - 0.5f64.ln() - EULER_GAMMA)).abs() < 1e-15);
    // The E1-based regularisation vanishes at the origin like x.
    assert!(ein(1e-10).abs() < 2e-10);
    assert!(ei_regular(1e-10).abs() < 2e-10);
    assert!((ein(0.5) - 0.443_842_079_117_748).abs() < 1e-15);
}

#[test]
fn hankel_matches_real_path_on_positive_axis() {
    for &x in &[0.3, 4.0, 30.0] {
        let a = hankel1_0(x).unwrap();
        let b = hankel1_0_complex(Complex64::new(x, 0.0)).unwrap();
        assert_eq!(a, b);
        let tiny = hankel1_0_complex(Complex64::new(x, 1e-12)).unwrap();
        assert!((tiny - a).norm() < 1e-10 * a.norm());
    }
}

proptest! {
    #[test]
    fn wronskian(x in 0.01f64..400.0) {
        let b = bessel01(x).unwrap();
        let w = b.j1 * b.y0 - b.j0 * b.y1;
        let want = 2.0 / (std::f64::consts::PI * x);
        prop_assert!((w - want).abs() <= 1e-13 * want.max(1.0 / x.sqrt()));
    }

    #[test]
    fn erf_real_matches_libm(x in -8.0f64..8.0) {
        prop_assert!((erf(x) - libm::erf(x)).abs() <= 2e-15);
        prop_assert_eq!(erf(-x), -erf(x));
    }

    #[test]
    fn erf_complex_real_axis(x in -8.0f64..8.0) {
        let w = erf_complex(Complex64::new(x, 0.0)).unwrap();
        prop_assert!((w.re - libm::erf(x)).abs() <= 2e-15);
        prop_assert_eq!(w.im, 0.0);
    }

    #[test]
    fn erf_complex_symmetries(x in -6.0f64..6.0, y in -6.0f64..6.0) {
        let z = Complex64::new(x, y);
        let w = erf_complex(z).unwrap();
        let wn = erf_complex(-z).unwrap();
        let wc = erf_complex(z.conj()).unwrap();
        let tol = 1e-13 * w.norm().max(1e-300);
        prop_assert!((w + wn).norm() <= tol);
        prop_assert!((w.conj() - wc).norm() <= tol);
    }

    #[test]
    fn erf_branch_continuity(x in 0.2f64..1.9, y in 0.01f64..0.5) {
        // Either side of the |z| = 2 switch between Taylor and strip series.
        let r = (x * x + y * y).sqrt();
        let z = Complex64::new(x, y) * (2.0 / r);
        let a = erf_complex(z * (1.0 - 1e-15)).unwrap();
        let b = erf_complex(z * (1.0 + 1e-15)).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn recurrence_consistency(x in 0.5f64..60.0) {
        let seq = bessel_jn_sequence(x, 10);
        for n in 1..10 {
            let lhs = seq[n - 1] + seq[n + 1];
            let rhs = 2.0 * n as f64 / x * seq[n];
            prop_assert!((lhs - rhs).abs() <= 1e-13);
        }
    }

    #[test]
    fn bessel_regime_continuity(edge in prop::sample::select(vec![2.0f64, 25.0])) {
        let a = bessel01(edge * (1.0 - 1e-15)).unwrap();
        let b = bessel01(edge * (1.0 + 1e-15)).unwrap();
        prop_assert!((a.j0 - b.j0).abs() < 1e-13);
        prop_assert!((a.y1 - b.y1).abs() < 1e-13);
    }
}
