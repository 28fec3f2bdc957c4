#![allow(clippy::excessive_precision)]

//! Frozen values from independent implementations.

use approx::assert_relative_eq;
use posterior_indices::ttest::{
    central_t_pdf, jzs_bayes_factor, noncentral_t_pdf, CauchyPrior, SufficientStats,
};
use statrs::distribution::{Continuous, StudentsT};

// (x, df, ncp, pdf) from a 50-digit series evaluation.
const NCT_REFERENCE: [(f64, f64, f64, f64); 6] = [
    (2.2, 98.0, 3.0, 0.28890004337279063),
    (-1.5, 5.0, 0.7, 0.040380259936580695),
    (0.3, 1.0, -2.0, 0.020533521811187491),
    (4.0, 10.0, 5.0, 0.22803830399320482),
    (-3.0, 30.0, -1.0, 0.061872928299827484),
    (6.0, 500.0, 2.0, 0.00017122712592475765),
];

#[test]
fn noncentral_t_matches_reference_values() {
    for (x, df, ncp, want) in NCT_REFERENCE {
        let got = noncentral_t_pdf(x, df, ncp).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-10);
    }
}

#[test]
fn zero_noncentrality_is_students_t() {
    for df in [1.0, 2.5, 5.0, 30.0, 98.0, 500.0] {
        let t = StudentsT::new(0.0, 1.0, df).unwrap();
        for i in -24..=24 {
            let x = i as f64 * 0.25;
            let want = t.pdf(x);
            assert_relative_eq!(
                noncentral_t_pdf(x, df, 0.0).unwrap(),
                want,
                max_relative = 1e-10
            );
            assert_relative_eq!(central_t_pdf(x, df), want, max_relative = 1e-12);
        }
    }
}

#[test]
fn reflection() {
    for (x, df, ncp) in [
        (1.3, 4.0, 0.8),
        (-2.0, 98.0, 2.5),
        (0.0, 1.0, -1.0),
        (5.5, 500.0, 4.0),
    ] {
        let a = noncentral_t_pdf(x, df, ncp).unwrap();
        let b = noncentral_t_pdf(-x, df, -ncp).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-10);
    }
}

/// Midpoint rule on `x = tan θ`, which maps the real line onto a bounded range.
pub fn integral_over_real_line(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = std::f64::consts::PI / n as f64;
    (0..n)
        .map(|i| {
            let th = -std::f64::consts::FRAC_PI_2 + (i as f64 + 0.5) * h;
            let c = th.cos();
            f(th.tan()) / (c * c)
        })
        .sum::<f64>()
        * h
}

#[test]
fn density_integrates_to_one() {
    for (df, ncp) in [(1.0, 0.0), (5.0, 1.5), (98.0, 3.0), (30.0, -2.0)] {
        let total = integral_over_real_line(|x| noncentral_t_pdf(x, df, ncp).unwrap(), 20_000);
        assert!((total - 1.0).abs() < 1e-6, "df {df} ncp {ncp}: {total}");
    }
}

/// BF01 written as a mixture over g with an inverse-gamma(1/2, r²/2) prior,
/// integrated by composite Simpson on g = e^y.
fn g_mixture_bf01(t: f64, n_eff: f64, r: f64, df: f64) -> f64 {
    let null = (1.0 + t * t / df).powf(-(df + 1.0) / 2.0);
    let integrand = |g: f64| {
        let a = 1.0 + n_eff * g;
        a.powf(-0.5) * (1.0 + t * t / (a * df)).powf(-(df + 1.0) / 2.0) * r
            / (2.0 * std::f64::consts::PI).sqrt()
            * g.powf(-1.5)
            * (-r * r / (2.0 * g)).exp()
    };
    let (lo, hi, n) = (-30.0_f64, 30.0_f64, 60_000);
    let h = (hi - lo) / n as f64;
    let mut s = 0.0;
    for i in 0..=n {
        let y = lo + i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let g = y.exp();
        s += w * integrand(g) * g;
    }
    null / (s * h / 3.0)
}

#[test]
fn bayes_factor_matches_g_mixture() {
    let frozen = [
        (0.0, 50, 1.0, 6.5003187452417445),
        (2.2078418423770043, 50, 1.0, 0.686999999999976),
        (
            3.0,
            20,
            std::f64::consts::FRAC_1_SQRT_2,
            0.11271374355383018,
        ),
    ];
    for (t, n, r, want) in frozen {
        let stats = SufficientStats::from_t(t, n, n).unwrap();
        let got = jzs_bayes_factor(&stats, &CauchyPrior::new(r).unwrap())
            .unwrap()
            .bf01;
        assert_relative_eq!(got, want, max_relative = 1e-8);
        let mix = g_mixture_bf01(t, stats.n_eff, r, stats.df as f64);
        assert_relative_eq!(mix, want, max_relative = 1e-8);
    }
}

#[test]
fn bayes_factor_matches_g_mixture_across_designs() {
    for (t, n1, n2, r) in [
        (1.0, 12, 30, 0.5),
        (2.5, 100, 80, 1.0),
        (4.0, 200, 200, 1.5),
        (-1.7, 25, 25, 1.0),
    ] {
        let stats = SufficientStats::from_t(t, n1, n2).unwrap();
        let got = jzs_bayes_factor(&stats, &CauchyPrior::new(r).unwrap())
            .unwrap()
            .bf01;
        let mix = g_mixture_bf01(t, stats.n_eff, r, stats.df as f64);
        assert_relative_eq!(got, mix, max_relative = 1e-7);
    }
}
