//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2, SQRT_2};
use std::process::Command;
use std::time::Instant;

use posterior_indices::indices::{
    categorize_bf, fbst_evalue, map_p_value, probability_of_direction, run_all_indices,
    savage_dickey_bf, EvidenceScale, Rope, Thresholds,
};
use posterior_indices::posterior::{kde_density, DensityGrid, ReferenceFunction, SampleSet};
use posterior_indices::replicate::{reference_expectations, replicate, ToleranceProfile};
use posterior_indices::ttest::{
    central_t_pdf, cohen_d_from_moments, jzs_bayes_factor, model_grids, noncentral_t_pdf,
    CauchyPrior, Hypotheses, SufficientStats,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn calibrated_replication() -> Outcome {
    let start = Instant::now();
    let rep = replicate(ToleranceProfile::Strict, &reference_expectations())
        .map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let mut detail = format!("t* = {:.6}, {:.2} s;", rep.t_star, secs);
    for c in &rep.comparisons {
        detail.push_str(&format!(
            " {}={}{}",
            c.name,
            c.observed.map_or("n/a".into(), |o| format!("{o:.4}")),
            if c.pass { "" } else { "(FAIL)" }
        ));
    }
    if let Some(m) = rep.rope_mass_full_posterior {
        detail.push_str(&format!(
            "; whole-posterior ROPE mass {m:.4} (informational)"
        ));
    }
    check(rep.all_pass && secs < 10.0, detail)
}

fn cohen_d() -> Outcome {
    let d = cohen_d_from_moments(2.71, 1.81, 1.71, 1.51).map_err(|e| e.to_string())?;
    check((d - 0.5999).abs() <= 5e-4, format!("d = {d:.6}"))
}

fn prior_identity() -> Outcome {
    let prior = CauchyPrior::new(1.0).unwrap();
    let analytic = prior.density(0.0);
    let stats = SufficientStats::from_t(2.2, 50, 50).unwrap();
    let g = model_grids(&stats, &prior, &Hypotheses::default(), 4096).map_err(|e| e.to_string())?;
    let on_grid = g.prior.density_at(0.0).map_err(|e| e.to_string())?;
    check(
        (analytic - FRAC_1_PI).abs() <= 1e-10 && (on_grid - FRAC_1_PI).abs() <= 1e-10,
        format!("density {analytic:.12}, on grid {on_grid:.12}"),
    )
}

fn cross_method_bf() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let t = rng.random_range(0.0..4.0);
        let n = rng.random_range(10..=200u64);
        let gamma = [FRAC_1_SQRT_2, 1.0, SQRT_2][rng.random_range(0..3)];
        let stats = SufficientStats::from_t(t, n, n).unwrap();
        let prior = CauchyPrior::new(gamma).unwrap();
        let exact = jzs_bayes_factor(&stats, &prior)
            .map_err(|e| e.to_string())?
            .bf01;
        let g =
            model_grids(&stats, &prior, &Hypotheses::default(), 4096).map_err(|e| e.to_string())?;
        let sd = savage_dickey_bf(&g.posterior, &g.prior, 0.0).map_err(|e| e.to_string())?;
        worst = worst.max((sd - exact).abs() / exact);
    }
    check(
        worst <= 0.01,
        format!("20 configurations, worst relative gap {worst:.2e}"),
    )
}

fn random_unimodal(rng: &mut ChaCha8Rng) -> DensityGrid {
    let mu = rng.random_range(-2.0..2.0);
    let l = rng.random_range(0.05..1.5);
    let r = l * rng.random_range(0.3..3.0);
    let shape = rng.random_range(1.0..3.0);
    let n = rng.random_range(200..3000);
    DensityGrid::from_fn(mu - 6.0 * l, mu + 6.0 * r, n, |x| {
        let z: f64 = if x < mu { (mu - x) / l } else { (x - mu) / r };
        (-0.5 * z.powf(shape)).exp()
    })
    .unwrap()
    .normalize()
    .unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let g = random_unimodal(&mut rng);
        let (lo, hi) = g.support();
        let null = rng.random_range(lo..hi);
        let f = fbst_evalue(&g, &ReferenceFunction::Flat, null).map_err(|e| e.to_string())?;
        worst = worst.max((f.ev_against - (1.0 - g.level_set_mass(f.s_star))).abs());
    }

    let stats = SufficientStats::from_t(2.2, 50, 50).unwrap();
    let g = model_grids(
        &stats,
        &CauchyPrior::new(1.0).unwrap(),
        &Hypotheses::default(),
        4096,
    )
    .map_err(|e| e.to_string())?;
    let s = g.posterior.sample(5000, 6).map_err(|e| e.to_string())?;
    let hpd = s.hpd(0.95).map_err(|e| e.to_string())?;
    let v = s.sorted();
    let k = (0.95 * v.len() as f64).ceil() as usize;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..v.len() {
        for j in (i + k - 1)..v.len() {
            if v[j] - v[i] < best.0 {
                best = (v[j] - v[i], v[i], v[j]);
            }
        }
    }
    let exact = hpd.lower == best.1 && hpd.upper == best.2;
    check(
        worst <= 1e-9 && exact,
        format!(
            "ev vs level set worst gap {worst:.1e} over 50 grids; sample HPD equals scan: {exact}"
        ),
    )
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = Vec::new();

    for _ in 0..200 {
        let t = rng.random_range(0.0..5.0);
        let n = rng.random_range(5..300u64);
        let stats = SufficientStats::from_t(t, n, n).unwrap();
        let bf = jzs_bayes_factor(
            &stats,
            &CauchyPrior::new(rng.random_range(0.3..2.0)).unwrap(),
        )
        .unwrap();
        if (bf.bf01 * bf.bf10 - 1.0).abs() > 1e-12 {
            violations.push(format!("bf01*bf10 at t={t}"));
        }
    }
    for _ in 0..200 {
        let g = random_unimodal(&mut rng);
        let (lo, hi) = g.support();
        let null = rng.random_range(lo..hi);
        let f = fbst_evalue(&g, &ReferenceFunction::Flat, null).unwrap();
        if f.ev_for + f.ev_against != 1.0 {
            violations.push("ev_for + ev_against".into());
        }
        let p = map_p_value(&g, null).unwrap();
        if !(0.0..=1.0).contains(&p) {
            violations.push(format!("p_MAP {p}"));
        }
        let pd = probability_of_direction(&g).value;
        if !(0.5..=1.0).contains(&pd) {
            violations.push(format!("PD {pd}"));
        }
        if (g.total_mass() - 1.0).abs() > 1e-6 {
            violations.push("grid normalization".into());
        }
    }
    for _ in 0..20 {
        let draws: Vec<f64> = (0..2000)
            .map(|_| rng.random_range(-1.0..3.0f64).powi(3))
            .collect();
        let s = SampleSet::new(draws).unwrap();
        let pd = probability_of_direction(&s).value;
        if !(0.5..=1.0).contains(&pd) {
            violations.push(format!("sample PD {pd}"));
        }
        let k = kde_density(&s, None, 512).unwrap();
        if (k.total_mass() - 1.0).abs() > 1e-6 {
            violations.push("KDE normalization".into());
        }
    }

    let prior = CauchyPrior::new(1.0).unwrap();
    let h = Hypotheses::default();
    let mut prev: Option<[f64; 4]> = None;
    let mut sweep_violations = 0;
    for i in 0..=12 {
        let t = 0.5 * i as f64;
        let stats = SufficientStats::from_t(t, 50, 50).unwrap();
        let g = model_grids(&stats, &prior, &h, 4096).unwrap();
        for grid in [&g.posterior, &g.prior] {
            if (grid.total_mass() - 1.0).abs() > 1e-6 {
                violations.push(format!("model grid normalization at t={t}"));
            }
        }
        let r = run_all_indices(
            &g.posterior,
            &g.prior,
            &h,
            &Rope::default(),
            0.95,
            &Thresholds::default(),
        );
        let cur = [
            jzs_bayes_factor(&stats, &prior).unwrap().bf01,
            r.pd.unwrap().value,
            r.fbst_flat.unwrap().ev_against,
            r.map_p_value.unwrap().p_map,
        ];
        for scale in EvidenceScale::ALL {
            categorize_bf(cur[0], scale).unwrap();
        }
        if let Some(p) = prev {
            let ok = cur[0] < p[0] && cur[1] >= p[1] && cur[2] >= p[2] && cur[3] <= p[3];
            if !ok {
                sweep_violations += 1;
            }
        }
        prev = Some(cur);
    }
    if sweep_violations > 0 {
        violations.push(format!("{sweep_violations} monotone-sweep violations"));
    }
    check(
        violations.is_empty(),
        if violations.is_empty() {
            "reciprocity, e-value complement, PD and p_MAP ranges, normalization, 13-step sweep"
                .into()
        } else {
            violations.join("; ")
        },
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_posterior-indices");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["simulate", "--seed", "17", "--out", p.to_str().unwrap()])?;
        if !out.status.success() {
            return Err("simulate failed".into());
        }
    }
    let (fa, fb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r1 = run(&["analyze", a.to_str().unwrap(), "--seed", "17"])?;
    let r2 = run(&["analyze", a.to_str().unwrap(), "--seed", "17"])?;
    check(
        fa == fb && r1.status.success() && r1.stdout == r2.stdout,
        format!(
            "simulate identical: {}, analyze identical: {}",
            fa == fb,
            r1.stdout == r2.stdout
        ),
    )
}

fn noncentral_t() -> Outcome {
    let mut central: f64 = 0.0;
    let mut reflect: f64 = 0.0;
    for df in [1.0, 5.0, 98.0, 500.0] {
        for i in -48..=48 {
            let x = i as f64 * 0.125;
            let c = central_t_pdf(x, df);
            let n = noncentral_t_pdf(x, df, 0.0).map_err(|e| e.to_string())?;
            central = central.max((n - c).abs() / c);
            for ncp in [-3.0, 0.5, 2.0] {
                let a = noncentral_t_pdf(x, df, ncp).unwrap();
                let b = noncentral_t_pdf(-x, df, -ncp).unwrap();
                reflect = reflect.max((a - b).abs() / a.max(f64::MIN_POSITIVE));
            }
        }
    }
    let mut unit: f64 = 0.0;
    for (df, ncp) in [(1.0, 0.0), (5.0, 1.5), (98.0, 3.0), (500.0, -2.0)] {
        let steps = 20_000;
        let h = std::f64::consts::PI / steps as f64;
        let total: f64 = (0..steps)
            .map(|i| {
                let th = -std::f64::consts::FRAC_PI_2 + (i as f64 + 0.5) * h;
                noncentral_t_pdf(th.tan(), df, ncp).unwrap() / th.cos().powi(2)
            })
            .sum::<f64>()
            * h;
        unit = unit.max((total - 1.0).abs());
    }
    check(
        central <= 1e-10 && reflect <= 1e-10 && unit <= 1e-6,
        format!("central {central:.1e}, reflection {reflect:.1e}, unit integral {unit:.1e}"),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("calibrated replication", calibrated_replication),
        ("Cohen's d of the running example", cohen_d),
        ("Cauchy density at zero", prior_identity),
        ("Savage-Dickey vs analytic Bayes factor", cross_method_bf),
        ("oracle equivalence", oracle_equivalence),
        ("property suites", property_suites),
        ("determinism", determinism),
        ("noncentral t density", noncentral_t),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("PASS criterion {}: {name} -- {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {}: {name} -- {d}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
