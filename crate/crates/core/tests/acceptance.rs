//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wittkit::ih::triangulations::link_triangulations;
use wittkit::ih::{witt_check, Perversity};
use wittkit::indicial::exact::{int, rat, Surd};
use wittkit::indicial::roots::shift_exact;
use wittkit::indicial::{
    analytic, check_middle_vanishing, indicial_roots, mu_pm, mu_pm_exact, mu_tilde_pm, sqrt_mu_tilde_pm_exact,
    HodgeKind, IndicialParams, LinkMode, LinkSpectrum, Provenance,
};
use wittkit::radial::mellin::presets;
use wittkit::radial::{
    bc_sensitivity, bessel_i, bessel_k, eigenvalues, indicial_family_matrix, parseval_check, radial_residual,
    singular_set, Grid, InnerBc, LogSamples, RadialOperatorSpec, PARSEVAL_CONSTANT,
};
use wittkit::resolution::{blowdown, check_ifs, iso_check, resolve};
use wittkit::strata::library;

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_witt() -> Outcome {
    let start = Instant::now();
    let cases = [
        (library::cone_circle(), true),
        (library::cone_sphere2(), true),
        (library::susp_sphere2(), true),
        (library::cone_torus2(), false),
        (library::susp_torus2(), false),
    ];
    for (x, expected) in cases {
        let v = witt_check(&x, &link_triangulations(&x), &Perversity::LOWER_MIDDLE).map_err(|e| e.to_string())?;
        ensure(v.is_witt == expected, || format!("{}: is_witt = {}", x.name, v.is_witt))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3} s"))?;
    Ok(format!("5 verdicts correct in {secs:.3} s (limit 1 s)"))
}

fn c2_round_trip() -> Outcome {
    let start = Instant::now();
    let spaces = [
        library::cone_circle(),
        library::susp_circle(),
        library::cone_sphere2(),
        library::susp_torus2(),
        library::cone_susp_circle(),
    ];
    let mut max_codim = 0;
    for x in &spaces {
        let cc = resolve(x).map_err(|e| e.to_string())?;
        let r = check_ifs(&cc);
        ensure(r.passed(), || format!("{}: {}", x.name, r.failure_summary()))?;
        max_codim = max_codim.max(cc.max_corner_codim());
        let back = blowdown(&cc).map_err(|e| e.to_string())?;
        ensure(iso_check(&back, x), || format!("{}: blowdown is not isomorphic", x.name))?;
    }
    ensure(max_codim == 2, || "no depth-2 corner was checked".into())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3} s"))?;
    Ok(format!("5 spaces, corners up to codim {max_codim}, {secs:.3} s (limit 1 s)"))
}

fn c3_mu_bounds() -> Outcome {
    let (quarter, half, one) = (rat(1, 4), rat(1, 2), int(1));
    let mut checked = 0;
    for f0 in 1..=6usize {
        for n in 0..=f0 as i64 {
            for i in 0..50 {
                let lambda = rat(49 + 99 * i, 49);
                let l2 = &lambda * &lambda;
                let (mp, mm) = mu_pm_exact(&l2, n, f0).map_err(|e| e.to_string())?;
                let (sp, sm) = sqrt_mu_tilde_pm_exact(&l2, n, f0).map_err(|e| e.to_string())?;
                ensure(
                    mp.cmp_rational(&one).is_ge()
                        && mm.cmp_rational(&quarter).is_ge()
                        && sp.cmp_rational(&half).is_ge()
                        && sm.cmp_rational(&half).is_ge(),
                    || format!("exact bound fails at f0 = {f0}, N = {n}, lambda = {lambda}"),
                )?;
                let lf = wittkit::indicial::exact::to_f64(&lambda);
                let (fp, fm) = mu_pm(lf, n, f0).map_err(|e| e.to_string())?;
                let (tp, tm) = mu_tilde_pm(lf, n, f0).map_err(|e| e.to_string())?;
                ensure(
                    fp >= 1.0 - 1e-12 && fm >= 0.25 - 1e-12 && tp.sqrt() >= 0.5 - 1e-12 && tm.sqrt() >= 0.5 - 1e-12,
                    || format!("float bound fails at f0 = {f0}, N = {n}, lambda = {lf}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (f0, N, lambda) triples, exact and float (float slack 1e-12)"))
}

fn random_spectrum(rng: &mut ChaCha8Rng) -> LinkSpectrum {
    let f0 = rng.gen_range(1..=5usize);
    let modes = (0..rng.gen_range(1..8))
        .map(|_| {
            let k = rng.gen_range(0..=f0);
            let mult = rng.gen_range(1..4);
            match rng.gen_range(0..4) {
                0 => LinkMode::harmonic(k, mult),
                kind => {
                    let kind = [HodgeKind::Exact, HodgeKind::Coexact, HodgeKind::Unspecified][kind - 1];
                    LinkMode::exact(rat(rng.gen_range(1..400), rng.gen_range(1..20)), k, kind, mult)
                }
            }
        })
        .collect();
    LinkSpectrum::new("random", f0, Provenance::User, modes)
}

fn c4_root_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = random_spectrum(&mut rng);
        let a = rat(rng.gen_range(-20..20), rng.gen_range(1..8));
        let af = wittkit::indicial::exact::to_f64(&a);
        let pa = IndicialParams::exact(a.clone(), s.f0, 0);
        let r0 = indicial_roots(&IndicialParams::exact(int(0), s.f0, 0), &s).map_err(|e| e.to_string())?;
        let ra = indicial_roots(&pa, &s).map_err(|e| e.to_string())?;
        // Reflection, float.
        let axis = -(s.f0 as f64 + 2.0 * af + 1.0);
        let mut values = ra.sorted_values();
        values.sort_by(f64::total_cmp);
        let mut reflected: Vec<f64> = values.iter().map(|v| axis - v).collect();
        reflected.sort_by(f64::total_cmp);
        for (x, y) in values.iter().zip(&reflected) {
            worst = worst.max((x - y).abs());
        }
        // Reflection, exact: the multiset is closed under ζ ↦ axis − ζ.
        let exact: Vec<Surd> = ra.roots.iter().map(|x| x.exact.as_ref().unwrap().value()).collect();
        for root in &ra.roots {
            let e = root.exact.as_ref().unwrap();
            let refl = e.reflected().value();
            let count = |v: &Surd| exact.iter().filter(|w| *w == v).count();
            ensure(count(&refl) == count(&e.value()), || format!("exact reflection fails for {}", s.name))?;
        }
        // Shift, float and exact.
        for (x, y) in r0.roots.iter().zip(&ra.roots) {
            worst = worst.max((x.value - af - y.value).abs());
        }
        let e0: Vec<_> = r0.roots.iter().map(|x| x.exact.clone().unwrap()).collect();
        let ea: Vec<_> = ra.roots.iter().map(|x| x.exact.clone().unwrap()).collect();
        ensure(shift_exact(&e0, &a) == ea, || "exact shift law fails".into())?;
    }
    ensure(worst < 1e-12, || format!("float deviation {worst:e}"))?;
    Ok(format!("100 spectra (seed {SEED}), exact laws hold, float deviation {worst:.1e} (limit 1e-12)"))
}

fn c5_residuals() -> Outcome {
    let grid = Grid::log_uniform(0.1, 10.0, 4001).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for nu in [0.5, 1.0, 1.5, 2.0, 2.5] {
        let spec = RadialOperatorSpec::scalar(nu, 1).map_err(|e| e.to_string())?;
        for f in [bessel_k, bessel_i] {
            let h = grid.try_sample(|t| f(nu, t)).map_err(|e| e.to_string())?;
            let r = radial_residual(&spec, &grid, &h).map_err(|e| e.to_string())?;
            worst = worst.max(r);
        }
    }
    ensure(worst < 1e-8, || format!("residual {worst:e}"))?;
    let mut closed = 0.0f64;
    for &t in &grid.points {
        let exact = (PI / (2.0 * t)).sqrt() * (-t).exp();
        closed = closed.max(((bessel_k(0.5, t).map_err(|e| e.to_string())? - exact) / exact).abs());
    }
    ensure(closed < 1e-10, || format!("K_1/2 closed form deviation {closed:e}"))?;
    Ok(format!("max residual {worst:.1e} (limit 1e-8), K_1/2 closed form {closed:.1e} (limit 1e-10)"))
}

fn c6_bc_sensitivity() -> Outcome {
    let start = Instant::now();
    let eps = [1e-2, 1e-3, 1e-4];
    let mut parts = Vec::new();
    for nu in [0.5, 1.0, 2.0, 0.0] {
        let spec = RadialOperatorSpec::pure_cone(nu, 1).map_err(|e| e.to_string())?;
        let s = bc_sensitivity(&spec, &eps, 1.0, 4000, 5).map_err(|e| e.to_string())?;
        let d: Vec<f64> = s.iter().map(|x| x.discrepancy).collect();
        if nu == 0.0 {
            ensure(d.iter().all(|&x| x > 1e-2), || format!("nu = 0 control: {d:?}"))?;
        } else {
            ensure(d.windows(2).all(|w| w[1] < w[0]), || format!("nu = {nu}: not decreasing {d:?}"))?;
            ensure(d[2] < 1e-3, || format!("nu = {nu}: {:e} at eps = 1e-4", d[2]))?;
        }
        parts.push(format!("nu={nu}: {:.1e}/{:.1e}/{:.1e}", d[0], d[1], d[2]));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{} in {secs:.2} s (limit 30 s)", parts.join(", ")))
}

/// `J₁` by its power series.
fn j1(x: f64) -> f64 {
    let mut term = x / 2.0;
    let mut sum = term;
    for k in 1..200 {
        term *= -(x * x / 4.0) / (k as f64 * (k as f64 + 1.0));
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn j1_zeros(n: usize) -> Vec<f64> {
    let mut zeros = Vec::new();
    let mut a = 0.5;
    while zeros.len() < n {
        let b = a + 0.1;
        if j1(a).signum() != j1(b).signum() {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if j1(lo).signum() == j1(mid).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        a = b;
    }
    zeros
}

fn c7_spectrum() -> Outcome {
    let grid = Grid::log_uniform(1e-4, 1.0, 4000).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let half = RadialOperatorSpec::pure_cone(0.5, 1).map_err(|e| e.to_string())?;
    let e = eigenvalues(&half, &grid, InnerBc::Dirichlet, 5).map_err(|e| e.to_string())?;
    for (n, v) in e.eigenvalues.iter().enumerate() {
        let exact = ((n + 1) as f64 * PI).powi(2);
        worst = worst.max(((v - exact) / exact).abs());
    }
    let one = RadialOperatorSpec::pure_cone(1.0, 1).map_err(|e| e.to_string())?;
    let e = eigenvalues(&one, &grid, InnerBc::Dirichlet, 5).map_err(|e| e.to_string())?;
    for (v, z) in e.eigenvalues.iter().zip(j1_zeros(5)) {
        worst = worst.max(((v - z * z) / (z * z)).abs());
    }
    ensure(worst < 5e-3, || format!("relative error {worst:e}"))?;
    Ok(format!("first 5 eigenvalues for nu = 1/2 and 1, max relative error {worst:.1e} (limit 5e-3)"))
}

fn c8_singular_set() -> Outcome {
    let step = 1e-3;
    let mut modes = 0;
    for (name, f0) in [("S1", 1), ("S2", 2), ("T2", 2)] {
        let s = analytic::by_name(name, 12).ok_or("missing analytic spectrum")?;
        for a in [0.0, 0.25, -0.5] {
            let p = IndicialParams::new(a, f0, 1);
            let roots = indicial_roots(&p, &s).map_err(|e| e.to_string())?;
            for (i, m) in s.modes.iter().enumerate() {
                let mut expected: Vec<f64> = roots.for_mode(i).map(|r| r.value).collect();
                expected.sort_by(f64::total_cmp);
                expected.dedup_by(|a, b| (*a - *b).abs() <= step);
                let found = singular_set(&p, m, expected[0] - 1.0, expected[expected.len() - 1] + 1.0, step);
                ensure(
                    found.len() == expected.len() && found.iter().zip(&expected).all(|(x, y)| (x - y).abs() <= step),
                    || format!("{name}, a = {a}, mode {i}: {found:?} vs {expected:?}"),
                )?;
                for r in &expected {
                    ensure(!indicial_family_matrix(&p, m, Complex64::new(*r, 0.0)).invertible, || {
                        format!("{name}: matrix invertible at root {r}")
                    })?;
                }
                modes += 1;
            }
        }
    }
    Ok(format!("{modes} (mode, weight) pairs match to step {step:e}"))
}

fn c9_cheeger() -> Outcome {
    let cases = [
        ("S1", library::cone_circle()),
        ("S2", library::cone_sphere2()),
        ("T2", library::cone_torus2()),
    ];
    let mut parts = Vec::new();
    for (name, x) in cases {
        let s = analytic::by_name(name, 12).ok_or("missing analytic spectrum")?;
        let analytic_verdict = check_middle_vanishing(&s);
        let v = witt_check(&x, &link_triangulations(&x), &Perversity::LOWER_MIDDLE).map_err(|e| e.to_string())?;
        ensure(analytic_verdict == v.is_witt, || {
            format!("{name}: Hodge data says {analytic_verdict}, intersection homology says {}", v.is_witt)
        })?;
        parts.push(format!("{name}={}", v.is_witt));
    }
    Ok(format!("verdicts agree ({})", parts.join(", ")))
}

fn c10_parseval() -> Outcome {
    let sample = |name: &str| {
        LogSamples::sample(presets::by_name(name).expect("preset"), -50.0, 50.0, 5001).map_err(|e| e.to_string())
    };
    let calibration = parseval_check(&sample("s_exp")?, &sample("s_exp")?, -0.5, 40.0, 1601).map_err(|e| e.to_string())?;
    let c = calibration.ratio;
    let pairs = [
        ("s_exp", "s2_exp"),
        ("s_gauss", "s_gauss"),
        ("s_rational", "s_exp"),
        ("s2_exp", "s_exp2"),
        ("s_gauss", "s_rational"),
    ];
    let mut worst = 0.0f64;
    for (a, b) in pairs {
        let p = parseval_check(&sample(a)?, &sample(b)?, -0.5, 80.0, 3201).map_err(|e| e.to_string())?;
        worst = worst.max((p.ratio / c - 1.0).abs());
    }
    ensure(worst < 1e-6, || format!("deviation {worst:e}"))?;
    Ok(format!(
        "C = {c:.12} (1/2pi = {PARSEVAL_CONSTANT:.12}), 5 pairs deviate at most {worst:.1e} (limit 1e-6)"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Witt classification suite", c1_witt),
        ("resolution round trip", c2_round_trip),
        ("mu/nu lower bounds", c3_mu_bounds),
        ("indicial root algebra", c4_root_algebra),
        ("Bessel residuals", c5_residuals),
        ("inner boundary condition sensitivity", c6_bc_sensitivity),
        ("discrete spectrum convergence", c7_spectrum),
        ("indicial singular set", c8_singular_set),
        ("Cheeger consistency", c9_cheeger),
        ("Mellin-Parseval", c10_parseval),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
