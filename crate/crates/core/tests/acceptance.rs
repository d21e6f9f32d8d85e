//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Extended-precision reference values live in `tests/data`.

use num_complex::Complex64 as C64;
use rhjacobi::cauchy::{cauchy_boundary, Side};
use rhjacobi::contours::{AffineArc, ArcLabel, ContourSet};
use rhjacobi::equilibrium::{compute_equilibrium, PolyField};
use rhjacobi::jacobi::{row_warm, rows, stieltjes_rows, JacobiRows, N_MIN};
use rhjacobi::mat2::Mat2;
use rhjacobi::opdeform::DeformationParams;
use rhjacobi::quad::{golub_welsch, integrate, weighted_cc};
use rhjacobi::rhp::{residual, solve};
use rhjacobi::scaling::{chebyshev_length, scale, WeightSpec};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

const ORACLE: &str = include_str!("data/moments.txt");

struct Oracle {
    moments: HashMap<String, Vec<f64>>,
    hankel_b: HashMap<String, Vec<f64>>,
}

fn oracle() -> Oracle {
    let mut moments = HashMap::new();
    let mut hankel_b = HashMap::new();
    for line in ORACLE.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let mut it = line.split_whitespace();
        let key = it.next().unwrap().to_string();
        let vals: Vec<f64> = it.map(|s| s.parse().unwrap()).collect();
        match key.strip_suffix("_b") {
            Some(name) => hankel_b.insert(name.to_string(), vals),
            None => moments.insert(key, vals),
        };
    }
    Oracle { moments, hankel_b }
}

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, id: u32, title: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{} [{id}] {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn poly(deg: usize) -> WeightSpec {
    let mut c = vec![0.0; deg + 1];
    c[deg] = 1.0;
    WeightSpec::polynomial(c).unwrap()
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k % 2 == 1 {
        s[k / 2]
    } else {
        0.5 * (s[k / 2 - 1] + s[k / 2])
    }
}

fn max_residual(r: &JacobiRows) -> f64 {
    r.residuals.iter().copied().fold(0.0, f64::max)
}

/// Rows built one at a time until the `n`-node rule integrates `f` to `tol`,
/// checking every `step` rows. Returns the rows, best error and its `n`.
fn grow_until(w: &WeightSpec, f: &dyn Fn(f64) -> f64, reference: f64, tol: f64, max_n: usize, step: usize) -> (JacobiRows, f64, usize) {
    let params = DeformationParams::default();
    let base = rows(w, N_MIN, &params, 1).unwrap();
    let (mut a, mut b) = (base.a.clone(), base.b.clone());
    let mut warm = None;
    let mut best = (f64::INFINITY, 0);
    let mut last = base;
    for n in N_MIN..max_n {
        match row_warm(w, n, &params, warm) {
            Ok(r) => {
                warm = Some((r.scaling.alpha, r.scaling.beta));
                a.push(r.a);
                b.push(r.b);
            }
            Err(e) => {
                println!("      row {n} failed: {e}");
                break;
            }
        }
        if (n + 1) % step == 0 {
            last = JacobiRows::from_coefficients(w.clone(), a.clone(), b.clone()).unwrap();
            let rule = golub_welsch(&last, n + 1, last.mu0).unwrap();
            let err = (integrate(&rule, f).unwrap() - reference).abs();
            if err < best.0 {
                best = (err, n + 1);
            }
            if err <= tol {
                break;
            }
        }
    }
    (last, best.0, best.1)
}

/// Best error over rule sizes `step, 2·step, …` from precomputed rows.
fn best_rule_error(r: &JacobiRows, f: &dyn Fn(f64) -> f64, reference: f64, step: usize) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    let mut n = step;
    while n <= r.len() {
        let rule = golub_welsch(r, n, r.mu0).unwrap();
        let err = (integrate(&rule, f).unwrap() - reference).abs();
        if err < best.0 {
            best = (err, n);
        }
        n += step;
    }
    best
}

fn criterion_1(rep: &mut Report, hermite: &JacobiRows, seconds: f64) {
    let mut eb: f64 = 0.0;
    let mut ea: f64 = 0.0;
    for n in 0..=200 {
        ea = ea.max(hermite.a[n].abs());
        if n > 0 {
            eb = eb.max((hermite.b[n] / (n as f64 / 2.0) - 1.0).abs());
        }
    }
    let pass = hermite.failures.is_empty() && eb <= 1e-8 && ea <= 1e-8 && seconds <= 300.0;
    rep.check(
        1,
        "Hermite recurrence n = 0..200",
        pass,
        format!(
            "max rel err b_n = {eb:.2e}, max |a_n| = {ea:.2e}, {:.1} s, max residual {:.1e}",
            seconds,
            max_residual(hermite)
        ),
    );
}

fn criterion_2(rep: &mut Report, x8: &JacobiRows) {
    let early = median(&x8.row_seconds[20..=70]);
    let late = median(&x8.row_seconds[150..=200]);
    rep.check(
        2,
        "linear cost, x^8 row timings",
        late <= 2.0 * early,
        format!("median 20..70 = {early:.3} s, median 150..200 = {late:.3} s, ratio {:.2}", late / early),
    );
}

fn criterion_3(rep: &mut Report) {
    let h = WeightSpec::hermite();
    let count = 100;
    let err_at = |r: &JacobiRows, n: usize| (r.b[n] / (n as f64 / 2.0) - 1.0).abs();
    let grid = [50, 100, 1000, 2000];
    let runs: Vec<JacobiRows> = grid.iter().map(|&m| stieltjes_rows(&h, count, m).unwrap()).collect();
    let fine = &runs[3];
    let worst = (1..count).map(|n| err_at(fine, n)).fold(0.0, f64::max);
    let coarse60 = err_at(&runs[1], 60);
    // correct digits, capped at 15, may not drop by more than half a digit
    let digits = |e: f64| (-e.max(1e-15).log10()).clamp(0.0, 15.0);
    let mut monotone = true;
    let mut table = Vec::new();
    for n in [10, 30, 60, 99] {
        let d: Vec<f64> = runs.iter().map(|r| digits(err_at(r, n))).collect();
        monotone &= d.windows(2).all(|w| w[1] >= w[0] - 0.5);
        table.push(format!("n={n}: {}", d.iter().map(|x| format!("{x:.1}")).collect::<Vec<_>>().join("/")));
    }
    rep.check(
        3,
        "discretized Stieltjes accuracy",
        worst <= 1e-6 && coarse60 > 1e-6 && monotone,
        format!(
            "M=2000 max rel err {worst:.1e}; M=100 row 60 rel err {coarse60:.1e}; digits over M=50/100/1000/2000 {}",
            table.join(", ")
        ),
    );
}

fn criterion_4(rep: &mut Report, x8: &JacobiRows) -> Vec<(&'static str, JacobiRows)> {
    let f8 = |x: f64| (150.0 * x).cos().powi(2) / (25.0 * x * x + 1.0);
    let w8 = poly(8);
    let ref8 = weighted_cc(&w8, f8, 10_000).unwrap();
    let (e8, n8) = best_rule_error(x8, &f8, ref8, 10);

    let fs = |x: f64| (10.0 * x).sin().powi(2);
    let ws = WeightSpec::x2sin();
    let refs = weighted_cc(&ws, fs, 10_000).unwrap();
    let (rs, es, ns) = grow_until(&ws, &fs, refs, 1e-9, 400, 10);

    let fc = |x: f64| 0.1 * (x.powi(10) + x.powi(9)) * (10.0 * x).sin().powi(2);
    let wc = WeightSpec::cosh();
    let refc = weighted_cc(&wc, fc, 10_000).unwrap();
    let (rc, ec, nc) = grow_until(&wc, &fc, refc, 1e-9, 400, 10);

    rep.check(
        4,
        "quadrature convergence to 10,000-point references",
        e8 <= 1e-10 && es <= 1e-9 && ec <= 1e-9,
        format!("x^8: {e8:.1e} at n={n8}; x^2+sin x: {es:.1e} at n={ns}; cosh: {ec:.1e} at n={nc}"),
    );
    vec![("x2sin", rs), ("cosh", rc)]
}

fn criterion_5(rep: &mut Report) {
    let m2 = compute_equilibrium(Arc::new(PolyField(vec![0.0, 0.0, 1.0])), 1.0, (-1.0, 1.0)).unwrap();
    let s2 = 2f64.sqrt();
    let e_support = (m2.a + s2).abs().max((m2.b - s2).abs());
    let e_psi = (m2.density(0.0).unwrap() - s2 / PI).abs();
    let m4 = compute_equilibrium(Arc::new(PolyField(vec![0.0, 0.0, 0.0, 0.0, 1.0])), 1.0, (-1.0, 1.0)).unwrap();
    let b4 = (4.0f64 / 3.0).powf(0.25);
    let e4 = (m4.a + b4).abs().max((m4.b - b4).abs());
    rep.check(
        5,
        "equilibrium measures of x^2 and x^4",
        e_support <= 1e-10 && e_psi <= 1e-10 && e4 <= 1e-10,
        format!("x^2 support err {e_support:.1e}, psi(0) err {e_psi:.1e}; x^4 endpoint err {e4:.1e}"),
    );
}

fn criterion_6(rep: &mut Report) {
    let angs: Vec<f64> = (0..=6).map(|k| 2.0 * PI * k as f64 / 6.0).collect();
    let circle = ContourSet::polygon(C64::default(), 0.7, &angs, 1, 16, ArcLabel::Other).unwrap();

    let id = |_: usize, _: f64, _: C64| Mat2::IDENTITY;
    let s_id = solve(&circle, &id).unwrap();
    let zero = s_id.values.iter().flatten().all(|u| *u == Mat2::ZERO);

    let g0 = Mat2::real(2.0, 0.0, 0.0, 0.5);
    let constant = move |_: usize, _: f64, _: C64| g0;
    let s_c = solve(&circle, &constant).unwrap();
    let r_c = residual(&s_c, &constant, 8).unwrap();

    let line = ContourSet::single(AffineArc::segment(C64::new(-7.0, 0.0), C64::new(7.0, 0.0), 40).unwrap(), ArcLabel::Other);
    let gauss = |_: usize, _: f64, z: C64| Mat2::new(C64::from(1.0), (-z * z).exp(), C64::default(), C64::from(1.0));
    let s_g = solve(&line, &gauss).unwrap();
    // composite Simpson of (1/2πi)∫e^{-s²}/(s-z) ds on [-7, 7]
    let simpson = |z: C64| {
        let m = 20_000;
        let h = 14.0 / m as f64;
        let mut acc = C64::default();
        for i in 0..=m {
            let s = -7.0 + h * i as f64;
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * (-s * s).exp() / (s - z);
        }
        acc * h / 3.0 / C64::new(0.0, 2.0 * PI)
    };
    let e_g = [C64::new(1.0, 1.0), C64::new(-2.0, -0.5), C64::new(0.3, 2.0)]
        .iter()
        .map(|&z| (s_g.phi(z).unwrap().get(0, 1) - simpson(z)).norm())
        .fold(0.0, f64::max);

    let arc = AffineArc::segment(C64::new(-1.0, 0.5), C64::new(2.0, 1.0), 24).unwrap();
    let vals: Vec<C64> = arc.nodes().iter().map(|z| (z * 0.7).exp()).collect();
    let e_p = (0..arc.count)
        .map(|j| {
            let p = cauchy_boundary(&vals, &arc, j, Side::Plus).unwrap();
            let m = cauchy_boundary(&vals, &arc, j, Side::Minus).unwrap();
            (p - m - vals[j]).norm() / vals[j].norm().max(1.0)
        })
        .fold(0.0, f64::max);

    rep.check(
        6,
        "RHP solver oracle suite",
        zero && r_c <= 1e-13 && e_g <= 1e-10 && e_p <= 1e-12,
        format!("identity jump exact zero: {zero}; circle residual {r_c:.1e}; Gaussian vs Simpson {e_g:.1e}; Plemelj {e_p:.1e}"),
    );
}

fn criterion_7(rep: &mut Report, o: &Oracle, x4: &JacobiRows, x8: &JacobiRows) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, rh, w) in [("x4", x4, poly(4)), ("x8", x8, poly(8))] {
        let st = stieltjes_rows(&w, 31, 40_000).unwrap();
        let mut es: f64 = 0.0;
        let mut eh: f64 = 0.0;
        for n in 8..=30 {
            es = es.max((rh.b[n] / st.b[n] - 1.0).abs()).max((rh.a[n] - st.a[n]).abs());
            if n <= 12 {
                let hb = o.hankel_b[name][n - 1];
                eh = eh.max((rh.b[n] / hb - 1.0).abs()).max(rh.a[n].abs());
            }
        }
        pass &= es <= 1e-7 && eh <= 1e-8;
        parts.push(format!("{name}: vs Stieltjes {es:.1e}, vs Hankel {eh:.1e}"));
    }
    rep.check(7, "RH rows 8..30 against baseline and Hankel oracle", pass, parts.join("; "));
}

fn criterion_8(rep: &mut Report, o: &Oracle, suite: &[(&str, &JacobiRows)]) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, r) in suite {
        let m = &o.moments[*name];
        // ∫|x|^k ω by an independent rule, the scale of odd moments that vanish
        let abs_m: Vec<f64> = (0..40).map(|k| weighted_cc(&r.weight, |x| x.abs().powi(k), 4097).unwrap()).collect();
        let mut e_mom: f64 = 0.0;
        let mut e_mass: f64 = 0.0;
        let mut positive = true;
        for n in 1..=20 {
            let rule = golub_welsch(r, n, r.mu0).unwrap();
            positive &= rule.weights.iter().all(|&w| w > 0.0);
            e_mass = e_mass.max((rule.weights.iter().sum::<f64>() / r.mu0 - 1.0).abs());
            for k in 0..2 * n {
                let got = integrate(&rule, |x| x.powi(k as i32)).unwrap();
                let scale = m[k].abs().max(abs_m[k]);
                e_mom = e_mom.max((got - m[k]).abs() / scale);
            }
        }
        let e_mu0 = (r.mu0 / m[0] - 1.0).abs();
        pass &= positive && e_mom <= 1e-10 && e_mass <= 1e-12 && e_mu0 <= 1e-12;
        parts.push(format!("{name}: moments {e_mom:.1e}, mass {e_mass:.1e}, mu0 {e_mu0:.1e}, positive {positive}"));
    }
    rep.check(8, "Gaussian exactness n <= 20", pass, parts.join("; "));
}

fn criterion_9(rep: &mut Report) {
    let w = WeightSpec::x2sin();
    let mut pts = Vec::new();
    let mut warm = None;
    let mut n_big = 16;
    while n_big <= 1024 {
        let sp = scale(&w, n_big, warm).unwrap();
        warm = Some((sp.alpha, sp.beta));
        pts.push((n_big, chebyshev_length(&w, &sp).unwrap()));
        n_big *= 2;
    }
    let c = pts.iter().map(|&(n, k)| k as f64 / (n as f64).ln()).fold(0.0, f64::max);
    // least-squares k ≈ p + q·log N
    let xs: Vec<f64> = pts.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1 as f64).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / xs.len() as f64, ys.iter().sum::<f64>() / ys.len() as f64);
    let q = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let p = my - q * mx;
    let fits = pts.iter().all(|&(n, k)| k as f64 <= c * (n as f64).ln() + 1e-12);
    let table: Vec<String> = pts.iter().map(|(n, k)| format!("{n}:{k}")).collect();
    rep.check(
        9,
        "Chebyshev length for x^2 + sin x",
        fits,
        format!("k(N) = {}; k <= {c:.2} log N; least squares k = {p:.1} + {q:.2} log N", table.join(" ")),
    );
}

fn main() {
    let o = oracle();
    let mut rep = Report { failed: 0 };
    let params = DeformationParams::default();
    let total = Instant::now();

    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_3(&mut rep);
    criterion_9(&mut rep);

    let t = Instant::now();
    let hermite = rows(&WeightSpec::hermite(), 201, &params, 1).unwrap();
    criterion_1(&mut rep, &hermite, t.elapsed().as_secs_f64());

    let x4 = rows(&poly(4), 31, &params, 1).unwrap();
    let x8 = rows(&poly(8), 401, &params, 1).unwrap();
    if !x8.failures.is_empty() {
        println!("      x^8 failures: {:?}", x8.failures);
    }
    criterion_2(&mut rep, &x8);
    criterion_7(&mut rep, &o, &x4, &x8);
    let entire = criterion_4(&mut rep, &x8);

    let mut suite: Vec<(&str, &JacobiRows)> = vec![("hermite", &hermite), ("x4", &x4), ("x8", &x8)];
    suite.extend(entire.iter().map(|(n, r)| (*n, r)));
    criterion_8(&mut rep, &o, &suite);

    println!("{} of 9 criteria failed ({:.0} s)", rep.failed, total.elapsed().as_secs_f64());
    if rep.failed > 0 {
        std::process::exit(1);
    }
}
