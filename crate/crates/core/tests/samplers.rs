use std::f64::consts::PI;

use sbp_core::registry::Registry;
use sbp_core::samplers::{informed_next, uniform_next, SamplerContext, SamplerParams};
use sbp_core::{Bounds, Configuration, Rng};

fn q(v: &[f64]) -> Configuration {
    Configuration::new(v.to_vec()).unwrap()
}

fn focal_sum(p: &[f64], s: &[f64], g: &[f64]) -> f64 {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    d(p, s) + d(p, g)
}

fn informed_ctx(best: f64) -> SamplerContext {
    let bounds = Bounds::new([(-50.0, 60.0), (-50.0, 50.0)]).unwrap();
    let mut ctx = SamplerContext::new(bounds, q(&[0.0, 0.0]), q(&[10.0, 0.0])).unwrap();
    ctx.best_cost = best;
    ctx
}

// foci (0,0),(10,0), c_best 12: a = 6, b = sqrt(36 - 25) = sqrt(11), centre (5,0)
const A: f64 = 6.0;

fn b() -> f64 {
    11f64.sqrt()
}

#[test]
fn ellipse_area_ratio_matches_analytic_oracle() {
    let ctx = informed_ctx(12.0);
    let mut rng = Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let p = informed_next(&ctx, &mut rng).unwrap();
        assert!(focal_sum(p.as_slice(), &[0.0, 0.0], &[10.0, 0.0]) <= 12.0 + 1e-9);
    }

    // acceptance rate of uniform box samples against the focal test
    let bbox = Bounds::new([(5.0 - A, 5.0 + A), (-b(), b())]).unwrap();
    let box_ctx = SamplerContext::new(bbox, q(&[0.0, 0.0]), q(&[10.0, 0.0])).unwrap();
    let mut rng = Rng::seed_from_u64(7);
    let n = 10_000;
    let inside = (0..n)
        .filter(|_| focal_sum(uniform_next(&box_ctx, &mut rng).as_slice(), &[0.0, 0.0], &[10.0, 0.0]) <= 12.0)
        .count();
    let ratio = inside as f64 / n as f64;
    let oracle = PI * A * b() / (2.0 * A * 2.0 * b());
    assert!((ratio - oracle).abs() / oracle <= 0.05, "ratio {ratio} vs {oracle}");
}

#[test]
fn informed_samples_are_uniform_over_the_ellipse() {
    // expected mass per cell of a 4x4 split of the bounding box, by midpoint quadrature
    let cells = 4;
    let fine = 400;
    let (x0, w, y0, h) = (5.0 - A, 2.0 * A, -b(), 2.0 * b());
    let mut expected = vec![0.0; cells * cells];
    let mut total = 0.0;
    for i in 0..fine {
        for j in 0..fine {
            let x = x0 + (i as f64 + 0.5) * w / fine as f64;
            let y = y0 + (j as f64 + 0.5) * h / fine as f64;
            if focal_sum(&[x, y], &[0.0, 0.0], &[10.0, 0.0]) <= 12.0 {
                expected[(i * cells / fine) * cells + j * cells / fine] += 1.0;
                total += 1.0;
            }
        }
    }
    expected.iter_mut().for_each(|e| *e /= total);

    let ctx = informed_ctx(12.0);
    let mut rng = Rng::seed_from_u64(99);
    let n = 40_000;
    let mut observed = vec![0.0; cells * cells];
    for _ in 0..n {
        let p = informed_next(&ctx, &mut rng).unwrap();
        let ci = (((p[0] - x0) / w * cells as f64) as usize).min(cells - 1);
        let cj = (((p[1] - y0) / h * cells as f64) as usize).min(cells - 1);
        observed[ci * cells + cj] += 1.0 / n as f64;
    }
    for (k, (o, e)) in observed.iter().zip(&expected).enumerate() {
        assert!((o - e).abs() <= 0.01, "cell {k}: observed {o:.4}, expected {e:.4}");
    }
}

#[test]
fn informed_support_shrinks_with_best_cost() {
    // samples for c1 < c2 all fall inside the c2 set, but not vice versa
    for (c1, c2) in [(10.5, 12.0), (11.0, 20.0), (10.0 + 1e-6, 10.1)] {
        let mut rng = Rng::seed_from_u64(3);
        let small: Vec<Configuration> = (0..2000)
            .map(|_| informed_next(&informed_ctx(c1), &mut rng).unwrap())
            .collect();
        let large: Vec<Configuration> = (0..2000)
            .map(|_| informed_next(&informed_ctx(c2), &mut rng).unwrap())
            .collect();
        let s = [0.0, 0.0];
        let g = [10.0, 0.0];
        assert!(small.iter().all(|p| focal_sum(p.as_slice(), &s, &g) <= c2 + 1e-9));
        assert!(large.iter().any(|p| focal_sum(p.as_slice(), &s, &g) > c1 + 1e-9));
        let spread = |pts: &[Configuration]| pts.iter().map(|p| p[1].abs()).fold(0.0, f64::max);
        assert!(spread(&small) <= spread(&large));
    }
}

#[test]
fn informed_rotation_in_higher_dimensions() {
    let s = [1.0, 2.0, 3.0, 4.0];
    let g = [4.0, -2.0, 3.0, 8.0];
    let c_min = focal_sum(&s, &s, &g);
    let bounds = Bounds::new([(-20.0, 20.0); 4]).unwrap();
    let mut ctx = SamplerContext::new(bounds, q(&s), q(&g)).unwrap();
    ctx.best_cost = c_min * 1.2;
    let mut rng = Rng::seed_from_u64(44);
    let mut mean = [0.0; 4];
    let n = 20_000;
    let mut max_sum: f64 = 0.0;
    for _ in 0..n {
        let p = informed_next(&ctx, &mut rng).unwrap();
        max_sum = max_sum.max(focal_sum(p.as_slice(), &s, &g));
        for (m, v) in mean.iter_mut().zip(p.as_slice()) {
            *m += v / n as f64;
        }
    }
    assert!(max_sum <= ctx.best_cost + 1e-9);
    // a uniformly filled ellipsoid is most of the way to its boundary somewhere
    assert!(max_sum > ctx.best_cost - 0.05 * (ctx.best_cost - c_min));
    for (i, m) in mean.iter().enumerate() {
        let centre = (s[i] + g[i]) / 2.0;
        assert!((m - centre).abs() < 0.05, "axis {i}: mean {m} vs centre {centre}");
    }
}

#[test]
fn registry_samplers_stay_in_bounds() {
    let registry = Registry::with_builtins();
    let bounds = Bounds::new([(0.0, 100.0), (0.0, 50.0)]).unwrap();
    let mut ctx = SamplerContext::new(bounds.clone(), q(&[10.0, 10.0]), q(&[90.0, 40.0])).unwrap();
    for name in registry.list_samplers() {
        let mut sampler = registry.create_sampler(&name, &SamplerParams { p_goal: 0.2 }).unwrap();
        let mut rng = Rng::seed_from_u64(5);
        for i in 0..10_000 {
            ctx.best_cost = if i < 5000 { f64::INFINITY } else { 90.0 };
            let p = sampler.next(&ctx, &mut rng).unwrap();
            assert!(
                bounds.contains_half_open(p.as_slice()) || p == ctx.goal,
                "{name}: {p:?}"
            );
            sampler.report(i % 3 == 0);
        }
        assert_eq!(sampler.report_count(), 10_000);
    }
}
