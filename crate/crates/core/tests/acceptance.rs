//! Acceptance criteria, one line of output each. Tolerances are pinned here
//! and do not follow `Tolerances::default()`.

use std::time::{Duration, Instant};

use bochner_core::bochner::{
    antiholo_4frame_defect, generalized_bochner, nk_flat_form_3_4, rhs_2_1, rk_bochner,
};
use bochner_core::charts::{
    bianchi_suite, curvature_at, make_chart, nk_identity_suite, Chart, FdConfig, ModelSpec,
};
use bochner_core::curvature::{
    complex_space_form_tensor, direct_sum, identity_defects, random_curvature_tensor, ricci_family,
    sigma_forms, space_form_tensor, star, HermitianPoint,
};
use bochner_core::multilinear::CurvTensor;
use bochner_core::scenario::cli_dispatch;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn csf(m: usize, mu: f64) -> (HermitianPoint, CurvTensor) {
    let p = HermitianPoint::standard(m);
    let r = complex_space_form_tensor(&p, mu);
    (p, r)
}

fn spec(text: &str) -> ModelSpec {
    text.parse().expect("model spec")
}

fn b_star(p: &HermitianPoint, r: &CurvTensor) -> f64 {
    generalized_bochner(p, r).unwrap().norm
}

fn b(p: &HermitianPoint, r: &CurvTensor) -> f64 {
    rk_bochner(p, r).unwrap().norm
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for m in [3, 4, 5] {
        let (p, r) = csf(m, 1.0);
        let (bs, bb) = (b_star(&p, &r), b(&p, &r));
        ensure(bs < 1e-12, format!("m={m}: |B*| = {bs:e}"))?;
        ensure(bb < 1e-12, format!("m={m}: |B| = {bb:e}"))?;
        worst = worst.max(bs).max(bb);
    }
    let p = HermitianPoint::standard(3);
    let bs6 = b(&p, &space_form_tensor(&p, 1.0));
    ensure(bs6 < 1e-12, format!("S6: |B| = {bs6:e}"))?;
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("max norm {:.1e}, {elapsed:.0?}", worst.max(bs6)))
}

fn criterion_2() -> Outcome {
    let mu = 1.0;
    let mut worst: f64 = 0.0;
    for (k, l) in [(1, 3), (2, 2), (2, 3)] {
        let (p1, r1) = csf(k, mu);
        let (p2, r2) = csf(l, -mu);
        let (p, r) = direct_sum(&p1, &r1, &p2, &r2).unwrap();
        let n0 = b_star(&p, &r);
        ensure(n0 < 1e-12, format!("({k},{l}): |B*| = {n0:e}"))?;
        worst = worst.max(n0);
        let mut prev = n0;
        for eps in [1e-3, 1e-2, 1e-1] {
            let (p2, r2) = csf(l, -mu + eps);
            let (p, r) = direct_sum(&p1, &r1, &p2, &r2).unwrap();
            let n = b_star(&p, &r);
            ensure(
                n > prev,
                format!("({k},{l}) eps={eps}: |B*| = {n:e} not above {prev:e}"),
            )?;
            prev = n;
        }
    }
    Ok(format!(
        "unperturbed max {worst:.1e}, perturbed norms strictly increasing"
    ))
}

fn criterion_3() -> Outcome {
    let (p, r) = spec("cd(1,-1)*s6(1)").algebraic().unwrap();
    let b4 = b(&p, &r);
    ensure(b4 < 1e-12, format!("CD1 x S6: |B| = {b4:e}"))?;
    let (p, r) = spec("cd(2,-1)*s6(1)").algebraic().unwrap();
    let b5 = b(&p, &r);
    ensure(b5 > 1e-3, format!("CD2 x S6: |B| = {b5:e}"))?;
    let anti = antiholo_4frame_defect(&p, &r, 512, 7)
        .unwrap()
        .expect("dim 10");
    ensure(
        anti > 1e-3,
        format!("CD2 x S6: antiholomorphic defect {anti:e}"),
    )?;
    Ok(format!(
        "|B| {b4:.1e} / {b5:.3}, antiholomorphic defect {anti:.3}"
    ))
}

fn criterion_4() -> Outcome {
    let p = HermitianPoint::standard(3);
    let r = space_form_tensor(&p, 1.0);
    let fam = ricci_family(&p, &r).unwrap();
    ensure((fam.tau - 30.0).abs() < 1e-12, format!("tau = {}", fam.tau))?;
    ensure(
        (fam.tau_prime - 6.0).abs() < 1e-12,
        format!("tau' = {}", fam.tau_prime),
    )?;
    let diff = (fam.tau - 5.0 * fam.tau_prime).abs();
    ensure(diff < 1e-12, format!("tau - 5 tau' = {diff:e}"))?;
    let ids = identity_defects(&p, &r).unwrap();
    ensure(
        ids.star_relation < 1e-12,
        format!("|4S* - S - 3S'| = {:e}", ids.star_relation),
    )?;
    ensure(
        ids.id_1_5 < 1e-12,
        format!("<S-S', S-5S'> = {:e}", ids.id_1_5),
    )?;
    let (pi1, _) = sigma_forms(&p);
    let rebuilt = nk_flat_form_3_4(&p, &fam.s, fam.tau).unwrap();
    let dev = (&rebuilt - &pi1).max_abs();
    ensure(dev < 1e-12, format!("flat form deviates by {dev:e}"))?;
    Ok("tau 30, tau' 6, all identities below 1e-12".into())
}

fn rel(a: &CurvTensor, b: &CurvTensor) -> f64 {
    (a - b).max_abs() / b.max_abs()
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = FdConfig::default();
    let s6 = make_chart(&spec("s6(1)")).unwrap();
    let mut worst = [0.0_f64; 8];
    let mut min_nabla = f64::INFINITY;
    for x in s6.sample_points(7, 5) {
        let (p, r) = curvature_at(&s6, &x, &cfg).map_err(|e| e.to_string())?;
        worst[0] = worst[0].max(rel(&r, &space_form_tensor(&p, 1.0)));
        let nk = nk_identity_suite(&s6, &x, &cfg).map_err(|e| e.to_string())?;
        let bi = bianchi_suite(&s6, &x, &cfg).map_err(|e| e.to_string())?;
        worst[1] = worst[1].max(nk.nk);
        min_nabla = min_nabla.min(nk.nabla_j_max);
        for (i, v) in [
            nk.id_1_1, nk.id_1_2, nk.id_1_3, bi.id_1_4, bi.id_1_6, bi.id_1_7,
        ]
        .into_iter()
        .enumerate()
        {
            worst[2 + i] = worst[2 + i].max(v);
        }
    }
    ensure(
        worst[0] < 1e-4,
        format!("S6 curvature rel deviation {:e}", worst[0]),
    )?;
    ensure(
        worst[1] < 1e-6,
        format!("S6 nearly Kaehler defect {:e}", worst[1]),
    )?;
    ensure(
        min_nabla > 0.1,
        format!("S6 |(nabla J)| max only {min_nabla:e}"),
    )?;
    let names = ["id_1_1", "id_1_2", "id_1_3", "id_1_4", "id_1_6", "id_1_7"];
    for (name, v) in names.iter().zip(&worst[2..]) {
        ensure(*v < 1e-4, format!("S6 {name} residual {v:e}"))?;
    }
    let cp = make_chart(&spec("cp(3,4)")).unwrap();
    let mut cp_rel: f64 = 0.0;
    let mut cp_nabla: f64 = 0.0;
    for x in cp.sample_points(7, 5) {
        let (p, r) = curvature_at(&cp, &x, &cfg).map_err(|e| e.to_string())?;
        let (pi1, pi2) = sigma_forms(&p);
        let mu = 4.0;
        cp_rel = cp_rel.max(rel(&r, &(&(&pi1 + &pi2) * (mu / 4.0))));
        let nk = nk_identity_suite(&cp, &x, &cfg).map_err(|e| e.to_string())?;
        cp_nabla = cp_nabla.max(nk.nabla_j_norm);
    }
    ensure(
        cp_rel < 1e-4,
        format!("CP curvature rel deviation {cp_rel:e}"),
    )?;
    ensure(cp_nabla < 1e-6, format!("CP |nabla J| = {cp_nabla:e}"))?;
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    let id_max = worst[2..].iter().copied().fold(0.0, f64::max);
    Ok(format!(
        "S6 rel {:.1e}, nk {:.1e}, |nabla J| >= {min_nabla:.2}, identities <= {id_max:.1e}; CP rel {cp_rel:.1e}, |nabla J| {cp_nabla:.1e}; {elapsed:.1?}",
        worst[0], worst[1]
    ))
}

fn criterion_6() -> Outcome {
    let cfg = FdConfig::default();
    let mut alg: f64 = 0.0;
    let mut fd: f64 = 0.0;
    for text in [
        "ce(3)",
        "cd(3,-1)",
        "cp(3,1)",
        "s6(1)",
        "cd(1,-1)*s6(1)",
        "cd(1,-1)*cp(2,1)",
    ] {
        let s = spec(text);
        let (p, r) = s.algebraic().unwrap();
        let n = b(&p, &r);
        ensure(n < 1e-12, format!("{text}: |B| = {n:e}"))?;
        alg = alg.max(n);
        let chart = make_chart(&s).unwrap();
        for x in chart.sample_points(7, 2) {
            let (p, r) = curvature_at(&chart, &x, &cfg).map_err(|e| e.to_string())?;
            let n = rk_bochner(&p, &r).map_err(|e| e.to_string())?.norm;
            ensure(n < 1e-4, format!("{text} chart: |B| = {n:e}"))?;
            fd = fd.max(n);
        }
    }
    Ok(format!("algebraic max {alg:.1e}, chart max {fd:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let p = HermitianPoint::random(2 + (seed as usize % 3), 1000 + seed);
        let r = random_curvature_tensor(&p, seed);
        let bs = generalized_bochner(&p, &r).unwrap();
        let fam = ricci_family(&p, &r).unwrap();
        let rebuilt = &bs.tensor + &rhs_2_1(&p, &fam.s_star, fam.tau_star).unwrap();
        let dev = (&star(&p, &r).unwrap() - &rebuilt).max_abs();
        ensure(
            dev < 1e-12,
            format!("seed {seed}: reconstruction off by {dev:e}"),
        )?;
        worst = worst.max(dev);
    }
    let s6 = make_chart(&spec("s6(1)")).unwrap();
    let x = s6.sample_points(7, 1).remove(0);
    let residual = |h: f64| {
        // Plain central differences at coarse steps, so truncation error
        // dominates; the nearly Kaehler precheck has to tolerate it too.
        let cfg = FdConfig {
            h,
            richardson: false,
            tol_fd1: 1e-2,
            ..FdConfig::default()
        };
        nk_identity_suite(&s6, &x, &cfg).map(|d| d.id_1_1)
    };
    let coarse = residual(2e-2).map_err(|e| e.to_string())?;
    let fine = residual(1e-2).map_err(|e| e.to_string())?;
    let factor = coarse / fine;
    ensure(
        factor >= 3.0,
        format!("halving h improved the residual only {factor:.2}x"),
    )?;
    Ok(format!(
        "reconstruction max {worst:.1e}; residual {coarse:.2e} -> {fine:.2e} ({factor:.2}x)"
    ))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("all{run}.json"));
        let code = cli_dispatch([
            "bochner",
            "all",
            "--seed",
            "7",
            "--quiet",
            "--json",
            path.to_str().unwrap(),
        ]);
        ensure(code == 0, format!("run {run} exited with {code}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(
        outputs[0] == outputs[1],
        "reports differ between runs".into(),
    )?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("algebraic Bochner vanishing", criterion_1),
        ("product theorem", criterion_2),
        ("product model and counterexample", criterion_3),
        ("scalar identities on S6", criterion_4),
        ("chart geometry", criterion_5),
        ("model sweep", criterion_6),
        ("reconstruction and convergence", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
