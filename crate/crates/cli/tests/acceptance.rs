//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p qpc-cli --test acceptance -- --nocapture`.

use qpc::cluster::{a_mutate, lg_potential_chart, x_pullback_step, y_mutate, DEFAULT_DEPTH_MAX};
use qpc::io::laurent_from_json;
use qpc::linalg::q;
use qpc::qp::{mutate_qp, op_arrow_name, restrict_potential};
use qpc::quiver::{b_matrix, mutate_b_matrix, mutate_quiver};
use qpc::rep::*;
use qpc::typea::*;
use qpc::{Arrow, DecoratedRep, IceQuiver, LaurentExpr, Mat, Potential, QPInstance, RationalExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn qpc_json(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qpc")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), format!("exit {:?}", out.status.code()))?;
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn restricted(n: usize) -> Vec<(Vec<usize>, QPInstance)> {
    let mut out = Vec::new();
    for w in reduced_words(n) {
        let (g, qp) = gamma_qp(&w).unwrap();
        for &ell in &g.ell {
            let keep: BTreeSet<usize> = (1..=qp.quiver.n()).chain([ell]).collect();
            out.push((w.letters().to_vec(), restrict_potential(&qp, &keep).0));
        }
    }
    out
}

fn sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        frontier = frontier
            .iter()
            .flat_map(|s| (1..=n).map(move |k| s.iter().copied().chain([k]).collect::<Vec<_>>()))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn sl3_potentials() -> Check {
    let v = qpc_json(&["lg", "--word", "1,2,1", "--method", "all", "--format", "json"])?;
    ensure(v["verdict"] == "AGREE", "verdict")?;
    let w2 = LaurentExpr::from_terms(3, vec![(vec![0, -1, 0], q(1)), (vec![-1, -1, 0], q(1))]).unwrap();
    let w3 = LaurentExpr::monomial(vec![0, 0, -1], q(1));
    for row in v["potentials"].as_array().ok_or("no potentials")? {
        let want = match row["ell"].as_u64() {
            Some(2) => &w2,
            Some(3) => &w3,
            other => return Err(format!("unexpected vertex {other:?}")),
        };
        for method in ["chart", "fpoly", "paths"] {
            let got = laurent_from_json(3, &row[method]).map_err(|e| e.to_string())?;
            ensure(&got == want, format!("W_{} via {method} = {got}", row["ell"]))?;
        }
    }
    Ok("W_2 = X_2^{-1} + X_1^{-1}X_2^{-1}, W_3 = X_3^{-1} from chart, fpoly and paths".into())
}

fn sl3_cone() -> Check {
    let v = qpc_json(&["stringcone", "--word", "1,2,1", "--method", "all", "--format", "json"])?;
    ensure(v["verdict"] == "EQUAL", "verdict")?;
    let want = serde_json::json!([[0, 0, 1], [0, 1, -1], [1, 0, 0]]);
    for m in ["gp", "fpoly", "sigma"] {
        ensure(v[m]["normals"] == want, format!("{m}: {}", v[m]["normals"]))?;
    }
    Ok("normals {(1,0,0),(0,1,-1),(0,0,1)} from gp, fpoly and sigma".into())
}

fn sl5_quiver() -> Check {
    let g = gamma_quiver(&ReducedWord::parse(&[1, 2, 1, 3, 2, 1, 4, 3, 2, 1]).unwrap());
    let drawn = [
        ('a', 1, 3),
        ('b', 3, 6),
        ('c', 6, 10),
        ('d', 2, 1),
        ('e', 3, 2),
        ('f', 5, 3),
        ('g', 6, 5),
        ('h', 9, 6),
        ('i', 2, 5),
        ('j', 5, 9),
        ('k', 4, 2),
        ('l', 5, 4),
        ('m', 8, 5),
        ('n', 4, 8),
        ('o', 7, 4),
    ];
    let got: BTreeSet<(usize, usize)> = g.quiver.arrows().iter().map(|a| (a.t, a.h)).collect();
    let want: BTreeSet<(usize, usize)> = drawn.iter().map(|&(_, t, h)| (t, h)).collect();
    ensure(got == want, format!("arrows {got:?}"))?;
    let frozen: Vec<usize> = (g.quiver.n() + 1..=g.quiver.m()).map(|v| g.relabel[v - 1]).collect();
    ensure(frozen == vec![7, 8, 9, 10], format!("frozen {frozen:?}"))?;
    let id = |c: char| {
        let &(_, t, h) = drawn.iter().find(|d| d.0 == c).unwrap();
        GammaQuiver::arrow_id(t, h)
    };
    let term = |s: &str| s.chars().map(id).collect::<Vec<_>>();
    let want = Potential::from_terms([
        (q(1), term("jgh")),
        (q(1), term("ief")),
        (q(1), term("nlm")),
        (q(-1), term("bfg")),
        (q(-1), term("ade")),
        (q(-1), term("ikl")),
    ]);
    let s = face_potential(&g).map_err(|e| e.to_string())?;
    ensure(s == want, format!("potential {s:?}"))?;
    Ok("15 arrows, frozen {7,8,9,10}, S = jgh+ief+nlm-bfg-ade-ikl (the printed ike is not a cycle)".into())
}

fn rigorous_fixture() -> Check {
    let w = ReducedWord::parse(&[2, 1, 2, 3, 4, 3, 2, 1, 3, 2]).unwrap();
    let d = wiring(&w);
    let paths = rigorous_paths(&w, 4);
    let p = paths
        .iter()
        .find(|p| p.labels(&d) == vec![(3, 5), (2, 5), (2, 4), (3, 4)])
        .ok_or("path ([3,5],[2,5],[2,4],[3,4]) missing")?;
    let a = a_gamma(&w, p);
    for (s, c) in d.crossings.iter().enumerate() {
        let want = match c.wires {
            (2, 5) => -1,
            (2, 4) => 1,
            _ => 0,
        };
        ensure(a[s] == want, format!("a at {:?} is {}", c.wires, a[s]))?;
    }
    Ok(format!("{} paths in D(4); a_[2,5] = -1, a_[2,4] = 1, others 0", paths.len()))
}

fn projective_transport() -> Check {
    let mut count = 0;
    for n in [3, 4] {
        for (w, qp) in restricted(n) {
            let ell = qp.quiver.m();
            for seq in sequences(qp.quiver.n(), 3) {
                let mut cur = qp.clone();
                let mut rep = build_projective(&cur, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
                for &k in &seq {
                    (cur, rep) = mutate_rep(&cur, &rep, k, None).map_err(|e| e.to_string())?;
                }
                let fresh = build_projective(&cur, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
                ensure(is_isomorphic(&cur.quiver, &rep, &fresh), format!("{w:?} along {seq:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (word, l, sequence) cases"))
}

fn injective_and_duality() -> Check {
    let mut count = 0;
    for n in [3, 4] {
        for (w, qp) in restricted(n) {
            let ell = qp.quiver.m();
            for seq in sequences(qp.quiver.n(), 3) {
                let mut cur = qp.clone();
                let mut inj = build_injective(&cur, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
                let mut proj = build_projective(&cur, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
                let mut op = qp.opposite();
                let mut op_rep = dualize(&proj);
                for &k in &seq {
                    proj = mutate_rep(&cur, &proj, k, None).map_err(|e| e.to_string())?.1;
                    (cur, inj) = mutate_rep(&cur, &inj, k, None).map_err(|e| e.to_string())?;
                    (op, op_rep) = mutate_rep(&op, &op_rep, k, None).map_err(|e| e.to_string())?;
                    let renamed = op_rep.rename_arrows(op_arrow_name);
                    ensure(
                        is_isomorphic(&cur.quiver.opposite(), &dualize(&proj), &renamed),
                        format!("duality {w:?} along {seq:?}"),
                    )?;
                }
                let fresh = build_injective(&cur, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
                ensure(is_isomorphic(&cur.quiver, &inj, &fresh), format!("injective {w:?} along {seq:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} cases, injectives and dualize/mutate"))
}

fn triangle_qp() -> QPInstance {
    let quiver =
        IceQuiver::new(3, 3, vec![Arrow::new("a", 3, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 3)]).unwrap();
    QPInstance::new(quiver, Potential::from_terms([(q(1), vec!["c", "b", "a"])])).unwrap()
}

fn g_h_laws() -> Check {
    let qp = triangle_qp();
    for ell in 1..=3 {
        let inj = build_injective(&qp, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
        let (g, h) = (g_vector(&qp, &inj), h_vector(&qp, &inj));
        for k in (1..=3).filter(|&k| k != ell) {
            ensure(g[k - 1] == 0 && h[k - 1] == 0, format!("I({ell}) at {k}: g={g:?} h={h:?}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut reps = Vec::new();
    while reps.len() < 50 {
        let dims: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=2)).collect();
        let v: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=1)).collect();
        let mut r = DecoratedRep::with_zero_maps(&qp.quiver, dims.clone(), v);
        for a in qp.quiver.arrows() {
            let (rows, cols) = (dims[a.h - 1], dims[a.t - 1]);
            let e: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-1..=1)).collect();
            r.maps.insert(a.id.clone(), Mat::from_i64(rows, cols, &e));
        }
        if check_module(&qp, &r).is_ok() {
            reps.push(r);
        }
    }
    for r in &reps {
        let (g, h) = (g_vector(&qp, r), h_vector(&qp, r));
        for k in 1..=3 {
            let (q2, r2) = mutate_rep(&qp, r, k, None).map_err(|e| e.to_string())?;
            let h2 = h_vector(&q2, &r2);
            ensure(h[k - 1] - h2[k - 1] == g[k - 1], format!("{r:?} at {k}"))?;
        }
    }
    Ok("g_k(I(l)) = h_k(I(l)) = 0 for k != l; h_k - h_k(mu_k) = g_k on 50 random reps".into())
}

fn f_invariance() -> Check {
    let mut count = 0;
    for n in [3, 4] {
        for (w, qp) in restricted(n) {
            let (ell, m) = (qp.quiver.m(), qp.quiver.m());
            let op = qp.opposite();
            let inj = build_injective(&op, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
            let f = f_polynomial(&op.quiver, &inj).map_err(|e| e.to_string())?;
            let y: Vec<RationalExpr> = (0..m).map(|i| RationalExpr::var(m, i)).collect();
            for k in 1..=qp.quiver.n() {
                let mutated = mutate_qp(&qp, k, None).map_err(|e| e.to_string())?.opposite();
                let inj2 = build_injective(&mutated, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
                let f2 = f_polynomial(&mutated.quiver, &inj2).map_err(|e| e.to_string())?;
                let ym = y_mutate(&y, &b_matrix(&op.quiver), k).map_err(|e| e.to_string())?;
                let lhs = f.substitute(&ym).map_err(|e| e.to_string())?;
                ensure(lhs == RationalExpr::from_laurent(f2), format!("{w:?} k={k}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (word, l, k) cases, y-mutation with the B-matrix of the opposite QP"))
}

fn bijection_counts() -> Check {
    let mut count = 0;
    for n in 2..=5 {
        for w in reduced_words(n) {
            let (g, qp) = gamma_qp(&w).map_err(|e| e.to_string())?;
            for i in 1..n {
                let ell = g.ell[i - 1];
                let paths = paths_for_index(&w, i).len();
                let monomials =
                    lg_potential_chart(&g.quiver, ell, DEFAULT_DEPTH_MAX).map_err(|e| e.to_string())?.num_terms();
                let keep: BTreeSet<usize> = (1..=qp.quiver.n()).chain([ell]).collect();
                let (sub, _) = restrict_potential(&qp, &keep);
                let p = build_projective(&sub, sub.quiver.m(), DEFAULT_D_MAX).map_err(|e| e.to_string())?;
                let quotients = enumerate_thin_quotients(&sub.quiver, &p).map_err(|e| e.to_string())?.len() - 1;
                ensure(
                    paths == monomials && monomials == quotients,
                    format!("{:?} index {i}: {paths} {monomials} {quotients}", w.letters()),
                )?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (word, index) pairs with n <= 5"))
}

fn brute_min(p: &LaurentExpr, x: &[i64]) -> i64 {
    p.exponents().iter().map(|e| e.iter().zip(x).map(|(a, b)| *a as i64 * b).sum::<i64>()).min().unwrap()
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    // quiver and seed layers on every Γ quiver with n <= 4
    for n in 2..=4 {
        for w in reduced_words(n) {
            let g = gamma_quiver(&w);
            let b = b_matrix(&g.quiver);
            let m = g.quiver.m();
            let vars: Vec<RationalExpr> = (0..m).map(|i| RationalExpr::var(m, i)).collect();
            for k in 1..=g.quiver.n() {
                let once = mutate_quiver(&g.quiver, k).map_err(|e| e.to_string())?;
                let b1 = mutate_b_matrix(&b, k);
                ensure(b_matrix(&once) == b1, "B-matrix consistency")?;
                ensure(mutate_quiver(&once, k).unwrap().arrow_multiset() == g.quiver.arrow_multiset(), "quiver")?;
                ensure(y_mutate(&y_mutate(&vars, &b, k).unwrap(), &b1, k).unwrap() == vars, "y-seed")?;
                ensure(a_mutate(&a_mutate(&vars, &g.quiver, k).unwrap(), &once, k).unwrap() == vars, "A-seed")?;
                let xk = &vars[k - 1];
                ensure(&x_pullback_step(&x_pullback_step(xk, k, &b1).unwrap(), k, &b).unwrap() == xk, "X-seed")?;
            }
        }
    }
    // QP and representation layers: μ_k μ_k on Γ with n = 4
    for (w, qp) in restricted(4) {
        let ell = qp.quiver.m();
        let p = build_projective(&qp, ell, DEFAULT_D_MAX).map_err(|e| e.to_string())?;
        for k in 1..=qp.quiver.n() {
            let (q1, r1) = mutate_rep(&qp, &p, k, None).map_err(|e| e.to_string())?;
            let (q2, r2) = mutate_rep(&q1, &r1, k, None).map_err(|e| e.to_string())?;
            ensure(b_matrix(&q2.quiver) == b_matrix(&qp.quiver), format!("QP {w:?} k={k}"))?;
            ensure(r2.dims == p.dims && r2.v == p.v, format!("rep {w:?} k={k}"))?;
        }
    }
    // tropicalization against the brute-force minimum
    for _ in 0..500 {
        let mut poly = || {
            let terms: Vec<(Vec<i32>, qpc::Q)> =
                (0..rng.gen_range(1..=4)).map(|_| ((0..3).map(|_| rng.gen_range(-3..=3)).collect(), q(1))).collect();
            LaurentExpr::from_terms(3, terms).unwrap()
        };
        let (f, g) = (poly(), poly());
        let x: Vec<i64> = (0..3).map(|_| rng.gen_range(-10..=10)).collect();
        let (rf, rg) = (RationalExpr::from_laurent(f.clone()), RationalExpr::from_laurent(g.clone()));
        let tf = rf.tropicalize().map_err(|e| e.to_string())?.eval(&x);
        let tg = rg.tropicalize().map_err(|e| e.to_string())?.eval(&x);
        ensure(tf == brute_min(&f, &x) && tg == brute_min(&g, &x), "tropicalization")?;
        match rf.div(&rg).unwrap().tropicalize() {
            Ok(t) => ensure(t.eval(&x) == tf - tg, "tropicalization of a quotient")?,
            Err(qpc::Error::NonPositiveCoefficient) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    // cone membership under tropical Ψ in the box [0,10]^N
    let mut samples = 0;
    for n in 3..=4 {
        let words = reduced_words(n);
        let cones: Vec<Cone> = words.iter().map(string_cone_gp).collect();
        for (a, i) in words.iter().enumerate() {
            for (b, j) in words.iter().enumerate() {
                let psi = tropical_transition(i, j).map_err(|e| e.to_string())?;
                for _ in 0..25 {
                    let x: Vec<i64> = (0..i.len()).map(|_| rng.gen_range(0..=10)).collect();
                    ensure(cones[a].contains(&x) == cones[b].contains(&psi(&x)), "cone membership")?;
                    samples += 1;
                }
            }
        }
    }
    Ok(format!(
        "general QPs are out of reach; checked mutation involutions on all layers, tropicalization, {samples} Psi samples with B=10"
    ))
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, Duration, fn() -> Check)> = vec![
        ("1 SL3 Landau-Ginzburg potentials", Duration::from_secs(1), sl3_potentials),
        ("2 SL3 string cone", Duration::from_secs(1), sl3_cone),
        ("3 SL5 quiver and potential", Duration::from_secs(1), sl5_quiver),
        ("4 rigorous-path fixture", Duration::from_secs(1), rigorous_fixture),
        ("5 projectives under mutation", Duration::from_secs(300), projective_transport),
        ("6 injectives and duality", Duration::from_secs(300), injective_and_duality),
        ("7 g/h-vector laws", Duration::from_secs(60), g_h_laws),
        ("8 F-polynomial invariance", Duration::from_secs(120), f_invariance),
        ("9 three-way bijection counts", Duration::from_secs(600), bijection_counts),
        ("10 quantified property suites", Duration::from_secs(600), property_suites),
    ];
    let mut failed = Vec::new();
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let verdict = match (&result, took <= limit) {
            (Ok(_), true) => "PASS",
            _ => "FAIL",
        };
        let detail = match &result {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!("{verdict} {name}: {detail} [{:.2}s, limit {}s]", took.as_secs_f64(), limit.as_secs());
        if verdict == "FAIL" {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
