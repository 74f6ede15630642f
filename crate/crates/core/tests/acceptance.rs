//! The ten acceptance criteria, one PASS/FAIL line each.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use wildcat::algebra::{invariant_subspace, radical_oracle, radical_trace, spin_algebra};
use wildcat::git::{
    act, analyze, commutant_stabilizer_dim, is_polystable, is_stable, kernel_lie_dim, levi_reduction, restrict_point,
    stabilizer_lie_dim, FramedPoint,
};
use wildcat::linalg::commutant;
use wildcat::stokes::{
    build_scaffold, random_candidate, singular_directions, to_framed_point, verify_candidate, Circle, IrregularClass,
    WildSurface,
};
use wildcat::twist::{embed_doubled, normalize, Automorphism, Outer, TwistedElement};
use wildcat::{Error, Matrix, Scalar};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

/// The untwisted `m = 1` corpus used by criteria 1 and 8.
fn tuple_corpus() -> Vec<FramedPoint> {
    (0..200u64)
        .map(|seed| {
            let mut r = rng(1000 + seed);
            let n = if seed % 2 == 0 { 2 } else { 3 };
            FramedPoint::untwisted(n, random_loops(&mut r, n))
        })
        .collect()
}

fn criterion_1() -> Check {
    let (mut polystable, mut stable) = (0, 0);
    for (i, p) in tuple_corpus().iter().enumerate() {
        let loops: Vec<Matrix> = p.loops.iter().map(|l| l.g.clone()).collect();
        let r = is_stable(p, i as u64).map_err(e2s)?;
        let alg = spin_algebra(p.n, &loops).map_err(e2s)?;
        let oracle_poly = radical_oracle(&alg).map_err(e2s)?.is_zero();
        ensure(r.polystable == oracle_poly, || format!("tuple {i}: polystable {} vs oracle {oracle_poly}", r.polystable))?;
        let no_subspace = invariant_subspace(p.n, &loops, i as u64).map_err(e2s)?.is_none();
        let oracle_stable = no_subspace && commutant(p.n, &loops).dim() == kernel_lie_dim(p);
        ensure(r.stable == oracle_stable, || format!("tuple {i}: stable {} vs oracle {oracle_stable}", r.stable))?;
        polystable += usize::from(r.polystable);
        stable += usize::from(r.stable);
    }
    Ok(format!("200/200 agree ({polystable} polystable, {stable} stable)"))
}

fn unipotent_loops(n: usize) -> Vec<Matrix> {
    [1, 3]
        .iter()
        .map(|&c| {
            let mut g = Matrix::identity(n);
            g.set(0, n - 1, Scalar::from_integer(c));
            g
        })
        .collect()
}

fn criterion_2() -> Check {
    for n in [2, 3] {
        let gs = unipotent_loops(n);
        let twisted: Vec<TwistedElement> = gs
            .iter()
            .map(|g| TwistedElement::new(g.clone(), Automorphism::new(g.inverse().unwrap(), Outer::Identity).unwrap()).unwrap())
            .collect();
        let p = FramedPoint::new(n, vec![wildcat::Grading::trivial(n)], vec![], twisted).unwrap();
        ensure(is_polystable(&p).map_err(e2s)?.polystable, || format!("n = {n}: twisted point not polystable"))?;
        let q = FramedPoint::untwisted(n, gs);
        ensure(!is_polystable(&q).map_err(e2s)?.polystable, || format!("n = {n}: untwisted point polystable"))?;
    }
    Ok("n = 2, 3: twisted polystable, untwisted not".into())
}

fn criterion_3() -> Check {
    let mut nonzero = 0;
    for seed in 0..500u64 {
        let mut r = rng(5000 + seed);
        let cyclotomic = seed % 10 == 0;
        let n = if cyclotomic { r.gen_range(1..=3) } else { r.gen_range(1..=5) };
        let mut gens = random_loops(&mut r, n);
        if cyclotomic {
            let z = Scalar::root_of_unity(3, 1);
            gens = gens.iter().map(|g| g.scale(&z)).collect();
        }
        let alg = spin_algebra(n, &gens).map_err(e2s)?;
        let a = radical_trace(&alg);
        let b = radical_oracle(&alg).map_err(e2s)?;
        ensure(a.radical == b.radical, || format!("algebra {seed} (n = {n}): radicals differ"))?;
        nonzero += usize::from(!a.is_zero());
    }
    Ok(format!("500/500 equal ({nonzero} with nonzero radical)"))
}

fn verdicts(p: &FramedPoint) -> Result<(bool, bool, usize, usize), String> {
    let r = is_stable(p, 0).map_err(e2s)?;
    Ok((r.polystable, r.stable, r.stabilizer_dim, r.kernel_dim))
}

fn criterion_4() -> Check {
    let mut twisted = 0;
    for seed in 0..100u64 {
        let mut r = rng(7000 + seed);
        let n = r.gen_range(2..=3);
        let (p, frames) = random_point(&mut r, n, 2, true);
        let h: Vec<Matrix> = p.gradings.iter().zip(&frames).map(|(g, f)| random_graded(&mut r, g, f)).collect();
        let q = act(&h, &p).map_err(e2s)?;
        ensure(verdicts(&p)? == verdicts(&q)?, || format!("pair {seed}: verdicts change under the action"))?;
        twisted += usize::from(p.is_twisted());
    }
    Ok(format!("100/100 invariant ({twisted} with twisted loops)"))
}

fn criterion_5() -> Check {
    for seed in 0..100u64 {
        let mut r = rng(9000 + seed);
        let n = r.gen_range(2..=3);
        let k = r.gen_range(1..=3);
        let loops: Vec<TwistedElement> = (0..k).map(|_| random_twisted(&mut r, n, true)).collect();
        let p = FramedPoint::new(n, vec![wildcat::Grading::trivial(n)], vec![], loops.clone()).unwrap();
        let q = FramedPoint { loops: normalize(&loops), ..p.clone() };
        ensure(verdicts(&p)? == verdicts(&q)?, || format!("tuple {seed}: verdicts change under normalization"))?;
    }
    Ok("100/100 invariant".into())
}

fn criterion_6() -> Check {
    for seed in 0..200u64 {
        let mut r = rng(11000 + seed);
        let n = r.gen_range(1..=4);
        let pure = |r: &mut rand_chacha::ChaCha8Rng| {
            let phi = if r.gen_bool(0.5) { Automorphism::sigma(n) } else { Automorphism::identity(n) };
            TwistedElement::new(random_invertible(r, n), phi).unwrap()
        };
        let (x, y) = (pure(&mut r), pure(&mut r));
        let lhs = &embed_doubled(&x).map_err(e2s)? * &embed_doubled(&y).map_err(e2s)?;
        let rhs = embed_doubled(&x.mul(&y).map_err(e2s)?).map_err(e2s)?;
        ensure(lhs == rhs, || format!("pair {seed}: not multiplicative"))?;
    }
    Ok("200/200 multiplicative".into())
}

fn criterion_7() -> Check {
    for seed in 0..100u64 {
        let mut r = rng(13000 + seed);
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=3);
        let (p, _) = random_point(&mut r, n, m, true);
        let a = stabilizer_lie_dim(&p).map_err(e2s)?;
        let b = commutant_stabilizer_dim(&p).map_err(e2s)?;
        ensure(a == b, || format!("point {seed}: framed {a} vs commutant {b}"))?;
    }
    Ok("100/100 equal".into())
}

fn criterion_8() -> Check {
    let mut corpus = tuple_corpus();
    for seed in 0..50u64 {
        let mut r = rng(15000 + seed);
        let n = r.gen_range(2..=3);
        corpus.push(random_point(&mut r, n, 2, false).0);
    }
    let (mut checked, mut failures) = (0, Vec::new());
    for (i, p) in corpus.iter().enumerate() {
        if p.is_twisted() || !is_polystable(p).map_err(e2s)?.polystable {
            continue;
        }
        checked += 1;
        let blocks = match levi_reduction(p, i as u64) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        let total: usize = blocks.iter().map(|b| b.dim()).sum();
        if total != p.n {
            failures.push(format!("instance {i}: block dimensions sum to {total}, not {}", p.n));
        }
        for b in &blocks {
            let q = restrict_point(p, b).map_err(e2s)?;
            if !is_stable(&q, 0).map_err(e2s)?.stable {
                failures.push(format!("instance {i}: a block of dimension {} is not stable", b.dim()));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} polystable untwisted instances, all blocks stable"))
    } else {
        Err(format!("{} of {checked} polystable untwisted instances fail; first: {}", failures.len(), failures[0]))
    }
}

fn criterion_9() -> Check {
    let circle = |a: i64| Circle::new(1, vec![(1, Scalar::from_integer(a))], 1).unwrap();
    let pm = IrregularClass::new(vec![circle(1), circle(-1)]).unwrap();
    let mut thetas: Vec<f64> = singular_directions(&pm).iter().map(|d| d.theta).collect();
    thetas.sort_by(f64::total_cmp);
    ensure(
        thetas.len() == 2 && thetas[0].abs() < 1e-9 && (thetas[1] - std::f64::consts::PI).abs() < 1e-9,
        || format!("directions {thetas:?}"),
    )?;
    let sc = build_scaffold(&WildSurface::new(0, vec![pm], 2).unwrap()).map_err(e2s)?;
    ensure(sc.generators.len() == 3, || format!("{} generators", sc.generators.len()))?;
    ensure(sc.relation_string().matches('=').count() == 1, || "relation count".into())?;
    for seed in 0..50 {
        let c = random_candidate(&sc, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(verify_candidate(&sc, &c).map_err(e2s)?.is_empty(), || format!("seed {seed}: candidate rejected"))?;
    }
    let katz = IrregularClass::new(vec![Circle::new(2, vec![(3, Scalar::one())], 1).unwrap()]).unwrap();
    let tame = IrregularClass::new(vec![Circle::tame(2)]).unwrap();
    let ks = build_scaffold(&WildSurface::new(0, vec![tame, katz], 2).unwrap()).map_err(e2s)?;
    for seed in 0..50 {
        let c = random_candidate(&ks, seed).map_err(|e| format!("Katz seed {seed}: {e}"))?;
        let p = to_framed_point(&ks, &c).map_err(e2s)?;
        ensure(is_stable(&p, seed).map_err(e2s)?.stable, || format!("Katz seed {seed}: not stable"))?;
    }
    Ok("directions {0, pi}, 3 generators, 50 verified candidates, 50 stable Katz candidates".into())
}

fn criterion_10() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let run = |f: &PathBuf, seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_wildcat"))
            .args(["analyze", "--instance"])
            .arg(f)
            .args(["--seed", seed, "--format", "machine"])
            .output()
            .map(|o| o.stdout)
            .map_err(|e| e.to_string())
    };
    let mut compared = 0;
    for f in &files {
        for seed in ["0", "17"] {
            let (a, b) = (run(f, seed)?, run(f, seed)?);
            ensure(!a.is_empty() || f.to_string_lossy().contains("katz"), || format!("{}: empty output", f.display()))?;
            ensure(a == b, || format!("{} seed {seed}: reports differ", f.display()))?;
            compared += 1;
        }
    }
    // analyze is also deterministic in-process on a twisted point
    let mut r = rng(42);
    let (p, _) = random_point(&mut r, 3, 2, true);
    ensure(analyze(&p, 5).map_err(e2s)? == analyze(&p, 5).map_err(e2s)?, || "in-process analyze differs".into())?;
    Ok(format!("{compared} paired runs byte-identical"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("1 single-grading stability oracle", Duration::from_secs(60), criterion_1),
        ("2 twisted unipotent example", Duration::from_secs(1), criterion_2),
        ("3 radical oracle equivalence", Duration::from_secs(120), criterion_3),
        ("4 action invariance", Duration::from_secs(60), criterion_4),
        ("5 normalization invariance", Duration::MAX, criterion_5),
        ("6 doubled embedding homomorphism", Duration::MAX, criterion_6),
        ("7 stabilizer correspondence", Duration::MAX, criterion_7),
        ("8 Levi reduction soundness", Duration::MAX, criterion_8),
        ("9 Stokes pipeline", Duration::from_secs(120), criterion_9),
        ("10 determinism", Duration::MAX, criterion_10),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let limit_note = if limit == Duration::MAX { String::new() } else { format!(", limit {}s", limit.as_secs()) };
        match result {
            Ok(msg) if elapsed <= limit => {
                println!("PASS criterion {name}: {msg} [{:.2}s{limit_note}]", elapsed.as_secs_f64());
            }
            Ok(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} but took {:.2}s{limit_note}", elapsed.as_secs_f64());
            }
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.2}s{limit_note}]", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
