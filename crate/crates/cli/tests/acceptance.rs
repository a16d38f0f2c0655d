//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic throughout.
//!
//! Runs without the test harness so the lines always reach the output.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use coxring_core::cone::{effective_cone, hilbert_basis, nef_dual, ConeKind};
use coxring_core::enumerate::{enumerate_classes, ClassQuery};
use coxring_core::linalg::rank;
use coxring_core::verdict::{cross_check, decide, CheckOutcome, Status, Theorem, Witness};
use coxring_core::weyl::{orbit, reflect, simple_roots};
use coxring_core::{intersect, ConeDesc, DivisorClass, SurfaceConfig, SurfaceModel};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

struct Entry {
    name: String,
    config: SurfaceConfig,
}

/// Cones of a finite-case corpus configuration, computed once.
struct Finite {
    name: String,
    config: SurfaceConfig,
    eff: ConeDesc,
    nef: ConeDesc,
    nef_hilbert: Vec<DivisorClass>,
}

fn load_corpus() -> Vec<Entry> {
    let mut out = Vec::new();
    for entry in fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        out.push(Entry {
            name: path.file_stem().unwrap().to_string_lossy().into_owned(),
            config: serde_json::from_str(&text).unwrap(),
        });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

fn finite_cases(corpus: &[Entry]) -> Vec<Finite> {
    corpus
        .iter()
        .filter_map(|e| {
            let eff = effective_cone(&e.config).ok()?;
            let nef = nef_dual(&eff).unwrap();
            let nef_hilbert = hilbert_basis(&nef).unwrap();
            Some(Finite {
                name: e.name.clone(),
                config: e.config.clone(),
                eff,
                nef,
                nef_hilbert,
            })
        })
        .collect()
}

/// Every `m` with `sum(m) = sum` and `sum(m^2) = sq`.
fn vectors(n: usize, sum: i64, sq: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if n == 0 {
        if sum == 0 && sq == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if sq < 0 || sum * sum > n as i64 * sq {
        return;
    }
    let top = (sq as f64).sqrt() as i64 + 1;
    for x in -top..=top {
        if x * x <= sq {
            prefix.push(x);
            vectors(n - 1, sum - x, sq - x * x, prefix, out);
            prefix.pop();
        }
    }
}

fn oracle(r: usize, s: i64, k: i64, limit: i64) -> BTreeSet<DivisorClass> {
    let mut found = BTreeSet::new();
    for d0 in -limit..=limit {
        let mut out = Vec::new();
        vectors(r, k + 3 * d0, d0 * d0 - s, &mut Vec::new(), &mut out);
        found.extend(out.into_iter().map(|m| DivisorClass::new(d0, m)));
    }
    found
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let minus_one = [1, 3, 6, 10, 16, 27, 56, 240];
    let roots = [0, 2, 8, 20, 40, 72, 126, 240];
    for r in 1..=8usize {
        for (q, expected) in [
            (ClassQuery::minus_one(), minus_one[r - 1]),
            (ClassQuery::roots(), roots[r - 1]),
        ] {
            let bound = (-100i64..=100)
                .filter(|&d| (3 * d + q.k_degree).pow(2) <= r as i64 * (d * d - q.self_int))
                .map(i64::abs)
                .max()
                .unwrap_or(0);
            let brute = oracle(r, q.self_int, q.k_degree, 2 * bound);
            ensure(brute.iter().all(|c| c.d0().abs() <= bound), || {
                format!("r = {r}: oracle found classes in the outer half")
            })?;
            let got: BTreeSet<DivisorClass> = enumerate_classes(r, &q)
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect();
            ensure(got == brute && got.len() == expected, || {
                format!(
                    "r = {r}, {q:?}: {} classes, oracle {}",
                    got.len(),
                    brute.len()
                )
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "counts match the oracle for r = 1..8 in {elapsed:.2?}"
    ))
}

fn random_class(rng: &mut StdRng, r: usize, bound: i64) -> DivisorClass {
    DivisorClass::new(
        rng.gen_range(-bound..=bound),
        (0..r).map(|_| rng.gen_range(-bound..=bound)).collect(),
    )
}

fn criterion_2() -> Outcome {
    for r in 0..=12usize {
        let model = SurfaceModel::new(r);
        let chi = |d: &DivisorClass| model.euler_characteristic(d).unwrap();
        ensure(chi(&DivisorClass::zero(r)) == 1, || {
            format!("chi(0) at r = {r}")
        })?;
        ensure(chi(&model.canonical()) == 1, || {
            format!("chi(K) at r = {r}")
        })?;
        ensure(chi(&model.anticanonical()) == 1 + model.k_squared(), || {
            format!("chi(-K) at r = {r}")
        })?;
    }
    let mut genus_checked = 0;
    for r in 0..=8 {
        let model = SurfaceModel::new(r);
        for q in [ClassQuery::minus_one(), ClassQuery::roots()] {
            for c in enumerate_classes(r, &q).unwrap() {
                ensure(model.arithmetic_genus(&c).unwrap() == 0, || {
                    format!("genus of {c:?}")
                })?;
                genus_checked += 1;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(2);
    let trials = 10_000;
    for _ in 0..trials {
        let r = rng.gen_range(0..=12);
        let (a, b, c) = (
            random_class(&mut rng, r, 40),
            random_class(&mut rng, r, 40),
            random_class(&mut rng, r, 40),
        );
        let (s, t) = (rng.gen_range(-20..=20), rng.gen_range(-20..=20));
        let combo = a
            .checked_scale(s)
            .unwrap()
            .checked_add(&b.checked_scale(t).unwrap())
            .unwrap();
        let lhs = intersect(&combo, &c).unwrap();
        let rhs = s * intersect(&a, &c).unwrap() + t * intersect(&b, &c).unwrap();
        ensure(lhs == rhs, || {
            format!("bilinearity fails for {a:?}, {b:?}, {c:?}")
        })?;
        ensure(
            intersect(&a, &b).unwrap() == intersect(&b, &a).unwrap(),
            || format!("symmetry fails for {a:?}, {b:?}"),
        )?;
    }
    Ok(format!(
        "chi anchors for r = 0..12, genus 0 on {genus_checked} classes, {trials} bilinearity trials"
    ))
}

fn criterion_3(finite: &[Finite]) -> Outcome {
    let mut checked = 0;
    for f in finite {
        let model = f.config.model();
        let k = model.canonical();
        for x in f.eff.generators.iter().chain(&f.nef_hilbert) {
            let diff = k.checked_sub(x).unwrap();
            ensure(!f.eff.contains(&diff).unwrap(), || {
                format!("{}: K - {x:?} effective", f.name)
            })?;
            checked += 1;
        }
        for n in f.nef.generators.iter().chain(&f.nef_hilbert) {
            ensure(model.square(n).unwrap() >= 0, || {
                format!("{}: {n:?} has negative square", f.name)
            })?;
        }
    }
    Ok(format!(
        "{checked} classes over {} finite corpus cones",
        finite.len()
    ))
}

fn facets(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let dim = gens[0].len();
    let mut candidates = Vec::new();
    for a in gens {
        if dim == 2 {
            candidates.push(vec![-a[1], a[0]]);
        } else {
            for b in gens {
                candidates.push(vec![
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ]);
            }
        }
    }
    let mut out = BTreeSet::new();
    for c in candidates.into_iter().filter(|c| c.iter().any(|&x| x != 0)) {
        for n in [c.clone(), c.iter().map(|x| -x).collect::<Vec<_>>()] {
            if gens.iter().all(|g| dot(&n, g) >= 0) {
                out.insert(n);
            }
        }
    }
    out.into_iter().collect()
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Irreducible lattice points of the cone, searched in a box that contains
/// every half-open parallelepiped of the generators.
fn brute_hilbert(gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let dim = gens[0].len();
    let normals = facets(gens);
    let inside = |x: &[i64]| normals.iter().all(|n| dot(n, x) >= 0);
    let reach = dim as i64 * gens.iter().flatten().map(|x| x.abs()).max().unwrap();
    let mut points = Vec::new();
    let mut x = vec![-reach; dim];
    'outer: loop {
        if x.iter().any(|&v| v != 0) && inside(&x) {
            points.push(x.clone());
        }
        for i in 0..dim {
            x[i] += 1;
            if x[i] <= reach {
                continue 'outer;
            }
            x[i] = -reach;
        }
        break;
    }
    points
        .iter()
        .filter(|x| {
            !points.iter().any(|y| {
                let z: Vec<i64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                z.iter().any(|&v| v != 0) && inside(&z)
            })
        })
        .cloned()
        .collect()
}

fn criterion_4(finite: &[Finite]) -> Outcome {
    for f in finite {
        let model = f.config.model();
        for g in &f.eff.generators {
            for n in &f.nef.generators {
                ensure(model.intersect(g, n).unwrap() >= 0, || {
                    format!("{}: {g:?} . {n:?} < 0", f.name)
                })?;
            }
        }
        let back = nef_dual(&f.nef).map_err(|e| e.to_string())?;
        ensure(back.extremal_rays == f.eff.extremal_rays, || {
            format!("{}: double dual differs", f.name)
        })?;
    }
    let mut rng = StdRng::seed_from_u64(4);
    let mut compared = 0;
    while compared < 200 {
        let dim = rng.gen_range(2..=3);
        let count = rng.gen_range(dim..=dim + 2);
        let gens: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let normals = facets(&gens);
        let spans = |rows: &[Vec<i64>]| rank(rows).unwrap() == dim;
        if !spans(&gens) || normals.is_empty() || !spans(&normals) {
            continue;
        }
        let classes: Vec<DivisorClass> = gens
            .iter()
            .map(|g| DivisorClass::from_coords(g).unwrap())
            .collect();
        let cone = ConeDesc::from_generators(dim - 1, classes, ConeKind::Other).unwrap();
        let got: BTreeSet<Vec<i64>> = hilbert_basis(&cone)
            .unwrap()
            .iter()
            .map(DivisorClass::coords)
            .collect();
        ensure(got == brute_hilbert(&gens), || {
            format!("Hilbert basis differs for {gens:?}")
        })?;
        compared += 1;
    }
    Ok(format!(
        "double duals match on {} finite corpus cones; {compared} rank <= 3 Hilbert bases match brute force",
        finite.len()
    ))
}

fn witness_is_valid(config: &SurfaceConfig, family: &[DivisorClass]) -> bool {
    let model = config.model();
    let distinct: HashSet<&DivisorClass> = family.iter().collect();
    distinct.len() == family.len() && family.iter().all(|c| model.is_minus_one_class(c).unwrap())
}

fn criterion_5(corpus: &[Entry]) -> Outcome {
    let get = |name: &str| &corpus.iter().find(|e| e.name == name).unwrap().config;
    for r in 1..=8 {
        let v = decide(get(&format!("del_pezzo_{r}"))).unwrap();
        ensure(
            v.status == Status::FG && v.theorem == Some(Theorem::CorollaryK2Positive),
            || format!("del_pezzo_{r}: {:?} via {:?}", v.status, v.theorem),
        )?;
    }
    for name in ["nagata_9", "nagata_10"] {
        let start = Instant::now();
        let v = decide(get(name)).unwrap();
        let ok = match &v.witness {
            Witness::InfiniteFamily(w) => w.len() >= 100 && witness_is_valid(get(name), w),
            _ => false,
        };
        let elapsed = start.elapsed();
        ensure(v.status == Status::NotFG && ok, || {
            format!("{name}: {:?}", v.status)
        })?;
        ensure(elapsed < Duration::from_secs(1), || {
            format!("{name} took {elapsed:?}")
        })?;
    }
    let v = decide(get("elliptic_extremal_e8")).unwrap();
    ensure(
        v.status == Status::FG && v.theorem == Some(Theorem::Main2) && v.root_span_rank == Some(8),
        || {
            format!(
                "elliptic_extremal_e8: {:?} {:?} rank {:?}",
                v.status, v.theorem, v.root_span_rank
            )
        },
    )?;
    let v = decide(get("weak_dp_collinear")).unwrap();
    let root = DivisorClass::new(1, vec![1, 1, 1, 0]);
    let has_root = matches!(&v.witness, Witness::Generators(g) if g.contains(&root));
    ensure(v.status == Status::FG && has_root, || {
        "weak_dp_collinear".to_string()
    })?;
    Ok("del Pezzo, Nagata, elliptic E8 and collinear branches as expected".to_string())
}

fn criterion_6(corpus: &[Entry]) -> Outcome {
    let mut fg = 0;
    for e in corpus {
        let v = decide(&e.config).unwrap();
        if v.status != Status::FG {
            continue;
        }
        fg += 1;
        let ok = matches!(&v.witness, Witness::Generators(g) if !g.is_empty());
        ensure(ok, || format!("{}: empty generator list", e.name))?;
        let report = cross_check(&e.config, &v).map_err(|err| err.to_string())?;
        ensure(report.passed(), || {
            format!("{}: {:?}", e.name, report.checks)
        })?;
        let extremality = report.checks.iter().find(|c| c.name == "extremality");
        ensure(
            matches!(extremality, Some(c) if c.outcome == CheckOutcome::Pass),
            || {
                format!(
                    "{}: extremality not established as extremal or unknown",
                    e.name
                )
            },
        )?;
    }
    Ok(format!(
        "{fg} FG corpus configurations pass every non-skipped cross-check"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let trials = 10_000;
    for _ in 0..trials {
        let r = rng.gen_range(3..=12);
        let simple = simple_roots(r);
        let mut root = simple[rng.gen_range(0..simple.len())].clone();
        for _ in 0..rng.gen_range(0..8) {
            root = reflect(&root, &simple[rng.gen_range(0..simple.len())]).unwrap();
        }
        let model = SurfaceModel::new(r);
        let x = random_class(&mut rng, r, 30);
        let y = random_class(&mut rng, r, 30);
        let rx = reflect(&x, &root).unwrap();
        let ry = reflect(&y, &root).unwrap();
        ensure(
            intersect(&rx, &ry).unwrap() == intersect(&x, &y).unwrap(),
            || format!("isometry fails for {root:?}"),
        )?;
        ensure(reflect(&rx, &root).unwrap() == x, || {
            format!("involution fails for {root:?}")
        })?;
        ensure(
            reflect(&model.canonical(), &root).unwrap() == model.canonical(),
            || format!("{root:?} moves K"),
        )?;
    }
    let mut nodes = 0;
    for r in [6usize, 8, 9, 10] {
        let model = SurfaceModel::new(r);
        for x in [DivisorClass::exceptional(r, r), DivisorClass::line(r)] {
            let o = orbit(&x, &simple_roots(r), 500).unwrap();
            for y in &o.classes {
                ensure(
                    model.square(y).unwrap() == model.square(&x).unwrap()
                        && model.k_degree(y).unwrap() == model.k_degree(&x).unwrap(),
                    || format!("orbit node {y:?} changed invariants"),
                )?;
                nodes += 1;
            }
        }
    }
    Ok(format!(
        "{trials} reflection trials, {nodes} orbit nodes checked"
    ))
}

fn coxring(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_coxring"))
        .current_dir(corpus_dir())
        .args(args)
        .output()
        .unwrap()
}

fn criterion_8(corpus: &[Entry]) -> Outcome {
    let mut cases: Vec<(String, Vec<String>)> = corpus
        .iter()
        .map(|e| {
            (
                format!("{}.verdict", e.name),
                vec!["verdict".into(), format!("{}.json", e.name)],
            )
        })
        .collect();
    let manifest = fs::read_to_string(corpus_dir().join("commands.txt")).unwrap();
    for line in manifest
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let mut words = line.split_whitespace().map(String::from);
        let stem = words.next().unwrap();
        cases.push((stem, words.collect()));
    }
    for (stem, args) in &cases {
        let mut argv: Vec<&str> = args.iter().map(String::as_str).collect();
        argv.extend(["--format", "json"]);
        let out = coxring(&argv);
        let expected = fs::read(corpus_dir().join("expected").join(format!("{stem}.json")))
            .map_err(|e| format!("{stem}: {e}"))?;
        ensure(out.status.success() && out.stdout == expected, || {
            format!("{stem} differs")
        })?;
    }
    let mut invalid = 0;
    for entry in fs::read_dir(corpus_dir().join("invalid")).unwrap() {
        let path = entry.unwrap().path();
        let out = coxring(&["verdict", path.to_str().unwrap()]);
        ensure(out.status.code() == Some(2), || {
            format!("{} exit {:?}", path.display(), out.status.code())
        })?;
        invalid += 1;
    }
    let out = coxring(&["curves", "--type", "minus1", "--all", "nagata_9.json"]);
    ensure(out.status.code() == Some(3), || {
        format!("unbounded r = 9 search exit {:?}", out.status.code())
    })?;
    Ok(format!(
        "{} golden cases bit-exact, {invalid} invalid configs exit 2, unbounded r = 9 search exits 3",
        cases.len()
    ))
}

fn main() -> ExitCode {
    let corpus = load_corpus();
    let finite = finite_cases(&corpus);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("enumeration fixtures", Box::new(criterion_1)),
        ("Riemann-Roch and bilinearity", Box::new(criterion_2)),
        (
            "K - x is never effective; nef squares >= 0",
            Box::new(|| criterion_3(&finite)),
        ),
        (
            "cone duality and small Hilbert bases",
            Box::new(|| criterion_4(&finite)),
        ),
        ("verdict branches", Box::new(|| criterion_5(&corpus))),
        ("extremality coherence", Box::new(|| criterion_6(&corpus))),
        ("Weyl invariants", Box::new(criterion_7)),
        (
            "CLI golden replay and exit codes",
            Box::new(|| criterion_8(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS  {name}: {detail} [{elapsed:.2?}]",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
