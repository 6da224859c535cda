//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use realbott::action::{affine_lift, compose_subset, deck_element, fixed_points, generator_action};
use realbott::classifier::{
    classify, family_count, subcase_counts, verify_table, Classification, ClassifyOptions,
    FamilySpec, Fibre,
};
use realbott::equivalence::{apply_move, equivalent, invariant_key, neighbors, swap_move};
use realbott::{block_type, enumerate, normal_form, BottMatrix, CoordinateMap, FixedPointProfile};

type Outcome = Result<String, String>;

fn m(text: &str) -> BottMatrix {
    BottMatrix::parse(text).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts(jobs: usize) -> ClassifyOptions {
    ClassifyOptions { jobs, audit: false }
}

struct Cache {
    by_size: HashMap<usize, Classification>,
}

impl Cache {
    fn get(&mut self, n: usize) -> Result<&Classification, String> {
        if let Entry::Vacant(slot) = self.by_size.entry(n) {
            let c = classify(n, opts(0)).map_err(|e| format!("classify({n}): {e}"))?;
            slot.insert(c);
        }
        Ok(&self.by_size[&n])
    }
}

fn class_counts(cache: &mut Cache) -> Outcome {
    let mut timings = Vec::new();
    for (n, expected) in [(2, 2), (3, 4), (4, 12), (5, 54)] {
        let start = Instant::now();
        let got = cache.get(n)?.class_count();
        timings.push(format!("n={n}:{got} in {:.2?}", start.elapsed()));
        ensure(got == expected, || {
            format!("classify({n}) = {got}, expected {expected}")
        })?;
    }
    let start = Instant::now();
    let six = cache.get(6)?;
    ensure(!six.report.verified, || {
        "size 6 must be flagged as unverified".into()
    })?;
    timings.push(format!(
        "n=6:{} (unverified) in {:.2?}",
        six.class_count(),
        start.elapsed()
    ));
    Ok(timings.join(", "))
}

fn table_fidelity(cache: &mut Cache) -> Outcome {
    let mut notes = Vec::new();
    for n in [3, 4] {
        let report = verify_table(cache.get(n)?).map_err(|e| e.to_string())?;
        ensure(report.ok, || format!("size {n}: {:?}", report.violations))?;
        ensure(report.covers_every_class, || {
            format!("size {n}: table misses a class")
        })?;
        notes.push(format!(
            "size {n}: {} classes, {} listed matrices",
            report.classes.len(),
            report.listed_matrices
        ));
    }
    Ok(notes.join("; "))
}

const OVER_THREE_CHAIN: [&str; 4] = [
    "10110\n01010\n00110\n00011\n00001\n",
    "10010\n01100\n00110\n00011\n00001\n",
    "10100\n01001\n00110\n00011\n00001\n",
    "10101\n01100\n00110\n00011\n00001\n",
];

fn pairwise_verdicts(_: &mut Cache) -> Outcome {
    let a: Vec<BottMatrix> = OVER_THREE_CHAIN.iter().map(|t| m(t)).collect();
    let v12 = equivalent(&a[0], &a[1]).map_err(|e| e.to_string())?;
    let v23 = equivalent(&a[1], &a[2]).map_err(|e| e.to_string())?;
    let v34 = equivalent(&a[2], &a[3]).map_err(|e| e.to_string())?;
    ensure(v12.equivalent && v12.keys_agree, || {
        "A1 and A2 should be equivalent".into()
    })?;
    ensure(!v23.equivalent, || {
        "A2 and A3 should not be equivalent".into()
    })?;
    ensure(!v23.keys_agree, || "A2 and A3 keys should differ".into())?;
    ensure(v34.equivalent, || "A3 and A4 should be equivalent".into())?;
    // the whole (Z2)^2 action of A1 fixes 3 tori, 4 circles and 4 points
    let sf = normal_form(&a[0]);
    let agg = realbott::action_profile(&sf)
        .map_err(|e| e.to_string())?
        .aggregate();
    ensure(
        agg.dimension_counts() == vec![(2, 3), (1, 4), (0, 4)],
        || format!("aggregate of A1 is {:?}", agg.dimension_counts()),
    )?;
    Ok("A1~A2, A2!~A3 (keys differ), A3~A4".into())
}

const LISTING: [(&str, &[(usize, usize)]); 4] = [
    (
        "11000\n01100\n00110\n00011\n00001\n",
        &[(3, 1), (2, 1), (1, 1), (0, 2)],
    ),
    (
        "11010\n01100\n00110\n00011\n00001\n",
        &[(2, 2), (1, 3), (0, 2)],
    ),
    (
        "11001\n01100\n00110\n00011\n00001\n",
        &[(2, 2), (1, 3), (0, 2)],
    ),
    (
        "11011\n01100\n00110\n00011\n00001\n",
        &[(2, 1), (1, 5), (0, 2)],
    ),
];

fn fixed_point_listings(_: &mut Cache) -> Outcome {
    let mut profiles: Vec<FixedPointProfile> = Vec::new();
    for (idx, (text, expected)) in LISTING.iter().enumerate() {
        let sf = normal_form(&m(text));
        ensure(sf.k() == 1 && sf.s() == 1, || {
            format!("matrix {} is not a circle over a base", idx + 1)
        })?;
        let ap = realbott::action_profile(&sf).map_err(|e| e.to_string())?;
        let p = ap.elements[0].profile.clone();
        ensure(p.dimension_counts() == expected.to_vec(), || {
            format!(
                "matrix {}: {:?}, expected {expected:?}",
                idx + 1,
                p.dimension_counts()
            )
        })?;
        profiles.push(p);
    }
    ensure(
        profiles[1].dimension_counts() == profiles[2].dimension_counts(),
        || "matrices 2 and 3 should have the same dimension multiset".into(),
    )?;
    ensure(profiles[1] != profiles[2], || {
        "matrices 2 and 3 should differ in type".into()
    })?;
    for i in 0..4 {
        for j in i + 1..4 {
            if (i, j) != (1, 2) {
                ensure(
                    profiles[i].dimension_counts() != profiles[j].dimension_counts(),
                    || format!("matrices {} and {} should differ", i + 1, j + 1),
                )?;
            }
        }
    }
    Ok("all four listings reproduced; the middle two separated only by type".into())
}

fn breakdown(cache: &mut Cache) -> Outcome {
    let got = subcase_counts(cache.get(5)?);
    let expected: BTreeMap<usize, usize> = [(1, 29), (2, 19), (3, 4), (4, 1), (5, 1)].into();
    ensure(got == expected, || format!("got {got:?}"))?;
    Ok(format!("{got:?}"))
}

fn family_counts(cache: &mut Cache) -> Outcome {
    let mut checks: Vec<(usize, FamilySpec, usize)> = vec![
        (5, FamilySpec::CorankAtMost2, 6),
        (6, FamilySpec::CorankAtMost2, 6),
    ];
    for k in 2..=5 {
        checks.push((k + 2, FamilySpec::CircleOverCircleTorus, k / 2 + 1));
    }
    for n in [5, 6] {
        checks.push((n, FamilySpec::CircleOverTorusBundle(Fibre::Torus), 3));
        checks.push((n, FamilySpec::CircleOverTorusBundle(Fibre::Klein), 3));
    }
    for n in 2..=6 {
        for k in 1..n {
            checks.push((n, FamilySpec::TorusOverTorus(k), 1));
        }
    }
    for (n, k) in [(5, 2), (6, 3), (6, 2)] {
        checks.push((n, FamilySpec::CircleOverChain(k), (k + 1) << (n - k - 3)));
    }
    let mut failures = Vec::new();
    for (n, spec, expected) in &checks {
        let got = family_count(cache.get(*n)?, spec).map_err(|e| e.to_string())?;
        if got != *expected {
            failures.push(format!("{spec} at n={n}: {got}, expected {expected}"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{} family counts exact", checks.len()))
}

/// Connected components of the fixed set of `beta` in `M(B)`, found by
/// sampling every circle at 8 points. Returns component counts by dimension.
fn brute_force_components(beta: &CoordinateMap, b: &BottMatrix) -> Vec<(usize, usize)> {
    const D: u32 = 8;
    let mdim = b.size();
    let deck: Vec<CoordinateMap> = (0..1u16 << mdim)
        .map(|r| deck_element(b, r as u8))
        .collect();
    let total = (D as usize).pow(mdim as u32);
    let decode = |mut idx: usize| -> Vec<u32> {
        (0..mdim)
            .map(|_| {
                let v = (idx % D as usize) as u32;
                idx /= D as usize;
                v
            })
            .collect()
    };
    let encode = |x: &[u32]| {
        x.iter()
            .rev()
            .fold(0usize, |acc, &v| acc * D as usize + v as usize)
    };
    let fixed: Vec<bool> = (0..total)
        .map(|idx| {
            let x = decode(idx);
            let image = beta.apply_grid(&x, D);
            deck.iter().any(|g| g.apply_grid(&x, D) == image)
        })
        .collect();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let join = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    for idx in 0..total {
        if !fixed[idx] {
            continue;
        }
        let x = decode(idx);
        for j in 0..mdim {
            let mut y = x.clone();
            y[j] = (y[j] + 1) % D;
            let k = encode(&y);
            if fixed[k] {
                join(&mut parent, idx, k);
            }
        }
        // clusters related by the deck group are one component downstairs
        for g in &deck {
            let k = encode(&g.apply_grid(&x, D));
            join(&mut parent, idx, k);
        }
    }
    // clusters alone, to read off dimensions: a d-dimensional cluster has 8^d points
    let mut cluster_parent: Vec<usize> = (0..total).collect();
    for idx in 0..total {
        if !fixed[idx] {
            continue;
        }
        let x = decode(idx);
        for j in 0..mdim {
            let mut y = x.clone();
            y[j] = (y[j] + 1) % D;
            let k = encode(&y);
            if fixed[k] {
                let (ra, rb) = (find(&mut cluster_parent, idx), find(&mut cluster_parent, k));
                cluster_parent[ra] = rb;
            }
        }
    }
    let mut cluster_size: HashMap<usize, usize> = HashMap::new();
    for idx in (0..total).filter(|&i| fixed[i]) {
        *cluster_size
            .entry(find(&mut cluster_parent, idx))
            .or_insert(0) += 1;
    }
    let mut component_dim: BTreeMap<usize, usize> = BTreeMap::new();
    for idx in (0..total).filter(|&i| fixed[i]) {
        let comp = find(&mut parent, idx);
        let size = cluster_size[&find(&mut cluster_parent, idx)];
        let dim = (0..=mdim)
            .find(|&d| (D as usize).pow(d as u32) == size)
            .expect("cluster is a subtorus");
        component_dim.insert(comp, dim);
    }
    let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
    for d in component_dim.values() {
        *by_dim.entry(*d).or_insert(0) += 1;
    }
    by_dim.into_iter().rev().collect()
}

fn property_suites(_: &mut Cache) -> Outcome {
    let mut notes = Vec::new();

    // invariant keys constant along every move edge, exhaustive n <= 5
    let mut edges = 0usize;
    for n in 1..=5 {
        let keys: HashMap<BottMatrix, _> = enumerate(n)
            .unwrap()
            .map(|a| (a, invariant_key(&a).unwrap()))
            .collect();
        for a in enumerate(n).unwrap() {
            for (mv, b) in neighbors(&a) {
                edges += 1;
                ensure(keys[&a] == keys[&b], || {
                    format!("key changes along {mv:?} from {a:?}")
                })?;
            }
        }
    }
    notes.push(format!("{edges} edges key-stable"));

    // involution laws and swap-gate symmetry
    for n in 1..=5 {
        for a in enumerate(n).unwrap() {
            for (mv, b) in neighbors(&a) {
                ensure(apply_move(&b, mv).unwrap() == Some(a), || {
                    format!("{mv:?} not involutive on {a:?}")
                })?;
            }
            for j in 0..n.saturating_sub(1) {
                let there = swap_move(&a, j).unwrap();
                if let Some(b) = there {
                    ensure(swap_move(&b, j).unwrap() == Some(a), || {
                        format!("swap {j} on {a:?}")
                    })?;
                }
            }
        }
    }
    notes.push("involutions ok".into());

    // freeness: a nonempty product negates its least row coordinate
    for n in 1..=4 {
        for a in enumerate(n).unwrap() {
            for rows in 1u8..1 << n {
                let list: Vec<usize> = (0..n).filter(|&i| (rows >> i) & 1 == 1).collect();
                let g = compose_subset(&a, &list).unwrap();
                ensure(g.op(list[0]).negates(), || {
                    format!("{a:?} rows {list:?} not free")
                })?;
            }
        }
    }
    notes.push("deck action free".into());

    // lifts project to the generators, and generators commute, on the 8-grid
    for n in 1..=4 {
        let grid: Vec<Vec<u32>> = (0..8usize.pow(n as u32))
            .map(|mut idx| {
                (0..n)
                    .map(|_| {
                        let v = (idx % 8) as u32;
                        idx /= 8;
                        v
                    })
                    .collect()
            })
            .collect();
        for a in enumerate(n).unwrap() {
            let gens: Vec<CoordinateMap> =
                (0..n).map(|i| generator_action(&a, i).unwrap()).collect();
            for i in 0..n {
                let lift = affine_lift(&a, i).unwrap();
                for x in &grid {
                    ensure(lift.apply_grid(x, 8) == gens[i].apply_grid(x, 8), || {
                        format!("lift {i} of {a:?} at {x:?}")
                    })?;
                    for j in 0..n {
                        let ij = gens[i].apply_grid(&gens[j].apply_grid(x, 8), 8);
                        let ji = gens[j].apply_grid(&gens[i].apply_grid(x, 8), 8);
                        ensure(ij == ji, || format!("g{i} g{j} do not commute on {a:?}"))?;
                    }
                }
            }
        }
    }
    notes.push("projection and commutation ok".into());

    // fixed-point engine against the brute-force grid, every beta, m <= 3
    let mut cases = 0;
    for mdim in 1..=3 {
        for b in enumerate(mdim).unwrap() {
            let bt = block_type(&b);
            for neg in 0u8..1 << mdim {
                for conj in 0u8..1 << mdim {
                    let beta = CoordinateMap::from_masks(mdim, neg, conj);
                    let engine = fixed_points(&beta, &b, &bt).unwrap().dimension_counts();
                    let brute = brute_force_components(&beta, &b);
                    cases += 1;
                    ensure(engine == brute, || {
                        format!("beta {beta:?} on {b:?}: engine {engine:?}, grid {brute:?}")
                    })?;
                }
            }
        }
    }
    notes.push(format!("{cases} oracle cases agree"));

    // determinism across worker counts
    for n in [5, 6] {
        let one = classify(n, opts(1)).map_err(|e| e.to_string())?;
        let four = classify(n, opts(4)).map_err(|e| e.to_string())?;
        let (x, y) = (
            serde_json::to_string(&one.report).unwrap(),
            serde_json::to_string(&four.report).unwrap(),
        );
        ensure(x == y, || format!("size {n}: jobs 1 and 4 disagree"))?;
    }
    notes.push("jobs 1 == jobs 4".into());
    Ok(notes.join(", "))
}

type Criterion = (&'static str, fn(&mut Cache) -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("class counts for sizes 2-5", class_counts),
        ("reference class lists for sizes 3 and 4", table_fidelity),
        ("pairwise verdicts over the 3-chain", pairwise_verdicts),
        (
            "fixed-point listings over the 4-chain",
            fixed_point_listings,
        ),
        ("size-5 breakdown by torus rank", breakdown),
        ("family counts", family_counts),
        ("property suites", property_suites),
    ];
    let mut cache = Cache {
        by_size: HashMap::new(),
    };
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut cache)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS  {name} ({detail}) [{elapsed:.2?}]",
                idx + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{elapsed:.2?}]", idx + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
