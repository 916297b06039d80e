//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p hurwitz-core --test acceptance`. The process
//! exits non-zero if any criterion fails or overruns its time limit.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use hurwitz_core::dyck::{enumerate_hurwitz_dyck_paths, is_pruned_dyck};
use hurwitz_core::mobile::{enumerate_mobiles, shift, shift_orbit_size};
use hurwitz_core::oracle::{double_hurwitz, double_hurwitz_with, pruned_double_hurwitz_oracle, single_hurwitz, OracleConfig};
use hurwitz_core::partition::{partitions_desc, types_within};
use hurwitz_core::poly::{
    adjacent_pairs, expected_degree, fit_all_chambers, hyperplanes, labelled_pruned_graphs, per_graph_contribution, sample_points,
    wall_crossing, wall_crossing_formula, SampleBox,
};
use hurwitz_core::pruned_tropical::{enumerate_pruned_monodromy_graphs, tropical_pruned_with, PrunedVertexKind, EdgeRole};
use hurwitz_core::recursion::PrunedRecursion;
use hurwitz_core::scalar::rat;
use hurwitz_core::tropical::{enumerate_monodromy_graphs, tropical_double_hurwitz};
use hurwitz_core::{HurwitzError, HurwitzType, Partition, PrunedSide, Rational, Result};

type Outcome = std::result::Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: HurwitzError) -> String {
    e.to_string()
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v
}

fn ints(v: &[i64]) -> Vec<Rational> {
    sorted(v.iter().map(|&x| rat(x)).collect())
}

fn criterion_1() -> Outcome {
    let v: Rational = double_hurwitz(&HurwitzType::of(1, &[5], &[4, 1])).map_err(err)?;
    check(v == rat(100), format!("oracle gave {v}"))?;
    Ok("H_1((5),(4,1)) = 100".into())
}

fn criterion_2() -> Outcome {
    let t = HurwitzType::of(1, &[5], &[4, 1]);
    let v: Rational = tropical_double_hurwitz(&t).map_err(err)?;
    let graphs = enumerate_monodromy_graphs(&t).map_err(err)?;
    let (am, an) = (t.mu.automorphisms(), t.nu.automorphisms());
    let totals = sorted(graphs.iter().map(|g| g.multiplicity::<Rational>(am, an)).collect());
    check(v == rat(100), format!("tropical gave {v}"))?;
    check(graphs.len() == 7, format!("{} graphs", graphs.len()))?;
    check(totals == ints(&[20, 8, 12, 12, 30, 12, 6]), format!("totals {totals:?}"))?;
    Ok("100 from 7 graphs with totals {20,8,12,12,30,12,6}".into())
}

fn criterion_3() -> Outcome {
    let t = HurwitzType::of(2, &[1, 1, 1], &[3]);
    let oracle: Rational = pruned_double_hurwitz_oracle(&t).map_err(err)?;
    let rec = PrunedRecursion::<Rational>::new();
    let recursion = rec.value(&t).map_err(err)?;
    let graphs = enumerate_pruned_monodromy_graphs::<Rational>(&t).map_err(err)?;
    let total = graphs.iter().fold(rat(0), |a, g| a + g.weight.clone());
    let totals = sorted(graphs.iter().map(|g| g.weight.clone()).collect());
    check(oracle == rat(450), format!("oracle gave {oracle}"))?;
    check(recursion == rat(450), format!("recursion gave {recursion}"))?;
    check(total == rat(450), format!("pruned tropical gave {total}"))?;
    check(graphs.len() == 8, format!("{} graphs", graphs.len()))?;
    check(totals == ints(&[72, 24, 12, 72, 36, 108, 96, 30]), format!("totals {totals:?}"))?;
    Ok("oracle = recursion = pruned tropical = 450 over 8 graphs".into())
}

fn criterion_4() -> Outcome {
    let rec = PrunedRecursion::<Rational>::new();
    let mut checked = 0;
    for d in 2..=8u32 {
        for a in 1..d {
            let t = HurwitzType::of(0, &[d], &[a, d - a]);
            let o: Rational = pruned_double_hurwitz_oracle(&t).map_err(err)?;
            let r = rec.value(&t).map_err(err)?;
            check(o == rat(1) && r == rat(1), format!("{t}: oracle {o}, recursion {r}"))?;
            checked += 1;
            for c in 1..d {
                let t = HurwitzType::of(0, &[a, d - a], &[c, d - c]);
                let expected = rat(2 * a.min(d - a).min(c).min(d - c) as i64);
                let o: Rational = pruned_double_hurwitz_oracle(&t).map_err(err)?;
                let r = rec.value(&t).map_err(err)?;
                check(o == expected && r == expected, format!("{t}: oracle {o}, recursion {r}, expected {expected}"))?;
                checked += 1;
            }
        }
    }
    for d in 1..=6u32 {
        for mu in partitions_desc(d).into_iter().filter(|p| p.len() <= 3) {
            let t = HurwitzType::of(0, &mu, &[d]);
            let o: Rational = pruned_double_hurwitz_oracle(&t).map_err(err)?;
            let r = rec.value(&t).map_err(err)?;
            check(o == rat(0) && r == rat(0), format!("{t}: oracle {o}, recursion {r}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} base-case values agree with the oracle"))
}

fn criterion_5() -> Outcome {
    let rec = PrunedRecursion::<Rational>::new();
    let (mut classical, mut pruned, mut skipped) = (0, 0, 0);
    for t in types_within(5, 4) {
        // Tropical graphs need b > 0; the pruned engines cover every b.
        match double_hurwitz::<Rational>(&t) {
            Ok(_) if t.branch_count() <= 0 => skipped += 1,
            Ok(o) => {
                let tr: Rational = tropical_double_hurwitz(&t).map_err(err)?;
                check(o == tr, format!("{t}: oracle {o}, tropical {tr}"))?;
                classical += 1;
            }
            Err(HurwitzError::BudgetExceeded { .. }) => skipped += 1,
            Err(e) => return Err(err(e)),
        }
        for side in [PrunedSide::Left, PrunedSide::Right] {
            let tp = t.clone().pruned(side);
            match pruned_double_hurwitz_oracle::<Rational>(&tp) {
                Ok(o) => {
                    let r = rec.value(&tp).map_err(err)?;
                    let pt = tropical_pruned_with(&tp, &rec).map_err(err)?;
                    check(o == r && r == pt, format!("{tp}: oracle {o}, recursion {r}, pruned tropical {pt}"))?;
                    pruned += 1;
                }
                Err(HurwitzError::BudgetExceeded { .. }) => skipped += 1,
                Err(e) => return Err(err(e)),
            }
        }
    }
    Ok(format!("{classical} classical and {pruned} pruned types agree ({skipped} skipped)"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for d in 2..=4u32 {
        for mu in partitions_desc(d) {
            let mu = Partition::of(&mu);
            let paths = enumerate_hurwitz_dyck_paths(&mu).map_err(err)?;
            let pruned = paths.iter().filter(|p| is_pruned_dyck(p)).count();
            let h: Rational = single_hurwitz(0, &mu, false).map_err(err)?;
            let ph: Rational = single_hurwitz(0, &mu, true).map_err(err)?;
            let dd = rat(d as i64);
            check(rat(paths.len() as i64) == dd.clone() * h.clone(), format!("mu={mu}: |D|={} vs d*H={}", paths.len(), dd.clone() * h))?;
            check(rat(pruned as i64) == dd.clone() * ph.clone(), format!("mu={mu}: pruned {pruned} vs d*PH={}", dd * ph))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} partitions with d <= 4"))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for d in 1..=3u32 {
        for mu in partitions_desc(d) {
            let mu = Partition::of(&mu);
            let b = mu.len() + d as usize - 2;
            if b == 0 {
                continue;
            }
            let mobiles = enumerate_mobiles(&mu, &Partition::ones(d)).map_err(err)?;
            let paths = enumerate_hurwitz_dyck_paths(&mu).map_err(err)?;
            check(mobiles.len() == (b + 1) * paths.len(), format!("mu={mu}: |M|={} vs (b+1)|D|={}", mobiles.len(), (b + 1) * paths.len()))?;
            for m in &mobiles {
                let mut cur = m.clone();
                for _ in 0..=b {
                    cur = shift(&cur);
                }
                check(cur == *m, format!("mu={mu}: sigma^(b+1) is not the identity"))?;
                check(shift_orbit_size(m) == b + 1, format!("mu={mu}: orbit smaller than b+1"))?;
            }
            checked += mobiles.len();
        }
    }
    Ok(format!("{checked} mobiles with d <= 3"))
}

fn oracle_config() -> OracleConfig {
    OracleConfig { max_degree: 16, ..OracleConfig::default() }
}

fn classical(g: u32, mu: &[u32], nu: &[u32]) -> Result<Rational> {
    let t = HurwitzType::new(g, Partition::new(mu.to_vec())?, Partition::new(nu.to_vec())?)?;
    double_hurwitz_with(&t, &oracle_config())
}

fn criterion_8() -> Outcome {
    let rec = PrunedRecursion::<Rational>::new();
    let pruned = |mu: &[u32], nu: &[u32]| rec.ph(0, mu, nu);
    let h = |mu: &[u32], nu: &[u32]| classical(0, mu, nu);
    let bx = SampleBox { max_part: 12, max_degree: 12 };
    let mut report = Vec::new();
    for (m, n) in [(2usize, 2usize), (1, 3)] {
        let walls = hyperplanes(m, n, false);
        let degree = expected_degree(0, m, n);
        for (name, engine) in [("H", &h as &dyn Fn(&[u32], &[u32]) -> Result<Rational>), ("PH", &pruned)] {
            let (fits, unsampled) = fit_all_chambers(engine, m, n, &walls, degree, bx).map_err(err)?;
            check(!fits.is_empty(), format!("{name} ({m},{n}): no chamber fitted"))?;
            check(fits.iter().all(|f| f.polynomial.degree() <= degree), format!("{name} ({m},{n}): degree too high"))?;
            report.push(format!("{name}({m},{n}): {} chambers, {} unsampled", fits.len(), unsampled.len()));
        }
    }
    Ok(report.join("; "))
}

fn criterion_9() -> Outcome {
    let (m, n) = (2, 2);
    let walls = hyperplanes(m, n, false);
    let bx = SampleBox { max_part: 8, max_degree: 8 };
    let h = |mu: &[u32], nu: &[u32]| classical(0, mu, nu);
    let (fits, _) = fit_all_chambers(&h, m, n, &walls, expected_degree(0, m, n), bx).map_err(err)?;
    let pairs = adjacent_pairs(&fits);
    check(!pairs.is_empty(), "no adjacent chambers")?;
    let points = sample_points(m, n, &walls, bx);
    let mut evaluated = 0;
    for pair in &pairs {
        let wc = wall_crossing(&fits[pair.positive].polynomial, &fits[pair.negative].polynomial);
        for (x, sig) in points.iter().filter(|(_, s)| *s == fits[pair.positive].signature) {
            let _ = sig;
            let expected = wall_crossing_formula(&walls[pair.wall], x, m, &h).map_err(err)?;
            let got = wc.eval(x);
            check(got == expected, format!("wall {} at {x:?}: fit difference {got}, formula {expected}", walls[pair.wall]))?;
            evaluated += 1;
        }
    }
    Ok(format!("{} wall crossings, {evaluated} point evaluations", pairs.len()))
}

fn criterion_10() -> Outcome {
    let rec = PrunedRecursion::<Rational>::new();
    // The type: one initial vertex absorbing both left ends and emitting
    // the first right end, followed by a cut producing the other two.
    let seed = labelled_pruned_graphs(0, &[5, 5], &[3, 3, 4], &rec).map_err(err)?;
    let gamma = seed
        .iter()
        .find(|g| {
            g.vertices.iter().map(|v| v.kind).collect::<Vec<_>>() == [PrunedVertexKind::Initial, PrunedVertexKind::Cut]
                && g.edges.iter().any(|e| e.role == EdgeRole::RightEnd && e.src == 1 && e.label == Some(0))
        })
        .ok_or("example type not found at the seed point")?;
    let key = gamma.structure_key();
    let mut count = 0;
    for mu1 in 2..=12u32 {
        for mu2 in 2..=12u32 {
            for nu1 in 1..mu1.min(mu2) {
                for nu2 in 1..mu1.min(mu2) {
                    let Some(nu3) = (mu1 + mu2).checked_sub(nu1 + nu2) else { continue };
                    if nu3 == 0 || nu3 >= mu1.min(mu2) {
                        continue;
                    }
                    let (mu, nu) = ([mu1, mu2], [nu1, nu2, nu3]);
                    let got = per_graph_contribution(&key, 0, &mu, &nu, &rec).map_err(err)?;
                    let expected = rat(2 * nu1 as i64 * (mu1 + mu2 - nu1) as i64);
                    check(got == expected, format!("mu={mu:?} nu={nu:?}: {got} vs {expected}"))?;
                    count += 1;
                }
            }
        }
    }
    check(count > 0, "empty chamber sample")?;
    Ok(format!("2 nu1 (mu1 + mu2 - nu1) at {count} lattice points"))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "oracle H_1((5),(4,1))", 10, criterion_1),
        (2, "tropical graphs of (1,(5),(4,1))", 5, criterion_2),
        (3, "pruned engines on (2,(1,1,1),(3))", 30, criterion_3),
        (4, "pruned base cases", 120, criterion_4),
        (5, "cross-engine sweep d<=5 b<=4", 600, criterion_5),
        (6, "Dyck path identities d<=4", 120, criterion_6),
        (7, "mobile identities d<=3", 120, criterion_7),
        (8, "chamber polynomial fits", 300, criterion_8),
        (9, "genus-0 wall-crossing", 300, criterion_9),
        (10, "per-graph contribution", 60, criterion_10),
    ];
    let mut failures = 0;
    let mut timings = BTreeMap::new();
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        timings.insert(n, elapsed);
        let over = elapsed > Duration::from_secs(limit);
        match outcome {
            Ok(detail) if !over => println!("PASS {n:>2} {name}: {detail} [{:.2}s < {limit}s]", elapsed.as_secs_f64()),
            Ok(detail) => {
                failures += 1;
                println!("FAIL {n:>2} {name}: {detail} [{:.2}s exceeds {limit}s]", elapsed.as_secs_f64());
            }
            Err(why) => {
                failures += 1;
                println!("FAIL {n:>2} {name}: {why} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    let total: Duration = timings.values().sum();
    println!("{} of 10 criteria passed in {:.2}s", 10 - failures, total.as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
