//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use ionet::decide::{cube_coverable, cube_live, cube_reachable, not_live_set, EngineChoice, QueryOptions, Quantifier, Verdict, Witness};
use ionet::format::*;
use ionet::generate::{generate_random_instance, random_net, random_set, Instance, Limits};
use ionet::oracle::{all_markings, enumerate_cube, Oracle};
use ionet::protocol::{check_correct, check_well_specified, threshold_three, IOProtocol, PredicateSpec};
use ionet::pruning::{search, witness_bound, SearchOptions, SearchOutcome};
use ionet::transform::{post_star, pre_star};
use ionet::{Cube, CountingSet, IONet, Marking};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: u64 = 200;
const MAX_TOTAL: u64 = 8;
const TRIPLES: usize = 10_000;
const FIRES: usize = 10_000;
const LIVENESS_INSTANCES: u64 = 50;
const LIVENESS_TOTAL: u64 = 6;
const POPULATION: u64 = 6;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 7] = [
        ("differential reachability", differential),
        ("boolean algebra", boolean_algebra),
        ("conservation", conservation),
        ("witness bound", witness_bound_check),
        ("liveness agreement", liveness),
        ("protocol checker", protocols),
        ("determinism and round-trip", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag}: {name}: {detail} [{:.1?}]", i + 1, start.elapsed());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}

fn corpus() -> impl Iterator<Item = (u64, Instance)> {
    (0..CORPUS).map(|s| (s, generate_random_instance(s, Limits::default())))
}

fn engine(e: EngineChoice) -> QueryOptions {
    QueryOptions { engine: e, bound: None }
}

fn members(s: &CountingSet, total: u64) -> Vec<Marking> {
    let mut out: Vec<Marking> = s.cubes().iter().flat_map(|c| enumerate_cube(c, total)).collect();
    out.sort();
    out.dedup();
    out
}

fn check_witness(net: &IONet, v: &Verdict, from: &CountingSet, to: &CountingSet) -> Result<(), String> {
    let t = v.trajectory().ok_or("positive verdict without trajectory")?;
    let path = net.replay(t).map_err(|e| e.to_string())?;
    let end = path.last().expect("nonempty");
    if !from.contains(t.start.counts()) || !to.contains(end.counts()) {
        return Err(format!("witness {} .. {end} does not connect the sets", t.start));
    }
    Ok(())
}

/// Symbolic and explicit engines agree, and `pre*`/`post*` membership
/// matches the oracle for every marking of small total.
fn differential() -> Check {
    let mut markings = 0u64;
    let mut positive = 0;
    for (seed, inst) in corpus() {
        let Instance { net, from, to } = &inst;
        let ctx = |m: String| format!("seed {seed}: {m}");
        for cover in [false, true] {
            let q = if cover { cube_coverable } else { cube_reachable };
            let sym = q(net, from, to, engine(EngineChoice::Symbolic)).map_err(|e| ctx(e.to_string()))?;
            let exp = q(net, from, to, engine(EngineChoice::Explicit)).map_err(|e| ctx(e.to_string()))?;
            if sym.answer != exp.answer {
                return Err(ctx(format!("engines disagree (cover={cover}): symbolic {}, explicit {}", sym.answer, exp.answer)));
            }
            if sym.answer {
                let target = if cover { to.upward_closure() } else { to.clone() };
                check_witness(net, &sym, from, &target).map_err(&ctx)?;
                check_witness(net, &exp, from, &target).map_err(&ctx)?;
                positive += usize::from(!cover);
            }
        }
        let pre = pre_star(net, to).map_err(|e| ctx(e.to_string()))?;
        let post = post_star(net, from).map_err(|e| ctx(e.to_string()))?;
        let oracle = Oracle::new(net);
        for k in 0..=MAX_TOTAL {
            let mut forward: HashSet<Marking> = HashSet::new();
            for m in members(from, k) {
                forward.extend(oracle.reach_set(&m).map_err(|e| ctx(e.to_string()))?);
            }
            for m in all_markings(net.num_places(), k) {
                markings += 1;
                let reaches = oracle.reaches(&m, |r| to.contains(r.counts())).map_err(|e| ctx(e.to_string()))?;
                if pre.contains(m.counts()) != reaches {
                    return Err(ctx(format!("pre* membership of {m}: symbolic {}, oracle {reaches}", !reaches)));
                }
                let reached = forward.contains(&m);
                if post.contains(m.counts()) != reached {
                    return Err(ctx(format!("post* membership of {m}: symbolic {}, oracle {reached}", !reached)));
                }
            }
        }
    }
    Ok(format!(
        "{CORPUS}/{CORPUS} instances agree ({positive} reachable); {markings} markings of total <= {MAX_TOTAL} checked against the oracle"
    ))
}

fn boolean_algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..TRIPLES {
        let dim = rng.gen_range(1..=5);
        let a = random_set(&mut rng, dim, 4);
        let b = random_set(&mut rng, dim, 4);
        let m: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..=5)).collect();
        let (x, y) = (a.contains(&m), b.contains(&m));
        let e = |e: ionet::Error| e.to_string();
        let laws = [
            ("union", a.union(&b).map_err(e)?.contains(&m) == (x || y)),
            ("intersection", a.intersect(&b).map_err(e)?.contains(&m) == (x && y)),
            ("complement", a.complement().contains(&m) == !x),
            ("difference", a.difference(&b).map_err(e)?.contains(&m) == (x && !y)),
            (
                "de morgan (union)",
                a.union(&b).map_err(e)?.complement().contains(&m)
                    == a.complement().intersect(&b.complement()).map_err(e)?.contains(&m),
            ),
            (
                "de morgan (intersection)",
                a.intersect(&b).map_err(e)?.complement().contains(&m)
                    == a.complement().union(&b.complement()).map_err(e)?.contains(&m),
            ),
        ];
        if let Some((law, _)) = laws.iter().find(|(_, ok)| !ok) {
            return Err(format!("triple {i}: {law} fails for {a} / {b} at {m:?}"));
        }
    }
    Ok(format!("{TRIPLES}/{TRIPLES} triples satisfy all laws"))
}

fn conservation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut fired = 0;
    let mut attempts = 0;
    while fired < FIRES {
        attempts += 1;
        let places = rng.gen_range(1..=5);
        let transitions = rng.gen_range(1..=8);
        let net = random_net(&mut rng, places, transitions);
        let m = Marking::new((0..places).map(|_| rng.gen_range(0..=6)).collect());
        let enabled: Vec<_> = net.transitions().iter().filter(|t| t.is_enabled(m.counts())).collect();
        if enabled.is_empty() {
            continue;
        }
        let t = enabled[rng.gen_range(0..enabled.len())];
        let next = net.fire(&m, t).map_err(|e| e.to_string())?;
        if next.total() != m.total() {
            return Err(format!("{m} --{}--> {next} changes the total", t.id));
        }
        fired += 1;
    }
    Ok(format!("{fired}/{FIRES} steps conserve the total ({attempts} markings drawn)"))
}

/// Whenever a cube pair is reachable (symbolically), bounded search finds a
/// witness no larger than the bound.
fn witness_bound_check() -> Check {
    let mut pairs = 0;
    let mut worst = 0.0f64;
    for (seed, inst) in corpus() {
        let Instance { net, from, to } = &inst;
        for a in from.cubes().iter().filter(|c| !c.is_empty()) {
            for b in to.cubes().iter().filter(|c| !c.is_empty()) {
                let (fa, fb) = (CountingSet::from_cube(a.clone()), CountingSet::from_cube(b.clone()));
                let sym = cube_reachable(net, &fa, &fb, engine(EngineChoice::Symbolic)).map_err(|e| e.to_string())?;
                if !sym.answer {
                    continue;
                }
                pairs += 1;
                let bound = witness_bound(net, a, b).map_err(|e| e.to_string())?.0;
                let (outcome, _) = search(net, a, b, SearchOptions::default()).map_err(|e| e.to_string())?;
                let SearchOutcome::Found(t) = outcome else {
                    return Err(format!("seed {seed}: reachable pair {a} -> {b} has no witness of total <= {bound}"));
                };
                let path = net.replay(&t).map_err(|e| e.to_string())?;
                if t.start.total() > bound || !a.contains(t.start.counts()) || !b.contains(path.last().unwrap().counts()) {
                    return Err(format!("seed {seed}: bad witness for {a} -> {b}"));
                }
                worst = worst.max(t.start.total() as f64 / bound as f64);
            }
        }
    }
    Ok(format!("{pairs}/{pairs} reachable cube pairs have a witness within the bound (largest total/bound {worst:.2})"))
}

fn liveness() -> Check {
    let mut checked = 0;
    let mut negatives = 0;
    for seed in 0..LIVENESS_INSTANCES {
        let Instance { net, from: s, .. } = generate_random_instance(seed, Limits::default());
        let ctx = |m: String| format!("seed {seed}: {m}");
        let v = cube_live(&net, &s, Quantifier::All).map_err(|e| ctx(e.to_string()))?;
        let not_live = not_live_set(&net).map_err(|e| ctx(e.to_string()))?;
        let oracle = Oracle::new(&net);
        let mut all_live = true;
        for k in 0..=LIVENESS_TOTAL {
            for m in members(&s, k) {
                checked += 1;
                let live = oracle.marking_live(&m).map_err(|e| ctx(e.to_string()))?;
                all_live &= live;
                if not_live.contains(m.counts()) == live {
                    return Err(ctx(format!("{m}: symbolic live={}, oracle live={live}", !live)));
                }
            }
        }
        if v.answer && !all_live {
            return Err(ctx("cube_live(all) is true but the oracle finds a non-live member".into()));
        }
        if !v.answer {
            negatives += 1;
            let Some(Witness::Marking(w)) = &v.witness else {
                return Err(ctx("negative verdict without witness".into()));
            };
            if !s.contains(w.counts()) || oracle.marking_live(w).map_err(|e| ctx(e.to_string()))? {
                return Err(ctx(format!("witness {w} is live or outside the set")));
            }
        }
    }
    Ok(format!(
        "{LIVENESS_INSTANCES}/{LIVENESS_INSTANCES} instances agree on {checked} members of total <= {LIVENESS_TOTAL}; {negatives} negative witnesses confirmed"
    ))
}

fn populations(p: &IOProtocol) -> Vec<Marking> {
    let init = p.initial_set(1);
    (1..=POPULATION)
        .flat_map(|k| all_markings(p.states().len(), k))
        .filter(|m| init.contains(m.counts()))
        .collect()
}

/// Inputs of size <= POPULATION on which the oracle's stable output differs
/// from the predicate.
fn oracle_violations(p: &IOProtocol, phi: &PredicateSpec) -> Result<Vec<Marking>, String> {
    let (net, _) = p.to_net().map_err(|e| e.to_string())?;
    let oracle = Oracle::new(&net);
    let init = p.initial_indices();
    let mut bad = Vec::new();
    for m in populations(p) {
        let input: Vec<u64> = init.iter().map(|&i| m.counts()[i]).collect();
        let want = u8::from(phi.holds(&input));
        if oracle.fair_stabilization(&m, p.outputs()).map_err(|e| e.to_string())? != Some(want) {
            bad.push(m);
        }
    }
    Ok(bad)
}

fn protocols() -> Check {
    let e = |e: ionet::Error| e.to_string();
    let p = threshold_three();
    let phi = PredicateSpec::new(&p, CountingSet::from_cube(Cube::from_bounds(&[(3, None)]))).map_err(e)?;
    if !check_correct(&p, &phi, 1).map_err(e)?.answer {
        return Err("threshold-3 protocol reported incorrect".into());
    }
    if !check_well_specified(&p, 1).map_err(e)?.answer {
        return Err("threshold-3 protocol reported not well-specified".into());
    }
    let bad = oracle_violations(&p, &phi)?;
    if !bad.is_empty() {
        return Err(format!("oracle finds threshold-3 violations, e.g. {}", bad[0]));
    }

    let mutated = IOProtocol::new(
        p.states().to_vec(),
        p.initial().to_vec(),
        &[("1".into(), 0), ("2".into(), 1), ("3".into(), 1)],
        p.rules().to_vec(),
    )
    .map_err(e)?;
    let v = check_correct(&mutated, &phi, 1).map_err(e)?;
    if v.answer {
        return Err("mutated protocol reported correct".into());
    }
    let t = v.trajectory().ok_or("counterexample without trajectory")?;
    let (net, _) = mutated.to_net().map_err(e)?;
    let end = net.replay(t).map_err(e)?.pop().unwrap();
    let want = u8::from(phi.holds(&[t.start.counts()[0]]));
    let got = Oracle::new(&net).fair_stabilization(&end, mutated.outputs()).map_err(e)?;
    if got == Some(want) {
        return Err(format!("counterexample end {end} does stabilize to {want}"));
    }
    let bad = oracle_violations(&mutated, &phi)?;
    if bad.is_empty() {
        return Err("oracle finds no violation of the mutated protocol".into());
    }
    Ok(format!(
        "threshold-3 correct and mutant incorrect (counterexample {} -> {end}); oracle agrees on {} populations of size <= {POPULATION} each",
        t.start,
        populations(&p).len()
    ))
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn round_trips(inst: &Instance, p: &IOProtocol) -> Result<(), String> {
    let places = inst.net.places();
    let e = |e: ParseError| e.to_string();
    let same = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what} does not round-trip")) };
    same(parse_net(&net_to_json(&inst.net)).map_err(e)? == inst.net, "net")?;
    for s in [&inst.from, &inst.to] {
        same(parse_set(&set_to_json(s, places), places).map_err(e)? == *s, "counting set")?;
        for c in s.cubes() {
            same(parse_cube(&cube_to_json(c, places), places).map_err(e)? == *c, "cube")?;
        }
    }
    let v = cube_reachable(&inst.net, &inst.from, &inst.to, engine(EngineChoice::Symbolic)).map_err(|e| e.to_string())?;
    same(parse_verdict(&verdict_to_json(&v, &inst.net), &inst.net).map_err(e)? == v, "verdict")?;
    if let Some(t) = v.trajectory() {
        same(parse_trajectory(&trajectory_to_json(t, places), &inst.net).map_err(e)? == *t, "trajectory")?;
    }
    same(parse_protocol(&protocol_to_json(p)).map_err(e)? == *p, "protocol")?;
    let phi = PredicateSpec::new(p, CountingSet::from_cube(Cube::from_bounds(&[(3, None)]))).unwrap();
    same(parse_predicate(&predicate_to_json(&phi, p), p).map_err(e)? == phi, "predicate")?;
    Ok(())
}

fn determinism() -> Check {
    let p = threshold_three();
    for (seed, inst) in corpus() {
        round_trips(&inst, &p).map_err(|m| format!("seed {seed}: {m}"))?;
    }
    let bin = env!("CARGO_BIN_EXE_ionet");
    let d = data;
    let runs: Vec<Vec<String>> = vec![
        vec!["reach".into(), "--net".into(), d("net.json"), "--from".into(), d("from.json"), "--to".into(), d("to.json"), "--engine".into(), "both".into()],
        vec!["cover".into(), "--net".into(), d("net.json"), "--from".into(), d("from.json"), "--to".into(), d("to_heavy.json")],
        vec!["live".into(), "--net".into(), d("net.json"), "--set".into(), d("both_positive.json")],
        vec!["prestar".into(), "--net".into(), d("net.json"), "--set".into(), d("to.json")],
        vec!["poststar".into(), "--net".into(), d("cycle.json"), "--set".into(), d("from.json")],
        vec!["witness".into(), "--net".into(), d("net.json"), "--from".into(), d("from.json"), "--to".into(), d("to.json")],
        vec!["protocol".into(), "check".into(), "--protocol".into(), d("threshold3_mutated.json"), "--predicate".into(), d("at_least_3.json")],
        vec!["protocol".into(), "well-specified".into(), "--protocol".into(), d("threshold3.json")],
        vec!["oracle".into(), "reach".into(), "--net".into(), d("net.json"), "--marking".into(), d("marking.json")],
        vec!["gen".into(), "--seed".into(), "11".into()],
    ];
    for args in &runs {
        let outs: Vec<Vec<u8>> = (0..3)
            .map(|_| Command::new(bin).args(args).output().map(|o| o.stdout))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if outs.iter().any(|o| *o != outs[0]) || outs[0].is_empty() {
            return Err(format!("`ionet {}` output differs between runs", args[0]));
        }
    }
    Ok(format!("{CORPUS} instances round-trip in all document kinds; {} CLI commands byte-identical over 3 runs", runs.len()))
}
