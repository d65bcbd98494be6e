//! The acceptance gate: every criterion runs at its stated tolerance and
//! prints one PASS/FAIL line.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use nilpotent::finite::WordWitness;
use nilpotent::{
    check_consistency, express_in_input_generators, from_finite_presentation, kernel_and_image, membership,
    parse_finite_presentation, parse_named_word, parse_slp, preimage, reduce_to_full_form, slp_to_coords,
    subgroup_presentation, Coords, ConjugacySolver, Group, GroupWord, Homomorphism, NilpotentPresentation,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for (group, model) in [(heis(), MatrixModel::heis()), (ut4(), MatrixModel::ut4())] {
        let m = group.num_generators();
        for k in 0..1000 {
            let len = r.gen_range(0..=200);
            let w = random_word(&mut r, m, len);
            let x = group.word_to_coords(&w).map_err(|e| e.to_string())?;
            ensure(model.coords(&x) == model.word(&w), format!("word {k} in group with {m} generators: {w}"))?;
        }
    }
    let t = start.elapsed();
    within(t, Duration::from_secs(10), "2000 words")?;
    Ok(format!("2000 words match the matrix oracle in {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let g = q125();
    let model = MatrixModel::q125();
    let solver = ConjugacySolver::new(&g);
    let elements = q125_elements();
    let inverses: Vec<Mat> = elements.iter().map(|(_, m)| q125_inverse(&elements, m)).collect();
    // Brute-force classes: class id of every matrix.
    let mut class_of = std::collections::HashMap::new();
    let mut next = 0;
    for (_, x) in &elements {
        if class_of.contains_key(x) {
            continue;
        }
        for (u, ui) in elements.iter().map(|e| &e.1).zip(&inverses) {
            class_of.insert(model.mul(&model.mul(ui, x), u), next);
        }
        next += 1;
    }
    for (gx, mx) in &elements {
        let brute: usize = elements.iter().filter(|(_, u)| model.mul(mx, u) == model.mul(u, mx)).count();
        let c = solver.centralizer(gx).map_err(|e| e.to_string())?;
        let order = c.order(&g).and_then(|o| o.to_usize());
        ensure(order == Some(brute), format!("centralizer of {gx}: {order:?} vs {brute}"))?;
        for (gy, my) in &elements {
            let expected = class_of[mx] == class_of[my];
            let got = solver.conjugate(gx, gy).map_err(|e| e.to_string())?;
            ensure(got.is_some() == expected, format!("conjugacy of {gx} and {gy}"))?;
            if let Some(u) = got {
                ensure(&g.conjugate(gx, &u) == gy, "conjugator check")?;
            }
        }
    }
    let t = start.elapsed();
    within(t, Duration::from_secs(60), "15625 pairs")?;
    Ok(format!("{next} classes, 15625 pairs and 125 centralizers agree in {t:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    for (name, group, finite) in [("HEIS", heis(), false), ("UT4", ut4(), false), ("Q125", q125(), true)] {
        let m = group.num_generators();
        for trial in 0..200 {
            let n = r.gen_range(1..=3);
            let gens: Vec<Coords> = (0..n)
                .map(|_| {
                    if finite {
                        random_finite(&mut r, m, 5)
                    } else {
                        random_coords(&mut r, m, 3)
                    }
                })
                .collect();
            let base = reduce_to_full_form(&group, &gens).map_err(|e| e.to_string())?.to_text();
            let mut shuffled = gens.clone();
            shuffled.shuffle(&mut r);
            let mut inverted: Vec<Coords> = gens.iter().map(|g| group.invert(g)).collect();
            inverted.reverse();
            let mut augmented = gens.clone();
            for _ in 0..2 {
                let a = &gens[r.gen_range(0..n)];
                let b = &gens[r.gen_range(0..n)];
                augmented.push(group.multiply(a, &group.invert(b)));
            }
            for variant in [shuffled, inverted, augmented] {
                let text = reduce_to_full_form(&group, &variant).map_err(|e| e.to_string())?.to_text();
                ensure(text == base, format!("{name} trial {trial}: serializations differ"))?;
            }
        }
    }
    Ok("600 generating sets, invariant under permutation, inversion and augmentation".into())
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut checked = 0;
    for group in [heis(), ut4(), q125()] {
        let m = group.num_generators();
        let solver = ConjugacySolver::new(&group);
        for _ in 0..40 {
            let gens: Vec<Coords> = (0..2).map(|_| random_coords(&mut r, m, 2)).collect();
            let gens: Vec<Coords> = gens.iter().map(|g| group.normalize_torsion(g)).collect();
            let form = reduce_to_full_form(&group, &gens).map_err(|e| e.to_string())?;
            // A product of the generators is always a member.
            let h = group.multiply(&group.power(&gens[0], &BigInt::from(r.gen_range(-3..=3))), &gens[1]);
            let gamma = membership(&group, &form, &h).map_err(|e| e.to_string())?.ok_or("member rejected")?;
            let parts: Vec<Coords> = form.rows().iter().zip(&gamma).map(|(g, e)| group.power(g, e)).collect();
            ensure(group.product(&parts) == h, "gamma witness")?;
            let expr = express_in_input_generators(&group, &gens, &h).map_err(|e| e.to_string())?;
            ensure(expr.evaluate(&group, &gens) == h, "input-generator witness")?;
            if let Ok(w) = expr.to_word(100_000) {
                let images: Vec<Coords> =
                    w.letters().iter().map(|l| group.power(&gens[l.generator], &l.exponent)).collect();
                ensure(group.product(&images) == h, "flattened witness")?;
            }
            let u = random_coords(&mut r, m, 3);
            let u = group.normalize_torsion(&u);
            let y = group.conjugate(&h, &u);
            let found = solver.conjugate(&h, &y).map_err(|e| e.to_string())?.ok_or("conjugate rejected")?;
            ensure(group.conjugate(&h, &found) == y, "conjugator")?;
            checked += 4;
        }
    }
    // Preimages through HEIS -> Z, (a1, a2) -> (1, 1) and into HEIS itself.
    let g = heis();
    let z = Group::new(NilpotentPresentation::free_abelian(1));
    let dom = [c(&[1, 0, 0]), c(&[0, 1, 0])];
    let img = [c(&[1]), c(&[1])];
    let phi = Homomorphism::new(&g, &z, &dom, &img).map_err(|e| e.to_string())?;
    let ki = kernel_and_image(&phi).map_err(|e| e.to_string())?;
    for k in -20..=20 {
        let h = c(&[k]);
        let pre = preimage(&phi, &ki, &h).map_err(|e| e.to_string())?;
        ensure(phi.apply(&pre).map_err(|e| e.to_string())? == h, "preimage")?;
        checked += 1;
    }
    // Word witnesses in <x, y | [x, y]> at class 2 and <x | x^5>.
    let fp = parse_finite_presentation("gens x y\nrel x^-1 y^-1 x y").map_err(|e| e.to_string())?;
    let q = from_finite_presentation(&fp, 2).map_err(|e| e.to_string())?;
    for w in ["x^-1 y^-1 x y", "y^-1 x^-1 y x", "x y x^-1 y^-1", "x^2 y x^-2 y^-1"] {
        let word = parse_named_word(w, &fp.generators).map_err(|e| e.to_string())?;
        match q.word_witness(&word, 100_000).map_err(|e| e.to_string())? {
            WordWitness::Trivial(f) => {
                let x = q.free.word_to_coords(&word).map_err(|e| e.to_string())?;
                ensure(q.evaluate_factors(&f).map_err(|e| e.to_string())? == x, "word witness")?;
            }
            WordWitness::Nontrivial(_) => return Err(format!("{w} reported nontrivial")),
        }
        checked += 1;
    }
    Ok(format!("{checked} witnesses re-verified"))
}

fn growth_slopes(group: &Group, weights: &[u32]) -> Vec<f64> {
    let mut r = rng(5);
    let m = group.num_generators();
    let top = *weights.iter().max().unwrap();
    let mut xs = Vec::new();
    let mut ys: Vec<Vec<f64>> = vec![Vec::new(); top as usize];
    for k in 5..=12 {
        let len = 1usize << k;
        let mut max_by_weight = vec![0f64; top as usize];
        for _ in 0..8 {
            // Positive letters of weight one give the largest coordinates.
            let mut w = GroupWord::identity();
            for _ in 0..len {
                let g = loop {
                    let g = r.gen_range(0..m);
                    if weights[g] == 1 {
                        break g;
                    }
                };
                w.push(g, BigInt::one());
            }
            let x = group.word_to_coords(&w).unwrap();
            for (i, v) in x.iter().enumerate() {
                let mag = v.abs().to_f64().unwrap_or(f64::MAX).max(1.0);
                let slot = &mut max_by_weight[weights[i] as usize - 1];
                *slot = slot.max(mag);
            }
        }
        xs.push((len as f64).ln());
        for (i, v) in max_by_weight.iter().enumerate() {
            ys[i].push(v.ln());
        }
    }
    ys.iter().map(|y| slope(&xs, y)).collect()
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut report = Vec::new();
    for (name, group) in [("HEIS", heis()), ("UT4", ut4())] {
        let weights = group.presentation().weights().to_vec();
        let slopes = growth_slopes(&group, &weights);
        for (i, s) in slopes.iter().enumerate() {
            let bound = (i + 1) as f64 + 0.2;
            ensure(*s <= bound, format!("{name} weight {} slope {s:.3} > {bound}", i + 1))?;
            report.push(format!("{name} w{}={s:.2}", i + 1));
        }
    }
    let t = start.elapsed();
    within(t, Duration::from_secs(30), "growth fit")?;
    Ok(format!("slopes {} in {t:.2?}", report.join(", ")))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let g = heis();
    for d in [1u32, 10, 100, 500, 1000] {
        let mut text = String::from("term X a1\nterm Y a2\nprod B0 X Y\n");
        for i in 1..=d {
            text.push_str(&format!("prod B{i} B{} B{}\n", i - 1, i - 1));
        }
        text.push_str(&format!("root B{d}\n"));
        let p = parse_slp(&text).map_err(|e| e.to_string())?;
        let x = slp_to_coords(&g, &p).map_err(|e| e.to_string())?;
        let n = BigInt::one() << d;
        let expected = Coords(vec![n.clone(), n.clone(), (&n >> 1) * (&n - 1)]);
        ensure(x == expected, format!("depth {d}"))?;
    }
    let t = start.elapsed();
    within(t, Duration::from_secs(5), "doubling programs")?;
    Ok(format!("closed form up to depth 1000 in {t:.2?}"))
}

fn criterion_7() -> Outcome {
    let g = heis();
    let mut r = rng(7);
    let time = |len: usize, r: &mut rand::rngs::StdRng| {
        let w = random_word(r, 3, len);
        let start = Instant::now();
        let x = g.word_to_coords(&w).unwrap();
        let t = start.elapsed();
        std::hint::black_box(x);
        t
    };
    let big = time(1_000_000, &mut r);
    within(big, Duration::from_secs(5), "10^6-letter word")?;
    // Best of three to damp scheduler noise.
    let best = |len: usize, r: &mut rand::rngs::StdRng| (0..3).map(|_| time(len, r)).min().unwrap();
    let t18 = best(1 << 18, &mut r);
    let t19 = best(1 << 19, &mut r);
    let ratio = t19.as_secs_f64() / t18.as_secs_f64();
    ensure(ratio <= 2.5, format!("doubling ratio {ratio:.2}"))?;
    Ok(format!("10^6 letters in {big:.2?}, 2^18 -> 2^19 ratio {ratio:.2}"))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    for (group, m) in [(heis(), 3), (ut4(), 6)] {
        for _ in 0..20 {
            let gens: Vec<Coords> = (0..2).map(|_| random_coords(&mut r, m, 2)).collect();
            let sp = subgroup_presentation(&group, &gens).map_err(|e| e.to_string())?;
            check_relators(&group, &sp)?;
        }
    }
    let g = q125();
    let model = MatrixModel::q125();
    for trial in 0..50 {
        let n = r.gen_range(1..=2);
        let gens: Vec<Coords> = (0..n).map(|_| random_finite(&mut r, 3, 5)).collect();
        let sp = subgroup_presentation(&g, &gens).map_err(|e| e.to_string())?;
        check_relators(&g, &sp)?;
        let order: BigInt = (0..sp.presentation.num_generators())
            .map(|i| sp.presentation.torsion(i).cloned().unwrap_or_else(BigInt::zero))
            .product();
        let mats: Vec<Mat> = gens.iter().map(|x| model.coords(x)).collect();
        let brute = q125_subgroup_order(&mats);
        ensure(order == BigInt::from(brute), format!("trial {trial}: order {order} vs {brute}"))?;
    }
    Ok("relators hold, presentations consistent, 50 subgroup orders match".into())
}

fn check_relators(group: &Group, sp: &nilpotent::SubgroupPresentation) -> Result<(), String> {
    for rel in sp.presentation.relators() {
        let parts: Vec<Coords> = rel
            .letters()
            .iter()
            .map(|l| group.power(&sp.basis.rows()[l.generator], &l.exponent))
            .collect();
        ensure(group.product(&parts).is_identity(), format!("relator {rel} fails in the ambient group"))?;
    }
    ensure(check_consistency(&sp.presentation).is_consistent(), "subgroup presentation inconsistent")
}

enum Small {
    Heis,
    Z2,
    Q125,
    Z5,
}

fn small_group(s: &Small) -> Group {
    match s {
        Small::Heis => heis(),
        Small::Z2 => Group::new(NilpotentPresentation::free_abelian(2)),
        Small::Q125 => q125(),
        Small::Z5 => Group::new(NilpotentPresentation::cyclic(5).unwrap()),
    }
}

fn criterion_9() -> Outcome {
    use Small::*;
    let mut r = rng(9);
    // Pairs (source, target) admitting nontrivial homomorphisms, with
    // generator images chosen so the defining relations hold.
    let pairs = [
        (Heis, Heis),
        (Heis, Z2),
        (Heis, Z5),
        (Heis, Q125),
        (Z2, Z2),
        (Z2, Z5),
        (Z2, Heis),
        (Q125, Q125),
        (Q125, Z5),
        (Z5, Q125),
    ];
    let mut finite_checks = 0;
    for k in 0..20 {
        let (s, t) = &pairs[k % pairs.len()];
        let (src, tgt) = (small_group(s), small_group(t));
        let mt = tgt.num_generators();
        let rand_t = |r: &mut rand::rngs::StdRng| tgt.normalize_torsion(&random_coords(r, mt, 3));
        let domain: Vec<Coords> = match s {
            Heis | Q125 => vec![c(&[1, 0, 0]), c(&[0, 1, 0])],
            Z2 => vec![c(&[1, 0]), c(&[0, 1])],
            Z5 => vec![c(&[1])],
        };
        let images: Vec<Coords> = match s {
            Z2 => {
                // Commuting images: x and a random element of its centralizer.
                let x = rand_t(&mut r);
                let cx = nilpotent::centralizer(&tgt, &x).map_err(|e| e.to_string())?;
                let parts: Vec<Coords> = cx
                    .rows()
                    .iter()
                    .map(|row| tgt.power(row, &BigInt::from(r.gen_range(-2..=2))))
                    .collect();
                vec![x, tgt.product(&parts)]
            }
            _ => domain.iter().map(|_| rand_t(&mut r)).collect(),
        };
        let phi = Homomorphism::new(&src, &tgt, &domain, &images).map_err(|e| e.to_string())?;
        let ki = kernel_and_image(&phi).map_err(|e| e.to_string())?;
        for x in ki.kernel.rows() {
            ensure(phi.apply(x).map_err(|e| e.to_string())?.is_identity(), format!("hom {k}: kernel row maps to {x}"))?;
        }
        for (u, v) in ki.lifts.iter().zip(ki.image.rows()) {
            ensure(&phi.apply(u).map_err(|e| e.to_string())? == v, format!("hom {k}: lift"))?;
        }
        if let (Some(kern), Some(im), Some(dom)) = (
            ki.kernel.order(&src),
            ki.image.order(&tgt),
            reduce_to_full_form(&src, &domain).map_err(|e| e.to_string())?.order(&src),
        ) {
            ensure(&kern * &im == dom, format!("hom {k}: |ker| {kern} * |im| {im} != {dom}"))?;
            let brute_dom = enumerate_order(&src, &domain);
            ensure(dom == BigInt::from(brute_dom), format!("hom {k}: domain order by enumeration"))?;
            finite_checks += 1;
        }
    }
    Ok(format!("20 homomorphisms, {finite_checks} with |ker||im| = |K| by enumeration"))
}

/// Order of a subgroup of a finite group by closure under multiplication.
fn enumerate_order(g: &Group, gens: &[Coords]) -> usize {
    let mut seen = std::collections::HashSet::new();
    seen.insert(g.identity());
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = g.multiply(&x, s);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

fn criterion_10() -> Outcome {
    let fp = parse_finite_presentation("gens x y\nrel x^-1 y^-1 x y").map_err(|e| e.to_string())?;
    let q = from_finite_presentation(&fp, 2).map_err(|e| e.to_string())?;
    let form = &q.kernel.form;
    ensure(form.pivots() == [2] && form.pivot_entry(0).is_one(), "kernel full form is not <a3> with pivot 1")?;
    let g = &q.group;
    ensure(g.num_generators() == 2, "quotient should have two generators")?;
    ensure(g.presentation().weights() == [1, 1], "both generators of weight 1")?;
    let mut r = rng(10);
    for _ in 0..200 {
        let a = random_coords(&mut r, 2, 50);
        let b = random_coords(&mut r, 2, 50);
        let sum = Coords(vec![&a[0] + &b[0], &a[1] + &b[1]]);
        ensure(g.multiply(&a, &b) == sum, "multiplication is not coordinatewise addition")?;
    }
    for rel in &fp.relators {
        ensure(q.word_to_coords(rel).map_err(|e| e.to_string())?.is_identity(), "relator survives")?;
    }
    Ok("<x, y | [x, y]> at class 2 realizes Z^2".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 normal forms vs matrix oracle", criterion_1),
        ("2 exhaustive conjugacy and centralizers", criterion_2),
        ("3 full-form uniqueness", criterion_3),
        ("4 witness verification", criterion_4),
        ("5 growth law", criterion_5),
        ("6 compressed scaling", criterion_6),
        ("7 quasilinear normal forms", criterion_7),
        ("8 subgroup presentations", criterion_8),
        ("9 kernel exactness", criterion_9),
        ("10 uniform pipeline", criterion_10),
    ];
    // Written to the stdout handle directly so the report survives the test
    // harness's output capture.
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let line = match std::panic::catch_unwind(run) {
            Ok(Ok(detail)) => format!("criterion {name}: PASS ({detail})"),
            Ok(Err(msg)) => {
                failed.push(name);
                format!("criterion {name}: FAIL ({msg})")
            }
            Err(_) => {
                failed.push(name);
                format!("criterion {name}: FAIL (panicked)")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
