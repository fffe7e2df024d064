//! Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
//! indented detail lines, and exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use proportional_tuning::analysis::{diapente_images_within, hexachord_diapente_check, mean_table, CellClass};
use proportional_tuning::exact::{exact_sqrt, r};
use proportional_tuning::generator::{closure_order_independence, generate_means, mean_closure, GeneratorConfig};
use proportional_tuning::means::{mean_arithmetic, mean_geometric, mean_harmonic, StringModel};
use proportional_tuning::scales::{equal_temperament, pythagorean_by_diapente, step_intervals, CanonicalScale};
use proportional_tuning::{MeanKind, PitchClass, Ratio, Restriction, Scale};

type Outcome = Result<Vec<String>, Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

struct Check {
    notes: Vec<String>,
    failed: bool,
}

impl Check {
    fn new() -> Check {
        Check {
            notes: Vec::new(),
            failed: false,
        }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.notes.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        self.failed |= !ok;
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(format!("     {}", what.into()));
    }

    fn finish(self) -> Outcome {
        if self.failed {
            Err(self.notes)
        } else {
            Ok(self.notes)
        }
    }
}

fn ratios(list: &[(u128, u128)]) -> Vec<Ratio> {
    list.iter().map(|&(n, d)| r(n, d)).collect()
}

fn set_of(list: &[(u128, u128)]) -> BTreeSet<PitchClass> {
    list.iter().map(|&(n, d)| PitchClass::new(r(n, d)).unwrap()).collect()
}

fn show(set: &BTreeSet<PitchClass>) -> String {
    let parts: Vec<String> = set.iter().map(|t| t.value().to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn natural_5() -> Restriction {
    Restriction::natural()
}

fn arith(restriction: Restriction) -> GeneratorConfig {
    GeneratorConfig::arithmetic(restriction)
}

fn criterion_1() -> Outcome {
    let mut c = Check::new();
    let t = CanonicalScale::T.scale();
    let natural = CanonicalScale::Natural.scale();
    let pyth = CanonicalScale::Pythagorean.scale();

    let sf1 = set_of(&[
        (1, 1),
        (9, 8),
        (5, 4),
        (81, 64),
        (4, 3),
        (45, 32),
        (3, 2),
        (25, 16),
        (5, 3),
        (2, 1),
    ]);
    let trace = mean_closure(&t, &arith(natural_5())).unwrap();
    c.expect(
        trace.fixpoint_reached && trace.final_scale.to_set() == sf1,
        format!("closure(T, A, 2,3,5) = {}", show(&trace.final_scale.to_set())),
    );
    c.expect(
        trace.additions().len() == 6,
        format!("{} tones added over the seed", trace.additions().len()),
    );

    let sf2 = set_of(&[
        (1, 1),
        (9, 8),
        (5, 4),
        (81, 64),
        (4, 3),
        (45, 32),
        (3, 2),
        (25, 16),
        (5, 3),
        (27, 16),
        (15, 8),
        (2, 1),
    ]);
    let trace = mean_closure(&natural, &arith(natural_5())).unwrap();
    c.expect(
        trace.fixpoint_reached && trace.final_scale.to_set() == sf2,
        format!("closure(NATURAL, A, 2,3,5) = {}", show(&trace.final_scale.to_set())),
    );
    let beyond_sf1: BTreeSet<PitchClass> = trace.final_scale.to_set().difference(&sf1).copied().collect();
    c.expect(
        beyond_sf1 == set_of(&[(27, 16), (15, 8)]),
        format!("new relative to closure(T): {}", show(&beyond_sf1)),
    );
    let known: BTreeSet<PitchClass> = natural.to_set().union(&sf1).copied().collect();
    let beyond: BTreeSet<PitchClass> = trace.final_scale.to_set().difference(&known).copied().collect();
    c.note(format!(
        "new relative to NATURAL and closure(T) together: {}",
        show(&beyond)
    ));

    let trace = mean_closure(&pyth, &arith(Restriction::pythagorean())).unwrap();
    c.expect(
        trace.fixpoint_reached && trace.generations.is_empty(),
        format!("closure(PYTHAGOREAN, A, 2,3) adds {} tones", trace.additions().len()),
    );

    let first = generate_means(&t, &arith(natural_5())).unwrap();
    c.expect(
        first == set_of(&[(5, 4), (3, 2), (5, 3)]),
        format!("one pass over T, A, 2,3,5 = {}", show(&first)),
    );

    let cfg = GeneratorConfig::arithmetic(Restriction::pythagorean())
        .with_kinds([MeanKind::Arithmetic, MeanKind::Harmonic])
        .unwrap();
    let first = generate_means(&t, &cfg).unwrap();
    c.expect(
        first == set_of(&[(4, 3), (3, 2)]),
        format!("one pass over T, A+H, 2,3 = {}", show(&first)),
    );
    c.finish()
}

fn product(steps: &[Ratio]) -> Ratio {
    steps.iter().fold(Ratio::ONE, |acc, s| acc.checked_mul(s).unwrap())
}

fn criterion_2() -> Outcome {
    let mut c = Check::new();
    let scalapit = ratios(&[(1, 1), (9, 8), (81, 64), (4, 3), (3, 2), (27, 16), (243, 128), (2, 1)]);
    let built = pythagorean_by_diapente(4).unwrap();
    c.expect(
        built.ratios() == scalapit,
        format!("diapente chain, 4 steps: {:?}", built.ratios()),
    );
    c.expect(
        CanonicalScale::Pythagorean.scale().ratios() == scalapit,
        "PYTHAGOREAN constant matches the chain",
    );

    let pyth_steps = step_intervals(&CanonicalScale::Pythagorean.scale()).unwrap();
    let expected = ratios(&[(9, 8), (9, 8), (256, 243), (9, 8), (9, 8), (9, 8), (256, 243)]);
    c.expect(pyth_steps == expected, format!("PYTHAGOREAN steps {pyth_steps:?}"));
    c.expect(product(&pyth_steps) == Ratio::TWO, "PYTHAGOREAN step product = 2");

    let nat_steps = step_intervals(&CanonicalScale::Natural.scale()).unwrap();
    let expected = ratios(&[(9, 8), (10, 9), (16, 15), (9, 8), (10, 9), (9, 8), (16, 15)]);
    c.expect(nat_steps == expected, format!("NATURAL steps {nat_steps:?}"));
    c.expect(product(&nat_steps) == Ratio::TWO, "NATURAL step product = 2");
    c.finish()
}

/// Minimal fraction type for the table oracle, independent of the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Frac(u64, u64);

impl Frac {
    fn parse(s: &str) -> Frac {
        match s.split_once('/') {
            Some((n, d)) => Frac(n.trim().parse().unwrap(), d.trim().parse().unwrap()),
            None => Frac(s.trim().parse().unwrap(), 1),
        }
        .reduced()
    }

    fn reduced(self) -> Frac {
        let (mut a, mut b) = (self.0, self.1);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        Frac(self.0 / a, self.1 / a)
    }

    fn half_sum(self, other: Frac) -> Frac {
        Frac(self.0 * other.1 + other.0 * self.1, 2 * self.1 * other.1).reduced()
    }

    fn as_ratio(self) -> Ratio {
        r(u128::from(self.0), u128::from(self.1))
    }
}

const PYTH_HEADER: [&str; 8] = ["1", "9/8", "81/64", "4/3", "3/2", "27/16", "243/128", "2"];
const PYTH_PRINTED: [&[&str]; 7] = [
    &["17/16", "145/128", "7/6", "4/3", "43/32", "371/128", "3/2"],
    &["153/128", "59/48", "21/16", "45/32", "387/256", "25/16"],
    &["499/384", "177/256", "189/128", "405/256", "209/128"],
    &["17/12", "145/96", "1241/384", "5/3"],
    &["51/32", "435/256", "7/4"],
    &["459/256", "59/32"],
    &["499/256"],
];

const NAT_HEADER: [&str; 8] = ["1", "9/8", "5/4", "4/3", "3/2", "5/3", "15/8", "2"];
const NAT_PRINTED: [&[&str]; 7] = [
    &["17/16", "9/8", "7/6", "5/4", "4/3", "23/16", "3/2"],
    &["19/16", "59/48", "21/16", "67/48", "3/2", "25/16"],
    &["31/24", "11/8", "35/24", "25/16", "13/8"],
    &["17/12", "3/2", "77/48", "5/3"],
    &["19/12", "27/16", "7/4"],
    &["85/48", "11/6"],
    &["31/16"],
];

/// Cells `(row, col, printed, oracle)` of an upper-triangular printed table.
fn table_cells(header: &[&str; 8], printed: &[&[&str]; 7]) -> Vec<(Frac, Frac, Frac, Frac)> {
    let head: Vec<Frac> = header.iter().map(|s| Frac::parse(s)).collect();
    let mut out = Vec::new();
    for (i, row) in printed.iter().enumerate() {
        assert_eq!(row.len(), 7 - i);
        for (k, cell) in row.iter().enumerate() {
            let (a, b) = (head[i], head[i + 1 + k]);
            out.push((a, b, Frac::parse(cell), a.half_sum(b)));
        }
    }
    out
}

fn check_against_library(c: &mut Check, label: &str, scale: &Scale, cells: &[(Frac, Frac, Frac, Frac)]) {
    let table = mean_table(scale, &natural_5()).unwrap();
    let mismatches = cells
        .iter()
        .filter(|(a, b, _, oracle)| {
            table.cell(&a.as_ratio(), &b.as_ratio()).map(|cell| cell.mean) != Some(oracle.as_ratio())
        })
        .count();
    c.expect(
        mismatches == 0 && cells.len() == 28,
        format!(
            "{label}: all {} library cells equal the brute-force oracle",
            cells.len()
        ),
    );
}

fn criterion_3() -> Outcome {
    let mut c = Check::new();
    let pyth = CanonicalScale::Pythagorean.scale();
    let natural = CanonicalScale::Natural.scale();

    let pyth_cells = table_cells(&PYTH_HEADER, &PYTH_PRINTED);
    check_against_library(&mut c, "PYTHAGOREAN", &pyth, &pyth_cells);
    let nat_cells = table_cells(&NAT_HEADER, &NAT_PRINTED);
    check_against_library(&mut c, "NATURAL", &natural, &nat_cells);

    let nat_diffs: Vec<_> = nat_cells.iter().filter(|(_, _, p, o)| p != o).collect();
    c.expect(
        nat_diffs.is_empty(),
        "printed NATURAL table agrees with the oracle everywhere",
    );

    // The shaded (1, 3/2) cell carries the proportion 1 : 4/3 : 2 rather
    // than an arithmetic mean; it is checked on its own below.
    let notation_cell = (Frac(1, 1), Frac(3, 2));
    let pyth_diffs: Vec<(Frac, Frac, Frac, Frac)> = pyth_cells.iter().copied().filter(|(_, _, p, o)| p != o).collect();
    for (a, b, p, o) in &pyth_diffs {
        c.note(format!(
            "printed ({}/{}, {}/{}) = {}/{}, exact {}/{}",
            a.0, a.1, b.0, b.1, p.0, p.1, o.0, o.1
        ));
    }
    let errata: BTreeSet<(u64, u64, u64, u64)> = pyth_diffs
        .iter()
        .filter(|(a, b, _, _)| (*a, *b) != notation_cell)
        .map(|(_, _, p, o)| (p.0, p.1, o.0, o.1))
        .collect();
    let expected: BTreeSet<(u64, u64, u64, u64)> = [(371, 128, 371, 256), (177, 256, 177, 128), (1241, 384, 1241, 768)]
        .into_iter()
        .collect();
    c.expect(
        errata == expected,
        format!(
            "arithmetic errata in the printed PYTHAGOREAN table: exactly {} cells",
            errata.len()
        ),
    );
    let shaded = pyth_diffs.iter().find(|(a, b, _, _)| (*a, *b) == notation_cell);
    c.expect(
        shaded.map(|&(_, _, p, o)| (p, o)) == Some((Frac(4, 3), Frac(5, 4)))
            && mean_harmonic(&Ratio::ONE, &Ratio::TWO).unwrap() == r(4, 3),
        "shaded (1, 3/2) cell prints 4/3 = harmonic mean of 1 and 2 (exact arithmetic mean 5/4)",
    );

    let table = mean_table(&natural, &natural_5()).unwrap();
    let in_limit: BTreeSet<(Ratio, Ratio, Ratio)> = table
        .cells_of(CellClass::InLimit)
        .map(|cell| (cell.row.value(), cell.col.value(), cell.mean))
        .collect();
    let expected: BTreeSet<(Ratio, Ratio, Ratio)> = [
        (r(9, 8), r(2, 1), r(25, 16)),
        (r(5, 4), r(15, 8), r(25, 16)),
        (r(3, 2), r(15, 8), r(27, 16)),
    ]
    .into_iter()
    .collect();
    c.expect(in_limit == expected, format!("NATURAL InLimit cells: {in_limit:?}"));
    c.finish()
}

fn criterion_4() -> Outcome {
    let mut c = Check::new();
    let comma = r(81, 80);
    c.expect(r(81, 64).checked_div(&r(5, 4)).unwrap() == comma, "81/64 / 5/4 = 81/80");
    c.expect(r(9, 8).checked_div(&r(10, 9)).unwrap() == comma, "9/8 / 10/9 = 81/80");

    let fifth = Ratio::FIFTH;
    let as_stated = r(5, 4)
        .checked_mul(&fifth.checked_pow(2).unwrap())
        .unwrap()
        .scale_by_pow2(-3)
        .unwrap();
    c.expect(
        as_stated == r(135, 128),
        format!("5/4 * (3/2)^2 * 2^-3 = 135/128 (left side is {as_stated})"),
    );
    let three_fifths = r(5, 4)
        .checked_mul(&fifth.checked_pow(3).unwrap())
        .unwrap()
        .scale_by_pow2(-2)
        .unwrap();
    c.note(format!("for reference, 5/4 * (3/2)^3 * 2^-2 = {three_fifths}"));

    let pyth_comma = fifth.checked_pow(12).unwrap().scale_by_pow2(-7).unwrap();
    c.expect(
        pyth_comma == r(531441, 524288),
        format!("(3/2)^12 * 2^-7 = {pyth_comma}"),
    );
    let cents = pyth_comma.cents();
    c.expect(
        (cents - 23.460).abs() <= 0.005,
        format!("Pythagorean comma = {cents:.4} c"),
    );
    c.finish()
}

fn criterion_5() -> Outcome {
    let mut c = Check::new();
    let et = equal_temperament(12).unwrap();
    let alpha8 = et.degree(8).unwrap();
    c.expect(
        (alpha8 - 1.498_307_076_9).abs() <= 1e-9,
        format!("alpha_8 = {alpha8:.10}"),
    );
    let diff = Ratio::FIFTH.cents() - 1200.0 * alpha8.log2();
    c.expect(
        (diff - 1.955).abs() <= 0.01,
        format!("cents(3/2) - cents(alpha_8) = {diff:+.4}"),
    );

    let degrees = et.degrees();
    let mut worst = 0.0_f64;
    for i in 0..degrees.len() {
        for step in 1..degrees.len() {
            if i + 2 * step < degrees.len() {
                let (a, m, b) = (degrees[i], degrees[i + step], degrees[i + 2 * step]);
                worst = worst.max(((m * m) - (a * b)).abs() / (a * b));
            }
        }
    }
    c.expect(
        worst <= 1e-9,
        format!("equally spaced triples: max relative error {worst:.2e}"),
    );
    c.finish()
}

fn random_ratio(rng: &mut ChaCha8Rng) -> Ratio {
    r(rng.gen_range(1..=10_000), rng.gen_range(1..=10_000))
}

fn criterion_6() -> Outcome {
    const CASES: usize = 1000;
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let (mut order, mut product, mut similar, mut dual, mut duality) = (0, 0, 0, 0, 0);
    for case in 0..CASES {
        let a = random_ratio(&mut rng);
        // Every tenth case uses a = b to exercise the equality branch.
        let b = if case % 10 == 0 { a } else { random_ratio(&mut rng) };
        let lambda = random_ratio(&mut rng);
        let kappa = random_ratio(&mut rng);

        let ma = mean_arithmetic(&a, &b).unwrap();
        let mh = mean_harmonic(&a, &b).unwrap();
        let ab = a.checked_mul(&b).unwrap();
        let mg = mean_geometric(&a, &b).unwrap();
        // m_H <= m_G <= m_A, compared exactly through squares.
        let sq_h = mh.checked_mul(&mh).unwrap();
        let sq_a = ma.checked_mul(&ma).unwrap();
        let equal = a == b;
        let ordered = if equal {
            sq_h == ab && ab == sq_a && mg.exact == Some(a)
        } else {
            sq_h < ab && ab < sq_a && mh < ma
        };
        order += usize::from(ordered);

        product += usize::from(ma.checked_mul(&mh).unwrap() == ab);

        let la = lambda.checked_mul(&a).unwrap();
        let lb = lambda.checked_mul(&b).unwrap();
        let sim = mean_arithmetic(&la, &lb).unwrap() == lambda.checked_mul(&ma).unwrap()
            && mean_harmonic(&la, &lb).unwrap() == lambda.checked_mul(&mh).unwrap()
            && mean_geometric(&la, &lb).unwrap().exact == mg.exact.map(|g| lambda.checked_mul(&g).unwrap());
        similar += usize::from(sim);

        dual += usize::from(mean_harmonic(&a.recip(), &b.recip()).unwrap() == ma.recip());

        duality += usize::from(StringModel::new(kappa).duality_check(&a, &b).unwrap());
    }
    c.expect(
        order == CASES,
        format!("m_H <= m_G <= m_A, equality iff a = b: {order}/{CASES}"),
    );
    c.expect(product == CASES, format!("m_A * m_H = a*b: {product}/{CASES}"));
    c.expect(similar == CASES, format!("similarity under scaling: {similar}/{CASES}"));
    c.expect(dual == CASES, format!("m_H(1/a, 1/b) = 1/m_A(a, b): {dual}/{CASES}"));
    c.expect(duality == CASES, format!("string duality check: {duality}/{CASES}"));
    c.finish()
}

fn criterion_7() -> Outcome {
    let mut c = Check::new();
    let cfg = arith(natural_5());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for seed in [CanonicalScale::T, CanonicalScale::Natural] {
        let ok = closure_order_independence(&seed.scale(), &cfg, 100, &mut rng).unwrap();
        c.expect(
            ok,
            format!("{}: 100 random insertion orders reach the batch fixpoint", seed.id()),
        );
    }
    let trace = mean_closure(&CanonicalScale::T.scale(), &cfg).unwrap();
    c.expect(
        trace.fixpoint_reached && trace.generations.len() <= 5,
        format!(
            "batch closure from T: fixpoint after {} generations",
            trace.generations.len()
        ),
    );
    c.finish()
}

fn criterion_8() -> Outcome {
    let mut c = Check::new();
    c.expect(exact_sqrt(&r(9, 8)).is_none(), "9/8 has no rational square root");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut hits = 0;
    for _ in 0..1000 {
        let x = r(
            rng.gen_range(1..=u64::MAX as u128 >> 8),
            rng.gen_range(1..=u64::MAX as u128 >> 8),
        );
        let square = x.checked_mul(&x).unwrap();
        hits += usize::from(exact_sqrt(&square) == Some(x));
    }
    c.expect(hits == 1000, format!("sqrt(r^2) = r: {hits}/1000"));
    c.finish()
}

fn criterion_9() -> Outcome {
    let mut c = Check::new();
    let hexachord = CanonicalScale::HexachordNatural.scale();
    let natural = CanonicalScale::Natural.scale();
    let images = diapente_images_within(&hexachord, &natural).unwrap();
    for img in &images {
        c.note(format!(
            "{} -> {} {}",
            img.tone.value(),
            img.image.value(),
            if img.in_scale { "in scale" } else { "outside" }
        ));
    }
    let outside: Vec<(Ratio, Ratio)> = images
        .iter()
        .filter(|i| !i.in_scale)
        .map(|i| (i.tone.value(), i.image.value()))
        .collect();
    c.expect(
        outside == vec![(r(9, 8), r(27, 16))],
        format!("only 9/8 leaves the natural scale, landing on 27/16 ({outside:?})"),
    );
    let sn2 = CanonicalScale::Sn2.scale();
    c.expect(
        diapente_images_within(&hexachord, &sn2)
            .unwrap()
            .iter()
            .all(|i| i.in_scale),
        "every image lies in SN2",
    );
    let own: Vec<String> = hexachord_diapente_check(&hexachord)
        .unwrap()
        .iter()
        .filter(|i| !i.in_scale)
        .map(|i| i.tone.value().to_string())
        .collect();
    c.note(format!(
        "tones whose image leaves the six hexachord tones themselves: {}",
        own.join(", ")
    ));
    c.finish()
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ptune"))
        .args(args)
        .output()
        .expect("ptune runs");
    (out.status.code(), out.stdout)
}

fn criterion_10() -> Outcome {
    let mut c = Check::new();
    let formats = ["plain", "json", "csv", "markdown"];
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for scale in CanonicalScale::ALL {
        let id = scale.id().to_string();
        for format in formats {
            let with = |mut v: Vec<String>| {
                v.extend(["--format".to_string(), format.to_string()]);
                v
            };
            invocations.push(with(vec!["scale".into(), id.clone()]));
            invocations.push(with(vec!["closure".into(), id.clone()]));
            invocations.push(with(vec!["table".into(), id.clone()]));
            invocations.push(with(vec!["compare".into(), id.clone()]));
            invocations.push(with(vec!["intervals".into(), id.clone()]));
        }
    }
    for format in formats {
        for arg in ["pythagorean:steps=4", "equal:N=12"] {
            invocations.push(vec!["scale".into(), arg.into(), "--format".into(), format.into()]);
        }
    }
    let mut differing = Vec::new();
    let mut failed = Vec::new();
    for args in &invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run_cli(&args);
        let second = run_cli(&args);
        if first != second {
            differing.push(args.join(" "));
        }
        if first.0 != Some(0) || first.1.is_empty() {
            failed.push(args.join(" "));
        }
    }
    c.expect(
        differing.is_empty(),
        format!(
            "{} invocations run twice, byte-identical stdout and exit code",
            invocations.len()
        ),
    );
    for d in &differing {
        c.note(format!("differs: {d}"));
    }
    c.expect(failed.is_empty(), "every invocation exits 0 with output");
    for f in &failed {
        c.note(format!("failed: {f}"));
    }
    c.finish()
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact-set reproduction", criterion_1),
        ("scale constants and steps", criterion_2),
        ("mean tables", criterion_3),
        ("comma identities", criterion_4),
        ("equal temperament", criterion_5),
        ("mean algebra properties", criterion_6),
        ("closure confluence", criterion_7),
        ("exact square roots", criterion_8),
        ("hexachord diapente check", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (passed, notes) = match check() {
            Ok(notes) => (true, notes),
            Err(notes) => (false, notes),
        };
        println!("{} {:>2} {name}", if passed { "PASS" } else { "FAIL" }, i + 1);
        for line in notes {
            println!("        {line}");
        }
        failures += usize::from(!passed);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
