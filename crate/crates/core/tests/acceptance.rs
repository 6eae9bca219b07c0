//! Acceptance gate: eight criteria, one test per criterion, so the
//! harness prints exactly one pass/fail line for each. Every check is
//! exact — rational equality, zero tolerance. Each test also prints an
//! explicit "criterion N: pass" line (visible with --nocapture).

use bailey_core::bailey::{lemma_admissibility, unit_pair, LemmaParams};
use bailey_core::error::Error;
use bailey_core::lattice::{IndexBox, MultiIndex};
use bailey_core::qfield::{qpoch, Rational};
use bailey_core::transforms::{admissibility, Group, GroupParamsA, GroupParamsC, Params};
use bailey_core::verify::{
    check_bailey_pair, check_chain, check_classical_reduction, check_inversion, check_lemma,
    check_roundtrip, ParamSampler, Verdict,
};
use rayon::prelude::*;

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn mi(s: &str) -> MultiIndex {
    s.parse().unwrap()
}

fn bx(s: &str) -> IndexBox {
    IndexBox::new(mi(s))
}

/// The shared verification grid: one box per rank.
fn grid() -> Vec<IndexBox> {
    vec![bx("6"), bx("3,3"), bx("2,2,2")]
}

const TRIALS: u64 = 5;

fn inversion_criterion(group: Group, seed_base: u64) {
    for bbox in grid() {
        for trial in 0..TRIALS {
            let seed = seed_base + 100 * bbox.rank() as u64 + trial;
            let mut sampler = ParamSampler::from_seed(seed);
            let p = sampler
                .next_params(group, &bbox)
                .expect("sampling admissible parameters");
            let report = check_inversion(&p, &bbox);
            assert_eq!(
                report.verdict(),
                Verdict::Pass,
                "inversion failed for {} on box {bbox} (seed {seed}): {}",
                p.render(),
                report.render_human()
            );
        }
    }
}

#[test]
fn criterion_1_matrix_inversion_family_a() {
    inversion_criterion(Group::A, 10_000);
    println!("criterion 1: pass — family A matrix inversion, ranks 1-3, 5 parameter sets each");
}

#[test]
fn criterion_2_matrix_inversion_family_c() {
    inversion_criterion(Group::C, 20_000);
    println!("criterion 2: pass — family C matrix inversion, ranks 1-3, 5 parameter sets each");
}

#[test]
fn criterion_3_classical_reduction() {
    let bbox = bx("6");
    for trial in 0..10u64 {
        let mut sampler = ParamSampler::from_seed(30_000 + trial);
        let p = sampler
            .next_params(Group::A, &bbox)
            .expect("sampling admissible parameters");
        let (q, a) = match &p {
            Params::A(pa) => (pa.q().clone(), pa.a().clone()),
            Params::C(_) => unreachable!("sampled family A"),
        };
        let report = check_classical_reduction(&q, &a, 6);
        assert_eq!(
            report.verdict(),
            Verdict::Pass,
            "classical reduction failed at q={q} a={a}: {}",
            report.render_human()
        );
    }
    println!("criterion 3: pass — rank-1 entries match the classical closed forms, 10 trials");
}

#[test]
fn criterion_4_sequence_roundtrip() {
    for bbox in grid() {
        for group in [Group::A, Group::C] {
            for trial in 0..TRIALS {
                let seed = 40_000 + 100 * bbox.rank() as u64 + trial;
                let mut sampler = ParamSampler::from_seed(seed);
                let p = sampler
                    .next_params(group, &bbox)
                    .expect("sampling admissible parameters");
                let seq = sampler.next_sequence(&bbox);
                let report = check_roundtrip(&p, &seq);
                assert_eq!(
                    report.verdict(),
                    Verdict::Pass,
                    "roundtrip failed for {} on box {bbox} (seed {seed}): {}",
                    p.render(),
                    report.render_human()
                );
            }
        }
    }
    println!("criterion 4: pass — both transform directions invert each other on random sequences");
}

#[test]
fn criterion_5_lemma_preservation_and_chain() {
    for bbox in [bx("4"), bx("2,2")] {
        for group in [Group::A, Group::C] {
            for trial in 0..TRIALS {
                let seed = 50_000 + 100 * bbox.rank() as u64 + trial;
                let mut sampler = ParamSampler::from_seed(seed);
                let p = sampler
                    .next_params(group, &bbox)
                    .expect("sampling admissible parameters");
                let lp = sampler
                    .next_lemma_params(&p, &bbox)
                    .expect("sampling admissible lemma parameters");
                let seed_pair = unit_pair(&p, &bbox).expect("unit seed on admissible parameters");
                assert_eq!(
                    check_bailey_pair(&seed_pair).verdict(),
                    Verdict::Pass,
                    "unit seed is not a pair for {}",
                    p.render()
                );
                let report = check_lemma(&seed_pair, &lp, &bbox);
                assert_eq!(
                    report.verdict(),
                    Verdict::Pass,
                    "lemma step failed for {} with {} on box {bbox}: {}",
                    p.render(),
                    lp.render(),
                    report.render_human()
                );
            }
        }
    }
    // three chained steps at rank 1, every link checked
    let bbox = bx("4");
    for group in [Group::A, Group::C] {
        let mut sampler = ParamSampler::from_seed(55_000 + group as u64);
        let p = sampler
            .next_params(group, &bbox)
            .expect("sampling admissible parameters");
        let steps: Vec<LemmaParams> = (0..3)
            .map(|_| {
                sampler
                    .next_lemma_params(&p, &bbox)
                    .expect("sampling admissible lemma parameters")
            })
            .collect();
        let seed_pair = unit_pair(&p, &bbox).expect("unit seed");
        let report = check_chain(&seed_pair, &steps, &bbox);
        assert_eq!(
            report.verdict(),
            Verdict::Pass,
            "3-step chain failed for {}: {}",
            p.render(),
            report.render_human()
        );
    }
    println!("criterion 5: pass — lemma steps preserve pairs from unit seeds; 3-step chains hold");
}

#[test]
fn criterion_6_golden_entry_values() {
    let one = mi("1");
    let zero = mi("0");

    let pa = Params::A(GroupParamsA::new(r("1/2"), r("1/3"), vec![r("1/3")]).unwrap());
    assert_eq!(pa.m_entry(&one, &zero).unwrap(), r("12/5"));
    assert_eq!(pa.mstar_entry(&one, &zero).unwrap(), r("-11/6"));

    let pc = Params::C(GroupParamsC::new(r("1/2"), vec![r("1/3")]).unwrap());
    assert_eq!(pc.m_entry(&one, &zero).unwrap(), r("36/17"));
    assert_eq!(pc.mstar_entry(&one, &zero).unwrap(), r("-36/17"));

    // inversion cross-checks: row 1 of M against column 0 of M*
    for p in [&pa, &pc] {
        let cross = p.m_entry(&one, &zero).unwrap() * p.mstar_entry(&zero, &zero).unwrap()
            + p.m_entry(&one, &one).unwrap() * p.mstar_entry(&one, &zero).unwrap();
        assert!(cross.is_zero(), "cross-check sum is {cross}, not 0");
    }
    println!("criterion 6: pass — hand-derived entries 12/5, -11/6, 36/17, -36/17 reproduced");
}

#[test]
fn criterion_7_pole_discipline_and_sampler_fuzz() {
    // a reciprocal factor that hits zero must be a reported pole
    assert!(matches!(
        qpoch(&r("1/2"), &r("1/2"), -1),
        Err(Error::PoleEncountered { .. })
    ));

    // off-support entries are exact zeros, not evaluations
    let pa = Params::A(GroupParamsA::new(r("1/2"), r("1/3"), vec![r("1/3"), r("2/5")]).unwrap());
    assert!(pa.m_entry(&mi("0,1"), &mi("1,0")).unwrap().is_zero());
    assert!(pa.mstar_entry(&mi("0,1"), &mi("1,0")).unwrap().is_zero());

    // 10,000 independent draws: whatever the sampler returns must be
    // admissible on its box (rejection can never leak a pole through)
    let failures: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|draw| {
            let group = if draw % 2 == 0 { Group::A } else { Group::C };
            let bbox = if draw % 4 < 2 { bx("3") } else { bx("2,2") };
            let mut sampler = ParamSampler::from_seed(70_000 + draw);
            let p = match sampler.next_params(group, &bbox) {
                Ok(p) => p,
                Err(e) => return Some(format!("draw {draw}: sampler error {e}")),
            };
            if !admissibility(&p, &bbox).is_empty() {
                return Some(format!("draw {draw}: inadmissible {}", p.render()));
            }
            if draw % 3 == 0 {
                match sampler.next_lemma_params(&p, &bbox) {
                    Ok(lp) => {
                        if !lemma_admissibility(&p, &lp, &bbox).is_empty() {
                            return Some(format!(
                                "draw {draw}: inadmissible lemma parameters {}",
                                lp.render()
                            ));
                        }
                    }
                    Err(e) => return Some(format!("draw {draw}: lemma sampler error {e}")),
                }
            }
            None
        })
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    println!("criterion 7: pass — poles are errors, off-support is zero, 10,000-draw fuzz clean");
}

#[test]
fn criterion_8_byte_identical_reports() {
    let run = || {
        let mut out = String::new();
        let bbox = bx("2,2");
        for group in [Group::A, Group::C] {
            let mut sampler = ParamSampler::from_seed(80_000);
            let p = sampler.next_params(group, &bbox).unwrap();
            out.push_str(&check_inversion(&p, &bbox).render_machine());
            let seq = sampler.next_sequence(&bbox);
            out.push_str(&check_roundtrip(&p, &seq).render_machine());
            let lp = sampler.next_lemma_params(&p, &bbox).unwrap();
            let pair = unit_pair(&p, &bbox).unwrap();
            out.push_str(&check_lemma(&pair, &lp, &bbox).render_machine());
        }
        let mut sampler = ParamSampler::from_seed(80_001);
        let p = sampler.next_params(Group::A, &bx("4")).unwrap();
        let (q, a) = match &p {
            Params::A(pa) => (pa.q().clone(), pa.a().clone()),
            Params::C(_) => unreachable!(),
        };
        out.push_str(&check_classical_reduction(&q, &a, 4).render_machine());
        out
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "same seed must give byte-identical reports");
    assert!(first.contains("CHECK inversion A 2 2,2 pass"));
    println!("criterion 8: pass — machine reports are byte-identical across runs at a fixed seed");
}
