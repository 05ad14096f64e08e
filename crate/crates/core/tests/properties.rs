//! Randomized invariants over the public API.

use proptest::prelude::*;

use llmoea::dominance::{dominates, nondominated_indices};
use llmoea::gate::{auxiliary_score, GateState};
use llmoea::llm_operator::grammar::{extract_spans, fixed, frame, parse_reals};
use llmoea::llm_operator::{build_prompt, parse_response, select_elites};
use llmoea::metrics::{hypervolume, igd, MetricContext};
use llmoea::nsga2::{environmental_selection, polynomial_mutation, rank_and_crowd, sbx_crossover, VariationParams};
use llmoea::population::{evaluate, initialize_population};
use llmoea::problems::make_problem;
use llmoea::providers::mock_complete;
use llmoea::{Bounds, DecisionVector, Individual, ObjectiveVector, Population, RngStream};

fn points(m: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0..1.0f64, m), 1..max)
}

/// Coarse grid values so ties and duplicates are common.
fn grid_points(m: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec((0..5u8).prop_map(f64::from), m), 1..max)
}

fn individuals(fs: &[Vec<f64>]) -> Vec<Individual> {
    fs.iter()
        .enumerate()
        .map(|(i, f)| {
            let mut ind = Individual::new(i as u64, DecisionVector::new(vec![0.0]));
            ind.f = Some(ObjectiveVector::new(f.clone()));
            ind
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fronts_partition_and_layer(fs in grid_points(3, 40)) {
        let mut members = individuals(&fs);
        let partition = rank_and_crowd(&mut members);
        prop_assert_eq!(partition.size(), fs.len());
        let mut seen = vec![false; fs.len()];
        for (k, front) in partition.fronts.iter().enumerate() {
            for &i in front {
                prop_assert!(!seen[i]);
                seen[i] = true;
                prop_assert_eq!(members[i].rank, Some(k + 1));
                for &j in front {
                    prop_assert!(!dominates(&fs[i], &fs[j]));
                }
                if k > 0 {
                    prop_assert!(partition.fronts[k - 1].iter().any(|&p| dominates(&fs[p], &fs[i])));
                }
                let c = members[i].crowding.unwrap();
                prop_assert!(c >= 0.0);
            }
        }
        let first: Vec<usize> = {
            let mut v = partition.fronts[0].clone();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(first, nondominated_indices(&fs));
    }

    #[test]
    fn selection_keeps_whole_better_fronts(fs in grid_points(2, 40), keep in 1usize..40) {
        let keep = keep.min(fs.len());
        let mut ranked = individuals(&fs);
        rank_and_crowd(&mut ranked);
        let survivors = environmental_selection(Population::new(individuals(&fs)), keep);
        prop_assert_eq!(survivors.len(), keep);
        let worst = survivors.members.iter().map(|m| m.rank.unwrap()).max().unwrap();
        let kept: std::collections::HashSet<u64> = survivors.members.iter().map(|m| m.id).collect();
        for r in &ranked {
            if r.rank.unwrap() < worst {
                prop_assert!(kept.contains(&r.id));
            }
        }
    }

    #[test]
    fn variation_stays_in_bounds(seed in any::<u64>(), d in 1usize..12, spread in 0.1..50.0f64) {
        let bounds = Bounds::uniform(d, -spread, spread);
        let mut rng = RngStream::new(seed);
        let draw = |rng: &mut RngStream| -> DecisionVector {
            (0..d).map(|_| -spread + 2.0 * spread * rng.unit()).collect::<Vec<_>>().into()
        };
        let params = VariationParams::default();
        for _ in 0..20 {
            let (a, b) = (draw(&mut rng), draw(&mut rng));
            let (c1, c2) = sbx_crossover(&a, &b, &params, &bounds, &mut rng);
            prop_assert!(bounds.contains(&c1) && bounds.contains(&c2));
            let m = polynomial_mutation(&c1, &params, &bounds, &mut rng);
            prop_assert!(bounds.contains(&m));
        }
    }

    #[test]
    fn fixed_point_text_round_trips(v in prop::collection::vec(-1e6..1e6f64, 1..30)) {
        let text = format!("noise {} more noise", frame(&v));
        let spans = extract_spans(&text).unwrap();
        prop_assert_eq!(spans.len(), 1);
        let back = parse_reals(spans[0]).unwrap();
        prop_assert_eq!(back.len(), v.len());
        for (a, b) in back.iter().zip(&v) {
            prop_assert!((a - b).abs() <= 5e-4 + 1e-12 * b.abs());
            prop_assert_eq!(fixed(*a), fixed(*b));
        }
    }

    #[test]
    fn hypervolume_is_monotone_and_bounded(fs in points(3, 25), extra in prop::collection::vec(0.0..1.0f64, 3)) {
        let ctx = MetricContext::new(vec![0.0; 3], vec![1.0; 3], 1.1).unwrap();
        let base = hypervolume(&fs, &ctx);
        prop_assert!(base >= 0.0 && base <= 1.1f64.powi(3) + 1e-12);
        let mut more = fs.clone();
        more.push(extra);
        prop_assert!(hypervolume(&more, &ctx) >= base - 1e-12);
        let front: Vec<Vec<f64>> = nondominated_indices(&fs).into_iter().map(|i| fs[i].clone()).collect();
        prop_assert!((hypervolume(&front, &ctx) - base).abs() < 1e-12);
    }

    #[test]
    fn igd_is_zero_on_the_reference_and_nonnegative(fs in points(2, 30), other in points(2, 30)) {
        prop_assert_eq!(igd(&fs, &fs), 0.0);
        prop_assert!(igd(&other, &fs) >= 0.0);
    }

    #[test]
    fn gate_fires_exactly_on_threshold_crossings(scores in prop::collection::vec(-5.0..5.0f64, 1..30), delta in 0.0..1.0f64) {
        let mut gate = GateState::new(delta);
        let mut prev = 0.0;
        for &s in &scores {
            prop_assert_eq!(gate.should_invoke(s), s - prev >= delta);
            prev = s;
        }
        prop_assert_eq!(gate.invocations(), gate.history().iter().filter(|r| r.invoked).count());
    }

    #[test]
    fn score_is_finite_or_sentinel(fs in grid_points(2, 30)) {
        let mut members = individuals(&fs);
        let partition = rank_and_crowd(&mut members);
        let s = auxiliary_score(&members, &partition);
        prop_assert!(s.is_finite() || s == f64::NEG_INFINITY);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mock_answers_parse_into_bounded_offspring(
        seed in any::<u64>(),
        name in prop::sample::select(vec!["ZDT1", "ZDT4", "UF1", "UF8"]),
        l in 2usize..8,
        s in 1usize..6,
    ) {
        let spec = make_problem(name, None).unwrap();
        let mut rng = RngStream::new(seed);
        let mut pop = initialize_population(&spec, 20, &mut rng);
        evaluate(&spec, &mut pop).unwrap();
        rank_and_crowd(&mut pop.members);
        let elites = select_elites(&pop.members, l);
        let prompt = build_prompt(&elites, &spec, s);
        let reply = mock_complete(&prompt.rendered, s, false).unwrap();
        let parsed = parse_response(&reply, &spec, s).unwrap();
        prop_assert_eq!(parsed.vectors.len(), s);
        for x in &parsed.vectors {
            prop_assert!(spec.bounds().contains(x));
        }
    }
}
