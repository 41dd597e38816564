use std::collections::{BTreeMap, BTreeSet};

use affectframe::eval::{agreed_ranks, build_judgments, pairwise_power_accuracy, PairJudgment, StepScores};
use affectframe::synth::planted_rankings;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn planted(n: usize) -> BTreeMap<String, f64> {
    (0..n).map(|k| (format!("E{k:02}"), k as f64 / n as f64)).collect()
}

fn scores_from(values: &BTreeMap<String, f64>, steps: u32) -> StepScores {
    (1..=steps).map(|s| (s, values.clone())).collect()
}

#[test]
fn planted_comparator_is_perfect() {
    let truth = planted(12);
    let rankings = planted_rankings(&truth, 5, 3, 0.0, 12, 4);
    let agreed = agreed_ranks(&rankings, Some(2.0));
    let set = build_judgments(&agreed, None);
    assert!(!set.judgments.is_empty());
    let acc = pairwise_power_accuracy(&scores_from(&truth, 5), &set.judgments).unwrap();
    assert_eq!(acc.accuracy, 1.0);
    assert_eq!((acc.ties, acc.missing), (0, 0));
}

#[test]
fn random_comparator_is_near_chance() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let judgments: Vec<PairJudgment> = (0..1000)
        .map(|i| PairJudgment { step: 1, higher: format!("h{i}"), lower: format!("l{i}") })
        .collect();
    let mut step = BTreeMap::new();
    for j in &judgments {
        step.insert(j.higher.clone(), rng.random::<f64>());
        step.insert(j.lower.clone(), rng.random::<f64>());
    }
    let scores: StepScores = [(1, step)].into_iter().collect();
    let acc = pairwise_power_accuracy(&scores, &judgments).unwrap();
    assert!((acc.accuracy - 0.5).abs() <= 0.10, "{}", acc.accuracy);
}

#[test]
fn negated_scores_are_complementary() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let truth = planted(10);
    let rankings = planted_rankings(&truth, 4, 3, 0.15, 10, 8);
    let set = build_judgments(&agreed_ranks(&rankings, Some(2.0)), None);
    // continuous random scores, so no comparator ties
    let scores: StepScores = (1..=4)
        .map(|s| (s, truth.keys().map(|e| (e.clone(), rng.random::<f64>())).collect()))
        .collect();
    let negated: StepScores = scores
        .iter()
        .map(|(s, m)| (*s, m.iter().map(|(e, v)| (e.clone(), -v)).collect()))
        .collect();
    let a = pairwise_power_accuracy(&scores, &set.judgments).unwrap();
    let b = pairwise_power_accuracy(&negated, &set.judgments).unwrap();
    assert!((a.accuracy + b.accuracy - 1.0).abs() < 1e-12);
}

#[test]
fn missing_entities_count_as_wrong() {
    let truth = planted(6);
    let rankings = planted_rankings(&truth, 1, 2, 0.0, 6, 1);
    let set = build_judgments(&agreed_ranks(&rankings, None), None);
    let mut partial = truth.clone();
    partial.remove("E00");
    let acc = pairwise_power_accuracy(&scores_from(&partial, 1), &set.judgments).unwrap();
    let involving = set.judgments.iter().filter(|j| j.higher == "E00" || j.lower == "E00").count();
    assert_eq!(acc.missing, involving);
    assert_eq!(acc.correct, set.judgments.len() - involving);
}

#[test]
fn entity_filter_restricts_every_judgment() {
    let truth = planted(8);
    let rankings = planted_rankings(&truth, 2, 3, 0.0, 8, 2);
    let keep: BTreeSet<String> = ["E01", "E03", "E07"].iter().map(|s| s.to_string()).collect();
    let set = build_judgments(&agreed_ranks(&rankings, Some(2.0)), Some(&keep));
    assert_eq!(set.judgments.len(), 2 * 3);
    assert!(set.judgments.iter().all(|j| keep.contains(&j.higher) && keep.contains(&j.lower)));
}
