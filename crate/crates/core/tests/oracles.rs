//! Independent oracles checked against each other.

use fairstop::audit::{run_trials, AuditMode, AuditOptions, OrderSet};
use fairstop::gen::{self, random_corpus, CORPUS_SEED};
use fairstop::oracle::{enumerate_rule, enumerate_sample_rule_orders, optimal_online_by_search, SampleRule};
use fairstop::rules::{backward_induction_optimal, samuel_cahn_threshold};
use fairstop::{ArrivalOrder, DiscreteDistribution, Instance, RuleSpec};

#[test]
fn dp_matches_exhaustive_search_on_the_corpus() {
    for e in random_corpus(30, CORPUS_SEED) {
        for order in ArrivalOrder::all(e.instance.n()) {
            let dp = backward_induction_optimal(&e.instance, &order).value();
            let search = optimal_online_by_search(&e.instance, &order).unwrap();
            assert!((dp - search).abs() < 1e-9, "{} {order}: {dp} vs {search}", e.name);
            let enumerated = enumerate_rule(&e.instance, &order, &RuleSpec::BackwardInduction)
                .unwrap()
                .expected_value;
            assert!((dp - enumerated).abs() < 1e-9);
        }
    }
}

#[test]
fn threshold_value_matches_closed_form() {
    let (inst, order) = gen::perturbed_tight(0.2, 0.004).unwrap();
    let t = 1.0;
    let rep = enumerate_rule(&inst, &order, &RuleSpec::Threshold { threshold: t }).unwrap();
    // Hire the first value >= t.
    let (a, b) = (inst.dist(0), inst.dist(1));
    let want: f64 = a.iter().filter(|&(x, _)| x >= t).map(|(x, f)| x * f).sum::<f64>()
        + a.cdf_below(t) * b.iter().filter(|&(x, _)| x >= t).map(|(x, f)| x * f).sum::<f64>();
    assert!((rep.expected_value - want).abs() < 1e-12);
}

#[test]
fn samuel_cahn_is_half_competitive_on_the_corpus() {
    for e in random_corpus(40, CORPUS_SEED) {
        let spec = RuleSpec::Threshold {
            threshold: samuel_cahn_threshold(&e.instance).threshold,
        };
        let v = enumerate_rule(&e.instance, &ArrivalOrder::identity(e.instance.n()), &spec)
            .unwrap()
            .expected_value;
        assert!(v >= 0.5 * e.instance.expected_max() - 1e-9, "{}", e.name);
    }
}

#[test]
fn sample_rules_agree_with_simulation_under_heavy_ties() {
    // Point masses force ties between every sample and every value.
    let inst = Instance::new(vec![
        DiscreteDistribution::point_mass(1.0).unwrap(),
        DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap(),
        DiscreteDistribution::point_mass(1.0).unwrap(),
    ])
    .unwrap();
    let orders = ArrivalOrder::all(3);
    for (which, spec) in [
        (SampleRule::Single, RuleSpec::SingleSample),
        (SampleRule::Double, RuleSpec::DoubleSample),
    ] {
        let exact = enumerate_sample_rule_orders(&inst, &orders, which).unwrap();
        for (order, rep) in orders.iter().zip(&exact) {
            let rule = spec.prepare(&inst, order).unwrap();
            let mc = run_trials(&inst, &rule, 200_000, 99, 0, None);
            assert!(
                (mc.mean() - rep.expected_value).abs() <= 4.0 * mc.se(),
                "{which:?} {order}: {} vs {}",
                mc.mean(),
                rep.expected_value
            );
            assert!((mc.hire_rate() - rep.hire_mass).abs() <= 4.0 * mc.hire_rate_se());
        }
    }
}

#[test]
fn mc_audit_agrees_with_exact_audit() {
    let inst = random_corpus(3, CORPUS_SEED).remove(2).instance;
    let spec = RuleSpec::DoubleSample;
    let exact = fairstop::audit::audit_fairness(&inst, &spec, &AuditOptions::default()).unwrap();
    let mc = fairstop::audit::audit_fairness(
        &inst,
        &spec,
        &AuditOptions {
            orders: OrderSet::List(vec![ArrivalOrder::identity(inst.n())]),
            mode: AuditMode::Mc,
            trials: 20_000,
            ..AuditOptions::default()
        },
    )
    .unwrap();
    for cell in &mc.cells {
        let e = exact.cell(&cell.order, cell.candidate - 1, cell.x).unwrap();
        // Binomial SE at the exact probability: rare cells can show zero hires.
        let se = (e.prob * (1.0 - e.prob) / cell.trials as f64).sqrt();
        assert!(
            (cell.prob - e.prob).abs() <= 4.0 * se + 1e-12,
            "{cell:?} vs {}",
            e.prob
        );
    }
    assert!(mc.iif.pass);
}
