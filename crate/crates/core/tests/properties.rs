use fairstop::audit::{audit_fairness, AuditOptions};
use fairstop::lp::{
    build_offline_relaxation, build_setting, halved_symmetrized_policy, optimal_iif_policy, optimal_tif_policy,
    policy_expected_value, solve_lp, solve_setting, symmetrize_offline_solution, FairPolicy, Setting,
};
use fairstop::oracle::{enumerate_rule, grid_policy_search, GridKind};
use fairstop::rules::backward_induction_optimal;
use fairstop::{ArrivalOrder, DiscreteDistribution, Instance, InstanceFile, RuleSpec};
use proptest::prelude::*;

const VALUES: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 3.5, 7.0];

/// One candidate: a non-empty subset of `VALUES` with positive masses.
fn dist() -> impl Strategy<Value = DiscreteDistribution> {
    (1u32..64, prop::collection::vec(0.05f64..1.0, VALUES.len())).prop_map(|(mask, w)| {
        let (points, masses): (Vec<f64>, Vec<f64>) = VALUES
            .iter()
            .zip(&w)
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, (&x, &m))| (x, m))
            .unzip();
        let total: f64 = masses.iter().sum();
        DiscreteDistribution::new(points, masses.iter().map(|m| m / total).collect()).unwrap()
    })
}

fn instance(max_n: usize) -> impl Strategy<Value = Instance> {
    prop::collection::vec(dist(), 1..=max_n).prop_map(|d| Instance::new(d).unwrap())
}

/// `E[max]` by walking every profile.
fn brute_expected_max(inst: &Instance) -> f64 {
    fn go(inst: &Instance, i: usize, best: f64, prob: f64) -> f64 {
        if i == inst.n() {
            return prob * best;
        }
        inst.dist(i).iter().map(|(x, f)| go(inst, i + 1, best.max(x), prob * f)).sum()
    }
    go(inst, 0, f64::NEG_INFINITY, 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expected_max_matches_brute_force(inst in instance(4)) {
        prop_assert!((inst.expected_max() - brute_expected_max(&inst)).abs() < 1e-9);
    }

    #[test]
    fn symmetrizing_keeps_the_objective(inst in instance(4)) {
        let lp = build_offline_relaxation(&inst);
        let sol = solve_lp(&lp).unwrap();
        let p = FairPolicy::from_solution(&inst, &lp, &sol).unwrap();
        let sym = symmetrize_offline_solution(&inst, &p);
        prop_assert!((policy_expected_value(&inst, &sym) - sol.objective_value).abs() < 1e-9);
        prop_assert!((sym.hire_mass(&inst) - p.hire_mass(&inst)).abs() < 1e-9);
    }

    #[test]
    fn halved_policy_is_fair_feasible(inst in instance(4)) {
        let p = halved_symmetrized_policy(&inst).unwrap();
        prop_assert!(p.in_unit_box());
        for order in ArrivalOrder::all(inst.n()) {
            prop_assert!(p.iif_violation(&inst, &order) <= 1e-8);
        }
        prop_assert!(p.as_tif(inst.n()).tif_violation(&inst) <= 1e-8);
        prop_assert!(p.hire_mass(&inst) <= 0.5 + 1e-9);
        prop_assert!(policy_expected_value(&inst, &p) >= 0.5 * inst.expected_max() - 1e-9);
    }

    #[test]
    fn fair_optima_sit_between_the_bounds(inst in instance(4)) {
        let em = inst.expected_max();
        let offline = solve_setting(&inst, Setting::OfflineRelaxation, &ArrivalOrder::identity(inst.n()))
            .unwrap()
            .objective();
        prop_assert!(offline >= em - 1e-9);
        let tif = optimal_tif_policy(&inst).unwrap().objective_value;
        prop_assert!(tif >= 0.5 * em - 1e-9);
        for order in ArrivalOrder::all(inst.n()) {
            let dp = backward_induction_optimal(&inst, &order).value();
            let iif = optimal_iif_policy(&inst, &order).unwrap().objective_value;
            prop_assert!(iif >= 0.5 * em - 1e-9, "iif {iif} em {em}");
            prop_assert!(iif <= dp + 1e-9, "iif {iif} dp {dp}");
            // A TIF rule earns the same under every order.
            prop_assert!(tif <= dp + 1e-9, "tif {tif} dp {dp}");
            prop_assert!(dp <= em + 1e-9);
        }
    }

    #[test]
    fn solutions_carry_a_duality_certificate(inst in instance(4), k in 0usize..5) {
        let setting = Setting::ALL[k];
        let lp = build_setting(&inst, setting, &ArrivalOrder::reversed(inst.n())).unwrap();
        let sol = solve_lp(&lp).unwrap();
        prop_assert!(sol.is_optimal());
        prop_assert!(lp.max_violation(&sol.values) <= 1e-8);
        prop_assert!(sol.values.iter().all(|v| (-1e-10..=1.0 + 1e-10).contains(v)));
        prop_assert!(sol.dual_violation(&lp) <= 1e-8);
        let gap = (sol.dual_objective(&lp) - sol.objective_value).abs();
        prop_assert!(gap <= 1e-7 * (1.0 + sol.objective_value.abs()), "gap {gap}");
    }

    #[test]
    fn enumeration_matches_the_lp_objective(inst in instance(3)) {
        let order = ArrivalOrder::identity(inst.n());
        let p = optimal_iif_policy(&inst, &order).unwrap();
        let rep = enumerate_rule(&inst, &order, &RuleSpec::Iif { policy: p.clone() }).unwrap();
        prop_assert!((rep.expected_value - p.objective_value).abs() < 1e-9);
        prop_assert!((rep.value_from_table(&inst) - rep.expected_value).abs() < 1e-9);
        prop_assert!(rep.hire_mass <= 1.0 + 1e-12);
        let audit = audit_fairness(&inst, &RuleSpec::Iif { policy: p }, &AuditOptions {
            orders: fairstop::audit::OrderSet::List(vec![order]),
            ..AuditOptions::default()
        }).unwrap();
        prop_assert!(audit.iif.pass);
    }

    #[test]
    fn grid_never_beats_the_lp(inst in instance(2)) {
        prop_assume!(inst.support().len() <= 3);
        let order = ArrivalOrder::identity(inst.n());
        let lp = optimal_iif_policy(&inst, &order).unwrap().objective_value;
        let g = grid_policy_search(&inst, &GridKind::Iif(order), 0.02).unwrap();
        prop_assert!(g.objective <= lp + 1e-9);
        prop_assert!(g.objective >= lp - g.slack - 1e-9);
    }

    #[test]
    fn json_round_trips(inst in instance(4), perm_seed in 0usize..24) {
        let orders = ArrivalOrder::all(inst.n());
        let order = orders[perm_seed % orders.len()].clone();
        let file = InstanceFile { instance: inst.clone(), order: Some(order.clone()) };
        let text = serde_json::to_string(&file).unwrap();
        prop_assert_eq!(&InstanceFile::parse(&text).unwrap(), &file);

        let p = optimal_iif_policy(&inst, &order).unwrap();
        let back: FairPolicy = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(&back, &p);

        let spec = RuleSpec::Tif { policy: optimal_tif_policy(&inst).unwrap() };
        let back: RuleSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(back, spec);
    }
}

#[test]
fn audit_report_round_trips() {
    let (inst, _) = fairstop::gen::zero_one_instance().unwrap();
    let report = audit_fairness(&inst, &RuleSpec::Threshold { threshold: 1.0 }, &AuditOptions::default()).unwrap();
    let text = serde_json::to_string_pretty(&report).unwrap();
    let back: fairstop::audit::AuditReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}
