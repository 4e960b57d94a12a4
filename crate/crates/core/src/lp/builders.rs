use super::{LinearProgram, LpKind};
use crate::error::LpError;
use crate::instance::{ArrivalOrder, Instance};

fn value_labels(instance: &Instance) -> Vec<String> {
    instance.support().iter().map(|x| format!("p({x})")).collect()
}

fn pair_labels(instance: &Instance) -> Vec<String> {
    (0..instance.n())
        .flat_map(|i| {
            instance
                .support()
                .iter()
                .map(move |x| format!("p({},{x})", i + 1))
        })
        .collect()
}

/// Objective `Σ_i Σ_x x f_i(x) p(i,x)` in candidate-major layout.
fn pair_objective(instance: &Instance, mass: &[Vec<f64>]) -> Vec<f64> {
    mass.iter()
        .flat_map(|row| {
            row.iter()
                .zip(instance.support())
                .map(|(f, x)| x * f)
        })
        .collect()
}

/// Optimal IIF stopping rule for a fixed arrival order.
///
/// One variable `p(x)` per support point and one row per point:
/// `p(x) + Σ_{k<n} Σ_y f_{π(k)}(y) p(y) <= 1`, where the sum runs over the
/// first `n - 1` arrivals.
pub fn build_online_iif_lp(instance: &Instance, order: &ArrivalOrder) -> Result<LinearProgram, LpError> {
    if order.len() != instance.n() {
        return Err(LpError::Layout(format!(
            "order of length {} for {} candidates",
            order.len(),
            instance.n()
        )));
    }
    let mass = instance.mass_table();
    let s = instance.support().len();
    let n = instance.n();

    let mut prefix = vec![0.0; s];
    for t in 0..n - 1 {
        for (acc, f) in prefix.iter_mut().zip(&mass[order.at(t)]) {
            *acc += f;
        }
    }
    let objective = (0..s)
        .map(|j| instance.support()[j] * mass.iter().map(|row| row[j]).sum::<f64>())
        .collect();
    let mut lp = LinearProgram::new(objective);
    for j in 0..s {
        let mut row = prefix.clone();
        row[j] += 1.0;
        lp.push_row(row, 1.0);
    }
    lp.labels = value_labels(instance);
    lp.kind = LpKind::OnlineIif { support_len: s };
    Ok(lp)
}

/// Optimal TIF family of stopping rules; permutation-free form with one row
/// per (candidate, value): `p(i,x) + Σ_{k≠i} Σ_y f_k(y) p(k,y) <= 1`.
pub fn build_online_tif_lp(instance: &Instance) -> LinearProgram {
    let mass = instance.mass_table();
    let n = instance.n();
    let s = instance.support().len();
    let mut lp = LinearProgram::new(pair_objective(instance, &mass));
    for i in 0..n {
        for j in 0..s {
            let mut row = vec![0.0; n * s];
            for k in (0..n).filter(|&k| k != i) {
                row[k * s..(k + 1) * s].copy_from_slice(&mass[k]);
            }
            row[i * s + j] += 1.0;
            lp.push_row(row, 1.0);
        }
    }
    lp.labels = pair_labels(instance);
    lp.kind = LpKind::OnlineTif { n, support_len: s };
    lp
}

/// Upper bound on the prophet: at most one expected hire,
/// `Σ_i Σ_x f_i(x) p_ix <= 1`.
pub fn build_offline_relaxation(instance: &Instance) -> LinearProgram {
    let mass = instance.mass_table();
    let n = instance.n();
    let s = instance.support().len();
    let mut lp = LinearProgram::new(pair_objective(instance, &mass));
    lp.push_row(mass.concat(), 1.0);
    lp.labels = pair_labels(instance);
    lp.kind = LpKind::OfflineRelaxation { n, support_len: s };
    lp
}

/// Appends the must-hire equality `Σ_i Σ_x f_i(x) p(·,x) = 1` as the pair of
/// rows `m·p <= 1` and `-m·p <= -1`.
pub fn add_must_hire_constraint(lp: &LinearProgram, instance: &Instance) -> Result<LinearProgram, LpError> {
    let mass = instance.mass_table();
    let s = instance.support().len();
    let n = instance.n();
    let row: Vec<f64> = match lp.kind {
        LpKind::OnlineIif { support_len } if support_len == s && lp.var_count() == s => {
            (0..s).map(|j| mass.iter().map(|r| r[j]).sum()).collect()
        }
        LpKind::OnlineTif { n: ln, support_len }
            if ln == n && support_len == s && lp.var_count() == n * s =>
        {
            mass.concat()
        }
        other => {
            return Err(LpError::Layout(format!(
                "must-hire needs an online IIF/TIF program for {n} candidates over {s} values, got {other:?}"
            )))
        }
    };
    let mut out = lp.clone();
    let negated = row.iter().map(|v| -v).collect();
    out.push_row(row, 1.0);
    out.push_row(negated, -1.0);
    Ok(out)
}
