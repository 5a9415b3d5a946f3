//! Threshold policies on the ten-agent scenario: one run, then the
//! adversary search against the closed forms at every state.

use skirental::deterministic::{
    cr_ov_formula, cr_sd_formula, run_deterministic, threshold_ov, threshold_sd, worst_case_cr_det,
    Objective, ThresholdKind,
};
use skirental::experiments::figure3_scenario;
use skirental::model::cost_to_f64;
use skirental::search::SearchOptions;
use skirental::GroupState;

fn main() -> skirental::Result<()> {
    let (params, inst) = figure3_scenario();
    let ledger = run_deterministic(&params, &inst, ThresholdKind::StateDependent);
    println!(
        "pi_SD on N = 1..10: total {} (bought on {:?})",
        ledger.total(),
        ledger.purchase_day()
    );

    println!("l   T_OV   T_SD   CR_OV(search) CR_OV(closed) CR_SD(search) CR_SD(closed)");
    let opts = SearchOptions::default();
    for ell in 0..inst.len() {
        let s = GroupState::prefix_of(&inst, ell);
        let ov = worst_case_cr_det(&params, ThresholdKind::Overall, Objective::Overall, &s, &opts)?;
        let sd = worst_case_cr_det(
            &params,
            ThresholdKind::StateDependent,
            Objective::StateDependent,
            &s,
            &opts,
        )?;
        println!(
            "{ell}  {:>5.2}  {:>5.2}   {:.4}        {:.4}        {:.4}        {:.4}",
            cost_to_f64(&threshold_ov(&params, &s)),
            cost_to_f64(&threshold_sd(&params, &s)),
            ov.ratio,
            cost_to_f64(&cr_ov_formula(&params, &s)),
            sd.ratio,
            cost_to_f64(&cr_sd_formula(&params, &s)),
        );
    }
    Ok(())
}
