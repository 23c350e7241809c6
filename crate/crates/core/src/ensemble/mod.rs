//! The random ensemble: every incompatibility present independently with
//! probability `p = c / (2n)`.

mod campaign;
mod census;
mod sample;

pub use campaign::{
    run_campaign, run_campaign_with, run_trial, write_csv, Campaign, CampaignSummary,
    EnsembleConfig, TrialRecord, DEFAULT_MAX_CYCLE_LEN,
};
pub use census::{comparable_pairs, cycle_census, cycle_census_in, simple_cycle_components};
pub use sample::{clause_universe, decode_clause, sample_formula, trial_rng};
