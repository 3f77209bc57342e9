use qwm_core::analysis::{
    recycled_correspondence, reflect_transmit_correspondence, reflect_transmit_equivalence, CorrespondenceReport,
    EquivalenceReport,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{prepare_dir, write_json};
use crate::Common;

const DEFAULT_T_MAX: usize = 100;
const DEFAULT_SEEDS: u64 = 10;

#[derive(Serialize)]
struct Report {
    command: &'static str,
    t_max: usize,
    seeds: Vec<u64>,
    equivalence: EquivalenceReport,
    correspondence: Vec<CorrespondenceReport>,
    pass: bool,
}

pub fn run(args: &Common) -> Result<String, CliError> {
    if args.config.is_some() {
        return Err(CliError::Spec("equivalence runs fixed presets and takes no --config".into()));
    }
    let t_max = args.t_max.unwrap_or(DEFAULT_T_MAX);
    let seeds = args.seeds().unwrap_or_else(|| (0..DEFAULT_SEEDS).collect());
    let pool = args.pool()?;
    let (equivalence, correspondence) = pool.install(|| {
        rayon::join(
            || reflect_transmit_equivalence(t_max),
            || -> Result<Vec<CorrespondenceReport>, qwm_core::QwmError> {
                Ok(vec![
                    recycled_correspondence(1, &seeds, t_max)?,
                    recycled_correspondence(2, &seeds, t_max)?,
                    reflect_transmit_correspondence(&seeds, t_max)?,
                ])
            },
        )
    });
    let (equivalence, correspondence) = (equivalence?, correspondence?);
    let pass = equivalence.pass && correspondence.iter().all(|c| c.pass);

    prepare_dir(&args.out)?;
    let mut text = format!(
        "equivalence (t <= {t_max}): constraint {:.2e}, alpha {:.2e}, tv {:.2e}, engine beta {:.2e}, engine alpha {:.2e}; perturbed residual {:.2e} (applicable: {})",
        equivalence.max_constraint_residual,
        equivalence.max_alpha_diff,
        equivalence.max_total_variation,
        equivalence.max_engine_beta_diff,
        equivalence.max_engine_alpha_diff,
        equivalence.perturbed_constraint_residual,
        equivalence.perturbed_applicable,
    );
    for c in &correspondence {
        text.push_str(&format!(
            "\ncorrespondence {} d={}: max diff {:.2e} over {} seed(s)",
            c.reference,
            c.d,
            c.max_diff,
            c.seeds.len()
        ));
    }
    write_json(
        &args.out,
        "equivalence.json",
        &Report { command: "equivalence", t_max, seeds, equivalence, correspondence, pass },
    )?;
    if !pass {
        return Err(CliError::Numerical(text));
    }
    Ok(text + "\npass")
}
