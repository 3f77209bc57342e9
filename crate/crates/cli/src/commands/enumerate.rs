use qwm_core::analysis::{count_distinct_dicycle_gc2_walks, DistinctWalkReport};
use qwm_core::calibration::MAX_DISTINCT_DICYCLE_WALKS;
use qwm_core::coin_shift::{census_all_tables, enumerate_coin_shifts, TableCensus};
use qwm_core::graph::{iterate_line_digraph, make_bidirected_cycle};
use qwm_core::partition::{
    census_partitions, enumerate_partitions, named_partition, random_dicycle_factorization, random_partition,
    NamedPartition, Partition, PartitionCensus,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{prepare_dir, write_json};
use crate::Common;

const DEFAULT_T_MAX: usize = 30;
const DEFAULT_SEEDS: u64 = 50;
const PARTITION_LIMIT: usize = 1 << 16;

#[derive(Serialize)]
struct Report {
    command: &'static str,
    window: usize,
    host_vertices: usize,
    partitions: PartitionSection,
    coin_shifts: Vec<CoinShiftSection>,
    distinct_walks: DistinctWalkReport,
    distinct_walks_ok: bool,
    pass: bool,
}

#[derive(Serialize)]
struct PartitionSection {
    enumerated: usize,
    enumerated_dicycle: usize,
    brute_force: PartitionCensus,
    agree: bool,
}

#[derive(Serialize)]
struct CoinShiftSection {
    partition: String,
    is_dicycle: bool,
    enumerated: usize,
    brute_force: TableCensus,
    agree: bool,
}

fn coin_shift_section(name: String, p: &Partition) -> Result<CoinShiftSection, CliError> {
    let enumerated = enumerate_coin_shifts(p)?.len();
    let brute_force = census_all_tables(p)?;
    Ok(CoinShiftSection {
        partition: name,
        is_dicycle: p.is_dicycle(),
        enumerated,
        agree: enumerated as u64 == brute_force.bijective && brute_force.disagreements == 0,
        brute_force,
    })
}

pub fn run(args: &Common, window: usize) -> Result<String, CliError> {
    if args.config.is_some() {
        return Err(CliError::Spec("enumerate takes --window instead of --config".into()));
    }
    let t = args.t_max.unwrap_or(DEFAULT_T_MAX);
    let seeds = args.seeds().unwrap_or_else(|| (0..DEFAULT_SEEDS).collect());
    let host = iterate_line_digraph(&make_bidirected_cycle(window)?, 1)?;
    let g = host.graph();

    let listed = enumerate_partitions(g, PARTITION_LIMIT)?;
    let census = census_partitions(g)?;
    let dicycle = listed.iter().filter(|p| p.is_dicycle()).count();
    let partitions = PartitionSection {
        enumerated: listed.len(),
        enumerated_dicycle: dicycle,
        agree: census.partitions == listed.len() as u64 && census.dicycle_factorizations == dicycle as u64,
        brute_force: census,
    };

    let sample_seed = seeds.first().copied().unwrap_or(0);
    let named = [
        ("pi1".to_string(), named_partition(NamedPartition::Pi1, &host)?),
        ("pi2".to_string(), named_partition(NamedPartition::Pi2, &host)?),
        (format!("pi3 seed {sample_seed}"), random_partition(g, sample_seed)),
        (format!("pi4 seed {sample_seed}"), random_dicycle_factorization(g, sample_seed)),
    ];
    let pool = args.pool()?;
    let (coin_shifts, distinct) = pool.install(|| {
        rayon::join(
            || named.iter().map(|(n, p)| coin_shift_section(n.clone(), p)).collect::<Result<Vec<_>, _>>(),
            || count_distinct_dicycle_gc2_walks(&seeds, t),
        )
    });
    let (coin_shifts, distinct_walks) = (coin_shifts?, distinct?);
    let distinct_walks_ok =
        distinct_walks.n_classes <= MAX_DISTINCT_DICYCLE_WALKS && distinct_walks.key_mismatches == 0;
    let pass = partitions.agree && coin_shifts.iter().all(|c| c.agree) && distinct_walks_ok;

    let mut text = format!(
        "enumerate on L(C_{window}): {} partitions ({} dicycle), brute force {} ({})",
        partitions.enumerated, partitions.enumerated_dicycle, census.partitions, census.dicycle_factorizations
    );
    for c in &coin_shifts {
        text.push_str(&format!(
            "\n  {}: {} valid coin shifts, brute force {} of {} tables, {} disagreements",
            c.partition, c.enumerated, c.brute_force.bijective, c.brute_force.tables, c.brute_force.disagreements
        ));
    }
    text.push_str(&format!(
        "\ndistinct dicycle walks with the carried coin: {} classes over {} seed(s), {} keys, {} key mismatches",
        distinct_walks.n_classes,
        seeds.len(),
        distinct_walks.n_keys,
        distinct_walks.key_mismatches
    ));

    prepare_dir(&args.out)?;
    let report = Report {
        command: "enumerate",
        window,
        host_vertices: g.n_vertices(),
        partitions,
        coin_shifts,
        distinct_walks,
        distinct_walks_ok,
        pass,
    };
    write_json(&args.out, "enumerate.json", &report)?;
    if !pass {
        return Err(CliError::Numerical(text));
    }
    Ok(text + "\npass")
}
