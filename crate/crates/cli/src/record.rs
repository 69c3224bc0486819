//! Serializable result rows.

use cfp_core::search::MultiRunReport;
use cfp_core::{
    exceptions_plus_voids, group_capability_index, grouping_efficacy, percent, IncidenceMatrix, OracleResult, Rational,
    Solution, Weight,
};
use serde::{Deserialize, Serialize};

/// Outcome for one instance. Cell numbers are 1-based; rationals are stored
/// as exact `num/den` strings next to percentages rounded to two places.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub instance: String,
    pub machines: usize,
    pub parts: usize,
    pub cells: usize,
    pub q: String,
    pub singletons: bool,
    pub efficiency: String,
    pub efficiency_pct: f64,
    pub efficacy: String,
    pub efficacy_pct: f64,
    pub gci: String,
    pub gci_pct: f64,
    pub exceptions_plus_voids: usize,
    pub runs: usize,
    pub min_efficiency: String,
    pub min_pct: f64,
    pub avg_efficiency: String,
    pub avg_pct: f64,
    pub max_efficiency: String,
    pub max_pct: f64,
    pub min_cells: usize,
    pub max_cells: usize,
    pub seed: u64,
    pub elapsed_sec: f64,
    pub enumerated: Option<u64>,
    pub machine_cells: Vec<usize>,
    pub part_cells: Vec<usize>,
}

/// Flat form of [`ResultRecord`] for CSV, assignments space-separated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CsvRow {
    instance: String,
    machines: usize,
    parts: usize,
    cells: usize,
    q: String,
    singletons: bool,
    efficiency: String,
    efficiency_pct: f64,
    efficacy: String,
    efficacy_pct: f64,
    gci: String,
    gci_pct: f64,
    exceptions_plus_voids: usize,
    runs: usize,
    min_efficiency: String,
    min_pct: f64,
    avg_efficiency: String,
    avg_pct: f64,
    max_efficiency: String,
    max_pct: f64,
    min_cells: usize,
    max_cells: usize,
    seed: u64,
    elapsed_sec: f64,
    enumerated: Option<u64>,
    machine_cells: String,
    part_cells: String,
}

pub fn fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_fraction(s: &str) -> anyhow::Result<Rational> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| anyhow::anyhow!("not a fraction: {s:?}"))?;
    let d: i128 = d.trim().parse()?;
    anyhow::ensure!(d != 0, "zero denominator in {s:?}");
    Ok(Rational::new(n.trim().parse()?, d))
}

fn millis(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1000.0).round() / 1000.0
}

struct Common<'a> {
    instance: &'a str,
    matrix: &'a IncidenceMatrix,
    solution: &'a Solution,
    q: Weight,
    singletons: bool,
}

impl ResultRecord {
    fn base(c: Common<'_>, min: Rational, avg: Rational, max: Rational) -> anyhow::Result<Self> {
        let counters = c.solution.counters();
        let eta = c.solution.efficiency(c.q)?;
        let tau = grouping_efficacy(counters)?;
        let gci = group_capability_index(counters)?;
        Ok(Self {
            instance: c.instance.to_string(),
            machines: c.matrix.machines(),
            parts: c.matrix.parts(),
            cells: c.solution.nonempty_cells(),
            q: c.q.to_string(),
            singletons: c.singletons,
            efficiency: fraction(&eta),
            efficiency_pct: percent(&eta),
            efficacy: fraction(&tau),
            efficacy_pct: percent(&tau),
            gci: fraction(&gci),
            gci_pct: percent(&gci),
            exceptions_plus_voids: exceptions_plus_voids(counters),
            runs: 1,
            min_efficiency: fraction(&min),
            min_pct: percent(&min),
            avg_efficiency: fraction(&avg),
            avg_pct: percent(&avg),
            max_efficiency: fraction(&max),
            max_pct: percent(&max),
            min_cells: 0,
            max_cells: 0,
            seed: 0,
            elapsed_sec: 0.0,
            enumerated: None,
            machine_cells: c.solution.machine_cell().iter().map(|c| c + 1).collect(),
            part_cells: c.solution.part_cell().iter().map(|c| c + 1).collect(),
        })
    }

    /// Record for the best run, with statistics over all runs and the mean
    /// wall time per run.
    pub fn from_runs(
        instance: &str,
        matrix: &IncidenceMatrix,
        report: &MultiRunReport,
        q: Weight,
        singletons: bool,
        seed: u64,
    ) -> anyhow::Result<Self> {
        let best = report.best();
        let mut r = Self::base(
            Common {
                instance,
                matrix,
                solution: &best.solution,
                q,
                singletons,
            },
            report.min,
            report.avg,
            report.max,
        )?;
        r.runs = report.reports.len();
        r.min_cells = best.cell_range.0;
        r.max_cells = best.cell_range.1;
        r.seed = seed;
        r.elapsed_sec = millis(report.mean_elapsed());
        Ok(r)
    }

    pub fn from_oracle(
        instance: &str,
        matrix: &IncidenceMatrix,
        result: &OracleResult,
        q: Weight,
        singletons: bool,
        k_range: (usize, usize),
        elapsed: std::time::Duration,
    ) -> anyhow::Result<Self> {
        let mut r = Self::base(
            Common {
                instance,
                matrix,
                solution: &result.solution,
                q,
                singletons,
            },
            result.eta,
            result.eta,
            result.eta,
        )?;
        r.min_cells = k_range.0;
        r.max_cells = k_range.1;
        r.elapsed_sec = millis(elapsed);
        r.enumerated = Some(result.enumerated);
        Ok(r)
    }

    /// Recomputes the metrics from the stored assignment.
    pub fn verify(&self, matrix: &IncidenceMatrix) -> anyhow::Result<()> {
        let s = Solution::from_one_based(matrix, &self.machine_cells, &self.part_cells)?;
        let q: Weight = self.q.parse()?;
        let c = s.counters();
        anyhow::ensure!(
            parse_fraction(&self.efficiency)? == s.efficiency(q)?,
            "efficiency mismatch"
        );
        anyhow::ensure!(
            parse_fraction(&self.efficacy)? == grouping_efficacy(c)?,
            "efficacy mismatch"
        );
        anyhow::ensure!(parse_fraction(&self.gci)? == group_capability_index(c)?, "GCI mismatch");
        anyhow::ensure!(self.exceptions_plus_voids == exceptions_plus_voids(c), "E+V mismatch");
        anyhow::ensure!(self.cells == s.nonempty_cells(), "cell count mismatch");
        Ok(())
    }

    fn to_row(&self) -> CsvRow {
        let join = |v: &[usize]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        CsvRow {
            instance: self.instance.clone(),
            machines: self.machines,
            parts: self.parts,
            cells: self.cells,
            q: self.q.clone(),
            singletons: self.singletons,
            efficiency: self.efficiency.clone(),
            efficiency_pct: self.efficiency_pct,
            efficacy: self.efficacy.clone(),
            efficacy_pct: self.efficacy_pct,
            gci: self.gci.clone(),
            gci_pct: self.gci_pct,
            exceptions_plus_voids: self.exceptions_plus_voids,
            runs: self.runs,
            min_efficiency: self.min_efficiency.clone(),
            min_pct: self.min_pct,
            avg_efficiency: self.avg_efficiency.clone(),
            avg_pct: self.avg_pct,
            max_efficiency: self.max_efficiency.clone(),
            max_pct: self.max_pct,
            min_cells: self.min_cells,
            max_cells: self.max_cells,
            seed: self.seed,
            elapsed_sec: self.elapsed_sec,
            enumerated: self.enumerated,
            machine_cells: join(&self.machine_cells),
            part_cells: join(&self.part_cells),
        }
    }

    fn from_row(row: CsvRow) -> anyhow::Result<Self> {
        let split = |s: &str| -> anyhow::Result<Vec<usize>> { s.split_whitespace().map(|t| Ok(t.parse()?)).collect() };
        Ok(Self {
            machine_cells: split(&row.machine_cells)?,
            part_cells: split(&row.part_cells)?,
            instance: row.instance,
            machines: row.machines,
            parts: row.parts,
            cells: row.cells,
            q: row.q,
            singletons: row.singletons,
            efficiency: row.efficiency,
            efficiency_pct: row.efficiency_pct,
            efficacy: row.efficacy,
            efficacy_pct: row.efficacy_pct,
            gci: row.gci,
            gci_pct: row.gci_pct,
            exceptions_plus_voids: row.exceptions_plus_voids,
            runs: row.runs,
            min_efficiency: row.min_efficiency,
            min_pct: row.min_pct,
            avg_efficiency: row.avg_efficiency,
            avg_pct: row.avg_pct,
            max_efficiency: row.max_efficiency,
            max_pct: row.max_pct,
            min_cells: row.min_cells,
            max_cells: row.max_cells,
            seed: row.seed,
            elapsed_sec: row.elapsed_sec,
            enumerated: row.enumerated,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// CSV with a header line followed by one row per record.
pub fn to_csv(records: &[ResultRecord]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r.to_row())?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn from_csv(text: &str) -> anyhow::Result<Vec<ResultRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize::<CsvRow>()
        .map(|row| ResultRecord::from_row(row?))
        .collect()
}

const CSV_HEADER: [&str; 27] = [
    "instance",
    "machines",
    "parts",
    "cells",
    "q",
    "singletons",
    "efficiency",
    "efficiency_pct",
    "efficacy",
    "efficacy_pct",
    "gci",
    "gci_pct",
    "exceptions_plus_voids",
    "runs",
    "min_efficiency",
    "min_pct",
    "avg_efficiency",
    "avg_pct",
    "max_efficiency",
    "max_pct",
    "min_cells",
    "max_cells",
    "seed",
    "elapsed_sec",
    "enumerated",
    "machine_cells",
    "part_cells",
];
