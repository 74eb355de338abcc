//! Report shapes and printers. JSON field names and order are frozen under
//! the schema tag; table output is plain aligned ASCII.

use std::collections::BTreeMap;

use serde::Serialize;

use knotshift::TowerPattern;

pub const SCHEMA: &str = "knotshift.v1";

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub schema: &'static str,
    pub knot: String,
    pub delta: Vec<i64>,
    pub p: u64,
    pub r: u32,
    pub n: usize,
    pub hom_order: String,
    pub d: u64,
    #[serde(rename = "Q")]
    pub q: Vec<u64>,
    pub counts: BTreeMap<u64, String>,
}

#[derive(Serialize)]
pub struct FactorBlock {
    pub p: u64,
    pub r: u32,
    pub n: usize,
    pub hom_order: String,
    pub d: u64,
    #[serde(rename = "Q")]
    pub q: Vec<u64>,
}

#[derive(Serialize)]
pub struct CombinedAnalyzeReport {
    pub schema: &'static str,
    pub knot: String,
    pub delta: Vec<i64>,
    pub sigma: String,
    pub factors: Vec<FactorBlock>,
    pub hom_order: String,
    pub d: u64,
    #[serde(rename = "Q")]
    pub q: Vec<u64>,
    pub counts: BTreeMap<u64, String>,
}

#[derive(Serialize)]
pub struct PeriodsReport {
    pub schema: &'static str,
    pub knot: String,
    pub delta: Vec<i64>,
    pub p: u64,
    pub rmax: u32,
    pub tower: Vec<u64>,
    pub pattern: String,
}

#[derive(Serialize)]
pub struct CoveringFactor {
    pub p: u64,
    pub r: u32,
    pub order: u64,
    pub total_fixed: String,
    pub surjective: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<Vec<u64>>>,
}

#[derive(Serialize)]
pub struct CoveringsReport {
    pub schema: &'static str,
    pub knot: String,
    pub delta: Vec<i64>,
    pub sigma: String,
    pub d: u64,
    pub total_fixed: String,
    pub surjective: String,
    pub factors: Vec<CoveringFactor>,
}

#[derive(Serialize)]
pub struct SelfcheckReport {
    pub schema: &'static str,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: String,
}

pub fn pattern_text(pattern: TowerPattern) -> String {
    match pattern {
        TowerPattern::Constant => "constant".into(),
        TowerPattern::GrowthFrom(s) => format!("growth from s={s}"),
        TowerPattern::StabilizedAfterGrowth => "stabilized after growth".into(),
        TowerPattern::Other => "other".into(),
    }
}

/// Writes to stdout, swallowing pipe closure so `knotshift ... | head`
/// terminates quietly instead of panicking.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

pub fn print_json<T: Serialize>(report: &T) {
    // infallible for these report shapes; keys are strings and values finite
    let body = serde_json::to_string_pretty(report).expect("serializable report");
    emit(&format!("{body}\n"));
}

fn delta_text(delta: &[i64]) -> String {
    delta.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn counts_text(counts: &BTreeMap<u64, String>) -> String {
    counts
        .iter()
        .map(|(q, c)| format!("q={q}:{c}"))
        .collect::<Vec<_>>()
        .join("  ")
}

pub fn print_analyze_table(report: &AnalyzeReport) {
    let mut buf = String::new();
    buf.push_str(&format!("knot       {}\n", report.knot));
    buf.push_str(&format!("delta      {}\n", delta_text(&report.delta)));
    buf.push_str(&format!("modulus    {}^{}\n", report.p, report.r));
    buf.push_str(&format!("n          {}\n", report.n));
    buf.push_str(&format!("hom order  {}\n", report.hom_order));
    buf.push_str(&format!("d          {}\n", report.d));
    buf.push_str(&format!("periods    {}\n", counts_text(&report.counts)));
    emit(&buf);
}

pub fn print_combined_table(report: &CombinedAnalyzeReport) {
    let mut buf = String::new();
    buf.push_str(&format!("knot       {}\n", report.knot));
    buf.push_str(&format!("delta      {}\n", delta_text(&report.delta)));
    buf.push_str(&format!("sigma      {}\n", report.sigma));
    for f in &report.factors {
        buf.push_str(&format!(
            "  factor {}^{}: n={} hom={} d={} Q={:?}\n",
            f.p, f.r, f.n, f.hom_order, f.d, f.q
        ));
    }
    buf.push_str(&format!("hom order  {}\n", report.hom_order));
    buf.push_str(&format!("d          {}\n", report.d));
    buf.push_str(&format!("periods    {}\n", counts_text(&report.counts)));
    emit(&buf);
}

pub fn print_periods_table(report: &PeriodsReport) {
    let mut buf = String::new();
    buf.push_str(&format!("knot     {}\n", report.knot));
    buf.push_str(&format!("delta    {}\n", delta_text(&report.delta)));
    buf.push_str(&format!("p        {}\n", report.p));
    buf.push_str("r  d_r\n");
    for (i, d) in report.tower.iter().enumerate() {
        buf.push_str(&format!("{}  {}\n", i + 1, d));
    }
    buf.push_str(&format!("pattern  {}\n", report.pattern));
    emit(&buf);
}

pub fn print_coverings_table(report: &CoveringsReport) {
    let mut buf = String::new();
    buf.push_str(&format!("knot         {}\n", report.knot));
    buf.push_str(&format!("delta        {}\n", delta_text(&report.delta)));
    buf.push_str(&format!("sigma        {}\n", report.sigma));
    buf.push_str(&format!("d            {}\n", report.d));
    buf.push_str(&format!("total fixed  {}\n", report.total_fixed));
    buf.push_str(&format!("surjective   {}\n", report.surjective));
    for f in &report.factors {
        buf.push_str(&format!(
            "  factor {}^{}: order={} fixed={} surjective={}\n",
            f.p, f.r, f.order, f.total_fixed, f.surjective
        ));
        if let Some(reps) = &f.representatives {
            for rep in reps {
                buf.push_str(&format!("    {rep:?}\n"));
            }
        }
    }
    emit(&buf);
}

pub fn print_selfcheck_table(report: &SelfcheckReport) {
    let mut buf = String::new();
    for line in &report.checks {
        buf.push_str(&format!("{:4} {}\n", line.status, line.name));
    }
    buf.push_str(&format!("passed: {}\n", report.passed));
    emit(&buf);
}
