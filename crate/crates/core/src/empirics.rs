//! Quadrant classification of countries by governance index and resource
//! abundance, and the per-quadrant anomaly tally.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::fmt_num;

#[derive(Debug, Error)]
pub enum EmpiricsError {
    #[error("cannot read {path}: {source}")]
    FileUnreadable { path: String, source: io::Error },
    #[error("column '{column}' not found in header [{header}]")]
    SchemaMismatch { column: String, header: String },
    #[error("{0} has neither a GNI value nor an income class")]
    MissingIncome(String),
    #[error("{0}")]
    InvalidThresholds(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl EmpiricsError {
    pub fn name(&self) -> &'static str {
        match self {
            EmpiricsError::FileUnreadable { .. } => "FileUnreadable",
            EmpiricsError::SchemaMismatch { .. } => "SchemaMismatch",
            EmpiricsError::MissingIncome(_) => "MissingIncome",
            EmpiricsError::InvalidThresholds(_) => "OutOfRange",
            EmpiricsError::Csv(_) => "FileUnreadable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IncomeClass {
    Low,
    NonLow,
}

impl fmt::Display for IncomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IncomeClass::Low => "Low",
            IncomeClass::NonLow => "NonLow",
        })
    }
}

impl FromStr for IncomeClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        match k.as_str() {
            "low" | "l" => Ok(IncomeClass::Low),
            "nonlow" | "notlow" | "nl" => Ok(IncomeClass::NonLow),
            _ => Err(format!("unknown income class '{s}'")),
        }
    }
}

/// Published bounds of an index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexScale {
    pub min: f64,
    pub max: f64,
}

impl IndexScale {
    /// CPIA-style 1 (weak) to 6 (strong).
    pub const CPIA: IndexScale = IndexScale { min: 1.0, max: 6.0 };
    /// 0 to 100 composite scores.
    pub const PERCENT: IndexScale = IndexScale { min: 0.0, max: 100.0 };

    pub fn midpoint(&self) -> f64 {
        (self.min + self.max) / 2.0
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }
}

impl FromStr for IndexScale {
    type Err = String;

    /// `cpia`, `percent`, or `MIN:MAX`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cpia" | "1-6" | "1:6" => Ok(IndexScale::CPIA),
            "percent" | "0-100" | "0:100" => Ok(IndexScale::PERCENT),
            other => {
                let (a, b) = other
                    .split_once(':')
                    .ok_or_else(|| format!("bad scale '{s}', expected cpia, percent or MIN:MAX"))?;
                let min: f64 = a.trim().parse().map_err(|_| format!("bad scale minimum '{a}'"))?;
                let max: f64 = b.trim().parse().map_err(|_| format!("bad scale maximum '{b}'"))?;
                if !(min.is_finite() && max.is_finite() && min < max) {
                    return Err(format!("bad scale '{s}'"));
                }
                Ok(IndexScale { min, max })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub scale: IndexScale,
    /// Index values at or above this are "high".
    pub index_high_cutoff: f64,
    /// Export shares (percent) at or above this are "abundant".
    pub abundance_cutoff: f64,
    /// GNI per capita at or below this is low income.
    pub income_low_cutoff: f64,
}

impl Thresholds {
    pub fn for_scale(scale: IndexScale) -> Self {
        Thresholds {
            scale,
            index_high_cutoff: scale.midpoint(),
            abundance_cutoff: 40.0,
            income_low_cutoff: 1025.0,
        }
    }

    pub fn validate(&self) -> Result<(), EmpiricsError> {
        let bad = |m: String| Err(EmpiricsError::InvalidThresholds(m));
        if !self.scale.contains(self.index_high_cutoff) {
            return bad(format!(
                "index cutoff {} outside scale [{}, {}]",
                self.index_high_cutoff, self.scale.min, self.scale.max
            ));
        }
        if !(0.0..=100.0).contains(&self.abundance_cutoff) {
            return bad(format!("abundance cutoff {} outside [0, 100]", self.abundance_cutoff));
        }
        if !(self.income_low_cutoff.is_finite() && self.income_low_cutoff >= 0.0) {
            return bad(format!("income cutoff {} must be non-negative", self.income_low_cutoff));
        }
        Ok(())
    }

    pub fn income_class(&self, gni: f64) -> IncomeClass {
        if gni <= self.income_low_cutoff {
            IncomeClass::Low
        } else {
            IncomeClass::NonLow
        }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self::for_scale(IndexScale::CPIA)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryRecord {
    pub name: String,
    pub index_value: f64,
    /// Percent of merchandise exports.
    pub abundance_share: f64,
    pub gni_per_capita: Option<f64>,
    /// Explicit class if given, otherwise derived from GNI at load time.
    pub income_class: Option<IncomeClass>,
}

/// Header names of the input columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMapping {
    pub name: String,
    pub index: String,
    pub abundance: String,
    pub gni: Option<String>,
    pub income_class: Option<String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            name: "country".into(),
            index: "index".into(),
            abundance: "abundance".into(),
            gni: Some("gni".into()),
            income_class: Some("income_class".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    RangeViolation,
    ParseError,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    /// 1-based line in the input file (the header is line 1).
    pub line: u64,
    pub country: Option<String>,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} line {}", self.kind, self.line)?;
        if let Some(c) = &self.country {
            write!(f, " ({c})")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCountries {
    pub records: Vec<CountryRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

fn sniff_delimiter<R: BufRead>(reader: &mut R) -> io::Result<u8> {
    let mut first = String::new();
    reader.read_line(&mut first)?;
    Ok(if first.contains('\t') && !first.contains(',') {
        b'\t'
    } else {
        b','
    })
}

/// Reads a delimited file with a header row. `delimiter` of `None` picks tab
/// when the header has tabs and no commas, comma otherwise. Rows that fail
/// to parse or violate a range are skipped with a diagnostic.
pub fn load_countries(
    path: &Path,
    mapping: &ColumnMapping,
    thresholds: &Thresholds,
    delimiter: Option<u8>,
) -> Result<LoadedCountries, EmpiricsError> {
    let unreadable = |source| EmpiricsError::FileUnreadable {
        path: path.display().to_string(),
        source,
    };
    let mut file = File::open(path).map_err(unreadable)?;
    let delimiter = match delimiter {
        Some(d) => d,
        None => {
            let d = sniff_delimiter(&mut BufReader::new(&mut file)).map_err(unreadable)?;
            file.seek(SeekFrom::Start(0)).map_err(unreadable)?;
            d
        }
    };
    load_from_reader(file, mapping, thresholds, delimiter)
}

pub fn load_from_reader<R: Read>(
    input: R,
    mapping: &ColumnMapping,
    thresholds: &Thresholds,
    delimiter: u8,
) -> Result<LoadedCountries, EmpiricsError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers()?.clone();
    let find = |col: &str| header.iter().position(|h| h.eq_ignore_ascii_case(col));
    let required = |col: &str| {
        find(col).ok_or_else(|| EmpiricsError::SchemaMismatch {
            column: col.to_string(),
            header: header.iter().collect::<Vec<_>>().join(", "),
        })
    };
    let name_col = required(&mapping.name)?;
    let index_col = required(&mapping.index)?;
    let abundance_col = required(&mapping.abundance)?;
    let gni_col = mapping.gni.as_deref().and_then(find);
    let class_col = mapping.income_class.as_deref().and_then(find);

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                diagnostics.push(Diagnostic {
                    line,
                    country: None,
                    kind: DiagnosticKind::ParseError,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        let name = row.get(name_col).unwrap_or("").to_string();
        let mut report = |kind, message: String| {
            diagnostics.push(Diagnostic {
                line,
                country: Some(name.clone()),
                kind,
                message,
            })
        };
        let number = |col: usize, what: &str| -> Result<Option<f64>, String> {
            let raw = row.get(col).unwrap_or("");
            if raw.is_empty() || raw.eq_ignore_ascii_case("na") {
                return Ok(None);
            }
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Some)
                .ok_or_else(|| format!("{what} '{raw}' is not a number"))
        };

        let parsed = (|| {
            let index = number(index_col, "index")?.ok_or("index is missing")?;
            let abundance = number(abundance_col, "abundance")?.ok_or("abundance is missing")?;
            let gni = match gni_col {
                Some(c) => number(c, "gni")?,
                None => None,
            };
            let class = match class_col.and_then(|c| row.get(c)).filter(|s| !s.is_empty()) {
                Some(s) => Some(s.parse::<IncomeClass>()?),
                None => None,
            };
            Ok::<_, String>((index, abundance, gni, class))
        })();
        let (index, abundance, gni, class) = match parsed {
            Ok(v) => v,
            Err(m) => {
                report(DiagnosticKind::ParseError, m);
                continue;
            }
        };
        if !(0.0..=100.0).contains(&abundance) {
            report(
                DiagnosticKind::RangeViolation,
                format!("abundance {abundance} outside [0, 100]"),
            );
            continue;
        }
        if !thresholds.scale.contains(index) {
            report(
                DiagnosticKind::RangeViolation,
                format!(
                    "index {index} outside scale [{}, {}]",
                    thresholds.scale.min, thresholds.scale.max
                ),
            );
            continue;
        }
        if let Some(g) = gni.filter(|g| *g < 0.0) {
            report(DiagnosticKind::RangeViolation, format!("gni {g} is negative"));
            continue;
        }
        records.push(CountryRecord {
            name,
            index_value: index,
            abundance_share: abundance,
            gni_per_capita: gni,
            income_class: class.or_else(|| gni.map(|g| thresholds.income_class(g))),
        });
    }
    Ok(LoadedCountries { records, diagnostics })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Quadrant {
    /// High index, abundant.
    I,
    /// High index, not abundant.
    II,
    /// Low index, not abundant.
    III,
    /// Low index, abundant.
    IV,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV];

    pub fn idx(self) -> usize {
        self as usize
    }

    pub fn high_index(self) -> bool {
        matches!(self, Quadrant::I | Quadrant::II)
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Ties go to high / abundant.
pub fn classify_quadrant(record: &CountryRecord, t: &Thresholds) -> Quadrant {
    let high = record.index_value >= t.index_high_cutoff;
    let abundant = record.abundance_share >= t.abundance_cutoff;
    match (high, abundant) {
        (true, true) => Quadrant::I,
        (true, false) => Quadrant::II,
        (false, false) => Quadrant::III,
        (false, true) => Quadrant::IV,
    }
}

/// Record sits exactly on a cutoff.
pub fn on_boundary(record: &CountryRecord, t: &Thresholds) -> bool {
    record.index_value == t.index_high_cutoff || record.abundance_share == t.abundance_cutoff
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryRow {
    pub name: String,
    pub index_value: f64,
    pub abundance_share: f64,
    pub income_class: IncomeClass,
    pub quadrant: Quadrant,
    pub is_anomaly: bool,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyTable {
    /// Indexed by [`Quadrant::idx`].
    pub anomalies: [usize; 4],
    pub members: [Vec<String>; 4],
    pub total: usize,
    pub rows: Vec<CountryRow>,
}

impl AnomalyTable {
    pub fn count(&self, q: Quadrant) -> usize {
        self.anomalies[q.idx()]
    }

    /// Diagnostics for records on a cutoff.
    pub fn boundary_diagnostics(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| r.boundary)
            .map(|r| format!("Boundary: {} sits on a cutoff, classified {}", r.name, r.quadrant))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<10}{:>10}{:>12}\n", "quadrant", "members", "anomalies");
        for q in Quadrant::ALL {
            out.push_str(&format!(
                "{:<10}{:>10}{:>12}\n",
                q.to_string(),
                self.members[q.idx()].len(),
                self.anomalies[q.idx()]
            ));
        }
        out.push_str(&format!("{:<10}{:>10}{:>12}\n", "total", self.rows.len(), self.total));
        out
    }

    /// Columns: quadrant, members, anomalies.
    pub fn write_quadrant_csv<W: Write>(&self, out: W) -> Result<(), EmpiricsError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["quadrant", "members", "anomalies"])?;
        for q in Quadrant::ALL {
            w.write_record([
                q.to_string(),
                self.members[q.idx()].len().to_string(),
                self.anomalies[q.idx()].to_string(),
            ])?;
        }
        w.write_record(["total".to_string(), self.rows.len().to_string(), self.total.to_string()])?;
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// Columns: name, index, abundance, income_class, quadrant, is_anomaly, boundary_flag.
    pub fn write_country_csv<W: Write>(&self, out: W) -> Result<(), EmpiricsError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "name",
            "index",
            "abundance",
            "income_class",
            "quadrant",
            "is_anomaly",
            "boundary_flag",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.name.clone(),
                fmt_num(r.index_value),
                fmt_num(r.abundance_share),
                r.income_class.to_string(),
                r.quadrant.to_string(),
                r.is_anomaly.to_string(),
                r.boundary.to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// High-index countries are expected to be out of low income and low-index
/// countries in it. A record contradicting that is an anomaly.
pub fn anomaly_table(records: &[CountryRecord], t: &Thresholds) -> Result<AnomalyTable, EmpiricsError> {
    let mut anomalies = [0; 4];
    let mut members: [Vec<String>; 4] = Default::default();
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        let income_class = r
            .income_class
            .or_else(|| r.gni_per_capita.map(|g| t.income_class(g)))
            .ok_or_else(|| EmpiricsError::MissingIncome(r.name.clone()))?;
        let quadrant = classify_quadrant(r, t);
        let expected = if quadrant.high_index() {
            IncomeClass::NonLow
        } else {
            IncomeClass::Low
        };
        let is_anomaly = income_class != expected;
        if is_anomaly {
            anomalies[quadrant.idx()] += 1;
        }
        members[quadrant.idx()].push(r.name.clone());
        rows.push(CountryRow {
            name: r.name.clone(),
            index_value: r.index_value,
            abundance_share: r.abundance_share,
            income_class,
            quadrant,
            is_anomaly,
            boundary: on_boundary(r, t),
        });
    }
    Ok(AnomalyTable {
        total: anomalies.iter().sum(),
        anomalies,
        members,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(name: &str, index: f64, abundance: f64, class: Option<IncomeClass>) -> CountryRecord {
        CountryRecord {
            name: name.into(),
            index_value: index,
            abundance_share: abundance,
            gni_per_capita: None,
            income_class: class,
        }
    }

    fn load(text: &str) -> LoadedCountries {
        load_from_reader(text.as_bytes(), &ColumnMapping::default(), &Thresholds::default(), b',').unwrap()
    }

    #[test]
    fn quadrant_examples() {
        let t = Thresholds::default();
        assert_eq!(t.index_high_cutoff, 3.5);
        assert_eq!(classify_quadrant(&rec("a", 4.0, 55.0, None), &t), Quadrant::I);
        assert_eq!(classify_quadrant(&rec("b", 2.0, 10.0, None), &t), Quadrant::III);
        let tie = rec("c", 3.5, 10.0, None);
        assert_eq!(classify_quadrant(&tie, &t), Quadrant::II);
        assert!(on_boundary(&tie, &t));
        assert_eq!(Thresholds::for_scale(IndexScale::PERCENT).index_high_cutoff, 50.0);
    }

    #[test]
    fn loads_well_formed_rows() {
        let got = load("country,index,abundance,gni\nA,4,50,2000\nB,2,10,500\nC,3,45,1025\n");
        assert_eq!(got.records.len(), 3);
        assert!(got.diagnostics.is_empty());
        assert_eq!(got.records[0].income_class, Some(IncomeClass::NonLow));
        assert_eq!(got.records[2].income_class, Some(IncomeClass::Low));
    }

    #[test]
    fn explicit_class_wins() {
        let got = load("country,index,abundance,gni,income_class\nA,4,50,200,NonLow\n");
        assert_eq!(got.records[0].income_class, Some(IncomeClass::NonLow));
    }

    #[test]
    fn range_violation_is_reported() {
        let got = load("country,index,abundance\nA,4,50\nB,4,155\nC,9,10\n");
        assert_eq!(got.records.len(), 1);
        assert_eq!(got.diagnostics.len(), 2);
        assert_eq!(got.diagnostics[0].kind, DiagnosticKind::RangeViolation);
        assert_eq!(got.diagnostics[0].line, 3);
        assert_eq!(got.diagnostics[0].country.as_deref(), Some("B"));
    }

    #[test]
    fn bad_numbers_and_short_rows() {
        let got = load("country,index,abundance\nA,x,50\nB,4\n");
        assert!(got.records.is_empty());
        assert_eq!(got.diagnostics.len(), 2);
        assert!(got.diagnostics.iter().all(|d| d.kind == DiagnosticKind::ParseError));
    }

    #[test]
    fn missing_column_is_schema_mismatch() {
        let err = load_from_reader(
            "country,idx,abundance\n".as_bytes(),
            &ColumnMapping::default(),
            &Thresholds::default(),
            b',',
        )
        .unwrap_err();
        assert_eq!(err.name(), "SchemaMismatch");
    }

    #[test]
    fn tab_files_are_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        std::fs::write(&path, "country\tindex\tabundance\tincome_class\nA\t4\t50\tLow\n").unwrap();
        let got = load_countries(&path, &ColumnMapping::default(), &Thresholds::default(), None).unwrap();
        assert_eq!(got.records.len(), 1);
        let missing = load_countries(
            &dir.path().join("nope.csv"),
            &ColumnMapping::default(),
            &Thresholds::default(),
            None,
        );
        assert_eq!(missing.unwrap_err().name(), "FileUnreadable");
    }

    #[test]
    fn anomalies_by_quadrant() {
        let t = Thresholds::default();
        let records = vec![
            rec("a", 4.0, 50.0, Some(IncomeClass::Low)),
            rec("b", 4.0, 10.0, Some(IncomeClass::NonLow)),
            rec("c", 2.0, 10.0, Some(IncomeClass::NonLow)),
            rec("d", 2.0, 50.0, Some(IncomeClass::Low)),
        ];
        let table = anomaly_table(&records, &t).unwrap();
        assert_eq!(table.anomalies, [1, 0, 1, 0]);
        assert_eq!(table.total, 2);
        let empty = anomaly_table(&[], &t).unwrap();
        assert_eq!((empty.anomalies, empty.total), ([0; 4], 0));
        let err = anomaly_table(&[rec("x", 4.0, 1.0, None)], &t).unwrap_err();
        assert_eq!(err.name(), "MissingIncome");
    }

    #[test]
    fn outputs_have_headers() {
        let t = Thresholds::default();
        let table = anomaly_table(&[rec("a", 4.0, 50.0, Some(IncomeClass::Low))], &t).unwrap();
        let mut q = Vec::new();
        table.write_quadrant_csv(&mut q).unwrap();
        let q = String::from_utf8(q).unwrap();
        assert!(q.starts_with("quadrant,members,anomalies\nI,1,1\n"));
        let mut c = Vec::new();
        table.write_country_csv(&mut c).unwrap();
        assert!(String::from_utf8(c).unwrap().starts_with(
            "name,index,abundance,income_class,quadrant,is_anomaly,boundary_flag\na,4,50,Low,I,true,false"
        ));
        assert!(table.to_text().contains("total"));
    }

    fn arb_record() -> impl Strategy<Value = CountryRecord> {
        (1.0f64..=6.0, 0.0f64..=100.0, any::<bool>()).prop_map(|(i, a, low)| {
            rec(
                "x",
                i,
                a,
                Some(if low { IncomeClass::Low } else { IncomeClass::NonLow }),
            )
        })
    }

    proptest! {
        #[test]
        fn raising_abundance_cutoff_never_adds_abundance(r in arb_record(), c1 in 0.0f64..=100.0, c2 in 0.0f64..=100.0) {
            let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
            let mut t = Thresholds::default();
            t.abundance_cutoff = lo;
            let before = classify_quadrant(&r, &t);
            t.abundance_cutoff = hi;
            let after = classify_quadrant(&r, &t);
            if matches!(before, Quadrant::II | Quadrant::III) {
                prop_assert!(matches!(after, Quadrant::II | Quadrant::III));
            }
        }

        #[test]
        fn anomalies_ignore_order(mut rs in proptest::collection::vec(arb_record(), 0..40), seed in any::<u64>()) {
            let t = Thresholds::default();
            let a = anomaly_table(&rs, &t).unwrap();
            let n = rs.len();
            if n > 1 {
                rs.rotate_left((seed % n as u64) as usize);
                rs.reverse();
            }
            let b = anomaly_table(&rs, &t).unwrap();
            prop_assert_eq!(a.anomalies, b.anomalies);
            prop_assert_eq!(a.total, a.anomalies.iter().sum::<usize>());
            prop_assert_eq!(a.members.iter().map(Vec::len).sum::<usize>(), n);
        }
    }
}
