use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::milnor::BiDegree;

pub const CHART_FORMAT_VERSION: u32 = 1;

/// Position of a class in an Adams chart. Ordered by `(stem, s, weight)`,
/// the canonical order of every chart output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChartKey {
    pub stem: i32,
    pub s: i32,
    pub weight: i32,
}

impl ChartKey {
    pub fn new(s: i32, stem: i32, weight: i32) -> Self {
        ChartKey { stem, s, weight }
    }
}

impl fmt::Display for ChartKey {
    /// `(s, stem, weight)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.stem, self.weight)
    }
}

/// Trigraded class multiplicities: the dimensions of
/// `Ext^{s,(t,w)}` displayed at `stem = t − s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtChart {
    pub module: String,
    pub max_stem: i32,
    pub max_filt: Option<i32>,
    /// Set when a resource bound stopped the computation early.
    pub partial: bool,
    classes: BTreeMap<ChartKey, u32>,
}

impl ExtChart {
    pub fn new(module: impl Into<String>, max_stem: i32) -> Self {
        ExtChart {
            module: module.into(),
            max_stem,
            max_filt: None,
            partial: false,
            classes: BTreeMap::new(),
        }
    }

    pub fn with_max_filt(mut self, max_filt: i32) -> Self {
        self.max_filt = Some(max_filt);
        self
    }

    /// Adds `mult` classes at `(s, stem, weight)`.
    pub fn add(&mut self, s: i32, stem: i32, weight: i32, mult: u32) {
        if mult > 0 {
            *self
                .classes
                .entry(ChartKey::new(s, stem, weight))
                .or_insert(0) += mult;
        }
    }

    pub fn mult(&self, s: i32, stem: i32, weight: i32) -> u32 {
        self.classes
            .get(&ChartKey::new(s, stem, weight))
            .copied()
            .unwrap_or(0)
    }

    pub fn classes(&self) -> impl Iterator<Item = (ChartKey, u32)> + '_ {
        self.classes.iter().map(|(k, m)| (*k, *m))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn total_mult(&self) -> u64 {
        self.classes.values().map(|&m| m as u64).sum()
    }

    /// The sub-chart with `stem ≤ max_stem` and, if given, `s ≤ max_filt`.
    pub fn restricted(&self, max_stem: i32, max_filt: Option<i32>) -> ExtChart {
        let mut out = self.clone();
        out.max_stem = max_stem.min(self.max_stem);
        if let Some(f) = max_filt {
            out.max_filt = Some(self.max_filt.map_or(f, |g| g.min(f)));
        }
        out.classes
            .retain(|k, _| k.stem <= max_stem && max_filt.is_none_or(|f| k.s <= f));
        out
    }

    pub fn to_json(&self) -> String {
        let file = ChartFile {
            format_version: CHART_FORMAT_VERSION,
            module: &self.module,
            max_stem: self.max_stem,
            max_filt: self.max_filt,
            partial: self.partial,
            classes: self
                .classes
                .iter()
                .map(|(k, &mult)| ClassEntry {
                    s: k.s,
                    stem: k.stem,
                    weight: k.weight,
                    mult,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("chart serialization");
        s.push('\n');
        s
    }

    /// Parses a chart file, checking every field and the canonical order.
    pub fn from_json(text: &str) -> Result<ExtChart> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Format {
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        let obj = v
            .as_object()
            .ok_or_else(|| fmt_err("<document>", "expected an object"))?;
        for key in obj.keys() {
            if !matches!(
                key.as_str(),
                "format_version" | "module" | "max_stem" | "max_filt" | "partial" | "classes"
            ) {
                return Err(fmt_err(key, "unknown field"));
            }
        }
        let version = int_field(&v, "format_version", "format_version")?;
        if version != CHART_FORMAT_VERSION as i64 {
            return Err(fmt_err(
                "format_version",
                &format!("unsupported version {version}"),
            ));
        }
        let module = v
            .get("module")
            .ok_or_else(|| fmt_err("module", "missing"))?
            .as_str()
            .ok_or_else(|| fmt_err("module", "expected a string"))?;
        let max_stem = to_i32(int_field(&v, "max_stem", "max_stem")?, "max_stem")?;
        let mut chart = ExtChart::new(module, max_stem);
        if let Some(f) = v.get("max_filt") {
            if !f.is_null() {
                chart.max_filt = Some(to_i32(
                    f.as_i64()
                        .ok_or_else(|| fmt_err("max_filt", "expected an integer"))?,
                    "max_filt",
                )?);
            }
        }
        if let Some(p) = v.get("partial") {
            chart.partial = p
                .as_bool()
                .ok_or_else(|| fmt_err("partial", "expected a boolean"))?;
        }
        let classes = v
            .get("classes")
            .ok_or_else(|| fmt_err("classes", "missing"))?
            .as_array()
            .ok_or_else(|| fmt_err("classes", "expected an array"))?;
        let mut prev: Option<ChartKey> = None;
        for (i, c) in classes.iter().enumerate() {
            let name = |f: &str| format!("classes[{i}].{f}");
            if !c.is_object() {
                return Err(fmt_err(&format!("classes[{i}]"), "expected an object"));
            }
            let s = to_i32(int_field(c, "s", &name("s"))?, &name("s"))?;
            let stem = to_i32(int_field(c, "stem", &name("stem"))?, &name("stem"))?;
            let weight = to_i32(int_field(c, "weight", &name("weight"))?, &name("weight"))?;
            let mult = int_field(c, "mult", &name("mult"))?;
            if mult < 1 || mult > u32::MAX as i64 {
                return Err(fmt_err(
                    &name("mult"),
                    "multiplicity must be a positive integer",
                ));
            }
            if stem.abs() > max_stem {
                return Err(fmt_err(&name("stem"), "stem outside max_stem"));
            }
            let key = ChartKey::new(s, stem, weight);
            if prev.is_some_and(|p| p >= key) {
                return Err(fmt_err(
                    &format!("classes[{i}]"),
                    "classes must be sorted by (stem, s, weight) without repeats",
                ));
            }
            prev = Some(key);
            chart.classes.insert(key, mult as u32);
        }
        Ok(chart)
    }

    /// One tab-separated line `s stem weight mult` per class, canonical order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, m) in &self.classes {
            out += &format!("{}\t{}\t{}\t{}\n", k.s, k.stem, k.weight, m);
        }
        out
    }
}

#[derive(Serialize)]
struct ChartFile<'a> {
    format_version: u32,
    module: &'a str,
    max_stem: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_filt: Option<i32>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    partial: bool,
    classes: Vec<ClassEntry>,
}

#[derive(Serialize)]
struct ClassEntry {
    s: i32,
    stem: i32,
    weight: i32,
    mult: u32,
}

fn fmt_err(field: &str, message: &str) -> Error {
    Error::Format {
        field: field.to_string(),
        message: message.to_string(),
    }
}

fn int_field(v: &Value, key: &str, name: &str) -> Result<i64> {
    v.get(key)
        .ok_or_else(|| fmt_err(name, "missing"))?
        .as_i64()
        .ok_or_else(|| fmt_err(name, "expected an integer"))
}

fn to_i32(x: i64, name: &str) -> Result<i32> {
    i32::try_from(x).map_err(|_| fmt_err(name, "integer out of range"))
}

/// One position where two charts disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartMismatch {
    pub s: i32,
    pub stem: i32,
    pub weight: i32,
    pub left: u32,
    pub right: u32,
}

/// Positions (sorted canonically) where two charts differ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChartDiff {
    pub mismatches: Vec<ChartMismatch>,
}

impl ChartDiff {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first(&self) -> Option<&ChartMismatch> {
        self.mismatches.first()
    }
}

/// Compares multiplicities at every position with `stem ≤ max_stem`.
pub fn compare_charts(a: &ExtChart, b: &ExtChart, max_stem: i32) -> ChartDiff {
    let mut keys: Vec<ChartKey> = a
        .classes
        .keys()
        .chain(b.classes.keys())
        .filter(|k| k.stem <= max_stem)
        .copied()
        .collect();
    keys.sort();
    keys.dedup();
    let mismatches = keys
        .into_iter()
        .filter_map(|k| {
            let left = a.classes.get(&k).copied().unwrap_or(0);
            let right = b.classes.get(&k).copied().unwrap_or(0);
            (left != right).then_some(ChartMismatch {
                s: k.s,
                stem: k.stem,
                weight: k.weight,
                left,
                right,
            })
        })
        .collect();
    ChartDiff { mismatches }
}

/// Chart of the polynomial algebra on generators of filtration 1 in the
/// given `(stem, weight)` bidegrees, one class per monomial.
pub fn polynomial_chart(module: &str, gens: &[BiDegree], max_stem: i32) -> Result<ExtChart> {
    if let Some(g) = gens.iter().find(|g| g.stem < 1) {
        return Err(Error::Contract(format!(
            "polynomial generator {g} must have positive stem"
        )));
    }
    let mut chart = ExtChart::new(module, max_stem);
    fn rec(k: usize, gens: &[BiDegree], s: i32, d: BiDegree, max: i32, chart: &mut ExtChart) {
        if k == gens.len() {
            chart.add(s, d.stem, d.weight, 1);
            return;
        }
        let mut e = 0;
        loop {
            let dd = d + e * gens[k];
            if dd.stem > max {
                break;
            }
            rec(k + 1, gens, s + e, dd, max, chart);
            e += 1;
        }
    }
    rec(0, gens, 0, BiDegree::ZERO, max_stem, &mut chart);
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::w_degree;

    #[test]
    fn polynomial_examples() {
        let c = polynomial_chart("w0", &[w_degree(0)], 3).unwrap();
        let keys: Vec<String> = c.classes().map(|(k, _)| k.to_string()).collect();
        assert_eq!(keys, ["(0,0,0)", "(1,1,1)", "(2,2,2)", "(3,3,3)"]);
        let c = polynomial_chart("w01", &[w_degree(0), w_degree(1)], 6).unwrap();
        assert_eq!(c.mult(2, 6, 4), 1);
        let c = polynomial_chart("w012", &[w_degree(0), w_degree(1), w_degree(2)], 20).unwrap();
        assert_eq!(c.mult(1, 13, 7), 1);
        assert!(c
            .classes()
            .all(|(k, _)| k.stem >= 13 || k.s == 0 || !(k.stem == 12 && k.s == 1)));
        assert!(polynomial_chart("bad", &[BiDegree::new(0, 0)], 3).is_err());
    }

    #[test]
    fn compare_examples() {
        let a = polynomial_chart("a", &[w_degree(0)], 10).unwrap();
        assert!(compare_charts(&a, &a, 10).is_empty());
        let b = polynomial_chart("b", &[w_degree(1)], 10).unwrap();
        let d = compare_charts(&a, &b, 10);
        let m = d.first().unwrap();
        assert_eq!((m.s, m.stem, m.weight), (1, 1, 1));
    }

    #[test]
    fn json_round_trip() {
        let mut c = polynomial_chart("kw:0", &[w_degree(0), w_degree(1)], 8).unwrap();
        c.max_filt = Some(8);
        let text = c.to_json();
        let back = ExtChart::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
        let empty = ExtChart::new("empty", 0);
        assert_eq!(ExtChart::from_json(&empty.to_json()).unwrap(), empty);
    }

    #[test]
    fn json_errors_name_field() {
        let bad = r#"{"format_version":1,"module":"m","max_stem":3,"classes":[{"s":0,"stem":0,"weight":0}]}"#;
        match ExtChart::from_json(bad) {
            Err(Error::Format { field, .. }) => assert_eq!(field, "classes[0].mult"),
            other => panic!("unexpected {other:?}"),
        }
        let unsorted = r#"{"format_version":1,"module":"m","max_stem":3,"classes":[
            {"s":1,"stem":1,"weight":1,"mult":1},{"s":0,"stem":0,"weight":0,"mult":1}]}"#;
        assert!(
            matches!(ExtChart::from_json(unsorted), Err(Error::Format { field, .. }) if field == "classes[1]")
        );
        assert!(matches!(
            ExtChart::from_json("[]"),
            Err(Error::Format { .. })
        ));
    }
}
