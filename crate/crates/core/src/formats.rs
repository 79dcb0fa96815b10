//! The nine text layouts used to show a series to a solver, and their parsers.
//!
//! Values are printed with at most two decimals and no trailing zeros
//! (`100`, `100.5`, `-0.25`). Missing observations render as an empty value
//! field (`null` in the JSON layout, `[]` in the contextual layout).

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{offset_date, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireFormat {
    Csv,
    Plain,
    Tsv,
    Custom,
    Contextual,
    Json,
    Markdown,
    Spaces,
    Symbol,
}

impl WireFormat {
    pub const ALL: [WireFormat; 9] = [
        WireFormat::Csv,
        WireFormat::Plain,
        WireFormat::Tsv,
        WireFormat::Custom,
        WireFormat::Contextual,
        WireFormat::Json,
        WireFormat::Markdown,
        WireFormat::Spaces,
        WireFormat::Symbol,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WireFormat::Csv => "csv",
            WireFormat::Plain => "plain",
            WireFormat::Tsv => "tsv",
            WireFormat::Custom => "custom",
            WireFormat::Contextual => "contextual",
            WireFormat::Json => "json",
            WireFormat::Markdown => "markdown",
            WireFormat::Spaces => "spaces",
            WireFormat::Symbol => "symbol",
        }
    }

    fn header(self) -> Option<&'static str> {
        match self {
            WireFormat::Csv | WireFormat::Contextual | WireFormat::Spaces => Some("Date,Value"),
            WireFormat::Tsv => Some("Date\tValue"),
            WireFormat::Custom => Some("Date|Value"),
            WireFormat::Markdown => Some("|Date|Value|"),
            WireFormat::Symbol => Some("Date,Value,DirectionIndicator"),
            WireFormat::Plain | WireFormat::Json => None,
        }
    }
}

impl fmt::Display for WireFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WireFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WireFormat::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown format `{s}`")))
    }
}

const MARKDOWN_RULE: &str = "|---|---|";
const UP: char = '\u{2191}';
const DOWN: char = '\u{2193}';
const FLAT: char = '\u{2192}';

/// Render a value with at most two decimals and no trailing zeros.
pub fn format_value(x: f64) -> String {
    let mut s = format!("{x:.2}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// The value a reader of the rendered text sees.
pub fn rendered(x: f64) -> f64 {
    format_value(x).parse().expect("formatted value parses")
}

fn arrow(prev: Option<f64>, cur: Option<f64>) -> char {
    match (prev.map(rendered), cur.map(rendered)) {
        (Some(p), Some(c)) if c > p => UP,
        (Some(p), Some(c)) if c < p => DOWN,
        _ => FLAT,
    }
}

fn spaced(s: &str) -> String {
    let mut out = String::with_capacity(s.len() * 2);
    for (i, ch) in s.chars().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push(ch);
    }
    out
}

/// Render the primary channel of `series`.
pub fn render(series: &TimeSeries, fmt: WireFormat) -> String {
    render_values(series.start_date, &series.values, fmt)
}

pub fn render_values(start: NaiveDate, values: &[Option<f64>], fmt: WireFormat) -> String {
    let mut out = String::new();
    if let Some(h) = fmt.header() {
        out.push_str(h);
        out.push('\n');
    }
    if fmt == WireFormat::Markdown {
        out.push_str(MARKDOWN_RULE);
        out.push('\n');
    }
    let mut prev = None;
    for (i, v) in values.iter().enumerate() {
        let date = offset_date(start, i);
        let val = v.map(format_value).unwrap_or_default();
        let row = match fmt {
            WireFormat::Csv => format!("{date},{val}"),
            WireFormat::Tsv => format!("{date}\t{val}"),
            WireFormat::Custom => format!("{date}|{val}"),
            WireFormat::Plain => format!("Date: {date}, Value: {val}"),
            WireFormat::Contextual => format!("{date},[{val}]"),
            WireFormat::Json => {
                let val = if v.is_some() { val } else { "null".into() };
                format!("{{\"Date\":\"{date}\",\"Value\":{val}}}")
            }
            WireFormat::Markdown => format!("|{date}|{val}|"),
            WireFormat::Spaces => format!("{date},{}", spaced(&val)),
            WireFormat::Symbol => {
                let a = if i == 0 { FLAT } else { arrow(prev, *v) };
                format!("{date},{val},{a}")
            }
        };
        if fmt == WireFormat::Plain && i > 0 {
            out.push('\n');
        }
        out.push_str(&row);
        if fmt != WireFormat::Plain {
            out.push('\n');
        }
        prev = *v;
    }
    out
}

/// Strict `YYYY-MM-DD`.
pub fn parse_iso_date(s: &str) -> Option<NaiveDate> {
    let b = s.as_bytes();
    let shape_ok = b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b
            .iter()
            .enumerate()
            .all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit());
    if !shape_ok {
        return None;
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

fn parse_number(field: &str, line: usize) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid value `{field}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value `{field}`")));
    }
    Ok(Some(v))
}

fn split2(row: &str, sep: char, line: usize) -> Result<(&str, &str)> {
    let mut it = row.splitn(2, sep);
    match (it.next(), it.next()) {
        (Some(d), Some(v)) if !v.contains(sep) => Ok((d, v)),
        _ => Err(Error::parse(line, format!("malformed row `{row}`"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    #[serde(rename = "Date")]
    date: String,
    #[serde(rename = "Value")]
    value: Option<f64>,
}

fn parse_row(fmt: WireFormat, row: &str, line: usize) -> Result<(String, Option<f64>, Option<char>)> {
    let (date, val, arrow) = match fmt {
        WireFormat::Csv => {
            let (d, v) = split2(row, ',', line)?;
            (d, parse_number(v, line)?, None)
        }
        WireFormat::Tsv => {
            let (d, v) = split2(row, '\t', line)?;
            (d, parse_number(v, line)?, None)
        }
        WireFormat::Custom => {
            let (d, v) = split2(row, '|', line)?;
            (d, parse_number(v, line)?, None)
        }
        WireFormat::Plain => {
            let rest = row
                .strip_prefix("Date: ")
                .ok_or_else(|| Error::parse(line, "expected `Date: `"))?;
            let (d, v) = rest
                .split_once(", Value: ")
                .ok_or_else(|| Error::parse(line, "expected `, Value: `"))?;
            (d, parse_number(v, line)?, None)
        }
        WireFormat::Contextual => {
            let (d, v) = split2(row, ',', line)?;
            let inner = v
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| Error::parse(line, "value must be bracketed"))?;
            (d, parse_number(inner, line)?, None)
        }
        WireFormat::Json => {
            let r: JsonRow = serde_json::from_str(row)
                .map_err(|e| Error::parse(line, format!("invalid JSON row: {e}")))?;
            if r.value.is_some_and(|v| !v.is_finite()) {
                return Err(Error::parse(line, "non-finite value"));
            }
            return Ok((r.date, r.value, None));
        }
        WireFormat::Markdown => {
            let inner = row
                .strip_prefix('|')
                .and_then(|r| r.strip_suffix('|'))
                .ok_or_else(|| Error::parse(line, "table row must start and end with `|`"))?;
            let (d, v) = split2(inner, '|', line)?;
            (d, parse_number(v, line)?, None)
        }
        WireFormat::Spaces => {
            let (d, v) = split2(row, ',', line)?;
            let compact: String = v.chars().filter(|c| *c != ' ').collect();
            if spaced(&compact) != v {
                return Err(Error::parse(line, format!("value `{v}` is not digit-spaced")));
            }
            (d, parse_number(&compact, line)?, None)
        }
        WireFormat::Symbol => {
            let mut it = row.split(',');
            let (d, v, a) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(d), Some(v), Some(a), None) => (d, v, a),
                _ => return Err(Error::parse(line, format!("malformed row `{row}`"))),
            };
            let mut chars = a.chars();
            let arrow = match (chars.next(), chars.next()) {
                (Some(c @ (UP | DOWN | FLAT)), None) => c,
                _ => return Err(Error::parse(line, format!("invalid direction `{a}`"))),
            };
            (d, parse_number(v, line)?, Some(arrow))
        }
    };
    Ok((date.to_string(), val, arrow))
}

/// Parse text produced by [`render`] back into a series.
pub fn parse(text: &str, fmt: WireFormat) -> Result<TimeSeries> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    let mut idx = 0;
    if let Some(h) = fmt.header() {
        if lines.first().copied() != Some(h) {
            return Err(Error::parse(1, format!("expected header `{}`", h.escape_debug())));
        }
        idx = 1;
    }
    if fmt == WireFormat::Markdown {
        if lines.get(1).copied() != Some(MARKDOWN_RULE) {
            return Err(Error::parse(2, format!("expected table rule `{MARKDOWN_RULE}`")));
        }
        idx = 2;
    }
    let mut start: Option<NaiveDate> = None;
    let mut values = Vec::new();
    let mut prev: Option<f64> = None;
    for (k, row) in lines[idx..].iter().enumerate() {
        let line = idx + k + 1;
        let (date, val, arrow_seen) = parse_row(fmt, row, line)?;
        let date = parse_iso_date(&date)
            .ok_or_else(|| Error::parse(line, format!("invalid date `{date}`")))?;
        match start {
            None => start = Some(date),
            Some(s) => {
                if date != offset_date(s, values.len()) {
                    return Err(Error::parse(line, format!("inconsistent date {date}")));
                }
            }
        }
        if let Some(a) = arrow_seen {
            let expected = if values.is_empty() { FLAT } else { arrow(prev, val) };
            if a != expected {
                return Err(Error::parse(line, "direction mismatch"));
            }
        }
        values.push(val);
        prev = val;
    }
    let start = start.ok_or_else(|| Error::parse(idx + 1, "no data rows"))?;
    Ok(TimeSeries::with_gaps(start, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> TimeSeries {
        TimeSeries::new(
            "2020-01-01".parse().unwrap(),
            vec![100.0, 105.0, 103.0, 103.0],
        )
    }

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(100.0), "100");
        assert_eq!(format_value(100.5), "100.5");
        assert_eq!(format_value(-0.25), "-0.25");
        assert_eq!(format_value(-0.001), "0");
        assert_eq!(format_value(1.239), "1.24");
        assert_eq!(format_value(2.0 / 3.0), "0.67");
        assert_eq!(rendered(24.2549), 24.25);
    }

    #[test]
    fn csv_example() {
        assert_eq!(
            render(&example(), WireFormat::Csv),
            "Date,Value\n2020-01-01,100\n2020-01-02,105\n2020-01-03,103\n2020-01-04,103\n"
        );
    }

    #[test]
    fn symbol_rows_end_with_arrows() {
        let text = render(&example(), WireFormat::Symbol);
        let arrows: Vec<char> = text
            .lines()
            .skip(1)
            .map(|l| l.chars().last().unwrap())
            .collect();
        assert_eq!(arrows, vec!['→', '↑', '↓', '→']);
    }

    #[test]
    fn spaces_second_row() {
        let text = render(&example(), WireFormat::Spaces);
        assert_eq!(text.lines().nth(2), Some("2020-01-02,1 0 5"));
    }

    #[test]
    fn json_round_trip() {
        let s = example();
        assert_eq!(parse(&render(&s, WireFormat::Json), WireFormat::Json).unwrap(), s);
    }

    #[test]
    fn markdown_requires_rule() {
        let text = "|Date|Value|\n|2020-01-01|100|\n";
        let err = parse(text, WireFormat::Markdown).unwrap_err();
        assert!(err.to_string().contains("rule"));
    }

    #[test]
    fn symbol_direction_mismatch() {
        let text = "Date,Value,DirectionIndicator\n2020-01-01,100,→\n2020-01-02,105,↓\n";
        let err = parse(text, WireFormat::Symbol).unwrap_err();
        assert!(err.to_string().contains("direction mismatch"), "{err}");
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn malformed_and_inconsistent_rows() {
        let err = parse("Date,Value\n2020-01-01,100\n2020-01-02\n", WireFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse("Date,Value\n2020-01-01,1\n2020-01-03,2\n", WireFormat::Csv).unwrap_err();
        assert!(err.to_string().contains("inconsistent date"));
        assert!(parse("Date,Value\n2020-1-01,1\n", WireFormat::Csv).is_err());
        assert!(parse("Date,Value\n2020-01-01,abc\n", WireFormat::Csv).is_err());
        assert!(parse("Date,Value\n", WireFormat::Csv).is_err());
    }

    #[test]
    fn gaps_render_as_empty_fields() {
        let s = TimeSeries::with_gaps(
            "2020-01-01".parse().unwrap(),
            vec![Some(1.0), None, Some(2.5)],
        );
        assert_eq!(
            render(&s, WireFormat::Csv),
            "Date,Value\n2020-01-01,1\n2020-01-02,\n2020-01-03,2.5\n"
        );
        assert!(render(&s, WireFormat::Json).contains("\"Value\":null"));
        assert!(render(&s, WireFormat::Contextual).contains("2020-01-02,[]"));
        for fmt in WireFormat::ALL {
            assert_eq!(parse(&render(&s, fmt), fmt).unwrap(), s, "{fmt}");
        }
    }

    fn arb_series() -> impl Strategy<Value = TimeSeries> {
        let value = prop_oneof![
            9 => (-100_000i64..100_000).prop_map(|c| Some(c as f64 / 100.0)),
            1 => Just(None),
        ];
        (
            0i64..3000,
            proptest::collection::vec(value, 1..60),
        )
            .prop_map(|(offset, mut values)| {
                if values.iter().all(Option::is_none) {
                    values[0] = Some(1.0);
                }
                let start = NaiveDate::from_ymd_opt(2018, 1, 1).unwrap()
                    + chrono::Duration::days(offset);
                TimeSeries::with_gaps(start, values)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn round_trip_all_formats(s in arb_series()) {
            for fmt in WireFormat::ALL {
                let text = render(&s, fmt);
                prop_assert_eq!(&parse(&text, fmt).unwrap(), &s, "{}", fmt);
            }
        }

        #[test]
        fn render_is_injective(a in arb_series(), b in arb_series()) {
            prop_assume!(a != b);
            for fmt in WireFormat::ALL {
                prop_assert_ne!(render(&a, fmt), render(&b, fmt));
            }
        }
    }
}
