//! Response parsers. All of them are total: failures are values.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

static WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z]+").unwrap());
static PAREN_CHOICE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\(([a-d])\)").unwrap());
static BARE_CHOICE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^\W*(?:answer\s*(?:is)?\s*:?\s*)?([a-d])[\s\).:]*$").unwrap());
static NUMBER: &str = r#"['"]?(-?\d[\d,]*(?:\.\d+)?(?:[eE][-+]?\d+)?)['"]?"#;

fn field_block(name: &str) -> Regex {
    Regex::new(&format!(r#"(?is)['"]?{name}[^'":{{]*['"]?\s*:\s*\{{([^}}]*)\}}"#)).unwrap()
}

static MAX_BLOCK: LazyLock<Regex> = LazyLock::new(|| field_block("max_value"));
static MIN_BLOCK: LazyLock<Regex> = LazyLock::new(|| field_block("min_value"));
static ON_DATE_BLOCK: LazyLock<Regex> = LazyLock::new(|| field_block("value_on_date"));
static VALUE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(&format!(r#"(?i)['"]?value['"]?\s*:\s*{NUMBER}"#)).unwrap());
static DATE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"(?i)['"]?date['"]?\s*:\s*['"]?([0-9][0-9/\-]*[0-9])"#).unwrap());

/// First standalone "yes" or "no", case-insensitive.
pub fn parse_yes_no(text: &str) -> Option<bool> {
    WORD.find_iter(text).find_map(|m| match m.as_str().to_ascii_lowercase().as_str() {
        "yes" => Some(true),
        "no" => Some(false),
        _ => None,
    })
}

/// First "(a)" to "(d)"; failing that, a reply that is a single letter.
pub fn parse_choice(text: &str) -> Option<char> {
    let caps = PAREN_CHOICE
        .captures(text)
        .or_else(|| BARE_CHOICE.captures(text.trim()))?;
    caps[1].chars().next().map(|c| c.to_ascii_lowercase())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParsedPoint {
    pub value: Option<f64>,
    /// Kept as written; dates are compared as strict ISO strings.
    pub date: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParsedRetrieval {
    pub max: ParsedPoint,
    pub min: ParsedPoint,
    pub value_on_date: Option<f64>,
}

fn number(s: &str) -> Option<f64> {
    s.replace(',', "").parse().ok()
}

fn point(block: &Regex, text: &str) -> ParsedPoint {
    let Some(inner) = block.captures(text).map(|c| c.get(1).unwrap().as_str()) else {
        return ParsedPoint::default();
    };
    ParsedPoint {
        value: VALUE.captures(inner).and_then(|c| number(&c[1])),
        date: DATE.captures(inner).map(|c| c[1].to_string()),
    }
}

/// Dictionary-like reply with `max_value`, `min_value` and `value_on_date`
/// entries. Each field fails on its own.
pub fn parse_retrieval(text: &str) -> ParsedRetrieval {
    ParsedRetrieval {
        max: point(&MAX_BLOCK, text),
        min: point(&MIN_BLOCK, text),
        value_on_date: point(&ON_DATE_BLOCK, text).value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn yes_no_examples() {
        assert_eq!(parse_yes_no("Yes, there is a clear upward trend."), Some(true));
        assert_eq!(parse_yes_no("no"), Some(false));
        assert_eq!(parse_yes_no("It is ambiguous."), None);
        assert_eq!(parse_yes_no("Answer: 'No'."), Some(false));
        assert_eq!(parse_yes_no("nobody knows"), None);
    }

    #[test]
    fn choice_examples() {
        assert_eq!(parse_choice("The answer is (b)."), Some('b'));
        assert_eq!(parse_choice("a"), Some('a'));
        assert_eq!(parse_choice("either (a) or (b)"), Some('a'));
        assert_eq!(parse_choice("(C)"), Some('c'));
        assert_eq!(parse_choice("There is a trend."), None);
        assert_eq!(parse_choice("(e)"), None);
    }

    #[test]
    fn retrieval_examples() {
        let full = "{'max_value': {'value': 105, 'date': '2020-01-02'}, 'min_value': {'value': 100, 'date': '2020-01-01'}, 'value_on_date 2020-01-03': {'value': 103}}";
        let p = parse_retrieval(full);
        assert_eq!(p.max.value, Some(105.0));
        assert_eq!(p.max.date.as_deref(), Some("2020-01-02"));
        assert_eq!(p.min.value, Some(100.0));
        assert_eq!(p.value_on_date, Some(103.0));

        let missing = r#"{"max_value": {"value": 1,050.5, "date": "2021-3-4"}, "value_on_date": {"value": -2}}"#;
        let p = parse_retrieval(missing);
        assert_eq!(p.max.value, Some(1050.5));
        assert_eq!(p.max.date.as_deref(), Some("2021-3-4"));
        assert_eq!(p.min, ParsedPoint::default());
        assert_eq!(p.value_on_date, Some(-2.0));
    }

    #[test]
    fn thousands_separator_inverts_grouping() {
        for v in [0u64, 7, 999, 1000, 1050, 123_456, 9_876_543] {
            let s = v.to_string();
            let mut grouped = String::new();
            for (i, ch) in s.chars().enumerate() {
                if i > 0 && (s.len() - i) % 3 == 0 {
                    grouped.push(',');
                }
                grouped.push(ch);
            }
            let text = format!("{{'value_on_date x': {{'value': {grouped}}}}}");
            assert_eq!(parse_retrieval(&text).value_on_date, Some(v as f64), "{grouped}");
        }
    }

    proptest! {
        #[test]
        fn parsers_are_total(s in "\\PC*") {
            let _ = parse_yes_no(&s);
            let _ = parse_choice(&s);
            let _ = parse_retrieval(&s);
        }
    }
}
