//! Minimal keyword-deck reader: nodes, elements and plain set lists.

use std::collections::BTreeMap;

#[derive(Debug, Default, Clone)]
pub struct Deck {
    /// (label, coordinates) in file order.
    pub nodes: Vec<(i64, [f64; 3])>,
    /// (label, type, node labels) in file order.
    pub elements: Vec<(i64, String, Vec<i64>)>,
    pub node_sets: BTreeMap<String, Vec<i64>>,
    pub element_sets: BTreeMap<String, Vec<i64>>,
    /// Every keyword line, upper-cased, for structural checks.
    pub keywords: Vec<String>,
}

fn param(line: &str, key: &str) -> Option<String> {
    line.split(',').skip(1).find_map(|p| {
        let (k, v) = p.split_once('=')?;
        (k.trim().eq_ignore_ascii_case(key)).then(|| v.trim().to_string())
    })
}

pub fn parse(text: &str) -> Deck {
    let mut deck = Deck::default();
    let mut mode = String::new();
    let mut current = String::new();
    let mut generate = false;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("**") {
            continue;
        }
        if let Some(kw) = line.strip_prefix('*') {
            let upper = kw.to_ascii_uppercase();
            deck.keywords.push(upper.clone());
            mode = upper.split(',').next().unwrap().trim().to_string();
            generate = upper.contains("GENERATE");
            current = match mode.as_str() {
                "ELEMENT" => param(line, "TYPE").unwrap_or_default(),
                "NSET" => param(line, "NSET").unwrap_or_default(),
                "ELSET" => param(line, "ELSET").unwrap_or_default(),
                _ => String::new(),
            };
            continue;
        }
        let vals: Vec<&str> = line.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        match mode.as_str() {
            "NODE" => {
                let c: Vec<f64> = vals[1..].iter().map(|v| v.parse().unwrap()).collect();
                deck.nodes.push((vals[0].parse().unwrap(), [c[0], c[1], c[2]]));
            }
            "ELEMENT" => {
                let ids: Vec<i64> = vals.iter().map(|v| v.parse().unwrap()).collect();
                deck.elements.push((ids[0], current.clone(), ids[1..].to_vec()));
            }
            "NSET" | "ELSET" => {
                let ids: Vec<i64> = vals.iter().map(|v| v.parse().unwrap()).collect();
                let ids = if generate {
                    let step = ids.get(2).copied().unwrap_or(1);
                    (ids[0]..=ids[1]).step_by(step as usize).collect()
                } else {
                    ids
                };
                let target = if mode == "NSET" {
                    &mut deck.node_sets
                } else {
                    &mut deck.element_sets
                };
                target.entry(current.clone()).or_default().extend(ids);
            }
            _ => {}
        }
    }
    deck
}
