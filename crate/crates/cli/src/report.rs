//! Run reports, printed as an aligned table or a single JSON line.

use serde_json::{Map, Value};

/// Rounds to three significant digits.
pub fn sig3(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(2 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

/// Outcome of one construction command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    /// Parameters echoed back, in display order.
    pub params: Vec<(String, Value)>,
    /// Name of the preprocessing timer: `T_g` (graph) or `T_nn` (neighbors).
    pub preprocessing: &'static str,
    pub t_pre: f64,
    pub t_build: f64,
    pub edges: Option<usize>,
    pub faces_per_dimension: Vec<usize>,
    /// Command-specific fields appended after the standard ones.
    pub extra: Vec<(String, Value)>,
}

impl RunReport {
    pub fn faces(&self) -> usize {
        self.faces_per_dimension.iter().sum()
    }

    pub fn t_total(&self) -> f64 {
        self.t_pre + self.t_build
    }

    /// Every reported field in output order; both renderings use this.
    pub fn fields(&self) -> Vec<(String, Value)> {
        let mut out = vec![("command".to_string(), Value::from(self.command.clone()))];
        out.extend(self.params.iter().cloned());
        let faces = self.faces();
        let total = sig3(self.t_total());
        out.push((
            self.preprocessing.to_string(),
            Value::from(sig3(self.t_pre)),
        ));
        out.push(("T_build".into(), Value::from(sig3(self.t_build))));
        out.push(("T_total".into(), Value::from(total)));
        if let Some(e) = self.edges {
            out.push(("edges".into(), Value::from(e)));
        }
        out.push(("faces".into(), Value::from(faces)));
        out.push((
            "faces_per_dimension".into(),
            Value::from(self.faces_per_dimension.clone()),
        ));
        let per_face = if faces == 0 {
            0.0
        } else {
            sig3(self.t_total() / faces as f64)
        };
        out.push(("T_total_per_face".into(), Value::from(per_face)));
        out.extend(self.extra.iter().cloned());
        out
    }

    pub fn to_table(&self) -> String {
        let fields = self.fields();
        let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut s = String::new();
        for (k, v) in fields {
            let shown = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            s.push_str(&format!("{k:<width$}  {shown}\n"));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self.fields().into_iter().collect();
        Value::Object(map).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport {
            command: "rips".into(),
            params: vec![
                ("r".into(), Value::from(0.5)),
                ("dim".into(), Value::from(2)),
            ],
            preprocessing: "T_g",
            t_pre: 0.0012345,
            t_build: 0.5,
            edges: Some(3),
            faces_per_dimension: vec![3, 3, 1],
            extra: Vec::new(),
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(sig3(0.0012345), 0.00123);
        assert_eq!(sig3(123456.0), 123000.0);
        assert_eq!(sig3(0.0), 0.0);
    }

    #[test]
    fn table_and_json_agree() {
        let r = sample();
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        let table = r.to_table();
        for (k, v) in r.fields() {
            assert_eq!(json[&k], v);
            let line = table
                .lines()
                .find(|l| l.split_whitespace().next() == Some(&k))
                .unwrap();
            let shown = line[k.len()..].trim();
            match v {
                Value::String(s) => assert_eq!(shown, s),
                other => assert_eq!(shown, other.to_string()),
            }
        }
        assert_eq!(json["faces"], 7);
        assert!(json["T_total"].as_f64().unwrap() >= json["T_build"].as_f64().unwrap());
    }
}
