use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::TestFunction;

/// One sampled parameter tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<TestFunction>,
    pub coords: BTreeMap<String, f64>,
}

impl ParamPoint {
    pub fn empty() -> Self {
        Self {
            function: None,
            coords: BTreeMap::new(),
        }
    }

    pub fn with(mut self, axis: &str, value: f64) -> Self {
        self.coords.insert(axis.to_string(), value);
        self
    }

    pub fn with_function(mut self, f: TestFunction) -> Self {
        self.function = Some(f);
        self
    }

    pub fn get(&self, axis: &str) -> Option<f64> {
        self.coords.get(axis).copied()
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(func) = &self.function {
            parts.push(format!("fn={func}"));
        }
        for (k, v) in &self.coords {
            parts.push(format!("{k}={v}"));
        }
        if parts.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Named real axes plus an optional list of test functions.
///
/// Points are the Cartesian product, function outermost, then axes in
/// declaration order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub functions: Vec<TestFunction>,
    pub axes: Vec<(String, Vec<f64>)>,
}

impl ParamGrid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn axis(mut self, name: &str, values: &[f64]) -> Self {
        self.axes.push((name.to_string(), values.to_vec()));
        self
    }

    pub fn functions(mut self, fs: Vec<TestFunction>) -> Self {
        self.functions = fs;
        self
    }

    pub fn has_axis(&self, name: &str) -> bool {
        self.axes.iter().any(|(n, _)| n == name)
    }

    pub fn points(&self) -> Vec<ParamPoint> {
        let mut out = Vec::new();
        let funcs: Vec<Option<TestFunction>> = if self.functions.is_empty() {
            vec![None]
        } else {
            self.functions.iter().copied().map(Some).collect()
        };
        for func in funcs {
            let mut partial = vec![ParamPoint {
                function: func,
                coords: BTreeMap::new(),
            }];
            for (name, values) in &self.axes {
                partial = partial
                    .into_iter()
                    .flat_map(|p| values.iter().map(move |&v| p.clone().with(name, v)))
                    .collect();
            }
            out.extend(partial);
        }
        out
    }

    /// Replace axes (and the function list) named in `o`; axes absent from
    /// this grid are ignored.
    pub fn overridden(&self, o: &GridOverrides) -> Self {
        let mut g = self.clone();
        for (name, values) in g.axes.iter_mut() {
            if let Some(v) = o.axes.get(name) {
                *values = v.clone();
            }
        }
        if let (Some(fs), false) = (&o.functions, g.functions.is_empty()) {
            g.functions = fs.clone();
        }
        g
    }
}

/// User-supplied replacements for grid axes, keyed by axis name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridOverrides {
    pub axes: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<TestFunction>>,
}

impl GridOverrides {
    pub fn is_empty(&self) -> bool {
        self.axes.is_empty() && self.functions.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_order_is_function_then_axes() {
        let g = ParamGrid::new()
            .functions(vec![TestFunction::ExpNeg, TestFunction::Cosine])
            .axis("x", &[1.0, 2.0])
            .axis("a", &[3.0]);
        let pts = g.points();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0].function, Some(TestFunction::ExpNeg));
        assert_eq!(pts[1].get("x"), Some(2.0));
        assert_eq!(pts[2].function, Some(TestFunction::Cosine));
        assert_eq!(pts[3].get("a"), Some(3.0));
    }

    #[test]
    fn empty_grid_is_a_single_point() {
        assert_eq!(ParamGrid::new().points(), vec![ParamPoint::empty()]);
    }

    #[test]
    fn overrides_only_touch_known_axes() {
        let g = ParamGrid::new().axis("x", &[1.0]);
        let mut o = GridOverrides::default();
        o.axes.insert("x".into(), vec![5.0, 6.0]);
        o.axes.insert("v".into(), vec![0.5]);
        o.functions = Some(vec![TestFunction::Cosine]);
        let h = g.overridden(&o);
        assert_eq!(h.points().len(), 2);
        assert!(h.functions.is_empty());
    }
}
