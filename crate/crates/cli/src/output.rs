use std::fmt::Write as _;

use valsym::engine::Cause;
use valsym::{Constraint, PugetEncoding, Value, Var};

/// Names variables `X1..` and, for an encoding, its duals `Z1..`.
pub struct Names<'a> {
    pub encoding: Option<&'a PugetEncoding>,
}

impl Names<'_> {
    pub fn var(&self, v: Var) -> String {
        match self.encoding {
            Some(enc) if enc.is_dual(v) => format!("Z{}", v - enc.dual_var(1) + 1),
            _ => format!("X{}", v + 1),
        }
    }
}

pub fn cause(c: Cause, constraints: &[Constraint]) -> String {
    match c {
        Cause::Constraint(i) => format!("#{} {}", i + 1, constraints[i].kind()),
        Cause::Singleton => "singleton".into(),
        Cause::Oracle => "oracle".into(),
    }
}

pub fn value_set(values: impl IntoIterator<Item = Value>) -> String {
    let items: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                write!(line, "{cell:<w$}  ", w = widths[c]).unwrap();
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
