use serde::{Deserialize, Serialize};

use super::{FriezeError, PatternKind, PatternWindow};
use crate::cartan::parse_cartan;
use crate::semiring::SemiringId;

/// Staggered text layout: row `i` is shifted right by `i` half cells, so each
/// value sits between the two neighbours it is related to.
///
/// With `border` a row of `1`s (frieze) or `0`s (Y-frieze) is drawn above and
/// below, as in the classical type-A presentation.
pub fn render_grid(w: &PatternWindow, border: bool) -> String {
    let texts: Vec<Vec<String>> = w
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| v.render()).collect())
        .collect();
    let widest = texts.iter().flatten().map(String::len).max().unwrap_or(1);
    let cell = (widest + 2).next_multiple_of(2);
    let half = cell / 2;
    let ncols = (w.hi() - w.lo() + 1) as usize;
    let border_val = match w.kind() {
        PatternKind::Frieze => "1",
        PatternKind::YFrieze => "0",
    };
    let line = |indent: usize, vals: &mut dyn Iterator<Item = &str>| -> String {
        let mut s = " ".repeat(indent);
        for v in vals {
            s.push_str(&format!("{v:^cell$}"));
        }
        s.trim_end().to_string()
    };
    let mut out = Vec::new();
    out.push(format!(
        "# {} pattern, {}, {}, columns {}..{}",
        match w.kind() {
            PatternKind::Frieze => "frieze",
            PatternKind::YFrieze => "Y-frieze",
        },
        w.cartan().name(),
        w.semiring(),
        w.lo(),
        w.hi()
    ));
    let r = w.rank();
    if border {
        out.push(line(0, &mut std::iter::repeat_n(border_val, ncols)));
    }
    for (i, row) in texts.iter().enumerate() {
        out.push(line((i + 1) * half, &mut row.iter().map(String::as_str)));
    }
    if border {
        out.push(line((r + 1) * half, &mut std::iter::repeat_n(border_val, ncols)));
    }
    out.join("\n") + "\n"
}

#[derive(Serialize, Deserialize)]
struct WindowJson {
    kind: String,
    cartan: String,
    semiring: String,
    cols: [i64; 2],
    rows: Vec<Vec<String>>,
    period: Option<i64>,
}

pub fn render_json(w: &PatternWindow) -> String {
    let j = WindowJson {
        kind: w.kind().to_string(),
        cartan: w.cartan().name(),
        semiring: w.semiring().short_name(),
        cols: [w.lo(), w.hi()],
        rows: w
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| v.render()).collect())
            .collect(),
        period: w.period(),
    };
    serde_json::to_string_pretty(&j).expect("serializable")
}

/// Parses the JSON produced by [`render_json`].
pub fn window_from_json(s: &str) -> Result<PatternWindow, FriezeError> {
    let j: WindowJson = serde_json::from_str(s).map_err(|e| FriezeError::Parse(e.to_string()))?;
    let kind: PatternKind = j.kind.parse()?;
    let cartan = parse_cartan(&j.cartan)?;
    let semiring: SemiringId = j.semiring.parse()?;
    let rows = j
        .rows
        .iter()
        .map(|r| r.iter().map(|v| semiring.parse_value(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let w = PatternWindow::new(kind, cartan, semiring, j.cols[0], rows, j.period)?;
    if w.hi() != j.cols[1] {
        return Err(FriezeError::Shape(format!(
            "cols [{}, {}] do not match row length",
            j.cols[0], j.cols[1]
        )));
    }
    Ok(w)
}

/// One line per cell: `row,col,value` with 1-based rows.
pub fn render_csv(w: &PatternWindow) -> String {
    let mut out = String::from("row,col,value\n");
    for m in w.lo()..=w.hi() {
        for i in 0..w.rank() {
            let v = w.get(i, m).render();
            let v = if v.contains(',') || v.contains(' ') {
                format!("\"{v}\"")
            } else {
                v
            };
            out.push_str(&format!("{},{m},{v}\n", i + 1));
        }
    }
    out
}
