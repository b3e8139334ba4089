//! Endpoint maps, path pictures and diagonal labels as ascii, json or svg.
//!
//! Rows are drawn with `q = n−1` at the top, so north is up and east is to
//! the right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::board::{Board, Move, Square};
use crate::characterization::{self, EndpointPredicateResult};
use crate::decoder;
use crate::error::{Error, Result};
use crate::walk::Walk;

/// Written into every svg document; the only part of the output that may
/// change between releases without the content changing.
pub const GENERATOR: &str = concat!("projcb ", env!("CARGO_PKG_VERSION"));

pub const INITIAL_GLYPH: char = '•';
pub const TERMINAL_GLYPH: char = '■';
pub const SHADE_GLYPH: char = '▒';
const EMPTY_GLYPH: char = '·';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Init,
    Term,
    Path,
    Diagonals,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Ascii,
    Json,
    Svg,
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, $($name:literal => $variant:expr),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $variant { return f.write_str($name); })+
                unreachable!()
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(Error::Parse(format!(concat!("unknown ", $what, " {:?}"), other))),
                }
            }
        }
    };
}

keyword_enum!(Mode, "mode", "init" => Mode::Init, "term" => Mode::Term, "path" => Mode::Path, "diagonals" => Mode::Diagonals);
keyword_enum!(Format, "format", "ascii" => Format::Ascii, "json" => Format::Json, "svg" => Format::Svg);

/// What to draw.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub mode: Mode,
    pub format: Format,
    pub board: Board,
    pub walk: Option<Walk>,
}

impl RenderSpec {
    pub fn new(mode: Mode, format: Format, board: Board) -> Self {
        RenderSpec {
            mode,
            format,
            board,
            walk: None,
        }
    }

    pub fn with_walk(mut self, walk: Walk) -> Self {
        self.walk = Some(walk);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.board.m(), self.board.n());
        match self.mode {
            Mode::Init | Mode::Term if n > m => Err(Error::Precondition(format!(
                "endpoint maps need m >= n, got {m}x{n}; transpose the board to {n}x{m}"
            ))),
            Mode::Path if self.walk.is_none() => Err(Error::Precondition("path mode needs a walk".into())),
            _ => match &self.walk {
                Some(w) if w.board() != self.board => Err(Error::Precondition(format!(
                    "walk is on {}, render board is {}",
                    w.board(),
                    self.board
                ))),
                Some(w) if self.mode == Mode::Path && !w.is_hamiltonian_path() => Err(Error::NotHamiltonian),
                _ => Ok(()),
            },
        }
    }
}

/// The squares shown by an endpoint map, each with the clauses that admit it.
///
/// Boards with `n ≥ 3` use the endpoint predicates; narrower boards read the
/// endpoints off the explicit pair lists.
pub fn endpoint_squares(board: &Board, terminal: bool) -> Result<Vec<EndpointPredicateResult>> {
    if board.n() >= 3 {
        return Ok(characterization::endpoint_map(board, terminal)?
            .into_iter()
            .filter(|r| r.holds)
            .collect());
    }
    let (pairs, label) = match board.n() {
        1 => (characterization::n1_pairs(board.m())?, "n1-pairs"),
        _ => (characterization::n2_pairs(board.m())?, "n2-pairs"),
    };
    let squares: BTreeSet<Square> = pairs.iter().map(|&(i, t)| if terminal { t } else { i }).collect();
    Ok(squares
        .into_iter()
        .map(|square| EndpointPredicateResult {
            square,
            clauses: vec![label],
            holds: true,
        })
        .collect())
}

pub fn render(spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    match spec.mode {
        Mode::Init | Mode::Term => render_map(spec),
        Mode::Path => render_path(spec),
        Mode::Diagonals => render_diagonals(spec),
    }
}

fn rows(board: &Board) -> impl Iterator<Item = usize> {
    (0..board.n()).rev()
}

/// Grid with a left axis of `q` labels and a bottom axis of `p` labels.
/// `cell` returns exactly `width` display columns.
fn ascii_grid(board: &Board, width: usize, cell: impl Fn(Square) -> String) -> String {
    let label = board.n().saturating_sub(1).to_string().len();
    let mut out = String::new();
    for q in rows(board) {
        let cells: Vec<String> = (0..board.m()).map(|p| cell(Square::new(p, q))).collect();
        writeln!(out, "{q:>label$} | {}", cells.join(" ")).unwrap();
    }
    let rule = board.m() * (width + 1) - 1;
    writeln!(out, "{} +-{}", " ".repeat(label), "-".repeat(rule)).unwrap();
    let axis: Vec<String> = (0..board.m())
        .map(|p| format!("{:>width$}", p % 10usize.pow(width as u32)))
        .collect();
    writeln!(out, "{}   {}", " ".repeat(label), axis.join(" ")).unwrap();
    out
}

const CELL: usize = 24;
const MARGIN: usize = 24;

struct Svg {
    board: Board,
    body: String,
}

impl Svg {
    fn new(board: Board) -> Svg {
        Svg {
            board,
            body: String::new(),
        }
    }

    /// Top-left pixel of a square.
    fn origin(&self, s: Square) -> (usize, usize) {
        (MARGIN + s.p * CELL, MARGIN + (self.board.n() - 1 - s.q) * CELL)
    }

    fn center(&self, s: Square) -> (usize, usize) {
        let (x, y) = self.origin(s);
        (x + CELL / 2, y + CELL / 2)
    }

    fn grid(&mut self, fill: impl Fn(Square) -> Option<&'static str>) {
        for s in self.board.squares() {
            let (x, y) = self.origin(s);
            let fill = fill(s).unwrap_or("white");
            writeln!(
                self.body,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="black" stroke-width="1"/>"#
            )
            .unwrap();
        }
    }

    fn finish(self, title: &str) -> String {
        let w = 2 * MARGIN + self.board.m() * CELL;
        let h = 2 * MARGIN + self.board.n() * CELL;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" data-generator=\"{GENERATOR}\">\n<title>{title}</title>\n{}</svg>\n",
            self.body
        )
    }
}

fn render_map(spec: &RenderSpec) -> Result<String> {
    let terminal = spec.mode == Mode::Term;
    let board = spec.board;
    let squares = endpoint_squares(&board, terminal)?;
    let marked: BTreeSet<Square> = squares.iter().map(|r| r.square).collect();
    let glyph = if terminal { TERMINAL_GLYPH } else { INITIAL_GLYPH };
    let what = if terminal { "terminal" } else { "initial" };
    Ok(match spec.format {
        Format::Ascii => {
            let mut out = format!("{what} squares of {board}: {}\n", marked.len());
            out += &ascii_grid(&board, 1, |s| {
                if marked.contains(&s) { glyph } else { EMPTY_GLYPH }.to_string()
            });
            out
        }
        Format::Json => {
            let list: Vec<_> = squares
                .iter()
                .map(|r| json!({"square": r.square, "clauses": r.clauses}))
                .collect();
            let doc = json!({
                "mode": spec.mode,
                "m": board.m(),
                "n": board.n(),
                "count": list.len(),
                "squares": list,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Format::Svg => {
            let mut svg = Svg::new(board);
            svg.grid(|_| None);
            for &s in &marked {
                let (cx, cy) = svg.center(s);
                if terminal {
                    let (x, y) = (cx - CELL / 4, cy - CELL / 4);
                    let side = CELL / 2;
                    writeln!(
                        svg.body,
                        r#"<rect x="{x}" y="{y}" width="{side}" height="{side}" fill="black"/>"#
                    )
                    .unwrap();
                } else {
                    let r = CELL / 4;
                    writeln!(svg.body, r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="black"/>"#).unwrap();
                }
            }
            svg.finish(&format!("{what} squares of {board}"))
        }
    })
}

fn render_path(spec: &RenderSpec) -> Result<String> {
    let w = spec.walk.as_ref().expect("validated");
    let board = spec.board;
    let map = w.travel_map()?;
    let terminal = board.diagonal_of(w.end());
    let path_spec = decoder::spec_of(w).ok();
    Ok(match spec.format {
        Format::Ascii => {
            let mut out = String::new();
            writeln!(out, "board: {board}").unwrap();
            writeln!(out, "walk:  {w}").unwrap();
            if let Some(s) = &path_spec {
                writeln!(out, "spec:  {s}").unwrap();
            }
            let trace: Vec<String> = w.realize().iter().map(Square::to_string).collect();
            writeln!(out, "trace: {}", trace.join(" ")).unwrap();
            out += &ascii_grid(&board, 2, |s| {
                let mark = if s == w.start() {
                    INITIAL_GLYPH
                } else if s == w.end() {
                    TERMINAL_GLYPH
                } else if terminal.contains(s) {
                    SHADE_GLYPH
                } else {
                    ' '
                };
                let arrow = match map.get(s) {
                    Some(Move::E) => '→',
                    Some(Move::N) => '↑',
                    None => ' ',
                };
                format!("{mark}{arrow}")
            });
            out
        }
        Format::Json => {
            let doc = json!({
                "mode": "path",
                "path": w.to_record(),
                "trace": w.realize(),
                "spec": path_spec,
                "terminalDiagonal": terminal.members(),
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Format::Svg => {
            let mut svg = Svg::new(board);
            svg.grid(|s| terminal.contains(s).then_some("lightgray"));
            for s in board.squares() {
                let Some(mv) = map.get(s) else { continue };
                let (x1, y1) = svg.center(s);
                let (x2, y2) = match mv {
                    Move::E => (x1 + CELL / 2, y1),
                    Move::N => (x1, y1 - CELL / 2),
                };
                writeln!(
                    svg.body,
                    r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="2"/>"#
                )
                .unwrap();
            }
            let (cx, cy) = svg.center(w.start());
            writeln!(
                svg.body,
                r#"<circle cx="{cx}" cy="{cy}" r="{}" fill="black"/>"#,
                CELL / 5
            )
            .unwrap();
            let (cx, cy) = svg.center(w.end());
            let side = CELL / 3;
            writeln!(
                svg.body,
                r#"<rect x="{}" y="{}" width="{side}" height="{side}" fill="black"/>"#,
                cx - side / 2,
                cy - side / 2
            )
            .unwrap();
            svg.finish(&format!("{w}"))
        }
    })
}

fn render_diagonals(spec: &RenderSpec) -> Result<String> {
    let board = spec.board;
    let terminal = spec.walk.as_ref().map(|w| board.diagonal_of(w.end()));
    let shaded = |s: Square| terminal.as_ref().is_some_and(|d| d.contains(s));
    Ok(match spec.format {
        Format::Ascii => {
            let width = board.corner_id().0.to_string().len() + 1;
            ascii_grid(&board, width, |s| {
                let shade = if shaded(s) { SHADE_GLYPH } else { ' ' };
                let id = board.diagonal_id_of(s).0;
                format!("{shade}{id:>0$}", width - 1)
            })
        }
        Format::Json => {
            let diagonals: BTreeMap<String, Vec<Square>> = board
                .diagonals()
                .iter()
                .map(|d| (d.id().0.to_string(), d.members().to_vec()))
                .collect();
            let doc = json!({
                "mode": "diagonals",
                "m": board.m(),
                "n": board.n(),
                "corner": board.corner_id(),
                "diagonals": diagonals,
                "terminal": terminal.as_ref().map(|d| d.id()),
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Format::Svg => {
            let mut svg = Svg::new(board);
            svg.grid(|s| shaded(s).then_some("lightgray"));
            for s in board.squares() {
                let (cx, cy) = svg.center(s);
                let id = board.diagonal_id_of(s).0;
                writeln!(
                    svg.body,
                    r#"<text x="{cx}" y="{}" font-size="10" text-anchor="middle">{id}</text>"#,
                    cy + 4
                )
                .unwrap();
            }
            svg.finish(&format!("diagonals of {board}"))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board(m: usize, n: usize) -> Board {
        Board::new(m, n).unwrap()
    }

    #[test]
    fn init_map_3x3_json_lists_seven_squares() {
        let out = render(&RenderSpec::new(Mode::Init, Format::Json, board(3, 3))).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["count"], 7);
        let squares: Vec<Square> = doc["squares"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| serde_json::from_value(e["square"].clone()).unwrap())
            .collect();
        assert!(!squares.contains(&Square::new(0, 0)));
        assert!(!squares.contains(&Square::new(2, 2)));
    }

    #[test]
    fn ascii_map_puts_north_on_top() {
        let out = render(&RenderSpec::new(Mode::Term, Format::Ascii, board(3, 3))).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "terminal squares of 3x3: 7");
        assert_eq!(lines[1], "2 | ■ ■ ·");
        assert_eq!(lines[3], "0 | · ■ ■");
        assert_eq!(lines[5], "    0 1 2");
    }

    #[test]
    fn tall_boards_are_rejected_with_a_hint() {
        let err = render(&RenderSpec::new(Mode::Init, Format::Ascii, board(3, 5))).unwrap_err();
        assert!(err.to_string().contains("transpose"));
    }

    #[test]
    fn narrow_maps_use_pair_lists() {
        let out = render(&RenderSpec::new(Mode::Init, Format::Json, board(5, 2))).unwrap();
        assert!(out.contains("n2-pairs"));
        let out = render(&RenderSpec::new(Mode::Init, Format::Ascii, board(4, 1))).unwrap();
        assert!(out.contains(INITIAL_GLYPH));
    }

    #[test]
    fn path_mode_shows_moves_and_shading() {
        let w = Walk::new(board(3, 3), Square::new(0, 2), "NNNNNENN".parse().unwrap()).unwrap();
        let spec = RenderSpec::new(Mode::Path, Format::Ascii, board(3, 3)).with_walk(w.clone());
        let out = render(&spec).unwrap();
        assert!(out.contains("spec:  (0,2) -> (1,0) east {}"));
        assert!(out.contains('→') && out.contains('↑') && out.contains(SHADE_GLYPH));
        let json = render(&RenderSpec {
            format: Format::Json,
            ..spec.clone()
        })
        .unwrap();
        assert!(json.contains("\"moves\": \"NNNNNENN\""));
        assert!(render(&RenderSpec { walk: None, ..spec }).is_err());
    }

    #[test]
    fn svg_is_deterministic_and_tagged() {
        let spec = RenderSpec::new(Mode::Diagonals, Format::Svg, board(5, 4));
        let a = render(&spec).unwrap();
        assert_eq!(a, render(&spec).unwrap());
        assert!(a.contains(&format!("data-generator=\"{GENERATOR}\"")));
        assert_eq!(a.matches("<rect").count(), 20);
    }

    #[test]
    fn modes_and_formats_parse() {
        assert_eq!("diagonals".parse::<Mode>().unwrap(), Mode::Diagonals);
        assert_eq!(Format::Svg.to_string(), "svg");
        assert!("png".parse::<Format>().is_err());
    }
}
