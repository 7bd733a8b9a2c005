//! Text formats for signatures, grids, and 2×2 matrices.
//!
//! All printers emit text that the matching parser accepts verbatim
//! (round-trip), with `#` line comments and blank lines ignored on input.
//!
//! Signature files are lines of the form
//! `sig <name> [f0, f1, …, fn]`, entries in the cyclotomic literal grammar.
//! Grid files extend them with `vertex <name> <signame>`,
//! `edge <v>:<port> <w>:<port>`, and `dangle <v>:<port>` lines.
//! Matrices are written `[[a, b], [c, d]]` or referenced by the stock names
//! `identity`, `x`, `d`, `h2`, `z`, `zinv`, `alpha`, `omega`.

use std::collections::HashMap;
use std::fmt::Write as _;

use holant_core::cyclo::{parse_cyclo, Cyclo};
use holant_core::grid::{Port, SigGrid};
use holant_core::sigalg::SymSig;
use holant_core::xform::Mat2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown name `{name}`")]
    UnknownName { line: usize, name: String },
    #[error("invalid grid: {0}")]
    Grid(#[from] holant_core::grid::GridError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Split `[a, b, c]` into entry strings.
fn bracket_list(line: usize, s: &str) -> Result<Vec<String>, FormatError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| syntax(line, "expected a [..] list"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(|e| e.trim().to_string()).collect())
}

fn parse_entry(line: usize, s: &str) -> Result<Cyclo, FormatError> {
    parse_cyclo(s).map_err(|e| syntax(line, format!("bad value `{s}`: {e}")))
}

fn parse_port(line: usize, s: &str, vertices: &HashMap<String, usize>) -> Result<Port, FormatError> {
    let (v, p) = s
        .split_once(':')
        .ok_or_else(|| syntax(line, format!("expected <vertex>:<port>, got `{s}`")))?;
    let vid = *vertices
        .get(v)
        .ok_or_else(|| FormatError::UnknownName { line, name: v.to_string() })?;
    let port = p
        .parse::<usize>()
        .map_err(|_| syntax(line, format!("bad port number `{p}`")))?;
    Ok((vid, port))
}

/// Parse a signature file: named symmetric signatures, in file order.
pub fn parse_sig_file(text: &str) -> Result<Vec<(String, SymSig)>, FormatError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let rest = content
            .strip_prefix("sig ")
            .ok_or_else(|| syntax(line, "expected `sig <name> [..]`"))?;
        let (name, list) = rest
            .trim()
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(line, "expected `sig <name> [..]`"))?;
        let entries = bracket_list(line, list)?
            .iter()
            .map(|e| parse_entry(line, e))
            .collect::<Result<Vec<_>, _>>()?;
        if entries.is_empty() {
            return Err(syntax(line, "a signature needs at least one entry"));
        }
        out.push((name.to_string(), SymSig::new(entries)));
    }
    Ok(out)
}

pub fn print_sig(f: &SymSig) -> String {
    let body: Vec<String> = f.entries().iter().map(|e| e.to_string()).collect();
    format!("[{}]", body.join(", "))
}

pub fn print_sig_file(sigs: &[(String, SymSig)]) -> String {
    let mut out = String::new();
    for (name, f) in sigs {
        let _ = writeln!(out, "sig {} {}", name, print_sig(f));
    }
    out
}

/// A parsed grid together with the names used in the file, kept so the
/// printer can reproduce them.
pub struct NamedGrid {
    pub grid: SigGrid,
    pub sig_names: Vec<String>,
    pub vertex_names: Vec<String>,
}

pub fn parse_grid_file(text: &str) -> Result<NamedGrid, FormatError> {
    let mut sigs: Vec<SymSig> = Vec::new();
    let mut sig_names: Vec<String> = Vec::new();
    let mut sig_index: HashMap<String, usize> = HashMap::new();
    let mut vertex_sigs: Vec<usize> = Vec::new();
    let mut vertex_names: Vec<String> = Vec::new();
    let mut vertex_index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(Port, Port)> = Vec::new();
    let mut dangling: Vec<Port> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (verb, rest) = content
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(line, format!("incomplete directive `{content}`")))?;
        let rest = rest.trim();
        match verb {
            "sig" => {
                let (name, list) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax(line, "expected `sig <name> [..]`"))?;
                let entries = bracket_list(line, list)?
                    .iter()
                    .map(|e| parse_entry(line, e))
                    .collect::<Result<Vec<_>, _>>()?;
                if entries.is_empty() {
                    return Err(syntax(line, "a signature needs at least one entry"));
                }
                sig_index.insert(name.to_string(), sigs.len());
                sig_names.push(name.to_string());
                sigs.push(SymSig::new(entries));
            }
            "vertex" => {
                let (name, signame) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax(line, "expected `vertex <name> <signame>`"))?;
                let si = *sig_index.get(signame.trim()).ok_or_else(|| {
                    FormatError::UnknownName { line, name: signame.trim().to_string() }
                })?;
                vertex_index.insert(name.to_string(), vertex_sigs.len());
                vertex_names.push(name.to_string());
                vertex_sigs.push(si);
            }
            "edge" => {
                let (a, b) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax(line, "expected `edge <v>:<p> <w>:<q>`"))?;
                edges.push((
                    parse_port(line, a.trim(), &vertex_index)?,
                    parse_port(line, b.trim(), &vertex_index)?,
                ));
            }
            "dangle" => {
                dangling.push(parse_port(line, rest, &vertex_index)?);
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let grid = SigGrid::new(sigs, vertex_sigs, edges, dangling)?;
    Ok(NamedGrid { grid, sig_names, vertex_names })
}

pub fn print_grid_file(g: &NamedGrid) -> String {
    let mut out = String::new();
    for (name, f) in g.sig_names.iter().zip(g.grid.sig_table()) {
        let _ = writeln!(out, "sig {} {}", name, print_sig(f));
    }
    for (v, name) in g.vertex_names.iter().enumerate() {
        let _ = writeln!(out, "vertex {} {}", name, g.sig_names[g.grid.sig_index_of(v)]);
    }
    for &((v1, p1), (v2, p2)) in g.grid.edges() {
        let _ = writeln!(
            out,
            "edge {}:{} {}:{}",
            g.vertex_names[v1], p1, g.vertex_names[v2], p2
        );
    }
    for &(v, p) in g.grid.dangling() {
        let _ = writeln!(out, "dangle {}:{}", g.vertex_names[v], p);
    }
    out
}

/// Parse a 2×2 matrix: a stock name or a `[[a, b], [c, d]]` literal.
pub fn parse_mat(s: &str) -> Result<Mat2, FormatError> {
    match s.trim() {
        "identity" => return Ok(Mat2::identity()),
        "x" => return Ok(Mat2::x()),
        "d" => return Ok(Mat2::d()),
        "h2" => return Ok(Mat2::h2()),
        "z" => return Ok(Mat2::z()),
        "zinv" => return Ok(Mat2::z_inv()),
        "alpha" => return Ok(Mat2::alpha_diag(1)),
        "omega" => return Ok(Mat2::omega_diag(8, 1)),
        _ => {}
    }
    let t = s.trim();
    let inner = t
        .strip_prefix("[[")
        .and_then(|x| x.strip_suffix("]]"))
        .ok_or_else(|| syntax(0, "expected a matrix name or [[a, b], [c, d]]"))?;
    let rows: Vec<&str> = inner.split("],").map(str::trim).collect();
    if rows.len() != 2 {
        return Err(syntax(0, "a matrix needs exactly two rows"));
    }
    let mut m = Mat2::identity();
    for (r, row) in rows.iter().enumerate() {
        let row = row.strip_prefix('[').unwrap_or(row);
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        if cells.len() != 2 {
            return Err(syntax(0, "a matrix row needs exactly two entries"));
        }
        for (c, cell) in cells.iter().enumerate() {
            m.m[r][c] = parse_entry(0, cell)?;
        }
    }
    Ok(m)
}

pub fn print_mat(t: &Mat2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        t.m[0][0], t.m[0][1], t.m[1][0], t.m[1][1]
    )
}
