//! JSON form of a decoration system. Matrix entries are exact rationals
//! written as `"p/q"` or `"p"` strings; matrices are dense row lists.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

use super::{Block, DecorationSystem, Generator, GN};

pub const SCHEMA_VERSION: u32 = 1;

type Rows = Vec<Vec<String>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileV1 {
    schema_version: u32,
    name: String,
    max_genus: u32,
    max_legs: usize,
    max_weight: u32,
    blocks: Vec<BlockV1>,
    nonloop: Vec<NonloopV1>,
    #[serde(rename = "loop")]
    loops: Vec<MapV1>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    forget: Vec<MapV1>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockV1 {
    genus: u32,
    legs: usize,
    generators: Vec<GeneratorV1>,
    transpositions: Vec<Rows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorV1 {
    id: String,
    weight: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NonloopV1 {
    left: GN,
    right: GN,
    matrix: Rows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapV1 {
    source: GN,
    matrix: Rows,
}

fn bad(location: &str, reason: impl std::fmt::Display) -> Error {
    Error::Decoration(format!("{location}: {reason}"))
}

fn parse_rational(s: &str, location: &str) -> Result<BigRational> {
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p, q),
        None => (t, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad(location, format!("malformed rational '{s}'")))?;
    let q = BigInt::from_str(q).map_err(|_| bad(location, format!("malformed rational '{s}'")))?;
    if q.is_zero() {
        return Err(bad(location, format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(p, q))
}

fn parse_matrix(rows: &Rows, shape: (usize, usize), location: &str) -> Result<QMatrix> {
    if rows.len() != shape.0 {
        return Err(bad(location, format!("expected {} rows, found {}", shape.0, rows.len())));
    }
    let mut out = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        if row.len() != shape.1 {
            return Err(bad(&format!("{location}[{r}]"), format!("expected {} columns, found {}", shape.1, row.len())));
        }
        out.push(
            row.iter()
                .enumerate()
                .map(|(c, x)| parse_rational(x, &format!("{location}[{r}][{c}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(QMatrix::from_rows(out).unwrap_or_else(|| QMatrix::zeros(shape.0, shape.1)))
}

fn write_matrix(m: &QMatrix) -> Rows {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn parse_decoration(text: &str) -> Result<DecorationSystem> {
    let f: FileV1 = serde_json::from_str(text).map_err(|e| bad("decoration file", e))?;
    if f.schema_version != SCHEMA_VERSION {
        return Err(bad(
            "schema_version",
            format!("unsupported version {} (expected {SCHEMA_VERSION})", f.schema_version),
        ));
    }
    let mut ds = DecorationSystem {
        name: f.name,
        max_genus: f.max_genus,
        max_legs: f.max_legs,
        max_weight: f.max_weight,
        blocks: BTreeMap::new(),
        nonloop: BTreeMap::new(),
        loops: BTreeMap::new(),
        forget: BTreeMap::new(),
    };
    for (i, b) in f.blocks.iter().enumerate() {
        let loc = format!("blocks[{i}]");
        if !ds.in_range(b.genus, b.legs) {
            return Err(bad(&loc, format!("(g,n)=({},{}) is outside the declared stable range", b.genus, b.legs)));
        }
        let dim = b.generators.len();
        if let Some(x) = b.generators.iter().find(|x| x.weight > ds.max_weight) {
            return Err(bad(&loc, format!("generator '{}' exceeds max_weight", x.id)));
        }
        let expected = b.legs.saturating_sub(1);
        if b.transpositions.len() != expected {
            return Err(bad(&loc, format!("expected {expected} transpositions, found {}", b.transpositions.len())));
        }
        let transpositions = b
            .transpositions
            .iter()
            .enumerate()
            .map(|(j, m)| parse_matrix(m, (dim, dim), &format!("{loc}.transpositions[{j}]")))
            .collect::<Result<_>>()?;
        let generators = b
            .generators
            .iter()
            .map(|x| Generator {
                id: x.id.clone(),
                weight: x.weight,
            })
            .collect();
        if ds.blocks.insert((b.genus, b.legs), Block { generators, transpositions }).is_some() {
            return Err(bad(&loc, format!("duplicate block ({},{})", b.genus, b.legs)));
        }
    }
    if let Some((g, n)) = ds.required_blocks().into_iter().find(|k| !ds.blocks.contains_key(k)) {
        return Err(bad("blocks", format!("missing block (g,n)=({g},{n})")));
    }
    let dim = |ds: &DecorationSystem, (g, n): GN, loc: &str| {
        ds.blocks
            .get(&(g, n))
            .map(Block::dim)
            .ok_or_else(|| bad(loc, format!("refers to missing block ({g},{n})")))
    };
    for (i, e) in f.nonloop.iter().enumerate() {
        let loc = format!("nonloop[{i}]");
        if e.left > e.right {
            return Err(bad(&loc, "left must not exceed right; the other order is derived"));
        }
        let src = dim(&ds, (e.left.0 + e.right.0, e.left.1 + e.right.1), &loc)?;
        let a = dim(&ds, (e.left.0, e.left.1 + 1), &loc)?;
        let b = dim(&ds, (e.right.0, e.right.1 + 1), &loc)?;
        let m = parse_matrix(&e.matrix, (a * b, src), &format!("{loc}.matrix"))?;
        if ds.nonloop.insert((e.left, e.right), m).is_some() {
            return Err(bad(&loc, "duplicate entry"));
        }
    }
    for (i, e) in f.loops.iter().enumerate() {
        let loc = format!("loop[{i}]");
        let (g, n) = e.source;
        if g == 0 {
            return Err(bad(&loc, "loop map needs positive genus"));
        }
        let m = parse_matrix(&e.matrix, (dim(&ds, (g - 1, n + 2), &loc)?, dim(&ds, (g, n), &loc)?), &format!("{loc}.matrix"))?;
        if ds.loops.insert(e.source, m).is_some() {
            return Err(bad(&loc, "duplicate entry"));
        }
    }
    for (i, e) in f.forget.iter().enumerate() {
        let loc = format!("forget[{i}]");
        let (g, n) = e.source;
        let m = parse_matrix(&e.matrix, (dim(&ds, (g, n + 1), &loc)?, dim(&ds, (g, n), &loc)?), &format!("{loc}.matrix"))?;
        if ds.forget.insert(e.source, m).is_some() {
            return Err(bad(&loc, "duplicate entry"));
        }
    }
    if let Some(k) = ds.required_nonloop().into_iter().find(|k| !ds.nonloop.contains_key(k)) {
        return Err(bad("nonloop", format!("missing map for {:?},{:?}", k.0, k.1)));
    }
    if let Some(k) = ds.required_loops().into_iter().find(|k| !ds.loops.contains_key(k)) {
        return Err(bad("loop", format!("missing map for {k:?}")));
    }
    Ok(ds)
}

pub fn to_json(ds: &DecorationSystem) -> String {
    let f = FileV1 {
        schema_version: SCHEMA_VERSION,
        name: ds.name.clone(),
        max_genus: ds.max_genus,
        max_legs: ds.max_legs,
        max_weight: ds.max_weight,
        blocks: ds
            .blocks
            .iter()
            .map(|(&(genus, legs), b)| BlockV1 {
                genus,
                legs,
                generators: b
                    .generators
                    .iter()
                    .map(|x| GeneratorV1 {
                        id: x.id.clone(),
                        weight: x.weight,
                    })
                    .collect(),
                transpositions: b.transpositions.iter().map(write_matrix).collect(),
            })
            .collect(),
        nonloop: ds
            .nonloop
            .iter()
            .map(|(&(left, right), m)| NonloopV1 {
                left,
                right,
                matrix: write_matrix(m),
            })
            .collect(),
        loops: ds
            .loops
            .iter()
            .map(|(&source, m)| MapV1 {
                source,
                matrix: write_matrix(m),
            })
            .collect(),
        forget: ds
            .forget
            .iter()
            .map(|(&source, m)| MapV1 {
                source,
                matrix: write_matrix(m),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&f).expect("serializable");
    s.push('\n');
    s
}

pub fn load_decoration(path: &Path) -> Result<DecorationSystem> {
    let text = std::fs::read_to_string(path)?;
    parse_decoration(&text).map_err(|e| match e {
        Error::Decoration(m) => Error::Decoration(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save_decoration(ds: &DecorationSystem, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(ds))?;
    Ok(())
}
