//! File formats, benchmark tables, JSON rendering and a brute-force oracle
//! for the `atomfib` command-line tool.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use atomfib_core::completion::{default_generators, extended_atomic_fibers, restrict_to_order, AtomicFiberSet};
use atomfib_core::projectlift::{self, RunOptions};
use atomfib_core::{Error, FiberEngine, IntMat, IntVec, RhsContext};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

fn perr(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, column, msg: msg.into() }
}

/// Whitespace tokens with 1-based (line, column) positions; `#` starts a
/// comment.
fn tokens(text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for part in line.split_whitespace() {
            let off = line[col..].find(part).unwrap() + col;
            out.push((li + 1, off + 1, part));
            col = off + part.len();
        }
    }
    out
}

/// Rows of a `"r c"`-headed block: the header line, then `r` lines of `c`
/// integers each.
fn parse_block(text: &str) -> Result<(usize, usize, Vec<Vec<BigInt>>), ParseError> {
    let toks = tokens(text);
    let mut lines: BTreeMap<usize, Vec<(usize, &str)>> = BTreeMap::new();
    for (l, c, t) in toks {
        lines.entry(l).or_default().push((c, t));
    }
    let mut it = lines.into_iter();
    let Some((hl, header)) = it.next() else {
        return Err(perr(1, 1, "missing header"));
    };
    if header.len() != 2 {
        let c = header.get(2).map_or(1, |t| t.0);
        return Err(perr(hl, c, "header must be two integers \"rows cols\""));
    }
    let dims: Vec<usize> = header
        .iter()
        .map(|&(c, t)| t.parse::<usize>().map_err(|_| perr(hl, c, format!("bad dimension {t:?}"))))
        .collect::<Result<_, _>>()?;
    let (r, c) = (dims[0], dims[1]);
    let mut rows = Vec::with_capacity(r);
    let mut last = hl;
    for (l, toks) in it {
        last = l;
        if rows.len() == r {
            return Err(perr(l, toks[0].0, format!("expected {r} rows, found more")));
        }
        if toks.len() != c {
            let col = toks.get(c).map_or(toks.last().unwrap().0, |t| t.0);
            return Err(perr(l, col, format!("expected {c} entries, found {}", toks.len())));
        }
        let row = toks
            .iter()
            .map(|&(col, t)| t.parse::<BigInt>().map_err(|_| perr(l, col, format!("bad integer {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() != r {
        return Err(perr(last + 1, 1, format!("expected {r} rows, found {}", rows.len())));
    }
    Ok((r, c, rows))
}

/// `"d n"` header followed by `d` rows of `n` integers.
pub fn parse_matrix_str(text: &str) -> Result<IntMat, ParseError> {
    let (d, n, rows) = parse_block(text)?;
    IntMat::from_rows(d, n, rows).map_err(|e| perr(1, 1, e.to_string()))
}

pub fn parse_matrix(path: &Path) -> Result<IntMat, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| perr(0, 0, format!("{}: {e}", path.display())))?;
    parse_matrix_str(&text)
}

/// `"t d"` header followed by `t` generators of dimension `d`, one per row;
/// returned as the `d × t` matrix with the generators as columns.
pub fn parse_generators_str(text: &str) -> Result<IntMat, ParseError> {
    let (t, d, rows) = parse_block(text)?;
    let gens: Vec<IntVec> = rows.into_iter().map(IntVec::new).collect();
    debug_assert_eq!(gens.len(), t);
    Ok(IntMat::from_columns(d, &gens))
}

pub fn parse_generators(path: &Path) -> Result<IntMat, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| perr(0, 0, format!("{}: {e}", path.display())))?;
    parse_generators_str(&text)
}

/// `"8,7"` → `(8, 7)`.
pub fn parse_rhs(s: &str) -> Result<IntVec, ParseError> {
    let mut col = 1;
    let mut out = Vec::new();
    for part in s.split(',') {
        let t = part.trim();
        out.push(t.parse::<BigInt>().map_err(|_| perr(1, col, format!("bad integer {t:?}")))?);
        col += part.len() + 1;
    }
    Ok(IntVec::new(out))
}

// ---------------------------------------------------------------- suites

pub fn partition_matrix(parts: &[i64]) -> IntMat {
    IntMat::from_i64(&[parts])
}

pub fn homogeneous_partition_matrix(parts: &[i64]) -> IntMat {
    let ones = vec![1; parts.len()];
    IntMat::from_i64(&[&ones, parts])
}

pub fn twisted_cubic() -> IntMat {
    IntMat::from_i64(&[&[3, 2, 1, 0], &[0, 1, 2, 3]])
}

pub fn steinberger_3x3() -> IntMat {
    IntMat::from_i64(&[
        &[1, -1, 0, -1, 1, 0, 0, 0, 0],
        &[0, 1, -1, 0, -1, 1, 0, 0, 0],
        &[0, 0, 0, 1, -1, 0, -1, 1, 0],
        &[0, 0, 0, 0, 1, -1, 0, -1, 1],
    ])
}

pub fn steinberger_4x4() -> IntMat {
    IntMat::from_i64(&[
        &[1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        &[0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1, 0],
        &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1],
    ])
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub name: String,
    pub matrix: IntMat,
    pub expected: Option<usize>,
    /// Expected number of extended atomic fibers, when also benchmarked.
    pub expected_extended: Option<usize>,
    pub long: bool,
}

pub const SUITES: [&str; 3] = ["partition", "partition-homog", "steinberger"];

const PARTITION: [(&[i64], usize, bool); 11] = [
    (&[1], 1, false),
    (&[1, 2], 2, false),
    (&[1, 2, 3], 4, false),
    (&[1, 2, 3, 4], 9, false),
    (&[1, 2, 3, 4, 5], 32, true),
    (&[1, 2, 3, 4, 5, 6], 41, true),
    (&[2, 3], 3, false),
    (&[2, 3, 5], 14, false),
    (&[2, 3, 5, 7], 72, true),
    (&[3, 5], 1, false),
    (&[3, 5, 7], 30, false),
];

const PARTITION_HOMOG: [(&[i64], usize, bool); 21] = [
    (&[1], 1, false),
    (&[1, 2], 2, false),
    (&[1, 2, 3], 4, false),
    (&[1, 2, 3, 4], 18, false),
    (&[1, 2, 3, 4, 5], 79, false),
    (&[1, 2, 3, 5], 12, false),
    (&[1, 2, 3, 6], 35, false),
    (&[1, 2, 3, 7], 19, false),
    (&[1, 2, 3, 8], 58, true),
    (&[1, 2, 3, 9], 28, false),
    (&[1, 2, 3, 10], 87, true),
    (&[1, 2, 3, 11], 39, false),
    (&[1, 2, 3, 12], 122, true),
    (&[1, 2, 3, 13], 52, true),
    (&[1, 2, 3, 14], 163, true),
    (&[1, 2, 3, 15], 67, true),
    (&[1, 2, 3, 17], 79, true),
    (&[2, 3], 2, false),
    (&[2, 3, 5], 4, false),
    (&[2, 3, 5, 7], 26, false),
    (&[2, 3, 5, 7, 11], 262, true),
];

fn parts_name(parts: &[i64]) -> String {
    parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

/// Rows of a named suite; rows flagged `long` are meant to run only on
/// request.
pub fn suite(name: &str) -> Option<Vec<BenchRow>> {
    let rows = match name {
        "partition" => PARTITION
            .iter()
            .map(|&(p, c, long)| BenchRow {
                name: parts_name(p),
                matrix: partition_matrix(p),
                expected: Some(c),
                expected_extended: None,
                long,
            })
            .collect(),
        "partition-homog" => PARTITION_HOMOG
            .iter()
            .map(|&(p, c, long)| BenchRow {
                name: parts_name(p),
                matrix: homogeneous_partition_matrix(p),
                expected: Some(c),
                expected_extended: None,
                long,
            })
            .collect(),
        "steinberger" => vec![
            BenchRow {
                name: "3x3".into(),
                matrix: steinberger_3x3(),
                expected: Some(31),
                expected_extended: Some(79),
                long: false,
            },
            BenchRow {
                name: "4x4".into(),
                matrix: steinberger_4x4(),
                expected: Some(12675),
                expected_extended: None,
                long: true,
            },
        ],
        _ => return None,
    };
    Some(rows)
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub name: String,
    pub count: usize,
    pub expected: Option<usize>,
    pub extended: Option<usize>,
    pub expected_extended: Option<usize>,
    pub rhs: Vec<IntVec>,
    pub elapsed: Duration,
}

impl BenchReport {
    pub fn ok(&self) -> bool {
        self.expected.is_none_or(|e| e == self.count) && self.expected_extended.is_none_or(|e| Some(e) == self.extended)
    }
}

/// Atomic fibers of a row over the column lattice by project-and-lift, plus
/// the extended count when the row carries an expectation for it.
pub fn bench_row(row: &BenchRow, budget: Option<usize>) -> Result<BenchReport, Error> {
    let start = Instant::now();
    let engine = FiberEngine::new(row.matrix.clone());
    let ctx = RhsContext::column_lattice(&row.matrix);
    let res = projectlift::run_with(&engine, &ctx, RunOptions { budget, ..RunOptions::default() })?;
    let extended = match row.expected_extended {
        Some(_) => Some(extended_atomic_fibers(&engine, &default_generators(&engine), budget)?.len()),
        None => None,
    };
    Ok(BenchReport {
        name: row.name.clone(),
        count: res.set.len(),
        expected: row.expected,
        extended,
        expected_extended: row.expected_extended,
        rhs: res.set.rhs,
        elapsed: start.elapsed(),
    })
}

/// Atomic fibers through the completion route: extended atomic fibers
/// filtered down to order `n`.
pub fn atomic_via_completion(engine: &FiberEngine, budget: Option<usize>) -> Result<AtomicFiberSet, Error> {
    let ext = extended_atomic_fibers(engine, &default_generators(engine), budget)?;
    restrict_to_order(engine, &ext, engine.n())
}

// ---------------------------------------------------------------- oracle

/// Definitional atomic right-hand sides in the box `[0, bound]^d` for a
/// nonnegative matrix without zero columns, by exhaustive enumeration of
/// fibers and of every split `b = b1 + b2`.
///
/// Uses nothing from the solver: points are enumerated coordinate by
/// coordinate and Minkowski sums are formed explicitly.
pub fn oracle_atomic(a: &IntMat, bound: i64) -> Result<Vec<IntVec>, Error> {
    oracle_atomic_in(a, bound, |_| true)
}

/// As [`oracle_atomic`] with right-hand sides, and both parts of every
/// split, restricted to the set described by `member`.
pub fn oracle_atomic_in(a: &IntMat, bound: i64, member: impl Fn(&[i64]) -> bool) -> Result<Vec<IntVec>, Error> {
    let (d, n) = (a.rows(), a.cols());
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|j| a.col(j).to_i64().ok_or(Error::WrongDomain("oracle needs small entries")))
        .collect::<Result<_, _>>()?;
    if cols.iter().any(|c| c.iter().any(|&x| x < 0) || c.iter().all(|&x| x == 0)) {
        return Err(Error::InfiniteFiber);
    }
    let mut fibers: BTreeMap<Vec<i64>, BTreeSet<Vec<i64>>> = BTreeMap::new();
    let mut z = vec![0i64; n];
    let mut b = vec![0i64; d];
    fn walk(
        j: usize,
        cols: &[Vec<i64>],
        bound: i64,
        z: &mut Vec<i64>,
        b: &mut Vec<i64>,
        out: &mut BTreeMap<Vec<i64>, BTreeSet<Vec<i64>>>,
    ) {
        if j == cols.len() {
            out.entry(b.clone()).or_default().insert(z.clone());
            return;
        }
        loop {
            walk(j + 1, cols, bound, z, b, out);
            for (bi, c) in b.iter_mut().zip(&cols[j]) {
                *bi += c;
            }
            z[j] += 1;
            if b.iter().any(|&x| x > bound) {
                break;
            }
        }
        for (bi, c) in b.iter_mut().zip(&cols[j]) {
            *bi -= c * z[j];
        }
        z[j] = 0;
    }
    walk(0, &cols, bound, &mut z, &mut b, &mut fibers);
    fibers.retain(|b, _| member(b));

    let mut atoms = Vec::new();
    for (rhs, pts) in &fibers {
        if rhs.iter().all(|&x| x == 0) {
            continue;
        }
        let splits = fibers.iter().any(|(b1, p1)| {
            if b1 == rhs || b1.iter().all(|&x| x == 0) {
                return false;
            }
            let b2: Vec<i64> = rhs.iter().zip(b1).map(|(x, y)| x - y).collect();
            let Some(p2) = fibers.get(&b2) else { return false };
            if b2.iter().all(|&x| x == 0) {
                return false;
            }
            let sums: BTreeSet<Vec<i64>> =
                p1.iter().flat_map(|x| p2.iter().map(move |y| x.iter().zip(y).map(|(s, t)| s + t).collect())).collect();
            &sums == pts
        });
        if !splits {
            atoms.push(IntVec::from_i64(rhs));
        }
    }
    atoms.sort_by(atomfib_core::rhs_order);
    Ok(atoms)
}

/// `b ∈ [0, bound]^d`.
pub fn in_box(b: &IntVec, bound: i64) -> bool {
    let hi = BigInt::from(bound);
    b.entries().iter().all(|x| !x.is_negative() && *x <= hi)
}

// ---------------------------------------------------------------- output

/// JSON number when it fits in `i64`, decimal string otherwise.
pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn vec_json(v: &IntVec) -> Value {
    Value::Array(v.entries().iter().map(int_json).collect())
}

pub fn json_vec(v: &Value) -> Option<IntVec> {
    let items = v.as_array()?;
    let mut out = Vec::with_capacity(items.len());
    for x in items {
        out.push(match x {
            Value::Number(n) => BigInt::from(n.as_i64()?),
            Value::String(s) => s.parse().ok()?,
            _ => return None,
        });
    }
    Some(IntVec::new(out))
}

/// `(a,b,c)`.
pub fn tuple(v: &IntVec) -> String {
    let parts: Vec<String> = v.entries().iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// A listing of right-hand sides with the elements (or minimal
/// representatives) of each fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Listing {
    pub order: usize,
    pub entries: Vec<(IntVec, Vec<IntVec>)>,
}

impl Listing {
    /// Minimal representatives `R_{b,n}^(k)` of each right-hand side; for
    /// finite fibers these are all elements.
    pub fn build(engine: &FiberEngine, rhs: &[IntVec], order: usize) -> Result<Self, Error> {
        let entries = rhs
            .iter()
            .map(|b| Ok((b.clone(), engine.min_reps(b, order, engine.n())?.reps.clone())))
            .collect::<Result<_, Error>>()?;
        Ok(Listing { order, entries })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "count": self.entries.len(),
            "fibers": self.entries.iter().map(|(b, els)| json!({
                "rhs": vec_json(b),
                "elements": els.iter().map(vec_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let order = v.get("order")?.as_u64()? as usize;
        let entries = v
            .get("fibers")?
            .as_array()?
            .iter()
            .map(|f| {
                let b = json_vec(f.get("rhs")?)?;
                let els = f.get("elements")?.as_array()?.iter().map(json_vec).collect::<Option<Vec<_>>>()?;
                Some((b, els))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Listing { order, entries })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {} atomic fibers of order {}\n", self.entries.len(), self.order);
        for (b, els) in &self.entries {
            let els: Vec<String> = els.iter().map(tuple).collect();
            s.push_str(&format!("{}: {}\n", tuple(b), els.join(" ")));
        }
        s
    }

    pub fn from_text(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let head = lines.next()?;
        let order = head.rsplit(' ').next()?.parse().ok()?;
        let parse_tuple = |t: &str| -> Option<IntVec> {
            let inner = t.trim().strip_prefix('(')?.strip_suffix(')')?;
            parse_rhs(inner).ok()
        };
        let mut entries = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (b, rest) = line.split_once(':')?;
            let els = rest.split_whitespace().map(parse_tuple).collect::<Option<Vec<_>>>()?;
            entries.push((parse_tuple(b)?, els));
        }
        Some(Listing { order, entries })
    }
}
