//! JSON documents: `huge_nfold` and `table3` instances, and solutions.
//!
//! Integers may be given as JSON numbers of any size or as decimal strings.
//! Output writes counts, multiplicities and objectives as decimal strings.

use std::str::FromStr;

use nfold_core::tables::TableSolution;
use nfold_core::{
    BrickType, CompactPresentation, ExtInt, HugeInstance, IntMatrix, TableSpec, TableType,
    TypePresentation,
};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Huge(HugeInstance),
    Table(TableSpec),
}

/// A parsed solution document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionDoc {
    Infeasible,
    Optimal {
        objective: BigInt,
        presentation: CompactPresentation,
    },
}

fn parse_error(path: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        context: path.to_string(),
        message: message.into(),
    }
}

fn syntax_error(err: serde_json::Error) -> CliError {
    CliError::Parse {
        context: format!("line {} column {}", err.line(), err.column()),
        message: err.to_string(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value, CliError> {
    obj.get(name)
        .ok_or_else(|| parse_error(&join(path, name), "missing field"))
}

fn join(path: &str, name: &str) -> String {
    if path.is_empty() {
        name.to_string()
    } else {
        format!("{path}.{name}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object()
        .ok_or_else(|| parse_error(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array()
        .ok_or_else(|| parse_error(path, "expected an array"))
}

fn parse_decimal(text: &str, path: &str) -> Result<BigInt, CliError> {
    let digits = text.strip_prefix('+').unwrap_or(text);
    BigInt::from_str(digits).map_err(|_| parse_error(path, format!("not an integer: {text:?}")))
}

fn int(v: &Value, path: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => parse_decimal(&n.to_string(), path),
        Value::String(s) => parse_decimal(s.trim(), path),
        _ => Err(parse_error(path, "expected an integer")),
    }
}

fn ext_int(v: &Value, path: &str) -> Result<ExtInt, CliError> {
    if let Value::String(s) = v {
        match s.trim() {
            "-inf" => return Ok(ExtInt::NegInf),
            "+inf" | "inf" => return Ok(ExtInt::PosInf),
            _ => {}
        }
    }
    int(v, path).map(ExtInt::Finite)
}

fn int_vec(v: &Value, path: &str) -> Result<Vec<BigInt>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| int(x, &format!("{path}[{i}]")))
        .collect()
}

fn ext_vec(v: &Value, path: &str) -> Result<Vec<ExtInt>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| ext_int(x, &format!("{path}[{i}]")))
        .collect()
}

fn int_rows(v: &Value, path: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| int_vec(row, &format!("{path}[{i}]")))
        .collect()
}

fn small(v: &Value, path: &str) -> Result<usize, CliError> {
    use num_traits::ToPrimitive;
    int(v, path)?
        .to_usize()
        .ok_or_else(|| parse_error(path, "expected a small nonnegative integer"))
}

fn parse_huge(obj: &Map<String, Value>) -> Result<HugeInstance, CliError> {
    let rows = int_rows(field(obj, "", "A")?, "A")?;
    let matrix = IntMatrix::from_rows(&rows).map_err(|e| parse_error("A", e.to_string()))?;
    let b0 = int_vec(field(obj, "", "b0")?, "b0")?;
    let types = array(field(obj, "", "types")?, "types")?
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let path = format!("types[{k}]");
            let t = object(t, &path)?;
            Ok(BrickType {
                cost: int_vec(field(t, &path, "w")?, &join(&path, "w"))?,
                lower: ext_vec(field(t, &path, "l")?, &join(&path, "l"))?,
                upper: ext_vec(field(t, &path, "u")?, &join(&path, "u"))?,
                rhs: int_vec(field(t, &path, "b")?, &join(&path, "b"))?,
                count: int(field(t, &path, "count")?, &join(&path, "count"))?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let inst = HugeInstance { matrix, b0, types };
    let violations = nfold_core::validate_huge_instance(&inst);
    if !violations.is_empty() {
        return Err(CliError::Validation(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok(inst)
}

fn parse_table(obj: &Map<String, Value>) -> Result<TableSpec, CliError> {
    let rows = small(field(obj, "", "rows")?, "rows")?;
    let cols = small(field(obj, "", "cols")?, "cols")?;
    let line_sums = int_rows(field(obj, "", "g")?, "g")?;
    let types = array(field(obj, "", "types")?, "types")?
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let path = format!("types[{k}]");
            let t = object(t, &path)?;
            Ok(TableType {
                cost: int_rows(field(t, &path, "w")?, &join(&path, "w"))?,
                col_sums: int_vec(field(t, &path, "e")?, &join(&path, "e"))?,
                row_sums: int_vec(field(t, &path, "f")?, &join(&path, "f"))?,
                count: int(field(t, &path, "count")?, &join(&path, "count"))?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let spec = TableSpec {
        rows,
        cols,
        line_sums,
        types,
    };
    spec.validate()
        .map_err(|e| CliError::Validation(vec![e.to_string()]))?;
    Ok(spec)
}

pub fn parse_instance(text: &str) -> Result<Document, CliError> {
    let value: Value = serde_json::from_str(text).map_err(syntax_error)?;
    let obj = object(&value, "<root>")?;
    let kind = field(obj, "", "kind")?
        .as_str()
        .ok_or_else(|| parse_error("kind", "expected a string"))?;
    match kind {
        "huge_nfold" => parse_huge(obj).map(Document::Huge),
        "table3" => parse_table(obj).map(Document::Table),
        "table4" => Err(parse_error(
            "kind",
            "4-way tables are not supported: their layer matrix is not totally unimodular, \
             and deciding feasibility with a variable number of types is an open problem",
        )),
        other => Err(parse_error(
            "kind",
            format!("unknown document kind {other:?}"),
        )),
    }
}

pub fn parse_solution(text: &str) -> Result<SolutionDoc, CliError> {
    let value: Value = serde_json::from_str(text).map_err(syntax_error)?;
    let obj = object(&value, "<root>")?;
    let status = field(obj, "", "status")?
        .as_str()
        .ok_or_else(|| parse_error("status", "expected a string"))?;
    match status {
        "infeasible" => return Ok(SolutionDoc::Infeasible),
        "optimal" => {}
        other => return Err(parse_error("status", format!("unknown status {other:?}"))),
    }
    let objective = int(field(obj, "", "objective")?, "objective")?;
    let entries = array(field(obj, "", "presentation")?, "presentation")?;
    let mut slots: Vec<Option<TypePresentation>> = vec![None; entries.len()];
    for (i, entry) in entries.iter().enumerate() {
        let path = format!("presentation[{i}]");
        let entry = object(entry, &path)?;
        let k = small(field(entry, &path, "type")?, &join(&path, "type"))?;
        if k >= slots.len() || slots[k].is_some() {
            return Err(parse_error(
                &join(&path, "type"),
                format!("type index {k} is out of range or repeated"),
            ));
        }
        let bricks = array(field(entry, &path, "bricks")?, &join(&path, "bricks"))?
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let bpath = format!("{path}.bricks[{j}]");
                let b = object(b, &bpath)?;
                Ok(nfold_core::BrickCount {
                    brick: int_vec(field(b, &bpath, "z")?, &join(&bpath, "z"))?,
                    multiplicity: int(
                        field(b, &bpath, "multiplicity")?,
                        &join(&bpath, "multiplicity"),
                    )?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        slots[k] = Some(TypePresentation { bricks });
    }
    Ok(SolutionDoc::Optimal {
        objective,
        presentation: CompactPresentation {
            types: slots.into_iter().map(Option::unwrap_or_default).collect(),
        },
    })
}

fn number(v: &BigInt) -> Number {
    Number::from_str(&v.to_string()).expect("decimal integers are valid JSON numbers")
}

fn numbers(v: &[BigInt]) -> Vec<Number> {
    v.iter().map(number).collect()
}

fn ext_value(v: &ExtInt) -> Value {
    match v {
        ExtInt::Finite(x) => Value::Number(number(x)),
        ExtInt::NegInf => Value::String("-inf".into()),
        ExtInt::PosInf => Value::String("+inf".into()),
    }
}

#[derive(Serialize)]
struct HugeTypeOut {
    w: Vec<Number>,
    l: Vec<Value>,
    u: Vec<Value>,
    b: Vec<Number>,
    count: String,
}

#[derive(Serialize)]
struct HugeOut {
    kind: &'static str,
    #[serde(rename = "A")]
    a: Vec<Vec<Number>>,
    b0: Vec<Number>,
    types: Vec<HugeTypeOut>,
}

#[derive(Serialize)]
struct TableTypeOut {
    w: Vec<Vec<Number>>,
    e: Vec<Number>,
    f: Vec<Number>,
    count: String,
}

#[derive(Serialize)]
struct TableOut {
    kind: &'static str,
    rows: usize,
    cols: usize,
    g: Vec<Vec<Number>>,
    types: Vec<TableTypeOut>,
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("documents always serialize");
    out.push('\n');
    out
}

/// Single-line JSON with a space after every `:` and `,`.
struct Spaced;

impl serde_json::ser::Formatter for Spaced {
    fn begin_array_value<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.begin_array_value(writer, first)
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
    ) -> std::io::Result<()> {
        writer.write_all(b": ")
    }
}

/// Serializes `value` on one newline-terminated line.
pub fn one_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Spaced);
    value
        .serialize(&mut ser)
        .expect("documents always serialize");
    let mut out = String::from_utf8(buf).expect("JSON output is UTF-8");
    out.push('\n');
    out
}

pub fn serialize_instance(doc: &Document) -> String {
    match doc {
        Document::Huge(inst) => pretty(&HugeOut {
            kind: "huge_nfold",
            a: inst.matrix.to_rows().iter().map(|r| numbers(r)).collect(),
            b0: numbers(&inst.b0),
            types: inst
                .types
                .iter()
                .map(|t| HugeTypeOut {
                    w: numbers(&t.cost),
                    l: t.lower.iter().map(ext_value).collect(),
                    u: t.upper.iter().map(ext_value).collect(),
                    b: numbers(&t.rhs),
                    count: t.count.to_string(),
                })
                .collect(),
        }),
        Document::Table(spec) => pretty(&TableOut {
            kind: "table3",
            rows: spec.rows,
            cols: spec.cols,
            g: spec.line_sums.iter().map(|r| numbers(r)).collect(),
            types: spec
                .types
                .iter()
                .map(|t| TableTypeOut {
                    w: t.cost.iter().map(|r| numbers(r)).collect(),
                    e: numbers(&t.col_sums),
                    f: numbers(&t.row_sums),
                    count: t.count.to_string(),
                })
                .collect(),
        }),
    }
}

#[derive(Serialize)]
struct BrickOut {
    z: Vec<Number>,
    multiplicity: String,
}

#[derive(Serialize)]
struct TypeOut {
    #[serde(rename = "type")]
    index: usize,
    bricks: Vec<BrickOut>,
}

#[derive(Serialize)]
struct OptimalOut {
    status: &'static str,
    objective: String,
    presentation: Vec<TypeOut>,
}

#[derive(Serialize)]
struct InfeasibleOut {
    status: &'static str,
}

pub fn serialize_solution(sol: &SolutionDoc) -> String {
    match sol {
        SolutionDoc::Infeasible => one_line(&InfeasibleOut {
            status: "infeasible",
        }),
        SolutionDoc::Optimal {
            objective,
            presentation,
        } => one_line(&OptimalOut {
            status: "optimal",
            objective: objective.to_string(),
            presentation: presentation
                .types
                .iter()
                .enumerate()
                .map(|(index, p)| TypeOut {
                    index,
                    bricks: p
                        .bricks
                        .iter()
                        .map(|b| BrickOut {
                            z: numbers(&b.brick),
                            multiplicity: b.multiplicity.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }),
    }
}

pub fn table_solution_doc(spec: &TableSpec, sol: &TableSolution) -> SolutionDoc {
    SolutionDoc::Optimal {
        objective: sol.objective.clone(),
        presentation: sol.to_presentation(spec),
    }
}
