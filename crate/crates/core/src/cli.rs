//! Command-line front end: `coeffs`, `verify` and `operator`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{operator_vars, parse_rational, rational_to_string, Poly};
use crate::diffop::DiffOp;
use crate::juhl::{a0_closed_form, build_en, juhl_coeffs, normalization_meta};
use crate::verify::{run_suite, Suite, SuiteOptions};
use crate::{Error, Result};

pub const MAX_N: usize = 8;
pub const MAX_ORDER: u32 = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "juhl", version, about = "Conformally covariant operator families: coefficients, operators, checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients a_j(λ, N) of the restricted operator.
    Coeffs {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        order: u32,
        #[arg(long, value_enum, default_value_t = CoeffFormat::Json)]
        format: CoeffFormat,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance override `name=value`; repeatable.
        #[arg(long = "tol", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
    },
    /// The unrestricted composite E_{λ,N} with exact coefficients.
    Operator {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        order: u32,
        #[arg(long, value_enum, default_value_t = OperatorFormat::Json)]
        format: OperatorFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffFormat {
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OperatorFormat {
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Symbolic,
    Numeric,
    Ambient,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Symbolic => Suite::Symbolic,
            SuiteArg::Numeric => Suite::Numeric,
            SuiteArg::Ambient => Suite::Ambient,
            SuiteArg::All => Suite::All,
        }
    }
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = value.trim().parse().map_err(|_| format!("bad tolerance value `{value}`"))?;
    Ok((name.trim().to_string(), v))
}

/// Exact polynomial as `[exponents, numerator, denominator]` triples in canonical order.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!([e, c.numer().to_string(), c.denom().to_string()]))
            .collect(),
    )
}

pub fn poly_from_json(v: &Value, vars: crate::algebra::VarList) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial must be an array".into()))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let triple: (Vec<u32>, String, String) =
            serde_json::from_value(t.clone()).map_err(|e| Error::Parse(format!("bad term {t}: {e}")))?;
        terms.push((triple.0, parse_rational(&triple.1, &triple.2)?));
    }
    Poly::from_terms(vars, terms)
}

/// One row of a coefficient table: `a_j` as coefficients of `λ^0, λ^1, …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub j: u32,
    pub coefficients: Vec<String>,
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub n: usize,
    #[serde(rename = "N")]
    pub order: u32,
    pub rows: Vec<CoeffRow>,
    /// `a_0` as a product of linear factors.
    pub a0_factored: String,
    pub normalization: Value,
}

fn check_range(n: usize, order: u32) -> Result<()> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n must lie in 1..={MAX_N}, got {n}")));
    }
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::OutOfRange(format!("N must lie in 1..={MAX_ORDER}, got {order}")));
    }
    Ok(())
}

/// `2λ + c` with the sign folded in.
fn linear_factor(c: i64) -> String {
    match c {
        0 => "2λ".to_string(),
        c if c > 0 => format!("2λ + {c}"),
        c => format!("2λ - {}", -c),
    }
}

fn a0_factored(n: usize, order: u32) -> String {
    (order + 1..=2 * order)
        .map(|m| format!("({})", linear_factor(m as i64 - n as i64)))
        .collect()
}

pub fn coeff_table(n: usize, order: u32) -> Result<CoeffTable> {
    check_range(n, order)?;
    let t = juhl_coeffs(n, order)?;
    let mut rows = Vec::with_capacity(t.coeffs().len());
    for (j, rf) in t.coeffs().iter().enumerate() {
        let p = rf
            .as_poly()
            .ok_or_else(|| Error::NonTangentialForm(format!("a_{j} = {rf} is not a polynomial in λ")))?;
        if j == 0 && p != a0_closed_form(n, order) {
            return Err(Error::NonTangentialForm("a_0 differs from its closed form".into()));
        }
        rows.push(CoeffRow {
            j: j as u32,
            coefficients: p.univariate_coeffs().iter().map(rational_to_string).collect(),
            display: p.to_string(),
        });
    }
    Ok(CoeffTable {
        n,
        order,
        rows,
        a0_factored: a0_factored(n, order),
        normalization: normalization_meta(n, order)?.to_json(),
    })
}

fn latex_poly(coeffs: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c.clone()),
        };
        let mag = match mag.split_once('/') {
            Some((p, q)) => format!("\\tfrac{{{p}}}{{{q}}}"),
            None => mag,
        };
        let mag = if k > 0 && mag == "1" { String::new() } else { mag };
        let var = match k {
            0 => String::new(),
            1 => "\\lambda".to_string(),
            _ => format!("\\lambda^{{{k}}}"),
        };
        let sign = match (parts.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        parts.push(format!("{sign}{mag}{var}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.concat()
    }
}

pub fn render_coeffs(table: &CoeffTable, format: CoeffFormat) -> String {
    match format {
        CoeffFormat::Json => {
            let a: Vec<Vec<String>> = table.rows.iter().map(|r| vec![r.display.clone()]).collect();
            let mut v = serde_json::to_value(table).expect("serializable");
            v["a"] = json!(a);
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        CoeffFormat::Csv => {
            let mut s = String::from("j,power,coefficient\n");
            for r in &table.rows {
                for (k, c) in r.coefficients.iter().enumerate() {
                    s.push_str(&format!("{},{k},{c}\n", r.j));
                }
            }
            s
        }
        CoeffFormat::Latex => {
            let (n, order) = (table.n, table.order);
            let mut s = format!("% n = {n}, N = {order}\n\\begin{{aligned}}\n");
            let shift = if n == 0 { String::new() } else { format!(" - {n}") };
            s.push_str(&format!(
                "a_0 &= \\prod_{{m={}}}^{{{}}} (2\\lambda{shift} + m) = {}",
                order + 1,
                2 * order,
                table.a0_factored.replace('λ', "\\lambda")
            ));
            for r in &table.rows[1..] {
                s.push_str(&format!(" \\\\\na_{{{}}} &= {}", r.j, latex_poly(&r.coefficients)));
            }
            s.push_str("\n\\end{aligned}\n");
            s
        }
    }
}

/// `{n, N, variables, terms: [{multi_index, coefficient, display}]}`.
pub fn operator_to_json(op: &DiffOp, order: u32) -> Value {
    let terms: Vec<Value> = op
        .terms()
        .map(|(a, p)| json!({ "multi_index": a, "coefficient": poly_to_json(p), "display": p.to_string() }))
        .collect();
    json!({
        "n": op.dim(),
        "N": order,
        "variables": op.vars().as_ref(),
        "terms": terms,
    })
}

pub fn operator_from_json(v: &Value) -> Result<DiffOp> {
    let n = v["n"].as_u64().ok_or_else(|| Error::Parse("missing `n`".into()))? as usize;
    let vars = operator_vars(n);
    let listed: Vec<String> = serde_json::from_value(v["variables"].clone())
        .map_err(|e| Error::Parse(format!("bad `variables`: {e}")))?;
    if listed != *vars {
        return Err(Error::Parse(format!("variables {listed:?} do not match dimension {n}")));
    }
    let terms = v["terms"].as_array().ok_or_else(|| Error::Parse("missing `terms`".into()))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let a: Vec<u32> = serde_json::from_value(t["multi_index"].clone())
            .map_err(|e| Error::Parse(format!("bad multi-index: {e}")))?;
        out.push((a, poly_from_json(&t["coefficient"], vars.clone())?));
    }
    DiffOp::from_terms(n, out)
}

fn operator_json(n: usize, order: u32) -> Result<String> {
    check_range(n, order)?;
    Ok(serde_json::to_string_pretty(&operator_to_json(&build_en(n, order), order)).expect("serializable") + "\n")
}

/// Parses `args` (program name first) and runs the command, writing to `out`
/// and `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let text = match cmd {
        Command::Coeffs { n, order, format } => render_coeffs(&coeff_table(n, order)?, format),
        Command::Operator { n, order, format: OperatorFormat::Json } => operator_json(n, order)?,
        Command::Verify { suite, n_min, n_max, seed, tol } => {
            let opts = SuiteOptions { n_min, n_max, seed, tol: tol.into_iter().collect::<BTreeMap<_, _>>() };
            let report = run_suite(suite.into(), &opts)?;
            let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            out.write_all(text.as_bytes()).map_err(|e| Error::Parse(format!("write failed: {e}")))?;
            return Ok(if report.passed { EXIT_OK } else { EXIT_FAIL });
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| Error::Parse(format!("write failed: {e}")))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["juhl"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn coeffs_first_order() {
        let t = coeff_table(4, 1).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].coefficients, vec!["-2", "2"]);
        assert_eq!(t.rows[0].display, "2λ - 2");
        let (code, out, _) = call(&["coeffs", "--n", "4", "--N", "1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["a"], json!([["2λ - 2"]]));
    }

    #[test]
    fn coeffs_csv_second_order() {
        // (2λ)(2λ + 1) = 4λ² + 2λ at n = 3
        let (code, out, _) = call(&["coeffs", "--n", "3", "--N", "2", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(&lines[..4], &["j,power,coefficient", "0,0,0", "0,1,2", "0,2,4"]);
    }

    #[test]
    fn row_count_is_half_order_plus_one() {
        for order in 1..=6 {
            assert_eq!(coeff_table(3, order).unwrap().rows.len(), order as usize / 2 + 1);
        }
    }

    #[test]
    fn latex_has_product_form() {
        let (code, out, _) = call(&["coeffs", "--n", "3", "--N", "2", "--format", "latex"]);
        assert_eq!(code, 0);
        assert!(out.contains("\\prod_{m=3}^{4} (2\\lambda - 3 + m) = (2\\lambda)(2\\lambda + 1)"), "{out}");
        assert!(out.contains("a_{1} &= "));
        assert_eq!(latex_poly(&["1/2".into(), "-1".into(), "3".into()]), "3\\lambda^{2} - \\lambda + \\tfrac{1}{2}");
    }

    #[test]
    fn range_violations_exit_two() {
        for args in [
            ["coeffs", "--n", "0", "--N", "1"],
            ["coeffs", "--n", "9", "--N", "1"],
            ["coeffs", "--n", "3", "--N", "13"],
            ["operator", "--n", "3", "--N", "0"],
        ] {
            let (code, _, err) = call(&args);
            assert_eq!(code, 2, "{args:?}");
            assert!(err.contains("must lie in"));
        }
        assert_eq!(call(&["coeffs", "--n", "x"]).0, 2);
        assert_eq!(call(&["verify", "--tol", "nonsense"]).0, 2);
        assert_eq!(call(&["verify", "--suite", "ambient", "--tol", "bogus=1"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn operator_first_order_two_dims() {
        let (code, out, _) = call(&["operator", "--n", "2", "--N", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let terms = v["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 3);
        let find = |a: [u32; 2]| terms.iter().find(|t| t["multi_index"] == json!(a)).unwrap()["display"].clone();
        assert_eq!(find([0, 1]), json!("2λ"));
        assert_eq!(find([2, 0]), json!("ξ_2"));
        assert_eq!(find([0, 2]), json!("ξ_2"));
        assert_eq!(operator_from_json(&v).unwrap(), build_en(2, 1));
    }

    #[test]
    fn operator_round_trip_and_term_count() {
        for (n, order) in [(2, 2), (3, 3), (1, 4)] {
            let op = build_en(n, order);
            let v = operator_to_json(&op, order);
            let text = serde_json::to_string(&v).unwrap();
            let back = operator_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, op);
        }
        assert_eq!(build_en(2, 2).len(), 7);
    }

    #[test]
    fn operator_parse_rejects_garbage() {
        let mut v = operator_to_json(&build_en(2, 1), 1);
        v["terms"][0]["coefficient"][0][2] = json!("0");
        assert!(matches!(operator_from_json(&v), Err(Error::Parse(_))));
        let mut v = operator_to_json(&build_en(2, 1), 1);
        v["variables"] = json!(["λ", "x", "y"]);
        assert!(operator_from_json(&v).is_err());
    }

    #[test]
    fn big_coefficients_survive() {
        let p = Poly::constant(operator_vars(1), Rational::new(10u64.pow(18).into(), 7.into()) * Rational::from_integer(10u64.pow(18).into()));
        let back = poly_from_json(&poly_to_json(&p), operator_vars(1)).unwrap();
        assert_eq!(back, p);
    }
}
