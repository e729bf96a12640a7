mod doc;
mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use doc::MatrixDocument;
use report::{complex, num, num_list, Report};
use uqg::fusion::BigUint;
use uqg::{
    au_invariant, bu_descriptor, bu_isomorphic, decompose_au, decompose_bu, fuse,
    min_dim_sequence, verify_fusion_dims, Atom, BuIso, ComplexMatrix, Error, FreeWord,
    GroupExpression, Tolerance,
};

/// Classification of the universal quantum groups A_u(Q) and B_u(Q).
#[derive(Parser)]
#[command(name = "uqg", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix document path; repeat for two-matrix commands, or omit one to
    /// read it from stdin.
    #[arg(long = "matrix")]
    matrix: Vec<PathBuf>,
    /// Equality tolerance; clustering and singularity thresholds derive from it.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for the degenerate-orbit search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit block partition as a JSON array of index arrays.
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the isomorphism invariant of a parameter matrix.
    Classify {
        #[command(subcommand)]
        family: Family,
    },
    /// Decide whether two parameter matrices give isomorphic quantum groups.
    Isomorphic {
        #[command(subcommand)]
        family: Family,
    },
    /// Decompose a parameter into a free product of indecomposable factors.
    Decompose {
        #[command(subcommand)]
        family: Family,
    },
    /// Emit a canonical representative parameter for the isomorphism class.
    Canon {
        #[command(subcommand)]
        family: Family,
    },
    /// Fusion-ring dimension arithmetic of the fundamental representation.
    Fusion {
        #[command(subcommand)]
        op: FusionOp,
    },
}

#[derive(Subcommand)]
enum Family {
    Au(MatrixArgs),
    Bu(MatrixArgs),
}

#[derive(Subcommand)]
enum FusionOp {
    /// Minimal dimensions by word length: f(0..=max_len).
    Dims {
        #[arg(long)]
        n: u64,
        #[arg(long = "max-len")]
        max_len: usize,
    },
    /// Fusion product of two words over {a, b}.
    Product {
        x: String,
        y: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Exhaustive check of the fusion formula up to a word length.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long = "max-len")]
        max_len: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = dispatch(&cli.command);
    println!("{}", report.to_json());
    ExitCode::from(report.exit_code() as u8)
}

fn err_report(cmd: &str, e: Error) -> Report {
    match e {
        Error::Undecidable => Report::undecided(cmd, e.to_string()),
        Error::UnsupportedInput(_) | Error::AmbiguousClustering(_) => {
            let code = e.code();
            Report::unsupported(cmd, code, e.to_string())
        }
        _ => Report::error(cmd, e.code(), e.to_string()),
    }
}

fn read_matrices(args: &MatrixArgs, want: usize, cmd: &str) -> Result<Vec<ComplexMatrix>, Report> {
    let mut docs: Vec<MatrixDocument> = Vec::new();
    for path in &args.matrix {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Report::error(cmd, "invalid_matrix", format!("{}: {e}", path.display())))?;
        docs.push(parse_doc(&text, cmd)?);
    }
    if docs.len() < want {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Report::error(cmd, "invalid_matrix", format!("stdin: {e}")))?;
        docs.push(parse_doc(&text, cmd)?);
    }
    if docs.len() != want {
        return Err(Report::error(
            cmd,
            "invalid_matrix",
            format!("expected {want} matrix input(s), got {}", docs.len()),
        ));
    }
    docs.iter()
        .map(|d| d.to_matrix().map_err(|m| Report::error(cmd, "invalid_matrix", m)))
        .collect()
}

fn parse_doc(text: &str, cmd: &str) -> Result<MatrixDocument, Report> {
    serde_json::from_str(text).map_err(|e| Report::error(cmd, "invalid_matrix", e.to_string()))
}

fn tolerance(args: &MatrixArgs, cmd: &str) -> Result<Tolerance, Report> {
    Tolerance::from_eq(args.tol).map_err(|e| Report::error(cmd, e.code(), e.to_string()))
}

fn parse_partition(args: &MatrixArgs, cmd: &str) -> Result<Option<Vec<Vec<usize>>>, Report> {
    match &args.partition {
        None => Ok(None),
        Some(text) => serde_json::from_str(text)
            .map(Some)
            .map_err(|e| Report::error(cmd, "invalid_matrix", format!("partition: {e}"))),
    }
}

fn fmt_float(x: f64) -> String {
    let r = report::sig12(x);
    if r == r.trunc() && r.abs() < 1e15 {
        format!("{r:.1}")
    } else {
        format!("{r}")
    }
}

fn atom_label(atom: &Atom) -> String {
    match atom {
        Atom::Circle => "C(T)".into(),
        Atom::Z2 => "C*(Z2)".into(),
        Atom::Au(inv) => {
            let entries: Vec<String> = inv.spectrum.iter().map(|&v| fmt_float(v)).collect();
            format!("A_u(diag({}))", entries.join(","))
        }
        Atom::Bu(d) => {
            let entries: Vec<String> = d.mu.mu.iter().map(|&v| fmt_float(v)).collect();
            format!("B_u(n={},c={:+},mu=[{}])", d.n, d.c, entries.join(","))
        }
    }
}

fn matrix_value(q: &ComplexMatrix) -> Value {
    let d = MatrixDocument::from_matrix(q);
    let mut m = Map::new();
    m.insert("n".into(), json!(d.n));
    m.insert(
        "data".into(),
        Value::Array(
            d.data
                .iter()
                .map(|row| Value::Array(row.iter().map(|&[re, im]| complex(re, im)).collect()))
                .collect(),
        ),
    );
    Value::Object(m)
}

fn expression_value(e: &GroupExpression) -> Value {
    json!({ "atoms": e.atoms().iter().map(atom_label).collect::<Vec<_>>() })
}

fn dispatch(cmd: &Command) -> Report {
    match cmd {
        Command::Classify { family: Family::Au(args) } => classify_au(args),
        Command::Classify { family: Family::Bu(args) } => classify_bu(args),
        Command::Isomorphic { family: Family::Au(args) } => isomorphic_au(args),
        Command::Isomorphic { family: Family::Bu(args) } => isomorphic_bu(args),
        Command::Decompose { family: Family::Au(args) } => decompose_cmd(args, true),
        Command::Decompose { family: Family::Bu(args) } => decompose_cmd(args, false),
        Command::Canon { family: Family::Au(args) } => canon_au(args),
        Command::Canon { family: Family::Bu(args) } => canon_bu(args),
        Command::Fusion { op } => fusion_cmd(op),
    }
}

fn classify_au(args: &MatrixArgs) -> Report {
    let cmd = "classify au";
    let (q, tol) = match (read_matrices(args, 1, cmd), tolerance(args, cmd)) {
        (Ok(mut v), Ok(t)) => (v.remove(0), t),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    match au_invariant(&q, &tol) {
        Ok(inv) => Report::ok(cmd, json!({ "invariant": num_list(&inv.spectrum) })),
        Err(e) => err_report(cmd, e),
    }
}

fn classify_bu(args: &MatrixArgs) -> Report {
    let cmd = "classify bu";
    let (q, tol) = match (read_matrices(args, 1, cmd), tolerance(args, cmd)) {
        (Ok(mut v), Ok(t)) => (v.remove(0), t),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    match bu_descriptor(&q, &tol) {
        Ok(d) => {
            let mut p = Map::new();
            p.insert("n".into(), json!(d.n));
            p.insert("c".into(), json!(d.c));
            p.insert("mu".into(), num_list(&d.mu.mu));
            Report::ok(cmd, Value::Object(p))
        }
        Err(e) => err_report(cmd, e),
    }
}

fn isomorphic_au(args: &MatrixArgs) -> Report {
    let cmd = "isomorphic au";
    let (qs, tol) = match (read_matrices(args, 2, cmd), tolerance(args, cmd)) {
        (Ok(v), Ok(t)) => (v, t),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    match uqg::au_isomorphic(&qs[0], &qs[1], &tol) {
        Ok(ans) => Report::ok(cmd, json!({ "isomorphic": ans })),
        Err(e) => err_report(cmd, e),
    }
}

fn isomorphic_bu(args: &MatrixArgs) -> Report {
    let cmd = "isomorphic bu";
    let (qs, tol) = match (read_matrices(args, 2, cmd), tolerance(args, cmd)) {
        (Ok(v), Ok(t)) => (v, t),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    match bu_isomorphic(&qs[0], &qs[1], &tol, args.seed) {
        Ok(BuIso::Yes { z, residual, .. }) => Report::ok(
            cmd,
            json!({ "isomorphic": true, "z": complex(z.re, z.im), "residual": num(residual) }),
        ),
        Ok(BuIso::No) => Report::ok(cmd, json!({ "isomorphic": false })),
        Ok(BuIso::Undecided) => {
            Report::undecided(cmd, "orbit search exhausted its budget".into())
        }
        Err(e) => err_report(cmd, e),
    }
}

fn decompose_cmd(args: &MatrixArgs, is_au: bool) -> Report {
    let cmd = if is_au { "decompose au" } else { "decompose bu" };
    let (q, tol) = match (read_matrices(args, 1, cmd), tolerance(args, cmd)) {
        (Ok(mut v), Ok(t)) => (v.remove(0), t),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    let result = if is_au {
        decompose_au(&q, &tol)
    } else {
        let partition = match parse_partition(args, cmd) {
            Ok(p) => p,
            Err(r) => return r,
        };
        decompose_bu(&q, &tol, partition.as_deref())
    };
    match result {
        Ok(e) => Report::ok(cmd, expression_value(&e)),
        Err(e) => err_report(cmd, e),
    }
}

fn canon_au(args: &MatrixArgs) -> Report {
    let cmd = "canon au";
    let (q, tol) = match (read_matrices(args, 1, cmd), tolerance(args, cmd)) {
        (Ok(mut v), Ok(t)) => (v.remove(0), t),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    match au_invariant(&q, &tol) {
        Ok(inv) => {
            let canon = ComplexMatrix::from_real_diagonal(&inv.spectrum);
            Report::ok(cmd, json!({ "matrix": matrix_value(&canon) }))
        }
        Err(e) => err_report(cmd, e),
    }
}

fn canon_bu(args: &MatrixArgs) -> Report {
    let cmd = "canon bu";
    let (q, tol) = match (read_matrices(args, 1, cmd), tolerance(args, cmd)) {
        (Ok(mut v), Ok(t)) => (v.remove(0), t),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    match bu_descriptor(&q, &tol) {
        Ok(d) => Report::ok(cmd, json!({ "matrix": matrix_value(&d.representative()) })),
        Err(e) => err_report(cmd, e),
    }
}

fn big_value(b: &BigUint) -> Value {
    match u64::try_from(b) {
        Ok(v) => json!(v),
        Err(_) => json!(b.to_string()),
    }
}

fn fusion_cmd(op: &FusionOp) -> Report {
    match op {
        FusionOp::Dims { n, max_len } => {
            let cmd = "fusion dims";
            match min_dim_sequence(*n, *max_len) {
                Ok(seq) => Report::ok(
                    cmd,
                    json!({ "f": seq.iter().map(big_value).collect::<Vec<_>>() }),
                ),
                Err(e) => err_report(cmd, e),
            }
        }
        FusionOp::Product { x, y, n } => {
            let cmd = "fusion product";
            let (wx, wy) = match (FreeWord::parse(x), FreeWord::parse(y)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return err_report(cmd, e),
            };
            let terms: Vec<Value> = fuse(&wx, &wy)
                .iter()
                .map(|(w, mult)| json!({ "word": w.to_string(), "mult": mult }))
                .collect();
            let mut p = Map::new();
            p.insert("terms".into(), Value::Array(terms));
            if let Some(n) = n {
                match uqg::fusion::DimensionTable::new(*n) {
                    Ok(mut table) => {
                        let lhs = table.dim(&wx) * table.dim(&wy);
                        let rhs: uqg::fusion::BigUint = fuse(&wx, &wy)
                            .iter()
                            .map(|(w, mult)| table.dim(w) * *mult)
                            .sum();
                        p.insert("dim_product".into(), big_value(&lhs));
                        p.insert("dim_sum".into(), big_value(&rhs));
                    }
                    Err(e) => return err_report(cmd, e),
                }
            }
            Report::ok(cmd, Value::Object(p))
        }
        FusionOp::Verify { n, max_len } => {
            let cmd = "fusion verify";
            match verify_fusion_dims(*n, *max_len) {
                Ok(r) => Report::ok(
                    cmd,
                    json!({
                        "formula_ok": r.formula_ok,
                        "minimality_ok": r.minimality_ok,
                        "swap_ok": r.swap_ok,
                        "counterexamples": r.counterexamples,
                    }),
                ),
                Err(e) => err_report(cmd, e),
            }
        }
    }
}
