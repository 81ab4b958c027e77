//! The `u11` command line: argument parsing, report assembly and rendering.
//!
//! Exit status is 0 on success, 1 when a verification finds a failure and 2 on a
//! usage error (bad flags or inputs the library rejects).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::{split_prime_power, FieldTower, Layer};
use crate::finituni::{enumerate_group_bounded, Variant, DEFAULT_BOUND};
use crate::hecke::{supersingular_table, FiniteHecke, HeckeModule1D};
use crate::langlands::cgroup::{
    c_correspond, c_d, c_equiv, c_oracle, c_param_json, c_params, omega1_on_quadratic,
    parse_c_param, HalfOmega,
};
use crate::langlands::{
    classes, correspond, g_params, intertwiner_oracle, param_equiv, param_json, parse_param,
    transfer, LParam,
};
use crate::reps::{
    classify, label_json, label_text, packet_of, supercuspidal_packets, IrrepLabel, LPacket,
};

const SOURCE: &str = "exact classification of mod-p representations of U(1,1)(Q_{p²}/Q_p)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Md => "md",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "u11",
    version,
    about = "Mod-p representations of U(1,1)(Q_{p²}/Q_p)"
)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Also write the report to <DIR>/<command>.<ext>.
    #[arg(long, env = "U11_OUT_DIR", global = true)]
    pub out_dir: Option<PathBuf>,
    /// Largest q for which groups are enumerated.
    #[arg(long, default_value_t = DEFAULT_BOUND, global = true)]
    pub bound: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PrimeArgs {
    #[arg(long)]
    pub p: u64,
    /// λ ranges over F_{p^K}^×.
    #[arg(long = "lambda-ext", value_name = "K")]
    pub lambda_ext: Option<u32>,
}

impl PrimeArgs {
    fn tower(&self, default_ext: u32) -> Result<(FieldTower, u32)> {
        let k = self.lambda_ext.unwrap_or(default_ext);
        if k == 0 {
            return Err(Error::BadDegree("--lambda-ext must be positive".into()));
        }
        Ok((FieldTower::new(self.p, 1, k)?, k))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every irreducible label.
    Classify(PrimeArgs),
    /// List L-packets.
    Packets(PrimeArgs),
    /// List equivalence classes of G-parameters.
    Params {
        #[command(flatten)]
        prime: PrimeArgs,
        #[arg(long)]
        c_group: bool,
        #[arg(long, default_value = "standard")]
        half: HalfOmega,
    },
    /// Packet attached to a parameter given as JSON.
    Correspond {
        #[command(flatten)]
        prime: PrimeArgs,
        #[arg(long)]
        param: String,
        #[arg(long, default_value = "standard")]
        half: HalfOmega,
    },
    /// Endoscopic transfer of ω^k ⊗ ω^ℓ.
    Transfer {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
    },
    /// Exhaustive self-checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Print a finite unitary group.
    DumpGroup {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "u11")]
        variant: Variant,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Check the Hecke relations for the supersingular table.
    Hecke {
        #[arg(long)]
        q: u64,
        /// Override a scalar, e.g. `0:a_s_prime=1`.
        #[arg(long = "set", value_name = "LABEL:FIELD=VALUE")]
        overrides: Vec<String>,
    },
    /// Compare the intertwiner search with the closed-form equivalence.
    Oracle {
        #[command(flatten)]
        prime: PrimeArgs,
        #[arg(long)]
        c_group: bool,
        #[arg(long, default_value = "standard")]
        half: HalfOmega,
    },
}

struct Table {
    title: String,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

struct Report {
    name: &'static str,
    ok: bool,
    json: Value,
    tables: Vec<Table>,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut out = String::new();
                for (i, table) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(&table.columns).expect("in-memory write");
                    for row in &table.rows {
                        w.write_record(row).expect("in-memory write");
                    }
                    out.push_str(
                        &String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"),
                    );
                }
                out
            }
            Format::Md => {
                let mut out = String::new();
                for table in &self.tables {
                    let _ = writeln!(out, "## {}\n", table.title);
                    let _ = writeln!(out, "_Source: {SOURCE}._\n");
                    let _ = writeln!(out, "| {} |", table.columns.join(" | "));
                    let _ = writeln!(out, "|{}", "---|".repeat(table.columns.len()));
                    for row in &table.rows {
                        let cells: Vec<String> =
                            row.iter().map(|c| c.replace('|', "\\|")).collect();
                        let _ = writeln!(out, "| {} |", cells.join(" | "));
                    }
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn lambda_text(t: &FieldTower, x: crate::ffield::FFElem) -> Result<String> {
    t.format(x, t.layer_degree(Layer::Lambda), "g")
}

fn label_row(t: &FieldTower, l: &IrrepLabel) -> Result<Vec<String>> {
    let (k, r, lam) = match *l {
        IrrepLabel::Char { k } | IrrepLabel::Steinberg { k } => {
            (k.to_string(), String::new(), String::new())
        }
        IrrepLabel::Supercuspidal { k, r } => (k.to_string(), r.to_string(), String::new()),
        IrrepLabel::PrincipalSeries { r, lambda } => {
            (String::new(), r.to_string(), lambda_text(t, lambda)?)
        }
    };
    Ok(vec![
        l.type_name().to_string(),
        k,
        r,
        lam,
        label_text(t, l)?,
    ])
}

fn packet_text(t: &FieldTower, pk: &LPacket) -> Result<String> {
    let parts: Result<Vec<String>> = pk.members().iter().map(|l| label_text(t, l)).collect();
    Ok(format!("{{{}}}", parts?.join(", ")))
}

fn run_classify(args: &PrimeArgs) -> Result<Report> {
    let (t, k) = args.tower(1)?;
    let labels = classify(&t, k)?;
    let rows: Result<Vec<_>> = labels.iter().map(|l| label_row(&t, l)).collect();
    let json_labels: Result<Vec<_>> = labels.iter().map(|l| label_json(&t, l)).collect();
    Ok(Report {
        name: "classify",
        ok: true,
        json: json!({"p": t.p(), "lambda_ext": k, "count": labels.len(), "labels": json_labels?}),
        tables: vec![Table {
            title: format!("Irreducible representations, p = {}", t.p()),
            columns: vec!["type", "k", "r", "lambda", "label"],
            rows: rows?,
        }],
    })
}

fn run_packets(args: &PrimeArgs) -> Result<Report> {
    let (t, k) = args.tower(1)?;
    let p = t.p();
    let mut packets: Vec<LPacket> = (0..=p)
        .flat_map(|k| [IrrepLabel::Char { k }, IrrepLabel::Steinberg { k }])
        .map(|l| packet_of(p, &l))
        .collect();
    packets.extend(supercuspidal_packets(p));
    packets.sort();
    let ps: Vec<LPacket> = classify(&t, k)?
        .into_iter()
        .filter(|l| matches!(l, IrrepLabel::PrincipalSeries { .. }))
        .map(|l| packet_of(p, &l))
        .collect();
    let mut rows = Vec::new();
    for (kind, list) in [("packet", &packets), ("principal_series", &ps)] {
        for pk in list.iter() {
            rows.push(vec![
                kind.to_string(),
                pk.len().to_string(),
                packet_text(&t, pk)?,
            ]);
        }
    }
    let js =
        |list: &[LPacket]| -> Result<Vec<Value>> { list.iter().map(|pk| pk.to_json(&t)).collect() };
    Ok(Report {
        name: "packets",
        ok: true,
        json: json!({
            "p": p,
            "lambda_ext": k,
            "count": packets.len(),
            "supercuspidal_count": packets.iter().filter(|pk| pk.is_supercuspidal()).count(),
            "packets": js(&packets)?,
            "principal_series": js(&ps)?,
        }),
        tables: vec![Table {
            title: format!("L-packets, p = {p}"),
            columns: vec!["kind", "size", "members"],
            rows,
        }],
    })
}

fn run_params(args: &PrimeArgs, c_group: bool, half: HalfOmega) -> Result<Report> {
    let (t, k) = args.tower(1)?;
    let p = t.p();
    let mut out = Vec::new();
    let mut rows = Vec::new();
    if c_group {
        let all = c_params(&t, k)?;
        let cls = classes(&all, |a, b| c_equiv(&t, a, b))?;
        let omega1 = omega1_on_quadratic(p)?;
        for class in &cls {
            let members: Result<Vec<Value>> = class.iter().map(|a| c_param_json(&t, a)).collect();
            let packet = c_correspond(&t, &class[0], half)?;
            let d_ok = class
                .iter()
                .map(|a| c_d(&t, a, half))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|d| *d == omega1);
            rows.push(vec![
                c_param_json(&t, &class[0])?.to_string(),
                class.len().to_string(),
                d_ok.to_string(),
                packet_text(&t, &packet)?,
            ]);
            out.push(json!({
                "members": members?,
                "d_is_omega1": d_ok,
                "packet": packet.to_json(&t)?,
            }));
        }
    } else {
        let all = g_params(&t, k)?;
        let cls = classes(&all, |a, b| param_equiv(&t, a, b))?;
        for class in &cls {
            let members: Result<Vec<Value>> = class.iter().map(|a| param_json(&t, a)).collect();
            let regular = class.iter().all(|a| a.is_regular());
            let packet = correspond(&t, &class[0])?;
            rows.push(vec![
                param_json(&t, &class[0])?.to_string(),
                class.len().to_string(),
                regular.to_string(),
                packet_text(&t, &packet)?,
            ]);
            out.push(json!({
                "members": members?,
                "regular": regular,
                "packet": packet.to_json(&t)?,
            }));
        }
    }
    let regular_endo = if c_group {
        Value::Null
    } else {
        json!(classes(
            &g_params(&t, k)?
                .into_iter()
                .filter(|a| matches!(a, LParam::Endo { .. }) && a.is_regular())
                .collect::<Vec<_>>(),
            |a, b| param_equiv(&t, a, b)
        )?
        .len())
    };
    let third = if c_group { "d_is_omega1" } else { "regular" };
    Ok(Report {
        name: "params",
        ok: true,
        json: json!({
            "p": p,
            "lambda_ext": k,
            "c_group": c_group,
            "half": if c_group { json!(half) } else { Value::Null },
            "class_count": out.len(),
            "regular_endoscopic_classes": regular_endo,
            "classes": out,
        }),
        tables: vec![Table {
            title: format!(
                "{}-parameter classes, p = {p}",
                if c_group { "C" } else { "L" }
            ),
            columns: vec!["representative", "size", third, "packet"],
            rows,
        }],
    })
}

fn run_correspond(args: &PrimeArgs, param: &str, half: HalfOmega) -> Result<Report> {
    let (t, k) = args.tower(1)?;
    let v: Value = serde_json::from_str(param).map_err(|e| Error::Parse(e.to_string()))?;
    let is_c = v
        .get("type")
        .and_then(|x| x.as_str())
        .is_some_and(|s| s.starts_with("c_"));
    let (echo, packet) = if is_c {
        let a = parse_c_param(&t, &v)?;
        (c_param_json(&t, &a)?, c_correspond(&t, &a, half)?)
    } else {
        let a = parse_param(&t, &v)?;
        (param_json(&t, &a)?, correspond(&t, &a)?)
    };
    Ok(Report {
        name: "correspond",
        ok: true,
        json: json!({"p": t.p(), "lambda_ext": k, "param": echo, "packet": packet.to_json(&t)?}),
        tables: vec![packet_table(&t, "Packet", &packet)?],
    })
}

fn packet_table(t: &FieldTower, title: &str, packet: &LPacket) -> Result<Table> {
    let rows: Result<Vec<_>> = packet.members().iter().map(|l| label_row(t, l)).collect();
    Ok(Table {
        title: format!("{title}, p = {}", t.p()),
        columns: vec!["type", "k", "r", "lambda", "label"],
        rows: rows?,
    })
}

fn run_transfer(p: u64, k: u64, l: u64) -> Result<Report> {
    let t = FieldTower::new(p, 1, 1)?;
    let packet = transfer(&t, k, l)?;
    Ok(Report {
        name: "transfer",
        ok: true,
        json: json!({"p": p, "k": k % (p + 1), "l": l % (p + 1), "packet": packet.to_json(&t)?}),
        tables: vec![packet_table(
            &t,
            &format!("Transfer of w^{k} ⊗ w^{l}"),
            &packet,
        )?],
    })
}

fn apply_override(table: &mut [HeckeModule1D], arg: &str) -> Result<()> {
    let bad = || Error::Parse(format!("expected LABEL:FIELD=VALUE, got {arg:?}"));
    let (label, rest) = arg.split_once(':').ok_or_else(bad)?;
    let (field, value) = rest.split_once('=').ok_or_else(bad)?;
    let label: u64 = label.trim_start_matches("M_").parse().map_err(|_| bad())?;
    let value: i64 = value.parse().map_err(|_| bad())?;
    let m = table
        .iter_mut()
        .find(|m| m.label == label)
        .ok_or_else(|| Error::OutOfRange(format!("no module M_{label}")))?;
    match field {
        "a_s" => m.a_s = value,
        "a_s_prime" => m.a_s_prime = value,
        _ => return Err(bad()),
    }
    Ok(())
}

fn run_verify_hecke(q: u64, overrides: &[String], bound: u64) -> Result<Report> {
    let (p, f) = split_prime_power(q)?;
    if q > bound {
        return Err(Error::BoundExceeded { q, bound });
    }
    let t = FieldTower::new(p, f, 1)?;
    let mut table = supersingular_table(q)?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let report = FiniteHecke::new(&t)?.validate_modules(&table)?;
    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut js = report.to_json();
    js["modules"] = Value::Array(table.iter().map(|m| m.to_json()).collect());
    js["failures"] = json!(report.failures());
    Ok(Report {
        name: "verify-hecke",
        ok: report.passed(),
        json: js,
        tables: vec![Table {
            title: format!("Hecke relations, q = {q}"),
            columns: vec!["check", "result"],
            rows,
        }],
    })
}

fn run_verify_oracle(args: &PrimeArgs, c_group: bool, half: HalfOmega) -> Result<Report> {
    let (t, k) = args.tower(2)?;
    let mut disagreements = Vec::new();
    let mut pairs = 0usize;
    if c_group {
        let all = c_params(&t, k)?;
        for a in &all {
            for b in &all {
                pairs += 1;
                let (x, y) = (c_equiv(&t, a, b)?, c_oracle(&t, a, b, half)?);
                if x != y {
                    disagreements.push(json!({
                        "a": c_param_json(&t, a)?, "b": c_param_json(&t, b)?,
                        "closed_form": x, "oracle": y,
                    }));
                }
            }
        }
    } else {
        let all = g_params(&t, k)?;
        for a in &all {
            for b in &all {
                pairs += 1;
                let (x, y) = (param_equiv(&t, a, b)?, intertwiner_oracle(&t, a, b)?);
                if x != y {
                    disagreements.push(json!({
                        "a": param_json(&t, a)?, "b": param_json(&t, b)?,
                        "closed_form": x, "oracle": y,
                    }));
                }
            }
        }
    }
    let rows = disagreements
        .iter()
        .map(|d| {
            vec![
                d["a"].to_string(),
                d["b"].to_string(),
                d["closed_form"].to_string(),
                d["oracle"].to_string(),
            ]
        })
        .collect();
    Ok(Report {
        name: "verify-oracle",
        ok: disagreements.is_empty(),
        json: json!({
            "p": t.p(),
            "lambda_ext": k,
            "c_group": c_group,
            "pairs": pairs,
            "disagreements": disagreements,
        }),
        tables: vec![Table {
            title: format!("Oracle disagreements over {pairs} pairs, p = {}", t.p()),
            columns: vec!["a", "b", "closed_form", "oracle"],
            rows,
        }],
    })
}

fn run_dump_group(q: u64, variant: Variant, bound: u64) -> Result<Report> {
    let (p, f) = split_prime_power(q)?;
    let t = FieldTower::new(p, f, 1)?;
    let table = enumerate_group_bounded(&t, variant, bound)?;
    let d2 = t.layer_degree(Layer::Quadratic);
    let mut rows = Vec::with_capacity(table.len());
    for (i, g) in table.elements().iter().enumerate() {
        let mut row = vec![i.to_string()];
        for x in g.entries() {
            row.push(t.format(x, d2, "w")?);
        }
        rows.push(row);
    }
    Ok(Report {
        name: "dump-group",
        ok: true,
        json: table.to_json(&t)?,
        tables: vec![Table {
            title: format!("{variant:?} over F_{q}, order {}", table.len()),
            columns: vec!["index", "a", "b", "c", "d"],
            rows,
        }],
    })
}

fn dispatch(cfg: &RunConfig) -> Result<Report> {
    match &cfg.command {
        Command::Classify(a) => run_classify(a),
        Command::Packets(a) => run_packets(a),
        Command::Params {
            prime,
            c_group,
            half,
        } => run_params(prime, *c_group, *half),
        Command::Correspond { prime, param, half } => run_correspond(prime, param, *half),
        Command::Transfer { p, k, l } => run_transfer(*p, *k, *l),
        Command::Verify(Verify::Hecke { q, overrides }) => {
            run_verify_hecke(*q, overrides, cfg.bound)
        }
        Command::Verify(Verify::Oracle {
            prime,
            c_group,
            half,
        }) => run_verify_oracle(prime, *c_group, *half),
        Command::DumpGroup { q, variant } => run_dump_group(*q, *variant, cfg.bound),
    }
}

/// Runs one command line (argv[0] is the program name). Returns the exit status
/// and everything meant for stdout; errors are rendered into the returned text.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let report = match dispatch(&cfg) {
        Ok(r) => r,
        Err(e) => return (2, format!("error: {e}\n")),
    };
    let text = report.render(cfg.format);
    if let Some(dir) = &cfg.out_dir {
        let path = dir.join(format!("{}.{}", report.name, cfg.format.extension()));
        if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, &text)) {
            return (2, format!("error: cannot write {}: {e}\n", path.display()));
        }
    }
    (if report.ok { 0 } else { 1 }, text)
}
