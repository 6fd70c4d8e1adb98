//! The `cleaved` command-line interface.
//!
//! Subcommands:
//!   basis --n N                 enumerate the generators of I_{2N}
//!   zmap <diagram-file>         partition matrix of a planar diagram
//!   compose <R> <i> <T>         glue diagram T into boundary i of R
//!   jones <tangle-file>         Jones polynomial of a closed tangle
//!   ztangle <tangle-file>       partition matrix of a tangle
//!   braid-rep --strands K <w>   representation matrix of a braid word
//!   pairing --n N               gram matrix of the annular pairing
//!   tl-matrices --n N           Temperley-Lieb generator matrices on I_{2N}
//!   tl-kernels --n N            generator matrices with verified kernels
//!   validate [--strict] <file>  check a diagram or tangle file
//!   mirror <tangle-file>        flip every crossing
//!   skein-check <tangle-file>   verify the skein relation at each crossing
//!
//! `--format {text,json}` selects the output encoding. Exit codes: 0 on
//! success, 1 on a domain error, 2 on a parse or usage error.

use crate::braid::{braid_rep, BraidWord};
use crate::cleaved::{display_basis, display_label, CleavedLink};
use crate::diagram::PlanarDiagram;
use crate::partition::{gram_view, pairing_matrix, partition_map, PartitionMatrix};
use crate::ring::HalfLaurent;
use crate::tangle::TangleDiagram;
use crate::tlcompare::{
    i4_generator_kernel, i4_joint_kernel, i4_vector, kernel_membership, tl_generator_matrices,
    RingMatrix,
};
use std::fmt::Write as _;
use std::io::Write;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

struct Invocation {
    format: Format,
    command: String,
    strict: bool,
    n: Option<u32>,
    strands: Option<u32>,
    positional: Vec<String>,
}

fn usage() -> &'static str {
    "usage: cleaved <command> [options]\n\
     commands:\n\
     \x20 basis --n N                enumerate the generators of I_{2N}\n\
     \x20 zmap <diagram-file>        partition matrix of a planar diagram\n\
     \x20 compose <R> <i> <T>        glue diagram T into boundary i of R\n\
     \x20 jones <tangle-file>        Jones polynomial of a closed tangle\n\
     \x20 ztangle <tangle-file>      partition matrix of a tangle\n\
     \x20 braid-rep --strands K <w>  representation matrix of a braid word\n\
     \x20 pairing --n N              gram matrix of the annular pairing\n\
     \x20 tl-matrices --n N          Temperley-Lieb generator matrices\n\
     \x20 tl-kernels --n N           generator matrices with verified kernels\n\
     \x20 validate [--strict] <file> check a diagram or tangle file\n\
     \x20 mirror <tangle-file>       flip every crossing\n\
     \x20 skein-check <tangle-file>  verify the skein relation per crossing\n\
     options: --format {text,json}\n"
}

/// Run with the given arguments (program name excluded), writing results to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match parse_args(args) {
        Err(msg) => {
            let _ = write!(err, "{}\n{}", msg, usage());
            2
        }
        Ok(inv) => match dispatch(&inv, out) {
            Ok(()) => 0,
            // the reader went away; not our error
            Err(Failure::Pipe) => 0,
            Err(Failure::Domain(msg)) => {
                let _ = writeln!(err, "error: {}", msg);
                1
            }
            Err(Failure::Parse(msg)) => {
                let _ = writeln!(err, "error: {}", msg);
                2
            }
            Err(Failure::Usage(msg)) => {
                let _ = write!(err, "{}\n{}", msg, usage());
                2
            }
        },
    }
}

enum Failure {
    Domain(String),
    Parse(String),
    Usage(String),
    Pipe,
}

fn parse_args(args: &[String]) -> Result<Invocation, String> {
    let mut it = args.iter().peekable();
    let command = match it.next() {
        Some(c) => c.clone(),
        None => return Err("missing command".to_string()),
    };
    let mut inv = Invocation {
        format: Format::Text,
        command,
        strict: false,
        n: None,
        strands: None,
        positional: Vec::new(),
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--format" => {
                let v = it.next().ok_or("--format needs a value")?;
                inv.format = match v.as_str() {
                    "text" => Format::Text,
                    "json" => Format::Json,
                    other => return Err(format!("unknown format `{}`", other)),
                };
            }
            "--strict" => inv.strict = true,
            "--n" => {
                let v = it.next().ok_or("--n needs a value")?;
                inv.n = Some(v.parse().map_err(|_| format!("bad value for --n: `{}`", v))?);
            }
            "--strands" => {
                let v = it.next().ok_or("--strands needs a value")?;
                inv.strands = Some(
                    v.parse()
                        .map_err(|_| format!("bad value for --strands: `{}`", v))?,
                );
            }
            flag if flag.starts_with("--") => return Err(format!("unknown flag `{}`", flag)),
            _ => inv.positional.push(arg.clone()),
        }
    }
    Ok(inv)
}

fn dispatch(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    match inv.command.as_str() {
        "basis" => cmd_basis(inv, out),
        "zmap" => cmd_zmap(inv, out),
        "compose" => cmd_compose(inv, out),
        "jones" => cmd_jones(inv, out),
        "ztangle" => cmd_ztangle(inv, out),
        "braid-rep" => cmd_braid_rep(inv, out),
        "pairing" => cmd_pairing(inv, out),
        "tl-matrices" => cmd_tl_matrices(inv, out),
        "tl-kernels" => cmd_tl_kernels(inv, out),
        "validate" => cmd_validate(inv, out),
        "mirror" => cmd_mirror(inv, out),
        "skein-check" => cmd_skein_check(inv, out),
        other => Err(Failure::Usage(format!("unknown command `{}`", other))),
    }
}

fn need_n(inv: &Invocation) -> Result<u32, Failure> {
    inv.n
        .ok_or_else(|| Failure::Usage("missing --n".to_string()))
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {}", path, e)))
}

fn parse_diagram(path: &str) -> Result<PlanarDiagram, Failure> {
    let text = read_file(path)?;
    PlanarDiagram::parse(&text).map_err(|e| Failure::Parse(format!("{}: {}", path, e)))
}

fn parse_tangle(path: &str) -> Result<TangleDiagram, Failure> {
    let text = read_file(path)?;
    TangleDiagram::parse(&text).map_err(|e| Failure::Parse(format!("{}: {}", path, e)))
}

// ---------------------------------------------------------------------------
// serializers
// ---------------------------------------------------------------------------

fn poly_json(p: &HalfLaurent) -> String {
    let mut s = String::from("[");
    for (i, (e, c)) in p.to_pairs().into_iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "[{},{}]", e, c);
    }
    s.push(']');
    s
}

fn json_string(text: &str) -> String {
    let mut s = String::from("\"");
    for ch in text.chars() {
        match ch {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(s, "\\u{:04x}", c as u32);
            }
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

fn link_json(link: &CleavedLink) -> String {
    let label = match display_label(link) {
        Some(l) => json_string(&l),
        None => "null".to_string(),
    };
    format!(
        "{{\"inside\":{},\"outside\":{},\"decorations\":{},\"label\":{}}}",
        json_string(&link.inside().to_string()),
        json_string(&link.outside().to_string()),
        json_string(&crate::cleaved::signs_to_string(link.decorations())),
        label
    )
}

/// Matrix text form: a basis legend followed by the nonzero entries.
fn matrix_text(z: &PartitionMatrix, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "rows: I_{} basis", 2 * z.row_basis().n())?;
    for (i, link) in z.row_basis().elems().iter().enumerate() {
        writeln!(out, "  row {}: {}", i, link)?;
    }
    if z.col_factors().is_empty() {
        writeln!(out, "columns: scalar (empty product)")?;
    }
    for (k, basis) in z.col_factors().iter().enumerate() {
        writeln!(out, "columns, factor {}: I_{} basis", k, 2 * basis.n())?;
        for (i, link) in basis.elems().iter().enumerate() {
            writeln!(out, "  col {}: {}", i, link)?;
        }
    }
    writeln!(out, "entries ({} nonzero):", z.entries().count())?;
    for (r, c, v) in z.entries() {
        if z.col_factors().len() > 1 {
            let tuple = z.col_tuple(c);
            let parts: Vec<String> = tuple.iter().map(|t| t.to_string()).collect();
            writeln!(out, "  [{}][{}] = {}", r, parts.join(","), v)?;
        } else {
            writeln!(out, "  [{}][{}] = {}", r, c, v)?;
        }
    }
    Ok(())
}

fn matrix_json(z: &PartitionMatrix) -> String {
    let mut s = String::from("{\"rows\":[");
    for (i, link) in z.row_basis().elems().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&link_json(link));
    }
    s.push_str("],\"colFactors\":[");
    for (k, basis) in z.col_factors().iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push('[');
        for (i, link) in basis.elems().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&link_json(link));
        }
        s.push(']');
    }
    s.push_str("],\"entries\":[");
    for (i, (r, c, v)) in z.entries().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "[{},{},{}]", r, c, poly_json(v));
    }
    s.push_str("]}");
    s
}

fn ring_matrix_json(m: &RingMatrix) -> String {
    let mut s = String::from("[");
    for r in 0..m.rows() {
        if r > 0 {
            s.push(',');
        }
        s.push('[');
        for c in 0..m.cols() {
            if c > 0 {
                s.push(',');
            }
            s.push_str(&poly_json(m.at(r, c)));
        }
        s.push(']');
    }
    s.push(']');
    s
}

fn ring_matrix_text(m: &RingMatrix, out: &mut dyn Write) -> std::io::Result<()> {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.at(r, c).to_string()).collect();
        writeln!(out, "[{}]", row.join(", "))?;
    }
    Ok(())
}

fn io_fail(e: std::io::Error) -> Failure {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        Failure::Pipe
    } else {
        Failure::Domain(format!("write failed: {}", e))
    }
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn cmd_basis(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let n = need_n(inv)?;
    let basis = crate::cleaved::enumerate_cleaved(n);
    match inv.format {
        Format::Text => {
            for (i, link) in basis.iter().enumerate() {
                writeln!(out, "{}: {}", i, link).map_err(io_fail)?;
            }
        }
        Format::Json => {
            let mut s = format!("{{\"n\":{},\"elements\":[", n);
            for (i, link) in basis.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&link_json(link));
            }
            s.push_str("]}");
            writeln!(out, "{}", s).map_err(io_fail)?;
        }
    }
    Ok(())
}

fn cmd_zmap(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let path = inv
        .positional
        .first()
        .ok_or_else(|| Failure::Usage("zmap needs a diagram file".to_string()))?;
    let d = parse_diagram(path)?;
    let z = partition_map(&d).map_err(|e| Failure::Domain(e.to_string()))?;
    match inv.format {
        Format::Text => matrix_text(&z, out).map_err(io_fail)?,
        Format::Json => writeln!(out, "{}", matrix_json(&z)).map_err(io_fail)?,
    }
    Ok(())
}

fn cmd_compose(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    if inv.positional.len() != 3 {
        return Err(Failure::Usage("compose needs <R> <i> <T>".to_string()));
    }
    let outer = parse_diagram(&inv.positional[0])?;
    let i: usize = inv.positional[1]
        .parse()
        .map_err(|_| Failure::Usage(format!("bad boundary index `{}`", inv.positional[1])))?;
    let inner = parse_diagram(&inv.positional[2])?;
    let composed = outer
        .compose(i, &inner)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    match inv.format {
        Format::Text => write!(out, "{}", composed.serialize()).map_err(io_fail)?,
        Format::Json => writeln!(out, "{{\"diagram\":{}}}", json_string(&composed.serialize()))
            .map_err(io_fail)?,
    }
    Ok(())
}

fn cmd_jones(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let path = inv
        .positional
        .first()
        .ok_or_else(|| Failure::Usage("jones needs a tangle file".to_string()))?;
    let t = parse_tangle(path)?;
    let j = t
        .jones_closed()
        .map_err(|e| Failure::Domain(e.to_string()))?;
    match inv.format {
        Format::Text => writeln!(out, "{}", j).map_err(io_fail)?,
        Format::Json => writeln!(out, "{{\"jones\":{}}}", poly_json(&j)).map_err(io_fail)?,
    }
    Ok(())
}

fn cmd_ztangle(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let path = inv
        .positional
        .first()
        .ok_or_else(|| Failure::Usage("ztangle needs a tangle file".to_string()))?;
    let t = parse_tangle(path)?;
    let z = t
        .partition_tangle()
        .map_err(|e| Failure::Domain(e.to_string()))?;
    match inv.format {
        Format::Text => matrix_text(&z, out).map_err(io_fail)?,
        Format::Json => writeln!(out, "{}", matrix_json(&z)).map_err(io_fail)?,
    }
    Ok(())
}

fn cmd_braid_rep(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let strands = inv
        .strands
        .ok_or_else(|| Failure::Usage("missing --strands".to_string()))?;
    let word_text = inv
        .positional
        .first()
        .map(String::as_str)
        .unwrap_or("");
    let word =
        BraidWord::parse(strands, word_text).map_err(|e| Failure::Parse(e.to_string()))?;
    let z = braid_rep(&word).map_err(|e| Failure::Domain(e.to_string()))?;
    match inv.format {
        Format::Text => matrix_text(&z, out).map_err(io_fail)?,
        Format::Json => writeln!(out, "{}", matrix_json(&z)).map_err(io_fail)?,
    }
    Ok(())
}

fn cmd_pairing(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let n = need_n(inv)?;
    let gram = gram_view(&pairing_matrix(n)).expect("pairing has two factors");
    match inv.format {
        Format::Text => matrix_text(&gram, out).map_err(io_fail)?,
        Format::Json => writeln!(out, "{}", matrix_json(&gram)).map_err(io_fail)?,
    }
    Ok(())
}

fn cmd_tl_matrices(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let n = need_n(inv)?;
    if n == 0 {
        return Err(Failure::Domain(
            "no Temperley-Lieb generators for n = 0".to_string(),
        ));
    }
    let mats = tl_generator_matrices(n);
    match inv.format {
        Format::Text => {
            if n == 2 {
                let labels: Vec<&str> = crate::cleaved::I4_LABELS.to_vec();
                writeln!(out, "basis order: {}", labels.join(", ")).map_err(io_fail)?;
            }
            for (i, m) in mats.iter().enumerate() {
                writeln!(out, "generator at position {}:", i + 1).map_err(io_fail)?;
                ring_matrix_text(m, out).map_err(io_fail)?;
            }
        }
        Format::Json => {
            let mut s = String::from("{\"matrices\":[");
            for (i, m) in mats.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&ring_matrix_json(m));
            }
            s.push_str("]}");
            writeln!(out, "{}", s).map_err(io_fail)?;
        }
    }
    Ok(())
}

fn cmd_tl_kernels(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let n = need_n(inv)?;
    if n != 2 {
        return Err(Failure::Domain(
            "verified kernel bases are available for --n 2".to_string(),
        ));
    }
    let mats = tl_generator_matrices(2);
    let labels: Vec<String> = display_basis(2)
        .iter()
        .map(|l| display_label(l).unwrap())
        .collect();
    let vector_text = |terms: &crate::tlcompare::LabelledVector| -> String {
        terms
            .iter()
            .map(|(label, coeff)| format!("({}) {}", coeff, label))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    match inv.format {
        Format::Text => {
            writeln!(out, "basis order: {}", labels.join(", ")).map_err(io_fail)?;
            for pos in 1..=3u32 {
                writeln!(out, "kernel of the generator at position {}:", pos).map_err(io_fail)?;
                for terms in i4_generator_kernel(pos) {
                    let v = i4_vector(&terms);
                    let ok = kernel_membership(&mats[(pos - 1) as usize], &v);
                    writeln!(out, "  {} [{}]", vector_text(&terms), if ok { "verified" } else { "NOT IN KERNEL" })
                        .map_err(io_fail)?;
                }
            }
            writeln!(out, "joint kernel (all three generators):").map_err(io_fail)?;
            let stacked = RingMatrix::stack(&[&mats[0], &mats[1], &mats[2]]);
            for terms in i4_joint_kernel() {
                let v = i4_vector(&terms);
                let ok = kernel_membership(&stacked, &v);
                writeln!(out, "  {} [{}]", vector_text(&terms), if ok { "verified" } else { "NOT IN KERNEL" })
                    .map_err(io_fail)?;
            }
        }
        Format::Json => {
            let mut s = String::from("{\"kernels\":[");
            for pos in 1..=3u32 {
                if pos > 1 {
                    s.push(',');
                }
                s.push('[');
                for (i, terms) in i4_generator_kernel(pos).iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let v = i4_vector(terms);
                    let ok = kernel_membership(&mats[(pos - 1) as usize], &v);
                    let mut inner = String::from("{\"terms\":[");
                    for (j, (label, coeff)) in terms.iter().enumerate() {
                        if j > 0 {
                            inner.push(',');
                        }
                        let _ = write!(
                            inner,
                            "{{\"generator\":{},\"coefficient\":{}}}",
                            json_string(label),
                            poly_json(coeff)
                        );
                    }
                    let _ = write!(inner, "],\"verified\":{}}}", ok);
                    s.push_str(&inner);
                }
                s.push(']');
            }
            s.push_str("]}");
            writeln!(out, "{}", s).map_err(io_fail)?;
        }
    }
    Ok(())
}

fn cmd_validate(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let path = inv
        .positional
        .first()
        .ok_or_else(|| Failure::Usage("validate needs a file".to_string()))?;
    let t = parse_tangle(path)?;
    match t.validate(inv.strict) {
        Ok(()) => {
            match inv.format {
                Format::Text => writeln!(out, "ok").map_err(io_fail)?,
                Format::Json => writeln!(out, "{{\"ok\":true}}").map_err(io_fail)?,
            }
            Ok(())
        }
        Err(e) => Err(Failure::Domain(e.to_string())),
    }
}

fn cmd_mirror(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let path = inv
        .positional
        .first()
        .ok_or_else(|| Failure::Usage("mirror needs a tangle file".to_string()))?;
    let t = parse_tangle(path)?.mirror();
    match inv.format {
        Format::Text => write!(out, "{}", t.serialize()).map_err(io_fail)?,
        Format::Json => {
            writeln!(out, "{{\"tangle\":{}}}", json_string(&t.serialize())).map_err(io_fail)?
        }
    }
    Ok(())
}

fn cmd_skein_check(inv: &Invocation, out: &mut dyn Write) -> Result<(), Failure> {
    let path = inv
        .positional
        .first()
        .ok_or_else(|| Failure::Usage("skein-check needs a tangle file".to_string()))?;
    let t = parse_tangle(path)?;
    let z = t
        .unshifted_partition()
        .map_err(|e| Failure::Domain(e.to_string()))?;
    let minus_q = HalfLaurent::monomial(2, -1);
    let mut all_ok = true;
    let mut lines = Vec::new();
    for c in 0..t.crossing_count() as u32 {
        let z0 = t
            .resolve_crossing(c, 0)
            .unshifted_partition()
            .map_err(|e| Failure::Domain(e.to_string()))?;
        let z1 = t
            .resolve_crossing(c, 1)
            .unshifted_partition()
            .map_err(|e| Failure::Domain(e.to_string()))?;
        let mut rhs = z0;
        rhs.add_assign_scaled(&z1, &minus_q);
        let ok = rhs == z;
        all_ok &= ok;
        lines.push((c, ok));
    }
    match inv.format {
        Format::Text => {
            for (c, ok) in &lines {
                writeln!(out, "crossing {}: {}", c, if *ok { "ok" } else { "FAILED" })
                    .map_err(io_fail)?;
            }
            writeln!(out, "{}", if all_ok { "skein relation holds" } else { "skein relation FAILED" })
                .map_err(io_fail)?;
        }
        Format::Json => {
            let per: Vec<String> = lines
                .iter()
                .map(|(c, ok)| format!("{{\"crossing\":{},\"ok\":{}}}", c, ok))
                .collect();
            writeln!(out, "{{\"crossings\":[{}],\"ok\":{}}}", per.join(","), all_ok)
                .map_err(io_fail)?;
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Domain("skein relation failed".to_string()))
    }
}
