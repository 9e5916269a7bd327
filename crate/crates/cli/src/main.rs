//! `ngon-xc`: slack matrices of regular n-gons, their small nonnegative
//! factorizations, and extension-complexity bounds.
//!
//! Exit codes: 0 success/verified, 1 verification or construction failure,
//! 2 usage or input error, 3 covering search stopped by the node budget.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ngon_core::{
    bounds_row_with_budget, minimize_fkz, read_factorization, read_matrix, rectangle_cover_number,
    recursive_factorize, slack_matrix, support_pattern, verify_factorization, write_factorization,
    write_matrix, BoundsRow, DEFAULT_NODE_BUDGET, RCB_TABLE_MAX_N,
};

#[derive(Parser)]
#[command(
    name = "ngon-xc",
    version,
    about = "Extension-complexity toolkit for regular n-gons"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate all lower bounds, the factorization upper bound, and the gap
    /// for a range of n, as CSV (or a markdown table).
    BoundsTable {
        /// First n of the range
        #[arg(long, default_value_t = 3)]
        from: u64,
        /// Last n of the range (inclusive)
        #[arg(long, default_value_t = 100)]
        to: u64,
        /// Also compute the exact rectangle covering number for n <= 12
        #[arg(long)]
        rcb: bool,
        /// Node budget for the covering search
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Write to this file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Render a markdown table (bounds as rows) instead of CSV
        #[arg(long)]
        markdown: bool,
    },
    /// Build the recursive factorization of S_n, verify it, and optionally
    /// dump it.
    Factorize {
        #[arg(long)]
        n: usize,
        /// Factor the normalized matrix S_n / c_1 instead of the raw one
        #[arg(long)]
        normalized: bool,
        /// Write the U/V dump here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the slack matrix S_n.
    Slack {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        normalized: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a factorization dump against a matrix dump.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        facto: PathBuf,
        /// Relative residual tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Exact rectangle covering number of the support of S_n.
    Rcb {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Brute-force minimization of k!(r-k)! + (k+z)!(r-k-z)! - 2k!z!(r-k-z)!
    /// over k, z >= 1, k + z <= r.
    Minfkz {
        #[arg(long)]
        r: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn run(cmd: Cmd) -> CliResult {
    match cmd {
        Cmd::BoundsTable {
            from,
            to,
            rcb,
            budget,
            out,
            markdown,
        } => cmd_bounds_table(from, to, rcb, budget, out, markdown),
        Cmd::Factorize { n, normalized, out } => cmd_factorize(n, normalized, out),
        Cmd::Slack { n, normalized, out } => cmd_slack(n, normalized, out),
        Cmd::Verify { matrix, facto, tol } => cmd_verify(matrix, facto, tol),
        Cmd::Rcb { n, budget } => cmd_rcb(n, budget),
        Cmd::Minfkz { r } => cmd_minfkz(r),
    }
}

fn write_output(out: Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

const CSV_HEADER: &str = "\
# Lower and upper bounds on the nonnegative rank of the slack matrix S_n of the
# regular n-gon (equal to the extension complexity of the n-gon).
#   lb_log        ceil(log2(2n+2)), face-counting bound
#   lb_sperner    smallest r with C(r, floor(r/2)) >= n; bounds the rectangle
#                 covering number, which bounds the nonnegative rank
#   lb_improved   smallest r with n(r-1) <= (r - floor(r/2)) C(r, floor(r/2));
#                 sharpened antichain bound for the n-gon zero pattern, again
#                 via the rectangle covering number
#   lb_geometric  smallest r >= 4 with n <= max_{3<=d<=r-1} min_{i=0,1}
#                 faces(r, d-1, d-3+i); applicable for n >= 4
#   rcb           exact rectangle covering number of the support of S_n
#                 (only computed on request for n <= 12; a trailing + marks a
#                 proven lower bound from an exhausted search; blank = skipped)
#   lb_best       max of the applicable lower bounds above
#   ub            size of the explicit factorization: 2k-1 if
#                 2^(k-1) < n <= 2^(k-1)+2^(k-2) with k = ceil(log2 n), else 2k
#   gap           ub - lb_best
n,lb_log,lb_sperner,lb_improved,lb_geometric,rcb,lb_best,ub,gap
";

fn rcb_cell(row: &BoundsRow) -> String {
    match row.rcb {
        None => String::new(),
        Some(info) if info.optimal => info.value.to_string(),
        Some(info) => format!("{}+", info.value),
    }
}

fn render_csv(rows: &[BoundsRow]) -> String {
    let mut text = String::from(CSV_HEADER);
    for row in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.n,
            row.lb_log,
            row.lb_sperner,
            row.lb_improved,
            row.lb_geometric,
            rcb_cell(row),
            row.lb_best,
            row.ub,
            row.gap
        ));
    }
    text
}

fn render_markdown(rows: &[BoundsRow]) -> String {
    let cells = |name: &str, f: &dyn Fn(&BoundsRow) -> String| {
        let mut line = format!("| {name} |");
        for row in rows {
            line.push_str(&format!(" {} |", f(row)));
        }
        line.push('\n');
        line
    };
    let mut text = cells("n", &|r| r.n.to_string());
    text.push_str(&cells("---", &|_| "---".into()));
    text.push_str(&cells("log", &|r| r.lb_log.to_string()));
    text.push_str(&cells("sperner", &|r| r.lb_sperner.to_string()));
    text.push_str(&cells("improved", &|r| r.lb_improved.to_string()));
    text.push_str(&cells("geometric", &|r| r.lb_geometric.to_string()));
    if rows.iter().any(|r| r.rcb.is_some()) {
        text.push_str(&cells("rcb", &|r| rcb_cell(r)));
    }
    text.push_str(&cells("upper bound", &|r| r.ub.to_string()));
    text.push_str(&cells("gap", &|r| r.gap.to_string()));
    text
}

fn cmd_bounds_table(
    from: u64,
    to: u64,
    rcb: bool,
    budget: u64,
    out: Option<PathBuf>,
    markdown: bool,
) -> CliResult {
    if from < 3 || to < from {
        return Err(format!("need 3 <= from <= to, got {from}..{to}").into());
    }
    let mut rows = Vec::with_capacity((to - from + 1) as usize);
    let mut exhausted = false;
    for n in from..=to {
        let row = bounds_row_with_budget(n, rcb, budget)?;
        if let Some(info) = row.rcb {
            exhausted |= !info.optimal;
        }
        rows.push(row);
    }
    if rcb && to > RCB_TABLE_MAX_N {
        eprintln!(
            "note: exact rcb is only computed for n <= {RCB_TABLE_MAX_N}; larger n left blank"
        );
    }
    let text = if markdown {
        render_markdown(&rows)
    } else {
        render_csv(&rows)
    };
    write_output(out, &text)?;
    Ok(if exhausted {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_factorize(n: usize, normalized: bool, out: Option<PathBuf>) -> CliResult {
    let mut f = match recursive_factorize(n) {
        Ok(f) => f,
        Err(e @ ngon_core::Error::Construction { .. })
        | Err(e @ ngon_core::Error::Negativity { .. })
        | Err(e @ ngon_core::Error::Inconsistent(_)) => {
            eprintln!("construction failed: {e}");
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e.into()),
    };
    if normalized {
        f = f.normalized()?;
    }
    if let Some(path) = out {
        let mut w = BufWriter::new(File::create(path)?);
        write_factorization(&mut w, &f)?;
        w.flush()?;
    }
    let s = slack_matrix(n, normalized)?;
    let rep = verify_factorization(&s, &f, 1e-8)?;
    println!("n={n}");
    println!("r={}", f.r());
    println!("max_rel_residual={:e}", rep.max_rel_residual);
    println!("min_entry={:e}", rep.min_entry);
    println!("verify={} (tol=1e-8)", if rep.pass { "pass" } else { "fail" });
    Ok(if rep.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_slack(n: usize, normalized: bool, out: Option<PathBuf>) -> CliResult {
    let s = slack_matrix(n, normalized)?;
    let mut text = Vec::new();
    write_matrix(&mut text, &s)?;
    write_output(out, std::str::from_utf8(&text).expect("ascii dump"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(matrix: PathBuf, facto: PathBuf, tol: f64) -> CliResult {
    let s = read_matrix(BufReader::new(File::open(&matrix)?))?;
    let f = read_factorization(BufReader::new(File::open(&facto)?))?;
    let rep = verify_factorization(&s, &f, tol)?;
    println!("n={} r={}", f.n(), f.r());
    println!("max_abs_residual={:e}", rep.max_abs_residual);
    println!("max_rel_residual={:e}", rep.max_rel_residual);
    println!("worst_at=({},{})", rep.worst_at.0, rep.worst_at.1);
    println!("min_entry={:e}", rep.min_entry);
    println!("verify={} (tol={tol:e})", if rep.pass { "pass" } else { "fail" });
    Ok(if rep.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_rcb(n: usize, budget: u64) -> CliResult {
    let s = slack_matrix(n, false)?;
    let pattern = support_pattern(s.matrix(), 1e-12)?;
    let res = rectangle_cover_number(&pattern, budget)?;
    println!("n={n}");
    println!("value={}", res.value);
    println!("optimal={}", res.optimal);
    println!("lower_bound={}", res.lower_bound);
    println!("nodes_explored={}", res.nodes_explored);
    for rect in &res.cover {
        println!("rect rows={:?} cols={:?}", rect.row_set, rect.col_set);
    }
    Ok(if res.optimal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_minfkz(r: u32) -> CliResult {
    let res = minimize_fkz(r)?;
    println!("r={r}");
    println!("k_star={} z_star={}", res.k_star, res.z_star);
    println!("min_f={}", res.min_f);
    println!("min_f_over_r_factorial={}", res.min_value);
    let pairs: Vec<String> = res
        .all_minimizers
        .iter()
        .map(|(k, z)| format!("({k},{z})"))
        .collect();
    println!("minimizers={}", pairs.join(" "));
    Ok(ExitCode::SUCCESS)
}
