//! The subcommands. Each returns a [`Report`]: a table plus the list of
//! failed checks (empty for the plain table commands).

use anyhow::{bail, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use unimodal_core::asymptotics::{
    asym_series, corollary_order, corollary_series, eval_series, theorem_series, AsymSeries, TermSource,
};
use unimodal_core::enumerate::enumerate;
use unimodal_core::genfun::{self, check_crank_identity, check_identity};
use unimodal_core::kernels::{
    kernel_i, kernel_k, partial_theta_direct, partial_theta_expansion, wright_p, UpperHalfPoint,
};
use unimodal_core::quadrature::Quadrature;
use unimodal_core::specfun::ln_integer;
use unimodal_core::Family;

use crate::config::{Command, KernelCheck, RunConfig, Suite};
use crate::table::{Cell, Table};

pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Report {
    fn plain(table: Table) -> Self {
        Self {
            table,
            failures: Vec::new(),
        }
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Report> {
    genfun::set_max_trunc(cfg.trunc.max(genfun::max_trunc()));
    match command {
        Command::Exact => exact(cfg).map(Report::plain),
        Command::Asymptotic => asymptotic(cfg).map(Report::plain),
        Command::Compare => compare(cfg).map(Report::plain),
        Command::Verify { suite } => verify(*suite, cfg),
        Command::Kernels { check } => kernels(*check, cfg).map(|(table, failures)| Report { table, failures }),
    }
}

fn exact(cfg: &RunConfig) -> Result<Table> {
    let f = cfg.family_or_u();
    let ns = cfg.weights(0)?;
    let mut t = Table::new(&["family", "n", "m", "count"]);
    let top = *ns.last().expect("weights are non-empty");
    let s = genfun::series(f, top as usize)?;
    for &n in &ns {
        for m in cfg.ranks() {
            t.push(vec![f.name().into(), n.into(), m.into(), s.coeff(m, n as usize)?.into()]);
        }
    }
    Ok(t)
}

fn source(cfg: &RunConfig) -> TermSource {
    cfg.terms.into()
}

fn series_for(cfg: &RunConfig, f: Family, m: i64) -> Result<AsymSeries> {
    if cfg.big_n.is_some() && source(cfg) == TermSource::Corollary {
        bail!("--N applies to --terms theorem or wright only");
    }
    Ok(asym_series(source(cfg), f, m, cfg.big_n)?)
}

fn positive_weights(cfg: &RunConfig) -> Result<Vec<u64>> {
    let ns = cfg.weights(1)?;
    if ns.first() == Some(&0) {
        bail!("asymptotic evaluation needs n >= 1");
    }
    Ok(ns)
}

fn nan() -> Cell {
    Cell::from("nan")
}

/// `ln` of `mantissa · e^{scale}`, or `None` when the value is not positive.
fn ln_value(mantissa: &Float, scale: &Float) -> Option<Float> {
    (*mantissa > 0).then(|| Float::with_val(mantissa.prec(), mantissa.ln_ref()) + scale)
}

/// Rows computed in parallel over `n`, emitted in `(n, m)` order.
fn par_rows<F>(ns: &[u64], ranks: &[i64], row: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(u64, i64) -> Result<Vec<Cell>> + Sync,
{
    let blocks: Vec<Result<Vec<Vec<Cell>>>> = ns
        .par_iter()
        .map(|&n| ranks.iter().map(|&m| row(n, m)).collect())
        .collect();
    let mut out = Vec::new();
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

fn asymptotic(cfg: &RunConfig) -> Result<Table> {
    let f = cfg.family_or_u();
    let ns = positive_weights(cfg)?;
    let ranks = cfg.ranks();
    let series: Vec<AsymSeries> = ranks.iter().map(|&m| series_for(cfg, f, m)).collect::<Result<_>>()?;
    let prec = cfg.precision;
    let mut t = Table::new(&["family", "n", "m", "mantissa", "scale", "ln_asym"]);
    t.rows = par_rows(&ns, &ranks, |n, m| {
        let s = &series[(m + cfg.m_max) as usize];
        let (v, x) = eval_series(s, n, prec)?;
        let ln = ln_value(&v, &x).map_or_else(nan, Cell::from);
        Ok(vec![f.name().into(), n.into(), m.into(), v.into(), x.into(), ln])
    })?;
    Ok(t)
}

fn compare(cfg: &RunConfig) -> Result<Table> {
    let f = cfg.family_or_u();
    let ns = positive_weights(cfg)?;
    let ranks = cfg.ranks();
    let series: Vec<AsymSeries> = ranks.iter().map(|&m| series_for(cfg, f, m)).collect::<Result<_>>()?;
    let exact = genfun::series(f, *ns.last().expect("non-empty") as usize)?;
    let prec = cfg.precision;
    let mut t = Table::new(&["family", "n", "m", "count", "ln_exact", "ln_asym", "rel_gap"]);
    t.rows = par_rows(&ns, &ranks, |n, m| {
        let count = exact.coeff(m, n as usize)?;
        let s = &series[(m + cfg.m_max) as usize];
        let (v, x) = eval_series(s, n, prec)?;
        let ln_asym = ln_value(&v, &x);
        let ln_exact = (count > 0).then(|| ln_integer(&count, prec)).transpose()?;
        let gap = match (&ln_asym, &ln_exact) {
            (Some(a), Some(e)) => Cell::from(Float::with_val(prec, a - e).exp_m1().abs()),
            _ => nan(),
        };
        Ok(vec![
            f.name().into(),
            n.into(),
            m.into(),
            count.into(),
            ln_exact.map_or_else(nan, Cell::from),
            ln_asym.map_or_else(nan, Cell::from),
            gap,
        ])
    })?;
    Ok(t)
}

struct Checks {
    table: Table,
    failures: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            table: Table::new(&["suite", "family", "item", "status", "detail"]),
            failures: Vec::new(),
        }
    }

    fn record(&mut self, suite: &str, family: &str, item: String, pass: bool, detail: String) {
        if !pass {
            self.failures.push(format!("{suite} {family} {item}: {detail}"));
        }
        let status = if pass { "PASS" } else { "FAIL" };
        self.table
            .push(vec![suite.into(), family.into(), item.into(), status.into(), detail.into()]);
    }
}

fn verify(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let mut c = Checks::new();
    match suite {
        Suite::Identities => {
            for f in cfg.families() {
                let r = check_identity(f, cfg.trunc)?;
                c.record("identities", f.name(), format!("trunc {}", cfg.trunc), r.passed(), r.to_string());
            }
            let r = check_crank_identity(cfg.trunc)?;
            c.record("identities", "crank", format!("trunc {}", cfg.trunc), r.passed(), r.to_string());
        }
        Suite::Symmetry => {
            let ns = cfg.weights(0)?;
            for f in cfg.families() {
                let s = genfun::series(f, *ns.last().expect("non-empty") as usize)?;
                let mut bad = Vec::new();
                for &n in &ns {
                    let p = s.coeff_poly(n as usize)?;
                    bad.extend(p.terms().filter(|(m, c)| p.coeff(-m) != **c).map(|(m, _)| format!("(m={m}, n={n})")));
                }
                let range = format!("n {}..={}", ns[0], ns[ns.len() - 1]);
                let detail = if bad.is_empty() { "symmetric".to_string() } else { bad.join(" ") };
                c.record("symmetry", f.name(), range, bad.is_empty(), detail);
            }
        }
        Suite::Oracle => {
            let lo = cfg.n_min.unwrap_or(0);
            let hi = cfg.n_max.unwrap_or(30);
            if lo > hi {
                bail!("empty n-range {lo}..={hi}");
            }
            for f in cfg.families() {
                let s = genfun::series(f, hi as usize)?;
                let mut bad = Vec::new();
                let start = if f == Family::Nu { lo.max(1) } else { lo };
                for n in start..=hi {
                    let h = enumerate(f, n as usize, hi as usize)?;
                    let from_series: Vec<_> = s.coeff_poly(n as usize)?.terms().map(|(m, c)| (m, c.clone())).collect();
                    let from_enum: Vec<_> = h.counts.into_iter().collect();
                    if from_series != from_enum {
                        bad.push(n.to_string());
                    }
                }
                let detail = if bad.is_empty() {
                    "enumeration matches series".to_string()
                } else {
                    format!("mismatch at n = {}", bad.join(", "))
                };
                c.record("oracle", f.name(), format!("n {start}..={hi}"), bad.is_empty(), detail);
            }
        }
        Suite::Inequalities => inequalities(cfg, &mut c)?,
        Suite::Kernels => {
            for check in [KernelCheck::PartialTheta, KernelCheck::Moments, KernelCheck::Wright] {
                let (_, fails) = kernels(check, cfg)?;
                let name = check.to_possible_value().expect("no skipped variants").get_name().to_string();
                let detail = if fails.is_empty() { "within tolerance".to_string() } else { fails.join("; ") };
                c.record("kernels", "-", name, fails.is_empty(), detail);
            }
        }
        Suite::Coefficients => {
            for f in cfg.families() {
                for m in 0..=cfg.m_max {
                    let th = theorem_series(f, m, corollary_order(f))?;
                    let pass = th == corollary_series(f, m);
                    let detail = th.terms().map(|(k, p)| format!("[{k}] {p}")).collect::<Vec<_>>().join(", ");
                    c.record("coefficients", f.name(), format!("m={m}"), pass, detail);
                }
            }
        }
    }
    Ok(Report {
        table: c.table,
        failures: c.failures,
    })
}

/// For every `0 ≤ j < m ≤ m_max`, the least `n₀` from which the count at
/// rank `j` exceeds the count at rank `m` up to `n_max`.
fn inequalities(cfg: &RunConfig, c: &mut Checks) -> Result<()> {
    let lo = cfg.n_min.unwrap_or(0) as usize;
    let hi = cfg.n_max.unwrap_or(cfg.trunc as u64) as usize;
    if lo > hi {
        bail!("empty n-range {lo}..={hi}");
    }
    if hi > cfg.trunc {
        bail!("n = {hi} exceeds the truncation order {} (raise --trunc)", cfg.trunc);
    }
    for f in cfg.families() {
        let s = genfun::series(f, hi)?;
        for m in 1..=cfg.m_max {
            for j in 0..m {
                let holds = |n: usize| -> Result<bool> { Ok(s.coeff(j, n)? > s.coeff(m, n)?) };
                let item = format!("j={j} m={m}");
                if !holds(hi)? {
                    c.record("inequalities", f.name(), item, false, "FAIL-AT-END".into());
                    continue;
                }
                let mut n0 = hi;
                while n0 > lo && holds(n0 - 1)? {
                    n0 -= 1;
                }
                c.record("inequalities", f.name(), item, true, format!("n0={n0}"));
            }
        }
    }
    Ok(())
}

fn cabs(z: &Complex, prec: u32) -> Float {
    Float::with_val(prec, z.abs_ref())
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn kernels(check: KernelCheck, cfg: &RunConfig) -> Result<(Table, Vec<String>)> {
    let prec = cfg.precision;
    let mut fails = Vec::new();
    match check {
        KernelCheck::PartialTheta => {
            let mut t = Table::new(&["d", "k", "z", "N", "y", "tau_imag", "abs_error", "ratio"]);
            let ys = [8u32, 16, 32];
            let orders: Vec<u32> = match cfg.big_n {
                Some(n) => vec![n],
                None => vec![2, 3, 4],
            };
            for ((num, den), k) in [((1u32, 1u32), 4u32), ((3, 1), 4), ((1, 2), 2), ((3, 2), 2)] {
                let d = Rational::from((num, den));
                for z_den in [0u32, 8 * k] {
                    let z = if z_den == 0 {
                        Complex::with_val(prec, (0, 0))
                    } else {
                        Complex::with_val(prec, (Float::with_val(prec, 1) / z_den, 0))
                    };
                    let z_label = if z_den == 0 { "0".to_string() } else { format!("1/{z_den}") };
                    for &big_n in &orders {
                        let target = 2f64.powi(big_n as i32 + 1);
                        let mut prev: Option<Float> = None;
                        for &y in &ys {
                            // F_{d,k}(z; 2τ/k²) at τ = i/y
                            let im = Float::with_val(prec, 2) / (y * k * k);
                            let tau = UpperHalfPoint::imaginary(im.clone())?;
                            let a = partial_theta_direct(&d, k, &z, &tau, prec)?;
                            let b = partial_theta_expansion(&d, k, &z, &tau, big_n, prec)?;
                            let err = cabs(&Complex::with_val(prec, a - b), prec);
                            let ratio = prev.as_ref().map(|p| Float::with_val(prec, p / &err));
                            if let Some(r) = &ratio {
                                let r = r.to_f64();
                                if !(r >= target / 1.5 && r <= target * 1.5) {
                                    fails.push(format!("d={d} k={k} z={z_label} N={big_n} y=1/{y}: ratio {r:.2} vs {target}"));
                                }
                            }
                            t.push(vec![
                                d.to_string().into(),
                                u64::from(k).into(),
                                z_label.clone().into(),
                                u64::from(big_n).into(),
                                format!("1/{y}").into(),
                                im.into(),
                                err.clone().into(),
                                ratio.map_or_else(|| Cell::from(""), Cell::from),
                            ]);
                            prev = Some(err);
                        }
                    }
                }
            }
            Ok((t, fails))
        }
        KernelCheck::Moments => {
            let mut t = Table::new(&["kernel", "ell", "im_neg_inv_tau", "quadrature_re", "quadrature_im", "closed_re", "closed_im", "rel_error"]);
            let a = Float::with_val(prec, 1) / 16u32;
            let big_ys = [100u32, 200, 300, 400];
            let expected = -std::f64::consts::PI / 16.0;
            type Kernel = fn(u32, &Float, &UpperHalfPoint, u32) -> unimodal_core::Result<(Quadrature, Complex)>;
            let list: [(&str, Kernel); 2] = [("I", kernel_i), ("K", kernel_k)];
            for (name, kern) in list {
                for ell in 0..=2u32 {
                    let mut logs = Vec::new();
                    for &y in &big_ys {
                        let tau = UpperHalfPoint::imaginary(Float::with_val(prec, 1) / y)?;
                        let (q, closed) = kern(ell, &a, &tau, prec)?;
                        let diff = cabs(&Complex::with_val(prec, &q.value - &closed), prec);
                        let rel = Float::with_val(prec, &diff / cabs(&closed, prec));
                        if y == 100 && rel.to_f64() > 1e-6 {
                            fails.push(format!("{name}_{ell} at tau=i/100: relative error {:.3e}", rel.to_f64()));
                        }
                        logs.push(diff.ln().to_f64());
                        t.push(vec![
                            name.into(),
                            u64::from(ell).into(),
                            u64::from(y).into(),
                            q.value.real().clone().into(),
                            q.value.imag().clone().into(),
                            closed.real().clone().into(),
                            closed.imag().clone().into(),
                            rel.into(),
                        ]);
                    }
                    let xs: Vec<f64> = big_ys.iter().map(|&y| f64::from(y)).collect();
                    let k = slope(&xs, &logs);
                    if ((k - expected) / expected).abs() > 0.2 {
                        fails.push(format!("{name}_{ell}: residual slope {k:.4} vs {expected:.4}"));
                    }
                }
            }
            Ok((t, fails))
        }
        KernelCheck::Wright => {
            let mut t = Table::new(&["s", "k", "n", "contour_re", "contour_im", "bessel", "ln_abs_diff"]);
            let k = 2u32;
            let ns = [25u64, 100, 400];
            let bound = std::f64::consts::FRAC_PI_2 * (1.5 * f64::from(k)).sqrt();
            for s in 1..=3u32 {
                let mut logs = Vec::new();
                for &n in &ns {
                    let (q, bessel) = wright_p(f64::from(s), k, n, prec)?;
                    let im = Float::with_val(prec, q.value.imag().abs_ref());
                    if im > cabs(&q.value, prec) >> (prec - 12) {
                        fails.push(format!("s={s} n={n}: imaginary part {:.3e}", im.to_f64()));
                    }
                    let ln_diff = cabs(&Complex::with_val(prec, &q.value - &bessel), prec).ln();
                    logs.push(ln_diff.to_f64());
                    t.push(vec![
                        u64::from(s).into(),
                        u64::from(k).into(),
                        n.into(),
                        q.value.real().clone().into(),
                        q.value.imag().clone().into(),
                        bessel.into(),
                        ln_diff.into(),
                    ]);
                }
                let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).sqrt()).collect();
                let rate = slope(&xs, &logs);
                if rate > bound {
                    fails.push(format!("s={s}: growth rate {rate:.4} above {bound:.4}"));
                }
            }
            Ok((t, fails))
        }
    }
}
