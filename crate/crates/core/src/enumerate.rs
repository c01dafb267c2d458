//! Brute-force enumeration of the four unimodal-sequence families.
//!
//! Every ascent partition and descent multiset is generated explicitly; pairs
//! are then counted by grouping the generated objects on the statistics the
//! rank depends on. Nothing here touches q-series, so the histograms serve as
//! an independent oracle for [`crate::genfun`].

use std::collections::{BTreeMap, HashMap};

use rug::Integer;

use crate::error::{Error, Result};
use crate::family::Family;

/// Default upper bound on the weight accepted by the enumerators.
pub const DEFAULT_MAX_N: usize = 40;

/// Rank-refined counts for one family at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankHistogram {
    pub n: usize,
    pub counts: BTreeMap<i64, Integer>,
}

impl RankHistogram {
    fn new(n: usize) -> Self {
        Self {
            n,
            counts: BTreeMap::new(),
        }
    }

    fn bump(&mut self, rank: i64, by: &Integer) {
        if by.is_zero() {
            return;
        }
        *self.counts.entry(rank).or_default() += by;
    }

    /// Count at rank `m`, zero when absent.
    pub fn get(&self, m: i64) -> Integer {
        self.counts.get(&m).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Integer {
        Integer::sum(self.counts.values()).into()
    }
}

/// Side length of the Durfee square: the largest `k` with at least `k` parts
/// of size at least `k`.
pub fn durfee(partition: &[u32]) -> usize {
    let mut parts = partition.to_vec();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
        .iter()
        .enumerate()
        .take_while(|(i, &p)| p as usize > *i)
        .count()
}

/// Calls `visit` on every partition (weakly decreasing, parts in
/// `1..=max_part`) of every size up to `budget`.
fn for_each_partition(max_part: u32, budget: u32, visit: &mut impl FnMut(&[u32])) {
    fn rec(max_part: u32, budget: u32, buf: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        visit(buf);
        for p in (1..=max_part.min(budget)).rev() {
            buf.push(p);
            rec(p, budget - p, buf, visit);
            buf.pop();
        }
    }
    rec(max_part, budget, &mut Vec::new(), visit);
}

type Tally = HashMap<(u32, i64), u64>;

fn tally(
    max_part: u32,
    budget: u32,
    keep: impl Fn(&[u32]) -> bool,
    stat: impl Fn(&[u32]) -> i64,
) -> Tally {
    let mut t = Tally::new();
    for_each_partition(max_part, budget, &mut |p| {
        if keep(p) {
            *t.entry((p.iter().sum(), stat(p))).or_default() += 1;
        }
    });
    t
}

/// Adds every pairing of an ascent (`a`) and descent (`b`) object whose sizes
/// sum to `rem`, ranked `stat_b − stat_a`.
fn pair_up(hist: &mut RankHistogram, a: &Tally, b: &Tally, rem: u32) {
    for (&(sa, ra), &ca) in a {
        for (&(sb, rb), &cb) in b {
            if sa + sb == rem {
                hist.bump(rb - ra, &(Integer::from(ca) * cb));
            }
        }
    }
}

fn check_bound(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        return Err(Error::Usage(format!(
            "enumeration limited to n <= {max_n}, got {n}"
        )));
    }
    Ok(())
}

fn parts_count(p: &[u32]) -> i64 {
    p.len() as i64
}

/// Single peak `c̄`, both sides partitions into parts `≤ c`; the peak weighs
/// `peak_mult · c`.
fn enum_plain(n: usize, peak_mult: u32) -> RankHistogram {
    let mut hist = RankHistogram::new(n);
    if n == 0 {
        hist.bump(0, &Integer::from(1));
        return hist;
    }
    let n = n as u32;
    for c in 1..=n / peak_mult {
        let rem = n - peak_mult * c;
        let side = tally(c, rem, |_| true, parts_count);
        pair_up(&mut hist, &side, &side, rem);
    }
    hist
}

/// Sequences `a₁ ≤ ⋯ ≤ a_r ≤ c̄ ≥ b₁ ≥ ⋯ ≥ b_s` of weight `n`; rank `s − r`.
pub fn enum_u(n: usize) -> Result<RankHistogram> {
    enum_u_bounded(n, DEFAULT_MAX_N)
}

pub fn enum_u_bounded(n: usize, max_n: usize) -> Result<RankHistogram> {
    check_bound(n, max_n)?;
    Ok(enum_plain(n, 1))
}

/// As [`enum_u`] with a doubled peak `c̄ c̄`.
pub fn enum_w(n: usize) -> Result<RankHistogram> {
    enum_w_bounded(n, DEFAULT_MAX_N)
}

pub fn enum_w_bounded(n: usize, max_n: usize) -> Result<RankHistogram> {
    check_bound(n, max_n)?;
    Ok(enum_plain(n, 2))
}

/// As [`enum_u`], but descent parts are at most `c − k` where `k` is the
/// Durfee square of the ascent partition.
pub fn enum_v(n: usize) -> Result<RankHistogram> {
    enum_v_bounded(n, DEFAULT_MAX_N)
}

pub fn enum_v_bounded(n: usize, max_n: usize) -> Result<RankHistogram> {
    check_bound(n, max_n)?;
    let mut hist = RankHistogram::new(n);
    if n == 0 {
        hist.bump(0, &Integer::from(1));
        return Ok(hist);
    }
    let n = n as u32;
    for c in 1..=n {
        let rem = n - c;
        let mut by_durfee: BTreeMap<usize, Tally> = BTreeMap::new();
        for_each_partition(c, rem, &mut |p| {
            let key = (p.iter().sum(), parts_count(p));
            *by_durfee.entry(durfee(p)).or_default().entry(key).or_default() += 1;
        });
        for (k, asc) in &by_durfee {
            let desc = tally(c - *k as u32, rem, |_| true, parts_count);
            pair_up(&mut hist, asc, &desc, rem);
        }
    }
    Ok(hist)
}

/// Odd peak `c̄`; the ascent is a partition into parts `≤ c` with distinct
/// even parts, the descent an overpartition into odd parts `≤ c` with no
/// overlined `c`. Rank is the number of non-overlined descent parts minus
/// the number of odd ascent parts. Weight 0 yields an empty histogram,
/// matching the zero constant term of the series.
pub fn enum_nu(n: usize) -> Result<RankHistogram> {
    enum_nu_bounded(n, DEFAULT_MAX_N)
}

pub fn enum_nu_bounded(n: usize, max_n: usize) -> Result<RankHistogram> {
    check_bound(n, max_n)?;
    let mut hist = RankHistogram::new(n);
    let n = n as u32;
    for c in (1..=n).step_by(2) {
        let rem = n - c;
        let asc = tally(
            c,
            rem,
            |p| p.windows(2).all(|w| w[0] != w[1] || w[0] % 2 == 1),
            |p| p.iter().filter(|&&x| x % 2 == 1).count() as i64,
        );
        let desc = overpartition_tally(c, rem);
        pair_up(&mut hist, &asc, &desc, rem);
    }
    Ok(hist)
}

/// Overpartitions into odd parts `≤ c` without an overlined `c`, keyed by
/// (size, non-overlined part count).
fn overpartition_tally(c: u32, budget: u32) -> Tally {
    fn rec(
        v: u32,
        c: u32,
        budget: u32,
        size: u32,
        plain: i64,
        t: &mut Tally,
    ) {
        if v == 0 {
            *t.entry((size, plain)).or_default() += 1;
            return;
        }
        let next = v.saturating_sub(2);
        for mult in 0..=(budget - size) / v {
            for over in [false, true] {
                if over && (mult == 0 || v == c) {
                    continue;
                }
                let marked = i64::from(over);
                rec(
                    next,
                    c,
                    budget,
                    size + mult * v,
                    plain + mult as i64 - marked,
                    t,
                );
            }
        }
    }
    let mut t = Tally::new();
    rec(c, c, budget, 0, 0, &mut t);
    t
}

/// Dispatches to the enumerator for `family`.
pub fn enumerate(family: Family, n: usize, max_n: usize) -> Result<RankHistogram> {
    match family {
        Family::U => enum_u_bounded(n, max_n),
        Family::W => enum_w_bounded(n, max_n),
        Family::V => enum_v_bounded(n, max_n),
        Family::Nu => enum_nu_bounded(n, max_n),
    }
}
