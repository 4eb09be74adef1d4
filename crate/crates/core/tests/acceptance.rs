//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line to stderr
//! (uncaptured) and the test fails if any criterion fails.
//!
//! Oracle runs above order 128 are explicitly enabled here. Setting `MAXCLASS_GATED=0`
//! skips them and reports the affected criteria without their oracle half.

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use maxclass::cyclotomic::AlphaMap;
use maxclass::group::{classical_2group, maximal_class_order_81, ClassicalKind, MaxClassGroup};
use maxclass::homology::{b0_oracle_with, schur_multiplier, FiniteGroupTable, OracleOptions};
use maxclass::multiplier::{
    b0_coinvariants, b0_coinvariants_with_budget, bounds_check, compare_kalpha_strategies, reconcile, B0Report,
};
use maxclass::verify::{p3_groups, ring_agrees_with_model, VerifyOptions};
use maxclass::zlinalg::{AbelianInvariants, Int};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn large_runs_enabled() -> bool {
    std::env::var("MAXCLASS_GATED").map_or(true, |v| v != "0")
}

fn cp(f: &[u64]) -> AbelianInvariants {
    AbelianInvariants::from_torsion(f.iter().copied())
}

fn within(start: Instant, budget: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    if t > budget {
        Err(format!("{detail}; took {t:.1?}, budget {budget:?}"))
    } else {
        Ok(format!("{detail} ({t:.1?})"))
    }
}

fn oracle_opts(large: bool) -> OracleOptions {
    OracleOptions {
        allow_large: large,
        ..OracleOptions::default()
    }
}

struct Suite {
    reports: Vec<B0Report>,
    oracle_cache: HashMap<String, (AbelianInvariants, Duration)>,
}

impl Suite {
    fn b0(&mut self, g: &MaxClassGroup) -> Result<AbelianInvariants, String> {
        let r = b0_coinvariants(g).map_err(|e| e.to_string())?;
        let inv = r.invariants.clone();
        self.reports.push(r);
        Ok(inv)
    }

    fn oracle(&mut self, g: &MaxClassGroup) -> Result<(AbelianInvariants, Duration), String> {
        let key = format!("{} {} {} {:?}", g.p(), g.m(), g.n(), g.alpha().table());
        if let Some(hit) = self.oracle_cache.get(&key) {
            return Ok(hit.clone());
        }
        let t = g.to_multiplication_table().map_err(|e| e.to_string())?;
        let o = b0_oracle_with(&t, &oracle_opts(g.order() > 81)).map_err(|e| e.to_string())?;
        let hit = (o.b0, o.elapsed);
        self.oracle_cache.insert(key, hit.clone());
        Ok(hit)
    }

    fn known_p5_values(&mut self) -> Outcome {
        let mut parts = Vec::new();
        for p in [5u32, 7] {
            let start = Instant::now();
            let g = MaxClassGroup::canonical(p, 5, 4).map_err(|e| e.to_string())?;
            let got = self.b0(&g)?;
            if got != cp(&[p as u64]) {
                return Err(format!("p = {p}: got {got}"));
            }
            parts.push(within(start, Duration::from_secs(1), format!("p={p}: {got}"))?);
        }
        Ok(parts.join(", "))
    }

    fn anchored_cases(&mut self) -> Outcome {
        let start = Instant::now();
        let mut count = 0;
        for (p, ms) in [(5u32, 4..=8usize), (7, 4..=6)] {
            for m in ms {
                for n in m + 1..=2 * m - 2 {
                    let j = n - m + 1;
                    let q = p as usize - 1;
                    let want = if n == m + 1 {
                        cp(&[p as u64])
                    } else if j % q == 0 {
                        cp(&vec![(p as u64).pow((j / q) as u32); q / 2])
                    } else {
                        continue;
                    };
                    let g = MaxClassGroup::canonical(p, n, m).map_err(|e| e.to_string())?;
                    let got = self.b0(&g)?;
                    if got != want {
                        return Err(format!("(p, m, n) = ({p}, {m}, {n}): got {got}, expected {want}"));
                    }
                    count += 1;
                }
            }
        }
        within(start, Duration::from_secs(30), format!("{count} cells exact"))
    }

    fn staircase(&mut self) -> Outcome {
        let start = Instant::now();
        let mut orders = Vec::new();
        for n in 9..=14 {
            let g = MaxClassGroup::canonical(5, n, 8).map_err(|e| e.to_string())?;
            let r = b0_coinvariants_with_budget(&g, 0).map_err(|e| e.to_string())?;
            orders.push(r.order());
            self.reports.push(r);
        }
        for k in 1..orders.len() {
            if orders[k] < orders[k - 1] {
                return Err(format!("orders decrease: {orders:?}"));
            }
            if k >= 2 && orders[k] != &orders[k - 2] * Int::from(5) {
                return Err(format!("not a staircase: {orders:?}"));
            }
        }
        let shown: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
        within(start, Duration::from_secs(10), format!("|B0| for n = 9..14: {}", shown.join(", ")))
    }

    fn reconciliation(&mut self) -> Outcome {
        let start = Instant::now();
        let mut recorded = Vec::new();
        for m in 4..=8 {
            for n in m + 1..=2 * m - 2 {
                let r = reconcile(5, m, n).map_err(|e| e.to_string())?;
                if r.y % 2 == 0 && !r.agree {
                    return Err(format!("y-even cell (m, n) = ({m}, {n}) disagrees"));
                }
                if !r.agree {
                    if r.monotonicity_witness.is_none() || !r.computed_monotone {
                        return Err(format!("({m}, {n}) disagrees without a monotonicity witness"));
                    }
                    recorded.push(format!("({m},{n})"));
                }
            }
        }
        within(
            start,
            Duration::from_secs(30),
            format!("y-even cells agree; y-odd disagreements with witness at {}", recorded.join(" ")),
        )
    }

    fn bounds(&mut self) -> Outcome {
        let bad: Vec<_> = self.reports.iter().filter(|r| !bounds_check(r)).collect();
        if let Some(r) = bad.first() {
            return Err(format!("({}, {}, {}) gives {}", r.p, r.m, r.n, r.invariants));
        }
        Ok(format!("{} reports within rank and exponent bounds", self.reports.len()))
    }

    fn kalpha_strategies(&mut self) -> Outcome {
        let start = Instant::now();
        let mut count = 0;
        for m in 4..=6 {
            for n in m..=2 * m - 2 {
                let alpha = AlphaMap::canonical(5, m, n).map_err(|e| e.to_string())?;
                let (b, c) = compare_kalpha_strategies(&alpha).map_err(|e| e.to_string())?;
                if b != c {
                    return Err(format!("(m, n) = ({m}, {n}): brute {b}, closed {c}"));
                }
                count += 1;
            }
        }
        within(start, Duration::from_secs(60), format!("{count} cases agree"))
    }

    fn centralizers(&mut self) -> Outcome {
        let start = Instant::now();
        let mut count = 0;
        for (p, n, m) in [(5u32, 4usize, 4usize), (5, 5, 4), (5, 5, 5), (7, 4, 4)] {
            let g = MaxClassGroup::canonical(p, n, m).map_err(|e| e.to_string())?;
            for i in 1..n {
                let x = g.s_i(i);
                let f = g.centralizer_formula(&x, i).map_err(|e| e.to_string())?;
                let b = g.centralizer_brute(&x, i).map_err(|e| e.to_string())?;
                if f != b {
                    return Err(format!("({p}, {m}, {n}), s_{i}"));
                }
                count += 1;
            }
        }
        within(start, Duration::from_secs(300), format!("{count} centralizers match"))
    }

    fn desk_scale(&mut self) -> Outcome {
        let start = Instant::now();
        let mut lines = Vec::new();
        let mut skipped = 0;
        for g in p3_groups(&[4, 5]) {
            let coinv = self.b0(&g)?;
            let large = g.order() > 81;
            if large && !large_runs_enabled() {
                skipped += 1;
                continue;
            }
            let (b0, took) = self.oracle(&g)?;
            if b0 != coinv {
                return Err(format!("(3, {}, {}): oracle {b0}, coinvariants {coinv}", g.m(), g.n()));
            }
            let limit = if large { 3600 } else { 300 };
            if took > Duration::from_secs(limit) {
                return Err(format!("order {} oracle took {took:.1?}", g.order()));
            }
            lines.push(format!("3^{} m={}: {b0} ({took:.1?})", g.n(), g.m()));
        }
        let mut detail = lines.join(", ");
        if skipped > 0 {
            detail.push_str(&format!("; {skipped} order-243 oracle runs skipped (MAXCLASS_GATED=0)"));
        }
        Ok(format!("{detail} ({:.1?})", start.elapsed()))
    }

    fn theorem1(&mut self) -> Outcome {
        let start = Instant::now();
        let mut count = 0;
        for g in p3_groups(&[4, 5]) {
            if g.order() > 81 && !large_runs_enabled() {
                continue;
            }
            let (b0, _) = self.oracle(&g)?;
            if b0.is_trivial() != g.theorem1_predicate() {
                return Err(format!("(3, {}, {}): B0 {b0} but condition {}", g.m(), g.n(), g.theorem1_predicate()));
            }
            count += 1;
        }
        let mut tables: Vec<(String, FiniteGroupTable)> = maximal_class_order_81()
            .into_iter()
            .enumerate()
            .map(|(i, t)| (format!("order-81 class {i}"), t))
            .collect();
        for kind in [ClassicalKind::Dihedral, ClassicalKind::Semidihedral, ClassicalKind::Quaternion] {
            for n in 4..=6 {
                tables.push((format!("{kind:?} {}", 1 << n), classical_2group(kind, n).map_err(|e| e.to_string())?));
            }
        }
        for (name, t) in &tables {
            let o = b0_oracle_with(t, &oracle_opts(false)).map_err(|e| e.to_string())?;
            if !o.b0.is_trivial() {
                return Err(format!("{name}: B0 = {}", o.b0));
            }
            if t.theorem1_predicate() != Some(true) {
                return Err(format!("{name}: commutator condition fails"));
            }
            count += 1;
        }
        within(start, Duration::from_secs(600), format!("{count} groups, condition matches triviality"))
    }

    fn p3_nontrivial(&mut self) -> Outcome {
        let start = Instant::now();
        let g = p3_groups(&[5])
            .into_iter()
            .find(|g| g.m() == 4 && g.alpha().is_surjective())
            .ok_or("no surjective map for (3, 4, 5)")?;
        let got = self.b0(&g)?;
        if got != cp(&[3]) {
            return Err(format!("pipeline gives {got}"));
        }
        let pipeline = start.elapsed();
        if pipeline > Duration::from_secs(1) {
            return Err(format!("pipeline took {pipeline:.1?}"));
        }
        if !large_runs_enabled() {
            return Ok(format!("pipeline {got} ({pipeline:.1?}); oracle run skipped (MAXCLASS_GATED=0)"));
        }
        let (b0, took) = self.oracle(&g)?;
        if b0 != got {
            return Err(format!("oracle gives {b0}"));
        }
        Ok(format!("pipeline {got} ({pipeline:.1?}), oracle {b0} ({took:.1?})"))
    }

    fn presentations(&mut self) -> Outcome {
        let mut groups: Vec<MaxClassGroup> = Vec::new();
        for (p, n, m) in [(5u32, 5usize, 4usize), (5, 6, 4), (5, 7, 5), (7, 5, 4), (7, 6, 5)] {
            groups.push(MaxClassGroup::canonical(p, n, m).map_err(|e| e.to_string())?);
        }
        groups.extend(p3_groups(&[5]).into_iter().filter(|g| g.alpha().is_surjective()).take(1));
        let mut parts = Vec::new();
        for g in &groups {
            let start = Instant::now();
            let pres = g.emit_presentation().map_err(|e| e.to_string())?;
            let want = (1, 2, (g.p() as usize - 1) / 2);
            if pres.census() != want {
                return Err(format!("p = {}: census {:?}", g.p(), pres.census()));
            }
            for w in pres.relators() {
                if g.evaluate(w) != g.identity() {
                    return Err(format!("p = {}: relator {w} is not trivial", g.p()));
                }
            }
            parts.push(within(start, Duration::from_secs(1), format!("p={} n={}", g.p(), g.n()))?);
        }
        Ok(format!("census 1+2+(p-1)/2, all relators trivial: {}", parts.join(", ")))
    }

    fn infrastructure(&mut self) -> Outcome {
        let start = Instant::now();
        let opts = VerifyOptions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for p in [3u32, 5, 7] {
            for j in 1..=8 {
                ring_agrees_with_model(p, j, 10_000, &mut rng, &opts).map_err(|e| format!("p={p} j={j}: {e}"))?;
            }
        }
        for n in [2usize, 3, 4, 6, 8, 9] {
            let s = schur_multiplier(&FiniteGroupTable::cyclic(n)).map_err(|e| e.to_string())?;
            if !s.is_trivial() {
                return Err(format!("H2(C{n}) = {s}"));
            }
        }
        for p in [2usize, 3, 5] {
            let s = schur_multiplier(&FiniteGroupTable::abelian(&[p, p])).map_err(|e| e.to_string())?;
            if s != cp(&[p as u64]) {
                return Err(format!("H2(C{p} x C{p}) = {s}"));
            }
        }
        within(start, Duration::from_secs(120), "ring model 10^4 samples per (p, j); H2 values exact".into())
    }
}

#[test]
fn acceptance() {
    let mut suite = Suite {
        reports: Vec::new(),
        oracle_cache: HashMap::new(),
    };
    type Criterion = fn(&mut Suite) -> Outcome;
    // bounds run last so that they see every report produced by the others
    let criteria: [(usize, &str, Criterion); 12] = [
        (1, "order p^5 values", Suite::known_p5_values),
        (2, "closed formula anchored cases", Suite::anchored_cases),
        (3, "staircase growth", Suite::staircase),
        (4, "reconciliation ledger", Suite::reconciliation),
        (6, "kalpha strategies agree", Suite::kalpha_strategies),
        (7, "centralizer formula", Suite::centralizers),
        (8, "oracle equals coinvariants", Suite::desk_scale),
        (9, "triviality criterion", Suite::theorem1),
        (10, "p = 3 nontrivial multiplier", Suite::p3_nontrivial),
        (11, "presentation round trip", Suite::presentations),
        (12, "infrastructure referees", Suite::infrastructure),
        (5, "rank and exponent bounds", Suite::bounds),
    ];
    let mut lines = vec![String::new(); 12];
    let mut failed = Vec::new();
    for (number, name, run) in criteria {
        lines[number - 1] = match run(&mut suite) {
            Ok(d) => format!("PASS {number:>2} {name}: {d}"),
            Err(d) => {
                failed.push(number);
                format!("FAIL {number:>2} {name}: {d}")
            }
        };
    }
    failed.sort_unstable();
    let mut err = std::io::stderr();
    let _ = writeln!(err);
    for l in &lines {
        let _ = writeln!(err, "{l}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
