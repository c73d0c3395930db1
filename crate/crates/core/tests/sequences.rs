use std::collections::HashMap;

use proptest::prelude::*;
use regseq::sequences::{
    abs_eta_partial_sum, automatic_value, eta, eta_partial_sum, paperfolding, rudin_shapiro,
    thue_morse, twisted_sum_series, EtaCache, EtaTable, SequenceId, ETA_PARTIAL_SUM_BOUND,
    T_ETA_SQRT_BAND,
};
use regseq::{Error, Rational};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn tm(k: u64) -> i64 {
    if k.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `2^{-K} Σ_{k<2^K} t(k) t(k+m)`.
fn block_correlation(m: u64, big_k: u32) -> f64 {
    let n = 1u64 << big_k;
    (0..n).map(|k| tm(k) * tm(k + m)).sum::<i64>() as f64 / n as f64
}

/// η from its two-term recursion with a private memo.
fn recursive_eta(m: u64, memo: &mut HashMap<u64, Rational>) -> Rational {
    match m {
        0 => return Rational::from(1),
        // η(1) = −(η(0) + η(1))/2
        1 => return q("-1/3"),
        _ => {}
    }
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let v = if m.is_multiple_of(2) {
        recursive_eta(m / 2, memo)
    } else {
        -(recursive_eta(m / 2, memo) + recursive_eta(m / 2 + 1, memo)) * q("1/2")
    };
    memo.insert(m, v.clone());
    v
}

#[test]
fn eta_is_the_thue_morse_autocorrelation() {
    let big_k = 20;
    for m in 0..=64u64 {
        let avg = block_correlation(m, big_k);
        let exact = eta(m).to_f64();
        assert!(
            (avg - exact).abs() <= 4.0 * m as f64 / (1u64 << big_k) as f64,
            "m = {m}: {avg} vs {exact}"
        );
    }
}

#[test]
fn eta_table_and_cache_agree_with_recursion() {
    let mut memo = HashMap::new();
    let table = EtaTable::new(1 << 14).unwrap();
    let mut cache = EtaCache::new();
    for m in 0..=1u64 << 14 {
        let want = recursive_eta(m, &mut memo);
        assert_eq!(table.get(m), want);
        assert_eq!(cache.get(m), want);
        assert_eq!(eta(m), want);
        assert_eq!(table.get_f64(m), want.to_f64());
    }
    assert!(EtaTable::new((1 << 24) + 1).is_err());
}

proptest! {
    #[test]
    fn eta_recursions(m in 0u64..1 << 40) {
        prop_assert_eq!(eta(2 * m), eta(m));
        prop_assert_eq!(eta(2 * m + 1) * Rational::from(-2), eta(m) + eta(m + 1));
        prop_assert!(eta(m).abs() <= Rational::from(1));
        if m > 0 {
            prop_assert!(eta(m).abs() <= q("1/3"));
        }
    }

    #[test]
    fn thue_morse_matches_parity(n in any::<u64>()) {
        prop_assert_eq!(thue_morse(n) as i64, tm(n));
        prop_assert_eq!(thue_morse(2 * (n >> 1)), thue_morse(n >> 1));
    }

    #[test]
    fn rudin_shapiro_counts_adjacent_ones(n in any::<u64>()) {
        let pairs = (n & (n >> 1)).count_ones();
        prop_assert_eq!(rudin_shapiro(n), if pairs % 2 == 0 { 1 } else { -1 });
    }

    #[test]
    fn paperfolding_recursion(n in 1u64..1 << 50) {
        prop_assert_eq!(paperfolding(2 * n), paperfolding(n));
        prop_assert_eq!(paperfolding(4 * n + 1), 1);
        prop_assert_eq!(paperfolding(4 * n + 3), -1);
    }

    #[test]
    fn twist_series_is_a_running_sum(x_max in 0u64..600, which in 0usize..5) {
        let id = [SequenceId::ThueMorse, SequenceId::Paperfolding, SequenceId::RudinShapiro, SequenceId::Eta, SequenceId::SignRep(4)][which];
        let series = twisted_sum_series(id, x_max).unwrap();
        prop_assert_eq!(series.len() as u64, x_max + 1);
        let sign = regseq::bounds::SignRep::new(4).unwrap();
        let mut running = Rational::from(0);
        for x in 0..=x_max {
            let f = match id {
                SequenceId::Eta => eta(x),
                SequenceId::SignRep(_) => Rational::from(sign.value(x)),
                _ => Rational::from(automatic_value(id, x).unwrap()),
            };
            running += f * eta(x);
            prop_assert_eq!(series.value(x), running.clone());
            let (p, d) = series.reduced(x);
            prop_assert_eq!(Rational::new(p as i64, d as i64), running.clone());
        }
    }
}

#[test]
fn sequence_ids_parse() {
    for (s, id) in [
        ("tm", SequenceId::ThueMorse),
        ("pf", SequenceId::Paperfolding),
        ("rs", SequenceId::RudinShapiro),
        ("eta", SequenceId::Eta),
        ("sign:7", SequenceId::SignRep(7)),
    ] {
        assert_eq!(s.parse::<SequenceId>().unwrap(), id);
        assert_eq!(id.to_string(), s);
    }
    assert!(matches!(
        "sign:26".parse::<SequenceId>(),
        Err(Error::LevelOutOfRange { .. })
    ));
    assert!(matches!(
        "sign:0".parse::<SequenceId>(),
        Err(Error::LevelOutOfRange { .. })
    ));
    assert!("tx".parse::<SequenceId>().is_err());
    assert!(automatic_value(SequenceId::Eta, 3).is_err());
}

#[test]
fn small_values() {
    let t: Vec<i32> = (0..8).map(thue_morse).collect();
    assert_eq!(t, [1, -1, -1, 1, -1, 1, 1, -1]);
    let r: Vec<i32> = (0..8).map(rudin_shapiro).collect();
    assert_eq!(r, [1, 1, 1, -1, 1, 1, -1, 1]);
    let p: Vec<i32> = (1..9).map(paperfolding).collect();
    assert_eq!(p, [1, 1, -1, 1, 1, -1, -1, 1]);
    let e: Vec<Rational> = (0..8).map(eta).collect();
    let want: Vec<Rational> = ["1", "-1/3", "-1/3", "1/3", "-1/3", "0", "1/3", "0"]
        .iter()
        .map(|s| q(s))
        .collect();
    assert_eq!(e, want);
}

#[test]
fn partial_sums() {
    assert_eq!(abs_eta_partial_sum(7).unwrap(), q("8/3"));
    assert_eq!(eta_partial_sum(7).unwrap(), q("2/3"));
    let table = EtaTable::new(1 << 20).unwrap();
    let mut running = 0i128;
    let bound = (ETA_PARTIAL_SUM_BOUND * table.scaled(0) as f64) as i128;
    for m in 0..=1u64 << 20 {
        running += table.scaled(m) as i128;
        assert!(running.abs() <= bound, "x = {m}");
    }
}

/// x^{-1/2} Σ t(m)η(m) stays inside the pinned band on [2^6, 2^20].
#[test]
fn t_eta_band() {
    let series = twisted_sum_series(SequenceId::ThueMorse, 1 << 20).unwrap();
    let (lo, hi) = T_ETA_SQRT_BAND;
    for x in 1u64 << 6..=1 << 20 {
        let v = series.sqrt_normalized(x);
        assert!(lo < v && v < hi, "x = {x}: {v}");
    }
}

#[test]
fn cache_snapshots() {
    let mut cache = EtaCache::new();
    for m in (0..50_000).step_by(7) {
        cache.get(m);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eta.bin");
    cache.save(&path).unwrap();
    let mut loaded = EtaCache::load(&path).unwrap();
    assert_eq!(loaded.len(), cache.len());
    for m in (0..50_000).step_by(7) {
        assert_eq!(loaded.get(m), eta(m));
    }

    let mut bytes = std::fs::read(&path).unwrap();
    bytes[0] ^= 0xff;
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(EtaCache::load(&path), Err(Error::CorruptCache(_))));
    std::fs::write(&path, b"ETACACH1").unwrap();
    assert!(EtaCache::load(&path).is_err());

    let mut other = EtaCache::new();
    other.get(123_456);
    loaded.merge(other);
    assert_eq!(loaded.get(123_456), eta(123_456));
}
