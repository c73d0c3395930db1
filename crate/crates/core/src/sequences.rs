//! Concrete sequences: Thue–Morse `t`, its autocorrelation `η`, the
//! paperfolding and Rudin–Shapiro sequences, and partial sums of twists
//! `Σ_{m≤x} f(m)·η(m)`.
//!
//! `η` satisfies `η(0) = 1`, `η(2m) = η(m)` and
//! `η(2m+1) = −(η(m) + η(m+1))/2`; in particular `η(1) = −1/3`.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::bounds::SignRep;
use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Frozen bound `|Σ_{m=0}^{x} η(m)| ≤ 1`, from a scan of `x ≤ 2^20`
/// (attained at `x = 0`).
pub const ETA_PARTIAL_SUM_BOUND: f64 = 1.0;

/// Frozen band for `x^{−1/2} Σ_{m≤x} t(m)η(m)` on `2^6 ≤ x ≤ 2^20`. The
/// scanned minimum is `2√2/3 ≈ 0.94281` and the maximum `≈ 1.06109`.
pub const T_ETA_SQRT_BAND: (f64, f64) = (0.942, 1.062);

/// Largest index accepted by the table-backed operations.
pub const TABLE_MAX_INDEX: u64 = 1 << 24;

/// `(−1)^{s_2(n)}` where `s_2` is the binary digit sum.
pub fn thue_morse(n: u64) -> i32 {
    if n.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Regular paperfolding: for `n = 2^a·m` with `m` odd, `+1` if `m ≡ 1 (mod 4)`
/// and `−1` otherwise. The value at `n = 0` is fixed to `+1`.
pub fn paperfolding(n: u64) -> i32 {
    if n == 0 {
        return 1;
    }
    let odd = n >> n.trailing_zeros();
    if odd % 4 == 1 {
        1
    } else {
        -1
    }
}

/// `(−1)^{number of (possibly overlapping) 11 blocks in binary n}`.
pub fn rudin_shapiro(n: u64) -> i32 {
    if (n & (n >> 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceId {
    ThueMorse,
    Eta,
    Paperfolding,
    RudinShapiro,
    /// The ±1 sign sequence `f^(n)`, `1 ≤ n ≤ 25`.
    SignRep(u32),
}

impl SequenceId {
    pub const SIGN_REP_MAX: u32 = 25;
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceId::ThueMorse => write!(f, "tm"),
            SequenceId::Eta => write!(f, "eta"),
            SequenceId::Paperfolding => write!(f, "pf"),
            SequenceId::RudinShapiro => write!(f, "rs"),
            SequenceId::SignRep(n) => write!(f, "sign:{n}"),
        }
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tm" | "thue_morse" => Ok(SequenceId::ThueMorse),
            "eta" => Ok(SequenceId::Eta),
            "pf" | "paperfolding" => Ok(SequenceId::Paperfolding),
            "rs" | "rudin_shapiro" => Ok(SequenceId::RudinShapiro),
            _ => {
                let n = s
                    .strip_prefix("sign:")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| {
                        Error::Parse(format!(
                            "unknown sequence {s:?}; expected tm, pf, rs, eta or sign:<n>"
                        ))
                    })?;
                if !(1..=Self::SIGN_REP_MAX).contains(&n) {
                    return Err(Error::LevelOutOfRange {
                        what: "sign sequence",
                        n,
                        min: 1,
                        max: Self::SIGN_REP_MAX,
                        hint: "",
                    });
                }
                Ok(SequenceId::SignRep(n))
            }
        }
    }
}

/// Value of one of the ±1 automatic sequences.
pub fn automatic_value(id: SequenceId, n: u64) -> Result<i32> {
    match id {
        SequenceId::ThueMorse => Ok(thue_morse(n)),
        SequenceId::Paperfolding => Ok(paperfolding(n)),
        SequenceId::RudinShapiro => Ok(rudin_shapiro(n)),
        other => Err(Error::Unsupported(format!(
            "{other} is not one of tm, pf, rs"
        ))),
    }
}

/// Memo table for exact values of `η`. Values are filled top-down along the
/// recursion, so a query for `m` adds `O(log m)` entries.
///
/// The cache is a plain value: share it behind a lock, or give each worker
/// its own and [`merge`](EtaCache::merge) afterwards.
#[derive(Clone, Debug, Default)]
pub struct EtaCache {
    values: HashMap<u64, Rational>,
}

const SNAPSHOT_MAGIC: &[u8; 8] = b"ETACACH1";
const SNAPSHOT_SPOT_CHECKS: usize = 256;

impl EtaCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&mut self, m: u64) -> Rational {
        if m == 0 {
            return Rational::from(1);
        }
        if m == 1 {
            return Rational::new(-1, 3);
        }
        if let Some(v) = self.values.get(&m) {
            return v.clone();
        }
        let v = if m.is_multiple_of(2) {
            self.get(m / 2)
        } else {
            let half = m / 2;
            let a = self.get(half);
            let b = self.get(half + 1);
            -(a + b) / Rational::from(2)
        };
        self.values.insert(m, v.clone());
        v
    }

    pub fn merge(&mut self, other: EtaCache) {
        self.values.extend(other.values);
    }

    /// Writes a binary snapshot: magic, entry count, then per entry the index
    /// and the numerator/denominator as length-prefixed little-endian
    /// two's-complement bytes. Entries are sorted by index.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        out.extend_from_slice(SNAPSHOT_MAGIC);
        out.extend_from_slice(&(self.values.len() as u64).to_le_bytes());
        let mut keys: Vec<_> = self.values.keys().copied().collect();
        keys.sort_unstable();
        for m in keys {
            let v = &self.values[&m];
            out.extend_from_slice(&m.to_le_bytes());
            for part in [v.numer(), v.denom()] {
                let bytes = part.to_signed_bytes_le();
                out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
                out.extend_from_slice(&bytes);
            }
        }
        std::fs::File::create(path)?.write_all(&out)?;
        Ok(())
    }

    /// Loads a snapshot and re-derives a sample of its entries from the
    /// recursion; any disagreement rejects the whole file.
    pub fn load(path: &Path) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        let mut r = SnapshotReader { buf: &buf, pos: 0 };
        if r.take(8)? != SNAPSHOT_MAGIC {
            return Err(Error::CorruptCache("bad magic".into()));
        }
        let count = r.u64()?;
        let mut values = HashMap::with_capacity(count.min(1 << 20) as usize);
        for _ in 0..count {
            let m = r.u64()?;
            let num = BigInt::from_signed_bytes_le(r.chunk()?);
            let den = BigInt::from_signed_bytes_le(r.chunk()?);
            if !den.is_positive() {
                return Err(Error::CorruptCache(format!(
                    "non-positive denominator at {m}"
                )));
            }
            values.insert(m, Rational::from_bigints(num, den)?);
        }
        if r.pos != buf.len() {
            return Err(Error::CorruptCache("trailing bytes".into()));
        }
        let cache = EtaCache { values };
        cache.spot_check()?;
        Ok(cache)
    }

    fn spot_check(&self) -> Result<()> {
        let mut keys: Vec<_> = self.values.keys().copied().collect();
        keys.sort_unstable();
        let step = (keys.len() / SNAPSHOT_SPOT_CHECKS).max(1);
        for &m in keys.iter().step_by(step) {
            if EtaCache::new().get(m) != self.values[&m] {
                return Err(Error::CorruptCache(format!(
                    "value at index {m} does not satisfy the recursion"
                )));
            }
        }
        Ok(())
    }
}

struct SnapshotReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> SnapshotReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::CorruptCache("truncated".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn chunk(&mut self) -> Result<&'a [u8]> {
        let len = u32::from_le_bytes(self.take(4)?.try_into().unwrap());
        self.take(len as usize)
    }
}

/// Exact `η(m)`.
pub fn eta(m: u64) -> Rational {
    EtaCache::new().get(m)
}

/// Dense table of `η(0..=max_index)` held as integers `3·2^K·η(m)` with a
/// common scale: `3η(m)` is dyadic with at most `bitlen(m)` binary places,
/// so `K = bitlen(max_index)` keeps every entry integral.
#[derive(Clone, Debug)]
pub struct EtaTable {
    scale_exp: u32,
    scaled: Vec<i64>,
}

impl EtaTable {
    pub fn new(max_index: u64) -> Result<Self> {
        if max_index > TABLE_MAX_INDEX {
            return Err(Error::Unsupported(format!(
                "eta table limited to indices <= {TABLE_MAX_INDEX}, got {max_index}"
            )));
        }
        let k = 64 - max_index.max(1).leading_zeros();
        let len = max_index as usize + 1;
        let mut scaled = vec![0i64; len.max(2)];
        scaled[0] = 3i64 << k;
        scaled[1] = -(1i64 << k);
        for m in 2..len {
            scaled[m] = if m % 2 == 0 {
                scaled[m / 2]
            } else {
                let s = scaled[m / 2] + scaled[m / 2 + 1];
                assert!(s % 2 == 0, "scale too small at {m}");
                -s / 2
            };
        }
        scaled.truncate(len);
        Ok(EtaTable {
            scale_exp: k,
            scaled,
        })
    }

    pub fn max_index(&self) -> u64 {
        self.scaled.len() as u64 - 1
    }

    /// `η(m)·3·2^K`.
    pub fn scaled(&self, m: u64) -> i64 {
        self.scaled[m as usize]
    }

    pub fn scaled_values(&self) -> &[i64] {
        &self.scaled
    }

    /// The common denominator `3·2^K`.
    pub fn denominator(&self) -> BigInt {
        BigInt::from(self.denominator_i128())
    }

    fn denominator_i128(&self) -> i128 {
        3 << self.scale_exp
    }

    pub fn get(&self, m: u64) -> Rational {
        Rational::from_bigints(BigInt::from(self.scaled(m)), self.denominator()).expect("positive")
    }

    pub fn get_f64(&self, m: u64) -> f64 {
        self.scaled(m) as f64 / (3.0 * (self.scale_exp as f64).exp2())
    }
}

/// Running sums `Σ_{m≤x} f(m)η(m)` for `x = 0..=x_max`, stored as integer
/// numerators over one common denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistSeries {
    pub id: SequenceId,
    denominator: i128,
    sums: Vec<i128>,
}

impl TwistSeries {
    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn value(&self, x: u64) -> Rational {
        Rational::from_bigints(
            BigInt::from(self.sums[x as usize]),
            BigInt::from(self.denominator),
        )
        .expect("positive")
    }

    /// Numerator and denominator of the value at `x` in lowest terms.
    pub fn reduced(&self, x: u64) -> (i128, i128) {
        let num = self.sums[x as usize];
        let g = num.gcd(&self.denominator);
        (num / g, self.denominator / g)
    }

    pub fn value_f64(&self, x: u64) -> f64 {
        self.value(x).to_f64()
    }

    /// `x^{−1/2}·Σ_{m≤x}`, with the factor taken as 1 at `x = 0`.
    pub fn sqrt_normalized(&self, x: u64) -> f64 {
        self.value_f64(x) / (x.max(1) as f64).sqrt()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Rational)> + '_ {
        (0..self.sums.len() as u64).map(|x| (x, self.value(x)))
    }

    pub fn last(&self) -> Option<Rational> {
        (!self.sums.is_empty()).then(|| self.value(self.sums.len() as u64 - 1))
    }
}

/// Exact running sums of `f·η`. With `id = Eta` the twist is `η` itself,
/// so the series is `Σ η²`.
pub fn twisted_sum_series(id: SequenceId, x_max: u64) -> Result<TwistSeries> {
    let table = EtaTable::new(x_max)?;
    twisted_sum_series_with(&table, id, x_max)
}

pub fn twisted_sum_series_with(
    table: &EtaTable,
    id: SequenceId,
    x_max: u64,
) -> Result<TwistSeries> {
    if x_max > table.max_index() {
        return Err(Error::Unsupported(format!(
            "table covers indices <= {}",
            table.max_index()
        )));
    }
    let eta = &table.scaled_values()[..=x_max as usize];
    let terms: Box<dyn Iterator<Item = i128>> = match id {
        SequenceId::Eta => Box::new(eta.iter().map(|&e| e as i128 * e as i128)),
        SequenceId::SignRep(n) => {
            let sign = SignRep::new(n)?;
            Box::new(
                eta.iter()
                    .enumerate()
                    .map(move |(m, &e)| sign.value(m as u64) as i128 * e as i128),
            )
        }
        _ => {
            automatic_value(id, 0)?;
            Box::new(eta.iter().enumerate().map(move |(m, &e)| {
                automatic_value(id, m as u64).expect("checked") as i128 * e as i128
            }))
        }
    };
    let mut acc = 0i128;
    let sums = terms
        .map(|t| {
            acc += t;
            acc
        })
        .collect();
    let denominator = match id {
        SequenceId::Eta => table.denominator_i128() * table.denominator_i128(),
        _ => table.denominator_i128(),
    };
    Ok(TwistSeries {
        id,
        denominator,
        sums,
    })
}

/// Exact `Σ_{m≤x} |η(m)|`.
pub fn abs_eta_partial_sum(x: u64) -> Result<Rational> {
    let table = EtaTable::new(x)?;
    let total: i128 = table.scaled_values().iter().map(|&v| v.abs() as i128).sum();
    Rational::from_bigints(BigInt::from(total), table.denominator())
}

/// Exact `Σ_{m≤x} η(m)`.
pub fn eta_partial_sum(x: u64) -> Result<Rational> {
    let table = EtaTable::new(x)?;
    let total: i128 = table.scaled_values().iter().map(|&v| v as i128).sum();
    Rational::from_bigints(BigInt::from(total), table.denominator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linrep::{builtin, Representation};

    #[test]
    fn thue_morse_values() {
        assert_eq!(thue_morse(0), 1);
        assert_eq!(thue_morse(1), -1);
        assert_eq!(thue_morse(5), 1);
        for k in 0..500u64 {
            assert_eq!(thue_morse(2 * k), thue_morse(k));
            assert_eq!(thue_morse(2 * k + 1), -thue_morse(k));
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(1), Rational::new(-1, 3));
        assert_eq!(eta(1 << 10), Rational::new(-1, 3));
        assert_eq!(eta(3), Rational::new(1, 3));
        assert_eq!(eta((1 << 10) + (1 << 8)), Rational::from(0));
    }

    #[test]
    fn automatic_examples() {
        assert_eq!(rudin_shapiro(3), -1);
        assert_eq!(rudin_shapiro(0), 1);
        assert_eq!(rudin_shapiro(7), 1); // 111 has two overlapping 11s
        assert_eq!(paperfolding(1), 1);
        assert_eq!(paperfolding(3), -1);
        assert_eq!(paperfolding(0), 1);
        assert_eq!(paperfolding(12), -1); // 12 = 4·3
        assert!(automatic_value(SequenceId::Eta, 3).is_err());
        assert!(automatic_value(SequenceId::SignRep(3), 3).is_err());
    }

    #[test]
    fn sequence_ids_parse() {
        assert_eq!("tm".parse::<SequenceId>().unwrap(), SequenceId::ThueMorse);
        assert_eq!(
            "sign:7".parse::<SequenceId>().unwrap(),
            SequenceId::SignRep(7)
        );
        assert!("sign:0".parse::<SequenceId>().is_err());
        assert!("sign:26".parse::<SequenceId>().is_err());
        assert!("xyz".parse::<SequenceId>().is_err());
        for id in ["tm", "eta", "pf", "rs", "sign:4"] {
            assert_eq!(id.parse::<SequenceId>().unwrap().to_string(), id);
        }
    }

    #[test]
    fn table_agrees_with_cache_and_linrep() {
        let table = EtaTable::new(1 << 16).unwrap();
        let rep = builtin::eta();
        let mut cache = EtaCache::new();
        for m in (0..=1u64 << 16).step_by(97).chain([1, 2, 3, 65535, 65536]) {
            assert_eq!(table.get(m), cache.get(m), "m = {m}");
            assert_eq!(table.get(m), rep.evaluate(m), "m = {m}");
        }
    }

    #[test]
    fn twist_examples() {
        assert_eq!(
            twisted_sum_series(SequenceId::ThueMorse, 3)
                .unwrap()
                .last()
                .unwrap(),
            Rational::from(2)
        );
        assert_eq!(
            twisted_sum_series(SequenceId::Eta, 1)
                .unwrap()
                .last()
                .unwrap(),
            Rational::new(10, 9)
        );
        let pf = twisted_sum_series(SequenceId::Paperfolding, 0).unwrap();
        assert_eq!(pf.iter().collect::<Vec<_>>(), vec![(0, Rational::from(1))]);
        let tm = twisted_sum_series(SequenceId::ThueMorse, 1000).unwrap();
        for x in [0, 1, 7, 999, 1000] {
            let (p, q) = tm.reduced(x);
            assert_eq!(
                Rational::from_bigints(p.into(), q.into()).unwrap(),
                tm.value(x)
            );
            assert_eq!(tm.value(x).denom().to_string(), q.to_string());
        }
    }

    #[test]
    fn abs_sums() {
        assert_eq!(abs_eta_partial_sum(0).unwrap(), Rational::from(1));
        assert_eq!(abs_eta_partial_sum(3).unwrap(), Rational::from(2));
        // η(0..=7) = 1, -1/3, -1/3, 1/3, -1/3, 0, 1/3, 0
        assert_eq!(abs_eta_partial_sum(7).unwrap(), Rational::new(8, 3));
        assert!(abs_eta_partial_sum(TABLE_MAX_INDEX + 1).is_err());
    }

    #[test]
    fn cache_merge_and_snapshot() {
        let mut a = EtaCache::new();
        a.get(1000);
        let mut b = EtaCache::new();
        b.get(777_777);
        let total = a.len() + b.len();
        a.merge(b);
        assert!(a.len() <= total && !a.is_empty());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("eta.bin");
        a.save(&path).unwrap();
        let loaded = EtaCache::load(&path).unwrap();
        assert_eq!(loaded.values, a.values);

        // corrupt one value: flip the snapshot to claim η(3) = 1
        let mut bad = EtaCache::new();
        bad.values.insert(3, Rational::from(1));
        bad.save(&path).unwrap();
        assert!(matches!(EtaCache::load(&path), Err(Error::CorruptCache(_))));

        std::fs::write(&path, b"nonsense").unwrap();
        assert!(EtaCache::load(&path).is_err());
    }
}
