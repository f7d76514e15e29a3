//! Built-in systems and condensations with exact reference values of the
//! order parameter.
//!
//! Label orders: toric code `(1, Y, X, Z)`, `Rep(S_3)` `(1, X, Y)`, `Z_N`
//! `("0", …, "N-1")`. Reference values are sums of `coeff · log(k)` terms in
//! natural logarithms.

use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::branching::BranchingData;
use crate::channels::SectorState;
use crate::error::{Error, Result};
use crate::io::rational_text;
use crate::system::AnyonSystem;

/// Largest `N` accepted for the parameterized `zN-*` entries.
pub const MAX_CYCLIC_ORDER: u32 = 64;

/// `coeff · log(log_of)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogTerm {
    #[serde(with = "rational_text")]
    pub coeff: Rational64,
    pub log_of: u64,
}

impl LogTerm {
    pub fn new(coeff: (i64, i64), log_of: u64) -> Self {
        LogTerm {
            coeff: Rational64::new(coeff.0, coeff.1),
            log_of,
        }
    }

    pub fn value(&self) -> f64 {
        ratio_to_f64(self.coeff) * (self.log_of as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenPair {
    #[serde(with = "rational_text::vec")]
    pub state: Vec<Rational64>,
    pub value: Vec<LogTerm>,
}

impl GoldenPair {
    pub fn probs(&self) -> Vec<f64> {
        self.state.iter().copied().map(ratio_to_f64).collect()
    }

    pub fn state_on(&self, system: &Arc<AnyonSystem>) -> Result<SectorState> {
        SectorState::new(system.clone(), self.probs())
    }

    /// Expected order parameter in nats.
    pub fn expected(&self) -> f64 {
        self.value.iter().map(LogTerm::value).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub branching: BranchingData,
    pub expected: Vec<GoldenPair>,
}

pub(crate) fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn golden(state: &[(i64, i64)], value: &[((i64, i64), u64)]) -> GoldenPair {
    GoldenPair {
        state: state.iter().map(|&(n, d)| Rational64::new(n, d)).collect(),
        value: value.iter().map(|&(c, k)| LogTerm::new(c, k)).collect(),
    }
}

const ZERO: (i64, i64) = (0, 1);
const ONE: (i64, i64) = (1, 1);
const HALF: (i64, i64) = (1, 2);
const THIRD: (i64, i64) = (1, 3);

fn zero_on(n: usize) -> Vec<(i64, i64)> {
    vec![ZERO; n]
}

/// Toric code `(1, Y, X, Z)` with `X` the fermion.
pub fn toric_code() -> AnyonSystem {
    AnyonSystem::new(["1", "Y", "X", "Z"], vec![1.0; 4], "1")
        .and_then(|s| s.with_dual([("1", "1"), ("Y", "Y"), ("X", "X"), ("Z", "Z")]))
        .and_then(|s| {
            s.with_twist([
                ("1", Rational64::from_integer(0)),
                ("Y", Rational64::from_integer(0)),
                ("X", Rational64::new(1, 2)),
                ("Z", Rational64::from_integer(0)),
            ])
        })
        .expect("toric code data is consistent")
}

/// `Rep(S_3)`: trivial, sign and two-dimensional irreps.
pub fn rep_s3() -> AnyonSystem {
    AnyonSystem::new(["1", "X", "Y"], vec![1.0, 1.0, 2.0], "1")
        .and_then(|s| s.with_dual([("1", "1"), ("X", "X"), ("Y", "Y")]))
        .expect("Rep(S3) data is consistent")
}

/// `Z_N` with labels `"0"..` and `r ↦ -r mod N` as antiparticle map.
pub fn cyclic(order: u32) -> Result<AnyonSystem> {
    if order == 0 || order > MAX_CYCLIC_ORDER {
        return Err(Error::malformed(
            "N",
            format!("must be between 1 and {MAX_CYCLIC_ORDER}, got {order}"),
        ));
    }
    let labels: Vec<String> = (0..order).map(|r| r.to_string()).collect();
    let duals: Vec<String> = (0..order)
        .map(|r| ((order - r) % order).to_string())
        .collect();
    AnyonSystem::new(labels.clone(), vec![1.0; order as usize], "0")?.with_dual(
        labels
            .iter()
            .map(String::as_str)
            .zip(duals.iter().map(String::as_str)),
    )
}

/// Source systems by name: `toric`, `repS3` or `zN`.
pub fn system(name: &str) -> Result<AnyonSystem> {
    match name {
        "toric" => Ok(toric_code()),
        "repS3" => Ok(rep_s3()),
        _ => name
            .strip_prefix('z')
            .filter(|n| !n.starts_with(['0', '+']))
            .and_then(|n| n.parse::<u32>().ok())
            .filter(|n| (1..=MAX_CYCLIC_ORDER).contains(n))
            .map_or_else(|| Err(Error::UnknownCatalogEntry(name.to_owned())), cyclic),
    }
}

fn self_dual(labels: &[&str], dims: Vec<f64>) -> AnyonSystem {
    AnyonSystem::new(labels.iter().copied(), dims, "phi")
        .and_then(|s| s.with_dual(labels.iter().map(|l| (*l, *l))))
        .expect("condensed data is consistent")
}

fn toric_condensation(id: &str, partner: &str) -> CatalogEntry {
    let source = Arc::new(toric_code());
    let condensed = self_dual(&["phi", "XX"], vec![1.0, 1.0]);
    let n = source
        .labels()
        .iter()
        .map(|l| match l.as_str() {
            "1" => vec![1, 0],
            x if x == partner => vec![1, 0],
            _ => vec![0, 1],
        })
        .collect();
    let branching = BranchingData::new(source.clone(), condensed, n).expect("shape");
    let partner_idx = source.index_of(partner).expect("toric label");
    let mut expected = Vec::new();
    let mut pair = zero_on(4);
    pair[0] = HALF;
    pair[partner_idx] = HALF;
    expected.push(golden(&pair, &[]));
    let other_boson = if partner == "Y" { 3 } else { 1 };
    let mut mixed = zero_on(4);
    mixed[0] = HALF;
    mixed[other_boson] = HALF;
    expected.push(golden(&mixed, &[(ONE, 2)]));
    // thirds with the zero in each position
    for hole in 0..4 {
        let mut s = vec![THIRD; 4];
        s[hole] = ZERO;
        expected.push(golden(&s, &[(THIRD, 2)]));
    }
    CatalogEntry {
        id: id.to_owned(),
        description: format!("toric code, condensing 1 + {partner}"),
        branching,
        expected,
    }
}

fn rep_s3_entry(
    id: &str,
    description: &str,
    condensed: AnyonSystem,
    n: Vec<Vec<u32>>,
    values: [&[((i64, i64), u64)]; 5],
) -> CatalogEntry {
    let branching = BranchingData::new(rep_s3(), condensed, n).expect("shape");
    let states: [[(i64, i64); 3]; 5] = [
        [ONE, ZERO, ZERO],
        [HALF, HALF, ZERO],
        [HALF, ZERO, HALF],
        [ZERO, HALF, HALF],
        [THIRD, THIRD, THIRD],
    ];
    CatalogEntry {
        id: id.to_owned(),
        description: description.to_owned(),
        branching,
        expected: states
            .iter()
            .zip(values)
            .map(|(s, v)| golden(s, v))
            .collect(),
    }
}

fn rep_s3_1x() -> CatalogEntry {
    rep_s3_entry(
        "repS3-1X",
        "Rep(S3), condensing 1 + X; Y splits into two sectors",
        self_dual(&["phi", "t1", "t2"], vec![1.0; 3]),
        vec![vec![1, 0, 0], vec![1, 0, 0], vec![0, 1, 1]],
        [&[(ONE, 2)], &[], &[(HALF, 2)], &[(HALF, 2)], &[]],
    )
}

fn rep_s3_1y() -> CatalogEntry {
    rep_s3_entry(
        "repS3-1Y",
        "Rep(S3), condensing 1 + Y",
        self_dual(&["phi", "XX"], vec![1.0, 1.0]),
        vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        [
            &[(ONE, 3)],
            &[(ONE, 3)],
            &[(HALF, 3), ((-1, 2), 2)],
            &[(HALF, 3), ((-1, 2), 2)],
            &[(THIRD, 2)],
        ],
    )
}

fn rep_s3_lagrangian() -> CatalogEntry {
    rep_s3_entry(
        "repS3-lagrangian",
        "Rep(S3), Lagrangian algebra 1 + X + 2Y",
        self_dual(&["phi"], vec![1.0]),
        vec![vec![1], vec![1], vec![2]],
        [
            &[(ONE, 6)],
            &[(ONE, 3)],
            &[(ONE, 3), ((-1, 1), 2)],
            &[(ONE, 3), ((-1, 1), 2)],
            &[(THIRD, 2)],
        ],
    )
}

fn cyclic_full(order: u32) -> Result<CatalogEntry> {
    if order < 2 {
        return Err(Error::UnknownCatalogEntry(format!("z{order}-full")));
    }
    let source = Arc::new(cyclic(order)?);
    let n = order as usize;
    let condensed = self_dual(&["phi"], vec![1.0]);
    let branching = BranchingData::new(source, condensed, vec![vec![1]; n])?;
    let big = u64::from(order);
    let uniform = vec![(1, i64::from(order)); n];
    let mut first = zero_on(n);
    first[0] = ONE;
    let mut last = zero_on(n);
    last[n - 1] = ONE;
    let mut half = zero_on(n);
    half[0] = HALF;
    half[1] = HALF;
    let half_value: Vec<((i64, i64), u64)> = if order == 2 {
        Vec::new()
    } else {
        vec![(ONE, big), ((-1, 1), 2)]
    };
    Ok(CatalogEntry {
        id: format!("z{order}-full"),
        description: format!("Z_{order}, full condensation to the trivial theory"),
        branching,
        expected: vec![
            golden(&half, &half_value),
            golden(&first, &[(ONE, big)]),
            golden(&last, &[(ONE, big)]),
            golden(&uniform, &[]),
        ],
    })
}

/// Identity condensation onto a copy of the source system.
fn trivial(id: String, source: AnyonSystem) -> CatalogEntry {
    let source = Arc::new(source);
    let len = source.len();
    let n = (0..len)
        .map(|a| (0..len).map(|t| u32::from(a == t)).collect())
        .collect();
    let branching = BranchingData::new(source.clone(), source.clone(), n).expect("square");
    let uniform: Vec<(i64, i64)> = vec![(1, len as i64); len];
    let mut point = zero_on(len);
    point[source.vacuum()] = ONE;
    CatalogEntry {
        description: format!(
            "identity condensation of {}",
            id.trim_end_matches("-trivial")
        ),
        id,
        branching,
        expected: vec![golden(&point, &[]), golden(&uniform, &[])],
    }
}

/// Every built-in entry, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    [
        "z2-full",
        "z3-full",
        "toric-1Y",
        "toric-1Z",
        "repS3-1X",
        "repS3-1Y",
        "repS3-lagrangian",
        "z2-trivial",
        "z3-trivial",
        "toric-trivial",
        "repS3-trivial",
    ]
    .iter()
    .map(|id| entry(id).expect("built-in id"))
    .collect()
}

/// Looks up an entry; `zN-full` and `zN-trivial` accept any `N` up to
/// [`MAX_CYCLIC_ORDER`].
pub fn entry(id: &str) -> Result<CatalogEntry> {
    match id {
        "toric-1Y" => return Ok(toric_condensation(id, "Y")),
        "toric-1Z" => return Ok(toric_condensation(id, "Z")),
        "repS3-1X" => return Ok(rep_s3_1x()),
        "repS3-1Y" => return Ok(rep_s3_1y()),
        "repS3-lagrangian" => return Ok(rep_s3_lagrangian()),
        "toric-trivial" => return Ok(trivial(id.to_owned(), toric_code())),
        "repS3-trivial" => return Ok(trivial(id.to_owned(), rep_s3())),
        _ => {}
    }
    let unknown = || Error::UnknownCatalogEntry(id.to_owned());
    let rest = id.strip_prefix('z').ok_or_else(unknown)?;
    let (order, kind) = rest.split_once('-').ok_or_else(unknown)?;
    if order.starts_with('0') || order.starts_with('+') {
        return Err(unknown());
    }
    let order: u32 = order.parse().map_err(|_| unknown())?;
    if !(2..=MAX_CYCLIC_ORDER).contains(&order) {
        return Err(unknown());
    }
    match kind {
        "full" => cyclic_full(order),
        "trivial" => Ok(trivial(id.to_owned(), cyclic(order)?)),
        _ => Err(unknown()),
    }
}
