//! Reference multiplications with their reference shot budgets, product
//! bit lengths and qubit counts.

/// One reference row. `bits` is the bit length of the scaled integer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceCase {
    pub id: u32,
    pub u: &'static str,
    pub v: &'static str,
    pub product: &'static str,
    pub shots: u64,
    pub bits: u64,
    pub qubits: usize,
    /// Set when the reference bit length cannot be reproduced.
    pub bits_note: Option<&'static str>,
}

pub const ROW16_BITS_NOTE: &str = "reference bit length assumes one extra decimal place of scaling \
(10^15); the minimal 10^6 x 10^8 scaling gives an 85-bit mantissa product";

macro_rules! case {
    ($id:expr, $u:expr, $v:expr, $p:expr, $shots:expr, $bits:expr, $q:expr) => {
        case!($id, $u, $v, $p, $shots, $bits, $q, None)
    };
    ($id:expr, $u:expr, $v:expr, $p:expr, $shots:expr, $bits:expr, $q:expr, $note:expr) => {
        ReferenceCase {
            id: $id,
            u: $u,
            v: $v,
            product: $p,
            shots: $shots,
            bits: $bits,
            qubits: $q,
            bits_note: $note,
        }
    };
}

pub const REFERENCE_CASES: [ReferenceCase; 16] = [
    case!(1, "3", "5", "15", 100_000, 4, 4),
    case!(2, "33", "100", "3300", 100_000, 12, 7),
    case!(3, "2345", "5678", "13314910", 100_000, 24, 9),
    case!(4, "234501", "567801", "133149902301", 100_000, 37, 11),
    case!(5, "23450101", "56780101", "1331499103240201", 1_000_000, 51, 11),
    case!(6, "2345010101", "5678010101", "13314991040425030201", 1_000_000, 64, 12),
    case!(
        7,
        "8978923748987",
        "8984957438475849",
        "80675247727968202502337714963",
        5_000_000,
        97,
        13
    ),
    case!(
        8,
        "24587098456973459873",
        "93847898723487384738",
        "2307447525894458211799840656192155618274",
        50_000_000,
        131,
        15
    ),
    case!(
        9,
        "98734587398457983758948",
        "87234593847548978394754",
        "8613071630409809722603055112891858675923758792",
        50_000_000,
        153,
        15
    ),
    case!(
        10,
        "87349853987589789837437878",
        "94543085490894758478947548",
        "8258324713165875922142248753007708733319714270423144",
        50_000_000,
        173,
        15
    ),
    case!(
        11,
        "98734574983957438978459843787",
        "91398475934873485748398475397",
        "9024189675611195666675703027302141983724295908377582808439",
        100_000_000,
        193,
        15
    ),
    case!(
        12,
        "87892734987329734982798374239878729",
        "99787498783927389473829348739287348",
        "8770596185664218247269027408953463166804991960126150471650153404020692",
        100_000_000,
        233,
        15
    ),
    case!(
        13,
        "98789236479326873476287376473627847267623",
        "92934837483278492837489283478928374829373",
        "9180961637303410170533798160931075913254844659074625888400424445374174806892290379",
        100_000_000,
        273,
        17
    ),
    case!(14, "0.567", "0.0004", "0.0002268", 100_000, 12, 7),
    case!(15, "2.5", "1.75", "4.375", 100_000, 13, 7),
    case!(
        16,
        "136872.345502",
        "2343651.74543455",
        "320781111437.483078727894100",
        5_000_000,
        89,
        13,
        Some(ROW16_BITS_NOTE)
    ),
];

pub fn reference_case(id: u32) -> Option<&'static ReferenceCase> {
    REFERENCE_CASES.iter().find(|c| c.id == id)
}
