//! Perfect state transfer: rational parity classes, numeric scans and exact
//! certificates.

pub mod align;
pub mod certificate;
pub mod rational;
pub mod scan;
pub mod table;

pub use align::{align_phases, AlignmentOutcome, PiMultiple};
pub use certificate::{
    integer_weight_unit, pst_certificate, strong_cospectrality, CospectralSign, PstCertificate,
    Verdict,
};
pub use rational::{classify_rational, rational_reconstruct, ParityClass, RationalClass};
pub use scan::{fidelity_series, max_fidelity_scan, FidelitySeries, NumericVerdict, ScanResult};
pub use table::{pst_table, TableRow};
