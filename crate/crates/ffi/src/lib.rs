//! C ABI for the voucherkit library.
//!
//! All entry points follow the same conventions: objects cross the boundary
//! as opaque handles created by `vk_*_new`-style constructors and released
//! by the matching `vk_*_free`; every fallible call returns a [`vk_status`]
//! code and writes results through out-pointers, and the most recent error
//! message is retrievable per thread via [`vk_last_error`]. Voucher types
//! are addressed by their fixed index (0 accommodation, 1 dining,
//! 2 cultural, 3 sports, 4 market, 5 agricultural).

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use voucherkit::inference::{
    stratified_bootstrap, BootstrapConfig, InferenceError, Metric, PercentileMode,
};
use voucherkit::leontief::{impact, DemandVector, LeontiefError, SectorTable};
use voucherkit::survey::{
    ingest, Dataset, GroupKey, StratificationScheme, SurveyError, VoucherConfig, VoucherKind, Wave,
};

/// Result codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum vk_status {
    VK_OK = 0,
    /// A required pointer argument was null.
    VK_NULL_ARGUMENT = 1,
    /// A string argument was not valid UTF-8.
    VK_UTF8 = 2,
    /// Configuration could not be parsed or is inconsistent.
    VK_CONFIG = 3,
    /// Input data failed validation.
    VK_VALIDATION = 4,
    /// Numeric failure (singular matrix, undefined estimate).
    VK_NUMERIC = 5,
    /// An index or dimension argument is out of range.
    VK_RANGE = 6,
    /// The callee panicked; the handle state is unchanged.
    VK_INTERNAL = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: vk_status, message: &str) -> vk_status {
    set_error(message);
    status
}

fn survey_status(e: &SurveyError) -> vk_status {
    match e {
        SurveyError::Config(_) | SurveyError::Schedule(_) | SurveyError::Scheme(_) => {
            vk_status::VK_CONFIG
        }
        _ => vk_status::VK_VALIDATION,
    }
}

fn inference_status(e: &InferenceError) -> vk_status {
    match e {
        InferenceError::BadAlpha(_)
        | InferenceError::NoReplications
        | InferenceError::IncompatibleSchemes { .. } => vk_status::VK_CONFIG,
        InferenceError::EmptyStratum(_) | InferenceError::MissingWave { .. } => {
            vk_status::VK_VALIDATION
        }
        _ => vk_status::VK_NUMERIC,
    }
}

fn leontief_status(e: &LeontiefError) -> vk_status {
    match e {
        LeontiefError::Singular => vk_status::VK_NUMERIC,
        LeontiefError::Scenario(..) | LeontiefError::SectorOutOfRange { .. } => vk_status::VK_CONFIG,
        LeontiefError::DimensionMismatch { .. } => vk_status::VK_RANGE,
        _ => vk_status::VK_VALIDATION,
    }
}

/// Run `f`, converting panics into `VK_INTERNAL` instead of unwinding into C.
fn guarded(f: impl FnOnce() -> vk_status) -> vk_status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(vk_status::VK_INTERNAL, "internal panic"),
    }
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, vk_status> {
    if ptr.is_null() {
        return Err(vk_status::VK_NULL_ARGUMENT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| vk_status::VK_UTF8)
}

fn voucher_from_index(index: u32) -> Result<VoucherKind, vk_status> {
    VoucherKind::ALL.get(index as usize).copied().ok_or(vk_status::VK_RANGE)
}

/// Voucher configuration handle.
pub struct vk_voucher_config {
    inner: VoucherConfig,
}

/// Survey dataset handle.
pub struct vk_dataset {
    inner: Dataset,
}

/// Sector table handle.
pub struct vk_sector_table {
    inner: SectorTable,
}

/// Which estimator a bootstrap call resamples.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum vk_metric {
    /// Expenditure substitution rate.
    VK_METRIC_ES = 0,
    /// Induced consumption rate.
    VK_METRIC_IC = 1,
}

/// A confidence region: percentile intervals for the bias-adjusted lower
/// bound and the unadjusted upper bound, plus their hull.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct vk_region {
    pub point: f64,
    pub lower_lo: f64,
    pub lower_hi: f64,
    pub upper_lo: f64,
    pub upper_hi: f64,
    pub combined_lo: f64,
    pub combined_hi: f64,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the current thread's last error message into `buf` (truncated to
/// `len − 1` bytes, always NUL-terminated when `len > 0`). Returns the full
/// message length in bytes, excluding the NUL.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be null (the call then only
/// reports the length).
#[no_mangle]
pub unsafe extern "C" fn vk_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && len > 0 {
            let copy = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, copy);
            *buf.add(copy) = 0;
        }
        bytes.len()
    })
}

/// Create the built-in voucher configuration.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vk_voucher_config_default(out: *mut *mut vk_voucher_config) -> vk_status {
    guarded(|| {
        if out.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "out is null");
        }
        let handle = Box::new(vk_voucher_config { inner: VoucherConfig::builtin().clone() });
        *out = Box::into_raw(handle);
        vk_status::VK_OK
    })
}

/// Parse a voucher configuration from TOML text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vk_voucher_config_from_toml(
    text: *const c_char,
    out: *mut *mut vk_voucher_config,
) -> vk_status {
    guarded(|| {
        if out.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "out is null");
        }
        let text = match cstr(text) {
            Ok(t) => t,
            Err(status) => return fail(status, "text is not a valid string"),
        };
        match VoucherConfig::from_toml_str(text) {
            Ok(config) => {
                *out = Box::into_raw(Box::new(vk_voucher_config { inner: config }));
                vk_status::VK_OK
            }
            Err(e) => fail(survey_status(&e), &e.to_string()),
        }
    })
}

/// Release a configuration handle (null is a no-op).
///
/// # Safety
/// `config` must have been returned by a `vk_voucher_config_*` constructor
/// and not freed before.
#[no_mangle]
pub unsafe extern "C" fn vk_voucher_config_free(config: *mut vk_voucher_config) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Ingest a survey from CSV text (same schema as the CLI file format).
///
/// # Safety
/// `text` must be NUL-terminated; `config` a live configuration handle;
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vk_dataset_from_csv(
    text: *const c_char,
    config: *const vk_voucher_config,
    out: *mut *mut vk_dataset,
) -> vk_status {
    guarded(|| {
        if out.is_null() || config.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "config/out is null");
        }
        let text = match cstr(text) {
            Ok(t) => t,
            Err(status) => return fail(status, "text is not a valid string"),
        };
        match ingest(text.as_bytes(), &(*config).inner) {
            Ok(dataset) => {
                *out = Box::into_raw(Box::new(vk_dataset { inner: dataset }));
                vk_status::VK_OK
            }
            Err(e) => fail(survey_status(&e), &e.to_string()),
        }
    })
}

/// Number of records in the dataset; 0 when the handle is null.
///
/// # Safety
/// `dataset` must be a live dataset handle or null.
#[no_mangle]
pub unsafe extern "C" fn vk_dataset_len(dataset: *const vk_dataset) -> usize {
    if dataset.is_null() {
        return 0;
    }
    (*dataset).inner.len()
}

/// Release a dataset handle (null is a no-op).
///
/// # Safety
/// `dataset` must have been returned by [`vk_dataset_from_csv`] and not
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn vk_dataset_free(dataset: *mut vk_dataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

unsafe fn overall_rate(
    dataset: *const vk_dataset,
    config: *const vk_voucher_config,
    voucher: u32,
    value: *mut f64,
    n: *mut usize,
    compute: impl Fn(&[&voucherkit::survey::SurveyRecord], &voucherkit::survey::VoucherSpec) -> Result<(f64, usize), String>,
) -> vk_status {
    if dataset.is_null() || config.is_null() || value.is_null() {
        return fail(vk_status::VK_NULL_ARGUMENT, "dataset/config/value is null");
    }
    let kind = match voucher_from_index(voucher) {
        Ok(kind) => kind,
        Err(status) => return fail(status, "voucher index out of range"),
    };
    let records = (*dataset).inner.records_of(kind, Some(Wave::Original));
    let spec = (*config).inner.spec(kind);
    match compute(&records, spec) {
        Ok((v, count)) => {
            *value = v;
            if !n.is_null() {
                *n = count;
            }
            vk_status::VK_OK
        }
        Err(message) => fail(vk_status::VK_NUMERIC, &message),
    }
}

/// Overall expenditure substitution rate of one voucher type
/// (original-wave records).
///
/// # Safety
/// `dataset` and `config` must be live handles; `value` must be valid;
/// `n` may be null.
#[no_mangle]
pub unsafe extern "C" fn vk_substitution_rate(
    dataset: *const vk_dataset,
    config: *const vk_voucher_config,
    voucher: u32,
    value: *mut f64,
    n: *mut usize,
) -> vk_status {
    guarded(|| {
        overall_rate(dataset, config, voucher, value, n, |records, _| {
            voucherkit::estimators::substitution_rate(records, GroupKey::overall())
                .map(|est| (est.value, est.n))
                .map_err(|e| e.to_string())
        })
    })
}

/// Overall induced consumption rate of one voucher type (original-wave
/// records).
///
/// # Safety
/// Same contract as [`vk_substitution_rate`].
#[no_mangle]
pub unsafe extern "C" fn vk_induced_rate(
    dataset: *const vk_dataset,
    config: *const vk_voucher_config,
    voucher: u32,
    value: *mut f64,
    n: *mut usize,
) -> vk_status {
    guarded(|| {
        overall_rate(dataset, config, voucher, value, n, |records, spec| {
            voucherkit::estimators::induced_rate(records, spec, GroupKey::overall())
                .map(|est| (est.value, est.n))
                .map_err(|e| e.to_string())
        })
    })
}

/// Stratified-bootstrap confidence region for the whole sample of one
/// voucher type. `strata` is a comma-separated dimension list
/// (`gender,residence,age` when null).
///
/// # Safety
/// `dataset` and `config` must be live handles; `strata` NUL-terminated or
/// null; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vk_bootstrap_overall(
    dataset: *const vk_dataset,
    config: *const vk_voucher_config,
    voucher: u32,
    metric: vk_metric,
    alpha: f64,
    replications: u32,
    seed: u64,
    strata: *const c_char,
    out: *mut vk_region,
) -> vk_status {
    guarded(|| {
        if dataset.is_null() || config.is_null() || out.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "dataset/config/out is null");
        }
        let kind = match voucher_from_index(voucher) {
            Ok(kind) => kind,
            Err(status) => return fail(status, "voucher index out of range"),
        };
        let scheme = if strata.is_null() {
            StratificationScheme::finest_default()
        } else {
            let text = match cstr(strata) {
                Ok(t) => t,
                Err(status) => return fail(status, "strata is not a valid string"),
            };
            match StratificationScheme::parse(text) {
                Ok(scheme) => scheme,
                Err(e) => return fail(vk_status::VK_CONFIG, &e.to_string()),
            }
        };
        let cfg = BootstrapConfig {
            replications,
            alpha,
            seed,
            scheme,
            mode: PercentileMode::TwoSided,
        };
        let metric = match metric {
            vk_metric::VK_METRIC_ES => Metric::Substitution,
            vk_metric::VK_METRIC_IC => Metric::Induced,
        };
        match stratified_bootstrap(&(*dataset).inner, metric, &cfg, kind, &(*config).inner) {
            Ok(run) => {
                let region = run
                    .regions
                    .iter()
                    .find(|r| r.group.is_overall())
                    .expect("bootstrap always reports the overall group");
                *out = vk_region {
                    point: region.point,
                    lower_lo: region.ci_lower.lo,
                    lower_hi: region.ci_lower.hi,
                    upper_lo: region.ci_upper.lo,
                    upper_hi: region.ci_upper.hi,
                    combined_lo: region.combined.lo,
                    combined_hi: region.combined.hi,
                };
                vk_status::VK_OK
            }
            Err(e) => fail(inference_status(&e), &e.to_string()),
        }
    })
}

/// Create the built-in 19-sector table.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vk_sector_table_default(out: *mut *mut vk_sector_table) -> vk_status {
    guarded(|| {
        if out.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "out is null");
        }
        *out = Box::into_raw(Box::new(vk_sector_table { inner: SectorTable::builtin().clone() }));
        vk_status::VK_OK
    })
}

/// Load a sector table from CSV text (same format as the CLI file).
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vk_sector_table_from_csv(
    text: *const c_char,
    out: *mut *mut vk_sector_table,
) -> vk_status {
    guarded(|| {
        if out.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "out is null");
        }
        let text = match cstr(text) {
            Ok(t) => t,
            Err(status) => return fail(status, "text is not a valid string"),
        };
        match voucherkit::leontief::load_table(text.as_bytes()) {
            Ok(table) => {
                *out = Box::into_raw(Box::new(vk_sector_table { inner: table }));
                vk_status::VK_OK
            }
            Err(e) => fail(leontief_status(&e), &e.to_string()),
        }
    })
}

/// Number of sectors; 0 when the handle is null.
///
/// # Safety
/// `table` must be a live table handle or null.
#[no_mangle]
pub unsafe extern "C" fn vk_sector_table_dim(table: *const vk_sector_table) -> usize {
    if table.is_null() {
        return 0;
    }
    (*table).inner.dim()
}

/// Release a sector-table handle (null is a no-op).
///
/// # Safety
/// `table` must have been returned by a `vk_sector_table_*` constructor and
/// not freed before.
#[no_mangle]
pub unsafe extern "C" fn vk_sector_table_free(table: *mut vk_sector_table) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Behaviorally adjusted final demand: `amounts[k] × (1 − es[k]) × (1 + ic[k])`
/// mapped onto each voucher's target sector. All three arrays hold one entry
/// per voucher in the fixed order; `demand_out` receives `dim` entries.
///
/// # Safety
/// `config` must be a live handle; `amounts`, `es`, `ic` must point to six
/// readable doubles; `demand_out` to `dim` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn vk_adjusted_demand(
    config: *const vk_voucher_config,
    amounts: *const f64,
    es: *const f64,
    ic: *const f64,
    dim: usize,
    demand_out: *mut f64,
) -> vk_status {
    guarded(|| {
        if config.is_null() || amounts.is_null() || es.is_null() || ic.is_null() || demand_out.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "argument is null");
        }
        let mut demand = vec![0.0; dim];
        for (i, kind) in VoucherKind::ALL.iter().enumerate() {
            let (amount, es_k, ic_k) = (*amounts.add(i), *es.add(i), *ic.add(i));
            if !(amount >= 0.0) || !(0.0..=1.0).contains(&es_k) || !(ic_k >= 0.0) {
                return fail(
                    vk_status::VK_CONFIG,
                    &format!("{kind}: amount must be ≥ 0, es in [0,1], ic ≥ 0"),
                );
            }
            let sector = (*config).inner.spec(*kind).target_sector;
            if sector == 0 || sector > dim {
                return fail(
                    vk_status::VK_RANGE,
                    &format!("{kind}: target sector {sector} outside 1..={dim}"),
                );
            }
            demand[sector - 1] += amount * (1.0 - es_k) * (1.0 + ic_k);
        }
        ptr::copy_nonoverlapping(demand.as_ptr(), demand_out, dim);
        vk_status::VK_OK
    })
}

/// Propagate a demand change: writes per-sector GDP contributions and the
/// total and output multiplier (`total / original_total`).
///
/// # Safety
/// `table` must be a live handle; `demand` must point to `dim` readable
/// doubles; `gdp_out` to `dim` writable doubles; `total`/`multiplier` may be
/// null.
#[no_mangle]
pub unsafe extern "C" fn vk_impact(
    table: *const vk_sector_table,
    demand: *const f64,
    dim: usize,
    original_total: f64,
    gdp_out: *mut f64,
    total: *mut f64,
    multiplier: *mut f64,
) -> vk_status {
    guarded(|| {
        if table.is_null() || demand.is_null() || gdp_out.is_null() {
            return fail(vk_status::VK_NULL_ARGUMENT, "table/demand/gdp_out is null");
        }
        let values: Vec<f64> = (0..dim).map(|i| *demand.add(i)).collect();
        let demand_vec = match DemandVector::new(values, true) {
            Ok(v) => v,
            Err(e) => return fail(leontief_status(&e), &e.to_string()),
        };
        match impact(&(*table).inner, &demand_vec, original_total, "ffi") {
            Ok(report) => {
                ptr::copy_nonoverlapping(report.gdp.as_ptr(), gdp_out, dim);
                if !total.is_null() {
                    *total = report.total;
                }
                if !multiplier.is_null() {
                    *multiplier = report.multiplier;
                }
                vk_status::VK_OK
            }
            Err(e) => fail(leontief_status(&e), &e.to_string()),
        }
    })
}
