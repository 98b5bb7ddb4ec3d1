//! C ABI over the selection library.
//!
//! Conventions:
//! - every object crossing the boundary is an opaque handle created and
//!   destroyed by matching `ps_*_new`/`ps_*_load` and `ps_*_free` calls;
//! - every fallible call returns a [`PsStatus`]; on anything but
//!   `Ok`, [`ps_last_error_message`] holds a human-readable reason
//!   (thread-local, valid until the next call on the same thread);
//! - returned `const char *` pointers borrow from their handle and die
//!   with it — never free them;
//! - all strings are NUL-terminated UTF-8.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pareto_select::calibration::{calibrate, CalibrationParams};
use pareto_select::dominance::pareto_frontier;
use pareto_select::io;
use pareto_select::strategies::{
    select, DistanceKind, SelectionResult, Strategy, StrategyParams,
};
use pareto_select::types::{
    CandidateSet, Direction, ObjectiveSpec, PopulationSet, SamplePopulation, SolutionPoint,
    UtopiaAssignment,
};

/// Result of every fallible boundary call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    /// The call succeeded.
    Ok = 0,
    /// Malformed input: bad file, bad value, missing parameter.
    InputError = 2,
    /// Structurally sound input with no feasible answer (empty
    /// frontier, degenerate calibration).
    Infeasible = 3,
    /// A required pointer argument was NULL.
    NullArgument = 4,
    /// A string argument was not valid UTF-8.
    Utf8Error = 5,
    /// An internal invariant failed; the library caught a panic.
    Internal = 6,
}

/// Selection strategies, mirroring the CLI names.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStrategy {
    /// `akp`: reflex-angle knee (two objectives only).
    AngleKnee = 0,
    /// `ukp`: win counts over sampled weight vectors.
    UtilityKnee = 1,
    /// `hv`: dominated volume against a reference point.
    Hypervolume = 2,
    /// `ed`: distance to a global utopia point.
    DistanceToUtopia = 3,
    /// `wm`: signed weighted mean.
    WeightedMean = 4,
    /// `pdu`: log of summed squared sample distances to a global utopia.
    PopulationDiscount = 5,
    /// `cpdu`: same, with one utopia point per sample.
    CalibratedPopulationDiscount = 6,
}

impl PsStrategy {
    fn into_strategy(self) -> Strategy {
        match self {
            PsStrategy::AngleKnee => Strategy::Akp,
            PsStrategy::UtilityKnee => Strategy::Ukp,
            PsStrategy::Hypervolume => Strategy::Hv,
            PsStrategy::DistanceToUtopia => Strategy::Ed,
            PsStrategy::WeightedMean => Strategy::Wm,
            PsStrategy::PopulationDiscount => Strategy::Pdu,
            PsStrategy::CalibratedPopulationDiscount => Strategy::Cpdu,
        }
    }
}

/// Distance used inside the population-discount scores.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsDistance {
    Euclidean = 0,
    Manhattan = 1,
    Chebyshev = 2,
}

/// Objective orientation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsDirection {
    Minimize = 0,
    Maximize = 1,
}

/// Candidate solutions plus their objective schema.
pub struct PsCandidateSet {
    inner: CandidateSet,
}

/// Per-sample objective values for each solution.
pub struct PsPopulationSet {
    inner: PopulationSet,
}

/// Accumulates sample rows before freezing them into a population set.
#[derive(Default)]
pub struct PsPopulationBuilder {
    rows: BTreeMap<String, Vec<(String, Vec<f64>)>>,
    k: Option<usize>,
}

/// Strategy parameters; create, fill with setters, pass to `ps_select`.
pub struct PsParams {
    inner: StrategyParams,
    per_sample_utopia: BTreeMap<String, Vec<f64>>,
}

/// Frontier membership, ids ascending.
pub struct PsFrontier {
    ids: Vec<CString>,
}

/// Outcome of one strategy run over the frontier.
pub struct PsSelection {
    chosen: CString,
    /// (id, score), ids ascending — mirrors the report row order.
    members: Vec<(CString, f64)>,
    ties: Vec<CString>,
}

/// Per-user utopia vectors derived from an interaction log.
pub struct PsUtopiaTable {
    rows: Vec<(CString, f64, f64)>,
    clamp_count: usize,
    mean_aplt: f64,
    t_used: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &pareto_select::Error) -> PsStatus {
    match err.exit_code() {
        3 => PsStatus::Infeasible,
        _ => PsStatus::InputError,
    }
}

/// Human-readable reason for the most recent non-`Ok` status on this
/// thread. Borrowed; valid until the next library call on the thread.
#[no_mangle]
pub extern "C" fn ps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// ---------------------------------------------------------------------------
// helpers

fn guard<F: FnOnce() -> PsStatus>(f: F) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("internal error: {msg}"));
            PsStatus::Internal
        }
    }
}

/// # Safety
/// `ptr` must be NULL or a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PsStatus> {
    if ptr.is_null() {
        set_last_error(&format!("{what} is NULL"));
        return Err(PsStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_last_error(&format!("{what} is not valid UTF-8"));
        PsStatus::Utf8Error
    })
}

unsafe fn read_slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], PsStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        set_last_error(&format!("{what} is NULL"));
        return Err(PsStatus::NullArgument);
    }
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

fn require_out<T>(out: *mut T, what: &str) -> Result<(), PsStatus> {
    if out.is_null() {
        set_last_error(&format!("{what} is NULL"));
        return Err(PsStatus::NullArgument);
    }
    Ok(())
}

unsafe fn require_ref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, PsStatus> {
    if ptr.is_null() {
        set_last_error(&format!("{what} is NULL"));
        return Err(PsStatus::NullArgument);
    }
    Ok(unsafe { &*ptr })
}

fn cstring(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).unwrap_or_default()
}

macro_rules! ffi_try {
    ($expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! lib_try {
    ($expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(e) => {
                set_last_error(&e.to_string());
                return status_of(&e);
            }
        }
    };
}

// ---------------------------------------------------------------------------
// candidate sets

/// Load a candidate set from a schema CSV and a solutions CSV.
///
/// # Safety
/// `schema_path` and `solutions_path` are NUL-terminated strings;
/// `out` receives an owned handle to release with
/// `ps_candidate_set_free`.
#[no_mangle]
pub unsafe extern "C" fn ps_candidate_set_load(
    schema_path: *const c_char,
    solutions_path: *const c_char,
    out: *mut *mut PsCandidateSet,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out, "out"));
        let schema = ffi_try!(unsafe { read_str(schema_path, "schema_path") });
        let solutions = ffi_try!(unsafe { read_str(solutions_path, "solutions_path") });
        let specs = lib_try!(io::load_schema(Path::new(schema)));
        let set = lib_try!(io::load_solutions(Path::new(solutions), &specs));
        unsafe { *out = Box::into_raw(Box::new(PsCandidateSet { inner: set })) };
        PsStatus::Ok
    })
}

/// Build a candidate set in memory.
///
/// `values` is row-major: solution `i`'s objectives occupy
/// `values[i*k .. (i+1)*k]` in schema order.
///
/// # Safety
/// `names` points to `k` strings, `directions` to `k` entries, `ids`
/// to `n` strings, `values` to `n * k` doubles; `out` as in
/// `ps_candidate_set_load`.
#[no_mangle]
pub unsafe extern "C" fn ps_candidate_set_new(
    names: *const *const c_char,
    directions: *const PsDirection,
    k: usize,
    ids: *const *const c_char,
    values: *const f64,
    n: usize,
    out: *mut *mut PsCandidateSet,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out, "out"));
        let names = ffi_try!(unsafe { read_slice(names, k, "names") });
        let directions = ffi_try!(unsafe { read_slice(directions, k, "directions") });
        let ids = ffi_try!(unsafe { read_slice(ids, n, "ids") });
        let values = ffi_try!(unsafe { read_slice(values, n.saturating_mul(k), "values") });

        let mut specs = Vec::with_capacity(k);
        for (j, (&name, dir)) in names.iter().zip(directions).enumerate() {
            let name = ffi_try!(unsafe { read_str(name, &format!("names[{j}]")) });
            let direction = match dir {
                PsDirection::Minimize => Direction::Minimize,
                PsDirection::Maximize => Direction::Maximize,
            };
            specs.push(ObjectiveSpec::new(name, direction));
        }
        let mut sols = Vec::with_capacity(n);
        for (i, &id) in ids.iter().enumerate() {
            let id = ffi_try!(unsafe { read_str(id, &format!("ids[{i}]")) });
            sols.push(SolutionPoint::new(id, values[i * k..(i + 1) * k].to_vec()));
        }
        let set = lib_try!(CandidateSet::new(specs, sols));
        unsafe { *out = Box::into_raw(Box::new(PsCandidateSet { inner: set })) };
        PsStatus::Ok
    })
}

/// Number of candidate solutions in the set.
///
/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_candidate_set_len(set: *const PsCandidateSet) -> usize {
    if set.is_null() {
        return 0;
    }
    unsafe { &*set }.inner.len()
}

/// Number of objectives in the set's schema.
///
/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_candidate_set_objectives(set: *const PsCandidateSet) -> usize {
    if set.is_null() {
        return 0;
    }
    unsafe { &*set }.inner.k()
}

/// # Safety
/// `set` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_candidate_set_free(set: *mut PsCandidateSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

// ---------------------------------------------------------------------------
// populations

/// Load per-sample values from a samples CSV; the set supplies the
/// expected objective columns.
///
/// # Safety
/// `set` live handle; `path` NUL-terminated; `out` receives an owned
/// handle for `ps_population_set_free`.
#[no_mangle]
pub unsafe extern "C" fn ps_population_set_load(
    set: *const PsCandidateSet,
    path: *const c_char,
    out: *mut *mut PsPopulationSet,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out, "out"));
        let set = ffi_try!(unsafe { require_ref(set, "set") });
        let path = ffi_try!(unsafe { read_str(path, "path") });
        let pops = lib_try!(io::load_samples(Path::new(path), set.inner.specs()));
        unsafe { *out = Box::into_raw(Box::new(PsPopulationSet { inner: pops })) };
        PsStatus::Ok
    })
}

/// # Safety
/// `pops` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_population_set_free(pops: *mut PsPopulationSet) {
    if !pops.is_null() {
        drop(unsafe { Box::from_raw(pops) });
    }
}

/// Start collecting sample rows; finish with
/// `ps_population_builder_finish`, abandon with
/// `ps_population_builder_free`.
#[no_mangle]
pub extern "C" fn ps_population_builder_new() -> *mut PsPopulationBuilder {
    Box::into_raw(Box::new(PsPopulationBuilder::default()))
}

/// Append one sample row for one solution.
///
/// # Safety
/// `builder` live handle; strings NUL-terminated; `values` points to
/// `k` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_population_builder_add(
    builder: *mut PsPopulationBuilder,
    solution_id: *const c_char,
    sample_id: *const c_char,
    values: *const f64,
    k: usize,
) -> PsStatus {
    guard(|| {
        if builder.is_null() {
            set_last_error("builder is NULL");
            return PsStatus::NullArgument;
        }
        let builder = unsafe { &mut *builder };
        let solution_id = ffi_try!(unsafe { read_str(solution_id, "solution_id") });
        let sample_id = ffi_try!(unsafe { read_str(sample_id, "sample_id") });
        let values = ffi_try!(unsafe { read_slice(values, k, "values") });
        if let Some(expected) = builder.k {
            if expected != k {
                set_last_error(&format!(
                    "sample {sample_id:?} has {k} values, previous rows had {expected}"
                ));
                return PsStatus::InputError;
            }
        } else {
            builder.k = Some(k);
        }
        builder
            .rows
            .entry(solution_id.to_string())
            .or_default()
            .push((sample_id.to_string(), values.to_vec()));
        PsStatus::Ok
    })
}

/// Freeze the builder into a population set. The builder stays valid
/// (and unchanged) whether or not this succeeds.
///
/// # Safety
/// `builder` live handle; `out` receives an owned handle for
/// `ps_population_set_free`.
#[no_mangle]
pub unsafe extern "C" fn ps_population_builder_finish(
    builder: *const PsPopulationBuilder,
    out: *mut *mut PsPopulationSet,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out, "out"));
        let builder = ffi_try!(unsafe { require_ref(builder, "builder") });
        let k = builder.k.unwrap_or(0);
        let mut pops = Vec::with_capacity(builder.rows.len());
        for (solution_id, rows) in &builder.rows {
            pops.push(lib_try!(SamplePopulation::new(
                solution_id.clone(),
                rows.clone(),
                k
            )));
        }
        let set = lib_try!(PopulationSet::new(pops));
        unsafe { *out = Box::into_raw(Box::new(PsPopulationSet { inner: set })) };
        PsStatus::Ok
    })
}

/// # Safety
/// `builder` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_population_builder_free(builder: *mut PsPopulationBuilder) {
    if !builder.is_null() {
        drop(unsafe { Box::from_raw(builder) });
    }
}

// ---------------------------------------------------------------------------
// frontier

/// Extract the non-dominated ids (ascending).
///
/// # Safety
/// `set` live handle; `out` receives an owned handle for
/// `ps_frontier_free`.
#[no_mangle]
pub unsafe extern "C" fn ps_frontier_extract(
    set: *const PsCandidateSet,
    out: *mut *mut PsFrontier,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out, "out"));
        let set = ffi_try!(unsafe { require_ref(set, "set") });
        let frontier = pareto_frontier(&set.inner);
        let ids = frontier.member_ids().iter().map(|id| cstring(id)).collect();
        unsafe { *out = Box::into_raw(Box::new(PsFrontier { ids })) };
        PsStatus::Ok
    })
}

/// Number of frontier members.
///
/// # Safety
/// `frontier` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_frontier_len(frontier: *const PsFrontier) -> usize {
    if frontier.is_null() {
        return 0;
    }
    unsafe { &*frontier }.ids.len()
}

/// Borrowed id of member `index`, or NULL when out of range.
///
/// # Safety
/// `frontier` must be a live handle; the pointer dies with it.
#[no_mangle]
pub unsafe extern "C" fn ps_frontier_id(
    frontier: *const PsFrontier,
    index: usize,
) -> *const c_char {
    if frontier.is_null() {
        return ptr::null();
    }
    match unsafe { &*frontier }.ids.get(index) {
        Some(id) => id.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `frontier` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_frontier_free(frontier: *mut PsFrontier) {
    if !frontier.is_null() {
        drop(unsafe { Box::from_raw(frontier) });
    }
}

// ---------------------------------------------------------------------------
// parameters

/// Fresh parameters: no utopia/reference/weights, seed 42, 1000 weight
/// draws, Euclidean distance, no normalization.
#[no_mangle]
pub extern "C" fn ps_params_new() -> *mut PsParams {
    Box::into_raw(Box::new(PsParams {
        inner: StrategyParams::default(),
        per_sample_utopia: BTreeMap::new(),
    }))
}

unsafe fn with_params(
    params: *mut PsParams,
    f: impl FnOnce(&mut PsParams) -> PsStatus,
) -> PsStatus {
    guard(|| {
        if params.is_null() {
            set_last_error("params is NULL");
            return PsStatus::NullArgument;
        }
        f(unsafe { &mut *params })
    })
}

/// Set a global utopia point (replaces any per-sample rows).
///
/// # Safety
/// `params` live handle; `values` points to `k` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_utopia(
    params: *mut PsParams,
    values: *const f64,
    k: usize,
) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            let values = ffi_try!(read_slice(values, k, "values"));
            p.per_sample_utopia.clear();
            p.inner.utopia = Some(UtopiaAssignment::Global(values.to_vec()));
            PsStatus::Ok
        })
    }
}

/// Add or replace one per-sample utopia row (replaces any global
/// point once the first row lands).
///
/// # Safety
/// `params` live handle; `sample_id` NUL-terminated; `values` points
/// to `k` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_utopia_row(
    params: *mut PsParams,
    sample_id: *const c_char,
    values: *const f64,
    k: usize,
) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            let sample_id = ffi_try!(read_str(sample_id, "sample_id"));
            let values = ffi_try!(read_slice(values, k, "values"));
            p.per_sample_utopia
                .insert(sample_id.to_string(), values.to_vec());
            p.inner.utopia = Some(UtopiaAssignment::PerSample(p.per_sample_utopia.clone()));
            PsStatus::Ok
        })
    }
}

/// Set the hypervolume reference point.
///
/// # Safety
/// `params` live handle; `values` points to `k` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_reference(
    params: *mut PsParams,
    values: *const f64,
    k: usize,
) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            let values = ffi_try!(read_slice(values, k, "values"));
            p.inner.reference = Some(values.to_vec());
            PsStatus::Ok
        })
    }
}

/// Set the weighted-mean weights (schema order, all positive).
///
/// # Safety
/// `params` live handle; `values` points to `k` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_weights(
    params: *mut PsParams,
    values: *const f64,
    k: usize,
) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            let values = ffi_try!(read_slice(values, k, "values"));
            p.inner.weights = Some(values.to_vec());
            PsStatus::Ok
        })
    }
}

/// Seed for the weight-vector sampler.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_seed(params: *mut PsParams, seed: u64) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            p.inner.seed = seed;
            PsStatus::Ok
        })
    }
}

/// Number of weight vectors drawn for win counting (must be > 0).
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_weight_samples(
    params: *mut PsParams,
    m: u64,
) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            p.inner.m_weight_samples = m;
            PsStatus::Ok
        })
    }
}

/// Distance used by the population-discount scores.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_distance(
    params: *mut PsParams,
    distance: PsDistance,
) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            p.inner.distance_kind = match distance {
                PsDistance::Euclidean => DistanceKind::Euclidean,
                PsDistance::Manhattan => DistanceKind::Manhattan,
                PsDistance::Chebyshev => DistanceKind::Chebyshev,
            };
            PsStatus::Ok
        })
    }
}

/// Min-max normalize values (and side points through the same
/// transform) before scoring; 0 disables, anything else enables.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_params_set_normalize(
    params: *mut PsParams,
    enabled: c_int,
) -> PsStatus {
    unsafe {
        with_params(params, |p| {
            p.inner.normalize_first = enabled != 0;
            PsStatus::Ok
        })
    }
}

/// # Safety
/// `params` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_params_free(params: *mut PsParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

// ---------------------------------------------------------------------------
// selection

/// Extract the frontier of `set` and run `strategy` over it.
/// `populations` may be NULL for strategies that ignore it; `params`
/// may be NULL to use the defaults.
///
/// # Safety
/// All handles live; `out` receives an owned handle for
/// `ps_selection_free`.
#[no_mangle]
pub unsafe extern "C" fn ps_select(
    set: *const PsCandidateSet,
    strategy: PsStrategy,
    populations: *const PsPopulationSet,
    params: *const PsParams,
    out: *mut *mut PsSelection,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out, "out"));
        let set = ffi_try!(unsafe { require_ref(set, "set") });
        let pops = if populations.is_null() {
            None
        } else {
            Some(unsafe { &(*populations).inner })
        };
        let default_params;
        let params_ref = if params.is_null() {
            default_params = StrategyParams::default();
            &default_params
        } else {
            &unsafe { &*params }.inner
        };
        let result: SelectionResult = lib_try!(select(
            strategy.into_strategy(),
            &set.inner,
            pops,
            params_ref
        ));
        let members = result
            .scores
            .iter()
            .map(|(id, score)| (cstring(id), *score))
            .collect();
        let ties = result.tie_ids.iter().map(|id| cstring(id)).collect();
        unsafe {
            *out = Box::into_raw(Box::new(PsSelection {
                chosen: cstring(&result.chosen_id),
                members,
                ties,
            }));
        }
        PsStatus::Ok
    })
}

/// Borrowed id of the chosen solution.
///
/// # Safety
/// `selection` live handle; the pointer dies with it.
#[no_mangle]
pub unsafe extern "C" fn ps_selection_chosen_id(
    selection: *const PsSelection,
) -> *const c_char {
    if selection.is_null() {
        return ptr::null();
    }
    unsafe { &*selection }.chosen.as_ptr()
}

/// Number of scored frontier members.
///
/// # Safety
/// `selection` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_selection_len(selection: *const PsSelection) -> usize {
    if selection.is_null() {
        return 0;
    }
    unsafe { &*selection }.members.len()
}

/// Borrowed id of scored member `index` (ids ascending), or NULL when
/// out of range.
///
/// # Safety
/// `selection` live handle; the pointer dies with it.
#[no_mangle]
pub unsafe extern "C" fn ps_selection_member_id(
    selection: *const PsSelection,
    index: usize,
) -> *const c_char {
    if selection.is_null() {
        return ptr::null();
    }
    match unsafe { &*selection }.members.get(index) {
        Some((id, _)) => id.as_ptr(),
        None => ptr::null(),
    }
}

/// Score of member `index`; writes through `out_score`.
///
/// # Safety
/// `selection` live handle; `out_score` non-NULL.
#[no_mangle]
pub unsafe extern "C" fn ps_selection_member_score(
    selection: *const PsSelection,
    index: usize,
    out_score: *mut f64,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out_score, "out_score"));
        let selection = ffi_try!(unsafe { require_ref(selection, "selection") });
        match selection.members.get(index) {
            Some((_, score)) => {
                unsafe { *out_score = *score };
                PsStatus::Ok
            }
            None => {
                set_last_error(&format!(
                    "index {index} out of range ({} members)",
                    selection.members.len()
                ));
                PsStatus::InputError
            }
        }
    })
}

/// Number of solutions tied at the best score (1 means no tie).
///
/// # Safety
/// `selection` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_selection_tie_len(selection: *const PsSelection) -> usize {
    if selection.is_null() {
        return 0;
    }
    unsafe { &*selection }.ties.len()
}

/// Borrowed id of tied solution `index`, or NULL when out of range.
///
/// # Safety
/// `selection` live handle; the pointer dies with it.
#[no_mangle]
pub unsafe extern "C" fn ps_selection_tie_id(
    selection: *const PsSelection,
    index: usize,
) -> *const c_char {
    if selection.is_null() {
        return ptr::null();
    }
    match unsafe { &*selection }.ties.get(index) {
        Some(id) => id.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `selection` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_selection_free(selection: *mut PsSelection) {
    if !selection.is_null() {
        drop(unsafe { Box::from_raw(selection) });
    }
}

// ---------------------------------------------------------------------------
// calibration

/// Derive per-user utopia points from an interaction log CSV
/// (`user_id,item_id`). `anchor_size` <= 0 uses the default (mean
/// records per user); `alpha`/`beta` scale the mean/σ aggregation;
/// `accuracy_utopia` fills the first component of every row.
///
/// # Safety
/// `path` NUL-terminated; `out` receives an owned handle for
/// `ps_utopia_table_free`.
#[no_mangle]
pub unsafe extern "C" fn ps_calibrate(
    path: *const c_char,
    alpha: f64,
    beta: f64,
    anchor_size: i64,
    accuracy_utopia: f64,
    out: *mut *mut PsUtopiaTable,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out, "out"));
        let path = ffi_try!(unsafe { read_str(path, "path") });
        let log = lib_try!(io::load_interactions(Path::new(path)));
        let params = CalibrationParams {
            alpha,
            beta,
            t_override: usize::try_from(anchor_size).ok().filter(|t| *t > 0),
            accuracy_utopia,
            ..Default::default()
        };
        let table = lib_try!(calibrate(&log, &params));
        let rows = table
            .rows()
            .iter()
            .map(|(user, row)| (cstring(user), row[0], row[1]))
            .collect();
        let summary = table.summary();
        unsafe {
            *out = Box::into_raw(Box::new(PsUtopiaTable {
                rows,
                clamp_count: summary.clamp_count,
                mean_aplt: summary.mean_aplt_utopia,
                t_used: summary.t_used,
            }));
        }
        PsStatus::Ok
    })
}

/// Number of users in the table.
///
/// # Safety
/// `table` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_utopia_table_len(table: *const PsUtopiaTable) -> usize {
    if table.is_null() {
        return 0;
    }
    unsafe { &*table }.rows.len()
}

/// Borrowed user id of row `index` (user ids ascending), or NULL when
/// out of range.
///
/// # Safety
/// `table` live handle; the pointer dies with it.
#[no_mangle]
pub unsafe extern "C" fn ps_utopia_table_user(
    table: *const PsUtopiaTable,
    index: usize,
) -> *const c_char {
    if table.is_null() {
        return ptr::null();
    }
    match unsafe { &*table }.rows.get(index) {
        Some((user, _, _)) => user.as_ptr(),
        None => ptr::null(),
    }
}

/// Utopia vector of row `index`: first component through
/// `out_accuracy`, long-tail component through `out_aplt`.
///
/// # Safety
/// `table` live handle; out pointers non-NULL.
#[no_mangle]
pub unsafe extern "C" fn ps_utopia_table_row(
    table: *const PsUtopiaTable,
    index: usize,
    out_accuracy: *mut f64,
    out_aplt: *mut f64,
) -> PsStatus {
    guard(|| {
        ffi_try!(require_out(out_accuracy, "out_accuracy"));
        ffi_try!(require_out(out_aplt, "out_aplt"));
        let table = ffi_try!(unsafe { require_ref(table, "table") });
        match table.rows.get(index) {
            Some((_, acc, aplt)) => {
                unsafe {
                    *out_accuracy = *acc;
                    *out_aplt = *aplt;
                }
                PsStatus::Ok
            }
            None => {
                set_last_error(&format!(
                    "index {index} out of range ({} rows)",
                    table.rows.len()
                ));
                PsStatus::InputError
            }
        }
    })
}

/// Users whose long-tail component was clamped into [0, 1].
///
/// # Safety
/// `table` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_utopia_table_clamp_count(table: *const PsUtopiaTable) -> usize {
    if table.is_null() {
        return 0;
    }
    unsafe { &*table }.clamp_count
}

/// Mean long-tail component over all users.
///
/// # Safety
/// `table` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_utopia_table_mean_aplt(table: *const PsUtopiaTable) -> f64 {
    if table.is_null() {
        return f64::NAN;
    }
    unsafe { &*table }.mean_aplt
}

/// Anchor size the calibration actually used.
///
/// # Safety
/// `table` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_utopia_table_anchor_size(table: *const PsUtopiaTable) -> usize {
    if table.is_null() {
        return 0;
    }
    unsafe { &*table }.t_used
}

/// # Safety
/// `table` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_utopia_table_free(table: *mut PsUtopiaTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn two_obj_set() -> *mut PsCandidateSet {
        let names = [c("ndcg"), c("seconds")];
        let name_ptrs: Vec<*const c_char> = names.iter().map(|n| n.as_ptr()).collect();
        let directions = [PsDirection::Maximize, PsDirection::Minimize];
        let ids = [c("nn_1"), c("nn_2")];
        let id_ptrs: Vec<*const c_char> = ids.iter().map(|n| n.as_ptr()).collect();
        let values = [0.5144, 3.3003e-6, 0.5185, 1.0476e-5];
        let mut set: *mut PsCandidateSet = ptr::null_mut();
        let status = unsafe {
            ps_candidate_set_new(
                name_ptrs.as_ptr(),
                directions.as_ptr(),
                2,
                id_ptrs.as_ptr(),
                values.as_ptr(),
                2,
                &mut set,
            )
        };
        assert_eq!(status, PsStatus::Ok);
        set
    }

    #[test]
    fn select_round_trip_over_the_boundary() {
        let set = two_obj_set();
        assert_eq!(unsafe { ps_candidate_set_len(set) }, 2);
        assert_eq!(unsafe { ps_candidate_set_objectives(set) }, 2);

        let params = ps_params_new();
        let utopia = [1.0, 0.0];
        assert_eq!(
            unsafe { ps_params_set_utopia(params, utopia.as_ptr(), 2) },
            PsStatus::Ok
        );

        let mut selection: *mut PsSelection = ptr::null_mut();
        let status = unsafe {
            ps_select(
                set,
                PsStrategy::DistanceToUtopia,
                ptr::null(),
                params,
                &mut selection,
            )
        };
        assert_eq!(status, PsStatus::Ok);
        let chosen = unsafe { CStr::from_ptr(ps_selection_chosen_id(selection)) };
        assert_eq!(chosen.to_str().unwrap(), "nn_2");
        assert_eq!(unsafe { ps_selection_len(selection) }, 2);
        assert_eq!(unsafe { ps_selection_tie_len(selection) }, 1);

        let mut score = 0.0f64;
        assert_eq!(
            unsafe { ps_selection_member_score(selection, 1, &mut score) },
            PsStatus::Ok
        );
        assert!((score - 0.4815).abs() < 1e-3, "{score}");
        let id1 = unsafe { CStr::from_ptr(ps_selection_member_id(selection, 1)) };
        assert_eq!(id1.to_str().unwrap(), "nn_2");
        assert!(unsafe { ps_selection_member_id(selection, 9) }.is_null());

        unsafe {
            ps_selection_free(selection);
            ps_params_free(params);
            ps_candidate_set_free(set);
        }
    }

    #[test]
    fn frontier_extraction_over_the_boundary() {
        let set = two_obj_set();
        let mut frontier: *mut PsFrontier = ptr::null_mut();
        assert_eq!(
            unsafe { ps_frontier_extract(set, &mut frontier) },
            PsStatus::Ok
        );
        assert_eq!(unsafe { ps_frontier_len(frontier) }, 2);
        let first = unsafe { CStr::from_ptr(ps_frontier_id(frontier, 0)) };
        assert_eq!(first.to_str().unwrap(), "nn_1");
        assert!(unsafe { ps_frontier_id(frontier, 5) }.is_null());
        unsafe {
            ps_frontier_free(frontier);
            ps_candidate_set_free(set);
        }
    }

    #[test]
    fn null_and_missing_inputs_map_to_statuses() {
        let mut set: *mut PsCandidateSet = ptr::null_mut();
        let status = unsafe {
            ps_candidate_set_load(ptr::null(), ptr::null(), &mut set)
        };
        assert_eq!(status, PsStatus::NullArgument);
        let msg = unsafe { CStr::from_ptr(ps_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("schema_path"));

        let missing = c("/no/such/schema.csv");
        let missing2 = c("/no/such/solutions.csv");
        let status = unsafe {
            ps_candidate_set_load(missing.as_ptr(), missing2.as_ptr(), &mut set)
        };
        assert_eq!(status, PsStatus::InputError);
        let msg = unsafe { CStr::from_ptr(ps_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("/no/such/schema.csv"));

        // missing required parameter surfaces the library's message
        let set = two_obj_set();
        let mut selection: *mut PsSelection = ptr::null_mut();
        let status = unsafe {
            ps_select(
                set,
                PsStrategy::WeightedMean,
                ptr::null(),
                ptr::null(),
                &mut selection,
            )
        };
        assert_eq!(status, PsStatus::InputError);
        let msg = unsafe { CStr::from_ptr(ps_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("weights"));
        unsafe { ps_candidate_set_free(set) };
    }

    #[test]
    fn population_builder_feeds_discount_strategies() {
        let set = two_obj_set();
        let builder = ps_population_builder_new();
        for (sol, sample, v) in [
            ("nn_1", "q1", [0.31, 2.1e-6]),
            ("nn_1", "q2", [0.52, 3.4e-6]),
            ("nn_2", "q1", [0.33, 6.8e-6]),
            ("nn_2", "q2", [0.53, 1.05e-5]),
        ] {
            let sol = c(sol);
            let sample = c(sample);
            assert_eq!(
                unsafe {
                    ps_population_builder_add(builder, sol.as_ptr(), sample.as_ptr(), v.as_ptr(), 2)
                },
                PsStatus::Ok
            );
        }
        let mut pops: *mut PsPopulationSet = ptr::null_mut();
        assert_eq!(
            unsafe { ps_population_builder_finish(builder, &mut pops) },
            PsStatus::Ok
        );

        let params = ps_params_new();
        let q1 = c("q1");
        let q2 = c("q2");
        let u = [1.0, 0.0];
        unsafe {
            assert_eq!(ps_params_set_utopia_row(params, q1.as_ptr(), u.as_ptr(), 2), PsStatus::Ok);
            assert_eq!(ps_params_set_utopia_row(params, q2.as_ptr(), u.as_ptr(), 2), PsStatus::Ok);
        }
        let mut selection: *mut PsSelection = ptr::null_mut();
        let status = unsafe {
            ps_select(
                set,
                PsStrategy::CalibratedPopulationDiscount,
                pops,
                params,
                &mut selection,
            )
        };
        assert_eq!(status, PsStatus::Ok);
        let chosen = unsafe { CStr::from_ptr(ps_selection_chosen_id(selection)) };
        assert!(!chosen.to_str().unwrap().is_empty());

        unsafe {
            ps_selection_free(selection);
            ps_params_free(params);
            ps_population_set_free(pops);
            ps_population_builder_free(builder);
            ps_candidate_set_free(set);
        }
    }

    #[test]
    fn calibration_over_the_boundary() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.csv");
        std::fs::write(
            &path,
            "user_id,item_id\nu1,a\nu1,b\nu2,a\nu2,c\nu3,a\nu3,b\nu3,c\nu4,d\nu5,a\nu5,a\nu5,d\n",
        )
        .unwrap();
        let cpath = c(path.to_str().unwrap());
        let mut table: *mut PsUtopiaTable = ptr::null_mut();
        let status = unsafe { ps_calibrate(cpath.as_ptr(), 1.0, 1.0, -1, 1.0, &mut table) };
        assert_eq!(status, PsStatus::Ok);
        assert_eq!(unsafe { ps_utopia_table_len(table) }, 5);
        assert_eq!(unsafe { ps_utopia_table_anchor_size(table) }, 2);
        assert_eq!(unsafe { ps_utopia_table_clamp_count(table) }, 1);

        // row 3 is u4 (user ids ascending): the pure tail profile
        let user = unsafe { CStr::from_ptr(ps_utopia_table_user(table, 3)) };
        assert_eq!(user.to_str().unwrap(), "u4");
        let (mut acc, mut aplt) = (0.0, 0.0);
        assert_eq!(
            unsafe { ps_utopia_table_row(table, 3, &mut acc, &mut aplt) },
            PsStatus::Ok
        );
        assert_eq!(acc, 1.0);
        assert_eq!(aplt, 1.0);

        // degenerate uniform log
        std::fs::write(&path, "user_id,item_id\nu1,x\nu2,y\nu3,z\n").unwrap();
        let status = unsafe { ps_calibrate(cpath.as_ptr(), 1.0, 1.0, -1, 1.0, &mut table) };
        assert_eq!(status, PsStatus::Infeasible);

        unsafe { ps_utopia_table_free(table) };
    }

    #[test]
    fn version_is_exposed() {
        let v = unsafe { CStr::from_ptr(ps_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
