//! C ABI over the totients library.
//!
//! Conventions: every fallible call returns a [`TotStatus`] and writes its
//! result through out-pointers. Heap objects come back as opaque handles
//! released with the matching `_free` function. Complex structures (family
//! certificates) are exported as JSON strings released with
//! [`tot_string_free`].
//!
//! Pointer contracts (valid, properly aligned, exclusively owned where the
//! signature says so) are documented in the generated header.
#![allow(clippy::missing_safety_doc)]

use std::ffi::{c_char, CString};
use totients::error::Error;
use totients::families::CertifyOptions;
use totients::inverse_totient::PreimageSet;
use totients::sparsely_totient::{HorizonPolicy, PhiSieve};

/// Status codes for every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotStatus {
    Ok = 0,
    /// Invalid input (bad residue class, nontotient, overflow, ...).
    DomainError = 1,
    /// A memory or scan budget was exceeded.
    ResourceError = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
}

impl From<&Error> for TotStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            1 => TotStatus::DomainError,
            _ => TotStatus::ResourceError,
        }
    }
}

/// Horizon policy for N1 queries.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotHorizonPolicy {
    Conservative = 0,
    RosserSchoenfeld = 1,
}

impl From<TotHorizonPolicy> for HorizonPolicy {
    fn from(p: TotHorizonPolicy) -> Self {
        match p {
            TotHorizonPolicy::Conservative => HorizonPolicy::Conservative,
            TotHorizonPolicy::RosserSchoenfeld => HorizonPolicy::RosserSchoenfeld,
        }
    }
}

/// Opaque solution set of phi(x) = m.
pub struct TotPreimage(PreimageSet);

/// Opaque tabulated phi(1..=n).
pub struct TotSieve(PhiSieve);

unsafe fn write_out<T>(out: *mut T, value: T) -> TotStatus {
    if out.is_null() {
        return TotStatus::NullPointer;
    }
    unsafe { out.write(value) };
    TotStatus::Ok
}

/// Euler's phi of n. Fails on n = 0.
#[no_mangle]
pub unsafe extern "C" fn tot_euler_phi(n: u64, out: *mut u64) -> TotStatus {
    match totients::arith::euler_phi(n) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => TotStatus::from(&e),
    }
}

/// Deterministic primality for the full 64-bit range.
#[no_mangle]
pub unsafe extern "C" fn tot_is_prime(n: u64, out: *mut bool) -> TotStatus {
    unsafe { write_out(out, totients::arith::is_prime(n)) }
}

/// Product of all primes <= p. Fails when p is not prime or the product
/// overflows 64 bits.
#[no_mangle]
pub unsafe extern "C" fn tot_primorial(p: u64, out: *mut u64) -> TotStatus {
    match totients::arith::primorial(p) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => TotStatus::from(&e),
    }
}

/// Complete solution set of phi(x) = m as an opaque handle. Release with
/// `tot_preimage_free`.
#[no_mangle]
pub unsafe extern "C" fn tot_inverse_phi(m: u64, out: *mut *mut TotPreimage) -> TotStatus {
    if out.is_null() {
        return TotStatus::NullPointer;
    }
    match totients::inverse_totient::inverse_phi(m) {
        Ok(pre) => unsafe { write_out(out, Box::into_raw(Box::new(TotPreimage(pre)))) },
        Err(e) => TotStatus::from(&e),
    }
}

/// Number of solutions A(m); 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tot_preimage_len(pre: *const TotPreimage) -> usize {
    if pre.is_null() {
        return 0;
    }
    unsafe { &*pre }.0.multiplicity()
}

/// Copies up to `cap` solutions (sorted increasing) into `buf`; returns the
/// number copied.
#[no_mangle]
pub unsafe extern "C" fn tot_preimage_solutions(
    pre: *const TotPreimage,
    buf: *mut u64,
    cap: usize,
) -> usize {
    if pre.is_null() || buf.is_null() {
        return 0;
    }
    let solutions = unsafe { &*pre }.0.solutions();
    let n = solutions.len().min(cap);
    unsafe { std::ptr::copy_nonoverlapping(solutions.as_ptr(), buf, n) };
    n
}

/// N2(m) = max of the preimage; DomainError when the preimage is empty.
#[no_mangle]
pub unsafe extern "C" fn tot_preimage_n2(pre: *const TotPreimage, out: *mut u64) -> TotStatus {
    if pre.is_null() {
        return TotStatus::NullPointer;
    }
    match unsafe { &*pre }.0.n2() {
        Some(v) => unsafe { write_out(out, v) },
        None => TotStatus::DomainError,
    }
}

/// N3(m) = min of the preimage; DomainError when the preimage is empty.
#[no_mangle]
pub unsafe extern "C" fn tot_preimage_n3(pre: *const TotPreimage, out: *mut u64) -> TotStatus {
    if pre.is_null() {
        return TotStatus::NullPointer;
    }
    match unsafe { &*pre }.0.n3() {
        Some(v) => unsafe { write_out(out, v) },
        None => TotStatus::DomainError,
    }
}

#[no_mangle]
pub unsafe extern "C" fn tot_preimage_free(pre: *mut TotPreimage) {
    if !pre.is_null() {
        drop(unsafe { Box::from_raw(pre) });
    }
}

/// Builds phi(1..=horizon) within a byte budget. Release with
/// `tot_sieve_free`.
#[no_mangle]
pub unsafe extern "C" fn tot_sieve_build(
    horizon: u64,
    budget_bytes: u64,
    out: *mut *mut TotSieve,
) -> TotStatus {
    if out.is_null() {
        return TotStatus::NullPointer;
    }
    match PhiSieve::build_with_budget(horizon, budget_bytes) {
        Ok(s) => unsafe { write_out(out, Box::into_raw(Box::new(TotSieve(s)))) },
        Err(e) => TotStatus::from(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn tot_sieve_horizon(sieve: *const TotSieve) -> u64 {
    if sieve.is_null() {
        return 0;
    }
    unsafe { &*sieve }.0.horizon()
}

/// Tabulated phi(k); DomainError when k is outside [1, horizon].
#[no_mangle]
pub unsafe extern "C" fn tot_sieve_phi(sieve: *const TotSieve, k: u64, out: *mut u64) -> TotStatus {
    if sieve.is_null() {
        return TotStatus::NullPointer;
    }
    let sieve = &unsafe { &*sieve }.0;
    if k < 1 || k > sieve.horizon() {
        return TotStatus::DomainError;
    }
    unsafe { write_out(out, sieve.phi(k)) }
}

#[no_mangle]
pub unsafe extern "C" fn tot_sieve_free(sieve: *mut TotSieve) {
    if !sieve.is_null() {
        drop(unsafe { Box::from_raw(sieve) });
    }
}

/// N1(m) from a sieve whose horizon covers the policy's safe bound;
/// ResourceError when it does not.
#[no_mangle]
pub unsafe extern "C" fn tot_n1(
    sieve: *const TotSieve,
    m: u64,
    policy: TotHorizonPolicy,
    out: *mut u64,
) -> TotStatus {
    if sieve.is_null() {
        return TotStatus::NullPointer;
    }
    match totients::sparsely_totient::n1_of(m, &unsafe { &*sieve }.0, policy.into()) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => TotStatus::from(&e),
    }
}

fn cert_to_cstring<F>(build: F, out: *mut *mut c_char) -> TotStatus
where
    F: FnOnce(&CertifyOptions) -> totients::Result<totients::families::FamilyCertificate>,
{
    if out.is_null() {
        return TotStatus::NullPointer;
    }
    let cert = match build(&CertifyOptions::default()) {
        Ok(c) => c,
        Err(e) => return TotStatus::from(&e),
    };
    let json = match serde_json::to_string(&cert) {
        Ok(j) => j,
        Err(_) => return TotStatus::DomainError,
    };
    match CString::new(json) {
        Ok(s) => unsafe { write_out(out, s.into_raw()) },
        Err(_) => TotStatus::DomainError,
    }
}

/// K_{q,r} certificate as a JSON string; release with `tot_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tot_family_kmax_json(q: u64, r: u32, out: *mut *mut c_char) -> TotStatus {
    cert_to_cstring(|opts| totients::families::gen_k_max(q, r, opts), out)
}

/// k_{q,r} certificate as a JSON string; release with `tot_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tot_family_kmin_json(q: u64, r: u32, out: *mut *mut c_char) -> TotStatus {
    cert_to_cstring(|opts| totients::families::gen_k_min(q, r, opts), out)
}

/// R(r1,r2) certificate as a JSON string; release with `tot_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tot_family_r_json(r1: u32, r2: u32, out: *mut *mut c_char) -> TotStatus {
    cert_to_cstring(|opts| totients::families::gen_r(r1, r2, opts), out)
}

/// Fermat-product certificate as a JSON string; release with
/// `tot_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tot_family_fermat_json(k: u32, a: u32, out: *mut *mut c_char) -> TotStatus {
    cert_to_cstring(|opts| totients::families::gen_fermat(k, a, opts), out)
}

/// Frees a string returned by the `_json` functions.
#[no_mangle]
pub unsafe extern "C" fn tot_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn scalar_calls() {
        unsafe {
            let mut v = 0u64;
            assert_eq!(tot_euler_phi(750, &mut v), TotStatus::Ok);
            assert_eq!(v, 200);
            assert_eq!(tot_euler_phi(0, &mut v), TotStatus::DomainError);
            assert_eq!(tot_euler_phi(5, ptr::null_mut()), TotStatus::NullPointer);

            let mut b = false;
            assert_eq!(tot_is_prime(97, &mut b), TotStatus::Ok);
            assert!(b);

            assert_eq!(tot_primorial(7, &mut v), TotStatus::Ok);
            assert_eq!(v, 210);
            assert_eq!(tot_primorial(53, &mut v), TotStatus::DomainError);
        }
    }

    #[test]
    fn preimage_lifecycle() {
        unsafe {
            let mut handle: *mut TotPreimage = ptr::null_mut();
            assert_eq!(tot_inverse_phi(4, &mut handle), TotStatus::Ok);
            assert_eq!(tot_preimage_len(handle), 4);

            let mut buf = [0u64; 8];
            let n = tot_preimage_solutions(handle, buf.as_mut_ptr(), buf.len());
            assert_eq!(&buf[..n], &[5, 8, 10, 12]);

            let mut v = 0u64;
            assert_eq!(tot_preimage_n2(handle, &mut v), TotStatus::Ok);
            assert_eq!(v, 12);
            assert_eq!(tot_preimage_n3(handle, &mut v), TotStatus::Ok);
            assert_eq!(v, 5);
            tot_preimage_free(handle);

            // Nontotient: empty preimage, extremes are domain errors.
            let mut empty: *mut TotPreimage = ptr::null_mut();
            assert_eq!(tot_inverse_phi(14, &mut empty), TotStatus::Ok);
            assert_eq!(tot_preimage_len(empty), 0);
            assert_eq!(tot_preimage_n2(empty, &mut v), TotStatus::DomainError);
            tot_preimage_free(empty);

            assert_eq!(tot_inverse_phi(0, &mut empty), TotStatus::DomainError);
        }
    }

    #[test]
    fn sieve_and_n1() {
        unsafe {
            let mut sieve: *mut TotSieve = ptr::null_mut();
            assert_eq!(tot_sieve_build(200, 1 << 20, &mut sieve), TotStatus::Ok);
            assert_eq!(tot_sieve_horizon(sieve), 200);

            let mut v = 0u64;
            assert_eq!(tot_sieve_phi(sieve, 12, &mut v), TotStatus::Ok);
            assert_eq!(v, 4);
            assert_eq!(tot_sieve_phi(sieve, 0, &mut v), TotStatus::DomainError);
            assert_eq!(tot_sieve_phi(sieve, 201, &mut v), TotStatus::DomainError);

            assert_eq!(tot_n1(sieve, 8, TotHorizonPolicy::Conservative, &mut v), TotStatus::Ok);
            assert_eq!(v, 30);
            // Horizon 200 cannot certify N1(100).
            assert_eq!(
                tot_n1(sieve, 100, TotHorizonPolicy::Conservative, &mut v),
                TotStatus::ResourceError
            );
            tot_sieve_free(sieve);

            let mut fail: *mut TotSieve = ptr::null_mut();
            assert_eq!(tot_sieve_build(1 << 40, 1 << 20, &mut fail), TotStatus::ResourceError);
        }
    }

    #[test]
    fn certificate_json() {
        unsafe {
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tot_family_kmax_json(3, 1, &mut s), TotStatus::Ok);
            let json = CStr::from_ptr(s).to_str().unwrap().to_owned();
            tot_string_free(s);
            assert!(json.contains("\"element\":18"));
            assert!(json.contains("\"verdict_n2\":true"));

            assert_eq!(tot_family_r_json(1, 2, &mut s), TotStatus::DomainError);
            assert_eq!(tot_family_fermat_json(1, 3, &mut s), TotStatus::DomainError);
            assert_eq!(tot_family_kmin_json(5, 1, &mut s), TotStatus::DomainError);
        }
    }
}
