//! Kernel evaluation over raw numeric inputs: any (n, t, r) bit pattern
//! must produce a value or an error, never a panic, including NaN,
//! infinities, subnormals and out-of-range dimensions.

#![no_main]

use libfuzzer_sys::fuzz_target;

use hypheat::kernel::{self, RadialPoint};
use hypheat::QuadratureSpec;

fuzz_target!(|data: &[u8]| {
    if data.len() < 20 {
        return;
    }
    let n = u32::from_le_bytes(data[0..4].try_into().unwrap());
    let t = f64::from_le_bytes(data[4..12].try_into().unwrap());
    let r = f64::from_le_bytes(data[12..20].try_into().unwrap());
    let quad = QuadratureSpec::default();
    if let Ok(p) = RadialPoint::new(t, r) {
        let _ = kernel::eval_kernel(n, p, &quad);
    }
});
