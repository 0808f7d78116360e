#![no_main]

use libfuzzer_sys::fuzz_target;
use theta3::BuildRecipe;

fuzz_target!(|data: &str| {
    if let Ok(r) = data.parse::<BuildRecipe>() {
        let text = r.to_string();
        assert_eq!(text.parse::<BuildRecipe>().unwrap(), r);
        // Small terms only; evaluation of huge geometries is not the point.
        if r.leaf_count() <= 8 && text.len() <= 256 {
            let _ = r.evaluate();
        }
    }
});
