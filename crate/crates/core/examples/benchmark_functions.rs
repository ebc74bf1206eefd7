//! Evaluates the four benchmark functions at their optimum and at a few
//! probe points.
//!
//! cargo run --example benchmark_functions

use shx::{make_objective, FunctionName};

fn main() -> shx::Result<()> {
    let dim = 10;
    println!("{:<11} {:>9} {:>12} {:>12} {:>12}", "function", "bounds", "f(optimum)", "f(1,..,1)", "f(upper)");
    for name in FunctionName::ALL {
        let obj = make_objective(name.as_str(), dim)?;
        let (lo, hi) = name.default_bounds();
        let optimum = name.optimum(dim);
        let ones = vec![1.0; dim];
        let corner = vec![hi; dim];
        println!(
            "{:<11} {:>9} {:>12.4e} {:>12.4e} {:>12.4e}",
            name.as_str(),
            format!("±{}", hi.max(-lo)),
            obj.value(&optimum)?,
            obj.value(&ones)?,
            obj.value(&corner)?
        );
    }
    Ok(())
}
