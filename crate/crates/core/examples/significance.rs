//! Exact McNemar test on paired voicing judgments.

use phonaug::metrics::{mcnemar_exact, relative_change};

fn main() -> phonaug::Result<()> {
    let baseline = [
        true, false, false, true, false, false, true, false, false, false, true, false,
    ];
    let target = [
        true, true, true, true, true, false, true, true, true, true, true, true,
    ];
    println!("p = {:.4}", mcnemar_exact(&baseline, &target)?);

    println!("identical: p = {}", mcnemar_exact(&target, &target)?);
    println!(
        "12 vs 0:   p = {:.3e}",
        mcnemar_exact(&[false; 12], &[true; 12])?
    );
    println!(
        "6 vs 6:    p = {}",
        mcnemar_exact(
            &[[true; 6], [false; 6]].concat(),
            &[[false; 6], [true; 6]].concat()
        )?
    );

    println!("Ten% 73.8 -> 50.0: {:+.1}%", relative_change(73.8, 50.0)?);
    println!(
        "VoicingAcc 71.3 -> 83.8: {:+.1}%",
        relative_change(71.3, 83.8)?
    );
    Ok(())
}
