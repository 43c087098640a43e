//! The acceptance suite: one test per criterion, each printing its pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see every
//! line, or through `graycat acceptance` for the table form.

use graycat::acceptance::{run_criterion, AcceptanceConfig, CriterionResult};

fn check(id: usize) -> CriterionResult {
    let result = run_criterion(id, &AcceptanceConfig::default());
    println!("{}", result.line());
    result
}

macro_rules! criterion_test {
    ($test_name:ident, $id:expr) => {
        #[test]
        fn $test_name() {
            let result = check($id);
            assert!(result.passed, "{}", result.line());
        }
    };
}

criterion_test!(criterion_01_adc_validity_and_tensor, 1);
criterion_test!(criterion_02_nu_cell_counts, 2);
criterion_test!(criterion_03_section_identities, 3);
criterion_test!(criterion_04_decompositions, 4);
criterion_test!(criterion_05_dualities, 5);
criterion_test!(criterion_06_companion_calculus, 6);
criterion_test!(criterion_07_fibration_lifting, 7);
criterion_test!(criterion_08_square_image_fidelity, 8);
criterion_test!(criterion_09_surjectivity_calculus, 9);
criterion_test!(criterion_10_cech_segal_levels, 10);
