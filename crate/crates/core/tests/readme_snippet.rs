use bailey_core::lattice::{IndexBox, MultiIndex};
use bailey_core::qfield::Rational;
use bailey_core::transforms::{GroupParamsA, Params};
use bailey_core::verify::{check_inversion, Verdict};

#[test]
fn readme_snippet_compiles_and_passes() -> Result<(), bailey_core::error::Error> {
    let params = Params::A(GroupParamsA::new(
        Rational::new(1, 2)?,
        Rational::new(1, 3)?,
        vec![Rational::one()],
    )?);
    let bbox = IndexBox::new(MultiIndex::new(vec![4])?);
    let report = check_inversion(&params, &bbox);
    assert_eq!(report.verdict(), Verdict::Pass);
    print!("{}", report.render_machine());
    Ok(())
}
