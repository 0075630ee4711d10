pub mod born;
pub mod heun;
pub mod potential;
pub mod transmit;

use crate::output::Document;
use crate::{CliResult, Common};

pub(crate) fn emit(doc: &Document, common: &Common) -> CliResult<()> {
    doc.emit(common.output.as_deref(), common.format)?;
    Ok(())
}
