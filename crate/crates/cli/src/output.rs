use std::io::Write;

use crate::config::Format;
use crate::record::RunRecord;

pub fn write_record<W: Write>(record: &RunRecord, format: Format, out: W) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, record)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&record.table.header)?;
            for row in &record.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
