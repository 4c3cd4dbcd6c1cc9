//! Result tables: CSV emission with a `#` metadata preamble, fixed-width
//! scientific number formatting, and a deterministic configuration hash.

/// One output column: a plain name and the unit its numbers carry.
#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Column {
            name: name.to_string(),
            unit: unit.to_string(),
        }
    }
}

/// Row-major numeric table with per-column units.
#[derive(Debug, Clone)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        ResultTable {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    /// Append a row; all values must be finite and match the column count.
    pub fn push(&mut self, row: Vec<f64>) -> Result<(), String> {
        if row.len() != self.columns.len() {
            return Err(format!(
                "table {}: row with {} values against {} columns",
                self.name,
                row.len(),
                self.columns.len()
            ));
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(format!(
                "table {}: non-finite value {bad} cannot be emitted",
                self.name
            ));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Render the table as CSV: `#` metadata preamble (tool version,
    /// command, configuration hash, units), one header row of column
    /// names, then `%.12e`-formatted data rows. Contains nothing
    /// time-dependent, so identical runs produce identical bytes.
    pub fn to_csv(&self, command: &str, config_hash: u64) -> String {
        let mut out = String::new();
        out.push_str(&format!("# etwist {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# command: {command}\n"));
        out.push_str(&format!("# table: {}\n", self.name));
        out.push_str(&format!("# config: fnv1a64:{config_hash:016x}\n"));
        let units: Vec<&str> = self.columns.iter().map(|c| c.unit.as_str()).collect();
        out.push_str(&format!("# units: {}\n", units.join(",")));
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_e12(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// C-style `%.12e` formatting: twelve fractional digits and a signed,
/// two-digit-minimum exponent (`1.234567890123e+05`).
pub fn format_e12(v: f64) -> String {
    let raw = format!("{v:.12e}");
    let (mantissa, exponent) = raw
        .split_once('e')
        .expect("float scientific form always has an exponent");
    let exp: i32 = exponent.parse().expect("exponent is a small integer");
    format!("{mantissa}e{exp:+03}")
}

/// FNV-1a 64-bit hash; stable across platforms and runs, used to stamp
/// outputs with the configuration that produced them.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
