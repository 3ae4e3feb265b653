use std::io::{self, Write};

/// Column names that every log starts with.
pub const BASE_COLUMNS: [&str; 6] = ["t", "y", "y_ref", "u", "f_hat", "e"];

/// Time series of one closed-loop run, one row per control period.
///
/// `y` and `e = y - y_ref` are computed from the true plant output; the
/// noisy measurement seen by the controller is the `y_meas` extra column.
/// `f_hat` is NaN for controllers that do not estimate `F`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimLog {
    pub name: String,
    pub seed: u64,
    /// The scenario as TOML, for provenance of the numbers.
    pub parameters: String,
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub y_ref: Vec<f64>,
    pub u: Vec<f64>,
    pub f_hat: Vec<f64>,
    pub e: Vec<f64>,
    pub extra_names: Vec<String>,
    /// One vector per extra column.
    pub extras: Vec<Vec<f64>>,
}

/// One logged sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub t: f64,
    pub y: f64,
    pub y_ref: f64,
    pub u: f64,
    pub f_hat: f64,
    pub e: f64,
}

impl SimLog {
    pub fn new(name: impl Into<String>, seed: u64, extra_names: Vec<String>) -> Self {
        let extras = vec![Vec::new(); extra_names.len()];
        Self {
            name: name.into(),
            seed,
            extra_names,
            extras,
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Row, extras: &[f64]) {
        debug_assert_eq!(extras.len(), self.extras.len());
        self.t.push(row.t);
        self.y.push(row.y);
        self.y_ref.push(row.y_ref);
        self.u.push(row.u);
        self.f_hat.push(row.f_hat);
        self.e.push(row.e);
        for (col, v) in self.extras.iter_mut().zip(extras) {
            col.push(*v);
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn columns(&self) -> Vec<&str> {
        BASE_COLUMNS
            .iter()
            .copied()
            .chain(self.extra_names.iter().map(String::as_str))
            .collect()
    }

    pub fn extra(&self, name: &str) -> Option<&[f64]> {
        self.extra_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.extras[i].as_slice())
    }

    /// Index of the first row with `t >= from`.
    pub fn index_from(&self, from: f64) -> usize {
        self.t.partition_point(|t| *t < from - 1e-12)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.columns().join(","))?;
        let mut line = String::new();
        for i in 0..self.len() {
            line.clear();
            let base = [self.t[i], self.y[i], self.y_ref[i], self.u[i], self.f_hat[i], self.e[i]];
            for (j, v) in base.iter().chain(self.extras.iter().map(|c| &c[i])).enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&v.to_string());
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut log = SimLog::new("demo", 0, vec!["xdot".into()]);
        let row = Row {
            t: 0.0,
            y: 1.0,
            y_ref: 0.5,
            u: -2.0,
            f_hat: f64::NAN,
            e: 0.5,
        };
        log.push(row, &[3.25]);
        assert_eq!(
            log.to_csv_string(),
            "t,y,y_ref,u,f_hat,e,xdot\n0,1,0.5,-2,NaN,0.5,3.25\n"
        );
        assert_eq!(log.extra("xdot"), Some(&[3.25][..]));
    }
}
