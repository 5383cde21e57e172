//! Grid parsing for dB-valued command-line axes: either a comma-separated
//! list (`-3,3`) or a `start:step:stop` range, inclusive of the stop when it
//! aligns with the step.

pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid `{text}` must have the form start:step:stop"));
        }
        let start = parse_number(parts[0])?;
        let step = parse_number(parts[1])?;
        let stop = parse_number(parts[2])?;
        if step <= 0.0 {
            return Err(format!("grid `{text}`: step must be positive"));
        }
        if stop < start {
            return Err(format!("grid `{text}`: stop is below start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|i| start + step * i as f64).collect())
    } else {
        text.split(',').map(parse_number).collect()
    }
}

fn parse_number(text: &str) -> Result<f64, String> {
    let value: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    if !value.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(value)
}
