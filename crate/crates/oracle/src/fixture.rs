/// Renders a point list in the orbit cache format, so fixtures and engine
/// caches can be compared byte for byte.
pub fn render_fixture(form: &str, gens: &str, w0: &[i64], depth: usize, bound: f64, rows: &[Vec<i64>]) -> String {
    let mut rows = rows.to_vec();
    rows.sort();
    let w0: Vec<String> = w0.iter().map(|x| x.to_string()).collect();
    let mut out = format!(
        "orbitsieve-orbit form={form} gens={gens} w0={} depth={depth} bound={bound:.6} count={}\n",
        w0.join(","),
        rows.len()
    );
    for r in &rows {
        let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format() {
        let s = render_fixture("f", "g", &[3, 4, 5], 0, 10.0, &[vec![3, 4, 5], vec![-3, 4, 5]]);
        assert_eq!(s, "orbitsieve-orbit form=f gens=g w0=3,4,5 depth=0 bound=10.000000 count=2\n-3 4 5\n3 4 5\n");
    }
}
