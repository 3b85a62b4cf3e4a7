//! Hand-emitted SVG line chart: log10 error against n, solid L2 series,
//! dashed maximum series.

pub(crate) fn error_plot(rows: &[(u32, f64, f64)], title: &str) -> String {
    let (w, h) = (640.0, 440.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let floor = 1e-16f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    let ys_l2: Vec<f64> = rows.iter().map(|r| r.2.max(floor).log10()).collect();
    let ys_m: Vec<f64> = rows.iter().map(|r| r.1.max(floor).log10()).collect();
    let xmin = xs.first().copied().unwrap_or(0.0);
    let xmax = xs.last().copied().unwrap_or(1.0).max(xmin + 1.0);
    let ymin = ys_l2
        .iter()
        .chain(&ys_m)
        .fold(f64::INFINITY, |a, &b| a.min(b))
        .floor()
        - 0.5;
    let ymax = ys_l2
        .iter()
        .chain(&ys_m)
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        .ceil()
        + 0.5;
    let px = |x: f64| ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb);
    let path = |ys: &[f64]| {
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{:.0}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{title}</text>\n",
        w / 2.0
    ));
    // axes
    s.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr,
        h - mb
    ));
    s.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        h - mb
    ));
    // y ticks at integer exponents
    let mut e = ymin.ceil() as i64;
    while (e as f64) <= ymax {
        let y = py(e as f64);
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{ml}\" y2=\"{y:.1}\" stroke=\"black\"/>\n",
            ml - 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e{e}</text>\n",
            ml - 8.0,
            y + 4.0
        ));
        e += if ymax - ymin > 10.0 { 2 } else { 1 };
    }
    // x ticks on the sample points
    for &x in &xs {
        let xp = px(x);
        s.push_str(&format!(
            "<line x1=\"{xp:.1}\" y1=\"{:.1}\" x2=\"{xp:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            h - mb,
            h - mb + 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{xp:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{x:.0}</text>\n",
            h - mb + 18.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"{:.0}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">n</text>\n",
        (ml + w - mr) / 2.0,
        h - 12.0
    ));
    // series: L2 solid, max dashed
    s.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.8\"/>\n",
        path(&ys_l2)
    ));
    s.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#bb3322\" stroke-width=\"1.8\" stroke-dasharray=\"6,4\"/>\n",
        path(&ys_m)
    ));
    for (&x, (&yl, &ym)) in xs.iter().zip(ys_l2.iter().zip(&ys_m)) {
        s.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"#1f4e9c\"/>\n",
            px(x),
            py(yl)
        ));
        s.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"#bb3322\"/>\n",
            px(x),
            py(ym)
        ));
    }
    // legend
    let (lx, ly) = (w - mr - 150.0, mt + 10.0);
    s.push_str(&format!(
        "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{:.1}\" y2=\"{ly}\" stroke=\"#1f4e9c\" stroke-width=\"1.8\"/>\n",
        lx + 30.0
    ));
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">e_L2 (solid)</text>\n",
        lx + 36.0,
        ly + 4.0
    ));
    s.push_str(&format!(
        "<line x1=\"{lx}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#bb3322\" stroke-width=\"1.8\" stroke-dasharray=\"6,4\"/>\n",
        ly + 18.0,
        lx + 30.0,
        ly + 18.0
    ));
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">e_M (dashed)</text>\n",
        lx + 36.0,
        ly + 22.0
    ));
    s.push_str("</svg>\n");
    s
}
