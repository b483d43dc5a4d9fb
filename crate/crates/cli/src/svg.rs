//! Hand-rolled SVG figures: the stripe diagram in the `(Omega, omega21 tau)`
//! plane and the simplex point cloud. A few hundred elements each, so no
//! plotting dependency; every coordinate is formatted to fixed precision to
//! keep output byte-stable.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

use orthotime::qsl::BindingBound;
use orthotime::regions::{stripe_bounds, SimplexPoint};

const BLUE: &str = "#1f77b4";
const RED: &str = "#d62728";
const GREEN: &str = "#2ca02c";
const CYAN: &str = "#00b7c8";
const MAGENTA: &str = "#e020e0";

pub fn diagram(omega_max: f64, tau_max: f64, samples: usize) -> String {
    let (width, height) = (880.0, 640.0);
    let (ml, mr, mt, mb) = (64.0, 24.0, 28.0, 56.0);
    let px = |omega: f64| ml + omega / omega_max * (width - ml - mr);
    let py = |x: f64| height - mb - x / tau_max * (height - mb - mt);
    let n = samples.clamp(64, 4000);

    let mut s = open(width, height);

    // one gray band per stripe, clipped to the window
    let mut l = 0u32;
    while 2.0 * (l as f64) < omega_max {
        let start = (2.0 * l as f64).max(1e-9 * omega_max.max(1.0));
        let mut lows: Vec<(f64, f64)> = Vec::new();
        let mut highs: Vec<(f64, f64)> = Vec::new();
        for i in 0..=n {
            let omega = start + (omega_max - start) * i as f64 / n as f64;
            if let Ok(Some(b)) = stripe_bounds(l, omega) {
                if b.lower < tau_max {
                    lows.push((omega, b.lower));
                    highs.push((omega, b.upper.min(tau_max)));
                }
            }
        }
        if lows.len() > 1 {
            let mut d = String::new();
            for (i, (o, x)) in lows.iter().enumerate() {
                let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, px(*o), py(*x));
            }
            for (o, x) in highs.iter().rev() {
                let _ = write!(d, "L{:.2},{:.2} ", px(*o), py(*x));
            }
            d.push('Z');
            let _ = writeln!(s, r##"<path d="{d}" fill="#e8e8e8" stroke="none"/>"##);
        }
        l += 1;
    }

    s.push_str(&clip_box(ml, mt, width - mr, height - mb));

    // border curves: horizontal lines and the two hyperbola families
    let mut j = 0u32;
    while (2 * j + 1) as f64 * PI <= tau_max {
        let y = py((2 * j + 1) as f64 * PI);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{BLUE}" stroke-width="1.4"/>"#,
            px(0.0),
            px(omega_max)
        );
        j += 1;
    }
    fn lower_curve(omega: f64, k: f64) -> f64 {
        k * PI / (1.0 + omega)
    }
    fn upper_curve(omega: f64, k: f64) -> f64 {
        k * PI / omega
    }
    for (color, curve) in [(RED, lower_curve as fn(f64, f64) -> f64), (GREEN, upper_curve as _)] {
        let mut l = 0u32;
        loop {
            let k = (2 * l + 1) as f64;
            if curve(omega_max, k) > tau_max {
                break;
            }
            s.push_str(&polyline(
                color,
                1.4,
                "",
                (0..=n).filter_map(|i| {
                    let omega = (1e-9f64).max(omega_max * i as f64 / n as f64);
                    let x = curve(omega, k);
                    (x <= tau_max * 1.02).then(|| (px(omega), py(x.min(tau_max))))
                }),
            ));
            l += 1;
        }
    }
    // the global floor, re-stroked dashed on top of the first lower border
    s.push_str(&polyline(
        "#111",
        1.6,
        r#" stroke-dasharray="7 5""#,
        (0..=n).filter_map(|i| {
            let omega = (1e-9f64).max(omega_max * i as f64 / n as f64);
            let x = PI / (1.0 + omega);
            (x <= tau_max * 1.02).then(|| (px(omega), py(x.min(tau_max))))
        }),
    ));

    // crossing markers
    let mut j = 0u32;
    while (2 * j + 1) as f64 * PI <= tau_max {
        let x = (2 * j + 1) as f64 * PI;
        let mut l = j;
        loop {
            // balanced-pair crossings on an odd line: stars where the lower
            // border meets it, triangles where the upper border does
            let star_omega = 2.0 * (l - j) as f64 / (2 * j + 1) as f64;
            let tri_omega = (2 * l + 1) as f64 / (2 * j + 1) as f64;
            if star_omega > omega_max && tri_omega > omega_max {
                break;
            }
            if star_omega > 0.0 && star_omega <= omega_max {
                s.push_str(&star(px(star_omega), py(x), 7.0));
            }
            if tri_omega <= omega_max {
                s.push_str(&triangle(px(tri_omega), py(x), 6.0));
            }
            l += 1;
        }
        j += 1;
    }
    let mut k = 1u32;
    while 2.0 * k as f64 * PI <= tau_max {
        let x = 2.0 * k as f64 * PI;
        let mut l = k;
        loop {
            let omega = (2 * l + 1) as f64 / (2 * k) as f64 - 1.0;
            if omega > omega_max {
                break;
            }
            if omega > 0.0 {
                s.push_str(&square(px(omega), py(x), 6.0));
            }
            l += 1;
        }
        k += 1;
    }
    s.push_str("</g>\n");

    axes_diagram(&mut s, omega_max, tau_max, &px, &py, width, height, ml, mr, mt, mb);
    s.push_str("</svg>\n");
    s
}

pub fn simplex(points: &[SimplexPoint]) -> String {
    let (width, height) = (720.0, 660.0);
    let side = 560.0;
    let apex = (width / 2.0, 52.0);
    let left = (width / 2.0 - side / 2.0, 52.0 + side * 3f64.sqrt() / 2.0);
    let right = (width / 2.0 + side / 2.0, left.1);
    let pos = |r: [f64; 3]| {
        (
            r[0] * apex.0 + r[1] * left.0 + r[2] * right.0,
            r[0] * apex.1 + r[1] * left.1 + r[2] * right.1,
        )
    };

    let mut s = open(width, height);
    let _ = writeln!(
        s,
        r##"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="#fafafa" stroke="#999" stroke-width="1"/>"##,
        apex.0, apex.1, left.0, left.1, right.0, right.1
    );
    // the admissible region: triads capped at one half per component
    let m12 = pos([0.5, 0.5, 0.0]);
    let m23 = pos([0.0, 0.5, 0.5]);
    let m13 = pos([0.5, 0.0, 0.5]);
    let _ = writeln!(
        s,
        r##"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="none" stroke="#444" stroke-width="1" stroke-dasharray="6 4"/>"##,
        m12.0, m12.1, m23.0, m23.1, m13.0, m13.1
    );

    for p in points {
        let (x, y) = pos(p.triad.as_array());
        let fill = match p.bound {
            BindingBound::MandelstamTamm => CYAN,
            BindingBound::MargolusLevitin => MAGENTA,
            BindingBound::Equal => "#111",
        };
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="{fill}"/>"#);
    }

    for (label, (x, y), dy) in [
        ("r1 = 1", apex, -12.0),
        ("r2 = 1", left, 24.0),
        ("r3 = 1", right, 24.0),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="15" text-anchor="middle">{label}</text>"#,
            y + dy
        );
    }
    legend(
        &mut s,
        16.0,
        16.0,
        &[
            (CYAN, "dispersion bound binds (MT)"),
            (MAGENTA, "mean-energy bound binds (ML)"),
            ("#111", "balanced, both bounds equal"),
        ],
    );
    s.push_str("</svg>\n");
    s
}

fn open(width: f64, height: f64) -> String {
    format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">
<rect width="{width}" height="{height}" fill="white"/>
"#
    )
}

fn clip_box(x0: f64, y0: f64, x1: f64, y1: f64) -> String {
    format!(
        r#"<clipPath id="plot"><rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}"/></clipPath>
<g clip-path="url(#plot)">
"#,
        x1 - x0,
        y1 - y0
    )
}

fn polyline(color: &str, width: f64, extra: &str, pts: impl Iterator<Item = (f64, f64)>) -> String {
    let body: Vec<String> = pts.map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    if body.len() < 2 {
        return String::new();
    }
    format!(
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"{extra}/>
"#,
        body.join(" ")
    )
}

fn star(cx: f64, cy: f64, r: f64) -> String {
    let pts: Vec<String> = (0..10)
        .map(|i| {
            let angle = -FRAC_PI_2 + i as f64 * PI / 5.0;
            let radius = if i % 2 == 0 { r } else { 0.45 * r };
            format!("{:.2},{:.2}", cx + radius * angle.cos(), cy + radius * angle.sin())
        })
        .collect();
    format!(
        r##"<polygon points="{}" fill="#f2b01e" stroke="#333" stroke-width="0.7"/>
"##,
        pts.join(" ")
    )
}

fn triangle(cx: f64, cy: f64, r: f64) -> String {
    format!(
        r##"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="#111" stroke="none"/>
"##,
        cx,
        cy - r,
        cx - 0.866 * r,
        cy + 0.5 * r,
        cx + 0.866 * r,
        cy + 0.5 * r
    )
}

fn square(cx: f64, cy: f64, r: f64) -> String {
    format!(
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#7b1fa2" stroke="none"/>
"##,
        cx - r / 2.0,
        cy - r / 2.0,
        r,
        r
    )
}

#[allow(clippy::too_many_arguments)]
fn axes_diagram(
    s: &mut String,
    omega_max: f64,
    tau_max: f64,
    px: &dyn Fn(f64) -> f64,
    py: &dyn Fn(f64) -> f64,
    width: f64,
    height: f64,
    ml: f64,
    mr: f64,
    mt: f64,
    mb: f64,
) {
    let _ = writeln!(
        s,
        r##"<rect x="{ml:.1}" y="{mt:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#333" stroke-width="1"/>"##,
        width - ml - mr,
        height - mb - mt
    );
    let step = nice_step(omega_max / 9.0);
    let mut tick = step;
    while tick <= omega_max * 1.0001 {
        let x = px(tick);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#333" stroke-width="1"/>
<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"##,
            height - mb,
            height - mb + 5.0,
            height - mb + 20.0,
            trim(tick)
        );
        tick += step;
    }
    // tau axis in half-pi steps
    let mut k = 0u32;
    while k as f64 * FRAC_PI_2 <= tau_max * 1.0001 {
        let value = k as f64 * FRAC_PI_2;
        let y = py(value);
        let label = match k {
            0 => "0".to_string(),
            1 => "\u{3c0}/2".to_string(),
            2 => "\u{3c0}".to_string(),
            k if k % 2 == 0 => format!("{}\u{3c0}", k / 2),
            k => format!("{k}\u{3c0}/2"),
        };
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{ml:.1}" y2="{y:.1}" stroke="#333" stroke-width="1"/>
<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="end">{label}</text>"##,
            ml - 5.0,
            ml - 9.0,
            y + 4.5
        );
        k += 1;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="15" text-anchor="middle">&#937; = &#969;&#8323;&#8322;/&#969;&#8322;&#8321;</text>
<text x="16" y="{:.1}" font-family="sans-serif" font-size="15" text-anchor="middle" transform="rotate(-90 16 {:.1})">&#969;&#8322;&#8321;&#964;</text>"#,
        (ml + width - mr) / 2.0,
        height - 14.0,
        (mt + height - mb) / 2.0,
        (mt + height - mb) / 2.0
    );
    legend(
        s,
        ml + 10.0,
        mt + 8.0,
        &[
            (BLUE, "r3 -> 0 border"),
            (RED, "r2 -> 0 border"),
            (GREEN, "r1 -> 0 border"),
            ("#111", "global floor (dashed)"),
        ],
    );
}

fn legend(s: &mut String, x: f64, y: f64, entries: &[(&str, &str)]) {
    let h = 18.0 * entries.len() as f64 + 10.0;
    let _ = writeln!(
        s,
        r##"<rect x="{x:.1}" y="{y:.1}" width="220" height="{h:.1}" fill="white" fill-opacity="0.85" stroke="#999" stroke-width="0.7"/>"##
    );
    for (i, (color, label)) in entries.iter().enumerate() {
        let row = y + 18.0 * (i as f64 + 1.0) - 4.0;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{row:.1}" x2="{:.1}" y2="{row:.1}" stroke="{color}" stroke-width="3"/>
<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{label}</text>"#,
            x + 8.0,
            x + 30.0,
            x + 36.0,
            row + 4.0
        );
    }
}

fn nice_step(raw: f64) -> f64 {
    let scale = 10f64.powf(raw.log10().floor());
    let unit = raw / scale;
    let step = if unit < 1.5 {
        1.0
    } else if unit < 3.5 {
        2.0
    } else if unit < 7.5 {
        5.0
    } else {
        10.0
    };
    step * scale
}

fn trim(value: f64) -> String {
    if (value - value.round()).abs() < 1e-9 {
        format!("{}", value.round() as i64)
    } else {
        format!("{value:.1}")
    }
}
