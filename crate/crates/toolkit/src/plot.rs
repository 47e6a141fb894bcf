//! Gnuplot scripts emitted next to the data files. Nothing is rendered here.

fn preamble(title: &str) -> String {
    format!("# {title}\nset datafile separator ','\nset key autotitle columnhead\nset title '{title}'\n")
}

/// Heat map of column `col` (1-based) of an `x,xi,...` table.
pub fn heatmap(data: &str, col: usize, title: &str, log: bool) -> String {
    let mut s = preamble(title);
    s.push_str("set xlabel 'x'\nset ylabel 'xi'\nset size ratio -1\nset view map\n");
    if log {
        s.push_str("set logscale cb\n");
    }
    s.push_str(&format!("plot '{data}' every ::1 using 1:2:{col} with image notitle\n"));
    s
}

/// Binary raster plot of an `x,xi,inside` mask.
pub fn mask(data: &str, title: &str) -> String {
    let mut s = heatmap(data, 3, title, false);
    s.insert_str(s.find("plot").unwrap_or(0), "set palette defined (0 'white', 1 'black')\nunset colorbox\n");
    s
}

/// Phase-plane curves of one or more `t,x,xi,energy` files.
pub fn trajectories(files: &[String], title: &str) -> String {
    let mut s = preamble(title);
    s.push_str("set xlabel 'x'\nset ylabel 'xi'\nset size ratio -1\nplot ");
    let parts: Vec<String> = files.iter().map(|f| format!("'{f}' using 2:3 with lines title '{f}'")).collect();
    s.push_str(&parts.join(", \\\n     "));
    s.push('\n');
    s
}

/// Real part, imaginary part and modulus of an `x,re,im` signal.
pub fn signal(data: &str, title: &str) -> String {
    let mut s = preamble(title);
    s.push_str(&format!(
        "set xlabel 'x'\nplot '{data}' using 1:2 with lines title 're', '' using 1:3 with lines title 'im', '' using 1:(sqrt($2**2+$3**2)) with lines title 'abs'\n"
    ));
    s
}
