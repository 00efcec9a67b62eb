//! gnuplot scripts for the sweep and run CSV files.

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Rate over (tau_bar, g_bar).
    RateMap,
    /// tanh r over (tau_bar, g_bar).
    SqueezingMap,
    /// Rate and tanh r along tau_bar.
    LineScan,
    /// Cumulative probability and fidelity against N.
    RunTrace,
}

impl Figure {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().trim_start_matches("fig") {
            "1" => Ok(Figure::RateMap),
            "2" => Ok(Figure::SqueezingMap),
            "3" => Ok(Figure::LineScan),
            "4" => Ok(Figure::RunTrace),
            _ => Err(CliError::UnknownFigure(s.to_string())),
        }
    }

    fn number(self) -> u8 {
        match self {
            Figure::RateMap => 1,
            Figure::SqueezingMap => 2,
            Figure::LineScan => 3,
            Figure::RunTrace => 4,
        }
    }
}

fn quote(path: &str) -> String {
    format!("'{}'", path.replace('\'', "''"))
}

/// A self-contained script that renders `fig<N>.png` from `data`.
pub fn script(figure: Figure, data: &str) -> String {
    let n = figure.number();
    let data = quote(data);
    let mut s = format!(
        "set terminal pngcairo size 900,650 enhanced\n\
         set output 'fig{n}.png'\n\
         set datafile separator ','\n\
         set datafile missing ''\n"
    );
    let map = |col: u8, label: &str| {
        format!(
            "set xlabel 'tau_bar / pi'\n\
             set ylabel 'g_bar'\n\
             set cblabel '{label}'\n\
             set view map\n\
             set palette rgbformulae 33,13,10\n\
             plot {data} skip 1 using ($1/pi):2:{col} with image notitle\n"
        )
    };
    match figure {
        Figure::RateMap => s += &map(4, "-ln|gamma_1/gamma_0|"),
        Figure::SqueezingMap => s += &map(5, "tanh r"),
        Figure::LineScan => {
            s += &format!(
                "set xlabel 'tau_bar / pi'\n\
                 set key top left\n\
                 set yrange [0:*]\n\
                 plot {data} skip 1 using ($1/pi):4 with lines lw 2 title '-ln|gamma_1/gamma_0|', \\\n\
                 \x20    {data} skip 1 using ($1/pi):5 with lines lw 2 dt 2 title 'tanh r'\n"
            )
        }
        Figure::RunTrace => {
            s += &format!(
                "set xlabel 'N'\n\
                 set key top right\n\
                 set yrange [0:1.05]\n\
                 plot {data} skip 1 using 1:3 with linespoints pt 6 title 'P(N)', \\\n\
                 \x20    {data} skip 1 using 1:4 with linespoints pt 12 title 'F(N)'\n"
            )
        }
    }
    s
}
