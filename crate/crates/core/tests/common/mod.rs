#![allow(dead_code)]

use bbpert::{run_series, AnsatzSpec, BBSeries, PotentialSpec, Scalar};

pub const D: u32 = 80;

pub fn series(k: u32, p: u32, j: usize, digits: u32) -> BBSeries {
    run_series(&PotentialSpec::pure_power(k, digits).unwrap(), AnsatzSpec::new(p), j, digits).unwrap()
}

pub fn cbrt12(digits: u32) -> Scalar {
    Scalar::from_int(12, digits).root(3).unwrap()
}

/// `x` written with exactly `decimals` digits after the point, truncated and
/// rounded half-up.
pub fn fixed(x: &Scalar, decimals: usize) -> (String, String) {
    let sign = if x.is_negative() { "-" } else { "" };
    let sci = x.abs().to_sig_string(decimals + 40);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i64 = exp.parse().unwrap();
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    // value = 0.<digits> * 10^(exp+1)
    let point = exp + 1;
    let mut all = String::new();
    if point <= 0 {
        all.push('0');
        all.push_str(&"0".repeat((-point) as usize));
        all.push_str(&digits);
    } else {
        let p = point as usize;
        let padded = format!("{digits:0<width$}", width = p + 1);
        all = padded;
    }
    let int_len = if point <= 0 { 1 } else { point as usize };
    let all = format!("{all:0<width$}", width = int_len + decimals + 1);
    let keep = &all[..int_len + decimals];
    let next = all.as_bytes()[int_len + decimals] - b'0';
    let mut rounded: Vec<u8> = keep.bytes().map(|b| b - b'0').collect();
    if next >= 5 {
        let mut i = rounded.len();
        loop {
            if i == 0 {
                rounded.insert(0, 1);
                break;
            }
            i -= 1;
            if rounded[i] == 9 {
                rounded[i] = 0;
            } else {
                rounded[i] += 1;
                break;
            }
        }
    }
    let render = |ds: &[u8]| {
        let s: String = ds.iter().map(|d| (b'0' + d) as char).collect();
        let (i, f) = s.split_at(s.len() - decimals);
        let i = i.trim_start_matches('0');
        let i = if i.is_empty() { "0" } else { i };
        if decimals == 0 {
            format!("{sign}{i}")
        } else {
            format!("{sign}{i}.{f}")
        }
    };
    let t: Vec<u8> = keep.bytes().map(|b| b - b'0').collect();
    (render(&t), render(&rounded))
}

/// Whether `x / 10^pow10` reproduces the printed decimal under either
/// truncation or rounding.
pub fn matches_printed(x: &Scalar, printed: &str, pow10: i32) -> bool {
    let v = x / &Scalar::pow10(pow10, x.digits());
    let decimals = printed.split_once('.').map_or(0, |(_, f)| f.len());
    let (t, r) = fixed(&v, decimals);
    t == printed || r == printed
}
