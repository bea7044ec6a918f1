//! Weight 4 Hecke eigenforms and the critical values of their L-functions.

use std::collections::BTreeMap;
use std::path::Path;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::golden;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularForm {
    pub name: String,
    pub level: u64,
    pub weight: u32,
    /// Atkin-Lehner sign `w`.
    pub sign: i8,
    /// Stored coefficients, `a_1 = 1` always present.
    pub coeffs: BTreeMap<u64, i64>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn smallest_factor(n: u64) -> u64 {
    (2..).take_while(|d| d * d <= n).find(|d| n % d == 0).unwrap_or(n)
}

impl ModularForm {
    /// `a_p` from the stored data.
    pub fn a_p(&self, p: u64) -> Option<i64> {
        self.coeffs.get(&p).copied()
    }

    /// Largest `n` with every prime `p <= n` stored.
    pub fn prime_bound(&self) -> u64 {
        let top = self.coeffs.keys().next_back().copied().unwrap_or(1);
        let mut n = 1;
        while n < top && (!is_prime(n + 1) || self.coeffs.contains_key(&(n + 1))) {
            n += 1;
        }
        n
    }

    fn validate(&self) -> Result<()> {
        if self.weight != 4 {
            return Err(Error::WrongWeight(self.weight));
        }
        match self.coeffs.get(&1) {
            Some(1) => {}
            Some(&a) => return Err(Error::NotNormalized(a)),
            None => return Err(Error::NotNormalized(0)),
        }
        let top = self.coeffs.keys().next_back().copied().unwrap_or(1);
        for p in (2..=top).filter(|&p| is_prime(p)) {
            let Some(a) = self.a_p(p) else {
                return Err(Error::MissingPrime(p));
            };
            if self.level % p != 0 && (a as f64).powi(2) > 4.0 * (p as f64).powi(3) {
                return Err(Error::DeligneBound { p, a_p: a });
            }
        }
        let table = extend_coefficients(self, top)?;
        for (&n, &stored) in &self.coeffs {
            if n > 1 && !is_prime(n) && table[n as usize] != stored {
                return Err(Error::HeckeMismatch { n, stored, derived: table[n as usize] });
            }
        }
        Ok(())
    }

    /// Compare the first coefficients with a printed expansion `a_1, a_2, ...`.
    pub fn check_expansion(&self, expansion: &[i64]) -> Result<()> {
        let table = extend_coefficients(self, expansion.len() as u64)?;
        for (i, &expected) in expansion.iter().enumerate() {
            let n = i as u64 + 1;
            if table[n as usize] != expected {
                return Err(Error::Checksum { n, expected, found: table[n as usize] });
            }
        }
        Ok(())
    }
}

/// Parse a coefficient file: comments start with `#`, the header is
/// `name level weight sign`, then `n a_n` lines in increasing `n`.
pub fn parse_form(text: &str) -> Result<ModularForm> {
    let bad = |m: String| Error::FormFile(m);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 {
        return Err(bad(format!("header `{header}` is not `name level weight sign`")));
    }
    let num = |s: &str, what: &str| s.parse::<i64>().map_err(|_| bad(format!("{what} `{s}` is not an integer")));
    let level = num(h[1], "level")?;
    let weight = num(h[2], "weight")?;
    let sign = num(h[3], "sign")?;
    if level < 1 || !(0..=u32::MAX as i64).contains(&weight) || sign.abs() != 1 {
        return Err(bad(format!("header `{header}` out of range")));
    }
    let mut coeffs = BTreeMap::from([(1u64, 1i64)]);
    let mut last = 0u64;
    for (lineno, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 2 {
            return Err(bad(format!("line {lineno}: expected `n a_n`")));
        }
        let n = num(f[0], "index")?;
        if n < 1 || n as u64 <= last {
            return Err(bad(format!("line {lineno}: indices must increase")));
        }
        last = n as u64;
        coeffs.insert(n as u64, num(f[1], "coefficient")?);
    }
    let form = ModularForm { name: h[0].to_string(), level: level as u64, weight: weight as u32, sign: sign as i8, coeffs };
    form.validate()?;
    Ok(form)
}

/// Parse and, when the form has a reference row, check it against the
/// printed truncation.
pub fn load_form_text(text: &str) -> Result<ModularForm> {
    let form = parse_form(text)?;
    if let Some(row) = golden::golden().form_row(&form.name) {
        if row.level != form.level {
            return Err(Error::FormFile(format!("level {} differs from the reference {}", form.level, row.level)));
        }
        form.check_expansion(&row.expansion)?;
    }
    Ok(form)
}

pub fn load_form(path: &Path) -> Result<ModularForm> {
    load_form_text(&std::fs::read_to_string(path)?)
}

/// The form `name` from `dir` when given, otherwise the bundled copy.
pub fn resolve_form(name: &str, dir: Option<&Path>) -> Result<ModularForm> {
    match dir {
        Some(d) => load_form(&d.join(golden::form_file_name(name))),
        None => load_form_text(golden::builtin_form_text(name)?),
    }
}

/// `a_0 = 0, a_1, ..., a_{n_max}` by multiplicativity and the Hecke
/// recursion at each prime.
pub fn extend_coefficients(form: &ModularForm, n_max: u64) -> Result<Vec<i64>> {
    let mut a = vec![0i64; n_max as usize + 1];
    if n_max >= 1 {
        a[1] = 1;
    }
    let ovf = || Error::Overflow;
    for n in 2..=n_max {
        let p = smallest_factor(n);
        let (mut m, mut r) = (n, 0u32);
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        let v = if m > 1 {
            a[m as usize].checked_mul(a[(n / m) as usize]).ok_or_else(ovf)?
        } else {
            let ap = form.a_p(p).ok_or(Error::MissingPrime(p))?;
            if r == 1 {
                ap
            } else if form.level % p == 0 {
                ap.checked_mul(a[(n / p) as usize]).ok_or_else(ovf)?
            } else {
                let p3 = (p as i64).checked_pow(3).ok_or_else(ovf)?;
                let x = ap.checked_mul(a[(n / p) as usize]).ok_or_else(ovf)?;
                let y = p3.checked_mul(a[(n / p / p) as usize]).ok_or_else(ovf)?;
                x.checked_sub(y).ok_or_else(ovf)?
            }
        };
        a[n as usize] = v;
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LValues {
    pub form: String,
    #[serde(serialize_with = "ser_floats")]
    pub l: [Float; 3],
    #[serde(serialize_with = "ser_floats")]
    pub lambda_vals: [Float; 3],
    pub terms: u64,
}

fn ser_floats<S: serde::Serializer>(v: &[Float; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in v {
        seq.serialize_element(&format!("{x:.32}"))?;
    }
    seq.end()
}

impl LValues {
    pub fn l1(&self) -> &Float {
        &self.l[0]
    }
    pub fn l2(&self) -> &Float {
        &self.l[1]
    }
    pub fn l3(&self) -> &Float {
        &self.l[2]
    }
}

/// Bits carried for a result good to `digits` decimal digits.
fn bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

/// Smallest `M` with `sum_{n > M} 3 n^(5/2) exp(-2 pi n / sqrt N) < 10^-digits`.
pub fn truncation(level: u64, digits: u32) -> u64 {
    let c = 2.0 * std::f64::consts::PI / (level as f64).sqrt();
    let target = -(digits as f64) * std::f64::consts::LN_10;
    let log_term = |n: f64| 3f64.ln() + 2.5 * n.ln() - c * n;
    let mut m = 1u64;
    loop {
        // terms decrease geometrically past the maximum at n = 5/(2c)
        let first = (m + 1) as f64;
        if first > 2.5 / c {
            let ratio = log_term(first + 1.0) - log_term(first);
            let tail = log_term(first) - (-ratio.exp()).ln_1p();
            if ratio < 0.0 && tail < target {
                return m;
            }
        }
        m += 1;
    }
}

/// `Gamma(s, x)` for `s` in `{1, 2, 3}`.
fn upper_gamma(s: u32, x: &Float) -> Float {
    let e = Float::with_val(x.prec(), -x).exp();
    let poly = match s {
        1 => Float::with_val(x.prec(), 1),
        2 => Float::with_val(x.prec(), 1 + x),
        3 => Float::with_val(x.prec(), x * x) + Float::with_val(x.prec(), 2 * x) + 2u32,
        _ => unreachable!(),
    };
    poly * e
}

/// `Lambda(f, s)` at a critical point by the symmetric split of the Mellin
/// integral at `t = 1 / sqrt N`.
pub fn completed_l_value(form: &ModularForm, s: u32, digits: u32) -> Result<(Float, u64)> {
    if !(1..=3).contains(&s) {
        return Err(Error::NonCriticalPoint(s));
    }
    let prec = bits(digits);
    let m = truncation(form.level, digits + 2);
    let available = form.prime_bound();
    if m > available {
        return Err(Error::InsufficientCoefficients { needed: m, available });
    }
    let a = extend_coefficients(form, m)?;
    let sqrt_n = Float::with_val(prec, form.level).sqrt();
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut total = Float::with_val(prec, 0);
    for n in 1..=m {
        let an = a[n as usize];
        if an == 0 {
            continue;
        }
        let x = Float::with_val(prec, &two_pi * n) / &sqrt_n;
        let r = Float::with_val(prec, x.recip_ref());
        let left = Float::with_val(prec, r.clone().pow(s)) * upper_gamma(s, &x);
        let right = Float::with_val(prec, r.pow(4 - s)) * upper_gamma(4 - s, &x) * form.sign as i32;
        total += (left + right) * an;
    }
    Ok((total, m))
}

/// `L(f, s) = Lambda(f, s) / ((sqrt N / 2 pi)^s Gamma(s))`.
pub fn l_value(form: &ModularForm, s: u32, digits: u32) -> Result<Float> {
    let (lambda, _) = completed_l_value(form, s, digits)?;
    Ok(lambda / gamma_factor(form.level, s, bits(digits)))
}

fn gamma_factor(level: u64, s: u32, prec: u32) -> Float {
    let c = Float::with_val(prec, level).sqrt() / (Float::with_val(prec, Constant::Pi) * 2u32);
    let fact: u32 = (1..s).product();
    c.pow(s) * fact
}

pub fn l_values(form: &ModularForm, digits: u32) -> Result<LValues> {
    let prec = bits(digits);
    let mut lambda_vals: [Float; 3] = std::array::from_fn(|_| Float::new(prec));
    let mut terms = 0;
    for s in 1..=3 {
        let (v, m) = completed_l_value(form, s, digits)?;
        lambda_vals[s as usize - 1] = v;
        terms = m;
    }
    let l = std::array::from_fn(|i| Float::with_val(prec, &lambda_vals[i] / gamma_factor(form.level, i as u32 + 1, prec)));
    Ok(LValues { form: form.name.clone(), l, lambda_vals, terms })
}

/// `|value - reference| <= 5 * 10^(floor(log10 |reference|) - digits)`, in
/// the precision of `value`.
pub fn agrees_to_digits(value: &Float, reference: &str, digits: i32) -> bool {
    let prec = value.prec().max(256);
    let Ok(r) = Float::parse(reference) else {
        return false;
    };
    let r = Float::with_val(prec, r);
    let scale = if r.is_zero() { 0 } else { Float::with_val(prec, r.abs_ref()).log10().floor().to_f64() as i32 };
    let diff = Float::with_val(prec, value - &r).abs();
    diff <= Float::with_val(prec, 10).pow(scale - digits) * 5u32
}
