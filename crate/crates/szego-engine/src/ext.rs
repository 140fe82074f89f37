use symbol_core::{Complex64, LaurentSeries};

/// Complex number with an unbounded binary exponent: `m * 2^e`.
///
/// Used where Fourier coefficients of entire symbols fall far below the
/// f64 range (1/N! at N in the thousands) but only their relative size
/// matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ext {
    m: Complex64,
    e: i64,
}

fn ldexp(x: f64, k: i64) -> f64 {
    libm::scalbn(x, k.clamp(-2200, 2200) as i32)
}

impl Ext {
    pub const ZERO: Ext = Ext { m: Complex64 { re: 0.0, im: 0.0 }, e: 0 };

    fn normalized(m: Complex64, e: i64) -> Ext {
        let big = m.re.abs().max(m.im.abs());
        if big == 0.0 || !big.is_finite() {
            return if big == 0.0 { Ext::ZERO } else { Ext { m, e } };
        }
        let (_, k) = libm::frexp(big);
        Ext { m: Complex64::new(ldexp(m.re, -k as i64), ldexp(m.im, -k as i64)), e: e + k as i64 }
    }

    pub fn from_c64(z: Complex64) -> Ext {
        Self::normalized(z, 0)
    }

    pub fn from_f64(x: f64) -> Ext {
        Self::from_c64(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    pub fn mul(&self, o: &Ext) -> Ext {
        Self::normalized(self.m * o.m, self.e + o.e)
    }

    pub fn scale(&self, s: Complex64) -> Ext {
        self.mul(&Ext::from_c64(s))
    }

    pub fn add(&self, o: &Ext) -> Ext {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        if d > 120 {
            return *hi;
        }
        let shifted = Complex64::new(ldexp(lo.m.re, -d), ldexp(lo.m.im, -d));
        Self::normalized(hi.m + shifted, hi.e)
    }

    pub fn neg(&self) -> Ext {
        Ext { m: -self.m, e: self.e }
    }

    pub fn sub(&self, o: &Ext) -> Ext {
        self.add(&o.neg())
    }

    /// ln |x|, or -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.m.norm().ln() + self.e as f64 * std::f64::consts::LN_2
    }

    /// Value as f64; underflows to zero and overflows to infinity.
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(ldexp(self.m.re, self.e), ldexp(self.m.im, self.e))
    }

    /// Value divided by 2^shift, as f64.
    pub fn to_c64_shifted(&self, shift: i64) -> Complex64 {
        Ext { m: self.m, e: self.e - shift }.to_c64()
    }

    /// Binary exponent, for choosing common scales.
    pub fn exponent(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.e
        }
    }
}

/// Taylor coefficients h_0..h_{len-1} of e^p for a power series p with
/// non-negative frequencies, from m h_m = sum_j j p_j h_{m-j}.
///
/// Every coefficient is computed with relative accuracy, however small.
pub fn analytic_exp(p: &LaurentSeries, len: usize) -> Vec<Ext> {
    assert!(p.min_freq().is_none_or(|k| k >= 0), "analytic_exp needs k >= 0");
    let terms: Vec<(usize, Complex64)> =
        p.coeffs.range(1..).map(|(&j, &c)| (j as usize, c * j as f64)).collect();
    let mut h = Vec::with_capacity(len);
    if len == 0 {
        return h;
    }
    h.push(Ext::from_c64(p.coeff(0).exp()));
    for m in 1..len {
        let mut acc = Ext::ZERO;
        for &(j, jp) in &terms {
            if j > m {
                break;
            }
            acc = acc.add(&h[m - j].scale(jp));
        }
        h.push(acc.scale(Complex64::new(1.0 / m as f64, 0.0)));
    }
    h
}

/// Coefficients of e^g = e^{g_+} e^{g_-} in extended precision, where g_+
/// holds k >= 0 and g_- holds k < 0.
#[derive(Debug, Clone)]
pub struct ExtSymbol {
    plus: Vec<Ext>,
    /// minus[k] is the coefficient of z^{-k}
    minus: Vec<Ext>,
}

impl ExtSymbol {
    /// Both factors are kept to `len` terms; coefficients beyond that are
    /// treated as zero, so `len` must exceed every index requested by a
    /// margin that makes the remainder negligible.
    pub fn exp_of(g: &LaurentSeries, len: usize) -> ExtSymbol {
        let plus = g.restrict(0, i64::MAX);
        let minus = g.restrict(i64::MIN, -1).flip();
        ExtSymbol { plus: analytic_exp(&plus, len), minus: analytic_exp(&minus, len) }
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn plus(&self) -> &[Ext] {
        &self.plus
    }

    pub fn minus(&self) -> &[Ext] {
        &self.minus
    }

    /// (e^g)_m = sum_{k >= max(0, -m)} (e^{g_+})_{m+k} (e^{g_-})_{-k}.
    pub fn coeff(&self, m: i64) -> Ext {
        let len = self.plus.len() as i64;
        let mut acc = Ext::ZERO;
        let mut k = (-m).max(0);
        while k < len && m + k < len {
            acc = acc.add(&self.plus[(m + k) as usize].mul(&self.minus[k as usize]));
            k += 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn arithmetic_round_trips() {
        let a = Ext::from_c64(c(3.0, -4.0));
        assert_eq!(a.to_c64(), c(3.0, -4.0));
        assert!((a.ln_abs() - 5f64.ln()).abs() < 1e-15);
        assert_eq!(a.sub(&a).to_c64(), c(0.0, 0.0));
        let tiny = Ext::from_f64(1e-300).mul(&Ext::from_f64(1e-300));
        assert_eq!(tiny.to_c64(), c(0.0, 0.0));
        assert!((tiny.ln_abs() - (-600.0 * 10f64.ln())).abs() < 1e-12);
        assert!((tiny.to_c64_shifted(-1000).re - 1e-600 * 2f64.powi(500) * 2f64.powi(500)).abs() < 1e-10);
    }

    #[test]
    fn exp_of_z_gives_inverse_factorials() {
        let h = analytic_exp(&LaurentSeries::from_pairs([(1, c(1.0, 0.0))]), 1001);
        let ln_fact: f64 = (1..=1000).map(|i| (i as f64).ln()).sum();
        assert!((h[1000].ln_abs() + ln_fact).abs() < 1e-10);
        assert!((h[5].to_c64().re - 1.0 / 120.0).abs() < 1e-17);
    }

    #[test]
    fn two_sided_coefficient_is_bessel() {
        // e^{z + 1/z} has coefficient I_m(2) at z^m
        let s = ExtSymbol::exp_of(&LaurentSeries::from_pairs([(1, c(1., 0.)), (-1, c(1., 0.))]), 80);
        assert!((s.coeff(0).to_c64().re - 2.279_585_302_336_067).abs() < 1e-15);
        assert!((s.coeff(-1).to_c64().re - 1.590_636_854_637_329).abs() < 1e-15);
    }
}
