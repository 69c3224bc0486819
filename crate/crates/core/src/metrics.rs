//! Counting statistics of a cell assignment and the four grouping objectives.
//!
//! All objectives are exact rationals. Grouping efficiency additionally has an
//! unreduced fraction form, [`Efficiency`], which orders values by integer
//! cross-multiplication and is what the search loops compare.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{CfpError, Result};
use crate::matrix::IncidenceMatrix;

/// Exact rational used for every reported objective value.
pub type Rational = Ratio<i128>;

/// Largest accepted denominator of the efficiency weight.
pub const MAX_WEIGHT_DENOMINATOR: u32 = 10_000;

/// Weight `q` of the intra-cell loading term, an exact rational in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    num: u32,
    den: u32,
}

impl Weight {
    pub const HALF: Weight = Weight { num: 1, den: 2 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(CfpError::InvalidWeight(format!("{num}/{den} has a zero denominator")));
        }
        if num > den {
            return Err(CfpError::InvalidWeight(format!("{num}/{den} is greater than one")));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        if den > MAX_WEIGHT_DENOMINATOR {
            return Err(CfpError::InvalidWeight(format!(
                "{num}/{den}: denominator exceeds {MAX_WEIGHT_DENOMINATOR}"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn numer(&self) -> u32 {
        self.num
    }

    pub fn denom(&self) -> u32 {
        self.den
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.num.into(), self.den.into())
    }
}

impl Default for Weight {
    fn default() -> Self {
        Self::HALF
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parses `a/b`, an integer (`0`, `1`) or a finite decimal such as `0.5`.
impl FromStr for Weight {
    type Err = CfpError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CfpError::InvalidWeight(format!("cannot parse {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Weight::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 4 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u32 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10u32.pow(frac.len() as u32);
        let frac: u32 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Weight::new(num, scale)
    }
}

/// The eight element counts of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Counters {
    pub n_in: usize,
    pub n_out: usize,
    pub n1_in: usize,
    pub n1_out: usize,
    pub n0_in: usize,
    pub n0_out: usize,
    pub n1: usize,
    pub n0: usize,
}

impl Counters {
    /// Derives all counts from the two quantities that depend on the
    /// assignment: elements inside cells and ones inside cells.
    pub fn from_inside(matrix: &IncidenceMatrix, n_in: usize, n1_in: usize) -> Self {
        let n1 = matrix.ones();
        let n0 = matrix.zeros();
        let n0_in = n_in - n1_in;
        Self {
            n_in,
            n_out: matrix.elements() - n_in,
            n1_in,
            n1_out: n1 - n1_in,
            n0_in,
            n0_out: n0 - n0_in,
            n1,
            n0,
        }
    }

    /// True when every counting identity holds.
    pub fn is_consistent(&self) -> bool {
        self.n_in + self.n_out == self.n1 + self.n0
            && self.n1_in + self.n1_out == self.n1
            && self.n0_in + self.n0_out == self.n0
            && self.n_in == self.n1_in + self.n0_in
            && self.n_out == self.n1_out + self.n0_out
    }
}

/// Counts for the assignment given by `machine_cell` and `part_cell`.
pub fn compute_counters(matrix: &IncidenceMatrix, machine_cell: &[usize], part_cell: &[usize]) -> Result<Counters> {
    if machine_cell.len() != matrix.machines() {
        return Err(CfpError::DimensionMismatch {
            what: "machine assignments",
            expected: matrix.machines(),
            got: machine_cell.len(),
        });
    }
    if part_cell.len() != matrix.parts() {
        return Err(CfpError::DimensionMismatch {
            what: "part assignments",
            expected: matrix.parts(),
            got: part_cell.len(),
        });
    }
    let cells = machine_cell.iter().chain(part_cell).max().map_or(0, |&c| c + 1);
    let mut machines_in = vec![0usize; cells];
    let mut parts_in = vec![0usize; cells];
    machine_cell.iter().for_each(|&c| machines_in[c] += 1);
    part_cell.iter().for_each(|&c| parts_in[c] += 1);
    let n_in = machines_in.iter().zip(&parts_in).map(|(a, b)| a * b).sum();

    let mut n1_in = 0;
    for (i, row) in matrix.rows().enumerate() {
        let cell = machine_cell[i];
        n1_in += row
            .iter()
            .zip(part_cell)
            .filter(|&(&a, &c)| a != 0 && c == cell)
            .count();
    }
    Ok(Counters::from_inside(matrix, n_in, n1_in))
}

/// Grouping efficiency as an unreduced fraction `num / den`.
///
/// When nothing lies outside the cells the inter-cell term is taken as one.
#[derive(Debug, Clone, Copy)]
pub struct Efficiency {
    num: u128,
    den: u128,
}

impl Efficiency {
    /// `None` when no element lies inside a cell.
    #[inline]
    pub fn from_counts(n1_in: usize, n_in: usize, n0_out: usize, n_out: usize, q: Weight) -> Option<Self> {
        if n_in == 0 {
            return None;
        }
        let (n0_out, n_out) = if n_out == 0 { (1, 1) } else { (n0_out, n_out) };
        let (a, b) = (q.num as u128, q.den as u128);
        let (n1_in, n_in, n0_out, n_out) = (n1_in as u128, n_in as u128, n0_out as u128, n_out as u128);
        Some(Self {
            num: a * n1_in * n_out + (b - a) * n0_out * n_in,
            den: b * n_in * n_out,
        })
    }

    pub fn of(c: &Counters, q: Weight) -> Option<Self> {
        Self::from_counts(c.n1_in, c.n_in, c.n0_out, c.n_out, q)
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.num as i128, self.den as i128)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Efficiency {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Efficiency {}

impl PartialOrd for Efficiency {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Efficiency {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Grouping efficiency `q * n1_in / n_in + (1 - q) * n0_out / n_out`.
pub fn grouping_efficiency(c: &Counters, q: Weight) -> Result<Rational> {
    Efficiency::of(c, q)
        .map(Efficiency::to_rational)
        .ok_or(CfpError::ZeroDenominator("grouping efficiency"))
}

/// Grouping efficacy `n1_in / (n1 + n0_in)`.
pub fn grouping_efficacy(c: &Counters) -> Result<Rational> {
    let den = c.n1 + c.n0_in;
    if den == 0 {
        return Err(CfpError::ZeroDenominator("grouping efficacy"));
    }
    Ok(Rational::new(c.n1_in as i128, den as i128))
}

/// Group capability index `1 - n1_out / n1`.
pub fn group_capability_index(c: &Counters) -> Result<Rational> {
    if c.n1 == 0 {
        return Err(CfpError::ZeroDenominator("group capability index"));
    }
    Ok(Rational::new((c.n1 - c.n1_out) as i128, c.n1 as i128))
}

/// Exceptions plus voids, `n1_out + n0_in`.
pub fn exceptions_plus_voids(c: &Counters) -> usize {
    c.n1_out + c.n0_in
}

/// Exact comparison of the grouping efficiency of two count sets.
///
/// # Panics
///
/// If either set has no element inside a cell.
pub fn compare_efficiency(a: &Counters, b: &Counters, q: Weight) -> Ordering {
    let ea = Efficiency::of(a, q).expect("n_in must be positive");
    let eb = Efficiency::of(b, q).expect("n_in must be positive");
    ea.cmp(&eb)
}

/// Rational as a percentage rounded half away from zero to two decimals.
pub fn percent(r: &Rational) -> f64 {
    let scaled = r * Rational::from_integer(10_000);
    let rounded = scaled.round();
    *rounded.numer() as f64 / 100.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(n1_in: usize, n_in: usize, n0_out: usize, n_out: usize, n1: usize) -> Counters {
        let n0_in = n_in - n1_in;
        Counters {
            n_in,
            n_out,
            n1_in,
            n1_out: n1 - n1_in,
            n0_in,
            n0_out,
            n1,
            n0: n0_in + n0_out,
        }
    }

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn efficiency_of_worked_examples() {
        let t2 = counts(16, 19, 12, 16, 20);
        assert!(t2.is_consistent());
        assert_eq!(grouping_efficiency(&t2, Weight::HALF).unwrap(), r(121, 152));
        // 79.605...%, printed elsewhere truncated as 79.60.
        assert_eq!(percent(&r(121, 152)), 79.61);

        let before = counts(20, 33, 48, 63, 35);
        let eta = grouping_efficiency(&before, Weight::HALF).unwrap();
        assert_eq!(eta, r(1, 2) * r(20, 33) + r(1, 2) * r(48, 63));
        assert_eq!(percent(&eta), 68.40);
    }

    #[test]
    fn perfect_loading_with_full_weight_is_one() {
        let c = counts(6, 6, 10, 10, 6);
        assert_eq!(grouping_efficiency(&c, Weight::new(1, 1).unwrap()).unwrap(), r(1, 1));
        assert_eq!(grouping_efficacy(&c).unwrap(), r(1, 1));
        assert_eq!(group_capability_index(&c).unwrap(), r(1, 1));
        assert_eq!(exceptions_plus_voids(&c), 0);
    }

    #[test]
    fn empty_outside_takes_unit_inter_cell_term() {
        let c = counts(4, 4, 0, 0, 4);
        assert_eq!(grouping_efficiency(&c, Weight::HALF).unwrap(), r(1, 1));
        let c = counts(2, 4, 0, 0, 2);
        assert_eq!(grouping_efficiency(&c, Weight::HALF).unwrap(), r(3, 4));
    }

    #[test]
    fn zero_denominators_are_rejected() {
        let c = Counters::default();
        assert!(grouping_efficiency(&c, Weight::HALF).is_err());
        assert!(grouping_efficacy(&c).is_err());
        assert!(group_capability_index(&c).is_err());
    }

    #[test]
    fn compare_examples() {
        let before = counts(20, 33, 48, 63, 35);
        let after = counts(23, 33, 51, 63, 35);
        assert_eq!(compare_efficiency(&before, &after, Weight::HALF), Ordering::Less);
        assert_eq!(compare_efficiency(&before, &before, Weight::HALF), Ordering::Equal);
        let a = counts(5, 10, 20, 30, 12);
        let b = counts(6, 10, 21, 30, 12);
        assert_eq!(compare_efficiency(&b, &a, Weight::HALF), Ordering::Greater);
    }

    #[test]
    fn weight_parsing() {
        assert_eq!("1/2".parse::<Weight>().unwrap(), Weight::HALF);
        assert_eq!("0.5".parse::<Weight>().unwrap(), Weight::HALF);
        assert_eq!("2/4".parse::<Weight>().unwrap(), Weight::HALF);
        assert_eq!("1".parse::<Weight>().unwrap(), Weight::new(1, 1).unwrap());
        assert_eq!("0.25".parse::<Weight>().unwrap(), Weight::new(1, 4).unwrap());
        assert!("3/2".parse::<Weight>().is_err());
        assert!("1/0".parse::<Weight>().is_err());
        assert!("abc".parse::<Weight>().is_err());
        assert!("1/20011".parse::<Weight>().is_err());
    }

    proptest! {
        #[test]
        fn efficiency_order_matches_rational_order(
            n_in_a in 1usize..500, n_in_b in 1usize..500,
            fa in 0.0f64..=1.0, fb in 0.0f64..=1.0,
            ga in 0.0f64..=1.0, gb in 0.0f64..=1.0,
            qn in 0u32..=20, qd in 20u32..=20,
        ) {
            let total = 1000usize;
            let q = Weight::new(qn, qd).unwrap();
            let make = |n_in: usize, f: f64, g: f64| {
                let n1_in = (n_in as f64 * f) as usize;
                let n_out = total - n_in;
                let n0_out = (n_out as f64 * g) as usize;
                counts(n1_in, n_in, n0_out, n_out, n1_in + (n_out - n0_out))
            };
            let a = make(n_in_a, fa, ga);
            let b = make(n_in_b, fb, gb);
            let ra = grouping_efficiency(&a, q).unwrap();
            let rb = grouping_efficiency(&b, q).unwrap();
            let qr = q.to_rational();
            let direct = |c: &Counters| qr * r(c.n1_in as i128, c.n_in as i128)
                + (r(1, 1) - qr) * r(c.n0_out as i128, c.n_out as i128);
            prop_assert_eq!(ra, direct(&a));
            prop_assert_eq!(compare_efficiency(&a, &b, q), ra.cmp(&rb));
            prop_assert!(ra >= r(0, 1) && ra <= r(1, 1));
        }
    }
}
