use crate::coloring::Coloring;
use crate::error::{Error, Result};

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Red iff `x - y` is a nonzero square mod `q`. Needs `q` prime with
/// `q = 1 (mod 4)`, so that `-1` is a square and the relation is symmetric.
pub fn paley(q: u64) -> Result<Coloring> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    if q % 4 != 1 {
        return Err(Error::InvalidArgument(format!("{q} is not 1 mod 4")));
    }
    if q > 1 << 20 {
        return Err(Error::SizeGuard(format!("q = {q} is too large")));
    }
    let mut square = vec![false; q as usize];
    for x in 1..q {
        square[(x * x % q) as usize] = true;
    }
    Coloring::from_fn(q as usize, |x, y| square[(y - x) % q as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paley_five_is_the_pentagon() {
        let c = paley(5).unwrap();
        let pent = Coloring::from_fn(5, |x, y| matches!(y - x, 1 | 4)).unwrap();
        assert_eq!(c, pent);
    }

    #[test]
    fn regular_and_self_complementary_degrees() {
        for q in [13, 17, 29] {
            let c = paley(q).unwrap();
            let half = (q as usize - 1) / 2;
            assert!(c.red_degrees().iter().all(|&d| d == half));
            assert!(c.complement().red_degrees().iter().all(|&d| d == half));
        }
    }

    #[test]
    fn strongly_regular_parameters() {
        // lambda = (q-5)/4 on red pairs, mu = (q-1)/4 on blue pairs
        let c = paley(17).unwrap();
        for x in 0..17 {
            for y in (x + 1)..17 {
                let want = if c.is_red(x, y) { 3 } else { 4 };
                assert_eq!(c.codegree(x, y).unwrap(), want);
            }
        }
        assert_eq!(c.count_red_cliques(3).unwrap(), 68);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(paley(7).is_err());
        assert!(paley(9).is_err());
        assert!(paley(1).is_err());
    }
}
