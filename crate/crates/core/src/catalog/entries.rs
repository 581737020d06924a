use super::{BoundSpec, ClaimedRange, Expr, Side, Target, Var};

/// pi(10^19), the number of primes below 10^19.
pub const PI_1E19: u64 = 234_057_667_276_344_607;

fn c(s: &'static str) -> Expr {
    Expr::num(s)
}

fn lp() -> Expr {
    Expr::var(Var::LogP)
}

fn ln() -> Expr {
    Expr::var(Var::LogN)
}

fn lln() -> Expr {
    Expr::var(Var::LogLogN)
}

fn p() -> Expr {
    Expr::var(Var::P)
}

fn n() -> Expr {
    Expr::var(Var::N)
}

fn e() -> Expr {
    Expr::Euler
}

fn from(start: u64) -> ClaimedRange {
    ClaimedRange { start, end: None }
}

fn between(start: u64, end: u64) -> ClaimedRange {
    ClaimedRange { start, end: Some(end) }
}

struct Entry {
    id: &'static str,
    target: Target,
    side: Side,
    rhs: Expr,
    claimed: ClaimedRange,
}

impl Entry {
    fn new(id: &'static str, target: Target, side: Side, rhs: Expr, claimed: ClaimedRange) -> Self {
        Self {
            id,
            target,
            side,
            rhs,
            claimed,
        }
    }

    fn spec(self) -> BoundSpec {
        BoundSpec {
            id: self.id,
            target: self.target,
            side: self.side,
            strict: true,
            rhs: self.rhs,
            claimed: self.claimed,
            exploratory: false,
            note: None,
        }
    }
}

trait SpecExt {
    fn non_strict(self) -> Self;
    fn exploratory(self) -> Self;
    fn note(self, note: &'static str) -> Self;
}

impl SpecExt for BoundSpec {
    fn non_strict(mut self) -> Self {
        self.strict = false;
        self
    }

    fn exploratory(mut self) -> Self {
        self.exploratory = true;
        self
    }

    fn note(mut self, note: &'static str) -> Self {
        self.note = Some(note);
        self
    }
}

/// `1 + 1/log p_n + a/log^2 p_n`
fn d_two(a: &'static str) -> Expr {
    c("1") + c("1") / lp() + c(a) / lp().pow(2)
}

/// `1 + 1/log p_n + 3/log^2 p_n ± a/log^3 p_n`
fn d_three(a: &'static str, negative: bool) -> Expr {
    let head = c("1") + c("1") / lp() + c("3") / lp().pow(2);
    let tail = c(a) / lp().pow(3);
    if negative {
        head - tail
    } else {
        head + tail
    }
}

/// `1 + 1/log p_n + 3/log^2 p_n + 13/log^3 p_n - 1160159/log^4 p_n`
fn d_four() -> Expr {
    c("1") + c("1") / lp() + c("3") / lp().pow(2) + c("13") / lp().pow(3) - c("1160159") / lp().pow(4)
}

/// `1 + 1/log n - (log log n - a)/log^2 n`
fn d_n_basis(a: &'static str) -> Expr {
    c("1") + c("1") / ln() - (lln() - c(a)) / ln().pow(2)
}

/// `e/2 + e/(4 log n) - e(log log n - a)/(4 log^2 n)`
fn ratio_n_basis(a: &'static str) -> Expr {
    e() / c("2") + e() / (c("4") * ln()) - e() * (lln() - c(a)) / (c("4") * ln().pow(2))
}

/// `e/2 + e/(4 log p_n) + a·e/log^2 p_n`
fn ratio_p_basis(a: &'static str) -> Expr {
    e() / c("2") + e() / (c("4") * lp()) + c(a) * e() / lp().pow(2)
}

/// `-n/4 - n/(4 log n) + n(log log n - a)/(4 log^2 n)`
fn envelope(a: &'static str) -> Expr {
    -(n() / c("4")) - n() / (c("4") * ln()) + n() * (lln() - c(a)) / (c("4") * ln().pow(2))
}

// Bounds of the form `G_n < p_n/exp(X)` are stored as `log G_n < log p_n - X`.
// The two are equivalent, and the log form stays finite where `exp(X)` over-
// or underflows (e.g. `X` below -5·10^6 at n = 1 for the 1160159 variant).

pub(super) fn all() -> Vec<BoundSpec> {
    use Side::{Lower, Upper};
    use Target::*;

    vec![
        // D(n), lower bounds.
        Entry::new("ineq-3.1", D, Lower, d_two("2.7"), from(218)).spec(),
        Entry::new("ineq-3.5", D, Lower, d_three("187", true), from(1)).spec(),
        Entry::new("ineq-3.6", D, Lower, d_four(), from(1)).spec(),
        Entry::new("ineq-3.7", D, Lower, d_two("3"), between(264, PI_1E19)).spec(),
        Entry::new("ineq-3.13", D, Lower, d_n_basis("2.5"), from(591)).spec(),
        Entry::new("D>1", D, Lower, c("1"), from(10)).spec(),
        // D(n), upper bounds.
        Entry::new("ineq-3.9", D, Upper, d_two("3.84"), from(74_004_585)).spec(),
        Entry::new("ineq-3.10", D, Upper, d_three("213", false), from(1)).spec(),
        Entry::new("prop-3.8", D, Upper, d_n_basis("4.2"), from(2)).spec(),
        // G_n, upper bounds.
        Entry::new("prop-4.1a", LogG, Upper, lp() - d_two("2.7"), from(218)).spec(),
        Entry::new("prop-4.1b", LogG, Upper, lp() - d_three("187", true), from(1)).spec(),
        Entry::new("prop-4.1c", LogG, Upper, lp() - d_four(), from(1)).spec(),
        Entry::new("prop-4.2", LogG, Upper, lp() - d_two("3"), between(264, PI_1E19)).spec(),
        Entry::new("prop-4.3", G, Upper, p() / e() * (c("1") - c("1") / lp()), from(47)).spec(),
        Entry::new(
            "cor-4.4",
            G,
            Upper,
            p() / e() - n() / e() * (c("1") - c("1") / lp() - c("1") / lp().pow(2) - c("3.69") / lp().pow(3)),
            from(31),
        )
        .spec(),
        Entry::new("panaitopol", G, Upper, p() / e(), from(10)).spec(),
        // G_n, lower bounds.
        Entry::new("ineq-4.2", LogG, Lower, lp() - d_two("3.84"), from(74_004_585)).spec(),
        Entry::new("prop-4.5b", LogG, Lower, lp() - d_three("213", false), from(1)).spec(),
        Entry::new(
            "prop-4.6",
            G,
            Lower,
            p() / e() * (c("1") - c("1") / lp() - c("4.74") / lp().pow(2)),
            from(1),
        )
        .spec()
        .note("checked by computer only up to n = 64881103; proved from n = 883051281"),
        Entry::new(
            "cor-4.7",
            G,
            Lower,
            p() / e() - n() / e() * (c("1") + c("3.74") / lp() - c("5.74") / lp().pow(2) - c("7.59") / lp().pow(3)),
            from(3),
        )
        .spec(),
        Entry::new("hassani-g", G, Lower, p() / e() - c("2.37") * n(), from(1)).spec(),
        // log(1 + 2R(n)/p_n).
        Entry::new("ineq-5.1l", LogRTerm, Lower, -(c("15") / (c("2") * ln())), from(2)).spec(),
        Entry::new("ineq-5.1u", LogRTerm, Upper, -(c("5") / (c("36") * ln())), from(10)).spec(),
        Entry::new(
            "ineq-5.2",
            LogRTerm,
            Lower,
            -(c("1") / (c("2") * ln())) + (lln() - c("2.25")) / (c("2") * ln().pow(2))
                - (lln().pow(2) - c("4.5") * lln() + c("22.51/3")) / (c("2") * ln().pow(3)),
            from(26_220),
        )
        .spec(),
        Entry::new(
            "prop-5.2",
            LogRTerm,
            Upper,
            -(c("1") / (c("2") * lp())) - c("1") / lp().pow(2) - c("2.9") / (c("2") * ln().pow(2) * lp()),
            from(6_077),
        )
        .spec(),
        Entry::new(
            "cor-5.3",
            LogRTerm,
            Upper,
            -(c("1") / (c("2") * ln()))
                + (lln() - c("2")) / (c("2") * ln().pow(2))
                + (c("4") * lln() - c("2.9")) / ln().pow(3)
                + c("2.9") * lln() / (c("2") * ln().pow(4)),
            from(92),
        )
        .spec(),
        // A_n/G_n.
        Entry::new("thm-6.1", Ratio, Lower, ratio_n_basis("2.8"), from(139)).spec(),
        Entry::new("cor-6.2", Ratio, Lower, ratio_p_basis("0.61"), from(62)).spec(),
        Entry::new("cor-6.3", Ratio, Lower, e() / c("2"), from(1))
            .spec()
            .note("claimed for every n; fails for small n"),
        Entry::new("thm-6.4", Ratio, Upper, ratio_p_basis("1.52"), from(294_635)).spec(),
        Entry::new("cor-6.5", Ratio, Upper, ratio_n_basis("6.44"), from(2)).spec(),
        // Auxiliary bounds used in the proofs.
        Entry::new("rosser-3.4", Prime, Upper, n() * lp(), from(7))
            .spec()
            .non_strict(),
        Entry::new("dusart-5.3", Prime, Lower, n() * (ln() + lln() - c("1")), from(2))
            .spec()
            .non_strict(),
        Entry::new("env-5.4l", R, Lower, envelope("4.42"), from(256_376)).spec(),
        Entry::new("env-5.4u", R, Upper, c("0"), from(256_376)).spec(),
        Entry::new("env-s2", R, Upper, envelope("2.9"), from(78_150_372)).spec(),
        // Conjectures.
        Entry::new("conj-3.4", D, Lower, d_two("3"), from(264))
            .spec()
            .exploratory(),
        Entry::new(
            "conj-monotone",
            LogRatio,
            Upper,
            Expr::var(Var::PrevLogRatio),
            from(227),
        )
        .spec()
        .exploratory()
        .note("A_n/G_n < A_{n-1}/G_{n-1}; a violation at n means the ratio did not decrease from n-1 to n"),
    ]
}
