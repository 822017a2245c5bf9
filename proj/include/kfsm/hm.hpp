#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "kfsm/errors.hpp"
#include "kfsm/rational.hpp"
#include "kfsm/word.hpp"

namespace kfsm {

/// Parameters of the HM address system: k, a rotation number omega in (0,1),
/// and nu with nu_i >= 0 and sum nu_i = k(1-omega) (an allowable pair).
/// irrational_mode marks omega as a rational proxy for an irrational number:
/// outputs derived from the orbit are finite certificates at a stated horizon.
struct HMParams {
    long k = 1;
    Rational omega;
    std::vector<Rational> nu;
    bool irrational_mode = false;
};

inline HMParams make_hm_params(long k, const Rational& omega, std::vector<Rational> nu,
                               bool irrational_mode = false) {
    if (k < 1) throw NotAllowable("k must be positive");
    if (!(Rational(0) < omega && omega < Rational(1))) throw NotAllowable("omega must be in (0,1)");
    if ((long)nu.size() != k) throw NotAllowable("nu must have k components");
    Rational total(0);
    for (const Rational& v : nu) {
        if (v.sign() < 0) throw NotAllowable("nu_i must be nonnegative");
        total += v;
    }
    if (total != Rational(k) * (Rational(1) - omega))
        throw NotAllowable("sum nu_i must equal k(1-omega), got " + total.str());
    return HMParams{k, omega, std::move(nu), irrational_mode};
}

/// The 2k open address intervals X_0..X_{2k-1} tiling S_k:
/// X_{2j} has width nu_{j+1}, X_{2j+1} has width omega, and consecutive
/// intervals share endpoints. left[j] is the left endpoint of X_j in [0,k).
struct AddressSystem {
    long k = 1;
    std::vector<Rational> left;  // size 2k, nondecreasing, left[0] = 0

    Rational right(size_t j) const { return j + 1 < left.size() ? left[j + 1] : Rational(k); }

    /// Address of x when x lies in the interior of some X_j; nullopt when x is
    /// a boundary point. Expects 0 <= x < k.
    std::optional<int> interior_address(const Rational& x) const {
        for (size_t j = 0; j < left.size(); ++j) {
            if (x == left[j]) return std::nullopt;
            if (x < right(j)) return x > left[j] ? std::optional<int>((int)j) : std::nullopt;
        }
        return std::nullopt;  // x == k would be boundary, but x < k is assumed
    }
};

inline AddressSystem address_system(const HMParams& p) {
    AddressSystem a;
    a.k = p.k;
    a.left.resize(2 * (size_t)p.k);
    Rational s(0);  // partial sum of nu
    for (long j = 0; j < p.k; ++j) {
        a.left[2 * (size_t)j] = s + Rational(j) * p.omega;
        s += p.nu[(size_t)j];
        a.left[2 * (size_t)j + 1] = s + Rational(j) * p.omega;
    }
    return a;
}

/// First n address symbols of the orbit of x under R_omega.
/// Throws GoodSetViolation(i) when R^i(x) is an address boundary.
inline std::vector<int> hm_itinerary_symbols(const CirclePoint& x0, const HMParams& p, long n) {
    if (x0.modulus != p.k) throw std::invalid_argument("hm_itinerary: point not on S_k");
    AddressSystem a = address_system(p);
    std::vector<int> out;
    out.reserve((size_t)n);
    CirclePoint x = x0;
    for (long i = 0; i < n; ++i) {
        auto addr = a.interior_address(x.value);
        if (!addr) throw GoodSetViolation(i);
        out.push_back(*addr);
        x = circle_add(x, p.omega);
    }
    return out;
}

inline Word hm_itinerary(const CirclePoint& x0, const HMParams& p, long n) {
    return Word::finite(hm_itinerary_symbols(x0, p, n), (int)(2 * p.k));
}

/// Finite-prefix approximation to a point of B_k(alpha, nu): the itinerary of
/// x to horizon n, for irrational-mode parameters.
inline Word b_k_prefix(const HMParams& p, const CirclePoint& x, long n) {
    return hm_itinerary(x, p, n);
}

/// B_k(p/q, nu) for rational rotation number: a cluster of periodic orbits
/// with exact rational weights summing to 1.
struct OrbitCluster {
    long k = 1, p = 0, q = 1;
    std::vector<Rational> nu;
    std::vector<Word> orbits;      // canonical, sorted
    std::vector<Rational> weights; // parallel to orbits, each > 0
    Rational rotation;
    long period = 0;
};

namespace detail {

/// Positions on the fundamental circle Sigma = J/~ (J = [k - d/q, k),
/// circumference d/q) of the pullbacks d_{2j+1} of the odd boundaries:
/// t_j = d_{2j+1} - (k - d/q) in [0, d/q).
inline std::vector<Rational> odd_boundary_cuts(long k, long p, long q, const AddressSystem& a,
                                               const Rational& omega) {
    long d = std::gcd(p, k);
    long n = q * k / d;
    Rational len(d, q);
    Rational j_lo = Rational(k) - len;
    std::vector<Rational> cuts;
    for (long j = 0; j < k; ++j) {
        Rational ell = a.left[(size_t)(2 * j + 1)];
        bool found = false;
        for (long m = 0; m < n; ++m) {
            Rational pulled = reduce_mod(ell - Rational(m) * omega, k);
            if (j_lo <= pulled && pulled < Rational(k)) {
                cuts.push_back(pulled - j_lo);
                found = true;
                break;
            }
        }
        if (!found) throw InternalError("odd boundary not covered by the fundamental domain");
    }
    return cuts;
}

} // namespace detail

/// The rational structure algorithm: pull the odd address boundaries back into
/// the fundamental domain J, cut the circle Sigma = J/~ at the resulting
/// points, and emit one period-N itinerary per component, weighted by
/// N |K| / k.
inline OrbitCluster b_k_rational(long k, long p, long q, std::vector<Rational> nu) {
    if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw NotAllowable("need gcd(p,q)=1 and 0<p/q<1");
    Rational omega(p, q);
    HMParams params = make_hm_params(k, omega, std::move(nu));
    AddressSystem a = address_system(params);

    long d = std::gcd(p, k);
    long n = q * k / d;
    Rational len(d, q);
    Rational j_lo = Rational(k) - len;

    std::vector<Rational> cuts = detail::odd_boundary_cuts(k, p, q, a, omega);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    OrbitCluster cl;
    cl.k = k;
    cl.p = p;
    cl.q = q;
    cl.nu = params.nu;
    cl.rotation = omega;
    cl.period = n;

    std::vector<std::pair<Word, Rational>> rows;
    size_t m = cuts.size();
    for (size_t i = 0; i < m; ++i) {
        // arc from cuts[i] to the next cut, cyclically on circumference d/q
        Rational lo = cuts[i];
        Rational hi = (i + 1 < m) ? cuts[i + 1] : cuts[0] + len;
        Rational width = hi - lo;
        if (width.sign() == 0) continue;
        Rational mid = lo + width / Rational(2);
        if (mid >= len) mid -= len;
        CirclePoint x{j_lo + mid, k};
        std::vector<int> symbols;
        try {
            symbols = hm_itinerary_symbols(x, params, n);
        } catch (const GoodSetViolation& e) {
            // impossible for interior component points; treat as an assertion
            throw InternalError("component midpoint left the good set at step " +
                                std::to_string(e.step));
        }
        Word w = Word::periodic(std::move(symbols), (int)(2 * k)).canonical_orbit();
        if ((long)w.per.size() != n)
            throw InternalError("cluster member period " + std::to_string(w.per.size()) +
                                " differs from qk/gcd(p,k) = " + std::to_string(n));
        rows.emplace_back(std::move(w), Rational(n) * width / Rational(k));
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a_, const auto& b_) { return a_.first.per < b_.first.per; });
    Rational total(0);
    for (auto& [w, wt] : rows) {
        cl.orbits.push_back(std::move(w));
        cl.weights.push_back(wt);
        total += wt;
    }
    if (total != Rational(1)) throw InternalError("cluster weights do not sum to 1");
    if ((long)cl.orbits.size() < 1 || (long)cl.orbits.size() > k)
        throw InternalError("cluster size out of range [1,k]");
    return cl;
}

/// C_k: symbolwise mod-2 projection with orbit deduplication.
inline WordSet c_k(const WordSet& z) {
    std::vector<Word> proj;
    for (const Word& w : z.members) proj.push_back(project_base(w));
    return WordSet::of(std::move(proj), 2);
}

inline WordSet c_k(const OrbitCluster& cl) {
    WordSet z;
    z.alphabet = (int)(2 * cl.k);
    z.members = cl.orbits;
    return c_k(z);
}

namespace detail {

/// Intersection of finite unions of open subintervals of [0,k), as sorted
/// disjoint (lo, hi) pairs; degenerate pieces are dropped.
using IntervalList = std::vector<std::pair<Rational, Rational>>;

inline IntervalList intersect(const IntervalList& a, const IntervalList& b) {
    IntervalList out;
    for (const auto& [alo, ahi] : a)
        for (const auto& [blo, bhi] : b) {
            Rational lo = std::max(alo, blo), hi = std::min(ahi, bhi);
            if (lo < hi) out.emplace_back(lo, hi);
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// The arc (lo, hi) mod k as an interval list (split if it wraps).
inline IntervalList arc_mod_k(const Rational& lo, const Rational& hi, long k) {
    Rational l = reduce_mod(lo, k), width = hi - lo;
    Rational h = l + width;
    if (h <= Rational(k)) return {{l, h}};
    return {{l, Rational(k)}, {Rational(0), h - Rational(k)}};
}

} // namespace detail

/// lambda_k(omega, nu)([B]) = Lebesgue(Y_B)/k with
/// Y_B = intersection of R^{-i}(Int X_{b_i}).
inline Rational lambda_cylinder(const HMParams& p, const std::vector<int>& block) {
    AddressSystem a = address_system(p);
    detail::IntervalList y = {{Rational(0), Rational(p.k)}};
    for (size_t i = 0; i < block.size(); ++i) {
        int b = block[i];
        if (b < 0 || b >= 2 * p.k) throw std::invalid_argument("lambda_cylinder: symbol out of range");
        Rational lo = a.left[(size_t)b], hi = a.right((size_t)b);
        if (!(lo < hi)) return Rational(0);  // empty address interval
        Rational sh = Rational((long)i) * p.omega;
        y = detail::intersect(y, detail::arc_mod_k(lo - sh, hi - sh, p.k));
        if (y.empty()) return Rational(0);
    }
    Rational total(0);
    for (const auto& [lo, hi] : y) total += hi - lo;
    return total / Rational(p.k);
}

/// gamma(lambda_k(omega, nu)) = (omega + nu_1, ..., omega + nu_k)/k.
inline std::vector<Rational> skewness(const HMParams& p) {
    std::vector<Rational> g;
    g.reserve((size_t)p.k);
    for (long j = 0; j < p.k; ++j) g.push_back((p.omega + p.nu[(size_t)j]) / Rational(p.k));
    return g;
}

struct ResonanceResult {
    bool resonant = false;
    bool exact = true;  // false: searched up to a horizon only
    long n = 0;         // witness iterate (resonant only)
    long j = -1, j2 = -1;
};

/// Resonance test R_omega^n(ell_j) = ell_{j'} for some n > 1.
/// Rational omega: always resonant (witness from the period of R on S_k).
/// Irrational mode: the proxy data is read in the displacement chart
/// nu_i = (1-omega) + d_i with rational d_i (allowability makes nu itself
/// omega-dependent, so the d_i are the free rational parameters). There the
/// even boundaries are constant in omega and the odd ones carry coefficient
/// -1, so R^n(ell_j) = ell_{j'} forces n*omega or (n+-1)*omega rational;
/// with n > 1 the only surviving coincidence is a genuinely empty address
/// interval (nu_i = 0), which is resonant with witness n = 2 via the
/// structural identity. Everything else is exactly nonresonant; the horizon
/// parameter is kept for interface compatibility and never limits the answer.
inline ResonanceResult is_resonant(const HMParams& p, long horizon = 0) {
    (void)horizon;
    if (!p.irrational_mode) {
        // period of R_{a/b} on S_k is kb/gcd(a,k)
        Int a = p.omega.num(), b = p.omega.den();
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), Int(p.k).get_mpz_t());
        Int n = Int(p.k) * b / g;
        return {true, true, n.get_si(), 0, 0};
    }
    for (long i = 0; i < p.k; ++i)
        if (p.nu[(size_t)i].sign() == 0) {
            // nu_{i+1} = 0 collapses ell_{2i} = ell_{2i+1}, so R^2(ell_{2i-1}) = ell_{2i+2}
            long src = ((2 * i - 1) % (2 * p.k) + 2 * p.k) % (2 * p.k);
            long dst = (2 * i + 2) % (2 * p.k);
            return {true, true, 2, src, dst};
        }
    return {false, true, 0, -1, -1};
}

/// Sub-resonance for rational omega: two distinct odd boundaries on one
/// R_{p/q}-orbit (equivalently, coinciding pullbacks d_{2j-1} in the
/// fundamental domain). Controls the cluster size: no sub-resonance gives k
/// orbits, all boundaries on the orbit of 0 gives one.
inline bool is_subresonant(long k, long p, long q, const std::vector<Rational>& nu) {
    HMParams params = make_hm_params(k, Rational(p, q), nu);
    AddressSystem a = address_system(params);
    std::vector<Rational> cuts = detail::odd_boundary_cuts(k, p, q, a, params.omega);
    std::sort(cuts.begin(), cuts.end());
    return std::adjacent_find(cuts.begin(), cuts.end()) != cuts.end();
}

/// All allowable nu whose odd boundaries all lie on the orbit of 0 under
/// R_{p/q}; each yields a single-orbit cluster. The partial sums of such nu
/// run over the multiples of gcd(p,k)/q in [0, k(1-p/q)].
inline std::vector<std::vector<Rational>> pure_lattice(long k, long p, long q) {
    if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw std::invalid_argument("pure_lattice: need gcd(p,q)=1 and 0<p/q<1");
    long d = std::gcd(p, k);
    long m = k * (q - p) / d;  // lattice points per axis: partial sums in {0..m} * d/q
    std::vector<std::vector<Rational>> out;
    std::vector<long> s((size_t)k - 1, 0);
    auto emit = [&]() {
        std::vector<Rational> nu;
        long prev = 0;
        for (long i = 0; i < k; ++i) {
            long cur = (i + 1 < k) ? s[(size_t)i] : m;
            nu.push_back(Rational((cur - prev) * d, q));
            prev = cur;
        }
        out.push_back(std::move(nu));
    };
    if (k == 1) {
        emit();
        return out;
    }
    // nondecreasing tuples 0 <= s_1 <= ... <= s_{k-1} <= m
    while (true) {
        emit();
        long i = k - 2;
        while (i >= 0 && s[(size_t)i] == m) --i;
        if (i < 0) break;
        ++s[(size_t)i];
        for (long t = i + 1; t < k - 1; ++t) s[(size_t)t] = s[(size_t)i];
    }
    return out;
}

namespace detail {

inline Int binom(long n, long r) {
    if (r < 0 || n < 0 || r > n) return Int(0);
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), (unsigned long)n, (unsigned long)r);
    return b;
}

inline long euler_phi(long n) {
    long result = n;
    for (long f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            while (n % f == 0) n /= f;
            result -= result / f;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

} // namespace detail

/// (count_in_cover, count_in_base): the number of pure nu (distinct single
/// kfsm periodic orbits in Omega_k) and the number of their tau-equivalence
/// classes (distinct C_k images). Computed combinatorially: pure nu are the
/// lattice compositions counted by stars-and-bars, tau classes by necklace
/// counting (Burnside over the cyclic group).
inline std::pair<Int, Int> count_kfsm_periodic(long k, long p, long q) {
    if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw std::invalid_argument("count_kfsm_periodic: need gcd(p,q)=1 and 0<p/q<1");
    long d = std::gcd(p, k);
    long m = k * (q - p) / d;
    Int cover = detail::binom(m + k - 1, k - 1);
    Int acc(0);
    for (long j = 1; j <= k; ++j) {
        if (k % j != 0) continue;
        // nu fixed by tau^j: j free parts summing to j(q-p)/d lattice units
        if ((j * (q - p)) % d != 0) continue;
        long s = j * (q - p) / d;
        acc += Int(detail::euler_phi(k / j)) * detail::binom(s + j - 1, j - 1);
    }
    Int base = acc / k;
    return {cover, base};
}

/// Discrete HM construction on Z_{2q} (elements 1..2q) acted on by n -> n+p,
/// with addresses X0' = [1,mu], X1' = [mu+1, mu+p], X2' = [mu+p+1, 2q-p],
/// X3' = [2q-p+1, 2q]; returns the itinerary of the point 1.
inline Word discrete_hm(long p, long q, long mu) {
    if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw std::invalid_argument("discrete_hm: need gcd(p,q)=1 and 0<p/q<1");
    if (mu < 0 || mu > 2 * (q - p))
        throw InvalidMu("mu must be in [0, 2(q-p)], got " + std::to_string(mu));
    long period = (p % 2 == 1) ? 2 * q : q;
    std::vector<int> symbols;
    symbols.reserve((size_t)period);
    long n = 1;
    for (long i = 0; i < period; ++i) {
        int s;
        if (n <= mu) s = 0;
        else if (n <= mu + p) s = 1;
        else if (n <= 2 * q - p) s = 2;
        else s = 3;
        symbols.push_back(s);
        n = (n - 1 + p) % (2 * q) + 1;
    }
    if (n != 1) throw InternalError("discrete_hm: orbit did not close");
    Word w = Word::periodic(std::move(symbols), 4).canonical_orbit();
    if ((long)w.per.size() != period) throw InternalError("discrete_hm: word period is not 2q/gcd(p,2)");
    return w;
}

/// Least j with tau^j(nu) = nu (always divides k).
inline long tau_period(const std::vector<Rational>& nu) {
    long k = (long)nu.size();
    for (long j = 1; j <= k; ++j) {
        if (k % j != 0) continue;
        bool fixed = true;
        for (long i = 0; i < k && fixed; ++i)
            if (nu[(size_t)i] != nu[(size_t)((i + j) % k)]) fixed = false;
        if (fixed) return j;
    }
    return k;
}

/// (period in the cover, period in the base):
/// qk/gcd(p,k) and jq/gcd(j,p) with j the tau-period of nu. For clusters the
/// base value is the maximal (= lcm) period among the projected members.
inline std::pair<long, long> cluster_periods(long k, long p, long q, const std::vector<Rational>& nu) {
    make_hm_params(k, Rational(p, q), nu);  // validates allowability
    long cover = q * k / std::gcd(p, k);
    long j = tau_period(nu);
    long base = j * q / std::gcd(j, p);
    return {cover, base};
}

/// The Sturmian minimal set C_1(p/q) = B_1(p/q, 1-p/q), as its single
/// canonical periodic word.
inline Word sturmian_word(long p, long q) {
    OrbitCluster cl = b_k_rational(1, p, q, {Rational(1) - Rational(p, q)});
    if (cl.orbits.size() != 1) throw InternalError("Sturmian cluster must be a single orbit");
    return cl.orbits[0];
}

/// Finite Sturmian prefix for irrational-mode omega (a rational proxy whose
/// denominator should well exceed the horizon n). The base point is chosen
/// from a small candidate list validated against the good set.
inline Word sturmian_prefix(const Rational& omega, long n) {
    HMParams params = make_hm_params(1, omega, {Rational(1) - omega}, true);
    for (long attempt = 1; attempt <= 64; ++attempt) {
        Rational x = (Rational(1) - omega) * Rational(attempt, 2 * attempt + 1);
        try {
            return hm_itinerary(CirclePoint{x, 1}, params, n);
        } catch (const GoodSetViolation&) {
            continue;
        }
    }
    throw GoodSetViolation(0);
}

/// Continued fraction [a0; a1, a2, ...] with convergents via the standard
/// recurrence; used to realize irrational rotation numbers at desk scale.
struct ContinuedFraction {
    std::vector<long> terms;  // a0 >= 0, a_i >= 1 for i > 0

    Rational convergent(size_t upto) const {
        if (terms.empty() || upto >= terms.size())
            throw std::invalid_argument("ContinuedFraction::convergent: index out of range");
        Int h0(1), h1(terms[0]), k0(0), k1(1);
        for (size_t i = 1; i <= upto; ++i) {
            Int h2 = Int(terms[i]) * h1 + h0;
            Int k2 = Int(terms[i]) * k1 + k0;
            h0 = h1; h1 = h2;
            k0 = k1; k1 = k2;
        }
        return Rational(h1, k1);
    }

    /// First convergent whose denominator is at least min_den.
    Rational convergent_with_denominator(const Int& min_den) const {
        for (size_t i = 0; i < terms.size(); ++i) {
            Rational c = convergent(i);
            if (c.den() >= min_den) return c;
        }
        throw std::invalid_argument("ContinuedFraction: expansion too short for requested precision");
    }
};

} // namespace kfsm
