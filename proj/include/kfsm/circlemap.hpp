#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "kfsm/errors.hpp"
#include "kfsm/rational.hpp"
#include "kfsm/word.hpp"

namespace kfsm {

/// Piecewise-linear degree-one bimodal circle map, stored as one period of the
/// lift on [0,1] with rational breakpoints. Class-G shape: x_min = 0, slope > 1
/// on [0, x_max], strictly decreasing on [x_max, 1], and g(x+1) = g(x)+1.
/// z_max and z_min are the increasing-branch preimages of x_max and x_min + 1;
/// their existence (0 < z_max < z_min < x_max) is what makes the address
/// system usable and is validated on construction.
class BimodalMap {
public:
    std::vector<Rational> xs, ys;  // breakpoints of the lift on [0,1]
    Rational x_max, z_max, z_min;

    static BimodalMap model() {
        return from_breakpoints({{Rational(0), Rational(0)},
                                 {Rational(1, 2), Rational(3, 2)},
                                 {Rational(1), Rational(1)}});
    }

    static BimodalMap from_breakpoints(std::vector<std::pair<Rational, Rational>> pts) {
        BimodalMap g;
        if (pts.size() < 3) throw InvalidMap("need at least three breakpoints");
        for (auto& [x, y] : pts) {
            g.xs.push_back(x);
            g.ys.push_back(y);
        }
        if (g.xs.front() != Rational(0) || g.xs.back() != Rational(1))
            throw InvalidMap("breakpoints must span [0,1] with x_min = 0");
        for (size_t i = 0; i + 1 < g.xs.size(); ++i)
            if (!(g.xs[i] < g.xs[i + 1])) throw InvalidMap("breakpoints must be strictly increasing");
        if (g.ys.back() != g.ys.front() + Rational(1)) throw InvalidMap("need g(1) = g(0) + 1");

        size_t peak = 0;
        for (size_t i = 1; i < g.ys.size(); ++i)
            if (g.ys[i] > g.ys[peak]) peak = i;
        if (peak == 0 || peak + 1 == g.xs.size()) throw InvalidMap("interior maximum required");
        g.x_max = g.xs[peak];
        for (size_t i = 0; i < peak; ++i) {
            Rational slope = (g.ys[i + 1] - g.ys[i]) / (g.xs[i + 1] - g.xs[i]);
            if (!(slope > Rational(1))) throw InvalidMap("slope must exceed 1 on [0, x_max]");
        }
        for (size_t i = peak; i + 1 < g.xs.size(); ++i)
            if (!(g.ys[i + 1] < g.ys[i])) throw InvalidMap("must be strictly decreasing on [x_max, 1]");
        if (g.ys.front().sign() < 0) throw InvalidMap("need g(0) >= 0");
        if (!(g.ys[peak] <= g.x_max + Rational(1))) throw InvalidMap("need g(x_max) <= x_max + 1");
        if (!(g.ys.front() < g.x_max)) throw InvalidMap("need g(0) < x_max (z_max must exist)");
        if (!(g.ys[peak] > Rational(1))) throw InvalidMap("need g(x_max) > 1 (z_min must exist)");
        g.z_max = g.solve_increasing(g.x_max);
        g.z_min = g.solve_increasing(Rational(1));
        if (!(Rational(0) < g.z_max && g.z_max < g.z_min && g.z_min < g.x_max))
            throw InvalidMap("need 0 < z_max < z_min < x_max");
        return g;
    }

    /// Exact lift evaluation at any rational x via g(x+1) = g(x)+1.
    Rational lift(const Rational& x) const {
        Rational n(Int(x.floor()));
        Rational t = x - n;
        size_t i = 0;
        while (i + 2 < xs.size() && xs[i + 1] <= t) ++i;
        Rational y = ys[i] + (ys[i + 1] - ys[i]) * (t - xs[i]) / (xs[i + 1] - xs[i]);
        return y + n;
    }

    CirclePoint lift_on_cover(const CirclePoint& x) const {
        return make_circle_point(lift(x.value), x.modulus);
    }

    /// Unique x in [0, x_max] with lift(x) = y; requires g(0) <= y <= g(x_max).
    Rational solve_increasing(const Rational& y) const {
        if (y < ys.front() || y > peak_value())
            throw std::invalid_argument("solve_increasing: value outside increasing range");
        size_t i = 0;
        while (ys[i + 1] < y) ++i;
        return xs[i] + (y - ys[i]) * (xs[i + 1] - xs[i]) / (ys[i + 1] - ys[i]);
    }

    Rational peak_value() const {
        size_t i = 0;
        for (size_t j = 1; j < ys.size(); ++j)
            if (ys[j] > ys[i]) i = j;
        return ys[i];
    }

    /// The 2k coding intervals on S_k: I_{2j} = [j, z_max+j],
    /// I_{2j+1} = [z_min+j, x_max+j].
    std::vector<std::pair<Rational, Rational>> address_intervals(long k) const {
        std::vector<std::pair<Rational, Rational>> out;
        out.reserve(2 * (size_t)k);
        for (long j = 0; j < k; ++j) {
            out.emplace_back(Rational(j), z_max + Rational(j));
            out.emplace_back(z_min + Rational(j), x_max + Rational(j));
        }
        return out;
    }
};

struct MapItinerary {
    Word word;                       // finite prefix emitted so far
    std::optional<long> escape_step; // set when the orbit leaves the coding intervals
};

/// Itinerary of x on S_k under the lifted map against the closed coding
/// intervals. The intervals are disjoint, so membership is unambiguous; an
/// orbit point outside all of them certifies x not in Lambda_k.
inline MapItinerary map_itinerary(const BimodalMap& g, const CirclePoint& x0, long n) {
    long k = x0.modulus;
    std::vector<int> symbols;
    CirclePoint x = x0;
    for (long i = 0; i < n; ++i) {
        Rational j(Int(x.value.floor()));
        Rational frac = x.value - j;
        long jj = j.floor().get_si();
        int s;
        if (frac <= g.z_max) s = (int)(2 * jj);
        else if (g.z_min <= frac && frac <= g.x_max) s = (int)(2 * jj + 1);
        else return {Word::finite(std::move(symbols), (int)(2 * k)), i};
        symbols.push_back(s);
        x = g.lift_on_cover(x);
    }
    return {Word::finite(std::move(symbols), (int)(2 * k)), std::nullopt};
}

/// iota_1^{-1} for the model map: sum s_j / 3^{j+1}, exact for eventually
/// periodic words (geometric series), partial sum for finite prefixes.
inline Rational inverse_itinerary_model(const Word& w) {
    Rational acc(0);
    Int pow3(1);
    for (size_t i = 0; i < w.pre.size(); ++i) {
        pow3 *= 3;
        acc += Rational(Int(w.pre[i]), pow3);
    }
    if (!w.per.empty()) {
        Rational block(0);
        Int bp(1);
        for (size_t i = 0; i < w.per.size(); ++i) {
            bp *= 3;
            block += Rational(Int(w.per[i]), bp);
        }
        // tail = 3^{-|pre|} * block * 3^p/(3^p - 1)
        acc += Rational(Int(1), pow3) * block * Rational(bp, bp - 1);
    }
    return acc;
}

/// iota_k^{-1} for the model map on S_k: base value from the mod-2 projection
/// plus the fundamental-domain index carried by the leading symbol.
inline CirclePoint inverse_itinerary_model_cover(const Word& w, long k) {
    if (w.pre.empty() && w.per.empty()) throw std::invalid_argument("empty word");
    int first = w.pre.empty() ? w.per[0] : w.pre[0];
    return CirclePoint{inverse_itinerary_model(project_base(w)) + Rational(first / 2), k};
}

struct KappaSide {
    Word word;                     // itinerary of the extreme point of Lambda_1
    std::optional<Rational> point; // the extreme point itself, when certified
    bool certified = false;
};

struct KappaResult {
    KappaSide kappa0, kappa1;  // min and max side
};

namespace detail {

/// Branches of the first-return coding system on [0, x_max]:
/// branch 0 = g on I_0 = [0, z_max], branch 1 = g - 1 on I_1 = [z_min, x_max].
struct Branch {
    const BimodalMap* g;
    int s;
    Rational lo() const { return s == 0 ? Rational(0) : g->z_min; }
    Rational hi() const { return s == 0 ? g->z_max : g->x_max; }
    Rational fwd(const Rational& x) const {
        return s == 0 ? g->lift(x) : g->lift(x) - Rational(1);
    }
    Rational inv(const Rational& y) const {
        Rational target = s == 0 ? y : y + Rational(1);
        Rational x = g->solve_increasing(target);
        if (x < lo() || x > hi()) throw InternalError("branch inverse outside domain");
        return x;
    }
    /// Affine data of the piece containing x: fwd(t) = a t + b near x.
    std::pair<Rational, Rational> piece_at(const Rational& x) const {
        size_t i = 0;
        while (i + 2 < g->xs.size() && g->xs[i + 1] <= x) ++i;
        Rational a = (g->ys[i + 1] - g->ys[i]) / (g->xs[i + 1] - g->xs[i]);
        Rational b = g->ys[i] - a * g->xs[i] - (s == 0 ? Rational(0) : Rational(1));
        return {a, b};
    }
    /// True when [u,v] lies within a single affine piece.
    bool single_piece(const Rational& u, const Rational& v) const {
        for (size_t i = 1; i + 1 < g->xs.size(); ++i)
            if (u < g->xs[i] && g->xs[i] < v) return false;
        return true;
    }
};

/// Solve for the extreme (min or max) point of Lambda_1 by the pullback
/// recursion on bound arguments. The argument orbit either revisits a value
/// (closing an eventually periodic itinerary) or runs past the horizon.
inline KappaSide solve_kappa_side(const BimodalMap& g, bool max_side, long horizon) {
    Branch br0{&g, 0}, br1{&g, 1};
    std::vector<int> w;
    std::vector<std::pair<Rational, Rational>> cons;  // [lo, up] constraint per step
    std::map<Rational, long> seen;
    Rational b = max_side ? g.x_max : Rational(0);
    long closure = -1;
    for (long i = 0; i < horizon; ++i) {
        auto it = seen.find(b);
        if (it != seen.end()) {
            closure = it->second;
            break;
        }
        seen.emplace(b, i);
        int s;
        Rational lo, up, next;
        if (max_side) {
            if (b >= g.z_min) {
                s = 1;
                lo = g.z_min;
                up = std::min(b, g.x_max);
                next = br1.fwd(up);
            } else {
                s = 0;
                lo = Rational(0);
                up = std::min(b, g.z_max);
                next = br0.fwd(up);
            }
        } else {
            if (b <= g.z_max) {
                s = 0;
                lo = std::max(b, Rational(0));
                up = g.z_max;
                next = br0.fwd(lo);
            } else {
                s = 1;
                lo = std::max(b, g.z_min);
                up = g.x_max;
                next = br1.fwd(lo);
            }
        }
        w.push_back(s);
        cons.emplace_back(lo, up);
        b = next;
    }
    if (closure < 0)
        return {Word::finite(std::move(w), 2), std::nullopt, false};

    long m = closure, n = (long)w.size();
    auto branch = [&](int s) -> Branch& { return s == 0 ? br0 : br1; };

    // Shrink the constraint interval at index m through cycle pullbacks until
    // every step sits in one affine piece, then solve the fixed point exactly.
    Rational lo = cons[(size_t)m].first, up = cons[(size_t)m].second;
    std::optional<Rational> fixed;
    for (int round = 0; round < 512 && !fixed; ++round) {
        bool all_single = true;
        Rational tlo = lo, tup = up;  // target interval at the wrap (index m)
        for (long t = n - 1; t >= m; --t) {
            Branch& br = branch(w[(size_t)t]);
            Rational rlo = br.fwd(cons[(size_t)t].first), rup = br.fwd(cons[(size_t)t].second);
            Rational ylo = std::max(tlo, rlo), yup = std::min(tup, rup);
            if (ylo > yup) return {Word::finite(std::move(w), 2), std::nullopt, false};
            Rational xlo = br.inv(ylo), xup = br.inv(yup);
            xlo = std::max(xlo, cons[(size_t)t].first);
            xup = std::min(xup, cons[(size_t)t].second);
            if (xlo > xup) return {Word::finite(std::move(w), 2), std::nullopt, false};
            if (!br.single_piece(xlo, xup)) all_single = false;
            tlo = xlo;
            tup = xup;
        }
        lo = tlo;
        up = tup;
        if (lo == up) {
            fixed = lo;
        } else if (all_single) {
            // compose the affine pieces forward around the cycle: y = A y + B
            Rational A(1), B(0), probe = lo;
            for (long t = m; t < n; ++t) {
                Branch& br = branch(w[(size_t)t]);
                auto [a, c] = br.piece_at(probe);
                A = a * A;
                B = a * B + c;
                probe = br.fwd(probe);
            }
            if (A == Rational(1)) return {Word::finite(std::move(w), 2), std::nullopt, false};
            fixed = B / (Rational(1) - A);
        }
    }
    if (!fixed) return {Word::finite(std::move(w), 2), std::nullopt, false};

    // Forward points through the cycle, then pull back the preperiod; verify
    // every recorded constraint.
    std::vector<Rational> pts((size_t)n);
    pts[(size_t)m] = *fixed;
    for (long t = m; t + 1 < n; ++t) pts[(size_t)t + 1] = branch(w[(size_t)t]).fwd(pts[(size_t)t]);
    if (n > m) {
        Rational wrap = branch(w[(size_t)(n - 1)]).fwd(pts[(size_t)(n - 1)]);
        if (wrap != *fixed) return {Word::finite(std::move(w), 2), std::nullopt, false};
    }
    for (long t = m - 1; t >= 0; --t) pts[(size_t)t] = branch(w[(size_t)t]).inv(pts[(size_t)t + 1]);
    for (long t = 0; t < n; ++t)
        if (pts[(size_t)t] < cons[(size_t)t].first || pts[(size_t)t] > cons[(size_t)t].second)
            return {Word::finite(std::move(w), 2), std::nullopt, false};

    Word word = Word::eventually_periodic(std::vector<int>(w.begin(), w.begin() + m),
                                          std::vector<int>(w.begin() + m, w.end()), 2);
    return {word, pts[0], true};
}

} // namespace detail

/// kappa_0 = iota_1(min Lambda_1) and kappa_1 = iota_1(max Lambda_1), exact
/// when the pullback recursion closes within the horizon, otherwise a
/// horizon-tagged finite prefix with certified = false.
inline KappaResult kappa_words(const BimodalMap& g, long horizon = 4096) {
    return {detail::solve_kappa_side(g, false, horizon), detail::solve_kappa_side(g, true, horizon)};
}

/// Lift of a (p,q)-periodic orbit of g to S_k: gcd(k,p) orbits of period
/// kq/gcd(k,p) whose union is the full preimage. Verifies the rotation type
/// exactly and throws NotPeriodic on mismatch.
inline std::vector<std::vector<CirclePoint>> lift_periodic_orbit(
    const BimodalMap& g, const std::vector<CirclePoint>& orbit, long p, long q, long k) {
    if ((long)orbit.size() != q) throw NotPeriodic("orbit must have q points");
    for (const CirclePoint& pt : orbit)
        if (pt.modulus != 1) throw std::invalid_argument("lift_periodic_orbit: orbit must live on S^1");

    std::set<Rational> given;
    for (const CirclePoint& pt : orbit) given.insert(pt.value);
    if ((long)given.size() != q) throw NotPeriodic("orbit points not distinct");

    Rational x = orbit[0].value;
    std::set<Rational> visited;
    for (long i = 0; i < q; ++i) {
        if (!given.count(reduce_mod(x, 1))) throw NotPeriodic("iterate leaves the given orbit");
        visited.insert(reduce_mod(x, 1));
        x = g.lift(x);
    }
    if ((long)visited.size() != q) throw NotPeriodic("period less than q");
    if (x != orbit[0].value + Rational(p)) throw NotPeriodic("lift displacement is not p after q steps");

    long m = std::gcd(k, p);
    long period = k * q / m;
    std::vector<std::vector<CirclePoint>> lifts;
    std::set<Rational> all;
    for (long j = 0; j < m; ++j) {
        std::vector<CirclePoint> cyc;
        CirclePoint y = make_circle_point(orbit[0].value + Rational(j), k);
        for (long i = 0; i < period; ++i) {
            cyc.push_back(y);
            if (!all.insert(y.value).second) throw InternalError("lifted orbits overlap");
            y = g.lift_on_cover(y);
        }
        if (!(y == cyc.front())) throw InternalError("lifted orbit did not close");
        lifts.push_back(std::move(cyc));
    }
    if ((long)all.size() != k * q) throw InternalError("lift does not cover the full preimage");
    return lifts;
}

} // namespace kfsm
