#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "kfsm/circlemap.hpp"
#include "kfsm/errors.hpp"
#include "kfsm/hm.hpp"
#include "kfsm/rational.hpp"
#include "kfsm/word.hpp"

namespace kfsm {

/// Parameter bounds of the interpolated family for g: L = g(min Lambda_1) and
/// U = g(max Lambda_1) - 1, obtained from the kappa machinery. Certified only
/// when both extremes resolved exactly and sit in the expected cylinders.
struct InterpBounds {
    Rational L, U;
    bool certified = false;
};

inline InterpBounds interp_bounds(const BimodalMap& g, long horizon = 4096) {
    KappaResult kr = kappa_words(g, horizon);
    InterpBounds b;
    if (!kr.kappa0.certified || !kr.kappa1.certified) return {Rational(0), Rational(0), false};
    // L needs min Lambda_1 in I_0, U needs max Lambda_1 in I_1
    if (kr.kappa0.word.at(0) != 0 || kr.kappa1.word.at(0) != 1) return {Rational(0), Rational(0), false};
    b.L = g.lift(*kr.kappa0.point);
    b.U = g.lift(*kr.kappa1.point) - Rational(1);
    b.certified = true;
    return b;
}

/// The k-fold interpolated semi-monotone family H_{k,c}: g with each bump
/// over [x_max + j-1, j] cut at height c_j + j - 1. Flat spot j is
/// [b_{j-2}(c~_j), b_{j-1}(c~_j)] in the fundamental domain
/// [z_min - 1, z_min - 1 + k); the lift satisfies H(x+k) = H(x)+k.
struct InterpolatedMap {
    BimodalMap base;
    long k = 1;
    std::vector<Rational> c;
    Rational L, U;
    Rational dom_lo;  // b_{-1}(0) = z_min - 1
    std::vector<std::pair<Rational, Rational>> flats;  // closed, disjoint, ascending
    std::vector<Rational> flat_values;                 // c_j + j - 1
};

inline InterpolatedMap make_interpolated(const BimodalMap& g, long k, std::vector<Rational> c,
                                         std::optional<InterpBounds> bounds = std::nullopt) {
    if (k < 1) throw std::invalid_argument("make_interpolated: k must be positive");
    if ((long)c.size() != k) throw std::invalid_argument("make_interpolated: need k heights");
    InterpBounds lu = bounds ? *bounds : interp_bounds(g);
    if (!lu.certified) throw InvalidMap("interpolation bounds for this map are not certified");
    for (const Rational& cj : c)
        if (cj < lu.L || cj > lu.U)
            throw std::invalid_argument("make_interpolated: c_j outside [L, U]");
    InterpolatedMap h;
    h.base = g;
    h.k = k;
    h.c = std::move(c);
    h.L = lu.L;
    h.U = lu.U;
    h.dom_lo = g.z_min - Rational(1);
    for (long j = 1; j <= k; ++j) {
        Rational cj = h.c[(size_t)j - 1];
        Rational lo = g.solve_increasing(cj + Rational(1)) - Rational(1) + Rational(j - 1);
        Rational hi = g.solve_increasing(cj) + Rational(j - 1);
        h.flats.emplace_back(lo, hi);
        h.flat_values.push_back(cj + Rational(j - 1));
    }
    return h;
}

/// Exact lift evaluation: the clamped value inside the flat spots, g outside.
inline Rational h_eval(const InterpolatedMap& h, const Rational& x) {
    Rational t(Int(((x - h.dom_lo) / Rational(h.k)).floor()));
    Rational x0 = x - t * Rational(h.k);
    Rational shift = t * Rational(h.k);
    for (size_t j = 0; j < h.flats.size(); ++j)
        if (h.flats[j].first <= x0 && x0 <= h.flats[j].second) return h.flat_values[j] + shift;
    return h.base.lift(x0) + shift;
}

struct RotationResult {
    std::optional<Rational> exact;
    std::pair<Rational, Rational> enclosure;  // always contains rho
    long steps = 0;
};

/// Rotation number of H_{k,c} (displacement per step of the lift). Iterates
/// from the first flat value; a revisit of a flat spot (or of any orbit value
/// mod k) closes the orbit exactly and yields an exact rational. Otherwise
/// returns the certified enclosure at the budget.
inline RotationResult rotation_number(const InterpolatedMap& h, long budget = 100000) {
    Rational x = h.flat_values[0];
    Rational x_start = x;
    // flat index -> (step, deck translate); orbit value in fundamental domain -> same
    std::map<long, std::pair<long, Int>> flat_seen;
    std::map<Rational, std::pair<long, Int>> value_seen;
    for (long n = 0; n <= budget; ++n) {
        Int t = ((x - h.dom_lo) / Rational(h.k)).floor();
        Rational x0 = x - Rational(t) * Rational(h.k);
        long hit = -1;
        for (size_t j = 0; j < h.flats.size(); ++j)
            if (h.flats[j].first <= x0 && x0 <= h.flats[j].second) {
                hit = (long)j;
                break;
            }
        if (hit >= 0) {
            auto it = flat_seen.find(hit);
            if (it != flat_seen.end()) {
                auto [n0, t0] = it->second;
                Rational rho = Rational(Int(t - t0)) * Rational(h.k) / Rational(n - n0);
                return {rho, {rho, rho}, n};
            }
            flat_seen.emplace(hit, std::make_pair(n, t));
            x = h.flat_values[(size_t)hit] + Rational(t) * Rational(h.k);
        } else {
            auto it = value_seen.find(x0);
            if (it != value_seen.end()) {
                auto [n0, t0] = it->second;
                Rational rho = Rational(Int(t - t0)) * Rational(h.k) / Rational(n - n0);
                return {rho, {rho, rho}, n};
            }
            value_seen.emplace(x0, std::make_pair(n, t));
            x = h.base.lift(x0) + Rational(t) * Rational(h.k);
        }
    }
    Rational disp = x - x_start;
    Rational lo = (disp - Rational(h.k)) / Rational(budget + 1);
    Rational hi = (disp + Rational(h.k)) / Rational(budget + 1);
    return {std::nullopt, {lo, hi}, budget + 1};
}

/// Rotation interval of g: [rho(H_{1,L}), rho(H_{1,U})].
struct RotationInterval {
    RotationResult lower, upper;
    bool exact() const { return lower.exact.has_value() && upper.exact.has_value(); }
};

inline RotationInterval rotation_interval(const BimodalMap& g, long budget = 100000) {
    InterpBounds lu = interp_bounds(g);
    if (!lu.certified) throw InvalidMap("rotation_interval: interpolation bounds not certified");
    RotationInterval ri;
    ri.lower = rotation_number(make_interpolated(g, 1, {lu.L}, lu), budget);
    ri.upper = rotation_number(make_interpolated(g, 1, {lu.U}, lu), budget);
    return ri;
}

/// The kfsm box in model-map c-coordinates. Side j (0-based, aligned with
/// flat spot j+1) comes from the cylinder pair ([2j-1 mod 2k], [2j]):
/// ell from the shifted lexicographic maximum over [2j-1], r from the shifted
/// minimum over [2j], both realized as model-map coordinates through
/// iota_1^{-1} of the mod-2 projection. A missing cylinder leaves the default
/// bound L or U.
struct Box {
    std::vector<std::pair<Rational, Rational>> sides;  // k pairs (ell_j, r_j)
};

inline Box box_of(const WordSet& z, long k) {
    KfsmResult kf = is_symbolic_kfsm(z, k);
    if (!kf.ok) {
        std::string msg = "set is not kfsm";
        if (kf.witness)
            msg += " (j=" + std::to_string(kf.witness->j) + ", " + kf.witness->ell.str() + " > " +
                   kf.witness->r.str() + ")";
        throw NotKfsm(msg);
    }
    const Rational L(0), U(1, 2);  // model map bounds
    std::vector<Word> rots = all_rotations(z);
    auto extreme = [&](int symbol, bool want_max) -> std::optional<Word> {
        std::optional<Word> best;
        for (const Word& w : rots) {
            if (w.per[0] != symbol) continue;
            if (!best || (want_max ? compare_words(w, *best) > 0 : compare_words(w, *best) < 0)) best = w;
        }
        return best;
    };
    Box box;
    for (long j = 0; j < k; ++j) {
        int sl = (int)(((2 * j - 1) % (2 * k) + 2 * k) % (2 * k));
        int sr = (int)(2 * j);
        auto mx = extreme(sl, true);
        auto mn = extreme(sr, false);
        Rational ell = mx ? inverse_itinerary_model(project_base(shift(*mx))) : L;
        Rational r = mn ? inverse_itinerary_model(project_base(shift(*mn))) : U;
        if (ell < L) ell = L;
        if (r > U) r = U;
        if (ell > r) throw InternalError("kfsm set produced an empty box side");
        box.sides.emplace_back(ell, r);
    }
    return box;
}

/// One rectangle of the rotation-number diagram: a pure parameter and the box
/// of its single periodic orbit.
struct DiagramRow {
    long p = 0, q = 1;
    std::vector<Rational> nu;
    Word orbit;
    Box box;
};

/// Level sets of R_k for the model map: every p/q with q <= max_den in (0,1),
/// one rectangle per pure parameter, in deterministic (q, p, lattice) order.
inline std::vector<DiagramRow> level_diagram(long k, long max_den) {
    std::vector<DiagramRow> rows;
    for (long q = 2; q <= max_den; ++q)
        for (long p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            for (auto& nu : pure_lattice(k, p, q)) {
                OrbitCluster cl = b_k_rational(k, p, q, nu);
                if (cl.orbits.size() != 1) throw InternalError("pure parameter gave a multi-orbit cluster");
                WordSet z;
                z.alphabet = (int)(2 * k);
                z.members = cl.orbits;
                rows.push_back(DiagramRow{p, q, nu, cl.orbits[0], box_of(z, k)});
            }
        }
    return rows;
}

/// The diagonal slice: nu_s(omega) = (1-omega, ..., 1-omega) and whether the
/// Sturmian C_1(omega) lies in the dynamical order interval of g.
struct DiagonalSlice {
    std::vector<Rational> nu_s;
    bool member = false;
};

inline DiagonalSlice diagonal_slice(const BimodalMap& g, long k, const Rational& omega,
                                    long horizon = 4096) {
    if (omega.sign() < 0 || omega > Rational(1))
        throw std::invalid_argument("diagonal_slice: omega must be in [0,1]");
    DiagonalSlice out;
    for (long i = 0; i < k; ++i) out.nu_s.push_back(Rational(1) - omega);
    KappaResult kr = kappa_words(g, horizon);
    if (!kr.kappa0.certified || !kr.kappa1.certified)
        throw InvalidMap("diagonal_slice: kappa words not certified within horizon");
    Word sturm = omega.sign() == 0     ? Word::periodic({0}, 2)
                 : omega == Rational(1) ? Word::periodic({1}, 2)
                                        : sturmian_word(omega.num().get_si(), omega.den().get_si());
    out.member = in_order_interval(sturm, kr.kappa0.word, kr.kappa1.word);
    return out;
}

} // namespace kfsm
