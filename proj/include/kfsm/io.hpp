#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kfsm/hm.hpp"
#include "kfsm/interp.hpp"
#include "kfsm/word.hpp"

namespace kfsm {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const std::vector<Rational>& v) {
    ordered_json a = ordered_json::array();
    for (const Rational& r : v) a.push_back(r.str());
    return a;
}

inline ordered_json to_json(const OrbitCluster& cl) {
    ordered_json j;
    j["k"] = cl.k;
    j["p"] = cl.p;
    j["q"] = cl.q;
    j["nu"] = to_json(cl.nu);
    ordered_json orbits = ordered_json::array();
    for (const Word& w : cl.orbits) orbits.push_back(w.str());
    j["orbits"] = orbits;
    j["weights"] = to_json(cl.weights);
    j["period"] = cl.period;
    j["rotation"] = cl.rotation.str();
    return j;
}

inline ordered_json to_json(const Box& b) {
    ordered_json sides = ordered_json::array();
    for (const auto& [l, r] : b.sides) {
        ordered_json side;
        side["l"] = l.str();
        side["r"] = r.str();
        sides.push_back(side);
    }
    return sides;
}

/// CSV columns p,q,params,l1,r1,...,lk,rk; params is the nu vector joined
/// with ';' so the cell stays a single CSV field. Exact rationals throughout.
inline std::string diagram_csv(const std::vector<DiagramRow>& rows, long k) {
    std::ostringstream os;
    os << "p,q,params";
    for (long j = 1; j <= k; ++j) os << ",l" << j << ",r" << j;
    os << "\n";
    for (const DiagramRow& row : rows) {
        os << row.p << "," << row.q << ",";
        for (size_t i = 0; i < row.nu.size(); ++i) os << (i ? ";" : "") << row.nu[i].str();
        for (const auto& [l, r] : row.box.sides) os << "," << l.str() << "," << r.str();
        os << "\n";
    }
    return os.str();
}

/// SVG emission is deliberately lossy: box corners are scaled by a fixed
/// power of ten and written as decimals. Exactness lives in the CSV.
inline std::string diagram_svg(const std::vector<DiagramRow>& rows, long k,
                               const Rational& lo = Rational(0), const Rational& hi = Rational(1, 2)) {
    const long scale = 1000;  // 10^3 pixels per parameter unit
    auto px = [&](const Rational& v) {
        double t = (v - lo).to_double() * (double)scale;
        std::ostringstream s;
        s << std::fixed << std::setprecision(2) << t;
        return s.str();
    };
    double span = (hi - lo).to_double() * (double)scale;
    static const char* palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b5",
                                    "#59a14f", "#edc948", "#b07aa1", "#9c755f"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << span << " " << span
       << "\">\n";
    long color = 0;
    long last_p = -1, last_q = -1;
    for (const DiagramRow& row : rows) {
        if (row.p != last_p || row.q != last_q) {
            if (last_q >= 0) ++color;
            last_p = row.p;
            last_q = row.q;
        }
        const char* fill = palette[color % 8];
        if (k == 1) {
            const auto& [l, r] = row.box.sides[0];
            os << "  <rect x=\"" << px(l) << "\" y=\"0\" width=\""
               << (r - l).to_double() * scale << "\" height=\"" << span << "\" fill=\"" << fill
               << "\" fill-opacity=\"0.5\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        } else {
            const auto& [l1, r1] = row.box.sides[0];
            const auto& [l2, r2] = row.box.sides[1];
            // y axis points down in SVG; flip the second coordinate
            double w = (r1 - l1).to_double() * scale, h = (r2 - l2).to_double() * scale;
            double y = (hi - r2).to_double() * scale;
            os << "  <rect x=\"" << px(l1) << "\" y=\"" << std::fixed << std::setprecision(2) << y
               << "\" width=\"" << w << "\" height=\"" << h << "\" fill=\"" << fill
               << "\" fill-opacity=\"0.5\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

inline std::vector<Rational> parse_rational_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto r = Rational::parse(tok);
        if (!r) throw std::invalid_argument("bad rational: '" + tok + "'");
        out.push_back(*r);
    }
    return out;
}

inline Rational parse_rational(const std::string& s) {
    auto r = Rational::parse(s);
    if (!r) throw std::invalid_argument("bad rational: '" + s + "'");
    return *r;
}

} // namespace kfsm
