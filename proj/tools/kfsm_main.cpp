// kfsm: generation, verification, measurement, counting, and diagrams for
// k-fold semi-monotone invariant sets of bimodal circle maps.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kfsm/kfsm.hpp"

using namespace kfsm;

namespace {

BimodalMap load_map(const std::string& spec) {
    if (spec == "model") return BimodalMap::model();
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open map file: " + spec);
    nlohmann::json j;
    in >> j;
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& row : j.at("breakpoints"))
        pts.emplace_back(parse_rational(row.at(0).get<std::string>()),
                         parse_rational(row.at(1).get<std::string>()));
    return BimodalMap::from_breakpoints(std::move(pts));
}

// Words separate on ';' always and on ',' for digit alphabets; alphabets
// above 10 need the comma for symbols inside a word.
std::vector<Word> parse_words(const std::string& s, int alphabet) {
    std::vector<Word> out;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        auto w = Word::parse(cur, alphabet);
        if (!w) throw std::invalid_argument("bad word: '" + cur + "'");
        out.push_back(*w);
        cur.clear();
    };
    for (char ch : s) {
        if (ch == ';' || (ch == ',' && alphabet <= 10)) {
            flush();
        } else {
            cur += ch;
        }
    }
    flush();
    return out;
}

std::vector<int> parse_block(const std::string& s, int alphabet) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad block symbol: '" + tok + "'");
        int v = std::atoi(tok.c_str());
        if (v >= alphabet) throw std::invalid_argument("block symbol out of range: " + tok);
        out.push_back(v);
    }
    return out;
}

void emit(const ordered_json& j) { std::cout << j.dump() << "\n"; }

int run_generate(long k, const std::string& omega_s, const std::string& nu_s, bool sturmian,
                 bool discrete, long p, long q, long mu, long prefix, const std::string& seed) {
    if (discrete) {
        Word w = discrete_hm(p, q, mu);
        ordered_json j;
        j["p"] = p;
        j["q"] = q;
        j["mu"] = mu;
        j["word"] = w.str();
        j["period"] = (long)w.per.size();
        j["rotation"] = word_rotation_number(w).str();
        emit(j);
        return 0;
    }
    if (sturmian) {
        Rational omega = parse_rational(omega_s);
        ordered_json j;
        j["omega"] = omega.str();
        if (prefix > 0) {
            j["mode"] = "prefix";
            j["horizon"] = prefix;
            j["word"] = sturmian_prefix(omega, prefix).str();
        } else {
            Word w = sturmian_word(omega.num().get_si(), omega.den().get_si());
            j["word"] = w.str();
            j["period"] = (long)w.per.size();
        }
        emit(j);
        return 0;
    }
    Rational omega = parse_rational(omega_s);
    std::vector<Rational> nu = parse_rational_list(nu_s);
    if (prefix > 0) {
        HMParams params = make_hm_params(k, omega, nu, true);
        CirclePoint x = make_circle_point(parse_rational(seed), k);
        Word w = b_k_prefix(params, x, prefix);
        ordered_json j;
        j["k"] = k;
        j["omega"] = omega.str();
        j["nu"] = to_json(nu);
        j["mode"] = "prefix";
        j["horizon"] = prefix;
        j["seed"] = x.value.str();
        j["word"] = w.str();
        emit(j);
        return 0;
    }
    OrbitCluster cl = b_k_rational(k, omega.num().get_si(), omega.den().get_si(), nu);
    emit(to_json(cl));
    return 0;
}

int run_verify(long k, const std::string& words_s, const std::string& k0_s, const std::string& k1_s) {
    std::vector<Word> words = parse_words(words_s, (int)(2 * k));
    ordered_json j;
    j["k"] = k;
    ordered_json in_om = ordered_json::array();
    bool all_om = true;
    for (const Word& w : words) {
        bool ok = is_in_omega(w);
        all_om = all_om && ok;
        ordered_json e;
        e["word"] = w.str();
        e["in_omega"] = ok;
        in_om.push_back(e);
    }
    j["words"] = in_om;
    if (all_om) {
        KfsmResult res = is_symbolic_kfsm(WordSet::of(words, (int)(2 * k)), k);
        j["kfsm"] = res.ok;
        if (res.witness) {
            ordered_json w;
            w["j"] = res.witness->j;
            w["ell"] = res.witness->ell.str();
            w["r"] = res.witness->r.str();
            j["witness"] = w;
        }
    } else {
        j["kfsm"] = false;
        j["witness"] = "not in Omega_k";
    }
    if (!k0_s.empty() || !k1_s.empty()) {
        if (k0_s.empty() || k1_s.empty())
            throw std::invalid_argument("order interval check needs both --kappa0 and --kappa1");
        auto k0 = Word::parse(k0_s, 2), k1 = Word::parse(k1_s, 2);
        if (!k0 || !k1) throw std::invalid_argument("bad kappa word");
        ordered_json oi = ordered_json::array();
        for (const Word& w : words) {
            ordered_json e;
            e["word"] = w.str();
            e["in_order_interval"] = in_order_interval(project_base(w), *k0, *k1);
            oi.push_back(e);
        }
        j["order_interval"] = oi;
    }
    emit(j);
    return 0;
}

int run_measure(long k, const std::string& omega_s, const std::string& nu_s,
                const std::vector<std::string>& blocks, bool with_resonance, long horizon) {
    Rational omega = parse_rational(omega_s);
    std::vector<Rational> nu = parse_rational_list(nu_s);
    HMParams params = make_hm_params(k, omega, nu);
    ordered_json j;
    j["k"] = k;
    j["omega"] = omega.str();
    j["nu"] = to_json(nu);
    j["skewness"] = to_json(skewness(params));
    ordered_json cyl = ordered_json::array();
    for (const std::string& bs : blocks) {
        std::vector<int> block = parse_block(bs, (int)(2 * k));
        ordered_json e;
        e["block"] = bs;
        e["measure"] = lambda_cylinder(params, block).str();
        cyl.push_back(e);
    }
    j["cylinders"] = cyl;
    if (with_resonance) {
        auto res = is_resonant(params, horizon);
        j["resonant"] = res.resonant;
        if (res.resonant) j["resonance_n"] = res.n;
        long p = omega.num().get_si(), q = omega.den().get_si();
        j["subresonant"] = is_subresonant(k, p, q, nu);
        auto [cover, base] = cluster_periods(k, p, q, nu);
        j["period_cover"] = cover;
        j["period_base"] = base;
    }
    emit(j);
    return 0;
}

int run_count(long k, long p, long q, bool list) {
    auto [cover, base] = count_kfsm_periodic(k, p, q);
    ordered_json j;
    j["k"] = k;
    j["p"] = p;
    j["q"] = q;
    j["cover"] = cover.get_str();
    j["base"] = base.get_str();
    if (list) {
        ordered_json lat = ordered_json::array();
        for (auto& nu : pure_lattice(k, p, q)) lat.push_back(to_json(nu));
        j["pure"] = lat;
    }
    emit(j);
    return 0;
}

int run_rotate(const std::string& map_s, long k, const std::string& c_s, bool interval, long budget) {
    BimodalMap g = load_map(map_s);
    ordered_json j;
    if (interval) {
        RotationInterval ri = rotation_interval(g, budget);
        auto side = [](const RotationResult& r) {
            ordered_json e;
            if (r.exact) {
                e["exact"] = r.exact->str();
            } else {
                e["enclosure"] = {r.enclosure.first.str(), r.enclosure.second.str()};
            }
            e["steps"] = r.steps;
            return e;
        };
        j["lower"] = side(ri.lower);
        j["upper"] = side(ri.upper);
        emit(j);
        return 0;
    }
    std::vector<Rational> c = parse_rational_list(c_s);
    auto h = make_interpolated(g, k, c);
    auto r = rotation_number(h, budget);
    j["k"] = k;
    j["c"] = to_json(c);
    if (r.exact) {
        j["rotation"] = r.exact->str();
    } else {
        j["enclosure"] = {r.enclosure.first.str(), r.enclosure.second.str()};
    }
    j["steps"] = r.steps;
    emit(j);
    return 0;
}

int run_diagram(const std::string& map_s, long k, long max_den, const std::string& out,
                const std::string& svg) {
    if (map_s != "model")
        throw std::invalid_argument("diagram: only --map model is supported (see README)");
    auto rows = level_diagram(k, max_den);
    std::string csv = diagram_csv(rows, k);
    if (out.empty() || out == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(out);
        if (!f) throw std::invalid_argument("cannot open output file: " + out);
        f << csv;
    }
    if (!svg.empty()) {
        std::ofstream f(svg);
        if (!f) throw std::invalid_argument("cannot open svg file: " + svg);
        f << diagram_svg(rows, k);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kfsm invariant sets of bimodal circle maps"};
    app.require_subcommand(1);

    long k = 1, p = 1, q = 2, mu = 0, prefix = 0, budget = 100000, horizon = 4096, max_den = 5;
    std::string omega, nu, seed = "1/16", words, kappa0, kappa1, map_s = "model", out, svg, c_s;
    std::vector<std::string> blocks;
    bool sturmian = false, discrete = false, list = false, interval = false, with_res = false;

    auto* gen = app.add_subcommand("generate", "HM construction: clusters, prefixes, Sturmian, discrete");
    gen->add_option("--k", k, "cover degree")->capture_default_str();
    gen->add_option("--omega", omega, "rotation number p/q");
    gen->add_option("--nu", nu, "comma separated nu vector");
    gen->add_flag("--sturmian", sturmian, "emit the Sturmian word of --omega");
    gen->add_flag("--discrete", discrete, "discrete construction on Z_{2q} (--p --q --mu)");
    gen->add_option("--p", p, "numerator");
    gen->add_option("--q", q, "denominator");
    gen->add_option("--mu", mu, "discrete address parameter");
    gen->add_option("--horizon,--prefix", prefix, "irrational mode: emit a prefix of this length");
    gen->add_option("--seed-point", seed, "base point for prefix mode")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "Omega membership, kfsm test, order interval");
    ver->add_option("--k", k, "cover degree")->capture_default_str();
    ver->add_option("--words", words, "words separated by ';' (or ',' for alphabets up to 10), e.g. \"(00123),(01223)\"")
        ->required();
    ver->add_option("--kappa0", kappa0, "lower kneading word");
    ver->add_option("--kappa1", kappa1, "upper kneading word");

    auto* mea = app.add_subcommand("measure", "cylinder measures and skewness");
    mea->add_option("--k", k, "cover degree")->capture_default_str();
    mea->add_option("--omega", omega, "rotation number p/q")->required();
    mea->add_option("--nu", nu, "comma separated nu vector")->required();
    mea->add_option("--block", blocks, "cylinder block, comma separated symbols (repeatable)");
    mea->add_flag("--resonance", with_res, "include resonance, sub-resonance and periods");
    mea->add_option("--horizon", horizon, "resonance search horizon")->capture_default_str();

    auto* cnt = app.add_subcommand("count", "pure lattice counting");
    cnt->add_option("--k", k, "cover degree");
    cnt->add_option("--p", p, "numerator")->required();
    cnt->add_option("--q", q, "denominator")->required();
    cnt->add_flag("--list", list, "list the pure lattice");

    auto* rot = app.add_subcommand("rotate", "rotation numbers and intervals");
    rot->add_option("--map", map_s, "model or a JSON breakpoint file")->capture_default_str();
    rot->add_option("--k", k, "cover degree")->capture_default_str();
    rot->add_option("--c", c_s, "interpolation heights, comma separated");
    rot->add_flag("--interval", interval, "rotation interval of the map");
    rot->add_option("--budget", budget, "iteration budget")->capture_default_str();

    auto* dia = app.add_subcommand("diagram", "k=2 rotation number diagram");
    dia->add_option("--map", map_s, "must be model")->capture_default_str();
    dia->add_option("--k", k, "cover degree")->capture_default_str();
    dia->add_option("--max-den", max_den, "largest denominator")->capture_default_str();
    dia->add_option("--out", out, "CSV output path (default stdout)");
    dia->add_option("--svg", svg, "also write an SVG rendering");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 2;
    }

    if (gen->parsed() && !discrete && omega.empty()) {
        std::cerr << "generate: --omega is required (or use --discrete)\n" << gen->help() << "\n";
        return 2;
    }
    try {
        if (gen->parsed()) return run_generate(k, omega, nu, sturmian, discrete, p, q, mu, prefix, seed);
        if (ver->parsed()) return run_verify(k, words, kappa0, kappa1);
        if (mea->parsed()) return run_measure(k, omega, nu, blocks, with_res, horizon);
        if (cnt->parsed()) return run_count(k, p, q, list);
        if (rot->parsed()) return run_rotate(map_s, k, c_s, interval, budget);
        if (dia->parsed()) return run_diagram(map_s, k, max_den, out, svg);
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
