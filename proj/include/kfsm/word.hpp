#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kfsm/errors.hpp"
#include "kfsm/rational.hpp"

namespace kfsm {

/// One-sided symbol sequence over {0,..,alphabet-1}: either a finite prefix
/// (empty period) or an eventually periodic sequence pre (per)^inf.
/// normalize() puts the representation in a canonical form for the *sequence*
/// (preperiod folded into the period where possible, primitive period block);
/// canonical_orbit() picks the lexicographically least rotation and is the
/// identity of a shift orbit.
class Word {
public:
    int alphabet = 2;
    std::vector<int> pre;
    std::vector<int> per;

    static Word periodic(std::vector<int> block, int alphabet) {
        Word w;
        w.alphabet = alphabet;
        w.per = std::move(block);
        w.check();
        if (w.per.empty()) throw std::invalid_argument("Word::periodic: empty block");
        w.normalize();
        return w;
    }

    static Word finite(std::vector<int> prefix, int alphabet) {
        Word w;
        w.alphabet = alphabet;
        w.pre = std::move(prefix);
        w.check();
        return w;
    }

    static Word eventually_periodic(std::vector<int> pre, std::vector<int> per, int alphabet) {
        Word w;
        w.alphabet = alphabet;
        w.pre = std::move(pre);
        w.per = std::move(per);
        w.check();
        w.normalize();
        return w;
    }

    bool finite_prefix() const { return per.empty(); }
    bool purely_periodic() const { return pre.empty() && !per.empty(); }

    /// Number of symbols that are explicitly available (finite words only have
    /// pre.size(); eventually periodic words have all indices).
    long known_length() const { return finite_prefix() ? (long)pre.size() : -1; }

    int at(long i) const {
        if (i < (long)pre.size()) return pre[(size_t)i];
        if (per.empty()) throw std::out_of_range("Word::at: beyond finite prefix");
        return per[(size_t)((i - (long)pre.size()) % (long)per.size())];
    }

    void normalize() {
        if (per.empty()) return;
        while (!pre.empty() && pre.back() == per.back()) {
            std::rotate(per.begin(), per.end() - 1, per.end());
            pre.pop_back();
        }
        // primitive period block
        size_t n = per.size();
        for (size_t d = 1; d <= n / 2; ++d) {
            if (n % d != 0) continue;
            bool power = true;
            for (size_t i = d; i < n && power; ++i)
                if (per[i] != per[i - d]) power = false;
            if (power) {
                per.resize(d);
                break;
            }
        }
    }

    /// Lexicographically least rotation of the period block (purely periodic words).
    Word canonical_orbit() const {
        if (!purely_periodic()) throw std::invalid_argument("canonical_orbit: not purely periodic");
        size_t n = per.size(), best = 0;
        for (size_t r = 1; r < n; ++r) {
            for (size_t i = 0; i < n; ++i) {
                int a = per[(r + i) % n], b = per[(best + i) % n];
                if (a != b) {
                    if (a < b) best = r;
                    break;
                }
            }
        }
        std::vector<int> rot(n);
        for (size_t i = 0; i < n; ++i) rot[i] = per[(best + i) % n];
        return periodic(std::move(rot), alphabet);
    }

    /// "preperiod(period)" digit string for alphabets <= 10, comma separated otherwise.
    std::string str() const {
        auto emit = [&](const std::vector<int>& v) {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i) {
                if (alphabet > 10 && i) s += ',';
                s += alphabet > 10 ? std::to_string(v[i]) : std::string(1, char('0' + v[i]));
            }
            return s;
        };
        std::string s = emit(pre);
        if (!per.empty()) s += "(" + emit(per) + ")";
        return s;
    }

    static std::optional<Word> parse(std::string_view s, int alphabet) {
        auto symbols = [&](std::string_view t) -> std::optional<std::vector<int>> {
            std::vector<int> v;
            if (alphabet > 10) {
                size_t pos = 0;
                while (pos < t.size()) {
                    size_t comma = t.find(',', pos);
                    std::string tok(t.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
                    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
                        return std::nullopt;
                    v.push_back(std::atoi(tok.c_str()));
                    if (comma == std::string_view::npos) break;
                    pos = comma + 1;
                }
            } else {
                for (char c : t) {
                    if (c < '0' || c > '9') return std::nullopt;
                    v.push_back(c - '0');
                }
            }
            for (int x : v)
                if (x < 0 || x >= alphabet) return std::nullopt;
            return v;
        };
        auto open = s.find('(');
        if (open == std::string_view::npos) {
            auto v = symbols(s);
            if (!v) return std::nullopt;
            return finite(*v, alphabet);
        }
        if (s.back() != ')') return std::nullopt;
        auto head = symbols(s.substr(0, open));
        auto block = symbols(s.substr(open + 1, s.size() - open - 2));
        if (!head || !block || block->empty()) return std::nullopt;
        return eventually_periodic(*head, *block, alphabet);
    }

    friend bool operator==(const Word& a, const Word& b) {
        return a.alphabet == b.alphabet && a.pre == b.pre && a.per == b.per;
    }
    friend bool operator<(const Word& a, const Word& b) {  // container order, not lex order
        if (a.alphabet != b.alphabet) return a.alphabet < b.alphabet;
        if (a.pre != b.pre) return a.pre < b.pre;
        return a.per < b.per;
    }

private:
    void check() const {
        for (int s : pre)
            if (s < 0 || s >= alphabet) throw std::invalid_argument("Word: symbol out of range");
        for (int s : per)
            if (s < 0 || s >= alphabet) throw std::invalid_argument("Word: symbol out of range");
    }
};

/// Exact lexicographic comparison of eventually periodic words. Two such words
/// agree everywhere iff they agree on max(preperiods) + lcm(periods) symbols.
inline int compare_words(const Word& a, const Word& b) {
    if (a.finite_prefix() || b.finite_prefix())
        throw std::invalid_argument("compare_words: needs eventually periodic words");
    long pa = (long)a.per.size(), pb = (long)b.per.size();
    long bound = (long)std::max(a.pre.size(), b.pre.size()) + std::lcm(pa, pb) + std::max(pa, pb);
    for (long i = 0; i < bound; ++i) {
        int x = a.at(i), y = b.at(i);
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

/// Lexicographic comparison of the first n symbols; 0 means "equal as far as
/// the compared horizon decides". Finite words contribute only their known symbols.
inline int compare_prefix(const Word& a, const Word& b, long n) {
    for (long i = 0; i < n; ++i) {
        bool ea = a.finite_prefix() && i >= (long)a.pre.size();
        bool eb = b.finite_prefix() && i >= (long)b.pre.size();
        if (ea || eb) return 0;
        int x = a.at(i), y = b.at(i);
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

inline Word shift(const Word& w) {
    Word r = w;
    if (!r.pre.empty()) {
        r.pre.erase(r.pre.begin());
    } else if (!r.per.empty()) {
        std::rotate(r.per.begin(), r.per.begin() + 1, r.per.end());
    } else {
        throw std::invalid_argument("shift: empty word");
    }
    r.normalize();
    return r;
}

namespace detail {
inline Word map_symbols(const Word& w, int alphabet, auto f) {
    Word r;
    r.alphabet = alphabet;
    r.pre = w.pre;
    r.per = w.per;
    for (int& s : r.pre) s = f(s);
    for (int& s : r.per) s = f(s);
    r.normalize();
    return r;
}
} // namespace detail

/// Symbolic deck transformation T^_k: s -> s+2 mod 2k.
inline Word deck_shift(const Word& w) {
    return detail::map_symbols(w, w.alphabet, [&](int s) { return (s + 2) % w.alphabet; });
}

/// Symbolic covering projection pi^_k: s -> s mod 2.
inline Word project_base(const Word& w) {
    return detail::map_symbols(w, 2, [](int s) { return s % 2; });
}

/// Symbolic cover reduction p^_k: s -> s mod 2k.
inline Word project_cover(const Word& w, long k) {
    int m = (int)(2 * k);
    return detail::map_symbols(w, m, [m](int s) { return s % m; });
}

/// Allowed transitions of Omega_k (indices mod 2k):
/// 2j -> {2j, 2j+1},  2j+1 -> {2j+2, 2j+3}.
inline bool omega_transition_ok(int a, int b, int alphabet) {
    if (a % 2 == 0) return b == a || b == (a + 1) % alphabet;
    return b == (a + 1) % alphabet || b == (a + 2) % alphabet;
}

/// Membership of w in Omega_k (k = alphabet/2), including the wrap of the
/// period block.
inline bool is_in_omega(const Word& w) {
    if (w.alphabet % 2 != 0) return false;
    auto ok = [&](int a, int b) { return omega_transition_ok(a, b, w.alphabet); };
    for (size_t i = 0; i + 1 < w.pre.size(); ++i)
        if (!ok(w.pre[i], w.pre[i + 1])) return false;
    if (!w.per.empty()) {
        if (!w.pre.empty() && !ok(w.pre.back(), w.per.front())) return false;
        for (size_t i = 0; i + 1 < w.per.size(); ++i)
            if (!ok(w.per[i], w.per[i + 1])) return false;
        if (!ok(w.per.back(), w.per.front())) return false;
    }
    return true;
}

/// Rotation number of a periodic word: (odd symbols per period)/(period length),
/// in lowest terms. Applies the mod-2 projection implicitly.
inline Rational word_rotation_number(const Word& w) {
    if (w.per.empty()) throw FinitePrefixWord();
    long odd = 0;
    for (int s : w.per)
        if (s % 2 != 0) ++odd;
    return Rational(odd, (long)w.per.size());
}

/// A finite shift-invariant set stored as one canonical word per periodic orbit.
struct WordSet {
    int alphabet = 2;
    std::vector<Word> members;

    static WordSet of(std::vector<Word> words, int alphabet) {
        WordSet z;
        z.alphabet = alphabet;
        std::set<Word> seen;
        for (auto& w : words) {
            if (w.alphabet != alphabet) throw std::invalid_argument("WordSet: mixed alphabets");
            Word c = w.canonical_orbit();
            if (seen.insert(c).second) z.members.push_back(std::move(c));
        }
        std::sort(z.members.begin(), z.members.end(),
                  [](const Word& a, const Word& b) { return a.per < b.per; });
        return z;
    }

    bool operator==(const WordSet& o) const { return alphabet == o.alphabet && members == o.members; }
};

/// All cyclic rotations of all members, as purely periodic words.
inline std::vector<Word> all_rotations(const WordSet& z) {
    std::vector<Word> rots;
    for (const Word& m : z.members) {
        size_t n = m.per.size();
        for (size_t r = 0; r < n; ++r) {
            std::vector<int> block(n);
            for (size_t i = 0; i < n; ++i) block[i] = m.per[(r + i) % n];
            rots.push_back(Word::periodic(std::move(block), z.alphabet));
        }
    }
    return rots;
}

struct KfsmWitness {
    long j = 0;
    Word ell, r;
};

struct KfsmResult {
    bool ok = false;
    std::optional<KfsmWitness> witness;
};

/// Symbolic kfsm test: for j = 1..k let ell^_j = shift(max{Z n [2j-1]}) and
/// r^_j = shift(min{Z n [2j mod 2k]}) over all rotations of the members; Z is
/// kfsm iff ell^_j <= r^_j for every j. An empty cylinder imposes no
/// constraint. Symbols are already reduced mod 2k, which realizes the index
/// wrap at j = k.
inline KfsmResult is_symbolic_kfsm(const WordSet& z, long k) {
    if (z.alphabet != 2 * k) throw std::invalid_argument("is_symbolic_kfsm: alphabet must be 2k");
    for (const Word& m : z.members)
        if (!is_in_omega(m)) throw std::invalid_argument("is_symbolic_kfsm: member not in Omega_k: " + m.str());
    std::vector<Word> rots = all_rotations(z);
    auto extreme = [&](int symbol, bool want_max) -> std::optional<Word> {
        std::optional<Word> best;
        for (const Word& w : rots) {
            if (w.per[0] != symbol) continue;
            if (!best) {
                best = w;
                continue;
            }
            int c = compare_words(w, *best);
            if ((want_max && c > 0) || (!want_max && c < 0)) best = w;
        }
        return best;
    };
    for (long j = 1; j <= k; ++j) {
        int sl = (int)(2 * j - 1);
        int sr = (int)((2 * j) % (2 * k));
        auto mx = extreme(sl, true);
        auto mn = extreme(sr, false);
        if (!mx || !mn) continue;  // empty cylinder: vacuous constraint
        Word ell = shift(*mx), r = shift(*mn);
        if (compare_words(ell, r) > 0) return {false, KfsmWitness{j, ell, r}};
    }
    return {true, std::nullopt};
}

/// Every shift of an eventually periodic word, each normalized; shifts beyond
/// pre.size()+per.size() repeat.
inline std::vector<Word> all_shifts(const Word& w) {
    std::vector<Word> out;
    long n = w.finite_prefix() ? (long)w.pre.size() : (long)(w.pre.size() + w.per.size());
    Word cur = w;
    for (long i = 0; i < n; ++i) {
        out.push_back(cur);
        if (cur.finite_prefix() && cur.pre.size() <= 1) break;
        cur = shift(cur);
    }
    return out;
}

/// Dynamical order interval membership: every shift of w lies in [k0, k1].
/// A shift of w outside the bounds answers false outright; only then is the
/// kappa pair itself validated against kappa0 <= o(kappa_i, shift) <= kappa1,
/// throwing InvalidKappaPair on failure. Finite-prefix words are tested on
/// their known symbols only.
inline bool in_order_interval(const Word& w, const Word& k0, const Word& k1) {
    if (k0.finite_prefix() || k1.finite_prefix())
        throw InvalidKappaPair("kappa words must be eventually periodic");
    for (const Word& s : all_shifts(w)) {
        if (s.finite_prefix()) {
            long n = (long)s.pre.size();
            if (compare_prefix(s, k0, n) < 0 || compare_prefix(k1, s, n) < 0) return false;
        } else {
            if (compare_words(s, k0) < 0 || compare_words(k1, s) < 0) return false;
        }
    }
    for (const Word& kw : {k0, k1})
        for (const Word& s : all_shifts(kw))
            if (compare_words(k0, s) > 0 || compare_words(s, k1) > 0)
                throw InvalidKappaPair("kappa orbit leaves [kappa0, kappa1]");
    return true;
}

} // namespace kfsm
