#include "typomap/assoc.hpp"

#include "typomap/error.hpp"
#include "typomap/log.hpp"
#include "typomap/unicode.hpp"

#include <cmath>
#include <unordered_map>

namespace typomap {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// erf via Maclaurin series; used for x < 2 where it converges fast and the
// 1 - erf cancellation costs at most a couple of digits.
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return 2.0 / kSqrtPi * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
// evaluated with the modified Lentz algorithm; solid for x >= 2.
double erfc_continued_fraction(double x) {
    const double tiny = 1e-300;
    double f = tiny;
    double c = f;
    double d = 0.0;
    for (int n = 0; n < 300; ++n) {
        const double a_n = n == 0 ? 1.0 : n / 2.0;
        const double b_n = x;
        d = b_n + a_n * d;
        if (d == 0.0) d = tiny;
        c = b_n + a_n / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) / kSqrtPi * f;
}

double erfc_own(double x) {
    if (x < 2.0) return 1.0 - erf_series(x);
    return erfc_continued_fraction(x);
}

} // namespace

double chi2_survival(double chi2) {
    if (chi2 < 0.0) throw Error("chi2_survival: negative statistic");
    if (chi2 == 0.0) return 1.0;
    return erfc_own(std::sqrt(chi2 / 2.0));
}

ChiSquareResult chi_square(const ContingencyTable& t) {
    if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0)
        throw Error("chi_square: negative cell count");
    const double a = static_cast<double>(t.a);
    const double b = static_cast<double>(t.b);
    const double c = static_cast<double>(t.c);
    const double d = static_cast<double>(t.d);
    const double n = a + b + c + d;
    const double r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
    if (n <= 0.0 || r1 <= 0.0 || r2 <= 0.0 || c1 <= 0.0 || c2 <= 0.0)
        throw Error("chi_square: zero marginal, association undefined");
    const double diff = a * d - b * c;
    const double chi2 = n * diff * diff / (r1 * r2 * c1 * c2);
    return {chi2, chi2_survival(chi2)};
}

std::vector<AssociationScore> score_units(std::span<const AssocEvent> events,
                                          std::span<const std::string> units,
                                          Counting counting) {
    std::vector<AssociationScore> scores;
    if (units.empty()) return scores;

    std::unordered_map<std::string_view, std::size_t> unit_index;
    unit_index.reserve(units.size());
    std::size_t max_unit_cp = 0;
    for (std::size_t u = 0; u < units.size(); ++u) {
        unit_index.emplace(units[u], u);
        max_unit_cp = std::max(max_unit_cp, uni::length(units[u]));
    }

    std::int64_t pivot_total = 0;
    std::vector<std::int64_t> in_pivot(units.size(), 0);
    std::vector<std::int64_t> in_other(units.size(), 0);
    // last event where a unit matched, to count presence once per event
    std::vector<std::size_t> seen_stamp(units.size(), static_cast<std::size_t>(-1));

    // Matching is inverted: enumerate each event word's own substrings (or
    // the word itself) and look them up in the unit index, which keeps the
    // cost proportional to corpus size rather than |events| * |units|.
    for (std::size_t e = 0; e < events.size(); ++e) {
        const AssocEvent& ev = events[e];
        if (ev.pivot) ++pivot_total;
        auto mark = [&](std::string_view key) {
            auto it = unit_index.find(key);
            if (it == unit_index.end()) return;
            const std::size_t u = it->second;
            if (seen_stamp[u] == e) return;
            seen_stamp[u] = e;
            ++(ev.pivot ? in_pivot[u] : in_other[u]);
        };
        for (const std::string& word : ev.words) {
            if (counting == Counting::Token) {
                mark(word);
                continue;
            }
            // A contiguous scalar-value subsequence of valid UTF-8 is a
            // contiguous byte substring, so windows are enumerated over
            // codepoint boundaries and matched as byte slices.
            std::vector<std::size_t> bounds;
            bounds.push_back(0);
            for (std::size_t i = 0; i < word.size();) {
                const unsigned char ch = static_cast<unsigned char>(word[i]);
                std::size_t len = ch < 0x80 ? 1 : (ch & 0xE0) == 0xC0 ? 2 : (ch & 0xF0) == 0xE0 ? 3 : 4;
                i += len;
                bounds.push_back(i);
            }
            const std::size_t ncp = bounds.size() - 1;
            for (std::size_t s = 0; s < ncp; ++s) {
                const std::size_t tmax = std::min(ncp, s + max_unit_cp);
                for (std::size_t t = s + 1; t <= tmax; ++t)
                    mark(std::string_view(word).substr(bounds[s], bounds[t] - bounds[s]));
            }
        }
    }

    const std::int64_t total = static_cast<std::int64_t>(events.size());
    std::size_t skipped = 0;
    for (std::size_t u = 0; u < units.size(); ++u) {
        ContingencyTable t;
        t.a = in_pivot[u];
        t.b = pivot_total - in_pivot[u];
        t.c = in_other[u];
        t.d = total - pivot_total - in_other[u];
        if (t.a + t.b == 0 || t.c + t.d == 0 || t.a + t.c == 0 || t.b + t.d == 0) {
            ++skipped;
            log::debug("score_units: unit '" + units[u] + "' skipped (zero marginal)");
            continue;
        }
        const ChiSquareResult r = chi_square(t);
        scores.push_back({units[u], r.chi2, r.p_value, t.a});
    }
    if (skipped > 0)
        log::info("score_units: skipped " + std::to_string(skipped) + " unit(s) with zero marginals");
    return scores;
}

} // namespace typomap
