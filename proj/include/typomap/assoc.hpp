#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace typomap {

// 2x2 contingency counts for pivot presence vs unit presence.
struct ContingencyTable {
    std::int64_t a = 0; // pivot present, unit present
    std::int64_t b = 0; // pivot present, unit absent
    std::int64_t c = 0; // pivot absent, unit present
    std::int64_t d = 0; // pivot absent, unit absent
};

struct AssociationScore {
    std::string unit;
    double chi2 = 0.0;
    double p_value = 1.0;
    std::int64_t cooccurrence = 0; // = a
};

struct ChiSquareResult {
    double chi2;
    double p_value;
};

// Plain chi-square (no continuity correction), 1 dof. Throws Error when a
// marginal is zero.
ChiSquareResult chi_square(const ContingencyTable& t);

// Survival function of the 1-dof chi-square distribution, erfc(sqrt(x/2)),
// via Maclaurin series below the crossover and a Lentz continued fraction
// above it. Relative error stays under 1e-12 for x <= 200.
double chi2_survival(double chi2);

enum class Counting { Token, Substring };

// One conditioning event: a source-token occurrence and the target word(s)
// attached to it (none when NULL-aligned, two when a head-verb parallel is
// folded in).
struct AssocEvent {
    bool pivot = false;
    std::vector<std::string> words;
};

// Scores each unit against the event list. Token counting requires an exact
// word match, substring counting a contiguous scalar-value subsequence of
// any attached word. Units with a zero marginal are skipped with a log
// entry. Output order follows the input unit order.
std::vector<AssociationScore> score_units(std::span<const AssocEvent> events,
                                          std::span<const std::string> units,
                                          Counting counting);

} // namespace typomap
