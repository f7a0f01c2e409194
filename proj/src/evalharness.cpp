#include "typomap/evalharness.hpp"

#include "typomap/aligner.hpp"
#include "typomap/error.hpp"
#include "typomap/io.hpp"
#include "typomap/unicode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace typomap {

GoldSample load_gold(const std::filesystem::path& path) {
    GoldSample gold;
    std::set<std::pair<std::string, int>> seen;
    std::size_t lineno = 0;
    for (const std::string& line : io::split_lines(io::read_file(path))) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols = io::split(line, '\t');
        if (cols.size() != 3)
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": expected verse_id<TAB>occurrence<TAB>gold_label");
        GoldItem item;
        item.verse_id = cols[0];
        item.occurrence = static_cast<int>(io::parse_int(cols[1]));
        item.label = cols[2];
        if (item.label.empty())
            throw Error(path.string() + ":" + std::to_string(lineno) + ": empty gold label");
        if (!seen.insert({item.verse_id, item.occurrence}).second)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": duplicate gold item " +
                        item.verse_id + "#" + cols[1]);
        gold.items.push_back(std::move(item));
    }
    return gold;
}

void write_gold(const std::filesystem::path& path, const GoldSample& gold) {
    std::string out = "# verse_id\toccurrence\tgold_label\n";
    for (const GoldItem& item : gold.items) {
        out += item.verse_id;
        out += '\t';
        out += std::to_string(item.occurrence);
        out += '\t';
        out += item.label;
        out += '\n';
    }
    io::write_file(path, out);
}

double f1_score(double p, double r) {
    if (p < 0.0 || p > 1.0 || r < 0.0 || r > 1.0) throw Error("f1_score: inputs outside [0, 1]");
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

double round_reported(double v) {
    return std::trunc(v * 100.0) / 100.0;
}

PRF score_alignment(const PredictionMap& pred, const GoldSample& gold) {
    PRF prf;
    for (const GoldItem& item : gold.items) {
        auto it = pred.find({item.verse_id, item.occurrence});
        if (it == pred.end())
            throw Error("score_alignment: no prediction for " + item.verse_id + "#" +
                        std::to_string(item.occurrence));
        const std::string& p = it->second;
        const bool predicted_null = p == kNoMatch;
        if (item.label == kGoldNullOk) {
            predicted_null ? ++prf.tn : ++prf.fp;
        } else if (item.label == kGoldNullBad) {
            // a parallel exists but the gold does not name it: any concrete
            // prediction is unverifiable and counts against precision
            predicted_null ? ++prf.fn : ++prf.fp;
        } else {
            if (predicted_null)
                ++prf.fn;
            else if (p == item.label)
                ++prf.tp;
            else
                ++prf.fp;
        }
    }
    prf.precision = prf.tp + prf.fp == 0 ? 0.0
                                         : static_cast<double>(prf.tp) /
                                               static_cast<double>(prf.tp + prf.fp);
    prf.recall = prf.tp + prf.fn == 0
                     ? 0.0
                     : static_cast<double>(prf.tp) / static_cast<double>(prf.tp + prf.fn);
    prf.f1 = f1_score(prf.precision, prf.recall);
    return prf;
}

std::vector<std::string> annotate_markers(
    const std::vector<std::string>& tokens,
    const std::vector<std::pair<std::string, std::string>>& suffix_to_placeholder) {
    if (suffix_to_placeholder.empty()) throw Error("annotate_markers: empty suffix set");
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& tok : tokens) {
        const std::string* placeholder = nullptr;
        std::size_t best_len = 0;
        for (const auto& [suffix, ph] : suffix_to_placeholder) {
            if (suffix.empty()) throw Error("annotate_markers: empty suffix");
            if (tok.size() < suffix.size()) continue;
            if (tok.compare(tok.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
            const std::size_t len = uni::length(suffix);
            if (len > best_len) {
                best_len = len;
                placeholder = &ph;
            }
        }
        if (placeholder) out.push_back(*placeholder);
        out.push_back(tok);
    }
    return out;
}

VerseMap annotate_corpus_markers(
    const VerseMap& verses,
    const std::vector<std::pair<std::string, std::string>>& suffix_to_placeholder) {
    VerseMap out;
    for (const auto& [verse_id, verse] : verses) {
        VerseText v;
        v.verse_id = verse_id;
        v.tokens = annotate_markers(verse.tokens, suffix_to_placeholder);
        out.emplace(verse_id, std::move(v));
    }
    return out;
}

std::string format_prf_report(const PRF& prf) {
    std::string out;
    out += "tp=" + std::to_string(prf.tp) + "\n";
    out += "fp=" + std::to_string(prf.fp) + "\n";
    out += "tn=" + std::to_string(prf.tn) + "\n";
    out += "fn=" + std::to_string(prf.fn) + "\n";
    out += "precision=" + io::format_double(prf.precision) + "\n";
    out += "recall=" + io::format_double(prf.recall) + "\n";
    out += "f1=" + io::format_double(prf.f1) + "\n";
    out += "precision_reported=" + io::format_double(round_reported(prf.precision)) + "\n";
    out += "recall_reported=" + io::format_double(round_reported(prf.recall)) + "\n";
    out += "f1_reported=" + io::format_double(round_reported(prf.f1)) + "\n";
    return out;
}

} // namespace typomap
