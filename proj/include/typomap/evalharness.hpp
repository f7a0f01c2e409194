#pragma once

#include "typomap/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace typomap {

// Gold labels use two reserved values beside concrete tokens/placeholders:
// NULL_OK (correctly unaligned) and NULL_BAD (should have been aligned).
inline constexpr const char* kGoldNullOk = "NULL_OK";
inline constexpr const char* kGoldNullBad = "NULL_BAD";

struct GoldItem {
    std::string verse_id;
    int occurrence = 0; // 0-based pivot occurrence within the verse
    std::string label;  // concrete token, SS, DS, NULL_OK or NULL_BAD
};

struct GoldSample {
    std::vector<GoldItem> items; // unique by (verse_id, occurrence)
};

// TSV "verse_id<TAB>occurrence<TAB>gold_label", '#' comments.
GoldSample load_gold(const std::filesystem::path& path);
void write_gold(const std::filesystem::path& path, const GoldSample& gold);

struct PRF {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

double f1_score(double p, double r);

// Reported scores truncate toward zero at two decimals.
double round_reported(double v);

using PredictionMap = std::map<std::pair<std::string, int>, std::string>;

// Positive/negative semantics: a prediction equal to the gold label is a
// tp; predicting any label on NULL_OK gold or a wrong label is an fp;
// predicting NOMATCH where gold names a label (or NULL_BAD) is an fn;
// NOMATCH on NULL_OK is a tn. Every gold item must be covered.
PRF score_alignment(const PredictionMap& pred, const GoldSample& gold);

// Inserts a placeholder token immediately before any token ending with a
// configured suffix; the longest matching suffix wins.
std::vector<std::string> annotate_markers(const std::vector<std::string>& tokens,
                                          const std::vector<std::pair<std::string, std::string>>&
                                              suffix_to_placeholder);

VerseMap annotate_corpus_markers(const VerseMap& verses,
                                 const std::vector<std::pair<std::string, std::string>>&
                                     suffix_to_placeholder);

std::string format_prf_report(const PRF& prf);

} // namespace typomap
