#pragma once

#include "typomap/corpus.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace typomap {

inline constexpr int kNullIndex = -1;
inline constexpr const char* kNoMatch = "NOMATCH";

// One-to-one link within a verse; kNullIndex marks an unaligned side.
struct AlignmentLink {
    int src_idx = kNullIndex;
    int tgt_idx = kNullIndex;
};

using VerseLinks = std::map<std::string, std::vector<AlignmentLink>>; // verse_id -> links

enum class Direction { SrcToTgt, TgtToSrc };

// Lexical translation table t(out | cond). Rows are conditioning tokens
// (including the NULL row); each row sums to 1 over the observed outputs.
class LexTable {
public:
    static const std::string kNullToken;

    double prob(const std::string& cond, const std::string& out) const;
    void set(const std::string& cond, const std::string& out, double p);
    const std::unordered_map<std::string, std::unordered_map<std::string, double>>& rows() const {
        return rows_;
    }

private:
    std::unordered_map<std::string, std::unordered_map<std::string, double>> rows_;
};

// IBM-Model-1-style EM over the intersected verse set, NULL token on the
// conditioning side, uniform initialization over co-occurring pairs.
// `log_likelihoods`, when given, receives the data log-likelihood after
// each iteration (non-decreasing up to floating-point slack).
LexTable train_lex_table(const ParallelCorpus& corpus, const std::string& code,
                         Direction direction, int iters,
                         std::vector<double>* log_likelihoods = nullptr);

// Greedy bidirectional matching on score(i,j) = t_fwd(tgt_j|src_i) *
// t_rev(src_i|tgt_j). Pairs below `theta` stay unmatched; unmatched source
// tokens come back NULL-aligned. Ties break by smaller |i-j|, then smaller
// i, then smaller j.
std::vector<AlignmentLink> align_verse(const LexTable& fwd, const LexTable& rev,
                                       const VerseText& src, const VerseText& tgt,
                                       double theta = 1e-4);

// Alignments for every verse in the source/target intersection.
VerseLinks align_corpus(const ParallelCorpus& corpus, const std::string& code,
                        const LexTable& fwd, const LexTable& rev, double theta = 1e-4);

// Pharaoh format: one line per verse (in verse_ids order) of 0-based "i-j"
// pairs. Duplicate indices keep the first pair and log the rest; an index
// outside the verse is an error naming the verse.
VerseLinks import_pharaoh(const std::filesystem::path& path,
                          const std::vector<std::string>& verse_ids,
                          const std::map<std::string, int>& src_len,
                          const std::map<std::string, int>& tgt_len);

void export_pharaoh(const std::filesystem::path& path,
                    const std::vector<std::string>& verse_ids, const VerseLinks& links);

// One occurrence of the pivot with its per-language parallel label.
struct UsagePoint {
    std::string verse_id;
    int pivot_idx = 0;
    std::map<std::string, std::string> labels; // code -> token | placeholder | NOMATCH
};

// Emits one UsagePoint per (verse, pivot occurrence); the label for each
// language is the aligned target token, or NOMATCH when NULL-aligned or the
// verse is absent in that target. Throws when the pivot never occurs.
std::vector<UsagePoint> extract_usage_points(const ParallelCorpus& corpus,
                                             const std::map<std::string, VerseLinks>& links,
                                             const std::string& pivot);

} // namespace typomap
