#pragma once

#include "typomap/aligner.hpp"
#include "typomap/assoc.hpp"
#include "typomap/conllu.hpp"
#include "typomap/corpus.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace typomap {

struct StopwordList {
    std::set<std::string> words; // all lowercase, nonempty

    static StopwordList default_list();
    static StopwordList from_words(const std::vector<std::string>& words);
};

struct NgramCandidate {
    std::string gram; // 2..9 scalar values
    AssociationScore score;
};

struct NgramCluster {
    std::string label; // "ngram_K", numbered by descending total cooccurrence
    std::vector<std::string> members;
    std::int64_t total_cooccurrence = 0;
};

struct NgramParams {
    std::string pivot = "when";
    StopwordList stopwords = StopwordList::default_list();
    double epsilon = 1e-10; // operationalized "p-value of 0"
    int ngram_min = 2;
    int ngram_max = 9;
    int top_by_chi2 = 200;
    int top_by_cooccurrence = 20;
    double dbscan_eps = 0.5;
    int dbscan_min_pts = 2;
    // TF-IDF analyzer over each gram's own character n-grams
    int feat_min = 1;
    int feat_max = 2;
};

// Follows head pointers upward from the pivot's head until a verbal token
// (UPOS VERB or AUX) or the root. Returns the source token index of that
// verb, or nullopt when the chain ends without one.
std::optional<int> head_verb_index(const DependencyDoc& deps, const std::string& verse_id,
                                   int pivot_idx);

// Target token aligned to the pivot's head verb, or NOMATCH when the verb
// is NULL-aligned or absent. Throws when the verse is missing from deps.
std::string head_verb_fallback(const DependencyDoc& deps, const VerseLinks& links,
                               const VerseText& tgt_verse, const std::string& verse_id,
                               int pivot_idx);

// Step 1: target tokens whose association with any stopword has
// p-value < epsilon; removed from every downstream candidate set.
std::set<std::string> prune_stopword_echo(const std::vector<AssocEvent>& base_events,
                                          const std::vector<std::string>& source_tokens,
                                          const StopwordList& stopwords, double epsilon);

// Step 2: all tokens tied at the maximum chi2, kept iff p-value < epsilon.
std::set<std::string> keep_lexified(const std::vector<AssociationScore>& scores, double epsilon);

// Distinct contiguous scalar-value substrings of lengths [nmin, nmax] over
// all tokens, sorted lexicographically.
std::vector<std::string> enumerate_grams(const std::vector<std::string>& tokens, int nmin,
                                         int nmax);

// Step 4: scores every distinct substring of the candidate tokens with
// substring-counting chi-square over the event list. Zero-marginal grams
// are skipped.
std::vector<NgramCandidate> mine_ngrams(const std::vector<std::string>& candidate_tokens,
                                        const std::vector<AssocEvent>& events, int nmin, int nmax);

// Step 5: top `top_by_chi2` by chi2 (ties: higher cooccurrence, then gram),
// re-sorted by cooccurrence (ties: higher chi2, then gram), first
// `top_by_cooccurrence` returned.
std::vector<NgramCandidate> select_candidates(std::vector<NgramCandidate> scored,
                                              int top_by_chi2 = 200,
                                              int top_by_cooccurrence = 20);

// Step 6: TF-IDF over each gram's own character [feat_min, feat_max]-grams,
// DBSCAN with cosine distance; noise points become singleton clusters;
// labels ngram_1..N by descending total cooccurrence (ties by smallest
// member).
std::vector<NgramCluster> cluster_allomorphs(const std::vector<NgramCandidate>& grams, double eps,
                                             int min_pts, int feat_min = 1, int feat_max = 2);

// Step 7: lexified aligned token wins; otherwise the cluster whose longest
// member is contained in an eligible candidate token (ties: higher total
// cooccurrence, then label number); otherwise NOMATCH.
std::vector<std::string> relabel_usage_points(
    const std::vector<UsagePoint>& points, const std::string& code,
    const std::vector<std::vector<std::string>>& candidate_tokens_per_point,
    const std::vector<NgramCluster>& clusters, const std::set<std::string>& lexified);

struct LanguagePipelineResult {
    std::set<std::string> pruned;
    std::vector<AssociationScore> token_scores; // step-2 scoring of aligned tokens
    std::set<std::string> lexified;
    std::vector<NgramCandidate> selected; // step-5 output
    std::vector<NgramCluster> clusters;
    std::vector<std::string> labels; // parallel to the usage-point list
};

// Runs steps 1-7 for one language. `deps` annotates the source corpus;
// `links` are this language's verse alignments; `points` span the whole
// corpus (labels for other languages are left untouched).
LanguagePipelineResult run_ngram_pipeline(const ParallelCorpus& corpus, const std::string& code,
                                          const VerseLinks& links, const DependencyDoc& deps,
                                          const std::vector<UsagePoint>& points,
                                          const NgramParams& params);

} // namespace typomap
