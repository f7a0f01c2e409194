#include "typomap/ngrampipe.hpp"

#include "typomap/error.hpp"
#include "typomap/log.hpp"
#include "typomap/unicode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace typomap {

StopwordList StopwordList::default_list() {
    return from_words({"and", "behold", "then", "jesus", "herod", "peter", "paul"});
}

StopwordList StopwordList::from_words(const std::vector<std::string>& words) {
    if (words.empty()) throw Error("stopword list must be nonempty");
    StopwordList list;
    for (const std::string& w : words) {
        if (w.empty()) throw Error("stopword list contains an empty word");
        if (w != uni::lowercase(w)) throw Error("stopword '" + w + "' is not lowercase");
        list.words.insert(w);
    }
    return list;
}

std::optional<int> head_verb_index(const DependencyDoc& deps, const std::string& verse_id,
                                   int pivot_idx) {
    auto it = deps.sentences.find(verse_id);
    if (it == deps.sentences.end())
        throw Error("verse '" + verse_id + "' missing from dependency annotation");
    const DepSentence& sent = it->second;
    const int n = static_cast<int>(sent.forms.size());
    if (pivot_idx < 0 || pivot_idx >= n)
        throw Error("pivot index out of range in dependency annotation for verse '" + verse_id +
                    "'");
    int cur = pivot_idx;
    for (int steps = 0; steps < n; ++steps) {
        const int head = sent.heads[static_cast<std::size_t>(cur)];
        if (head == 0) return std::nullopt; // reached the root without a verb
        cur = head - 1;
        const std::string& pos = sent.upos[static_cast<std::size_t>(cur)];
        if (pos == "VERB" || pos == "AUX") return cur;
    }
    log::warn("dependency cycle in verse '" + verse_id + "'");
    return std::nullopt;
}

std::string head_verb_fallback(const DependencyDoc& deps, const VerseLinks& links,
                               const VerseText& tgt_verse, const std::string& verse_id,
                               int pivot_idx) {
    const std::optional<int> verb = head_verb_index(deps, verse_id, pivot_idx);
    if (!verb) return kNoMatch;
    auto verse_links = links.find(verse_id);
    if (verse_links == links.end()) return kNoMatch;
    for (const AlignmentLink& l : verse_links->second) {
        if (l.src_idx != *verb) continue;
        if (l.tgt_idx == kNullIndex) return kNoMatch;
        return tgt_verse.tokens[static_cast<std::size_t>(l.tgt_idx)];
    }
    return kNoMatch;
}

std::set<std::string> prune_stopword_echo(const std::vector<AssocEvent>& base_events,
                                          const std::vector<std::string>& source_tokens,
                                          const StopwordList& stopwords, double epsilon) {
    if (base_events.size() != source_tokens.size())
        throw Error("prune_stopword_echo: event/token arity mismatch");
    std::set<std::string> pruned;
    std::vector<AssocEvent> events = base_events;
    for (const std::string& stop : stopwords.words) {
        std::set<std::string> unit_set;
        bool stop_seen = false;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const bool is_stop = source_tokens[e] == stop;
            events[e].pivot = is_stop;
            if (is_stop) {
                stop_seen = true;
                for (const std::string& w : events[e].words) unit_set.insert(w);
            }
        }
        if (!stop_seen || unit_set.empty()) continue;
        const std::vector<std::string> units(unit_set.begin(), unit_set.end());
        for (const AssociationScore& s : score_units(events, units, Counting::Token)) {
            if (s.p_value < epsilon) {
                pruned.insert(s.unit);
                log::debug("pruned '" + s.unit + "' (echoes stopword '" + stop + "')");
            }
        }
    }
    return pruned;
}

std::set<std::string> keep_lexified(const std::vector<AssociationScore>& scores, double epsilon) {
    std::set<std::string> kept;
    double max_chi2 = -1.0;
    for (const AssociationScore& s : scores) max_chi2 = std::max(max_chi2, s.chi2);
    for (const AssociationScore& s : scores)
        if (s.chi2 == max_chi2 && s.p_value < epsilon) kept.insert(s.unit);
    return kept;
}

std::vector<std::string> enumerate_grams(const std::vector<std::string>& tokens, int nmin,
                                         int nmax) {
    std::set<std::string> grams;
    for (const std::string& tok : tokens) {
        const std::vector<char32_t> cps = uni::decode_utf8(tok);
        const int n = static_cast<int>(cps.size());
        for (int len = nmin; len <= std::min(nmax, n); ++len) {
            for (int s = 0; s + len <= n; ++s) {
                std::string g;
                for (int k = s; k < s + len; ++k) uni::append_utf8(g, cps[static_cast<std::size_t>(k)]);
                grams.insert(std::move(g));
            }
        }
    }
    return {grams.begin(), grams.end()};
}

std::vector<NgramCandidate> mine_ngrams(const std::vector<std::string>& candidate_tokens,
                                        const std::vector<AssocEvent>& events, int nmin,
                                        int nmax) {
    const std::vector<std::string> universe = enumerate_grams(candidate_tokens, nmin, nmax);
    std::vector<NgramCandidate> out;
    for (AssociationScore& s : score_units(events, universe, Counting::Substring)) {
        NgramCandidate c;
        c.gram = s.unit;
        c.score = std::move(s);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<NgramCandidate> select_candidates(std::vector<NgramCandidate> scored, int top_by_chi2,
                                              int top_by_cooccurrence) {
    std::sort(scored.begin(), scored.end(), [](const NgramCandidate& x, const NgramCandidate& y) {
        if (x.score.chi2 != y.score.chi2) return x.score.chi2 > y.score.chi2;
        if (x.score.cooccurrence != y.score.cooccurrence)
            return x.score.cooccurrence > y.score.cooccurrence;
        return x.gram < y.gram;
    });
    if (static_cast<int>(scored.size()) > top_by_chi2)
        scored.resize(static_cast<std::size_t>(top_by_chi2));
    std::sort(scored.begin(), scored.end(), [](const NgramCandidate& x, const NgramCandidate& y) {
        if (x.score.cooccurrence != y.score.cooccurrence)
            return x.score.cooccurrence > y.score.cooccurrence;
        if (x.score.chi2 != y.score.chi2) return x.score.chi2 > y.score.chi2;
        return x.gram < y.gram;
    });
    if (static_cast<int>(scored.size()) > top_by_cooccurrence)
        scored.resize(static_cast<std::size_t>(top_by_cooccurrence));
    return scored;
}

namespace {

using FeatureVec = std::unordered_map<std::string, double>;

// sklearn-flavored TF-IDF: raw counts, idf = ln((1+n)/(1+df)) + 1, then L2
// normalization, so cosine distance is 1 - dot.
std::vector<FeatureVec> tfidf_vectors(const std::vector<std::string>& docs, int feat_min,
                                      int feat_max) {
    std::vector<FeatureVec> tfs(docs.size());
    std::unordered_map<std::string, int> df;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::vector<char32_t> cps = uni::decode_utf8(docs[i]);
        const int n = static_cast<int>(cps.size());
        for (int len = feat_min; len <= std::min(feat_max, n); ++len)
            for (int s = 0; s + len <= n; ++s) {
                std::string f;
                for (int k = s; k < s + len; ++k)
                    uni::append_utf8(f, cps[static_cast<std::size_t>(k)]);
                tfs[i][f] += 1.0;
            }
        for (const auto& [f, cnt] : tfs[i]) df[f] += 1;
    }
    const double n_docs = static_cast<double>(docs.size());
    for (FeatureVec& v : tfs) {
        double norm = 0.0;
        for (auto& [f, w] : v) {
            w *= std::log((1.0 + n_docs) / (1.0 + df[f])) + 1.0;
            norm += w * w;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (auto& [f, w] : v) w /= norm;
    }
    return tfs;
}

double cosine_distance(const FeatureVec& a, const FeatureVec& b) {
    const FeatureVec& small = a.size() <= b.size() ? a : b;
    const FeatureVec& large = a.size() <= b.size() ? b : a;
    double dot = 0.0;
    for (const auto& [f, w] : small) {
        auto it = large.find(f);
        if (it != large.end()) dot += w * it->second;
    }
    return 1.0 - dot;
}

} // namespace

std::vector<NgramCluster> cluster_allomorphs(const std::vector<NgramCandidate>& grams, double eps,
                                             int min_pts, int feat_min, int feat_max) {
    if (grams.empty()) return {};
    // set semantics: duplicates collapse onto the first occurrence
    std::vector<NgramCandidate> uniq;
    for (const NgramCandidate& g : grams) {
        bool seen = false;
        for (const NgramCandidate& u : uniq)
            if (u.gram == g.gram) {
                seen = true;
                break;
            }
        if (!seen) uniq.push_back(g);
    }
    const std::size_t n = uniq.size();
    std::vector<std::string> docs(n);
    for (std::size_t i = 0; i < n; ++i) docs[i] = uniq[i].gram;
    const std::vector<FeatureVec> vecs = tfidf_vectors(docs, feat_min, feat_max);

    std::vector<std::vector<std::size_t>> nbrs(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (cosine_distance(vecs[i], vecs[j]) <= eps) nbrs[i].push_back(j);

    // classic DBSCAN; the neighborhood count includes the point itself
    constexpr int kUnvisited = -2, kNoise = -1;
    std::vector<int> assign(n, kUnvisited);
    int next_cluster = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] != kUnvisited) continue;
        if (static_cast<int>(nbrs[i].size()) < min_pts) {
            assign[i] = kNoise;
            continue;
        }
        const int cid = next_cluster++;
        assign[i] = cid;
        std::vector<std::size_t> frontier = nbrs[i];
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            const std::size_t q = frontier[k];
            if (assign[q] == kNoise) assign[q] = cid; // border point
            if (assign[q] != kUnvisited) continue;
            assign[q] = cid;
            if (static_cast<int>(nbrs[q].size()) >= min_pts)
                frontier.insert(frontier.end(), nbrs[q].begin(), nbrs[q].end());
        }
    }
    // noise points become singleton clusters
    for (std::size_t i = 0; i < n; ++i)
        if (assign[i] == kNoise) assign[i] = next_cluster++;

    std::vector<NgramCluster> clusters(static_cast<std::size_t>(next_cluster));
    for (std::size_t i = 0; i < n; ++i) {
        NgramCluster& c = clusters[static_cast<std::size_t>(assign[i])];
        c.members.push_back(uniq[i].gram);
        c.total_cooccurrence += uniq[i].score.cooccurrence;
    }
    for (NgramCluster& c : clusters) std::sort(c.members.begin(), c.members.end());
    std::sort(clusters.begin(), clusters.end(), [](const NgramCluster& x, const NgramCluster& y) {
        if (x.total_cooccurrence != y.total_cooccurrence)
            return x.total_cooccurrence > y.total_cooccurrence;
        return x.members.front() < y.members.front();
    });
    for (std::size_t k = 0; k < clusters.size(); ++k)
        clusters[k].label = "ngram_" + std::to_string(k + 1);
    return clusters;
}

std::vector<std::string> relabel_usage_points(
    const std::vector<UsagePoint>& points, const std::string& code,
    const std::vector<std::vector<std::string>>& candidate_tokens_per_point,
    const std::vector<NgramCluster>& clusters, const std::set<std::string>& lexified) {
    if (points.size() != candidate_tokens_per_point.size())
        throw Error("relabel_usage_points: candidate arity mismatch");
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const std::string& aligned = points[p].labels.at(code);
        if (lexified.count(aligned)) {
            labels.push_back(aligned);
            continue;
        }
        // longest containing member wins; ties by total cooccurrence, then
        // by cluster number (already ordered)
        std::size_t best_len = 0;
        const NgramCluster* best = nullptr;
        for (const NgramCluster& cluster : clusters) {
            for (const std::string& member : cluster.members) {
                const std::size_t len = uni::length(member);
                bool contains = false;
                for (const std::string& tok : candidate_tokens_per_point[p])
                    if (tok.find(member) != std::string::npos) {
                        contains = true;
                        break;
                    }
                if (!contains) continue;
                if (len > best_len) {
                    best_len = len;
                    best = &cluster;
                }
            }
        }
        labels.push_back(best ? best->label : std::string(kNoMatch));
    }
    return labels;
}

LanguagePipelineResult run_ngram_pipeline(const ParallelCorpus& corpus, const std::string& code,
                                          const VerseLinks& links, const DependencyDoc& deps,
                                          const std::vector<UsagePoint>& points,
                                          const NgramParams& params) {
    auto target_it = corpus.targets.find(code);
    if (target_it == corpus.targets.end()) throw Error("unknown language code: " + code);
    const TargetCorpus& target = target_it->second;

    // one event per source-token occurrence over the intersected verse set
    std::vector<AssocEvent> base_events;
    std::vector<std::string> source_tokens;
    for (const auto& [verse_id, src_verse] : corpus.source) {
        auto tgt = target.verses.find(verse_id);
        if (tgt == target.verses.end()) continue;
        auto verse_links = links.find(verse_id);
        for (int i = 0; i < static_cast<int>(src_verse.tokens.size()); ++i) {
            AssocEvent ev;
            if (verse_links != links.end()) {
                for (const AlignmentLink& l : verse_links->second) {
                    if (l.src_idx != i || l.tgt_idx == kNullIndex) continue;
                    ev.words.push_back(tgt->second.tokens[static_cast<std::size_t>(l.tgt_idx)]);
                    break;
                }
            }
            base_events.push_back(std::move(ev));
            source_tokens.push_back(src_verse.tokens[static_cast<std::size_t>(i)]);
        }
    }

    LanguagePipelineResult result;
    result.pruned =
        prune_stopword_echo(base_events, source_tokens, params.stopwords, params.epsilon);

    // step 2: token-level association between the pivot and aligned tokens
    std::vector<AssocEvent> pivot_events = base_events;
    std::set<std::string> aligned_to_pivot;
    for (std::size_t e = 0; e < pivot_events.size(); ++e) {
        pivot_events[e].pivot = source_tokens[e] == params.pivot;
        if (pivot_events[e].pivot)
            for (const std::string& w : pivot_events[e].words)
                if (!result.pruned.count(w)) aligned_to_pivot.insert(w);
    }
    const std::vector<std::string> token_units(aligned_to_pivot.begin(), aligned_to_pivot.end());
    result.token_scores = score_units(pivot_events, token_units, Counting::Token);
    result.lexified = keep_lexified(result.token_scores, params.epsilon);

    // step 3 + 4 candidates per usage point for this language
    std::vector<std::vector<std::string>> candidates_per_point(points.size());
    std::set<std::string> candidate_universe;
    std::unordered_map<std::string, std::size_t> point_by_key;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const UsagePoint& up = points[p];
        point_by_key.emplace(up.verse_id + "\t" + std::to_string(up.pivot_idx), p);
        auto tgt = target.verses.find(up.verse_id);
        if (tgt == target.verses.end()) continue; // verse absent in this target
        auto eligible = [&](const std::string& tok) {
            return tok != kNoMatch && !result.pruned.count(tok) && !result.lexified.count(tok);
        };
        const std::string& aligned = up.labels.at(code);
        if (eligible(aligned)) candidates_per_point[p].push_back(aligned);
        const std::string head_tok =
            head_verb_fallback(deps, links, tgt->second, up.verse_id, up.pivot_idx);
        if (eligible(head_tok) && head_tok != aligned) candidates_per_point[p].push_back(head_tok);
        for (const std::string& tok : candidates_per_point[p]) candidate_universe.insert(tok);
    }

    // step-4 events: pivot occurrences carry their candidate tokens
    std::vector<AssocEvent> gram_events = std::move(pivot_events);
    {
        std::size_t event_idx = 0;
        for (const auto& [verse_id, src_verse] : corpus.source) {
            if (!target.verses.count(verse_id)) continue;
            for (int i = 0; i < static_cast<int>(src_verse.tokens.size()); ++i, ++event_idx) {
                if (!gram_events[event_idx].pivot) continue;
                auto hit = point_by_key.find(verse_id + "\t" + std::to_string(i));
                gram_events[event_idx].words =
                    hit == point_by_key.end() ? std::vector<std::string>{}
                                              : candidates_per_point[hit->second];
            }
        }
    }

    const std::vector<std::string> universe_tokens(candidate_universe.begin(),
                                                   candidate_universe.end());
    std::vector<NgramCandidate> scored =
        mine_ngrams(universe_tokens, gram_events, params.ngram_min, params.ngram_max);
    result.selected =
        select_candidates(std::move(scored), params.top_by_chi2, params.top_by_cooccurrence);
    result.clusters = cluster_allomorphs(result.selected, params.dbscan_eps, params.dbscan_min_pts,
                                         params.feat_min, params.feat_max);
    result.labels =
        relabel_usage_points(points, code, candidates_per_point, result.clusters, result.lexified);
    return result;
}

} // namespace typomap
