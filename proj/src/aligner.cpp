#include "typomap/aligner.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"
#include "typomap/log.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace typomap {

const std::string LexTable::kNullToken = "<NULL>";

double LexTable::prob(const std::string& cond, const std::string& out) const {
    auto row = rows_.find(cond);
    if (row == rows_.end()) return 0.0;
    auto cell = row->second.find(out);
    return cell == row->second.end() ? 0.0 : cell->second;
}

void LexTable::set(const std::string& cond, const std::string& out, double p) {
    rows_[cond][out] = p;
}

namespace {

struct SentencePair {
    const std::vector<std::string>* cond; // conditioning side (NULL added implicitly)
    const std::vector<std::string>* out;
};

std::vector<SentencePair> gather_pairs(const ParallelCorpus& corpus, const std::string& code,
                                       Direction direction) {
    auto it = corpus.targets.find(code);
    if (it == corpus.targets.end()) throw Error("unknown language code: " + code);
    std::vector<SentencePair> pairs;
    for (const auto& [verse_id, src_verse] : corpus.source) {
        auto tgt = it->second.verses.find(verse_id);
        if (tgt == it->second.verses.end()) continue;
        if (direction == Direction::SrcToTgt)
            pairs.push_back({&src_verse.tokens, &tgt->second.tokens});
        else
            pairs.push_back({&tgt->second.tokens, &src_verse.tokens});
    }
    return pairs;
}

} // namespace

LexTable train_lex_table(const ParallelCorpus& corpus, const std::string& code,
                         Direction direction, int iters,
                         std::vector<double>* log_likelihoods) {
    if (iters < 1) throw Error("train_lex_table: iters must be >= 1");
    const std::vector<SentencePair> pairs = gather_pairs(corpus, code, direction);
    if (pairs.empty()) throw Error("train_lex_table: empty verse intersection for " + code);

    // uniform init over co-occurring pairs; the NULL row co-occurs with all
    std::unordered_map<std::string, std::set<std::string>> cooc;
    for (const SentencePair& p : pairs) {
        for (const std::string& out : *p.out) {
            cooc[LexTable::kNullToken].insert(out);
            for (const std::string& cond : *p.cond) cooc[cond].insert(out);
        }
    }
    LexTable table;
    for (const auto& [cond, outs] : cooc) {
        const double u = 1.0 / static_cast<double>(outs.size());
        for (const std::string& out : outs) table.set(cond, out, u);
    }

    if (log_likelihoods) log_likelihoods->clear();
    for (int iter = 0; iter < iters; ++iter) {
        std::unordered_map<std::string, std::unordered_map<std::string, double>> counts;
        double ll = 0.0;
        for (const SentencePair& p : pairs) {
            const std::size_t m = p.cond->size() + 1; // + NULL
            for (const std::string& out : *p.out) {
                double z = table.prob(LexTable::kNullToken, out);
                for (const std::string& cond : *p.cond) z += table.prob(cond, out);
                if (z <= 0.0) continue;
                ll += std::log(z / static_cast<double>(m));
                const double p_null = table.prob(LexTable::kNullToken, out) / z;
                counts[LexTable::kNullToken][out] += p_null;
                for (const std::string& cond : *p.cond)
                    counts[cond][out] += table.prob(cond, out) / z;
            }
        }
        LexTable next;
        for (const auto& [cond, row] : counts) {
            double tot = 0.0;
            for (const auto& [out, v] : row) tot += v;
            for (const auto& [out, v] : row) next.set(cond, out, v / tot);
        }
        table = std::move(next);
        if (log_likelihoods) log_likelihoods->push_back(ll);
    }
    return table;
}

std::vector<AlignmentLink> align_verse(const LexTable& fwd, const LexTable& rev,
                                       const VerseText& src, const VerseText& tgt,
                                       double theta) {
    const int ns = static_cast<int>(src.tokens.size());
    const int nt = static_cast<int>(tgt.tokens.size());
    struct Cand {
        double score;
        int i, j;
    };
    std::vector<Cand> cands;
    cands.reserve(static_cast<std::size_t>(ns) * static_cast<std::size_t>(nt));
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j) {
            const double s =
                fwd.prob(src.tokens[i], tgt.tokens[j]) * rev.prob(tgt.tokens[j], src.tokens[i]);
            if (s > theta) cands.push_back({s, i, j});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.score != y.score) return x.score > y.score;
        const int dx = std::abs(x.i - x.j), dy = std::abs(y.i - y.j);
        if (dx != dy) return dx < dy;
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    });
    std::vector<int> src_to(ns, kNullIndex);
    std::vector<bool> tgt_used(static_cast<std::size_t>(nt), false);
    std::vector<bool> src_used(static_cast<std::size_t>(ns), false);
    for (const Cand& c : cands) {
        if (src_used[c.i] || tgt_used[c.j]) continue;
        src_used[c.i] = true;
        tgt_used[c.j] = true;
        src_to[c.i] = c.j;
    }
    std::vector<AlignmentLink> links;
    links.reserve(static_cast<std::size_t>(ns));
    for (int i = 0; i < ns; ++i) links.push_back({i, src_to[i]});
    return links;
}

VerseLinks align_corpus(const ParallelCorpus& corpus, const std::string& code,
                        const LexTable& fwd, const LexTable& rev, double theta) {
    auto it = corpus.targets.find(code);
    if (it == corpus.targets.end()) throw Error("unknown language code: " + code);
    VerseLinks links;
    for (const auto& [verse_id, src_verse] : corpus.source) {
        auto tgt = it->second.verses.find(verse_id);
        if (tgt == it->second.verses.end()) continue;
        links.emplace(verse_id, align_verse(fwd, rev, src_verse, tgt->second, theta));
    }
    return links;
}

VerseLinks import_pharaoh(const std::filesystem::path& path,
                          const std::vector<std::string>& verse_ids,
                          const std::map<std::string, int>& src_len,
                          const std::map<std::string, int>& tgt_len) {
    const std::vector<std::string> lines = io::split_lines(io::read_file(path));
    if (lines.size() != verse_ids.size())
        throw Error(path.string() + ": expected " + std::to_string(verse_ids.size()) +
                    " lines, found " + std::to_string(lines.size()));
    VerseLinks out;
    std::size_t dropped = 0;
    for (std::size_t k = 0; k < verse_ids.size(); ++k) {
        const std::string& verse_id = verse_ids[k];
        const int ns = src_len.at(verse_id);
        const int nt = tgt_len.at(verse_id);
        std::vector<AlignmentLink> links;
        std::set<int> used_src, used_tgt;
        for (const std::string& pair : io::split_whitespace(lines[k])) {
            std::size_t dash = pair.find('-');
            if (dash == std::string::npos)
                throw Error(path.string() + ": verse " + verse_id + ": malformed pair '" + pair +
                            "'");
            const int i = static_cast<int>(io::parse_int(pair.substr(0, dash)));
            const int j = static_cast<int>(io::parse_int(pair.substr(dash + 1)));
            if (i < 0 || i >= ns || j < 0 || j >= nt)
                throw Error(path.string() + ": verse " + verse_id + ": index pair " + pair +
                            " out of range (" + std::to_string(ns) + "x" + std::to_string(nt) +
                            ")");
            if (used_src.count(i) || used_tgt.count(j)) {
                ++dropped;
                log::warn(path.string() + ": verse " + verse_id + ": pair " + pair +
                          " violates one-to-one, dropped");
                continue;
            }
            used_src.insert(i);
            used_tgt.insert(j);
            links.push_back({i, j});
        }
        // fill explicit NULL links for unaligned source tokens
        std::vector<AlignmentLink> full;
        full.reserve(static_cast<std::size_t>(ns));
        for (int i = 0; i < ns; ++i) {
            auto hit = std::find_if(links.begin(), links.end(),
                                    [i](const AlignmentLink& l) { return l.src_idx == i; });
            full.push_back(hit != links.end() ? *hit : AlignmentLink{i, kNullIndex});
        }
        out.emplace(verse_id, std::move(full));
    }
    if (dropped > 0)
        log::info(path.string() + ": dropped " + std::to_string(dropped) +
                  " pair(s) violating one-to-one");
    return out;
}

void export_pharaoh(const std::filesystem::path& path,
                    const std::vector<std::string>& verse_ids, const VerseLinks& links) {
    std::string out;
    for (const std::string& verse_id : verse_ids) {
        auto it = links.find(verse_id);
        bool first = true;
        if (it != links.end()) {
            for (const AlignmentLink& l : it->second) {
                if (l.src_idx == kNullIndex || l.tgt_idx == kNullIndex) continue;
                if (!first) out += ' ';
                out += std::to_string(l.src_idx);
                out += '-';
                out += std::to_string(l.tgt_idx);
                first = false;
            }
        }
        out += '\n';
    }
    io::write_file(path, out);
}

std::vector<UsagePoint> extract_usage_points(const ParallelCorpus& corpus,
                                             const std::map<std::string, VerseLinks>& links,
                                             const std::string& pivot) {
    std::vector<UsagePoint> points;
    for (const auto& [verse_id, verse] : corpus.source) {
        for (int i = 0; i < static_cast<int>(verse.tokens.size()); ++i) {
            if (verse.tokens[i] != pivot) continue;
            UsagePoint up;
            up.verse_id = verse_id;
            up.pivot_idx = i;
            for (const auto& [code, target] : corpus.targets) {
                std::string label = kNoMatch;
                auto lang_links = links.find(code);
                if (lang_links != links.end()) {
                    auto verse_links = lang_links->second.find(verse_id);
                    auto tgt_verse = target.verses.find(verse_id);
                    if (verse_links != lang_links->second.end() &&
                        tgt_verse != target.verses.end()) {
                        for (const AlignmentLink& l : verse_links->second) {
                            if (l.src_idx != i || l.tgt_idx == kNullIndex) continue;
                            label = tgt_verse->second.tokens[static_cast<std::size_t>(l.tgt_idx)];
                            break;
                        }
                    }
                }
                up.labels.emplace(code, std::move(label));
            }
            points.push_back(std::move(up));
        }
    }
    if (points.empty()) throw Error("pivot token '" + pivot + "' absent from the source corpus");
    return points;
}

} // namespace typomap
