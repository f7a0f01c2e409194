#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "typomap/aligner.hpp"
#include "typomap/error.hpp"
#include "typomap/io.hpp"
#include "typomap/log.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

using namespace typomap;

namespace {
struct Quiet {
    Quiet() { log::set_level(log::Level::Quiet); }
} quiet_logs;

ParallelCorpus corpus_from_pairs(
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs,
    const std::string& code = "tgt") {
    ParallelCorpus corpus;
    TargetCorpus target;
    target.meta = {code, code, 0, 0};
    int n = 0;
    for (const auto& [src, tgt] : pairs) {
        const std::string id = "v" + std::to_string(100 + n++);
        corpus.source.emplace(id, VerseText{id, src});
        target.verses.emplace(id, VerseText{id, tgt});
    }
    corpus.targets.emplace(code, std::move(target));
    return corpus;
}

// independent Model-1 EM transcription over ordered maps
std::map<std::string, std::map<std::string, double>> em_oracle(
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs,
    int iters) {
    const std::string null_tok = LexTable::kNullToken;
    std::map<std::string, std::set<std::string>> cooc;
    for (const auto& [src, tgt] : pairs)
        for (const auto& t : tgt) {
            cooc[null_tok].insert(t);
            for (const auto& s : src) cooc[s].insert(t);
        }
    std::map<std::string, std::map<std::string, double>> table;
    for (const auto& [s, ts] : cooc)
        for (const auto& t : ts) table[s][t] = 1.0 / static_cast<double>(ts.size());
    for (int it = 0; it < iters; ++it) {
        std::map<std::string, std::map<std::string, double>> counts;
        for (const auto& [src, tgt] : pairs) {
            std::vector<std::string> conds = src;
            conds.push_back(null_tok);
            for (const auto& t : tgt) {
                double z = 0.0;
                for (const auto& s : conds) {
                    auto row = table.find(s);
                    if (row != table.end()) {
                        auto cell = row->second.find(t);
                        if (cell != row->second.end()) z += cell->second;
                    }
                }
                for (const auto& s : conds) {
                    auto row = table.find(s);
                    if (row == table.end()) continue;
                    auto cell = row->second.find(t);
                    if (cell != row->second.end()) counts[s][t] += cell->second / z;
                }
            }
        }
        table.clear();
        for (const auto& [s, row] : counts) {
            double tot = 0.0;
            for (const auto& [t, v] : row) tot += v;
            for (const auto& [t, v] : row) table[s][t] = v / tot;
        }
    }
    return table;
}

const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> kTwoVerse = {
    {{"when", "he", "came"}, {"cuando", "llego"}},
    {{"he", "came"}, {"llego"}},
};
} // namespace

TEST_CASE("EM matches an independent hand transcription") {
    const ParallelCorpus corpus = corpus_from_pairs(kTwoVerse);
    for (int iters : {1, 2, 5}) {
        const LexTable table = train_lex_table(corpus, "tgt", Direction::SrcToTgt, iters);
        const auto oracle = em_oracle(kTwoVerse, iters);
        for (const auto& [cond, row] : oracle)
            for (const auto& [out, p] : row)
                CHECK(table.prob(cond, out) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("exclusively co-occurring pair converges to high probability") {
    const ParallelCorpus corpus = corpus_from_pairs(kTwoVerse);
    const LexTable table = train_lex_table(corpus, "tgt", Direction::SrcToTgt, 10);
    CHECK(table.prob("when", "cuando") > 0.95);
}

TEST_CASE("single verse: conditioned row beats the NULL row after one step") {
    const ParallelCorpus corpus = corpus_from_pairs({{{"a"}, {"x"}}});
    const LexTable table = train_lex_table(corpus, "tgt", Direction::SrcToTgt, 1);
    CHECK(table.prob("a", "x") >= table.prob(LexTable::kNullToken, "x"));
}

TEST_CASE("iters = 0 is rejected") {
    const ParallelCorpus corpus = corpus_from_pairs(kTwoVerse);
    CHECK_THROWS_AS(train_lex_table(corpus, "tgt", Direction::SrcToTgt, 0), Error);
}

TEST_CASE("empty intersection is rejected") {
    ParallelCorpus corpus;
    corpus.source.emplace("v1", VerseText{"v1", {"a"}});
    TargetCorpus t;
    t.meta = {"tgt", "tgt", 0, 0};
    t.verses.emplace("v9", VerseText{"v9", {"x"}});
    corpus.targets.emplace("tgt", std::move(t));
    CHECK_THROWS_AS(train_lex_table(corpus, "tgt", Direction::SrcToTgt, 5), Error);
}

TEST_CASE("rows are probability distributions after every iteration") {
    const ParallelCorpus corpus = corpus_from_pairs(kTwoVerse);
    for (int iters = 1; iters <= 6; ++iters) {
        for (Direction dir : {Direction::SrcToTgt, Direction::TgtToSrc}) {
            const LexTable table = train_lex_table(corpus, "tgt", dir, iters);
            for (const auto& [cond, row] : table.rows()) {
                double sum = 0.0;
                for (const auto& [out, p] : row) sum += p;
                CHECK(std::fabs(sum - 1.0) < 1e-9);
            }
        }
    }
}

TEST_CASE("training log-likelihood is non-decreasing") {
    const ParallelCorpus corpus = corpus_from_pairs(
        {{{"when", "he", "came"}, {"cuando", "el", "llego"}},
         {{"he", "saw", "her"}, {"el", "la", "vio"}},
         {{"when", "she", "saw"}, {"cuando", "ella", "vio"}},
         {{"she", "came"}, {"ella", "llego"}}});
    std::vector<double> ll;
    train_lex_table(corpus, "tgt", Direction::SrcToTgt, 15, &ll);
    REQUIRE(ll.size() == 15);
    for (std::size_t i = 1; i < ll.size(); ++i) CHECK(ll[i] >= ll[i - 1] - 1e-9);
}

TEST_CASE("bijective vocabulary aligns perfectly") {
    // 6 source types map 1:1 onto 6 target types; verses permute them
    const std::vector<std::string> src_vocab = {"s0", "s1", "s2", "s3", "s4", "s5"};
    const std::vector<std::string> tgt_vocab = {"t0", "t1", "t2", "t3", "t4", "t5"};
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
    oracles::Rng rng(17);
    for (int v = 0; v < 40; ++v) {
        std::vector<int> idx = {0, 1, 2, 3, 4, 5};
        // deterministic shuffle
        for (int k = 5; k > 0; --k) std::swap(idx[k], idx[rng.below(k + 1)]);
        const int len = 3 + static_cast<int>(rng.below(3));
        std::vector<std::string> src, tgt;
        for (int k = 0; k < len; ++k) src.push_back(src_vocab[idx[k]]);
        // target order partially permuted
        std::vector<int> tsel(idx.begin(), idx.begin() + len);
        if (len > 1) std::swap(tsel[0], tsel[len - 1]);
        for (int k = 0; k < len; ++k) tgt.push_back(tgt_vocab[tsel[k]]);
        pairs.push_back({src, tgt});
    }
    const ParallelCorpus corpus = corpus_from_pairs(pairs);
    const LexTable fwd = train_lex_table(corpus, "tgt", Direction::SrcToTgt, 10);
    const LexTable rev = train_lex_table(corpus, "tgt", Direction::TgtToSrc, 10);

    int total = 0, correct = 0;
    for (const auto& [verse_id, src_verse] : corpus.source) {
        const VerseText& tgt_verse = corpus.targets.at("tgt").verses.at(verse_id);
        const auto links = align_verse(fwd, rev, src_verse, tgt_verse);
        std::set<int> used_src, used_tgt;
        for (const AlignmentLink& l : links) {
            CHECK(used_src.insert(l.src_idx).second); // one-to-one by construction
            if (l.tgt_idx != kNullIndex) CHECK(used_tgt.insert(l.tgt_idx).second);
            if (l.tgt_idx == kNullIndex) continue;
            ++total;
            const std::string& s = src_verse.tokens[static_cast<std::size_t>(l.src_idx)];
            const std::string& t = tgt_verse.tokens[static_cast<std::size_t>(l.tgt_idx)];
            if (s.substr(1) == t.substr(1)) ++correct;
        }
        CHECK(links.size() == src_verse.tokens.size()); // no unlinked source tokens
    }
    CHECK(total > 0);
    CHECK(correct == total); // 100% on the bijective corpus
}

TEST_CASE("empty target verse NULL-aligns every source token") {
    LexTable fwd, rev;
    const VerseText src{"v", {"a", "b"}};
    const VerseText tgt{"v", {}};
    const auto links = align_verse(fwd, rev, src, tgt);
    REQUIRE(links.size() == 2);
    for (const AlignmentLink& l : links) CHECK(l.tgt_idx == kNullIndex);
}

TEST_CASE("ties between identical target tokens break by |i - j|") {
    LexTable fwd, rev;
    fwd.set("b", "x", 0.5);
    rev.set("x", "b", 0.5);
    const VerseText src{"v", {"a", "b", "c"}};
    const VerseText tgt{"v", {"x", "y", "x"}}; // identical tokens at 0 and 2
    const auto links = align_verse(fwd, rev, src, tgt);
    // source index 1 must take target index 0 or 2; |1-0| == |1-2| == 1,
    // then smaller j wins
    CHECK(links[1].tgt_idx == 0);

    const VerseText src2{"v", {"a", "b"}};
    const auto links2 = align_verse(fwd, rev, src2, tgt);
    // |1-0| = 1 vs |1-2| = 1 -> j = 0
    CHECK(links2[1].tgt_idx == 0);

    const VerseText src3{"v", {"x", "b"}};
    fwd.set("b", "y", 0.0);
    const VerseText tgt3{"v", {"y", "x", "x"}};
    const auto links3 = align_verse(fwd, rev, src3, tgt3);
    CHECK(links3[1].tgt_idx == 1); // |1-1| = 0 beats |1-2| = 1
}

TEST_CASE("scores at or below theta stay unmatched") {
    LexTable fwd, rev;
    fwd.set("a", "x", 1e-3);
    rev.set("x", "a", 1e-3); // product 1e-6 < default theta 1e-4
    const VerseText src{"v", {"a"}};
    const VerseText tgt{"v", {"x"}};
    CHECK(align_verse(fwd, rev, src, tgt)[0].tgt_idx == kNullIndex);
    CHECK(align_verse(fwd, rev, src, tgt, 1e-7)[0].tgt_idx == 0);
}

TEST_CASE("pharaoh import/export") {
    const auto dir = std::filesystem::temp_directory_path();
    const std::vector<std::string> verse_ids = {"v1", "v2"};
    const std::map<std::string, int> src_len = {{"v1", 3}, {"v2", 2}};
    const std::map<std::string, int> tgt_len = {{"v1", 3}, {"v2", 3}};

    SUBCASE("well-formed pairs") {
        io::write_file(dir / "tal_ok.txt", "0-0 1-2\n0-1\n");
        const VerseLinks links = import_pharaoh(dir / "tal_ok.txt", verse_ids, src_len, tgt_len);
        const auto& v1 = links.at("v1");
        REQUIRE(v1.size() == 3);
        CHECK(v1[0].tgt_idx == 0);
        CHECK(v1[1].tgt_idx == 2);
        CHECK(v1[2].tgt_idx == kNullIndex);
        const auto& v2 = links.at("v2");
        CHECK(v2[0].tgt_idx == 1);
        CHECK(v2[1].tgt_idx == kNullIndex);
    }
    SUBCASE("duplicates keep the first pair") {
        io::write_file(dir / "tal_dup.txt", "0-0 0-1\n\n");
        const VerseLinks links = import_pharaoh(dir / "tal_dup.txt", verse_ids, src_len, tgt_len);
        const auto& v1 = links.at("v1");
        CHECK(v1[0].tgt_idx == 0); // (0,0) kept, (0,1) dropped
    }
    SUBCASE("out-of-range index names the verse") {
        io::write_file(dir / "tal_oob.txt", "5-0\n\n");
        bool threw = false;
        try {
            import_pharaoh(dir / "tal_oob.txt", verse_ids, src_len, tgt_len);
        } catch (const Error& e) {
            threw = true;
            CHECK(std::string(e.what()).find("v1") != std::string::npos);
        }
        CHECK(threw);
    }
    SUBCASE("round trip") {
        io::write_file(dir / "tal_rt.txt", "0-0 1-2\n0-1\n");
        const VerseLinks links = import_pharaoh(dir / "tal_rt.txt", verse_ids, src_len, tgt_len);
        export_pharaoh(dir / "tal_rt2.txt", verse_ids, links);
        CHECK(io::read_file(dir / "tal_rt.txt") == io::read_file(dir / "tal_rt2.txt"));
    }
}

TEST_CASE("extract_usage_points") {
    ParallelCorpus corpus = corpus_from_pairs(
        {{{"when", "he", "came", "when", "he", "left"}, {"cuando", "vino", "cuando", "partio"}},
         {{"he", "stayed"}, {"quedo"}}});
    std::map<std::string, VerseLinks> links;
    VerseLinks l;
    l["v100"] = {{0, 0}, {1, kNullIndex}, {2, 1}, {3, 2}, {4, kNullIndex}, {5, 3}};
    l["v101"] = {{0, kNullIndex}, {1, 0}};
    links["tgt"] = l;

    SUBCASE("two pivots in a verse give two points") {
        const auto points = extract_usage_points(corpus, links, "when");
        REQUIRE(points.size() == 2);
        CHECK(points[0].pivot_idx == 0);
        CHECK(points[1].pivot_idx == 3);
        CHECK(points[0].labels.at("tgt") == "cuando");
        CHECK(points[1].labels.at("tgt") == "cuando");
    }
    SUBCASE("NULL alignment labels NOMATCH") {
        links["tgt"]["v100"][0].tgt_idx = kNullIndex;
        const auto points = extract_usage_points(corpus, links, "when");
        CHECK(points[0].labels.at("tgt") == kNoMatch);
    }
    SUBCASE("verse absent in target labels NOMATCH") {
        corpus.targets.at("tgt").verses.erase("v100");
        links["tgt"].erase("v100");
        corpus.source.emplace("v102", VerseText{"v102", {"when", "it", "rains"}});
        corpus.targets.at("tgt").verses.emplace("v102", VerseText{"v102", {"algo"}});
        const auto points = extract_usage_points(corpus, links, "when");
        REQUIRE(points.size() == 3);
        for (const auto& p : points)
            if (p.verse_id == "v102") CHECK(p.labels.at("tgt") == kNoMatch);
    }
    SUBCASE("absent pivot is an error") {
        CHECK_THROWS_AS(extract_usage_points(corpus, links, "zebra"), Error);
    }
}
