#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "typomap/aligner.hpp"
#include "typomap/error.hpp"
#include "typomap/evalharness.hpp"
#include "typomap/io.hpp"
#include "typomap/log.hpp"

#include <cmath>
#include <filesystem>

using namespace typomap;

namespace {
struct Quiet {
    Quiet() { log::set_level(log::Level::Quiet); }
} quiet_logs;

GoldSample make_gold(const std::vector<std::pair<std::string, std::string>>& items) {
    GoldSample gold;
    for (const auto& [verse, label] : items) gold.items.push_back({verse, 0, label});
    return gold;
}
} // namespace

TEST_CASE("annotate_markers inserts placeholders before suffixed tokens") {
    const std::vector<std::pair<std::string, std::string>> markers = {{"cu", "DS"}, {"ca", "SS"}};
    CHECK(annotate_markers({"me-'u'-axüa-cu"}, markers) ==
          std::vector<std::string>{"DS", "me-'u'-axüa-cu"});
    CHECK(annotate_markers({"me-'u'-axüa-ca"}, markers) ==
          std::vector<std::string>{"SS", "me-'u'-axüa-ca"});
    CHECK(annotate_markers({"hesüana", "me-'u'-axüa-cu", "müpaü"}, markers) ==
          std::vector<std::string>{"hesüana", "DS", "me-'u'-axüa-cu", "müpaü"});
}

TEST_CASE("suffix must be word-final") {
    const std::vector<std::pair<std::string, std::string>> markers = {{"cu", "DS"}, {"ca", "SS"}};
    CHECK(annotate_markers({"cueva"}, markers) == std::vector<std::string>{"cueva"});
}

TEST_CASE("longest suffix wins when suffixes nest") {
    const std::vector<std::pair<std::string, std::string>> markers = {{"u", "X"}, {"cu", "DS"}};
    CHECK(annotate_markers({"axüacu"}, markers) == std::vector<std::string>{"DS", "axüacu"});
    CHECK(annotate_markers({"müpaü"}, markers) == std::vector<std::string>{"müpaü"});
    CHECK_THROWS_AS(annotate_markers({"x"}, {}), Error);
}

TEST_CASE("annotate_corpus_markers maps whole verses") {
    VerseMap verses;
    verses.emplace("v1", VerseText{"v1", {"hesüana", "me-'u'-axüa-cu", "müpaü"}});
    const VerseMap out =
        annotate_corpus_markers(verses, {{"cu", "DS"}, {"ca", "SS"}});
    CHECK(out.at("v1").tokens ==
          std::vector<std::string>{"hesüana", "DS", "me-'u'-axüa-cu", "müpaü"});
}

TEST_CASE("f1 arithmetic") {
    CHECK(f1_score(0.9, 0.99) == doctest::Approx(0.9428571428571428).epsilon(1e-12));
    CHECK(round_reported(f1_score(0.9, 0.99)) == doctest::Approx(0.94));
    CHECK(f1_score(0.66, 1.0) == doctest::Approx(0.7951807228915662).epsilon(1e-12));
    CHECK(round_reported(f1_score(0.66, 1.0)) == doctest::Approx(0.79));
    CHECK(f1_score(0.0, 0.0) == 0.0);
    CHECK(f1_score(0.3, 0.7) == f1_score(0.7, 0.3)); // symmetry
    CHECK_THROWS_AS(f1_score(-0.1, 0.5), Error);
    // harmonic mean never exceeds the arithmetic mean
    for (double p = 0.05; p < 1.0; p += 0.13)
        for (double r = 0.05; r < 1.0; r += 0.17) CHECK(f1_score(p, r) <= (p + r) / 2.0 + 1e-15);
}

TEST_CASE("score_alignment reproduces the reconstructed sample arithmetic") {
    // 300 items: 198 correct tokens, 102 spurious alignments
    GoldSample gold;
    PredictionMap pred;
    for (int i = 0; i < 198; ++i) {
        const std::string verse = "t" + std::to_string(1000 + i);
        gold.items.push_back({verse, 0, "quepaucua"});
        pred[{verse, 0}] = "quepaucua";
    }
    for (int i = 0; i < 102; ++i) {
        const std::string verse = "f" + std::to_string(1000 + i);
        gold.items.push_back({verse, 0, kGoldNullOk});
        pred[{verse, 0}] = "spurious";
    }
    const PRF prf = score_alignment(pred, gold);
    CHECK(prf.tp == 198);
    CHECK(prf.fp == 102);
    CHECK(prf.fn == 0);
    CHECK(prf.tn == 0);
    CHECK(prf.precision == doctest::Approx(0.66).epsilon(1e-12));
    CHECK(prf.recall == 1.0);
    CHECK(round_reported(prf.precision) == doctest::Approx(0.66));
    CHECK(round_reported(prf.f1) == doctest::Approx(0.79));
    CHECK(prf.tp + prf.fp + prf.tn + prf.fn == static_cast<std::int64_t>(gold.items.size()));
}

TEST_CASE("score_alignment small arithmetic") {
    GoldSample gold;
    PredictionMap pred;
    for (int i = 0; i < 9; ++i) {
        gold.items.push_back({"v" + std::to_string(i), 0, "tok"});
        pred[{"v" + std::to_string(i), 0}] = "tok";
    }
    gold.items.push_back({"v9", 0, kGoldNullOk});
    pred[{"v9", 0}] = "wrong";
    const PRF prf = score_alignment(pred, gold);
    CHECK(prf.precision == doctest::Approx(0.9));
    CHECK(prf.recall == doctest::Approx(1.0));
    CHECK(prf.f1 == doctest::Approx(2.0 * 0.9 / 1.9).epsilon(1e-12));
}

TEST_CASE("all-NULL predictions on all-NULL_OK gold") {
    GoldSample gold;
    PredictionMap pred;
    for (int i = 0; i < 5; ++i) {
        gold.items.push_back({"v" + std::to_string(i), 0, kGoldNullOk});
        pred[{"v" + std::to_string(i), 0}] = kNoMatch;
    }
    const PRF prf = score_alignment(pred, gold);
    CHECK(prf.precision == 0.0);
    CHECK(prf.recall == 0.0);
    CHECK(prf.tn == 5);
    CHECK(prf.f1 == 0.0);
}

TEST_CASE("classification of every gold kind") {
    const GoldSample gold = make_gold({{"v1", "SS"},
                                       {"v2", "DS"},
                                       {"v3", kGoldNullOk},
                                       {"v4", kGoldNullBad},
                                       {"v5", "tok"},
                                       {"v6", kGoldNullBad}});
    PredictionMap pred;
    pred[{"v1", 0}] = "SS";      // tp
    pred[{"v2", 0}] = kNoMatch;  // fn (specific label missed)
    pred[{"v3", 0}] = kNoMatch;  // tn
    pred[{"v4", 0}] = kNoMatch;  // fn (should have been aligned)
    pred[{"v5", 0}] = "other";   // fp (wrong label)
    pred[{"v6", 0}] = "guess";   // fp (unverifiable on NULL_BAD)
    const PRF prf = score_alignment(pred, gold);
    CHECK(prf.tp == 1);
    CHECK(prf.fn == 2);
    CHECK(prf.tn == 1);
    CHECK(prf.fp == 2);
    CHECK(prf.tp + prf.fp + prf.tn + prf.fn == 6);
}

TEST_CASE("perfect predictions score ones") {
    const GoldSample gold = make_gold({{"v1", "SS"}, {"v2", "quepa"}, {"v3", kGoldNullOk}});
    PredictionMap pred;
    pred[{"v1", 0}] = "SS";
    pred[{"v2", 0}] = "quepa";
    pred[{"v3", 0}] = kNoMatch;
    const PRF prf = score_alignment(pred, gold);
    CHECK(prf.precision == 1.0);
    CHECK(prf.recall == 1.0);
    CHECK(prf.f1 == 1.0);
}

TEST_CASE("missing prediction is an error") {
    const GoldSample gold = make_gold({{"v1", "SS"}});
    CHECK_THROWS_AS(score_alignment({}, gold), Error);
}

TEST_CASE("gold file round trip and validation") {
    const auto dir = std::filesystem::temp_directory_path();
    GoldSample gold = make_gold({{"40001001", "quepa"}, {"40001002", kGoldNullOk}});
    gold.items.push_back({"40001001", 1, "SS"});
    write_gold(dir / "teval_gold.tsv", gold);
    const GoldSample loaded = load_gold(dir / "teval_gold.tsv");
    REQUIRE(loaded.items.size() == 3);
    CHECK(loaded.items[2].occurrence == 1);
    CHECK(loaded.items[2].label == "SS");

    io::write_file(dir / "teval_dup.tsv", "v1\t0\tx\nv1\t0\ty\n");
    CHECK_THROWS_AS(load_gold(dir / "teval_dup.tsv"), Error);
}
