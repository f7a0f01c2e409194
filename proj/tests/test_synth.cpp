#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "typomap/conllu.hpp"
#include "typomap/corpus.hpp"
#include "typomap/error.hpp"
#include "typomap/evalharness.hpp"
#include "typomap/geofilter.hpp"
#include "typomap/io.hpp"
#include "typomap/log.hpp"
#include "typomap/synthcorpus.hpp"

#include <filesystem>
#include <map>
#include <set>

using namespace typomap;

namespace {
struct Quiet {
    Quiet() { log::set_level(log::Level::Quiet); }
} quiet_logs;

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}
} // namespace

TEST_CASE("generation is deterministic for a fixed seed") {
    const SynthSpec spec = SynthSpec::with_defaults(80, 7);
    const fs::path a = fresh_dir("tsynth_a");
    const fs::path b = fresh_dir("tsynth_b");
    generate_synth_corpus(spec, a);
    generate_synth_corpus(spec, b);
    for (const char* rel : {"corpus/eng.txt", "corpus/hui1.txt", "corpus/inv1.txt",
                            "languages.tsv", "eng.conllu", "gold/hui1.gold_refined.tsv"}) {
        CHECK(io::read_file(a / rel) == io::read_file(b / rel));
    }
    // different seed differs
    generate_synth_corpus(SynthSpec::with_defaults(80, 8), b);
    CHECK(io::read_file(a / "corpus/hui1.txt") != io::read_file(b / "corpus/hui1.txt"));
}

TEST_CASE("verse count below 50 is rejected") {
    CHECK_THROWS_AS(generate_synth_corpus(SynthSpec::with_defaults(49, 1), fresh_dir("tsynth_x")),
                    Error);
}

TEST_CASE("gold is consistent with the generated morphology") {
    const fs::path dir = fresh_dir("tsynth_gold");
    generate_synth_corpus(SynthSpec::with_defaults(120, 3), dir);
    const VerseMap hui = load_verse_file(dir / "corpus" / "hui1.txt");
    const GoldSample refined = load_gold(dir / "gold" / "hui1.gold_refined.tsv");
    int ss = 0, ds = 0, lex = 0;
    for (const GoldItem& item : refined.items) {
        const VerseText& verse = hui.at(item.verse_id);
        auto ends_with = [&](const std::string& tok, const std::string& suf) {
            return tok.size() >= suf.size() &&
                   tok.compare(tok.size() - suf.size(), suf.size(), suf) == 0;
        };
        int ka = 0, ku = 0;
        bool has_connector = false;
        for (const std::string& tok : verse.tokens) {
            if (ends_with(tok, "ka")) ++ka;
            if (ends_with(tok, "ku")) ++ku;
            if (tok == "quepa") has_connector = true;
        }
        if (item.label == "SS") {
            ++ss;
            CHECK(ka == 1);
            CHECK(ku == 0);
            CHECK_FALSE(has_connector);
        } else if (item.label == "DS") {
            ++ds;
            CHECK(ku == 1);
            CHECK(ka == 0);
            CHECK_FALSE(has_connector);
        } else {
            ++lex;
            CHECK(item.label == "quepa");
            CHECK(has_connector);
            CHECK(ka == 0);
            CHECK(ku == 0);
        }
    }
    // class balance within +-10% of the even split
    const int total = ss + ds + lex;
    CHECK(total == static_cast<int>(refined.items.size()));
    for (int count : {ss, ds, lex}) {
        CHECK(count >= total / 3 - total / 10);
        CHECK(count <= total / 3 + total / 10 + 1);
    }
}

TEST_CASE("raw-alignment gold marks morphological classes NULL_OK") {
    const fs::path dir = fresh_dir("tsynth_goldalign");
    generate_synth_corpus(SynthSpec::with_defaults(80, 3), dir);
    const GoldSample align_gold = load_gold(dir / "gold" / "hui1.gold_align.tsv");
    const GoldSample refined = load_gold(dir / "gold" / "hui1.gold_refined.tsv");
    REQUIRE(align_gold.items.size() == refined.items.size());
    std::map<std::string, std::string> refined_by_verse;
    for (const GoldItem& item : refined.items) refined_by_verse[item.verse_id] = item.label;
    for (const GoldItem& item : align_gold.items) {
        const std::string& r = refined_by_verse.at(item.verse_id);
        if (r == "SS" || r == "DS")
            CHECK(item.label == kGoldNullOk);
        else
            CHECK(item.label == r);
    }
}

TEST_CASE("lexified-only language never carries the suffixes") {
    const fs::path dir = fresh_dir("tsynth_lex");
    generate_synth_corpus(SynthSpec::with_defaults(80, 3), dir);
    const GoldSample refined = load_gold(dir / "gold" / "lex1.gold_refined.tsv");
    std::set<std::string> labels;
    for (const GoldItem& item : refined.items) labels.insert(item.label);
    REQUIRE(labels.size() == 1); // one connector everywhere
    CHECK(labels.begin()->size() >= 2);
    // and the corpus has no ka/ku-final tokens
    const VerseMap lex = load_verse_file(dir / "corpus" / "lex1.txt");
    for (const auto& [id, verse] : lex)
        for (const std::string& tok : verse.tokens) {
            const bool ka = tok.size() >= 2 && tok.compare(tok.size() - 2, 2, "ka") == 0;
            const bool ku = tok.size() >= 2 && tok.compare(tok.size() - 2, 2, "ku") == 0;
            CHECK_FALSE(ka);
            CHECK_FALSE(ku);
        }
}

TEST_CASE("region excludes the out-of-region language") {
    const fs::path dir = fresh_dir("tsynth_region");
    generate_synth_corpus(SynthSpec::with_defaults(64, 5), dir);
    const Region region = load_region(dir / "region.geojson");
    const auto metas = load_language_metadata(dir / "languages.tsv");
    std::set<std::string> kept;
    for (const LanguageMeta& m : filter_languages(metas, region)) kept.insert(m.code);
    CHECK(kept.count("hui1") == 1);
    CHECK(kept.count("lex1") == 1);
    CHECK(kept.count("mor1") == 1);
    CHECK(kept.count("inv1") == 1);
    CHECK(kept.count("out1") == 0);
}

TEST_CASE("dependency annotation covers every source verse and matches tokenization") {
    const fs::path dir = fresh_dir("tsynth_deps");
    generate_synth_corpus(SynthSpec::with_defaults(60, 2), dir);
    const VerseMap eng = load_verse_file(dir / "corpus" / "eng.txt");
    const DependencyDoc deps = load_conllu(dir / "eng.conllu");
    REQUIRE(deps.sentences.size() == eng.size());
    for (const auto& [id, verse] : eng) {
        REQUIRE(deps.sentences.count(id) == 1);
        CHECK(deps.sentences.at(id).forms == verse.tokens);
    }
}
