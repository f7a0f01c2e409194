#include "typomap/synthcorpus.hpp"

#include "typomap/error.hpp"
#include "typomap/evalharness.hpp"
#include "typomap/io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>

namespace typomap {

namespace {

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed * 2685821657736338717ULL + 1) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(next() % n); }
};

const char* kNouns[] = {"man",     "woman",   "child",   "king",    "servant", "priest",
                        "farmer",  "teacher", "stranger", "brother", "sister",  "elder",
                        "shepherd", "widow",   "soldier", "judge",   "healer",  "singer",
                        "builder", "weaver",  "hunter",  "scribe",  "guard",   "sailor"};

// past-tense surface forms; the first verb of a WHEN verse is the
// subordinate (head) verb
const char* kVerbs[] = {"arrived",  "slept",    "spoke",   "departed", "gathered", "wept",
                        "rejoiced", "labored",  "rested",  "wandered", "returned", "listened",
                        "waited",   "answered", "watched", "prayed",   "walked",   "feasted",
                        "planted",  "harvested", "sang",    "dreamed",  "traded",   "climbed"};

constexpr int kNounCount = sizeof(kNouns) / sizeof(kNouns[0]);
constexpr int kVerbCount = sizeof(kVerbs) / sizeof(kVerbs[0]);

// target stems avoid 'k' and 'q' so suffixes and connectors stay the only
// source of their grams; "ri" is reserved for the third suffix
const char* kConsonants = "mntsrlvx";
const char* kVowels = "aeiou";

std::string make_stem(Rng& rng, int syllables) {
    while (true) {
        std::string stem;
        for (int k = 0; k < syllables; ++k) {
            stem += kConsonants[rng.below(8)];
            stem += kVowels[rng.below(5)];
        }
        if (stem.find("ri") == std::string::npos) return stem;
    }
}

enum class VerseClass { SameSubject, DifferentSubject, Lexical, Plain };

struct VersePlan {
    std::string verse_id;
    VerseClass cls;
    int n1, n2, v1, v2; // indices into the noun/verb lists
};

std::string verse_id_for(int index) {
    const int chapter = index / 25 + 1;
    const int verse = index % 25 + 1;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "40%03d%03d", chapter, verse);
    return buf;
}

struct TargetLexicon {
    std::map<std::string, std::string> words; // English token -> target stem
    std::string connector;
    std::string suffix_ss, suffix_ds, suffix_lex;
};

TargetLexicon build_lexicon(Rng& rng, const SynthLanguage& lang, int vocab) {
    TargetLexicon lex;
    std::set<std::string> taken;
    auto fresh = [&](int syllables) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::string s = make_stem(rng, syllables);
            if (taken.insert(s).second) return s;
        }
        // bounded retries exhausted: extend deterministically
        std::string s = make_stem(rng, syllables + 1);
        while (!taken.insert(s).second) s += kVowels[rng.below(5)];
        return s;
    };
    for (int i = 0; i < vocab; ++i) lex.words[kNouns[i]] = fresh(2);
    for (int i = 0; i < vocab; ++i) lex.words[kVerbs[i]] = fresh(2);
    lex.words["the"] = fresh(1);
    lex.words["then"] = fresh(2);
    lex.words["and"] = fresh(1);
    lex.connector = lang.strategy == Strategy::Mixed ? "quepa" : fresh(2) + "pa";
    lex.suffix_ss = "ka";
    lex.suffix_ds = "ku";
    lex.suffix_lex = "ri";
    return lex;
}

} // namespace

Strategy strategy_from_string(const std::string& s) {
    if (s == "lexified-only") return Strategy::LexifiedOnly;
    if (s == "morphological-only") return Strategy::MorphologicalOnly;
    if (s == "mixed") return Strategy::Mixed;
    if (s == "inverted-mixed") return Strategy::InvertedMixed;
    throw Error("unknown strategy: " + s);
}

std::string strategy_to_string(Strategy s) {
    switch (s) {
    case Strategy::LexifiedOnly: return "lexified-only";
    case Strategy::MorphologicalOnly: return "morphological-only";
    case Strategy::Mixed: return "mixed";
    case Strategy::InvertedMixed: return "inverted-mixed";
    }
    return "mixed";
}

SynthSpec SynthSpec::with_defaults(int verses, std::uint64_t seed) {
    SynthSpec spec;
    spec.verse_count = verses;
    spec.seed = seed;
    spec.languages = {
        {"hui1", "Synthetic Mixed", Strategy::Mixed, -104.0, 22.0},
        {"lex1", "Synthetic Lexified", Strategy::LexifiedOnly, -70.0, -10.0},
        {"mor1", "Synthetic Morphological", Strategy::MorphologicalOnly, -75.0, -5.0},
        {"inv1", "Synthetic Inverted", Strategy::InvertedMixed, -65.0, -17.0},
        {"out1", "Synthetic Outside", Strategy::LexifiedOnly, 10.0, 50.0},
    };
    return spec;
}

void generate_synth_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.verse_count < 50) throw Error("synth corpus needs >= 50 verses");
    if (spec.vocab_size < 4 || spec.vocab_size > std::min(kNounCount, kVerbCount))
        throw Error("vocab_size out of range");
    if (spec.languages.empty()) throw Error("no languages configured");

    Rng rng(spec.seed);
    const int vocab = spec.vocab_size;

    // verbs are pooled by context class so each suffix family grows its own
    // allomorph set
    auto verb_for_class = [&](Rng& r, VerseClass cls) {
        const int pool = cls == VerseClass::SameSubject      ? 0
                         : cls == VerseClass::DifferentSubject ? 1
                                                               : 2;
        const int per = vocab / 3;
        const int base = pool * per;
        const int span = pool == 2 ? vocab - base : per;
        return base + static_cast<int>(r.below(static_cast<std::uint32_t>(span)));
    };

    std::vector<VersePlan> plan;
    plan.reserve(static_cast<std::size_t>(spec.verse_count));
    const VerseClass wheel[4] = {VerseClass::SameSubject, VerseClass::DifferentSubject,
                                 VerseClass::Lexical, VerseClass::Plain};
    for (int i = 0; i < spec.verse_count; ++i) {
        VersePlan p;
        p.verse_id = verse_id_for(i);
        p.cls = wheel[i % 4];
        p.n1 = static_cast<int>(rng.below(static_cast<std::uint32_t>(vocab)));
        do {
            p.n2 = static_cast<int>(rng.below(static_cast<std::uint32_t>(vocab)));
        } while (p.n2 == p.n1);
        p.v1 = p.cls == VerseClass::Plain ? static_cast<int>(rng.below(static_cast<std::uint32_t>(vocab)))
                                          : verb_for_class(rng, p.cls);
        do {
            p.v2 = static_cast<int>(rng.below(static_cast<std::uint32_t>(vocab)));
        } while (p.v2 == p.v1);
        plan.push_back(std::move(p));
    }

    // --- source text + dependencies ---
    std::string eng_txt;
    std::string conllu;
    for (const VersePlan& p : plan) {
        const std::string n1 = kNouns[p.n1], n2 = kNouns[p.n2];
        const std::string v1 = kVerbs[p.v1], v2 = kVerbs[p.v2];
        std::vector<std::string> toks;     // tokenized form (matches tokenize())
        std::string raw;                   // raw verse text
        // head index (1-based) and UPOS per token
        std::vector<int> heads;
        std::vector<std::string> upos;
        switch (p.cls) {
        case VerseClass::SameSubject:
        case VerseClass::DifferentSubject: {
            const std::string& subj2 = p.cls == VerseClass::SameSubject ? n1 : n2;
            raw = "When the " + n1 + " " + v1 + ", then the " + subj2 + " " + v2 + ".";
            toks = {"when", "the", n1, v1, "then", "the", subj2, v2};
            //      1       2      3   4   5       6      7      8
            heads = {4, 3, 4, 8, 8, 7, 8, 0};
            upos = {"ADV", "DET", "NOUN", "VERB", "ADV", "DET", "NOUN", "VERB"};
            break;
        }
        case VerseClass::Lexical: {
            raw = "When the " + n1 + " " + v1 + ", the " + n2 + " " + v2 + ".";
            toks = {"when", "the", n1, v1, "the", n2, v2};
            //      1       2      3   4   5      6   7
            heads = {4, 3, 4, 7, 6, 7, 0};
            upos = {"ADV", "DET", "NOUN", "VERB", "DET", "NOUN", "VERB"};
            break;
        }
        case VerseClass::Plain: {
            raw = "And the " + n1 + " " + v1 + " near the " + n2 + ".";
            toks = {"and", "the", n1, v1, "near", "the", n2};
            //      1      2      3   4   5       6      7
            heads = {4, 3, 4, 0, 7, 7, 4};
            upos = {"CCONJ", "DET", "NOUN", "VERB", "ADP", "DET", "NOUN"};
            break;
        }
        }
        eng_txt += p.verse_id + "\t" + raw + "\n";
        conllu += "# sent_id = " + p.verse_id + "\n";
        for (std::size_t t = 0; t < toks.size(); ++t) {
            conllu += std::to_string(t + 1) + "\t" + toks[t] + "\t_\t" + upos[t] + "\t_\t_\t" +
                      std::to_string(heads[t]) + "\t_\t_\t_\n";
        }
        conllu += "\n";
    }
    io::write_file(out_dir / "corpus" / "eng.txt", eng_txt);
    io::write_file(out_dir / "eng.conllu", conllu);

    // --- per-language translations and gold ---
    std::string meta = "# code\tname\tlon\tlat\n";
    meta += "eng\tEnglish (source)\t0\t52\n";
    for (const SynthLanguage& lang : spec.languages) {
        Rng lang_rng(spec.seed ^ io::fnv1a64(lang.code));
        const TargetLexicon lex = build_lexicon(lang_rng, lang, vocab);
        meta += lang.code + "\t" + lang.name + "\t" + io::format_double(lang.lon) + "\t" +
                io::format_double(lang.lat) + "\n";

        // how this language renders each WHEN class
        enum class Render { Connector, SuffixSS, SuffixDS, SuffixLex };
        auto render_for = [&](VerseClass cls) {
            switch (lang.strategy) {
            case Strategy::Mixed:
                return cls == VerseClass::SameSubject      ? Render::SuffixSS
                       : cls == VerseClass::DifferentSubject ? Render::SuffixDS
                                                             : Render::Connector;
            case Strategy::LexifiedOnly:
                return Render::Connector;
            case Strategy::MorphologicalOnly:
                return cls == VerseClass::SameSubject      ? Render::SuffixSS
                       : cls == VerseClass::DifferentSubject ? Render::SuffixDS
                                                             : Render::SuffixLex;
            case Strategy::InvertedMixed:
                return cls == VerseClass::Lexical ? Render::SuffixLex : Render::Connector;
            }
            return Render::Connector;
        };

        std::string txt;
        std::string gold_align = "# verse_id\toccurrence\tgold_label\n";
        std::string gold_refined = "# verse_id\toccurrence\tgold_label\n";
        for (const VersePlan& p : plan) {
            const std::string n1 = kNouns[p.n1], n2 = kNouns[p.n2];
            const std::string v1 = kVerbs[p.v1], v2 = kVerbs[p.v2];
            std::vector<std::string> toks;
            if (p.cls == VerseClass::Plain) {
                toks = {lex.words.at("and"), lex.words.at("the"), lex.words.at(n1),
                        lex.words.at(v1),    lex.words.at("the"), lex.words.at(n2)};
            } else {
                const Render render = render_for(p.cls);
                const std::string& subj2 = p.cls == VerseClass::SameSubject ? n1 : n2;
                const bool has_then = p.cls != VerseClass::Lexical;
                std::string sub_verb = lex.words.at(v1);
                std::string when_word;
                std::string gold_a = kGoldNullOk;
                std::string gold_r;
                switch (render) {
                case Render::Connector:
                    when_word = lex.connector;
                    gold_a = lex.connector;
                    gold_r = lex.connector;
                    break;
                case Render::SuffixSS:
                    sub_verb += lex.suffix_ss;
                    gold_r = "SS";
                    break;
                case Render::SuffixDS:
                    sub_verb += lex.suffix_ds;
                    gold_r = "DS";
                    break;
                case Render::SuffixLex:
                    sub_verb += lex.suffix_lex;
                    gold_r = "TEMP";
                    break;
                }
                if (!when_word.empty()) toks.push_back(when_word);
                toks.push_back(lex.words.at("the"));
                toks.push_back(lex.words.at(n1));
                toks.push_back(sub_verb);
                if (has_then) toks.push_back(lex.words.at("then"));
                toks.push_back(lex.words.at("the"));
                toks.push_back(lex.words.at(p.cls == VerseClass::Lexical ? n2 : subj2));
                toks.push_back(lex.words.at(v2));
                gold_align += p.verse_id + "\t0\t" + gold_a + "\n";
                gold_refined += p.verse_id + "\t0\t" + gold_r + "\n";
            }
            txt += p.verse_id + "\t" + io::join(toks, " ") + "\n";
        }
        io::write_file(out_dir / "corpus" / (lang.code + ".txt"), txt);
        io::write_file(out_dir / "gold" / (lang.code + ".gold_align.tsv"), gold_align);
        io::write_file(out_dir / "gold" / (lang.code + ".gold_refined.tsv"), gold_refined);
    }
    io::write_file(out_dir / "languages.tsv", meta);

    // box region containing the in-region languages; out-of-region ones are
    // exercise material for filter-geo
    io::write_file(out_dir / "region.geojson", R"({
  "type": "Feature",
  "properties": {"name": "synthetic benchmark region"},
  "geometry": {
    "type": "Polygon",
    "coordinates": [[[-120, -60], [-30, -60], [-30, 35], [-120, 35], [-120, -60]]]
  }
}
)");

    std::string conf;
    conf += "corpus_dir=corpus\n";
    conf += "source=eng\n";
    conf += "metadata=languages.tsv\n";
    conf += "region=region.geojson\n";
    conf += "deps=eng.conllu\n";
    conf += "gold_dir=gold\n";
    conf += "pivot=when\n";
    io::write_file(out_dir / "typomap.conf", conf);
}

} // namespace typomap
