#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace typomap {

enum class Strategy { LexifiedOnly, MorphologicalOnly, Mixed, InvertedMixed };

Strategy strategy_from_string(const std::string& s);
std::string strategy_to_string(Strategy s);

struct SynthLanguage {
    std::string code;
    std::string name;
    Strategy strategy = Strategy::Mixed;
    double lon = 0.0, lat = 0.0;
};

// Three WHEN context classes (same-subject, different-subject, and one the
// mixed strategy renders with the connector "quepa") plus plain verses
// rotate round-robin, so class frequencies stay balanced by construction.
struct SynthSpec {
    int verse_count = 200; // >= 50
    std::uint64_t seed = 1;
    int vocab_size = 12; // noun/verb types per list, 4..24
    std::vector<SynthLanguage> languages;

    static SynthSpec with_defaults(int verses = 200, std::uint64_t seed = 1);
};

// Writes under out_dir:
//   corpus/eng.txt, corpus/<code>.txt   verse-per-line corpus files
//   languages.tsv                        code, name, lon, lat
//   eng.conllu                           gold dependencies for the source
//   region.geojson                       box containing the in-region set
//   gold/<code>.gold_align.tsv           raw-alignment gold (token/NULL_OK)
//   gold/<code>.gold_refined.tsv         refined gold (token/SS/DS/TEMP)
//   typomap.conf                         ready-to-run pipeline config
void generate_synth_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir);

} // namespace typomap
