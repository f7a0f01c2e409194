#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace typomap {

struct LanguageMeta {
    std::string code; // ISO 639-3 or file stem
    std::string name;
    double lon = 0.0; // degrees, [-180, 180]
    double lat = 0.0; // degrees, [-90, 90]
};

struct VerseText {
    std::string verse_id;
    std::vector<std::string> tokens;
};

// Ordered by verse id so every downstream iteration is deterministic.
using VerseMap = std::map<std::string, VerseText>;

struct TargetCorpus {
    LanguageMeta meta;
    VerseMap verses;
};

// Immutable after construction; concurrent readers are safe.
struct ParallelCorpus {
    VerseMap source;
    std::map<std::string, TargetCorpus> targets; // keyed by language code
};

// Lowercases, splits on whitespace, strips leading/trailing punctuation and
// symbols per token (word-internal hyphens and apostrophes survive), drops
// empty tokens. Operates on Unicode scalar values.
std::vector<std::string> tokenize(std::string_view text);

// Verse-per-line file: "verse_id<TAB>raw text", '#' starts a comment line.
// Text is NFC-composed (logged if input wasn't) and tokenized; verses whose
// text tokenizes to nothing are dropped with a log entry.
VerseMap load_verse_file(const std::filesystem::path& path);

// Metadata file: one language per line, "code<TAB>name<TAB>lon<TAB>lat",
// '#' comments allowed.
std::vector<LanguageMeta> load_language_metadata(const std::filesystem::path& path);
void write_language_metadata(const std::filesystem::path& path,
                             const std::vector<LanguageMeta>& metas);

// Sorted verse ids present in both the source and the named target.
std::vector<std::string> intersect_verses(const ParallelCorpus& corpus, const std::string& code);

// Loads source + one file per language listed in the metadata from
// `dir/<code>.txt`; `dir/<source_code>.txt` is the source.
ParallelCorpus load_parallel_corpus(const std::filesystem::path& dir,
                                    const std::string& source_code,
                                    const std::vector<LanguageMeta>& metas);

void write_verse_file(const std::filesystem::path& path, const VerseMap& verses);

} // namespace typomap
