#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace typomap {

// Dependency annotation for one verse; parallel arrays over tokens.
struct DepSentence {
    std::vector<std::string> forms;
    std::vector<int> heads; // 1-based into forms, 0 = root
    std::vector<std::string> upos;
};

// Verse-keyed dependency annotation, ingested from CoNLL-U. Sentences are
// keyed by their "# sent_id = ..." comment. Only ID, FORM, UPOS and HEAD
// are read; multiword-token and empty-node lines are skipped.
struct DependencyDoc {
    std::map<std::string, DepSentence> sentences;
};

DependencyDoc load_conllu(const std::filesystem::path& path);
DependencyDoc parse_conllu(const std::string& text, const std::string& origin);
std::string format_conllu(const DependencyDoc& doc);

} // namespace typomap
