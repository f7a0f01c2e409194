#include "typomap/corpus.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"
#include "typomap/log.hpp"
#include "typomap/unicode.hpp"

#include <algorithm>

namespace typomap {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<char32_t> cps = uni::decode_utf8(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = cps.size();
    while (i < n) {
        while (i < n && uni::is_whitespace(cps[i])) ++i;
        std::size_t start = i;
        while (i < n && !uni::is_whitespace(cps[i])) ++i;
        if (i == start) continue;
        std::size_t lo = start, hi = i;
        while (lo < hi && uni::is_punct_or_symbol(cps[lo])) ++lo;
        while (hi > lo && uni::is_punct_or_symbol(cps[hi - 1])) --hi;
        if (lo == hi) continue;
        std::string tok;
        for (std::size_t k = lo; k < hi; ++k) uni::append_utf8(tok, uni::to_lower(cps[k]));
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

VerseMap load_verse_file(const std::filesystem::path& path) {
    const std::string content = io::read_file(path);
    VerseMap verses;
    std::size_t non_nfc = 0;
    std::size_t empty_dropped = 0;
    std::size_t lineno = 0;
    for (const std::string& raw : io::split_lines(content)) {
        ++lineno;
        if (raw.empty() || raw[0] == '#') continue;
        std::size_t tab = raw.find('\t');
        if (tab == std::string::npos)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": malformed line (no TAB)");
        std::string verse_id = raw.substr(0, tab);
        if (verse_id.empty())
            throw Error(path.string() + ":" + std::to_string(lineno) + ": empty verse id");
        if (verses.count(verse_id))
            throw Error(path.string() + ":" + std::to_string(lineno) + ": duplicate verse id '" +
                        verse_id + "'");
        bool changed = false;
        std::string text = uni::compose_nfc(raw.substr(tab + 1), &changed);
        if (changed) ++non_nfc;
        std::vector<std::string> tokens = tokenize(text);
        if (tokens.empty()) {
            ++empty_dropped;
            continue;
        }
        verses.emplace(verse_id, VerseText{verse_id, std::move(tokens)});
    }
    if (non_nfc > 0)
        log::info(path.string() + ": " + std::to_string(non_nfc) +
                  " line(s) were not NFC-composed; normalized");
    if (empty_dropped > 0)
        log::info(path.string() + ": dropped " + std::to_string(empty_dropped) +
                  " verse(s) with no tokens");
    return verses;
}

std::vector<LanguageMeta> load_language_metadata(const std::filesystem::path& path) {
    const std::string content = io::read_file(path);
    std::vector<LanguageMeta> metas;
    std::size_t lineno = 0;
    for (const std::string& raw : io::split_lines(content)) {
        ++lineno;
        if (raw.empty() || raw[0] == '#') continue;
        std::vector<std::string> cols = io::split(raw, '\t');
        if (cols.size() != 4)
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": expected 4 tab-separated columns (code, name, lon, lat)");
        LanguageMeta m;
        m.code = cols[0];
        m.name = cols[1];
        m.lon = io::parse_double(cols[2]);
        m.lat = io::parse_double(cols[3]);
        if (m.code.empty())
            throw Error(path.string() + ":" + std::to_string(lineno) + ": empty language code");
        if (m.lon < -180.0 || m.lon > 180.0 || m.lat < -90.0 || m.lat > 90.0)
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": coordinates out of range for '" + m.code + "'");
        for (const LanguageMeta& seen : metas)
            if (seen.code == m.code)
                throw Error(path.string() + ":" + std::to_string(lineno) +
                            ": duplicate language code '" + m.code + "'");
        metas.push_back(std::move(m));
    }
    return metas;
}

void write_language_metadata(const std::filesystem::path& path,
                             const std::vector<LanguageMeta>& metas) {
    std::string out = "# code\tname\tlon\tlat\n";
    for (const LanguageMeta& m : metas) {
        out += m.code;
        out += '\t';
        out += m.name;
        out += '\t';
        out += io::format_double(m.lon);
        out += '\t';
        out += io::format_double(m.lat);
        out += '\n';
    }
    io::write_file(path, out);
}

std::vector<std::string> intersect_verses(const ParallelCorpus& corpus, const std::string& code) {
    auto it = corpus.targets.find(code);
    if (it == corpus.targets.end()) throw Error("unknown language code: " + code);
    std::vector<std::string> ids;
    for (const auto& [verse_id, verse] : corpus.source)
        if (it->second.verses.count(verse_id)) ids.push_back(verse_id);
    return ids; // map iteration order is already sorted
}

ParallelCorpus load_parallel_corpus(const std::filesystem::path& dir,
                                    const std::string& source_code,
                                    const std::vector<LanguageMeta>& metas) {
    ParallelCorpus corpus;
    corpus.source = load_verse_file(dir / (source_code + ".txt"));
    for (const LanguageMeta& meta : metas) {
        if (meta.code == source_code) continue;
        TargetCorpus target;
        target.meta = meta;
        target.verses = load_verse_file(dir / (meta.code + ".txt"));
        std::size_t extra = 0;
        for (const auto& [verse_id, verse] : target.verses)
            if (!corpus.source.count(verse_id)) ++extra;
        if (extra > 0)
            log::info(meta.code + ": " + std::to_string(extra) +
                      " verse(s) absent from the source are ignored downstream");
        corpus.targets.emplace(meta.code, std::move(target));
    }
    return corpus;
}

void write_verse_file(const std::filesystem::path& path, const VerseMap& verses) {
    std::string out;
    for (const auto& [verse_id, verse] : verses) {
        out += verse_id;
        out += '\t';
        out += io::join(verse.tokens, " ");
        out += '\n';
    }
    io::write_file(path, out);
}

} // namespace typomap
