#include "typomap/conllu.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"

#include <algorithm>

namespace typomap {

DependencyDoc parse_conllu(const std::string& text, const std::string& origin) {
    DependencyDoc doc;
    DepSentence current;
    std::string sent_id;
    std::size_t lineno = 0;

    auto flush = [&]() {
        if (current.forms.empty()) return;
        if (sent_id.empty())
            throw Error(origin + ": sentence without '# sent_id =' before line " +
                        std::to_string(lineno));
        for (int h : current.heads)
            if (h < 0 || h > static_cast<int>(current.forms.size()))
                throw Error(origin + ": head index out of range in sentence '" + sent_id + "'");
        if (doc.sentences.count(sent_id))
            throw Error(origin + ": duplicate sent_id '" + sent_id + "'");
        doc.sentences.emplace(sent_id, std::move(current));
        current = DepSentence{};
        sent_id.clear();
    };

    for (const std::string& line : io::split_lines(text)) {
        ++lineno;
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') {
            const std::string key = "# sent_id";
            if (line.compare(0, key.size(), key) == 0) {
                std::size_t eq = line.find('=');
                if (eq != std::string::npos) {
                    std::size_t start = line.find_first_not_of(' ', eq + 1);
                    sent_id = start == std::string::npos ? "" : line.substr(start);
                }
            }
            continue;
        }
        std::vector<std::string> cols = io::split(line, '\t');
        if (cols.size() < 8)
            throw Error(origin + ":" + std::to_string(lineno) + ": expected >= 8 CoNLL-U columns");
        const std::string& id = cols[0];
        // skip ranges (multiword tokens) and empty nodes
        if (id.find('-') != std::string::npos || id.find('.') != std::string::npos) continue;
        const int idx = static_cast<int>(io::parse_int(id));
        if (idx != static_cast<int>(current.forms.size()) + 1)
            throw Error(origin + ":" + std::to_string(lineno) + ": non-sequential token id '" + id +
                        "'");
        current.forms.push_back(cols[1]);
        current.upos.push_back(cols[3]);
        current.heads.push_back(cols[6] == "_" ? 0 : static_cast<int>(io::parse_int(cols[6])));
    }
    flush();
    return doc;
}

DependencyDoc load_conllu(const std::filesystem::path& path) {
    return parse_conllu(io::read_file(path), path.string());
}

std::string format_conllu(const DependencyDoc& doc) {
    std::string out;
    for (const auto& [sent_id, sent] : doc.sentences) {
        out += "# sent_id = " + sent_id + "\n";
        for (std::size_t i = 0; i < sent.forms.size(); ++i) {
            out += std::to_string(i + 1);
            out += '\t';
            out += sent.forms[i];
            out += "\t_\t";
            out += sent.upos[i];
            out += "\t_\t_\t";
            out += std::to_string(sent.heads[i]);
            out += "\t_\t_\t_\n";
        }
        out += '\n';
    }
    return out;
}

} // namespace typomap
