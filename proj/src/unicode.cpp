#include "typomap/unicode.hpp"

#include "typomap/error.hpp"

#include <algorithm>
#include <cstddef>

namespace typomap::uni {

namespace {

struct LowerPair {
    char32_t cp;
    char32_t lower;
};
struct CpRange {
    char32_t first;
    char32_t last;
};
struct CompPair {
    char32_t base;
    char32_t mark;
    char32_t composed;
};

#include "unicode_tables.inc"

} // namespace

std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            throw Error("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        if (i + len > s.size()) throw Error("truncated UTF-8 sequence at offset " + std::to_string(i));
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80)
                throw Error("invalid UTF-8 continuation byte at offset " + std::to_string(i + k));
            cp = (cp << 6) | (b & 0x3F);
        }
        // reject overlong encodings and surrogates
        static const char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            throw Error("invalid UTF-8 scalar value at offset " + std::to_string(i));
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

char32_t to_lower(char32_t cp) {
    const LowerPair* begin = kLowerPairs;
    const LowerPair* end = kLowerPairs + sizeof(kLowerPairs) / sizeof(kLowerPairs[0]);
    const LowerPair* it =
        std::lower_bound(begin, end, cp, [](const LowerPair& p, char32_t v) { return p.cp < v; });
    if (it != end && it->cp == cp) return it->lower;
    return cp;
}

bool is_punct_or_symbol(char32_t cp) {
    const CpRange* begin = kPunctSymbolRanges;
    const CpRange* end = kPunctSymbolRanges + sizeof(kPunctSymbolRanges) / sizeof(kPunctSymbolRanges[0]);
    const CpRange* it =
        std::upper_bound(begin, end, cp, [](char32_t v, const CpRange& r) { return v < r.first; });
    if (it == begin) return false;
    --it;
    return cp >= it->first && cp <= it->last;
}

bool is_whitespace(char32_t cp) {
    switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\f':
    case U'\v':
    case 0x85:   // NEL
    case 0xA0:   // NBSP
    case 0x1680: // ogham space
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
        return true;
    default:
        return (cp >= 0x2000 && cp <= 0x200A);
    }
}

namespace {
const CompPair* find_composition(char32_t base, char32_t mark) {
    const CompPair* begin = kCompositionPairs;
    const CompPair* end = kCompositionPairs + sizeof(kCompositionPairs) / sizeof(kCompositionPairs[0]);
    const CompPair* it = std::lower_bound(begin, end, base, [](const CompPair& p, char32_t v) {
        return p.base < v;
    });
    for (; it != end && it->base == base; ++it)
        if (it->mark == mark) return it;
    return nullptr;
}
} // namespace

std::string compose_nfc(std::string_view s, bool* changed) {
    std::vector<char32_t> cps = decode_utf8(s);
    bool any = false;
    std::size_t i = 0;
    while (i + 1 < cps.size()) {
        if (const CompPair* p = find_composition(cps[i], cps[i + 1])) {
            cps[i] = p->composed;
            cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            any = true;
            // stay on i: the composed char may take a further mark
        } else {
            ++i;
        }
    }
    if (changed) *changed = any;
    if (!any) return std::string(s);
    return encode_utf8(cps);
}

std::string lowercase(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(s);
    for (char32_t& cp : cps) cp = to_lower(cp);
    return encode_utf8(cps);
}

std::size_t length(std::string_view s) {
    return decode_utf8(s).size();
}

} // namespace typomap::uni
