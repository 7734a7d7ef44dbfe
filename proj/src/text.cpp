#include "litnav/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace litnav {

namespace {

bool is_space(unsigned char c) {
    return std::isspace(c) != 0;
}

// Maps the common two-byte UTF-8 Latin accents to their ASCII base letter.
// Returns 0 when the pair is not a known accent sequence.
char fold_latin_pair(unsigned char buf0, unsigned char buf1, bool& consumed_two) {
    consumed_two = false;
    if (buf0 != 0xC3 && buf0 != 0xC4 && buf0 != 0xC5) return 0;
    consumed_two = true;
    const unsigned cp = ((buf0 & 0x1Fu) << 6) | (buf1 & 0x3Fu);
    struct Range { unsigned lo, hi; char out; };
    static const Range kRanges[] = {
        {0xC0, 0xC5, 'a'}, {0xE0, 0xE5, 'a'}, {0x100, 0x105, 'a'},
        {0xC7, 0xC7, 'c'}, {0xE7, 0xE7, 'c'}, {0x106, 0x10D, 'c'},
        {0xC8, 0xCB, 'e'}, {0xE8, 0xEB, 'e'}, {0x112, 0x11B, 'e'},
        {0xCC, 0xCF, 'i'}, {0xEC, 0xEF, 'i'}, {0x128, 0x131, 'i'},
        {0xD1, 0xD1, 'n'}, {0xF1, 0xF1, 'n'}, {0x143, 0x148, 'n'},
        {0xD2, 0xD6, 'o'}, {0xF2, 0xF6, 'o'}, {0xD8, 0xD8, 'o'}, {0xF8, 0xF8, 'o'},
        {0x14C, 0x151, 'o'},
        {0xD9, 0xDC, 'u'}, {0xF9, 0xFC, 'u'}, {0x168, 0x173, 'u'},
        {0xDD, 0xDD, 'y'}, {0xFD, 0xFD, 'y'}, {0xFF, 0xFF, 'y'}, {0x176, 0x178, 'y'},
        {0x179, 0x17E, 'z'},
        {0x15A, 0x161, 's'}, {0xDF, 0xDF, 's'},
        {0x153, 0x153, 'o'}, {0x152, 0x152, 'o'},
        {0x11E, 0x123, 'g'}, {0x139, 0x142, 'l'}, {0x154, 0x159, 'r'},
        {0x162, 0x167, 't'}, {0x10E, 0x111, 'd'},
    };
    for (const auto& r : kRanges) {
        if (cp >= r.lo && cp <= r.hi) return r.out;
    }
    return 0;
}

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (unsigned char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::string normalize_doi(std::string_view doi) {
    std::string d = lower_ascii(trim(doi));
    constexpr std::string_view kPrefix = "https://doi.org/";
    if (d.rfind(kPrefix, 0) == 0) d.erase(0, kPrefix.size());
    return trim(d);
}

std::string normalize_title(std::string_view title) {
    std::string out;
    out.reserve(title.size());
    for (unsigned char c : title) {
        if (c >= 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            out.push_back(' ');
        }
    }
    return collapse_whitespace(out);
}

std::string normalize_link(std::string_view link) {
    std::string l = lower_ascii(trim(link));
    for (std::string_view prefix : {"https://", "http://"}) {
        if (l.rfind(prefix, 0) == 0) {
            l.erase(0, prefix.size());
            break;
        }
    }
    if (l.rfind("www.", 0) == 0) l.erase(0, 4);
    while (!l.empty() && l.back() == '/') l.pop_back();
    return l;
}

std::string surname_key(std::string_view author) {
    std::string name = trim(author);
    const auto comma = name.find(',');
    if (comma != std::string::npos) {
        name = trim(name.substr(0, comma));
    } else {
        const auto sp = name.find_last_of(" \t");
        if (sp != std::string::npos) name = name.substr(sp + 1);
    }
    std::string out;
    out.reserve(name.size());
    for (std::size_t i = 0; i < name.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(name[i]);
        if (c < 0x80) {
            if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
            continue;
        }
        if (i + 1 < name.size()) {
            bool two = false;
            const char folded = fold_latin_pair(c, static_cast<unsigned char>(name[i + 1]), two);
            if (two) {
                if (folded) out.push_back(folded);
                ++i;
                continue;
            }
        }
        // Unknown multibyte sequence: keep the raw byte so distinct names stay distinct.
        out.push_back(static_cast<char>(c));
    }
    return out;
}

std::vector<std::string> tokenize_words(std::string_view s) {
    std::vector<std::string> words;
    std::string cur;
    for (unsigned char c : s) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            words.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

std::set<std::string> content_words(std::string_view s, std::size_t min_len) {
    std::set<std::string> out;
    for (auto& w : tokenize_words(s)) {
        if (w.size() >= min_len) out.insert(std::move(w));
    }
    return out;
}

bool valid_iso_date(std::string_view date) {
    if (date.size() != 10 || date[4] != '-' || date[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(date[i]))) return false;
    }
    const int month = (date[5] - '0') * 10 + (date[6] - '0');
    const int day = (date[8] - '0') * 10 + (date[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

int year_of(std::string_view date) {
    if (date.size() < 4) return -1;
    int y = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(date[i]))) return -1;
        y = y * 10 + (date[i] - '0');
    }
    return y;
}

std::vector<std::string> split_chunks(std::string_view text, std::size_t window, std::size_t overlap) {
    std::vector<std::string> chunks;
    if (window == 0) return chunks;
    if (overlap >= window) overlap = window / 2;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = std::min(pos + window, text.size());
        if (end < text.size()) {
            // Prefer a sentence boundary in the back half of the window.
            std::size_t cut = std::string_view::npos;
            for (std::size_t i = end; i > pos + window / 2; --i) {
                const char c = text[i - 1];
                if ((c == '.' || c == '!' || c == '?') &&
                    (i == text.size() || is_space(static_cast<unsigned char>(text[i])))) {
                    cut = i;
                    break;
                }
            }
            if (cut != std::string_view::npos) end = cut;
        }
        std::string piece = trim(text.substr(pos, end - pos));
        if (!piece.empty()) chunks.push_back(std::move(piece));
        if (end >= text.size()) break;
        pos = (end > pos + overlap) ? end - overlap : pos + 1;
    }
    return chunks;
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fmt_fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

}  // namespace litnav
