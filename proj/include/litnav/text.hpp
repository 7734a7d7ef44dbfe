#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace litnav {

std::string trim(std::string_view s);
std::string lower_ascii(std::string_view s);

// Collapses runs of whitespace to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view s);

// Canonical DOI form: trim, lowercase, strip a leading "https://doi.org/".
std::string normalize_doi(std::string_view doi);

// Canonical title form for exact matching: lowercase, ASCII punctuation
// replaced by spaces, whitespace collapsed. Non-ASCII bytes pass through.
std::string normalize_title(std::string_view title);

// Canonical URL form: lowercase, strip http(s) scheme, leading "www.",
// and any trailing slash.
std::string normalize_link(std::string_view link);

// Last name of an author string, handling both "Last, First" and
// "First Last" forms. Case-folded with common Latin diacritics stripped.
std::string surname_key(std::string_view author);

// Lowercased alphanumeric word tokens.
std::vector<std::string> tokenize_words(std::string_view s);

// Distinct lowercased words of at least min_len characters.
std::set<std::string> content_words(std::string_view s, std::size_t min_len = 4);

// Strict YYYY-MM-DD check (day precision, basic range validation).
bool valid_iso_date(std::string_view date);

// Year prefix of an ISO date or bare year string; -1 if unparseable.
int year_of(std::string_view date);

// Splits text into windows of at most `window` characters with `overlap`
// characters carried between consecutive chunks, preferring to cut at a
// sentence boundary when one exists in the tail of the window.
std::vector<std::string> split_chunks(std::string_view text,
                                      std::size_t window = 1200,
                                      std::size_t overlap = 200);

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 14695981039346656037ULL);

// Fixed-precision decimal formatting, locale-independent ("%.*f").
std::string fmt_fixed(double v, int precision = 6);

}  // namespace litnav
