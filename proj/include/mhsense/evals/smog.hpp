#pragma once

#include <string>
#include <vector>

namespace mhsense::evals {

// grade = 1.0430 * sqrt(polysyllables * 30 / sentences) + 3.1291, where a
// polysyllable is a word of three or more syllables. Computed natively.
struct SmogScore {
    double grade = 0;
    long polysyllable_count = 0;
    long sentence_count = 0;

    bool operator==(const SmogScore&) const = default;
};

// Throws NoSentences when the concatenated text has no sentence.
SmogScore smog(const std::vector<std::string>& texts);

// Heuristic syllable count: vowel groups (y vocalic), silent trailing e
// (kept after consonant+l), silent -ed/-es endings, minimum one.
long count_syllables(const std::string& word);

// Sentences end at . ! ? followed by whitespace or end of text; decimal
// points and common abbreviations do not terminate.
std::vector<std::string> split_sentences(const std::string& text);

std::vector<std::string> split_words(const std::string& text);

}  // namespace mhsense::evals
