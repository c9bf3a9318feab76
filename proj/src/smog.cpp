#include "mhsense/evals/smog.hpp"

#include <array>
#include <cctype>
#include <cmath>

#include "mhsense/errors.hpp"
#include "mhsense/util.hpp"

namespace mhsense::evals {

namespace {

constexpr double kSlope = 1.0430;
constexpr double kSentenceNorm = 30.0;
constexpr double kIntercept = 3.1291;

bool is_vowel(char c) {
    switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
            return true;
        default:
            return false;
    }
}

bool is_word_char(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '\'';
}

// Tokens that end with '.' without ending a sentence.
const std::array<std::string, 12> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "st", "vs", "etc", "e.g", "i.e", "approx", "fig", "no",
};

bool token_is_abbreviation(const std::string& token) {
    const std::string t = to_lower(token);
    for (const auto& abbr : kAbbreviations) {
        if (t == abbr) return true;
    }
    return false;
}

}  // namespace

long count_syllables(const std::string& word) {
    std::string w;
    w.reserve(word.size());
    for (char c : word) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (w.empty()) return 0;

    long groups = 0;
    bool in_group = false;
    for (char c : w) {
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }

    const std::size_t n = w.size();
    // silent trailing e ("make"), but consonant+le is its own syllable ("terrible")
    if (n >= 2 && w[n - 1] == 'e' && !is_vowel(w[n - 2]) && groups > 1) {
        if (!(n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]))) --groups;
    }
    // silent -ed ("walked", "explained"); pronounced after t/d ("wanted")
    if (n >= 3 && w[n - 2] == 'e' && w[n - 1] == 'd' && groups > 1) {
        const char before = w[n - 3];
        if (!is_vowel(before) && before != 't' && before != 'd') --groups;
    }
    // silent -es after a non-sibilant consonant ("makes"; "boxes" keeps it)
    if (n >= 3 && w[n - 2] == 'e' && w[n - 1] == 's' && groups > 1) {
        const char before = w[n - 3];
        if (!is_vowel(before) && before != 's' && before != 'c' && before != 'x' &&
            before != 'z' && before != 'g' && before != 'h')
            --groups;
    }
    return std::max<long>(groups, 1);
}

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (is_word_char(c)) {
            current.push_back(c);
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::string current;

    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        current.push_back(c);
        if (c != '.' && c != '!' && c != '?') continue;

        // Look past closing quotes/brackets and repeated terminators.
        std::size_t j = i + 1;
        while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?' || text[j] == '"' ||
                         text[j] == '\'' || text[j] == ')' || text[j] == ']')) {
            current.push_back(text[j]);
            ++j;
        }
        const bool at_end = j >= n;
        const bool followed_by_space =
            !at_end && std::isspace(static_cast<unsigned char>(text[j]));
        if (!at_end && !followed_by_space) {
            i = j - 1;
            continue;  // decimal point or embedded punctuation
        }
        if (c == '.') {
            // decimal numbers ("38.1") and abbreviations do not terminate
            const bool digit_before =
                current.size() >= 2 && std::isdigit(static_cast<unsigned char>(
                                           current[current.size() - 2]));
            const bool digit_after = !at_end && j + 1 < n &&
                                     std::isdigit(static_cast<unsigned char>(text[j + 1]));
            if (digit_before && digit_after) {
                i = j - 1;
                continue;
            }
            std::string last_token;
            for (auto it = current.rbegin() + 1; it != current.rend(); ++it) {
                if (std::isalpha(static_cast<unsigned char>(*it)) || *it == '.')
                    last_token.insert(last_token.begin(), *it);
                else
                    break;
            }
            if (!last_token.empty() && last_token.back() == '.') last_token.pop_back();
            if (token_is_abbreviation(last_token)) {
                i = j - 1;
                continue;
            }
        }
        if (!split_words(current).empty()) sentences.push_back(trim(current));
        current.clear();
        i = j - 1;
    }
    if (!split_words(current).empty()) sentences.push_back(trim(current));
    return sentences;
}

SmogScore smog(const std::vector<std::string>& texts) {
    std::string combined;
    for (const auto& t : texts) {
        combined += t;
        combined += '\n';
    }
    const auto sentences = split_sentences(combined);
    if (sentences.empty()) throw NoSentences();

    long polysyllables = 0;
    for (const auto& word : split_words(combined)) {
        if (count_syllables(word) >= 3) ++polysyllables;
    }

    SmogScore score;
    score.sentence_count = static_cast<long>(sentences.size());
    score.polysyllable_count = polysyllables;
    score.grade = kSlope * std::sqrt(static_cast<double>(polysyllables) * kSentenceNorm /
                                     static_cast<double>(score.sentence_count)) +
                  kIntercept;
    return score;
}

}  // namespace mhsense::evals
