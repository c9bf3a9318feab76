#include "mhsense/gateway/parse.hpp"

#include <algorithm>
#include <cctype>

#include "mhsense/errors.hpp"
#include "mhsense/util.hpp"

namespace mhsense::gateway {

bool LabeledOutput::has(const std::string& label) const {
    return std::any_of(fields.begin(), fields.end(),
                       [&](const auto& kv) { return kv.first == label; });
}

const std::string& LabeledOutput::text(const std::string& label) const {
    for (const auto& [k, v] : fields) {
        if (k == label) return v;
    }
    throw MissingLabel(label);
}

long long LabeledOutput::number(const std::string& label) const {
    const std::string& raw = text(label);
    std::size_t pos = 0;
    long long value = 0;
    try {
        value = std::stoll(raw, &pos);
    } catch (const std::exception&) {
        throw MalformedNumeric(label, raw);
    }
    if (pos != raw.size()) throw MalformedNumeric(label, raw);
    return value;
}

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// First position where `label` appears followed by ':' and not embedded in a
// longer identifier. npos when absent.
std::size_t find_label(const std::string& text, const std::string& label) {
    std::size_t pos = 0;
    while ((pos = text.find(label, pos)) != std::string::npos) {
        const std::size_t end = pos + label.size();
        const bool boundary_before = pos == 0 || !is_word_char(text[pos - 1]);
        if (boundary_before && end < text.size() && text[end] == ':') return pos;
        pos = end;
    }
    return std::string::npos;
}

}  // namespace

LabeledOutput parse_labeled(const std::string& text, const std::vector<std::string>& expected,
                            const std::set<std::string>& numeric) {
    struct Hit {
        std::size_t pos;
        std::size_t value_start;
        std::string label;
    };
    std::vector<Hit> hits;
    for (const auto& label : expected) {
        std::size_t pos = find_label(text, label);
        if (pos == std::string::npos) throw MissingLabel(label);
        hits.push_back({pos, pos + label.size() + 1, label});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });

    LabeledOutput out;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const std::size_t end = i + 1 < hits.size() ? hits[i + 1].pos : text.size();
        std::string value = trim(std::string_view(text).substr(
            hits[i].value_start, end - hits[i].value_start));
        out.fields.emplace_back(hits[i].label, std::move(value));
    }
    for (const auto& label : numeric) {
        if (out.has(label)) out.number(label);  // validates, throws MalformedNumeric
    }
    return out;
}

std::vector<std::string> parse_hash_list(const std::string& text) {
    std::vector<std::string> items;
    for (const auto& raw : split_lines(text)) {
        std::string_view line(raw);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
            line.remove_prefix(1);
        if (line.empty() || line.front() != '#') continue;
        line.remove_prefix(1);
        std::string item = trim(line);
        if (!item.empty()) items.push_back(std::move(item));
    }
    if (items.empty()) throw EmptyList();
    return items;
}

std::pair<std::string, std::string> split_label_suffix(const std::string& item) {
    const std::size_t sep = item.rfind(" : ");
    if (sep == std::string::npos) throw UnknownLabelToken(item);
    std::string body = trim(std::string_view(item).substr(0, sep));
    std::string label = trim(std::string_view(item).substr(sep + 3));
    // The format description quotes the labels; tolerate echoed quotes.
    if (label.size() >= 2 && label.front() == '\'' && label.back() == '\'')
        label = label.substr(1, label.size() - 2);
    return {std::move(body), std::move(label)};
}

}  // namespace mhsense::gateway
