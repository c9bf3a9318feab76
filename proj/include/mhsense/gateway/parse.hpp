#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mhsense::gateway {

// Ordered label->value map extracted from a strictly formatted model reply.
struct LabeledOutput {
    std::vector<std::pair<std::string, std::string>> fields;

    bool has(const std::string& label) const;
    const std::string& text(const std::string& label) const;
    long long number(const std::string& label) const;
};

// Extracts each `LABEL: value` span from `text`. A value runs from its label
// to the next expected label (or the end of text) and is trimmed. Labels in
// `numeric` must parse as integers.
//
// Throws MissingLabel / MalformedNumeric; both signal the caller to retry the
// request.
LabeledOutput parse_labeled(const std::string& text, const std::vector<std::string>& expected,
                            const std::set<std::string>& numeric = {});

// Returns the lines beginning with "# " with the marker stripped, in order.
// Blank and unmarked lines are ignored. Throws EmptyList when nothing is
// marked; callers for whom an empty list is legitimate catch it.
std::vector<std::string> parse_hash_list(const std::string& text);

// Splits a hash-list item of the form "<text> : <Label>" on its final " : ".
// Throws UnknownLabelToken when there is no separator.
std::pair<std::string, std::string> split_label_suffix(const std::string& item);

}  // namespace mhsense::gateway
