#pragma once

// Access to the benchmark systems compiled into the tool. Each file starts
// with "# name: description" and "# reference roots: N" comment lines.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsroot/corpus_data.hpp"

namespace hsroot::corpus {

struct Entry {
    std::string_view name;
    std::string_view text;
    std::string description;
    std::optional<int> reference_roots;
};

inline std::string_view header_value(std::string_view text, std::string_view key) {
    const auto pos = text.find(key);
    if (pos == std::string_view::npos) return {};
    auto rest = text.substr(pos + key.size());
    rest = rest.substr(0, rest.find('\n'));
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    return rest;
}

inline std::vector<Entry> entries() {
    std::vector<Entry> out;
    for (const auto& [name, text] : files) {
        Entry e{name, text, {}, std::nullopt};
        const std::string prefix = "# " + std::string(name) + ":";
        e.description = std::string(header_value(text, prefix));
        const auto ref = header_value(text, "# reference roots:");
        if (!ref.empty() && ref != "unknown") e.reference_roots = std::stoi(std::string(ref));
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace hsroot::corpus
