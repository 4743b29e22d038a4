#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vispath {

/// One "[name]" block of a key-value file; the leading unnamed block has
/// name "". Grammar: one `key = value` per line, '#' starts a comment,
/// blank lines ignored.
struct KeyValueSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(const std::string& key) const;
    double get_num(const std::string& key, double fallback) const;
    double require_num(const std::string& key) const;
};

std::vector<KeyValueSection> read_keyvalue(const std::filesystem::path& path);
std::vector<KeyValueSection> parse_keyvalue(const std::string& text);
void write_keyvalue(const std::vector<KeyValueSection>& sections,
                    const std::filesystem::path& path);

}  // namespace vispath
