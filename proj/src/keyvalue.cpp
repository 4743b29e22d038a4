#include "vispath/keyvalue.hpp"

#include <fstream>
#include <sstream>

#include "vispath/error.hpp"

namespace vispath {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::optional<std::string> KeyValueSection::get(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

double KeyValueSection::get_num(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stod(*v);
    } catch (...) {
        fail(Err::InvalidArgument, "non-numeric value for key '" + key + "': " + *v);
    }
}

double KeyValueSection::require_num(const std::string& key) const {
    auto v = get(key);
    if (!v) fail(Err::InvalidArgument, "missing required key '" + key + "'");
    try {
        return std::stod(*v);
    } catch (...) {
        fail(Err::InvalidArgument, "non-numeric value for key '" + key + "': " + *v);
    }
}

std::vector<KeyValueSection> parse_keyvalue(const std::string& text) {
    std::vector<KeyValueSection> sections;
    sections.push_back({"", {}});
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(Err::InvalidArgument, "line " + std::to_string(lineno) + ": unterminated section");
            sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(Err::InvalidArgument, "line " + std::to_string(lineno) + ": expected key = value");
        sections.back().entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return sections;
}

std::vector<KeyValueSection> read_keyvalue(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Err::IoFailure, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_keyvalue(ss.str());
}

void write_keyvalue(const std::vector<KeyValueSection>& sections,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Err::IoFailure, "cannot open " + path.string() + " for writing");
    for (const auto& sec : sections) {
        if (!sec.name.empty()) out << "[" << sec.name << "]\n";
        for (const auto& [k, v] : sec.entries) out << k << " = " << v << "\n";
    }
    if (!out) fail(Err::IoFailure, "write failed for " + path.string());
}

}  // namespace vispath
