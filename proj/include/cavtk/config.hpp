#pragma once

// Flat key = value run configuration files.
//
// Grammar: one `key = value` pair per line, '#' starts a comment,
// blank lines ignored. Keys are [A-Za-z0-9_.-]+; values keep interior
// whitespace and may be wrapped in double quotes. Duplicate keys are
// rejected. Every key must be consumed by the subcommand schema;
// reject_unknown() reports the leftovers, which turns typos into
// errors instead of silent defaults.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavtk::cli {

// Invalid configuration input (bad syntax, unknown or missing keys,
// unparsable values). Distinct from numerical failures so the two map
// to different exit codes.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text, std::string origin = "<inline>");

    // Command-line override (--set key=value); replaces or adds the
    // entry and feeds the config hash like file content does.
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;

    std::string require_string(const std::string& key);
    std::string get_string(const std::string& key, const std::string& fallback);
    double require_double(const std::string& key);
    double get_double(const std::string& key, double fallback);
    long long require_int(const std::string& key);
    long long get_int(const std::string& key, long long fallback);
    bool get_bool(const std::string& key, bool fallback);

    // Keys sharing a prefix, in file order (e.g. "material.").
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    // Throws ConfigError listing every key no getter has touched.
    void reject_unknown() const;

    // FNV-1a over the canonical "key=value" listing in file order,
    // overrides included; stable across comments and whitespace.
    std::uint64_t hash() const;
    std::string hash_hex() const;

    const std::string& origin() const { return origin_; }
    // Directory of the config file, for resolving relative paths.
    std::string base_dir() const;

private:
    const std::string* find(const std::string& key) const;
    void insert(const std::string& key, std::string value, int line_no);

    std::vector<std::pair<std::string, std::string>> entries_;
    mutable std::map<std::string, bool> consumed_;
    std::string origin_ = "<empty>";
};

// Splits a pipe-separated list value into trimmed, non-empty fields.
std::vector<std::string> split_fields(const std::string& value);
// Whitespace-separated tokens of one field.
std::vector<std::string> split_tokens(const std::string& field);
// Numeric parse with a ConfigError mentioning `what` on failure.
double parse_double(const std::string& text, const std::string& what);

}  // namespace cavtk::cli
