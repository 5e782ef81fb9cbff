#include "cavtk/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cavtk::cli {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                        c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    return v;
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f.good()) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << f.rdbuf();
    Config cfg = from_text(text.str(), path);
    return cfg;
}

Config Config::from_text(const std::string& text, std::string origin) {
    Config cfg;
    cfg.origin_ = std::move(origin);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(cfg.origin_ + ":" + std::to_string(line_no) +
                              ": expected key = value, got '" + line + "'");
        cfg.insert(trim(line.substr(0, eq)), unquote(trim(line.substr(eq + 1))), line_no);
    }
    return cfg;
}

void Config::insert(const std::string& key, std::string value, int line_no) {
    if (!valid_key(key))
        throw ConfigError(origin_ + ":" + std::to_string(line_no) + ": bad key '" + key +
                          "'");
    if (find(key) != nullptr)
        throw ConfigError(origin_ + ":" + std::to_string(line_no) + ": duplicate key '" +
                          key + "'");
    entries_.emplace_back(key, std::move(value));
}

void Config::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) throw ConfigError("override: bad key '" + key + "'");
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

const std::string* Config::find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

std::string Config::require_string(const std::string& key) {
    const std::string* v = find(key);
    if (v == nullptr) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    consumed_[key] = true;
    return *v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
    const std::string* v = find(key);
    if (v == nullptr) return fallback;
    consumed_[key] = true;
    return *v;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": expected a number, got '" + text + "'");
    }
}

double Config::require_double(const std::string& key) {
    return parse_double(require_string(key), origin_ + ": key '" + key + "'");
}

double Config::get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return require_double(key);
}

long long Config::require_int(const std::string& key) {
    const double v = require_double(key);
    if (std::floor(v) != v || std::abs(v) > 9e15)
        throw ConfigError(origin_ + ": key '" + key + "': expected an integer");
    return static_cast<long long>(v);
}

long long Config::get_int(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    return require_int(key);
}

bool Config::get_bool(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = require_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(origin_ + ": key '" + key + "': expected true/false");
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
        if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
}

void Config::reject_unknown() const {
    std::string unknown;
    for (const auto& [k, v] : entries_) {
        if (consumed_.count(k) == 0) {
            if (!unknown.empty()) unknown += ", ";
            unknown += "'" + k + "'";
        }
    }
    if (!unknown.empty())
        throw ConfigError(origin_ + ": unknown key(s) for this task: " + unknown);
}

std::uint64_t Config::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : entries_) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

std::string Config::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

std::string Config::base_dir() const {
    if (origin_.empty() || origin_.front() == '<') return ".";
    const auto parent = std::filesystem::path(origin_).parent_path();
    return parent.empty() ? std::string(".") : parent.string();
}

std::vector<std::string> split_fields(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, '|')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::vector<std::string> split_tokens(const std::string& field) {
    std::vector<std::string> out;
    std::istringstream in(field);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace cavtk::cli
