#include "smartband/kvdoc.hpp"

#include <cstdio>
#include <cstdlib>

#include "smartband/errors.hpp"

namespace smartband::kv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

void KvDoc::set(std::string key, std::string value) {
    entries_[std::move(key)] = std::move(value);
}

void KvDoc::set_f64(std::string key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    set(std::move(key), buf);
}

void KvDoc::set_u64(std::string key, std::uint64_t value) {
    set(std::move(key), std::to_string(value));
}

void KvDoc::set_bool(std::string key, bool value) {
    set(std::move(key), value ? "true" : "false");
}

std::optional<std::string_view> KvDoc::get(std::string_view key) const {
    auto it = entries_.find(std::string(key));
    if (it == entries_.end()) return std::nullopt;
    return std::string_view(it->second);
}

std::string KvDoc::get_or_throw(std::string_view key) const {
    auto value = get(key);
    if (!value) throw ConfigError("missing key '" + std::string(key) + "'");
    return std::string(*value);
}

double KvDoc::get_f64(std::string_view key) const {
    std::string text = get_or_throw(key);
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty()) {
        throw ConfigError("key '" + std::string(key) + "' is not a number: '" +
                          text + "'");
    }
    return value;
}

std::uint64_t KvDoc::get_u64(std::string_view key) const {
    std::string text = get_or_throw(key);
    char* end = nullptr;
    unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty() ||
        text.front() == '-') {
        throw ConfigError("key '" + std::string(key) +
                          "' is not a non-negative integer: '" + text + "'");
    }
    return value;
}

bool KvDoc::get_bool(std::string_view key) const {
    std::string text = get_or_throw(key);
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError("key '" + std::string(key) + "' is not a bool: '" +
                      text + "'");
}

bool KvDoc::contains(std::string_view key) const {
    return entries_.count(std::string(key)) != 0;
}

std::string KvDoc::serialize() const {
    std::string out;
    for (const auto& [key, value] : entries_) {
        out += key;
        out += ": ";
        out += value;
        out += '\n';
    }
    return out;
}

KvDoc KvDoc::parse(std::string_view raw) {
    KvDoc doc;
    std::size_t line_no = 0;
    while (!raw.empty()) {
        ++line_no;
        std::size_t nl = raw.find('\n');
        std::string_view line =
            nl == std::string_view::npos ? raw : raw.substr(0, nl);
        raw.remove_prefix(nl == std::string_view::npos ? raw.size() : nl + 1);

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key: value', got '" +
                              std::string(line) + "'");
        }
        std::string_view key = trim(line.substr(0, colon));
        std::string_view value = trim(line.substr(colon + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": empty key");
        }
        doc.set(std::string(key), std::string(value));
    }
    return doc;
}

std::string KvDoc::index_key(std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%02zu", i);
    return buf;
}

}  // namespace smartband::kv
