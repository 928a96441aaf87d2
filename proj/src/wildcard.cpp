#include "omqe/wildcard.hpp"

#include <map>
#include <sstream>

namespace omqe {

bool WildcardTuple::complete() const {
    for (const auto& e : entries)
        if (e.wildcard) return false;
    return true;
}

WildcardTuple parse_tuple(const std::string& text, WildcardMode mode) {
    WildcardTuple t;
    t.mode = mode;
    if (text.empty()) return t;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw WildcardError("empty tuple position");
        item = item.substr(b, e - b + 1);
        if (item[0] != '*') {
            t.entries.push_back(Entry::constant(constant_id(item)));
            continue;
        }
        if (mode == WildcardMode::Single) {
            if (item != "*") throw WildcardError("indexed wildcard '" + item + "' in single-wildcard mode");
            t.entries.push_back(Entry::star());
        } else {
            std::size_t k = 0;
            try {
                k = std::stoul(item.substr(1));
            } catch (const std::exception&) {
                throw WildcardError("malformed wildcard '" + item + "'");
            }
            if (k == 0) throw WildcardError("wildcard indexes start at 1");
            t.entries.push_back(Entry::star(static_cast<Id>(k)));
        }
    }
    return t;
}

std::string print_tuple(const WildcardTuple& t) {
    std::string out;
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        if (i) out += ',';
        const Entry& e = t.entries[i];
        if (!e.wildcard) out += constant_str(e.value);
        else if (t.mode == WildcardMode::Single) out += '*';
        else out += '*' + std::to_string(e.value);
    }
    return out;
}

bool preceq(const WildcardTuple& lower, const WildcardTuple& upper) {
    if (lower.mode != upper.mode) throw WildcardError("wildcard mode mismatch");
    if (lower.size() != upper.size()) throw WildcardError("tuple length mismatch");
    const std::size_t n = lower.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!upper.entries[i].wildcard && lower.entries[i] != upper.entries[i]) return false;
    if (lower.mode == WildcardMode::Single) return true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (upper.entries[i] == upper.entries[j] && lower.entries[i] != lower.entries[j]) return false;
    return true;
}

WildcardTuple renumber(const WildcardTuple& t) {
    WildcardTuple out = t;
    if (t.mode == WildcardMode::Single) return out;
    std::map<Id, Id> fresh;
    for (auto& e : out.entries) {
        if (!e.wildcard) continue;
        auto it = fresh.find(e.value);
        if (it == fresh.end()) it = fresh.emplace(e.value, static_cast<Id>(fresh.size() + 1)).first;
        e.value = it->second;
    }
    return out;
}

}  // namespace omqe
