#ifndef OMQE_WILDCARD_HPP
#define OMQE_WILDCARD_HPP

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

#include "omqe/symbols.hpp"

namespace omqe {

enum class WildcardMode { Single, Multi };

// One position of an answer tuple: a constant, the single wildcard '*', or an
// indexed wildcard '*k' (k >= 1).
struct Entry {
    bool wildcard = false;
    Id value = 0;  // constant id, or wildcard index (0 for '*')

    static Entry constant(Id c) { return {false, c}; }
    static Entry star(Id k = 0) { return {true, k}; }
    auto operator<=>(const Entry&) const = default;
};

struct WildcardTuple {
    WildcardMode mode = WildcardMode::Single;
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }
    bool complete() const;
    auto operator<=>(const WildcardTuple&) const = default;
    bool operator==(const WildcardTuple&) const = default;
};

class WildcardError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// "a,*,b" or "*1,tesla,tesla". Unknown constants are interned.
WildcardTuple parse_tuple(const std::string& text, WildcardMode mode);
std::string print_tuple(const WildcardTuple& t);

// t' ≼ t: t' is at least as informative as t. Throws WildcardError on
// length or mode mismatch.
bool preceq(const WildcardTuple& lower, const WildcardTuple& upper);
inline bool strictly_below(const WildcardTuple& a, const WildcardTuple& b) { return a != b && preceq(a, b); }

// Renumber wildcards by first occurrence (multi mode).
WildcardTuple renumber(const WildcardTuple& t);

}  // namespace omqe

#endif
