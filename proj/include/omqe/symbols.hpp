#ifndef OMQE_SYMBOLS_HPP
#define OMQE_SYMBOLS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

#include <absl/container/flat_hash_map.h>
#include <vector>

namespace omqe {

using Id = std::uint32_t;

/*
 * Role identifiers pack the role name and an inversion bit so that the
 * inverse of a role is a single xor and roles can index flat tables.
 */
using RoleId = std::uint32_t;

inline constexpr RoleId make_role(Id name, bool inverted) { return (name << 1) | (inverted ? 1u : 0u); }
inline constexpr RoleId inv(RoleId r) { return r ^ 1u; }
inline constexpr Id role_name(RoleId r) { return r >> 1; }
inline constexpr bool is_inverse(RoleId r) { return (r & 1u) != 0; }

// Dense string <-> id table. Ids are handed out in first-seen order.
class Interner {
public:
    Id intern(std::string_view s);
    // Returns size() when the string is unknown.
    Id find(std::string_view s) const;
    const std::string& name(Id id) const { return names_[id]; }
    std::size_t size() const { return names_.size(); }

private:
    absl::flat_hash_map<std::string, Id> ids_;
    std::vector<std::string> names_;
};

// Process-wide symbol tables. Concept id 0 is reserved for top.
Interner& concept_names();
Interner& role_names();
Interner& constant_names();

inline constexpr Id kTop = 0;

Id concept_id(std::string_view s);
Id role_name_id(std::string_view s);
Id constant_id(std::string_view s);

const std::string& concept_str(Id a);
const std::string& role_name_str(Id r);
std::string role_str(RoleId r);  // "r" or "inv(r)"
const std::string& constant_str(Id c);

// Nulls are constants whose printed name starts with "_n".
bool is_null_name(std::string_view s);
// A constant name that has not been interned yet, with the given prefix.
Id fresh_constant(std::string_view prefix);
// A concept name that has not been interned yet, with the given prefix.
Id fresh_concept(std::string_view prefix);

}  // namespace omqe

#endif
