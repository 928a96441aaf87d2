#include "omqe/symbols.hpp"

namespace omqe {

Id Interner::intern(std::string_view s) {
    auto it = ids_.find(absl::string_view(s.data(), s.size()));
    if (it != ids_.end()) return it->second;
    Id id = static_cast<Id>(names_.size());
    names_.emplace_back(s);
    ids_.emplace(names_.back(), id);
    return id;
}

Id Interner::find(std::string_view s) const {
    auto it = ids_.find(absl::string_view(s.data(), s.size()));
    return it == ids_.end() ? static_cast<Id>(names_.size()) : it->second;
}

Interner& concept_names() {
    static Interner table = [] {
        Interner t;
        t.intern("top");
        return t;
    }();
    return table;
}

Interner& role_names() {
    static Interner table;
    return table;
}

Interner& constant_names() {
    static Interner table;
    return table;
}

Id concept_id(std::string_view s) { return concept_names().intern(s); }
Id role_name_id(std::string_view s) { return role_names().intern(s); }
Id constant_id(std::string_view s) { return constant_names().intern(s); }

const std::string& concept_str(Id a) { return concept_names().name(a); }
const std::string& role_name_str(Id r) { return role_names().name(r); }
const std::string& constant_str(Id c) { return constant_names().name(c); }

std::string role_str(RoleId r) {
    const std::string& n = role_name_str(role_name(r));
    return is_inverse(r) ? "inv(" + n + ")" : n;
}

bool is_null_name(std::string_view s) { return s.size() > 2 && s[0] == '_' && s[1] == 'n'; }

namespace {
Id fresh_in(Interner& table, std::string_view prefix) {
    // Counter continues across calls so repeated requests stay cheap.
    static std::unordered_map<const Interner*, std::size_t> next;
    std::size_t& k = next[&table];
    std::string base(prefix);
    for (;;) {
        std::string cand = base + std::to_string(k++);
        if (table.find(cand) == table.size()) return table.intern(cand);
    }
}
}  // namespace

Id fresh_constant(std::string_view prefix) { return fresh_in(constant_names(), prefix); }
Id fresh_concept(std::string_view prefix) { return fresh_in(concept_names(), prefix); }

}  // namespace omqe
