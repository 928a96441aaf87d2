#ifndef OMQE_SYNTAX_HPP
#define OMQE_SYNTAX_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "omqe/model.hpp"

namespace omqe {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Text formats. One axiom / fact per line, '#' starts a comment.
Ontology parse_ontology(std::string_view text);
Database parse_database(std::string_view text);
// Variables are numbered in order of first occurrence in the body.
CQ parse_query(std::string_view text);

std::string print_concept(const Concept& c);
std::string print_ontology(const Ontology& o);
std::string print_database(const Database& d);
std::string print_query(const CQ& q);

std::string read_file(const std::string& path);  // throws std::runtime_error

}  // namespace omqe

#endif
