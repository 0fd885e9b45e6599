#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gridcert/error.hpp"

// Minimal TOML reader: [table], [[array]], dotted sub-tables of the last
// array element, bare keys, numbers, basic strings, booleans, # comments.
namespace gridcert::toml {

class ParseFailure : public Error {
public:
    ParseFailure(int line, int column, const std::string& msg)
        : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct Value {
    std::variant<double, std::string, bool> data;
    bool integer = false;
    int line = 0;
    int column = 0;

    [[nodiscard]] bool is_number() const noexcept { return std::holds_alternative<double>(data); }
    [[nodiscard]] bool is_string() const noexcept { return std::holds_alternative<std::string>(data); }
    [[nodiscard]] bool is_bool() const noexcept { return std::holds_alternative<bool>(data); }
};

struct Table {
    std::map<std::string, Value> values;
    std::map<std::string, std::shared_ptr<Table>> tables;
    std::map<std::string, std::vector<std::shared_ptr<Table>>> arrays;
    int line = 0;
};

[[nodiscard]] Table parse(const std::string& text);

}  // namespace gridcert::toml
