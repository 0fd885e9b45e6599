#include "gridcert/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace gridcert::toml {

namespace {

bool bare_key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Table run() {
        Table root;
        root.line = 1;
        Table* current = &root;
        while (true) {
            skip_blank_and_comments();
            if (at_end()) break;
            if (peek() == '[') {
                current = header(root);
            } else {
                key_value(*current);
            }
            end_of_line();
        }
        return root;
    }

private:
    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return at_end() ? '\0' : text_[pos_]; }
    char get() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseFailure(line_, col_, msg); }

    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
    }
    void skip_blank_and_comments() {
        while (!at_end()) {
            skip_ws();
            if (peek() == '#') {
                while (!at_end() && peek() != '\n') get();
            }
            if (peek() == '\n') {
                get();
                continue;
            }
            break;
        }
    }
    void end_of_line() {
        skip_ws();
        if (peek() == '#') {
            while (!at_end() && peek() != '\n') get();
        }
        if (at_end()) return;
        if (peek() != '\n') fail(std::string("unexpected character '") + peek() + "'");
        get();
    }

    std::string key() {
        skip_ws();
        std::string k;
        if (peek() == '"') return basic_string();
        while (!at_end() && bare_key_char(peek())) k.push_back(get());
        if (k.empty()) fail("expected a key");
        return k;
    }

    std::vector<std::string> dotted_key() {
        std::vector<std::string> parts{key()};
        skip_ws();
        while (peek() == '.') {
            get();
            parts.push_back(key());
            skip_ws();
        }
        return parts;
    }

    Table* header(Table& root) {
        const int hl = line_;
        get();
        const bool array = peek() == '[';
        if (array) get();
        const auto parts = dotted_key();
        skip_ws();
        if (peek() != ']') fail("expected ']'");
        get();
        if (array) {
            if (peek() != ']') fail("expected ']]'");
            get();
        }
        Table* t = &root;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) t = descend(*t, parts[i]);
        const std::string& last = parts.back();
        if (array) {
            if (t->values.count(last) || t->tables.count(last)) fail("'" + last + "' is already defined");
            auto nt = std::make_shared<Table>();
            nt->line = hl;
            t->arrays[last].push_back(nt);
            return nt.get();
        }
        if (t->values.count(last) || t->arrays.count(last)) fail("'" + last + "' is already defined");
        auto& slot = t->tables[last];
        if (slot) fail("table '" + last + "' defined twice");
        slot = std::make_shared<Table>();
        slot->line = hl;
        return slot.get();
    }

    Table* descend(Table& t, const std::string& k) {
        if (auto it = t.arrays.find(k); it != t.arrays.end() && !it->second.empty()) return it->second.back().get();
        auto& slot = t.tables[k];
        if (!slot) {
            slot = std::make_shared<Table>();
            slot->line = line_;
        }
        return slot.get();
    }

    void key_value(Table& t) {
        const int kl = line_;
        const int kc = col_;
        const auto parts = dotted_key();
        skip_ws();
        if (peek() != '=') fail("expected '=' after key");
        get();
        skip_ws();
        Value v = value();
        Table* target = &t;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) target = descend(*target, parts[i]);
        const std::string& last = parts.back();
        if (target->values.count(last) || target->tables.count(last) || target->arrays.count(last)) {
            throw ParseFailure(kl, kc, "duplicate key '" + last + "'");
        }
        target->values[last] = std::move(v);
    }

    std::string basic_string() {
        get();
        std::string s;
        while (true) {
            if (at_end() || peek() == '\n') fail("unterminated string");
            const char c = get();
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) fail("unterminated escape");
                const char e = get();
                switch (e) {
                    case 'n': s.push_back('\n'); break;
                    case 't': s.push_back('\t'); break;
                    case '"': s.push_back('"'); break;
                    case '\\': s.push_back('\\'); break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
                continue;
            }
            s.push_back(c);
        }
        return s;
    }

    Value value() {
        Value v;
        v.line = line_;
        v.column = col_;
        const char c = peek();
        if (c == '"') {
            v.data = basic_string();
            return v;
        }
        std::string tok;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '+' ||
                             peek() == '-' || peek() == '_')) {
            tok.push_back(get());
        }
        if (tok.empty()) fail("expected a value");
        if (tok == "true" || tok == "false") {
            v.data = tok == "true";
            return v;
        }
        std::string digits;
        for (std::size_t i = 0; i < tok.size(); ++i) {
            if (tok[i] == '_') {
                if (i == 0 || i + 1 == tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i - 1])) ||
                    !std::isdigit(static_cast<unsigned char>(tok[i + 1]))) {
                    throw ParseFailure(v.line, v.column, "misplaced '_' in number '" + tok + "'");
                }
                continue;
            }
            digits.push_back(tok[i]);
        }
        const char* b = digits.data();
        if (*b == '+') ++b;
        double d = 0.0;
        const auto [p, ec] = std::from_chars(b, digits.data() + digits.size(), d);
        if (ec != std::errc() || p != digits.data() + digits.size()) {
            throw ParseFailure(v.line, v.column, "invalid value '" + tok + "'");
        }
        v.integer = digits.find_first_of(".eE") == std::string::npos;
        v.data = d;
        return v;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

Table parse(const std::string& text) { return Parser(text).run(); }

}  // namespace gridcert::toml
