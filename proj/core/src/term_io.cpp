#include "findmy/term_io.hpp"

#include <cctype>

namespace findmy {

ParseError::ParseError(std::string message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position) {}

namespace {

void render_into(const Term& t, std::string& out) {
  switch (t.symbol()) {
    case Symbol::PublicName:
      out += t.label();
      return;
    case Symbol::FreshName:
      out += '~';
      out += t.label();
      out += '.';
      out += std::to_string(t.fresh_id());
      return;
    case Symbol::Pair:
      out += '<';
      render_into(t.arg(0), out);
      out += ',';
      render_into(t.arg(1), out);
      out += '>';
      return;
    default:
      out += symbol_info(t.symbol()).name;
      out += '(';
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ',';
        render_into(t.arg(i), out);
      }
      out += ')';
  }
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term parse_all() {
    Term t = parse();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) throw ParseError("expected identifier", pos_);
    return std::string(text_.substr(start, pos_ - start));
  }

  Term parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '<') {
      ++pos_;
      std::vector<Term> items{parse()};
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        items.push_back(parse());
        skip_ws();
      }
      expect('>');
      if (items.size() < 2) throw ParseError("pair needs two components", pos_);
      return terms::tuple(std::move(items));
    }
    if (c == '~') {
      ++pos_;
      std::string label = ident();
      std::uint32_t id = 0;
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected fresh-name id", pos_);
        id = static_cast<std::uint32_t>(std::stoul(std::string(text_.substr(start, pos_ - start))));
      }
      return Term::fresh(std::move(label), id);
    }
    std::size_t at = pos_;
    std::string name = ident();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const SymbolInfo* info = find_symbol(name);
      if (!info) throw ParseError("unknown function symbol '" + name + "'", at);
      ++pos_;
      std::vector<Term> args;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] != ')') {
        args.push_back(parse());
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          args.push_back(parse());
          skip_ws();
        }
      }
      expect(')');
      if (static_cast<int>(args.size()) != info->arity) {
        throw ParseError("wrong number of arguments for " + name, at);
      }
      return Term::apply(info->symbol, std::move(args));
    }
    return Term::pub(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render(const Term& t) {
  std::string out;
  render_into(t, out);
  return out;
}

Term parse_term(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace findmy
