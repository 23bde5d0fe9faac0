#include "findmy/lemma.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "findmy/term_io.hpp"

namespace findmy {
namespace {

// ---------------------------------------------------------------- lexing

struct Token {
  enum class Kind { Ident, Quoted, Punct, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (c == '\'') {
      std::size_t j = s.find('\'', i + 1);
      if (j == std::string_view::npos) throw LemmaError("unterminated constant at " + std::to_string(i));
      out.push_back({Token::Kind::Quoted, std::string(s.substr(i + 1, j - i - 1)), i});
      i = j + 1;
      continue;
    }
    if (s.substr(i, 3) == "==>") {
      out.push_back({Token::Kind::Punct, "==>", i});
      i += 3;
      continue;
    }
    if (std::string_view("()<>,.@|&=#").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), i});
      ++i;
      continue;
    }
    throw LemmaError(std::string("unexpected character '") + c + "' at " + std::to_string(i));
  }
  out.push_back({Token::Kind::End, "", s.size()});
  return out;
}

// --------------------------------------------------------------- parsing

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  FormulaPtr parse() {
    auto f = formula();
    if (peek().kind != Token::Kind::End) fail("trailing input");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(std::string_view p, std::size_t k = 0) const {
    const auto& t = peek(k);
    return t.kind != Token::Kind::End && t.kind != Token::Kind::Quoted && t.text == p;
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  void expect(std::string_view p) {
    if (!at(p)) fail("expected '" + std::string(p) + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw LemmaError(msg + " at " + std::to_string(peek().pos));
  }

  const QuantVar* lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) return &*it;
    }
    return nullptr;
  }

  FormulaPtr formula() {
    if (at("All") || at("Ex")) {
      Formula q{take().text == "All" ? Formula::Kind::All : Formula::Kind::Ex};
      while (!at(".")) {
        bool time = false;
        if (at("#")) {
          ++pos_;
          time = true;
        }
        if (peek().kind != Token::Kind::Ident) fail("expected variable name");
        q.vars.push_back({take().text, time});
      }
      if (q.vars.empty()) fail("quantifier without variables");
      expect(".");
      auto mark = scope_.size();
      scope_.insert(scope_.end(), q.vars.begin(), q.vars.end());
      q.children.push_back(formula());
      scope_.resize(mark);
      return make(std::move(q));
    }
    return implication();
  }

  FormulaPtr implication() {
    auto lhs = disjunction();
    if (!at("==>")) return lhs;
    ++pos_;
    return make({Formula::Kind::Implies, {}, {lhs, formula()}});
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (at("|")) {
      ++pos_;
      parts.push_back(at("All") || at("Ex") ? formula() : conjunction());
    }
    return parts.size() == 1 ? parts[0] : make({Formula::Kind::Or, {}, std::move(parts)});
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{unary()};
    while (at("&")) {
      ++pos_;
      parts.push_back(at("All") || at("Ex") ? formula() : unary());
    }
    return parts.size() == 1 ? parts[0] : make({Formula::Kind::And, {}, std::move(parts)});
  }

  FormulaPtr unary() {
    if (at("not")) {
      ++pos_;
      return make({Formula::Kind::Not, {}, {at("All") || at("Ex") ? formula() : unary()}});
    }
    if (at("(")) {
      ++pos_;
      auto f = formula();
      expect(")");
      return f;
    }
    return atom();
  }

  bool time_operand_next() const {
    if (at("#")) return true;
    if (peek().kind != Token::Kind::Ident) return false;
    const auto* v = lookup(peek().text);
    return v && v->time && !at("(", 1);
  }

  std::string time_ref() {
    if (at("#")) ++pos_;
    if (peek().kind != Token::Kind::Ident) fail("expected timepoint");
    auto name = take().text;
    const auto* v = lookup(name);
    if (!v) fail("unbound timepoint '" + name + "'");
    if (!v->time) fail("'" + name + "' is not a timepoint");
    return name;
  }

  FormulaPtr atom() {
    if (time_operand_next()) {
      auto a = time_ref();
      if (at("<")) {
        ++pos_;
        auto b = time_ref();
        Formula f{Formula::Kind::Less};
        f.lhs_time = a;
        f.rhs_time = b;
        return make(std::move(f));
      }
      if (at("=")) {
        ++pos_;
        auto b = time_ref();
        Formula f{Formula::Kind::TimeEq};
        f.lhs_time = a;
        f.rhs_time = b;
        return make(std::move(f));
      }
      fail("expected '<' or '=' after timepoint");
    }
    if (peek().kind == Token::Kind::Ident && at("(", 1)) {
      const auto& name = peek().text;
      if (name == "K") {
        pos_ += 2;
        Formula f{Formula::Kind::Know};
        f.patterns.push_back(pattern());
        expect(")");
        expect("@");
        f.time = time_ref();
        return make(std::move(f));
      }
      if (auto kind = parse_event_kind(name)) {
        pos_ += 2;
        Formula f{Formula::Kind::Event};
        f.event = *kind;
        if (!at(")")) {
          f.patterns.push_back(pattern());
          while (at(",")) {
            ++pos_;
            f.patterns.push_back(pattern());
          }
        }
        expect(")");
        if (static_cast<int>(f.patterns.size()) != event_arity(*kind)) {
          fail(std::string(event_name(*kind)) + " expects " + std::to_string(event_arity(*kind)) + " arguments");
        }
        expect("@");
        f.time = time_ref();
        return make(std::move(f));
      }
    }
    Formula f{Formula::Kind::TermEq};
    f.patterns.push_back(pattern());
    expect("=");
    f.patterns.push_back(pattern());
    return make(std::move(f));
  }

  Pattern pattern() {
    if (at("<")) {
      ++pos_;
      std::vector<Pattern> items{pattern()};
      while (at(",")) {
        ++pos_;
        items.push_back(pattern());
      }
      expect(">");
      if (items.size() < 2) fail("tuple needs at least two components");
      Pattern p = items.back();
      for (std::size_t i = items.size() - 1; i-- > 0;) {
        Pattern pair{Pattern::Kind::App, {}, Symbol::Pair, {items[i], p}};
        p = std::move(pair);
      }
      return p;
    }
    if (peek().kind == Token::Kind::Quoted) {
      auto t = take();
      if (t.text.empty()) fail("empty constant");
      return {Pattern::Kind::Const, t.text};
    }
    if (peek().kind != Token::Kind::Ident) fail("expected term");
    auto name = take().text;
    if (name == "_") return {Pattern::Kind::Wildcard};
    if (at("(")) {
      const auto* info = find_symbol(name);
      if (!info) fail("unknown function symbol '" + name + "'");
      ++pos_;
      Pattern p{Pattern::Kind::App, {}, info->symbol};
      if (!at(")")) {
        p.args.push_back(pattern());
        while (at(",")) {
          ++pos_;
          p.args.push_back(pattern());
        }
      }
      expect(")");
      if (static_cast<int>(p.args.size()) != info->arity) fail(name + " expects " + std::to_string(info->arity) + " arguments");
      return p;
    }
    const auto* v = lookup(name);
    if (!v) fail("unbound variable '" + name + "'");
    if (v->time) fail("timepoint '" + name + "' used as a term");
    return {Pattern::Kind::Var, name};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<QuantVar> scope_;
};

// ------------------------------------------------------------- rendering

std::string render_pattern(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Var: return p.name;
    case Pattern::Kind::Wildcard: return "_";
    case Pattern::Kind::Const: return "'" + p.name + "'";
    case Pattern::Kind::App: {
      if (p.symbol == Symbol::Pair) return "<" + render_pattern(p.args[0]) + ", " + render_pattern(p.args[1]) + ">";
      std::string s(symbol_info(p.symbol).name);
      s += "(";
      for (std::size_t i = 0; i < p.args.size(); ++i) s += (i ? ", " : "") + render_pattern(p.args[i]);
      return s + ")";
    }
  }
  return "?";
}

std::string render_in(const Formula& f, bool nested) {
  auto wrap = [&](std::string s) { return nested ? "(" + s + ")" : s; };
  auto join = [&](const char* op) {
    std::string s;
    for (std::size_t i = 0; i < f.children.size(); ++i) s += (i ? op : "") + render_in(*f.children[i], true);
    return wrap(s);
  };
  switch (f.kind) {
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      std::string s = f.kind == Formula::Kind::All ? "All" : "Ex";
      for (const auto& v : f.vars) s += " " + std::string(v.time ? "#" : "") + v.name;
      return wrap(s + ". " + render_in(*f.children[0], false));
    }
    case Formula::Kind::Implies:
      return wrap(render_in(*f.children[0], true) + " ==> " + render_in(*f.children[1], true));
    case Formula::Kind::Or: return join(" | ");
    case Formula::Kind::And: return join(" & ");
    case Formula::Kind::Not: return "not " + render_in(*f.children[0], true);
    case Formula::Kind::Event: {
      std::string s(event_name(f.event));
      s += "(";
      for (std::size_t i = 0; i < f.patterns.size(); ++i) s += (i ? ", " : "") + render_pattern(f.patterns[i]);
      return s + ") @ #" + f.time;
    }
    case Formula::Kind::Know: return "K(" + render_pattern(f.patterns[0]) + ") @ #" + f.time;
    case Formula::Kind::Less: return "#" + f.lhs_time + " < #" + f.rhs_time;
    case Formula::Kind::TimeEq: return "#" + f.lhs_time + " = #" + f.rhs_time;
    case Formula::Kind::TermEq: return render_pattern(f.patterns[0]) + " = " + render_pattern(f.patterns[1]);
  }
  return "?";
}

// ------------------------------------------------------------- variables

void pattern_vars(const Pattern& p, std::set<std::string>& out) {
  if (p.kind == Pattern::Kind::Var) out.insert(p.name);
  for (const auto& a : p.args) pattern_vars(a, out);
}

bool has_wildcard(const Pattern& p) {
  if (p.kind == Pattern::Kind::Wildcard) return true;
  return std::any_of(p.args.begin(), p.args.end(), has_wildcard);
}

void free_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind) {
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      std::set<std::string> inner;
      free_vars(*f.children[0], inner);
      for (const auto& v : f.vars) inner.erase(v.name);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case Formula::Kind::Event:
    case Formula::Kind::Know:
      for (const auto& p : f.patterns) pattern_vars(p, out);
      out.insert(f.time);
      return;
    case Formula::Kind::Less:
    case Formula::Kind::TimeEq:
      out.insert(f.lhs_time);
      out.insert(f.rhs_time);
      return;
    case Formula::Kind::TermEq:
      for (const auto& p : f.patterns) pattern_vars(p, out);
      return;
    default:
      for (const auto& c : f.children) free_vars(*c, out);
  }
}

std::set<std::string> fv(const Formula& f) {
  std::set<std::string> out;
  free_vars(f, out);
  return out;
}

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == Formula::Kind::And) {
    for (const auto& c : f->children) flatten_and(c, out);
  } else {
    out.push_back(f);
  }
}

std::vector<FormulaPtr> conjuncts_of(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  flatten_and(f, out);
  return out;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Negation of the consequent of an implication, used to turn
// All x. A ==> B into not Ex x. A & not B.
std::vector<FormulaPtr> counterexample_conjuncts(const Formula& all) {
  const auto& body = all.children[0];
  if (body->kind == Formula::Kind::Implies) {
    auto cs = conjuncts_of(body->children[0]);
    cs.push_back(make({Formula::Kind::Not, {}, {body->children[1]}}));
    return cs;
  }
  return {make({Formula::Kind::Not, {}, {body}})};
}

// ------------------------------------------------------- static guarding

void check_in(const Formula& f, std::set<std::string> bound);

// Which variables a conjunct can bind when used as a generator, or nullopt
// if it cannot generate under `bound`.
std::optional<std::set<std::string>> generates(const Formula& c, const std::set<std::string>& bound) {
  switch (c.kind) {
    case Formula::Kind::Event: {
      auto vs = fv(c);
      return vs;
    }
    case Formula::Kind::Know: {
      std::set<std::string> tv;
      pattern_vars(c.patterns[0], tv);
      if (!subset(tv, bound)) return std::nullopt;
      return std::set<std::string>{c.time};
    }
    case Formula::Kind::TermEq: {
      std::set<std::string> l, r;
      pattern_vars(c.patterns[0], l);
      pattern_vars(c.patterns[1], r);
      if (subset(l, bound)) return r;
      if (subset(r, bound)) return l;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

void check_conjuncts(std::vector<FormulaPtr> cs, std::set<std::string> bound) {
  while (!cs.empty()) {
    bool progressed = false;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (subset(fv(*cs[i]), bound)) {
        check_in(*cs[i], bound);
        cs.erase(cs.begin() + static_cast<long>(i));
        progressed = true;
        break;
      }
    }
    if (progressed) continue;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (auto g = generates(*cs[i], bound)) {
        bound.insert(g->begin(), g->end());
        cs.erase(cs.begin() + static_cast<long>(i));
        progressed = true;
        break;
      }
    }
    if (!progressed) {
      std::set<std::string> missing;
      for (const auto& c : cs) {
        for (const auto& v : fv(*c)) {
          if (!bound.count(v)) missing.insert(v);
        }
      }
      std::string names;
      for (const auto& v : missing) names += (names.empty() ? "" : ", ") + v;
      throw LemmaError("unguarded variable(s): " + names);
    }
  }
}

void check_in(const Formula& f, std::set<std::string> bound) {
  switch (f.kind) {
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      for (const auto& v : f.vars) bound.erase(v.name);
      auto cs = f.kind == Formula::Kind::Ex ? conjuncts_of(f.children[0]) : counterexample_conjuncts(f);
      check_conjuncts(std::move(cs), bound);
      return;
    }
    case Formula::Kind::Know:
      if (has_wildcard(f.patterns[0])) throw LemmaError("wildcard inside K atom");
      return;
    case Formula::Kind::TermEq:
      if (has_wildcard(f.patterns[0]) || has_wildcard(f.patterns[1])) throw LemmaError("wildcard inside equation");
      return;
    default:
      for (const auto& c : f.children) check_in(*c, bound);
  }
}

}  // namespace

// ================================================================ public

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string render(const Formula& f) { return render_in(f, false); }

std::vector<std::string> free_variables(const Formula& f) {
  auto s = fv(f);
  return {s.begin(), s.end()};
}

void check_guarded(const Formula& f) {
  auto free = fv(f);
  if (!free.empty()) throw LemmaError("formula has free variable '" + *free.begin() + "'");
  check_in(f, {});
}

std::string render(const Value& v) { return v.is_time ? "#" + std::to_string(v.time) : findmy::render(v.term); }

bool pattern_bound(const Pattern& p, const Env& env) {
  std::set<std::string> vs;
  pattern_vars(p, vs);
  return std::all_of(vs.begin(), vs.end(), [&](const auto& v) { return env.count(v) > 0; });
}

std::optional<std::size_t> TraceView::earliest_knowledge(const Term& t) {
  std::size_t n = length();
  if (!knows(t, n)) return std::nullopt;
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (knows(t, mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

Term Evaluator::instantiate(const Pattern& p, const Env& env) const {
  switch (p.kind) {
    case Pattern::Kind::Var: {
      auto it = env.find(p.name);
      if (it == env.end() || it->second.is_time) throw LemmaError("variable '" + p.name + "' is not bound to a term");
      return it->second.term;
    }
    case Pattern::Kind::Const: return Term::pub(p.name);
    case Pattern::Kind::Wildcard: throw LemmaError("wildcard cannot be instantiated");
    case Pattern::Kind::App: {
      std::vector<Term> args;
      for (const auto& a : p.args) args.push_back(instantiate(a, env));
      return rs_.normalize(p.symbol == Symbol::Pair ? Term::pair(args[0], args[1]) : Term::apply(p.symbol, std::move(args)));
    }
  }
  throw LemmaError("bad pattern");
}

bool Evaluator::match(const Pattern& p, const Term& t, Env& env) const {
  switch (p.kind) {
    case Pattern::Kind::Wildcard: return true;
    case Pattern::Kind::Const: return t.is(Symbol::PublicName) && t.label() == p.name;
    case Pattern::Kind::Var: {
      auto it = env.find(p.name);
      if (it == env.end()) {
        env[p.name] = Value{false, t, 0};
        return true;
      }
      return !it->second.is_time && it->second.term == t;
    }
    case Pattern::Kind::App: {
      if (t.symbol() != p.symbol || t.args().size() != p.args.size()) return false;
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (!match(p.args[i], t.arg(i), env)) return false;
      }
      return true;
    }
  }
  return false;
}

bool Evaluator::search(std::vector<FormulaPtr> cs, const Env& env, const Sink& sink) {
  // Tests first: any conjunct whose variables are all bound.
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto vars = fv(*cs[i]);
    bool ready = std::all_of(vars.begin(), vars.end(), [&](const auto& v) { return env.count(v) > 0; });
    if (!ready || cs[i]->kind == Formula::Kind::Event) continue;
    if (!holds(*cs[i], env)) return false;
    cs.erase(cs.begin() + static_cast<long>(i));
    return search(std::move(cs), env, sink);
  }
  if (cs.empty()) return sink(env);

  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Formula& c = *cs[i];
    auto rest = cs;
    rest.erase(rest.begin() + static_cast<long>(i));
    switch (c.kind) {
      case Formula::Kind::Event: {
        auto tit = env.find(c.time);
        for (const auto& e : trace_.events()) {
          if (e.kind != c.event) continue;
          if (tit != env.end() && (!tit->second.is_time || tit->second.time != e.timestamp)) continue;
          Env next = env;
          bool ok = true;
          for (std::size_t k = 0; ok && k < c.patterns.size(); ++k) ok = match(c.patterns[k], e.params[k], next);
          if (!ok) continue;
          if (tit == env.end()) next[c.time] = Value{true, Term::pub("_"), e.timestamp};
          if (search(rest, next, sink)) return true;
        }
        return false;
      }
      case Formula::Kind::Know: {
        if (!pattern_bound(c.patterns[0], env)) break;
        Term t = instantiate(c.patterns[0], env);
        auto first = trace_.earliest_knowledge(t);
        if (!first) return false;
        for (std::size_t j = *first; j <= trace_.length(); ++j) {
          Env next = env;
          next[c.time] = Value{true, Term::pub("_"), j};
          if (search(rest, next, sink)) return true;
        }
        return false;
      }
      case Formula::Kind::TermEq: {
        int bound_side = pattern_bound(c.patterns[0], env) ? 0 : pattern_bound(c.patterns[1], env) ? 1 : -1;
        if (bound_side < 0) break;
        Term value = instantiate(c.patterns[bound_side], env);
        Env next = env;
        if (!match(c.patterns[1 - bound_side], value, next)) return false;
        return search(rest, next, sink);
      }
      default:
        break;
    }
  }
  throw LemmaError("unguarded conjunct: " + render(*cs.front()));
}

bool Evaluator::holds(const Formula& f, const Env& env) {
  switch (f.kind) {
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      Env inner = env;
      for (const auto& v : f.vars) inner.erase(v.name);
      auto cs = f.kind == Formula::Kind::Ex ? conjuncts_of(f.children[0]) : counterexample_conjuncts(f);
      bool found = search(std::move(cs), inner, [](const Env&) { return true; });
      return f.kind == Formula::Kind::Ex ? found : !found;
    }
    case Formula::Kind::Implies: return !holds(*f.children[0], env) || holds(*f.children[1], env);
    case Formula::Kind::Or:
      return std::any_of(f.children.begin(), f.children.end(), [&](const auto& c) { return holds(*c, env); });
    case Formula::Kind::And:
      return search(conjuncts_of(std::make_shared<const Formula>(f)), env, [](const Env&) { return true; });
    case Formula::Kind::Not: return !holds(*f.children[0], env);
    case Formula::Kind::Event:
      return search({std::make_shared<const Formula>(f)}, env, [](const Env&) { return true; });
    case Formula::Kind::Know: {
      const auto& tv = env.at(f.time);
      return trace_.knows(instantiate(f.patterns[0], env), tv.time);
    }
    case Formula::Kind::Less: return env.at(f.lhs_time).time < env.at(f.rhs_time).time;
    case Formula::Kind::TimeEq: return env.at(f.lhs_time).time == env.at(f.rhs_time).time;
    case Formula::Kind::TermEq: return instantiate(f.patterns[0], env) == instantiate(f.patterns[1], env);
  }
  return false;
}

std::optional<Env> Evaluator::witness(const Formula& f, const Env& env) {
  if (f.kind != Formula::Kind::All && f.kind != Formula::Kind::Ex) {
    throw LemmaError("witness requires a quantified formula");
  }
  Env inner = env;
  for (const auto& v : f.vars) inner.erase(v.name);
  auto cs = f.kind == Formula::Kind::Ex ? conjuncts_of(f.children[0]) : counterexample_conjuncts(f);
  std::optional<Env> out;
  search(std::move(cs), inner, [&](const Env& e) {
    Env w;
    for (const auto& v : f.vars) {
      if (auto it = e.find(v.name); it != e.end()) w[v.name] = it->second;
    }
    out = std::move(w);
    return true;
  });
  return out;
}

}  // namespace findmy
