#include "scref/parser.hpp"

#include <array>
#include <cctype>
#include <sstream>

namespace scref {

ParseError::ParseError(SourceSpan span, const std::string& message)
    : std::runtime_error(span.file + ":" + std::to_string(span.line) + ":" +
                         std::to_string(span.column) + ": " + message),
      span_(std::move(span)),
      detail_(message) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class TokenKind { Ident, Number, String, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceSpan span;
};

constexpr std::array<std::string_view, 30> kPunct = {
    "=>", "->", "<<", ">>", "&&", "||", "==", "!=", "<=", ">=", "{", "}", ";", ",", ":",
    "(",  ")",  "[",  "]",  "!",  "=",  "<",  ">",  "+",  "-",  "*", "/", "%", ".", "\""};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::vector<Token> tokenize(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto span_at = [&](int length) { return SourceSpan{file, line, col, length}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      out.push_back({TokenKind::Ident, std::string(text.substr(i, j - i)), span_at(int(j - i))});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.'))
        ++j;
      out.push_back({TokenKind::Number, std::string(text.substr(i, j - i)), span_at(int(j - i))});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"')
        throw ParseError(span_at(int(j - i)), "unterminated string");
      out.push_back(
          {TokenKind::String, std::string(text.substr(i + 1, j - i - 1)), span_at(int(j - i + 1))});
      advance(j - i + 1);
      continue;
    }
    bool matched = false;
    for (auto p : kPunct) {
      if (p == "\"") continue;
      if (text.substr(i, p.size()) == p) {
        out.push_back({TokenKind::Punct, std::string(p), span_at(int(p.size()))});
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(span_at(1), std::string("unexpected character '") + c + "'");
  }
  out.push_back({TokenKind::End, "", span_at(0)});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

bool is_comparison_or_arith(const Token& t) {
  if (t.kind != TokenKind::Punct) return false;
  static const std::set<std::string> ops = {"<", ">", "<=", ">=", "==", "!=", "+", "-", "*", "/", "%"};
  return ops.count(t.text) > 0;
}

std::optional<StateKind> state_keyword(const std::string& word) {
  if (word == "state") return StateKind::Basic;
  if (word == "or") return StateKind::Or;
  if (word == "and") return StateKind::And;
  if (word == "final") return StateKind::Final;
  if (word == "fork") return StateKind::Fork;
  if (word == "join") return StateKind::Join;
  if (word == "split") return StateKind::Split;
  if (word == "merge") return StateKind::Merge;
  if (word == "region") return StateKind::Region;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, std::string file)
      : file_(std::move(file)), tokens_(tokenize(text, file_)) {}

  Statechart parse_model() {
    expect_word("statechart");
    auto name = expect_ident("model name");
    Statechart sc = Statechart::empty(name.text);
    expect_punct("{");
    parse_items(sc, sc.root, /*top_level=*/true);
    expect_punct("}");
    if (peek().kind != TokenKind::End) fail(peek(), "unexpected text after model");
    resolve(sc);
    return sc;
  }

  RefinementScript parse_script() {
    RefinementScript script;
    while (peek().kind != TokenKind::End) script.steps.push_back(parse_step());
    if (script.steps.empty()) script.steps.push_back(Identity{});
    return script;
  }

  Modifier parse_modifier_list() {
    auto m = parse_modifier_names(peek());
    if (peek().kind != TokenKind::End) fail(peek(), "unexpected text after modifier");
    return m;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Punct && peek(k).text == p;
  }
  bool at_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Ident && peek(k).text == w;
  }
  bool accept_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!at_word(w)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(t.span, message);
  }

  std::string describe(const Token& t) const {
    if (t.kind == TokenKind::End) return "end of input";
    return "'" + t.text + "'";
  }

  const Token& expect_punct(std::string_view p) {
    if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "', found " + describe(peek()));
    return next();
  }
  const Token& expect_word(std::string_view w) {
    if (!at_word(w)) fail(peek(), "expected '" + std::string(w) + "', found " + describe(peek()));
    return next();
  }
  const Token& expect_ident(std::string_view what) {
    if (peek().kind != TokenKind::Ident)
      fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    return next();
  }

  // Words joined by adjacent hyphens, as in `refine-basic`.
  std::string hyphenated_word() {
    const Token& first = expect_ident("keyword");
    std::string word = first.text;
    while (at_punct("-") && peek(1).kind == TokenKind::Ident &&
           peek().span.line == peek(1).span.line && peek().span.column + 1 == peek(1).span.column) {
      next();
      word += "-" + next().text;
    }
    return word;
  }

  Modifier parse_modifier_names(const Token& at) {
    bool is_virtual = false;
    std::optional<BaseModifier> base;
    do {
      const Token& t = expect_ident("modifier");
      std::optional<BaseModifier> b;
      if (t.text == "abstract") b = BaseModifier::Abstract;
      else if (t.text == "standard") b = BaseModifier::Standard;
      else if (t.text == "locked") b = BaseModifier::Locked;
      else if (t.text == "virtual") is_virtual = true;
      else fail(t, "unknown modifier '" + t.text + "'");
      if (b) {
        if (base) fail(t, "more than one base modifier");
        base = b;
      }
    } while (accept_punct(","));
    if (!base) fail(at, "virtual must accompany abstract or standard");
    if (is_virtual && *base == BaseModifier::Locked)
      fail(at, "virtual may only accompany abstract or standard");
    return Modifier{*base, is_virtual};
  }

  std::optional<Modifier> parse_mods() {
    if (!at_punct("<<")) return std::nullopt;
    const Token& open = next();
    auto m = parse_modifier_names(open);
    expect_punct(">>");
    return m;
  }

  void add_state(Statechart& sc, State s, const Token& at) {
    if (sc.contains(s.id) || s.id == sc.root) fail(at, "duplicate id '" + s.id + "'");
    sc.states.emplace(s.id, std::move(s));
  }

  void add_transition(Statechart& sc, Transition t, const Token& at) {
    if (sc.contains(t.id)) fail(at, "duplicate id '" + t.id + "'");
    sc.transitions.emplace(t.id, std::move(t));
  }

  // Items up to (not including) the closing '}'.
  void parse_items(Statechart& sc, const ElementId& parent, bool top_level) {
    while (!at_punct("}") && peek().kind != TokenKind::End) {
      if (top_level && at_word("events")) {
        parse_events(sc);
      } else if (top_level && at_word("vars")) {
        parse_vars(sc);
      } else {
        parse_element(sc, parent);
      }
    }
  }

  void parse_events(Statechart& sc) {
    expect_word("events");
    do {
      sc.events.insert(expect_ident("event name").text);
    } while (accept_punct(","));
    expect_punct(";");
  }

  void parse_vars(Statechart& sc) {
    expect_word("vars");
    do {
      auto name = expect_ident("variable name").text;
      expect_punct(":");
      auto type = expect_ident("variable type").text;
      sc.variables[name] = type;
    } while (accept_punct(","));
    expect_punct(";");
  }

  void parse_element(Statechart& sc, const ElementId& parent) {
    auto mods = parse_mods();
    const Token& kw = peek();
    if (kw.kind != TokenKind::Ident) fail(kw, "expected a state or transition, found " + describe(kw));
    if (kw.text == "trans") {
      parse_transition(sc, mods);
      return;
    }
    if (kw.text == "entry" || kw.text == "exit")
      fail(kw, "entry/exit actions must precede nested elements");
    std::optional<StateKind> kind;
    if (kw.text == "history") {
      next();
      if (accept_word("shallow")) kind = StateKind::HistoryShallow;
      else if (accept_word("deep")) kind = StateKind::HistoryDeep;
      else fail(peek(), "expected 'shallow' or 'deep'");
    } else {
      kind = state_keyword(kw.text);
      if (!kind) fail(kw, "expected a state or transition, found " + describe(kw));
      next();
    }

    const Token& id_tok = expect_ident("state id");
    State s;
    s.id = id_tok.text;
    s.name = s.id;
    s.kind = *kind;
    s.modifier = mods;
    s.span = id_tok.span;
    if (peek().kind == TokenKind::String) s.name = next().text;
    if (accept_word("default")) s.is_default = true;

    if (accept_punct("{")) {
      // register the state first so nested elements see a consistent tree
      add_state(sc, s, id_tok);
      parse_body(sc, s.id);
      expect_punct("}");
      accept_punct(";");
    } else {
      expect_punct(";");
      add_state(sc, s, id_tok);
    }
    sc.states.at(parent).children.push_back(id_tok.text);
  }

  void parse_body(Statechart& sc, const ElementId& id) {
    while (true) {
      if (at_word("entry") && at_punct(":", 1)) {
        next();
        next();
        auto action = parse_statements();
        auto& s = sc.states.at(id);
        if (s.entry) fail(peek(), "duplicate entry block");
        s.entry = std::move(action);
      } else if (at_word("exit") && at_punct(":", 1)) {
        next();
        next();
        auto action = parse_statements();
        auto& s = sc.states.at(id);
        if (s.exit) fail(peek(), "duplicate exit block");
        s.exit = std::move(action);
      } else {
        break;
      }
    }
    parse_items(sc, id, /*top_level=*/false);
  }

  Action parse_statements() {
    Action action;
    while (peek().kind == TokenKind::Ident && at_punct("=", 1)) {
      Assignment a;
      a.variable = next().text;
      next();
      std::string expr;
      while (!at_punct(";")) {
        const Token& t = peek();
        if (t.kind == TokenKind::End || at_punct("{") || at_punct("}"))
          fail(t, "expected ';' after assignment");
        if (!expr.empty()) expr += ' ';
        expr += next().text;
      }
      if (expr.empty()) fail(peek(), "empty expression");
      expect_punct(";");
      a.expression = std::move(expr);
      action.assignments.push_back(std::move(a));
    }
    return action;
  }

  void parse_transition(Statechart& sc, std::optional<Modifier> mods) {
    const Token& kw = expect_word("trans");
    if (mods && mods->is_virtual) fail(kw, "transitions cannot be virtual");
    const Token& id_tok = expect_ident("transition id");
    Transition t;
    t.id = id_tok.text;
    t.modifier = mods;
    t.span = id_tok.span;
    expect_punct(":");
    t.source = expect_ident("source state").text;
    expect_punct("->");
    t.target = expect_ident("target state").text;
    if (accept_word("on")) t.trigger = expect_ident("event").text;
    if (accept_word("if")) t.guard = parse_guard();
    if (accept_word("emit")) {
      do {
        t.outputs.insert(expect_ident("event").text);
      } while (accept_punct(","));
    }
    expect_punct(";");
    add_transition(sc, std::move(t), id_tok);
  }

  Guard parse_guard() {
    Guard g = parse_guard_unary();
    while (true) {
      if (at_punct("||")) fail(peek(), "disjunction not permitted in guards");
      if (!accept_punct("&&")) break;
      g = Guard::conj(std::move(g), parse_guard_unary());
    }
    if (at_punct("||")) fail(peek(), "disjunction not permitted in guards");
    return g;
  }

  Guard parse_guard_unary() {
    if (accept_punct("!")) return Guard::negate(parse_guard_unary());
    if (accept_punct("(")) {
      Guard g = parse_guard();
      expect_punct(")");
      return g;
    }
    if (at_word("true") && !is_comparison_or_arith(peek(1))) {
      next();
      return Guard{};
    }
    return parse_atom();
  }

  Guard parse_atom() {
    std::string text;
    bool last_was_operand = false;
    const Token& start = peek();
    while (true) {
      const Token& t = peek();
      bool operand = t.kind == TokenKind::Ident || t.kind == TokenKind::Number;
      if (operand) {
        if (last_was_operand || t.text == "emit") break;
      } else if (!is_comparison_or_arith(t)) {
        break;
      }
      text += next().text;
      last_was_operand = operand;
    }
    if (text.empty()) fail(start, "expected a guard, found " + describe(start));
    return Guard::atom(std::move(text));
  }

  // -- scripts --------------------------------------------------------------

  RefinementStep parse_step() {
    const Token& at = peek();
    std::string kw = hyphenated_word();
    if (kw == "identity") {
      expect_punct(";");
      return Identity{};
    }
    if (kw == "refine-basic") {
      RefineBasic step;
      step.state = expect_ident("state id").text;
      expect_word("into");
      const Token& target = expect_ident("refinement target");
      if (target.text == "basic") step.target = RefineTarget::Basic;
      else if (target.text == "or") step.target = RefineTarget::Or;
      else if (target.text == "and") step.target = RefineTarget::And;
      else fail(target, "expected basic, or, and");
      step.modifier = parse_mods();
      if (accept_punct("{")) {
        parse_items(step.payload, step.payload.root, /*top_level=*/true);
        expect_punct("}");
        accept_punct(";");
      } else {
        expect_punct(";");
      }
      return step;
    }
    if (kw == "refine-transition") {
      RefineTransition step;
      step.transition = expect_ident("transition id").text;
      expect_word("insert");
      expect_punct("{");
      parse_items(step.inserted, step.inserted.root, /*top_level=*/true);
      expect_punct("}");
      accept_punct(";");
      return step;
    }
    if (kw == "or-to-and") {
      OrToAnd step;
      step.state = expect_ident("state id").text;
      expect_word("region");
      step.region = expect_ident("region name").text;
      expect_punct(";");
      return step;
    }
    if (kw == "add-region") {
      AddRegion step;
      step.state = expect_ident("state id").text;
      step.region = expect_ident("region name").text;
      expect_punct(";");
      return step;
    }
    if (kw == "history-to-deep") {
      HistoryToDeep step;
      step.state = expect_ident("history id").text;
      expect_punct(";");
      return step;
    }
    if (kw == "set-modifier") {
      SetModifier step;
      step.element = expect_ident("element id").text;
      auto m = parse_mods();
      if (!m) fail(peek(), "expected <<modifier>>");
      step.modifier = *m;
      expect_punct(";");
      return step;
    }
    fail(at, "unknown refinement step '" + kw + "'");
  }

  // -- name resolution ------------------------------------------------------

  void resolve(const Statechart& sc) const {
    auto err = [](const SourceSpan& span, const std::string& msg) { throw ParseError(span, msg); };
    for (const auto& [id, s] : sc.states) {
      for (const auto* action : {&s.entry, &s.exit}) {
        if (!*action) continue;
        for (const auto& a : (*action)->assignments) {
          if (!sc.variables.count(a.variable)) err(s.span, "unknown variable '" + a.variable + "'");
          for (const auto& v : referenced_identifiers(a.expression))
            if (!sc.variables.count(v)) err(s.span, "unknown variable '" + v + "'");
        }
      }
    }
    for (const auto& [id, t] : sc.transitions) {
      for (const auto* end : {&t.source, &t.target})
        if (!sc.find_state(*end)) err(t.span, "unknown state '" + *end + "'");
      if (t.trigger && !sc.events.count(*t.trigger))
        err(t.span, "unknown event '" + *t.trigger + "'");
      for (const auto& e : t.outputs)
        if (!sc.events.count(e)) err(t.span, "unknown event '" + e + "'");
      std::vector<std::string> atoms;
      t.guard.collect_atoms(atoms);
      for (const auto& atom : atoms)
        for (const auto& v : referenced_identifiers(atom))
          if (!sc.variables.count(v)) err(t.span, "unknown variable '" + v + "'");
    }
  }

  std::string file_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Writer

class Writer {
 public:
  explicit Writer(std::ostringstream& out) : out_(out) {}

  void declarations(const Statechart& sc, int indent) {
    if (!sc.events.empty()) {
      pad(indent);
      out_ << "events ";
      join(sc.events);
      out_ << ";\n";
    }
    if (!sc.variables.empty()) {
      pad(indent);
      out_ << "vars ";
      bool first = true;
      for (const auto& [name, type] : sc.variables) {
        if (!first) out_ << ", ";
        first = false;
        out_ << name << ": " << type;
      }
      out_ << ";\n";
    }
  }

  void contents(const Statechart& sc, int indent) {
    declarations(sc, indent);
    for (const auto& child : sc.state(sc.root).children) state(sc, child, indent);
    for (const auto& [id, t] : sc.transitions) transition(t, indent);
  }

  void state(const Statechart& sc, const ElementId& id, int indent) {
    const State& s = sc.state(id);
    pad(indent);
    mods(s.modifier);
    out_ << to_string(s.kind) << ' ' << s.id;
    if (s.name != s.id) out_ << " \"" << s.name << '"';
    if (s.is_default) out_ << " default";
    if (!s.entry && !s.exit && s.children.empty()) {
      out_ << ";\n";
      return;
    }
    out_ << " {\n";
    action(s.entry, "entry", indent + 2);
    action(s.exit, "exit", indent + 2);
    for (const auto& child : s.children) state(sc, child, indent + 2);
    pad(indent);
    out_ << "}\n";
  }

  void transition(const Transition& t, int indent) {
    pad(indent);
    mods(t.modifier);
    out_ << "trans " << t.id << ": " << t.source << " -> " << t.target;
    if (t.trigger) out_ << " on " << *t.trigger;
    if (!t.guard.is_true()) out_ << " if " << t.guard.to_string();
    if (!t.outputs.empty()) {
      out_ << " emit ";
      join(t.outputs);
    }
    out_ << ";\n";
  }

  void mods(const std::optional<Modifier>& m) {
    if (m) out_ << "<<" << to_string(*m) << ">> ";
  }

 private:
  void pad(int n) { out_ << std::string(static_cast<std::size_t>(n), ' '); }

  void join(const std::set<std::string>& items) {
    bool first = true;
    for (const auto& item : items) {
      if (!first) out_ << ", ";
      first = false;
      out_ << item;
    }
  }

  void action(const std::optional<Action>& a, std::string_view label, int indent) {
    if (!a) return;
    pad(indent);
    out_ << label << ":\n";
    for (const auto& asg : a->assignments) {
      pad(indent + 2);
      out_ << asg.variable << " = " << asg.expression << ";\n";
    }
  }

  std::ostringstream& out_;
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

}  // namespace

Statechart parse_statechart(std::string_view text, const std::string& file) {
  return Parser(text, file).parse_model();
}

std::string serialize_statechart(const Statechart& sc) {
  std::ostringstream out;
  out << "statechart " << sc.name << " {\n";
  Writer(out).contents(sc, 2);
  out << "}\n";
  return out.str();
}

RefinementMapping parse_mapping(std::string_view text, const Statechart& original,
                                const Statechart& refined, const std::string& file) {
  RefinementMapping mapping;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    auto comment = raw.find("//");
    if (comment != std::string_view::npos) raw = raw.substr(0, comment);
    if (trim(raw).empty()) continue;

    auto span = [&](std::size_t col, std::size_t len) {
      return SourceSpan{file, line_no, static_cast<int>(col + 1), static_cast<int>(len)};
    };
    auto arrow = raw.find("=>");
    if (arrow == std::string_view::npos) throw ParseError(span(0, raw.size()), "expected '=>'");
    std::string refined_id = trim(raw.substr(0, arrow));
    std::string rhs = trim(raw.substr(arrow + 2));
    std::optional<std::string> tag;
    auto bracket = rhs.find('[');
    if (bracket != std::string::npos) {
      auto close = rhs.find(']', bracket);
      if (close == std::string::npos || !trim(std::string_view(rhs).substr(close + 1)).empty())
        throw ParseError(span(arrow + 2, rhs.size()), "malformed provenance tag");
      tag = trim(std::string_view(rhs).substr(bracket + 1, close - bracket - 1));
      if (tag->empty()) throw ParseError(span(arrow + 2, rhs.size()), "empty provenance tag");
      rhs = trim(std::string_view(rhs).substr(0, bracket));
    }
    if (!is_identifier(refined_id))
      throw ParseError(span(0, arrow), "malformed refined id '" + refined_id + "'");
    if (!is_identifier(rhs))
      throw ParseError(span(arrow + 2, rhs.size()), "malformed original id '" + rhs + "'");

    auto refined_role = role_of(refined, refined_id);
    if (!refined_role)
      throw ParseError(span(0, refined_id.size()), "unknown refined element '" + refined_id + "'");
    auto original_role = role_of(original, rhs);
    if (!original_role)
      throw ParseError(span(arrow + 2, rhs.size()), "unknown original element '" + rhs + "'");

    if (const auto* prev = mapping.find(refined_id)) {
      if (prev->original != rhs)
        throw ParseError(span(0, raw.size()), "'" + refined_id + "' is mapped to both '" +
                                                  prev->original + "' and '" + rhs + "'");
      continue;
    }
    mapping.pairs.emplace(refined_id, MappingEntry{rhs, *refined_role, *original_role, tag});
  }
  return mapping;
}

std::string serialize_mapping(const RefinementMapping& mapping) {
  std::ostringstream out;
  for (const auto& [refined, entry] : mapping.pairs) {
    out << refined << " => " << entry.original;
    if (entry.created_by) out << " [" << *entry.created_by << "]";
    out << '\n';
  }
  return out.str();
}

RefinementScript parse_script(std::string_view text, const std::string& file) {
  return Parser(text, file).parse_script();
}

namespace {

void write_payload(std::ostringstream& out, const Statechart& payload) {
  out << " {\n";
  Writer(out).contents(payload, 2);
  out << "}\n";
}

}  // namespace

std::string serialize_script(const RefinementScript& script) {
  std::ostringstream out;
  for (const auto& step : script.steps) {
    if (const auto* s = std::get_if<RefineBasic>(&step)) {
      out << "refine-basic " << s->state << " into " << to_string(s->target);
      if (s->modifier) out << " <<" << to_string(*s->modifier) << ">>";
      bool empty = s->payload.events.empty() && s->payload.variables.empty() &&
                   s->payload.states.size() == 1 && s->payload.transitions.empty();
      if (empty) out << ";\n";
      else write_payload(out, s->payload);
    } else if (const auto* s = std::get_if<RefineTransition>(&step)) {
      out << "refine-transition " << s->transition << " insert";
      write_payload(out, s->inserted);
    } else if (const auto* s = std::get_if<OrToAnd>(&step)) {
      out << "or-to-and " << s->state << " region " << s->region << ";\n";
    } else if (const auto* s = std::get_if<AddRegion>(&step)) {
      out << "add-region " << s->state << ' ' << s->region << ";\n";
    } else if (const auto* s = std::get_if<HistoryToDeep>(&step)) {
      out << "history-to-deep " << s->state << ";\n";
    } else if (const auto* s = std::get_if<SetModifier>(&step)) {
      out << "set-modifier " << s->element << " <<" << to_string(s->modifier) << ">>;\n";
    } else {
      out << "identity;\n";
    }
  }
  return out.str();
}

Modifier parse_modifier(std::string_view text) {
  return Parser(text, "<modifier>").parse_modifier_list();
}

}  // namespace scref
