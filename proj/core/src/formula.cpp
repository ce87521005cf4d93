#include "musep/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace musep {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::vector<std::string> split_csv(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<std::string> actions, std::vector<std::string> props)
    : actions_(std::move(actions)), props_(std::move(props)) {
  auto check_unique = [](const std::vector<std::string>& names, const char* what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
      if (!seen.insert(n).second) throw FormulaError(std::string("duplicate ") + what + " '" + n + "'");
    }
  };
  check_unique(actions_, "action");
  check_unique(props_, "proposition");
  if (props_.size() > 63) throw FormulaError("at most 63 propositions are supported");
}

Signature Signature::parse_header(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string word;
  in >> word;
  if (word != "sig") throw ParseError("signature header must start with 'sig'", 0);
  std::vector<std::string> actions, props;
  while (in >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw ParseError("malformed signature entry '" + word + "'", 0);
    auto key = word.substr(0, eq);
    auto vals = split_csv(std::string_view(word).substr(eq + 1));
    if (key == "actions") {
      actions = std::move(vals);
    } else if (key == "props") {
      props = std::move(vals);
    } else {
      throw ParseError("unknown signature key '" + key + "'", 0);
    }
  }
  if (actions.empty() && props.empty()) throw ParseError("empty signature", 0);
  return Signature(std::move(actions), std::move(props));
}

std::string Signature::header() const {
  std::string s = "sig actions=";
  for (std::size_t i = 0; i < actions_.size(); ++i) s += (i ? "," : "") + actions_[i];
  s += " props=";
  for (std::size_t i = 0; i < props_.size(); ++i) s += (i ? "," : "") + props_[i];
  return s;
}

std::optional<std::size_t> Signature::action_index(std::string_view name) const {
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Signature::prop_index(std::string_view name) const {
  for (std::size_t i = 0; i < props_.size(); ++i)
    if (props_[i] == name) return i;
  return std::nullopt;
}

Signature Signature::merged(const Signature& other) const {
  auto actions = actions_;
  auto props = props_;
  for (const auto& a : other.actions_)
    if (!has_action(a)) actions.push_back(a);
  for (const auto& p : other.props_)
    if (!has_prop(p)) props.push_back(p);
  return Signature(std::move(actions), std::move(props));
}

// ---------------------------------------------------------------------------
// Program

ProgramPtr Program::atom(std::string a) {
  auto p = std::make_shared<Program>();
  p->op = Op::Atom;
  p->action = std::move(a);
  return p;
}
ProgramPtr Program::seq(ProgramPtr l, ProgramPtr r) {
  auto p = std::make_shared<Program>();
  p->op = Op::Seq;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}
ProgramPtr Program::choice(ProgramPtr l, ProgramPtr r) {
  auto p = std::make_shared<Program>();
  p->op = Op::Choice;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}
ProgramPtr Program::star(ProgramPtr inner) {
  auto p = std::make_shared<Program>();
  p->op = Op::Star;
  p->lhs = std::move(inner);
  return p;
}

std::string Program::to_string() const {
  // precedence: choice 1, seq 2, star 3, atom 4
  std::function<std::string(const Program&, int)> go = [&](const Program& p, int ctx) -> std::string {
    std::string s;
    int prec = 4;
    switch (p.op) {
      case Op::Atom: return p.action;
      case Op::Star: prec = 3; s = go(*p.lhs, 3) + "*"; break;
      case Op::Seq: prec = 2; s = go(*p.lhs, 2) + ";" + go(*p.rhs, 2); break;
      case Op::Choice: prec = 1; s = go(*p.lhs, 1) + "+" + go(*p.rhs, 1); break;
    }
    if (prec < ctx || (p.op == Op::Star && ctx > 3)) return "(" + s + ")";
    return s;
  };
  return go(*this, 0);
}

// ---------------------------------------------------------------------------
// Formula

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Prop: return "prop";
    case Kind::NegProp: return "negprop";
    case Kind::Not: return "not";
    case Kind::And: return "and";
    case Kind::Or: return "or";
    case Kind::Diamond: return "diamond";
    case Kind::Box: return "box";
    case Kind::Var: return "var";
    case Kind::Mu: return "mu";
    case Kind::Nu: return "nu";
    case Kind::Nabla: return "nabla";
    case Kind::Color: return "color";
    case Kind::ProgDiamond: return "progdiamond";
    case Kind::ProgBox: return "progbox";
  }
  return "?";
}

std::optional<Kind> kind_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Kind::ProgBox); ++i) {
    auto k = static_cast<Kind>(i);
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

Formula Formula::make(Kind kind, std::string name, std::vector<Formula> children, ProgramPtr prog) {
  std::size_t h = static_cast<std::size_t>(kind) * 1315423911u;
  h = mix(h, std::hash<std::string>{}(name));
  for (const auto& c : children) h = mix(h, c.hash());
  if (prog) h = mix(h, std::hash<std::string>{}(prog->to_string()));
  auto node = std::make_shared<Node>(Node{kind, std::move(name), std::move(children), std::move(prog), h});
  return Formula(std::move(node));
}

Formula Formula::top() {
  static const Formula t = make(Kind::True, "", {});
  return t;
}
Formula Formula::bottom() {
  static const Formula f = make(Kind::False, "", {});
  return f;
}
Formula Formula::prop(std::string name) { return make(Kind::Prop, std::move(name), {}); }
Formula Formula::neg_prop(std::string name) { return make(Kind::NegProp, std::move(name), {}); }
Formula Formula::negation(Formula f) { return make(Kind::Not, "", {std::move(f)}); }
Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) return top();
  if (fs.size() == 1) return fs.front();
  return make(Kind::And, "", std::move(fs));
}
Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) return bottom();
  if (fs.size() == 1) return fs.front();
  return make(Kind::Or, "", std::move(fs));
}
Formula Formula::diamond(std::string action, Formula f) { return make(Kind::Diamond, std::move(action), {std::move(f)}); }
Formula Formula::box(std::string action, Formula f) { return make(Kind::Box, std::move(action), {std::move(f)}); }
Formula Formula::var(std::string name) { return make(Kind::Var, std::move(name), {}); }
Formula Formula::mu(std::string name, Formula body) { return make(Kind::Mu, std::move(name), {std::move(body)}); }
Formula Formula::nu(std::string name, Formula body) { return make(Kind::Nu, std::move(name), {std::move(body)}); }
Formula Formula::nabla(std::string action, std::vector<Formula> fs) {
  return make(Kind::Nabla, std::move(action), std::move(fs));
}
Formula Formula::color(Color c, const std::vector<std::string>& universe) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < universe.size(); ++i)
    lits.push_back(((c >> i) & 1) ? prop(universe[i]) : neg_prop(universe[i]));
  return make(Kind::Color, "", std::move(lits));
}
Formula Formula::prog_diamond(ProgramPtr prog, Formula f) {
  return make(Kind::ProgDiamond, "", {std::move(f)}, std::move(prog));
}
Formula Formula::prog_box(ProgramPtr prog, Formula f) {
  return make(Kind::ProgBox, "", {std::move(f)}, std::move(prog));
}

Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
std::span<const Formula> Formula::children() const { return node_->children; }
const ProgramPtr& Formula::program() const { return node_->prog; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->hash != other.node_->hash || node_->kind != other.node_->kind ||
      node_->name != other.node_->name || node_->children.size() != other.node_->children.size())
    return false;
  if ((node_->prog == nullptr) != (other.node_->prog == nullptr)) return false;
  if (node_->prog && node_->prog->to_string() != other.node_->prog->to_string()) return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i)
    if (node_->children[i] != other.node_->children[i]) return false;
  return true;
}

namespace {

// precedence: or 1, and 2, unary 3
void print(const Formula& f, int ctx, std::string& out) {
  auto paren = [&](int prec, auto&& body) {
    bool p = prec < ctx;
    if (p) out += '(';
    body();
    if (p) out += ')';
  };
  auto print_unary_child = [&](const Formula& c) {
    if (c.is_fixpoint()) {
      out += '(';
      print(c, 0, out);
      out += ')';
    } else {
      print(c, 3, out);
    }
  };
  switch (f.kind()) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::Prop:
    case Kind::Var: out += f.name(); return;
    case Kind::NegProp: out += "!" + f.name(); return;
    case Kind::Not:
      out += '!';
      print_unary_child(f.child());
      return;
    case Kind::And:
    case Kind::Color:
    case Kind::Or: {
      bool is_or = f.kind() == Kind::Or;
      if (f.children().empty()) {
        out += is_or ? "false" : "true";
        return;
      }
      int prec = is_or ? 1 : 2;
      paren(prec, [&] {
        bool first = true;
        for (const auto& c : f.children()) {
          if (!first) out += is_or ? " | " : " & ";
          first = false;
          if (c.is_fixpoint()) {
            out += '(';
            print(c, 0, out);
            out += ')';
          } else {
            print(c, prec + 1, out);
          }
        }
      });
      return;
    }
    case Kind::Diamond:
    case Kind::Box:
      out += f.kind() == Kind::Diamond ? "<" + f.name() + ">" : "[" + f.name() + "]";
      print_unary_child(f.child());
      return;
    case Kind::ProgDiamond:
    case Kind::ProgBox: {
      auto p = f.program()->to_string();
      out += f.kind() == Kind::ProgDiamond ? "<" + p + ">" : "[" + p + "]";
      print_unary_child(f.child());
      return;
    }
    case Kind::Mu:
    case Kind::Nu:
      paren(1, [&] {
        out += f.kind() == Kind::Mu ? "mu " : "nu ";
        out += f.name() + ". ";
        print(f.child(), 0, out);
      });
      return;
    case Kind::Nabla: {
      out += "nabla{";
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += ", ";
        first = false;
        print(c, 0, out);
      }
      out += "}";
      return;
    }
  }
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok : std::uint8_t {
  End, Ident, True, False, Mu, Nu, Nabla, Bang, Amp, Bar, LAngle, RAngle, LBrack, RBrack,
  LParen, RParen, LBrace, RBrace, Dot, Comma, Semi, Plus, Star,
};

struct Token {
  Tok tok;
  std::string text;
  std::size_t offset;
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
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && is_ident_char(s[j])) ++j;
      std::string w(s.substr(i, j - i));
      Tok t = Tok::Ident;
      if (w == "true") t = Tok::True;
      else if (w == "false") t = Tok::False;
      else if (w == "mu") t = Tok::Mu;
      else if (w == "nu") t = Tok::Nu;
      else if (w == "nabla") t = Tok::Nabla;
      out.push_back({t, w, i});
      i = j;
      continue;
    }
    Tok t;
    switch (c) {
      case '!': t = Tok::Bang; break;
      case '&': t = Tok::Amp; break;
      case '|': t = Tok::Bar; break;
      case '<': t = Tok::LAngle; break;
      case '>': t = Tok::RAngle; break;
      case '[': t = Tok::LBrack; break;
      case ']': t = Tok::RBrack; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case '{': t = Tok::LBrace; break;
      case '}': t = Tok::RBrace; break;
      case '.': t = Tok::Dot; break;
      case ',': t = Tok::Comma; break;
      case ';': t = Tok::Semi; break;
      case '+': t = Tok::Plus; break;
      case '*': t = Tok::Star; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({t, std::string(1, c), i});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : toks_(lex(text)), sig_(sig) {
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i)
      if (toks_[i].tok == Tok::Mu || toks_[i].tok == Tok::Nu)
        if (toks_[i + 1].tok == Tok::Ident) binder_names_.insert(toks_[i + 1].text);
  }

  Formula parse() {
    auto f = parse_or();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (peek().tok == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect(Tok t, const char* what) {
    if (peek().tok != t) throw ParseError(std::string("expected ") + what + ", found '" + peek().text + "'", peek().offset);
    return next();
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (accept(Tok::Bar)) parts.push_back(parse_and());
    return parts.size() == 1 ? parts.front() : Formula::make(Kind::Or, "", std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (accept(Tok::Amp)) parts.push_back(parse_unary());
    return parts.size() == 1 ? parts.front() : Formula::make(Kind::And, "", std::move(parts));
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.tok) {
      case Tok::Bang:
        next();
        return Formula::negation(parse_unary());
      case Tok::LAngle:
      case Tok::LBrack: {
        next();
        auto prog = parse_program();
        expect(t.tok == Tok::LAngle ? Tok::RAngle : Tok::RBrack, t.tok == Tok::LAngle ? "'>'" : "']'");
        auto body = parse_unary();
        bool dia = t.tok == Tok::LAngle;
        if (prog->op == Program::Op::Atom)
          return dia ? Formula::diamond(prog->action, body) : Formula::box(prog->action, body);
        return dia ? Formula::prog_diamond(prog, body) : Formula::prog_box(prog, body);
      }
      case Tok::Mu:
      case Tok::Nu: {
        next();
        const auto& v = expect(Tok::Ident, "variable name");
        if (sig_.has_prop(v.text) || sig_.has_action(v.text))
          throw ParseError("variable '" + v.text + "' clashes with a signature name", v.offset);
        expect(Tok::Dot, "'.'");
        bound_.push_back(v.text);
        auto body = parse_or();
        bound_.pop_back();
        return t.tok == Tok::Mu ? Formula::mu(v.text, body) : Formula::nu(v.text, body);
      }
      default:
        return parse_atom();
    }
  }

  Formula parse_atom() {
    const Token& t = next();
    switch (t.tok) {
      case Tok::True: return Formula::top();
      case Tok::False: return Formula::bottom();
      case Tok::Ident: {
        if (std::find(bound_.begin(), bound_.end(), t.text) != bound_.end()) return Formula::var(t.text);
        if (sig_.has_prop(t.text)) return Formula::prop(t.text);
        if (binder_names_.count(t.text)) throw ParseError("unbound variable '" + t.text + "'", t.offset);
        throw ParseError("undeclared proposition '" + t.text + "'", t.offset);
      }
      case Tok::LParen: {
        auto f = parse_or();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Nabla: {
        if (sig_.actions().size() != 1)
          throw ParseError("nabla requires a signature with exactly one action", t.offset);
        expect(Tok::LBrace, "'{'");
        std::vector<Formula> members;
        if (peek().tok != Tok::RBrace) {
          members.push_back(parse_or());
          while (accept(Tok::Comma)) members.push_back(parse_or());
        }
        expect(Tok::RBrace, "'}'");
        return Formula::nabla(sig_.actions().front(), std::move(members));
      }
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.offset);
    }
  }

  // prog ::= seq ('+' seq)* ; seq ::= post (';' post)* ; post ::= prim '*'*
  ProgramPtr parse_program() {
    auto p = parse_seq();
    while (accept(Tok::Plus)) p = Program::choice(p, parse_seq());
    return p;
  }
  ProgramPtr parse_seq() {
    auto p = parse_post();
    while (accept(Tok::Semi)) p = Program::seq(p, parse_post());
    return p;
  }
  ProgramPtr parse_post() {
    ProgramPtr p;
    const Token& t = next();
    if (t.tok == Tok::Ident) {
      if (!sig_.has_action(t.text)) throw ParseError("undeclared action '" + t.text + "'", t.offset);
      p = Program::atom(t.text);
    } else if (t.tok == Tok::LParen) {
      p = parse_program();
      expect(Tok::RParen, "')'");
    } else {
      throw ParseError("expected action, found '" + t.text + "'", t.offset);
    }
    while (accept(Tok::Star)) p = Program::star(p);
    return p;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<std::string> bound_;
  std::set<std::string> binder_names_;
};

std::vector<std::string> content_lines(std::string_view contents) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      lines.emplace_back();
      continue;
    }
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  if (text.find('?') != std::string_view::npos) {
    throw ParseError("tests are not supported in programs", text.find('?'));
  }
  return Parser(text, sig).parse();
}

FormulaFile parse_formula_file(std::string_view contents) {
  auto lines = content_lines(contents);
  std::size_t i = 0;
  while (i < lines.size() && lines[i].empty()) ++i;
  if (i == lines.size()) throw ParseError("missing signature header", 0);
  FormulaFile out;
  out.sig = Signature::parse_header(lines[i]);
  std::string body;
  for (++i; i < lines.size(); ++i) body += lines[i] + "\n";
  out.formula = parse_formula(body, out.sig);
  return out;
}

ProblemFile parse_problem_file(std::string_view contents) {
  auto lines = content_lines(contents);
  std::size_t i = 0;
  while (i < lines.size() && lines[i].empty()) ++i;
  if (i == lines.size()) throw ParseError("missing signature header", 0);
  ProblemFile out;
  out.sig = Signature::parse_header(lines[i]);
  std::string left, right;
  bool second = false;
  for (++i; i < lines.size(); ++i) {
    auto trimmed = lines[i];
    trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(), [](unsigned char ch) { return std::isspace(ch); }),
                  trimmed.end());
    if (trimmed == "---") {
      if (second) throw ParseError("problem file has more than two formulas", 0);
      second = true;
      continue;
    }
    (second ? right : left) += lines[i] + "\n";
  }
  if (!second) throw ParseError("problem file needs two formulas separated by '---'", 0);
  out.left = parse_formula(left, out.sig);
  out.right = parse_formula(right, out.sig);
  return out;
}

}  // namespace musep
