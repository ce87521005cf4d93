#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "musep/formula.hpp"

namespace musep {

namespace {

// A node is "plain" when its subtree has no variables, binders or programs.
// Plain subtrees are rewritten context-free, so rewriters memoise them by node
// identity; this keeps large shared separators linear to process.
class PlainCache {
 public:
  bool plain(const Formula& f) {
    auto it = cache_.find(f.id());
    if (it != cache_.end()) return it->second;
    bool p = true;
    switch (f.kind()) {
      case Kind::Var:
      case Kind::Mu:
      case Kind::Nu:
      case Kind::ProgDiamond:
      case Kind::ProgBox:
        p = false;
        break;
      default:
        for (const auto& c : f.children())
          if (!plain(c)) {
            p = false;
            break;
          }
    }
    cache_.emplace(f.id(), p);
    return p;
  }

 private:
  std::unordered_map<const void*, bool> cache_;
};

Formula rebuild(const Formula& f, std::vector<Formula> children) {
  return Formula::make(f.kind(), f.name(), std::move(children), f.program());
}

// ---------------------------------------------------------------------------

class PdlTranslator {
 public:
  Formula run(const Formula& f) {
    if (plain_.plain(f)) return f;
    switch (f.kind()) {
      case Kind::ProgDiamond: return dia(*f.program(), run(f.child()));
      case Kind::ProgBox: return box(*f.program(), run(f.child()));
      default: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(run(c));
        return rebuild(f, std::move(cs));
      }
    }
  }

 private:
  std::string fresh() { return "_p" + std::to_string(counter_++); }

  Formula dia(const Program& p, const Formula& body) {
    switch (p.op) {
      case Program::Op::Atom: return Formula::diamond(p.action, body);
      case Program::Op::Seq: return dia(*p.lhs, dia(*p.rhs, body));
      case Program::Op::Choice: return Formula::disj(dia(*p.lhs, body), dia(*p.rhs, body));
      case Program::Op::Star: {
        auto x = fresh();
        return Formula::mu(x, Formula::disj(body, dia(*p.lhs, Formula::var(x))));
      }
    }
    return body;
  }

  Formula box(const Program& p, const Formula& body) {
    switch (p.op) {
      case Program::Op::Atom: return Formula::box(p.action, body);
      case Program::Op::Seq: return box(*p.lhs, box(*p.rhs, body));
      case Program::Op::Choice: return Formula::conj(box(*p.lhs, body), box(*p.rhs, body));
      case Program::Op::Star: {
        auto x = fresh();
        return Formula::nu(x, Formula::conj(body, box(*p.lhs, Formula::var(x))));
      }
    }
    return body;
  }

  PlainCache plain_;
  int counter_ = 0;
};

// ---------------------------------------------------------------------------

class SugarExpander {
 public:
  Formula run(const Formula& f) {
    auto it = memo_.find(f.id());
    if (it != memo_.end()) return it->second;
    std::vector<Formula> cs;
    for (const auto& c : f.children()) cs.push_back(run(c));
    Formula out;
    switch (f.kind()) {
      case Kind::Nabla: {
        std::vector<Formula> parts;
        for (const auto& c : cs) parts.push_back(Formula::diamond(f.name(), c));
        parts.push_back(Formula::box(f.name(), Formula::disj(cs)));
        out = Formula::conj(std::move(parts));
        break;
      }
      case Kind::Color:
        out = Formula::conj(std::move(cs));
        break;
      default:
        out = rebuild(f, std::move(cs));
    }
    // Memoising non-plain nodes by identity is still sound here: the
    // expansion does not depend on the binding context.
    memo_.emplace(f.id(), out);
    return out;
  }

 private:
  std::unordered_map<const void*, Formula> memo_;
};

// ---------------------------------------------------------------------------

class NnfConverter {
 public:
  Formula run(const Formula& f, bool positive) {
    bool plain = plain_.plain(f);
    if (plain) {
      auto it = memo_[positive].find(f.id());
      if (it != memo_[positive].end()) return it->second;
    }
    Formula out = convert(f, positive);
    if (plain) memo_[positive].emplace(f.id(), out);
    return out;
  }

 private:
  Formula convert(const Formula& f, bool pos) {
    switch (f.kind()) {
      case Kind::True: return pos ? Formula::top() : Formula::bottom();
      case Kind::False: return pos ? Formula::bottom() : Formula::top();
      case Kind::Prop: return pos ? f : Formula::neg_prop(f.name());
      case Kind::NegProp: return pos ? f : Formula::prop(f.name());
      case Kind::Not: return run(f.child(), !pos);
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(run(c, pos));
        bool is_and = (f.kind() == Kind::And) == pos;
        return Formula::make(is_and ? Kind::And : Kind::Or, "", std::move(cs));
      }
      case Kind::Diamond:
      case Kind::Box: {
        bool dia = (f.kind() == Kind::Diamond) == pos;
        auto c = run(f.child(), pos);
        return dia ? Formula::diamond(f.name(), c) : Formula::box(f.name(), c);
      }
      case Kind::Var: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->first == f.name()) {
            if (it->second != pos)
              throw FormulaError("fixpoint variable '" + f.name() + "' occurs under an odd number of negations");
            return f;
          }
        }
        if (!pos) throw FormulaError("free variable '" + f.name() + "' occurs negated");
        return f;
      }
      case Kind::Mu:
      case Kind::Nu: {
        scope_.emplace_back(f.name(), pos);
        auto body = run(f.child(), pos);
        scope_.pop_back();
        bool mu = (f.kind() == Kind::Mu) == pos;
        return mu ? Formula::mu(f.name(), body) : Formula::nu(f.name(), body);
      }
      default:
        throw FormulaError("to_nnf: unexpanded sugar node '" + std::string(kind_name(f.kind())) + "'");
    }
  }

  PlainCache plain_;
  std::unordered_map<const void*, Formula> memo_[2];
  std::vector<std::pair<std::string, bool>> scope_;
};

// ---------------------------------------------------------------------------

class Renamer {
 public:
  Formula run(const Formula& f) {
    if (plain_.plain(f)) return f;
    switch (f.kind()) {
      case Kind::Var: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->first == f.name()) return Formula::var(it->second);
        return f;
      }
      case Kind::Mu:
      case Kind::Nu: {
        auto fresh = "x" + std::to_string(counter_++);
        scope_.emplace_back(f.name(), fresh);
        auto body = run(f.child());
        scope_.pop_back();
        return f.kind() == Kind::Mu ? Formula::mu(fresh, body) : Formula::nu(fresh, body);
      }
      default: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(run(c));
        return rebuild(f, std::move(cs));
      }
    }
  }

 private:
  PlainCache plain_;
  std::vector<std::pair<std::string, std::string>> scope_;
  int counter_ = 0;
};

// ---------------------------------------------------------------------------

bool occurs_free(const Formula& f, const std::string& x, std::unordered_map<const void*, bool>& memo) {
  auto it = memo.find(f.id());
  if (it != memo.end()) return it->second;
  bool r = false;
  if (f.kind() == Kind::Var) {
    r = f.name() == x;
  } else if (f.is_fixpoint() && f.name() == x) {
    r = false;
  } else {
    for (const auto& c : f.children())
      if (occurs_free(c, x, memo)) {
        r = true;
        break;
      }
  }
  memo.emplace(f.id(), r);
  return r;
}

bool occurs_free(const Formula& f, const std::string& x) {
  std::unordered_map<const void*, bool> memo;
  return occurs_free(f, x, memo);
}

// Replaces free occurrences of x by r (r's free variables are never captured
// because bound names are unique when this runs).
Formula substitute(const Formula& f, const std::string& x, const Formula& r,
                   std::unordered_map<const void*, Formula>& memo) {
  auto it = memo.find(f.id());
  if (it != memo.end()) return it->second;
  Formula out;
  if (f.kind() == Kind::Var) {
    out = f.name() == x ? r : f;
  } else if (f.is_fixpoint() && f.name() == x) {
    out = f;
  } else if (f.children().empty()) {
    out = f;
  } else {
    std::vector<Formula> cs;
    for (const auto& c : f.children()) cs.push_back(substitute(c, x, r, memo));
    out = rebuild(f, std::move(cs));
  }
  memo.emplace(f.id(), out);
  return out;
}

Formula simplify_node(Kind kind, const std::string& name, std::vector<Formula> cs) {
  if (kind == Kind::And || kind == Kind::Or) {
    Kind unit = kind == Kind::And ? Kind::True : Kind::False;
    Kind zero = kind == Kind::And ? Kind::False : Kind::True;
    std::vector<Formula> flat;
    for (auto& c : cs) {
      if (c.kind() == unit) continue;
      if (c.kind() == zero) return c;
      if (c.kind() == kind) {
        for (const auto& g : c.children()) flat.push_back(g);
      } else {
        flat.push_back(c);
      }
    }
    std::vector<Formula> uniq;
    for (auto& c : flat) {
      bool dup = false;
      for (const auto& u : uniq)
        if (u.hash() == c.hash() && u == c) {
          dup = true;
          break;
        }
      if (!dup) uniq.push_back(c);
    }
    if (uniq.empty()) return kind == Kind::And ? Formula::top() : Formula::bottom();
    if (uniq.size() == 1) return uniq.front();
    return Formula::make(kind, "", std::move(uniq));
  }
  if (kind == Kind::Diamond && cs[0].kind() == Kind::False) return Formula::bottom();
  if (kind == Kind::Box && cs[0].kind() == Kind::True) return Formula::top();
  if (kind == Kind::Mu || kind == Kind::Nu) {
    if (!occurs_free(cs[0], name)) return cs[0];
  }
  return Formula::make(kind, name, std::move(cs));
}

class Guarder {
 public:
  Formula run(const Formula& f) {
    bool plain = plain_.plain(f);
    if (plain) {
      auto it = memo_.find(f.id());
      if (it != memo_.end()) return it->second;
    }
    Formula out;
    if (f.children().empty()) {
      out = f;
    } else if (f.is_fixpoint()) {
      auto body = run(f.child());
      body = unfold(body, f.name());
      body = replace_unguarded(body, f.name(), f.kind() == Kind::Mu ? Formula::bottom() : Formula::top());
      out = simplify_node(f.kind(), f.name(), {body});
    } else {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(run(c));
      out = simplify_node(f.kind(), f.name(), std::move(cs));
    }
    if (plain) memo_.emplace(f.id(), out);
    return out;
  }

 private:
  // Unguarded occurrences of x below inner fixpoints are exposed by
  // unfolding those fixpoints once (their own variables are already guarded).
  Formula unfold(const Formula& f, const std::string& x) {
    switch (f.kind()) {
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(unfold(c, x));
        return rebuild(f, std::move(cs));
      }
      case Kind::Mu:
      case Kind::Nu: {
        if (!has_unguarded(f.child(), x)) return f;
        std::unordered_map<const void*, Formula> memo;
        auto unfolded = substitute(f.child(), f.name(), f, memo);
        return unfold(unfolded, x);
      }
      default:
        return f;
    }
  }

  bool has_unguarded(const Formula& f, const std::string& x) {
    switch (f.kind()) {
      case Kind::Var: return f.name() == x;
      case Kind::And:
      case Kind::Or:
        for (const auto& c : f.children())
          if (has_unguarded(c, x)) return true;
        return false;
      case Kind::Mu:
      case Kind::Nu: return f.name() != x && has_unguarded(f.child(), x);
      default: return false;
    }
  }

  Formula replace_unguarded(const Formula& f, const std::string& x, const Formula& r) {
    switch (f.kind()) {
      case Kind::Var: return f.name() == x ? r : f;
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(replace_unguarded(c, x, r));
        return simplify_node(f.kind(), "", std::move(cs));
      }
      default: return f;
    }
  }

  PlainCache plain_;
  std::unordered_map<const void*, Formula> memo_;
};

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }

}  // namespace

Formula translate_pdl(const Formula& f) { return PdlTranslator().run(f); }

Formula expand_sugar(const Formula& f) { return SugarExpander().run(f); }

Formula to_nnf(const Formula& f) {
  auto core = expand_sugar(translate_pdl(f));
  return alpha_rename(NnfConverter().run(core, true));
}

Formula alpha_rename(const Formula& f) { return Renamer().run(f); }

Formula guard(const Formula& f) {
  // unique names are required by the unfolding substitution
  return alpha_rename(Guarder().run(alpha_rename(f)));
}

Formula normalize(const Formula& f) { return guard(to_nnf(f)); }

Formula negate_normalized(const Formula& f) { return normalize(Formula::negation(f)); }

// ---------------------------------------------------------------------------
// analyze

namespace {

struct Measures {
  std::uint64_t size, depth, modal_depth;
};

class Analyzer {
 public:
  FormulaInfo run(const Formula& f) {
    FormulaInfo info;
    auto m = measure(f);
    info.size = m.size;
    info.depth = m.depth;
    info.modal_depth = m.modal_depth;
    std::set<std::string> props, actions;
    collect(f, props, actions);
    info.props.assign(props.begin(), props.end());
    info.actions.assign(actions.begin(), actions.end());
    auto fv = free_vars(f);
    info.free_vars.assign(fv.begin(), fv.end());
    info.is_modal = modal_;
    info.nnf = nnf_;
    info.guarded = unguarded_ok(f);
    std::vector<std::pair<std::string, bool>> env;
    info.alternation_free = alternation_free(f, true, env, info.alternation_witness);
    if (info.is_modal) info.alternation_free = true;
    return info;
  }

 private:
  Measures measure(const Formula& f) {
    auto it = measures_.find(f.id());
    if (it != measures_.end()) return it->second;
    Measures m{1, 0, 0};
    bool modal_node = f.is_modality() || f.kind() == Kind::Nabla || f.kind() == Kind::ProgDiamond ||
                      f.kind() == Kind::ProgBox;
    switch (f.kind()) {
      case Kind::Var:
      case Kind::Mu:
      case Kind::Nu: modal_ = false; break;
      case Kind::ProgDiamond:
      case Kind::ProgBox: {
        if (has_star(*f.program())) modal_ = false;
        nnf_ = false;
        break;
      }
      case Kind::Not:
      case Kind::Nabla:
      case Kind::Color: nnf_ = false; break;
      default: break;
    }
    for (const auto& c : f.children()) {
      auto cm = measure(c);
      m.size = sat_add(m.size, cm.size);
      m.depth = std::max(m.depth, cm.depth + 1);
      m.modal_depth = std::max(m.modal_depth, cm.modal_depth);
    }
    if (modal_node) {
      std::uint64_t k = 1;
      if (f.program()) k = program_length(*f.program());
      m.modal_depth = sat_add(m.modal_depth, k);
    }
    measures_.emplace(f.id(), m);
    return m;
  }

  static bool has_star(const Program& p) {
    if (p.op == Program::Op::Star) return true;
    return (p.lhs && has_star(*p.lhs)) || (p.rhs && has_star(*p.rhs));
  }

  static std::uint64_t program_length(const Program& p) {
    switch (p.op) {
      case Program::Op::Atom: return 1;
      case Program::Op::Seq: return program_length(*p.lhs) + program_length(*p.rhs);
      case Program::Op::Choice: return std::max(program_length(*p.lhs), program_length(*p.rhs));
      case Program::Op::Star: return kSat;
    }
    return 1;
  }

  static void collect_program(const Program& p, std::set<std::string>& actions) {
    if (p.op == Program::Op::Atom) actions.insert(p.action);
    if (p.lhs) collect_program(*p.lhs, actions);
    if (p.rhs) collect_program(*p.rhs, actions);
  }

  void collect(const Formula& f, std::set<std::string>& props, std::set<std::string>& actions) {
    if (!visited_.insert(f.id()).second) return;
    switch (f.kind()) {
      case Kind::Prop:
      case Kind::NegProp: props.insert(f.name()); break;
      case Kind::Diamond:
      case Kind::Box:
      case Kind::Nabla: actions.insert(f.name()); break;
      case Kind::ProgDiamond:
      case Kind::ProgBox: collect_program(*f.program(), actions); break;
      default: break;
    }
    for (const auto& c : f.children()) collect(c, props, actions);
  }

  const std::set<std::string>& free_vars(const Formula& f) {
    auto it = free_.find(f.id());
    if (it != free_.end()) return it->second;
    std::set<std::string> s;
    if (f.kind() == Kind::Var) {
      s.insert(f.name());
    } else {
      for (const auto& c : f.children()) {
        const auto& cs = free_vars(c);
        s.insert(cs.begin(), cs.end());
      }
      if (f.is_fixpoint()) s.erase(f.name());
    }
    return free_.emplace(f.id(), std::move(s)).first->second;
  }

  // free variables occurring outside the scope of any modality
  const std::set<std::string>& unguarded(const Formula& f) {
    auto it = unguarded_.find(f.id());
    if (it != unguarded_.end()) return it->second;
    std::set<std::string> s;
    if (f.kind() == Kind::Var) {
      s.insert(f.name());
    } else if (!(f.is_modality() || f.kind() == Kind::Nabla || f.kind() == Kind::ProgDiamond ||
                 f.kind() == Kind::ProgBox)) {
      for (const auto& c : f.children()) {
        const auto& cs = unguarded(c);
        s.insert(cs.begin(), cs.end());
      }
      if (f.is_fixpoint()) {
        if (s.count(f.name())) guarded_ = false;
        s.erase(f.name());
      }
    } else {
      for (const auto& c : f.children()) unguarded(c);
    }
    return unguarded_.emplace(f.id(), std::move(s)).first->second;
  }

  bool unguarded_ok(const Formula& f) {
    unguarded(f);
    return guarded_;
  }

  bool alternation_free(const Formula& f, bool pos, std::vector<std::pair<std::string, bool>>& env,
                        std::string& witness) {
    const auto& fv = free_vars(f);
    bool closed_binder_free = fv.empty() && !contains_binder(f);
    if (closed_binder_free) return true;
    if (f.kind() == Kind::Not) return alternation_free(f.child(), !pos, env, witness);
    if (f.is_fixpoint()) {
      bool is_mu = (f.kind() == Kind::Mu) == pos;
      for (const auto& y : fv) {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
          if (it->first != y) continue;
          if (it->second != is_mu) {
            witness = std::string(is_mu ? "mu " : "nu ") + f.name() + " depends on " + (it->second ? "mu " : "nu ") +
                      y;
            return false;
          }
          break;
        }
      }
      env.emplace_back(f.name(), is_mu);
      bool ok = alternation_free(f.child(), pos, env, witness);
      env.pop_back();
      return ok;
    }
    for (const auto& c : f.children())
      if (!alternation_free(c, pos, env, witness)) return false;
    return true;
  }

  bool contains_binder(const Formula& f) {
    auto it = binder_.find(f.id());
    if (it != binder_.end()) return it->second;
    bool r = f.is_fixpoint() || f.kind() == Kind::ProgDiamond || f.kind() == Kind::ProgBox;
    if (!r)
      for (const auto& c : f.children())
        if (contains_binder(c)) {
          r = true;
          break;
        }
    binder_.emplace(f.id(), r);
    return r;
  }

  std::unordered_map<const void*, Measures> measures_;
  std::unordered_map<const void*, std::set<std::string>> free_;
  std::unordered_map<const void*, std::set<std::string>> unguarded_;
  std::unordered_map<const void*, bool> binder_;
  std::unordered_set<const void*> visited_;
  bool modal_ = true;
  bool nnf_ = true;
  bool guarded_ = true;
};

}  // namespace

FormulaInfo analyze(const Formula& f) { return Analyzer().run(f); }

void require_alternation_free(const Formula& f) {
  auto info = analyze(f);
  if (!info.alternation_free)
    throw FormulaError("alternating fixpoints unsupported (" + info.alternation_witness + ")");
}

}  // namespace musep
