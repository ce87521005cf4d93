#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace musep {

/// Finite modal signature: ordered action and proposition names.
///
/// Colors (valuations of a single point) are bitmasks over `props`; bit i is
/// set iff props[i] holds. The canonical color order is the numeric order of
/// the mask.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> actions, std::vector<std::string> props);

  /// Parses a header line of the form `sig actions=A,B props=p,q`.
  static Signature parse_header(std::string_view line);
  std::string header() const;

  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& props() const { return props_; }

  std::optional<std::size_t> action_index(std::string_view name) const;
  std::optional<std::size_t> prop_index(std::string_view name) const;
  bool has_action(std::string_view name) const { return action_index(name).has_value(); }
  bool has_prop(std::string_view name) const { return prop_index(name).has_value(); }

  /// Union keeping this signature's order first.
  Signature merged(const Signature& other) const;

  bool operator==(const Signature& other) const = default;

 private:
  std::vector<std::string> actions_;
  std::vector<std::string> props_;
};

using Color = std::uint64_t;

/// Test-free regular program over actions, used under PDL modalities.
struct Program {
  enum class Op : std::uint8_t { Atom, Seq, Choice, Star };
  Op op = Op::Atom;
  std::string action;
  std::shared_ptr<const Program> lhs;
  std::shared_ptr<const Program> rhs;

  static std::shared_ptr<const Program> atom(std::string a);
  static std::shared_ptr<const Program> seq(std::shared_ptr<const Program> l,
                                            std::shared_ptr<const Program> r);
  static std::shared_ptr<const Program> choice(std::shared_ptr<const Program> l,
                                               std::shared_ptr<const Program> r);
  static std::shared_ptr<const Program> star(std::shared_ptr<const Program> p);

  std::string to_string() const;
};
using ProgramPtr = std::shared_ptr<const Program>;

enum class Kind : std::uint8_t {
  True,
  False,
  Prop,
  NegProp,
  Not,
  And,
  Or,
  Diamond,
  Box,
  Var,
  Mu,
  Nu,
  // sugar, removed by expand_sugar / translate_pdl
  Nabla,
  Color,
  ProgDiamond,
  ProgBox,
};

std::string_view kind_name(Kind k);
std::optional<Kind> kind_from_name(std::string_view name);

/// Immutable formula node handle with value semantics.
///
/// Nodes are reference counted and may be shared, so a `Formula` is in general
/// a DAG in memory; all traversals that need tree semantics (size) do so by
/// memoised dynamic programming. Equality is structural.
class Formula {
 public:
  struct Node;

  Formula() = default;

  static Formula top();
  static Formula bottom();
  static Formula prop(std::string name);
  static Formula neg_prop(std::string name);
  static Formula negation(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{std::move(a), std::move(b)}); }
  static Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{std::move(a), std::move(b)}); }
  static Formula diamond(std::string action, Formula f);
  static Formula box(std::string action, Formula f);
  static Formula var(std::string name);
  static Formula mu(std::string name, Formula body);
  static Formula nu(std::string name, Formula body);
  static Formula nabla(std::string action, std::vector<Formula> fs);
  /// Color literal over `universe`: props with a set bit positive, the rest negated.
  static Formula color(Color c, const std::vector<std::string>& universe);
  static Formula prog_diamond(ProgramPtr prog, Formula f);
  static Formula prog_box(ProgramPtr prog, Formula f);
  /// Generic constructor used by rewriters; no simplification.
  static Formula make(Kind kind, std::string name, std::vector<Formula> children,
                      ProgramPtr prog = nullptr);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const std::string& name() const;
  std::span<const Formula> children() const;
  const Formula& child(std::size_t i = 0) const { return children()[i]; }
  const ProgramPtr& program() const;
  std::size_t hash() const;
  /// Identity of the shared node (for memo tables).
  const void* id() const { return node_.get(); }

  bool is_fixpoint() const { return kind() == Kind::Mu || kind() == Kind::Nu; }
  bool is_modality() const { return kind() == Kind::Diamond || kind() == Kind::Box; }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  /// Core-grammar text; round-trips through parse_formula.
  std::string to_string() const;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Formula> children;
  ProgramPtr prog;
  std::size_t hash;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses one formula in the text grammar. No normalisation is applied.
Formula parse_formula(std::string_view text, const Signature& sig);

/// A formula file: `sig ...` header line followed by the formula text.
/// Lines starting with '#' are comments.
struct FormulaFile {
  Signature sig;
  Formula formula;
};
FormulaFile parse_formula_file(std::string_view contents);

/// Problem file: header line, then two formulas separated by a line `---`.
struct ProblemFile {
  Signature sig;
  Formula left;
  Formula right;
};
ProblemFile parse_problem_file(std::string_view contents);

// ---------------------------------------------------------------------------
// Normalisation

/// Pushes negation to propositions. Sugar (nabla, colors, PDL programs) is
/// expanded first. Throws FormulaError if a fixpoint variable would occur
/// negatively.
Formula to_nnf(const Formula& f);

/// Expands nabla and color literals into the core grammar.
Formula expand_sugar(const Formula& f);

/// Replaces program modalities by core modalities and fixpoints.
/// Fresh variables are named `_pN`; run alpha_rename afterwards for stable names.
Formula translate_pdl(const Formula& f);

/// Removes unguarded fixpoint variable occurrences (input in NNF).
/// The result is alpha-renamed.
Formula guard(const Formula& f);

/// Renames bound variables to x0, x1, ... in pre-order.
Formula alpha_rename(const Formula& f);

/// translate_pdl, to_nnf, guard: the form every engine component expects.
Formula normalize(const Formula& f);

/// Negation followed by normalisation.
Formula negate_normalized(const Formula& f);

struct FormulaInfo {
  std::uint64_t size = 0;  // syntax-tree node count (saturating)
  std::uint64_t depth = 0;
  std::uint64_t modal_depth = 0;
  bool alternation_free = true;
  bool guarded = true;
  bool is_modal = true;
  bool nnf = true;
  std::vector<std::string> props;
  std::vector<std::string> actions;
  std::vector<std::string> free_vars;
  /// Human-readable reason when not alternation-free.
  std::string alternation_witness;
};

FormulaInfo analyze(const Formula& f);

/// Throws FormulaError naming the offending binder pair if f is not alternation-free.
void require_alternation_free(const Formula& f);

}  // namespace musep
